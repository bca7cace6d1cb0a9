// Client-side mirror of the service's playbook validation: same codes,
// same JSON paths, same (path, code) ordering. Used for live feedback in
// the editor; the server re-validates authoritatively on save.

import type { Violation } from "./api.js";

const UUID4 = "[0-9a-f]{8}-[0-9a-f]{4}-4[0-9a-f]{3}-[89ab][0-9a-f]{3}-[0-9a-f]{12}";
const PLAYBOOK_ID = new RegExp(`^playbook--${UUID4}$`);
const IDENTITY_ID = new RegExp(`^identity--${UUID4}$`);
const START_STEP_ID = new RegExp(`^start--${UUID4}$`);
const MARKING_ID = new RegExp(`^marking-[a-z][a-z0-9-]*--${UUID4}$`);
const RFC3339 = /^(\d{4})-(\d{2})-(\d{2})[Tt](\d{2}):(\d{2}):(\d{2})(?:\.(\d+))?([Zz]|[+-]\d{2}:\d{2})$/;

const MANDATORY = [
  "type",
  "spec_version",
  "id",
  "name",
  "created",
  "modified",
  "created_by",
  "workflow_start",
  "workflow",
];

const STEP_TYPES = new Set([
  "start",
  "end",
  "action",
  "playbook-action",
  "parallel",
  "if-condition",
  "while-condition",
  "switch-condition",
]);

const SINGLE_REFS = ["on_completion", "on_success", "on_failure", "on_true", "on_false"];
const SCORES = ["priority", "severity", "impact"];
const STRING_LISTS = ["labels", "playbook_types", "playbook_activities", "industry_sectors"];

type Doc = Record<string, unknown>;

export function parseTimestamp(value: unknown): number | null {
  if (typeof value !== "string") return null;
  const match = RFC3339.exec(value);
  if (!match) return null;
  const [, y, mo, d, h, mi, s, frac, offset] = match;
  const ms = frac ? Number((frac + "000").slice(0, 3)) : 0;
  let epoch = Date.UTC(Number(y), Number(mo) - 1, Number(d), Number(h), Number(mi), Number(s), ms);
  if (offset && offset.toLowerCase() !== "z") {
    const sign = offset.startsWith("-") ? -1 : 1;
    const [oh, om] = offset.slice(1).split(":");
    epoch -= sign * (Number(oh) * 60 + Number(om)) * 60_000;
  }
  const check = new Date(epoch);
  if (check.getUTCMonth() !== Number(mo) - 1 || check.getUTCDate() !== Number(d)) {
    return null; // rolled-over month/day, e.g. 2025-13-01
  }
  return epoch;
}

export function validatePlaybook(doc: unknown): Violation[] {
  const violations: Violation[] = [];
  const flag = (code: string, path: string, message: string) =>
    violations.push({ code, path, message });

  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    return [{ code: "NOT_A_PLAYBOOK", path: "$", message: "document must be a JSON object" }];
  }
  const raw = doc as Doc;

  for (const prop of MANDATORY) {
    if (!(prop in raw)) flag("MISSING_PROPERTY", `$.${prop}`, `mandatory property ${prop} is absent`);
  }
  if ("type" in raw && raw.type !== "playbook") {
    flag("INVALID_TYPE", "$.type", 'type must be "playbook"');
  }
  if ("spec_version" in raw && raw.spec_version !== "cacao-2.0") {
    flag("INVALID_SPEC_VERSION", "$.spec_version", 'spec_version must be "cacao-2.0"');
  }
  if ("id" in raw && !(typeof raw.id === "string" && PLAYBOOK_ID.test(raw.id))) {
    flag("INVALID_IDENTIFIER", "$.id", "id must match playbook--<UUIDv4>");
  }
  if ("created_by" in raw && !(typeof raw.created_by === "string" && IDENTITY_ID.test(raw.created_by))) {
    flag("INVALID_IDENTIFIER", "$.created_by", "created_by must match identity--<UUIDv4>");
  }

  const stamps: Record<string, number | null> = {};
  for (const prop of ["created", "modified"]) {
    if (!(prop in raw)) continue;
    stamps[prop] = parseTimestamp(raw[prop]);
    if (stamps[prop] === null) {
      flag("INVALID_TIMESTAMP", `$.${prop}`, `${prop} must be an RFC 3339 UTC timestamp`);
    }
  }
  const created = stamps.created ?? null;
  const modified = stamps.modified ?? null;
  if (created !== null && modified !== null && modified < created) {
    flag("MODIFIED_BEFORE_CREATED", "$.modified", "modified precedes created");
  }

  if ("name" in raw && (typeof raw.name !== "string" || raw.name === "")) {
    flag("EMPTY_NAME", "$.name", "name must be a non-empty string");
  }

  for (const prop of SCORES) {
    if (!(prop in raw)) continue;
    const value = raw[prop];
    if (typeof value !== "number" || !Number.isInteger(value) || value < 0 || value > 100) {
      flag("VALUE_OUT_OF_RANGE", `$.${prop}`, `${prop} must be an integer in [0, 100]`);
    }
  }
  for (const prop of STRING_LISTS) {
    if (!(prop in raw)) continue;
    const value = raw[prop];
    if (!Array.isArray(value) || value.some((item) => typeof item !== "string")) {
      flag("INVALID_VALUE", `$.${prop}`, `${prop} must be a list of strings`);
    }
  }
  if ("revoked" in raw && typeof raw.revoked !== "boolean") {
    flag("INVALID_VALUE", "$.revoked", "revoked must be a boolean");
  }
  if ("signatures" in raw && !Array.isArray(raw.signatures)) {
    flag("INVALID_VALUE", "$.signatures", "signatures must be a list");
  }

  if ("markings" in raw) {
    const markings = raw.markings;
    if (!Array.isArray(markings)) {
      flag("INVALID_VALUE", "$.markings", "markings must be a list");
    } else {
      const definitions = raw.data_marking_definitions;
      const defined = new Set(
        definitions && typeof definitions === "object" ? Object.keys(definitions as Doc) : [],
      );
      markings.forEach((marking, index) => {
        const path = `$.markings[${index}]`;
        if (typeof marking !== "string" || !MARKING_ID.test(marking)) {
          flag("INVALID_IDENTIFIER", path, "marking reference must match marking-<type>--<UUIDv4>");
        } else if (!defined.has(marking)) {
          flag(
            "DANGLING_MARKING_REFERENCE",
            path,
            `marking ${marking} is not defined in data_marking_definitions`,
          );
        }
      });
    }
  }

  const workflow = raw.workflow;
  const workflowOk =
    "workflow" in raw &&
    typeof workflow === "object" &&
    workflow !== null &&
    !Array.isArray(workflow) &&
    Object.keys(workflow as Doc).length > 0;
  if ("workflow" in raw && !workflowOk) {
    flag("INVALID_WORKFLOW", "$.workflow", "workflow must be a non-empty object");
  }
  if (workflowOk) {
    checkWorkflow(raw, workflow as Record<string, unknown>, flag);
  }

  violations.sort((a, b) =>
    a.path === b.path ? a.code.localeCompare(b.code) : a.path < b.path ? -1 : 1,
  );
  return violations;
}

function checkWorkflow(
  raw: Doc,
  workflow: Record<string, unknown>,
  flag: (code: string, path: string, message: string) => void,
): void {
  if ("workflow_start" in raw) {
    const start = raw.workflow_start;
    if (typeof start !== "string" || !START_STEP_ID.test(start)) {
      flag("INVALID_IDENTIFIER", "$.workflow_start", "workflow_start must match start--<UUIDv4>");
    } else if (!(start in workflow)) {
      flag("DANGLING_WORKFLOW_START", "$.workflow_start", `workflow_start ${start} is not a workflow step`);
    } else {
      const step = workflow[start];
      if (step && typeof step === "object" && (step as Doc).type !== "start") {
        flag(
          "WORKFLOW_START_NOT_START",
          "$.workflow_start",
          "workflow_start must reference a step of type start",
        );
      }
    }
  }

  for (const [stepId, stepValue] of Object.entries(workflow)) {
    const base = `$.workflow.${stepId}`;
    if (typeof stepValue !== "object" || stepValue === null || Array.isArray(stepValue)) {
      flag("INVALID_STEP", base, "workflow step must be an object");
      continue;
    }
    const step = stepValue as Doc;
    const stepType = step.type;
    if (stepType === undefined || stepType === null) {
      flag("MISSING_STEP_TYPE", `${base}.type`, "step has no type");
      continue;
    }
    if (typeof stepType !== "string" || !STEP_TYPES.has(stepType)) {
      flag("INVALID_STEP_TYPE", `${base}.type`, `unknown step type ${JSON.stringify(stepType)}`);
      continue;
    }
    const commands = step.commands;
    if ((stepType === "start" || stepType === "end") && Array.isArray(commands) && commands.length) {
      flag("COMMANDS_ON_TERMINAL_STEP", `${base}.commands`, `${stepType} steps carry no commands`);
    }
    if ((stepType === "action" || stepType === "playbook-action") && commands !== undefined) {
      if (!hasNonEmptyCommand(commands)) {
        flag("EMPTY_COMMAND", `${base}.commands`, "action step needs at least one command with non-empty text");
      }
    }
    if (stepType === "parallel") {
      const next = step.next_steps;
      if (!Array.isArray(next) || next.length === 0) {
        flag("PARALLEL_WITHOUT_BRANCHES", `${base}.next_steps`, "parallel step must declare at least one branch");
      }
    }
    for (const field of SINGLE_REFS) {
      const target = step[field];
      if (typeof target === "string" && !(target in workflow)) {
        flag("DANGLING_STEP_REFERENCE", `${base}.${field}`, `referenced step ${target} does not exist`);
      }
    }
    const nextSteps = step.next_steps;
    if (Array.isArray(nextSteps)) {
      nextSteps.forEach((target, index) => {
        if (typeof target === "string" && !(target in workflow)) {
          flag(
            "DANGLING_STEP_REFERENCE",
            `${base}.next_steps[${index}]`,
            `referenced step ${target} does not exist`,
          );
        }
      });
    }
    const cases = step.cases;
    if (cases && typeof cases === "object" && !Array.isArray(cases)) {
      for (const [literal, target] of Object.entries(cases as Doc)) {
        if (typeof target === "string" && !(target in workflow)) {
          flag(
            "DANGLING_STEP_REFERENCE",
            `${base}.cases.${literal}`,
            `referenced step ${target} does not exist`,
          );
        }
      }
    }
  }
}

function hasNonEmptyCommand(commands: unknown): boolean {
  if (!Array.isArray(commands) || commands.length === 0) return false;
  return commands.some(
    (command) =>
      command &&
      typeof command === "object" &&
      typeof (command as Doc).command === "string" &&
      ((command as Doc).command as string).trim() !== "",
  );
}
