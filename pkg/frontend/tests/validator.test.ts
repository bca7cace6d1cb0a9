import { describe, expect, it } from "vitest";

import { parseTimestamp, validatePlaybook } from "../src/validator.js";
import { samplePlaybook, uuid4 } from "./helpers.js";

function expectSingle(doc: unknown, code: string, path: string): void {
  const violations = validatePlaybook(doc);
  expect(violations).toEqual([expect.objectContaining({ code, path })]);
}

describe("validatePlaybook", () => {
  it("accepts a well-formed document", () => {
    expect(validatePlaybook(samplePlaybook("ok"))).toEqual([]);
  });

  it("rejects non-objects", () => {
    expect(validatePlaybook("nope")[0]?.code).toBe("NOT_A_PLAYBOOK");
    expect(validatePlaybook([1, 2])[0]?.code).toBe("NOT_A_PLAYBOOK");
  });

  it("flags each deleted mandatory property once", () => {
    for (const prop of [
      "type",
      "spec_version",
      "id",
      "name",
      "created",
      "modified",
      "created_by",
      "workflow_start",
      "workflow",
    ]) {
      const doc = samplePlaybook("mutation");
      delete doc[prop];
      expectSingle(doc, "MISSING_PROPERTY", `$.${prop}`);
    }
  });

  it("flags literal and identifier corruption", () => {
    expectSingle({ ...samplePlaybook("x"), type: "indicator" }, "INVALID_TYPE", "$.type");
    expectSingle(
      { ...samplePlaybook("x"), spec_version: "cacao-1.1" },
      "INVALID_SPEC_VERSION",
      "$.spec_version",
    );
    expectSingle({ ...samplePlaybook("x"), id: "playbook-123" }, "INVALID_IDENTIFIER", "$.id");
    expectSingle(
      { ...samplePlaybook("x"), created_by: "identity--zzz" },
      "INVALID_IDENTIFIER",
      "$.created_by",
    );
  });

  it("flags timestamp problems", () => {
    expectSingle(
      { ...samplePlaybook("x"), created: "yesterday" },
      "INVALID_TIMESTAMP",
      "$.created",
    );
    const doc = samplePlaybook("x");
    doc.created = "2025-03-02T00:00:00.000Z";
    doc.modified = "2025-03-01T00:00:00.000Z";
    expectSingle(doc, "MODIFIED_BEFORE_CREATED", "$.modified");
  });

  it("flags name, ranges and list types", () => {
    expectSingle({ ...samplePlaybook("x"), name: "" }, "EMPTY_NAME", "$.name");
    expectSingle({ ...samplePlaybook("x"), severity: 250 }, "VALUE_OUT_OF_RANGE", "$.severity");
    expectSingle({ ...samplePlaybook("x"), labels: "oops" }, "INVALID_VALUE", "$.labels");
  });

  it("flags dangling workflow references", () => {
    const missing = `action--${uuid4()}`;

    const dangledStart = samplePlaybook("x");
    dangledStart.workflow_start = `start--${uuid4()}`;
    expectSingle(dangledStart, "DANGLING_WORKFLOW_START", "$.workflow_start");

    const dangledEdge = samplePlaybook("x");
    const startId = dangledEdge.workflow_start as string;
    dangledEdge.workflow[startId].on_completion = missing;
    expectSingle(
      dangledEdge,
      "DANGLING_STEP_REFERENCE",
      `$.workflow.${startId}.on_completion`,
    );
  });

  it("flags step-shape violations", () => {
    const startWithCommands = samplePlaybook("x");
    const startId = startWithCommands.workflow_start as string;
    startWithCommands.workflow[startId].commands = [{ type: "manual", command: "boom" }];
    expectSingle(
      startWithCommands,
      "COMMANDS_ON_TERMINAL_STEP",
      `$.workflow.${startId}.commands`,
    );

    const blankCommand = samplePlaybook("x");
    const actionId = Object.keys(blankCommand.workflow).find(
      (sid) => blankCommand.workflow[sid].type === "action",
    )!;
    blankCommand.workflow[actionId].commands = [{ type: "manual", command: "  " }];
    expectSingle(blankCommand, "EMPTY_COMMAND", `$.workflow.${actionId}.commands`);
  });

  it("reports deterministically sorted by path then code", () => {
    const doc = samplePlaybook("x");
    delete doc.name;
    doc.severity = -1;
    delete doc.created_by;
    const violations = validatePlaybook(doc);
    const keys = violations.map((v) => `${v.path}|${v.code}`);
    expect(keys).toEqual([...keys].sort());
    expect(violations).toHaveLength(3);
  });
});

describe("parseTimestamp", () => {
  it("parses RFC 3339 with offsets", () => {
    expect(parseTimestamp("2025-03-01T12:00:00.000Z")).toBe(
      Date.UTC(2025, 2, 1, 12, 0, 0, 0),
    );
    expect(parseTimestamp("2025-03-01T12:00:00+02:00")).toBe(
      Date.UTC(2025, 2, 1, 10, 0, 0, 0),
    );
  });

  it("rejects non-timestamps", () => {
    expect(parseTimestamp("2025-13-01T00:00:00Z")).toBeNull();
    expect(parseTimestamp("yesterday")).toBeNull();
    expect(parseTimestamp(42)).toBeNull();
  });
});
