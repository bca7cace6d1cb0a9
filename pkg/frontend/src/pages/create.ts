// Create page: JSON editor buffer with live validation. Save stays
// disabled while the buffer is malformed or the live report is non-empty;
// the server re-validates on save and its report is rendered on 422.

import { ApiError, Violation } from "../api.js";
import { clear, h } from "../dom.js";
import { validatePlaybook } from "../validator.js";
import { PageContext, errorBanner, infoBanner, section } from "./shared.js";

function templateDocument(): Record<string, unknown> {
  const uuid = () =>
    "xxxxxxxx-xxxx-4xxx-yxxx-xxxxxxxxxxxx".replace(/[xy]/g, (c) => {
      const r = (Math.random() * 16) | 0;
      return (c === "x" ? r : (r & 0x3) | 0x8).toString(16);
    });
  const startId = `start--${uuid()}`;
  const actionId = `action--${uuid()}`;
  const endId = `end--${uuid()}`;
  const now = new Date().toISOString().replace(/(\.\d{3})\d*Z$/, "$1Z");
  return {
    type: "playbook",
    spec_version: "cacao-2.0",
    id: `playbook--${uuid()}`,
    name: "New response playbook",
    description: "Describe what this playbook automates.",
    created: now,
    modified: now,
    created_by: `identity--${uuid()}`,
    labels: ["draft"],
    workflow_start: startId,
    workflow: {
      [startId]: { type: "start", on_completion: actionId },
      [actionId]: {
        type: "action",
        name: "first step",
        commands: [{ type: "manual", command: "triage the alert" }],
        on_completion: endId,
      },
      [endId]: { type: "end" },
    },
  };
}

export async function renderCreate(ctx: PageContext): Promise<void> {
  const { root, api, pageParams } = ctx;
  clear(root);
  const container = h("div", { class: "page", dataset: { page: "create" } });
  root.append(container);

  let initial = JSON.stringify(templateDocument(), null, 2);
  if (pageParams.id) {
    try {
      const record = await api.getPlaybook(pageParams.id);
      initial = JSON.stringify(record.playbook, null, 2);
    } catch (error) {
      container.append(errorBanner(error));
    }
  }

  const editor = h("textarea", {
    class: "editor",
    rows: "24",
    spellcheck: "false",
    "aria-label": "playbook JSON",
  }) as HTMLTextAreaElement;
  editor.value = initial;

  const reportBox = h("div", { class: "validation-report" });
  const outline = h("div", { class: "workflow-outline" });
  const saveButton = h("button", { class: "primary", disabled: true }, "Save") as HTMLButtonElement;
  const resultBox = h("div", { class: "save-result" });

  const refresh = () => {
    clear(reportBox);
    clear(outline);
    let doc: unknown;
    try {
      doc = JSON.parse(editor.value);
    } catch (error) {
      saveButton.disabled = true;
      reportBox.append(
        h("p", { class: "violation" }, `MALFORMED_JSON: ${(error as Error).message}`),
      );
      return;
    }
    const violations = validatePlaybook(doc);
    renderViolations(reportBox, violations);
    renderOutline(outline, doc as Record<string, unknown>);
    saveButton.disabled = violations.length > 0;
  };
  editor.addEventListener("input", refresh);

  saveButton.addEventListener("click", async () => {
    clear(resultBox);
    let doc: Record<string, unknown>;
    try {
      doc = JSON.parse(editor.value);
    } catch {
      return; // button is disabled in this state anyway
    }
    try {
      const record = await api.savePlaybook(doc);
      resultBox.append(
        infoBanner(`Saved ${String(doc.name)} as revision ${record.revision}.`),
      );
    } catch (error) {
      if (error instanceof ApiError && error.code === "VALIDATION_FAILED") {
        const report = error.details as { violations: Violation[] };
        renderViolations(reportBox, report.violations);
        saveButton.disabled = true;
      } else {
        resultBox.append(errorBanner(error));
      }
    }
  });

  container.append(
    section(
      "Create or edit a playbook",
      h(
        "div",
        { class: "editor-layout" },
        h("div", { class: "editor-pane" }, editor, h("div", { class: "toolbar" }, saveButton), resultBox),
        h("div", { class: "side-pane" }, h("h3", {}, "Live validation"), reportBox, h("h3", {}, "Workflow outline"), outline),
      ),
    ),
  );
  refresh();
}

function renderViolations(box: HTMLElement, violations: Violation[]): void {
  clear(box);
  if (violations.length === 0) {
    box.append(h("p", { class: "ok" }, "No violations."));
    return;
  }
  const list = h("ul", { class: "violations" });
  for (const violation of violations) {
    list.append(
      h(
        "li",
        { class: "violation", dataset: { code: violation.code } },
        h("code", {}, violation.path),
        ` ${violation.code}: ${violation.message}`,
      ),
    );
  }
  box.append(list);
}

// Read-only outline of the workflow steps (no graphical editing).
function renderOutline(box: HTMLElement, doc: Record<string, unknown>): void {
  clear(box);
  const workflow = doc.workflow;
  if (!workflow || typeof workflow !== "object" || Array.isArray(workflow)) return;
  const list = h("ol", { class: "outline" });
  for (const [stepId, step] of Object.entries(workflow as Record<string, any>)) {
    const type = step && typeof step === "object" ? String(step.type ?? "?") : "?";
    const name = step && typeof step === "object" && step.name ? ` — ${step.name}` : "";
    list.append(h("li", {}, h("code", {}, stepId), ` (${type})${name}`));
  }
  box.append(list);
}
