// Monitor page: renders the /stats report as-is; all aggregation happens
// server-side and the figures shown equal the raw response values.

import { KpiReport } from "../api.js";
import { clear, h } from "../dom.js";
import { PageContext, errorBanner, section, table } from "./shared.js";

export async function renderMonitor(ctx: PageContext): Promise<void> {
  const { root, api } = ctx;
  clear(root);
  const container = h("div", { class: "page", dataset: { page: "monitor" } });
  root.append(container);

  let report: KpiReport;
  try {
    report = await api.stats();
  } catch (error) {
    container.append(errorBanner(error, () => void renderMonitor(ctx)));
    return;
  }

  const cards = h(
    "div",
    { class: "cards" },
    card("Playbooks", report.totals.playbooks_current, "totals.playbooks_current"),
    card("Versions", report.totals.versions_total, "totals.versions_total"),
    card("Executions", report.totals.executions_total, "totals.executions_total"),
    card("Sharings", report.totals.sharings_total, "totals.sharings_total"),
    card("Success rate", report.success_rate, "success_rate"),
    card("p95 duration (ms)", report.duration_stats.p95_ms, "duration_stats.p95_ms"),
  );

  const statusRows = Object.entries(report.executions_by_status).map(([status, count]) =>
    h("tr", {}, h("td", {}, status), h("td", { dataset: { stat: `status.${status}` } }, String(count))),
  );
  const labelRows = Object.entries(report.label_histogram)
    .sort((a, b) => b[1] - a[1])
    .map(([label, count]) =>
      h("tr", {}, h("td", {}, label), h("td", { dataset: { stat: `label.${label}` } }, String(count))),
    );
  const topRows = report.top_executed.map((entry) =>
    h(
      "tr",
      {},
      h("td", { class: "mono" }, entry.playbook_id),
      h("td", { dataset: { stat: `top.${entry.playbook_id}` } }, String(entry.count)),
    ),
  );

  const avgBytes = report.storage.avg_current_doc_bytes ?? 0;
  const storage = h(
    "p",
    {},
    "Average current document size: ",
    h("strong", { dataset: { stat: "storage.avg_current_doc_bytes" } }, String(avgBytes)),
    ` bytes (${(avgBytes / 1024).toFixed(1)} KB).`,
  );

  container.append(
    section("Key indicators", cards),
    section("Executions by status", table(["Status", "Count"], statusRows, "No executions yet.")),
    section("Most executed", table(["Playbook", "Runs"], topRows, "No executions yet.")),
    section("Labels across current playbooks", table(["Label", "Count"], labelRows, "No labels.")),
    section(
      "Durations (ms)",
      table(
        ["Mean", "p50", "p95"],
        [
          h(
            "tr",
            {},
            h("td", { dataset: { stat: "duration_stats.mean_ms" } }, String(report.duration_stats.mean_ms)),
            h("td", { dataset: { stat: "duration_stats.p50_ms" } }, String(report.duration_stats.p50_ms)),
            h("td", { dataset: { stat: "duration_stats.p95_ms" } }, String(report.duration_stats.p95_ms)),
          ),
        ],
        "No terminal executions.",
      ),
    ),
    section("Storage", storage),
  );
}

function card(label: string, value: number | undefined, stat: string): HTMLElement {
  return h(
    "div",
    { class: "card" },
    h("div", { class: "card-value", dataset: { stat } }, String(value ?? 0)),
    h("div", { class: "card-label" }, label),
  );
}
