// Execute page: dispatch executions and watch them complete. The ongoing
// list refreshes on a poll timer that pauses when nothing is ongoing and
// raises a banner after three consecutive poll failures.

import { ExecutionRecord } from "../api.js";
import { clear, fmtTimestamp, h } from "../dom.js";
import { PageContext, emptyState, errorBanner, section, table } from "./shared.js";

const MAX_POLL_FAILURES = 3;

export interface ExecutePoller {
  stop: () => void;
  refreshes: number;
}

let activePoller: ExecutePoller | null = null;

export function stopExecutePoller(): void {
  if (activePoller) {
    activePoller.stop();
    activePoller = null;
  }
}

export async function renderExecute(ctx: PageContext): Promise<void> {
  const { root, api } = ctx;
  stopExecutePoller();
  clear(root);
  const container = h("div", { class: "page", dataset: { page: "execute" } });
  root.append(container);

  const bannerBox = h("div", {});
  const ongoingBox = h("div", { class: "ongoing-box" });
  const historyBox = h("div", { class: "history-box" });
  const playbooksBox = h("div", {});

  container.append(
    bannerBox,
    section("Executable playbooks", playbooksBox),
    section("In progress", ongoingBox),
    section("Execution history", historyBox),
  );

  const refreshLists = async (): Promise<number> => {
    const [ongoing, terminal] = await Promise.all([
      api.listExecutions({ status: "ongoing", limit: "50" }),
      api.listExecutions({ limit: "50" }),
    ]);
    clear(ongoingBox);
    ongoingBox.append(
      table(
        ["Execution", "Playbook", "Started", "Status"],
        ongoing.items.map((record) => executionRow(record)),
        "Nothing running right now.",
      ),
    );
    clear(historyBox);
    const done = terminal.items.filter((record) => record.status !== "ongoing");
    historyBox.append(
      table(
        ["Execution", "Playbook", "Started", "Ended", "Status", "Steps"],
        done.map((record) => historyRow(record)),
        "No executions yet.",
      ),
    );
    return ongoing.total;
  };

  try {
    const listing = await api.listPlaybooks({ limit: "200" });
    clear(playbooksBox);
    if (listing.total === 0) {
      playbooksBox.append(emptyState("Nothing to execute; store a playbook first."));
    } else {
      playbooksBox.append(
        table(
          ["Name", "Id", ""],
          listing.items.map((record) => {
            const playbook = record.playbook as Record<string, any>;
            const id = String(playbook.id);
            return h(
              "tr",
              { dataset: { playbookId: id } },
              h("td", {}, String(playbook.name ?? "")),
              h("td", { class: "mono" }, id),
              h(
                "td",
                {},
                h(
                  "button",
                  {
                    class: "primary",
                    onClick: async () => {
                      await api.execute(id);
                      await refreshLists();
                      startPolling();
                    },
                  },
                  "Execute",
                ),
              ),
            );
          }),
          "Nothing to execute.",
        ),
      );
    }
    await refreshLists();
  } catch (error) {
    clear(bannerBox);
    bannerBox.append(errorBanner(error, () => void renderExecute(ctx)));
    return;
  }

  const startPolling = () => {
    stopExecutePoller();
    let failures = 0;
    let stopped = false;
    const poller: ExecutePoller = {
      refreshes: 0,
      stop: () => {
        stopped = true;
        clearTimeout(timer);
      },
    };
    let timer: ReturnType<typeof setTimeout>;
    const tick = async () => {
      if (stopped) return;
      try {
        const ongoingTotal = await refreshLists();
        poller.refreshes += 1;
        failures = 0;
        clear(bannerBox);
        if (ongoingTotal === 0) {
          return; // pause; the next Execute click restarts polling
        }
      } catch (error) {
        failures += 1;
        if (failures >= MAX_POLL_FAILURES) {
          clear(bannerBox);
          bannerBox.append(
            errorBanner(error, () => {
              clear(bannerBox);
              startPolling();
            }),
          );
          return;
        }
      }
      timer = setTimeout(() => void tick(), ctx.pollIntervalMs);
    };
    timer = setTimeout(() => void tick(), ctx.pollIntervalMs);
    activePoller = poller;
  };

  startPolling();
}

export function currentPoller(): ExecutePoller | null {
  return activePoller;
}

function executionRow(record: ExecutionRecord): HTMLElement {
  return h(
    "tr",
    { dataset: { executionId: record.execution_id } },
    h("td", { class: "mono" }, record.execution_id),
    h("td", { class: "mono" }, record.playbook_id),
    h("td", {}, fmtTimestamp(record.started_at)),
    h("td", {}, h("span", { class: `status ${record.status}` }, record.status)),
  );
}

function historyRow(record: ExecutionRecord): HTMLElement {
  const steps = record.step_results
    .map((step) => `${step.step_id.split("--")[0]}:${step.status}`)
    .join(", ");
  return h(
    "tr",
    { dataset: { executionId: record.execution_id } },
    h("td", { class: "mono" }, record.execution_id),
    h("td", { class: "mono" }, record.playbook_id),
    h("td", {}, fmtTimestamp(record.started_at)),
    h("td", {}, fmtTimestamp(record.ended_at)),
    h("td", {}, h("span", { class: `status ${record.status}` }, record.status)),
    h("td", { class: "steps" }, steps || (record.error ?? "")),
  );
}
