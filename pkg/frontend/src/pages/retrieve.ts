// Retrieve page: current playbooks with a history drawer, restore, delete,
// and open-in-editor.

import { VersionRecord } from "../api.js";
import { clear, fmtTimestamp, h } from "../dom.js";
import { PageContext, emptyState, errorBanner, section, table } from "./shared.js";

export async function renderRetrieve(ctx: PageContext): Promise<void> {
  const { root, api } = ctx;
  clear(root);
  const container = h("div", { class: "page", dataset: { page: "retrieve" } });
  root.append(container);

  let listing;
  try {
    listing = await api.listPlaybooks({ limit: "200" });
  } catch (error) {
    container.append(errorBanner(error, () => void renderRetrieve(ctx)));
    return;
  }

  if (listing.total === 0) {
    container.append(
      section(
        "Playbooks",
        emptyState("No playbooks stored yet. Use the Create page to add one."),
      ),
    );
    return;
  }

  const tbody = h("tbody", {});
  for (const record of listing.items) {
    const [row, drawer] = playbookRows(ctx, record);
    tbody.append(row, drawer);
  }
  const tableEl = h(
    "table",
    { class: "data" },
    h(
      "thead",
      {},
      h(
        "tr",
        {},
        ...["Name", "Id", "Revision", "Created by", "Modified", "Labels", ""].map((text) =>
          h("th", {}, text),
        ),
      ),
    ),
    tbody,
  );
  container.append(section(`Playbooks (${listing.total})`, tableEl));
}

function playbookRows(ctx: PageContext, record: VersionRecord): [HTMLElement, HTMLElement] {
  const { api } = ctx;
  const playbook = record.playbook as Record<string, any>;
  const id = String(playbook.id);

  const drawerCell = h("td", { colspan: "7" });
  const drawer = h("tr", { class: "drawer", dataset: { drawerFor: id } }, drawerCell);
  drawer.style.display = "none";

  const historyButton = h(
    "button",
    {
      onClick: async () => {
        if (drawer.style.display === "none") {
          drawer.style.display = "";
          await fillHistoryDrawer(ctx, id, drawerCell);
        } else {
          drawer.style.display = "none";
        }
      },
    },
    "History",
  );
  const editButton = h(
    "button",
    { onClick: () => void ctx.navigate("create", { id }) },
    "Open in editor",
  );
  const deleteButton = h(
    "button",
    {
      class: "danger",
      onClick: async () => {
        await api.deletePlaybook(id);
        await ctx.navigate("retrieve");
      },
    },
    "Delete",
  );

  const row = h(
    "tr",
    { dataset: { playbookId: id } },
    h("td", {}, String(playbook.name ?? "")),
    h("td", { class: "mono" }, id),
    h("td", {}, String(record.revision)),
    h("td", { class: "mono" }, String(playbook.created_by ?? "")),
    h("td", {}, fmtTimestamp(playbook.modified)),
    h("td", {}, Array.isArray(playbook.labels) ? playbook.labels.join(", ") : ""),
    h("td", { class: "actions" }, historyButton, editButton, deleteButton),
  );
  return [row, drawer];
}

async function fillHistoryDrawer(ctx: PageContext, id: string, cell: HTMLElement): Promise<void> {
  const { api } = ctx;
  clear(cell);
  cell.append(h("p", {}, "Loading history…"));
  let history;
  try {
    history = await api.history(id);
  } catch (error) {
    clear(cell);
    cell.append(errorBanner(error));
    return;
  }
  clear(cell);
  if (history.total === 0) {
    cell.append(emptyState("No previous revisions."));
    return;
  }
  const rows = history.items.map((record) =>
    h(
      "tr",
      { dataset: { revision: String(record.revision) } },
      h("td", {}, String(record.revision)),
      h("td", {}, String((record.playbook as Record<string, any>).name ?? "")),
      h("td", {}, fmtTimestamp((record.playbook as Record<string, any>).modified)),
      h(
        "td",
        {},
        h(
          "button",
          {
            onClick: async () => {
              await api.restore(id, record.revision);
              await ctx.navigate("retrieve");
            },
          },
          "Restore",
        ),
      ),
    ),
  );
  cell.append(
    h("h3", {}, "Previous revisions"),
    table(["Revision", "Name", "Modified", ""], rows, "No previous revisions."),
  );
}
