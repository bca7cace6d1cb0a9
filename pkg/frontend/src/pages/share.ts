// Share page: publish current playbooks to the TAXII collection (with
// inline already-shared feedback), import what the collection holds, and
// show the sharing ledger.

import { ApiError } from "../api.js";
import { clear, fmtTimestamp, h } from "../dom.js";
import { PageContext, emptyState, errorBanner, infoBanner, section, table } from "./shared.js";

export async function renderShare(ctx: PageContext): Promise<void> {
  const { root, api } = ctx;
  clear(root);
  const container = h("div", { class: "page", dataset: { page: "share" } });
  root.append(container);

  const feedback = h("div", { class: "share-feedback" });
  const localBox = h("div", {});
  const remoteBox = h("div", {});
  const ledgerBox = h("div", {});

  const refresh = async () => {
    const [listing, records] = await Promise.all([
      api.listPlaybooks({ limit: "200" }),
      api.sharingRecords(),
    ]);

    clear(localBox);
    if (listing.total === 0) {
      localBox.append(emptyState("No playbooks to share yet."));
    } else {
      const sharedVersions = new Set(
        records.items
          .filter((record) => record.direction === "outbound")
          .map((record) => `${record.playbook_id}|${record.playbook_modified}`),
      );
      localBox.append(
        table(
          ["Name", "Id", "Modified", "Shared?", ""],
          listing.items.map((record) => {
            const playbook = record.playbook as Record<string, any>;
            const id = String(playbook.id);
            const versionKey = `${id}|${playbook.modified}`;
            const alreadyShared = sharedVersions.has(versionKey);
            return h(
              "tr",
              { dataset: { playbookId: id } },
              h("td", {}, String(playbook.name ?? "")),
              h("td", { class: "mono" }, id),
              h("td", {}, fmtTimestamp(playbook.modified)),
              h("td", {}, alreadyShared ? "yes" : "not yet"),
              h(
                "td",
                {},
                h(
                  "button",
                  {
                    class: "primary",
                    onClick: async () => {
                      clear(feedback);
                      try {
                        const shared = await api.share(id);
                        feedback.append(
                          infoBanner(
                            `Shared as ${shared.stix_object_id} to collection ${shared.collection_id}.`,
                          ),
                        );
                      } catch (error) {
                        if (error instanceof ApiError && error.code === "ALREADY_SHARED") {
                          feedback.append(
                            h(
                              "div",
                              { class: "banner warn", dataset: { feedback: "already-shared" } },
                              "This version was already shared to that collection.",
                            ),
                          );
                        } else {
                          feedback.append(errorBanner(error));
                        }
                      }
                      await refresh();
                    },
                  },
                  "Share",
                ),
              ),
            );
          }),
          "No playbooks to share.",
        ),
      );
    }

    clear(ledgerBox);
    ledgerBox.append(
      table(
        ["Direction", "Playbook", "Version", "Collection", "STIX object", "At"],
        records.items.map((record) =>
          h(
            "tr",
            {},
            h("td", {}, record.direction),
            h("td", { class: "mono" }, record.playbook_id),
            h("td", {}, fmtTimestamp(record.playbook_modified)),
            h("td", { class: "mono" }, record.collection_id),
            h("td", { class: "mono" }, record.stix_object_id),
            h("td", {}, fmtTimestamp(record.shared_at)),
          ),
        ),
        "Nothing has crossed the sharing boundary yet.",
      ),
    );

    clear(remoteBox);
    try {
      const { collections } = await api.taxiiCollections();
      const first = collections[0];
      if (!first) {
        remoteBox.append(emptyState("No TAXII collections served."));
      } else {
        const page = await api.taxiiObjects(first.id);
        const importButton = h(
          "button",
          {
            class: "primary",
            onClick: async () => {
              clear(feedback);
              try {
                const result = await api.importShared();
                feedback.append(
                  h(
                    "div",
                    { class: "banner info", dataset: { feedback: "import-result" } },
                    `Imported ${result.imported}, skipped ${result.skipped}` +
                      (result.failures.length ? `, ${result.failures.length} failed.` : "."),
                  ),
                );
              } catch (error) {
                feedback.append(errorBanner(error));
              }
              await refresh();
            },
          },
          "Import from collection",
        );
        remoteBox.append(
          h(
            "p",
            {},
            `Collection "${first.title}" holds ${page.objects.length} shared object(s). `,
          ),
          importButton,
          table(
            ["STIX object", "Name", "Modified"],
            page.objects.map((obj) =>
              h(
                "tr",
                {},
                h("td", { class: "mono" }, String(obj.id ?? "")),
                h("td", {}, String(obj.name ?? "")),
                h("td", {}, fmtTimestamp(obj.modified as string)),
              ),
            ),
            "The collection is empty.",
          ),
        );
      }
    } catch (error) {
      remoteBox.append(errorBanner(error));
    }
  };

  container.append(
    feedback,
    section("Share local playbooks", localBox),
    section("Shared collection (inbound)", remoteBox),
    section("Sharing ledger", ledgerBox),
  );

  try {
    await refresh();
  } catch (error) {
    clear(container);
    container.append(errorBanner(error, () => void renderShare(ctx)));
  }
}
