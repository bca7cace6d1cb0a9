// Application shell: five-page navigation driving the management API.

import { ApiClient, loadRuntimeConfig } from "./api.js";
import { clear, h } from "./dom.js";
import { renderCreate } from "./pages/create.js";
import { renderExecute, stopExecutePoller } from "./pages/execute.js";
import { renderMonitor } from "./pages/monitor.js";
import { renderRetrieve } from "./pages/retrieve.js";
import { renderShare } from "./pages/share.js";
import { PageContext } from "./pages/shared.js";

export const PAGES = ["retrieve", "create", "execute", "share", "monitor"] as const;
export type PageName = (typeof PAGES)[number];

const RENDERERS: Record<PageName, (ctx: PageContext) => Promise<void>> = {
  retrieve: renderRetrieve,
  create: renderCreate,
  execute: renderExecute,
  share: renderShare,
  monitor: renderMonitor,
};

export interface AppOptions {
  apiBase?: string;
  pollIntervalMs?: number;
}

export class App {
  readonly api: ApiClient;
  readonly pollIntervalMs: number;
  private pageRoot!: HTMLElement;
  private navButtons = new Map<PageName, HTMLButtonElement>();
  current: PageName = "retrieve";

  constructor(private container: HTMLElement, options: AppOptions = {}) {
    this.api = new ApiClient(options.apiBase ?? "");
    this.pollIntervalMs = options.pollIntervalMs ?? 2000;
  }

  mount(): void {
    clear(this.container);
    const nav = h("nav", { class: "topnav" }, h("span", { class: "brand" }, "Playbook KMS"));
    for (const page of PAGES) {
      const button = h(
        "button",
        {
          class: "nav-button",
          dataset: { nav: page },
          onClick: () => void this.navigate(page),
        },
        page[0]!.toUpperCase() + page.slice(1),
      ) as HTMLButtonElement;
      this.navButtons.set(page, button);
      nav.append(button);
    }
    this.pageRoot = h("main", { id: "page-root" });
    this.container.append(nav, this.pageRoot);
  }

  async navigate(page: string, params: Record<string, string> = {}): Promise<void> {
    const target = (PAGES as readonly string[]).includes(page) ? (page as PageName) : "retrieve";
    stopExecutePoller();
    this.current = target;
    for (const [name, button] of this.navButtons) {
      button.classList.toggle("active", name === target);
    }
    const ctx: PageContext = {
      root: this.pageRoot,
      api: this.api,
      navigate: (next, nextParams) => this.navigate(next, nextParams),
      pollIntervalMs: this.pollIntervalMs,
      pageParams: params,
    };
    await RENDERERS[target](ctx);
    if (typeof window !== "undefined" && window.location.protocol !== "about:") {
      const hash = `#/${target}`;
      if (window.location.hash !== hash) {
        try {
          window.history.replaceState(null, "", hash);
        } catch {
          // jsdom about:blank cannot take hashes; navigation still works
        }
      }
    }
  }
}

export async function boot(): Promise<App> {
  const config = await loadRuntimeConfig();
  const container = document.getElementById("app");
  if (!container) throw new Error("missing #app container");
  const app = new App(container, { apiBase: config.apiBase });
  app.mount();
  const fromHash = window.location.hash.replace(/^#\//, "");
  await app.navigate(fromHash || "retrieve");
  window.addEventListener("hashchange", () => {
    void app.navigate(window.location.hash.replace(/^#\//, ""));
  });
  return app;
}
