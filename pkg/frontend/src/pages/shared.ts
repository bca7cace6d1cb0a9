import { ApiClient, ApiError } from "../api.js";
import { h } from "../dom.js";

export interface PageContext {
  root: HTMLElement;
  api: ApiClient;
  navigate: (page: string, params?: Record<string, string>) => Promise<void>;
  pollIntervalMs: number;
  pageParams: Record<string, string>;
}

export function errorBanner(error: unknown, onRetry?: () => void): HTMLElement {
  const message =
    error instanceof ApiError
      ? error.code === "CONNECTION"
        ? "Cannot reach the service."
        : `${error.code}: ${error.message}`
      : String(error);
  const banner = h("div", { class: "banner error", role: "alert" }, message);
  if (onRetry) {
    banner.append(h("button", { class: "link", onClick: onRetry }, "Retry"));
  }
  return banner;
}

export function infoBanner(text: string): HTMLElement {
  return h("div", { class: "banner info" }, text);
}

export function emptyState(text: string): HTMLElement {
  return h("p", { class: "empty-state" }, text);
}

export function section(title: string, ...children: (Node | string)[]): HTMLElement {
  return h("section", { class: "panel" }, h("h2", {}, title), ...children);
}

export function table(headers: string[], rows: HTMLElement[], emptyText: string): HTMLElement {
  if (rows.length === 0) return emptyState(emptyText);
  return h(
    "table",
    { class: "data" },
    h("thead", {}, h("tr", {}, ...headers.map((text) => h("th", {}, text)))),
    h("tbody", {}, ...rows),
  );
}
