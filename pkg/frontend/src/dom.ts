// Small DOM construction helper; no framework.

type Child = Node | string | null | undefined;

export function h(
  tag: string,
  props: Record<string, unknown> = {},
  ...children: Child[]
): HTMLElement {
  const el = document.createElement(tag);
  for (const [key, value] of Object.entries(props)) {
    if (value === undefined || value === null) continue;
    if (key === "class") {
      el.className = String(value);
    } else if (key === "dataset") {
      for (const [dk, dv] of Object.entries(value as Record<string, string>)) {
        el.dataset[dk] = dv;
      }
    } else if (key.startsWith("on") && typeof value === "function") {
      el.addEventListener(key.slice(2).toLowerCase(), value as EventListener);
    } else if (key === "disabled" || key === "checked") {
      if (value) el.setAttribute(key, "");
      (el as unknown as Record<string, unknown>)[key] = Boolean(value);
    } else {
      el.setAttribute(key, String(value));
    }
  }
  for (const child of children) {
    if (child === null || child === undefined) continue;
    el.append(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return el;
}

export function clear(el: HTMLElement): void {
  while (el.firstChild) el.removeChild(el.firstChild);
}

export function fmtTimestamp(value: string | null | undefined): string {
  return value ? value.replace("T", " ").replace(".000Z", "Z") : "—";
}
