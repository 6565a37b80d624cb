// Tiny DOM builder; no framework, the screens re-render on state change.

type Child = Node | string | null | undefined;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | boolean | ((event: Event) => void)> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (typeof value === "function") {
      node.addEventListener(key.replace(/^on/, ""), value as EventListener);
    } else if (typeof value === "boolean") {
      if (value) node.setAttribute(key, "");
      (node as unknown as Record<string, unknown>)[key] = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    if (child === null || child === undefined) continue;
    node.append(child instanceof Node ? child : document.createTextNode(child));
  }
  return node;
}

export function select(options: string[], current: string,
                       onchange: (value: string) => void,
                       attrs: Record<string, string> = {}): HTMLSelectElement {
  const node = el("select", attrs);
  for (const option of options) {
    const opt = el("option", { value: option }, option);
    if (option === current) opt.selected = true;
    node.append(opt);
  }
  node.addEventListener("change", () => onchange(node.value));
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}
