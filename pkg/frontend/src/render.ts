/** Small DOM helpers shared by the views. */

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function formatBytes(size: number): string {
  if (size < 1024) return `${size} B`;
  if (size < 1024 * 1024) return `${(size / 1024).toFixed(1)} KiB`;
  return `${(size / (1024 * 1024)).toFixed(1)} MiB`;
}

/** Non-blocking notice bar; errors render the API code verbatim. */
export function notify(message: string, kind: "info" | "error" = "info"): void {
  const host = document.getElementById("notices");
  if (!host) return;
  const notice = el("div", { class: `notice ${kind}` }, [message]);
  host.append(notice);
  setTimeout(() => notice.remove(), 6000);
}

export function downloadBlob(data: ArrayBuffer, filename: string): void {
  const url = URL.createObjectURL(new Blob([data]));
  const anchor = el("a", { href: url, download: filename });
  document.body.append(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
}
