/** Repository page: upload and manage event data, pick the input for the
 * technique pages, download or delete artifacts. */

import { ApiError } from "../api.js";
import { clear, downloadBlob, el, formatBytes, notify } from "../render.js";
import { provenanceForest, type ProvenanceNode } from "../repo_model.js";
import type { AppState } from "../state.js";
import type { ArtifactEntry } from "../types.js";

export async function renderRepositoryPage(root: HTMLElement, state: AppState): Promise<void> {
  clear(root);
  try {
    await state.refresh();
  } catch (error) {
    notify(describe(error), "error");
  }

  const heading = el("h2", {}, ["Event data repository"]);
  const uploadRow = el("div", { class: "upload-row" });
  const fileInput = el("input", { type: "file", accept: ".xes,.gz,.ela" });
  const uploadButton = el("button", {}, ["Upload"]);
  uploadButton.addEventListener("click", async () => {
    const file = fileInput.files?.[0];
    if (!file) {
      notify("choose a file first", "error");
      return;
    }
    try {
      const entry = await state.api.upload(file, file.name);
      notify(`uploaded ${entry.name} (${entry.kind})`);
      await renderRepositoryPage(root, state);
    } catch (error) {
      notify(describe(error), "error");
    }
  });
  uploadRow.append(fileInput, uploadButton);
  root.append(heading, uploadRow);

  if (state.entries.length === 0) {
    root.append(
      el("div", { class: "empty-state" }, [
        "The repository is empty. Upload a standard XES event log (.xes, .xes.gz) or an ELA document to get started.",
      ]),
    );
    return;
  }

  const table = el("table", { class: "artifacts" });
  table.append(
    el("tr", {}, [
      el("th", {}, ["name"]),
      el("th", {}, ["kind"]),
      el("th", {}, ["ops"]),
      el("th", {}, ["size"]),
      el("th", {}, ["created"]),
      el("th", {}, ["actions"]),
    ]),
  );
  for (const node of provenanceForest(state.entries)) {
    appendRows(table, node, 0, root, state);
  }
  root.append(table);
}

function appendRows(
  table: HTMLTableElement,
  node: ProvenanceNode,
  depth: number,
  root: HTMLElement,
  state: AppState,
): void {
  table.append(artifactRow(node.entry, depth, root, state));
  for (const child of node.children) {
    appendRows(table, child, depth + 1, root, state);
  }
}

function artifactRow(
  entry: ArtifactEntry,
  depth: number,
  root: HTMLElement,
  state: AppState,
): HTMLTableRowElement {
  const selected = state.selection?.id === entry.id;
  const name = el("td", { class: "name" }, [
    el("span", { style: `margin-left: ${depth * 18}px` }, [depth > 0 ? "↳ " : "", entry.name]),
  ]);
  const select = el("button", { class: selected ? "selected" : "" }, [
    selected ? "selected as input" : "select as input",
  ]);
  if (entry.kind !== "xes") select.setAttribute("disabled", "disabled");
  select.addEventListener("click", async () => {
    state.select(entry);
    notify(`input: ${entry.name}`);
    await renderRepositoryPage(root, state);
  });
  const download = el("button", {}, ["download"]);
  download.addEventListener("click", async () => {
    try {
      const { data, filename } = await state.api.download(entry.id);
      downloadBlob(data, filename);
    } catch (error) {
      notify(describe(error), "error");
    }
  });
  const remove = el("button", {}, ["delete"]);
  remove.addEventListener("click", async () => {
    try {
      await state.api.remove(entry.id);
      notify(`deleted ${entry.name}`);
    } catch (error) {
      notify(describe(error), "error");
    }
    await renderRepositoryPage(root, state);
  });
  return el("tr", { class: selected ? "selected-row" : "" }, [
    name,
    el("td", {}, [el("span", { class: `badge ${entry.kind}` }, [entry.kind])]),
    el("td", {}, [String(entry.op_count)]),
    el("td", {}, [formatBytes(entry.byte_size)]),
    el("td", {}, [entry.created_at.replace("T", " ").slice(0, 19)]),
    el("td", { class: "actions" }, [select, download, remove]),
  ]);
}

export function describe(error: unknown): string {
  if (error instanceof ApiError) {
    if (error.code === "HasDependents") return `${error.status} ${error.code}: has dependent artifacts`;
    return error.message;
  }
  return String(error);
}
