/** Technique page: a form generated from the server's parameter schema,
 * an apply button, and the per-technique "Outputs" panel for artifacts
 * produced in this session. */

import { ApiError } from "../api.js";
import { TechniqueFormModel } from "../forms.js";
import { clear, downloadBlob, el, notify } from "../render.js";
import type { AppState } from "../state.js";
import type { ParameterSpec, TechniqueDescriptor } from "../types.js";
import { describe } from "./repository.js";

export async function renderTechniquePage(
  root: HTMLElement,
  state: AppState,
  techniqueName: string,
): Promise<void> {
  clear(root);
  let descriptor: TechniqueDescriptor | undefined;
  try {
    descriptor = (await state.api.techniques()).find((d) => d.name === techniqueName);
  } catch (error) {
    notify(describe(error), "error");
    return;
  }
  if (!descriptor) {
    root.append(el("h2", {}, [`Unknown technique: ${techniqueName}`]));
    return;
  }

  root.append(el("h2", {}, [descriptor.name]));
  root.append(
    el("p", { class: "hint" }, [
      `input: ${descriptor.input_kind}, output: ${descriptor.output_kind}. `,
      state.selection
        ? `Selected input: ${state.selection.name}`
        : "Select an input on the repository page first.",
    ]),
  );

  const model = new TechniqueFormModel(descriptor);
  const form = el("div", { class: "technique-form" });
  const errorSpans = new Map<string, HTMLElement>();
  const applyButton = el("button", { class: "apply" }, ["Apply"]);

  const refreshValidity = () => {
    for (const spec of descriptor!.parameters) {
      const span = errorSpans.get(spec.name)!;
      span.textContent = model.fieldError(spec.name) ?? "";
    }
    const ready = model.isValid() && state.selection !== null && state.selection.kind === "xes";
    if (ready) applyButton.removeAttribute("disabled");
    else applyButton.setAttribute("disabled", "disabled");
  };

  for (const spec of descriptor.parameters) {
    form.append(fieldRow(spec, model, errorSpans, refreshValidity));
  }
  root.append(form);

  const outputsPanel = el("div", { class: "outputs" });
  const renderOutputs = () => {
    clear(outputsPanel);
    outputsPanel.append(el("h3", {}, ["Outputs"]));
    const produced = state.outputs.outputs(techniqueName);
    if (produced.length === 0) {
      outputsPanel.append(el("p", { class: "hint" }, ["Nothing produced in this session yet."]));
      return;
    }
    const list = el("ul", {});
    for (const entry of produced) {
      const download = el("button", {}, ["download"]);
      download.addEventListener("click", async () => {
        try {
          const { data, filename } = await state.api.download(entry.id);
          downloadBlob(data, filename);
        } catch (error) {
          notify(describe(error), "error");
        }
      });
      list.append(el("li", {}, [`${entry.name} (${entry.kind}, ops ${entry.op_count}) `, download]));
    }
    outputsPanel.append(list);
  };

  applyButton.addEventListener("click", async () => {
    if (!state.selection) return;
    applyButton.setAttribute("disabled", "disabled");
    try {
      const job = await state.api.apply(state.selection.id, techniqueName, model.toParameters());
      if (job.state === "done" && job.result) {
        const detail = await state.api.detail(job.result);
        state.outputs.record(techniqueName, detail.entry);
        notify(`done: ${detail.entry.name}`);
        await state.refresh();
        renderOutputs();
      } else {
        notify(`job failed: ${job.error ?? "unknown engine error"}`, "error");
      }
    } catch (error) {
      if (error instanceof ApiError && error.code === "ParameterInvalid") {
        notify(error.message, "error");
      } else {
        notify(describe(error), "error");
      }
    }
    refreshValidity();
  });
  root.append(applyButton, outputsPanel);
  refreshValidity();
  renderOutputs();
}

function fieldRow(
  spec: ParameterSpec,
  model: TechniqueFormModel,
  errorSpans: Map<string, HTMLElement>,
  onChange: () => void,
): HTMLElement {
  const label = el("label", {}, [spec.name + (spec.required ? " *" : "")]);
  let input: HTMLInputElement | HTMLSelectElement;
  if (spec.type === "enum") {
    input = el("select", {});
    for (const choice of spec.choices ?? []) {
      const option = el("option", { value: choice }, [choice]);
      if (choice === model.value(spec.name)) option.setAttribute("selected", "selected");
      input.append(option);
    }
  } else {
    input = el("input", { type: "text", value: model.value(spec.name) });
  }
  input.addEventListener("input", () => {
    model.setValue(spec.name, input.value);
    onChange();
  });
  input.addEventListener("change", () => {
    model.setValue(spec.name, input.value);
    onChange();
  });
  const error = el("span", { class: "field-error" });
  errorSpans.set(spec.name, error);
  const constraints = describeConstraints(spec);
  return el("div", { class: "field" }, [
    label,
    input,
    error,
    constraints ? el("span", { class: "hint" }, [constraints]) : "",
  ]);
}

function describeConstraints(spec: ParameterSpec): string {
  const parts: string[] = [spec.type];
  if (spec.minimum !== undefined && spec.maximum !== undefined) {
    parts.push(`${spec.minimum}..${spec.maximum}`);
  } else if (spec.minimum !== undefined) {
    parts.push(`>= ${spec.minimum}`);
  } else if (spec.maximum !== undefined) {
    parts.push(`<= ${spec.maximum}`);
  }
  return parts.join(", ");
}
