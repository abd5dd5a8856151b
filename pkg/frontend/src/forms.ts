/** Schema-driven technique forms.
 *
 * Fields, defaults and constraints come entirely from the server's
 * parameter schemas; nothing here is technique-specific, so a schema
 * change on the server reshapes the form without a console change.
 */

import type { ParameterSpec, TechniqueDescriptor } from "./types.js";

const INT_RE = /^-?\d+$/;

/** Human-readable constraint violation for one raw input, or null. */
export function validateField(spec: ParameterSpec, raw: string): string | null {
  const text = raw.trim();
  if (text === "") {
    return spec.required ? "required" : null;
  }
  if (spec.type === "int") {
    if (!INT_RE.test(text)) return "must be an integer";
    return checkRange(spec, Number(text));
  }
  if (spec.type === "float") {
    const value = Number(text);
    if (!Number.isFinite(value)) return "must be a number";
    return checkRange(spec, value);
  }
  if (spec.type === "enum") {
    if (!spec.choices || !spec.choices.includes(text)) {
      return `must be one of: ${(spec.choices ?? []).join(", ")}`;
    }
  }
  return null;
}

function checkRange(spec: ParameterSpec, value: number): string | null {
  if (spec.minimum !== undefined && value < spec.minimum) return `must be >= ${spec.minimum}`;
  if (spec.maximum !== undefined && value > spec.maximum) return `must be <= ${spec.maximum}`;
  return null;
}

/** Parsed value for submission; empty optional fields are omitted so the
 * server applies its own defaults. */
export function coerceField(spec: ParameterSpec, raw: string): unknown {
  const text = raw.trim();
  if (text === "") return undefined;
  if (spec.type === "int") return parseInt(text, 10);
  if (spec.type === "float") return Number(text);
  return text;
}

export class TechniqueFormModel {
  private values = new Map<string, string>();

  constructor(readonly descriptor: TechniqueDescriptor) {
    for (const spec of descriptor.parameters) {
      this.values.set(spec.name, spec.default === null || spec.default === undefined ? "" : String(spec.default));
    }
  }

  value(name: string): string {
    return this.values.get(name) ?? "";
  }

  setValue(name: string, raw: string): void {
    if (!this.values.has(name)) throw new Error(`unknown parameter ${name}`);
    this.values.set(name, raw);
  }

  fieldError(name: string): string | null {
    const spec = this.descriptor.parameters.find((p) => p.name === name);
    if (!spec) return "unknown parameter";
    return validateField(spec, this.value(name));
  }

  /** Submit is enabled only when every field passes its constraints. */
  isValid(): boolean {
    return this.descriptor.parameters.every((spec) => validateField(spec, this.value(spec.name)) === null);
  }

  toParameters(): Record<string, unknown> {
    const out: Record<string, unknown> = {};
    for (const spec of this.descriptor.parameters) {
      const value = coerceField(spec, this.value(spec.name));
      if (value !== undefined) out[spec.name] = value;
    }
    return out;
  }
}
