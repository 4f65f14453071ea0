import type { ImplicationDoc } from "./types.js";

/** Bars show three decimals; the full served value lives in the hover title. */
export function formatAmplitude(value: number): string {
  return value.toFixed(3);
}

export function fullPrecision(value: number): string {
  return String(value);
}

export function formatImplication(imp: ImplicationDoc): string {
  return `{${imp.premise.join(", ")}} → {${imp.conclusion.join(", ")}}`;
}

export function formatConceptLabel(intent: string[]): string {
  return intent.length === 0 ? "⊤" : intent.join(", ");
}
