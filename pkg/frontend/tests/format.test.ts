import { describe, expect, it } from "vitest";

import { formatAmplitude, formatConceptLabel, formatImplication, fullPrecision } from "../src/format.js";

describe("formatAmplitude", () => {
  it("shows three decimals for display", () => {
    expect(formatAmplitude(0.4472135954999579)).toBe("0.447");
    expect(formatAmplitude(0.5)).toBe("0.500");
    expect(formatAmplitude(0)).toBe("0.000");
  });

  it("keeps the full served value for hover", () => {
    expect(fullPrecision(0.4472135954999579)).toBe("0.4472135954999579");
  });
});

describe("formatImplication", () => {
  it("renders premise and conclusion sets", () => {
    expect(formatImplication({ premise: [], conclusion: ["Odd", "Square"] })).toBe(
      "{} → {Odd, Square}",
    );
    expect(formatImplication({ premise: ["Prime"], conclusion: ["Even"] })).toBe(
      "{Prime} → {Even}",
    );
  });
});

describe("formatConceptLabel", () => {
  it("marks the top concept", () => {
    expect(formatConceptLabel([])).toBe("⊤");
    expect(formatConceptLabel(["Odd"])).toBe("Odd");
  });
});
