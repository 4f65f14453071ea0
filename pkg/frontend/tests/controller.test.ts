import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import type { EnsembleDoc, LatticeDoc, SessionSummary } from "../src/types.js";

function summaryDoc(overrides: Partial<SessionSummary> = {}): SessionSummary {
  return {
    id: "s1",
    created_at: "2026-01-01T00:00:00Z",
    oracle: "interactive",
    phase: "belief",
    status: "belief",
    granule: 0,
    basis: ["a", "b"],
    dimensions: [{ name: "d", attributes: ["a", "b"] }],
    objects: [],
    pending: null,
    pending_counterexample: null,
    awaiting_cue: null,
    suggestion: { premise: [], conclusion: ["a"] },
    ...overrides,
  };
}

const LATTICE: LatticeDoc = { concepts: [{ extent: [], intent: ["a", "b"] }], hasse: [] };
const ENSEMBLE: EnsembleDoc = { amplitudes: [0.7071, 0.7071], basis: ["a", "b"], normalized: true };

interface Script {
  summary?: () => SessionSummary;
  onCue?: () => Promise<unknown>;
}

function mockApi(script: Script = {}) {
  const requested: string[] = [];
  const api = {
    getSession: async () => {
      requested.push("session");
      return script.summary ? script.summary() : summaryDoc();
    },
    getLattice: async (_id: string, granule?: number) => {
      requested.push(`lattice:${granule}`);
      return LATTICE;
    },
    getEnsemble: async (_id: string, granule?: number) => {
      requested.push(`ensemble:${granule}`);
      return ENSEMBLE;
    },
    postCue: async () => {
      requested.push("cue");
      if (script.onCue) {
        return script.onCue();
      }
      return {};
    },
    accept: async () => {
      requested.push("accept");
      return { phase: "conscious", granule: 0 };
    },
    counterexample: async () => {
      requested.push("counterexample");
      return { phase: "conscious", granule: 1 };
    },
  };
  return { api: api as unknown as ApiClient, requested };
}

describe("SessionController", () => {
  it("refresh loads summary plus snapshots of the live granule", async () => {
    const { api, requested } = mockApi();
    const controller = new SessionController(api, "s1");
    await controller.refresh();
    const state = controller.snapshot();
    expect(state.summary?.id).toBe("s1");
    expect(state.lattice).toEqual(LATTICE);
    expect(state.ensemble).toEqual(ENSEMBLE);
    expect(requested).toContain("lattice:0");
    expect(state.error).toBeNull();
  });

  it("allows at most one in-flight mutation", async () => {
    let release: (() => void) | undefined;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const { api, requested } = mockApi({ onCue: async () => gate });
    const controller = new SessionController(api, "s1");
    const first = controller.poseCue({ premise: [], conclusion: ["a"] });
    const second = await controller.poseCue({ premise: [], conclusion: ["b"] });
    expect(second).toBe(false); // rejected client-side while busy
    release!();
    expect(await first).toBe(true);
    expect(requested.filter((r) => r === "cue")).toHaveLength(1);
  });

  it("scrubbing to a past granule makes the view read-only", async () => {
    const { api, requested } = mockApi({ summary: () => summaryDoc({ granule: 4 }) });
    const controller = new SessionController(api, "s1");
    await controller.refresh();
    expect(controller.isViewOnly()).toBe(false);
    await controller.selectGranule(2);
    expect(controller.isViewOnly()).toBe(true);
    expect(requested).toContain("lattice:2");
    await controller.selectGranule(null);
    expect(controller.isViewOnly()).toBe(false);
  });

  it("surfaces api failures as the error state and recovers on refresh", async () => {
    let failing = true;
    const { api } = mockApi({
      summary: () => {
        if (failing) {
          throw new Error("connection refused");
        }
        return summaryDoc();
      },
    });
    const controller = new SessionController(api, "s1");
    await controller.refresh();
    expect(controller.snapshot().error).toContain("connection refused");
    failing = false;
    await controller.refresh();
    expect(controller.snapshot().error).toBeNull();
  });

  it("notifies its listener on every state change", async () => {
    const states: boolean[] = [];
    const { api } = mockApi();
    const controller = new SessionController(api, "s1", (state) => states.push(state.busy));
    await controller.accept();
    // busy flips on, then the post-mutation refresh reports not busy
    expect(states[0]).toBe(true);
    expect(states[states.length - 1]).toBe(false);
  });
});
