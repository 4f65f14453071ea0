// End-to-end parity: drive the digits session through the UI controller the
// way a human would click the scripted answers, against a live server, and
// compare the final lattice with the CLI replay's final snapshot.

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import { formatAmplitude } from "../src/format.js";
import { layoutLattice } from "../src/layout.js";
import type { CounterexampleDoc, ImplicationDoc } from "../src/types.js";

const REPO_ROOT = resolve(fileURLToPath(new URL(".", import.meta.url)), "../..");
const PORT = 18234 + (process.pid % 1500);
const BASE = `http://127.0.0.1:${PORT}`;

// The ten cues of the shipped script together with the answers a human
// reading the digits reference would click: "-" rows accept, the others
// reject with the named digit and its row.
const HUMAN_SCRIPT: { cue: ImplicationDoc; answer: "accept" | CounterexampleDoc }[] = [
  {
    cue: { premise: [], conclusion: ["Composite", "Even", "Odd", "Prime", "Square"] },
    answer: { name: "One", intent: ["Odd", "Square"] },
  },
  {
    cue: { premise: [], conclusion: ["Odd", "Square"] },
    answer: { name: "Two", intent: ["Even", "Prime"] },
  },
  {
    cue: { premise: ["Square"], conclusion: ["Odd"] },
    answer: { name: "Four", intent: ["Composite", "Even", "Square"] },
  },
  {
    cue: { premise: ["Prime"], conclusion: ["Even"] },
    answer: { name: "Three", intent: ["Odd", "Prime"] },
  },
  {
    cue: { premise: ["Prime", "Square"], conclusion: ["Composite", "Even", "Odd"] },
    answer: "accept",
  },
  { cue: { premise: ["Even", "Square"], conclusion: ["Composite"] }, answer: "accept" },
  {
    cue: { premise: ["Composite"], conclusion: ["Even", "Square"] },
    answer: { name: "Six", intent: ["Composite", "Even"] },
  },
  {
    cue: { premise: ["Even", "Odd"], conclusion: ["Composite", "Prime", "Square"] },
    answer: "accept",
  },
  {
    cue: { premise: ["Composite"], conclusion: ["Even"] },
    answer: { name: "Nine", intent: ["Composite", "Odd", "Square"] },
  },
  { cue: { premise: ["Composite", "Odd"], conclusion: ["Square"] }, answer: "accept" },
];

let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt += 1) {
    try {
      const response = await fetch(`${BASE}/v1/sessions`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("noesis server did not come up");
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "noesis.cli", "serve", "--addr", `127.0.0.1:${PORT}`], {
    cwd: REPO_ROOT,
    stdio: "ignore",
  });
  await waitForServer();
}, 30_000);

afterAll(() => {
  server?.kill();
});

describe("digits session driven through the UI", () => {
  it("matches the CLI replay snapshot and shows the expected view", async () => {
    const referenceDoc = JSON.parse(
      readFileSync(join(REPO_ROOT, "fixtures", "digits_context.json"), "utf-8"),
    );
    const attributeOnly = {
      dimensions: referenceDoc.dimensions,
      objects: [],
      incidence: [],
      granules: {},
    };

    const api = new ApiClient(BASE);
    const created = await api.createSession({ context: attributeOnly, oracle: "interactive" });
    const controller = new SessionController(api, created.id);
    await controller.refresh();

    for (const step of HUMAN_SCRIPT) {
      expect(await controller.poseCue(step.cue)).toBe(true);
      const summary = controller.snapshot().summary!;
      if (summary.awaiting_cue !== null) {
        if (step.answer === "accept") {
          expect(await controller.accept()).toBe(true);
        } else {
          expect(await controller.counterexample(step.answer.name, step.answer.intent)).toBe(true);
        }
      } else {
        // locally refuted cue: the server answered without the oracle
        expect(step.answer).toBe("accept");
      }
    }

    const final = controller.snapshot();
    expect(final.summary?.phase).toBe("conscious");
    expect(final.summary?.granule).toBe(9);
    expect(final.summary?.objects).toEqual(["One", "Two", "Four", "Three", "Six", "Nine"]);

    // CLI replay of the same fixtures, for the parity comparison
    const snapshotDir = mkdtempSync(join(tmpdir(), "noesis-snaps-"));
    const cli = spawnSync(
      "python3",
      [
        "-m",
        "noesis.cli",
        "replay",
        "--reference",
        join("fixtures", "digits_context.json"),
        "--script",
        join("fixtures", "digits_script.json"),
        "--snapshots",
        snapshotDir,
        "--trace",
        join(snapshotDir, "trace.jsonl"),
      ],
      { cwd: REPO_ROOT, encoding: "utf-8" },
    );
    expect(cli.status).toBe(0);

    const servedLattice = await api.getLatticeRaw(created.id);
    const cliLattice = readFileSync(join(snapshotDir, "lattice_009.json"), "utf-8");
    expect(servedLattice).toBe(cliLattice);

    const servedTrace = await api.getTrace(created.id);
    const cliTrace = readFileSync(join(snapshotDir, "trace.jsonl"), "utf-8");
    expect(servedTrace).toBe(cliTrace);

    // the view the human sees: 14 lattice nodes at the final granule
    const nodes = layoutLattice(final.lattice!).nodes;
    expect(nodes).toHaveLength(14);

    // and uniform 0.447 bars back at granule 0
    await controller.selectGranule(0);
    const granuleZero = controller.snapshot();
    expect(controller.isViewOnly()).toBe(true);
    const bars = granuleZero.ensemble!.amplitudes.map(formatAmplitude);
    expect(bars).toEqual(["0.447", "0.447", "0.447", "0.447", "0.447"]);
  }, 60_000);
});
