import { ApiClient, ApiError } from "./api.js";
import { SessionController } from "./controller.js";
import type { ControllerState } from "./controller.js";
import { formatImplication } from "./format.js";
import {
  buildIntentPicker,
  renderAmplitudes,
  renderCuePanel,
  renderError,
  renderLattice,
  renderPhaseBadge,
  renderTimeline,
} from "./render.js";
import type { ImplicationDoc, SessionSummary } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

let api = new ApiClient("http://127.0.0.1:8077");
let controller: SessionController | null = null;
let listTimer: ReturnType<typeof setInterval> | null = null;

function renderSessionList(sessions: SessionSummary[]): void {
  const list = byId<HTMLUListElement>("session-list");
  while (list.firstChild) list.removeChild(list.firstChild);
  if (sessions.length === 0) {
    const empty = document.createElement("li");
    empty.textContent = "no sessions yet";
    list.appendChild(empty);
    return;
  }
  for (const session of sessions) {
    const item = document.createElement("li");
    const join = document.createElement("button");
    join.textContent = `${session.id.slice(0, 8)} · ${session.status} · granule ${session.granule}`;
    join.addEventListener("click", () => attach(session.id));
    item.appendChild(join);
    list.appendChild(item);
  }
}

async function refreshSessionList(): Promise<void> {
  try {
    renderSessionList(await api.listSessions());
    renderError(byId("error-banner"), null, connect);
  } catch (error) {
    renderError(
      byId("error-banner"),
      error instanceof Error ? error.message : String(error),
      connect,
    );
  }
}

function connect(): void {
  api = new ApiClient(byId<HTMLInputElement>("base-url").value);
  controller?.stopPolling();
  controller = null;
  byId("session-view").hidden = true;
  if (listTimer !== null) clearInterval(listTimer);
  void refreshSessionList();
  listTimer = setInterval(() => void refreshSessionList(), 1000);
}

function currentCueTarget(state: ControllerState): "awaiting" | "uncertain" | "free" {
  if (state.summary?.awaiting_cue) return "awaiting";
  if (state.summary?.pending) return "uncertain";
  return "free";
}

function onState(state: ControllerState): void {
  renderPhaseBadge(byId("phase-badge"), state);
  renderCuePanel(byId("cue-panel"), state);
  renderError(byId("error-banner"), state.error, () => void controller?.refresh());
  if (state.lattice) {
    renderLattice(byId("lattice") as unknown as SVGSVGElement, state.lattice);
    byId("lattice-count").textContent = `${state.lattice.concepts.length} concepts`;
  }
  if (state.ensemble) {
    renderAmplitudes(byId("amplitudes"), state.ensemble);
  }
  renderTimeline(byId<HTMLInputElement>("timeline"), byId("timeline-label"), state);

  const viewOnly = controller?.isViewOnly() ?? true;
  const target = currentCueTarget(state);
  byId<HTMLButtonElement>("pose-suggested").disabled =
    viewOnly || state.busy || target !== "free" || !state.summary?.suggestion;
  byId<HTMLButtonElement>("pose-custom").disabled = viewOnly || state.busy || target !== "free";
  byId<HTMLButtonElement>("answer-accept").disabled =
    viewOnly || state.busy || target !== "awaiting";
  byId<HTMLButtonElement>("answer-reject").disabled =
    viewOnly || state.busy || target === "free";
}

function rebuildPickers(summary: SessionSummary): void {
  const premiseHost = byId("premise-picker");
  const conclusionHost = byId("conclusion-picker");
  const intentHost = byId("intent-picker");
  premiseHost.replaceChildren(buildIntentPicker(summary.dimensions, "premise").root);
  conclusionHost.replaceChildren(buildIntentPicker(summary.dimensions, "conclusion").root);
  intentHost.replaceChildren(buildIntentPicker(summary.dimensions, "intent").root);
}

function readPicker(hostId: string): string[] {
  return Array.from(byId(hostId).querySelectorAll<HTMLInputElement>("input:checked")).map(
    (b) => b.value,
  );
}

async function attach(sessionId: string): Promise<void> {
  controller?.stopPolling();
  controller = new SessionController(api, sessionId, onState);
  byId("session-view").hidden = false;
  byId("session-id").textContent = sessionId;
  await controller.refresh();
  const summary = controller.snapshot().summary;
  if (summary) {
    rebuildPickers(summary);
  }
  controller.startPolling(1000);
}

function wireForms(): void {
  byId<HTMLButtonElement>("connect").addEventListener("click", connect);

  byId<HTMLButtonElement>("create-session").addEventListener("click", () => {
    void (async () => {
      try {
        const contextText = byId<HTMLTextAreaElement>("context-input").value;
        const oracle = byId<HTMLSelectElement>("oracle-select").value as
          | "interactive"
          | "scripted";
        const body: Record<string, unknown> = {
          context: JSON.parse(contextText),
          oracle,
        };
        if (oracle === "scripted") {
          body.reference = JSON.parse(byId<HTMLTextAreaElement>("reference-input").value);
        }
        const state = await api.createSession(body as never);
        await refreshSessionList();
        await attach(state.id);
      } catch (error) {
        renderError(
          byId("error-banner"),
          error instanceof ApiError ? `${error.kind}: ${error.message}` : String(error),
          connect,
        );
      }
    })();
  });

  byId<HTMLSelectElement>("oracle-select").addEventListener("change", (event) => {
    const scripted = (event.target as HTMLSelectElement).value === "scripted";
    byId("reference-row").hidden = !scripted;
  });

  byId<HTMLButtonElement>("pose-suggested").addEventListener("click", () => {
    const suggestion = controller?.snapshot().summary?.suggestion;
    if (suggestion) {
      void controller?.poseCue(suggestion);
    }
  });

  byId<HTMLButtonElement>("pose-custom").addEventListener("click", () => {
    const cue: ImplicationDoc = {
      premise: readPicker("premise-picker"),
      conclusion: readPicker("conclusion-picker"),
    };
    if (cue.conclusion.length === 0) {
      renderError(byId("error-banner"), "a cue needs at least one conclusion attribute", () => {});
      return;
    }
    void controller?.poseCue(cue);
  });

  byId<HTMLButtonElement>("answer-accept").addEventListener("click", () => {
    void controller?.accept();
  });

  byId<HTMLButtonElement>("answer-reject").addEventListener("click", () => {
    const name = byId<HTMLInputElement>("counterexample-name").value.trim();
    const intent = readPicker("intent-picker");
    if (name === "" || intent.length === 0) {
      renderError(
        byId("error-banner"),
        "a counterexample needs a name and a non-empty intent",
        () => {},
      );
      return;
    }
    void (async () => {
      const ok = await controller?.counterexample(name, intent);
      if (ok) {
        byId<HTMLInputElement>("counterexample-name").value = "";
        const summary = controller?.snapshot().summary;
        if (summary) rebuildPickers(summary);
      }
    })();
  });

  byId<HTMLInputElement>("timeline").addEventListener("input", (event) => {
    const value = Number((event.target as HTMLInputElement).value);
    const live = controller?.snapshot().summary?.granule;
    void controller?.selectGranule(value === live ? null : value);
  });

  byId<HTMLButtonElement>("follow-live").addEventListener("click", () => {
    void controller?.selectGranule(null);
  });
}

document.addEventListener("DOMContentLoaded", () => {
  wireForms();
  connect();
});

export { formatImplication };
