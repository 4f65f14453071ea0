import { ApiClient } from "./api.js";
import type { EnsembleDoc, ImplicationDoc, LatticeDoc, SessionSummary } from "./types.js";

export interface ControllerState {
  summary: SessionSummary | null;
  lattice: LatticeDoc | null;
  ensemble: EnsembleDoc | null;
  /** Granule being viewed; null follows the live granule. */
  viewGranule: number | null;
  busy: boolean;
  error: string | null;
}

export type StateListener = (state: ControllerState) => void;

/**
 * All session interaction state, DOM-free so it can be driven headlessly.
 *
 * At most one mutation is in flight at a time; while the view is scrubbed to
 * a past granule the session is presented view-only. Verdicts, suggestions
 * and snapshots all come from the server.
 */
export class SessionController {
  private state: ControllerState = {
    summary: null,
    lattice: null,
    ensemble: null,
    viewGranule: null,
    busy: false,
    error: null,
  };
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly sessionId: string,
    private readonly listener: StateListener = () => {},
  ) {}

  snapshot(): ControllerState {
    return { ...this.state };
  }

  /** Inputs lock whenever the view is not following the live granule. */
  isViewOnly(): boolean {
    return (
      this.state.viewGranule !== null &&
      this.state.summary !== null &&
      this.state.viewGranule !== this.state.summary.granule
    );
  }

  private emit(): void {
    this.listener(this.snapshot());
  }

  private fail(error: unknown): void {
    this.state.error = error instanceof Error ? error.message : String(error);
    this.emit();
  }

  async refresh(): Promise<void> {
    try {
      const summary = await this.api.getSession(this.sessionId);
      const granule = this.state.viewGranule ?? summary.granule;
      const [lattice, ensemble] = await Promise.all([
        this.api.getLattice(this.sessionId, granule),
        this.api.getEnsemble(this.sessionId, granule),
      ]);
      this.state.summary = summary;
      this.state.lattice = lattice;
      this.state.ensemble = ensemble;
      this.state.error = null;
    } catch (error) {
      this.fail(error);
      return;
    }
    this.emit();
  }

  private async mutate(action: () => Promise<unknown>): Promise<boolean> {
    if (this.state.busy) {
      return false;
    }
    this.state.busy = true;
    this.emit();
    try {
      await action();
      this.state.error = null;
    } catch (error) {
      this.fail(error);
      return false;
    } finally {
      this.state.busy = false;
    }
    await this.refresh();
    return this.state.error === null;
  }

  poseCue(cue: ImplicationDoc): Promise<boolean> {
    return this.mutate(() => this.api.postCue(this.sessionId, cue));
  }

  accept(): Promise<boolean> {
    return this.mutate(() => this.api.accept(this.sessionId));
  }

  counterexample(name: string, intent: string[]): Promise<boolean> {
    return this.mutate(() => this.api.counterexample(this.sessionId, name, intent));
  }

  async selectGranule(granule: number | null): Promise<void> {
    this.state.viewGranule = granule;
    await this.refresh();
  }

  startPolling(intervalMs = 1000): void {
    this.stopPolling();
    this.timer = setInterval(() => {
      if (!this.state.busy) {
        void this.refresh();
      }
    }, intervalMs);
  }

  stopPolling(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
