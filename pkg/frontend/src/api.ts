import type {
  AnswerResponse,
  CreateSessionBody,
  CueResponse,
  EnsembleDoc,
  ImplicationDoc,
  LatticeDoc,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly kind: string,
    detail: string,
  ) {
    super(detail);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the /v1 endpoints. */
export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "") + "/v1";
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      let kind = "HttpError";
      let detail = `${response.status}`;
      try {
        const body = (await response.json()) as { error?: string; detail?: string };
        kind = body.error ?? kind;
        detail = body.detail ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, kind, detail);
    }
    return response;
  }

  private async getJson<T>(path: string): Promise<T> {
    return (await this.request(path)).json() as Promise<T>;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const response = await this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return response.json() as Promise<T>;
  }

  async listSessions(): Promise<SessionSummary[]> {
    const doc = await this.getJson<{ sessions: SessionSummary[] }>("/sessions");
    return doc.sessions;
  }

  async createSession(body: CreateSessionBody): Promise<SessionSummary> {
    const doc = await this.postJson<{ id: string; state: SessionSummary }>("/sessions", body);
    return doc.state;
  }

  getSession(id: string): Promise<SessionSummary> {
    return this.getJson(`/sessions/${id}`);
  }

  postCue(id: string, cue: ImplicationDoc): Promise<CueResponse> {
    return this.postJson(`/sessions/${id}/cue`, cue);
  }

  accept(id: string): Promise<AnswerResponse> {
    return this.postJson(`/sessions/${id}/answer`, { accept: true });
  }

  counterexample(id: string, name: string, intent: string[]): Promise<AnswerResponse> {
    return this.postJson(`/sessions/${id}/answer`, { counterexample: { name, intent } });
  }

  private granuleQuery(granule?: number): string {
    return granule === undefined ? "" : `?granule=${granule}`;
  }

  getLattice(id: string, granule?: number): Promise<LatticeDoc> {
    return this.getJson(`/sessions/${id}/lattice${this.granuleQuery(granule)}`);
  }

  /** Raw body, byte-for-byte as the server serialized it. */
  async getLatticeRaw(id: string, granule?: number): Promise<string> {
    return (await this.request(`/sessions/${id}/lattice${this.granuleQuery(granule)}`)).text();
  }

  getEnsemble(id: string, granule?: number): Promise<EnsembleDoc> {
    return this.getJson(`/sessions/${id}/ensemble${this.granuleQuery(granule)}`);
  }

  async getTrace(id: string): Promise<string> {
    return (await this.request(`/sessions/${id}/trace`)).text();
  }
}
