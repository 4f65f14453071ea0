// Wire formats of the /v1 HTTP API. The client renders these verbatim;
// verdicts and closures always come from the server.

export interface ImplicationDoc {
  premise: string[];
  conclusion: string[];
}

export interface DimensionDoc {
  name: string;
  attributes: string[];
}

export interface CounterexampleDoc {
  name: string;
  intent: string[];
}

export interface OracleAnswerDoc {
  accept?: boolean;
  counterexample?: CounterexampleDoc;
}

export interface SessionSummary {
  id: string;
  created_at: string;
  oracle: "scripted" | "interactive";
  phase: string;
  status: string;
  granule: number;
  basis: string[];
  dimensions: DimensionDoc[];
  objects: string[];
  pending: ImplicationDoc | null;
  pending_counterexample: OracleAnswerDoc | null;
  awaiting_cue: ImplicationDoc | null;
  suggestion: ImplicationDoc | null;
}

export interface ConceptDoc {
  extent: string[];
  intent: string[];
}

export interface LatticeDoc {
  concepts: ConceptDoc[];
  hasse: [number, number][];
}

export interface EnsembleDoc {
  amplitudes: number[];
  basis: string[];
  normalized: boolean;
}

export interface VerdictDoc {
  kind: "holds" | "vacuous" | "fails";
  counterexample: string | null;
}

export interface CueResponse {
  verdict: VerdictDoc;
  phase: string;
  status: string;
  granule: number;
  pending: ImplicationDoc | null;
  oracle: OracleAnswerDoc | null;
}

export interface AnswerResponse {
  phase: string;
  granule: number;
}

export type CreateSessionBody = {
  context?: unknown;
  scenario?: unknown;
  oracle: "scripted" | "interactive";
  reference?: unknown;
};
