"""The interactive learning protocol: cues, uncertainty, supporting cues, traces.

A session walks the lifecycle of a mental ensemble. Measurement cues are
attribute implications posed against the current context; an oracle (a
reference context, or a human) confirms each cue or rejects it with a
counterexample object. A rejected cue the current context cannot refute puts
the session into the uncertain phase; inserting the counterexample restores
certainty, because the ensemble can now refute the cue itself. One granule per
posed cue: confirmed cues advance time with the context unchanged, resolved
counterexamples enter the context at the following granule.

Sessions are immutable values; every operation returns a fresh session plus
the trace event it appended, so per-granule snapshots and byte-identical
replays come for free.
"""

from __future__ import annotations

import json
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum

from .context import FormalContext, canonical_json
from .ensemble import BeliefState, reinforce_from_support, uniform_prior
from .errors import (
    EmptyBasis,
    NoesisError,
    NotACounterexample,
    OracleUnavailable,
    ParseError,
    ProtocolViolation,
    UnknownGranule,
    ValidationError,
)
from .lattice import (
    ConceptLattice,
    Implication,
    Verdict,
    VerdictKind,
    enumerate_concepts,
    holds,
    insert_object,
)


class Phase(str, Enum):
    BELIEF = "belief"
    CONSCIOUS = "conscious"
    UNCERTAIN = "uncertain"
    TERMINAL = "terminal"


@dataclass(frozen=True)
class OracleAnswer:
    accept: bool
    counterexample_name: str | None = None
    counterexample_intent: frozenset[str] | None = None

    @staticmethod
    def accepted() -> "OracleAnswer":
        return OracleAnswer(accept=True)

    @staticmethod
    def rejected(name: str, intent: Iterable[str]) -> "OracleAnswer":
        return OracleAnswer(accept=False, counterexample_name=name, counterexample_intent=frozenset(intent))


@dataclass(frozen=True)
class ScriptedOracle:
    """Answers cues from a fixed reference context.

    Accepts exactly the implications that hold (or hold vacuously) in the
    reference; otherwise returns the first violating object in declaration
    order, together with its full row, as the supporting cue.
    """

    reference: FormalContext

    def answer(self, imp: Implication) -> OracleAnswer:
        verdict = holds(self.reference, imp)
        if verdict.kind is not VerdictKind.FAILS:
            return OracleAnswer.accepted()
        name = verdict.counterexample
        assert name is not None
        return OracleAnswer.rejected(name, self.reference.intent_of(name))


@dataclass(frozen=True)
class TraceEvent:
    granule: int
    learning_cue: tuple[str, frozenset[str]] | None
    measurement_cue: Implication | None
    local_verdict: Verdict | None
    oracle_answer: OracleAnswer | None
    resulting_phase: Phase


@dataclass(frozen=True)
class Session:
    """Protocol state: one value per step, sharing history with its ancestors."""

    phase: Phase
    granule: int
    contexts: tuple[FormalContext, ...]
    lattice: ConceptLattice
    pending: Implication | None
    pending_answer: OracleAnswer | None
    row_has_cue: bool
    trace: tuple[TraceEvent, ...]
    accepted: frozenset[tuple[frozenset[str], frozenset[str]]]
    oracle: object | None = field(compare=False, default=None)

    @property
    def context(self) -> FormalContext:
        return self.contexts[-1]

    @property
    def basis(self) -> tuple[str, ...]:
        return self.contexts[0].attributes


def start_session(initial: FormalContext, oracle: object | None = None) -> Session:
    """Open a session in the belief phase at granule 0 with a uniform prior."""
    if not initial.attributes:
        raise EmptyBasis("a session needs at least one declared attribute")
    start_event = TraceEvent(
        granule=0,
        learning_cue=None,
        measurement_cue=None,
        local_verdict=None,
        oracle_answer=None,
        resulting_phase=Phase.BELIEF,
    )
    return Session(
        phase=Phase.BELIEF,
        granule=0,
        contexts=(initial,),
        lattice=enumerate_concepts(initial),
        pending=None,
        pending_answer=None,
        row_has_cue=False,
        trace=(start_event,),
        accepted=frozenset(),
        oracle=oracle,
    )


def _apply_cue(
    s: Session,
    imp: Implication,
    answer_fn: Callable[[Implication], OracleAnswer],
) -> tuple[Session, TraceEvent]:
    if s.phase not in (Phase.BELIEF, Phase.CONSCIOUS):
        raise ProtocolViolation(f"cannot pose a cue while {s.phase.value}")
    granule = s.granule + 1 if s.row_has_cue else s.granule
    contexts = s.contexts + (s.context,) if s.row_has_cue else s.contexts

    verdict = holds(s.context, imp)
    answer: OracleAnswer | None
    if verdict.kind is VerdictKind.FAILS:
        # The ensemble can refute this itself; the oracle is not consulted.
        answer = None
        phase = Phase.CONSCIOUS
        pending = None
        pending_answer = None
        accepted = s.accepted
    else:
        answer = answer_fn(imp)
        if answer.accept:
            phase = Phase.CONSCIOUS
            pending = None
            pending_answer = None
            accepted = s.accepted | {(imp.premise, imp.conclusion)}
        else:
            phase = Phase.UNCERTAIN
            pending = imp
            pending_answer = answer
            accepted = s.accepted

    event = TraceEvent(
        granule=granule,
        learning_cue=None,
        measurement_cue=imp,
        local_verdict=verdict,
        oracle_answer=answer,
        resulting_phase=phase,
    )
    session = replace(
        s,
        phase=phase,
        granule=granule,
        contexts=contexts,
        pending=pending,
        pending_answer=pending_answer,
        row_has_cue=True,
        trace=s.trace + (event,),
        accepted=accepted,
    )
    return session, event


def pose_cue(s: Session, imp: Implication) -> tuple[Session, TraceEvent]:
    """Pose a measurement cue, consulting the session's own oracle when needed."""

    def ask(question: Implication) -> OracleAnswer:
        if s.oracle is None:
            raise OracleUnavailable("session has no oracle to consult")
        try:
            return s.oracle.answer(question)  # type: ignore[attr-defined]
        except NoesisError:
            raise
        except Exception as exc:
            raise OracleUnavailable(f"oracle failed to answer: {exc}") from exc

    return _apply_cue(s, imp, ask)


def apply_oracle_answer(s: Session, imp: Implication, answer: OracleAnswer) -> tuple[Session, TraceEvent]:
    """Pose a cue whose oracle answer is already known (interactive two-phase flow)."""
    return _apply_cue(s, imp, lambda _: answer)


def refutes(intent: Iterable[str], imp: Implication) -> bool:
    """Would an object with this intent falsify the implication?"""
    intent = frozenset(intent)
    return imp.premise <= intent and not imp.conclusion <= intent


def resolve(s: Session, name: str, intent: Iterable[str]) -> tuple[Session, TraceEvent]:
    """Insert a supporting-cue object to discharge the pending uncertainty.

    The object enters the context at the next granule; since it refutes the
    pending cue, the ensemble regains certainty (it now recalls why the cue is
    false) and the phase returns to conscious.
    """
    if s.phase is not Phase.UNCERTAIN or s.pending is None:
        raise ProtocolViolation("nothing pending to resolve")
    intent = frozenset(intent)
    if not s.pending.premise <= intent:
        raise NotACounterexample(
            f"object {name!r} does not bear the pending premise; it cannot answer the cue"
        )
    if s.pending.conclusion <= intent:
        raise NotACounterexample(
            f"object {name!r} satisfies the pending implication; it is not a counterexample"
        )
    new_lattice = insert_object(s.lattice, name, intent, s.granule + 1)
    new_ctx = new_lattice.context
    verdict = holds(new_ctx, s.pending)
    event = TraceEvent(
        granule=s.granule + 1,
        learning_cue=(name, intent),
        measurement_cue=s.pending,
        local_verdict=verdict,
        oracle_answer=None,
        resulting_phase=Phase.CONSCIOUS,
    )
    session = replace(
        s,
        phase=Phase.CONSCIOUS,
        granule=s.granule + 1,
        contexts=s.contexts + (new_ctx,),
        lattice=new_lattice,
        pending=None,
        pending_answer=None,
        row_has_cue=False,
        trace=s.trace + (event,),
    )
    return session, event


def terminate(s: Session) -> tuple[Session, TraceEvent]:
    """Give up / close the session from any live phase."""
    if s.phase is Phase.TERMINAL:
        raise ProtocolViolation("session already terminal")
    event = TraceEvent(
        granule=s.granule,
        learning_cue=None,
        measurement_cue=None,
        local_verdict=None,
        oracle_answer=None,
        resulting_phase=Phase.TERMINAL,
    )
    session = replace(s, phase=Phase.TERMINAL, pending=None, pending_answer=None, trace=s.trace + (event,))
    return session, event


def is_conscious(s: Session) -> bool:
    return s.phase is Phase.CONSCIOUS and s.pending is None


def snapshot(s: Session, granule: int) -> tuple[ConceptLattice, BeliefState]:
    """Lattice and ensemble as of a past granule.

    The ensemble is the support-reinforced state of that granule's context;
    granule 0 (and any context without incidence) falls back to the uniform
    prior, which is where every session starts.
    """
    if granule < 0 or granule > s.granule:
        raise UnknownGranule(f"granule {granule} outside 0..{s.granule}")
    ctx = s.contexts[granule]
    lattice = s.lattice if granule == s.granule else enumerate_concepts(ctx)
    if granule == 0 or all(row == 0 for row in ctx.rows) or not ctx.objects:
        belief = uniform_prior(s.basis)
    else:
        belief = reinforce_from_support(ctx)
    return lattice, belief


def suggest_cue(s: Session) -> Implication | None:
    """Lectically least unconfirmed implication A -> {b} the context cannot refute.

    Scans premises in lectic order (first attribute most significant), so the
    suggestion is deterministic; cost is exponential in the basis size, which
    is fine at the interactive scales this assists.
    """
    if s.phase not in (Phase.BELIEF, Phase.CONSCIOUS):
        raise ProtocolViolation(f"cannot suggest a cue while {s.phase.value}")
    ctx = s.context
    m = len(ctx.attributes)
    for number in range(1 << m):
        premise_mask = 0
        for i in range(m):
            if number & (1 << (m - 1 - i)):
                premise_mask |= 1 << i
        premise = frozenset(ctx.mask_to_attrs(premise_mask))
        for j in range(m):
            if premise_mask & (1 << j):
                continue
            conclusion = frozenset({ctx.attributes[j]})
            if (premise, conclusion) in s.accepted:
                continue
            imp = Implication(premise, conclusion)
            if holds(ctx, imp).kind is not VerdictKind.FAILS:
                return imp
    return None


# --- scripted replay ---


def attribute_only_context(reference: FormalContext) -> FormalContext:
    return FormalContext(objects=(), dimensions=reference.dimensions, rows=(), granules=())


def replay(
    reference: FormalContext,
    script: Sequence[Implication],
    initial: FormalContext | None = None,
) -> Session:
    """Drive a full session against a scripted oracle.

    Starts from the attribute-only context (the reference's basis), poses
    every cue in order, and resolves each rejection with the oracle's own
    counterexample, producing one learning-table row per cue.
    """
    oracle = ScriptedOracle(reference)
    s = start_session(initial if initial is not None else attribute_only_context(reference), oracle)
    for imp in script:
        s, _ = pose_cue(s, imp)
        if s.phase is Phase.UNCERTAIN:
            answer = s.pending_answer
            assert answer is not None and answer.counterexample_name is not None
            s, _ = resolve(s, answer.counterexample_name, answer.counterexample_intent or frozenset())
    return s


# --- trace wire format ---


def _ordered_attrs(order: Sequence[str], attrs: Iterable[str]) -> list[str]:
    wanted = set(attrs)
    return [a for a in order if a in wanted]


def event_to_document(event: TraceEvent, attribute_order: Sequence[str]) -> dict:
    learning = None
    if event.learning_cue is not None:
        name, intent = event.learning_cue
        learning = {"name": name, "intent": _ordered_attrs(attribute_order, intent)}
    cue = None
    if event.measurement_cue is not None:
        cue = {
            "premise": _ordered_attrs(attribute_order, event.measurement_cue.premise),
            "conclusion": _ordered_attrs(attribute_order, event.measurement_cue.conclusion),
        }
    verdict = None
    if event.local_verdict is not None:
        verdict = {
            "kind": event.local_verdict.kind.value,
            "counterexample": event.local_verdict.counterexample,
        }
    answer = None
    if event.oracle_answer is not None:
        if event.oracle_answer.accept:
            answer = {"accept": True}
        else:
            answer = {
                "counterexample": {
                    "name": event.oracle_answer.counterexample_name,
                    "intent": _ordered_attrs(
                        attribute_order, event.oracle_answer.counterexample_intent or frozenset()
                    ),
                }
            }
    return {
        "granule": event.granule,
        "learning_cue": learning,
        "measurement_cue": cue,
        "local_verdict": verdict,
        "oracle_answer": answer,
        "resulting_phase": event.resulting_phase.value,
    }


def serialize_trace(s: Session) -> bytes:
    """JSON Lines, one event per line, fixed field order."""
    order = s.basis
    lines = [
        json.dumps(event_to_document(e, order), separators=(",", ":"), ensure_ascii=False)
        for e in s.trace
    ]
    return ("\n".join(lines) + "\n").encode("utf-8")


@dataclass(frozen=True)
class TraceRow:
    """One learning-table row: what was learnt, what was asked, how it went."""

    granule: int
    learning: str | None
    cue: Implication
    verdict: Verdict
    supporting: str | None


def trace_rows(events: Sequence[TraceEvent]) -> list[TraceRow]:
    """Fold the event stream into learning-table rows (one per posed cue)."""
    learnt_at: dict[int, str] = {}
    for event in events:
        if event.learning_cue is not None:
            learnt_at[event.granule] = event.learning_cue[0]
    rows = []
    for event in events:
        if event.measurement_cue is None or event.learning_cue is not None:
            continue
        supporting = None
        if event.oracle_answer is not None and not event.oracle_answer.accept:
            supporting = event.oracle_answer.counterexample_name
        rows.append(
            TraceRow(
                granule=event.granule,
                learning=learnt_at.get(event.granule),
                cue=event.measurement_cue,
                verdict=event.local_verdict,  # type: ignore[arg-type]
                supporting=supporting,
            )
        )
    return rows


def parse_script(data: bytes | str) -> list[Implication]:
    """Script file: JSON list of {"premise": [...], "conclusion": [...]}."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    if not isinstance(doc, list):
        raise ParseError("script must be a JSON list of implications")
    cues = []
    for i, entry in enumerate(doc):
        if not isinstance(entry, dict) or "premise" not in entry or "conclusion" not in entry:
            raise ParseError(f"script entry {i} needs premise and conclusion lists")
        try:
            cues.append(Implication(frozenset(entry["premise"]), frozenset(entry["conclusion"])))
        except ValidationError as exc:
            raise ParseError(f"script entry {i}: {exc}") from None
    return cues


def serialize_script(cues: Sequence[Implication], attribute_order: Sequence[str]) -> bytes:
    return canonical_json(
        [
            {
                "premise": _ordered_attrs(attribute_order, imp.premise),
                "conclusion": _ordered_attrs(attribute_order, imp.conclusion),
            }
            for imp in cues
        ]
    )


def session_from_trace(
    initial: FormalContext,
    events: Sequence[TraceEvent],
    oracle: object | None = None,
) -> Session:
    """Rebuild an equivalent session by replaying an exported event stream."""
    s = start_session(initial, oracle)
    for event in events:
        if event.measurement_cue is None and event.learning_cue is None:
            if event.resulting_phase is Phase.TERMINAL:
                s, _ = terminate(s)
            continue
        if event.learning_cue is not None:
            name, intent = event.learning_cue
            s, _ = resolve(s, name, intent)
        else:
            answer = event.oracle_answer
            if answer is None:
                # Internally refuted cue: any answer works, none is consulted.
                answer = OracleAnswer.accepted()
            s, _ = apply_oracle_answer(s, event.measurement_cue, answer)
    return s
