"""Command-line front door: scale, lattice, replay, explore, serve.

Exit codes are part of the contract: 0 success, 2 parse failure, 3 validation
failure, 4 protocol failure during a session. Output is plain UTF-8 (no color,
so NO_COLOR needs no special handling); result documents are written exactly
as the library serializes them.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .context import parse_context, serialize_context
from .ensemble import serialize_belief
from .errors import (
    NoesisError,
    ParseError,
    ProtocolViolation,
    ValidationError,
)
from .lattice import Implication, enumerate_concepts, export_dot, holds, serialize_lattice
from .scaling import parse_scenario, scale_scenario, validate_scenario
from .session import (
    OracleAnswer,
    Phase,
    Session,
    apply_oracle_answer,
    is_conscious,
    parse_script,
    replay,
    resolve,
    serialize_trace,
    snapshot,
    start_session,
    suggest_cue,
    terminate,
    trace_rows,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_PROTOCOL = 4


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_context(path: str):
    fmt = "cxt" if path.endswith(".cxt") else "json"
    return parse_context(_read(path), fmt)


def _cmd_scale(args: argparse.Namespace) -> int:
    scenario = parse_scenario(_read(args.scenario))
    report = validate_scenario(scenario)
    if report.warnings:
        for warning in report.warnings:
            print(warning, file=sys.stderr)
        return EXIT_VALIDATION
    ctx, report = scale_scenario(scenario)
    payload = serialize_context(ctx)
    if args.output:
        Path(args.output).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
    print(
        f"scaled {report.instances} instances x {report.propositions} propositions "
        f"across {report.perspectives} perspectives",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_lattice(args: argparse.Namespace) -> int:
    ctx = _load_context(args.context)
    lat = enumerate_concepts(ctx)
    if args.json:
        Path(args.json).write_bytes(serialize_lattice(lat))
    if args.dot:
        Path(args.dot).write_text(export_dot(lat, args.labels), encoding="utf-8")
    print(f"{len(lat)} concepts")
    return EXIT_OK


def _write_snapshots(session: Session, directory: str) -> None:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for granule in range(session.granule + 1):
        lattice, belief = snapshot(session, granule)
        (out / f"lattice_{granule:03d}.json").write_bytes(serialize_lattice(lattice))
        (out / f"lattice_{granule:03d}.dot").write_text(export_dot(lattice, "reduced"), encoding="utf-8")
        (out / f"ensemble_{granule:03d}.json").write_bytes(serialize_belief(belief))


def _print_replay_summary(session: Session) -> None:
    print(" t  learning  verdict  supporting")
    for row in trace_rows(session.trace):
        learning = row.learning or "-"
        supporting = row.supporting or "-"
        print(f"{row.granule:>2}  {learning:<8}  {row.verdict.kind.value:<7}  {supporting}")
    objects = len(session.context.objects)
    print(f"conscious: {str(is_conscious(session)).lower()} ({objects} objects learnt)")


def _cmd_replay(args: argparse.Namespace) -> int:
    reference = _load_context(args.reference)
    script = parse_script(_read(args.script))
    try:
        session = replay(reference, script)
    except NoesisError as exc:
        print(f"replay aborted: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    if args.trace:
        Path(args.trace).write_bytes(serialize_trace(session))
    if args.snapshots:
        _write_snapshots(session, args.snapshots)
    _print_replay_summary(session)
    return EXIT_OK


def _parse_attr_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _parse_cue_line(line: str) -> Implication:
    if "->" not in line:
        raise ValidationError("cue format: premise -> conclusion (comma-separated attributes)")
    left, right = line.split("->", 1)
    return Implication(frozenset(_parse_attr_list(left)), frozenset(_parse_attr_list(right)))


def _cmd_explore(args: argparse.Namespace) -> int:
    ctx = _load_context(args.context)
    session = start_session(ctx)
    print(f"basis: {', '.join(session.basis)}")
    print("you are the oracle: confirm cues or reject them with a counterexample")

    def finish(final: Session) -> int:
        if args.trace:
            Path(args.trace).write_bytes(serialize_trace(final))
        print(f"phase: {final.phase.value}, granule: {final.granule}")
        return EXIT_OK

    while True:
        suggestion = suggest_cue(session)
        if suggestion is not None:
            premise = ", ".join(a for a in session.basis if a in suggestion.premise)
            conclusion = ", ".join(a for a in session.basis if a in suggestion.conclusion)
            print(f"suggested cue: {{{premise}}} -> {{{conclusion}}}")
        else:
            print("no unconfirmed cue remains")
        try:
            line = input("cue (premise -> conclusion | enter=suggested | quit)> ").strip()
        except EOFError:
            line = "quit"
        if line in ("quit", "q"):
            session, _ = terminate(session)
            return finish(session)
        if line:
            try:
                imp = _parse_cue_line(line)
            except NoesisError as exc:
                print(f"bad cue: {exc}")
                continue
        elif suggestion is not None:
            imp = suggestion
        else:
            continue

        verdict = holds(session.context, imp)
        print(f"local verdict: {verdict.kind.value}"
              + (f" (counterexample {verdict.counterexample})" if verdict.counterexample else ""))
        if verdict.kind.value == "fails":
            session, _ = apply_oracle_answer(session, imp, OracleAnswer.accepted())
            continue

        try:
            answer_line = input("oracle (accept | reject NAME: attr, attr | quit)> ").strip()
        except EOFError:
            answer_line = "quit"
        if answer_line in ("quit", "q"):
            session, _ = terminate(session)
            return finish(session)
        if answer_line in ("accept", "a", "yes", "y"):
            session, _ = apply_oracle_answer(session, imp, OracleAnswer.accepted())
            print(f"conscious at granule {session.granule}")
            continue
        if answer_line.startswith("reject "):
            rest = answer_line[len("reject "):]
            if ":" not in rest:
                print("format: reject NAME: attr, attr")
                continue
            name, intent_text = rest.split(":", 1)
            name = name.strip()
            intent = _parse_attr_list(intent_text)
            try:
                session, _ = apply_oracle_answer(session, imp, OracleAnswer.rejected(name, intent))
                session, _ = resolve(session, name, intent)
            except NoesisError as exc:
                print(f"rejected answer: {exc}")
                continue
            print(f"learnt {name} at granule {session.granule}")
            continue
        print("unrecognized answer")


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    addr = args.addr or os.environ.get("NOESIS_ADDR") or "127.0.0.1:8077"
    host, _, port_text = addr.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"bad address {addr!r}; expected host:port", file=sys.stderr)
        return EXIT_PARSE
    app = create_app(trace_dir=args.trace_dir)
    try:
        uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    except (OSError, SystemExit) as exc:
        print(f"serve failed: {exc}", file=sys.stderr)
        return 1
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noesis",
        description="Conceptual scaling, concept lattices, and the interactive learning protocol.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_scale = sub.add_parser("scale", help="scale a scenario file into a formal context")
    p_scale.add_argument("scenario", help="scenario JSON file")
    p_scale.add_argument("-o", "--output", help="context JSON output path (default: stdout)")
    p_scale.set_defaults(func=_cmd_scale)

    p_lat = sub.add_parser("lattice", help="enumerate the concept lattice of a context")
    p_lat.add_argument("context", help="context file (.json or .cxt)")
    p_lat.add_argument("--dot", help="write a DOT rendering here")
    p_lat.add_argument("--json", help="write the lattice JSON here")
    p_lat.add_argument("--labels", choices=["full", "reduced"], default="full", help="DOT label mode")
    p_lat.set_defaults(func=_cmd_lattice)

    p_replay = sub.add_parser("replay", help="drive a session from a script against a reference")
    p_replay.add_argument("--reference", required=True, help="reference context file")
    p_replay.add_argument("--script", required=True, help="cue script JSON file")
    p_replay.add_argument("--trace", help="write the trace JSONL here")
    p_replay.add_argument("--snapshots", help="write per-granule lattice/ensemble files here")
    p_replay.set_defaults(func=_cmd_replay)

    p_explore = sub.add_parser("explore", help="interactive terminal session with you as the oracle")
    p_explore.add_argument("--context", required=True, help="starting context file")
    p_explore.add_argument("--trace", help="write the trace JSONL here on exit")
    p_explore.set_defaults(func=_cmd_explore)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--addr", help="bind address host:port (default: NOESIS_ADDR or 127.0.0.1:8077)")
    p_serve.add_argument("--trace-dir", help="write session traces into this directory")
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ProtocolViolation as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    except NoesisError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
