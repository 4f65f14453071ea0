#!/usr/bin/env python3
"""Reproduce the digit-types learning experiment end to end.

Scales the digits scenario, replays the shipped ten-cue script against the
resulting reference context, prints the learning table, and writes the trace
plus per-granule lattice/ensemble snapshots under ``out/digits/``.

Usage: python3 scripts/run_digits_experiment.py [output-dir]
"""

from __future__ import annotations

import sys
from pathlib import Path

from noesis.context import serialize_context
from noesis.ensemble import (
    block_probabilities,
    observable_from_context,
    serialize_belief,
    uniform_prior,
)
from noesis.lattice import export_dot, serialize_lattice
from noesis.scaling import parse_scenario, scale_scenario
from noesis.session import (
    is_conscious,
    parse_script,
    replay,
    serialize_trace,
    snapshot,
    trace_rows,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out/digits")
    out.mkdir(parents=True, exist_ok=True)

    scenario = parse_scenario((FIXTURES / "digits_scenario.json").read_bytes())
    reference, report = scale_scenario(scenario)
    print(f"scaled scenario: {report.instances} instances, "
          f"{report.propositions} propositions, {report.perspectives} perspective(s)")
    (out / "reference_context.json").write_bytes(serialize_context(reference))

    script = parse_script((FIXTURES / "digits_script.json").read_bytes())
    session = replay(reference, script)

    print("\n t  learning  verdict  supporting cue")
    for row in trace_rows(session.trace):
        print(f"{row.granule:>2}  {row.learning or '-':<8}  "
              f"{row.verdict.kind.value:<7}  {row.supporting or '-'}")
    print(f"\nconscious: {is_conscious(session)}; "
          f"objects learnt: {', '.join(session.context.objects)}")

    (out / "trace.jsonl").write_bytes(serialize_trace(session))
    for granule in range(session.granule + 1):
        lattice, belief = snapshot(session, granule)
        (out / f"lattice_{granule:03d}.json").write_bytes(serialize_lattice(lattice))
        (out / f"lattice_{granule:03d}.dot").write_text(
            export_dot(lattice, "reduced"), encoding="utf-8"
        )
        (out / f"ensemble_{granule:03d}.json").write_bytes(serialize_belief(belief))

    final_lattice, final_belief = snapshot(session, session.granule)
    print(f"\nfinal lattice: {len(final_lattice)} concepts "
          f"(granule {session.granule})")
    print("final amplitudes:")
    for attr, amp in zip(final_belief.basis, final_belief.amplitudes):
        print(f"  {attr:<10} {amp:.6f}")
    observable = observable_from_context(reference)
    prior = uniform_prior(reference.attributes)
    print(f"dimension block probability of the prior: "
          f"{block_probabilities(prior, observable)}")
    print(f"\nwrote trace and {session.granule + 1} snapshots to {out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
