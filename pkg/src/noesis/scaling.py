"""Theory-driven conceptual scaling of raw scenarios into formal contexts.

A scenario lists perspectives (each a set of categorical propositions) and a
timeline of instances with a truth value for every proposition. Scaling turns
each perspective into a quality dimension, each proposition into an attribute,
and each instance into an object whose incidence row records which
propositions held. Truth is closed-world: every proposition needs an explicit
value, because derivations are undefined on partial incidence.
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from .context import FormalContext, QualityDimension, canonical_json, new_context
from .errors import (
    DuplicateInstance,
    DuplicateName,
    GranuleRegression,
    MissingTruth,
    ParseError,
    ShapeMismatch,
    ValidationError,
)


@dataclass(frozen=True)
class Perspective:
    name: str
    propositions: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "propositions", tuple(self.propositions))
        if not self.propositions:
            raise ShapeMismatch(f"perspective {self.name!r} declares no propositions")
        seen = set()
        for prop in self.propositions:
            if prop in seen:
                raise DuplicateName(f"proposition {prop!r} repeated within perspective {self.name!r}")
            seen.add(prop)


@dataclass(frozen=True)
class TimelineEntry:
    granule: int
    instance: str
    truth: Mapping[str, bool]

    def __post_init__(self) -> None:
        if self.granule < 0:
            raise ShapeMismatch(f"granule for {self.instance!r} must be non-negative")


@dataclass(frozen=True)
class Scenario:
    perspectives: tuple[Perspective, ...]
    timeline: tuple[TimelineEntry, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "perspectives", tuple(self.perspectives))
        object.__setattr__(self, "timeline", tuple(self.timeline))
        previous = 0
        for entry in self.timeline:
            if entry.granule < previous:
                raise GranuleRegression(
                    f"timeline granule {entry.granule} after granule {previous}"
                )
            previous = entry.granule


@dataclass(frozen=True)
class ScaleReport:
    instances: int
    perspectives: int
    propositions: int
    warnings: tuple[str, ...] = field(default_factory=tuple)


def _findings(s: Scenario) -> list[str]:
    known = {prop for p in s.perspectives for prop in p.propositions}
    findings = []
    seen: set[str] = set()
    for entry in s.timeline:
        if entry.instance in seen:
            findings.append(f"DuplicateInstance: {entry.instance!r} appears more than once")
        seen.add(entry.instance)
        for perspective in s.perspectives:
            for prop in perspective.propositions:
                if prop not in entry.truth:
                    findings.append(f"MissingTruth: {entry.instance!r} has no value for {prop!r}")
        for prop in entry.truth:
            if prop not in known:
                findings.append(f"UnknownProposition: {entry.instance!r} asserts undeclared {prop!r}")
    return findings


def validate_scenario(s: Scenario) -> ScaleReport:
    """Collect every finding as a report entry without building a context."""
    return ScaleReport(
        instances=len({e.instance for e in s.timeline}),
        perspectives=len(s.perspectives),
        propositions=sum(len(p.propositions) for p in s.perspectives),
        warnings=tuple(_findings(s)),
    )


def scale_scenario(s: Scenario) -> tuple[FormalContext, ScaleReport]:
    """Build the conceptual scale of a scenario.

    One dimension per perspective, one attribute per proposition, incidence
    bit set exactly when the proposition is true for the instance, birth
    granules copied from the timeline.
    """
    dims = [QualityDimension(p.name, p.propositions) for p in s.perspectives]
    objects: list[str] = []
    granules: dict[str, int] = {}
    for entry in s.timeline:
        if entry.instance in granules:
            raise DuplicateInstance(f"instance {entry.instance!r} appears more than once")
        objects.append(entry.instance)
        granules[entry.instance] = entry.granule

    known = {prop for p in s.perspectives for prop in p.propositions}
    for entry in s.timeline:
        for prop in entry.truth:
            if prop not in known:
                raise ValidationError(
                    f"instance {entry.instance!r} asserts undeclared proposition {prop!r}"
                )

    n_props = sum(len(p.propositions) for p in s.perspectives)
    rows = [[0] * n_props for _ in objects]
    column = 0
    for perspective in s.perspectives:
        for prop in perspective.propositions:
            for i, entry in enumerate(s.timeline):
                if prop not in entry.truth:
                    raise MissingTruth(
                        f"instance {entry.instance!r} has no value for proposition {prop!r}"
                    )
                rows[i][column] = 1 if entry.truth[prop] else 0
            column += 1

    ctx = new_context(objects, dims, rows, granules)
    report = ScaleReport(
        instances=len(objects),
        perspectives=len(s.perspectives),
        propositions=n_props,
    )
    return ctx, report


# --- JSON wire format ---


def scenario_from_document(doc: object) -> Scenario:
    if not isinstance(doc, dict):
        raise ParseError("scenario document must be a JSON object")
    try:
        raw_perspectives = doc["perspectives"]
        raw_timeline = doc["timeline"]
    except KeyError as exc:
        raise ParseError(f"scenario document missing key {exc.args[0]!r}") from None
    if not isinstance(raw_perspectives, list) or not isinstance(raw_timeline, list):
        raise ParseError("scenario perspectives and timeline must be lists")
    perspectives = []
    for entry in raw_perspectives:
        if not isinstance(entry, dict) or "name" not in entry or "propositions" not in entry:
            raise ParseError("each perspective needs a name and a proposition list")
        perspectives.append(Perspective(entry["name"], tuple(entry["propositions"])))
    timeline = []
    for entry in raw_timeline:
        if not isinstance(entry, dict) or not {"granule", "instance", "truth"} <= set(entry):
            raise ParseError("each timeline entry needs granule, instance and truth")
        granule = entry["granule"]
        truth = entry["truth"]
        if not isinstance(granule, int) or isinstance(granule, bool):
            raise ParseError(f"granule for {entry['instance']!r} must be an integer")
        if not isinstance(truth, dict) or any(not isinstance(v, bool) for v in truth.values()):
            raise ParseError(f"truth map for {entry['instance']!r} must hold booleans")
        timeline.append(TimelineEntry(granule, entry["instance"], dict(truth)))
    return Scenario(tuple(perspectives), tuple(timeline))


def parse_scenario(data: bytes | str) -> Scenario:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return scenario_from_document(doc)


def serialize_scenario(s: Scenario) -> bytes:
    return canonical_json(
        {
            "perspectives": [
                {"name": p.name, "propositions": list(p.propositions)} for p in s.perspectives
            ],
            "timeline": [
                {"granule": e.granule, "instance": e.instance, "truth": dict(sorted(e.truth.items()))}
                for e in s.timeline
            ],
        }
    )
