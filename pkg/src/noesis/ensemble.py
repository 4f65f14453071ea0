"""Belief states over the attribute basis: priors, object states, measurement.

Amplitudes are real and non-negative; squared amplitudes are Born-rule
probabilities. Measurement probabilities are formed as exact rational ratios
of squared amplitudes before conversion to float, so structurally equal masses
cancel exactly (measuring the uniform 5-basis prior on two attributes yields
probability 0.4, not 0.4-and-change). Object states are kept sub-normalized
exactly as constructed (squared norm 1/B); ``normalize`` lifts them to unit
norm when probabilistic semantics are wanted.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .context import FormalContext
from .errors import (
    BasisMismatch,
    EmptyBasis,
    EmptyContext,
    NoAttributes,
    UnknownAttribute,
    UnknownObject,
    ValidationError,
    ZeroProbability,
    ZeroState,
)

NORMALIZATION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class BeliefState:
    """Real amplitude vector over an ordered attribute basis."""

    basis: tuple[str, ...]
    amplitudes: tuple[float, ...]
    normalized: bool

    def __post_init__(self) -> None:
        if len(self.basis) != len(self.amplitudes):
            raise BasisMismatch(
                f"{len(self.basis)} basis attributes but {len(self.amplitudes)} amplitudes"
            )
        if any(a < 0 for a in self.amplitudes):
            raise ValidationError("amplitudes must be non-negative")
        if self.normalized:
            norm = math.fsum(a * a for a in self.amplitudes)
            if abs(norm - 1.0) > NORMALIZATION_TOLERANCE:
                raise ValidationError(f"state flagged normalized has squared norm {norm!r}")

    def squared_norm(self) -> float:
        return math.fsum(a * a for a in self.amplitudes)

    def amplitude(self, attribute: str) -> float:
        try:
            return self.amplitudes[self.basis.index(attribute)]
        except ValueError:
            raise UnknownAttribute(f"attribute {attribute!r} not in basis") from None


@dataclass(frozen=True)
class Observable:
    """Partition of the basis into disjoint subspace blocks (an orthogonal sum)."""

    basis: tuple[str, ...]
    blocks: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        flat = [a for block in self.blocks for a in block]
        if len(flat) != len(set(flat)):
            raise ValidationError("observable blocks overlap")
        if set(flat) != set(self.basis):
            raise ValidationError("observable blocks must cover the basis exactly")


@dataclass(frozen=True)
class ProjectionVector:
    """Per-dimension 0/1 coordinates of one object (its incidence row, grouped)."""

    object: str
    dimensions: tuple[str, ...]
    coords: tuple[tuple[int, ...], ...]

    def flatten(self) -> tuple[int, ...]:
        return tuple(bit for block in self.coords for bit in block)


def uniform_prior(basis: Sequence[str]) -> BeliefState:
    """Every amplitude 1/sqrt(B): the maximally undecided normalized state."""
    basis = tuple(basis)
    if not basis:
        raise EmptyBasis("cannot build a prior over an empty basis")
    amp = 1.0 / math.sqrt(len(basis))
    return BeliefState(basis=basis, amplitudes=(amp,) * len(basis), normalized=True)


def object_state(ctx: FormalContext, obj: str, prior: BeliefState) -> BeliefState:
    """State of one learnt object: amplitude 1/sqrt(B*k) on each of its k attributes.

    Kept sub-normalized (squared norm 1/B) as constructed; use ``normalize``
    for unit norm.
    """
    if prior.basis != ctx.attributes:
        raise BasisMismatch("prior basis does not match the context attribute order")
    i = ctx.object_index.get(obj)
    if i is None:
        raise UnknownObject(f"unknown object {obj!r}")
    row = ctx.rows[i]
    k = row.bit_count()
    if k == 0:
        raise NoAttributes(f"object {obj!r} owns no attributes; no state to project")
    b = len(ctx.attributes)
    amp = 1.0 / math.sqrt(b * k)
    amplitudes = tuple(amp if row & (1 << j) else 0.0 for j in range(b))
    return BeliefState(basis=ctx.attributes, amplitudes=amplitudes, normalized=False)


def normalize(state: BeliefState) -> BeliefState:
    if all(a == 0.0 for a in state.amplitudes):
        raise ZeroState("cannot normalize the zero vector")
    scale = 1.0 / math.sqrt(state.squared_norm())
    return BeliefState(
        basis=state.basis,
        amplitudes=tuple(a * scale for a in state.amplitudes),
        normalized=True,
    )


def inner_product(a: BeliefState, b: BeliefState) -> float:
    if a.basis != b.basis:
        raise BasisMismatch("states live on different bases")
    return math.fsum(x * y for x, y in zip(a.amplitudes, b.amplitudes))


def _subspace_flags(state: BeliefState, subspace: Iterable[str]) -> list[bool]:
    index = {attr: j for j, attr in enumerate(state.basis)}
    flags = [False] * len(state.basis)
    for attr in subspace:
        j = index.get(attr)
        if j is None:
            raise UnknownAttribute(f"attribute {attr!r} not in basis")
        flags[j] = True
    return flags


def measurement_probability(state: BeliefState, subspace: Iterable[str]) -> Fraction:
    """Born-rule probability of the subspace as an exact rational."""
    flags = _subspace_flags(state, subspace)
    num = Fraction(0)
    den = Fraction(0)
    for j, amp in enumerate(state.amplitudes):
        square = Fraction(amp) ** 2
        den += square
        if flags[j]:
            num += square
    if den == 0:
        raise ZeroState("cannot measure the zero vector")
    return num / den


def measure(state: BeliefState, subspace: Iterable[str]) -> tuple[float, BeliefState]:
    """Collapse onto a subspace: (probability, restricted renormalized state)."""
    subspace = tuple(subspace)
    probability = measurement_probability(state, subspace)
    if probability == 0:
        raise ZeroProbability("measurement outcome has zero probability; no collapsed state")
    flags = _subspace_flags(state, subspace)
    mass = math.fsum(a * a for j, a in enumerate(state.amplitudes) if flags[j])
    scale = 1.0 / math.sqrt(mass)
    collapsed = BeliefState(
        basis=state.basis,
        amplitudes=tuple(a * scale if flags[j] else 0.0 for j, a in enumerate(state.amplitudes)),
        normalized=True,
    )
    return float(probability), collapsed


def block_probabilities(state: BeliefState, observable: Observable) -> tuple[float, ...]:
    if observable.basis != state.basis:
        raise BasisMismatch("observable partitions a different basis")
    return tuple(float(measurement_probability(state, block)) for block in observable.blocks)


def observable_from_context(ctx: FormalContext) -> Observable:
    """Default observable: one orthogonal block per quality dimension."""
    return Observable(
        basis=ctx.attributes,
        blocks=tuple(tuple(d.attributes) for d in ctx.dimensions),
    )


def reinforce_from_support(ctx: FormalContext) -> BeliefState:
    """Amplitudes grown from attribute support: alpha_b = sqrt(support_b / total)."""
    supports = [col.bit_count() for col in ctx.columns]
    total = sum(supports)
    if total == 0:
        raise EmptyContext("context has no incidence pairs to reinforce from")
    amplitudes = tuple(math.sqrt(s / total) for s in supports)
    return BeliefState(basis=ctx.attributes, amplitudes=amplitudes, normalized=True)


def project_vector(ctx: FormalContext, obj: str) -> ProjectionVector:
    i = ctx.object_index.get(obj)
    if i is None:
        raise UnknownObject(f"unknown object {obj!r}")
    row = ctx.rows[i]
    coords = []
    offset = 0
    for dim in ctx.dimensions:
        coords.append(tuple((row >> (offset + j)) & 1 for j in range(len(dim.attributes))))
        offset += len(dim.attributes)
    return ProjectionVector(
        object=obj,
        dimensions=tuple(d.name for d in ctx.dimensions),
        coords=tuple(coords),
    )


def belief_to_document(state: BeliefState) -> dict:
    return {
        "amplitudes": list(state.amplitudes),
        "basis": list(state.basis),
        "normalized": state.normalized,
    }


def serialize_belief(state: BeliefState) -> bytes:
    """Canonical ensemble JSON: sorted keys, floats at 17 significant digits."""
    amplitudes = ",".join(format(a, ".17g") for a in state.amplitudes)
    basis = json.dumps(list(state.basis), separators=(",", ":"), ensure_ascii=False)
    flag = "true" if state.normalized else "false"
    return (
        '{"amplitudes":[' + amplitudes + '],"basis":' + basis + ',"normalized":' + flag + "}\n"
    ).encode("utf-8")
