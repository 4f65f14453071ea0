"""Derivation operators, closure, concept enumeration and implication checking.

All sets ride on integer bitmasks keyed by the context's global attribute and
object orders, so every operation is deterministic and canonically hashable.
Concept enumeration uses closure-based canonical generation in lectic order
(NextClosure): no duplicate bookkeeping, and the output order is a pure
function of the context.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

from .context import FormalContext, add_object, canonical_json
from .errors import ValidationError


@dataclass(frozen=True)
class Concept:
    """An (extent, intent) pair closed under both derivation operators."""

    extent: frozenset[str]
    intent: frozenset[str]


@dataclass(frozen=True)
class Implication:
    """Premise/conclusion attribute sets: the formal reading of a measurement cue."""

    premise: frozenset[str]
    conclusion: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "premise", frozenset(self.premise))
        object.__setattr__(self, "conclusion", frozenset(self.conclusion))
        if not self.conclusion:
            raise ValidationError("implication conclusion must be non-empty")


class VerdictKind(str, Enum):
    HOLDS = "holds"
    VACUOUS = "vacuous"
    FAILS = "fails"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    counterexample: str | None = None


@dataclass(frozen=True)
class ConceptLattice:
    """All concepts of a context in canonical order, plus covering edges.

    Concepts are sorted by (intent size, lexicographic intent on the global
    attribute order); this puts the top concept (extent = all objects) first
    and the bottom concept (intent = all attributes) last. Each hasse pair
    ``(i, j)`` says concept ``i`` lies directly below concept ``j`` in the
    extent-inclusion order.
    """

    context: FormalContext
    extents: tuple[int, ...]
    intents: tuple[int, ...]
    hasse: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.intents)

    def concepts(self) -> list[Concept]:
        ctx = self.context
        return [
            Concept(frozenset(ctx.mask_to_objects(e)), frozenset(ctx.mask_to_attrs(a)))
            for e, a in zip(self.extents, self.intents)
        ]


# --- derivation operators ---


def intent_mask_of(ctx: FormalContext, extent_mask: int) -> int:
    mask = ctx.all_attributes_mask
    rows = ctx.rows
    rest = extent_mask
    while rest:
        low = rest & -rest
        mask &= rows[low.bit_length() - 1]
        rest ^= low
    return mask


def extent_mask_of(ctx: FormalContext, intent_mask: int) -> int:
    mask = ctx.all_objects_mask
    cols = ctx.columns
    rest = intent_mask
    while rest:
        low = rest & -rest
        mask &= cols[low.bit_length() - 1]
        rest ^= low
    return mask


def closure_mask(ctx: FormalContext, intent_mask: int) -> int:
    return intent_mask_of(ctx, extent_mask_of(ctx, intent_mask))


def derive_intent(ctx: FormalContext, objects: Iterable[str]) -> frozenset[str]:
    """Attributes common to all given objects; all of M for the empty set."""
    return frozenset(ctx.mask_to_attrs(intent_mask_of(ctx, ctx.objects_to_mask(objects))))


def derive_extent(ctx: FormalContext, attrs: Iterable[str]) -> frozenset[str]:
    """Objects bearing every given attribute; all of G for the empty set."""
    return frozenset(ctx.mask_to_objects(extent_mask_of(ctx, ctx.attrs_to_mask(attrs))))


def closure(ctx: FormalContext, attrs: Iterable[str]) -> frozenset[str]:
    """Smallest closed attribute set containing ``attrs``."""
    return frozenset(ctx.mask_to_attrs(closure_mask(ctx, ctx.attrs_to_mask(attrs))))


# --- enumeration ---


def _next_closure(ctx: FormalContext, current: int) -> int | None:
    """Lectically next closed attribute set after ``current``, or None at the top.

    Lectic order compares the smallest differing attribute (global order,
    bit 0 first): A < B iff that attribute belongs to B.
    """
    m = len(ctx.attributes)
    a = current
    for i in reversed(range(m)):
        bit = 1 << i
        if a & bit:
            a &= ~bit
        else:
            candidate = closure_mask(ctx, a | bit)
            if (candidate & ~a) & (bit - 1) == 0:
                return candidate
    return None


def _iter_intents(ctx: FormalContext):
    current = closure_mask(ctx, 0)
    while current is not None:
        yield current
        current = _next_closure(ctx, current)


def _intent_sort_key(ctx: FormalContext, intent: int):
    indices = tuple(j for j in range(len(ctx.attributes)) if intent & (1 << j))
    return (len(indices), indices)


def _covering_edges(extents: list[int]) -> tuple[tuple[int, int], ...]:
    """Covering pairs (lower, upper) of the extent-inclusion order."""
    n = len(extents)
    edges = []
    for i in range(n):
        for j in range(n):
            ei, ej = extents[i], extents[j]
            if ei != ej and ei & ej == ei:
                covered = True
                for k in range(n):
                    ek = extents[k]
                    if k != i and k != j and ei & ek == ei and ek & ej == ek:
                        covered = False
                        break
                if covered:
                    edges.append((i, j))
    edges.sort()
    return tuple(edges)


def _assemble(ctx: FormalContext, intent_masks: Iterable[int]) -> ConceptLattice:
    ordered = sorted(set(intent_masks), key=lambda a: _intent_sort_key(ctx, a))
    extents = [extent_mask_of(ctx, a) for a in ordered]
    return ConceptLattice(
        context=ctx,
        extents=tuple(extents),
        intents=tuple(ordered),
        hasse=_covering_edges(extents),
    )


def enumerate_concepts(ctx: FormalContext) -> ConceptLattice:
    """Complete, duplicate-free concept set in canonical order, with covering edges."""
    return _assemble(ctx, _iter_intents(ctx))


def insert_object(lat: ConceptLattice, name: str, intent: Iterable[str], granule: int) -> ConceptLattice:
    """Extend the lattice with one object without re-enumerating from scratch.

    The intents of the extended context are exactly the old intents plus their
    intersections with the new object's row, so the update is a linear pass
    over the existing concepts.
    """
    ctx = add_object(lat.context, name, intent, granule)
    row = ctx.rows[-1]
    updated = set(lat.intents)
    updated.update(a & row for a in lat.intents)
    return _assemble(ctx, updated)


# --- implications ---


def holds(ctx: FormalContext, imp: Implication) -> Verdict:
    """Check a measurement cue against the context.

    vacuous: nothing satisfies the premise. holds: every premise-bearer has the
    full conclusion. fails: names the first violating object in declaration
    order, so ties always break the same way.
    """
    premise = ctx.attrs_to_mask(imp.premise)
    conclusion = ctx.attrs_to_mask(imp.conclusion)
    extent = extent_mask_of(ctx, premise)
    if extent == 0:
        return Verdict(VerdictKind.VACUOUS)
    if conclusion & ~closure_mask(ctx, premise) == 0:
        return Verdict(VerdictKind.HOLDS)
    rest = extent
    while rest:
        low = rest & -rest
        i = low.bit_length() - 1
        if conclusion & ~ctx.rows[i]:
            return Verdict(VerdictKind.FAILS, counterexample=ctx.objects[i])
        rest ^= low
    raise AssertionError("unreachable: failing implication must have a violating object")


def hasse_edges(lat: ConceptLattice) -> list[tuple[int, int]]:
    return list(lat.hasse)


# --- exports ---


def lattice_to_document(lat: ConceptLattice) -> dict:
    ctx = lat.context
    return {
        "concepts": [
            {"extent": list(ctx.mask_to_objects(e)), "intent": list(ctx.mask_to_attrs(a))}
            for e, a in zip(lat.extents, lat.intents)
        ],
        "hasse": [[i, j] for i, j in lat.hasse],
    }


def serialize_lattice(lat: ConceptLattice) -> bytes:
    return canonical_json(lattice_to_document(lat))


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(lat: ConceptLattice, label_mode: str = "full") -> str:
    """Render the Hasse diagram as a DOT digraph, top concept at rank source.

    ``full`` labels every node with its intent and extent; ``reduced`` shows
    each attribute at the concept introducing it (its attribute concept) and
    each object at its object concept, so every name appears exactly once.
    """
    if label_mode not in ("full", "reduced"):
        raise ValueError(f"unknown label mode {label_mode!r}")
    ctx = lat.context
    labels: list[tuple[str, str]] = []
    if label_mode == "full":
        for e, a in zip(lat.extents, lat.intents):
            intent = ", ".join(ctx.mask_to_attrs(a))
            extent = ", ".join(ctx.mask_to_objects(e))
            labels.append((f"{{{intent}}}", f"{{{extent}}}"))
    else:
        by_index: dict[int, tuple[list[str], list[str]]] = {}
        concept_index = {a: i for i, a in enumerate(lat.intents)}
        for j, attr in enumerate(ctx.attributes):
            intro = closure_mask(ctx, 1 << j)
            by_index.setdefault(concept_index[intro], ([], []))[0].append(attr)
        for i, obj in enumerate(ctx.objects):
            intro = intent_mask_of(ctx, 1 << i)
            by_index.setdefault(concept_index[intro], ([], []))[1].append(obj)
        for i in range(len(lat.intents)):
            attrs, objs = by_index.get(i, ([], []))
            labels.append((", ".join(attrs), ", ".join(objs)))

    lines = ["digraph lattice {", "  node [shape=box];"]
    for i, (upper_line, lower_line) in enumerate(labels):
        label = _dot_escape(upper_line) + "\\n" + _dot_escape(lower_line)
        lines.append(f'  c{i} [label="{label}"];')
    if lat.intents:
        lines.append("  { rank=source; c0; }")
    for lower, upper in lat.hasse:
        lines.append(f"  c{upper} -> c{lower};")
    lines.append("}")
    return "\n".join(lines) + "\n"
