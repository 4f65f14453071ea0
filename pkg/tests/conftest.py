"""Shared fixtures, generators, and independent brute-force oracles.

The oracles here deliberately avoid the package's bitmask machinery: they scan
plain 0/1 incidence matrices so that lattice results can be checked against an
implementation-independent path.
"""

from __future__ import annotations

import random
from itertools import combinations
from pathlib import Path

import pytest
from hypothesis import strategies as st

from noesis.context import FormalContext, QualityDimension, new_context

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

DIGITS_ATTRS = ("Composite", "Even", "Odd", "Prime", "Square")
DIGITS_ROWS = {
    "One": (0, 0, 1, 0, 1),
    "Two": (0, 1, 0, 1, 0),
    "Three": (0, 0, 1, 1, 0),
    "Four": (1, 1, 0, 0, 1),
    "Five": (0, 0, 1, 1, 0),
    "Six": (1, 1, 0, 0, 0),
    "Seven": (0, 0, 1, 1, 0),
    "Eight": (1, 1, 0, 0, 0),
    "Nine": (1, 0, 1, 0, 1),
}


@pytest.fixture
def digits() -> FormalContext:
    return new_context(
        list(DIGITS_ROWS),
        [QualityDimension("types", DIGITS_ATTRS)],
        [list(row) for row in DIGITS_ROWS.values()],
    )


def make_digits_context() -> FormalContext:
    return new_context(
        list(DIGITS_ROWS),
        [QualityDimension("types", DIGITS_ATTRS)],
        [list(row) for row in DIGITS_ROWS.values()],
    )


# --- independent oracles ---


def oracle_extent(objects, attributes, matrix, attr_set):
    """Objects bearing every attribute of attr_set, by literal row scan."""
    picked = []
    for i, obj in enumerate(objects):
        if all(matrix[i][attributes.index(a)] for a in attr_set):
            picked.append(obj)
    return frozenset(picked)


def oracle_intent(objects, attributes, matrix, obj_set):
    """Attributes common to every object of obj_set, by literal column scan."""
    picked = []
    for j, attr in enumerate(attributes):
        if all(matrix[objects.index(g)][j] for g in obj_set):
            picked.append(attr)
    return frozenset(picked)


def oracle_concepts(ctx: FormalContext) -> set[tuple[frozenset, frozenset]]:
    """Every formal concept by closing each member of the attribute powerset."""
    attributes = list(ctx.attributes)
    matrix = ctx.incidence_matrix()
    owned = {
        g: frozenset(a for a, bit in zip(attributes, matrix[i]) if bit)
        for i, g in enumerate(ctx.objects)
    }
    everything = frozenset(attributes)
    found = set()
    for r in range(len(attributes) + 1):
        for combo in combinations(attributes, r):
            wanted = frozenset(combo)
            extent = frozenset(g for g, row in owned.items() if wanted <= row)
            if extent:
                intent = frozenset.intersection(*(owned[g] for g in extent))
            else:
                intent = everything
            found.add((extent, intent))
    return found


def oracle_implication(ctx: FormalContext, premise, conclusion):
    """Literal scan: 'every object with the premise has the whole conclusion'.

    Returns ("vacuous", None), ("holds", None) or ("fails", first_violator).
    """
    objects = list(ctx.objects)
    attributes = list(ctx.attributes)
    matrix = ctx.incidence_matrix()
    bearers = [g for g in objects
               if all(matrix[objects.index(g)][attributes.index(a)] for a in premise)]
    if not bearers:
        return ("vacuous", None)
    for g in bearers:
        if not all(matrix[objects.index(g)][attributes.index(a)] for a in conclusion):
            return ("fails", g)
    return ("holds", None)


def oracle_inclusion_order(extents: list[frozenset]) -> set[tuple[int, int]]:
    """All strict extent inclusions (i below j)."""
    order = set()
    for i, ei in enumerate(extents):
        for j, ej in enumerate(extents):
            if i != j and ei < ej:
                order.add((i, j))
    return order


def transitive_closure(edges: set[tuple[int, int]], n: int) -> set[tuple[int, int]]:
    reach = {i: {j for (a, j) in edges if a == i} for i in range(n)}
    changed = True
    while changed:
        changed = False
        for i in range(n):
            extra = set()
            for j in reach[i]:
                extra |= reach[j]
            if not extra <= reach[i]:
                reach[i] |= extra
                changed = True
    return {(i, j) for i in range(n) for j in reach[i]}


# --- random context generation ---


def random_context(rng: random.Random, max_objects: int = 12, max_attrs: int = 10) -> FormalContext:
    n_attrs = rng.randint(1, max_attrs)
    n_objs = rng.randint(0, max_objects)
    attrs = [f"a{j}" for j in range(n_attrs)]
    n_dims = rng.randint(1, min(3, n_attrs))
    cuts = sorted(rng.sample(range(1, n_attrs), n_dims - 1)) if n_dims > 1 else []
    bounds = [0, *cuts, n_attrs]
    dims = [
        QualityDimension(f"d{k}", tuple(attrs[bounds[k]:bounds[k + 1]]))
        for k in range(n_dims)
    ]
    objects = [f"o{i}" for i in range(n_objs)]
    matrix = [[rng.randint(0, 1) for _ in range(n_attrs)] for _ in range(n_objs)]
    granules = {}
    g = 0
    for obj in objects:
        g += rng.randint(0, 2)
        granules[obj] = g
    return new_context(objects, dims, matrix, granules)


@st.composite
def contexts(draw, max_objects: int = 12, max_attrs: int = 10):
    seed = draw(st.integers(0, 2**48))
    return random_context(random.Random(seed), max_objects, max_attrs)
