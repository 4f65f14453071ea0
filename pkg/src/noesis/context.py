"""Formal contexts with quality-dimension-grouped attributes and time-granule stamps.

A context is the classical triple (objects, attributes, incidence) except that
attributes arrive grouped into named quality dimensions (the concatenation of
the dimension attribute lists fixes the global attribute order) and every
object carries the granule at which it entered the context. Contexts are
immutable values: insertion returns a new context and the old one stays valid,
which is what makes per-granule snapshots of an evolving conceptual space
trivially reproducible.

Incidence is stored as one integer bitmask per object, bit ``j`` meaning "this
object has the j-th attribute of the global order".
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    CxtLossy,
    DuplicateName,
    GranuleRegression,
    ParseError,
    ShapeMismatch,
    UnknownAttribute,
    UnknownObject,
)

CXT_DEFAULT_DIMENSION = "attributes"


@dataclass(frozen=True)
class QualityDimension:
    """A named group of attributes: one perspective on the scenario."""

    name: str
    attributes: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if not self.attributes:
            raise ShapeMismatch(f"dimension {self.name!r} declares no attributes")
        seen = set()
        for attr in self.attributes:
            if attr in seen:
                raise DuplicateName(f"attribute {attr!r} repeated within dimension {self.name!r}")
            seen.add(attr)


@dataclass(frozen=True)
class FormalContext:
    """Immutable formal context with dimension-grouped attributes and birth granules."""

    objects: tuple[str, ...]
    dimensions: tuple[QualityDimension, ...]
    rows: tuple[int, ...]
    granules: tuple[int, ...]

    @cached_property
    def attributes(self) -> tuple[str, ...]:
        return tuple(a for dim in self.dimensions for a in dim.attributes)

    @cached_property
    def attribute_index(self) -> dict[str, int]:
        return {a: j for j, a in enumerate(self.attributes)}

    @cached_property
    def object_index(self) -> dict[str, int]:
        return {g: i for i, g in enumerate(self.objects)}

    @cached_property
    def columns(self) -> tuple[int, ...]:
        """Per-attribute bitmask over objects (the transposed incidence)."""
        cols = [0] * len(self.attributes)
        for i, row in enumerate(self.rows):
            bit = 1 << i
            for j in range(len(cols)):
                if row & (1 << j):
                    cols[j] |= bit
        return tuple(cols)

    @property
    def all_objects_mask(self) -> int:
        return (1 << len(self.objects)) - 1

    @property
    def all_attributes_mask(self) -> int:
        return (1 << len(self.attributes)) - 1

    def attrs_to_mask(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            j = self.attribute_index.get(name)
            if j is None:
                raise UnknownAttribute(f"unknown attribute {name!r}")
            mask |= 1 << j
        return mask

    def objects_to_mask(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            i = self.object_index.get(name)
            if i is None:
                raise UnknownObject(f"unknown object {name!r}")
            mask |= 1 << i
        return mask

    def mask_to_attrs(self, mask: int) -> tuple[str, ...]:
        return tuple(a for j, a in enumerate(self.attributes) if mask & (1 << j))

    def mask_to_objects(self, mask: int) -> tuple[str, ...]:
        return tuple(g for i, g in enumerate(self.objects) if mask & (1 << i))

    def intent_of(self, obj: str) -> frozenset[str]:
        i = self.object_index.get(obj)
        if i is None:
            raise UnknownObject(f"unknown object {obj!r}")
        return frozenset(self.mask_to_attrs(self.rows[i]))

    def granule_of(self, obj: str) -> int:
        i = self.object_index.get(obj)
        if i is None:
            raise UnknownObject(f"unknown object {obj!r}")
        return self.granules[i]

    def max_granule(self) -> int:
        return max(self.granules, default=0)

    def incidence_matrix(self) -> list[list[int]]:
        m = len(self.attributes)
        return [[(row >> j) & 1 for j in range(m)] for row in self.rows]

    def restrict_to_granule(self, granule: int) -> "FormalContext":
        """Sub-context of the objects born at or before ``granule``."""
        keep = [i for i, g in enumerate(self.granules) if g <= granule]
        return FormalContext(
            objects=tuple(self.objects[i] for i in keep),
            dimensions=self.dimensions,
            rows=tuple(self.rows[i] for i in keep),
            granules=tuple(self.granules[i] for i in keep),
        )


def new_context(
    objects: Sequence[str],
    dimensions: Sequence[QualityDimension],
    incidence: Sequence[Sequence[int | bool]],
    granules: Mapping[str, int] | None = None,
) -> FormalContext:
    """Validate and build a context from an explicit incidence matrix.

    The global attribute order is the concatenation of the dimension attribute
    lists. Omitted granules default to 0.
    """
    dims = tuple(dimensions)
    seen_dim: set[str] = set()
    seen_attr: set[str] = set()
    for dim in dims:
        if dim.name in seen_dim:
            raise DuplicateName(f"dimension {dim.name!r} declared twice")
        seen_dim.add(dim.name)
        for attr in dim.attributes:
            if attr in seen_attr:
                raise DuplicateName(f"attribute {attr!r} appears in more than one dimension")
            seen_attr.add(attr)

    objs = tuple(objects)
    seen_obj: set[str] = set()
    for name in objs:
        if name in seen_obj:
            raise DuplicateName(f"object {name!r} declared twice")
        seen_obj.add(name)

    n_attrs = sum(len(d.attributes) for d in dims)
    if len(incidence) != len(objs):
        raise ShapeMismatch(f"expected {len(objs)} incidence rows, got {len(incidence)}")
    rows = []
    for i, raw in enumerate(incidence):
        if len(raw) != n_attrs:
            raise ShapeMismatch(
                f"row {i} ({objs[i]!r}): expected {n_attrs} incidence columns, got {len(raw)}"
            )
        mask = 0
        for j, cell in enumerate(raw):
            if bool(cell):
                mask |= 1 << j
        rows.append(mask)

    granule_list = [0] * len(objs)
    if granules:
        index = {g: i for i, g in enumerate(objs)}
        for name, value in granules.items():
            if name not in index:
                raise UnknownObject(f"granule given for unknown object {name!r}")
            if not isinstance(value, int) or value < 0:
                raise ShapeMismatch(f"granule for {name!r} must be a non-negative integer")
            granule_list[index[name]] = value

    return FormalContext(objects=objs, dimensions=dims, rows=tuple(rows), granules=tuple(granule_list))


def add_object(ctx: FormalContext, name: str, intent: Iterable[str], granule: int) -> FormalContext:
    """Append one object; returns a new context, the input is untouched."""
    if name in ctx.object_index:
        raise DuplicateName(f"object {name!r} already present")
    if granule < ctx.max_granule():
        raise GranuleRegression(
            f"granule {granule} precedes the newest existing granule {ctx.max_granule()}"
        )
    row = ctx.attrs_to_mask(intent)
    return FormalContext(
        objects=ctx.objects + (name,),
        dimensions=ctx.dimensions,
        rows=ctx.rows + (row,),
        granules=ctx.granules + (granule,),
    )


def canonical_json(document: object) -> bytes:
    """Keys sorted, compact separators, UTF-8, newline-terminated."""
    return (json.dumps(document, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n").encode("utf-8")


def context_to_document(ctx: FormalContext) -> dict:
    return {
        "dimensions": [{"name": d.name, "attributes": list(d.attributes)} for d in ctx.dimensions],
        "objects": list(ctx.objects),
        "incidence": ctx.incidence_matrix(),
        "granules": {g: ctx.granules[i] for i, g in enumerate(ctx.objects)},
    }


def context_from_document(doc: object) -> FormalContext:
    if not isinstance(doc, dict):
        raise ParseError("context document must be a JSON object")
    try:
        raw_dims = doc["dimensions"]
        raw_objects = doc["objects"]
        raw_incidence = doc["incidence"]
    except KeyError as exc:
        raise ParseError(f"context document missing key {exc.args[0]!r}") from None
    if not isinstance(raw_dims, list) or not isinstance(raw_objects, list) or not isinstance(raw_incidence, list):
        raise ParseError("context document fields have the wrong types")
    dims = []
    for entry in raw_dims:
        if not isinstance(entry, dict) or "name" not in entry or "attributes" not in entry:
            raise ParseError("each dimension needs a name and an attribute list")
        dims.append(QualityDimension(name=entry["name"], attributes=tuple(entry["attributes"])))
    granules = doc.get("granules") or {}
    if not isinstance(granules, dict):
        raise ParseError("granules must map object names to integers")
    return new_context(raw_objects, dims, raw_incidence, granules)


def serialize_context(ctx: FormalContext, format: str = "json", *, allow_lossy: bool = False) -> bytes:
    """Deterministic serialization. ``cxt`` drops dimensions and granules,
    so a lossy export must be requested explicitly."""
    if format == "json":
        return canonical_json(context_to_document(ctx))
    if format == "cxt":
        lossy = len(ctx.dimensions) > 1 or any(g != 0 for g in ctx.granules)
        if lossy and not allow_lossy:
            raise CxtLossy(
                "Burmeister text keeps neither dimension grouping nor granules; "
                "pass allow_lossy=True to flatten"
            )
        lines = ["B", "", str(len(ctx.objects)), str(len(ctx.attributes)), ""]
        lines.extend(ctx.objects)
        lines.extend(ctx.attributes)
        for row in ctx.rows:
            lines.append("".join("X" if row & (1 << j) else "." for j in range(len(ctx.attributes))))
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {format!r}")


def parse_context(data: bytes | str, format: str = "json") -> FormalContext:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if format == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
        return context_from_document(doc)
    if format == "cxt":
        return _parse_cxt(text)
    raise ValueError(f"unknown format {format!r}")


def _parse_cxt(text: str) -> FormalContext:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [line.rstrip("\r") for line in lines]

    def need(i: int, what: str) -> str:
        if i >= len(lines):
            raise ParseError(f"truncated file: expected {what}", line=i + 1)
        return lines[i]

    if need(0, "header 'B'") != "B":
        raise ParseError("expected Burmeister header 'B'", line=1)
    if need(1, "blank line") != "":
        raise ParseError("expected blank line after header", line=2)
    try:
        n_objects = int(need(2, "object count"))
        n_attrs = int(need(3, "attribute count"))
    except ValueError:
        raise ParseError("object and attribute counts must be integers", line=3) from None
    if n_objects < 0 or n_attrs < 0:
        raise ParseError("counts must be non-negative", line=3)
    if need(4, "blank line") != "":
        raise ParseError("expected blank line after counts", line=5)

    base = 5
    objects = [need(base + i, f"object name {i + 1}") for i in range(n_objects)]
    attrs = [need(base + n_objects + i, f"attribute name {i + 1}") for i in range(n_attrs)]
    incidence = []
    for i in range(n_objects):
        lineno = base + n_objects + n_attrs + i
        row = need(lineno, f"incidence row {i + 1}")
        if len(row) != n_attrs:
            raise ParseError(f"incidence row has {len(row)} cells, expected {n_attrs}", line=lineno + 1)
        cells = []
        for ch in row:
            if ch == "X":
                cells.append(1)
            elif ch == ".":
                cells.append(0)
            else:
                raise ParseError(f"incidence cells must be 'X' or '.', got {ch!r}", line=lineno + 1)
        incidence.append(cells)

    if n_attrs == 0:
        dims: list[QualityDimension] = []
    else:
        dims = [QualityDimension(name=CXT_DEFAULT_DIMENSION, attributes=tuple(attrs))]
    return new_context(objects, dims, incidence)
