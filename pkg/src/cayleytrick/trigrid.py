"""Triangular grid of the size-k triangle T_k and lozenge tilings on it.

Lattice coordinates: T_k = {(x, y) : x, y >= 0, x + y <= k} with corners
a = (0, 0), b = (k, 0), c = (0, k).  ``UP(x, y)`` is the unit triangle with
corners (x, y), (x+1, y), (x, y+1); ``DOWN(x, y)`` the one with corners
(x+1, y), (x, y+1), (x+1, y+1).

A tiling stores, for every downward triangle (in row-major order), which of
its three upward neighbours it is glued to.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import Iterable, NamedTuple

UP = "U"
DOWN = "D"


class MalformedInput(ValueError):
    """Raised for structurally invalid tiling data (bad coordinates, repeats)."""


class ParseError(ValueError):
    """A document could not be parsed; ``where`` locates the problem."""

    def __init__(self, message: str, where: str):
        super().__init__(f"{where}: {message}")
        self.where = where


class GridCoord(NamedTuple):
    x: int
    y: int
    orient: str

    def corners(self) -> tuple[tuple[int, int], ...]:
        x, y = self.x, self.y
        if self.orient == UP:
            return ((x, y), (x + 1, y), (x, y + 1))
        return ((x + 1, y), (x, y + 1), (x + 1, y + 1))

    def sort_key(self):
        return (self.y, self.x, self.orient == UP)

    def __repr__(self) -> str:
        return f"{'UP' if self.orient == UP else 'DOWN'}({self.x},{self.y})"


def up(x: int, y: int) -> GridCoord:
    return GridCoord(x, y, UP)


def down(x: int, y: int) -> GridCoord:
    return GridCoord(x, y, DOWN)


class Direction(IntEnum):
    HYP = 0
    E = 1
    N = 2


_OFFSETS = {Direction.HYP: (0, 0), Direction.E: (1, 0), Direction.N: (0, 1)}


def partner_of(d: GridCoord, direction: Direction) -> GridCoord:
    dx, dy = _OFFSETS[direction]
    return up(d.x + dx, d.y + dy)


def direction_between(d: GridCoord, u: GridCoord) -> Direction:
    """Direction tag gluing downward triangle ``d`` to upward triangle ``u``."""
    for direction, (dx, dy) in _OFFSETS.items():
        if (u.x, u.y) == (d.x + dx, d.y + dy):
            return direction
    raise MalformedInput(f"{u!r} is not adjacent to {d!r}")


def in_range(c: GridCoord, k: int) -> bool:
    if c.x < 0 or c.y < 0:
        return False
    if c.orient == UP:
        return c.x + c.y <= k - 1
    return c.x + c.y <= k - 2


class Grid:
    """Cell lists and adjacency of T_k, shared by every tiling of that size."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.ups = [up(x, y) for y in range(k) for x in range(k - y)]
        self.downs = [down(x, y) for y in range(k - 1) for x in range(k - 1 - y)]
        self.triangles = sorted(self.ups + self.downs, key=GridCoord.sort_key)
        self.down_index = {d: i for i, d in enumerate(self.downs)}
        self.up_index = {u: i for i, u in enumerate(self.ups)}
        self.points = [(x, y) for y in range(k + 1) for x in range(k + 1 - y)]
        # unit edge -> adjacent triangles
        self.edge_tris: dict[tuple, list[GridCoord]] = {}
        for t in self.triangles:
            for e in triangle_edges(t):
                self.edge_tris.setdefault(e, []).append(t)
        self.partner_index = [
            [self.up_index[partner_of(d, dr)] for dr in Direction] for d in self.downs
        ]


@lru_cache(maxsize=None)
def grid(k: int) -> Grid:
    return Grid(k)


def triangle_edges(t: GridCoord) -> tuple[tuple, tuple, tuple]:
    p, q, r = t.corners()
    return (_edge(p, q), _edge(q, r), _edge(p, r))


def _edge(p, q):
    return (p, q) if p <= q else (q, p)


def edge_kind(e) -> str:
    """'H' horizontal, 'V' vertical, 'D' diagonal (parallel to bc)."""
    (x0, y0), (x1, y1) = e
    if y0 == y1:
        return "H"
    if x0 == x1:
        return "V"
    return "D"


def neighbours(t: GridCoord, k: int) -> list[GridCoord]:
    """Triangles sharing an edge with ``t`` inside T_k."""
    g = grid(k)
    out = []
    for e in triangle_edges(t):
        out.extend(s for s in g.edge_tris[e] if s != t)
    return out


@dataclass(frozen=True)
class Tiling:
    """A lozenge tiling of T_k; ``match[i]`` glues ``grid(k).downs[i]``."""

    k: int
    match: tuple[Direction, ...]

    def __post_init__(self):
        if self.k < 1:
            raise MalformedInput("k must be >= 1")
        n = self.k * (self.k - 1) // 2
        if len(self.match) != n:
            raise MalformedInput(f"expected {n} directions, got {len(self.match)}")
        object.__setattr__(self, "match", tuple(Direction(m) for m in self.match))

    @classmethod
    def from_lozenges(cls, k: int, pairs: Iterable[tuple[GridCoord, GridCoord | Direction]]) -> Tiling:
        """Build from (down, up-or-direction) pairs; each DOWN cell exactly once."""
        if k < 1:
            raise MalformedInput("k must be >= 1")
        g = grid(k)
        dirs: list[Direction | None] = [None] * len(g.downs)
        for d, u in pairs:
            d = GridCoord(*d)
            if d.orient != DOWN or not in_range(d, k):
                raise MalformedInput(f"{d!r} is not a downward triangle of T_{k}")
            i = g.down_index[d]
            if dirs[i] is not None:
                raise MalformedInput(f"{d!r} assigned twice")
            dirs[i] = u if isinstance(u, Direction) else direction_between(d, GridCoord(*u))
        missing = [g.downs[i] for i, v in enumerate(dirs) if v is None]
        if missing:
            raise MalformedInput(f"{missing[0]!r} has no partner")
        return cls(k, tuple(dirs))

    def partner(self, d: GridCoord) -> GridCoord:
        return partner_of(d, self.match[grid(self.k).down_index[d]])

    def lozenges(self) -> list[tuple[GridCoord, GridCoord]]:
        g = grid(self.k)
        return [(d, partner_of(d, m)) for d, m in zip(g.downs, self.match)]

    def up_partner_map(self) -> dict[GridCoord, GridCoord]:
        """UP cell -> its DOWN partner (free UP cells absent)."""
        return {u: d for d, u in self.lozenges()}

    def free_triangles(self) -> list[GridCoord]:
        return free_triangles(self)

    def tiles(self) -> list[frozenset[GridCoord]]:
        """Every tile as a set of unit triangles: lozenges then free triangles."""
        return [frozenset(p) for p in self.lozenges()] + [frozenset([u]) for u in self.free_triangles()]

    def key(self) -> str:
        return "".join("HEN"[m] for m in self.match)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    duplicate: GridCoord | None
    free: tuple[GridCoord, ...]


def validate_tiling(t: Tiling) -> ValidationReport:
    """Check injectivity of the DOWN -> UP gluing."""
    seen: set[GridCoord] = set()
    for d, u in t.lozenges():
        if not in_range(u, t.k):
            raise MalformedInput(f"{d!r} glued outside T_{t.k}")
        if u in seen:
            return ValidationReport(False, u, ())
        seen.add(u)
    free = tuple(u for u in grid(t.k).ups if u not in seen)
    assert len(free) == t.k
    return ValidationReport(True, None, free)


def free_triangles(t: Tiling) -> list[GridCoord]:
    used = {u for _, u in t.lozenges()}
    return [u for u in grid(t.k).ups if u not in used]


@dataclass(frozen=True)
class LabeledTiling:
    """A tiling with labels; ``labels[i-1]`` is the free triangle labelled i."""

    tiling: Tiling
    labels: tuple[GridCoord, ...]

    def __post_init__(self):
        labels = tuple(GridCoord(*u) for u in self.labels)
        object.__setattr__(self, "labels", labels)
        free = set(free_triangles(self.tiling))
        if len(labels) != self.k or set(labels) != free:
            raise MalformedInput("labels must be a bijection onto the free triangles")

    @property
    def k(self) -> int:
        return self.tiling.k

    @classmethod
    def default(cls, t: Tiling) -> LabeledTiling:
        """Labels 1..k assigned to the free triangles in row-major order."""
        return cls(t, tuple(free_triangles(t)))

    def label_of(self, u: GridCoord) -> int:
        return self.labels.index(u) + 1

    def key(self) -> str:
        return self.tiling.key() + "|" + ";".join(f"{u.x},{u.y}" for u in self.labels)


def all_labelings(t: Tiling) -> list[LabeledTiling]:
    free = free_triangles(t)
    return [LabeledTiling(t, p) for p in itertools.permutations(free)]


# ---------------------------------------------------------------------------
# symmetries

@dataclass(frozen=True)
class GridSymmetry:
    """Element of D3 acting by permuting barycentric coordinates (x, y, k-x-y).

    The image of a point with barycentric triple ``t`` is ``(t[p[0]], t[p[1]], t[p[2]])``.
    """

    perm: tuple[int, int, int]

    def compose(self, other: GridSymmetry) -> GridSymmetry:
        """``self`` after ``other``."""
        return GridSymmetry(tuple(other.perm[self.perm[i]] for i in range(3)))


@dataclass(frozen=True)
class LabelPermutation:
    """``perm[i-1]`` is the new label of the triangle formerly labelled i."""

    perm: tuple[int, ...]

    def compose(self, other: LabelPermutation) -> LabelPermutation:
        return LabelPermutation(tuple(self.perm[other.perm[i] - 1] for i in range(len(self.perm))))


D3 = tuple(GridSymmetry(p) for p in itertools.permutations(range(3)))
IDENTITY = GridSymmetry((0, 1, 2))


def map_point(p: tuple[int, int], g: GridSymmetry, k: int) -> tuple[int, int]:
    t = (p[0], p[1], k - p[0] - p[1])
    return (t[g.perm[0]], t[g.perm[1]])


def map_triangle(c: GridCoord, g: GridSymmetry, k: int) -> GridCoord:
    pts = [map_point(p, g, k) for p in c.corners()]
    x = min(p[0] for p in pts)
    y = min(p[1] for p in pts)
    return GridCoord(x, y, UP if (x, y) in pts else DOWN)


def map_tiling(t: Tiling, g: GridSymmetry) -> Tiling:
    pairs = []
    for d, u in t.lozenges():
        d2, u2 = map_triangle(d, g, t.k), map_triangle(u, g, t.k)
        pairs.append((d2, u2))
    return Tiling.from_lozenges(t.k, pairs)


def apply_symmetry(t, g):
    """Act on a (labelled) tiling by a grid symmetry or a label permutation."""
    if isinstance(g, GridSymmetry):
        if isinstance(t, Tiling):
            return map_tiling(t, g)
        return LabeledTiling(map_tiling(t.tiling, g), tuple(map_triangle(u, g, t.k) for u in t.labels))
    if isinstance(g, LabelPermutation):
        if sorted(g.perm) != list(range(1, t.k + 1)):
            raise ValueError("not a permutation of 1..k")
        new = [None] * t.k
        for i, u in enumerate(t.labels):
            new[g.perm[i] - 1] = u
        return LabeledTiling(t.tiling, tuple(new))
    raise TypeError(f"unsupported symmetry {g!r}")


def canonical_tiling(k: int, mode: str = "BOTTOM") -> Tiling:
    """All free triangles on the bottom row (y = 0) or on the side x = 0."""
    n = k * (k - 1) // 2
    if mode.upper() == "BOTTOM":
        return Tiling(k, (Direction.N,) * n)
    if mode.upper() == "SIDE":
        return Tiling(k, (Direction.E,) * n)
    raise ValueError(f"unknown mode {mode!r}")


def bottom_positions(t: Tiling) -> frozenset[int]:
    """Positions 1..k (left to right) of free triangles on the bottom row."""
    return frozenset(u.x + 1 for u in free_triangles(t) if u.y == 0)


# ---------------------------------------------------------------------------
# JSON documents

def to_document(t: Tiling | LabeledTiling) -> dict:
    tiling = t.tiling if isinstance(t, LabeledTiling) else t
    doc = {
        "k": tiling.k,
        "lozenges": [{"down": [d.x, d.y], "dir": Direction(m).name}
                     for d, m in zip(grid(tiling.k).downs, tiling.match)],
    }
    if isinstance(t, LabeledTiling):
        doc["labels"] = {str(i + 1): [u.x, u.y] for i, u in enumerate(t.labels)}
    return doc


def serialize(t: Tiling | LabeledTiling) -> str:
    return json.dumps(to_document(t), separators=(",", ":"))


def _no_duplicate_keys(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ParseError(f"duplicate key {key!r}", "$")
        out[key] = value
    return out


def parse(text: str) -> Tiling | LabeledTiling:
    """Parse a tiling document; returns a ``LabeledTiling`` when labels are present."""
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return from_document(doc)


def _int_pair(v, where):
    if (not isinstance(v, list) or len(v) != 2
            or not all(isinstance(c, int) and not isinstance(c, bool) for c in v)):
        raise ParseError("expected [x, y] integer pair", where)
    return v


def from_document(doc) -> Tiling | LabeledTiling:
    if not isinstance(doc, dict):
        raise ParseError("expected an object", "$")
    k = doc.get("k")
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ParseError("k must be a positive integer", "$.k")
    loz = doc.get("lozenges")
    if not isinstance(loz, list):
        raise ParseError("expected a list", "$.lozenges")
    pairs = []
    seen = set()
    for i, item in enumerate(loz):
        where = f"$.lozenges[{i}]"
        if not isinstance(item, dict):
            raise ParseError("expected an object", where)
        x, y = _int_pair(item.get("down"), where + ".down")
        d = down(x, y)
        if not in_range(d, k):
            raise ParseError(f"{d!r} outside T_{k}", where + ".down")
        if d in seen:
            raise ParseError(f"{d!r} assigned twice", where + ".down")
        seen.add(d)
        name = item.get("dir")
        if name not in Direction.__members__:
            raise ParseError("dir must be HYP, E or N", where + ".dir")
        pairs.append((d, Direction[name]))
    try:
        tiling = Tiling.from_lozenges(k, pairs)
    except MalformedInput as exc:
        raise ParseError(str(exc), "$.lozenges") from None
    rep = validate_tiling(tiling)
    if not rep.ok:
        raise ParseError(f"{rep.duplicate!r} used by two lozenges", "$.lozenges")
    if "labels" not in doc:
        return tiling
    labels = doc["labels"]
    if not isinstance(labels, dict):
        raise ParseError("expected an object", "$.labels")
    if sorted(labels) != sorted(str(i) for i in range(1, k + 1)):
        raise ParseError(f"labels must be exactly 1..{k}", "$.labels")
    cells = []
    for i in range(1, k + 1):
        x, y = _int_pair(labels[str(i)], f"$.labels.{i}")
        cells.append(up(x, y))
    try:
        return LabeledTiling(tiling, tuple(cells))
    except MalformedInput as exc:
        raise ParseError(str(exc), "$.labels") from None
