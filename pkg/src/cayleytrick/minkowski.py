"""Minkowski cells of kΔ², zones of a lozenge tiling, and mixed labelings.

Summands are faces of the unit triangle with a = (0, 0), b = (1, 0),
c = (0, 1), written as sorted corner strings: "a", "b", "c", "ab", "ac",
"bc", "abc".  A cell whose summand list is (B_1, ..., B_k) *is* the polygon
B_1 + ... + B_k inside T_k; no translation is involved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .trigrid import (
    DOWN, UP, Direction, GridCoord, LabeledTiling, Tiling, down, free_triangles, grid, neighbours,
    partner_of, up,
)

CORNER_POINTS = {"a": (0, 0), "b": (1, 0), "c": (0, 1)}
SUMMANDS = ("a", "b", "c", "ab", "ac", "bc", "abc")
FULL = "abc"

Region = frozenset  # of GridCoord


class ShapeError(ValueError):
    """Region is not a convex union of unit triangles."""


class NotDecomposable(ValueError):
    """Region is not a Minkowski sum of faces of the unit upward triangle."""


class NotLabelable(ValueError):
    def __init__(self, message: str, cell=None):
        super().__init__(message)
        self.cell = cell


class LabelingConflict(RuntimeError):
    """Two refinements of one subdivision induced different coarse labelings."""


# ---------------------------------------------------------------------------
# region geometry

@dataclass(frozen=True)
class Hexagon:
    """Bounds xmin <= x <= xmax, ymin <= y <= ymax, smin <= x + y <= smax."""

    xmin: int
    xmax: int
    ymin: int
    ymax: int
    smin: int
    smax: int

    def triangles(self) -> frozenset[GridCoord]:
        out = []
        for y in range(self.ymin, self.ymax):
            for x in range(self.xmin, self.xmax):
                s = x + y
                if s >= self.smin and s + 1 <= self.smax:
                    out.append(up(x, y))
                if s + 1 >= self.smin and s + 2 <= self.smax:
                    out.append(down(x, y))
        return frozenset(out)

    def sides(self) -> dict[str, int]:
        """Side lengths keyed by outer normal: bottom, top, left, right, hyp, antihyp."""
        h = self
        return {
            "bottom": min(h.xmax, h.smax - h.ymin) - max(h.xmin, h.smin - h.ymin),
            "top": min(h.xmax, h.smax - h.ymax) - max(h.xmin, h.smin - h.ymax),
            "left": min(h.ymax, h.smax - h.xmin) - max(h.ymin, h.smin - h.xmin),
            "right": min(h.ymax, h.smax - h.xmax) - max(h.ymin, h.smin - h.xmax),
            "hyp": min(h.xmax, h.smax - h.ymin) - max(h.xmin, h.smax - h.ymax),
            "antihyp": min(h.xmax, h.smin - h.ymin) - max(h.xmin, h.smin - h.ymax),
        }

    def vertices(self) -> list[tuple[int, int]]:
        """Corners of the polygon, counter-clockwise from the bottom-left."""
        h = self
        cand = [
            (max(h.xmin, h.smin - h.ymin), h.ymin), (min(h.xmax, h.smax - h.ymin), h.ymin),
            (h.xmax, max(h.ymin, h.smin - h.xmax)), (h.xmax, min(h.ymax, h.smax - h.xmax)),
            (min(h.xmax, h.smax - h.ymax), h.ymax), (max(h.xmin, h.smin - h.ymax), h.ymax),
            (h.xmin, min(h.ymax, h.smax - h.xmin)), (h.xmin, max(h.ymin, h.smin - h.xmin)),
        ]
        out = []
        for p in cand:
            if not out or out[-1] != p:
                out.append(p)
        while len(out) > 1 and out[0] == out[-1]:
            out.pop()
        return out

    def boundary_points(self) -> set[tuple[int, int]]:
        pts = set()
        for y in range(self.ymin, self.ymax + 1):
            for x in range(self.xmin, self.xmax + 1):
                s = x + y
                if self.smin <= s <= self.smax and (
                        x in (self.xmin, self.xmax) or y in (self.ymin, self.ymax)
                        or s in (self.smin, self.smax)):
                    pts.add((x, y))
        return pts


def region_points(region: Iterable[GridCoord]) -> set[tuple[int, int]]:
    return {p for t in region for p in t.corners()}


def bounding_hexagon(region: Iterable[GridCoord]) -> Hexagon:
    pts = region_points(region)
    if not pts:
        raise ShapeError("empty region")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    ss = [p[0] + p[1] for p in pts]
    return Hexagon(min(xs), max(xs), min(ys), max(ys), min(ss), max(ss))


def is_convex(region: Iterable[GridCoord]) -> bool:
    region = frozenset(region)
    return bool(region) and bounding_hexagon(region).triangles() == region


def _require_convex(region) -> Hexagon:
    region = frozenset(region)
    hexagon = bounding_hexagon(region)
    if hexagon.triangles() != region:
        raise ShapeError("region is not a convex union of unit triangles")
    return hexagon


def excess(region: Iterable[GridCoord]) -> int:
    return sum(1 if t.orient == UP else -1 for t in region)


@dataclass(frozen=True)
class FaceDecomposition:
    """``e`` full triangles plus alpha edges ab, beta edges bc, gamma edges ca."""

    e: int
    alpha: int
    beta: int
    gamma: int

    def summands(self) -> list[str]:
        return [FULL] * self.e + ["ab"] * self.alpha + ["bc"] * self.beta + ["ac"] * self.gamma


def decompose_cell(region: Iterable[GridCoord]) -> FaceDecomposition:
    sides = _require_convex(region).sides()
    e = sides["bottom"] - sides["top"]
    if e < 0 or sides["left"] - sides["right"] != e or sides["hyp"] - sides["antihyp"] != e:
        raise NotDecomposable("opposite sides violate the upward-triangle length condition")
    return FaceDecomposition(e, sides["top"], sides["antihyp"], sides["right"])


def minkowski_sum_hexagon(summands: Sequence[str]) -> Hexagon:
    bounds = [0] * 6
    for s in summands:
        pts = [CORNER_POINTS[ch] for ch in s]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        ss = [p[0] + p[1] for p in pts]
        for i, v in enumerate((min(xs), max(xs), min(ys), max(ys), min(ss), max(ss))):
            bounds[i] += v
    return Hexagon(*bounds)


def minkowski_sum_region(summands: Sequence[str]) -> frozenset[GridCoord]:
    """Unit triangles of the polygon B_1 + ... + B_k (empty if not 2-dimensional)."""
    return minkowski_sum_hexagon(summands).triangles()


def _lozenge_tileable(region: frozenset[GridCoord]) -> bool:
    downs = [t for t in region if t.orient == DOWN]
    if not downs:
        return True
    graph = nx.Graph()
    graph.add_nodes_from(downs)
    for d in downs:
        for direction in Direction:
            u = partner_of(d, direction)
            if u in region:
                graph.add_edge(d, u)
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=downs)
    return all(d in matching for d in downs)


@dataclass(frozen=True)
class CellCheck:
    minkowski_sum: bool   # (1)
    tileable: bool        # (2)
    nonneg_excess: bool   # (3)
    side_lengths: bool    # (4)

    @property
    def ok(self) -> bool:
        return self.minkowski_sum and self.tileable and self.nonneg_excess and self.side_lengths

    @property
    def consistent(self) -> bool:
        return len({self.minkowski_sum, self.tileable, self.nonneg_excess, self.side_lengths}) == 1

    def failed(self) -> list[int]:
        flags = (self.minkowski_sum, self.tileable, self.nonneg_excess, self.side_lengths)
        return [i + 1 for i, f in enumerate(flags) if not f]


def is_minkowski_cell(region: Iterable[GridCoord]) -> CellCheck:
    region = frozenset(region)
    hexagon = _require_convex(region)
    sides = hexagon.sides()
    cond4 = (sides["bottom"] >= sides["top"] and sides["left"] >= sides["right"]
             and sides["hyp"] >= sides["antihyp"])
    cond1 = False
    try:
        dec = decompose_cell(region)
    except NotDecomposable:
        pass
    else:
        summ = minkowski_sum_hexagon(dec.summands())
        dx, dy = hexagon.xmin - summ.xmin, hexagon.ymin - summ.ymin
        shifted = frozenset(GridCoord(t.x + dx, t.y + dy, t.orient) for t in summ.triangles())
        cond1 = shifted == region
    return CellCheck(cond1, _lozenge_tileable(region), excess(region) >= 0, cond4)


# ---------------------------------------------------------------------------
# zones and the labeling of a fine tiling

ARM_KINDS = ("ab", "ac", "bc")  # heading to the bottom, left and hypotenuse edge


@dataclass(frozen=True)
class Zone:
    index: int
    core: GridCoord
    arms: dict  # kind -> tuple of (down, up) lozenges from the core outward
    tags: dict  # kind -> tuple of Direction tags along the arm

    def triangles(self) -> frozenset[GridCoord]:
        out = {self.core}
        for loz in self.arms.values():
            for d, u in loz:
                out.add(d)
                out.add(u)
        return frozenset(out)


def _first_down(u: GridCoord, kind: str, k: int) -> GridCoord | None:
    if kind == "ab":
        return down(u.x, u.y - 1) if u.y >= 1 else None
    if kind == "ac":
        return down(u.x - 1, u.y) if u.x >= 1 else None
    return down(u.x, u.y) if u.x + u.y <= k - 2 else None


def walk_arm(t: Tiling, start: GridCoord, kind: str) -> tuple[list, list]:
    """Lozenges met by sweeping the ``kind`` edge of upward triangle ``start``."""
    g = grid(t.k)
    lozenges, tags = [], []
    u = start
    while True:
        d = _first_down(u, kind, t.k)
        if d is None:
            return lozenges, tags
        direction = t.match[g.down_index[d]]
        u = partner_of(d, direction)
        lozenges.append((d, u))
        tags.append(direction)


def compute_zone(t: LabeledTiling, i: int) -> Zone:
    if not 1 <= i <= t.k:
        raise ValueError(f"label {i} outside 1..{t.k}")
    core = t.labels[i - 1]
    arms, tags = {}, {}
    for kind in ARM_KINDS:
        loz, tg = walk_arm(t.tiling, core, kind)
        arms[kind] = tuple(loz)
        tags[kind] = tuple(tg)
    return Zone(i, core, arms, tags)


def _boundary_letter(k: int, tri: GridCoord, ends: dict) -> str | None:
    """Corner letter of a free-boundary upward triangle, from where the arms end."""
    if tri.orient != UP:
        return None
    if tri.y == 0 and tri.x != ends["ab"].x:
        return "a" if tri.x < ends["ab"].x else "b"
    if tri.x == 0 and tri.y != ends["ac"].y:
        return "a" if tri.y < ends["ac"].y else "c"
    if tri.x + tri.y == k - 1 and tri.x != ends["bc"].x:
        return "b" if tri.x > ends["bc"].x else "c"
    return None


def complement_regions(t: Tiling, zone: Zone) -> dict[frozenset, str]:
    """Corner letter of every tile outside a zone.

    The zone cuts T_k into (at most) three pieces, one per corner.  Tiles are
    grouped by edge adjacency and each group is named by a boundary edge it
    touches, which lies on a known side of the arm ending on that edge.
    """
    zone_tris = zone.triangles()
    ends = {kind: (loz[-1][1] if loz else zone.core) for kind, loz in zone.arms.items()}
    tiles = [tile for tile in t.tiles() if not tile & zone_tris]
    owner = {tri: tile for tile in tiles for tri in tile}
    out: dict[frozenset, str] = {}
    for seed in tiles:
        if seed in out:
            continue
        comp, stack, letters = {seed}, [seed], set()
        while stack:
            tile = stack.pop()
            for tri in tile:
                letter = _boundary_letter(t.k, tri, ends)
                if letter:
                    letters.add(letter)
                for nb in neighbours(tri, t.k):
                    other = owner.get(nb)
                    if other is not None and other not in comp:
                        comp.add(other)
                        stack.append(other)
        if len(letters) != 1:
            raise RuntimeError(f"complement piece touches corners {sorted(letters)}")
        (letter,) = letters
        for tile in comp:
            out[tile] = letter
    return out


@dataclass(frozen=True)
class MinkowskiCell:
    summands: tuple[str, ...]
    support: frozenset[GridCoord]

    def dims(self) -> int:
        return sum(len(s) - 1 for s in self.summands)

    def is_fine(self) -> bool:
        if self.dims() != 2:
            return False
        big = [s for s in self.summands if len(s) > 1]
        return big == [FULL] or (len(big) == 2 and big[0] != big[1])


@dataclass(frozen=True)
class LabeledSubdivision:
    k: int
    cells: tuple[MinkowskiCell, ...]

    def is_fine(self) -> bool:
        return all(c.is_fine() for c in self.cells)

    def to_labeled_tiling(self) -> LabeledTiling:
        if not self.is_fine():
            raise ValueError("subdivision is not fine")
        pairs, labels = [], [None] * self.k
        for c in self.cells:
            if len(c.support) == 2:
                d = next(s for s in c.support if s.orient == DOWN)
                u = next(s for s in c.support if s.orient == UP)
                pairs.append((d, u))
            else:
                (u,) = c.support
                labels[c.summands.index(FULL)] = u
        return LabeledTiling(Tiling.from_lozenges(self.k, pairs), tuple(labels))

    def canonical(self) -> tuple:
        return tuple(sorted((tuple(sorted(c.support, key=GridCoord.sort_key)), c.summands)
                            for c in self.cells))


def _cell_order(cell: Iterable[GridCoord]):
    return min(t.sort_key() for t in cell)


def label_cells(t: LabeledTiling) -> list[MinkowskiCell]:
    """Summand list of every tile (lozenges and free triangles), row-major by tile."""
    tiles = sorted(t.tiling.tiles(), key=_cell_order)
    columns = []
    for i in range(1, t.k + 1):
        zone = compute_zone(t, i)
        names = complement_regions(t.tiling, zone)
        names[frozenset([zone.core])] = FULL
        for kind, loz in zone.arms.items():
            for d, u in loz:
                names[frozenset([d, u])] = kind
        columns.append([names[tile] for tile in tiles])
    return [MinkowskiCell(tuple(col[j] for col in columns), tile) for j, tile in enumerate(tiles)]


def labeled_subdivision(t: LabeledTiling) -> LabeledSubdivision:
    return LabeledSubdivision(t.k, tuple(label_cells(t)))


# ---------------------------------------------------------------------------
# general subdivisions

@dataclass(frozen=True)
class Subdivision:
    k: int
    cells: tuple[frozenset[GridCoord], ...]

    def __post_init__(self):
        cells = tuple(sorted((frozenset(c) for c in self.cells), key=_cell_order))
        object.__setattr__(self, "cells", cells)
        seen = set()
        for c in cells:
            if not c:
                raise ValueError("empty cell")
            if seen & c:
                raise ValueError("cells overlap")
            seen |= c
            if not _edge_connected(c, self.k):
                raise ValueError("cell is not edge-connected")
        if seen != set(grid(self.k).triangles):
            raise ValueError("cells do not cover T_k")

    @classmethod
    def from_tiling(cls, t: Tiling) -> Subdivision:
        return cls(t.k, tuple(t.tiles()))

    @classmethod
    def trivial(cls, k: int) -> Subdivision:
        return cls(k, (frozenset(grid(k).triangles),))

    def is_fine(self) -> bool:
        return all(len(c) == 1 and next(iter(c)).orient == UP
                   or len(c) == 2 and excess(c) == 0 for c in self.cells)


def _edge_connected(cell: frozenset[GridCoord], k: int) -> bool:
    start = next(iter(cell))
    seen = {start}
    stack = [start]
    while stack:
        t = stack.pop()
        for s in neighbours(t, k):
            if s in cell and s not in seen:
                seen.add(s)
                stack.append(s)
    return len(seen) == len(cell)


def improper_points(cells: Sequence[frozenset[GridCoord]]) -> list[tuple[int, tuple[int, int]]]:
    """(cell index, point) where a point lies inside a side of that cell but is a
    vertex of another cell: the cells do not meet face to face there."""
    hexes = [bounding_hexagon(c) for c in cells]
    verts = [set(h.vertices()) for h in hexes]
    vertex_owner: dict[tuple[int, int], set[int]] = {}
    for i, vs in enumerate(verts):
        for p in vs:
            vertex_owner.setdefault(p, set()).add(i)
    out = []
    for i, h in enumerate(hexes):
        for p in h.boundary_points() - verts[i]:
            if vertex_owner.get(p, set()) - {i}:
                out.append((i, p))
    return out


def check_subdivision(s: Subdivision) -> None:
    """Raise unless every cell is convex, satisfies the Minkowski-cell
    conditions, and cells meet face to face."""
    for c in s.cells:
        chk = is_minkowski_cell(c)
        if not chk.ok:
            raise NotLabelable(f"cell fails conditions {chk.failed()}", c)
    bad = improper_points(s.cells)
    if bad:
        i, p = bad[0]
        raise NotLabelable(f"cells do not meet face to face at {p}", s.cells[i])


def cell_tilings(region: frozenset[GridCoord], reverse: bool = False) -> Iterator[dict]:
    """All lozenge tilings of one cell as {down: up} maps."""
    downs = sorted((t for t in region if t.orient == DOWN), key=GridCoord.sort_key)
    order = list(Direction)[::-1] if reverse else list(Direction)
    match: dict[GridCoord, GridCoord] = {}
    used: set[GridCoord] = set()

    def rec(i):
        if i == len(downs):
            yield dict(match)
            return
        d = downs[i]
        for direction in order:
            u = partner_of(d, direction)
            if u in region and u not in used:
                match[d] = u
                used.add(u)
                yield from rec(i + 1)
                used.discard(u)
                del match[d]

    yield from rec(0)


def refinements(s: Subdivision) -> Iterator[Tiling]:
    for c in s.cells:
        if not _lozenge_tileable(c):
            raise NotLabelable("cell admits no lozenge refinement", c)
    per_cell = [list(cell_tilings(c)) for c in s.cells]
    for combo in itertools.product(*per_cell):
        pairs = [pair for m in combo for pair in m.items()]
        yield Tiling.from_lozenges(s.k, pairs)


def default_assignment(s: Subdivision) -> dict[int, int]:
    """Labels 1..k handed out in order to cells sorted row-major, by excess."""
    out, label = {}, 1
    for ci, c in enumerate(s.cells):
        for _ in range(excess(c)):
            out[label] = ci
            label += 1
    return out


def _refine_with_labels(s: Subdivision, assignment, reverse: bool) -> LabeledTiling:
    pairs = []
    for c in s.cells:
        pairs.extend(next(cell_tilings(c, reverse)).items())
    tiling = Tiling.from_lozenges(s.k, pairs)
    free = free_triangles(tiling)
    cell_of = {t: ci for ci, c in enumerate(s.cells) for t in c}
    pools = {ci: sorted((u for u in free if cell_of[u] == ci), key=GridCoord.sort_key)
             for ci in range(len(s.cells))}
    labels = [None] * s.k
    for label in sorted(assignment):
        labels[label - 1] = pools[assignment[label]].pop(0)
    return LabeledTiling(tiling, tuple(labels))


def coarse_summands(s: Subdivision, fine: LabeledTiling) -> list[tuple[str, ...]]:
    """Summands of each coarse cell as unions of the summands of its tiles."""
    cell_of = {t: ci for ci, c in enumerate(s.cells) for t in c}
    acc = [[set() for _ in range(s.k)] for _ in s.cells]
    for mc in label_cells(fine):
        ci = cell_of[next(iter(mc.support))]
        for i, summand in enumerate(mc.summands):
            acc[ci][i].update(summand)
    return [tuple("".join(sorted(x)) for x in col) for col in acc]


def label_subdivision(s: Subdivision, assignment: dict[int, int] | None = None) -> LabeledSubdivision:
    """Mixed labeling of a subdivision; ``assignment`` maps label -> cell index."""
    check_subdivision(s)
    if assignment is None:
        assignment = default_assignment(s)
    if sorted(assignment) != list(range(1, s.k + 1)):
        raise NotLabelable("assignment must cover labels 1..k")
    for ci, c in enumerate(s.cells):
        n = sum(1 for v in assignment.values() if v == ci)
        if n != excess(c):
            raise NotLabelable(f"cell receives {n} labels but has excess {excess(c)}", c)
    first = coarse_summands(s, _refine_with_labels(s, assignment, reverse=False))
    second = coarse_summands(s, _refine_with_labels(s, assignment, reverse=True))
    if first != second:
        raise LabelingConflict("refinements disagree on the coarse labeling")
    cells = tuple(MinkowskiCell(summ, c) for summ, c in zip(first, s.cells))
    for cell in cells:
        if minkowski_sum_region(cell.summands) != cell.support:
            raise LabelingConflict("a cell is not the Minkowski sum of its summands")
    return LabeledSubdivision(s.k, cells)


def restrict(ls: LabeledSubdivision, I: Iterable[int]) -> LabeledSubdivision:
    """Keep only the copies in I (renumbered 1..|I| in increasing order)."""
    idx = sorted(set(I))
    if not idx or idx[0] < 1 or idx[-1] > ls.k:
        raise ValueError("I must be a nonempty subset of 1..k")
    seen = {}
    for c in ls.cells:
        summ = tuple(c.summands[i - 1] for i in idx)
        region = minkowski_sum_region(summ)
        if region and summ not in seen:
            seen[summ] = MinkowskiCell(summ, region)
    cells = tuple(sorted(seen.values(), key=lambda c: _cell_order(c.support)))
    covered = [t for c in cells for t in c.support]
    if len(covered) != len(set(covered)) or set(covered) != set(grid(len(idx)).triangles):
        raise RuntimeError("restricted cells do not tile the smaller triangle")
    return LabeledSubdivision(len(idx), cells)


# outer normals of the six hexagon sides in cyclic order, as linear functionals
_NORMALS = ((0, -1), (1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1))


def vertex_decompositions(summands: Sequence[str]) -> dict[tuple[int, int], tuple[str, ...]]:
    """Each vertex of the sum with the summand vertex it is made of, per copy.

    A functional strictly between two consecutive side normals is maximised
    by a single vertex of every summand, and their sum is a vertex of B.
    """
    out = {}
    for j in range(6):
        (a, b), (c, d) = _NORMALS[j], _NORMALS[(j + 1) % 6]
        n = (a + c, b + d)
        letters = tuple(max(s, key=lambda ch: n[0] * CORNER_POINTS[ch][0] + n[1] * CORNER_POINTS[ch][1])
                        for s in summands)
        x = sum(CORNER_POINTS[ch][0] for ch in letters)
        y = sum(CORNER_POINTS[ch][1] for ch in letters)
        out[(x, y)] = letters
    return out


def mixed_conflicts(ls: LabeledSubdivision) -> list[tuple[int, int, tuple[int, int]]]:
    """Cell pairs (i, j, p) sharing vertex p but splitting it into different summand vertices.

    Together with face-to-face contact this is what makes two labelled cells
    meet in a common mixed face.
    """
    seen: dict[tuple[int, int], tuple[int, tuple[str, ...]]] = {}
    out = []
    for i, c in enumerate(ls.cells):
        for p, letters in vertex_decompositions(c.summands).items():
            if p in seen and seen[p][1] != letters:
                out.append((seen[p][0], i, p))
            seen.setdefault(p, (i, letters))
    return out


def check_labeled(ls: LabeledSubdivision) -> bool:
    """Cells are sums of their summands, tile T_k, and meet in common mixed faces."""
    covered = []
    for c in ls.cells:
        if len(c.summands) != ls.k or minkowski_sum_region(c.summands) != c.support:
            return False
        covered.extend(c.support)
    if len(covered) != len(set(covered)) or set(covered) != set(grid(ls.k).triangles):
        return False
    return not improper_points([c.support for c in ls.cells]) and not mixed_conflicts(ls)


def labeled_refinements(ls: LabeledSubdivision, limit: int | None = None) -> Iterator[LabeledTiling]:
    """Labeled tilings refining ``ls`` whose every summand sits inside the coarse one."""
    s = Subdivision(ls.k, tuple(c.support for c in ls.cells))
    coarse = {c.support: c.summands for c in ls.cells}
    cell_of = {t: c for c in s.cells for t in c}
    homes = []
    for i in range(ls.k):
        full = [c.support for c in ls.cells if c.summands[i] == FULL]
        if len(full) != 1:
            return
        homes.append(full[0])
    found = 0
    for tiling in refinements(s):
        free = free_triangles(tiling)
        pools = [[u for u in free if u in home] for home in homes]
        for labels in itertools.product(*pools):
            if len(set(labels)) != ls.k:
                continue
            fine = LabeledTiling(tiling, labels)
            if all(set(a) <= set(b)
                   for mc in label_cells(fine)
                   for a, b in zip(mc.summands, coarse[cell_of[next(iter(mc.support))]])):
                yield fine
                found += 1
                if limit is not None and found >= limit:
                    return


# ---------------------------------------------------------------------------
# documents

SUMMAND_ALIASES = {"ca": "ac", "ba": "ab", "cb": "bc"}


def subdivision_document(ls: LabeledSubdivision) -> dict:
    """Cells as sorted indices into ``grid(k).triangles`` plus their summands in copy order."""
    index = {t: n for n, t in enumerate(grid(ls.k).triangles)}
    return {
        "k": ls.k,
        "cells": [{"triangles": sorted(index[t] for t in c.support), "summands": list(c.summands)}
                  for c in ls.cells],
    }


def subdivision_from_document(doc: dict) -> LabeledSubdivision:
    """Inverse of ``subdivision_document``; "ca" is accepted for the edge "ac"."""
    k = doc["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError("k must be a positive integer")
    tris = grid(k).triangles
    cells = []
    for c in doc["cells"]:
        idx = c["triangles"]
        if not idx or any(not isinstance(n, int) or not 0 <= n < len(tris) for n in idx):
            raise ValueError(f"bad triangle indices {idx}")
        summ = tuple(SUMMAND_ALIASES.get(s, s) for s in c["summands"])
        if len(summ) != k or any(s not in SUMMANDS for s in summ):
            raise ValueError(f"bad summand list {c['summands']}")
        cells.append(MinkowskiCell(summ, frozenset(tris[n] for n in idx)))
    return LabeledSubdivision(k, tuple(cells))
