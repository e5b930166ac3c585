"""Lozenge flips, the bistellar criterion, and flip graphs of T_k.

A trapezoid flip slides a free upward triangle across a neighbouring
lozenge: the downward half of that lozenge re-pairs with the free triangle
and its old partner becomes free.  A hexagon flip rotates the three
lozenges tiling a unit hexagon.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .census import count_tilings, enumerate_tilings
from .minkowski import (
    LabeledSubdivision, MinkowskiCell, NotLabelable, ShapeError, Subdivision,
    bounding_hexagon, check_labeled, check_subdivision, coarse_summands, is_convex,
    labeled_refinements, walk_arm,
)
from .trigrid import (
    DOWN, UP, Direction, GridCoord, LabeledTiling, Tiling, all_labelings,
    canonical_tiling, direction_between, down, free_triangles, grid, neighbours,
    partner_of, up,
)

TRAPEZOID = "TRAPEZOID"
HEXAGON = "HEXAGON"

ALL_LOZENGE = "ALL_LOZENGE"
TRAPEZOID_ONLY = "TRAPEZOID_ONLY"
BISTELLAR = "BISTELLAR"
REGIMES = (ALL_LOZENGE, TRAPEZOID_ONLY, BISTELLAR)

AnyTiling = Union[Tiling, LabeledTiling]

# a DOWN cell glued across its diagonal, vertical or horizontal edge leaves the
# remaining edge direction free; that is where a trapezoid's long side lies
_LONG_ARM = {Direction.HYP: "bc", Direction.E: "ac", Direction.N: "ab"}


class StaleFlip(ValueError):
    pass


class FlipGraphOverflow(RuntimeError):
    pass


class DisconnectedGraph(ValueError):
    def __init__(self, components: int):
        super().__init__(f"flip graph has {components} connected components")
        self.components = components


@dataclass(frozen=True)
class Flip:
    kind: str
    site: frozenset  # unit triangles covered by the trapezoid or hexagon
    before: tuple[tuple[GridCoord, Direction], ...]
    after: tuple[tuple[GridCoord, Direction], ...]
    moved: tuple[GridCoord, GridCoord] | None = None  # free triangle (from, to)

    def reverse(self) -> Flip:
        moved = None if self.moved is None else (self.moved[1], self.moved[0])
        return Flip(self.kind, self.site, self.after, self.before, moved)

    @property
    def displacement(self) -> tuple[int, int]:
        if self.moved is None:
            return (0, 0)
        a, b = self.moved
        return (b.x - a.x, b.y - a.y)

    def long_arm(self) -> str:
        """Arm kind pointing through the long side of a trapezoid."""
        if self.kind != TRAPEZOID:
            raise ValueError("only trapezoid flips have a long side")
        (d, old), = self.before
        (_, new), = self.after
        (third,) = set(Direction) - {old, new}
        return _LONG_ARM[third]


def _tiling(t: AnyTiling) -> Tiling:
    return t.tiling if isinstance(t, LabeledTiling) else t


def trapezoid_flips(t: Tiling) -> list[Flip]:
    g = grid(t.k)
    out = []
    for u in free_triangles(t):
        for d in neighbours(u, t.k):
            old = t.match[g.down_index[d]]
            other = partner_of(d, old)
            new = direction_between(d, u)
            out.append(Flip(TRAPEZOID, frozenset((u, d, other)), ((d, old),), ((d, new),), (u, other)))
    return out


def _hexagon_matchings(px: int, py: int):
    a, b, c = down(px - 1, py), down(px, py - 1), down(px - 1, py - 1)
    first = ((a, Direction.HYP), (b, Direction.N), (c, Direction.E))
    second = ((a, Direction.E), (b, Direction.HYP), (c, Direction.N))
    return first, second


def hexagon_flips(t: Tiling) -> list[Flip]:
    g = grid(t.k)
    out = []
    for py in range(1, t.k):
        for px in range(1, t.k - py):
            first, second = _hexagon_matchings(px, py)
            site = frozenset([d for d, _ in first] + [up(px, py), up(px - 1, py), up(px, py - 1)])
            for m1, m2 in ((first, second), (second, first)):
                if all(t.match[g.down_index[d]] == dr for d, dr in m1):
                    out.append(Flip(HEXAGON, site, m1, m2))
    return out


def find_flips(t: AnyTiling, regime: str = ALL_LOZENGE) -> list[Flip]:
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    base = _tiling(t)
    flips = trapezoid_flips(base)
    if regime == BISTELLAR:
        flips = [f for f in flips if _trapezoid_bistellar(base, f)]
    if regime != TRAPEZOID_ONLY:
        flips += hexagon_flips(base)
    return flips


def apply_flip(t: AnyTiling, flip: Flip) -> AnyTiling:
    base = _tiling(t)
    g = grid(base.k)
    match = list(base.match)
    for d, dr in flip.before:
        i = g.down_index.get(d)
        if i is None or match[i] != dr:
            raise StaleFlip(f"flip does not apply: {d!r} is not glued {dr.name}")
        match[i] = None
    for d, dr in flip.after:
        match[g.down_index[d]] = dr
    new = Tiling(base.k, tuple(match))
    if isinstance(t, LabeledTiling):
        labels = t.labels
        if flip.moved is not None:
            src, dst = flip.moved
            labels = tuple(dst if u == src else u for u in labels)
        return LabeledTiling(new, labels)
    return new


def _trapezoid_bistellar(t: Tiling, flip: Flip) -> bool:
    kind = flip.long_arm()
    src, dst = flip.moved
    _, before = walk_arm(t, src, kind)
    _, after = walk_arm(apply_flip(t, flip), dst, kind)
    return before == after


def is_bistellar(t: AnyTiling, flip: Flip) -> bool:
    """Hexagon flips always are; a trapezoid flip is when the moved triangle's
    arm through the long side is merely translated by the flip."""
    if flip.kind == HEXAGON:
        return True
    return _trapezoid_bistellar(_tiling(t), flip)


# ---------------------------------------------------------------------------
# independent check through the coarsening that both tilings refine

def _far_triangles(region, p, k):
    """Triangles at p on the outer side of the hexagon side through p."""
    h = bounding_hexagon(region)
    px, py = p
    tests = []
    if py == h.ymin:
        tests.append(lambda cx, cy, cs: cy < 3 * h.ymin)
    if py == h.ymax:
        tests.append(lambda cx, cy, cs: cy > 3 * h.ymax)
    if px == h.xmin:
        tests.append(lambda cx, cy, cs: cx < 3 * h.xmin)
    if px == h.xmax:
        tests.append(lambda cx, cy, cs: cx > 3 * h.xmax)
    if px + py == h.smin:
        tests.append(lambda cx, cy, cs: cs < 3 * h.smin)
    if px + py == h.smax:
        tests.append(lambda cx, cy, cs: cs > 3 * h.smax)
    around = [up(px, py), up(px - 1, py), up(px, py - 1),
              down(px - 1, py - 1), down(px - 1, py), down(px, py - 1)]
    g = grid(k)
    out = []
    for tri in around:
        if tri not in g.up_index and tri not in g.down_index:
            continue
        cx = sum(c[0] for c in tri.corners())
        cy = sum(c[1] for c in tri.corners())
        if any(test(cx, cy, cx + cy) for test in tests):
            out.append(tri)
    return out


def coarsening(t1: Tiling, t2: Tiling) -> list[frozenset] | None:
    """Coarsest convex, face-to-face subdivision refined by both tilings.

    Starts from the regions where the tilings differ and keeps merging:
    a non-convex cell absorbs everything its hull meets, and cells touching
    the inside of another cell's side at one of their vertices are fused.
    Returns None for equal tilings.
    """
    k = t1.k
    tiles1, tiles2 = set(t1.tiles()), set(t2.tiles())
    if tiles1 == tiles2:
        return None
    parent = {t: t for t in grid(k).triangles}

    def find(t):
        while parent[t] != t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    def union(a, b):
        parent[find(a)] = find(b)

    for tile in tiles1 | tiles2:
        first = next(iter(tile))
        for other in tile:
            union(first, other)

    def cells():
        groups: dict = {}
        for t in grid(k).triangles:
            groups.setdefault(find(t), set()).add(t)
        return [frozenset(v) for v in groups.values()]

    changed = True
    while changed:
        changed = False
        current = cells()
        for c in current:
            if not is_convex(c):
                first = next(iter(c))
                for t in bounding_hexagon(c).triangles():
                    if find(t) != find(first):
                        union(t, first)
                        changed = True
        if changed:
            continue
        for c in current:
            h = bounding_hexagon(c)
            verts = set(h.vertices())
            for p in h.boundary_points() - verts:
                far = _far_triangles(c, p, k)
                roots = {find(t) for t in far}
                if len(roots) > 1:
                    first = far[0]
                    for t in far[1:]:
                        union(t, first)
                    changed = True
    return cells()


def bistellar_oracle(t1: LabeledTiling, t2: LabeledTiling) -> bool:
    """True iff t1, t2 are exactly the two labeled refinements of one mixed subdivision."""
    if t1.k != t2.k or t1 == t2:
        return False
    cells = coarsening(t1.tiling, t2.tiling)
    if cells is None:
        return False
    s = Subdivision(t1.k, tuple(cells))
    try:
        check_subdivision(s)
    except (NotLabelable, ShapeError):
        return False
    c1, c2 = coarse_summands(s, t1), coarse_summands(s, t2)
    if c1 != c2:
        return False
    ls = LabeledSubdivision(s.k, tuple(MinkowskiCell(summ, c) for summ, c in zip(c1, s.cells)))
    if not check_labeled(ls):
        return False
    found = {fine.key() for fine in labeled_refinements(ls, limit=3)}
    return found == {t1.key(), t2.key()}


# ---------------------------------------------------------------------------
# normalisation

def height_sum(t: AnyTiling) -> int:
    return sum(u.y for u in free_triangles(_tiling(t)))


def normalize_to_bottom(t: AnyTiling) -> list[Flip]:
    """Bistellar trapezoid flips, each lowering one triangle by a row, down to BOTTOM."""
    seq = []
    current = t
    while height_sum(current) > 0:
        base = _tiling(current)
        choices = [f for f in trapezoid_flips(base)
                   if f.moved[1].y == f.moved[0].y - 1 and _trapezoid_bistellar(base, f)]
        if not choices:
            raise RuntimeError("no height-lowering bistellar flip found")
        # highest triangle first, matching the argument that such a flip exists there
        flip = max(choices, key=lambda f: (f.moved[0].y, -f.moved[0].x))
        seq.append(flip)
        current = apply_flip(current, flip)
    return seq


# ---------------------------------------------------------------------------
# flip graphs

@dataclass
class FlipGraph:
    k: int
    regime: str
    labeled: bool
    nodes: list
    edges: list[tuple[int, int]]
    index: dict[str, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.nodes)

    def matrix(self) -> csr_matrix:
        n = len(self.nodes)
        if not self.edges:
            return csr_matrix((n, n), dtype=np.int8)
        e = np.array(self.edges, dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))

    def components(self) -> int:
        return int(connected_components(self.matrix(), directed=False)[0])

    def is_connected(self) -> bool:
        return self.components() == 1

    def distance(self, a: AnyTiling, b: AnyTiling) -> int:
        i, j = self.index[a.key()], self.index[b.key()]
        d = shortest_path(self.matrix(), unweighted=True, directed=False, indices=[i])[0, j]
        if not np.isfinite(d):
            raise DisconnectedGraph(self.components())
        return int(d)

    def adjacency_lines(self) -> Iterator[str]:
        nbrs: list[list[int]] = [[] for _ in self.nodes]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        for i, node in enumerate(self.nodes):
            yield node.key() + ": " + " ".join(self.nodes[j].key() for j in sorted(nbrs[i]))

    def summary(self, with_diameter: bool = False) -> dict:
        out = {"k": self.k, "regime": self.regime, "labeled": self.labeled,
               "nodes": len(self.nodes), "edges": len(self.edges), "components": self.components()}
        degrees = [0] * len(self.nodes)
        for i, j in self.edges:
            degrees[i] += 1
            degrees[j] += 1
        # reported only: how many nodes have fewer than 2k - 2 flips in this regime
        out["min_degree"] = min(degrees, default=0)
        out["below_2k_minus_2"] = sum(d < 2 * self.k - 2 for d in degrees)
        if with_diameter:
            out["diameter"] = diameter(self)
        return out


def _all_nodes(k: int, labeled: bool) -> Iterator[AnyTiling]:
    for t in enumerate_tilings(k):
        if labeled:
            yield from all_labelings(t)
        else:
            yield t


def build_flip_graph(k: int, regime: str = ALL_LOZENGE, labeled: bool = False,
                     budget: int | None = None) -> FlipGraph:
    """Every (labeled) tiling of T_k with an edge per flip of the regime."""
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    expected = count_tilings(k) * (math.factorial(k) if labeled else 1)
    if budget is not None and expected > budget:
        raise FlipGraphOverflow(f"{expected} nodes exceed the budget of {budget}")
    nodes = list(_all_nodes(k, labeled))
    index = {t.key(): i for i, t in enumerate(nodes)}
    edges = set()
    for i, t in enumerate(nodes):
        for flip in find_flips(t, regime):
            j = index[apply_flip(t, flip).key()]
            if i != j:
                edges.add((min(i, j), max(i, j)))
    return FlipGraph(k, regime, labeled, nodes, sorted(edges), index)


def diameter(graph: FlipGraph, chunk: int = 512) -> int:
    """Largest eccentricity, by breadth-first search from every node."""
    m = graph.matrix()
    n_comp = int(connected_components(m, directed=False)[0])
    if n_comp != 1:
        raise DisconnectedGraph(n_comp)
    best = 0
    n = len(graph.nodes)
    for start in range(0, n, chunk):
        idx = list(range(start, min(n, start + chunk)))
        dist = shortest_path(m, unweighted=True, directed=False, indices=idx)
        best = max(best, int(dist.max()))
    return best


def diameter_upper_bound(k: int) -> int:
    """5 C(k, 2) flips suffice between labeled tilings of T_k.

    Down to BOTTOM costs at most C(k, 2), relabelling 3 C(k, 2), and back
    again C(k, 2); heights on T_k range over 0..k-1.
    """
    return 5 * math.comb(k, 2)


def canonical_distance(k: int) -> int:
    """Unlabeled lozenge-flip distance between the BOTTOM and SIDE tilings of T_k."""
    g = build_flip_graph(k, ALL_LOZENGE, labeled=False)
    return g.distance(canonical_tiling(k, "BOTTOM"), canonical_tiling(k, "SIDE"))
