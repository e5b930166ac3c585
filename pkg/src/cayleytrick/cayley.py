"""Triangulations of the product of a triangle with a simplex, via labeled tilings.

Each fine mixed cell B_1 + ... + B_k becomes the simplex spanned by the
vertices (v, i) with v in B_i.  Points are embedded in Z^{k+1} as
a=(0,0), b=(1,0), c=(0,1) in the first two coordinates and copy i as the
standard affine basis of the (k-1)-simplex (copy 1 at the origin).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .minkowski import CORNER_POINTS, label_cells
from .trigrid import LabeledTiling

CayleyVertex = tuple[str, int]  # (corner letter, copy index 1..k)


@dataclass(frozen=True)
class Triangulation:
    k: int
    simplices: frozenset[frozenset[CayleyVertex]]

    def lines(self) -> list[str]:
        rows = []
        for s in self.simplices:
            rows.append(" ".join(f"({v},{i})" for v, i in sorted(s, key=lambda p: (p[1], p[0]))))
        return sorted(rows)

    def export(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def permute(self, perm: tuple[int, ...]) -> Triangulation:
        """Copy i goes to copy perm[i-1]."""
        return Triangulation(self.k, frozenset(
            frozenset((v, perm[i - 1]) for v, i in s) for s in self.simplices))


def to_triangulation(t: LabeledTiling) -> Triangulation:
    simplices = []
    for cell in label_cells(t):
        simplices.append(frozenset((v, i) for i, summand in enumerate(cell.summands, 1) for v in summand))
    return Triangulation(t.k, frozenset(simplices))


def embed(vertex: CayleyVertex, k: int) -> list[int]:
    v, i = vertex
    point = list(CORNER_POINTS[v]) + [0] * (k - 1)
    if i > 1:
        point[i] = 1  # coordinate 2 + (i - 2)
    return point


def bareiss_det(matrix: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [row[:] for row in matrix]
    n = len(a)
    sign, prev = 1, 1
    for i in range(n):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, n) if a[r][i] != 0), None)
            if swap is None:
                return 0
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[n - 1][n - 1] if n else 1


def normalized_volume(simplex: Iterable[CayleyVertex], k: int) -> int:
    pts = [embed(v, k) for v in sorted(simplex)]
    if len(pts) != k + 2:
        return 0
    base = pts[0]
    return abs(bareiss_det([[p[j] - base[j] for j in range(k + 1)] for p in pts[1:]]))


def _boundary_facet(facet: frozenset, k: int) -> bool:
    corners = {v for v, _ in facet}
    copies = {i for _, i in facet}
    return len(corners) <= 2 or len(copies) < k


def facet_defects(T: Triangulation) -> list[frozenset]:
    """Codimension-one faces used by the wrong number of simplices."""
    uses = Counter()
    for s in T.simplices:
        for v in s:
            uses[s - {v}] += 1
    return [f for f, n in uses.items() if n != (1 if _boundary_facet(f, T.k) else 2)]


def verify_unimodular(T: Triangulation) -> bool:
    """Unit simplices, the right number of them, glued like a triangulation."""
    k = T.k
    if len(T.simplices) != math.comb(k + 1, 2):
        return False
    for s in T.simplices:
        if len(s) != k + 2 or normalized_volume(s, k) != 1:
            return False
    return not facet_defects(T)


def f_vector(T: Triangulation) -> tuple[int, ...]:
    faces: set[frozenset] = set()
    for s in T.simplices:
        items = sorted(s)
        for r in range(1, len(items) + 1):
            faces.update(frozenset(c) for c in itertools.combinations(items, r))
    counts = Counter(len(f) - 1 for f in faces)
    return tuple(counts[d] for d in range(max(counts) + 1))


def stabilizer(T: Triangulation) -> list[tuple[int, ...]]:
    return [p for p in itertools.permutations(range(1, T.k + 1)) if T.permute(p) == T]


def orbit_size(t: LabeledTiling) -> int:
    T = to_triangulation(t)
    return len({T.permute(p) for p in itertools.permutations(range(1, T.k + 1))})
