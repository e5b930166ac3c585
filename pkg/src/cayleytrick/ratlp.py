"""Exact feasibility of strict homogeneous inequalities, and regularity tests.

``M h > 0`` has a solution iff ``M h >= 1`` does (scale any solution).  By
Gordan's alternative exactly one of the following holds: some h has
``M h > 0``, or some nonzero ``y >= 0`` has ``y M = 0``.  Both outcomes carry
a certificate that is checked with exact arithmetic before it is returned.

A floating-point LP is used only to guess a height vector; the guess is
rounded to integers and accepted only if it passes the exact check.  When
it does not, an exact phase-one simplex over Fractions with Bland's rule
decides the system.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .cayley import Triangulation, embed, to_triangulation
from .minkowski import Subdivision, bounding_hexagon
from .trigrid import LabeledTiling, Tiling, grid

REGULAR = "REGULAR"
NON_REGULAR = "NON_REGULAR"

Number = int | Fraction


class NonHomogeneous(ValueError):
    pass


@dataclass(frozen=True)
class RegularityCertificate:
    verdict: str
    witness: tuple[Number, ...]  # heights if REGULAR, row multipliers otherwise
    variables: tuple = field(default=(), compare=False)
    method: str = field(default="exact", compare=False)

    @property
    def regular(self) -> bool:
        return self.verdict == REGULAR

    def verify(self, M: Sequence[Sequence[Number]]) -> bool:
        return verify_certificate(M, self)

    def to_json(self) -> str:
        return json.dumps({
            "verdict": self.verdict,
            "witness": [f"{Fraction(v).numerator}/{Fraction(v).denominator}" for v in self.witness],
            "variables": [str(v) for v in self.variables],
            "method": self.method,
        })

    @classmethod
    def from_json(cls, text: str) -> RegularityCertificate:
        doc = json.loads(text)
        return cls(doc["verdict"], tuple(Fraction(w) for w in doc["witness"]),
                   tuple(doc.get("variables", ())), doc.get("method", "exact"))


def verify_certificate(M: Sequence[Sequence[Number]], cert: RegularityCertificate) -> bool:
    n = len(M[0]) if M else len(cert.witness)
    if cert.verdict == REGULAR:
        h = cert.witness
        return len(h) == n and all(sum(a * b for a, b in zip(row, h)) > 0 for row in M)
    y = cert.witness
    if len(y) != len(M) or any(v < 0 for v in y) or sum(y) <= 0:
        return False
    used = [i for i in range(len(M)) if y[i]]
    return all(sum(y[i] * M[i][j] for i in used) == 0 for j in range(n))


# ---------------------------------------------------------------------------
# exact phase-one simplex

def _phase_one(A: list[list[Fraction]], b: list[Fraction]):
    """min sum(art) s.t. A x + art = b, x, art >= 0 (b >= 0), Bland's rule.

    Returns (x, u, value) with u the optimal dual vector: A^T u <= 0 and
    b.u = value.
    """
    m, n = len(A), len(A[0])
    # tableau columns: x_0..x_{n-1}, art_0..art_{m-1}, rhs
    T = [list(A[i]) + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    cost = [Fraction(0)] * n + [Fraction(1)] * m
    while True:
        # reduced costs c_j - c_B B^-1 A_j
        cb = [cost[j] for j in basis]
        entering = None
        for j in range(n + m):
            if j in basis:
                continue
            r = cost[j] - sum(cb[i] * T[i][j] for i in range(m) if T[i][j])
            if r < 0:
                entering = j
                break
        if entering is None:
            break
        best, leave = None, None
        for i in range(m):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen: the phase-one objective is bounded below
            raise RuntimeError("unbounded phase-one problem")
        piv = T[leave][entering]
        T[leave] = [v / piv for v in T[leave]]
        for i in range(m):
            if i != leave and T[i][entering]:
                f = T[i][entering]
                row = T[leave]
                T[i] = [v - f * w for v, w in zip(T[i], row)]
        basis[leave] = entering
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][-1]
    cb = [cost[j] for j in basis]
    # B^-1 sits in the artificial columns
    u = [sum(cb[i] * T[i][n + r] for i in range(m)) for r in range(m)]
    value = sum(cb[i] * T[i][-1] for i in range(m))
    return x, u, value


def _exact(M: list[list[Fraction]]) -> RegularityCertificate:
    rows, n = len(M), len(M[0])
    # y M = 0, sum y = 1, y >= 0
    A = [[M[i][j] for i in range(rows)] for j in range(n)] + [[Fraction(1)] * rows]
    b = [Fraction(0)] * n + [Fraction(1)]
    y, u, value = _phase_one(A, b)
    if value == 0:
        return RegularityCertificate(NON_REGULAR, _integral(y), method="exact")
    # dual: M u_h + u_0 <= 0 with u_0 = value > 0, so h = -u_h gives M h >= value
    h = [-v for v in u[:n]]
    return RegularityCertificate(REGULAR, _integral(h), method="exact")


def _integral(h: Sequence[Number]) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to coprime integers."""
    den = math.lcm(*(Fraction(v).denominator for v in h)) if h else 1
    nums = [int(Fraction(v) * den) for v in h]
    g = math.gcd(*nums) if any(nums) else 1
    return tuple(v // g for v in nums)


def _float_guess(M: list[list[Number]]) -> tuple[int, ...] | None:
    A = np.array([[float(v) for v in row] for row in M])
    n = A.shape[1]
    res = linprog(np.zeros(n), A_ub=-A, b_ub=-np.ones(len(M)), bounds=[(None, None)] * n,
                  method="highs")
    if res.status != 0:
        return None
    x = res.x
    for scale in (1, 10, 100, 1000, 10**4, 10**6, 10**9):
        h = [round(v * scale) for v in x]
        if all(sum(a * b for a, b in zip(row, h)) > 0 for row in M):
            return _integral(h)
    return None


def strict_feasible(M: Sequence[Sequence[Number]], rhs: Sequence[Number] | None = None,
                    exact_only: bool = False) -> RegularityCertificate:
    """Decide ``M h > 0``; the returned certificate is always verified."""
    if rhs is not None and any(v != 0 for v in rhs):
        raise NonHomogeneous("strict_feasible expects a homogeneous system M h > 0")
    M = [list(row) for row in M]
    if not M:
        raise ValueError("empty system: the number of variables is undetermined")
    widths = {len(row) for row in M}
    if len(widths) != 1 or 0 in widths:
        raise ValueError("rows must be nonempty and of equal length")
    cert = None
    if not exact_only:
        h = _float_guess(M)
        if h is not None:
            cert = RegularityCertificate(REGULAR, h, method="rounded")
    if cert is None:
        cert = _exact([[Fraction(v) for v in row] for row in M])
    if not verify_certificate(M, cert):
        raise RuntimeError("certificate failed exact verification")
    return cert


def _trivial(n: int, variables=()) -> RegularityCertificate:
    return RegularityCertificate(REGULAR, (0,) * n, tuple(variables), "trivial")


# ---------------------------------------------------------------------------
# exact linear algebra helpers

def solve_exact(A: list[list[Number]], b: list[Number]) -> list[Fraction]:
    """Solve the square system A x = b exactly; raises on singular A."""
    n = len(A)
    T = [[Fraction(v) for v in A[i]] + [Fraction(b[i])] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if T[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular system")
        T[c], T[p] = T[p], T[c]
        piv = T[c][c]
        T[c] = [v / piv for v in T[c]]
        for r in range(n):
            if r != c and T[r][c]:
                f = T[r][c]
                T[r] = [v - f * w for v, w in zip(T[r], T[c])]
    return [T[i][n] for i in range(n)]


def nullspace(E: list[list[Number]], n: int) -> list[list[Fraction]]:
    """Basis (as columns, returned row-wise per variable) of {h : E h = 0}."""
    R = [[Fraction(v) for v in row] for row in E]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        piv = R[r][c]
        R[r] = [v / piv for v in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [v - f * w for v, w in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -R[i][fc]
        basis.append(vec)
    return basis  # list of vectors of length n


# ---------------------------------------------------------------------------
# regularity of triangulations of the product

_simplex_rows: dict[tuple, list[tuple[int, ...]]] = {}


def _rows_for_simplex(simplex: frozenset, k: int) -> list[tuple[int, ...]]:
    key = (k, simplex)
    cached = _simplex_rows.get(key)
    if cached is not None:
        return cached
    verts = sorted(simplex)
    allv = [(v, i) for i in range(1, k + 1) for v in "abc"]
    col = {p: j for j, p in enumerate(allv)}
    # columns [point; 1] of the vertices
    A = [[embed(v, k)[r] for v in verts] for r in range(k + 1)] + [[1] * len(verts)]
    rows = []
    for p in allv:
        if p in simplex:
            continue
        lam = solve_exact(A, embed(p, k) + [1])
        row = [0] * (3 * k)
        row[col[p]] = 1
        for v, coef in zip(verts, lam):
            if coef.denominator != 1:
                raise ValueError("simplex is not unimodular")
            row[col[v]] -= int(coef)
        rows.append(tuple(row))
    _simplex_rows[key] = rows
    return rows


def triangulation_system(T: Triangulation) -> tuple[list[tuple[int, ...]], list]:
    """Rows of "p lifts strictly above the hyperplane of sigma", heights on all 3k vertices."""
    variables = [(v, i) for i in range(1, T.k + 1) for v in "abc"]
    rows = []
    for s in sorted(T.simplices, key=lambda s: sorted(s)):
        rows.extend(_rows_for_simplex(s, T.k))
    return rows, variables


def check_regular_triangulation(T: Triangulation | LabeledTiling, exact_only: bool = False
                                ) -> RegularityCertificate:
    if isinstance(T, LabeledTiling):
        T = to_triangulation(T)
    rows, variables = triangulation_system(T)
    if not rows:
        return _trivial(len(variables), variables)
    cert = strict_feasible(rows, exact_only=exact_only)
    return RegularityCertificate(cert.verdict, cert.witness, tuple(variables), cert.method)


# ---------------------------------------------------------------------------
# regularity of planar subdivisions of T_k

def _affine_row(target, base, index, n):
    """Row of h(target) - (affine interpolation of h from the 3 base points at target)."""
    A = [[p[0] for p in base], [p[1] for p in base], [1, 1, 1]]
    lam = solve_exact(A, [target[0], target[1], 1])
    row = [Fraction(0)] * n
    row[index[target]] += 1
    for p, c in zip(base, lam):
        row[index[p]] -= c
    return row


def _off_line(points, a, b):
    for p in points:
        if (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) != 0:
            return p
    return None


def planar_system(s: Subdivision):
    """Equalities (cell vertices coplanar) and strict fold inequalities at walls."""
    points = grid(s.k).points
    index = {p: i for i, p in enumerate(points)}
    n = len(points)
    verts = [bounding_hexagon(c).vertices() for c in s.cells]
    eqs, ineqs = [], []
    for vs in verts:
        base = vs[:3]
        for q in vs[3:]:
            eqs.append(_affine_row(q, base, index, n))
    owner = {}
    for ci, c in enumerate(s.cells):
        for t in c:
            owner[t] = ci
    walls = set()
    for e, tris in grid(s.k).edge_tris.items():
        if len(tris) == 2:
            a, b = owner[tris[0]], owner[tris[1]]
            if a != b:
                walls.add((min(a, b), max(a, b), e))
    for a, b, (p, q) in sorted(walls):
        off_a = _off_line(verts[a], p, q)
        off_b = _off_line(verts[b], p, q)
        ineqs.append(_affine_row(off_b, [p, q, off_a], index, n))
    return eqs, ineqs, points


def check_regular_planar(s: Subdivision | Tiling, exact_only: bool = False) -> RegularityCertificate:
    """Regularity of the cells as a plain polyhedral subdivision of T_k.

    Heights live on lattice points; vertices of each cell stay coplanar and
    every interior wall folds strictly upward.  A NON_REGULAR verdict here
    forces the same verdict for any mixed labelling of the same cells.
    """
    if isinstance(s, LabeledTiling):
        s = s.tiling
    if isinstance(s, Tiling):
        s = Subdivision.from_tiling(s)
    eqs, ineqs, points = planar_system(s)
    n = len(points)
    if not ineqs:
        return _trivial(n, points)
    basis = nullspace(eqs, n) if eqs else [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    reduced = [[sum(r[i] * v[i] for i in range(n)) for v in basis] for r in ineqs]
    cert = strict_feasible(reduced, exact_only=exact_only)
    if cert.verdict == NON_REGULAR:
        return RegularityCertificate(NON_REGULAR, cert.witness, tuple(points), cert.method)
    h = [sum(z * v[i] for z, v in zip(cert.witness, basis)) for i in range(n)]
    h = _integral(h)
    if any(sum(a * b for a, b in zip(r, h)) != 0 for r in eqs) or \
            any(sum(a * b for a, b in zip(r, h)) <= 0 for r in ineqs):
        raise RuntimeError("lifted heights failed exact verification")
    return RegularityCertificate(REGULAR, h, tuple(points), cert.method)
