"""Coherent mixed subdivisions of kΔ² from lifting matrices, via tropical lines.

Row i of a k×3 matrix M lifts the vertices a, b, c of the i-th copy of the
unit triangle.  For a point x of tropical 2-space (three coordinates, up to
adding a constant) the type of x is S_i = argmin_j (m[i][j] + x[j]).  A point
whose summed face conv(S_1) + ... + conv(S_k) is two-dimensional is a vertex
of the arrangement of the k tropical lines, and that sum is one cell of the
coherent mixed subdivision.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .minkowski import LabeledSubdivision, MinkowskiCell, check_labeled, minkowski_sum_region
from .trigrid import grid

LETTERS = "abc"

Matrix = list[list[Fraction]]


class DegenerateMatrix(ValueError):
    pass


# ---------------------------------------------------------------------------
# lexicographically perturbed numbers

@dataclass(frozen=True, order=True)
class LexNum:
    """A real plus infinitesimal terms, compared lexicographically.

    ``parts[0]`` is the ordinary value, ``parts[p + 1]`` the coefficient of
    eps * omega**p with eps and omega infinitesimal and omega << 1.
    """

    parts: tuple[Fraction, ...]

    def __add__(self, other: LexNum) -> LexNum:
        return LexNum(tuple(a + b for a, b in zip(self.parts, other.parts)))

    def __sub__(self, other: LexNum) -> LexNum:
        return LexNum(tuple(a - b for a, b in zip(self.parts, other.parts)))

    def __neg__(self) -> LexNum:
        return LexNum(tuple(-a for a in self.parts))

    @property
    def real(self) -> Fraction:
        return self.parts[0]


def perturbed(M: Sequence[Sequence]) -> list[list[LexNum]]:
    """m[i][j] + eps * omega**(3 i + j): a generic matrix infinitely close to M."""
    k = len(M)
    size = 3 * k
    out = []
    for i, row in enumerate(M):
        new = []
        for j, v in enumerate(row):
            parts = [Fraction(v)] + [Fraction(0)] * size
            parts[1 + 3 * i + j] = Fraction(1)
            new.append(LexNum(tuple(parts)))
        out.append(new)
    return out


def _zero_like(v):
    return LexNum(tuple(Fraction(0) for _ in v.parts)) if isinstance(v, LexNum) else Fraction(0)


# ---------------------------------------------------------------------------
# types and the arrangement

def as_matrix(M: Sequence[Sequence]) -> Matrix:
    rows = [[Fraction(v) for v in row] for row in M]
    if not rows or len({len(r) for r in rows}) != 1 or not rows[0]:
        raise ValueError("lifting matrix must be a nonempty rectangle")
    return rows


def tropical_type(M: Sequence[Sequence], x: Sequence) -> tuple[frozenset[int], ...]:
    """S_i = {j : m[i][j] + x[j] is minimal}, columns numbered from 1.

    ``x`` has l coordinates, or l - 1 with the last one taken as 0.
    """
    l = len(M[0])
    x = list(x)
    if len(x) == l - 1:
        x.append(_zero_like(x[0]) if x else Fraction(0))
    if len(x) != l:
        raise ValueError(f"point needs {l - 1} or {l} coordinates")
    out = []
    for row in M:
        vals = [row[j] + x[j] for j in range(l)]
        best = min(vals)
        out.append(frozenset(j + 1 for j, v in enumerate(vals) if v == best))
    return tuple(out)


def _summands(S: tuple[frozenset[int], ...]) -> tuple[str, ...]:
    return tuple("".join(LETTERS[j - 1] for j in sorted(s)) for s in S)


def arrangement_vertices(M: Sequence[Sequence]) -> list[tuple[tuple, tuple[frozenset[int], ...]]]:
    """Vertices (x1, x2) of the line arrangement (x3 = 0) with their types.

    Copy i contributes the tie lines x1 - x2 = m_i2 - m_i1, x1 = m_i3 - m_i1
    and x2 = m_i3 - m_i2; vertices are the crossings of lines of different
    directions at which the summed face is two-dimensional.
    """
    if len(M[0]) != 3:
        raise ValueError("arrangements are built for three columns only")
    xs = {row[2] - row[0] for row in M}        # x1 = c
    ys = {row[2] - row[1] for row in M}        # x2 = d
    ds = {row[1] - row[0] for row in M}        # x1 - x2 = e
    candidates = set()
    for c in xs:
        for d in ys:
            candidates.add((c, d))
        for e in ds:
            candidates.add((c, c - e))
    for d in ys:
        for e in ds:
            candidates.add((d + e, d))
    out = []
    for p in sorted(candidates):
        S = tropical_type(M, p)
        if minkowski_sum_region(_summands(S)):
            out.append((p, S))
    return out


def coherent_subdivision(M: Sequence[Sequence], perturb: bool = False) -> LabeledSubdivision:
    """The mixed subdivision of kΔ² whose copy i is lifted by row i of M.

    With ``perturb`` the matrix is replaced by its lexicographic perturbation,
    which yields a fine refinement of the same subdivision.
    """
    rows = as_matrix(M)
    if len(rows[0]) != 3:
        raise ValueError("coherent_subdivision needs a k x 3 matrix")
    k = len(rows)
    work = perturbed(rows) if perturb else rows
    cells = []
    for _, S in arrangement_vertices(work):
        summ = _summands(S)
        cells.append(MinkowskiCell(summ, minkowski_sum_region(summ)))
    cells.sort(key=lambda c: min(t.sort_key() for t in c.support))
    area = sum(len(c.support) for c in cells)
    if area != k * k:
        raise DegenerateMatrix(f"cells cover {area} unit triangles instead of {k * k}")
    ls = LabeledSubdivision(k, tuple(cells))
    if not check_labeled(ls):
        raise DegenerateMatrix("cells do not form a mixed subdivision")
    return ls


def is_generic(M: Sequence[Sequence]) -> bool:
    try:
        ls = coherent_subdivision(M)
    except DegenerateMatrix:
        return False
    return ls.is_fine() and len(ls.cells) == math.comb(len(M) + 1, 2)


def cayley_heights(M: Sequence[Sequence]) -> list[Fraction]:
    """Heights of the Cayley vertices (a,1), (b,1), (c,1), (a,2), ... read off M."""
    return [Fraction(v) for row in as_matrix(M) for v in row]


def random_matrix(k: int, seed: int, spread: int = 10**6) -> Matrix:
    rng = random.Random(seed)
    return [[Fraction(rng.randint(-spread, spread), rng.randint(1, 97)) for _ in range(3)]
            for _ in range(k)]


def lift_value(M: Sequence[Sequence], x: Sequence, point: tuple) -> Fraction:
    """Height at ``point`` of the supporting plane dual to the arrangement point x.

    With w = (x_b - x_a, x_c - x_a) this is sum_i min_j (m_ij + <w, v_j>) - <w, point>,
    the value of the lower envelope on the cell of x.
    """
    xa, xb, xc = (list(x) + [Fraction(0)])[:3]
    w = (xb - xa, xc - xa)
    total = Fraction(0)
    for row in M:
        total += min(Fraction(row[0]), Fraction(row[1]) + w[0], Fraction(row[2]) + w[1])
    return total - w[0] * point[0] - w[1] * point[1]


# ---------------------------------------------------------------------------
# counting bound

def count_regular_bound(k: int, l: int) -> int:
    """ceil(((e/2) k l) ** (l (l-1) (k-1))), evaluated with enough digits to round up safely."""
    if k < 2 or l < 2:
        raise ValueError("k and l must be at least 2")
    exponent = l * (l - 1) * (k - 1)
    digits = int(exponent * math.log10(math.e / 2 * k * l)) + 30
    with mpmath.workdps(digits):
        value = mpmath.power(mpmath.e / 2 * k * l, exponent)
        return int(mpmath.ceil(value))


# ---------------------------------------------------------------------------
# input

def parse_matrix(text: str) -> Matrix:
    """A matrix from JSON (list of rows) or CSV; entries are integers or "num/den"."""
    text = text.strip()
    if not text:
        raise ValueError("empty matrix input")
    if text[0] in "[{":
        doc = json.loads(text)
        if isinstance(doc, dict):
            doc = doc.get("matrix")
        if not isinstance(doc, list) or not all(isinstance(r, list) for r in doc):
            raise ValueError("JSON matrix must be a list of rows")
        rows = [[Fraction(str(v)) for v in r] for r in doc]
    else:
        rows = [[Fraction(v.strip()) for v in r] for r in csv.reader(io.StringIO(text)) if r]
    return as_matrix(rows)


def matrix_document(M: Sequence[Sequence]) -> list[list[str]]:
    return [[f"{Fraction(v).numerator}/{Fraction(v).denominator}" for v in row] for row in M]
