"""Counting and enumerating lozenge tilings of T_k.

Bottom-row recursion: ``f(k, S)`` counts tilings whose free triangles on the
bottom row sit exactly at positions S, ``g(k, S)`` those with free triangles
at least at S.  Sets are bitmasks, bit ``i-1`` standing for position i.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .trigrid import D3, Direction, Tiling, grid, map_tiling

CACHE_ENV = "CAYLEYTRICK_CACHE_DIR"


class EnumerationBudgetExceeded(RuntimeError):
    pass


def to_mask(S: Iterable[int], k: int) -> int:
    mask = 0
    for s in S:
        if not 1 <= s <= k:
            raise ValueError(f"position {s} outside 1..{k}")
        mask |= 1 << (s - 1)
    return mask


def _zeta_superset(f: np.ndarray, k: int) -> np.ndarray:
    g = f.copy()
    for bit in range(k):
        view = g.reshape(-1, 2, 1 << bit)
        view[:, 0, :] += view[:, 1, :]
    return g


def _f_table(k: int, g_prev: np.ndarray) -> np.ndarray:
    """All f_k(S) from g_{k-1} in O(k 2^k) big-int additions.

    Position p goes from carrying a T-bit (the vertical lozenge positions fed
    to g_{k-1}) to carrying an S-bit.  State A expects a bottom triangle,
    state B (just after a triangle) expects the next vertical lozenge.
    Allowed (sigma, tau) at one position: A:(0,0)->A, (1,0)->B, (1,1)->A;
    B:(0,0)->B, (0,1)->A.  f_k(S) is the B-state mass at the end.
    """
    size = 1 << k
    A = np.zeros(size, dtype=object)
    B = np.zeros(size, dtype=object)
    A[: 1 << (k - 1)] = g_prev  # position k never holds a vertical lozenge
    for bit in range(k):
        a = A.reshape(-1, 2, 1 << bit)
        b = B.reshape(-1, 2, 1 << bit)
        a0, a1 = a[:, 0, :].copy(), a[:, 1, :].copy()
        b0, b1 = b[:, 0, :].copy(), b[:, 1, :].copy()
        # new index bit now means sigma (bottom triangle at this position)
        a[:, 0, :] = a0 + b1
        a[:, 1, :] = a1
        b[:, 0, :] = b0
        b[:, 1, :] = a0
    B[0] = 0
    return B


@lru_cache(maxsize=None)
def _tables(k: int) -> tuple[np.ndarray, np.ndarray]:
    if k < 1:
        raise ValueError("k must be >= 1")
    cached = _load_cached(k)
    if cached is not None:
        return cached
    g_prev = np.array([1], dtype=object) if k == 1 else _tables(k - 1)[1]
    f = _f_table(k, g_prev)
    g = _zeta_superset(f, k)
    _store_cached(k, f, g)
    return f, g


def _cache_path(k: int) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    return Path(root) / f"census_k{k}.json" if root else None


def _load_cached(k: int):
    path = _cache_path(k)
    if path is None or not path.exists():
        return None
    data = json.loads(path.read_text())
    f = np.array([int(v) for v in data["f"]], dtype=object)
    g = np.array([int(v) for v in data["g"]], dtype=object)
    return f, g


def _store_cached(k: int, f, g) -> None:
    path = _cache_path(k)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({"k": k, "f": [str(v) for v in f], "g": [str(v) for v in g]}))


def g(k: int, S: Iterable[int] = ()) -> int:
    return int(_tables(k)[1][to_mask(S, k)])


def f(k: int, S: Iterable[int] = ()) -> int:
    return int(_tables(k)[0][to_mask(S, k)])


def count_tilings(k: int) -> int:
    return g(k)


def count_triangulations(k: int) -> int:
    return math.factorial(k) * count_tilings(k)


# ---------------------------------------------------------------------------
# enumeration

def enumerate_tilings(k: int, budget: int | None = None) -> Iterator[Tiling]:
    """Every tiling once, lexicographic in (DOWN cell row-major, HYP < E < N).

    ``budget`` caps the number of search nodes visited.
    """
    gr = grid(k)
    n = len(gr.downs)
    choices = gr.partner_index
    dirs = [0] * n
    visited = 0

    def rec(i: int, used: int):
        nonlocal visited
        visited += 1
        if budget is not None and visited > budget:
            raise EnumerationBudgetExceeded(f"more than {budget} search nodes")
        if i == n:
            yield Tiling(k, tuple(Direction(d) for d in dirs))
            return
        for d, u in enumerate(choices[i]):
            bit = 1 << u
            if not used & bit:
                dirs[i] = d
                yield from rec(i + 1, used | bit)

    yield from rec(0, 0)


def _orbit_key(t: Tiling) -> tuple:
    return min(map_tiling(t, s).match for s in D3)


def count_symmetry_classes(k: int) -> int:
    return len({_orbit_key(t) for t in enumerate_tilings(k)})


def orbit_sizes(k: int) -> list[int]:
    sizes: dict[tuple, int] = {}
    for t in enumerate_tilings(k):
        key = _orbit_key(t)
        sizes[key] = sizes.get(key, 0) + 1
    return [sizes[key] for key in sorted(sizes)]


# ---------------------------------------------------------------------------
# entropy

@dataclass(frozen=True)
class EntropyRow:
    k: int
    count: int
    ratio: float
    lower: float | None  # only for k divisible by 3
    upper: float

    @property
    def within_bounds(self) -> bool:
        return entropy_bounds_hold(self.k, self.count)


def entropy_bounds_hold(k: int, count: int) -> bool:
    """Exact check 2^((k^2+3k)/6) < count <= 3^((k^2-k)/2), lower side for 3 | k.

    The upper bound is attained for k = 1 and k = 2 and strict from k = 3 on.
    """
    if count > 3 ** ((k * k - k) // 2):
        return False
    if k % 3 == 0:
        return count > 2 ** ((k * k + 3 * k) // 6)
    return True


def entropy_report(k_max: int) -> list[EntropyRow]:
    rows = []
    for k in range(1, k_max + 1):
        c = count_tilings(k)
        area = k * k / 2
        lower = math.log(2) * (k * k + 3 * k) / (3 * k * k) if k % 3 == 0 else None
        upper = math.log(3) * (k * k - k) / (k * k)
        rows.append(EntropyRow(k, c, math.log(c) / area, lower, upper))
    return rows


# ---------------------------------------------------------------------------
# Lobachevsky function

def lobachevsky(theta: float, tolerance: float = 1e-7) -> float:
    """L(theta) = 1/2 sum sin(2 n theta) / n^2, truncated with tail < tolerance."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    # tail: 1/2 sum_{n>N} 1/n^2 < 1/(2N)
    n_terms = int(math.ceil(1 / (2 * tolerance))) + 1
    total = 0.0
    chunk = 1 << 20
    for start in range(1, n_terms + 1, chunk):
        n = np.arange(start, min(start + chunk, n_terms + 1), dtype=np.float64)
        total += float(np.sum(np.sin(2 * n * theta) / (n * n)))
    return total / 2


def beta_constant(tolerance: float = 1e-7) -> float:
    """(3/pi) L(pi/3), the maximal lozenge-tiling entropy per unit tile."""
    # error in beta is (3/pi) times the series error; ask for half the budget
    return 3 / math.pi * lobachevsky(math.pi / 3, tolerance * math.pi / 6)
