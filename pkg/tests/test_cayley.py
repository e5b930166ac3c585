import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cayleytrick.cayley import (
    Triangulation, bareiss_det, embed, f_vector, normalized_volume, orbit_size, stabilizer,
    to_triangulation, verify_unimodular,
)
from cayleytrick.census import enumerate_tilings
from cayleytrick.trigrid import D3, LabeledTiling, Tiling, all_labelings, apply_symmetry

TILINGS = {k: list(enumerate_tilings(k)) for k in range(1, 6)}
LABELED = {k: [lt for t in TILINGS[k] for lt in all_labelings(t)] for k in range(1, 5)}


def test_k1_single_simplex():
    T = to_triangulation(LabeledTiling.default(Tiling(1, ())))
    assert T.simplices == frozenset([frozenset([("a", 1), ("b", 1), ("c", 1)])])
    assert verify_unimodular(T)
    assert f_vector(T) == (3, 3, 1)
    assert T.export() == "(a,1) (b,1) (c,1)\n"


def test_embedding():
    assert embed(("a", 1), 3) == [0, 0, 0, 0]
    assert embed(("b", 2), 3) == [1, 0, 1, 0]
    assert embed(("c", 3), 3) == [0, 1, 0, 1]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-20, 20), min_size=5, max_size=5), min_size=5, max_size=5))
def test_bareiss_against_numpy(rows):
    assert bareiss_det(rows) == round(np.linalg.det(np.array(rows, dtype=float)))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_simplex_shape(k):
    for lt in LABELED[k][:: max(1, len(LABELED[k]) // 300)]:
        T = to_triangulation(lt)
        assert len(T.simplices) == math.comb(k + 1, 2)
        for s in T.simplices:
            assert len(s) == k + 2
            assert {i for _, i in s} == set(range(1, k + 1))
        used = {v for s in T.simplices for v in s}
        assert used == {(v, i) for v in "abc" for i in range(1, k + 1)}


@pytest.mark.parametrize("k", [2, 3, 4])
def test_distinct_triangulations(k):
    found = {to_triangulation(lt) for lt in LABELED[k]}
    assert len(found) == len(LABELED[k]) == len(TILINGS[k]) * math.factorial(k)
    assert len(found) == {2: 6, 3: 108, 4: 4488}[k]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_unimodular_and_one_f_vector(k):
    vectors = set()
    for lt in LABELED[k]:
        T = to_triangulation(lt)
        assert verify_unimodular(T)
        vectors.add(f_vector(T))
    assert len(vectors) == 1
    (fv,) = vectors
    # a triangulated ball has Euler characteristic 1
    assert sum((-1) ** d * n for d, n in enumerate(fv)) == 1
    assert fv[-1] == math.comb(k + 1, 2)
    assert fv[0] == 3 * k


def test_known_f_vectors():
    assert f_vector(to_triangulation(LABELED[2][0])) == (6, 12, 10, 3)
    assert f_vector(to_triangulation(LABELED[3][0])) == (9, 27, 37, 24, 6)


def test_volumes_against_numpy():
    for lt in LABELED[3]:
        for s in to_triangulation(lt).simplices:
            pts = np.array([embed(v, 3) for v in sorted(s)], dtype=float)
            vol = abs(np.linalg.det(pts[1:] - pts[0]))
            assert normalized_volume(s, 3) == round(vol) == 1


def test_corrupted_triangulation_is_rejected():
    T = to_triangulation(LABELED[3][10])
    simplices = sorted(T.simplices, key=sorted)
    victim = simplices[0]
    corner, copy = next(v for v in sorted(victim) if (v[0] == "a"))
    swapped = (victim - {(corner, copy)}) | {("b" if corner != "b" else "c", copy)}
    bad = Triangulation(3, frozenset(simplices[1:] + [frozenset(swapped)]))
    assert not verify_unimodular(bad)
    assert not verify_unimodular(Triangulation(3, frozenset(simplices[1:])))


def test_f_vector_symmetry_invariance():
    base = f_vector(to_triangulation(LABELED[3][0]))
    for lt in LABELED[3][::7]:
        for g in D3:
            assert f_vector(to_triangulation(apply_symmetry(lt, g))) == base
        for perm in itertools.permutations((1, 2, 3)):
            assert f_vector(to_triangulation(lt).permute(perm)) == base


def test_orbit_sizes():
    assert all(orbit_size(lt) == 2 for lt in LABELED[2])
    for t in TILINGS[4]:
        assert orbit_size(LabeledTiling.default(t)) == 24


@pytest.mark.slow
def test_orbit_sizes_t5():
    for t in TILINGS[5]:
        assert orbit_size(LabeledTiling.default(t)) == 120


@pytest.mark.parametrize("k", [2, 3, 4])
def test_free_action(k):
    for lt in LABELED[k][:: max(1, len(LABELED[k]) // 500)]:
        assert stabilizer(to_triangulation(lt)) == [tuple(range(1, k + 1))]


def test_relabeling_permutes_copies():
    for t in TILINGS[3]:
        labelings = all_labelings(t)
        base = labelings[0]
        images = {to_triangulation(base).permute(p) for p in itertools.permutations((1, 2, 3))}
        assert images == {to_triangulation(lt) for lt in labelings}
