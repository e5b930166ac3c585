import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from cayleytrick.census import (
    EnumerationBudgetExceeded, beta_constant, count_symmetry_classes, count_tilings,
    count_triangulations, entropy_bounds_hold, entropy_report, enumerate_tilings, f, g,
    lobachevsky, orbit_sizes,
)
from cayleytrick.trigrid import free_triangles

TABLE_COUNTS = {
    1: 1, 2: 3, 3: 18, 4: 187, 5: 3135, 6: 81462, 7: 3198404, 8: 186498819,
    16: 13813411778618644581617635925,
}


@pytest.mark.parametrize("k, value", sorted(TABLE_COUNTS.items()))
def test_table_counts(k, value):
    assert count_tilings(k) == value


def test_small_recursion_values():
    assert g(1) == 1
    assert g(3) == 18
    assert g(3, {1}) == 10
    assert g(3, {1, 2}) == 3
    assert f(3, {1, 3}) == 4
    assert f(4, {1, 4}) == 28


@pytest.mark.parametrize("k", range(1, 9))
def test_empty_bottom_set_has_no_tilings(k):
    assert f(k, ()) == 0


def test_domain_errors():
    for bad in (lambda: g(0), lambda: f(0), lambda: g(3, {4}), lambda: f(2, {0})):
        with pytest.raises(ValueError):
            bad()


def test_triangulation_counts():
    assert count_triangulations(1) == 1
    assert count_triangulations(3) == 108
    assert count_triangulations(4) == 4488
    for k in range(1, 10):
        assert count_triangulations(k) % math.factorial(k) == 0


def test_counts_increase():
    values = [count_tilings(k) for k in range(1, 17)]
    assert all(a < b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("k", range(1, 6))
def test_superset_sum_relation(k):
    for bits in itertools.product((0, 1), repeat=k):
        S = {i + 1 for i in range(k) if bits[i]}
        rest = [i for i in range(1, k + 1) if i not in S]
        total = sum(f(k, S | set(extra))
                    for r in range(len(rest) + 1) for extra in itertools.combinations(rest, r))
        assert g(k, S) == total


def _bottom_set(t):
    return frozenset(u.x + 1 for u in free_triangles(t) if u.y == 0)


@pytest.mark.parametrize("k", range(1, 6))
def test_recursion_against_enumeration(k):
    seen = {}
    for t in enumerate_tilings(k):
        S = _bottom_set(t)
        seen[S] = seen.get(S, 0) + 1
    for r in range(k + 1):
        for S in itertools.combinations(range(1, k + 1), r):
            assert f(k, S) == seen.get(frozenset(S), 0)


@pytest.mark.parametrize("k", range(1, 7))
def test_enumeration_length(k):
    assert sum(1 for _ in enumerate_tilings(k)) == count_tilings(k)


@pytest.mark.slow
def test_enumeration_length_k7():
    assert sum(1 for _ in enumerate_tilings(7)) == count_tilings(7)


def test_enumeration_is_unique_and_ordered():
    tilings = list(enumerate_tilings(4))
    assert len(set(tilings)) == len(tilings)
    assert [t.match for t in tilings] == sorted(t.match for t in tilings)


def test_enumeration_budget():
    with pytest.raises(EnumerationBudgetExceeded):
        list(enumerate_tilings(4, budget=50))
    assert len(list(enumerate_tilings(3, budget=10**4))) == 18


def test_symmetry_classes():
    assert count_symmetry_classes(1) == 1
    assert count_symmetry_classes(3) == 5
    assert count_symmetry_classes(4) == 35
    assert sorted(orbit_sizes(3)) == [1, 2, 3, 6, 6]
    assert sum(orbit_sizes(4)) == 187
    assert all(6 % s == 0 for s in orbit_sizes(4))


def test_entropy_report():
    rows = entropy_report(16)
    assert len(rows) == 16
    assert rows[7].ratio == pytest.approx(math.log(186498819) / 32)
    assert rows[7].ratio == pytest.approx(0.595, abs=5e-4)
    assert rows[15].ratio == pytest.approx(0.506, abs=5e-4)
    for r in rows:
        assert r.ratio < math.log(3)
        assert r.within_bounds
        if r.k >= 3:
            assert r.ratio < r.upper
        else:
            assert r.count == 3 ** ((r.k * r.k - r.k) // 2)
        if r.lower is not None:
            assert r.k % 3 == 0 and r.ratio > r.lower


def test_entropy_bounds_exact_check():
    assert entropy_bounds_hold(2, 3)
    assert not entropy_bounds_hold(2, 4)
    assert not entropy_bounds_hold(3, 3 ** 3 + 1)
    assert not entropy_bounds_hold(3, 2 ** 3)
    assert entropy_bounds_hold(3, 18)


def _quadrature_lobachevsky(x):
    value, _ = quad(lambda t: -math.log(abs(2 * math.sin(t))), 0, x, limit=200)
    return value


def test_lobachevsky_against_quadrature():
    assert lobachevsky(0.0) == 0.0
    assert lobachevsky(math.pi / 3) == pytest.approx(0.33832186, abs=1e-5)
    assert lobachevsky(math.pi / 3) == pytest.approx(0.32306594 * math.pi / 3, abs=1e-7)
    assert lobachevsky(math.pi / 3) == pytest.approx(_quadrature_lobachevsky(math.pi / 3), abs=1e-7)


@settings(max_examples=15, deadline=None)
@given(st.floats(min_value=0.05, max_value=1.5))
def test_lobachevsky_property(x):
    assert lobachevsky(x, 1e-6) == pytest.approx(_quadrature_lobachevsky(x), abs=1e-6)


def test_beta_constant():
    beta = beta_constant(1e-7)
    assert abs(beta - 0.32306594) < 1e-7
    assert abs(beta - 0.32309594) > 1e-5
    assert beta == pytest.approx(3 / math.pi * _quadrature_lobachevsky(math.pi / 3), abs=1e-7)
    with pytest.raises(ValueError):
        beta_constant(0)


def test_cache_directory(tmp_path, monkeypatch):
    import cayleytrick.census as census

    monkeypatch.setenv("CAYLEYTRICK_CACHE_DIR", str(tmp_path))
    assert census.count_tilings(9) == census.g(9)
    assert census.count_tilings(9) > census.count_tilings(8)
