import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cayleytrick.cayley import to_triangulation
from cayleytrick.census import enumerate_tilings
from cayleytrick.minkowski import Subdivision
from cayleytrick.ratlp import (
    NON_REGULAR, REGULAR, NonHomogeneous, RegularityCertificate, check_regular_planar,
    check_regular_triangulation, nullspace, solve_exact, strict_feasible, triangulation_system,
    verify_certificate,
)
from cayleytrick.trigrid import (
    D3, Direction, LabeledTiling, Tiling, all_labelings, free_triangles, map_tiling,
)

TILINGS = {k: list(enumerate_tilings(k)) for k in range(1, 5)}

# a tiling of T_6 whose triangulation is not regular (found by exhaustive search)
NON_REGULAR_KEY = "HHHNHEENENHENHE"

# every tiling of T_6 with a non-regular triangulation (exhaustive sweep of all 81462)
NON_REGULAR_T6 = [
    "HHHNHEENENHENHE",
    "HHHNHEENENHENHN",
    "HHHNHENHENEENHE",
    "HHHNHENHENEENHN",
    "HHHNEEENENHENHE",
    "HHHNEEENENHENHN",
    "HHHNEENHENEENHE",
    "HHHNEENHENEENHN",
    "HNEEEHENHHHNENH",
    "HNEEEHENHHHNENN",
    "HNEEEHNHHHENENH",
    "HNEEEHNHHHENENN",
    "HNEENHENHHHNENH",
    "HNEENHENHHHNENN",
    "HNEENHNHHHENENH",
    "HNEENHNHHHENENN",
    "ENEEEHENHHHNENH",
    "ENEEEHENHHHNENN",
    "ENEEEHNHHHENENH",
    "ENEEEHNHHHENENN",
    "ENEENHENHHHNENH",
    "ENEENHENHHHNENN",
    "ENEENHNHHHENENH",
    "ENEENHNHHHENENN",
    "NHHNHEENENHENHE",
    "NHHNHEENENHENHN",
    "NHHNHENHENEENHE",
    "NHHNHENHENEENHN",
    "NHHNEEENENHENHE",
    "NHHNEEENENHENHN",
    "NHHNEENHENEENHE",
    "NHHNEENHENEENHN",
]


def _from_key(k, key):
    names = {"H": Direction.HYP, "E": Direction.E, "N": Direction.N}
    return Tiling(k, tuple(names[ch] for ch in key))


# ---------------------------------------------------------------------------
# the solver

def test_identity_system():
    for exact in (False, True):
        cert = strict_feasible([[1, 0, 0], [0, 1, 0], [0, 0, 1]], exact_only=exact)
        assert cert.verdict == REGULAR and cert.witness == (1, 1, 1)


def test_opposite_rows():
    for exact in (False, True):
        cert = strict_feasible([[1], [-1]], exact_only=exact)
        assert cert.verdict == NON_REGULAR and cert.witness == (1, 1)


def test_contract_errors():
    with pytest.raises(NonHomogeneous):
        strict_feasible([[1, 0]], rhs=[1])
    with pytest.raises(ValueError):
        strict_feasible([])
    with pytest.raises(ValueError):
        strict_feasible([[1, 0], [1]])


def _det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _full_rank(M):
    return any(_det3(*c) != 0 for c in itertools.combinations(M, 3))


def _vertex_oracle(M):
    """Mh >= 1 is nonempty iff it has a vertex (valid when M has column rank 3)."""
    for rows in itertools.combinations(M, 3):
        d = _det3(*rows)
        if d == 0:
            continue
        # Cramer's rule for rows . h = (1, 1, 1), kept as integers h = N / d
        N = [_det3(*[[1 if j == c else r[j] for j in range(3)] for r in rows]) for c in range(3)]
        if d > 0:
            ok = all(sum(a * b for a, b in zip(row, N)) >= d for row in M)
        else:
            ok = all(sum(a * b for a, b in zip(row, N)) <= d for row in M)
        if ok:
            return True
    return False


def _random_system(rng, rows, cols, feasible_bias):
    hidden = [rng.randint(-5, 5) for _ in range(cols)]
    M = []
    for _ in range(rows):
        row = [rng.randint(-9, 9) for _ in range(cols)]
        if rng.random() < feasible_bias and sum(a * b for a, b in zip(row, hidden)) < 0:
            row = [-a for a in row]
        M.append(row)
    return M


def _biased(rng, M, feasible_bias):
    hidden = [rng.randint(-5, 5) for _ in M[0]]
    out = []
    for row in M:
        if rng.random() < feasible_bias and sum(a * b for a, b in zip(row, hidden)) < 0:
            row = [-a for a in row]
        out.append(row)
    return out


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0.0, 0.97, 1.0]))
def test_random_systems_against_vertex_enumeration(seed, bias):
    rng = random.Random(seed)
    M = _random_system(rng, 50, 12, bias)
    full = strict_feasible(M)
    assert verify_certificate(M, full)
    assert strict_feasible(M, exact_only=True).verdict == full.verdict
    # shrink to three variables with a random projection and compare with the oracle
    P = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(12)]
    small = _biased(rng, [[sum(row[i] * P[i][j] for i in range(12)) for j in range(3)] for row in M], bias)
    if not _full_rank(small):
        return
    for exact in (False, True):
        cert = strict_feasible(small, exact_only=exact)
        assert verify_certificate(small, cert)
        assert (cert.verdict == REGULAR) == _vertex_oracle(small)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=8),
       st.integers(1, 50))
def test_scaling_keeps_witnesses(M, scale):
    cert = strict_feasible(M, exact_only=True)
    assert verify_certificate(M, cert)
    scaled = RegularityCertificate(cert.verdict, tuple(scale * v for v in cert.witness))
    assert verify_certificate(M, scaled)
    if _full_rank(M):
        assert (cert.verdict == REGULAR) == _vertex_oracle(M)


def test_certificate_json():
    cert = RegularityCertificate(REGULAR, (Fraction(1, 3), Fraction(-2), 0), ("x", "y", "z"))
    doc = cert.to_json()
    assert '"1/3"' in doc and '"-2/1"' in doc
    assert RegularityCertificate.from_json(doc) == cert


def test_bad_certificates_do_not_verify():
    M = [[1, 0], [0, 1]]
    assert not verify_certificate(M, RegularityCertificate(REGULAR, (1, 0)))
    assert not verify_certificate(M, RegularityCertificate(NON_REGULAR, (1, 1)))
    assert not verify_certificate([[1], [-1]], RegularityCertificate(NON_REGULAR, (1, -1)))


def test_linear_algebra_helpers():
    assert solve_exact([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    basis = nullspace([[1, 1, 1]], 3)
    assert len(basis) == 2
    assert all(sum(v) == 0 for v in basis)


# ---------------------------------------------------------------------------
# regularity of triangulations

def test_k1_is_regular():
    cert = check_regular_triangulation(LabeledTiling.default(Tiling(1, ())))
    assert cert.verdict == REGULAR


@pytest.mark.parametrize("k", [2, 3, 4])
def test_small_triangulations_are_regular(k):
    for t in TILINGS[k]:
        labelings = all_labelings(t) if k <= 3 else all_labelings(t)[::5]
        verdicts = set()
        for lt in labelings:
            cert = check_regular_triangulation(lt)
            rows, _ = triangulation_system(to_triangulation(lt))
            assert verify_certificate(rows, cert)
            verdicts.add(cert.verdict)
        assert verdicts == {REGULAR}


def test_exact_path_agrees_on_t3():
    for t in TILINGS[3]:
        lt = LabeledTiling.default(t)
        assert check_regular_triangulation(lt, exact_only=True).verdict == REGULAR
        assert check_regular_planar(t, exact_only=True).verdict == REGULAR


def test_heights_are_consistent_with_triangulation_rows():
    lt = LabeledTiling.default(TILINGS[4][100])
    cert = check_regular_triangulation(lt)
    rows, variables = triangulation_system(to_triangulation(lt))
    assert cert.variables == tuple(variables)
    assert len(variables) == 12
    assert all(sum(a * b for a, b in zip(r, cert.witness)) > 0 for r in rows)


def test_non_regular_tiling_of_t6():
    t = _from_key(6, NON_REGULAR_KEY)
    lt = LabeledTiling.default(t)
    cert = check_regular_triangulation(lt)
    assert cert.verdict == NON_REGULAR
    rows, _ = triangulation_system(to_triangulation(lt))
    assert verify_certificate(rows, cert)
    assert check_regular_triangulation(lt, exact_only=True).verdict == NON_REGULAR
    planar = check_regular_planar(t)
    assert planar.verdict == NON_REGULAR
    restored = RegularityCertificate.from_json(cert.to_json())
    assert verify_certificate(rows, restored)


def test_non_regularity_is_label_invariant():
    t = _from_key(6, NON_REGULAR_KEY)
    free = free_triangles(t)
    rng = random.Random(6)
    for _ in range(5):
        order = free[:]
        rng.shuffle(order)
        assert check_regular_triangulation(LabeledTiling(t, tuple(order))).verdict == NON_REGULAR


# ---------------------------------------------------------------------------
# planar regularity

def test_planar_small_cases():
    for t in TILINGS[2]:
        assert check_regular_planar(t).verdict == REGULAR
    for k in range(1, 5):
        cert = check_regular_planar(Subdivision.trivial(k))
        assert cert.verdict == REGULAR


@pytest.mark.parametrize("k", [3, 4])
def test_planar_non_regular_implies_cayley_non_regular(k):
    for t in TILINGS[k]:
        planar = check_regular_planar(t)
        if planar.verdict == NON_REGULAR:
            assert check_regular_triangulation(LabeledTiling.default(t)).verdict == NON_REGULAR
        assert planar.verdict == REGULAR


def test_non_regular_tilings_of_t6_are_symmetric_and_planar_non_regular():
    tilings = {_from_key(6, key) for key in NON_REGULAR_T6}
    assert len(tilings) == 32
    assert all(map_tiling(t, g) in tilings for t in tilings for g in D3)
    for t in tilings:
        assert check_regular_triangulation(LabeledTiling.default(t)).verdict == NON_REGULAR
        assert check_regular_planar(t).verdict == NON_REGULAR


@pytest.mark.slow
def test_non_regular_sweep_of_t6():
    found = [t.key() for t in enumerate_tilings(6)
             if check_regular_triangulation(LabeledTiling.default(t)).verdict == NON_REGULAR]
    assert found == NON_REGULAR_T6
