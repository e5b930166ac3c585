import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from cayleytrick.census import enumerate_tilings
from cayleytrick.trigrid import (
    D3, IDENTITY, Direction, LabeledTiling, LabelPermutation, MalformedInput, ParseError,
    Tiling, all_labelings, apply_symmetry, canonical_tiling, down, free_triangles, grid,
    parse, serialize, up, validate_tiling,
)

TILINGS = {k: list(enumerate_tilings(k)) for k in range(1, 5)}


def test_k1_empty_match_is_valid():
    t = Tiling(1, ())
    assert validate_tiling(t).ok
    assert free_triangles(t) == [up(0, 0)]


def test_k2_single_hyp_lozenge():
    t = Tiling.from_lozenges(2, [(down(0, 0), Direction.HYP)])
    assert validate_tiling(t).ok
    assert set(free_triangles(t)) == {up(1, 0), up(0, 1)}


def test_k2_north_lozenge_frees_bottom_row():
    t = Tiling.from_lozenges(2, [(down(0, 0), Direction.N)])
    assert free_triangles(t) == [up(0, 0), up(1, 0)]


def test_down_cell_assigned_twice_is_malformed():
    with pytest.raises(MalformedInput):
        Tiling.from_lozenges(2, [(down(0, 0), Direction.N), (down(0, 0), Direction.E)])


def test_out_of_range_down_cell_is_malformed():
    with pytest.raises(MalformedInput):
        Tiling.from_lozenges(2, [(down(1, 0), Direction.N)])


def test_reused_up_cell_is_reported():
    # DOWN(0,0) via E and DOWN(1,0) via HYP both want UP(1,0)
    t = Tiling(3, (Direction.E, Direction.HYP, Direction.N))
    report = validate_tiling(t)
    assert not report.ok
    assert report.duplicate == up(1, 0)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_free_and_lozenge_counts(k):
    for t in TILINGS[k]:
        assert validate_tiling(t).ok
        assert len(free_triangles(t)) == k
        assert len(t.lozenges()) == k * (k - 1) // 2


def test_k5_tilings_have_five_free_triangles():
    for t in itertools.islice(enumerate_tilings(5), 200):
        assert len(free_triangles(t)) == 5


def test_canonical_tilings():
    assert canonical_tiling(1, "BOTTOM") == Tiling(1, ())
    b2 = canonical_tiling(2, "BOTTOM")
    assert free_triangles(b2) == [up(0, 0), up(1, 0)]
    assert b2.lozenges() == [(down(0, 0), up(0, 1))]
    b3 = canonical_tiling(3, "BOTTOM")
    assert free_triangles(b3) == [up(0, 0), up(1, 0), up(2, 0)]
    assert [t for t in TILINGS[3] if all(u.y == 0 for u in free_triangles(t))] == [b3]
    s3 = canonical_tiling(3, "SIDE")
    assert validate_tiling(s3).ok
    assert {u.x for u in free_triangles(s3)} == {0}


def test_identity_and_label_swap_involution():
    lt = LabeledTiling.default(TILINGS[2][0])
    assert apply_symmetry(lt, IDENTITY) == lt
    swap = LabelPermutation((2, 1))
    once = apply_symmetry(lt, swap)
    assert once != lt
    assert apply_symmetry(once, swap) == lt
    assert once.tiling == lt.tiling


def test_d3_orbit_sizes_at_k3():
    seen, sizes = set(), []
    for t in TILINGS[3]:
        if t in seen:
            continue
        orbit = {apply_symmetry(t, g) for g in D3}
        seen |= orbit
        sizes.append(len(orbit))
    assert sorted(sizes) == [1, 2, 3, 6, 6]


@pytest.mark.parametrize("k", [2, 3, 4])
def test_d3_is_a_group_action(k):
    for t in TILINGS[k][:40]:
        for g, h in itertools.product(D3, repeat=2):
            assert apply_symmetry(t, g.compose(h)) == apply_symmetry(apply_symmetry(t, h), g)


def test_grid_symmetries_map_labeled_tilings_to_valid_ones():
    for t in TILINGS[3]:
        for lt in all_labelings(t)[:2]:
            for g in D3:
                image = apply_symmetry(lt, g)
                assert validate_tiling(image.tiling).ok


def test_serialize_k1_minimal_document():
    assert serialize(Tiling(1, ())) == '{"k":1,"lozenges":[]}'
    lt = LabeledTiling.default(Tiling(1, ()))
    assert serialize(lt) == '{"k":1,"lozenges":[],"labels":{"1":[0,0]}}'


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_round_trip(k):
    for t in TILINGS[k]:
        text = serialize(t)
        assert parse(text) == t
        assert serialize(parse(text)) == text
        lt = LabeledTiling.default(t)
        assert parse(serialize(lt)) == lt


def test_duplicate_label_index_rejected():
    text = '{"k":2,"lozenges":[{"down":[0,0],"dir":"N"}],"labels":{"1":[0,0],"1":[1,0]}}'
    with pytest.raises(ParseError):
        parse(text)


@pytest.mark.parametrize("text, where", [
    ('{"k":0,"lozenges":[]}', "$.k"),
    ('{"k":2,"lozenges":[{"down":[0,0],"dir":"X"}]}', "$.lozenges[0].dir"),
    ('{"k":2,"lozenges":[{"down":[3,0],"dir":"N"}]}', "$.lozenges[0].down"),
    ('{"k":2,"lozenges":[{"down":"a","dir":"N"}]}', "$.lozenges[0].down"),
])
def test_parse_errors_carry_position(text, where):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.where == where


def test_parse_rejects_non_bijective_labels():
    doc = json.loads(serialize(LabeledTiling.default(TILINGS[2][0])))
    doc["labels"]["2"] = doc["labels"]["1"]
    with pytest.raises((ParseError, MalformedInput)):
        parse(json.dumps(doc))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=len(TILINGS[4]) - 1),
       st.permutations([1, 2, 3, 4]),
       st.sampled_from(D3))
def test_label_permutations_keep_tiling(i, perm, g):
    lt = LabeledTiling.default(TILINGS[4][i])
    moved = apply_symmetry(lt, LabelPermutation(tuple(perm)))
    assert moved.tiling == lt.tiling
    assert sorted(moved.labels) == sorted(lt.labels)
    assert parse(serialize(apply_symmetry(moved, g))) == apply_symmetry(moved, g)


def test_grid_sizes():
    for k in range(1, 7):
        g = grid(k)
        assert len(g.ups) == k * (k + 1) // 2
        assert len(g.downs) == k * (k - 1) // 2
        assert len(g.triangles) == k * k
