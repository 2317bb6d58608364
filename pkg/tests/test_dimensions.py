from fractions import Fraction

import pytest
from oracles import brute_dim, diagrams_up_to

from taquin.diagrams import (
    AXIS_PERMUTATIONS,
    EMPTY,
    corners,
    from_partition,
    from_rows,
    permute_axes,
    remove_box,
)
from taquin.dimensions import (
    DimCache,
    exact_cotransition,
    exact_dim_3d,
    greedy_sequence_exact,
    hook_dim_2d,
    is_cover,
    max_dim_levels,
    max_dim_search,
    orbit,
)
from taquin.errors import NotACover, NotPlanar, SizeLimitExceeded

TABLE1 = [1, 1, 2, 6, 12, 30, 96, 336, 1540, 8640, 33372, 142380, 665280, 2849536,
          15639552, 80923008, 544659648, 3299672408, 27402967200, 230747045760]


def test_hook_examples():
    assert hook_dim_2d(from_partition([4, 4, 3, 3, 1])) == 81081
    assert hook_dim_2d(from_partition([7])) == 1
    assert hook_dim_2d(from_partition([2, 1])) == 2
    assert hook_dim_2d(EMPTY) == 1
    with pytest.raises(NotPlanar):
        hook_dim_2d(from_rows([[2]]))


def test_exact_examples():
    assert exact_dim_3d(from_rows([[2, 2, 1], [2, 1], [1], [1]])) == 4630
    assert exact_dim_3d(from_rows([[3, 2, 1], [2, 1], [1]])) == 8640
    assert exact_dim_3d(from_rows([[1, 1], [1]])) == 2
    assert exact_dim_3d(EMPTY) == 1


@pytest.mark.parametrize("d", [d for d in diagrams_up_to(8) if d.is_planar], ids=str)
def test_2d_oracle_equivalence(d):
    assert hook_dim_2d(d) == exact_dim_3d(d) == brute_dim(d)


@pytest.mark.parametrize("d", diagrams_up_to(6), ids=str)
def test_exact_matches_path_count(d):
    assert exact_dim_3d(d) == brute_dim(d)


def test_branching_and_symmetry():
    cache = DimCache()
    for d in diagrams_up_to(10):
        v = exact_dim_3d(d, cache)
        if d.n:
            assert v == sum(exact_dim_3d(remove_box(d, c), cache) for c in corners(d).removable)
        assert {exact_dim_3d(permute_axes(d, p), cache) for p in AXIS_PERMUTATIONS} == {v}


def test_orbit_matches_axis_permutations():
    for d in diagrams_up_to(7):
        assert orbit(d.rows) == {permute_axes(d, p).rows for p in AXIS_PERMUTATIONS}


def test_cache_spot_check_and_bounds():
    cache = DimCache()
    d = from_rows([[3, 2, 1], [2, 1], [1]])
    v = exact_dim_3d(d, cache)
    assert cache.get(d) == v == exact_dim_3d(d, DimCache())
    assert d in cache
    with pytest.raises(SizeLimitExceeded):
        exact_dim_3d(d, DimCache(max_entries=5))
    with pytest.raises(SizeLimitExceeded):
        exact_dim_3d(from_partition([71]))
    assert exact_dim_3d(from_partition([71]), size_cap=71) == 1


def test_cotransition_examples():
    one = from_rows([[1]])
    assert exact_cotransition(one, from_rows([[2]])) == (Fraction(1), 1.0)
    p, f = exact_cotransition(from_rows([[1, 1]]), from_rows([[1, 1], [1]]))
    assert p == Fraction(1, 2) and f == 0.5
    with pytest.raises(NotACover):
        exact_cotransition(one, from_rows([[3]]))
    with pytest.raises(NotACover):
        exact_cotransition(from_rows([[2]]), from_rows([[1, 1]]))
    assert is_cover(one, from_rows([[2]])) == (0, 0, 1)


def test_cotransition_matches_ratio_over_corpus():
    cache = DimCache()
    for d in diagrams_up_to(7)[1:]:
        total = Fraction(0)
        for c in corners(d).removable:
            p, _ = exact_cotransition(remove_box(d, c), d, cache)
            total += p
        assert total == 1


def test_max_dim_examples():
    assert max_dim_search(1) == (from_rows([[1]]), 1)
    d, v = max_dim_search(4)
    assert v == 6
    assert from_rows([[2, 1], [1]]) in list(max_dim_levels(4))[-1].argmax
    assert max_dim_search(13)[1] == 665280
    with pytest.raises(SizeLimitExceeded):
        max_dim_search(34)
    with pytest.raises(ValueError):
        max_dim_search(0)


def test_max_dim_levels_match_brute_force():
    levels = list(max_dim_levels(8))
    for lm in levels:
        shapes = [d for d in diagrams_up_to(8) if d.n == lm.size]
        best = max(exact_dim_3d(d) for d in shapes)
        assert lm.dim == best == TABLE1[lm.size - 1]
        assert sorted(d.rows for d in lm.argmax) == sorted(d.rows for d in shapes if exact_dim_3d(d) == best)


def test_max_dim_tie_rule():
    lm = list(max_dim_levels(2))[-1]
    assert lm.dim == 1 and len(lm.argmax) == 3
    assert lm.best == from_rows([[1, 1]])


def test_greedy_exact_examples():
    steps = greedy_sequence_exact(20)
    probs = [round(float(s.probability), 6) for s in steps]
    assert probs[:2] == [1.0, 1.0]
    assert probs[2] == 0.5
    assert probs[9] == 0.178241
    assert probs[19] == 0.118758
    assert [s.size for s in steps] == list(range(1, 21))
    for a, b in zip(steps, steps[1:]):
        assert is_cover(a.diagram, b.diagram) == b.box
    with pytest.raises(SizeLimitExceeded):
        greedy_sequence_exact(71)


def test_corner_dims_matches_recursion():
    from taquin.dimensions import corner_dims, cotransitions_by_levels

    cache = DimCache()
    for d in diagrams_up_to(8):
        total, sub = corner_dims(d)
        assert total == exact_dim_3d(d, cache)
        assert set(sub) == set(corners(d).removable)
        for c, v in sub.items():
            assert v == exact_dim_3d(remove_box(d, c), cache)
    g = greedy_sequence_exact(30, cache)
    last = g[-1]
    probs = cotransitions_by_levels(last.diagram)
    assert probs[last.box] == last.probability
    assert sum(probs.values()) == 1


def test_corner_dims_guards_reconstruction():
    from taquin.dimensions import corner_dims

    big = greedy_sequence_exact(30)[-1].diagram
    assert exact_dim_3d(big) > 1 << 58
    with pytest.raises(SizeLimitExceeded):
        corner_dims(big, n_moduli=1)
    assert corner_dims(big, n_moduli=2)[0] == exact_dim_3d(big)
    with pytest.raises(SizeLimitExceeded):
        corner_dims(from_rows([[64] * 12]))


def test_compiled_level_search_matches_reference():
    from oracles import max_dim_levels_py

    for lm, (size, dim, arg) in zip(max_dim_levels(14), max_dim_levels_py(14)):
        assert (lm.size, lm.dim) == (size, dim)
        assert [d.rows for d in lm.argmax] == arg
