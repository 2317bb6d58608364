import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from oracles import diagrams_up_to, grown_diagrams

from taquin.diagrams import (
    AXIS_PERMUTATIONS,
    EMPTY,
    Box,
    from_partition,
    from_rows,
    permute_axes,
)
from taquin.errors import BoxNotInDiagram, IllegalCorner, NotPlanar
from taquin.processes import (
    hook3_length,
    plancherel2d_exact,
    plancherel2d_transitions,
    pp_transitions,
    pp_weight,
    sample_plancherel2d_tableau,
    sample_pp_tableau,
)
from taquin.rng import RandomSource
from taquin.tableaux import shape_of, validate


def brute_hook(d, b):
    x, y, z = b
    ray = {q for q in d.boxes if (q.y, q.z) == (y, z) and q.x >= x}
    ray |= {q for q in d.boxes if (q.x, q.z) == (x, z) and q.y >= y}
    ray |= {q for q in d.boxes if (q.x, q.y) == (x, y) and q.z >= z}
    return len(ray)


def test_hook_examples():
    assert hook3_length(from_rows([[1]]), (0, 0, 0)) == 1
    assert hook3_length(from_rows([[2, 1], [1]]), (0, 0, 0)) == 4
    # [[3]] is a stack along z; the row of three is the partition [3]
    assert hook3_length(from_partition([3]), (1, 0, 0)) == 2
    assert hook3_length(from_rows([[3]]), (0, 0, 1)) == 2
    with pytest.raises(BoxNotInDiagram):
        hook3_length(from_rows([[1]]), (1, 0, 0))


def test_hook_matches_union_count():
    for d in diagrams_up_to(7):
        for b in d.boxes:
            assert hook3_length(d, b) == brute_hook(d, b)


def test_weight_examples():
    assert pp_weight(EMPTY, (0, 0, 0)) == 1.0
    assert pp_weight(from_rows([[1]]), (1, 0, 0)) == 0.5
    assert math.isclose(pp_weight(from_partition([2]), (2, 0, 0)), 1 / 3, rel_tol=1e-15)
    assert math.isclose(math.exp(pp_weight(from_partition([2]), (2, 0, 0), log_space=True)), 1 / 3)
    with pytest.raises(IllegalCorner):
        pp_weight(from_rows([[1]]), (1, 1, 0))


def test_transition_examples():
    assert pp_transitions(EMPTY).entries == {(0, 0, 0): 1.0}
    t = pp_transitions(from_rows([[1]]))
    assert set(t.entries) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert all(math.isclose(v, 1 / 3) for v in t.entries.values())


def test_transition_axis_symmetry():
    for d in diagrams_up_to(6):
        base = pp_transitions(d).entries
        for p in AXIS_PERMUTATIONS:
            img = pp_transitions(permute_axes(d, p)).entries
            for b, v in base.items():
                q = Box(*(b[i] for i in p))
                assert math.isclose(img[q], v, rel_tol=1e-12)


@settings(max_examples=100, deadline=None)
@given(grown_diagrams(max_size=40))
def test_weights_positive_and_normalized(d):
    for b, _ in pp_transitions(d).entries.items():
        w = pp_weight(d, b)
        assert 0.0 < w <= 1.0
    assert abs(pp_transitions(d).total() - 1.0) < 1e-12
    lt = pp_transitions(d, log_space=True).entries
    for b, v in pp_transitions(d).entries.items():
        assert math.isclose(lt[b], v, rel_tol=1e-12)


def test_sample_examples():
    assert sample_pp_tableau(0, RandomSource(1)) == ()
    assert sample_pp_tableau(1, RandomSource(1)) == ((0, 0, 0),)
    r = RandomSource(8)
    n = 10**5
    hits = {}
    for _ in range(n):
        b = sample_pp_tableau(2, r)[1]
        hits[b] = hits.get(b, 0) + 1
    sigma = math.sqrt(n * (1 / 3) * (2 / 3))
    assert set(hits) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert all(abs(c - n / 3) < 3 * sigma for c in hits.values())


def test_sample_deterministic_and_valid():
    a = sample_pp_tableau(2000, RandomSource(4))
    assert a == sample_pp_tableau(2000, RandomSource(4))
    validate(a)
    assert shape_of(a).n == 2000


def test_plancherel2d_examples():
    assert plancherel2d_transitions(EMPTY).entries == {(0, 0, 0): 1.0}
    assert plancherel2d_transitions(from_partition([1])).entries == {(1, 0, 0): 0.5, (0, 1, 0): 0.5}
    assert plancherel2d_exact(from_partition([2, 1])) == {
        (2, 0, 0): Fraction(3, 8), (1, 1, 0): Fraction(2, 8), (0, 2, 0): Fraction(3, 8)}
    with pytest.raises(NotPlanar):
        plancherel2d_transitions(from_rows([[2]]))


def test_plancherel2d_normalization_to_size_12():
    from oracles import partitions_up_to

    for lam in partitions_up_to(12):
        d = from_partition(lam)
        assert sum(plancherel2d_exact(d).values()) == 1
        assert abs(plancherel2d_transitions(d).total() - 1.0) < 1e-12


def test_plancherel2d_sampler():
    t = sample_plancherel2d_tableau(300, RandomSource(2))
    validate(t)
    assert shape_of(t).is_planar


def test_near_centrality_report():
    # two random paths to the same size-1000 shape: compare path probabilities
    from taquin.diagrams import add_box
    from taquin.jdt import schutz_preserve

    t = sample_pp_tableau(1000, RandomSource(10))
    u = t
    for _ in range(200):
        u = schutz_preserve(u)
    assert shape_of(u) == shape_of(t)

    def log_prob(path):
        d, s = EMPTY, 0.0
        for b in path:
            s += math.log(pp_transitions(d).entries[b])
            d = add_box(d, b)
        return s

    print(f"path probability ratio: {math.exp(log_prob(t) - log_prob(u)):.4f}")
