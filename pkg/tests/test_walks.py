import random
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treewalks.exactalg import catalan
from treewalks.walks import (
    NotATreeWalk,
    ResourceGuardError,
    TreeWalk,
    classify,
    closed_walk_shapes,
    contour_kernel,
    enumerate_census,
    excess,
    induced_tree,
    iter_canonical_walks,
    iter_plane_shapes,
    kernel_conditions,
    optimal_kernel_witness,
    reduce_to_kernel,
)


@pytest.fixture(scope="module")
def census6():
    return enumerate_census(6)


@pytest.fixture(scope="module")
def walks12():
    return [TreeWalk(vs) for two_l in range(0, 13, 2) for vs in iter_canonical_walks(two_l)]


def test_induced_tree_examples():
    t = induced_tree(TreeWalk((1, 2, 1, 2)))
    assert t.counts == {frozenset({1, 2}): 4} and t.excess() == 1
    t = induced_tree(TreeWalk((1, 2, 1, 3)))
    assert set(t.counts.values()) == {2} and len(t.counts) == 2 and t.excess() == 0
    t = induced_tree(TreeWalk((1, 2, 3, 2)))
    assert set(t.counts) == {frozenset({1, 2}), frozenset({2, 3})} and t.excess() == 0


@pytest.mark.parametrize("vs", [(1, 2, 3), (1, 2, 3, 4), (1, 1), (1, 2, 1), (1, 3), (1, 2, 3, 1, 2, 3)])
def test_rejects_non_tree_walks(vs):
    with pytest.raises(NotATreeWalk):
        TreeWalk(vs)


def test_reduce_examples():
    assert reduce_to_kernel(TreeWalk((1, 2, 1, 3))) == TreeWalk((1,))
    assert reduce_to_kernel(TreeWalk((1, 2, 1, 2))) == TreeWalk((1, 2, 1, 2))
    assert reduce_to_kernel(TreeWalk((1, 2, 1, 3, 1, 3, 1, 3))) == TreeWalk((1, 2, 1, 2, 1, 2))


def test_classify_examples():
    c = classify(TreeWalk((1, 2, 1, 2)))
    assert (c.excess, c.simple_edge_count, c.is_kernel, c.is_superreduced, c.root_departures) == (1, 0, True, True, 2)
    c = classify(TreeWalk((1, 2, 1, 3)))
    assert (c.excess, c.simple_edge_count, c.is_kernel, c.is_superreduced, c.root_departures) == (0, 2, False, False, 2)


def test_enumeration_counts_tree_walks(census6):
    # tree walks of length 2l with l + 1 vertices are contour walks: Cat(l) * (l+1)!
    for l in range(7):
        assert census6.w_count(l + 1, 2 * l) == catalan(l) * factorial(l + 1)


def test_census_guard():
    with pytest.raises(ResourceGuardError):
        enumerate_census(8)


def test_kernel_properties(walks12):
    rng = random.Random(11)
    for w in walks12:
        k = reduce_to_kernel(w)
        assert reduce_to_kernel(k) == k
        assert excess(k) == excess(w)
        assert all(kernel_conditions(induced_tree(k)))
        # the result does not depend on the order of the moves
        assert reduce_to_kernel(w, rng) == k


def test_kernel_and_superreduced_bounds(walks12):
    for w in walks12:
        info = classify(w)
        xi = info.excess
        m = len(induced_tree(w).vertices())
        if info.is_kernel and xi >= 1:
            assert m <= 3 * xi - 1
            assert info.simple_edge_count <= 2 * xi - 2
            assert w.half_length <= 4 * xi - 2
        if info.is_superreduced:
            assert w.length <= 4 * xi and m <= xi + 1


def test_kernel_characterisation(walks12):
    found = {induced_tree(w).shape() for w in walks12 if classify(w).is_kernel}
    built = set()
    for edges in range(7):
        for shape in iter_plane_shapes(edges):
            w = contour_kernel(shape)
            if w.length <= 12 and all(kernel_conditions(induced_tree(w))):
                assert classify(w).is_kernel
                built.add(induced_tree(w).shape())
    assert found == built


@pytest.mark.parametrize("xi", [1, 2])
def test_optimal_counts_from_census(census6, xi):
    # optimal: 2xi - 2 simple edges at length 2(4xi - 2); near-optimal one fewer and 2 shorter
    want = factorial(3 * xi - 1) * catalan(xi - 1)
    assert census6.k_count(xi, 2 * xi - 2, 2 * (4 * xi - 2)) == want
    if xi >= 2:
        assert census6.k_count(xi, 2 * xi - 3, 2 * (4 * xi - 3)) == want


@pytest.mark.parametrize("xi", [1, 2, 3, 4])
def test_optimal_witness(xi):
    w = optimal_kernel_witness(xi)
    info = classify(w)
    assert info.is_kernel and info.excess == xi
    assert info.simple_edge_count == 2 * xi - 2
    assert len(induced_tree(w).vertices()) == 3 * xi - 1
    assert w.half_length == 4 * xi - 2


def test_plane_shape_counts():
    # edge-coloured rooted plane trees: Cat(n) 2^n
    for n in range(6):
        assert sum(1 for _ in iter_plane_shapes(n)) == catalan(n) * 2 ** n


def test_closed_walk_shapes_small():
    assert closed_walk_shapes(2) == {(2, 1): 1}
    # two tree walks on 3 vertices and the 4-cycle
    assert closed_walk_shapes(4) == {(2, 1): 1, (3, 2): 2, (4, 4): 1}


@pytest.mark.parametrize("length", range(1, 9))
def test_closed_walk_shapes_against_complete_graph(length):
    # tr A^L on K_n is (n-1)^L + (n-1)(-1)^L
    shapes = closed_walk_shapes(length)
    for n in (3, 5, 8):
        total = 0
        for (m, _), count in shapes.items():
            falling = 1
            for k in range(m):
                falling *= n - k
            total += count * falling
        assert total == (n - 1) ** length + (n - 1) * (-1) ** length


@st.composite
def random_tree_walk(draw):
    """A random closed walk along a random tree."""
    n = draw(st.integers(1, 6))
    parent = [None] + [draw(st.integers(0, i - 1)) for i in range(1, n)]
    adj = {i: [] for i in range(n)}
    for i, p in enumerate(parent[1:], 1):
        adj[i].append(p)
        adj[p].append(i)
    steps = draw(st.integers(0, 14))
    seq = [0]
    for _ in range(steps):
        if not adj[seq[-1]]:
            break
        seq.append(draw(st.sampled_from(adj[seq[-1]])))
    # walk back to the root along parents
    while seq[-1] != 0:
        seq.append(parent[seq[-1]])
    if len(seq) > 1:
        seq.pop()
    relabel = {}
    vs = tuple(relabel.setdefault(v, len(relabel) + 1) for v in seq)
    return TreeWalk(vs)


@settings(max_examples=200)
@given(random_tree_walk(), st.integers(0, 1000))
def test_reduction_on_random_walks(w, seed):
    k = reduce_to_kernel(w)
    assert excess(k) == excess(w)
    assert reduce_to_kernel(k) == k
    assert reduce_to_kernel(w, random.Random(seed)) == k
