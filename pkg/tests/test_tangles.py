"""Blocking structure: verdicts, partitions, 2-balanced sets, signatures."""

from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from tanglekit.graph import MultiGraph, enumerate_cycles
from tanglekit.bias import AllUnbalanced, BiasedGraph, make_explicit, make_signed, simplify
from tanglekit.tangles import (
    Balanced,
    HasBlockingVertex,
    StandardPartition,
    Tangled,
    TangleError,
    TwoDisjointUnbalanced,
    blocking_pairs,
    blocking_vertices,
    find_disjoint_unbalanced_pair,
    is_2_balanced,
    is_tangled,
    recover_signature,
    standard_partition,
)

from oracles import random_multigraph


def k4() -> MultiGraph:
    return MultiGraph.from_pairs([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def k5() -> MultiGraph:
    return MultiGraph.from_pairs(list(itertools.combinations(range(5), 2)))


def wheel4() -> MultiGraph:
    # rim 1-2-3-4 (edges 0..3), hub 0 with spokes 4..7 to 1,2,3,4
    return MultiGraph.build(
        range(5),
        [(0, 1, 2), (1, 2, 3), (2, 3, 4), (3, 4, 1), (4, 0, 1), (5, 0, 2), (6, 0, 3), (7, 0, 4)],
    )


# -- verdicts ----------------------------------------------------------------------


def test_two_unbalanced_loops_disjoint():
    g = MultiGraph.build([0, 1], [(0, 0, 1), (1, 0, 0), (2, 1, 1)])
    o = make_signed(g, {1, 2})
    pair = find_disjoint_unbalanced_pair(o)
    assert pair is not None
    assert {pair[0].key, pair[1].key} == {(1,), (2,)}
    v = is_tangled(o)
    assert isinstance(v, TwoDisjointUnbalanced)
    assert blocking_pairs(o) == ((0, 1),)


def test_balanced_graph():
    o = make_signed(k4(), set())
    assert find_disjoint_unbalanced_pair(o) is None
    assert blocking_vertices(o) == frozenset({0, 1, 2, 3})
    assert blocking_pairs(o) == ()
    assert is_tangled(o) == Balanced()


def test_k5_all_unbalanced_is_tangled():
    o = BiasedGraph(k5(), AllUnbalanced())
    # K5 has no two vertex-disjoint cycles at all
    assert find_disjoint_unbalanced_pair(o) is None
    assert blocking_vertices(o) == frozenset()
    assert is_tangled(o) == Tangled()


def test_bowtie_blocking_vertex():
    g = MultiGraph.from_pairs([(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])
    o = make_signed(g, {0, 4})  # both triangles unbalanced
    assert len(o.unbalanced_cycles()) == 2
    assert blocking_vertices(o) == frozenset({2})
    assert is_tangled(o) == HasBlockingVertex(2)


def test_minimal_fat_triangle_is_tangled():
    g = MultiGraph.build(
        [0, 1, 2], [(0, 0, 1), (1, 1, 2), (2, 2, 0), (3, 0, 1), (4, 1, 2), (5, 2, 0)]
    )
    o = make_signed(g, {3, 4, 5})
    # 3 unbalanced digons + 4 odd triangles
    assert len(o.unbalanced_cycles()) == 7
    assert is_tangled(o) == Tangled()


def test_single_unbalanced_loop():
    g = MultiGraph.build([0], [(0, 0, 0)])
    assert is_tangled(make_signed(g, {0})) == HasBlockingVertex(0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_verdicts_exclusive_and_exhaustive(seed):
    rng = random.Random(seed)
    g = random_multigraph(rng, max_n=6, max_extra=5, allow_loops=True)
    sig = {e for e in g.edge_ids if rng.random() < 0.4}
    o = make_signed(g, sig)
    unb = o.unbalanced_cycles()
    has_pair = any(
        not (c1.vertex_set & c2.vertex_set) for c1, c2 in itertools.combinations(unb, 2)
    )
    blockers = [v for v in g.vertices if all(v in c.vertex_set for c in unb)]
    verdict = is_tangled(o)
    if not unb:
        assert verdict == Balanced()
    elif blockers:
        assert verdict == HasBlockingVertex(min(blockers))
        assert not has_pair
    elif has_pair:
        assert isinstance(verdict, TwoDisjointUnbalanced)
        assert not o.balance(verdict.first) and not o.balance(verdict.second)
        assert not (verdict.first.vertex_set & verdict.second.vertex_set)
    else:
        assert verdict == Tangled()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_simplification_preserves_tangledness(seed):
    rng = random.Random(seed)
    g = random_multigraph(rng, max_n=7, max_extra=6, allow_loops=True, allow_parallel=True)
    sig = {e for e in g.edge_ids if rng.random() < 0.4}
    o = make_signed(g, sig)
    before = isinstance(is_tangled(o), Tangled)
    after = isinstance(is_tangled(simplify(o)), Tangled)
    assert before == after


def test_blocking_pair_example():
    # every triangle of K4 misses exactly one vertex, so no single vertex
    # blocks but every pair does
    o = BiasedGraph(k4(), AllUnbalanced())
    assert blocking_vertices(o) == frozenset()
    assert blocking_pairs(o) == tuple(itertools.combinations(range(4), 2))


# -- standard partition -------------------------------------------------------------


def test_partition_splits_by_sign():
    o = make_signed(wheel4(), {4, 5})
    sp = standard_partition(o, 0)
    assert sp.vertex == 0
    assert [sorted(p) for p in sp.parts] == [[4, 5], [6, 7]]
    assert sp.part_of(4) == 0 and sp.part_of(6) == 1
    with pytest.raises(KeyError):
        sp.part_of(0)


def test_partition_single_class_when_balanced():
    o = make_signed(wheel4(), set())
    sp = standard_partition(o, 0)
    assert [sorted(p) for p in sp.parts] == [[4, 5, 6, 7]]


def test_partition_two_singletons():
    o = make_signed(MultiGraph.from_pairs([(0, 1), (1, 2), (2, 0)]), {0})
    sp = standard_partition(o, 0)
    assert [sorted(p) for p in sp.parts] == [[0], [2]]


def test_partition_matches_cycle_bias():
    # a non-loop cycle is unbalanced iff its two edges at v lie in
    # different parts
    o = make_signed(wheel4(), {4, 6})
    sp = standard_partition(o, 0)
    for c in o.cycles():
        used = [e for e in c.key if e in {4, 5, 6, 7}]
        if len(used) == 2:
            assert o.balance(c) == (sp.part_of(used[0]) == sp.part_of(used[1]))


def test_partition_preconditions():
    o = make_signed(wheel4(), {0})
    with pytest.raises(TangleError, match="not a blocking vertex"):
        standard_partition(o, 4)
    with pytest.raises(TangleError, match="not in the graph"):
        standard_partition(o, 99)
    pg = MultiGraph.build([0, 1, 2], [(0, 0, 1), (1, 0, 1), (2, 1, 2)])
    with pytest.raises(TangleError, match="disconnects"):
        standard_partition(make_signed(pg, {1}), 1)


def test_partition_ignores_loops_at_vertex():
    g = MultiGraph.build([0, 1, 2], [(0, 0, 1), (1, 1, 2), (2, 2, 0), (3, 0, 0)])
    o = make_signed(g, {0, 3})
    sp = standard_partition(o, 0)
    assert all(3 not in p for p in sp.parts)
    assert [sorted(p) for p in sp.parts] == [[0], [2]]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_partition_relation_is_transitive(seed):
    # all negative edges at one vertex makes it blocking
    rng = random.Random(seed)
    g = random_multigraph(rng, max_n=6, max_extra=5)
    v = g.vertices[0]
    assume(g.delete_vertices([v]).is_connected())
    delta = g.delta(v)
    assume(len(delta) >= 3)
    sig = {e for e in delta if rng.random() < 0.5}
    o = make_signed(g, sig)
    assume(v in blocking_vertices(o))
    sp = standard_partition(o, v)  # raises if the relation is inconsistent
    assert sorted(e for p in sp.parts for e in p) == sorted(delta)
    for s, t in itertools.combinations(range(len(sp.parts)), 2):
        assert not (sp.parts[s] & sp.parts[t])


# -- 2-balanced sets ---------------------------------------------------------------


def _k4_mixed_diagonal_bias():
    # base quad balanced, one diagonal quad balanced, the other quad and
    # all triangles unbalanced; a valid bias where {f1, f2}-cycles disagree
    g = k4()
    quads = [c for c in enumerate_cycles(g) if len(c) == 4]
    basec = next(c for c in quads if c.edge_set == frozenset({0, 2, 3, 5}))
    diag = next(c for c in quads if c.edge_set == frozenset({1, 2, 3, 4}))
    return make_explicit(g, [basec, diag]), frozenset({0, 2, 3, 5})


def test_mixed_diagonal_pair_not_2_balanced():
    o, base = _k4_mixed_diagonal_bias()
    viol = is_2_balanced(o, base, {1, 4})
    assert viol is not None and viol.edge_set == frozenset({0, 1, 4, 5})


def test_singleton_f_set_vacuously_2_balanced():
    o, base = _k4_mixed_diagonal_bias()
    assert is_2_balanced(o, base, {1}) is None


def test_2_balanced_overlap_rejected():
    o, base = _k4_mixed_diagonal_bias()
    with pytest.raises(TangleError, match="overlaps"):
        is_2_balanced(o, base, {0, 1})


def test_signature_residue_always_2_balanced():
    # two f-edges of a signature meet every common cycle twice
    g = MultiGraph.from_pairs([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)])
    o = make_signed(g, {4, 5})
    assert is_2_balanced(o, {0, 1, 2, 3}, {4, 5}) is None


# -- signature recovery -------------------------------------------------------------


def test_recover_chord_signature():
    g = MultiGraph.from_pairs([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    o = make_signed(g, {4})
    assert recover_signature(o, {0, 1, 2, 3}, {4}) == frozenset({4})


def test_recover_rejects_non_maximal_base():
    g = MultiGraph.from_pairs([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    o = make_signed(g, set())
    with pytest.raises(TangleError, match="not maximal"):
        recover_signature(o, {0, 1, 2, 3}, {4})


def test_recover_rejects_unbalanced_base():
    g = MultiGraph.from_pairs([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    o = make_signed(g, {0, 4})
    with pytest.raises(TangleError, match="not balanced"):
        recover_signature(o, {0, 1, 2, 3}, {4})


def test_recover_rejects_non_2_balanced_f_set():
    o, base = _k4_mixed_diagonal_bias()
    with pytest.raises(TangleError, match="not 2-balanced") as exc:
        recover_signature(o, base, {1, 4})
    assert exc.value.cycle is not None


def test_recover_rejects_disjoint_unbalanced_pair():
    # two unbalanced triangles joined by a long path
    g = MultiGraph.from_pairs(
        [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]
    )
    o = make_signed(g, {0, 3})
    base = frozenset(g.edge_ids) - {0, 3}
    with pytest.raises(TangleError, match="disjoint unbalanced"):
        recover_signature(o, base, {0, 3})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_recovered_signature_obeys_parity_law(seed):
    # signature off a spanning tree: the complement of the signature is a
    # maximal balanced subgraph and the signature is 2-balanced for it
    rng = random.Random(seed)
    g = random_multigraph(rng, max_n=6, max_extra=5)
    tree = set(g.spanning_tree_edges())
    rest = sorted(set(g.edge_ids) - tree)
    assume(rest)
    sig = {e for e in rest if rng.random() < 0.6}
    assume(sig)
    o = make_signed(g, sig)
    assume(find_disjoint_unbalanced_pair(o) is None)
    base = frozenset(g.edge_ids) - sig
    assert recover_signature(o, base, sig) == frozenset(sig)
    for c in o.cycles():
        assert o.balance(c) == (len(c.edge_set & sig) % 2 == 0)
