"""Ordered planarity and rotation-system faces against known embeddings."""

from __future__ import annotations

import pytest

from tanglekit.graph import GraphError, MultiGraph
from tanglekit.embedding import (
    OrderedPlanarEmbedding,
    all_rotation_systems,
    collapse_cyclic,
    find_embedding,
    ordered_planarity,
    verify_ordered_embedding,
    walk_contains_order,
)


def k4() -> MultiGraph:
    return MultiGraph.from_pairs([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def cube() -> MultiGraph:
    return MultiGraph.from_pairs(
        [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4),
         (0, 4), (1, 5), (2, 6), (3, 7)]
    )


def octahedron() -> MultiGraph:
    return MultiGraph.from_pairs(
        [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5),
         (0, 3), (0, 4), (1, 3), (1, 5), (2, 4), (2, 5)]
    )


# -- order matching ------------------------------------------------------------


def test_collapse_cyclic():
    assert collapse_cyclic((1, 1, 2, 3, 3, 1)) == (1, 2, 3)
    assert collapse_cyclic((5,)) == (5,)
    assert collapse_cyclic(()) == ()


def test_walk_contains_order_is_circular_and_unoriented():
    walk = (0, 1, 2, 3)
    assert walk_contains_order(walk, (0, 2))
    assert walk_contains_order(walk, (3, 1, 2))   # rotation
    assert walk_contains_order(walk, (0, 2, 1))   # reflection
    assert not walk_contains_order(walk, (0, 4))
    assert walk_contains_order(walk, ())


# -- ordered planarity ---------------------------------------------------------


def test_k4_triangle_face_but_no_four_face():
    e = ordered_planarity(k4(), (0, 1, 2))
    assert e is not None
    assert verify_ordered_embedding(k4(), e) == []
    assert ordered_planarity(k4(), (0, 1, 2, 3)) is None


def test_k5_is_not_planar():
    k5 = MultiGraph.from_pairs([(i, j) for i in range(5) for j in range(i + 1, 5)])
    assert ordered_planarity(k5) is None


def test_cube_faces():
    g = cube()
    assert ordered_planarity(g, (0, 1, 2, 3)) is not None
    assert ordered_planarity(g, (0, 3, 2, 1)) is not None   # reflection
    assert ordered_planarity(g, (0, 2, 5, 7)) is None       # not on a face
    assert ordered_planarity(g, (0, 2)) is not None         # share face 0123
    assert ordered_planarity(g, (0, 6)) is None             # antipodal corners


def test_multigraph_faces_with_loop_and_digon():
    g = MultiGraph.build([0, 1, 2], [(0, 0, 1), (1, 0, 1), (2, 1, 2), (3, 2, 2)])
    e = ordered_planarity(g, (0, 1, 2))
    assert e is not None
    assert verify_ordered_embedding(g, e) == []
    walks = sorted(e.rotation.face_walk(g, f) for f in e.rotation.faces())
    # outer walk visiting the loop vertex twice, digon face, loop face
    assert walks == [(0, 1, 2, 2, 1), (1, 0), (2,)]


def test_set_entries_mean_consecutive():
    hexg = MultiGraph.from_pairs([(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
    e = ordered_planarity(hexg, (0, frozenset({1, 2}), 3, frozenset({4, 5})))
    assert e is not None and e.order == (0, 1, 2, 3, 4, 5)
    assert ordered_planarity(hexg, (0, frozenset({1, 4}), 3, frozenset({2, 5}))) is None


def test_isolated_vertices_are_free():
    g = MultiGraph.build([0, 1, 2, 9], [(0, 0, 1), (1, 1, 2), (2, 2, 0)])
    e = ordered_planarity(g, (0, 9, 1, 2))
    assert e is not None


def test_unknown_order_vertex_raises():
    with pytest.raises(GraphError):
        ordered_planarity(k4(), (0, 17))


def test_order_across_components_raises():
    g = MultiGraph.from_pairs([(0, 1), (0, 2), (1, 2), (3, 4), (4, 5), (3, 5)])
    with pytest.raises(GraphError):
        ordered_planarity(g, (0, 3))


# -- facial triangles ------------------------------------------------------------


def test_octahedron_facial_triangles():
    g = octahedron()
    assert find_embedding(g, facial_triangles=[frozenset({0, 1, 2}), frozenset({3, 4, 5})]) is not None
    assert find_embedding(g, facial_triangles=[frozenset({0, 1, 5})]) is None  # 0-5 not an edge


def test_k4_all_triangles_are_facial_somewhere():
    g = k4()
    for tri in ({0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}):
        emb = find_embedding(g, facial_triangles=[frozenset(tri)])
        assert emb is not None
        assert verify_ordered_embedding(g, emb) == []


# -- verification catches lies ----------------------------------------------------


def test_verify_rejects_wrong_face():
    g = k4()
    e = ordered_planarity(g, (0, 1, 2))
    assert e is not None
    bogus = OrderedPlanarEmbedding(e.rotation, ((0, 0), (1, 1)), e.order)
    assert verify_ordered_embedding(g, bogus) != []


def test_verify_rejects_nonplanar_rotation():
    # K5 rotation systems are never planar; check one
    k5 = MultiGraph.from_pairs([(i, j) for i in range(5) for j in range(i + 1, 5)])
    rot = next(all_rotation_systems(k5))
    assert not rot.is_planar(k5)


def test_rotation_count_is_product_of_cyclic_orders():
    c3 = MultiGraph.from_pairs([(0, 1), (1, 2), (2, 0)])
    assert sum(1 for _ in all_rotation_systems(c3)) == 1
    # (3-1)! cyclic orders per K4 vertex; exactly the two mirror-image
    # rotation systems of the unique embedding pass the Euler check
    assert sum(1 for _ in all_rotation_systems(k4())) == 16
    assert sum(1 for r in all_rotation_systems(k4()) if r.is_planar(k4())) == 2
