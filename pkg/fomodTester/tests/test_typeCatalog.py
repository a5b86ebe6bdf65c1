import networkx as nx
import numpy as np
import pytest

from ..graphCore import ExplicitGraph, disjoint_union
from ..typeCatalog import (TypeCatalog, bhv, bhv_to_chv, canonical_code, chv, code_from_hex,
                           code_to_graph, code_to_hex, iter_chv_vectors, realize_chv, supertypes)
from ..utilsErrors import ArgumentError, NotInClassError

EDGE = ExplicitGraph(2, [(1, 2)])
VERTEX = ExplicitGraph(1)
PATH3 = ExplicitGraph(3, [(1, 2), (2, 3)])
TRIANGLE = ExplicitGraph(3, [(1, 2), (2, 3), (1, 3)])


@pytest.fixture(scope='module')
def c2d1():
    return TypeCatalog(2, 1)


@pytest.fixture(scope='module')
def c3d2():
    return TypeCatalog(3, 2)


def test_canonical_code_is_isomorphism_invariant():
    a = ExplicitGraph(4, [(1, 2), (2, 3), (3, 4)])
    b = ExplicitGraph(4, [(3, 1), (1, 4), (4, 2)])
    star = ExplicitGraph(4, [(1, 2), (1, 3), (1, 4)])
    assert canonical_code(a) == canonical_code(b)
    assert canonical_code(a) != canonical_code(star)


def test_rooted_codes_separate_orbits():
    assert canonical_code(PATH3, root=1) == canonical_code(PATH3, root=3)
    assert canonical_code(PATH3, root=1) != canonical_code(PATH3, root=2)
    assert canonical_code(PATH3, root=2) != canonical_code(PATH3)


def test_code_hex_and_graph():
    code = canonical_code(PATH3, root=2)
    assert code_from_hex(code_to_hex(code)) == code
    graph, root = code_to_graph(code)
    assert root == 1
    assert canonical_code(graph, root=1) == code
    with pytest.raises(ArgumentError):
        code_from_hex('zz')


def test_catalog_c2d1(c2d1):
    assert c2d1.M == 2
    assert c2d1.N == 2
    assert [t.size for t in c2d1.comp_types] == [1, 2]
    assert c2d1.span_radius == 1
    assert sorted(b.rep for b in c2d1.ball_types()) == [1, 2]


def test_catalog_c3d2(c3d2):
    assert c3d2.M == 4
    assert [t.size for t in c3d2.comp_types] == [1, 2, 3, 3]
    assert c3d2.N == 5
    assert sorted(b.rep for b in c3d2.ball_types()) == [1, 1, 2, 2, 3]
    assert len(c3d2.ball_types(1)) == 4
    assert len(c3d2.ball_types(0)) == 1
    # balls above c-1 reuse the spanning catalog
    assert c3d2.ball_types(5) is c3d2.ball_types(2)


@pytest.mark.parametrize(('c', 'd'), [(3, 2), (4, 2), (4, 3)])
def test_component_types_match_networkx(c, d):
    catalog = TypeCatalog(c, d)
    expected = 0
    for atlas_graph in nx.graph_atlas_g():
        n = atlas_graph.number_of_nodes()
        if 1 <= n <= c and nx.is_connected(atlas_graph) and \
                max(dict(atlas_graph.degree()).values()) <= d:
            expected += 1
    assert catalog.M == expected


def test_comp_type_of(c3d2):
    tri = c3d2.comp_type_of(TRIANGLE)
    path = c3d2.comp_type_of(PATH3)
    assert {tri, path} == {2, 3}
    assert c3d2.comp_type_of(ExplicitGraph(4, [(1, 2), (2, 3), (3, 4)])) is None


def test_supertypes(c3d2):
    vertex_ball = c3d2.ball_types(0)[0]
    assert len(supertypes(c3d2, vertex_ball, 2)) == c3d2.N
    leaf_balls = [b for b in c3d2.ball_types(1) if b.size == 2]
    assert len(leaf_balls) == 1
    # an edge endpoint or a path end
    assert len(supertypes(c3d2, leaf_balls[0], 2)) == 2


def test_chv_and_realize(c3d2):
    g = disjoint_union([TRIANGLE, VERTEX, EDGE, VERTEX, PATH3])
    vector = chv(g, c3d2)
    expected = np.zeros(4, dtype=int)
    expected[0] = 2
    expected[1] = 1
    expected[c3d2.comp_type_of(TRIANGLE)] = 1
    expected[c3d2.comp_type_of(PATH3)] = 1
    assert vector.as_tuple() == tuple(expected)
    rebuilt = realize_chv(vector, c3d2)
    assert rebuilt.n == g.n
    assert chv(rebuilt, c3d2).as_tuple() == vector.as_tuple()


def test_chv_rejects_outside_class(c2d1):
    with pytest.raises(NotInClassError):
        chv(PATH3, c2d1)


def test_bhv_to_chv(c3d2):
    g = disjoint_union([TRIANGLE, TRIANGLE, EDGE, PATH3, VERTEX])
    balls = bhv(g, 2, c3d2)
    assert balls.total() == g.n
    assert bhv_to_chv(balls, c3d2).as_tuple() == chv(g, c3d2).as_tuple()


def test_iter_chv_vectors_counts(c2d1):
    # isolated vertices and edges on n vertices: floor(n/2) + 1 classes
    for n in range(0, 9):
        vectors = list(iter_chv_vectors(c2d1, n))
        assert len(vectors) == n // 2 + 1
        assert all(v[0] + 2 * v[1] == n for v in vectors)


def test_catalog_hash_is_stable():
    assert TypeCatalog(2, 1).catalog_hash() == TypeCatalog(2, 1).catalog_hash()
    assert TypeCatalog(2, 1).catalog_hash() != TypeCatalog(3, 2).catalog_hash()


def test_catalog_json(c2d1):
    data = c2d1.to_json()
    assert data['c'] == 2
    assert len(data['component_types']) == 2
    assert data['ball_types'][0]['root'] == 1
