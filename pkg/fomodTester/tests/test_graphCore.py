import json

import networkx as nx
import pytest

from ..graphCore import (ExplicitGraph, ExplicitOracle, component_of, disjoint_union,
                         edit_distance, explore_ball, read_graph_file, validate_membership,
                         write_graph_file)
from ..utilsErrors import ArgumentError, ResourceGuardError


def path(n):
    return ExplicitGraph(n, edges=[(i, i + 1) for i in range(1, n)])


def test_adjacency_sorted_and_symmetric():
    g = ExplicitGraph(4, edges=[(3, 1), (1, 2), (4, 1)])
    assert g.neighbors(1) == (2, 3, 4)
    assert g.neighbors(3) == (1,)
    assert g.num_edges() == 3
    assert g.edges() == [(1, 2), (1, 3), (1, 4)]
    assert g.max_degree() == 3


@pytest.mark.parametrize('edges', [[(1, 1)], [(0, 1)], [(1, 5)]])
def test_bad_edges(edges):
    with pytest.raises(ArgumentError):
        ExplicitGraph(4, edges=edges)


def test_components_match_networkx():
    g = disjoint_union([path(3), ExplicitGraph(1), path(2), ExplicitGraph(3, [(1, 2), (2, 3),
                                                                              (1, 3)])])
    h = nx.Graph()
    h.add_nodes_from(range(1, g.n + 1))
    h.add_edges_from(g.edges())
    expected = sorted(sorted(c) for c in nx.connected_components(h))
    assert g.components() == expected


def test_oracle_counts_queries():
    g = path(3)
    oracle = ExplicitOracle(g, d=2)
    assert oracle.neighbor_query(2, 1) == 1
    assert oracle.neighbor_query(2, 2) == 3
    assert oracle.neighbor_query(1, 2) is None
    assert oracle.queries == 3
    oracle.reset_queries()
    assert oracle.queries == 0


def test_oracle_range_checks():
    oracle = ExplicitOracle(path(3), d=2)
    with pytest.raises(ArgumentError):
        oracle.neighbor_query(4, 1)
    with pytest.raises(ArgumentError):
        oracle.neighbor_query(1, 3)
    with pytest.raises(ArgumentError):
        ExplicitOracle(path(3), d=1)


def test_neighbors_stops_at_first_missing_port():
    oracle = ExplicitOracle(disjoint_union([path(2), ExplicitGraph(1)]), d=3)
    assert oracle.neighbors(1) == [2]
    # port 1 answers, port 2 reports the end of the list
    assert oracle.queries == 2


def test_materialize_costs_nd():
    g = path(5)
    oracle = ExplicitOracle(g, d=2)
    assert oracle.materialize() == g
    assert oracle.queries == 10


def test_explore_ball_relabels_root_first():
    oracle = ExplicitOracle(path(5), d=2)
    ball = explore_ball(oracle, 3, 1)
    assert ball.root == 1
    assert ball.graph.n == 3
    assert ball.vertices[0] == 3
    assert set(ball.vertices) == {2, 3, 4}
    assert ball.graph.num_edges() == 2
    assert explore_ball(oracle, 1, 0).graph.n == 1


def test_component_of_respects_cap():
    g = disjoint_union([path(4), path(2)])
    oracle = ExplicitOracle(g, d=2)
    assert component_of(oracle, 1, cap=3) is None
    comp, vertices = component_of(oracle, 5, cap=3, return_vertices=True)
    assert comp.n == 2
    assert vertices == (5, 6)


def test_validate_membership():
    g = disjoint_union([path(3), path(2)])
    assert validate_membership(g, 3, 2)
    result = validate_membership(g, 2, 1)
    assert not result
    assert result.high_degree_vertices == [2]
    assert result.oversized_components == [[1, 2, 3]]


@pytest.mark.parametrize(('g1', 'g2', 'expected'), [
    (path(4), path(4), 0),
    (path(4), disjoint_union([path(2), path(2)]), 1),
    (ExplicitGraph(3, [(1, 2), (2, 3), (1, 3)]), ExplicitGraph(3), 3),
    (disjoint_union([path(2), ExplicitGraph(1)]), ExplicitGraph(3, [(2, 3)]), 0),
])
def test_edit_distance(g1, g2, expected):
    assert edit_distance(g1, g2) == expected


def test_edit_distance_matches_networkx():
    g1 = disjoint_union([path(3), path(2)])
    g2 = ExplicitGraph(5, [(1, 2), (2, 3), (3, 1), (4, 5)])

    def to_nx(g):
        h = nx.Graph()
        h.add_nodes_from(range(1, g.n + 1))
        h.add_edges_from(g.edges())
        return h

    expected = nx.graph_edit_distance(to_nx(g1), to_nx(g2),
                                      node_del_cost=lambda a: 100,
                                      node_ins_cost=lambda a: 100)
    assert edit_distance(g1, g2) == int(expected)


def test_edit_distance_cap():
    with pytest.raises(ResourceGuardError):
        edit_distance(path(12), path(12), cap=10)
    with pytest.raises(ArgumentError):
        edit_distance(path(3), path(4))


def test_graph_file_round_trip(tmp_path):
    g = disjoint_union([path(3), ExplicitGraph(1)])
    text_file = str(tmp_path / 'g.txt')
    json_file = str(tmp_path / 'g.json')
    write_graph_file(g, 2, text_file)
    write_graph_file(g, 2, json_file)
    assert read_graph_file(text_file) == (g, 2)
    assert read_graph_file(json_file) == (g, 2)
    with open(json_file) as infile:
        assert json.load(infile)['edges'] == [[1, 2], [2, 3]]


def test_graph_file_degree_bound(tmp_path):
    fname = tmp_path / 'bad.txt'
    fname.write_text('3 1\n1 2\n2 3\n')
    with pytest.raises(ArgumentError):
        read_graph_file(str(fname))
