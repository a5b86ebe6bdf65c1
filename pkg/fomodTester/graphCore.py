"""
Graphs in the bounded-degree model.

ExplicitGraph holds a materialized adjacency list on vertices 1..n.
OracleGraph exposes a graph only through neighbor queries (v, j) and
counts them; subclasses may answer queries arithmetically so that n can
be very large without materialization.

Example:
    from fomodTester import graphCore as gc
    g = gc.ExplicitGraph(4, edges=[(1, 2), (2, 3), (3, 4)])
    oracle = gc.ExplicitOracle(g, d=2)
    ball = gc.explore_ball(oracle, 1, 2)
    print(ball.vertices, oracle.queries)
"""

import json
import logging
import os
import threading
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .utilsErrors import ArgumentError, check_guard

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)


#region Explicit graphs

class ExplicitGraph:
    """
    Immutable simple undirected graph on vertices 1..n with ascending
    adjacency lists.
    """

    def __init__(self, n, edges=(), adjacency=None):
        n = int(n)
        if n < 0:
            raise ArgumentError('Vertex count must be nonnegative, got ' + str(n))
        self._n = n
        if adjacency is not None:
            if len(adjacency) != n:
                raise ArgumentError('Adjacency has ' + str(len(adjacency)) +
                                    ' rows for ' + str(n) + ' vertices.')
            neighbor_sets = [set(row) for row in adjacency]
        else:
            neighbor_sets = [set() for _ in range(n)]
            for u, v in edges:
                u, v = int(u), int(v)
                self._check_vertex(u)
                self._check_vertex(v)
                if u == v:
                    raise ArgumentError('Self-loop at vertex ' + str(u))
                neighbor_sets[u - 1].add(v)
                neighbor_sets[v - 1].add(u)
        for v, row in enumerate(neighbor_sets, start=1):
            for u in row:
                self._check_vertex(u)
                if u == v:
                    raise ArgumentError('Self-loop at vertex ' + str(u))
                if v not in neighbor_sets[u - 1]:
                    raise ArgumentError('Adjacency is not symmetric at ' + str((v, u)))
        self._adjacency = tuple(tuple(sorted(row)) for row in neighbor_sets)

    def _check_vertex(self, v):
        if not 1 <= v <= self._n:
            raise ArgumentError('Vertex ' + str(v) + ' outside 1..' + str(self._n))

    @property
    def n(self):
        return self._n

    @property
    def adjacency(self):
        return self._adjacency

    def neighbors(self, v):
        self._check_vertex(v)
        return self._adjacency[v - 1]

    def degree(self, v):
        return len(self.neighbors(v))

    def max_degree(self):
        if self._n == 0:
            return 0
        return max(len(row) for row in self._adjacency)

    def edges(self):
        """
        Sorted list of edges (u, v) with u < v.
        """
        return [(v, u) for v, row in enumerate(self._adjacency, start=1) for u in row if v < u]

    def num_edges(self):
        return sum(len(row) for row in self._adjacency) // 2

    def edge_key(self):
        """
        Hashable description of the labeled graph.
        """
        return (self._n, tuple(self.edges()))

    def induced_subgraph(self, vertices):
        """
        Induced subgraph on the given vertices, relabeled 1..len(vertices)
        in the order given.
        """
        index = {v: i for i, v in enumerate(vertices, start=1)}
        edges = [(index[v], index[u]) for v in vertices for u in self.neighbors(v)
                 if u in index and index[v] < index[u]]
        return ExplicitGraph(len(vertices), edges=edges)

    def relabel(self, perm):
        """
        Graph with vertex v renamed perm[v-1].
        """
        return ExplicitGraph(self._n, edges=[(perm[u - 1], perm[v - 1]) for u, v in self.edges()])

    def to_csr(self):
        rows = [v for v, row in enumerate(self._adjacency) for _ in row]
        cols = [u - 1 for row in self._adjacency for u in row]
        data = np.ones(len(rows), dtype=np.int8)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self._n, self._n))

    def components(self):
        """
        Connected components as ascending vertex lists, ordered by their
        smallest vertex.
        """
        if self._n == 0:
            return []
        _, labels = csgraph.connected_components(self.to_csr(), directed=False)
        groups = {}
        for v, label in enumerate(labels, start=1):
            groups.setdefault(int(label), []).append(v)
        return sorted(groups.values(), key=lambda comp: comp[0])

    def __eq__(self, other):
        if not isinstance(other, ExplicitGraph):
            return NotImplemented
        return self._n == other._n and self._adjacency == other._adjacency

    def __hash__(self):
        return hash((self._n, self._adjacency))

    def __repr__(self):
        return 'ExplicitGraph(n=' + str(self._n) + ', edges=' + str(self.edges()) + ')'


def disjoint_union(graphs):
    """
    Disjoint union, vertices numbered consecutively in input order.
    """
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return ExplicitGraph(offset, edges=edges)


def empty_graph(n):
    return ExplicitGraph(n)

#endregion

#region Oracles

class OracleGraph:
    """
    Neighbor-query access to a graph of degree at most d. Subclasses
    implement _neighbor(v, j) returning the j-th neighbor in ascending
    order or None. The counter is safe to share between threads.
    """

    def __init__(self, n, d):
        self._n = int(n)
        self._d = int(d)
        self._queries = 0
        self._lock = threading.Lock()

    @property
    def n(self):
        return self._n

    @property
    def d(self):
        return self._d

    @property
    def queries(self):
        return self._queries

    def reset_queries(self):
        with self._lock:
            self._queries = 0

    def neighbor_query(self, v, j):
        """
        j-th neighbor of v (1-based, ascending order) or None.
        """
        if not 1 <= v <= self._n:
            raise ArgumentError('Query vertex ' + str(v) + ' outside 1..' + str(self._n))
        if not 1 <= j <= self._d:
            raise ArgumentError('Query port ' + str(j) + ' outside 1..' + str(self._d))
        with self._lock:
            self._queries += 1
        return self._neighbor(int(v), int(j))

    def _neighbor(self, v, j):
        raise NotImplementedError

    def neighbors(self, v):
        """
        All neighbors of v, via at most d queries.
        """
        found = []
        for j in range(1, self._d + 1):
            u = self.neighbor_query(v, j)
            if u is None:
                break
            found.append(u)
        return found

    def materialize(self):
        """
        Read the whole graph with at most n*d queries.
        """
        return ExplicitGraph(self._n, adjacency=[self.neighbors(v) for v in range(1, self._n + 1)])


class ExplicitOracle(OracleGraph):
    """
    Oracle over an ExplicitGraph. d defaults to the maximum degree.
    """

    def __init__(self, graph, d=None):
        if d is None:
            d = graph.max_degree()
        if graph.max_degree() > d:
            raise ArgumentError('Graph has degree ' + str(graph.max_degree()) +
                                ' above the oracle bound ' + str(d))
        super().__init__(graph.n, d)
        self._graph = graph

    @property
    def graph(self):
        return self._graph

    def _neighbor(self, v, j):
        row = self._graph.adjacency[v - 1]
        if j > len(row):
            return None
        return row[j - 1]

    def materialize(self):
        with self._lock:
            self._queries += self._n * self._d
        return self._graph

#endregion

#region Exploration

@dataclass(frozen=True)
class RootedBall:
    """
    Induced subgraph on all vertices within distance radius of the root,
    relabeled in BFS discovery order so that the root is vertex 1.
    ``vertices`` lists the original ids in that order.
    """
    graph: ExplicitGraph
    root: int
    radius: int
    vertices: tuple = field(default=())


def _bfs(g, v, radius=None, cap=None):
    """
    Breadth-first exploration through the oracle. Returns (order, edges)
    with edges among discovered vertices, or None if more than cap
    vertices get discovered.
    """
    dist = {v: 0}
    order = [v]
    edges = set()
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in dist:
                # every vertex at distance <= radius is known before any
                # vertex at distance radius is expanded
                if radius is not None and dist[u] >= radius:
                    continue
                dist[w] = dist[u] + 1
                order.append(w)
                if cap is not None and len(order) > cap:
                    return None
                queue.append(w)
            edges.add((min(u, w), max(u, w)))
    return order, edges


def explore_ball(g, v, r):
    """
    Rooted r-ball around v, explored through neighbor queries. Uses at
    most d queries per ball vertex.
    """
    if r < 0:
        raise ArgumentError('Radius must be nonnegative, got ' + str(r))
    if not 1 <= v <= g.n:
        raise ArgumentError('Vertex ' + str(v) + ' outside 1..' + str(g.n))
    order, edges = _bfs(g, v, radius=r)
    index = {u: i for i, u in enumerate(order, start=1)}
    ball = ExplicitGraph(len(order), edges=[(index[a], index[b]) for a, b in edges])
    return RootedBall(graph=ball, root=1, radius=r, vertices=tuple(order))


def component_of(g, v, cap, return_vertices=False):
    """
    Connected component of v, relabeled in BFS order with v first, or
    None when it has more than cap vertices.
    """
    if cap < 1:
        raise ArgumentError('Component cap must be at least 1.')
    if not 1 <= v <= g.n:
        raise ArgumentError('Vertex ' + str(v) + ' outside 1..' + str(g.n))
    found = _bfs(g, v, cap=cap)
    if found is None:
        return None
    order, edges = found
    index = {u: i for i, u in enumerate(order, start=1)}
    comp = ExplicitGraph(len(order), edges=[(index[a], index[b]) for a, b in edges])
    if return_vertices:
        return comp, tuple(order)
    return comp

#endregion

#region Membership and distance

@dataclass
class MembershipDiagnostics:
    passed: bool
    high_degree_vertices: list
    oversized_components: list

    def __bool__(self):
        return self.passed

    def summary(self):
        if self.passed:
            return 'PASS'
        return ('FAIL: ' + str(len(self.high_degree_vertices)) + ' vertices above degree bound, ' +
                str(len(self.oversized_components)) + ' oversized components')


def validate_membership(g, c, d):
    """
    Check that g lies in C^c_d: degree at most d, components of at most
    c vertices.
    """
    high = [v for v in range(1, g.n + 1) if g.degree(v) > d]
    oversized = [comp for comp in g.components() if len(comp) > c]
    result = MembershipDiagnostics(passed=(not high and not oversized),
                                   high_degree_vertices=high,
                                   oversized_components=oversized)
    if not result.passed:
        logger.debug('Membership check for C^' + str(c) + '_' + str(d) + ': ' + result.summary())
    return result


def _twin_classes(adj):
    """
    Label vertices so that two vertices share a label iff swapping them
    is an automorphism (equal neighborhoods apart from each other).
    """
    n = len(adj)
    label = list(range(n))
    for a in range(n):
        if label[a] != a:
            continue
        for b in range(a + 1, n):
            if label[b] == b and adj[a] - {b} == adj[b] - {a}:
                label[b] = a
    return label


def edit_distance(g1, g2, cap=10):
    """
    Minimum number of edge insertions and deletions turning g1 into a
    graph isomorphic to g2. Branch and bound over bijections; only meant
    for small test fixtures.
    """
    if g1.n != g2.n:
        raise ArgumentError('edit_distance needs equal vertex counts, got ' +
                            str(g1.n) + ' and ' + str(g2.n))
    check_guard(g1.n, cap, 'edit_distance_cap')
    n = g1.n
    if n == 0:
        return 0
    adj1 = [set(u - 1 for u in g1.neighbors(v)) for v in range(1, n + 1)]
    adj2 = [set(u - 1 for u in g2.neighbors(v)) for v in range(1, n + 1)]
    deg1 = sorted(len(a) for a in adj1)
    deg2 = sorted(len(a) for a in adj2)
    # each edit changes two degrees by one
    lower = (sum(abs(x - y) for x, y in zip(deg1, deg2)) + 1) // 2
    order = sorted(range(n), key=lambda v: -len(adj1[v]))
    twins = _twin_classes(adj2)
    best = [g1.num_edges() + g2.num_edges()]
    image = [None] * n
    used = [False] * n

    def search(pos, cost):
        if cost >= best[0] or best[0] == lower:
            return
        if pos == n:
            best[0] = cost
            return
        v = order[pos]
        tried = set()
        for w in range(n):
            if used[w] or twins[w] in tried:
                continue
            tried.add(twins[w])
            extra = 0
            for u in order[:pos]:
                if (u in adj1[v]) != (image[u] in adj2[w]):
                    extra += 1
            image[v] = w
            used[w] = True
            search(pos + 1, cost + extra)
            used[w] = False
            image[v] = None

    search(0, 0)
    return best[0]

#endregion

#region File formats

def read_graph_file(fname):
    """
    Read a graph from the text format (first line "n d", then "u v" per
    edge) or the JSON format {"n":..,"d":..,"edges":[[u,v],..]}. Returns
    (graph, d).
    """
    if not os.path.isfile(fname):
        raise ArgumentError('Graph file ' + fname + ' does not exist.')
    logger.info('Reading: ' + fname)
    with open(fname, 'r') as infile:
        text = infile.read()
    if text.lstrip().startswith('{'):
        try:
            data = json.loads(text)
            n, d, edges = int(data['n']), int(data['d']), data['edges']
        except (ValueError, KeyError, TypeError) as err:
            raise ArgumentError('Malformed JSON graph file ' + fname + ': ' + str(err))
    else:
        lines = [line.split() for line in text.splitlines()
                 if line.strip() and not line.lstrip().startswith('#')]
        if len(lines) == 0 or len(lines[0]) != 2:
            raise ArgumentError('Graph file ' + fname + ' must start with a line "n d".')
        try:
            n, d = int(lines[0][0]), int(lines[0][1])
            edges = [(int(words[0]), int(words[1])) for words in lines[1:]]
        except (ValueError, IndexError) as err:
            raise ArgumentError('Malformed edge line in ' + fname + ': ' + str(err))
    graph = ExplicitGraph(n, edges=edges)
    if graph.max_degree() > d:
        raise ArgumentError('Graph in ' + fname + ' has degree ' + str(graph.max_degree()) +
                            ' above declared bound ' + str(d))
    return graph, d


def write_graph_file(graph, d, fname, as_json=None):
    """
    Write a graph. JSON is used when as_json is True or the file name
    ends in .json.
    """
    if as_json is None:
        as_json = fname.endswith('.json')
    with open(fname, 'w') as outfile:
        if as_json:
            json.dump({'n': graph.n, 'd': int(d), 'edges': [list(e) for e in graph.edges()]},
                      outfile)
            outfile.write('\n')
        else:
            outfile.write(str(graph.n) + ' ' + str(d) + '\n')
            for u, v in graph.edges():
                outfile.write(str(u) + ' ' + str(v) + '\n')
    logger.info('Wrote graph with ' + str(graph.n) + ' vertices to ' + fname)
    return fname

#endregion
