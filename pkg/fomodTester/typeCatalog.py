"""
Isomorphism types of the bounded graph class C^c_d.

Component types are the connected graphs with at most c vertices and
maximum degree d, up to isomorphism. Ball types are rooted balls that
occur around some vertex of a graph in C^c_d. At radius c-1 (and above)
a ball spans its whole component, so every such ball type has an
underlying component type and a repetition count rep = number of
vertices of the component whose ball has that type.

Types are identified by canonical codes and listed in (size, code)
order, which fixes the vector indices used everywhere else.

Example:
    from fomodTester import typeCatalog as tc
    catalog = tc.TypeCatalog(3, 2)
    for this_type in catalog.comp_types:
        print(this_type.index, this_type.size, this_type.representative.edges())
"""

import hashlib
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graphCore import (ExplicitGraph, ExplicitOracle, RootedBall, disjoint_union,
                        explore_ball, validate_membership)
from .testerLogger import log_banner
from .testerVersion import formatversion
from .utilsErrors import (ArgumentError, InputInconsistencyError, NotInClassError,
                          check_guard)

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)


##############################################################
# Canonical codes
##############################################################

def _refine(adj, colors):
    """
    Color refinement. New colors are ranks of (old color, sorted neighbor
    colors) signatures, so the result only depends on the isomorphism
    class of the colored graph.
    """
    n_colors = len(set(colors))
    while True:
        signatures = [(colors[v], tuple(sorted(colors[u] for u in adj[v])))
                      for v in range(len(adj))]
        ranks = {sig: i for i, sig in enumerate(sorted(set(signatures)))}
        colors = [ranks[sig] for sig in signatures]
        if len(ranks) == n_colors:
            return colors
        n_colors = len(ranks)


def _individualize(colors, v):
    keyed = [(colors[w], 0 if w == v else 1) for w in range(len(colors))]
    ranks = {key: i for i, key in enumerate(sorted(set(keyed)))}
    return [ranks[key] for key in keyed]


def _leaf_bits(adj, colors):
    order = sorted(range(len(adj)), key=lambda v: colors[v])
    return tuple(1 if order[j] in adj[order[i]] else 0
                 for i in range(len(order)) for j in range(i + 1, len(order)))


@lru_cache(maxsize=2**16)
def _canonical_code_cached(n, edges, root):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u - 1].add(v - 1)
        adj[v - 1].add(u - 1)
    colors = [1] * n
    if root is not None:
        colors[root - 1] = 0
    colors = _refine(adj, colors)
    best = [None]

    # individualization-refinement; the search tree is isomorphism
    # invariant, so the smallest leaf code is canonical
    def search(colors):
        if len(set(colors)) == n:
            bits = _leaf_bits(adj, colors)
            if best[0] is None or bits < best[0]:
                best[0] = bits
            return
        counts = {}
        for col in colors:
            counts[col] = counts.get(col, 0) + 1
        target = min(col for col, cnt in counts.items() if cnt > 1)
        for v in range(n):
            if colors[v] == target:
                search(_refine(adj, _individualize(colors, v)))

    search(colors)
    packed = np.packbits(np.array(best[0], dtype=np.uint8)).tobytes() if best[0] else b''
    return bytes([n, 0 if root is None else 1]) + packed


def canonical_code(g, root=None, cap=8):
    """
    Canonical code of g, rooted at ``root`` when given. Equal codes mean
    (root-preserving) isomorphic graphs. The root is always placed first.

    Parameters
    ----------

    g : ExplicitGraph

    root : int or None
        Vertex to pin, or None for an unrooted code.

    cap : int
        Largest vertex count handled.
    """
    check_guard(g.n, cap, 'canonical_cap', 'graph too large to canonicalize')
    if root is not None and not 1 <= root <= g.n:
        raise ArgumentError('Root ' + str(root) + ' outside 1..' + str(g.n))
    return _canonical_code_cached(g.n, tuple(g.edges()), root)


def code_to_hex(code):
    return code.hex()


def code_from_hex(text):
    try:
        return bytes.fromhex(text)
    except ValueError:
        raise ArgumentError('Not a hex canonical code: ' + str(text))


def code_to_graph(code):
    """
    Rebuild (graph, root) from a canonical code. The root, if any, is
    vertex 1.
    """
    n, rooted = code[0], code[1]
    bits = np.unpackbits(np.frombuffer(code[2:], dtype=np.uint8)) if n > 1 else []
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    edges = [pair for pair, bit in zip(pairs, bits) if bit]
    return ExplicitGraph(n, edges=edges), (1 if rooted else None)


##############################################################
# Types
##############################################################

@dataclass(frozen=True)
class CompType:
    index: int
    code: bytes
    size: int
    representative: ExplicitGraph


@dataclass(frozen=True)
class BallType:
    """
    Rooted ball type at a radius. ``underlying`` and ``rep`` are set for
    spanning balls (radius >= c-1) only.
    """
    index: int
    code: bytes
    radius: int
    representative: RootedBall
    underlying: int = None
    rep: int = None

    @property
    def size(self):
        return self.representative.graph.n


@dataclass(eq=False)
class HistVector:
    """
    Histogram over a catalog's types. kind is 'bhv', 'bdv' or 'chv';
    param is the radius (bhv, bdv) or the size bound c (chv). For sampled
    bdv vectors ``outside`` is the mass of balls not in the catalog.
    """
    kind: str
    param: int
    entries: np.ndarray
    outside: float = 0.0

    def total(self):
        return self.entries.sum()

    def l1_distance(self, other):
        if len(self.entries) != len(other.entries):
            raise ArgumentError('Histogram vectors have different lengths.')
        return float(np.abs(np.asarray(self.entries, dtype=float) -
                            np.asarray(other.entries, dtype=float)).sum())

    def as_tuple(self):
        return tuple(int(x) for x in self.entries)


def _ball_around(graph, v, r):
    return explore_ball(ExplicitOracle(graph), v, r)


def enumerate_component_types(c, d, cap=8, guard=10**4):
    """
    All connected graphs on at most c vertices with degree at most d, up
    to isomorphism, sorted by (size, code).

    Graphs of size s come from graphs of size s-1 by adding a vertex
    joined to a nonempty set of at most d vertices that still have spare
    degree; every connected graph arises this way by removing a leaf of
    a spanning tree.
    """
    if c < 1 or d < 0:
        raise ArgumentError('Need c >= 1 and d >= 0, got c=' + str(c) + ', d=' + str(d))
    check_guard(c, cap, 'canonical_cap', 'component size bound above canonicalization cap')

    found = {}
    level = [ExplicitGraph(1)]
    found[canonical_code(level[0], cap=cap)] = level[0]
    for size in range(2, c + 1):
        next_level = []
        for g in level:
            spare = [v for v in range(1, g.n + 1) if g.degree(v) < d]
            for k in range(1, min(d, len(spare)) + 1):
                for subset in itertools.combinations(spare, k):
                    h = ExplicitGraph(size, edges=g.edges() + [(u, size) for u in subset])
                    code = canonical_code(h, cap=cap)
                    if code not in found:
                        found[code] = h
                        next_level.append(h)
                        check_guard(len(found), guard, 'type_guard',
                                    'too many component types; use smaller c or d')
        level = next_level

    ordered = sorted(found.items(), key=lambda item: (item[1].n, item[0]))
    return [CompType(index=i, code=code, size=g.n, representative=g)
            for i, (code, g) in enumerate(ordered)]


def enumerate_ball_types(comp_types, radius, spanning, cap=8):
    """
    Rooted balls of the given radius around every vertex of every
    component type, deduplicated and sorted by (size, code). When
    spanning is True the balls cover their components and carry
    underlying type and rep.
    """
    found = {}
    for this_type in comp_types:
        h = this_type.representative
        for v in range(1, h.n + 1):
            ball = _ball_around(h, v, radius)
            code = canonical_code(ball.graph, root=1, cap=cap)
            if code not in found:
                found[code] = [ball, this_type.index, 0]
            found[code][2] += 1

    ordered = sorted(found.items(), key=lambda item: (item[1][0].graph.n, item[0]))
    result = []
    for i, (code, (ball, underlying, count)) in enumerate(ordered):
        rooted = RootedBall(graph=ball.graph, root=1, radius=radius,
                            vertices=tuple(range(1, ball.graph.n + 1)))
        if spanning:
            result.append(BallType(i, code, radius, rooted, underlying=underlying, rep=count))
        else:
            result.append(BallType(i, code, radius, rooted))
    return result


class TypeCatalog:
    """
    Component and ball types of C^c_d with stable indices.
    """

    def __init__(self, c, d, canonical_cap=8, type_guard=10**4):
        self.c = int(c)
        self.d = int(d)
        self.canonical_cap = canonical_cap

        log_banner(logger, 'Building type catalog for C^' + str(c) + '_' + str(d))

        self.comp_types = enumerate_component_types(self.c, self.d, cap=canonical_cap,
                                                    guard=type_guard)
        self._comp_index = {t.code: t.index for t in self.comp_types}
        self._ball_types = {}
        self._ball_index = {}
        self.span_radius = self.c - 1
        self._build_radius(self.span_radius)

        logger.info('... ' + str(len(self.comp_types)) + ' component types')
        logger.info('... ' + str(len(self.ball_types(self.span_radius))) +
                    ' ball types at radius ' + str(self.span_radius))

    def _build_radius(self, r):
        balls = enumerate_ball_types(self.comp_types, r, spanning=(r >= self.span_radius),
                                     cap=self.canonical_cap)
        self._ball_types[r] = balls
        self._ball_index[r] = {b.code: b.index for b in balls}

    def _radius_key(self, r):
        if r < 0:
            raise ArgumentError('Radius must be nonnegative, got ' + str(r))
        # balls of radius >= c-1 span their components
        return min(int(r), self.span_radius)

    @property
    def M(self):
        return len(self.comp_types)

    @property
    def N(self):
        """
        Operational N(c,d): number of spanning ball types.
        """
        return len(self._ball_types[self.span_radius])

    def ball_types(self, r=None):
        if r is None:
            r = self.span_radius
        key = self._radius_key(r)
        if key not in self._ball_types:
            self._build_radius(key)
        return self._ball_types[key]

    def comp_index(self, code):
        return self._comp_index.get(code)

    def ball_index(self, r, code):
        key = self._radius_key(r)
        self.ball_types(key)
        return self._ball_index[key].get(code)

    def comp_type_of(self, component):
        """
        Index of an explicit connected graph's type, or None.
        """
        if component.n > self.c or component.max_degree() > self.d:
            return None
        return self.comp_index(canonical_code(component, cap=self.canonical_cap))

    def ball_type_of(self, ball):
        """
        Index of an explored RootedBall's type at its radius, or None.
        """
        if ball.graph.n > self.canonical_cap:
            return None
        return self.ball_index(ball.radius,
                               canonical_code(ball.graph, root=ball.root, cap=self.canonical_cap))

    def catalog_hash(self):
        digest = hashlib.sha256()
        digest.update(('c=' + str(self.c) + ';d=' + str(self.d) + ';').encode())
        for t in self.comp_types:
            digest.update(b'T' + t.code)
        for b in self.ball_types():
            digest.update(b'B' + b.code)
        return digest.hexdigest()[:16]

    def to_json(self):
        return {
            'format_version': formatversion,
            'c': self.c,
            'd': self.d,
            'catalog_hash': self.catalog_hash(),
            'component_types': [
                {'index': t.index, 'size': t.size, 'code': code_to_hex(t.code),
                 'edges': [list(e) for e in t.representative.edges()]}
                for t in self.comp_types],
            'ball_types': [
                {'index': b.index, 'radius': b.radius, 'size': b.size,
                 'code': code_to_hex(b.code),
                 'edges': [list(e) for e in b.representative.graph.edges()],
                 'root': b.representative.root, 'rep': b.rep, 'underlying': b.underlying}
                for b in self.ball_types()],
        }


##############################################################
# Operations on types
##############################################################

def rep(tau):
    if tau.rep is None:
        raise ArgumentError('rep is only defined for spanning ball types.')
    return tau.rep


def supertypes(catalog, tau, R):
    """
    Ball types at radius R whose radius-r restriction (r = tau.radius)
    is tau.
    """
    if tau.radius > R:
        raise ArgumentError('Target radius ' + str(R) + ' below the type radius ' +
                            str(tau.radius))
    result = []
    for candidate in catalog.ball_types(R):
        inner = _ball_around(candidate.representative.graph, candidate.representative.root,
                             tau.radius)
        if canonical_code(inner.graph, root=1, cap=catalog.canonical_cap) == tau.code:
            result.append(candidate)
    return result


def chv(g, catalog):
    """
    Component histogram vector of an explicit graph in C^c_d.
    """
    diagnostics = validate_membership(g, catalog.c, catalog.d)
    if not diagnostics.passed:
        raise NotInClassError('Graph is not in C^' + str(catalog.c) + '_' + str(catalog.d) +
                              ': ' + diagnostics.summary(), diagnostics)
    counts = np.zeros(catalog.M, dtype=np.int64)
    for comp in g.components():
        counts[catalog.comp_type_of(g.induced_subgraph(comp))] += 1
    return HistVector('chv', catalog.c, counts)


def bhv(g, r, catalog):
    """
    Ball histogram vector at radius r, indexed by catalog.ball_types(r).
    """
    oracle = ExplicitOracle(g, d=max(catalog.d, g.max_degree()))
    counts = np.zeros(len(catalog.ball_types(r)), dtype=np.int64)
    for v in range(1, g.n + 1):
        index = catalog.ball_type_of(explore_ball(oracle, v, r))
        if index is None:
            raise NotInClassError('Ball around vertex ' + str(v) + ' is not a catalog type.')
        counts[index] += 1
    return HistVector('bhv', r, counts)


def bhv_to_chv(vector, catalog):
    """
    Convert an exact spanning-radius ball histogram to a component
    histogram: for each component type pick the ball type of its first
    vertex and divide that type's count by its repetition.
    """
    if vector.kind != 'bhv' or vector.param < catalog.span_radius:
        raise ArgumentError('bhv_to_chv needs an exact bhv at radius >= c-1.')
    balls = catalog.ball_types(vector.param)
    counts = np.zeros(catalog.M, dtype=np.int64)
    for t in catalog.comp_types:
        ball = _ball_around(t.representative, 1, vector.param)
        i = catalog.ball_index(vector.param,
                               canonical_code(ball.graph, root=1, cap=catalog.canonical_cap))
        quotient, remainder = divmod(int(vector.entries[i]), balls[i].rep)
        if remainder != 0:
            raise InputInconsistencyError('Ball count ' + str(int(vector.entries[i])) +
                                          ' not divisible by rep ' + str(balls[i].rep))
        counts[t.index] = quotient
    return HistVector('chv', catalog.c, counts)


def realize_chv(vector, catalog):
    """
    Disjoint union with vector[t] copies of each component type, in
    catalog order.
    """
    entries = vector.entries if isinstance(vector, HistVector) else vector
    if len(entries) != catalog.M:
        raise ArgumentError('chv has ' + str(len(entries)) + ' entries for ' +
                            str(catalog.M) + ' component types.')
    parts = []
    for t, count in zip(catalog.comp_types, entries):
        if count < 0:
            raise ArgumentError('chv entries must be nonnegative.')
        parts.extend([t.representative] * int(count))
    return disjoint_union(parts)


def iter_chv_vectors(catalog, n):
    """
    Every chv with sum(chv[t]*|t|) == n, i.e. every isomorphism class of
    C^c_d on n vertices.
    """
    sizes = [t.size for t in catalog.comp_types]

    def fill(i, remaining):
        if i == len(sizes):
            if remaining == 0:
                yield ()
            return
        for count in range(remaining // sizes[i] + 1):
            for rest in fill(i + 1, remaining - count * sizes[i]):
                yield (count,) + rest

    yield from fill(0, n)
