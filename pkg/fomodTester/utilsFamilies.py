"""
Graph families for experiments and certified far fixtures.

Families are answered through implicit oracles: a ChvOracle lays out
blocks of identical components one after the other and computes every
neighbor query arithmetically, so EDGES on a million vertices costs
nothing to build.

Family strings look like NAME:key=value,... with vector values
separated by '/':

    EDGES:n=1000000
    EDGES_PLUS_VERTEX:n=1000001
    FROM_CHV:chv=1/3
    RANDOM_MIX:n=100,mix=1/2,seed=7
"""

import logging
from dataclasses import dataclass

import numpy as np

from .graphCore import ExplicitGraph, OracleGraph, edit_distance
from .hnfCompiler import CompiledTemplates
from .testerRuntime import compile_tester
from .typeCatalog import chv, iter_chv_vectors, realize_chv
from .utilsErrors import ArgumentError, ResourceGuardError

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)

FAMILY_NAMES = ['EDGES', 'EDGES_PLUS_VERTEX', 'FROM_CHV', 'RANDOM_MIX']

RANDOM_MIX_RETRIES = 100


#region Oracles

class ChvOracle(OracleGraph):
    """
    Disjoint union of blocks, each block holding ``count`` consecutive
    copies of one connected component.
    """

    def __init__(self, blocks, d, padded=0):
        blocks = [(graph, int(count)) for graph, count in blocks if int(count) > 0]
        for graph, count in blocks:
            if graph.n < 1:
                raise ArgumentError('Blocks need nonempty components.')
            if graph.max_degree() > d:
                raise ArgumentError('Block component has degree above ' + str(d))
        self._graphs = [graph for graph, _ in blocks]
        self._counts = np.array([count for _, count in blocks], dtype=np.int64)
        self._sizes = np.array([graph.n for graph in self._graphs], dtype=np.int64)
        self._starts = np.concatenate([[0], np.cumsum(self._sizes * self._counts)])
        self.padded = padded
        super().__init__(int(self._starts[-1]), d)

    @property
    def blocks(self):
        return list(zip(self._graphs, self._counts.tolist()))

    def _neighbor(self, v, j):
        b = int(np.searchsorted(self._starts, v - 1, side='right')) - 1
        size = int(self._sizes[b])
        offset = v - 1 - int(self._starts[b])
        base = v - (offset % size)
        row = self._graphs[b].adjacency[offset % size]
        if j > len(row):
            return None
        return base + row[j - 1] - 1

    def chv_vector(self, catalog):
        counts = np.zeros(catalog.M, dtype=np.int64)
        for graph, count in self.blocks:
            t = catalog.comp_type_of(graph)
            if t is None:
                raise ArgumentError('Block component is not a type of C^' + str(catalog.c) +
                                    '_' + str(catalog.d))
            counts[t] += count
        return counts

#endregion

#region Family specifications

@dataclass(frozen=True)
class FamilySpec:
    name: str
    n: int = None
    chv: tuple = None
    mix: tuple = None
    seed: int = 0

    def describe(self):
        parts = []
        if self.n is not None:
            parts.append('n=' + str(self.n))
        if self.chv is not None:
            parts.append('chv=' + '/'.join(str(x) for x in self.chv))
        if self.mix is not None:
            parts.append('mix=' + '/'.join(str(x) for x in self.mix))
        if self.name == 'RANDOM_MIX':
            parts.append('seed=' + str(self.seed))
        return self.name + (':' + ','.join(parts) if parts else '')


def _vector(text, cast):
    try:
        return tuple(cast(x) for x in text.split('/'))
    except ValueError:
        raise ArgumentError('Malformed vector value ' + repr(text))


def parse_family(text, n=None, chv_values=None, seed=None):
    """
    Parse NAME:key=value,... into a FamilySpec. Explicit keyword
    arguments override values in the string.
    """
    name, _, rest = str(text).partition(':')
    name = name.strip().upper()
    if name not in FAMILY_NAMES:
        raise ArgumentError('Unknown family ' + repr(name) + ', expected one of ' +
                            str(FAMILY_NAMES))
    params = {}
    for item in filter(None, (x.strip() for x in rest.split(','))):
        key, sep, value = item.partition('=')
        if not sep:
            raise ArgumentError('Family parameter ' + repr(item) + ' needs key=value')
        params[key.strip()] = value.strip()
    unknown = set(params) - {'n', 'chv', 'mix', 'seed'}
    if unknown:
        raise ArgumentError('Unknown family parameters ' + str(sorted(unknown)))
    try:
        this_n = int(params['n']) if 'n' in params else None
        this_seed = int(params.get('seed', 0))
    except ValueError as err:
        raise ArgumentError('Malformed family parameter: ' + str(err))
    this_chv = _vector(params['chv'], int) if 'chv' in params else None
    this_mix = _vector(params['mix'], float) if 'mix' in params else None
    if n is not None:
        this_n = int(n)
    if chv_values is not None:
        this_chv = tuple(int(x) for x in chv_values)
    if seed is not None:
        this_seed = int(seed)
    return FamilySpec(name, n=this_n, chv=this_chv, mix=this_mix, seed=this_seed)


def _edge():
    return ExplicitGraph(2, edges=[(1, 2)])


def _vertex():
    return ExplicitGraph(1)


def _random_mix_blocks(spec, catalog):
    if spec.n is None or spec.n < 0:
        raise ArgumentError('RANDOM_MIX needs n >= 0.')
    if spec.mix is None or len(spec.mix) != catalog.M:
        raise ArgumentError('RANDOM_MIX needs one mix weight per component type (' +
                            str(catalog.M) + ').')
    weights = np.array(spec.mix, dtype=float)
    if np.any(weights < 0) or weights.sum() <= 0:
        raise ArgumentError('RANDOM_MIX weights must be nonnegative and not all zero.')
    rng = np.random.default_rng(spec.seed)
    sizes = np.array([t.size for t in catalog.comp_types])
    chosen = []
    remaining = spec.n
    misses = 0
    while remaining > 0 and misses < RANDOM_MIX_RETRIES:
        t = int(rng.choice(catalog.M, p=weights / weights.sum()))
        if sizes[t] <= remaining:
            chosen.append(t)
            remaining -= sizes[t]
        else:
            misses += 1
    padded = 0
    while remaining > 0:
        fitting = [t for t in range(catalog.M) if sizes[t] <= remaining]
        t = min(fitting, key=lambda x: (sizes[x], x))
        chosen.append(t)
        remaining -= sizes[t]
        padded += 1
    if padded:
        logger.info('RANDOM_MIX padded ' + str(padded) + ' components')
    order = rng.permutation(len(chosen))
    return [(catalog.comp_types[chosen[i]].representative, 1) for i in order], padded


def gen_family(spec, catalog=None, d=None):
    """
    Implicit oracle for a family. FROM_CHV and RANDOM_MIX need a
    catalog; d defaults to the catalog's degree bound (or 1).
    """
    if d is None:
        d = catalog.d if catalog is not None else 1
    if spec.name == 'EDGES':
        if spec.n is None or spec.n < 0 or spec.n % 2 != 0:
            raise ArgumentError('EDGES needs an even n >= 0, got ' + str(spec.n))
        return ChvOracle([(_edge(), spec.n // 2)], d)
    if spec.name == 'EDGES_PLUS_VERTEX':
        if spec.n is None or spec.n < 1 or spec.n % 2 != 1:
            raise ArgumentError('EDGES_PLUS_VERTEX needs an odd n, got ' + str(spec.n))
        return ChvOracle([(_edge(), spec.n // 2), (_vertex(), 1)], d)
    if catalog is None:
        raise ArgumentError(spec.name + ' needs a type catalog.')
    if spec.name == 'FROM_CHV':
        if spec.chv is None or len(spec.chv) != catalog.M:
            raise ArgumentError('FROM_CHV needs one count per component type (' +
                                str(catalog.M) + ').')
        if min(spec.chv) < 0:
            raise ArgumentError('FROM_CHV counts must be nonnegative.')
        total = sum(count * t.size for count, t in zip(spec.chv, catalog.comp_types))
        if spec.n is not None and total != spec.n:
            raise ArgumentError('FROM_CHV vector realizes ' + str(total) + ' vertices, not ' +
                                str(spec.n))
        return ChvOracle([(t.representative, count)
                          for t, count in zip(catalog.comp_types, spec.chv)], d)
    blocks, padded = _random_mix_blocks(spec, catalog)
    return ChvOracle(blocks, d, padded=padded)

#endregion

#region Farness certificates

@dataclass(frozen=True)
class FarCertificate:
    """
    status is CERTIFIED (distance above epsilon*d*n), NOT_FAR (a member
    within the threshold exists) or UNKNOWN. distance is a lower bound
    on the edit distance for the analytic method, exact for the exact
    method, and None when no member of that size exists.
    """
    status: str
    method: str
    distance: int
    threshold: float

    @property
    def certified(self):
        return self.status == 'CERTIFIED'


def _degree_histograms(catalog):
    rows = []
    for t in catalog.comp_types:
        degrees = [t.representative.degree(v) for v in range(1, t.size + 1)]
        rows.append(np.bincount(degrees, minlength=catalog.d + 1)[:catalog.d + 1])
    return np.array(rows, dtype=np.int64)


def _unit_members(unit, n, guard):
    """
    Count vectors of every member of the unit on n vertices, as rows.
    """
    base = np.zeros(len(unit.sizes), dtype=np.int64)
    for t, count in unit.rare:
        base[t] = count
    for (t, _, _), ki in zip(unit.frequent, unit.k_values):
        base[t] = ki
    n_prime = unit.n_prime(n)
    if n_prime < 0:
        return np.zeros((0, len(base)), dtype=np.int64)
    if unit.num_frequent == 0:
        return base[None, :] if n_prime == 0 else np.zeros((0, len(base)), dtype=np.int64)
    weights = [b * unit.sizes[t] for t, _, b in unit.frequent]
    ys = []

    def fill(i, remaining, prefix):
        if len(ys) > guard:
            raise ResourceGuardError('member_enum_guard', guard)
        if i == len(weights) - 1:
            if remaining % weights[i] == 0:
                ys.append(prefix + [remaining // weights[i]])
            return
        for y in range(remaining // weights[i] + 1):
            fill(i + 1, remaining - y * weights[i], prefix + [y])

    fill(0, n_prime, [])
    if not ys:
        return np.zeros((0, len(base)), dtype=np.int64)
    steps = np.zeros((len(weights), len(base)), dtype=np.int64)
    for i, (t, _, b) in enumerate(unit.frequent):
        steps[i, t] = b
    return base[None, :] + np.array(ys, dtype=np.int64) @ steps


def _analytic_bound(vector, units, n, catalog, guard):
    """
    Half the earth mover's distance between the degree histogram of the
    graph and the closest member histogram, rounded up. None when no
    member on n vertices exists.
    """
    degree_hist = _degree_histograms(catalog)
    target = np.asarray(vector, dtype=np.int64) @ degree_hist
    best = None
    for unit in units:
        members = _unit_members(unit, n, guard)
        if len(members) == 0:
            continue
        diff = np.cumsum(members @ degree_hist - target[None, :], axis=1)
        emd = int(np.abs(diff).sum(axis=1).min())
        best = emd if best is None else min(best, emd)
    if best is None:
        return None
    return (best + 1) // 2


def certify_far(oracle, compiled, catalog, epsilon, edit_distance_cap=10,
                member_enum_guard=10**6):
    """
    Certify that a family graph is epsilon-far from the compiled
    property: analytic bound first, exact edit distance for small n,
    UNKNOWN otherwise.
    """
    if not isinstance(compiled, CompiledTemplates):
        raise ArgumentError('certify_far needs CompiledTemplates.')
    n = oracle.n
    threshold = epsilon * catalog.d * n
    if isinstance(oracle, ChvOracle):
        vector = oracle.chv_vector(catalog)
    else:
        vector = chv(oracle.materialize(), catalog).entries

    if compiled.satisfied_by(vector):
        return FarCertificate('NOT_FAR', 'member', 0, threshold)

    units = compile_tester(compiled, catalog, max(min(epsilon, 1.0), 1e-6))
    try:
        bound = _analytic_bound(vector, units, n, catalog, member_enum_guard)
        if bound is None or bound > threshold:
            logger.info('Certified far by degree histograms: bound ' + str(bound) +
                        ' > ' + str(threshold))
            return FarCertificate('CERTIFIED', 'analytic', bound, threshold)
    except ResourceGuardError:
        logger.warning('Too many members to enumerate for the analytic certificate')

    if n <= edit_distance_cap:
        graph = realize_chv(vector, catalog)
        members = [m for m in iter_chv_vectors(catalog, n) if compiled.satisfied_by(m)]
        distances = [edit_distance(graph, realize_chv(m, catalog), cap=edit_distance_cap)
                     for m in members]
        distance = min(distances) if distances else None
        if distance is None or distance > threshold:
            return FarCertificate('CERTIFIED', 'exact', distance, threshold)
        return FarCertificate('NOT_FAR', 'exact', distance, threshold)
    return FarCertificate('UNKNOWN', 'none', None, threshold)

#endregion
