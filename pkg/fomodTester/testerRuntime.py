"""
Constant-query testers built from compiled templates.

Each template is expanded into single-vector units. A unit splits the
component types into rare ones (exact required counts, rejected on
sight) and frequent ones (count >= k and congruent to a mod b). On
inputs larger than n0 a unit samples q vertices, types their components
through the oracle and accepts iff no rare type was seen and the
leftover vertex count is divisible by g. Smaller inputs are read
completely and decided exactly.

run_union amplifies every unit by majority vote and accepts when some
unit accepts.

Example:
    import numpy as np
    from fomodTester import hnfCompiler as hc, testerRuntime as tr
    units = tr.compile_tester(compiled, catalog, 0.1)
    verdict = tr.run_union(units, oracle, catalog, seed=1)
    print(verdict.decision, verdict.queries)
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Optional

import numpy as np

from .graphCore import component_of, explore_ball
from .hnfCompiler import CchvEntry, CchvTemplate, CompiledTemplates, template_satisfied
from .testerLogger import log_banner
from .typeCatalog import HistVector, chv, realize_chv
from .utilsErrors import ArgumentError, NotInClassError, check_guard
from .utilsNumTheory import conical_decompose, frobenius_multiple, gcd_many, lcm_many

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)


class Decision(Enum):
    ACCEPT = 'ACCEPT'
    REJECT = 'REJECT'
    NOT_IN_CLASS = 'NOT_IN_CLASS'


@dataclass(frozen=True)
class CompiledUnit:
    """
    Tester for one single-vector template.

    rare holds (type, required count) pairs, frequent holds (type, a, b)
    triples and k_values the least count >= k congruent to a mod b for
    each frequent type. g and F are None when there are no frequent
    types.
    """
    index: int
    template_index: int
    c: int
    d: int
    k: int
    epsilon: float
    rare: tuple
    frequent: tuple
    k_values: tuple
    g: Optional[int]
    F: Optional[int]
    lcm: int
    rare_budget: int
    fixed_budget: int
    n0: int
    q: int
    sizes: tuple

    @property
    def num_frequent(self):
        return len(self.frequent)

    @property
    def rare_types(self):
        return frozenset(t for t, _ in self.rare)

    def as_template(self):
        entries = [None] * len(self.sizes)
        for t, count in self.rare:
            entries[t] = (CchvEntry.exact(count),)
        for t, a, b in self.frequent:
            entries[t] = (CchvEntry.cong(a, b),)
        return CchvTemplate(self.k, tuple(entries))

    def n_prime(self, n):
        return n - self.rare_budget - self.fixed_budget

    def describe(self):
        return ('unit ' + str(self.index) + ' ' + self.as_template().describe() +
                ' q=' + str(self.q) + ' n0=' + str(self.n0) + ' g=' + str(self.g))

    def to_dict(self):
        return {
            'index': self.index,
            'template_index': self.template_index,
            'template': self.as_template().describe(),
            'rare': [list(x) for x in self.rare],
            'frequent': [list(x) for x in self.frequent],
            'k_values': list(self.k_values),
            'g': self.g,
            'F': self.F,
            'n0': self.n0,
            'q': self.q,
            'query_bound': query_bound(self),
        }


@dataclass
class TrialRecord:
    unit: int
    trial: int
    decision: Decision
    queries: int
    exact: bool = False
    rare_seen: int = None
    n_prime: int = None
    divisible: bool = None


@dataclass
class Verdict:
    decision: Decision
    seed: int
    trials: list = field(default_factory=list)
    unit_decisions: dict = field(default_factory=dict)

    @property
    def queries(self):
        return sum(t.queries for t in self.trials)

    def to_dict(self):
        return {
            'decision': self.decision.value,
            'seed': self.seed,
            'queries': self.queries,
            'units': {str(i): d.value for i, d in sorted(self.unit_decisions.items())},
            'trials': [{'unit': t.unit, 'trial': t.trial, 'decision': t.decision.value,
                        'queries': t.queries, 'exact': t.exact, 'rare_seen': t.rare_seen,
                        'n_prime': t.n_prime, 'divisible': t.divisible}
                       for t in self.trials],
        }


##############################################################
# Compilation
##############################################################

def sample_size(N, epsilon):
    """
    q = ceil(N^2 / (epsilon/2)^2 * ln(N + 40)).
    """
    return int(math.ceil(N ** 2 / (epsilon / 2.0) ** 2 * math.log(N + 40)))


def query_bound(unit):
    """
    Ceiling on the queries of one sampled run of a unit.
    """
    return unit.q * unit.d * (1 + unit.d ** unit.c)


def _build_unit(index, template_index, vector, k, catalog, epsilon, q, frobenius_guard):
    sizes = tuple(t.size for t in catalog.comp_types)
    rare, frequent, k_values = [], [], []
    for t, entry in enumerate(vector):
        if entry.kind == 'exact':
            rare.append((t, entry.value))
        else:
            a, b = entry.value, entry.modulus
            frequent.append((t, a, b))
            k_values.append(k + ((a - k) % b))
    rare_budget = sum(count * sizes[t] for t, count in rare)
    fixed_budget = sum(ki * sizes[t] for ki, (t, _, _) in zip(k_values, frequent))
    if frequent:
        weights = [b * sizes[t] for t, _, b in frequent]
        g = gcd_many(weights)
        F = frobenius_multiple(weights, guard=frobenius_guard)
        lcm = lcm_many([b for _, _, b in frequent])
    else:
        g, F, lcm = None, 0, 1
    d, c = catalog.d, catalog.c
    formula = (4.0 / epsilon) * (rare_budget + fixed_budget + F + lcm * (1 + d ** c) * q)
    n0 = int(math.ceil(max(formula, 3 * q * rare_budget)))
    return CompiledUnit(index=index, template_index=template_index, c=c, d=d, k=k,
                        epsilon=epsilon, rare=tuple(rare), frequent=tuple(frequent),
                        k_values=tuple(k_values), g=g, F=F, lcm=lcm, rare_budget=rare_budget,
                        fixed_budget=fixed_budget, n0=n0, q=q, sizes=sizes)


def compile_tester(compiled, catalog, epsilon, expansion_guard=10**4, frobenius_guard=10**6,
                   ball_count=None):
    """
    Expand compiled templates into single-vector units.

    Parameters
    ----------

    compiled : CompiledTemplates
        Output of hnfCompiler.compile_hnf or read_templates.

    catalog : TypeCatalog
        Catalog of the same C^c_d.

    epsilon : float
        Proximity parameter, 0 < epsilon <= 1.

    ball_count : int, optional
        Number of ball types used for the sample size in place of the
        catalog count N. Must be at least N.

    Returns
    -------

    tuple of CompiledUnit, in template order and then in position-major
    order of entry choices, without repeated vectors.
    """
    if not isinstance(compiled, CompiledTemplates):
        raise ArgumentError('compile_tester needs CompiledTemplates.')
    if not 0 < epsilon <= 1:
        raise ArgumentError('epsilon must be in (0, 1], got ' + str(epsilon))
    if (compiled.c, compiled.d) != (catalog.c, catalog.d):
        raise ArgumentError('Templates are for C^' + str(compiled.c) + '_' + str(compiled.d) +
                            ', catalog is for C^' + str(catalog.c) + '_' + str(catalog.d))

    log_banner(logger, 'Compiling tester, epsilon=' + str(epsilon))
    if ball_count is None:
        ball_count = catalog.N
    elif ball_count < catalog.N:
        raise ArgumentError('ball_count ' + str(ball_count) + ' is below the catalog count ' +
                            str(catalog.N))
    q = sample_size(ball_count, epsilon)
    units = []
    seen = set()
    for template_index, template in enumerate(compiled.templates):
        if len(template.entries) != catalog.M:
            raise ArgumentError('Template ' + str(template_index) + ' has ' +
                                str(len(template.entries)) + ' positions for ' +
                                str(catalog.M) + ' component types.')
        choices = 1
        for position in template.entries:
            choices *= len(position)
        check_guard(len(units) + choices, expansion_guard, 'expansion_guard',
                    'too many single-vector units')
        for vector in product(*template.entries):
            # templates may overlap; each vector is tested once
            if vector in seen:
                continue
            seen.add(vector)
            units.append(_build_unit(len(units), template_index, vector, compiled.k, catalog,
                                     epsilon, q, frobenius_guard))
    for unit in units:
        logger.info('... ' + unit.describe())
    return tuple(units)


##############################################################
# Sampling
##############################################################

def estimate_frequencies(g, r, s, rng, catalog):
    """
    Empirical ball distribution at radius r from s uniform vertex draws.
    Balls outside the catalog add to ``outside``; a positive outside
    mass means the input is not in C^c_d.
    """
    if s < 1:
        raise ArgumentError('Sample size must be at least 1.')
    counts = np.zeros(len(catalog.ball_types(r)), dtype=float)
    outside = 0
    for v in rng.integers(1, g.n + 1, size=s):
        index = catalog.ball_type_of(explore_ball(g, int(v), r))
        if index is None:
            outside += 1
        else:
            counts[index] += 1
    if outside:
        logger.warning(str(outside) + ' of ' + str(s) + ' sampled balls are not catalog types')
    return HistVector('bdv', r, counts / s, outside=outside / s)


def exact_decide(g, templates, catalog, n=None):
    """
    Read the whole graph and check every template. Raises
    NotInClassError when the graph is not in C^c_d.
    """
    if isinstance(templates, CompiledTemplates):
        templates = templates.templates
    if n is not None and n != g.n:
        raise ArgumentError('Declared size ' + str(n) + ' differs from the oracle size ' +
                            str(g.n))
    vector = chv(g.materialize(), catalog)
    return any(template_satisfied(vector, t) for t in templates)


def _trial(unit, g, catalog, rng, trial=0):
    n = g.n
    before = g.queries
    record = TrialRecord(unit=unit.index, trial=trial, decision=Decision.REJECT, queries=0)
    if n <= unit.n0:
        record.exact = True
        try:
            ok = exact_decide(g, [unit.as_template()], catalog)
            record.decision = Decision.ACCEPT if ok else Decision.REJECT
        except NotInClassError as err:
            logger.warning(str(err))
            record.decision = Decision.NOT_IN_CLASS
        record.queries = g.queries - before
        return record

    rare = unit.rare_types
    for v in rng.integers(1, n + 1, size=unit.q):
        component = component_of(g, int(v), cap=unit.c)
        t = None if component is None else catalog.comp_type_of(component)
        if t is None:
            logger.warning('Component of vertex ' + str(int(v)) + ' is not a type of C^' +
                           str(unit.c) + '_' + str(unit.d))
            record.decision = Decision.NOT_IN_CLASS
            record.queries = g.queries - before
            return record
        if t in rare:
            record.rare_seen = t
            record.queries = g.queries - before
            return record

    record.n_prime = unit.n_prime(n)
    if unit.num_frequent > 0:
        record.divisible = record.n_prime % unit.g == 0
        if record.divisible:
            record.decision = Decision.ACCEPT
    record.queries = g.queries - before
    return record


def trial_rng(seed, unit_index, trial):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(unit_index, trial)))


def run_single(unit, g, catalog, seed=0, trial=0):
    """
    One run of a unit: exact below n0, sampled above.
    """
    if g.n < 1:
        raise ArgumentError('run_single needs n >= 1.')
    record = _trial(unit, g, catalog, trial_rng(seed, unit.index, trial), trial)
    return Verdict(decision=record.decision, seed=seed, trials=[record],
                   unit_decisions={unit.index: record.decision})


def amplification_trials(num_units, c0=18):
    """
    T = ceil(c0 * ln(3 * units)).
    """
    return int(math.ceil(c0 * math.log(3 * num_units)))


def run_union(units, g, catalog, seed=0, c0=18, trials=None):
    """
    Majority vote of T trials per unit; ACCEPT iff some unit accepts.
    Exact-regime units run a single trial. Any NOT_IN_CLASS trial makes
    the verdict NOT_IN_CLASS.
    """
    if len(units) == 0:
        raise ArgumentError('run_union needs at least one unit.')
    if trials is None:
        trials = amplification_trials(len(units), c0)
    verdict = Verdict(decision=Decision.REJECT, seed=seed)
    for unit in units:
        this_trials = 1 if g.n <= unit.n0 else trials
        accepts = 0
        for trial in range(this_trials):
            record = _trial(unit, g, catalog, trial_rng(seed, unit.index, trial), trial)
            verdict.trials.append(record)
            if record.decision is Decision.NOT_IN_CLASS:
                verdict.decision = Decision.NOT_IN_CLASS
                verdict.unit_decisions[unit.index] = Decision.NOT_IN_CLASS
                return verdict
            if record.decision is Decision.ACCEPT:
                accepts += 1
        unit_decision = Decision.ACCEPT if 2 * accepts > this_trials else Decision.REJECT
        verdict.unit_decisions[unit.index] = unit_decision
        if unit_decision is Decision.ACCEPT:
            verdict.decision = Decision.ACCEPT
    logger.debug('Union verdict ' + verdict.decision.value + ' after ' +
                 str(verdict.queries) + ' queries')
    return verdict


##############################################################
# Members
##############################################################

def construct_member(unit, n, catalog, decompose_guard=10**7):
    """
    A graph on exactly n vertices whose chv matches the unit, or None.
    """
    if n < 0:
        raise ArgumentError('n must be nonnegative.')
    counts = [0] * catalog.M
    for t, count in unit.rare:
        counts[t] = count
    n_prime = unit.n_prime(n)
    if n_prime < 0:
        return None
    if unit.num_frequent == 0:
        return realize_chv(counts, catalog) if n_prime == 0 else None
    weights = [b * unit.sizes[t] for t, _, b in unit.frequent]
    coeffs = conical_decompose(n_prime, weights, guard=decompose_guard)
    if coeffs is None:
        return None
    for (t, _, b), ki, y in zip(unit.frequent, unit.k_values, coeffs):
        counts[t] = ki + y * b
    return realize_chv(counts, catalog)
