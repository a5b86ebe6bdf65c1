"""
Compilation of Hanf sentences over C^c_d into capped component
histogram templates.

The stages are

    unify_radius                 all atoms at radius c-1
    to_dnf                       (logicAst)
    unify_cap                    one cap k, no negations
    reduce_to_component_radius   unrealizable atoms removed, GEQ atoms
                                 of multi-orbit types split
    extract_templates            one template per satisfiable clause

Every stage preserves truth on all graphs of C^c_d. compile_hnf runs
them in order.

Example:
    from fomodTester import logicAst as la
    from fomodTester import hnfCompiler as hc
    h, catalog = la.read_hnf_file('psi.hnf.json')
    compiled = hc.compile_hnf(h, catalog)
    print(compiled.k, [t.describe() for t in compiled.templates])
"""

import json
import logging
import os
from dataclasses import dataclass
from itertools import product

from .logicAst import (And, BoolConst, DnfSentence, HanfAtom, Literal, Not, Or, conj, disj,
                       normalize_clauses, to_dnf)
from .testerLogger import log_banner
from .testerVersion import formatversion
from .typeCatalog import iter_chv_vectors, realize_chv, supertypes
from .utilsErrors import ArgumentError, InternalInvariantError, check_guard
from .utilsNumTheory import Congruence, crt_solve

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)


##############################################################
# Template values
##############################################################

@dataclass(frozen=True, order=True)
class CchvEntry:
    """
    EXACT p: count == p (p < k). CONG (j, l): count >= k and count = j
    mod l.
    """
    kind: str
    value: int
    modulus: int = 0

    @staticmethod
    def exact(p):
        return CchvEntry('exact', int(p))

    @staticmethod
    def cong(j, l):
        if l < 1 or not 0 <= j < l:
            raise ArgumentError('Congruence entry needs 0 <= j < l, got ' + str((j, l)))
        return CchvEntry('cong', int(j), int(l))

    def matches(self, count, k):
        if self.kind == 'exact':
            return count == self.value
        return count >= k and count % self.modulus == self.value

    def to_json(self):
        if self.kind == 'exact':
            return {'exact': self.value}
        return {'cong': [self.value, self.modulus]}

    @staticmethod
    def from_json(data):
        if 'exact' in data:
            return CchvEntry.exact(data['exact'])
        if 'cong' in data:
            return CchvEntry.cong(*data['cong'])
        raise ArgumentError('Template entry must have "exact" or "cong": ' + repr(data))

    def describe(self):
        if self.kind == 'exact':
            return str(self.value)
        return '(' + str(self.value) + ',' + str(self.modulus) + ')'


@dataclass(frozen=True)
class CchvTemplate:
    """
    Per component type, a nonempty set of admissible entries (stored as
    sorted tuples).
    """
    k: int
    entries: tuple

    def describe(self):
        parts = []
        for position in self.entries:
            if len(position) == 1:
                parts.append(position[0].describe())
            else:
                parts.append('{' + ','.join(e.describe() for e in position) + '}')
        return '(' + ', '.join(parts) + ')'


def template_satisfied(vector, template):
    """
    True when every component count matches some entry of its position.
    """
    entries = vector.entries if hasattr(vector, 'entries') else vector
    if len(entries) != len(template.entries):
        raise ArgumentError('chv has ' + str(len(entries)) + ' entries, template has ' +
                            str(len(template.entries)))
    return all(any(e.matches(int(count), template.k) for e in position)
               for count, position in zip(entries, template.entries))


@dataclass(frozen=True)
class CompiledTemplates:
    c: int
    d: int
    k: int
    catalog_hash: str
    templates: tuple

    def satisfied_by(self, vector):
        return any(template_satisfied(vector, t) for t in self.templates)

    def to_json(self):
        return {
            'format_version': formatversion,
            'c': self.c,
            'd': self.d,
            'k': self.k,
            'catalog_hash': self.catalog_hash,
            'templates': [{'entries': [[e.to_json() for e in position]
                                       for position in t.entries]}
                          for t in self.templates],
        }

    @staticmethod
    def from_json(data):
        try:
            k = int(data['k'])
            templates = tuple(
                CchvTemplate(k, tuple(tuple(sorted(CchvEntry.from_json(e) for e in position))
                                      for position in t['entries']))
                for t in data['templates'])
            return CompiledTemplates(int(data['c']), int(data['d']), k,
                                     str(data.get('catalog_hash', '')), templates)
        except (KeyError, TypeError, ValueError) as err:
            raise ArgumentError('Malformed templates JSON: ' + str(err))


def write_templates(compiled, fname):
    with open(fname, 'w') as outfile:
        json.dump(compiled.to_json(), outfile, indent=1, sort_keys=True)
        outfile.write('\n')
    logger.info('Wrote ' + str(len(compiled.templates)) + ' templates to ' + fname)
    return fname


def read_templates(fname, catalog=None):
    if not os.path.isfile(fname):
        raise ArgumentError('Templates file ' + fname + ' does not exist.')
    logger.info('Reading: ' + fname)
    with open(fname, 'r') as infile:
        try:
            compiled = CompiledTemplates.from_json(json.load(infile))
        except ValueError as err:
            raise ArgumentError('Malformed JSON in ' + fname + ': ' + str(err))
    if catalog is not None:
        if (catalog.c, catalog.d) != (compiled.c, compiled.d):
            raise ArgumentError('Templates are for C^' + str(compiled.c) + '_' + str(compiled.d))
        if compiled.catalog_hash and compiled.catalog_hash != catalog.catalog_hash():
            raise ArgumentError('Templates were compiled against a different catalog (hash ' +
                                compiled.catalog_hash + ')')
    return compiled


##############################################################
# Radius unification
##############################################################

def _geq_over(atom, supers, tuple_guard):
    """
    GEQ m over the supertypes: some tuple of per-supertype counts in
    {0..m-1, >=m} that sums to at least m (or has a >=m entry).
    """
    m = atom.m
    if m == 0:
        return BoolConst(True)
    if len(supers) == 0:
        return BoolConst(False)
    check_guard((m + 1) ** len(supers), tuple_guard, 'tuple_guard',
                'too many count tuples while unifying radius')
    R = supers[0].radius
    options = list(range(m)) + ['geq']
    disjuncts = []
    for counts in product(options, repeat=len(supers)):
        if 'geq' not in counts and sum(counts) < m:
            continue
        parts = []
        for this_count, tau in zip(counts, supers):
            if this_count == 'geq':
                parts.append(HanfAtom('geq', R, tau.index, m=m, code=tau.code))
            else:
                parts.append(HanfAtom('eq', R, tau.index, m=this_count, code=tau.code))
        disjuncts.append(conj(*parts))
    return disj(*disjuncts)


def _mod_over(atom, supers, tuple_guard):
    """
    MOD (j, l) over the supertypes: residue tuples summing to j mod l.
    """
    if len(supers) == 0:
        return BoolConst(atom.j == 0)
    check_guard(atom.l ** len(supers), tuple_guard, 'tuple_guard',
                'too many residue tuples while unifying radius')
    R = supers[0].radius
    disjuncts = []
    for residues in product(range(atom.l), repeat=len(supers)):
        if sum(residues) % atom.l != atom.j:
            continue
        disjuncts.append(conj(*[HanfAtom('mod', R, tau.index, j=b, l=atom.l, code=tau.code)
                                for b, tau in zip(residues, supers)]))
    return disj(*disjuncts)


def _unify_atom(atom, catalog, target, tuple_guard):
    if atom.radius >= catalog.span_radius and target == catalog.span_radius:
        # same spanning catalog, only the radius label changes
        return atom.with_radius(target, atom.ball)
    if atom.radius > target:
        raise ArgumentError('Atom radius ' + str(atom.radius) + ' above target radius ' +
                            str(target))
    if atom.radius == target:
        return atom
    if atom.ball is None:
        supers = []
    else:
        supers = supertypes(catalog, catalog.ball_types(atom.radius)[atom.ball], target)
    if atom.kind == 'geq':
        return _geq_over(atom, supers, tuple_guard)
    if atom.kind == 'mod':
        return _mod_over(atom, supers, tuple_guard)
    # exactly m = at least m and not at least m+1
    at_least = HanfAtom('geq', atom.radius, atom.ball, m=atom.m, code=atom.code)
    more = HanfAtom('geq', atom.radius, atom.ball, m=atom.m + 1, code=atom.code)
    return conj(_geq_over(at_least, supers, tuple_guard),
                Not(_geq_over(more, supers, tuple_guard)))


def unify_radius(h, catalog, target=None, tuple_guard=10**5):
    """
    Rewrite every atom of a Hanf tree to the target radius (default
    c-1) using supertype count tuples.
    """
    if target is None:
        target = catalog.span_radius
    if target > catalog.span_radius:
        raise ArgumentError('Target radius ' + str(target) + ' above c-1 = ' +
                            str(catalog.span_radius))
    if isinstance(h, HanfAtom):
        return _unify_atom(h, catalog, target, tuple_guard)
    if isinstance(h, BoolConst):
        return h
    if isinstance(h, Not):
        return Not(unify_radius(h.arg, catalog, target, tuple_guard))
    if isinstance(h, (And, Or)):
        args = [unify_radius(a, catalog, target, tuple_guard) for a in h.args]
        return conj(*args) if isinstance(h, And) else disj(*args)
    raise ArgumentError('Not a Hanf tree node: ' + repr(h))


##############################################################
# Cap unification
##############################################################

def _cap_of(dnf):
    """
    Common cap k of a DNF: the largest GEQ threshold, raised to m+1 for
    every EQ m atom. An exact count m is only expressible as a count
    class when m < k, since every count at or above k falls in one class.
    """
    k = 0
    for clause in dnf.clauses:
        for lit in clause:
            if lit.atom.kind == 'geq':
                k = max(k, lit.atom.m)
            elif lit.atom.kind == 'eq':
                k = max(k, lit.atom.m + 1)
    return max(k, 1)


def _eq(atom, m):
    return HanfAtom('eq', atom.radius, atom.ball, m=m, code=atom.code)


def _geq(atom, m):
    return HanfAtom('geq', atom.radius, atom.ball, m=m, code=atom.code)


def _cap_options(lit, k):
    """
    Positive atoms equivalent to one literal under cap k. An empty list
    means the literal is unsatisfiable, None means it always holds.
    """
    atom = lit.atom
    if atom.kind == 'geq':
        if not lit.negated:
            if atom.m == 0:
                return None
            return [_eq(atom, i) for i in range(atom.m, k)] + [_geq(atom, k)]
        return [_eq(atom, i) for i in range(atom.m)]
    if atom.kind == 'eq':
        if not lit.negated:
            return [atom]
        return [_eq(atom, i) for i in range(k) if i != atom.m] + [_geq(atom, k)]
    if not lit.negated:
        return [atom]
    return [HanfAtom('mod', atom.radius, atom.ball, j=i, l=atom.l, code=atom.code)
            for i in range(atom.l) if i != atom.j]


def unify_cap(dnf, clause_guard=10**5):
    """
    Returns (k, dnf') where k is the largest threshold and dnf' has only
    positive GEQ k, EQ m (m < k) and MOD atoms.
    """
    k = _cap_of(dnf)
    clauses = []
    for clause in dnf.clauses:
        expanded = [()]
        for lit in clause:
            options = _cap_options(lit, k)
            if options is None:
                continue
            check_guard(len(clauses) + len(expanded) * len(options), clause_guard,
                        'clause_guard', 'cap unification produces too many clauses')
            expanded = [prefix + (Literal(atom),) for prefix in expanded for atom in options]
        clauses.extend(expanded)
    result = DnfSentence(normalize_clauses(clauses), cap=k)
    logger.debug('Cap k=' + str(k) + ', ' + str(len(result.clauses)) + ' clauses')
    return k, result


##############################################################
# Component radius
##############################################################

def _unrealizable_value(atom):
    if atom.kind == 'geq':
        return atom.m == 0
    if atom.kind == 'eq':
        return atom.m == 0
    return atom.j == 0


def reduce_to_component_radius(dnf, catalog, k=None, clause_guard=10**5):
    """
    Drop unrealizable atoms (a type that never occurs has count 0) and
    split GEQ k atoms of types with rep > 1 into vertex counts that are
    exact below k*rep.
    """
    if k is None:
        k = dnf.cap if dnf.cap is not None else _cap_of(dnf)
    balls = catalog.ball_types(catalog.span_radius)
    clauses = []
    for clause in dnf.clauses:
        if any(lit.negated for lit in clause):
            raise ArgumentError('reduce_to_component_radius needs a cap-unified DNF.')
        expanded = [()]
        dead = False
        for lit in clause:
            atom = lit.atom
            if atom.ball is None:
                if _unrealizable_value(atom):
                    continue
                dead = True
                break
            if atom.radius < catalog.span_radius:
                raise ArgumentError('Atom ' + atom.describe() + ' is below radius c-1.')
            r = balls[atom.ball].rep
            if atom.kind == 'geq' and r > 1:
                options = [_eq(atom, i) for i in range(atom.m, atom.m * r)] + \
                          [_geq(atom, atom.m * r)]
            else:
                options = [atom]
            check_guard(len(clauses) + len(expanded) * len(options), clause_guard,
                        'clause_guard', 'component reduction produces too many clauses')
            expanded = [prefix + (Literal(a),) for prefix in expanded for a in options]
        if not dead:
            clauses.extend(expanded)
    return DnfSentence(normalize_clauses(clauses), cap=k)


##############################################################
# Templates
##############################################################

UNSAT = None


def clause_entry_sets(clause, catalog, k):
    """
    Admissible component counts per component type for one clause, as a
    tuple of sorted entry tuples, or UNSAT (None).
    """
    balls = catalog.ball_types(catalog.span_radius)
    exact, lower, congruences = {}, {}, {}
    for lit in clause:
        atom = lit.atom
        tau = balls[atom.ball]
        t, r = tau.underlying, tau.rep
        if atom.kind == 'eq':
            if atom.m % r != 0:
                return UNSAT
            exact.setdefault(t, set()).add(atom.m // r)
        elif atom.kind == 'geq':
            # vertex count >= m  <=>  component count >= ceil(m / rep)
            lower[t] = max(lower.get(t, 0), -(-atom.m // r))
        else:
            vertex_count = crt_solve([Congruence(atom.j, atom.l), Congruence(0, r)])
            if vertex_count is UNSAT:
                return UNSAT
            congruences.setdefault(t, []).append(
                Congruence(vertex_count.residue // r, vertex_count.modulus // r))

    result = []
    for t in range(catalog.M):
        mods = congruences.get(t)
        combined = crt_solve(mods) if mods else None
        if mods and combined is UNSAT:
            return UNSAT
        if t in exact and t in lower:
            return UNSAT
        if t in exact:
            if len(exact[t]) > 1:
                return UNSAT
            p = next(iter(exact[t]))
            if p >= k:
                raise InternalInvariantError('Exact component count ' + str(p) +
                                             ' not below cap ' + str(k))
            if combined is not None and not combined.holds(p):
                return UNSAT
            entries = [CchvEntry.exact(p)]
        elif t in lower:
            if lower[t] != k:
                raise InternalInvariantError('Lower bound ' + str(lower[t]) +
                                             ' on component count differs from cap ' + str(k))
            if combined is None:
                entries = [CchvEntry.cong(0, 1)]
            else:
                entries = [CchvEntry.cong(combined.residue, combined.modulus)]
        elif combined is not None:
            entries = [CchvEntry.exact(z) for z in range(k) if combined.holds(z)]
            entries.append(CchvEntry.cong(combined.residue, combined.modulus))
        else:
            entries = [CchvEntry.exact(z) for z in range(k)] + [CchvEntry.cong(0, 1)]
        result.append(tuple(sorted(entries)))
    return tuple(result)


def extract_templates(dnf, catalog, k=None):
    """
    One template per satisfiable clause, deduplicated, in clause order.
    """
    if k is None:
        k = dnf.cap if dnf.cap is not None else _cap_of(dnf)
    templates = []
    for clause in dnf.clauses:
        entries = clause_entry_sets(clause, catalog, k)
        if entries is UNSAT:
            logger.debug('... dropping unsatisfiable clause')
            continue
        template = CchvTemplate(k, entries)
        if template not in templates:
            templates.append(template)
    return k, tuple(templates)


def compile_hnf(h, catalog, clause_guard=10**5, tuple_guard=10**5):
    """
    Full pipeline from a Hanf tree to CompiledTemplates.
    """
    log_banner(logger, 'Compiling Hanf sentence over C^' + str(catalog.c) + '_' +
               str(catalog.d))
    unified = unify_radius(h, catalog, tuple_guard=tuple_guard)
    dnf = to_dnf(unified, guard=clause_guard)
    logger.info('... DNF has ' + str(len(dnf.clauses)) + ' clauses')
    k, capped = unify_cap(dnf, clause_guard=clause_guard)
    reduced = reduce_to_component_radius(capped, catalog, k, clause_guard=clause_guard)
    logger.info('... k = ' + str(k) + ', ' + str(len(reduced.clauses)) + ' reduced clauses')
    k, templates = extract_templates(reduced, catalog, k)
    logger.info('... ' + str(len(templates)) + ' templates')
    for template in templates:
        logger.info('... ... ' + template.describe())
    return CompiledTemplates(catalog.c, catalog.d, k, catalog.catalog_hash(), templates)


##############################################################
# Exhaustive checks
##############################################################

def check_equivalence(truth, compiled, catalog, max_n):
    """
    Compare a truth function on graphs with template satisfaction over
    every isomorphism class of C^c_d with at most max_n vertices. Returns
    the mismatching chv vectors.
    """
    mismatches = []
    for n in range(max_n + 1):
        for vector in iter_chv_vectors(catalog, n):
            expected = truth(realize_chv(vector, catalog))
            if expected != compiled.satisfied_by(vector):
                mismatches.append(vector)
    if mismatches:
        logger.warning('Template set disagrees on ' + str(len(mismatches)) + ' graphs, e.g. ' +
                       str(mismatches[0]))
    return mismatches
