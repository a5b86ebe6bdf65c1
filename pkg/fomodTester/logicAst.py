"""
First-order logic with modulo counting over graphs.

Sentence syntax (whitespace is free):

    exists x (...)        forall x (...)
    exists>=3 x (...)     exists=2 x (...)     exists[1 mod 2] x (...)
    E(x,y)   x = y   x != y   true   false
    !A   A & B   A | B   A -> B   ( A )

Precedence from loosest to tightest is ->, |, &, then negation and
quantifiers. The parser is built with ply.

Hanf sentences are Boolean trees (And, Or, Not, BoolConst) whose leaves
are HanfAtom values counting vertices by the isomorphism type of their
r-ball.
"""

import json
import logging
import os
from dataclasses import dataclass
from itertools import product

import ply.lex as lex
import ply.yacc as yacc

from .graphCore import ExplicitGraph
from .typeCatalog import TypeCatalog, bhv, canonical_code, code_from_hex
from .utilsErrors import ArgumentError, SentenceParseError, check_guard

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)


##############################################################
# Abstract syntax
##############################################################

@dataclass(frozen=True)
class Edge:
    x: str
    y: str


@dataclass(frozen=True)
class Equal:
    x: str
    y: str


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


QUANTIFIER_KINDS = ('exists', 'forall', 'geq', 'eq', 'mod')


@dataclass(frozen=True)
class Quantifier:
    """
    kind is one of exists, forall, geq (at least m), eq (exactly m) or
    mod (count = j mod l).
    """
    kind: str
    var: str
    body: object
    m: int = 0
    j: int = 0
    l: int = 1


HANF_KINDS = ('geq', 'eq', 'mod')


@dataclass(frozen=True)
class HanfAtom:
    """
    Counts vertices whose radius-``radius`` ball has the catalog type
    ``ball`` (an index into catalog.ball_types(radius)). ``ball`` is None
    for types that do not occur in C^c_d; ``code`` is the canonical code
    either way.
    """
    kind: str
    radius: int
    ball: object
    m: int = 0
    j: int = 0
    l: int = 1
    code: bytes = None

    def __post_init__(self):
        if self.kind not in HANF_KINDS:
            raise ArgumentError('Unknown Hanf atom kind ' + str(self.kind))
        if self.radius < 0 or self.m < 0:
            raise ArgumentError('Hanf atom radius and threshold must be nonnegative.')
        if self.l < 1 or not 0 <= self.j < self.l:
            raise ArgumentError('Hanf atom needs 0 <= j < l, got j=' + str(self.j) +
                                ', l=' + str(self.l))

    def holds_for(self, count):
        if self.kind == 'geq':
            return count >= self.m
        if self.kind == 'eq':
            return count == self.m
        return count % self.l == self.j

    def with_radius(self, radius, ball):
        return HanfAtom(self.kind, radius, ball, self.m, self.j, self.l, self.code)

    def describe(self):
        if self.kind == 'mod':
            head = 'MOD(' + str(self.j) + ',' + str(self.l) + ')'
        else:
            head = self.kind.upper() + str(self.m)
        target = '#' + str(self.ball) if self.ball is not None else 'unrealizable'
        return head + '[r=' + str(self.radius) + ',' + target + ']'


@dataclass(frozen=True)
class Literal:
    atom: HanfAtom
    negated: bool = False

    def describe(self):
        return ('!' if self.negated else '') + self.atom.describe()


@dataclass(frozen=True)
class DnfSentence:
    """
    Disjunction of clauses, each a conjunction of literals. ``cap`` is the
    k fixed by cap unification, None before it.
    """
    clauses: tuple
    cap: int = None

    def describe(self):
        if len(self.clauses) == 0:
            return 'false'
        return ' | '.join('(' + ' & '.join(lit.describe() for lit in clause) + ')'
                          if clause else 'true' for clause in self.clauses)


def _flatten(cls, parts):
    args = []
    for part in parts:
        if isinstance(part, cls):
            args.extend(part.args)
        else:
            args.append(part)
    return cls(tuple(args))


def conj(*parts):
    return _flatten(And, parts)


def disj(*parts):
    return _flatten(Or, parts)


##############################################################
# Parser
##############################################################

class SentenceParser:
    """
    ply lexer and LALR parser for the sentence grammar.
    """

    reserved = {
        'exists': 'EXISTS',
        'forall': 'FORALL',
        'E': 'EDGE',
        'true': 'TRUE',
        'false': 'FALSE',
    }

    tokens = (
        'EXISTS_GEQ', 'EXISTS_EQ', 'EXISTS_MOD', 'VAR',
        'EXISTS', 'FORALL', 'EDGE', 'TRUE', 'FALSE',
        'LPAREN', 'RPAREN', 'COMMA', 'AND', 'OR', 'NOT', 'NEQ', 'EQUALS', 'IMPLIES',
    )

    t_ignore = ' \t\r\n'
    t_LPAREN = r'\('
    t_RPAREN = r'\)'
    t_COMMA = r','
    t_AND = r'&'
    t_OR = r'\|'
    t_IMPLIES = r'->'
    t_NEQ = r'!='
    t_NOT = r'!'
    t_EQUALS = r'='

    # counting quantifiers must be tried before plain identifiers
    def t_EXISTS_GEQ(self, t):
        r'exists\s*>=\s*\d+'
        t.value = ('geq', int(t.value.split('>=')[1]))
        return t

    def t_EXISTS_EQ(self, t):
        r'exists\s*=\s*\d+'
        t.value = ('eq', int(t.value.split('=')[1]))
        return t

    def t_EXISTS_MOD(self, t):
        r'exists\s*\[\s*\d+\s+mod\s+\d+\s*\]'
        words = t.value[t.value.index('[') + 1:t.value.index(']')].split()
        t.value = ('mod', int(words[0]), int(words[2]))
        return t

    def t_VAR(self, t):
        r'[A-Za-z_][A-Za-z0-9_]*'
        t.type = self.reserved.get(t.value, 'VAR')
        return t

    def t_error(self, t):
        raise SentenceParseError('Illegal character ' + repr(t.value[0]), t.lexpos)

    precedence = (
        ('right', 'IMPLIES'),
        ('left', 'OR'),
        ('left', 'AND'),
        ('right', 'NOT'),
    )

    start = 'formula'

    def p_formula_implies(self, p):
        'formula : formula IMPLIES formula'
        p[0] = disj(Not(p[1]), p[3])

    def p_formula_or(self, p):
        'formula : formula OR formula'
        p[0] = disj(p[1], p[3])

    def p_formula_and(self, p):
        'formula : formula AND formula'
        p[0] = conj(p[1], p[3])

    def p_formula_not(self, p):
        'formula : NOT formula'
        p[0] = Not(p[2])

    def p_formula_quantifier(self, p):
        'formula : quantifier VAR formula %prec NOT'
        spec = p[1]
        if spec[0] == 'mod':
            _, j, l = spec
            if l < 1 or j >= l:
                raise SentenceParseError('Malformed modulus [' + str(j) + ' mod ' + str(l) +
                                         '], need 0 <= j < l', p.lexpos(2))
            p[0] = Quantifier('mod', p[2], p[3], j=j, l=l)
        elif spec[0] in ('geq', 'eq'):
            p[0] = Quantifier(spec[0], p[2], p[3], m=spec[1])
        else:
            p[0] = Quantifier(spec[0], p[2], p[3])

    def p_quantifier_plain(self, p):
        '''quantifier : EXISTS
                      | FORALL'''
        p[0] = (p[1],)

    def p_quantifier_counting(self, p):
        '''quantifier : EXISTS_GEQ
                      | EXISTS_EQ
                      | EXISTS_MOD'''
        p[0] = p[1]

    def p_formula_paren(self, p):
        'formula : LPAREN formula RPAREN'
        p[0] = p[2]

    def p_formula_edge(self, p):
        'formula : EDGE LPAREN varlist RPAREN'
        if len(p[3]) != 2:
            raise SentenceParseError('E expects 2 arguments, got ' + str(len(p[3])), p.lexpos(1))
        p[0] = Edge(p[3][0], p[3][1])

    def p_varlist(self, p):
        '''varlist : VAR
                   | varlist COMMA VAR'''
        if len(p) == 2:
            p[0] = [p[1]]
        else:
            p[0] = p[1] + [p[3]]

    def p_formula_equal(self, p):
        '''formula : VAR EQUALS VAR
                   | VAR NEQ VAR'''
        if p[2] == '=':
            p[0] = Equal(p[1], p[3])
        else:
            p[0] = Not(Equal(p[1], p[3]))

    def p_formula_const(self, p):
        '''formula : TRUE
                   | FALSE'''
        p[0] = BoolConst(p[1] == 'true')

    def p_error(self, p):
        if p is None:
            raise SentenceParseError('Unexpected end of input', len(self._text))
        raise SentenceParseError('Unexpected token ' + repr(p.value), p.lexpos)

    def __init__(self):
        self._text = ''
        self.lexer = lex.lex(module=self)
        self.parser = yacc.yacc(module=self, write_tables=False, debug=False,
                                errorlog=yacc.NullLogger())

    def parse(self, text):
        self._text = text
        return self.parser.parse(text, lexer=self.lexer.clone())


_PARSER = None


def free_variables(s, bound=frozenset()):
    if isinstance(s, (Edge, Equal)):
        return {v for v in (s.x, s.y) if v not in bound}
    if isinstance(s, BoolConst):
        return set()
    if isinstance(s, Not):
        return free_variables(s.arg, bound)
    if isinstance(s, (And, Or)):
        result = set()
        for arg in s.args:
            result |= free_variables(arg, bound)
        return result
    if isinstance(s, Quantifier):
        return free_variables(s.body, bound | {s.var})
    raise ArgumentError('Not a sentence node: ' + repr(s))


def parse_sentence(text):
    """
    Parse a sentence. Raises SentenceParseError on syntax errors and on
    free variables.
    """
    global _PARSER
    if _PARSER is None:
        _PARSER = SentenceParser()
    s = _PARSER.parse(text)
    free = free_variables(s)
    if free:
        raise SentenceParseError('free variables: ' + ', '.join(sorted(free)))
    return s


def read_sentence_file(fname):
    if not os.path.isfile(fname):
        raise ArgumentError('Sentence file ' + fname + ' does not exist.')
    logger.info('Reading: ' + fname)
    with open(fname, 'r', encoding='utf-8') as infile:
        lines = [line for line in infile if not line.lstrip().startswith('#')]
    return parse_sentence(''.join(lines))


def format_sentence(s):
    """
    Text for a sentence in the grammar accepted by parse_sentence.
    """
    if isinstance(s, Edge):
        return 'E(' + s.x + ',' + s.y + ')'
    if isinstance(s, Equal):
        return s.x + ' = ' + s.y
    if isinstance(s, BoolConst):
        return 'true' if s.value else 'false'
    if isinstance(s, Not):
        inner = format_sentence(s.arg)
        if isinstance(s.arg, Equal):
            inner = '(' + inner + ')'
        return '!' + inner
    if isinstance(s, And):
        return '(' + ' & '.join(format_sentence(a) for a in s.args) + ')'
    if isinstance(s, Or):
        return '(' + ' | '.join(format_sentence(a) for a in s.args) + ')'
    if isinstance(s, Quantifier):
        if s.kind == 'geq':
            head = 'exists>=' + str(s.m)
        elif s.kind == 'eq':
            head = 'exists=' + str(s.m)
        elif s.kind == 'mod':
            head = 'exists[' + str(s.j) + ' mod ' + str(s.l) + ']'
        else:
            head = s.kind
        return head + ' ' + s.var + ' (' + format_sentence(s.body) + ')'
    raise ArgumentError('Not a sentence node: ' + repr(s))


##############################################################
# Exact model checking
##############################################################

def _check(s, adj, n, env):
    if isinstance(s, Edge):
        return env[s.y] in adj[env[s.x]]
    if isinstance(s, Equal):
        return env[s.x] == env[s.y]
    if isinstance(s, BoolConst):
        return s.value
    if isinstance(s, Not):
        return not _check(s.arg, adj, n, env)
    if isinstance(s, And):
        return all(_check(a, adj, n, env) for a in s.args)
    if isinstance(s, Or):
        return any(_check(a, adj, n, env) for a in s.args)
    if isinstance(s, Quantifier):
        def holds(v):
            return _check(s.body, adj, n, {**env, s.var: v})
        if s.kind == 'exists':
            return any(holds(v) for v in range(1, n + 1))
        if s.kind == 'forall':
            return all(holds(v) for v in range(1, n + 1))
        count = sum(1 for v in range(1, n + 1) if holds(v))
        if s.kind == 'geq':
            return count >= s.m
        if s.kind == 'eq':
            return count == s.m
        return count % s.l == s.j
    raise ArgumentError('Not a sentence node: ' + repr(s))


def eval_exact(g, s, cap=12):
    """
    Truth of sentence s on graph g by direct recursion over assignments.
    """
    check_guard(g.n, cap, 'eval_cap', 'graph too large for exact model checking')
    adj = [frozenset()] + [frozenset(row) for row in g.adjacency]
    return _check(s, adj, g.n, {})


##############################################################
# Hanf sentences
##############################################################

class BallCensus:
    """
    Per-radius ball-type counts of one graph, computed on demand.
    """

    def __init__(self, g, catalog):
        self._g = g
        self._catalog = catalog
        self._counts = {}

    def count(self, atom):
        if atom.ball is None:
            return 0
        key = min(atom.radius, self._catalog.span_radius)
        if key not in self._counts:
            self._counts[key] = bhv(self._g, key, self._catalog).entries
        return int(self._counts[key][atom.ball])


def eval_hanf_atom(g, a, catalog, census=None):
    if census is None:
        census = BallCensus(g, catalog)
    return a.holds_for(census.count(a))


def eval_hnf(g, h, catalog, census=None):
    """
    Truth of a Hanf tree on a graph in C^c_d.
    """
    if census is None:
        census = BallCensus(g, catalog)
    if isinstance(h, HanfAtom):
        return eval_hanf_atom(g, h, catalog, census)
    if isinstance(h, BoolConst):
        return h.value
    if isinstance(h, Not):
        return not eval_hnf(g, h.arg, catalog, census)
    if isinstance(h, And):
        return all(eval_hnf(g, a, catalog, census) for a in h.args)
    if isinstance(h, Or):
        return any(eval_hnf(g, a, catalog, census) for a in h.args)
    raise ArgumentError('Not a Hanf tree node: ' + repr(h))


def eval_dnf(g, dnf, catalog, census=None):
    if census is None:
        census = BallCensus(g, catalog)
    return any(all(eval_hanf_atom(g, lit.atom, catalog, census) != lit.negated
                   for lit in clause)
               for clause in dnf.clauses)


def normalize_clause(literals):
    """
    Deduplicate literals; None when the clause contains a literal and
    its complement.
    """
    result = []
    for lit in literals:
        if Literal(lit.atom, not lit.negated) in result:
            return None
        if lit not in result:
            result.append(lit)
    return tuple(result)


def normalize_clauses(clauses):
    result = []
    for clause in clauses:
        clause = normalize_clause(clause)
        if clause is not None and clause not in result:
            result.append(clause)
    return tuple(result)


def _dnf_clauses(node, negated, guard):
    if isinstance(node, HanfAtom):
        return [(Literal(node, negated),)]
    if isinstance(node, BoolConst):
        return [()] if node.value != negated else []
    if isinstance(node, Not):
        return _dnf_clauses(node.arg, not negated, guard)
    if isinstance(node, (And, Or)):
        # De Morgan: a negated And distributes like an Or
        conjunctive = isinstance(node, And) != negated
        parts = [_dnf_clauses(arg, negated, guard) for arg in node.args]
        if not conjunctive:
            return [clause for part in parts for clause in part]
        result = [()]
        for part in parts:
            check_guard(len(result) * len(part), guard, 'clause_guard',
                        'DNF distribution produces too many clauses')
            result = [left + right for left, right in product(result, part)]
        return result
    raise ArgumentError('Not a Hanf tree node: ' + repr(node))


def to_dnf(h, guard=10**5):
    """
    Disjunctive normal form of a Hanf tree: push negations to the atoms,
    then distribute conjunctions over disjunctions.
    """
    return DnfSentence(normalize_clauses(_dnf_clauses(h, False, guard)))


##############################################################
# Hanf sentence files
##############################################################

def resolve_ball(spec, radius, catalog):
    """
    Canonical code and catalog index for a ball given as an index, a hex
    code or an inline rooted graph {"n":..,"edges":..,"root":..}.
    """
    if isinstance(spec, bool):
        raise ArgumentError('Ball reference must not be a boolean.')
    if isinstance(spec, int):
        balls = catalog.ball_types(radius)
        if not 0 <= spec < len(balls):
            raise ArgumentError('Ball index ' + str(spec) + ' outside the catalog at radius ' +
                                str(radius))
        return balls[spec].code, spec
    if isinstance(spec, str):
        code = code_from_hex(spec)
    elif isinstance(spec, dict):
        try:
            graph = ExplicitGraph(int(spec['n']), edges=[tuple(e) for e in spec.get('edges', [])])
            root = int(spec.get('root', 1))
        except (KeyError, TypeError, ValueError) as err:
            raise ArgumentError('Malformed inline ball ' + repr(spec) + ': ' + str(err))
        if graph.n > catalog.canonical_cap:
            return None, None
        code = canonical_code(graph, root=root, cap=catalog.canonical_cap)
    else:
        raise ArgumentError('Unsupported ball reference ' + repr(spec))
    return code, catalog.ball_index(radius, code)


def make_atom(kind, radius, ball, catalog, m=0, j=0, l=1):
    code, index = resolve_ball(ball, radius, catalog)
    return HanfAtom(kind, radius, index, m=m, j=j, l=l, code=code)


def hnf_from_json(data, catalog):
    """
    Build a Hanf tree from its JSON form.
    """
    if not isinstance(data, dict) or 'bool' not in data:
        raise ArgumentError('Hanf node must be an object with a "bool" field: ' + repr(data))
    kind = data['bool']
    if kind in ('and', 'or'):
        args = [hnf_from_json(arg, catalog) for arg in data.get('args', [])]
        if len(args) == 0:
            return BoolConst(kind == 'and')
        return conj(*args) if kind == 'and' else disj(*args)
    if kind == 'not':
        return Not(hnf_from_json(data['arg'], catalog))
    if kind in ('true', 'false'):
        return BoolConst(kind == 'true')
    if kind == 'atom':
        try:
            return make_atom(data['kind'], int(data['r']), data['ball'], catalog,
                             m=int(data.get('m', 0)), j=int(data.get('j', 0)),
                             l=int(data.get('l', 1)))
        except KeyError as err:
            raise ArgumentError('Hanf atom missing field ' + str(err) + ': ' + repr(data))
    raise ArgumentError('Unknown Hanf node type ' + repr(kind))


def hnf_to_json(h):
    if isinstance(h, HanfAtom):
        out = {'bool': 'atom', 'kind': h.kind, 'r': h.radius, 'ball': h.code.hex(),
               'index': h.ball}
        if h.kind == 'mod':
            out.update({'j': h.j, 'l': h.l})
        else:
            out['m'] = h.m
        return out
    if isinstance(h, BoolConst):
        return {'bool': 'true' if h.value else 'false'}
    if isinstance(h, Not):
        return {'bool': 'not', 'arg': hnf_to_json(h.arg)}
    if isinstance(h, (And, Or)):
        return {'bool': 'and' if isinstance(h, And) else 'or',
                'args': [hnf_to_json(a) for a in h.args]}
    raise ArgumentError('Not a Hanf tree node: ' + repr(h))


def read_hnf_file(fname, catalog=None, canonical_cap=8, type_guard=10**4):
    """
    Read a Hanf sentence file. Returns (tree, catalog); the catalog is
    built from the file's c and d unless one is passed in.
    """
    if not os.path.isfile(fname):
        raise ArgumentError('Hanf sentence file ' + fname + ' does not exist.')
    logger.info('Reading: ' + fname)
    with open(fname, 'r', encoding='utf-8') as infile:
        try:
            data = json.load(infile)
        except ValueError as err:
            raise ArgumentError('Malformed JSON in ' + fname + ': ' + str(err))
    try:
        c, d = int(data['c']), int(data['d'])
    except (KeyError, TypeError, ValueError):
        raise ArgumentError('Hanf sentence file ' + fname + ' needs integer "c" and "d".')
    if catalog is None:
        catalog = TypeCatalog(c, d, canonical_cap=canonical_cap, type_guard=type_guard)
    elif (catalog.c, catalog.d) != (c, d):
        raise ArgumentError('Hanf sentence is for C^' + str(c) + '_' + str(d) +
                            ' but the catalog is C^' + str(catalog.c) + '_' + str(catalog.d))
    body = data.get('sentence', data)
    return hnf_from_json(body, catalog), catalog
