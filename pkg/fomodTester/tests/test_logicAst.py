import json

import pytest

from ..graphCore import ExplicitGraph, disjoint_union
from ..logicAst import (And, BoolConst, Edge, Equal, HanfAtom, Literal, Not, Or, Quantifier,
                        eval_dnf, eval_exact, eval_hnf, format_sentence, hnf_from_json,
                        parse_sentence, read_hnf_file, read_sentence_file, to_dnf)
from ..typeCatalog import TypeCatalog
from ..utilsErrors import ArgumentError, ResourceGuardError, SentenceParseError
from ..utilsOracles import REGRESSION_DIR

EDGE = ExplicitGraph(2, [(1, 2)])
VERTEX = ExplicitGraph(1)

ISOLATED = 'exists x forall y !E(x,y)'
PSI = '!((exists x forall y !E(x, y)) & (exists x exists y E(x, y)))'


@pytest.fixture(scope='module')
def c2d1():
    return TypeCatalog(2, 1)


def test_parse_structure():
    s = parse_sentence('forall x exists y E(x,y)')
    assert s == Quantifier('forall', 'x', Quantifier('exists', 'y', Edge('x', 'y')))


def test_parse_counting_quantifiers():
    s = parse_sentence('exists>=3 x true & exists=2 y false | exists[1 mod 2] z z = z')
    assert isinstance(s, Or)
    left, right = s.args
    assert isinstance(left, And)
    assert left.args[0].kind == 'geq' and left.args[0].m == 3
    assert left.args[1].kind == 'eq' and left.args[1].m == 2
    assert right.kind == 'mod' and (right.j, right.l) == (1, 2)


def test_parse_implication_and_inequality():
    s = parse_sentence('forall x forall y (x != y -> !E(x,y))')
    body = s.body.body
    assert isinstance(body, Or)
    assert body.args == (Not(Not(Equal('x', 'y'))), Not(Edge('x', 'y')))


@pytest.mark.parametrize('text', ['exists x', 'E(x,y)', 'exists x E(x)', 'exists x (E(x,x)',
                                  'exists[2 mod 2] x true', 'forall x $'])
def test_parse_errors(text):
    with pytest.raises(SentenceParseError):
        parse_sentence(text)


def test_format_round_trip():
    for text in [PSI, 'exists[1 mod 3] x exists=2 y (E(x,y) | x = y)', 'true']:
        s = parse_sentence(text)
        assert parse_sentence(format_sentence(s)) == s


@pytest.mark.parametrize(('graph', 'expected'), [
    (disjoint_union([EDGE, EDGE]), True),
    (disjoint_union([VERTEX, VERTEX]), True),
    (disjoint_union([EDGE, VERTEX]), False),
    (ExplicitGraph(0), True),
])
def test_eval_exact_psi(graph, expected):
    assert eval_exact(graph, parse_sentence(PSI)) == expected


def test_eval_exact_counting():
    g = disjoint_union([EDGE, VERTEX, VERTEX, VERTEX])
    assert eval_exact(g, parse_sentence('exists=3 x forall y !E(x,y)'))
    assert eval_exact(g, parse_sentence('exists[1 mod 2] x true'))
    assert not eval_exact(g, parse_sentence('exists>=4 x forall y !E(x,y)'))


def test_eval_exact_cap():
    with pytest.raises(ResourceGuardError):
        eval_exact(ExplicitGraph(13), parse_sentence(ISOLATED))


def test_read_sentence_file_skips_comments(tmp_path):
    fname = tmp_path / 's.fo'
    fname.write_text('# a comment\n' + ISOLATED + '\n')
    assert read_sentence_file(str(fname)) == parse_sentence(ISOLATED)


def test_read_psi_hnf(c2d1):
    h, catalog = read_hnf_file(REGRESSION_DIR + '/psi.hnf.json', catalog=c2d1)
    assert catalog is c2d1
    assert isinstance(h, Not)
    atoms = h.arg.args
    assert all(isinstance(a, HanfAtom) and a.kind == 'geq' and a.m == 1 for a in atoms)
    assert {a.ball for a in atoms} == {0, 1}


def test_hnf_ball_references(c2d1):
    by_index = hnf_from_json({'bool': 'atom', 'kind': 'eq', 'r': 1, 'm': 2, 'ball': 1}, c2d1)
    by_hex = hnf_from_json({'bool': 'atom', 'kind': 'eq', 'r': 1, 'm': 2,
                            'ball': by_index.code.hex()}, c2d1)
    assert by_index == by_hex
    missing = hnf_from_json({'bool': 'atom', 'kind': 'geq', 'r': 1, 'm': 1,
                             'ball': {'n': 3, 'edges': [[1, 2], [2, 3]], 'root': 2}}, c2d1)
    assert missing.ball is None
    with pytest.raises(ArgumentError):
        hnf_from_json({'bool': 'atom', 'kind': 'geq', 'r': 1, 'm': 1, 'ball': 7}, c2d1)
    with pytest.raises(ArgumentError):
        hnf_from_json({'bool': 'xor'}, c2d1)


def test_hnf_file_class_mismatch(tmp_path):
    fname = tmp_path / 'h.hnf.json'
    fname.write_text(json.dumps({'c': 3, 'd': 2, 'sentence': {'bool': 'true'}}))
    with pytest.raises(ArgumentError):
        read_hnf_file(str(fname), catalog=TypeCatalog(2, 1))


def test_eval_hnf_and_dnf_agree(c2d1):
    h, _ = read_hnf_file(REGRESSION_DIR + '/psi.hnf.json', catalog=c2d1)
    dnf = to_dnf(h)
    assert len(dnf.clauses) == 2
    assert all(len(clause) == 1 and clause[0].negated for clause in dnf.clauses)
    for g in [disjoint_union([EDGE, EDGE]), disjoint_union([EDGE, VERTEX]), VERTEX,
              ExplicitGraph(0)]:
        assert eval_hnf(g, h, c2d1) == eval_dnf(g, dnf, c2d1) == eval_exact(g,
                                                                           parse_sentence(PSI))


def test_to_dnf_constants_and_contradictions(c2d1):
    a = HanfAtom('geq', 1, 0, m=1)
    assert to_dnf(BoolConst(True)).clauses == ((),)
    assert to_dnf(BoolConst(False)).clauses == ()
    assert to_dnf(And((a, Not(a)))).clauses == ()
    assert to_dnf(Or((a, a))).clauses == ((Literal(a),),)


def test_to_dnf_guard():
    atoms = [HanfAtom('geq', 1, 0, m=i + 1) for i in range(6)]
    h = And(tuple(Or((x, Not(x))) for x in atoms))
    with pytest.raises(ResourceGuardError):
        to_dnf(h, guard=10)
