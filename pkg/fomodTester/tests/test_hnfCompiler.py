import pytest

from ..hnfCompiler import (UNSAT, CchvEntry, CchvTemplate, clause_entry_sets, check_equivalence,
                           compile_hnf, read_templates, reduce_to_component_radius,
                           template_satisfied, unify_cap, unify_radius, write_templates)
from ..logicAst import (DnfSentence, HanfAtom, Literal, eval_exact, eval_hnf, hnf_from_json,
                        read_hnf_file, read_sentence_file)
from ..typeCatalog import TypeCatalog, iter_chv_vectors, realize_chv
from ..utilsErrors import ArgumentError
from ..utilsOracles import REGRESSION_DIR, regression_corpus

# small enough to keep the exhaustive checks quick
MAX_N = {(2, 1): 8, (3, 2): 6}

VERTEX_BALL = {'n': 1, 'edges': [], 'root': 1}
EDGE_BALL = {'n': 2, 'edges': [[1, 2]], 'root': 1}
CENTER_BALL = {'n': 3, 'edges': [[1, 2], [2, 3]], 'root': 2}
TRIANGLE_BALL = {'n': 3, 'edges': [[1, 2], [2, 3], [1, 3]], 'root': 1}


@pytest.fixture(scope='module')
def c2d1():
    return TypeCatalog(2, 1)


@pytest.fixture(scope='module')
def c3d2():
    return TypeCatalog(3, 2)


def compiled_regression(name, catalog):
    h, _ = read_hnf_file(REGRESSION_DIR + '/' + name + '.hnf.json', catalog=catalog)
    return h, compile_hnf(h, catalog)


def lit(kind, ball, negated=False, radius=1, **kwargs):
    return Literal(HanfAtom(kind, radius, ball, **kwargs), negated)


@pytest.mark.parametrize(('name', 'sentence_file', 'hnf_file'), regression_corpus())
def test_templates_match_sentence(name, sentence_file, hnf_file):
    sentence = read_sentence_file(sentence_file)
    h, catalog = read_hnf_file(hnf_file)
    compiled = compile_hnf(h, catalog)
    max_n = MAX_N[(catalog.c, catalog.d)]
    assert check_equivalence(lambda g: eval_exact(g, sentence), compiled, catalog, max_n) == []


def test_psi_templates(c2d1):
    _, compiled = compiled_regression('psi', c2d1)
    assert compiled.k == 1
    assert len(compiled.templates) == 2
    free = (CchvEntry.cong(0, 1), CchvEntry.exact(0))
    none = (CchvEntry.exact(0),)
    assert set(t.entries for t in compiled.templates) == {(none, free), (free, none)}
    assert compiled.satisfied_by((0, 500000))
    assert not compiled.satisfied_by((1, 500000))


def test_even_vertices_template(c2d1):
    _, compiled = compiled_regression('even_vertices', c2d1)
    assert len(compiled.templates) == 1
    vertices, edges = compiled.templates[0].entries
    assert vertices == (CchvEntry.cong(0, 2), CchvEntry.exact(0))
    assert edges == (CchvEntry.cong(0, 1), CchvEntry.exact(0))


def test_unsatisfiable_sentence_has_no_templates(c3d2):
    _, compiled = compiled_regression('odd_leaves_c3', c3d2)
    assert compiled.templates == ()
    assert not any(compiled.satisfied_by(v) for v in iter_chv_vectors(c3d2, 6))


def test_unify_radius_preserves_truth(c3d2):
    h, _ = read_hnf_file(REGRESSION_DIR + '/triangles.hnf.json', catalog=c3d2)
    unified = unify_radius(h, c3d2)
    for n in range(7):
        for vector in iter_chv_vectors(c3d2, n):
            g = realize_chv(vector, c3d2)
            assert eval_hnf(g, h, c3d2) == eval_hnf(g, unified, c3d2)


MIXED_RADII_C3 = {
    'bool': 'or', 'args': [
        {'bool': 'and', 'args': [
            {'bool': 'atom', 'kind': 'eq', 'r': 0, 'm': 2, 'ball': VERTEX_BALL},
            {'bool': 'atom', 'kind': 'geq', 'r': 1, 'm': 1, 'ball': EDGE_BALL}]},
        {'bool': 'and', 'args': [
            {'bool': 'atom', 'kind': 'eq', 'r': 1, 'm': 2, 'ball': EDGE_BALL},
            {'bool': 'not', 'arg':
                {'bool': 'atom', 'kind': 'eq', 'r': 1, 'm': 1, 'ball': CENTER_BALL}}]},
        {'bool': 'and', 'args': [
            {'bool': 'atom', 'kind': 'geq', 'r': 0, 'm': 1, 'ball': VERTEX_BALL},
            {'bool': 'atom', 'kind': 'mod', 'r': 0, 'j': 1, 'l': 2, 'ball': VERTEX_BALL},
            {'bool': 'not', 'arg':
                {'bool': 'atom', 'kind': 'eq', 'r': 1, 'm': 0, 'ball': TRIANGLE_BALL}}]}]}


def test_unify_radius_mixed_radii_eq_atoms(c3d2):
    # eq atoms at radius 0 and 1 are rewritten over supertypes at radius 2
    h = hnf_from_json(MIXED_RADII_C3, c3d2)
    unified = unify_radius(h, c3d2)
    assert unified != h
    outcomes = set()
    for n in range(8):
        for vector in iter_chv_vectors(c3d2, n):
            g = realize_chv(vector, c3d2)
            truth = eval_hnf(g, h, c3d2)
            assert truth == eval_hnf(g, unified, c3d2)
            outcomes.add(truth)
    assert outcomes == {True, False}


def test_unify_radius_rejects_large_target(c3d2):
    h, _ = read_hnf_file(REGRESSION_DIR + '/triangles.hnf.json', catalog=c3d2)
    with pytest.raises(ArgumentError):
        unify_radius(h, c3d2, target=3)


def test_unify_cap_negations():
    dnf = DnfSentence(((lit('geq', 0, negated=True, m=2),),
                       (lit('eq', 1, m=3),),
                       (lit('mod', 0, negated=True, j=1, l=3),)))
    k, capped = unify_cap(dnf)
    assert k == 4
    described = [tuple(x.describe() for x in clause) for clause in capped.clauses]
    assert described == [('EQ0[r=1,#0]',), ('EQ1[r=1,#0]',), ('EQ3[r=1,#1]',),
                         ('MOD(0,3)[r=1,#0]',), ('MOD(2,3)[r=1,#0]',)]


def test_unify_cap_negated_eq_and_trivial_geq():
    dnf = DnfSentence(((lit('eq', 0, negated=True, m=1), lit('geq', 1, m=0)),
                       (lit('geq', 1, m=3),)))
    k, capped = unify_cap(dnf)
    assert k == 3
    described = [tuple(x.describe() for x in clause) for clause in capped.clauses]
    assert described == [('EQ0[r=1,#0]',), ('EQ2[r=1,#0]',), ('GEQ3[r=1,#0]',),
                         ('GEQ3[r=1,#1]',)]


def test_reduce_splits_multi_vertex_types(c2d1):
    # ball 1 is an edge endpoint, two per component
    dnf = DnfSentence(((lit('geq', 1, m=1),),), cap=1)
    reduced = reduce_to_component_radius(dnf, c2d1)
    described = [tuple(x.describe() for x in clause) for clause in reduced.clauses]
    assert described == [('EQ1[r=1,#1]',), ('GEQ2[r=1,#1]',)]
    assert clause_entry_sets(reduced.clauses[0], c2d1, 1) is UNSAT
    entries = clause_entry_sets(reduced.clauses[1], c2d1, 1)
    assert entries[1] == (CchvEntry.cong(0, 1),)


def test_reduce_unrealizable_atoms(c2d1):
    dnf = DnfSentence(((lit('eq', None, m=0), lit('geq', 0, m=1)),
                       (lit('geq', None, m=1),),
                       (lit('mod', None, j=1, l=2),)), cap=1)
    reduced = reduce_to_component_radius(dnf, c2d1)
    assert len(reduced.clauses) == 1
    assert [x.atom.ball for x in reduced.clauses[0]] == [0]


def test_clause_entry_sets_conflicts(c2d1):
    assert clause_entry_sets((lit('eq', 0, m=0), lit('eq', 0, m=1)), c2d1, 2) is UNSAT
    assert clause_entry_sets((lit('eq', 0, m=1), lit('geq', 0, m=2)), c2d1, 2) is UNSAT
    assert clause_entry_sets((lit('eq', 0, m=1), lit('mod', 0, j=0, l=2)), c2d1, 2) is UNSAT
    # odd vertex count on edges is impossible
    assert clause_entry_sets((lit('mod', 1, j=1, l=2),), c2d1, 1) is UNSAT


def test_clause_entry_sets_mod_on_edges(c2d1):
    # edge endpoints = 2 mod 4 means an odd number of edges
    entries = clause_entry_sets((lit('mod', 1, j=2, l=4),), c2d1, 2)
    assert entries[1] == (CchvEntry.cong(1, 2), CchvEntry.exact(1))
    assert entries[0] == (CchvEntry.cong(0, 1), CchvEntry.exact(0), CchvEntry.exact(1))


def test_template_satisfied():
    template = CchvTemplate(2, ((CchvEntry.exact(1),), (CchvEntry.cong(1, 3),)))
    assert template_satisfied((1, 4), template)
    assert not template_satisfied((1, 1), template)
    assert not template_satisfied((0, 4), template)
    with pytest.raises(ArgumentError):
        template_satisfied((1, 4, 0), template)


def test_templates_file(tmp_path, c2d1, c3d2):
    _, compiled = compiled_regression('psi', c2d1)
    fname = str(tmp_path / 'psi.templates.json')
    write_templates(compiled, fname)
    assert read_templates(fname, catalog=c2d1) == compiled
    with pytest.raises(ArgumentError):
        read_templates(fname, catalog=c3d2)
    with pytest.raises(ArgumentError):
        read_templates(str(tmp_path / 'missing.json'))
