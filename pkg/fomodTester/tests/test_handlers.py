import json
import os

import pytest

from ..handlerCompile import CompileHandler, compile_sentence_file, hnf_companion
from ..handlerExperiment import REPORT_COLUMNS, ExperimentHandler, repeat_seed
from ..handlerKeys import KeyHandler
from ..hnfCompiler import read_templates
from ..utilsErrors import ArgumentError, InternalInvariantError
from ..utilsKeyReaders import (DEFAULT_GUARDS, complete_experiment, read_experiment_key,
                               read_guard_key, read_sentence_key)
from ..utilsLists import select_from_list
from ..utilsOracles import REGRESSION_DIR

MASTER_KEY = """
# test master key
key_dir          ./
output_root      out/
sentence_root    {sentence_root}
guard_key        guards.txt
sentence_key     sentences.txt
experiment_key   experiments.txt
"""

GUARDS = """
eval_cap          10
amplification_c0  9
clause_guard      'many'
no_such_guard     3
"""

SENTENCES = """
# name c d file
psi            2 1 psi.hnf.json
even_vertices  2 1 even_vertices.hnf.json
"""

EXPERIMENTS = """
psi_accept  sentence      'psi'
psi_accept  family        'EDGES'
psi_accept  n_list        [10000]
psi_accept  epsilon_list  [0.5]
psi_accept  repeats       2
psi_accept  expect        'accept'

psi_reject  sentence      'psi'
psi_reject  family        'EDGES_PLUS_VERTEX'
psi_reject  n_list        [1001]
psi_reject  epsilon_list  [0.1]
psi_reject  repeats       2
psi_reject  expect        'REJECT'
psi_reject  colour        'blue'
"""


@pytest.fixture
def key_dir(tmp_path):
    (tmp_path / 'master_key.txt').write_text(
        MASTER_KEY.format(sentence_root=REGRESSION_DIR + '/'))
    (tmp_path / 'guards.txt').write_text(GUARDS)
    (tmp_path / 'sentences.txt').write_text(SENTENCES)
    (tmp_path / 'experiments.txt').write_text(EXPERIMENTS)
    return tmp_path


def test_select_from_list():
    names = ['psi', 'Even', 'triangles', 'no_isolated']
    assert select_from_list(names) == ['Even', 'no_isolated', 'psi', 'triangles']
    assert select_from_list(names, first='no', last='psi') == ['no_isolated', 'psi']
    assert select_from_list(names, skip=['PSI']) == ['Even', 'no_isolated', 'triangles']
    assert select_from_list(names, only=['even']) == ['Even']


def test_read_guard_key(key_dir):
    guards = read_guard_key(str(key_dir / 'guards.txt'))
    # wrong types and unknown names are skipped
    assert guards == {'eval_cap': 10, 'amplification_c0': 9}


def test_read_sentence_key(key_dir):
    sentences = read_sentence_key(str(key_dir / 'sentences.txt'))
    assert sorted(sentences) == ['even_vertices', 'psi']
    assert sentences['psi'] == {'c': 2, 'd': 1, 'hnf_file': 'psi.hnf.json',
                                'sentence_file': 'psi.fo'}


def test_read_experiment_key(key_dir):
    experiments = read_experiment_key(str(key_dir / 'experiments.txt'))
    assert experiments['psi_accept']['expect'] == 'ACCEPT'
    assert experiments['psi_accept']['n_list'] == [10000]
    assert 'colour' not in experiments['psi_reject']
    full = complete_experiment(experiments['psi_reject'])
    assert full['seed'] == 0 and full['chv'] == []
    with pytest.raises(ArgumentError):
        complete_experiment({'sentence': 'psi'})


def test_missing_key_file(tmp_path):
    with pytest.raises(ArgumentError):
        read_guard_key(str(tmp_path / 'nothing.txt'))
    with pytest.raises(ArgumentError):
        KeyHandler(master_key=str(tmp_path / 'nothing.txt'))


def test_key_handler(key_dir):
    kh = KeyHandler(master_key=str(key_dir / 'master_key.txt'))
    assert kh.get_sentences() == ['even_vertices', 'psi']
    assert kh.get_sentences(only=['psi']) == ['psi']
    assert kh.get_experiments() == ['psi_accept', 'psi_reject']
    guards = kh.get_guards()
    assert guards['eval_cap'] == 10
    assert guards['canonical_cap'] == DEFAULT_GUARDS['canonical_cap']
    assert kh.get_hnf_file('psi') == os.path.join(REGRESSION_DIR, 'psi.hnf.json')
    assert kh.get_sentence_file('psi') == os.path.join(REGRESSION_DIR, 'psi.fo')
    assert kh.get_templates_file('psi') == os.path.join(str(key_dir), 'out',
                                                        'psi.templates.json')
    assert kh.get_report_file('psi_accept', 'txt').endswith('psi_accept.report.txt')
    with pytest.raises(ArgumentError):
        kh.get_sentence_info('triangles')


def test_key_handler_missing_list_key(key_dir):
    os.remove(str(key_dir / 'guards.txt'))
    with pytest.raises(ArgumentError):
        KeyHandler(master_key=str(key_dir / 'master_key.txt'))


def test_hnf_companion():
    assert hnf_companion('dir/psi.fo') == 'dir/psi.hnf.json'


def test_compile_sentence_file_certifies():
    compiled, catalog = compile_sentence_file(REGRESSION_DIR + '/psi.hnf.json',
                                              sentence_file=REGRESSION_DIR + '/psi.fo',
                                              certify_max_n=6)
    assert (catalog.c, catalog.d) == (2, 1)
    assert len(compiled.templates) == 2


def test_compile_sentence_file_detects_mismatch():
    # templates of psi checked against a different sentence
    with pytest.raises(InternalInvariantError):
        compile_sentence_file(REGRESSION_DIR + '/psi.hnf.json',
                              sentence_file=REGRESSION_DIR + '/no_isolated.fo',
                              certify_max_n=4)


def test_compile_dry_run(key_dir):
    kh = KeyHandler(master_key=str(key_dir / 'master_key.txt'))
    ch = CompileHandler(key_handler=kh, dry_run=True)
    assert ch.loop_compile_sentences() == {'even_vertices': None, 'psi': None}
    assert not os.path.isdir(kh.get_output_root())


def test_compile_and_run_experiments(key_dir):
    kh = KeyHandler(master_key=str(key_dir / 'master_key.txt'))
    ch = CompileHandler(key_handler=kh, certify_max_n=6)
    ch.set_sentences(only=['psi'])
    results = ch.loop_compile_sentences()
    assert list(results) == ['psi']
    compiled = read_templates(results['psi'])
    assert compiled.k == 1

    eh = ExperimentHandler(key_handler=kh)
    tables = eh.loop_experiments()
    assert sorted(tables) == ['psi_accept', 'psi_reject']

    accept = tables['psi_accept']
    assert len(accept) == 1
    assert accept['accept_rate'][0] == 1.0
    # 20 trials for each of the 3 units at c0 = 9
    assert accept['max_queries'][0] <= 20 * 3 * accept['query_bound'][0]
    assert bool(accept['passed'][0])

    reject = tables['psi_reject']
    assert reject['accept_rate'][0] == 0.0
    assert reject['certificate'][0] == 'CERTIFIED'
    assert bool(reject['passed'][0])

    with open(kh.get_report_file('psi_reject', 'json')) as infile:
        rows = json.load(infile)
    assert sorted(rows[0]) == sorted(REPORT_COLUMNS)
    assert os.path.isfile(kh.get_report_file('psi_reject', 'txt'))


def test_experiment_needs_templates(key_dir):
    kh = KeyHandler(master_key=str(key_dir / 'master_key.txt'))
    eh = ExperimentHandler(key_handler=kh)
    with pytest.raises(ArgumentError):
        eh.task_run_experiment('psi_accept')


def test_repeat_seed_is_deterministic():
    assert repeat_seed(1, 0, 0) == repeat_seed(1, 0, 0)
    assert repeat_seed(1, 0, 0) != repeat_seed(1, 0, 1)
