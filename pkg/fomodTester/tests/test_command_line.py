import json
import logging

import pytest

from ..command_line import main
from ..utilsOracles import REGRESSION_DIR

PSI_HNF = REGRESSION_DIR + '/psi.hnf.json'
PSI_FO = REGRESSION_DIR + '/psi.fo'


@pytest.fixture(autouse=True)
def restore_logging():
    # main() replaces the root handlers
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers = handlers
    root.setLevel(level)


@pytest.fixture
def psi_templates(tmp_path):
    fname = str(tmp_path / 'psi.templates.json')
    assert main(['compile', '--hnf', PSI_HNF, '-o', fname]) == 0
    return fname


def write_text(path, text):
    path.write_text(text)
    return str(path)


def test_no_command():
    with pytest.raises(SystemExit):
        main([])


def test_types(capsys, tmp_path):
    fname = str(tmp_path / 'c2d1.json')
    assert main(['types', '-c', '2', '-d', '1', '-o', fname]) == 0
    out = capsys.readouterr().out
    assert 'M = 2, N = 2, hash ' in out
    with open(fname) as infile:
        assert json.load(infile)['c'] == 2


def test_compile(capsys, psi_templates):
    out = capsys.readouterr().out
    assert '2 templates, k = 1' in out
    with open(psi_templates) as infile:
        assert len(json.load(infile)['templates']) == 2


def test_compile_from_sentence(tmp_path):
    fname = str(tmp_path / 'psi.templates.json')
    assert main(['compile', '--sentence', PSI_FO, '--certify-n', '5', '-o', fname]) == 0


def test_compile_class_mismatch(tmp_path):
    fname = str(tmp_path / 'psi.templates.json')
    assert main(['compile', '--hnf', PSI_HNF, '-c', '3', '-o', fname]) == 2


def test_eval(capsys, tmp_path):
    two_edges = write_text(tmp_path / 'two_edges.txt', '4 1\n1 2\n3 4\n')
    mixed = write_text(tmp_path / 'mixed.txt', '3 1\n1 2\n')
    assert main(['eval', '--sentence', PSI_FO, '--graph', two_edges]) == 0
    assert capsys.readouterr().out.strip() == 'true'
    assert main(['eval', '--sentence', PSI_FO, '--graph', mixed]) == 1
    assert capsys.readouterr().out.strip() == 'false'


def test_eval_guard(tmp_path):
    large = write_text(tmp_path / 'large.txt', '13 1\n')
    assert main(['eval', '--sentence', PSI_FO, '--graph', large]) == 4


def test_test_family_accept(capsys, tmp_path, psi_templates):
    report = str(tmp_path / 'report.json')
    assert main(['test', '--templates', psi_templates, '--family', 'EDGES:n=10000',
                 '--epsilon', '0.5', '--trials', '3', '--report', 'json', '-o', report]) == 0
    with open(report) as infile:
        data = json.load(infile)
    assert data['decision'] == 'ACCEPT'
    assert data['n'] == 10000
    assert len(data['unit_parameters']) == 3
    assert all(entry['n_prime'] == 9998 for entry in data['unit_parameters']
               if entry['frequent'] == [[1, 0, 1]])


def test_test_family_reject(capsys, psi_templates):
    capsys.readouterr()
    assert main(['test', '--templates', psi_templates, '--family', 'EDGES_PLUS_VERTEX:n=1001',
                 '--epsilon', '0.1']) == 1
    out = capsys.readouterr().out
    assert out.startswith('decision REJECT')


def test_test_bad_family(psi_templates):
    assert main(['test', '--templates', psi_templates, '--family', 'STARS:n=3',
                 '--epsilon', '0.1']) == 2


def test_test_graph_outside_class(tmp_path, psi_templates):
    path3 = write_text(tmp_path / 'path3.txt', '3 2\n1 2\n2 3\n')
    assert main(['test', '--templates', psi_templates, '--graph', path3,
                 '--epsilon', '0.5']) == 3


def test_gen_then_test(tmp_path, psi_templates):
    fname = str(tmp_path / 'g6.txt')
    assert main(['gen', '--family', 'EDGES', '--n', '6', '-o', fname]) == 0
    with open(fname) as infile:
        assert infile.readline().split() == ['6', '1']
    assert main(['test', '--templates', psi_templates, '--graph', fname,
                 '--epsilon', '0.5']) == 0


def test_plan(capsys, psi_templates):
    capsys.readouterr()
    codes = {}
    for unit in range(3):
        codes[unit] = (main(['plan', '--templates', psi_templates, '--unit', str(unit),
                             '--n', '6']),
                       main(['plan', '--templates', psi_templates, '--unit', str(unit),
                             '--n', '7']))
    # edges only, isolated vertices only, and the empty graph
    assert sorted(codes.values()) == [(0, 0), (0, 1), (1, 1)]
    out = capsys.readouterr().out
    assert '6 1\n' in out
    assert 'NONE' in out
    assert main(['plan', '--templates', psi_templates, '--unit', '9', '--n', '6']) == 2


def test_experiment_dry_run(tmp_path):
    (tmp_path / 'sentences.txt').write_text('psi 2 1 psi.hnf.json\n')
    (tmp_path / 'experiments.txt').write_text(
        "psi_accept sentence 'psi'\n"
        "psi_accept family 'EDGES'\n"
        "psi_accept n_list [10000]\n"
        "psi_accept epsilon_list [0.5]\n")
    master = write_text(tmp_path / 'master_key.txt',
                        'key_dir ./\noutput_root out/\nsentence_root ' + REGRESSION_DIR +
                        '/\nsentence_key sentences.txt\nexperiment_key experiments.txt\n')
    assert main(['experiment', '--config', master, '--dry-run']) == 0
    assert not (tmp_path / 'out').exists()
