"""
Brute-force oracles and the self-test suites built on them.

Every suite compares a library routine with an exhaustive computation
and counts disagreements. run_selftest collects the counts in an astropy
Table; the command line exits nonzero when any suite fails.
"""

import logging
import os
from itertools import combinations
from math import gcd

import numpy as np
from astropy.table import Table

from .hnfCompiler import check_equivalence, compile_hnf, template_satisfied
from .logicAst import eval_exact, read_hnf_file, read_sentence_file
from .testerLogger import log_banner
from .testerRuntime import compile_tester, construct_member
from .typeCatalog import TypeCatalog, iter_chv_vectors
from .utilsErrors import ArgumentError
from .utilsNumTheory import Congruence, crt_solve, frobenius_multiple, lcm_many

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)

REGRESSION_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'regression')

# largest graph size checked exhaustively per class
EQUIVALENCE_SIZES = {(2, 1): 8, (3, 2): 9}


##############################################################
# Oracles
##############################################################

def brute_frobenius(ws):
    """
    Largest multiple of gcd(ws) that is not a sum of elements of ws,
    by marking every sum up to max(ws)**2.
    """
    ws = [int(w) for w in ws]
    g = 0
    for w in ws:
        g = gcd(g, w)
    limit = max(ws) ** 2 + max(ws)
    marked = np.zeros(limit + 1, dtype=bool)
    marked[0] = True
    for x in range(1, limit + 1):
        marked[x] = any(x >= w and marked[x - w] for w in ws)
    missing = [x for x in range(0, limit + 1, g) if not marked[x]]
    return max(missing) if missing else -g


def brute_crt(cs):
    """
    Congruence solving cs by scanning 0..lcm-1, or None.
    """
    cs = list(cs)
    modulus = lcm_many([c.modulus for c in cs])
    for x in range(modulus):
        if all(c.holds(x) for c in cs):
            return Congruence(x, modulus)
    return None


def brute_member_exists(unit, n, catalog):
    template = unit.as_template()
    return any(template_satisfied(vector, template) for vector in iter_chv_vectors(catalog, n))


def regression_corpus(directory=REGRESSION_DIR):
    """
    (name, sentence file, hnf file) for every sentence with both files.
    """
    if not os.path.isdir(directory):
        raise ArgumentError('Regression directory ' + directory + ' does not exist.')
    corpus = []
    for fname in sorted(os.listdir(directory)):
        if not fname.endswith('.hnf.json'):
            continue
        name = fname[:-len('.hnf.json')]
        sentence_file = os.path.join(directory, name + '.fo')
        if os.path.isfile(sentence_file):
            corpus.append((name, sentence_file, os.path.join(directory, fname)))
    return corpus


##############################################################
# Suites
##############################################################

def frobenius_suite(values=range(2, 10), max_size=3):
    checks, failures = 0, 0
    for size in range(1, max_size + 1):
        for ws in combinations(values, size):
            checks += 1
            if frobenius_multiple(ws) != brute_frobenius(ws):
                logger.warning('Frobenius mismatch for ' + str(ws))
                failures += 1
    return checks, failures


def crt_suite(trials=1000, max_modulus=30, seed=0):
    rng = np.random.default_rng(seed)
    checks, failures = 0, 0
    for _ in range(trials):
        size = int(rng.integers(1, 4))
        moduli = [int(m) for m in rng.integers(1, max_modulus + 1, size=size)]
        cs = [Congruence(int(rng.integers(0, m)), m) for m in moduli]
        checks += 1
        if crt_solve(cs) != brute_crt(cs):
            logger.warning('CRT mismatch for ' + str(cs))
            failures += 1
    return checks, failures


def equivalence_suite(corpus=None, sizes=None):
    """
    Compiled templates against direct evaluation of the source sentence
    on every isomorphism class up to the configured size.
    """
    if corpus is None:
        corpus = regression_corpus()
    if sizes is None:
        sizes = EQUIVALENCE_SIZES
    checks, failures = 0, 0
    catalogs = {}
    for name, sentence_file, hnf_file in corpus:
        sentence = read_sentence_file(sentence_file)
        h, catalog = read_hnf_file(hnf_file)
        catalog = catalogs.setdefault((catalog.c, catalog.d), catalog)
        compiled = compile_hnf(h, catalog)
        max_n = sizes.get((catalog.c, catalog.d), 6)
        logger.info('... ' + name + ': checking up to ' + str(max_n) + ' vertices')
        mismatches = check_equivalence(lambda g: eval_exact(g, sentence), compiled, catalog,
                                       max_n)
        checks += 1
        if mismatches:
            logger.warning(name + ': ' + str(len(mismatches)) + ' mismatches')
            failures += 1
    return checks, failures


def member_suite(corpus=None, max_n=40):
    """
    construct_member existence against exhaustive chv search.
    """
    if corpus is None:
        corpus = regression_corpus()
    checks, failures = 0, 0
    catalogs = {}
    for name, _, hnf_file in corpus:
        h, catalog = read_hnf_file(hnf_file)
        catalog = catalogs.setdefault((catalog.c, catalog.d), catalog)
        units = compile_tester(compile_hnf(h, catalog), catalog, 1.0)
        for unit in units:
            for n in range(max_n + 1):
                checks += 1
                built = construct_member(unit, n, catalog)
                expected = brute_member_exists(unit, n, catalog)
                if (built is not None) != expected:
                    logger.warning(name + ' unit ' + str(unit.index) + ' n=' + str(n) +
                                   ': construct_member disagrees with search')
                    failures += 1
    return checks, failures


def catalog_suite():
    """
    Component type counts of C^2_1 and C^3_2.
    """
    expected = {(2, 1): 2, (3, 2): 4}
    failures = 0
    for (c, d), count in expected.items():
        if TypeCatalog(c, d).M != count:
            failures += 1
    return len(expected), failures


def run_selftest(quick=False):
    """
    Run every suite. quick shrinks the exhaustive sizes.
    """
    log_banner(logger, 'Self test')
    if quick:
        suites = [
            ('catalog', catalog_suite, {}),
            ('frobenius', frobenius_suite, {'max_size': 2}),
            ('crt', crt_suite, {'trials': 100}),
            ('equivalence', equivalence_suite, {'sizes': {(2, 1): 6, (3, 2): 6}}),
            ('members', member_suite, {'max_n': 12}),
        ]
    else:
        suites = [
            ('catalog', catalog_suite, {}),
            ('frobenius', frobenius_suite, {}),
            ('crt', crt_suite, {}),
            ('equivalence', equivalence_suite, {}),
            ('members', member_suite, {}),
        ]
    rows = []
    for name, suite, kwargs in suites:
        logger.info('Suite ' + name)
        checks, failures = suite(**kwargs)
        logger.info('... ' + str(checks) + ' checks, ' + str(failures) + ' failures')
        rows.append((name, checks, failures))
    return Table(rows=rows, names=('suite', 'checks', 'failures'))
