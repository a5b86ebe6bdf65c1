"""
Experiment driver: sweeps families, sizes and proximity parameters,
runs the union tester repeatedly and tabulates acceptance frequencies
and query counts.

Reports are astropy Tables. The JSON report omits timing and is
identical for equal master seeds; the text report adds wall times.
"""

import json
import logging
import os
import time
from dataclasses import replace

import numpy as np
from astropy.table import Table

from .handlerTemplate import HandlerTemplate
from .hnfCompiler import read_templates
from .testerLogger import log_banner
from .testerRuntime import Decision, compile_tester, query_bound, run_union
from .utilsErrors import ArgumentError
from .utilsFamilies import certify_far, gen_family, parse_family
from .utilsKeyReaders import DEFAULT_GUARDS

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)

# target rate 2/3 with a 0.05 tolerance
EXPECTED_RATE = 0.61

REPORT_COLUMNS = ['experiment', 'family', 'n', 'epsilon', 'repeats', 'units', 'q', 'n0_min',
                  'accept_rate', 'mean_queries', 'max_queries', 'query_bound', 'padded',
                  'certificate', 'expect', 'expected_rate', 'passed']


def repeat_seed(seed, cell, repeat):
    """
    Seed of one tester run, derived from the master seed.
    """
    state = np.random.SeedSequence(seed, spawn_key=(cell, repeat)).generate_state(1)
    return int(state[0])


def family_for_cell(params, n):
    spec = parse_family(params['family'], n=n)
    if params['chv']:
        spec = replace(spec, chv=tuple(int(x) for x in params['chv']), n=None)
    if params['mix']:
        spec = replace(spec, mix=tuple(float(x) for x in params['mix']))
    if spec.name == 'RANDOM_MIX':
        spec = replace(spec, seed=params['seed'])
    return spec


def run_experiment(name, params, compiled, catalog, guards=None):
    """
    Run every (n, epsilon) cell of one experiment. Cells are processed in
    sorted order. Returns the report Table; wall times are in the
    'wall_time' column.
    """
    if guards is None:
        guards = DEFAULT_GUARDS
    log_banner(logger, 'Experiment ' + name)
    rows = []
    cells = sorted((int(n), float(eps)) for n in params['n_list']
                   for eps in params['epsilon_list'])
    for cell, (n, epsilon) in enumerate(cells):
        start = time.time()
        spec = family_for_cell(params, n)
        oracle = gen_family(spec, catalog)
        units = compile_tester(compiled, catalog, epsilon,
                               expansion_guard=guards['expansion_guard'],
                               frobenius_guard=guards['frobenius_guard'])
        certificate = ''
        if params['expect'] == 'REJECT':
            certificate = certify_far(oracle, compiled, catalog, epsilon,
                                      edit_distance_cap=guards['edit_distance_cap'],
                                      member_enum_guard=guards['member_enum_guard']).status
        accepts = 0
        queries = []
        for repeat in range(params['repeats']):
            if not units:
                queries.append(0)
                continue
            oracle.reset_queries()
            verdict = run_union(units, oracle, catalog, seed=repeat_seed(params['seed'], cell,
                                                                           repeat),
                                c0=guards['amplification_c0'],
                                trials=params['trials'] or None)
            if verdict.decision is Decision.NOT_IN_CLASS:
                raise ArgumentError('Family ' + spec.describe() + ' is not in C^' +
                                    str(catalog.c) + '_' + str(catalog.d))
            if verdict.decision is Decision.ACCEPT:
                accepts += 1
            queries.append(verdict.queries)
        accept_rate = accepts / params['repeats']
        if params['expect'] == 'ACCEPT':
            expected_rate = accept_rate
        elif params['expect'] == 'REJECT':
            expected_rate = 1.0 - accept_rate
        else:
            expected_rate = float('nan')
        passed = (params['expect'] == '' or
                  (expected_rate >= EXPECTED_RATE and
                   (params['expect'] == 'ACCEPT' or certificate == 'CERTIFIED')))
        rows.append({
            'experiment': name,
            'family': spec.describe(),
            'n': oracle.n,
            'epsilon': epsilon,
            'repeats': params['repeats'],
            'units': len(units),
            'q': units[0].q if units else 0,
            'n0_min': min(u.n0 for u in units) if units else 0,
            'accept_rate': accept_rate,
            'mean_queries': float(np.mean(queries)),
            'max_queries': int(np.max(queries)),
            'query_bound': max(query_bound(u) for u in units) if units else 0,
            'padded': getattr(oracle, 'padded', 0),
            'certificate': certificate,
            'expect': params['expect'],
            'expected_rate': expected_rate,
            'passed': bool(passed),
            'wall_time': time.time() - start,
        })
        logger.info('... n=' + str(n) + ' eps=' + str(epsilon) + ' accept=' +
                    str(accept_rate) + ' queries<=' + str(rows[-1]['max_queries']))
    columns = REPORT_COLUMNS + ['wall_time']
    if not rows:
        return Table(names=columns)
    return Table(rows=[tuple(row[col] for col in columns) for row in rows], names=columns)


def _json_value(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return None if np.isnan(value) else value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, bytes):
        return value.decode()
    return value


def write_report(table, json_file=None, text_file=None):
    """
    JSON without timing, fixed-width text with it.
    """
    if json_file is not None:
        rows = [{col: _json_value(row[col]) for col in REPORT_COLUMNS} for row in table]
        with open(json_file, 'w') as outfile:
            json.dump(rows, outfile, indent=1, sort_keys=True)
            outfile.write('\n')
        logger.info('Wrote ' + json_file)
    if text_file is not None:
        table.write(text_file, format='ascii.fixed_width', overwrite=True)
        logger.info('Wrote ' + text_file)


class ExperimentHandler(HandlerTemplate):
    """
    Runs the experiments listed in the experiment keys against compiled
    templates in the output root.
    """

    def task_run_experiment(self, experiment=None, write=True):
        if self._kh is None:
            raise ArgumentError('ExperimentHandler needs a key handler.')
        params = self._kh.get_experiment_params(experiment)
        info = self._kh.get_sentence_info(params['sentence'])
        templates_file = self._kh.get_templates_file(params['sentence'])
        if self._dry_run:
            logger.info('... dry run, would run ' + experiment + ' on ' + templates_file)
            return None
        if not os.path.isfile(templates_file):
            raise ArgumentError('No templates for ' + params['sentence'] + ' at ' +
                                templates_file + '. Run the compile loop first.')
        catalog = self.get_catalog(info['c'], info['d'])
        compiled = read_templates(templates_file, catalog=catalog)
        table = run_experiment(experiment, params, compiled, catalog, guards=self.get_guards())
        if write:
            self._kh.make_output_root()
            write_report(table, json_file=self._kh.get_report_file(experiment, 'json'),
                         text_file=self._kh.get_report_file(experiment, 'txt'))
        return table

    def loop_experiments(self, write=True):
        """
        Run all selected experiments, sorted by name. Returns
        {experiment: Table}.
        """
        results = {}
        for this_experiment in self.looper(do_experiments=True):
            results[this_experiment] = self.task_run_experiment(this_experiment, write=write)
        return results
