"""
Command line interface.

    fomod-tester types -c 2 -d 1
    fomod-tester compile --hnf psi.hnf.json -o psi.templates.json
    fomod-tester eval --sentence psi.fo --graph g.txt
    fomod-tester test --templates psi.templates.json --family EDGES:n=1000000 --epsilon 0.1
    fomod-tester gen --family EDGES --n 6 -c 2 -d 1 -o g6.txt
    fomod-tester plan --templates psi.templates.json --unit 1 --n 6
    fomod-tester experiment --config fomod_keys/master_key.txt
    fomod-tester selftest --quick

Exit codes: 0 accept or success, 1 reject, 2 usage error, 3 input not
in C^c_d, 4 resource guard exceeded.
"""

import argparse
import json
import logging
import sys

from astropy.table import Table

from .graphCore import ExplicitOracle, read_graph_file, write_graph_file
from .handlerCompile import CompileHandler, compile_sentence_file, hnf_companion
from .handlerExperiment import ExperimentHandler
from .handlerKeys import KeyHandler
from .hnfCompiler import read_templates, write_templates
from .logicAst import eval_exact, read_sentence_file
from .testerLogger import setup_logger
from .testerRuntime import Decision, compile_tester, construct_member, run_union
from .testerVersion import version
from .typeCatalog import TypeCatalog, code_to_hex
from .utilsErrors import ArgumentError, InternalInvariantError, NotInClassError, TesterError
from .utilsFamilies import gen_family, parse_family
from .utilsKeyReaders import DEFAULT_GUARDS
from .utilsOracles import run_selftest

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)

EXIT_OK = 0
EXIT_REJECT = 1


def _vector_arg(text):
    try:
        return tuple(int(x) for x in text.replace(',', '/').split('/'))
    except ValueError:
        raise argparse.ArgumentTypeError('expected counts separated by "/", got ' + repr(text))


def build_parser():
    parser = argparse.ArgumentParser(prog='fomod-tester',
                                     description='Constant-query testers for FO+MOD properties '
                                                 'of graphs with small components.')
    parser.add_argument('--version', action='version', version=version)
    parser.add_argument('--log-level', default='WARNING',
                        help='DEBUG, INFO, WARNING or ERROR (default WARNING)')
    parser.add_argument('--logfile', default=None)
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('types', help='list component and ball types of C^c_d')
    p.add_argument('-c', type=int, required=True)
    p.add_argument('-d', type=int, required=True)
    p.add_argument('-o', '--output', default=None, help='write the catalog as JSON')

    p = sub.add_parser('compile', help='compile a Hanf sentence into templates')
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument('--sentence', help='FO+MOD file with a <stem>.hnf.json companion')
    source.add_argument('--hnf', help='Hanf sentence JSON file')
    p.add_argument('-c', type=int, default=None)
    p.add_argument('-d', type=int, default=None)
    p.add_argument('--certify-n', type=int, default=8,
                   help='check against the sentence on all graphs up to this size')
    p.add_argument('-o', '--output', required=True)

    p = sub.add_parser('eval', help='evaluate a sentence on a graph')
    p.add_argument('--sentence', required=True)
    p.add_argument('--graph', required=True)

    p = sub.add_parser('test', help='run the union tester')
    p.add_argument('--templates', required=True)
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument('--graph')
    target.add_argument('--family', help='NAME:key=value,... e.g. EDGES:n=1000000')
    p.add_argument('--epsilon', type=float, required=True)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--trials', type=int, default=None,
                   help='trials per unit (default ceil(18 ln(3 units)))')
    p.add_argument('--ball-count', type=int, default=None,
                   help='ball-type count for the sample size (default: catalog N)')
    p.add_argument('--report', choices=['json', 'text'], default='text')
    p.add_argument('-o', '--output', default=None)

    p = sub.add_parser('gen', help='write a family graph')
    p.add_argument('--family', required=True)
    p.add_argument('--n', type=int, default=None)
    p.add_argument('--chv', type=_vector_arg, default=None)
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('-c', type=int, default=2)
    p.add_argument('-d', type=int, default=1)
    p.add_argument('-o', '--output', required=True)

    p = sub.add_parser('plan', help='construct a member graph for one unit')
    p.add_argument('--templates', required=True)
    p.add_argument('--unit', type=int, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--epsilon', type=float, default=1.0)
    p.add_argument('-o', '--output', default=None)

    p = sub.add_parser('experiment', help='compile and run the experiments of a master key')
    p.add_argument('--config', required=True, help='master key file')
    p.add_argument('--only', nargs='*', default=[])
    p.add_argument('--skip-compile', action='store_true')
    p.add_argument('--dry-run', action='store_true')

    p = sub.add_parser('selftest', help='run the exhaustive oracle suites')
    p.add_argument('--quick', action='store_true')

    return parser


def _catalog_for(compiled):
    return TypeCatalog(compiled.c, compiled.d, canonical_cap=DEFAULT_GUARDS['canonical_cap'],
                       type_guard=DEFAULT_GUARDS['type_guard'])


def cmd_types(args):
    catalog = TypeCatalog(args.c, args.d)
    rows = [(t.index, t.size, t.representative.num_edges(), code_to_hex(t.code))
            for t in catalog.comp_types]
    Table(rows=rows, names=('index', 'size', 'edges', 'code')).pprint_all()
    print('M = ' + str(catalog.M) + ', N = ' + str(catalog.N) + ', hash ' +
          catalog.catalog_hash())
    if args.output:
        with open(args.output, 'w') as outfile:
            json.dump(catalog.to_json(), outfile, indent=1)
            outfile.write('\n')
    return EXIT_OK


def cmd_compile(args):
    if args.sentence:
        hnf_file = hnf_companion(args.sentence)
        sentence_file = args.sentence
    else:
        hnf_file, sentence_file = args.hnf, None
    compiled, catalog = compile_sentence_file(hnf_file, sentence_file=sentence_file,
                                              certify_max_n=args.certify_n)
    for value, name in ((args.c, 'c'), (args.d, 'd')):
        if value is not None and value != getattr(catalog, name):
            raise ArgumentError('Hanf file is for ' + name + '=' + str(getattr(catalog, name)))
    write_templates(compiled, args.output)
    print(str(len(compiled.templates)) + ' templates, k = ' + str(compiled.k))
    for template in compiled.templates:
        print('  ' + template.describe())
    return EXIT_OK


def cmd_eval(args):
    sentence = read_sentence_file(args.sentence)
    graph, _ = read_graph_file(args.graph)
    result = eval_exact(graph, sentence, cap=DEFAULT_GUARDS['eval_cap'])
    print('true' if result else 'false')
    return EXIT_OK if result else EXIT_REJECT


def cmd_test(args):
    compiled = read_templates(args.templates)
    catalog = _catalog_for(compiled)
    if args.graph:
        graph, d = read_graph_file(args.graph)
        if d > catalog.d:
            raise NotInClassError('Graph file declares degree bound ' + str(d) + ' above ' +
                                  str(catalog.d))
        oracle = ExplicitOracle(graph, d=catalog.d)
    else:
        oracle = gen_family(parse_family(args.family), catalog)
    units = compile_tester(compiled, catalog, args.epsilon, ball_count=args.ball_count)
    if units:
        verdict = run_union(units, oracle, catalog, seed=args.seed, trials=args.trials)
        report = verdict.to_dict()
    else:
        verdict = None
        report = {'decision': Decision.REJECT.value, 'seed': args.seed, 'queries': 0,
                  'units': {}, 'trials': []}
    report['n'] = oracle.n
    report['epsilon'] = args.epsilon
    report['unit_parameters'] = [u.to_dict() for u in units]
    for entry in report['unit_parameters']:
        entry['n_prime'] = oracle.n - units[entry['index']].rare_budget - \
            units[entry['index']].fixed_budget
    if args.report == 'json':
        text = json.dumps(report, indent=1, sort_keys=True)
    else:
        lines = ['decision ' + report['decision'], 'n ' + str(oracle.n),
                 'queries ' + str(report['queries'])]
        for entry in report['unit_parameters']:
            lines.append('unit ' + str(entry['index']) + ' ' + entry['template'] +
                         ' -> ' + report['units'].get(str(entry['index']), '-') +
                         '  q=' + str(entry['q']) + ' n0=' + str(entry['n0']) +
                         ' g=' + str(entry['g']) + " n'=" + str(entry['n_prime']))
        text = '\n'.join(lines)
    if args.output:
        with open(args.output, 'w') as outfile:
            outfile.write(text + '\n')
    else:
        print(text)
    decision = verdict.decision if verdict is not None else Decision.REJECT
    if decision is Decision.NOT_IN_CLASS:
        return NotInClassError.exit_code
    return EXIT_OK if decision is Decision.ACCEPT else EXIT_REJECT


def cmd_gen(args):
    catalog = TypeCatalog(args.c, args.d)
    spec = parse_family(args.family, n=args.n, chv_values=args.chv, seed=args.seed)
    oracle = gen_family(spec, catalog)
    write_graph_file(oracle.materialize(), catalog.d, args.output)
    print('wrote ' + spec.describe() + ' with ' + str(oracle.n) + ' vertices')
    return EXIT_OK


def cmd_plan(args):
    compiled = read_templates(args.templates)
    catalog = _catalog_for(compiled)
    units = compile_tester(compiled, catalog, args.epsilon)
    if not 0 <= args.unit < len(units):
        raise ArgumentError('Unit ' + str(args.unit) + ' outside 0..' + str(len(units) - 1))
    graph = construct_member(units[args.unit], args.n, catalog)
    if graph is None:
        print('NONE')
        return EXIT_REJECT
    if args.output:
        write_graph_file(graph, catalog.d, args.output)
    else:
        print(str(graph.n) + ' ' + str(catalog.d))
        for u, v in graph.edges():
            print(str(u) + ' ' + str(v))
    return EXIT_OK


def cmd_experiment(args):
    this_kh = KeyHandler(master_key=args.config)
    if not args.skip_compile:
        this_ch = CompileHandler(key_handler=this_kh, dry_run=args.dry_run)
        this_ch.loop_compile_sentences()
    this_eh = ExperimentHandler(key_handler=this_kh, dry_run=args.dry_run)
    this_eh.set_experiments(only=args.only)
    results = this_eh.loop_experiments()
    failed = 0
    for name, table in sorted(results.items()):
        if table is None:
            continue
        table.pprint_all()
        failed += int((~table['passed']).sum()) if len(table) else 0
    return EXIT_OK if failed == 0 else EXIT_REJECT


def cmd_selftest(args):
    table = run_selftest(quick=args.quick)
    table.pprint_all()
    return EXIT_OK if int(table['failures'].sum()) == 0 else EXIT_REJECT


COMMANDS = {
    'types': cmd_types,
    'compile': cmd_compile,
    'eval': cmd_eval,
    'test': cmd_test,
    'gen': cmd_gen,
    'plan': cmd_plan,
    'experiment': cmd_experiment,
    'selftest': cmd_selftest,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logger(level=args.log_level, logfile=args.logfile)
    try:
        return COMMANDS[args.command](args)
    except InternalInvariantError as err:
        logger.exception(str(err))
        return err.exit_code
    except TesterError as err:
        logger.error(str(err))
        return err.exit_code


def console_main():
    sys.exit(main())


if __name__ == '__main__':
    console_main()
