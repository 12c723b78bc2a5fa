import argparse
import logging
import os
import sys

from . import __version__, cli, render, verify
from .cube import ChainComplexError
from .fatgraph import CapExceeded, FatgraphError
from .laurent import IdentityMismatch, SubstitutionError

LIBRARY_ERRORS = (cli.DocumentError, FatgraphError, CapExceeded, ChainComplexError, SubstitutionError,
                  IdentityMismatch)


def _emit(text:str, output:str = None):
    if output:
        with open(output, 'w') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _suite_options(args) -> verify.SuiteOptions:
    return verify.SuiteOptions(max_edges=args.max_edges, max_vertices=args.max_vertices, seed=args.seed,
                               rotations_per_graph=args.rotations_per_graph, n_jobs=args.jobs, kind=args.kind,
                               witness_dir=args.witness_dir, max_embeddings=args.max_embeddings)


def dispatch(args) -> int:
    if args.command == 'verify':
        text, ok = cli.cmd_verify(args.suite, _suite_options(args))
        _emit(text, args.output)
        return 0 if ok else 1
    item = cli.load_document(args.input)
    if args.command == 'poly':
        text = cli.cmd_poly(item, args.which, args.json, args.nminus, args.nplus)
    elif args.command == 'table':
        text = cli.cmd_table(item)
    elif args.command == 'homology':
        text = cli.cmd_homology(item, args.family, args.normalized, args.nminus, args.nplus, args.poincare,
                                args.euler, args.jobs)
    elif args.command == 'complex':
        text = cli.cmd_complex(item, args.family, args.normalized, args.reflect)
    elif args.command == 'embeddings':
        text = cli.cmd_embeddings(item, args.genus, args.max_systems)
    elif args.command == 'augmentation':
        text = cli.cmd_augmentation(item, args.kind, args.values)
    else:
        name = args.name or os.path.splitext(os.path.basename(args.input))[0]
        text = cli.cmd_report(item, name, args.family, args.markdown)
        if args.output_dir:
            render.write_report(args.output_dir, name, text, args.markdown)
            return 0
    _emit(text, args.output)
    return 0


def main(args) -> int:
    try:
        return dispatch(args)
    except IOError as e:
        logging.error('Unable to open file: %s', e)
        return 1
    except LIBRARY_ERRORS as e:
        logging.error('%s: %s', type(e).__name__, e)
        return 1
    except Exception as e:
        logging.error('An error occurred: %s', e)
        return 1


def make_parser() -> argparse.ArgumentParser:
    arg_parser = argparse.ArgumentParser(prog='fathom', description='Fatgraph polynomials and homology.')
    arg_parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    arg_parser.add_argument('-v', '--verbose', action='count', default=0,
        help='Log progress (-v) or everything (-vv) to stderr')
    commands = arg_parser.add_subparsers(dest='command', required=True)

    def command(name, help_text, takes_input=True):
        parser = commands.add_parser(name, help=help_text)
        if takes_input:
            parser.add_argument('input', help='Fatgraph or graph document (JSON)')
        parser.add_argument('-o', '--output', help='Write to this file instead of stdout')
        return parser

    def sign_counts(parser):
        parser.add_argument('--nminus', type=int, default=None, help='Negative crossings (default: negative edges)')
        parser.add_argument('--nplus', type=int, default=None, help='Positive crossings (default: positive edges)')

    poly = command('poly', 'Print a polynomial invariant')
    poly.add_argument('which', choices=cli.POLYNOMIALS)
    poly.add_argument('--json', action='store_true', default=False, help='Print JSON instead of text')
    sign_counts(poly)

    command('table', 'Print every polynomial that applies to the input')

    homology = command('homology', 'Print the homology table of a complex family')
    homology.add_argument('family', choices=cli.HOMOLOGY_FAMILIES)
    homology.add_argument('--normalized', action='store_true', default=False,
        help='Chromatic family: use the normalized complex')
    homology.add_argument('--poincare', action='store_true', default=False, help='Print the Poincaré polynomial')
    homology.add_argument('--euler', action='store_true', default=False,
        help='Print the graded Euler characteristic')
    homology.add_argument('-j', '--jobs', type=int, default=1, help='Parallel jobs for the degree blocks')
    sign_counts(homology)

    dump = command('complex', 'Dump a chain complex (bases and differentials)')
    dump.add_argument('family', choices=cli.HOMOLOGY_FAMILIES)
    dump.add_argument('--normalized', action='store_true', default=False)
    dump.add_argument('--reflect', action='store_true', default=False,
        help='Khovanov family: edge-addition direction')

    embeddings = command('embeddings', 'List the rotation systems of a graph')
    embeddings.add_argument('--genus', type=int, default=None, help='Only rotation systems of this genus')
    embeddings.add_argument('--max-systems', type=int, default=None, help='Cap on the number of rotation systems')

    augmentation = command('augmentation', 'Check an augmentation out of the B complex')
    augmentation.add_argument('kind', choices=('f', 'g'))
    augmentation.add_argument('--values', type=int, nargs=2, default=(0, 0), metavar=('PLUS', 'MINUS'),
        help='g only: images of v+ and v-')

    report = command('report', 'Render an HTML (or Markdown) report')
    report.add_argument('--family', action='append', choices=cli.HOMOLOGY_FAMILIES,
        help='Homology families to include (repeatable, default chromatic)')
    report.add_argument('--name', default=None, help='Report title (default: the input file name)')
    report.add_argument('--markdown', action='store_true', default=False, help='Produce Markdown instead of HTML')
    report.add_argument('-d', '--output-dir', default=None,
        help='Write the report and stylesheet here (will be created if necessary)')

    suite = command('verify', 'Run a verification suite', takes_input=False)
    suite.add_argument('suite', choices=sorted(verify.SUITES))
    suite.add_argument('--max-edges', type=int, default=3)
    suite.add_argument('--max-vertices', type=int, default=3)
    suite.add_argument('--seed', type=int, default=0)
    suite.add_argument('--rotations-per-graph', type=int, default=None,
        help='Sample this many rotation systems per graph instead of all')
    suite.add_argument('-j', '--jobs', type=int, default=1)
    suite.add_argument('--kind', choices=verify.DECOMPOSITIONS, default='prop52',
        help='decomposition suite: which decomposition to check')
    suite.add_argument('--witness-dir', default=None, help='Write witness files for the search suites here')
    suite.add_argument('--max-embeddings', type=int, default=None,
        help='embedding suite: compare at most this many genus 0 rotation systems per graph')
    return arg_parser


def run(argv=None) -> int:
    args = make_parser().parse_args(argv)
    level = logging.WARNING if not args.verbose else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')
    if args.command == 'report' and not args.family:
        args.family = ['chromatic']
    return main(args)


if __name__ == '__main__':
    sys.exit(run())
