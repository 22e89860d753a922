"""
Command line front end for cuspcount.

    python -m frontend.commandline delta-path --shape 2,3+ --k 8
    python -m frontend.commandline weights 51 23
    python -m frontend.commandline perfect --base f1 --class 5l-2e --cusp 11 2
    python -m frontend.commandline --repro

Results go to stdout as deterministic JSON (or CSV / SVG / PNG / ASCII where the
subcommand supports it); logs and errors go to stderr.
"""
import argparse
import logging
import os
import sys

# Local Code
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from backend.backend_config import LOG_FORMAT, LOG_LEVEL
from backend.businesslogic import Workbench, parse_orbit, parse_perturbed, parse_shape, parse_tuple, validate_sign
from backend.dataaccess import DataAccess
from backend.exceptions import AmbiguityError, CuspCountError, DomainError, ParseError, SearchBudgetExceeded
from backend.repro import AcceptanceSuite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REPRO_FAILED = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_AMBIGUOUS = 4


class CommandLineParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors become ParseError (exit code 2)."""

    def error(self, message):
        raise ParseError(message, ' '.join(sys.argv[1:]), 0)


def _orbit_list(values):
    return tuple(parse_orbit(value) for value in values or ())


def build_parser():
    parser = CommandLineParser(prog='cuspcount', description='Exact combinatorics of ellipsoids, cusps and '
                                                             'perfect exceptional classes.')
    parser.add_argument('--repro', action='store_true', help='Run the acceptance suite and print a JSON report')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG logs')

    output = CommandLineParser(add_help=False)
    output.add_argument('--out', help='Write the result to this file instead of stdout')

    shape_k = CommandLineParser(add_help=False)
    shape_k.add_argument('--shape', required=True, help="Shape such as '2,3+' or '8,13,22'")
    shape_k.add_argument('--k', type=int, required=True)

    sub = parser.add_subparsers(dest='command', parser_class=CommandLineParser)

    sub.add_parser('spectrum', parents=[shape_k, output], help='First k orbits and actions')
    sub.add_parser('orbit', parents=[shape_k, output], help='The orbit o_k with its action and CZ index')
    sub.add_parser('delta-path', parents=[shape_k, output], help='The lattice tuple Delta_k')

    cz = sub.add_parser('cz', parents=[output], help='Conley-Zehnder index of an orbit')
    cz.add_argument('--shape', required=True)
    cz.add_argument('--orbit', required=True, help="axis:multiplicity, e.g. 1:3")

    formal = sub.add_parser('formal-index', parents=[output], help='Index and energy of a formal curve')
    formal.add_argument('--shape', required=True)
    formal.add_argument('--pos', nargs='*', default=[], help='Positive ends (symplectization)')
    formal.add_argument('--neg', nargs='*', default=[], help='Negative ends')
    formal.add_argument('--c1', type=int, help='Chern number of the class (cobordism curve)')
    formal.add_argument('--area', help='Area of the class (cobordism curve)')

    assumptions = sub.add_parser('check-assumptions', parents=[output], help='Assumptions A, B, C')
    assumptions.add_argument('--shape', required=True)
    assumptions.add_argument('--c1', type=int, required=True)
    assumptions.add_argument('--divisibility', type=int, default=1)
    assumptions.add_argument('--conditions', action='store_true', help='Also decide conditions B and C')

    hidden = sub.add_parser('hidden-constraint', parents=[output], help='Admissibility of a degeneration')
    hidden.add_argument('--m', required=True, help="Constraint tuple, e.g. 3,2")
    hidden.add_argument('--part', action='append', required=True, help='One part per flag, e.g. --part 2,1')

    weights = sub.add_parser('weights', parents=[output], help='Weight sequence W(p, q)')
    weights.add_argument('p', type=int)
    weights.add_argument('q', type=int)

    box = sub.add_parser('box', parents=[output], help='Box diagram of the (p, q) cusp')
    box.add_argument('p', type=int)
    box.add_argument('q', type=int)
    box.add_argument('--format', default='ascii', choices=['ascii', 'svg', 'png', 'json'])
    box.add_argument('--scale', type=int, help='Pixels per unit for svg and png')

    resolve = sub.add_parser('resolve', parents=[output], help='Resolution chain of the (p, q) cusp')
    resolve.add_argument('p', type=int)
    resolve.add_argument('q', type=int)
    resolve.add_argument('--puiseux', nargs='+', help='Puiseux pairs to convert to cabling, e.g. 2,3 2,7')

    for name, text in (('perfect', 'Certify a (p, q)-perfect exceptional class'),
                       ('cremona', 'Cremona reduction trace of a class')):
        command = sub.add_parser(name, parents=[output], help=text)
        command.add_argument('--base', required=True, choices=['cp2', 'f1'])
        command.add_argument('--class', dest='klass', required=True, help="e.g. 5l-2e or 3L-e1-e2")
        if name == 'perfect':
            command.add_argument('--cusp', nargs=2, type=int, required=True, metavar=('P', 'Q'))

    f1 = sub.add_parser('f1-staircase', parents=[output], help='Perfect classes of F_1')
    f1.add_argument('--max-p', type=int, required=True)
    f1.add_argument('--recursion', type=int, help='Also list quadruple(j) for j = 1..N')
    f1.add_argument('--r-orbits', action='store_true', help='Report whether R maps classes to classes')
    f1.add_argument('--format', default='json', choices=['json', 'csv'])

    obstruction = sub.add_parser('obstruction', parents=[output], help='Embedding bound of a class')
    obstruction.add_argument('--shape', required=True)
    obstruction.add_argument('--c1', type=int, required=True)
    obstruction.add_argument('--area', required=True)
    obstruction.add_argument('--divisibility', type=int, default=1)
    obstruction.add_argument('--no-nonvanishing', dest='nonvanishing', action='store_false',
                             help='Do not assert that the class has a nonvanishing invariant')

    staircase = sub.add_parser('staircase', parents=[output], help='Staircase profile table')
    staircase.add_argument('--base', default='f1', choices=['f1', 'cp2'])
    staircase.add_argument('--max-p', type=int, required=True)
    staircase.add_argument('--sign', default='+', help="'+' for (q, p+eps), '-' for (q, p-eps)")
    staircase.add_argument('--format', default='csv', choices=['csv', 'json'])
    return parser


def configure_logging(verbosity):
    level = LOG_LEVEL
    if verbosity == 1:
        level = 'INFO'
    elif verbosity >= 2:
        level = 'DEBUG'
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def execute(args):
    """
    Runs one subcommand.

    Returns:
        (payload, kind): kind is 'json', 'text', 'bytes' or 'table'.
    """
    command = args.command
    if command == 'spectrum':
        return Workbench.spectrum(parse_shape(args.shape), args.k), 'json'
    if command == 'orbit':
        return Workbench.orbit(parse_shape(args.shape), args.k), 'json'
    if command == 'delta-path':
        return Workbench.delta_path(parse_shape(args.shape), args.k), 'json'
    if command == 'cz':
        return Workbench.cz(parse_shape(args.shape), parse_orbit(args.orbit)), 'json'
    if command == 'formal-index':
        area = parse_perturbed(args.area) if args.area is not None else None
        return Workbench.formal_index(parse_shape(args.shape), _orbit_list(args.pos), _orbit_list(args.neg),
                                      args.c1, area), 'json'
    if command == 'check-assumptions':
        return Workbench.check_assumptions(parse_shape(args.shape), args.c1, args.divisibility,
                                           args.conditions), 'json'
    if command == 'hidden-constraint':
        return Workbench.hidden_constraint(parse_tuple(args.m), [parse_tuple(part) for part in args.part]), 'json'
    if command == 'weights':
        return Workbench.weights(args.p, args.q), 'json'
    if command == 'box':
        rendered = Workbench.box(args.p, args.q, args.format, args.scale)
        kinds = {'png': 'bytes', 'json': 'json'}
        return rendered, kinds.get(args.format, 'text')
    if command == 'resolve':
        pairs = [tuple(parse_tuple(pair)) for pair in args.puiseux] if args.puiseux else None
        return Workbench.resolve(args.p, args.q, pairs), 'json'
    if command == 'perfect':
        return Workbench.perfect(args.base, args.klass, *args.cusp), 'json'
    if command == 'cremona':
        return Workbench.cremona(args.base, args.klass), 'json'
    if command == 'f1-staircase':
        quadruples, table, extras = Workbench.f1_staircase(args.max_p, args.recursion, args.r_orbits)
        if args.format == 'csv':
            return table, 'table'
        return {'classes': quadruples, **extras}, 'json'
    if command == 'obstruction':
        return Workbench.obstruction(parse_shape(args.shape), args.c1, parse_perturbed(args.area),
                                     args.divisibility, args.nonvanishing), 'json'
    if command == 'staircase':
        table = Workbench.staircase(args.base, args.max_p, validate_sign(args.sign))
        return (table, 'table') if args.format == 'csv' else (table, 'json')
    raise ParseError(f"Unknown subcommand '{command}'", command or '', 0)


def emit(payload, kind, out=None, data=None):
    """Serializes the result once, to --out if given and to stdout otherwise."""
    data = data or DataAccess()
    if kind == 'table':
        text = data.table_to_csv(payload)
    elif kind == 'json':
        text = data.dumps(payload) + '\n'
    else:
        text = payload

    if out:
        target = os.path.abspath(out)
        if kind == 'table' and target.lower().endswith('.xlsx'):
            data.write_table(payload, target)
        elif kind == 'bytes':
            data.write_bytes(payload, target)
        else:
            data.write_text(text, target)
        sys.stdout.write(data.dumps({'written': target}) + '\n')
        return
    if kind == 'bytes':
        sys.stdout.buffer.write(payload)
    else:
        sys.stdout.write(text)


def _report_error(error):
    sys.stderr.write(DataAccess.dumps({'error': type(error).__name__, 'message': str(error)}) + '\n')


def run(argv=None):
    """
    Parses argv, runs the subcommand (or the acceptance suite) and returns the exit code.
    """
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.verbose)
        if args.repro:
            report = AcceptanceSuite().run()
            emit(report, 'json')
            return EXIT_OK if report['passed'] else EXIT_REPRO_FAILED
        if not args.command:
            raise ParseError("A subcommand or --repro is required", ' '.join(argv or sys.argv[1:]), 0)
        payload, kind = execute(args)
        emit(payload, kind, getattr(args, 'out', None))
        return EXIT_OK
    except ParseError as error:
        _report_error(error)
        return EXIT_PARSE
    except AmbiguityError as error:
        _report_error(error)
        return EXIT_AMBIGUOUS
    except (DomainError, SearchBudgetExceeded, CuspCountError, OSError) as error:
        _report_error(error)
        return EXIT_DOMAIN


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
