#!/usr/bin/env python3
"""
smithbar CLI - Command Line Interface

Entry point for the ``smithbar`` command. Results go to standard output (JSON
or short ``key=value`` lines), errors to standard error as ``E:<kind>:<message>``.
Exit codes: 0 success or check holds, 1 check violated, 2 usage or input error.
"""

import argparse
import logging
import os
import random
import sys
from typing import List, Optional

import numpy as np

from .core.config import (
    get_grid, get_n0, get_residual_tolerance, get_seed, get_tolerance,
    reset_config, set_config, validate_config,
)
from .core.errors import ConsistencyViolation, InputError, SmithbarError
from .utils.formatters import (
    dump_json, format_bound, format_rational, parse_rational, read_data_file,
    read_text_file, write_json_file, write_text_file,
)
from .utils.logger import get_logger, set_level

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2


class SmithbarParser(argparse.ArgumentParser):
    """Argument parser reporting usage errors with the ``E:<kind>:`` prefix."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"E:UsageError:{message}\n")


def rational(text: str):
    try:
        return parse_rational(text)
    except InputError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--tol', type=float, default=None,
                        help='Eigenvalue zero tolerance (default: 1e-9, env: SB_TOL)')
    common.add_argument('--seed', type=int, default=None,
                        help='Seed for randomized checks (default: 0, env: SB_SEED)')
    common.add_argument('--n0', type=int, default=None,
                        help='Blocks per unit of the rotation tuple (default: 4, env: SB_N0)')
    common.add_argument('--grid', type=int, default=None,
                        help='Points of the action sweep grid (default: 401, env: SB_GRID)')
    common.add_argument('--json', dest='json_path', default=None,
                        help='Also write the JSON report to this path')
    common.add_argument('--debug', action='store_true', help='Enable debug logging')
    return common


def _load_env() -> None:
    """Load .env file if present. Searches CWD then ~/.smithbar/."""
    try:
        from dotenv import load_dotenv
    except ImportError:
        return
    candidates = [
        os.path.join(os.getcwd(), '.env'),
        os.path.expanduser('~/.smithbar/.env'),
    ]
    for path in candidates:
        if os.path.isfile(path):
            load_dotenv(path, override=False)  # env already set takes priority
            logger.info(f'Loaded .env from {path}')
            break


def get_default_config(args: argparse.Namespace) -> dict:
    """Build config: .env / env vars provide defaults; CLI args override."""
    reset_config()
    return {
        'tol': args.tol if getattr(args, 'tol', None) is not None else get_tolerance(),
        'residual_tol': get_residual_tolerance(),
        'n0': args.n0 if getattr(args, 'n0', None) is not None else get_n0(),
        'grid': args.grid if getattr(args, 'grid', None) is not None else get_grid(),
        'seed': args.seed if getattr(args, 'seed', None) is not None else get_seed(),
        'debug': getattr(args, 'debug', False),
        'version': __import__('smithbar').__version__,
    }


def emit(args: argparse.Namespace, data: dict) -> None:
    sys.stdout.write(dump_json(data))
    if getattr(args, 'json_path', None):
        write_json_file(args.json_path, data)


def _status(holds: bool) -> int:
    return EXIT_OK if holds else EXIT_VIOLATED


# ---------------------------------------------------------------------------
# Complexes and barcodes
# ---------------------------------------------------------------------------

def _field_arg(args):
    from .algebra.field import parse_field
    return parse_field(args.field) if getattr(args, 'field', None) else None


def _read_barcode(path):
    from .topology.persistence import barcode_from_json
    return barcode_from_json(read_data_file(path))


def _read_periodic(path):
    from .periodic.barcode import periodic_from_json
    return periodic_from_json(read_data_file(path))


def cmd_barcode(args):
    """Compute the barcode of a complex file."""
    from .topology.complex import parse_complex
    from .topology.persistence import barcode_to_json, compute_barcode
    from .utils.svg import render_barcode_svg

    barcode = compute_barcode(parse_complex(read_text_file(args.complex), field=_field_arg(args)))
    emit(args, barcode_to_json(barcode))
    if args.svg:
        write_text_file(args.svg, render_barcode_svg(barcode, title=os.path.basename(args.complex)))
    return EXIT_OK


def cmd_window(args):
    from .topology.persistence import window_dimension

    dim = window_dimension(_read_barcode(args.barcode), args.a, args.b)
    emit(args, {'a': format_rational(args.a), 'b': format_rational(args.b), 'dimension': dim})
    return EXIT_OK


def cmd_bottleneck(args):
    from .topology.bottleneck import bottleneck_distance

    dist = bottleneck_distance(_read_barcode(args.barcode1), _read_barcode(args.barcode2))
    emit(args, {'distance': format_bound(dist)})
    return EXIT_OK


def cmd_compare_fields(args):
    from .topology.persistence import compare_fields

    specs = [s.strip() for s in args.fields.split(',') if s.strip()]
    report = compare_fields(read_text_file(args.complex), specs)
    emit(args, report)
    return EXIT_OK


def cmd_smith_complex(args):
    from .topology.complex import parse_complex, smith_dimension_check

    report = smith_dimension_check(parse_complex(read_text_file(args.complex), field=_field_arg(args)))
    emit(args, report)
    return _status(report['holds'])


# ---------------------------------------------------------------------------
# Periodic barcodes
# ---------------------------------------------------------------------------

def cmd_periodic_stats(args):
    from .periodic.barcode import (
        assemble_N, beta_stats, betamax_validate, homological_count, local_data_from_json,
    )
    from .utils.svg import render_periodic_svg

    pb = _read_periodic(args.pbarcode)
    stats = beta_stats(pb)
    validation = betamax_validate(pb)
    report = {
        'betas': [format_rational(b) for b in stats.betas],
        'beta_max': format_rational(stats.beta_max),
        'beta_tot': format_rational(stats.beta_tot),
        'K': stats.K,
        'N': homological_count(pb),
        'betamax_validate': validation,
    }
    holds = validation['holds']
    if args.local:
        try:
            total = assemble_N(pb.d, local_data_from_json(read_data_file(args.local)), pb)
            report['local'] = {'N': total, 'holds': True}
        except ConsistencyViolation as e:
            report['local'] = {'holds': False, 'message': str(e)}
            holds = False
    emit(args, report)
    if args.svg:
        a, b = args.window or (pb.spectral[0] - 1, pb.spectral[0] + 2)
        write_text_file(args.svg, render_periodic_svg(pb, a, b))
    return _status(holds)


def cmd_betatot_integral(args):
    from .periodic.barcode import beta_stats, betatot_integral, window_integral

    pb = _read_periodic(args.pbarcode)
    value = betatot_integral(pb, args.a, args.n)
    beta_tot = beta_stats(pb).beta_tot
    emit(args, {
        'integral': format_rational(window_integral(pb, args.a, args.n)),
        'betatot_integral': format_rational(value),
        'beta_tot': format_rational(beta_tot),
        'holds': value == beta_tot,
    })
    return _status(value == beta_tot)


def cmd_smith(args):
    from .periodic.barcode import random_smith_windows, smith_barcode_check

    pb, pb_p = _read_periodic(args.pbarcode), _read_periodic(args.pbarcode_p)
    windows = [tuple(w) for w in args.window or []]
    if args.samples:
        rng = random.Random(get_seed())
        windows += random_smith_windows(pb, pb_p, args.p, args.samples, rng)
    report = smith_barcode_check(pb, pb_p, args.p, windows)
    emit(args, report)
    return _status(report['holds'])


def cmd_hz(args):
    from .periodic.certificate import hz_certificate, hz_scan, parse_primes

    primes = parse_primes(args.primes)
    report = hz_certificate(args.d, args.betatot, args.n, args.B, primes)
    minimal = report['min_prime_A']
    print(f"A={minimal if minimal is not None else 'none'}")
    if args.scan:
        scanned = hz_scan(args.d, args.betatot, args.n, args.B, args.scan)
        report['scan'] = scanned
        print(f"scan={scanned if scanned is not None else 'none'}")
    if args.json_path:
        write_json_file(args.json_path, report)
    return _status(minimal is not None)


# ---------------------------------------------------------------------------
# Generating functions
# ---------------------------------------------------------------------------

def cmd_qindex(args):
    from .genfun.forms import build_Qn, real_signature

    ind, null, coind = real_signature(build_Qn(args.n, args.d))
    print(f"ind={ind} coind={coind} null={null}")
    return EXIT_OK


def cmd_maslov(args):
    from .genfun.spectrum import maslov_index_check

    report = maslov_index_check(args.d, args.m, args.t)
    emit(args, report)
    return _status(report['holds'])


def cmd_rotation(args):
    from .genfun.spectrum import CLASS_TOL, rotation_barcode, rotation_power_barcode
    from .periodic.barcode import periodic_to_json
    from .utils.svg import render_periodic_svg

    if args.power:
        result = rotation_power_barcode(args.coeffs, args.power, args.m, n=args.steps)
    else:
        result = rotation_barcode(args.coeffs, args.m, n=args.steps)
    report = result.to_json()
    report['barcode'] = periodic_to_json(result.barcode)
    emit(args, report)
    if args.svg:
        start = result.barcode.spectral[0]
        write_text_file(args.svg, render_periodic_svg(result.barcode, start - 1, start + 2))
    return _status(result.max_class_error <= CLASS_TOL)


def cmd_spectrum(args):
    from .genfun.spectrum import critical_spectrum
    from .genfun.tuples import tuple_from_json

    sigma = tuple_from_json(read_data_file(args.tuple))
    sample = critical_spectrum(sigma, args.m)
    emit(args, sample.to_json())
    return EXIT_OK


def cmd_verify_identities(args):
    from .genfun.identities import identity_suite, smith_fixed_locus_check
    from .genfun.tuples import random_quadratic_tuple, tuple_from_json

    rng = np.random.default_rng(get_seed())
    if args.tuple:
        sigma = tuple_from_json(read_data_file(args.tuple))
        sigma2 = tuple_from_json(read_data_file(args.tuple2)) if args.tuple2 else sigma
    else:
        sigma = random_quadratic_tuple(args.d, args.size, rng, scale=args.scale)
        sigma2 = random_quadratic_tuple(args.d, args.size2, rng, scale=args.scale)

    report = {}
    if args.suite in ('all', 'identities'):
        report['identities'] = identity_suite(sigma, sigma2, seeds=args.samples)
    if args.suite in ('all', 'smith'):
        rows = []
        for p in (2, 3, 5):
            half = (p - 1) // 2
            for q in ([0] if p == 2 else range(-half, half + 1)):
                rows.append(smith_fixed_locus_check(sigma, args.m, args.t, p, q, samples=args.samples))
        report['smith'] = rows
    holds = all(row['pass'] for row in report.get('identities', {}).values())
    holds = holds and all(row['holds'] for row in report.get('smith', []))
    report['residual_tol'] = get_residual_tolerance()
    report['holds'] = holds
    emit(args, report)
    return _status(holds)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def create_parser() -> argparse.ArgumentParser:
    """Create the command line argument parser."""
    from .pjoin_cli import register_pjoin_commands

    common = _common_options()
    parser = SmithbarParser(
        prog='smithbar',
        description='smithbar - barcodes, generating functions and Smith-type checks',
    )
    sub = parser.add_subparsers(dest='command', parser_class=SmithbarParser)

    p = sub.add_parser('barcode', parents=[common], help='Barcode of a filtered complex')
    p.add_argument('complex')
    p.add_argument('--field', default=None, help='Field spec overriding the file header (q, f2, fp:<p>)')
    p.add_argument('--svg', default=None, help='Write an SVG diagram to this path')
    p.set_defaults(func=cmd_barcode)

    p = sub.add_parser('window', parents=[common], help='Window dimension of a barcode')
    p.add_argument('barcode')
    p.add_argument('a', type=rational)
    p.add_argument('b', type=rational)
    p.set_defaults(func=cmd_window)

    p = sub.add_parser('bottleneck', parents=[common], help='Bottleneck distance of two barcodes')
    p.add_argument('barcode1')
    p.add_argument('barcode2')
    p.set_defaults(func=cmd_bottleneck)

    p = sub.add_parser('compare-fields', parents=[common], help='Barcodes of one complex over several fields')
    p.add_argument('complex')
    p.add_argument('--fields', default='q,f2,f3')
    p.set_defaults(func=cmd_compare_fields)

    p = sub.add_parser('smith-complex', parents=[common], help='Smith inequality on a complex with a Z/p action')
    p.add_argument('complex')
    p.add_argument('--field', default=None)
    p.set_defaults(func=cmd_smith_complex)

    p = sub.add_parser('periodic-stats', parents=[common], help='Statistics of a periodic barcode')
    p.add_argument('pbarcode')
    p.add_argument('--local', default=None, help='Local homology data to check against N')
    p.add_argument('--svg', default=None)
    p.add_argument('--window', nargs=2, type=rational, default=None, metavar=('A', 'B'))
    p.set_defaults(func=cmd_periodic_stats)

    p = sub.add_parser('betatot-integral', parents=[common], help='Total bar length from window integrals')
    p.add_argument('pbarcode')
    p.add_argument('--a', type=rational, default=parse_rational('0'))
    p.add_argument('--n', type=int, default=1)
    p.set_defaults(func=cmd_betatot_integral)

    p = sub.add_parser('smith', parents=[common], help='Smith-type inequality between barcodes')
    p.add_argument('pbarcode')
    p.add_argument('pbarcode_p')
    p.add_argument('--p', type=int, required=True)
    p.add_argument('--samples', type=int, default=0)
    p.add_argument('--window', nargs=2, type=rational, action='append', metavar=('A', 'B'))
    p.set_defaults(func=cmd_smith)

    p = sub.add_parser('hz', parents=[common], help='Periodic point certificate')
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--betatot', type=rational, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--B', type=rational, required=True)
    p.add_argument('--primes', required=True, help="'lo..hi' or a comma separated list")
    p.add_argument('--scan', type=int, default=None, help='Cross-check by scanning primes up to this bound')
    p.set_defaults(func=cmd_hz)

    p = sub.add_parser('qindex', parents=[common], help='Signature of Q_n')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.set_defaults(func=cmd_qindex)

    p = sub.add_parser('maslov', parents=[common], help='Index jump of the identity family')
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--t', type=float, required=True)
    p.set_defaults(func=cmd_maslov)

    p = sub.add_parser('rotation', parents=[common], help='Barcode of a rotation of CP^d')
    p.add_argument('--coeffs', type=float, nargs='+', required=True)
    p.add_argument('--m', type=int, default=2)
    p.add_argument('--n', dest='steps', type=int, default=None, help='Odd number of steps')
    p.add_argument('--power', type=int, default=None, help='Barcode of the p-th iterate over f<p>')
    p.add_argument('--svg', default=None)
    p.set_defaults(func=cmd_rotation)

    p = sub.add_parser('spectrum', parents=[common], help='Action values of a quadratic tuple')
    p.add_argument('tuple')
    p.add_argument('--m', type=int, default=1)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser('verify-identities', parents=[common], help='Residuals of the generating function identities')
    p.add_argument('--suite', choices=['all', 'identities', 'smith'], default='all')
    p.add_argument('--tuple', default=None)
    p.add_argument('--tuple2', default=None)
    p.add_argument('--d', type=int, default=1)
    p.add_argument('--size', type=int, default=3)
    p.add_argument('--size2', type=int, default=1)
    p.add_argument('--scale', type=float, default=0.5)
    p.add_argument('--samples', type=int, default=100)
    p.add_argument('--m', type=int, default=1)
    p.add_argument('--t', type=float, default=0.3)
    p.set_defaults(func=cmd_verify_identities)

    register_pjoin_commands(sub, [common])
    return parser


def execute(parser: argparse.ArgumentParser, argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, configure, dispatch and map errors to exit codes."""
    _load_env()  # before get_default_config(), so its env vars are available
    args = parser.parse_args(argv)
    if not hasattr(args, 'func'):
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    if getattr(args, 'debug', False):
        set_level(logging.DEBUG)

    try:
        config = get_default_config(args)
        validate_config(config)
        set_config(config)
        return args.func(args)
    except SmithbarError as e:
        print(f"E:{e.kind}:{e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"E:InputError:{e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.exception("Unexpected failure")
        print(f"E:Internal:{e}", file=sys.stderr)
        return EXIT_USAGE


def run(argv: Optional[List[str]] = None) -> int:
    return execute(create_parser(), argv)


def main(argv: Optional[List[str]] = None) -> None:
    """
    Main entry point for the smithbar CLI.

    Args:
        argv: Command line arguments (defaults to sys.argv)
    """
    sys.exit(run(argv))


if __name__ == '__main__':
    main()
