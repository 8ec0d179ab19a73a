#!/usr/bin/env python3
"""
smithbar pjoin - projective join algebra from the command line

Available both as ``smithbar pjoin <command>`` and as ``smithbar-pjoin <command>``.
Output is plain text.
"""

import argparse
from typing import List, Optional, Sequence

from .algebra.pjoin import (
    ProjClass, associativity_sweep, binomial_identity_check, cap_product,
    format_class, format_poly, homological_length_join, join_witness, pj_pullback,
    pj_pushforward, stabilize,
)
from .utils.logger import get_logger

logger = get_logger(__name__)


def cmd_pullback(args):
    """Print pj^* u^k in H^*(CP^m x CP^n)."""
    print(format_poly(pj_pullback(args.k, args.m, args.n)))
    return 0


def cmd_push(args):
    """Print pj_*([CP^i] x [CP^j])."""
    a = ProjClass.basis(args.i, args.m if args.m is not None else args.i)
    b = ProjClass.basis(args.j, args.n if args.n is not None else args.j)
    print(format_class(pj_pushforward(a, b)))
    return 0


def cmd_assoc_sweep(args):
    report = associativity_sweep(args.max)
    print(f"checked={report['checked']} failures={len(report['failures'])}")
    for triple in report['failures']:
        print(f"failed {triple}")
    return 0 if report['holds'] else 1


def cmd_homlength(args):
    length = homological_length_join(args.la, args.lb)
    print(f"length={length} witness={format_class(join_witness(args.la, args.lb))}")
    return 0


def cmd_binomial(args):
    holds = binomial_identity_check(args.k, args.m, args.n)
    print(f"k={args.k} holds={str(holds).lower()}")
    return 0 if holds else 1


def cmd_stabilize(args):
    print(format_class(stabilize(ProjClass.basis(args.i), args.n)))
    return 0


def cmd_cap(args):
    print(format_class(cap_product(ProjClass.basis(args.k), args.l)))
    return 0


def add_pjoin_subcommands(sub, parents: Sequence[argparse.ArgumentParser] = ()) -> None:
    parents = list(parents)

    p = sub.add_parser('pullback', parents=parents, help='pj^* u^k')
    p.add_argument('k', type=int)
    p.add_argument('m', type=int)
    p.add_argument('n', type=int)
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser('push', parents=parents, help='pj_* of a product of basis classes')
    p.add_argument('i', type=int)
    p.add_argument('j', type=int)
    p.add_argument('--m', type=int, default=None, help='Ambient of the first factor (default: i)')
    p.add_argument('--n', type=int, default=None, help='Ambient of the second factor (default: j)')
    p.set_defaults(func=cmd_push)

    p = sub.add_parser('assoc-sweep', parents=parents, help='Associativity on all basis triples')
    p.add_argument('max', type=int)
    p.set_defaults(func=cmd_assoc_sweep)

    p = sub.add_parser('homlength', parents=parents, help='Homological length of a join')
    p.add_argument('la', type=int)
    p.add_argument('lb', type=int)
    p.set_defaults(func=cmd_homlength)

    p = sub.add_parser('binomial', parents=parents, help='Binomial expansion of the pullback')
    p.add_argument('k', type=int)
    p.add_argument('--m', type=int, default=None)
    p.add_argument('--n', type=int, default=None)
    p.set_defaults(func=cmd_binomial)

    p = sub.add_parser('stabilize', parents=parents, help='Join a class with CP^n')
    p.add_argument('i', type=int)
    p.add_argument('n', type=int)
    p.set_defaults(func=cmd_stabilize)

    p = sub.add_parser('cap', parents=parents, help='[CP^k] cap u^l')
    p.add_argument('k', type=int)
    p.add_argument('l', type=int)
    p.set_defaults(func=cmd_cap)


def register_pjoin_commands(subparsers, parents: Sequence[argparse.ArgumentParser] = ()) -> None:
    """Mount the pjoin commands under ``smithbar pjoin``."""
    from .cli import SmithbarParser

    pjoin = subparsers.add_parser('pjoin', help='Projective join algebra')
    add_pjoin_subcommands(pjoin.add_subparsers(dest='pjoin_command', parser_class=SmithbarParser), parents)


def create_parser() -> argparse.ArgumentParser:
    from .cli import SmithbarParser, _common_options

    parser = SmithbarParser(prog='smithbar-pjoin', description='Projective join algebra')
    add_pjoin_subcommands(parser.add_subparsers(dest='command', parser_class=SmithbarParser),
                          [_common_options()])
    return parser


def main(argv: Optional[List[str]] = None) -> None:
    import sys
    from .cli import execute

    sys.exit(execute(create_parser(), argv))


if __name__ == '__main__':
    main()
