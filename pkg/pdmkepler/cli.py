"""Command-line front end.

Usage:
    python -m pdmkepler spectrum --alpha 0.0072973525693 --a 0 --n-max 2
    python -m pdmkepler scan --alpha 0.3 --format json
    python -m pdmkepler verify --workers 4
    python -m pdmkepler ordering --a -0.3 --alpha 1 --n-r 5 30

Exit codes: 0 success, 1 usage error, 2 physics-domain error,
3 numerical failure.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import ValidationError

from pdmkepler import config
from pdmkepler.errors import NumericalError, PhysicsDomainError
from pdmkepler.expansion import DEFAULT_RESIDUAL_ALPHAS
from pdmkepler.model import ModelParams, QuantumNumbers, states_up_to
from pdmkepler.ordering import (
    BENDANIEL_DUKE,
    DEFAULT_ORDERINGS,
    LI_KUHN,
    MUSTAFA_MAZHARIMOUSAVI,
    SYMMETRIC,
)
from pdmkepler.spectrum import energy_exact
from pdmkepler.tables import (
    default_verify_grid,
    expansion_table,
    ordering_table,
    render,
    scan_grid,
    scan_table,
    spectrum_table,
    verify_table,
    write_output,
)
from pdmkepler.wavefunctions import TAIL_DECAY_LENGTHS, normalization_check, radial_wavefunction, sample

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3

NAMED_ORDERINGS = {
    spec.name: spec for spec in (SYMMETRIC, BENDANIEL_DUKE, LI_KUHN, MUSTAFA_MAZHARIMOUSAVI)
}
EXPANSION_A_BARS = (-1.0, 0.0, 0.5)


class UsageError(Exception):
    """Invalid combination of command-line options."""


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--format', choices=('csv', 'json'), default='csv', help='Output format')
    parser.add_argument('--output', type=Path, help='Output file (default: stdout or PDMKEPLER_OUTPUT_DIR)')
    parser.add_argument('--log-level', help='Override LOG_LEVEL')


def _add_params(parser: argparse.ArgumentParser, required: bool = True, alpha_default=None) -> None:
    parser.add_argument('--alpha', type=float, required=required and alpha_default is None,
                        default=alpha_default, help='Coupling e^2/hbar c')
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument('--a', type=float, help='Mass parameter in Compton lengths')
    group.add_argument('--abar', type=float, help='Mass parameter in classical electron radii')


def _add_workers(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--workers', type=int, default=None,
                        help='Worker processes (default: PDMKEPLER_WORKERS or 1)')


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='pdmkepler', description='Relativistic Kepler levels with m*(r) = m(1 + a/r)')
    parser.add_argument('--version', action='version', version=f'%(prog)s {config.VERSION}')
    commands = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    spectrum = commands.add_parser('spectrum', help='Exact levels for all states up to n_max')
    _add_params(spectrum)
    spectrum.add_argument('--n-max', type=int, default=2)
    _add_output_options(spectrum)

    scan = commands.add_parser('scan', help='Levels along a sweep of the mass parameter')
    scan.add_argument('--alpha', type=float, required=True)
    scan.add_argument('--a-min', type=float, default=-3.0)
    scan.add_argument('--a-max', type=float, default=None, help='Upper end (default: alpha)')
    scan.add_argument('--steps', type=int, default=61)
    scan.add_argument('--extra-a', type=float, nargs='*', default=[], help='Additional a values, e.g. a deep tail')
    scan.add_argument('--n-max', type=int, default=1, help='States with n <= n_max')
    _add_workers(scan)
    _add_output_options(scan)

    verify = commands.add_parser('verify', help='Closed form against the numerical oracle')
    _add_params(verify, required=False)
    verify.add_argument('--n-r-max', type=int, default=2)
    verify.add_argument('--expansion', action='store_true', help='Print the expansion residual-ratio table instead')
    _add_workers(verify)
    _add_output_options(verify)

    expansion = commands.add_parser('expansion', help='Residual of the alpha^4 expansion')
    expansion.add_argument('--abar', type=float, nargs='+', default=list(EXPANSION_A_BARS))
    expansion.add_argument('--n-max', type=int, default=2)
    expansion.add_argument('--alphas', type=float, nargs='+', default=list(DEFAULT_RESIDUAL_ALPHAS))
    _add_output_options(expansion)

    wavefunction = commands.add_parser('wavefunction', help='Sample the radial function of one level')
    _add_params(wavefunction)
    wavefunction.add_argument('--n-r', type=int, default=0)
    wavefunction.add_argument('--l', type=int, default=0)
    wavefunction.add_argument('--two-j', type=int, default=None, help='Twice j (default: 2l + 1)')
    wavefunction.add_argument('--points', type=_positive_int, default=400)
    wavefunction.add_argument('--r-max', type=float, default=None)
    _add_output_options(wavefunction)

    ordering = commands.add_parser('ordering', help='Kinetic-ordering and WKB comparison')
    ordering.add_argument('--a', type=float, default=-0.3)
    ordering.add_argument('--alpha', type=float, default=1.0)
    ordering.add_argument('--l', type=int, default=0)
    ordering.add_argument('--n-r', type=int, nargs='+', default=[5, 10, 20, 30])
    ordering.add_argument('--orderings', nargs='+', choices=sorted(NAMED_ORDERINGS),
                          default=[spec.name for spec in DEFAULT_ORDERINGS])
    _add_output_options(ordering)
    return parser


def _params(args) -> ModelParams:
    if args.abar is not None:
        return ModelParams.from_a_bar(args.alpha, args.abar)
    return ModelParams(alpha=args.alpha, a=args.a)


def _destination(args) -> Optional[Path]:
    if args.output is not None:
        return args.output
    directory = config.output_dir()
    if directory is not None:
        return directory / f"{args.command}.{args.format}"
    return None


def _emit(args, frame: pd.DataFrame, metadata: Dict) -> None:
    write_output(render(frame, args.format, metadata), _destination(args))


def _workers(args) -> int:
    return args.workers if args.workers is not None else config.default_workers()


def cmd_spectrum(args) -> int:
    params = _params(args)
    frame = spectrum_table(params, args.n_max)
    _emit(args, frame, {"command": "spectrum", "alpha": params.alpha, "a": params.a, "n_max": args.n_max})
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    a_values = scan_grid(args.alpha, args.a_min, args.a_max, args.steps, args.extra_a)
    frame = scan_table(args.alpha, a_values, states_up_to(args.n_max), workers=_workers(args))
    _emit(args, frame, {"command": "scan", "alpha": args.alpha, "n_max": args.n_max})
    return EXIT_OK


def _verify_cases(args) -> List[tuple]:
    if args.alpha is None and args.a is None and args.abar is None and args.n_r_max == 2:
        return default_verify_grid()
    alphas = [args.alpha] if args.alpha is not None else [0.1, 0.3, 0.6]
    cases = []
    for alpha in alphas:
        if args.abar is not None:
            a_values = [args.abar * alpha]
        elif args.a is not None:
            a_values = [args.a]
        else:
            a_values = [-0.5, 0.0, 0.5 * alpha]
        for a in a_values:
            for n_r in range(args.n_r_max + 1):
                for l, two_j in ((0, 1), (1, 3)):
                    cases.append((alpha, a, QuantumNumbers(n_r=n_r, l=l, two_j=two_j)))
    return cases


def cmd_verify(args) -> int:
    if args.expansion:
        frame = expansion_table(EXPANSION_A_BARS, states_up_to(2), DEFAULT_RESIDUAL_ALPHAS)
        _emit(args, frame, {"command": "verify", "mode": "expansion"})
        return EXIT_OK
    frame = verify_table(_verify_cases(args), workers=_workers(args))
    _emit(args, frame, {"command": "verify", "cases": len(frame)})
    statuses = set(frame["status"])
    if statuses & {"fail", "numerical-error"}:
        return EXIT_NUMERICAL
    if "domain-error" in statuses:
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_expansion(args) -> int:
    frame = expansion_table(args.abar, states_up_to(args.n_max), args.alphas)
    _emit(args, frame, {"command": "expansion", "alphas": " ".join(repr(x) for x in args.alphas)})
    return EXIT_OK


def cmd_wavefunction(args) -> int:
    params = _params(args)
    two_j = args.two_j if args.two_j is not None else 2 * args.l + 1
    qn = QuantumNumbers(n_r=args.n_r, l=args.l, two_j=two_j)
    wf = radial_wavefunction(energy_exact(params, qn), qn)
    r_max = args.r_max if args.r_max is not None else TAIL_DECAY_LENGTHS / 4.0 * wf.decay_length
    r_values = np.linspace(r_max / args.points, r_max, args.points)
    metadata = {
        "command": "wavefunction", "alpha": params.alpha, "a": params.a, "state": qn.label,
        "l_star": wf.l_star, "n_star": wf.n_star, "norm_error": normalization_check(wf),
    }
    _emit(args, sample(wf, r_values), metadata)
    return EXIT_OK


def cmd_ordering(args) -> int:
    specs = [NAMED_ORDERINGS[name] for name in args.orderings]
    frame = ordering_table(args.a, args.alpha, args.l, specs, sorted(set(args.n_r)))
    _emit(args, frame, {"command": "ordering", "a": args.a, "alpha": args.alpha, "l": args.l})
    return EXIT_OK


COMMANDS = {
    'spectrum': cmd_spectrum,
    'scan': cmd_scan,
    'verify': cmd_verify,
    'expansion': cmd_expansion,
    'wavefunction': cmd_wavefunction,
    'ordering': cmd_ordering,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    config.configure_logging(args.log_level)

    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValidationError) as exc:
        logger.error(f"invalid input: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PhysicsDomainError as exc:
        logger.error(f"physics domain error: {exc}")
        print(str(exc), file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        logger.error(f"numerical failure: {exc}")
        print(str(exc), file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == '__main__':
    sys.exit(main())
