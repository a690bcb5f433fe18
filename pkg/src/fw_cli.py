#!/usr/bin/env python3
"""
FW CLI - command-line front end for symbolic and numeric verification
Usage: python src/fw_cli.py symbolic sfw --order 4
       python src/fw_cli.py numeric sweep --count 200 --seed 42 --scale 0.5
"""

import argparse
import json
import sys
import traceback
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Tuple

from config import TOOL_VERSION, Tolerances, log_file, resolve_seed
from expr_grammar import ExprSyntaxError, parse, render
from fw_symbolic import SeriesDomainError, h_fw_series, s_fw_series, verify_exponential_method
from models import MODEL_KINDS, ModelSpec, ModelSpecError
from operator_algebra import add, scale
from report import FORMATS, CaseResult, VerificationReport, emit_report
from spectral import ComplexSpectrumError
from suites import (
    IDENTITIES,
    any_converged,
    run_convergence,
    run_fw1950,
    run_identities,
    run_model,
    run_sweep,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_MODEL = 3


def log(message: str):
    """Log message with timestamp to stderr (and FW_LOG_FILE when set)"""
    timestamp = datetime.now().strftime('%Y-%m-%d %H:%M:%S')
    log_msg = f"[{timestamp}] {message}"
    print(log_msg, file=sys.stderr)

    path = log_file()
    if path:
        with open(path, 'a', encoding='utf-8') as f:
            f.write(log_msg + '\n')


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _order(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"order must be >= 1: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=FORMATS, default='text', help='Report format (default: text)')
    common.add_argument('--tol', type=_positive_float, default=None, help='Verification tolerance')
    common.add_argument('--out', type=Path, default=None, help='Write the report to this file')
    common.add_argument('--seed', type=int, default=None, help='Random seed (FW_SEED overrides)')
    common.add_argument('-v', '--verbose', action='store_true', help='Log progress to stderr')

    parser = argparse.ArgumentParser(prog='fw-cli', description='Exact Foldy-Wouthuysen operator verification')
    parser.add_argument('--version', action='version', version=f"%(prog)s {TOOL_VERSION}")
    backends = parser.add_subparsers(dest='backend', required=True)

    # symbolic -----------------------------------------------------------------------
    symbolic = backends.add_parser('symbolic', help='Exact series in the beta/E/O algebra')
    sym = symbolic.add_subparsers(dest='command', required=True)

    p = sym.add_parser('sfw', parents=[common], help='Series of the exact exponential generator')
    p.add_argument('--order', type=_order, default=4)
    p.add_argument('--golden', type=Path, default=None, help='Compare with an expression file')

    p = sym.add_parser('hfw', parents=[common], help='FW Hamiltonian from the exact generator')
    p.add_argument('--order', type=_order, default=2)
    p.add_argument('--golden', type=Path, default=None, help='Compare with an expression file')

    p = sym.add_parser('verify-fw1950', parents=[common], help='Check the 1950 iterative method')
    p.add_argument('--order', type=_order, default=3)
    p.add_argument('--expect', choices=['is-fw', 'not-fw'], default=None)

    p = sym.add_parser('verify', parents=[common], help='Check a proposed exponential generator')
    p.add_argument('--candidate', required=True, help='Generator in the expression grammar')
    p.add_argument('--order', type=_order, default=3)
    p.add_argument('--expect', choices=['is-fw', 'not-fw'], default=None)

    p = sym.add_parser('identity', parents=[common], help='Run a named symbolic identity')
    p.add_argument('--name', choices=sorted(IDENTITIES) + ['all'], required=True)
    p.add_argument('--order', type=_order, default=4)

    p = sym.add_parser('parse', parents=[common], help='Print the canonical form of an expression')
    p.add_argument('expression')

    # numeric ------------------------------------------------------------------------
    numeric = backends.add_parser('numeric', help='Exact operators on model matrices')
    num = numeric.add_subparsers(dest='command', required=True)

    p = num.add_parser('run', parents=[common], help='Transform one model')
    p.add_argument('--model', choices=sorted(MODEL_KINDS), required=True)
    p.add_argument('--m', type=float, default=None, help='Rest energy mc^2')
    p.add_argument('--p', default=None, help='Momentum, comma separated (free-dirac)')
    p.add_argument('--o', type=float, default=None, help='Odd amplitude (commuting-case)')
    p.add_argument('--e', type=float, default=None, help='Even amplitude (commuting-case)')
    p.add_argument('--blocks', type=int, default=None, help='Number of 2x2 cells (commuting-case)')
    p.add_argument('--dim', type=int, default=None, help='Dimension (random-block)')
    p.add_argument('--scale', type=float, default=None, help='||E||, ||O|| relative to mc^2')
    p.add_argument('--b', type=float, default=None, help='Field strength')
    p.add_argument('--pz', type=float, default=None, help='Longitudinal momentum (landau-dirac)')
    p.add_argument('--n', type=int, default=None, help='Highest oscillator level (landau-dirac)')
    p.add_argument('--max-retries', type=int, default=None, help='Draw limit (spin1-pseudo)')
    p.add_argument('--bulk-level', type=int, default=None, help='Bulk level bound (landau-dirac)')
    p.add_argument('--dump', type=Path, default=None, help='Write U, S_FW, H_FW as JSON')

    p = num.add_parser('sweep', parents=[common], help='Transform many random-block models')
    p.add_argument('--count', type=int, default=200)
    p.add_argument('--dim', type=int, default=None, help='Fixed dimension (default: cycle 4..16)')
    p.add_argument('--scale', type=float, default=0.5)
    p.add_argument('--m', type=float, default=1.0)

    p = num.add_parser('convergence', parents=[common], help='Truncation error order of the S_FW series')
    p.add_argument('--order', type=_order, nargs='+', default=[1, 2, 3])
    p.add_argument('--model', choices=['random-block', 'spin1-pseudo'], default='random-block')
    p.add_argument('--dim', type=int, default=8)
    p.add_argument('--scale', type=float, default=0.1)
    p.add_argument('--m', type=float, default=1.0)
    p.add_argument('--order-tol', type=_positive_float, default=0.3)
    p.add_argument('--expect', choices=['converge', 'diverge'], default=None)

    return parser


# Handlers return (output bytes, exit code) ------------------------------------------

def _report_exit(report: VerificationReport) -> int:
    return EXIT_OK if report.all_passed else EXIT_FAILED


def _expression_command(args, suite: str, expr, label: str) -> Tuple[bytes, int]:
    if args.golden is None and args.format == 'text':
        return (render(expr) + '\n').encode('utf-8'), EXIT_OK
    details = {'order': args.order, 'expression': render(expr)}
    if args.golden is None:
        case = CaseResult(label, 'pass', None, details)
    else:
        golden = parse(args.golden.read_text(encoding='utf-8'))
        residual = add(expr, scale(-1, golden))
        details['golden'] = str(args.golden)
        case = CaseResult(label, 'pass' if residual.is_zero() else 'fail', render(residual), details)
    report = VerificationReport.from_cases(suite, [case])
    return emit_report(report, args.format), _report_exit(report)


def cmd_symbolic(args, tolerances: Tolerances, seed: Optional[int]) -> Tuple[bytes, int]:
    progress = log if args.verbose else None

    if args.command == 'sfw':
        return _expression_command(args, 'symbolic-sfw', s_fw_series(args.order), 's_fw')
    if args.command == 'hfw':
        return _expression_command(args, 'symbolic-hfw', h_fw_series(args.order), 'h_fw')
    if args.command == 'parse':
        expr = parse(args.expression)
        if args.format == 'text':
            return (render(expr) + '\n').encode('utf-8'), EXIT_OK
        report = VerificationReport.from_cases('symbolic-parse', [
            CaseResult('parse', 'pass', None, {'input': args.expression, 'canonical': render(expr)})
        ])
        return emit_report(report, args.format), EXIT_OK

    if args.command in ('verify-fw1950', 'verify'):
        if args.command == 'verify-fw1950':
            report = run_fw1950(args.order)
        else:
            report = verify_exponential_method(parse(args.candidate), args.order)
        verdict = report.cases[0].details['verdict']
        if progress:
            progress(f"{args.command}: {verdict}")
        if args.expect is None:
            code = _report_exit(report)
        else:
            code = EXIT_OK if (verdict == 'is-FW') == (args.expect == 'is-fw') else EXIT_FAILED
        return emit_report(report, args.format), code

    # identity
    names = sorted(IDENTITIES) if args.name == 'all' else [args.name]
    report = run_identities(names, args.order, progress)
    return emit_report(report, args.format), _report_exit(report)


def _run_spec(args, seed: Optional[int]) -> ModelSpec:
    record = {
        'kind': args.model,
        'm': args.m,
        'p': args.p,
        'o': args.o,
        'e': args.e,
        'blocks': args.blocks,
        'dim': args.dim,
        'scale': args.scale,
        'b': args.b,
        'pz': args.pz,
        'n': args.n,
        'max_retries': args.max_retries,
    }
    if 'seed' in MODEL_KINDS[args.model]:
        record['seed'] = seed
    return ModelSpec.from_record(record)


def cmd_numeric(args, tolerances: Tolerances, seed: Optional[int]) -> Tuple[bytes, int]:
    progress = log if args.verbose else None

    if args.command == 'run':
        spec = _run_spec(args, seed)
        dump = {} if args.dump is not None else None
        report = run_model(spec, tolerances, args.tol is not None, args.bulk_level, progress, dump)
        if dump:
            args.dump.write_text(json.dumps(dump, indent=2, sort_keys=True) + '\n', encoding='utf-8')
        return emit_report(report, args.format), _report_exit(report)

    if args.command == 'sweep':
        report = run_sweep(args.count, seed if seed is not None else 0, args.dim, args.scale, args.m,
                           tolerances, progress)
        return emit_report(report, args.format), _report_exit(report)

    # convergence
    params = {'scale': args.scale, 'm': args.m, 'seed': seed if seed is not None else 0}
    if args.model == 'random-block':
        params['dim'] = args.dim
    spec = ModelSpec(args.model, params)
    report = run_convergence(spec, args.order, tolerances, args.order_tol, progress)
    if args.expect == 'diverge':
        code = EXIT_OK if report.summary['errored'] == 0 and not any_converged(report) else EXIT_FAILED
    else:
        code = _report_exit(report)
    return emit_report(report, args.format), code


def _write(data: bytes, out: Optional[Path]):
    if out is None:
        sys.stdout.write(data.decode('utf-8'))
        sys.stdout.flush()
    else:
        out.write_bytes(data)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI

    Returns:
        0 all checks pass (or match --expect), 1 verification failure,
        2 usage error, 3 model construction error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        tolerances = Tolerances.from_env().with_verify(args.tol)
        seed = resolve_seed(args.seed)
    except ValueError as e:
        print(f"❌ Configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if args.verbose:
        log(f"fw-cli {args.backend} {args.command} (tool {TOOL_VERSION})")

    handler = cmd_symbolic if args.backend == 'symbolic' else cmd_numeric
    try:
        data, code = handler(args, tolerances, seed)
        _write(data, args.out)
    except ExprSyntaxError as e:
        print(f"❌ Invalid expression: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ModelSpecError as e:
        print(f"❌ Invalid model: {e}", file=sys.stderr)
        return EXIT_MODEL
    except (SeriesDomainError, ValueError) as e:
        print(f"❌ Invalid input: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ComplexSpectrumError as e:
        print(f"❌ Model rejected: {e}", file=sys.stderr)
        return EXIT_MODEL
    except OSError as e:
        print(f"❌ File error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        print(f"❌ fw-cli failed: {e}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_FAILED

    if args.verbose:
        log(f"finished with exit code {code}")
    return code


if __name__ == '__main__':
    sys.exit(main())
