"""
Suites - named verification runs that produce VerificationReports
Symbolic identities, single-model transforms, random sweeps and
series convergence checks
"""

from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from config import Tolerances
from coefficient import Coefficient
from expr_grammar import parse, render
from fw_numeric import (
    ConvergenceResult,
    convergence_order,
    fw_transform,
    sign_lambda,
    split_even_odd,
)
from fw_symbolic import (
    SeriesOrder,
    bch,
    bch_explicit,
    exp_series,
    fw1950_compose,
    h_fw_series,
    h_squared_deviation,
    hamiltonian,
    lambda_full,
    lambda_odd,
    q_parts,
    s_fw_series,
    u_fw_series,
    verify_exponential_method,
)
from models import (
    LANDAU_EDGE_LEVELS,
    BlockHamiltonian,
    ModelSpec,
    commuting_sign_reference,
    landau_levels,
    make_model,
)
from operator_algebra import (
    BETA,
    ONE_EXPR,
    OperatorExpr,
    add,
    add_all,
    beta_conjugate,
    even_part,
    multiply,
    mu,
    odd_part,
    scale,
    truncate,
)
from report import CaseResult, VerificationReport
from spectral import FwNumericError, spectral_norm

GOLDEN_DIR = Path(__file__).resolve().parent.parent / 'golden'

SWEEP_DIMS = (4, 6, 8, 10, 12, 14, 16)
SWEEP_COLUMNS = ('exp_vs_eriksen', 'sin_vs_eriksen', 'eriksen_condition', 'unitarity', 'off_block')

I = Coefficient.imaginary(1)
HALF = Fraction(1, 2)

Progress = Optional[Callable[[str], None]]


def load_golden(name: str) -> OperatorExpr:
    """Parse golden/<name>.txt"""
    path = GOLDEN_DIR / f"{name}.txt"
    return parse(path.read_text(encoding='utf-8'))


def _case(name: str, residual: OperatorExpr, **details) -> CaseResult:
    return CaseResult(
        name=name,
        verdict='pass' if residual.is_zero() else 'fail',
        residual=render(residual),
        details=details,
    )


def _minus(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    return add(a, scale(-1, b))


# Symbolic identities -----------------------------------------------------------

def identity_lambda_squared(order: SeriesOrder) -> CaseResult:
    lam = lambda_full(order)
    return _case('lambda-squared', truncate(_minus(multiply(lam, lam, order), ONE_EXPR), order), order=order)


def identity_h_squared(order: SeriesOrder) -> CaseResult:
    """H^2 - mu^-2 (1 + x), exact"""
    h = hamiltonian()
    expected = multiply(mu(-2), add(ONE_EXPR, h_squared_deviation()))
    return _case('h-squared', _minus(multiply(h, h), expected), order=order)


def identity_q_grading(order: SeriesOrder) -> CaseResult:
    """q_E even, q_O odd and (1 + q)^2 (1 + x) = 1"""
    q_e, q_o = q_parts(order)
    one_plus_q = add_all([ONE_EXPR, q_e, q_o])
    squared = multiply(one_plus_q, one_plus_q, order)
    inverse_check = truncate(
        _minus(multiply(squared, add(ONE_EXPR, h_squared_deviation()), order), ONE_EXPR),
        order,
    )
    residual = add_all([odd_part(q_e), even_part(q_o), inverse_check])
    return _case('q-grading', residual, order=order, q_e=render(q_e), q_o=render(q_o))


def identity_lambda_odd(order: SeriesOrder) -> CaseResult:
    """odd part of lambda from the anticommutator form equals the q-part formula"""
    odd = lambda_odd(order)
    residual = add(_minus(odd_part(lambda_full(order)), odd), even_part(odd))
    return _case('lambda-odd', residual, order=order)


def identity_sin_cos(order: SeriesOrder) -> CaseResult:
    """(beta lambda + lambda beta)^2 / 4 + ((lambda - beta lambda beta)/2)^2 = 1"""
    lam = lambda_full(order)
    cos2 = scale(HALF, add(multiply(BETA, lam), multiply(lam, BETA)))
    sin2 = scale(HALF, _minus(lam, beta_conjugate(lam)))
    total = add(multiply(cos2, cos2, order), multiply(sin2, sin2, order))
    return _case('sin-cos', truncate(_minus(total, ONE_EXPR), order), order=order)


def identity_sfw_odd(order: SeriesOrder) -> CaseResult:
    """beta S beta = -S"""
    s = s_fw_series(order)
    return _case('sfw-odd', add(beta_conjugate(s), s), order=order)


def identity_hfw_even(order: SeriesOrder) -> CaseResult:
    h_fw = h_fw_series(order)
    return _case('hfw-even', odd_part(h_fw), order=order, h_fw=render(h_fw))


def identity_exp_eriksen(order: SeriesOrder) -> CaseResult:
    """exp(i S_FW) equals the closed form built from sin(2 Theta)"""
    exponential = exp_series(scale(I, s_fw_series(order)), order)
    return _case('exp-eriksen', _minus(exponential, u_fw_series(order)), order=order)


def identity_bch_explicit(order: SeriesOrder) -> CaseResult:
    """bch via exp/log against the commutator terms (exact through mu^4)"""
    covered = min(order, 4)
    a = parse('mu*O + mu^2*beta*E')
    b = parse('mu*E - 1/2*mu^2*O^2')
    return _case('bch-explicit', _minus(bch(a, b, covered), bch_explicit(a, b, covered)), order=covered)


def identity_sfw_golden(order: SeriesOrder) -> CaseResult:
    golden = load_golden('sfw_order4')
    covered = min(order, 4)
    residual = _minus(s_fw_series(covered), truncate(golden, covered))
    return _case('sfw-golden', residual, order=covered)


def identity_fw1950_golden(order: SeriesOrder) -> CaseResult:
    residual = _minus(truncate(fw1950_compose(3), 3), load_golden('fw1950_order3'))
    return _case('fw1950-golden', residual, order=3)


IDENTITIES: Dict[str, Callable[[SeriesOrder], CaseResult]] = {
    'lambda-squared': identity_lambda_squared,
    'h-squared': identity_h_squared,
    'q-grading': identity_q_grading,
    'lambda-odd': identity_lambda_odd,
    'sin-cos': identity_sin_cos,
    'sfw-odd': identity_sfw_odd,
    'hfw-even': identity_hfw_even,
    'exp-eriksen': identity_exp_eriksen,
    'bch-explicit': identity_bch_explicit,
    'sfw-golden': identity_sfw_golden,
    'fw1950-golden': identity_fw1950_golden,
}


def run_identity(name: str, order: SeriesOrder) -> CaseResult:
    if name not in IDENTITIES:
        raise KeyError(f"Unknown identity {name!r}; expected one of {sorted(IDENTITIES)}")
    return IDENTITIES[name](order)


def run_identities(names: List[str], order: SeriesOrder, progress: Progress = None) -> VerificationReport:
    report = VerificationReport(suite='symbolic-identities')
    for name in names:
        if progress:
            progress(f"identity {name} (order {order})")
        report.add(run_identity(name, order))
    return report


def run_fw1950(order: SeriesOrder = 3) -> VerificationReport:
    """Compose the three 1950 iterates and compare the exponent with S_FW"""
    composed = fw1950_compose(order)
    report = verify_exponential_method(composed, order)
    report.suite = 'verify-fw1950'
    case = report.cases[0]
    case.details['composed'] = render(truncate(composed, order))
    return report


# Numeric runs ----------------------------------------------------------------------

def _model_tolerances(spec: ModelSpec, tolerances: Tolerances, explicit_tol: bool) -> Tolerances:
    if spec.kind == 'landau-dirac' and not explicit_tol:
        return tolerances.with_verify(max(tolerances.verify, 1e-8))
    return tolerances


def _oracle_cases(spec: ModelSpec, h: BlockHamiltonian, result, tolerances: Tolerances) -> List[CaseResult]:
    """Checks against closed-form answers available for particular models"""
    cases = []
    threshold = tolerances.verify
    if spec.kind == 'free-dirac':
        p = np.asarray(spec.params['p'], dtype=float)
        energy = float(np.sqrt(float(spec.params['m']) ** 2 + p @ p))
        residual = spectral_norm(result.h_fw - energy * h.beta_matrix)
        cases.append(CaseResult('h_fw_oracle', 'pass' if residual <= threshold else 'fail', residual,
                                {'energy': energy, 'threshold': threshold}))
    elif spec.kind == 'commuting-case':
        residual = spectral_norm(sign_lambda(h, tolerances) - commuting_sign_reference(spec))
        cases.append(CaseResult('lambda_reference', 'pass' if residual <= threshold else 'fail', residual,
                                {'threshold': threshold}))
    elif spec.kind == 'landau-dirac':
        bulk = h.n_levels - LANDAU_EDGE_LEVELS
        levels = landau_levels(float(spec.params['m']), float(spec.params['b']), float(spec.params['pz']), bulk)
        spectrum = np.linalg.eigvalsh(h.matrix)
        residual = float(max(np.min(np.abs(spectrum - level)) for level in levels))
        cases.append(CaseResult('landau_bulk_levels', 'pass' if residual <= threshold else 'fail', residual,
                                {'levels_checked': bulk, 'threshold': threshold}))

    _, odd = split_even_odd(h)
    if spectral_norm(odd) == 0.0:
        residual = spectral_norm(result.u - np.eye(h.dim))
        cases.append(CaseResult('u_identity', 'pass' if residual <= threshold else 'fail', residual,
                                {'threshold': threshold}))
    return cases


def run_model(
    spec: ModelSpec,
    tolerances: Optional[Tolerances] = None,
    explicit_tol: bool = False,
    bulk_level: Optional[int] = None,
    progress: Progress = None,
    dump: Optional[Dict] = None,
) -> VerificationReport:
    """
    Transform one model and report every diagnostic as a case

    Args:
        spec: Model to build (build errors propagate to the caller)
        tolerances: Numeric thresholds
        explicit_tol: True when the caller fixed the verify tolerance
        bulk_level: Oscillator level bound for bulk comparisons
        progress: Optional callback for progress lines
        dump: If given, filled with the result matrices
    """
    tolerances = _model_tolerances(spec, tolerances or Tolerances.from_env(), explicit_tol)
    if progress:
        progress(f"building {spec.kind} model")
    h = make_model(spec, tolerances.real_spectrum)
    seed = spec.params.get('seed')
    report = VerificationReport(suite=f"numeric-run:{spec.kind}", seed=seed)

    try:
        result = fw_transform(h, tolerances, bulk_level)
    except FwNumericError as e:
        report.add(CaseResult('fw_transform', 'error', None, {'error': f"{type(e).__name__}: {e}"}))
        return report

    if progress:
        progress(f"transformed dim {h.dim}: {len(result.failures)} diagnostics over tolerance")
    if dump is not None:
        dump.update(result.to_dump())

    report.add(CaseResult('model', 'pass', None, {**spec.to_record(), **result.info, 'mode': h.mode}))
    for name in sorted(result.diagnostics):
        value = result.diagnostics[name]
        threshold = result.thresholds[name]
        verdict = 'pass' if np.isfinite(value) and value <= threshold else 'fail'
        report.add(CaseResult(name, verdict, value, {'threshold': threshold}))
    for case in _oracle_cases(spec, h, result, tolerances):
        report.add(case)
    return report


def sweep_seeds(seed: int, count: int) -> List[int]:
    """Per-case seeds derived deterministically from the sweep seed"""
    rng = np.random.default_rng(seed)
    return [int(s) for s in rng.integers(0, 2 ** 31 - 1, size=count)]


def run_sweep(
    count: int,
    seed: int,
    dim: Optional[int] = None,
    scale: float = 0.5,
    m: float = 1.0,
    tolerances: Optional[Tolerances] = None,
    progress: Progress = None,
) -> VerificationReport:
    """
    Transform `count` seeded random-block models

    Args:
        count: Number of models
        seed: Sweep seed; case seeds are derived from it
        dim: Fixed dimension, or None to cycle through 4, 6, ..., 16
        scale: Norm of E and O relative to mc^2
        m: Rest energy
        tolerances: Numeric thresholds
        progress: Optional callback for progress lines

    Returns:
        One case per model; the column maxima go to report.details
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    tolerances = tolerances or Tolerances.from_env()
    report = VerificationReport(suite='numeric-sweep', seed=seed)
    rows = []

    for index, case_seed in enumerate(sweep_seeds(seed, count)):
        case_dim = dim if dim is not None else SWEEP_DIMS[index % len(SWEEP_DIMS)]
        spec = ModelSpec('random-block', {'dim': case_dim, 'seed': case_seed, 'scale': scale, 'm': m})
        name = f"random-block-{index:04d}"
        try:
            result = fw_transform(make_model(spec, tolerances.real_spectrum), tolerances)
        except FwNumericError as e:
            report.add(CaseResult(name, 'error', None, {'seed': case_seed, 'dim': case_dim,
                                                          'error': f"{type(e).__name__}: {e}"}))
            continue
        rows.append({'case': name, **result.diagnostics})
        worst = max(result.diagnostics[c] for c in SWEEP_COLUMNS)
        report.add(CaseResult(
            name,
            'pass' if result.passed else 'fail',
            worst,
            {'seed': case_seed, 'dim': case_dim, 'failures': result.failures},
        ))
        if progress and (index + 1) % 50 == 0:
            progress(f"{index + 1}/{count} models transformed")

    if rows:
        frame = pd.DataFrame(rows).set_index('case')
        maxima = frame.max()
        report.details['maxima'] = {c: float(maxima[c]) for c in frame.columns}
        report.details['models'] = len(rows)
        report.details['threshold'] = tolerances.verify
    return report


def run_convergence(
    spec: ModelSpec,
    orders: List[SeriesOrder],
    tolerances: Optional[Tolerances] = None,
    order_tolerance: float = 0.3,
    progress: Progress = None,
) -> VerificationReport:
    """One case per order; a case passes when the measured order is order + 1"""
    tolerances = tolerances or Tolerances.from_env()
    report = VerificationReport(suite='numeric-convergence', seed=spec.params.get('seed'))
    for order in orders:
        if progress:
            progress(f"convergence order {order} at scale {spec.params.get('scale')}")
        try:
            result: ConvergenceResult = convergence_order(spec, order, tolerances, order_tolerance)
        except FwNumericError as e:
            report.add(CaseResult(f"order-{order}", 'error', None, {'error': f"{type(e).__name__}: {e}"}))
            continue
        report.add(CaseResult(
            f"order-{order}",
            'pass' if result.converged else 'fail',
            result.relative_residual,
            result.to_dict(),
        ))
    return report


def any_converged(report: VerificationReport) -> bool:
    return any(case.details.get('converged') for case in report.cases)
