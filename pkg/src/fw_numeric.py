"""
FW Numeric - exact FW operators on finite matrices
Computes lambda, the Eriksen operator, U from sin(2 Theta) and the exact
exponential generator, and checks their operator identities
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg

from config import Tolerances
from fw_symbolic import SeriesOrder, s_fw_series
from models import BlockHamiltonian, ModelSpec, make_model
from operator_algebra import OperatorExpr
from spectral import (
    ComplexSpectrumError,
    NearSingularError,
    SpectrumOutOfRangeError,
    eig_decompose,
    expm_spectral,
    hermitian_part,
    inv_sqrt_hermitian,
    spectral_norm,
)

INV_SQRT2 = 1.0 / np.sqrt(2.0)


@dataclass
class TransformResult:
    """
    U, S_FW and H_FW of one model plus residual diagnostics

    Attributes:
        diagnostics: name -> residual norm (nonnegative)
        thresholds: name -> largest acceptable value
        info: condition number and other values that are reported but not judged
    """

    u: np.ndarray
    s_fw: np.ndarray
    h_fw: np.ndarray
    diagnostics: Dict[str, float] = field(default_factory=dict)
    thresholds: Dict[str, float] = field(default_factory=dict)
    info: Dict[str, float] = field(default_factory=dict)

    @property
    def failures(self) -> List[str]:
        return [
            name for name, value in self.diagnostics.items()
            if not np.isfinite(value) or value > self.thresholds[name]
        ]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dump(self) -> Dict[str, Any]:
        """Matrices as JSON arrays of [re, im] pairs"""
        return {
            'u': matrix_to_pairs(self.u),
            's_fw': matrix_to_pairs(self.s_fw),
            'h_fw': matrix_to_pairs(self.h_fw),
            'diagnostics': dict(self.diagnostics),
        }


def matrix_to_pairs(a: np.ndarray) -> List[List[List[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(a)]


def _tolerances(tolerances: Optional[Tolerances]) -> Tolerances:
    return tolerances if tolerances is not None else Tolerances.from_env()


def split_even_odd(h: BlockHamiltonian) -> Tuple[np.ndarray, np.ndarray]:
    """
    (E, O) with H = beta*mc^2 + E + O

    E is the even part minus beta*mc^2; O is the odd part.
    """
    beta = h.beta_matrix
    even = h.beta.even(h.matrix)
    odd = h.beta.odd(h.matrix)
    return even - h.rest_energy * beta, odd


def _lambda_with_condition(h: BlockHamiltonian, tol: Tolerances) -> Tuple[np.ndarray, float]:
    if h.mode == 'hermitian':
        w, v = scipy.linalg.eigh(hermitian_part(h.matrix))
        v_inv = v.conj().T
        cond = 1.0
    else:
        w, v, v_inv, cond = eig_decompose(h.matrix)
        radius = float(np.max(np.abs(w)))
        imag = float(np.max(np.abs(w.imag)))
        if imag > tol.real_spectrum * max(1.0, radius):
            raise ComplexSpectrumError(f"Largest imaginary eigenvalue part {imag:.3e} exceeds tolerance")
        w = w.real

    radius = float(np.max(np.abs(w)))
    smallest = float(np.min(np.abs(w)))
    if radius == 0.0 or smallest < tol.eps_singular * radius:
        raise NearSingularError(
            f"Eigenvalue of magnitude {smallest:.3e} (spectral radius {radius:.3e}); sign of H undefined"
        )
    return (v * np.sign(w)) @ v_inv, cond


def sign_lambda(h: BlockHamiltonian, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """
    lambda = H / (H^2)^(1/2) by eigendecomposition

    Raises:
        NearSingularError: an eigenvalue below eps_singular * spectral radius
        ComplexSpectrumError: pseudo-Hermitian H with a non-real spectrum
    """
    lam, _ = _lambda_with_condition(h, _tolerances(tolerances))
    return lam


def _eriksen_denominator(h: BlockHamiltonian, lam: np.ndarray) -> np.ndarray:
    beta = h.beta_matrix
    return 2.0 * np.eye(h.dim) + beta @ lam + lam @ beta


def _eriksen_from_lambda(h: BlockHamiltonian, lam: np.ndarray, tol: Tolerances) -> Tuple[np.ndarray, float]:
    numerator = np.eye(h.dim) + h.beta_matrix @ lam
    inv_root, smallest = inv_sqrt_hermitian(_eriksen_denominator(h, lam), tol.denominator)
    return numerator @ inv_root, smallest


def eriksen_u(h: BlockHamiltonian, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """
    U_E = (1 + beta*lambda) / sqrt(2 + beta*lambda + lambda*beta)

    The denominator is Hermitian in both modes and commutes with the numerator.

    Raises:
        NonPositiveDenominatorError: the denominator is not positive definite
    """
    tol = _tolerances(tolerances)
    u, _ = _eriksen_from_lambda(h, sign_lambda(h, tol), tol)
    return u


def eriksen_u_unitary_form(h: BlockHamiltonian, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """U = (1 + beta*lambda) / sqrt((1 + beta*lambda)^adj (1 + beta*lambda))"""
    tol = _tolerances(tolerances)
    lam = sign_lambda(h, tol)
    numerator = np.eye(h.dim) + h.beta_matrix @ lam
    inv_root, _ = inv_sqrt_hermitian(h.adjoint(numerator) @ numerator, tol.denominator)
    return numerator @ inv_root


def sin_two_theta(h: BlockHamiltonian, lam: np.ndarray) -> np.ndarray:
    """sin(2 Theta) = (lambda - beta lambda beta)/2"""
    return h.beta.odd(lam)


def _sin_function(h: BlockHamiltonian, sin2: np.ndarray, func, tol: Tolerances) -> np.ndarray:
    """
    func applied to the spectrum of sin(2 Theta)

    Hermitian mode: sin(2 Theta) is Hermitian with eigenvalues y in [-1, 1].
    Pseudo mode: it is anti-Hermitian, so -i sin(2 Theta) is diagonalized and
    func receives the imaginary eigenvalues i*y.
    """
    if h.mode == 'hermitian':
        w, v = scipy.linalg.eigh(hermitian_part(sin2))
        excess = float(np.max(np.abs(w))) - 1.0 if w.size else 0.0
        if excess > tol.clamp:
            raise SpectrumOutOfRangeError(f"sin(2 Theta) eigenvalue exceeds 1 by {excess:.3e}")
        values = func(np.clip(w, -1.0, 1.0).astype(complex))
    else:
        w, v = scipy.linalg.eigh(hermitian_part(-1j * sin2))
        values = func(1j * w)
    return (v * values) @ v.conj().T


def u_from_sin(h: BlockHamiltonian, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """U = (1 + sqrt(1 - sin^2 2T) + beta sin 2T) / sqrt(2 (1 + sqrt(1 - sin^2 2T)))"""
    tol = _tolerances(tolerances)
    lam = sign_lambda(h, tol)
    sin2 = sin_two_theta(h, lam)
    cos2 = _sin_function(h, sin2, lambda z: np.sqrt(1.0 - z * z), tol)
    inv_root = _sin_function(h, sin2, lambda z: 1.0 / np.sqrt(2.0 * (1.0 + np.sqrt(1.0 - z * z))), tol)
    return (np.eye(h.dim) + cos2 + h.beta_matrix @ sin2) @ inv_root


def _s_fw_from_lambda(h: BlockHamiltonian, lam: np.ndarray, tol: Tolerances) -> np.ndarray:
    angle = _sin_function(h, sin_two_theta(h, lam), np.arcsin, tol)
    return -0.5j * h.beta_matrix @ angle


def s_fw_exact(h: BlockHamiltonian, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """
    S_FW = -(i beta / 2) arcsin((lambda - beta lambda beta)/2)

    Eigenvalues of the argument are clamped to [-1, 1] within the clamp tolerance.

    Raises:
        SpectrumOutOfRangeError: an eigenvalue lies further outside [-1, 1]
    """
    tol = _tolerances(tolerances)
    return _s_fw_from_lambda(h, sign_lambda(h, tol), tol)


def _sorted_spectrum(h: BlockHamiltonian, a: np.ndarray) -> np.ndarray:
    if h.mode == 'hermitian':
        return np.sort(scipy.linalg.eigvalsh(hermitian_part(a)))
    return np.sort(scipy.linalg.eigvals(a).real)


def _positive_lower_weight(h: BlockHamiltonian, h_fw: np.ndarray) -> float:
    """Largest lower-spinor norm among positive-energy eigenvectors of H_FW"""
    if h.mode == 'hermitian':
        w, v = scipy.linalg.eigh(hermitian_part(h_fw))
    else:
        w, v = scipy.linalg.eig(h_fw)
        w = w.real
        v = v / np.linalg.norm(v, axis=0)
    positive = w > 0
    if not positive.any():
        return 0.0
    lower = v[h.beta.n_upper:, positive]
    return float(np.max(np.linalg.norm(lower, axis=0)))


def _off_block(h: BlockHamiltonian, a: np.ndarray, mask: Optional[np.ndarray] = None) -> float:
    n = h.beta.n_upper
    upper = np.arange(h.dim) < n
    if mask is None:
        mask = np.ones(h.dim, dtype=bool)
    return spectral_norm(a[np.ix_(upper & mask, ~upper & mask)])


def fw_transform(
    h: BlockHamiltonian,
    tolerances: Optional[Tolerances] = None,
    bulk_level: Optional[int] = None,
) -> TransformResult:
    """
    Exact FW transformation of a block Hamiltonian

    Args:
        h: Hamiltonian to transform
        tolerances: Thresholds (default: Tolerances.from_env())
        bulk_level: For oscillator-basis models, the level below which the
            bulk off-block residual is measured (default: drop the edge levels)

    Returns:
        TransformResult with U = U_E, S_FW exact and H_FW = U H U^-1
    """
    tol = _tolerances(tolerances)
    lam, cond = _lambda_with_condition(h, tol)
    beta = h.beta_matrix
    eye = np.eye(h.dim)

    u, min_denominator = _eriksen_from_lambda(h, lam, tol)
    u_inv = h.adjoint(u)
    h_fw = u @ h.matrix @ u_inv
    s_fw = _s_fw_from_lambda(h, lam, tol)

    sin2 = sin_two_theta(h, lam)
    cos2_squared = (beta @ lam + lam @ beta) @ (beta @ lam + lam @ beta) / 4.0
    u_sin = u_from_sin(h, tol)
    u_unitary = eriksen_u_unitary_form(h, tol)
    u_exp = expm_spectral(1j * s_fw, tol.verify)

    if h.mode == 'hermitian':
        unitarity = spectral_norm(u.conj().T @ u - eye)
    else:
        unitarity = spectral_norm(u.conj().T - beta @ scipy.linalg.inv(u) @ beta)

    h_norm = max(spectral_norm(h.matrix), 1e-300)
    spectrum = float(np.max(np.abs(_sorted_spectrum(h, h_fw) - _sorted_spectrum(h, h.matrix))))
    even_u = h.beta.even(u)
    min_even = float(np.min(scipy.linalg.eigvalsh(hermitian_part(even_u))))

    diagnostics = {
        'lambda_squared': spectral_norm(lam @ lam - eye),
        'lambda_commutator': spectral_norm((beta @ lam) @ (lam @ beta) - (lam @ beta) @ (beta @ lam)),
        'beta_commutator': spectral_norm(beta @ (beta @ lam + lam @ beta) - (beta @ lam + lam @ beta) @ beta),
        'unitarity': unitarity,
        'eriksen_condition': spectral_norm(beta @ u - h.adjoint(u) @ beta),
        'exp_vs_eriksen': spectral_norm(u_exp - u),
        'sin_vs_eriksen': spectral_norm(u_sin - u),
        'unitary_form_vs_eriksen': spectral_norm(u_unitary - u),
        's_fw_odd': spectral_norm(beta @ s_fw + s_fw @ beta),
        's_fw_adjoint': spectral_norm(s_fw - h.adjoint(s_fw)),
        'sin_squared_identity': spectral_norm(cos2_squared - (eye - sin2 @ sin2)),
        'off_block': _off_block(h, h_fw) / h_norm,
        'h_fw_beta_commutator': spectral_norm(h_fw @ beta - beta @ h_fw) / h_norm,
        'spectrum': spectrum / h_norm,
        'positive_lower_weight': _positive_lower_weight(h, h_fw),
        'branch_margin': max(0.0, INV_SQRT2 - min_even),
    }
    thresholds = {name: tol.verify for name in diagnostics}
    thresholds['lambda_squared'] = tol.lambda_squared * h.dim * max(1.0, cond)

    if h.levels is not None:
        mask = h.bulk_mask(bulk_level)
        diagnostics['off_block_bulk'] = _off_block(h, h_fw, mask) / h_norm
        thresholds['off_block_bulk'] = tol.verify

    info = {
        'condition_number': cond,
        'min_even_eigenvalue': min_even,
        'min_denominator_eigenvalue': min_denominator,
        'dim': h.dim,
    }
    return TransformResult(u, s_fw, h_fw, diagnostics, thresholds, info)


def evaluate_symbolic(x: OperatorExpr, h: BlockHamiltonian) -> np.ndarray:
    """
    Substitute beta, E, O and mu = 1/mc^2 of h into x

    Word products are cached by prefix so shared prefixes are multiplied once.
    """
    e_part, o_part = split_even_odd(h)
    letters = {'E': e_part, 'O': o_part}
    beta = h.beta_matrix
    words: Dict[tuple, np.ndarray] = {(): np.eye(h.dim, dtype=complex)}

    def word_matrix(word: tuple) -> np.ndarray:
        if word not in words:
            words[word] = word_matrix(word[:-1]) @ letters[word[-1]]
        return words[word]

    mu = 1.0 / h.rest_energy
    result = np.zeros((h.dim, h.dim), dtype=complex)
    for monomial, coeff in x.items():
        term = word_matrix(monomial.word)
        if monomial.beta_exp:
            term = beta @ term
        result += complex(coeff) * mu ** monomial.mu_power * term
    return result


@dataclass
class ConvergenceResult:
    """Truncation error scaling of the S_FW series against the exact generator"""

    order: int
    scale: float
    residual: float
    residual_half: float
    relative_residual: float
    measured_order: Optional[float]
    tolerance: float
    note: str = ''

    @property
    def expected_order(self) -> int:
        return self.order + 1

    @property
    def converged(self) -> bool:
        if self.measured_order is None or not self.relative_residual < 1.0:
            return False
        return abs(self.measured_order - self.expected_order) <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            'order': self.order,
            'scale': self.scale,
            'residual': self.residual,
            'residual_half': self.residual_half,
            'relative_residual': self.relative_residual,
            'measured_order': self.measured_order,
            'expected_order': self.expected_order,
            'converged': self.converged,
            'note': self.note,
        }


def _series_residual(spec: ModelSpec, series: OperatorExpr, tol: Tolerances) -> Tuple[float, float]:
    h = make_model(spec, tol.real_spectrum)
    exact = s_fw_exact(h, tol)
    return spectral_norm(evaluate_symbolic(series, h) - exact), spectral_norm(exact)


def convergence_order(
    spec: ModelSpec,
    order: SeriesOrder,
    tolerances: Optional[Tolerances] = None,
    order_tolerance: float = 0.3,
    noise_floor: float = 1e-13,
) -> ConvergenceResult:
    """
    Measured order of ||s_fw_series(order) - S_FW exact|| in the model scale

    Args:
        spec: Model with a 'scale' parameter (E and O proportional to it)
        order: Series truncation order
        tolerances: Numeric thresholds
        order_tolerance: Allowed |measured - (order + 1)|
        noise_floor: Residual below which no order is measured

    Returns:
        ConvergenceResult; measured_order is None at the noise floor
    """
    if 'scale' not in spec.params:
        raise ValueError(f"Model kind {spec.kind} has no scale parameter")
    tol = _tolerances(tolerances)
    series = s_fw_series(order)
    scale = float(spec.params['scale'])
    residual, exact_norm = _series_residual(spec, series, tol)
    residual_half, _ = _series_residual(spec.with_params(scale=scale / 2), series, tol)
    relative = residual / exact_norm if exact_norm > 0 else (0.0 if residual == 0 else float('inf'))

    if residual_half < noise_floor or residual < noise_floor:
        return ConvergenceResult(order, scale, residual, residual_half, relative, None, order_tolerance,
                                 note='residual at noise floor')
    measured = float(np.log2(residual / residual_half))
    note = ''
    if relative >= 1.0:
        note = 'series diverges: truncation error exceeds the exact generator'
    return ConvergenceResult(order, scale, residual, residual_half, relative, measured, order_tolerance, note)
