"""
Spectral - matrix functions by eigendecomposition
sign, square root, arcsin and exp are all evaluated as f(A) = V f(w) V^-1
"""

from typing import Callable, Tuple

import numpy as np
import scipy.linalg


class FwNumericError(Exception):
    """Base class for failures of the numerical FW transformation"""
    pass


class NearSingularError(FwNumericError):
    """H has an eigenvalue too close to zero; lambda = H/|H| is undefined"""
    pass


class ComplexSpectrumError(FwNumericError):
    """A pseudo-Hermitian matrix has eigenvalues with a significant imaginary part"""
    pass


class NonPositiveDenominatorError(FwNumericError):
    """2 + beta*lambda + lambda*beta is not positive definite"""
    pass


class SpectrumOutOfRangeError(FwNumericError):
    """sin(2 Theta) has eigenvalues outside [-1, 1] beyond the clamp tolerance"""
    pass


def spectral_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


def is_hermitian(a: np.ndarray, tol: float = 1e-12) -> bool:
    scale = max(1.0, spectral_norm(a))
    return spectral_norm(a - a.conj().T) <= tol * scale


def is_anti_hermitian(a: np.ndarray, tol: float = 1e-12) -> bool:
    scale = max(1.0, spectral_norm(a))
    return spectral_norm(a + a.conj().T) <= tol * scale


def eigh_function(a: np.ndarray, func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """f(A) for Hermitian A (the Hermitian part is diagonalized)"""
    w, v = scipy.linalg.eigh(hermitian_part(a))
    return (v * func(w)) @ v.conj().T


def eig_decompose(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """
    General diagonalization A = V diag(w) V^-1

    Returns:
        (w, V, V^-1, condition number of V)
    """
    w, v = scipy.linalg.eig(a)
    v_inv = scipy.linalg.inv(v)
    return w, v, v_inv, float(np.linalg.cond(v))


def expm_spectral(a: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """
    Matrix exponential by spectral calculus

    Hermitian and anti-Hermitian inputs use a unitary diagonalization;
    anything else falls back to a general eigendecomposition.
    """
    if is_anti_hermitian(a, tol):
        w, v = scipy.linalg.eigh(hermitian_part(-1j * a))
        return (v * np.exp(1j * w)) @ v.conj().T
    if is_hermitian(a, tol):
        return eigh_function(a, np.exp)
    w, v, v_inv, _ = eig_decompose(a)
    return (v * np.exp(w)) @ v_inv


def inv_sqrt_hermitian(a: np.ndarray, min_eigenvalue: float) -> Tuple[np.ndarray, float]:
    """
    Principal A^(-1/2) of a Hermitian positive definite matrix

    Returns:
        (A^(-1/2), smallest eigenvalue)

    Raises:
        NonPositiveDenominatorError: smallest eigenvalue below min_eigenvalue
    """
    w, v = scipy.linalg.eigh(hermitian_part(a))
    smallest = float(w.min())
    if smallest < min_eigenvalue:
        raise NonPositiveDenominatorError(
            f"Eigenvalue {smallest:.3e} of the Eriksen denominator is not positive"
        )
    return (v * (1.0 / np.sqrt(w))) @ v.conj().T, smallest
