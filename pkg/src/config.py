"""
Configuration
Environment settings (loaded from .env) and numeric tolerances
"""

import os
from dataclasses import dataclass, replace
from typing import Optional

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

TOOL_VERSION = '0.3.0'


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}") from None


def _env_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None


def resolve_seed(cli_seed: Optional[int]) -> Optional[int]:
    """FW_SEED overrides the --seed flag"""
    env_seed = _env_int('FW_SEED')
    return env_seed if env_seed is not None else cli_seed


def log_file() -> Optional[str]:
    return os.getenv('FW_LOG_FILE') or None


@dataclass(frozen=True)
class Tolerances:
    """
    Numeric thresholds

    Attributes:
        eps_singular: |eigenvalue| / spectral radius below which H is singular
        clamp: how far sin(2 Theta) may stray outside [-1, 1] before it is an error
        real_spectrum: allowed imaginary part of pseudo-Hermitian eigenvalues (relative)
        denominator: smallest allowed eigenvalue of 2 + beta*lambda + lambda*beta
        verify: pass threshold for residual diagnostics
        lambda_squared: pass threshold for ||lambda^2 - 1|| per dimension
    """

    eps_singular: float = 1e-10
    clamp: float = 1e-9
    real_spectrum: float = 1e-8
    denominator: float = 1e-12
    verify: float = 1e-10
    lambda_squared: float = 1e-12

    @classmethod
    def from_env(cls) -> 'Tolerances':
        defaults = cls()
        return cls(
            eps_singular=_env_float('FW_EPS_SINGULAR', defaults.eps_singular),
            clamp=_env_float('FW_CLAMP_TOL', defaults.clamp),
            real_spectrum=_env_float('FW_REAL_TOL', defaults.real_spectrum),
            denominator=defaults.denominator,
            verify=_env_float('FW_TOL', defaults.verify),
            lambda_squared=defaults.lambda_squared,
        )

    def with_verify(self, tol: Optional[float]) -> 'Tolerances':
        if tol is None:
            return self
        if tol <= 0:
            raise ValueError(f"Tolerance must be positive, got {tol}")
        return replace(self, verify=tol)
