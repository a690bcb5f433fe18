"""
Models - concrete block Hamiltonians for numeric verification
Builds H = beta*mc^2 + E + O matrices (hbar = c = 1, mc^2 = m) from a
declarative ModelSpec
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from spectral import ComplexSpectrumError, spectral_norm

MODES = ('hermitian', 'beta-pseudo-hermitian')

# kind -> {parameter: default}; None marks a required parameter
MODEL_KINDS: Dict[str, Dict[str, Any]] = {
    'free-dirac': {'m': 1.0, 'p': (0.0, 0.0, 1.0)},
    'commuting-case': {'m': 1.0, 'o': 0.8, 'e': 0.3, 'blocks': 3},
    'random-block': {'dim': 8, 'seed': 0, 'scale': 0.3, 'm': 1.0},
    'landau-dirac': {'m': 1.0, 'b': 0.1, 'pz': 0.0, 'n': 60},
    'spin1-pseudo': {'seed': 0, 'scale': 0.3, 'm': 1.0, 'b': 0.0, 'max_retries': 10},
}

# Oscillator levels at the top of a truncated Landau basis excluded from comparisons
LANDAU_EDGE_LEVELS = 2

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

SPIN1_SZ = np.diag([1.0, 0.0, -1.0]).astype(complex)


class ModelSpecError(ValueError):
    """Raised for an unknown model kind or invalid model parameters"""
    pass


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of a test Hamiltonian"""

    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ModelSpecError(f"Unknown model kind {self.kind!r}; expected one of {sorted(MODEL_KINDS)}")
        unknown = set(self.params) - set(MODEL_KINDS[self.kind])
        if unknown:
            raise ModelSpecError(f"Unknown parameters for {self.kind}: {sorted(unknown)}")
        merged = dict(MODEL_KINDS[self.kind])
        merged.update(self.params)
        object.__setattr__(self, 'params', merged)
        self.validate()

    def validate(self):
        p = self.params
        if float(p['m']) <= 0:
            raise ModelSpecError(f"mass must be positive, got {p['m']}")
        if self.kind == 'free-dirac':
            if len(tuple(p['p'])) != 3:
                raise ModelSpecError(f"momentum must be a 3-vector, got {p['p']!r}")
        elif self.kind == 'commuting-case':
            if int(p['blocks']) < 1:
                raise ModelSpecError("commuting-case needs at least one block")
            if abs(float(p['e'])) >= float(p['m']):
                raise ModelSpecError("commuting-case needs |e| < m so that lambda = (beta M + O)/epsilon")
        elif self.kind == 'random-block':
            dim = int(p['dim'])
            if dim < 2 or dim % 2:
                raise ModelSpecError(f"dimension must be even and >= 2, got {dim}")
            if float(p['scale']) < 0:
                raise ModelSpecError(f"scale must be nonnegative, got {p['scale']}")
        elif self.kind == 'landau-dirac':
            if int(p['n']) < 4:
                raise ModelSpecError(f"basis truncation must be >= 4, got {p['n']}")
            if float(p['b']) <= 0:
                raise ModelSpecError(f"field strength must be positive, got {p['b']}")
        elif self.kind == 'spin1-pseudo':
            if float(p['scale']) < 0:
                raise ModelSpecError(f"scale must be nonnegative, got {p['scale']}")
            if int(p['max_retries']) < 1:
                raise ModelSpecError("max_retries must be >= 1")

    def with_params(self, **changes) -> 'ModelSpec':
        params = dict(self.params)
        params.update(changes)
        return ModelSpec(self.kind, params)

    def to_record(self) -> Dict[str, Any]:
        """Flat key-value record (vectors joined with commas)"""
        record = {'kind': self.kind}
        for key, value in sorted(self.params.items()):
            if isinstance(value, (tuple, list)):
                value = ','.join(str(float(v)) for v in value)
            record[key] = value
        return record

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> 'ModelSpec':
        record = dict(record)
        kind = record.pop('kind', None)
        if kind not in MODEL_KINDS:
            raise ModelSpecError(f"Unknown model kind {kind!r}")
        params = {}
        for key, value in record.items():
            if value is None:
                continue
            default = MODEL_KINDS[kind].get(key)
            params[key] = _coerce_param(key, value, default)
        return cls(kind, params)


def _coerce_param(key: str, value: Any, default: Any) -> Any:
    try:
        if isinstance(default, tuple):
            if isinstance(value, str):
                value = [v for v in value.split(',') if v.strip()]
            return tuple(float(v) for v in value)
        if isinstance(default, bool):
            return bool(value)
        if isinstance(default, int):
            return int(value)
        if isinstance(default, float):
            return float(value)
    except (TypeError, ValueError):
        raise ModelSpecError(f"Invalid value for {key}: {value!r}") from None
    return value


@dataclass(frozen=True)
class BetaStructure:
    """beta = diag(+1 x n_upper, -1 x n_lower)"""

    n_upper: int
    n_lower: int

    def __post_init__(self):
        if self.n_upper < 1 or self.n_lower < 1:
            raise ValueError(f"Both blocks need at least one row, got {self.n_upper}/{self.n_lower}")

    @property
    def dim(self) -> int:
        return self.n_upper + self.n_lower

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(np.concatenate([np.ones(self.n_upper), -np.ones(self.n_lower)])).astype(complex)

    def even(self, a: np.ndarray) -> np.ndarray:
        """(A + beta A beta)/2: the block-diagonal part"""
        b = self.matrix
        return (a + b @ a @ b) / 2

    def odd(self, a: np.ndarray) -> np.ndarray:
        """(A - beta A beta)/2: the block-off-diagonal part"""
        b = self.matrix
        return (a - b @ a @ b) / 2


@dataclass(frozen=True, eq=False)
class BlockHamiltonian:
    """
    Finite-dimensional H with its beta structure

    Attributes:
        matrix: Complex square matrix
        beta: Block structure
        mode: 'hermitian' or 'beta-pseudo-hermitian'
        rest_energy: mc^2 in model units
        levels: Oscillator level of each basis row (Landau models), else None
        n_levels: Number of oscillator levels in the basis (Landau models)
    """

    matrix: np.ndarray
    beta: BetaStructure
    mode: str = 'hermitian'
    rest_energy: float = 1.0
    levels: Optional[np.ndarray] = None
    n_levels: int = 0
    tolerance: float = 1e-12

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, 'matrix', matrix)
        if matrix.shape != (self.beta.dim, self.beta.dim):
            raise ValueError(f"Matrix shape {matrix.shape} does not match beta dimension {self.beta.dim}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.rest_energy <= 0:
            raise ValueError(f"rest_energy must be positive, got {self.rest_energy}")
        residual = self.symmetry_residual()
        if residual > self.tolerance * max(1.0, spectral_norm(matrix)):
            raise ValueError(f"Matrix is not {self.mode} (residual {residual:.3e})")

    @property
    def dim(self) -> int:
        return self.beta.dim

    @property
    def beta_matrix(self) -> np.ndarray:
        return self.beta.matrix

    def adjoint(self, a: np.ndarray) -> np.ndarray:
        """A^dagger (hermitian mode) or beta A^dagger beta (pseudo mode)"""
        if self.mode == 'hermitian':
            return a.conj().T
        b = self.beta_matrix
        return b @ a.conj().T @ b

    def symmetry_residual(self) -> float:
        return spectral_norm(self.matrix - self.adjoint(self.matrix))

    def bulk_mask(self, max_level: Optional[int] = None) -> np.ndarray:
        """
        Rows used for acceptance comparisons

        Args:
            max_level: Keep oscillator levels below this (default: drop the
                top LANDAU_EDGE_LEVELS levels)
        """
        if self.levels is None:
            return np.ones(self.dim, dtype=bool)
        if max_level is None:
            max_level = self.n_levels - LANDAU_EDGE_LEVELS
        return self.levels < max_level


# Builders ------------------------------------------------------------------------

def dirac_matrices() -> Tuple[np.ndarray, List[np.ndarray]]:
    """beta and alpha_i in the standard representation"""
    zero = np.zeros((2, 2), dtype=complex)
    eye = np.eye(2, dtype=complex)
    beta = np.block([[eye, zero], [zero, -eye]])
    alphas = [np.block([[zero, s], [s, zero]]) for s in SIGMA]
    return beta, alphas


def _free_dirac(p: Dict[str, Any]) -> BlockHamiltonian:
    m = float(p['m'])
    beta, alphas = dirac_matrices()
    momentum = tuple(float(v) for v in p['p'])
    h = m * beta + sum(pi * a for pi, a in zip(momentum, alphas))
    return BlockHamiltonian(h, BetaStructure(2, 2), rest_energy=m)


def commuting_cells(p: Dict[str, Any]) -> List[Tuple[float, float]]:
    """(o_j, e_j) of each 2x2 cell"""
    k = int(p['blocks'])
    return [(float(p['o']) * (j + 1) / k, float(p['e']) * (j + 1) / k) for j in range(k)]


def _commuting_case(p: Dict[str, Any]) -> BlockHamiltonian:
    m = float(p['m'])
    cells = commuting_cells(p)
    k = len(cells)
    h = np.zeros((2 * k, 2 * k), dtype=complex)
    for j, (o, e) in enumerate(cells):
        # cell j lives on rows j (upper) and k + j (lower)
        h[j, j] = m + e
        h[k + j, k + j] = -m + e
        h[j, k + j] = o
        h[k + j, j] = o
    return BlockHamiltonian(h, BetaStructure(k, k), rest_energy=m)


def commuting_sign_reference(spec: ModelSpec) -> np.ndarray:
    """(beta M + O)/epsilon with epsilon = sqrt(M^2 + O^2), built cell by cell"""
    m = float(spec.params['m'])
    cells = commuting_cells(spec.params)
    k = len(cells)
    ref = np.zeros((2 * k, 2 * k), dtype=complex)
    for j, (o, _) in enumerate(cells):
        eps = np.hypot(m, o)
        ref[j, j] = m / eps
        ref[k + j, k + j] = -m / eps
        ref[j, k + j] = o / eps
        ref[k + j, j] = o / eps
    return ref


def _scaled_parts(g: np.ndarray, beta: BetaStructure, size: float) -> Tuple[np.ndarray, np.ndarray]:
    """Even and odd parts of g, each normalized to spectral norm `size`"""
    parts = []
    for part in (beta.even(g), beta.odd(g)):
        norm = spectral_norm(part)
        parts.append(part * (size / norm) if norm > 0 and size > 0 else np.zeros_like(part))
    return parts[0], parts[1]


def _random_block(p: Dict[str, Any]) -> BlockHamiltonian:
    m = float(p['m'])
    dim = int(p['dim'])
    beta = BetaStructure(dim // 2, dim // 2)
    rng = np.random.default_rng(int(p['seed']))
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    g = (g + g.conj().T) / 2
    e_part, o_part = _scaled_parts(g, beta, float(p['scale']) * m)
    h = m * beta.matrix + e_part + o_part
    # exact Hermitian symmetry, so the residual is zero by construction
    h = (h + h.conj().T) / 2
    return BlockHamiltonian(h, beta, rest_energy=m)


def landau_levels(m: float, b: float, pz: float, count: int) -> np.ndarray:
    """Positive Dirac-Landau energies sqrt(m^2 + pz^2 + 2 b n), n = 0..count-1"""
    n = np.arange(count)
    return np.sqrt(m * m + pz * pz + 2.0 * b * n)


def _landau_dirac(p: Dict[str, Any]) -> BlockHamiltonian:
    """
    Dirac particle in a uniform field B along z on oscillator levels 0..N

    sigma.pi = [[pz, sqrt(2B) a], [sqrt(2B) a^dagger, -pz]] in the Landau basis.
    Level N loses its partner, so the top of the basis is unreliable.
    """
    m = float(p['m'])
    b = float(p['b'])
    pz = float(p['pz'])
    n_levels = int(p['n']) + 1
    eye = np.eye(n_levels, dtype=complex)
    lower = np.diag(np.sqrt(np.arange(1, n_levels)), k=1).astype(complex)  # a|n> = sqrt(n)|n-1>
    raising = lower.conj().T
    root = np.sqrt(2.0 * b)
    sigma_pi = np.block([[pz * eye, root * lower], [root * raising, -pz * eye]])
    half = 2 * n_levels
    h = np.block([[m * np.eye(half), sigma_pi], [sigma_pi, -m * np.eye(half)]])
    levels = np.tile(np.arange(n_levels), 4)
    return BlockHamiltonian(
        h,
        BetaStructure(half, half),
        rest_energy=m,
        levels=levels,
        n_levels=n_levels,
    )


def _spin1_pseudo(p: Dict[str, Any], real_tol: float) -> BlockHamiltonian:
    """
    Six-component boson Hamiltonian H = beta m + E + O with H = beta H^dagger beta

    E and O come from the beta-pseudo-Hermitian part (G + beta G^dagger beta)/2
    of a seeded complex G; an optional field b adds -b S_z to E on both blocks.
    """
    m = float(p['m'])
    beta = BetaStructure(3, 3)
    bm = beta.matrix
    rng = np.random.default_rng(int(p['seed']))
    zeeman = np.kron(np.eye(2), -float(p['b']) * SPIN1_SZ)
    attempts = int(p['max_retries'])
    worst = 0.0
    for _ in range(attempts):
        g = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        g = (g + bm @ g.conj().T @ bm) / 2
        e_part, o_part = _scaled_parts(g, beta, float(p['scale']) * m)
        h = m * bm + e_part + zeeman + o_part
        eigenvalues = np.linalg.eigvals(h)
        worst = float(np.max(np.abs(eigenvalues.imag)))
        if worst <= real_tol * max(1.0, spectral_norm(h)):
            return BlockHamiltonian(h, beta, mode='beta-pseudo-hermitian', rest_energy=m)
    raise ComplexSpectrumError(
        f"spin1-pseudo: no real spectrum after {attempts} draws (largest imaginary part {worst:.3e})"
    )


def make_model(spec: ModelSpec, real_tol: float = 1e-8) -> BlockHamiltonian:
    """
    Build the Hamiltonian described by spec

    Args:
        spec: Model description
        real_tol: Imaginary-part tolerance for accepting pseudo-Hermitian draws

    Returns:
        BlockHamiltonian (identical spec and seed give a bit-identical matrix)

    Raises:
        ModelSpecError: invalid parameters
        ComplexSpectrumError: spin1-pseudo retry limit exceeded
    """
    builders = {
        'free-dirac': _free_dirac,
        'commuting-case': _commuting_case,
        'random-block': _random_block,
        'landau-dirac': _landau_dirac,
    }
    if spec.kind == 'spin1-pseudo':
        return _spin1_pseudo(spec.params, real_tol)
    return builders[spec.kind](spec.params)
