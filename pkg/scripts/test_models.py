"""
Tests for model specs and the concrete block Hamiltonians
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import numpy as np
import pytest

from models import (
    BetaStructure,
    BlockHamiltonian,
    ModelSpec,
    ModelSpecError,
    commuting_sign_reference,
    dirac_matrices,
    landau_levels,
    make_model,
)
from spectral import ComplexSpectrumError, spectral_norm


@pytest.mark.parametrize('kind, params', [
    ('free-dirac', {'m': 0.0}),
    ('free-dirac', {'p': (1.0, 2.0)}),
    ('random-block', {'dim': 7}),
    ('random-block', {'dim': 0}),
    ('landau-dirac', {'n': 3}),
    ('commuting-case', {'e': 1.5}),
    ('spin1-pseudo', {'max_retries': 0}),
    ('free-dirac', {'dim': 4}),
])
def test_invalid_specs(kind, params):
    with pytest.raises(ModelSpecError):
        ModelSpec(kind, params)


def test_unknown_kind():
    with pytest.raises(ModelSpecError):
        ModelSpec('hydrogen', {})


def test_defaults_are_filled_in():
    spec = ModelSpec('random-block', {'dim': 6})
    assert spec.params == {'dim': 6, 'seed': 0, 'scale': 0.3, 'm': 1.0}


@pytest.mark.parametrize('spec', [
    ModelSpec('free-dirac', {'p': (0.0, 0.5, 1.0)}),
    ModelSpec('random-block', {'dim': 8, 'seed': 42}),
    ModelSpec('landau-dirac', {'b': 0.2, 'n': 10}),
])
def test_flat_record_round_trip(spec):
    record = spec.to_record()
    assert all(not isinstance(v, (list, tuple, dict)) for v in record.values())
    assert ModelSpec.from_record(record) == spec


def test_from_record_accepts_strings():
    spec = ModelSpec.from_record({'kind': 'random-block', 'dim': '8', 'seed': '3', 'scale': None})
    assert spec.params['dim'] == 8
    assert spec.params['scale'] == 0.3
    with pytest.raises(ModelSpecError):
        ModelSpec.from_record({'kind': 'random-block', 'dim': 'eight'})


def test_beta_structure():
    beta = BetaStructure(2, 3)
    assert np.array_equal(beta.matrix @ beta.matrix, np.eye(5))
    assert np.array_equal(np.diag(beta.matrix).real, [1, 1, -1, -1, -1])
    with pytest.raises(ValueError):
        BetaStructure(0, 2)


def test_block_hamiltonian_rejects_non_hermitian():
    with pytest.raises(ValueError):
        BlockHamiltonian(np.array([[1, 1], [0, -1]]), BetaStructure(1, 1))
    with pytest.raises(ValueError):
        BlockHamiltonian(np.eye(3), BetaStructure(1, 1))


def test_free_dirac_at_rest_is_beta():
    h = make_model(ModelSpec('free-dirac', {'m': 1.0, 'p': (0.0, 0.0, 0.0)}))
    beta, _ = dirac_matrices()
    assert np.array_equal(h.matrix, beta)


def test_free_dirac_squares_to_energy():
    h = make_model(ModelSpec('free-dirac', {'m': 1.0, 'p': (0.0, 0.0, 1.0)}))
    assert np.allclose(h.matrix @ h.matrix, 2.0 * np.eye(4), atol=1e-14)


def test_random_block_is_hermitian_and_deterministic():
    spec = ModelSpec('random-block', {'dim': 8, 'seed': 42, 'scale': 0.3})
    first, second = make_model(spec), make_model(spec)
    assert first.symmetry_residual() == 0.0
    assert np.array_equal(first.matrix, second.matrix)
    assert not np.array_equal(first.matrix, make_model(spec.with_params(seed=43)).matrix)


def test_random_block_part_norms():
    h = make_model(ModelSpec('random-block', {'dim': 10, 'seed': 1, 'scale': 0.3, 'm': 2.0}))
    even = h.beta.even(h.matrix) - 2.0 * h.beta_matrix
    odd = h.beta.odd(h.matrix)
    assert spectral_norm(even) == pytest.approx(0.6, rel=1e-12)
    assert spectral_norm(odd) == pytest.approx(0.6, rel=1e-12)


def test_commuting_case_operators_commute():
    spec = ModelSpec('commuting-case', {'m': 1.0, 'o': 0.8, 'e': 0.3, 'blocks': 3})
    h = make_model(spec)
    beta = h.beta_matrix
    even = h.beta.even(h.matrix)
    e_part = even - beta
    odd = h.beta.odd(h.matrix)
    assert spectral_norm(e_part @ odd - odd @ e_part) < 1e-14
    assert spectral_norm(e_part @ beta - beta @ e_part) < 1e-14
    reference = commuting_sign_reference(spec)
    assert np.allclose(reference @ reference, np.eye(6), atol=1e-14)


def test_landau_structure_and_levels():
    spec = ModelSpec('landau-dirac', {'m': 1.0, 'b': 0.1, 'pz': 0.0, 'n': 10})
    h = make_model(spec)
    assert h.dim == 44
    assert h.n_levels == 11
    assert h.bulk_mask().sum() == 4 * 9
    assert h.bulk_mask(5).sum() == 4 * 5
    levels = landau_levels(1.0, 0.1, 0.0, 9)
    spectrum = np.linalg.eigvalsh(h.matrix)
    for level in levels:
        assert np.min(np.abs(spectrum - level)) < 1e-12
        assert np.min(np.abs(spectrum + level)) < 1e-12


def test_spin1_pseudo_is_pseudo_hermitian_with_real_spectrum():
    h = make_model(ModelSpec('spin1-pseudo', {'seed': 3, 'scale': 0.3, 'b': 0.1}))
    assert h.mode == 'beta-pseudo-hermitian'
    assert h.dim == 6
    assert h.symmetry_residual() < 1e-14
    assert np.max(np.abs(np.linalg.eigvals(h.matrix).imag)) < 1e-8


def test_spin1_pseudo_retry_limit():
    spec = ModelSpec('spin1-pseudo', {'seed': 0, 'max_retries': 2})
    with pytest.raises(ComplexSpectrumError):
        make_model(spec, real_tol=-1.0)
