"""
Tests for the graded beta/E/O algebra: canonical form, ring axioms and grading
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import pytest
from hypothesis import given, settings, strategies as st

from coefficient import Coefficient
from expr_grammar import parse, render
from operator_algebra import (
    BETA,
    E,
    O,
    ONE_EXPR,
    Monomial,
    OperatorExpr,
    add,
    anticommutator,
    beta_conjugate,
    canonical_equals,
    commutator,
    even_part,
    multiply,
    mu,
    odd_part,
    scale,
    truncate,
)

I = Coefficient.imaginary(1)

monomials = st.builds(
    Monomial,
    st.sampled_from([0, 1]),
    st.lists(st.sampled_from(['E', 'O']), max_size=3).map(tuple),
    st.integers(min_value=-1, max_value=3),
)
coefficients = st.builds(
    Coefficient,
    st.fractions(min_value=-4, max_value=4, max_denominator=6),
    st.fractions(min_value=-4, max_value=4, max_denominator=6),
)
expressions = st.dictionaries(monomials, coefficients, max_size=4).map(OperatorExpr)

algebra_settings = settings(max_examples=60, deadline=None)


# Canonical form ----------------------------------------------------------------

def test_beta_o_is_single_monomial():
    x = parse('beta*O')
    assert x.terms == {Monomial(1, ('O',), 0): Coefficient(1)}


def test_o_beta_moves_beta_to_front_with_sign():
    x = parse('O*beta')
    assert x.terms == {Monomial(1, ('O',), 0): Coefficient(-1)}


def test_commutator_text_has_two_terms():
    x = parse('[O,E]')
    assert x.terms == {
        Monomial(0, ('E', 'O'), 0): Coefficient(-1),
        Monomial(0, ('O', 'E'), 0): Coefficient(1),
    }


def test_zero_coefficients_are_dropped():
    x = OperatorExpr({Monomial(0, ('E',), 0): 0, Monomial(0, ('O',), 0): 2})
    assert len(x) == 1


# add / scale -------------------------------------------------------------------

@given(expressions)
def test_add_negation_is_zero(x):
    assert add(x, scale(-1, x)).is_zero()


@given(expressions)
def test_i_twice_negates(x):
    assert scale(I, scale(I, x)) == scale(-1, x)


def test_beta_o_plus_o_beta_vanishes():
    assert add(multiply(BETA, O), parse('O*beta')).is_zero()


# multiply ----------------------------------------------------------------------

def test_beta_o_squared():
    beta_o = multiply(BETA, O)
    assert multiply(beta_o, beta_o) == scale(-1, multiply(O, O))


def test_beta_squared_is_one():
    assert multiply(BETA, BETA) == ONE_EXPR


def test_beta_e_times_beta_o():
    assert multiply(multiply(BETA, E), multiply(BETA, O)) == multiply(E, O)


def test_max_mu_truncates_products():
    a = add(mu(1), mu(2))
    assert multiply(a, a, max_mu=3) == add(mu(2), scale(2, mu(3)))


# commutators and parity -----------------------------------------------------------

def test_simple_commutators():
    assert commutator(E, E).is_zero()
    assert anticommutator(BETA, O).is_zero()
    assert commutator(BETA, E).is_zero()


def test_even_part_of_hamiltonian():
    h = parse('mu^-1*beta + E + O')
    assert even_part(h) == parse('mu^-1*beta + E')
    assert odd_part(h) == O


def test_parity_examples():
    assert odd_part(multiply(E, O)) == multiply(E, O)
    assert even_part(anticommutator(O, E)).is_zero()


# truncate / canonical_equals --------------------------------------------------------

def test_truncate_examples():
    x = parse('mu*O + mu^2*[O,E]')
    assert truncate(x, 1) == parse('mu*O')
    assert truncate(x, 100) == x


def test_canonical_equals_examples():
    a = parse('beta*O + 1/2*mu*E')
    assert canonical_equals(a, a)
    assert canonical_equals(multiply(BETA, O), scale(-1, parse('O*beta')))
    x, y = parse('beta*E + O'), parse('mu*O*E')
    assert canonical_equals(commutator(x, y), scale(-1, commutator(y, x)))


# Properties ------------------------------------------------------------------------

@algebra_settings
@given(expressions)
def test_render_parse_round_trip(x):
    assert parse(render(x)) == x


@algebra_settings
@given(expressions)
def test_beta_conjugation_parity(x):
    assert beta_conjugate(x) == add(even_part(x), scale(-1, odd_part(x)))
    assert add(even_part(x), odd_part(x)) == x


@algebra_settings
@given(expressions, expressions, expressions)
def test_ring_axioms(a, b, c):
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
    assert multiply(a, add(b, c)) == add(multiply(a, b), multiply(a, c))
    assert multiply(add(a, b), c) == add(multiply(a, c), multiply(b, c))


@algebra_settings
@given(expressions, expressions, expressions)
def test_jacobi_identity(a, b, c):
    total = add(
        add(commutator(a, commutator(b, c)), commutator(b, commutator(c, a))),
        commutator(c, commutator(a, b)),
    )
    assert total.is_zero()


@given(monomials, monomials)
def test_grading_adds_mu_powers(ma, mb):
    product = multiply(OperatorExpr.monomial(ma), OperatorExpr.monomial(mb))
    for monomial, _ in product.items():
        assert monomial.mu_power == ma.mu_power + mb.mu_power


def test_monomial_validation():
    with pytest.raises(ValueError):
        Monomial(2, (), 0)
    with pytest.raises(ValueError):
        Monomial(0, ('beta',), 0)


def test_operator_sugar_matches_functions():
    x = parse('beta*O + E')
    assert x * x == multiply(x, x)
    assert x - x == OperatorExpr.zero()
    assert Fraction(1, 2) * x == scale(Fraction(1, 2), x)
    assert x ** 2 == multiply(x, x)
