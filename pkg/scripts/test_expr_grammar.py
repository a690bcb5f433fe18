"""
Tests for the expression grammar: parsing, rendering and error offsets
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import pytest

from coefficient import Coefficient
from expr_grammar import ExprSyntaxError, UnknownSymbolError, parse, render
from operator_algebra import BETA, E, O, OperatorExpr, add, anticommutator, commutator, multiply, mu, scale


def test_render_zero_and_beta():
    assert render(OperatorExpr.zero()) == '0'
    assert render(BETA) == 'beta'


def test_render_leading_generator_term():
    expected = scale(Coefficient(0, Fraction(-1, 2)), multiply(mu(1), multiply(BETA, O)))
    assert render(expected) == '-1/2*i*mu*beta*O'
    assert parse('-1/2*i*mu*beta*O') == expected


def test_render_orders_by_mu_then_beta_then_word():
    x = parse('mu^2*E + O + beta*E + E + mu^-1*beta')
    assert render(x) == 'mu^-1*beta + E + O + beta*E + mu^2*E'


def test_render_uses_powers_for_repeated_letters():
    assert render(parse('O*O*E')) == 'O^2*E'
    assert render(parse('mu*mu*mu')) == 'mu^3'


def test_render_complex_coefficient():
    x = scale(Coefficient(1, -2), E)
    assert render(x) == '(1 - 2*i)*E'
    assert parse(render(x)) == x


def test_commutator_and_anticommutator_syntax():
    assert parse('[O,E]') == commutator(O, E)
    assert parse('{O^2, [O,E]}') == anticommutator(multiply(O, O), commutator(O, E))


def test_imaginary_number_suffix_and_bare_i():
    assert parse('2i*O') == scale(Coefficient.imaginary(2), O)
    assert parse('i*i') == OperatorExpr.scalar(-1)


def test_unary_minus_and_whitespace():
    assert parse('  - O +  E ') == add(scale(-1, O), E)


def test_signed_terms_after_operator():
    assert parse('mu*O + -1/3*mu*E') == add(multiply(mu(1), O), scale(Fraction(-1, 3), multiply(mu(1), E)))
    assert parse('E - -1*O') == add(E, O)
    assert parse('E + -i*O') == add(E, scale(Coefficient.imaginary(-1), O))
    assert parse('[O, -E]') == scale(-1, commutator(O, E))


def test_joined_signed_parts_parse_like_their_sum():
    parts = ['mu*O', '-1/3*mu*E', '-i*mu^2*beta*O']
    assert parse(' + '.join(parts)) == add(add(parse(parts[0]), parse(parts[1])), parse(parts[2]))


def test_negative_mu_exponent():
    assert parse('mu^-2') == mu(-2)
    assert parse('(mu^2)^3') == mu(6)


def test_unknown_symbol_reports_offset():
    with pytest.raises(UnknownSymbolError) as info:
        parse('beta*X')
    assert info.value.offset == 5
    assert info.value.text == 'beta*X'


def test_unknown_symbol_is_a_syntax_error():
    with pytest.raises(ExprSyntaxError):
        parse('E + gamma')


@pytest.mark.parametrize('text', ['', '   ', 'beta*', '[O,E', '1/0', 'E^-1', 'O +* E'])
def test_syntax_errors(text):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text)
    assert info.value.offset >= 0
    assert not isinstance(info.value, UnknownSymbolError)
