"""
FW Symbolic - semirelativistic series for the exact FW operators

Works in the graded algebra of operator_algebra with
    H = mu^-1*beta + E + O      (M reduced to mc^2, hbar = c = 1)
Every series is truncated by the grade mu = 1/(mc^2). Only the stationary
case is handled: G = H in the commutator series for the FW Hamiltonian.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Optional, Tuple

from coefficient import Coefficient
from expr_grammar import parse, render
from operator_algebra import (
    BETA,
    E,
    O,
    ONE_EXPR,
    OperatorExpr,
    add,
    add_all,
    anticommutator,
    commutator,
    even_part,
    grade_part,
    multiply,
    mu,
    odd_part,
    scale,
    truncate,
)
from report import CaseResult, VerificationReport

# Maximum retained mu power of a truncated series
SeriesOrder = int

I = Coefficient.imaginary(1)
HALF = Fraction(1, 2)


class SeriesDomainError(ValueError):
    """Raised when a formal series would not terminate under truncation"""
    pass


@dataclass(frozen=True)
class FwIterates:
    """Generators of the first three iterations of the 1950 method"""

    s: OperatorExpr
    s_prime: OperatorExpr
    s_double_prime: OperatorExpr


def _check_order(order: SeriesOrder, minimum: int = 0):
    if not isinstance(order, int) or order < minimum:
        raise ValueError(f"Series order must be an integer >= {minimum}, got {order!r}")


def _check_graded(x: OperatorExpr, name: str):
    low = x.min_mu_power()
    if low is not None and low < 1:
        raise SeriesDomainError(
            f"{name}: every term must carry mu^1 or higher (found mu^{low}); the series would not truncate"
        )


def hamiltonian() -> OperatorExpr:
    """H = beta*mc^2 + E + O with mc^2 = mu^-1"""
    return add_all([multiply(mu(-1), BETA), E, O])


def h_squared_deviation() -> OperatorExpr:
    """
    x with H^2 = mu^-2 (1 + x)

    x = 2 mu beta E + mu^2 (O^2 + E^2 + {O, E})
    """
    return add(
        scale(2, multiply(mu(1), multiply(BETA, E))),
        multiply(mu(2), add_all([multiply(O, O), multiply(E, E), anticommutator(O, E)])),
    )


def power_series(
    x: OperatorExpr,
    coefficient: Callable[[int], Fraction],
    order: SeriesOrder,
    name: str = 'series',
) -> OperatorExpr:
    """
    Sum_k coefficient(k) x^k truncated at mu^order

    Powers of a single operator commute, so repeated multiplication is exact.
    The sum is finite because x^k starts at mu^k.
    """
    _check_order(order)
    _check_graded(x, name)
    terms = []
    x_power = ONE_EXPR
    for k in range(order + 1):
        if k > 0:
            x_power = multiply(x_power, x, max_mu=order)
            if x_power.is_zero():
                break
        c = coefficient(k)
        if c != 0:
            terms.append(scale(c, x_power))
    return add_all(terms)


def binomial_coefficient(alpha: Fraction, k: int) -> Fraction:
    """Generalized binomial coefficient C(alpha, k)"""
    result = Fraction(1)
    for j in range(k):
        result *= (alpha - j) / (j + 1)
    return result


def binomial_series(x: OperatorExpr, alpha: Fraction, order: SeriesOrder) -> OperatorExpr:
    """(1 + x)^alpha as a truncated series"""
    alpha = Fraction(alpha)
    return power_series(x, lambda k: binomial_coefficient(alpha, k), order, name=f"(1+x)^{alpha}")


def inv_sqrt_series(x: OperatorExpr, order: SeriesOrder) -> OperatorExpr:
    """(1 + x)^(-1/2) = 1 - x/2 + (1*3)/(2*4) x^2 - ..."""
    return power_series(x, lambda k: binomial_coefficient(Fraction(-1, 2), k), order, name='inv_sqrt')


def _arcsin_coefficient(k: int) -> Fraction:
    if k % 2 == 0:
        return Fraction(0)
    j = (k - 1) // 2
    return Fraction(factorial(2 * j), 4 ** j * factorial(j) ** 2 * (2 * j + 1))


def arcsin_series(x: OperatorExpr, order: SeriesOrder) -> OperatorExpr:
    """arcsin x = x + x^3/6 + 3x^5/40 + 15x^7/336 + ..."""
    return power_series(x, _arcsin_coefficient, order, name='arcsin')


def exp_series(a: OperatorExpr, order: SeriesOrder) -> OperatorExpr:
    """Sum_k a^k / k! truncated at mu^order"""
    return power_series(a, lambda k: Fraction(1, factorial(k)), order, name='exp')


def log_series(one_plus_x: OperatorExpr, order: SeriesOrder) -> OperatorExpr:
    """
    log(1 + x) = Sum_k (-1)^(k+1) x^k / k

    Args:
        one_plus_x: Expression whose mu^0 part is exactly 1 and whose remainder
            carries mu^1 or higher
        order: Truncation order

    Raises:
        SeriesDomainError: constant term is not 1, or negative grades present
    """
    low = one_plus_x.min_mu_power()
    if low is not None and low < 0:
        raise SeriesDomainError(f"log: argument has a mu^{low} term")
    if grade_part(one_plus_x, 0) != ONE_EXPR:
        raise SeriesDomainError(
            f"log: constant term must be exactly 1, got {render(grade_part(one_plus_x, 0))}"
        )
    x = add(one_plus_x, scale(-1, ONE_EXPR))
    return power_series(
        x,
        lambda k: Fraction(0) if k == 0 else Fraction((-1) ** (k + 1), k),
        order,
        name='log',
    )


def bch(a: OperatorExpr, b: OperatorExpr, order: SeriesOrder) -> OperatorExpr:
    """C with exp(a) exp(b) = exp(C), as log(exp(a) exp(b)) in the graded algebra"""
    product = multiply(exp_series(a, order), exp_series(b, order), max_mu=order)
    return log_series(product, order)


def bch_explicit(a: OperatorExpr, b: OperatorExpr, order: SeriesOrder) -> OperatorExpr:
    """
    Leading commutator form
        A + B + [A,B]/2 + [A,[A,B]]/12 - [B,[A,B]]/12 - [B,[A,[A,B]]]/24
    truncated at mu^order (exact through the grade those terms cover)
    """
    ab = commutator(a, b, order)
    a_ab = commutator(a, ab, order)
    return truncate(
        add_all([
            a,
            b,
            scale(HALF, ab),
            scale(Fraction(1, 12), a_ab),
            scale(Fraction(-1, 12), commutator(b, ab, order)),
            scale(Fraction(-1, 24), commutator(b, a_ab, order)),
        ]),
        order,
    )


@lru_cache(maxsize=None)
def q_parts(order: SeriesOrder) -> Tuple[OperatorExpr, OperatorExpr]:
    """
    Even and odd corrections in (H^2)^(-1/2) = mu (1 + q_E + q_O)

    Returns:
        (q_E, q_O) through mu^order
    """
    _check_order(order, 1)
    q = add(inv_sqrt_series(h_squared_deviation(), order), scale(-1, ONE_EXPR))
    return even_part(q), odd_part(q)


def lambda_full(order: SeriesOrder) -> OperatorExpr:
    """lambda = {H, (H^2)^(-1/2)}/2 through mu^order"""
    _check_order(order, 1)
    q_e, q_o = q_parts(order)
    inv_abs = multiply(mu(1), add_all([ONE_EXPR, q_e, q_o]))
    return truncate(scale(HALF, anticommutator(hamiltonian(), inv_abs, order)), order)


@lru_cache(maxsize=None)
def lambda_odd(order: SeriesOrder) -> OperatorExpr:
    """(lambda - beta lambda beta)/2 = mu [2O + {E, q_O} + {O, q_E}] / 2"""
    _check_order(order, 1)
    q_e, q_o = q_parts(order)
    bracket = add_all([
        scale(2, O),
        anticommutator(E, q_o, order),
        anticommutator(O, q_e, order),
    ])
    return truncate(scale(HALF, multiply(mu(1), bracket)), order)


@lru_cache(maxsize=None)
def s_fw_series(order: SeriesOrder) -> OperatorExpr:
    """S_FW = -(i beta / 2) arcsin((lambda - beta lambda beta)/2) through mu^order"""
    _check_order(order, 1)
    angle = arcsin_series(lambda_odd(order), order)
    return scale(-I * HALF, multiply(BETA, angle))


def u_fw_series(order: SeriesOrder) -> OperatorExpr:
    """
    U_FW from sin(2 Theta) = (lambda - beta lambda beta)/2:
        (1 + sqrt(1 - sin^2) + beta sin) / sqrt(2 (1 + sqrt(1 - sin^2)))
    expanded through mu^order
    """
    _check_order(order, 1)
    sin2 = lambda_odd(order)
    cos2 = binomial_series(scale(-1, multiply(sin2, sin2, order)), HALF, order)
    cos2_minus_one = add(cos2, scale(-1, ONE_EXPR))
    # 1/sqrt(2(1 + cos2)) = (1/2) (1 + (cos2 - 1)/2)^(-1/2)
    denominator = scale(HALF, inv_sqrt_series(scale(HALF, cos2_minus_one), order))
    numerator = add_all([ONE_EXPR, cos2, multiply(BETA, sin2)])
    return multiply(numerator, denominator, max_mu=order)


def fw_hamiltonian_series(s: OperatorExpr, order: SeriesOrder) -> OperatorExpr:
    """
    H_FW = H + i[S, H] + (i^2/2!)[S, [S, H]] + ... (stationary case, G = H)

    Args:
        s: Exponential generator with every term at mu^1 or higher
        order: Truncation order of the result

    Returns:
        H_FW through mu^order. [S, mu^-1 beta] lowers the grade by one, so S
        must be known through mu^(order+1) for the result to be exact.
    """
    _check_order(order, 0)
    _check_graded(s, 'fw_hamiltonian_series')
    h = hamiltonian()
    terms = [h]
    nested = h
    # ad_S^k(H) starts at mu^(k-1)
    for k in range(1, order + 2):
        nested = scale(I * Fraction(1, k), commutator(s, nested, order))
        if nested.is_zero():
            break
        terms.append(nested)
    return truncate(add_all(terms), order)


def h_fw_series(order: SeriesOrder) -> OperatorExpr:
    """FW Hamiltonian generated by the exact exponential operator"""
    return fw_hamiltonian_series(s_fw_series(order + 1), order)


def fw1950_iterates() -> FwIterates:
    """S, S' and S'' of the original iterative method (stationary case)"""
    return FwIterates(
        s=parse('-1/2*i*mu*beta*O'),
        s_prime=parse('-1/4*i*mu^2*[O,E] + 1/6*i*mu^3*beta*O^3'),
        s_double_prime=parse('-1/8*i*mu^3*beta*[[O,E],E]'),
    )


def fw1950_compose(order: SeriesOrder = 3) -> OperatorExpr:
    """
    Single exponent of exp(iS'') exp(iS') exp(iS)

    Returns:
        The generator with exp(i * result) equal to the product, through mu^order
    """
    _check_order(order, 3)
    iterates = fw1950_iterates()
    inner = bch(scale(I, iterates.s_prime), scale(I, iterates.s), order)
    i_generator = bch(scale(I, iterates.s_double_prime), inner, order)
    return scale(-I, i_generator)


def exponential_residual(candidate: OperatorExpr, order: SeriesOrder) -> OperatorExpr:
    """candidate - S_FW through mu^order"""
    return truncate(add(candidate, scale(-1, s_fw_series(order))), order)


def lowest_order_part(x: OperatorExpr) -> Tuple[Optional[int], OperatorExpr]:
    """(k, terms at mu^k) for the smallest k present in x"""
    low = x.min_mu_power()
    if low is None:
        return None, x
    return low, grade_part(x, low)


def verify_exponential_method(candidate: OperatorExpr, order: SeriesOrder):
    """
    Compare a proposed exponential generator with S_FW

    Args:
        candidate: Graded generator produced by the method under test
        order: Truncation order of the comparison

    Returns:
        VerificationReport with one case; details['verdict'] is 'is-FW' when the
        residual vanishes and 'not-FW' otherwise
    """
    residual = exponential_residual(candidate, order)
    low, lowest = lowest_order_part(residual)
    is_fw = residual.is_zero()
    details = {
        'order': order,
        'verdict': 'is-FW' if is_fw else 'not-FW',
        'candidate': render(truncate(candidate, order)),
        's_fw': render(s_fw_series(order)),
    }
    if not is_fw:
        details['lowest_order'] = low
        details['lowest_order_residual'] = render(lowest)
        details['even_residual'] = render(even_part(residual))
    case = CaseResult(
        name='exponential-method',
        verdict='pass' if is_fw else 'fail',
        residual=render(residual),
        details=details,
    )
    return VerificationReport.from_cases('verify-exponential-method', [case])
