"""
Expression Grammar - parse and render OperatorExpr text

Grammar (whitespace insignificant):
    expr   := sign* term (sign+ term)*
    sign   := '+' | '-'
    term   := factor ('*' factor)*
    factor := atom ('^' signed-int)*
    atom   := number ['i'] | 'beta' | 'E' | 'O' | 'mu' | 'i'
            | '[' expr ',' expr ']' | '{' expr ',' expr '}' | '(' expr ')'
    number := uint ['/' uint]

Negative exponents are accepted on mu only. Runs of signs multiply, so
"E - -1*O" is E + O. render() emits this grammar and
parse(render(x)) == x for every canonical expression.
"""

from fractions import Fraction
from typing import List, Tuple

from pyparsing import (
    Combine,
    Forward,
    Literal,
    OneOrMore,
    Optional,
    ParseBaseException,
    ParseFatalException,
    Regex,
    Suppress,
    Word,
    ZeroOrMore,
    alphanums,
    alphas,
    nums,
)

from coefficient import Coefficient
from operator_algebra import (
    BETA,
    E,
    O,
    Monomial,
    OperatorExpr,
    add_all,
    anticommutator,
    commutator,
    multiply,
    mu,
    power,
    scale,
)


class ExprSyntaxError(ValueError):
    """Raised when text does not conform to the expression grammar"""

    def __init__(self, message: str, text: str = '', offset: int = 0):
        self.text = text
        self.offset = offset
        super().__init__(f"{message} (at byte {offset})")


class UnknownSymbolError(ExprSyntaxError):
    """Raised for identifiers other than beta, E, O, mu and i"""
    pass


KNOWN_SYMBOLS = ('beta', 'E', 'O', 'mu', 'i')


# Grammar -----------------------------------------------------------------------
# Parse actions build a small tuple AST; _evaluate turns it into an OperatorExpr.

def _number_action(s, loc, toks):
    numerator = int(toks[0])
    denominator = int(toks[1]) if len(toks) > 1 and toks[1] != 'i' else 1
    if denominator == 0:
        raise ParseFatalException(s, loc, "zero denominator")
    node = ('num', Fraction(numerator, denominator))
    if toks[-1] == 'i':
        return ('mul', [node, ('sym', 'i')])
    return node


def _symbol_action(s, loc, toks):
    name = toks[0]
    if name not in KNOWN_SYMBOLS:
        raise ParseFatalException(s, loc, f"unknown symbol {name!r}")
    return ('sym', name)


def _factor_action(s, loc, toks):
    base = toks[0]
    exponents = [int(t) for t in toks[1:]]
    if not exponents:
        return base
    if any(e < 0 for e in exponents) and base != ('sym', 'mu'):
        raise ParseFatalException(s, loc, "negative exponent is only allowed on mu")
    return ('pow', base, exponents)


def _term_action(s, loc, toks):
    factors = list(toks)
    if len(factors) == 1:
        return factors[0]
    return ('mul', factors)


def _expr_action(s, loc, toks):
    items = list(toks)
    signed: List[Tuple[int, tuple]] = []
    sign = 1
    for item in items:
        if item == '-':
            sign = -sign
        elif item == '+':
            pass
        else:
            signed.append((sign, item))
            sign = 1
    return ('sum', signed)


def _build_grammar():
    expr = Forward()

    uint = Word(nums)
    signed_int = Combine(Optional(Literal('-')) + Word(nums))
    imag_suffix = Regex(r'i(?![A-Za-z0-9_])')

    number = (uint + Optional(Suppress('/') + uint) + Optional(imag_suffix)).set_parse_action(_number_action)
    symbol = Word(alphas, alphanums + '_').set_parse_action(_symbol_action)
    bracket = (Suppress('[') + expr + Suppress(',') + expr + Suppress(']')).set_parse_action(
        lambda toks: ('comm', toks[0], toks[1])
    )
    brace = (Suppress('{') + expr + Suppress(',') + expr + Suppress('}')).set_parse_action(
        lambda toks: ('acomm', toks[0], toks[1])
    )
    paren = (Suppress('(') + expr + Suppress(')')).set_parse_action(lambda toks: toks[0])

    atom = number | bracket | brace | paren | symbol
    factor = (atom + ZeroOrMore(Suppress('^') + signed_int)).set_parse_action(_factor_action)
    term = (factor + ZeroOrMore(Suppress('*') + factor)).set_parse_action(_term_action)
    sign = Literal('+') | Literal('-')
    expr <<= (ZeroOrMore(sign) + term + ZeroOrMore(OneOrMore(sign) + term)).set_parse_action(_expr_action)
    return expr


_GRAMMAR = _build_grammar()

_SYMBOLS = {
    'beta': BETA,
    'E': E,
    'O': O,
    'mu': mu(1),
    'i': OperatorExpr.scalar(Coefficient.imaginary(1)),
}


def _evaluate(node) -> OperatorExpr:
    kind = node[0]
    if kind == 'num':
        return OperatorExpr.scalar(node[1])
    if kind == 'sym':
        return _SYMBOLS[node[1]]
    if kind == 'comm':
        return commutator(_evaluate(node[1]), _evaluate(node[2]))
    if kind == 'acomm':
        return anticommutator(_evaluate(node[1]), _evaluate(node[2]))
    if kind == 'pow':
        base, exponents = node[1], node[2]
        if base == ('sym', 'mu'):
            total = 1
            for e in exponents:
                total *= e
            return mu(total)
        result = _evaluate(base)
        for e in exponents:
            result = power(result, e)
        return result
    if kind == 'mul':
        result = _evaluate(node[1][0])
        for factor in node[1][1:]:
            result = multiply(result, _evaluate(factor))
        return result
    if kind == 'sum':
        return add_all(scale(sign, _evaluate(term)) for sign, term in node[1])
    raise ValueError(f"Unknown AST node: {kind}")


def _byte_offset(text: str, loc: int) -> int:
    return len(text[:loc].encode('utf-8'))


def parse(text: str) -> OperatorExpr:
    """
    Parse expression text into canonical form

    Args:
        text: Expression in the grammar above

    Returns:
        Canonical OperatorExpr (beta moved to the front of every monomial)

    Raises:
        UnknownSymbolError: identifier other than beta, E, O, mu, i
        ExprSyntaxError: any other grammar violation
    """
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", text, 0)
    try:
        tree = _GRAMMAR.parse_string(text, parse_all=True)[0]
    except ParseFatalException as e:
        offset = _byte_offset(text, e.loc)
        if 'unknown symbol' in str(e.msg):
            raise UnknownSymbolError(e.msg, text, offset) from None
        raise ExprSyntaxError(e.msg, text, offset) from None
    except ParseBaseException as e:
        raise ExprSyntaxError(f"syntax error: {e.msg}", text, _byte_offset(text, e.loc)) from None
    return _evaluate(tree)


# Rendering ----------------------------------------------------------------------

def _fraction_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _monomial_factors(monomial: Monomial) -> List[str]:
    factors = []
    if monomial.mu_power == 1:
        factors.append('mu')
    elif monomial.mu_power != 0:
        factors.append(f"mu^{monomial.mu_power}")
    if monomial.beta_exp:
        factors.append('beta')
    word = monomial.word
    i = 0
    while i < len(word):
        run = 1
        while i + run < len(word) and word[i + run] == word[i]:
            run += 1
        factors.append(word[i] if run == 1 else f"{word[i]}^{run}")
        i += run
    return factors


def _complex_text(coeff: Coefficient) -> str:
    re_text = _fraction_text(coeff.re)
    im_mag = abs(coeff.im)
    im_text = 'i' if im_mag == 1 else f"{_fraction_text(im_mag)}*i"
    joiner = ' - ' if coeff.im < 0 else ' + '
    return f"({re_text}{joiner}{im_text})"


def _term_text(monomial: Monomial, coeff: Coefficient) -> Tuple[int, str]:
    """Returns (sign, unsigned text) for one canonical term"""
    factors = _monomial_factors(monomial)
    if coeff.is_real():
        sign = 1 if coeff.re > 0 else -1
        magnitude = abs(coeff.re)
        head = [] if (magnitude == 1 and factors) else [_fraction_text(magnitude)]
    elif coeff.is_imaginary():
        sign = 1 if coeff.im > 0 else -1
        magnitude = abs(coeff.im)
        head = ['i'] if magnitude == 1 else [_fraction_text(magnitude), 'i']
    else:
        sign = 1
        head = [_complex_text(coeff)]
    return sign, '*'.join(head + factors)


def render(x: OperatorExpr) -> str:
    """
    Deterministic canonical text

    Terms are ordered by mu_power, then beta_exp, then word.
    """
    if x.is_zero():
        return '0'
    parts = []
    for index, (monomial, coeff) in enumerate(x.items()):
        sign, text = _term_text(monomial, coeff)
        if index == 0:
            parts.append(text if sign > 0 else f"-{text}")
        else:
            parts.append(f" + {text}" if sign > 0 else f" - {text}")
    return ''.join(parts)
