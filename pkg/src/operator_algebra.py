"""
Operator Algebra - canonical-form noncommutative expressions
Formal algebra generated by beta, E, O and the grade mu = 1/(mc^2)

Only the beta relations rewrite:
    beta*E = E*beta,  beta*O = -O*beta,  beta^2 = 1
E and O are free. Every expression is stored in canonical form: a map from
Monomial (beta_exp, word, mu_power) to a nonzero exact Coefficient, with beta
moved to the front of each monomial.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Optional, Tuple

from coefficient import Coefficient, Number, ONE

GENERATORS = ('E', 'O')


@dataclass(frozen=True)
class Monomial:
    """beta^beta_exp * word * mu^mu_power"""

    beta_exp: int = 0
    word: Tuple[str, ...] = ()
    mu_power: int = 0

    def __post_init__(self):
        if self.beta_exp not in (0, 1):
            raise ValueError(f"beta_exp must be 0 or 1, got {self.beta_exp}")
        object.__setattr__(self, 'word', tuple(self.word))
        for letter in self.word:
            if letter not in GENERATORS:
                raise ValueError(f"Unknown generator in word: {letter!r}")

    @property
    def odd_count(self) -> int:
        return sum(1 for letter in self.word if letter == 'O')

    @property
    def is_even(self) -> bool:
        """Parity under beta-conjugation is (-1)^(number of O)"""
        return self.odd_count % 2 == 0

    def sort_key(self) -> Tuple[int, int, Tuple[str, ...]]:
        return (self.mu_power, self.beta_exp, self.word)

    def times(self, other: 'Monomial') -> Tuple[int, 'Monomial']:
        """
        Multiply two monomials

        Moving other's beta to the front crosses every O in self.word.

        Returns:
            (sign, monomial) with sign in {+1, -1}
        """
        sign = -1 if (other.beta_exp and self.odd_count % 2) else 1
        return sign, Monomial(
            (self.beta_exp + other.beta_exp) % 2,
            self.word + other.word,
            self.mu_power + other.mu_power,
        )


IDENTITY_MONOMIAL = Monomial()


class OperatorExpr:
    """Immutable canonical-form element of the algebra"""

    __slots__ = ('_terms', '_hash')

    def __init__(self, terms: Optional[Dict[Monomial, Number]] = None):
        canonical = {}
        for monomial, coeff in (terms or {}).items():
            coeff = Coefficient.of(coeff)
            if not coeff.is_zero():
                canonical[monomial] = coeff
        # deterministic storage order: mu_power, beta_exp, word
        self._terms = dict(sorted(canonical.items(), key=lambda kv: kv[0].sort_key()))
        self._hash = None

    # --- construction helpers -------------------------------------------

    @classmethod
    def _from_canonical(cls, terms: Dict[Monomial, Coefficient]) -> 'OperatorExpr':
        return cls({m: c for m, c in terms.items() if not c.is_zero()})

    @classmethod
    def zero(cls) -> 'OperatorExpr':
        return cls()

    @classmethod
    def scalar(cls, value: Number) -> 'OperatorExpr':
        return cls({IDENTITY_MONOMIAL: value})

    @classmethod
    def monomial(cls, monomial: Monomial, coeff: Number = 1) -> 'OperatorExpr':
        return cls({monomial: coeff})

    # --- inspection -------------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, Coefficient]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Coefficient]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, monomial: Monomial) -> Coefficient:
        return self._terms.get(monomial, Coefficient(0))

    def min_mu_power(self) -> Optional[int]:
        if not self._terms:
            return None
        return min(m.mu_power for m in self._terms)

    # --- operators --------------------------------------------------------

    def __add__(self, other) -> 'OperatorExpr':
        return add(self, _coerce(other))

    def __radd__(self, other) -> 'OperatorExpr':
        return add(_coerce(other), self)

    def __neg__(self) -> 'OperatorExpr':
        return scale(-1, self)

    def __sub__(self, other) -> 'OperatorExpr':
        return add(self, scale(-1, _coerce(other)))

    def __rsub__(self, other) -> 'OperatorExpr':
        return add(_coerce(other), scale(-1, self))

    def __mul__(self, other) -> 'OperatorExpr':
        if isinstance(other, OperatorExpr):
            return multiply(self, other)
        return scale(other, self)

    def __rmul__(self, other) -> 'OperatorExpr':
        return scale(other, self)

    def __pow__(self, exponent: int) -> 'OperatorExpr':
        return power(self, exponent)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorExpr):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return canonical_equals(self, other)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        from expr_grammar import render
        return render(self)

    def __repr__(self) -> str:
        return f"OperatorExpr({str(self)!r})"


def _coerce(value) -> OperatorExpr:
    if isinstance(value, OperatorExpr):
        return value
    return OperatorExpr.scalar(Coefficient.of(value))


# Generators -----------------------------------------------------------------

BETA = OperatorExpr.monomial(Monomial(1, (), 0))
E = OperatorExpr.monomial(Monomial(0, ('E',), 0))
O = OperatorExpr.monomial(Monomial(0, ('O',), 0))
ONE_EXPR = OperatorExpr.scalar(1)


def mu(power: int = 1) -> OperatorExpr:
    """The grade parameter mu^power (mu = 1/(mc^2))"""
    return OperatorExpr.monomial(Monomial(0, (), power))


# Core operations ------------------------------------------------------------

def add(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    terms = dict(a._terms)
    for monomial, coeff in b._terms.items():
        terms[monomial] = terms.get(monomial, Coefficient(0)) + coeff
    return OperatorExpr._from_canonical(terms)


def add_all(exprs: Iterable[OperatorExpr]) -> OperatorExpr:
    terms: Dict[Monomial, Coefficient] = {}
    for expr in exprs:
        for monomial, coeff in expr._terms.items():
            terms[monomial] = terms.get(monomial, Coefficient(0)) + coeff
    return OperatorExpr._from_canonical(terms)


def scale(c: Number, a: OperatorExpr) -> OperatorExpr:
    c = Coefficient.of(c)
    if c.is_zero():
        return OperatorExpr.zero()
    return OperatorExpr._from_canonical({m: c * coeff for m, coeff in a._terms.items()})


def multiply(a: OperatorExpr, b: OperatorExpr, max_mu: Optional[int] = None) -> OperatorExpr:
    """
    Product a*b in canonical form

    Args:
        a, b: Factors
        max_mu: If given, terms with mu_power > max_mu are never formed

    Returns:
        Canonical product (truncated when max_mu is set)
    """
    terms: Dict[Monomial, Coefficient] = {}
    b_items = list(b._terms.items())  # already sorted by mu_power
    for ma, ca in a._terms.items():
        for mb, cb in b_items:
            if max_mu is not None and ma.mu_power + mb.mu_power > max_mu:
                break
            sign, product = ma.times(mb)
            coeff = ca * cb
            if sign < 0:
                coeff = -coeff
            terms[product] = terms.get(product, Coefficient(0)) + coeff
    return OperatorExpr._from_canonical(terms)


def power(a: OperatorExpr, exponent: int, max_mu: Optional[int] = None) -> OperatorExpr:
    if exponent < 0:
        raise ValueError("Negative powers of operators are not defined")
    result = ONE_EXPR
    for _ in range(exponent):
        result = multiply(result, a, max_mu)
    return result


def commutator(a: OperatorExpr, b: OperatorExpr, max_mu: Optional[int] = None) -> OperatorExpr:
    """[a, b] = ab - ba"""
    return add(multiply(a, b, max_mu), scale(-1, multiply(b, a, max_mu)))


def anticommutator(a: OperatorExpr, b: OperatorExpr, max_mu: Optional[int] = None) -> OperatorExpr:
    """{a, b} = ab + ba"""
    return add(multiply(a, b, max_mu), multiply(b, a, max_mu))


def even_part(x: OperatorExpr) -> OperatorExpr:
    """(x + beta x beta)/2: monomials with an even number of O"""
    return OperatorExpr._from_canonical({m: c for m, c in x._terms.items() if m.is_even})


def odd_part(x: OperatorExpr) -> OperatorExpr:
    """(x - beta x beta)/2: monomials with an odd number of O"""
    return OperatorExpr._from_canonical({m: c for m, c in x._terms.items() if not m.is_even})


def beta_conjugate(x: OperatorExpr) -> OperatorExpr:
    """beta * x * beta, computed by multiplication"""
    return multiply(multiply(BETA, x), BETA)


def truncate(x: OperatorExpr, n: int) -> OperatorExpr:
    """Drop every term with mu_power > n"""
    return OperatorExpr._from_canonical({m: c for m, c in x._terms.items() if m.mu_power <= n})


def grade_part(x: OperatorExpr, k: int) -> OperatorExpr:
    """Terms with mu_power exactly k"""
    return OperatorExpr._from_canonical({m: c for m, c in x._terms.items() if m.mu_power == k})


def drop_generator(x: OperatorExpr, letter: str) -> OperatorExpr:
    """Substitute letter = 0: remove every monomial whose word contains it"""
    return OperatorExpr._from_canonical(
        {m: c for m, c in x._terms.items() if letter not in m.word}
    )


def canonical_equals(a: OperatorExpr, b: OperatorExpr) -> bool:
    """True iff the canonical term maps are identical"""
    return a._terms == b._terms
