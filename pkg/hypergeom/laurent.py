"""
Expanded Arithmetic and Laurent Expansions in alpha

Factored expressions are converted into sympy's sparse polynomial rings
(sympy.polys.rings) and rational function fields (sympy.polys.fields) when
a sum has to be formed: localization sums, series assembly and the mirror
transform. LaurentInAlpha stores a truncated expansion in alpha whose
coefficients are alpha-free rational functions.
"""

import logging
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, Mapping, Optional, Union

from sympy import QQ, Symbol
from sympy.polys.fields import FracElement, FracField
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement

from hypergeom.exceptions import PrecisionError
from hypergeom.symbolic import (
    ALPHA,
    X,
    FactoredExpr,
    LinearForm,
    Variable,
    VarKind,
    H,
    as_form,
    kappa,
    u,
    y,
)

logger = logging.getLogger(__name__)


def to_qq(value):
    """Exact rational (int or Fraction) as an element of sympy's QQ."""
    if isinstance(value, int):
        return QQ(value)
    return QQ(value.numerator, value.denominator)


class Alphabet:
    """
    A polynomial ring and its fraction field over a fixed list of variables.

    Generators are named after Variable.name, so "a" is alpha.
    """

    def __init__(self, variables: Iterable[Variable]):
        self.variables = tuple(sorted(set(variables)))
        self.field = FracField([Symbol(v.name) for v in self.variables], QQ, lex)
        self.ring = self.field.ring
        self._index = {v: i for i, v in enumerate(self.variables)}

    def __repr__(self) -> str:
        return f"Alphabet({', '.join(v.name for v in self.variables)})"

    def index(self, var: Variable) -> int:
        try:
            return self._index[var]
        except KeyError:
            raise ValueError(f"variable {var} is not in {self!r}") from None

    def gen(self, var: Variable) -> PolyElement:
        return self.ring.gens[self.index(var)]

    def poly(self, form: Union[LinearForm, Variable]) -> PolyElement:
        form = as_form(form)
        result = self.ring.ground_new(to_qq(form.constant))
        for var, coeff in form.coeffs:
            result += self.gen(var) * to_qq(coeff)
        return result

    def scalar(self, value) -> FracElement:
        return self.field.ground_new(to_qq(value))

    def lift(self, poly: PolyElement) -> FracElement:
        return self.field.new(poly)

    def form(self, form: Union[LinearForm, Variable]) -> FracElement:
        return self.field.new(self.poly(form))

    def numer_denom(self, e: FactoredExpr):
        numer = self.ring.ground_new(to_qq(e.scalar))
        denom = self.ring.one
        for form, exponent in e.factors:
            if exponent > 0:
                numer *= self.poly(form) ** exponent
            else:
                denom *= self.poly(form) ** (-exponent)
        return numer, denom

    def to_poly(self, e: FactoredExpr) -> PolyElement:
        """
        Expand a polynomial-type expression.

        Raises:
            ValueError: If e has a factor with negative exponent
        """
        if not e.is_polynomial:
            raise ValueError(f"expression has a denominator: {e}")
        numer, _ = self.numer_denom(e)
        return numer

    def to_field(self, e: FactoredExpr) -> FracElement:
        numer, denom = self.numer_denom(e)
        return self.field.new(numer, denom)

    def involves(self, poly: PolyElement, var: Variable) -> bool:
        return bool(poly) and poly.degree(self.index(var)) > 0

    @classmethod
    def covering(cls, e: FactoredExpr) -> "Alphabet":
        """The flag alphabet large enough for every variable of e."""
        n = 2
        for var in e.variables():
            if var.kind in (VarKind.U, VarKind.Y):
                n = max(n, var.index)
            elif var.kind in (VarKind.H, VarKind.KAPPA):
                n = max(n, var.index + 1)
            elif var.kind in (VarKind.ZETA, VarKind.T):
                raise ValueError(f"variable {var} has no place in an expansion alphabet")
        return alphabet_for(n)


@lru_cache(maxsize=None)
def alphabet_for(n: int) -> Alphabet:
    """x, alpha, u_1..u_n, H_1..H_{n-1}, kappa_1..kappa_{n-1}, y_1..y_n."""
    variables = [X, ALPHA]
    variables += [u(i) for i in range(1, n + 1)]
    variables += [H(a) for a in range(1, n)]
    variables += [kappa(a) for a in range(1, n)]
    variables += [y(a) for a in range(1, n + 1)]
    return Alphabet(variables)


class LaurentInAlpha:
    """
    sum_k c_k * alpha^k with alpha-free rational coefficients c_k.

    floor is None for an exact (finite) expansion. Otherwise every coefficient
    with k >= floor is known exactly and nothing is claimed below it.
    """

    __slots__ = ("field", "terms", "floor")

    def __init__(self, field: FracField, terms: Mapping[int, FracElement], floor: Optional[int] = None):
        self.field = field
        self.floor = floor
        self.terms: Dict[int, FracElement] = {
            k: c for k, c in sorted(terms.items()) if c and (floor is None or k >= floor)
        }

    @classmethod
    def zero(cls, field: FracField, floor: Optional[int] = None) -> "LaurentInAlpha":
        return cls(field, {}, floor)

    @classmethod
    def constant(cls, field: FracField, value) -> "LaurentInAlpha":
        return cls(field, {0: field(value)})

    @classmethod
    def monomial(cls, field: FracField, k: int, coeff: FracElement) -> "LaurentInAlpha":
        return cls(field, {k: coeff})

    @property
    def is_exact(self) -> bool:
        return self.floor is None

    def coefficient(self, k: int) -> FracElement:
        """
        Raises:
            PrecisionError: If k lies below the truncation floor
        """
        if self.floor is not None and k < self.floor:
            raise PrecisionError(f"coefficient of alpha^{k} lies below truncation floor {self.floor}")
        return self.terms.get(k, self.field.zero)

    def top(self) -> Optional[int]:
        return max(self.terms) if self.terms else None

    def _upper_bound(self) -> Optional[int]:
        top = self.top()
        if self.floor is None:
            return top
        bound = self.floor - 1
        return bound if top is None else max(top, bound)

    def degree_at_most(self, m: int) -> bool:
        """
        True iff no coefficient above alpha^m is nonzero.

        Raises:
            PrecisionError: If the floor is too high to certify the claim
        """
        top = self.top()
        if top is not None and top > m:
            return False
        if self.floor is not None and self.floor > m + 1:
            raise PrecisionError(f"cannot certify degree <= {m} with truncation floor {self.floor}")
        return True

    def truncate(self, floor: int) -> "LaurentInAlpha":
        new_floor = floor if self.floor is None else max(floor, self.floor)
        return LaurentInAlpha(self.field, self.terms, new_floor)

    def _combined_floor(self, other: "LaurentInAlpha") -> Optional[int]:
        floors = [f for f in (self.floor, other.floor) if f is not None]
        return max(floors) if floors else None

    def __add__(self, other) -> "LaurentInAlpha":
        if not isinstance(other, LaurentInAlpha):
            other = LaurentInAlpha.constant(self.field, other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, self.field.zero) + c
        return LaurentInAlpha(self.field, terms, self._combined_floor(other))

    __radd__ = __add__

    def __neg__(self) -> "LaurentInAlpha":
        return LaurentInAlpha(self.field, {k: -c for k, c in self.terms.items()}, self.floor)

    def __sub__(self, other) -> "LaurentInAlpha":
        if not isinstance(other, LaurentInAlpha):
            other = LaurentInAlpha.constant(self.field, other)
        return self + (-other)

    def scale(self, coeff) -> "LaurentInAlpha":
        return LaurentInAlpha(self.field, {k: c * coeff for k, c in self.terms.items()}, self.floor)

    def __mul__(self, other) -> "LaurentInAlpha":
        if not isinstance(other, LaurentInAlpha):
            return self.scale(other)
        floors = []
        if self.floor is not None:
            bound = other._upper_bound()
            if bound is not None:
                floors.append(self.floor + bound)
        if other.floor is not None:
            bound = self._upper_bound()
            if bound is not None:
                floors.append(other.floor + bound)
        floor = max(floors) if floors else None
        terms: Dict[int, FracElement] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                if floor is not None and k < floor:
                    continue
                terms[k] = terms.get(k, self.field.zero) + c1 * c2
        return LaurentInAlpha(self.field, terms, floor)

    __rmul__ = __mul__

    def bar(self) -> "LaurentInAlpha":
        return LaurentInAlpha(self.field, {k: (-c if k % 2 else c) for k, c in self.terms.items()}, self.floor)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentInAlpha):
            return NotImplemented
        if self.floor != other.floor:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(not (self.coefficient(k) - other.coefficient(k)) for k in keys)

    def __repr__(self) -> str:
        parts = [f"({c.as_expr()})*a^{k}" for k, c in sorted(self.terms.items(), reverse=True)]
        if self.floor is not None:
            parts.append(f"O(a^{self.floor - 1})")
        return " + ".join(parts) if parts else "0"


def _generalized_binomial(m: int, j: int):
    numerator = 1
    for step in range(j):
        numerator *= m - step
    return QQ(numerator, factorial(j))


def _expand_factor(
    alphabet: Alphabet, form: LinearForm, exponent: int, floor: Optional[int]
) -> LaurentInAlpha:
    field = alphabet.field
    slope = form.coefficient(ALPHA)
    rest = form - ALPHA.form * slope
    base = alphabet.form(rest)
    if slope == 0:
        return LaurentInAlpha.constant(field, base ** exponent)
    c = alphabet.scalar(slope)
    if rest.is_zero:
        return LaurentInAlpha.monomial(field, exponent, c ** exponent)
    if exponent > 0:
        terms = {
            j: base ** (exponent - j) * c ** j * field.ground_new(_generalized_binomial(exponent, j))
            for j in range(exponent + 1)
        }
        return LaurentInAlpha(field, terms)
    # (c*alpha)^m * (1 + rest/(c*alpha))^m for m < 0; terms alpha^(m-j)
    ratio = base / c
    floor = min(floor, exponent)
    lead = c ** exponent
    terms = {}
    j = 0
    while exponent - j >= floor:
        terms[exponent - j] = lead * ratio ** j * field.ground_new(_generalized_binomial(exponent, j))
        j += 1
    return LaurentInAlpha(field, terms, floor)


def expand_alpha(e: FactoredExpr, floor: int, alphabet: Optional[Alphabet] = None) -> LaurentInAlpha:
    """
    Laurent expansion of e in alpha, correct for every power >= floor.

    Args:
        e: Factored expression
        floor: Lowest power of alpha that must be exact
        alphabet: Coefficient alphabet (defaults to the flag alphabet covering e)

    Returns:
        LaurentInAlpha: Exact when the expansion is finite and stays >= floor
    """
    alphabet = alphabet or Alphabet.covering(e)
    field = alphabet.field
    tops = []
    for form, exponent in e.factors:
        tops.append(exponent if form.contains(ALPHA) else 0)
    total_top = sum(tops)
    result = LaurentInAlpha.constant(field, alphabet.scalar(e.scalar))
    for (form, exponent), top in zip(e.factors, tops):
        local_floor = floor - (total_top - top)
        result = result * _expand_factor(alphabet, form, exponent, local_floor)
    if result.floor is None:
        if result.terms and min(result.terms) < floor:
            result = result.truncate(floor)
    else:
        result = result.truncate(floor)
    logger.debug(f"Expanded {len(e.factors)} factors down to alpha^{floor}")
    return result


def bar_field(value: FracElement, alphabet: Alphabet) -> FracElement:
    """alpha -> -alpha on an element of the alphabet's fraction field."""
    gen = alphabet.gen(ALPHA)
    return alphabet.field.new(value.numer.compose(gen, -gen), value.denom.compose(gen, -gen))


def same(a: FracElement, b: FracElement) -> bool:
    """Equality of field elements independent of their stored normalization."""
    return not (a - b)
