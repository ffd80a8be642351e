"""
Factored Symbolic Arithmetic

Exact arithmetic on products of affine linear forms over the variable
alphabet {x, alpha, u_i, H_a, kappa_a, y_a, zeta_a, t_a}. Every Euler-data
identity and localization product in this package is a quotient of such
products, so equality is decided by comparing canonical factor multisets.
"""

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from hypergeom.exceptions import (
    ExpressionSyntaxError,
    NonAffineResultError,
    UnknownVariableError,
    ZeroDenominatorError,
    ZeroFactorError,
)

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


class VarKind(IntEnum):
    """Variable kinds in canonical order."""
    X = 0
    ALPHA = 1
    U = 2
    H = 3
    KAPPA = 4
    Y = 5
    ZETA = 6
    T = 7


_PREFIX = {
    VarKind.X: "x",
    VarKind.ALPHA: "a",
    VarKind.U: "u",
    VarKind.H: "H",
    VarKind.KAPPA: "k",
    VarKind.Y: "y",
    VarKind.ZETA: "z",
    VarKind.T: "t",
}
_KIND_BY_PREFIX = {prefix: kind for kind, prefix in _PREFIX.items()}
_UNINDEXED = {VarKind.X, VarKind.ALPHA}


@dataclass(frozen=True, order=True)
class Variable:
    """
    A variable of the alphabet, ordered by (kind, index).

    x and alpha carry index 0; every other kind needs an index >= 1.
    """
    kind: VarKind
    index: int = 0

    def __post_init__(self):
        if self.kind in _UNINDEXED:
            if self.index != 0:
                raise ValueError(f"{_PREFIX[self.kind]} takes no index")
        elif self.index < 1:
            raise ValueError(f"index of {_PREFIX[self.kind]} must be >= 1, got {self.index}")

    @property
    def name(self) -> str:
        prefix = _PREFIX[self.kind]
        return prefix if self.kind in _UNINDEXED else f"{prefix}{self.index}"

    @property
    def form(self) -> "LinearForm":
        return LinearForm(Fraction(0), ((self, Fraction(1)),))

    def __str__(self) -> str:
        return self.name

    # Arithmetic lifts to LinearForm so that formulas read naturally.
    def __add__(self, other):
        return self.form + other

    __radd__ = __add__

    def __sub__(self, other):
        return self.form - other

    def __rsub__(self, other):
        return -self.form + other

    def __neg__(self):
        return -self.form

    def __mul__(self, other):
        return self.form * other

    __rmul__ = __mul__


X = Variable(VarKind.X)
ALPHA = Variable(VarKind.ALPHA)


def u(i: int) -> Variable:
    return Variable(VarKind.U, i)


def H(a: int) -> Variable:
    return Variable(VarKind.H, a)


def kappa(a: int) -> Variable:
    return Variable(VarKind.KAPPA, a)


def y(a: int) -> Variable:
    return Variable(VarKind.Y, a)


def zeta(a: int) -> Variable:
    return Variable(VarKind.ZETA, a)


def t(a: int) -> Variable:
    return Variable(VarKind.T, a)


def _rational(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _render_rational(value: Fraction) -> str:
    return str(value)


@dataclass(frozen=True)
class LinearForm:
    """
    Affine combination constant + sum(c_v * v) with exact rational coefficients.

    coeffs is kept sorted by the variable order with no zero entries, so two
    forms are equal iff their stored data are identical.
    """
    constant: Fraction = Fraction(0)
    coeffs: Tuple[Tuple[Variable, Fraction], ...] = ()

    @classmethod
    def build(cls, constant: Rational = 0, coeffs: Optional[Mapping[Variable, Rational]] = None) -> "LinearForm":
        cleaned = {}
        for var, coeff in (coeffs or {}).items():
            value = _rational(coeff)
            if value:
                cleaned[var] = value
        return cls(_rational(constant), tuple(sorted(cleaned.items())))

    @classmethod
    def const(cls, value: Rational) -> "LinearForm":
        return cls(_rational(value), ())

    def as_dict(self) -> Dict[Variable, Fraction]:
        return dict(self.coeffs)

    def coefficient(self, var: Variable) -> Fraction:
        for v, c in self.coeffs:
            if v == var:
                return c
        return Fraction(0)

    def variables(self) -> Tuple[Variable, ...]:
        return tuple(v for v, _ in self.coeffs)

    def contains(self, var: Variable) -> bool:
        return any(v == var for v, _ in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs and self.constant == 0

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        """Leading coefficient under the variable order (constant if none)."""
        return self.coeffs[0][1] if self.coeffs else self.constant

    def monic(self) -> Tuple[Fraction, "LinearForm"]:
        """
        Split off the leading coefficient.

        Returns:
            (lead, form) with self == lead * form and form's leading coefficient 1
        """
        lead = self.leading()
        if lead == 0:
            raise ZeroFactorError("zero linear form has no monic representative")
        if lead == 1:
            return lead, self
        return lead, self * (1 / lead)

    def sort_key(self):
        return (tuple((v.kind, v.index, c) for v, c in self.coeffs), self.constant)

    def __add__(self, other) -> "LinearForm":
        other = as_form(other)
        merged = Counter(self.as_dict())
        for v, c in other.coeffs:
            merged[v] += c
        return LinearForm.build(self.constant + other.constant, merged)

    __radd__ = __add__

    def __neg__(self) -> "LinearForm":
        return LinearForm(-self.constant, tuple((v, -c) for v, c in self.coeffs))

    def __sub__(self, other) -> "LinearForm":
        return self + (-as_form(other))

    def __rsub__(self, other) -> "LinearForm":
        return as_form(other) - self

    def __mul__(self, scalar) -> "LinearForm":
        if isinstance(scalar, (LinearForm, Variable)):
            raise NonAffineResultError("product of two linear forms is not affine")
        s = _rational(scalar)
        if s == 0:
            return LinearForm()
        return LinearForm(self.constant * s, tuple((v, c * s) for v, c in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "LinearForm":
        return self * (1 / _rational(scalar))

    def substitute(self, assignment: Mapping[Variable, "Substitution"]) -> "LinearForm":
        result = LinearForm.const(self.constant)
        for v, c in self.coeffs:
            if v in assignment:
                result = result + as_form(assignment[v]) * c
            else:
                result = result + LinearForm(Fraction(0), ((v, c),))
        return result

    def __str__(self) -> str:
        parts: List[str] = []
        for v, c in self.coeffs:
            if c == 1:
                parts.append(v.name)
            elif c == -1:
                parts.append(f"-{v.name}")
            else:
                parts.append(f"{_render_rational(c)}{v.name}")
        if self.constant != 0 or not parts:
            parts.append(_render_rational(self.constant))
        text = parts[0]
        for part in parts[1:]:
            text += part if part.startswith("-") else f"+{part}"
        return text


Substitution = Union[LinearForm, Variable, int, Fraction]


def as_form(value) -> LinearForm:
    if isinstance(value, LinearForm):
        return value
    if isinstance(value, Variable):
        return value.form
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return LinearForm.const(value)
    raise NonAffineResultError(f"cannot use {type(value).__name__} as an affine form")


@dataclass(frozen=True)
class FactoredExpr:
    """
    scalar * prod(form ** exponent) in canonical form.

    Forms are monic and pairwise distinct, exponents nonzero, and the factor
    tuple is sorted, so equality of instances is exact equality of rational
    functions.
    """
    scalar: Fraction = Fraction(1)
    factors: Tuple[Tuple[LinearForm, int], ...] = field(default=())

    @classmethod
    def build(cls, scalar: Rational = 1, factors: Iterable[Tuple[LinearForm, int]] = ()) -> "FactoredExpr":
        """
        Canonicalize an arbitrary scalar and factor list.

        Raises:
            ZeroFactorError: If a factor is identically zero or the scalar is 0
        """
        value = _rational(scalar)
        if value == 0:
            raise ZeroFactorError("zero scalar is not a factored expression")
        counts: Counter = Counter()
        for form, exponent in factors:
            if exponent == 0:
                continue
            if form.is_zero:
                kind = "pole" if exponent < 0 else "zero"
                raise ZeroFactorError(f"factor vanishes identically ({kind})", exponent)
            if form.is_constant:
                value *= form.constant ** exponent
                continue
            lead, monic = form.monic()
            value *= lead ** exponent
            counts[monic] += exponent
        ordered = sorted(((f, e) for f, e in counts.items() if e != 0), key=lambda item: item[0].sort_key())
        return cls(value, tuple(ordered))

    @classmethod
    def one(cls) -> "FactoredExpr":
        return cls()

    @classmethod
    def const(cls, value: Rational) -> "FactoredExpr":
        return cls.build(value)

    @classmethod
    def of(cls, form: Substitution, exponent: int = 1) -> "FactoredExpr":
        return cls.build(1, [(as_form(form), exponent)])

    @classmethod
    def product(cls, items: Iterable["FactoredExpr"]) -> "FactoredExpr":
        scalar = Fraction(1)
        factors: List[Tuple[LinearForm, int]] = []
        for item in items:
            scalar *= item.scalar
            factors.extend(item.factors)
        return cls.build(scalar, factors)

    def __mul__(self, other) -> "FactoredExpr":
        if not isinstance(other, FactoredExpr):
            other = FactoredExpr.const(_rational(other))
        return FactoredExpr.build(self.scalar * other.scalar, self.factors + other.factors)

    __rmul__ = __mul__

    def inverse(self) -> "FactoredExpr":
        return FactoredExpr(1 / self.scalar, tuple((f, -e) for f, e in self.factors))

    def __truediv__(self, other) -> "FactoredExpr":
        if not isinstance(other, FactoredExpr):
            other = FactoredExpr.const(_rational(other))
        return self * other.inverse()

    def __rtruediv__(self, other) -> "FactoredExpr":
        return FactoredExpr.const(_rational(other)) * self.inverse()

    def __pow__(self, exponent: int) -> "FactoredExpr":
        if exponent == 0:
            return FactoredExpr.one()
        return FactoredExpr(self.scalar ** exponent, tuple((f, e * exponent) for f, e in self.factors))

    def __iter__(self) -> Iterator[Tuple[LinearForm, int]]:
        return iter(self.factors)

    @property
    def is_polynomial(self) -> bool:
        return all(e > 0 for _, e in self.factors)

    @property
    def is_constant(self) -> bool:
        return not self.factors

    def variables(self) -> Tuple[Variable, ...]:
        found = set()
        for form, _ in self.factors:
            found.update(form.variables())
        return tuple(sorted(found))

    def substitute(self, assignment: Mapping[Variable, Substitution]) -> "FactoredExpr":
        for target in assignment.values():
            if not isinstance(target, (LinearForm, Variable, int, Fraction)):
                raise NonAffineResultError(f"substitution target {target!r} is not affine")
        return FactoredExpr.build(self.scalar, [(form.substitute(assignment), e) for form, e in self.factors])

    def bar(self) -> "FactoredExpr":
        return self.substitute({ALPHA: -ALPHA.form})

    def alpha_degree(self) -> int:
        return sum(e for form, e in self.factors if form.contains(ALPHA))

    def __str__(self) -> str:
        return render_expr(self)


# --- grammar -----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z]\d*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


def _byte_offset(text: str, char_index: int) -> int:
    return len(text[:char_index].encode("utf-8"))


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExpressionSyntaxError(f"unexpected character {text[start]!r}", _byte_offset(text, start))
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(_Token(kind, match.group(kind), _byte_offset(text, start)))
        pos = match.end()
    tokens.append(_Token("end", "", _byte_offset(text, len(text))))
    return tokens


def _variable_from_name(name: str, offset: int) -> Variable:
    kind = _KIND_BY_PREFIX.get(name[0])
    digits = name[1:]
    if kind is None:
        raise UnknownVariableError(f"unknown variable {name!r}", offset)
    if kind in _UNINDEXED:
        if digits:
            raise UnknownVariableError(f"unknown variable {name!r}", offset)
        return Variable(kind)
    if not digits or int(digits) < 1:
        raise UnknownVariableError(f"variable {name!r} needs a positive index", offset)
    return Variable(kind, int(digits))


class _Parser:
    """Recursive descent over the token list of one expression."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def peek(self, ahead: int = 1) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        token = self.current
        self.pos += 1
        return token

    def accept(self, op: str) -> bool:
        if self.current.kind == "op" and self.current.text == op:
            self.pos += 1
            return True
        return False

    def expect(self, op: str) -> None:
        if not self.accept(op):
            found = self.current.text or "end of input"
            raise ExpressionSyntaxError(f"expected {op!r}, found {found!r}", self.current.offset)

    def fail(self, message: str) -> None:
        raise ExpressionSyntaxError(message, self.current.offset)

    def parse(self) -> Tuple[Fraction, List[Tuple[LinearForm, int]]]:
        scalar, factors = self.term()
        while self.current.kind == "op" and self.current.text in "*/":
            divide = self.advance().text == "/"
            offset = self.current.offset
            s, fs = self.term()
            if divide:
                if s == 0:
                    raise ZeroDenominatorError("division by zero", offset)
                s = 1 / s
                fs = [(f, -e) for f, e in fs]
            scalar *= s
            factors.extend(fs)
        if self.current.kind != "end":
            self.fail(f"unexpected {self.current.text!r}")
        return scalar, factors

    def term(self) -> Tuple[Fraction, List[Tuple[LinearForm, int]]]:
        negative = self.accept("-")
        scalar = Fraction(1)
        has_rational = self.current.kind == "int"
        if has_rational:
            scalar = self.rational()
        factors: List[Tuple[LinearForm, int]] = []
        if self.current.kind == "op" and self.current.text == "(":
            self.advance()
            form = self.linform()
            self.expect(")")
            exponent = 1
            if self.accept("^"):
                exponent = self.integer(signed=True)
            factors.append((form, exponent))
        elif not has_rational:
            self.fail("expected a rational or '('")
        return (-scalar if negative else scalar), factors

    def rational(self) -> Fraction:
        numerator = int(self.advance().text)
        if self.current.kind == "op" and self.current.text == "/" and self.peek().kind == "int":
            self.advance()
            token = self.advance()
            if int(token.text) == 0:
                raise ZeroDenominatorError("zero denominator in rational literal", token.offset)
            return Fraction(numerator, int(token.text))
        return Fraction(numerator)

    def integer(self, signed: bool = False) -> int:
        negative = signed and self.accept("-")
        if self.current.kind != "int":
            self.fail("expected an integer exponent")
        value = int(self.advance().text)
        return -value if negative else value

    def linform(self) -> LinearForm:
        total = LinearForm()
        sign = -1 if self.accept("-") else 1
        if sign == 1:
            self.accept("+")
        total = total + self.monomial() * sign
        while self.current.kind == "op" and self.current.text in "+-":
            sign = -1 if self.advance().text == "-" else 1
            total = total + self.monomial() * sign
        return total

    def monomial(self) -> LinearForm:
        coeff: Optional[Fraction] = None
        if self.current.kind == "int":
            coeff = self.rational()
        if self.current.kind == "name":
            token = self.advance()
            var = _variable_from_name(token.text, token.offset)
            return var.form * (coeff if coeff is not None else 1)
        if coeff is None:
            self.fail("expected a monomial")
        return LinearForm.const(coeff)


def parse_expr(text: str) -> FactoredExpr:
    """
    Parse an expression in the factored grammar.

    Args:
        text: e.g. "3/2*(x+u1-u2)^-1*(x-2a)"

    Returns:
        FactoredExpr: Canonical factored expression

    Raises:
        ExpressionSyntaxError: Malformed input (with byte offset)
        UnknownVariableError: Variable outside the alphabet
        ZeroDenominatorError: Rational literal with zero denominator
        ZeroFactorError: A factor or the whole expression is identically zero
    """
    scalar, factors = _Parser(text).parse()
    return FactoredExpr.build(scalar, factors)


def render_expr(e: FactoredExpr) -> str:
    parts = [f"({form})" if exp == 1 else f"({form})^{exp}" for form, exp in e.factors]
    if not parts:
        return _render_rational(e.scalar)
    body = "*".join(parts)
    return body if e.scalar == 1 else f"{_render_rational(e.scalar)}*{body}"


def bar_involution(e):
    """alpha -> -alpha on a FactoredExpr or LaurentInAlpha."""
    return e.bar()


def substitute(e: FactoredExpr, assignment: Mapping[Variable, Substitution]) -> FactoredExpr:
    return e.substitute(assignment)


def alpha_degree(e: FactoredExpr) -> int:
    return e.alpha_degree()


def equals_exact(e1: FactoredExpr, e2: FactoredExpr) -> bool:
    return e1.scalar == e2.scalar and e1.factors == e2.factors
