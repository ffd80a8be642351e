"""
GKM Combinatorics of the Complete Flag Manifold

Fixed points of the torus action on Fl(n) are the permutations of {1..n};
two fixed points are joined by a balloon (invariant 2-sphere) when they
differ by a transposition. This module enumerates both, computes degree
pairings of line bundles with balloons, and integrates GKM classes by
fixed-point localization.
"""

import logging
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Callable, Dict, List, Mapping, Optional, Tuple, Union

from sympy.polys.fields import FracElement
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement

from hypergeom import config
from hypergeom.exceptions import GkmConditionError, HypergeomError
from hypergeom.laurent import Alphabet, alphabet_for
from hypergeom.symbolic import FactoredExpr, LinearForm, Variable, u, y

logger = logging.getLogger(__name__)


def check_n(n: int) -> None:
    """
    Raises:
        ValueError: If n lies outside MIN_N..MAX_N
    """
    if not isinstance(n, int) or n < config.MIN_N or n > config.MAX_N:
        raise ValueError(f"n must lie in {config.MIN_N}..{config.MAX_N}, got {n}")


@dataclass(frozen=True, order=True)
class FixedPoint:
    """A permutation in one-line notation: perm[a-1] = omega(a)."""
    perm: Tuple[int, ...]

    def __post_init__(self):
        if len(self.perm) < 2 or sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise ValueError(f"not a permutation of 1..n with n >= 2: {self.perm}")

    @classmethod
    def parse(cls, text: str) -> "FixedPoint":
        if not text.isdigit():
            raise ValueError(f"fixed point must be one-line digits, got {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def identity(cls, n: int) -> "FixedPoint":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __call__(self, a: int) -> int:
        return self.perm[a - 1]

    def swap(self, i: int, j: int) -> "FixedPoint":
        """omega composed with the transposition (i j)."""
        perm = list(self.perm)
        perm[i - 1], perm[j - 1] = perm[j - 1], perm[i - 1]
        return FixedPoint(tuple(perm))

    def sign(self) -> int:
        inversions = sum(1 for a, b in combinations(self.perm, 2) if a > b)
        return -1 if inversions % 2 else 1

    def partial_sum(self, a: int) -> LinearForm:
        """Restriction of the Schubert divisor class: u_omega(1) + ... + u_omega(a)."""
        return sum((u(self(c)).form for c in range(1, a + 1)), LinearForm())

    def __str__(self) -> str:
        return "".join(str(v) for v in self.perm)


@dataclass(frozen=True)
class Balloon:
    """
    Directed balloon from p = omega to q = omega.(i j).

    tangent_weight is the weight u_omega(i) - u_omega(j) of T_p on the balloon.
    """
    p: FixedPoint
    q: FixedPoint
    transposition: Tuple[int, int]
    tangent_weight: LinearForm

    @classmethod
    def from_point(cls, p: FixedPoint, i: int, j: int) -> "Balloon":
        if not 1 <= i < j <= p.n:
            raise ValueError(f"invalid transposition ({i},{j}) for n={p.n}")
        weight = u(p(i)) - u(p(j))
        return cls(p, p.swap(i, j), (i, j), weight)

    @classmethod
    def parse(cls, text: str) -> "Balloon":
        """Parse "231x(1,3)"."""
        try:
            point, rest = text.split("x", 1)
            i, j = (int(part) for part in rest.strip("()").split(","))
        except ValueError:
            raise ValueError(f"balloon must look like 231x(1,3), got {text!r}") from None
        return cls.from_point(FixedPoint.parse(point), i, j)

    def reversed(self) -> "Balloon":
        i, j = self.transposition
        return Balloon.from_point(self.q, i, j)

    def __str__(self) -> str:
        i, j = self.transposition
        return f"{self.p}x({i},{j})"


@dataclass(frozen=True, order=True)
class MultiDegree:
    """
    (d_1, ..., d_{n-1}); the dataclass order is lexicographic, while the
    partial order r <= d of the degree lattice is `precedes`.
    """
    entries: Tuple[int, ...]

    @classmethod
    def of(cls, *entries: int) -> "MultiDegree":
        return cls(tuple(entries))

    @classmethod
    def zero(cls, length: int) -> "MultiDegree":
        return cls((0,) * length)

    @classmethod
    def parse(cls, text: str) -> "MultiDegree":
        try:
            return cls(tuple(int(part) for part in text.split(",")))
        except ValueError:
            raise ValueError(f"multidegree must be a comma list of integers, got {text!r}") from None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def at(self, a: int) -> int:
        """d_a with the convention d_0 = 0."""
        return 0 if a == 0 else self.entries[a - 1]

    @property
    def is_effective(self) -> bool:
        return all(d >= 0 for d in self.entries)

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    def precedes(self, other: "MultiDegree") -> bool:
        return all(b - a >= 0 for a, b in zip(self.entries, other.entries))

    def __add__(self, other: "MultiDegree") -> "MultiDegree":
        return MultiDegree(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "MultiDegree") -> "MultiDegree":
        return MultiDegree(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, k: int) -> "MultiDegree":
        return MultiDegree(tuple(k * a for a in self.entries))

    def __str__(self) -> str:
        return ",".join(str(d) for d in self.entries)


@dataclass(frozen=True)
class GkmClass:
    """
    An equivariant class in the GKM model: one restriction per fixed point.

    polynomial marks classes that must satisfy the GKM edge condition.
    """
    n: int
    restrictions: Mapping[FixedPoint, FactoredExpr]
    polynomial: bool = False

    def __post_init__(self):
        missing = [p for p in fixed_points(self.n) if p not in self.restrictions]
        if missing:
            raise HypergeomError(f"class is undefined at {len(missing)} fixed points, e.g. {missing[0]}")
        if self.polynomial:
            ok, violations = gkm_check(self)
            if not ok:
                raise GkmConditionError(f"class fails the GKM condition on {violations[0]}", violations)

    @classmethod
    def from_function(cls, n: int, fn: Callable[[FixedPoint], FactoredExpr], polynomial: bool = False) -> "GkmClass":
        return cls(n, {p: fn(p) for p in fixed_points(n)}, polynomial)

    def __getitem__(self, p: FixedPoint) -> FactoredExpr:
        return self.restrictions[p]

    def __mul__(self, other: "GkmClass") -> "GkmClass":
        return GkmClass(self.n, {p: e * other[p] for p, e in self.restrictions.items()},
                        self.polynomial and other.polynomial)

    def map(self, fn: Callable[[FactoredExpr], FactoredExpr]) -> "GkmClass":
        return GkmClass(self.n, {p: fn(e) for p, e in self.restrictions.items()}, self.polynomial)

    def bar(self) -> "GkmClass":
        return self.map(lambda e: e.bar())

    def inverse(self) -> "GkmClass":
        return GkmClass(self.n, {p: e.inverse() for p, e in self.restrictions.items()})


def fixed_points(n: int) -> List[FixedPoint]:
    """All n! permutations in lexicographic order."""
    check_n(n)
    return [FixedPoint(perm) for perm in permutations(range(1, n + 1))]


def _check_gkm_weights(p: FixedPoint) -> None:
    seen = set()
    for i, j in combinations(range(1, p.n + 1), 2):
        _, monic = (u(p(i)) - u(p(j))).monic()
        if monic in seen:
            raise HypergeomError(f"weights at {p} are not pairwise independent")
        seen.add(monic)


def balloons(n: int) -> List[Balloon]:
    """n! * n(n-1)/2 directed balloons ordered by (p, (i, j))."""
    result = []
    for p in fixed_points(n):
        _check_gkm_weights(p)
        for i, j in combinations(range(1, n + 1), 2):
            result.append(Balloon.from_point(p, i, j))
    logger.debug(f"Enumerated {len(result)} directed balloons for n={n}")
    return result


def y_assignment(p: FixedPoint) -> Dict[Variable, LinearForm]:
    return {y(a): u(p(a)).form for a in range(1, p.n + 1)}


def restrict_class(poly: PolyElement, p: FixedPoint, alphabet: Optional[Alphabet] = None) -> PolyElement:
    """
    Restrict a polynomial in (x, alpha, u, y) to a fixed point: y_a -> u_omega(a).
    """
    alphabet = alphabet or alphabet_for(p.n)
    replacements = [(alphabet.gen(y(a)), alphabet.gen(u(p(a)))) for a in range(1, p.n + 1)]
    return poly.compose(replacements)


def restrict_expr(e: FactoredExpr, p: FixedPoint) -> FactoredExpr:
    """Factored counterpart of restrict_class."""
    return e.substitute(y_assignment(p))


def degree_pairing(a: int, balloon: Balloon) -> int:
    """<y_a, [pq]> = [a = i] - [a = j] for the balloon transposition (i j)."""
    n = balloon.p.n
    if not 1 <= a <= n:
        raise ValueError(f"index {a} outside 1..{n}")
    i, j = balloon.transposition
    return int(a == i) - int(a == j)


SummandIndex = Union[int, str]


def line_degree(pair: Tuple[int, SummandIndex], balloon: Balloon) -> int:
    """
    Degree of L*_a (x) L_b, or of L*_a (x) S_i, on a balloon.

    Args:
        pair: (a, b) for a line-line summand, (a, "S_i") for a line-trivial one
        balloon: Balloon to pair with

    Returns:
        int: degree_pairing(a) - degree_pairing(b), or degree_pairing(a)
    """
    a, b = pair
    if isinstance(b, str):
        return degree_pairing(a, balloon)
    return degree_pairing(a, balloon) - degree_pairing(b, balloon)


def multidegree_of_balloon(balloon: Balloon, delta: int) -> MultiDegree:
    """d_i = delta * <S_i, [pq]> with S_i = y_1 + ... + y_i."""
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    n = balloon.p.n
    entries = []
    running = 0
    for i in range(1, n):
        running += degree_pairing(i, balloon)
        entries.append(delta * running)
    return MultiDegree(tuple(entries))


def d_ab(d: MultiDegree, a: int, b: int) -> int:
    return d.at(a) - d.at(a - 1) - d.at(b) + d.at(b - 1)


def c1_pairing(d: MultiDegree) -> int:
    return 2 * sum(d.entries)


def degree_interval(d: MultiDegree) -> List[MultiDegree]:
    """All r with 0 <= r <= d componentwise, lexicographic."""
    if not d.is_effective:
        raise ValueError(f"degree {d} is not effective")
    return [MultiDegree(r) for r in product(*(range(di + 1) for di in d.entries))]


def vandermonde(n: int) -> FactoredExpr:
    """prod_{i<j} (u_i - u_j)."""
    return FactoredExpr.product(FactoredExpr.of(u(i) - u(j)) for i, j in combinations(range(1, n + 1), 2))


def tangent_euler(p: FixedPoint) -> FactoredExpr:
    """e_T(T_p Fl(n)) = prod_{i<j} (u_omega(i) - u_omega(j))."""
    return FactoredExpr.product(
        FactoredExpr.of(u(p(i)) - u(p(j))) for i, j in combinations(range(1, p.n + 1), 2)
    )


def tangent_euler_class(n: int) -> GkmClass:
    return GkmClass.from_function(n, tangent_euler, polynomial=True)


def localization_sum(n: int, values: Mapping[FixedPoint, FracElement], alphabet: Optional[Alphabet] = None) -> FracElement:
    """
    sum_omega values[omega] / e_T|_omega for field-valued restrictions.

    Uses e_T|_omega = sgn(omega) * Vandermonde, so a single division remains.
    """
    alphabet = alphabet or alphabet_for(n)
    total = alphabet.field.zero
    for p in fixed_points(n):
        total += values[p] * p.sign()
    return total / alphabet.to_field(vandermonde(n))


def integrate_localization(c: GkmClass, n: int, alphabet: Optional[Alphabet] = None) -> FracElement:
    """
    Atiyah-Bott integral sum_omega c|_omega / e_T|_omega.

    Polynomial-type classes are summed in the polynomial ring and divided
    exactly by the Vandermonde; anything else goes through the fraction field.

    Returns:
        FracElement: The integral in lowest terms
    """
    alphabet = alphabet or alphabet_for(n)
    points = fixed_points(n)
    if all(c[p].is_polynomial for p in points):
        numerator = alphabet.ring.zero
        for p in points:
            numerator += alphabet.to_poly(c[p]) * p.sign()
        delta = alphabet.to_poly(vandermonde(n))
        try:
            return alphabet.lift(numerator.exquo(delta))
        except ExactQuotientFailed:
            logger.debug("Localization numerator not divisible by the Vandermonde; using the fraction field")
            return alphabet.field.new(numerator, delta)
    return localization_sum(n, {p: alphabet.to_field(c[p]) for p in points}, alphabet)


def gkm_check(c: GkmClass, alphabet: Optional[Alphabet] = None) -> Tuple[bool, List[Balloon]]:
    """
    GKM edge condition: c|_p - c|_q divisible by the tangent weight of every balloon.

    Raises:
        ValueError: If a restriction is not polynomial
    """
    alphabet = alphabet or alphabet_for(c.n)
    expanded = {p: alphabet.to_poly(e) for p, e in c.restrictions.items()}
    violations = []
    for balloon in balloons(c.n):
        difference = expanded[balloon.p] - expanded[balloon.q]
        if difference.rem(alphabet.poly(balloon.tangent_weight)):
            violations.append(balloon)
    if violations:
        logger.debug(f"GKM condition fails on {len(violations)} balloons")
    return not violations, violations


# --- displayed case tables -----------------------------------------------------


def displayed_pairing(a: int, i: int, j: int) -> int:
    """
    The pairing as a case list, read literally; first matching case wins:
    1 if i >= a, 0 if a is neither i nor j, -1 if j = a.
    """
    if i >= a:
        return 1
    if a not in (i, j):
        return 0
    return -1


def pairing_table_report(n: int) -> List[dict]:
    """Every (a, (i, j)) where the literal case list disagrees with degree_pairing."""
    check_n(n)
    conflicts = []
    p = FixedPoint.identity(n)
    for i, j in combinations(range(1, n + 1), 2):
        balloon = Balloon.from_point(p, i, j)
        for a in range(1, n + 1):
            literal = displayed_pairing(a, i, j)
            formula = degree_pairing(a, balloon)
            if literal != formula:
                conflicts.append({"a": a, "transposition": [i, j], "displayed": literal, "formula": formula})
    return conflicts


def displayed_line_degree(a: int, b: int, s: int, t: int) -> int:
    """
    The two line-degree tables for L*_a (x) L_b on the balloon of (s t).

    Raises:
        ValueError: If a == b (no table covers it)
    """
    if a < b:
        if (s, t) == (a, b):
            return 2
        if (s == a and t != b) or (t == b and s != a):
            return 1
        if t == a or s == b:
            return -1
        return 0
    if b < a:
        if (s, t) == (b, a):
            return -2
        if (s == b and t != a) or (t == a and s != b):
            return -1
        if t == b or s == a:
            return 1
        return 0
    raise ValueError("tables cover a != b only")


def line_degree_table_report(n: int) -> List[dict]:
    """Every (a, b, s, t) where the tables and line_degree disagree."""
    check_n(n)
    mismatches = []
    p = FixedPoint.identity(n)
    for s, t in combinations(range(1, n + 1), 2):
        balloon = Balloon.from_point(p, s, t)
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                if a == b:
                    continue
                table = displayed_line_degree(a, b, s, t)
                formula = line_degree((a, b), balloon)
                if table != formula:
                    mismatches.append({"a": a, "b": b, "transposition": [s, t], "table": table, "formula": formula})
    return mismatches


def points_by_name(n: int) -> Dict[str, FixedPoint]:
    return {str(p): p for p in fixed_points(n)}
