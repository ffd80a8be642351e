"""
Hypergeometric Series, Euler-Series Condition and Mirror Transform

I-data coefficients are read from JSON, multiplied pointwise with the
restricted Euler data to form the B-series, checked for the Euler-series
integrality condition by localization, and normalized order by order by the
mirror transform

    sum_d A_d q^d e^{d.g(q)} = e^{(f + S.g)/alpha} sum_d B_d q^d

at every fixed point, where S restricts to (s_1(p), ..., s_{n-1}(p)) and
f = alpha*f0 + f1.
"""

import json
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from pathlib import Path
from typing import IO, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from pydantic import ValidationError
from sympy.polys.fields import FracElement
from sympy.polys.matrices import DomainMatrix

from hypergeom import config
from hypergeom.euler_data import build_chern, build_Q, j0_tau
from hypergeom.exceptions import (
    DegreeBoundError,
    ExpressionSyntaxError,
    GkmConditionError,
    IDataError,
    MissingDegreeError,
    MissingFixedPointError,
    NonNormalizableError,
    ZeroFactorError,
)
from hypergeom.flag_geometry import (
    FixedPoint,
    GkmClass,
    MultiDegree,
    c1_pairing,
    degree_interval,
    fixed_points,
    localization_sum,
    points_by_name,
    restrict_expr,
)
from hypergeom.laurent import Alphabet, LaurentInAlpha, alphabet_for, bar_field, expand_alpha, same
from hypergeom.models import (
    CheckStatus,
    EulerSeriesCase,
    EulerSeriesReport,
    IDataFileModel,
    MirrorCase,
    MirrorReport,
)
from hypergeom.symbolic import ALPHA, FactoredExpr, VarKind, parse_expr, u
from hypergeom.workers import run_parallel

logger = logging.getLogger(__name__)

Restriction = Union[FactoredExpr, FracElement]
ExpandedSeries = Dict[MultiDegree, Dict[FixedPoint, LaurentInAlpha]]


@dataclass(frozen=True)
class SeriesCoefficient:
    """Coefficient of q^d: a GKM class, plus where it came from."""
    d: MultiDegree
    value: GkmClass
    provenance: Optional[str] = None


Series = Dict[MultiDegree, SeriesCoefficient]


# --- ingestion ---------------------------------------------------------------


def _parse_restriction(text: str, d: MultiDegree, point: str) -> FactoredExpr:
    try:
        e = parse_expr(text)
    except (ExpressionSyntaxError, ZeroFactorError) as err:
        raise IDataError(f"entry d={d}, fixed point {point}: {err}") from err
    stray = [v for v in e.variables() if v.kind not in (VarKind.X, VarKind.ALPHA, VarKind.U)]
    if stray:
        raise IDataError(f"entry d={d}, fixed point {point}: unexpected variables {[v.name for v in stray]}")
    return e


def ingest_I(source: Union[str, Path, IO[str]]) -> Series:
    """
    Read and validate an I-data file.

    Args:
        source: Path or open text stream with the JSON document

    Returns:
        dict: MultiDegree -> SeriesCoefficient, sorted by degree

    Raises:
        IDataError: Malformed document, bad entry or failed GKM condition
        MissingFixedPointError: An entry misses a fixed point
        DegreeBoundError: deg_alpha I_d > min(-2, -<c_1(X), d>) for some d != 0
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    try:
        document = IDataFileModel.model_validate_json(text)
    except ValidationError as e:
        raise IDataError(f"invalid I-data document: {e}") from e

    n = document.n
    points = points_by_name(n)
    series: Series = {}
    for entry in document.entries:
        d = MultiDegree(tuple(entry.d))
        if len(d) != n - 1 or not d.is_effective:
            raise IDataError(f"degree {d} is not an effective degree for n={n}")
        if d in series:
            raise IDataError(f"degree {d} listed twice")
        unknown = sorted(set(entry.restrictions) - set(points))
        if unknown:
            raise IDataError(f"entry d={d}: unknown fixed points {unknown}")
        missing = [name for name in points if name not in entry.restrictions]
        if missing:
            raise MissingFixedPointError(f"entry d={d} misses fixed points {missing}")

        restrictions = {
            points[name]: _parse_restriction(entry.restrictions[name], d, name) for name in points
        }
        if d.is_zero:
            if any(e != FactoredExpr.one() for e in restrictions.values()):
                raise IDataError("the degree-0 coefficient must be the constant class 1")
        else:
            bound = min(-2, -c1_pairing(d))
            for p, e in restrictions.items():
                if e.alpha_degree() > bound:
                    raise DegreeBoundError(
                        f"entry d={d}, fixed point {p}: deg_alpha = {e.alpha_degree()} violates "
                        f"deg_alpha I_d <= min(-2, -<c_1(X),d>) = {bound}"
                    )
        try:
            value = GkmClass(n, restrictions, entry.polynomial)
        except GkmConditionError as e:
            raise IDataError(f"entry d={d} fails the GKM condition on {e.violations[0]}") from e
        except ValueError as e:
            raise IDataError(f"entry d={d} is declared polynomial: {e}") from e
        series[d] = SeriesCoefficient(d, value, entry.provenance)

    logger.info(f"Ingested {len(series)} I-data coefficients for n={n}")
    return dict(sorted(series.items()))


FL2_PROVENANCE = "closed form for Fl(2) = P^1: prod_{m=1}^{d} 1/((-m a)(u_w1 - u_w2 - m a))"


def fl2_idata(max_degree: int) -> Series:
    """
    I-data of Fl(2) for 0 <= d <= max_degree.

    At omega the tangent weight is w = u_omega(1) - u_omega(2) and
    I_d = prod_{m=1}^{d} 1 / ((-m alpha) (w - m alpha)).
    """
    series: Series = {}
    for degree in range(max_degree + 1):
        d = MultiDegree.of(degree)

        def restriction(p: FixedPoint) -> FactoredExpr:
            w = u(p(1)) - u(p(2))
            return FactoredExpr.product(
                FactoredExpr.of(ALPHA * (-m), -1) * FactoredExpr.of(w - ALPHA * m, -1)
                for m in range(1, degree + 1)
            )

        series[d] = SeriesCoefficient(d, GkmClass.from_function(2, restriction), FL2_PROVENANCE)
    return series


def write_idata(path: Union[str, Path], n: int, series: Series) -> None:
    """Serialize factored coefficients in the I-data format."""
    entries = []
    for d, coefficient in sorted(series.items()):
        entries.append({
            "d": list(d),
            "restrictions": {str(p): str(e) for p, e in sorted(coefficient.value.restrictions.items())},
            "provenance": coefficient.provenance or "generated",
            "polynomial": coefficient.value.polynomial,
        })
    Path(path).write_text(json.dumps({"n": n, "entries": entries}, indent=2) + "\n", encoding="utf-8")


# --- B-series ----------------------------------------------------------------


def omega_class(n: int) -> GkmClass:
    omega = build_chern(n).omega
    return GkmClass.from_function(n, lambda p: restrict_expr(omega, p), polynomial=True)


def assemble_B(n: int, idata: Mapping[MultiDegree, SeriesCoefficient], cutoff: MultiDegree) -> Series:
    """
    B_d|_p = (tau* j_0* Q_d)|_p * I_d|_p for every d <= cutoff.

    Raises:
        MissingDegreeError: If the I-data does not cover some d <= cutoff
    """
    series: Series = {}
    for d in degree_interval(cutoff):
        if d not in idata:
            raise MissingDegreeError(f"I-data has no coefficient for d={d}")
        q = j0_tau(build_Q(n, d).q, n - 1)
        i_d = idata[d].value
        value = GkmClass.from_function(n, lambda p: restrict_expr(q, p) * i_d[p])
        series[d] = SeriesCoefficient(d, value, idata[d].provenance)
    logger.debug(f"Assembled {len(series)} B-coefficients for n={n}, cutoff {cutoff}")
    return series


def perturb(coefficient: SeriesCoefficient, p: FixedPoint, amount, alphabet: Alphabet) -> SeriesCoefficient:
    """Add a constant to one restriction; the result leaves the factored world."""
    restrictions: Dict[FixedPoint, Restriction] = dict(coefficient.value.restrictions)
    restrictions[p] = _as_field(restrictions[p], alphabet) + alphabet.scalar(amount)
    return SeriesCoefficient(coefficient.d, GkmClass(coefficient.value.n, restrictions), "perturbed")


# --- Euler-series condition ----------------------------------------------------


def _as_field(value: Restriction, alphabet: Alphabet) -> FracElement:
    if isinstance(value, FactoredExpr):
        return alphabet.to_field(value)
    return value


def _bar(value: Restriction, alphabet: Alphabet) -> FracElement:
    if isinstance(value, FactoredExpr):
        return alphabet.to_field(value.bar())
    return bar_field(value, alphabet)


def zeta_monomials(length: int, order: int) -> List[Tuple[int, ...]]:
    """Exponent vectors of total degree <= order, by total degree then lexicographic."""
    monomials = [m for m in product(range(order + 1), repeat=length) if sum(m) <= order]
    return sorted(monomials, key=lambda m: (sum(m), m))


def _in_ground_ring(value: FracElement, alphabet: Alphabet, n: int) -> bool:
    denom = value.denom
    return not any(alphabet.involves(denom, var) for var in [ALPHA] + [u(i) for i in range(1, n + 1)])


def _render_field(value) -> str:
    return str(value.as_expr())


def euler_series_cases(
    B: Mapping[MultiDegree, SeriesCoefficient],
    omega: GkmClass,
    d: MultiDegree,
    zeta_order: int,
) -> List[EulerSeriesCase]:
    """
    sum_{r <= d} int Omega^-1 bar(B_r) B_{d-r} e^{(S + r alpha).zeta} coefficient by coefficient.

    A case passes when the localization sum has a denominator free of alpha
    and of every u_i, i.e. lies in Q(x)[u][alpha].

    Raises:
        MissingDegreeError: If B misses some r <= d
    """
    n = omega.n
    alphabet = alphabet_for(n)
    points = fixed_points(n)
    base: Dict[MultiDegree, Dict[FixedPoint, FracElement]] = {}
    for r in degree_interval(d):
        for needed in (r, d - r):
            if needed not in B:
                raise MissingDegreeError(f"B-series has no coefficient for d={needed}")
        base[r] = {
            p: _bar(B[r].value[p], alphabet) * _as_field(B[d - r].value[p], alphabet)
            / alphabet.to_field(omega[p])
            for p in points
        }

    cases = []
    for monomial in zeta_monomials(n - 1, zeta_order):
        weight = alphabet.scalar(Fraction(1, _factorial_product(monomial)))
        values = {p: alphabet.field.zero for p in points}
        for r, per_point in base.items():
            for p in points:
                factor = FactoredExpr.product(
                    FactoredExpr.of(p.partial_sum(a) + ALPHA * r.at(a), m)
                    for a, m in enumerate(monomial, start=1) if m
                )
                values[p] += per_point[p] * alphabet.to_field(factor)
        total = localization_sum(n, values, alphabet) * weight
        if _in_ground_ring(total, alphabet, n):
            cases.append(EulerSeriesCase(d=list(d), monomial=list(monomial), status=CheckStatus.PASS))
        else:
            cases.append(EulerSeriesCase(
                d=list(d), monomial=list(monomial), status=CheckStatus.FAIL,
                denominator=_render_field(alphabet.lift(total.denom)),
            ))
    return cases


def _factorial_product(monomial: Sequence[int]) -> int:
    result = 1
    for m in monomial:
        result *= factorial(m)
    return result


def _euler_series_task(args) -> List[EulerSeriesCase]:
    B, omega, d, zeta_order = args
    return euler_series_cases(B, omega, d, zeta_order)


def euler_series_check(
    B: Mapping[MultiDegree, SeriesCoefficient],
    omega: GkmClass,
    d: MultiDegree,
    zeta_order: int,
    jobs: int = 1,
) -> EulerSeriesReport:
    """
    Euler-series condition for every degree r <= d.

    Returns:
        EulerSeriesReport: Cases ordered by (degree, zeta-monomial)
    """
    started = time.perf_counter()
    degrees = degree_interval(d)
    tasks = []
    for r in degrees:
        needed = {s: B[s] for s in degree_interval(r) if s in B}
        tasks.append((needed, omega, r, zeta_order))
    cases = [case for chunk in run_parallel(_euler_series_task, tasks, jobs) for case in chunk]
    failed = sum(1 for case in cases if case.status != CheckStatus.PASS)
    if failed:
        logger.warning(f"Euler-series condition fails in {failed} of {len(cases)} cases")
    return EulerSeriesReport(n=omega.n, zeta_order=zeta_order, cases=cases,
                             elapsed_ms=(time.perf_counter() - started) * 1000)


# --- q-series helpers ---------------------------------------------------------


def _series_mul(a: Mapping, b: Mapping, degrees: Sequence[MultiDegree], zero) -> Dict:
    result = {}
    for d in degrees:
        total = zero
        for r in degree_interval(d):
            left = a.get(r)
            right = b.get(d - r)
            if left is not None and right is not None:
                total = total + left * right
        result[d] = total
    return result


def _series_exp(x: Mapping, degrees: Sequence[MultiDegree], one, zero, alphabet: Alphabet) -> Dict:
    """exp of a q-series without constant term, truncated to `degrees`."""
    origin = degrees[0]
    result = {d: zero for d in degrees}
    result[origin] = one
    power = {origin: one}
    max_order = sum(degrees[-1].entries)
    for m in range(1, max_order + 1):
        power = _series_mul(power, x, degrees, zero)
        weight = alphabet.scalar(Fraction(1, factorial(m)))
        for d in degrees:
            result[d] = result[d] + power[d] * weight
    return result


# --- mirror transform -----------------------------------------------------------


MIRROR_SIGN_CONVENTION = (
    "A(t+g) = e^{f/alpha} B(t) with f = alpha*f0 + f1: f0_d = -c when B_d/Omega = c + O(1/alpha) "
    "at degree d, so f0 carries the opposite sign of the excess it removes"
)


@dataclass
class MirrorTransformData:
    """
    f = alpha*f0 + f1 and g, coefficient by coefficient.

    All coefficients are alpha-free and shared by every fixed point.
    """
    n: int
    cutoff: MultiDegree
    f0: Dict[MultiDegree, FracElement] = field(default_factory=dict)
    f1: Dict[MultiDegree, FracElement] = field(default_factory=dict)
    g: Dict[MultiDegree, Tuple[FracElement, ...]] = field(default_factory=dict)

    def is_trivial(self) -> bool:
        values = list(self.f0.values()) + list(self.f1.values())
        values += [c for components in self.g.values() for c in components]
        return all(not value for value in values)

    def agrees_with(self, other: "MirrorTransformData") -> bool:
        degrees = set(self.f0) | set(other.f0) | set(self.f1) | set(other.f1) | set(self.g) | set(other.g)
        zero = alphabet_for(self.n).field.zero
        empty = (zero,) * (self.n - 1)
        for d in degrees:
            if d.is_zero:
                continue
            if not same(self.f0.get(d, zero), other.f0.get(d, zero)):
                return False
            if not same(self.f1.get(d, zero), other.f1.get(d, zero)):
                return False
            if not all(same(a, b) for a, b in zip(self.g.get(d, empty), other.g.get(d, empty))):
                return False
        return True


def expand_series(B: Mapping[MultiDegree, SeriesCoefficient], cutoff: MultiDegree,
                  floor: int = config.ALPHA_FLOOR) -> ExpandedSeries:
    """
    Raises:
        MissingDegreeError: If B misses some d <= cutoff
        TypeError: If a restriction is not factored
    """
    n = len(cutoff) + 1
    alphabet = alphabet_for(n)
    expanded: ExpandedSeries = {}
    for d in degree_interval(cutoff):
        if d not in B:
            raise MissingDegreeError(f"B-series has no coefficient for d={d}")
        per_point = {}
        for p in fixed_points(n):
            value = B[d].value[p]
            if not isinstance(value, FactoredExpr):
                raise TypeError(f"restriction of B_{d} at {p} is not factored")
            per_point[p] = expand_alpha(value, floor, alphabet)
        expanded[d] = per_point
    return expanded


def _exponent_series(data: MirrorTransformData, p: FixedPoint, alphabet: Alphabet, sign: int = 1) -> Dict:
    """sign * (f0 + (f1 + S(p).g)/alpha) as a q-series at one fixed point."""
    field_ = alphabet.field
    partial = [alphabet.form(p.partial_sum(a)) for a in range(1, data.n)]
    series = {}
    for d in set(data.f0) | set(data.f1) | set(data.g):
        f0 = data.f0.get(d, field_.zero)
        f1 = data.f1.get(d, field_.zero)
        g = data.g.get(d, (field_.zero,) * (data.n - 1))
        linear = f1 + sum((s * c for s, c in zip(partial, g)), field_.zero)
        series[d] = LaurentInAlpha(field_, {0: f0 * sign, -1: linear * sign})
    return series


def _shift_series(data: MirrorTransformData, d: MultiDegree, degrees: Sequence[MultiDegree],
                  alphabet: Alphabet) -> Dict:
    """exp(d.g(q)) as a scalar q-series."""
    field_ = alphabet.field
    exponent = {}
    for e, components in data.g.items():
        exponent[e] = sum((c * k for c, k in zip(components, d.entries)), field_.zero)
    return _series_exp(exponent, degrees, field_.one, field_.zero, alphabet)


def _decompose(ratios: Mapping[FixedPoint, FracElement], n: int, alphabet: Alphabet):
    """
    Solve c(p) = c0 + sum_a c_a s_a(p) over all fixed points.

    Returns:
        (c0, (c_1, ..., c_{n-1})) or None when inconsistent
    """
    field_ = alphabet.field
    points = sorted(ratios)
    rows = [
        [field_.one] + [alphabet.form(p.partial_sum(a)) for a in range(1, n)] + [ratios[p]]
        for p in points
    ]
    matrix = DomainMatrix(rows, (len(rows), n + 1), field_.to_domain())
    reduced, pivots = matrix.rref()
    if n in pivots:
        return None
    entries = reduced.to_list()
    solution = [field_.zero] * n
    for row, column in enumerate(pivots):
        solution[column] = entries[row][n]
    return solution[0], tuple(solution[1:])


def mirror_transform(
    B: Union[Mapping[MultiDegree, SeriesCoefficient], ExpandedSeries],
    omega: GkmClass,
    cutoff: MultiDegree,
    floor: int = config.ALPHA_FLOOR,
) -> Tuple[MirrorTransformData, ExpandedSeries]:
    """
    Determine f and g degree by degree so that deg_alpha A_d <= -2 for 0 < d <= cutoff.

    Args:
        B: Factored series (expanded here) or an already expanded series
        omega: The class Omega = B_0
        cutoff: Highest degree
        floor: Truncation floor of the alpha-expansions

    Returns:
        (MirrorTransformData, A): the transform data and the normalized series

    Raises:
        NonNormalizableError: If a residual cannot be absorbed by f or g
        PrecisionError: If the expansions are too shallow
    """
    n = omega.n
    alphabet = alphabet_for(n)
    field_ = alphabet.field
    degrees = degree_interval(cutoff)
    sample = next(iter(B.values()))
    expanded: ExpandedSeries = expand_series(B, cutoff, floor) if isinstance(sample, SeriesCoefficient) else dict(B)
    for d in degrees:
        if d not in expanded:
            raise MissingDegreeError(f"B-series has no coefficient for d={d}")

    points = fixed_points(n)
    omega_at = {p: alphabet.to_field(omega[p]) for p in points}
    origin = degrees[0]
    for p in points:
        if expanded[origin][p] != LaurentInAlpha.constant(field_, omega_at[p]):
            raise NonNormalizableError(origin, 0, f"B_0 differs from Omega at {p}")

    data = MirrorTransformData(n, cutoff)
    A: ExpandedSeries = {origin: dict(expanded[origin])}
    zero = LaurentInAlpha.zero(field_)
    one = LaurentInAlpha.constant(field_, field_.one)
    empty_g = (field_.zero,) * (n - 1)

    for d in degrees[1:]:
        residual = {}
        for p in points:
            exponent = _exponent_series(data, p, alphabet)
            exp_x = _series_exp(exponent, degrees, one, zero, alphabet)
            b_series = {e: expanded[e][p] for e in degrees}
            value = _series_mul(exp_x, b_series, [d], zero)[d]
            for e in degrees:
                if e == d or e.is_zero or not e.precedes(d):
                    continue
                shift = _shift_series(data, e, degrees, alphabet)
                value = value - A[e][p] * shift[d - e]
            residual[p] = value.scale(1 / omega_at[p])

        for p in points:
            top = residual[p].top()
            if top is not None and top >= 1:
                raise NonNormalizableError(d, top, _render_field(residual[p].coefficient(top)))
        level0 = {p: residual[p].coefficient(0) for p in points}
        reference = level0[points[0]]
        for p in points[1:]:
            if not same(level0[p], reference):
                raise NonNormalizableError(d, 0, f"{_render_field(level0[p])} at {p} vs {_render_field(reference)}")
        solved = _decompose({p: residual[p].coefficient(-1) for p in points}, n, alphabet)
        if solved is None:
            detail = ", ".join(f"{p}: {_render_field(residual[p].coefficient(-1))}" for p in points)
            raise NonNormalizableError(d, -1, detail)
        c0, components = solved

        data.f0[d] = -reference
        data.f1[d] = -c0
        data.g[d] = tuple(-c for c in components)

        A[d] = {}
        for p in points:
            correction = _exponent_series(
                MirrorTransformData(n, cutoff, {d: data.f0[d]}, {d: data.f1[d]}, {d: data.g.get(d, empty_g)}),
                p, alphabet,
            )[d]
            A[d][p] = (residual[p] + correction) * omega_at[p]
        logger.debug(f"Normalized degree {d}")
    return data, A


def apply_mirror_transform(A: ExpandedSeries, data: MirrorTransformData, cutoff: MultiDegree) -> ExpandedSeries:
    """Inverse direction: B = exp(-(f + S.g)/alpha) * sum_d A_d q^d e^{d.g(q)}."""
    n = data.n
    alphabet = alphabet_for(n)
    field_ = alphabet.field
    degrees = degree_interval(cutoff)
    zero = LaurentInAlpha.zero(field_)
    one = LaurentInAlpha.constant(field_, field_.one)
    B: ExpandedSeries = {d: {} for d in degrees}
    for p in fixed_points(n):
        shifted = {d: zero for d in degrees}
        for e in degrees:
            shift = _shift_series(data, e, degrees, alphabet)
            for d in degrees:
                if e.precedes(d):
                    shifted[d] = shifted[d] + A[e][p] * shift[d - e]
        exp_x = _series_exp(_exponent_series(data, p, alphabet, sign=-1), degrees, one, zero, alphabet)
        product_series = _series_mul(exp_x, shifted, degrees, zero)
        for d in degrees:
            B[d][p] = product_series[d]
    return B


def normalized(A: ExpandedSeries) -> bool:
    """deg_alpha A_d <= -2 for every d != 0 at every fixed point."""
    return all(
        value.degree_at_most(config.ALPHA_DEGREE_TARGET)
        for d, per_point in A.items() if not d.is_zero
        for value in per_point.values()
    )


# --- synthetic round trip ------------------------------------------------------------


@dataclass
class SyntheticRoundTrip:
    original: MirrorTransformData
    recovered: MirrorTransformData
    A_star: ExpandedSeries
    A: ExpandedSeries

    @property
    def data_recovered(self) -> bool:
        return self.original.agrees_with(self.recovered)

    @property
    def series_recovered(self) -> bool:
        return all(self.A_star[d][p] == self.A[d][p] for d in self.A_star for p in self.A_star[d])


def _random_linear(rng: random.Random, alphabet: Alphabet, n: int) -> FracElement:
    value = alphabet.scalar(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
    value += alphabet.form(alphabet.variables[0].form) * rng.randint(-2, 2)
    for i in range(1, n + 1):
        value += alphabet.form(u(i).form) * rng.randint(-2, 2)
    return value


def synthetic_series(n: int, cutoff: MultiDegree, seed: int) -> Tuple[MirrorTransformData, ExpandedSeries]:
    """
    Random normalized series A* (deg_alpha A*_d <= -2) and random transform data.
    """
    rng = random.Random(seed)
    alphabet = alphabet_for(n)
    field_ = alphabet.field
    omega = omega_class(n)
    degrees = degree_interval(cutoff)
    data = MirrorTransformData(n, cutoff)
    A: ExpandedSeries = {}
    for d in degrees:
        A[d] = {}
        for p in fixed_points(n):
            omega_p = alphabet.to_field(omega[p])
            if d.is_zero:
                A[d][p] = LaurentInAlpha.constant(field_, omega_p)
            else:
                A[d][p] = LaurentInAlpha(field_, {
                    -2: omega_p * _random_linear(rng, alphabet, n),
                    -3: omega_p * _random_linear(rng, alphabet, n),
                })
        if not d.is_zero:
            data.f0[d] = alphabet.scalar(Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
            data.f1[d] = _random_linear(rng, alphabet, n)
            data.g[d] = tuple(_random_linear(rng, alphabet, n) for _ in range(n - 1))
    return data, A


def synthetic_round_trip(n: int, cutoff: MultiDegree, seed: int) -> SyntheticRoundTrip:
    """Build B from random (A*, f*, g*), then extract (f, g, A) back from B."""
    original, A_star = synthetic_series(n, cutoff, seed)
    B = apply_mirror_transform(A_star, original, cutoff)
    recovered, A = mirror_transform(B, omega_class(n), cutoff)
    return SyntheticRoundTrip(original, recovered, A_star, A)


def mirror_report(
    data: MirrorTransformData,
    A: ExpandedSeries,
    source: str,
    started: float,
    recovered: Optional[bool] = None,
    idempotent: Optional[bool] = None,
) -> MirrorReport:
    field_ = alphabet_for(data.n).field
    cases = []
    for d in sorted(A):
        if d.is_zero:
            continue
        tops = [value.top() for value in A[d].values() if value.top() is not None]
        top = max(tops) if tops else None
        ok = all(value.degree_at_most(config.ALPHA_DEGREE_TARGET) for value in A[d].values())
        cases.append(MirrorCase(
            d=list(d),
            f0=_render_field(data.f0.get(d, field_.zero)),
            f1=_render_field(data.f1.get(d, field_.zero)),
            g=[_render_field(c) for c in data.g.get(d, ())],
            a_top=top,
            status=CheckStatus.PASS if ok else CheckStatus.FAIL,
        ))
    return MirrorReport(
        n=data.n, cutoff=list(data.cutoff), source=source, recovered=recovered,
        idempotent=idempotent, assumptions=[MIRROR_SIGN_CONVENTION], cases=cases,
        elapsed_ms=(time.perf_counter() - started) * 1000,
    )


def reapply_is_trivial(A: ExpandedSeries, omega: GkmClass, cutoff: MultiDegree) -> bool:
    """Idempotence: transforming an already normalized series changes nothing."""
    again, _ = mirror_transform(A, omega, cutoff)
    return again.is_trivial()
