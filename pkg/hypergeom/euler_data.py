"""
Euler Data for the Tangent Bundle of Fl(n)

Builds the Chern-polynomial classes Gamma (in the hyperplane classes H) and
Omega = tau* Gamma (in the line classes y), the three-part Euler data
Q_d = q1 * q2 * q3 on the linear sigma model, and verifies the Euler-data
identity

    Gamma * j_r* Q_d = bar(j_0* Q_r) * j_0* Q_{d-r}    for every r <= d

by comparing canonical factor multisets.
"""

import logging
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

from hypergeom.exceptions import HypergeomError
from hypergeom.flag_geometry import (
    FixedPoint,
    MultiDegree,
    c1_pairing,
    check_n,
    d_ab,
    degree_interval,
    fixed_points,
    restrict_expr,
)
from hypergeom.models import CheckStatus, DegreeAuditEntry, DegreeAuditReport, EulerCase, EulerDataReport
from hypergeom.symbolic import (
    ALPHA,
    X,
    FactoredExpr,
    LinearForm,
    Variable,
    VarKind,
    H,
    kappa,
    u,
    y,
)
from hypergeom.workers import run_parallel

logger = logging.getLogger(__name__)

ClassVariable = Callable[[int], Variable]

TYPO_NOTE = "the audit denominator keeps -u_i, as in the definition of Q_d"


def step(var: ClassVariable, a: int) -> LinearForm:
    """var_a - var_{a-1} with var_0 = 0."""
    if a == 1:
        return var(1).form
    return var(a) - var(a - 1)


def pair_form(var: ClassVariable, a: int, b: int) -> LinearForm:
    """var_ab = (var_a - var_{a-1}) - (var_b - var_{b-1})."""
    return step(var, a) - step(var, b)


def rising_block(z: LinearForm, m: int) -> FactoredExpr:
    """
    prod_{k=0}^{m} (z - k*alpha) for m >= 0, else 1 / prod_{k=1}^{-m-1} (z + k*alpha).

    m = -1 gives the empty product 1.
    """
    if m >= 0:
        return FactoredExpr.build(1, [(z - ALPHA * k, 1) for k in range(m + 1)])
    return FactoredExpr.build(1, [(z + ALPHA * k, -1) for k in range(1, -m)])


def _gamma_parts(n: int, var: ClassVariable) -> Tuple[FactoredExpr, FactoredExpr, FactoredExpr]:
    first = FactoredExpr.build(
        1, [(X + step(var, a) - u(i), 1) for i in range(1, n + 1) for a in range(1, n)]
    )
    second = FactoredExpr.build(
        1,
        [(X + pair_form(var, a, b), -1)
         for i in range(1, n) for a in range(1, i + 1) for b in range(1, i + 1)],
    )
    third = FactoredExpr.build(
        1,
        [(X + pair_form(var, a, b), 1)
         for i in range(1, n - 1) for a in range(1, i + 1) for b in range(1, i + 2)],
    )
    return first, second, third


@dataclass(frozen=True)
class ChernData:
    """
    Gamma in (x, H, u) and Omega = tau* Gamma in (x, y, u).

    Attributes:
        gamma_parts: The three products whose product is gamma
    """
    n: int
    gamma: FactoredExpr
    omega: FactoredExpr
    gamma_parts: Tuple[FactoredExpr, FactoredExpr, FactoredExpr]


def tangent_chern(p: FixedPoint) -> FactoredExpr:
    """Chern polynomial of T_p Fl(n): prod_{i<j} (x + u_omega(i) - u_omega(j))."""
    n = p.n
    return FactoredExpr.build(
        1, [(X + u(p(i)) - u(p(j)), 1) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    )


@lru_cache(maxsize=None)
def build_chern(n: int) -> ChernData:
    """
    Construct Gamma and Omega and check Omega against the tangent weights.

    Raises:
        HypergeomError: If a fixed-point restriction of Omega disagrees
    """
    check_n(n)
    parts = _gamma_parts(n, H)
    gamma = FactoredExpr.product(parts)
    omega = tau_pullback(gamma)
    for p in fixed_points(n):
        if restrict_expr(omega, p) != tangent_chern(p):
            raise HypergeomError(f"Omega restricted to {p} is not the tangent Chern polynomial")
    logger.debug(f"Built Chern data for n={n} with {len(gamma.factors)} distinct factors")
    return ChernData(n, gamma, omega, parts)


@dataclass(frozen=True)
class EulerDatum:
    """Q_d = q1 * q2 * q3 in (x, kappa, u, alpha)."""
    n: int
    d: MultiDegree
    q1: FactoredExpr
    q2: FactoredExpr
    q3: FactoredExpr
    q: FactoredExpr

    @property
    def parts(self) -> Tuple[FactoredExpr, FactoredExpr, FactoredExpr]:
        return self.q1, self.q2, self.q3


def _check_degree(n: int, d: MultiDegree) -> None:
    check_n(n)
    if len(d) != n - 1:
        raise ValueError(f"degree for n={n} needs {n - 1} entries, got {d}")
    if not d.is_effective:
        raise ValueError(f"degree {d} is not effective")


@lru_cache(maxsize=None)
def build_Q(n: int, d: MultiDegree) -> EulerDatum:
    """
    Three-part Euler data with the d_0 = kappa_0 = 0 conventions.

    Args:
        n: Size of the flag manifold
        d: Effective multidegree of length n-1

    Returns:
        EulerDatum: q1, q2, q3 and their product
    """
    _check_degree(n, d)
    q1 = FactoredExpr.product(
        rising_block(X + step(kappa, a) - u(i), d.at(a) - d.at(a - 1))
        for i in range(1, n + 1) for a in range(1, n)
    )
    q2 = FactoredExpr.product(
        rising_block(X + pair_form(kappa, a, b), d_ab(d, a, b)).inverse()
        for i in range(1, n) for a in range(1, i + 1) for b in range(1, i + 1)
    )
    q3 = FactoredExpr.product(
        rising_block(X + pair_form(kappa, a, b), d_ab(d, a, b))
        for i in range(1, n - 1) for a in range(1, i + 1) for b in range(1, i + 2)
    )
    return EulerDatum(n, d, q1, q2, q3, q1 * q2 * q3)


def restrict_jr(e: FactoredExpr, r: MultiDegree) -> FactoredExpr:
    """j_r*: kappa_a -> H_a + r_a * alpha."""
    assignment = {kappa(a): H(a) + ALPHA * r.at(a) for a in range(1, len(r) + 1)}
    return e.substitute(assignment)


def tau_pullback(e: FactoredExpr) -> FactoredExpr:
    """tau*: H_a -> y_1 + ... + y_a."""
    assignment: Dict[Variable, LinearForm] = {}
    for var in e.variables():
        if var.kind == VarKind.H:
            assignment[var] = sum((y(c).form for c in range(1, var.index + 1)), LinearForm())
    return e.substitute(assignment)


def _euler_sides(gamma: FactoredExpr, q_d: FactoredExpr, q_r: FactoredExpr, q_rest: FactoredExpr,
                 r: MultiDegree) -> Tuple[FactoredExpr, FactoredExpr]:
    zero = MultiDegree.zero(len(r))
    left = gamma * restrict_jr(q_d, r)
    right = restrict_jr(q_r, zero).bar() * restrict_jr(q_rest, zero)
    return left, right


def euler_identity_case(n: int, d: MultiDegree, r: MultiDegree) -> EulerCase:
    """Check the identity for one r <= d on the full product Q."""
    chern = build_chern(n)
    left, right = _euler_sides(chern.gamma, build_Q(n, d).q, build_Q(n, r).q, build_Q(n, d - r).q, r)
    if left == right:
        return EulerCase(d=list(d), r=list(r), status=CheckStatus.PASS)
    return EulerCase(d=list(d), r=list(r), status=CheckStatus.FAIL, difference=str(left / right))


def _euler_identity_task(args) -> EulerCase:
    n, d, r = args
    return euler_identity_case(n, d, r)


def verify_euler_data(n: int, d: MultiDegree, jobs: int = 1) -> EulerDataReport:
    """
    Verify Gamma * j_r* Q_d = bar(j_0* Q_r) * j_0* Q_{d-r} for every r <= d.

    Returns:
        EulerDataReport: One case per r in lexicographic order
    """
    _check_degree(n, d)
    started = time.perf_counter()
    tasks = [(n, d, r) for r in degree_interval(d)]
    cases = run_parallel(_euler_identity_task, tasks, jobs)
    failed = [case for case in cases if case.status != CheckStatus.PASS]
    if failed:
        logger.warning(f"Euler-data identity fails for n={n}, d={d} at {len(failed)} values of r")
    else:
        logger.debug(f"Euler-data identity holds for n={n}, d={d} ({len(cases)} cases)")
    return EulerDataReport(
        n=n, d=list(d), cases=cases, elapsed_ms=(time.perf_counter() - started) * 1000
    )


def verify_euler_data_parts(n: int, d: MultiDegree) -> List[EulerCase]:
    """
    The identity separately for (Gamma^1, q1), (Gamma_2, q2), (Gamma_3, q3).

    Each part is Euler data on its own, so every case passes.
    """
    _check_degree(n, d)
    gamma_parts = build_chern(n).gamma_parts
    cases = []
    for r in degree_interval(d):
        q_d, q_r, q_rest = build_Q(n, d), build_Q(n, r), build_Q(n, d - r)
        for index, name in enumerate(("q1", "q2", "q3")):
            left, right = _euler_sides(
                gamma_parts[index], q_d.parts[index], q_r.parts[index], q_rest.parts[index], r
            )
            status = CheckStatus.PASS if left == right else CheckStatus.FAIL
            cases.append(EulerCase(
                d=list(d), r=list(r), part=name, status=status,
                difference=None if status == CheckStatus.PASS else str(left / right),
            ))
    return cases


def j0_tau(e: FactoredExpr, length: int) -> FactoredExpr:
    """tau* j_0*: kappa_a -> y_1 + ... + y_a."""
    return tau_pullback(restrict_jr(e, MultiDegree.zero(length)))


def displayed_degree_bound(n: int, d: MultiDegree) -> int:
    """n*d_{n-1} - sum_{i=1}^{n-1} sum_{a=1}^{i} (d_ia + 1)."""
    total = n * d.at(n - 1)
    for i in range(1, n):
        for a in range(1, i + 1):
            total -= d_ab(d, i, a) + 1
    return total


def degree_audit(n: int, d: MultiDegree) -> DegreeAuditEntry:
    """
    Exact alpha-degree of tau* j_0* Q_d against <c_1(X), d>.

    status is pass iff the slack <c_1(X), d> - deg_alpha is nonnegative; the
    displayed bound and the stronger slack claim are recorded, not enforced.
    """
    _check_degree(n, d)
    datum = build_Q(n, d)
    length = n - 1
    part_degrees = [j0_tau(part, length).alpha_degree() for part in datum.parts]
    degree = j0_tau(datum.q, length).alpha_degree()
    if degree != sum(part_degrees):
        raise HypergeomError(f"alpha-degree is not additive over the parts of Q_{d}")
    bound = displayed_degree_bound(n, d)
    c1 = c1_pairing(d)
    slack = c1 - degree
    entry = DegreeAuditEntry(
        d=list(d),
        alpha_degree=degree,
        part_degrees=part_degrees,
        displayed_bound=bound,
        bound_holds=degree <= bound,
        c1=c1,
        slack=slack,
        stronger_claim_holds=slack >= n * (n - 1) // 2,
        status=CheckStatus.PASS if slack >= 0 else CheckStatus.FAIL,
        notes=[TYPO_NOTE],
    )
    if slack < 0:
        logger.warning(f"Negative slack {slack} for n={n}, d={d}")
    return entry


def _audit_task(args) -> DegreeAuditEntry:
    n, d = args
    return degree_audit(n, d)


def sweep_euler_data(n: int, bound: MultiDegree, jobs: int = 1) -> EulerDataReport:
    """
    Euler-data identity for every d <= bound and every r <= d.

    Cases are ordered by (d, r), both lexicographic.
    """
    _check_degree(n, bound)
    started = time.perf_counter()
    tasks = [(n, d, r) for d in degree_interval(bound) for r in degree_interval(d)]
    logger.info(f"Verifying {len(tasks)} Euler-data cases for n={n} up to d={bound}")
    cases = run_parallel(_euler_identity_task, tasks, jobs)
    return EulerDataReport(n=n, d=list(bound), cases=cases, elapsed_ms=(time.perf_counter() - started) * 1000)


def audit_degrees(n: int, bound: MultiDegree, jobs: int = 1) -> DegreeAuditReport:
    _check_degree(n, bound)
    started = time.perf_counter()
    cases = run_parallel(_audit_task, [(n, d) for d in degree_interval(bound)], jobs)
    return DegreeAuditReport(n=n, cases=cases, elapsed_ms=(time.perf_counter() - started) * 1000)


def euler_class_Yr_Wd(weights: Sequence[Sequence[LinearForm]], d: MultiDegree, r: MultiDegree) -> FactoredExpr:
    """
    e_G(Y_r / W_d) = prod_a prod_i prod_{k != r_a} (H_a - u_{a,i} - (k - r_a) alpha).

    Args:
        weights: weights[a-1] lists the m_a + 1 torus weights of the a-th factor
        d: Degree of the linear sigma model
        r: Fixed component index, r <= d

    Raises:
        ValueError: If r does not precede d or the weight lists do not match d
    """
    if len(weights) != len(d) or len(r) != len(d):
        raise ValueError("weights, d and r must have the same length")
    if not (r.is_effective and r.precedes(d)):
        raise ValueError(f"{r} does not precede {d}")
    factors = []
    for a, weight_list in enumerate(weights, start=1):
        r_a = r.at(a)
        for weight in weight_list:
            for k in range(d.at(a) + 1):
                if k != r_a:
                    factors.append((H(a) - weight - ALPHA * (k - r_a), 1))
    return FactoredExpr.build(1, factors)


def simplified_q23(n: int, d: MultiDegree) -> FactoredExpr:
    """
    q2 * q3 written over pairs b <= a only:

        prod_{b <= a <= n-1} 1 / rising_block(x + kappa_ab, d_ab)
    """
    _check_degree(n, d)
    return FactoredExpr.product(
        rising_block(X + pair_form(kappa, a, b), d_ab(d, a, b)).inverse()
        for a in range(1, n) for b in range(1, a + 1)
    )


def check_q23_simplification(n: int, d: MultiDegree) -> bool:
    datum = build_Q(n, d)
    return datum.q2 * datum.q3 == simplified_q23(n, d)
