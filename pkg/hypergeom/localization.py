"""
Balloon Localization and the Linking Check

The tangent bundle of Fl(n) decomposes in the Grothendieck group into line
summands L*_a (x) S_i and L*_a (x) L_b with signs. Restricting the induced
bundle on the space of multiple covers of a balloon to its fixed point gives
a product of line contributions; at alpha = lambda/delta it has to agree
with the Euler data restricted to the balloon's base point.
"""

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from hypergeom.euler_data import build_Q, j0_tau
from hypergeom.exceptions import ZeroFactorError
from hypergeom.flag_geometry import (
    Balloon,
    FixedPoint,
    balloons,
    check_n,
    line_degree,
    multidegree_of_balloon,
    pairing_table_report,
    restrict_expr,
)
from hypergeom.models import CheckStatus, LinkCase, LinkReport, PairingConflict
from hypergeom.symbolic import ALPHA, X, FactoredExpr, LinearForm, u
from hypergeom.workers import run_parallel

logger = logging.getLogger(__name__)

S_FACTOR_ASSUMPTION = "<c_1(S_i), [pq]> = 0: the trivial summand S_i has degree 0 on every balloon"
PAIRING_CONVENTION = (
    "<y_a,[pq]> = [a=i] - [a=j] for the balloon of (i j); pairing_conflicts lists where "
    "the case-list form of the pairing gives another value"
)

LXS = "LxS"
LXL = "LxL"


@dataclass(frozen=True)
class LineSummand:
    """
    One signed line summand of [T Fl(n)].

    Attributes:
        kind: "LxS" for L*_a (x) S_i, "LxL" for L*_a (x) L_b
        a: Index of the dual line
        b: Index i of S_i (LxS) or b of L_b (LxL)
        sign: +1 or -1
        block: "S", "neg" or "pos", the block of the decomposition it came from
    """
    kind: str
    a: int
    b: int
    sign: int
    block: str

    def restriction_at(self, p: FixedPoint) -> LinearForm:
        if self.kind == LXS:
            return u(p(self.a)) - u(self.b)
        return u(p(self.a)) - u(p(self.b))

    def degree_on(self, balloon: Balloon) -> int:
        if self.kind == LXS:
            return line_degree((self.a, f"S_{self.b}"), balloon)
        return line_degree((self.a, self.b), balloon)

    def __str__(self) -> str:
        sign = "+" if self.sign > 0 else "-"
        return f"{sign}{self.kind}({self.a},{self.b})"


@dataclass(frozen=True)
class BalloonProduct:
    """Restriction of the induced bundle class at alpha = lambda/delta."""
    balloon: Balloon
    delta: int
    value: FactoredExpr


def signed_rank(n: int) -> int:
    """n(n-1) - sum_{i<n} i^2 + sum_{i<n-1} i(i+1)."""
    return n * (n - 1) - sum(i * i for i in range(1, n)) + sum(i * (i + 1) for i in range(1, n - 1))


def tangent_decomposition(n: int) -> List[LineSummand]:
    """
    Signed line summands of [T Fl(n)], checked against dim Fl(n) = n(n-1)/2.
    """
    check_n(n)
    summands = [LineSummand(LXS, a, i, 1, "S") for i in range(1, n + 1) for a in range(1, n)]
    summands += [
        LineSummand(LXL, a, b, -1, "neg")
        for i in range(1, n) for a in range(1, i + 1) for b in range(1, i + 1)
    ]
    summands += [
        LineSummand(LXL, a, b, 1, "pos")
        for i in range(1, n - 1) for a in range(1, i + 1) for b in range(1, i + 2)
    ]
    rank = sum(summand.sign for summand in summands)
    if rank != n * (n - 1) // 2 or rank != signed_rank(n):
        raise ArithmeticError(f"signed rank {rank} of the decomposition is not dim Fl({n})")
    return summands


def line_contribution(c1_at_p: LinearForm, l: int, delta: int, weight: LinearForm) -> FactoredExpr:
    """
    Contribution of a line bundle of degree l on a delta-fold cover.

    l >= 0: prod_{k=0}^{l delta} (x + c1 - k lambda/delta)
    l <  0: 1 / prod_{k=1}^{-l delta - 1} (x + c1 + k lambda/delta)
    """
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    base = X + c1_at_p
    if l >= 0:
        return FactoredExpr.build(1, [(base - weight * Fraction(k, delta), 1) for k in range(l * delta + 1)])
    return FactoredExpr.build(1, [(base + weight * Fraction(k, delta), -1) for k in range(1, -l * delta)])


def balloon_product(n: int, balloon: Balloon, delta: int) -> BalloonProduct:
    p = balloon.p
    if p.n != n:
        raise ValueError(f"balloon {balloon} does not belong to Fl({n})")
    value = FactoredExpr.product(
        line_contribution(s.restriction_at(p), s.degree_on(balloon), delta, balloon.tangent_weight) ** s.sign
        for s in tangent_decomposition(n)
    )
    return BalloonProduct(balloon, delta, value)


def restricted_euler_data(n: int, balloon: Balloon, delta: int) -> FactoredExpr:
    """i_p* tau* j_0* Q_d at alpha = lambda/delta, d = delta [pq]."""
    d = multidegree_of_balloon(balloon, delta)
    restricted = restrict_expr(j0_tau(build_Q(n, d).q, n - 1), balloon.p)
    return restricted.substitute({ALPHA: balloon.tangent_weight * Fraction(1, delta)})


def verify_link(n: int, balloon: Balloon, delta: int) -> LinkCase:
    """
    Compare the restricted Euler data with the balloon product.

    A denominator factor killed by the alpha-substitution makes the case a
    pole; a numerator factor makes it a zero.
    """
    d = multidegree_of_balloon(balloon, delta)
    assumptions = [S_FACTOR_ASSUMPTION]
    rhs = balloon_product(n, balloon, delta).value
    try:
        lhs = restricted_euler_data(n, balloon, delta)
    except ZeroFactorError as e:
        status = CheckStatus.POLE if e.is_pole else CheckStatus.ZERO
        logger.warning(f"{status.value.capitalize()} at alpha = lambda/{delta} on {balloon}: {e}")
        return LinkCase(n=n, balloon=str(balloon), delta=delta, d=list(d), status=status,
                        rhs=str(rhs), detail=str(e), assumptions=assumptions)
    if lhs == rhs:
        return LinkCase(n=n, balloon=str(balloon), delta=delta, d=list(d), status=CheckStatus.PASS,
                        assumptions=assumptions)
    return LinkCase(n=n, balloon=str(balloon), delta=delta, d=list(d), status=CheckStatus.FAIL,
                    lhs=str(lhs), rhs=str(rhs), assumptions=assumptions)


def _link_task(args: Tuple[int, Balloon, int]) -> LinkCase:
    n, balloon, delta = args
    return verify_link(n, balloon, delta)


def check_links(n: int, delta_max: int, jobs: int = 1) -> LinkReport:
    """verify_link for every directed balloon and 1 <= delta <= delta_max."""
    started = time.perf_counter()
    tasks = [(n, balloon, delta) for balloon in balloons(n) for delta in range(1, delta_max + 1)]
    logger.info(f"Checking {len(tasks)} balloon cases for n={n}")
    cases = run_parallel(_link_task, tasks, jobs)
    conflicts = [PairingConflict(**conflict) for conflict in pairing_table_report(n)]
    if conflicts:
        logger.warning(f"Case-list pairing disagrees with the formula on {len(conflicts)} entries for n={n}")
    return LinkReport(n=n, delta_max=delta_max, cases=cases, pairing_convention=PAIRING_CONVENTION,
                      pairing_conflicts=conflicts,
                      elapsed_ms=(time.perf_counter() - started) * 1000)
