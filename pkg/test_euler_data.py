"""
Tests for the Euler data of the tangent bundle: the identity, its three
parts, the Chern-class oracle and the exact alpha-degree audit.
"""

from dataclasses import replace

import pytest

import hypergeom.euler_data as euler_data
from hypergeom.euler_data import (
    audit_degrees,
    build_chern,
    build_Q,
    check_q23_simplification,
    degree_audit,
    displayed_degree_bound,
    euler_class_Yr_Wd,
    restrict_jr,
    rising_block,
    sweep_euler_data,
    tangent_chern,
    verify_euler_data,
    verify_euler_data_parts,
)
from hypergeom.flag_geometry import MultiDegree, degree_interval, fixed_points, restrict_expr
from hypergeom.models import CheckStatus
from hypergeom.symbolic import ALPHA, X, FactoredExpr, H, kappa, parse_expr, u


def test_rising_block_conventions():
    z = X + u(1)
    assert rising_block(z, 0) == FactoredExpr.of(z)
    assert rising_block(z, 1) == parse_expr("(x+u1)*(x+u1-a)")
    assert rising_block(z, -1) == FactoredExpr.one()
    assert rising_block(z, -3) == parse_expr("(x+u1+a)^-1*(x+u1+2a)^-1")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_omega_restricts_to_tangent_chern_polynomial(n):
    omega = build_chern(n).omega
    for p in fixed_points(n):
        assert restrict_expr(omega, p) == tangent_chern(p)


def test_q0_is_gamma():
    for n in (2, 3):
        to_kappa = {H(a): kappa(a) for a in range(1, n)}
        assert build_Q(n, MultiDegree.zero(n - 1)).q == build_chern(n).gamma.substitute(to_kappa)


@pytest.mark.parametrize("d", range(5))
def test_euler_identity_fl2(d):
    report = verify_euler_data(2, MultiDegree.of(d))
    assert len(report.cases) == d + 1
    assert report.passed


@pytest.mark.parametrize("d", [(1, 0), (0, 1), (1, 1), (2, 1)])
def test_euler_identity_fl3(d):
    assert verify_euler_data(3, MultiDegree(d)).passed


@pytest.mark.slow
def test_euler_identity_fl3_full_sweep():
    report = sweep_euler_data(3, MultiDegree.of(2, 2))
    assert len(report.cases) == sum(len(degree_interval(d)) for d in degree_interval(MultiDegree.of(2, 2)))
    assert report.passed


@pytest.mark.parametrize("n, d", [(2, (3,)), (3, (2, 1)), (3, (1, 2))])
def test_identity_is_symmetric_under_r_to_d_minus_r(n, d):
    d = MultiDegree(d)
    report = verify_euler_data(n, d)
    seen = {tuple(case.r) for case in report.cases}
    assert seen == {tuple(d - MultiDegree(r)) for r in seen}
    gamma, q_d = build_chern(n).gamma, build_Q(n, d).q
    for r in degree_interval(d):
        left = gamma * restrict_jr(q_d, r)
        mirrored = gamma * restrict_jr(q_d, d - r)
        assert left == mirrored.bar(), (d, r)


def test_sweep_counts_cases():
    report = sweep_euler_data(2, MultiDegree.of(4))
    assert len(report.cases) == 15
    assert report.passed


def test_each_part_is_euler_data():
    cases = verify_euler_data_parts(3, MultiDegree.of(1, 1))
    assert len(cases) == 12
    assert {case.part for case in cases} == {"q1", "q2", "q3"}
    assert all(case.status == CheckStatus.PASS for case in cases)


def test_broken_gamma_is_reported(monkeypatch):
    chern = build_chern(2)
    broken = replace(chern, gamma=chern.gamma * FactoredExpr.of(X + ALPHA))
    monkeypatch.setattr(euler_data, "build_chern", lambda n: broken)
    report = verify_euler_data(2, MultiDegree.of(1))
    assert not report.passed
    assert all(case.difference for case in report.cases if case.status == CheckStatus.FAIL)


@pytest.mark.parametrize("d", [(1, 0), (0, 1), (1, 1), (2, 1), (2, 2)])
def test_q23_simplification(d):
    assert check_q23_simplification(3, MultiDegree(d))


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_degree_audit_fl2(m):
    entry = degree_audit(2, MultiDegree.of(m))
    assert entry.alpha_degree == 2 * m
    assert entry.c1 == 2 * m
    assert entry.slack == 0
    assert entry.displayed_bound == 2 * m - 1
    assert not entry.bound_holds
    assert not entry.stronger_claim_holds
    assert entry.status == CheckStatus.PASS
    assert sum(entry.part_degrees) == entry.alpha_degree


@pytest.mark.parametrize("d, degree, c1, slack", [
    ((1, 0), 4, 2, -2),
    ((1, 1), 3, 4, 1),
    ((0, 1), 2, 2, 0),
    ((2, 0), 6, 4, -2),
    ((2, 1), 8, 6, -2),
    ((1, 2), 6, 6, 0),
    ((2, 2), 7, 8, 1),
])
def test_degree_audit_fl3(d, degree, c1, slack):
    entry = degree_audit(3, MultiDegree(d))
    assert (entry.alpha_degree, entry.c1, entry.slack) == (degree, c1, slack)
    assert entry.status == (CheckStatus.PASS if slack >= 0 else CheckStatus.FAIL)
    assert not entry.stronger_claim_holds


def test_displayed_bound_is_violated_at_one_one():
    assert displayed_degree_bound(3, MultiDegree.of(1, 1)) == 1
    assert not degree_audit(3, MultiDegree.of(1, 1)).bound_holds


def test_negative_slack_when_first_entry_dominates():
    report = audit_degrees(3, MultiDegree.of(2, 2))
    for entry in report.cases:
        d1, d2 = entry.d
        if d1 > d2:
            assert entry.slack < 0
    assert not report.passed


def test_euler_class_of_fixed_component():
    weights = [[u(1).form, u(2).form]]
    assert euler_class_Yr_Wd(weights, MultiDegree.of(1), MultiDegree.of(0)) == parse_expr("(H1-u1-a)*(H1-u2-a)")
    assert euler_class_Yr_Wd(weights, MultiDegree.of(1), MultiDegree.of(1)) == parse_expr("(H1-u1+a)*(H1-u2+a)")
    with pytest.raises(ValueError):
        euler_class_Yr_Wd(weights, MultiDegree.of(1), MultiDegree.of(2))
