"""
Tests for the balloon linking check: the tangent decomposition, line
contributions on multiple covers and the linking equality itself.
"""

import pytest

import hypergeom.localization as localization
from hypergeom.exceptions import ZeroFactorError
from hypergeom.flag_geometry import Balloon, FixedPoint, balloons
from hypergeom.localization import (
    PAIRING_CONVENTION,
    S_FACTOR_ASSUMPTION,
    balloon_product,
    check_links,
    line_contribution,
    restricted_euler_data,
    signed_rank,
    tangent_decomposition,
    verify_link,
)
from hypergeom.models import CheckStatus
from hypergeom.symbolic import FactoredExpr, parse_expr, u


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_signed_rank_is_dimension(n):
    assert signed_rank(n) == n * (n - 1) // 2
    assert sum(s.sign for s in tangent_decomposition(n)) == n * (n - 1) // 2


def test_line_contributions():
    c1 = u(1) - u(2)
    weight = u(1) - u(3)
    assert line_contribution(c1, 0, 1, weight) == parse_expr("(x+u1-u2)")
    assert line_contribution(c1, 1, 2, weight) == parse_expr("(x+u1-u2)*(x+1/2u1-u2+1/2u3)*(x-u2+u3)")
    assert line_contribution(c1, -1, 1, weight) == FactoredExpr.one()
    assert line_contribution(c1, -1, 2, weight) == parse_expr("(x+3/2u1-u2-1/2u3)^-1")
    with pytest.raises(ValueError):
        line_contribution(c1, 1, 0, weight)


def test_balloon_must_belong_to_the_flag_manifold():
    balloon = Balloon.from_point(FixedPoint.identity(2), 1, 2)
    with pytest.raises(ValueError):
        balloon_product(3, balloon, 1)


@pytest.mark.parametrize("delta", [1, 2, 3])
def test_links_fl2(delta):
    for balloon in balloons(2):
        case = verify_link(2, balloon, delta)
        assert case.status == CheckStatus.PASS, case
        assert S_FACTOR_ASSUMPTION in case.assumptions


def test_link_sides_agree_on_one_balloon():
    balloon = Balloon.parse("213x(1,3)")
    assert restricted_euler_data(3, balloon, 2) == balloon_product(3, balloon, 2).value


def test_check_links_fl3():
    report = check_links(3, 2)
    assert len(report.cases) == 36
    assert report.passed
    assert report.cases[0].balloon == "123x(1,2)"
    assert report.pairing_convention == PAIRING_CONVENTION
    assert any(
        conflict.a == 1 and conflict.transposition == [2, 3] and (conflict.displayed, conflict.formula) == (1, 0)
        for conflict in report.pairing_conflicts
    )


@pytest.mark.parametrize("exponent, status", [(2, CheckStatus.ZERO), (-1, CheckStatus.POLE)])
def test_vanishing_factor_is_classified(monkeypatch, exponent, status):
    def vanishing(n, balloon, delta):
        raise ZeroFactorError("factor vanishes identically", exponent)

    monkeypatch.setattr(localization, "restricted_euler_data", vanishing)
    case = verify_link(2, Balloon.parse("12x(1,2)"), 1)
    assert case.status == status
    assert case.detail == "factor vanishes identically"
    assert case.rhs is not None


@pytest.mark.slow
def test_check_links_fl4():
    assert check_links(4, 1).passed
