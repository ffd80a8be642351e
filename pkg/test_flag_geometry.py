"""
Tests for the GKM combinatorics of Fl(n): fixed points, balloons, degree
pairings, localization integrals and the displayed case tables.
"""

from math import factorial

import pytest

from hypergeom.exceptions import GkmConditionError, HypergeomError
from hypergeom.flag_geometry import (
    Balloon,
    FixedPoint,
    GkmClass,
    MultiDegree,
    balloons,
    c1_pairing,
    check_n,
    d_ab,
    degree_interval,
    degree_pairing,
    displayed_line_degree,
    fixed_points,
    gkm_check,
    integrate_localization,
    line_degree,
    line_degree_table_report,
    localization_sum,
    multidegree_of_balloon,
    pairing_table_report,
    restrict_class,
    restrict_expr,
    tangent_euler_class,
)
from hypergeom.laurent import alphabet_for, same
from hypergeom.symbolic import FactoredExpr, parse_expr, u


def test_fixed_points_are_lexicographic():
    points = fixed_points(3)
    assert [str(p) for p in points] == ["123", "132", "213", "231", "312", "321"]
    assert FixedPoint.parse("213").sign() == -1
    assert FixedPoint.parse("231").sign() == 1


def test_fixed_point_partial_sums():
    p = FixedPoint.parse("231")
    assert p.partial_sum(2) == u(2) + u(3)


@pytest.mark.parametrize("n, count", [(2, 2), (3, 18), (4, 144)])
def test_balloon_count(n, count):
    assert len(balloons(n)) == count


def test_balloon_parsing():
    balloon = Balloon.parse("231x(1,3)")
    assert str(balloon.q) == "132"
    assert balloon.tangent_weight == u(2) - u(1)
    assert str(balloon) == "231x(1,3)"
    assert balloon.reversed().q == balloon.p


def test_balloon_parsing_rejects_garbage():
    with pytest.raises(ValueError):
        Balloon.parse("231(1,3)")
    with pytest.raises(ValueError):
        Balloon.parse("231x(3,1)")


def test_degree_pairing_is_difference_of_indicators():
    balloon = Balloon.from_point(FixedPoint.identity(3), 1, 3)
    assert [degree_pairing(a, balloon) for a in (1, 2, 3)] == [1, 0, -1]
    assert line_degree((1, 3), balloon) == 2
    assert line_degree((1, "S_2"), balloon) == 1


@pytest.mark.parametrize("transposition, expected", [
    ((1, 2), (1, 0)),
    ((2, 3), (0, 1)),
    ((1, 3), (1, 1)),
])
def test_multidegree_of_balloon(transposition, expected):
    balloon = Balloon.from_point(FixedPoint.identity(3), *transposition)
    assert multidegree_of_balloon(balloon, 1) == MultiDegree(expected)
    assert multidegree_of_balloon(balloon, 2) == MultiDegree(expected).scale(2)


def test_multidegree_helpers():
    d = MultiDegree.parse("1,2")
    assert c1_pairing(d) == 6
    assert d_ab(d, 2, 1) == 0
    assert d_ab(d, 1, 2) == 0
    assert d_ab(MultiDegree.of(2, 1), 1, 2) == 3
    interval = degree_interval(d)
    assert len(interval) == 6
    assert interval[0] == MultiDegree.zero(2) and interval[-1] == d
    assert MultiDegree.of(1, 0).precedes(d)
    assert not MultiDegree.of(2, 0).precedes(d)


def test_check_n_bounds():
    with pytest.raises(ValueError):
        check_n(1)
    with pytest.raises(ValueError):
        fixed_points(0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_localization_integrals(n):
    alphabet = alphabet_for(n)
    one = GkmClass.from_function(n, lambda p: FactoredExpr.one(), polynomial=True)
    assert not integrate_localization(one, n, alphabet)
    assert same(integrate_localization(tangent_euler_class(n), n, alphabet), alphabet.scalar(factorial(n)))


def test_field_localization_sum():
    alphabet = alphabet_for(2)
    values = {p: alphabet.form(u(p(1))) for p in fixed_points(2)}
    assert same(localization_sum(2, values, alphabet), alphabet.scalar(1))


def test_incomplete_class_is_rejected():
    with pytest.raises(HypergeomError):
        GkmClass(3, {FixedPoint.identity(3): FactoredExpr.one()})


def test_gkm_condition():
    assert gkm_check(tangent_euler_class(3))[0]

    identity = FixedPoint.identity(3)
    lopsided = GkmClass.from_function(3, lambda p: FactoredExpr.of(u(1) if p == identity else u(2)))
    ok, violations = gkm_check(lopsided)
    assert not ok
    assert "123x(1,3)" in {str(b) for b in violations}


def test_polynomial_class_enforces_gkm_condition():
    identity = FixedPoint.identity(3)
    with pytest.raises(GkmConditionError) as info:
        GkmClass.from_function(
            3, lambda p: FactoredExpr.of(u(1) if p == identity else u(2)), polynomial=True
        )
    assert info.value.violations


def test_restriction_commutes_with_expansion():
    alphabet = alphabet_for(3)
    e = parse_expr("(x+y1-y2)*(x+y2+a)^2")
    for p in fixed_points(3):
        assert restrict_class(alphabet.to_poly(e), p, alphabet) == alphabet.to_poly(restrict_expr(e, p))


def test_displayed_pairing_conflicts_with_formula():
    conflicts = pairing_table_report(3)
    assert {"a": 1, "transposition": [2, 3], "displayed": 1, "formula": 0} in conflicts


@pytest.mark.parametrize("n", [2, 3, 4])
def test_line_degree_tables_match_formula(n):
    assert line_degree_table_report(n) == []


def test_line_degree_tables_exclude_diagonal():
    with pytest.raises(ValueError):
        displayed_line_degree(2, 2, 1, 2)
