"""
Tests for expanded arithmetic: alphabets, Laurent expansions in alpha and
their truncation floors.
"""

import random
from fractions import Fraction

import pytest

from hypergeom.exceptions import PrecisionError
from hypergeom.laurent import Alphabet, LaurentInAlpha, alphabet_for, bar_field, expand_alpha, same
from hypergeom.symbolic import ALPHA, X, FactoredExpr, LinearForm, parse_expr, u


@pytest.fixture
def alphabet() -> Alphabet:
    return alphabet_for(2)


def test_flag_alphabet(alphabet):
    assert [v.name for v in alphabet.variables] == ["x", "a", "u1", "u2", "H1", "k1", "y1", "y2"]


def test_polynomial_expansion_is_exact(alphabet):
    expansion = expand_alpha(parse_expr("(x-a)^2"), -4, alphabet)
    x = alphabet.form(X.form)
    assert expansion.is_exact
    assert same(expansion.coefficient(2), alphabet.scalar(1))
    assert same(expansion.coefficient(1), -2 * x)
    assert same(expansion.coefficient(0), x ** 2)
    assert expansion.top() == 2


def test_geometric_expansion_down_to_floor(alphabet):
    expansion = expand_alpha(parse_expr("(a)^-1*(a-u1+u2)^-1"), -4, alphabet)
    w = alphabet.form(u(1) - u(2))
    assert expansion.floor == -4
    assert same(expansion.coefficient(-2), alphabet.scalar(1))
    assert same(expansion.coefficient(-3), w)
    assert same(expansion.coefficient(-4), w ** 2)
    assert expansion.degree_at_most(-2)
    with pytest.raises(PrecisionError):
        expansion.coefficient(-5)


def test_alpha_free_factors_become_coefficients(alphabet):
    expansion = expand_alpha(parse_expr("(x+u1)^-1*(a)^-3"), -4, alphabet)
    assert expansion.is_exact
    assert same(expansion.coefficient(-3), 1 / alphabet.form(X + u(1)))


def test_uncertifiable_degree_claim(alphabet):
    truncated = LaurentInAlpha.zero(alphabet.field, floor=0)
    with pytest.raises(PrecisionError):
        truncated.degree_at_most(-2)


def test_product_floor(alphabet):
    field = alphabet.field
    exact = LaurentInAlpha(field, {1: field.one})
    truncated = LaurentInAlpha(field, {-1: field.one}, floor=-3)
    product = exact * truncated
    assert product.floor == -2
    assert same(product.coefficient(0), field.one)


def test_bar_flips_odd_powers(alphabet):
    field = alphabet.field
    series = LaurentInAlpha(field, {1: field.one, 2: field.one, -3: field.one})
    assert series.bar() == LaurentInAlpha(field, {1: -field.one, 2: field.one, -3: -field.one})


def test_bar_field_agrees_with_factored_bar(alphabet):
    e = parse_expr("(x-a)*(u1-u2+2a)^-1")
    assert same(bar_field(alphabet.to_field(e), alphabet), alphabet.to_field(e.bar()))


def test_equality_ignores_representation(alphabet):
    field = alphabet.field
    w = alphabet.form(u(1) - u(2))
    left = LaurentInAlpha(field, {0: (w ** 2) / w})
    right = LaurentInAlpha(field, {0: w})
    assert left == right
    assert left - right == LaurentInAlpha.zero(field)


def test_to_poly_rejects_denominators(alphabet):
    with pytest.raises(ValueError):
        alphabet.to_poly(parse_expr("(x)^-1"))
    assert alphabet.involves(alphabet.to_poly(parse_expr("(x+a)")), ALPHA)


def test_pure_alpha_factor_with_positive_exponent(alphabet):
    expansion = expand_alpha(parse_expr("(a)^2*(x+u1)"), -2, alphabet)
    assert expansion.is_exact
    assert list(expansion.terms) == [2]
    assert same(expansion.coefficient(2), alphabet.form(X + u(1)))

    expansion = expand_alpha(parse_expr("(a)^2*(x-a)"), -2, alphabet)
    assert same(expansion.coefficient(3), alphabet.scalar(-1))
    assert same(expansion.coefficient(2), alphabet.form(X.form))


def random_factor(rng: random.Random):
    if rng.random() < 0.25:
        form = ALPHA.form
    else:
        coeffs = {var: rng.randint(-2, 2) for var in (X, ALPHA, u(1), u(2))}
        form = LinearForm.build(Fraction(rng.randint(-3, 3), rng.randint(1, 2)), coeffs)
    return form, rng.choice([-2, -1, 1, 2])


def random_factored(rng: random.Random) -> FactoredExpr:
    factors = [random_factor(rng) for _ in range(rng.randint(1, 3))]
    factors = [(form, e) for form, e in factors if not form.is_constant]
    return FactoredExpr.build(Fraction(rng.randint(1, 5), rng.randint(1, 3)), factors)


@pytest.mark.parametrize("seed", range(6))
def test_expansion_respects_products(alphabet, seed):
    rng = random.Random(seed)
    floor = -4
    for _ in range(20):
        left, right = random_factored(rng), random_factored(rng)
        whole = expand_alpha(left * right, floor, alphabet)
        parts = expand_alpha(left, floor, alphabet) * expand_alpha(right, floor, alphabet)
        lowest = max(f for f in (floor, whole.floor, parts.floor) if f is not None)
        tops = [top for top in (whole.top(), parts.top()) if top is not None]
        for k in range(lowest, max(tops, default=lowest) + 1):
            assert same(whole.coefficient(k), parts.coefficient(k)), (left, right, k)


def test_variables_convert_like_their_forms(alphabet):
    assert alphabet.poly(u(1)) == alphabet.poly(u(1).form)
    assert same(alphabet.form(ALPHA), alphabet.form(ALPHA.form))
