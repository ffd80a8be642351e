"""
Tests for I-data ingestion, B-series assembly, the Euler-series condition
and the mirror transform (real n=2 data and synthetic round trips).
"""

import json
from pathlib import Path

import pytest

from hypergeom.exceptions import (
    DegreeBoundError,
    IDataError,
    MissingDegreeError,
    MissingFixedPointError,
    NonNormalizableError,
)
from hypergeom.flag_geometry import MultiDegree, fixed_points
from hypergeom.laurent import LaurentInAlpha, alphabet_for, same
from hypergeom.models import CheckStatus
from hypergeom.series import (
    SeriesCoefficient,
    apply_mirror_transform,
    assemble_B,
    euler_series_check,
    fl2_idata,
    ingest_I,
    mirror_transform,
    normalized,
    omega_class,
    perturb,
    reapply_is_trivial,
    synthetic_round_trip,
    write_idata,
    zeta_monomials,
)
from hypergeom.symbolic import X, FactoredExpr, parse_expr, render_expr

FIXTURES = sorted((Path(__file__).parent / "data").glob("*.json"))

ZERO = MultiDegree.of(0)
ONE = MultiDegree.of(1)
TWO = MultiDegree.of(2)


def write_document(tmp_path, entries, n=2):
    path = tmp_path / "idata.json"
    path.write_text(json.dumps({"n": n, "entries": entries}), encoding="utf-8")
    return path


def entry(d, restrictions, **extra):
    return {"d": d, "restrictions": restrictions, "provenance": "test", **extra}


UNIT = entry([0], {"12": "1", "21": "1"})


# --- ingestion ---------------------------------------------------------------


def test_fixture_matches_closed_form(fl2_idata_path):
    idata = ingest_I(fl2_idata_path)
    expected = fl2_idata(4)
    assert list(idata) == [MultiDegree.of(d) for d in range(5)]
    for d, coefficient in idata.items():
        assert coefficient.provenance
        for p in fixed_points(2):
            assert coefficient.value[p] == expected[d].value[p]


def test_fixture_entries_meet_degree_bound(fl2_idata_path):
    for d, coefficient in ingest_I(fl2_idata_path).items():
        for e in coefficient.value.restrictions.values():
            assert e.alpha_degree() == -2 * d.entries[0]


@pytest.mark.parametrize("path", FIXTURES, ids=lambda path: path.name)
def test_fixture_restrictions_survive_rendering(path):
    document = json.loads(path.read_text())
    for item in document["entries"]:
        for text in item["restrictions"].values():
            parsed = parse_expr(text)
            assert parse_expr(render_expr(parsed)) == parsed, text


def test_degree_bound_violation(tmp_path):
    path = write_document(tmp_path, [UNIT, entry([1], {"12": "(a)^-1", "21": "(a)^-1"})])
    with pytest.raises(DegreeBoundError):
        ingest_I(path)


def test_missing_fixed_point(tmp_path):
    path = write_document(tmp_path, [entry([0], {"12": "1"})])
    with pytest.raises(MissingFixedPointError):
        ingest_I(path)


@pytest.mark.parametrize("entries", [
    [{"d": [0], "restrictions": {"12": "1", "21": "1"}}],
    [UNIT, UNIT],
    [entry([0], {"12": "1", "21": "1", "13": "1"})],
    [entry([0], {"12": "1", "21": "(x"})],
    [entry([0], {"12": "(y1)", "21": "1"})],
    [entry([-1], {"12": "1", "21": "1"})],
    [entry([0, 0], {"12": "1", "21": "1"})],
    [entry([0], {"12": "2", "21": "1"})],
])
def test_malformed_documents(tmp_path, entries):
    with pytest.raises(IDataError):
        ingest_I(write_document(tmp_path, entries))


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(IDataError):
        ingest_I(path)


def test_polynomial_unit_entry_passes_gkm(tmp_path):
    idata = ingest_I(write_document(tmp_path, [entry([0], {"12": "1", "21": "1"}, polynomial=True)]))
    assert idata[ZERO].value.polynomial


def test_write_then_ingest(tmp_path):
    path = tmp_path / "written.json"
    write_idata(path, 2, fl2_idata(2))
    idata = ingest_I(path)
    assert idata[TWO].value[fixed_points(2)[0]] == fl2_idata(2)[TWO].value[fixed_points(2)[0]]


# --- B-series ----------------------------------------------------------------


def test_b0_is_omega():
    B = assemble_B(2, fl2_idata(1), ONE)
    omega = omega_class(2)
    for p in fixed_points(2):
        assert B[ZERO].value[p] == omega[p]


def test_b1_restriction():
    B = assemble_B(2, fl2_idata(1), ONE)
    identity = fixed_points(2)[0]
    assert B[ONE].value[identity] == parse_expr("-1*(x+u1-u2)*(x-a)*(x+u1-u2-a)*(a)^-1*(u1-u2-a)^-1")


def test_assembly_needs_every_degree():
    with pytest.raises(MissingDegreeError):
        assemble_B(2, fl2_idata(1), TWO)


# --- Euler-series condition ----------------------------------------------------


def test_zeta_monomials():
    assert zeta_monomials(2, 2) == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    assert zeta_monomials(1, 0) == [(0,)]


def test_degree_zero_always_passes():
    for n in (2, 3):
        zero = MultiDegree.zero(n - 1)
        omega = omega_class(n)
        B = {zero: SeriesCoefficient(zero, omega)}
        assert euler_series_check(B, omega, zero, 2).passed


def test_fl2_euler_series():
    cutoff = MultiDegree.of(3)
    B = assemble_B(2, fl2_idata(3), cutoff)
    report = euler_series_check(B, omega_class(2), cutoff, 2)
    assert len(report.cases) == 12
    assert report.passed


def test_perturbed_series_fails():
    alphabet = alphabet_for(2)
    B = assemble_B(2, fl2_idata(1), ONE)
    B[ONE] = perturb(B[ONE], fixed_points(2)[0], 1, alphabet)
    report = euler_series_check(B, omega_class(2), ONE, 0)
    failed = [case for case in report.cases if case.status == CheckStatus.FAIL]
    assert failed and failed[0].d == [1]
    assert "u1" in failed[0].denominator


# --- mirror transform ------------------------------------------------------------


def omega_times(alphabet, per_point_terms):
    omega = omega_class(2)
    return {
        p: LaurentInAlpha(alphabet.field, {k: c * alphabet.to_field(omega[p]) for k, c in per_point_terms(p).items()})
        for p in fixed_points(2)
    }


def test_mirror_transform_of_fl2_data():
    alphabet = alphabet_for(2)
    omega = omega_class(2)
    B = assemble_B(2, fl2_idata(2), TWO)
    data, A = mirror_transform(B, omega, TWO)
    assert same(data.f0[ONE], alphabet.scalar(-1))
    assert same(data.f1[ONE], 2 * alphabet.form(X.form))
    assert not data.g[ONE][0]
    assert normalized(A)
    assert reapply_is_trivial(A, omega, TWO)


def test_normalized_input_is_left_alone():
    alphabet = alphabet_for(2)
    one = alphabet.field.one
    B = {
        ZERO: omega_times(alphabet, lambda p: {0: one}),
        ONE: omega_times(alphabet, lambda p: {-2: one}),
        TWO: omega_times(alphabet, lambda p: {-3: one}),
    }
    data, A = mirror_transform(B, omega_class(2), TWO)
    assert data.is_trivial()
    assert all(A[d][p] == B[d][p] for d in B for p in fixed_points(2))


def test_single_degree_linear_solve():
    alphabet = alphabet_for(2)
    one = alphabet.field.one
    x = alphabet.form(X.form)

    def b1(p):
        s = alphabet.form(p.partial_sum(1))
        return {0: 3 * one, -1: 5 * x + 7 * s, -2: one}

    B = {ZERO: omega_times(alphabet, lambda p: {0: one}), ONE: omega_times(alphabet, b1)}
    data, A = mirror_transform(B, omega_class(2), ONE)
    assert same(data.f0[ONE], alphabet.scalar(-3))
    assert same(data.f1[ONE], -5 * x)
    assert same(data.g[ONE][0], alphabet.scalar(-7))
    assert A[ONE] == omega_times(alphabet, lambda p: {-2: one})


def test_point_dependent_scalar_is_not_normalizable():
    alphabet = alphabet_for(2)
    one = alphabet.field.one
    identity = fixed_points(2)[0]
    B = {
        ZERO: omega_times(alphabet, lambda p: {0: one}),
        ONE: omega_times(alphabet, lambda p: {0: one if p == identity else 2 * one}),
    }
    with pytest.raises(NonNormalizableError) as info:
        mirror_transform(B, omega_class(2), ONE)
    assert info.value.level == 0


def test_positive_alpha_power_is_not_normalizable():
    alphabet = alphabet_for(2)
    one = alphabet.field.one
    B = {
        ZERO: omega_times(alphabet, lambda p: {0: one}),
        ONE: omega_times(alphabet, lambda p: {1: one}),
    }
    with pytest.raises(NonNormalizableError) as info:
        mirror_transform(B, omega_class(2), ONE)
    assert info.value.level == 1


def test_b0_must_be_omega():
    alphabet = alphabet_for(2)
    one = alphabet.field.one
    B = {ZERO: omega_times(alphabet, lambda p: {0: 2 * one}), ONE: omega_times(alphabet, lambda p: {-2: one})}
    with pytest.raises(NonNormalizableError):
        mirror_transform(B, omega_class(2), ONE)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_synthetic_round_trip_fl2(seed):
    cutoff = MultiDegree.of(3)
    trip = synthetic_round_trip(2, cutoff, seed)
    assert trip.data_recovered
    assert trip.series_recovered
    assert normalized(trip.A)
    assert reapply_is_trivial(trip.A, omega_class(2), cutoff)


def test_inverse_transform_reproduces_input():
    omega = omega_class(2)
    B = assemble_B(2, fl2_idata(2), TWO)
    data, A = mirror_transform(B, omega, TWO)
    again = apply_mirror_transform(A, data, TWO)
    data_again, A_again = mirror_transform(again, omega, TWO)
    assert data.agrees_with(data_again)


@pytest.mark.slow
def test_synthetic_round_trip_fl3():
    cutoff = MultiDegree.of(1, 1)
    trip = synthetic_round_trip(3, cutoff, seed=11)
    assert trip.data_recovered and trip.series_recovered
