from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from congruence_forge import (
    CongruenceQuery, Specialization, check_explainable, check_maximality_bounds,
    detect_congruence, expand, parse_spec, scan_maximal_progressions, specialize,
    square_class_orbit, verify_square_class_theorem,
)
from congruence_forge.congruence import contains, maximal_elements, reports_to_csv
from congruence_forge.errors import InsufficientRange, OutOfRange

from conftest import beta


def test_query_validation():
    with pytest.raises(ValueError):
        CongruenceQuery(4, 5, 0)
    with pytest.raises(ValueError):
        CongruenceQuery(5, 0, 0)


def test_detect_ramanujan(partitions_2000):
    for ell, k in ((5, 4), (7, 5), (11, 6)):
        r = detect_congruence(partitions_2000, CongruenceQuery(ell, ell, beta(k)))
        assert r.holds_plain and r.first_counterexample is None
        assert r.checked_count == len(range(k, 2000, ell))


def test_detect_counterexample(partitions_2000):
    r = detect_congruence(partitions_2000, CongruenceQuery(5, 5, beta(1)))
    assert not r.holds_plain and r.first_counterexample == beta(1)


def test_detect_respects_n_max(partitions_2000):
    r = detect_congruence(partitions_2000, CongruenceQuery(5, 5, beta(4), beta(100)))
    assert r.checked_count == 20
    with pytest.raises(OutOfRange):
        detect_congruence(partitions_2000, CongruenceQuery(5, 5, beta(4), 5000))


def test_detect_insufficient_and_vacuous():
    f = specialize(expand(parse_spec("eta(1)^-1"), 40))
    with pytest.raises(InsufficientRange):
        detect_congruence(f, CongruenceQuery(5, 5, beta(4)))
    r = detect_congruence(f, CongruenceQuery(5, 5, beta(4)), min_terms=8)
    assert r.checked_count == 8
    v = detect_congruence(f, CongruenceQuery(5, 5, Fraction(1, 3)))
    assert v.vacuous and v.holds_plain and v.checked_count == 0


def test_explainable_crank(crank_500):
    for ell, k in ((5, 4), (7, 5), (11, 6)):
        r = check_explainable(crank_500, CongruenceQuery(ell, ell, beta(k)))
        assert r.explainable and r.holds_plain and not r.vacuous
    r = check_explainable(crank_500, CongruenceQuery(5, 5, beta(0)))
    assert r.explainable is False and r.failing_n == beta(0)


def test_explainable_implies_plain(crank_500):
    for ell in (2, 3, 5, 7):
        for M in (1, ell, 2 * ell):
            for j in range(M):
                r = check_explainable(crank_500, CongruenceQuery(ell, M, beta(j)))
                if r.explainable:
                    assert r.holds_plain


def test_report_json_schema(crank_500):
    r = check_explainable(crank_500, CongruenceQuery(5, 5, beta(4)))
    j = r.to_json()
    assert set(j) == {"query", "holds_plain", "explainable", "vacuous", "first_counterexample",
                      "failing_n", "checked_count", "orbit"}
    assert j["query"] == {"ell": 5, "M": 5, "beta_num": 95, "beta_den": 24, "n_max": None}
    text = reports_to_csv([r])
    assert text.splitlines()[1].startswith("5,5,95/24,,True,True,False")


def test_square_class_orbit_examples():
    assert square_class_orbit(13, 1) == [1, 3, 4, 9, 10, 12]
    assert square_class_orbit(5, Fraction(95, 24)) == [Fraction(95, 24)]
    assert square_class_orbit(7, 0) == [0]
    literal = square_class_orbit(5, Fraction(95, 24), literal=True)
    assert Fraction(95, 24) in literal and len(literal) > 1


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 30), st.integers(-60, 60), st.sampled_from([1, 2, 3, 8, 24]),
       st.booleans())
def test_orbit_closed_under_unit_squares(M, num, den, literal):
    b = Fraction(num, den)
    orbit = square_class_orbit(M, b, literal)
    D = b.denominator
    assert all(0 <= x < M for x in orbit) and orbit == sorted(orbit)
    modulus = M if literal else M * D
    for u in range(1, M * D + 1):
        if gcd(u, modulus) == 1:
            for x in orbit:
                y = u * u * x
                assert y - (y // M) * M in orbit


def test_orbit_theorem_crank(crank_500):
    res = verify_square_class_theorem(crank_500, CongruenceQuery(5, 5, beta(4)))
    assert not res.violations and all(r.explainable for r in res.reports)
    res = verify_square_class_theorem(crank_500, CongruenceQuery(7, 7, beta(5)))
    assert not res.violations and all(r.explainable for r in res.reports)


def test_orbit_literal_mode_is_vacuous_off_coset(crank_500):
    res = verify_square_class_theorem(crank_500, CongruenceQuery(5, 5, beta(4)), literal=True)
    assert not res.violations
    assert res.vacuous and all(not r.explainable for r in res.vacuous)


def test_orbit_requires_explainable_base(crank_500):
    with pytest.raises(ValueError):
        verify_square_class_theorem(crank_500, CongruenceQuery(5, 5, beta(0)))


def test_maximality_bounds():
    r = check_maximality_bounds(125, 99)
    assert not r.ok and r.violating_primes == [5]
    assert check_maximality_bounds(8, 1).ok
    assert not check_maximality_bounds(16, 1).ok
    assert check_maximality_bounds(1, Fraction(7, 3)).ok
    assert check_maximality_bounds(625, 0).ok
    assert check_maximality_bounds(5, Fraction(95, 24)).ok
    # ord_2(5/6) = -1 allows 2^2 at most
    assert check_maximality_bounds(4, Fraction(5, 6)).ok
    assert not check_maximality_bounds(8, Fraction(5, 6)).ok


def test_containment():
    assert contains((5, Fraction(95, 24)), (10, Fraction(215, 24)))
    assert not contains((10, Fraction(95, 24)), (5, Fraction(95, 24)))
    assert maximal_elements([(10, 3), (5, 3), (7, 1)]) == [(5, 3), (7, 1)]


def test_scan_partitions(partitions_2000):
    res = scan_maximal_progressions(partitions_2000, 5, 30)
    assert (5, beta(4)) in res.maximal
    assert not any(m == 25 for m, _ in res.maximal)
    assert scan_maximal_progressions(partitions_2000, 3, 10).maximal == []


def test_scan_zero_series():
    f = Specialization.from_values([0] * 50, Fraction(1, 8))
    res = scan_maximal_progressions(f, 7, 4)
    assert res.maximal == [(1, Fraction(1, 8))]


def test_scan_certified_crank(crank_500):
    res = scan_maximal_progressions(None, 7, 30, phi=crank_500, threads=3)
    assert res.certified == [(7, beta(5))]
    assert res.bounds[(7, beta(5))].ok
    assert res.maximal == [(7, beta(5))]


def test_scan_insufficient(partitions_2000):
    f = specialize(expand(parse_spec("eta(1)^-1"), 100))
    with pytest.raises(InsufficientRange):
        scan_maximal_progressions(f, 5, 30, min_terms=10)
