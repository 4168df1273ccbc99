"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import random
import sys
import time
from fractions import Fraction
from functools import lru_cache

import pytest

from congruence_forge import (
    CongruenceQuery, EllipticPolynomial, check_explainable, check_maximality_bounds,
    detect_congruence, elaborate_spec, ep_cyclotomic_divide, ep_eval_at_zero,
    ep_vanishes_at_ell_torsion, expand, leading_coefficient, oracle_product_coefficients,
    oracle_specialization, parse_spec, partition_mod_recurrence, rank_table,
    scan_maximal_progressions, specialize, verify_square_class_theorem,
)
from congruence_forge.errors import NotDivisible, SpecHasResidualPole
from congruence_forge.qseries import Eta, Pochhammer, ProductSpec, Theta

CRANK = "eta(1)^2 * theta(1)^-1"
SHIFT = Fraction(-1, 24)
RAMANUJAN = [(5, 5, 4 + SHIFT), (7, 7, 5 + SHIFT), (11, 11, 6 + SHIFT)]
PRIMES = [2, 3, 5, 7, 11, 13]
# Jacobi forms whose leading coefficients are dense; their specializations are
# p, p_2, p_3, p_4 and p_4 again (via a double pole).
SWEEP_SPECS = [CRANK, "eta(1) * theta(1)^-1", "theta(1)^-1", "eta(1)^-1 * theta(1)^-1",
               "eta(1)^4 * theta(1)^-2"]
SWEEP_TERMS = 500

RESULTS = []


def record(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


@lru_cache(maxsize=None)
def expansion(text, terms):
    return expand(parse_spec(text), terms)


def test_criterion_01_ramanujan_congruences():
    start = time.perf_counter()
    f = specialize(expand(parse_spec("eta(1)^-1"), 2000))
    reports = [detect_congruence(f, CongruenceQuery(*q)) for q in RAMANUJAN]
    elapsed = time.perf_counter() - start
    ok = (all(r.holds_plain and r.first_counterexample is None for r in reports)
          and len(f.exponents()) >= 2000 and elapsed < 10)
    checked = "/".join(str(r.checked_count) for r in reports)
    record(1, ok, f"p(n) mod 5/7/11 on 2000 terms, checked {checked} exponents, "
                  f"0 counterexamples, {elapsed:.1f}s")


def test_criterion_02_crank_explainability():
    start = time.perf_counter()
    phi = expand(parse_spec(CRANK), SWEEP_TERMS)
    reports = [check_explainable(phi, CongruenceQuery(*q)) for q in RAMANUJAN]
    control = check_explainable(phi, CongruenceQuery(5, 5, 1 + SHIFT))
    elapsed = time.perf_counter() - start
    ok = (all(r.explainable for r in reports) and len(phi.exponents()) >= 300
          and control.explainable is False and not control.vacuous
          and control.failing_n == 1 + SHIFT and elapsed < 60)
    record(2, ok, f"crank explains mod 5/7/11 on {SWEEP_TERMS} terms, control (5,5,23/24) "
                  f"fails at {control.failing_n}, {elapsed:.1f}s")


SPECIALIZATION_SPECS = [
    CRANK, "eta(1)^-1", "eta(1)", "theta(1)", "eta(1) * theta(1)^-1", "theta(1)^-1",
    "eta(1)^-1 * theta(1)^-1", "eta(1)^4 * theta(1)^-2", "theta(2) * theta(1)^-2 * eta(1)^3",
    "poch(0,1;-1) * theta(1)^-1 * eta(2)", "eta(2)^2 * eta(1)^-1 * zeta^(1/3)",
    "poch(1,1;0)^-1 * poch(1,1;1)^-1 * poch(1,1;2)^-1",
]


def test_criterion_03_specialization_identity():
    checked = 0
    bad = []
    for text in SPECIALIZATION_SPECS:
        spec = parse_spec(text)
        exp = expand(spec, 200)
        f = specialize(exp)
        direct = oracle_specialization(spec, 200)
        for n in exp.exponents():
            value = ep_eval_at_zero(leading_coefficient(exp, n))
            checked += 1
            if not (value == f.value(n) == direct[n]):
                bad.append((text, n))
    ok = not bad and len(SPECIALIZATION_SPECS) >= 10 and checked >= 10 * 200
    record(3, ok, f"{len(SPECIALIZATION_SPECS)} specs x 200 coefficients: c~(n) at z=0 equals "
                  f"the specialization and the direct z=0 product ({checked} checks, "
                  f"{len(bad)} mismatches)")


def _random_poly(rng, ell):
    denom = rng.choice([1, 2, 3, 4, 6])
    terms = {rng.randint(-15, 15): rng.randint(-6, 6) for _ in range(rng.randint(0, 8))}
    p = EllipticPolynomial(terms, denom)
    if rng.random() < 0.5:
        p = p * EllipticPolynomial.cyclotomic(ell, denom)
    return p


def test_criterion_04_cyclotomic_equivalence():
    rng = random.Random(20240)
    tallies = {}
    agree = True
    for ell in (2, 3, 5, 7, 13):
        yes = no = 0
        for _ in range(1000):
            p = _random_poly(rng, ell)
            try:
                q = ep_cyclotomic_divide(p, ell)
                divides = q * EllipticPolynomial.cyclotomic(ell, p.denom) == p
            except NotDivisible:
                divides = False
            agree &= divides == ep_vanishes_at_ell_torsion(p, ell)
            yes, no = yes + divides, no + (not divides)
        tallies[ell] = (yes, no)
    ok = agree and all(y and n for y, n in tallies.values())
    detail = ", ".join(f"l={ell}: {y} divisible/{n} not" for ell, (y, n) in tallies.items())
    record(4, ok, f"division succeeds iff torsion values vanish on 1000 polys per prime ({detail})")


def test_criterion_05_triple_product():
    series = elaborate_spec(parse_spec("theta(1)"), 51).series
    expected = {}
    for n in range(-12, 12):
        x = Fraction((2 * n + 1) ** 2, 8)
        if x < series.bound:
            expected[x] = expected.get(x, EllipticPolynomial.zero(2)) \
                + EllipticPolynomial({2 * n + 1: (-1) ** (n % 2)}, 2)
    got = dict(series.items())
    ok = got == expected and series.bound > 50
    record(5, ok, f"theta(1) product equals sum (-1)^n q^((2n+1)^2/8) zeta^((2n+1)/2) "
                  f"through q^50 ({len(expected)} nonzero terms)")


def _random_spec(rng):
    named = []
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.5:
            named.append(Eta(rng.randint(1, 3), rng.randint(-3, 3)))
        else:
            named.append(Theta(rng.choice([1, -1, 2, 3]), rng.choice([-2, -1, 1, 2])))
    poch = []
    for _ in range(rng.randint(0, 2)):
        m = rng.randint(0, 3)
        a = rng.randint(-2, 2) or 1 if m == 0 else rng.randint(-2, 2)
        poch.append(Pochhammer(m, rng.randint(1, 3), a, rng.randint(-2, 2)))
    return ProductSpec(Fraction(rng.randint(-4, 4), rng.choice([1, 2, 3])),
                       Fraction(rng.randint(-2, 2), rng.choice([1, 2, 3])),
                       tuple(poch), tuple(named))


def test_criterion_06_oracle_equivalence():
    rng = random.Random(606)
    specs = [parse_spec(t) for t in (CRANK, "eta(1)", "theta(1)")]
    randoms = 0
    rejected = 0
    while randoms < 20:
        spec = _random_spec(rng)
        try:
            expand(spec, 1)
        except SpecHasResidualPole:
            with pytest.raises(SpecHasResidualPole):
                oracle_product_coefficients(spec, 1)
            rejected += 1
            continue
        specs.append(spec)
        randoms += 1
    bad = [str(s) for s in specs
           if oracle_product_coefficients(s, 30) != expand(s, 30).series]
    ok = not bad and randoms == 20
    record(6, ok, f"naive oracle equals engine through 30 terms on crank, eta, theta and "
                  f"20 random specs ({rejected} residual-pole specs rejected by both)")


def test_criterion_07_atkin_obrien():
    start = time.perf_counter()
    value = partition_mod_recurrence(111247, 13)
    elapsed = time.perf_counter() - start
    record(7, value == 0 and elapsed < 60, f"p(111247) mod 13 = {value}, {elapsed:.1f}s")


@lru_cache(maxsize=None)
def established_cells():
    """All non-trivially explainable (spec, ell, M, beta) cells of the sweep family."""
    from congruence_forge.congruence import _holding_cells, explain_flags
    cells = []
    for text in SWEEP_SPECS:
        phi = expansion(text, SWEEP_TERMS)
        for ell in PRIMES:
            flags = explain_flags(phi, ell)
            for M, beta in _holding_cells(flags, phi.support_offset, 30, 10):
                cells.append((text, ell, M, beta))
    return cells


def test_criterion_08_square_class_theorem():
    rng = random.Random(8)
    candidates = established_cells()
    sample = rng.sample(candidates, min(60, len(candidates)))
    established = violations = vacuous = 0
    for text, ell, M, beta in sample:
        phi = expansion(text, SWEEP_TERMS)
        base = check_explainable(phi, CongruenceQuery(ell, M, beta))
        if not base.explainable or base.nonzero_count == 0:
            continue
        established += 1
        for literal in (False, True):
            res = verify_square_class_theorem(phi, CongruenceQuery(ell, M, beta), literal,
                                              base=base)
            violations += len(res.violations)
            vacuous += len(res.vacuous)
    specs = len({c[0] for c in sample})
    ok = established >= 50 and violations == 0
    record(8, ok, f"{established} explainable cells sampled from {len(candidates)} over {specs} "
                  f"specs, l<=13, M<=30: {violations} non-vacuous violations "
                  f"({vacuous} vacuous orbit members in literal mode)")


def test_criterion_09_maximality_bounds():
    certified = failures = 0
    found = []
    for text in SWEEP_SPECS:
        phi = expansion(text, SWEEP_TERMS)
        for ell in PRIMES:
            res = scan_maximal_progressions(None, ell, 30, phi=phi)
            for cell in res.certified:
                certified += 1
                if not check_maximality_bounds(*cell).ok:
                    failures += 1
                found.append(f"{cell[0]}Z+{cell[1]}")
    ok = certified > 0 and failures == 0
    record(9, ok, f"{certified} certified maximal progressions (M_max=30, {SWEEP_TERMS} terms) "
                  f"all satisfy the ord bounds: {', '.join(found)}")


def test_criterion_10_stanton_bridge():
    phi = expansion(CRANK, SWEEP_TERMS)
    cases = {5: [4, 9, 14, 19, 24], 7: [5, 12, 19], 11: [6, 17]}
    mismatches = []
    agreed = 0
    for ell, ns in cases.items():
        base = check_explainable(phi, CongruenceQuery(ell, ell, ns[0] + SHIFT))
        for n in ns + [k for k in range(31) if k != 1]:
            c = leading_coefficient(phi, n + SHIFT)
            explains = ep_vanishes_at_ell_torsion(c, ell)
            equi = rank_table(n, ell, "crank").equidistributed
            if explains != equi or (n in ns and not (equi and base.explainable)):
                mismatches.append((ell, n))
            agreed += 1
    record(10, not mismatches,
           f"crank equidistribution matches cyclotomic divisibility at l=5 n=4..24, "
           f"l=7 n=5,12,19, l=11 n=6,17 and controls n<=30 except 1 "
           f"({agreed} comparisons, {len(mismatches)} mismatches)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
