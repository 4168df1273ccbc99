"""Congruence detection, explainability, square-class orbits and maximality bounds.

All verdicts are evidence-based: they cover the supported exponents below the
query's ``n_max`` and nothing more.
"""

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional

from .arith import fraction_str, is_prime, ord_p, prime_factors
from .errors import ConsistencyError, InsufficientRange, OutOfRange
from .jacobi import JacobiExpansion, Specialization, _normalize_class, specialize
from .ring import ep_cyclotomic_divides, ep_vanishes_at_ell_torsion

DEFAULT_MIN_TERMS = 10


@dataclass(frozen=True)
class CongruenceQuery:
    ell: int
    M: int
    beta: Fraction
    n_max: Optional[Fraction] = None

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValueError(f"ell must be prime, got {self.ell}")
        if self.M < 1:
            raise ValueError(f"M must be positive, got {self.M}")
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.n_max is not None:
            object.__setattr__(self, "n_max", Fraction(self.n_max))

    def with_beta(self, beta):
        return CongruenceQuery(self.ell, self.M, beta, self.n_max)

    def to_json(self):
        return {
            "ell": self.ell,
            "M": self.M,
            "beta_num": self.beta.numerator,
            "beta_den": self.beta.denominator,
            "n_max": None if self.n_max is None else fraction_str(self.n_max),
        }


def _opt(x):
    return None if x is None else fraction_str(x)


@dataclass
class CongruenceReport:
    query: CongruenceQuery
    holds_plain: bool
    first_counterexample: Optional[Fraction] = None
    explainable: Optional[bool] = None
    failing_n: Optional[Fraction] = None
    vacuous: bool = False
    checked_count: int = 0
    nonzero_count: int = 0
    orbit: list = field(default_factory=list)

    def to_json(self):
        return {
            "query": self.query.to_json(),
            "holds_plain": self.holds_plain,
            "explainable": self.explainable,
            "vacuous": self.vacuous,
            "first_counterexample": _opt(self.first_counterexample),
            "failing_n": _opt(self.failing_n),
            "checked_count": self.checked_count,
            "orbit": [r.to_json() for r in self.orbit],
        }


CSV_FIELDS = ["ell", "M", "beta", "n_max", "holds_plain", "explainable", "vacuous",
              "first_counterexample", "failing_n", "checked_count", "orbit_of"]


def _csv_row(r, orbit_of=""):
    q = r.query
    return {
        "ell": q.ell, "M": q.M, "beta": fraction_str(q.beta), "n_max": _opt(q.n_max) or "",
        "holds_plain": r.holds_plain,
        "explainable": "" if r.explainable is None else r.explainable,
        "vacuous": r.vacuous,
        "first_counterexample": _opt(r.first_counterexample) or "",
        "failing_n": _opt(r.failing_n) or "",
        "checked_count": r.checked_count,
        "orbit_of": orbit_of,
    }


def reports_to_csv(reports):
    """Flatten reports (and their orbit members) into CSV text."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(_csv_row(r))
        for o in r.orbit:
            w.writerow(_csv_row(o, fraction_str(r.query.beta)))
    return buf.getvalue()


# -- evidence ---------------------------------------------------------------------

def _evidence_bound(x, q):
    bound = x.truncation
    if q.n_max is None:
        return bound
    if q.n_max > bound:
        raise OutOfRange(f"n_max {fraction_str(q.n_max)} exceeds the truncation "
                         f"{fraction_str(bound)}")
    return q.n_max


def _points(x, q, min_terms):
    """Exponents checked by ``q``; ``None`` when the progression misses the support coset."""
    if (q.beta - x.support.offset).denominator != 1:
        return None
    bound = _evidence_bound(x, q)
    pts = x.support.restricted(q.M, q.beta).exponents(bound)
    if len(pts) < min_terms:
        raise InsufficientRange(
            f"only {len(pts)} supported exponents of {q.M}Z + {fraction_str(q.beta)} lie below "
            f"{fraction_str(bound)}; need {min_terms}")
    return pts


def _vacuous(q):
    return CongruenceReport(q, holds_plain=True, explainable=False, vacuous=True)


def detect_congruence(f, q, min_terms=DEFAULT_MIN_TERMS):
    """Check ``ell | c(f; n)`` for every supported ``n`` in ``M Z + beta`` below ``n_max``."""
    pts = _points(f, q, min_terms)
    if pts is None:
        r = _vacuous(q)
        r.explainable = None
        return r
    first = None
    nonzero = 0
    for n in pts:
        v = f.coeffs.get(n, 0)
        if v:
            nonzero += 1
        if first is None and v % q.ell:
            first = n
    return CongruenceReport(q, holds_plain=first is None, first_counterexample=first,
                            checked_count=len(pts), nonzero_count=nonzero)


def _coefficient_verdict(c, ell):
    """(Phi_ell divides c, ell divides c at z = 0), with the torsion cross-check."""
    div = ep_cyclotomic_divides(c, ell)
    if div != ep_vanishes_at_ell_torsion(c, ell):
        raise ConsistencyError(f"cyclotomic division and torsion vanishing disagree on {c}")
    plain = c.eval_at_zero() % ell == 0
    if div and not plain:
        raise ConsistencyError(f"Phi_{ell} divides {c} but {ell} does not divide its value at 0")
    return div, plain


def check_explainable(phi, q, min_terms=DEFAULT_MIN_TERMS):
    """Require ``Phi_ell(e(z))`` to divide ``c~(phi; n; z)`` for every checked ``n``.

    The same pass records the plain congruence of the specialization, so the
    report carries both verdicts.  Off-coset progressions are reported as
    vacuous and never count as explainable.
    """
    pts = _points(phi, q, min_terms)
    if pts is None:
        return _vacuous(q)
    failing = first = None
    nonzero = 0
    for n in pts:
        c = phi.series.coefficient(n)
        if c:
            nonzero += 1
        div, plain = _coefficient_verdict(c, q.ell)
        if failing is None and not div:
            failing = n
        if first is None and not plain:
            first = n
    return CongruenceReport(q, holds_plain=first is None, first_counterexample=first,
                            explainable=failing is None, failing_n=failing,
                            checked_count=len(pts), nonzero_count=nonzero)


# -- square classes ------------------------------------------------------------------

def square_class_orbit(M, beta, literal=False):
    """Classes ``u^2 beta mod M`` in ``[0, M)``, ascending.

    ``u`` runs over units modulo ``M*D`` (``D`` the denominator of ``beta``), or
    over all residues coprime to ``M`` when ``literal`` is set.
    """
    beta = Fraction(beta)
    D = beta.denominator
    big = M * D
    b = beta.numerator % big
    coprime_to = M if literal else big
    seen = set()
    for u in range(1, big + 1):
        if gcd(u, coprime_to) == 1:
            seen.add(u * u * b % big)
    return [Fraction(s, D) for s in sorted(seen)]


@dataclass
class OrbitResult:
    base: CongruenceReport
    reports: list
    violations: list
    literal: bool = False

    @property
    def vacuous(self):
        return [r for r in self.reports if r.vacuous]

    def to_json(self):
        out = self.base.to_json()
        out["orbit"] = [r.to_json() for r in self.reports]
        out["literal_coprimality"] = self.literal
        out["vacuous_members"] = [fraction_str(r.query.beta) for r in self.vacuous]
        out["violations"] = [fraction_str(r.query.beta) for r in self.violations]
        return out


def verify_square_class_theorem(phi, q, literal=False, min_terms=DEFAULT_MIN_TERMS, base=None):
    """Check explainability on every class of the square-class orbit of ``q``.

    A non-vacuous orbit member that is not explainable is a violation; since
    the orbit statement is a theorem, a violation points at an engine bug.
    """
    base = base or check_explainable(phi, q, min_terms)
    if not base.explainable:
        raise ValueError(f"{q} is not explainable by this expansion; nothing to propagate")
    reports = []
    for b in square_class_orbit(q.M, q.beta, literal):
        b = _normalize_class(b, q.M, phi.support_offset)
        reports.append(check_explainable(phi, q.with_beta(b), min_terms))
    violations = [r for r in reports if not r.vacuous and not r.explainable]
    base.orbit = reports
    return OrbitResult(base, reports, violations, literal)


# -- maximality ------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeBound:
    p: int
    ord_M: int
    ord_beta: Optional[int]  # None stands for +infinity (beta = 0)
    bound: Optional[int]
    ok: bool

    def to_json(self):
        return {"p": self.p, "ord_M": self.ord_M, "ord_beta": self.ord_beta,
                "bound": self.bound, "ok": self.ok}


@dataclass(frozen=True)
class MaximalityCheck:
    M: int
    beta: Fraction
    ok: bool
    primes: tuple

    @property
    def violating_primes(self):
        return [d.p for d in self.primes if not d.ok]

    def to_json(self):
        return {"M": self.M, "beta": fraction_str(self.beta), "ok": self.ok,
                "primes": [d.to_json() for d in self.primes],
                "violating_primes": self.violating_primes}


def check_maximality_bounds(M, beta):
    """Test ``ord_p(M) <= max(0, ord_p(beta) + 1)`` for odd ``p`` and ``+ 3`` for ``p = 2``."""
    beta = Fraction(beta)
    diags = []
    for p in prime_factors(M):
        om = ord_p(M, p)
        if beta == 0:
            diags.append(PrimeBound(p, om, None, None, True))
            continue
        ob = ord_p(beta, p)
        bound = max(0, ob + (3 if p == 2 else 1))
        diags.append(PrimeBound(p, om, ob, bound, om <= bound))
    return MaximalityCheck(M, beta, all(d.ok for d in diags), tuple(diags))


def contains(outer, inner):
    """``inner`` progression is a subset of ``outer`` (both ``(M, beta)``)."""
    (m, b), (m2, b2) = outer, inner
    return m2 % m == 0 and (Fraction(b2 - b) / m).denominator == 1


def maximal_elements(cells):
    cells = sorted(set(cells))
    return [c for c in cells
            if not any(o != c and contains(o, c) for o in cells)]


@dataclass
class ScanResult:
    ell: int
    M_max: int
    n_max: Fraction
    maximal: list
    certified: list
    bounds: dict

    def to_json(self):
        return {
            "ell": self.ell,
            "M_max": self.M_max,
            "n_max": fraction_str(self.n_max),
            "maximal": [{"M": m, "beta": fraction_str(b)} for m, b in self.maximal],
            "certified": [{"M": m, "beta": fraction_str(b),
                           "bounds": self.bounds[(m, b)].to_json()} for m, b in self.certified],
        }


def _flags(x, ell, bound, verdict, threads):
    pts = x.exponents(bound)
    chunks = [pts[i::threads] for i in range(threads)] if threads > 1 else [pts]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(lambda ch: {n: verdict(n) for n in ch}, chunks))
    out = {}
    for p in parts:
        out.update(p)
    return out


def explain_flags(phi, ell, bound=None, threads=1):
    """Per-exponent ``Phi_ell | c~(phi; n; z)`` flags below ``bound``."""
    return _flags(phi, ell, bound, lambda n: _coefficient_verdict(phi.series.coefficient(n), ell)[0],
                  threads)


def plain_flags(f, ell, bound=None, threads=1):
    return _flags(f, ell, bound, lambda n: f.coeffs.get(n, 0) % ell == 0, threads)


def _holding_cells(flags, offset, M_max, min_terms):
    by_k = {int(n - offset): v for n, v in flags.items()}
    top = max(by_k, default=-1) + 1
    out = []
    for M in range(1, M_max + 1):
        for j in range(M):
            sub = [by_k[k] for k in range(j, top, M) if k in by_k]
            if len(sub) < min_terms:
                raise InsufficientRange(
                    f"only {len(sub)} supported exponents of {M}Z + {fraction_str(offset + j)}; "
                    f"need {min_terms}")
            if all(sub):
                out.append((M, offset + j))
    return out


def scan_maximal_progressions(f, ell, M_max, n_max=None, phi=None,
                              min_terms=DEFAULT_MIN_TERMS, threads=1):
    """Maximal progressions ``M Z + beta`` (``M <= M_max``) carrying a congruence mod ``ell``.

    ``f`` may be ``None`` when ``phi`` is given.  With ``phi`` the explainable
    progressions are computed as well and their maximal elements are returned
    as ``certified``, each with its maximality-bound diagnostics.
    """
    if f is None:
        f = specialize(phi)
    if not is_prime(ell):
        raise ValueError(f"ell must be prime, got {ell}")
    bound = f.truncation if n_max is None else Fraction(n_max)
    if bound > f.truncation:
        raise OutOfRange(f"n_max {fraction_str(bound)} exceeds the truncation")
    plain = _holding_cells(plain_flags(f, ell, bound, threads), f.offset, M_max, min_terms)
    maximal = maximal_elements(plain)
    certified = []
    if phi is not None:
        flags = explain_flags(phi, ell, bound, threads)
        expl = _holding_cells(flags, phi.support_offset, M_max, min_terms)
        plain_set = set(plain)
        bad = [c for c in expl if c not in plain_set]
        if bad:
            raise ConsistencyError(f"explainable but not plainly congruent: {bad}")
        certified = maximal_elements(expl)
    bounds = {c: check_maximality_bounds(*c) for c in certified}
    return ScanResult(ell, M_max, bound, maximal, certified, bounds)
