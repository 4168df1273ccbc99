"""Brute-force ground truth, written without the series engine.

Partition enumeration and statistics, colored partition counts, the
pentagonal recurrence modulo a prime, and a naive re-expansion of product
specs using plain dictionaries keyed by rational exponents.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import SpecHasResidualPole
from .qseries import Eta, FourierSeries, Theta
from .ring import EllipticPolynomial

STATISTICS = ("rank", "crank", "colored-residual")


# -- partitions -------------------------------------------------------------------

def enumerate_partitions(n):
    """Yield the partitions of ``n`` as non-increasing lists, each exactly once.

    Order is reverse lexicographic: lower the last part above 1 by one and
    refill the remainder greedily.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        yield []
        return
    a = [n]
    while True:
        yield list(a)
        rem = 0
        while a and a[-1] == 1:
            a.pop()
            rem += 1
        if not a:
            return
        k = a.pop() - 1
        rem += 1
        a.append(k)
        while rem > k:
            a.append(k)
            rem -= k
        if rem:
            a.append(rem)


def rank(parts):
    """Largest part minus number of parts (0 for the empty partition)."""
    return parts[0] - len(parts) if parts else 0


def crank(parts):
    """Largest part if there are no ones, else (#parts larger than the number of ones) - (#ones)."""
    if not parts:
        raise ValueError("crank of the empty partition is undefined")
    ones = parts.count(1)
    if ones == 0:
        return parts[0]
    return sum(1 for p in parts if p > ones) - ones


def _colored_partitions(n, colors):
    """Tuples of ``colors`` partitions whose sizes add up to ``n``."""
    if colors == 1:
        for p in enumerate_partitions(n):
            yield (p,)
        return
    for head in range(n + 1):
        for p in enumerate_partitions(head):
            for rest in _colored_partitions(n - head, colors - 1):
                yield (p,) + rest


def colored_residual(colored):
    """Sum over colours ``j`` of ``j`` times the number of parts of colour ``j``."""
    return sum(j * len(p) for j, p in enumerate(colored))


@dataclass(frozen=True)
class RankTable:
    n: int
    ell: int
    statistic: str
    counts: tuple

    @property
    def total(self):
        return sum(self.counts)

    @property
    def equidistributed(self):
        return len(set(self.counts)) == 1

    def to_json(self):
        return {"n": self.n, "ell": self.ell, "statistic": self.statistic,
                "counts": list(self.counts)}


def rank_table(n, ell, statistic, colors=2):
    """Count partitions of ``n`` by statistic residue mod ``ell``.

    ``colored-residual`` runs over ``colors``-colored partitions; the other two
    statistics over ordinary ones.  The crank of the single partition of 1
    follows the combinatorial definition (value -1).
    """
    if statistic not in STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}; choose from {', '.join(STATISTICS)}")
    counts = [0] * ell
    if statistic == "colored-residual":
        for c in _colored_partitions(n, colors):
            counts[colored_residual(c) % ell] += 1
    else:
        stat = rank if statistic == "rank" else crank
        for p in enumerate_partitions(n):
            if statistic == "crank" and not p:
                counts[0] += 1
                continue
            counts[stat(p) % ell] += 1
    return RankTable(n, ell, statistic, tuple(counts))


def equidistributed(table):
    return table.equidistributed


def _partition_numbers(n):
    p = [1] + [0] * n
    for m in range(1, n + 1):
        for i in range(m, n + 1):
            p[i] += p[i - m]
    return p


def colored_partition_count(k, n):
    """Coefficient of ``q^n`` in ``prod (1 - q^m)^(-k)`` by repeated convolution."""
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    base = _partition_numbers(n)
    acc = base
    for _ in range(k - 1):
        acc = [sum(acc[i] * base[j - i] for i in range(j + 1)) for j in range(n + 1)]
    return acc[n]


def _pentagonal(n):
    """Generalized pentagonal numbers ``<= n`` with their recurrence signs, ascending."""
    out = []
    k = 1
    while k * (3 * k - 1) // 2 <= n:
        s = 1 if k % 2 else -1
        out.append((k * (3 * k - 1) // 2, s))
        if k * (3 * k + 1) // 2 <= n:
            out.append((k * (3 * k + 1) // 2, s))
        k += 1
    return out


def partition_mod_recurrence(n, ell, block=256):
    """``p(n) mod ell`` from Euler's pentagonal recurrence.

    Values are filled block by block: contributions reaching back before the
    current block are added as whole numpy slices, the few short-range ones
    sequentially.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    pent = [(g, s % ell) for g, s in _pentagonal(n)]
    short = [(g, s) for g, s in pent if g < block]
    # int64 holds a block sum of len(pent) products below ell**2; otherwise use Python ints
    dtype = np.int64 if (len(pent) + 1) * ell * ell < 2 ** 62 else object
    p = np.zeros(n + 1, dtype=dtype)
    p[0] = 1 % ell
    for a in range(1, n + 1, block):
        b = min(a + block, n + 1)
        acc = np.zeros(b - a, dtype=dtype)
        for g, s in pent:
            if g >= b:
                break
            lo, hi = max(a, g), min(b, a + g)
            if lo < hi:
                acc[lo - a:hi - a] += s * p[lo - g:hi - g]
        acc %= ell
        vals = acc.tolist()
        for m in range(a, b):
            v = vals[m - a]
            for g, s in short:
                if m - g < a:
                    break
                v += s * vals[m - g - a]
            vals[m - a] = v % ell
        p[a:b] = vals
    return int(p[n])


# -- naive product expansion --------------------------------------------------------

def _bmul(x, y, limit):
    """Product of bivariate dicts ``{(qexp, zexp): int}``, dropping ``qexp >= limit``."""
    out = {}
    for (qa, za), ca in x.items():
        for (qb, zb), cb in y.items():
            qe = qa + qb
            if qe >= limit:
                continue
            key = (qe, za + zb)
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _binomial_factor(k, zexp, e, limit):
    """``(1 - q^k e(zexp z))^e`` as a bivariate dict below ``q^limit``."""
    out = {}
    j = 0
    while k * j < limit:
        if e >= 0:
            if j > e:
                break
            c = comb(e, j) * (-1) ** j
        else:
            c = comb(-e + j - 1, j)
        out[(Fraction(k * j), Fraction(zexp * j))] = c
        j += 1
    return out


def _zmul(x, y):
    out = {}
    for a, ca in x.items():
        for b, cb in y.items():
            out[a + b] = out.get(a + b, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _zdivide(num, den):
    """Long division of Laurent polynomials with rational exponents; remainder must vanish."""
    num = dict(num)
    quot = {}
    top_d = max(den)
    lead = den[top_d]
    low_d = min(den)
    while num:
        top = max(num)
        if top - top_d < min(num) - low_d:
            break
        c = Fraction(num[top], lead)
        if c.denominator != 1:
            break
        shift = top - top_d
        quot[shift] = int(c)
        for e, v in den.items():
            k = e + shift
            num[k] = num.get(k, 0) - int(c) * v
            if num[k] == 0:
                del num[k]
    return quot, num


def _split_factors(spec):
    """(q-exponent shift, pure-z factors [(kind, a, e)], q-factors [(k0, step, zexp, e)])."""
    shift = spec.q_prefactor
    zf, qf = [], []
    for f in spec.named_factors:
        if isinstance(f, Eta):
            shift += Fraction(f.level * f.power, 24)
            qf.append((f.level, f.level, 0, f.power))
        elif isinstance(f, Theta):
            shift += Fraction(f.power, 8)
            zf.append(("theta", f.scale, f.power))
            for b in (0, f.scale, -f.scale):
                qf.append((1, 1, b, f.power))
    for p in spec.pochhammer_factors:
        if p.offset == 0:
            zf.append(("poch", p.shift, p.power))
            qf.append((p.step, p.step, p.shift, p.power))
        else:
            qf.append((p.offset, p.step, p.shift, p.power))
    return shift, zf, qf


def _z_poly(kind, a):
    if kind == "theta":
        h = Fraction(a, 2)
        return {h: 1, -h: -1}
    return {Fraction(0): 1, Fraction(a): -1}


def oracle_expansion(spec, terms):
    """Naive leading-coefficient expansion: ``(pole order, {(qexp, zexp): int})``.

    Exponents are absolute (the q-shift is included).  Only ``q``-exponents
    below ``shift + terms`` are produced.
    """
    shift, zf, qf = _split_factors(spec)
    order = sum(e for _, _, e in zf)
    nu = max(0, -order)
    num = {Fraction(spec.z_prefactor): 1}
    den = {Fraction(0): 1}
    for kind, a, e in zf:
        target = num if e > 0 else den
        for _ in range(abs(e)):
            target = _zmul(target, _z_poly(kind, a))
        if e > 0:
            num = target
        else:
            den = target
    for _ in range(nu):
        num = _zmul(num, {Fraction(1, 2): 1, Fraction(-1, 2): -1})
    quot, rem = _zdivide(num, den)
    if rem:
        raise SpecHasResidualPole(f"{spec} has poles away from the integers")

    series = {(Fraction(0), Fraction(0)): 1}
    for k0, step, zexp, e in qf:
        k = k0
        while k < terms:
            series = _bmul(series, _binomial_factor(k, zexp, e, terms), terms)
            k += step
    out = {}
    for (qe, ze), c in series.items():
        for zq, cq in quot.items():
            key = (qe + shift, ze + zq)
            out[key] = out.get(key, 0) + c * cq
    return nu, {k: v for k, v in out.items() if v}


def oracle_product_coefficients(spec, terms):
    """The naive expansion packaged as a series comparable with the engine's."""
    shift = _split_factors(spec)[0]
    _, coeffs = oracle_expansion(spec, terms)
    denom_q = spec.denom_q
    denom_z = spec.denom_z
    grouped = {}
    for (qe, ze), c in coeffs.items():
        grouped.setdefault(qe, {})[ze] = c
    out = {}
    for qe, zs in grouped.items():
        out[int(qe * denom_q)] = EllipticPolynomial.from_fractions(zs, denom_z).with_denom_exact(denom_z)
    return FourierSeries(out, denom_q, int((shift + terms) * denom_q), denom_z)


def oracle_specialization(spec, terms):
    """``{exponent: c(f; n)}`` from the product with ``z = 0`` substituted directly.

    Each vanishing factor ``e(a z/2) - e(-a z/2)`` contributes ``a`` times the
    basic one, ``1 - e(a z)`` contributes ``-a`` times it; the q-products are
    expanded as ordinary integer series.  Values are Fractions.
    """
    shift, zf, qf = _split_factors(spec)
    order = sum(e for _, _, e in zf)
    if order > 0:
        const = Fraction(0)
    else:
        const = Fraction(1)
        for kind, a, e in zf:
            const *= Fraction(a if kind == "theta" else -a) ** e
    series = [0] * terms
    series[0] = 1
    for k0, step, _, e in qf:
        for k in range(k0, terms, step):
            for _ in range(abs(e)):
                if e > 0:
                    for n in range(terms - 1, k - 1, -1):
                        series[n] -= series[n - k]
                else:
                    for n in range(k, terms):
                        series[n] += series[n - k]
    return {shift + n: const * c for n, c in enumerate(series)}
