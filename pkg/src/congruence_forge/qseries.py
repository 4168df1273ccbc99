"""Truncated q-series with elliptic-polynomial coefficients and product specs.

Exponents of ``q = e(tau)`` live on the lattice ``(1/denom_q) Z`` and are stored
as integer keys.  A series only knows coefficients for keys strictly below its
``truncation``; every operation documents the bound of its result.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import NamedTuple, Optional

from .arith import fraction_str, lcm
from .errors import NonUnitLeadingTerm, NotDivisible, SemanticError, SpecHasResidualPole
from .ring import EllipticPolynomial, ep_divmod


# -- product specs -------------------------------------------------------------

@dataclass(frozen=True)
class Pochhammer:
    """``prod_{n>=0} (1 - q**(offset + step*n) * e(shift*z)) ** power``."""

    offset: int
    step: int
    shift: int
    power: int = 1

    def __post_init__(self):
        if self.offset < 0:
            raise SemanticError(f"Pochhammer offset must be >= 0, got {self.offset}")
        if self.step < 1:
            raise SemanticError(f"Pochhammer step must be >= 1, got {self.step}")
        if self.offset == 0 and self.shift == 0:
            raise SemanticError("poch(0,d;0) vanishes identically (its n=0 factor is 1 - 1)")


@dataclass(frozen=True)
class Eta:
    """Dedekind eta at ``level * tau``, raised to ``power``."""

    level: int
    power: int = 1

    def __post_init__(self):
        if self.level < 1:
            raise SemanticError(f"eta level must be >= 1, got {self.level}")


@dataclass(frozen=True)
class Theta:
    """Odd Jacobi theta function ``theta(tau, scale*z)`` raised to ``power``."""

    scale: int
    power: int = 1

    def __post_init__(self):
        if self.scale == 0:
            raise SemanticError("theta(0) vanishes identically")


@dataclass(frozen=True)
class ProductSpec:
    q_prefactor: Fraction = Fraction(0)
    z_prefactor: Fraction = Fraction(0)
    pochhammer_factors: tuple = ()
    named_factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "q_prefactor", Fraction(self.q_prefactor))
        object.__setattr__(self, "z_prefactor", Fraction(self.z_prefactor))
        object.__setattr__(self, "pochhammer_factors", tuple(self.pochhammer_factors))
        object.__setattr__(self, "named_factors", tuple(self.named_factors))
        for f in self.named_factors:
            if not isinstance(f, (Eta, Theta)):
                raise TypeError(f"named factor must be Eta or Theta, got {f!r}")

    @property
    def q_shift(self):
        """Total rational q-exponent contributed by prefactors."""
        s = self.q_prefactor
        for f in self.named_factors:
            if isinstance(f, Eta):
                s += Fraction(f.level * f.power, 24)
            else:
                s += Fraction(f.power, 8)
        return s

    @property
    def denom_q(self):
        dens = [self.q_prefactor.denominator]
        if any(isinstance(f, Eta) for f in self.named_factors):
            dens.append(24)
        if any(isinstance(f, Theta) for f in self.named_factors):
            dens.append(8)
        return lcm(*dens)

    @property
    def denom_z(self):
        return lcm(2, self.z_prefactor.denominator)

    @property
    def weight(self):
        """Weight by the usual eta/theta tally; None if raw Pochhammer factors occur."""
        if self.pochhammer_factors:
            return None
        return sum((Fraction(f.power, 2) for f in self.named_factors), Fraction(0))

    @property
    def index(self):
        if self.pochhammer_factors:
            return None
        return sum((Fraction(f.power * f.scale ** 2, 2) for f in self.named_factors
                    if isinstance(f, Theta)), Fraction(0))

    def __str__(self):
        from .dsl import format_spec
        return format_spec(self)


# -- Fourier series ---------------------------------------------------------------

class FourierSeries:
    """Truncated series ``sum_k c_k q**(k/denom_q)`` with Laurent coefficients in zeta."""

    __slots__ = ("_terms", "denom_q", "truncation", "denom_z")

    def __init__(self, terms, denom_q=1, truncation=0, denom_z=None):
        self.denom_q = int(denom_q)
        self.truncation = int(truncation)
        clean = {}
        for k, c in terms.items():
            if isinstance(c, int):
                c = EllipticPolynomial.monomial(0, c)
            if c and k < self.truncation:
                clean[int(k)] = c
        self._terms = clean
        if denom_z is None:
            denom_z = lcm(1, *(c.denom for c in clean.values()))
        self.denom_z = denom_z

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def valuation(self):
        return min(self._terms) if self._terms else None

    @property
    def bound(self):
        """Truncation as a rational exponent."""
        return Fraction(self.truncation, self.denom_q)

    def is_zero(self):
        return not self._terms

    def key_of(self, n):
        k = Fraction(n) * self.denom_q
        return int(k) if k.denominator == 1 else None

    def coefficient(self, n):
        from .errors import OutOfRange
        if Fraction(n) >= self.bound:
            raise OutOfRange(f"exponent {fraction_str(n)} is not below truncation {fraction_str(self.bound)}")
        k = self.key_of(n)
        if k is None or k not in self._terms:
            return EllipticPolynomial.zero(self.denom_z)
        return self._terms[k]

    def items(self):
        """Sorted ``(Fraction exponent, EllipticPolynomial)`` pairs."""
        return [(Fraction(k, self.denom_q), self._terms[k]) for k in sorted(self._terms)]

    def with_denom_q(self, denom_q):
        if denom_q % self.denom_q:
            raise ValueError(f"{denom_q} is not a multiple of {self.denom_q}")
        f = denom_q // self.denom_q
        return FourierSeries({k * f: c for k, c in self._terms.items()}, denom_q,
                             self.truncation * f, self.denom_z)

    def _unify(self, other):
        d = lcm(self.denom_q, other.denom_q)
        return self.with_denom_q(d), other.with_denom_q(d)

    def __eq__(self, other):
        if not isinstance(other, FourierSeries):
            return NotImplemented
        a, b = self._unify(other)
        return a.truncation == b.truncation and a._terms == b._terms

    def __add__(self, other):
        return fs_add(self, other)

    def __mul__(self, other):
        return fs_mul(self, other)

    def __repr__(self):
        head = ", ".join(f"q^({fraction_str(n)})*({c})" for n, c in self.items()[:4])
        more = ", ..." if len(self._terms) > 4 else ""
        return f"FourierSeries([{head}{more}] + O(q^({fraction_str(self.bound)})))"

    def to_json(self):
        return [
            {"num": k, "den": self.denom_q,
             "coeff": [{"zexp": e, "zden": c.denom, "int": v} for e, v in c.items()]}
            for k, c in sorted(self._terms.items())
        ]

    @classmethod
    def from_json(cls, data, truncation, denom_q=None):
        denom_q = denom_q or lcm(1, *(t["den"] for t in data))
        terms = {}
        for t in data:
            key = Fraction(t["num"], t["den"]) * denom_q
            zden = lcm(1, *(c["zden"] for c in t["coeff"]))
            poly = EllipticPolynomial.zero(zden)
            for c in t["coeff"]:
                poly = poly + EllipticPolynomial.monomial(c["zexp"], c["int"], c["zden"])
            terms[int(key)] = poly
        return cls(terms, denom_q, truncation)


def fs_add(a, b):
    """Sum, known below the smaller of the two truncations."""
    a, b = a._unify(b)
    out = dict(a.terms)
    for k, c in b.terms.items():
        out[k] = out[k] + c if k in out else c
    return FourierSeries(out, a.denom_q, min(a.truncation, b.truncation))


def fs_scale(a, poly):
    """Multiply every coefficient by a Laurent polynomial (truncation unchanged)."""
    return FourierSeries({k: c * poly for k, c in a.terms.items()}, a.denom_q, a.truncation)


def fs_shift(a, exponent):
    """Multiply by ``q**exponent``; the truncation moves along."""
    exponent = Fraction(exponent)
    d = lcm(a.denom_q, exponent.denominator)
    a = a.with_denom_q(d)
    s = int(exponent * d)
    return FourierSeries({k + s: c for k, c in a.terms.items()}, d, a.truncation + s, a.denom_z)


def fs_mul(a, b):
    """Truncated product.

    A factor known below ``B_a`` with valuation ``v_a`` times one known below
    ``B_b`` with valuation ``v_b`` is known below ``min(B_a + v_b, B_b + v_a)``.
    """
    a, b = a._unify(b)
    va = a.valuation if a.valuation is not None else a.truncation
    vb = b.valuation if b.valuation is not None else b.truncation
    bound = min(a.truncation + vb, b.truncation + va)
    out = {}
    for kb, cb in b.terms.items():
        for ka, ca in a.terms.items():
            k = ka + kb
            if k >= bound:
                continue
            prod = ca * cb
            out[k] = out[k] + prod if k in out else prod
    return FourierSeries(out, a.denom_q, bound)


def fs_invert(a):
    """Multiplicative inverse.

    The lowest coefficient must be a unit monomial ``+-zeta**k``.  For input
    with valuation ``v`` known below ``B`` the inverse has valuation ``-v`` and
    is known below ``B - 2v``.
    """
    if a.is_zero():
        raise NonUnitLeadingTerm("cannot invert the zero series")
    v = a.valuation
    lead = a.terms[v]
    if not lead.is_unit_monomial():
        raise NonUnitLeadingTerm(
            f"lowest coefficient {lead} is not +-zeta^k; route z-poles through pole bookkeeping")
    (e, c), = lead.terms.items()
    lead_inv = EllipticPolynomial.monomial(-e, c, lead.denom)
    rest = sorted((k - v, poly) for k, poly in a.terms.items() if k != v)
    length = a.truncation - v
    out = [None] * length
    out[0] = lead_inv
    for j in range(1, length):
        acc = None
        for i, poly in rest:
            if i > j:
                break
            prev = out[j - i]
            if prev:
                term = poly * prev
                acc = term if acc is None else acc + term
        out[j] = -(acc * lead_inv) if acc is not None else None
    terms = {j - v: c for j, c in enumerate(out) if c}
    return FourierSeries(terms, a.denom_q, a.truncation - 2 * v, a.denom_z)


# -- product kernel ------------------------------------------------------------------

def _factor_steps(factors, n_terms):
    """Yield ``(k, a, e)`` for each single binomial ``(1 - q^k zeta^a)^e`` with ``k < n_terms``."""
    for k0, step, a, e in factors:
        for k in range(k0, n_terms, step):
            yield k, a, e


def _scalar_kernel(factors, n_terms, majorant=False):
    rows = [0] * n_terms
    rows[0] = 1
    sign = 1 if majorant else -1
    for k, _, e in _factor_steps(factors, n_terms):
        for _ in range(abs(e)):
            if e > 0:
                for n in range(n_terms - 1, k - 1, -1):
                    src = rows[n - k]
                    if src:
                        rows[n] += sign * src
            else:
                for n in range(k, n_terms):
                    src = rows[n - k]
                    if src:
                        rows[n] += src
    return rows


def _merge(factors):
    merged = {}
    for k0, step, a, e in factors:
        merged[(k0, step, a)] = merged.get((k0, step, a), 0) + e
    return [(k0, step, a, e) for (k0, step, a), e in merged.items() if e]


def expand_products(factors, n_terms):
    """Rows ``{z-exponent: coeff}`` of ``prod (1 - q^k e(a z))^e`` for ``q^0 .. q^(n_terms-1)``.

    ``factors`` holds ``(first, step, a, e)`` with ``first >= 1``; the product
    runs over ``k = first + step*n``.  Each row is packed into one integer
    with fixed-width signed slots, so multiplying by ``e(a z)`` is a shift.
    Row ``n`` is stored multiplied by ``e(r*n*z)`` with ``r`` large enough
    that every stored exponent is non-negative.
    """
    if n_terms <= 0:
        return []
    factors = _merge(factors)
    if any(k0 < 1 for k0, _, _, _ in factors):
        raise ValueError("kernel factors need a positive first q-exponent")
    if all(a == 0 for _, _, a, _ in factors):
        return [{0: c} if c else {} for c in _scalar_kernel(factors, n_terms)]

    pos = max((Fraction(a, k0) for k0, _, a, _ in factors if a > 0), default=Fraction(0))
    r = max((-(a // k0) for k0, _, a, _ in factors if a < 0), default=0)
    bound = max(_scalar_kernel(factors, n_terms, majorant=True))
    width = -(-(bound.bit_length() + 2) // 8) * 8
    rows = [0] * n_terms
    rows[0] = 1
    for k, a, e in _factor_steps(factors, n_terms):
        sh = (a + r * k) * width
        for _ in range(abs(e)):
            if e > 0:
                for n in range(n_terms - 1, k - 1, -1):
                    src = rows[n - k]
                    if src:
                        rows[n] -= src << sh
            else:
                for n in range(k, n_terms):
                    src = rows[n - k]
                    if src:
                        rows[n] += src << sh

    half = 1 << (width - 1)
    nbytes = width // 8
    max_slots = int(pos * (n_terms - 1)) + r * (n_terms - 1) + 1
    bias_max = 0
    for _ in range(max_slots):
        bias_max = (bias_max << width) | half
    out = []
    for n, v in enumerate(rows):
        if not v:
            out.append({})
            continue
        slots = int(pos * n) + r * n + 1
        bias = bias_max >> ((max_slots - slots) * width)
        raw = (v + bias).to_bytes(slots * nbytes, "little")
        row = {}
        for i in range(slots):
            c = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
            if c:
                row[i - r * n] = c
        out.append(row)
    return out


def build_pochhammer(offset, step, shift, power, terms):
    """Expansion of ``prod_{n>=0} (1 - q^(offset+step*n) e(shift*z))^power`` to ``q^(terms-1)``.

    Result has ``denom_q = 1`` and truncation ``terms``.  An ``offset = 0``
    factor with negative power has the non-unit lowest coefficient
    ``(1 - e(shift*z))^power`` and raises :class:`NonUnitLeadingTerm`.
    """
    Pochhammer(offset, step, shift, power)
    denom_z = 2
    prefactor = EllipticPolynomial.one(denom_z)
    if offset == 0:
        if power < 0:
            raise NonUnitLeadingTerm(
                f"(1 - zeta^{shift})^{power} is not a unit; use elaborate_spec for z-poles")
        prefactor = (EllipticPolynomial.one(denom_z)
                     - EllipticPolynomial.monomial(shift * denom_z, 1, denom_z)) ** power
        offset = step
    rows = expand_products([(offset, step, shift, power)], terms)
    out = {}
    for n, row in enumerate(rows):
        if row:
            out[n] = EllipticPolynomial({e * denom_z: c for e, c in row.items()}, denom_z) * prefactor
    return FourierSeries(out, 1, terms, denom_z)


# -- elaboration -------------------------------------------------------------------

class Elaboration(NamedTuple):
    series: FourierSeries
    pole_order: int
    q_shift: Fraction
    denom_z: int
    spec: Optional[ProductSpec] = None


def _cofactor(a, denom):
    """``(e(a z/2) - e(-a z/2)) / (e(z/2) - e(-z/2))`` for ``a >= 1``."""
    half = denom // 2
    return EllipticPolynomial({((a - 1) - 2 * j) * half: 1 for j in range(a)}, denom)


def _z_factors(spec):
    """Pure-z part as (sign, monomial exponent, {|a|: net power of e(|a|z/2) - e(-|a|z/2)})."""
    sign = 1
    mono = spec.z_prefactor
    powers = {}
    entries = []
    for f in spec.named_factors:
        if isinstance(f, Theta):
            entries.append(("theta", f.scale, f.power))
    for p in spec.pochhammer_factors:
        if p.offset == 0:
            entries.append(("poch", p.shift, p.power))
    for kind, a, e in entries:
        if kind == "poch":
            # 1 - e(a z) = -e(a z/2) * (e(a z/2) - e(-a z/2))
            sign *= (-1) ** (e % 2)
            mono += Fraction(a * e, 2)
        if a < 0:
            sign *= (-1) ** (e % 2)
        powers[abs(a)] = powers.get(abs(a), 0) + e
    return sign, mono, powers


def _q_factors(spec):
    out = []
    for f in spec.named_factors:
        if isinstance(f, Eta):
            out.append((f.level, f.level, 0, f.power))
        else:
            out.append((1, 1, 0, f.power))
            out.append((1, 1, f.scale, f.power))
            out.append((1, 1, -f.scale, f.power))
    for p in spec.pochhammer_factors:
        first = p.offset if p.offset > 0 else p.step
        out.append((first, p.step, p.shift, p.power))
    return out


def leading_prefactor(spec):
    """Pole order and the Laurent polynomial multiplying every q-coefficient.

    Returns ``(nu, P)`` where ``P`` is the pure-z part of ``phi`` times
    ``(e(z/2) - e(-z/2))**nu``.  Raises :class:`SpecHasResidualPole` when
    that is not a Laurent polynomial.
    """
    denom = spec.denom_z
    sign, mono, powers = _z_factors(spec)
    order = sum(powers.values())
    nu = max(0, -order)
    num = EllipticPolynomial.theta_prefactor(1, denom) ** (order + nu)
    den = EllipticPolynomial.one(denom)
    for a, e in sorted(powers.items()):
        if a == 1 or e == 0:
            continue
        if e > 0:
            num = num * _cofactor(a, denom) ** e
        else:
            den = den * _cofactor(a, denom) ** (-e)
    quot, rem = ep_divmod(num, den)
    if rem:
        raise SpecHasResidualPole(
            f"spec {spec} has poles at torsion points outside Z + tau Z")
    mono_k = mono * denom
    return nu, quot.shift(int(mono_k)) * sign


def elaborate_spec(spec, terms):
    """Expand ``phi * (e(z/2) - e(-z/2))**nu`` for ``q^(q_shift) .. q^(q_shift + terms - 1)``.

    The returned series holds the leading Fourier coefficients; its keys are in
    units of ``1/denom_q`` and its truncation is ``(q_shift + terms) * denom_q``.
    """
    nu, prefactor = leading_prefactor(spec)
    denom_z = spec.denom_z
    denom_q = spec.denom_q
    shift = spec.q_shift
    base = int(shift * denom_q)
    rows = expand_products(_q_factors(spec), terms)
    unit = prefactor == 1
    out = {}
    for n, row in enumerate(rows):
        if not row:
            continue
        poly = EllipticPolynomial({e * denom_z: c for e, c in row.items()}, denom_z)
        out[base + n * denom_q] = poly if unit else poly * prefactor
    series = FourierSeries(out, denom_q, base + terms * denom_q, denom_z)
    return Elaboration(series, nu, shift, denom_z, spec)
