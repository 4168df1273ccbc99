"""Exact Laurent polynomials in the elliptic variable.

An :class:`EllipticPolynomial` is a finite sum ``sum_k c_k * zeta**k`` with
integer coefficients, where ``zeta = e(z / denom)``.  The exponent ``k`` is
therefore measured in units of ``1/denom`` in ``z``.  Values are immutable.
"""

from fractions import Fraction
from math import gcd
from types import MappingProxyType

from .arith import cyclotomic_coefficients, divisors, is_prime, lcm
from .errors import NotDivisible


class EllipticPolynomial:
    __slots__ = ("_denom", "_terms", "_hash")

    def __init__(self, terms=None, denom=1):
        denom = int(denom)
        if denom < 1:
            raise ValueError(f"denominator must be positive, got {denom}")
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[int(e)] = int(c)
        self._denom = denom
        self._terms = clean
        self._hash = None

    # -- construction ----------------------------------------------------

    @classmethod
    def zero(cls, denom=1):
        return cls({}, denom)

    @classmethod
    def one(cls, denom=1):
        return cls({0: 1}, denom)

    @classmethod
    def monomial(cls, exponent, coeff=1, denom=1):
        return cls({exponent: coeff}, denom)

    @classmethod
    def from_fractions(cls, terms, denom=None):
        """Build from ``{Fraction exponent of e(z): coefficient}``."""
        need = lcm(1, *(Fraction(e).denominator for e in terms))
        denom = lcm(denom or 1, need)
        return cls({int(Fraction(e) * denom): c for e, c in terms.items()}, denom)

    @classmethod
    def cyclotomic(cls, ell, denom=1):
        """``Phi_ell(e(z))`` written in ``zeta = e(z/denom)``, i.e. ``Phi_ell(zeta**denom)``."""
        coeffs = cyclotomic_coefficients(ell)
        return cls({i * denom: c for i, c in enumerate(coeffs)}, denom)

    @classmethod
    def theta_prefactor(cls, a=1, denom=2):
        """``e(a z/2) - e(-a z/2)``; ``denom`` must make ``a/2`` integral."""
        if (a * denom) % 2:
            raise ValueError("denominator cannot host half-integer exponents")
        h = a * denom // 2
        return cls({h: 1, -h: -1}, denom)

    # -- accessors -------------------------------------------------------

    @property
    def denom(self):
        return self._denom

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    @property
    def valuation(self):
        return min(self._terms) if self._terms else None

    @property
    def degree(self):
        return max(self._terms) if self._terms else None

    def is_unit_monomial(self):
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    def coefficient(self, exponent):
        """Coefficient of ``e(exponent * z)`` for a rational exponent."""
        k = Fraction(exponent) * self._denom
        if k.denominator != 1:
            return 0
        return self._terms.get(int(k), 0)

    def as_fractions(self):
        return {Fraction(e, self._denom): c for e, c in self.items()}

    # -- denominators ----------------------------------------------------

    def with_denom(self, denom):
        if denom == self._denom:
            return self
        if denom % self._denom:
            raise ValueError(f"{denom} is not a multiple of {self._denom}")
        f = denom // self._denom
        return EllipticPolynomial({e * f: c for e, c in self._terms.items()}, denom)

    def reduced(self, even=False):
        """Same value over the smallest admissible denominator."""
        g = self._denom
        for e in self._terms:
            g = gcd(g, e)
        d = self._denom // g
        if even and d % 2:
            d *= 2
        return self.with_denom_exact(d)

    def with_denom_exact(self, denom):
        if denom == self._denom:
            return self
        out = {}
        for e, c in self._terms.items():
            k = Fraction(e * denom, self._denom)
            if k.denominator != 1:
                raise ValueError(f"exponent {e}/{self._denom} not representable over {denom}")
            out[int(k)] = c
        return EllipticPolynomial(out, denom)

    def _unify(self, other):
        if self._denom == other._denom:
            return self, other
        d = lcm(self._denom, other._denom)
        return self.with_denom(d), other.with_denom(d)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = EllipticPolynomial.monomial(0, other, self._denom)
        if not isinstance(other, EllipticPolynomial):
            return NotImplemented
        a, b = self._unify(other)
        out = dict(a._terms)
        for e, c in b._terms.items():
            out[e] = out.get(e, 0) + c
        return EllipticPolynomial(out, a._denom)

    __radd__ = __add__

    def __neg__(self):
        return EllipticPolynomial({e: -c for e, c in self._terms.items()}, self._denom)

    def __sub__(self, other):
        if isinstance(other, int):
            other = EllipticPolynomial.monomial(0, other, self._denom)
        if not isinstance(other, EllipticPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return EllipticPolynomial({e: c * other for e, c in self._terms.items()}, self._denom)
        if not isinstance(other, EllipticPolynomial):
            return NotImplemented
        a, b = self._unify(other)
        if len(a._terms) < len(b._terms):
            a, b = b, a
        out = {}
        for eb, cb in b._terms.items():
            for ea, ca in a._terms.items():
                k = ea + eb
                out[k] = out.get(k, 0) + ca * cb
        return EllipticPolynomial(out, a._denom)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = EllipticPolynomial.one(self._denom)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k):
        """Multiply by ``zeta**k`` (``k`` in units of ``1/denom``)."""
        return EllipticPolynomial({e + k: c for e, c in self._terms.items()}, self._denom)

    def eval_at_zero(self):
        return sum(self._terms.values())

    # -- comparison ------------------------------------------------------

    def _key(self):
        r = self.reduced()
        return r._denom, tuple(sorted(r._terms.items()))

    def __eq__(self, other):
        if isinstance(other, int):
            other = EllipticPolynomial.monomial(0, other)
        if not isinstance(other, EllipticPolynomial):
            return NotImplemented
        if self._denom == other._denom:
            return self._terms == other._terms
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"EllipticPolynomial({str(self)!r}, denom={self._denom})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            x = Fraction(e, self._denom)
            if x == 0:
                mono = ""
            elif x == 1:
                mono = "zeta"
            elif x.denominator == 1:
                mono = f"zeta^{x.numerator}"
            else:
                mono = f"zeta^({x.numerator}/{x.denominator})"
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


# -- module-level operations -------------------------------------------------

def ep_add(a, b):
    return a + b


def ep_mul(a, b):
    return a * b


def ep_eval_at_zero(p):
    """Value at ``z = 0``, i.e. ``zeta -> 1``: the sum of all coefficients."""
    return p.eval_at_zero()


def _poly_divmod(num, den):
    """Divide dense coefficient lists (constant first); ``den`` has a +-1 top coefficient."""
    lead = den[-1]
    if lead not in (1, -1):
        raise NotDivisible("divisor must have a unit leading coefficient")
    dn = len(den) - 1
    rem = list(num)
    if len(rem) <= dn:
        return [], rem
    sparse = [(j, c) for j, c in enumerate(den[:-1]) if c]
    quot = [0] * (len(rem) - dn)
    for i in range(len(rem) - 1, dn - 1, -1):
        c = rem[i]
        if not c:
            continue
        qc = c * lead  # lead is +-1, so this is c / lead
        quot[i - dn] = qc
        rem[i] = 0
        base = i - dn
        for j, dj in sparse:
            rem[base + j] -= qc * dj
    return quot, rem[:dn]


def _dense(p):
    v = p.valuation
    coeffs = [0] * (p.degree - v + 1)
    for e, c in p.terms.items():
        coeffs[e - v] = c
    return v, coeffs


def ep_divmod(p, d):
    """Laurent division ``p = q*d + r`` after stripping monomial valuations.

    ``d`` must be nonzero with a unit (+-1) top coefficient.  ``r`` is zero
    exactly when ``d`` divides ``p`` in the Laurent polynomial ring.
    """
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    p, d = p._unify(d)
    denom = p.denom
    if p.is_zero():
        return EllipticPolynomial.zero(denom), EllipticPolynomial.zero(denom)
    vp, num = _dense(p)
    vd, den = _dense(d)
    quot, rem = _poly_divmod(num, den)
    q = EllipticPolynomial({vp - vd + i: c for i, c in enumerate(quot)}, denom)
    r = EllipticPolynomial({vp + i: c for i, c in enumerate(rem)}, denom)
    return q, r


def ep_exact_divide(p, d):
    q, r = ep_divmod(p, d)
    if r:
        raise NotDivisible(f"{d} does not divide {p}")
    return q


def _require_prime(ell):
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")


def ep_cyclotomic_divide(p, ell):
    """Quotient of ``p`` by ``Phi_ell(e(z))``; raises :class:`NotDivisible`."""
    _require_prime(ell)
    return ep_exact_divide(p, EllipticPolynomial.cyclotomic(ell, p.denom))


def ep_cyclotomic_divides(p, ell):
    _require_prime(ell)
    return not ep_divmod(p, EllipticPolynomial.cyclotomic(ell, p.denom))[1]


def _vanishes_at_primitive_root(p, order):
    # sum_k c_k w^k for w = e(1/order), decided by reduction modulo Phi_order
    red = [0] * order
    for e, c in p.terms.items():
        red[e % order] += c
    phi = cyclotomic_coefficients(order)
    _, rem = _poly_divmod(red, list(phi))
    return not any(rem)


def torsion_orders(ell, denom):
    """Orders of ``zeta = e(z/denom)`` as ``z`` runs over ``(1/ell)Z \\ Z``."""
    big = ell * denom
    part = 1
    while big % (part * ell) == 0:
        part *= ell
    rest = big // part
    return [part * d for d in divisors(rest)]


def ep_vanishes_at_ell_torsion(p, ell):
    """True iff ``p(z) = 0`` for every ``z`` in ``(1/ell)Z`` that is not an integer.

    Since ``p`` has period ``denom`` in ``z`` it suffices to take ``z = j/ell``
    with ``0 < j < ell*denom`` and ``ell`` not dividing ``j``.  The values are
    computed exactly in cyclotomic fields, one Galois orbit at a time.
    """
    _require_prime(ell)
    if p.is_zero():
        return True
    return all(_vanishes_at_primitive_root(p, o) for o in torsion_orders(ell, p.denom))
