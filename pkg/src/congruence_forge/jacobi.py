"""Leading Fourier coefficients, specialization at z = 0 and progression filters.

Both :class:`JacobiExpansion` and :class:`Specialization` carry their support
explicitly: the exponents ``beta0 + k`` (``k >= 0``) below the truncation,
intersected with every progression the value was restricted to.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import fraction_str
from .errors import OutOfRange
from .qseries import FourierSeries, ProductSpec, elaborate_spec
from .ring import EllipticPolynomial


def _normalize_class(beta, modulus, base):
    """Representative of ``beta mod modulus``; in ``[base, base + modulus)`` when on ``base + Z``."""
    beta = Fraction(beta)
    if (beta - base).denominator == 1:
        k = (beta - base) // modulus
        return beta - k * modulus
    return beta - (beta // modulus) * modulus


def in_progression(n, modulus, beta):
    return ((Fraction(n) - Fraction(beta)) / modulus).denominator == 1


@dataclass(frozen=True)
class _Support:
    offset: Fraction
    bound: Fraction
    progressions: tuple = ()

    def contains(self, n):
        n = Fraction(n)
        if n < self.offset or n >= self.bound or (n - self.offset).denominator != 1:
            return False
        return all(in_progression(n, m, b) for m, b in self.progressions)

    def exponents(self, below=None):
        stop = self.bound if below is None else min(self.bound, Fraction(below))
        out = []
        n = self.offset
        if self.progressions:
            m, b = self.progressions[-1]
            if (b - self.offset).denominator != 1:
                return out
            step = m
            n = _normalize_class(b, m, self.offset)
        else:
            step = 1
        while n < stop:
            if self.contains(n):
                out.append(n)
            n += step
        return out

    def restricted(self, modulus, beta):
        if modulus < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        beta = _normalize_class(beta, modulus, self.offset)
        return _Support(self.offset, self.bound, self.progressions + ((modulus, beta),))


@dataclass(frozen=True)
class JacobiExpansion:
    """The series of leading coefficients ``c~(phi; n; z)`` together with its pole order."""

    series: FourierSeries
    pole_order: int
    support_offset: Fraction
    denom_z: int
    spec: Optional[ProductSpec] = None
    support: _Support = field(default=None, compare=False)

    def __post_init__(self):
        if self.pole_order < 0:
            raise ValueError("pole order must be non-negative")
        if self.support is None:
            object.__setattr__(self, "support",
                               _Support(Fraction(self.support_offset), self.series.bound))

    @property
    def truncation(self):
        return self.series.bound

    def exponents(self, below=None):
        """Supported exponents in increasing order."""
        return self.support.exponents(below)

    def items(self, below=None):
        return [(n, self.series.coefficient(n)) for n in self.exponents(below)]


def expand(spec, terms):
    """Expand ``spec`` to ``terms`` coefficients starting at its q-shift."""
    el = elaborate_spec(spec, terms)
    return JacobiExpansion(el.series, el.pole_order, el.q_shift, el.denom_z, spec)


def leading_coefficient(exp, n):
    """``c~(phi; n; z)``; zero outside the support, :class:`OutOfRange` at or past the bound."""
    n = Fraction(n)
    if n >= exp.truncation:
        raise OutOfRange(f"exponent {fraction_str(n)} is not below truncation "
                         f"{fraction_str(exp.truncation)}")
    if not exp.support.contains(n):
        return EllipticPolynomial.zero(exp.denom_z)
    return exp.series.coefficient(n)


@dataclass(frozen=True)
class Specialization:
    """Integer coefficients ``c(f; n)`` on a support, stored for every supported ``n``."""

    coeffs: dict
    truncation: Fraction
    offset: Fraction
    support: _Support = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "truncation", Fraction(self.truncation))
        object.__setattr__(self, "offset", Fraction(self.offset))
        if self.support is None:
            object.__setattr__(self, "support", _Support(self.offset, self.truncation))

    @classmethod
    def from_values(cls, values, offset, truncation=None):
        """Coefficients ``values[k]`` at ``offset + k``."""
        offset = Fraction(offset)
        if truncation is None:
            truncation = offset + len(values)
        coeffs = {offset + k: int(v) for k, v in enumerate(values) if offset + k < truncation}
        return cls(coeffs, truncation, offset)

    def exponents(self, below=None):
        return self.support.exponents(below)

    def value(self, n):
        n = Fraction(n)
        if n >= self.truncation:
            raise OutOfRange(f"exponent {fraction_str(n)} is not below truncation "
                             f"{fraction_str(self.truncation)}")
        return self.coeffs.get(n, 0) if self.support.contains(n) else 0

    def values(self, below=None):
        return [self.coeffs.get(n, 0) for n in self.exponents(below)]

    def to_json(self):
        return {
            "offset": fraction_str(self.offset),
            "truncation": fraction_str(self.truncation),
            "progressions": [{"M": m, "beta": fraction_str(b)}
                             for m, b in self.support.progressions],
            "coeffs": [{"n": fraction_str(n), "value": self.coeffs.get(n, 0)}
                       for n in self.exponents()],
        }

    @classmethod
    def from_json(cls, data):
        offset = Fraction(data["offset"])
        support = _Support(offset, Fraction(data["truncation"]))
        for p in data.get("progressions", []):
            support = support.restricted(p["M"], Fraction(p["beta"]))
        coeffs = {Fraction(c["n"]): int(c["value"]) for c in data["coeffs"]}
        return cls(coeffs, support.bound, offset, support)


def specialize(exp):
    """Evaluate every leading coefficient at ``z = 0``."""
    coeffs = {n: c.eval_at_zero() for n, c in exp.items()}
    return Specialization(coeffs, exp.truncation, exp.support_offset, exp.support)


def restrict_progression(x, modulus, beta):
    """Keep the terms with ``n = beta (mod modulus)``; exponents are not rescaled."""
    support = x.support.restricted(modulus, beta)
    if isinstance(x, Specialization):
        keep = {n: v for n, v in x.coeffs.items() if support.contains(n)}
        return Specialization(keep, x.truncation, x.offset, support)
    if isinstance(x, JacobiExpansion):
        s = x.series
        terms = {k: c for k, c in s.terms.items()
                 if support.contains(Fraction(k, s.denom_q))}
        series = FourierSeries(terms, s.denom_q, s.truncation, s.denom_z)
        return JacobiExpansion(series, x.pole_order, x.support_offset, x.denom_z, x.spec, support)
    raise TypeError(f"cannot restrict {type(x).__name__}")
