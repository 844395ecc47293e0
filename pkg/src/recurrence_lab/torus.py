"""Points of the circle and torus with exact or fixed-point coordinates.

A scalar on T = R/Z is stored as ``num / den`` with ``0 <= num < den``.
The exact backend keeps the fraction reduced; the fixed-point backend fixes
``den = 2**bits`` and treats ``num`` as a machine word. Both backends share
the same integer arithmetic, so scans over large windows stay in Python ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

EXACT = "exact"
FIXED = "fixed"
BACKENDS = (EXACT, FIXED)

DEFAULT_BITS = 128
MIN_BITS = 96
SURROGATE_MIN_DEN = 2**64

SURROGATES = ("sqrt2", "golden", "e-frac", "custom-cf")


class BackendMismatch(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TorusScalar:
    num: int
    den: int
    backend: str = EXACT

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        if not 0 <= self.num < self.den:
            raise ValueError("scalar not reduced modulo 1; use TorusScalar.make")
        if self.backend == EXACT:
            if math.gcd(self.num, self.den) != 1:
                raise ValueError("exact scalar not in lowest terms; use TorusScalar.make")
        else:
            bits = self.den.bit_length() - 1
            if self.den != 1 << bits or bits < MIN_BITS:
                raise ValueError(f"fixed-point denominator must be 2**bits with bits >= {MIN_BITS}")

    # construction

    @classmethod
    def make(cls, num: int, den: int, backend: str = EXACT, bits: int = DEFAULT_BITS) -> TorusScalar:
        """Canonical scalar for the real ``num/den`` reduced mod 1.

        In the fixed backend the value is truncated (floored) to ``bits``
        fractional bits.
        """
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        if backend == EXACT:
            num %= den
            g = math.gcd(num, den)
            return cls(num // g, den // g, EXACT)
        if backend == FIXED:
            if bits < MIN_BITS:
                raise ValueError(f"fixed-point needs at least {MIN_BITS} bits")
            word = ((num << bits) // den) % (1 << bits)
            return cls(word, 1 << bits, FIXED)
        raise ValueError(f"unknown backend {backend!r}")

    @classmethod
    def zero(cls, backend: str = EXACT, bits: int = DEFAULT_BITS) -> TorusScalar:
        return cls.make(0, 1, backend, bits)

    @classmethod
    def from_value(cls, value, backend: str = EXACT, bits: int = DEFAULT_BITS) -> TorusScalar:
        """Accepts TorusScalar, int, Fraction, decimal string or float (exact binary value)."""
        if isinstance(value, TorusScalar):
            if value.backend != backend or (backend == FIXED and value.bits != bits):
                return cls.make(value.num, value.den, backend, bits)
            return value
        if isinstance(value, str):
            value = Fraction(value)
        elif isinstance(value, float):
            value = Fraction(value)
        elif isinstance(value, int):
            value = Fraction(value)
        if not isinstance(value, Fraction):
            raise TypeError(f"cannot build a torus scalar from {type(value).__name__}")
        return cls.make(value.numerator, value.denominator, backend, bits)

    # properties

    @property
    def bits(self) -> int | None:
        return self.den.bit_length() - 1 if self.backend == FIXED else None

    @property
    def frac(self) -> Fraction:
        """Representative in [0, 1) as an exact Fraction."""
        return Fraction(self.num, self.den)

    def lift(self) -> Fraction:
        """Representative in (-1/2, 1/2]."""
        if 2 * self.num > self.den:
            return Fraction(self.num - self.den, self.den)
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        return self.num / self.den

    def is_zero(self) -> bool:
        return self.num == 0

    # arithmetic

    def _check(self, other: TorusScalar):
        if not isinstance(other, TorusScalar):
            raise TypeError("expected TorusScalar")
        if self.backend != other.backend:
            raise BackendMismatch(f"{self.backend} vs {other.backend}")
        if self.backend == FIXED and self.den != other.den:
            raise BackendMismatch("fixed-point widths differ")

    def _new(self, num: int, den: int) -> TorusScalar:
        if self.backend == FIXED:
            return TorusScalar(num % den, den, FIXED)
        return TorusScalar.make(num, den, EXACT)

    def __add__(self, other: TorusScalar) -> TorusScalar:
        self._check(other)
        if self.backend == FIXED:
            return self._new(self.num + other.num, self.den)
        return self._new(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> TorusScalar:
        return self._new(-self.num, self.den)

    def __sub__(self, other: TorusScalar) -> TorusScalar:
        return self + (-other)

    def __mul__(self, k: int) -> TorusScalar:
        if not isinstance(k, int):
            return NotImplemented
        return self._new(k * self.num, self.den)

    __rmul__ = __mul__

    def __repr__(self):
        if self.backend == EXACT:
            return f"TorusScalar({self.num}/{self.den})"
        return f"TorusScalar(fixed{self.bits}:{float(self):.12g})"


def circle_norm(t: TorusScalar) -> Fraction:
    """Distance from t to the nearest integer, in [0, 1/2]."""
    return Fraction(min(t.num, t.den - t.num), t.den)


def norm_lt(t: TorusScalar, eps: Fraction) -> bool:
    """``circle_norm(t) < eps`` without building a Fraction."""
    return min(t.num, t.den - t.num) * eps.denominator < eps.numerator * t.den


def norm_gt(t: TorusScalar, eps: Fraction) -> bool:
    return min(t.num, t.den - t.num) * eps.denominator > eps.numerator * t.den


def multiple(t: TorusScalar, k: int) -> tuple[int, int]:
    """Numerator/denominator of ``k*t mod 1`` (not reduced); the fast path for window scans."""
    return (k * t.num) % t.den, t.den


# continued fractions

def cf_convergents(terms: Iterable[int]):
    """Yield the convergents p/q of [a0; a1, a2, ...] as integer pairs."""
    p0, q0, p1, q1 = 1, 0, None, None
    for i, a in enumerate(terms):
        if i == 0:
            p1, q1 = a, 1
            p0, q0 = 1, 0
        else:
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1


def _sqrt2_terms():
    yield 0
    while True:
        yield 2


def _golden_terms():
    yield 0
    while True:
        yield 1


def _efrac_terms():
    # e - 2 = [0; 1, 2, 1, 1, 4, 1, 1, 6, ...]
    yield 0
    k = 1
    while True:
        yield 1
        yield 2 * k
        yield 1
        k += 1


_TERM_GENERATORS = {"sqrt2": _sqrt2_terms, "golden": _golden_terms, "e-frac": _efrac_terms}


def _convergent_with_den(terms, min_den: int) -> tuple[int, int]:
    for p, q in cf_convergents(terms):
        if q >= min_den:
            return p, q
    return p, q


def irrational_surrogate(name: str, backend: str = EXACT, bits: int = DEFAULT_BITS,
                         cf: Sequence[int] | None = None) -> TorusScalar:
    """Rational stand-in for a named irrational in [0, 1).

    ``sqrt2`` is sqrt(2) - 1, ``golden`` is (sqrt(5) - 1)/2 and ``e-frac``
    is e - 2. Exact mode returns the first continued-fraction convergent with
    denominator at least 2**64; fixed mode returns the value floored to
    ``bits`` fractional bits. ``custom-cf`` takes a finite expansion ``cf``
    and returns its value.
    """
    if name == "custom-cf":
        if not cf:
            raise ValueError("custom-cf needs a non-empty continued fraction")
        *_, (p, q) = cf_convergents(cf)
        return TorusScalar.make(p, q, backend, bits)
    if name not in _TERM_GENERATORS:
        raise ValueError(f"unknown surrogate {name!r}; expected one of {SURROGATES}")
    if backend == EXACT:
        p, q = _convergent_with_den(_TERM_GENERATORS[name](), SURROGATE_MIN_DEN)
        return TorusScalar.make(p, q, EXACT)
    if backend != FIXED:
        raise ValueError(f"unknown backend {backend!r}")
    if bits < MIN_BITS:
        raise ValueError(f"fixed-point needs at least {MIN_BITS} bits")
    one = 1 << bits
    if name == "sqrt2":
        word = math.isqrt(2 * one * one) - one
    elif name == "golden":
        word = (math.isqrt(5 * one * one) - one) // 2
    else:
        # |e-2 - p/q| < 1/q^2 far below 2**-bits, so flooring p/q is the truncation
        p, q = _convergent_with_den(_efrac_terms(), 1 << (bits + 8))
        word = (p << bits) // q
    return TorusScalar(word, one, FIXED)


@dataclass(frozen=True)
class TorusPoint:
    coords: tuple[TorusScalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if not self.coords:
            raise DimensionMismatch("torus point needs dim >= 1")
        first = self.coords[0]
        for c in self.coords[1:]:
            if c.backend != first.backend or (first.backend == FIXED and c.den != first.den):
                raise BackendMismatch("coordinates must share one backend")

    @classmethod
    def of(cls, values, backend: str = EXACT, bits: int = DEFAULT_BITS) -> TorusPoint:
        return cls(tuple(TorusScalar.from_value(v, backend, bits) for v in values))

    @classmethod
    def zero(cls, dim: int, backend: str = EXACT, bits: int = DEFAULT_BITS) -> TorusPoint:
        return cls(tuple(TorusScalar.zero(backend, bits) for _ in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def backend(self) -> str:
        return self.coords[0].backend

    @property
    def bits(self) -> int | None:
        return self.coords[0].bits

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def _check(self, other: TorusPoint):
        if self.dim != other.dim:
            raise DimensionMismatch(f"dimensions {self.dim} and {other.dim}")
        if self.backend != other.backend or self.bits != other.bits:
            raise BackendMismatch(f"{self.backend} vs {other.backend}")

    def __add__(self, other: TorusPoint) -> TorusPoint:
        self._check(other)
        return TorusPoint(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: TorusPoint) -> TorusPoint:
        self._check(other)
        return TorusPoint(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self) -> TorusPoint:
        return TorusPoint(tuple(-a for a in self))

    def concat(self, other: TorusPoint) -> TorusPoint:
        if self.backend != other.backend or self.bits != other.bits:
            raise BackendMismatch(f"{self.backend} vs {other.backend}")
        return TorusPoint(self.coords + other.coords)

    def __repr__(self):
        return "TorusPoint(" + ", ".join(repr(c) for c in self.coords) + ")"


def torus_distance(x: TorusPoint, y: TorusPoint, mask: Sequence[bool] | None = None) -> Fraction:
    """Sup-metric distance; ``mask`` restricts the max to selected coordinates."""
    x._check(y)
    best = Fraction(0)
    for i, (a, b) in enumerate(zip(x, y)):
        if mask is not None and not mask[i]:
            continue
        d = circle_norm(a - b)
        if d > best:
            best = d
    return best
