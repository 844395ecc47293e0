"""Algebraic descriptions of subsets of the positive integers.

Every spec answers two questions: ``membership(spec, n)`` evaluates the
defining predicate for one integer, ``enumerate(spec, N)`` lists the members
of [1, N]. The two paths are implemented separately so they can check each
other.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .serialize import scalar_from_json, scalar_to_json
from .torus import TorusScalar


class EmptyOnWindow(ValueError):
    pass


class IntegerSetSpec:
    """Base class; concrete variants are frozen dataclasses below."""

    variant = "abstract"

    def __contains__(self, n: int) -> bool:
        return membership(self, n)


@dataclass(frozen=True)
class Explicit(IntegerSetSpec):
    values: tuple[int, ...]
    variant = "explicit"

    def __post_init__(self):
        vals = tuple(sorted(set(int(v) for v in self.values)))
        if any(v < 1 for v in vals):
            raise ValueError("explicit sets hold positive integers")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class Residue(IntegerSetSpec):
    """{n >= 1 : n = residue mod modulus}; Residue(1, 0) is all of N."""

    modulus: int
    residue: int = 0
    variant = "residue"

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "residue", self.residue % self.modulus)


@dataclass(frozen=True)
class Bohr(IntegerSetSpec):
    """{n : ||n alpha_i|| < eps for every i}."""

    alphas: tuple[TorusScalar, ...]
    eps: Fraction
    variant = "bohr"

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "eps", Fraction(self.eps))
        if not self.alphas:
            raise ValueError("bohr set needs at least one frequency")
        _check_eps(self.eps)


@dataclass(frozen=True)
class PowerBohr(IntegerSetSpec):
    """{n : ||n^s beta|| > eps} (outside) or {n : ||n^s beta|| < eps} (inside)."""

    s: int
    beta: TorusScalar
    eps: Fraction
    side: str = "outside"
    variant = "power_bohr"

    def __post_init__(self):
        object.__setattr__(self, "eps", Fraction(self.eps))
        if self.s < 1:
            raise ValueError("degree must be positive")
        if self.side not in ("inside", "outside"):
            raise ValueError("side must be 'inside' or 'outside'")
        _check_eps(self.eps)


@dataclass(frozen=True)
class Difference(IntegerSetSpec):
    """{s' - s : s < s' in base}; an infinite base is truncated at ``horizon``."""

    base: IntegerSetSpec
    horizon: int | None = None
    variant = "difference"

    def __post_init__(self):
        if self.horizon is None and _finite_bound(self.base) is None:
            raise ValueError("difference of an infinite set needs a horizon")


@dataclass(frozen=True)
class IP(IntegerSetSpec):
    """Finite sums of distinct generators, using at most ``depth`` of them."""

    generators: tuple[int, ...]
    depth: int | None = None
    variant = "ip"

    def __post_init__(self):
        gens = tuple(int(g) for g in self.generators)
        if not gens:
            raise ValueError("IP set needs generators")
        if len(set(gens)) != len(gens) or any(g < 1 for g in gens):
            raise ValueError("generators must be distinct positive integers")
        if self.depth is not None and self.depth < 1:
            raise ValueError("depth must be positive")
        object.__setattr__(self, "generators", gens)


@dataclass(frozen=True)
class PolyImage(IntegerSetSpec):
    """Positive values p(m), m >= 1, of an integer polynomial (coefficients low degree first)."""

    coeffs: tuple[int, ...]
    variant = "poly_image"

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if len(c) < 2 or c[-1] <= 0:
            raise ValueError("polynomial must be non-constant with positive leading coefficient")
        object.__setattr__(self, "coeffs", c)


@dataclass(frozen=True)
class Powers(IntegerSetSpec):
    """{base^k : k >= 0}."""

    base: int
    variant = "powers"

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be at least 2")


@dataclass(frozen=True)
class Primes(IntegerSetSpec):
    """{p + shift : p prime, p + shift >= 1}."""

    shift: int = 0
    variant = "primes"


@dataclass(frozen=True)
class Union(IntegerSetSpec):
    a: IntegerSetSpec
    b: IntegerSetSpec
    variant = "union"


@dataclass(frozen=True)
class Intersection(IntegerSetSpec):
    a: IntegerSetSpec
    b: IntegerSetSpec
    variant = "intersection"


@dataclass(frozen=True)
class Complement(IntegerSetSpec):
    a: IntegerSetSpec
    variant = "complement"


@dataclass(frozen=True)
class Dilate(IntegerSetSpec):
    """{k m : m in spec}."""

    spec: IntegerSetSpec
    factor: int
    variant = "dilate"

    def __post_init__(self):
        if self.factor < 1:
            raise ValueError("dilation factor must be positive")


def _check_eps(eps: Fraction):
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("eps must lie in (0, 1/2)")


# convenience constructors

def naturals() -> Residue:
    return Residue(1, 0)


def evens() -> Residue:
    return Residue(2, 0)


def odds() -> Residue:
    return Residue(2, 1)


def squares() -> PolyImage:
    return PolyImage((0, 0, 1))


def _finite_bound(spec: IntegerSetSpec) -> int | None:
    """An upper bound on the members of a finite spec, or None."""
    if isinstance(spec, Explicit):
        return spec.values[-1] if spec.values else 0
    if isinstance(spec, IP):
        return sum(spec.generators)
    if isinstance(spec, Difference):
        b = spec.horizon if spec.horizon is not None else _finite_bound(spec.base)
        return b
    if isinstance(spec, Intersection):
        bounds = [x for x in (_finite_bound(spec.a), _finite_bound(spec.b)) if x is not None]
        return min(bounds) if bounds else None
    if isinstance(spec, Union):
        a, b = _finite_bound(spec.a), _finite_bound(spec.b)
        return None if a is None or b is None else max(a, b)
    if isinstance(spec, Dilate):
        b = _finite_bound(spec.spec)
        return None if b is None else b * spec.factor
    return None


# subset sums

def ip_sums(generators: Sequence[int], N: int, depth: int | None = None) -> list[int]:
    """Sums of nonempty subsets of distinct generators (at most ``depth`` terms), truncated at N."""
    gens = [int(g) for g in generators]
    if len(set(gens)) != len(gens) or any(g < 1 for g in gens):
        raise ValueError("generators must be distinct positive integers")
    mask = (1 << (N + 1)) - 1
    if depth is None or depth >= len(gens):
        reach = 1
        for g in gens:
            reach |= (reach << g) & mask
        reach &= ~1
    else:
        layers = [1] + [0] * depth
        for g in gens:
            for k in range(depth, 0, -1):
                layers[k] |= (layers[k - 1] << g) & mask
        reach = 0
        for layer in layers[1:]:
            reach |= layer
    return [i for i in range(1, N + 1) if reach >> i & 1]


def _subset_sum_hit(gens: Sequence[int], n: int, depth: int | None) -> bool:
    return n in set(ip_sums(gens, n, depth)) if n >= 1 else False


# primes

@lru_cache(maxsize=8)
def _sieve(limit: int) -> np.ndarray:
    is_p = np.ones(max(limit + 1, 2), dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p::p] = False
    return is_p


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# polynomials

def _poly(coeffs: Sequence[int], m: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * m + c
    return acc


def _monotone_from(coeffs: Sequence[int]) -> int:
    """m0 such that p is strictly increasing on [m0, inf)."""
    deriv = [k * coeffs[k] for k in range(1, len(coeffs))]
    lead = deriv[-1]
    return 1 + math.ceil(max(abs(c) for c in deriv) / lead) if len(deriv) > 1 else 1


def _poly_values(coeffs: Sequence[int], N: int) -> set[int]:
    m0 = _monotone_from(coeffs)
    out = set()
    m = 1
    while True:
        v = _poly(coeffs, m)
        if m >= m0 and v > N:
            break
        if 1 <= v <= N:
            out.add(v)
        m += 1
    return out


# membership: the defining predicates, one integer at a time

def membership(spec: IntegerSetSpec, n: int) -> bool:
    if n < 1:
        raise ValueError("membership is defined for positive integers")
    if isinstance(spec, Explicit):
        return n in spec.values
    if isinstance(spec, Residue):
        return n % spec.modulus == spec.residue
    if isinstance(spec, Bohr):
        eps = spec.eps
        for a in spec.alphas:
            v = (n * a.num) % a.den
            if min(v, a.den - v) * eps.denominator >= eps.numerator * a.den:
                return False
        return True
    if isinstance(spec, PowerBohr):
        b = spec.beta
        v = (pow(n, spec.s) * b.num) % b.den
        lhs = min(v, b.den - v) * spec.eps.denominator
        rhs = spec.eps.numerator * b.den
        return lhs > rhs if spec.side == "outside" else lhs < rhs
    if isinstance(spec, Difference):
        return difference_witness(spec, n) is not None
    if isinstance(spec, IP):
        return _subset_sum_hit(spec.generators, n, spec.depth)
    if isinstance(spec, PolyImage):
        m0 = _monotone_from(spec.coeffs)
        m = 1
        while True:
            v = _poly(spec.coeffs, m)
            if v == n:
                return True
            if m >= m0 and v > n:
                return False
            m += 1
    if isinstance(spec, Powers):
        while n % spec.base == 0:
            n //= spec.base
        return n == 1
    if isinstance(spec, Primes):
        return _is_prime(n - spec.shift)
    if isinstance(spec, Union):
        return membership(spec.a, n) or membership(spec.b, n)
    if isinstance(spec, Intersection):
        return membership(spec.a, n) and membership(spec.b, n)
    if isinstance(spec, Complement):
        return not membership(spec.a, n)
    if isinstance(spec, Dilate):
        return n % spec.factor == 0 and membership(spec.spec, n // spec.factor)
    raise TypeError(f"unknown spec {spec!r}")


def _difference_base(spec: Difference) -> list[int]:
    h = spec.horizon if spec.horizon is not None else _finite_bound(spec.base)
    return enumerate(spec.base, h) if h and h >= 1 else []


def difference_witness(spec: Difference, n: int) -> tuple[int, int] | None:
    """(s, s') with s' - s = n and both in the (truncated) base, smallest s first."""
    base = _difference_base(spec)
    members = set(base)
    for s in base:
        if s + n in members:
            return s, s + n
    return None


# enumeration: whole-window masks

@lru_cache(maxsize=256)
def window_mask(spec: IntegerSetSpec, N: int) -> np.ndarray:
    """Boolean array m of length N+1 with m[n] true iff n in spec (m[0] is false)."""
    if N < 1:
        raise ValueError("window must be positive")
    m = np.zeros(N + 1, dtype=bool)
    if isinstance(spec, Explicit):
        vals = [v for v in spec.values if v <= N]
        m[vals] = True
    elif isinstance(spec, Residue):
        start = spec.residue if spec.residue >= 1 else spec.modulus
        m[start::spec.modulus] = True
    elif isinstance(spec, Bohr):
        m[1:] = True
        eps = spec.eps
        for a in spec.alphas:
            num, den = a.num, a.den
            v = 0
            col = np.empty(N, dtype=bool)
            for n in range(N):
                v += num
                if v >= den:
                    v -= den
                col[n] = min(v, den - v) * eps.denominator < eps.numerator * den
            m[1:] &= col
    elif isinstance(spec, PowerBohr):
        b = spec.beta
        lhs_scale, rhs = spec.eps.denominator, spec.eps.numerator * b.den
        outside = spec.side == "outside"
        for n in range(1, N + 1):
            v = (pow(n, spec.s) * b.num) % b.den
            lhs = min(v, b.den - v) * lhs_scale
            m[n] = lhs > rhs if outside else lhs < rhs
    elif isinstance(spec, Difference):
        base = np.array(_difference_base(spec), dtype=np.int64)
        if len(base) > 1:
            diffs = (base[None, :] - base[:, None]).ravel()
            diffs = diffs[(diffs >= 1) & (diffs <= N)]
            m[diffs] = True
    elif isinstance(spec, IP):
        m[ip_sums(spec.generators, N, spec.depth)] = True
    elif isinstance(spec, PolyImage):
        m[sorted(_poly_values(spec.coeffs, N))] = True
    elif isinstance(spec, Powers):
        p = 1
        while p <= N:
            m[p] = True
            p *= spec.base
    elif isinstance(spec, Primes):
        hi = N - spec.shift
        if hi >= 2:
            primes = np.nonzero(_sieve(hi))[0] + spec.shift
            m[primes[(primes >= 1) & (primes <= N)]] = True
    elif isinstance(spec, Union):
        m = window_mask(spec.a, N) | window_mask(spec.b, N)
    elif isinstance(spec, Intersection):
        m = window_mask(spec.a, N) & window_mask(spec.b, N)
    elif isinstance(spec, Complement):
        m = ~window_mask(spec.a, N)
        m[0] = False
    elif isinstance(spec, Dilate):
        inner = window_mask(spec.spec, N // spec.factor) if N >= spec.factor else np.zeros(1, bool)
        idx = np.nonzero(inner)[0] * spec.factor
        m[idx] = True
    else:
        raise TypeError(f"unknown spec {spec!r}")
    m.flags.writeable = False
    return m


def enumerate(spec: IntegerSetSpec, N: int) -> list[int]:
    """Members of spec in [1, N], sorted."""
    return [int(i) for i in np.nonzero(window_mask(spec, N))[0]]


def enumerate_flagged(spec: IntegerSetSpec, N: int) -> tuple[list[int], bool]:
    """Members plus a flag set when an IP depth bound removed sums inside the window."""
    return enumerate(spec, N), _depth_truncated(spec, N)


def _depth_truncated(spec: IntegerSetSpec, N: int) -> bool:
    if isinstance(spec, IP):
        return spec.depth is not None and ip_sums(spec.generators, N, spec.depth) != ip_sums(spec.generators, N)
    children = [getattr(spec, f) for f in ("a", "b", "spec", "base") if hasattr(spec, f)]
    return any(_depth_truncated(c, N) for c in children if isinstance(c, IntegerSetSpec))


def syndeticity_constant(spec: IntegerSetSpec, N: int) -> int:
    """Largest gap between consecutive members in [1, N], counting the gap from 0 to the first."""
    members = enumerate(spec, N)
    if not members:
        raise EmptyOnWindow(f"{spec.variant} set is empty on [1, {N}]")
    return max(b - a for a, b in zip([0] + members, members))


def gap_profile(members: Iterable[int]) -> list[int]:
    """Gaps between consecutive members (no leading gap from 0)."""
    ms = list(members)
    return [b - a for a, b in zip(ms, ms[1:])]


# JSON

def to_json(spec: IntegerSetSpec) -> dict:
    v = spec.variant
    if isinstance(spec, Explicit):
        return {"variant": v, "values": list(spec.values)}
    if isinstance(spec, Residue):
        return {"variant": v, "modulus": spec.modulus, "residue": spec.residue}
    if isinstance(spec, Bohr):
        return {"variant": v, "alphas": [scalar_to_json(a) for a in spec.alphas], "eps": str(spec.eps)}
    if isinstance(spec, PowerBohr):
        return {"variant": v, "s": spec.s, "beta": scalar_to_json(spec.beta), "eps": str(spec.eps),
                "side": spec.side}
    if isinstance(spec, Difference):
        return {"variant": v, "base": to_json(spec.base), "horizon": spec.horizon}
    if isinstance(spec, IP):
        return {"variant": v, "generators": list(spec.generators), "depth": spec.depth}
    if isinstance(spec, PolyImage):
        return {"variant": v, "coeffs": list(spec.coeffs)}
    if isinstance(spec, Powers):
        return {"variant": v, "base": spec.base}
    if isinstance(spec, Primes):
        return {"variant": v, "shift": spec.shift}
    if isinstance(spec, (Union, Intersection)):
        return {"variant": v, "a": to_json(spec.a), "b": to_json(spec.b)}
    if isinstance(spec, Complement):
        return {"variant": v, "a": to_json(spec.a)}
    if isinstance(spec, Dilate):
        return {"variant": v, "spec": to_json(spec.spec), "factor": spec.factor}
    raise TypeError(f"unknown spec {spec!r}")


def from_json(obj: dict) -> IntegerSetSpec:
    v = obj.get("variant")
    if v == "explicit":
        return Explicit(tuple(obj["values"]))
    if v == "residue":
        return Residue(int(obj["modulus"]), int(obj["residue"]))
    if v == "bohr":
        return Bohr(tuple(scalar_from_json(a) for a in obj["alphas"]), Fraction(obj["eps"]))
    if v == "power_bohr":
        return PowerBohr(int(obj["s"]), scalar_from_json(obj["beta"]), Fraction(obj["eps"]), obj["side"])
    if v == "difference":
        return Difference(from_json(obj["base"]), obj.get("horizon"))
    if v == "ip":
        return IP(tuple(obj["generators"]), obj.get("depth"))
    if v == "poly_image":
        return PolyImage(tuple(obj["coeffs"]))
    if v == "powers":
        return Powers(int(obj["base"]))
    if v == "primes":
        return Primes(int(obj.get("shift", 0)))
    if v == "union":
        return Union(from_json(obj["a"]), from_json(obj["b"]))
    if v == "intersection":
        return Intersection(from_json(obj["a"]), from_json(obj["b"]))
    if v == "complement":
        return Complement(from_json(obj["a"]))
    if v == "dilate":
        return Dilate(from_json(obj["spec"]), int(obj["factor"]))
    raise ValueError(f"unknown variant {v!r}")


def dumps(spec: IntegerSetSpec) -> str:
    return json.dumps(to_json(spec), sort_keys=True, separators=(",", ":"))


def loads(text: str) -> IntegerSetSpec:
    return from_json(json.loads(text))
