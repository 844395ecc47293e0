"""Affine maps T(x) = Mx + alpha on the torus, with M unipotent."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from .torus import (
    EXACT,
    FIXED,
    BackendMismatch,
    DimensionMismatch,
    TorusPoint,
    TorusScalar,
)
from .unipotent import UnipotentMatrix, unipotent_orbit_sum, unipotent_power


def _lincomb(coeffs: Sequence[int], coords: Sequence[TorusScalar], shift: TorusScalar) -> TorusScalar:
    """sum_j coeffs[j] * coords[j] + shift, reduced mod 1."""
    if shift.backend == FIXED:
        den = shift.den
        acc = shift.num
        for c, x in zip(coeffs, coords):
            if c:
                acc += c * x.num
        return TorusScalar(acc % den, den, FIXED)
    den = shift.den
    for c, x in zip(coeffs, coords):
        if c:
            den = math.lcm(den, x.den)
    acc = shift.num * (den // shift.den)
    for c, x in zip(coeffs, coords):
        if c:
            acc += c * x.num * (den // x.den)
    return TorusScalar.make(acc, den, EXACT)


@dataclass(frozen=True)
class AffineSystem:
    M: UnipotentMatrix
    alpha: TorusPoint

    def __post_init__(self):
        if self.M.s != self.alpha.dim:
            raise DimensionMismatch(f"matrix is {self.M.s}x{self.M.s} but alpha has dim {self.alpha.dim}")

    @classmethod
    def rotation(cls, alpha) -> AffineSystem:
        """Translation x -> x + alpha; ``alpha`` is a TorusScalar or TorusPoint."""
        if isinstance(alpha, TorusScalar):
            alpha = TorusPoint((alpha,))
        return cls(UnipotentMatrix.identity(alpha.dim), alpha)

    @classmethod
    def jordan(cls, alpha: TorusPoint) -> AffineSystem:
        return cls(UnipotentMatrix.jordan(alpha.dim), alpha)

    @property
    def s(self) -> int:
        return self.M.s

    @property
    def backend(self) -> str:
        return self.alpha.backend

    def _check(self, x: TorusPoint):
        if x.dim != self.s:
            raise DimensionMismatch(f"point has dim {x.dim}, system has dim {self.s}")
        if x.backend != self.alpha.backend or x.bits != self.alpha.bits:
            raise BackendMismatch(f"point backend {x.backend} vs system backend {self.alpha.backend}")

    def minimality_diagnostic(self) -> dict:
        """Report on the surrogate standing in for an irrational translation.

        Minimality of a single Jordan block needs the last coordinate of alpha
        irrational; a rational surrogate p/q makes every orbit periodic with
        period dividing a power-of-q bound, so q is reported as the effective
        period bound.
        """
        last = self.alpha[-1]
        return {
            "single_jordan_block": self.M.is_jordan_block,
            "last_coordinate_denominator": last.den,
            "effective_period_bound": last.den,
            "log2_period_bound": last.den.bit_length() - 1,
        }


def apply(sys: AffineSystem, x: TorusPoint) -> TorusPoint:
    sys._check(x)
    return TorusPoint(tuple(_lincomb(row, x.coords, a) for row, a in zip(sys.M.entries, sys.alpha)))


def iterate(sys: AffineSystem, x: TorusPoint, n: int) -> TorusPoint:
    """T^n x = M^n x + (Id + M + ... + M^(n-1)) alpha, via binomial closed forms."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    sys._check(x)
    if n == 0:
        return x
    mn = unipotent_power(sys.M, n)
    sn = unipotent_orbit_sum(sys.M, n)
    zero = TorusScalar.zero(sys.backend, sys.alpha.bits or 128)
    out = []
    for i in range(sys.s):
        drift = _lincomb(sn[i], sys.alpha.coords, zero)
        out.append(_lincomb(mn[i], x.coords, drift))
    return TorusPoint(tuple(out))


def orbit(sys: AffineSystem, x: TorusPoint, count: int) -> list[TorusPoint]:
    """[x, Tx, ..., T^(count-1) x] by repeated application."""
    pts = [x]
    for _ in range(count - 1):
        pts.append(apply(sys, pts[-1]))
    return pts


def stirling2(n: int, k: int) -> int:
    row = [1] + [0] * k
    for i in range(1, n + 1):
        new = [0] * (k + 1)
        for j in range(1, min(i, k) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]


def choose_alpha_polynomial(s: int, beta: TorusScalar) -> TorusPoint:
    """alpha with (T^n 0)_1 = n^s beta for the s x s Jordan block.

    Row 1 of the orbit sum is (C(n,1), ..., C(n,s)), and
    n^s = sum_j S(s, j) j! C(n, j), so alpha_j = S(s, j) j! beta.
    """
    if s < 1:
        raise ValueError("s must be positive")
    return TorusPoint(tuple(beta * (stirling2(s, j) * factorial(j)) for j in range(1, s + 1)))


@dataclass(frozen=True)
class BallSpec:
    """Open sup-metric ball, optionally a cylinder over the coordinates in ``mask``."""

    center: TorusPoint
    radius: Fraction
    mask: tuple[bool, ...] | None = None

    def __post_init__(self):
        r = Fraction(self.radius)
        object.__setattr__(self, "radius", r)
        if not 0 < r < Fraction(1, 2):
            raise ValueError("radius must lie in (0, 1/2)")
        if self.mask is not None:
            m = tuple(bool(b) for b in self.mask)
            if len(m) != self.center.dim:
                raise DimensionMismatch("mask length differs from center dimension")
            if not any(m):
                raise ValueError("mask must select at least one coordinate")
            object.__setattr__(self, "mask", m)

    @classmethod
    def cylinder(cls, center: TorusPoint, radius, coords: Sequence[int]) -> BallSpec:
        return cls(center, Fraction(radius), tuple(i in coords for i in range(center.dim)))

    def selected(self) -> list[int]:
        return [i for i in range(self.center.dim) if self.mask is None or self.mask[i]]

    def contains(self, x: TorusPoint) -> bool:
        r = self.radius
        for i in self.selected():
            d = x[i] - self.center[i]
            if min(d.num, d.den - d.num) * r.denominator >= r.numerator * d.den:
                return False
        return True

    def grid(self, resolution: int) -> list[TorusPoint]:
        """Witness grid: ``resolution`` points per coordinate.

        Selected coordinates use midpoints of ``resolution`` equal cells of the
        diameter (so every point is strictly inside); free coordinates use
        j/resolution.
        """
        if resolution < 1:
            raise ValueError("grid resolution must be positive")
        backend, bits = self.center.backend, self.center.bits or 128
        axes = []
        for i in range(self.center.dim):
            c = self.center[i]
            if self.mask is None or self.mask[i]:
                offs = [-self.radius + self.radius * (2 * j + 1) / resolution for j in range(resolution)]
                axes.append([c + TorusScalar.from_value(o, backend, bits) for o in offs])
            else:
                axes.append([TorusScalar.make(j, resolution, backend, bits) for j in range(resolution)])
        pts = [()]
        for ax in axes:
            pts = [p + (a,) for p in pts for a in ax]
        return [TorusPoint(p) for p in pts]


def ball(center: TorusPoint, radius) -> BallSpec:
    return BallSpec(center, Fraction(radius))


def return_times_point(sys: AffineSystem, x: TorusPoint, U: BallSpec, N: int) -> list[int]:
    """{n in [1, N] : T^n x in U}."""
    if N < 1:
        raise ValueError("window must be positive")
    out = []
    p = x
    for n in range(1, N + 1):
        p = apply(sys, p)
        if U.contains(p):
            out.append(n)
    return out


def witness_points(sys: AffineSystem, U: BallSpec, grid: int, orbit_witnesses: int = 32) -> list[TorusPoint]:
    """Grid points of U followed by center-orbit points T^j c (0 <= j < orbit_witnesses) lying in U."""
    pts = U.grid(grid)
    seen = set(pts)
    p = U.center
    for _ in range(orbit_witnesses):
        if U.contains(p) and p not in seen:
            pts.append(p)
            seen.add(p)
        p = apply(sys, p)
    return pts


def progression_in(sys: AffineSystem, x: TorusPoint, U: BallSpec, n: int, ell: int) -> bool:
    """x, T^n x, ..., T^(ell n) x all in U."""
    if not U.contains(x):
        return False
    return all(U.contains(iterate(sys, x, k * n)) for k in range(1, ell + 1))


def find_multi_return_witness(sys: AffineSystem, U: BallSpec, ell: int, n: int,
                              witnesses: Sequence[TorusPoint]) -> TorusPoint | None:
    for x in witnesses:
        if progression_in(sys, x, U, n, ell):
            return x
    return None


def multi_return_witnesses(sys: AffineSystem, U: BallSpec, ell: int, N: int, grid: int = 8,
                           orbit_witnesses: int = 32) -> dict[int, TorusPoint]:
    """n -> first witness x with x, T^n x, ..., T^(ell n) x in U, for n in [1, N].

    A lower approximation of N^ell(U): only the finite witness set is tried.
    Each witness is followed along its own orbit up to ell*N steps.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    found: dict[int, TorusPoint] = {}
    for x in witness_points(sys, U, grid, orbit_witnesses):
        inside = np.zeros(ell * N + 1, dtype=bool)
        p = x
        inside[0] = U.contains(p)
        if not inside[0]:
            continue
        for m in range(1, ell * N + 1):
            p = apply(sys, p)
            inside[m] = U.contains(p)
        ok = np.ones(N + 1, dtype=bool)
        ns = np.arange(N + 1)
        for k in range(1, ell + 1):
            ok &= inside[k * ns]
        for n in np.nonzero(ok[1:])[0] + 1:
            found.setdefault(int(n), x)
    return dict(sorted(found.items()))


def multi_return_times(sys: AffineSystem, U: BallSpec, ell: int, N: int, grid: int = 8,
                       orbit_witnesses: int = 32) -> list[int]:
    return list(multi_return_witnesses(sys, U, ell, N, grid, orbit_witnesses))


def product_system(sys1: AffineSystem, sys2: AffineSystem) -> AffineSystem:
    if sys1.backend != sys2.backend or sys1.alpha.bits != sys2.alpha.bits:
        raise BackendMismatch(f"{sys1.backend} vs {sys2.backend}")
    return AffineSystem(UnipotentMatrix.block_diagonal(sys1.M, sys2.M), sys1.alpha.concat(sys2.alpha))


def split_point(x: TorusPoint, first_dim: int) -> tuple[TorusPoint, TorusPoint]:
    return TorusPoint(x.coords[:first_dim]), TorusPoint(x.coords[first_dim:])


def _phase(t, n: np.ndarray) -> np.ndarray:
    """frac(n t) as floats, exact before the final division."""
    if isinstance(t, TorusScalar):
        num, den = t.num, t.den
    else:
        t = Fraction(t)
        num, den = t.numerator % t.denominator, t.denominator
    return np.array([(int(k) * num) % den / den for k in n], dtype=float)


def weyl_average(beta: TorusScalar, t, N: int, interval=(Fraction(1, 4), Fraction(3, 4))) -> complex:
    """(1/N) sum_{n<=N} 1_I(n^2 beta) exp(2 pi i n t), I = [lo, hi) half-open."""
    if N < 1:
        raise ValueError("N must be positive")
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    num, den = beta.num, beta.den
    ind = np.empty(N, dtype=bool)
    for n in range(1, N + 1):
        v = (n * n * num) % den
        # lo <= v/den < hi
        ind[n - 1] = v * lo.denominator >= lo.numerator * den and v * hi.denominator < hi.numerator * den
    ns = np.arange(1, N + 1)
    if not ind.any():
        return 0j
    phases = _phase(t, ns[ind])
    return complex(np.exp(2j * np.pi * phases).sum() / N)

