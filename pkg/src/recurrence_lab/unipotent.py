"""Exact algebra of unipotent integer matrices.

Matrices are tuples of row tuples of Python ints; real vectors are tuples of
``Fraction``. Coordinates are 1-indexed in the docstrings (matching the
usual triangular-solve presentation) and 0-indexed in the code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[Fraction, ...]


def identity(s: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(s)) for i in range(s))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    n, m = len(a), len(b[0])
    inner = len(b)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(inner) if a[i][k]) for j in range(m))
        for i in range(n)
    )


def mat_vec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(row[j] * v[j] for j in range(len(v)) if row[j]) for row in a)


def mat_sub(a, b) -> tuple:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def is_zero_matrix(a) -> bool:
    return all(x == 0 for row in a for x in row)


def _as_vector(v) -> Vector:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class UnipotentMatrix:
    """Integer matrix M with (M - Id)^s = 0, checked at construction.

    ``blocks`` records Jordan block sizes when M was built as a direct sum of
    single Jordan blocks; it is empty for an arbitrary unipotent matrix.
    """

    entries: Matrix
    blocks: tuple[int, ...] = field(default=())

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        s = len(rows)
        if s == 0 or any(len(r) != s for r in rows):
            raise ValueError("matrix must be square and non-empty")
        nil = mat_sub(rows, identity(s))
        p = nil
        for _ in range(s - 1):
            p = mat_mul(p, nil)
        if not is_zero_matrix(p):
            raise ValueError("matrix is not unipotent: (M - Id)^s != 0")
        if self.blocks and sum(self.blocks) != s:
            raise ValueError("block sizes do not add up to the dimension")

    @classmethod
    def jordan(cls, s: int) -> UnipotentMatrix:
        """Single Jordan block: ones on the diagonal and superdiagonal."""
        if s < 1:
            raise ValueError("dimension must be positive")
        return cls(tuple(tuple(int(j == i or j == i + 1) for j in range(s)) for i in range(s)), (s,))

    @classmethod
    def identity(cls, s: int) -> UnipotentMatrix:
        return cls(identity(s), (1,) * s)

    @classmethod
    def block_diagonal(cls, *parts: UnipotentMatrix) -> UnipotentMatrix:
        s = sum(p.s for p in parts)
        rows = []
        offset = 0
        for p in parts:
            for row in p.entries:
                rows.append((0,) * offset + row + (0,) * (s - offset - p.s))
            offset += p.s
        blocks = ()
        if all(p.blocks for p in parts):
            blocks = tuple(b for p in parts for b in p.blocks)
        return cls(tuple(rows), blocks)

    @property
    def s(self) -> int:
        return len(self.entries)

    @property
    def is_jordan_block(self) -> bool:
        return self.blocks == (self.s,)

    def nilpotent_powers(self) -> list[Matrix]:
        """[(M-Id)^0, (M-Id)^1, ..., (M-Id)^(s-1)]."""
        nil = mat_sub(self.entries, identity(self.s))
        out = [identity(self.s)]
        for _ in range(self.s - 1):
            out.append(mat_mul(out[-1], nil))
        return out


def matrix_power(m: UnipotentMatrix | Matrix, n: int) -> Matrix:
    """M^n by binary exponentiation (the oracle for the closed form)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    a = m.entries if isinstance(m, UnipotentMatrix) else tuple(tuple(r) for r in m)
    result = identity(len(a))
    while n:
        if n & 1:
            result = mat_mul(result, a)
        a = mat_mul(a, a)
        n >>= 1
    return result


def jordan_power_closed_form(s: int, n: int) -> Matrix:
    """M^n for the s x s Jordan block: entry (i, j) = C(n, j - i) for j >= i."""
    if s < 1 or n < 0:
        raise ValueError("need s >= 1 and n >= 0")
    return tuple(tuple(comb(n, j - i) if j >= i else 0 for j in range(s)) for i in range(s))


def jordan_orbit_sum(s: int, n: int) -> Matrix:
    """Id + M + ... + M^(n-1) for the Jordan block: entry (i, j) = C(n, j - i + 1)."""
    return tuple(tuple(comb(n, j - i + 1) if j >= i else 0 for j in range(s)) for i in range(s))


def unipotent_power(m: UnipotentMatrix, n: int) -> Matrix:
    """M^n = sum_k C(n, k) (M - Id)^k, valid for any unipotent M."""
    if m.is_jordan_block:
        return jordan_power_closed_form(m.s, n)
    return _binomial_combination(m, [comb(n, k) for k in range(m.s)])


def unipotent_orbit_sum(m: UnipotentMatrix, n: int) -> Matrix:
    """sum_{k<n} M^k = sum_k C(n, k+1) (M - Id)^k."""
    if m.is_jordan_block:
        return jordan_orbit_sum(m.s, n)
    return _binomial_combination(m, [comb(n, k + 1) for k in range(m.s)])


def _binomial_combination(m: UnipotentMatrix, coeffs: list[int]) -> Matrix:
    s = m.s
    powers = m.nilpotent_powers()
    out = [[0] * s for _ in range(s)]
    for c, p in zip(coeffs, powers):
        if c == 0:
            continue
        for i in range(s):
            for j in range(s):
                if p[i][j]:
                    out[i][j] += c * p[i][j]
    return tuple(tuple(r) for r in out)


def subgroup_membership(v: Sequence, j: int) -> bool:
    """Membership in G_j: coordinates i >= s - j + 2 (1-indexed) vanish."""
    s = len(v)
    if not 2 <= j <= s:
        raise ValueError(f"j must lie in 2..{s}")
    return all(Fraction(v[i]) == 0 for i in range(s - j + 1, s))


def solve_A(s: int, n: int, y: Sequence, blocks: Sequence[int] | None = None) -> Vector:
    """The unique x with x_1 = 0 and (M^n - Id) x = y, M the Jordan block.

    Back-substitution from the last equation ``y_{s-1} = n x_s`` upward.
    With ``blocks`` the solve is applied to each Jordan block separately
    (``x`` vanishes at the first coordinate of every block).
    """
    y = _as_vector(y)
    if len(y) != s:
        raise ValueError("vector dimension does not match s")
    if n < 1:
        raise ValueError("n must be positive: M^0 - Id is singular")
    if blocks is not None and tuple(blocks) != (s,):
        if sum(blocks) != s:
            raise ValueError("block sizes do not add up to s")
        out: list[Fraction] = []
        offset = 0
        for b in blocks:
            out.extend(solve_A(b, n, y[offset:offset + b]))
            offset += b
        return tuple(out)
    if y[-1] != 0:
        raise ValueError("last coordinate of y must vanish")
    p = [comb(n, k) for k in range(s)]
    x = [Fraction(0)] * s
    # row i (0-indexed): y_i = sum_{k>=1} p_k x_{i+k}
    for i in range(s - 2, -1, -1):
        acc = y[i]
        for k in range(2, s - i):
            acc -= p[k] * x[i + k]
        x[i + 1] = acc / p[1]
    return tuple(x)


def apply_power_minus_id(s: int, n: int, x: Sequence, times: int = 1) -> Vector:
    """(M^n - Id)^times x for the s x s Jordan block."""
    mn = jordan_power_closed_form(s, n)
    d = mat_sub(mn, identity(s))
    v = _as_vector(x)
    for _ in range(times):
        v = mat_vec(d, v)
    return v


def finite_difference(u: Sequence, ell: int) -> Fraction:
    """ell-th forward difference at 0: sum_k C(ell, k) (-1)^(ell-k) u_k."""
    if ell < 1:
        raise ValueError("ell must be positive")
    if len(u) != ell + 1:
        raise ValueError(f"expected {ell + 1} values, got {len(u)}")
    return sum((comb(ell, k) * (-1) ** (ell - k) * Fraction(u[k]) for k in range(ell + 1)), Fraction(0))


def sup_norm(v: Sequence) -> Fraction:
    return max((abs(Fraction(x)) for x in v), default=Fraction(0))


@dataclass
class LiftCertificate:
    """Exact bookkeeping for the perturbation ``y = A v_1 + A^2 v_2 + ... + A^r v_r``.

    For each k: ``lower`` is sum_{l<k} (M^n-Id)^k y_l (must vanish), ``diagonal``
    is (M^n-Id)^k y_k (must equal v_k), ``tail`` is the remaining sum and
    ``residual`` is (M^n-Id)^k y - v_k. ``orbit_defect`` is M^{kn} y + w_k,
    the quantity the perturbation is meant to make small.
    """

    s: int
    r: int
    n: int
    v: list[Vector]
    y_parts: list[Vector]
    y: Vector
    lower: list[Vector]
    diagonal: list[Vector]
    tail: list[Vector]
    residual: list[Vector]
    orbit_defect: list[Vector]
    y_in_subgroup: bool

    @property
    def lower_vanishes(self) -> bool:
        return all(all(c == 0 for c in t) for t in self.lower)

    @property
    def diagonal_exact(self) -> bool:
        return all(d == vk for d, vk in zip(self.diagonal, self.v))

    @property
    def residual_matches_tail(self) -> bool:
        return all(a == b for a, b in zip(self.residual, self.tail))

    def y_norm(self) -> Fraction:
        return sup_norm(self.y)

    def residual_norms(self) -> list[Fraction]:
        return [sup_norm(res) for res in self.residual]


def lift_perturbation(s: int, r: int, n: int, w: Sequence[Sequence]) -> LiftCertificate:
    """Build y from vertical defects w_1..w_r (each in G_s) and certify it."""
    if not 1 <= r <= s - 1:
        raise ValueError(f"r must lie in 1..{s - 1}")
    if n < 1:
        raise ValueError("n must be positive")
    if len(w) != r:
        raise ValueError(f"expected {r} defect vectors, got {len(w)}")
    ws = [_as_vector(wk) for wk in w]
    for k, wk in enumerate(ws, 1):
        if len(wk) != s or not subgroup_membership(wk, s):
            raise ValueError(f"w_{k} is not in G_s (only the first coordinate may be nonzero)")

    zero = (Fraction(0),) * s
    v = []
    for k in range(1, r + 1):
        acc = list(zero)
        for j in range(1, k + 1):
            c = -comb(k, j) * (-1) ** (k - j)
            for i in range(s):
                acc[i] += c * ws[j - 1][i]
        v.append(tuple(acc))

    # powers[k][l] = A^l v_k, l = 0..r
    a_powers = []
    for vk in v:
        chain = [vk]
        for _ in range(r):
            chain.append(solve_A(s, n, chain[-1]) if chain[-1][-1] == 0 else None)
        a_powers.append(chain)
    y_parts = [a_powers[k - 1][k] for k in range(1, r + 1)]
    y = tuple(sum(col, Fraction(0)) for col in zip(*y_parts))

    d = mat_sub(jordan_power_closed_form(s, n), identity(s))

    def apply_d(vec, times):
        for _ in range(times):
            vec = mat_vec(d, vec)
        return vec

    def vsum(vecs):
        return tuple(sum(col, Fraction(0)) for col in zip(*vecs)) if vecs else zero

    lower, diagonal, tail, residual, defect = [], [], [], [], []
    for k in range(1, r + 1):
        lower.append(vsum([apply_d(y_parts[l - 1], k) for l in range(1, k)]))
        diagonal.append(apply_d(y_parts[k - 1], k))
        tail.append(vsum([a_powers[l - 1][l - k] for l in range(k + 1, r + 1)]))
        full = apply_d(y, k)
        residual.append(tuple(a - b for a, b in zip(full, v[k - 1])))
        mkn = jordan_power_closed_form(s, k * n)
        defect.append(tuple(a + b for a, b in zip(mat_vec(mkn, y), ws[k - 1])))

    in_sub = s - r < 2 or subgroup_membership(y, s - r)
    return LiftCertificate(s, r, n, v, y_parts, y, lower, diagonal, tail, residual, defect, in_sub)
