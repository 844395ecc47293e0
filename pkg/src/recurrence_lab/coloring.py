"""Finite colorings of [1, N] and monochromatic progression search."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .intsets import IntegerSetSpec, enumerate as enumerate_set
from .torus import TorusScalar


class WindowMismatch(ValueError):
    pass


class MonoAP(NamedTuple):
    start: int
    step: int
    color: int
    length: int

    def terms(self) -> list[int]:
        return [self.start + k * self.step for k in range(self.length)]


@dataclass(eq=False)
class Coloring:
    """Total map [1, N] -> {1, ..., r}; ``assignment[0]`` is unused and zero."""

    assignment: np.ndarray
    colors: int
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64).copy()
        if a.ndim != 1 or len(a) < 2:
            raise ValueError("assignment must cover a window [1, N] with N >= 1")
        a[0] = 0
        body = a[1:]
        if body.min() < 1 or body.max() > self.colors:
            raise ValueError(f"colors must lie in 1..{self.colors}")
        a.flags.writeable = False
        self.assignment = a

    @classmethod
    def from_list(cls, colors_of_1_to_N: Iterable[int], colors: int | None = None,
                  provenance: dict | None = None) -> Coloring:
        body = list(colors_of_1_to_N)
        r = colors if colors is not None else max(body)
        return cls(np.array([0] + body), r, provenance or {"kind": "explicit"})

    @property
    def window(self) -> int:
        return len(self.assignment) - 1

    def __call__(self, n: int) -> int:
        if not 1 <= n <= self.window:
            raise IndexError(f"{n} outside window [1, {self.window}]")
        return int(self.assignment[n])

    def classes(self) -> dict[int, list[int]]:
        return {c: [int(n) for n in np.nonzero(self.assignment == c)[0]] for c in range(1, self.colors + 1)}

    def __eq__(self, other):
        return (isinstance(other, Coloring) and self.colors == other.colors
                and np.array_equal(self.assignment, other.assignment) and self.provenance == other.provenance)

    def to_json(self) -> dict:
        """Run-length form: runs of [color, length] over 1..N."""
        runs: list[list[int]] = []
        for c in self.assignment[1:].tolist():
            if runs and runs[-1][0] == c:
                runs[-1][1] += 1
            else:
                runs.append([c, 1])
        return {"window": self.window, "colors": self.colors, "runs": runs, "provenance": self.provenance}

    @classmethod
    def from_json(cls, obj: dict) -> Coloring:
        body = [c for c, length in obj["runs"] for _ in range(length)]
        if len(body) != obj["window"]:
            raise ValueError("run lengths do not cover the window")
        return cls(np.array([0] + body), int(obj["colors"]), dict(obj.get("provenance", {})))


def _scalar_desc(t: TorusScalar) -> str:
    return f"{t.num}/{t.den}" if t.backend == "exact" else f"fixed{t.bits}:{hex(t.num)}"


def rotation_coloring(alpha: TorusScalar, r: int, N: int) -> Coloring:
    """color(n) = j iff frac(n alpha) in [(j-1)/r, j/r)."""
    if r < 2:
        raise ValueError("need at least 2 colors")
    num, den = alpha.num, alpha.den
    a = np.zeros(N + 1, dtype=np.int64)
    v = 0
    for n in range(1, N + 1):
        v = (v + num) % den
        a[n] = v * r // den + 1
    return Coloring(a, r, {"kind": "rotation", "alpha": _scalar_desc(alpha), "r": r})


def power_coloring(beta: TorusScalar, ell: int, m: int, N: int) -> Coloring:
    """color(p) = j iff frac(p^ell beta) in [(j-1)/m, j/m)."""
    if ell < 1 or m < 2:
        raise ValueError("need ell >= 1 and m >= 2")
    num, den = beta.num, beta.den
    a = np.zeros(N + 1, dtype=np.int64)
    for p in range(1, N + 1):
        a[p] = (pow(p, ell) * num % den) * m // den + 1
    return Coloring(a, m, {"kind": "power", "beta": _scalar_desc(beta), "ell": ell, "m": m})


def not2large_length(eps) -> int:
    """Progression length 1 + ceil(1/(2 eps)) that the half-circle coloring forbids."""
    eps = Fraction(eps)
    return 1 + math.ceil(1 / (2 * eps))


def affine_color_count(ell: int, delta) -> int:
    """m = ceil(2^(ell-1) / delta)."""
    delta = Fraction(delta)
    if not 0 < delta <= Fraction(1, 2):
        raise ValueError("delta must lie in (0, 1/2]")
    return math.ceil(Fraction(2 ** (ell - 1)) / delta)


def affine_coloring_frequency(alpha: TorusScalar, ell: int) -> TorusScalar:
    """Lift alpha to (-1/2, 1/2], divide by ell!, reduce mod 1."""
    lifted = alpha.lift() / math.factorial(ell)
    return TorusScalar.make(lifted.numerator, lifted.denominator, alpha.backend, alpha.bits or 128)


def affine_coloring(alpha: TorusScalar, ell: int, delta, N: int) -> Coloring:
    """Coloring with no monochromatic (ell+1)-term AP whose step n has ||n^ell alpha|| > delta."""
    m = affine_color_count(ell, delta)
    c = power_coloring(affine_coloring_frequency(alpha, ell), ell, m, N)
    c.provenance = {"kind": "affine", "alpha": _scalar_desc(alpha), "ell": ell, "delta": str(Fraction(delta)),
                    "m": m}
    return c


def _steps_array(steps, limit: int) -> list[int]:
    if isinstance(steps, IntegerSetSpec):
        return enumerate_set(steps, limit) if limit >= 1 else []
    return sorted({int(d) for d in steps if 1 <= int(d) <= limit})


def find_mono_ap(coloring: Coloring, length: int, steps) -> MonoAP | None:
    """Smallest (step, start) monochromatic AP of ``length`` terms with step in ``steps``."""
    if length < 2:
        raise ValueError("length must be at least 2")
    c = coloring.assignment
    N = coloring.window
    max_step = (N - 1) // (length - 1)
    for d in _steps_array(steps, max_step):
        M = N - (length - 1) * d
        base = c[1:M + 1]
        ok = np.ones(M, dtype=bool)
        for k in range(1, length):
            ok &= base == c[1 + k * d:M + 1 + k * d]
            if not ok.any():
                break
        hits = np.flatnonzero(ok)
        if len(hits):
            a = int(hits[0]) + 1
            return MonoAP(a, d, int(c[a]), length)
    return None


def is_mono_ap(coloring: Coloring, start: int, step: int, length: int) -> bool:
    terms = [start + k * step for k in range(length)]
    if terms[0] < 1 or terms[-1] > coloring.window:
        return False
    return len({coloring(t) for t in terms}) == 1


def join_colorings(c1: Coloring, c2: Coloring) -> Coloring:
    """Common refinement: color (i, j) encoded as (i - 1) r2 + j."""
    if c1.window != c2.window:
        raise WindowMismatch(f"windows {c1.window} and {c2.window}")
    a = (c1.assignment - 1) * c2.colors + c2.assignment
    return Coloring(a, c1.colors * c2.colors,
                    {"kind": "join", "left": c1.provenance, "right": c2.provenance})


def split_join_color(color: int, r2: int) -> tuple[int, int]:
    return (color - 1) // r2 + 1, (color - 1) % r2 + 1


@dataclass
class SyndeticEncoding:
    """E = {r n + i : color(n) = i} and the map back to the coloring."""

    coloring: Coloring
    members: list[int]

    @property
    def r(self) -> int:
        return self.coloring.colors

    @property
    def max_gap(self) -> int:
        """Largest difference between consecutive points of E."""
        return max((b - a for a, b in zip(self.members, self.members[1:])), default=0)

    def __contains__(self, k: int) -> bool:
        if k <= self.r:
            return False
        n, i = divmod(k - 1, self.r)
        return n <= self.coloring.window and self.coloring(n) == i + 1

    def decode(self, start: int, step: int, length: int) -> MonoAP:
        """Turn an AP of ``length`` (a multiple of r) terms inside E into a mono AP of length/r terms."""
        r = self.r
        if length < r or length % r:
            raise ValueError(f"progression length must be a positive multiple of r = {r}")
        for k in range(length):
            if start + k * step not in self:
                raise ValueError(f"{start + k * step} is not in E")
        ell = length // r
        b, i = divmod(start - 1, r)
        return MonoAP(b, step, i + 1, ell)


def syndetic_encode(coloring: Coloring) -> SyndeticEncoding:
    r = coloring.colors
    members = [r * n + int(coloring.assignment[n]) for n in range(1, coloring.window + 1)]
    return SyndeticEncoding(coloring, members)


def random_coloring(r: int, N: int, rng: np.random.Generator) -> Coloring:
    return Coloring(np.concatenate([[0], rng.integers(1, r + 1, size=N)]), r, {"kind": "random"})


def heuristic_avoiding_coloring(steps, r: int, length: int, N: int, seed: int = 0,
                                restarts: int = 5, max_iters: int = 2000) -> Coloring | None:
    """Heuristic search for an r-coloring of [1, N] with no monochromatic AP of ``length``
    terms and step in ``steps``.

    Seeded random restarts with min-conflicts recoloring. Returning None proves
    nothing; a returned coloring is verified by exhaustive search.
    """
    rng = np.random.default_rng(seed)
    step_list = _steps_array(steps, (N - 1) // max(length - 1, 1))
    for restart in range(restarts):
        col = random_coloring(r, N, rng)
        a = col.assignment.copy()
        a.flags.writeable = True
        for _ in range(max_iters):
            cur = Coloring(a, r)
            bad = find_mono_ap(cur, length, step_list)
            if bad is None:
                return Coloring(a, r, {"kind": "heuristic", "seed": seed, "restart": restart})
            terms = bad.terms()
            best, best_cost = None, None
            for t in terms:
                for c in range(1, r + 1):
                    if c == a[t]:
                        continue
                    trial = a.copy()
                    trial[t] = c
                    cost = _conflicts_through(trial, t, length, step_list, N)
                    if best_cost is None or cost < best_cost:
                        best, best_cost = (t, c), cost
            t, c = best
            if rng.random() < 0.1:
                t = int(rng.choice(terms))
                c = int(rng.integers(1, r + 1))
            a[t] = c
    return None


def _conflicts_through(a: np.ndarray, t: int, length: int, steps: list[int], N: int) -> int:
    count = 0
    for d in steps:
        for offset in range(length):
            s = t - offset * d
            e = s + (length - 1) * d
            if s < 1 or e > N:
                continue
            seg = a[s:e + 1:d]
            if (seg == seg[0]).all():
                count += 1
    return count
