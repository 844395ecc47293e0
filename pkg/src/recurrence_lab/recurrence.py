"""Finite-window testers for the equivalent forms of (multiple) recurrence.

A tester either returns a witness, which re-verifies from scratch, or reports
the window as exhausted at the stated resolution. Nothing here certifies the
infinite property.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import affine
from .affine import AffineSystem, BallSpec
from .coloring import Coloring, find_mono_ap
from .intsets import IntegerSetSpec, enumerate as enumerate_set, to_json as set_to_json, window_mask
from .serialize import point_to_json, system_to_json, ball_to_json
from .torus import TorusPoint, TorusScalar, circle_norm, torus_distance

MAX_ELL = 8


class EmptyCandidates(ValueError):
    pass


@dataclass
class RecurrenceReport:
    mode: str
    window: int
    witness: dict | None
    exhausted: bool
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.witness is None) != self.exhausted:
            raise ValueError("a report carries a witness or is exhausted, never both")

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        return {"mode": self.mode, "window": self.window, "witness": self.witness,
                "exhausted": self.exhausted, "parameters": self.parameters}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, obj: dict) -> RecurrenceReport:
        return cls(obj["mode"], obj["window"], obj["witness"], obj["exhausted"], obj["parameters"])


def _check_ell(ell: int, cap: int):
    if ell < 1:
        raise ValueError("ell must be positive")
    if ell > cap:
        raise ValueError(f"ell = {ell} exceeds the cap {cap}")


def recurrence_witness(sys: AffineSystem, R: IntegerSetSpec, U: BallSpec, ell: int, N: int,
                       grid: int = 8, orbit_witnesses: int = 32, ell_cap: int = MAX_ELL) -> RecurrenceReport:
    """Smallest n in R with x, T^n x, ..., T^(ell n) x in U for some witness x."""
    _check_ell(ell, ell_cap)
    witnesses = affine.witness_points(sys, U, grid, orbit_witnesses)
    params = {"system": system_to_json(sys), "R": set_to_json(R), "U": ball_to_json(U), "ell": ell,
              "grid": grid, "orbit_witnesses": orbit_witnesses, "witness_count": len(witnesses)}
    for n in enumerate_set(R, N):
        x = affine.find_multi_return_witness(sys, U, ell, n, witnesses)
        if x is not None:
            dist = max(torus_distance(affine.iterate(sys, x, k * n), U.center, U.mask) for k in range(ell + 1))
            return RecurrenceReport("recurrence", N, {"n": n, "point": point_to_json(x),
                                                      "max_center_distance": str(dist)}, False, params)
    return RecurrenceReport("recurrence", N, None, True, params)


def verify_recurrence_witness(sys: AffineSystem, U: BallSpec, ell: int, n: int, x: TorusPoint) -> bool:
    """Independent re-check: follow the orbit by repeated application, not the closed form."""
    p = x
    if not U.contains(p):
        return False
    for k in range(1, ell * n + 1):
        p = affine.apply(sys, p)
        if k % n == 0 and not U.contains(p):
            return False
    return True


class Profile(NamedTuple):
    value: Fraction
    n: int


def pointwise_profile(sys: AffineSystem, x: TorusPoint, R: IntegerSetSpec, ell: int, N: int,
                      ell_cap: int = MAX_ELL) -> Profile:
    """min over n in R of max_{1<=k<=ell} d(T^{kn} x, x); ties go to the smallest n."""
    _check_ell(ell, ell_cap)
    cands = enumerate_set(R, N)
    if not cands:
        raise EmptyCandidates(f"R is empty on [1, {N}]")
    best: Profile | None = None
    for n in cands:
        worst = Fraction(0)
        for k in range(1, ell + 1):
            d = torus_distance(affine.iterate(sys, x, k * n), x)
            if d > worst:
                worst = d
            if best is not None and worst >= best.value:
                break
        if best is None or worst < best.value:
            best = Profile(worst, n)
            if worst == 0:
                break
    return best


def partition_witness(coloring: Coloring, R: IntegerSetSpec, ell: int, ell_cap: int = MAX_ELL) -> RecurrenceReport:
    """Monochromatic AP of ell+1 terms with step in R."""
    _check_ell(ell, ell_cap)
    params = {"R": set_to_json(R), "ell": ell, "colors": coloring.colors, "coloring": coloring.provenance}
    ap = find_mono_ap(coloring, ell + 1, R)
    if ap is None:
        return RecurrenceReport("partition", coloring.window, None, True, params)
    return RecurrenceReport("partition", coloring.window,
                            {"start": ap.start, "step": ap.step, "color": ap.color, "length": ap.length},
                            False, params)


def find_ap_in_set(E: IntegerSetSpec, steps: IntegerSetSpec, length: int, N: int) -> tuple[int, int] | None:
    """Smallest (step, start) AP of ``length`` terms inside E cap [1, N] with step in ``steps``."""
    inE = window_mask(E, N)
    max_step = (N - 1) // (length - 1)
    for d in enumerate_set(steps, max_step) if max_step >= 1 else []:
        M = N - (length - 1) * d
        ok = inE[1:M + 1].copy()
        for k in range(1, length):
            ok &= inE[1 + k * d:M + 1 + k * d]
            if not ok.any():
                break
        hits = np.flatnonzero(ok)
        if len(hits):
            return int(hits[0]) + 1, d
    return None


def intersective_witness(E: IntegerSetSpec, R: IntegerSetSpec, ell: int, N: int,
                         ell_cap: int = MAX_ELL) -> RecurrenceReport:
    _check_ell(ell, ell_cap)
    if not window_mask(E, N).any():
        raise EmptyCandidates(f"E is empty on [1, {N}]")
    params = {"E": set_to_json(E), "R": set_to_json(R), "ell": ell}
    hit = find_ap_in_set(E, R, ell + 1, N)
    if hit is None:
        return RecurrenceReport("intersective", N, None, True, params)
    a, d = hit
    return RecurrenceReport("intersective", N, {"start": a, "step": d, "length": ell + 1}, False, params)


def bohr_min_profile(R: IntegerSetSpec, alphas: Sequence[TorusScalar], N: int) -> Profile:
    """min over n in R of max_i ||n alpha_i||; ties go to the smallest n."""
    if not alphas:
        raise ValueError("need at least one frequency")
    cands = enumerate_set(R, N)
    if not cands:
        raise EmptyCandidates(f"R is empty on [1, {N}]")
    best_num, best_den, best_n = None, 1, None
    for n in cands:
        # max_i of min(v, den - v)/den, compared as fractions without building them
        wn, wd = 0, 1
        for a in alphas:
            v = (n * a.num) % a.den
            d = min(v, a.den - v)
            if d * wd > wn * a.den:
                wn, wd = d, a.den
        if best_num is None or wn * best_den < best_num * wd:
            best_num, best_den, best_n = wn, wd, n
    return Profile(Fraction(best_num, best_den), best_n)


def bohr_profile_value(n: int, alphas: Sequence[TorusScalar]) -> Fraction:
    return max(circle_norm(a * n) for a in alphas)
