from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from recurrence_lab.coloring import (
    Coloring,
    WindowMismatch,
    affine_color_count,
    affine_coloring,
    affine_coloring_frequency,
    find_mono_ap,
    heuristic_avoiding_coloring,
    is_mono_ap,
    join_colorings,
    not2large_length,
    power_coloring,
    random_coloring,
    rotation_coloring,
    split_join_color,
    syndetic_encode,
)
from recurrence_lab.intsets import Explicit, PowerBohr, naturals, odds
from recurrence_lab.torus import TorusScalar, irrational_surrogate


def brute_force_ap(c, length, steps):
    N = c.window
    for d in sorted(steps):
        for a in range(1, N - (length - 1) * d + 1):
            if len({c(a + k * d) for k in range(length)}) == 1:
                return a, d
    return None


def test_rotation_coloring_examples():
    parity = rotation_coloring(TorusScalar.make(1, 2), 2, 10)
    assert [parity(n) for n in range(1, 11)] == [2, 1] * 5
    assert rotation_coloring(irrational_surrogate("golden"), 2, 5)(1) == 2
    assert set(rotation_coloring(TorusScalar.zero(), 3, 20).assignment[1:]) == {1}


def test_power_coloring_examples():
    beta = irrational_surrogate("sqrt2")
    assert power_coloring(beta, 1, 4, 200) == power_coloring(beta, 1, 4, 200)
    assert np.array_equal(power_coloring(beta, 1, 4, 200).assignment, rotation_coloring(beta, 4, 200).assignment)
    assert affine_color_count(2, Fraction(1, 4)) == 8
    assert power_coloring(TorusScalar.make(1, 5), 2, 5, 3)(2) == 5


def test_color_classes_partition():
    c = power_coloring(irrational_surrogate("e-frac"), 3, 6, 500)
    classes = c.classes()
    union = sorted(n for members in classes.values() for n in members)
    assert union == list(range(1, 501))


def test_find_mono_ap_examples():
    const = Coloring.from_list([1] * 30, 1)
    ap = find_mono_ap(const, 5, naturals())
    assert (ap.start, ap.step, ap.color) == (1, 1, 1)
    parity = rotation_coloring(TorusScalar.make(1, 2), 2, 100)
    assert find_mono_ap(parity, 2, odds()) is None
    alpha = irrational_surrogate("sqrt2")
    eps = Fraction(1, 10)
    c = rotation_coloring(alpha, 2, 20000)
    assert find_mono_ap(c, not2large_length(eps), PowerBohr(1, alpha, eps, "outside")) is None
    assert not2large_length(eps) == 6


@given(st.integers(2, 3), st.integers(2, 4), st.integers(0, 10**6))
def test_find_mono_ap_matches_brute_force(r, length, seed):
    rng = np.random.default_rng(seed)
    c = random_coloring(r, 60, rng)
    steps = sorted(set(int(x) for x in rng.integers(1, 30, size=6)))
    ap = find_mono_ap(c, length, steps)
    oracle = brute_force_ap(c, length, steps)
    assert (None if ap is None else (ap.start, ap.step)) == oracle
    if ap is not None:
        assert is_mono_ap(c, ap.start, ap.step, length)


def test_affine_coloring_frequency_uses_lift():
    alpha = TorusScalar.make(3, 4)  # lifts to -1/4
    freq = affine_coloring_frequency(alpha, 2)
    assert freq == TorusScalar.make(-1, 8)
    c = affine_coloring(alpha, 2, Fraction(1, 4), 50)
    assert c.colors == 8 and c.provenance["kind"] == "affine"


def test_syndetic_encode_examples():
    const = Coloring.from_list([1] * 50, 1)
    enc = syndetic_encode(const)
    assert enc.members == list(range(2, 52)) and enc.max_gap <= 1
    parity = rotation_coloring(TorusScalar.make(1, 2), 2, 10)
    enc = syndetic_encode(parity)
    assert 5 in enc and 8 in enc
    assert 6 not in enc and 7 not in enc


@given(st.integers(1, 5), st.integers(5, 300), st.integers(0, 10**6))
def test_syndetic_gap_bound(r, N, seed):
    c = random_coloring(r, N, np.random.default_rng(seed))
    enc = syndetic_encode(c)
    assert enc.max_gap <= 2 * r - 1


def plant_progression_in_E(rng, r, ell, N):
    """Random coloring forced so that E contains an AP of ell*r terms and step n >= r."""
    while True:
        n = int(rng.integers(r, 3 * r + 4))
        a0 = int(rng.integers(r + 1, 4 * r + 1))
        if (a0 + (ell * r - 1) * n - 1) // r <= N:
            break
    assign = rng.integers(1, r + 1, size=N + 1)
    for k in range(ell * r):
        m, i = divmod(a0 + k * n - 1, r)
        assign[m] = i + 1  # terms land in distinct m because n >= r
    return Coloring(assign, r), a0, n


def test_decoder_plant_and_recover():
    rng = np.random.default_rng(5)
    for _ in range(50):
        r = int(rng.integers(1, 6))
        ell = int(rng.integers(1, 4))
        c, a0, n = plant_progression_in_E(rng, r, ell, 200)
        enc = syndetic_encode(c)
        assert all(a0 + k * n in enc for k in range(ell * r))
        ap = enc.decode(a0, n, ell * r)
        assert ap.step == n and ap.length == ell
        assert ap.start == (a0 - 1) // r and ap.color == (a0 - 1) % r + 1
        assert is_mono_ap(c, ap.start, ap.step, ell) and c(ap.start) == ap.color
    with pytest.raises(ValueError):
        enc.decode(a0, n, ell * r + 1 if r > 1 else 0)


def test_join_examples():
    parity = rotation_coloring(TorusScalar.make(1, 2), 2, 30)
    mod3 = rotation_coloring(TorusScalar.make(1, 3), 3, 30)
    j = join_colorings(parity, mod3)
    assert j.colors == 6
    labels = {}
    for n in range(1, 31):
        labels.setdefault(n % 6, set()).add(j(n))
    assert all(len(v) == 1 for v in labels.values()) and len({min(v) for v in labels.values()}) == 6
    const = Coloring.from_list([1] * 30, 1)
    jc = join_colorings(parity, const)
    assert sorted(map(sorted, jc.classes().values())) == sorted(map(sorted, parity.classes().values()))
    assert split_join_color(j(7), 3) == (parity(7), mod3(7))
    with pytest.raises(WindowMismatch):
        join_colorings(parity, rotation_coloring(TorusScalar.make(1, 3), 3, 31))


@given(st.integers(0, 10**6))
def test_join_mono_implies_factor_mono(seed):
    rng = np.random.default_rng(seed)
    c1, c2 = random_coloring(2, 80, rng), random_coloring(2, 80, rng)
    j = join_colorings(c1, c2)
    ap = find_mono_ap(j, 3, range(1, 40))
    if ap is not None:
        assert is_mono_ap(c1, ap.start, ap.step, 3) and is_mono_ap(c2, ap.start, ap.step, 3)


def test_json_round_trip():
    c = affine_coloring(irrational_surrogate("golden"), 2, Fraction(1, 4), 300)
    assert Coloring.from_json(c.to_json()) == c


def test_heuristic_search_is_seeded_and_verified():
    steps = Explicit((1, 2, 3))
    a = heuristic_avoiding_coloring(steps, 2, 3, 8, seed=1)
    b = heuristic_avoiding_coloring(steps, 2, 3, 8, seed=1)
    assert a is not None and a == b
    assert find_mono_ap(a, 3, steps) is None
    assert a.provenance["kind"] == "heuristic"
    # van der Waerden W(3; 2) = 9: every 2-coloring of [1, 9] has a mono 3-AP
    assert heuristic_avoiding_coloring(naturals(), 2, 3, 9, seed=0, restarts=2, max_iters=200) is None
