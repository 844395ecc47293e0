"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from recurrence_lab.intsets import (
    IP,
    Bohr,
    Complement,
    Difference,
    Dilate,
    Explicit,
    Intersection,
    PowerBohr,
    Powers,
    Primes,
    Residue,
    Union,
    squares,
)
from recurrence_lab.torus import FIXED, TorusScalar, irrational_surrogate


def specs():
    beta = st.sampled_from([irrational_surrogate("golden"), irrational_surrogate("sqrt2"),
                            TorusScalar.make(3, 7), irrational_surrogate("sqrt2", FIXED)])
    eps = st.sampled_from([Fraction(1, 10), Fraction(1, 4), Fraction(2, 5)])
    leaves = st.one_of(
        st.lists(st.integers(1, 300), max_size=12).map(lambda v: Explicit(tuple(v))),
        st.builds(Residue, st.integers(1, 7), st.integers(0, 6)),
        st.builds(lambda b, e: Bohr((b,), e), beta, eps),
        st.builds(PowerBohr, st.integers(1, 3), beta, eps, st.sampled_from(["inside", "outside"])),
        st.lists(st.integers(1, 60), min_size=1, max_size=6, unique=True).map(lambda g: IP(tuple(g))),
        st.lists(st.integers(1, 80), min_size=2, max_size=8, unique=True).map(lambda v: Difference(Explicit(tuple(v)))),
        st.just(squares()),
        st.builds(Powers, st.integers(2, 5)),
        st.builds(Primes, st.integers(-1, 1)),
    )
    return st.recursive(leaves, lambda kids: st.one_of(
        st.builds(Union, kids, kids),
        st.builds(Intersection, kids, kids),
        st.builds(Complement, kids),
        st.builds(Dilate, kids, st.integers(1, 4)),
    ), max_leaves=4)
