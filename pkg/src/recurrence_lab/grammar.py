"""Text mini-grammar for integer sets, affine systems and coloring recipes.

    spec    := NAME [ '(' spec (';' spec)* (';' KEY '=' value)* ')' ] [ ':' params ]
    params  := item (',' item)*
    item    := value | KEY '=' value
    value   := '[' value (',' value)* ']' | 'cf[' INT (';' INT)... ']' | ATOM

Examples::

    diff(explicit:1,4,9,16)
    powerbohr:s=2,beta=sqrt2,eps=0.25,outside
    bohr:[golden,1/7],eps=0.1
    union(odds;dilate(squares;k=3))
    rotation:golden            jordan:[0,0,sqrt2]            flw:s=2,beta=sqrt2
    rotation:alpha=golden,r=2  affine:alpha=sqrt2,ell=2,delta=1/4

Scalars are named surrogates (sqrt2, golden, efrac), ``cf[a0;a1;...]``,
fractions ``p/q``, decimals, or fixed-point words ``fx<bits>.<hex>``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import coloring as col
from .affine import AffineSystem, choose_alpha_polynomial, product_system
from .intsets import (
    IP,
    Bohr,
    Complement,
    Difference,
    Dilate,
    Explicit,
    IntegerSetSpec,
    Intersection,
    PolyImage,
    PowerBohr,
    Powers,
    Primes,
    Residue,
    Union,
)
from .torus import DEFAULT_BITS, EXACT, FIXED, TorusPoint, TorusScalar, irrational_surrogate
from .unipotent import UnipotentMatrix


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, expected: str):
        self.text, self.pos, self.expected = text, pos, expected
        super().__init__(f"parse error at position {pos}: expected {expected} in {text!r}")


# tree parsing

@dataclass
class Node:
    name: str
    children: list  # nested Nodes (inside parentheses)
    options: dict  # key=value inside parentheses
    params: list  # positional values after ':'
    kwargs: dict  # key=value after ':'
    pos: int


_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")
_ATOM = re.compile(r"[^,;()\[\]=\s]+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def error(self, expected: str):
        raise ParseError(self.text, self.i, expected)

    def peek(self) -> str:
        return self.text[self.i] if self.i < len(self.text) else ""

    def eat(self, ch: str):
        if self.peek() != ch:
            self.error(repr(ch))
        self.i += 1

    def name(self) -> str:
        m = _NAME.match(self.text, self.i)
        if not m:
            self.error("a variant name")
        self.i = m.end()
        return m.group()

    def spec(self) -> Node:
        start = self.i
        name = self.name()
        children, options, params, kwargs = [], {}, [], {}
        if self.peek() == "(":
            self.eat("(")
            while True:
                save = self.i
                m = _NAME.match(self.text, self.i)
                if m and self.text[m.end():m.end() + 1] == "=":
                    self.i = m.end() + 1
                    options[m.group()] = self.value()
                else:
                    self.i = save
                    children.append(self.spec())
                if self.peek() == ";":
                    self.eat(";")
                    continue
                break
            self.eat(")")
        if self.peek() == ":":
            self.eat(":")
            while self.peek() not in ("", ")", ";"):
                m = _NAME.match(self.text, self.i)
                if m and self.text[m.end():m.end() + 1] == "=":
                    self.i = m.end() + 1
                    kwargs[m.group()] = self.value()
                else:
                    params.append(self.value())
                if self.peek() != ",":
                    break
                self.eat(",")
        return Node(name, children, options, params, kwargs, start)

    def value(self):
        if self.text.startswith("cf[", self.i):
            self.i += 3
            start = self.i
            end = self.text.find("]", self.i)
            if end < 0:
                self.error("']' closing the continued fraction")
            body = self.text[start:end]
            self.i = end + 1
            try:
                return ("cf", tuple(int(t) for t in body.split(";")))
            except ValueError:
                self.i = start
                self.error("integers separated by ';'")
        if self.peek() == "[":
            self.eat("[")
            items = []
            if self.peek() != "]":
                while True:
                    items.append(self.value())
                    if self.peek() == ",":
                        self.eat(",")
                        continue
                    break
            self.eat("]")
            return items
        m = _ATOM.match(self.text, self.i)
        if not m:
            self.error("a value")
        self.i = m.end()
        return m.group()

    def parse(self) -> Node:
        node = self.spec()
        if self.i != len(self.text):
            self.error("end of input")
        return node


def parse_tree(text: str) -> Node:
    return _Parser(text.strip()).parse()


# scalars

_SURROGATE_ALIASES = {"sqrt2": "sqrt2", "golden": "golden", "efrac": "e-frac", "e-frac": "e-frac"}
_FX = re.compile(r"fx(\d+)\.([0-9a-fA-F]+)$")


def parse_scalar(token, backend: str = EXACT, bits: int = DEFAULT_BITS) -> TorusScalar:
    if isinstance(token, tuple) and token[0] == "cf":
        return irrational_surrogate("custom-cf", backend, bits, cf=list(token[1]))
    if not isinstance(token, str):
        raise ValueError(f"expected a scalar, got {token!r}")
    if token in _SURROGATE_ALIASES:
        return irrational_surrogate(_SURROGATE_ALIASES[token], backend, bits)
    m = _FX.match(token)
    if m:
        b = int(m.group(1))
        return TorusScalar(int(m.group(2), 16) % (1 << b), 1 << b, FIXED)
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a scalar: {token!r}") from None
    return TorusScalar.make(value.numerator, value.denominator, backend, bits)


def format_scalar(t: TorusScalar) -> str:
    if t.backend == EXACT:
        return f"{t.num}/{t.den}"
    return f"fx{t.bits}.{t.num:x}"


def _int(token, what: str) -> int:
    try:
        return int(token)
    except (TypeError, ValueError):
        raise ValueError(f"{what} must be an integer, got {token!r}") from None


def _frac(token, what: str) -> Fraction:
    try:
        return Fraction(token)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValueError(f"{what} must be a number, got {token!r}") from None


def _flatten(params) -> list:
    if len(params) == 1 and isinstance(params[0], list):
        return params[0]
    return params


# integer sets

def parse_set(text: str, backend: str = EXACT, bits: int = DEFAULT_BITS) -> IntegerSetSpec:
    return _build_set(parse_tree(text), text, backend, bits)


def _build_set(node: Node, text: str, backend: str, bits: int) -> IntegerSetSpec:
    name, p, kw = node.name, node.params, node.kwargs

    def fail(msg):
        raise ParseError(text, node.pos, msg)

    def need_children(k):
        if len(node.children) != k:
            fail(f"{k} nested spec(s) inside {name}(...)")
        return [_build_set(c, text, backend, bits) for c in node.children]

    try:
        if name == "explicit":
            return Explicit(tuple(_int(v, "member") for v in _flatten(p)))
        if name in ("all", "naturals"):
            return Residue(1, 0)
        if name == "odds":
            return Residue(2, 1)
        if name == "evens":
            return Residue(2, 0)
        if name == "squares":
            return PolyImage((0, 0, 1))
        if name == "residue":
            return Residue(_int(kw.get("m"), "m"), _int(kw.get("r", 0), "r"))
        if name == "bohr":
            freqs = p[0] if p and isinstance(p[0], list) else [v for v in p]
            if not freqs:
                raise ParseError(text, max(text.find("[", node.pos), node.pos) + 1,
                                 "at least one frequency inside [...]")
            if "eps" not in kw:
                fail("eps=<value>")
            return Bohr(tuple(parse_scalar(f, backend, bits) for f in freqs), _frac(kw["eps"], "eps"))
        if name == "powerbohr":
            side = "outside"
            for flag in p:
                if flag not in ("inside", "outside"):
                    fail("'inside' or 'outside'")
                side = flag
            for key in ("s", "beta", "eps"):
                if key not in kw:
                    fail(f"{key}=<value>")
            return PowerBohr(_int(kw["s"], "s"), parse_scalar(kw["beta"], backend, bits),
                             _frac(kw["eps"], "eps"), side)
        if name == "diff":
            (base,) = need_children(1)
            horizon = node.options.get("horizon")
            return Difference(base, _int(horizon, "horizon") if horizon is not None else None)
        if name == "ip":
            gens = kw.get("gens", _flatten(p))
            depth = kw.get("depth")
            return IP(tuple(_int(g, "generator") for g in gens), _int(depth, "depth") if depth is not None else None)
        if name == "poly":
            return PolyImage(tuple(_int(c, "coefficient") for c in _flatten(p)))
        if name == "powers":
            return Powers(_int(p[0] if p else kw.get("base"), "base"))
        if name == "primes":
            return Primes(_int(kw.get("shift", 0), "shift"))
        if name == "union":
            a, b = need_children(2)
            return Union(a, b)
        if name == "inter":
            a, b = need_children(2)
            return Intersection(a, b)
        if name == "compl":
            (a,) = need_children(1)
            return Complement(a)
        if name == "dilate":
            (a,) = need_children(1)
            if "k" not in node.options:
                fail("k=<factor> inside dilate(...)")
            return Dilate(a, _int(node.options["k"], "k"))
    except ParseError:
        raise
    except ValueError as exc:
        fail(f"valid parameters for {name} ({exc})")
    fail("a known set variant (explicit, residue, odds, evens, all, squares, bohr, powerbohr, diff, ip, "
         "poly, powers, primes, union, inter, compl, dilate)")


def format_set(spec: IntegerSetSpec) -> str:
    if isinstance(spec, Explicit):
        return "explicit:" + ",".join(map(str, spec.values))
    if isinstance(spec, Residue):
        return f"residue:m={spec.modulus},r={spec.residue}"
    if isinstance(spec, Bohr):
        return "bohr:[" + ",".join(format_scalar(a) for a in spec.alphas) + f"],eps={spec.eps}"
    if isinstance(spec, PowerBohr):
        return f"powerbohr:s={spec.s},beta={format_scalar(spec.beta)},eps={spec.eps},{spec.side}"
    if isinstance(spec, Difference):
        tail = f";horizon={spec.horizon}" if spec.horizon is not None else ""
        return f"diff({format_set(spec.base)}{tail})"
    if isinstance(spec, IP):
        out = "ip:gens=[" + ",".join(map(str, spec.generators)) + "]"
        return out + (f",depth={spec.depth}" if spec.depth is not None else "")
    if isinstance(spec, PolyImage):
        return "poly:" + ",".join(map(str, spec.coeffs))
    if isinstance(spec, Powers):
        return f"powers:{spec.base}"
    if isinstance(spec, Primes):
        return f"primes:shift={spec.shift}"
    if isinstance(spec, Union):
        return f"union({format_set(spec.a)};{format_set(spec.b)})"
    if isinstance(spec, Intersection):
        return f"inter({format_set(spec.a)};{format_set(spec.b)})"
    if isinstance(spec, Complement):
        return f"compl({format_set(spec.a)})"
    if isinstance(spec, Dilate):
        return f"dilate({format_set(spec.spec)};k={spec.factor})"
    raise TypeError(f"unknown spec {spec!r}")


# systems

def parse_system(text: str, backend: str = EXACT, bits: int = DEFAULT_BITS) -> AffineSystem:
    return _build_system(parse_tree(text), text, backend, bits)


def _point(values, backend, bits) -> TorusPoint:
    return TorusPoint(tuple(parse_scalar(v, backend, bits) for v in values))


def _build_system(node: Node, text: str, backend: str, bits: int) -> AffineSystem:
    name, p, kw = node.name, node.params, node.kwargs

    def fail(msg):
        raise ParseError(text, node.pos, msg)

    try:
        if name == "rotation":
            vals = _flatten(p)
            if not vals:
                fail("at least one rotation frequency")
            return AffineSystem.rotation(_point(vals, backend, bits))
        if name == "jordan":
            vals = _flatten(p)
            if not vals:
                fail("the translation vector")
            return AffineSystem.jordan(_point(vals, backend, bits))
        if name == "flw":
            if "s" not in kw or "beta" not in kw:
                fail("s=<degree>,beta=<scalar>")
            s = _int(kw["s"], "s")
            return AffineSystem.jordan(choose_alpha_polynomial(s, parse_scalar(kw["beta"], backend, bits)))
        if name == "product":
            if len(node.children) != 2:
                fail("two nested systems inside product(...)")
            a, b = (_build_system(c, text, backend, bits) for c in node.children)
            return product_system(a, b)
        if name == "affine":
            rows = kw.get("M")
            if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                fail("M=[[..],[..]] integer rows")
            blocks = tuple(_int(b, "block size") for b in kw.get("blocks", []))
            m = UnipotentMatrix(tuple(tuple(_int(x, "matrix entry") for x in r) for r in rows), blocks)
            return AffineSystem(m, _point(kw.get("alpha", []), backend, bits))
    except ParseError:
        raise
    except ValueError as exc:
        fail(f"valid parameters for {name} ({exc})")
    fail("a known system (rotation, jordan, flw, product, affine)")


def format_system(sys: AffineSystem) -> str:
    alpha = ",".join(format_scalar(a) for a in sys.alpha)
    if sys.M.blocks == (1,) * sys.s:
        return f"rotation:[{alpha}]"
    if sys.M.is_jordan_block:
        return f"jordan:[{alpha}]"
    rows = ",".join("[" + ",".join(map(str, r)) + "]" for r in sys.M.entries)
    blocks = ",".join(map(str, sys.M.blocks))
    return f"affine:M=[{rows}],blocks=[{blocks}],alpha=[{alpha}]"


# colorings

@dataclass(frozen=True)
class ColoringRecipe:
    kind: str
    params: tuple  # sorted (key, value) pairs; values are scalars, ints, Fractions or recipes

    def get(self, key, default=None):
        return dict(self.params).get(key, default)

    def build(self, N: int) -> col.Coloring:
        if self.kind == "rotation":
            return col.rotation_coloring(self.get("alpha"), self.get("r", 2), N)
        if self.kind == "power":
            return col.power_coloring(self.get("beta"), self.get("ell"), self.get("m"), N)
        if self.kind == "affine":
            return col.affine_coloring(self.get("alpha"), self.get("ell"), self.get("delta"), N)
        if self.kind == "parity":
            return col.rotation_coloring(TorusScalar.make(1, 2), 2, N)
        if self.kind == "constant":
            import numpy as np
            return col.Coloring(np.ones(N + 1, dtype=np.int64), 1, {"kind": "constant"})
        if self.kind == "join":
            return col.join_colorings(self.get("left").build(N), self.get("right").build(N))
        raise ValueError(f"unknown coloring kind {self.kind!r}")


def parse_coloring(text: str, backend: str = EXACT, bits: int = DEFAULT_BITS) -> ColoringRecipe:
    return _build_coloring(parse_tree(text), text, backend, bits)


def _build_coloring(node: Node, text: str, backend: str, bits: int) -> ColoringRecipe:
    kw = node.kwargs

    def fail(msg):
        raise ParseError(text, node.pos, msg)

    def need(*keys):
        for k in keys:
            if k not in kw:
                fail(f"{k}=<value>")

    try:
        if node.name == "rotation":
            need("alpha")
            r = _int(kw.get("r", 2), "r")
            return ColoringRecipe("rotation", (("alpha", parse_scalar(kw["alpha"], backend, bits)), ("r", r)))
        if node.name == "power":
            need("beta", "ell", "m")
            return ColoringRecipe("power", (("beta", parse_scalar(kw["beta"], backend, bits)),
                                            ("ell", _int(kw["ell"], "ell")), ("m", _int(kw["m"], "m"))))
        if node.name == "affine":
            need("alpha", "ell", "delta")
            return ColoringRecipe("affine", (("alpha", parse_scalar(kw["alpha"], backend, bits)),
                                             ("delta", _frac(kw["delta"], "delta")), ("ell", _int(kw["ell"], "ell"))))
        if node.name in ("parity", "constant"):
            return ColoringRecipe(node.name, ())
        if node.name == "join":
            if len(node.children) != 2:
                fail("two nested colorings inside join(...)")
            left, right = (_build_coloring(c, text, backend, bits) for c in node.children)
            return ColoringRecipe("join", (("left", left), ("right", right)))
    except ParseError:
        raise
    except ValueError as exc:
        fail(f"valid parameters for {node.name} ({exc})")
    fail("a known coloring (rotation, power, affine, parity, constant, join)")


def format_coloring(recipe: ColoringRecipe) -> str:
    if recipe.kind in ("parity", "constant"):
        return recipe.kind
    if recipe.kind == "join":
        return f"join({format_coloring(recipe.get('left'))};{format_coloring(recipe.get('right'))})"
    parts = []
    for k, v in recipe.params:
        parts.append(f"{k}={format_scalar(v) if isinstance(v, TorusScalar) else v}")
    return f"{recipe.kind}:" + ",".join(parts)


def parse_spec(text: str, kind: str = "set", backend: str = EXACT, bits: int = DEFAULT_BITS):
    """Dispatch on ``kind``: 'set', 'system' or 'coloring'."""
    if kind == "set":
        return parse_set(text, backend, bits)
    if kind == "system":
        return parse_system(text, backend, bits)
    if kind == "coloring":
        return parse_coloring(text, backend, bits)
    raise ValueError(f"unknown spec kind {kind!r}")
