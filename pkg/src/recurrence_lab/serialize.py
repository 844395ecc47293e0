"""JSON forms for scalars, points, systems and balls."""

from __future__ import annotations

from fractions import Fraction

from .affine import AffineSystem, BallSpec
from .torus import EXACT, FIXED, TorusPoint, TorusScalar
from .unipotent import UnipotentMatrix


def scalar_to_json(t: TorusScalar) -> dict:
    if t.backend == EXACT:
        return {"backend": EXACT, "num": str(t.num), "den": str(t.den)}
    return {"backend": FIXED, "bits": t.bits, "word": hex(t.num)}


def scalar_from_json(obj: dict) -> TorusScalar:
    if obj["backend"] == EXACT:
        return TorusScalar(int(obj["num"]), int(obj["den"]), EXACT)
    if obj["backend"] == FIXED:
        return TorusScalar(int(obj["word"], 16), 1 << int(obj["bits"]), FIXED)
    raise ValueError(f"unknown backend {obj['backend']!r}")


def point_to_json(x: TorusPoint) -> list:
    return [scalar_to_json(c) for c in x]


def point_from_json(obj: list) -> TorusPoint:
    return TorusPoint(tuple(scalar_from_json(c) for c in obj))


def system_to_json(sys: AffineSystem) -> dict:
    return {"M": [list(r) for r in sys.M.entries], "blocks": list(sys.M.blocks),
            "alpha": point_to_json(sys.alpha)}


def system_from_json(obj: dict) -> AffineSystem:
    m = UnipotentMatrix(tuple(tuple(r) for r in obj["M"]), tuple(obj.get("blocks", ())))
    return AffineSystem(m, point_from_json(obj["alpha"]))


def ball_to_json(U: BallSpec) -> dict:
    return {"center": point_to_json(U.center), "radius": str(U.radius),
            "mask": list(U.mask) if U.mask is not None else None}


def ball_from_json(obj: dict) -> BallSpec:
    mask = obj.get("mask")
    return BallSpec(point_from_json(obj["center"]), Fraction(obj["radius"]),
                    tuple(mask) if mask is not None else None)
