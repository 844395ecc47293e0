"""``recurrence-lab`` command line: run testers and certificates, emit JSON reports or CSV series.

Exit codes: 0 success, 2 when a search finds nothing on its window, 1 on errors.
Every JSON report echoes its full configuration under "config"; feeding that
echo back through ``recurrence-lab rerun report.json`` reproduces the report
byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import affine, cayley, coloring as col, recurrence, unipotent
from .grammar import (
    ParseError,
    format_coloring,
    format_set,
    format_system,
    parse_coloring,
    parse_scalar,
    parse_set,
    parse_system,
    parse_tree,
)
from .intsets import EmptyOnWindow, PowerBohr, enumerate_flagged, syndeticity_constant, to_json as set_to_json
from .serialize import point_to_json, system_to_json
from .torus import BackendMismatch, DEFAULT_BITS, DimensionMismatch, EXACT, FIXED, MIN_BITS, TorusPoint

SCHEMA = "recurrence-lab/1"
MAX_WINDOW = 10**7
EXIT_OK, EXIT_ERROR, EXIT_NONE = 0, 1, 2


class WindowOverflow(ValueError):
    pass


class SpecFileError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    action: str | None = None
    options: dict = field(default_factory=dict)
    backend: str = EXACT
    bits: int = DEFAULT_BITS
    window: int = 1000
    grid: int = 8
    seed: int = 0
    format: str = "json"
    jobs: int = 1  # window shards; never changes the report, so it is not echoed

    def to_json(self) -> dict:
        d = asdict(self)
        del d["jobs"]
        return d

    @classmethod
    def from_json(cls, obj: dict) -> RunConfig:
        return cls(**obj)

    def validate(self):
        if self.backend not in (EXACT, FIXED):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == FIXED and self.bits < MIN_BITS:
            raise ValueError(f"fixed backend needs at least {MIN_BITS} bits")
        if not 1 <= self.window <= MAX_WINDOW:
            raise WindowOverflow(f"window {self.window} outside [1, {MAX_WINDOW}]")
        if self.grid < 1:
            raise ValueError("grid resolution must be positive")
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")


@dataclass
class Outcome:
    status: str  # "ok", "found" or "none"
    result: dict
    rows: list[list] | None = None  # plot-ready series for --format csv
    header: list[str] | None = None
    message: str = ""

    @property
    def exit_code(self) -> int:
        return EXIT_NONE if self.status == "none" else EXIT_OK


# helpers

def _set(cfg, key="set"):
    return parse_set(cfg.options[key], cfg.backend, cfg.bits)


def _system(cfg):
    return parse_system(cfg.options["system"], cfg.backend, cfg.bits)


def _scalar(cfg, key):
    return parse_scalar(parse_tree_value(cfg.options[key]), cfg.backend, cfg.bits)


def parse_tree_value(text: str):
    """A scalar token as written on the command line; ``cf[...]`` becomes a tuple."""
    text = text.strip()
    if text.startswith("cf[") and text.endswith("]"):
        return ("cf", tuple(int(t) for t in text[3:-1].split(";")))
    return text


def _point(cfg, key, dim):
    text = cfg.options.get(key)
    if not text:
        return TorusPoint.zero(dim, cfg.backend, cfg.bits)
    vals = [t for t in text.strip("[]").split(",") if t]
    if len(vals) != dim:
        raise DimensionMismatch(f"{key} has {len(vals)} coordinates, system has dim {dim}")
    return TorusPoint(tuple(parse_scalar(parse_tree_value(v), cfg.backend, cfg.bits) for v in vals))


def _floats(x: TorusPoint) -> list[float]:
    return [float(c) for c in x]


# subcommands

def run_sets(cfg: RunConfig) -> Outcome:
    spec = _set(cfg)
    members, truncated = enumerate_flagged(spec, cfg.window)
    try:
        synd = syndeticity_constant(spec, cfg.window)
    except EmptyOnWindow:
        synd = None
    result = {"spec": format_set(spec), "spec_json": set_to_json(spec), "count": len(members),
              "members": members, "syndeticity_on_window": synd, "depth_truncated": truncated}
    status = "ok" if members else "none"
    return Outcome(status, result, [[n] for n in members], ["n"], "" if members else "set is empty on window")


def run_orbit(cfg: RunConfig) -> Outcome:
    sys_ = _system(cfg)
    x = _point(cfg, "point", sys_.s)
    steps = int(cfg.options.get("steps") or 16)
    if steps > cfg.window:
        raise WindowOverflow(f"steps {steps} exceed the window {cfg.window}")
    pts = affine.orbit(sys_, x, steps + 1)
    result = {"system": format_system(sys_), "system_json": system_to_json(sys_), "point": point_to_json(x),
              "orbit": [point_to_json(p) for p in pts], "minimality": sys_.minimality_diagnostic()}
    radius = cfg.options.get("radius")
    if radius:
        U = affine.BallSpec(x, Fraction(radius))
        result["return_times"] = affine.return_times_point(sys_, x, U, cfg.window)
    rows = [[k, *_floats(p)] for k, p in enumerate(pts)]
    return Outcome("ok", result, rows, ["k", *[f"x{i + 1}" for i in range(sys_.s)]])


def _recurrence(cfg: RunConfig, ell: int) -> Outcome:
    sys_ = _system(cfg)
    R = _set(cfg)
    center = _point(cfg, "center", sys_.s)
    U = affine.BallSpec(center, Fraction(cfg.options.get("radius") or "1/10"))
    rep = recurrence.recurrence_witness(sys_, R, U, ell, cfg.window, grid=cfg.grid)
    result = {"report": rep.to_json(), "system": format_system(sys_), "set": format_set(R),
              "witness_contract": f"grid={cfg.grid} per coordinate plus center orbit points"}
    if rep.found:
        from .serialize import point_from_json
        w = rep.witness
        result["verified"] = recurrence.verify_recurrence_witness(sys_, U, ell, w["n"], point_from_json(w["point"]))
    if sys_.M.blocks == (1,) * sys_.s:
        try:
            prof = recurrence.bohr_min_profile(R, list(sys_.alpha), cfg.window)
            result["bohr_min_profile"] = {"value": str(prof.value), "n": prof.n}
        except recurrence.EmptyCandidates:
            result["bohr_min_profile"] = None
    if cfg.options.get("profile"):
        prof = recurrence.pointwise_profile(sys_, center, R, ell, cfg.window)
        result["pointwise_profile"] = {"value": str(prof.value), "n": prof.n}
    if rep.found:
        return Outcome("found", result, [[rep.witness["n"]]], ["n"])
    return Outcome("none", result, [], ["n"], f"no witness on [1, {cfg.window}] at grid {cfg.grid}")


def run_recur_test(cfg: RunConfig) -> Outcome:
    return _recurrence(cfg, 1)


def run_multi_recur(cfg: RunConfig) -> Outcome:
    return _recurrence(cfg, int(cfg.options.get("ell") or 2))


def _ap_outcome(c: col.Coloring, steps, length: int, extra: dict) -> Outcome:
    ap = col.find_mono_ap(c, length, steps)
    result = {"length": length, "colors": c.colors, "coloring": c.provenance,
              "steps": format_set(steps) if not isinstance(steps, list) else steps, **extra}
    if ap is None:
        result["progression"] = None
        return Outcome("none", result, [], ["term", "color"], f"none found, length={length}")
    result["progression"] = ap._asdict()
    return Outcome("found", result, [[t, ap.color] for t in ap.terms()], ["term", "color"])


def run_coloring(cfg: RunConfig) -> Outcome:
    act, N, o = cfg.action, cfg.window, cfg.options
    if act == "not2large":
        alpha = _scalar(cfg, "alpha")
        eps = Fraction(o["eps"])
        length = col.not2large_length(eps)
        c = col.rotation_coloring(alpha, 2, N)
        return _ap_outcome(c, PowerBohr(1, alpha, eps, "outside"), length, {"eps": str(eps)})
    if act == "affine":
        alpha = _scalar(cfg, "alpha")
        ell, delta = int(o.get("ell") or 2), Fraction(o.get("delta") or "1/4")
        c = col.affine_coloring(alpha, ell, delta, N)
        return _ap_outcome(c, PowerBohr(ell, alpha, delta, "outside"), ell + 1,
                           {"ell": ell, "delta": str(delta), "m": c.colors})
    if act == "join":
        left = parse_coloring(o["left"], cfg.backend, cfg.bits)
        right = parse_coloring(o["right"], cfg.backend, cfg.bits)
        steps = parse_set(o.get("steps") or "all", cfg.backend, cfg.bits)
        c_right = right.build(N)
        c = col.join_colorings(left.build(N), c_right)
        out = _ap_outcome(c, steps, int(o.get("length") or 3),
                          {"left": format_coloring(left), "right": format_coloring(right)})
        if out.result["progression"]:
            color = out.result["progression"]["color"]
            out.result["split_color"] = list(col.split_join_color(color, c_right.colors))
        return out
    if act == "encode":
        spec = o.get("coloring") or "random:r=3"
        if spec.startswith("random"):
            r = int(parse_tree(spec).kwargs.get("r", 3))
            c = col.random_coloring(r, N, np.random.default_rng(cfg.seed))
        else:
            c = parse_coloring(spec, cfg.backend, cfg.bits).build(N)
        enc = col.syndetic_encode(c)
        ok = enc.max_gap <= 2 * enc.r - 1
        result = {"r": enc.r, "max_gap": enc.max_gap, "gap_bound": 2 * enc.r - 1, "within_bound": ok,
                  "members": len(enc.members), "coloring": c.provenance}
        return Outcome("ok" if ok else "none", result, [[e] for e in enc.members], ["e"])
    if act == "avoid":
        steps = parse_set(o.get("steps") or "all", cfg.backend, cfg.bits)
        r, length = int(o.get("r") or 2), int(o.get("length") or 3)
        c = col.heuristic_avoiding_coloring(steps, r, length, N, seed=cfg.seed)
        result = {"steps": format_set(steps), "r": r, "length": length, "heuristic": True}
        if c is None:
            result["coloring"] = None
            return Outcome("none", result, [], ["n", "color"], "heuristic search found no avoiding coloring")
        result["coloring"] = c.to_json()
        return Outcome("found", result, [[n, c(n)] for n in range(1, N + 1)], ["n", "color"])
    raise ValueError(f"unknown coloring action {act!r}")


def _growth_row(args):
    spec_text, backend, bits, N, strategy, budget = args
    g = cayley.build_window_graph(parse_set(spec_text, backend, bits), N)
    return cayley.chromatic_lower(g, budget), cayley.chromatic_upper(g, strategy).colors


def run_cayley(cfg: RunConfig) -> Outcome:
    o = cfg.options
    R = _set(cfg)
    strategy = o.get("strategy") or "dsatur"
    budget = int(o.get("budget") or cayley.DEFAULT_BUDGET)
    if cfg.action == "build":
        g = cayley.build_window_graph(R, cfg.window)
        result = {"set": format_set(R), "vertices": g.vertex_count, "edges": g.edge_count(),
                  "edge_list": g.to_edge_list()}
        return Outcome("ok", result, [list(e) for e in g.edges()], ["u", "v"])
    if cfg.action == "chroma":
        g = cayley.build_window_graph(R, cfg.window)
        up = cayley.chromatic_upper(g, strategy)
        clique = cayley.greedy_clique(g)
        lo = cayley.chromatic_lower(g, budget)
        result = {"set": format_set(R), "lower": lo, "upper": up.colors, "strategy": up.strategy,
                  "clique": clique, "budget": budget}
        return Outcome("ok", result, [[cfg.window, lo, up.colors]], ["N", "lower", "upper"])
    if cfg.action == "growth":
        schedule = [int(t) for t in (o.get("schedule") or "100,1000").split(",")]
        if max(schedule) > MAX_WINDOW:
            raise WindowOverflow(f"schedule entry {max(schedule)} exceeds {MAX_WINDOW}")
        if schedule != sorted(set(schedule)):
            raise ValueError("schedule must be strictly increasing")
        jobs = [(o["set"], cfg.backend, cfg.bits, N, strategy, budget) for N in schedule]
        if cfg.jobs > 1:
            with ProcessPoolExecutor(cfg.jobs) as pool:
                raw = list(pool.map(_growth_row, jobs))
        else:
            raw = [_growth_row(j) for j in jobs]
        rows, carried = [], 1
        for N, (lo, up) in zip(schedule, raw):
            carried = max(carried, lo)
            rows.append(cayley.GrowthRow(N, carried, up))
        result = {"set": format_set(R), "rows": [r._asdict() for r in rows], "budget": budget, "strategy": strategy}
        return Outcome("ok", result, [list(r) for r in rows], ["N", "lower", "upper"])
    raise ValueError(f"unknown cayley action {cfg.action!r}")


def run_flw(cfg: RunConfig) -> Outcome:
    beta = _scalar(cfg, "beta")
    ts = [t for t in (cfg.options.get("t") or "0").split(",") if t]
    rows, out = [], []
    for t in ts:
        avg = affine.weyl_average(beta, parse_scalar(parse_tree_value(t), cfg.backend, cfg.bits), cfg.window)
        # rounded so the report does not depend on last-bit float noise across platforms
        re, im = round(avg.real, 12), round(avg.imag, 12)
        out.append({"t": t, "re": re, "im": im, "abs": round(abs(avg), 12)})
        rows.append([t, re, im, round(abs(avg), 12)])
    return Outcome("ok", {"beta": cfg.options["beta"], "interval": ["1/4", "3/4"], "averages": out},
                   rows, ["t", "re", "im", "abs"])


def _load_w(path: str, s: int, r: int) -> list[list[Fraction]]:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecFileError(f"cannot read {path}: {exc}") from None
    if not isinstance(raw, list) or len(raw) != r:
        raise SpecFileError(f"{path} must hold a list of {r} defects")
    out = []
    for item in raw:
        vec = item if isinstance(item, list) else [item] + [0] * (s - 1)
        try:
            out.append([Fraction(str(v)) for v in vec])
        except (ValueError, ZeroDivisionError):
            raise SpecFileError(f"{path}: bad number in {item!r}") from None
    return out


def run_lift(cfg: RunConfig) -> Outcome:
    o = cfg.options
    s, n = int(o["s"]), int(o["n"])
    r = int(o.get("r") or s - 1)
    w = _load_w(o["w_file"], s, r) if o.get("w_file") else [[Fraction(1, 100 * (k + 1))] + [0] * (s - 1)
                                                              for k in range(r)]
    cert = unipotent.lift_perturbation(s, r, n, w)
    norms = cert.residual_norms()
    result = {"s": s, "r": r, "n": n, "w": [[str(x) for x in v] for v in w],
              "lower_vanishes": cert.lower_vanishes, "diagonal_exact": cert.diagonal_exact,
              "residual_matches_tail": cert.residual_matches_tail, "y_in_subgroup": cert.y_in_subgroup,
              "y_norm": str(cert.y_norm()), "residual_norms": [str(x) for x in norms],
              "n_times_y_norm": str(n * cert.y_norm()),
              "n_times_residual_norms": [str(n * x) for x in norms]}
    ok = cert.lower_vanishes and cert.diagonal_exact
    rows = [[k + 1, float(x), float(n * x)] for k, x in enumerate(norms)]
    return Outcome("ok" if ok else "none", result, rows, ["k", "residual_norm", "n_times_norm"])


HANDLERS = {"sets": run_sets, "orbit": run_orbit, "recur-test": run_recur_test, "multi-recur": run_multi_recur,
            "coloring": run_coloring, "cayley": run_cayley, "flw": run_flw, "lift": run_lift}


def execute(config: RunConfig) -> tuple[int, str, Outcome | None]:
    """Run ``config``; returns (exit code, rendered output, outcome)."""
    try:
        config.validate()
        if config.command not in HANDLERS:
            raise ValueError(f"unknown command {config.command!r}")
        outcome = HANDLERS[config.command](config)
    except ParseError as exc:
        return EXIT_ERROR, f"error: invalid spec: {exc}", None
    except SpecFileError as exc:
        return EXIT_ERROR, f"error: invalid spec file: {exc}", None
    except WindowOverflow as exc:
        return EXIT_ERROR, f"error: window overflow: {exc}", None
    except BackendMismatch as exc:
        return EXIT_ERROR, f"error: backend mismatch: {exc}", None
    except DimensionMismatch as exc:
        return EXIT_ERROR, f"error: dimension mismatch: {exc}", None
    except (ValueError, KeyError, EmptyOnWindow) as exc:
        return EXIT_ERROR, f"error: invalid argument: {exc}", None
    return outcome.exit_code, render(config, outcome), outcome


def render(config: RunConfig, outcome: Outcome) -> str:
    if config.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(outcome.header or [])
        w.writerows(outcome.rows or [])
        return buf.getvalue()
    report = {"schema": SCHEMA, "config": config.to_json(), "status": outcome.status, "result": outcome.result}
    if outcome.message:
        report["message"] = outcome.message
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# argument parsing

_COMMON = ("window", "backend", "bits", "grid", "seed", "format")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=int, default=1000)
    common.add_argument("--backend", choices=(EXACT, FIXED), default=EXACT)
    common.add_argument("--bits", type=int, default=DEFAULT_BITS)
    common.add_argument("--grid", type=int, default=8)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = argparse.ArgumentParser(prog="recurrence-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("sets", parents=[common], help="enumerate an integer set on the window")
    q.add_argument("--set", required=True)

    q = sub.add_parser("orbit", parents=[common], help="orbit of a point and its return times")
    q.add_argument("--system", required=True)
    q.add_argument("--point")
    q.add_argument("--steps", type=int)
    q.add_argument("--radius")

    for name, helptext in (("recur-test", "single recurrence witness search"),
                           ("multi-recur", "multiple recurrence witness search")):
        q = sub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("--system", required=True)
        q.add_argument("--set", required=True)
        q.add_argument("--center")
        q.add_argument("--radius")
        q.add_argument("--profile", action="store_true")
        if name == "multi-recur":
            q.add_argument("--ell", type=int, default=2)

    q = sub.add_parser("coloring", help="coloring constructions and progression search")
    cs = q.add_subparsers(dest="action", required=True)
    a = cs.add_parser("not2large", parents=[common])
    a.add_argument("--alpha", required=True)
    a.add_argument("--eps", required=True)
    a = cs.add_parser("affine", parents=[common])
    a.add_argument("--alpha", required=True)
    a.add_argument("--ell", type=int, default=2)
    a.add_argument("--delta", default="1/4")
    a = cs.add_parser("join", parents=[common])
    a.add_argument("--left", required=True)
    a.add_argument("--right", required=True)
    a.add_argument("--steps", default="all")
    a.add_argument("--length", type=int, default=3)
    a = cs.add_parser("encode", parents=[common])
    a.add_argument("--coloring", default="random:r=3")
    a = cs.add_parser("avoid", parents=[common])
    a.add_argument("--steps", default="all")
    a.add_argument("--r", type=int, default=2)
    a.add_argument("--length", type=int, default=3)

    q = sub.add_parser("cayley", help="windowed Cayley graph diagnostics")
    cs = q.add_subparsers(dest="action", required=True)
    for name in ("build", "chroma", "growth"):
        a = cs.add_parser(name, parents=[common])
        a.add_argument("--set", required=True)
        if name != "build":
            a.add_argument("--strategy", choices=("dsatur", "greedy"), default="dsatur")
            a.add_argument("--budget", type=int, default=cayley.DEFAULT_BUDGET)
        if name == "growth":
            a.add_argument("--schedule", default="100,1000")
            a.add_argument("--jobs", type=int, default=1)

    q = sub.add_parser("flw", parents=[common], help="weighted Weyl averages along n^2 beta")
    q.add_argument("--beta", required=True)
    q.add_argument("--t", default="0")

    q = sub.add_parser("lift", parents=[common], help="perturbation lift certificate")
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--r", type=int)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--w-file")

    q = sub.add_parser("rerun", help="re-execute the configuration echoed in a report")
    q.add_argument("report")
    q.add_argument("--out")
    return p


# options that never change the report contents stay out of the echo
_NOT_ECHOED = {"command", "action", "out", "jobs"}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns)
    options = {k: (str(v) if v is not None and not isinstance(v, bool) else v)
               for k, v in d.items() if k not in _NOT_ECHOED and k not in _COMMON}
    return RunConfig(d["command"], d.get("action"), options, jobs=d.get("jobs") or 1,
                     **{k: d[k] for k in _COMMON})


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    if ns.command == "rerun":
        try:
            with open(ns.report) as fh:
                cfg = RunConfig.from_json(json.load(fh)["config"])
        except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
            print(f"error: invalid spec file: cannot read a report config from {ns.report}: {exc}", file=sys.stderr)
            return EXIT_ERROR
    else:
        cfg = config_from_args(ns)
    code, text, outcome = execute(cfg)
    if outcome is None:
        print(text, file=sys.stderr)
        return code
    _emit(text, ns.out)
    if outcome.message:
        print(outcome.message, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
