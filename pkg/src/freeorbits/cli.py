"""Command-line front end: ``freeorbits build`` and ``freeorbits analyze``.

Exit codes: 0 success, 1 invalid input, 2 budget exceeded, 3 verification failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Optional

from . import svg
from .constructions import (
    DEFAULT_PINGPONG_ARCS,
    Section32Params,
    build_section32,
    lift_section,
    make_pingpong_pair,
    stabilizer_certificate,
    glue_interval_actions,
)
from .dynamics import DEFAULT_ITERATIONS, DEFAULT_MAX_PERIOD, orbit_density, orbit_points, rotation_number
from .errors import BreakpointBudgetExceeded, BudgetExhausted, InvalidInput, VerificationFailure
from .fixedsets import FULL, INTERVAL, ArcInterval
from .numeric import ZERO, Scalar, as_scalar
from .plmaps import DEFAULT_BREAKPOINT_CAP, breakpoint_cap, circle_map, rotation
from .theorem import (
    abelian_rank_witness,
    census,
    default_jobs,
    free_region,
    h_truncated,
    interior_fixer,
    z2_witness_scan,
)
from .words import Action, realize

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3

ANALYSES = (
    "free-region",
    "interior-fixer",
    "z2-scan",
    "h-map",
    "rotation-number",
    "stabilizer",
    "orbit",
    "abelian-rank",
    "faithful",
)

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


# builders ----------------------------------------------------------------------


def _names(cfg: dict, n: int) -> tuple:
    names = tuple(cfg.get("generators", _LETTERS[:n]))
    if len(names) != n:
        raise InvalidInput("generator names do not match the number of maps")
    return names


def _bump(spec) -> "object":
    if isinstance(spec, dict):
        lo, hi = (as_scalar(v) for v in spec["support"])
        through = spec.get("through")
    else:
        lo, hi = (as_scalar(v) for v in spec)
        through = None
    if hi <= lo:
        hi = hi + 1
    if through is None:
        mid = (lo + hi) / 2
        through = [[mid, mid + (hi - lo) / 4]]
    pts = [(lo, lo)] + [(as_scalar(x), as_scalar(y)) for x, y in through] + [(hi, hi)]
    return circle_map(pts)


def build_action(cfg: dict) -> Action:
    """Build an action from a config dict naming a builder."""
    if not isinstance(cfg, dict) or "builder" not in cfg:
        raise InvalidInput("config must be an object with a 'builder' key")
    kind = cfg["builder"]
    try:
        if kind == "pingpong":
            arcs = cfg.get("arcs", DEFAULT_PINGPONG_ARCS)
            action, _ = make_pingpong_pair(arcs, _names(cfg, 2))
            if cfg.get("lift"):
                action = lift_section(action, cfg.get("offsets"))
            return action
        if kind == "section32":
            params = Section32Params(
                alpha=as_scalar(cfg.get("alpha", "-1+sqrt2")),
                beta=as_scalar(cfg.get("beta", "1/2")),
                p=as_scalar(cfg.get("p", "5")),
                offsets=tuple(cfg["offsets"]) if cfg.get("offsets") is not None else None,
                g_below_zero=cfg.get("g_below_zero", "alpha"),
            )
            circle, _ = make_pingpong_pair(cfg.get("arcs", DEFAULT_PINGPONG_ARCS), _names(cfg, 2))
            return build_section32(params, lift_section(circle, params.offsets))
        if kind == "glue":
            parts = [build_action(p) if "builder" in p else Action.from_json(p) for p in cfg["parts"]]
            return glue_interval_actions(parts, [as_scalar(x) for x in cfg["anchors"]])
        if kind == "rotation":
            angles = cfg.get("angles") or [cfg["angle"]]
            return Action(_names(cfg, len(angles)), tuple(rotation(as_scalar(t)) for t in angles))
        if kind == "bump":
            bumps = cfg["bumps"]
            return Action(_names(cfg, len(bumps)), tuple(_bump(b) for b in bumps))
        if kind == "custom":
            return Action.from_json(cfg)
    except InvalidInput:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"bad {kind} config: {exc}") from exc
    raise InvalidInput(f"unknown builder {kind!r}")


# helpers -----------------------------------------------------------------------


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc


def _digest(data) -> str:
    return hashlib.sha256(json.dumps(data, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def _window(text: Optional[str], domain: str) -> Optional[ArcInterval]:
    if text is None:
        return ArcInterval(ZERO, ZERO, FULL) if domain == "circle" else None
    parts = text.split(",")
    if len(parts) != 2:
        raise InvalidInput("--window takes 'lo,hi'")
    lo, hi = (as_scalar(p.strip()) for p in parts)
    if domain == "line" and not lo < hi:
        raise InvalidInput("--window needs lo < hi")
    return ArcInterval(lo, hi, INTERVAL)


def _need_point(args) -> Scalar:
    if args.point is None:
        raise InvalidInput("this analysis needs --point")
    return as_scalar(args.point)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(report: dict, out: Optional[str]) -> None:
    text = _dump(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# analyses ----------------------------------------------------------------------


def _fixed_layers(action: Action, words):
    return [(str(w), list(realize(action, w).fixed_set())) for w in words]


def run_analysis(action: Action, name: str, args) -> tuple[dict, Optional[str]]:
    """Return ``(result, svg_text)`` for analysis ``name``."""
    L, jobs = args.max_len, args.jobs
    picture = None
    if name == "free-region":
        window = None if action.domain == "circle" else _window(args.window, "line")
        fr = free_region(action, L, window=window, jobs=jobs)
        res = fr.to_json()
        if args.samples:
            res["samples"] = _sample_check(action, fr, L, args.samples, window)
        if action.domain == "circle":
            picture = svg.circle_arcs([("free region", fr.region), ("fixed union", list(fr.fixed_union))], "free region")
        return res, picture
    if name == "interior-fixer":
        x = _need_point(args)
        w = interior_fixer(action, L, x)
        res = {"point": str(x), "budget": L, "word": None if w is None else w.text}
        if w is not None:
            res["fixed_set"] = _fixed_json(realize(action, w).fixed_set())
            if action.domain == "circle":
                picture = svg.circle_arcs(_fixed_layers(action, [w]), f"interior fixer of {x}")
        return res, picture
    if name == "z2-scan":
        wit = z2_witness_scan(action, L, jobs=jobs)
        res = {"budget": L, "witness": None if wit is None else wit.to_json()}
        if wit is not None:
            picture = svg.circle_arcs(_fixed_layers(action, wit.words), "Z^2 witness")
        return res, picture
    if name == "h-map":
        h = h_truncated(action, L, jobs=jobs)
        pieces = []
        for p in h.pieces:
            lo, hi = p.domain.lo, p.domain.hi
            v = None if p.value is None else float(p.value)
            if p.domain.kind == FULL:
                pieces.append((0.0, 1.0, v))
            elif hi is not None and lo > hi or (p.domain.kind != "point" and lo == hi):
                pieces.append((float(lo), 1.0, v))
                pieces.append((0.0, float(hi), v))
            else:
                pieces.append((float(lo), float(hi), v))
        return h.to_json(), svg.step_graph(pieces, f"h_{L}")
    if name == "rotation-number":
        if action.domain != "circle":
            raise InvalidInput("rotation numbers need a circle action")
        res = {
            n: rotation_number(m, args.max_period, args.iterations).to_json()
            for n, m in zip(action.names, action.maps)
        }
        return {"max_period": args.max_period, "iterations": args.iterations, "generators": res}, None
    if name == "stabilizer":
        x = _need_point(args)
        w = stabilizer_certificate(action, x, args.iterations)
        return {"point": str(x), "word": w.text, "pretty": w.pretty(), "verified": True}, None
    if name == "orbit":
        x = _need_point(args)
        pts = orbit_points(action, x, L)
        res = {"point": str(x), "budget": L, "n_points": len(pts), "points": [str(p) for p in pts]}
        window = _window(args.window, action.domain)
        if window is not None and args.eps is not None:
            res["density"] = orbit_density(action, x, window, L, args.eps).to_json()
        win = None if window is None or window.kind == FULL else (float(window.lo), float(window.hi))
        picture = svg.orbit_cloud([float(p) for p in pts], action.domain == "circle", win, f"orbit of {x}")
        return res, picture
    if name == "abelian-rank":
        words = abelian_rank_witness(action, L, args.rank, jobs=jobs)
        res = {"budget": L, "rank": args.rank, "words": None if words is None else [w.text for w in words]}
        if words:
            picture = svg.circle_arcs(_fixed_layers(action, words), f"rank {args.rank} witness")
        return res, picture
    if name == "faithful":
        c = census(action, L, jobs=jobs)
        if c.exceeded_words:
            raise BreakpointBudgetExceeded(None, args.breakpoint_cap, partial=c, words=c.exceeded_words)
        res = c.to_json()
        res["faithful"] = not c.kernel_words
        return res, None
    raise InvalidInput(f"unknown analysis {name!r}")


def _fixed_json(fs):
    return fs.to_json()


def _sample_check(action: Action, fr, L: int, n: int, window) -> dict:
    """Brute-force check: one point per cell, moved by every tested word iff in the region."""
    if window is None:
        lo, width = ZERO, Scalar(1)
    else:
        lo, width = window.lo, window.hi - window.lo
    maps = [m for _, m in _realized(action, L)]
    agree = 0
    for i in range(n):
        x = lo + width * Scalar(2 * i + 1) / (2 * n)
        moved = all(m.evaluate(x) != x for m in maps)
        if moved == fr.moved_by_all_nontrivial(x):
            agree += 1
    return {"cells": n, "agree": agree}


def _realized(action: Action, L: int):
    from .words import iter_realized

    for w, m in iter_realized(action, L):
        if isinstance(m, BreakpointBudgetExceeded):
            raise m
        if not m.is_identity:
            yield w, m


# entry point -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # usage errors are invalid input (exit 1); exit 2 means budget exceeded
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="freeorbits", description="Exact PL actions on the circle and line.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build an action from a JSON config")
    b.add_argument("config", help="JSON file with a 'builder' key")
    b.add_argument("-o", "--output", required=True, help="where to write the action JSON")

    a = sub.add_parser("analyze", help="run an analysis on an action file")
    a.add_argument("action", help="action JSON written by build")
    a.add_argument("analysis", choices=ANALYSES)
    a.add_argument("--max-len", type=int, default=5, help="word-length budget L")
    a.add_argument("--max-period", type=int, default=DEFAULT_MAX_PERIOD, help="periodic-point search bound")
    a.add_argument("--iterations", type=int, default=DEFAULT_ITERATIONS, help="orbit length for brackets and orbits")
    a.add_argument("--samples", type=int, default=0, help="random points to re-check by evaluation")
    a.add_argument("--svg", help="also write an SVG picture here")
    a.add_argument("--jobs", type=int, default=None, help="worker processes (env FREEORBITS_JOBS)")
    a.add_argument("--breakpoint-cap", type=int, default=DEFAULT_BREAKPOINT_CAP, help="max breakpoints per realized word")
    a.add_argument("--point", help="exact point, e.g. 1/3 or 1/2+1/4*sqrt2")
    a.add_argument("--rank", type=int, default=2, help="target rank for abelian-rank")
    a.add_argument("--window", help="lo,hi window for line actions")
    a.add_argument("--eps", type=float, help="orbit-density resolution")
    a.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
    return p


def _cmd_build(args) -> int:
    cfg = _load_json(args.config)
    action = build_action(cfg)
    data = action.to_json()
    data["config"] = cfg
    Path(args.output).write_text(_dump(data))
    return EXIT_OK


def _cmd_analyze(args) -> int:
    for flag in ("max_len", "max_period", "iterations", "breakpoint_cap", "rank"):
        if getattr(args, flag) < 1:
            raise InvalidInput(f"--{flag.replace('_', '-')} must be positive")
    if args.samples < 0:
        raise InvalidInput("--samples must be non-negative")
    if args.jobs is None:
        args.jobs = default_jobs()
    if args.jobs < 1:
        raise InvalidInput("--jobs must be positive")
    raw = _load_json(args.action)
    action = Action.from_json(raw)
    report = {
        "command": {
            "analysis": args.analysis,
            "max_len": args.max_len,
            "max_period": args.max_period,
            "iterations": args.iterations,
            "samples": args.samples,
            "breakpoint_cap": args.breakpoint_cap,
            "point": args.point,
            "rank": args.rank,
            "window": args.window,
            "eps": args.eps,
        },
        "input_digest": _digest(action.to_json()),
        "budget_exceeded": False,
    }
    start = time.perf_counter()
    code = EXIT_OK
    picture = None
    try:
        with breakpoint_cap(args.breakpoint_cap):
            result, picture = run_analysis(action, args.analysis, args)
        report["result"] = result
    except (BreakpointBudgetExceeded, BudgetExhausted) as exc:
        report["budget_exceeded"] = True
        report["error"] = str(exc)
        partial = getattr(exc, "partial", None)
        report["partial"] = partial.to_json() if hasattr(partial, "to_json") else None
        report["exceeded_words"] = [w.text for w in getattr(exc, "words", [])]
        code = EXIT_BUDGET
    except VerificationFailure as exc:
        report["verification_failure"] = {"message": str(exc), "failed": list(exc.failed)}
        code = EXIT_VERIFY
    report["kernel_notes"] = [w.text for w in action.kernel_notes]
    report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    _emit(report, args.output)
    if args.svg and picture is not None:
        Path(args.svg).write_text(picture)
    return code


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "build":
            return _cmd_build(args)
        return _cmd_analyze(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (BreakpointBudgetExceeded, BudgetExhausted) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
