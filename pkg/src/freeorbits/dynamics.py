"""Rotation numbers, periodic points and orbit-density diagnostics."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InvalidInput
from .fixedsets import FULL, ArcInterval, FixedSet
from .numeric import ONE, ZERO, Scalar, as_scalar
from .plmaps import CircleMap, Lift
from .words import Action

__all__ = [
    "RotationResult",
    "rotation_number",
    "periodic_points",
    "DensityReport",
    "orbit_points",
    "orbit_density",
    "DEFAULT_MAX_PERIOD",
    "DEFAULT_ITERATIONS",
]

DEFAULT_MAX_PERIOD = 24
DEFAULT_ITERATIONS = 10_000


@dataclass(frozen=True)
class RotationResult:
    """Either an exact rational rotation number with a periodic witness, or a bracket.

    A bracket is inconclusive: it never certifies irrationality.
    """

    kind: str
    value: Optional[Fraction] = None
    witness: Optional[Scalar] = None
    period: Optional[int] = None
    shift: Optional[int] = None
    lo: Optional[Scalar] = None
    hi: Optional[Scalar] = None
    iterations: Optional[int] = None

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def contains(self, x) -> bool:
        x = as_scalar(x)
        if self.is_exact:
            return x == Scalar(self.value)
        return self.lo <= x <= self.hi

    def to_json(self) -> dict:
        if self.is_exact:
            return {
                "kind": "exact",
                "value": f"{self.value.numerator}/{self.value.denominator}",
                "witness": str(self.witness),
                "period": self.period,
                "shift": self.shift,
            }
        return {
            "kind": "bracket",
            "lo": str(self.lo),
            "hi": str(self.hi),
            "iterations": self.iterations,
            "conclusive": False,
        }


def _lift_power_iter(lift: Lift, q_max: int):
    g = lift
    yield 1, g
    for q in range(2, q_max + 1):
        g = lift.compose(g)
        yield q, g


_MAX_DENOM_BITS = 256
_GRID = 2**192


def _round_dyadic(x: Scalar, down: bool) -> Scalar:
    n = (x * _GRID).floor()
    y = Scalar(Fraction(n, _GRID))
    if y == x or down:
        return y
    return Scalar(Fraction(n + 1, _GRID))


def rotation_number(f: CircleMap, max_period: int = DEFAULT_MAX_PERIOD, iterations: int = DEFAULT_ITERATIONS) -> RotationResult:
    """Exact rotation number (in [0, 1)) when a periodic point of period <= ``max_period`` exists.

    The witness ``x`` satisfies ``F^q(x) = x + p`` for the normalized lift ``F``.

    Otherwise returns the bracket ``[(F^k(0) - 1)/k, (F^k(0) + 1)/k]``
    intersected over ``k = 1..iterations``.  For orbits that stay exact the
    width is at most ``2/iterations``; otherwise outward rounding may widen
    it slightly but never loses the rotation number.
    """
    if not isinstance(f, CircleMap):
        raise InvalidInput("rotation numbers need a circle map")
    if max_period < 1 or iterations < 1:
        raise InvalidInput("max_period and iterations must be positive")
    lift = f.lift
    for q, g in _lift_power_iter(lift, max_period):
        dmin, dmax = g.displacement_range()
        for p in range(-((-dmin).floor()), dmax.floor() + 1):
            fixed = g.solve_displacement([p])
            if fixed.is_empty:
                continue
            comp = fixed.components[0]
            x = ZERO if comp.kind == FULL else comp.lo
            # independent check by direct iteration
            y = x
            for _ in range(q):
                y = lift(y)
            if y != x + p:
                raise AssertionError("periodic witness failed to verify")
            return RotationResult("exact", Fraction(p, q) % 1, x, q, p)
    # Lower and upper orbits of 0.  While denominators stay small they
    # coincide with the exact orbit; once they grow, each is rounded outward
    # to a dyadic grid, which keeps z_k <= F^k(0) <= w_k by monotonicity.
    z = w = ZERO
    lo = hi = None
    for k in range(1, iterations + 1):
        same = z is w
        z = lift(z)
        w = z if same else lift(w)
        if z.parts()[2].bit_length() > _MAX_DENOM_BITS:
            z = _round_dyadic(z, down=True)
        if w.parts()[2].bit_length() > _MAX_DENOM_BITS:
            w = _round_dyadic(w, down=False)
        a = (z - 1) / k
        b = (w + 1) / k
        if lo is None or a > lo:
            lo = a
        if hi is None or b < hi:
            hi = b
    return RotationResult("bracket", lo=lo, hi=hi, iterations=iterations)


def periodic_points(f: CircleMap, q: int, p: int) -> FixedSet:
    """Fixed set of ``F^q - p`` reduced to the circle (``F`` the normalized lift)."""
    if q < 1:
        raise InvalidInput("period must be at least 1")
    g = f.lift.power(q)
    return g.solve_displacement([p])


def orbit_points(action: Action, x, budget: int) -> list[Scalar]:
    """Exact images of ``x`` under every reduced word of length <= ``budget``.

    Circle points are reduced to [0, 1).  Duplicates are removed.
    """
    x = as_scalar(x)
    lm = action.letter_maps
    circle = action.domain == "circle"
    start = x.frac() if circle else x
    seen = {start}
    frontier = [(start, -1)]
    for _ in range(budget):
        nxt = []
        for pt, last in frontier:
            for c, m in enumerate(lm):
                if last >= 0 and c == last ^ 1:
                    continue
                y = m.evaluate(pt)
                if circle:
                    y = y.frac()
                nxt.append((y, c))
                seen.add(y)
        frontier = nxt
    return sorted(seen)


@dataclass(frozen=True)
class DensityReport:
    window: ArcInterval
    budget: int
    max_gap: float
    eps: float
    n_points: int

    @property
    def passed(self) -> bool:
        return self.max_gap < self.eps

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "budget": self.budget,
            "max_gap": self.max_gap,
            "eps": self.eps,
            "pass": self.passed,
            "n_points": self.n_points,
        }


def orbit_density(action: Action, x, window: ArcInterval, budget: int, eps: float) -> DensityReport:
    """Largest gap (as a float) left by the orbit of ``x`` inside ``window``.

    Window ends count as gap boundaries; fewer than two orbit points in the
    window report the window length.  A full-circle window uses cyclic gaps.
    """
    if eps <= 0:
        raise InvalidInput("eps must be positive")
    pts = orbit_points(action, x, budget)
    if window.kind == FULL:
        vals = sorted(float(p) for p in pts)
        if len(vals) < 2:
            gap = 1.0
        else:
            gaps = [b - a for a, b in zip(vals, vals[1:])]
            gaps.append(vals[0] + 1.0 - vals[-1])
            gap = max(gaps)
        return DensityReport(window, budget, gap, eps, len(vals))
    lo, hi = window.lo, window.hi
    if action.domain == "circle" and window.wraps:
        inside = [float((p - lo).frac()) for p in pts if window.contains(p)]
        length = float(window.length())
    else:
        inside = [float(p - lo) for p in pts if lo <= p <= hi]
        length = float(hi - lo)
    inside.sort()
    if len(inside) < 2:
        return DensityReport(window, budget, length, eps, len(inside))
    edges = [0.0] + inside + [length]
    gap = max(b - a for a, b in zip(edges, edges[1:]))
    return DensityReport(window, budget, gap, eps, len(inside))
