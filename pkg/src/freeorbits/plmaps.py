"""Orientation-preserving piecewise-affine homeomorphisms of the circle and line.

Everything is built on :class:`Lift`, a degree-one PL map of the line
(``F(x + 1) == F(x) + 1``) stored by its knots in one fundamental domain.
A circle map is a normalized lift (``F(0)`` in [0, 1)).  A line map is a
finite core of knots with a lift-shaped tail on each side, i.e. tails whose
displacement ``F(x) - x`` is 1-periodic.

All representations are canonical (no collinear knots, minimal core), so
structural equality decides equality of maps.
"""
from __future__ import annotations

from bisect import bisect_right
from contextlib import contextmanager
from contextvars import ContextVar
from operator import itemgetter
from typing import Iterable, Optional, Sequence

from .errors import BreakpointBudgetExceeded, InvalidInput
from .fixedsets import FixedSet, LineFixedSet, merge_closed
from .numeric import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "Lift",
    "PLMap",
    "CircleMap",
    "LineMap",
    "rotation",
    "circle_map",
    "line_map",
    "identity",
    "evaluate",
    "compose",
    "invert",
    "fixed_set",
    "breakpoint_cap",
    "get_breakpoint_cap",
    "DEFAULT_BREAKPOINT_CAP",
    "map_to_json",
    "map_from_json",
]

DEFAULT_BREAKPOINT_CAP = 100_000
_CAP: ContextVar[int] = ContextVar("breakpoint_cap", default=DEFAULT_BREAKPOINT_CAP)


def get_breakpoint_cap() -> int:
    return _CAP.get()


@contextmanager
def breakpoint_cap(cap: int):
    """Temporarily change the per-map breakpoint cap."""
    if cap < 1:
        raise InvalidInput("breakpoint cap must be positive")
    token = _CAP.set(cap)
    try:
        yield cap
    finally:
        _CAP.reset(token)


def _check_cap(n: int) -> None:
    cap = _CAP.get()
    if n > cap:
        raise BreakpointBudgetExceeded(n, cap)


def _collinear(x0, y0, x1, y1, x2, y2) -> bool:
    return (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0)


def _interp(x, x0, y0, x1, y1):
    if x == x0:
        return y0
    return y0 + (x - x0) * (y1 - y0) / (x1 - x0)


class Lift:
    """A degree-one PL map of the line, stored by its knots in [0, 1).

    A translation has no genuine breakpoint and is stored with the single
    knot ``(0, t)``.
    """

    __slots__ = ("xs", "ys")

    def __init__(self, xs: Sequence[Scalar], ys: Sequence[Scalar]):
        self.xs = tuple(xs)
        self.ys = tuple(ys)

    @classmethod
    def translation(cls, t) -> "Lift":
        return cls((ZERO,), (as_scalar(t),))

    @classmethod
    def from_points(cls, points: Iterable[tuple[Scalar, Scalar]]) -> "Lift":
        """Canonical lift through points that include every breakpoint mod 1."""
        red = []
        for x, y in points:
            k = x.floor()
            if k:
                x, y = x - k, y - k
            red.append((x, y))
        if not red:
            raise InvalidInput("a lift needs at least one point")
        red.sort(key=itemgetter(0))
        uniq = [red[0]]
        for p in red[1:]:
            if p[0] != uniq[-1][0]:
                uniq.append(p)
        n = len(uniq)
        if n > 1:
            keep = []
            for i in range(n):
                x1, y1 = uniq[i]
                if i:
                    x0, y0 = uniq[i - 1]
                else:
                    x0, y0 = uniq[-1][0] - 1, uniq[-1][1] - 1
                if i + 1 < n:
                    x2, y2 = uniq[i + 1]
                else:
                    x2, y2 = uniq[0][0] + 1, uniq[0][1] + 1
                if not _collinear(x0, y0, x1, y1, x2, y2):
                    keep.append((x1, y1))
            if len(keep) > 1:
                _check_cap(len(keep))
                return cls([p[0] for p in keep], [p[1] for p in keep])
        x, y = uniq[0]
        return cls.translation(y - x)

    def validate(self) -> "Lift":
        ys = self.ys
        for a, b in zip(ys, ys[1:]):
            if not a < b:
                raise InvalidInput("lift is not strictly increasing")
        if not ys[-1] < ys[0] + 1:
            raise InvalidInput("lift does not extend to an increasing degree-one map")
        for x in self.xs:
            if not (ZERO <= x < ONE):
                raise InvalidInput("lift knots must lie in [0, 1)")
        return self

    @property
    def is_translation(self) -> bool:
        return len(self.xs) == 1

    @property
    def knots(self):
        return list(zip(self.xs, self.ys))

    def __len__(self) -> int:
        return len(self.xs)

    def __eq__(self, other):
        if not isinstance(other, Lift):
            return NotImplemented
        return self.xs == other.xs and self.ys == other.ys

    def __hash__(self):
        return hash((self.xs, self.ys))

    def __repr__(self) -> str:
        if self.is_translation:
            return f"Lift(x + {self.ys[0]})"
        return "Lift(" + ", ".join(f"{x}->{y}" for x, y in zip(self.xs, self.ys)) + ")"

    def __reduce__(self):
        return (Lift, (self.xs, self.ys))

    # evaluation -------------------------------------------------------

    def __call__(self, x: Scalar) -> Scalar:
        xs, ys = self.xs, self.ys
        k = (x - xs[0]).floor()
        if k:
            x = x - k
        i = bisect_right(xs, x) - 1
        x0, y0 = xs[i], ys[i]
        if x == x0:
            return y0 + k
        if i + 1 < len(xs):
            x1, y1 = xs[i + 1], ys[i + 1]
        else:
            x1, y1 = xs[0] + 1, ys[0] + 1
        return y0 + (x - x0) * (y1 - y0) / (x1 - x0) + k

    def inverse_at(self, y: Scalar) -> Scalar:
        xs, ys = self.xs, self.ys
        k = (y - ys[0]).floor()
        if k:
            y = y - k
        i = bisect_right(ys, y) - 1
        x0, y0 = xs[i], ys[i]
        if y == y0:
            return x0 + k
        if i + 1 < len(xs):
            x1, y1 = xs[i + 1], ys[i + 1]
        else:
            x1, y1 = xs[0] + 1, ys[0] + 1
        return x0 + (y - y0) * (x1 - x0) / (y1 - y0) + k

    def knots_in(self, lo: Scalar, hi: Scalar) -> list[tuple[Scalar, Scalar]]:
        """All translated knots ``(x, F(x))`` with ``lo <= x <= hi``, sorted."""
        out = []
        if lo > hi:
            return out
        for n in range(lo.floor() - 1, hi.floor() + 1):
            for x, y in zip(self.xs, self.ys):
                xn = x + n
                if lo <= xn <= hi:
                    out.append((xn, y + n))
        return out

    # algebra ----------------------------------------------------------

    def compose(self, g: "Lift") -> "Lift":
        """``self o g``."""
        pts = [(x, self(gy)) for x, gy in zip(g.xs, g.ys)]
        if not self.is_translation:
            pts.extend((g.inverse_at(u), v) for u, v in zip(self.xs, self.ys))
        return Lift.from_points(pts)

    def inverse(self) -> "Lift":
        return Lift.from_points(zip(self.ys, self.xs))

    def shifted(self, k) -> "Lift":
        """``x -> F(x) + k``."""
        return Lift(self.xs, tuple(y + k for y in self.ys))

    def power(self, n: int) -> "Lift":
        if n < 0:
            return self.inverse().power(-n)
        out = Lift.translation(ZERO)
        for _ in range(n):
            out = out.compose(self)
        return out

    def displacement_range(self) -> tuple[Scalar, Scalar]:
        ds = [y - x for x, y in zip(self.xs, self.ys)]
        return min(ds), max(ds)

    def solve_displacement(self, integers: Optional[Sequence[int]] = None) -> FixedSet:
        """Points of the circle where ``F(x) - x`` hits an integer.

        With ``integers=None`` every integer counts (fixed points of the
        circle map); otherwise only the listed values (e.g. ``[0]`` for the
        exact fixed points of the lift).
        """
        xs, ys = self.xs, self.ys
        n = len(xs)
        ds = [y - x for x, y in zip(xs, ys)]
        closed = []
        for i in range(n):
            xa, da = xs[i], ds[i]
            if i + 1 < n:
                xb, db = xs[i + 1], ds[i + 1]
            else:
                xb, db = xs[0] + 1, ds[0]
            lo_d, hi_d = (da, db) if da <= db else (db, da)
            ks = range(-((-lo_d).floor()), hi_d.floor() + 1)
            for k in ks:
                if integers is not None and k not in integers:
                    continue
                if da == db:
                    closed.append((xa, xb))
                else:
                    x = xa + (k - da) * (xb - xa) / (db - da)
                    closed.append((x, x))
        return FixedSet.from_closed_intervals(closed)


_IDENTITY_LIFT = Lift.translation(ZERO)


class PLMap:
    """Base class for piecewise-affine homeomorphisms."""

    domain: str = ""
    __slots__ = ()

    def __call__(self, x) -> Scalar:
        return self.evaluate(as_scalar(x))

    def __matmul__(self, other: "PLMap") -> "PLMap":
        return self.compose(other)


class CircleMap(PLMap):
    """A circle homeomorphism stored as its lift normalized to ``F(0)`` in [0, 1)."""

    domain = "circle"
    __slots__ = ("lift",)

    def __init__(self, lift: Lift, normalize: bool = True):
        if normalize:
            k = lift(ZERO).floor()
            if k:
                lift = lift.shifted(-k)
        self.lift = lift

    @property
    def n_breakpoints(self) -> int:
        return 0 if self.lift.is_translation else len(self.lift)

    @property
    def is_identity(self) -> bool:
        return self.lift == _IDENTITY_LIFT

    def evaluate(self, x: Scalar) -> Scalar:
        return self.lift(x)

    def image(self, x: Scalar) -> Scalar:
        """The image point reduced to [0, 1)."""
        return self.lift(x).frac()

    def preimage(self, y: Scalar) -> Scalar:
        return self.lift.inverse_at(y)

    def compose(self, other: "CircleMap") -> "CircleMap":
        if not isinstance(other, CircleMap):
            raise InvalidInput("cannot compose maps of different domains")
        return CircleMap(self.lift.compose(other.lift))

    def inverse(self) -> "CircleMap":
        return CircleMap(self.lift.inverse())

    def fixed_set(self) -> FixedSet:
        return self.lift.solve_displacement()

    def breakpoints(self) -> list[tuple[Scalar, Scalar]]:
        return self.lift.knots

    def __eq__(self, other):
        if not isinstance(other, CircleMap):
            return NotImplemented
        return self.lift == other.lift

    def __hash__(self):
        return hash(("circle", self.lift))

    def __repr__(self) -> str:
        if self.lift.is_translation:
            return f"CircleMap(rotation {self.lift.ys[0]})"
        return "CircleMap(" + ", ".join(f"{x}->{y}" for x, y in self.lift.knots) + ")"

    def __reduce__(self):
        return (CircleMap, (self.lift, False))


def _line_canonical(pts: list[tuple[Scalar, Scalar]], left: Lift, right: Lift) -> "LineMap":
    """Canonical line map from sorted distinct core points and tails.

    ``pts`` must contain every breakpoint of the map inside
    ``[pts[0].x, pts[-1].x]``; the map equals ``left`` to the left of the
    first point and ``right`` to the right of the last one.
    """
    if not pts:
        if left != right:
            raise InvalidInput("a line map without core needs equal tails")
        return LineMap._raw((), (), left, left)
    lo, hi = pts[0][0], pts[-1][0]
    wlo, whi = lo - 1, hi + 1
    extra = {}
    for x, y in left.knots_in(wlo, whi):
        extra[x] = None
    for x, y in right.knots_in(wlo, whi):
        extra[x] = None
    extra[wlo] = None
    extra[whi] = None
    core_x = [p[0] for p in pts]
    for x in core_x:
        extra.pop(x, None)
    xs = sorted(set(extra) | set(core_x))
    # F values on the refined grid
    fvals = []
    j = 0
    npts = len(pts)
    for x in xs:
        if x < lo:
            fvals.append(left(x))
        elif x > hi:
            fvals.append(right(x))
        else:
            while j + 1 < npts and pts[j + 1][0] <= x:
                j += 1
            x0, y0 = pts[j]
            if x == x0:
                fvals.append(y0)
            else:
                x1, y1 = pts[j + 1]
                fvals.append(_interp(x, x0, y0, x1, y1))
    m = len(xs)
    agree_l = [fvals[i] == left(xs[i]) for i in range(m)]
    agree_r = [fvals[i] == right(xs[i]) for i in range(m)]
    start = None
    for i in range(m - 1):
        if not (agree_l[i] and agree_l[i + 1]):
            start = i
            break
    if start is None:
        if left != right:
            raise AssertionError("tails disagree but map agrees with the left tail")
        return LineMap._raw((), (), left, left)
    end = None
    for i in range(m - 2, -1, -1):
        if not (agree_r[i] and agree_r[i + 1]):
            end = i + 1
            break
    if end is None or end <= start:
        return LineMap._raw((xs[start],), (fvals[start],), left, right)
    kx = [xs[start]]
    ky = [fvals[start]]
    for i in range(start + 1, end):
        if not _collinear(xs[i - 1], fvals[i - 1], xs[i], fvals[i], xs[i + 1], fvals[i + 1]):
            kx.append(xs[i])
            ky.append(fvals[i])
    kx.append(xs[end])
    ky.append(fvals[end])
    _check_cap(len(kx) + len(left) + len(right))
    return LineMap._raw(tuple(kx), tuple(ky), left, right)


class LineMap(PLMap):
    """A line homeomorphism: finite core plus periodic-displacement tails."""

    domain = "line"
    __slots__ = ("xs", "ys", "left", "right")

    def __init__(self, points: Sequence[tuple], left: Optional[Lift] = None, right: Optional[Lift] = None):
        left = left or _IDENTITY_LIFT
        right = right or _IDENTITY_LIFT
        pts = sorted(((as_scalar(x), as_scalar(y)) for x, y in points), key=itemgetter(0))
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x0 < x1 and y0 < y1):
                raise InvalidInput("line map core must be strictly increasing")
        if pts:
            if left(pts[0][0]) != pts[0][1] or right(pts[-1][0]) != pts[-1][1]:
                raise InvalidInput("line map core does not meet its tails continuously")
        canon = _line_canonical(pts, left, right)
        self.xs, self.ys, self.left, self.right = canon.xs, canon.ys, canon.left, canon.right

    @classmethod
    def _raw(cls, xs, ys, left, right) -> "LineMap":
        obj = object.__new__(cls)
        obj.xs = tuple(xs)
        obj.ys = tuple(ys)
        obj.left = left
        obj.right = right
        return obj

    @classmethod
    def periodic(cls, lift: Lift) -> "LineMap":
        return cls._raw((), (), lift, lift)

    @property
    def n_breakpoints(self) -> int:
        return len(self.xs)

    @property
    def is_identity(self) -> bool:
        return not self.xs and self.left == _IDENTITY_LIFT

    def evaluate(self, x: Scalar) -> Scalar:
        xs = self.xs
        if not xs or x <= xs[0]:
            return self.left(x)
        if x >= xs[-1]:
            return self.right(x)
        i = bisect_right(xs, x) - 1
        return _interp(x, xs[i], self.ys[i], xs[i + 1], self.ys[i + 1])

    def preimage(self, y: Scalar) -> Scalar:
        ys = self.ys
        if not ys or y <= ys[0]:
            return self.left.inverse_at(y)
        if y >= ys[-1]:
            return self.right.inverse_at(y)
        i = bisect_right(ys, y) - 1
        return _interp(y, ys[i], self.xs[i], ys[i + 1], self.xs[i + 1])

    def breakpoints_in(self, lo: Scalar, hi: Scalar) -> list[tuple[Scalar, Scalar]]:
        xs = self.xs
        if not xs:
            return self.left.knots_in(lo, hi)
        out = self.left.knots_in(lo, min(hi, xs[0]))
        out.extend((x, y) for x, y in zip(xs, self.ys) if lo <= x <= hi)
        out.extend(self.right.knots_in(max(lo, xs[-1]), hi))
        return out

    def compose(self, g: "LineMap") -> "LineMap":
        """``self o g``."""
        f = self
        if not isinstance(g, LineMap):
            raise InvalidInput("cannot compose maps of different domains")
        left = f.left.compose(g.left)
        right = f.right.compose(g.right)
        if not f.xs and not g.xs:
            return LineMap.periodic(left) if left == right else _line_canonical([], left, right)
        ends = []
        if g.xs:
            ends += [g.xs[0], g.xs[-1]]
        if f.xs:
            ends += [g.preimage(f.xs[0]), g.preimage(f.xs[-1])]
        lo, hi = min(ends), max(ends)
        pts = {}
        for x, gy in g.breakpoints_in(lo, hi):
            pts[x] = f.evaluate(gy)
        for u, v in f.breakpoints_in(g.evaluate(lo), g.evaluate(hi)):
            pts.setdefault(g.preimage(u), v)
        for x in (lo, hi):
            if x not in pts:
                pts[x] = f.evaluate(g.evaluate(x))
        _check_cap(len(pts))
        return _line_canonical(sorted(pts.items(), key=itemgetter(0)), left, right)

    def inverse(self) -> "LineMap":
        pts = list(zip(self.ys, self.xs))
        return _line_canonical(pts, self.left.inverse(), self.right.inverse())

    def fixed_set(self) -> LineFixedSet:
        left_pat = self.left.solve_displacement([0])
        right_pat = self.right.solve_displacement([0])
        if self.xs:
            lo, hi = self.xs[0] - 1, self.xs[-1] + 1
        else:
            lo, hi = -ONE, ONE
        knots = {}
        for x, y in self.breakpoints_in(lo, hi):
            knots[x] = y
        knots.setdefault(lo, self.evaluate(lo))
        knots.setdefault(hi, self.evaluate(hi))
        pts = sorted(knots.items(), key=itemgetter(0))
        closed = []
        for (xa, ya), (xb, yb) in zip(pts, pts[1:]):
            da, db = ya - xa, yb - xb
            if da == 0 and db == 0:
                closed.append((xa, xb))
            elif da == 0:
                closed.append((xa, xa))
            elif db == 0:
                closed.append((xb, xb))
            elif da.sign() != db.sign():
                x = xa - da * (xb - xa) / (db - da)
                closed.append((x, x))
        return LineFixedSet(lo, hi, merge_closed(closed), left_pat, right_pat)

    def min_displacement(self) -> Scalar:
        """Exact infimum of ``F(x) - x`` over the line (attained at a knot)."""
        cands = [y - x for x, y in zip(self.xs, self.ys)]
        cands.append(self.left.displacement_range()[0])
        cands.append(self.right.displacement_range()[0])
        return min(cands)

    def __eq__(self, other):
        if not isinstance(other, LineMap):
            return NotImplemented
        return self.xs == other.xs and self.ys == other.ys and self.left == other.left and self.right == other.right

    def __hash__(self):
        return hash(("line", self.xs, self.ys, self.left, self.right))

    def __repr__(self) -> str:
        core = ", ".join(f"{x}->{y}" for x, y in zip(self.xs, self.ys))
        return f"LineMap(left={self.left!r}, core=[{core}], right={self.right!r})"

    def __reduce__(self):
        return (LineMap._raw, (self.xs, self.ys, self.left, self.right))


# constructors --------------------------------------------------------


def rotation(t) -> CircleMap:
    """Rigid rotation by ``t`` (lift ``x + t``, normalized)."""
    return CircleMap(Lift.translation(as_scalar(t)))


def circle_map(points: Iterable[tuple]) -> CircleMap:
    """Circle map through the given knots ``(x, F(x))`` of a degree-one lift.

    Points are reduced mod 1 and must describe a strictly increasing lift.
    A bump supported on ``(u, v)`` is ``circle_map([(u, u), ..., (v, v)])``.
    """
    pts = [(as_scalar(x), as_scalar(y)) for x, y in points]
    if not pts:
        raise InvalidInput("a circle map needs at least one knot")
    red = []
    for x, y in pts:
        k = x.floor()
        red.append((x - k, y - k))
    red.sort(key=itemgetter(0))
    for (x0, y0), (x1, y1) in zip(red, red[1:]):
        if x0 == x1 and y0 != y1:
            raise InvalidInput("inconsistent knots")
    Lift(tuple(p[0] for p in red), tuple(p[1] for p in red)).validate()
    return CircleMap(Lift.from_points(red))


def line_map(points: Iterable[tuple], left: Optional[Lift] = None, right: Optional[Lift] = None) -> LineMap:
    return LineMap(list(points), left, right)


def identity(domain: str = "circle") -> PLMap:
    if domain == "circle":
        return CircleMap(_IDENTITY_LIFT)
    if domain == "line":
        return LineMap.periodic(_IDENTITY_LIFT)
    raise InvalidInput(f"unknown domain {domain!r}")


# functional surface ----------------------------------------------------


def evaluate(f: PLMap, x) -> Scalar:
    return f.evaluate(as_scalar(x))


def compose(f: PLMap, g: PLMap) -> PLMap:
    """``f o g``."""
    if f.domain != g.domain:
        raise InvalidInput("cannot compose maps of different domains")
    return f.compose(g)


def invert(f: PLMap) -> PLMap:
    return f.inverse()


def fixed_set(f: PLMap):
    return f.fixed_set()


# JSON ------------------------------------------------------------------


def _knots_json(xs, ys) -> list:
    return [[str(x), str(y)] for x, y in zip(xs, ys)]


def _lift_from_json(data) -> Lift:
    if data is None:
        return _IDENTITY_LIFT
    knots = data["breakpoints"] if isinstance(data, dict) else data
    pts = [(as_scalar(x), as_scalar(y)) for x, y in knots]
    if not pts:
        raise InvalidInput("tail needs at least one knot")
    red = sorted(((x - x.floor(), y - x.floor()) for x, y in pts), key=itemgetter(0))
    Lift(tuple(p[0] for p in red), tuple(p[1] for p in red)).validate()
    return Lift.from_points(red)


def map_to_json(f: PLMap) -> dict:
    if isinstance(f, CircleMap):
        return {
            "domain": "circle",
            "breakpoints": _knots_json(f.lift.xs, f.lift.ys),
            "left_tail": None,
            "right_tail": None,
        }
    return {
        "domain": "line",
        "breakpoints": _knots_json(f.xs, f.ys),
        "left_tail": {"breakpoints": _knots_json(f.left.xs, f.left.ys)},
        "right_tail": {"breakpoints": _knots_json(f.right.xs, f.right.ys)},
    }


def map_from_json(data: dict) -> PLMap:
    try:
        domain = data["domain"]
        knots = data.get("breakpoints", [])
        if domain == "circle":
            return circle_map([(x, y) for x, y in knots])
        if domain == "line":
            left = _lift_from_json(data.get("left_tail"))
            right = _lift_from_json(data.get("right_tail"))
            return LineMap([(x, y) for x, y in knots], left, right)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"malformed map: {exc}") from exc
    raise InvalidInput(f"unknown domain {domain!r}")
