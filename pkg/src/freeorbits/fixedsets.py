"""Exact closed subsets of the circle and line made of points and intervals.

Circle coordinates live in [0, 1).  A circle component with ``lo > hi`` wraps
through 0; the whole circle is the single component of kind ``"full"``.
Line fixed sets are exact inside a finite window and 1-periodic outside it
(tails of line maps have periodic displacement), so they carry a circle
pattern for each side.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .numeric import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "ArcInterval",
    "FixedSet",
    "LineFixedSet",
    "merge_closed",
    "circular_distance",
]

POINT = "point"
INTERVAL = "closed-interval"
OPEN = "open-interval"
FULL = "full"


@dataclass(frozen=True)
class ArcInterval:
    """An arc ``[lo, hi]`` (or open arc) of the circle or an interval of the line.

    On the circle ``lo > hi`` encodes wrap-around through 0.  On the line
    ``lo``/``hi`` may be ``None`` for an unbounded end.
    """

    lo: Optional[Scalar]
    hi: Optional[Scalar]
    kind: str = INTERVAL

    @property
    def wraps(self) -> bool:
        return self.lo is not None and self.hi is not None and self.kind != FULL and self.lo > self.hi

    def length(self) -> Scalar:
        if self.kind == FULL:
            return ONE
        if self.wraps or (self.kind == OPEN and self.lo == self.hi):
            return self.hi - self.lo + 1
        return self.hi - self.lo

    def contains(self, x: Scalar) -> bool:
        """Membership for circle arcs (``x`` reduced mod 1)."""
        if self.kind == FULL:
            return True
        x = x.frac()
        lo, hi = self.lo, self.hi
        if self.kind == OPEN:
            if lo < hi:
                return lo < x < hi
            return x > lo or x < hi
        if lo <= hi:
            return lo <= x <= hi
        return x >= lo or x <= hi

    def interior_contains(self, x: Scalar) -> bool:
        if self.kind == FULL:
            return True
        if self.kind == POINT:
            return False
        x = x.frac()
        lo, hi = self.lo, self.hi
        if lo < hi:
            return lo < x < hi
        return x > lo or x < hi

    def to_json(self) -> dict:
        return {
            "lo": None if self.lo is None else str(self.lo),
            "hi": None if self.hi is None else str(self.hi),
            "kind": self.kind,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ArcInterval":
        lo = data.get("lo")
        hi = data.get("hi")
        return cls(
            None if lo is None else as_scalar(lo),
            None if hi is None else as_scalar(hi),
            data.get("kind", INTERVAL),
        )

    def __str__(self) -> str:
        if self.kind == FULL:
            return "S^1"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        if self.kind == POINT:
            return f"{{{lo}}}"
        if self.kind == OPEN:
            return f"({lo}, {hi})"
        return f"[{lo}, {hi}]"


def circular_distance(x: Scalar, y: Scalar) -> Scalar:
    """Length of the positively oriented arc from ``x`` to ``y``, in [0, 1)."""
    return (y - x).frac()


def merge_closed(intervals: Iterable[tuple[Scalar, Scalar]]) -> list[tuple[Scalar, Scalar]]:
    """Sort and merge overlapping or touching closed intervals."""
    ivs = sorted(intervals, key=lambda ab: (ab[0], ab[1]))
    out: list[list[Scalar]] = []
    for a, b in ivs:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1][1] = b
        else:
            out.append([a, b])
    return [(a, b) for a, b in out]


def _intersect_sorted(xs, ys):
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        a = max(xs[i][0], ys[j][0])
        b = min(xs[i][1], ys[j][1])
        if a <= b:
            out.append((a, b))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return out


class FixedSet:
    """A closed subset of the circle: disjoint maximal points and arcs sorted by ``lo``."""

    domain = "circle"
    __slots__ = ("components",)

    def __init__(self, components: Sequence[ArcInterval] = ()):
        self.components = tuple(components)

    # construction -----------------------------------------------------

    @classmethod
    def full(cls) -> "FixedSet":
        return cls((ArcInterval(ZERO, ZERO, FULL),))

    @classmethod
    def empty(cls) -> "FixedSet":
        return cls(())

    @classmethod
    def from_closed_intervals(cls, intervals: Iterable[tuple[Scalar, Scalar]]) -> "FixedSet":
        """Build from closed intervals ``[a, b]`` in any lifted coordinates (``b - a < 1``)."""
        pieces = []
        for a, b in intervals:
            if b - a >= 1:
                return cls.full()
            k = a.floor()
            if k:
                a, b = a - k, b - k
            if b > 1:
                pieces.append((a, ONE))
                pieces.append((ZERO, b - 1))
            else:
                pieces.append((a, b))
        return cls._from_unit_pieces(merge_closed(pieces))

    @classmethod
    def _from_unit_pieces(cls, merged: list[tuple[Scalar, Scalar]]) -> "FixedSet":
        # merged: disjoint sorted closed intervals in [0, 1]; 1 is identified with 0
        if not merged:
            return cls.empty()
        if merged[0] == (ZERO, ONE):
            return cls.full()
        comps = []
        wrap_lo = None
        body = list(merged)
        if body[-1][1] == ONE:
            a, _ = body.pop()
            if a == ONE:
                # the lone point 1, i.e. 0
                if not (body and body[0][0] == ZERO):
                    body.insert(0, (ZERO, ZERO))
            else:
                wrap_lo = a
        if wrap_lo is not None:
            wrap_hi = ZERO
            if body and body[0][0] == ZERO:
                wrap_hi = body.pop(0)[1]
            comps.append(ArcInterval(wrap_lo, wrap_hi, INTERVAL))
        for a, b in body:
            comps.append(ArcInterval(a, b, POINT if a == b else INTERVAL))
        comps.sort(key=lambda c: c.lo)
        return cls(comps)

    # views ------------------------------------------------------------

    def unit_pieces(self) -> list[tuple[Scalar, Scalar]]:
        """Closed intervals in [0, 1] whose union (mod 1) is this set, sorted."""
        out = []
        tail = None
        for c in self.components:
            if c.kind == FULL:
                return [(ZERO, ONE)]
            if c.lo <= c.hi:
                out.append((c.lo, c.hi))
            else:
                out.insert(0, (ZERO, c.hi))
                tail = (c.lo, ONE)
        if tail is not None:
            out.append(tail)
        return sorted(out, key=lambda ab: (ab[0], ab[1]))

    @property
    def is_full(self) -> bool:
        return len(self.components) == 1 and self.components[0].kind == FULL

    @property
    def is_empty(self) -> bool:
        return not self.components

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other):
        if not isinstance(other, FixedSet) or isinstance(other, LineFixedSet):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self) -> str:
        return "FixedSet(" + ", ".join(str(c) for c in self.components) + ")"

    # queries ----------------------------------------------------------

    def contains(self, x: Scalar) -> bool:
        x = as_scalar(x).frac()
        return any(c.contains(x) for c in self.components)

    __contains__ = contains

    def component_containing(self, x: Scalar) -> Optional[ArcInterval]:
        x = as_scalar(x).frac()
        for c in self.components:
            if c.contains(x):
                return c
        return None

    def interior_contains(self, x: Scalar) -> bool:
        c = self.component_containing(x)
        return c is not None and c.interior_contains(x)

    def member_ranges(self, points: Sequence[Scalar]) -> list[tuple[int, int]]:
        """Index ranges ``[i, j)`` of the sorted points (in [0, 1)) lying in this set."""
        out = []
        for a, b in self.unit_pieces():
            i, j = bisect_left(points, a), bisect_right(points, b)
            if i < j:
                out.append((i, j))
        return out

    def contains_sorted(self, points: Sequence[Scalar]) -> list[bool]:
        """Membership for many points already reduced to [0, 1) and sorted."""
        out = [False] * len(points)
        for i, j in self.member_ranges(points):
            out[i:j] = [True] * (j - i)
        return out

    def interval_components(self) -> list[ArcInterval]:
        """Components with nonempty interior."""
        return [c for c in self.components if c.kind != POINT]

    # algebra ----------------------------------------------------------

    def union(self, *others: "FixedSet") -> "FixedSet":
        pieces = list(self.unit_pieces())
        for o in others:
            pieces.extend(o.unit_pieces())
        return FixedSet._from_unit_pieces(merge_closed(pieces))

    def intersection(self, other: "FixedSet") -> "FixedSet":
        return FixedSet._from_unit_pieces(merge_closed(_intersect_sorted(self.unit_pieces(), other.unit_pieces())))

    def complement(self) -> list[ArcInterval]:
        """The open complement as open arcs (``lo == hi`` means circle minus a point)."""
        if self.is_empty:
            return [ArcInterval(ZERO, ZERO, FULL)]
        if self.is_full:
            return []
        pieces = self.unit_pieces()
        gaps = []
        for (a0, b0), (a1, b1) in zip(pieces, pieces[1:]):
            if b0 < a1:
                gaps.append((b0, a1))
        first_a, last_b = pieces[0][0], pieces[-1][1]
        # the gap through 0 joins [last_b, 1) and [0, first_a)
        if last_b < ONE or first_a > ZERO:
            lo = last_b if last_b < ONE else ZERO
            hi = first_a
            if not (last_b == ONE and first_a == ZERO):
                gaps.append((lo, hi))
        arcs = [ArcInterval(a, b, OPEN) for a, b in gaps]
        arcs.sort(key=lambda c: c.lo)
        return arcs

    def to_json(self) -> list:
        return [c.to_json() for c in self.components]

    @classmethod
    def from_json(cls, data: list) -> "FixedSet":
        return cls(tuple(ArcInterval.from_json(c) for c in data))


def _unroll(pattern: FixedSet, lo: Scalar, hi: Scalar) -> list[tuple[Scalar, Scalar]]:
    """Translates of a circle pattern clipped to the line interval [lo, hi]."""
    if lo > hi or pattern.is_empty:
        return []
    pieces = pattern.unit_pieces()
    out = []
    for n in range(lo.floor() - 1, hi.floor() + 1):
        for a, b in pieces:
            a2, b2 = max(a + n, lo), min(b + n, hi)
            if a2 <= b2:
                out.append((a2, b2))
    return merge_closed(out)


class LineFixedSet:
    """A closed subset of the line: exact in ``[lo, hi]``, periodic patterns beyond."""

    domain = "line"
    __slots__ = ("lo", "hi", "explicit", "left", "right")

    def __init__(self, lo: Scalar, hi: Scalar, explicit, left: FixedSet, right: FixedSet):
        self.lo = lo
        self.hi = hi
        self.explicit = tuple(explicit)
        self.left = left
        self.right = right

    def __eq__(self, other):
        if not isinstance(other, LineFixedSet):
            return NotImplemented
        w_lo = min(self.lo, other.lo)
        w_hi = max(self.hi, other.hi)
        return (
            self.components_in(w_lo, w_hi) == other.components_in(w_lo, w_hi)
            and self.left == other.left
            and self.right == other.right
        )

    def __hash__(self):
        return hash((self.left, self.right))

    @property
    def is_empty(self) -> bool:
        return not self.explicit and self.left.is_empty and self.right.is_empty

    def contains(self, x: Scalar) -> bool:
        x = as_scalar(x)
        if x < self.lo:
            return self.left.contains(x)
        if x > self.hi:
            return self.right.contains(x)
        return any(a <= x <= b for a, b in self.explicit)

    __contains__ = contains

    def components_in(self, lo: Scalar, hi: Scalar) -> list[tuple[Scalar, Scalar]]:
        pieces = [(max(a, lo), min(b, hi)) for a, b in self.explicit if b >= lo and a <= hi]
        if lo < self.lo:
            pieces += _unroll(self.left, lo, min(hi, self.lo))
        if hi > self.hi:
            pieces += _unroll(self.right, max(lo, self.hi), hi)
        return merge_closed(pieces)

    def interior_contains(self, x: Scalar) -> bool:
        x = as_scalar(x)
        return any(a < x < b for a, b in self.components_in(x - 1, x + 1))

    def component_containing(self, x: Scalar) -> Optional[ArcInterval]:
        x = as_scalar(x)
        for a, b in self.intervals():
            if (a is None or a <= x) and (b is None or x <= b):
                return ArcInterval(a, b, POINT if a is not None and a == b else INTERVAL)
        if self.contains(x):
            # inside a periodic tail pattern
            for a, b in self.components_in(x - 1, x + 1):
                if a <= x <= b:
                    return ArcInterval(a, b, POINT if a == b else INTERVAL)
        return None

    def intersects(self, other: "LineFixedSet") -> bool:
        w_lo = min(self.lo, other.lo)
        w_hi = max(self.hi, other.hi)
        if _intersect_sorted(self.components_in(w_lo, w_hi), other.components_in(w_lo, w_hi)):
            return True
        if not self.left.intersection(other.left).is_empty:
            return True
        return not self.right.intersection(other.right).is_empty

    def union_in(self, others: Sequence["LineFixedSet"], lo: Scalar, hi: Scalar):
        pieces = list(self.components_in(lo, hi))
        for o in others:
            pieces.extend(o.components_in(lo, hi))
        return merge_closed(pieces)

    def intervals(self) -> list[tuple[Optional[Scalar], Optional[Scalar]]]:
        """Window components with ends extended to infinity when a tail is entirely fixed."""
        comps = list(self.explicit)
        out: list[list] = [[a, b] for a, b in comps]
        if self.left.is_full:
            if out and out[0][0] == self.lo:
                out[0][0] = None
            else:
                out.insert(0, [None, self.lo])
        if self.right.is_full:
            if out and out[-1][1] == self.hi:
                out[-1][1] = None
            else:
                out.append([self.hi, None])
        return [(a, b) for a, b in out]

    def describe(self) -> str:
        parts = []
        for a, b in self.intervals():
            if a is not None and a == b:
                parts.append(f"{{{a}}}")
            else:
                parts.append(f"{'(-inf' if a is None else '[' + str(a)}, {'+inf)' if b is None else str(b) + ']'}")
        for side, pat in (("left", self.left), ("right", self.right)):
            if not pat.is_empty and not pat.is_full:
                parts.append(f"{side}-periodic{pat!r}")
        return " U ".join(parts) if parts else "{}"

    def __repr__(self) -> str:
        return f"LineFixedSet({self.describe()})"

    def to_json(self) -> dict:
        return {
            "window": [str(self.lo), str(self.hi)],
            "components": [[str(a), str(b)] for a, b in self.explicit],
            "intervals": [[None if a is None else str(a), None if b is None else str(b)] for a, b in self.intervals()],
            "left_tail": self.left.to_json(),
            "right_tail": self.right.to_json(),
        }
