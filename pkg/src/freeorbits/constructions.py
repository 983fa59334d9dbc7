"""Builders: ping-pong circle pairs, their line lifts, the glued line action
without free orbits, and gluing of interval actions along circle anchors."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import BudgetExhausted, InvalidInput, VerificationFailure
from .fixedsets import INTERVAL, ArcInterval, FixedSet
from .numeric import ONE, SQRT2, ZERO, Scalar, as_scalar
from .plmaps import CircleMap, Lift, LineMap, circle_map, identity
from .words import Action, Word

__all__ = [
    "PingPongCertificate",
    "DEFAULT_PINGPONG_ARCS",
    "make_pingpong_pair",
    "check_pingpong",
    "pingpong_transcript",
    "lift_section",
    "positive_offset",
    "Section32Params",
    "build_section32",
    "default_section32",
    "stabilizer_certificate",
    "glue_interval_actions",
]


def _arc(lo, hi) -> ArcInterval:
    return ArcInterval(as_scalar(lo).frac(), as_scalar(hi).frac(), INTERVAL)


def _span(arc: ArcInterval) -> tuple[Scalar, Scalar]:
    """The arc as a closed interval of lifted coordinates starting in [0, 1)."""
    return arc.lo, arc.lo + arc.length()


DEFAULT_PINGPONG_ARCS = (
    _arc("1/20", "1/5"),
    _arc("11/20", "7/10"),
    _arc("3/10", "9/20"),
    _arc("4/5", "19/20"),
)


@dataclass(frozen=True)
class PingPongCertificate:
    """Arcs ``A-, A+, B-, B+`` with ``x(S^1 - X-) in X+`` and ``x^-1(S^1 - X+) in X-``."""

    a_minus: ArcInterval
    a_plus: ArcInterval
    b_minus: ArcInterval
    b_plus: ArcInterval
    generators: tuple = ("a", "b")

    @property
    def arcs(self) -> tuple:
        return (self.a_minus, self.a_plus, self.b_minus, self.b_plus)

    def target_arc(self, letter: int) -> ArcInterval:
        """Arc that a word starting with ``letter`` sends the base region into."""
        return (self.a_plus, self.a_minus, self.b_plus, self.b_minus)[letter]

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "arcs": {
                "A-": [str(self.a_minus.lo), str(self.a_minus.hi)],
                "A+": [str(self.a_plus.lo), str(self.a_plus.hi)],
                "B-": [str(self.b_minus.lo), str(self.b_minus.hi)],
                "B+": [str(self.b_plus.lo), str(self.b_plus.hi)],
            },
        }

    @classmethod
    def from_arcs(cls, arcs: Sequence, generators=("a", "b")) -> "PingPongCertificate":
        if len(arcs) != 4:
            raise InvalidInput("a ping-pong certificate needs four arcs")
        out = []
        for arc in arcs:
            if not isinstance(arc, ArcInterval):
                arc = _arc(*arc)
            if arc.kind != INTERVAL or arc.lo == arc.hi:
                raise InvalidInput("ping-pong arcs must be closed with positive length")
            out.append(arc)
        spans = [FixedSet.from_closed_intervals([_span(a)]) for a in out]
        for i in range(4):
            for j in range(i + 1, 4):
                if not spans[i].intersection(spans[j]).is_empty:
                    raise InvalidInput(f"ping-pong arcs {i} and {j} overlap")
        return cls(*out, generators=tuple(generators))


def _pingpong_map(repel: ArcInterval, attract: ArcInterval) -> CircleMap:
    # the closed complement [repel.hi, repel.lo + 1] collapses affinely onto attract
    r_lo, r_hi = _span(repel)
    a_lo, a_hi = _span(attract)
    return circle_map([(r_hi, a_lo), (r_lo + 1, a_hi)])


def make_pingpong_pair(arcs: Sequence = DEFAULT_PINGPONG_ARCS, names=("a", "b")):
    """Two PL circle maps satisfying the ping-pong inclusions for ``arcs``.

    Returns ``(action, certificate)``; the certificate is checked before return.
    """
    cert = PingPongCertificate.from_arcs(arcs, names)
    a = _pingpong_map(cert.a_minus, cert.a_plus)
    b = _pingpong_map(cert.b_minus, cert.b_plus)
    action = Action(tuple(names), (a, b))
    ok, transcript = pingpong_transcript(action, cert)
    if not ok:
        raise VerificationFailure("constructed maps fail the ping-pong inclusions", [k for k, v in transcript.items() if not v])
    action.certificates["pingpong"] = {**cert.to_json(), "inclusions": transcript}
    return action, cert


def _arc_image_inside(f: CircleMap, src: tuple[Scalar, Scalar], dst: ArcInterval) -> bool:
    lo, hi = src
    u = f.evaluate(lo)
    length = f.evaluate(hi) - u
    return (u - dst.lo).frac() + length <= dst.length()


def pingpong_transcript(action: Action, cert: PingPongCertificate) -> tuple[bool, dict]:
    """Check the four inclusions on closed complements via endpoint images."""
    if action.domain != "circle" or action.n_gens != 2:
        raise InvalidInput("ping-pong checks need a two-generator circle action")
    out = {}
    lm = action.letter_maps
    pairs = [("a", lm[0], cert.a_minus, cert.a_plus), ("A", lm[1], cert.a_plus, cert.a_minus),
             ("b", lm[2], cert.b_minus, cert.b_plus), ("B", lm[3], cert.b_plus, cert.b_minus)]
    for label, f, repel, attract in pairs:
        lo, hi = _span(repel)
        out[label] = _arc_image_inside(f, (hi, lo + 1), attract)
    return all(out.values()), out


def check_pingpong(action: Action, cert: PingPongCertificate) -> bool:
    return pingpong_transcript(action, cert)[0]


# line lifts ------------------------------------------------------------------


def positive_offset(f: CircleMap) -> int:
    """Least ``k >= 0`` making ``F + k`` move every point strictly to the right."""
    dmin = f.lift.displacement_range()[0]
    return 0 if dmin > 0 else (-dmin).floor() + 1


def lift_section(action: Action, offsets: Optional[Sequence[int]] = None) -> Action:
    """Line action by the normalized lifts shifted by integer ``offsets``.

    ``offsets=None`` picks :func:`positive_offset` for each generator.  The
    exact minimum displacement of each generator is recorded in
    ``certificates["min_displacement"]``.
    """
    if action.domain != "circle":
        raise InvalidInput("lift_section needs a circle action")
    if offsets is None:
        offsets = [positive_offset(m) for m in action.maps]
    if len(offsets) != action.n_gens:
        raise InvalidInput("need one offset per generator")
    maps = []
    mins = {}
    for name, m, k in zip(action.names, action.maps, offsets):
        if int(k) != k:
            raise InvalidInput("offsets must be integers")
        lm = LineMap.periodic(m.lift.shifted(int(k)))
        maps.append(lm)
        mins[name] = str(lm.min_displacement())
    out = Action(action.names, tuple(maps))
    out.certificates["offsets"] = {n: int(k) for n, k in zip(action.names, offsets)}
    out.certificates["min_displacement"] = mins
    if "pingpong" in action.certificates:
        out.certificates["pingpong"] = action.certificates["pingpong"]
    return out


# the glued line action ---------------------------------------------------------


@dataclass(frozen=True)
class Section32Params:
    alpha: Scalar = field(default_factory=lambda: SQRT2 - 1)
    beta: Scalar = field(default_factory=lambda: Scalar("1/2"))
    p: Scalar = field(default_factory=lambda: Scalar(5))
    offsets: Optional[tuple] = None
    interpolation: str = "chord"
    g_below_zero: str = "alpha"

    def __post_init__(self):
        for name in ("alpha", "beta", "p"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        if self.interpolation != "chord":
            raise InvalidInput("only chord interpolation is supported")
        if self.g_below_zero not in ("alpha", "unit"):
            raise InvalidInput("g_below_zero must be 'alpha' or 'unit'")

    def check(self) -> None:
        a, b, p = self.alpha, self.beta, self.p
        if not (ZERO < a < ONE and ZERO < b < ONE):
            raise InvalidInput("need 0 < alpha < 1 and 0 < beta < 1")
        if (a / b).is_rational:
            raise InvalidInput("alpha/beta must be irrational")
        if not p > 4:
            raise InvalidInput("need p > 4")

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "p": str(self.p),
            "offsets": None if self.offsets is None else list(self.offsets),
            "interpolation": self.interpolation,
            "g_below_zero": self.g_below_zero,
        }


def _tail_lift(m) -> Lift:
    if not isinstance(m, LineMap) or m.xs or m.left != m.right:
        raise InvalidInput("tail maps must be periodic line maps (see lift_section)")
    return m.right


def build_section32(params: Section32Params, tail_action: Action) -> Action:
    """Glue the identity / translations / tail maps into a line action.

    ``f`` is the identity on ``(-inf, 0]``, ``x + alpha`` on ``[1, 4]`` and the
    first tail map on ``[p, inf)``; ``g`` is ``x + alpha`` (or ``x + 1`` with
    ``g_below_zero="unit"``) on ``(-inf, 0]``, ``x + beta`` on ``[1, 4]`` and
    the second tail map on ``[p, inf)``.  Gaps are affine chords.  The
    fixed sets of ``f`` and ``g`` are checked to be disjoint.
    """
    params.check()
    if tail_action.domain != "line" or tail_action.n_gens != 2:
        raise InvalidInput("tail action must be a two-generator line action")
    ta, tb = (_tail_lift(m) for m in tail_action.maps)
    for m in tail_action.maps:
        if not m.min_displacement() > 0:
            raise InvalidInput("tail maps need strictly positive minimum displacement")
    a, b, p = params.alpha, params.beta, params.p
    if not ta(p) > 4 + a:
        raise InvalidInput("tail map a must send p beyond 4 + alpha")
    if not tb(p) > 4 + b:
        raise InvalidInput("tail map b must send p beyond 4 + beta")
    zero, one, four = ZERO, ONE, Scalar(4)
    f = LineMap([(zero, zero), (one, one + a), (four, four + a), (p, ta(p))], Lift.translation(ZERO), ta)
    shift = a if params.g_below_zero == "alpha" else ONE
    g = LineMap([(zero, shift), (one, one + b), (four, four + b), (p, tb(p))], Lift.translation(shift), tb)
    ff, fg = f.fixed_set(), g.fixed_set()
    disjoint = not ff.intersects(fg)
    transcript = {
        "fix_a": ff.describe(),
        "fix_b": fg.describe(),
        "disjoint": disjoint,
        "infinity_fixed": True,
    }
    if not disjoint:
        raise VerificationFailure("glued maps share a fixed point", ["disjoint"])
    out = Action(tail_action.names, (f, g))
    out.certificates["section32"] = {"params": params.to_json(), "fixed_sets": transcript}
    for key in ("offsets", "min_displacement", "pingpong"):
        if key in tail_action.certificates:
            out.certificates.setdefault("tails", {})[key] = tail_action.certificates[key]
    return out


def default_section32(params: Optional[Section32Params] = None, arcs: Sequence = DEFAULT_PINGPONG_ARCS) -> Action:
    """The glued action with ping-pong tails (offsets chosen for positive displacement)."""
    params = params or Section32Params()
    circle, _ = make_pingpong_pair(arcs)
    tails = lift_section(circle, params.offsets)
    return build_section32(params, tails)


def stabilizer_certificate(action: Action, x, budget: int = 10_000) -> Word:
    """``b^k a b^-k`` for the least ``k`` with ``g^-k(x) < 0``, verified to fix ``x``."""
    if action.domain != "line" or action.n_gens != 2:
        raise InvalidInput("stabilizer certificates need the glued two-generator line action")
    x = as_scalar(x)
    lm = action.letter_maps
    ginv = lm[3]
    y, k = x, 0
    while not y < 0:
        if k >= budget:
            raise BudgetExhausted(f"no k <= {budget} pushes {x} below 0")
        y = ginv.evaluate(y)
        k += 1
    w = Word((2,) * k + (0,) + (3,) * k)
    z = x
    for c in reversed(w):
        z = lm[c].evaluate(z)
    if z != x or not w:
        raise VerificationFailure(f"{w} does not fix {x}", ["fixes_point"])
    return w


# gluing interval actions ---------------------------------------------------------


def glue_interval_actions(parts: Sequence[Action], anchors: Sequence) -> Action:
    """Circle action acting on the gap ``(x_i, x_{i+1})`` by the rescaled ``parts[i]``.

    Each part is a circle action fixing 0, read as an action on ``[0, 1]``
    fixing both ends.  Anchors ``x_0 < ... < x_m`` lie in [0, 1); the last gap
    wraps to ``x_0 + 1``.  Every anchor is a global fixed point.
    """
    anchors = [as_scalar(x) for x in anchors]
    if not anchors or len(parts) != len(anchors):
        raise InvalidInput("need exactly one part per anchor gap")
    if any(not (ZERO <= x < ONE) for x in anchors) or any(x0 >= x1 for x0, x1 in zip(anchors, anchors[1:])):
        raise InvalidInput("anchors must be strictly increasing in [0, 1)")
    names = parts[0].names
    for part in parts:
        if part.domain != "circle" or part.names != names:
            raise InvalidInput("parts must be circle actions on the same alphabet")
        for m in part.maps:
            if m.lift(ZERO) != ZERO:
                raise InvalidInput("parts must fix 0")
    ends = anchors + [anchors[0] + 1]
    maps = []
    for gi in range(len(names)):
        pts = {}
        for i, part in enumerate(parts):
            lo, width = ends[i], ends[i + 1] - ends[i]
            pts[lo.frac()] = lo.frac()
            for u, v in part.maps[gi].lift.knots_in(ZERO, ONE):
                if u < 1:
                    x = lo + width * u
                    k = x.floor()
                    pts[x - k] = lo + width * v - k
        maps.append(circle_map(pts.items()))
    out = Action(names, tuple(maps))
    out.certificates["glue"] = {"anchors": [str(x) for x in anchors]}
    return out


def identity_action(names=("a", "b"), domain: str = "circle") -> Action:
    return Action(tuple(names), tuple(identity(domain) for _ in names))
