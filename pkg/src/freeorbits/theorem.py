"""Free-orbit machinery at a finite word-length budget.

Every search walks the reduced words of length <= L in shortlex order and
returns the shortlex-least witness, so results do not depend on how the
word space was split across worker processes.  Words that act as the
identity (kernel words) are reported separately and never serve as
fixed-set witnesses.
"""
from __future__ import annotations

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import BreakpointBudgetExceeded, InvalidInput, VerificationFailure
from .fixedsets import FULL, INTERVAL, OPEN, POINT, ArcInterval, FixedSet, LineFixedSet, circular_distance, merge_closed
from .numeric import ONE, ZERO, Scalar, as_scalar
from .plmaps import breakpoint_cap, get_breakpoint_cap
from .words import Action, Word, count_words, iter_realized, realize, shortlex_key

__all__ = [
    "CatalogEntry",
    "catalog",
    "FreeRegion",
    "free_region",
    "interior_fixer",
    "Z2Transcript",
    "Z2Witness",
    "z2_witness_scan",
    "covering_pairs",
    "verify_z2_witness",
    "StepPiece",
    "StepMap",
    "h_truncated",
    "abelian_rank_witness",
    "verify_faithful_up_to",
    "Census",
    "census",
    "default_jobs",
]

JOBS_ENV = "FREEORBITS_JOBS"


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


# word catalogs -----------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    word: Word
    map: object
    fixed: object


@dataclass
class Catalog:
    budget: int
    entries: list
    kernel: list
    exceeded: list

    def require_complete(self, partial=None):
        if self.exceeded:
            raise BreakpointBudgetExceeded(None, get_breakpoint_cap(), partial=partial, words=self.exceeded)


def _catalog_chunk(action: Action, budget: int, firsts, cap: int, with_fixed: bool):
    out = []
    with breakpoint_cap(cap):
        for w, m in iter_realized(action, budget, firsts):
            if isinstance(m, BreakpointBudgetExceeded):
                out.append((tuple(w), None, None, "exceeded"))
            elif m.is_identity:
                out.append((tuple(w), m, None, "kernel"))
            else:
                out.append((tuple(w), m, m.fixed_set() if with_fixed else None, "ok"))
    return out


def _run_chunks(fn, action: Action, budget: int, jobs: int, *extra):
    cap = get_breakpoint_cap()
    letters = list(range(2 * action.n_gens))
    if jobs <= 1:
        return fn(action, budget, None, cap, *extra)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, action, budget, [c], cap, *extra) for c in letters]
        rows = []
        for fut in futures:
            rows.extend(fut.result())
    rows.sort(key=lambda r: shortlex_key(r[0]))
    return rows


def catalog(action: Action, budget: int, jobs: int = 1, with_fixed: bool = True) -> Catalog:
    """Realize every reduced word up to ``budget`` and split kernel words off."""
    if budget < 1:
        raise InvalidInput("budget must be at least 1")
    rows = _run_chunks(_catalog_chunk, action, budget, jobs, with_fixed)
    entries, kernel, exceeded = [], [], []
    for codes, m, fs, status in rows:
        w = Word._trusted(codes)
        if status == "exceeded":
            exceeded.append(w)
        elif status == "kernel":
            kernel.append(w)
            action.note_kernel(w)
        else:
            entries.append(CatalogEntry(w, m, fs))
    return Catalog(budget, entries, kernel, exceeded)


# free regions --------------------------------------------------------------


@dataclass
class FreeRegion:
    """Points moved by every nontrivial word of length <= budget.

    ``region`` is empty as soon as a kernel word exists (it fixes everything);
    ``non_kernel_region`` is the complement of the union of fixed sets of the
    nontrivially acting words.
    """

    budget: int
    region: list
    non_kernel_region: list
    fixed_union: object
    kernel_words: list
    words_tested: int
    window: Optional[ArcInterval] = None

    @property
    def is_empty(self) -> bool:
        return not self.region

    def _inside(self, arcs, x) -> bool:
        x = as_scalar(x)
        if self.window is None:
            return any(arc.contains(x) for arc in arcs)
        return any(_open_line_contains(arc, x) for arc in arcs)

    def contains(self, x) -> bool:
        return self._inside(self.region, x)

    def moved_by_all_nontrivial(self, x) -> bool:
        """Membership in the region that ignores kernel words."""
        return self._inside(self.non_kernel_region, x)

    def to_json(self) -> dict:
        union = self.fixed_union.to_json() if hasattr(self.fixed_union, "to_json") else [
            [str(a), str(b)] for a, b in self.fixed_union
        ]
        return {
            "budget": self.budget,
            "region": [a.to_json() for a in self.region],
            "non_kernel_region": [a.to_json() for a in self.non_kernel_region],
            "fixed_union": union,
            "kernel_words": [w.text for w in self.kernel_words],
            "kernel_flag": bool(self.kernel_words),
            "words_tested": self.words_tested,
            "window": None if self.window is None else self.window.to_json(),
        }


def _open_line_contains(arc: ArcInterval, x: Scalar) -> bool:
    return arc.lo < x < arc.hi


def free_region(action: Action, budget: int, window: Optional[ArcInterval] = None, jobs: int = 1) -> FreeRegion:
    """Exact free region at a word-length budget.

    Line actions need a bounded ``window``; the region is reported as open
    intervals relative to that window.
    """
    cat = catalog(action, budget, jobs)
    if action.domain == "circle":
        union = FixedSet.empty().union(*(e.fixed for e in cat.entries))
        non_kernel = union.complement()
    else:
        if window is None or window.lo is None or window.hi is None:
            raise InvalidInput("free regions of line actions need a bounded window")
        lo, hi = window.lo, window.hi
        pieces = merge_closed(p for e in cat.entries for p in e.fixed.components_in(lo, hi))
        union = pieces
        non_kernel = []
        cursor = lo
        for a, b in pieces:
            if cursor < a:
                non_kernel.append(ArcInterval(cursor, a, OPEN))
            cursor = max(cursor, b)
        if cursor < hi:
            non_kernel.append(ArcInterval(cursor, hi, OPEN))
    result = FreeRegion(
        budget,
        [] if cat.kernel else list(non_kernel),
        list(non_kernel),
        union,
        list(cat.kernel),
        len(cat.entries) + len(cat.kernel),
        window,
    )
    cat.require_complete(partial=result)
    return result


def interior_fixer(action: Action, budget: int, x) -> Optional[Word]:
    """Shortlex-least nontrivially acting word whose fixed set has ``x`` in its interior."""
    if budget < 1:
        raise InvalidInput("budget must be at least 1")
    x = as_scalar(x)
    for w, m in iter_realized(action, budget):
        if isinstance(m, BreakpointBudgetExceeded):
            raise m
        if m.is_identity:
            action.note_kernel(w)
            continue
        if m.fixed_set().interior_contains(x):
            return w
    return None


# Z^2 witnesses ---------------------------------------------------------------


@dataclass(frozen=True)
class Z2Transcript:
    distinct: bool
    covering: bool
    commutator_identity: bool
    intersect: bool
    nontrivial: bool = True

    @property
    def failed(self) -> list[str]:
        names = ["distinct", "covering", "commutator_identity", "intersect", "nontrivial"]
        return [n for n in names if not getattr(self, n)]

    @property
    def ok(self) -> bool:
        return not self.failed

    def raise_if_failed(self) -> "Z2Transcript":
        if self.failed:
            raise VerificationFailure("Z^2 witness failed: " + ", ".join(self.failed), self.failed)
        return self

    def to_json(self) -> dict:
        return {
            "distinct": self.distinct,
            "covering": self.covering,
            "commutator_identity": self.commutator_identity,
            "intersect": self.intersect,
            "nontrivial": self.nontrivial,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class Z2Witness:
    g: Word
    h: Word
    g_map: object = field(compare=False, repr=False)
    h_map: object = field(compare=False, repr=False)
    transcript: Optional[Z2Transcript] = None

    @property
    def words(self) -> tuple:
        return (self.g, self.h)

    def to_json(self) -> dict:
        return {
            "g": self.g.text,
            "h": self.h.text,
            "fix_g": self.g_map.fixed_set().to_json(),
            "fix_h": self.h_map.fixed_set().to_json(),
            "transcript": None if self.transcript is None else self.transcript.to_json(),
        }


def _transcript(action: Action, g: Word, h: Word, fg=None, fh=None) -> Z2Transcript:
    mg, mh = realize(action, g), realize(action, h)
    fg = mg.fixed_set() if fg is None else fg
    fh = mh.fixed_set() if fh is None else fh
    comm = realize(action, g * h * g.inverse() * h.inverse())
    return Z2Transcript(
        distinct=fg != fh,
        covering=fg.union(fh).is_full,
        commutator_identity=comm.is_identity,
        intersect=not fg.intersection(fh).is_empty,
        nontrivial=not (mg.is_identity or mh.is_identity),
    )


def verify_z2_witness(action: Action, witness: Z2Witness, strict: bool = False) -> Z2Transcript:
    """Recompute all four witness checks from the words alone."""
    if action.domain != "circle":
        raise InvalidInput("Z^2 witnesses live on the circle")
    t = _transcript(action, witness.g, witness.h)
    if strict:
        t.raise_if_failed()
    return t


def covering_pairs(cat: Catalog):
    """Pairs ``(i, j)`` in pair-shortlex order with distinct fixed sets covering the circle.

    Asserts on every such pair that the fixed sets intersect (two closed sets
    covering a connected space cannot be disjoint).
    """
    entries = cat.entries
    for i in range(len(entries)):
        fi = entries[i].fixed
        for j in range(i + 1, len(entries)):
            fj = entries[j].fixed
            if fi == fj:
                continue
            if fi.union(fj).is_full:
                if fi.intersection(fj).is_empty:
                    raise AssertionError(f"covering closed fixed sets are disjoint for {entries[i].word}, {entries[j].word}")
                yield i, j


def z2_witness_scan(action: Action, budget: int, jobs: int = 1) -> Optional[Z2Witness]:
    """First pair (pair-shortlex) of nontrivial words with distinct covering fixed sets."""
    if action.domain != "circle":
        raise InvalidInput("Z^2 scans need a circle action")
    cat = catalog(action, budget, jobs)
    cat.require_complete()
    for i, j in covering_pairs(cat):
        ei, ej = cat.entries[i], cat.entries[j]
        t = _transcript(action, ei.word, ej.word, ei.fixed, ej.fixed)
        t.raise_if_failed()
        return Z2Witness(ei.word, ej.word, ei.map, ej.map, t)
    return None


def abelian_rank_witness(action: Action, budget: int, rank: int, jobs: int = 1) -> Optional[list]:
    """``rank`` nontrivial words with pairwise distinct, pairwise covering fixed sets.

    All pairwise commutators are verified to act as the identity.
    """
    if rank < 2:
        raise InvalidInput("rank must be at least 2")
    if action.domain != "circle":
        raise InvalidInput("abelian rank witnesses need a circle action")
    cat = catalog(action, budget, jobs)
    cat.require_complete()
    reps = []
    seen = set()
    for e in cat.entries:
        if e.fixed not in seen:
            seen.add(e.fixed)
            reps.append(e)
    n = len(reps)
    ok = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            ok[i][j] = ok[j][i] = reps[i].fixed.union(reps[j].fixed).is_full

    def extend(chosen, start):
        if len(chosen) == rank:
            return chosen
        for k in range(start, n):
            if all(ok[c][k] for c in chosen):
                found = extend(chosen + [k], k + 1)
                if found:
                    return found
        return None

    pick = extend([], 0)
    if pick is None:
        return None
    words = [reps[k].word for k in pick]
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            _transcript(action, words[i], words[j], reps[pick[i]].fixed, reps[pick[j]].fixed).raise_if_failed()
    return words


# the truncated sup-map ------------------------------------------------------


@dataclass(frozen=True)
class StepPiece:
    domain: ArcInterval
    value: Optional[Scalar]
    word: Optional[Word]
    interval: Optional[ArcInterval]

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "value": None if self.value is None else str(self.value),
            "word": None if self.word is None else self.word.text,
            "interval": None if self.interval is None else self.interval.to_json(),
        }


@dataclass
class StepMap:
    """``x -> h_L(x)``: the farthest right end (seen from ``x``) of a fixed open interval around ``x``."""

    budget: int
    pieces: list
    endpoints: list
    z2_witness: Optional[Z2Witness] = None

    @property
    def undefined(self) -> list:
        return [p.domain for p in self.pieces if p.value is None]

    def piece_at(self, x) -> StepPiece:
        x = as_scalar(x).frac()
        E = self.endpoints
        if not E:
            return self.pieces[0]
        from bisect import bisect_left

        i = bisect_left(E, x)
        if i < len(E) and E[i] == x:
            return self.pieces[2 * i]
        # cell following endpoint i-1 (cyclically)
        k = (i - 1) % len(E)
        return self.pieces[2 * k + 1]

    def __call__(self, x) -> Optional[Scalar]:
        return self.piece_at(x).value

    def to_json(self) -> dict:
        return {
            "budget": self.budget,
            "pieces": [p.to_json() for p in self.pieces],
            "undefined": [d.to_json() for d in self.undefined],
            "z2_witness": None if self.z2_witness is None else self.z2_witness.to_json(),
        }


def _best_candidate(cands, x):
    best = None
    best_d = None
    for arc, w in cands:
        if arc.interior_contains(x):
            d = circular_distance(x, arc.hi)
            if best is None or d > best_d:
                best, best_d = (arc, w), d
    return best


def h_truncated(action: Action, budget: int, jobs: int = 1) -> StepMap:
    """Exact step map of the truncated sup-map at word-length budget ``budget``."""
    if action.domain != "circle":
        raise InvalidInput("the sup-map is defined for circle actions")
    cat = catalog(action, budget, jobs)
    cat.require_complete()
    cands = []
    seen = set()
    for e in cat.entries:
        for c in e.fixed.interval_components():
            arc = ArcInterval(c.lo, c.hi, OPEN)
            if (arc.lo, arc.hi) not in seen:
                seen.add((arc.lo, arc.hi))
                cands.append((arc, e.word))
    ends = sorted({a.lo for a, _ in cands} | {a.hi for a, _ in cands})
    if not ends:
        full = ArcInterval(ZERO, ZERO, FULL)
        return StepMap(budget, [StepPiece(full, None, None, None)], [])
    pieces = []
    samples = []
    for i, e in enumerate(ends):
        nxt = ends[i + 1] if i + 1 < len(ends) else ends[0] + 1
        pieces.append(ArcInterval(e, e, POINT))
        samples.append(e)
        pieces.append(ArcInterval(e, nxt.frac() if nxt >= 1 else nxt, OPEN))
        samples.append(((e + nxt) / 2).frac())
    out = []
    witness = None
    fixed_of = {e.word: e.fixed for e in cat.entries}
    for dom, x in zip(pieces, samples):
        best = _best_candidate(cands, x)
        if best is None:
            out.append(StepPiece(dom, None, None, None))
            continue
        arc, w = best
        out.append(StepPiece(dom, arc.hi, w, arc))
        if witness is None:
            # unbounded branch at truncation: the attaining interval plus the
            # interior fixer's fixed set already cover the circle
            fixer = next(wd for a, wd in cands if a.interior_contains(x))
            f_fix = fixed_of[fixer]
            closure = FixedSet.from_closed_intervals([(arc.lo, arc.hi if arc.hi > arc.lo else arc.hi + 1)])
            if fixer != w and closure.union(f_fix).is_full and f_fix != fixed_of[w]:
                t = _transcript(action, fixer, w, f_fix, fixed_of[w])
                if t.ok:
                    m = {e.word: e.map for e in cat.entries}
                    witness = Z2Witness(fixer, w, m[fixer], m[w], t)
    return StepMap(budget, out, ends, witness)


# faithfulness and census -----------------------------------------------------


def _census_chunk(action: Action, budget: int, firsts, cap: int):
    out = []
    with breakpoint_cap(cap):
        for w, m in iter_realized(action, budget, firsts):
            if isinstance(m, BreakpointBudgetExceeded):
                out.append((tuple(w), -1, False, b""))
                continue
            h = hashlib.sha256()
            if m.domain == "circle":
                h.update(repr(([x.parts() for x in m.lift.xs], [y.parts() for y in m.lift.ys])).encode())
            else:
                h.update(repr(([x.parts() for x in m.xs], [y.parts() for y in m.ys])).encode())
                for t in (m.left, m.right):
                    h.update(repr(([x.parts() for x in t.xs], [y.parts() for y in t.ys])).encode())
            out.append((tuple(w), m.n_breakpoints, m.is_identity, h.digest()))
    return out


@dataclass
class Census:
    """Summary of realizing every reduced word up to a budget."""

    budget: int
    n_words: int
    kernel_words: list
    exceeded_words: list
    max_breakpoints: int
    total_breakpoints: int
    digest: str

    def to_json(self) -> dict:
        return {
            "budget": self.budget,
            "n_words": self.n_words,
            "kernel_words": [w.text for w in self.kernel_words],
            "exceeded_words": [w.text for w in self.exceeded_words],
            "max_breakpoints": self.max_breakpoints,
            "total_breakpoints": self.total_breakpoints,
            "digest": self.digest,
        }


def census(action: Action, budget: int, jobs: int = 1) -> Census:
    """Realize all reduced words up to ``budget``; deterministic for any ``jobs``."""
    if budget < 1:
        raise InvalidInput("budget must be at least 1")
    rows = _run_chunks(_census_chunk, action, budget, jobs)
    total = hashlib.sha256()
    kernel, exceeded = [], []
    max_bp = 0
    sum_bp = 0
    for codes, nbp, ident, digest in rows:
        w = Word._trusted(codes)
        total.update(w.text.encode() + b":" + digest + b";")
        if nbp < 0:
            exceeded.append(w)
            continue
        max_bp = max(max_bp, nbp)
        sum_bp += nbp
        if ident:
            kernel.append(w)
            action.note_kernel(w)
    if len(rows) != count_words(budget, action.n_gens):
        raise AssertionError("census did not cover the word space")
    return Census(budget, len(rows), kernel, exceeded, max_bp, sum_bp, total.hexdigest())


def verify_faithful_up_to(action: Action, budget: int, jobs: int = 1) -> list:
    """Kernel words of length <= budget; an empty list certifies faithfulness up to it."""
    c = census(action, budget, jobs)
    if c.exceeded_words:
        raise BreakpointBudgetExceeded(None, get_breakpoint_cap(), partial=c, words=c.exceeded_words)
    return c.kernel_words
