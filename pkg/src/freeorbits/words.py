"""Free-group words and their realization under an action by PL maps.

Letters are small integers: generator ``i`` is ``2*i`` and its inverse
``2*i + 1``, so numeric order is the shortlex letter order
``a < A < b < B < ...`` and inversion is ``code ^ 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce as _fold
from itertools import islice
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import BreakpointBudgetExceeded, InvalidInput
from .plmaps import CircleMap, LineMap, PLMap, identity, map_from_json, map_to_json

__all__ = [
    "Word",
    "reduce_word",
    "enumerate_words",
    "count_words",
    "shortlex_key",
    "Action",
    "realize",
    "iter_realized",
]


def _letter_text(code: int) -> str:
    ch = chr(ord("a") + (code >> 1))
    return ch.upper() if code & 1 else ch


def _parse_letter(ch: str) -> int:
    if not ch.isalpha() or not ch.isascii():
        raise InvalidInput(f"bad letter {ch!r}")
    g = ord(ch.lower()) - ord("a")
    return 2 * g + (1 if ch.isupper() else 0)


def _free_reduce(codes: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for c in codes:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


class Word(tuple):
    """A freely reduced word; the empty word is the identity."""

    __slots__ = ()

    def __new__(cls, letters: Union[str, Iterable[int]] = ()):
        if isinstance(letters, str):
            letters = [_parse_letter(ch) for ch in letters if not ch.isspace()]
        return super().__new__(cls, _free_reduce(letters))

    @classmethod
    def _trusted(cls, codes: tuple) -> "Word":
        return tuple.__new__(cls, codes)

    @property
    def text(self) -> str:
        return "".join(_letter_text(c) for c in self)

    def __str__(self) -> str:
        return self.text or "e"

    def __repr__(self) -> str:
        return f"Word('{self.text}')"

    def inverse(self) -> "Word":
        return Word._trusted(tuple(c ^ 1 for c in reversed(self)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(tuple(self) + tuple(other))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(tuple(base) * abs(n))

    @property
    def generators_used(self) -> set[int]:
        return {c >> 1 for c in self}

    def pretty(self) -> str:
        """Exponent notation, e.g. ``b^3 a b^-3``."""
        if not self:
            return "e"
        parts = []
        i = 0
        while i < len(self):
            j = i
            while j < len(self) and self[j] == self[i]:
                j += 1
            base = chr(ord("a") + (self[i] >> 1))
            exp = (j - i) * (-1 if self[i] & 1 else 1)
            parts.append(base if exp == 1 else f"{base}^{exp}")
            i = j
        return " ".join(parts)


def reduce_word(letters) -> Word:
    return Word(letters)


def shortlex_key(w: Sequence[int]) -> tuple:
    return (len(w), tuple(w))


def count_words(k: int, n_gens: int = 2) -> int:
    """Number of nontrivial reduced words of length 1..k."""
    r = 2 * n_gens
    return sum(r * (r - 1) ** (n - 1) for n in range(1, k + 1))


def _words_of_length(n: int, n_letters: int, prefix: tuple = ()) -> Iterator[tuple]:
    if len(prefix) == n:
        yield prefix
        return
    last = prefix[-1] if prefix else -1
    for c in range(n_letters):
        if prefix and c == last ^ 1:
            continue
        yield from _words_of_length(n, n_letters, prefix + (c,))


def enumerate_words(k: int, n_gens: int = 2, start: int = 0, stop: Optional[int] = None) -> Iterator[Word]:
    """Nontrivial reduced words of length 1..k in shortlex order.

    ``start``/``stop`` slice the stream by index so workers can partition it.
    """
    if k < 1:
        raise InvalidInput("max length must be at least 1")
    gen = (Word._trusted(w) for n in range(1, k + 1) for w in _words_of_length(n, 2 * n_gens))
    return islice(gen, start, stop)


@dataclass
class Action:
    """Generators acting by PL maps on a common domain."""

    names: tuple
    maps: tuple
    certificates: dict = field(default_factory=dict)
    kernel_notes: list = field(default_factory=list)

    def __post_init__(self):
        self.names = tuple(self.names)
        self.maps = tuple(self.maps)
        if len(self.names) != len(self.maps) or not self.maps:
            raise InvalidInput("need one map per generator")
        domains = {m.domain for m in self.maps}
        if len(domains) != 1:
            raise InvalidInput("generator maps must share a domain")
        self._letters = None

    @property
    def domain(self) -> str:
        return self.maps[0].domain

    @property
    def n_gens(self) -> int:
        return len(self.maps)

    @property
    def letter_maps(self) -> tuple:
        """Maps indexed by letter code: ``a, a^-1, b, b^-1, ...``."""
        if self._letters is None:
            out = []
            for m in self.maps:
                out.append(m)
                out.append(m.inverse())
            self._letters = tuple(out)
        return self._letters

    def generator(self, name: str) -> PLMap:
        return self.maps[self.names.index(name)]

    def word(self, text: str) -> Word:
        w = Word(text)
        if any((c >> 1) >= self.n_gens for c in w):
            raise InvalidInput(f"word {text!r} uses letters outside the alphabet")
        return w

    def note_kernel(self, w: Word) -> None:
        if w not in self.kernel_notes:
            self.kernel_notes.append(w)
            self.kernel_notes.sort(key=shortlex_key)

    def __getstate__(self):
        return {"names": self.names, "maps": self.maps, "certificates": self.certificates, "kernel_notes": self.kernel_notes}

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._letters = None

    def to_json(self) -> dict:
        return {
            "domain": self.domain,
            "generators": list(self.names),
            "maps": {n: map_to_json(m) for n, m in zip(self.names, self.maps)},
            "certificates": self.certificates,
            "kernel_notes": [w.text for w in self.kernel_notes],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Action":
        try:
            names = tuple(data["generators"])
            maps_data = data["maps"]
            if isinstance(maps_data, dict):
                maps = tuple(map_from_json(maps_data[n]) for n in names)
            else:
                maps = tuple(map_from_json(m) for m in maps_data)
            kernel = [Word(t) for t in data.get("kernel_notes", [])]
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed action: {exc}") from exc
        return cls(names, maps, dict(data.get("certificates", {})), kernel)


def realize(action: Action, w: Word) -> PLMap:
    """The map of a word: letters compose left to right, ``ab`` is ``a o b``."""
    if not w:
        return identity(action.domain)
    lm = action.letter_maps
    return _fold(lambda acc, c: acc.compose(lm[c]), w[1:], lm[w[0]])


def _walk(lm, word: tuple, fmap, remaining: int):
    last = word[-1]
    for c in range(len(lm)):
        if c == last ^ 1:
            continue
        w2 = word + (c,)
        if isinstance(fmap, BreakpointBudgetExceeded):
            m2 = fmap
        else:
            try:
                m2 = fmap.compose(lm[c])
            except BreakpointBudgetExceeded as exc:
                m2 = exc
        if remaining == 1:
            yield w2, m2
        else:
            yield from _walk(lm, w2, m2, remaining - 1)


def iter_realized(action: Action, max_len: int, first_letters: Optional[Sequence[int]] = None):
    """Yield ``(word, map)`` for all nontrivial reduced words up to ``max_len``.

    Order is shortlex (restricted to ``first_letters`` when given).  A word
    whose composite exceeds the breakpoint cap yields the
    :class:`BreakpointBudgetExceeded` instance in place of a map, as do all
    its extensions.
    """
    lm = action.letter_maps
    firsts = range(len(lm)) if first_letters is None else sorted(first_letters)
    for n in range(1, max_len + 1):
        for c in firsts:
            if n == 1:
                yield Word._trusted((c,)), lm[c]
            else:
                for w, m in _walk(lm, (c,), lm[c], n - 1):
                    yield Word._trusted(w), m
