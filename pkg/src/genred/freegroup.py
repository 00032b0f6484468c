"""Reduced words of F2 = <a, b> and the shift action on binary points.

Words are strings over ``aAbB`` (``A`` = a^-1, ``B`` = b^-1); the identity is
``""`` and serializes as ``-``.  Points of 2^omega are indexed by reduced
words in length-lexicographic order with generator order a < A < b < B, so a
point prefix of length n gives the values on the first n enumerated words.
The action is the shift ``(g.x)(w) = x(g^-1 w)``.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Mapping, Optional

from .strings import Prefix, check_bits

LETTERS = "aAbB"
ENUM_VERSION = "llex-aAbB-1"
IDENTITY_TOKEN = "-"

_ORDER = {c: i for i, c in enumerate(LETTERS)}


def inverse_letter(c: str) -> str:
    return c.swapcase()


def check_word(w: str) -> str:
    if any(c not in _ORDER for c in w):
        raise ValueError(f"not a word over {LETTERS}: {w!r}")
    return w


def is_reduced(w: str) -> bool:
    return all(w[i + 1] != inverse_letter(w[i]) for i in range(len(w) - 1))


def reduce_word(letters: str) -> str:
    out: list[str] = []
    for c in check_word(letters):
        if out and out[-1] == inverse_letter(c):
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def inverse(w: str) -> str:
    return w[::-1].swapcase()


def multiply(u: str, v: str) -> str:
    """Reduced product of reduced words."""
    i = 0
    while i < len(u) and i < len(v) and u[-1 - i] == inverse_letter(v[i]):
        i += 1
    return u[:len(u) - i] + v[i:]


def render_word(w: str) -> str:
    return w if w else IDENTITY_TOKEN


def parse_word(tok: str) -> str:
    w = "" if tok == IDENTITY_TOKEN else check_word(tok)
    if not is_reduced(w):
        raise ValueError(f"word {tok!r} is not reduced")
    return w


def count_words(l: int) -> int:
    """Number of reduced words of length <= l."""
    return 2 * 3 ** l - 1


def _successors(prev: str) -> str:
    if not prev:
        return LETTERS
    bad = inverse_letter(prev)
    return "".join(c for c in LETTERS if c != bad)


def enum_words(l: int) -> list[str]:
    """All reduced words of length <= l, length-lexicographic."""
    words = [""]
    layer = [""]
    for _ in range(l):
        layer = [w + c for w in layer for c in _successors(w[-1:])]
        words.extend(layer)
    return words


def iter_words() -> Iterator[str]:
    n = 0
    while True:
        yield word_at(n)
        n += 1


@lru_cache(maxsize=1 << 16)
def index(w: str) -> int:
    """Position of a reduced word in the global enumeration."""
    m = len(w)
    if m == 0:
        return 0
    rank = 0
    prev = ""
    for pos, c in enumerate(w):
        options = _successors(prev)
        k = options.find(c)
        if k < 0:
            raise ValueError(f"word {w!r} is not reduced")
        rank += k * 3 ** (m - 1 - pos)
        prev = c
    return count_words(m - 1) + rank


@lru_cache(maxsize=1 << 16)
def word_at(i: int) -> str:
    if i < 0:
        raise IndexError(i)
    m = 0
    while count_words(m) <= i:
        m += 1
    if m == 0:
        return ""
    rank = i - count_words(m - 1)
    letters = []
    prev = ""
    for pos in range(m):
        block = 3 ** (m - 1 - pos)
        k, rank = divmod(rank, block)
        c = _successors(prev)[k]
        letters.append(c)
        prev = c
    return "".join(letters)


class PartialPoint:
    """Finite assignment of bits to group words."""

    __slots__ = ("assignment",)

    def __init__(self, assignment: Mapping[str, str]):
        for w, b in assignment.items():
            check_word(w)
            if b not in ("0", "1"):
                raise ValueError(f"bad bit {b!r}")
        self.assignment = dict(assignment)

    def get(self, w: str) -> Optional[str]:
        return self.assignment.get(w)

    def determined_prefix_length(self) -> int:
        m = 0
        while word_at(m) in self.assignment:
            m += 1
        return m

    def prefix(self) -> str:
        return "".join(self.assignment[word_at(i)] for i in range(self.determined_prefix_length()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PartialPoint) and self.assignment == other.assignment

    def __len__(self) -> int:
        return len(self.assignment)

    def __repr__(self) -> str:
        inner = ", ".join(f"{render_word(w)}:{b}" for w, b in sorted(
            self.assignment.items(), key=lambda kv: index(kv[0])))
        return f"PartialPoint({{{inner}}})"


def act_partial(gamma: str, r: str) -> PartialPoint:
    """The part of gamma.x determined by the prefix r of x."""
    check_bits(r)
    return PartialPoint({multiply(gamma, word_at(u)): r[u] for u in range(len(r))})


def _largest_word(first: str, length: int) -> str:
    letters = [first]
    for _ in range(length - 1):
        letters.append(_successors(letters[-1])[-1])
    return "".join(letters)


def _max_source_index(gamma: str, m: int) -> int:
    """max over the first m words w of index(gamma^-1 w), for m >= 1."""
    h = inverse(gamma)
    last = word_at(m - 1)
    if not h:
        return m - 1
    length = len(last)
    banned = inverse_letter(h[-1])
    if length == 0:
        best = ""
    elif last[0] != banned:
        best = last
    elif _ORDER[banned] > 0:
        best = _largest_word(LETTERS[_ORDER[banned] - 1], length)
    elif length == 1:
        best = ""
    else:
        first = LETTERS[-1] if banned != LETTERS[-1] else LETTERS[-2]
        best = _largest_word(first, length - 1)
    return index(h + best)


def modulus(gamma: str, m: int) -> int:
    """Least i such that any prefix of length i fixes the first m coordinates of gamma.x."""
    if m <= 0:
        return 0
    return 1 + _max_source_index(gamma, m)


def translated_bits(gamma: str, r: str | Prefix, m: int) -> Optional[str]:
    """First m coordinates of gamma.x given the prefix r of x, or None if r is too short."""
    r = Prefix.of(r)
    if m <= 0:
        return ""
    if modulus(gamma, m) > len(r):
        return None
    if not gamma:
        return r.take(m)
    h = inverse(gamma)
    return "".join(r.bit(index(multiply(h, word_at(i)))) for i in range(m))


def incompatible_up_to(r: str, s: str, k: int) -> bool:
    """True iff every translate g.r with |g| <= k conflicts with s somewhere."""
    if len(r) != len(s):
        raise ValueError("prefixes must have equal length")
    for gamma in enum_words(k):
        conflict = False
        for u in range(len(r)):
            w = index(multiply(gamma, word_at(u)))
            if w < len(s) and s[w] != r[u]:
                conflict = True
                break
        if not conflict:
            return False
    return True
