"""Binary strings, finitely decided languages, recursive joins and the sparse code.

Strings are plain ``str`` objects over ``"01"``; the empty string is ``""``
and is rendered as ``e`` in text files.  A language is anything with a
``get(s)`` method returning ``True`` (in), ``False`` (out) or ``None``
(undecided); :class:`PartialLanguage` is the finite, immutable one.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, Optional, Protocol

from .growth import GrowthFunction

EPSILON_TOKEN = "e"


class LanguageView(Protocol):
    def get(self, s: str) -> Optional[bool]: ...


def check_bits(s: str) -> str:
    if s.strip("01"):
        raise ValueError(f"not a binary string: {s!r}")
    return s


def length_lex_key(s: str) -> tuple[int, str]:
    return (len(s), s)


def strings_of_length(n: int) -> Iterator[str]:
    for bits in itertools.product("01", repeat=n):
        yield "".join(bits)


def strings_up_to(n: int) -> Iterator[str]:
    """All strings of length <= n in length-lexicographic order."""
    for m in range(n + 1):
        yield from strings_of_length(m)


def render(s: str) -> str:
    return s if s else EPSILON_TOKEN


def parse_token(tok: str) -> str:
    return "" if tok == EPSILON_TOKEN else check_bits(tok)


class PartialLanguage:
    """Immutable finite map from binary strings to in/out.

    Strings absent from the map are undecided, which is distinct from out.
    """

    __slots__ = ("_decided",)

    def __init__(self, decided: Mapping[str, bool] | Iterable[tuple[str, bool]] = ()):
        items = decided.items() if isinstance(decided, Mapping) else decided
        table: dict[str, bool] = {}
        for s, v in items:
            check_bits(s)
            v = bool(v)
            if table.get(s, v) != v:
                raise ValueError(f"conflicting decisions for {render(s)}")
            table[s] = v
        self._decided = table

    @classmethod
    def total(cls, members: Iterable[str], up_to: int) -> PartialLanguage:
        """Decide every string of length <= up_to; in iff listed."""
        inside = set(members)
        stray = [s for s in inside if len(s) > up_to]
        if stray:
            raise ValueError(f"member longer than {up_to}: {render(stray[0])}")
        return cls({s: s in inside for s in strings_up_to(up_to)})

    @classmethod
    def empty(cls, up_to: int) -> PartialLanguage:
        return cls.total((), up_to)

    def get(self, s: str) -> Optional[bool]:
        return self._decided.get(s)

    def decides(self, s: str) -> bool:
        return s in self._decided

    def __contains__(self, s: str) -> bool:
        return self._decided.get(s) is True

    def __len__(self) -> int:
        return len(self._decided)

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._decided, key=length_lex_key))

    def items(self) -> list[tuple[str, bool]]:
        return [(s, self._decided[s]) for s in self]

    def members(self) -> list[str]:
        return [s for s, v in self.items() if v]

    def is_total_to(self, n: int) -> bool:
        return all(s in self._decided for s in strings_up_to(n))

    def restrict(self, max_len: int) -> PartialLanguage:
        return PartialLanguage({s: v for s, v in self._decided.items() if len(s) <= max_len})

    def complement(self) -> PartialLanguage:
        return PartialLanguage({s: not v for s, v in self._decided.items()})

    def updated(self, decisions: Mapping[str, bool]) -> PartialLanguage:
        table = dict(self._decided)
        table.update(decisions)
        return PartialLanguage(table)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialLanguage):
            return NotImplemented
        return self._decided == other._decided

    def __hash__(self) -> int:
        return hash(frozenset(self._decided.items()))

    def __repr__(self) -> str:
        shown = ", ".join(f"{render(s)}:{'in' if v else 'out'}" for s, v in self.items()[:8])
        more = "" if len(self) <= 8 else f", ... ({len(self)} decided)"
        return f"PartialLanguage({{{shown}{more}}})"

    def to_text(self) -> str:
        return "".join(f"{render(s)} {'in' if v else 'out'}\n" for s, v in self.items())

    @classmethod
    def from_text(cls, text: str) -> PartialLanguage:
        table = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2 or parts[1] not in ("in", "out"):
                raise ValueError(f"line {lineno}: expected '<string> <in|out>', got {line!r}")
            table[parse_token(parts[0])] = parts[1] == "in"
        return cls(table)


class ConstantLanguage:
    """Every string in (or every string out)."""

    def __init__(self, value: bool):
        self.value = value

    def get(self, s: str) -> bool:
        return self.value


ALL_IN = ConstantLanguage(True)
ALL_OUT = ConstantLanguage(False)


class FiniteSetLanguage:
    """Total language whose members are exactly a finite set."""

    def __init__(self, members: Iterable[str]):
        self.members = frozenset(members)

    def get(self, s: str) -> bool:
        return s in self.members


def join2(x: PartialLanguage, y: PartialLanguage) -> PartialLanguage:
    """Recursive join: ``0s`` follows x at s, ``1s`` follows y at s.

    The empty string is never a member of a join; it is decided out when
    both components decide the empty string, and left undecided otherwise.
    """
    table = {"0" + s: v for s, v in x.items()}
    table.update(("1" + s, v) for s, v in y.items())
    if x.decides("") and y.decides(""):
        table[""] = False
    return PartialLanguage(table)


def join4(a: PartialLanguage, b: PartialLanguage, c: PartialLanguage, d: PartialLanguage) -> PartialLanguage:
    # selectors 00 -> a, 01 -> b, 10 -> c, 11 -> d
    return join2(join2(a, b), join2(c, d))


def unjoin(side: int, z: PartialLanguage) -> PartialLanguage:
    tag = "01"[side]
    return PartialLanguage({s[1:]: v for s, v in z.items() if s[:1] == tag})


def code(r: str, g: GrowthFunction) -> str:
    """``0^{g(|r|)} 1 r``."""
    return "0" * g(len(r)) + "1" + r


def decode_code(s: str, g: GrowthFunction) -> Optional[str]:
    one = s.find("1")
    if one < 0:
        return None
    r = s[one + 1:]
    if g(len(r)) != one:
        return None
    return r


def code_length(payload_len: int, g: GrowthFunction) -> int:
    return g(payload_len) + 1 + payload_len


class Prefix:
    """A point prefix that may be far too long to hold in memory.

    Bits past the explicit ``head`` equal ``fill``; this is how the padded
    verification prefixes of forcing conditions with astronomically large
    heights are represented.
    """

    __slots__ = ("head", "length", "fill")

    def __init__(self, head: str = "", length: Optional[int] = None, fill: str = "0"):
        check_bits(head)
        if fill not in ("0", "1"):
            raise ValueError("fill must be '0' or '1'")
        length = len(head) if length is None else length
        if length < 0:
            raise ValueError("negative prefix length")
        self.head = head[:length]
        self.length = length
        self.fill = fill

    @classmethod
    def of(cls, r: str | Prefix) -> Prefix:
        return r if isinstance(r, Prefix) else cls(r)

    def __len__(self) -> int:
        return self.length

    def bit(self, i: int) -> str:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return self.head[i] if i < len(self.head) else self.fill

    def take(self, m: int) -> str:
        m = min(m, self.length)
        if m <= len(self.head):
            return self.head[:m]
        return self.head + self.fill * (m - len(self.head))

    def startswith(self, a: str) -> bool:
        return len(a) <= self.length and self.take(len(a)) == a

    def __eq__(self, other: object) -> bool:
        if isinstance(other, str):
            other = Prefix(other)
        if not isinstance(other, Prefix):
            return NotImplemented
        if self.length != other.length:
            return False
        span = max(len(self.head), len(other.head))
        return self.take(span) == other.take(span) and (
            span == self.length or self.fill == other.fill)

    def __hash__(self) -> int:
        return hash((self.length, self.take(256)))

    def __repr__(self) -> str:
        if self.length == len(self.head):
            return f"Prefix({self.head!r})"
        return f"Prefix({self.head!r}, length={self.length}, fill={self.fill!r})"
