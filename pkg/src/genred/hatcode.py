"""The self-referential coding map and its strategy-wrapped variant.

A string s of the coded language at point x is either ``0 t`` (t is then
read directly from f at x) or ``1 code(d1 d2 w)`` where the two selector bits
d1 d2 pick a generator and w is a string of the coded language at the
translated point.  Peeling those layers gives a literal generator path and a
payload; the payload is read from f at ``word_of_path(path) . x``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

from .freegroup import index, inverse, modulus, multiply, reduce_word, translated_bits, word_at
from .growth import GrowthFunction
from .strings import (
    LanguageView,
    PartialLanguage,
    Prefix,
    check_bits,
    code,
    code_length,
    decode_code,
    parse_token,
    render,
    strings_up_to,
)

SELECTOR = {"00": "a", "01": "A", "10": "b", "11": "B"}
GENERATOR_BITS = {v: k for k, v in SELECTOR.items()}

Point = Union[str, Prefix, Callable[[int], Optional[str]]]
FMap = Callable[[str], LanguageView]


@dataclass(frozen=True)
class PathDecomposition:
    path: str
    payload: str

    @property
    def depth(self) -> int:
        return len(self.path)


def decode_hat(s: str, g: GrowthFunction) -> Optional[PathDecomposition]:
    # walk by offset: deep codes run to millions of bits, so avoid slicing
    path = []
    pos = 0
    while True:
        if pos >= len(s):
            return None
        if s[pos] == "0":
            return PathDecomposition("".join(path), s[pos + 1:])
        one = s.find("1", pos + 1)
        if one < 0:
            return None
        body = one + 1
        if g(len(s) - body) != one - pos - 1 or len(s) - body < 2:
            return None
        path.append(SELECTOR[s[body:body + 2]])
        pos = body + 2


def encode_hat(path: str, r: str, g: GrowthFunction) -> str:
    check_bits(r)
    # lengths innermost first, then one join outermost first
    inner = [len(r) + 1]
    for _ in path:
        inner.append(1 + code_length(inner[-1] + 2, g))
    pieces = []
    for depth, gen in enumerate(path):
        pieces += ("1", "0" * g(inner[len(path) - depth - 1] + 2), "1" + GENERATOR_BITS[gen])
    pieces.append("0" + r)
    return "".join(pieces)


def encoded_length(depth: int, payload_len: int, g: GrowthFunction) -> int:
    """Length of encode_hat(path, r) for any path of this depth and |r| = payload_len."""
    n = payload_len + 1
    for _ in range(depth):
        n = 1 + code_length(n + 2, g)
    return n


def word_of_path(path: str) -> str:
    """Group element whose translate the payload is read at (path reversed, reduced)."""
    return reduce_word(path[::-1])


def translated_prefix(gamma: str, x: Point, coords: Optional[int] = None) -> str:
    """Longest determined prefix of gamma.x, capped at coords coordinates."""
    if callable(x):
        if coords is None:
            raise ValueError("coords is required for callable points")
        h = inverse(gamma)
        out = []
        for i in range(coords):
            b = x(index(multiply(h, word_at(i))))
            if b is None:
                break
            out.append(b)
        return "".join(out)
    x = Prefix.of(x)
    # modulus(gamma, m) >= m and is monotone in m
    lo, hi = 0, len(x) if coords is None else min(coords, len(x))
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if modulus(gamma, mid) <= len(x):
            lo = mid
        else:
            hi = mid - 1
    return translated_bits(gamma, x, lo)


def eval_hat(f: FMap, x: Point, s: str, g: GrowthFunction, coords: Optional[int] = None) -> Optional[int]:
    """Bit of the coded language at point x on string s (None if undecided)."""
    dec = decode_hat(s, g)
    if dec is None:
        return 0
    if coords is None and callable(x):
        coords = len(dec.payload)
    rho = translated_prefix(word_of_path(dec.path), x, coords)
    v = f(rho).get(dec.payload)
    return None if v is None else int(v)


class FTable:
    """Finite continuous f: entries attach in-strings to point prefixes.

    ``f(rho)`` decides every string of length <= |rho|: in iff it is listed
    under some key that is a prefix of rho.
    """

    def __init__(self, entries: Mapping[str, frozenset[str] | set[str]]):
        self.entries = {check_bits(k): frozenset(check_bits(s) for s in v) for k, v in entries.items()}
        self._lengths = sorted({len(k) for k in self.entries})

    def __call__(self, rho: str) -> LanguageView:
        return _FTableSlice(self, rho)

    def value(self, rho: str, sigma: str) -> Optional[bool]:
        if len(sigma) > len(rho):
            return None
        for m in self._lengths:
            if m > len(rho):
                break
            if sigma in self.entries.get(rho[:m], ()):
                return True
        return False

    def is_coherent(self) -> bool:
        """Each listed string is at least as long as its key."""
        return all(len(s) >= len(k) for k, v in self.entries.items() for s in v)

    def to_text(self) -> str:
        out = []
        for k in sorted(self.entries, key=lambda k: (len(k), k)):
            out.append(f"[{render(k)}]\n")
            out.extend(f"{render(s)} in\n" for s in sorted(self.entries[k], key=lambda s: (len(s), s)))
        return "".join(out)

    @classmethod
    def from_text(cls, text: str) -> FTable:
        entries: dict[str, set[str]] = {}
        current = None
        body: list[str] = []

        def flush():
            if current is not None:
                lang = PartialLanguage.from_text("\n".join(body))
                entries.setdefault(current, set()).update(lang.members())
        for line in text.splitlines():
            stripped = line.split("#", 1)[0].strip()
            if stripped.startswith("[") and stripped.endswith("]"):
                flush()
                current = parse_token(stripped[1:-1])
                body = []
            elif stripped:
                if current is None:
                    raise ValueError("f-table entry before any [prefix] header")
                body.append(stripped)
        flush()
        return cls(entries)


class _FTableSlice:
    def __init__(self, table: FTable, rho: str):
        self.table = table
        self.rho = rho

    def get(self, sigma: str) -> Optional[bool]:
        return self.table.value(self.rho, sigma)


def eval_hat_strategy(sigma, f: FMap, x: Point, s: str, g: GrowthFunction,
                      coords: Optional[int] = None) -> Optional[int]:
    """Bit at s of the strategy-wrapped coded language at point x.

    The wrapped language is the outcome of player I's strategy sigma against
    player II playing the inner join ``f(x) + code(join4 of the translates)``
    on the strings beginning with 1.  Player I's round-n move may depend on
    every bit of length < n at the same point, which in turn reads the
    translates at strictly shorter payloads, so the recursion is well founded.
    """
    from .games import CANONICAL, Position, check_move

    positions: dict[tuple[str, int], Optional[frozenset[str]]] = {}

    def f_bit(word: str, t: str) -> Optional[int]:
        need = len(t) if coords is None else coords
        if callable(x):
            rho = translated_prefix(word, x, need)
        else:
            rho = translated_prefix(word, x, coords)
        v = f(rho).get(t)
        return None if v is None else int(v)

    def inner_bit(word: str, u: str) -> Optional[int]:
        if not u:
            return 0
        if u[0] == "0":
            return f_bit(word, u[1:])
        v = decode_code(u[1:], g)
        if v is None or len(v) < 2:
            return 0
        return bit(multiply(SELECTOR[v[:2]], word), v[2:])

    def moves(word: str, n: int) -> Optional[frozenset[str]]:
        key = (word, n)
        if key not in positions:
            decided = {}
            result: Optional[frozenset[str]] = None
            for t in strings_up_to(n - 1):
                b = bit(word, t)
                if b is None:
                    break
                decided[t] = bool(b)
            else:
                pos = Position(n, PartialLanguage(decided), CANONICAL)
                result = check_move(sigma, pos)
            positions[key] = result
        return positions[key]

    def bit(word: str, t: str) -> Optional[int]:
        if CANONICAL.owner(t) == "II":
            return inner_bit(word, t[1:]) if t else 0
        m = moves(word, len(t))
        if m is None:
            return None
        return 1 if t in m else 0

    return bit("", s)
