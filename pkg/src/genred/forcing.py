"""Forcing conditions, the amalgamated map p-hat, and the diagonal meet.

A condition of height h assigns to every point prefix r of length h a set of
strings of length <= h.  Heights in sound mode are in the billions, so a
condition is kept symbolic: a list of base layers (prefix -> finite set of
strings) and lazily evaluated diagonal layers.  A layer attached at a prefix
of length a only contributes strings of length >= a; that is the whole of the
coherence requirement, and it lets evaluation look at r only up to |sigma|.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .freegroup import ENUM_VERSION, enum_words, incompatible_up_to, modulus
from .growth import SQUARE, GrowthFunction, growth_by_name, iterate, validate_growth
from .hatcode import SELECTOR, decode_hat, encode_hat, encoded_length, translated_prefix, word_of_path
from .strings import (
    FiniteSetLanguage,
    Prefix,
    check_bits,
    length_lex_key,
    parse_token,
    render,
    strings_of_length,
    strings_up_to,
)
from .vm import ORACLE_UNDECIDED, Budgets, OracleUndecided, program_of_index, run

SOUND = "sound"
UNCHECKED = "unchecked"
EXHAUSTIVE_HEIGHT = 12
MAX_S_SIZE = 1 << 20
MAX_ENUMERABLE_LAYER = 1 << 16
GENERATORS = "".join(SELECTOR.values())


class PreconditionError(ValueError):
    pass


class OracleEscape(AssertionError):
    """A positive string of p-hat(r*) lies outside the anticipated set S."""


class VerificationFailure(AssertionError):
    pass


# layers and conditions ----------------------------------------------------

@lru_cache(maxsize=8192)
def _diagonal_member(e: int, k: int, g: GrowthFunction, n: int, S: tuple[str, ...], sigma: str) -> bool:
    l = int(sigma, 2) if sigma else 0
    u = FiniteSetLanguage(S[b] for b in range(len(S)) if l >> b & 1)
    bound = iterate(g, k, n)
    res = run(program_of_index(e), "0" + sigma, u, Budgets(bound, bound))
    return not res.accepted


@dataclass(frozen=True)
class DiagonalLayer:
    anchor: str
    n: int
    e: int
    k: int
    S: tuple[str, ...]
    g: GrowthFunction = SQUARE

    def __post_init__(self):
        check_bits(self.anchor)
        if self.n < 2:
            raise ValueError("diagonal layers need n >= 2")

    @property
    def budget(self) -> int:
        return iterate(self.g, self.k, self.n)

    def subset(self, l: int) -> frozenset[str]:
        """u_l: bit b of l (least significant first) selects S[b]."""
        return frozenset(self.S[b] for b in range(len(self.S)) if l >> b & 1)

    def index_of_subset(self, u: Iterable[str]) -> int:
        pos = {s: b for b, s in enumerate(self.S)}
        return sum(1 << pos[s] for s in u)

    def sigma(self, l: int) -> str:
        return format(l, f"0{self.n - 1}b")

    def member(self, sigma: str) -> bool:
        """Is sigma put in?  In iff program e relative to u_l does not accept 0 sigma."""
        if len(sigma) != self.n - 1:
            return False
        return _diagonal_member(self.e, self.k, self.g, self.n, self.S, sigma)

    def applies(self, r: Prefix) -> bool:
        return r.startswith(self.anchor)

    def to_text(self) -> str:
        return (f"diag ({render(self.anchor)}) n={self.n} k={self.k} e={self.e} "
                f"|S|={len(self.S)} S={','.join(self.S)}")


@dataclass(frozen=True)
class Condition:
    height: int
    base: tuple[tuple[str, frozenset[str]], ...] = ()
    diagonal: tuple[DiagonalLayer, ...] = ()
    g: GrowthFunction = SQUARE

    def __post_init__(self):
        if self.height < 0:
            raise ValueError("negative height")
        for a, strs in self.base:
            if len(a) > self.height:
                raise ValueError(f"base prefix {render(a)} longer than height {self.height}")
            for s in strs:
                if len(check_bits(s)) > self.height:
                    raise ValueError(f"string {render(s)} longer than height {self.height}")
        for d in self.diagonal:
            if d.n - 1 > self.height or len(d.anchor) > self.height:
                raise ValueError("diagonal layer does not fit under the height")

    @classmethod
    def build(cls, height: int, base: Mapping[str, Iterable[str]] = (), g: GrowthFunction = SQUARE) -> Condition:
        items = dict(base)
        layers = tuple((a, frozenset(items[a])) for a in sorted(items, key=length_lex_key))
        return cls(height, layers, (), g)

    def base_strings(self) -> set[str]:
        return {s for _, strs in self.base for s in strs}

    def to_text(self) -> str:
        out = ["condition v1\n", f"height {self.height}\n", f"growth {self.g.name}\n",
               f"enum {ENUM_VERSION}\n"]
        for a, strs in self.base:
            out.append(f"base ({render(a)}) : {','.join(sorted(strs, key=length_lex_key))}\n")
        out.extend(d.to_text() + "\n" for d in self.diagonal)
        return "".join(out)

    @classmethod
    def from_text(cls, text: str) -> Condition:
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or lines[0] != "condition v1":
            raise ValueError("not a condition v1 file")
        height = None
        g = SQUARE
        base: list[tuple[str, frozenset[str]]] = []
        diag: list[DiagonalLayer] = []
        for ln in lines[1:]:
            word, _, rest = ln.partition(" ")
            if word == "height":
                height = int(rest)
            elif word == "growth":
                g = growth_by_name(rest.strip())
            elif word == "enum":
                if rest.strip() != ENUM_VERSION:
                    raise ValueError(f"enumeration version {rest.strip()!r} is not {ENUM_VERSION}")
            elif word == "base":
                head, _, tail = rest.partition(":")
                anchor = _parse_paren(head)
                strs = frozenset(parse_token(t) for t in tail.strip().split(",") if t)
                base.append((anchor, strs))
            elif word == "diag":
                head, _, tail = rest.partition(")")
                anchor = _parse_paren(head + ")")
                kv = dict(part.split("=", 1) for part in tail.split())
                S = tuple(t for t in kv.get("S", "").split(",") if t)
                if len(S) != int(kv["|S|"]):
                    raise ValueError("|S| does not match the listed S")
                diag.append(DiagonalLayer(anchor, int(kv["n"]), int(kv["e"]), int(kv["k"]),
                                          tuple(check_bits(s) for s in S), g))
            else:
                raise ValueError(f"unknown condition line {ln!r}")
        if height is None:
            raise ValueError("condition file lacks a height line")
        return cls(height, tuple(base), tuple(diag), g)


def _parse_paren(tok: str) -> str:
    tok = tok.strip()
    if not (tok.startswith("(") and tok.endswith(")")):
        raise ValueError(f"expected (prefix), got {tok!r}")
    return parse_token(tok[1:-1])


def format_prefix(r: Prefix | str) -> str:
    r = Prefix.of(r)
    if r.length == len(r.head):
        return render(r.head)
    return f"{render(r.head)}+{r.fill}^{r.length - len(r.head)}"


def parse_prefix(tok: str) -> Prefix:
    """Inverse of format_prefix: ``bits`` or ``bits+F^count``."""
    head, plus, tail = tok.partition("+")
    head = parse_token(head)
    if not plus:
        return Prefix(head)
    fill, _, count = tail.partition("^")
    return Prefix(head, len(head) + int(count), fill)


def bottom(g: GrowthFunction = SQUARE) -> Condition:
    return Condition(1, (), (), g)


def pad(p: Condition, h: int) -> Condition:
    if h < p.height:
        raise ValueError("pad cannot lower the height")
    return Condition(h, p.base, p.diagonal, p.g)


def eval_condition(p: Condition, r: Prefix | str, sigma: str) -> int:
    """Bit of p(r) at sigma; r may be shorter than the height if |r| >= |sigma|."""
    r = Prefix.of(r)
    if len(sigma) > p.height:
        raise ValueError(f"|sigma| = {len(sigma)} exceeds height {p.height}")
    if len(r) < p.height and len(r) < len(sigma):
        raise ValueError("point prefix too short for this string")
    for a, strs in p.base:
        if sigma in strs:
            if len(a) > len(r):
                raise ValueError("point prefix shorter than a base anchor")
            if r.startswith(a):
                return 1
    for d in p.diagonal:
        if len(sigma) == d.n - 1 and d.applies(r) and d.member(sigma):
            return 1
    return 0


def eval_hat_condition(p: Condition, r: Prefix | str, s: str) -> Optional[int]:
    """Bit of p-hat(r) at s, or None when r does not determine it."""
    dec = decode_hat(s, p.g)
    if dec is None:
        return 0
    need = len(dec.payload)
    if need > p.height:
        return None
    rho = translated_prefix(word_of_path(dec.path), Prefix.of(r), need)
    if len(rho) < need:
        return None
    return eval_condition(p, rho, dec.payload)


class HatView:
    """Oracle view of p-hat(r) restricted to strings of length <= max_len."""

    def __init__(self, p: Condition, r: Prefix | str, max_len: Optional[int] = None):
        self.p = p
        self.r = Prefix.of(r)
        self.max_len = max_len
        self._memo: dict[str, Optional[int]] = {}

    def get(self, s: str) -> Optional[bool]:
        if self.max_len is not None and len(s) > self.max_len:
            return False
        if s not in self._memo:
            self._memo[s] = eval_hat_condition(self.p, self.r, s)
        v = self._memo[s]
        return None if v is None else bool(v)


# extension and coherence ----------------------------------------------------

def _layer_strings(d: DiagonalLayer, rng: Optional[random.Random], cap: int = 8) -> list[str]:
    """All of a diagonal layer's strings when few, else a sample."""
    if d.n - 1 <= 16:
        return list(strings_of_length(d.n - 1))
    rng = rng or random.Random(0)
    ls = {0, (1 << (d.n - 1)) - 1, (1 << len(d.S)) - 1}
    while len(ls) < cap:
        ls.add(rng.getrandbits(min(d.n - 1, 64)))
    return [d.sigma(l) for l in sorted(ls)]


def _candidates(conds: Sequence[Condition], max_len: int, rng: Optional[random.Random] = None) -> list[str]:
    out = set()
    for c in conds:
        out.update(s for s in c.base_strings() if len(s) <= max_len)
        for d in c.diagonal:
            if d.n - 1 <= max_len:
                out.update(_layer_strings(d, rng))
    return sorted(out, key=length_lex_key)


def _anchors(conds: Sequence[Condition]) -> list[str]:
    return sorted({a for c in conds for a, _ in c.base} | {d.anchor for c in conds for d in c.diagonal},
                  key=length_lex_key)


def _random_prefix(rng: random.Random, length: int, anchors: Sequence[str], head_len: int = 64) -> Prefix:
    head = ""
    if anchors and rng.random() < 0.5:
        head = rng.choice(anchors)
    extra = max(0, min(length, head_len) - len(head))
    head += "".join(rng.choice("01") for _ in range(extra))
    return Prefix(head[:length], length, rng.choice("01"))


def _full_prefixes(h: int) -> Iterator[str]:
    return ("".join(bits) for bits in itertools.product("01", repeat=h))


def extends(p_star: Condition, p: Condition, samples: int = 2000, seed: int = 0) -> bool:
    """Does p_star extend p?  Exhaustive up to height 12, sampled above."""
    if p_star.height < p.height:
        return False
    rng = random.Random(seed)
    cands = _candidates([p_star, p], p.height, rng)
    if p_star.height <= EXHAUSTIVE_HEIGHT:
        points: Iterable[Prefix] = (Prefix(r) for r in _full_prefixes(p_star.height))
    else:
        anchors = _anchors([p_star, p])
        points = [_random_prefix(rng, p_star.height, anchors) for _ in range(samples)]
    for r in points:
        short = Prefix(r.take(p.height))
        for sigma in cands:
            if eval_condition(p_star, r, sigma) != eval_condition(p, short, sigma):
                return False
    return True


@dataclass(frozen=True)
class CoherenceReport:
    height: int
    mode: str
    pairs_checked: int
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_text(self) -> str:
        return (f"coherence v1\nheight {self.height}\nmode {self.mode}\n"
                f"pairs-checked {self.pairs_checked}\nviolations {len(self.violations)}\n"
                + "".join(f"violation {v}\n" for v in self.violations))


def structural_violations(p: Condition) -> list[str]:
    bad = []
    for a, strs in p.base:
        bad.extend(f"base string {render(s)} shorter than its anchor {render(a)}"
                   for s in strs if len(s) < len(a))
    for d in p.diagonal:
        if d.n - 1 < len(d.anchor):
            bad.append(f"diagonal strings shorter than anchor {render(d.anchor)}")
    return bad


def audit_coherence(p: Condition, min_pairs: int = 10_000, seed: int = 0) -> CoherenceReport:
    """Check that p(r) on strings of length m depends only on r up to m.

    At heights <= 12 every full prefix is compared with the zero-padded
    restriction of itself to |sigma|; above that, random pairs of prefixes
    sharing a common part of length m >= |sigma| are compared.
    """
    violations = structural_violations(p)
    rng = random.Random(seed)
    pairs = 0
    cands = [s for s in _candidates([p], p.height - 1, rng)]
    if p.height <= EXHAUSTIVE_HEIGHT:
        for sigma in cands:
            for r in _full_prefixes(p.height):
                ref = r[:len(sigma)] + "0" * (p.height - len(sigma))
                pairs += 1
                if eval_condition(p, r, sigma) != eval_condition(p, ref, sigma):
                    violations.append(f"{render(sigma)} differs at {render(r)} vs {render(ref)}")
        return CoherenceReport(p.height, "exhaustive", pairs, tuple(violations[:20]))
    anchors = _anchors([p])
    if not cands:
        cands = [""]
    while pairs < min_pairs:
        sigma = rng.choice(cands)
        if len(sigma) >= p.height:
            continue
        m = min(p.height - 1, len(sigma) + rng.randrange(33))
        common = _random_prefix(rng, m, anchors).take(m)
        r1, r2 = (Prefix(common + format(rng.getrandbits(32), "032b"), p.height, rng.choice("01"))
                  for _ in range(2))
        pairs += 1
        if eval_condition(p, r1, sigma) != eval_condition(p, r2, sigma):
            violations.append(f"{render(sigma)[:40]} differs on extensions of a length-{m} prefix")
    return CoherenceReport(p.height, "sampled", pairs, tuple(violations[:20]))


# parameters ---------------------------------------------------------------

def depth_bound(k: int, n: int, g: GrowthFunction = SQUARE) -> int:
    """k + ceil(log2 log2 n), via the least c with 2^(2^c) >= n."""
    if n < 4:
        raise ValueError("depth_bound needs n >= 4")
    c = 0
    while 2 ** (2 ** c) < n:
        c += 1
    return k + c


def sound_inequality(j: int, k: int, n: int) -> bool:
    return 2 ** (j + 1) * 4 ** (k + 2) * n.bit_length() ** 2 < n


def choose_n(j: int, k: int, g: GrowthFunction = SQUARE) -> int:
    """Least n with 2^(j+1) 4^(k+2) L(n)^2 < n, where L is the bit length."""
    if j > 64:
        raise PreconditionError(f"sound parameters for j = {j} are out of reach")
    c = 2 ** (j + 1) * 4 ** (k + 2)
    L = 1
    # within one bit-length band the inequality is just n > c L^2
    while True:
        lo = max(1 << (L - 1), c * L * L + 1)
        if lo < 1 << L:
            return max(lo, j + 2, 4)
        L += 1


def count_possible(j: int, k: int, n: int, g: GrowthFunction = SQUARE) -> int:
    budget = iterate(g, k, n)
    total = 0
    for d in range(depth_bound(k, n, g) + 1):
        for t in range(2, j + 1):
            if encoded_length(d, t, g) <= budget:
                total += 4 ** d * 2 ** t
    return total


def possible_strings(j: int, k: int, n: int, g: GrowthFunction = SQUARE) -> tuple[str, ...]:
    """Every hat-code of length <= g^k(n) with payload length in [2, j] and bounded depth."""
    size = count_possible(j, k, n, g)
    if size > MAX_S_SIZE:
        raise PreconditionError(f"|S| = {size} is too large to list")
    budget = iterate(g, k, n)
    out = []
    for d in range(depth_bound(k, n, g) + 1):
        for t_len in range(2, j + 1):
            if encoded_length(d, t_len, g) > budget:
                continue
            for path in itertools.product(GENERATORS, repeat=d):
                out.extend(encode_hat("".join(path), t, g) for t in strings_of_length(t_len))
    return tuple(sorted(out, key=length_lex_key))


def unchecked_n(j: int, k: int, g: GrowthFunction = SQUARE, anchor_len: int = 0, limit: int = 1 << 20) -> int:
    n = max(4, j + 2, anchor_len + 1)
    while count_possible(j, k, n, g) >= n:
        n += 1
        if n > limit:
            raise PreconditionError("no small n with |S| < n")
    return n


def max_payload(depth: int, budget: int, g: GrowthFunction) -> int:
    """Largest payload whose depth-d code has length <= budget, or -1."""
    if encoded_length(depth, 0, g) > budget:
        return -1
    lo, hi = 0, budget
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if encoded_length(depth, mid, g) <= budget:
            lo = mid
        else:
            hi = mid - 1
    return lo


def path_words(d: int) -> list[str]:
    """Reduced words of length <= d with the parity of d (the words of depth-d paths)."""
    return [w for w in enum_words(d) if (d - len(w)) % 2 == 0]


def choose_i(n: int, k: int, p: Condition, g: GrowthFunction = SQUARE, floor: int = 0) -> int:
    """Least height at which p-hat is decided on every string of length <= g^k(n)."""
    budget = iterate(g, k, n)
    i = max(n, p.height, floor)
    for d in range(depth_bound(k, n, g) + 1):
        m = max_payload(d, budget, g)
        if m < 0:
            break
        i = max(i, m)
        if m > 0:
            i = max(i, max(modulus(w, m) for w in path_words(d)))
    return i


# the meet ----------------------------------------------------------------

@dataclass(frozen=True)
class MeetReport:
    chosen_n: int
    chosen_i: int
    S_size: int
    depth_bound: int
    mode: str
    j: int
    k: int
    e: int
    r: str
    s: str

    def to_text(self) -> str:
        return (f"meet-report v1\nmode {self.mode}\nj {self.j}\nk {self.k}\ne {self.e}\n"
                f"r {render(self.r)}\ns {render(self.s)}\nchosen-n {self.chosen_n}\n"
                f"chosen-i {self.chosen_i}\nS-size {self.S_size}\ndepth-bound {self.depth_bound}\n")


def meet_diagonalization(p: Condition, r: str, s: str, k: int, e: int, g: Optional[GrowthFunction] = None,
                         mode: str = SOUND, force_n: Optional[int] = None,
                         force_i: Optional[int] = None) -> tuple[Condition, MeetReport]:
    """Extend p into the dense set for (r, s, k, e).

    The new condition carries p's layers and adds one diagonal layer at s.
    The prefixes r and s must be equally long and at least height(p) long.
    """
    g = g or p.g
    if g != p.g:
        raise PreconditionError("growth function differs from the condition's")
    if mode not in (SOUND, UNCHECKED):
        raise ValueError(f"unknown mode {mode!r}")
    check_bits(r)
    check_bits(s)
    j = p.height
    if len(r) != len(s) or len(r) < j:
        raise PreconditionError(f"need |r| = |s| >= height {j}, got {len(r)} and {len(s)}")
    if not extends(p, bottom(g)):
        raise PreconditionError("p does not extend the bottom condition")
    if not incompatible_up_to(r, s, k):
        raise PreconditionError(f"some translate of r by a word of length <= {k} is compatible with s")
    if mode == SOUND:
        if force_n is not None or force_i is not None:
            raise PreconditionError("forced parameters are only allowed in unchecked mode")
        report = validate_growth(g, 64)
        if not report.passed:
            raise PreconditionError(f"growth function {g.name} fails validation at n = {report.first_failure}")
        n = max(choose_n(j, k, g), len(s) + 1)
    else:
        n = force_n if force_n is not None else unchecked_n(j, k, g, len(s))
        if n < 4:
            raise PreconditionError("n must be at least 4")
        if n - 1 < len(s):
            raise PreconditionError("diagonal strings must be at least as long as the anchor")
    S = possible_strings(j, k, n, g)
    if len(S) >= n:
        raise PreconditionError(f"|S| = {len(S)} is not below n = {n}")
    i = choose_i(n, k, p, g, floor=len(r))
    if force_i is not None:
        if force_i < max(n - 1, len(r), j):
            raise PreconditionError(f"forced height {force_i} is too small")
        i = force_i
    layer = DiagonalLayer(s, n, e, k, S, g)
    p_star = Condition(i, p.base, p.diagonal + (layer,), g)
    return p_star, MeetReport(n, i, len(S), depth_bound(k, n, g), mode, j, k, e, r, s)


@dataclass(frozen=True)
class Witness:
    e: int
    r_star: Prefix
    s_star: Prefix
    u_star: tuple[str, ...]
    l_star: int
    t: str
    verdict: str
    steps: int
    hat_bit: int

    @property
    def machine_bit(self) -> int:
        return 1 if self.verdict == "accept" else 0

    @property
    def disagrees(self) -> bool:
        return self.machine_bit != self.hat_bit

    def to_text(self) -> str:
        t = render(self.t) if len(self.t) <= 256 else f"0+sigma({self.l_star})"
        return (f"witness v1\ne {self.e}\nr* {format_prefix(self.r_star)}\ns* {format_prefix(self.s_star)}\n"
                f"u* {','.join(self.u_star)}\nl* {self.l_star}\nt-length {len(self.t)}\nt {t}\n"
                f"machine-verdict {self.verdict}\nmachine-steps {self.steps}\n"
                f"hat-bit {self.hat_bit}\ndisagree {str(self.disagrees).lower()}\n")


def default_extension(r: str, height: int) -> Prefix:
    return Prefix(r, height, "0")


def hat_positives(p: Condition, r: Prefix, max_len: int) -> Iterator[str]:
    """Every s of length <= max_len with p-hat(r)(s) = 1, found structurally.

    Raises OracleEscape when a diagonal layer with too many strings to list
    could contribute; sound parameters keep such layers out of reach.
    """
    r = Prefix.of(r)
    d = 0
    while encoded_length(d, 0, p.g) <= max_len:
        for path in itertools.product(GENERATORS, repeat=d):
            path = "".join(path)
            word = word_of_path(path)
            for a, strs in p.base:
                for t in strs:
                    if encoded_length(d, len(t), p.g) <= max_len:
                        rho = translated_prefix(word, r, len(t))
                        if len(rho) == len(t) and eval_condition(p, rho, t):
                            yield encode_hat(path, t, p.g)
            for layer in p.diagonal:
                t_len = layer.n - 1
                if encoded_length(d, t_len, p.g) > max_len:
                    continue
                rho = translated_prefix(word, r, t_len)
                if len(rho) < t_len or not rho.startswith(layer.anchor):
                    continue
                if 2 ** t_len > MAX_ENUMERABLE_LAYER:
                    raise OracleEscape(f"diagonal layer at {render(layer.anchor)} reachable at depth {d}")
                for t in strings_of_length(t_len):
                    if layer.member(t):
                        yield encode_hat(path, t, p.g)
        d += 1


def verify_meet(p_star: Condition, r_star: Prefix | str, s_star: Prefix | str,
                layer: Optional[DiagonalLayer] = None) -> Witness:
    """Find and check the string t on which program e misreduces p-hat(s*) to p-hat(r*)."""
    layer = layer or p_star.diagonal[-1]
    r_star, s_star = Prefix.of(r_star), Prefix.of(s_star)
    if len(r_star) != p_star.height or len(s_star) != p_star.height:
        raise PreconditionError("r* and s* must have the condition's height")
    if not s_star.startswith(layer.anchor):
        raise PreconditionError("s* does not extend the diagonal anchor")
    budget = layer.budget
    in_S = set(layer.S)
    positives = set()
    for s in hat_positives(p_star, r_star, budget):
        if s not in in_S:
            raise OracleEscape(f"positive string {render(s)[:60]} of p-hat(r*) lies outside S")
        positives.add(s)
    # the structural list must agree with direct evaluation on S
    u_star = tuple(s for s in layer.S if eval_hat_condition(p_star, r_star, s) == 1)
    if set(u_star) != positives:
        raise VerificationFailure("structural positives disagree with direct evaluation on S")
    l_star = layer.index_of_subset(u_star)
    t = "0" + layer.sigma(l_star)
    view = HatView(p_star, r_star, budget)
    res = run(program_of_index(layer.e), t, view, Budgets(budget, budget))
    if res.verdict == ORACLE_UNDECIDED:
        raise OracleUndecided(f"p-hat(r*) undecided at {render(res.queries[-1])[:60]}")
    hat = eval_hat_condition(p_star, s_star, t)
    if hat is None:
        raise VerificationFailure("p-hat(s*) is undecided at the witness")
    w = Witness(layer.e, r_star, s_star, u_star, l_star, t, res.verdict, res.steps_used, hat)
    if not w.disagrees:
        raise VerificationFailure(f"machine {layer.e} agrees with p-hat(s*) at the witness")
    return w


# generic runs --------------------------------------------------------------

@dataclass
class GenericRun:
    chain: list[Condition]
    reports: list[MeetReport] = field(default_factory=list)
    witnesses: list[Witness] = field(default_factory=list)
    skipped: list[tuple[int, str]] = field(default_factory=list)

    @property
    def final(self) -> Condition:
        return self.chain[-1]

    def evaluate(self, r: str, s: str) -> Optional[int]:
        """Finite-stage value of the coded language at the point with prefix r (zero padded)."""
        p = self.final
        return eval_hat_condition(p, Prefix(r, max(p.height, len(r)), "0"), s)


def generic_run(schedule: Sequence[tuple[str, str, int, int]], g: GrowthFunction = SQUARE,
                mode: str = UNCHECKED, force_n: Optional[int] = None,
                start: Optional[Condition] = None, max_height: int = 4096) -> GenericRun:
    """Meet each scheduled dense set in turn, skipping entries that cannot be met."""
    out = GenericRun([start or bottom(g)])
    for idx, (r, s, k, e) in enumerate(schedule):
        p = out.final
        try:
            width = max(len(r), len(s), p.height)
            if width > max_height:
                raise PreconditionError(f"height {width} is too large for explicit prefixes")
            r_pad, s_pad = r.ljust(width, "0"), s.ljust(width, "0")
            p_star, report = meet_diagonalization(p, r_pad, s_pad, k, e, g, mode, force_n)
            w = verify_meet(p_star, default_extension(r_pad, p_star.height),
                            default_extension(s_pad, p_star.height))
            if not extends(p_star, p):
                raise VerificationFailure("chain step is not an extension")
        except (ValueError, AssertionError, OracleUndecided) as exc:
            out.skipped.append((idx, f"{type(exc).__name__}: {exc}"))
            continue
        out.chain.append(p_star)
        out.reports.append(report)
        out.witnesses.append(w)
    return out
