"""Alternating string games, strategies, and the finite clopen solver.

In round n player I decides the strings of length n it owns, then player II
decides the ones it owns.  Under the canonical plan I owns strings beginning
with 0 and II owns strings beginning with 1 together with the empty string,
so the outcome is the join of the two players' languages.  The re-keyed plan
i gives player I exactly the strings beginning with ``0^(i+1) 1``.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .strings import (
    LanguageView,
    PartialLanguage,
    join2,
    parse_token,
    render,
    strings_of_length,
    strings_up_to,
)
from .vm import Budgets, gamma_code, gamma_decode, program_of_index, run

MAX_SOLVER_HORIZON = 3


class StrategyError(Exception):
    """A strategy moved outside its own strings or read an undecided bit."""


class VisibilityError(StrategyError):
    pass


@dataclass(frozen=True)
class GamePlan:
    name: str
    i_prefix: Optional[str] = None  # None: canonical plan

    def owner(self, s: str) -> str:
        if self.i_prefix is None:
            return "I" if s[:1] == "0" else "II"
        return "I" if s.startswith(self.i_prefix) else "II"

    def owned(self, player: str, n: int) -> list[str]:
        return [s for s in strings_of_length(n) if self.owner(s) == player]


CANONICAL = GamePlan("canonical")


def rekeyed_plan(i: int) -> GamePlan:
    return GamePlan(f"rekey-{i}", "0" * (i + 1) + "1")


class Position:
    """Round number plus the bits visible to the player about to move."""

    __slots__ = ("round", "decided", "plan")

    def __init__(self, round: int, decided: PartialLanguage, plan: GamePlan = CANONICAL):
        self.round = round
        self.decided = decided
        self.plan = plan

    def get(self, s: str) -> bool:
        v = self.decided.get(s)
        if v is None:
            raise VisibilityError(f"string {render(s)} is not decided at round {self.round}")
        return v

    def snapshot(self) -> str:
        return "".join("1" if v else "0" for _, v in self.decided.items())


@dataclass(frozen=True)
class Strategy:
    player: str
    move: Callable[[Position], Iterable[str]] = field(compare=False)
    plan: GamePlan = CANONICAL
    name: str = ""


def check_move(sigma: Strategy, pos: Position) -> frozenset[str]:
    chosen = frozenset(sigma.move(pos))
    owned = set(pos.plan.owned(sigma.player, pos.round))
    stray = chosen - owned
    if stray:
        raise StrategyError(f"{sigma.name or 'strategy'} moved on strings it does not own "
                            f"at round {pos.round}: {sorted(map(render, stray))[:4]}")
    return chosen


def always_out(player: str = "I", plan: GamePlan = CANONICAL) -> Strategy:
    return Strategy(player, lambda pos: (), plan, "always-out")


def always_in(player: str = "I", plan: GamePlan = CANONICAL) -> Strategy:
    return Strategy(player, lambda pos: pos.plan.owned(player, pos.round), plan, "always-in")


def copy_language(y: LanguageView, player: str = "II", plan: GamePlan = CANONICAL) -> Strategy:
    """Play y's bits on the player's own strings, ignoring the opponent."""
    def move(pos):
        chosen = []
        for s in pos.plan.owned(player, pos.round):
            v = y.get(s)
            if v is None:
                raise StrategyError(f"opponent language leaves {render(s)} undecided")
            if v:
                chosen.append(s)
        return chosen
    return Strategy(player, move, plan, "copy")


def random_strategy(seed: int, player: str = "I", plan: GamePlan = CANONICAL) -> Strategy:
    """Deterministic pseudo-random strategy: each bit hashes the visible position."""
    def move(pos):
        snap = pos.snapshot()
        chosen = []
        for s in pos.plan.owned(player, pos.round):
            h = hashlib.blake2b(f"{seed}|{s}|{snap}".encode(), digest_size=1).digest()[0]
            if h & 1:
                chosen.append(s)
        return chosen
    return Strategy(player, move, plan, f"random-{seed}")


@dataclass(frozen=True)
class Transcript:
    rounds: tuple[tuple[int, tuple[str, ...], tuple[str, ...]], ...]
    outcome: PartialLanguage

    def to_text(self) -> str:
        out = ["transcript v1\n"]
        for n, mine, theirs in self.rounds:
            out.append(f"round {n}\n")
            out.append("I: " + " ".join(map(render, mine)) + "\n")
            out.append("II: " + " ".join(map(render, theirs)) + "\n")
        return "".join(out).replace(": \n", ":\n")


def play(sigma_i: Strategy, sigma_ii: Strategy, horizon: int, plan: GamePlan = CANONICAL) -> Transcript:
    if sigma_i.player != "I" or sigma_ii.player != "II":
        raise ValueError("play needs a player I strategy and a player II strategy")
    decided: dict[str, bool] = {}
    rounds = []
    view = PartialLanguage()
    for n in range(horizon + 1):
        mine = check_move(sigma_i, Position(n, view, plan))
        for s in plan.owned("I", n):
            decided[s] = s in mine
        view = PartialLanguage(decided)
        theirs = check_move(sigma_ii, Position(n, view, plan))
        for s in plan.owned("II", n):
            decided[s] = s in theirs
        view = PartialLanguage(decided)
        key = lambda s: (len(s), s)
        rounds.append((n, tuple(sorted(mine, key=key)), tuple(sorted(theirs, key=key))))
    return Transcript(tuple(rounds), view)


def star(sigma: Strategy, y: LanguageView, horizon: int) -> PartialLanguage:
    """Outcome of player I's sigma against player II playing y."""
    return play(sigma, copy_language(y, "II", sigma.plan), horizon, sigma.plan).outcome


# finite clopen payoffs ----------------------------------------------------

def _order(horizon: int) -> list[str]:
    return list(strings_up_to(horizon))


@dataclass(frozen=True)
class ClopenPayoff:
    """Truth table over all total decisions of the strings of length <= horizon.

    Entry ``v`` of the table is the payoff of the outcome whose bits, read
    most significant first, are the strings in length-lexicographic order.
    """

    horizon: int
    table: np.ndarray = field(compare=False)

    def __post_init__(self):
        want = 1 << (2 ** (self.horizon + 1) - 1)
        if self.table.shape != (want,):
            raise ValueError(f"payoff table must have {want} entries")

    @property
    def strings(self) -> list[str]:
        return _order(self.horizon)

    def outcome_index(self, x: LanguageView) -> int:
        v = 0
        for s in self.strings:
            b = x.get(s)
            if b is None:
                raise ValueError(f"outcome undecided at {render(s)}")
            v = (v << 1) | int(b)
        return v

    def wins(self, x: LanguageView) -> bool:
        """Does player I win with outcome x?"""
        return bool(self.table[self.outcome_index(x)])

    def complement(self) -> ClopenPayoff:
        return ClopenPayoff(self.horizon, ~self.table)

    @classmethod
    def from_predicate(cls, horizon: int, pred: Callable[[PartialLanguage], bool]) -> ClopenPayoff:
        order = _order(horizon)
        k = len(order)
        table = np.zeros(1 << k, dtype=bool)
        for v in range(1 << k):
            bits = format(v, f"0{k}b")
            table[v] = bool(pred(PartialLanguage(zip(order, (b == "1" for b in bits)))))
        return cls(horizon, table)

    @classmethod
    def random(cls, horizon: int, rng: np.random.Generator, density: float = 0.5) -> ClopenPayoff:
        k = 2 ** (horizon + 1) - 1
        return cls(horizon, rng.random(1 << k) < density)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, ClopenPayoff) and self.horizon == other.horizon
                and np.array_equal(self.table, other.table))

    def to_text(self) -> str:
        bits = "".join("1" if b else "0" for b in self.table)
        rows = [bits[i:i + 64] for i in range(0, len(bits), 64)]
        return (f"payoff v1\nhorizon {self.horizon}\norder length-lex msb-first\n"
                + "".join(r + "\n" for r in rows))

    @classmethod
    def from_text(cls, text: str) -> ClopenPayoff:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or lines[0] != "payoff v1":
            raise ValueError("not a 'payoff v1' file")
        if not lines[1].startswith("horizon "):
            raise ValueError("missing horizon line")
        horizon = int(lines[1].split()[1])
        body = "".join(lines[3:] if lines[2].startswith("order") else lines[2:])
        if set(body) - {"0", "1"}:
            raise ValueError("payoff table must be 0/1 characters")
        return cls(horizon, np.array([c == "1" for c in body], dtype=bool))


def _blocks(horizon: int) -> list[tuple[str, int, int, int]]:
    """(player, round, start, size) of each move in length-lex order."""
    blocks = [("II", 0, 0, 1)]
    start = 1
    for n in range(1, horizon + 1):
        half = 2 ** (n - 1)
        blocks.append(("I", n, start, half))
        blocks.append(("II", n, start + half, half))
        start += 2 * half
    return blocks


def solve_clopen(payoff: ClopenPayoff, aim: str = "I") -> tuple[str, Strategy]:
    """Backward induction; returns the winner and a winning strategy for it.

    ``aim`` names the player who wins exactly when the outcome lies in the
    payoff set; the other player wins on its complement.  Ownership of
    strings and the move order stay canonical either way.
    """
    if payoff.horizon > MAX_SOLVER_HORIZON:
        raise ValueError(f"horizon {payoff.horizon} too large for exhaustive solving "
                         f"(max {MAX_SOLVER_HORIZON})")
    if aim not in ("I", "II"):
        raise ValueError("aim must be 'I' or 'II'")
    blocks = _blocks(payoff.horizon)
    values = [None] * len(blocks)
    w = payoff.table
    for b in range(len(blocks) - 1, -1, -1):
        values[b] = w
        player, _, _, size = blocks[b]
        grid = w.reshape(-1, 1 << size)
        w = grid.any(axis=1) if player == aim else grid.all(axis=1)
    other = "II" if aim == "I" else "I"
    winner = aim if bool(w[0]) else other
    want = winner == aim
    order = payoff.strings
    by_round = {(p, n): (start, size, values[k]) for k, (p, n, start, size) in enumerate(blocks)}

    def move(pos: Position) -> list[str]:
        key = (winner, pos.round)
        if key not in by_round:
            return []
        start, size, table = by_round[key]
        prefix = 0
        for s in order[:start]:
            prefix = (prefix << 1) | int(pos.get(s))
        row = table[prefix << size:(prefix + 1) << size]
        hits = np.flatnonzero(row == want)
        choice = int(hits[0]) if len(hits) else 0
        bits = format(choice, f"0{size}b")
        return [s for s, bit in zip(order[start:start + size], bits) if bit == "1"]

    return winner, Strategy(winner, move, CANONICAL, f"solver-{winner}")


def role_switched_winner(payoff: ClopenPayoff) -> str:
    """Winner of the role-switched game, named in the switched game's terms.

    In the switched game the player owning the strings that begin with 1 is
    called I and aims for the payoff set; the player owning strings that
    begin with 0 is called II.
    """
    winner, _ = solve_clopen(payoff, aim="II")
    return "I" if winner == "II" else "II"


# combination under re-keyed joins -----------------------------------------

def project(x: LanguageView, i: int, up_to: int) -> PartialLanguage:
    """Canonical-plan view of game i inside x: 0w -> x(0^(i+1) 1 w), 1w -> x(1w)."""
    key = "0" * (i + 1) + "1"
    out = {}
    for s in strings_up_to(up_to):
        src = key + s[1:] if s[:1] == "0" else s
        v = x.get(src)
        if v is None:
            break
        out[s] = v
    return PartialLanguage(out)


def rekey_strategy(tau: Strategy, i: int) -> Strategy:
    """Turn a canonical-plan strategy for I into one for the re-keyed plan i."""
    if tau.player != "I" or tau.plan != CANONICAL:
        raise ValueError("rekeying expects a canonical-plan strategy for player I")
    plan = rekeyed_plan(i)
    key = plan.i_prefix

    def move(pos: Position) -> list[str]:
        inner_round = pos.round - (i + 1)
        if inner_round < 1:
            return []
        view = PartialLanguage({s: pos.get(key + s[1:] if s[:1] == "0" else s)
                                for s in strings_up_to(inner_round - 1)})
        chosen = check_move(tau, Position(inner_round, view, CANONICAL))
        return [key + s[1:] for s in chosen]

    return Strategy("I", move, plan, f"{tau.name or 'strategy'}@rekey-{i}")


def combine_strategies(sigmas: Sequence[Strategy], rekey: bool = True) -> Strategy:
    """One canonical strategy for I running each sigma_i on the strings 0^(i+1) 1 w.

    All-zero strings are kept out.  With ``rekey`` the inputs are canonical
    strategies and are re-keyed first; otherwise each sigma_i must already be
    a strategy for the plan ``rekeyed_plan(i)``.
    """
    parts = [rekey_strategy(s, i) if rekey else s for i, s in enumerate(sigmas)]
    for i, p in enumerate(parts):
        if p.plan != rekeyed_plan(i):
            raise ValueError(f"strategy {i} is not for the re-keyed plan {i}")

    def move(pos: Position) -> list[str]:
        chosen: set[str] = set()
        for p in parts:
            sub = check_move(p, Position(pos.round, pos.decided, p.plan))
            if chosen & sub:
                raise AssertionError("delegation collision")
            chosen |= sub
        return sorted(chosen)

    return Strategy("I", move, CANONICAL, "combined")


# PSPACE completion --------------------------------------------------------

def encode_triple(e: int, t: str, m: int) -> str:
    """``1^m 0``, then the gamma code of e+1, then t."""
    return "1" * m + "0" + gamma_code(e + 1) + t


def parse_triple(w: str) -> Optional[tuple[int, str, int]]:
    m = 0
    while m < len(w) and w[m] == "1":
        m += 1
    if m == len(w):
        return None
    dec = gamma_decode(w, m + 1)
    if dec is None:
        return None
    e, pos = dec[0] - 1, dec[1]
    return e, w[pos:], m


def pspace_bit(w: str, view: LanguageView, n: int, max_m: Optional[int] = None) -> int:
    """Player I's bit for the string 0w in round n."""
    parsed = parse_triple(w)
    if parsed is None:
        return 0
    e, t, m = parsed
    if m > n - 2 or (max_m is not None and m > max_m):
        return 0
    return run(program_of_index(e), t, view, Budgets(4 ** m, m)).bit()


def pspace_completion_strategy(max_m: Optional[int] = None) -> Strategy:
    def move(pos: Position) -> list[str]:
        n = pos.round
        return [s for s in pos.plan.owned("I", n) if pspace_bit(s[1:], pos, n, max_m)]
    return Strategy("I", move, CANONICAL, "pspace-completion")


# complement symmetry ------------------------------------------------------

@dataclass(frozen=True)
class ComplementWitness:
    x: PartialLanguage
    anchor: str
    many_one_checked: int
    swap_checked: int
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def complement_symmetric(z: PartialLanguage, L: int) -> ComplementWitness:
    """x = z + complement(z); checks z <=m x and complement(x) <=m x pointwise."""
    if not z.is_total_to(L):
        raise ValueError(f"z must decide every string of length <= {L}")
    zl = z.restrict(L)
    x = join2(zl, zl.complement())
    failures = []
    checked_a = 0
    for t in strings_up_to(L):
        checked_a += 1
        if x.get("0" + t) != z.get(t):
            failures.append(f"z<=x fails at {render(t)}")
    target = not x.get("")
    anchor = next((s for s in x if s and x.get(s) == target), None)
    if anchor is None:
        raise ValueError("no string of x is decided opposite to the empty string")
    checked_b = 0
    for s in x:
        if not s:
            if x.get(anchor) != (not x.get("")):
                failures.append("anchor for the empty string is wrong")
            continue
        checked_b += 1
        image = ("1" if s[0] == "0" else "0") + s[1:]
        if x.get(image) != (not x.get(s)):
            failures.append(f"swap fails at {render(s)}")
    return ComplementWitness(x, anchor, checked_a, checked_b, tuple(failures))


def random_language(rng: random.Random, up_to: int, density: float = 0.5) -> PartialLanguage:
    return PartialLanguage({s: rng.random() < density for s in strings_up_to(up_to)})


def parse_language_tokens(tokens: Iterable[str]) -> list[str]:
    return [parse_token(t) for t in tokens]
