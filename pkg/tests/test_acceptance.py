"""Acceptance suite: one test per criterion, numbered 1 to 12.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary lists one
``criterion N: PASS/FAIL`` line each.
"""
import random
import time
from itertools import product

import numpy as np
import pytest

from genred.forcing import (
    UNCHECKED,
    Condition,
    audit_coherence,
    bottom,
    default_extension,
    extends,
    meet_diagonalization,
    verify_meet,
)
from genred.freegroup import count_words, enum_words
from genred.games import (
    ClopenPayoff,
    Position,
    combine_strategies,
    complement_symmetric,
    parse_triple,
    play,
    project,
    pspace_bit,
    pspace_completion_strategy,
    random_language,
    random_strategy,
    role_switched_winner,
    solve_clopen,
    star,
)
from genred.growth import SQUARE, iterate
from genred.hatcode import FTable, decode_hat, encode_hat, eval_hat, eval_hat_strategy, translated_prefix
from genred.strings import PartialLanguage, code, decode_code, strings_up_to
from genred.vm import LIBRARY, OPCODES, Program, index_of_program, library_index

from oracles import (
    all_strings,
    beats_every_opponent,
    decode_index,
    minimax_winner,
    simple_run,
    words_naive,
)

pytestmark = pytest.mark.acceptance

TOY_BASE = Condition.build(2, {"": ["01"]})
TOY_R, TOY_S = "00", "10"
SOUND_R, SOUND_S = "00000", "10000"
# conditions produced by criteria 6 and 7, audited by criterion 8
PRODUCED: dict[str, list[Condition]] = {"toy": [], "sound": []}


def report(n, detail):
    print(f"criterion {n}: PASS ({detail})")


def random_program(rng):
    names = list(OPCODES)
    size = rng.randrange(1, 12)
    ins = []
    for _ in range(size):
        op = rng.choice(names)
        ins.append((op, rng.randrange(size) if OPCODES[op][1] else None))
    return Program(tuple(ins))


def random_table(rng, max_key=3, max_str=5):
    entries = {}
    for _ in range(rng.randrange(1, 6)):
        key = "".join(rng.choice("01") for _ in range(rng.randrange(max_key)))
        size = rng.randrange(len(key), max_str)
        entries.setdefault(key, set()).update(
            "".join(rng.choice("01") for _ in range(size)) for _ in range(3))
    return FTable(entries)


def test_criterion_01_roundtrips():
    start = time.perf_counter()
    decodable = 0
    for s in strings_up_to(14):
        dec = decode_hat(s, SQUARE)
        if dec is not None:
            decodable += 1
            assert encode_hat(dec.path, dec.payload, SQUARE) == s
        r = decode_code(s, SQUARE)
        if r is not None:
            assert code(r, SQUARE) == s
    paths = ["".join(p) for d in range(4) for p in product("aAbB", repeat=d)]
    for path in paths:
        for t in all_strings(4):
            dec = decode_hat(encode_hat(path, t, SQUARE), SQUARE)
            assert (dec.path, dec.payload) == (path, t)
    elapsed = time.perf_counter() - start
    assert elapsed < 10
    report(1, f"{decodable} decodable strings, {elapsed:.1f}s")


def test_criterion_02_length_bound():
    rng = random.Random(2)
    for _ in range(1000):
        d = rng.randrange(4)
        path = "".join(rng.choice("aAbB") for _ in range(d))
        r = "".join(rng.choice("01") for _ in range(rng.randrange(5)))
        assert len(encode_hat(path, r, SQUARE)) > iterate(SQUARE, d, len(r))
    report(2, "1000 cases")


def test_criterion_03_homomorphism():
    rng = random.Random(3)
    cases = 0
    while cases < 200:
        table = random_table(rng)
        x = "".join(rng.choice("01") for _ in range(400))
        path = "".join(rng.choice("aAbB") for _ in range(rng.randrange(1, 3)))
        t = "".join(rng.choice("01") for _ in range(rng.randrange(4)))
        outer = eval_hat(table, x, encode_hat(path, t, SQUARE), SQUARE)
        inner = eval_hat(table, translated_prefix(path[0], x), encode_hat(path[1:], t, SQUARE), SQUARE)
        assert outer is not None and outer == inner
        cases += 1
    report(3, f"{cases} cases")


def test_criterion_04_word_counting():
    for l in range(9):
        words = enum_words(l)
        assert len(set(words)) == len(words) == count_words(l) == 2 * 3 ** l - 1
        assert count_words(l) <= 4 ** (l + 1)
    assert enum_words(5) == words_naive(5)
    report(4, "l <= 8")


def test_criterion_05_growth():
    for i in range(6):
        assert iterate(SQUARE, i, 2) == 2 ** (2 ** i)
    report(5, "i <= 5")


def toy_machines():
    named = [2, 48, library_index("echo")] + [library_index(n) for n in LIBRARY]
    rng = random.Random(6)
    while len(named) < 110:
        named.append(index_of_program(random_program(rng)))
    return named


def test_criterion_06_toy_meets():
    start = time.perf_counter()
    machines = toy_machines()
    for e in machines:
        p_star, rep = meet_diagonalization(TOY_BASE, TOY_R, TOY_S, 0, e, mode=UNCHECKED, force_n=8)
        assert rep.S_size < rep.chosen_n
        w = verify_meet(p_star, default_extension(TOY_R, p_star.height), default_extension(TOY_S, p_star.height))
        assert w.disagrees
        assert Condition.from_text(p_star.to_text()) == p_star
        PRODUCED["toy"].append(p_star)
    elapsed = time.perf_counter() - start
    assert elapsed < 60
    report(6, f"{len(machines)} machines, {elapsed:.1f}s")


def test_criterion_07_sound_meets():
    start = time.perf_counter()
    verdicts = {}
    for name in LIBRARY:
        p_star, rep = meet_diagonalization(bottom(), SOUND_R, SOUND_S, 1, library_index(name))
        assert (rep.j, rep.k) == (1, 1)
        assert rep.S_size < rep.chosen_n
        w = verify_meet(p_star, default_extension(SOUND_R, p_star.height),
                        default_extension(SOUND_S, p_star.height))
        assert w.disagrees
        verdicts[name] = w.verdict
        PRODUCED["sound"].append(p_star)
    elapsed = time.perf_counter() - start
    assert len(verdicts) >= 10 and elapsed <= 600
    report(7, f"{len(verdicts)} machines, {elapsed:.1f}s")


def test_criterion_08_coherence():
    if not PRODUCED["toy"]:
        test_criterion_06_toy_meets()
    if not PRODUCED["sound"]:
        test_criterion_07_sound_meets()
    audited = 0
    for p in PRODUCED["toy"] + PRODUCED["sound"]:
        rep = audit_coherence(p, min_pairs=10_000)
        assert rep.ok, rep.violations
        assert rep.pairs_checked >= 10_000
        audited += 1
    assert extends(PRODUCED["toy"][0], TOY_BASE)
    report(8, f"{audited} conditions")


def test_criterion_09_determinacy():
    rng = np.random.default_rng(9)
    winners = {"I": 0, "II": 0}
    for _ in range(200):
        # at horizon 3 the winner flips from II to I as the density crosses ~0.85
        payoff = ClopenPayoff.random(3, rng, density=rng.uniform(0.5, 0.95))
        winner, sigma = solve_clopen(payoff)
        winners[winner] += 1
        assert winner == minimax_winner(payoff.table, 3)

        def wins(decided, sigma=sigma):
            in_set = payoff.wins(PartialLanguage(decided))
            return in_set if sigma.player == "I" else not in_set

        def move(n, decided, sigma=sigma):
            return sigma.move(Position(n, PartialLanguage(decided)))

        assert beats_every_opponent(move, sigma.player, wins, 3)
        assert winner != role_switched_winner(payoff.complement())
    assert min(winners.values()) > 0
    report(9, f"I won {winners['I']}, II won {winners['II']}")


def test_criterion_10_combination():
    pairs = 0
    for seed in range(60):
        sigmas = [random_strategy(1000 * seed + i) for i in range(2)]
        y = random_language(random.Random(seed), 6)
        x = star(combine_strategies(sigmas), y, 6)
        for i, sigma in enumerate(sigmas):
            assert project(x, i, 4) == star(sigma, y, 4)
        pairs += 1
    report(10, f"{pairs} pairs")


def test_criterion_11_strategy_wrapping():
    rng = np.random.default_rng(11)
    py = random.Random(11)
    solved = 0
    while solved < 20:
        payoff = ClopenPayoff.random(3, rng, density=0.9)
        winner, sigma = solve_clopen(payoff)
        if winner != "I":
            continue
        solved += 1
        for _ in range(50):
            assert payoff.wins(star(sigma, random_language(py, 3), 3))
        table = random_table(py, max_key=3, max_str=6)
        x = "".join(py.choice("01") for _ in range(64))
        y = {}
        for s in strings_up_to(6):
            y[s] = bool(table.value(x, s[2:])) if s[:2] == "10" else False
        direct = star(sigma, PartialLanguage(y), 6)
        for s in strings_up_to(6):
            assert eval_hat_strategy(sigma, table, x, s, SQUARE) == int(direct.get(s)), s
    report(11, f"{solved} strategies")


def test_criterion_12_pspace_and_complement():
    pairs = 0
    for seed in range(10):
        t = play(pspace_completion_strategy(), random_strategy(seed, "II"), 6)
        for s, v in t.outcome.items():
            if s[:1] != "0":
                continue
            view = t.outcome.restrict(len(s) - 1)
            parsed = parse_triple(s[1:])
            want = 0
            if parsed is not None and parsed[2] <= len(s) - 2:
                e, tail, m = parsed
                want = int(simple_run(decode_index(e), tail, view, 4 ** m, m) == "accept")
            assert int(v) == want == pspace_bit(s[1:], view, len(s))
            pairs += 1
    assert pairs >= 500
    for seed in range(20):
        w = complement_symmetric(random_language(random.Random(seed), 4), 4)
        assert w.ok, w.failures
    report(12, f"{pairs} pspace pairs, 20 complement checks")
