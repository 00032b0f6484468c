import random

import pytest
from hypothesis import given, settings, strategies as st

from genred.growth import SQUARE
from genred.strings import ALL_OUT, FiniteSetLanguage, PartialLanguage
from genred.vm import (
    ACCEPT,
    LIBRARY,
    ORACLE_UNDECIDED,
    REJECT,
    SPACE_EXCEEDED,
    TIME_EXCEEDED,
    Budgets,
    OracleUndecided,
    Program,
    falsifies_reduction,
    gamma_code,
    gamma_decode,
    index_of_program,
    library_index,
    program_of_index,
    run,
    run_composed,
)

from oracles import all_strings, decode_index, simple_run

BIG = Budgets(10_000, 1_000)
VERDICT = {ACCEPT: "accept", REJECT: "reject", TIME_EXCEEDED: "time", SPACE_EXCEEDED: "space"}


def test_immediate_accept():
    res = run(program_of_index(2), "0101", ALL_OUT, BIG)
    assert res.verdict == ACCEPT and res.steps_used == 1


def test_echo_frozen_trace():
    res = run(LIBRARY["echo"], "01", PartialLanguage({"01": True}), BIG)
    assert res.verdict == ACCEPT
    assert res.steps_used == 18
    assert res.queries == ("01",)


def test_loop_budget():
    res = run(LIBRARY["loop"], "", ALL_OUT, Budgets(100, 10))
    assert res.verdict == TIME_EXCEEDED and res.steps_used == 100
    assert res.loop_detected


def test_space_budget_counts_query_buffer():
    res = run(LIBRARY["query-000"], "", ALL_OUT, Budgets(100, 2))
    assert res.verdict == SPACE_EXCEEDED


def test_undecided_oracle():
    res = run(LIBRARY["query-empty"], "", PartialLanguage({"0": True}), BIG)
    assert res.verdict == ORACLE_UNDECIDED
    assert res.queries == ("",)


def test_small_indices():
    assert program_of_index(0).instructions == (("REJECT", None),)
    assert program_of_index(1).instructions == (("REJECT", None),)
    assert program_of_index(48).instructions == (("REJECT", None),)


def test_padding_gives_duplicate_programs():
    assert program_of_index(0) == program_of_index(1)


def test_index_roundtrip_exhaustive():
    for e in range(1 << 16):
        p = program_of_index(e)
        assert program_of_index(index_of_program(p)) == p


@given(st.integers(1, 10 ** 9))
def test_gamma_roundtrip(v):
    assert gamma_decode(gamma_code(v) + "1") == (v, len(gamma_code(v)))


def test_decoder_matches_reference():
    rng = random.Random(5)
    for _ in range(2000):
        e = rng.getrandbits(rng.randrange(1, 150))
        want = [tuple(x) for x in decode_index(e)]
        assert list(program_of_index(e).instructions) == want


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2 ** 120), st.text(alphabet="01", max_size=6),
       st.sets(st.sampled_from(all_strings(4))), st.integers(1, 400), st.integers(0, 8))
def test_run_matches_reference_interpreter(e, inp, members, time, space):
    oracle = FiniteSetLanguage(members)
    got = run(program_of_index(e), inp, oracle, Budgets(time, space)).verdict
    assert VERDICT[got] == simple_run(decode_index(e), inp, oracle, time, space)


@pytest.mark.parametrize("name, inp, members, want", [
    ("first-bit", "10", (), ACCEPT),
    ("first-bit", "", (), REJECT),
    ("even-length", "0101", (), ACCEPT),
    ("even-length", "010", (), REJECT),
    ("co-echo", "11", ("11",), REJECT),
    ("co-echo", "11", (), ACCEPT),
    ("query-shifted", "1", ("01",), ACCEPT),
    ("copy-accept", "0110", (), ACCEPT),
    ("scan-reject", "0110", (), REJECT),
])
def test_library(name, inp, members, want):
    assert run(LIBRARY[name], inp, FiniteSetLanguage(members), BIG).verdict == want


def test_asm_roundtrip():
    for prog in LIBRARY.values():
        assert Program.from_asm(prog.to_asm()) == prog
        assert program_of_index(index_of_program(prog)) == prog


class TestFalsifies:
    def test_accept_machine(self):
        e = library_index("accept")
        assert falsifies_reduction(e, ALL_OUT, PartialLanguage({"01": False}), "01", SQUARE, 1)
        assert not falsifies_reduction(e, ALL_OUT, PartialLanguage({"01": True}), "01", SQUARE, 1)

    def test_identity_never_falsified(self):
        x = PartialLanguage({s: (s.count("1") % 2 == 0) for s in all_strings(5)})
        e = library_index("echo")
        # with n^2 the budget g^k(|t|) stays at 1 for |t| <= 1, too small to echo
        for t in all_strings(4):
            if len(t) >= 2:
                assert not falsifies_reduction(e, x, x, t, SQUARE, 3)

    def test_undecided_source(self):
        with pytest.raises(OracleUndecided):
            falsifies_reduction(library_index("echo"), PartialLanguage(), PartialLanguage({"0101": True}),
                                "0101", SQUARE, 2)


def test_composition_charges_inner_cost():
    # outer echoes its input into a query answered by inner echo on the real oracle
    outer, inner = LIBRARY["echo"], LIBRARY["echo"]
    oracle = FiniteSetLanguage(["01"])
    res = run_composed(outer, inner, "01", oracle, BIG, BIG)
    direct = run(outer, "01", oracle, BIG)
    assert res.verdict == ACCEPT
    assert res.steps_used > direct.steps_used
