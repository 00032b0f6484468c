import pytest
from hypothesis import given, strategies as st

from genred.freegroup import (
    PartialPoint,
    act_partial,
    count_words,
    enum_words,
    incompatible_up_to,
    index,
    inverse,
    modulus,
    multiply,
    parse_word,
    reduce_word,
    render_word,
    translated_bits,
    word_at,
)
from genred.strings import Prefix

from oracles import brute_modulus, reduce_naive, words_naive

letters = st.text(alphabet="aAbB", max_size=10)
reduced = letters.map(reduce_word)
WORDS = words_naive(5)


def test_multiply_examples():
    assert multiply("a", "A") == ""
    assert multiply("a", "b") == "ab"
    assert multiply("ab", "Ba") == "aa"


@pytest.mark.parametrize("l", range(9))
def test_counting(l):
    words = enum_words(l)
    assert len(words) == count_words(l) == 2 * 3 ** l - 1
    assert len(words) <= 4 ** (l + 1)


def test_enumeration_matches_filtered_product():
    assert enum_words(5) == WORDS
    assert enum_words(1) == ["", "a", "A", "b", "B"]


def test_index_word_at_inverse():
    for i, w in enumerate(WORDS):
        assert index(w) == i
        assert word_at(i) == w


@given(letters)
def test_reduce_matches_naive(w):
    assert reduce_word(w) == reduce_naive(w)


@given(reduced, reduced, reduced)
def test_group_laws(u, v, w):
    assert multiply(multiply(u, v), w) == multiply(u, multiply(v, w))
    assert multiply(u, inverse(u)) == ""
    assert multiply("", u) == u


def test_word_rendering():
    assert render_word("") == "-"
    assert parse_word("-") == ""
    with pytest.raises(ValueError):
        parse_word("aA")


class TestAction:
    def test_identity(self):
        pt = act_partial("", "011")
        assert pt == PartialPoint({"": "0", "a": "1", "A": "1"})

    def test_alpha(self):
        pt = act_partial("a", "01101")
        assert pt == PartialPoint({"": "1", "a": "0", "aa": "1", "ab": "0", "aB": "1"})
        assert pt.determined_prefix_length() == 2

    def test_nothing_determined(self):
        assert act_partial("a", "0").determined_prefix_length() == 0

    @given(reduced, st.text(alphabet="01", min_size=1, max_size=40))
    def test_translated_bits_agree_with_action(self, gamma, r):
        pt = act_partial(gamma, r)
        m = pt.determined_prefix_length()
        assert translated_bits(gamma, r, m) == pt.prefix()


class TestModulus:
    @pytest.mark.parametrize("gamma, m, want", [("", 4, 4), ("a", 1, 3), ("a", 2, 3)])
    def test_examples(self, gamma, m, want):
        assert modulus(gamma, m) == want

    def test_closed_form_matches_brute_force(self):
        many = words_naive(7)
        for gamma in words_naive(2):
            for m in range(1, len(WORDS) + 1):
                assert modulus(gamma, m) == brute_modulus(gamma, m, many), (gamma, m)

    @given(reduced, st.integers(1, 200))
    def test_modulus_is_sufficient(self, gamma, m):
        r = "0" * modulus(gamma, m)
        assert translated_bits(gamma, r, m) is not None
        assert translated_bits(gamma, r[:-1], m) is None

    def test_lazy_prefix(self):
        r = Prefix("1", 10 ** 12, "0")
        assert translated_bits("a", r, 3) == translated_bits("a", "1" + "0" * 20, 3)


class TestIncompatible:
    def test_k0_is_inequality(self):
        assert incompatible_up_to("01", "10", 0)
        assert not incompatible_up_to("01", "01", 0)

    def test_equal_never_incompatible(self):
        assert not incompatible_up_to("01101", "01101", 2)

    def test_derived_examples(self):
        assert incompatible_up_to("01101", "10010", 1) is False
        assert incompatible_up_to("00000", "10000", 1) is True

    def test_no_length_one_pair_at_k1(self):
        assert not any(incompatible_up_to(r, s, 1) for r in "01" for s in "01")
