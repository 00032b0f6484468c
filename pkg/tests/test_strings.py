import pytest
from hypothesis import given, strategies as st

from genred.growth import CUBE, EXPONENTIAL, SQUARE, SUCCESSOR, iterate, validate_growth
from genred.strings import (
    PartialLanguage,
    Prefix,
    code,
    decode_code,
    join2,
    join4,
    strings_up_to,
    unjoin,
)

bits = st.text(alphabet="01", max_size=12)


class TestJoins:
    def test_join2_definition(self):
        z = join2(PartialLanguage({"": True}), PartialLanguage({"0": True}))
        assert z.members() == ["0", "10"]

    def test_join2_of_empties(self):
        x = PartialLanguage.empty(2)
        z = join2(x, x)
        assert z.is_total_to(3)
        assert z.members() == []

    def test_join2_empty_string_only_when_both_decide(self):
        assert join2(PartialLanguage({"": True}), PartialLanguage({"": True})).get("") is False
        assert join2(PartialLanguage({"": True}), PartialLanguage()).get("") is None

    def test_join4_examples(self):
        e = PartialLanguage()
        eps = PartialLanguage({"": True})
        assert join4(eps, e, e, e).members() == ["00"]
        assert join4(e, e, e, PartialLanguage({"1": True})).members() == ["111"]
        assert join4(eps, eps, eps, eps).members() == ["00", "01", "10", "11"]

    @given(st.dictionaries(bits, st.booleans(), max_size=20), st.dictionaries(bits, st.booleans(), max_size=20))
    def test_unjoin_recovers_sides(self, a, b):
        x, y = PartialLanguage(a), PartialLanguage(b)
        z = join2(x, y)
        assert unjoin(0, z) == x
        assert unjoin(1, z) == y


class TestCode:
    @pytest.mark.parametrize("r, s", [("", "1"), ("1", "011"), ("10", "0000110")])
    def test_code_examples(self, r, s):
        assert code(r, SQUARE) == s
        assert decode_code(s, SQUARE) == r

    def test_decode_malformed(self):
        assert decode_code("0011", SQUARE) is None
        assert decode_code("000", SQUARE) is None

    @given(bits)
    def test_roundtrip(self, r):
        assert decode_code(code(r, SQUARE), SQUARE) == r

    def test_decode_is_partial_inverse(self):
        for s in strings_up_to(12):
            r = decode_code(s, SQUARE)
            if r is not None:
                assert code(r, SQUARE) == s


class TestGrowth:
    def test_iterate(self):
        assert iterate(SQUARE, 3, 2) == 256
        assert iterate(SQUARE, 0, 7) == 7

    def test_double_exponential(self):
        assert all(iterate(SQUARE, i, 2) == 2 ** (2 ** i) for i in range(6))

    def test_validate(self):
        assert validate_growth(SQUARE, 100).passed
        assert validate_growth(CUBE, 100).passed
        assert validate_growth(SUCCESSOR, 100).first_failure == 2
        assert validate_growth(EXPONENTIAL, 20).first_failure == 3


class TestPartialLanguage:
    def test_undecided_distinct_from_out(self):
        x = PartialLanguage({"0": False})
        assert x.get("0") is False
        assert x.get("1") is None

    @given(st.dictionaries(bits, st.booleans(), max_size=30))
    def test_text_roundtrip(self, d):
        x = PartialLanguage(d)
        assert PartialLanguage.from_text(x.to_text()) == x

    def test_text_is_length_lex(self):
        x = PartialLanguage({"10": True, "": False, "1": True})
        assert x.to_text() == "e out\n1 in\n10 in\n"

    def test_complement(self):
        x = PartialLanguage({"0": True, "1": False})
        assert x.complement().members() == ["1"]


class TestPrefix:
    def test_lazy_fill(self):
        p = Prefix("01", 10, "1")
        assert len(p) == 10
        assert p.take(5) == "01111"
        assert p.bit(9) == "1"
        assert p.startswith("011")

    def test_equality_and_hash(self):
        a = Prefix("01", 6, "0")
        b = Prefix("010000")
        assert a == b and hash(a) == hash(b)
        assert Prefix("01", 6, "1") != b

    def test_bad_bits(self):
        with pytest.raises(ValueError):
            Prefix("012")
