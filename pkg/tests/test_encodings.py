import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfa.encodings import (bitwise_dot, bracket_decode, bracket_encode, bracket_strings,
                           count_symbol, decode_trans, encode_trans, entry, entry_multiset,
                           entry_set, floor_log2, from_binary, is_bracket, padded_decode,
                           padded_encode, padded_strings, to_binary)
from cfa.errors import LengthError, MalformedCode, RangeError


@pytest.mark.parametrize("v, code", [(0, ""), (5, "1101"), (-3, "011"), (1, "11"), (-1, "01")])
def test_signed_codes(v, code):
    assert encode_trans(v) == code
    assert decode_trans(code) == v


@given(st.integers(-2**32, 2**32))
def test_signed_code_round_trip(v):
    assert decode_trans(encode_trans(v)) == v


@pytest.mark.parametrize("bad", ["1", "0", "2101", "x"])
def test_signed_code_rejects_malformed(bad):
    with pytest.raises(MalformedCode):
        decode_trans(bad)


def test_binary_is_canonical():
    assert to_binary(0) == ""
    assert to_binary(6) == "110"
    assert from_binary("110") == 6
    with pytest.raises(MalformedCode):
        from_binary("0110")
    with pytest.raises(RangeError):
        to_binary(-1)


def test_bracket_examples():
    assert bracket_encode([2, 1]) == "11010"
    assert bracket_encode([1]) == "10"
    assert bracket_decode("11010") == [2, 1]
    assert is_bracket("10") and not is_bracket("01") and not is_bracket("")


@given(st.lists(st.integers(1, 20), min_size=1, max_size=8))
def test_bracket_round_trip_and_length(entries):
    code = bracket_encode(entries)
    assert bracket_decode(code) == entries
    assert len(code) == sum(entries) + len(entries)


def test_bracket_rejects_zero_entry():
    with pytest.raises(RangeError):
        bracket_encode([0])
    with pytest.raises(MalformedCode):
        bracket_decode("1001")


def test_padded_examples():
    assert padded_encode([1, 2], 2) == "10011"
    assert padded_encode([0], 3) == "000"
    assert padded_decode("10011", 2) == [1, 2]


@given(st.integers(1, 6).flatmap(
    lambda m: st.tuples(st.just(m), st.lists(st.integers(0, m), min_size=1, max_size=6))))
def test_padded_round_trip(case):
    m, entries = case
    code = padded_encode(entries, m)
    assert padded_decode(code, m) == entries
    assert len(code) == len(entries) * (m + 1) - 1


@pytest.mark.parametrize("bad", ["1001", "01011", "10211", "1101"])
def test_padded_rejects_malformed(bad):
    with pytest.raises(MalformedCode):
        padded_decode(bad, 2)


def test_padded_range_checks():
    with pytest.raises(RangeError):
        padded_encode([3], 2)
    with pytest.raises(RangeError):
        padded_encode([1], 2, n=3)


def test_entry_helpers():
    assert entry_set([2, 1, 2]) == {1, 2}
    assert entry_multiset([2, 1, 2])[2] == 2
    assert entry([4, 5, 6], 2) == 5
    with pytest.raises(RangeError):
        entry([4], 2)


def test_enumerators_count():
    assert sum(1 for _ in padded_strings(2, 2, 2)) == 9
    assert sum(1 for _ in padded_strings(4, 4, 2)) == 25
    strings = list(bracket_strings(2, 5))
    assert all(is_bracket(s) and max(bracket_decode(s)) <= 2 and len(s) <= 5 for s in strings)
    assert len(strings) == len(set(strings))


def test_symbol_count_and_dot():
    assert count_symbol("0100", "0") == 3
    assert bitwise_dot("101", "110") == 1
    with pytest.raises(LengthError):
        bitwise_dot("1", "10")


@given(st.integers(0, 12).flatmap(lambda k: st.tuples(
    st.text("01", min_size=k, max_size=k), st.text("01", min_size=k, max_size=k))))
def test_dot_matches_positionwise_sum(pair):
    x, y = pair
    assert bitwise_dot(x, y) == sum(int(a) * int(b) for a, b in zip(x, y))


@pytest.mark.parametrize("n, b", [(1, 0), (2, 1), (3, 1), (4, 2), (7, 2), (8, 3)])
def test_floor_log2(n, b):
    assert floor_log2(n) == b
