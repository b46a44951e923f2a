"""Integer and sequence codecs plus small string statistics.

Binary is most-significant-bit first without leading zeros, and the code of
zero is the empty string.  Decoders are strict: anything outside the image of
the matching encoder raises :class:`MalformedCode`.
"""

from __future__ import annotations

import re
from collections import Counter
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import LengthError, MalformedCode, RangeError

_BRACKET_RE = re.compile(r"(?:1+0)+")


def to_binary(k: int) -> str:
    if k < 0:
        raise RangeError(f"binary code needs a natural number, got {k}")
    return format(k, "b") if k else ""


def from_binary(s: str) -> int:
    if s == "":
        return 0
    if s[0] != "1" or set(s) - {"0", "1"}:
        raise MalformedCode(f"not a binary code: {s!r}")
    return int(s, 2)


def encode_trans(v: int) -> str:
    """Signed code: '' for 0, '1'+bin(k) for k > 0, '0'+bin(k) for -k."""
    if v == 0:
        return ""
    return ("1" if v > 0 else "0") + to_binary(abs(v))


def decode_trans(s: str) -> int:
    if s == "":
        return 0
    sign, body = s[0], s[1:]
    if sign not in "01" or body == "":
        raise MalformedCode(f"not a signed code: {s!r}")
    k = from_binary(body)
    return k if sign == "1" else -k


def bracket_encode(entries: Sequence[int]) -> str:
    if not entries:
        raise RangeError("bracket sequence needs at least one entry")
    for i in entries:
        if i < 1:
            raise RangeError(f"bracket entries must be positive, got {i}")
    return "".join("1" * i + "0" for i in entries)


def bracket_decode(s: str) -> list[int]:
    if not _BRACKET_RE.fullmatch(s):
        raise MalformedCode(f"not a bracket sequence: {s!r}")
    return [len(block) for block in s.split("0")[:-1]]


def is_bracket(s: str) -> bool:
    return _BRACKET_RE.fullmatch(s) is not None


def padded_encode(entries: Sequence[int], m: int, n: int | None = None) -> str:
    """Blocks 1^i 0^(m-i), one per entry, joined by a single '0'."""
    n = m if n is None else n
    if m < 1 or n < 0 or n > m:
        raise RangeError(f"need 0 <= n <= m and m >= 1, got n={n}, m={m}")
    if not entries:
        raise RangeError("padded sequence needs at least one entry")
    for i in entries:
        if not 0 <= i <= n:
            raise RangeError(f"entry {i} outside [0, {n}]")
    return "0".join("1" * i + "0" * (m - i) for i in entries)


def padded_decode(s: str, m: int) -> list[int]:
    if m < 1:
        raise RangeError(f"block width must be positive, got {m}")
    if (len(s) + 1) % (m + 1) or set(s) - {"0", "1"}:
        raise MalformedCode(f"not a width-{m} padded sequence: {s!r}")
    out = []
    for start in range(0, len(s), m + 1):
        block = s[start:start + m]
        ones = len(block) - len(block.lstrip("1"))
        if block[ones:].strip("0"):
            raise MalformedCode(f"bad block {block!r} in {s!r}")
        sep = s[start + m:start + m + 1]
        if sep not in ("", "0"):
            raise MalformedCode(f"bad separator in {s!r}")
        out.append(ones)
    return out


def entry_set(entries: Iterable[int]) -> frozenset[int]:
    return frozenset(entries)


def entry_multiset(entries: Iterable[int]) -> Counter:
    return Counter(entries)


def entry(entries: Sequence[int], e: int) -> int:
    """The e-th entry, counting from 1."""
    if not 1 <= e <= len(entries):
        raise RangeError(f"entry index {e} outside [1, {len(entries)}]")
    return entries[e - 1]


def bracket_strings(n: int, max_len: int) -> Iterator[str]:
    """All bracket sequences with entries in [1, n] of length <= max_len."""
    def grow(prefix: str) -> Iterator[str]:
        for i in range(1, n + 1):
            s = prefix + "1" * i + "0"
            if len(s) > max_len:
                return
            yield s
            yield from grow(s)
    yield from grow("")


def padded_strings(n: int, m: int, k: int) -> Iterator[str]:
    """Every padded sequence of k entries in [0, n] at width m; (n+1)^k of them."""
    for entries in product(range(n + 1), repeat=k):
        yield padded_encode(entries, m, n)


def count_symbol(w: str, sym: str) -> int:
    return w.count(sym)


def bitwise_dot(x: str, y: str) -> int:
    if len(x) != len(y):
        raise LengthError(f"length mismatch: {len(x)} vs {len(y)}")
    return sum(a == "1" and b == "1" for a, b in zip(x, y))


def floor_log2(n: int) -> int:
    if n < 1:
        raise RangeError(f"log of non-positive {n}")
    return n.bit_length() - 1
