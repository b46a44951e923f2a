"""Promise-problem families: classifiers, enumerators and witness machines."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from itertools import product
from typing import Callable, Iterator, Optional

from .constructions import ACC, LIVE, REJ, _explore
from .encodings import (bitwise_dot, bracket_decode, bracket_strings, count_symbol, floor_log2,
                        is_bracket, padded_decode, padded_strings)
from .errors import MalformedCode, NoMachine, ScaleError, UnknownFamily
from .machines import EPS, LEND, REND, Dpda, Nfa
from .semantics import Verdict as RunVerdict
from .semantics import count_paths, dpda_run


class Verdict(enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    INVALID = "Invalid"


POS, NEG, INV = Verdict.POSITIVE, Verdict.NEGATIVE, Verdict.INVALID


@dataclass(frozen=True)
class PromiseFamily:
    name: str
    alphabet: tuple[str, ...]
    classify: Callable[[int, str], Verdict]
    instances: Callable[[int, Optional[int]], Iterator[str]]
    machine: Optional[Callable[[int], object]] = None
    contract: Optional[Callable[[int, str, object], bool]] = None
    contract_doc: str = ""
    # (C, k) with size <= C * n**k; size is ssc for pushdown machines, sc otherwise
    size_bound: Optional[tuple[int, int]] = None

    def enumerate(self, n: int, max_len: int | None = None) -> Iterator[str]:
        """Valid instances in length-then-lexicographic order."""
        return self.instances(n, max_len)

    def complement(self) -> "PromiseFamily":
        """The family with Positive and Negative swapped; no machine carried over."""
        swap = {POS: NEG, NEG: POS, INV: INV}
        return replace(self, name=f"co-{self.name}",
                       classify=lambda n, s: swap[self.classify(n, s)],
                       machine=None, contract=None, contract_doc="", size_bound=None)


def _check_index(n: int) -> None:
    if n < 1:
        raise ValueError(f"family index must be positive, got {n}")


def _ordered(strings, max_len: int | None) -> Iterator[str]:
    keep = (s for s in strings if max_len is None or len(s) <= max_len)
    return iter(sorted(set(keep), key=lambda s: (len(s), s)))


def _need_len(max_len: int | None, name: str) -> int:
    if max_len is None:
        raise ScaleError(f"family {name!r} is infinite; a maximum length is required")
    return max_len


def _split_once(s: str, sep: str = "#"):
    parts = s.split(sep)
    return parts if len(parts) == 2 else None


# -- example31 ---------------------------------------------------------------

def _ex31_parts(n: int, s: str):
    parts = _split_once(s)
    if parts is None or not all(is_bracket(p) for p in parts):
        return None
    r1, r2 = (bracket_decode(p) for p in parts)
    if max(r1 + r2) > n:
        return None
    return r1, r2


def example31_value(n: int, s: str) -> int:
    """Number of positions e whose entry in the left sequence occurs in the right one."""
    parts = _ex31_parts(n, s)
    if parts is None:
        raise MalformedCode(f"{s!r} is not an instance at n={n}")
    r1, r2 = parts
    return sum(v in set(r2) for v in r1)


def _ex31_classify(n: int, s: str) -> Verdict:
    _check_index(n)
    if _ex31_parts(n, s) is None:
        return INV
    return POS if example31_value(n, s) > 0 else NEG


def _ex31_instances(n: int, max_len: int | None) -> Iterator[str]:
    limit = _need_len(max_len, "example31")
    seqs = list(bracket_strings(n, limit))
    return _ordered((a + "#" + b for a in seqs for b in seqs if len(a) + len(b) + 1 <= limit), None)


def _ex31_machine(n: int) -> Nfa:
    # ("pick",) scans the left blocks; at each block start it may select the
    # block, count its ones into v, then scan the right blocks with a flag.
    def kind(label):
        return ACC if label == ("yes",) else REJ if label == ("no",) else LIVE

    def succ(label, sym):
        tag = label[0]
        if tag == "init":
            return [("pick",)] if sym == LEND else []
        if tag == "pick":
            if sym == "1":
                return [("count", 1), ("skip",)]
            return [("no",)] if sym in ("#", REND) else []
        if tag == "skip":
            return [("skip",)] if sym == "1" else [("pick",)] if sym == "0" else []
        if tag == "count":
            v = label[1]
            if sym == "1":
                return [("count", v + 1)] if v < n else []
            return [("rest", v)] if sym == "0" else []
        if tag == "rest":
            return [("right", label[1], 0, False)] if sym == "#" else [label] if sym in "01" else []
        if tag == "right":
            _, v, c, found = label
            if sym == "1":
                return [("right", v, c + 1, found)] if c < n else []
            if sym == "0":
                return [("right", v, 0, found or c == v)]
            if sym == REND:
                return [("yes",) if found else ("no",)]
        return []

    return _explore(("0", "1", "#"), ("init",), kind, succ, f"example31_{n}")


# -- Lsp -----------------------------------------------------------------------

def _sp_parts(s: str):
    parts = _split_once(s)
    if parts is None or set(parts[0] + parts[1]) - {"0", "1"}:
        return None
    return parts


def _sp_classify(n: int, s: str) -> Verdict:
    _check_index(n)
    parts = _sp_parts(s)
    if parts is None:
        return INV
    d = count_symbol(parts[0], "0") - count_symbol(parts[1], "0")
    return POS if d == 1 else NEG if d == 0 else INV


def _sp_instances(n: int, max_len: int | None) -> Iterator[str]:
    limit = _need_len(max_len, "Lsp")
    words = [""] + ["".join(w) for k in range(1, limit) for w in product("01", repeat=k)]
    return _ordered((x + "#" + y for x in words for y in words
                     if len(x) + len(y) < limit and _sp_classify(n, x + "#" + y) != INV), None)


def _sp_machine(n: int) -> Nfa:
    # Each 0 left of '#' spawns one accepting path, each 0 right of it one
    # rejecting path; the main lane ends in one accept and one reject.
    delta = {
        (0, LEND): [1],
        (1, "0"): [1, 3], (1, "1"): [1], (1, "#"): [2],
        (2, "0"): [2, 4], (2, "1"): [2], (2, REND): [5, 6],
    }
    return Nfa(("0", "1", "#"), 7, 0, {3, 5}, {4, 6}, delta, name=f"Lsp_{n}")


def sp_gap(s: str) -> int:
    x, y = s.split("#")
    return count_symbol(x, "0") - count_symbol(y, "0")


# -- LU and LN ---------------------------------------------------------------

def _padded_pair(s: str, m: int, k: int, top: int):
    parts = _split_once(s)
    if parts is None:
        return None
    try:
        u, v = (padded_decode(p, m) for p in parts)
    except MalformedCode:
        return None
    if len(u) != k or len(v) != k or max(u + v) > top:
        return None
    return u, v


def _lu_classify(n: int, s: str) -> Verdict:
    _check_index(n)
    pair = _padded_pair(s, n, n, n)
    if pair is None:
        return INV
    diff = sum(a != b for a, b in zip(*pair))
    return POS if diff == 1 else NEG if diff == 0 else INV


def _lu_instances(n: int, max_len: int | None) -> Iterator[str]:
    blocks = list(padded_strings(n, n, n))
    return _ordered((u + "#" + v for u in blocks for v in blocks
                     if _lu_classify(n, u + "#" + v) != INV), max_len)


def _lu_machine(n: int) -> Nfa:
    """Guess a position e, compare the e-th entries of u and v."""
    width = n + 1  # block plus separator
    ulen = n * width - 1

    def kind(label):
        return ACC if label == ("yes",) else REJ if label == ("no",) else LIVE

    def succ(label, sym):
        tag = label[0]
        if tag == "init":
            return [("u", e, 0, 0) for e in range(n)] if sym == LEND else []
        if sym not in ("0", "1", "#", REND):
            return []
        if tag == "u":
            _, e, p, c = label
            if sym == "#":
                return [("v", e, 0, c, False)] if p == ulen else []
            if sym == REND or p >= ulen:
                return []
            if p // width == e and p % width < n:
                c += sym == "1"
            return [("u", e, p + 1, c)]
        if tag == "v":
            _, e, p, c, diff = label
            if sym == REND:
                return [("yes",) if diff else ("no",)] if p == ulen else []
            if sym == "#" or p >= ulen:
                return []
            off = p % width
            if p // width == e and off < n:
                diff = diff or (sym == "1") != (off < c)
            return [("v", e, p + 1, c, diff)]
        return []

    return _explore(("0", "1", "#"), ("init",), kind, succ, f"LU_{n}")


def _ln_classify(n: int, s: str) -> Verdict:
    _check_index(n)
    pair = _padded_pair(s, n * n, n, n * n)
    if pair is None:
        return INV
    return POS if set(pair[0]) != set(pair[1]) else NEG


def _ln_instances(n: int, max_len: int | None) -> Iterator[str]:
    blocks = list(padded_strings(n * n, n * n, n))
    return _ordered((u + "#" + v for u in blocks for v in blocks), max_len)


def _ln_machine(n: int) -> Nfa:
    """Guess a value i and a side; accept iff i occurs on that side only."""
    m = n * n

    def kind(label):
        return ACC if label == ("yes",) else REJ if label == ("no",) else LIVE

    def step(off, match, sym, i):
        """Advance within a width-m block; returns (offset, still matching)."""
        return off + 1, match and (sym == "1") == (off < i)

    def succ(label, sym):
        tag = label[0]
        if tag == "init":
            return [("u", i, d, 0, True, False) for i in range(m + 1) for d in (0, 1)] \
                if sym == LEND else []
        _, i, d, off, match, fu = label[:6]
        if tag == "u":
            if sym == "#":
                return [("v", i, d, 0, True, fu or match, False)] if off == m else []
            if sym not in ("0", "1"):
                return []
            if off == m:  # separator
                return [("u", i, d, 0, True, fu or match)] if sym == "0" else []
            return [("u", i, d, *step(off, match, sym, i), fu)]
        if tag == "v":
            fv = label[6]
            if sym == REND:
                if off != m:
                    return []
                fv = fv or match
                hit = (fu and not fv) if d == 0 else (fv and not fu)
                return [("yes",) if hit else ("no",)]
            if sym not in ("0", "1"):
                return []
            if off == m:
                return [("v", i, d, 0, True, fu, fv or match)] if sym == "0" else []
            return [("v", i, d, *step(off, match, sym, i), fu, fv)]
        return []

    return _explore(("0", "1", "#"), ("init",), kind, succ, f"LN_{n}")


def ln_symmetric_difference(n: int, s: str) -> int:
    u, v = _padded_pair(s, n * n, n, n * n)
    return len(set(u) ^ set(v))


# -- parity families -----------------------------------------------------------

def _block_words(n: int, s: str):
    b = floor_log2(n)
    blocks = s.split("$")
    if len(blocks) != n or any(len(w) != b or set(w) - {"0", "1"} for w in blocks):
        return None
    return blocks


def parity_blocks(n: int, s: str, reverse_left: bool = False):
    parts = _split_once(s)
    if parts is None:
        return None
    u, v = parts
    if reverse_left:
        u = u[::-1]
    ub, vb = _block_words(n, u), _block_words(n, v)
    if ub is None or vb is None:
        return None
    return ub, vb


def odd_block_count(n: int, s: str, reverse_left: bool = False) -> int:
    """Number of block pairs whose bitwise inner product is odd."""
    ub, vb = parity_blocks(n, s, reverse_left)
    return sum(bitwise_dot(a, b) % 2 for a, b in zip(ub, vb))


def _parity_classifier(reverse_left: bool):
    def classify(n: int, s: str) -> Verdict:
        _check_index(n)
        blocks = parity_blocks(n, s, reverse_left)
        if blocks is None:
            return INV
        total = sum(bitwise_dot(a, b) for a, b in zip(*blocks))
        return POS if total % 2 else NEG
    return classify


def _parity_instances(reverse_left: bool):
    def instances(n: int, max_len: int | None) -> Iterator[str]:
        _check_index(n)
        b = floor_log2(n)
        words = ["$".join(ws) for ws in product(["".join(w) for w in product("01", repeat=b)],
                                                  repeat=n)]
        return _ordered(((u[::-1] if reverse_left else u) + "#" + v
                         for u in words for v in words), max_len)
    return instances


def _parity_machine(n: int) -> Nfa:
    """Guess a block index i; remember u_i, then fold v_i into a parity bit."""
    b = floor_log2(n)

    def kind(label):
        return ACC if label == ("yes",) else REJ if label == ("no",) else LIVE

    def succ(label, sym):
        tag = label[0]
        if tag == "init":
            return [("u", i, 0, "") for i in range(n)] if sym == LEND else []
        if tag == "u":
            _, i, k, mem = label
            if sym in ("0", "1"):
                if k == i:
                    return [("u", i, k, mem + sym)] if len(mem) < b else []
                return [label]
            if sym == "$":
                return [("u", i, k + 1, mem)] if k + 1 < n else []
            if sym == "#":
                return [("v", i, 0, mem, 0, 0)] if k == n - 1 else []
            return []
        if tag == "v":
            _, i, k, mem, pos, par = label
            if sym in ("0", "1"):
                if k != i:
                    return [label]
                if pos >= len(mem):
                    return []
                return [("v", i, k, mem, pos + 1, par ^ (sym == "1" and mem[pos] == "1"))]
            if sym == "$":
                return [("v", i, k + 1, mem, 0, par)] if k + 1 < n else []
            if sym == REND:
                return [("yes",) if par else ("no",)]
        return []

    return _explore(("0", "1", "$", "#"), ("init",), kind, succ, f"Lparity_{n}")


def dot_dpda(n: int) -> Dpda:
    """Pushes the reversed left half, then pops one symbol per symbol of v.

    A marker sits between the bottom and the pushed symbols so every run makes
    exactly one turn, including n = 1 where the blocks are empty.
    """
    init, push, (even, odd), yes, no = 0, 1, (2, 3), 4, 5
    delta = {(init, LEND, "Z"): (push, "SZ")}
    for top in "S01$":
        for sym in "01$":
            delta[(push, sym, top)] = (push, sym + top)
        delta[(push, "#", top)] = (even, top)
    for par, state in ((0, even), (1, odd)):
        for sym in "01":
            for top in "01":
                flip = sym == "1" and top == "1"
                delta[(state, sym, top)] = ((odd if par ^ flip else even), EPS)
        delta[(state, "$", "$")] = (state, EPS)
        delta[(state, REND, "S")] = (yes if par else no, EPS)
    return Dpda(("0", "1", "$", "#"), ("Z", "S", "0", "1", "$"), "Z", 2, 6, init,
                {yes}, {no}, delta, name=f"Ldot_{n}")



# -- LblockU -----------------------------------------------------------------

def _blocku_classify(n: int, s: str) -> Verdict:
    _check_index(n)
    parts = _split_once(s)
    if parts is None or any(len(p) != n * n or set(p) - {"0", "1"} for p in parts):
        return INV
    u, v = parts
    diff = sum(u[i:i + n] != v[i:i + n] for i in range(0, n * n, n))
    return POS if diff == 1 else NEG


def _blocku_instances(n: int, max_len: int | None) -> Iterator[str]:
    _check_index(n)
    if n * n > 8:
        raise ScaleError(f"LblockU at n={n} has 4^{n * n} instances")
    words = ["".join(w) for w in product("01", repeat=n * n)]
    return _ordered((u + "#" + v for u in words for v in words), max_len)


# -- contracts -----------------------------------------------------------------

def _acc(m, s):
    return count_paths(m, s).accepting


_CATALOG = {
    "example31": PromiseFamily(
        "example31", ("0", "1", "#"), _ex31_classify, _ex31_instances, _ex31_machine,
        lambda n, s, m: _acc(m, s) == example31_value(n, s),
        "accepting paths = number of left entries found in the right set", (40, 2)),
    "Lsp": PromiseFamily(
        "Lsp", ("0", "1", "#"), _sp_classify, _sp_instances, _sp_machine,
        lambda n, s, m: count_paths(m, s).gap == sp_gap(s),
        "gap = zeros left of '#' minus zeros right of it", (7, 0)),
    "LU": PromiseFamily(
        "LU", ("0", "1", "#"), _lu_classify, _lu_instances, _lu_machine,
        lambda n, s, m: _acc(m, s) == (_lu_classify(n, s) is POS),
        "accepting paths = 1 on Positive, 0 on Negative", (12, 4)),
    "LN": PromiseFamily(
        "LN", ("0", "1", "#"), _ln_classify, _ln_instances, _ln_machine,
        lambda n, s, m: _acc(m, s) == ln_symmetric_difference(n, s),
        "accepting paths = size of the symmetric difference of the entry sets", (75, 4)),
    "Lparity": PromiseFamily(
        "Lparity", ("0", "1", "$", "#"), _parity_classifier(False), _parity_instances(False),
        _parity_machine,
        lambda n, s, m: _acc(m, s) == odd_block_count(n, s),
        "accepting paths = number of blocks with odd inner product", (12, 3)),
    "Ldot": PromiseFamily(
        "Ldot", ("0", "1", "$", "#"), _parity_classifier(True), _parity_instances(True), dot_dpda,
        lambda n, s, m: (dpda_run(m, s).verdict is RunVerdict.ACCEPT)
        == (_parity_classifier(True)(n, s) is POS),
        "pushdown verdict Accept on Positive, Reject on Negative", (186, 0)),
    "LblockU": PromiseFamily(
        "LblockU", ("0", "1", "#"), _blocku_classify, _blocku_instances),
}


def family(name: str) -> PromiseFamily:
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownFamily(f"unknown family {name!r}; known: {sorted(_CATALOG)}") from None


def family_names() -> list[str]:
    return list(_CATALOG)


def build_machine(name: str, n: int):
    fam = family(name)
    if fam.machine is None:
        raise NoMachine(f"family {name!r} ships a classifier only")
    _check_index(n)
    return fam.machine(n)
