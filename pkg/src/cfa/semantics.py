"""Exact execution: path counts, gaps, PFA probabilities, transduction, pushdown runs."""

from __future__ import annotations

import enum
from array import array
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

from . import kernels
from .errors import AlphabetError, CapExceeded, StackError
from .machines import EPS, LEND, REND, Dft, Dpda, Nfa, PathCounts, Pfa, check_word


def count_paths(m: Nfa, x: str) -> PathCounts:
    """Tally accepting, rejecting and improper paths of ``m`` on ``▷x◁``.

    A path is frozen the moment it enters a halting state.  Paths that run out
    of successors, or are still live after ``◁``, are improper.
    """
    offsets, targets, kind, index, _ = m.table
    try:
        word = array("i", [0, *(index[ch] for ch in x), index[REND]])
    except KeyError as e:
        raise AlphabetError(f"symbol {e.args[0]!r} not in alphabet {list(m.alphabet)}") from None
    if LEND in x or REND in x:
        raise AlphabetError("endmarkers may not appear inside the input")
    return PathCounts(*kernels.count_table(offsets, targets, kind, m.num_states, m.start, word))


def gap_value(m: Nfa, x: str) -> int:
    return count_paths(m, x).gap


class Path(NamedTuple):
    states: tuple[int, ...]
    outcome: str  # "accept", "reject" or "improper"


def enumerate_paths(m: Nfa, x: str, limit: int = 100_000) -> list[Path]:
    """Every computation path, listed explicitly.  Brute-force reference for count_paths."""
    check_word(m.alphabet, x)
    tape = LEND + x + REND
    out: list[Path] = []
    stack = [(m.start,)]
    while stack:
        states = stack.pop()
        q = states[-1]
        if q in m.accept or q in m.reject:
            out.append(Path(states, "accept" if q in m.accept else "reject"))
        else:
            pos = len(states) - 1
            succ = m.delta.get((q, tape[pos]), ()) if pos < len(tape) else ()
            if not succ:
                out.append(Path(states, "improper"))
            stack.extend(states + (p,) for p in reversed(succ))
        if len(out) > limit:
            raise CapExceeded(f"more than {limit} computation paths")
    return out


def tally(paths: list[Path]) -> PathCounts:
    acc = sum(p.outcome == "accept" for p in paths)
    rej = sum(p.outcome == "reject" for p in paths)
    return PathCounts(acc, rej, len(paths) - acc - rej)


def pfa_vector(p: Pfa, word: str, start: tuple[Fraction, ...] | None = None) -> list[Fraction]:
    """Row vector ``start · M_word`` using the sparse rows of each matrix."""
    v = list(p.initial if start is None else start)
    rows = p.sparse_rows
    for sym in word:
        mat = rows[sym]
        nxt = [Fraction(0)] * p.num_states
        for i, vi in enumerate(v):
            if vi:
                for j, a in mat[i]:
                    nxt[j] += vi * a
        v = nxt
    return v


def pfa_probabilities(p: Pfa, x: str) -> tuple[Fraction, Fraction, Fraction]:
    check_word(p.alphabet, x)
    v = pfa_vector(p, LEND + x + REND)
    p_acc = sum((v[q] for q in p.accept), Fraction(0))
    p_rej = sum((v[q] for q in p.reject), Fraction(0))
    return p_acc, p_rej, sum(v, Fraction(0)) - p_acc - p_rej


def transduce(t: Dft, x: str) -> str:
    check_word(t.alphabet, x)
    q = t.start
    out = []
    for sym in LEND + x + REND:
        q, w = t.delta[(q, sym)]
        out.append(w)
    return "".join(out)


class Verdict(enum.Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"
    IMPROPER = "Improper"
    CAP_EXCEEDED = "CapExceeded"


@dataclass(frozen=True)
class DpdaOutcome:
    verdict: Verdict
    steps: int
    turns: int | None
    max_height: int


def dpda_run(d: Dpda, x: str, step_cap: int = 10**6,
             observer: Callable[[int, int, tuple[str, ...]], None] | None = None) -> DpdaOutcome:
    """Simulate ``d`` on ``▷x◁``.

    Empty moves take priority (determinism guarantees no conflict) and may
    continue after ``◁`` has been read.  A turn is counted at each height
    decrease whose most recent nonzero height change was an increase.
    """
    if step_cap <= 0:
        raise ValueError("step_cap must be positive")
    check_word(d.alphabet, x)
    tape = LEND + x + REND
    q, pos = d.start, 0
    stack = [d.bottom]
    steps = turns = 0
    rising = False
    max_height = 1
    while True:
        if observer is not None:
            observer(steps, q, tuple(stack))
        if q in d.accept:
            return DpdaOutcome(Verdict.ACCEPT, steps, turns, max_height)
        if q in d.reject:
            return DpdaOutcome(Verdict.REJECT, steps, turns, max_height)
        if steps >= step_cap:
            return DpdaOutcome(Verdict.CAP_EXCEEDED, steps, None, max_height)
        if not stack:
            raise StackError("stack emptied below the bottom marker")
        top = stack[-1]
        move = d.delta.get((q, EPS, top))
        if move is None and pos < len(tape):
            move = d.delta.get((q, tape[pos], top))
            if move is not None:
                pos += 1
        if move is None:
            return DpdaOutcome(Verdict.IMPROPER, steps, turns, max_height)
        q, push = move
        if top == d.bottom and not push.endswith(d.bottom):
            raise StackError(f"move from state {q} pops the bottom marker")
        before = len(stack)
        stack.pop()
        stack.extend(reversed(push))
        change = len(stack) - before
        if change > 0:
            rising = True
        elif change < 0:
            if rising:
                turns += 1
            rising = False
        max_height = max(max_height, len(stack))
        steps += 1
