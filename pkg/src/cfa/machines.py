"""Machine data model: finite automata, transducers, PFAs and pushdown machines.

Every machine validates itself on construction, so any instance that exists
satisfies its type invariants.  States are dense integers ``0..num_states-1``.
The endmarkers and the empty move use non-ASCII internal symbols so they can
never collide with an input symbol (inputs are single visible ASCII chars).
"""

from __future__ import annotations

import re
from array import array
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Union

from .errors import AlphabetError, InvariantViolation, ParseError

LEND = "▷"  # left endmarker
REND = "◁"  # right endmarker
EPS = ""         # empty move / empty push string

_TOKENS = {"LEND": LEND, "REND": REND}


class PathCounts(NamedTuple):
    accepting: int
    rejecting: int
    improper: int

    @property
    def gap(self) -> int:
        return self.accepting - self.rejecting

    @property
    def total(self) -> int:
        return self.accepting + self.rejecting + self.improper


def _check_symbol(sym: str) -> None:
    if len(sym) != 1 or not ("!" <= sym <= "~"):
        raise InvariantViolation(f"symbol {sym!r} is not a single visible ASCII character")


def _check_alphabet(alphabet: tuple[str, ...]) -> None:
    for s in alphabet:
        _check_symbol(s)
    if len(set(alphabet)) != len(alphabet):
        raise InvariantViolation(f"repeated symbol in alphabet {alphabet!r}")


def _check_states(states: Iterable[int], num_states: int, what: str) -> None:
    for q in states:
        if not (isinstance(q, int) and 0 <= q < num_states):
            raise InvariantViolation(f"{what}: state {q!r} outside 0..{num_states - 1}")


def check_word(alphabet: Iterable[str], x: str) -> None:
    allowed = set(alphabet)
    for ch in x:
        if ch not in allowed:
            raise AlphabetError(f"symbol {ch!r} not in alphabet {sorted(allowed)}")


@dataclass(frozen=True)
class Nfa:
    alphabet: tuple[str, ...]
    num_states: int
    start: int
    accept: frozenset[int]
    reject: frozenset[int]
    delta: Mapping[tuple[int, str], tuple[int, ...]]
    name: str = field(default="M", compare=False)

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "alphabet", tuple(self.alphabet))
        set_(self, "accept", frozenset(self.accept))
        set_(self, "reject", frozenset(self.reject))
        cleaned = {}
        for key, succ in self.delta.items():
            succ = tuple(sorted(set(succ)))
            if succ:
                cleaned[key] = succ
        set_(self, "delta", MappingProxyType(dict(sorted(cleaned.items(), key=self._key_order))))
        self._validate()

    def _key_order(self, item):
        (q, sym), _ = item
        order = {s: i for i, s in enumerate(self.tape_symbols)}
        return q, order.get(sym, len(order)), sym

    def symbol_index(self, sym: str) -> int:
        if sym == LEND:
            return 0
        if sym == REND:
            return len(self.alphabet) + 1
        return self.alphabet.index(sym) + 1

    @property
    def tape_symbols(self) -> tuple[str, ...]:
        return (LEND, *self.alphabet, REND)

    @property
    def halting(self) -> frozenset[int]:
        return self.accept | self.reject

    def successors(self, q: int, sym: str) -> tuple[int, ...]:
        return self.delta.get((q, sym), ())

    def _validate(self) -> None:
        _check_alphabet(self.alphabet)
        if self.num_states < 1:
            raise InvariantViolation("a machine needs at least one state")
        _check_states([self.start], self.num_states, "start")
        _check_states(self.accept, self.num_states, "accept")
        _check_states(self.reject, self.num_states, "reject")
        both = self.accept & self.reject
        if both:
            raise InvariantViolation(f"states {sorted(both)} are both accepting and rejecting")
        symbols = set(self.tape_symbols)
        halting = self.halting
        for (q, sym), succ in self.delta.items():
            _check_states([q], self.num_states, "transition source")
            if q in halting:
                raise InvariantViolation(f"halting state {q} has an outgoing transition")
            if sym not in symbols:
                raise InvariantViolation(f"transition on unknown symbol {sym!r}")
            _check_states(succ, self.num_states, "transition target")

    @cached_property
    def table(self):
        """Flat successor table used by the counting kernels.

        Row ``sym * num_states + q`` spans ``targets[offsets[row]:offsets[row+1]]``.
        ``kind`` is 0 for live states, 1 for accepting, 2 for rejecting.
        """
        n = self.num_states
        nsym = len(self.alphabet) + 2
        offsets = array("i", [0])
        targets = array("i")
        for s, sym in enumerate(self.tape_symbols):
            for q in range(n):
                targets.extend(self.delta.get((q, sym), ()))
                offsets.append(len(targets))
        kind = array("b", [1 if q in self.accept else 2 if q in self.reject else 0
                           for q in range(n)])
        index = {sym: i for i, sym in enumerate(self.tape_symbols)}
        return offsets, targets, kind, index, nsym


@dataclass(frozen=True)
class Dfa(Nfa):
    """An Nfa whose every transition has exactly one successor."""

    def _validate(self) -> None:
        super()._validate()
        for key, succ in self.delta.items():
            if len(succ) != 1:
                raise InvariantViolation(f"deterministic transition {key} has {len(succ)} successors")


@dataclass(frozen=True)
class Dft:
    """Deterministic transducer; every (state, tape symbol) pair has a move."""

    alphabet: tuple[str, ...]
    output_alphabet: tuple[str, ...]
    num_states: int
    start: int
    delta: Mapping[tuple[int, str], tuple[int, str]]
    name: str = field(default="T", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "output_alphabet", tuple(self.output_alphabet))
        object.__setattr__(self, "delta", MappingProxyType(dict(self.delta)))
        self._validate()

    def _validate(self) -> None:
        _check_alphabet(self.alphabet)
        _check_alphabet(self.output_alphabet)
        if self.num_states < 1:
            raise InvariantViolation("a transducer needs at least one state")
        _check_states([self.start], self.num_states, "start")
        outs = set(self.output_alphabet)
        for q in range(self.num_states):
            for sym in self.tape_symbols:
                if (q, sym) not in self.delta:
                    raise InvariantViolation(f"transducer has no move for state {q} on {sym!r}")
        for (q, sym), (p, out) in self.delta.items():
            _check_states([q, p], self.num_states, "transducer move")
            if sym not in self.tape_symbols:
                raise InvariantViolation(f"move on unknown symbol {sym!r}")
            if set(out) - outs:
                raise InvariantViolation(f"output {out!r} leaves the output alphabet")

    @property
    def tape_symbols(self) -> tuple[str, ...]:
        return (LEND, *self.alphabet, REND)

    @property
    def max_emission(self) -> int:
        return max(len(out) for _, out in self.delta.values())


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class Pfa:
    alphabet: tuple[str, ...]
    num_states: int
    initial: tuple[Fraction, ...]
    matrices: Mapping[str, tuple[tuple[Fraction, ...], ...]]
    accept: frozenset[int]
    reject: frozenset[int]
    name: str = field(default="P", compare=False)

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "alphabet", tuple(self.alphabet))
        set_(self, "accept", frozenset(self.accept))
        set_(self, "reject", frozenset(self.reject))
        set_(self, "initial", tuple(_frac(v) for v in self.initial))
        set_(self, "matrices", MappingProxyType({
            sym: tuple(tuple(_frac(v) for v in row) for row in mat)
            for sym, mat in self.matrices.items()}))
        self._validate()

    @property
    def tape_symbols(self) -> tuple[str, ...]:
        return (LEND, *self.alphabet, REND)

    def _validate(self) -> None:
        _check_alphabet(self.alphabet)
        n = self.num_states
        if n < 1:
            raise InvariantViolation("a PFA needs at least one state")
        _check_states(self.accept, n, "accept")
        _check_states(self.reject, n, "reject")
        if self.accept & self.reject:
            raise InvariantViolation("accepting and rejecting states overlap")
        if len(self.initial) != n or any(v < 0 for v in self.initial) or sum(self.initial) != 1:
            raise InvariantViolation("initial vector must be a distribution over the states")
        if set(self.matrices) != set(self.tape_symbols):
            raise InvariantViolation("need exactly one matrix per tape symbol")
        for sym, mat in self.matrices.items():
            if len(mat) != n or any(len(row) != n for row in mat):
                raise InvariantViolation(f"matrix for {sym!r} is not {n}x{n}")
            for i, row in enumerate(mat):
                if any(v < 0 for v in row) or sum(row) != 1:
                    raise InvariantViolation(f"row {i} of matrix {sym!r} is not stochastic")

    @cached_property
    def sparse_rows(self) -> dict[str, tuple[tuple[tuple[int, Fraction], ...], ...]]:
        return {sym: tuple(tuple((j, v) for j, v in enumerate(row) if v) for row in mat)
                for sym, mat in self.matrices.items()}


@dataclass(frozen=True)
class Dpda:
    """Deterministic pushdown automaton.

    ``delta[(q, sym, top)] = (p, push)`` pops ``top`` and pushes ``push`` with
    ``push[0]`` ending on top.  ``sym == EPS`` marks an empty move.
    """

    alphabet: tuple[str, ...]
    stack_alphabet: tuple[str, ...]
    bottom: str
    push_size: int
    num_states: int
    start: int
    accept: frozenset[int]
    reject: frozenset[int]
    delta: Mapping[tuple[int, str, str], tuple[int, str]]
    name: str = field(default="D", compare=False)

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "alphabet", tuple(self.alphabet))
        set_(self, "stack_alphabet", tuple(self.stack_alphabet))
        set_(self, "accept", frozenset(self.accept))
        set_(self, "reject", frozenset(self.reject))
        set_(self, "delta", MappingProxyType(dict(self.delta)))
        self._validate()

    @property
    def tape_symbols(self) -> tuple[str, ...]:
        return (LEND, *self.alphabet, REND)

    @property
    def halting(self) -> frozenset[int]:
        return self.accept | self.reject

    def _validate(self) -> None:
        _check_alphabet(self.alphabet)
        _check_alphabet(self.stack_alphabet)
        n = self.num_states
        if n < 1:
            raise InvariantViolation("a pushdown machine needs at least one state")
        if self.bottom not in self.stack_alphabet:
            raise InvariantViolation("bottom marker must belong to the stack alphabet")
        if self.push_size < 1:
            raise InvariantViolation("push size must be at least 1")
        _check_states([self.start], n, "start")
        _check_states(self.accept, n, "accept")
        _check_states(self.reject, n, "reject")
        if self.accept & self.reject:
            raise InvariantViolation("accepting and rejecting states overlap")
        stack = set(self.stack_alphabet)
        tape = set(self.tape_symbols) | {EPS}
        for (q, sym, top), (p, push) in self.delta.items():
            _check_states([q, p], n, "pushdown move")
            if q in self.halting:
                raise InvariantViolation(f"halting state {q} has an outgoing move")
            if sym not in tape or top not in stack or set(push) - stack:
                raise InvariantViolation(f"move {(q, sym, top)} uses unknown symbols")
            if len(push) > self.push_size:
                raise InvariantViolation(f"move {(q, sym, top)} pushes more than {self.push_size}")
            body = push[:-1] if top == self.bottom else push
            if top == self.bottom and not push.endswith(self.bottom):
                raise InvariantViolation(f"move {(q, sym, top)} removes the bottom marker")
            if self.bottom in body:
                raise InvariantViolation(f"move {(q, sym, top)} pushes the bottom marker above the bottom")
            if sym != EPS and (q, EPS, top) in self.delta:
                raise InvariantViolation(f"moves {(q, sym, top)} and an empty move on {top!r} conflict")


Machine = Union[Nfa, Dft, Pfa, Dpda]


def validate(machine: Machine) -> None:
    """Re-run the invariant checks; raises InvariantViolation on failure."""
    machine._validate()


def state_complexity(machine: Machine) -> int:
    return machine.num_states


def stack_state_complexity(d: Dpda) -> int:
    g = len(d.stack_alphabet)
    return d.num_states * sum(g ** j for j in range(d.push_size + 1))


# ---------------------------------------------------------------------------
# interchange format

_KINDS = {"nfa", "dfa", "dft", "pfa", "dpda"}
_INT = re.compile(r"\d+")


class _Block:
    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line
        self.directives: dict[str, tuple[int, list[str]]] = {}
        self.rows: list[tuple[int, str, list[str]]] = []


def _split_blocks(text: str) -> list[_Block]:
    blocks: list[_Block] = []
    current: _Block | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        words = line.split()
        head, args = words[0], words[1:]
        if head == "machine":
            if current is not None:
                raise ParseError(lineno, "nested 'machine' block")
            if len(args) != 1:
                raise ParseError(lineno, "expected 'machine <name>'")
            current = _Block(args[0], lineno)
        elif head == "end":
            if current is None or args:
                raise ParseError(lineno, "stray 'end'")
            blocks.append(current)
            current = None
        elif current is None:
            raise ParseError(lineno, f"directive {head!r} outside a machine block")
        elif head in ("trans", "matrix", "init"):
            current.rows.append((lineno, head, args))
        elif head in ("kind", "alphabet", "states", "start", "accept", "reject",
                      "stack", "bottom", "pushsize", "output"):
            if head in current.directives:
                raise ParseError(lineno, f"repeated directive {head!r}")
            current.directives[head] = (lineno, args)
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")
    if current is not None:
        raise ParseError(current.line, f"machine {current.name!r} has no 'end'")
    return blocks


class _StateNames:
    """Numeric tokens are ids; other names take the lowest free ids in order of appearance."""

    def __init__(self, tokens: list[tuple[int, str]], count: int):
        self.ids: dict[str, int] = {}
        used = {int(t) for _, t in tokens if _INT.fullmatch(t)}
        for lineno, t in tokens:
            if _INT.fullmatch(t) and int(t) >= count:
                raise ParseError(lineno, f"state {t} outside 0..{count - 1}")
        free = (i for i in range(count) if i not in used)
        for lineno, t in tokens:
            if _INT.fullmatch(t) or t in self.ids:
                continue
            nxt = next(free, None)
            if nxt is None:
                raise ParseError(lineno, f"more state names than the declared {count} states")
            self.ids[t] = nxt

    def __call__(self, token: str) -> int:
        return int(token) if _INT.fullmatch(token) else self.ids[token]


def _symbol(lineno: int, token: str, allow_eps: bool = False) -> str:
    if token in _TOKENS:
        return _TOKENS[token]
    if allow_eps and token == "EPS":
        return EPS
    if len(token) != 1:
        raise ParseError(lineno, f"bad symbol token {token!r}")
    return token


def _string(token: str) -> str:
    return "" if token == "EPS" else token


def _ratio(lineno: int, token: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(lineno, f"bad rational {token!r}") from None


def _need(block: _Block, key: str) -> tuple[int, list[str]]:
    if key not in block.directives:
        raise ParseError(block.line, f"machine {block.name!r} lacks '{key}'")
    return block.directives[key]


def _build(block: _Block) -> Machine:
    lineno, kind_args = _need(block, "kind")
    if len(kind_args) != 1 or kind_args[0] not in _KINDS:
        raise ParseError(lineno, f"kind must be one of {sorted(_KINDS)}")
    kind = kind_args[0]
    alphabet = tuple(_need(block, "alphabet")[1])
    lineno, st = _need(block, "states")
    if len(st) != 1 or not _INT.fullmatch(st[0]):
        raise ParseError(lineno, "expected 'states <N>'")
    count = int(st[0])

    state_tokens: list[tuple[int, str]] = []
    for key in ("start", "accept", "reject"):
        if key in block.directives:
            ln, args = block.directives[key]
            state_tokens += [(ln, a) for a in args]
    for ln, head, args in block.rows:
        if head == "trans":
            if kind in ("nfa", "dfa"):
                picks = [args[0], *args[2:]]
            elif kind == "dft":
                picks = args[:1] + args[2:3]
            else:
                picks = args[:1] + args[3:4]
            state_tokens += [(ln, a) for a in picks]
        elif head == "init":
            state_tokens += [(ln, a.split(":", 1)[0]) for a in args]
        elif head == "matrix":
            state_tokens += [(ln, a) for a in args[1:3]]
    names = _StateNames(state_tokens, count)

    def states_of(key: str) -> frozenset[int]:
        return frozenset(names(a) for a in block.directives.get(key, (0, []))[1])

    start = 0
    if kind != "pfa":
        ln, args = _need(block, "start")
        if len(args) != 1:
            raise ParseError(ln, "expected 'start <q>'")
        start = names(args[0])

    if kind in ("nfa", "dfa"):
        delta: dict[tuple[int, str], set[int]] = {}
        for ln, head, args in block.rows:
            if head != "trans" or len(args) < 3:
                raise ParseError(ln, "expected 'trans <q> <sym> <q'>...'")
            key = (names(args[0]), _symbol(ln, args[1]))
            delta.setdefault(key, set()).update(names(a) for a in args[2:])
        cls = Dfa if kind == "dfa" else Nfa
        return cls(alphabet, count, start, states_of("accept"),
                   states_of("reject"), delta, name=block.name)
    if kind == "dft":
        out_alpha = tuple(block.directives.get("output", (0, ["0", "1"]))[1])
        moves = {}
        for ln, head, args in block.rows:
            if head != "trans" or len(args) != 4:
                raise ParseError(ln, "expected 'trans <q> <sym> <q'> <output|EPS>'")
            moves[(names(args[0]), _symbol(ln, args[1]))] = (names(args[2]), _string(args[3]))
        return Dft(alphabet, out_alpha, count, start, moves, name=block.name)
    if kind == "pfa":
        initial = [Fraction(0)] * count
        mats = {sym: [[Fraction(0)] * count for _ in range(count)]
                for sym in (LEND, *alphabet, REND)}
        for ln, head, args in block.rows:
            if head == "init":
                for a in args:
                    q, _, p = a.partition(":")
                    initial[names(q)] = _ratio(ln, p)
            elif head == "matrix" and len(args) == 4:
                sym = _symbol(ln, args[0])
                if sym not in mats:
                    raise ParseError(ln, f"matrix for unknown symbol {args[0]!r}")
                mats[sym][names(args[1])][names(args[2])] = _ratio(ln, args[3])
            else:
                raise ParseError(ln, f"unexpected {head!r} row in a PFA")
        return Pfa(alphabet, count, initial, mats, states_of("accept"), states_of("reject"),
                   name=block.name)
    # dpda
    stack = tuple(_need(block, "stack")[1])
    ln, b = _need(block, "bottom")
    if len(b) != 1:
        raise ParseError(ln, "expected 'bottom <sym>'")
    ln, e = _need(block, "pushsize")
    if len(e) != 1 or not _INT.fullmatch(e[0]):
        raise ParseError(ln, "expected 'pushsize <e>'")
    moves = {}
    for ln, head, args in block.rows:
        if head != "trans" or len(args) != 5:
            raise ParseError(ln, "expected 'trans <q> <sym> <top> <q'> <push|EPS>'")
        key = (names(args[0]), _symbol(ln, args[1], allow_eps=True), args[2])
        if key in moves:
            raise ParseError(ln, f"duplicate move {args[:3]}")
        moves[key] = (names(args[3]), _string(args[4]))
    return Dpda(alphabet, stack, b[0], int(e[0]), count, start,
                states_of("accept"), states_of("reject"), moves, name=block.name)


def parse_machines(text: str) -> list[Machine]:
    return [_build(b) for b in _split_blocks(text)]


def parse_machine(text: str) -> Machine:
    machines = parse_machines(text)
    if len(machines) != 1:
        raise ParseError(1, f"expected exactly one machine, found {len(machines)}")
    return machines[0]


def _tok(sym: str) -> str:
    return {LEND: "LEND", REND: "REND", EPS: "EPS"}.get(sym, sym)


def _states_line(key: str, states: Iterable[int]) -> list[str]:
    states = sorted(states)
    return [f"{key} " + " ".join(map(str, states))] if states else []


def serialize_machine(m: Machine) -> str:
    kind = ("dfa" if isinstance(m, Dfa) else "nfa" if isinstance(m, Nfa) else
            "dft" if isinstance(m, Dft) else "pfa" if isinstance(m, Pfa) else "dpda")
    lines = [f"machine {m.name}", f"kind {kind}", "alphabet " + " ".join(m.alphabet),
             f"states {m.num_states}"]
    if isinstance(m, Nfa):
        lines += [f"start {m.start}", *_states_line("accept", m.accept),
                  *_states_line("reject", m.reject)]
        for (q, sym), succ in m.delta.items():
            lines.append(f"trans {q} {_tok(sym)} " + " ".join(map(str, succ)))
    elif isinstance(m, Dft):
        lines += ["output " + " ".join(m.output_alphabet), f"start {m.start}"]
        for q in range(m.num_states):
            for sym in m.tape_symbols:
                p, out = m.delta[(q, sym)]
                lines.append(f"trans {q} {_tok(sym)} {p} {out or 'EPS'}")
    elif isinstance(m, Pfa):
        lines += [*_states_line("accept", m.accept), *_states_line("reject", m.reject)]
        lines.append("init " + " ".join(f"{q}:{v}" for q, v in enumerate(m.initial) if v))
        for sym in m.tape_symbols:
            for i, row in enumerate(m.matrices[sym]):
                for j, v in enumerate(row):
                    if v:
                        lines.append(f"matrix {_tok(sym)} {i} {j} {v}")
    else:
        lines += ["stack " + " ".join(m.stack_alphabet), f"bottom {m.bottom}",
                  f"pushsize {m.push_size}", f"start {m.start}",
                  *_states_line("accept", m.accept), *_states_line("reject", m.reject)]
        order = {s: i for i, s in enumerate((EPS, *m.tape_symbols))}
        stack_order = {s: i for i, s in enumerate(m.stack_alphabet)}
        for (q, sym, top) in sorted(m.delta, key=lambda k: (k[0], order[k[1]], stack_order[k[2]])):
            p, push = m.delta[(q, sym, top)]
            lines.append(f"trans {q} {_tok(sym)} {top} {p} {push or 'EPS'}")
    lines.append("end")
    return "\n".join(lines) + "\n"
