"""Machine-to-machine transformations with exact path-count contracts.

Each construction describes its result through labelled states and a
successor function; :func:`_explore` numbers the reachable labels densely.
Successor lists must hold distinct labels, so whenever a contract needs several
parallel paths into "the same" state the labels carry an extra copy index.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import AlphabetError, AlphabetMismatch, HomomorphismError, NormalFormError, OutputAlphabetError
from .machines import LEND, REND, Dft, Nfa, Pfa

LIVE, ACC, REJ = 0, 1, 2

Label = Hashable


@dataclass(frozen=True)
class NormalFormResult:
    machine: Nfa
    degree: int


def _explore(alphabet: Sequence[str], start: Label, kind: Callable[[Label], int],
             successors: Callable[[Label, str], Iterable[Label]], name: str) -> Nfa:
    tape = (LEND, *alphabet, REND)
    ids = {start: 0}
    order = [start]
    delta = {}
    i = 0
    while i < len(order):
        label = order[i]
        i += 1
        if kind(label) != LIVE:
            continue
        for sym in tape:
            succ = list(successors(label, sym))
            if not succ:
                continue
            if len(set(succ)) != len(succ):
                raise AssertionError(f"duplicate successor labels from {label!r} on {sym!r}")
            for s in succ:
                if s not in ids:
                    ids[s] = len(order)
                    order.append(s)
            delta[(ids[label], sym)] = [ids[s] for s in succ]
    accept = {ids[l] for l in order if kind(l) == ACC}
    reject = {ids[l] for l in order if kind(l) == REJ}
    return Nfa(tuple(alphabet), len(order), 0, accept, reject, delta, name=name)


def _kind_of(m: Nfa, q: int) -> int:
    return ACC if q in m.accept else REJ if q in m.reject else LIVE


def _same_alphabet(*machines: Nfa) -> tuple[str, ...]:
    first = machines[0].alphabet
    for m in machines[1:]:
        if set(m.alphabet) != set(first):
            raise AlphabetMismatch(f"alphabets differ: {first} vs {m.alphabet}")
    return first


def is_complete(m: Nfa) -> bool:
    """True when every path reads the whole tape: halting happens only on ``◁``."""
    if m.start in m.halting:
        return False
    for q in range(m.num_states):
        if q in m.halting:
            continue
        for sym in (LEND, *m.alphabet):
            succ = m.successors(q, sym)
            if not succ or any(p in m.halting for p in succ):
                return False
    return True


def complete_paths(m: Nfa) -> Nfa:
    """Equivalent machine that halts only on ``◁``.

    Paths that halt early are carried to the end in a copy of their halting
    state; paths that die early are carried in a dead lane that dies on ``◁``.
    Accepting, rejecting and improper counts are all unchanged.
    """
    def lane(p):
        k = _kind_of(m, p)
        return ("q", p) if k == LIVE else ("carry", p)

    def kind(label):
        return _kind_of(m, label[1]) if label[0] == "h" else LIVE

    def succ(label, sym):
        tag = label[0]
        if tag == "q":
            nxt = m.successors(label[1], sym)
            if sym == REND:
                return [("h", p) if p in m.halting else ("q", p) for p in nxt]
            return [lane(p) for p in nxt] if nxt else [("dead",)]
        if tag == "carry":
            return [("h", label[1])] if sym == REND else [label]
        if tag == "dead":
            return [] if sym == REND else [label]
        return []

    return _explore(m.alphabet, lane(m.start), kind, succ, f"complete({m.name})")


def branching_degree(m: Nfa) -> int | None:
    """The degree c if ``m`` is in branching normal form, else None."""
    if m.start in m.halting:
        return None
    degree = None
    for q in range(m.num_states):
        if q in m.halting:
            continue
        for sym in m.tape_symbols:
            succ = m.successors(q, sym)
            if degree is None:
                degree = len(succ)
            if len(succ) != degree:
                return None
            final = sym == REND
            if any((p in m.halting) != final for p in succ):
                return None
    return degree if degree is not None and degree >= 2 else None


def branching_normal_form(m: Nfa, degree: int | None = None) -> NormalFormResult:
    """Every step makes exactly c choices; accepting paths are preserved and all
    padding paths reject, so accepting + rejecting = c^(|x|+2)."""
    current = branching_degree(m)
    if current is not None and degree in (None, current):
        return NormalFormResult(m, current)
    c = max([2, *(len(s) for s in m.delta.values())])
    if degree is not None:
        if degree < c:
            raise NormalFormError(f"degree {degree} is below the required {c}")
        c = degree

    def kind(label):
        return ACC if label[0] == "acc" else REJ if label[0] == "rej" else LIVE

    def succ(label, sym):
        tag = label[0]
        if tag == "q":
            nxt = m.successors(label[1], sym)
            if sym == REND:
                keep = [("acc", p) for p in nxt if p in m.accept]
                return keep + [("rej", i) for i in range(c - len(keep))]
            keep = [("q", p) for p in nxt if p not in m.halting]
            keep += [("carry", p) for p in nxt if p in m.accept]
            return keep + [("pad", i) for i in range(c - len(keep))]
        if tag == "carry":
            if sym == REND:
                return [("acc", label[1])] + [("rej", i) for i in range(c - 1)]
            return [label] + [("pad", i) for i in range(c - 1)]
        if tag == "pad":
            return [("rej" if sym == REND else "pad", i) for i in range(c)]
        return []

    s = m.start
    start = ("q", s) if s not in m.halting else ("carry", s) if s in m.accept else ("pad", 0)
    return NormalFormResult(_explore(m.alphabet, start, kind, succ, f"normal({m.name})"), c)


def flip(m: Nfa) -> Nfa:
    return type(m)(m.alphabet, m.num_states, m.start, m.reject, m.accept, m.delta,
                   name=f"flip({m.name})")


def split_rejecting(m: Nfa) -> Nfa:
    """Every rejecting step also spawns an accepting twin: acc' = acc + rej, rej' = rej."""
    if m.start in m.halting:
        m = complete_paths(m)

    def kind(label):
        return ACC if label[0] == "twin" else _kind_of(m, label[1])

    def succ(label, sym):
        nxt = m.successors(label[1], sym)
        return [("q", p) for p in nxt] + [("twin", p) for p in nxt if p in m.reject]

    return _explore(m.alphabet, ("q", m.start), kind, succ, f"split({m.name})")


def _fork(machines: Sequence[Nfa], name: str) -> Nfa:
    """Run complete machines side by side, choosing one of them on the first step."""
    alphabet = machines[0].alphabet

    def kind(label):
        return LIVE if label == "start" else _kind_of(machines[label[0]], label[1])

    def succ(label, sym):
        if label == "start":
            return [(i, p) for i, m in enumerate(machines) for p in m.successors(m.start, sym)]
        i, q = label
        return [(i, p) for p in machines[i].successors(q, sym)]

    return _explore(alphabet, "start", kind, succ, name)


def always_accept(alphabet: Sequence[str]) -> Nfa:
    """Deterministic machine that reads the tape and accepts on ``◁``."""
    delta = {(0, s): [0] for s in (LEND, *alphabet)}
    delta[(0, REND)] = [1]
    return Nfa(tuple(alphabet), 2, 0, {1}, set(), delta, name="accept")


def disjoint_sum(m: Nfa, n: Nfa) -> Nfa:
    _same_alphabet(m, n)
    return _fork([complete_paths(m), complete_paths(n)], f"sum({m.name},{n.name})")


def _pair_machine(m: Nfa, n: Nfa, outcome, name: str) -> Nfa:
    """Pair simulation of two complete machines.

    ``outcome(s, t)`` maps a pair of halting states to a list of labels with
    kinds; pairs where either side is live stay live (improper after ``◁``).
    """
    kinds: dict[Label, int] = {}

    def kind(label):
        if label[0] == "end":
            return kinds[label]
        return LIVE

    def succ(label, sym):
        out = []
        for s in m.successors(label[1], sym):
            for t in n.successors(label[2], sym):
                if s in m.halting and t in n.halting:
                    for lab, k in outcome(s, t):
                        kinds[lab] = k
                        out.append(lab)
                else:
                    out.append(("pair", s, t))
        return out

    return _explore(m.alphabet, ("pair", m.start, n.start), kind, succ, name)


def sync_product(m: Nfa, n: Nfa) -> Nfa:
    """Accepting count multiplies; any other combination of verdicts rejects."""
    _same_alphabet(m, n)
    m, n = complete_paths(m), complete_paths(n)

    def outcome(s, t):
        both = s in m.accept and t in n.accept
        return [(("end", s, t), ACC if both else REJ)]

    return _pair_machine(m, n, outcome, f"product({m.name},{n.name})")


def square_gap(m: Nfa) -> Nfa:
    """Two copies in lockstep; equal verdicts accept, unequal ones reject."""
    if not is_complete(m):
        m = complete_paths(m)

    def outcome(s, t):
        return [(("end", s, t), ACC if (s in m.accept) == (t in m.accept) else REJ)]

    return _pair_machine(m, m, outcome, f"square({m.name})")


def meet_cequal(m: Nfa, n: Nfa) -> Nfa:
    """Both accept: accept.  Both reject: reject.  Mixed: one path of each."""
    _same_alphabet(m, n)
    m, n = complete_paths(m), complete_paths(n)

    def outcome(s, t):
        a, b = s in m.accept, t in n.accept
        if a == b:
            return [(("end", s, t), ACC if a else REJ)]
        return [(("end", s, t, "a"), ACC), (("end", s, t, "r"), REJ)]

    return _pair_machine(m, n, outcome, f"meet({m.name},{n.name})")


def complement_gapwise(m: Nfa) -> Nfa:
    """Swap verdicts and add one accepting lane: gap becomes 1 - gap."""
    return _fork([flip(complete_paths(m)), always_accept(m.alphabet)], f"complement({m.name})")


def gap_of_difference(a: Nfa, b: Nfa) -> Nfa:
    """Gap equals accepting(a) - accepting(b)."""
    _same_alphabet(a, b)
    return disjoint_sum(split_rejecting(a), flip(split_rejecting(b)))


def gap_sum(m: Nfa, n: Nfa) -> Nfa:
    # gap(m) + gap(n) = (acc m + acc n) - (acc flip m + acc flip n)
    _same_alphabet(m, n)
    return gap_of_difference(disjoint_sum(m, n), disjoint_sum(flip(m), flip(n)))


def gap_product(m: Nfa, n: Nfa) -> Nfa:
    # with f = f1 - f2 and g = g1 - g2: f*g = (f1 g1 + f2 g2) - (f1 g2 + f2 g1)
    _same_alphabet(m, n)
    fm, fn = flip(m), flip(n)
    plus = disjoint_sum(sync_product(m, n), sync_product(fm, fn))
    minus = disjoint_sum(sync_product(m, fn), sync_product(fm, n))
    return gap_of_difference(plus, minus)


def _binary_value(w: str) -> int:
    return int(w, 2) if w else 0


def _transducer_gadget(t: Dft, signed: bool) -> Nfa:
    for _, out in t.delta.values():
        bad = set(out) - {"0", "1"}
        if bad:
            raise OutputAlphabetError(f"transducer emits {sorted(bad)} outside {{0,1}}")

    # Lanes: ("pre", s) before the sign bit; ("low", sign, s) is the single
    # lane that has seen no 1 yet; ("high", sign, s, i) are its offspring,
    # whose number doubles per later bit.  Reading bits b gives value 2v + b.
    def kind(label):
        return ACC if label[0] == "A" else REJ if label[0] == "R" else LIVE

    def succ(label, sym):
        s2, w = t.delta[(label[-1] if label[0] == "pre" else label[2], sym)]
        if label[0] == "pre":
            if not w:
                phase = None
            else:
                sign = 1 if w[0] == "1" else -1
                phase, w = ("low", sign), w[1:]
        else:
            phase = (label[0], label[1])
        if phase is None:
            low, high, sign = None, 0, 0
        elif phase[0] == "low":
            low, high, sign = True, _binary_value(w), phase[1]
        else:
            low, high, sign = False, 2 ** len(w), phase[1]
        if sign == -1 and not signed:
            return [("R", 0)]
        if sym != REND:
            if low is None:
                return [("pre", s2)]
            out = [("low", sign, s2)] if low else []
            return out + [("high", sign, s2, i) for i in range(high)]
        accepts = rejects = 0
        if low is None or low:
            # the lane that never saw a 1 contributes nothing to the value
            accepts += signed
            rejects += 1
        if sign > 0:
            accepts += high
        else:
            rejects += high
        return [("A", i) for i in range(accepts)] + [("R", i) for i in range(rejects)]

    gadget = "gapcounter" if signed else "counter"
    return _explore(t.alphabet, ("pre", t.start), kind, succ, f"{gadget}({t.name})")


def counter_from_transducer(t: Dft) -> Nfa:
    """Accepting count equals the value whose signed code the transducer writes."""
    return _transducer_gadget(t, signed=False)


def gap_from_transducer(t: Dft) -> Nfa:
    """Gap equals the signed value whose code the transducer writes."""
    return _transducer_gadget(t, signed=True)


def _run_word(m: Nfa, q: int, w: str):
    """Distribution of paths of ``m`` from live ``q`` over ``w`` without endmarkers."""
    live = Counter({q: 1})
    acc: Counter = Counter()
    rej: Counter = Counter()
    dead = 0
    for sym in w:
        nxt: Counter = Counter()
        for p, c in live.items():
            succ = m.successors(p, sym)
            if not succ:
                dead += c
            for r in succ:
                (acc if r in m.accept else rej if r in m.reject else nxt)[r] += c
        live = nxt
    return live, acc, rej, dead


def hom_image(m: Nfa, h: Mapping[str, str]) -> Nfa:
    """Machine over the domain of ``h`` whose run on x mirrors ``m`` on h(x)."""
    for sym, img in h.items():
        if set(img) - set(m.alphabet):
            raise AlphabetError(f"image {img!r} of {sym!r} leaves the machine alphabet")

    def kind(label):
        return {"acc": ACC, "rej": REJ}.get(label[0], LIVE)

    def succ(label, sym):
        if label[0] != "q":
            return []
        q = label[1]
        if sym in (LEND, REND):
            nxt = m.successors(q, sym)
            live = Counter(p for p in nxt if p not in m.halting)
            acc = Counter(p for p in nxt if p in m.accept)
            rej = Counter(p for p in nxt if p in m.reject)
            dead = 0 if nxt else 1
        else:
            live, acc, rej, dead = _run_word(m, q, h[sym])
        out = [("q", p, i) for p, c in sorted(live.items()) for i in range(c)]
        out += [("acc", p, i) for p, c in sorted(acc.items()) for i in range(c)]
        out += [("rej", p, i) for p, c in sorted(rej.items()) for i in range(c)]
        return out + [("dead", i) for i in range(dead)]

    s = m.start
    start = ("acc" if s in m.accept else "rej" if s in m.reject else "q", s, 0)
    return _explore(tuple(h), start, kind, succ, f"image({m.name})")


def check_prefix_code(h: Mapping[str, str]) -> None:
    images = list(h.values())
    if any(img == "" for img in images):
        raise HomomorphismError("homomorphism is erasing")
    if len(set(images)) != len(images):
        raise HomomorphismError("two letters share an image")
    for a in images:
        for b in images:
            if a != b and b.startswith(a):
                raise HomomorphismError(f"image {a!r} is a prefix of {b!r}")


def hom_inverse(m: Nfa, h: Mapping[str, str], alphabet: Sequence[str] | None = None) -> Nfa:
    """Machine over the image alphabet that decodes h(x) back to x while running ``m``.

    Inputs outside the image of ``h`` leave every path improper.
    """
    check_prefix_code(h)
    if set(h) != set(m.alphabet):
        raise HomomorphismError("homomorphism domain must be the machine alphabet")
    if alphabet is None:
        alphabet = sorted({ch for img in h.values() for ch in img})
    inverse = {img: sym for sym, img in h.items()}
    prefixes = {img[:i] for img in h.values() for i in range(len(img))}

    def lab(p):
        return ("h", p) if p in m.halting else ("q", p, "")

    def kind(label):
        return _kind_of(m, label[1]) if label[0] == "h" else LIVE

    def succ(label, sym):
        if label[0] != "q":
            return []
        _, q, buf = label
        if sym in (LEND, REND):
            return [lab(p) for p in m.successors(q, sym)] if buf == "" else []
        buf += sym
        if buf in inverse:
            return [lab(p) for p in m.successors(q, inverse[buf])]
        return [("q", q, buf)] if buf in prefixes else []

    return _explore(tuple(alphabet), lab(m.start), kind, succ, f"inverse({m.name})")


def balanced_normal_form(m: Nfa) -> NormalFormResult:
    """Normal form whose gap is 2^(|x|+2) times the gap of ``m``.

    One lane runs the normal form of ``m``, the other runs the verdict-swapped
    normal form of ``flip(m)``; each step also doubles every lane, so the
    branching degree is uniform at 2c.
    """
    c = max(branching_normal_form(m).degree, branching_normal_form(flip(m)).degree)
    a = branching_normal_form(m, c).machine
    b = branching_normal_form(flip(m), c).machine
    lanes = (a, flip(b))

    def kind(label):
        return LIVE if label == "start" else _kind_of(lanes[label[0]], label[1])

    def succ(label, sym):
        if label == "start":
            return [(i, p, 0) for i, x in enumerate(lanes) for p in x.successors(x.start, sym)]
        i, q, _ = label
        return [(i, p, bit) for p in lanes[i].successors(q, sym) for bit in (0, 1)]

    return NormalFormResult(_explore(m.alphabet, "start", kind, succ, f"balanced({m.name})"), 2 * c)


def nfa_to_pfa(nf: NormalFormResult) -> Pfa:
    """Choose each of the c successors with probability 1/c; halting states absorb."""
    m, c = nf.machine, nf.degree
    if branching_degree(m) != c:
        raise NormalFormError(f"machine is not in branching normal form of degree {c}")
    n = m.num_states
    share = Fraction(1, c)
    mats = {}
    for sym in m.tape_symbols:
        rows = []
        for q in range(n):
            row = [Fraction(0)] * n
            if q in m.halting:
                row[q] = Fraction(1)
            else:
                for p in m.successors(q, sym):
                    row[p] = share
            rows.append(row)
        mats[sym] = rows
    initial = [Fraction(int(q == m.start)) for q in range(n)]
    return Pfa(m.alphabet, n, initial, mats, m.accept, m.reject, name=f"pfa({m.name})")
