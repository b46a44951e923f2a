"""Exact-rational linear algebra over PFA prefix vectors, and integer operators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import DivisionByZero, NotInSpan, RangeError, ScaleError
from .families import NEG, POS, PromiseFamily
from .machines import LEND, Pfa, check_word
from .semantics import pfa_probabilities, pfa_vector


@dataclass(frozen=True)
class PrefixVector:
    prefix: str
    vector: tuple[Fraction, ...]


def prefix_vector(p: Pfa, w: str) -> PrefixVector:
    """Distribution after reading ``▷w`` (no right endmarker)."""
    check_word(p.alphabet, w)
    return PrefixVector(w, tuple(pfa_vector(p, LEND + w)))


class _Echelon:
    """Incremental row echelon basis with first-nonzero pivots."""

    def __init__(self):
        self.rows: list[tuple[int, list[Fraction]]] = []

    def reduce(self, v: Sequence[Fraction]) -> list[Fraction]:
        v = list(v)
        for pivot, row in self.rows:
            c = v[pivot]
            if c:
                for j in range(pivot, len(v)):
                    if row[j]:
                        v[j] -= c * row[j]
        return v

    def add(self, v: Sequence[Fraction]) -> bool:
        r = self.reduce(v)
        pivot = next((j for j, a in enumerate(r) if a), None)
        if pivot is None:
            return False
        lead = r[pivot]
        self.rows.append((pivot, [a / lead for a in r]))
        return True


def spanning_prefix_set(p: Pfa, prefixes: Iterable[str]) -> list[str]:
    """Greedy independent subset, in input order, whose vectors span all the others."""
    basis = _Echelon()
    chosen = []
    for w in prefixes:
        if basis.add(prefix_vector(p, w).vector):
            chosen.append(w)
    return chosen


@dataclass(frozen=True)
class AffineDecomposition:
    coefficients: dict[str, Fraction]
    total: Fraction
    minimum: Fraction


def solve_exact(columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``sum_j a_j * columns[j] = target`` exactly; columns must be independent."""
    k, n = len(columns), len(target)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    pivots = []
    r = 0
    for col in range(k):
        pr = next((i for i in range(r, n) if aug[i][col]), None)
        if pr is None:
            raise NotInSpan("spanning vectors are linearly dependent")
        aug[r], aug[pr] = aug[pr], aug[r]
        lead = aug[r][col]
        aug[r] = [a / lead for a in aug[r]]
        for i in range(n):
            if i != r and aug[i][col]:
                c = aug[i][col]
                aug[i] = [a - c * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    if any(aug[i][k] for i in range(r, n)):
        raise NotInSpan("target vector lies outside the span")
    return [aug[i][k] for i in range(k)]


def affine_decomposition(p: Pfa, spanning: Sequence[str], x: str) -> AffineDecomposition:
    cols = [prefix_vector(p, w).vector for w in spanning]
    alpha = solve_exact(cols, prefix_vector(p, x).vector)
    coeffs = dict(zip(spanning, alpha))
    return AffineDecomposition(coeffs, sum(alpha, Fraction(0)), min(alpha, default=Fraction(0)))


@dataclass
class ExtensionReport:
    n: int
    m: int
    l: int
    z: str
    num_states: int
    prefixes: list[str] = field(default_factory=list)
    spanning: list[str] = field(default_factory=list)
    suffixes_checked: int = 0
    premises_met: int = 0
    skipped_invalid: int = 0
    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and len(self.spanning) <= self.num_states

    def lines(self) -> list[str]:
        head = (f"n={self.n} m={self.m} l={self.l} z={self.z!r} |A|={len(self.prefixes)} "
                f"|S|={len(self.spanning)} |Q|={self.num_states} y={self.suffixes_checked} "
                f"premise={self.premises_met} invalid={self.skipped_invalid} "
                f"violations={len(self.violations)}")
        return [head] + [f"violation x={x!r} y={y!r}" for x, y in self.violations]


def _words(alphabet: Sequence[str], length: int) -> list[str]:
    return ["".join(w) for w in product(alphabet, repeat=length)]


def check_cequal_extension(p: Pfa, fam: PromiseFamily, n: int, m: int, l: int, z: str,
                           limit: int = 200_000) -> ExtensionReport:
    """Empirical check of the extension property of equality-gap PFAs.

    A = {x of length m-l : xz Positive}; S spans the prefix vectors of A.  For
    each y of length l with every wy (w in S) Positive, each xy (x in A) must
    not be Negative.  Invalid xy carry no promise and are only counted.
    """
    if len(z) != l or l > m:
        raise ValueError("need |z| = l <= m")
    if len(fam.alphabet) ** max(m - l, l) > limit:
        raise ScaleError(f"{len(fam.alphabet)}^{max(m - l, l)} strings exceed the limit {limit}")
    report = ExtensionReport(n, m, l, z, p.num_states)
    report.prefixes = [x for x in _words(fam.alphabet, m - l) if fam.classify(n, x + z) is POS]
    if not report.prefixes:
        return report
    report.spanning = spanning_prefix_set(p, report.prefixes)
    for y in _words(fam.alphabet, l):
        report.suffixes_checked += 1
        if not all(fam.classify(n, w + y) is POS for w in report.spanning):
            continue
        report.premises_met += 1
        for x in report.prefixes:
            verdict = fam.classify(n, x + y)
            if verdict is NEG:
                report.violations.append((x, y))
            elif verdict is not POS:
                report.skipped_invalid += 1
    return report


@dataclass(frozen=True)
class SignPattern:
    bits: str | None  # None when some concatenation is invalid

    @property
    def defined(self) -> bool:
        return self.bits is not None


def sign_pattern(fam: PromiseFamily, n: int, spanning: Sequence[str], y: str) -> SignPattern:
    bits = []
    for w in spanning:
        v = fam.classify(n, w + y)
        if v is POS:
            bits.append("1")
        elif v is NEG:
            bits.append("0")
        else:
            return SignPattern(None)
    return SignPattern("".join(bits))


def acceptance_margins(p: Pfa, spanning: Sequence[str], y: str) -> list[Fraction]:
    """p_acc(w y) - 1/2 for each w."""
    return [pfa_probabilities(p, w + y)[0] - Fraction(1, 2) for w in spanning]


def find_flipping_pair(fam: PromiseFamily, n: int, x: str, suffixes: Iterable[str]):
    """Some (y, y') among the suffixes with xy Positive and xy' Negative, or None."""
    pos = neg = None
    for y in suffixes:
        v = fam.classify(n, x + y)
        if v is POS and pos is None:
            pos = y
        elif v is NEG and neg is None:
            neg = y
        if pos is not None and neg is not None:
            return pos, neg
    return None


# -- integer operators ---------------------------------------------------------

FUNOPS = ("add", "mul", "propersub", "intdiv", "dec1", "half", "max", "min")
UNARY = {"dec1", "half"}


def _natural(*values: int) -> None:
    for v in values:
        if v < 0:
            raise RangeError(f"operator needs natural numbers, got {v}")


def funop_apply(op: str, a: int, b: int | None = None) -> int:
    if op in UNARY:
        if b is not None:
            raise TypeError(f"{op} takes one operand")
    elif b is None:
        raise TypeError(f"{op} takes two operands")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "propersub":
        _natural(a, b)
        return a - b if a > b else 0
    if op == "dec1":
        _natural(a)
        return a - 1 if a > 0 else 0
    if op == "intdiv":
        if b == 0:
            raise DivisionByZero("integer division by zero")
        return a // b
    if op == "half":
        return a // 2
    if op == "max":
        return max(a, b)
    if op == "min":
        return min(a, b)
    raise ValueError(f"unknown operator {op!r}; known: {FUNOPS}")
