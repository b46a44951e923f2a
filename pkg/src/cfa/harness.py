"""Class-condition predicates and the verification suites behind ``cfa verify``."""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import analysis as an
from . import constructions as cons
from .encodings import encode_trans
from .errors import AlphabetMismatch, UnknownSuite
from .families import POS, build_machine, family
from .machines import LEND, REND, Dft, Nfa, Pfa, state_complexity, stack_state_complexity
from .randomgen import random_homomorphism, random_nfa, random_prefix_code
from .semantics import (count_paths, dpda_run, enumerate_paths, pfa_probabilities, tally,
                        transduce)


class ClassCondition(enum.Enum):
    ONE_N = ("OneN", "counting")
    ONE_U = ("OneU", "counting")
    ONE_PARITY = ("OneParity", "counting")
    ONE_CEQ = ("OneCeq", "gap")
    ONE_SP = ("OneSP", "gap")
    ONE_P = ("OneP", "gap")

    @property
    def label(self) -> str:
        return self.value[0]

    @property
    def semantics(self) -> str:
        return self.value[1]

    @classmethod
    def parse(cls, text: str) -> "ClassCondition":
        for c in cls:
            if c.label.lower() == text.lower():
                return c
        raise ValueError(f"unknown class condition {text!r}")

    def holds(self, positive: bool, f: int) -> bool:
        if self is ClassCondition.ONE_N:
            return f > 0 if positive else f == 0
        if self in (ClassCondition.ONE_U, ClassCondition.ONE_SP):
            return f == 1 if positive else f == 0
        if self is ClassCondition.ONE_PARITY:
            return f % 2 == 1 if positive else f % 2 == 0
        if self is ClassCondition.ONE_CEQ:
            return f == 0 if positive else f != 0
        return f > 0 if positive else f <= 0


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.check_id}" + (f" {self.detail}" if self.detail else "")


@dataclass
class SuiteReport:
    suite: str
    seed: int | None = None
    scale: str = ""
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, check_id: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(check_id, bool(passed), detail))

    def extend(self, other: "SuiteReport") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def counters(self) -> dict[str, int]:
        fails = sum(not c.passed for c in self.checks)
        return {"pass": len(self.checks) - fails, "fail": fails}

    def lines(self) -> list[str]:
        body = [c.line() for c in sorted(self.checks, key=lambda c: c.check_id)]
        k = self.counters
        return body + [f"SUMMARY suite={self.suite} seed={self.seed} scale={self.scale} "
                       f"pass={k['pass']} fail={k['fail']}"]

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"


def check_class_condition(cond: ClassCondition, machine: Nfa, fam, n: int,
                          max_len: int | None = None, check_id: str | None = None) -> SuiteReport:
    """Evaluate the class predicate on every enumerated valid instance."""
    if set(machine.alphabet) != set(fam.alphabet):
        raise AlphabetMismatch(f"machine alphabet {machine.alphabet} vs family {fam.alphabet}")
    check_id = check_id or f"class.{cond.label}.{fam.name}.n{n}"
    report = SuiteReport(check_id)
    total = 0
    failures = []
    for s in fam.enumerate(n, max_len):
        verdict = fam.classify(n, s)
        counts = count_paths(machine, s)
        f = counts.accepting if cond.semantics == "counting" else counts.gap
        total += 1
        if not cond.holds(verdict is POS, f):
            failures.append(f"{s!r}:{verdict.value}:f={f}")
    detail = f"instances={total} failures={len(failures)}"
    if failures:
        detail += " first=" + ",".join(failures[:3])
    report.add(check_id, not failures, detail)
    return report


# -- suites ---------------------------------------------------------------------

_SCALES = {
    "small": {"machines": 30, "len": 3, "n": 2, "pairs": 30},
    "full": {"machines": 200, "len": 5, "n": 3, "pairs": 200},
}


def _words(alphabet, max_len: int):
    for k in range(max_len + 1):
        for w in itertools.product(alphabet, repeat=k):
            yield "".join(w)


class _Runner:
    def __init__(self, seed: int, scale: str, inject_fault: bool):
        self.rng = random.Random(seed)
        self.cfg = _SCALES[scale]
        self.ops = {
            "complete_paths": cons.complete_paths,
            "branching_normal_form": cons.branching_normal_form,
            "flip": cons.flip,
            "split_rejecting": cons.split_rejecting,
            "disjoint_sum": cons.disjoint_sum,
            "sync_product": cons.sync_product,
            "square_gap": cons.square_gap,
            "meet_cequal": cons.meet_cequal,
            "complement_gapwise": cons.complement_gapwise,
            "gap_of_difference": cons.gap_of_difference,
            "gap_sum": cons.gap_sum,
            "gap_product": cons.gap_product,
        }
        if inject_fault:
            # deliberately wrong stand-ins; their checks must report FAIL
            self.ops["flip"] = lambda m: m
            self.ops["split_rejecting"] = cons.complete_paths
            self.ops["square_gap"] = cons.complete_paths
            self.ops["sync_product"] = cons.disjoint_sum

    def machines(self, count: int | None = None, **kw) -> list[Nfa]:
        return [random_nfa(self.rng, **kw) for _ in range(count or self.cfg["machines"])]

    def pairs(self):
        out = []
        for _ in range(self.cfg["pairs"]):
            m = random_nfa(self.rng)
            out.append((m, random_nfa(self.rng, alphabet=m.alphabet)))
        return out

    def identity(self, report: SuiteReport, check_id: str, cases, predicate) -> None:
        """Run ``predicate(case)`` on each case; it returns None or a failure string."""
        failures = []
        total = 0
        for case in cases:
            total += 1
            err = predicate(case)
            if err:
                failures.append(err)
        detail = f"cases={total} failures={len(failures)}" + (f" first={failures[0]}" if failures else "")
        report.add(check_id, not failures, detail)

    # semantics -------------------------------------------------------------
    def semantics(self, report: SuiteReport) -> None:
        L = self.cfg["len"]

        def oracle(m):
            for x in _words(m.alphabet, L):
                got, ref = count_paths(m, x), tally(enumerate_paths(m, x, 10**6))
                if got != ref:
                    return f"{m.name}:{x!r}:{got}!={ref}"
        self.identity(report, "semantics.count_vs_enumerate", self.machines(), oracle)

        def deterministic(m):
            for x in _words(m.alphabet, L):
                if count_paths(m, x).total != 1:
                    return f"{m.name}:{x!r}"
        self.identity(report, "semantics.deterministic_single_path",
                      self.machines(max_branch=1), deterministic)

        def conservation(m):
            nf = cons.branching_normal_form(m)
            p = cons.nfa_to_pfa(nf)
            for x in _words(m.alphabet, min(L, 3)):
                c = count_paths(nf.machine, x)
                if c.total != nf.degree ** (len(x) + 2) or c.improper:
                    return f"{m.name}:{x!r}:total"
                if sum(pfa_probabilities(p, x)) != 1:
                    return f"{m.name}:{x!r}:mass"
        self.identity(report, "semantics.normal_form_total", self.machines(10), conservation)

        const = Dft(("0", "1"), ("0", "1"), 1, 0,
                    {(0, s): (0, encode_trans(3) if s == LEND else "") for s in (LEND, "0", "1", REND)})
        self.identity(report, "semantics.transduce_constant", list(_words("01", L)),
                      lambda x: None if transduce(const, x) == "111" else repr(x))

        d = build_machine("Ldot", 2)

        def bottom(x):
            seen = []
            dpda_run(d, x, observer=lambda step, q, stack: seen.append(stack[0] == d.bottom))
            return None if all(seen) else repr(x)
        self.identity(report, "semantics.dpda_bottom_kept", list(_words(d.alphabet, 4)), bottom)

    # constructions ---------------------------------------------------------
    def constructions(self, report: SuiteReport) -> None:
        ops = self.ops
        L = min(self.cfg["len"], 4)

        def unary(check_id, build, contract):
            def run(m):
                out = build(m)
                for x in _words(m.alphabet, L):
                    err = contract(m, out, x, count_paths(m, x))
                    if err:
                        return f"{m.name}:{x!r}:{err}"
            self.identity(report, check_id, self.machines(), run)

        def binary(check_id, build, contract):
            def run(pair):
                m, n = pair
                out = build(m, n)
                for x in _words(m.alphabet, min(L, 3)):
                    err = contract(out, x, count_paths(m, x), count_paths(n, x))
                    if err:
                        return f"{m.name},{n.name}:{x!r}:{err}"
            self.identity(report, check_id, self.pairs(), run)

        unary("complete.counts", ops["complete_paths"],
              lambda m, o, x, c: None if count_paths(o, x) == c else "counts")

        def bnf_contract(m, nf, x, c):
            got = count_paths(nf.machine, x)
            if got.accepting != c.accepting or got.improper:
                return "accepting"
            if got.accepting + got.rejecting != nf.degree ** (len(x) + 2):
                return "total"
            if nf.machine.num_states > 3 * m.num_states + nf.degree + 2:
                return "size"
        unary("normal_form.contract", ops["branching_normal_form"], bnf_contract)
        unary("flip.swaps_counts", ops["flip"],
              lambda m, o, x, c: None if count_paths(o, x) == (c.rejecting, c.accepting, c.improper)
              else "swap")
        unary("split.gap_is_accepting", ops["split_rejecting"],
              lambda m, o, x, c: None if count_paths(o, x).gap == c.accepting
              and count_paths(o, x).rejecting == c.rejecting else "gap")

        def square_contract(m, o, x, c):
            if count_paths(o, x).gap != c.gap ** 2:
                return "gap"
            if cons.is_complete(m) and o.num_states > m.num_states ** 2 + 2:
                return "size"
        unary("square.gap_squared", ops["square_gap"], square_contract)
        unary("complement.counts", ops["complement_gapwise"],
              lambda m, o, x, c: None if count_paths(o, x)[:2] == (c.rejecting + 1, c.accepting)
              else "counts")

        binary("closure.sum", ops["disjoint_sum"],
               lambda o, x, a, b: None if count_paths(o, x) == tuple(map(sum, zip(a, b))) else "sum")
        binary("closure.product", ops["sync_product"],
               lambda o, x, a, b: None if count_paths(o, x).accepting == a.accepting * b.accepting
               else "product")

        def meet_contract(o, x, a, b):
            mixed = a.accepting * b.rejecting + a.rejecting * b.accepting
            got = count_paths(o, x)
            if (got.accepting, got.rejecting) != (a.accepting * b.accepting + mixed,
                                                  a.rejecting * b.rejecting + mixed):
                return "meet"
        binary("meet.counts", ops["meet_cequal"], meet_contract)
        binary("difference.gap", ops["gap_of_difference"],
               lambda o, x, a, b: None if count_paths(o, x).gap == a.accepting - b.accepting else "gap")
        binary("closure.gap_sum", ops["gap_sum"],
               lambda o, x, a, b: None if count_paths(o, x).gap == a.gap + b.gap else "gap")
        binary("closure.gap_product", ops["gap_product"],
               lambda o, x, a, b: None if count_paths(o, x).gap == a.gap * b.gap else "gap")

        ident = Dft(("0", "1"), ("0", "1"), 1, 0,
                    {(0, LEND): (0, ""), (0, "0"): (0, "0"), (0, "1"): (0, "1"), (0, REND): (0, "")})
        counter = cons.counter_from_transducer(ident)
        signed = cons.gap_from_transducer(ident)
        words = list(_words("01", self.cfg["len"] + 1))
        self.identity(report, "transducer.counter", words,
                      lambda w: None if count_paths(counter, "1" + w).accepting == int(w or "0", 2)
                      else repr(w))
        self.identity(report, "transducer.gap_counter", [(s, w) for s in "01" for w in words],
                      lambda sw: None if count_paths(signed, sw[0] + sw[1]).gap
                      == (1 if sw[0] == "1" else -1) * int(sw[1] or "0", 2) else repr(sw))
        self.identity(report, "transducer.signed_codes", range(-20, 21),
                      lambda v: None if count_paths(signed, encode_trans(v)).gap == v else str(v))

        def image(m):
            h = random_homomorphism(self.rng, ("x", "y"), m.alphabet)
            o = cons.hom_image(m, h)
            for x in _words(("x", "y"), 3):
                hx = "".join(h[c] for c in x)
                if count_paths(o, x).accepting != count_paths(m, hx).accepting:
                    return f"{m.name}:{x!r}"
        self.identity(report, "hom.image", self.machines(), image)

        def inverse(m):
            h = random_prefix_code(self.rng, m.alphabet)
            o = cons.hom_inverse(m, h)
            if o.num_states > m.num_states * sum(len(v) for v in h.values()):
                return "size"
            for x in _words(m.alphabet, 3):
                if count_paths(o, "".join(h[c] for c in x)).accepting != count_paths(m, x).accepting:
                    return f"{m.name}:{x!r}"
        self.identity(report, "hom.inverse", self.machines(), inverse)

        def bridge(m):
            nf = cons.branching_normal_form(m)
            p = cons.nfa_to_pfa(nf)
            for x in _words(m.alphabet, min(L, 3)):
                want = Fraction(count_paths(m, x).accepting, nf.degree ** (len(x) + 2))
                if pfa_probabilities(p, x)[0] != want:
                    return f"{m.name}:{x!r}"
        self.identity(report, "pfa.bridge", self.machines(10), bridge)

    # families --------------------------------------------------------------
    def families(self, report: SuiteReport) -> None:
        top = self.cfg["n"]
        lengths = {"example31": 8, "Lsp": 7}
        for name, fam_n in (("example31", top), ("Lsp", top), ("LU", top), ("LN", 2),
                            ("Lparity", top + 1 if top > 2 else top), ("Ldot", top)):
            fam = family(name)
            failures, total = [], 0
            for n in range(1, fam_n + 1):
                m = build_machine(name, n)
                for s in fam.enumerate(n, lengths.get(name)):
                    total += 1
                    if not fam.contract(n, s, m):
                        failures.append(f"n={n}:{s!r}")
            report.add(f"family.{name}.contract", not failures,
                       f"instances={total} failures={len(failures)}")
            c, k = fam.size_bound
            sizes = []
            for n in range(1, 6):
                m = build_machine(name, n)
                sizes.append(stack_state_complexity(m) if name == "Ldot" else state_complexity(m))
            ok = all(s <= c * n ** k for n, s in zip(range(1, 6), sizes))
            report.add(f"family.{name}.size", ok, f"sizes={sizes} bound={c}*n^{k}")

        lu2 = build_machine("LU", 2)
        ln2 = build_machine("LN", 2)
        for cond, machine, fam, id_ in (
                (ClassCondition.ONE_U, lu2, family("LU"), "class.OneU.LU"),
                (ClassCondition.ONE_N, ln2, family("LN"), "class.OneN.LN"),
                (ClassCondition.ONE_PARITY, build_machine("Lparity", 2), family("Lparity"),
                 "class.OneParity.Lparity"),
                (ClassCondition.ONE_SP, build_machine("Lsp", 2), family("Lsp"), "class.OneSP.Lsp"),
                (ClassCondition.ONE_SP, self.ops["split_rejecting"](lu2), family("LU"),
                 "split.one_sp.LU"),
                (ClassCondition.ONE_CEQ, self.ops["split_rejecting"](ln2), family("LN").complement(),
                 "split.co_equality.LN")):
            bound = 7 if fam.name in ("Lsp", "example31") else None
            report.extend(check_class_condition(cond, machine, fam, 2, bound, check_id=id_))

    # analysis --------------------------------------------------------------
    def analysis(self, report: SuiteReport) -> None:
        fam = family("Lsp")
        ceq = cons.complement_gapwise(build_machine("Lsp", 1))
        pfa = cons.nfa_to_pfa(cons.balanced_normal_form(ceq))
        bad = []
        for x in _words(fam.alphabet, 5):
            half = pfa_probabilities(pfa, x)[0] == Fraction(1, 2)
            if half != (count_paths(ceq, x).gap == 0):
                bad.append(x)
        report.add("cequal.pfa_half", not bad, f"failures={len(bad)}")

        viol, runs, worst = 0, 0, 0
        for l in range(1, 4 if self.cfg is _SCALES["small"] else 5):
            for z in _words(fam.alphabet, l):
                if len(z) != l:
                    continue
                r = an.check_cequal_extension(pfa, fam, 1, l + 3, l, z)
                runs += 1
                viol += len(r.violations)
                worst = max(worst, len(r.spanning))
        report.add("cequal.extension.Lsp", viol == 0 and worst <= pfa.num_states,
                   f"runs={runs} violations={viol} max|S|={worst} |Q|={pfa.num_states}")

        lu = family("LU")
        broken = Pfa(lu.alphabet, 1, [1], {s: [[1]] for s in (LEND, *lu.alphabet, REND)}, set(), set())
        found = sum(len(an.check_cequal_extension(broken, lu, 2, 11, 4, z).violations)
                    for z in sorted({s[7:] for s in lu.enumerate(2)}))
        report.add("cequal.extension.negative_control", found > 0, f"violations={found}")

        def rank_check(m):
            nf = cons.branching_normal_form(m)
            p = cons.nfa_to_pfa(nf)
            prefixes = list(_words(m.alphabet, 3))
            s = an.spanning_prefix_set(p, prefixes)
            # independent order: eliminate the prefixes in reverse
            reverse = an.spanning_prefix_set(p, prefixes[::-1])
            if len(s) != len(reverse) or len(s) > p.num_states:
                return f"{m.name}:rank"
            for x in prefixes:
                d = an.affine_decomposition(p, s, x)
                vec = [sum((a * an.prefix_vector(p, w).vector[i] for w, a in d.coefficients.items()),
                           Fraction(0)) for i in range(p.num_states)]
                if tuple(vec) != an.prefix_vector(p, x).vector or d.total != 1:
                    return f"{m.name}:{x!r}:affine"
        self.identity(report, "cequal.span_and_affine", self.machines(5), rank_check)

        par = family("Lparity")
        spanning = ["0$0#", "1$0#", "0$1#", "1$1#"]
        patterns = {an.sign_pattern(par, 2, spanning, y).bits for y in _words("01$", 3)}
        patterns.discard(None)
        brute = {"".join(str((int(w[0]) * int(y[0]) + int(w[2]) * int(y[2])) % 2) for w in spanning)
                 for y in ("".join(t) for t in itertools.product("01", "$", "01"))}
        report.add("sign_pattern.Lparity", patterns == brute,
                   f"patterns={len(patterns)} brute={len(brute)}")

        def funop(_):
            a, b = self.rng.randint(0, 10**12), self.rng.randint(1, 10**6)
            ref = {"add": a + b, "mul": a * b, "propersub": max(a - b, 0), "intdiv": a // b,
                   "max": max(a, b), "min": min(a, b)}
            for op, want in ref.items():
                if an.funop_apply(op, a, b) != want:
                    return f"{op}({a},{b})"
            if an.funop_apply("dec1", a) != max(a - 1, 0) or an.funop_apply("half", a) != a // 2:
                return f"unary({a})"
        self.identity(report, "funop.reference", range(200), funop)


SUITES = ("semantics", "constructions", "families", "analysis")


def run_suite(name: str, seed: int = 0, scale: str = "small", inject_fault: bool = False) -> SuiteReport:
    if name not in (*SUITES, "all"):
        raise UnknownSuite(f"unknown suite {name!r}; choose from {[*SUITES, 'all']}")
    if scale not in _SCALES:
        raise ValueError(f"unknown scale {scale!r}; choose from {sorted(_SCALES)}")
    report = SuiteReport(name, seed, scale)
    for suite in (SUITES if name == "all" else (name,)):
        runner = _Runner(seed, scale, inject_fault)
        getattr(runner, suite)(report)
    return report
