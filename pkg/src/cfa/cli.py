"""Command-line front end: ``cfa <command> ...``."""

from __future__ import annotations

import argparse
import itertools
import sys

from . import analysis as an
from . import constructions as cons
from .errors import CfaError
from .families import build_machine, family, family_names
from .harness import SUITES, run_suite
from .machines import Dft, Dpda, Nfa, Pfa, parse_machine, serialize_machine
from .semantics import count_paths, dpda_run, pfa_probabilities, transduce


class UsageError(CfaError):
    pass


def _load(path: str):
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return parse_machine(text)


def _load_kind(path: str, kind, label: str):
    m = _load(path)
    if not isinstance(m, kind):
        raise UsageError(f"{path}: expected a {label}, got {type(m).__name__.lower()}")
    return m


def _emit(m, out: str | None) -> None:
    text = serialize_machine(m)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_hom(text: str) -> dict[str, str]:
    h = {}
    for item in filter(None, text.split(",")):
        key, sep, image = item.partition("=")
        if not sep or not key:
            raise UsageError(f"bad homomorphism entry {item!r}; expected sym=word")
        h[key] = image
    return h


def cmd_count(args) -> int:
    c = count_paths(_load_kind(args.machine, Nfa, "nfa"), args.input)
    if args.command == "gap":
        print(c.gap)
    else:
        print(f"accepting={c.accepting} rejecting={c.rejecting} improper={c.improper} gap={c.gap}")
    return 0


def cmd_pfa(args) -> int:
    acc, rej, other = pfa_probabilities(_load_kind(args.machine, Pfa, "pfa"), args.input)
    print(f"p_acc={acc} p_rej={rej} p_other={other}")
    return 0


def cmd_run(args) -> int:
    m = _load(args.machine)
    if isinstance(m, Dft):
        print(transduce(m, args.input))
    elif isinstance(m, Dpda):
        r = dpda_run(m, args.input, step_cap=args.step_cap)
        print(f"verdict={r.verdict.value} steps={r.steps} turns={r.turns} max_height={r.max_height}")
    else:
        raise UsageError("run expects a dft or dpda; use count/gap/pfa for other kinds")
    return 0


_UNARY = {
    "complete": cons.complete_paths,
    "normal-form": lambda m: cons.branching_normal_form(m).machine,
    "flip": cons.flip,
    "split": cons.split_rejecting,
    "square": cons.square_gap,
    "complement": cons.complement_gapwise,
    "to-pfa": lambda m: cons.nfa_to_pfa(cons.branching_normal_form(m)),
}
_BINARY = {
    "sum": cons.disjoint_sum,
    "product": cons.sync_product,
    "meet": cons.meet_cequal,
    "difference": cons.gap_of_difference,
    "gap-sum": cons.gap_sum,
    "gap-product": cons.gap_product,
}
_TRANSDUCER = {"counter": cons.counter_from_transducer, "gapcounter": cons.gap_from_transducer}
_HOM = {"image": cons.hom_image, "inverse": cons.hom_inverse}
CONSTRUCT_OPS = sorted([*_UNARY, *_BINARY, *_TRANSDUCER, *_HOM])


def cmd_construct(args) -> int:
    op, inputs = args.op, args.inputs
    arity = 2 if op in _BINARY else 1
    if len(inputs) != arity:
        raise UsageError(f"{op} takes {arity} input machine(s), got {len(inputs)}")
    if op in _TRANSDUCER:
        out = _TRANSDUCER[op](_load_kind(inputs[0], Dft, "dft"))
    else:
        machines = [_load_kind(p, Nfa, "nfa") for p in inputs]
        if op in _HOM:
            if not args.hom:
                raise UsageError(f"{op} needs --hom")
            out = _HOM[op](machines[0], _parse_hom(args.hom))
        elif op in _BINARY:
            out = _BINARY[op](*machines)
        else:
            out = _UNARY[op](machines[0])
    _emit(out, args.output)
    return 0


def cmd_family(args) -> int:
    fam = family(args.name)
    if args.action == "gen":
        for s in fam.enumerate(args.n, args.max_len):
            print(s)
    elif args.action == "classify":
        if args.input is None:
            raise UsageError("classify needs --input")
        print(fam.classify(args.n, args.input).value)
    else:
        _emit(build_machine(args.name, args.n), args.output)
    return 0


def _analysis_pfa(path: str) -> Pfa:
    """A PFA file is used as is; an NFA is read as an equality-gap machine and bridged."""
    m = _load(path)
    if isinstance(m, Pfa):
        return m
    if isinstance(m, Nfa):
        return cons.nfa_to_pfa(cons.balanced_normal_form(m))
    raise UsageError(f"{path}: expected a pfa or nfa")


def cmd_analyze(args) -> int:
    if args.sub == "cequal-extension":
        report = an.check_cequal_extension(_analysis_pfa(args.machine), family(args.name), args.n,
                                           args.m, args.l, args.z)
        print("\n".join(report.lines()))
        return 0 if report.ok else 1
    if args.sub == "span":
        p = _analysis_pfa(args.machine)
        prefixes = ["".join(w) for k in range(args.max_len + 1)
                    for w in itertools.product(p.alphabet, repeat=k)]
        spanning = an.spanning_prefix_set(p, prefixes)
        print(f"prefixes={len(prefixes)} rank={len(spanning)} states={p.num_states}")
        for w in spanning:
            print(f"span {w!r}")
        return 0
    fam = family(args.name)
    spanning = args.spanning.split(",") if args.spanning else []
    for k in range(args.suffix_len + 1):
        for y in ("".join(t) for t in itertools.product(fam.alphabet, repeat=k)):
            pattern = an.sign_pattern(fam, args.n, spanning, y)
            if pattern.defined:
                print(f"{y!r} {pattern.bits}")
    return 0


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed, args.scale, inject_fault=args.inject_fault)
    sys.stdout.write(report.render())
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfa", description="Path counting for finite automata.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("count", "gap"):
        p = sub.add_parser(name, help=f"{name} paths of an nfa on an input")
        p.add_argument("--machine", required=True)
        p.add_argument("--input", required=True)
        p.set_defaults(func=cmd_count)

    p = sub.add_parser("pfa", help="exact acceptance probabilities of a pfa")
    p.add_argument("--machine", required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_pfa)

    p = sub.add_parser("run", help="run a transducer or pushdown machine")
    p.add_argument("--machine", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--step-cap", type=int, default=10**6)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("construct", help="apply a machine construction")
    p.add_argument("op", choices=CONSTRUCT_OPS)
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output")
    p.add_argument("--hom", help="homomorphism as sym=word,sym=word")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("family", help="promise families")
    p.add_argument("action", choices=("gen", "classify", "machine"))
    p.add_argument("--name", required=True, choices=family_names())
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-len", type=int)
    p.add_argument("--input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("analyze", help="prefix-vector analyses")
    asub = p.add_subparsers(dest="sub", required=True)
    a = asub.add_parser("cequal-extension")
    a.add_argument("--machine", required=True)
    a.add_argument("--name", required=True, choices=family_names())
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--m", type=int, required=True)
    a.add_argument("--l", type=int, required=True)
    a.add_argument("--z", required=True)
    a = asub.add_parser("span")
    a.add_argument("--machine", required=True)
    a.add_argument("--max-len", type=int, default=3)
    a = asub.add_parser("sign-pattern")
    a.add_argument("--name", required=True, choices=family_names())
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--spanning", required=True, help="comma-separated prefixes")
    a.add_argument("--suffix-len", type=int, default=3)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all", choices=(*SUITES, "all"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", default="small", choices=("small", "full"))
    p.add_argument("--inject-fault", action="store_true", help="swap in broken constructions")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CfaError, OSError, ValueError) as e:
        print(f"cfa: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
