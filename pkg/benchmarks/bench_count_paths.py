"""Compare the compiled and pure-Python counting kernels on random machines.

    python3 benchmarks/bench_count_paths.py --machines 200 --length 40
"""

import argparse
import random
import timeit
from array import array

from cfa import _pykernels, kernels
from cfa.machines import REND
from cfa.randomgen import random_nfa, random_word


def workload(seed: int, machines: int, length: int, states: int):
    rng = random.Random(seed)
    jobs = []
    for _ in range(machines):
        m = random_nfa(rng, max_states=states, min_states=states // 2)
        offsets, targets, kind, index, _ = m.table
        x = random_word(rng, m.alphabet, length)
        word = array("i", [0, *(index[c] for c in x), index[REND]])
        jobs.append((offsets, targets, kind, m.num_states, m.start, word))
    return jobs


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--machines", type=int, default=200)
    parser.add_argument("--length", type=int, default=40)
    parser.add_argument("--states", type=int, default=12)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    jobs = workload(args.seed, args.machines, args.length, args.states)
    backends = {"python": _pykernels.count_table}
    if kernels._ckernels is not None:
        backends["cython"] = kernels.count_table
    results = {name: [fn(*job) for job in jobs] for name, fn in backends.items()}
    if len(results) == 2:
        assert results["python"] == results["cython"], "backends disagree"

    timings = {}
    for name, fn in backends.items():
        best = min(timeit.repeat(lambda: [fn(*job) for job in jobs], number=1, repeat=args.repeat))
        timings[name] = best
        print(f"{name:7s} {best * 1e3:9.2f} ms for {len(jobs)} machines")
    if len(timings) == 2:
        print(f"speedup {timings['python'] / timings['cython']:.1f}x")
    else:
        print("compiled kernel unavailable; only the pure-Python backend was timed")


if __name__ == "__main__":
    main()
