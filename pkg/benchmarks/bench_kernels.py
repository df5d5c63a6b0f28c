"""Benchmark the pure-Python kernels against the compiled extension.

Run from the repository root:

    python benchmarks/bench_kernels.py

Two workloads: truth-table evaluation of temporal formulas over long
traces, and the candidate-model sweep behind the bounded relational
search. Reports throughput per backend and the speedup.
"""

from __future__ import annotations

import random
import time
from array import array

from lexdialog import _kernel
from lexdialog._kernel import encode, pure
from lexdialog.formula import atom_names
from lexdialog.parser import parse
from lexdialog.signature import relational, temporal
from lexdialog.structures import Trace
from lexdialog.transform import expand_macros

try:
    from lexdialog._kernel import _speed
except ImportError:
    _speed = None


def bench_ltlf(repeats: int = 400, trace_len: int = 200):
    sig = temporal(["p", "q", "r"])
    formulas = [
        parse("G (p -> F q) & (r U (p & q)) & G F r", sig),
        parse("(p U q) R (q U r) | G (p <-> X N q)", sig),
        parse("F (p & X (q & X (r & F (p & q & r))))", sig),
    ]
    rng = random.Random(1)
    programs = []
    for f in formulas:
        order = tuple(sorted(atom_names(f)))
        program = encode.compile_temporal(f, order)
        t = Trace(tuple(
            frozenset(a for a in order if rng.random() < 0.5)
            for _ in range(trace_len)))
        masks = encode.encode_trace(t, order)
        programs.append((program, masks))

    cells = sum(p.n_nodes * len(m) for p, m in programs) * repeats

    def run_pure():
        for program, masks in programs:
            pure.ltlf_table(program.code, program.n_nodes, masks)

    def run_speed():
        for program, masks in programs:
            _speed.ltlf_table(program.code, program.n_nodes,
                              array("Q", masks))

    return "ltlf truth table", cells, run_pure, run_speed, repeats


def bench_fo_scan(sweep_size: int = 4):
    sig = relational(["P", "Q"], {"f": (0, 2)})
    sentence = expand_macros(parse(
        "forall x. forall y. (P(x) & !P(y) -> f(x) != f(y)) & "
        "(exists z. Q(z) & f(z) = 2 & z != x)", sig), sig)
    program = encode.compile_relational(sentence, sig)
    radii = encode.candidate_radii(sig, sweep_size)
    func_los = [lo for _, lo, _ in sig.functions]
    total = (2 ** (sweep_size * len(sig.predicates))) * (3 ** sweep_size)

    def run_pure():
        ext, digits = encode.first_candidate(sweep_size, 1)
        pure.fo_scan(program.code, program.root, program.n_slots, sweep_size,
                     len(sig.predicates), func_los, radii, ext, digits,
                     total + 1)

    def run_speed():
        ext, digits = encode.first_candidate(sweep_size, 1)
        _speed.fo_scan(program.code, program.root, program.n_slots,
                       sweep_size, len(sig.predicates),
                       array("q", func_los), array("q", radii), ext,
                       array("q", digits), total + 1)

    return "model sweep", total, run_pure, run_speed, 1


def timeit(fn, repeats: int) -> float:
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return time.perf_counter() - start


def main() -> None:
    print(f"active backend: {_kernel.active_backend()}")
    rows = []
    for name, units, run_pure, run_speed, repeats in (bench_ltlf(),
                                                      bench_fo_scan()):
        pure_s = timeit(run_pure, repeats)
        row = {"workload": name, "units": units,
               "pure": units / pure_s if pure_s else float("inf")}
        if _speed is not None:
            speed_s = timeit(run_speed, repeats)
            row["compiled"] = units / speed_s if speed_s else float("inf")
            row["speedup"] = pure_s / speed_s if speed_s else float("inf")
        rows.append(row)

    header = f"{'workload':<18}{'units':>12}{'pure/s':>14}"
    if _speed is not None:
        header += f"{'compiled/s':>14}{'speedup':>9}"
    else:
        header += "   (compiled kernels not built)"
    print(header)
    for row in rows:
        line = (f"{row['workload']:<18}{row['units']:>12,}"
                f"{row['pure']:>14,.0f}")
        if "compiled" in row:
            line += f"{row['compiled']:>14,.0f}{row['speedup']:>8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
