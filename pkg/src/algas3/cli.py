"""Command-line entry point: ``algas3 {run,check-rules,bench,selftest}``.

Exit codes: 0 clean, 1 configuration or rule errors, 2 safety alarm during
``run`` (pair mismatch or spectrum attack).  Summaries go to stdout and
diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import fru
from .fls import command_surface, fls_step
from .numerics import CrispSample
from .scenario import ScenarioConfig, ScenarioError, load_config, run_scenario
from .trace import RunSummary

EXIT_OK, EXIT_CONFIG, EXIT_ALARM = 0, 1, 2

# Fixed-point operations per corner per tick, counted from the pipeline:
# each MAC, add, compare, min/max, and shift-multiply is one operation.
OPS_PER_CORNER = {
    "fir_mac": 2 * 15,            # two 15-tap filters
    "pmu": 6,                     # diff, |diff| acc, 2 sums, 2 square sums
    "fuzzify": 8,                 # 4 terms per channel
    "infer": 16 * 4,              # min, 2 weight multiplies, max per rule
    "defuzzify": 256 * (4 + 3 + 2),  # 4 clips, 3 maxes, MAC + add per point
    "fru": 2 * 5,                 # rule predicates of the shipped table
    "fusion": 2,
}
OPS_PER_TICK = 4 * sum(OPS_PER_CORNER.values()) + 2 * 2  # + two pair checks

GOPS_DISCLAIMER = ("note: FPGA throughput (GOPS) is a hardware synthesis figure and "
                   "is out of scope; this is a software-model measurement only")


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_run(args) -> int:
    try:
        config = load_config(args.config)
        if args.seed is not None:
            config = config.with_(seed=args.seed)
        start = time.perf_counter()
        trace = run_scenario(config, parallel=args.parallel)
        wall = time.perf_counter() - start
    except ScenarioError as exc:
        _err(f"{args.config}: error: {exc}")
        return EXIT_CONFIG
    except fru.RuleError as exc:
        for d in exc.diagnostics:
            _err(d.format(str(config.rules)))
        return EXIT_CONFIG
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_CONFIG
    if args.trace:
        trace.save(args.trace)
    summary = RunSummary.from_trace(trace, wall)
    print(summary.format())
    return EXIT_ALARM if summary.safety_alarm else EXIT_OK


def cmd_check_rules(args) -> int:
    name = str(args.file)
    try:
        data = Path(args.file).read_bytes()
    except OSError as exc:
        _err(f"{name}: error: {exc}")
        return EXIT_CONFIG
    try:
        tree = fru.parse(data)
    except fru.RuleError as exc:
        for d in exc.diagnostics:
            _err(d.format(name))
        return EXIT_CONFIG
    # a file without declarations is checked against the shipped symbol table
    symbols = None if (tree.decls or tree.fls_rules) else fru.default_table().symbols
    try:
        table = fru.compile_rules(tree, symbols)
    except fru.RuleError as exc:
        for d in exc.diagnostics:
            _err(d.format(name))
        return EXIT_CONFIG
    for d in table.warnings:
        _err(d.format(name))
    if not table.rows and not tree.fls_rules:
        _err(f"{name}:1:1: warning: no rules")
    print(f"{name}: {len(table.rows)} flight rules, {table.symbols.gate_count} FLS rules")
    return EXIT_OK


def bench(ticks: int, parallel: bool = False) -> dict:
    config = ScenarioConfig(profile="linear", altitude=2000, rate=1, duration=ticks, seed=1)
    start = time.perf_counter()
    run_scenario(config, parallel=parallel)
    wall = time.perf_counter() - start
    return {
        "ticks": ticks,
        "seconds": wall,
        "ticks_per_s": ticks / wall if wall else float("inf"),
        "samples_per_s": 8 * ticks / wall if wall else float("inf"),
        "ops_per_tick": OPS_PER_TICK,
        "ops_per_s": OPS_PER_TICK * ticks / wall if wall else float("inf"),
    }


def cmd_bench(args) -> int:
    r = bench(args.ticks, args.parallel)
    print(f"ticks            : {r['ticks']}")
    print(f"wall time        : {r['seconds']:.3f} s")
    print(f"ticks/s          : {r['ticks_per_s']:,.0f}")
    print(f"samples/s        : {r['samples_per_s']:,.0f}")
    print(f"ops/tick         : {r['ops_per_tick']}")
    print(f"fixed-point ops/s: {r['ops_per_s']:,.0f}")
    print(GOPS_DISCLAIMER)
    return EXIT_OK


def selftest() -> list[tuple[str, bool]]:
    """Quick oracle checks; returns (name, passed) pairs."""
    from .fir import FirFilter, LATENCY
    from .hsdci import HsdciFrame, decode_frame, encode_frame

    rng = np.random.default_rng(2024)
    results = []

    x = rng.integers(0, 2048, size=4000)
    ref = np.clip((np.convolve(x, np.full(15, 2185))[:len(x)]) >> 15, 0, 2047)
    got = FirFilter(11).run(x)
    results.append(("fir matches direct convolution", got == ref.tolist()))
    timed = FirFilter(11, "timed").run(x)
    results.append(("timed fir lags functional by 15 ticks",
                    timed[LATENCY:] == got[:-LATENCY] and not any(timed[:LATENCY])))

    rb = fru.default_table().rulebase
    r_vals, l_vals = rng.integers(0, 2048, 64), rng.integers(0, 1024, 64)
    grid, _ = command_surface(rb, radar_values=r_vals, lidar_values=l_vals)
    scalar = [[fls_step(CrispSample(int(r), 11), CrispSample(int(v), 10), rb).value
               for v in l_vals] for r in r_vals]
    results.append(("fls batch matches scalar path", grid.tolist() == scalar))

    ok = True
    for _ in range(500):
        f = HsdciFrame(int(rng.integers(4)), int(rng.integers(1 << 32)),
                       int(rng.integers(2048)), int(rng.integers(8)))
        ok &= decode_frame(encode_frame(f)) == f
    results.append(("hsdci frame round trip", bool(ok)))

    cfg = ScenarioConfig(duration=96, seed=5)
    serial = run_scenario(cfg).to_csv()
    par = run_scenario(cfg, parallel=True).to_csv()
    results.append(("parallel and serial traces identical", serial == par))
    return results


def cmd_selftest(args) -> int:
    results = selftest()
    for name, passed in results:
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
    return EXIT_OK if all(p for _, p in results) else EXIT_CONFIG


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="algas3", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a landing scenario")
    run.add_argument("--config", required=True, help="scenario file")
    run.add_argument("--trace", help="write the per-tick trace CSV here")
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.add_argument("--parallel", action="store_true",
                     help="step the four corners concurrently")
    run.set_defaults(func=cmd_run)

    chk = sub.add_parser("check-rules", help="compile a rule file and report diagnostics")
    chk.add_argument("file")
    chk.set_defaults(func=cmd_check_rules)

    b = sub.add_parser("bench", help="measure pipeline throughput")
    b.add_argument("--ticks", type=int, default=2000)
    b.add_argument("--parallel", action="store_true")
    b.set_defaults(func=cmd_bench)

    st = sub.add_parser("selftest", help="run the built-in oracle checks")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
