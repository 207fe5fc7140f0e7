"""Runtime scaling harness: time a solver over growing preimage sizes, fit the
log-log slope, write CSV and a figure."""
from __future__ import annotations

import csv
import logging
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .generators import random_graph, random_host, random_tree, random_weights
from .graph_core import ColoredInstance, Graph

log = logging.getLogger(__name__)

CSV_COLUMNS = ("suite", "pattern", "n", "repeat", "seconds", "verdict")
SUMMARY_COLUMNS = ("suite", "pattern", "n", "median_seconds")

# suite -> (default pattern, default sizes, host edge probability, expected slope)
SUITES = {
    "tw": ("twl:3,0,4", [8, 12, 16, 24, 32], 0.5, 4.0),
    "pw": ("twl:2,0,3", [8, 12, 16, 24, 32], 0.5, 4.0),
    "tree": ("tree:8", [128, 256, 512, 1024, 2048], 0.05, 2.0),
    "ew-tree": ("tree:6", [32, 48, 64, 96, 128], 0.3, None),
    "nw-tree": ("tree:6", [32, 48, 64, 96, 128], 0.3, None),
    "ew-tw": ("twl:2,0,3", [4, 6, 8, 10, 12], 0.5, None),
}


def parse_pattern(text: str, seed: int = 0) -> Graph:
    """twl:h,s1,s2 | tree:k | path:k | cycle:k | random:k,p"""
    from .hardness_gen.twl import twin_water_lily

    name, _, args = text.partition(":")
    vals = [a for a in args.split(",") if a]
    try:
        if name == "twl":
            h, s1, s2 = (int(v) for v in vals)
            return twin_water_lily(h, s1, s2)
        if name == "tree":
            return random_tree(np.random.default_rng(seed), int(vals[0]))
        if name == "path":
            k = int(vals[0])
            return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])
        if name == "cycle":
            k = int(vals[0])
            return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])
        if name == "random":
            return random_graph(np.random.default_rng(seed), int(vals[0]), float(vals[1]))
    except (ValueError, IndexError) as exc:
        raise ParameterError(f"bad pattern spec {text!r}: {exc}") from exc
    raise ParameterError(f"unknown pattern family {name!r}")


def fit_slope(ns, seconds) -> float:
    """Least-squares slope of log(seconds) against log(n)."""
    return float(np.polyfit(np.log(ns), np.log(seconds), 1)[0])


@dataclass
class BenchReport:
    suite: str
    pattern: str
    rows: list = field(default_factory=list)        # CSV_COLUMNS tuples
    medians: dict = field(default_factory=dict)     # n -> median seconds
    slope: float = float("nan")
    expected: float | None = None

    def summary(self) -> dict:
        return {"suite": self.suite, "pattern": self.pattern, "sizes": sorted(self.medians),
                "median_seconds": [self.medians[n] for n in sorted(self.medians)],
                "slope": self.slope, "expected_slope": self.expected}


def _runner(suite: str):
    from . import solver_unweighted as su
    from . import solver_weighted as sw

    return {
        "tw": lambda inst: su.solve_tw(inst),
        "pw": lambda inst: su.solve_pw(inst),
        "tree": lambda inst: su.solve_tree(inst),
        "ew-tree": lambda inst: sw.solve_ew_tree(inst),
        "nw-tree": lambda inst: sw.solve_nw_tree_fast(inst),
        "ew-tw": lambda inst: sw.solve_ew_tw(inst),
    }[suite]


def _instance(suite, H, n, p, rng, W):
    G, assignment, _ = random_host(rng, H, n, p, planted=True)
    inst = ColoredInstance.build(H, G, assignment)
    if suite.startswith("ew"):
        inst = inst.with_weights(random_weights(rng, inst, "edge", W))
    elif suite.startswith("nw"):
        inst = inst.with_weights(random_weights(rng, inst, "node", W))
    return inst


def run_bench(suite: str, sizes=None, pattern: str | None = None, repeats: int = 5,
              seed: int = 0, p: float | None = None, W: int = 8) -> BenchReport:
    """Median of `repeats` fresh runs per size; one untimed warm-up run first
    (it absorbs JIT compilation).  The clock covers the solver call on an
    instance whose dense adjacency blocks are already built."""
    if suite not in SUITES:
        raise ParameterError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    dpat, dsizes, dp, expected = SUITES[suite]
    pattern = pattern or dpat
    sizes = list(sizes or dsizes)
    p = dp if p is None else p
    H = parse_pattern(pattern, seed)
    rng = np.random.default_rng(seed)
    run = _runner(suite)
    run(_instance(suite, H, min(sizes), p, rng, W))
    rep = BenchReport(suite, pattern, expected=expected)
    for n in sizes:
        times = []
        for r in range(repeats):
            inst = _instance(suite, H, n, p, rng, W).prepare()
            t0 = time.perf_counter()
            verdict = run(inst)
            dt = time.perf_counter() - t0
            times.append(dt)
            rep.rows.append((suite, pattern, n, r, dt, bool(verdict)))
        rep.medians[n] = statistics.median(times)
        log.info("%s n=%d median %.4fs", suite, n, rep.medians[n])
    rep.slope = fit_slope(sizes, [rep.medians[n] for n in sizes]) if len(sizes) > 1 else float("nan")
    return rep


def write_csv(rep: BenchReport, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for row in rep.rows:
            w.writerow([row[0], row[1], row[2], row[3], f"{row[4]:.6f}", int(row[5])])


def write_figure(rep: BenchReport, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ns = sorted(rep.medians)
    ts = [rep.medians[n] for n in ns]
    fig, ax = plt.subplots(figsize=(5, 4))
    for row in rep.rows:
        ax.scatter(row[2], row[4], s=8, color="0.6")
    ax.loglog(ns, ts, "o-", label=f"median (slope {rep.slope:.2f})")
    if len(ns) > 1:
        a, b = np.polyfit(np.log(ns), np.log(ts), 1)
        xs = np.array([ns[0], ns[-1]], dtype=float)
        ax.loglog(xs, np.exp(b) * xs ** a, "--", label="least-squares fit")
    if rep.expected is not None:
        ref = ts[0] * (np.array(ns, dtype=float) / ns[0]) ** rep.expected
        ax.loglog(ns, ref, ":", label=f"n^{rep.expected:g}")
    ax.set_xlabel("preimage size n")
    ax.set_ylabel("seconds")
    ax.set_title(f"{rep.suite} on {rep.pattern}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_outputs(rep: BenchReport, out_dir) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"bench_{rep.suite}"
    paths = {"csv": out / f"{stem}.csv", "figure": out / f"{stem}.png"}
    write_csv(rep, paths["csv"])
    write_figure(rep, paths["figure"])
    return {k: str(v) for k, v in paths.items()}
