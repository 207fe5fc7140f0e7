"""Acceptance criteria.  Each test prints one PASS/FAIL line (run with -s or see
the captured output in the report); thresholds are the stated ones."""
import math
import time
from collections import Counter

import numpy as np
import pytest

from subiso.bench import run_bench
from subiso.decomposition import exact_pathwidth, exact_treewidth
from subiso.equivalence import (colored_to_uncolored, colored_to_uncolored_weighted,
                                gadget_pattern, uncolored_to_colored)
from subiso.generators import (plant_zero_weight, random_colored_hypergraph,
                               random_colored_instance, random_graph, random_host, random_tree,
                               random_uncolored_instance, random_weights)
from subiso.graph_core import (ColoredInstance, WeightFn, configuration_weight,
                               is_valid_configuration)
from subiso.hardness_gen import (avg_free_set, find_hyperclique, fitted_constant,
                                 hyperclique_to_colsubiso, hyperclique_to_ew_colsubiso,
                                 hyperclique_to_subsetsum, is_average_free_exhaustive,
                                 kwise_mp_to_hyperclique, ksum_to_subsetsum, requested_bound,
                                 twin_water_lily, twl_width_bounds)
from subiso.oracle import (brute_hyperclique, brute_kwise_product, brute_ksum,
                           brute_solve_colored, brute_solve_ew_colored, brute_solve_ew_uncolored,
                           brute_solve_uncolored, brute_subset_sum, naive_kwise_product_poly)
from subiso.solver_unweighted import solve_pw, solve_tree, solve_tw
from subiso.solver_weighted import (node_to_edge_weights, solve_ew_pw, solve_ew_tree,
                                    solve_ew_tw, solve_nw_pw_fast, solve_nw_tree_fast)
from subiso.tensor_engine import (PolyTensor, WeightSeq, bool_convolution, kwise_product_bool,
                                  kwise_product_poly)


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, f"{name}: {detail}"
    return emit


def _colored(rng, k, n, forest=False):
    if forest:
        H = random_tree(rng, k)
        G, a, _ = random_host(rng, H, n, float(rng.uniform(0.1, 0.6)),
                              planted=rng.random() < 0.5)
        return ColoredInstance.build(H, G, a)
    return random_colored_instance(rng, k, n, p_pattern=rng.uniform(0.3, 0.9),
                                   p_host=rng.uniform(0.1, 0.6), planted=rng.random() < 0.5,
                                   ragged=rng.random() < 0.3)


def test_unweighted_oracle_equivalence(report):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    bad, answers, trees = [], Counter(), 0
    for it in range(500):
        k, n = int(rng.integers(1, 7)), int(rng.integers(1, 9))
        inst = _colored(rng, k, n, forest=rng.random() < 0.4)
        ref = brute_solve_colored(inst)
        solvers = [solve_tw, solve_pw] + ([solve_tree] if inst.pattern.is_forest() else [])
        trees += inst.pattern.is_forest()
        for fn in solvers:
            ok, R = fn(inst, witness=True)
            if ok != ref or (ok and not is_valid_configuration(inst, R)):
                bad.append((it, fn.__name__))
        answers[ref] += 1
    dt = time.perf_counter() - t0
    report("unweighted oracle equivalence", not bad and dt < 60,
           f"500 instances ({answers[True]} YES, {trees} forests), {len(bad)} disagreements, "
           f"{dt:.1f}s (limit 60s)")


def test_weighted_oracle_equivalence(report):
    rng = np.random.default_rng(202)
    t0 = time.perf_counter()
    bad, answers, runs = [], Counter(), Counter()
    for it in range(500):
        k, n, W = int(rng.integers(1, 7)), int(rng.integers(1, 7)), int(rng.integers(1, 9))
        inst = _colored(rng, k, n, forest=rng.random() < 0.4)
        kind = "node" if rng.random() < 0.5 else "edge"
        inst = inst.with_weights(random_weights(rng, inst, kind, W))
        if rng.random() < 0.6:
            inst = plant_zero_weight(rng, inst)
        target = 0 if rng.random() < 0.7 else int(rng.integers(-5, 6))
        ref = brute_solve_ew_colored(inst, target)
        forest = inst.pattern.is_forest()
        solvers = [solve_ew_tw, solve_ew_pw]
        if forest:
            solvers.append(solve_ew_tree)
        if kind == "node":
            solvers.append(solve_nw_pw_fast)
            if forest:
                solvers.append(solve_nw_tree_fast)
        for fn in solvers:
            ok, R = fn(inst, target, witness=True)
            runs[fn.__name__] += 1
            if ok != ref or (ok and not (is_valid_configuration(inst, R)
                                         and configuration_weight(inst, R) == target)):
                bad.append((it, fn.__name__))
        answers[ref] += 1
    dt = time.perf_counter() - t0
    report("weighted oracle equivalence", not bad and dt < 300 and len(runs) == 5,
           f"500 instances ({answers[True]} YES), runs per solver {dict(runs)}, "
           f"{len(bad)} disagreements, {dt:.1f}s (limit 300s)")


def _poly(rng, q, n, D):
    L = int(rng.integers(1, D + 2))
    low = int(rng.integers(-D, D - L + 2))
    c = rng.integers(-3, 4, size=(n,) * q + (L,)) * (rng.random((n,) * q + (L,)) < 0.4)
    return PolyTensor(c, low, degree_bound=D)


def _poly_dict(P):
    out = {}
    for idx in np.ndindex(*(P.side,) * P.order):
        e = P.entry(idx)
        if e:
            out[idx] = e
    return out


def test_tensor_kernels(report):
    rng = np.random.default_rng(303)
    fails = Counter()
    for q in (2, 3, 4):
        for _ in range(200):
            n = int(rng.integers(1, 5))
            ts = [rng.random((n,) * q) < rng.uniform(0.1, 0.9) for _ in range(q)]
            fails["bool", q] += not np.array_equal(kwise_product_bool(ts), brute_kwise_product(ts))
            D = int(rng.integers(1, 9))
            ps = [_poly(rng, q, n, D) for _ in range(q)]
            got = _poly_dict(kwise_product_poly(ps, degree_bound=D))
            fails["poly", q] += got != naive_kwise_product_poly([_poly_dict(p) for p in ps], n)
    for _ in range(200):
        f = {int(x) for x in rng.integers(-8, 9, int(rng.integers(0, 6)))}
        g = {int(x) for x in rng.integers(-8, 9, int(rng.integers(0, 6)))}
        out = bool_convolution(WeightSeq.from_set(f), WeightSeq.from_set(g)).to_set()
        fails["conv"] += out != {a + b for a in f for b in g}
    total = sum(fails.values())
    report("tensor kernels", total == 0,
           f"bool/poly x q in {{2,3,4}} x 200 plus 200 convolutions, failures {dict(+fails)}")


def test_reduction_soundness(report):
    rng = np.random.default_rng(404)
    counts, bad = Counter(), Counter()

    def check(name, got, ref):
        counts[name] += 1
        bad[name] += got != ref
        return ref

    yes = Counter()
    for _ in range(60):
        N = int(rng.integers(1, 4))
        hg = random_colored_hypergraph(rng, 3, 6, N, float(rng.uniform(0.5, 1.0)),
                                       planted=rng.random() < 0.5)
        ref = brute_hyperclique(hg) is not None
        yes["hc->colsubiso"] += check("hc->colsubiso",
                                      brute_solve_colored(hyperclique_to_colsubiso(hg, 3, 2)), ref)
    for _ in range(60):
        hg = random_colored_hypergraph(rng, 2, 4, int(rng.integers(1, 4)),
                                       float(rng.uniform(0.3, 0.95)), planted=rng.random() < 0.4)
        ref = brute_hyperclique(hg) is not None
        inst = hyperclique_to_ew_colsubiso(hg, 2, 1, 1, 0.5, 0.5)
        yes["hc->ew-colsubiso"] += check("hc->ew-colsubiso", brute_solve_ew_colored(inst, 0), ref)
    for _ in range(60):
        k, N, D = int(rng.integers(1, 5)), int(rng.integers(1, 4)), int(rng.integers(1, 9))
        sets = [[int(x) for x in rng.integers(0, D + 1, N)] for _ in range(k)]
        T = int(rng.integers(0, k * D + 2))
        inst = ksum_to_subsetsum(sets, T)
        yes["ksum->subsetsum"] += check("ksum->subsetsum",
                                        brute_subset_sum(inst.values, inst.T), brute_ksum(sets, T))
    configs = [(2, 1, 2, 3), (2, 1, 4, 2), (3, 1, 3, 2)]
    for i in range(60):
        h, r1, K, N = configs[i % 3]
        hg = random_colored_hypergraph(rng, h, K, N, float(rng.uniform(0.05, 0.7)),
                                       planted=rng.random() < 0.3)
        inst = hyperclique_to_subsetsum(hg, h, r1, 0.5)
        yes["hc->subsetsum"] += check("hc->subsetsum", brute_subset_sum(inst.values, inst.T),
                                      brute_hyperclique(hg) is not None)
    while counts["colored->uncolored"] < 60:
        k = int(rng.integers(3, 5))
        H = random_graph(rng, k, 0.8)
        if exact_treewidth(H)[0] < 2:
            continue
        inst = random_colored_instance(rng, k, int(rng.integers(1, 4)), pattern=H,
                                       p_host=rng.uniform(0.2, 0.7), planted=rng.random() < 0.5,
                                       ragged=rng.random() < 0.3)
        U, _, _ = colored_to_uncolored(inst)
        yes["colored->uncolored"] += check("colored->uncolored", brute_solve_uncolored(U),
                                           brute_solve_colored(inst))
    for i in range(60):
        inst = random_colored_instance(rng, int(rng.integers(1, 5)), int(rng.integers(1, 4)),
                                       p_pattern=rng.uniform(0.3, 1), p_host=rng.uniform(0.2, 0.8),
                                       planted=rng.random() < 0.6, ragged=rng.random() < 0.3)
        inst = inst.with_weights(random_weights(rng, inst, "node" if i % 2 else "edge", 4))
        if rng.random() < 0.6:
            inst = plant_zero_weight(rng, inst)
        U = colored_to_uncolored_weighted(inst)
        yes["colored->uncolored weighted"] += check(
            "colored->uncolored weighted", brute_solve_ew_uncolored(U, 0),
            brute_solve_ew_colored(inst, 0))
    while counts["node->edge weights"] < 60:
        inst = random_colored_instance(rng, int(rng.integers(2, 5)), int(rng.integers(1, 4)),
                                       p_pattern=rng.uniform(0.4, 1), p_host=rng.uniform(0.3, 0.9),
                                       planted=rng.random() < 0.6)
        if inst.pattern.isolated_vertices():
            continue
        vals = [int(rng.integers(-4, 5)) if inst.host.degree(v) else 0
                for v in range(inst.host.vertex_count)]
        inst = inst.with_weights(WeightFn.node(vals))
        if rng.random() < 0.6:
            inst = plant_zero_weight(rng, inst)
            if any(w and not inst.host.degree(v) for v, w in enumerate(inst.weights.values)):
                continue
        out = node_to_edge_weights(inst)
        yes["node->edge weights"] += check("node->edge weights", brute_solve_ew_colored(out, 0),
                                           brute_solve_ew_colored(inst, 0))
    detail = ", ".join(f"{k} {counts[k] - bad[k]}/{counts[k]} ({yes[k]} YES)" for k in counts)
    report("reduction soundness", sum(bad.values()) == 0 and min(counts.values()) >= 50, detail)


def test_hyperclique_product_equivalence(report):
    rng = np.random.default_rng(505)
    mp_bad = 0
    for i in range(100):
        k = 2 + i % 2
        n = int(rng.integers(1, 5))
        ts = [rng.random((n,) * k) < rng.uniform(0.2, 0.8) for _ in range(k)]
        mp_bad += not np.array_equal(kwise_mp_to_hyperclique(ts), brute_kwise_product(ts))
    fh_bad = found = 0
    for i in range(100):
        k = 2 + i % 2
        hg = random_colored_hypergraph(rng, k, k + 1, int(rng.integers(1, 4)),
                                       float(rng.uniform(0.3, 0.9)))
        ref = brute_hyperclique(hg)
        got = find_hyperclique(hg)
        fh_bad += (got is None) != (ref is None) or (got is not None and not hg.is_clique(got))
        found += got is not None
    report("hyperclique <-> k-wise product", mp_bad == 0 and fh_bad == 0,
           f"product via cliques {100 - mp_bad}/100, find_hyperclique {100 - fh_bad}/100 "
           f"({found} with a clique)")


def test_structural_claims(report):
    viol = []
    for h in (2, 3):
        for s1 in range(0, 4):
            for s2 in range(0, 6):
                if s1 + s2 == 0:
                    continue
                G = twin_water_lily(h, s1, s2)
                tw_b, pw_b = twl_width_bounds(h, s1, s2)
                tw, pw = exact_treewidth(G, cap=64)[0], exact_pathwidth(G, cap=64)[0]
                if tw > tw_b or pw > pw_b:
                    viol.append((h, s1, s2, tw, pw))
    tw3 = exact_treewidth(twin_water_lily(3, 0, 3), cap=64)[0]
    tw4 = exact_treewidth(twin_water_lily(3, 0, 4), cap=64)[0]
    rng = np.random.default_rng(606)
    gadget_bad = checked = 0
    while checked < 20:
        H = random_graph(rng, int(rng.integers(3, 7)), float(rng.uniform(0.4, 0.9)))
        t = exact_treewidth(H)[0]
        if t < 2:
            continue
        checked += 1
        gadget_bad += exact_treewidth(gadget_pattern(H)[0])[0] != t
    report("structural claims", not viol and tw3 == 3 and tw4 == 3 and gadget_bad == 0,
           f"TWL bound violations {viol}, tw(TWL(3,0,3))={tw3}, tw(TWL(3,0,4))={tw4}, "
           f"gadget treewidth preserved {checked - gadget_bad}/{checked}")


def test_average_free_sets(report):
    bad, lines = [], []
    for k in (2, 3):
        for m in range(1, 41):
            s = avg_free_set(m, k, 0.5)
            if len(s) != m or not is_average_free_exhaustive(s.elements, k):
                bad.append((k, m))
        s = avg_free_set(40, k, 0.5)
        lines.append(f"k={k} m=40 max={s.elements[-1]} bound={requested_bound(40, k, 0.5)} "
                     f"fitted c={fitted_constant(s):.3f}")
    report("average-free sets", not bad, f"failures {bad}; " + "; ".join(lines))


def test_color_coding(report):
    rng = np.random.default_rng(707)
    t0 = time.perf_counter()
    hits = invalid = 0
    for i in range(100):
        U = random_uncolored_instance(rng, 4, 12, p_pattern=0.6, p_host=0.2, planted=True)
        r = uncolored_to_colored(U, seed=1000 + i)
        if r.found:
            phi = r.witness
            ok = len(set(phi.values())) == 4 and all(U.host.has_edge(phi[a], phi[b])
                                                    for a, b in U.pattern.edges)
            invalid += not ok
            hits += ok
    false_pos = negatives = 0
    while negatives < 30:
        U = random_uncolored_instance(rng, 4, 12, p_pattern=0.8, p_host=0.15)
        if brute_solve_uncolored(U):
            continue
        negatives += 1
        false_pos += uncolored_to_colored(U, seed=negatives).found
    dt = time.perf_counter() - t0
    report("color coding", hits >= 95 and invalid == 0 and false_pos == 0,
           f"detected {hits}/100 planted, invalid witnesses {invalid}, "
           f"false positives {false_pos}/{negatives} NO instances, {dt:.1f}s")


@pytest.mark.slow
@pytest.mark.parametrize("suite,lo,hi", [("tw", 3.3, 4.7), ("tree", 1.5, 2.5)])
def test_scaling(report, suite, lo, hi):
    t0 = time.perf_counter()
    rep = run_bench(suite)
    dt = time.perf_counter() - t0
    meds = ", ".join(f"{n}:{rep.medians[n]:.4f}s" for n in sorted(rep.medians))
    report(f"scaling {suite}", lo <= rep.slope <= hi and dt < 600,
           f"{rep.pattern} slope {rep.slope:.2f} (want [{lo}, {hi}]), medians {meds}, "
           f"{dt:.0f}s (limit 600s)")
    assert math.isfinite(rep.slope)
