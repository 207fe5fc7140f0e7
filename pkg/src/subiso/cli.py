"""Command-line entry point: generate, solve, oracle, reduce, bench.

Exit codes: 0 yes, 1 no, 2 error.  Verdicts go to stdout; diagnostics and the
dispatch decision go to stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .errors import SubisoError, UnsupportedOperationError
from .instance_io import InstanceFile, load

log = logging.getLogger("subiso.cli")

YES, NO, ERROR = 0, 1, 2


# ------------------------------------------------------------------ generate


def _gen_twl(a, rng):
    from .hardness_gen.twl import twin_water_lily

    return twin_water_lily(a.h, a.s1, a.s2), {"h": a.h, "s1": a.s1, "s2": a.s2}


def _gen_planted(a, rng):
    from .bench import parse_pattern
    from .generators import (plant_zero_weight, random_graph, random_host,
                             random_weights)
    from .graph_core import ColoredInstance

    H = parse_pattern(a.pattern, a.seed) if a.pattern else random_graph(rng, a.k, a.p_pattern)
    G, assignment, _ = random_host(rng, H, a.n, a.p, planted=not a.no_plant)
    inst = ColoredInstance.build(H, G, assignment)
    if a.weights != "none":
        inst = inst.with_weights(random_weights(rng, inst, a.weights, a.W))
        if not a.no_plant:
            inst = plant_zero_weight(rng, inst, a.target)
    params = {"k": H.vertex_count, "n": a.n, "p": a.p, "pattern": a.pattern,
              "p_pattern": a.p_pattern, "planted": not a.no_plant, "weights": a.weights,
              "W": a.W}
    return inst, params


def _gen_uncolored(a, rng):
    from .generators import random_uncolored_instance, random_weights

    inst = random_uncolored_instance(rng, a.k, a.n, a.p_pattern, a.p, planted=not a.no_plant)
    if a.weights != "none":
        inst = type(inst)(inst.pattern, inst.host, random_weights(rng, inst, a.weights, a.W))
    params = {"k": a.k, "n": a.n, "p": a.p, "p_pattern": a.p_pattern,
              "planted": not a.no_plant, "weights": a.weights, "W": a.W}
    return inst, params


def _hypergraph(a, rng, classes):
    from .generators import random_colored_hypergraph

    return random_colored_hypergraph(rng, a.h, classes, a.size, a.p, planted=a.planted)


def _gen_hypergraph(a, rng):
    hg = _hypergraph(a, rng, a.classes)
    return hg, {"h": a.h, "classes": a.classes, "size": a.size, "p": a.p, "planted": a.planted}


def _gen_hc_reduce(a, rng):
    from .hardness_gen.colsubiso import hyperclique_to_colsubiso

    hg = _hypergraph(a, rng, a.h * a.r)
    params = {"h": a.h, "r": a.r, "size": a.size, "p": a.p, "planted": a.planted}
    return hyperclique_to_colsubiso(hg, a.h, a.r), params


def _gen_hc_ew_reduce(a, rng):
    from fractions import Fraction

    from .hardness_gen.colsubiso import hyperclique_to_ew_colsubiso

    beta = Fraction(a.beta)
    classes = a.h * a.r1 * a.r2 * beta.denominator
    hg = _hypergraph(a, rng, classes)
    params = {"h": a.h, "r1": a.r1, "r2": a.r2, "beta": str(beta), "eps": a.eps,
              "size": a.size, "p": a.p, "planted": a.planted}
    return hyperclique_to_ew_colsubiso(hg, a.h, a.r1, a.r2, beta, a.eps), params


def _gen_hc_subsetsum(a, rng):
    from .hardness_gen.subset_sum import hyperclique_to_subsetsum

    hg = _hypergraph(a, rng, a.h * a.r1 * a.groups)
    params = {"h": a.h, "r1": a.r1, "groups": a.groups, "eps": a.eps, "size": a.size,
              "p": a.p, "planted": a.planted}
    return hyperclique_to_subsetsum(hg, a.h, a.r1, a.eps), params


GENERATORS = {
    "twl": _gen_twl,
    "planted": _gen_planted,
    "uncolored": _gen_uncolored,
    "hypergraph": _gen_hypergraph,
    "hc-reduce": _gen_hc_reduce,
    "hc-ew-reduce": _gen_hc_ew_reduce,
    "hc-subsetsum": _gen_hc_subsetsum,
}


def _emit(f: InstanceFile, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(f.dumps())
    else:
        Path(out).write_text(f.dumps(), encoding="utf-8")


def cmd_generate(a) -> int:
    from .equivalence import root_seed

    a.seed = root_seed(a.seed)
    rng = np.random.default_rng(a.seed)
    obj, params = GENERATORS[a.family](a, rng)
    target = getattr(a, "target", 0) or 0
    f = InstanceFile.wrap(obj, {"generator": a.family,
                                "parameters": dict(sorted(params.items())),
                                "seed": a.seed}, target=target)
    _emit(f, a.out)
    return 0


# --------------------------------------------------------------- solve/oracle


def _report(ok: bool, witness, show: bool) -> int:
    print("YES" if ok else "NO")
    if show and ok and witness is not None:
        if isinstance(witness, dict):
            witness = {str(k): int(v) for k, v in sorted(witness.items())}
        else:
            witness = [int(v) for v in witness]
        print(json.dumps({"witness": witness}))
    return YES if ok else NO


def _check_witness(f: InstanceFile, inst, witness, target) -> None:
    """Re-validate a witness against the instance; a mismatch is a bug."""
    from .graph_core import configuration_weight, is_valid_configuration

    if witness is None:
        return
    if f.kind.startswith("colored"):
        ok = is_valid_configuration(inst, witness)
        if ok and inst.weights is not None:
            ok = configuration_weight(inst, witness) == target
    elif f.kind.startswith("uncolored"):
        from .oracle import embedding_weight

        H, G = inst.pattern, inst.host
        ok = (len(set(witness.values())) == H.vertex_count
              and all(G.has_edge(witness[a], witness[b]) for a, b in H.edges))
        if ok and inst.weights is not None:
            ok = embedding_weight(inst, witness) == target
    elif f.kind == "hypergraph":
        ok = inst.is_clique(witness)
    else:
        ok = sum(inst.values[i] for i in witness) == inst.T
    if not ok:
        raise SubisoError("internal error: produced witness fails validation")


def _target(a, f: InstanceFile) -> int:
    return f.target if a.target is None else a.target


def cmd_solve(a) -> int:
    from .dispatch import choose, solve
    from .equivalence import uncolored_to_colored
    from .hardness_gen.kwise import find_hyperclique
    from .hardness_gen.subset_sum import subset_sum_dp

    f = load(a.file)
    inst = f.instance()
    target = _target(a, f)
    if f.kind in ("colored", "colored_weighted"):
        algo = choose(inst, a.algo)
        print(f"algo: {algo}", file=sys.stderr)
        res = solve(inst, algo, target=target if inst.weights is not None else 0, witness=True)
        ok, wit = res
    elif f.kind in ("uncolored", "uncolored_weighted"):
        print(f"algo: color-coding ({a.mode}) over {a.algo}", file=sys.stderr)
        r = uncolored_to_colored(inst, mode=a.mode, trials=a.trials, seed=a.seed,
                                 target=target, algo=a.algo)
        ok, wit = r.found, r.witness
    elif f.kind == "subset_sum":
        print("algo: subset-sum table", file=sys.stderr)
        ok, wit = subset_sum_dp(inst.values, inst.T, witness=True)
    elif f.kind == "hypergraph":
        print("algo: hyperclique self-reduction", file=sys.stderr)
        wit = find_hyperclique(inst)
        ok = wit is not None
    else:
        raise UnsupportedOperationError(f"nothing to solve for kind {f.kind!r}")
    if ok:
        _check_witness(f, inst, wit, target)
    return _report(ok, wit, a.witness)


def cmd_oracle(a) -> int:
    from . import oracle

    f = load(a.file)
    inst = f.instance()
    target = _target(a, f)
    kind = f.kind
    if kind == "colored":
        ok, wit = oracle.brute_solve_colored(inst, witness=True)
    elif kind == "colored_weighted":
        ok, wit = oracle.brute_solve_ew_colored(inst, target, witness=True)
    elif kind == "uncolored":
        ok, wit = oracle.brute_solve_uncolored(inst, witness=True)
    elif kind == "uncolored_weighted":
        ok, wit = oracle.brute_solve_ew_uncolored(inst, target, witness=True)
    elif kind == "hypergraph":
        wit = oracle.brute_hyperclique(inst)
        ok = wit is not None
    elif kind == "subset_sum":
        ok, wit = oracle.brute_subset_sum(inst.values, inst.T), None
    else:
        raise UnsupportedOperationError(f"no oracle for kind {kind!r}")
    return _report(ok, wit, a.witness)


# -------------------------------------------------------------------- reduce


def cmd_reduce(a) -> int:
    from .equivalence import colored_to_uncolored, colored_to_uncolored_weighted
    from .hardness_gen.colsubiso import hyperclique_to_colsubiso, hyperclique_to_ew_colsubiso
    from .hardness_gen.subset_sum import hyperclique_to_subsetsum
    from .solver_weighted import node_to_edge_weights

    f = load(a.file)
    inst = f.instance()
    target = f.target
    to = a.to
    if f.kind == "hypergraph":
        h, k = inst.h, inst.color_count
        if to == "colored":
            if k % h:
                raise UnsupportedOperationError(f"{k} colors is not a multiple of h = {h}")
            out = hyperclique_to_colsubiso(inst, h, k // h)
        elif to == "ew-colored":
            out = hyperclique_to_ew_colsubiso(inst, h, a.r1, a.r2, a.beta, a.eps)
            target = 0
        elif to == "subset-sum":
            out = hyperclique_to_subsetsum(inst, h, a.r1, a.eps)
        else:
            raise UnsupportedOperationError(f"cannot reduce a hypergraph to {to!r}")
    elif f.kind == "colored" and to == "uncolored":
        out = colored_to_uncolored(inst)[0]
    elif f.kind == "colored_weighted" and to == "uncolored":
        out = colored_to_uncolored_weighted(inst, target)
    elif f.kind == "colored_weighted" and to == "edge-weights":
        out = node_to_edge_weights(inst)
    else:
        raise UnsupportedOperationError(f"cannot reduce kind {f.kind!r} to {to!r}")
    meta = {"generator": f"reduce:{to}", "parameters": {"source": f.metadata},
            "seed": f.metadata.get("seed")}
    _emit(InstanceFile.wrap(out, meta, target=target), a.out)
    return 0


# --------------------------------------------------------------------- bench


def cmd_bench(a) -> int:
    from .bench import run_bench, write_outputs
    from .equivalence import root_seed

    sizes = [int(s) for s in a.sizes.split(",")] if a.sizes else None
    rep = run_bench(a.suite, sizes, a.pattern, a.repeats, root_seed(a.seed), a.p)
    paths = write_outputs(rep, a.out_dir)
    print(json.dumps({**rep.summary(), **paths}, indent=2))
    return 0


# ---------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    from .bench import SUITES
    from .dispatch import ALGOS

    ap = argparse.ArgumentParser(prog="subiso", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true", help="log at INFO level")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random or reduced instance as JSON")
    gsub = g.add_subparsers(dest="family", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="default: $SUBISO_SEED")
    common.add_argument("-o", "--out", default=None, help="output file (default stdout)")
    p = gsub.add_parser("twl", parents=[common], help="Twin Water Lily pattern graph")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--s1", type=int, required=True)
    p.add_argument("--s2", type=int, required=True)
    for name, hlp in (("planted", "colored instance, optionally weighted"),
                      ("uncolored", "uncolored instance")):
        p = gsub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("--k", type=int, default=4, help="pattern vertices")
        p.add_argument("--n", type=int, default=8,
                       help="preimage size" if name == "planted" else "host vertices")
        p.add_argument("--p", type=float, default=0.3, help="host edge probability")
        p.add_argument("--p-pattern", type=float, default=0.5)
        p.add_argument("--no-plant", action="store_true")
        p.add_argument("--weights", choices=("none", "node", "edge"), default="none")
        p.add_argument("--W", type=int, default=8, help="weights drawn from [-W, W]")
        p.add_argument("--target", type=int, default=0)
        if name == "planted":
            p.add_argument("--pattern", default=None, help="twl:h,s1,s2 | tree:k | path:k | ...")
    hyper = argparse.ArgumentParser(add_help=False, parents=[common])
    hyper.add_argument("--h", type=int, default=2, help="uniformity")
    hyper.add_argument("--size", type=int, default=2, help="vertices per color class")
    hyper.add_argument("--p", type=float, default=0.5, help="hyperedge probability")
    hyper.add_argument("--planted", action="store_true")
    p = gsub.add_parser("hypergraph", parents=[hyper], help="colored h-uniform hypergraph")
    p.add_argument("--classes", type=int, default=4)
    p = gsub.add_parser("hc-reduce", parents=[hyper],
                        help="hyperclique -> colored subgraph isomorphism on TWL(h,0,r)")
    p.add_argument("--r", type=int, default=2)
    p = gsub.add_parser("hc-ew-reduce", parents=[hyper],
                        help="hyperclique -> exact-weight colored instance on TWL(h,r1,r2)")
    p.add_argument("--r1", type=int, default=1)
    p.add_argument("--r2", type=int, default=1)
    p.add_argument("--beta", default="1/2")
    p.add_argument("--eps", type=float, default=0.5)
    p = gsub.add_parser("hc-subsetsum", parents=[hyper], help="hyperclique -> Subset Sum")
    p.add_argument("--r1", type=int, default=1)
    p.add_argument("--groups", type=int, default=1, help="colors per super-color")
    p.add_argument("--eps", type=float, default=0.5)

    for name, fn, hlp in (("solve", cmd_solve, "decide with the fast solvers"),
                          ("oracle", cmd_oracle, "decide by brute force")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("file")
        p.add_argument("--witness", action="store_true", help="print a witness on YES")
        p.add_argument("--target", type=int, default=None, help="override the file target")
        if name == "solve":
            p.add_argument("--algo", choices=ALGOS, default="auto")
            p.add_argument("--mode", choices=("randomized", "exhaustive"), default="randomized",
                           help="color coding mode for uncolored files")
            p.add_argument("--trials", type=int, default=None)
            p.add_argument("--seed", type=int, default=None)
        p.set_defaults(func=fn)

    p = sub.add_parser("reduce", help="apply a reduction to an instance file")
    p.add_argument("file")
    p.add_argument("--to", required=True,
                   choices=("colored", "ew-colored", "subset-sum", "uncolored", "edge-weights"))
    p.add_argument("--r1", type=int, default=1)
    p.add_argument("--r2", type=int, default=1)
    p.add_argument("--beta", default="1/2")
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bench", help="runtime scaling: CSV, PNG and fitted slope")
    p.add_argument("--suite", choices=sorted(SUITES), default="tw")
    p.add_argument("--sizes", default=None, help="comma-separated preimage sizes")
    p.add_argument("--pattern", default=None)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--p", type=float, default=None, help="host edge probability")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-dir", default="bench_out")
    p.set_defaults(func=cmd_bench)

    g.set_defaults(func=cmd_generate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return a.func(a)
    except (SubisoError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    except Exception as exc:  # exit code 1 means NO, so never leak a crash as 1
        log.exception("unexpected failure")
        print(f"internal error: {exc!r}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
