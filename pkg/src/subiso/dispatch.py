"""Algorithm selection shared by the CLI and the reductions."""
from __future__ import annotations

import logging

from .errors import UnsupportedOperationError
from .graph_core import ColoredInstance
from . import solver_unweighted as su
from . import solver_weighted as sw

log = logging.getLogger(__name__)

ALGOS = ("auto", "tw", "pw", "tree", "ew-tw", "ew-pw", "ew-tree", "nw-tree", "nw-pw")


def choose(inst: ColoredInstance, algo: str = "auto") -> str:
    """auto: tree solvers iff the pattern is a forest, otherwise the treewidth path."""
    if algo != "auto":
        return algo
    forest = inst.pattern.is_forest()
    if inst.weights is None:
        pick = "tree" if forest else "tw"
    elif forest:
        pick = "nw-tree" if inst.weights.kind == "node" else "ew-tree"
    else:
        pick = "ew-tw"
    log.info("auto dispatch: %s (forest=%s, weights=%s)", pick, forest,
             None if inst.weights is None else inst.weights.kind)
    return pick


def solve(inst: ColoredInstance, algo: str = "auto", target: int = 0, witness: bool = False):
    """Run the chosen solver; returns a bool, or (bool, witness) when witness=True."""
    algo = choose(inst, algo)
    if algo in ("tw", "pw", "tree"):
        if inst.weights is not None and target:
            raise UnsupportedOperationError("unweighted solver cannot honour a target")
        fn = {"tw": su.solve_tw, "pw": su.solve_pw, "tree": su.solve_tree}[algo]
        return fn(inst, witness=witness)
    fn = {"ew-tw": sw.solve_ew_tw, "ew-pw": sw.solve_ew_pw, "ew-tree": sw.solve_ew_tree,
          "nw-tree": sw.solve_nw_tree_fast, "nw-pw": sw.solve_nw_pw_fast}.get(algo)
    if fn is None:
        raise UnsupportedOperationError(f"unknown algorithm {algo!r}")
    if inst.weights is None:
        raise UnsupportedOperationError(f"{algo} needs a weighted instance")
    return fn(inst, target=target, witness=witness)
