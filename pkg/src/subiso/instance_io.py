"""JSON instance files.

Documents carry a fixed key order and sorted edge lists, so save(load(x))
reproduces x byte for byte.  Loading rebuilds the in-memory objects, which runs
their invariant checks.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MalformedInstanceError
from .graph_core import ColoredInstance, Graph, Hypergraph, UncoloredInstance, WeightFn

FORMAT_VERSION = 1
KINDS = ("graph", "hypergraph", "colored", "colored_weighted", "uncolored",
         "uncolored_weighted", "subset_sum")
FIELD_ORDER = ("format_version", "kind", "pattern", "host", "color_map", "weights", "target",
               "hypergraph", "values", "metadata")


def _graph_doc(G: Graph) -> dict:
    return {"vertex_count": G.vertex_count, "edges": [list(e) for e in G.sorted_edges()]}


def _graph(doc) -> Graph:
    try:
        return Graph.from_edges(int(doc["vertex_count"]), [tuple(e) for e in doc["edges"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInstanceError(f"bad graph record: {exc}") from exc


def _weights_doc(w: WeightFn) -> dict:
    if w.kind == "node":
        return {"kind": "node", "entries": list(w.values)}
    return {"kind": "edge", "entries": [[u, v, x] for (u, v), x in w.values]}


def _weights(doc) -> WeightFn:
    kind = doc.get("kind")
    if kind == "node":
        return WeightFn.node([int(x) for x in doc["entries"]])
    if kind == "edge":
        return WeightFn.edge({(int(u), int(v)): int(x) for u, v, x in doc["entries"]})
    raise MalformedInstanceError(f"unknown weight kind {kind!r}")


@dataclass
class InstanceFile:
    kind: str
    pattern: Graph | None = None
    host: Graph | None = None
    color_map: list | None = None
    weights: WeightFn | None = None
    target: int = 0
    hypergraph: Hypergraph | None = None
    values: list | None = None
    metadata: dict = field(default_factory=dict)

    # ---- construction from objects

    @classmethod
    def wrap(cls, obj, metadata: dict | None = None, target: int = 0) -> "InstanceFile":
        from .hardness_gen.subset_sum import SubsetSumInstance

        meta = dict(metadata or {})
        if isinstance(obj, ColoredInstance):
            kind = "colored" if obj.weights is None else "colored_weighted"
            return cls(kind, obj.pattern, obj.host, list(obj.colors.host_to_pattern), obj.weights,
                       target, metadata=meta)
        if isinstance(obj, UncoloredInstance):
            kind = "uncolored" if obj.weights is None else "uncolored_weighted"
            return cls(kind, obj.pattern, obj.host, None, obj.weights, target, metadata=meta)
        if isinstance(obj, Graph):
            return cls("graph", pattern=obj, metadata=meta)
        if isinstance(obj, Hypergraph):
            return cls("hypergraph", hypergraph=obj, metadata=meta)
        if isinstance(obj, SubsetSumInstance):
            return cls("subset_sum", target=obj.T, values=list(obj.values),
                       metadata={**meta, **obj.metadata})
        raise MalformedInstanceError(f"cannot serialise {type(obj).__name__}")

    def instance(self):
        """The in-memory object this file describes."""
        from .hardness_gen.subset_sum import SubsetSumInstance

        if self.kind in ("colored", "colored_weighted"):
            return ColoredInstance.build(self.pattern, self.host, self.color_map, self.weights)
        if self.kind in ("uncolored", "uncolored_weighted"):
            return UncoloredInstance(self.pattern, self.host, self.weights)
        if self.kind == "graph":
            return self.pattern
        if self.kind == "hypergraph":
            return self.hypergraph
        return SubsetSumInstance(list(self.values), self.target)

    # ---- JSON

    def to_dict(self) -> dict:
        d = {"format_version": FORMAT_VERSION, "kind": self.kind}
        if self.pattern is not None:
            d["pattern"] = _graph_doc(self.pattern)
        if self.host is not None:
            d["host"] = _graph_doc(self.host)
        if self.color_map is not None:
            d["color_map"] = [int(c) for c in self.color_map]
        if self.weights is not None:
            d["weights"] = _weights_doc(self.weights)
        if self.kind != "graph" and self.kind != "hypergraph":
            d["target"] = int(self.target)
        if self.hypergraph is not None:
            hg = self.hypergraph
            d["hypergraph"] = {"vertex_count": hg.vertex_count, "h": hg.h,
                               "hyperedges": [list(e) for e in sorted(hg.hyperedges)],
                               "color_map": None if hg.color_map is None else list(hg.color_map)}
        if self.values is not None:
            d["values"] = [int(v) for v in self.values]
        meta = self.metadata
        d["metadata"] = {"generator": meta.get("generator"),
                         "parameters": meta.get("parameters", {}),
                         "seed": meta.get("seed"),
                         **{k: v for k, v in meta.items()
                            if k not in ("generator", "parameters", "seed")}}
        return {k: d[k] for k in FIELD_ORDER if k in d}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":")) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "InstanceFile":
        if not isinstance(d, dict):
            raise MalformedInstanceError("instance file must hold a JSON object")
        if d.get("format_version") != FORMAT_VERSION:
            raise MalformedInstanceError(f"unsupported format_version {d.get('format_version')!r}")
        kind = d.get("kind")
        if kind not in KINDS:
            raise MalformedInstanceError(f"unknown kind {kind!r}")
        f = cls(kind, metadata=dict(d.get("metadata") or {}))
        try:
            if "pattern" in d:
                f.pattern = _graph(d["pattern"])
            if "host" in d:
                f.host = _graph(d["host"])
            if d.get("color_map") is not None:
                f.color_map = [int(c) for c in d["color_map"]]
            if d.get("weights") is not None:
                f.weights = _weights(d["weights"])
            f.target = int(d.get("target", 0))
            if "hypergraph" in d:
                hd = d["hypergraph"]
                f.hypergraph = Hypergraph(int(hd["vertex_count"]), int(hd["h"]),
                                          frozenset(tuple(e) for e in hd["hyperedges"]),
                                          None if hd.get("color_map") is None
                                          else tuple(hd["color_map"]))
            if "values" in d:
                f.values = [int(v) for v in d["values"]]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MalformedInstanceError):
                raise
            raise MalformedInstanceError(f"bad field: {exc}") from exc
        needs = {"colored": ("pattern", "host", "color_map"),
                 "colored_weighted": ("pattern", "host", "color_map", "weights"),
                 "uncolored": ("pattern", "host"),
                 "uncolored_weighted": ("pattern", "host", "weights"),
                 "graph": ("pattern",), "hypergraph": ("hypergraph",),
                 "subset_sum": ("values",)}[kind]
        for name in needs:
            if getattr(f, name) is None:
                raise MalformedInstanceError(f"kind {kind} needs field {name!r}")
        if kind in ("colored", "uncolored") and f.weights is not None:
            raise MalformedInstanceError(f"kind {kind} must not carry weights")
        f.instance()  # runs the object-level invariant checks
        return f

    @classmethod
    def loads(cls, text: str) -> "InstanceFile":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInstanceError(f"not valid JSON: {exc}") from exc
        return cls.from_dict(d)


def load(path) -> InstanceFile:
    return InstanceFile.loads(Path(path).read_text(encoding="utf-8"))


def save(f: InstanceFile, path) -> None:
    Path(path).write_text(f.dumps(), encoding="utf-8")
