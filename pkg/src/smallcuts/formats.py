"""Serialization: JSON instance/certificate documents, LP and DOT export.

Rationals are serialized as "num/den" strings, never floats, so documents
round-trip exactly.  The LP writer emits one covering constraint per listed
cut in incidence-matrix row order (interval cuts first), which keeps the
files byte-stable for golden tests.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .certify import Certificate, ReductionTrace
from .construction import (
    CapGraph,
    Edge,
    Instance,
    Link,
    PathSystem,
    QSet,
    listed_small_cuts,
    validate_instance,
)

SCHEMA_VERSION = "1"

DOT_PALETTE = (
    "blue", "red", "teal", "brown", "darkgreen", "purple",
    "orange", "magenta", "gray40", "olive", "cyan4", "black",
)


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------------------
# instance documents


def instance_to_doc(inst: Instance) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "k": inst.k,
        "n": inst.n,
        "m": inst.m,
        "lambda": inst.graph.lam,
        "edges": [[e.lo, e.hi, e.cap] for e in inst.graph.edges],
        "qsets": [[q.first, q.last] for q in inst.qsets],
        "links": [[l.id, l.lo, l.hi, l.path] for l in inst.links],
        "xstar": [frac_str(x) for x in inst.xstar],
    }


def _paths_from_links(k: int, n: int, links: tuple[Link, ...]) -> PathSystem:
    by_id = {l.id: l for l in links}
    forward = {l.lo: l for l in links if l.lo != 1}
    paths = []
    for i in range(1, k + 1):
        seq = [1]
        cur = by_id[i].hi
        while cur != n:
            seq.append(cur)
            nxt = forward[cur]
            if nxt.path != i:
                raise ValueError(f"link chain of path {i} crosses into path {nxt.path}")
            cur = nxt.hi
        seq.append(n)
        paths.append(tuple(seq))
    owner = {v: i for i, seq in enumerate(paths, start=1) for v in seq[1:-1]}
    half = k // 2
    assignment = {
        j: {owner[v]: v for v in range(2 + (j - 1) * half, 2 + j * half)}
        for j in range(1, k)
    }
    return PathSystem(paths=tuple(paths), assignment=assignment)


def instance_from_doc(doc: dict[str, Any]) -> Instance:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    k = int(doc["k"])
    n = int(doc["n"])
    graph = CapGraph(
        n=n,
        edges=tuple(Edge(int(a), int(b), int(c)) for a, b, c in doc["edges"]),
        lam=int(doc["lambda"]),
    )
    qsets = tuple(
        QSet(j, int(first), int(last))
        for j, (first, last) in enumerate(doc["qsets"], start=1)
    )
    links = tuple(Link(int(i), int(a), int(b), int(p)) for i, a, b, p in doc["links"])
    xstar = tuple(parse_frac(s) for s in doc["xstar"])
    if len(xstar) != int(doc["m"]) or len(links) != int(doc["m"]):
        raise ValueError("m does not match links/xstar length")
    inst = Instance(
        k=k,
        graph=graph,
        qsets=qsets,
        path_system=_paths_from_links(k, n, links),
        links=links,
        xstar=xstar,
    )
    validate_instance(inst)
    return inst


# ---------------------------------------------------------------------------
# certificate documents


def trace_to_doc(trace: ReductionTrace) -> dict[str, Any]:
    return {
        "qrow": trace.qrow,
        "add_nested": trace.add_nested,
        "sub_nested": trace.sub_nested,
        "halved": sorted(trace.halved),
        "moves": [
            {
                "sub_nested": s.sub_nested,
                "add_nested": s.add_nested,
                "links": sorted(s.links),
            }
            for s in trace.moves
        ],
        "final": sorted(trace.final),
        "paths": sorted(trace.paths),
    }


def certificate_to_doc(
    cert: Certificate,
    *,
    tool_version: str,
    strategy: str,
    elapsed_seconds: float,
    lam: int,
    traces: list[ReductionTrace] | None = None,
    probe: dict[str, Any] | None = None,
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": tool_version,
        "k": cert.k,
        "lambda": lam,
        "strategy": strategy,
        "elapsed_seconds": round(elapsed_seconds, 6),
        "family_exact": cert.family_exact,
        "family_size": cert.family_size,
        "missing_cuts": [sorted(s) for s in cert.missing],
        "surplus_cuts": [sorted(s) for s in cert.surplus],
        "listed_capacities": dict(cert.listed_capacities),
        "feasible": cert.feasible,
        "tight": cert.tight,
        "bounds_strict": cert.bounds_strict,
        "rank_A": cert.rank_a,
        "det_A": str(cert.det_a),
        "is_basic": cert.is_basic,
        "max_coordinate": frac_str(cert.max_coordinate),
        "failures": list(cert.failures),
        "reduction_ok": cert.reduction_ok,
    }
    if traces is not None:
        doc["traces"] = [trace_to_doc(t) for t in traces]
    if probe is not None:
        doc["probe"] = probe
    return doc


def dump_json(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# LP export


def write_lp(inst: Instance) -> str:
    """The covering LP in lp-format text, unit objective costs.

    One constraint per listed cut, named cut_Q_j / cut_N_i, ordered exactly
    like the incidence-matrix rows; bounds 0 <= x_f <= 1 for every link.
    """
    m = inst.m
    lines = [f"/* cover-small-cuts LP, k={inst.k}, lambda={inst.graph.lam} */"]
    objective = " + ".join(f"x_{f}" for f in range(1, m + 1))
    lines.append(f"min: {objective};")
    lines.append("")
    for label, side in listed_small_cuts(inst):
        ids = sorted(
            l.id for l in inst.links if (l.lo in side) != (l.hi in side)
        )
        terms = " + ".join(f"x_{f}" for f in ids)
        lines.append(f"cut_{label}: {terms} >= 1;")
    lines.append("")
    for f in range(1, m + 1):
        lines.append(f"0 <= x_{f} <= 1;")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# DOT export


def write_dot_capgraph(inst: Instance) -> str:
    """Chain-with-chords drawing; every edge labelled with its capacity."""
    lines = [
        f"graph capacitated_k{inst.k} {{",
        "  rankdir=LR;",
        "  node [shape=circle];",
    ]
    for v in inst.graph.node_range():
        lines.append(f"  v{v};")
    for e in inst.graph.edges:
        lines.append(f'  v{e.lo} -- v{e.hi} [label="{e.cap}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot_links(inst: Instance) -> str:
    """Link drawing; links coloured by the source-sink path they belong to."""
    lines = [
        f"graph links_k{inst.k} {{",
        "  rankdir=LR;",
        "  node [shape=circle];",
    ]
    for v in inst.graph.node_range():
        lines.append(f"  v{v};")
    for l in inst.links:
        color = DOT_PALETTE[(l.path - 1) % len(DOT_PALETTE)]
        lines.append(f'  v{l.lo} -- v{l.hi} [color="{color}", label="l{l.id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
