"""Cut capacities and exhaustive / flow-bounded / randomized cut enumeration.

A cut is identified by its canonical side: the block of the partition that
excludes node 1.  Enumeration returns every cut whose capacity is strictly
below the graph threshold, by one of three strategies:

* ``enumerate_bruteforce`` scans all 2^(n-1) - 1 canonical sides (vectorized,
  guarded by a node budget, optionally split across worker threads);
* ``enumerate_flow`` runs an exact branch-and-bound on node assignments with
  a min-cut (max-flow) lower bound per branch, usable beyond the brute-force
  budget;
* ``karger_probe`` repeats seeded capacity-weighted edge contraction, which
  can only ever find genuine cuts and serves as a randomized stress test.
"""

from __future__ import annotations

import random
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .construction import CapGraph


class BruteForceSizeError(ValueError):
    """Raised when a graph exceeds the exhaustive-scan node budget."""


@dataclass(frozen=True)
class Cut:
    side: frozenset[int]
    capacity: int


@dataclass(frozen=True)
class CutFamily:
    cuts: tuple[Cut, ...]
    lam: int

    @classmethod
    def collect(cls, cuts: Iterable[Cut], lam: int) -> "CutFamily":
        by_side: dict[frozenset[int], Cut] = {}
        for c in cuts:
            if c.capacity >= lam:
                raise ValueError(f"cut {sorted(c.side)} has capacity {c.capacity} >= {lam}")
            by_side[c.side] = c
        ordered = sorted(by_side.values(), key=lambda c: (len(c.side), sorted(c.side)))
        return cls(tuple(ordered), lam)

    def sides(self) -> frozenset[frozenset[int]]:
        return frozenset(c.side for c in self.cuts)

    def __len__(self) -> int:
        return len(self.cuts)

    def __iter__(self):
        return iter(self.cuts)

    def __contains__(self, side: frozenset[int]) -> bool:
        return side in self.sides()


def _as_side(g: CapGraph, side: Iterable[int]) -> frozenset[int]:
    s = frozenset(side)
    if not s or not s < frozenset(g.node_range()):
        raise ValueError("side must be a proper non-empty subset of the nodes")
    return s


def cut_capacity(g: CapGraph, side: Iterable[int]) -> int:
    """Sum of capacities of the edges with exactly one endpoint in ``side``."""
    s = _as_side(g, side)
    return sum(c for lo, hi, c in g.edges if (lo in s) != (hi in s))


def canonical_cut(g: CapGraph, side: Iterable[int]) -> Cut:
    """The cut of the given partition, stored on the side that excludes node 1."""
    s = _as_side(g, side)
    if 1 in s:
        s = frozenset(g.node_range()) - s
    return Cut(side=s, capacity=cut_capacity(g, s))


def _check_connected(g: CapGraph) -> None:
    adj: dict[int, list[int]] = {v: [] for v in g.node_range()}
    for lo, hi, _ in g.edges:
        adj[lo].append(hi)
        adj[hi].append(lo)
    seen = {1}
    stack = [1]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != g.n:
        raise ValueError("graph is not connected")


# ---------------------------------------------------------------------------
# exhaustive scan


def _scan_masks(g: CapGraph, lo: int, hi: int) -> list[tuple[int, int]]:
    """Capacities for canonical-side bitmasks in [lo, hi); bit i is node i+2."""
    masks = np.arange(lo, hi, dtype=np.uint64)
    acc = np.zeros(masks.shape, dtype=np.int64)
    one = np.uint64(1)
    for a, b, c in g.edges:
        if a == 1:
            bits = (masks >> np.uint64(b - 2)) & one
        else:
            bits = ((masks >> np.uint64(a - 2)) ^ (masks >> np.uint64(b - 2))) & one
        acc += bits.astype(np.int64) * c
    keep = np.nonzero(acc < g.lam)[0]
    return [(int(masks[i]), int(acc[i])) for i in keep]


def _mask_to_side(mask: int) -> frozenset[int]:
    side = set()
    v = 2
    while mask:
        if mask & 1:
            side.add(v)
        mask >>= 1
        v += 1
    return frozenset(side)


def enumerate_bruteforce(
    g: CapGraph, max_nodes: int = 24, workers: int = 1
) -> CutFamily:
    """Every small cut, by scanning all canonical sides.

    Refuses graphs above ``max_nodes`` (raise the budget explicitly to go
    further; with ``workers`` > 1 the mask range is split across threads,
    which run concurrently because the scan kernel is vectorized).
    """
    if g.n > max_nodes:
        raise BruteForceSizeError(
            f"{g.n} nodes exceeds the exhaustive-scan budget of {max_nodes}; "
            "use enumerate_flow or raise max_nodes explicitly"
        )
    if g.n - 1 > 63:
        raise BruteForceSizeError("bitmask scan supports at most 64 nodes")
    total = 1 << (g.n - 1)  # masks 1 .. total-1
    chunk = 1 << 20
    ranges = [(lo, min(lo + chunk, total)) for lo in range(1, total, chunk)]
    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda r: _scan_masks(g, *r), ranges))
    else:
        parts = [_scan_masks(g, lo, hi) for lo, hi in ranges]
    cuts = [
        Cut(side=_mask_to_side(mask), capacity=cap)
        for part in parts
        for mask, cap in part
    ]
    return CutFamily.collect(cuts, g.lam)


# ---------------------------------------------------------------------------
# max-flow and branch-and-bound enumeration


def _min_cut_value(
    g: CapGraph,
    source_nodes: frozenset[int],
    sink_nodes: frozenset[int],
    cutoff: int | None = None,
) -> int:
    """Min cut separating the contracted source set from the contracted sink
    set, by augmenting paths.  With ``cutoff`` the search stops as soon as the
    flow reaches it, so a return value >= cutoff means only "at least cutoff".
    """
    comp: dict[int, int] = {}
    for v in source_nodes:
        comp[v] = 0
    for v in sink_nodes:
        comp[v] = 1
    nxt = 2
    for v in g.node_range():
        if v not in comp:
            comp[v] = nxt
            nxt += 1
    res: list[dict[int, int]] = [{} for _ in range(nxt)]
    for lo, hi, c in g.edges:
        a, b = comp[lo], comp[hi]
        if a != b:
            res[a][b] = res[a].get(b, 0) + c
            res[b][a] = res[b].get(a, 0) + c
    flow = 0
    while cutoff is None or flow < cutoff:
        parent = [-1] * nxt
        parent[0] = 0
        queue = deque([0])
        while queue and parent[1] == -1:
            u = queue.popleft()
            for v, c in res[u].items():
                if c > 0 and parent[v] == -1:
                    parent[v] = u
                    queue.append(v)
        if parent[1] == -1:
            break
        aug = None
        v = 1
        while v != 0:
            u = parent[v]
            aug = res[u][v] if aug is None else min(aug, res[u][v])
            v = u
        v = 1
        while v != 0:
            u = parent[v]
            res[u][v] -= aug
            res[v][u] = res[v].get(u, 0) + aug
            v = u
        flow += aug
    return flow


def max_flow(
    g: CapGraph, source_set: Iterable[int], sink_set: Iterable[int]
) -> int:
    """Exact min-cut value between two disjoint contracted node sets."""
    s = frozenset(source_set)
    t = frozenset(sink_set)
    nodes = frozenset(g.node_range())
    if not s or not t:
        raise ValueError("source and sink sets must be non-empty")
    if s & t:
        raise ValueError("source and sink sets overlap")
    if not (s <= nodes and t <= nodes):
        raise ValueError("node index out of range")
    return _min_cut_value(g, s, t)


def enumerate_flow(g: CapGraph) -> CutFamily:
    """Every small cut, by branch-and-bound over node assignments.

    Nodes are committed in index order to the side of node 1 or to the other
    side.  A branch dies when the decided boundary alone, or the min cut
    between the two committed sets (a lower bound for every completion),
    reaches the threshold.  Leaves are exact cuts, so the result equals the
    exhaustive scan wherever both run.
    """
    _check_connected(g)
    lam = g.lam
    n = g.n
    nbrs: dict[int, list[tuple[int, int]]] = {v: [] for v in g.node_range()}
    for lo, hi, c in g.edges:
        nbrs[lo].append((hi, c))
        nbrs[hi].append((lo, c))
    side = [0] * (n + 1)  # side[v] valid for decided v only; node 1 fixed at 0
    found: list[Cut] = []

    def assign(v: int, boundary: int, other_count: int) -> None:
        if v > n:
            if other_count:
                found.append(
                    Cut(
                        side=frozenset(u for u in range(2, n + 1) if side[u]),
                        capacity=boundary,
                    )
                )
            return
        for s in (0, 1):
            side[v] = s
            b = boundary + sum(c for u, c in nbrs[v] if u < v and side[u] != s)
            count = other_count + s
            if count:
                if b >= lam:
                    continue
                if v < n:
                    committed_other = frozenset(
                        u for u in range(2, v + 1) if side[u]
                    )
                    committed_source = frozenset(
                        u for u in range(1, v + 1) if not (u > 1 and side[u])
                    )
                    bound = _min_cut_value(g, committed_source, committed_other, lam)
                    if bound >= lam:
                        continue
            assign(v + 1, b, count)

    assign(2, 0, 0)
    return CutFamily.collect(found, lam)


# ---------------------------------------------------------------------------
# randomized contraction probe


def karger_probe(g: CapGraph, trials: int, seed: int) -> CutFamily:
    """Distinct small cuts seen across seeded random contractions.

    Each trial orders the edges by independent exponential arrival times with
    rate equal to capacity (so the next contracted edge is capacity-weighted)
    and contracts until two super-nodes remain.  The same seed always yields
    the same cut set.  Any returned cut is real, so the result must be a
    subset of the true family; a cut outside it would disprove the claimed
    enumeration.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    n = g.n
    edges = [(lo, hi, c) for lo, hi, c in g.edges]
    expovariate = rng.expovariate
    by_side: dict[frozenset[int], int] = {}
    for _ in range(trials):
        order = sorted(range(len(edges)), key=lambda i: expovariate(edges[i][2]))
        parent = list(range(n + 1))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = n
        for i in order:
            if comps == 2:
                break
            a = find(edges[i][0])
            b = find(edges[i][1])
            if a != b:
                parent[b] = a
                comps -= 1
        root1 = find(1)
        capacity = sum(
            c for lo, hi, c in edges if (find(lo) == root1) != (find(hi) == root1)
        )
        if capacity < g.lam:
            side = frozenset(v for v in range(2, n + 1) if find(v) != root1)
            if side and side not in by_side:
                by_side[side] = capacity
    return CutFamily.collect(
        (Cut(side=s, capacity=c) for s, c in by_side.items()), g.lam
    )
