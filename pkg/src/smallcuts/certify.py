"""Certification of the constructed instances.

Checks, in exact arithmetic, everything the construction promises: the
listed cuts are small, an exact enumeration finds nothing else, the uniform
point covers every listed cut tightly with no tight variable bound, the
cut/link incidence matrix has full rank (so the point is a vertex of the LP),
and the interval-cut rows reduce by explicit row operations to path
indicator rows (an executable replay of the rank argument).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable

from .construction import (
    Instance,
    build_circulant,
    build_incidence_matrix,
    listed_small_cuts,
)
from .cuts import Cut, CutFamily, cut_capacity
from .exactmath import (
    IntMatrix,
    det_bareiss,
    rank,
    row_combine,
    row_divide_exact,
)


class CertificationError(Exception):
    """A verdict that should hold for every built instance failed."""


@dataclass(frozen=True)
class MoveStep:
    """One row operation of the push-to-source loop: subtract the row of
    prefix cut ``sub_nested``, add the row of ``add_nested``."""

    sub_nested: int
    add_nested: int
    links: frozenset[int]


@dataclass(frozen=True)
class ReductionTrace:
    """Replayable record of the reduction of one interval-cut row."""

    qrow: int
    add_nested: int  # largest prefix index disjoint from the interval
    sub_nested: int  # smallest prefix index containing the interval
    halved: frozenset[int]
    moves: tuple[MoveStep, ...]
    final: frozenset[int]
    paths: frozenset[int]


@dataclass(frozen=True)
class FamilyCheck:
    ok: bool
    missing: tuple[frozenset[int], ...]
    surplus: tuple[frozenset[int], ...]

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Certificate:
    k: int
    family_exact: bool
    family_size: int
    missing: tuple[frozenset[int], ...]
    surplus: tuple[frozenset[int], ...]
    listed_capacities: dict[str, int]
    feasible: bool
    tight: bool
    bounds_strict: bool
    rank_a: int
    det_a: int
    is_basic: bool
    max_coordinate: Fraction
    failures: tuple[str, ...] = ()
    reduction_ok: bool | None = None

    def with_reduction(self, ok: bool) -> "Certificate":
        return replace(self, reduction_ok=ok)


def coverage(inst: Instance, cut: Cut | Iterable[int]) -> Fraction:
    """Exact sum of the candidate point over the links crossing the cut."""
    side = cut.side if isinstance(cut, Cut) else frozenset(cut)
    total = Fraction(0)
    for l in inst.links:
        if (l.lo in side) != (l.hi in side):
            total += inst.xstar[l.id - 1]
    return total


def listed_capacity_table(inst: Instance) -> dict[str, int]:
    """Capacities of all n-1 prefix cuts and k-1 interval cuts, by label."""
    return {
        label: cut_capacity(inst.graph, side)
        for label, side in listed_small_cuts(inst)
    }


def check_listed_capacities(inst: Instance) -> dict[str, int]:
    """Capacity table of the listed cuts; raises naming any cut that is not
    below the threshold."""
    table = listed_capacity_table(inst)
    lam = inst.graph.lam
    for label, cap in table.items():
        if cap >= lam:
            raise CertificationError(
                f"listed cut {label} has capacity {cap}, not below {lam}"
            )
    return table


def verify_family(inst: Instance, family: CutFamily) -> FamilyCheck:
    """Is the enumerated family exactly the listed prefix and interval cuts?"""
    listed = {side for _, side in listed_small_cuts(inst)}
    enumerated = family.sides()
    missing = tuple(sorted(listed - enumerated, key=sorted))
    surplus = tuple(sorted(enumerated - listed, key=sorted))
    return FamilyCheck(ok=not missing and not surplus, missing=missing, surplus=surplus)


def matrix_consistent(inst: Instance, matrix: IntMatrix) -> bool:
    """Entry-exact comparison of a matrix against the instance's incidence."""
    return matrix == build_incidence_matrix(inst)


def verify_basic(inst: Instance, family: CutFamily) -> Certificate:
    """Certify that the instance's candidate point is a basic solution.

    Sub-checks: every enumerated cut is covered with total at least 1 and
    every listed cut exactly 1; every coordinate is strictly between its
    bounds; the incidence matrix of the listed (tight) cuts has full rank m.
    A feasible point whose tight constraints have rank m is a vertex.
    """
    failures: list[str] = []
    caps = listed_capacity_table(inst)
    lam = inst.graph.lam
    for label, cap in caps.items():
        if cap >= lam:
            failures.append(f"capacity:{label}")
    fam = verify_family(inst, family)

    feasible = True
    for c in family:
        if coverage(inst, c) < 1:
            feasible = False
            failures.append(f"coverage:{sorted(c.side)}")
    tight = True
    for label, side in listed_small_cuts(inst):
        if coverage(inst, side) != 1:
            tight = False
            failures.append(f"tightness:{label}")
    bounds_strict = all(0 < x < 1 for x in inst.xstar)
    if not bounds_strict:
        failures.append("bounds")

    a = build_incidence_matrix(inst)
    rank_a = rank(a)
    det_a = det_bareiss(a)
    if rank_a != inst.m:
        failures.append(f"rank:{rank_a}!={inst.m}")

    is_basic = feasible and tight and bounds_strict and rank_a == inst.m
    return Certificate(
        k=inst.k,
        family_exact=fam.ok,
        family_size=len(family),
        missing=fam.missing,
        surplus=fam.surplus,
        listed_capacities=caps,
        feasible=feasible,
        tight=tight,
        bounds_strict=bounds_strict,
        rank_a=rank_a,
        det_a=det_a,
        is_basic=is_basic,
        max_coordinate=max(inst.xstar),
        failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# row-operation replay


def bracketing_prefixes(inst: Instance, j: int) -> tuple[int, int]:
    """For interval j: the largest prefix index whose node set misses the
    interval, and the smallest prefix index whose node set contains it."""
    if not 1 <= j <= inst.k - 1:
        raise ValueError(f"interval index {j} out of range 1..{inst.k - 1}")
    q = inst.qsets[j - 1]
    return q.first - 1, q.last


def _nested_row(inst: Instance, i: int) -> int:
    # 0-based row of prefix cut i in the incidence matrix (after the k-1 interval rows)
    return (inst.k - 1) + (i - 1)


def _indicator(inst: Instance, links: frozenset[int], factor: int = 1) -> list[int]:
    row = [0] * inst.m
    for l in links:
        row[l - 1] = factor
    return row


def reduce_qcut_row(inst: Instance, j: int, matrix: IntMatrix | None = None) -> frozenset[int]:
    """Split interval row j: subtracting the covering prefix row and adding
    the disjoint prefix row leaves twice the indicator of the k/2 links that
    leave the interval downward.  Returns that link set."""
    a = build_incidence_matrix(inst) if matrix is None else matrix
    low, high = bracketing_prefixes(inst, j)
    combined = row_combine(
        a, j - 1, [(-1, _nested_row(inst, high)), (1, _nested_row(inst, low))]
    )
    vec = combined.row(j - 1)
    expected = inst.qcut_links(j) & inst.nested_cut_links(low)
    if vec != _indicator(inst, expected, factor=2):
        raise CertificationError(
            f"interval row {j}: difference vector is not twice the indicator "
            f"of {sorted(expected)} (got {vec})"
        )
    if len(expected) != inst.k // 2:
        raise CertificationError(
            f"interval row {j}: expected {inst.k // 2} links, got {len(expected)}"
        )
    if inst.k in expected:
        raise CertificationError("source-sink link cannot leave an interval cut")
    return frozenset(expected)


def push_to_source(
    inst: Instance, links: Iterable[int]
) -> tuple[frozenset[int], tuple[MoveStep, ...]]:
    """Row-operation loop moving a half-cut link set into the source links.

    ``links`` must be k/2 links, none of them the source-sink link, jointly
    contained in some prefix cut.  Each step swaps the link set for its
    complement within two prefix cuts, preserving the set of paths touched
    and strictly decreasing the containing prefix index; the loop ends when
    all links are incident to node 1.
    """
    current = frozenset(links)
    k = inst.k
    if len(current) != k // 2:
        raise ValueError(f"need exactly {k // 2} links, got {len(current)}")
    if k in current:
        raise ValueError("the source-sink link cannot be moved")
    paths = frozenset(inst.link(l).path for l in current)
    high = max(inst.link(l).lo for l in current)
    if high >= min(inst.link(l).hi for l in current):
        raise ValueError("link set is not contained in any prefix cut")
    moves: list[MoveStep] = []
    steps = 0
    while high > 1:
        steps += 1
        if steps > inst.n:
            raise RuntimeError("push-to-source failed to terminate; construction bug")
        complement = inst.nested_cut_links(high) - current
        low = max(inst.link(l).lo for l in complement)
        cut_low = inst.nested_cut_links(low)
        if not complement <= cut_low:
            raise CertificationError(
                f"complement set {sorted(complement)} not inside prefix cut {low}"
            )
        new = frozenset(cut_low - complement)
        if frozenset(inst.link(l).path for l in new) != paths:
            raise CertificationError(
                f"move {high}->{low} changed the touched paths "
                f"({sorted(new)} vs {sorted(current)})"
            )
        new_high = max(inst.link(l).lo for l in new)
        if new_high >= high:
            raise CertificationError(f"move {high}->{low} made no progress")
        moves.append(MoveStep(sub_nested=high, add_nested=low, links=new))
        current, high = new, new_high
    return current, tuple(moves)


def full_reduction(
    inst: Instance, matrix: IntMatrix | None = None
) -> tuple[IntMatrix, list[ReductionTrace]]:
    """Reduce every interval-cut row of the incidence matrix to a path
    indicator row and verify the resulting block shape.

    After the replay the top-left (k-1)x(k-1) block must equal the transpose
    of the path/interval circulant, the rest of the first k-1 rows must be
    zero, and the prefix-cut block over the last m-k+1 columns must be
    lower-triangular with unit diagonal.  Every intermediate vector is
    checked against its set-level prediction, so a single flipped entry in
    any participating row aborts the replay.
    """
    work = build_incidence_matrix(inst) if matrix is None else matrix
    k, m = inst.k, inst.m
    if work.rows != m or work.cols != m:
        raise ValueError(f"matrix must be {m}x{m}")
    circulant = build_circulant(k)
    traces: list[ReductionTrace] = []
    for j in range(1, k):
        row_idx = j - 1
        low, high = bracketing_prefixes(inst, j)
        halved = reduce_qcut_row(inst, j, matrix=work)
        work = row_combine(
            work, row_idx, [(-1, _nested_row(inst, high)), (1, _nested_row(inst, low))]
        )
        work = row_divide_exact(work, row_idx, 2)
        final, moves = push_to_source(inst, halved)
        for step in moves:
            work = row_combine(
                work,
                row_idx,
                [(-1, _nested_row(inst, step.sub_nested)),
                 (1, _nested_row(inst, step.add_nested))],
            )
            if work.row(row_idx) != _indicator(inst, step.links):
                raise CertificationError(
                    f"interval row {j}: replayed move does not match link set "
                    f"{sorted(step.links)}"
                )
        paths = frozenset(inst.link(l).path for l in halved)
        expected_paths = frozenset(
            i for i in range(1, k) if circulant.at(i - 1, j - 1) == 1
        )
        if paths != expected_paths:
            raise CertificationError(
                f"interval row {j}: touched paths {sorted(paths)} differ from "
                f"circulant column {sorted(expected_paths)}"
            )
        if final != paths:  # links 1..k-1 are indexed by their path
            raise CertificationError(
                f"interval row {j}: final links {sorted(final)} are not the "
                f"source links of paths {sorted(paths)}"
            )
        traces.append(
            ReductionTrace(
                qrow=j,
                add_nested=low,
                sub_nested=high,
                halved=halved,
                moves=moves,
                final=final,
                paths=paths,
            )
        )
    top_left = work.block(0, k - 1, 0, k - 1)
    if top_left != circulant.transpose():
        raise CertificationError("top-left block is not the transposed circulant")
    top_right = work.block(0, k - 1, k - 1, m)
    if any(x != 0 for x in top_right.entries):
        raise CertificationError("top-right block is not zero")
    lower_right = work.block(k - 1, m, k - 1, m)
    for i in range(lower_right.rows):
        if lower_right.at(i, i) != 1:
            raise CertificationError(f"prefix block diagonal entry {i} is not one")
        for j2 in range(i + 1, lower_right.cols):
            if lower_right.at(i, j2) != 0:
                raise CertificationError(
                    f"prefix block entry ({i},{j2}) above the diagonal is non-zero"
                )
    return work, traces


def certify_instance(inst: Instance, family: CutFamily) -> Certificate:
    """Full verdict bundle: basic-solution checks plus the reduction replay."""
    cert = verify_basic(inst, family)
    try:
        full_reduction(inst)
        return cert.with_reduction(True)
    except CertificationError:
        return cert.with_reduction(False)
