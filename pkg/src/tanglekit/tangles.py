"""Blocking structure of biased graphs.

An unbalanced biased graph with no two vertex-disjoint unbalanced cycles
either has a vertex meeting every unbalanced cycle or is tangled.  This
module decides which, and recovers the finer blocking structure used by
the classifier: blocking pairs, the standard partition of the edges at a
blocking vertex, 2-balanced residues, and signatures certified by the
even-intersection law.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .bias import BiasedGraph, cycles_inside, cycles_with
from .graph import Cycle
from .limits import DEFAULT_CAPS, Caps, ResourceLimitError


class TangleError(ValueError):
    """A blocking-structure precondition or certified law failed."""

    def __init__(self, message: str, cycle: Cycle | None = None):
        super().__init__(message)
        self.cycle = cycle


@dataclass(frozen=True)
class Balanced:
    """Every cycle is balanced."""


@dataclass(frozen=True)
class HasBlockingVertex:
    """Some vertex meets every unbalanced cycle."""

    vertex: int


@dataclass(frozen=True)
class TwoDisjointUnbalanced:
    """Two vertex-disjoint unbalanced cycles exist."""

    first: Cycle
    second: Cycle


@dataclass(frozen=True)
class Tangled:
    """Unbalanced, no blocking vertex, no two disjoint unbalanced cycles."""


TangleVerdict = Balanced | HasBlockingVertex | TwoDisjointUnbalanced | Tangled


@dataclass(frozen=True)
class StandardPartition:
    """Equivalence classes of the non-loop edges at a blocking vertex.

    Two edges are equivalent when every cycle through both is balanced.
    A non-loop cycle is then unbalanced iff it enters and leaves the
    vertex through different parts.
    """

    vertex: int
    parts: tuple[frozenset[int], ...]

    def part_of(self, edge_id: int) -> int:
        for i, part in enumerate(self.parts):
            if edge_id in part:
                return i
        raise KeyError(edge_id)


def _vertex_masks(o: BiasedGraph, cycles: tuple[Cycle, ...]) -> list[int]:
    index = {v: i for i, v in enumerate(o.graph.vertices)}
    masks = []
    for c in cycles:
        m = 0
        for v in c.vertex_set:
            m |= 1 << index[v]
        masks.append(m)
    return masks


def find_disjoint_unbalanced_pair(
    o: BiasedGraph, caps: Caps = DEFAULT_CAPS
) -> tuple[Cycle, Cycle] | None:
    """First vertex-disjoint pair of unbalanced cycles, or None."""
    unb = o.unbalanced_cycles(caps)
    if len(unb) * len(unb) > caps.max_theta_pairs:
        raise ResourceLimitError("disjoint-pair scan", caps.max_theta_pairs)
    masks = _vertex_masks(o, unb)
    for i, j in combinations(range(len(unb)), 2):
        if not masks[i] & masks[j]:
            return unb[i], unb[j]
    return None


def blocking_vertices(o: BiasedGraph, caps: Caps = DEFAULT_CAPS) -> frozenset[int]:
    """Vertices meeting every unbalanced cycle; all of V if balanced."""
    unb = o.unbalanced_cycles(caps)
    if not unb:
        return frozenset(o.graph.vertices)
    return frozenset.intersection(*(c.vertex_set for c in unb))


def blocking_pairs(
    o: BiasedGraph, caps: Caps = DEFAULT_CAPS
) -> tuple[tuple[int, int], ...]:
    """Pairs {v, w}, neither blocking alone, meeting every unbalanced cycle."""
    unb = o.unbalanced_cycles(caps)
    if not unb:
        return ()
    blockers = blocking_vertices(o, caps)
    hits = {v: 0 for v in o.graph.vertices}
    for i, c in enumerate(unb):
        for v in c.vertex_set:
            hits[v] |= 1 << i
    full = (1 << len(unb)) - 1
    out = []
    for v, w in combinations(o.graph.vertices, 2):
        if v in blockers or w in blockers:
            continue
        if hits[v] | hits[w] == full:
            out.append((v, w))
    return tuple(out)


def is_tangled(o: BiasedGraph, caps: Caps = DEFAULT_CAPS) -> TangleVerdict:
    """Classify the blocking structure; exactly one verdict ever applies.

    A blocking vertex rules out a disjoint pair (both cycles would need
    it), so the verdicts are mutually exclusive.
    """
    if not o.unbalanced_cycles(caps):
        return Balanced()
    blockers = blocking_vertices(o, caps)
    if blockers:
        return HasBlockingVertex(min(blockers))
    pair = find_disjoint_unbalanced_pair(o, caps)
    if pair is not None:
        return TwoDisjointUnbalanced(*pair)
    return Tangled()


def standard_partition(
    o: BiasedGraph, v: int, caps: Caps = DEFAULT_CAPS
) -> StandardPartition:
    """Partition delta(v) by "every cycle through both edges is balanced".

    Requires v to be a blocking vertex with o - v connected; those
    hypotheses make the relation an equivalence.  Loops at v are not
    part of the partition.
    """
    g = o.graph
    if v not in g.vertex_set:
        raise TangleError(f"vertex {v} is not in the graph")
    if v not in blocking_vertices(o, caps):
        raise TangleError(f"vertex {v} is not a blocking vertex")
    if not g.delete_vertices([v]).is_connected():
        raise TangleError(f"deleting vertex {v} disconnects the graph")
    delta = g.delta(v)
    delta_set = frozenset(delta)
    bad_pairs: set[frozenset[int]] = set()
    for c in o.unbalanced_cycles(caps):
        used = c.edge_set & delta_set
        if len(used) == 2:
            bad_pairs.add(used)
    # components of the "equivalent" graph; verify transitivity afterwards
    parts: list[set[int]] = []
    remaining = list(delta)
    while remaining:
        seed = remaining.pop(0)
        part = {seed}
        grew = True
        while grew:
            grew = False
            for e in list(remaining):
                if any(frozenset({e, f}) not in bad_pairs for f in part):
                    part.add(e)
                    remaining.remove(e)
                    grew = True
        parts.append(part)
    for part in parts:
        for e, f in combinations(sorted(part), 2):
            if frozenset({e, f}) in bad_pairs:
                raise TangleError(
                    f"edges {e} and {f} at vertex {v} are linked through a "
                    "third edge but some cycle through both is unbalanced"
                )
    parts.sort(key=min)
    return StandardPartition(v, tuple(frozenset(p) for p in parts))


def is_2_balanced(
    o: BiasedGraph,
    base_edges: frozenset[int] | set[int],
    f_set: frozenset[int] | set[int],
    caps: Caps = DEFAULT_CAPS,
) -> Cycle | None:
    """None if every {e, f}-cycle for the base is balanced, else a witness.

    An {e, f}-cycle uses both of e, f in f_set and otherwise only base
    edges.  Singleton f_set is vacuously fine.
    """
    base = frozenset(base_edges)
    fs = frozenset(f_set)
    if base & fs:
        raise TangleError("f_set overlaps the base subgraph")
    for a, b in combinations(sorted(fs), 2):
        for c in cycles_with(o, {a, b}, base, caps):
            if not o.balance(c):
                return c
    return None


def recover_signature(
    o: BiasedGraph,
    base_edges: frozenset[int] | set[int],
    f_set: frozenset[int] | set[int],
    caps: Caps = DEFAULT_CAPS,
) -> frozenset[int]:
    """Certify f_set as a signature over base + f_set and return it.

    Requires: the base is a maximal balanced edge set, the graph has no
    two vertex-disjoint unbalanced cycles, and f_set is 2-balanced for
    the base.  Under those hypotheses every cycle inside base + f_set is
    balanced exactly when it meets f_set in an even number of edges; the
    law is verified cycle by cycle and any counterexample (only possible
    when a precondition was violated) is reported.
    """
    g = o.graph
    base = frozenset(base_edges)
    fs = frozenset(f_set)
    unknown = (base | fs) - g.edge_id_set
    if unknown:
        raise TangleError(f"unknown edges {sorted(unknown)}")
    if base & fs:
        raise TangleError("f_set overlaps the base subgraph")
    for c in cycles_inside(o, base, caps):
        if not o.balance(c):
            raise TangleError(f"base is not balanced: cycle {c.key}", c)
    for e in sorted(g.edge_id_set - base):
        if all(o.balance(c) for c in cycles_with(o, {e}, base, caps)):
            raise TangleError(f"base is not maximal: edge {e} extends it")
    pair = find_disjoint_unbalanced_pair(o, caps)
    if pair is not None:
        raise TangleError(
            f"two disjoint unbalanced cycles {pair[0].key} and {pair[1].key}"
        )
    bad = is_2_balanced(o, base, fs, caps)
    if bad is not None:
        raise TangleError(f"f_set is not 2-balanced: cycle {bad.key}", bad)
    for c in cycles_inside(o, base | fs, caps):
        even = len(c.edge_set & fs) % 2 == 0
        if o.balance(c) != even:
            raise TangleError(
                f"even-intersection law fails on cycle {c.key}", c
            )
    return fs
