"""Bias semantics for multigraphs: which cycles count as balanced.

A bias is theta-consistent when no theta subgraph has exactly two balanced
cycles.  Signed graphs (balanced = even intersection with a signature) are
theta-consistent for free; explicit cycle sets are validated.  A partial
assignment can be completed by backtracking search, preferring a default
value on unconstrained cycles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .graph import (
    Cycle,
    GraphError,
    MultiGraph,
    ThetaSubgraph,
    edge_path_vertices,
    enumerate_cycles,
    enumerate_theta_subgraphs,
)
from .limits import Caps, DEFAULT_CAPS


class BiasError(ValueError):
    """Bias data inconsistent with the graph."""


# ---------------------------------------------------------------------------
# Bias specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Signed:
    """Balanced iff the cycle meets the signature in an even number of edges."""

    signature: frozenset[int]


@dataclass(frozen=True)
class ExplicitSet:
    """The balanced cycles, stored canonically; everything else unbalanced."""

    balanced: frozenset[Cycle]


@dataclass(frozen=True)
class AllBalanced:
    pass


@dataclass(frozen=True)
class AllUnbalanced:
    pass


BiasSpec = Signed | ExplicitSet | AllBalanced | AllUnbalanced


@dataclass(frozen=True)
class BiasedGraph:
    graph: MultiGraph
    bias: BiasSpec

    def balance(self, c: Cycle) -> bool:
        """True when c is balanced."""
        b = self.bias
        if isinstance(b, Signed):
            return len(c.edge_set & b.signature) % 2 == 0
        if isinstance(b, ExplicitSet):
            return c in b.balanced
        if isinstance(b, AllBalanced):
            return True
        return False

    def cycles(self, caps: Caps = DEFAULT_CAPS) -> tuple[Cycle, ...]:
        cached = self.__dict__.get("_cycles")
        if cached is None:
            cached = enumerate_cycles(self.graph, caps=caps)
            object.__setattr__(self, "_cycles", cached)
        return cached

    def balanced_cycles(self, caps: Caps = DEFAULT_CAPS) -> tuple[Cycle, ...]:
        return tuple(c for c in self.cycles(caps) if self.balance(c))

    def unbalanced_cycles(self, caps: Caps = DEFAULT_CAPS) -> tuple[Cycle, ...]:
        return tuple(c for c in self.cycles(caps) if not self.balance(c))

    def is_balanced(self, caps: Caps = DEFAULT_CAPS) -> bool:
        return not self.unbalanced_cycles(caps)

    # -- inherited sub-biased-graphs ---------------------------------------

    def restrict_edges(self, edge_ids: Iterable[int], keep_vertices: Iterable[int] = ()) -> "BiasedGraph":
        sub = self.graph.subgraph(edge_ids, keep_vertices)
        return BiasedGraph(sub, self._inherit(sub))

    def delete_vertices(self, vertices: Iterable[int]) -> "BiasedGraph":
        sub = self.graph.delete_vertices(vertices)
        return BiasedGraph(sub, self._inherit(sub))

    def delete_edges(self, edge_ids: Iterable[int]) -> "BiasedGraph":
        sub = self.graph.delete_edges(edge_ids)
        return BiasedGraph(sub, self._inherit(sub))

    def _inherit(self, sub: MultiGraph) -> BiasSpec:
        b = self.bias
        if isinstance(b, Signed):
            return Signed(b.signature & sub.edge_id_set)
        if isinstance(b, ExplicitSet):
            keep = frozenset(c for c in b.balanced if c.edge_set <= sub.edge_id_set)
            return ExplicitSet(keep)
        return b


# ---------------------------------------------------------------------------
# Constructors and the theta property
# ---------------------------------------------------------------------------


def make_signed(g: MultiGraph, signature: Iterable[int]) -> BiasedGraph:
    sig = frozenset(signature)
    unknown = sig - g.edge_id_set
    if unknown:
        raise BiasError(f"signature uses unknown edges {sorted(unknown)}")
    return BiasedGraph(g, Signed(sig))


def make_explicit(
    g: MultiGraph,
    balanced: Iterable[Cycle | Iterable[int]],
    check: bool = True,
    caps: Caps = DEFAULT_CAPS,
) -> BiasedGraph:
    canon: set[Cycle] = set()
    for item in balanced:
        c = item if isinstance(item, Cycle) else Cycle.from_edge_set(g, item)
        # re-canonicalize against the graph to reject foreign cycles
        canon.add(Cycle.from_edge_set(g, c.edge_set))
    o = BiasedGraph(g, ExplicitSet(frozenset(canon)))
    if check:
        bad = validate_theta(g, canon, caps=caps)
        if bad:
            raise BiasError(f"balanced set violates the theta property in {len(bad)} theta(s)")
    return o


def validate_theta(
    g: MultiGraph,
    balanced: Iterable[Cycle],
    caps: Caps = DEFAULT_CAPS,
) -> tuple[ThetaSubgraph, ...]:
    """Violating thetas (those with exactly 2 balanced cycles); empty = ok."""
    bal = set(balanced)
    for c in bal:
        if not c.edge_set <= g.edge_id_set:
            raise BiasError("balanced set mentions a cycle outside the graph")
    out = []
    for t in enumerate_theta_subgraphs(g, caps=caps):
        if sum(1 for c in t.cycles if c in bal) == 2:
            out.append(t)
    return tuple(out)


def validate_biased_graph(o: BiasedGraph, caps: Caps = DEFAULT_CAPS) -> tuple[ThetaSubgraph, ...]:
    """Theta check for any bias spec (signed ones pass by construction)."""
    out = []
    for t in enumerate_theta_subgraphs(o.graph, o.cycles(caps), caps=caps):
        if sum(1 for c in t.cycles if o.balance(c)) == 2:
            out.append(t)
    return tuple(out)


def reroute(g: MultiGraph, c1: Cycle, c2: Cycle) -> Cycle:
    """The third cycle of the theta subgraph c1 ∪ c2."""
    inter = c1.edge_set & c2.edge_set
    pv = edge_path_vertices(g, inter) if inter else None
    if pv is None or (c1.vertex_set & c2.vertex_set) != pv:
        raise GraphError("cycle union is not a theta subgraph")
    return Cycle.from_edge_set(g, c1.edge_set ^ c2.edge_set)


# ---------------------------------------------------------------------------
# Partial bias completion
# ---------------------------------------------------------------------------


PartialBias = Mapping[Cycle, bool]


def complete_bias(
    g: MultiGraph,
    partial: PartialBias,
    default: bool = False,
    caps: Caps = DEFAULT_CAPS,
) -> BiasedGraph | None:
    """Extend a partial balanced/unbalanced assignment to a full bias.

    Backtracking over cycles in (length, key) order, trying `default` first
    (True = balanced); per-theta constraint: balanced count is never exactly
    two.  Returns None when no extension exists.
    """
    cycles = enumerate_cycles(g, caps=caps)
    index = {c: i for i, c in enumerate(cycles)}
    for c in partial:
        if c not in index:
            raise BiasError("partial bias mentions a cycle outside the graph")
    thetas = enumerate_theta_subgraphs(g, cycles, caps=caps)
    triples = [tuple(index[c] for c in t.cycles) for t in thetas]
    involved: dict[int, list[int]] = {i: [] for i in range(len(cycles))}
    for ti, tri in enumerate(triples):
        for i in tri:
            involved[i].append(ti)

    value: list[bool | None] = [None] * len(cycles)

    def propagate(start: list[int], trail: list[int]) -> bool:
        queue = list(start)
        while queue:
            ci = queue.pop()
            for ti in involved[ci]:
                tri = triples[ti]
                vals = [value[i] for i in tri]
                known = [v for v in vals if v is not None]
                ntrue = sum(1 for v in known if v)
                if len(known) == 3:
                    if ntrue == 2:
                        return False
                    continue
                if len(known) == 2 and ntrue >= 1:
                    forced = ntrue == 2  # two balanced force the third balanced
                    free_i = next(i for i in tri if value[i] is None)
                    value[free_i] = forced
                    trail.append(free_i)
                    queue.append(free_i)
        return True

    seed_trail: list[int] = []
    for c, b in sorted(partial.items(), key=lambda kv: kv[0].sort_key()):
        i = index[c]
        if value[i] is None:
            value[i] = bool(b)
            seed_trail.append(i)
            if not propagate([i], seed_trail):
                return None
        elif value[i] != bool(b):
            return None

    order = sorted(range(len(cycles)), key=lambda i: cycles[i].sort_key())

    def try_assign(pos: int, attempt: bool) -> list[int] | None:
        i = order[pos]
        trail = [i]
        value[i] = attempt
        if propagate([i], trail):
            return trail
        for j in trail:
            value[j] = None
        return None

    # Iterative backtracking; each decision records whether the alternate
    # value was already tried.
    decisions: list[tuple[int, bool, list[int]]] = []
    pos = 0
    feasible = True
    while True:
        while pos < len(order) and value[order[pos]] is not None:
            pos += 1
        if pos == len(order):
            break
        trail = try_assign(pos, default)
        if trail is not None:
            decisions.append((pos, False, trail))
            pos += 1
            continue
        trail = try_assign(pos, not default)
        if trail is not None:
            decisions.append((pos, True, trail))
            pos += 1
            continue
        moved = False
        while decisions:
            dpos, tried_alt, dtrail = decisions.pop()
            for j in dtrail:
                value[j] = None
            if tried_alt:
                continue
            trail = try_assign(dpos, not default)
            if trail is not None:
                decisions.append((dpos, True, trail))
                pos = dpos + 1
                moved = True
                break
        if not moved:
            feasible = False
            break
    if not feasible:
        return None
    balanced = frozenset(c for c, i in index.items() if value[i])
    out = BiasedGraph(g, ExplicitSet(balanced))
    assert not validate_biased_graph(out, caps), "completion violated theta"
    return out


# ---------------------------------------------------------------------------
# Simplification
# ---------------------------------------------------------------------------


def simplify(o: BiasedGraph, caps: Caps = DEFAULT_CAPS) -> BiasedGraph:
    """Delete balanced loops and all but the least edge of each balanced
    parallel class (edges pairwise forming balanced digons)."""
    g = o.graph
    drop: set[int] = set()
    for e in g.edge_ids:
        if g.is_loop(e):
            u, _ = g.endpoints(e)
            if o.balance(Cycle((e,), (u,))):
                drop.add(e)
    for (u, v) in g.simple_pairs():
        cls = g.edges_between(u, v)
        if len(cls) < 2:
            continue
        # digon balance is an equivalence on the class (theta property on
        # parallel triples), so group and keep the least id per group
        groups: list[list[int]] = []
        for e in cls:
            placed = False
            for grp in groups:
                if o.balance(Cycle.from_walk((grp[0], e), (u, v))):
                    grp.append(e)
                    placed = True
                    break
            if not placed:
                groups.append([e])
        for grp in groups:
            for e in grp[1:]:
                drop.add(e)
    if not drop:
        return o
    return o.delete_edges(drop)


def is_simple(o: BiasedGraph) -> bool:
    """No balanced loops and no balanced parallel pairs."""
    g = o.graph
    for e in g.edge_ids:
        if g.is_loop(e):
            u, _ = g.endpoints(e)
            if o.balance(Cycle((e,), (u,))):
                return False
    for (u, v) in g.simple_pairs():
        cls = g.edges_between(u, v)
        for e, f in itertools.combinations(cls, 2):
            if o.balance(Cycle.from_walk((e, f), (u, v))):
                return False
    return True


def switch_signature(g: MultiGraph, signature: Iterable[int], part: Iterable[int]) -> frozenset[int]:
    """Signature Δ δ(part): switching never changes any cycle's bias."""
    X = set(part)
    cut = {
        e for e in g.edge_ids
        if not g.is_loop(e) and (g.endpoints(e)[0] in X) != (g.endpoints(e)[1] in X)
    }
    return frozenset(set(signature) ^ cut)


# ---------------------------------------------------------------------------
# Shared cycle helpers
# ---------------------------------------------------------------------------


def cycles_with(
    o: BiasedGraph,
    required: Iterable[int],
    within: Iterable[int] | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> tuple[Cycle, ...]:
    """Cycles containing all `required` edges, otherwise staying in `within`."""
    req = frozenset(required)
    allowed = None if within is None else frozenset(within) | req
    out = []
    for c in o.cycles(caps):
        if not req <= c.edge_set:
            continue
        if allowed is not None and not c.edge_set <= allowed:
            continue
        out.append(c)
    return tuple(out)


def cycles_inside(o: BiasedGraph, edges: Iterable[int], caps: Caps = DEFAULT_CAPS) -> tuple[Cycle, ...]:
    allowed = frozenset(edges)
    return tuple(c for c in o.cycles(caps) if c.edge_set <= allowed)
