"""Multigraph core: cycles, theta subgraphs, vertex cuts and blocks.

Vertices and edges are non-negative integer ids.  Loops and parallel edges
are first-class: a loop is a 1-edge cycle and a parallel pair is a 2-edge
cycle.  A cycle is a connected subgraph in which every vertex has degree
two; a theta subgraph is a connected subgraph with exactly two vertices of
degree three and the rest of degree two, equivalently the union of two
cycles whose intersection is a path with at least one edge.

All enumerations are deterministic: results come back sorted by canonical
keys, never in hash order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .limits import Caps, DEFAULT_CAPS, ResourceLimitError


class GraphError(ValueError):
    """Malformed graph data or a reference to an unknown id."""


# ---------------------------------------------------------------------------
# MultiGraph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiGraph:
    """Immutable undirected multigraph with integer vertex and edge ids.

    Construct through :meth:`build`; the raw fields are normalized tuples
    and not meant to be assembled by hand.
    """

    _vertices: tuple[int, ...]
    _edges: tuple[tuple[int, int, int], ...]  # (edge_id, u, v), sorted by id

    # -- construction -----------------------------------------------------

    @staticmethod
    def build(
        vertices: Iterable[int],
        edges: Mapping[int, tuple[int, int]] | Iterable[tuple[int, int, int]],
    ) -> "MultiGraph":
        vs = sorted(set(int(v) for v in vertices))
        if any(v < 0 for v in vs):
            raise GraphError("vertex ids must be non-negative")
        if isinstance(edges, Mapping):
            rows = [(int(e), int(u), int(v)) for e, (u, v) in edges.items()]
        else:
            rows = [(int(e), int(u), int(v)) for (e, u, v) in edges]
        rows.sort()
        vset = set(vs)
        seen: set[int] = set()
        for e, u, v in rows:
            if e < 0:
                raise GraphError(f"edge id {e} is negative")
            if e in seen:
                raise GraphError(f"duplicate edge id {e}")
            seen.add(e)
            if u not in vset or v not in vset:
                raise GraphError(f"edge {e} has endpoint outside the vertex set")
        return MultiGraph(tuple(vs), tuple(rows))

    @staticmethod
    def from_pairs(pairs: Sequence[tuple[int, int]], vertices: Iterable[int] = ()) -> "MultiGraph":
        """Build with edge ids 0..len(pairs)-1 in the given order."""
        vs = set(vertices)
        for u, v in pairs:
            vs.add(u)
            vs.add(v)
        return MultiGraph.build(vs, [(i, u, v) for i, (u, v) in enumerate(pairs)])

    # -- basic accessors ---------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self._vertices)

    @cached_property
    def edge_map(self) -> dict[int, tuple[int, int]]:
        return {e: (u, v) for e, u, v in self._edges}

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e for e, _, _ in self._edges)

    @cached_property
    def edge_id_set(self) -> frozenset[int]:
        return frozenset(self.edge_map)

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return len(self._edges)

    def endpoints(self, e: int) -> tuple[int, int]:
        try:
            return self.edge_map[e]
        except KeyError:
            raise GraphError(f"unknown edge id {e}") from None

    def is_loop(self, e: int) -> bool:
        u, v = self.endpoints(e)
        return u == v

    def other_end(self, e: int, v: int) -> int:
        a, b = self.endpoints(e)
        if v == a:
            return b
        if v == b:
            return a
        raise GraphError(f"vertex {v} is not an endpoint of edge {e}")

    @cached_property
    def _incidence(self) -> dict[int, tuple[int, ...]]:
        inc: dict[int, list[int]] = {v: [] for v in self._vertices}
        for e, u, v in self._edges:
            inc[u].append(e)
            if v != u:
                inc[v].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def incident_edges(self, v: int) -> tuple[int, ...]:
        """Edges touching v; loops listed once."""
        try:
            return self._incidence[v]
        except KeyError:
            raise GraphError(f"unknown vertex id {v}") from None

    def degree(self, v: int) -> int:
        d = 0
        for e in self.incident_edges(v):
            d += 2 if self.is_loop(e) else 1
        return d

    def loops_at(self, v: int) -> tuple[int, ...]:
        return tuple(e for e in self.incident_edges(v) if self.is_loop(e))

    def delta(self, v: int) -> tuple[int, ...]:
        """Non-loop edges at v."""
        return tuple(e for e in self.incident_edges(v) if not self.is_loop(e))

    def neighbors(self, v: int) -> tuple[int, ...]:
        out = {self.other_end(e, v) for e in self.delta(v)}
        return tuple(sorted(out))

    def edges_between(self, u: int, v: int) -> tuple[int, ...]:
        uu, vv = (u, v) if u <= v else (v, u)
        return tuple(
            e for e, a, b in self._edges if (min(a, b), max(a, b)) == (uu, vv)
        )

    # -- derived graphs ----------------------------------------------------

    def subgraph(self, edge_ids: Iterable[int], keep_vertices: Iterable[int] = ()) -> "MultiGraph":
        ids = sorted(set(edge_ids))
        vs = set(keep_vertices)
        rows = []
        for e in ids:
            u, v = self.endpoints(e)
            rows.append((e, u, v))
            vs.add(u)
            vs.add(v)
        return MultiGraph.build(vs, rows)

    def induced(self, vertices: Iterable[int]) -> "MultiGraph":
        vs = set(vertices)
        unknown = vs - self.vertex_set
        if unknown:
            raise GraphError(f"unknown vertices {sorted(unknown)}")
        rows = [(e, u, v) for e, u, v in self._edges if u in vs and v in vs]
        return MultiGraph(tuple(sorted(vs)), tuple(rows))

    def delete_vertices(self, vertices: Iterable[int]) -> "MultiGraph":
        drop = set(vertices)
        return self.induced(self.vertex_set - drop)

    def delete_edges(self, edge_ids: Iterable[int]) -> "MultiGraph":
        drop = set(edge_ids)
        unknown = drop - self.edge_id_set
        if unknown:
            raise GraphError(f"unknown edges {sorted(unknown)}")
        rows = [(e, u, v) for e, u, v in self._edges if e not in drop]
        return MultiGraph(self._vertices, tuple(rows))

    def with_edges(self, extra: Mapping[int, tuple[int, int]], extra_vertices: Iterable[int] = ()) -> "MultiGraph":
        rows = list(self._edges) + [(e, u, v) for e, (u, v) in extra.items()]
        vs = set(self._vertices) | set(extra_vertices)
        for _, u, v in rows:
            vs.add(u)
            vs.add(v)
        return MultiGraph.build(vs, rows)

    # -- connectivity ------------------------------------------------------

    def components(self) -> tuple[frozenset[int], ...]:
        seen: set[int] = set()
        comps: list[frozenset[int]] = []
        for start in self._vertices:
            if start in seen:
                continue
            stack = [start]
            comp = {start}
            seen.add(start)
            while stack:
                x = stack.pop()
                for e in self.delta(x):
                    y = self.other_end(e, x)
                    if y not in comp:
                        comp.add(y)
                        seen.add(y)
                        stack.append(y)
            comps.append(frozenset(comp))
        return tuple(comps)

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def spanning_tree_edges(self) -> tuple[int, ...]:
        """Edge ids of a BFS forest (deterministic)."""
        seen: set[int] = set()
        tree: list[int] = []
        for start in self._vertices:
            if start in seen:
                continue
            seen.add(start)
            frontier = [start]
            while frontier:
                nxt: list[int] = []
                for x in frontier:
                    for e in sorted(self.delta(x)):
                        y = self.other_end(e, x)
                        if y not in seen:
                            seen.add(y)
                            tree.append(e)
                            nxt.append(y)
                frontier = nxt
        return tuple(sorted(tree))

    def path_between(self, s: int, t: int, avoid: Iterable[int] = ()) -> tuple[int, ...] | None:
        """Edge ids of a shortest s-t path avoiding the given vertices, or None."""
        banned = set(avoid)
        if s in banned or t in banned:
            return None
        if s == t:
            return ()
        prev: dict[int, tuple[int, int]] = {}
        seen = {s}
        frontier = [s]
        while frontier:
            nxt: list[int] = []
            for x in frontier:
                for e in sorted(self.delta(x)):
                    y = self.other_end(e, x)
                    if y in banned or y in seen:
                        continue
                    seen.add(y)
                    prev[y] = (x, e)
                    if y == t:
                        path: list[int] = []
                        cur = t
                        while cur != s:
                            px, pe = prev[cur]
                            path.append(pe)
                            cur = px
                        return tuple(reversed(path))
                    nxt.append(y)
            frontier = nxt
        return None

    def simple_pairs(self) -> tuple[tuple[int, int], ...]:
        """Distinct adjacent vertex pairs (u < v), loops ignored."""
        pairs = {tuple(sorted((u, v))) for _, u, v in self._edges if u != v}
        return tuple(sorted(pairs))  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# Cycles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    """A cycle as a canonical edge-id sequence.

    ``key[i]`` joins ``walk[i]`` to ``walk[(i+1) % len]``.  The key is the
    lexicographically least edge sequence over all rotations and both
    orientations, so equal subgraphs compare equal.
    """

    key: tuple[int, ...]
    walk: tuple[int, ...]

    @staticmethod
    def from_walk(edge_seq: Sequence[int], vertex_seq: Sequence[int]) -> "Cycle":
        L = len(edge_seq)
        if L == 0 or L != len(vertex_seq):
            raise GraphError("cycle walk must pair one vertex with each edge")
        best: tuple[tuple[int, ...], tuple[int, ...]] | None = None
        seqs = [(tuple(edge_seq), tuple(vertex_seq))]
        rev_e = tuple(edge_seq[L - 1 - i] for i in range(L))
        rev_v = tuple(vertex_seq[(L - i) % L] for i in range(L))
        seqs.append((rev_e, rev_v))
        for es, vs in seqs:
            for r in range(L):
                cand = (es[r:] + es[:r], vs[r:] + vs[:r])
                if best is None or cand < best:
                    best = cand
        assert best is not None
        return Cycle(best[0], best[1])

    @staticmethod
    def from_edge_set(g: MultiGraph, edges: Iterable[int]) -> "Cycle":
        ids = sorted(set(edges))
        if not ids:
            raise GraphError("empty edge set is not a cycle")
        if len(ids) == 1:
            e = ids[0]
            u, v = g.endpoints(e)
            if u != v:
                raise GraphError("single non-loop edge is not a cycle")
            return Cycle((e,), (u,))
        inc: dict[int, list[int]] = {}
        for e in ids:
            u, v = g.endpoints(e)
            if u == v:
                raise GraphError("loop inside a multi-edge cycle set")
            inc.setdefault(u, []).append(e)
            inc.setdefault(v, []).append(e)
        if any(len(es) != 2 for es in inc.values()):
            raise GraphError("edge set is not 2-regular")
        e0 = ids[0]
        u0, v0 = g.endpoints(e0)
        edge_seq = [e0]
        vertex_seq = [u0]
        cur = v0
        used = {e0}
        while cur != u0:
            vertex_seq.append(cur)
            nxt = [e for e in inc[cur] if e not in used]
            if len(nxt) != 1:
                raise GraphError("edge set is not a single cycle")
            e = nxt[0]
            used.add(e)
            edge_seq.append(e)
            cur = g.other_end(e, cur)
        if len(used) != len(ids):
            raise GraphError("edge set is not connected")
        return Cycle.from_walk(edge_seq, vertex_seq)

    @cached_property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.key)

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.walk)

    def __len__(self) -> int:
        return len(self.key)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.key), self.key)


def enumerate_cycles(
    g: MultiGraph,
    max_len: int | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> tuple[Cycle, ...]:
    """All cycles of g with at most max_len edges (all of them if None).

    Raises ResourceLimitError beyond ``caps.max_cycles`` cycles.
    """
    limit = g.m if max_len is None else min(max_len, g.m)
    out: list[Cycle] = []

    def push(c: Cycle) -> None:
        out.append(c)
        if len(out) > caps.max_cycles:
            raise ResourceLimitError("enumerate_cycles", caps.max_cycles)

    if limit >= 1:
        for e in g.edge_ids:
            u, v = g.endpoints(e)
            if u == v:
                push(Cycle((e,), (u,)))
    if limit >= 2:
        for (u, v) in g.simple_pairs():
            cls = g.edges_between(u, v)
            for e, f in itertools.combinations(cls, 2):
                push(Cycle.from_walk((e, f), (u, v)))
    if limit >= 3:
        # Rooted DFS: root s = least vertex on the cycle, interior vertices
        # all exceed s, and walk[1] < walk[-1] kills the reflected copy.
        order = {v: i for i, v in enumerate(g.vertices)}
        steps: dict[int, list[tuple[int, int]]] = {
            v: sorted(
                ((g.other_end(e, v), e) for e in g.delta(v)),
                key=lambda t: (order[t[0]], t[1]),
            )
            for v in g.vertices
        }
        for s in g.vertices:
            stack: list[tuple[int, list[int], list[int], set[int]]] = [(s, [], [s], {s})]
            while stack:
                cur, epath, vpath, onpath = stack.pop()
                for (y, e) in reversed(steps[cur]):
                    if y == s and len(epath) >= 2:
                        if vpath[1] < vpath[-1]:
                            push(Cycle.from_walk(epath + [e], vpath))
                        continue
                    if order[y] <= order[s] or y in onpath:
                        continue
                    if len(epath) + 2 > limit:
                        continue
                    stack.append((y, epath + [e], vpath + [y], onpath | {y}))
    out.sort(key=Cycle.sort_key)
    return tuple(out)


# ---------------------------------------------------------------------------
# Theta subgraphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaSubgraph:
    """Union of two cycles meeting in a path; carries all three cycles.

    ``cycles`` is sorted by cycle sort key; ``edge_set`` is the union.
    """

    cycles: tuple[Cycle, Cycle, Cycle]
    edge_set: frozenset[int]

    def branch_vertices(self, g: MultiGraph) -> tuple[int, int]:
        deg: dict[int, int] = {}
        for e in self.edge_set:
            u, v = g.endpoints(e)
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        branch = sorted(v for v, d in deg.items() if d == 3)
        if len(branch) != 2:
            raise GraphError("not a theta edge set")
        return (branch[0], branch[1])


def edge_path_vertices(g: MultiGraph, edges: frozenset[int]) -> frozenset[int] | None:
    """Vertex set if `edges` forms a path with >= 1 edge, else None."""
    deg: dict[int, int] = {}
    for e in edges:
        u, v = g.endpoints(e)
        if u == v:
            return None
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    if len(deg) != len(edges) + 1:
        return None
    ends = [v for v, d in deg.items() if d == 1]
    if len(ends) != 2 or any(d > 2 for d in deg.values()):
        return None
    # connectivity: walk from one end
    inc: dict[int, list[int]] = {}
    for e in edges:
        u, v = g.endpoints(e)
        inc.setdefault(u, []).append(e)
        inc.setdefault(v, []).append(e)
    seen_e: set[int] = set()
    cur = ends[0]
    prev_e = -1
    while True:
        nxt = [e for e in inc[cur] if e != prev_e and e not in seen_e]
        if not nxt:
            break
        e = nxt[0]
        seen_e.add(e)
        cur = g.other_end(e, cur)
        prev_e = e
    if len(seen_e) != len(edges):
        return None
    return frozenset(deg)


def enumerate_theta_subgraphs(
    g: MultiGraph,
    cycles: Sequence[Cycle] | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> tuple[ThetaSubgraph, ...]:
    """All theta subgraphs, each reported once with its three cycles."""
    cyc = tuple(cycles) if cycles is not None else enumerate_cycles(g, caps=caps)
    npairs = len(cyc) * (len(cyc) - 1) // 2
    if npairs > caps.max_theta_pairs:
        raise ResourceLimitError("enumerate_theta_subgraphs", caps.max_theta_pairs)
    by_edges: dict[frozenset[int], Cycle] = {c.edge_set: c for c in cyc}
    seen: dict[frozenset[int], ThetaSubgraph] = {}
    for i, c1 in enumerate(cyc):
        for c2 in cyc[i + 1:]:
            inter = c1.edge_set & c2.edge_set
            if not inter:
                continue
            pv = edge_path_vertices(g, inter)
            if pv is None:
                continue
            if (c1.vertex_set & c2.vertex_set) != pv:
                continue
            union = c1.edge_set | c2.edge_set
            if union in seen:
                continue
            diff = c1.edge_set ^ c2.edge_set
            c3 = by_edges.get(frozenset(diff))
            if c3 is None:
                c3 = Cycle.from_edge_set(g, diff)
            trio = tuple(sorted((c1, c2, c3), key=Cycle.sort_key))
            seen[union] = ThetaSubgraph(trio, union)  # type: ignore[arg-type]
    out = sorted(seen.values(), key=lambda t: sorted(t.edge_set))
    return tuple(out)


# ---------------------------------------------------------------------------
# Vertex cuts and bridges
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bridge:
    """One bridge of a vertex cut: a component of G - X plus its edges to X."""

    vertices: frozenset[int]    # component vertices plus attachments in X
    edges: frozenset[int]
    interior: frozenset[int]    # component vertices only
    attachments: frozenset[int]


@dataclass(frozen=True)
class VertexCut:
    cut: frozenset[int]
    bridges: tuple[Bridge, ...]

    @property
    def size(self) -> int:
        return len(self.cut)


def _disconnects(g: MultiGraph, cut: frozenset[int]) -> bool:
    rest = g.vertex_set - cut
    if len(rest) < 2:
        return False
    h = g.induced(rest)
    return not h.is_connected()


def bridges_of_cut(g: MultiGraph, cut: Iterable[int]) -> tuple[Bridge, ...]:
    """Bridges of G - X for an arbitrary vertex set X (not necessarily a cut)."""
    X = frozenset(cut)
    h = g.delete_vertices(X)
    out: list[Bridge] = []
    for comp in sorted(h.components(), key=lambda c: sorted(c)):
        edges: set[int] = set()
        attach: set[int] = set()
        for e, u, v in g._edges:
            iu, iv = u in comp, v in comp
            if iu and iv:
                edges.add(e)
            elif iu and v in X:
                edges.add(e)
                attach.add(v)
            elif iv and u in X:
                edges.add(e)
                attach.add(u)
        out.append(
            Bridge(
                vertices=frozenset(comp) | frozenset(attach),
                edges=frozenset(edges),
                interior=frozenset(comp),
                attachments=frozenset(attach),
            )
        )
    return tuple(out)


def find_vertex_cuts(g: MultiGraph, k: int, caps: Caps = DEFAULT_CAPS) -> tuple[VertexCut, ...]:
    """All minimal vertex cuts of size at most k, with their bridges.

    Minimal means no proper subset disconnects.  Requires g connected.
    """
    if not g.is_connected():
        raise GraphError("find_vertex_cuts requires a connected graph")
    if k < 0:
        raise GraphError("k must be non-negative")
    cuts: list[VertexCut] = []
    verts = g.vertices
    count = 0
    for size in range(1, k + 1):
        if g.n - size < 2:
            break
        for cand in itertools.combinations(verts, size):
            count += 1
            if count > caps.max_subsets:
                raise ResourceLimitError("find_vertex_cuts", caps.max_subsets)
            X = frozenset(cand)
            if not _disconnects(g, X):
                continue
            minimal = True
            for r in range(1, size):
                for sub in itertools.combinations(cand, r):
                    if _disconnects(g, frozenset(sub)):
                        minimal = False
                        break
                if not minimal:
                    break
            if not minimal:
                continue
            cuts.append(VertexCut(X, bridges_of_cut(g, X)))
    cuts.sort(key=lambda c: (c.size, sorted(c.cut)))
    return tuple(cuts)


def is_k_connected(g: MultiGraph, k: int) -> bool:
    """No vertex cut of size < k; complete graphs count as (n-1)-connected."""
    if g.n <= k:
        return False
    if not g.is_connected():
        return k == 0
    return not find_vertex_cuts(g, k - 1)


# ---------------------------------------------------------------------------
# Blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    edges: frozenset[int]
    vertices: frozenset[int]


@dataclass(frozen=True)
class BlockTree:
    """Block-cut forest: blocks, cut vertices, and block/junction incidences.

    ``tree_edges`` joins block indices to junction vertices (vertices lying
    in two or more blocks); per component the resulting bipartite graph is a
    tree.  ``cut_vertices`` holds the true cut vertices, i.e. junctions of
    two or more non-loop blocks.
    """

    blocks: tuple[Block, ...]
    cut_vertices: frozenset[int]
    tree_edges: tuple[tuple[int, int], ...]  # (block index, junction vertex)

    def leaf_blocks(self) -> tuple[int, ...]:
        deg = [0] * len(self.blocks)
        for b, _ in self.tree_edges:
            deg[b] += 1
        return tuple(i for i, d in enumerate(deg) if d <= 1)

    def blocks_at(self, v: int) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.blocks) if v in b.vertices)


def block_tree(g: MultiGraph) -> BlockTree:
    """Blocks (maximal 2-connected subgraphs, bridges-as-K2, loops) of g."""
    blocks: list[Block] = []

    # Loops are their own blocks and never affect 2-connectivity.
    for e in g.edge_ids:
        if g.is_loop(e):
            u, _ = g.endpoints(e)
            blocks.append(Block(frozenset({e}), frozenset({u})))

    index: dict[int, int] = {}
    low: dict[int, int] = {}
    counter = itertools.count()
    estack: list[int] = []

    for root in g.vertices:
        if root in index:
            continue
        # Iterative DFS; frames are (vertex, incoming edge id, edge iterator).
        index[root] = low[root] = next(counter)
        frames: list[tuple[int, int, Iterator[int]]] = [
            (root, -1, iter(sorted(g.delta(root))))
        ]
        while frames:
            v, in_edge, it = frames[-1]
            advanced = False
            for e in it:
                if e == in_edge:
                    continue
                w = g.other_end(e, v)
                if w not in index:
                    estack.append(e)
                    index[w] = low[w] = next(counter)
                    frames.append((w, e, iter(sorted(g.delta(w)))))
                    advanced = True
                    break
                elif index[w] < index[v]:
                    estack.append(e)
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            frames.pop()
            if frames:
                pv, _, _ = frames[-1]
                low[pv] = min(low[pv], low[v])
                if low[v] >= index[pv]:
                    # pv closes a block; pop the edge stack down to in_edge.
                    comp: list[int] = []
                    while estack:
                        comp.append(estack.pop())
                        if comp[-1] == in_edge:
                            break
                    vs: set[int] = set()
                    for eid in comp:
                        a, b = g.endpoints(eid)
                        vs.add(a)
                        vs.add(b)
                    blocks.append(Block(frozenset(comp), frozenset(vs)))

    # Junctions: vertices in >= 2 blocks.  True cut vertices: junctions of
    # >= 2 non-loop blocks (a loop never makes its vertex a cut vertex).
    junction_count: dict[int, int] = {}
    nonloop_count: dict[int, int] = {}
    for b in blocks:
        isloop = len(b.edges) == 1 and len(b.vertices) == 1
        for v in b.vertices:
            junction_count[v] = junction_count.get(v, 0) + 1
            if not isloop:
                nonloop_count[v] = nonloop_count.get(v, 0) + 1
    junctions = {v for v, c in junction_count.items() if c >= 2}
    cut_vertices = {v for v, c in nonloop_count.items() if c >= 2}

    blocks_sorted = sorted(blocks, key=lambda b: sorted(b.edges))
    tree_edges: list[tuple[int, int]] = []
    for i, b in enumerate(blocks_sorted):
        for v in sorted(b.vertices):
            if v in junctions:
                tree_edges.append((i, v))
    return BlockTree(tuple(blocks_sorted), frozenset(cut_vertices), tuple(tree_edges))


def is_two_connected(g: MultiGraph) -> bool:
    """No loops, connected, no cut vertex; digons count, a single edge not."""
    if not g.is_connected():
        return False
    if any(g.is_loop(e) for e in g.edge_ids):
        return False
    if g.n == 2:
        return g.m >= 2
    if g.n < 2:
        return False
    return not find_vertex_cuts(g, 1)


def is_two_connected_or_edge(g: MultiGraph) -> bool:
    """2-connected, or a single edge (the degenerate ring part)."""
    if g.m == 1 and g.n == 2 and not g.is_loop(g.edge_ids[0]):
        return True
    return is_two_connected(g)
