"""Independent brute-force oracles used to pin expected values.

Everything here works by exhaustive subset or path enumeration and shares no
search logic with the library: cycles come from 2-regularity checks over all
edge subsets, thetas from internally disjoint path triples, linkages from
all simple path pairs.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Sequence

from tanglekit.graph import Cycle, MultiGraph


def subset_cycles(g: MultiGraph, max_len: int | None = None) -> list[frozenset[int]]:
    """All cycle edge sets of g by scanning every edge subset."""
    out: list[frozenset[int]] = []
    ids = list(g.edge_ids)
    limit = len(ids) if max_len is None else max_len
    for r in range(1, limit + 1):
        for combo in itertools.combinations(ids, r):
            if _is_cycle_set(g, combo):
                out.append(frozenset(combo))
    return out


def _is_cycle_set(g: MultiGraph, edges: Sequence[int]) -> bool:
    deg: dict[int, int] = {}
    for e in edges:
        u, v = g.endpoints(e)
        deg[u] = deg.get(u, 0) + (2 if u == v else 1)
        if u != v:
            deg[v] = deg.get(v, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    # connectivity over the touched vertices
    verts = sorted(deg)
    adj: dict[int, set[int]] = {v: set() for v in verts}
    for e in edges:
        u, v = g.endpoints(e)
        adj[u].add(v)
        adj[v].add(u)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(verts)


def path_triple_thetas(g: MultiGraph) -> set[frozenset[int]]:
    """Theta edge sets via three internally disjoint (a, b)-paths."""
    out: set[frozenset[int]] = set()
    verts = g.vertices
    for a, b in itertools.combinations(verts, 2):
        paths = _simple_paths(g, a, b)
        for p1, p2, p3 in itertools.combinations(paths, 3):
            if _internally_disjoint(g, a, b, p1, p2) and \
               _internally_disjoint(g, a, b, p1, p3) and \
               _internally_disjoint(g, a, b, p2, p3):
                out.add(frozenset(p1) | frozenset(p2) | frozenset(p3))
    return out


def _simple_paths(g: MultiGraph, s: int, t: int) -> list[tuple[int, ...]]:
    """All simple s-t paths as edge tuples (every parallel edge choice)."""
    out: list[tuple[int, ...]] = []

    def walk(cur: int, used_v: set[int], used_e: list[int]) -> None:
        if cur == t:
            out.append(tuple(used_e))
            return
        for e in sorted(g.delta(cur)):
            y = g.other_end(e, cur)
            if y in used_v and y != t:
                continue
            if y == t:
                out.append(tuple(used_e + [e]))
                continue
            used_v.add(y)
            walk(y, used_v, used_e + [e])
            used_v.remove(y)

    walk(s, {s}, [])
    return out


def _path_vertices(g: MultiGraph, path: Sequence[int], s: int) -> list[int]:
    verts = [s]
    cur = s
    for e in path:
        cur = g.other_end(e, cur)
        verts.append(cur)
    return verts


def _internally_disjoint(g: MultiGraph, a: int, b: int, p: Sequence[int], q: Sequence[int]) -> bool:
    if set(p) & set(q):
        return False
    vp = set(_path_vertices(g, p, a)) - {a, b}
    vq = set(_path_vertices(g, q, a)) - {a, b}
    return not (vp & vq)


def disjoint_path_pair(
    g: MultiGraph, s1: int, t1: int, s2: int, t2: int
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """A vertex-disjoint (s1-t1, s2-t2) path pair by full enumeration."""
    for p1 in _simple_paths(g, s1, t1):
        v1 = set(_path_vertices(g, p1, s1))
        if s2 in v1 or t2 in v1:
            continue
        rest = g.delete_vertices(v1)
        if s2 not in rest.vertex_set or t2 not in rest.vertex_set:
            continue
        sub = rest.path_between(s2, t2)
        if sub is not None:
            return (p1, sub)
    return None


def random_multigraph(
    rng: random.Random,
    max_n: int = 8,
    max_extra: int = 6,
    allow_loops: bool = False,
    allow_parallel: bool = True,
    connected: bool = True,
) -> MultiGraph:
    """A random connected multigraph with a bounded cyclomatic number."""
    n = rng.randint(2, max_n)
    verts = list(range(n))
    pairs: list[tuple[int, int]] = []
    order = verts[1:]
    rng.shuffle(order)
    grown = [verts[0]]
    for v in order:
        pairs.append((rng.choice(grown), v))
        grown.append(v)
    extra = rng.randint(0, max_extra)
    for _ in range(extra):
        u = rng.choice(verts)
        v = rng.choice(verts)
        if u == v and not allow_loops:
            continue
        if not allow_parallel and (min(u, v), max(u, v)) in {(min(a, b), max(a, b)) for a, b in pairs}:
            continue
        pairs.append((u, v))
    return MultiGraph.from_pairs(pairs)


def _class_orderings(groups: Sequence[Sequence[int]]):
    pools = [itertools.permutations(gp) for gp in groups]
    for combo in itertools.product(*pools):
        out: list[int] = []
        for part in combo:
            out.extend(part)
        yield out


def canonical_form(g: MultiGraph) -> tuple:
    """Isomorphism-invariant canonical form for small simple graphs.

    Minimum adjacency bitmask over all vertex orderings that list vertices
    by ascending degree; isomorphisms preserve degrees, so restricting to
    degree-respecting orderings keeps the form exact while staying fast.
    """
    n = g.n
    verts = list(g.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    adj: list[set[int]] = [set() for _ in range(n)]
    for e in g.edge_ids:
        u, v = g.endpoints(e)
        if u == v:
            continue
        adj[idx[u]].add(idx[v])
        adj[idx[v]].add(idx[u])
    deg = [len(a) for a in adj]
    classes: dict[int, list[int]] = {}
    for i, d in enumerate(deg):
        classes.setdefault(d, []).append(i)
    groups = [classes[d] for d in sorted(classes)]
    best: int | None = None
    for ordering in _class_orderings(groups):
        pos = {v_orig: p for p, v_orig in enumerate(ordering)}
        bits = 0
        for i in range(n):
            pi = pos[i]
            for j in adj[i]:
                if i < j:
                    a, b = (pi, pos[j]) if pi < pos[j] else (pos[j], pi)
                    bits |= 1 << (a * n + b)
        if best is None or bits < best:
            best = bits
    return (n, tuple(sorted(deg)), best)


def connected_graph_census(n: int) -> list[MultiGraph]:
    """One representative per unlabeled connected simple graph on n vertices."""
    verts = list(range(n))
    all_pairs = list(itertools.combinations(verts, 2))
    seen: set[tuple] = set()
    out: list[MultiGraph] = []
    for mask in range(1 << len(all_pairs)):
        pairs = [all_pairs[i] for i in range(len(all_pairs)) if mask >> i & 1]
        g = MultiGraph.build(verts, [(i, u, v) for i, (u, v) in enumerate(pairs)])
        if not g.is_connected():
            continue
        key = canonical_form(g)
        if key in seen:
            continue
        seen.add(key)
        out.append(g)
    return out
