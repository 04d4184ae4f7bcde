"""Structure recognition for tangled biased graphs.

This module turns the structural trichotomy into executable searches:
``decompose`` peels balanced summands at 1-, 2- and 3-vertex cuts until a
4-connected core or a generalized-wheel shape remains, the balanced-base
searches recover spanning balanced subgraphs with planar boundary
pairings, and ``classify`` matches the input against every concrete
family, attaching a re-verifiable certificate to each label it reports.

Recognition is search-based: candidate role assignments are enumerated
within the configured resource ceilings and ``verify_family`` is the
sole authority on whether a candidate counts.  ``oracle_is_tangled`` is
an independent brute-force tangledness check used to validate the
faster search elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product

from .bias import (
    AllBalanced,
    BiasedGraph,
    BiasError,
    cycles_inside,
    is_simple,
    make_explicit,
)
from .embedding import collapse_cyclic, ordered_planarity
from .families import Certificate, FamilyDescriptor, FamilyError, t_sum, verify_family
from .graph import (
    Cycle,
    MultiGraph,
    VertexCut,
    block_tree,
    bridges_of_cut,
    enumerate_cycles,
    find_vertex_cuts,
    is_two_connected,
)
from .limits import DEFAULT_CAPS, Caps, ResourceLimitError
from .tangles import (
    Balanced,
    HasBlockingVertex,
    TangleError,
    Tangled,
    TangleVerdict,
    TwoDisjointUnbalanced,
    blocking_pairs,
    is_tangled,
    standard_partition,
)


class ClassifyError(ValueError):
    """Precondition violated, or the structure bookkeeping broke down."""


class StructureFound(Exception):
    """A base search ran into one of the exceptional concrete shapes.

    Carries the verified descriptor so the caller can turn the exception
    into a classification label directly.
    """

    def __init__(self, descriptor: FamilyDescriptor, certificate: Certificate):
        super().__init__(descriptor.kind)
        self.descriptor = descriptor
        self.certificate = certificate

    @property
    def kind(self) -> str:
        return self.descriptor.kind


# Edge provenance tags used while peeling: real input edges keep their
# id, virtual edges remember which sum node introduced them and which
# cut pair (in sorted-pair order) they stand for.
_Tag = tuple


@dataclass(frozen=True)
class BalancedBase:
    """A spanning 2-connected balanced subgraph with its residual edges.

    ``pairing`` is present when the residual edges admit a planar
    boundary order: one ``(edge, x, y)`` triple per residual edge with
    all x's followed by all y's on a common face of the base.
    """

    base_edges: frozenset[int]
    residual_edges: frozenset[int]
    pairing: tuple[tuple[int, int, int], ...] | None = None


@dataclass(frozen=True)
class Label:
    """One matched structure case with its certifying evidence.

    ``witness`` is the biased graph the certificate verifies against
    when that differs from the classified input (the complete-graph
    family certifies a canonically relabelled copy); None means the
    input itself.
    """

    code: str
    kind: str
    descriptor: FamilyDescriptor | None
    certificate: Certificate | None
    witness: BiasedGraph | None = None


@dataclass(frozen=True)
class FourConnectedCore:
    """Terminal core with no vertex cut of size at most three."""

    bias: BiasedGraph
    origins: dict[int, _Tag]


@dataclass(frozen=True)
class WheelCore:
    """Terminal core matching the hub-and-ring shape, with certificate."""

    bias: BiasedGraph
    descriptor: FamilyDescriptor
    certificate: Certificate
    origins: dict[int, _Tag]


@dataclass(frozen=True)
class SumNode:
    """One peeled balanced summand.

    ``cut`` holds the separating vertices in original labels;
    ``virtual_edges`` are the shared complete-graph edge ids added to
    both sides, aligned with the sorted vertex pairs of the cut.  The
    leaf keeps original vertex labels throughout.
    """

    node_id: int
    t: int
    cut: tuple[int, ...]
    virtual_edges: tuple[int, ...]
    leaf: BiasedGraph
    leaf_origins: dict[int, _Tag]


@dataclass(frozen=True)
class SumDecomposition:
    """Peel records in order plus the terminal core.

    Recomposition folds the leaves back over the core in reverse peel
    order and reports the edge/vertex correspondence to the original.
    """

    nodes: tuple[SumNode, ...]
    core: FourConnectedCore | WheelCore

    def recompose(
        self, caps: Caps = DEFAULT_CAPS
    ) -> tuple[BiasedGraph, dict[int, int], dict[int, int]]:
        """Rebuild the input; maps rebuilt edge/vertex ids to originals."""
        bias = self.core.bias
        tags: dict[int, _Tag] = dict(self.core.origins)
        vorig = {v: v for v in bias.graph.vertex_set}
        for node in reversed(self.nodes):
            bias, tags, vorig = _fold(bias, tags, vorig, node, caps)
        emap: dict[int, int] = {}
        for e, tag in tags.items():
            if tag[0] != "real":
                raise ClassifyError(f"virtual edge {e} survived recomposition")
            emap[e] = tag[1]
        return bias, emap, vorig

    def verify(self, original: BiasedGraph, caps: Caps = DEFAULT_CAPS) -> tuple[str, ...]:
        """Failure messages; empty when recomposition matches cycle-for-cycle."""
        try:
            rebuilt, emap, vmap = self.recompose(caps)
        except (ClassifyError, FamilyError, BiasError, TangleError) as err:
            return (f"recomposition failed: {err}",)
        fails: list[str] = []
        g0 = original.graph
        if sorted(emap) != sorted(rebuilt.graph.edge_id_set):
            fails.append("edge bookkeeping does not cover the rebuilt graph")
        if sorted(emap.values()) != sorted(g0.edge_id_set):
            fails.append("rebuilt edges do not map one-to-one onto the original edges")
        if sorted(vmap) != sorted(rebuilt.graph.vertex_set) or sorted(
            set(vmap.values())
        ) != sorted(g0.vertex_set) or len(set(vmap.values())) != len(vmap):
            fails.append("vertex bookkeeping is not a bijection onto the original")
        if fails:
            return tuple(fails)
        for e in sorted(emap):
            if {vmap[v] for v in rebuilt.graph.endpoints(e)} != set(
                g0.endpoints(emap[e])
            ):
                fails.append(f"rebuilt edge {e} maps to {emap[e]} with other endpoints")
                return tuple(fails)
        for c in rebuilt.cycles(caps):
            oc = Cycle.from_edge_set(g0, frozenset(emap[e] for e in c.edge_set))
            if rebuilt.balance(c) != original.balance(oc):
                fails.append(
                    "cycle through original edges "
                    f"{sorted(emap[e] for e in c.edge_set)} changes balance"
                )
                return tuple(fails)
        return ()


@dataclass(frozen=True)
class ClassificationReport:
    """Verdict plus every structure case the input matched."""

    verdict: TangleVerdict
    labels: tuple[Label, ...]
    decomposition: SumDecomposition | None
    trace: tuple[str, ...]

    def codes(self) -> tuple[str, ...]:
        return tuple(sorted({label.code for label in self.labels}))

    def label(self, code: str) -> Label:
        for label in self.labels:
            if label.code == code:
                return label
        raise KeyError(code)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def _scan_cycles(g: MultiGraph, caps: Caps) -> tuple[frozenset[int], ...]:
    """Every cycle edge set, by plain path extension from each start vertex."""
    found: set[frozenset[int]] = set()

    def push(edges: frozenset[int]) -> None:
        found.add(edges)
        if len(found) > caps.max_cycles:
            raise ResourceLimitError("oracle cycle scan", caps.max_cycles)

    for e in g.edge_ids:
        u, v = g.endpoints(e)
        if u == v:
            push(frozenset({e}))
    rank = {v: i for i, v in enumerate(sorted(g.vertex_set))}
    for start in sorted(g.vertex_set):
        stack: list[tuple[int, tuple[int, ...], frozenset[int]]] = [
            (start, (), frozenset({start}))
        ]
        while stack:
            at, path, seen = stack.pop()
            for e in g.incident_edges(at):
                if g.is_loop(e) or e in path:
                    continue
                w = g.other_end(e, at)
                if w == start:
                    if path:
                        push(frozenset((*path, e)))
                elif w not in seen and rank[w] > rank[start]:
                    stack.append((w, (*path, e), seen | {w}))
    return tuple(found)


def oracle_is_tangled(o: BiasedGraph, caps: Caps = DEFAULT_CAPS) -> TangleVerdict:
    """Tangledness verdict by definitional scan over every cycle.

    Independent of the main search: cycles come from a plain path
    enumeration here, disjointness and covers are checked pairwise and
    per vertex.  Only usable up to ``caps.oracle_vertices`` vertices.
    """
    if o.graph.n > caps.oracle_vertices:
        raise ResourceLimitError("brute-force tangle oracle", caps.oracle_vertices)
    unbalanced: list[Cycle] = []
    for edges in _scan_cycles(o.graph, caps):
        c = Cycle.from_edge_set(o.graph, edges)
        if not o.balance(c):
            unbalanced.append(c)
    if not unbalanced:
        return Balanced()
    unbalanced.sort(key=lambda c: c.sort_key())
    for c1, c2 in combinations(unbalanced, 2):
        if not c1.vertex_set & c2.vertex_set:
            return TwoDisjointUnbalanced(c1, c2)
    common = frozenset(o.graph.vertex_set)
    for c in unbalanced:
        common &= c.vertex_set
    if common:
        return HasBlockingVertex(min(common))
    return Tangled()


# ---------------------------------------------------------------------------
# Balanced-subgraph search
# ---------------------------------------------------------------------------


def _maximal_balanced_sets(o: BiasedGraph, caps: Caps = DEFAULT_CAPS) -> tuple[frozenset[int], ...]:
    """Inclusion-maximal balanced edge sets, largest first.

    An edge set is balanced iff its complement meets every unbalanced
    cycle, so the search enumerates minimal transversals of the
    unbalanced cycles by branching on the first unhit cycle.
    """
    unb = sorted(
        {c.edge_set for c in o.unbalanced_cycles(caps)},
        key=lambda s: (len(s), sorted(s)),
    )
    all_edges = o.graph.edge_id_set
    removed_sets: set[frozenset[int]] = set()
    seen: set[frozenset[int]] = set()

    def walk(removed: frozenset[int]) -> None:
        if removed in seen:
            return
        if len(seen) >= caps.max_subsets:
            raise ResourceLimitError("balanced subgraph search", caps.max_subsets)
        seen.add(removed)
        for cyc in unb:
            if not cyc & removed:
                for e in sorted(cyc):
                    walk(removed | {e})
                return
        removed_sets.add(removed)

    walk(frozenset())
    sets = {all_edges - r for r in removed_sets}
    maximal = [s for s in sets if not any(s < t for t in sets)]
    maximal.sort(key=lambda s: (-len(s), sorted(s)))
    return tuple(maximal)


@dataclass
class _Counter:
    """Candidate counter shared across one search stage."""

    caps: Caps
    stage: str
    count: int = 0

    def bump(self) -> None:
        self.count += 1
        if self.count > self.caps.max_assignments:
            raise ResourceLimitError(self.stage, self.caps.max_assignments)


def _pairing_search(
    o: BiasedGraph, base_edges: frozenset[int], caps: Caps
) -> tuple[tuple[int, int, int], ...] | None:
    """Orient and order the residual edges onto one face of the base.

    Returns ``(edge, x, y)`` triples such that (x_1..x_m, y_1..y_m) is
    realized on a common face of the base, or None.
    """
    g = o.graph
    residual = sorted(g.edge_id_set - base_edges)
    if not residual or any(g.is_loop(e) for e in residual):
        return None
    base_sub = g.subgraph(base_edges, g.vertex_set)
    counter = _Counter(caps, "planar boundary pairing search")
    m = len(residual)
    first = residual[0]
    for perm in permutations(residual[1:]):
        order = (first, *perm)
        for bits in range(1 << m):
            counter.bump()
            xs: list[int] = []
            ys: list[int] = []
            for i, e in enumerate(order):
                u, v = g.endpoints(e)
                if bits >> i & 1:
                    u, v = v, u
                xs.append(u)
                ys.append(v)
            seq = collapse_cyclic((*xs, *ys))
            if len(set(seq)) != len(seq):
                continue
            if ordered_planarity(base_sub, seq, caps=caps) is not None:
                return tuple(zip(order, xs, ys))
    return None


# ---------------------------------------------------------------------------
# Family detectors
#
# Each detector enumerates candidate role assignments for one family and
# returns (descriptor, certificate, witness) on the first assignment
# that verify_family accepts, else None.  The witness is the biased
# graph the certificate binds to when that is not the input itself.
# ---------------------------------------------------------------------------

_Hit = tuple[FamilyDescriptor, Certificate, BiasedGraph | None]


def _detect_k5_parallel(o: BiasedGraph, caps: Caps, msets: tuple[frozenset[int], ...]) -> _Hit | None:
    """Complete graph on five vertices with parallel classes, relabelled canonically."""
    g = o.graph
    if g.n != 5 or any(g.is_loop(e) for e in g.edge_ids):
        return None
    vs = sorted(g.vertex_set)
    mults: list[int] = []
    emap: dict[int, int] = {}
    next_id = 0
    pairs: list[tuple[int, int]] = []
    for i, j in combinations(range(5), 2):
        between = sorted(g.edges_between(vs[i], vs[j]))
        if not between:
            return None
        mults.append(len(between))
        for e in between:
            emap[e] = next_id
            next_id += 1
            pairs.append((i, j))
    if len(emap) != g.m:
        return None
    canon_g = MultiGraph.from_pairs(pairs, vertices=range(5))
    balanced = [
        frozenset(emap[e] for e in c.edge_set) for c in o.balanced_cycles(caps)
    ]
    witness = make_explicit(canon_g, balanced, check=True, caps=caps)
    d = FamilyDescriptor(
        "K5Parallel",
        canon_g,
        {"mults": tuple(mults), "vertex_order": tuple(vs)},
    )
    cert = verify_family(witness, d, caps)
    if cert.passed:
        return d, cert, witness
    return None


def _detect_fat_triangle(o: BiasedGraph, caps: Caps, msets: tuple[frozenset[int], ...]) -> _Hit | None:
    """Three corners whose pairwise parallel classes carry the residual edges."""
    g = o.graph
    if g.n < 3 or any(g.is_loop(e) for e in g.edge_ids):
        return None
    residuals = [g.edge_id_set - m for m in msets]
    for a, b, c in combinations(sorted(g.vertex_set), 3):
        fab = frozenset(g.edges_between(a, b))
        fbc = frozenset(g.edges_between(b, c))
        fca = frozenset(g.edges_between(c, a))
        if not (fab and fbc and fca):
            continue
        full = fab | fbc | fca
        fats = {full}
        for r in residuals:
            if r and r <= full and r & fab and r & fbc and r & fca:
                fats.add(frozenset(r))
        for fat in sorted(fats, key=lambda s: (len(s), sorted(s))):
            d = FamilyDescriptor(
                "FatTriangle",
                g,
                {"v": (a, b, c), "f12": fat & fab, "f23": fat & fbc, "f31": fat & fca},
            )
            cert = verify_family(o, d, caps)
            if cert.passed:
                return d, cert, None
    return None


def _detect_criss_cross(o: BiasedGraph, caps: Caps, msets: tuple[frozenset[int], ...]) -> _Hit | None:
    """Degree-4 apex with two crossing chords over a planar rest."""
    g = o.graph
    for w in sorted(g.vertex_set):
        spokes = sorted(g.incident_edges(w))
        if len(spokes) != 4 or any(g.is_loop(e) for e in spokes):
            continue
        ends = [g.other_end(e, w) for e in spokes]
        if len(set(ends)) != 4:
            continue
        for (p, q), (r, s) in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
            for f0 in sorted(g.edges_between(ends[p], ends[q])):
                for f1 in sorted(g.edges_between(ends[r], ends[s])):
                    for idx in ((p, r, q, s), (p, s, q, r)):
                        es = tuple(spokes[i] for i in idx)
                        us = tuple(ends[i] for i in idx)
                        h = g.edge_id_set - set(es) - {f0, f1}
                        d = FamilyDescriptor(
                            "CrissCross",
                            g,
                            {
                                "h_edges": frozenset(h),
                                "u": us,
                                "w": w,
                                "e": es,
                                "f": (f0, f1),
                            },
                        )
                        cert = verify_family(o, d, caps)
                        if cert.passed:
                            return d, cert, None
    return None


def _detect_pp_signed(o: BiasedGraph, caps: Caps, msets: tuple[frozenset[int], ...]) -> _Hit | None:
    """Spanning 2-connected base with all residual edges on one face pairing."""
    g = o.graph
    for m in msets:
        sub = g.subgraph(m)
        if sub.vertex_set != g.vertex_set or not is_two_connected(sub):
            continue
        pairing = _pairing_search(o, m, caps)
        if pairing is None:
            continue
        d = FamilyDescriptor(
            "PPSigned",
            g,
            {
                "xs": tuple(x for _, x, _ in pairing),
                "ys": tuple(y for _, _, y in pairing),
                "cross": tuple(e for e, _, _ in pairing),
            },
        )
        cert = verify_family(o, d, caps)
        if cert.passed:
            return d, cert, None
    return None


def _detect_special_vertex(o: BiasedGraph, caps: Caps, msets: tuple[frozenset[int], ...]) -> _Hit | None:
    """Degree-4 special vertex joining two planar halves, residual legs across."""
    g = o.graph
    counter = _Counter(caps, "special-vertex search")
    for m in msets:
        residual = sorted(g.edge_id_set - m)
        if len(residual) < 2 or any(g.is_loop(e) for e in residual):
            continue
        for w in sorted(g.vertex_set):
            if len(g.incident_edges(w)) != 4:
                continue
            rw = [e for e in residual if w in g.endpoints(e)]
            bw = sorted(e for e in m if w in g.endpoints(e))
            if len(rw) != 2 or len(bw) != 2:
                continue
            legs = [e for e in residual if e not in rw]
            for g1, g2 in ((rw[0], rw[1]), (rw[1], rw[0])):
                u1, u2 = g.other_end(g1, w), g.other_end(g2, w)
                if u1 == u2:
                    continue
                for wz1, wz2 in ((bw[0], bw[1]), (bw[1], bw[0])):
                    z1, z2 = g.other_end(wz1, w), g.other_end(wz2, w)
                    if z1 == z2:
                        continue
                    for uu in sorted(set(g.edges_between(u1, u2)) & m):
                        for zz in sorted(set(g.edges_between(z1, z2)) & m):
                            if uu == zz:
                                continue
                            halves = m - {uu, zz, wz1, wz2}
                            sides = g.subgraph(halves)
                            if sides.vertex_set != g.vertex_set - {w}:
                                continue
                            comps = sides.components()
                            if len(comps) != 2:
                                continue
                            side1 = next(cc for cc in comps if u1 in cc)
                            side2 = next(cc for cc in comps if u1 not in cc)
                            if not {u1, z2} <= side1 or not {u2, z1} <= side2:
                                continue
                            h1 = frozenset(
                                e for e in halves if set(g.endpoints(e)) <= side1
                            )
                            h2 = halves - h1
                            spans: list[tuple[int, int]] = []
                            ok = True
                            for e in legs:
                                a, b = g.endpoints(e)
                                if a in side1 and b in side2:
                                    spans.append((a, b))
                                elif b in side1 and a in side2:
                                    spans.append((b, a))
                                else:
                                    ok = False
                                    break
                            if not ok:
                                continue
                            for perm in permutations(range(len(legs))):
                                counter.bump()
                                xs = tuple(spans[i][0] for i in perm)
                                ys = tuple(spans[i][1] for i in perm)
                                if len(set((*xs, u1, z2))) != len(xs) + 2:
                                    continue
                                if len(set((*ys, z1, u2))) != len(ys) + 2:
                                    continue
                                d = FamilyDescriptor(
                                    "PPSpecialVertex",
                                    g,
                                    {
                                        "h1_edges": h1,
                                        "h2_edges": h2,
                                        "xs": xs,
                                        "ys": ys,
                                        "u": (u1, u2),
                                        "z": (z1, z2),
                                        "w": w,
                                        "bridge_edges": (zz, uu),
                                        "hub_edges": (wz1, wz2),
                                        "g": (g1, g2),
                                        "f": tuple(legs[i] for i in perm),
                                    },
                                )
                                cert = verify_family(o, d, caps)
                                if cert.passed:
                                    return d, cert, None
    return None


def _detect_special_pair(o: BiasedGraph, caps: Caps, msets: tuple[frozenset[int], ...]) -> _Hit | None:
    """Two junction vertices carrying every residual edge as stars or links."""
    g = o.graph
    for m in msets:
        residual = frozenset(g.edge_id_set) - m
        if not residual or any(g.is_loop(e) for e in residual):
            continue
        rs = sorted(residual)
        a, b = g.endpoints(rs[0])
        candidates: set[tuple[int, int]] = set()
        for x in (a, b):
            rest = [e for e in rs if x not in g.endpoints(e)]
            if not rest:
                for y in sorted(g.vertex_set - {x}):
                    candidates.add((x, y))
                continue
            for y in g.endpoints(rest[0]):
                if all(
                    x in g.endpoints(e) or y in g.endpoints(e) for e in rs
                ):
                    candidates.add((x, y))
        for x, y in sorted(candidates):
            if x == y:
                continue
            links = tuple(
                sorted(e for e in rs if frozenset(g.endpoints(e)) == frozenset({x, y}))
            )
            fx = frozenset(e for e in rs if x in g.endpoints(e)) - set(links)
            fy = frozenset(e for e in rs if y in g.endpoints(e)) - set(links)
            if set(links) | fx | fy != residual:
                continue
            xv = [g.other_end(e, x) for e in sorted(fx)]
            yv = [g.other_end(e, y) for e in sorted(fy)]
            if len(set(xv)) != len(xv) or len(set(yv)) != len(yv):
                continue
            xset, yset = frozenset(xv), frozenset(yv)
            if {x, y} & (xset | yset) or len(xset & yset) > 1:
                continue
            d = FamilyDescriptor(
                "PPSpecialPair",
                g,
                {"x": x, "y": y, "X": xset, "Y": yset, "fx": fx, "fy": fy, "e": links},
            )
            cert = verify_family(o, d, caps)
            if cert.passed:
                return d, cert, None
    return None


def _detect_special_triple(o: BiasedGraph, caps: Caps, msets: tuple[frozenset[int], ...]) -> _Hit | None:
    """One star source covering all residual edges but a single cross edge."""
    g = o.graph
    for m in msets:
        residual = sorted(g.edge_id_set - m)
        if len(residual) < 2 or any(g.is_loop(e) for e in residual):
            continue
        for f in residual:
            rest = [e for e in residual if e != f]
            for x in sorted(set(g.endpoints(rest[0]))):
                if not all(x in g.endpoints(e) for e in rest):
                    continue
                ya, yb = g.endpoints(f)
                if x in (ya, yb):
                    continue
                for y1, y2 in ((ya, yb), (yb, ya)):
                    es = tuple(
                        sorted(
                            e
                            for e in rest
                            if frozenset(g.endpoints(e)) == frozenset({x, y1})
                        )
                    )
                    if not es:
                        continue
                    gs = tuple(
                        sorted(
                            e
                            for e in rest
                            if frozenset(g.endpoints(e)) == frozenset({x, y2})
                        )
                    )
                    star = frozenset(rest) - set(es) - set(gs)
                    ends = [g.other_end(e, x) for e in sorted(star)]
                    if len(set(ends)) != len(ends):
                        continue
                    xset = frozenset(ends)
                    if xset & {x, y1, y2}:
                        continue
                    d = FamilyDescriptor(
                        "PPSpecialTriple",
                        g,
                        {
                            "x": x,
                            "y1": y1,
                            "y2": y2,
                            "X": xset,
                            "F": star,
                            "e": es,
                            "g": gs,
                            "f": f,
                        },
                    )
                    cert = verify_family(o, d, caps)
                    if cert.passed:
                        return d, cert, None
    return None


# -- ring helpers shared by the wheel and tricoloured detectors ------------


def _pair_components(sub: MultiGraph, hinges: frozenset[int]) -> dict[frozenset[int], frozenset[int]] | None:
    """Edges of sub grouped by the hinge pair they span, or None.

    Fails when some component of sub - hinges does not attach to exactly
    two hinges, or some edge evades the grouping.
    """
    groups: dict[frozenset[int], set[int]] = {}
    for b in bridges_of_cut(sub, hinges):
        if len(b.attachments) != 2:
            return None
        groups.setdefault(b.attachments, set()).update(b.edges)
    for u, v in combinations(sorted(hinges), 2):
        between = sub.edges_between(u, v)
        if between:
            groups.setdefault(frozenset({u, v}), set()).update(between)
    covered: set[int] = set()
    for es in groups.values():
        covered |= es
    if covered != set(sub.edge_ids):
        return None
    return {pair: frozenset(es) for pair, es in groups.items()}


def _hamiltonian_support(pairs: set[frozenset[int]], hinges: tuple[int, ...]) -> tuple[int, ...] | None:
    """Cyclic hinge order when the pairs form a single cycle through all hinges."""
    if len(pairs) != len(hinges) or len(hinges) < 3:
        return None
    adj: dict[int, list[int]] = {v: [] for v in hinges}
    for p in pairs:
        u, v = sorted(p)
        if u not in adj or v not in adj:
            return None
        adj[u].append(v)
        adj[v].append(u)
    if any(len(nbrs) != 2 for nbrs in adj.values()):
        return None
    start = min(hinges)
    order = [start]
    prev = -1
    while len(order) < len(hinges):
        nxt = [w for w in adj[order[-1]] if w != prev]
        if not nxt:
            return None
        prev = order[-1]
        order.append(nxt[0])
    if len(set(order)) != len(hinges) or start not in adj[order[-1]]:
        return None
    return tuple(order)


def _detect_generalized_wheel(o: BiasedGraph, caps: Caps, msets: tuple[frozenset[int], ...]) -> _Hit | None:
    """Hub vertex whose removal leaves a ring of parts joined at hinges."""
    g = o.graph
    counter = _Counter(caps, "generalized-wheel search")
    for hub in sorted(g.vertex_set):
        spokes = frozenset(g.incident_edges(hub))
        if not spokes or any(g.is_loop(e) for e in spokes):
            continue
        rim = g.edge_id_set - spokes
        if not rim:
            continue
        rim_sub = g.subgraph(rim)
        if rim_sub.vertex_set != g.vertex_set - {hub}:
            continue
        rim_vertices = sorted(rim_sub.vertex_set)
        for k in range(2, min(len(rim_vertices), 6) + 1):
            for hinge_set in combinations(rim_vertices, k):
                counter.bump()
                groups = _pair_components(rim_sub, frozenset(hinge_set))
                if not groups:
                    continue
                if k == 2:
                    if set(groups) != {frozenset(hinge_set)}:
                        continue
                    atoms = _ring_atoms(rim_sub, frozenset(hinge_set))
                    if atoms is None or len(atoms) < 2:
                        continue
                    for mask in range(1, 1 << (len(atoms) - 1)):
                        counter.bump()
                        part_a = frozenset(
                            e
                            for i, es in enumerate(atoms)
                            if mask >> i & 1 == 0
                            for e in es
                        )
                        part_b = frozenset(rim) - part_a
                        if not part_a or not part_b:
                            continue
                        hit = _wheel_candidate(
                            o, hub, hinge_set, (part_a, part_b), spokes, caps, counter
                        )
                        if hit:
                            return hit
                else:
                    order = _hamiltonian_support(set(groups), hinge_set)
                    if order is None:
                        continue
                    parts = tuple(
                        groups[frozenset({order[i], order[(i + 1) % k]})]
                        for i in range(k)
                    )
                    hinges = tuple(order[(i + 1) % k] for i in range(k))
                    hit = _wheel_candidate(o, hub, hinges, parts, spokes, caps, counter)
                    if hit:
                        return hit
    return None


def _ring_atoms(sub: MultiGraph, hinges: frozenset[int]) -> tuple[frozenset[int], ...] | None:
    """Indivisible edge groups between a 2-element hinge set."""
    atoms: list[frozenset[int]] = []
    for b in bridges_of_cut(sub, hinges):
        if b.attachments != hinges:
            return None
        atoms.append(frozenset(b.edges))
    u, v = sorted(hinges)
    for e in sub.edges_between(u, v):
        atoms.append(frozenset({e}))
    return tuple(atoms)


def _wheel_candidate(
    o: BiasedGraph,
    hub: int,
    hinges: tuple[int, ...],
    parts: tuple[frozenset[int], ...],
    spokes: frozenset[int],
    caps: Caps,
    counter: _Counter,
) -> _Hit | None:
    """Try every attachment split of the given ring against the planner.

    Splits are filtered per part first: only those whose part subgraph
    orders planarly with the part hinges survive into the full check.
    """
    g = o.graph
    k = len(parts)
    options: list[list[tuple[frozenset[int], frozenset[int]] | None]] = []
    for i, pe in enumerate(parts):
        sub = g.subgraph(pe)
        if len(pe) == 1 and sub.n == 2:
            options.append([None])
            continue
        if not is_two_connected(sub):
            return None
        if k == 2:
            z_prev, z_cur = hinges[0], hinges[1]
        else:
            z_prev, z_cur = hinges[i - 1], hinges[i]
        attach = sorted(
            v
            for v in sub.vertex_set - {z_prev, z_cur}
            if g.edges_between(hub, v)
        )
        if len(attach) < 2:
            return None
        opts: list[tuple[frozenset[int], frozenset[int]] | None] = []
        rest = attach[1:]
        for r in range(len(rest) + 1):
            for extra in combinations(rest, r):
                xs = frozenset({attach[0], *extra})
                ys = frozenset(attach) - xs
                if not ys:
                    continue
                counter.bump()
                if ordered_planarity(sub, (z_prev, xs, z_cur, ys), caps=caps):
                    opts.append((xs, ys))
        if not opts:
            return None
        options.append(opts)
    for combo in product(*options):
        counter.bump()
        d = FamilyDescriptor(
            "GeneralizedWheel",
            g,
            {"hub": hub, "hinges": tuple(hinges), "parts": parts, "xy": tuple(combo)},
        )
        cert = verify_family(o, d, caps)
        if cert.passed:
            return d, cert, None
    return None


def _weak_compositions(total: int, slots: int) -> tuple[tuple[int, ...], ...]:
    if slots == 0:
        return ((),) if total == 0 else ()
    out = []
    for bars in combinations(range(total + slots - 1), slots - 1):
        prev = -1
        comp = []
        for b in (*bars, total + slots - 1):
            comp.append(b - prev - 1)
            prev = b
        out.append(tuple(comp))
    return tuple(out)


def _detect_tricoloured(o: BiasedGraph, caps: Caps, msets: tuple[frozenset[int], ...]) -> _Hit | None:
    """Six-part ring with three antipodal chord classes.

    Candidates are anchored on the three chord sources: the search
    picks three vertices, a target set with one chord edge per target
    at each, and then fits the remaining edges into a ring of parts.
    Chords ending on another chosen source are not considered.
    """
    g = o.graph
    if g.n < 4 or any(g.is_loop(e) for e in g.edge_ids):
        return None
    counter = _Counter(caps, "tricoloured search")
    for trip in combinations(sorted(g.vertex_set), 3):
        tset = set(trip)
        stars: list[dict[int, list[int]]] = []
        for x in trip:
            by_target: dict[int, list[int]] = {}
            for e in sorted(g.incident_edges(x)):
                far = g.other_end(e, x)
                if far not in tset:
                    by_target.setdefault(far, []).append(e)
            if not by_target:
                stars = []
                break
            stars.append(by_target)
        if not stars:
            continue
        for choice in product(*(_star_choices(s) for s in stars)):
            counter.bump()
            # Target sets land in pairwise distinct ring parts, which
            # overlap in at most a hinge.
            if any(
                len(set(a[0]) & set(b[0])) > 1
                for a, b in combinations(choice, 2)
            ):
                continue
            chords = {e for _, es in choice for e in es}
            ring_edges = g.edge_id_set - chords
            core = g.subgraph(ring_edges, g.vertex_set)
            if not is_two_connected(core):
                continue
            hit = _fit_tricoloured(o, trip, choice, ring_edges, caps, counter)
            if hit:
                return hit
    return None


def _star_choices(by_target: dict[int, list[int]]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every (targets, one edge per target) choice for one chord source."""
    targets = sorted(by_target)
    out: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for r in range(1, len(targets) + 1):
        for ts in combinations(targets, r):
            for es in product(*(sorted(by_target[t]) for t in ts)):
                out.append((ts, es))
    return out


def _fit_tricoloured(
    o: BiasedGraph,
    trip: tuple[int, int, int],
    choice: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...],
    ring_edges: frozenset[int],
    caps: Caps,
    counter: _Counter,
) -> _Hit | None:
    g = o.graph
    sub = g.subgraph(ring_edges)
    verts = sorted(sub.vertex_set)
    pairs = [
        (x, frozenset(targets), tuple(edges))
        for x, (targets, edges) in zip(trip, choice)
    ]
    for k in range(3, min(len(verts), 6) + 1):
        for hinge_set in combinations(verts, k):
            counter.bump()
            groups = _pair_components(sub, frozenset(hinge_set))
            if not groups:
                continue
            order = _hamiltonian_support(set(groups), hinge_set)
            if order is None:
                continue
            base_parts = [
                groups[frozenset({order[i], order[(i + 1) % k]})] for i in range(k)
            ]
            base_pvs = [g.subgraph(pe).vertex_set for pe in base_parts]
            # Every target set must land inside one ring part; parts are
            # the base parts or single support hinges, so rule the ring
            # out wholesale when some target set fits neither.
            hinge_singles = {frozenset({h}) for h in order}
            if not all(
                any(yset <= pv for pv in base_pvs) or yset in hinge_singles
                for _, yset, _ in pairs
            ):
                continue
            for slots in _weak_compositions(6 - k, k):
                ring: list[tuple[frozenset[int], frozenset[int]]] = []
                for i in range(k):
                    ring.append((base_pvs[i], base_parts[i]))
                    hinge = order[(i + 1) % k]
                    for _ in range(slots[i]):
                        ring.append((frozenset({hinge}), frozenset()))
                hit = _tricoloured_arrangements(o, pairs, ring, caps, counter)
                if hit:
                    return hit
    return None


_COLOUR_PATTERNS = (frozenset({0, 1, 2}), frozenset({0, 2, 4}))


def _tricoloured_arrangements(
    o: BiasedGraph,
    pairs: list[tuple[int, frozenset[int], tuple[int, ...]]],
    ring: list[tuple[frozenset[int], frozenset[int]]],
    caps: Caps,
    counter: _Counter,
) -> _Hit | None:
    g = o.graph
    seen: set[tuple[frozenset[int], ...]] = set()
    for cycle in (ring, ring[::-1]):
        for shift in range(6):
            arrangement = cycle[shift:] + cycle[:shift]
            pv6 = tuple(pv for pv, _ in arrangement)
            if pv6 in seen:
                continue
            seen.add(pv6)
            admissible: list[tuple[int, ...]] = []
            for x, yset, _ in pairs:
                spots = tuple(
                    i
                    for i in range(6)
                    if x in pv6[i] and yset <= pv6[(i + 3) % 6]
                )
                if not spots:
                    break
                admissible.append(spots)
            if len(admissible) != 3:
                continue
            hinges6: list[int] = []
            ok = True
            for i in range(6):
                meet = pv6[i] & pv6[(i + 1) % 6]
                if len(meet) != 1:
                    ok = False
                    break
                hinges6.append(next(iter(meet)))
            if not ok:
                continue
            pe6 = tuple(pe for _, pe in arrangement)
            for colours in _COLOUR_PATTERNS:
                positions = sorted(colours)
                for perm in permutations(range(3)):
                    if any(
                        positions[slot] not in admissible[perm[slot]]
                        for slot in range(3)
                    ):
                        continue
                    xs6: list[int | None] = [None] * 6
                    ys6: list[frozenset[int] | None] = [None] * 6
                    es6: list[tuple[int, ...] | None] = [None] * 6
                    for slot, i in enumerate(positions):
                        x, yset, edges = pairs[perm[slot]]
                        xs6[i] = x
                        ys6[i] = yset
                        es6[i] = edges
                    counter.bump()
                    d = FamilyDescriptor(
                        "Tricoloured",
                        g,
                        {
                            "part_vertices": pv6,
                            "part_edges": pe6,
                            "hinges": tuple(hinges6),
                            "I": colours,
                            "xs": tuple(xs6),
                            "ysets": tuple(ys6),
                            "esets": tuple(es6),
                        },
                    )
                    cert = verify_family(o, d, caps)
                    if cert.passed:
                        return d, cert, None
    return None


# Detector battery in case-label order.
_DETECTORS: tuple[tuple[str, str, object], ...] = (
    ("T1a", "PPSigned", _detect_pp_signed),
    ("T1b", "GeneralizedWheel", _detect_generalized_wheel),
    ("T1c", "CrissCross", _detect_criss_cross),
    ("T1d", "FatTriangle", _detect_fat_triangle),
    ("T1e", "PPSpecialVertex", _detect_special_vertex),
    ("T1f", "PPSpecialPair", _detect_special_pair),
    ("T1g", "PPSpecialTriple", _detect_special_triple),
    ("T1h", "Tricoloured", _detect_tricoloured),
    ("T2", "K5Parallel", _detect_k5_parallel),
)


# ---------------------------------------------------------------------------
# Balanced-base searches
# ---------------------------------------------------------------------------


def find_balanced_base(o: BiasedGraph, caps: Caps = DEFAULT_CAPS) -> BalancedBase:
    """Best spanning 2-connected balanced subgraph, largest edge set first.

    When none spans 2-connectedly, a 4-connected input must contain one
    of the two exceptional shapes; the matching verified structure is
    raised as ``StructureFound``.  4-connectivity is the regime in
    which that alternative is guaranteed, not a checked precondition.
    """
    g = o.graph
    if not is_simple(o):
        raise ClassifyError("balanced-base search needs a simple input")
    if g.n < 6:
        raise ClassifyError("balanced-base search needs at least six vertices")
    verdict = is_tangled(o, caps)
    if not isinstance(verdict, Tangled):
        raise ClassifyError(
            f"balanced-base search needs a tangled input, verdict is {type(verdict).__name__}"
        )
    msets = _maximal_balanced_sets(o, caps)
    for m in msets:
        sub = g.subgraph(m)
        if sub.vertex_set == g.vertex_set and is_two_connected(sub):
            return BalancedBase(m, g.edge_id_set - m, None)
    hit = _detect_criss_cross(o, caps, msets) or _detect_special_triple(o, caps, msets)
    if hit:
        raise StructureFound(hit[0], hit[1])
    raise ClassifyError(
        "no spanning 2-connected balanced subgraph, and neither exceptional shape matched"
    )


def find_planar_balanced_base(
    o: BiasedGraph, caps: Caps = DEFAULT_CAPS, base: BalancedBase | None = None
) -> BalancedBase:
    """Balanced base whose residual edges order onto one face.

    When the residual edges concentrate on at most three vertices the
    input is a fat triangle instead; that shape (and a fat triangle
    found after a failed pairing search) is raised as ``StructureFound``.
    """
    if base is None:
        base = find_balanced_base(o, caps)
    g = o.graph
    span = frozenset(v for e in base.residual_edges for v in g.endpoints(e))
    if len(span) <= 3:
        hit = _detect_fat_triangle(o, caps, _maximal_balanced_sets(o, caps))
        if hit:
            raise StructureFound(hit[0], hit[1])
        raise ClassifyError(
            "residual edges sit on at most three vertices but no fat triangle verified"
        )
    pairing = _pairing_search(o, base.base_edges, caps)
    if pairing is not None:
        return BalancedBase(base.base_edges, base.residual_edges, pairing)
    hit = _detect_fat_triangle(o, caps, _maximal_balanced_sets(o, caps))
    if hit:
        raise StructureFound(hit[0], hit[1])
    raise ClassifyError("no planar boundary pairing and no fat triangle matched")


# ---------------------------------------------------------------------------
# Decomposition at small vertex cuts
# ---------------------------------------------------------------------------


def _side_balanced(cur: BiasedGraph, edges: frozenset[int], caps: Caps) -> bool:
    return all(cur.balance(c) for c in cycles_inside(cur, edges, caps))


def decompose(o: BiasedGraph, caps: Caps = DEFAULT_CAPS) -> SumDecomposition:
    """Peel balanced summands at vertex cuts of size at most three.

    At 1- and 2-cuts exactly one side is unbalanced and a balanced side
    is split off.  At 3-cuts balanced sides with interior of two or more
    vertices are peeled first, then single-interior sides.  The loop
    ends at a core with no small cut, or, when every remaining 3-cut
    side is unbalanced, at the hub-and-ring shape, which is extracted
    and certified as a generalized wheel.
    """
    if not o.graph.is_connected():
        raise ClassifyError("decompose needs a connected input")
    verdict = is_tangled(o, caps)
    if not isinstance(verdict, Tangled):
        raise ClassifyError(
            f"decompose needs a tangled input, verdict is {type(verdict).__name__}"
        )
    cur = o
    tags: dict[int, _Tag] = {e: ("real", e) for e in o.graph.edge_id_set}
    nodes: list[SumNode] = []
    while True:
        cuts = find_vertex_cuts(cur.graph, 3, caps)
        if not cuts:
            return SumDecomposition(tuple(nodes), FourConnectedCore(cur, dict(tags)))
        if cuts[0].size <= 2:
            vc = cuts[0]
            balanced_sides = []
            unbalanced = 0
            for b in vc.bridges:
                if _side_balanced(cur, b.edges, caps):
                    balanced_sides.append(b)
                else:
                    unbalanced += 1
            if unbalanced != 1:
                raise ClassifyError(
                    f"cut {sorted(vc.cut)} leaves {unbalanced} unbalanced sides, expected one"
                )
            bridge = min(balanced_sides, key=lambda b: (len(b.edges), sorted(b.edges)))
        else:
            pick = None
            for proper in (True, False):
                for vc in cuts:
                    sides = [
                        b
                        for b in vc.bridges
                        if len(b.interior) >= (2 if proper else 1)
                        and _side_balanced(cur, b.edges, caps)
                    ]
                    if sides:
                        pick = (
                            vc,
                            min(sides, key=lambda b: (len(b.edges), sorted(b.edges))),
                        )
                        break
                if pick:
                    break
            if pick is None:
                first_err: ClassifyError | None = None
                for vc in cuts:
                    if len(vc.bridges) != 2:
                        continue
                    try:
                        d, cert = _extract_wheel(cur, vc, caps)
                    except ClassifyError as err:
                        if first_err is None:
                            first_err = err
                        continue
                    return SumDecomposition(
                        tuple(nodes), WheelCore(cur, d, cert, dict(tags))
                    )
                if first_err is not None:
                    raise first_err
                raise ClassifyError(
                    "all 3-cut sides are unbalanced but no cut has exactly two sides"
                )
            vc, bridge = pick
        cur, tags, node = _peel(cur, tags, vc, bridge, len(nodes) + 1, caps)
        nodes.append(node)
        check = is_tangled(cur, caps)
        if not isinstance(check, Tangled):
            raise ClassifyError(
                f"peeling at {sorted(vc.cut)} left a non-tangled core "
                f"({type(check).__name__})"
            )


def _peel(
    cur: BiasedGraph,
    tags: dict[int, _Tag],
    vc: VertexCut,
    bridge,
    node_id: int,
    caps: Caps,
) -> tuple[BiasedGraph, dict[int, _Tag], SumNode]:
    t = vc.size
    cut = tuple(sorted(vc.cut))
    interior = sorted(bridge.interior)
    if t == 1:
        leaf = cur.restrict_edges(bridge.edges)
        leaf_origins = {e: tags[e] for e in bridge.edges}
        core = cur.delete_vertices(interior)
        new_tags = {e: tags[e] for e in core.graph.edge_id_set}
        return core, new_tags, SumNode(node_id, 1, cut, (), leaf, leaf_origins)

    next_e = max(cur.graph.edge_id_set) + 1
    pairs = list(combinations(cut, 2))
    virt = {next_e + j: pair for j, pair in enumerate(pairs)}
    bsub = cur.graph.subgraph(bridge.edges)
    qpaths: dict[tuple[int, int], frozenset[int]] = {}
    for a, b in pairs:
        avoid = [v for v in cut if v not in (a, b)]
        q = bsub.path_between(a, b, avoid)
        if q is None:
            raise ClassifyError(
                f"balanced side at cut {list(cut)} has no {a}-{b} path avoiding {avoid}"
            )
        qpaths[(a, b)] = frozenset(q)

    leaf_graph = bsub.with_edges(virt)
    leaf = BiasedGraph(leaf_graph, AllBalanced())
    virt_ids = tuple(sorted(virt))
    leaf_origins = {e: tags[e] for e in bridge.edges}
    for j, ve in enumerate(virt_ids):
        leaf_origins[ve] = ("virt", node_id, j)

    core_graph = cur.graph.delete_vertices(interior).with_edges(virt)
    vset = frozenset(virt)
    balanced: list[frozenset[int]] = []
    for c in enumerate_cycles(core_graph, caps=caps):
        used = c.edge_set & vset
        if not used:
            ok = cur.balance(Cycle.from_edge_set(cur.graph, c.edge_set))
        elif len(used) == 3:
            ok = True
        else:
            if len(used) == 1:
                (ve,) = used
                a, b = virt[ve]
            else:
                e1, e2 = sorted(used)
                ends = set(virt[e1]) ^ set(virt[e2])
                a, b = sorted(ends)
            probe = (c.edge_set - used) | qpaths[(a, b)]
            ok = cur.balance(Cycle.from_edge_set(cur.graph, probe))
        if ok:
            balanced.append(c.edge_set)
    try:
        core = make_explicit(core_graph, balanced, check=True, caps=caps)
    except BiasError as err:
        raise ClassifyError(f"reconstructed side bias at cut {list(cut)} fails: {err}")
    new_tags = {e: tags[e] for e in core_graph.edge_id_set if e not in vset}
    for j, ve in enumerate(virt_ids):
        new_tags[ve] = ("virt", node_id, j)
    return core, new_tags, SumNode(node_id, t, cut, virt_ids, leaf, leaf_origins)


def _block_path(bt, s: int, t: int) -> tuple[list[int], list[int]]:
    """Block indices from s's block to t's block, with the junctions between."""
    s_blocks = bt.blocks_at(s)
    t_blocks = bt.blocks_at(t)
    if len(s_blocks) != 1 or len(t_blocks) != 1:
        raise ClassifyError("rim endpoint sits in several blocks")
    if s_blocks[0] == t_blocks[0]:
        return [s_blocks[0]], []
    by_junction: dict[int, list[int]] = {}
    for block_idx, junction in bt.tree_edges:
        by_junction.setdefault(junction, []).append(block_idx)
    prev: dict[int, tuple[int, int] | None] = {s_blocks[0]: None}
    frontier = [s_blocks[0]]
    while frontier and t_blocks[0] not in prev:
        nxt: list[int] = []
        for b in frontier:
            for junction, members in by_junction.items():
                if b not in members:
                    continue
                for other in members:
                    if other not in prev:
                        prev[other] = (b, junction)
                        nxt.append(other)
        frontier = nxt
    if t_blocks[0] not in prev:
        raise ClassifyError("rim blocks do not form a path between the hinges")
    blocks: list[int] = []
    junctions: list[int] = []
    at = t_blocks[0]
    while at is not None:
        blocks.append(at)
        step = prev[at]
        if step is None:
            break
        junctions.append(step[1])
        at = step[0]
    blocks.reverse()
    junctions.reverse()
    return blocks, junctions


def _extract_wheel(cur: BiasedGraph, vc: VertexCut, caps: Caps) -> tuple[FamilyDescriptor, Certificate]:
    """Read the hub-and-ring roles off a 3-cut whose sides are all unbalanced."""
    g = cur.graph
    cut = sorted(vc.cut)
    if len(vc.bridges) != 2:
        raise ClassifyError(
            f"wheel shape at cut {cut} needs exactly two sides, found {len(vc.bridges)}"
        )
    one_vertex_hits: list[set[int]] = []
    for b in vc.bridges:
        hits: set[int] = set()
        for c in cycles_inside(cur, b.edges, caps):
            if cur.balance(c):
                continue
            meet = c.vertex_set & vc.cut
            if len(meet) == 1:
                hits.add(next(iter(meet)))
        one_vertex_hits.append(hits)
    common = one_vertex_hits[0] & one_vertex_hits[1]
    if len(common) != 1:
        raise ClassifyError(f"wheel shape at cut {cut}: hub candidates {sorted(common)}")
    hub = next(iter(common))
    x2, x3 = sorted(vc.cut - {hub})

    sides: list[tuple[list[frozenset[int]], list[int], object]] = []
    for b in vc.bridges:
        ob = cur.restrict_edges(b.edges)
        try:
            sp = standard_partition(ob, hub, caps)
        except TangleError as err:
            raise ClassifyError(f"wheel side at cut {cut} has no spoke partition: {err}")
        rim_side = ob.graph.delete_vertices([hub])
        bt = block_tree(rim_side)
        block_ids, junctions = _block_path(bt, x2, x3)
        parts = [frozenset(bt.blocks[i].edges) for i in block_ids]
        sides.append((parts, junctions, sp))

    (parts_a, junc_a, sp_a), (parts_b, junc_b, sp_b) = sides
    ring: list[frozenset[int]] = list(parts_a) + list(reversed(parts_b))
    owners: list[object] = [sp_a] * len(parts_a) + [sp_b] * len(parts_b)
    if len(ring) == 2:
        hinges = [x2, x3]
    else:
        hinges = list(junc_a) + [x3] + list(reversed(junc_b)) + [x2]

    direct = sorted(g.edges_between(x2, x3))
    if direct:
        placed = False
        for i, pe in enumerate(ring):
            if {x2, x3} <= g.subgraph(pe).vertex_set:
                ring[i] = pe | frozenset(direct)
                placed = True
                break
        if not placed:
            raise ClassifyError("edges joining the two rim hinges fit no ring part")

    xy: list[tuple[frozenset[int], frozenset[int]] | None] = []
    for i, pe in enumerate(ring):
        sub = g.subgraph(pe)
        if len(pe) == 1 and sub.n == 2:
            xy.append(None)
            continue
        part_hinges = {x2, x3} if len(ring) == 2 else {hinges[i - 1], hinges[i]}
        sp = owners[i]
        classes: dict[int, set[int]] = {}
        for v in sorted(sub.vertex_set - part_hinges):
            vs = {sp.part_of(e) for e in g.edges_between(hub, v)}
            if not vs:
                continue
            if len(vs) != 1:
                raise ClassifyError(
                    f"rim vertex {v} takes spokes from different classes"
                )
            classes.setdefault(vs.pop(), set()).add(v)
        if len(classes) != 2:
            raise ClassifyError(
                f"ring part {i} splits its spoke attachments into {len(classes)} classes"
            )
        first, second = sorted(classes)
        xy.append((frozenset(classes[first]), frozenset(classes[second])))

    d = FamilyDescriptor(
        "GeneralizedWheel",
        g,
        {
            "hub": hub,
            "hinges": tuple(hinges),
            "parts": tuple(ring),
            "xy": tuple(xy),
        },
    )
    cert = verify_family(cur, d, caps)
    if not cert.passed:
        names = "; ".join(c.name for c in cert.failures())
        raise ClassifyError(f"wheel shape at cut {cut} fails verification: {names}")
    return d, cert


def _fold(
    left: BiasedGraph,
    tags: dict[int, _Tag],
    vorig: dict[int, int],
    node: SumNode,
    caps: Caps,
) -> tuple[BiasedGraph, dict[int, _Tag], dict[int, int]]:
    """Glue one peeled leaf back onto the partially rebuilt graph."""
    inverse = {orig: cur for cur, orig in vorig.items()}
    identify = [(inverse[x], x) for x in node.cut]
    kt1 = sorted(
        (e for e, tag in tags.items() if tag[0] == "virt" and tag[1] == node.node_id),
        key=lambda e: tags[e][2],
    )
    if len(kt1) != len(node.virtual_edges):
        raise ClassifyError(
            f"sum node {node.node_id} lost track of its virtual edges"
        )
    summed = t_sum(
        left,
        node.leaf,
        node.t,
        identify,
        kt_edges1=kt1 or None,
        kt_edges2=node.virtual_edges or None,
        caps=caps,
    )
    glued = {orig for _, orig in identify}
    new_vorig = dict(vorig)
    next_v = max(left.graph.vertex_set, default=-1) + 1
    for v in sorted(node.leaf.graph.vertex_set - glued):
        new_vorig[next_v] = v
        next_v += 1
    new_tags = {e: tag for e, tag in tags.items() if e not in set(kt1)}
    next_e = max(left.graph.edge_id_set, default=-1) + 1
    for old in sorted(node.leaf.graph.edge_id_set - set(node.virtual_edges)):
        new_tags[next_e] = node.leaf_origins[old]
        next_e += 1
    return summed, new_tags, new_vorig


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def _tangled_report(
    o: BiasedGraph, verdict: TangleVerdict, caps: Caps, first: bool
) -> ClassificationReport:
    trace: list[str] = []
    pairs = blocking_pairs(o, caps)
    if pairs:
        trace.append(
            "blocking pairs: " + ", ".join(f"({v},{w})" for v, w in pairs)
        )
    dec = decompose(o, caps)
    labels: list[Label] = []
    if dec.nodes:
        fails = dec.verify(o, caps)
        if fails:
            raise ClassifyError("decomposition does not recompose: " + fails[0])
        orders = ", ".join(str(n.t) for n in dec.nodes)
        trace.append(f"peeled {len(dec.nodes)} balanced summand(s) at cuts of order {orders}")
        labels.append(Label("T3", "TSum", None, None))
    core = dec.core
    if isinstance(core, WheelCore):
        trace.append(
            f"terminal core is a generalized wheel on {core.bias.graph.n} vertices"
        )
        if not dec.nodes:
            labels.append(
                Label("T1b", "GeneralizedWheel", core.descriptor, core.certificate)
            )
    else:
        trace.append(
            f"terminal core has no small cut ({core.bias.graph.n} vertices)"
        )
    capped: list[ResourceLimitError] = []
    if not (first and labels):
        msets = _maximal_balanced_sets(o, caps)
        for code, kind, detector in _DETECTORS:
            if any(label.code == code for label in labels):
                continue
            try:
                hit = detector(o, caps, msets)
            except ResourceLimitError as err:
                capped.append(err)
                trace.append(f"{kind} search stopped at its resource cap")
                continue
            if hit:
                d, cert, witness = hit
                labels.append(Label(code, kind, d, cert, witness))
                if first:
                    break
    if not labels:
        if capped:
            raise capped[0]
        raise ClassifyError("tangled input did not match any structure case")
    return ClassificationReport(verdict, tuple(labels), dec, tuple(trace))


def small_classify(
    o: BiasedGraph, caps: Caps = DEFAULT_CAPS, *, first: bool = False
) -> ClassificationReport:
    """Classification restricted to inputs with at most five vertices."""
    if o.graph.n > 5:
        raise ClassifyError("small_classify handles at most five vertices")
    if not is_simple(o):
        raise ClassifyError("small_classify needs a simple input")
    verdict = is_tangled(o, caps)
    if not isinstance(verdict, Tangled):
        raise ClassifyError(
            f"small_classify needs a tangled input, verdict is {type(verdict).__name__}"
        )
    return _tangled_report(o, verdict, caps, first)


def classify(
    o: BiasedGraph, caps: Caps = DEFAULT_CAPS, *, first: bool = False
) -> ClassificationReport:
    """Verdict plus every verified structure case of a simple connected input.

    Non-tangled inputs get their verdict and no labels.  Tangled inputs
    are decomposed at small cuts (a T3 label when anything peels, a
    generalized-wheel label when the terminal core is the hub-and-ring
    shape), then matched against every concrete family.  With ``first``
    the search stops at the first verified label.
    """
    if not o.graph.is_connected():
        raise ClassifyError("classification needs a connected input")
    if not is_simple(o):
        raise ClassifyError("classification needs a simple input")
    verdict = is_tangled(o, caps)
    if not isinstance(verdict, Tangled):
        return ClassificationReport(
            verdict,
            (),
            None,
            (f"verdict {type(verdict).__name__}: no structure case applies",),
        )
    return _tangled_report(o, verdict, caps, first)
