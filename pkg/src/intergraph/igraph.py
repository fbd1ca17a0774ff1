"""Intersection graphs of subgroup lattices.

Vertices are the proper nontrivial subgroups; two are adjacent when they
intersect nontrivially.  Two subgroups meet nontrivially exactly when they
share a subgroup of prime order, so adjacency is computed from the
vertex-by-prime-order-subgroup containment matrix.

Adjacency rows are packed into ``uint64`` words (bit ``v`` of row ``u``) for
the BFS kernels.
"""
from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .permgrp import Group, Lattice, Subgroup, intersect
from .report import Report

INF = math.inf


class GraphError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, math.isqrt(n) + 1))


def _pack(rows: np.ndarray) -> np.ndarray:
    V = rows.shape[1]
    W = max(1, (V + 63) // 64)
    padded = np.zeros((rows.shape[0], W * 64), dtype=bool)
    padded[:, :V] = rows
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64)


class IntersectionGraph:
    def __init__(self, group: Group, vertices: list[Subgroup], adj: np.ndarray):
        self.group = group
        self.vertices = vertices
        self.adj = adj
        self.index = {S.bits: i for i, S in enumerate(vertices)}
        self._rows = None

    def __len__(self):
        return len(self.vertices)

    @property
    def rows(self) -> list[int]:
        """Adjacency rows as Python-int bitsets."""
        if self._rows is None:
            self._rows = [int.from_bytes(r.tobytes(), "little") for r in self.adj]
        return self._rows

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v >> 6] >> np.uint64(v & 63) & np.uint64(1))

    def neighbors(self, u: int) -> list[int]:
        r = self.rows[u]
        out = []
        while r:
            low = r & -r
            out.append(low.bit_length() - 1)
            r ^= low
        return out

    def dense(self) -> np.ndarray:
        V = len(self)
        bits = np.unpackbits(self.adj.view(np.uint8), axis=1, bitorder="little")
        return bits[:, :V].astype(bool)

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2


def build(lattice: Lattice, block: int = 512) -> IntersectionGraph:
    G = lattice.group
    vertices = lattice.proper_nontrivial()
    if len(vertices) < 2:
        raise GraphError(f"{G.name} has {len(vertices)} proper nontrivial subgroups; no graph")
    minimal = [S for S in vertices if _is_prime(S.order)]
    probe = np.array([S.gens[0] for S in minimal], dtype=np.int64)
    C = np.zeros((len(vertices), len(minimal)), dtype=np.float32)
    for i, S in enumerate(vertices):
        C[i] = S.member[probe]
    V = len(vertices)
    W = max(1, (V + 63) // 64)
    adj = np.zeros((V, W), dtype=np.uint64)
    for start in range(0, V, block):
        stop = min(V, start + block)
        rows = (C[start:stop] @ C.T) > 0
        rows[np.arange(stop - start), np.arange(start, stop)] = False
        adj[start:stop] = _pack(rows)
    return IntersectionGraph(G, vertices, adj)


@dataclass
class Diameter:
    value: float
    pair: tuple[int, int] | None
    components: int

    @property
    def connected(self) -> bool:
        return self.components == 1


def components(g: IntersectionGraph) -> list[int]:
    """Component bitsets, ordered by smallest vertex."""
    rows = g.rows
    unseen = (1 << len(g)) - 1
    comps = []
    while unseen:
        start = unseen & -unseen
        comp = front = start
        while front:
            nxt = 0
            f = front
            while f:
                low = f & -f
                nxt |= rows[low.bit_length() - 1]
                f ^= low
            front = nxt & ~comp
            comp |= front
        comps.append(comp)
        unseen &= ~comp
    return comps


def _sweep(args):
    adj, sources = args
    return kernels.bfs_sweep(adj, sources)


def eccentricities(g: IntersectionGraph, workers: int = 1):
    """Per-vertex (eccentricity, smallest farthest vertex, reach count)."""
    sources = np.arange(len(g), dtype=np.int64)
    if workers > 1 and len(g) > 256:
        chunks = np.array_split(sources, workers)
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_sweep, [(g.adj, c) for c in chunks]))
        return tuple(np.concatenate([p[k] for p in parts]) for k in range(3))
    return kernels.bfs_sweep(g.adj, sources)


def diameter(g: IntersectionGraph, workers: int = 1) -> Diameter:
    """All-pairs BFS diameter with the lexicographically smallest attaining pair."""
    comps = components(g)
    if len(comps) > 1:
        u = 0
        v = (~comps[0] & ((1 << len(g)) - 1))
        v = (v & -v).bit_length() - 1
        return Diameter(INF, (u, v), len(comps))
    ecc, far, _ = eccentricities(g, workers)
    best = -1
    pair = None
    for u in range(len(g)):
        if ecc[u] > best:
            best = int(ecc[u])
            pair = (u, int(far[u]))
    return Diameter(best, pair, 1)


def diameter_by_powers(g: IntersectionGraph) -> float:
    """Independent diameter oracle: powers of (I + A) until all-ones or stable."""
    V = len(g)
    step = g.dense().astype(np.float32)
    step[np.arange(V), np.arange(V)] = 1
    reach = step.copy()
    k = 1
    while not reach.all():
        nxt = ((reach @ step) > 0).astype(np.float32)
        if np.array_equal(nxt, reach):
            return INF
        reach = nxt
        k += 1
    return k if V > 1 else 0


def distance(g: IntersectionGraph, u: int, v: int) -> float:
    if u == v:
        return 0
    rows = g.rows
    seen = front = 1 << u
    d = 0
    target = 1 << v
    while front:
        d += 1
        nxt = 0
        f = front
        while f:
            low = f & -f
            nxt |= rows[low.bit_length() - 1]
            f ^= low
        front = nxt & ~seen
        if front & target:
            return d
        seen |= front
    return INF


@dataclass
class PathWitness:
    vertices: list[int]
    intersections: list[Subgroup]

    def __len__(self):
        return len(self.vertices) - 1

    def validate(self, g: IntersectionGraph) -> bool:
        if len(self.intersections) != len(self.vertices) - 1:
            return False
        for (a, b), I in zip(zip(self.vertices, self.vertices[1:]), self.intersections):
            S, T = g.vertices[a], g.vertices[b]
            if a == b or I.order <= 1 or I.bits != S.bits & T.bits:
                return False
        return True

    def to_dict(self, g: IntersectionGraph) -> dict:
        return {
            "vertex_orders": [g.vertices[i].order for i in self.vertices],
            "intersection_orders": [I.order for I in self.intersections],
        }


def shortest_path(g: IntersectionGraph, u: int, v: int) -> PathWitness:
    if u == v:
        return PathWitness([u], [])
    rows = g.rows
    parent = {u: None}
    front = [u]
    seen = 1 << u
    while front and v not in parent:
        nxt = []
        for a in front:
            new = rows[a] & ~seen
            seen |= new
            while new:
                low = new & -new
                b = low.bit_length() - 1
                parent[b] = a
                nxt.append(b)
                new ^= low
        front = sorted(nxt)
    if v not in parent:
        raise GraphError(f"vertices {u} and {v} are in different components")
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()
    inters = [intersect(g.vertices[a], g.vertices[b]) for a, b in zip(path, path[1:])]
    return PathWitness(path, inters)


def maximal_induced(g: IntersectionGraph, maximal: list[Subgroup]) -> Report:
    idx = sorted(g.index[M.bits] for M in maximal)
    rep = Report("maximal_induced")
    mask = 0
    for i in idx:
        mask |= 1 << i
    rows = g.rows
    lonely = [v for v in range(len(g)) if v not in set(idx) and not rows[v] & mask]
    rep.check("every_vertex_meets_a_maximal", not lonely, unmatched=lonely[:20])
    if len(idx) < 2:
        rep.skip("induced_diameter", "fewer than two maximal subgroups")
        return rep
    sub = g.dense()[np.ix_(idx, idx)]
    h = IntersectionGraph(g.group, [g.vertices[i] for i in idx], _pack(sub))
    d = diameter(h)
    rep.data.update({"maximal_count": len(idx), "induced_edges": h.edge_count, "induced_diameter": _num(d.value), "induced_components": d.components})
    rep.check("induced_connected", d.connected)
    rep.check("induced_diameter_le_62", d.value <= 62, diameter=_num(d.value))
    return rep


def _num(x):
    return "inf" if x == INF else int(x)


def check_theorem_band(g: IntersectionGraph, simple: bool, alternating: bool = False,
                       maximal: list[Subgroup] | None = None, diam: Diameter | None = None) -> Report:
    rep = Report("theorem_band")
    d = diam or diameter(g)
    rep.data.update(_diam_data(g, d))
    if not simple:
        rep.skip("band_3_to_5", "group not flagged simple")
        return rep
    witness = _pair_data(g, d)
    rep.check("connected", d.connected, components=d.components)
    rep.check("diameter_ge_3", d.value >= 3, diameter=_num(d.value), pair=witness)
    rep.check("diameter_le_5", d.value <= 5, diameter=_num(d.value), pair=witness)
    if alternating:
        rep.check("alternating_le_4", d.value <= 4, diameter=_num(d.value), pair=witness)
    if maximal is not None:
        all_even = all(M.order % 2 == 0 for M in maximal)
        rep.data["all_maximals_even"] = all_even
        if all_even:
            rep.check("even_maximals_le_4", d.value <= 4, diameter=_num(d.value), pair=witness)
    return rep


def _pair_data(g, d: Diameter):
    if d.pair is None:
        return None
    return [{"order": g.vertices[i].order, "index": i, "fingerprint": _fingerprint(g.vertices[i])} for i in d.pair]


def _fingerprint(S: Subgroup) -> str:
    # element count plus a hash of the canonical key
    return f"{S.order}:{hashlib.sha1(S.bits.to_bytes((S.bits.bit_length() + 7) // 8, 'little')).hexdigest()[:12]}"


def _diam_data(g, d: Diameter) -> dict:
    return {
        "vertices": len(g),
        "edges": g.edge_count,
        "diameter": _num(d.value),
        "components": d.components,
        "attaining_pair": _pair_data(g, d),
    }


def dihedral_connector_check(g: IntersectionGraph, maximal: list[Subgroup]) -> Report:
    """Certify d(M1, M2) <= 2 for even-order maximals via <x, y> with x, y involutions."""
    G = g.group
    even = [M for M in maximal if M.order % 2 == 0]
    invols = [G.involutions(M) for M in even]
    rep = Report("dihedral_connectors")
    failures = []
    dihedral_orders: dict[int, int] = {}
    graph_ok = True
    pairs = 0
    for i in range(len(even)):
        for j in range(i, len(even)):
            pairs += 1
            D = None
            if i == j:
                x = int(invols[i][0])
                D = G.dihedral_join(x, x)
            else:
                for x in invols[i]:
                    for y in invols[j]:
                        cand = G.dihedral_join(int(x), int(y))
                        if cand.order < G.order:
                            D = cand
                            break
                    if D is not None:
                        break
            if D is None:
                failures.append([i, j])
                continue
            dihedral_orders[D.order] = dihedral_orders.get(D.order, 0) + 1
            u, v = g.index[even[i].bits], g.index[even[j].bits]
            if u != v and not _within_two(g, u, v):
                graph_ok = False
    rep.data.update({"even_maximals": len(even), "pairs": pairs, "dihedral_orders": dict(sorted(dihedral_orders.items()))})
    rep.check("connector_found", not failures, failures=failures[:20])
    rep.check("graph_distance_le_2", graph_ok)
    return rep


def _within_two(g, u, v) -> bool:
    rows = g.rows
    return bool(rows[u] >> v & 1) or bool(rows[u] & rows[v])


def l2q_pointstab_check(q: int) -> Report:
    """Point stabilisers of PSL(2, q) on the projective line pairwise meet nontrivially."""
    from . import presets

    rep = Report(f"l2q_pointstab q={q}")
    if q % 4 != 3:
        raise ValueError(f"q = {q} is not 3 mod 4")
    G = presets.load(f"psl2_{q}").group()
    stabs = [G.point_stabilizer(pt) for pt in range(q + 1)]
    expected = q * (q - 1) // 2
    orders = sorted({S.order for S in stabs})
    rep.data.update({"q": q, "points": q + 1, "group_order": G.order, "stabilizer_orders": orders})
    rep.check("stabilizer_order_formula", orders == [expected], expected=expected)
    rep.check("orbit_stabilizer", all(S.order * (q + 1) == G.order for S in stabs))
    rep.check("stabilizer_order_odd", all(S.order % 2 == 1 for S in stabs))
    bad = []
    n_pairs = 0
    for a in range(q + 1):
        for b in range(a + 1, q + 1):
            n_pairs += 1
            if (stabs[a].bits & stabs[b].bits).bit_count() <= 1:
                bad.append([a + 1, b + 1])
    rep.data["pairs"] = n_pairs
    rep.check("pairwise_nontrivial", not bad, failures=bad[:20])
    return rep
