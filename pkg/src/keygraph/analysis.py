"""Exact structural analysis of sampled graphs.

Vertex connectivity is computed exactly with the classic node-splitting
reduction: every node v becomes an arc v_in -> v_out of capacity one, every
undirected edge becomes a pair of uncapacitated arcs, and the connectivity
between two non-adjacent nodes equals the max flow between them.  Following
Even and Tarjan, the global value is the minimum of those local values over
(a) all nodes non-adjacent to a fixed minimum-degree node s and (b) all
non-adjacent pairs of neighbors of s.  Max flows are delegated to
scipy.sparse.csgraph; everything around them (reduction, pair enumeration,
cut recovery, degree/component bookkeeping) is local.

All functions are pure; scratch state is per call, so concurrent use on
distinct graphs is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, maximum_flow


class Graph:
    """Compact undirected graph: flat edge list plus CSR adjacency.

    Edges are validated (no self-loops, no duplicates), normalized to u < v
    and stored lexicographically sorted.  Node ids are 0..n-1.
    """

    __slots__ = ("n", "edges", "indptr", "indices")

    def __init__(self, n: int, edges):
        if n < 1:
            raise ValueError("graph needs at least one node")
        e = np.asarray(edges, dtype=np.int32).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise ValueError("edge endpoint out of range")
            if (e[:, 0] == e[:, 1]).any():
                raise ValueError("self-loops are not allowed")
            e = np.sort(e, axis=1)
            codes = e[:, 0].astype(np.int64) * n + e[:, 1]
            uniq = np.unique(codes)
            if uniq.size != codes.size:
                raise ValueError("duplicate edges are not allowed")
            e = np.stack([(uniq // n).astype(np.int32),
                          (uniq % n).astype(np.int32)], axis=1)
        self.n = int(n)
        self.edges = e
        both_u = np.concatenate([e[:, 0], e[:, 1]])
        both_v = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((both_v, both_u))
        self.indices = both_v[order]
        counts = np.bincount(both_u, minlength=n)
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=self.indptr[1:])

    @property
    def m(self) -> int:
        return self.edges.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return i < nb.size and nb[i] == v

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2


def as_graph(obj) -> Graph:
    """Accept a Graph or anything with .graph() (e.g. a SampledNetwork)."""
    if isinstance(obj, Graph):
        return obj
    return obj.graph()


@dataclass(frozen=True)
class ConnectivityReport:
    """Structural summary of one graph.

    ``min_vertex_cut`` is empty when the graph is disconnected (nothing to
    cut) or complete (no vertex cut exists; connectivity is n-1 by
    convention).  Otherwise removing the cut disconnects the graph and its
    size equals ``vertex_connectivity``.
    """

    min_degree: int
    vertex_connectivity: int
    min_vertex_cut: tuple
    is_connected: bool
    component_count: int


def min_degree(g) -> int:
    g = as_graph(g)
    return int(g.degrees.min())


def component_count(g) -> int:
    g = as_graph(g)
    if g.n == 1:
        return 1
    adj = csr_matrix(
        (np.ones(g.indices.size, dtype=np.int8), g.indices, g.indptr),
        shape=(g.n, g.n),
    )
    count, _ = connected_components(adj, directed=False)
    return int(count)


def is_connected(g) -> bool:
    return component_count(g) == 1


def _split_flow_matrix(g: Graph) -> csr_matrix:
    # Node v -> v_in = 2v, v_out = 2v+1; split arcs capacity 1, edge arcs
    # effectively uncapacitated (any cap > n-1 can never sit on a min cut).
    n, e = g.n, g.edges
    rows = np.concatenate([2 * np.arange(n), 2 * e[:, 0] + 1, 2 * e[:, 1] + 1])
    cols = np.concatenate([2 * np.arange(n) + 1, 2 * e[:, 1], 2 * e[:, 0]])
    caps = np.concatenate([
        np.ones(n, dtype=np.int32),
        np.full(2 * g.m, n, dtype=np.int32),
    ])
    return csr_matrix((caps, (rows, cols)), shape=(2 * n, 2 * n), dtype=np.int32)


def _flow_pairs(g: Graph) -> Iterable[tuple]:
    """Source/sink pairs whose local connectivities attain the global value.

    Fixed deterministic order: first every node non-adjacent to the lowest
    minimum-degree node s (ascending), then every non-adjacent pair of
    neighbors of s (ascending lexicographic).
    """
    s = int(np.argmin(g.degrees))
    nb = g.neighbors(s)
    nb_set = set(nb.tolist())
    for t in range(g.n):
        if t != s and t not in nb_set:
            yield s, t
    for i in range(nb.size):
        for j in range(i + 1, nb.size):
            u, v = int(nb[i]), int(nb[j])
            if not g.has_edge(u, v):
                yield u, v


def _local_connectivity(mat: csr_matrix, src: int, dst: int):
    return maximum_flow(mat, 2 * src + 1, 2 * dst)


def _cut_from_flow(g: Graph, mat: csr_matrix, src: int, dst: int) -> np.ndarray:
    """Recover the source-side minimum vertex cut of one max flow."""
    res = (mat - _local_connectivity(mat, src, dst).flow).tocsr()
    reach = np.zeros(2 * g.n, dtype=bool)
    stack = [2 * src + 1]
    reach[2 * src + 1] = True
    while stack:
        a = stack.pop()
        lo, hi = res.indptr[a], res.indptr[a + 1]
        for b, cap in zip(res.indices[lo:hi], res.data[lo:hi]):
            if cap > 0 and not reach[b]:
                reach[b] = True
                stack.append(int(b))
    cut = np.flatnonzero(reach[0::2] & ~reach[1::2]).astype(np.int32)
    return cut


def vertex_connectivity(g) -> tuple:
    """Exact vertex connectivity and one minimum vertex cut.

    Returns ``(kappa, cut)`` where ``cut`` is a sorted node array: empty for
    disconnected graphs (kappa 0) and complete graphs (kappa n-1), otherwise
    the cut recovered from the first source/sink pair attaining the minimum
    under the fixed enumeration order.
    """
    g = as_graph(g)
    if g.n < 2:
        raise ValueError("vertex connectivity needs at least two nodes")
    empty = np.empty(0, dtype=np.int32)
    if not is_connected(g):
        return 0, empty
    if g.is_complete():
        return g.n - 1, empty
    mat = _split_flow_matrix(g)
    best = None
    best_pair = None
    for src, dst in _flow_pairs(g):
        value = int(_local_connectivity(mat, src, dst).flow_value)
        if best is None or value < best:
            best = value
            best_pair = (src, dst)
    # A connected non-complete graph always yields at least one pair, and the
    # strict-improvement update keeps the first pair attaining the minimum.
    cut = _cut_from_flow(g, mat, *best_pair)
    if cut.size != best:
        raise AssertionError("recovered cut size disagrees with connectivity")
    return best, cut


def _is_biconnected(g: Graph) -> bool:
    """Connected with no articulation point (iterative lowpoint DFS)."""
    n = g.n
    if n < 3:
        # Two nodes: biconnected iff the edge exists (complete graph case).
        return g.m == n * (n - 1) // 2
    disc = np.full(n, -1, dtype=np.int64)
    low = np.zeros(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    disc[0] = low[0] = 0
    timer = 1
    root_children = 0
    path = [0]
    cursor = [g.indptr[0]]
    while path:
        u = path[-1]
        if cursor[-1] < g.indptr[u + 1]:
            v = int(g.indices[cursor[-1]])
            cursor[-1] += 1
            if disc[v] < 0:
                parent[v] = u
                disc[v] = low[v] = timer
                timer += 1
                if u == 0:
                    root_children += 1
                path.append(v)
                cursor.append(g.indptr[v])
            elif v != parent[u]:
                low[u] = min(low[u], disc[v])
        else:
            path.pop()
            cursor.pop()
            if path:
                p = path[-1]
                low[p] = min(low[p], low[u])
                if p != 0 and low[u] >= disc[p]:
                    return False
    if timer < n:
        return False  # disconnected
    return root_children <= 1


def is_k_connected(g, k: int) -> bool:
    """True iff the vertex connectivity is at least k.

    Cheap refutations first (degree bound, then connectivity / biconnectivity
    for k <= 2); the flow-based enumeration runs only for k >= 3 and stops at
    the first local connectivity below k.
    """
    g = as_graph(g)
    if g.n < 2:
        raise ValueError("k-connectivity needs at least two nodes")
    if k < 1:
        raise ValueError("k must be a positive integer")
    if k > g.n - 1:
        return False
    if int(g.degrees.min()) < k:
        return False
    if k == 1:
        return is_connected(g)
    if not is_connected(g):
        return False
    if k == 2:
        return _is_biconnected(g)
    if g.is_complete():
        return True
    mat = _split_flow_matrix(g)
    for src, dst in _flow_pairs(g):
        if int(_local_connectivity(mat, src, dst).flow_value) < k:
            return False
    return True


def delete_and_check(g, victims: Sequence[int]) -> list:
    """Connectivity after each prefix of node deletions.

    Entry d reports whether the graph stays connected once the first d+1
    victims are removed.  Graphs left with fewer than two nodes count as
    connected.  Victims must be distinct, in-range node ids.
    """
    g = as_graph(g)
    victims = [int(v) for v in victims]
    if len(set(victims)) != len(victims):
        raise ValueError("victims must be distinct")
    if any(v < 0 or v >= g.n for v in victims):
        raise ValueError("victim out of range")
    removed = np.zeros(g.n, dtype=bool)
    out = []
    for v in victims:
        removed[v] = True
        out.append(_connected_masked(g, removed))
    return out


def _connected_masked(g: Graph, removed: np.ndarray) -> bool:
    alive = np.flatnonzero(~removed)
    if alive.size < 2:
        return True
    seen = removed.copy()
    start = int(alive[0])
    seen[start] = True
    stack = [start]
    reached = 1
    while stack:
        u = stack.pop()
        for v in g.indices[g.indptr[u]:g.indptr[u + 1]]:
            if not seen[v]:
                seen[v] = True
                reached += 1
                stack.append(int(v))
    return reached == alive.size


def connectivity_report(g) -> ConnectivityReport:
    """Full structural summary: degrees, connectivity, cut, components."""
    g = as_graph(g)
    kappa, cut = vertex_connectivity(g)
    comps = component_count(g)
    return ConnectivityReport(
        min_degree=min_degree(g),
        vertex_connectivity=kappa,
        min_vertex_cut=tuple(int(v) for v in cut),
        is_connected=comps == 1,
        component_count=comps,
    )
