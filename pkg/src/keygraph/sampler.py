"""Seeded sampling of one network realization.

A sample consists of per-node class labels, per-node key rings, and the
secure-link edge set: pairs that share a key *and* whose channel is on.
The draw order is fixed and documented so that a ``(params, seed)`` pair
always reproduces the same network, bit for bit:

1. class labels: one uniform per node, inverted through the cumulative
   class distribution;
2. key rings: nodes in index order, each consuming exactly ``K[class]``
   uniforms.  Rings use Floyd's subset sampling when the ring is small
   relative to the pool (K <= P/64) and a sparse partial Fisher-Yates
   shuffle otherwise; both map each uniform u to an integer below bound b
   as floor(u * b);
3. channel indicators: one uniform per unordered node pair, row-major
   (pairs (0,1)..(0,n-1), then (1,2)..), compared against alpha.

Key-sharing pairs are found through a key -> holders index rather than by
testing every pair, which changes nothing observable: the edge set equals
the naive double loop over pairs for the same stream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import ModelParams
from .rng import SeedSpec

__all__ = ["SeedSpec", "SampledNetwork", "sample_network", "intersect_rings",
           "write_network", "read_network"]

# Floyd's sampling avoids O(P) state but degrades as K/P grows; cutoff per pool.
_FLOYD_MAX_RING_FRACTION = 64


def intersect_rings(a, b) -> bool:
    """True iff two sorted key rings share at least one key (linear merge scan)."""
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        ai, bj = a[i], b[j]
        if ai == bj:
            return True
        if ai < bj:
            i += 1
        else:
            j += 1
    return False


@dataclass
class SampledNetwork:
    """One realized network.

    ``classes`` holds 1-based class labels per node.  Key rings are stored
    flat (``ring_data`` sliced by ``ring_indptr``) and exposed per node via
    :meth:`ring` or :attr:`keyrings`.  ``edges`` is the secure-link edge set,
    one row per unordered pair (u < v), lexicographically sorted.  When the
    sample was drawn with ``retain_factors=True``, the two factor edge sets
    (key sharing alone / channel alone) are kept as well.
    """

    params: ModelParams
    classes: np.ndarray
    ring_data: np.ndarray
    ring_indptr: np.ndarray
    edges: np.ndarray
    edges_key: Optional[np.ndarray] = None
    edges_channel: Optional[np.ndarray] = None
    seed: Optional[SeedSpec] = None
    _graph: object = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.params.n

    def ring(self, x: int) -> np.ndarray:
        """Sorted key ring of node x (a view, do not mutate)."""
        return self.ring_data[self.ring_indptr[x]:self.ring_indptr[x + 1]]

    @property
    def keyrings(self) -> list:
        return [self.ring(x) for x in range(self.n)]

    def graph(self):
        """Adjacency structure of the secure-link edges (built once, cached)."""
        if self._graph is None:
            from .analysis import Graph
            self._graph = Graph(self.n, self.edges)
        return self._graph


def _draw_ring(u: np.ndarray, P: int) -> np.ndarray:
    """One uniform key ring of size len(u) from [0, P), consuming u in order."""
    K = len(u)
    if K > P // _FLOYD_MAX_RING_FRACTION:
        # Partial Fisher-Yates over an implicit identity array, sparse storage.
        perm = {}
        out = np.empty(K, dtype=np.int64)
        for j in range(K):
            t = j + int(u[j] * (P - j))
            vt = perm.get(t, t)
            perm[t] = perm.get(j, j)
            out[j] = vt
        out.sort()
        return out
    # Floyd's subset sampling: exactly K draws, no rejection.
    chosen = set()
    for step, j in enumerate(range(P - K, P)):
        t = int(u[step] * (j + 1))
        if t in chosen:
            chosen.add(j)
        else:
            chosen.add(t)
    out = np.fromiter(chosen, dtype=np.int64, count=K)
    out.sort()
    return out


def _key_sharing_pairs(n: int, ring_data: np.ndarray, ring_node: np.ndarray) -> np.ndarray:
    """All node pairs (u < v) whose rings intersect, via a key -> holders index.

    Sorts the flat (key, node) incidence list by key and emits, for every
    shift d, the pairs of holders d apart within a key run.  Duplicates from
    pairs sharing several keys are removed.  Returns an (m, 2) int64 array in
    lexicographic order.
    """
    if ring_data.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    order = np.argsort(ring_data, kind="stable")  # stable: nodes ascending per key
    keys = ring_data[order]
    nodes = ring_node[order]
    run_start = np.empty(keys.size, dtype=bool)
    run_start[0] = True
    np.not_equal(keys[1:], keys[:-1], out=run_start[1:])
    run_id = np.cumsum(run_start) - 1
    codes = []
    d = 1
    while True:
        same = run_id[d:] == run_id[:-d]
        if not same.any():
            break
        codes.append(nodes[:-d][same].astype(np.int64) * n + nodes[d:][same])
        d += 1
    if not codes:
        return np.empty((0, 2), dtype=np.int64)
    uniq = np.unique(np.concatenate(codes))
    return np.stack([uniq // n, uniq % n], axis=1)


def sample_network(params: ModelParams, seed: SeedSpec, *,
                   retain_factors: bool = False) -> SampledNetwork:
    """Draw one network realization, fully determined by (params, seed).

    With ``retain_factors=True`` the key-sharing edge set and the channel-on
    edge set are stored alongside the secure-link edges (memory grows with
    alpha * n^2; intended for inspection and tests).
    """
    rng = seed.stream()
    n, P, alpha, r = params.n, params.P, params.alpha, params.r

    cum = np.cumsum(params.mu)
    cls0 = np.searchsorted(cum, rng.random(n), side="right")
    np.clip(cls0, 0, r - 1, out=cls0)  # guard the float-rounding tail of cum

    sizes = np.asarray(params.K, dtype=np.int64)[cls0]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(sizes, out=indptr[1:])
    u_rings = rng.random(int(indptr[-1]))
    ring_data = np.empty(int(indptr[-1]), dtype=np.int64)
    for x in range(n):
        lo, hi = indptr[x], indptr[x + 1]
        ring_data[lo:hi] = _draw_ring(u_rings[lo:hi], P)
    ring_node = np.repeat(np.arange(n, dtype=np.int64), sizes)

    shared = _key_sharing_pairs(n, ring_data, ring_node)
    # Row boundaries of the candidate pairs, for per-row channel lookup.
    row_bounds = np.searchsorted(shared[:, 0], np.arange(n + 1))

    edge_rows = []
    channel_rows = [] if retain_factors else None
    for x in range(n - 1):
        u = rng.random(n - 1 - x)
        lo, hi = row_bounds[x], row_bounds[x + 1]
        if hi > lo:
            ys = shared[lo:hi, 1]
            on = ys[u[ys - x - 1] < alpha]
            if on.size:
                edge_rows.append(np.stack([np.full(on.size, x, dtype=np.int64), on], axis=1))
        if retain_factors:
            ys_on = x + 1 + np.flatnonzero(u < alpha)
            if ys_on.size:
                channel_rows.append(
                    np.stack([np.full(ys_on.size, x, dtype=np.int64), ys_on], axis=1))

    edges = (np.concatenate(edge_rows) if edge_rows
             else np.empty((0, 2), dtype=np.int64)).astype(np.int32)
    net = SampledNetwork(
        params=params,
        classes=(cls0 + 1).astype(np.int16),
        ring_data=ring_data,
        ring_indptr=indptr,
        edges=edges,
        seed=seed,
    )
    if retain_factors:
        net.edges_key = shared.astype(np.int32)
        net.edges_channel = (np.concatenate(channel_rows) if channel_rows
                             else np.empty((0, 2), dtype=np.int64)).astype(np.int32)
    return net


def write_network(net: SampledNetwork, path) -> None:
    """Dump one sample as plain text.

    Format: header ``n P alpha r``, then the class distribution line, the
    ring-size line, one ``class keycount k1 k2 ...`` line per node, and one
    ``u v`` line per secure-link edge.
    """
    p = net.params
    lines = [
        f"{p.n} {p.P} {p.alpha!r} {p.r}",
        " ".join(repr(m) for m in p.mu),
        " ".join(str(k) for k in p.K),
    ]
    for x in range(net.n):
        ring = net.ring(x)
        lines.append(f"{net.classes[x]} {ring.size} " + " ".join(str(k) for k in ring))
    for u, v in net.edges:
        lines.append(f"{u} {v}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_network(path) -> SampledNetwork:
    """Load a sample written by :func:`write_network` (factor sets are not stored)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln for ln in (raw.strip() for raw in fh) if ln]
    n_s, P_s, alpha_s, r_s = lines[0].split()
    n, P, r = int(n_s), int(P_s), int(r_s)
    mu = [float(v) for v in lines[1].split()]
    K = [int(v) for v in lines[2].split()]
    if len(mu) != r or len(K) != r:
        raise ValueError(f"{path}: class count mismatch in header")
    params = ModelParams(n=n, mu=mu, K=K, P=P, alpha=float(alpha_s))
    classes = np.empty(n, dtype=np.int16)
    indptr = np.zeros(n + 1, dtype=np.int64)
    rings = []
    for x in range(n):
        parts = lines[3 + x].split()
        classes[x] = int(parts[0])
        count = int(parts[1])
        keys = np.array([int(v) for v in parts[2:]], dtype=np.int64)
        if keys.size != count:
            raise ValueError(f"{path}: node {x} declares {count} keys, has {keys.size}")
        rings.append(keys)
        indptr[x + 1] = indptr[x] + count
    edge_lines = lines[3 + n:]
    edges = np.array([[int(a) for a in ln.split()] for ln in edge_lines],
                     dtype=np.int32).reshape(len(edge_lines), 2)
    return SampledNetwork(
        params=params,
        classes=classes,
        ring_data=(np.concatenate(rings) if rings else np.empty(0, dtype=np.int64)),
        ring_indptr=indptr,
        edges=edges,
    )
