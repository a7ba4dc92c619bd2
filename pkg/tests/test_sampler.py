"""Sampler distribution checks, determinism, and dump-format round trips."""

import itertools
import math
from pathlib import Path

import numpy as np

from keygraph import (ModelParams, SeedSpec, edge_prob_key, intersect_rings,
                      read_network, sample_network, write_network)
from keygraph.sampler import _draw_ring
from oracles import naive_intersects

DATA = Path(__file__).parent / "data"


def small_params(**kw):
    base = dict(n=50, mu=(0.5, 0.5), K=(2, 3), P=10, alpha=0.5)
    base.update(kw)
    return ModelParams(**base)


class TestIntersectRings:
    def test_shared_element(self):
        assert intersect_rings([1, 2], [2, 9])

    def test_disjoint(self):
        assert not intersect_rings([1, 2], [3, 4])

    def test_empty(self):
        assert not intersect_rings([], [1, 2])

    def test_agrees_with_quadratic_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(10_000):
            a = np.sort(rng.choice(10, size=3, replace=False))
            b = np.sort(rng.choice(10, size=3, replace=False))
            assert intersect_rings(a, b) == naive_intersects(a, b)


class TestDeterminism:
    def test_identical_seed_identical_network(self):
        p = ModelParams(n=80, mu=(0.3, 0.7), K=(4, 6), P=200, alpha=0.5)
        a = sample_network(p, SeedSpec(987, 3), retain_factors=True)
        b = sample_network(p, SeedSpec(987, 3), retain_factors=True)
        assert np.array_equal(a.classes, b.classes)
        assert np.array_equal(a.ring_data, b.ring_data)
        assert np.array_equal(a.edges, b.edges)
        assert np.array_equal(a.edges_key, b.edges_key)
        assert np.array_equal(a.edges_channel, b.edges_channel)

    def test_retain_flag_does_not_change_edges(self):
        p = small_params()
        a = sample_network(p, SeedSpec(5, 0))
        b = sample_network(p, SeedSpec(5, 0), retain_factors=True)
        assert np.array_equal(a.edges, b.edges)

    def test_distinct_trials_differ(self):
        p = ModelParams(n=80, mu=(0.5, 0.5), K=(4, 6), P=200, alpha=0.5)
        a = sample_network(p, SeedSpec(987, 0))
        b = sample_network(p, SeedSpec(987, 1))
        assert not (np.array_equal(a.edges, b.edges)
                    and np.array_equal(a.ring_data, b.ring_data))


class TestStructure:
    def test_ring_sizes_match_classes_and_stay_sorted(self):
        p = ModelParams(n=200, mu=(0.2, 0.3, 0.5), K=(3, 5, 8), P=400, alpha=0.3)
        net = sample_network(p, SeedSpec(11))
        for x in range(net.n):
            ring = net.ring(x)
            assert ring.size == p.K[net.classes[x] - 1]
            assert (np.diff(ring) > 0).all()
            assert ring[0] >= 0 and ring[-1] < p.P

    def test_no_self_loops_and_unique_pairs(self):
        net = sample_network(small_params(alpha=1.0), SeedSpec(3))
        e = net.edges
        assert (e[:, 0] < e[:, 1]).all()
        codes = e[:, 0].astype(np.int64) * net.n + e[:, 1]
        assert np.unique(codes).size == codes.size

    def test_intersection_contained_in_both_factors(self):
        p = ModelParams(n=120, mu=(0.5, 0.5), K=(3, 5), P=60, alpha=0.4)
        net = sample_network(p, SeedSpec(21), retain_factors=True)
        inter = set(map(tuple, net.edges.tolist()))
        assert inter <= set(map(tuple, net.edges_key.tolist()))
        assert inter <= set(map(tuple, net.edges_channel.tolist()))
        # and the intersection is exactly the AND of the factors
        both = (set(map(tuple, net.edges_key.tolist()))
                & set(map(tuple, net.edges_channel.tolist())))
        assert inter == both

    def test_key_edges_match_pairwise_ring_checks(self):
        p = ModelParams(n=40, mu=(1.0,), K=(3,), P=30, alpha=0.9)
        net = sample_network(p, SeedSpec(8), retain_factors=True)
        expect = {
            (x, y)
            for x, y in itertools.combinations(range(net.n), 2)
            if intersect_rings(net.ring(x), net.ring(y))
        }
        assert set(map(tuple, net.edges_key.tolist())) == expect

    def test_near_zero_alpha_gives_empty_graph(self):
        net = sample_network(small_params(n=50, alpha=1e-12), SeedSpec(1))
        assert net.edges.shape[0] == 0


class TestDistributions:
    def test_class_frequencies(self):
        # 10^4 label draws; every class within 4 binomial sigma of its weight
        p = ModelParams(n=10_000, mu=(0.2, 0.3, 0.5), K=(2, 3, 4), P=256,
                        alpha=1e-9)
        net = sample_network(p, SeedSpec(1234))
        counts = np.bincount(net.classes - 1, minlength=3)
        for c, mu in enumerate(p.mu):
            sigma = math.sqrt(mu * (1 - mu) / p.n)
            assert abs(counts[c] / p.n - mu) < 4 * sigma

    def test_ring_uniformity_small_pool(self):
        # every 2-subset of a 5-key pool within 4 sigma of 1/10
        draws = 100_000
        rng = SeedSpec(777).stream()
        u = rng.random(2 * draws)
        counts = {}
        for t in range(draws):
            ring = _draw_ring(u[2 * t:2 * t + 2], 5)
            counts[tuple(ring)] = counts.get(tuple(ring), 0) + 1
        assert len(counts) == 10
        sigma = math.sqrt(0.1 * 0.9 / draws)
        for pair_count in counts.values():
            assert abs(pair_count / draws - 0.1) < 4 * sigma

    def test_ring_uniformity_floyd_path(self):
        # K/P below the Floyd cutoff; per-key inclusion within 4 sigma of K/P
        draws, P, K = 60_000, 192, 2
        assert K <= P // 64
        rng = SeedSpec(778).stream()
        u = rng.random(K * draws)
        hits = np.zeros(P, dtype=np.int64)
        for t in range(draws):
            ring = _draw_ring(u[K * t:K * t + K], P)
            assert ring.size == K and ring[0] != ring[1]
            hits[ring] += 1
        q = K / P
        sigma = math.sqrt(q * (1 - q) / draws)
        assert (np.abs(hits / draws - q) < 4 * sigma).all()

    def test_forced_share_edge_rate_tracks_alpha(self):
        # rings of 3 from a pool of 4 always overlap; edge rate over >=1e5
        # pairs approximates alpha within 3 binomial sigma
        alpha = 0.37
        p = ModelParams(n=200, mu=(1.0,), K=(3,), P=4, alpha=alpha)
        pairs = 0
        edges = 0
        for t in range(6):
            net = sample_network(p, SeedSpec(91, t))
            pairs += p.n * (p.n - 1) // 2
            edges += net.edges.shape[0]
        assert pairs >= 100_000
        sigma = math.sqrt(alpha * (1 - alpha) / pairs)
        assert abs(edges / pairs - alpha) < 3 * sigma

    def test_per_class_pair_edge_rates(self):
        # empirical secure-link frequency per class pair within 4 sigma of
        # alpha * p_ij, aggregated over independent samples
        p = ModelParams(n=500, mu=(0.5, 0.5), K=(20, 30), P=10**4, alpha=0.4)
        pair_counts = np.zeros((2, 2), dtype=np.int64)
        edge_counts = np.zeros((2, 2), dtype=np.int64)
        for t in range(4):
            net = sample_network(p, SeedSpec(5150, t))
            cls0 = net.classes.astype(np.int64) - 1
            n_c = np.bincount(cls0, minlength=2)
            pair_counts[0, 0] += n_c[0] * (n_c[0] - 1) // 2
            pair_counts[1, 1] += n_c[1] * (n_c[1] - 1) // 2
            pair_counts[0, 1] += n_c[0] * n_c[1]
            for u, v in net.edges:
                i, j = sorted((cls0[u], cls0[v]))
                edge_counts[i, j] += 1
        for i, j in ((0, 0), (0, 1), (1, 1)):
            target = p.alpha * edge_prob_key(p, i + 1, j + 1)
            npairs = pair_counts[i, j]
            sigma = math.sqrt(target * (1 - target) / npairs)
            assert abs(edge_counts[i, j] / npairs - target) < 4 * sigma


class TestDumpFormat:
    def test_round_trip(self, tmp_path):
        p = ModelParams(n=30, mu=(0.4, 0.6), K=(3, 5), P=40, alpha=0.55)
        net = sample_network(p, SeedSpec(2024, 1))
        path = tmp_path / "net.txt"
        write_network(net, path)
        back = read_network(path)
        assert back.params == p
        assert np.array_equal(back.classes, net.classes)
        assert np.array_equal(back.ring_data, net.ring_data)
        assert np.array_equal(back.edges, net.edges)

    def test_golden_dump_is_stable(self, tmp_path):
        # frozen once from this implementation; any drift in the stream or
        # the format shows up as a byte difference
        p = ModelParams(n=30, mu=(0.5, 0.5), K=(2, 4), P=24, alpha=0.6)
        net = sample_network(p, SeedSpec(424242, 0))
        path = tmp_path / "golden.txt"
        write_network(net, path)
        expect = (DATA / "golden_network.txt").read_bytes()
        assert path.read_bytes() == expect
