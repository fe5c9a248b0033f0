import itertools
import random

import pytest
from hypothesis import given, strategies as st

from unate.core import Domain, TruthTable
from unate.cover import (
    certified_cover_size,
    greedy_matching,
    hopcroft_karp,
    min_vertex_cover_size,
    neighbor_edge_classes,
    violated_neighbor_edges,
    violation_exists,
)
from unate.exact import _cover_size_dense, _dense_violation_pairs


def brute_min_cover(edges):
    """Independent oracle: smallest vertex subset touching every edge."""
    vertices = sorted({v for e in edges for v in e})
    for k in range(len(vertices) + 1):
        for subset in itertools.combinations(vertices, k):
            chosen = set(subset)
            if all(u in chosen or v in chosen for u, v in edges):
                return k
    return 0


def brute_max_matching(edges):
    """Independent oracle: largest set of vertex-disjoint edges."""
    best = 0
    edges = list(edges)

    def rec(i, used, count):
        nonlocal best
        best = max(best, count)
        for j in range(i, len(edges)):
            u, v = edges[j]
            if u not in used and v not in used:
                rec(j + 1, used | {u, v}, count + 1)

    rec(0, frozenset(), 0)
    return best


def random_graph(rng, nv, p):
    edges = []
    for u in range(nv):
        for v in range(u + 1, nv):
            if rng.random() < p:
                edges.append((u, v))
    return edges


class TestMinVertexCover:
    @pytest.mark.parametrize("seed", range(12))
    def test_matches_brute_force(self, seed):
        rng = random.Random(seed)
        edges = random_graph(rng, rng.randint(4, 9), rng.uniform(0.2, 0.7))
        adj = {}
        for u, v in edges:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        assert min_vertex_cover_size(adj) == brute_min_cover(edges)

    def test_empty_graph(self):
        assert min_vertex_cover_size({}) == 0
        assert min_vertex_cover_size({0: set()}) == 0

    def test_star_needs_center(self):
        adj = {0: {1, 2, 3}, 1: {0}, 2: {0}, 3: {0}}
        assert min_vertex_cover_size(adj) == 1

    def test_disjoint_components_sum(self):
        adj = {0: {1}, 1: {0}, 2: {3}, 3: {2}, 4: {5, 6}, 5: {4}, 6: {4}}
        assert min_vertex_cover_size(adj) == 3


class TestHopcroftKarp:
    @pytest.mark.parametrize("seed", range(12))
    def test_matches_brute_force(self, seed):
        rng = random.Random(100 + seed)
        nl, nr = rng.randint(1, 6), rng.randint(1, 6)
        adj = {}
        edges = []
        for u in range(nl):
            rights = [nl + v for v in range(nr) if rng.random() < 0.5]
            if rights:
                adj[u] = rights
                edges.extend((u, v) for v in rights)
        assert hopcroft_karp(adj) == brute_max_matching(edges)

    def test_early_stop_is_lower_bound(self):
        adj = {u: [10 + u] for u in range(6)}  # perfect matching of size 6
        assert hopcroft_karp(adj, stop_at=3) >= 3
        assert hopcroft_karp(adj) == 6

    def test_empty(self):
        assert hopcroft_karp({}) == 0


class TestGreedyMatching:
    @given(st.lists(st.tuples(st.integers(0, 12), st.integers(13, 25)), max_size=40))
    def test_vertex_disjoint(self, edges):
        picked = greedy_matching(edges)
        seen = [v for e in picked for v in e]
        assert len(seen) == len(set(seen))
        assert all(e in edges for e in picked)


class TestViolationSweep:
    def test_detects_distant_violation(self):
        # 1 at the origin, 0 at the opposite corner: no violated neighbor
        # pair, but the long-range comparable pair is violated.
        domain = Domain(2, 2)
        values = [1, 1, 1, 0]
        assert violation_exists(values, domain, frozenset(), set())
        # removing either endpoint of the long pair clears it
        assert not violation_exists(values, domain, frozenset(), {0})
        assert not violation_exists(values, domain, frozenset(), {3})

    def test_monotone_has_no_violation(self):
        domain = Domain(3, 2)
        values = [sum(p) for p in domain.iter_points()]
        assert not violation_exists(values, domain, frozenset(), set())

    def test_orientation_flip(self):
        domain = Domain(2, 1)
        values = [1, 0]  # decreasing: violates up, fine for down
        assert violation_exists(values, domain, frozenset(), set())
        assert not violation_exists(values, domain, frozenset({0}), set())

    def test_agrees_with_dense_pair_scan(self):
        rng = random.Random(5)
        for _ in range(30):
            domain = Domain(rng.choice([2, 3]), rng.randint(1, 3))
            values = [rng.randrange(3) for _ in range(domain.size())]
            down = frozenset(i for i in range(domain.d) if rng.random() < 0.5)
            table = TruthTable(domain, values)
            pairs = _dense_violation_pairs(table, down)
            assert violation_exists(values, domain, down, set()) == bool(pairs)


class TestCertifiedCover:
    def test_agrees_with_dense_path_when_certified(self):
        rng = random.Random(11)
        hits = 0
        for _ in range(120):
            domain = Domain(2, rng.randint(2, 4))
            values = [rng.randrange(2) for _ in range(domain.size())]
            down = frozenset(i for i in range(domain.d) if rng.random() < 0.3)
            table = TruthTable(domain, values)
            got = certified_cover_size(values, domain, down)
            if got is not None:
                hits += 1
                assert got == _cover_size_dense(table, down)
        assert hits > 20  # the certificate route must actually fire

    def test_monotone_certifies_zero(self):
        domain = Domain(2, 3)
        values = [sum(p) for p in domain.iter_points()]
        assert certified_cover_size(values, domain, frozenset()) == 0

    def test_uncertifiable_returns_none(self):
        # Only a long-range violation: the neighbor matching is empty but a
        # violation exists, so no certificate can close.
        domain = Domain(2, 2)
        values = [1, 1, 1, 0]
        assert certified_cover_size(values, domain, frozenset()) is None


class TestNeighborEdgeClasses:
    def test_classification(self):
        domain = Domain(2, 2)
        values = [0, 1, 1, 0]  # xor
        classes = neighbor_edge_classes(values, domain)
        # dim 0: (0,0)->(1,0) rises, (0,1)->(1,1) falls
        assert classes[0] == ([(0, 1)], [(2, 3)])
        assert classes[1] == ([(0, 2)], [(1, 3)])
        up_edges = violated_neighbor_edges(classes, frozenset())
        assert set(up_edges) == {(2, 3), (1, 3)}
        down0 = violated_neighbor_edges(classes, frozenset({0}))
        assert set(down0) == {(1, 0), (1, 3)}
