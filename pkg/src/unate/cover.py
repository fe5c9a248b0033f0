"""Exact minimum vertex cover machinery for violation graphs.

A violated pair of a directed-monotonicity instance must lose at least one
endpoint in any repair set, and deleting a full cover of the violated pairs
leaves a partial function that extends to a monotone total function (fill
each deleted point with the maximum surviving value below it, or the global
minimum when nothing is below).  Minimum vertex cover size over the
violation graph therefore equals the exact repair count.

Two exact strategies live here:

* ``min_vertex_cover_size``: branch and bound with degree-1 kernelization
  and a greedy-matching lower bound, for explicitly materialized graphs.
* A matching/cover certificate route for tables too large to materialize
  the quadratic comparability graph: a vertex-disjoint set of violated
  pairs is a lower bound by weak duality, and a candidate cover whose
  deletion verifiably removes every violation is an upper bound.  When the
  two sizes meet, the optimum is certified; when they do not, the caller
  gets a capacity error instead of an approximation.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional, Sequence

from .core import CapacityError, Domain, Value

#: Explicit branch-and-bound node budget; beyond this the graph is
#: considered out of scope for the dense exact path.
BNB_NODE_BUDGET = 2_000_000


def greedy_matching(edges: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """A maximal set of vertex-disjoint edges, built by a single scan."""
    matched: set[int] = set()
    out: list[tuple[int, int]] = []
    for u, v in edges:
        if u not in matched and v not in matched:
            matched.add(u)
            matched.add(v)
            out.append((u, v))
    return out


def _greedy_matching_size_adj(adj: dict[int, set[int]]) -> int:
    matched: set[int] = set()
    size = 0
    for u in adj:
        if u in matched:
            continue
        for v in adj[u]:
            if v not in matched:
                matched.add(u)
                matched.add(v)
                size += 1
                break
    return size


def _components(adj: dict[int, set[int]]) -> list[dict[int, set[int]]]:
    seen: set[int] = set()
    comps = []
    for start in adj:
        if start in seen:
            continue
        stack = [start]
        comp: set[int] = set()
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            stack.extend(adj[u] - comp)
        seen |= comp
        comps.append({u: set(adj[u]) for u in comp})
    return comps


def min_vertex_cover_size(adj: dict[int, set[int]]) -> int:
    """Exact minimum vertex cover size of an undirected graph.

    ``adj`` maps vertex -> neighbor set (symmetric).  Isolated vertices are
    ignored.  Raises CapacityError if the search exceeds its node budget.
    """
    adj = {u: set(vs) for u, vs in adj.items() if vs}
    nodes = [0]

    def solve(g: dict[int, set[int]], ub: int) -> int:
        """min(min_vc(g), ub)."""
        nodes[0] += 1
        if nodes[0] > BNB_NODE_BUDGET:
            raise CapacityError("vertex cover search exceeded its node budget")
        g = {u: set(vs) for u, vs in g.items() if vs}
        taken = 0
        # Degree-1 kernelization: the neighbor of a pendant vertex is in
        # some optimal cover.
        while True:
            pendant = next((u for u, vs in g.items() if len(vs) == 1), None)
            if pendant is None:
                break
            (nbr,) = g[pendant]
            taken += 1
            for x in g.pop(nbr):
                g[x].discard(nbr)
            g = {u: vs for u, vs in g.items() if vs}
            if taken >= ub:
                return ub
        if not g:
            return min(taken, ub)
        lb = taken + _greedy_matching_size_adj(g)
        if lb >= ub:
            return ub
        v = max(g, key=lambda u: len(g[u]))
        neighbors = set(g[v])
        # Branch A: v joins the cover.
        g_a = {u: vs - {v} for u, vs in g.items() if u != v}
        best = taken + 1 + solve(g_a, ub - taken - 1)
        ub = min(ub, best)
        # Branch B: v stays, so all its neighbors join the cover.
        removed = neighbors | {v}
        g_b = {u: vs - removed for u, vs in g.items() if u not in removed}
        cost = taken + len(neighbors)
        if cost < ub:
            best = min(best, cost + solve(g_b, ub - cost))
        return min(ub, best)

    total = 0
    for comp in _components(adj):
        total += solve(comp, min_vertex_cover_upper(comp) + 1)
    return total


def min_vertex_cover_upper(adj: dict[int, set[int]]) -> int:
    """A cheap valid cover size (both endpoints of a greedy matching)."""
    matched: set[int] = set()
    for u in adj:
        if u in matched:
            continue
        for v in adj[u]:
            if v not in matched:
                matched.add(u)
                matched.add(v)
                break
    return len(matched)


def hopcroft_karp(adj: dict[int, Sequence[int]], stop_at: Optional[int] = None) -> int:
    """Maximum matching size of a bipartite graph given as left -> rights.

    If ``stop_at`` is given, the search may return early once the matching
    reaches that size (the return value is then a valid lower bound).
    """
    INF = -1
    pair_left: dict[int, int] = {}
    pair_right: dict[int, int] = {}
    dist: dict[int, int] = {}
    lefts = list(adj)

    # Greedy initialization speeds up the phases considerably.
    for u in lefts:
        for v in adj[u]:
            if v not in pair_right:
                pair_left[u] = v
                pair_right[v] = u
                break

    def bfs() -> bool:
        queue: deque[int] = deque()
        for u in lefts:
            if u not in pair_left:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = pair_right.get(v)
                if w is None:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = pair_right.get(v)
            if w is None or (dist[w] == dist[u] + 1 and dfs(w)):
                pair_left[u] = v
                pair_right[v] = u
                return True
        dist[u] = INF
        return False

    size = len(pair_left)
    while (stop_at is None or size < stop_at) and bfs():
        for u in lefts:
            if u not in pair_left and dfs(u):
                size += 1
                if stop_at is not None and size >= stop_at:
                    return size
    return size


# ---------------------------------------------------------------------------
# Certificate route for large tables (no quadratic pair graph).


def oriented_to_raw_index(oidx: int, domain: Domain, down_set: frozenset[int]) -> int:
    """Map an index in the flipped (oriented) odometer order back to raw."""
    n = domain.n
    ridx = 0
    s = 1
    for k in range(domain.d):
        oidx, c = divmod(oidx, n)
        if k in down_set:
            c = n - 1 - c
        ridx += c * s
        s *= n
    return ridx


def violation_exists(
    values: Sequence[Value],
    domain: Domain,
    down_set: frozenset[int],
    cover: frozenset[int] | set[int],
) -> bool:
    """Does any violated comparable pair survive outside ``cover``?

    Works over the oriented partial order (down dimensions reversed).  A
    single sweep in oriented odometer order carries, for each point, the
    maximum surviving value among points strictly below it; a surviving
    point with a smaller value than that maximum is a violation.
    """
    n, d = domain.n, domain.d
    size = domain.size()
    strides = domain.strides()
    best_below: list[Optional[Value]] = [None] * size
    vals = values
    for oidx in range(size):
        below: Optional[Value] = None
        rem = oidx
        for k in range(d):
            c = rem % n
            rem //= n
            if c > 0:
                m = best_below[oidx - strides[k]]
                if m is not None and (below is None or m > below):
                    below = m
        ridx = oriented_to_raw_index(oidx, domain, down_set)
        if ridx not in cover:
            v = vals[ridx]
            if below is not None and below > v:
                return True
            if below is None or v > below:
                below = v
        best_below[oidx] = below
    return False


def neighbor_edge_classes(
    values: Sequence[Value], domain: Domain
) -> list[tuple[list[tuple[int, int]], list[tuple[int, int]]]]:
    """Per dimension: (increasing, decreasing) neighbor pairs by raw index.

    A neighbor pair differs in one coordinate by one, so whether it is
    violated under an orientation depends only on that dimension's
    direction: decreasing pairs violate an up dimension, increasing pairs
    violate a down dimension.
    """
    n = domain.n
    size = domain.size()
    strides = domain.strides()
    out = []
    for k in range(domain.d):
        s = strides[k]
        inc: list[tuple[int, int]] = []
        dec: list[tuple[int, int]] = []
        period = s * n
        for idx in range(size):
            if (idx % period) // s == n - 1:
                continue
            a, b = values[idx], values[idx + s]
            if a < b:
                inc.append((idx, idx + s))
            elif a > b:
                dec.append((idx, idx + s))
        out.append((inc, dec))
    return out


def violated_neighbor_edges(
    edge_classes: list[tuple[list[tuple[int, int]], list[tuple[int, int]]]],
    down_set: frozenset[int],
) -> list[tuple[int, int]]:
    """Oriented violated neighbor pairs as (pred, succ) with f(pred) > f(succ)."""
    edges: list[tuple[int, int]] = []
    for k, (inc, dec) in enumerate(edge_classes):
        if k in down_set:
            edges.extend((b, a) for a, b in inc)
        else:
            edges.extend(dec)
    return edges


def certified_cover_size(
    values: Sequence[Value],
    domain: Domain,
    down_set: frozenset[int],
    edge_classes: list[tuple[list[tuple[int, int]], list[tuple[int, int]]]] | None = None,
) -> Optional[int]:
    """Exact minimum cover size of the full violation graph, if certifiable.

    Builds a vertex-disjoint violated-pair matching from neighbor pairs
    (lower bound) and tries the matched endpoints of either side as a
    cover (upper bound, verified by sweep).  Returns None when the two
    certificates do not meet.
    """
    if edge_classes is None:
        edge_classes = neighbor_edge_classes(values, domain)
    edges = violated_neighbor_edges(edge_classes, down_set)
    if not edges:
        return 0 if not violation_exists(values, domain, down_set, frozenset()) else None
    matching = greedy_matching(edges)
    for side in (1, 0):
        cand = {e[side] for e in matching}
        if not violation_exists(values, domain, down_set, cand):
            return len(matching)
    return None
