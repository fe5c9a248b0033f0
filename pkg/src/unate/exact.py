"""Ground-truth oracles for small instances.

Everything here consumes a full TruthTable and returns exact answers:
unateness and directed-monotonicity predicates, exact normalized distances
via minimum vertex cover of the violation graph, fiber value statistics,
and the plurality function.  Capacity caps are explicit; nothing degrades
to an approximation silently.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import cover as _cover
from .core import CapacityError, Direction, Domain, Orientation, Point, TruthTable, Value, _check_dims

#: Largest table for which the all-pairs violation graph is materialized.
DENSE_PAIR_CAP = 256

#: Absolute table size cap for any exact computation in this module.
TABLE_CAP = 1 << 20

#: Largest number of orientation representatives distance_to_unate will scan.
ORIENTATION_ORBIT_CAP = 4096


# ---------------------------------------------------------------------------
# Predicates


def _axis_trends(table: TruthTable, dim: int) -> tuple[bool, bool]:
    """(has_increase, has_decrease) over all neighbor pairs along dim."""
    n = table.domain.n
    s = table.domain.strides()[dim]
    period = s * n
    values = table.values
    inc = dec = False
    for idx in range(table.domain.size()):
        if (idx % period) // s == n - 1:
            continue
        a, b = values[idx], values[idx + s]
        if a < b:
            inc = True
        elif a > b:
            dec = True
        if inc and dec:
            return True, True
    return inc, dec


def depends_on(table: TruthTable, dim: int) -> bool:
    inc, dec = _axis_trends(table, dim)
    return inc or dec


def is_monotone_directed(table: TruthTable, orientation: Orientation) -> bool:
    """True iff every neighbor pair respects the orientation's direction."""
    if not orientation.covers_exactly(table.domain.d):
        raise ValueError("orientation must cover exactly the table's dimensions")
    for dim in range(table.domain.d):
        inc, dec = _axis_trends(table, dim)
        if orientation.direction(dim) is Direction.UP and dec:
            return False
        if orientation.direction(dim) is Direction.DOWN and inc:
            return False
    return True


def is_unate(table: TruthTable) -> bool:
    """True iff some per-dimension direction assignment makes f monotone.

    Dimensions are independent: dimension i is consistent iff its lines are
    all non-decreasing or all non-increasing, so no orientation enumeration
    is needed.
    """
    for dim in range(table.domain.d):
        inc, dec = _axis_trends(table, dim)
        if inc and dec:
            return False
    return True


def unate_orientation(table: TruthTable) -> Optional[Orientation]:
    """An orientation witnessing unateness, or None.  Ties break to up."""
    dirs = {}
    for dim in range(table.domain.d):
        inc, dec = _axis_trends(table, dim)
        if inc and dec:
            return None
        dirs[dim] = Direction.DOWN if dec else Direction.UP
    return Orientation(dirs)


# ---------------------------------------------------------------------------
# Violation graph and exact distances


@dataclass(frozen=True)
class ViolationGraph:
    """Violated comparable pairs of a directed-monotonicity instance.

    Each edge is an ordered pair (below, above) of points with below
    preceding above in the oriented order and f(below) > f(above).
    """

    domain: Domain
    orientation: Orientation
    edges: tuple[tuple[Point, Point], ...]

    def vertex_count(self) -> int:
        seen = {p for e in self.edges for p in e}
        return len(seen)


def _dense_violation_pairs(table: TruthTable, down_set: frozenset[int]) -> list[tuple[int, int]]:
    """All violated comparable pairs (below_idx, above_idx), small tables only."""
    size = table.domain.size()
    if size > DENSE_PAIR_CAP:
        raise CapacityError(
            f"all-pairs violation graph needs n^d <= {DENSE_PAIR_CAP}, got {size}"
        )
    pts = list(table.domain.iter_points())
    values = table.values
    d = table.domain.d
    sign = [-1 if k in down_set else 1 for k in range(d)]
    out: list[tuple[int, int]] = []
    for i in range(size):
        pi, vi = pts[i], values[i]
        for j in range(i + 1, size):
            pj, vj = pts[j], values[j]
            if vi == vj:
                continue
            le = ge = True
            for k in range(d):
                delta = (pj[k] - pi[k]) * sign[k]
                if delta > 0:
                    ge = False
                elif delta < 0:
                    le = False
                if not (le or ge):
                    break
            if le and vi > vj:  # pi below pj
                out.append((i, j))
            elif ge and vj > vi:  # pj below pi
                out.append((j, i))
    return out


def violation_graph(table: TruthTable, orientation: Orientation) -> ViolationGraph:
    if not orientation.covers_exactly(table.domain.d):
        raise ValueError("orientation must cover exactly the table's dimensions")
    pairs = _dense_violation_pairs(table, orientation.down_set)
    pts = list(table.domain.iter_points())
    edges = tuple((pts[a], pts[b]) for a, b in pairs)
    return ViolationGraph(table.domain, orientation, edges)


def _cover_size_dense(table: TruthTable, down_set: frozenset[int]) -> int:
    pairs = _dense_violation_pairs(table, down_set)
    if not pairs:
        return 0
    if len(table.distinct_values()) <= 2:
        # Violated pairs always run from the larger value to the smaller,
        # so with two values the graph is bipartite by value and minimum
        # cover equals maximum matching.
        adj: dict[int, list[int]] = {}
        for a, b in pairs:
            adj.setdefault(a, []).append(b)
        return _cover.hopcroft_karp(adj)
    adj_u: dict[int, set[int]] = {}
    for a, b in pairs:
        adj_u.setdefault(a, set()).add(b)
        adj_u.setdefault(b, set()).add(a)
    return _cover.min_vertex_cover_size(adj_u)


def _cover_size_exact(
    table: TruthTable,
    down_set: frozenset[int],
    edge_classes=None,
) -> int:
    """Exact violated-pair cover size, routed by table size."""
    size = table.domain.size()
    if size > TABLE_CAP:
        raise CapacityError(f"table size {size} exceeds the exact-oracle cap {TABLE_CAP}")
    if size <= DENSE_PAIR_CAP:
        return _cover_size_dense(table, down_set)
    certified = _cover.certified_cover_size(table.values, table.domain, down_set, edge_classes)
    if certified is None:
        raise CapacityError(
            f"cannot certify a minimum cover at size {size}; "
            f"the dense path caps at {DENSE_PAIR_CAP} points"
        )
    return certified


def distance_to_monotone_directed(table: TruthTable, orientation: Orientation) -> Fraction:
    """Exact normalized Hamming distance to the nearest oriented-monotone function.

    Equals (minimum vertex cover of the violation graph) / n^d: a repair
    set must cover every violated pair, and deleting a cover leaves a
    function extendable monotonically over the reals.
    """
    if not orientation.covers_exactly(table.domain.d):
        raise ValueError("orientation must cover exactly the table's dimensions")
    size = table.domain.size()
    return Fraction(_cover_size_exact(table, orientation.down_set), size)


def _swap_leaves_table_invariant(table: TruthTable, a: int, b: int) -> bool:
    """Does exchanging coordinates a and b fix the table pointwise?"""
    n = table.domain.n
    sa, sb = table.domain.strides()[a], table.domain.strides()[b]
    values = table.values
    for idx in range(table.domain.size()):
        ca = (idx // sa) % n
        cb = (idx // sb) % n
        if ca == cb:
            continue
        jdx = idx + (cb - ca) * sa + (ca - cb) * sb
        if values[idx] != values[jdx]:
            return False
    return True


def _exchangeability_classes(table: TruthTable, dims: Sequence[int]) -> list[list[int]]:
    """Partition dims into classes of pairwise-exchangeable coordinates.

    Exchangeability (a coordinate transposition fixing the table) is an
    equivalence relation, because table automorphisms compose; testing a
    candidate against one representative per class is therefore enough.
    """
    classes: list[list[int]] = []
    for dim in dims:
        for cls in classes:
            if _swap_leaves_table_invariant(table, cls[0], dim):
                cls.append(dim)
                break
        else:
            classes.append([dim])
    return classes


def _orientation_orbit_reps(classes: list[list[int]]) -> list[frozenset[int]]:
    """One down-set per orbit of orientations under in-class permutations.

    Permuting exchangeable coordinates maps oriented-monotone functions to
    oriented-monotone functions bijectively and preserves distances, so the
    distance only depends on how many dimensions of each class point down.
    """
    reps: list[frozenset[int]] = [frozenset()]
    for cls in classes:
        new: list[frozenset[int]] = []
        for base in reps:
            for k in range(len(cls) + 1):
                new.append(base | frozenset(cls[:k]))
        reps = new
    return reps


def distance_to_unate(table: TruthTable) -> Fraction:
    """Exact normalized distance to the nearest unate function.

    Minimizes distance_to_monotone_directed over one orientation per
    symmetry orbit; dimensions the function ignores stay up.  Orientations
    whose violated-pair matching already matches the best cover found are
    pruned by weak duality without an exact solve.
    """
    size = table.domain.size()
    if size > TABLE_CAP:
        raise CapacityError(f"table size {size} exceeds the exact-oracle cap {TABLE_CAP}")
    deps = [k for k in range(table.domain.d) if depends_on(table, k)]
    if not deps:
        return Fraction(0)
    classes = _exchangeability_classes(table, deps)
    reps = _orientation_orbit_reps(classes)
    if len(reps) > ORIENTATION_ORBIT_CAP:
        raise CapacityError(
            f"{len(reps)} orientation representatives exceed the cap {ORIENTATION_ORBIT_CAP}"
        )
    edge_classes = _cover.neighbor_edge_classes(table.values, table.domain)
    two_valued = len(table.distinct_values()) <= 2

    scored: list[tuple[int, frozenset[int]]] = []
    for down in reps:
        edges = _cover.violated_neighbor_edges(edge_classes, down)
        lb = len(_cover.greedy_matching(edges))
        scored.append((lb, down))
    scored.sort(key=lambda t: (t[0], sorted(t[1])))

    best: Optional[int] = None
    for lb, down in scored:
        if best is not None and lb >= best:
            continue
        if best is not None and two_valued:
            # Sharpen the bound with a maximum matching on neighbor pairs
            # before paying for an exact solve.
            edges = _cover.violated_neighbor_edges(edge_classes, down)
            adj: dict[int, list[int]] = {}
            for a, b in edges:
                adj.setdefault(a, []).append(b)
            lb = _cover.hopcroft_karp(adj, stop_at=best)
            if lb >= best:
                continue
        got = _cover_size_exact(table, down, edge_classes)
        if best is None or got < best:
            best = got
        if best == 0:
            break
    assert best is not None
    return Fraction(best, size)


# ---------------------------------------------------------------------------
# Restriction statistics


@dataclass(frozen=True)
class RestrictionStats:
    """Per-fiber value frequency vectors for a dimension set T.

    ``fibers`` maps each z in [n]^T (a point over the kept dimensions, in
    increasing dimension order) to its frequency vector, sorted
    non-increasing and zero-padded to r, the number of distinct values the
    function takes globally.
    """

    t_dims: tuple[int, ...]
    r: int
    fibers: dict[Point, tuple[Fraction, ...]]


def _fiber_counters(table: TruthTable, t_sorted: list[int]) -> dict[Point, Counter]:
    counters: dict[Point, Counter] = {}
    for idx, p in enumerate(table.domain.iter_points()):
        key = tuple(p[i] for i in t_sorted)
        c = counters.get(key)
        if c is None:
            c = counters[key] = Counter()
        c[table.values[idx]] += 1
    return counters


def restriction_stats(table: TruthTable, t_dims: Iterable[int]) -> RestrictionStats:
    t_sorted = _check_dims(table.domain.d, t_dims)
    r = len(set(table.values))
    fibers: dict[Point, tuple[Fraction, ...]] = {}
    for key, counts in _fiber_counters(table, t_sorted).items():
        m = sum(counts.values())
        freqs = sorted((Fraction(c, m) for c in counts.values()), reverse=True)
        freqs += [Fraction(0)] * (r - len(freqs))
        fibers[key] = tuple(freqs)
    return RestrictionStats(tuple(t_sorted), r, fibers)


def surprise_statistic(table: TruthTable, t_dims: Iterable[int]) -> Fraction:
    """Mean over fibers of sum_k P_k (1 - P_k), computed exactly.

    This is the chance that two uniform points agreeing on T take
    different values, i.e. the per-call success probability of the
    influential-dimension search.
    """
    stats = restriction_stats(table, t_dims)
    total = Fraction(0)
    for freqs in stats.fibers.values():
        total += sum((p * (1 - p) for p in freqs), Fraction(0))
    return total / len(stats.fibers)


def empirical_find_probability(table: TruthTable, t_dims: Iterable[int]) -> Fraction:
    """Exact probability that a uniform pair with x_T = y_T has f(x) != f(y).

    Counts unequal ordered value pairs fiber by fiber; kept deliberately
    independent of surprise_statistic so the two can be equated in tests.
    """
    t_sorted = _check_dims(table.domain.d, t_dims)
    total = Fraction(0)
    counters = _fiber_counters(table, t_sorted)
    for counts in counters.values():
        m = sum(counts.values())
        vals = list(counts.items())
        unequal = 0
        for i, (v, cv) in enumerate(vals):
            for w, cw in vals[i + 1:]:
                unequal += 2 * cv * cw  # ordered pairs, both orders
        total += Fraction(unequal, m * m)
    return total / len(counters)


def plurality_function(table: TruthTable, t_dims: Iterable[int]) -> TruthTable:
    """The most frequent value on each fiber over T; ties break to the
    smallest value so outputs are reproducible."""
    t_sorted = _check_dims(table.domain.d, t_dims)
    if not t_sorted:
        raise ValueError("plurality over the empty dimension set is a bare value; keep >= 1 dim")
    counters = _fiber_counters(table, t_sorted)
    sub = Domain(table.domain.n, len(t_sorted))
    values: list[Value] = []
    for z in sub.iter_points():
        counts = counters[z]
        best = max(counts.values())
        values.append(min(v for v, c in counts.items() if c == best))
    return TruthTable(sub, values)


def axis_pair_stats(table: TruthTable, dim: int) -> tuple[Fraction, Fraction, Fraction]:
    """Fractions of (increasing, decreasing, constant) endpoint pairs along dim.

    Hypercube only: each fiber over the other dimensions contributes one
    (x with dim=0, x with dim=1) pair.
    """
    if table.domain.n != 2:
        raise ValueError("axis pair statistics are defined for hypercube tables")
    s = table.domain.strides()[dim]
    values = table.values
    inc = dec = flat = 0
    period = 2 * s
    for idx in range(table.domain.size()):
        if (idx % period) // s == 1:
            continue
        a, b = values[idx], values[idx + s]
        if a < b:
            inc += 1
        elif a > b:
            dec += 1
        else:
            flat += 1
    pairs = table.domain.size() // 2
    return Fraction(inc, pairs), Fraction(dec, pairs), Fraction(flat, pairs)
