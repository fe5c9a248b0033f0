import io
import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from unate.core import (
    Domain,
    FunctionOracle,
    RandomSource,
    TruthTable,
    ceil_log2,
    concat,
    hamming_tail_probability,
    restrict,
)
from unate.instances import gen_parity_sum_h

small_domains = st.tuples(st.integers(2, 4), st.integers(1, 4)).map(lambda t: Domain(*t))


class TestDomainCodec:
    def test_zero_index(self):
        assert Domain(2, 3).index_to_point(0) == (0, 0, 0)

    def test_coordinate_zero_fastest(self):
        assert Domain(2, 3).index_to_point(1) == (1, 0, 0)

    def test_mixed_radix(self):
        assert Domain(3, 2).index_to_point(5) == (2, 1)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            Domain(2, 3).index_to_point(8)
        with pytest.raises(ValueError):
            Domain(2, 3).index_to_point(-1)
        with pytest.raises(ValueError):
            Domain(2, 3).point_to_index((0, 0, 2))
        with pytest.raises(ValueError):
            Domain(2, 3).point_to_index((0, 0))

    @given(small_domains, st.data())
    def test_round_trip(self, domain, data):
        idx = data.draw(st.integers(0, domain.size() - 1))
        assert domain.point_to_index(domain.index_to_point(idx)) == idx

    @given(small_domains)
    def test_iter_points_matches_codec(self, domain):
        pts = list(domain.iter_points())
        assert len(pts) == domain.size()
        assert pts == [domain.index_to_point(i) for i in range(domain.size())]

    def test_validation(self):
        with pytest.raises(ValueError):
            Domain(1, 3)
        with pytest.raises(ValueError):
            Domain(2, 0)
        with pytest.raises(ValueError):
            Domain(2, 63)  # 2**63 exceeds the index cap

    def test_hypercube_is_not_special(self):
        # d-bit count of ones equals the coordinate sum on the hypercube
        for p in Domain(2, 4).iter_points():
            assert sum(p) == bin(Domain(2, 4).point_to_index(p)).count("1")


class TestConcat:
    def test_basic(self):
        assert concat(3, {0}, (5,), (0, 1)) == (5, 0, 1)

    def test_empty_kept_set(self):
        assert concat(2, (), (), (1, 1)) == (1, 1)

    def test_two_kept(self):
        assert concat(3, {0, 1}, (0, 2), (1,)) == (0, 2, 1)

    def test_errors(self):
        with pytest.raises(ValueError):
            concat(3, {0, 0}, (1, 1), (0,))  # duplicate via list
        with pytest.raises(ValueError):
            concat(3, [1, 1], (1, 1), (0,))
        with pytest.raises(ValueError):
            concat(3, {0, 5}, (1, 1), (0,))
        with pytest.raises(ValueError):
            concat(3, {0}, (1, 2), (0, 1))  # z too long
        with pytest.raises(ValueError):
            concat(3, {0}, (1,), (0,))  # w too short


class TestRestrict:
    def test_full_dimension_set_is_identity(self):
        f = gen_parity_sum_h(3, {0}, {1})
        g = restrict(f, range(3), ())
        for p in Domain(2, 3).iter_points():
            assert g(p) == gen_parity_sum_h(3, {0}, {1})(p)

    def test_projection_becomes_constant(self):
        f = FunctionOracle(Domain(2, 3), lambda p: p[1], name="proj")
        g = restrict(f, {0, 2}, (1,))
        for p in Domain(2, 2).iter_points():
            assert g(p) == 1

    def test_h_restriction_matches_direct_evaluation(self):
        f = gen_parity_sum_h(4, {0}, {1})
        g = restrict(f, {0, 1}, (0, 0))
        direct = gen_parity_sum_h(4, {0}, {1})
        for z in Domain(2, 2).iter_points():
            assert g(z) == direct(concat(4, {0, 1}, z, (0, 0)))

    def test_charges_parent_counter(self):
        f = gen_parity_sum_h(3, {0}, {1})
        g = restrict(f, {1}, (0, 0))
        g((0,))
        g((1,))
        assert f.query_count == 2
        assert g.query_count == 2

    def test_empty_keep_rejected(self):
        f = gen_parity_sum_h(2, {0}, {1})
        with pytest.raises(ValueError):
            restrict(f, (), (0, 0))

    @given(st.data())
    def test_coherence_with_concat(self, data):
        domain = data.draw(small_domains)
        values = data.draw(
            st.lists(st.integers(0, 3), min_size=domain.size(), max_size=domain.size())
        )
        table = TruthTable(domain, values)
        keep = data.draw(
            st.sets(st.integers(0, domain.d - 1), min_size=1, max_size=domain.d)
        )
        pinned = data.draw(
            st.tuples(*[st.integers(0, domain.n - 1)] * (domain.d - len(keep)))
        )
        f = table.as_oracle()
        g = restrict(f, keep, pinned)
        z = data.draw(st.tuples(*[st.integers(0, domain.n - 1)] * len(keep)))
        assert g(z) == table[concat(domain.d, keep, z, pinned)]


class TestQueryAccounting:
    def test_counts_every_call(self):
        f = gen_parity_sum_h(3, {0}, {1})
        assert f.query_count == 0
        for k in range(5):
            f((0, 0, 0))
        assert f.query_count == 5
        f.reset_query_count()
        assert f.query_count == 0

    def test_pure_evaluation(self):
        f = gen_parity_sum_h(3, {0, 2}, {1})
        assert f((1, 0, 1)) == f((1, 0, 1))


class TestHammingTail:
    def test_d1_is_zero(self):
        assert hamming_tail_probability(1) == 0

    @pytest.mark.parametrize("d", range(1, 13))
    def test_matches_brute_enumeration(self, d):
        # independent oracle: walk all 2^d points and test the tail
        # condition |k - d/2| > 3 sqrt(d) as (k - d/2)^2 > 9d over rationals
        hits = 0
        for x in itertools.product((0, 1), repeat=d):
            if (Fraction(sum(x)) - Fraction(d, 2)) ** 2 > 9 * d:
                hits += 1
        assert hamming_tail_probability(d) == Fraction(hits, 2**d)

    @pytest.mark.parametrize("d", [64, 100])
    def test_below_paper_bound(self, d):
        assert hamming_tail_probability(d) < Fraction(3, 100)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            hamming_tail_probability(0)


class TestRandomSource:
    def test_reproducible(self):
        a = RandomSource(7, 3).rng()
        b = RandomSource(7, 3).rng()
        assert [a.randrange(1000) for _ in range(20)] == [b.randrange(1000) for _ in range(20)]

    def test_streams_differ(self):
        a = RandomSource(7, 0).rng()
        b = RandomSource(7, 1).rng()
        assert [a.randrange(1000) for _ in range(20)] != [b.randrange(1000) for _ in range(20)]


class TestTruthTableIO:
    def test_round_trip_ints_and_fractions(self):
        table = TruthTable(Domain(2, 2), [0, Fraction(1, 3), -2, Fraction(9, 3)])
        buf = io.StringIO()
        table.write(buf)
        text = buf.getvalue()
        assert text.splitlines()[0] == "hypergrid 2 2"
        again = TruthTable.read(io.StringIO(text))
        assert again == table
        buf2 = io.StringIO()
        again.write(buf2)
        assert buf2.getvalue() == text

    def test_integer_fractions_normalize(self):
        table = TruthTable(Domain(2, 1), [Fraction(4, 2), 1])
        assert table.values == [2, 1]
        assert all(isinstance(v, int) for v in table.values)

    def test_save_load(self, tmp_path):
        table = TruthTable(Domain(3, 2), list(range(9)))
        path = tmp_path / "t.txt"
        table.save(str(path))
        assert TruthTable.load(str(path)) == table

    def test_bad_header(self):
        with pytest.raises(ValueError):
            TruthTable.read(io.StringIO("grid 2 2\n0\n0\n0\n0\n"))

    def test_bad_value(self):
        with pytest.raises(ValueError):
            TruthTable.read(io.StringIO("hypergrid 2 1\n0\nx\n"))

    def test_wrong_count(self):
        with pytest.raises(ValueError):
            TruthTable.read(io.StringIO("hypergrid 2 2\n0\n1\n"))

    def test_rejects_non_exact_values(self):
        with pytest.raises(TypeError):
            TruthTable(Domain(2, 1), [0.5, 1])


def test_ceil_log2():
    assert [ceil_log2(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]
    with pytest.raises(ValueError):
        ceil_log2(0)


def test_oracle_from_table_matches_values():
    domain = Domain(3, 2)
    table = TruthTable(domain, list(range(9)))
    f = table.as_oracle()
    for idx, p in enumerate(domain.iter_points()):
        assert f(p) == idx
    assert f.query_count == 9


def test_domain_size_functions():
    assert Domain(2, 5).size() == 32
    assert Domain(3, 3).strides() == (1, 3, 9)
    assert Domain(2, 2).contains((1, 1))
    assert not Domain(2, 2).contains((1, 2))


def test_random_point_in_domain():
    domain = Domain(4, 3)
    rng = RandomSource(0).rng()
    for _ in range(50):
        assert domain.contains(domain.random_point(rng))
