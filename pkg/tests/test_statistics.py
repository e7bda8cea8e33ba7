import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_array_equal

from chisq_homogeneity import (
    AlternativePair,
    InvalidArgument,
    TwoSampleCounts,
    Weights,
    custom_partition,
    decompose,
    equal_partition,
    population_T,
    project_thetas,
    t1_stat,
    t2_stat,
    t3_stat,
    t_stat,
    tally,
    w_term,
)
from chisq_homogeneity.validation import brute_force_parts, decomposition_oracle

from .conftest import partitions

unit = st.floats(0, 1)


def counts(part, cx, cy):
    return TwoSampleCounts(part, np.asarray(cx), np.asarray(cy))


class TestTally:
    def test_basic(self):
        c = tally(equal_partition(2), [0.1, 0.2, 0.6], [0.7])
        assert_array_equal(c.cx, [2, 1])
        assert_array_equal(c.cy, [0, 1])
        assert c.a == 3

    def test_right_endpoint(self):
        c = tally(equal_partition(3), [1.0], [0.0])
        assert_array_equal(c.cx, [0, 0, 1])
        assert_array_equal(c.cy, [1, 0, 0])

    def test_empty(self):
        with pytest.raises(InvalidArgument, match="xs is empty"):
            tally(equal_partition(2), [], [0.5])

    def test_offending_index(self):
        with pytest.raises(InvalidArgument, match=r"ys\[2\]"):
            tally(equal_partition(2), [0.5], [0.1, 0.2, 1.5])


class TestT1:
    def test_separated(self):
        assert t1_stat(counts(equal_partition(2), [2, 0], [0, 2])) == pytest.approx(8.0)

    def test_identical(self):
        assert t1_stat(counts(equal_partition(3), [2, 4, 6], [1, 2, 3])) == 0.0

    def test_substitution(self):
        assert t1_stat(counts(equal_partition(2), [3, 1], [2, 2])) == pytest.approx(1.0)


class TestT2:
    @given(st.integers(2, 10), st.data())
    def test_equal_cells_match_t1(self, m, data):
        cx = data.draw(st.lists(st.integers(0, 9), min_size=m, max_size=m).filter(any))
        cy = data.draw(st.lists(st.integers(0, 9), min_size=m, max_size=m).filter(any))
        c = counts(equal_partition(m), cx, cy)
        assert t_stat(c) == pytest.approx(t1_stat(c), rel=1e-12)

    def test_linear_in_weights(self):
        c = counts(custom_partition([0, 0.3, 1]), [3, 5], [4, 1])
        assert t2_stat(c, Weights(np.full(2, 2.0))) == 2 * t2_stat(c)

    def test_substitution(self):
        assert t2_stat(counts(equal_partition(2), [2, 0], [0, 2]), Weights.ones(2)) == pytest.approx(8.0)

    def test_weights_bounds(self):
        with pytest.raises(InvalidArgument):
            Weights(np.array([0.0, 1.0]))

    def test_weights_length(self):
        with pytest.raises(InvalidArgument):
            t2_stat(counts(equal_partition(3), [1, 1, 1], [1, 1, 1]), Weights.ones(2))


class TestW:
    def test_uniform_counts(self):
        c = counts(equal_partition(2), [1, 1], [1, 1])
        assert w_term(c) == pytest.approx(2.0)

    def test_single_cell(self):
        c = counts(equal_partition(4), [5, 0, 0, 0], [0, 0, 3, 0])
        assert np.isfinite(w_term(c))
        assert w_term(c) == 0.0

    def test_t3_identical(self):
        c = counts(equal_partition(3), [2, 1, 3], [2, 1, 3])
        assert t3_stat(c) == pytest.approx(-w_term(c))
        assert t3_stat(c) <= 0

    def test_true_centering_differs_from_plugin(self):
        c = counts(equal_partition(2), [3, 1], [1, 3])
        assert w_term(c, theta=[0, 0], tau=[0, 0]) != w_term(c)


class TestPopulationT:
    pair = AlternativePair(
        project_thetas(equal_partition(2), [0.2, -0.2]),
        project_thetas(equal_partition(2), [0.0, 0.0]),
    )

    def test_t1(self):
        assert population_T(self.pair, 100, "T1") == pytest.approx(4.0)

    def test_null(self):
        d = project_thetas(equal_partition(3), [0.1, 0.2, -0.3])
        assert population_T(AlternativePair.null(d), 100, "T2") == 0.0

    def test_t_equals_t1_on_equal_cells(self):
        assert population_T(self.pair, 100, "T") == pytest.approx(population_T(self.pair, 100, "T1"))

    def test_unknown(self):
        with pytest.raises(InvalidArgument):
            population_T(self.pair, 100, "T4")


samples = st.lists(unit, min_size=1, max_size=30)


class TestInvariants:
    @given(partitions(), samples, samples, st.randoms(use_true_random=False))
    def test_permutation(self, part, xs, ys, rnd):
        c = tally(part, xs, ys)
        xs2, ys2 = list(xs), list(ys)
        rnd.shuffle(xs2)
        rnd.shuffle(ys2)
        c2 = tally(part, xs2, ys2)
        g = Weights(np.linspace(0.5, 2, part.m))
        for f in (t1_stat, t_stat, lambda c: t2_stat(c, g), lambda c: t3_stat(c, g)):
            assert f(c2) == f(c)

    @given(partitions(), samples, samples)
    def test_swap(self, part, xs, ys):
        a = t1_stat(tally(part, xs, ys)) / len(xs)
        b = t1_stat(tally(part, ys, xs)) / len(ys)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-14)

    @given(partitions(), samples, samples, st.data())
    def test_counts_only(self, part, xs, ys, data):
        # move every point to another location in the same cell
        def jitter(v):
            j = part.locate(np.asarray(v))
            lo, hi = part.edges[j], part.edges[j + 1]
            u = np.array(data.draw(st.lists(st.floats(0, 0.999), min_size=len(v), max_size=len(v))))
            return lo + u * (hi - lo)

        c, c2 = tally(part, xs, ys), tally(part, jitter(xs), jitter(ys))
        assert t1_stat(c) == t1_stat(c2)
        assert t3_stat(c) == t3_stat(c2)


class TestDecomposition:
    def test_oracle(self):
        res = decomposition_oracle(100, seed=11)
        assert res.passed, res

    @given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_random_instances(self, n, l, seed):
        rng = np.random.default_rng(seed)
        part = custom_partition([0, 0.3, 0.65, 1]) if seed % 2 else equal_partition(2)
        theta = project_thetas(part, rng.uniform(-0.4, 0.4, part.m)).theta
        tau = project_thetas(part, rng.uniform(-0.4, 0.4, part.m)).theta
        xs, ys = rng.random(n), rng.random(l)
        g = rng.uniform(0.5, 2, part.m)
        stat, parts = brute_force_parts(part, xs, ys, g, theta, tau)
        lib = decompose(tally(part, xs, ys), Weights(g), theta, tau)
        assert stat == pytest.approx(t2_stat(tally(part, xs, ys), Weights(g)), abs=1e-10)
        for u, v in zip(lib, parts):
            assert u == pytest.approx(v, abs=1e-10)
        assert lib.total == pytest.approx(stat, abs=1e-10)

    def test_plugin_has_no_shift_or_linear_part(self):
        c = counts(custom_partition([0, 0.4, 1]), [5, 2], [1, 6])
        dec = decompose(c)
        assert dec.linear == pytest.approx(0.0, abs=1e-12)
        assert dec.diagonal == pytest.approx(w_term(c))
        assert dec.total == pytest.approx(t2_stat(c))
