import json

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from chisq_homogeneity import (
    DomainError,
    InvalidArgument,
    TwoSampleCounts,
    Weights,
    critical_value,
    custom_partition,
    equal_partition,
    estimate_scales,
    gof_test,
    gof_test_counts,
    normal_cdf,
    normal_quantile,
    run_test,
    w_term,
)
from chisq_homogeneity.decision import REPORT_FIELDS


def counts(part, cx, cy):
    return TwoSampleCounts(part, np.asarray(cx), np.asarray(cy))


class TestNormal:
    def test_center(self):
        assert normal_cdf(0.0) == 0.5

    def test_against_high_precision(self):
        mpmath.mp.dps = 40
        for x in np.linspace(-8, 8, 161):
            ref = float(mpmath.ncdf(x))
            assert abs(normal_cdf(x) - ref) <= 1e-10

    def test_symmetry(self):
        for x in np.linspace(-6, 6, 49):
            assert normal_cdf(x) + normal_cdf(-x) == pytest.approx(1.0, abs=1e-15)

    @given(st.floats(1e-12, 1 - 1e-12))
    def test_quantile_inverts(self, q):
        assert abs(normal_cdf(normal_quantile(q)) - q) <= 1e-9

    @pytest.mark.parametrize("q", [0.0, 1.0, -0.1, 1.5])
    def test_quantile_domain(self, q):
        with pytest.raises(DomainError):
            normal_quantile(q)

    def test_critical_value_by_bisection(self):
        dens = lambda t: np.exp(-t * t / 2) / np.sqrt(2 * np.pi)

        def upper(x):
            return integrate.quad(dens, x, np.inf, epsabs=1e-14)[0]

        lo, hi = 0.0, 5.0
        while hi - lo > 1e-12:
            mid = (lo + hi) / 2
            lo, hi = (mid, hi) if upper(mid) > 0.05 else (lo, mid)
        assert critical_value(0.05) == pytest.approx(lo, abs=1e-9)
        assert critical_value(0.05) == pytest.approx(1.6449, abs=1e-4)

    def test_alpha_range(self):
        with pytest.raises(InvalidArgument):
            critical_value(0.0)


class TestRunTest:
    def test_identical_samples_accept(self):
        c = counts(equal_partition(5), [3, 4, 5, 2, 6], [3, 4, 5, 2, 6])
        rep = run_test(c, "K1")
        assert rep.statistic == 0.0
        assert rep.centering == pytest.approx(5 * 2)
        assert rep.z == pytest.approx(-10 / estimate_scales(c).sigma1_hat)
        assert not rep.reject

    def test_separated_reject(self):
        rep = run_test(counts(equal_partition(2), [200, 0], [0, 200]), "K1")
        assert rep.reject and rep.p_value < 1e-6

    @pytest.mark.parametrize("kind", ["K1", "K2", "K3"])
    def test_report_contract(self, kind):
        c = counts(custom_partition([0, 0.3, 0.7, 1]), [10, 12, 8], [7, 9, 14])
        rep = run_test(c, kind, Weights(np.array([1.0, 2.0, 0.5])))
        assert rep.reject == (rep.z > rep.x_alpha)
        assert rep.p_value == pytest.approx(1 - normal_cdf(rep.z))
        assert 0 <= rep.p_value <= 1
        assert rep.scale > 0
        assert rep.z == pytest.approx((rep.statistic - rep.centering) / rep.scale)
        d = json.loads(rep.to_json())
        assert list(d) == list(REPORT_FIELDS)
        assert set(d) == {"statistic", "centering", "scale", "z", "alpha", "x_alpha",
                          "reject", "p_value", "kind", "m", "n", "l", "a"}

    def test_unknown_kind(self):
        with pytest.raises(InvalidArgument):
            run_test(counts(equal_partition(2), [1, 1], [1, 1]), "K4")

    @given(st.data())
    def test_level_monotone(self, data):
        cx = data.draw(st.lists(st.integers(0, 50), min_size=4, max_size=4).filter(any))
        cy = data.draw(st.lists(st.integers(0, 50), min_size=4, max_size=4).filter(any))
        a1 = data.draw(st.floats(0.001, 0.5))
        a2 = data.draw(st.floats(a1, 0.999))
        c = counts(equal_partition(4), cx, cy)
        for kind in ("K1", "K2", "K3"):
            if run_test(c, kind, alpha=a1).reject:
                assert run_test(c, kind, alpha=a2).reject

    def test_degenerate_flagged(self):
        rep = run_test(counts(equal_partition(3), [5, 0, 0], [4, 0, 0]), "K2")
        assert rep.degenerate
        assert np.isfinite(rep.z)

    @given(st.data())
    def test_k2_k3_gap(self, data):
        cx = data.draw(st.lists(st.integers(0, 40), min_size=3, max_size=3).filter(any))
        cy = data.draw(st.lists(st.integers(0, 40), min_size=3, max_size=3).filter(any))
        c = counts(custom_partition([0, 0.25, 0.6, 1]), cx, cy)
        w = Weights(np.array([0.5, 1.5, 1.0]))
        for form in ("exact", "truncated"):
            est = estimate_scales(c, w, form)
            gap = abs(run_test(c, "K2", w, e_form=form).z - run_test(c, "K3", w, e_form=form).z)
            assert gap == pytest.approx(abs(est.e_hat - w_term(c, w)) / est.sigma2_hat, abs=1e-9)

    def test_k2_k3_gap_shrinks_for_truncated_bias(self):
        rng = np.random.default_rng(21)
        part = equal_partition(10)
        w = Weights(np.linspace(0.5, 2.0, 10))
        gaps = []
        for n in (100, 1000, 10_000):
            vals = []
            for _ in range(200):
                c = TwoSampleCounts(part, rng.multinomial(n, part.widths), rng.multinomial(n, part.widths))
                est = estimate_scales(c, w, "truncated")
                vals.append(abs(est.e_hat - w_term(c, w)) / est.sigma2_hat)
            gaps.append(np.mean(vals))
        assert gaps[0] > gaps[1] > gaps[2]


class TestGof:
    def test_proportional_counts(self):
        rep = gof_test_counts(equal_partition(4), [5, 5, 5, 5])
        assert rep.statistic == 0.0
        assert rep.centering == 3
        assert rep.scale == pytest.approx(np.sqrt(8))
        assert rep.l is None and rep.a is None

    def test_points(self):
        part = equal_partition(4)
        xs = [0.1, 0.3, 0.6, 0.9]
        assert gof_test(part, xs).statistic == 0.0

    def test_empty(self):
        with pytest.raises(InvalidArgument):
            gof_test(equal_partition(3), [])
