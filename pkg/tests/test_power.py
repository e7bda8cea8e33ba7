import csv

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chisq_homogeneity import (
    AlternativePair,
    InvalidArgument,
    Weights,
    critical_value,
    custom_partition,
    equal_partition,
    make_alternative,
    normal_cdf,
    power_curve,
    predict_beta,
    project_thetas,
    t1_theory,
    uniform_density,
)
from chisq_homogeneity.power import write_power_csv


def centered_case(m=20, n=2000, mult=0.0):
    """Alternative with M1 = sigma1 (x_alpha + mult) whose sigma1 matches the null one."""
    part = equal_partition(m)
    d = np.where(np.arange(m) % 2 == 0, 1.0, -1.0)
    null = uniform_density(part)
    sigma1 = np.sqrt(t1_theory(AlternativePair(null, null), n, n).leading_sigma_sq)
    target = sigma1 * (critical_value(0.05) + mult)
    s = np.sqrt(target / (n * m * np.sum(part.widths**2 * d**2)))
    # theta = s d / 2, tau = -s d / 2 keeps 1 + theta + a + a tau fixed when a = 1
    return make_alternative(part, d, target, n, base_theta=s * d / 2), sigma1, target


class TestPredictBeta:
    @pytest.mark.parametrize("kind", ["K1", "K2", "K3", "GoF"])
    def test_null(self, kind):
        part = custom_partition([0, 0.3, 0.6, 1])
        d = project_thetas(part, [0.2, -0.1, 0.0]) if kind != "GoF" else uniform_density(part)
        pred = predict_beta(AlternativePair(d, d), 500, 500, kind)
        assert pred.beta == pytest.approx(0.95, abs=1e-12)
        assert pred.beta + pred.power == 1.0

    def test_centering_case(self):
        pair, sigma1, target = centered_case()
        rep = t1_theory(pair, 2000, 2000)
        assert rep.shift == pytest.approx(target)
        assert np.sqrt(rep.leading_sigma_sq) == pytest.approx(sigma1)
        assert predict_beta(pair, 2000, 2000, "K1").beta == pytest.approx(0.5, abs=1e-12)

    def test_invariant(self):
        pair, _, _ = centered_case(mult=1.0)
        pred = predict_beta(pair, 2000, 2000, "K1")
        assert pred.beta == pytest.approx(
            normal_cdf((pred.leading_scale * critical_value(0.05) - pred.shift) / pred.full_scale)
        )

    @given(st.floats(0.0, 50.0), st.floats(0.0, 50.0))
    def test_monotone_in_shift(self, t1, t2):
        part = equal_partition(10)
        lo, hi = sorted((t1, t2))
        b = [predict_beta(make_alternative(part, np.cos(np.arange(10)), t, 1000), 1000, 1000).beta
             for t in (lo, hi)]
        assert b[1] <= b[0] + 1e-12

    def test_k2_k3_identical(self):
        part = custom_partition([0, 0.2, 0.45, 0.75, 1])
        w = Weights(np.array([0.5, 1.0, 1.5, 2.0]))
        pair = make_alternative(part, [1, -1, 1, -1], 12.0, 800, "T2", w)
        a = predict_beta(pair, 800, 400, "K2", w)
        b = predict_beta(pair, 800, 400, "K3", w)
        assert a == b

    def test_m1_flag(self):
        part = custom_partition([0, 0.2, 0.45, 0.75, 1])
        w = Weights(np.array([0.5, 1.0, 1.5, 2.0]))
        pair = make_alternative(part, [1, -1, 1, -1], 12.0, 800, "T2", w)
        a = predict_beta(pair, 800, 800, "K2", w)
        b = predict_beta(pair, 800, 800, "K2", w, k2_shift="M1")
        assert a.beta != pytest.approx(b.beta)

    def test_gof_forms(self):
        part = equal_partition(20)
        f = project_thetas(part, 0.1 * np.where(np.arange(20) % 2, 1.0, -1.0))
        pair = AlternativePair(f, uniform_density(part))
        lit = predict_beta(pair, 2000, None, "GoF", gof_formula="classical")
        ref = predict_beta(pair, 2000, None, "GoF")
        x = critical_value(0.05)
        assert lit.beta == pytest.approx(normal_cdf(x - lit.shift / np.sqrt(40)))
        assert ref.full_scale > lit.full_scale

    def test_gof_requires_uniform_second(self):
        part = equal_partition(4)
        pair = make_alternative(part, [1, -1, 1, -1], 5.0, 100)
        with pytest.raises(InvalidArgument):
            predict_beta(pair, 100, 100, "GoF")

    def test_centering_offset(self):
        pair, _, _ = centered_case(mult=1.0)
        a = predict_beta(pair, 2000, 2000, "K1")
        b = predict_beta(pair, 2000, 2000, "K1", centering_offset=True)
        assert b.offset == 2.0 and b.beta > a.beta


class TestCurve:
    def test_rows_and_csv(self, tmp_path):
        part = equal_partition(6)
        pairs = [(t, make_alternative(part, [1, -1] * 3, t, 500)) for t in (0.0, 5.0, 20.0)]
        rows = power_curve(pairs, 500, 500, ("K1", "K3"))
        assert len(rows) == 6
        assert rows[0]["power"] == pytest.approx(0.05)
        path = tmp_path / "curve.csv"
        write_power_csv(rows, path)
        with open(path) as fh:
            got = list(csv.DictReader(fh))
        assert list(got[0]) == ["parameter", "kind", "beta", "power"]
        assert float(got[-1]["power"]) == rows[-1]["power"]
        assert "," not in got[0]["beta"]
