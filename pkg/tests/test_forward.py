import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from shehu.errors import DivergenceError, DomainError
from shehu.forward import (
    ExpOrderFn,
    QuadratureConfig,
    RatioPoint,
    analytic_transform,
    shehu_1d,
    shehu_2d,
    shehu_3d,
)
from shehu.funclib import get_field, ml_kernel_field, power_field

UNIT = RatioPoint.from_ratios(1.0, 1.0, 1.0)
PI = math.pi


class TestRatioPoint:
    def test_ratio_only_dependence(self):
        a = RatioPoint(t=(2.0, 1.0))
        b = RatioPoint(t=(4.0, 2.0))
        assert a.ratio("t") == b.ratio("t") == 2.0

    def test_zero_divisor_rejected(self):
        with pytest.raises(ValueError):
            RatioPoint(x=(1.0, 0.0))

    def test_from_ratios(self):
        v = RatioPoint.from_ratios(1.5, 2.5, 3.5)
        assert v.ratios() == (1.5, 2.5, 3.5)


class TestQuadratureConfig:
    def test_defaults(self):
        cfg = QuadratureConfig()
        assert cfg.rel_tol == 1e-10
        assert cfg.abs_tol == 1e-14

    def test_validation(self):
        with pytest.raises(ValueError):
            QuadratureConfig(rel_tol=-1.0)
        with pytest.raises(ValueError):
            QuadratureConfig(max_subdivisions=0)


class TestCertificate:
    def test_certificate_holds_on_catalog(self):
        rng = np.random.default_rng(5)
        pts = [tuple(rng.uniform(0.0, 4.0, size=3)) for _ in range(50)]
        for name in ("const", "t", "xt", "xyt", "exp-xyt", "exp-y",
                     "sine-product", "sinpix-expt", "t-squared", "sqrt-t"):
            assert get_field(name).exp_order().certificate_holds(pts), name


class TestSingleAxis:
    def test_constant(self):
        f = get_field("const").exp_order()
        got = shehu_1d(f, "t", RatioPoint(t=(2.0, 1.0)))
        assert_allclose(got, 0.5, rtol=1e-10)

    def test_linear(self):
        got = shehu_1d(get_field("t").exp_order(), "t", UNIT)
        assert_allclose(got, 1.0, rtol=1e-10)

    def test_sine(self):
        got = shehu_1d(get_field("sin-pit").exp_order(), "t", UNIT)
        assert_allclose(got, PI / (1.0 + PI * PI), rtol=1e-9)

    def test_divergence_when_ratio_below_rate(self):
        with pytest.raises(DivergenceError):
            shehu_1d(get_field("t").exp_order(), "t", RatioPoint(t=(0.4, 1.0)))

    @pytest.mark.parametrize("lam", [0.5, 2.0, 10.0])
    def test_scale_invariance(self, lam):
        f = get_field("exp-t").exp_order()
        base = shehu_1d(f, "t", RatioPoint(t=(1.7, 1.0)))
        scaled = shehu_1d(f, "t", RatioPoint(t=(1.7 * lam, lam)))
        assert_allclose(scaled, base, rtol=1e-10)

    def test_linearity(self):
        f = get_field("exp-t").exp_order()
        g = get_field("sin-pit").exp_order()
        combo = ExpOrderFn(
            fn=lambda x, y, t: 2.0 * f.fn(x, y, t) - 3.0 * g.fn(x, y, t),
            bound=5.0,
            rates=(0.0, 0.0, 0.0),
        )
        vars = RatioPoint(t=(1.3, 1.0))
        lhs = shehu_1d(combo, "t", vars)
        rhs = 2.0 * shehu_1d(f, "t", vars) - 3.0 * shehu_1d(g, "t", vars)
        assert_allclose(lhs, rhs, rtol=1e-10)


class TestMultiAxis:
    def test_2d_constant(self):
        got = shehu_2d(get_field("const").exp_order(), ("x", "y"), UNIT)
        assert_allclose(got, 1.0, rtol=1e-9)

    def test_2d_sine_product(self):
        """Initial-plane transform: pi^2 / ((p^2+pi^2)(q^2+pi^2)) at p=q=1."""
        got = shehu_2d(get_field("sine-product").exp_order(), ("x", "y"), UNIT)
        assert_allclose(got, PI * PI / (1.0 + PI * PI) ** 2, rtol=1e-9)

    def test_2d_exp_y(self):
        """Initial-plane transform 1/(p(q+1)) = 0.5 at unit ratios."""
        got = shehu_2d(get_field("exp-y").exp_order(), ("x", "y"), UNIT)
        assert_allclose(got, 0.5, rtol=1e-9)

    def test_3d_product_exponential(self):
        got = shehu_3d(get_field("exp-xyt").exp_order(), UNIT)
        assert_allclose(got, 0.125, rtol=1e-9)

    def test_3d_ratio_only(self):
        got = shehu_3d(
            get_field("exp-xyt").exp_order(), RatioPoint(x=(4.0, 2.0))
        )
        assert_allclose(got, (1.0 / 3.0) * 0.25, rtol=1e-9)

    def test_3d_xyt(self):
        got = shehu_3d(get_field("xyt").exp_order(), UNIT)
        assert_allclose(got, 1.0, rtol=1e-8)

    def test_axis_order_independence(self):
        """All 6 nesting orders agree to 1e-9."""
        import itertools

        f = get_field("exp-xyt").exp_order()
        vars = RatioPoint.from_ratios(1.3, 0.9, 1.1)
        vals = [
            shehu_3d(f, vars, axis_order=order)
            for order in itertools.permutations(("x", "y", "t"))
        ]
        assert max(vals) - min(vals) <= 1e-9 * max(abs(v) for v in vals)


class TestAnalyticTransform:
    @pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.5])
    def test_power_matches_quadrature(self, nu):
        ref = analytic_transform("power", 1.0, nu=nu)
        got = shehu_1d(power_field(nu).exp_order(), "t", UNIT)
        assert_allclose(got, ref, rtol=1e-8)

    def test_power_value(self):
        assert_allclose(
            analytic_transform("power", 1.0, nu=0.5), math.gamma(1.5), rtol=1e-13
        )

    def test_power_domain(self):
        with pytest.raises(DomainError):
            analytic_transform("power", 1.0, nu=-1.0)

    def test_sin_cos_exp(self):
        assert_allclose(analytic_transform("sin", 1.0, omega=PI),
                        PI / (1 + PI * PI), rtol=1e-13)
        assert_allclose(analytic_transform("cos", 2.0, omega=1.0),
                        2.0 / 5.0, rtol=1e-13)
        assert_allclose(analytic_transform("exp", 2.0, rate=-1.0),
                        1.0 / 3.0, rtol=1e-13)

    def test_ml_kernel_classical_case(self):
        """Order (1, 1) with c = -1 collapses to the exponential pair."""
        got = analytic_transform("ml_kernel", 1.0, gamma=1.0, beta=1.0, c=-1.0)
        assert_allclose(got, 0.5, rtol=1e-13)

    def test_ml_kernel_constraint(self):
        with pytest.raises(DomainError):
            analytic_transform("ml_kernel", 1.0, gamma=0.5, beta=1.0, c=2.0)
        with pytest.raises(DomainError):  # vanishing denominator
            analytic_transform("ml_kernel", 1.0, gamma=0.5, beta=1.0, c=1.0)

    @pytest.mark.parametrize(
        "g, b, c", [(0.5, 1.0, -1.0), (0.8, 1.2, -0.5), (1.0, 1.0, -1.0)]
    )
    def test_ml_kernel_pair_against_quadrature(self, g, b, c):
        """Transform of u^(b-1) E_{g,b}(c u^g) equals r^(g-b)/(r^g - c)."""
        for ratio in (1.0, 1.6):
            fld = ml_kernel_field(g, b, c, axis="y")
            got = shehu_1d(fld.exp_order(), "y", RatioPoint.from_ratios(q=ratio))
            ref = analytic_transform("ml_kernel", ratio, gamma=g, beta=b, c=c)
            assert_allclose(got, ref, rtol=1e-6)
