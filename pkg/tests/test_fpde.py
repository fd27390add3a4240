import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from shehu.errors import DivergenceError, SingularDenominator
from shehu.fpde import (
    Grid3Field,
    HeatSpec,
    TelegraphSpec,
    TransformSolution,
    binomial_series,
    heat_residual,
    heat_transform_solution,
    reconstruct,
    series_solution_heat,
    series_solution_telegraph,
    telegraph_residual,
    telegraph_transform_solution,
)

PI = math.pi
PI2 = PI * PI


class TestHeatSolution:
    def test_golden_point(self):
        """Direct arithmetic of the three-term expression at (2, 1, 1), g=1."""
        F = heat_transform_solution(HeatSpec(gamma=1.0))
        dd = PI2 - 4.0 - 1.0
        term1 = PI ** 4 / ((4.0 + PI2) * (1.0 + PI2) * dd)
        term2 = PI * 2.0 / (1.0 * 2.0 * dd)
        term3 = PI * 1.0 / (1.0 * (1.0 - 2.0) * dd)
        expect = term1 - term2 - term3
        assert_allclose(complex(F(2.0, 1.0, 1.0)).real, expect, rtol=1e-13)
        assert_allclose(expect, 0.132687, atol=5e-7)
        assert_allclose(term1, 0.132687, atol=5e-7)
        assert_allclose(-term2, -0.645143, atol=5e-7)
        assert_allclose(-term3, 0.645143, atol=5e-7)

    def test_singular_locus_unit_p(self):
        F = heat_transform_solution(HeatSpec(gamma=1.0))
        with pytest.raises(SingularDenominator):
            F(1.0, 1.0, 1.0)

    def test_singular_locus_main_denominator(self):
        F = heat_transform_solution(HeatSpec(gamma=1.0))
        with pytest.raises(SingularDenominator):
            F(1.0 + 1e-15, 1.0, 2.0 / PI2 * (1.0 + 1e-15))

    def test_gamma_range(self):
        with pytest.raises(ValueError):
            HeatSpec(gamma=1.5)

    @pytest.mark.parametrize("g", [0.3, 0.5, 0.7, 1.0])
    def test_residual_vanishes(self, g):
        spec = HeatSpec(gamma=g)
        F = heat_transform_solution(spec)
        rng = np.random.default_rng(17)
        for _ in range(20):
            p, q, s = rng.uniform(1.2, 3.0, size=3)
            if abs(p - 1.0) < 0.05:
                continue
            assert heat_residual(spec, F, (p, q, s)) <= 1e-10

    def test_perturbed_solution_fails_relation(self):
        spec = HeatSpec(gamma=0.7)
        F = heat_transform_solution(spec)
        F_bad = TransformSolution(
            evaluator=lambda p, q, s: 1.01 * F(p, q, s),
            singular_loci=F.singular_loci,
        )
        assert heat_residual(spec, F_bad, (2.0, 1.0, 1.0)) > 1e-4


class TestTelegraphSolution:
    def test_golden_point(self):
        """Terms at (2, 2, 1) with g=1, a=1/2, b=1: D = -5."""
        spec = TelegraphSpec(gamma=1.0, alpha=0.5, beta=1.0)
        F = telegraph_transform_solution(spec)
        dd = 2.0 + 1.0 - 4.0 - 4.0
        assert dd == -5.0
        term1 = 2.0 / (2.0 * 3.0 * dd)
        term2 = PI * 2.0 / (1.0 * 3.0 * dd)
        term3 = PI * 2.0 / (1.0 * 1.0 * dd)
        expect = term1 - term2 - term3
        assert_allclose(complex(F(2.0, 2.0, 1.0)).real, expect, rtol=1e-13)
        assert_allclose(term1, -0.066667, atol=5e-7)
        assert_allclose(-term2, 0.418879, atol=5e-7)
        assert_allclose(expect, 1.608849, atol=5e-7)

    def test_singular_loci(self):
        spec = TelegraphSpec(gamma=1.0, alpha=0.5, beta=1.0)
        F = telegraph_transform_solution(spec)
        with pytest.raises(SingularDenominator):
            F(1.0, 2.0, 1.0)  # p^g = 1
        with pytest.raises(SingularDenominator):
            F(1.0 + 1e-15, 1.0, 0.5)  # (1+2a) s + b^2 = p^2 + q^2

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            TelegraphSpec(gamma=0.5, alpha=0.0, beta=1.0)
        with pytest.raises(ValueError):
            TelegraphSpec(gamma=0.5, alpha=0.5, beta=-1.0)

    @pytest.mark.parametrize("g", [0.5, 0.9, 1.0])
    @pytest.mark.parametrize("ab", [(0.5, 1.0), (1.0, 2.0)])
    def test_residual_vanishes_printed_mode(self, g, ab):
        spec = TelegraphSpec(gamma=g, alpha=ab[0], beta=ab[1])
        F = telegraph_transform_solution(spec)
        rng = np.random.default_rng(23)
        for _ in range(20):
            p, q, s = rng.uniform(1.2, 3.0, size=3)
            if abs(p - 1.0) < 0.05:
                continue
            assert telegraph_residual(spec, F, (p, q, s)) <= 1e-10

    def test_perturbed_solution_fails_relation(self):
        spec = TelegraphSpec(gamma=0.9, alpha=0.5, beta=1.0)
        F = telegraph_transform_solution(spec)
        F_bad = TransformSolution(
            evaluator=lambda p, q, s: 1.01 * F(p, q, s),
            singular_loci=F.singular_loci,
        )
        assert telegraph_residual(spec, F_bad, (2.0, 2.0, 1.0)) > 1e-4

    def test_strict_mode_differs_from_printed(self):
        """The uncollapsed time operator does not vanish on the printed F.

        Reported for information: the printed relation collapses
        s^(2g) + 2a s^g into (1+2a) s^g, which only coincides at s = 1.
        """
        spec = TelegraphSpec(gamma=0.5, alpha=0.5, beta=1.0)
        F = telegraph_transform_solution(spec)
        pt = (2.0, 2.0, 2.0)
        printed = telegraph_residual(spec, F, pt, mode="printed")
        strict = telegraph_residual(spec, F, pt, mode="strict")
        assert printed <= 1e-12
        assert strict > 1e-3


class TestBinomialSeries:
    def test_geometric(self):
        assert_allclose(binomial_series(1.0, 0.5), 1.0 / 1.5, rtol=1e-12)

    def test_order_two(self):
        assert_allclose(binomial_series(2.0, 0.1), 1.0 / 1.21, rtol=1e-12)

    @pytest.mark.parametrize("order, t", [(0.5, 0.3), (1.7, -0.4), (3.0, 0.9)])
    def test_matches_power(self, order, t):
        assert_allclose(binomial_series(order, t), (1.0 + t) ** -order, rtol=1e-10)

    def test_divergence(self):
        with pytest.raises(DivergenceError):
            binomial_series(1.0, 1.0)
        with pytest.raises(DivergenceError):
            binomial_series(2.0, -1.3)


class TestGuardedSeries:
    def test_heat_fully_guarded(self):
        """Every printed term carries gamma-pole factors; value stays finite."""
        res = series_solution_heat((0.5, 0.5, 0.5), truncation=6, gamma=0.7)
        assert res.guarded_count > 0
        assert res.terms_used == 0
        assert math.isfinite(res.value)
        assert res.value == 0.0

    def test_telegraph_fully_guarded(self):
        res = series_solution_telegraph(
            (0.4, 0.6, 0.8), truncation=4, gamma=0.5, alpha=0.5, beta=1.0
        )
        assert res.guarded_count > 0
        assert res.terms_used == 0
        assert math.isfinite(res.value)

    def test_deterministic(self):
        a = series_solution_heat((0.5, 0.5, 0.5), truncation=5, gamma=0.6)
        b = series_solution_heat((0.5, 0.5, 0.5), truncation=5, gamma=0.6)
        assert (a.value, a.guarded_count, a.terms_used) == (
            b.value, b.guarded_count, b.terms_used,
        )

    def test_truncation_growth_keeps_classification(self):
        """Doubling truncation never un-guards an existing term."""
        small = series_solution_heat((0.5, 0.5, 0.5), truncation=4, gamma=0.6)
        large = series_solution_heat((0.5, 0.5, 0.5), truncation=8, gamma=0.6)
        assert small.terms_used == large.terms_used == 0
        assert large.guarded_count > small.guarded_count

    def test_override_single_term(self):
        """A pole-free coefficient override turns exactly one term on."""

        def override(group, idx):
            if group == "heat3" and idx == (1, 2):
                return 2.5
            return None

        x, y, t = 0.5, 0.7, 0.9
        g = 0.5
        res = series_solution_heat((x, y, t), truncation=4, gamma=g,
                                   coefficient_override=override)
        # group-3 monomial: x^(2m-2u-g) y^(-2m-2) t^(g u + g - 1), u=1, m=2
        expect = 2.5 * x ** (4 - 2 - g) * y ** -6.0 * t ** (2 * g - 1.0)
        assert res.terms_used == 1
        assert_allclose(res.value, expect, rtol=1e-14)


class TestReconstructAndGrid:
    def test_constant_pair(self):
        F = TransformSolution(lambda p, q, s: 1.0 / (p * q * s), ())
        fld = reconstruct(F, (0.5, 1.0), (0.5, 1.0), (0.5, 1.0))
        assert fld.nonfinite_count == 0
        assert np.max(np.abs(fld.values - 1.0)) <= 1e-6

    def test_separable_pair(self):
        F = TransformSolution(
            lambda p, q, s: 1.0 / ((p + 1.0) * (q + 1.0) * (s + 1.0)), ()
        )
        xs = (0.4, 0.9)
        fld = reconstruct(F, xs, xs, xs)
        for i, x in enumerate(xs):
            for j, y in enumerate(xs):
                for k, t in enumerate(xs):
                    assert abs(fld.at(i, j, k) - math.exp(-(x + y + t))) <= 1e-6

    def test_positive_grid_required(self):
        F = TransformSolution(lambda p, q, s: 1.0 / (p * q * s), ())
        with pytest.raises(ValueError):
            reconstruct(F, (0.0, 1.0), (0.5,), (0.5,))

    def test_grid_serialization(self):
        fld = Grid3Field((0.5,), (1.0,), (1.5,), np.array([[[2.0]]]))
        lines = fld.to_table_lines()
        assert lines[0] == "x,y,t,f"
        assert lines[1] == "0.5,1,1.5,2"
        assert len(lines) == 2

    def test_grid_shape_validation(self):
        with pytest.raises(ValueError):
            Grid3Field((0.5,), (1.0,), (1.5,), np.zeros((2, 1, 1)))
        with pytest.raises(ValueError):
            Grid3Field((1.0, 0.5), (1.0,), (1.5,), np.zeros((2, 1, 1)))
