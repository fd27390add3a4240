import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from shehu.errors import StabilityError
from shehu.fd_oracle import FDGrid, classical_telegraph_solve, l1_heat_solve
from shehu.specfun import MLParams, mittag_leffler


def sin_mode(x, y):
    return math.sin(math.pi * x) * math.sin(math.pi * y)


def zero(x, y):
    return 0.0


class TestFDGrid:
    def test_spacing(self):
        grid = FDGrid(nx=4, ny=4, nt=8, dt=0.125)
        assert grid.dx == 0.2
        assert grid.xs == pytest.approx((0.2, 0.4, 0.6, 0.8))
        assert grid.ts[-1] == pytest.approx(1.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            FDGrid(nx=1, ny=4, nt=8, dt=0.1)
        with pytest.raises(ValueError):
            FDGrid(nx=4, ny=4, nt=8, dt=0.0)


class TestHeatSolve:
    def test_classical_order_matches_separable_solution(self):
        """g=1: exact solution exp(-2t) sin(pi x) sin(pi y)."""
        grid = FDGrid(nx=31, ny=31, nt=64, dt=0.25 / 64)
        fld = l1_heat_solve(1.0, sin_mode, grid)
        c = grid.xs.index(0.5)
        got = fld.at(c, c, grid.nt - 1)
        assert_allclose(got, math.exp(-0.5), rtol=0.02)

    def test_half_order_matches_ml_solution(self):
        """g=1/2: separable solution E_{1/2}(-2 t^(1/2)) sin sin."""
        grid = FDGrid(nx=31, ny=31, nt=64, dt=0.25 / 64)
        fld = l1_heat_solve(0.5, sin_mode, grid)
        c = grid.xs.index(0.5)
        ref = mittag_leffler(MLParams(0.5, 1.0), -2.0 * math.sqrt(0.25))
        assert_allclose(fld.at(c, c, grid.nt - 1), ref, rtol=0.02)

    def test_zero_initial_condition(self):
        grid = FDGrid(nx=7, ny=7, nt=6, dt=0.01)
        fld = l1_heat_solve(0.7, zero, grid)
        assert np.max(np.abs(fld.values)) == 0.0

    @pytest.mark.parametrize("g", [0.4, 0.7, 1.0])
    def test_discrete_maximum_principle(self, g):
        """Values stay within the initial range [0, 1] at every step."""
        grid = FDGrid(nx=15, ny=15, nt=24, dt=1.0 / 48)
        fld = l1_heat_solve(g, sin_mode, grid)
        assert fld.values.min() >= -1e-10
        assert fld.values.max() <= 1.0 + 1e-10

    def test_time_refinement_order(self):
        """Halving dt shrinks the g=1 error by >= 1.8x.

        The reference is the space-semidiscrete solution exp(lam_h t) with
        the discrete Laplacian eigenvalue lam_h, so only the time error
        enters the ratio.
        """
        nx = 15
        dx = 1.0 / (nx + 1)
        # two spatial axes, each contributing (2/dx^2)(cos(pi dx) - 1)
        lam_h = 4.0 * (math.cos(math.pi * dx) - 1.0) / (dx * dx) / (math.pi ** 2)
        errs = []
        for nt in (16, 32):
            grid = FDGrid(nx=nx, ny=nx, nt=nt, dt=0.25 / nt)
            fld = l1_heat_solve(1.0, sin_mode, grid)
            c = grid.xs.index(0.5)
            ref = math.exp(lam_h * 0.25)
            errs.append(abs(fld.at(c, c, nt - 1) - ref))
        assert errs[0] / errs[1] >= 1.8

    def test_order_domain(self):
        grid = FDGrid(nx=4, ny=4, nt=4, dt=0.01)
        with pytest.raises(ValueError):
            l1_heat_solve(1.5, sin_mode, grid)


class TestTelegraphSolve:
    def test_zero_data(self):
        grid = FDGrid(nx=7, ny=7, nt=10, dt=0.01)
        fld = classical_telegraph_solve(0.5, 1.0, zero, zero, grid)
        assert np.max(np.abs(fld.values)) == 0.0

    def test_standing_wave_mode(self):
        """a=b=0 reduces to the wave equation: center follows cos(sqrt2 pi t)."""
        nx = 63
        grid = FDGrid(nx=nx, ny=nx, nt=90, dt=0.5 / 90)
        fld = classical_telegraph_solve(0.0, 0.0, sin_mode, zero, grid)
        c = grid.xs.index(0.5)
        for k in (29, 59, 89):
            t = grid.ts[k]
            ref = math.cos(math.sqrt(2.0) * math.pi * t)
            assert abs(fld.at(c, c, k) - ref) <= 0.02 * max(abs(ref), 1.0)

    def test_stability_guard(self):
        with pytest.raises(StabilityError):
            classical_telegraph_solve(
                0.0, 0.0, sin_mode, zero, FDGrid(nx=31, ny=31, nt=4, dt=0.25)
            )

    def test_damped_energy_decay(self):
        """a=1, b=0: discrete energy (kinetic + gradient) never increases."""
        grid = FDGrid(nx=31, ny=31, nt=60, dt=0.3 / 60)
        fld = classical_telegraph_solve(1.0, 0.0, sin_mode, zero, grid)
        vals = fld.values
        h = grid.dx
        energies = []
        for k in range(1, grid.nt):
            ft = (vals[:, :, k] - vals[:, :, k - 1]) / grid.dt
            gx, gy = np.gradient(vals[:, :, k], h, h)
            energies.append(0.5 * np.sum(ft ** 2 + gx ** 2 + gy ** 2) * h * h)
        assert all(b <= a + 1e-10 for a, b in zip(energies, energies[1:]))
