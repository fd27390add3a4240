"""Catalog of certified test fields shared by suites, tests, and the CLI.

Each entry bundles a SmoothFn (value plus derivative chains), an
exponential-order certificate for transform truncation, and a
numpy-broadcastable evaluator for batch consumers.  Atoms depend on a
single axis; products and sums compose them with the usual calculus rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .forward import ExpOrderFn
from .fracops import AXES, SmoothFn
from .specfun import MLParams, mittag_leffler

__all__ = [
    "FieldFn",
    "const_fn",
    "axis_power",
    "axis_exp",
    "axis_sin",
    "axis_cos",
    "catalog",
    "get_field",
    "field_names",
    "ml_kernel_field",
    "power_field",
]


@dataclass(frozen=True)
class FieldFn:
    """A named SmoothFn with an exponential-order certificate."""

    name: str
    smooth: SmoothFn
    bound: float
    rates: tuple[float, float, float]
    vec: Callable | None = None

    def __call__(self, x: float, y: float, t: float) -> float:
        return self.smooth(x, y, t)

    def exp_order(self, bound_factor: float = 1.0) -> ExpOrderFn:
        return ExpOrderFn(
            fn=self.smooth.fn,
            bound=self.bound * bound_factor,
            rates=self.rates,
            vec=self.vec,
        )

    def trace_exp_order(self, smooth: SmoothFn, bound_factor: float = 4.0) -> ExpOrderFn:
        """Certificate reused for derivative traces of this field.

        Derivatives of the catalog atoms obey the same exponential order
        with a moderately larger constant; the factor only lengthens the
        truncated range.
        """
        return ExpOrderFn(fn=smooth.fn, bound=self.bound * bound_factor, rates=self.rates)


# -- single-axis atoms -------------------------------------------------------


_ZERO = SmoothFn(lambda x, y, t: 0.0)
_ZERO._resolver = lambda axis: _ZERO


def const_fn(c: float) -> SmoothFn:
    if c == 0.0:
        return _ZERO
    return SmoothFn(lambda x, y, t: c, lambda axis: _ZERO)


def _coord(axis: str):
    i = AXES.index(axis)
    return lambda x, y, t: (x, y, t)[i]


def axis_power(axis: str, nu: float) -> SmoothFn:
    """coord^nu along one axis; derivative chain nu * coord^(nu-1)."""
    coord = _coord(axis)
    if nu == 0.0:
        return const_fn(1.0)

    def fn(x, y, t):
        u = coord(x, y, t)
        if u == 0.0 and nu < 0.0:
            return math.inf
        return u ** nu

    def resolver(ax: str):
        if ax != axis:
            return const_fn(0.0)
        return axis_power(axis, nu - 1.0) * nu

    return SmoothFn(fn, resolver)


def axis_exp(axis: str, lam: float) -> SmoothFn:
    """exp(lam * coord) along one axis; closed under differentiation."""
    coord = _coord(axis)
    out = SmoothFn(lambda x, y, t: math.exp(lam * coord(x, y, t)))
    out._resolver = lambda ax: (out * lam) if ax == axis else const_fn(0.0)
    return out


def axis_sin(axis: str, omega: float) -> SmoothFn:
    coord = _coord(axis)
    out = SmoothFn(lambda x, y, t: math.sin(omega * coord(x, y, t)))
    out._resolver = lambda ax: (axis_cos(axis, omega) * omega) if ax == axis else const_fn(0.0)
    return out


def axis_cos(axis: str, omega: float) -> SmoothFn:
    coord = _coord(axis)
    out = SmoothFn(lambda x, y, t: math.cos(omega * coord(x, y, t)))
    out._resolver = lambda ax: (axis_sin(axis, omega) * -omega) if ax == axis else const_fn(0.0)
    return out


# -- catalog -----------------------------------------------------------------


def _exp3(cx: float, cy: float, ct: float) -> SmoothFn:
    return axis_exp("x", cx) * axis_exp("y", cy) * axis_exp("t", ct)


def _catalog() -> dict[str, FieldFn]:
    entries = [
        FieldFn(
            "const", const_fn(1.0), 1.0, (0.0, 0.0, 0.0),
            vec=lambda x, y, t: np.ones(np.broadcast(x, y, t).shape),
        ),
        FieldFn(
            "t", axis_power("t", 1.0), 1.0, (0.0, 0.0, 0.5),
            vec=lambda x, y, t: t * np.ones(np.broadcast(x, y, t).shape),
        ),
        FieldFn(
            "t-squared", axis_power("t", 2.0), 2.5, (0.0, 0.0, 0.5),
            vec=lambda x, y, t: t**2 * np.ones(np.broadcast(x, y, t).shape),
        ),
        FieldFn(
            "sqrt-t", axis_power("t", 0.5), 1.0, (0.0, 0.0, 0.5),
            vec=lambda x, y, t: np.sqrt(t) * np.ones(np.broadcast(x, y, t).shape),
        ),
        FieldFn(
            "xt", axis_power("x", 1.0) * axis_power("t", 1.0), 1.0, (0.5, 0.0, 0.5),
            vec=lambda x, y, t: x * t * np.ones(np.broadcast(x, y, t).shape),
        ),
        FieldFn(
            "xyt",
            axis_power("x", 1.0) * axis_power("y", 1.0) * axis_power("t", 1.0),
            1.0, (0.5, 0.5, 0.5),
            vec=lambda x, y, t: x * y * t * np.ones(np.broadcast(x, y, t).shape),
        ),
        FieldFn(
            "exp-xyt", _exp3(-1.0, -1.0, -1.0), 1.0, (-1.0, -1.0, -1.0),
            vec=lambda x, y, t: np.exp(-(x + y + t)) * np.ones(np.broadcast(x, y, t).shape),
        ),
        FieldFn(
            "exp-2xyt", _exp3(-2.0, -2.0, -2.0), 1.0, (-2.0, -2.0, -2.0),
            vec=lambda x, y, t: np.exp(-2.0 * (x + y + t)) * np.ones(np.broadcast(x, y, t).shape),
        ),
        FieldFn(
            "exp-y", axis_exp("y", -1.0), 1.0, (0.0, -1.0, 0.0),
            vec=lambda x, y, t: np.exp(-y) * np.ones(np.broadcast(x, y, t).shape),
        ),
        FieldFn(
            "exp-t", axis_exp("t", -1.0), 1.0, (0.0, 0.0, -1.0),
            vec=lambda x, y, t: np.exp(-t) * np.ones(np.broadcast(x, y, t).shape),
        ),
        FieldFn(
            "sine-product", axis_sin("x", math.pi) * axis_sin("y", math.pi),
            1.0, (0.0, 0.0, 0.0),
            vec=lambda x, y, t: np.sin(np.pi * x) * np.sin(np.pi * y)
            * np.ones(np.broadcast(x, y, t).shape),
        ),
        FieldFn(
            "sin-pit", axis_sin("t", math.pi), 1.0, (0.0, 0.0, 0.0),
            vec=lambda x, y, t: np.sin(np.pi * t) * np.ones(np.broadcast(x, y, t).shape),
        ),
        FieldFn(
            "sinpix-expt", axis_sin("x", math.pi) * axis_exp("t", -1.0),
            1.0, (0.0, 0.0, -1.0),
            vec=lambda x, y, t: np.sin(np.pi * x) * np.exp(-t)
            * np.ones(np.broadcast(x, y, t).shape),
        ),
    ]
    return {e.name: e for e in entries}


_CATALOG = _catalog()

_ALIASES = {
    "one": "const",
    "product-exponential": "exp-xyt",
}


def catalog() -> dict[str, FieldFn]:
    return dict(_CATALOG)


def field_names() -> tuple[str, ...]:
    return tuple(sorted(_CATALOG))


def get_field(name: str) -> FieldFn:
    key = _ALIASES.get(name, name)
    try:
        return _CATALOG[key]
    except KeyError:
        raise KeyError(
            f"unknown field {name!r}; known: {', '.join(field_names())}"
        ) from None


def power_field(nu: float, axis: str = "t") -> FieldFn:
    """coord^nu test field with a generic certificate (nu > -1)."""
    bound = max(2.0, math.gamma(nu + 1.0) * 4.0) if nu < 20 else math.inf
    return FieldFn(
        f"power-{nu:g}",
        axis_power(axis, nu),
        bound,
        tuple(0.5 if ax == axis else 0.0 for ax in AXES),
    )


def ml_kernel_field(gamma: float, beta: float, c: float, axis: str = "y") -> FieldFn:
    """u^(beta-1) E_{gamma,beta}(c u^gamma) along ``axis`` (values only).

    For c > 0 the kernel grows like exp(c^(1/gamma) u); the certificate
    rate reflects that, so forward quadrature demands ratio > c^(1/gamma).
    """
    p = MLParams(gamma, beta)
    coord = _coord(axis)

    def fn(x, y, t):
        u = coord(x, y, t)
        if u == 0.0:
            if beta == 1.0:
                return 1.0 / math.gamma(beta)
            return 0.0 if beta > 1.0 else math.inf
        return u ** (beta - 1.0) * mittag_leffler(p, c * u ** gamma)

    rate = c ** (1.0 / gamma) if c > 0.0 else 0.0
    bound = 4.0 * (1.0 + 1.0 / gamma) * (1.0 + abs(c))
    return FieldFn(
        f"ml-kernel-{gamma:g}-{beta:g}-{c:g}",
        SmoothFn(fn),
        bound,
        tuple(rate if ax == axis else 0.0 for ax in AXES),
    )
