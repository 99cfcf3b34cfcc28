"""
X_m exceptional Laguerre and Jacobi polynomials.

The exceptional polynomials are linear combinations of products of classical
ones, so their z-derivatives follow from the Leibniz rule applied to the
classical derivative formulas in :mod:`direop.specialfn`.

Conventions: degree -1 classical polynomials vanish identically, which
extends both displays down to n = 0.  With m = 0 the two families reduce to
L_n^(alpha) and P_n^(alpha, beta) with constant factor exactly 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateParameterError, InvalidArgumentError
from .specialfn import jacobi, jacobi_deriv, laguerre_deriv

__all__ = [
    "XmLaguerreSpec",
    "XmJacobiSpec",
    "xm_laguerre",
    "xm_laguerre_numerator",
    "xm_laguerre_denominator",
    "xm_jacobi",
    "xm_jacobi_numerator",
    "xm_jacobi_denominator",
    "xm_derivative",
    "denominator_nonzero_scan",
    "SCAN_NODES",
    "SCAN_THRESHOLD",
]

SCAN_NODES = 4096
SCAN_THRESHOLD = 1e-12


@dataclass(frozen=True)
class XmLaguerreSpec:
    m: int
    alpha: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise InvalidArgumentError(f"codimension m must be a non-negative integer, got {self.m!r}")


@dataclass(frozen=True)
class XmJacobiSpec:
    m: int
    alpha: float
    beta: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise InvalidArgumentError(f"codimension m must be a non-negative integer, got {self.m!r}")


# -- derivative bookkeeping -------------------------------------------------

def _coerce(z):
    return np.asarray(z, dtype=float) if np.ndim(z) else float(z)


def _leibniz(f: Sequence, g: Sequence, order: int) -> list:
    """Derivatives 0..order of f*g given derivative lists of f and g."""
    return [sum(comb(k, j) * f[j] * g[k - j] for j in range(k + 1)) for k in range(order + 1)]


def _reflected_laguerre(n, alpha, z, order):
    z = _coerce(z)
    # d^j/dz^j L_n^(a)(-z) = (-1)^j L_n^(a)(j)(-z)
    return [(-1) ** j * laguerre_deriv(n, alpha, -z, order=j) for j in range(order + 1)]


def _laguerre(n, alpha, z, order):
    return [laguerre_deriv(n, alpha, z, order=j) for j in range(order + 1)]


def _jacobi(n, a, b, z, order):
    return [jacobi_deriv(n, a, b, z, order=j) for j in range(order + 1)]


def _linear(z, order):
    """(z - 1) and its derivatives."""
    d = [z - 1.0, np.ones_like(z) if np.ndim(z) else 1.0]
    return (d + [0.0 * z] * order)[: order + 1]


# -- Laguerre ----------------------------------------------------------------

def _xm_laguerre_derivs(spec: XmLaguerreSpec, n: int, z, order: int) -> list:
    z = _coerce(z)
    a, m = spec.alpha, spec.m
    first = _leibniz(_reflected_laguerre(m, a, z, order), _laguerre(n, a - 1, z, order), order)
    second = _leibniz(_reflected_laguerre(m, a - 1, z, order), _laguerre(n - 1, a, z, order), order)
    return [p + q for p, q in zip(first, second)]


def xm_laguerre(spec: XmLaguerreSpec, n: int, z):
    """Exceptional Laguerre polynomial of degree n + m.

    ``L_m^(a)(-z) L_n^(a-1)(z) + L_m^(a-1)(-z) L_{n-1}^(a)(z)``, valid for n >= 0.
    """
    if n < 0:
        raise InvalidArgumentError(f"n must be >= 0, got {n}")
    return _xm_laguerre_derivs(spec, n, z, 0)[0]


def xm_laguerre_denominator(spec: XmLaguerreSpec, z, order: int = 0):
    """``L_m^(alpha-1)(-z)`` (or its ``order``-th z-derivative)."""
    return _reflected_laguerre(spec.m, spec.alpha - 1, z, order)[order]


def xm_laguerre_numerator(spec: XmLaguerreSpec, z, order: int = 0):
    """``L_m^(alpha)(-z)``: the n = 0 exceptional polynomial, which fixes the zero mode."""
    return _reflected_laguerre(spec.m, spec.alpha, z, order)[order]


# -- Jacobi ------------------------------------------------------------------

def _xm_jacobi_coeffs(spec: XmJacobiSpec, n: int):
    a, b, m = spec.alpha, spec.beta, spec.m
    den = a + 1 + n
    if den == 0:
        raise DegenerateParameterError(f"alpha + 1 + n = 0 (alpha={a}, n={n})")
    sign = (-1) ** m
    return sign * (1 + a + b + n) / (2 * den), sign * (1 + a - m) / den


def _xm_jacobi_derivs(spec: XmJacobiSpec, n: int, z, order: int) -> list:
    z = _coerce(z)
    a, b, m = spec.alpha, spec.beta, spec.m
    c1, c2 = _xm_jacobi_coeffs(spec, n)
    first = _leibniz(
        _linear(z, order),
        _leibniz(_jacobi(m, -a - 1, b - 1, z, order), _jacobi(n - 1, a + 2, b, z, order), order),
        order,
    )
    second = _leibniz(_jacobi(m, -a - 2, b, z, order), _jacobi(n, a + 1, b - 1, z, order), order)
    return [c1 * p + c2 * q for p, q in zip(first, second)]


def xm_jacobi(spec: XmJacobiSpec, n: int, z):
    """Exceptional Jacobi polynomial of degree n + m.

    ``(-1)^m [ (1+a+b+n)/(2(1+a+n)) (z-1) P_m^(-a-1,b-1) P_{n-1}^(a+2,b)
              + (1+a-m)/(a+1+n) P_m^(-a-2,b) P_n^(a+1,b-1) ]``
    """
    if n < 0:
        raise InvalidArgumentError(f"n must be >= 0, got {n}")
    return _xm_jacobi_derivs(spec, n, z, 0)[0]


def xm_jacobi_denominator(spec: XmJacobiSpec, z, order: int = 0):
    """``P_m^(-alpha-1, beta-1)(z)`` (or its ``order``-th derivative)."""
    return jacobi_deriv(spec.m, -spec.alpha - 1, spec.beta - 1, z, order=order)


def xm_jacobi_numerator(spec: XmJacobiSpec, z, order: int = 0):
    """``P_m^(-alpha-2, beta)(z)``, proportional to the n = 0 exceptional polynomial."""
    return jacobi_deriv(spec.m, -spec.alpha - 2, spec.beta, z, order=order)


def xm_derivative(kind: str, spec, n: int, z, order: int = 1):
    """Exact z-derivative of an exceptional polynomial.

    ``kind`` is ``"laguerre"`` or ``"jacobi"``; ``order`` may be 0, 1 or 2
    (higher orders work too, the Leibniz expansion is generic).
    """
    if n < 0:
        raise InvalidArgumentError(f"n must be >= 0, got {n}")
    if kind == "laguerre":
        return _xm_laguerre_derivs(spec, n, z, order)[order]
    if kind == "jacobi":
        return _xm_jacobi_derivs(spec, n, z, order)[order]
    raise InvalidArgumentError(f"unknown polynomial kind {kind!r}")


def denominator_nonzero_scan(func: Callable, grid, threshold: float = SCAN_THRESHOLD) -> bool:
    """True iff ``func`` keeps one sign and stays above ``threshold`` on the grid nodes.

    ``grid`` is anything exposing ``.nodes`` or a plain array of sample points.
    """
    nodes = np.asarray(getattr(grid, "nodes", grid), dtype=float)
    vals = np.asarray(func(nodes), dtype=float) * np.ones_like(nodes)
    if not np.all(np.isfinite(vals)):
        return False
    if np.any(np.abs(vals) < threshold):
        return False
    return bool(np.all(np.sign(vals[1:]) == np.sign(vals[:-1])))
