"""
Classical orthogonal polynomials for real, possibly negative, parameters.

Generalized Laguerre ``L_n^(alpha)`` and Jacobi ``P_n^(alpha, beta)`` are
evaluated from their explicit finite series.  The generalized binomial
coefficients are built as running products, so any real parameter is
accepted.  Three-term recurrences are avoided on purpose: the parameter
combinations used by the Poschl-Teller family (e.g. beta = -A - B - 1/2)
can make recurrence denominators vanish.

Degree ``n = -1`` denotes the zero polynomial.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, InvalidArgumentError

__all__ = [
    "gen_binom",
    "laguerre",
    "laguerre_deriv",
    "jacobi",
    "jacobi_deriv",
    "log_gamma",
]


def _check(n, *params):
    if int(n) != n or n < -1:
        raise InvalidArgumentError(f"polynomial degree must be an integer >= -1, got {n!r}")
    for p in params:
        if not np.all(np.isfinite(p)):
            raise InvalidArgumentError(f"non-finite argument {p!r}")


def _like(z, value):
    """Broadcast a constant to the shape of ``z`` (scalar in, float out)."""
    if np.ndim(z) == 0:
        return float(value)
    return np.full(np.shape(z), float(value))


def gen_binom(x: float, k: int) -> float:
    """Generalized binomial C(x, k) = x(x-1)...(x-k+1)/k! for real x."""
    out = 1.0
    for j in range(k):
        out *= (x - j) / (j + 1)
    return out


def laguerre(n: int, alpha: float, z):
    """Generalized Laguerre polynomial L_n^(alpha)(z).

    Series: sum_{k=0}^{n} (-1)^k C(n+alpha, n-k) z^k / k!.
    """
    _check(n, alpha, z)
    n = int(n)
    if n == -1:
        return _like(z, 0.0)
    coeffs = [(-1) ** k * gen_binom(n + alpha, n - k) / math.factorial(k) for k in range(n + 1)]
    z = np.asarray(z, dtype=float) if np.ndim(z) else float(z)
    out = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        out = out * z + c
    return _like(z, out) if n == 0 else out


def laguerre_deriv(n: int, alpha: float, z, order: int = 1):
    """z-derivative of L_n^(alpha): d^k/dz^k L_n^(a) = (-1)^k L_{n-k}^(a+k)."""
    _check(n, alpha, z)
    if order < 0:
        raise InvalidArgumentError("derivative order must be >= 0")
    if n - order < -1:
        return _like(z, 0.0)
    return (-1) ** order * laguerre(n - order, alpha + order, z)


def jacobi(n: int, alpha: float, beta: float, z):
    """Jacobi polynomial P_n^(alpha, beta)(z).

    Series: sum_k C(n+alpha, n-k) C(n+beta, k) ((z-1)/2)^k ((z+1)/2)^(n-k).
    """
    _check(n, alpha, beta, z)
    n = int(n)
    if n == -1:
        return _like(z, 0.0)
    if n == 0:
        return _like(z, 1.0)
    z = np.asarray(z, dtype=float) if np.ndim(z) else float(z)
    u = (z - 1.0) / 2.0
    v = (z + 1.0) / 2.0
    out = 0.0
    for k in range(n + 1):
        c = gen_binom(n + alpha, n - k) * gen_binom(n + beta, k)
        if c != 0.0:
            out = out + c * u**k * v ** (n - k)
    return out


def jacobi_deriv(n: int, alpha: float, beta: float, z, order: int = 1):
    """z-derivative of P_n^(alpha, beta).

    d^k/dz^k P_n^(a,b) = prod_{j=1..k} (n+a+b+j)/2 * P_{n-k}^(a+k, b+k); zero for n < k.
    """
    _check(n, alpha, beta, z)
    if order < 0:
        raise InvalidArgumentError("derivative order must be >= 0")
    if n < order:
        return _like(z, 0.0)
    scale = 1.0
    for j in range(1, order + 1):
        scale *= (n + alpha + beta + j) / 2.0
    return scale * jacobi(n - order, alpha + order, beta + order, z)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not math.isfinite(x):
        raise InvalidArgumentError(f"non-finite argument {x!r}")
    if x <= 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)
