"""
Closed-form bound states of H1 = A^dagger A.

Unnormalized eigenfunctions have the common shape

    psi_n(x) = w(x) * Q_n(z(x)) / D(z(x)),

with ``w = exp(-int phi_con)`` the conventional zero mode, ``Q_n`` the
classical (m = 0) or exceptional polynomial and ``D`` the extension
denominator (1 for m = 0).  Because ``w' = -phi_con w``, the derivatives
follow without differentiating any transcendental factor numerically.

Energies come in two conventions.  ``energy_paper`` is the closed-form
display for the family, additive constant included; ``energy`` shifts it so
the zero mode sits at exactly 0, which is what H1 built from phi^2 - phi'
actually has.  Every spec accepted by :func:`direop.potentials.validate` has
a normalizable zero mode, so the shift always applies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import FactorizationError, InconsistencyError, LevelRangeError, NumericError
from .potentials import PotentialSpec, _interior, _model, truncate_domain, validate
from .specialfn import log_gamma
from .xortho import xm_derivative

__all__ = [
    "LevelRecord",
    "SusyClass",
    "PaperNorm",
    "max_level",
    "energy",
    "energy_paper",
    "eigenfunction",
    "eigenfunction_deriv",
    "eigenfunction_deriv2",
    "norm_constant_paper",
    "norm_constant_numeric",
    "normalized_eigenfunction",
    "partner_eigenfunction",
    "partner_eigenfunction_deriv",
    "classify_susy",
    "level_record",
    "default_grid",
]


@dataclass
class LevelRecord:
    n: int
    energy_analytic: float
    energy_paper: float
    norm_paper: Optional[float] = None
    norm_numeric: Optional[float] = None
    numeric: Optional[float] = None
    abs_err: Optional[float] = None


@dataclass(frozen=True)
class SusyClass:
    broken: bool
    zero_mode_side: str  # "H1", "H2" or "none"

    def __post_init__(self):
        if (self.zero_mode_side == "none") != self.broken:
            raise ValueError("zero_mode_side must be 'none' exactly when SUSY is broken")


@dataclass(frozen=True)
class PaperNorm:
    """A closed-form normalization constant, or the reason it could not be evaluated."""

    value: Optional[float]
    reason: Optional[str] = None

    @property
    def present(self) -> bool:
        return self.value is not None


# -- levels and energies ------------------------------------------------------

def max_level(spec: PotentialSpec) -> Optional[int]:
    """Largest admissible n, or None when the family has infinitely many levels."""
    if spec.family != "pt":
        return None
    A, _ = spec.shape_params()
    return math.ceil(A) - 1


def _check_level(spec: PotentialSpec, n: int) -> None:
    if int(n) != n or n < 0:
        raise LevelRangeError(f"level index must be a non-negative integer, got {n!r}")
    top = max_level(spec)
    if top is not None and n > top:
        raise LevelRangeError(f"{spec.label}: n={n} exceeds n_max={top}")


def energy_paper(spec: PotentialSpec, n: int) -> float:
    """Closed-form energy display for the family, additive constant as printed."""
    _check_level(spec, n)
    if spec.family == "oscillator":
        w, l = spec.omega, spec.ell
        if spec.m == 1:
            return 2.0 * n * w
        return w * (2 * n + l + 1.5)
    A, B = spec.A, spec.B
    if spec.family == "scarf":
        if spec.parametric:
            return (B + n + 0.5) ** 2
        return (A + n) ** 2 - A**2
    if spec.parametric:
        return -((B - n - 0.5) ** 2)
    return A**2 - (A - n) ** 2


def energy(spec: PotentialSpec, n: int) -> float:
    """epsilon^2 in the factorization convention (zero mode at 0)."""
    return energy_paper(spec, n) - energy_paper(spec, 0)


def level_record(spec: PotentialSpec, n: int, grid=None) -> LevelRecord:
    rec = LevelRecord(n, energy(spec, n), energy_paper(spec, n))
    rec.norm_paper = norm_constant_paper(spec, n).value
    if grid is not None:
        rec.norm_numeric = norm_constant_numeric(spec, n, grid)
    return rec


# -- eigenfunctions -----------------------------------------------------------

def _poly_derivs(spec: PotentialSpec, n: int, z):
    """Q_n and its first two z-derivatives."""
    model = _model(spec)
    xs = model.xspec
    if model.kind == "jacobi" and n == 0 and spec.m > 0 and 1 + xs.alpha - spec.m == 0:
        # the exceptional display degenerates to 0 here; the zero mode is N(z)
        return [model.numerator(z, k) for k in range(3)]
    return [xm_derivative(model.kind, xs, n, z, order=k) for k in range(3)]


def _ratio_derivs(spec: PotentialSpec, n: int, z):
    """R = Q/D with dR/dz and d2R/dz2."""
    Q, Q1, Q2 = _poly_derivs(spec, n, z)
    if spec.m == 0:
        return Q, Q1, Q2
    model = _model(spec)
    D, D1, D2 = (model.denominator(z, k) for k in range(3))
    W = Q1 * D - Q * D1
    R = Q / D
    R1 = W / D**2
    R2 = (Q2 * D - Q * D2) / D**2 - 2.0 * D1 * W / D**3
    return R, R1, R2


def _eval(spec: PotentialSpec, n: int, x, order: int):
    _check_level(spec, n)
    x = _interior(spec, x)
    model = _model(spec)
    z, z1, z2 = model.z(x)
    w = np.exp(model.log_weight(x))
    R, Rz, Rzz = _ratio_derivs(spec, n, z)
    if order == 0:
        return w * R
    pc = model.phi_con(x)
    Rx = z1 * Rz
    if order == 1:
        return w * (Rx - pc * R)
    Rxx = z2 * Rz + z1 * z1 * Rzz
    return w * ((pc * pc - model.phi_con_prime(x)) * R - 2.0 * pc * Rx + Rxx)


def eigenfunction(spec: PotentialSpec, n: int, x):
    """Unnormalized psi^(1)_n(x) = w(x) Q_n(z) / D(z)."""
    return _eval(spec, n, x, 0)


def eigenfunction_deriv(spec: PotentialSpec, n: int, x):
    """Analytic d/dx of :func:`eigenfunction`."""
    return _eval(spec, n, x, 1)


def eigenfunction_deriv2(spec: PotentialSpec, n: int, x):
    """Analytic d^2/dx^2 of :func:`eigenfunction`."""
    return _eval(spec, n, x, 2)


# -- normalization ------------------------------------------------------------

def _norm_factors(spec: PotentialSpec, n: int):
    """(plain factors, gamma arguments) of N^2 as numerator/denominator lists."""
    fact = float(math.factorial(n))
    m = spec.m
    if spec.family == "oscillator":
        w, l = spec.omega, spec.ell
        shift = 0.5 if m == 0 else m + 0.5
        num = [fact, w ** (l + 1.5)]
        den = [2.0 ** (l + 0.5), l + n + shift]
        return num, den, [], [l + n + 0.5]
    a, b = _model(spec).xspec.alpha, _model(spec).xspec.beta
    two = 2.0 ** (a + b + 1)
    if spec.family == "scarf":
        if m == 0:
            return ([fact, a + b + 2 * n + 1], [two, n + b],
                    [n + a + b + 1], [n + a + 1, n + b])
        if m == 1:
            return ([fact, n + a + 1, a + b + 2 * n + 1], [two, n + a, n + 1 + b],
                    [n + a + b + 1], [n + a + 1, n + b])
        return ([fact, (n + a + 1) ** 2, a + b + 2 * n + 1], [two, n + a - m + 1, n + m + b],
                [n + a + b + 1], [n + a + 2, n + b])
    if m == 0:
        return ([fact, -a - b - 2 * n - 1, n + a + 1, a + n + 1], [two, (a + 1) ** 2],
                [-b - n], [a + n + 1, -a - b - n])
    num = [fact, -a - b - 2 * n - 1, a + n + 1]
    den = [two, -b - n - 1, a * a]
    if m >= 2:
        num.append(n + a - m + 1)
        den.append(a + n)
    return num, den, [-b - n + 1], [a + n, -a - b - n]


def norm_constant_paper(spec: PotentialSpec, n: int) -> PaperNorm:
    """Closed-form normalization constant, when all its factors are positive."""
    _check_level(spec, n)
    num, den, g_num, g_den = _norm_factors(spec, n)
    for g in g_num + g_den:
        if not g > 0:
            return PaperNorm(None, "gamma-argument-nonpositive")
    for f in num + den:
        if not f > 0:
            return PaperNorm(None, "factor-nonpositive")
    log_n2 = (sum(math.log(f) for f in num) - sum(math.log(f) for f in den)
              + sum(log_gamma(g) for g in g_num) - sum(log_gamma(g) for g in g_den))
    return PaperNorm(math.exp(0.5 * log_n2))


def norm_constant_numeric(spec: PotentialSpec, n: int, grid) -> float:
    """1 / sqrt(int psi_n^2) by composite Simpson on ``grid``."""
    from .numerics import quadrature

    psi = eigenfunction(spec, n, grid.nodes)
    s = quadrature(psi * psi, grid)
    if not (math.isfinite(s) and s > 0):
        raise NumericError(f"{spec.label}: norm integral of level {n} is {s}")
    return 1.0 / math.sqrt(s)


DEFAULT_COUNT = 4000


@lru_cache(maxsize=512)
def default_grid(spec: PotentialSpec, levels: int = 6, count: int = DEFAULT_COUNT, tail_tol: float = 1e-12):
    from .numerics import Grid

    return Grid.from_domain(truncate_domain(spec, tail_tol, levels), count)


@lru_cache(maxsize=2048)
def _cached_norm(spec: PotentialSpec, n: int, grid) -> float:
    return norm_constant_numeric(spec, n, grid)


def normalized_eigenfunction(spec: PotentialSpec, n: int, x, grid=None, order: int = 0):
    """psi_n (or its derivative) scaled by the numeric normalization on ``grid``."""
    grid = grid or default_grid(spec, max(6, n + 1))
    return _cached_norm(spec, n, grid) * _eval(spec, n, x, order)


# -- partner (H2) states ------------------------------------------------------

def _partner_energy(spec: PotentialSpec, n: int) -> float:
    _check_level(spec, n + 1)
    e = energy(spec, n + 1)
    if not e > 0:
        raise FactorizationError(f"{spec.label}: E_{n + 1} = {e} is not positive")
    return e


def partner_eigenfunction(spec: PotentialSpec, n: int, x, grid=None, e_next: Optional[float] = None):
    """Normalized H2 eigenfunction (psi'_{n+1} + phi psi_{n+1}) / sqrt(E_{n+1})."""
    e = _partner_energy(spec, n) if e_next is None else e_next
    if not e > 0:
        raise FactorizationError(f"E_{n + 1} = {e} is not positive")
    x = _interior(spec, x)
    model = _model(spec)
    psi = normalized_eigenfunction(spec, n + 1, x, grid)
    dpsi = normalized_eigenfunction(spec, n + 1, x, grid, order=1)
    return (dpsi + model.phi(x) * psi) / math.sqrt(e)


def partner_eigenfunction_deriv(spec: PotentialSpec, n: int, x, grid=None, e_next: Optional[float] = None):
    """d/dx of :func:`partner_eigenfunction` (needs psi'' of level n+1)."""
    e = _partner_energy(spec, n) if e_next is None else e_next
    if not e > 0:
        raise FactorizationError(f"E_{n + 1} = {e} is not positive")
    x = _interior(spec, x)
    model = _model(spec)
    psi = normalized_eigenfunction(spec, n + 1, x, grid)
    d1 = normalized_eigenfunction(spec, n + 1, x, grid, order=1)
    d2 = normalized_eigenfunction(spec, n + 1, x, grid, order=2)
    return (d2 + model.phi_prime(x) * psi + model.phi(x) * d1) / math.sqrt(e)


# -- SUSY classification ------------------------------------------------------

def _square_integrable(log_f: np.ndarray, rel_tol: float) -> bool:
    # decays at both truncation ends relative to its bulk maximum
    peak = log_f.max()
    return bool(2.0 * (max(log_f[0], log_f[-1]) - peak) < math.log(rel_tol))


def classify_susy(spec: PotentialSpec, grid, rel_tol: float = 1e-6) -> SusyClass:
    """Decide which of exp(-int phi), exp(+int phi) is normalizable on ``grid``."""
    from scipy.integrate import cumulative_trapezoid

    validate(spec)
    x = grid.nodes
    p = _model(spec).phi(x)
    integral = cumulative_trapezoid(p, x, initial=0.0)
    integral -= integral[len(x) // 2]
    minus = _square_integrable(-integral, rel_tol)
    plus = _square_integrable(integral, rel_tol)
    if minus and plus:
        raise InconsistencyError(f"{spec.label}: both exp(-int phi) and exp(+int phi) normalizable")
    if minus:
        return SusyClass(False, "H1")
    if plus:
        return SusyClass(False, "H2")
    return SusyClass(True, "none")
