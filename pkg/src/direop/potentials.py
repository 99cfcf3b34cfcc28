"""
Dirac scalar potentials phi(x) and their Schrodinger partners.

Three families are supported, each in conventional (m = 0) and rationally
extended (m >= 1) form:

* ``oscillator``: phi = omega r / 2 - (ell + 1) / r on the half line, z = omega r^2 / 2
* ``scarf``:      phi = A tan x - B sec x on (-pi/2, pi/2), z = sin x
* ``pt``:         phi = A coth r - B cosech r on the half line, z = cosh r

The rational term of the X_m extension is written as a logarithmic derivative,
``phi_rat = -z'(x) d/dz log(N(z) / D(z))``, where D is the denominator of the
extended eigenfunctions and N the polynomial the n = 0 exceptional polynomial
reduces to.  Expanded this is exactly the two-ratio form with
``-(beta - alpha + m - 1)/2`` (Jacobi) or ``omega r`` (Laguerre) prefactor.

The parametric variants replace (A, B) by (B + 1/2, A - 1/2) for Scarf and by
(B - 1/2, A + 1/2) for Poschl-Teller before anything else is evaluated.

Partner potentials are always formed as ``phi**2 -/+ phi'``; no expanded
potential formula is hard-coded.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import DomainError, InvalidSpecError, SingularExtensionError
from .xortho import (
    SCAN_NODES,
    XmJacobiSpec,
    XmLaguerreSpec,
    denominator_nonzero_scan,
    xm_jacobi_denominator,
    xm_jacobi_numerator,
    xm_laguerre_denominator,
    xm_laguerre_numerator,
)

__all__ = [
    "PotentialSpec",
    "DomainInfo",
    "JacobiIndices",
    "EDGE_INSET",
    "jacobi_indices",
    "validate",
    "map_z",
    "phi",
    "phi_prime",
    "potential_v",
    "truncate_domain",
]

EDGE_INSET = 1e-6

_ALIASES = {
    "oscillator": "oscillator",
    "radial_oscillator": "oscillator",
    "radialoscillator": "oscillator",
    "scarf": "scarf",
    "trig_scarf": "scarf",
    "trigscarf": "scarf",
    "pt": "pt",
    "poschl_teller": "pt",
    "hyp_poschl_teller": "pt",
    "hypposchlteller": "pt",
}


@dataclass(frozen=True)
class PotentialSpec:
    """A fully parameterized potential: family, codimension m, parametric flag, parameters.

    Use the ``oscillator``, ``scarf`` and ``poschl_teller`` constructors rather
    than filling the optional fields by hand.
    """

    family: str
    m: int = 0
    parametric: bool = False
    omega: Optional[float] = None
    ell: Optional[float] = None
    A: Optional[float] = None
    B: Optional[float] = None

    def __post_init__(self):
        key = str(self.family).lower().replace("-", "_")
        if key not in _ALIASES:
            raise InvalidSpecError(f"unknown family {self.family!r}")
        object.__setattr__(self, "family", _ALIASES[key])
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 0:
            raise InvalidSpecError(f"m must be a non-negative integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "parametric", bool(self.parametric))
        for name in ("omega", "ell", "A", "B"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, float(v))

    @classmethod
    def oscillator(cls, omega: float, ell: float, m: int = 0) -> "PotentialSpec":
        return cls("oscillator", m=m, omega=omega, ell=ell)

    @classmethod
    def scarf(cls, A: float, B: float, m: int = 0, parametric: bool = False) -> "PotentialSpec":
        return cls("scarf", m=m, parametric=parametric, A=A, B=B)

    @classmethod
    def poschl_teller(cls, A: float, B: float, m: int = 0, parametric: bool = False) -> "PotentialSpec":
        return cls("pt", m=m, parametric=parametric, A=A, B=B)

    def with_m(self, m: int) -> "PotentialSpec":
        return PotentialSpec(self.family, m, self.parametric, self.omega, self.ell, self.A, self.B)

    def shape_params(self) -> tuple[float, float]:
        """(A, B) after the parametric substitution, if any."""
        if self.family == "oscillator":
            raise InvalidSpecError("the oscillator has no (A, B) parameters")
        A, B = self.A, self.B
        if not self.parametric:
            return A, B
        if self.family == "scarf":
            return B + 0.5, A - 0.5
        return B - 0.5, A + 0.5

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "PotentialSpec":
        return cls(**{k: d.get(k) for k in ("family", "m", "parametric", "omega", "ell", "A", "B") if k in d})

    @property
    def label(self) -> str:
        if self.family == "oscillator":
            p = f"omega={self.omega:g},ell={self.ell:g}"
        else:
            p = f"A={self.A:g},B={self.B:g}"
        tag = "parametric-" if self.parametric else ""
        return f"{tag}{self.family}(m={self.m},{p})"


@dataclass(frozen=True)
class DomainInfo:
    x_min: float
    x_max: float
    open_left: bool = True
    open_right: bool = True
    truncation: Optional[float] = None

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise DomainError(f"empty domain ({self.x_min}, {self.x_max})")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min


@dataclass(frozen=True)
class JacobiIndices:
    """Jacobi indices for the Scarf / Poschl-Teller families.

    ``alpha, beta`` are the non-parametric indices of the given (A, B);
    ``gamma, delta`` (Scarf) and ``eta, zeta`` (Poschl-Teller) are the
    indices of the parametric variant.  Unused fields are None.
    """

    alpha: float
    beta: float
    gamma: Optional[float] = None
    delta: Optional[float] = None
    eta: Optional[float] = None
    zeta: Optional[float] = None

    def effective(self, parametric: bool) -> tuple[float, float]:
        if not parametric:
            return self.alpha, self.beta
        if self.gamma is not None:
            return self.gamma, self.delta
        return self.eta, self.zeta


def jacobi_indices(spec: PotentialSpec) -> JacobiIndices:
    A, B = spec.A, spec.B
    if spec.family == "scarf":
        return JacobiIndices(A - B - 0.5, A + B - 0.5, gamma=B - A + 0.5, delta=A + B - 0.5)
    if spec.family == "pt":
        return JacobiIndices(-A + B - 0.5, -A - B - 0.5, eta=A - B + 0.5, zeta=-A - B - 0.5)
    raise InvalidSpecError("Jacobi indices exist only for the scarf and pt families")


# -- internal family model ----------------------------------------------------

class _Model:
    """Resolved per-spec evaluator (parametric substitution already applied)."""

    def __init__(self, spec: PotentialSpec):
        self.spec = spec
        self.family = spec.family
        self.m = spec.m
        if self.family == "oscillator":
            self.omega, self.ell = spec.omega, spec.ell
            self.kind = "laguerre"
            self.xspec = XmLaguerreSpec(self.m, self.ell + 0.5)
        else:
            self.A, self.B = spec.shape_params()
            self.kind = "jacobi"
            a, b = jacobi_indices(spec).effective(spec.parametric)
            self.xspec = XmJacobiSpec(self.m, a, b)

    # coordinate
    def z(self, x):
        """(z, z', z'') at x."""
        if self.family == "oscillator":
            w = self.omega
            return w * x * x / 2.0, w * x, w * np.ones_like(x)
        if self.family == "scarf":
            s, c = np.sin(x), np.cos(x)
            return s, c, -s
        ch, sh = np.cosh(x), np.sinh(x)
        return ch, sh, ch

    # conventional part
    def phi_con(self, x):
        if self.family == "oscillator":
            return self.omega * x / 2.0 - (self.ell + 1.0) / x
        if self.family == "scarf":
            return (self.A * np.sin(x) - self.B) / np.cos(x)
        return (self.A * np.cosh(x) - self.B) / np.sinh(x)

    def phi_con_prime(self, x):
        if self.family == "oscillator":
            return self.omega / 2.0 + (self.ell + 1.0) / x**2
        if self.family == "scarf":
            c = np.cos(x)
            return (self.A - self.B * np.sin(x)) / c**2
        sh = np.sinh(x)
        return (self.B * np.cosh(x) - self.A) / sh**2

    def log_weight(self, x):
        """log of exp(-int phi_con), the conventional zero mode."""
        if self.family == "oscillator":
            return (self.ell + 1.0) * np.log(x) - self.omega * x * x / 4.0
        A, B = self.A, self.B
        if self.family == "scarf":
            # 1 - sin x = 2 sin^2(pi/4 - x/2), 1 + sin x = 2 cos^2(pi/4 - x/2)
            t = math.pi / 4 - x / 2.0
            log1m = np.log(2.0) + 2.0 * np.log(np.abs(np.sin(t)))
            log1p = np.log(2.0) + 2.0 * np.log(np.abs(np.cos(t)))
            return 0.5 * (A - B) * log1m + 0.5 * (A + B) * log1p
        # z - 1 = 2 sinh^2(r/2), z + 1 = 2 cosh^2(r/2)
        logzm = np.log(2.0) + 2.0 * np.log(np.sinh(x / 2.0))
        logzp = np.log(2.0) + 2.0 * np.log(np.cosh(x / 2.0))
        return 0.5 * (B - A) * logzm - 0.5 * (A + B) * logzp

    # extension polynomials (functions of z)
    def numerator(self, z, order=0):
        if self.kind == "laguerre":
            return xm_laguerre_numerator(self.xspec, z, order)
        return xm_jacobi_numerator(self.xspec, z, order)

    def denominator(self, z, order=0):
        if self.kind == "laguerre":
            return xm_laguerre_denominator(self.xspec, z, order)
        return xm_jacobi_denominator(self.xspec, z, order)

    def _log_ratio_derivs(self, z):
        """First and second z-derivatives of log(N/D)."""
        N, N1, N2 = (self.numerator(z, k) for k in range(3))
        D, D1, D2 = (self.denominator(z, k) for k in range(3))
        g1 = N1 / N - D1 / D
        g2 = (N2 / N - (N1 / N) ** 2) - (D2 / D - (D1 / D) ** 2)
        return g1, g2

    def phi(self, x):
        out = self.phi_con(x)
        if self.m == 0:
            return out
        z, z1, _ = self.z(x)
        g1, _ = self._log_ratio_derivs(z)
        return out - z1 * g1

    def phi_prime(self, x):
        out = self.phi_con_prime(x)
        if self.m == 0:
            return out
        z, z1, z2 = self.z(x)
        g1, g2 = self._log_ratio_derivs(z)
        return out - z2 * g1 - z1 * z1 * g2


@lru_cache(maxsize=256)
def _model(spec: PotentialSpec) -> _Model:
    return _Model(spec)


# -- validation ---------------------------------------------------------------

def _check_window(spec: PotentialSpec) -> None:
    f = spec.family
    if f == "oscillator":
        if spec.omega is None or spec.ell is None:
            raise InvalidSpecError("oscillator needs omega and ell")
        if not (math.isfinite(spec.omega) and math.isfinite(spec.ell)):
            raise InvalidSpecError("oscillator parameters must be finite")
        if spec.parametric:
            raise InvalidSpecError("the radial oscillator has no parametric variant")
        if not spec.omega > 0:
            raise InvalidSpecError(f"violates omega > 0 (omega={spec.omega})")
        if not spec.ell > 0:
            raise InvalidSpecError(f"violates ell > 0 (ell={spec.ell})")
        return
    if spec.A is None or spec.B is None:
        raise InvalidSpecError(f"{f} needs A and B")
    A, B = spec.A, spec.B
    if not (math.isfinite(A) and math.isfinite(B)):
        raise InvalidSpecError("A and B must be finite")
    if f == "scarf" and not spec.parametric:
        if not 0 < B < A - 1:
            raise InvalidSpecError(f"violates 0 < B < A - 1 (A={A}, B={B})")
    elif f == "scarf":
        if not B > A - 1 > 0:
            raise InvalidSpecError(f"violates B > A - 1 > 0 (A={A}, B={B})")
    elif not spec.parametric:
        if not B > A + 1 > 1:
            raise InvalidSpecError(f"violates B > A + 1 > 1 (A={A}, B={B})")
    else:
        if not A + 1 > B > 0:
            raise InvalidSpecError(f"violates A + 1 > B > 0 (A={A}, B={B})")
        if not B > 0.5:
            raise InvalidSpecError(f"violates B > 1/2: no bound state satisfies n < B - 1/2 (B={B})")


def _base_domain(spec: PotentialSpec) -> DomainInfo:
    if spec.family == "scarf":
        h = math.pi / 2 - EDGE_INSET
        return DomainInfo(-h, h, True, True, None)
    return DomainInfo(0.0, math.inf, True, True, None)


def _weight_radius(model: _Model, tail_tol: float) -> float:
    """Radius where the conventional zero mode drops below tail_tol of its max."""
    R = 4.0 if model.family == "pt" else 4.0 * math.sqrt(2.0 / model.omega)
    log_tol = math.log(tail_tol)
    for _ in range(40):
        r = np.linspace(R / 20000, R, 20000)
        lw = model.log_weight(r)
        above = np.nonzero(lw - lw.max() >= log_tol)[0]
        if above[-1] < len(r) - 1 and np.argmax(lw) < len(r) - 1:
            return float(r[above[-1] + 1])
        R *= 2.0
    raise DomainError("zero mode does not decay; cannot truncate the half line")


def validate(spec: PotentialSpec) -> DomainInfo:
    """Check the parameter window (and the extension polynomials for m >= 1).

    Returns the untruncated open domain.  Raises InvalidSpecError naming the
    violated inequality, or SingularExtensionError if a polynomial of the
    rational term changes sign or vanishes inside the domain.
    """
    _check_window(spec)
    dom = _base_domain(spec)
    if spec.m >= 1:
        model = _model(spec)
        if math.isinf(dom.x_max):
            R = _weight_radius(model, 1e-12)
            x = np.linspace(0.0, R, SCAN_NODES + 2)[1:-1]
        else:
            x = np.linspace(dom.x_min, dom.x_max, SCAN_NODES)
        z = model.z(x)[0]
        for name, fn in (("denominator", model.denominator), ("numerator", model.numerator)):
            if not denominator_nonzero_scan(fn, z):
                raise SingularExtensionError(
                    f"{spec.label}: extension {name} polynomial vanishes inside the domain"
                )
    return dom


def _interior(spec: PotentialSpec, x):
    x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    if not np.all(np.isfinite(x)):
        raise DomainError("non-finite coordinate")
    if spec.family == "scarf":
        bad = np.abs(x) >= math.pi / 2
    else:
        bad = x <= 0
    if np.any(bad):
        raise DomainError(f"{spec.label}: x outside the open domain")
    return x


def map_z(spec: PotentialSpec, x):
    """Family coordinate z(x) and dz/dx."""
    x = _interior(spec, x)
    z, z1, _ = _model(spec).z(x)
    return z, z1


def phi(spec: PotentialSpec, x):
    """Scalar potential phi(x) = phi_con + phi_rat (parametric substitution applied)."""
    return _model(spec).phi(_interior(spec, x))


def phi_prime(spec: PotentialSpec, x):
    """Analytic x-derivative of :func:`phi`."""
    return _model(spec).phi_prime(_interior(spec, x))


def potential_v(spec: PotentialSpec, which: int, x):
    """Partner potential V^(1) = phi^2 - phi' (which=1) or V^(2) = phi^2 + phi' (which=2)."""
    if which not in (1, 2):
        raise ValueError(f"which must be 1 or 2, got {which!r}")
    x = _interior(spec, x)
    model = _model(spec)
    p, dp = model.phi(x), model.phi_prime(x)
    return p * p - dp if which == 1 else p * p + dp


def _level_radius(spec: PotentialSpec, n: int, tail_tol: float, start: float) -> float:
    from .spectra import eigenfunction

    R = start
    for _ in range(40):
        r = np.linspace(R / 20000, R, 20000)
        psi = np.abs(eigenfunction(spec, n, r))
        peak = psi.max()
        above = np.nonzero(psi >= tail_tol * peak)[0]
        if above[-1] < len(r) - 1 and np.argmax(psi) < len(r) - 1:
            return float(r[above[-1] + 1])
        R *= 2.0
    raise DomainError(f"level {n} does not decay; cannot truncate the half line")


def truncate_domain(spec: PotentialSpec, tail_tol: float = 1e-12, levels: int = 1) -> DomainInfo:
    """Finite domain on which the analytic levels 0..levels-1 have decayed below tail_tol.

    Half-line families are cut at the largest radius R where some requested
    level still exceeds ``tail_tol`` times its own maximum; the Scarf interval
    is inset by EDGE_INSET at both ends.  Levels beyond the last bound state
    are ignored.
    """
    if not 0 < tail_tol <= 1e-6:
        raise ValueError(f"tail_tol must lie in (0, 1e-6], got {tail_tol}")
    dom = validate(spec)
    if not math.isinf(dom.x_max):
        return dom
    from .spectra import max_level

    top = levels - 1
    nmax = max_level(spec)
    if nmax is not None:
        top = min(top, nmax)
    start = _weight_radius(_model(spec), tail_tol)
    R = max(_level_radius(spec, n, tail_tol, start / 2) for n in range(top + 1))
    return DomainInfo(dom.x_min, R, True, False, R)
