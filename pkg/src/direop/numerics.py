"""
Finite-difference oracle: uniform grids, the 3-point Hamiltonian, a
Sturm-sequence bisection eigensolver, inverse iteration, composite Simpson
quadrature and Richardson extrapolation.

Nothing here knows about closed-form spectra; it is the independent check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.linalg import solve_banded

from .errors import DegenerateClusterError, GridSingularityError, InvalidArgumentError, NumericError
from .potentials import DomainInfo, PotentialSpec, potential_v

__all__ = [
    "Grid",
    "TridiagonalOperator",
    "build_hamiltonian",
    "sturm_count",
    "eigenvalues_lowest",
    "eigenvector",
    "quadrature",
    "richardson",
]


@dataclass(frozen=True)
class Grid:
    """Uniform interior nodes x0, x0 + h, ..., x0 + (count - 1) h.

    The boundary nodes x0 - h and x0 + count h carry Dirichlet conditions.
    """

    x0: float
    h: float
    count: int

    def __post_init__(self):
        if not self.h > 0:
            raise InvalidArgumentError(f"grid spacing must be positive, got {self.h}")
        if self.count < 16:
            raise InvalidArgumentError(f"grid needs at least 16 nodes, got {self.count}")

    @classmethod
    def from_domain(cls, domain: DomainInfo, count: int) -> "Grid":
        if not (math.isfinite(domain.x_min) and math.isfinite(domain.x_max)):
            raise InvalidArgumentError("grid needs a finite (truncated) domain")
        h = (domain.x_max - domain.x_min) / (count + 1)
        return cls(domain.x_min + h, h, count)

    @property
    def x_min(self) -> float:
        return self.x0 - self.h

    @property
    def x_max(self) -> float:
        return self.x0 + self.count * self.h

    @property
    def nodes(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(1, self.count + 1)

    def refined(self) -> "Grid":
        """Same span, half the spacing (2 count + 1 nodes); old node i is new node 2i + 1."""
        h = self.h / 2.0
        return Grid(self.x_min + h, h, 2 * self.count + 1)


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def __post_init__(self):
        d = np.array(self.diagonal, dtype=float)
        e = np.array(self.off_diagonal, dtype=float)
        if e.shape != (max(len(d) - 1, 0),):
            raise InvalidArgumentError("off-diagonal must have length count - 1")
        if not np.all(np.isfinite(d)):
            raise GridSingularityError("non-finite diagonal entry")
        d.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)

    @property
    def count(self) -> int:
        return len(self.diagonal)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diagonal) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        return out


def build_hamiltonian(spec: PotentialSpec, which: int, grid: Grid) -> TridiagonalOperator:
    """-d^2/dx^2 + V^(which) with the 3-point Laplacian and Dirichlet ends."""
    with np.errstate(all="ignore"):
        v = potential_v(spec, which, grid.nodes)
    if not np.all(np.isfinite(v)):
        raise GridSingularityError(f"{spec.label}: V^({which}) is non-finite on the grid")
    inv = 1.0 / grid.h**2
    return TridiagonalOperator(2.0 * inv + v, np.full(grid.count - 1, -inv))


# -- Sturm bisection ----------------------------------------------------------

@njit(cache=True)
def _sturm(d, e2, lam, pivmin):
    count = 0
    q = d[0] - lam
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, d.shape[0]):
        q = d[i] - lam - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


@njit(cache=True)
def _bisect(d, e2, k, lo, hi, rtol, atol, pivmin):
    out = np.empty(k)
    a0 = lo
    for i in range(k):
        a, b = a0, hi
        for _ in range(400):
            if b - a <= max(rtol * max(abs(a), abs(b)), atol):
                break
            mid = 0.5 * (a + b)
            if _sturm(d, e2, mid, pivmin) > i:
                b = mid
            else:
                a = mid
        out[i] = 0.5 * (a + b)
        a0 = a
    return out


def _gershgorin(op: TridiagonalOperator) -> tuple[float, float]:
    r = np.zeros(op.count)
    r[:-1] += np.abs(op.off_diagonal)
    r[1:] += np.abs(op.off_diagonal)
    return float(np.min(op.diagonal - r)), float(np.max(op.diagonal + r))


def _pivmin(op: TridiagonalOperator) -> float:
    e2max = float(np.max(op.off_diagonal**2)) if op.count > 1 else 0.0
    return np.finfo(float).tiny * max(1.0, e2max)


def sturm_count(op: TridiagonalOperator, lam: float) -> int:
    """Number of eigenvalues strictly below ``lam``."""
    return int(_sturm(op.diagonal, op.off_diagonal**2, float(lam), _pivmin(op)))


def eigenvalues_lowest(op: TridiagonalOperator, k: int, rtol: float = 1e-13, atol: float = 1e-14) -> np.ndarray:
    """The k smallest eigenvalues, ascending, by Sturm-sequence bisection.

    Each bracket is shrunk to ``rtol`` relative width (``atol`` absolute near
    zero).  The counts stay reliable well below eps * ||op||: the 1/h^2
    diagonal does not limit the accuracy of the low-lying levels, so no
    norm-scaled floor is imposed.
    """
    if not 0 <= k <= op.count:
        raise InvalidArgumentError(f"k must lie in [0, {op.count}], got {k}")
    lo, hi = _gershgorin(op)
    return _bisect(op.diagonal, op.off_diagonal**2, int(k), lo, hi, rtol, atol, _pivmin(op))


def eigenvector(op: TridiagonalOperator, lam: float, seed: int = 42, sweeps: int = 2,
                max_sweeps: int = 8, tol: float = 1e-8) -> np.ndarray:
    """Inverse iteration for the eigenvector at (approximate) eigenvalue ``lam``.

    Starts from a seeded random vector, runs ``sweeps`` solves, and keeps going
    (up to ``max_sweeps``) until the residual is below ``tol`` times the operator
    scale.  Unit 2-norm; sign chosen so the first lobe is positive.
    """
    n = op.count
    ab = np.zeros((3, n))
    ab[0, 1:] = op.off_diagonal
    ab[1] = op.diagonal - lam
    ab[2, :-1] = op.off_diagonal
    scale = max(1.0, float(np.max(np.abs(op.diagonal))))
    # an exactly singular shift would blow up the solve
    ab[1] += 8.0 * np.finfo(float).eps * scale
    v = np.random.default_rng(seed).standard_normal(n)
    v /= np.linalg.norm(v)
    for it in range(max_sweeps):
        v = solve_banded((1, 1), ab, v)
        nv = np.linalg.norm(v)
        if not (np.isfinite(nv) and nv > 0):
            raise NumericError("inverse iteration produced a non-finite vector")
        v /= nv
        if it + 1 >= sweeps:
            res = np.linalg.norm(op.matvec(v) - lam * v)
            if res < tol * scale or res < tol:
                break
    else:
        raise DegenerateClusterError(f"inverse iteration did not converge near {lam}")
    big = np.abs(v) >= 1e-3 * np.max(np.abs(v))
    if v[np.argmax(big)] < 0:
        v = -v
    return v


# -- quadrature and extrapolation --------------------------------------------

def quadrature(values, grid: Grid) -> float:
    """Composite Simpson over the whole grid span.

    ``values`` are samples at the interior nodes; the integrand is taken to
    vanish at the two boundary nodes.  With an even number of panels the last
    one is integrated by the trapezoid rule.
    """
    f = np.zeros(grid.count + 2)
    f[1:-1] = np.asarray(values, dtype=float)
    h = grid.h
    npts = len(f)
    if npts % 2 == 1:
        return float(h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum()))
    g = f[:-1]
    simpson = h / 3.0 * (g[0] + g[-1] + 4.0 * g[1:-1:2].sum() + 2.0 * g[2:-1:2].sum())
    return float(simpson + 0.5 * h * (f[-2] + f[-1]))


def richardson(e_h: float, e_h2: float, order: int = 2) -> float:
    """Extrapolate a quantity with O(h^order) error from spacings h and h/2."""
    if order < 1:
        raise InvalidArgumentError("order must be >= 1")
    f = 2.0**order
    return (f * e_h2 - e_h) / (f - 1.0)
