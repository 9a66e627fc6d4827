"""Forward far-field models for a constant-index scatterer in a thin plate.

Two models are provided:

* the exact separation-of-variables solution for a disk (four transmission
  conditions per Fourier mode, 4x4 solve per mode), and
* the Born approximation, evaluated by midpoint quadrature over the shape,
  with a closed-form disk version used as an oracle.

Far-field normalisation: u^s ~ gamma e^{i kappa r} / sqrt(r) u_inf with
gamma = e^{i pi/4} / sqrt(8 pi kappa).  With that convention the modal series
becomes (4/i) sum_l a_l e^{i l (theta - phi)} and the Born prefactor is
kappa^2 / 2.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .geometry import Disk, QuadratureSet, Shape

DEFAULT_LMAX = 10
DECAY_WARN_RATIO = 1e-8
PIVOT_RTOL = 1e-13


def farfield_gamma(kappa: float) -> complex:
    """Normalisation constant between u^s and its far-field pattern."""
    return cmath.exp(0.25j * math.pi) / math.sqrt(8.0 * math.pi * kappa)


class SingularModeSystem(ArithmeticError):
    """A modal 4x4 system is numerically singular."""


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Medium:
    kappa: float
    n: complex

    def __post_init__(self):
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "n", complex(self.n))
        if not (self.kappa > 0 and math.isfinite(self.kappa)):
            raise ValueError(f"wavenumber must be positive, got {self.kappa}")
        if not cmath.isfinite(self.n):
            raise ValueError("refractive index must be finite")
        if self.n.imag < 0:
            raise ValueError(f"Im(n) must be >= 0, got {self.n.imag}")

    @property
    def absorbing(self) -> bool:
        """False flags the non-absorbing case Im(n) = 0 not covered by the theory."""
        return self.n.imag > 0

    @property
    def n_quarter(self) -> complex:
        # principal branch
        return self.n**0.25 if self.n != 0 else 0j

    @property
    def n_half(self) -> complex:
        return cmath.sqrt(self.n)

    @property
    def contrast(self) -> complex:
        return self.n - 1.0


# --------------------------------------------------------------------------
# exact disk solution
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DiskModeSystem:
    order: int
    matrix: np.ndarray = field(repr=False)
    rhs: np.ndarray = field(repr=False)


def disk_mode_system(order: int, medium: Medium, eps: float) -> DiskModeSystem:
    """Transmission-condition system M u = f for Fourier mode ``order``.

    Rows are continuity of u, d_r u, Laplacian u and d_r Laplacian u at r = eps;
    unknowns are (a, b, c, d): outgoing Helmholtz, outgoing modified
    Helmholtz, interior propagating and interior evanescent amplitudes.
    """
    if abs(order) > specfun.MAX_ORDER:
        raise specfun.SpecialFunctionDomainError(f"|order| > {specfun.MAX_ORDER}")
    if not (0 < eps <= 1):
        raise ValueError(f"disk radius must lie in (0, 1], got {eps}")
    m = abs(int(order))
    k = medium.kappa
    n4 = medium.n_quarter
    n2 = medium.n_half
    ke = k * eps
    hk = specfun.cylinder_values(m, ke)
    hm = specfun.cylinder_values(m, 1j * ke)
    jp = specfun.cylinder_values(m, k * n4 * eps)
    je = specfun.cylinder_values(m, 1j * k * n4 * eps)
    M = np.array([
        [hk["H"], hm["H"], -jp["J"], -je["J"]],
        [k * hk["Hp"], 1j * k * hm["Hp"], -k * n4 * jp["Jp"], -1j * k * n4 * je["Jp"]],
        [-k**2 * hk["H"], k**2 * hm["H"], k**2 * n2 * jp["J"], -k**2 * n2 * je["J"]],
        [-k**3 * hk["Hp"], 1j * k**3 * hm["Hp"], k**3 * n4**3 * jp["Jp"],
         -1j * k**3 * n4**3 * je["Jp"]],
    ], dtype=complex)
    f = np.array([-hk["J"], -k * hk["Jp"], k**2 * hk["J"], k**3 * hk["Jp"]], dtype=complex)
    return DiskModeSystem(order=int(order), matrix=M, rhs=f)


def gauss_solve(M: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Gaussian elimination with partial pivoting on an equilibrated copy.

    Rows and columns are scaled to unit max modulus first (the modal system
    mixes exponentially large and small cylinder functions); a pivot below
    PIVOT_RTOL of the largest scaled entry raises SingularModeSystem.
    """
    A = np.array(M, dtype=complex)
    b = np.array(f, dtype=complex)
    n = len(b)
    rs = np.abs(A).max(axis=1)
    if np.any(rs == 0):
        raise SingularModeSystem("zero row in modal system")
    A /= rs[:, None]
    b = b / rs
    cs = np.abs(A).max(axis=0)
    if np.any(cs == 0):
        raise SingularModeSystem("zero column in modal system")
    A /= cs[None, :]
    big = np.abs(A).max()
    for col in range(n):
        piv = col + int(np.argmax(np.abs(A[col:, col])))
        if abs(A[piv, col]) < PIVOT_RTOL * big:
            raise SingularModeSystem(f"pivot {abs(A[piv, col]):.3e} in column {col}")
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        for row in range(col + 1, n):
            factor = A[row, col] / A[col, col]
            A[row, col:] -= factor * A[col, col:]
            b[row] -= factor * b[col]
    x = np.zeros(n, dtype=complex)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - A[row, row + 1:] @ x[row + 1:]) / A[row, row]
    return x / cs


@dataclass(frozen=True)
class DiskModeCoefficients:
    """Per-mode (a, b, c, d) for |l| <= lmax; row l + lmax of ``table``."""

    lmax: int
    table: np.ndarray = field(repr=False)
    medium: Medium
    eps: float

    def __getitem__(self, order: int) -> np.ndarray:
        if abs(order) > self.lmax:
            raise KeyError(order)
        return self.table[order + self.lmax]

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.lmax, self.lmax + 1)

    @property
    def a(self) -> np.ndarray:
        return self.table[:, 0]


def solve_disk_modes(medium: Medium, eps: float, lmax: int = DEFAULT_LMAX) -> DiskModeCoefficients:
    if lmax < 0:
        raise ValueError("lmax must be >= 0")
    sols = {}
    for m in range(lmax + 1):
        sys_ = disk_mode_system(m, medium, eps)
        sols[m] = gauss_solve(sys_.matrix, sys_.rhs)
    table = np.array([sols[abs(l)] for l in range(-lmax, lmax + 1)])
    amax = np.abs(table[:, 0]).max()
    if amax > 0 and abs(table[-1, 0]) > DECAY_WARN_RATIO * amax:
        warnings.warn(
            f"|a_{lmax}| / max|a_l| = {abs(table[-1, 0]) / amax:.2e}: modal series may be "
            "under-resolved, increase lmax", TruncationWarning, stacklevel=2)
    return DiskModeCoefficients(lmax=lmax, table=table, medium=medium, eps=float(eps))


def disk_farfield(coeffs: DiskModeCoefficients, theta: float, phi: float) -> complex:
    """(4/i) sum_l a_l exp(i l (theta - phi)) for the centred disk."""
    ls = coeffs.orders
    return complex(-4j * np.sum(coeffs.a * np.exp(1j * ls * (theta - phi))))


def disk_farfield_matrix(coeffs: DiskModeCoefficients, theta, phi, center=(0.0, 0.0)) -> np.ndarray:
    """Far-field values on all (theta_i, phi_j); ``center`` applies the
    translation phase exp(-i kappa c.(xhat - d))."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    diff = theta[:, None] - phi[None, :]
    # exp(i l diff) summed from the outermost order inward
    out = np.zeros(diff.shape, dtype=complex)
    for l, a in zip(coeffs.orders, coeffs.a):
        out += a * np.exp(1j * l * diff)
    out *= -4j
    cx, cy = float(center[0]), float(center[1])
    if cx or cy:
        k = coeffs.medium.kappa
        px = cx * np.cos(theta)[:, None] + cy * np.sin(theta)[:, None]
        pd = cx * np.cos(phi)[None, :] + cy * np.sin(phi)[None, :]
        out *= np.exp(-1j * k * (px - pd))
    return out


# --------------------------------------------------------------------------
# Born approximation
# --------------------------------------------------------------------------

def born_farfield(shape: Shape, medium: Medium, xhat, d, quad: QuadratureSet) -> complex:
    """(kappa^2/2)(n - 1) * midpoint sum of exp(-i kappa y.(xhat - d))."""
    if len(quad) == 0:
        raise ValueError("empty quadrature set")
    k = medium.kappa
    q = np.asarray(xhat, dtype=float) - np.asarray(d, dtype=float)
    s = np.exp(-1j * k * (quad.nodes @ q)).sum()
    return complex(0.5 * k * k * medium.contrast * quad.weight * s)


def born_matrix(quad: QuadratureSet, medium: Medium, xhat: np.ndarray, d: np.ndarray,
                chunk: int = 16384) -> np.ndarray:
    """Born far-field matrix [u_B(xhat_i, d_j)], same rule as born_farfield.

    Uses exp(-i k y.(x - d)) = exp(-i k y.x) exp(i k y.d) so the node sum is a
    matrix product.
    """
    if len(quad) == 0:
        raise ValueError("empty quadrature set")
    k = medium.kappa
    xhat = np.asarray(xhat, dtype=float)
    d = np.asarray(d, dtype=float)
    acc = np.zeros((len(xhat), len(d)), dtype=complex)
    for start in range(0, len(quad.nodes), chunk):
        y = quad.nodes[start:start + chunk]
        acc += np.exp(-1j * k * (xhat @ y.T)) @ np.exp(1j * k * (y @ d.T))
    return 0.5 * k * k * medium.contrast * quad.weight * acc


def born_disk_analytic(eps: float, center, medium: Medium, xhat, d) -> complex:
    """Closed-form Born far field of the disk of radius ``eps`` at ``center``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    k = medium.kappa
    q = k * (np.asarray(xhat, dtype=float) - np.asarray(d, dtype=float))
    qa = float(np.hypot(q[0], q[1]))
    pref = 0.5 * k * k * medium.contrast
    if qa <= 1e-12:
        base = math.pi * eps * eps
    else:
        base = 2.0 * math.pi * eps * specfun.bessel_j(1, qa * eps) / qa
    phase = cmath.exp(-1j * float(q @ np.asarray(center, dtype=float)))
    return complex(pref * phase * base)


def exact_supported(shape: Shape) -> bool:
    return isinstance(shape, Disk) and shape.radius <= 1.0
