"""Factorization-method imaging from the spectrum of Im(F)."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .operators import DirectionSet

NEGLIGIBLE_RTOL = 1e-14
JACOBI_RTOL = 1e-13
JACOBI_MAX_SWEEPS = 100
IMAGING_MODES = ("tikhonov_fm", "unregularized", "regularized_liminf")
LIMINF_ALPHAS = (1e-5, 1e-8, 1e-11)


class ConvergenceError(ArithmeticError):
    pass


class DegenerateSpectrumError(ValueError):
    """No usable (positive, non-negligible) eigenvalue: zero or corrupted data."""


# --------------------------------------------------------------------------
# spectral decomposition
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralSystem:
    """Eigenpairs of a Hermitian matrix, eigenvalues descending.

    ``vectors[:, j]`` is the unit eigenvector for ``values[j]``.
    """

    values: np.ndarray
    vectors: np.ndarray = field(repr=False)
    sweeps: int = 0

    @property
    def sigma_max(self) -> float:
        return float(self.values[0])

    @property
    def threshold(self) -> float:
        return NEGLIGIBLE_RTOL * max(self.sigma_max, 0.0)

    @property
    def usable(self) -> np.ndarray:
        """Mask of modes entering Picard sums (sigma above the threshold)."""
        return self.values > self.threshold

    @property
    def excluded_count(self) -> int:
        return int((~self.usable).sum())

    @property
    def negative_count(self) -> int:
        """Eigenvalues below -threshold (counted as genuinely negative)."""
        return int((self.values < -self.threshold).sum())


def _rotate(A: np.ndarray, V: np.ndarray, p: int, q: int) -> None:
    apq = A[p, q]
    g = abs(apq)
    phase = apq / g
    app, aqq = A[p, p].real, A[q, q].real
    theta = (aqq - app) / (2.0 * g)
    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
    if theta < 0:
        t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] acting on columns p, q
    U = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
    cols = A[:, [p, q]] @ U
    A[:, p], A[:, q] = cols[:, 0], cols[:, 1]
    rows = U.conj().T @ A[[p, q], :]
    A[p, :], A[q, :] = rows[0], rows[1]
    A[p, q] = A[q, p] = 0.0
    A[p, p] = A[p, p].real
    A[q, q] = A[q, q].real
    vc = V[:, [p, q]] @ U
    V[:, p], V[:, q] = vc[:, 0], vc[:, 1]


def hermitian_eig(A) -> SpectralSystem:
    """Cyclic complex Jacobi eigensolver for a Hermitian matrix.

    Sweeps over all (p, q) pairs until every off-diagonal modulus is at most
    JACOBI_RTOL * ||A||_F.  Single-threaded and deterministic.
    """
    A = np.array(A, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    V = np.eye(n, dtype=complex)
    fro = np.linalg.norm(A)
    tol = JACOBI_RTOL * fro
    sweeps = 0
    if fro > 0:
        iu = np.triu_indices(n, 1)
        while np.abs(A[iu]).max(initial=0.0) > tol:
            if sweeps >= JACOBI_MAX_SWEEPS:
                raise ConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
            sweeps += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    # rotations on entries already at rounding level only churn
                    if abs(A[p, q]) > 1e-3 * tol:
                        _rotate(A, V, p, q)
    w = A.diagonal().real.copy()
    order = np.argsort(-w, kind="stable")
    return SpectralSystem(values=w[order], vectors=V[:, order], sweeps=sweeps)


# --------------------------------------------------------------------------
# grids and indicator functions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SamplingGrid:
    xmin: float = -2.0
    xmax: float = 2.0
    ymin: float = -2.0
    ymax: float = 2.0
    nx: int = 200
    ny: int = 200

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs nx, ny >= 2")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("grid ranges must be nondegenerate")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.ymin, self.ymax, self.ny)

    @property
    def cell_size(self) -> tuple[float, float]:
        return ((self.xmax - self.xmin) / (self.nx - 1), (self.ymax - self.ymin) / (self.ny - 1))

    def points(self) -> np.ndarray:
        """(nx*ny, 2) points, x index outer (row-major in (ix, iy))."""
        X, Y = np.meshgrid(self.xs, self.ys, indexing="ij")
        return np.column_stack([X.ravel(), Y.ravel()])


@dataclass(frozen=True)
class ImagingConfig:
    alpha: float = 1e-5
    grid: SamplingGrid = field(default_factory=SamplingGrid)
    mode: str = "tikhonov_fm"

    def __post_init__(self):
        if self.mode not in IMAGING_MODES:
            raise ValueError(f"mode must be one of {IMAGING_MODES}")
        if self.alpha < 0 or (self.mode == "tikhonov_fm" and not self.alpha > 0):
            raise ValueError("tikhonov_fm needs alpha > 0")


@dataclass(frozen=True)
class IndicatorField:
    grid: SamplingGrid
    values: np.ndarray = field(repr=False)
    meta: dict = field(default_factory=dict, compare=False)

    def argmax_point(self) -> np.ndarray:
        ix, iy = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return np.array([self.grid.xs[ix], self.grid.ys[iy]])


def test_vector(z, dirs: DirectionSet, kappa: float) -> np.ndarray:
    """l_z = [exp(-i kappa xhat_i . z)]."""
    z = np.asarray(z, dtype=float)
    return np.exp(-1j * kappa * (dirs.vectors @ z))


def tikhonov_filter(t, alpha):
    """t^2 / (t^2 + alpha)."""
    t = np.asarray(t, dtype=float)
    out = t * t / (t * t + alpha)
    return float(out) if out.ndim == 0 else out


def _check_spectrum(spec: SpectralSystem) -> np.ndarray:
    if not spec.sigma_max > 0:
        raise DegenerateSpectrumError("Im(F) has no positive eigenvalue")
    if spec.negative_count > len(spec.values) / 2:
        raise DegenerateSpectrumError(
            f"{spec.negative_count} of {len(spec.values)} eigenvalues are negative; "
            "data look non-absorbing or corrupted")
    use = spec.usable
    if not use.any():
        raise DegenerateSpectrumError("all modes are negligible")
    return use


def _mode_weights(spec: SpectralSystem, alpha: float | None) -> tuple[np.ndarray, np.ndarray]:
    use = _check_spectrum(spec)
    s = spec.values[use]
    w = 1.0 / s if alpha is None else tikhonov_filter(s, alpha) ** 2 / s
    return spec.vectors[:, use], np.atleast_1d(w)


def _picard_values(points: np.ndarray, spec: SpectralSystem, dirs: DirectionSet,
                   kappa: float, alpha: float | None, chunk: int = 8192) -> np.ndarray:
    U, w = _mode_weights(spec, alpha)
    Uh = U.conj().T
    X = dirs.vectors
    out = np.empty(len(points))
    for start in range(0, len(points), chunk):
        Z = points[start:start + chunk]
        L = np.exp(-1j * kappa * (X @ Z.T))
        proj = Uh @ L
        out[start:start + chunk] = 1.0 / (w @ (proj.real**2 + proj.imag**2))
    return out


def indicator_fm(z, spec: SpectralSystem, dirs: DirectionSet, kappa: float, alpha: float) -> float:
    """W_FM(z) = [sum_j phi(sigma_j; alpha)^2 / sigma_j |(u_j, l_z)|^2]^-1."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return float(_picard_values(np.asarray(z, float).reshape(1, 2), spec, dirs, kappa, alpha)[0])


def indicator_picard(z, spec: SpectralSystem, dirs: DirectionSet, kappa: float) -> float:
    """Unregularized W(z) = [sum_j |(u_j, l_z)|^2 / sigma_j]^-1."""
    return float(_picard_values(np.asarray(z, float).reshape(1, 2), spec, dirs, kappa, None)[0])


def liminf_trend(z, spec: SpectralSystem, dirs: DirectionSet, kappa: float,
                 alphas=LIMINF_ALPHAS) -> np.ndarray:
    """W_alpha(z) along a decreasing alpha sequence (operational liminf test)."""
    return np.array([indicator_fm(z, spec, dirs, kappa, a) for a in alphas])


def indicator_field(config: ImagingConfig, spec: SpectralSystem, dirs: DirectionSet,
                    kappa: float) -> IndicatorField:
    pts = config.grid.points()
    shape = (config.grid.nx, config.grid.ny)
    meta = {"mode": config.mode, "alpha": config.alpha,
            "excluded_modes": spec.excluded_count, "negative_modes": spec.negative_count}
    if config.mode == "tikhonov_fm":
        vals = _picard_values(pts, spec, dirs, kappa, config.alpha)
    elif config.mode == "unregularized":
        vals = _picard_values(pts, spec, dirs, kappa, None)
    else:
        # smallest alpha of the sequence is the reported field; the trend of
        # the grid minimum/maximum across the sequence goes into meta
        trend = [_picard_values(pts, spec, dirs, kappa, a) for a in LIMINF_ALPHAS]
        vals = trend[-1]
        meta["liminf_alphas"] = list(LIMINF_ALPHAS)
        meta["liminf_max"] = [float(t.max()) for t in trend]
        meta["liminf_min"] = [float(t.min()) for t in trend]
    vals = vals.reshape(shape)
    if not np.all(np.isfinite(vals)):
        raise DegenerateSpectrumError("indicator produced non-finite values")
    return IndicatorField(config.grid, vals, meta)


# --------------------------------------------------------------------------
# metrics
# --------------------------------------------------------------------------

def threshold_mask(field_: IndicatorField, level: float) -> np.ndarray:
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    v = field_.values
    return v >= level * v.max()


def jaccard(a, b) -> float:
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    union = np.logical_or(a, b).sum()
    if union == 0:
        return 1.0
    return float(np.logical_and(a, b).sum() / union)


def mask_centroid(mask, grid: SamplingGrid) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise ValueError("empty mask has no centroid")
    ix, iy = np.nonzero(mask)
    return np.array([grid.xs[ix].mean(), grid.ys[iy].mean()])


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def field_to_csv(field_: IndicatorField) -> str:
    """``x,y,w`` rows, x index outer."""
    buf = io.StringIO()
    buf.write("x,y,w\n")
    xs, ys, v = field_.grid.xs, field_.grid.ys, field_.values
    for i in range(len(xs)):
        for j in range(len(ys)):
            buf.write(f"{float(xs[i])!r},{float(ys[j])!r},{float(v[i, j])!r}\n")
    return buf.getvalue()


def field_to_pgm(field_: IndicatorField) -> bytes:
    """Binary 8-bit PGM, min-max normalised, top row = largest y."""
    v = field_.values
    lo, hi = float(v.min()), float(v.max())
    scaled = np.zeros_like(v) if hi == lo else (v - lo) / (hi - lo)
    img = np.round(scaled * 255).astype(np.uint8)  # (nx, ny)
    img = img.T[::-1]  # rows: y descending, columns: x ascending
    head = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    return head + img.tobytes()
