"""End-to-end runs: simulate data, compare models, invert, demo registry."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import __version__, forward, geometry, imaging, operators
from .config import COMPARE_RADII, RunConfig, ShapeConfig

REFERENCE_ERRORS = dict(zip(COMPARE_RADII, (0.6480, 0.5008, 0.3784, 0.2774, 0.1935, 0.2134)))
NORM_CONVENTIONS = ("entrywise_max", "induced_inf")


class ModelError(ValueError):
    pass


def _base_provenance(cfg: RunConfig, model: str) -> dict:
    return {
        "toolkit": "biharmfm",
        "version": __version__,
        "model": model,
        "kappa": cfg.kappa,
        "n_re": cfg.n_re,
        "n_im": cfg.n_im,
        "shape": cfg.shape.to_dict(),
        "directions": cfg.directions,
    }


def exact_matrix(cfg: RunConfig) -> operators.FarFieldMatrix:
    shape = cfg.shape.build()
    if not forward.exact_supported(shape):
        raise ModelError("the exact model is only available for a single disk of radius <= 1")
    coeffs = forward.solve_disk_modes(cfg.medium, shape.radius, cfg.lmax)
    t = cfg.dirs.angles
    F = forward.disk_farfield_matrix(coeffs, t, t, shape.center)
    prov = _base_provenance(cfg, "exact")
    prov["lmax"] = cfg.lmax
    return operators.FarFieldMatrix(cfg.dirs, F, prov)


def born_matrix(cfg: RunConfig, h: float | None = None) -> operators.FarFieldMatrix:
    shape = cfg.shape.build()
    h = h or cfg.born_h or geometry.default_born_h(shape)
    quad = geometry.quadrature_nodes(shape, h)
    X = cfg.dirs.vectors
    F = forward.born_matrix(quad, cfg.medium, X, X)
    prov = _base_provenance(cfg, "born")
    prov.update({"born_h": h, "quadrature_nodes": len(quad)})
    return operators.FarFieldMatrix(cfg.dirs, F, prov)


def simulate(cfg: RunConfig, model: str | None = None) -> operators.FarFieldMatrix:
    """Clean far-field matrix from the configured forward model (no noise)."""
    model = model or cfg.model
    if model == "exact":
        return exact_matrix(cfg)
    if model == "born":
        return born_matrix(cfg)
    raise ModelError(f"unknown model {model!r}")


@dataclass(frozen=True)
class CompareRow:
    eps: float
    entrywise_max: float
    induced_inf: float
    reference: float | None


def compare_born(cfg: RunConfig, radii=None, h_factor: float | None = None) -> list[CompareRow]:
    """||F_exact - F_Born|| for centred disks of each radius (h = eps / h_factor)."""
    radii = tuple(radii or cfg.radii)
    h_factor = h_factor or cfg.h_factor
    rows = []
    for eps in radii:
        c = replace(cfg, shape=ShapeConfig(type="disk", radius=eps))
        Fe = exact_matrix(c)
        Fb = born_matrix(c, h=eps / h_factor)
        rows.append(CompareRow(
            eps=eps,
            entrywise_max=operators.matrix_error(Fe, Fb, "entrywise_max"),
            induced_inf=operators.matrix_error(Fe, Fb, "induced_inf"),
            reference=REFERENCE_ERRORS.get(eps),
        ))
    return rows


def matching_conventions(rows: list[CompareRow], rtol: float = 0.2) -> list[str]:
    """Conventions for which every row with a reference value is within rtol."""
    out = []
    for conv in NORM_CONVENTIONS:
        refd = [r for r in rows if r.reference is not None]
        if refd and all(abs(getattr(r, conv) - r.reference) <= rtol * r.reference for r in refd):
            out.append(conv)
    return out


def data_operator(cfg: RunConfig, F: operators.FarFieldMatrix) -> np.ndarray:
    if cfg.data == "entrywise":
        return operators.entrywise_imag_operator(F)
    return operators.imag_part_operator(F)


def invert(cfg: RunConfig, F: operators.FarFieldMatrix, shape: geometry.Shape | None = None):
    """Noise -> Im(F) -> eigensystem -> indicator field, plus metrics."""
    if F.N != cfg.directions:
        raise ValueError(f"far-field matrix has N={F.N}, config expects {cfg.directions}")
    Fn = operators.add_noise(F, cfg.noise)
    spec = imaging.hermitian_eig(data_operator(cfg, Fn))
    field_ = imaging.indicator_field(cfg.imaging, spec, cfg.dirs, cfg.kappa)
    am = field_.argmax_point()
    metrics = {
        "argmax": [float(am[0]), float(am[1])],
        "indicator_max": float(field_.values.max()),
        "indicator_min": float(field_.values.min()),
        "excluded_modes": spec.excluded_count,
        "negative_modes": spec.negative_count,
        "sigma_max": spec.sigma_max,
        "jacobi_sweeps": spec.sweeps,
        "centroid_top5": [float(v) for v in imaging.mask_centroid(
            imaging.threshold_mask(field_, 0.95), field_.grid)],
    }
    if shape is not None:
        g = field_.grid
        truth = geometry.grid_mask(shape, g.xs, g.ys)
        metrics["argmax_inside"] = geometry.contains(shape, am)
        metrics["jaccard_50"] = imaging.jaccard(imaging.threshold_mask(field_, 0.5), truth)
    return Fn, spec, field_, metrics


# --------------------------------------------------------------------------
# demos
# --------------------------------------------------------------------------

_SHAPE_DEMO = {"n_re": 2.5, "n_im": 0.5, "model": "born", "kappa": 2 * math.pi}


def _demo(shape: str, **kw) -> dict:
    d = dict(_SHAPE_DEMO)
    d["shape"] = ShapeConfig(type=shape, center=kw.pop("center", (0.0, 0.0)))
    d.update(kw)
    return d


DEMOS = {
    "disk_fig2": dict(kappa=2.0, n_re=1.0, n_im=0.5, shape=ShapeConfig(type="disk", radius=0.5),
                      model="exact"),
    "star_k2pi": _demo("star"),
    "star_k3pi": _demo("star", kappa=3 * math.pi),
    "star_noise5": _demo("star", delta=0.05),
    "star_noise10": _demo("star", delta=0.10),
    "star_shifted": _demo("star", center=(-0.5, 0.5), delta=0.05),
    "kite_k2pi": _demo("kite"),
    "kite_k3pi": _demo("kite", kappa=3 * math.pi),
    "kite_noise5": _demo("kite", delta=0.05),
    "kite_noise10": _demo("kite", delta=0.10),
    "kite_shifted": _demo("kite", center=(-0.5, 0.5), delta=0.05),
    "two_disks": _demo("two_disks"),
    "two_disks_noise5": _demo("two_disks", delta=0.05),
}


def demo_config(name: str, seed: int = 0) -> RunConfig:
    if name not in DEMOS:
        raise KeyError(f"unknown demo {name!r}; valid names: {', '.join(sorted(DEMOS))}")
    cfg = replace(RunConfig(), seed=seed, **DEMOS[name])
    cfg.validate()
    return cfg
