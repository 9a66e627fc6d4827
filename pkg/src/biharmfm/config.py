"""JSON run configuration with strict key checking."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from . import geometry
from .forward import Medium
from .imaging import IMAGING_MODES, ImagingConfig, SamplingGrid
from .operators import NOISE_NORMALIZATIONS, DirectionSet, NoiseSpec

MODELS = ("exact", "born")
DATA_READINGS = ("operator", "entrywise")
COMPARE_RADII = (1.0, 0.9, 0.8, 0.7, 0.6, 0.5)


class ConfigError(ValueError):
    pass


def _section(d, name, allowed, required=()):
    if d is None:
        d = {}
    if not isinstance(d, dict):
        raise ConfigError(f"{name}: expected an object")
    extra = set(d) - set(allowed)
    if extra:
        raise ConfigError(f"{name}: unknown keys {sorted(extra)}")
    missing = [k for k in required if k not in d]
    if missing:
        raise ConfigError(f"{name}: missing keys {missing}")
    return d


def _num(v, name, *, positive=False, integer=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{name}: expected a number, got {v!r}")
    if not math.isfinite(v):
        raise ConfigError(f"{name}: must be finite")
    if integer and int(v) != v:
        raise ConfigError(f"{name}: expected an integer")
    if positive and not v > 0:
        raise ConfigError(f"{name}: must be positive")
    return int(v) if integer else float(v)


@dataclass(frozen=True)
class ShapeConfig:
    """``type`` is a builtin name, ``union`` (with ``parts``) or ``polygon``."""

    type: str = "disk"
    radius: float = 0.5
    center: tuple = (0.0, 0.0)
    samples: int = geometry.DEFAULT_SAMPLES
    parts: tuple = ()
    points: tuple = ()

    @classmethod
    def from_dict(cls, d) -> "ShapeConfig":
        d = _section(d, "shape", ("type", "radius", "center", "samples", "parts", "points"), ("type",))
        t = d["type"]
        if t not in geometry.BUILTIN_SHAPES + ("union", "polygon"):
            raise ConfigError(f"shape.type: unknown shape {t!r}")
        center = d.get("center", [0.0, 0.0])
        if not (isinstance(center, (list, tuple)) and len(center) == 2):
            raise ConfigError("shape.center: expected [x, y]")
        out = cls(
            type=t,
            radius=_num(d.get("radius", 0.5), "shape.radius", positive=True),
            center=tuple(_num(c, "shape.center") for c in center),
            samples=_num(d.get("samples", geometry.DEFAULT_SAMPLES), "shape.samples", integer=True),
            parts=tuple(cls.from_dict(p) for p in d.get("parts", [])),
            points=tuple(tuple(_num(c, "shape.points") for c in p) for p in d.get("points", [])),
        )
        try:
            out.build()
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"shape: {exc}") from exc
        return out

    def to_dict(self) -> dict:
        d = {"type": self.type, "radius": self.radius, "center": list(self.center),
             "samples": self.samples}
        if self.parts:
            d["parts"] = [p.to_dict() for p in self.parts]
        if self.points:
            d["points"] = [list(p) for p in self.points]
        return d

    def build(self) -> geometry.Shape:
        if self.type == "union":
            if not self.parts:
                raise ValueError("union needs parts")
            base = geometry.Union(tuple(p.build() for p in self.parts))
            return geometry.shifted(base, self.center) if any(self.center) else base
        if self.type == "polygon":
            poly = geometry.ParametricCurve(list(self.points))
            return geometry.shifted(poly, self.center) if any(self.center) else poly
        return geometry.builtin_shape(self.type, radius=self.radius, center=self.center,
                                      samples=self.samples)


@dataclass(frozen=True)
class RunConfig:
    kappa: float = 2.0
    n_re: float = 1.0
    n_im: float = 0.5
    shape: ShapeConfig = field(default_factory=ShapeConfig)
    directions: int = 64
    lmax: int = 10
    model: str = "born"
    born_h: float | None = None
    delta: float = 0.0
    seed: int = 0
    noise_normalization: str = "spectral"
    alpha: float = 1e-5
    mode: str = "tikhonov_fm"
    data: str = "operator"
    grid: SamplingGrid = field(default_factory=SamplingGrid)
    radii: tuple = COMPARE_RADII
    h_factor: float = 200.0
    out_dir: str = "out"
    formats: tuple = ("csv", "pgm")

    # -- derived objects ---------------------------------------------------
    @property
    def medium(self) -> Medium:
        return Medium(self.kappa, complex(self.n_re, self.n_im))

    @property
    def dirs(self) -> DirectionSet:
        return DirectionSet(self.directions)

    @property
    def noise(self) -> NoiseSpec:
        return NoiseSpec(self.delta, self.seed, self.noise_normalization)

    @property
    def imaging(self) -> ImagingConfig:
        return ImagingConfig(alpha=self.alpha, grid=self.grid, mode=self.mode)

    # -- (de)serialisation -------------------------------------------------
    @classmethod
    def from_dict(cls, d) -> "RunConfig":
        d = _section(d, "config", ("medium", "shape", "directions", "lmax", "model", "born",
                                   "noise", "imaging", "compare", "output"))
        med = _section(d.get("medium"), "medium", ("kappa", "n_re", "n_im"))
        born = _section(d.get("born"), "born", ("h",))
        noise = _section(d.get("noise"), "noise", ("delta", "seed", "normalization"))
        img = _section(d.get("imaging"), "imaging", ("alpha", "mode", "data", "grid"))
        grid = _section(img.get("grid"), "imaging.grid", ("xmin", "xmax", "ymin", "ymax", "nx", "ny"))
        cmp_ = _section(d.get("compare"), "compare", ("radii", "h_factor"))
        out = _section(d.get("output"), "output", ("dir", "formats"))
        h = born.get("h")
        kw = dict(
            kappa=_num(med.get("kappa", 2.0), "medium.kappa", positive=True),
            n_re=_num(med.get("n_re", 1.0), "medium.n_re"),
            n_im=_num(med.get("n_im", 0.5), "medium.n_im"),
            shape=ShapeConfig.from_dict(d.get("shape", {"type": "disk"})),
            directions=_num(d.get("directions", 64), "directions", integer=True),
            lmax=_num(d.get("lmax", 10), "lmax", integer=True),
            model=d.get("model", "born"),
            born_h=None if h is None else _num(h, "born.h", positive=True),
            delta=_num(noise.get("delta", 0.0), "noise.delta"),
            seed=_num(noise.get("seed", 0), "noise.seed", integer=True),
            noise_normalization=noise.get("normalization", "spectral"),
            alpha=_num(img.get("alpha", 1e-5), "imaging.alpha"),
            mode=img.get("mode", "tikhonov_fm"),
            data=img.get("data", "operator"),
            grid=_grid(grid),
            radii=tuple(_num(r, "compare.radii", positive=True)
                        for r in cmp_.get("radii", list(COMPARE_RADII))),
            h_factor=_num(cmp_.get("h_factor", 200.0), "compare.h_factor", positive=True),
            out_dir=str(out.get("dir", "out")),
            formats=tuple(out.get("formats", ["csv", "pgm"])),
        )
        cfg = cls(**kw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        try:
            self.medium
            self.dirs
            self.noise
            self.imaging
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}")
        if self.data not in DATA_READINGS:
            raise ConfigError(f"imaging.data must be one of {DATA_READINGS}")
        if self.mode not in IMAGING_MODES:
            raise ConfigError(f"imaging.mode must be one of {IMAGING_MODES}")
        if self.noise_normalization not in NOISE_NORMALIZATIONS:
            raise ConfigError(f"noise.normalization must be one of {NOISE_NORMALIZATIONS}")
        if not 0 <= self.lmax <= 32:
            raise ConfigError("lmax must lie in [0, 32]")
        if not self.radii or any(not 0 < r <= 1 for r in self.radii):
            raise ConfigError("compare.radii must be a nonempty list in (0, 1]")
        bad = set(self.formats) - {"csv", "pgm"}
        if bad:
            raise ConfigError(f"output.formats: unknown {sorted(bad)}")

    def to_dict(self) -> dict:
        g = asdict(self.grid)
        return {
            "medium": {"kappa": self.kappa, "n_re": self.n_re, "n_im": self.n_im},
            "shape": self.shape.to_dict(),
            "directions": self.directions,
            "lmax": self.lmax,
            "model": self.model,
            "born": {"h": self.born_h},
            "noise": {"delta": self.delta, "seed": self.seed,
                      "normalization": self.noise_normalization},
            "imaging": {"alpha": self.alpha, "mode": self.mode, "data": self.data, "grid": g},
            "compare": {"radii": list(self.radii), "h_factor": self.h_factor},
            "output": {"dir": self.out_dir, "formats": list(self.formats)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _grid(g: dict) -> SamplingGrid:
    try:
        return SamplingGrid(
            xmin=_num(g.get("xmin", -2.0), "grid.xmin"),
            xmax=_num(g.get("xmax", 2.0), "grid.xmax"),
            ymin=_num(g.get("ymin", -2.0), "grid.ymin"),
            ymax=_num(g.get("ymax", 2.0), "grid.ymax"),
            nx=_num(g.get("nx", 200), "grid.nx", integer=True),
            ny=_num(g.get("ny", 200), "grid.ny", integer=True),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"imaging.grid: {exc}") from exc


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return RunConfig.from_dict(d)
