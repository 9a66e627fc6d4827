"""Multistatic far-field matrices: assembly, noise, Im(F), error norms, CSV I/O."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

NOISE_NORMALIZATIONS = ("spectral", "entrywise")


@dataclass(frozen=True)
class DirectionSet:
    """N equispaced unit directions, theta_i = 2 pi (i - 1) / N."""

    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 4:
            raise ValueError(f"need an integer N >= 4 directions, got {self.N}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.N) / self.N

    @property
    def vectors(self) -> np.ndarray:
        t = self.angles
        return np.column_stack([np.cos(t), np.sin(t)])


@dataclass(frozen=True)
class FarFieldMatrix:
    directions: DirectionSet
    entries: np.ndarray = field(repr=False)
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        F = np.array(self.entries, dtype=complex)
        N = self.directions.N
        if F.shape != (N, N):
            raise ValueError(f"far-field matrix has shape {F.shape}, expected {(N, N)}")
        F.setflags(write=False)
        object.__setattr__(self, "entries", F)
        object.__setattr__(self, "provenance", dict(self.provenance))

    @property
    def N(self) -> int:
        return self.directions.N


@dataclass(frozen=True)
class NoiseSpec:
    delta: float = 0.0
    seed: int = 0
    normalization: str = "spectral"

    def __post_init__(self):
        if not (0.0 <= self.delta < 1.0):
            raise ValueError(f"noise level must lie in [0, 1), got {self.delta}")
        if int(self.seed) != self.seed:
            raise ValueError("seed must be an integer")
        if self.normalization not in NOISE_NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NOISE_NORMALIZATIONS}")


def assemble(farfield: Callable, dirs: DirectionSet, provenance: dict | None = None) -> FarFieldMatrix:
    """Entry (i, j) = farfield(xhat_i, d_j), row-major evaluation order."""
    X = dirs.vectors
    F = np.empty((dirs.N, dirs.N), dtype=complex)
    for i in range(dirs.N):
        for j in range(dirs.N):
            F[i, j] = farfield(X[i], X[j])
    return FarFieldMatrix(dirs, F, provenance or {})


def noise_matrix(N: int, seed: int, normalization: str = "spectral") -> np.ndarray:
    """The normalised random matrix R of the multiplicative noise model.

    Draw order (bit-exact contract): a NumPy PCG64 generator seeded with
    ``seed``; N*N real parts uniform on [-1, 1) in row-major order, then N*N
    imaginary parts likewise.  R is then divided by its spectral norm
    (``normalization="spectral"``) or by its largest entry modulus
    (``"entrywise"``).
    """
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    re = rng.uniform(-1.0, 1.0, size=(N, N))
    im = rng.uniform(-1.0, 1.0, size=(N, N))
    R = re + 1j * im
    if normalization == "spectral":
        scale = np.linalg.norm(R, 2)
    elif normalization == "entrywise":
        scale = np.abs(R).max()
    else:
        raise ValueError(normalization)
    return R / scale


def add_noise(F: FarFieldMatrix, spec: NoiseSpec) -> FarFieldMatrix:
    """F_delta(i, j) = F(i, j) (1 + delta R(i, j))."""
    prov = dict(F.provenance)
    prov["noise"] = {"delta": spec.delta, "seed": spec.seed, "normalization": spec.normalization}
    if spec.delta == 0:
        return FarFieldMatrix(F.directions, F.entries.copy(), prov)
    R = noise_matrix(F.N, spec.seed, spec.normalization)
    return FarFieldMatrix(F.directions, F.entries * (1.0 + spec.delta * R), prov)


def imag_part_operator(F) -> np.ndarray:
    """(F - F^*) / (2i), symmetrised so the result is Hermitian bit for bit."""
    A = np.asarray(F.entries if isinstance(F, FarFieldMatrix) else F, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("Im(F) needs a square matrix")
    B = (A - A.conj().T) / 2j
    return 0.5 * (B + B.conj().T)


def entrywise_imag_operator(F) -> np.ndarray:
    """Alternative data reading: entrywise Im(u_inf), symmetrised."""
    A = np.asarray(F.entries if isinstance(F, FarFieldMatrix) else F, dtype=complex)
    B = A.imag.astype(complex)
    return 0.5 * (B + B.conj().T)


def matrix_error(A, B, convention: str = "entrywise_max") -> float:
    """entrywise_max = max |A - B|;  induced_inf = max_i sum_j |A - B|."""
    a = np.asarray(A.entries if isinstance(A, FarFieldMatrix) else A)
    b = np.asarray(B.entries if isinstance(B, FarFieldMatrix) else B)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    D = np.abs(a - b)
    if convention == "entrywise_max":
        return float(D.max())
    if convention == "induced_inf":
        return float(D.sum(axis=1).max())
    raise ValueError(f"unknown norm convention {convention!r}")


# --------------------------------------------------------------------------
# CSV
# --------------------------------------------------------------------------

CSV_HEADER = ["N", "kappa", "n_re", "n_im", "model", "delta", "seed"]


def _fmt(x) -> str:
    # repr gives the shortest round-tripping decimal, independent of locale
    return repr(float(x))


def farfield_to_csv(F: FarFieldMatrix) -> str:
    """Serialise as: header names, header values, ``i,j,re,im`` rows (1-based)."""
    p = F.provenance
    noise = p.get("noise") or {}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerow([F.N, _fmt(p.get("kappa", math.nan)), _fmt(p.get("n_re", math.nan)),
                _fmt(p.get("n_im", math.nan)), p.get("model", ""),
                _fmt(noise.get("delta", 0.0)), noise.get("seed", "")])
    w.writerow(["i", "j", "re", "im"])
    E = F.entries
    for i in range(F.N):
        for j in range(F.N):
            w.writerow([i + 1, j + 1, _fmt(E[i, j].real), _fmt(E[i, j].imag)])
    return buf.getvalue()


def farfield_from_csv(text: str) -> FarFieldMatrix:
    rows = list(csv.reader(io.StringIO(text)))
    if len(rows) < 3 or rows[0] != CSV_HEADER or rows[2] != ["i", "j", "re", "im"]:
        raise ValueError("not a far-field CSV (bad header)")
    head = dict(zip(CSV_HEADER, rows[1]))
    N = int(head["N"])
    body = rows[3:]
    if len(body) != N * N:
        raise ValueError(f"expected {N * N} entries, found {len(body)}")
    F = np.full((N, N), np.nan + 0j)
    for r in body:
        i, j = int(r[0]) - 1, int(r[1]) - 1
        F[i, j] = complex(float(r[2]), float(r[3]))
    if np.isnan(F).any():
        raise ValueError("far-field CSV is missing entries")
    prov = {"kappa": float(head["kappa"]), "n_re": float(head["n_re"]),
            "n_im": float(head["n_im"]), "model": head["model"]}
    if float(head["delta"]) or head["seed"] != "":
        prov["noise"] = {"delta": float(head["delta"]),
                         "seed": int(head["seed"]) if head["seed"] != "" else None}
    return FarFieldMatrix(DirectionSet(N), F, prov)


def with_provenance(F: FarFieldMatrix, **extra) -> FarFieldMatrix:
    prov = dict(F.provenance)
    prov.update(extra)
    return replace(F, provenance=prov)
