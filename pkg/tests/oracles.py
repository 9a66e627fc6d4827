"""Independent reference computations used by the tests.

Nothing here calls into biharmfm: the cylinder functions are summed from their
power series in mpmath at high working precision, the Born disk integral uses
polar Gauss quadrature, and norms come from power iteration.
"""

import mpmath as mp
import numpy as np

DPS = 80


def _series_j(n, z):
    # n >= 0
    h = z / 2
    term = h**n / mp.factorial(n)
    s = term
    k = 0
    while True:
        k += 1
        term *= -(h * h) / (k * (k + n))
        s += term
        if abs(term) < mp.mpf(10) ** (-DPS + 5) * max(abs(s), 1):
            return s


def _series_y(n, z):
    # integer-order Neumann expansion with digamma coefficients
    h = z / 2
    s1 = mp.mpf(0)
    for k in range(n):
        s1 += mp.factorial(n - k - 1) / mp.factorial(k) * h ** (2 * k - n)
    s2 = mp.mpc(0)
    k = 0
    term = h**n / mp.factorial(n)
    while True:
        s2 += (mp.digamma(k + 1) + mp.digamma(n + k + 1)) * term
        k += 1
        term *= -(h * h) / (k * (k + n))
        if abs(term) * (abs(mp.digamma(k + 1)) + abs(mp.digamma(n + k + 1)) + 1) < \
                mp.mpf(10) ** (-DPS + 5) * max(abs(s2), 1):
            break
    return (-s1 + 2 * mp.log(h) * _series_j(n, z) - s2) / mp.pi


def ref_j(n, z) -> complex:
    with mp.workdps(DPS):
        m = abs(n)
        v = _series_j(m, mp.mpc(z))
        if n < 0 and m % 2:
            v = -v
        return complex(v)


def ref_h(n, z) -> complex:
    with mp.workdps(DPS):
        m = abs(n)
        zz = mp.mpc(z)
        v = _series_j(m, zz) + 1j * _series_y(m, zz)
        if n < 0 and m % 2:
            v = -v
        return complex(v)


def born_disk_polar(eps, center, kappa, n, xhat, d, nr=80, nt=256) -> complex:
    """(kappa^2/2)(n-1) int_disk exp(-i kappa y.(xhat-d)) dy by polar quadrature."""
    q = kappa * (np.asarray(xhat, float) - np.asarray(d, float))
    x, w = np.polynomial.legendre.leggauss(nr)
    r = 0.5 * eps * (x + 1)
    wr = 0.5 * eps * w * r
    t = 2 * np.pi * np.arange(nt) / nt
    Y1 = center[0] + r[:, None] * np.cos(t)[None, :]
    Y2 = center[1] + r[:, None] * np.sin(t)[None, :]
    integrand = np.exp(-1j * (q[0] * Y1 + q[1] * Y2))
    val = (wr[:, None] * integrand).sum() * (2 * np.pi / nt)
    return 0.5 * kappa**2 * (n - 1) * val


def power_norm(A, iters=2000, seed=1) -> float:
    """Largest singular value of A by power iteration on A^H A."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.shape[1]) + 1j * rng.standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = A.conj().T @ (A @ v)
        new = np.linalg.norm(w)
        v = w / new
        if abs(new - lam) <= 1e-15 * new:
            break
        lam = new
    return float(np.sqrt(new))


# 60 (order, argument) samples: real, imaginary and complex arguments,
# both half-planes, small and large modulus
CERT_GRID = [
    (l, z)
    for l in (0, 1, 2, 5, 10, 20)
    for z in (0.3, 2.0, 11.5, 30.0, 4j, 25j, 3 + 2j, -6 + 4j, 15 - 9j, 0.7 + 40j)
]
