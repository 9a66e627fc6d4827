"""Integer-order cylinder functions of complex argument.

Bessel functions of the first kind and Hankel functions of the first kind,
plus their derivatives, on the desk-scale domain |order| <= 32, |z| <= 50.

Strategy
--------
* J: ascending power series (exactly rounded sums via ``math.fsum``) for
  |z| <= 12, Miller downward recurrence above that.  The Miller sequence is
  normalised with the generating-function identity
  ``exp(-+iz) = J_0 + 2 sum (-+i)^k J_k`` choosing the sign that makes the
  left side large, so there is no cancellation for complex z.
* Y_0, Y_1: logarithmic/digamma series for |z| <= 12, Neumann series built
  from the Miller J sequence above that; higher orders by upward recurrence.
* H^(1) = J + iY near the real axis.  For Im z > 1 (|z| >= 2) H^(1) is
  exponentially smaller than J and Y, so H^(1)_0 is recovered from the
  continued fraction for H'/H and the Wronskian, then recurred upward.  For
  Im z < -1 we use H^(1) = 2J - conj(H^(1)(conj z)) so Y is never recurred
  through its decaying component.
"""

from __future__ import annotations

import cmath
import math

MAX_ORDER = 32
MAX_ABS_Z = 50.0
MIN_ABS_Z_HANKEL = 1e-12
SERIES_RADIUS = 12.0

EULER_GAMMA = 0.57721566490153286060651209
_TWO_OVER_PI = 2.0 / math.pi

# upper half-plane switch to the continued-fraction route for H^(1)
_CF_MIN_IMAG = 1.0
_CF_MIN_ABS = 2.0


class SpecialFunctionDomainError(ValueError):
    """Order or argument outside the supported range."""


def _check(order: int, z: complex, *, hankel: bool = False) -> None:
    if int(order) != order:
        raise SpecialFunctionDomainError(f"order must be an integer, got {order!r}")
    if abs(order) > MAX_ORDER:
        raise SpecialFunctionDomainError(f"|order| = {abs(order)} exceeds {MAX_ORDER}")
    if not (cmath.isfinite(z)):
        raise SpecialFunctionDomainError(f"non-finite argument {z!r}")
    if abs(z) > MAX_ABS_Z:
        raise SpecialFunctionDomainError(f"|z| = {abs(z):.6g} exceeds {MAX_ABS_Z}")
    if hankel and abs(z) < MIN_ABS_Z_HANKEL:
        raise SpecialFunctionDomainError(
            f"|z| = {abs(z):.3g} is inside the logarithmic singularity of H^(1)"
        )


def _finite(value: complex, what: str) -> complex:
    if not cmath.isfinite(value):
        raise SpecialFunctionDomainError(f"{what} overflows double precision")
    return value


def _csum(terms) -> complex:
    terms = list(terms)
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


# --------------------------------------------------------------------------
# J
# --------------------------------------------------------------------------

def _j_series(order: int, z: complex) -> complex:
    """J_order(z) for order >= 0 from the ascending series."""
    if z == 0:
        return 1.0 + 0j if order == 0 else 0j
    half = z / 2.0
    w = -half * half
    term = 1.0 + 0j
    for k in range(1, order + 1):
        term *= half / k
    terms = [term]
    k = 0
    while True:
        k += 1
        term = term * w / (k * (k + order))
        terms.append(term)
        if abs(term) < 1e-18 * abs(terms[0]) and k > abs(w):
            break
        if k > 400:
            break
    return _csum(terms)


def _miller_start(nmax: int, absz: float) -> int:
    m = max(nmax, int(absz)) + 30 + int(math.sqrt(40.0 * max(nmax, absz)))
    return m + (m % 2)


def _j_miller(nmax: int, z: complex) -> list[complex]:
    """J_0..J_nmax at z by normalised downward recurrence (z != 0)."""
    m = _miller_start(nmax, abs(z))
    two_over_z = 2.0 / z
    vals = [0j] * (m + 2)
    vals[m + 1] = 0j
    vals[m] = 1e-30 + 0j
    for k in range(m, 0, -1):
        vals[k - 1] = k * two_over_z * vals[k] - vals[k + 1]
        if abs(vals[k - 1]) > 1e250:
            for i in range(k - 1, m + 2):
                vals[i] *= 1e-250
    # exp(s*i*z) = J_0 + 2 sum_k (s*i)^k J_k, pick s so that |exp(s*i*z)| >= 1
    s = 1j if z.imag < 0 else -1j
    norm_terms = [vals[0]]
    phase = 1.0 + 0j
    for k in range(1, m + 1):
        phase *= s
        norm_terms.append(2.0 * phase * vals[k])
    scale = cmath.exp(s * z) / _csum(norm_terms)
    return [v * scale for v in vals[: m + 1]]


def _j_upto(nmax: int, z: complex) -> list[complex]:
    """J_0..J_nmax (nmax may exceed MAX_ORDER by one for derivatives)."""
    if abs(z) <= SERIES_RADIUS:
        return [_j_series(k, z) for k in range(nmax + 1)]
    return _j_miller(nmax, z)[: nmax + 1]


def _j_any(order: int, z: complex) -> complex:
    n = abs(order)
    if abs(z) <= SERIES_RADIUS:
        val = _j_series(n, z)
    else:
        val = _j_miller(n, z)[n]
    if order < 0 and n % 2:
        val = -val
    return val


def bessel_j(order: int, z: complex) -> complex:
    """Bessel function of the first kind J_order(z)."""
    z = complex(z)
    _check(order, z)
    return _finite(_j_any(int(order), z), "J")


def bessel_j_prime(order: int, z: complex) -> complex:
    """Derivative dJ_order/dz, via (J_{order-1} - J_{order+1}) / 2."""
    z = complex(z)
    _check(order, z)
    order = int(order)
    if order == 0:
        return _finite(-_j_any(1, z), "J'")
    return _finite(0.5 * (_j_any(order - 1, z) - _j_any(order + 1, z)), "J'")


# --------------------------------------------------------------------------
# Y and H^(1)
# --------------------------------------------------------------------------

def _digamma_int(m: int) -> float:
    # psi(m) = -gamma + H_{m-1}
    return -EULER_GAMMA + math.fsum(1.0 / k for k in range(1, m))


def _y_series(order: int, z: complex) -> complex:
    """Y_order(z), order in {0, 1}, from the log/digamma series."""
    half = z / 2.0
    w = -half * half
    log_half = cmath.log(half)
    j = _j_series(order, z)
    head = 0j
    if order == 1:
        head = -1.0 / (math.pi * half)
    term = half**order / math.factorial(order)
    psi_k, psi_nk = _digamma_int(1), _digamma_int(order + 1)
    terms = [(psi_k + psi_nk) * term]
    k = 0
    while True:
        k += 1
        term = term * w / (k * (k + order))
        psi_k += 1.0 / k
        psi_nk += 1.0 / (k + order)
        terms.append((psi_k + psi_nk) * term)
        if abs(term) * (abs(psi_k) + abs(psi_nk)) < 1e-18 * abs(terms[0]) and k > abs(w):
            break
        if k > 400:
            break
    return head + _TWO_OVER_PI * log_half * j - _csum(terms) / math.pi


def _y01_neumann(z: complex) -> tuple[complex, complex]:
    """Y_0, Y_1 from Neumann series over the Miller J sequence."""
    js = _j_miller(0, z)
    m = len(js) - 1
    lg = cmath.log(z / 2.0) + EULER_GAMMA
    s0 = []
    s1 = []
    for k in range(1, m // 2):
        sign = -1.0 if k % 2 else 1.0
        s0.append(sign * js[2 * k] / k)
        s1.append(sign * (js[2 * k - 1] - js[2 * k + 1]) / k)
    y0 = _TWO_OVER_PI * lg * js[0] - 2.0 * _TWO_OVER_PI * _csum(s0)
    y1 = _TWO_OVER_PI * (lg * js[1] - js[0] / z + _csum(s1))
    return y0, y1


def _y01(z: complex) -> tuple[complex, complex]:
    if abs(z) <= SERIES_RADIUS:
        return _y_series(0, z), _y_series(1, z)
    return _y01_neumann(z)


def _upward(c0: complex, c1: complex, nmax: int, z: complex) -> list[complex]:
    out = [c0, c1]
    two_over_z = 2.0 / z
    for k in range(1, nmax):
        out.append(k * two_over_z * out[k] - out[k - 1])
    return out[: nmax + 1]


def _h_ratio_cf(z: complex) -> complex:
    """H_0'(z)/H_0(z) by modified Lentz on the Steed/Temme continued fraction.

    p + iq = -1/(2z) + i + (i/z) * a_1/(b_1 + a_2/(b_2 + ...)),
    a_k = ((2k-1)/2)^2, b_k = 2(z + k i).  Used for Re z >= 0, Im z > 0.
    """
    tiny = 1e-300
    f = tiny
    c = f
    d = 0j
    for k in range(1, 2000):
        a = ((2 * k - 1) / 2.0) ** 2
        b = 2.0 * (z + 1j * k)
        d = b + a * d
        if d == 0:
            d = tiny
        c = b + a / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    else:  # pragma: no cover - convergence is fast for |z| >= 2
        raise SpecialFunctionDomainError(f"continued fraction did not converge at z={z}")
    return -1.0 / (2.0 * z) + 1j + (1j / z) * f


def _h01_upper(z: complex) -> tuple[complex, complex]:
    """H^(1)_0, H^(1)_1 for Re z >= 0, Im z > 0 via CF ratio + Wronskian."""
    j0 = _j_any(0, z)
    j1 = _j_any(1, z)
    r = _h_ratio_cf(z)
    # J H' - J' H = 2i/(pi z) with H' = r H and J_0' = -J_1
    h0 = 2j / (math.pi * z * (j0 * r + j1))
    h1 = -r * h0
    return h0, h1


def _h_upper_upto(nmax: int, z: complex) -> list[complex]:
    if z.real >= 0:
        h0, h1 = _h01_upper(z)
    else:
        # H_l(z) = -(-1)^l conj(H_l(-conj z)) for z in the second quadrant
        g0, g1 = _h01_upper(-z.conjugate())
        h0, h1 = -g0.conjugate(), g1.conjugate()
    return _upward(h0, h1, nmax, z)


def _h_upto(nmax: int, z: complex) -> list[complex]:
    """H^(1)_0..H^(1)_nmax at z (z != 0, principal branch)."""
    nmax = max(nmax, 1)
    if abs(z) >= _CF_MIN_ABS and z.imag > _CF_MIN_IMAG:
        return _h_upper_upto(nmax, z)
    if abs(z) >= _CF_MIN_ABS and z.imag < -_CF_MIN_IMAG:
        # H^(1) = 2J - H^(2), H^(2)(z) = conj(H^(1)(conj z)); avoids
        # recurring Y upward through its decaying component
        j = _j_upto(nmax, z)
        h2 = _h_upper_upto(nmax, z.conjugate())
        return [2.0 * j[k] - h2[k].conjugate() for k in range(nmax + 1)]
    j = _j_upto(nmax, z)
    y0, y1 = _y01(z)
    y = _upward(y0, y1, nmax, z)
    return [j[k] + 1j * y[k] for k in range(nmax + 1)]


def _h_any(order: int, z: complex) -> complex:
    n = abs(order)
    val = _h_upto(n, z)[n]
    if order < 0 and n % 2:
        val = -val
    return val


def bessel_y(order: int, z: complex) -> complex:
    """Bessel function of the second kind Y_order(z) (principal branch)."""
    z = complex(z)
    _check(order, z, hankel=True)
    n = abs(int(order))
    y0, y1 = _y01(z)
    val = _upward(y0, y1, max(n, 1), z)[n]
    if order < 0 and n % 2:
        val = -val
    return _finite(val, "Y")


def hankel1(order: int, z: complex) -> complex:
    """Hankel function of the first kind H^(1)_order(z) = J + iY."""
    z = complex(z)
    _check(order, z, hankel=True)
    return _finite(_h_any(int(order), z), "H^(1)")


def hankel1_prime(order: int, z: complex) -> complex:
    """Derivative of H^(1)_order at z, via (H_{order-1} - H_{order+1}) / 2."""
    z = complex(z)
    _check(order, z, hankel=True)
    order = int(order)
    if order == 0:
        return _finite(-_h_any(1, z), "H^(1)'")
    return _finite(0.5 * (_h_any(order - 1, z) - _h_any(order + 1, z)), "H^(1)'")


def cylinder_values(order: int, z: complex) -> dict[str, complex]:
    """J, J', H, H' at one (order, z) sharing a single evaluation pass.

    Convenience for the modal solver; equivalent to the four public calls.
    """
    z = complex(z)
    _check(order, z, hankel=True)
    n = abs(int(order))
    js = _j_upto(n + 1, z)
    hs = _h_upto(n + 1, z)
    if n == 0:
        jp, hp = -js[1], -hs[1]
    else:
        jp = 0.5 * (js[n - 1] - js[n + 1])
        hp = 0.5 * (hs[n - 1] - hs[n + 1])
    out = {"J": js[n], "Jp": jp, "H": hs[n], "Hp": hp}
    if order < 0 and n % 2:
        out = {k: -v for k, v in out.items()}
    for k, v in out.items():
        _finite(v, k)
    return out
