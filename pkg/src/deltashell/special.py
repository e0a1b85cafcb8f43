"""Bessel functions of order 0 and 1, the Hankel function H0(1) and Lambert W0.

Everything here is a pure function of real arguments in double precision.
The evaluation regimes are

* J, Y: ascending series for ``x <= 5``, Miller backward recurrence with the
  Neumann series for Y on ``5 < x < 25``, Hankel asymptotic expansion above.
* I: ascending series for ``x <= 30`` (all terms positive), asymptotic above.
* K: logarithmic series for ``x <= 2``, trapezoidal rule on
  ``K_n(x) = int_0^inf exp(-x cosh t) cosh(n t) dt`` above.

The scalar functions (``j0``, ``k0e`` ...) are what the solvers call.  The
``bessel_*`` wrappers return a :class:`SpecialValue` carrying an error bound.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "EULER_GAMMA",
    "DomainError",
    "SpecialValue",
    "bessel_i",
    "bessel_j",
    "bessel_k",
    "bessel_y",
    "hankel1_0",
    "lambert_w0",
    "lambert_w0_branch_offset",
    "lambert_branch_gap",
    "hankel1_0_asymptotic",
    "i0", "i1", "i0e", "i1e",
    "j0", "j1", "y0", "y1",
    "k0", "k1", "k0e", "k1e",
    "i0k0",
]

EULER_GAMMA = 0.57721566490153286061
_EPS = 2.220446049250313e-16
_TWO_OVER_PI = 2.0 / math.pi
_SQRT_HALF = math.sqrt(0.5)

_JY_SERIES_MAX = 5.0
_JY_ASYMPTOTIC_MIN = 25.0
_I_ASYMPTOTIC_MIN = 30.0
_K_SERIES_MAX = 2.0
_I_OVERFLOW = 700.0


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


@dataclass(frozen=True)
class SpecialValue:
    value: float | complex
    abs_error_bound: float


def _check_finite(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"argument must be finite, got {x!r}")
    return x


def _check_order(order: int) -> int:
    if order not in (0, 1):
        raise DomainError(f"only orders 0 and 1 are supported, got {order!r}")
    return order


# --------------------------------------------------------------------------
# J and Y
# --------------------------------------------------------------------------

def _j_series(n: int, x: float) -> tuple[float, float]:
    """Ascending series for J_n; returns (value, sum of |terms|)."""
    q = -0.25 * x * x
    term = (0.5 * x) ** n / math.factorial(n)
    total = term
    scale = abs(term)
    m = 0
    while True:
        m += 1
        term *= q / (m * (m + n))
        total += term
        scale += abs(term)
        if abs(term) <= 1e-17 * scale:
            return total, scale


def _y_series(n: int, x: float, jn: float) -> float:
    # Y_n = (2/pi) ln(x/2) J_n  - (1/pi) (x/2)^n sum (psi(k+1)+psi(n+k+1)) (-x^2/4)^k / (k!(n+k)!)
    # minus the finite sum -(2/(pi x)) for n = 1.
    q = -0.25 * x * x
    half = 0.5 * x
    harm_k = 0.0            # H_k
    harm_nk = sum(1.0 / i for i in range(1, n + 1))  # H_{n+k}
    coef = half ** n / math.factorial(n)
    total = coef * (harm_k + harm_nk - 2.0 * EULER_GAMMA)
    k = 0
    while True:
        k += 1
        harm_k += 1.0 / k
        harm_nk += 1.0 / (k + n)
        coef *= q / (k * (k + n))
        term = coef * (harm_k + harm_nk - 2.0 * EULER_GAMMA)
        total += term
        if abs(term) <= 1e-17 * abs(total) and abs(coef) < 1e-17:
            break
        if k > 200:
            break
    value = _TWO_OVER_PI * math.log(half) * jn - total / math.pi
    if n == 1:
        value -= _TWO_OVER_PI / x
    return value


def _miller(x: float) -> tuple[float, float, float, float]:
    """J0, J1, Y0, Y1 by backward recurrence normalised with J0 + 2 sum J_2k = 1."""
    top = int(x) + 20 + int(math.sqrt(60.0 * x))
    top += top % 2
    two_over_x = 2.0 / x
    j_next, j_cur = 0.0, 1e-300        # J_{top+1}, J_top (unnormalised)
    even_sum = j_cur                   # sum of J_{2k}, k >= 1
    y0_sum = j_cur * (-1) ** (top // 2) / (top // 2)   # sum (-1)^k J_2k / k
    y1_sum = 0.0                       # sum_{k>=1} (-1)^(k+1) (2k+1) J_{2k+1} / (k(k+1))
    for j in range(top, 0, -1):
        j_prev = j * two_over_x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        idx = j - 1
        if idx >= 2 and idx % 2 == 0:
            kk = idx // 2
            even_sum += j_cur
            y0_sum += j_cur * (1.0 if kk % 2 == 0 else -1.0) / kk
        elif idx >= 3:
            kk = (idx - 1) // 2
            y1_sum += j_cur * (1.0 if kk % 2 else -1.0) * idx / (kk * (kk + 1))
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            even_sum *= 1e-250
            y0_sum *= 1e-250
            y1_sum *= 1e-250
    norm = j_cur + 2.0 * even_sum
    jv0 = j_cur / norm
    jv1 = j_next / norm
    log_term = math.log(0.5 * x) + EULER_GAMMA
    yv0 = _TWO_OVER_PI * (log_term * jv0 - 2.0 * y0_sum / norm)
    yv1 = _TWO_OVER_PI * (-jv0 / x + (log_term - 1.0) * jv1 + y1_sum / norm)
    return jv0, jv1, yv0, yv1


def _hankel_pq(n: int, x: float) -> tuple[float, float]:
    mu = 4.0 * n * n
    p_sum, q_sum = 1.0, 0.0
    term = 1.0
    k = 0
    prev = math.inf
    while True:
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(term) >= prev or abs(term) < 1e-17:
            break
        prev = abs(term)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            q_sum += sign * term
        else:
            p_sum += sign * term
    return p_sum, q_sum


def _jy_asymptotic(n: int, x: float) -> tuple[float, float]:
    p, q = _hankel_pq(n, x)
    c, s = math.cos(x), math.sin(x)
    if n == 0:
        cos_chi, sin_chi = (c + s) * _SQRT_HALF, (s - c) * _SQRT_HALF
    else:
        cos_chi, sin_chi = (s - c) * _SQRT_HALF, -(s + c) * _SQRT_HALF
    amp = math.sqrt(_TWO_OVER_PI / x)
    return amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi)


def j0(x: float) -> float:
    x = abs(x)
    if x <= _JY_SERIES_MAX:
        return _j_series(0, x)[0]
    if x < _JY_ASYMPTOTIC_MIN:
        return _miller(x)[0]
    return _jy_asymptotic(0, x)[0]


def j1(x: float) -> float:
    sign = -1.0 if x < 0 else 1.0
    x = abs(x)
    if x <= _JY_SERIES_MAX:
        return sign * _j_series(1, x)[0]
    if x < _JY_ASYMPTOTIC_MIN:
        return sign * _miller(x)[1]
    return sign * _jy_asymptotic(1, x)[0]


def y0(x: float) -> float:
    if x <= _JY_SERIES_MAX:
        return _y_series(0, x, _j_series(0, x)[0])
    if x < _JY_ASYMPTOTIC_MIN:
        return _miller(x)[2]
    return _jy_asymptotic(0, x)[1]


def y1(x: float) -> float:
    if x <= _JY_SERIES_MAX:
        return _y_series(1, x, _j_series(1, x)[0])
    if x < _JY_ASYMPTOTIC_MIN:
        return _miller(x)[3]
    return _jy_asymptotic(1, x)[1]


# --------------------------------------------------------------------------
# I and K
# --------------------------------------------------------------------------

def _i_series(n: int, x: float) -> float:
    q = 0.25 * x * x
    term = (0.5 * x) ** n / math.factorial(n)
    total = term
    m = 0
    while term > 1e-17 * total:
        m += 1
        term *= q / (m * (m + n))
        total += term
    return total


def _i_asymptotic_scaled(n: int, x: float) -> float:
    # e^{-x} I_n(x) ~ (2 pi x)^{-1/2} sum (-1)^k a_k(n) / x^k
    mu = 4.0 * n * n
    total, term = 1.0, 1.0
    k = 0
    while True:
        k += 1
        term *= -(mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total / math.sqrt(2.0 * math.pi * x)


def i0e(x: float) -> float:
    """Exponentially scaled I0: exp(-|x|) I0(x)."""
    x = abs(x)
    if x <= _I_ASYMPTOTIC_MIN:
        return _i_series(0, x) * math.exp(-x)
    return _i_asymptotic_scaled(0, x)


def i1e(x: float) -> float:
    sign = -1.0 if x < 0 else 1.0
    x = abs(x)
    if x <= _I_ASYMPTOTIC_MIN:
        return sign * _i_series(1, x) * math.exp(-x)
    return sign * _i_asymptotic_scaled(1, x)


def i0(x: float) -> float:
    if abs(x) > _I_OVERFLOW:
        raise OverflowError(f"I0({x}) overflows; use i0e")
    x = abs(x)
    return _i_series(0, x) if x <= _I_ASYMPTOTIC_MIN else _i_asymptotic_scaled(0, x) * math.exp(x)


def i1(x: float) -> float:
    if abs(x) > _I_OVERFLOW:
        raise OverflowError(f"I1({x}) overflows; use i1e")
    if abs(x) <= _I_ASYMPTOTIC_MIN:
        return math.copysign(_i_series(1, abs(x)), x)
    return i1e(x) * math.exp(abs(x))


def _k_series(n: int, x: float) -> float:
    log_half = math.log(0.5 * x)
    q = 0.25 * x * x
    if n == 0:
        # K0 = -(ln(x/2) + gamma) I0 + sum H_m (x^2/4)^m / (m!)^2
        coef, harm, total = 1.0, 0.0, 0.0
        m = 0
        while True:
            m += 1
            coef *= q / (m * m)
            harm += 1.0 / m
            term = coef * harm
            total += term
            if term <= 1e-17 * abs(total):
                break
        return -(log_half + EULER_GAMMA) * _i_series(0, x) + total
    # K1 = 1/x + ln(x/2) I1 - (x/4) sum (psi(k+1) + psi(k+2)) (x^2/4)^k / (k!(k+1)!)
    coef = 1.0
    harm_k, harm_k1 = 0.0, 1.0
    total = coef * (harm_k + harm_k1 - 2.0 * EULER_GAMMA)
    k = 0
    while True:
        k += 1
        coef *= q / (k * (k + 1))
        harm_k += 1.0 / k
        harm_k1 += 1.0 / (k + 1)
        term = coef * (harm_k + harm_k1 - 2.0 * EULER_GAMMA)
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    return 1.0 / x + log_half * _i_series(1, x) - 0.25 * x * total


def _k_scaled_trapezoid(n: int, x: float) -> float:
    # exp(x) K_n(x) = int_0^inf exp(-2 x sinh^2(t/2)) cosh(n t) dt; the integrand is
    # analytic in a strip, so the trapezoidal rule converges geometrically.
    # integrand width ~ 1/sqrt(x); keep ~2 nodes per width
    h = min(0.1, 0.5 / math.sqrt(x))
    total = 0.5
    t = 0.0
    while True:
        t += h
        s = math.sinh(0.5 * t)
        term = math.exp(-2.0 * x * s * s)
        if n:
            term *= math.cosh(t)
        total += term
        if term < 1e-18 * total:
            return h * total


def k0e(x: float) -> float:
    """Exponentially scaled K0: exp(x) K0(x)."""
    if x <= _K_SERIES_MAX:
        return _k_series(0, x) * math.exp(x)
    return _k_scaled_trapezoid(0, x)


def k1e(x: float) -> float:
    if x <= _K_SERIES_MAX:
        return _k_series(1, x) * math.exp(x)
    return _k_scaled_trapezoid(1, x)


def k0(x: float) -> float:
    if x <= _K_SERIES_MAX:
        return _k_series(0, x)
    return _k_scaled_trapezoid(0, x) * math.exp(-x)


def k1(x: float) -> float:
    if x <= _K_SERIES_MAX:
        return _k_series(1, x)
    return _k_scaled_trapezoid(1, x) * math.exp(-x)


def i0k0(x: float) -> float:
    """I0(x) K0(x) without overflow for large x."""
    return i0e(x) * k0e(x)


# --------------------------------------------------------------------------
# public wrappers
# --------------------------------------------------------------------------

def _bound(value: float | complex, rel: float = 16.0) -> float:
    return rel * _EPS * max(1.0, abs(value))


def bessel_j(order: int, x: float) -> SpecialValue:
    """Bessel function of the first kind, J_order(x), for x >= 0."""
    _check_order(order)
    x = _check_finite(x)
    if x < 0:
        raise DomainError(f"bessel_j requires x >= 0, got {x}")
    if order == 0 and x <= _JY_SERIES_MAX:
        value, scale = _j_series(0, x)
        return SpecialValue(value, max(4.0 * _EPS * scale, _bound(value)))
    value = j0(x) if order == 0 else j1(x)
    return SpecialValue(value, _bound(value, 32.0))


def bessel_y(order: int, x: float) -> SpecialValue:
    """Bessel function of the second kind, Y_order(x), for x > 0."""
    _check_order(order)
    x = _check_finite(x)
    if x <= 0:
        raise DomainError(f"bessel_y requires x > 0, got {x}")
    value = y0(x) if order == 0 else y1(x)
    return SpecialValue(value, _bound(value, 64.0))


def bessel_i(order: int, x: float) -> SpecialValue:
    """Modified Bessel function of the first kind; raises OverflowError above x = 700."""
    _check_order(order)
    x = _check_finite(x)
    if x < 0:
        raise DomainError(f"bessel_i requires x >= 0, got {x}")
    value = i0(x) if order == 0 else i1(x)
    return SpecialValue(value, _bound(value))


def bessel_k(order: int, x: float) -> SpecialValue:
    """Modified Bessel function of the second kind, K_order(x), for x > 0."""
    _check_order(order)
    x = _check_finite(x)
    if x <= 0:
        raise DomainError(f"bessel_k requires x > 0, got {x}")
    value = k0(x) if order == 0 else k1(x)
    return SpecialValue(value, _bound(value, 32.0))


def hankel1_0(x: float) -> SpecialValue:
    """H0(1)(x) = J0(x) + i Y0(x) on the positive real axis."""
    x = _check_finite(x)
    if x <= 0:
        raise DomainError(f"hankel1_0 requires x > 0, got {x}")
    value = complex(j0(x), y0(x))
    return SpecialValue(value, _bound(value, 64.0))


_INV_E = math.exp(-1.0)
_BRANCH_SLACK = 1e-14


def lambert_w0(x: float) -> SpecialValue:
    """Principal branch of the Lambert W function, ``w exp(w) = x`` with ``w >= -1``.

    A starting value from the branch-point series, the ``log1p`` form or the
    ``log x - log log x`` asymptote is refined by Halley's method inside a
    bracket that is bisected whenever a step leaves it.  Arguments up to
    ``1e-14`` below ``-1/e`` are clamped to the branch point.
    """
    x = _check_finite(x)
    if x < -_INV_E - _BRANCH_SLACK:
        raise DomainError(f"lambert_w0 requires x >= -1/e, got {x}")
    if x <= -_INV_E:
        return SpecialValue(-1.0, 0.0)
    if x == 0.0:
        return SpecialValue(0.0, 0.0)

    if x < 0:
        lo, hi = -1.0, 0.0
    else:
        lo, hi = 0.0, max(1.0, math.log(x) + 1.0) if x > math.e else 1.0

    if x < -0.25:
        p = math.sqrt(max(0.0, 2.0 * (math.e * x + 1.0)))
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0))
    elif x < 3.0:
        lp = math.log1p(x)
        w = lp * (1.0 - math.log1p(lp) / (2.0 + lp))
    else:
        l1 = math.log(x)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    w = min(max(w, lo), hi)

    for _ in range(64):
        ew = math.exp(w)
        f = w * ew - x
        if f == 0.0:
            break
        if f < 0:
            lo = w
        else:
            hi = w
        wp1 = w + 1.0
        if wp1 == 0.0:
            w_new = 0.5 * (lo + hi)
        else:
            denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
            w_new = w - f / denom
            if not lo <= w_new <= hi:
                w_new = 0.5 * (lo + hi)
        if abs(w_new - w) <= 2.0 * _EPS * max(1.0, abs(w_new)):
            w = w_new
            break
        w = w_new
    residual = abs(w * math.exp(w) - x)
    return SpecialValue(w, max(_bound(w, 4.0), residual))


def lambert_branch_gap(v: float) -> float:
    """``1 + (v - 1) exp(v)``, i.e. ``1 + e x`` for ``x = w exp(w)``, ``w = v - 1``.

    Summed as a power series for small ``|v|`` so the result keeps full
    relative precision where the direct form cancels.
    """
    if abs(v) > 0.5:
        return 1.0 + (v - 1.0) * math.exp(v)
    total = 0.0
    term = v  # v**n / n!
    for n in range(2, 40):
        term *= v / n
        step = (n - 1) * term
        total += step
        if abs(step) <= _EPS * abs(total):
            break
    return total


def lambert_w0_branch_offset(gap: float) -> float:
    """``1 + W0(x)`` given ``gap = 1 + e x >= 0``.

    Use when ``x`` is within rounding of ``-1/e``: passing the gap instead of
    ``x`` keeps the offset accurate to full relative precision.
    """
    gap = _check_finite(gap)
    if gap < 0:
        raise DomainError(f"branch gap must be nonnegative, got {gap}")
    if gap == 0.0:
        return 0.0
    v = math.sqrt(2.0 * gap)
    if gap > 0.5:
        return 1.0 + lambert_w0((gap - 1.0) * _INV_E).value
    for _ in range(50):
        # d/dv [1 + (v-1) e^v] = v e^v
        step = (lambert_branch_gap(v) - gap) / (v * math.exp(v))
        v -= step
        if abs(step) <= _EPS * v:
            break
    return v


def hankel1_0_asymptotic(x: float) -> complex:
    """Leading large-argument form sqrt(2/(pi x)) exp(i(x - pi/4))."""
    return math.sqrt(_TWO_OVER_PI / x) * cmath.exp(1j * (x - 0.25 * math.pi))
