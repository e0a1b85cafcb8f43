"""Quadrature and bracketed root finding.

All integrators return a :class:`QuadratureResult`; failures raise
:class:`IntegrationError` subclasses that carry the best estimate reached.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

__all__ = [
    "QuadratureResult",
    "RootResult",
    "IntegrationError",
    "BudgetExceededError",
    "NonFiniteSampleError",
    "NonConvergenceError",
    "RootFindingError",
    "NoSignChangeError",
    "integrate_adaptive",
    "integrate_panels",
    "integrate_semi_infinite",
    "integrate_principal_value",
    "find_root_bracketed",
]

Func = Callable[[float], float]

DEFAULT_TOL = 1e-8
DEFAULT_BUDGET = 1_000_000
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int
    bracket: tuple[float, float]


class IntegrationError(RuntimeError):
    """Quadrature failed; ``best`` holds the last estimate, if any."""

    def __init__(self, message: str, best: QuadratureResult | None = None):
        super().__init__(message)
        self.best = best


class BudgetExceededError(IntegrationError):
    pass


class NonFiniteSampleError(IntegrationError):
    pass


class NonConvergenceError(IntegrationError):
    pass


class RootFindingError(RuntimeError):
    pass


class NoSignChangeError(RootFindingError, ValueError):
    pass


# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
)
_WGK_CENTRE = 0.209482141084727828012999174891714
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
)
_WG_CENTRE = 0.417959183673469387755102040816327


def _sample(f: Func, x: float) -> float:
    y = f(x)
    if not math.isfinite(y):
        raise NonFiniteSampleError(f"integrand is not finite at x={x!r}")
    return y


def _gk15(f: Func, a: float, b: float) -> tuple[float, float]:
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = _sample(f, centre)
    kronrod = fc * _WGK_CENTRE
    gauss = fc * _WG_CENTRE
    pairs = []
    for j, xk in enumerate(_XGK):
        dx = half * xk
        f1 = _sample(f, centre - dx)
        f2 = _sample(f, centre + dx)
        pairs.append((f1, f2))
        kronrod += _WGK[j] * (f1 + f2)
        if j % 2 == 1:
            gauss += _WG[j // 2] * (f1 + f2)
    mean = 0.5 * kronrod
    resabs = _WGK_CENTRE * abs(fc)
    resasc = _WGK_CENTRE * abs(fc - mean)
    for j, (f1, f2) in enumerate(pairs):
        resabs += _WGK[j] * (abs(f1) + abs(f2))
        resasc += _WGK[j] * (abs(f1 - mean) + abs(f2 - mean))
    half = abs(half)
    resabs *= half
    resasc *= half
    err = abs((kronrod - gauss) * half)
    # QUADPACK error heuristic
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > 2.5e-290:
        err = max(err, 50.0 * _EPS * resabs)
    return kronrod * half * (1.0 if b >= a else -1.0), err


def integrate_adaptive(
    f: Func,
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    *,
    max_evals: int = DEFAULT_BUDGET,
) -> QuadratureResult:
    """Globally adaptive Gauss-Kronrod (7/15) quadrature of ``f`` on ``[a, b]``.

    The panel with the largest error estimate is bisected until the summed
    estimate is at most ``tol`` (absolute).

    Raises
    ------
    BudgetExceededError
        ``max_evals`` integrand calls were spent first.
    NonConvergenceError
        Panels reached floating-point resolution without meeting ``tol``.
    NonFiniteSampleError
        The integrand returned inf or nan.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate_adaptive needs finite limits; see integrate_semi_infinite")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0

    value, err = _gk15(f, a, b)
    evals = 15
    heap: list[tuple[float, float, float, float]] = [(-err, a, b, value)]
    done: list[tuple[float, float]] = []        # panels too narrow to split
    total_err = err
    while total_err > tol and heap:
        neg_err, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi or hi - lo <= 4.0 * _EPS * max(abs(lo), abs(hi)):
            done.append((val, -neg_err))
            continue
        if evals + 30 > max_evals:
            heapq.heappush(heap, (neg_err, lo, hi, val))
            best = _collect(heap, done, evals, sign)
            raise BudgetExceededError(
                f"evaluation budget {max_evals} exhausted "
                f"(error estimate {best.error_estimate:.3g} > tol {tol:.3g})",
                best,
            )
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        evals += 30
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
    result = _collect(heap, done, evals, sign)
    if result.error_estimate > tol:
        raise NonConvergenceError(
            f"error estimate {result.error_estimate:.3g} exceeds tol {tol:.3g} "
            "at floating-point resolution",
            result,
        )
    return result


def _collect(heap, done, evals: int, sign: float) -> QuadratureResult:
    value = math.fsum([item[3] for item in heap] + [v for v, _ in done])
    err = math.fsum([-item[0] for item in heap] + [e for _, e in done])
    return QuadratureResult(sign * value, err, evals)


def integrate_panels(
    f: Func,
    edges: Sequence[float],
    tol: float = DEFAULT_TOL,
    *,
    max_evals: int = DEFAULT_BUDGET,
) -> QuadratureResult:
    """Sum of adaptive integrals over consecutive ``edges``, ``tol`` split evenly."""
    n = len(edges) - 1
    if n < 1:
        return QuadratureResult(0.0, 0.0, 0)
    panel_tol = tol / n
    values, err, evals = [], 0.0, 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        r = integrate_adaptive(f, lo, hi, panel_tol, max_evals=max(30, max_evals - evals))
        values.append(r.value)
        err += r.error_estimate
        evals += r.evaluations
    return QuadratureResult(math.fsum(values), err, evals)


def _extrapolate_to_zero(hs: Sequence[float], values: Sequence[float]) -> float:
    """Neville evaluation at h = 0 of the polynomial through (hs, values)."""
    p = list(values)
    n = len(p)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (hs[i] * p[i + 1] - hs[i + m] * p[i]) / (hs[i] - hs[i + m])
    return p[0]


def integrate_semi_infinite(
    f: Func,
    a: float = 0.0,
    tol: float = DEFAULT_TOL,
    oscillation_period: float | None = None,
    *,
    scale: float = 1.0,
    max_evals: int = DEFAULT_BUDGET,
    start_periods: int = 4,
    max_levels: int = 10,
    window: int = 5,
) -> QuadratureResult:
    """Integrate ``f`` over ``[a, inf)`` for integrands decaying like ``1/p**2``.

    Without ``oscillation_period`` the map ``p = a + scale * t / (1 - t)``
    turns the half line into ``[0, 1)``.

    With ``oscillation_period`` (a common period of every oscillating
    component of ``f``) the partial integrals ``S(x)`` are taken at
    ``x = a + N * period`` for ``N = start_periods * 2**j``.  At these
    period-aligned end points the tail ``S(inf) - S(x)`` has an expansion in
    integer powers of ``1/x``, so polynomial extrapolation of ``S`` in ``1/x``
    to zero converges; this works whether the oscillation has zero mean or,
    like ``sin(p)**2``, a decaying non-zero mean.  The extrapolation uses the
    last ``window`` partial sums, and its change between levels is the error
    estimate.
    """
    if not math.isfinite(a):
        raise ValueError("lower limit must be finite")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if oscillation_period is None:
        if not scale > 0:
            raise ValueError("scale must be positive")

        def mapped(t: float) -> float:
            u = 1.0 - t
            return f(a + scale * t / u) * scale / (u * u)

        return integrate_adaptive(mapped, 0.0, 1.0, tol, max_evals=max_evals)

    period = float(oscillation_period)
    if not period > 0:
        raise ValueError("oscillation_period must be positive")
    quad_tol = 0.1 * tol
    n_prev = start_periods
    head = integrate_panels(
        f, [a + i * period for i in range(n_prev + 1)], quad_tol / max_levels, max_evals=max_evals
    )
    partial = head.value
    quad_err = head.error_estimate
    evals = head.evaluations
    hs = [1.0 / (a + n_prev * period)]
    sums = [partial]
    estimate = None
    for _level in range(max_levels):
        n_next = 2 * n_prev
        edges = [a + i * period for i in range(n_prev, n_next + 1)]
        chunk = integrate_panels(f, edges, quad_tol / max_levels, max_evals=max_evals - evals)
        partial += chunk.value
        quad_err += chunk.error_estimate
        evals += chunk.evaluations
        n_prev = n_next
        hs.append(1.0 / (a + n_prev * period))
        sums.append(partial)
        if len(sums) < 3:
            continue
        k = min(window, len(sums))
        new_estimate = _extrapolate_to_zero(hs[-k:], sums[-k:])
        if estimate is not None:
            err = abs(new_estimate - estimate) + quad_err
            if err <= tol and len(sums) >= 4:
                return QuadratureResult(new_estimate, err, evals)
        estimate = new_estimate
    best = QuadratureResult(estimate if estimate is not None else partial, math.inf, evals)
    raise NonConvergenceError(
        f"oscillatory tail extrapolation did not reach tol {tol:.3g} "
        f"after {n_prev} periods",
        best,
    )


def integrate_principal_value(
    f_regular: Func,
    pole: float,
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    *,
    max_evals: int = DEFAULT_BUDGET,
) -> QuadratureResult:
    """Cauchy principal value of ``f_regular(x) / (x - pole)`` over ``[a, b]``.

    A symmetric window of half-width ``h = min((pole - a)/2, (b - pole)/2, 1)``
    is folded onto itself: ``int_0^h (f(pole + t) - f(pole - t)) / t dt`` has a
    bounded integrand, so the singular part cancels before any sampling.  The
    rest of ``[a, b]`` is ordinary quadrature.
    """
    if not a < pole < b:
        raise ValueError(f"pole {pole} must lie strictly inside ({a}, {b})")
    at_pole = f_regular(pole)
    if not math.isfinite(at_pole):
        raise NonFiniteSampleError(f"f_regular is not finite at the pole {pole}")
    h = min(0.5 * (pole - a), 0.5 * (b - pole), 1.0)
    part_tol = tol / 3.0

    def folded(t: float) -> float:
        return (f_regular(pole + t) - f_regular(pole - t)) / t

    def direct(x: float) -> float:
        return f_regular(x) / (x - pole)

    pieces = [
        integrate_adaptive(folded, 0.0, h, part_tol, max_evals=max_evals),
        integrate_adaptive(direct, a, pole - h, part_tol, max_evals=max_evals),
        integrate_adaptive(direct, pole + h, b, part_tol, max_evals=max_evals),
    ]
    return QuadratureResult(
        math.fsum(p.value for p in pieces),
        sum(p.error_estimate for p in pieces),
        sum(p.evaluations for p in pieces) + 1,
    )


def find_root_bracketed(
    f: Func,
    a: float,
    b: float,
    tol: float = 1e-12,
    *,
    xtol: float | None = None,
    rtol: float = 4.0 * _EPS,
    max_iter: int = 200,
) -> RootResult:
    """Brent's method on a sign-changing bracket ``[a, b]``.

    Stops once ``|f(x)| <= tol`` or the bracket is narrower than
    ``xtol + rtol * |x|``; ``xtol`` defaults to ``tol * max(1, |x|)``.  Pass
    ``tol=0, xtol=0`` to iterate to machine precision.
    """
    xpre, xcur = float(a), float(b)
    fpre, fcur = f(xpre), f(xcur)
    if not (math.isfinite(fpre) and math.isfinite(fcur)):
        raise RootFindingError(f"objective not finite at bracket ends: f(a)={fpre}, f(b)={fcur}")
    if fpre == 0.0:
        return RootResult(xpre, 0.0, 0, (xpre, xpre))
    if fcur == 0.0:
        return RootResult(xcur, 0.0, 0, (xcur, xcur))
    if (fpre > 0) == (fcur > 0):
        raise NoSignChangeError(f"no sign change on [{a}, {b}]: f(a)={fpre}, f(b)={fcur}")

    xblk = fblk = spre = scur = 0.0
    for iteration in range(1, max_iter + 1):
        if (fpre > 0) != (fcur > 0):
            xblk, fblk = xpre, fpre
            spre = scur = xcur - xpre
        if abs(fblk) < abs(fcur):
            xpre, xcur, xblk = xcur, xblk, xcur
            fpre, fcur, fblk = fcur, fblk, fcur

        abs_tol = tol * max(1.0, abs(xcur)) if xtol is None else xtol
        delta = 0.5 * (abs_tol + rtol * abs(xcur))
        sbis = 0.5 * (xblk - xcur)
        if fcur == 0.0 or abs(sbis) < delta or abs(fcur) <= tol:
            lo, hi = sorted((xcur, xblk))
            return RootResult(xcur, fcur, iteration, (lo, hi))

        if abs(spre) > delta and abs(fcur) < abs(fpre):
            if xpre == xblk:
                stry = -fcur * (xcur - xpre) / (fcur - fpre)
            else:
                dpre = (fpre - fcur) / (xpre - xcur)
                dblk = (fblk - fcur) / (xblk - xcur)
                stry = -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            if 2.0 * abs(stry) < min(abs(spre), 3.0 * abs(sbis) - delta):
                spre, scur = scur, stry
            else:
                spre = scur = sbis
        else:
            spre = scur = sbis

        xpre, fpre = xcur, fcur
        if abs(scur) > delta:
            xcur += scur
        else:
            xcur += delta if sbis > 0 else -delta
        fcur = f(xcur)
        if not math.isfinite(fcur):
            raise RootFindingError(f"objective not finite at x={xcur}")
    raise RootFindingError(f"Brent iteration budget {max_iter} exhausted near x={xcur}")
