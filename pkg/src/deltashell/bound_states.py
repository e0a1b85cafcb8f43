"""Bound-state energies and wavefunctions of the point, circle and sphere deltas.

Energies are parametrised as E = -nu**2.  The 3D decay rate has a Lambert-W
closed form and an independent root-finding route; the 2D one is a root of
``I0(nu R) K0(nu R) = 1 / (lam R)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from . import special
from .model import PotentialSpec, require_positive, validate
from .numerics import find_root_bracketed, integrate_adaptive, integrate_semi_infinite

__all__ = [
    "BoundStateResult",
    "WaveSample",
    "BoundStateUnderflowError",
    "bound_energy_1d",
    "bound_nu_3d",
    "bound_nu_3d_numeric",
    "bound_nu_2d",
    "residual_3d",
    "residual_2d",
    "solve_bound_state",
    "wavefunction_1d",
    "wavefunction_2d",
    "wavefunction_3d",
    "wavefunction",
    "normalize",
]

Method = Literal["closed_form", "lambert_w", "root_find"]
Region = Literal["inside", "outside"]

# lam*R within this of 1 is indistinguishable from the threshold
THRESHOLD_SLACK = 1e-12
# below this lam*R - 1 the Lambert argument is evaluated through its branch gap
NEAR_THRESHOLD = 0.05


@dataclass(frozen=True)
class BoundStateResult:
    nu: float
    energy: float
    method: Method
    residual: float


@dataclass(frozen=True)
class WaveSample:
    r: float
    value: float
    region: Region
    normalized: bool


class BoundStateUnderflowError(ArithmeticError):
    """The bound state exists but nu is below the double-precision range."""

    def __init__(self, message: str, log_nu: float):
        super().__init__(message)
        self.log_nu = log_nu


def _result(nu: float, method: Method, residual: float) -> BoundStateResult:
    return BoundStateResult(nu=nu, energy=-(nu * nu), method=method, residual=residual)


def bound_energy_1d(lam: float) -> BoundStateResult:
    """E = -lam**2 / 4 for V(x) = -lam delta(x)."""
    lam = require_positive(lam, "lambda")
    return _result(0.5 * lam, "closed_form", 0.0)


def residual_3d(lam: float, radius: float, nu: float) -> float:
    """1 - exp(-2 R nu) - 2 nu / lam, zero at the 3D bound state."""
    return -math.expm1(-2.0 * radius * nu) - 2.0 * nu / lam


def residual_2d(lam: float, radius: float, nu: float) -> float:
    """I0(nu R) K0(nu R) - 1 / (lam R), zero at the 2D bound state."""
    return special.i0k0(nu * radius) - 1.0 / (lam * radius)


def bound_nu_3d(lam: float, radius: float) -> BoundStateResult | None:
    """Sphere bound state from ``nu = lam/2 + W0(-lam R exp(-lam R)) / (2R)``.

    Returns None when ``lam * R <= 1`` (no bound state).  The principal branch
    is the one that yields the nonzero root; W_{-1} returns ``-lam R`` and
    hence the trivial ``nu = 0``.
    """
    lam = require_positive(lam, "lambda")
    radius = require_positive(radius, "radius")
    strength = lam * radius
    if strength <= 1.0 + THRESHOLD_SLACK:
        return None
    excess = strength - 1.0
    if excess < NEAR_THRESHOLD:
        # the argument -s exp(-s) sits within rounding of -1/e; work with
        # W0 + 1 directly, fed by the exactly known gap of the W_{-1} root -s
        offset = special.lambert_w0_branch_offset(special.lambert_branch_gap(-excess))
        nu = (excess + offset) / (2.0 * radius)
    else:
        w = special.lambert_w0(-strength * math.exp(-strength)).value
        nu = (strength + w) / (2.0 * radius)
    if not nu > 0:
        return None
    return _result(nu, "lambert_w", residual_3d(lam, radius, nu))


def bound_nu_3d_numeric(lam: float, radius: float) -> BoundStateResult | None:
    """Sphere bound state by Brent's method on ``1 - exp(-2 R nu) - 2 nu / lam``.

    The root lies in ``(0, lam/2)``; the bracket is ``[1e-12 lam, lam/2]``.
    """
    lam = require_positive(lam, "lambda")
    radius = require_positive(radius, "radius")
    if lam * radius <= 1.0 + THRESHOLD_SLACK:
        return None
    lo = 1e-12 * lam
    hi = 0.5 * lam
    g = lambda nu: residual_3d(lam, radius, nu)  # noqa: E731
    if g(lo) <= 0:
        return None
    root = find_root_bracketed(g, lo, hi, tol=0.0, xtol=0.0)
    return _result(root.root, "root_find", g(root.root))


def bound_nu_2d(lam: float, radius: float) -> BoundStateResult:
    """Circle bound state: root of ``I0(nu R) K0(nu R) = 1 / (lam R)``.

    One root exists for every ``lam, R > 0`` since the product decreases
    monotonically from +inf to 0.  The bracket is grown geometrically from
    ``nu = 1e-6 / R`` and Brent's method runs on ``log(nu)``, which keeps the
    iteration well scaled when ``nu`` is exponentially small.

    Raises
    ------
    BoundStateUnderflowError
        ``nu R`` is below ~1e-300 (``lam R`` smaller than about 1/690).
    """
    lam = require_positive(lam, "lambda")
    radius = require_positive(radius, "radius")
    target = 1.0 / (lam * radius)

    def h_of_x(x: float) -> float:
        return special.i0k0(x) - target

    lo = 1e-6
    while h_of_x(lo) <= 0:
        lo *= 1e-6
        if lo < 1e-300:
            log_nu = math.log(2.0 / radius) - special.EULER_GAMMA - target
            raise BoundStateUnderflowError(
                f"bound state for lam*R={lam * radius:g} has log(nu) ~ {log_nu:.6g}, "
                "below double precision",
                log_nu,
            )
    hi = max(lo, 1e-6) * 2.0
    while h_of_x(hi) >= 0:
        lo = hi
        hi *= 2.0
        if hi > 1e300:
            raise RuntimeError("bound_nu_2d: upper bracket not found")

    root = find_root_bracketed(
        lambda t: h_of_x(math.exp(t)), math.log(lo), math.log(hi), tol=0.0, xtol=0.0, max_iter=500
    )
    nu = math.exp(root.root) / radius
    return _result(nu, "root_find", residual_2d(lam, radius, nu))


def solve_bound_state(spec: PotentialSpec) -> BoundStateResult | None:
    """Closed form in 1D, Lambert W in 3D, root finding in 2D."""
    spec = validate(spec)
    if spec.dimension == 1:
        return bound_energy_1d(spec.lam)
    if spec.dimension == 2:
        return bound_nu_2d(spec.lam, spec.radius)
    return bound_nu_3d(spec.lam, spec.radius)


# --------------------------------------------------------------------------
# wavefunctions
# --------------------------------------------------------------------------

def wavefunction_1d(lam: float, x: float) -> WaveSample:
    """Normalised ``sqrt(lam/2) exp(-lam |x| / 2)``."""
    lam = require_positive(lam, "lambda")
    ax = abs(float(x))
    value = math.sqrt(0.5 * lam) * math.exp(-0.5 * lam * ax)
    return WaveSample(ax, value, "inside" if ax == 0.0 else "outside", True)


def _check_r(r: float) -> float:
    r = float(r)
    if not r > 0 or not math.isfinite(r):
        raise ValueError(f"radial coordinate must be positive, got {r}")
    return r


def wavefunction_3d(
    lam: float, radius: float, nu: float, r: float, norm: float | None = None
) -> WaveSample:
    """Sphere bound state, ``N lam / (4 pi r R nu)`` times

    ``exp(-nu R) sinh(nu r)`` for ``r <= R`` and ``exp(-nu r) sinh(nu R)`` beyond.
    ``N = 1`` unless ``norm`` (from :func:`normalize`) is given.
    """
    r = _check_r(r)
    prefactor = (1.0 if norm is None else norm) * lam / (4.0 * math.pi * r * radius * nu)
    near, far = (r, radius) if r <= radius else (radius, r)
    # exp(-nu far) sinh(nu near), written without overflow
    shape = -0.5 * math.exp(-nu * (far - near)) * math.expm1(-2.0 * nu * near)
    region: Region = "inside" if r <= radius else "outside"
    return WaveSample(r, prefactor * shape, region, norm is not None)


def wavefunction_2d(
    lam: float, radius: float, nu: float, r: float, norm: float | None = None
) -> WaveSample:
    """Circle bound state ``N I0(nu min(r,R)) K0(nu max(r,R))``."""
    r = _check_r(r)
    near, far = (r, radius) if r <= radius else (radius, r)
    value = special.i0e(nu * near) * special.k0e(nu * far) * math.exp(-nu * (far - near))
    if norm is not None:
        value *= norm
    region: Region = "inside" if r <= radius else "outside"
    return WaveSample(r, value, region, norm is not None)


def wavefunction(spec: PotentialSpec, nu: float, r: float, norm: float | None = None) -> WaveSample:
    spec = validate(spec)
    if spec.dimension == 1:
        return wavefunction_1d(spec.lam, r)
    if spec.dimension == 2:
        return wavefunction_2d(spec.lam, spec.radius, nu, r, norm)
    return wavefunction_3d(spec.lam, spec.radius, nu, r, norm)


def normalize(spec: PotentialSpec, nu: float, tol: float = 1e-12) -> float:
    """Constant N giving the bound state unit L2 norm, found by quadrature.

    The radial measure is ``dx`` (1D, both half lines), ``2 pi r dr`` (2D) or
    ``4 pi r**2 dr`` (3D).  A coarse pass fixes the scale, then the norm is
    integrated to relative accuracy ``tol``.
    """
    spec = validate(spec)
    nu = require_positive(nu, "nu")
    decay = 1.0 / nu
    if spec.dimension == 1:
        density = lambda x: 2.0 * math.exp(-2.0 * nu * x)  # noqa: E731
        pieces = [(None, 0.0)]
    else:
        shape = wavefunction_2d if spec.dimension == 2 else wavefunction_3d
        weight = (lambda r: 2.0 * math.pi * r) if spec.dimension == 2 else (lambda r: 4.0 * math.pi * r * r)
        R = spec.radius

        def density(r: float) -> float:
            if r <= 0.0:
                return 0.0
            return weight(r) * shape(spec.lam, R, nu, r).value ** 2

        pieces = [(0.0, R), (None, R)]

    def integrate(rel_tol_abs: float) -> float:
        total = 0.0
        for lo, hi in pieces:
            if lo is None:
                total += integrate_semi_infinite(density, hi, rel_tol_abs, scale=decay).value
            else:
                total += integrate_adaptive(density, lo, hi, rel_tol_abs).value
        return total

    rough = integrate(1e-6)
    if not rough > 0:
        raise ArithmeticError("bound-state norm integral is not positive")
    precise = integrate(tol * rough)
    return 1.0 / math.sqrt(precise)
