"""s-wave scattering off the delta point, circle and sphere.

Amplitudes come in two independent flavours: the momentum-space ("direct")
closed forms, and the partial-wave route through the phase shift.  Agreement
of the two is the main consistency check of the scattering solution.

At the energies where the shell is invisible to the s-wave (``sin kR = 0`` in
3D, ``J0(kR) = 0`` in 2D) both routes return exactly zero.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

from . import special
from .model import PotentialSpec, require_positive, validate

__all__ = [
    "Coefficients1D",
    "ScatteringResult",
    "coefficients_1d",
    "phase_shift_3d",
    "phase_shift_2d",
    "amplitude_3d_direct",
    "amplitude_3d_from_phase",
    "amplitude_2d_direct",
    "amplitude_2d_from_phase",
    "cross_section_3d",
    "denominator_3d",
    "sample_scattering_solution_3d",
    "scatter",
]

Route = Literal["direct", "partial_wave"]

_EPS = 2.220446049250313e-16
_EIGHTH_TURN = cmath.exp(0.25j * math.pi)  # e^{i pi/4}


@dataclass(frozen=True)
class Coefficients1D:
    transmission: float
    reflection: float


@dataclass(frozen=True)
class ScatteringResult:
    k: float
    phase_shift: float
    amplitude: complex
    route: Route


def coefficients_1d(lam: float, k: float) -> Coefficients1D:
    """Transmission ``4k^2/(4k^2+lam^2)`` and reflection ``lam^2/(4k^2+lam^2)``."""
    lam = require_positive(lam, "lambda")
    k = require_positive(k, "k")
    four_k2 = 4.0 * k * k
    lam2 = lam * lam
    denom = four_k2 + lam2
    return Coefficients1D(four_k2 / denom, lam2 / denom)


def _principal(delta: float) -> float:
    """Reduce an angle from ``atan2`` with nonnegative first argument to (-pi/2, pi/2]."""
    return delta - math.pi if delta > 0.5 * math.pi else delta


def _sphere_node(k: float, radius: float) -> tuple[float, float, bool]:
    kr = k * radius
    s = math.sin(kr)
    return s, math.cos(kr), abs(s) <= 4.0 * _EPS * max(1.0, kr)


def _circle_node(k: float, radius: float) -> tuple[float, bool]:
    kr = k * radius
    jv = special.j0(kr)
    return jv, abs(jv) <= 16.0 * _EPS * max(1.0, kr)


def phase_shift_3d(lam: float, radius: float, k: float) -> float:
    """s-wave phase shift of the sphere.

    From ``cot(delta) = (k - lam sin(kR) cos(kR)) / (lam sin^2(kR))``, returned
    as the principal value in (-pi/2, pi/2].
    """
    lam = require_positive(lam, "lambda")
    radius = require_positive(radius, "radius")
    k = require_positive(k, "k")
    s, c, node = _sphere_node(k, radius)
    if node:
        return 0.0
    return _principal(math.atan2(lam * s * s, k - lam * s * c))


def amplitude_3d_direct(lam: float, radius: float, k: float) -> complex:
    """``f = (sin^2(kR)/k^2) / (1/lam + (1 - exp(2ikR))/(2ik))``.

    The bracket is evaluated as ``1/lam - sin(kR) exp(ikR) / k``, the same
    quantity without the cancellation of ``1 - exp(2ikR)`` at small ``kR``.
    """
    lam = require_positive(lam, "lambda")
    radius = require_positive(radius, "radius")
    k = require_positive(k, "k")
    s, c, node = _sphere_node(k, radius)
    if node:
        return 0j
    denom = complex(1.0 / lam - s * c / k, -s * s / k)
    return (s * s / (k * k)) / denom


def amplitude_3d_from_phase(delta: float, k: float) -> complex:
    """``exp(i delta) sin(delta) / k``."""
    k = require_positive(k, "k")
    sd = math.sin(delta)
    return complex(sd * math.cos(delta), sd * sd) / k


def denominator_3d(lam: float, radius: float, k: complex) -> complex:
    """``1/lam + (1 - exp(2ikR))/(2ik)`` for complex ``k``.

    At ``k = i nu`` this is ``1/lam - (1 - exp(-2 nu R))/(2 nu)``, which vanishes
    at the bound state: the amplitude has its pole there.
    """
    k = complex(k)
    if k == 0:
        raise ValueError("denominator_3d is singular at k = 0")
    return 1.0 / lam + (1.0 - cmath.exp(2j * k * radius)) / (2j * k)


def cross_section_3d(f: complex, k: float) -> float:
    """Total s-wave cross-section ``4 pi |f|^2``."""
    require_positive(k, "k")
    return 4.0 * math.pi * (f.real * f.real + f.imag * f.imag)


def phase_shift_2d(lam: float, radius: float, k: float) -> float:
    """m = 0 phase shift of the circle, ``atan2(pi R lam J0^2, 2 + pi R lam J0 Y0)``."""
    lam = require_positive(lam, "lambda")
    radius = require_positive(radius, "radius")
    k = require_positive(k, "k")
    jv, node = _circle_node(k, radius)
    if node:
        return 0.0
    g = math.pi * radius * lam
    return _principal(math.atan2(g * jv * jv, 2.0 + g * jv * special.y0(k * radius)))


def amplitude_2d_direct(lam: float, radius: float, k: float) -> complex:
    """``R sqrt(pi/(2k)) exp(i pi/4) J0^2 / (1/lam - (i pi R / 2) J0 H0(1))`` at ``kR``."""
    lam = require_positive(lam, "lambda")
    radius = require_positive(radius, "radius")
    k = require_positive(k, "k")
    jv, node = _circle_node(k, radius)
    if node:
        return 0j
    h = complex(jv, special.y0(k * radius))
    denom = 1.0 / lam - 0.5j * math.pi * radius * jv * h
    return radius * math.sqrt(0.5 * math.pi / k) * _EIGHTH_TURN * jv * jv / denom


def amplitude_2d_from_phase(delta: float, k: float) -> complex:
    """``(exp(2 i delta) - 1) exp(-i pi/4) / sqrt(2 pi k)``.

    ``exp(2 i delta) - 1`` is formed as ``2 i sin(delta) exp(i delta)``.
    """
    k = require_positive(k, "k")
    sd = math.sin(delta)
    s_minus_1 = 2j * sd * complex(math.cos(delta), sd)
    return s_minus_1 / (_EIGHTH_TURN * math.sqrt(2.0 * math.pi * k))


def sample_scattering_solution_3d(
    lam: float, radius: float, k: float, r: float, cos_theta: float
) -> complex:
    """Plane wave plus outgoing spherical wave, ``exp(ikr cos t) + f exp(ikr) / r``.

    Valid outside the shell only; the overall normalisation is 1.
    """
    r = float(r)
    if not r > radius:
        raise ValueError(f"scattering solution is sampled for r > R only (r={r}, R={radius})")
    if not -1.0 <= cos_theta <= 1.0:
        raise ValueError(f"cos_theta must lie in [-1, 1], got {cos_theta}")
    f = amplitude_3d_direct(lam, radius, k)
    return cmath.exp(1j * k * r * cos_theta) + f * cmath.exp(1j * k * r) / r


def scatter(spec: PotentialSpec, k: float, route: Route = "direct") -> ScatteringResult:
    """Phase shift and amplitude for a 2D or 3D spec by the requested route."""
    spec = validate(spec)
    if spec.dimension == 1:
        raise ValueError("use coefficients_1d for the one-dimensional problem")
    if route not in ("direct", "partial_wave"):
        raise ValueError(f"unknown route {route!r}")
    if spec.dimension == 3:
        delta = phase_shift_3d(spec.lam, spec.radius, k)
        if route == "direct":
            f = amplitude_3d_direct(spec.lam, spec.radius, k)
        else:
            f = amplitude_3d_from_phase(delta, k)
    else:
        delta = phase_shift_2d(spec.lam, spec.radius, k)
        if route == "direct":
            f = amplitude_2d_direct(spec.lam, spec.radius, k)
        else:
            f = amplitude_2d_from_phase(delta, k)
    return ScatteringResult(float(k), delta, f, route)
