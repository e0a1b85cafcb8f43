"""Independent checks of the bound-state and scattering results.

Each check compares a value obtained by one computation with the same
quantity obtained by a disjoint one:

* consistency integrals: momentum-space quadrature against the coupling;
* wavefunction reconstruction: inverse Fourier transform by quadrature
  against the closed-form piecewise wavefunctions;
* principal-value identity: singular quadrature against its closed form;
* regularised radial ODE: the delta shell replaced by a narrow Gaussian,
  integrated numerically, phase shift read off the asymptotic solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import bound_states, scattering, special
from .model import PotentialSpec, require_positive, validate
from .numerics import integrate_principal_value, integrate_semi_infinite

__all__ = [
    "OracleReport",
    "TolProfile",
    "ODEIntegrationError",
    "MatchingError",
    "verify_consistency_3d",
    "verify_consistency_2d",
    "consistency_closed_form_3d",
    "reconstruct_wavefunction_3d",
    "reconstruct_wavefunction_2d",
    "verify_pv_identity",
    "verify_pv_identity_1d",
    "ode_phase_shift",
    "run_all",
]

Number = float | complex


@dataclass(frozen=True)
class OracleReport:
    name: str
    expected: Number
    computed: Number
    abs_diff: float
    tol: float
    passed: bool

    @classmethod
    def compare(cls, name: str, expected: Number, computed: Number, tol: float) -> "OracleReport":
        diff = abs(computed - expected)
        return cls(name, expected, computed, diff, tol, bool(diff <= tol))

    def to_dict(self) -> dict:
        out = {"name": self.name, "abs_diff": self.abs_diff, "tol": self.tol, "passed": self.passed}
        for key in ("expected", "computed"):
            value = getattr(self, key)
            if isinstance(value, complex):
                out[f"re_{key}"] = value.real
                out[f"im_{key}"] = value.imag
            else:
                out[key] = float(value)
        return out


@dataclass(frozen=True)
class TolProfile:
    """Pass thresholds for :func:`run_all`; relative where noted."""

    consistency_3d: float = 1e-7
    consistency_2d: float = 1e-6
    reconstruction: float = 1e-6   # relative
    pv: float = 1e-6
    ode_3d: float = 1e-4
    ode_2d: float = 1e-3
    dual_route: float = 1e-10      # relative to max(1, |f|) or nu
    unitarity: float = 1e-10
    pole: float = 1e-10
    closed_form_1d: float = 1e-15
    normalization: float = 1e-9
    sample_k: tuple[float, ...] = field(default=(0.3, 1.0, 2.7))


class ODEIntegrationError(ArithmeticError):
    """The regularised radial equation produced non-finite values."""


class MatchingError(ArithmeticError):
    """The asymptotic fit could not determine a phase."""


# --------------------------------------------------------------------------
# consistency conditions
# --------------------------------------------------------------------------

def consistency_closed_form_3d(lam: float, radius: float, nu: float) -> float:
    """Residue-theorem value of ``(2 lam/pi) int_0^inf sin^2(pR)/(p^2+nu^2) dp``."""
    return lam / (2.0 * nu) * -math.expm1(-2.0 * radius * nu)


def verify_consistency_3d(lam: float, radius: float, nu: float, tol: float = 1e-7) -> OracleReport:
    """``(2 lam / pi) int_0^inf sin^2(pR) / (p^2 + nu^2) dp`` should equal 1 at the bound state."""
    lam = require_positive(lam, "lambda")
    radius = require_positive(radius, "radius")
    nu = require_positive(nu, "nu")
    weight = 2.0 * lam / math.pi

    def integrand(p: float) -> float:
        s = math.sin(p * radius)
        return s * s / (p * p + nu * nu)

    quad = integrate_semi_infinite(integrand, 0.0, 0.05 * tol / weight, oscillation_period=math.pi / radius)
    return OracleReport.compare("consistency_3d", 1.0, weight * quad.value, tol)


def _consistency_integral_2d(radius: float, nu: float, tol: float) -> float:
    def integrand(p: float) -> float:
        jv = special.j0(p * radius)
        return jv * jv * p / (p * p + nu * nu)

    return integrate_semi_infinite(integrand, 0.0, tol, oscillation_period=math.pi / radius).value


def verify_consistency_2d(lam: float, radius: float, nu: float, tol: float = 1e-6) -> OracleReport:
    """``int_0^inf J0(pR)^2 p / (p^2 + nu^2) dp`` should equal ``1 / (lam R)``."""
    lam = require_positive(lam, "lambda")
    radius = require_positive(radius, "radius")
    nu = require_positive(nu, "nu")
    value = _consistency_integral_2d(radius, nu, 0.05 * tol)
    return OracleReport.compare("consistency_2d", 1.0 / (lam * radius), value, tol)


def verify_i0k0_integral(radius: float, nu: float, tol: float = 1e-6) -> OracleReport:
    """Same quadrature against the modified-Bessel product ``I0(nu R) K0(nu R)``."""
    value = _consistency_integral_2d(radius, nu, 0.05 * tol)
    return OracleReport.compare("consistency_2d_i0k0", special.i0k0(nu * radius), value, tol)


# --------------------------------------------------------------------------
# inverse Fourier reconstruction
# --------------------------------------------------------------------------

def _cosine_transform(freq: float, nu: float, tol: float) -> float:
    """``int_0^inf cos(a p) / (p^2 + nu^2) dp`` by quadrature."""
    if freq == 0.0:
        return integrate_semi_infinite(lambda p: 1.0 / (p * p + nu * nu), 0.0, tol, scale=nu).value
    return integrate_semi_infinite(
        lambda p: math.cos(freq * p) / (p * p + nu * nu),
        0.0,
        tol,
        oscillation_period=2.0 * math.pi / freq,
    ).value


def reconstruct_wavefunction_3d(
    lam: float, radius: float, nu: float, r: float, tol: float = 1e-6
) -> OracleReport:
    """``(lam / (2 pi^2 r R)) int_0^inf sin(pR) sin(pr) / (p^2 + nu^2) dp`` vs the closed form.

    The product of sines is split into two cosines so that each quadrature
    has a single oscillation frequency.  ``tol`` is relative.
    """
    lam = require_positive(lam, "lambda")
    radius = require_positive(radius, "radius")
    nu = require_positive(nu, "nu")
    r = require_positive(r, "r")
    expected = bound_states.wavefunction_3d(lam, radius, nu, r).value
    prefactor = lam / (2.0 * math.pi ** 2 * r * radius)
    quad_tol = 0.02 * tol * abs(expected) / prefactor
    integral = 0.5 * (
        _cosine_transform(abs(r - radius), nu, quad_tol) - _cosine_transform(r + radius, nu, quad_tol)
    )
    return OracleReport.compare("reconstruction_3d", expected, prefactor * integral, tol * abs(expected))


def _common_period(freqs: list[float]) -> float:
    """Smallest period shared by ``cos(w p)`` for the given nonzero frequencies."""
    base = min(freqs)
    denominator = 1
    for w in freqs:
        ratio = Fraction(w / base).limit_denominator(1000)
        if abs(float(ratio) - w / base) > 1e-12 * (w / base):
            raise ValueError(f"frequencies {freqs} are not commensurate")
        denominator = denominator * ratio.denominator // math.gcd(denominator, ratio.denominator)
    return 2.0 * math.pi * denominator / base


def reconstruct_wavefunction_2d(
    lam: float, radius: float, nu: float, r: float, tol: float = 1e-6
) -> OracleReport:
    """``int_0^inf J0(pr) J0(pR) p / (p^2 + nu^2) dp`` vs ``I0(nu min) K0(nu max)``.

    The oscillatory tail carries the frequencies ``|r - R|`` and ``r + R``;
    partial sums are taken at multiples of their common period, so the ratio
    of ``r`` to ``R`` must be rational with a modest denominator.  ``tol`` is
    relative.  ``lam`` only enters through ``nu``.
    """
    require_positive(lam, "lambda")
    radius = require_positive(radius, "radius")
    nu = require_positive(nu, "nu")
    r = require_positive(r, "r")
    expected = bound_states.wavefunction_2d(lam, radius, nu, r).value
    freqs = [w for w in (abs(r - radius), r + radius) if w > 1e-12 * (r + radius)]
    period = _common_period(freqs)

    def integrand(p: float) -> float:
        return special.j0(p * r) * special.j0(p * radius) * p / (p * p + nu * nu)

    value = integrate_semi_infinite(integrand, 0.0, 0.02 * tol * abs(expected), oscillation_period=period).value
    return OracleReport.compare("reconstruction_2d", expected, value, tol * abs(expected))


# --------------------------------------------------------------------------
# principal-value identities
# --------------------------------------------------------------------------

def verify_pv_identity(radius: float, r: float, k: float, tol: float = 1e-6) -> OracleReport:
    """``pv int_0^inf sin(pr) sin(pR) / (p^2 - k^2) dp = (pi / 2k) sin(kR) cos(kr)`` for ``r > R``.

    The pole at ``p = k`` is handled on ``[0, 2k]``; the tail is split into two
    single-frequency cosine integrals.
    """
    radius = require_positive(radius, "radius")
    r = require_positive(r, "r")
    k = require_positive(k, "k")
    if not r > radius:
        raise ValueError(f"the identity holds for r > R (r={r}, R={radius})")
    q = 0.02 * tol
    near = integrate_principal_value(
        lambda p: math.sin(p * r) * math.sin(p * radius) / (p + k), k, 0.0, 2.0 * k, q
    ).value

    def tail(freq: float) -> float:
        return integrate_semi_infinite(
            lambda p: math.cos(freq * p) / (p * p - k * k),
            2.0 * k,
            q,
            oscillation_period=2.0 * math.pi / freq,
        ).value

    far = 0.5 * (tail(r - radius) - tail(r + radius))
    expected = 0.5 * math.pi / k * math.sin(k * radius) * math.cos(k * r)
    return OracleReport.compare("pv_identity", expected, near + far, tol)


def verify_pv_identity_1d(x: float, k: float, tol: float = 1e-6) -> OracleReport:
    """``pv int_-inf^inf cos(px) / (p^2 - k^2) dp = -(pi / k) sin(k |x|)``, ``x != 0``."""
    k = require_positive(k, "k")
    ax = abs(float(x))
    if ax == 0.0:
        raise ValueError("x must be nonzero")
    q = 0.02 * tol
    near = integrate_principal_value(lambda p: math.cos(p * ax) / (p + k), k, 0.0, 2.0 * k, q).value
    far = integrate_semi_infinite(
        lambda p: math.cos(p * ax) / (p * p - k * k), 2.0 * k, q, oscillation_period=2.0 * math.pi / ax
    ).value
    expected = -math.pi / k * math.sin(k * ax)
    return OracleReport.compare("pv_identity_1d", expected, 2.0 * (near + far), tol)


# --------------------------------------------------------------------------
# regularised radial ODE
# --------------------------------------------------------------------------

_SHELL_HALF_WIDTH = 12.0      # in units of the Gaussian width
_SHELL_STEPS_PER_WIDTH = 25.0
_FAR_STEP_K = 0.05            # h * k away from the shell
_FIT_PERIODS = 5
_START_FRACTION = 1e-6


def _gaussian(width: float) -> Callable[[float], float]:
    """Unit-area ``exp(-x^2 / width^2) / (width sqrt(pi))``."""
    norm = 1.0 / (width * math.sqrt(math.pi))
    inv = 1.0 / (width * width)
    return lambda x: norm * math.exp(-x * x * inv)


def _integrate_radial(dimension: int, lam: float, radius: float, k: float, width: float):
    """Fixed-schedule RK4 for the regular s-wave solution; returns samples of the far tail."""
    g = _gaussian(width)
    k2 = k * k

    if dimension == 3:
        def accel(r, y, yp):
            return -(k2 + lam * g(r - radius)) * y
        r, y, yp = _START_FRACTION * radius, _START_FRACTION * radius, 1.0
    else:
        def accel(r, y, yp):
            return -yp / r - (k2 + lam * g(r - radius)) * y
        r, y, yp = _START_FRACTION * radius, 1.0, 0.0

    shell_lo = radius - _SHELL_HALF_WIDTH * width
    shell_hi = radius + _SHELL_HALF_WIDTH * width
    fit_from = radius + 20.0 / k
    r_max = fit_from + _FIT_PERIODS * 2.0 * math.pi / k
    h_shell = width / _SHELL_STEPS_PER_WIDTH
    h_far = _FAR_STEP_K / k

    samples: list[tuple[float, float]] = []
    while r < r_max:
        if shell_lo <= r < shell_hi:
            h, stop = h_shell, shell_hi
        else:
            h, stop = h_far, (shell_lo if r < shell_lo else r_max)
        h = min(h, 0.1 * r)
        if r + h > stop:
            h = stop - r
        if h <= 0.0:  # landed exactly on a zone boundary
            h = min(h_shell, r_max - r)
        a1 = accel(r, y, yp)
        y2, v2 = y + 0.5 * h * yp, yp + 0.5 * h * a1
        a2 = accel(r + 0.5 * h, y2, v2)
        y3, v3 = y + 0.5 * h * v2, yp + 0.5 * h * a2
        a3 = accel(r + 0.5 * h, y3, v3)
        y4, v4 = y + h * v3, yp + h * a3
        a4 = accel(r + h, y4, v4)
        y += h * (yp + 2.0 * v2 + 2.0 * v3 + v4) / 6.0
        yp += h * (a1 + 2.0 * a2 + 2.0 * a3 + a4) / 6.0
        r += h
        if not (math.isfinite(y) and math.isfinite(yp)):
            raise ODEIntegrationError(f"radial solution diverged at r={r:g}")
        if r >= fit_from:
            samples.append((r, y))
    return samples


def _fit_phase(samples, basis) -> float:
    """Least-squares ``y ~ a b1(r) + b b2(r)``; returns (a, b)."""
    s11 = s12 = s22 = t1 = t2 = 0.0
    for r, y in samples:
        b1, b2 = basis(r)
        s11 += b1 * b1
        s12 += b1 * b2
        s22 += b2 * b2
        t1 += b1 * y
        t2 += b2 * y
    det = s11 * s22 - s12 * s12
    if len(samples) < 8 or not det > 1e-12 * s11 * s22:
        raise MatchingError("asymptotic fit is degenerate")
    a = (s22 * t1 - s12 * t2) / det
    b = (s11 * t2 - s12 * t1) / det
    if a == 0.0 and b == 0.0:
        raise MatchingError("asymptotic amplitude vanished")
    return a, b


def _ode_phase_once(dimension: int, lam: float, radius: float, k: float, width: float) -> float:
    samples = _integrate_radial(dimension, lam, radius, k, width)
    if dimension == 3:
        # u = A sin(kr + delta) = A cos(delta) sin(kr) + A sin(delta) cos(kr)
        a, b = _fit_phase(samples, lambda r: (math.sin(k * r), math.cos(k * r)))
        return math.atan2(b, a)
    # F = A (cos(delta) J0(kr) - sin(delta) Y0(kr))
    a, b = _fit_phase(samples, lambda r: (special.j0(k * r), special.y0(k * r)))
    return math.atan2(-b, a)


def _mod_pi(delta: float) -> float:
    """Representative of ``delta`` mod pi in (-pi/2, pi/2]."""
    out = math.remainder(delta, math.pi)
    return math.pi / 2 if out == -math.pi / 2 else out


def ode_phase_shift(
    dimension: int,
    lam: float,
    radius: float,
    k: float,
    regularization_width: float,
    extrapolate: bool = True,
) -> float:
    """s-wave phase shift from the radial equation with a Gaussian shell.

    ``-lam delta(r - R)`` is replaced by ``-lam exp(-x^2/eps^2) / (eps sqrt(pi))``
    with ``x = r - R`` and ``eps = regularization_width``.  The regular solution is
    integrated with RK4 and fitted over the five wavelengths beyond ``R + 20/k`` to ``sin(kr)``, ``cos(kr)`` (3D) or ``J0(kr)``, ``Y0(kr)`` (2D).

    The regularisation error is first order in the width, so with
    ``extrapolate`` the result is ``2 delta(eps/2) - delta(eps)``.

    Returns
    -------
    float
        Phase shift reduced to (-pi/2, pi/2].
    """
    if dimension not in (2, 3):
        raise ValueError(f"dimension must be 2 or 3, got {dimension!r}")
    lam = require_positive(lam, "lambda")
    radius = require_positive(radius, "radius")
    k = require_positive(k, "k")
    width = require_positive(regularization_width, "regularization_width")
    if width > radius / 10.0:
        raise ValueError("regularization_width must not exceed radius / 10")
    coarse = _ode_phase_once(dimension, lam, radius, k, width)
    if not extrapolate:
        return _mod_pi(coarse)
    fine = _ode_phase_once(dimension, lam, radius, k, 0.5 * width)
    fine = coarse + math.remainder(fine - coarse, math.pi)
    return _mod_pi(2.0 * fine - coarse)


# --------------------------------------------------------------------------
# aggregate
# --------------------------------------------------------------------------

def _phase_diff(a: float, b: float) -> float:
    return abs(math.remainder(a - b, math.pi))


def _guarded(name: str, tol: float, thunk: Callable[[], OracleReport]) -> OracleReport:
    try:
        return thunk()
    except Exception as exc:  # a failing check is reported, not raised
        return OracleReport(f"{name}: {type(exc).__name__}", math.nan, math.nan, math.inf, tol, False)


def _checks_1d(lam: float, tp: TolProfile) -> list[OracleReport]:
    reports = []
    bound = bound_states.bound_energy_1d(lam)
    reports.append(OracleReport.compare("bound_energy_1d", -0.25 * lam * lam, bound.energy, tp.closed_form_1d * max(1.0, lam * lam)))

    def norm_check() -> OracleReport:
        total = 2.0 * integrate_semi_infinite(
            lambda x: bound_states.wavefunction_1d(lam, x).value ** 2, 0.0, 1e-13, scale=2.0 / lam
        ).value
        return OracleReport.compare("normalization_1d", 1.0, total, tp.normalization)

    reports.append(_guarded("normalization_1d", tp.normalization, norm_check))
    for k in tp.sample_k:
        c = scattering.coefficients_1d(lam, k)
        reports.append(OracleReport.compare(f"flux_1d[k={k:g}]", 1.0, c.transmission + c.reflection, tp.closed_form_1d))
        reports.append(_guarded(f"pv_identity_1d[k={k:g}]", tp.pv, lambda k=k: verify_pv_identity_1d(1.0, k, tp.pv)))
    return reports


def _scattering_checks(spec: PotentialSpec, tp: TolProfile) -> list[OracleReport]:
    lam, radius, dim = spec.lam, spec.radius, spec.dimension
    reports = []
    for kr in tp.sample_k:
        k = kr / radius
        direct = scattering.scatter(spec, k, "direct").amplitude
        via_phase = scattering.scatter(spec, k, "partial_wave").amplitude
        reports.append(OracleReport.compare(
            f"route_equality_{dim}d[k={k:g}]", direct, via_phase, tp.dual_route * max(1.0, abs(direct))
        ))
        if dim == 3:
            s_matrix = 1.0 + 2j * k * direct
        else:
            s_matrix = 1.0 + math.sqrt(2.0 * math.pi * k) * complex(math.cos(math.pi / 4), math.sin(math.pi / 4)) * direct
        reports.append(OracleReport.compare(f"unitarity_{dim}d[k={k:g}]", 1.0, abs(s_matrix), tp.unitarity))
        if dim == 3:
            reports.append(OracleReport.compare(
                f"optical_theorem_3d[k={k:g}]", k * abs(direct) ** 2, direct.imag,
                tp.unitarity * max(abs(direct.imag), 1e-300),
            ))
    if dim == 3:
        reports.append(_guarded("pv_identity", tp.pv, lambda: verify_pv_identity(radius, 2.0 * radius, 1.0 / radius, tp.pv)))

    k = 1.0 / radius
    analytic = (scattering.phase_shift_3d if dim == 3 else scattering.phase_shift_2d)(lam, radius, k)
    ode_tol = tp.ode_3d if dim == 3 else tp.ode_2d

    def ode_check() -> OracleReport:
        numeric = ode_phase_shift(dim, lam, radius, k, radius / 50.0)
        diff = _phase_diff(numeric, analytic)
        return OracleReport(f"ode_phase_shift_{dim}d[k={k:g}]", analytic, numeric, diff, ode_tol, diff <= ode_tol)

    reports.append(_guarded(f"ode_phase_shift_{dim}d", ode_tol, ode_check))
    return reports


def _bound_checks_3d(spec: PotentialSpec, tp: TolProfile) -> list[OracleReport]:
    lam, radius = spec.lam, spec.radius
    closed = bound_states.bound_nu_3d(lam, radius)
    if closed is None:
        return []
    numeric = bound_states.bound_nu_3d_numeric(lam, radius)
    nu = closed.nu
    reports = [
        OracleReport.compare("bound_dual_route_3d", closed.nu, numeric.nu, tp.dual_route * nu),
        OracleReport.compare("bound_pole_3d", 0j, scattering.denominator_3d(lam, radius, 1j * nu), tp.pole),
        _guarded("consistency_3d", tp.consistency_3d, lambda: verify_consistency_3d(lam, radius, nu, tp.consistency_3d)),
    ]
    for r in (0.5 * radius, 2.0 * radius):
        reports.append(_guarded(
            "reconstruction_3d", tp.reconstruction,
            lambda r=r: _relabel(reconstruct_wavefunction_3d(lam, radius, nu, r, tp.reconstruction), f"[r={r:g}]"),
        ))
    return reports


def _bound_checks_2d(spec: PotentialSpec, tp: TolProfile) -> list[OracleReport]:
    lam, radius = spec.lam, spec.radius
    try:
        nu = bound_states.bound_nu_2d(lam, radius).nu
    except bound_states.BoundStateUnderflowError:
        return [OracleReport("bound_state_2d: below double precision", math.nan, math.nan, math.inf, 0.0, False)]
    reports = [
        _guarded("consistency_2d", tp.consistency_2d, lambda: verify_consistency_2d(lam, radius, nu, tp.consistency_2d)),
        _guarded("consistency_2d_i0k0", tp.consistency_2d, lambda: verify_i0k0_integral(radius, nu, tp.consistency_2d)),
    ]
    for r in (0.5 * radius, 2.0 * radius):
        reports.append(_guarded(
            "reconstruction_2d", tp.reconstruction,
            lambda r=r: _relabel(reconstruct_wavefunction_2d(lam, radius, nu, r, tp.reconstruction), f"[r={r:g}]"),
        ))
    return reports


def _relabel(report: OracleReport, suffix: str) -> OracleReport:
    return OracleReport(report.name + suffix, report.expected, report.computed, report.abs_diff, report.tol, report.passed)


def run_all(spec: PotentialSpec, tol_profile: TolProfile | None = None) -> list[OracleReport]:
    """Every check applicable to ``spec``; individual failures are reported, not raised."""
    spec = validate(spec)
    tp = tol_profile or TolProfile()
    if spec.dimension == 1:
        return _checks_1d(spec.lam, tp)
    bound = _bound_checks_3d(spec, tp) if spec.dimension == 3 else _bound_checks_2d(spec, tp)
    return bound + _scattering_checks(spec, tp)
