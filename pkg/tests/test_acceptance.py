"""Acceptance gates, one test per criterion.

Each test records a ``PASS``/``FAIL`` line with its wall time; the lines are
printed in the terminal summary by ``conftest.py`` and by running this file
directly with ``python3 tests/test_acceptance.py``.
"""

import cmath
import io
import json
import math
import random
import time

import mpmath
import pytest

from deltashell import bound_states, scattering
from deltashell.cli import OutputRecord, main
from deltashell.oracles import (
    ode_phase_shift,
    reconstruct_wavefunction_2d,
    reconstruct_wavefunction_3d,
    verify_consistency_2d,
    verify_consistency_3d,
    verify_pv_identity,
)

RESULTS: list[str] = []
EPS = 2.220446049250313e-16


class Gate:
    """Times a criterion and records one summary line, whatever the outcome."""

    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.failures: list[str] = []

    def check(self, ok, what):
        if not ok:
            self.failures.append(what)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if elapsed >= self.budget:
            self.failures.append(f"runtime {elapsed:.2f}s over {self.budget}s")
        status = "PASS" if not self.failures else "FAIL"
        detail = "" if not self.failures else "  <- " + "; ".join(self.failures[:3])
        RESULTS.append(f"[{status}] criterion {self.number:2d}: {self.title} ({elapsed:.2f}s / {self.budget}s){detail}")
        if exc is None and self.failures:
            pytest.fail("; ".join(self.failures[:5]))
        return False


def _scatter_grid(seed=2024, n=200):
    """Random (lam, R, k) away from the sphere and circle nodes."""
    rng = random.Random(seed)
    grid = []
    while len(grid) < n:
        lam, R, k = rng.uniform(0.1, 10), rng.uniform(0.2, 5), rng.uniform(0.05, 10)
        kr = k * R
        if abs(math.sin(kr)) < 1e-6 or abs(scattering.special.j0(kr)) < 1e-6:
            continue
        grid.append((lam, R, k))
    return grid


def test_criterion_01_one_dimensional_closed_forms():
    with Gate(1, "1D bound energy and T + R = 1", 1.0) as g:
        for lam in (0.5, 1.0, 2.0, 5.0):
            e = bound_states.bound_energy_1d(lam).energy
            g.check(abs(e + lam * lam / 4) <= EPS * lam * lam / 4, f"E({lam})={e!r}")
            for i in range(40):
                k = 0.01 + (10 - 0.01) * i / 39
                c = scattering.coefficients_1d(lam, k)
                g.check(abs(c.transmission + c.reflection - 1) <= 1e-15, f"T+R at lam={lam}, k={k}")
                g.check(c.transmission == 4 * k * k / (4 * k * k + lam * lam), f"T at lam={lam}, k={k}")


def test_criterion_02_sphere_bound_state_dual_route():
    rng = random.Random(7)
    with Gate(2, "3D bound state, Lambert W vs Brent", 1.0) as g:
        for _ in range(50):
            strength, R = rng.uniform(1.0100001, 20.0), rng.uniform(0.1, 10.0)
            lam = strength / R
            a, b = bound_states.bound_nu_3d(lam, R), bound_states.bound_nu_3d_numeric(lam, R)
            g.check(abs(a.nu - b.nu) <= 1e-10 * a.nu, f"routes differ at lam*R={strength}")
            for nu in (a.nu, b.nu):
                g.check(abs(bound_states.residual_3d(lam, R, nu)) <= 1e-12, f"residual at lam*R={strength}")
        for _ in range(20):
            strength, R = rng.uniform(0.01, 1.0), rng.uniform(0.1, 10.0)
            lam = strength / R
            g.check(bound_states.bound_nu_3d(lam, R) is None, f"Lambert bound state at lam*R={strength}")
            g.check(bound_states.bound_nu_3d_numeric(lam, R) is None, f"Brent bound state at lam*R={strength}")


def test_criterion_03_consistency_integrals():
    points = [(2.0, 1.0), (5.0, 0.5), (1.5, 2.0), (10.0, 1.0), (3.0, 3.0)]
    with Gate(3, "consistency integrals at the solved bound state", 10.0) as g:
        for lam, R in points:
            nu3 = bound_states.bound_nu_3d(lam, R).nu
            g.check(abs(verify_consistency_3d(lam, R, nu3).computed - 1) <= 1e-7, f"3D at {lam, R}")
            nu2 = bound_states.bound_nu_2d(lam, R).nu
            c2 = verify_consistency_2d(lam, R, nu2).computed
            g.check(abs(c2 - 1 / (lam * R)) <= 1e-6, f"2D at {lam, R}")


def _exclusion_points():
    pts = [(1.5, 1.0, n * math.pi) for n in (1, 2, 3, 7, 11)]
    pts += [(0.7, 2.0, float(mpmath.besseljzero(0, n)) / 2.0) for n in (1, 2, 3, 5, 9)]
    return pts


def test_criterion_04_route_equality():
    with Gate(4, "scattering amplitude route equality", 5.0) as g:
        for lam, R, k in _scatter_grid():
            fd = scattering.amplitude_3d_direct(lam, R, k)
            fp = scattering.amplitude_3d_from_phase(scattering.phase_shift_3d(lam, R, k), k)
            g.check(abs(fd - fp) <= 1e-10 * max(1, abs(fd)), f"3D at {lam, R, k}")
            fd = scattering.amplitude_2d_direct(lam, R, k)
            fp = scattering.amplitude_2d_from_phase(scattering.phase_shift_2d(lam, R, k), k)
            g.check(abs(fd - fp) <= 1e-10 * max(1, abs(fd)), f"2D at {lam, R, k}")
        for i, (lam, R, k) in enumerate(_exclusion_points()):
            if i < 5:
                d, fd = scattering.phase_shift_3d(lam, R, k), scattering.amplitude_3d_direct(lam, R, k)
                fp = scattering.amplitude_3d_from_phase(d, k)
            else:
                d, fd = scattering.phase_shift_2d(lam, R, k), scattering.amplitude_2d_direct(lam, R, k)
                fp = scattering.amplitude_2d_from_phase(d, k)
            g.check(fd == 0 and fp == 0, f"node at {lam, R, k}")


def test_criterion_05_unitarity_and_optical_theorem():
    with Gate(5, "unitarity and optical theorem", 5.0) as g:
        for lam, R, k in _scatter_grid():
            f3 = scattering.amplitude_3d_direct(lam, R, k)
            g.check(abs(abs(1 + 2j * k * f3) - 1) <= 1e-10, f"3D S-matrix at {lam, R, k}")
            g.check(abs(f3.imag - k * abs(f3) ** 2) <= 1e-10, f"optical theorem at {lam, R, k}")
            f2 = scattering.amplitude_2d_direct(lam, R, k)
            s2 = 1 + math.sqrt(2 * math.pi * k) * cmath.exp(0.25j * math.pi) * f2
            g.check(abs(abs(s2) - 1) <= 1e-10, f"2D S-matrix at {lam, R, k}")


def test_criterion_06_principal_value_identity():
    rng = random.Random(11)
    with Gate(6, "principal-value identity", 30.0) as g:
        for _ in range(12):
            R = rng.uniform(0.3, 3.0)
            r = R * rng.uniform(1.1, 4.0)
            k = rng.uniform(0.2, 5.0)
            got = verify_pv_identity(R, r, k).computed
            want = math.pi / (2 * k) * math.sin(k * R) * math.cos(k * r)
            g.check(abs(got - want) <= 1e-6, f"pv at R={R}, r={r}, k={k}: {got - want:.2e}")


def test_criterion_07_fourier_reconstruction():
    radii = (0.25, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0, 3.0)
    with Gate(7, "Fourier reconstruction of bound wavefunctions", 30.0) as g:
        nu3 = bound_states.bound_nu_3d(2, 1).nu
        nu2 = bound_states.bound_nu_2d(2, 1).nu
        for r in radii:
            rep = reconstruct_wavefunction_3d(2, 1, nu3, r, tol=1e-6)
            closed = bound_states.wavefunction_3d(2, 1, nu3, r).value
            g.check(abs(rep.computed - closed) <= 1e-6 * abs(closed), f"3D at r={r}")
            rep = reconstruct_wavefunction_2d(2, 1, nu2, r, tol=1e-6)
            closed = bound_states.wavefunction_2d(2, 1, nu2, r).value
            g.check(abs(rep.computed - closed) <= 1e-6 * abs(closed), f"2D at r={r}")


def test_criterion_08_ode_phase_shifts():
    with Gate(8, "regularised ODE phase shifts", 60.0) as g:
        for k in (0.5, 1.0, 2.0):
            d = math.remainder(ode_phase_shift(3, 2, 1, k, 1 / 50) - scattering.phase_shift_3d(2, 1, k), math.pi)
            g.check(abs(d) <= 1e-4, f"3D at k={k}: {d:.2e}")
            d = math.remainder(ode_phase_shift(2, 2, 1, k, 1 / 50) - scattering.phase_shift_2d(2, 1, k), math.pi)
            g.check(abs(d) <= 1e-3, f"2D at k={k}: {d:.2e}")


def test_criterion_09_bound_pole():
    rng = random.Random(5)
    with Gate(9, "amplitude pole at the bound state", 1.0) as g:
        for _ in range(10):
            strength, R = rng.uniform(1.05, 15.0), rng.uniform(0.2, 5.0)
            lam = strength / R
            nu = bound_states.bound_nu_3d(lam, R).nu
            den = scattering.denominator_3d(lam, R, 1j * nu)
            g.check(abs(den) <= 1e-10, f"|denominator|={abs(den):.2e} at lam*R={strength}")


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    return main(argv, stdout=out, stderr=err), out.getvalue(), err.getvalue()


def test_criterion_10_cli_contract(monkeypatch):
    from tests import test_cli

    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    with Gate(10, "CLI goldens, round trip and exit codes", 5.0) as g:
        for case, argv in sorted(test_cli.CASES.items()):
            for fmt in ("json", "csv"):
                code, out, _ = _cli(argv + ["--format", fmt])
                want = (test_cli.GOLDEN / f"{case}.{fmt}").read_text()
                try:
                    (test_cli._same_json if fmt == "json" else test_cli._same_csv)(out, want)
                except AssertionError:
                    g.check(False, f"golden {case}.{fmt}")
                g.check(code == 0, f"exit code for {case}")
        _, out, _ = _cli(test_cli.CASES["scatter_3d"])
        rec = OutputRecord.from_json(out)
        g.check(OutputRecord.from_json(rec.to_json()) == rec, "JSON round trip")
        g.check(json.loads(rec.to_json()) == json.loads(out), "JSON re-serialisation")
        code, _, err = _cli(["bound", "--dimension", "3", "--lambda", "0.5", "--radius", "1"])
        g.check(code == 3 and json.loads(err)["reason"] == "no_bound_state", "exit 3 below threshold")
        g.check(_cli(["bound", "--dimension", "5", "--lambda", "1"])[0] == 2, "exit 2 on bad flags")
        g.check(_cli(["oracle", "--dimension", "3", "--lambda", "2", "--radius", "1"])[0] == 0, "oracle exit 0")
        from deltashell import oracles

        planted = oracles.OracleReport.compare("planted", 0.0, 1.0, 0.5)
        real = oracles.run_all
        monkeypatch.setattr(oracles, "run_all", lambda spec, profile=None: real(spec) + [planted])
        g.check(_cli(["oracle", "--dimension", "1", "--lambda", "2"])[0] == 1, "oracle exit 1 on failure")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
