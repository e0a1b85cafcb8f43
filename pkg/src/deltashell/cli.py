"""Command-line front end: ``deltashell {bound,scatter,wavefunction,oracle}``.

Every command writes one table, either as JSON::

    {"command": ..., "spec": {...}, "rows": [{...}, ...], "metadata": {...}}

or as CSV (header plus one line per row).  Floats are written in their
shortest round-trip form.

Exit codes: 0 success, 1 an oracle failed, 2 usage error, 3 no bound state.
Errors are reported on stderr as a one-line JSON object with a ``reason``.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import os
import platform
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import __version__, bound_states, oracles, scattering
from .model import PotentialSpec, SpecError, validate

__all__ = ["OutputRecord", "main", "build_parser", "EXIT_OK", "EXIT_ORACLE_FAILED", "EXIT_USAGE", "EXIT_NO_BOUND_STATE"]

EXIT_OK = 0
EXIT_ORACLE_FAILED = 1
EXIT_USAGE = 2
EXIT_NO_BOUND_STATE = 3


class CommandError(Exception):
    def __init__(self, code: int, reason: str, message: str):
        super().__init__(message)
        self.code = code
        self.reason = reason


@dataclass
class OutputRecord:
    command: str
    spec: PotentialSpec
    rows: list[dict[str, Any]]
    metadata: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "spec": self.spec.to_dict(),
            "rows": [{key: _finite_or_none(v) for key, v in row.items()} for row in self.rows],
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "OutputRecord":
        return cls(data["command"], PotentialSpec.from_dict(data["spec"]), list(data["rows"]), dict(data["metadata"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.rows:
            columns = list(self.rows[0])
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(columns)
            for row in self.rows:
                writer.writerow([_csv_cell(row.get(col)) for col in columns])
        return buf.getvalue()


def _finite_or_none(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else ""
    return str(value)


# --------------------------------------------------------------------------
# argument handling
# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would print usage and exit 2
        raise CommandError(EXIT_USAGE, "usage", message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dimension", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True, help="coupling strength (> 0)")
    p.add_argument("--radius", type=float, default=None, help="shell radius (2D and 3D)")
    p.add_argument("--tol", type=float, default=1e-8, help="quadrature tolerance")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None, help="output file (default stdout)")
    p.add_argument("--config", default=None, help="file of key=value defaults")


def _k_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--k-min", type=float, default=None)
    p.add_argument("--k-max", type=float, default=None)
    p.add_argument("--k-steps", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="deltashell", description="Delta point, circle and sphere interactions.")
    parser.add_argument("--version", action="version", version=f"deltashell {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="bound-state energy")
    _common(p)

    p = sub.add_parser("scatter", help="phase shifts, amplitudes, 1D coefficients")
    _common(p)
    _k_grid_flags(p)

    p = sub.add_parser("wavefunction", help="sample a bound or scattering wavefunction")
    _common(p)
    p.add_argument("--state", choices=("bound", "scattering"), default="bound")
    p.add_argument("--r-min", type=float, required=True)
    p.add_argument("--r-max", type=float, required=True)
    p.add_argument("--r-steps", type=int, default=100)
    p.add_argument("--k", type=float, default=None, help="wavenumber (scattering state)")
    p.add_argument("--cos-theta", type=float, default=1.0, help="scattering angle cosine")
    p.add_argument("--normalize", action="store_true", help="unit L2 norm instead of N = 1")

    p = sub.add_parser("oracle", help="run the independent consistency checks")
    _common(p)
    return parser


def read_config(path: str) -> list[str]:
    """Turn ``key=value`` lines into ``--key value`` arguments."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CommandError(EXIT_USAGE, "bad_config", f"cannot read config {path!r}: {exc}") from None
    args: list[str] = []
    for number, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise CommandError(EXIT_USAGE, "bad_config", f"{path}:{number}: expected key=value")
        flag = "--" + key.replace("_", "-")
        if key in ("normalize",):
            if value.lower() in ("1", "true", "yes"):
                args.append(flag)
            continue
        args += [flag, value]
    return args


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    argv = list(argv)
    pre = _Parser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        # config values go first so that explicit flags, parsed later, win
        argv = argv[:1] + read_config(known.config) + argv[1:]
    return build_parser().parse_args(argv)


def _spec(ns: argparse.Namespace) -> PotentialSpec:
    radius = None if ns.dimension == 1 else ns.radius
    try:
        return validate(PotentialSpec(ns.dimension, ns.lam, radius))
    except SpecError as exc:
        raise CommandError(EXIT_USAGE, exc.reason, str(exc)) from None


def _linspace(lo: float, hi: float, steps: int) -> list[float]:
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def _k_values(ns: argparse.Namespace) -> list[float]:
    grid = (ns.k_min, ns.k_max, ns.k_steps)
    if ns.k is not None:
        if any(v is not None for v in grid):
            raise CommandError(EXIT_USAGE, "usage", "give either --k or --k-min/--k-max/--k-steps")
        ks = [ns.k]
    elif all(v is not None for v in grid):
        if ns.k_steps < 1 or not ns.k_max >= ns.k_min:
            raise CommandError(EXIT_USAGE, "usage", "k grid needs k-steps >= 1 and k-max >= k-min")
        ks = _linspace(ns.k_min, ns.k_max, ns.k_steps)
    else:
        raise CommandError(EXIT_USAGE, "usage", "need --k or all of --k-min, --k-max, --k-steps")
    if not all(k > 0 and math.isfinite(k) for k in ks):
        raise CommandError(EXIT_USAGE, "nonpositive_k", "wavenumbers must be positive")
    return ks


def _metadata(ns: argparse.Namespace) -> dict[str, Any]:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        when = _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc)
    else:
        when = _dt.datetime.now(tz=_dt.timezone.utc)
    return {
        "tolerances": {"tol": ns.tol},
        "versions": {"deltashell": __version__, "python": platform.python_version()},
        "timestamp": when.strftime("%Y-%m-%dT%H:%M:%SZ"),
    }


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _no_bound_state(spec: PotentialSpec) -> CommandError:
    return CommandError(
        EXIT_NO_BOUND_STATE, "no_bound_state",
        f"no bound state for lambda*R = {spec.lam * spec.radius:g} <= 1",
    )


def _bound_row(result: bound_states.BoundStateResult) -> dict[str, Any]:
    return {"nu": result.nu, "energy": result.energy, "method": result.method, "residual": result.residual}


def _solve_2d(spec: PotentialSpec) -> bound_states.BoundStateResult:
    try:
        return bound_states.bound_nu_2d(spec.lam, spec.radius)
    except bound_states.BoundStateUnderflowError as exc:
        raise CommandError(EXIT_NO_BOUND_STATE, "bound_state_underflow", str(exc)) from None


def cmd_bound(ns: argparse.Namespace) -> OutputRecord:
    spec = _spec(ns)
    if spec.dimension == 1:
        rows = [_bound_row(bound_states.bound_energy_1d(spec.lam))]
    elif spec.dimension == 2:
        rows = [_bound_row(_solve_2d(spec))]
    else:
        closed = bound_states.bound_nu_3d(spec.lam, spec.radius)
        numeric = bound_states.bound_nu_3d_numeric(spec.lam, spec.radius)
        if closed is None or numeric is None:
            raise _no_bound_state(spec)
        rows = [_bound_row(closed), _bound_row(numeric)]
    return OutputRecord("bound", spec, rows, _metadata(ns))


def cmd_scatter(ns: argparse.Namespace) -> OutputRecord:
    spec = _spec(ns)
    rows = []
    for k in _k_values(ns):
        if spec.dimension == 1:
            c = scattering.coefficients_1d(spec.lam, k)
            rows.append({"k": k, "transmission": c.transmission, "reflection": c.reflection})
            continue
        direct = scattering.scatter(spec, k, "direct")
        partial = scattering.scatter(spec, k, "partial_wave")
        f, g = direct.amplitude, partial.amplitude
        row = {
            "k": k,
            "delta": direct.phase_shift,
            "re_f": f.real,
            "im_f": f.imag,
            "re_f_pw": g.real,
            "im_f_pw": g.imag,
            "route_difference": abs(f - g),
        }
        if spec.dimension == 3:
            row["cross_section"] = scattering.cross_section_3d(f, k)
        rows.append(row)
    return OutputRecord("scatter", spec, rows, _metadata(ns))


def cmd_wavefunction(ns: argparse.Namespace) -> OutputRecord:
    spec = _spec(ns)
    if ns.r_steps < 1 or not ns.r_max >= ns.r_min:
        raise CommandError(EXIT_USAGE, "usage", "r grid needs r-steps >= 1 and r-max >= r-min")
    grid = _linspace(ns.r_min, ns.r_max, ns.r_steps)
    rows = []
    if ns.state == "scattering":
        if spec.dimension != 3:
            raise CommandError(EXIT_USAGE, "usage", "scattering wavefunctions are sampled in 3D only")
        if ns.k is None or not ns.k > 0:
            raise CommandError(EXIT_USAGE, "nonpositive_k", "--k > 0 is required for a scattering state")
        if not ns.r_min > spec.radius:
            raise CommandError(EXIT_USAGE, "usage", "scattering samples need r-min > radius")
        if not -1.0 <= ns.cos_theta <= 1.0:
            raise CommandError(EXIT_USAGE, "usage", "--cos-theta must lie in [-1, 1]")
        for r in grid:
            psi = scattering.sample_scattering_solution_3d(spec.lam, spec.radius, ns.k, r, ns.cos_theta)
            rows.append({"r": r, "re_psi": psi.real, "im_psi": psi.imag, "region": "outside"})
        return OutputRecord("wavefunction", spec, rows, _metadata(ns))

    if spec.dimension == 1:
        for x in grid:
            sample = bound_states.wavefunction_1d(spec.lam, x)
            rows.append({"r": x, "psi": sample.value, "region": sample.region})
        return OutputRecord("wavefunction", spec, rows, _metadata(ns))

    if spec.dimension == 2:
        nu = _solve_2d(spec).nu
    else:
        found = bound_states.bound_nu_3d(spec.lam, spec.radius)
        if found is None:
            raise _no_bound_state(spec)
        nu = found.nu
    if not ns.r_min > 0:
        raise CommandError(EXIT_USAGE, "usage", "radial grid needs r-min > 0")
    norm = bound_states.normalize(spec, nu, tol=max(ns.tol, 1e-14)) if ns.normalize else None
    for r in grid:
        sample = bound_states.wavefunction(spec, nu, r, norm)
        rows.append({"r": r, "psi": sample.value, "region": sample.region})
    return OutputRecord("wavefunction", spec, rows, _metadata(ns))


def cmd_oracle(ns: argparse.Namespace) -> OutputRecord:
    spec = _spec(ns)
    rows = []
    for report in oracles.run_all(spec):
        expected, computed = complex(report.expected), complex(report.computed)
        rows.append({
            "name": report.name,
            "re_expected": expected.real,
            "im_expected": expected.imag,
            "re_computed": computed.real,
            "im_computed": computed.imag,
            "abs_diff": report.abs_diff,
            "tol": report.tol,
            "passed": report.passed,
        })
    return OutputRecord("oracle", spec, rows, _metadata(ns))


COMMANDS = {
    "bound": cmd_bound,
    "scatter": cmd_scatter,
    "wavefunction": cmd_wavefunction,
    "oracle": cmd_oracle,
}


def _emit(record: OutputRecord, ns: argparse.Namespace, stdout) -> None:
    text = record.to_json() if ns.format == "json" else record.to_csv()
    if ns.output:
        with open(ns.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = parse_args(argv)
        record = COMMANDS[ns.command](ns)
        _emit(record, ns, stdout)
    except CommandError as exc:
        stderr.write(json.dumps({"reason": exc.reason, "message": str(exc)}) + "\n")
        return exc.code
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if ns.command == "oracle" and not all(row["passed"] for row in record.rows):
        return EXIT_ORACLE_FAILED
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
