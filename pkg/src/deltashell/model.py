"""Problem definitions shared by every solver.

Units follow hbar = 2m = 1, so E = k**2 for scattering and E = -nu**2 for
bound states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Literal, Mapping

__all__ = ["SpecError", "PotentialSpec", "EnergyParam", "validate", "require_positive"]


class SpecError(ValueError):
    """Invalid problem definition; ``reason`` is a stable machine-readable code."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


@dataclass(frozen=True)
class PotentialSpec:
    """Attractive delta interaction on a point (d=1), circle (d=2) or sphere (d=3).

    ``lam`` is the coupling strength (the JSON key is ``"lambda"``) and
    ``radius`` the shell radius, which is ``None`` in one dimension.
    """

    dimension: int
    lam: float
    radius: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return {"dimension": self.dimension, "lambda": self.lam, "radius": self.radius}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PotentialSpec":
        try:
            dimension = data["dimension"]
            lam = data["lambda"]
        except KeyError as exc:
            raise SpecError("missing_field", f"missing field {exc.args[0]!r}") from None
        return cls(dimension=dimension, lam=lam, radius=data.get("radius"))


@dataclass(frozen=True)
class EnergyParam:
    kind: Literal["bound", "scattering"]
    nu: float | None = None
    k: float | None = None

    def __post_init__(self):
        if self.kind == "bound":
            ok = self.nu is not None and self.k is None and self.nu > 0
        elif self.kind == "scattering":
            ok = self.k is not None and self.nu is None and self.k > 0
        else:
            raise SpecError("bad_energy_kind", f"unknown energy kind {self.kind!r}")
        if not ok:
            raise SpecError(
                "bad_energy_param",
                "bound energies need only nu > 0, scattering energies only k > 0",
            )

    @property
    def energy(self) -> float:
        return -self.nu ** 2 if self.kind == "bound" else self.k ** 2


def validate(spec: PotentialSpec) -> PotentialSpec:
    """Check ``spec`` and return its normal form (radius dropped in 1D).

    Raises :class:`SpecError` with reason ``bad_dimension``,
    ``nonpositive_lambda`` or ``nonpositive_radius``.
    """
    dim = spec.dimension
    if isinstance(dim, bool) or not isinstance(dim, int) or dim not in (1, 2, 3):
        raise SpecError("bad_dimension", f"dimension must be 1, 2 or 3, got {dim!r}")
    lam = _as_float(spec.lam, "lambda")
    if not lam > 0:
        raise SpecError("nonpositive_lambda", f"lambda must be positive (attractive), got {lam}")
    if dim == 1:
        return PotentialSpec(1, lam, None)
    if spec.radius is None:
        raise SpecError("nonpositive_radius", f"radius is required in {dim}D")
    radius = _as_float(spec.radius, "radius")
    if not radius > 0:
        raise SpecError("nonpositive_radius", f"radius must be positive, got {radius}")
    return PotentialSpec(dim, lam, radius)


def _as_float(value: Any, name: str) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise SpecError(f"bad_{name}", f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(out):
        raise SpecError(f"bad_{name}", f"{name} must be finite, got {value!r}")
    return out


def require_positive(value: Any, name: str) -> float:
    """``float(value)`` if finite and > 0, else SpecError ``nonpositive_<name>``."""
    out = _as_float(value, name)
    if not out > 0:
        raise SpecError(f"nonpositive_{name}", f"{name} must be positive, got {out}")
    return out
