"""Darkness maps over mask phase and iris radius, iris optimisation, dual-mask design.

Iris radii are dimensionless here: ``b = 1`` puts the iris edge on the first
zero of J1, i.e. a physical radius ``x11 f1 / (a k)``.
"""
from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import optimize, special

from .analytic import DARK_TA, X01, X11, MaskParams, SystemSpec, dual_species_balance
from .errors import InvalidArgument
from .optics import MaskSpec


class BoundarySolution(UserWarning):
    """The optimum sits on the edge of the searched range."""


@dataclass(frozen=True)
class SweepGrid:
    """``darkness[i, j]`` belongs to ``phi_values[i]`` and ``b_values[j]``."""

    phi_values: np.ndarray
    b_values: np.ndarray
    darkness: np.ndarray

    def __post_init__(self):
        for name in ("phi_values", "b_values"):
            ax = np.asarray(getattr(self, name))
            if ax.ndim != 1 or ax.size == 0 or np.any(np.diff(ax) <= 0):
                raise InvalidArgument(f"{name} must be a non-empty strictly increasing 1D array")
        if np.shape(self.darkness) != (len(self.phi_values), len(self.b_values)):
            raise InvalidArgument("darkness shape must be (len(phi_values), len(b_values))")

    def argmin(self) -> tuple[float, float, float]:
        i, j = np.unravel_index(int(np.argmin(self.darkness)), self.darkness.shape)
        return float(self.phi_values[i]), float(self.b_values[j]), float(self.darkness[i, j])


def center_darkness(t_a: complex, b_units, t_b: complex = 1.0):
    """On-axis intensity over the background for aperture amplitude ``t_a``.

    Independent of focal lengths and wavelength once ``b`` is in units of the
    first J1 zero.
    """
    j0 = special.j0(np.asarray(b_units, float) * X11)
    return np.abs(t_b + (t_a - t_b) * (1 - j0)) ** 2 / abs(t_b) ** 2


def darkness_map(t_a_mag: float, phi_values, b_values, t_b: float = 1.0) -> SweepGrid:
    """Centre darkness over a (phase, iris radius) grid; phases in radians."""
    phi = np.asarray(phi_values, float)
    b = np.asarray(b_values, float)
    if phi.size == 0 or b.size == 0:
        raise InvalidArgument("phi and b ranges must be non-empty")
    t_a = t_a_mag * np.exp(1j * phi)[:, None]
    return SweepGrid(phi, b, center_darkness(t_a, b[None, :], t_b))


def find_darkest_b(t_a: complex, b_search_range=(0.05, 2.0), t_b: complex = 1.0, n_coarse: int = 400):
    """Iris radius (in J1-zero units) minimising the centre intensity.

    A coarse scan brackets the minimum, then golden-section search refines it.
    Emits :class:`BoundarySolution` when the best coarse point is an endpoint.
    Returns ``(b_opt, darkness)``.
    """
    lo, hi = b_search_range
    if not 0 < lo < hi:
        raise InvalidArgument("b_search_range must satisfy 0 < lo < hi")
    bs = np.linspace(lo, hi, n_coarse)
    f = lambda b: float(center_darkness(t_a, b, t_b))
    vals = np.array([f(b) for b in bs])
    i = int(np.argmin(vals))
    if i == 0 or i == len(bs) - 1:
        warnings.warn(f"darkest iris radius lies on the search boundary b = {bs[i]:.4g}",
                      BoundarySolution, stacklevel=2)
        return float(bs[i]), float(vals[i])
    res = optimize.minimize_scalar(f, bracket=(bs[i - 1], bs[i], bs[i + 1]), method="golden",
                                   tol=1e-12)
    if res.fun <= vals[i]:
        return float(res.x), float(res.fun)
    return float(bs[i]), float(vals[i])


def design_dual_mask(alpha_bright: float, alpha_dark: float, a_bright: float, d: float,
                     dark_variant: str = "t_a-scaled", grid_n: int = 2,
                     dark_efficiency: float | None = None) -> MaskSpec:
    """Dual mask with bright holes and interleaved dark disks sharing one iris.

    Opaque variant: dark disks of radius ``a x01 / x11`` with zero
    transmission. Scaled variant: disks of radius ``a`` with amplitude
    ``0.287 t_b``.
    """
    t_b = dual_species_balance(alpha_bright, alpha_dark, dark_variant, dark_efficiency)
    if dark_variant == "opaque":
        dark = MaskParams(a_bright * X01 / X11, d, 0.0, t_b)
    else:
        dark = MaskParams(a_bright, d, DARK_TA * t_b, t_b)
    return MaskSpec("dual", MaskParams(a_bright, d, 1.0, t_b), grid_n, dark)


def write_sweep(path, sweep: SweepGrid, params: dict) -> None:
    """CSV matrix (first row: b axis, first column: phi axis) plus ``<path>.json``."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["# phi_rad\\b_units"] + [repr(float(b)) for b in sweep.b_values])
        for phi, row in zip(sweep.phi_values, sweep.darkness):
            w.writerow([repr(float(phi))] + [repr(float(v)) for v in row])
    phi_opt, b_opt, dark = sweep.argmin()
    meta = dict(params)
    meta.update({"n_phi": len(sweep.phi_values), "n_b": len(sweep.b_values),
                 "minimum": {"phi_rad": phi_opt, "b_units": b_opt, "darkness": dark}})
    Path(str(path) + ".json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def read_sweep(path) -> SweepGrid:
    rows = list(csv.reader(open(path)))
    b = np.array([float(v) for v in rows[0][1:]])
    phi = np.array([float(r[0]) for r in rows[1:]])
    dark = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    return SweepGrid(phi, b, dark)
