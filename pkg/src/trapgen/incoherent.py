"""Broadband, spatially incoherent illumination as random-phase Hermite-Gaussian sums."""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analytic import SystemSpec
from .errors import GeometryError, InvalidArgument
from .grid import Field
from .optics import FilterSpec, MaskSpec, Volume, axial_scan, propagate_4f


@dataclass(frozen=True)
class SourceSpec:
    """Light source made of ``n_spectral`` wavelengths, each a sum of ``n_modes`` HG modes.

    Wavelengths are spread uniformly over ``lambda0 +- fwhm`` and weighted by a
    Lorentzian of full width ``fwhm``. ``fwhm = 0`` means monochromatic.
    """

    lambda0: float
    fwhm: float
    n_spectral: int
    n_modes: int
    mode_waist: float
    seed: int = 0
    draws: int = 1

    def __post_init__(self):
        if self.n_spectral < 1 or self.n_modes < 1 or self.draws < 1:
            raise InvalidArgument("n_spectral, n_modes and draws must be >= 1")
        if self.fwhm < 0:
            raise InvalidArgument("fwhm must be non-negative")
        if not (self.mode_waist > 0 and self.lambda0 > 0):
            raise InvalidArgument("mode_waist and lambda0 must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidArgument("seed must fit in an unsigned 64-bit integer")

    def wavelengths(self) -> np.ndarray:
        if self.n_spectral == 1 or self.fwhm == 0:
            return np.full(self.n_spectral, self.lambda0)
        return np.linspace(self.lambda0 - self.fwhm, self.lambda0 + self.fwhm, self.n_spectral)

    def weights(self) -> np.ndarray:
        lor = lorentzian(self.wavelengths(), self.lambda0, self.fwhm)
        return lor / lor.sum()


def default_mode_waist(mask: MaskSpec) -> float:
    """Half of the mask array's half extent."""
    return mask.array_extent / 4


def lorentzian(lam, lambda0: float, fwhm: float):
    """Unnormalised Lorentzian line shape, 1 at the centre and 1/2 at +-fwhm/2."""
    lam = np.asarray(lam, float)
    if fwhm == 0:
        return np.where(lam == lambda0, 1.0, 0.0)
    return 1.0 / (1.0 + ((lam - lambda0) / (0.5 * fwhm)) ** 2)


def lorentzian_weight(lambda_i: float, spec: SourceSpec) -> float:
    """Weight of one component, normalised over the source's wavelength set."""
    lams = spec.wavelengths()
    total = lorentzian(lams, spec.lambda0, spec.fwhm).sum()
    return float(lorentzian(lambda_i, spec.lambda0, spec.fwhm) / total)


def mode_indices(n_modes: int) -> list[tuple[int, int]]:
    """First ``n_modes`` (m, n) pairs ordered by total order m + n, then by descending m."""
    out = []
    order = 0
    while len(out) < n_modes:
        for m in range(order, -1, -1):
            out.append((m, order - m))
            if len(out) == n_modes:
                break
        order += 1
    return out


def _hermite_functions(m_max: int, x: np.ndarray, waist: float) -> np.ndarray:
    """Unit-power 1D HG profiles u_0..u_{m_max} sampled at x (rows)."""
    xi = math.sqrt(2) * x / waist
    out = np.empty((m_max + 1, x.size))
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * xi * xi)
    if m_max >= 1:
        out[1] = math.sqrt(2) * xi * out[0]
    for m in range(1, m_max):
        out[m + 1] = math.sqrt(2 / (m + 1)) * xi * out[m] - math.sqrt(m / (m + 1)) * out[m - 1]
    return out * math.sqrt(math.sqrt(2) / waist)


def _check_mode_fits(order: int, waist: float, geometry: Field) -> None:
    half = min(-geometry.x[0], geometry.x[-1], -geometry.y[0], geometry.y[-1])
    if waist * math.sqrt(order + 1) > half:
        raise GeometryError(
            f"HG order {order} with waist {waist:.4g} m reaches {waist * math.sqrt(order + 1):.4g} m, "
            f"beyond the grid half extent {half:.4g} m")


def hg_mode(m: int, n: int, waist: float, geometry: Field) -> Field:
    """Unit-power HG_{m,n} amplitude on ``geometry`` (m along x, n along y)."""
    if m < 0 or n < 0:
        raise InvalidArgument("mode indices must be non-negative")
    _check_mode_fits(max(m, n), waist, geometry)
    ux = _hermite_functions(m, geometry.x, waist)[m]
    uy = _hermite_functions(n, geometry.y, waist)[n]
    return geometry.with_samples((uy[:, None] * ux[None, :]).astype(np.complex128))


def mode_phases(seed: int, spectral_index: int, draw_index: int, n_modes: int) -> np.ndarray:
    """Uniform phases in [0, 2 pi) from a counter-based generator keyed on the indices."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFF, seed >> 32, spectral_index, draw_index])
    rng = np.random.Generator(np.random.Philox(ss))
    return rng.uniform(0.0, 2 * np.pi, n_modes)


def sample_speckle(spec: SourceSpec, spectral_index: int, draw_index: int, geometry: Field) -> Field:
    """Random-phase superposition of the first ``n_modes`` HG modes, unit total power."""
    if not (0 <= spectral_index < spec.n_spectral and 0 <= draw_index < spec.draws):
        raise InvalidArgument("spectral or draw index outside the source spec")
    idx = mode_indices(spec.n_modes)
    top = max(max(m, n) for m, n in idx)
    _check_mode_fits(top, spec.mode_waist, geometry)
    theta = mode_phases(spec.seed, spectral_index, draw_index, spec.n_modes)
    C = np.zeros((top + 1, top + 1), np.complex128)
    for (m, n), th in zip(idx, theta):
        C[n, m] = np.exp(1j * th)
    C /= math.sqrt(spec.n_modes)
    Ux = _hermite_functions(top, geometry.x, spec.mode_waist)
    Uy = _hermite_functions(top, geometry.y, spec.mode_waist)
    return geometry.with_samples(Uy.T @ C @ Ux)


def incoherent_volume(spec: SourceSpec, mask: MaskSpec | None, filt: FilterSpec | None,
                      sys: SystemSpec, z_values, geometry: Field, workers: int = 1,
                      order=None) -> Volume:
    """Lorentzian-weighted sum of output intensity volumes over all components and draws.

    Each component is propagated at its own wavelength with the mask and
    filter geometry fixed. ``order`` permutes the accumulation order (for
    testing); results are accumulated in that order independent of
    ``workers``.
    """
    lams = spec.wavelengths()
    w = spec.weights()
    jobs = [(i, d) for i in (range(spec.n_spectral) if order is None else order) for d in range(spec.draws)]

    def run(job):
        i, d = job
        field = sample_speckle(spec, i, d, geometry)
        out = propagate_4f(field, mask, filt, sys, wavelength=float(lams[i]))
        return axial_scan(out, z_values, float(lams[i]))

    acc = None
    geom = None
    step = max(1, workers)
    with ThreadPoolExecutor(step) as pool:
        # chunks keep at most ``workers`` volumes in memory; summation order stays fixed
        for start in range(0, len(jobs), step):
            chunk = jobs[start:start + step]
            for (i, _), vol in zip(chunk, pool.map(run, chunk)):
                scale = w[i] / spec.draws
                if acc is None:
                    acc = [scale * p for p in vol.planes]
                    geom = vol.geometry
                else:
                    for k, p in enumerate(vol.planes):
                        acc[k] += scale * p
    return Volume(np.asarray(z_values, float), tuple(acc),
                  Field(geom.dx, geom.dy, acc[0], geom.origin))


def write_manifest(path, spec: SourceSpec) -> None:
    data = {
        "seed": spec.seed,
        "lambda0_m": spec.lambda0,
        "fwhm_m": spec.fwhm,
        "n_modes": spec.n_modes,
        "mode_waist_m": spec.mode_waist,
        "draws_per_component": spec.draws,
        "wavelengths_m": [float(x) for x in spec.wavelengths()],
        "weights": [float(x) for x in spec.weights()],
        "modes": mode_indices(spec.n_modes),
    }
    Path(path).write_text(json.dumps(data, indent=2) + "\n")
