"""FFT model of the 4f filter: masks, Fourier filters, lenses and defocus scans."""
from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import grid
from .analytic import X11, MaskParams, SystemSpec, bessel_zero
from .errors import AliasingError, GeometryError, InvalidArgument, ResolutionError
from .grid import Field


class ValidityWarning(UserWarning):
    """Propagation left the regime where the angular-spectrum result is trustworthy."""


@dataclass(frozen=True)
class MaskSpec:
    """Array mask: ``grid_n`` x ``grid_n`` apertures on a square lattice of pitch ``params.d``.

    ``dual_params`` describes the interleaved dark disks of a dual mask; its
    ``a`` is the dark-disk radius and its ``t_a`` the disk amplitude.
    """

    kind: str
    params: MaskParams
    grid_n: int = 1
    dual_params: MaskParams | None = None

    def __post_init__(self):
        if self.kind not in ("bright", "dark", "dual"):
            raise InvalidArgument(f"mask kind must be bright, dark or dual, got {self.kind!r}")
        if self.grid_n < 1:
            raise InvalidArgument("grid_n must be >= 1")
        if self.kind == "dual":
            if self.dual_params is None:
                raise InvalidArgument("dual masks need dual_params")
            if abs(self.params.t_a - 1) > 1e-12:
                raise InvalidArgument("dual masks need fully transmitting bright apertures (t_a = 1)")
            if not abs(self.dual_params.t_a) < abs(self.params.t_b):
                raise InvalidArgument("dual dark disks must transmit less than the background")

    @property
    def array_extent(self) -> float:
        return self.grid_n * self.params.d

    def site_centers(self) -> np.ndarray:
        """Mask-plane centres of the primary apertures, shape (n*n, 2)."""
        off = (np.arange(self.grid_n) - (self.grid_n - 1) / 2) * self.params.d
        X, Y = np.meshgrid(off, off)
        return np.column_stack([X.ravel(), Y.ravel()])

    def dual_centers(self) -> np.ndarray:
        """Centres of the interleaved dark disks (one per interior cell corner)."""
        if self.grid_n < 2:
            return np.zeros((0, 2))
        off = (np.arange(self.grid_n - 1) - (self.grid_n - 2) / 2) * self.params.d
        X, Y = np.meshgrid(off, off)
        return np.column_stack([X.ravel(), Y.ravel()])


@dataclass(frozen=True)
class FilterSpec:
    """Fourier-plane filter.

    ``iris``: open disk of radius ``b``. ``zone``: open central disk of radius
    ``b`` plus the listed annuli ``rings = [(inner, outer), ...]``.
    """

    kind: str
    b: float
    rings: tuple = ()

    def __post_init__(self):
        if self.kind not in ("iris", "zone"):
            raise InvalidArgument(f"filter kind must be iris or zone, got {self.kind!r}")
        if not self.b > 0:
            raise InvalidArgument("filter radius b must be positive")
        rings = tuple((float(lo), float(hi)) for lo, hi in self.rings)
        prev = self.b
        for lo, hi in rings:
            if not (prev <= lo < hi):
                raise InvalidArgument(f"zone rings must be sorted, disjoint and outside b: {rings}")
            prev = hi
        object.__setattr__(self, "rings", rings)


@dataclass(frozen=True)
class Volume:
    z_values: np.ndarray
    planes: tuple
    geometry: Field

    def __post_init__(self):
        if len(self.z_values) != len(self.planes):
            raise InvalidArgument("one plane per z value required")
        for p in self.planes:
            if p.shape != self.geometry.samples.shape:
                raise InvalidArgument("all planes must share the volume geometry")

    def nearest(self, z: float) -> tuple[int, float]:
        i = int(np.argmin(np.abs(np.asarray(self.z_values) - z)))
        return i, float(self.z_values[i])


# -- rendering -----------------------------------------------------------------

def _disk_mask(geometry: Field, centers, radius: float) -> np.ndarray:
    X, Y = geometry.coords()
    out = np.zeros(geometry.samples.shape, bool)
    for cx, cy in centers:
        # sample-centre membership, restricted to the bounding box for speed
        ix = slice(max(0, int(np.searchsorted(geometry.x, cx - radius))),
                   int(np.searchsorted(geometry.x, cx + radius, side="right")))
        iy = slice(max(0, int(np.searchsorted(geometry.y, cy - radius))),
                   int(np.searchsorted(geometry.y, cy + radius, side="right")))
        sub = (X[:, ix] - cx) ** 2 + (Y[iy, :] - cy) ** 2 <= radius ** 2
        out[iy, ix] |= sub
    return out


def render_mask(spec: MaskSpec, geometry: Field) -> Field:
    """Transmission amplitude of the mask sampled on ``geometry``."""
    p = spec.params
    radii = [p.a] + ([spec.dual_params.a] if spec.kind == "dual" else [])
    pitch = max(geometry.dx, geometry.dy)
    for r in radii:
        if 2 * r / pitch < 8:
            raise ResolutionError(
                f"aperture radius {r:.4g} m spans {2 * r / pitch:.2f} samples across its diameter; "
                f"at least 8 are needed, i.e. pitch <= {2 * r / 8:.4g} m", required_pitch=2 * r / 8)
    ext = min(geometry.extent)
    if ext < 2 * spec.array_extent * (1 - 1e-9):
        raise GeometryError(
            f"grid extent {ext:.4g} m is less than twice the mask array extent "
            f"{spec.array_extent:.4g} m; enlarge the grid for a guard band")
    background = 0.0 if spec.kind == "bright" else complex(p.t_b)
    t = np.full(geometry.samples.shape, background, dtype=np.complex128)
    aperture = 1.0 + 0j if spec.kind == "dual" else p.aperture_amplitude
    t[_disk_mask(geometry, spec.site_centers(), p.a)] = aperture
    if spec.kind == "dual":
        q = spec.dual_params
        t[_disk_mask(geometry, spec.dual_centers(), q.a)] = q.aperture_amplitude
    return geometry.with_samples(t)


def render_filter(spec: FilterSpec, geometry: Field) -> Field:
    """Binary {0, 1} Fourier-plane transmission sampled on ``geometry``."""
    X, Y = geometry.coords()
    r2 = X ** 2 + Y ** 2
    half = min(-geometry.x[0], geometry.x[-1], -geometry.y[0], geometry.y[-1])
    corner = math.hypot(max(-geometry.x[0], geometry.x[-1]), max(-geometry.y[0], geometry.y[-1]))
    if spec.kind == "iris" and spec.b >= corner:
        return geometry.with_samples(np.ones(geometry.samples.shape))
    outer = max([spec.b] + [hi for _, hi in spec.rings])
    if outer > half:
        raise GeometryError(
            f"filter radius {outer:.4g} m exceeds the Fourier-plane half extent {half:.4g} m")
    t = r2 <= spec.b ** 2
    for lo, hi in spec.rings:
        t |= (r2 >= lo ** 2) & (r2 <= hi ** 2)
    return geometry.with_samples(t.astype(float))


def zone_filter_radii(a: float, sys: SystemSpec, n_rings: int) -> list[tuple[float, float]]:
    """Central disk ``(0, r1)`` followed by the ``n_rings`` transmitting annuli.

    Ring ``n`` spans the J1 zeros ``x_{2n}`` to ``x_{2n+1}`` mapped to the
    Fourier plane by ``f1 x / (a k)``.
    """
    if n_rings < 0:
        raise InvalidArgument("n_rings must be >= 0")
    scale = sys.f1 / (a * sys.k)
    out = [(0.0, X11 * scale)]
    for n in range(1, n_rings + 1):
        out.append((bessel_zero(1, 2 * n) * scale, bessel_zero(1, 2 * n + 1) * scale))
    return out


def zone_filter(a: float, sys: SystemSpec, n_rings: int) -> FilterSpec:
    radii = zone_filter_radii(a, sys, n_rings)
    return FilterSpec("zone", radii[0][1], tuple(radii[1:]))


def iris_filter(a: float, sys: SystemSpec, b_units: float = 1.0) -> FilterSpec:
    """Iris with radius given in units of the first J1 zero."""
    return FilterSpec("iris", b_units * sys.b_unit(a))


# -- propagation ---------------------------------------------------------------

def check_sampling(f: Field, threshold: float = 0.75 * np.pi, run: int = 3) -> None:
    """Raise :class:`AliasingError` if the field carries an undersampled phase chirp.

    A chirp is flagged when ``run`` consecutive neighbour pairs (both well
    above the noise floor) advance in phase by more than ``threshold`` with
    the same sign. Isolated phase steps at hard mask edges are allowed.
    """
    A = np.asarray(f.samples)
    if not np.iscomplexobj(A):
        return
    mag = np.abs(A)
    floor = 1e-3 * mag.max() if mag.size else 0.0
    worst = math.inf
    X, Y = f.coords()
    for axis in (0, 1):
        a0 = np.moveaxis(A, axis, 0)
        m0 = np.moveaxis(mag, axis, 0) > floor
        dphi = np.angle(a0[1:] * np.conj(a0[:-1]))
        ok = m0[1:] & m0[:-1]
        pos = ok & (dphi > threshold)
        neg = ok & (dphi < -threshold)
        for s in (pos, neg):
            hit = s[: s.shape[0] - run + 1].copy()
            for k in range(1, run):
                hit &= s[k: s.shape[0] - run + 1 + k]
            if hit.any():
                idx = np.argwhere(hit)
                r = np.hypot(*np.broadcast_arrays(X, Y))
                r = np.moveaxis(r, axis, 0)[:-run + 1 if run > 1 else None]
                worst = min(worst, float(r[tuple(idx.T)].min()))
    if worst < math.inf:
        raise AliasingError(
            f"field phase varies faster than the grid can sample beyond radius {worst:.4g} m; "
            f"keep the field within a full width of {2 * worst:.4g} m or refine the pitch",
            max_safe_extent=2 * worst)


def lens_fourier(f_in: Field, focal: float, wavelength: float, check: bool = True) -> Field:
    """Front-to-back focal-plane transform of a thin lens.

    The output pitch is ``wavelength * focal / (n * dx)``. Total power is
    conserved and two successive transforms with equal focal length return
    the input reflected through the origin.
    """
    if not (focal > 0 and wavelength > 0):
        raise InvalidArgument("focal length and wavelength must be positive")
    if check:
        check_sampling(f_in)
    A = np.asarray(f_in.samples, dtype=np.complex128)
    F = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(A)))
    F *= f_in.dx * f_in.dy / (1j * wavelength * focal)
    dxi = wavelength * focal / (f_in.nx * f_in.dx)
    deta = wavelength * focal / (f_in.ny * f_in.dy)
    return Field(dxi, deta, F)


def propagate_4f(input_field: Field, mask: MaskSpec | None, filt: FilterSpec | None,
                 sys: SystemSpec, wavelength: float | None = None) -> Field:
    """Mask, first lens, Fourier filter, second lens.

    ``wavelength`` overrides ``sys.wavelength`` for the propagation while the
    mask and filter geometry stay fixed (used for broadband sums).
    """
    lam = sys.wavelength if wavelength is None else wavelength
    A = input_field
    if mask is not None:
        A = A.with_samples(np.asarray(A.samples) * np.asarray(render_mask(mask, A).samples))
    F = lens_fourier(A, sys.f1, lam)
    if filt is not None:
        F = F.with_samples(np.asarray(F.samples) * np.asarray(render_filter(filt, F).samples))
    return lens_fourier(F, sys.f2, lam, check=False)


def _transfer(geometry: Field, z: float, wavelength: float) -> tuple[np.ndarray, bool]:
    fx = np.fft.fftfreq(geometry.nx, geometry.dx)
    fy = np.fft.fftfreq(geometry.ny, geometry.dy)
    arg = 1.0 - wavelength ** 2 * (fx[None, :] ** 2 + fy[:, None] ** 2)
    prop = arg > 0
    kz = np.sqrt(np.where(prop, arg, 0.0)) - 1.0
    H = np.where(prop, np.exp(1j * (2 * np.pi / wavelength) * z * kz), 0.0)
    return H, bool((~prop).any())


def propagate_as(f: Field, z: float, wavelength: float) -> Field:
    """Angular-spectrum propagation by ``z`` (slowly varying envelope removed)."""
    if z == 0:
        return f
    H, evanescent = _transfer(f, z, wavelength)
    if evanescent:
        A = np.fft.fft2(np.asarray(f.samples))
        fx = np.fft.fftfreq(f.nx, f.dx)
        fy = np.fft.fftfreq(f.ny, f.dy)
        ev = wavelength ** 2 * (fx[None, :] ** 2 + fy[:, None] ** 2) >= 1
        frac = float(np.sum(np.abs(A[ev]) ** 2) / max(np.sum(np.abs(A) ** 2), 1e-300))
        if frac > 1e-6:
            warnings.warn(f"{frac:.2e} of the field power is evanescent and was dropped",
                          ValidityWarning, stacklevel=2)
    out = np.fft.ifft2(np.fft.fft2(np.asarray(f.samples)) * H)
    return f.with_samples(out)


def axial_scan(focal_output: Field, z_values, wavelength: float, workers: int = 1) -> Volume:
    """Intensity planes at each axial offset; ``z = 0`` returns the input intensity exactly."""
    z_values = np.asarray(z_values, float)
    if z_values.ndim != 1 or z_values.size == 0:
        raise InvalidArgument("z_values must be a non-empty 1D sequence")
    spectrum = np.fft.fft2(np.asarray(focal_output.samples))
    base = np.abs(np.asarray(focal_output.samples)) ** 2

    fx = np.fft.fftfreq(focal_output.nx, focal_output.dx)
    fy = np.fft.fftfreq(focal_output.ny, focal_output.dy)
    ev = wavelength ** 2 * (fx[None, :] ** 2 + fy[:, None] ** 2) >= 1
    if ev.any() and np.any(z_values != 0):
        frac = float(np.sum(np.abs(spectrum[ev]) ** 2) / max(np.sum(np.abs(spectrum) ** 2), 1e-300))
        if frac > 1e-6:
            warnings.warn(f"{frac:.2e} of the field power is evanescent and was dropped",
                          ValidityWarning, stacklevel=2)

    def plane(z):
        if z == 0:
            return base.copy()
        H, _ = _transfer(focal_output, z, wavelength)
        return np.abs(np.fft.ifft2(spectrum * H)) ** 2

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            planes = list(pool.map(plane, z_values))
    else:
        planes = [plane(z) for z in z_values]
    return Volume(z_values, tuple(planes), Field(focal_output.dx, focal_output.dy, base, focal_output.origin))


# -- output -------------------------------------------------------------------------

def write_volume(path, vol: Volume) -> None:
    """Frames as consecutive field records plus ``<path>.json`` listing z values."""
    path = Path(path)
    with open(path, "wb") as fh:
        for p in vol.planes:
            grid._write_record(fh, Field(vol.geometry.dx, vol.geometry.dy, p))
    meta = {"z_values_m": [float(z) for z in vol.z_values], "nx": vol.geometry.nx,
            "ny": vol.geometry.ny, "dx_m": vol.geometry.dx, "dy_m": vol.geometry.dy,
            "quantity": "intensity"}
    Path(str(path) + ".json").write_text(json.dumps(meta, indent=2) + "\n")


def read_volume(path) -> Volume:
    path = Path(path)
    meta = json.loads(Path(str(path) + ".json").read_text())
    with open(path, "rb") as fh:
        frames = list(grid._iter_records(fh))
    planes = tuple(np.real(np.asarray(f.samples)).copy() for f in frames)
    g = frames[0]
    return Volume(np.array(meta["z_values_m"]), planes, Field(g.dx, g.dy, planes[0]))


def write_pgm(path, plane) -> None:
    """8-bit binary PGM, max-normalized."""
    arr = np.real(np.asarray(plane.samples if isinstance(plane, Field) else plane))
    top = arr.max()
    img = np.zeros(arr.shape, np.uint8) if top <= 0 else np.clip(np.round(255 * arr / top), 0, 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
