"""Uniformly sampled scalar fields and profile extraction.

Amplitudes are dimensionless, relative to the input plane-wave amplitude, so
intensities come out in units of the input intensity. Arrays are indexed
``[iy, ix]`` and the physical origin sits on sample ``(nx // 2, ny // 2)``.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import GeometryError, InvalidArgument

MAGIC = b"TFLD"
VERSION = 1
_HEADER = struct.Struct("<4sIIIdd")


@dataclass(frozen=True)
class Field:
    """Scalar samples on a uniform grid.

    ``samples`` is complex for amplitudes and real for intensity planes. The
    array is made read-only on construction.
    """

    dx: float
    dy: float
    samples: np.ndarray
    origin: tuple[float, float] = field(default=None)

    def __post_init__(self):
        arr = np.asarray(self.samples)
        if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] < 2:
            raise InvalidArgument(f"samples must be a 2D array of at least 2x2, got {arr.shape}")
        if not (self.dx > 0 and self.dy > 0):
            raise InvalidArgument(f"pitch must be positive, got dx={self.dx}, dy={self.dy}")
        if arr.flags.writeable or arr is self.samples:
            arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        if self.origin is None:
            ny, nx = arr.shape
            object.__setattr__(self, "origin", (-(nx // 2) * self.dx, -(ny // 2) * self.dy))

    @property
    def nx(self) -> int:
        return self.samples.shape[1]

    @property
    def ny(self) -> int:
        return self.samples.shape[0]

    @property
    def extent(self) -> tuple[float, float]:
        return self.nx * self.dx, self.ny * self.dy

    @property
    def x(self) -> np.ndarray:
        return self.origin[0] + np.arange(self.nx) * self.dx

    @property
    def y(self) -> np.ndarray:
        return self.origin[1] + np.arange(self.ny) * self.dy

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Broadcastable ``(X, Y)`` coordinate arrays of shape (1, nx) and (ny, 1)."""
        return self.x[None, :], self.y[:, None]

    def power(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.dx * self.dy)

    def with_samples(self, samples, dx=None, dy=None) -> "Field":
        """New field sharing this geometry (or a rescaled pitch) with other samples."""
        if dx is None and dy is None:
            return Field(self.dx, self.dy, samples, self.origin)
        return Field(dx if dx is not None else self.dx, dy if dy is not None else self.dy, samples)

    def same_geometry(self, other: "Field") -> bool:
        return (
            self.samples.shape == other.samples.shape
            and np.isclose(self.dx, other.dx, rtol=1e-12)
            and np.isclose(self.dy, other.dy, rtol=1e-12)
        )


@dataclass(frozen=True)
class RadialProfile:
    radii: np.ndarray
    values: np.ndarray
    center: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class AxialProfile:
    z_values: np.ndarray
    values: np.ndarray


def make_field(nx: int, ny: int, dx: float, dy: float, fill: complex = 0.0) -> Field:
    if nx < 2 or ny < 2:
        raise InvalidArgument(f"grid needs at least 2 samples per side, got {nx}x{ny}")
    if not (dx > 0 and dy > 0):
        raise InvalidArgument(f"pitch must be positive, got dx={dx}, dy={dy}")
    return Field(dx, dy, np.full((ny, nx), fill, dtype=np.complex128))


def intensity(f: Field) -> Field:
    return Field(f.dx, f.dy, np.abs(f.samples) ** 2, f.origin)


def radial_profile(I: Field, center=(0.0, 0.0), n_bins: int = 64, r_max: float | None = None) -> RadialProfile:
    """Azimuthal mean of ``I`` about ``center``.

    Bin ``k`` covers ``[k dr, (k + 1) dr)`` with ``dr = r_max / n_bins``. Each
    bin reports the mean radius of its member samples; bins without samples
    are linearly interpolated from populated neighbours.
    """
    if n_bins < 2:
        raise InvalidArgument("n_bins must be >= 2")
    cx, cy = center
    x, y = I.x, I.y
    if not (x[0] <= cx <= x[-1] and y[0] <= cy <= y[-1]):
        raise InvalidArgument(f"center {center} lies outside the grid")
    if r_max is None:
        r_max = min(cx - x[0], x[-1] - cx, cy - y[0], y[-1] - cy)
    if r_max <= 0:
        raise GeometryError("center is on the grid boundary; no radial extent")
    X, Y = I.coords()
    r = np.hypot(X - cx, Y - cy).ravel()
    vals = np.real(np.asarray(I.samples)).ravel()
    dr = r_max / n_bins
    idx = np.floor(r / dr).astype(np.int64)
    keep = idx < n_bins
    idx, r, vals = idx[keep], r[keep], vals[keep]
    counts = np.bincount(idx, minlength=n_bins)
    sums = np.bincount(idx, weights=vals, minlength=n_bins)
    rsums = np.bincount(idx, weights=r, minlength=n_bins)
    centers = (np.arange(n_bins) + 0.5) * dr
    filled = counts > 0
    radii = np.where(filled, rsums / np.maximum(counts, 1), centers)
    values = np.zeros(n_bins)
    values[filled] = sums[filled] / counts[filled]
    if not filled.all():
        values[~filled] = np.interp(radii[~filled], radii[filled], values[filled])
    return RadialProfile(radii, values, (cx, cy))


def sample_along_axis(planes: np.ndarray, z_values, geometry: Field, point=(0.0, 0.0)) -> AxialProfile:
    """On-axis profile through ``point`` from a stack of intensity planes."""
    ix = int(round((point[0] - geometry.origin[0]) / geometry.dx))
    iy = int(round((point[1] - geometry.origin[1]) / geometry.dy))
    if not (0 <= ix < geometry.nx and 0 <= iy < geometry.ny):
        raise GeometryError(f"point {point} lies outside the grid")
    return AxialProfile(np.asarray(z_values, float), np.array([p[iy, ix] for p in planes], float))


# -- binary and CSV I/O ------------------------------------------------------

def write_field(path, f: Field) -> None:
    with open(path, "wb") as fh:
        _write_record(fh, f)


def _write_record(fh, f: Field) -> None:
    fh.write(_HEADER.pack(MAGIC, VERSION, f.nx, f.ny, float(f.dx), float(f.dy)))
    data = np.empty((f.ny, f.nx, 2), dtype="<f8")
    data[..., 0] = np.real(f.samples)
    data[..., 1] = np.imag(f.samples)
    fh.write(data.tobytes(order="C"))


def read_field(path) -> Field:
    with open(path, "rb") as fh:
        fields = list(_iter_records(fh))
    if len(fields) != 1:
        raise InvalidArgument(f"{path}: expected one field record, found {len(fields)}")
    return fields[0]


def _iter_records(fh):
    while True:
        head = fh.read(_HEADER.size)
        if not head:
            return
        if len(head) != _HEADER.size:
            raise InvalidArgument("truncated field header")
        magic, version, nx, ny, dx, dy = _HEADER.unpack(head)
        if magic != MAGIC or version != VERSION:
            raise InvalidArgument(f"not a TFLD v1 record (magic={magic!r}, version={version})")
        raw = fh.read(nx * ny * 16)
        if len(raw) != nx * ny * 16:
            raise InvalidArgument("truncated field payload")
        data = np.frombuffer(raw, dtype="<f8").reshape(ny, nx, 2)
        yield Field(dx, dy, data[..., 0] + 1j * data[..., 1])


def write_profile_csv(path, profile) -> None:
    if isinstance(profile, AxialProfile):
        header, xs = "# z_m,intensity", profile.z_values
    else:
        header, xs = "# rho_m,intensity", profile.radii
    lines = [header] + [f"{x!r},{v!r}" for x, v in zip(map(float, xs), map(float, profile.values))]
    Path(path).write_text("\n".join(lines) + "\n")


def read_profile_csv(path):
    text = Path(path).read_text().splitlines()
    header = text[0].strip()
    data = np.array([[float(t) for t in line.split(",")] for line in text[1:] if line.strip()])
    if header == "# z_m,intensity":
        return AxialProfile(data[:, 0], data[:, 1])
    if header == "# rho_m,intensity":
        return RadialProfile(data[:, 0], data[:, 1])
    raise InvalidArgument(f"{path}: unknown profile header {header!r}")
