"""Figures of merit extracted from simulated intensity planes and profiles."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import GeometryError, InvalidArgument, InvalidProfile, NumericalFailure, RangeError
from .grid import AxialProfile, Field, RadialProfile


@dataclass(frozen=True)
class TrapMetrics:
    """Per-site figures of merit; fields that do not apply to a site are ``None``."""

    site_center: tuple[float, float]
    darkness: float | None = None
    w0_fit: float | None = None
    alpha_fit: float | None = None
    h_fit: float | None = None
    depth_U0: float | None = None
    omega_rho: float | None = None
    omega_z: float | None = None
    center_intensity: float | None = None

    def __post_init__(self):
        if self.darkness is not None and self.darkness < 0:
            raise InvalidArgument("darkness must be non-negative")
        for name in ("alpha_fit", "h_fit"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise InvalidArgument(f"{name} must be positive")


def _disk_values(plane: Field, center, r_in: float, r_out: float) -> np.ndarray:
    X, Y = plane.coords()
    r = np.hypot(X - center[0], Y - center[1])
    sel = (r >= r_in) & (r <= r_out) if r_in > 0 else r <= r_out
    return np.real(np.asarray(plane.samples))[sel]


def background_level(plane: Field, center, a_img: float) -> float:
    """Median intensity in the annulus between 2 a_img and 2.5 a_img."""
    vals = _disk_values(plane, center, 2 * a_img, 2.5 * a_img)
    if vals.size == 0:
        raise GeometryError("background annulus holds no samples")
    return float(np.median(vals))


def site_darkness(plane: Field, centers, probe_radius: float, a_img: float) -> list[float]:
    """Mean intensity within ``probe_radius`` of each centre over the local background."""
    if probe_radius >= 2 * a_img:
        raise GeometryError("probe radius overlaps the background annulus (must be < 2 a_img)")
    x, y = plane.x, plane.y
    out = []
    for c in centers:
        if not (x[0] <= c[0] <= x[-1] and y[0] <= c[1] <= y[-1]):
            raise GeometryError(f"site centre {tuple(c)} lies outside the plane")
        core = _disk_values(plane, c, 0.0, probe_radius)
        if core.size == 0:
            # probe smaller than the pitch: take the nearest sample
            ix = int(round((c[0] - plane.origin[0]) / plane.dx))
            iy = int(round((c[1] - plane.origin[1]) / plane.dy))
            core = np.array([np.real(plane.samples[iy, ix])])
        bg = background_level(plane, c, a_img)
        if bg <= 0:
            raise InvalidProfile("background level is zero; darkness undefined")
        out.append(float(core.mean() / bg))
    return out


def _inner_region(profile: RadialProfile, clip_fraction: float) -> np.ndarray:
    """Indices from the centre outwards until the profile first exceeds the clip level."""
    v = profile.values
    level = clip_fraction * v.max()
    above = np.nonzero(v > level)[0]
    stop = above[0] if above.size else len(v)
    return np.arange(stop)


def fit_power_law(profile: RadialProfile, clip_fraction: float = 1 / math.e):
    """Least-squares fit of ``A rho**alpha + B`` to the core below the clip level.

    Returns ``(A, alpha, B)``.
    """
    idx = _inner_region(profile, clip_fraction)
    if idx.size < 8:
        raise InvalidProfile(f"only {idx.size} points below the clip level; need at least 8")
    r = np.asarray(profile.radii)[idx]
    v = np.asarray(profile.values)[idx]
    rs = r / r.max()
    b0 = v.min()
    pos = (v - b0 > 0) & (rs > 0)
    if pos.sum() >= 2:
        slope, icpt = np.polyfit(np.log(rs[pos]), np.log(v[pos] - b0 + 1e-300), 1)
        guess = [math.exp(icpt), max(slope, 0.1), b0]
    else:
        guess = [v.max() - b0, 2.0, b0]
    res = optimize.least_squares(
        lambda p: p[0] * rs ** p[1] + p[2] - v, guess,
        bounds=([-np.inf, 1e-3, -np.inf], [np.inf, 50.0, np.inf]),
        xtol=1e-10, ftol=1e-12, gtol=1e-12, max_nfev=2000)
    if not res.success:
        raise NumericalFailure(f"power-law fit did not converge: {res.message}")
    A, alpha, B = res.x
    return float(A / r.max() ** alpha), float(alpha), float(B)


def _poly_core(x: np.ndarray, v: np.ndarray, deg: int) -> np.ndarray:
    scale = x.max()
    V = np.vander(x / scale, deg + 1, increasing=True)
    c, *_ = np.linalg.lstsq(V, v, rcond=None)
    return c / scale ** np.arange(deg + 1)


BRIGHT_WINDOW = 0.8
DARK_CLIP = 1 / math.e


def _least_squares_width(model, r: np.ndarray, v: np.ndarray, w_seed: float) -> float:
    res = optimize.least_squares(lambda p: model(r, p[0]) - v, [w_seed], bounds=([w_seed * 1e-3], [w_seed * 1e3]),
                                 xtol=1e-10, ftol=1e-12, gtol=1e-12, max_nfev=200)
    if not res.success:
        raise NumericalFailure(f"waist fit did not converge: {res.message}")
    return float(res.x[0])


def fit_gaussian_waist(profile: RadialProfile, kind: str = "auto", background: float | None = None) -> float:
    """Least-squares 1/e^2 waist of a Gaussian (bright) or inverted Gaussian (dark).

    Bright: ``I0 exp(-2 rho^2 / w^2)`` fitted on the near-peak core where
    ``I >= 0.8 I0``, so the result tracks the leading-order curvature. Dark:
    ``B (1 - c exp(-rho^2 / w^2))^2`` with ``B`` the background and ``c``
    fixed by the centre value, fitted below the ``B / e`` clip level. Both fits
    are seeded from a polynomial match of the core.
    """
    r = np.asarray(profile.radii)
    v = np.asarray(profile.values)
    if kind == "auto":
        kind = "bright" if v[0] >= v.max() * 0.5 else "dark"
    if kind == "bright":
        below = v < BRIGHT_WINDOW * v[0]
        sel = np.arange(int(np.argmax(below))) if below.any() else np.arange(len(v))
        # one free parameter, so four core points suffice
        if sel.size < 4:
            raise InvalidProfile("bright core too poorly resolved for a waist fit")
        c = _poly_core(r[sel] ** 2, v[sel], 2)
        if not (c[0] > 0 and c[1] < 0):
            raise InvalidProfile("profile does not peak at the centre")
        seed = math.sqrt(2 * c[0] / -c[1])
        if r[0] <= 1e-9 * r[sel][-1]:
            I0 = float(v[0])
            return _least_squares_width(lambda rr, w: I0 * np.exp(-2 * rr ** 2 / w ** 2), r[sel], v[sel], seed)
        # first bin is off-centre, so the peak value is not sampled: fit I0 too
        fit = optimize.least_squares(lambda p: p[0] * np.exp(-2 * r[sel] ** 2 / p[1] ** 2) - v[sel],
                            [float(c[0]), seed], bounds=([0, seed * 1e-3], [np.inf, seed * 1e3]),
                            xtol=1e-10, max_nfev=400)
        if not fit.success:
            raise NumericalFailure("bright waist fit did not converge")
        return float(fit.x[1])
    if kind != "dark":
        raise InvalidArgument(f"kind must be bright, dark or auto, got {kind!r}")
    if background is None:
        background = float(np.median(v[int(0.75 * len(v)):]))
    B = background
    if not B > 0:
        raise InvalidProfile("background level must be positive")
    above = v > DARK_CLIP * B
    stop = int(np.argmax(above)) if above.any() else len(v)
    sel = np.arange(stop)
    if sel.size < 6:
        raise InvalidProfile("dark core too poorly resolved for a waist fit")
    depth = 1 - math.sqrt(min(max(float(v[0]), 0.0) / B, 1.0))
    if depth <= 0:
        raise InvalidProfile("profile has no dark centre")
    model = lambda rr, w: B * (1 - depth * np.exp(-rr ** 2 / w ** 2)) ** 2
    # seed: half-depth radius of the model, read off the clipped core
    target = B * (1 - depth / 2) ** 2
    i = int(np.argmax(v[sel] >= target)) if (v[sel] >= target).any() else sel[-1]
    seed = max(float(r[sel][i]), float(r[1])) / math.sqrt(math.log(2))
    return _least_squares_width(model, r[sel], v[sel], seed)


def axial_coefficients(axial: AxialProfile, w0: float, wavelength: float, window: float = 0.5,
                       deg: int = 10) -> np.ndarray:
    """Polynomial coefficients in powers of ``z/zR`` (odd terms included) near focus."""
    zR = math.pi * w0 ** 2 / wavelength
    s = np.asarray(axial.z_values) / zR
    sel = np.abs(s) <= window
    if sel.sum() < deg + 2:
        raise InvalidProfile(f"need at least {deg + 2} axial samples within |z| <= {window} zR")
    if s[sel].max() < 0.3 or s[sel].min() > -0.3:
        raise InvalidProfile("axial profile must span at least +-0.3 zR")
    V = np.vander(s[sel], deg + 1, increasing=True)
    c, *_ = np.linalg.lstsq(V, np.asarray(axial.values)[sel], rcond=None)
    return c


def divergence_parameter(axial: AxialProfile, w0: float, wavelength: float, kind: str = "auto",
                         background: float = 1.0) -> float:
    """Divergence parameter ``h`` from the quadratic axial coefficient.

    Bright traps use the coefficient relative to the on-axis peak, so a true
    Gaussian gives ``h = 1``; dark traps use it relative to ``background``.
    """
    c = axial_coefficients(axial, w0, wavelength)
    if kind == "auto":
        kind = "bright" if c[0] > 0.5 * np.max(axial.values) else "dark"
    if kind == "bright":
        c2 = -c[2] / c[0]
    elif kind == "dark":
        c2 = c[2] / background
    else:
        raise InvalidArgument(f"kind must be bright, dark or auto, got {kind!r}")
    if c2 <= 0:
        raise InvalidProfile(f"axial curvature has the wrong sign for a {kind} trap (c2 = {c2:.4g})")
    return float(1 / math.sqrt(c2))


def trap_depth(intensity: float, alpha_polarizability: float) -> float:
    """Depth ``U0/kB`` in microkelvin for intensity in W/m^2 and alpha in uK per W/m^2."""
    if intensity < 0:
        raise InvalidArgument("intensity must be non-negative")
    return alpha_polarizability * intensity


def site_contrast(plane: Field, centers, probe_radius: float, a_img: float) -> float:
    """Mean over sites of ``(background - centre) / background``."""
    d = site_darkness(plane, centers, probe_radius, a_img)
    return float(np.mean([1 - x for x in d]))


def talbot_suppression(coherent, incoherent, z_talbot: float, centers, probe_radius: float,
                       a_img: float) -> float:
    """Incoherent-to-coherent trap contrast ratio at the plane nearest ``z_talbot``."""
    planes = []
    for vol in (coherent, incoherent):
        i, z = vol.nearest(z_talbot)
        if abs(z - z_talbot) > 0.1 * abs(z_talbot):
            raise RangeError(f"no plane within 10% of z = {z_talbot:.4g} m (nearest {z:.4g} m)")
        planes.append(Field(vol.geometry.dx, vol.geometry.dy, vol.planes[i], vol.geometry.origin))
    c_coh = site_contrast(planes[0], centers, probe_radius, a_img)
    c_inc = site_contrast(planes[1], centers, probe_radius, a_img)
    if c_coh == 0:
        raise InvalidProfile("coherent contrast is zero")
    return float(c_inc / c_coh)


def locate_revival(focal: Field, wavelength: float, z_lo: float, z_hi: float, half_width: float,
                   n_coarse: int = 41, workers: int = 1) -> tuple[float, float]:
    """Axial position in ``[z_lo, z_hi]`` whose intensity best matches the focal plane.

    The match is the normalized cross-correlation over the square
    ``|x|, |y| <= half_width``. Returns ``(z, correlation)``.
    """
    from .optics import propagate_as

    X, Y = focal.coords()
    region = (np.abs(X) <= half_width) & (np.abs(Y) <= half_width)
    ref = np.abs(np.asarray(focal.samples)[region]) ** 2

    def corr(z):
        I = np.abs(np.asarray(propagate_as(focal, z, wavelength).samples)[region]) ** 2
        return normalized_correlation(I, ref)

    zs = np.linspace(z_lo, z_hi, n_coarse)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as pool:
            cs = np.array(list(pool.map(corr, zs)))
    else:
        cs = np.array([corr(z) for z in zs])
    i = int(np.argmax(cs))
    lo, hi = zs[max(i - 1, 0)], zs[min(i + 1, n_coarse - 1)]
    res = optimize.minimize_scalar(lambda z: -corr(z), bounds=(lo, hi), method="bounded",
                                   options={"xatol": (z_hi - z_lo) * 1e-5})
    if -res.fun >= cs[i]:
        return float(res.x), float(-res.fun)
    return float(zs[i]), float(cs[i])


def normalized_correlation(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, float).ravel() - np.mean(a)
    b = np.asarray(b, float).ravel() - np.mean(b)
    den = math.sqrt(float(a @ a) * float(b @ b))
    return float(a @ b / den) if den > 0 else 0.0


METRICS_HEADER = ["center_x", "center_y", "darkness", "w0_fit", "alpha_fit", "h_fit",
                  "U0_uK", "omega_rho_Hz", "omega_z_Hz", "I_center_over_I0"]


def write_metrics_csv(path, rows) -> None:
    """One row per site; frequencies are written in Hz (omega / 2 pi)."""
    def fmt(x):
        return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(float(x))

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(METRICS_HEADER)
        for m in rows:
            w.writerow([fmt(m.site_center[0]), fmt(m.site_center[1]), fmt(m.darkness), fmt(m.w0_fit),
                        fmt(m.alpha_fit), fmt(m.h_fit), fmt(m.depth_U0),
                        fmt(None if m.omega_rho is None else m.omega_rho / (2 * math.pi)),
                        fmt(None if m.omega_z is None else m.omega_z / (2 * math.pi)),
                        fmt(m.center_intensity)])
