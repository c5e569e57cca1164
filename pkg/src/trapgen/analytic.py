"""Closed-form and series evaluation of 4f-filtered trap fields.

Conventions
-----------
The pupil variable is ``u = k a rho1 / f1`` (Fourier-plane radius in units of
the Airy scale) and an iris of radius ``b`` becomes ``u_b = k a b / f1``.
In the output plane radii are measured in image-aperture units
``r = rho2 / a_img`` with ``a_img = a f2 / f1`` and axial offsets as
``zeta = z2 / (a_img**2 k)``. With these, every single-site field is

    A2 / A0 = -(f1/f2) [t_b + (t_a - t_b) F(r, zeta)]
    F(r, zeta) = int_0^{u_b} J0(r u) J1(u) exp(-i zeta u^2 / 2) du

and intensities are relative to the input intensity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import constants, optimize, special

from .errors import InfeasibleBalance, InvalidArgument, NumericalFailure, SingularCondition
from .quadrature import gauss_kronrod

TRAP_KINDS = ("bright-aG", "dark-aG-287", "dark-aG-opaque")
# conventional Gaussian-equivalent scale used for the opaque-disk variant;
# it is a declared choice rather than the result of a fit
OPAQUE_WAIST_RATIO = 0.943


def bessel_zero(order: int, n: int) -> float:
    """n-th positive zero of J0 or J1."""
    if order not in (0, 1):
        raise InvalidArgument(f"order must be 0 or 1, got {order}")
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    return float(special.jn_zeros(order, n)[-1])


X01 = bessel_zero(0, 1)
X11 = bessel_zero(1, 1)


@dataclass(frozen=True)
class SystemSpec:
    f1: float
    f2: float
    wavelength: float

    def __post_init__(self):
        if not (self.f1 > 0 and self.f2 > 0 and self.wavelength > 0):
            raise InvalidArgument("f1, f2 and wavelength must be positive")

    @property
    def k(self) -> float:
        return 2 * np.pi / self.wavelength

    @property
    def magnification(self) -> float:
        return self.f2 / self.f1

    def b_unit(self, a: float) -> float:
        """Iris radius that places the filter edge on the first zero of J1."""
        return self.f1 * X11 / (a * self.k)

    def u_of_b(self, a: float, b: float) -> float:
        return self.k * a * b / self.f1

    def a_image(self, a: float) -> float:
        return a * self.magnification


@dataclass(frozen=True)
class MaskParams:
    """Aperture radius, pitch and transmission amplitudes.

    The aperture amplitude seen by the field is ``t_a * exp(1j * phi_ab)``;
    ``t_a`` and ``t_b`` are normally given as real magnitudes.
    """

    a: float
    d: float
    t_a: complex = 1.0
    t_b: complex = 0.0
    phi_ab: float = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise InvalidArgument(f"aperture radius must be positive, got {self.a}")
        if self.d < 2 * self.a * (1 - 1e-12):
            raise InvalidArgument(f"pitch d={self.d} must be at least 2a={2 * self.a}")
        for name in ("t_a", "t_b"):
            if abs(getattr(self, name)) > 1 + 1e-12:
                raise InvalidArgument(f"|{name}| must not exceed 1")

    @property
    def aperture_amplitude(self) -> complex:
        return complex(self.t_a) * np.exp(1j * self.phi_ab)


@dataclass(frozen=True)
class ExpansionCoeffs:
    """Even-order Taylor coefficients of a trap's intensity.

    ``radial[j]`` multiplies ``(rho/L)**(2j)`` and ``axial[j]`` multiplies
    ``(z/Z)**(2j)``. With ``scaling == "aperture"``, ``L = a_img`` and
    ``Z = a_img**2 k``; with ``scaling == "gaussian"``, ``L = w0`` and
    ``Z = zR``, where ``w0 = waist_ratio * a_img``.
    """

    kind: str
    radial: list
    axial: list
    normalization: str
    scaling: str
    waist_ratio: float


@dataclass(frozen=True)
class GaussEquiv:
    w0: float
    zR: float
    h: float


@dataclass(frozen=True)
class ConfinementResult:
    sigma_rho: float
    sigma_z: float
    omega_rho: float | None
    omega_z: float
    omega_rho_defined: bool


# -- Bessel integrals --------------------------------------------------------

def _series_terms(x: float, y: float, j_max: int) -> np.ndarray:
    """Terms of int_0^1 J0(x t) J1(y t) dt as a power series in x, y."""
    terms = np.empty(j_max + 1)
    x2, y2 = x * x, y * y
    for j in range(j_max + 1):
        # 2F1(-j, -1-j; 1; x^2/y^2) written as a finite sum with no division by y
        inner = 0.0
        for k in range(j + 1):
            inner += math.comb(j, k) * math.comb(j + 1, k) * x2 ** k * y2 ** (j - k)
        denom = 2.0 ** (1 + 2 * j) * math.factorial(j) * math.factorial(j + 1) * (2 * j + 2)
        terms[j] = (-1) ** j * y * inner / denom
    return terms


def bessel_integral_quad(c: float, d_arg: float, b_upper: float, epsabs: float = 1e-12) -> float:
    """Adaptive-quadrature value of int_0^b J0(c z) J1(d z) dz."""
    if b_upper == 0:
        return 0.0
    n_init = max(1, int((c + d_arg) * b_upper / 10))
    val, _ = gauss_kronrod(lambda z: special.j0(c * z) * special.j1(d_arg * z), 0.0, b_upper,
                           epsabs=epsabs, initial=n_init)
    return float(val)


def finite_bessel_integral(c: float, d_arg: float, b_upper: float, j_max: int = 40,
                           fallback: bool = True) -> float:
    """int_0^b J0(c z) J1(d z) dz from the hypergeometric power series.

    The alternating series loses digits when ``c b`` or ``d b`` is large. If
    the largest term exceeds ``1e5`` the result is recomputed by quadrature;
    if terms are still growing past ``j_max / 2`` the series is declared
    divergent, which falls back to quadrature or raises
    :class:`NumericalFailure` when ``fallback`` is false.
    """
    if c < 0 or d_arg < 0:
        raise InvalidArgument("c and d_arg must be non-negative")
    if b_upper < 0:
        raise InvalidArgument("b_upper must be non-negative")
    if j_max < 1:
        raise InvalidArgument("j_max must be >= 1")
    if b_upper == 0 or d_arg == 0:
        return 0.0
    x, y = c * b_upper, d_arg * b_upper
    terms = _series_terms(x, y, j_max)
    mags = np.abs(terms)
    tail = mags[j_max // 2:]
    total = terms.sum()
    growing = np.any(np.diff(tail) > 0)
    unconverged = mags[-1] > 1e-13 * max(abs(total), 1e-300)
    if growing and unconverged:
        if not fallback:
            raise NumericalFailure(
                f"Bessel series not converged at j_max={j_max} (c*b={x:.3g}, d*b={y:.3g}); "
                f"last term {mags[-1]:.3e}, still growing after j_max/2")
        return bessel_integral_quad(c, d_arg, b_upper)
    if unconverged or mags.max() > 1e5:
        if not fallback:
            raise NumericalFailure(
                f"Bessel series loses precision (c*b={x:.3g}, d*b={y:.3g}, max term {mags.max():.3e})")
        return bessel_integral_quad(c, d_arg, b_upper)
    return float(b_upper * total)


def pupil_integral(r: float, zeta: float = 0.0, zones=((0.0, X11),), epsabs: float = 1e-12) -> complex:
    """F(r, zeta) summed over transmitting pupil zones (in u units)."""
    total = 0.0 + 0.0j
    for lo, hi in zones:
        n_init = max(1, int((r + 1 + abs(zeta) * hi) * (hi - lo) / 6))
        if zeta == 0:
            f = lambda u: special.j0(r * u) * special.j1(u)
        else:
            f = lambda u: special.j0(r * u) * special.j1(u) * np.exp(-0.5j * zeta * u * u)
        val, _ = gauss_kronrod(f, lo, hi, epsabs=epsabs, initial=n_init)
        total += val
    return total


# -- single-site fields -------------------------------------------------------

def ag_field_focus(rho2, sys: SystemSpec, a: float, b: float | None = None, j_max: int = 40):
    """Focal-plane amplitude of the bright (filtered top-hat) trap."""
    b = sys.b_unit(a) if b is None else b
    d_arg = a * sys.k / sys.f1
    scale = -a * sys.k / sys.f2

    def one(r):
        if r < 0:
            raise InvalidArgument("rho2 must be non-negative")
        return scale * finite_bessel_integral(r * sys.k / sys.f2, d_arg, b, j_max)

    if np.ndim(rho2) == 0:
        return complex(one(float(rho2)))
    return np.array([one(float(r)) for r in np.ravel(rho2)], complex).reshape(np.shape(rho2))


def ag_field_axial(z2, sys: SystemSpec, a: float, b: float | None = None, rho2: float = 0.0):
    """Bright-trap amplitude at axial offset z2 (quadrature with defocus phase)."""
    b = sys.b_unit(a) if b is None else b
    u_b = sys.u_of_b(a, b)
    a_img = sys.a_image(a)
    r = rho2 / a_img

    def one(z):
        zeta = z / (a_img ** 2 * sys.k)
        return -(sys.f1 / sys.f2) * pupil_integral(r, zeta, ((0.0, u_b),))

    if np.ndim(z2) == 0:
        return complex(one(float(z2)))
    return np.array([one(float(z)) for z in np.ravel(z2)], complex).reshape(np.shape(z2))


def dark_center_field(mask: MaskParams, sys: SystemSpec, b: float) -> complex:
    """On-axis focal amplitude for aperture amplitude t_a e^{i phi} on background t_b."""
    j0 = special.j0(sys.u_of_b(mask.a, b))
    t_a = mask.aperture_amplitude
    return complex(-(sys.f1 / sys.f2) * (mask.t_b + (t_a - mask.t_b) * (1 - j0)))


def dark_condition_ta(b: float, sys: SystemSpec, a: float) -> float:
    """Ratio t_a / t_b that zeroes the on-axis focal field."""
    if not b > 0:
        raise InvalidArgument("b must be positive")
    j0 = float(special.j0(sys.u_of_b(a, b)))
    if abs(1 - j0) < 1e-14:
        raise SingularCondition(f"J0(k a b / f1) = 1 for b={b}; the iris passes no structure")
    return -j0 / (1 - j0)


DARK_TA = -float(special.j0(X11)) / (1 - float(special.j0(X11)))


def trap_design(kind: str) -> tuple[complex, complex, float]:
    """(aperture amplitude, background amplitude, u_b) for a named trap kind."""
    if kind == "bright-aG":
        return 1.0, 0.0, X11
    if kind == "dark-aG-287":
        return DARK_TA, 1.0, X11
    if kind == "dark-aG-opaque":
        return 0.0, 1.0, X01
    raise InvalidArgument(f"unknown trap kind {kind!r}; expected one of {TRAP_KINDS}")


def trap_intensity(r, zeta=0.0, t_a: complex = 1.0, t_b: complex = 0.0, zones=((0.0, X11),)):
    """Dimensionless intensity |t_b + (t_a - t_b) F|^2 at equal focal lengths."""
    def one(rr, zz):
        return abs(t_b + (t_a - t_b) * pupil_integral(rr, zz, zones)) ** 2

    rb, zb = np.broadcast_arrays(np.asarray(r, float), np.asarray(zeta, float))
    out = np.array([one(float(rr), float(zz)) for rr, zz in zip(rb.ravel(), zb.ravel())])
    return float(out[0]) if rb.ndim == 0 else out.reshape(rb.shape)


# -- Taylor coefficients -------------------------------------------------------

@lru_cache(maxsize=256)
def _moments(zones: tuple, n_max: int) -> tuple:
    """M_n = int_zones J1(u) u^(2n) du for n = 0..n_max."""
    out = []
    for n in range(n_max + 1):
        total = 0.0
        for lo, hi in zones:
            val, _ = gauss_kronrod(lambda u: special.j1(u) * u ** (2 * n), lo, hi,
                                   epsabs=1e-15, epsrel=1e-14)
            total += val
        out.append(total)
    return tuple(out)


def _intensity_series(amp: np.ndarray) -> np.ndarray:
    """Coefficients of |sum a_n x^n|^2 for real x."""
    return np.convolve(amp, np.conj(amp)).real[: len(amp)]


def taylor_series(t_a: complex, t_b: complex, zones=((0.0, X11),), order: int = 6):
    """Exact Taylor coefficients of the dimensionless intensity.

    Returns ``(radial, axial)``: ``radial[n]`` multiplies ``r**(2n)`` and
    ``axial[n]`` multiplies ``zeta**n`` (odd powers survive when the aperture
    and background amplitudes differ in phase). The coefficients come from
    the pupil moments of J1, so no differentiation is involved.
    """
    zones = tuple((float(lo), float(hi)) for lo, hi in zones)
    M = np.array(_moments(zones, order))
    n = np.arange(order + 1)
    fact = np.array([math.factorial(int(i)) for i in n], float)
    w = complex(t_a) - complex(t_b)
    rad = w * ((-1.0) ** n * M / (4.0 ** n * fact ** 2))
    ax = w * ((-0.5j) ** n * M / fact)
    rad[0] += t_b
    ax[0] += t_b
    return _intensity_series(rad), _intensity_series(ax)


def _waist_ratio(kind: str, radial) -> float:
    if kind == "bright-aG":
        return math.sqrt(2 * radial[0] / abs(radial[1]))
    if kind == "dark-aG-287":
        # quartic match to B (1 - exp(-r^2/w^2))^2 with background B = 1
        return (1.0 / radial[2]) ** 0.25
    return OPAQUE_WAIST_RATIO


def expansion_coeffs(trap_kind: str, order: int = 4, scaling: str = "aperture",
                     normalization: str = "input-intensity",
                     waist_ratio: float | None = None) -> ExpansionCoeffs:
    """Radial and axial intensity expansions for a named trap kind.

    ``order`` is the highest even power index kept (``(rho)**(2*order)``).
    Peak normalization divides by the on-axis value for the bright kind and
    by the ring maximum for dark kinds.
    """
    if not 1 <= order <= 6:
        raise InvalidArgument("order must be between 1 and 6")
    if scaling not in ("aperture", "gaussian"):
        raise InvalidArgument(f"unknown scaling {scaling!r}")
    if normalization not in ("input-intensity", "peak"):
        raise InvalidArgument(f"unknown normalization {normalization!r}")
    t_a, t_b, u_b = trap_design(trap_kind)
    rad, ax = taylor_series(t_a, t_b, ((0.0, u_b),), max(order, 2) * 2)
    rad = rad[: order + 1]
    ax = ax[: 2 * order + 1: 2]
    q = _waist_ratio(trap_kind, rad) if waist_ratio is None else waist_ratio
    if normalization == "peak":
        peak = rad[0] if trap_kind == "bright-aG" else _dark_peak(t_a, t_b, u_b)[0]
        rad, ax = rad / peak, ax / peak
    if scaling == "gaussian":
        j = np.arange(order + 1)
        rad = rad * q ** (2 * j)
        ax = ax * (q * q / 2) ** (2 * j)
    return ExpansionCoeffs(trap_kind, [float(v) for v in rad], [float(v) for v in ax],
                           normalization, scaling, float(q))


def best_fit_waist(trap_kind: str, a: float, sys: SystemSpec) -> GaussEquiv:
    """Gaussian-equivalent waist, Rayleigh range and divergence parameter.

    Bright: quadratic match of the focal profile. Dark (t_a = 0.287): quartic
    match against an inverted Gaussian. Opaque disks: declared scale. ``h``
    follows from the axial quadratic coefficient in Rayleigh units.
    """
    co = expansion_coeffs(trap_kind, 2, "gaussian",
                          "peak" if trap_kind == "bright-aG" else "input-intensity")
    w0 = co.waist_ratio * sys.a_image(a)
    zR = np.pi * w0 ** 2 / sys.wavelength
    return GaussEquiv(w0, zR, 1.0 / math.sqrt(abs(co.axial[1])))


# -- efficiencies and throughput -------------------------------------------------

def _dark_peak(t_a, t_b, u_b, r_max: float = 6.0):
    zones = ((0.0, u_b),)
    rs = np.linspace(0.0, r_max, 241)
    vals = np.array([abs(t_b + (t_a - t_b) * pupil_integral(r, 0.0, zones)) ** 2 for r in rs])
    i = int(np.argmax(vals))
    lo, hi = rs[max(i - 1, 0)], rs[min(i + 1, len(rs) - 1)]
    res = optimize.minimize_scalar(
        lambda r: -abs(t_b + (t_a - t_b) * pupil_integral(r, 0.0, zones)) ** 2,
        bounds=(lo, hi), method="bounded", options={"xatol": 1e-9})
    return float(-res.fun), float(res.x)


def efficiency(trap_kind: str, sys: SystemSpec) -> float:
    """Peak intensity relative to the input intensity.

    For dark kinds the peak is the ring maximum of the full diffraction
    profile, so it includes the overshoot next to the dark centre.
    """
    t_a, t_b, u_b = trap_design(trap_kind)
    mag2 = (sys.f1 / sys.f2) ** 2
    if trap_kind == "bright-aG":
        return float((1 - special.j0(u_b)) ** 2 * mag2)
    return _dark_peak(t_a, t_b, u_b)[0] * mag2


def airy_power_fraction(u_b: float) -> float:
    """Fraction of Airy-pattern power inside pupil radius u_b."""
    return float(1 - special.j0(u_b) ** 2 - special.j1(u_b) ** 2)


def power_throughput(mask: MaskParams, filter_kind="x11") -> float:
    """Output-to-input power ratio through mask and Fourier iris.

    ``filter_kind`` is ``"x11"`` (first J1 zero), ``"x01"`` (first J0 zero),
    or a numeric pupil radius ``u_b``.
    """
    u_b = {"x11": X11, "x01": X01}.get(filter_kind, filter_kind)
    if isinstance(u_b, str):
        raise InvalidArgument(f"unknown filter kind {filter_kind!r}")
    eta = airy_power_fraction(float(u_b))
    area = np.pi * mask.a ** 2
    cell = mask.d ** 2
    return float(eta * (abs(mask.t_b) ** 2 * (cell - area) + abs(mask.t_a) ** 2 * area) / cell)


# -- confinement -----------------------------------------------------------------

def confinement(trap_kind: str, U0: float, T: float, gauss: GaussEquiv, m: float,
                quartic_coeff: float = 1.0) -> ConfinementResult:
    """Thermal position spread and trap frequencies from the virial theorem.

    ``trap_kind`` is ``"gaussian"``, ``"bright-aG"`` (harmonic radial) or a
    dark kind (quartic radial with coefficient ``quartic_coeff`` in units of
    ``(rho/w0)**4``). U0 in joules, T in kelvin, m in kilograms.
    """
    if not (U0 > 0 and T > 0 and m > 0):
        raise InvalidArgument("U0, T and m must be positive")
    ratio = constants.k * T / U0
    sigma_z = gauss.h * gauss.zR * math.sqrt(ratio / 2)
    omega_z = math.sqrt(2 * U0 / m) / (gauss.h * gauss.zR)
    if trap_kind in ("gaussian", "bright-aG"):
        eps = 2 / gauss.w0 ** 2
        return ConfinementResult(math.sqrt(ratio / eps), sigma_z,
                                 2 / gauss.w0 * math.sqrt(U0 / m), omega_z, True)
    if trap_kind in ("dark-aG-287", "dark-aG-opaque"):
        eps = quartic_coeff / gauss.w0 ** 4
        return ConfinementResult((2 / 3 * ratio / eps) ** 0.25, sigma_z, None, omega_z, False)
    raise InvalidArgument(f"unknown trap kind {trap_kind!r}")


# -- Talbot and spectral quantities --------------------------------------------------

def talbot_length(d_image: float, wavelength: float) -> float:
    if not (d_image > 0 and wavelength > 0):
        raise InvalidArgument("d_image and wavelength must be positive")
    return 2 * d_image ** 2 / wavelength


def spectral_halfwidth(a: float, d: float, wavelength: float, f1: float, f2: float) -> float:
    """Spectral half-width (pi lambda / 2)(a/d)^2 (f2/f1)^2."""
    if min(a, d, wavelength, f1, f2) <= 0:
        raise InvalidArgument("all inputs must be positive")
    return np.pi * wavelength / 2 * (a / d) ** 2 * (f2 / f1) ** 2


def spectral_halfwidth_both(a: float, d_mask: float, wavelength: float, f1: float, f2: float) -> dict:
    """The half-width evaluated with the mask pitch and with the imaged pitch."""
    d_img = d_mask * f2 / f1
    return {
        "mask_pitch": spectral_halfwidth(a, d_mask, wavelength, f1, f2),
        "image_pitch": spectral_halfwidth(a, d_img, wavelength, f1, f2),
    }


# -- dual species ----------------------------------------------------------------------

def bright_depth_dual(t_b: float) -> float:
    """Bright-site depth above background for a fully open aperture on background t_b."""
    j = float(special.j0(X11))
    return abs((t_b - 1) * (1 - j) - t_b) ** 2 - abs(t_b) ** 2


def dark_variant_efficiency(dark_variant: str) -> float:
    kind = {"t_a-scaled": "dark-aG-287", "opaque": "dark-aG-opaque"}.get(dark_variant)
    if kind is None:
        raise InvalidArgument(f"unknown dark variant {dark_variant!r}")
    t_a, t_b, u_b = trap_design(kind)
    return _dark_peak(t_a, t_b, u_b)[0]


def dual_species_balance(alpha_bright: float, alpha_dark: float, dark_variant: str = "t_a-scaled",
                         dark_efficiency: float | None = None) -> float:
    """Background amplitude t_b equalising the two polarizability-weighted depths.

    The dark depth is ``eff * t_b**2`` where ``eff`` is the variant's ring-peak
    efficiency unless ``dark_efficiency`` is given.
    """
    if not (alpha_bright > 0 > alpha_dark):
        raise InvalidArgument("need alpha_bright > 0 > alpha_dark")
    eff = dark_variant_efficiency(dark_variant) if dark_efficiency is None else dark_efficiency
    if not eff > 0:
        raise InvalidArgument("dark efficiency must be positive")
    g = lambda t: alpha_bright * bright_depth_dual(t) - abs(alpha_dark) * eff * t * t
    ts = np.linspace(1e-6, 1.0, 2001)
    vals = np.array([g(t) for t in ts])
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if idx.size == 0:
        raise InfeasibleBalance("no background transmission in (0, 1] balances the depths")
    i = idx[0]
    return float(optimize.brentq(g, ts[i], ts[i + 1], xtol=1e-14))
