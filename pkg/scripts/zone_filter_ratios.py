"""Zone filter versus plain iris: efficiency and confinement ratios.

Analytic ratios come from the exact Taylor coefficients; the FFT numbers fit
the simulated core with low-order polynomials.
"""
import argparse
import math

import numpy as np
from scipy import special

from trapgen import analytic as A
from trapgen import grid, optics


def analytic_ratios(n_rings=1):
    x = special.jn_zeros(1, 2 * n_rings + 1)
    zones = ((0.0, A.X11),) + tuple((x[2 * k - 1], x[2 * k]) for k in range(1, n_rings + 1))
    r0, a0 = A.taylor_series(1.0, 0.0, ((0.0, A.X11),), 6)
    r1, a1 = A.taylor_series(1.0, 0.0, zones, 6)
    return (r1[0] / r0[0], math.sqrt((r1[1] / r1[0]) / (r0[1] / r0[0])),
            math.sqrt((a1[2] / a1[0]) / (a0[2] / a0[0])))


def fft_core(sys_, filt, a, spa, n, r_fit, z_win):
    g = grid.make_field(n, n, a / spa, a / spa, 1.0)
    mask = optics.MaskSpec("bright", A.MaskParams(a, 3 * a, 1.0, 0.0))
    out = optics.propagate_4f(g, mask, filt, sys_)
    I = grid.intensity(out)
    pk = float(I.samples[n // 2, n // 2])
    X, Y = I.coords()
    t = ((X ** 2 + Y ** 2) / (r_fit * a) ** 2).ravel()
    sel = t < 1
    c = np.polynomial.polynomial.polyfit(t[sel], np.asarray(I.samples).ravel()[sel] / pk, 3)
    zR0 = math.pi * (0.974 * a) ** 2 / sys_.wavelength
    zs = np.linspace(-z_win * zR0, z_win * zR0, 41)
    vol = optics.axial_scan(out, zs, sys_.wavelength)
    ax = grid.sample_along_axis(vol.planes, zs, vol.geometry)
    cz = np.polynomial.polynomial.polyfit((zs / (z_win * zR0)) ** 2, np.asarray(ax.values) / pk, 3)
    return pk, -c[1] / r_fit ** 2, -cz[1] / z_win ** 2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rings", type=int, default=1)
    ap.add_argument("--fft", action="store_true", help="also run the 2048^2 FFT cross-check")
    args = ap.parse_args()
    eff, rho, z = analytic_ratios(args.rings)
    print(f"analytic  efficiency {eff:.4f}  radial {rho:.4f}  axial {z:.4f}")
    if args.fft:
        sys_, a = A.SystemSpec(0.5, 0.5, 808e-9), 100e-6
        p0, r0, z0 = fft_core(sys_, optics.iris_filter(a, sys_), a, 32, 2048, 0.4, 0.3)
        p1, r1, z1 = fft_core(sys_, optics.zone_filter(a, sys_, args.rings), a, 32, 2048, 0.4 / rho, 0.3 / z)
        print(f"FFT       efficiency {p1 / p0:.4f}  radial {math.sqrt(r1 / r0):.4f}  axial {math.sqrt(z1 / z0):.4f}")


if __name__ == "__main__":
    main()
