"""Bright-trap peak and fitted waist versus samples per aperture radius."""
import math

from trapgen import analytic as A
from trapgen import grid, metrics, optics


def main():
    sys_, a = A.SystemSpec(0.5, 0.5, 808e-9), 100e-6
    mask = optics.MaskSpec("bright", A.MaskParams(a, 3 * a, 1.0, 0.0))
    print("spa   n     peak     w0/a")
    for spa, n in ((8, 512), (16, 1024), (24, 1536), (32, 2048)):
        g = grid.make_field(n, n, a / spa, a / spa, 1.0)
        I = grid.intensity(optics.propagate_4f(g, mask, optics.iris_filter(a, sys_), sys_))
        r_max = 1.5 * a
        prof = grid.radial_profile(I, (0.0, 0.0), n_bins=int(round(2 * r_max / I.dx)), r_max=r_max)
        w0 = metrics.fit_gaussian_waist(prof, "bright")
        print(f"{spa:3d} {n:5d}  {float(I.samples[n // 2, n // 2]):.5f}  {w0 / a:.4f}")
    print(f"analytic peak {A.efficiency('bright-aG', sys_):.5f}")


if __name__ == "__main__":
    main()
