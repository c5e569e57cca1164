"""Background transmission that balances bright and dark depths, with an FFT check."""
import argparse

import numpy as np

from trapgen import analytic as A
from trapgen import cli, grid, metrics, optics, sweep


def fft_depth_ratio(alpha_b, alpha_d, variant, a=100e-6, spa=16, n=1024):
    sys_ = A.SystemSpec(0.5, 0.5, 808e-9)
    mask = sweep.design_dual_mask(alpha_b, alpha_d, a, 8 * a, variant, grid_n=3)
    g = grid.make_field(n, n, a / spa, a / spa, 1.0)
    I = grid.intensity(optics.propagate_4f(g, mask, optics.iris_filter(a, sys_), sys_))
    bright_c, dark_c = cli.output_sites(mask, sys_)
    bg = metrics.background_level(I, tuple(dark_c[0]), a)
    X, Y = I.coords()
    bright = np.mean([I.samples[np.argmin(abs(I.y - y)), np.argmin(abs(I.x - x))] - bg for x, y in bright_c])
    ring = np.mean([I.samples[np.hypot(X - x, Y - y) < 2.5 * a].max() for x, y in dark_c])
    return alpha_b * bright / (abs(alpha_d) * ring)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha-bright", type=float, default=847.0)
    ap.add_argument("--alpha-dark", type=float, default=-433.0)
    ap.add_argument("--fft", action="store_true")
    args = ap.parse_args()
    for variant in ("t_a-scaled", "opaque"):
        t_b = A.dual_species_balance(args.alpha_bright, args.alpha_dark, variant)
        line = f"{variant:11s} t_b = {t_b:.4f}"
        if args.fft:
            line += f"  FFT depth ratio {fft_depth_ratio(args.alpha_bright, args.alpha_dark, variant):.3f}"
        print(line)
    print(f"equal |alpha|  t_b = {A.dual_species_balance(1.0, -1.0):.4f}")


if __name__ == "__main__":
    main()
