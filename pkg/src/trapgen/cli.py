"""Command-line front end: ``trapgen {simulate,talbot,sweep,constants}``.

Exit codes: 0 success, 2 configuration or validation error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import shutil
import sys
import tempfile
from pathlib import Path

import numpy as np
from scipy import constants as sc

from . import __version__, analytic, grid, incoherent, metrics, optics, sweep
from .config import ConfigError, RunConfig, load_config
from .errors import NumericalFailure, RangeError, TrapgenError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


# -- builders --------------------------------------------------------------------

def build_system(cfg: RunConfig) -> analytic.SystemSpec:
    s = cfg.system
    return analytic.SystemSpec(s.f1_m, s.f2_m, s.lambda_m)


def build_mask(cfg: RunConfig) -> optics.MaskSpec:
    m = cfg.mask
    phi = math.radians(m.phi_ab_deg)
    if m.kind == "bright":
        params = analytic.MaskParams(m.a_m, m.d_m, m.t_a, 0.0, phi)
        return optics.MaskSpec("bright", params, m.grid_n)
    params = analytic.MaskParams(m.a_m, m.d_m, m.t_a if m.kind == "dark" else 1.0, m.t_b, phi)
    dual = None
    if m.kind == "dual":
        dual = analytic.MaskParams(m.dual.a_m, m.d_m, m.dual.t_a, m.t_b)
    return optics.MaskSpec(m.kind, params, m.grid_n, dual)


def build_filter(cfg: RunConfig, sys_: analytic.SystemSpec):
    f, a = cfg.filter, cfg.mask.a_m
    if f.kind == "none":
        return None
    if f.kind == "zone":
        return optics.zone_filter(a, sys_, f.n_rings)
    return optics.iris_filter(a, sys_, f.b_units)


def build_input(cfg: RunConfig) -> grid.Field:
    dx = cfg.mask.a_m / cfg.grid.samples_per_a
    return grid.make_field(cfg.grid.n, cfg.grid.n, dx, dx, 1.0)


def output_sites(mask: optics.MaskSpec, sys_: analytic.SystemSpec):
    """Image-plane centres of bright/dark primary sites and of the dual dark sites."""
    mag = sys_.magnification
    # adding 0.0 turns -0.0 into 0.0 so CSVs read cleanly
    return 0.0 - mask.site_centers() * mag, 0.0 - mask.dual_centers() * mag


# -- per-site metrics --------------------------------------------------------------

def _site_metrics(I: grid.Field, center, a_img: float, is_dark: bool, cfg: RunConfig,
                  out_field: grid.Field | None, sys_, workers: int):
    r_max = min(3 * a_img, cfg.mask.d_m * sys_.magnification / 2)
    # half-pixel bins keep the centre sample alone in bin 0
    prof = grid.radial_profile(I, center, n_bins=max(16, int(round(2 * r_max / I.dx))), r_max=r_max)
    ix = int(round((center[0] - I.origin[0]) / I.dx))
    iy = int(round((center[1] - I.origin[1]) / I.dy))
    c_int = float(I.samples[iy, ix])
    darkness = alpha = h = U0 = w_rho = w_z = None
    background = None
    if is_dark:
        darkness = metrics.site_darkness(I, [center], 0.5 * I.dx, a_img)[0]
        background = metrics.background_level(I, center, a_img)
        try:
            alpha = metrics.fit_power_law(prof)[1]
        except TrapgenError:
            alpha = None
    w0 = metrics.fit_gaussian_waist(prof, "dark" if is_dark else "bright", background)
    if cfg.z_scan is not None and out_field is not None:
        zs = np.linspace(cfg.z_scan.z_min_m, cfg.z_scan.z_max_m, cfg.z_scan.n)
        vol = optics.axial_scan(out_field, zs, sys_.wavelength, workers)
        ax = grid.sample_along_axis(vol.planes, zs, vol.geometry, center)
        h = metrics.divergence_parameter(ax, w0, sys_.wavelength, "dark" if is_dark else "bright",
                                         background if background else 1.0)
    if cfg.depth is not None:
        level = background if is_dark else c_int
        U0 = metrics.trap_depth(cfg.depth.input_intensity_W_m2 * level,
                                abs(cfg.depth.polarizability_uK_per_W_m2))
        if cfg.depth.mass_kg and U0 > 0:
            U0_J = U0 * 1e-6 * sc.k
            m = cfg.depth.mass_kg
            if not is_dark:
                w_rho = 2 / w0 * math.sqrt(U0_J / m)
            if h is not None:
                zR = math.pi * w0 ** 2 / sys_.wavelength
                w_z = math.sqrt(2 * U0_J / m) / (h * zR)
    return metrics.TrapMetrics((float(center[0]), float(center[1])), darkness, w0, alpha, h, U0,
                               w_rho, w_z, c_int), prof


# -- commands -----------------------------------------------------------------------

def cmd_simulate(cfg: RunConfig, out: Path, args) -> dict:
    sys_ = build_system(cfg)
    mask = build_mask(cfg)
    filt = build_filter(cfg, sys_)
    field = optics.propagate_4f(build_input(cfg), mask, filt, sys_)
    I = grid.intensity(field)
    a_img = sys_.a_image(cfg.mask.a_m)
    primary, dual = output_sites(mask, sys_)
    rows, first_prof = [], None
    scan_field = field if cfg.z_scan is not None else None
    for c in primary:
        m, prof = _site_metrics(I, c, a_img, mask.kind == "dark", cfg, scan_field, sys_, args.workers)
        rows.append(m)
        first_prof = first_prof or prof
    if mask.kind == "dual":
        a_dark = mask.dual_params.a * sys_.magnification
        for c in dual:
            rows.append(_site_metrics(I, c, a_dark, True, cfg, scan_field, sys_, args.workers)[0])

    grid.write_field(out / "focal_field.tfld", field)
    optics.write_pgm(out / "focal_intensity.pgm", I)
    grid.write_profile_csv(out / "radial_profile.csv", first_prof)
    if cfg.z_scan is not None:
        zs = np.linspace(cfg.z_scan.z_min_m, cfg.z_scan.z_max_m, cfg.z_scan.n)
        vol = optics.axial_scan(field, zs, sys_.wavelength, args.workers)
        optics.write_volume(out / "volume.tfld", vol)
        grid.write_profile_csv(out / "axial_profile.csv",
                               grid.sample_along_axis(vol.planes, zs, vol.geometry, tuple(primary[0])))
    metrics.write_metrics_csv(out / "metrics.csv", rows)
    extra = {}
    if args.verify_fft and mask.grid_n == 1 and filt is not None and filt.kind == "iris" and mask.kind != "dual":
        t_a = mask.params.aperture_amplitude
        t_b = mask.params.t_b
        u_b = sys_.u_of_b(cfg.mask.a_m, filt.b)
        ref = analytic.trap_intensity(first_prof.radii / a_img, 0.0, t_a, t_b, ((0.0, u_b),))
        ref = ref * (sys_.f1 / sys_.f2) ** 2
        sel = first_prof.radii <= 2 * a_img
        rms = float(np.sqrt(np.mean((first_prof.values[sel] - ref[sel]) ** 2)) / max(ref.max(), 1e-300))
        extra["verify"] = {"analytic_vs_fft_rms_relative": rms}
        (out / "verify.json").write_text(json.dumps(extra["verify"], indent=2) + "\n")
    return extra


def cmd_talbot(cfg: RunConfig, out: Path, args) -> dict:
    sys_ = build_system(cfg)
    mask = build_mask(cfg)
    filt = build_filter(cfg, sys_)
    d_img = cfg.mask.d_m * sys_.magnification
    a_img = sys_.a_image(cfg.mask.a_m)
    zT = analytic.talbot_length(d_img, sys_.wavelength)
    tb = cfg.talbot
    if not tb.z_min_m <= zT <= tb.z_max_m:
        raise RangeError(f"Talbot length {zT:.6g} m lies outside the configured range "
                         f"[{tb.z_min_m:.6g}, {tb.z_max_m:.6g}] m")
    geometry = build_input(cfg)
    primary, _ = output_sites(mask, sys_)
    half = min(2, max(mask.grid_n // 2 - 1, 0) + 0.5) * d_img
    report = [("talbot_length_formula_m", zT)]
    z_rev = zT
    coh = None
    if cfg.source.coherent:
        field = optics.propagate_4f(geometry, mask, filt, sys_)
        z_rev, corr = metrics.locate_revival(field, sys_.wavelength, tb.z_min_m, tb.z_max_m, half,
                                             tb.n_coarse, args.workers)
        coh = optics.axial_scan(field, [0.0, z_rev], sys_.wavelength, args.workers)
        optics.write_volume(out / "coherent_volume.tfld", coh)
        optics.write_pgm(out / "talbot_plane.pgm", coh.planes[1])
        report += [("talbot_plane_located_m", z_rev), ("located_over_formula", z_rev / zT),
                   ("focal_correlation", corr)]
    inc_cfg = cfg.source.incoherent
    if inc_cfg is not None:
        seed = args.seed if args.seed is not None else inc_cfg.seed
        spec = incoherent.SourceSpec(sys_.wavelength, inc_cfg.fwhm_m, inc_cfg.n_spectral, inc_cfg.n_modes,
                                     inc_cfg.mode_waist_m or incoherent.default_mode_waist(mask),
                                     seed, inc_cfg.draws)
        inc = incoherent.incoherent_volume(spec, mask, filt, sys_, [0.0, z_rev], geometry, args.workers)
        optics.write_volume(out / "incoherent_volume.tfld", inc)
        optics.write_pgm(out / "incoherent_talbot_plane.pgm", inc.planes[1])
        incoherent.write_manifest(out / "ensemble.json", spec)
        focal = grid.Field(inc.geometry.dx, inc.geometry.dy, inc.planes[0])
        dark = metrics.site_darkness(focal, primary, 0.5 * focal.dx, a_img) if mask.kind == "dark" else []
        if dark:
            report.append(("incoherent_focal_darkness_max", max(dark)))
        if coh is not None:
            report.append(("suppression_ratio",
                           metrics.talbot_suppression(coh, inc, z_rev, primary, 0.5 * focal.dx, a_img)))
    with open(out / "talbot_report.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "value"])
        for k, v in report:
            w.writerow([k, repr(float(v))])
    return {"report": dict(report)}


def cmd_sweep(cfg: RunConfig, out: Path, args) -> dict:
    sw = cfg.sweep
    phi = np.radians(sw.phi_deg.values())
    b = sw.b_units.values()
    summary = []
    for t in sw.t_a:
        grid_ = sweep.darkness_map(t, phi, b, sw.t_b)
        sweep.write_sweep(out / f"sweep_ta_{t:g}.csv", grid_,
                          {"t_a": t, "t_b": sw.t_b, "phi_deg": [sw.phi_deg.min, sw.phi_deg.max],
                           "b_units": [sw.b_units.min, sw.b_units.max]})
        p, bb, dk = grid_.argmin()
        summary.append((t, math.degrees(p), bb, dk))
    extra = {}
    if args.verify_fft:
        checks = []
        sys_ = build_system(cfg) if cfg.system else analytic.SystemSpec(0.5, 0.5, 808e-9)
        a = cfg.mask.a_m if cfg.mask else 100e-6
        for t, p_deg, bb, dk in summary:
            checks.append({"t_a": t, "phi_deg": p_deg, "b_units": bb, "analytic": dk,
                           "fft": fft_center_darkness(t * np.exp(1j * math.radians(p_deg)), bb, sys_, a, sw.t_b)})
        extra["verify"] = checks
        (out / "verify.json").write_text(json.dumps(checks, indent=2) + "\n")
    with open(out / "sweep_minima.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t_a", "phi_deg", "b_units", "darkness"])
        for row in summary:
            w.writerow([repr(float(v)) for v in row])
    return extra


def fft_center_darkness(t_a: complex, b_units: float, sys_, a: float, t_b: float = 1.0,
                        samples_per_a: float = 16, n: int = 1024) -> float:
    """Centre intensity over background from a single-site FFT simulation."""
    dx = a / samples_per_a
    g = grid.make_field(n, n, dx, dx, 1.0)
    mask = optics.MaskSpec("dark", analytic.MaskParams(a, 6 * a, abs(t_a), t_b, float(np.angle(t_a))))
    out = optics.propagate_4f(g, mask, optics.iris_filter(a, sys_, b_units), sys_)
    I = grid.intensity(out)
    a_img = sys_.a_image(a)
    return metrics.site_darkness(I, [(0.0, 0.0)], 0.5 * I.dx, a_img)[0]


def constants_table() -> list[tuple[str, float, str]]:
    """Regression constants computed live."""
    sys_ = analytic.SystemSpec(0.5, 0.5, 808e-9)
    a = 100e-6
    bright = analytic.best_fit_waist("bright-aG", a, sys_)
    dark = analytic.best_fit_waist("dark-aG-287", a, sys_)
    rows = [
        ("bright_efficiency", analytic.efficiency("bright-aG", sys_), "I/I0"),
        ("bright_w0_over_a", bright.w0 / a, "1"),
        ("dark287_w0_over_a", dark.w0 / a, "1"),
        ("opaque_w0_over_a_declared", analytic.OPAQUE_WAIST_RATIO, "1"),
        ("dark_ta", analytic.DARK_TA, "t_b"),
        ("dark_Ta", analytic.DARK_TA ** 2, "1"),
        ("bright_h", bright.h, "1"),
        ("dark287_h", dark.h, "1"),
        ("dark287_efficiency", analytic.efficiency("dark-aG-287", sys_), "I/I0"),
        ("opaque_efficiency", analytic.efficiency("dark-aG-opaque", sys_), "I/I0"),
        ("eta_x11", analytic.airy_power_fraction(analytic.X11), "1"),
        ("eta_x01", analytic.airy_power_fraction(analytic.X01), "1"),
        ("throughput_bright_d3a", analytic.power_throughput(analytic.MaskParams(a, 3 * a, 1, 0), "x11"), "1"),
        ("throughput_opaque_d3a", analytic.power_throughput(analytic.MaskParams(a, 3 * a, 0, 1), "x01"), "1"),
        ("throughput_287_d3a", analytic.power_throughput(
            analytic.MaskParams(a, 3 * a, analytic.DARK_TA, 1), "x11"), "1"),
    ]
    # thermal spreads at lambda = 808 nm, w0 = 1 um, kBT/U0 = 1/10
    w0, lam, m = 1e-6, 808e-9, 1.443e-25
    U0 = 1.0
    T = 0.1 * U0 / sc.k
    zR = math.pi * w0 ** 2 / lam
    g = analytic.confinement("gaussian", U0, T, analytic.GaussEquiv(w0, zR, 1.0), m)
    b = analytic.confinement("bright-aG", U0, T, analytic.GaussEquiv(w0, zR, bright.h), m)
    d = analytic.confinement("dark-aG-287", U0, T, analytic.GaussEquiv(w0, zR, dark.h), m)
    rows += [
        ("sigma_rho_gaussian", g.sigma_rho * 1e6, "um"),
        ("sigma_z_gaussian", g.sigma_z * 1e6, "um"),
        ("sigma_z_bright", b.sigma_z * 1e6, "um"),
        ("sigma_rho_dark287", d.sigma_rho * 1e6, "um"),
        ("sigma_z_dark287", d.sigma_z * 1e6, "um"),
        ("talbot_length_43um_805nm", analytic.talbot_length(43e-6, 805e-9) * 1e3, "mm"),
    ]
    return rows


def cmd_constants() -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "value", "units", "value_full"])
    for name, value, units in constants_table():
        w.writerow([name, f"{value:.3g}", units, repr(float(value))])
    return buf.getvalue()


# -- plumbing -----------------------------------------------------------------------

COMMANDS = {"simulate": cmd_simulate, "talbot": cmd_talbot, "sweep": cmd_sweep}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trapgen", description="4f-filtered optical trap array toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("simulate", "talbot", "sweep"):
        s = sub.add_parser(name)
        s.add_argument("--config", required=True, help="JSON run configuration")
        s.add_argument("--out", required=True, help="output directory")
        s.add_argument("--seed", type=int, default=None, help="override the ensemble seed (u64)")
        s.add_argument("--threads", type=int, default=1, help="worker threads, 0 = auto")
        s.add_argument("--verify-fft", action="store_true", help="run analytic-vs-FFT cross-checks")
    sub.add_parser("constants", help="print regression constants as CSV")
    return p


def _run(args) -> int:
    if args.command == "constants":
        sys.stdout.write(cmd_constants())
        return EXIT_OK
    cfg = load_config(args.config)
    if cfg.command != args.command:
        raise ConfigError(f"config is for '{cfg.command}', not '{args.command}'", args.config, 2)
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        raise ConfigError("--seed must be an unsigned 64-bit integer")
    args.workers = (os.cpu_count() or 1) if args.threads == 0 else max(1, args.threads)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".trapgen-", dir=out.parent))
    try:
        extra = COMMANDS[args.command](cfg, staging, args)
        resolved = cfg.to_dict()
        if args.seed is not None and resolved["source"].get("incoherent"):
            resolved["source"]["incoherent"]["seed"] = args.seed
        manifest = {"toolkit": "trapgen", "version": __version__, "command": args.command,
                    "config": resolved, "seed": args.seed,
                    "outputs": sorted(p.name for p in staging.iterdir()) + ["manifest.json"]}
        manifest.update(extra)
        (staging / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        out.mkdir(parents=True, exist_ok=True)
        for p in staging.iterdir():
            os.replace(p, out / p.name)
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except TrapgenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
