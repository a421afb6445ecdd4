"""Command-line front end: ``loopkit <command> [options]``."""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import validation
from .config import ConfigError, ProjectConfig, default_config, load_config
from .coupling import (
    CoupledPair,
    EfficiencyCurve,
    default_grid,
    lmatch_bandwidth,
    matched_efficiency_sweep,
)
from .extraction import DeembedSpec, ExtractionError, extract_rlc
from .feedline import FeedlineSpec, reff_curve, x_in_min
from .resonator import ConvergenceError, LoopRlc, build_resonator
from .touchstone import TouchstoneError, read_touchstone
from .tline import rlgc

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_VALIDATION = 0, 1, 2, 3
CONFIG_ENV = "LOOPKIT_CONFIG"

DESIGN_COLUMNS = ("f0_hz", "l_h", "c_f", "r_ohm", "q", "r_rad_ohm", "r_c_ohm", "r_esr_ohm", "r_feed_ohm")
SWEEP_UNITS = {"width": "width_m", "slit_angle_deg": "slit_angle_deg", "eps_r": "eps_r", "loop_radius": "loop_radius_m"}


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.9g}"


def render_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def design_row(loop: LoopRlc) -> list:
    b = loop.breakdown
    return [loop.f0, loop.L, loop.C, loop.R, loop.Q, b.r_rad, b.r_c, b.r_esr, b.r_feed]


def design_report(name: str, loop: LoopRlc) -> str:
    b = loop.breakdown
    return "\n".join([
        f"loop {name}",
        f"  f0      {loop.f0 / 1e6:10.4f} MHz",
        f"  L       {loop.L * 1e6:10.4f} uH",
        f"  C       {loop.C * 1e12:10.3f} pF",
        f"  R       {loop.R:10.4f} ohm",
        f"  Q       {loop.Q:10.1f}",
        f"  R_rad   {b.r_rad:10.5f} ohm",
        f"  R_c     {b.r_c:10.5f} ohm",
        f"  R_esr   {b.r_esr:10.5f} ohm",
        f"  R_feed  {b.r_feed:10.5f} ohm",
    ]) + "\n"


def _build(cfg: ProjectConfig, name: str, args) -> LoopRlc:
    geometry = cfg.loop(name).geometry()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        loop = build_resonator(geometry, exact_stub=args.exact_stub, textbook_rc=args.textbook_rc)
    for w in caught:
        print(f"warning: {name}: {w.message}", file=sys.stderr)
    return loop


def cmd_design(args, cfg: ProjectConfig):
    loop = _build(cfg, args.loop, args)
    if args.format == "report":
        return design_report(args.loop, loop)
    return render_csv(DESIGN_COLUMNS, [design_row(loop)])


def cmd_sweep(args, cfg: ProjectConfig):
    if args.sweep:
        sw = cfg.sweep(args.sweep)
        loop_name, param, grid = sw.loop, sw.param, sw.grid()
    else:
        if args.param is None or args.start is None or args.stop is None:
            raise UsageError("give --sweep NAME or --param with --start/--stop/--steps")
        if args.steps < 1 or (args.steps > 1 and args.start == args.stop):
            raise UsageError("sweep range is degenerate")
        loop_name, param = args.loop, args.param
        grid = np.linspace(args.start, args.stop, args.steps)
    base = cfg.loop(loop_name)
    header = (SWEEP_UNITS[param],) + DESIGN_COLUMNS + ("error",)
    rows, lines = [], [f"sweep of {param} on loop {loop_name}"]
    for value in grid:
        try:
            geometry = base.with_value(param, float(value)).geometry()
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                loop = build_resonator(geometry, exact_stub=args.exact_stub, textbook_rc=args.textbook_rc)
        except (ValueError, ConvergenceError) as exc:
            rows.append([value] + [math.nan] * len(DESIGN_COLUMNS) + [str(exc)])
            lines.append(f"  {param}={value:.6g}: error: {exc}")
            continue
        rows.append([value] + design_row(loop) + [""])
        lines.append(
            f"  {param}={value:.6g}: f0 {loop.f0 / 1e6:.3f} MHz, L {loop.L * 1e6:.4f} uH, "
            f"C {loop.C * 1e12:.2f} pF, R {loop.R:.4f} ohm, Q {loop.Q:.1f}"
        )
    if args.format == "report":
        return "\n".join(lines) + "\n"
    return render_csv(header, rows)


def cmd_extract(args, cfg: ProjectConfig):
    try:
        data = read_touchstone(args.file)
    except OSError as exc:
        raise InputError(f"{args.file}: {exc.strerror}") from None
    spec = DeembedSpec(args.z0_feed, args.theta_deg, args.f_ref)
    try:
        got = extract_rlc(data, spec, port=args.port - 1)
    except ExtractionError as exc:
        raise InputError(f"{args.file}: {exc}") from None
    if args.format == "report":
        out = [
            f"file {args.file}",
            f"  f0  {got.f0 / 1e6:.4f} MHz",
            f"  L   {got.L * 1e6:.4f} uH",
            f"  C   {got.C * 1e12:.3f} pF",
            f"  R   {got.R:.4f} ohm",
            f"  Q   {got.Q:.1f}",
            f"  fit at {got.fit_frequencies[0] / 1e6:.4f} and {got.fit_frequencies[1] / 1e6:.4f} MHz,"
            f" residual {got.residual:.2e}",
        ]
        for fc, direction in got.other_crossings:
            out.append(f"  other reactance crossing ({direction}) at {fc / 1e6:.4f} MHz")
        return "\n".join(out) + "\n"
    header = ("f0_hz", "l_h", "c_f", "r_ohm", "q", "fit_f1_hz", "fit_f2_hz", "residual")
    return render_csv(header, [[got.f0, got.L, got.C, got.R, got.Q, *got.fit_frequencies, got.residual]])


def _feed_for(cfg: ProjectConfig, name: str):
    geometry = cfg.loop(name).geometry()

    def feed(f):
        tl = rlgc(geometry.cross_section, geometry.dielectric, geometry.conductor, f)
        return FeedlineSpec.from_tline(tl, geometry.feed_length)

    return feed


def cmd_couple(args, cfg: ProjectConfig):
    loop1 = _build(cfg, args.loop1, args)
    loop2 = _build(cfg, args.loop2 or args.loop1, args)
    if args.mutual is not None:
        pair = CoupledPair(loop1, loop2, args.mutual)
    else:
        a1 = cfg.loop(args.loop1).values["loop_radius"]
        a2 = cfg.loop(args.loop2 or args.loop1).values["loop_radius"]
        pair = CoupledPair.coaxial(loop1, loop2, a1, a2, args.distance)
    f_center = args.f_match or loop1.f0
    if args.f_start is not None and args.f_stop is not None:
        n = int(round((args.f_stop - args.f_start) / args.f_step)) + 1
        grid = np.linspace(args.f_start, args.f_stop, max(n, 1))
    else:
        grid = default_grid(f_center, step=args.f_step)
    try:
        if args.match == "lmatch":
            curve = lmatch_bandwidth(pair, f_center, r_source=args.r_source, f_grid=grid)
        else:
            feed = _feed_for(cfg, args.loop1) if args.with_feedline else None
            curve = matched_efficiency_sweep(pair, grid, feed=feed)
    except NotImplementedError as exc:
        raise UsageError(str(exc)) from None
    return couple_output(curve, pair, args)


def couple_output(curve: EfficiencyCurve, pair: CoupledPair, args) -> str:
    if args.format == "report":
        bw = "not resolved in grid" if math.isnan(curve.bandwidth) else f"{curve.bandwidth / 1e6:.3f} MHz"
        return "\n".join([
            f"coupled pair {args.loop1}/{args.loop2 or args.loop1}, match {args.match}",
            f"  M          {pair.M * 1e9:.3f} nH (k = {pair.k:.4f})",
            f"  peak eta'  {curve.peak:.4f} at {curve.f_peak / 1e6:.4f} MHz",
            f"  3-dB BW    {bw}",
        ]) + "\n"
    z = np.asarray(curve.z_load)
    rows = zip(curve.f, curve.eta, curve.eta_prime, z.real, z.imag)
    return render_csv(("f_hz", "eta", "eta_prime", "z_l_re_ohm", "z_l_im_ohm"), rows)


def cmd_feedline(args, cfg: ProjectConfig):
    feed = cfg.feed(args.feed)
    if args.length is not None:
        feed = FeedlineSpec(feed.gamma, feed.z0, args.length)
    if args.x_step <= 0 or args.x_stop <= args.x_start:
        raise UsageError("reactance grid is degenerate")
    n = int(round((args.x_stop - args.x_start) / args.x_step)) + 1
    table = reff_curve(feed, np.linspace(args.x_start, args.x_stop, n))
    x_min = x_in_min(feed)
    summary = f"X_IN_min = {x_min:.4f} ohm (feed length {feed.length:g} m)"
    if args.format == "report":
        i = int(np.argmin(table[:, 1]))
        return (
            f"{summary}\n  grid minimum of exact R_EFF: {table[i, 1]:.5f} ohm at X_IN = {table[i, 0]:.3f} ohm\n"
        )
    print(summary, file=sys.stderr)
    return render_csv(("x_in_ohm", "r_eff_exact_ohm", "r_eff_simplified_ohm"), table)


def cmd_validate(args, cfg: ProjectConfig):
    results = validation.run_all()
    if args.format == "csv":
        rows = [
            [r.number, r.title, c.name, c.expected, c.computed, c.tolerance, "pass" if c.passed else "FAIL"]
            for r in results for c in r.checks
        ]
        text = render_csv(("criterion", "title", "check", "expected", "computed", "tolerance", "verdict"), rows)
    else:
        lines = []
        for r in results:
            lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.number:>2} {r.title} ({r.seconds * 1e3:.0f} ms)")
            for c in r.checks:
                mark = "ok  " if c.passed else "FAIL"
                lines.append(f"      {mark} {c.name}: expected {c.expected}, computed {c.computed}, tol {c.tolerance}")
        failed = sum(not r.passed for r in results)
        lines.append(f"{len(results) - failed}/{len(results)} criteria passed")
        text = "\n".join(lines) + "\n"
    return text, all(r.passed for r in results)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="loopkit", description="Shielded-loop resonator design and analysis")
    p.add_argument("--config", type=Path, help=f"INI project file (default: ${CONFIG_ENV}, else built-ins)")
    p.add_argument("--out", type=Path, help="write output into this directory instead of stdout")
    p.add_argument("--format", choices=("csv", "report"), default="csv")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model_flags(sp):
        sp.add_argument("--exact-stub", action="store_true", help="use the exact open-stub capacitance")
        sp.add_argument("--textbook-rc", action="store_true", help="ring-length form of the exterior conductor loss")

    sp = sub.add_parser("design", help="series RLC of one loop")
    sp.add_argument("--loop", default="stripline")
    model_flags(sp)

    sp = sub.add_parser("sweep", help="design over a parameter grid")
    sp.add_argument("--sweep", help="named sweep from the config")
    sp.add_argument("--loop", default="stripline")
    sp.add_argument("--param", choices=tuple(SWEEP_UNITS))
    sp.add_argument("--start", type=float)
    sp.add_argument("--stop", type=float)
    sp.add_argument("--steps", type=int, default=9)
    model_flags(sp)

    sp = sub.add_parser("extract", help="RLC from a Touchstone file")
    sp.add_argument("file", type=Path)
    sp.add_argument("--z0-feed", type=float, default=50.0, help="feed impedance, ohm")
    sp.add_argument("--theta-deg", type=float, default=0.0, help="feed electrical length at --f-ref, degrees")
    sp.add_argument("--f-ref", type=float, default=30e6, help="reference frequency, Hz")
    sp.add_argument("--port", type=int, default=1)

    sp = sub.add_parser("couple", help="transfer efficiency of two loops")
    sp.add_argument("--loop1", default="microstrip")
    sp.add_argument("--loop2")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--distance", type=float, default=0.10, help="coaxial separation, m")
    g.add_argument("--mutual", type=float, help="mutual inductance, H")
    sp.add_argument("--match", choices=("lmatch", "optimal"), default="lmatch")
    sp.add_argument("--f-match", type=float, help="L-match design frequency, Hz (default: loop f0)")
    sp.add_argument("--r-source", type=float, default=50.0)
    sp.add_argument("--f-start", type=float)
    sp.add_argument("--f-stop", type=float)
    sp.add_argument("--f-step", type=float, default=10e3)
    sp.add_argument("--with-feedline", action="store_true", help="optimal mode: charge the lossy feed as R_EFF")
    model_flags(sp)

    sp = sub.add_parser("feedline", help="effective feed resistance over load reactance")
    sp.add_argument("--feed", default="feed50")
    sp.add_argument("--length", type=float, help="override the feed length, m")
    sp.add_argument("--x-start", type=float, default=-200.0)
    sp.add_argument("--x-stop", type=float, default=200.0)
    sp.add_argument("--x-step", type=float, default=1.0)

    sp = sub.add_parser("validate", help="replay the reference tables and acceptance checks")
    return p


COMMANDS = {
    "design": cmd_design,
    "sweep": cmd_sweep,
    "extract": cmd_extract,
    "couple": cmd_couple,
    "feedline": cmd_feedline,
}


def resolve_config(path: Optional[Path]) -> ProjectConfig:
    cfg = default_config()
    path = path or (Path(os.environ[CONFIG_ENV]) if os.environ.get(CONFIG_ENV) else None)
    if path is None:
        return cfg
    user = load_config(path)
    cfg.loops.update(user.loops)
    cfg.feeds.update(user.feeds)
    cfg.sweeps.update(user.sweeps)
    cfg.output_dir = user.output_dir
    cfg.tolerances = user.tolerances
    return cfg


def emit(text: str, command: str, args, cfg: ProjectConfig):
    out_dir = args.out or cfg.output_dir
    if out_dir is None:
        sys.stdout.write(text)
        return
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / f"{command}.{'csv' if args.format == 'csv' else 'txt'}"
    with open(target, "w", newline="") as fh:
        fh.write(text)
    print(f"wrote {target}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"loopkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    argv_list = list(sys.argv[1:] if argv is None else argv)
    if args.command == "validate" and not any(a.startswith("--format") for a in argv_list):
        args.format = "report"
    try:
        cfg = resolve_config(args.config)
        if args.command == "validate":
            text, ok = cmd_validate(args, cfg)
            emit(text, "validate", args, cfg)
            return EXIT_OK if ok else EXIT_VALIDATION
        emit(COMMANDS[args.command](args, cfg), args.command, args, cfg)
    except (UsageError, ConfigError) as exc:
        print(f"loopkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, TouchstoneError) as exc:
        print(f"loopkit: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, ConvergenceError, ZeroDivisionError) as exc:
        print(f"loopkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
