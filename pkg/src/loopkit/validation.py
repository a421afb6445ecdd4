"""
Regression checks against the reference tables, plus property-style
checks for quantities that have no tabulated values.

``run_all()`` returns one ``CriterionResult`` per numbered criterion; each
holds the individual comparisons as ``Check`` rows.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.constants import mu_0, pi

from . import fixtures, presets
from .coupling import (
    CoupledPair,
    Termination,
    efficiency,
    lmatch_bandwidth,
    mutual_inductance_coaxial,
    optimal_termination,
)
from .extraction import DeembedSpec, extract_rlc, s_from_z
from .feedline import FeedlineSpec, reff_exact, reff_simplified, x_in_min
from .resonator import build_resonator
from .tline import rlgc
from .touchstone import TouchstoneData, format_touchstone, parse_touchstone


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    computed: str
    tolerance: str
    passed: bool


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name, expected, computed, tolerance, passed):
        self.checks.append(Check(name, expected, computed, tolerance, bool(passed)))

    def within(self, name: str, expected: float, computed: float, rel: float, unit: str = ""):
        ok = abs(computed - expected) <= rel * abs(expected)
        self.add(name, f"{expected:.4g}{unit}", f"{computed:.4g}{unit}", f"±{rel * 100:g}%", ok)


def _quiet(fn, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(*args, **kwargs)


def _model_row(number: int, title: str, geometry, row: fixtures.FixtureRow, tol: dict) -> CriterionResult:
    res = CriterionResult(number, title)
    t0 = time.perf_counter()
    loop = _quiet(build_resonator, geometry)
    elapsed = time.perf_counter() - t0
    res.within("f0", row.f0 / 1e6, loop.f0 / 1e6, tol["f0"], " MHz")
    res.within("L", row.L * 1e6, loop.L * 1e6, tol["L"], " uH")
    res.within("C", row.C * 1e12, loop.C * 1e12, tol["C"], " pF")
    res.within("R", row.R, loop.R, tol["R"], " ohm")
    res.within("Q", row.Q, loop.Q, tol["Q"])
    res.add("runtime", "< 1 s", f"{elapsed * 1e3:.1f} ms", "1 s", elapsed < 1.0)
    return res


MODEL_TOL = {"f0": 0.03, "L": 0.03, "C": 0.08, "R": 0.30, "Q": 0.25}


def check_stripline_model() -> CriterionResult:
    return _model_row(
        1, f"stripline W=10 mm model row (tan d = {presets.DUROID_5880.tan_d:g})", presets.stripline_loop(),
        fixtures.table("IV").row("Model"), MODEL_TOL,
    )


def check_microstrip_model() -> CriterionResult:
    return _model_row(
        2, f"microstrip W=10 mm model row (tan d = {presets.DUROID_5880.tan_d:g})", presets.microstrip_loop(),
        fixtures.table("VIII").row("Model"), MODEL_TOL,
    )


def check_width_trends() -> CriterionResult:
    res = CriterionResult(3, "f0 and Q trends over W = 2..10 mm")
    widths = [w * 1e-3 for w in range(2, 11)]
    for tid, build in (("I", presets.stripline_loop), ("V", presets.microstrip_loop)):
        loops = [_quiet(build_resonator, build(width=w)) for w in widths]
        f0 = np.array([lp.f0 for lp in loops])
        q = np.array([lp.Q for lp in loops])
        ref = np.array(fixtures.table(tid).column("f0_mhz")) * 1e6
        dev = np.abs(f0 - ref) / ref
        res.add(f"table {tid}: f0 decreasing", "strict", "yes" if np.all(np.diff(f0) < 0) else "no", "-", np.all(np.diff(f0) < 0))
        res.add(f"table {tid}: max f0 deviation", "0", f"{dev.max():.1%}", "15%", dev.max() <= 0.15)
        res.add(f"table {tid}: Q increasing", "strict", "yes" if np.all(np.diff(q) > 0) else "no", "-", np.all(np.diff(q) > 0))
    return res


def check_slit_shift() -> CriterionResult:
    res = CriterionResult(4, "capacitance ratio for a slit moved to 10 degrees")
    ideal = 350.0 / 180.0
    base = _quiet(build_resonator, presets.stripline_loop())
    shifted = _quiet(build_resonator, presets.stripline_loop(slit_angle=math.radians(10)))
    ratio = shifted.C / base.C
    res.add("lumped C ratio", f"{ideal:.6f}", f"{ratio:.6f}", "1e-9", abs(ratio - ideal) <= 1e-9 * ideal)
    c_base = fixtures.table("I").column("c_pf")
    c_shift = fixtures.table("III").column("c_pf")
    sim = [b / a for a, b in zip(c_base, c_shift)]
    worst = max(sim, key=lambda r: abs(r - ideal))
    res.add("full-wave ratios (worst W)", f"{ideal:.3f}", f"{worst:.3f}", "±10%", abs(worst - ideal) <= 0.10 * ideal)
    return res


def check_feed_line() -> CriterionResult:
    res = CriterionResult(5, "feed microstrip parameters at 40 MHz")
    tl = rlgc(presets.FEED_LINE, presets.FEED_DIELECTRIC, presets.FEED_CONDUCTOR, 40e6)
    res.within("Re gamma", presets.FEED_GAMMA.real, tl.gamma.real, 0.15, " Np/m")
    res.within("Im gamma", presets.FEED_GAMMA.imag, tl.gamma.imag, 0.03, " rad/m")
    res.within("Re Z0", presets.FEED_Z0.real, tl.z0_complex.real, 0.05, " ohm")
    return res


REFF_LENGTHS = (0.1, 0.25, 0.5)


def check_reff() -> CriterionResult:
    res = CriterionResult(6, "effective feed resistance, exact vs simplified")
    x = np.round(np.arange(-20000, 20001) * 0.01, 2)
    for length in REFF_LENGTHS:
        feed = FeedlineSpec(presets.FEED_GAMMA, presets.FEED_Z0, length)
        exact = reff_exact(feed, 1j * x)
        simple = _quiet(reff_simplified, feed, x)
        rel = np.max(np.abs(simple - exact) / np.abs(exact))
        res.add(f"l={length} m: max rel diff", "0", f"{rel:.2e}", "5%", rel <= 0.05)
        xm = x_in_min(feed)
        xb = x[int(np.argmin(exact))]
        res.add(f"l={length} m: X_min vs grid argmin", f"{xb:.2f} ohm", f"{xm:.4f} ohm", "0.01 ohm", abs(xm - xb) <= 0.01 + 1e-9)
    lossless = FeedlineSpec(1j * presets.FEED_GAMMA.imag, complex(presets.FEED_Z0.real), 0.25)
    worst = float(np.max(np.abs(reff_exact(lossless, 1j * x))))
    res.add("lossless feed", "0", f"{worst:.1e} ohm", "1e-12 ohm", worst < 1e-12)
    return res


def embed_series_rlc(f, R, L, C, z0_feed, theta_deg, f_ref):
    """Impedance of a series RLC seen through a lossless line (line equation)."""
    w = 2 * pi * f
    z = R + 1j * (w * L - 1.0 / (w * C))
    t = np.tan(np.deg2rad(theta_deg) * f / f_ref)
    return z0_feed * (z + 1j * z0_feed * t) / (z0_feed + 1j * z * t)


def synthetic_touchstone(R, L, C, spec: DeembedSpec, z_ref=50.0, span=0.2, n=2001) -> TouchstoneData:
    f0 = 1.0 / (2 * pi * math.sqrt(L * C))
    f = np.linspace(f0 * (1 - span), f0 * (1 + span), n)
    z = embed_series_rlc(f, R, L, C, spec.z0, spec.theta_deg, spec.f_ref)
    return TouchstoneData(f, s_from_z(z, z_ref).reshape(-1, 1, 1), z_ref)


def check_extraction(cases: int = 100, seed: int = 20240611) -> CriterionResult:
    res = CriterionResult(7, "synthesize-then-extract round trip")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        R = rng.uniform(0.05, 1.0)
        L = rng.uniform(0.1e-6, 1e-6)
        C = rng.uniform(10e-12, 200e-12)
        spec = DeembedSpec(rng.uniform(10.0, 100.0), rng.uniform(0.0, 60.0), 30e6)
        got = extract_rlc(synthetic_touchstone(R, L, C, spec), spec)
        worst = max(worst, abs(got.R / R - 1), abs(got.L / L - 1), abs(got.C / C - 1))
    res.add(f"{cases} cases: worst rel error in R, L, C", "0", f"{worst:.2e}", "0.1%", worst <= 1e-3)

    spec = DeembedSpec(17.6, 17.8, 30e6)
    data = synthetic_touchstone(0.2, 0.35e-6, 70e-12, spec)
    extracted = {
        fmt: extract_rlc(parse_touchstone(format_touchstone(data, fmt=fmt), n_ports=1), spec)
        for fmt in ("RI", "MA", "DB")
    }
    ref = extracted["RI"]
    spread = max(
        abs(getattr(e, k) / getattr(ref, k) - 1) for e in extracted.values() for k in ("R", "L", "C", "f0")
    )
    res.add("RI/MA/DB agreement", "0", f"{spread:.1e}", "1e-9", spread <= 1e-9)
    return res


def check_coupled_link() -> CriterionResult:
    res = CriterionResult(8, "microstrip pair at 10 cm with L-match")
    loop = _quiet(build_resonator, presets.microstrip_loop())
    pair = CoupledPair.coaxial(loop, loop, presets.LOOP_RADIUS, presets.LOOP_RADIUS, fixtures.LINK_DISTANCE)
    curve = lmatch_bandwidth(pair, fixtures.LINK_MATCH_FREQUENCY)
    res.add("peak efficiency", f"{fixtures.LINK_PEAK_EFFICIENCY:.0%}", f"{curve.peak:.1%}", ">= 90%", curve.peak >= 0.90)
    bw = curve.bandwidth / 1e6
    ok = not math.isnan(bw) and 3.0 <= bw <= 12.0
    res.add("3-dB bandwidth", f"{fixtures.LINK_BANDWIDTH_HZ / 1e6:.0f} MHz", f"{bw:.2f} MHz", "[3, 12] MHz", ok)
    return res


def check_optimal_termination(n: int = 101) -> CriterionResult:
    res = CriterionResult(9, "optimal termination beats a load grid")
    loop = _quiet(build_resonator, presets.microstrip_loop())
    pair = CoupledPair.coaxial(loop, loop, presets.LOOP_RADIUS, presets.LOOP_RADIUS, fixtures.LINK_DISTANCE)
    worst = -np.inf
    for scale in np.linspace(0.9, 1.1, 5):
        f = loop.f0 * scale
        z_opt = complex(optimal_termination(pair, f))
        _, eta_opt = efficiency(pair, Termination(z_opt), f)
        span = max(abs(z_opt), 1.0)
        r_grid = np.linspace(max(z_opt.real - 0.5 * span, 1e-6), z_opt.real + 0.5 * span, n)
        x_grid = np.linspace(z_opt.imag - 0.5 * span, z_opt.imag + 0.5 * span, n)
        rr, xx = np.meshgrid(r_grid, x_grid)
        _, eta = efficiency(pair, Termination(rr + 1j * xx), f)
        worst = max(worst, float(np.max(eta) / eta_opt - 1))
    res.add(f"5 frequencies x {n}x{n} loads: max(grid)/optimum - 1", "<= 0", f"{worst:.2e}", "1e-9", worst <= 1e-9)
    return res


def neumann_mutual_inductance(a1: float, a2: float, d: float, segments: int = 100) -> float:
    """Midpoint-rule double sum of the Neumann line integral for coaxial rings."""
    phi = (np.arange(segments) + 0.5) * 2 * pi / segments
    dphi = phi[:, None] - phi[None, :]
    dist = np.sqrt(a1**2 + a2**2 - 2 * a1 * a2 * np.cos(dphi) + d**2)
    step = 2 * pi / segments
    return mu_0 / (4 * pi) * float(np.sum(a1 * a2 * np.cos(dphi) / dist)) * step**2


def check_mutual_inductance() -> CriterionResult:
    res = CriterionResult(10, "elliptic mutual inductance vs Neumann sum")
    a = presets.LOOP_RADIUS
    for d in (0.05, 0.10, 0.20):
        m = mutual_inductance_coaxial(a, a, d)
        ref = neumann_mutual_inductance(a, a, d)
        res.within(f"d={d * 100:.0f} cm", ref * 1e9, m * 1e9, 0.001, " nH")
    return res


def check_fixture_integrity() -> CriterionResult:
    res = CriterionResult(0, "reference table integrity")
    digest = fixtures.fixture_digest()
    res.add("sha256", fixtures.FIXTURE_SHA256[:16], digest[:16], "exact", fixtures.verify_integrity())
    return res


CRITERIA: tuple[Callable[[], CriterionResult], ...] = (
    check_stripline_model,
    check_microstrip_model,
    check_width_trends,
    check_slit_shift,
    check_feed_line,
    check_reff,
    check_extraction,
    check_coupled_link,
    check_optimal_termination,
    check_mutual_inductance,
)


def run_all(include_integrity: bool = True) -> list[CriterionResult]:
    results = [check_fixture_integrity()] if include_integrity else []
    for fn in CRITERIA:
        t0 = time.perf_counter()
        r = fn()
        r.seconds = time.perf_counter() - t0
        results.append(r)
    return results
