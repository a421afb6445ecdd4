"""
Two magnetically coupled series-RLC loops.

Covers mutual inductance of coaxial circular filaments, input impedance of
the loaded pair, the optimal (simultaneous conjugate) termination, transfer
efficiency and frequency sweeps with either per-frequency optimal
terminations or a fixed lossless L-section match.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.constants import mu_0, pi

from .feedline import FeedlineSpec, reff_exact
from .resonator import LoopRlc

# default frequency step of efficiency sweeps
GRID_STEP = 10e3


def agm_elliptic(m: float) -> tuple[float, float]:
    """Complete elliptic integrals ``K(m)`` and ``E(m)`` with parameter ``m = k**2``.

    Uses the arithmetic-geometric mean; converges quadratically.
    """
    if not 0 <= m < 1:
        raise ValueError(f"elliptic parameter must lie in [0, 1), got {m}")
    a, b = 1.0, math.sqrt(1.0 - m)
    c_sq_sum = 0.5 * m  # 2**(n-1) * c_n**2 with n = 0, c_0**2 = m
    power = 0.5
    for _ in range(64):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        power *= 2.0
        c_sq_sum += power * c * c
        if abs(c) < 1e-17 * a:
            break
    k = pi / (2.0 * a)
    return k, k * (1.0 - c_sq_sum)


def mutual_inductance_coaxial(a1: float, a2: float, d: float) -> float:
    """Maxwell's formula for two coaxial circular filaments ``d`` apart."""
    if not (a1 > 0 and a2 > 0):
        raise ValueError("loop radii must be positive")
    if d < 0:
        raise ValueError(f"separation must be non-negative, got {d}")
    if d == 0 and a1 == a2:
        raise ValueError("coincident filaments: mutual inductance is singular")
    m = 4.0 * a1 * a2 / ((a1 + a2) ** 2 + d**2)
    k = math.sqrt(m)
    big_k, big_e = agm_elliptic(m)
    return mu_0 * math.sqrt(a1 * a2) * ((2.0 / k - k) * big_k - 2.0 / k * big_e)


@dataclass(frozen=True)
class CoupledPair:
    loop1: LoopRlc
    loop2: LoopRlc
    M: float
    distance: Optional[float] = None

    def __post_init__(self):
        if self.M < 0:
            raise ValueError(f"mutual inductance must be non-negative, got {self.M}")
        if self.M >= math.sqrt(self.loop1.L * self.loop2.L):
            raise ValueError("coupling coefficient must be below 1")

    @classmethod
    def coaxial(cls, loop1: LoopRlc, loop2: LoopRlc, a1: float, a2: float, d: float):
        return cls(loop1, loop2, mutual_inductance_coaxial(a1, a2, d), distance=d)

    @property
    def k(self) -> float:
        return self.M / math.sqrt(self.loop1.L * self.loop2.L)

    @property
    def symmetric(self) -> bool:
        a, b = self.loop1, self.loop2
        return all(math.isclose(x, y, rel_tol=1e-12) for x, y in ((a.R, b.R), (a.L, b.L), (a.C, b.C)))

    def swapped(self) -> "CoupledPair":
        return replace(self, loop1=self.loop2, loop2=self.loop1)

    def z_matrix(self, f) -> np.ndarray:
        f = np.atleast_1d(np.asarray(f, dtype=float))
        zm = 1j * 2 * pi * f * self.M
        z = np.empty(f.shape + (2, 2), dtype=complex)
        z[..., 0, 0] = self.loop1.impedance(f)
        z[..., 1, 1] = self.loop2.impedance(f)
        z[..., 0, 1] = zm
        z[..., 1, 0] = zm
        return z


@dataclass(frozen=True)
class Termination:
    z_load: complex
    z_source: Optional[complex] = None

    def __post_init__(self):
        if np.any(np.real(self.z_load) < 0):
            raise ValueError("load must be passive")
        if self.z_source is not None and np.any(np.real(self.z_source) < 0):
            raise ValueError("source impedance must be passive")


def reflection(z_in, z_source):
    """Power-wave reflection coefficient of ``z_in`` driven from ``z_source``."""
    z_in = np.asarray(z_in, dtype=complex)
    z_source = np.asarray(z_source, dtype=complex)
    return (z_in - np.conj(z_source)) / (z_in + z_source)


def input_impedance(pair: CoupledPair, z_load, f):
    f = np.asarray(f, dtype=float)
    wm = 2 * pi * f * pair.M
    return pair.loop1.impedance(f) + wm**2 / (pair.loop2.impedance(f) + z_load)


def _require_symmetric(pair: CoupledPair):
    if not pair.symmetric:
        raise NotImplementedError("optimal terminations are only defined for identical loops")


def optimal_termination(pair: CoupledPair, f):
    """Source/load impedance that maximizes transfer for an identical pair."""
    _require_symmetric(pair)
    f = np.asarray(f, dtype=float)
    loop = pair.loop1
    wm = 2 * pi * f * pair.M
    return -1j * loop.reactance(f) + np.sqrt(loop.R**2 + wm**2)


def efficiency(pair: CoupledPair, term: Termination, f):
    """Return ``(eta_prime, eta)`` at ``f``.

    ``eta`` is load power over power entering loop 1; ``eta_prime`` also
    charges the mismatch at the source. Without a source impedance the input
    is assumed conjugate matched.
    """
    f = np.asarray(f, dtype=float)
    wm2 = (2 * pi * f * pair.M) ** 2
    z_l = np.asarray(term.z_load, dtype=complex)
    r_l = z_l.real
    r1 = pair.loop1.R
    z2 = pair.loop2.impedance(f) + z_l
    eta = r_l * wm2 / (r1 * np.abs(z2) ** 2 + wm2 * z2.real)
    if term.z_source is None:
        return eta, eta
    gam = reflection(input_impedance(pair, z_l, f), term.z_source)
    return eta * (1.0 - np.abs(gam) ** 2), eta


def s_parameters(pair: CoupledPair, f, z_ref: float = 50.0) -> np.ndarray:
    """Two-port S-matrix of the coupled loops in a real reference impedance."""
    z = pair.z_matrix(f)
    eye = np.eye(2)
    return np.linalg.solve((z + z_ref * eye).transpose(0, 2, 1), (z - z_ref * eye).transpose(0, 2, 1)).transpose(0, 2, 1)


@dataclass
class EfficiencyCurve:
    f: np.ndarray
    eta_prime: np.ndarray
    eta: np.ndarray
    z_load: np.ndarray
    peak: float = field(init=False)
    f_peak: float = field(init=False)
    bandwidth: float = field(init=False)

    def __post_init__(self):
        i = int(np.argmax(self.eta_prime))
        self.peak = float(self.eta_prime[i])
        self.f_peak = float(self.f[i])
        self.bandwidth = half_power_bandwidth(self.f, self.eta_prime)


def half_power_bandwidth(f, y) -> float:
    """Width of the region around the peak where ``y`` stays above half of it.

    Edges are linearly interpolated; NaN when the curve never falls to half
    inside the grid or the peak is zero.
    """
    f = np.asarray(f, dtype=float)
    y = np.asarray(y, dtype=float)
    i = int(np.argmax(y))
    level = 0.5 * y[i]
    if level <= 0:
        return math.nan
    lo = i
    while lo > 0 and y[lo - 1] >= level:
        lo -= 1
    hi = i
    while hi < len(y) - 1 and y[hi + 1] >= level:
        hi += 1
    if lo == 0 or hi == len(y) - 1:
        return math.nan

    def cross(j0, j1):
        return f[j0] + (level - y[j0]) * (f[j1] - f[j0]) / (y[j1] - y[j0])

    return float(cross(hi, hi + 1) - cross(lo - 1, lo))


def default_grid(f_center: float, span: float = 0.5, step: float = GRID_STEP) -> np.ndarray:
    n = int(round(2 * span * f_center / step)) + 1
    return np.linspace(f_center * (1 - span), f_center * (1 + span), n)


def matched_efficiency_sweep(
    pair: CoupledPair,
    f_grid,
    feed: Optional[Callable[[float], FeedlineSpec]] = None,
) -> EfficiencyCurve:
    """Efficiency with the optimal termination re-derived at every frequency.

    ``feed`` maps a frequency to the feedline of each (identical) loop. When
    given, the loop's own feed loss term is replaced by the effective
    resistance the lossy feedline presents for the loop's series impedance.
    """
    _require_symmetric(pair)
    f_grid = np.asarray(f_grid, dtype=float)
    loop = pair.loop1
    if feed is None:
        r = np.full_like(f_grid, loop.R)
    else:
        r_core = loop.R - loop.breakdown.r_feed
        r = np.array(
            [r_core + float(reff_exact(feed(fi), r_core + 1j * loop.reactance(fi))) for fi in f_grid]
        )
    x = loop.reactance(f_grid)
    wm = 2 * pi * f_grid * pair.M
    r_opt = np.sqrt(r**2 + wm**2)
    z_l = r_opt - 1j * x
    eta = r_opt * wm**2 / (r * (r + r_opt) ** 2 + wm**2 * (r + r_opt))
    return EfficiencyCurve(f_grid, eta.copy(), eta, z_l)


@dataclass(frozen=True)
class LSection:
    """Lossless two-element match between a resistor ``r_term`` and a port.

    ``shunt_at_term`` places the shunt element across the terminating
    resistor and the series element toward the port; otherwise the order is
    reversed. Reactances/susceptances are given at ``f_design`` and scaled
    as ideal inductors or capacitors away from it.
    """

    r_term: float
    series_x: float
    shunt_b: float
    shunt_at_term: bool
    f_design: float

    def _series(self, f):
        s = np.asarray(f, dtype=float) / self.f_design
        return 1j * self.series_x * (s if self.series_x > 0 else 1.0 / s)

    def _shunt(self, f):
        s = np.asarray(f, dtype=float) / self.f_design
        return 1j * self.shunt_b * (s if self.shunt_b > 0 else 1.0 / s)

    def port_impedance(self, f):
        """Impedance looking into the port with ``r_term`` at the far end."""
        if self.shunt_at_term:
            return self._series(f) + 1.0 / (1.0 / self.r_term + self._shunt(f))
        return 1.0 / (self._shunt(f) + 1.0 / (self.r_term + self._series(f)))


def design_lsection(z_target: complex, r_term: float, f: float) -> LSection:
    """L-section presenting ``z_target`` at its port when terminated by ``r_term``."""
    rt, xt = z_target.real, z_target.imag
    if not rt > 0:
        raise ValueError("cannot match an impedance with non-positive resistance")
    if not r_term > 0:
        raise ValueError("termination resistance must be positive")
    if rt <= r_term:
        g = 1.0 / r_term
        b = math.sqrt(max(g / rt - g * g, 0.0))
        x = xt - (1.0 / complex(g, b)).imag
        return LSection(r_term, x, b, True, f)
    y = 1.0 / z_target
    x = math.sqrt(max(r_term / y.real - r_term**2, 0.0))
    b = y.imag - (1.0 / complex(r_term, x)).imag
    return LSection(r_term, x, b, False, f)


def lmatch_bandwidth(
    pair: CoupledPair,
    f_match: float,
    r_source: float = 50.0,
    f_grid=None,
) -> EfficiencyCurve:
    """Efficiency of the pair between two ``r_source`` ports, each coupled
    through the same lossless L-section designed for a simultaneous
    conjugate match at ``f_match``."""
    _require_symmetric(pair)
    if not f_match > 0:
        raise ValueError("match frequency must be positive")
    z_opt = complex(optimal_termination(pair, f_match))
    z_in = complex(input_impedance(pair, z_opt, f_match))
    if z_in.real <= 0:
        raise ValueError("input impedance has no positive resistance; cannot match")
    net = design_lsection(z_opt, r_source, f_match)
    if f_grid is None:
        f_grid = default_grid(f_match)
    f_grid = np.asarray(f_grid, dtype=float)
    z_port = net.port_impedance(f_grid)
    eta_p, eta = efficiency(pair, Termination(z_port, z_port), f_grid)
    return EfficiencyCurve(f_grid, eta_p, eta, z_port)
