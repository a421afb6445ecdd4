"""
First-order series-RLC model of a shielded-loop resonator.

The loop current supplies the inductance, the open stub past the ground slit
supplies the capacitance, and four loss terms (radiation, exterior conductor,
stub ESR and feedline) add up to the series resistance.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.constants import c as C0, mu_0, pi

from .tline import (
    Coax,
    Conductor,
    CrossSection,
    Dielectric,
    Microstrip,
    Stripline,
    TLineParams,
    rlgc,
)

# starting point of the resonant-frequency fixed point
F_START = 30e6
MAX_ITERATIONS = 50
F_TOLERANCE = 1e-6


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class LoopGeometry:
    """Geometry and materials of one loop.

    ``loop_radius`` is the mean loop radius and ``cross_width`` the width of
    the planar cross section (for coax, the outer conductor radius itself).
    ``slit_angle`` is the angular distance from the input to the ground slit;
    the feedline covers that arc and the open stub covers the rest.
    ``cross_thickness`` is the overall height of the planar slice and only
    enters the exterior-surface perimeter.
    """

    loop_radius: float
    cross_width: float
    cross_section: CrossSection
    dielectric: Dielectric
    conductor: Conductor
    slit_angle: float = pi
    cross_thickness: Optional[float] = None

    def __post_init__(self):
        if not self.loop_radius > 0:
            raise ValueError(f"loop radius must be positive, got {self.loop_radius}")
        if not self.cross_width > 0:
            raise ValueError(f"cross width must be positive, got {self.cross_width}")
        if not 0 < self.slit_angle < 2 * pi:
            raise ValueError(f"slit angle must lie in (0, 2*pi), got {self.slit_angle}")
        if self.cross_width > self.loop_radius / 2:
            warnings.warn("cross section is not thin compared with the loop radius", stacklevel=2)

    @property
    def is_coax(self) -> bool:
        return isinstance(self.cross_section, Coax)

    @property
    def stub_length(self) -> float:
        return (2 * pi - self.slit_angle) * self.loop_radius

    @property
    def feed_length(self) -> float:
        return self.slit_angle * self.loop_radius

    @property
    def slice_thickness(self) -> float:
        if self.cross_thickness is not None:
            return self.cross_thickness
        cs = self.cross_section
        if isinstance(cs, Stripline):
            return cs.h + 2 * self.conductor.thickness
        if isinstance(cs, Microstrip):
            return cs.d + 2 * self.conductor.thickness
        return 2 * self.cross_width


@dataclass(frozen=True)
class LossBreakdown:
    r_rad: float
    r_c: float
    r_esr: float
    r_feed: float

    @property
    def total(self) -> float:
        return self.r_rad + self.r_c + self.r_esr + self.r_feed


@dataclass(frozen=True)
class LoopRlc:
    R: float
    L: float
    C: float
    breakdown: LossBreakdown
    stub_length: float
    feed_length: float
    tline: Optional[TLineParams] = None

    @property
    def f0(self) -> float:
        return resonant_frequency(self.L, self.C)

    def q(self, f: Optional[float] = None) -> float:
        f = self.f0 if f is None else f
        return 2 * pi * f * self.L / self.R

    @property
    def Q(self) -> float:
        return self.q()

    def reactance(self, f):
        w = 2 * pi * np.asarray(f, dtype=float)
        return w * self.L - 1.0 / (w * self.C)

    def impedance(self, f):
        return self.R + 1j * self.reactance(f)

    @classmethod
    def from_rlc(cls, R: float, L: float, C: float) -> "LoopRlc":
        """Plain series RLC with all loss lumped into ``R``."""
        if not (R > 0 and L > 0 and C > 0):
            raise ValueError("R, L and C must all be positive")
        return cls(R, L, C, LossBreakdown(0.0, R, 0.0, 0.0), 0.0, 0.0)


def equivalent_rod_radius(b: float) -> float:
    """Radius of the round wire that replaces a strip of width ``b``."""
    if not b > 0:
        raise ValueError(f"strip width must be positive, got {b}")
    return b / 4.0


def loop_inductance(a: float, b0: float, mu: float = mu_0) -> float:
    """Inductance of a circular loop of mean radius ``a`` and wire radius ``b0``."""
    if not (a > 0 and b0 > 0):
        raise ValueError("loop and wire radii must be positive")
    shape = math.log(8 * a / b0) - 1.75
    if shape <= 0:
        raise ValueError(f"ring too fat for the thin-loop formula (8a/b0 = {8 * a / b0:.3g})")
    return mu * a * shape


def stub_capacitance(c_per_m: float, stub_length: float, beta: Optional[float] = None) -> float:
    """Lumped capacitance of an electrically short open stub."""
    if stub_length < 0:
        raise ValueError(f"stub length must be non-negative, got {stub_length}")
    if stub_length == 0:
        warnings.warn("zero-length stub has no capacitance", stacklevel=2)
        return 0.0
    if beta is not None and beta * stub_length > pi / 6:
        warnings.warn(
            f"stub is electrically long (beta*l = {beta * stub_length:.3f} rad); "
            "the lumped capacitor approximation degrades",
            stacklevel=2,
        )
    return c_per_m * stub_length


def open_stub_capacitance(tl: TLineParams, stub_length: float) -> float:
    """Capacitance that reproduces the exact open-stub reactance at ``tl.f``.

    Only meaningful below the first quarter-wave resonance of the stub.
    """
    w = 2 * pi * tl.f
    x = -tl.z0 / math.tan(tl.beta * stub_length)
    return -1.0 / (w * x)


def resonant_frequency(L: float, C: float) -> float:
    if not (L > 0 and C > 0):
        raise ValueError("L and C must be positive")
    return 1.0 / (2 * pi * math.sqrt(L * C))


def radiation_resistance(a: float, f: float) -> float:
    if f == 0:
        return 0.0
    lam = C0 / f
    if 2 * pi * a >= lam:
        warnings.warn("loop is not electrically small; radiation formula invalid", stacklevel=2)
    return 31170.0 * (pi * a**2 / lam**2) ** 2


def conductor_resistance(
    a: float, perimeter: float, f: float, c: Conductor, textbook: bool = False
) -> float:
    """Exterior loop-current loss of a ring of radius ``a``.

    ``perimeter`` is the outer perimeter of one cross-sectional slice. By
    default the expression ``(a / P) * sqrt(f mu pi / (pi sigma))`` is used as
    written; ``textbook=True`` switches to ``(2 pi a / P) * Rs`` (ring length
    over perimeter times sheet resistance).
    """
    if not perimeter > 0:
        raise ValueError(f"perimeter must be positive, got {perimeter}")
    if not f > 0:
        raise ValueError(f"frequency must be positive, got {f}")
    if textbook:
        return 2 * pi * a / perimeter * math.sqrt(pi * f * c.mu / c.sigma)
    return a / perimeter * math.sqrt(f * c.mu * pi / (pi * c.sigma))


def stub_esr(tl: TLineParams, stub_length: float, exact: bool = True) -> float:
    """Equivalent series resistance of the open stub.

    ``exact`` uses ``Re[Z0 coth(gamma l)]``; otherwise (or for a lossless
    line) the electrically-small form ``Re[1 / (l (G' + j w C'))]``.
    """
    if not stub_length > 0:
        raise ValueError(f"stub length must be positive, got {stub_length}")
    if exact and tl.gamma.real > 0:
        return float((tl.z0_complex / np.tanh(tl.gamma * stub_length)).real)
    w = 2 * pi * tl.f
    return float((1.0 / (stub_length * complex(tl.g, w * tl.c))).real)


def feed_resistance(r_per_m: float, feed_length: float) -> float:
    if feed_length < 0:
        raise ValueError(f"feed length must be non-negative, got {feed_length}")
    return r_per_m * feed_length


def exterior_perimeter(g: LoopGeometry) -> float:
    if g.is_coax:
        return 2 * pi * g.cross_width
    return 2 * (g.cross_width + g.slice_thickness)


def loss_breakdown(
    g: LoopGeometry, f: float, tl: Optional[TLineParams] = None, textbook_rc: bool = False
) -> LossBreakdown:
    if tl is None:
        tl = rlgc(g.cross_section, g.dielectric, g.conductor, f)
    return LossBreakdown(
        r_rad=radiation_resistance(g.loop_radius, f),
        r_c=conductor_resistance(
            g.loop_radius, exterior_perimeter(g), f, g.conductor, textbook=textbook_rc
        ),
        r_esr=stub_esr(tl, g.stub_length),
        r_feed=feed_resistance(tl.r, g.feed_length),
    )


def build_resonator(
    g: LoopGeometry,
    f_eval: Optional[float] = None,
    exact_stub: bool = False,
    textbook_rc: bool = False,
) -> LoopRlc:
    """Synthesize the series RLC of a loop from its geometry.

    The resonant frequency is found self-consistently because the line
    parameters are evaluated at the operating frequency. Losses are taken
    at ``f_eval`` when given, otherwise at the resonant frequency.
    ``exact_stub`` replaces the lumped ``C' l`` with the capacitance that
    matches the open-stub reactance at resonance.
    """
    b0 = g.cross_width if g.is_coax else equivalent_rod_radius(g.cross_width)
    ind = loop_inductance(g.loop_radius, b0)

    f = F_START
    for _ in range(MAX_ITERATIONS):
        tl = rlgc(g.cross_section, g.dielectric, g.conductor, f)
        if exact_stub:
            cap = open_stub_capacitance(tl, g.stub_length)
        else:
            cap = tl.c * g.stub_length
        f_new = resonant_frequency(ind, cap)
        done = abs(f_new - f) / f_new < F_TOLERANCE
        f = f_new
        if done:
            break
    else:
        raise ConvergenceError(f"resonant frequency did not converge in {MAX_ITERATIONS} steps")

    if not exact_stub:
        # validity check at the converged frequency only
        stub_capacitance(tl.c, g.stub_length, tl.beta)

    f_loss = f if f_eval is None else f_eval
    tl = rlgc(g.cross_section, g.dielectric, g.conductor, f_loss)
    losses = loss_breakdown(g, f_loss, tl, textbook_rc=textbook_rc)
    return LoopRlc(
        R=losses.total,
        L=ind,
        C=cap,
        breakdown=losses,
        stub_length=g.stub_length,
        feed_length=g.feed_length,
        tline=tl,
    )
