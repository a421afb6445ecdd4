"""
Quasi-TEM transmission-line models for coax, centered stripline and microstrip.

Characteristic impedance comes from closed-form formulas (Wheeler for
stripline, Hammerstad-Jensen for microstrip, the exact log form for coax).
Conductor attenuation uses the incremental inductance rule with a numerical
derivative, so every cross section shares one loss routine. Everything is SI.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.constants import c as C0, epsilon_0, mu_0, pi

ETA0 = math.sqrt(mu_0 / epsilon_0)

# relative step of the central difference used for dZ0/dl
RECEDE_STEP = 1e-4


@dataclass(frozen=True)
class Conductor:
    """Metal with conductivity ``sigma`` (S/m) and thickness ``thickness`` (m)."""

    sigma: float = 5.8e7
    thickness: float = 35e-6
    mu: float = mu_0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"conductivity must be positive, got {self.sigma}")
        if not self.thickness > 0:
            raise ValueError(f"conductor thickness must be positive, got {self.thickness}")
        if not self.mu > 0:
            raise ValueError(f"permeability must be positive, got {self.mu}")


@dataclass(frozen=True)
class Dielectric:
    eps_r: float = 1.0
    tan_d: float = 0.0

    def __post_init__(self):
        if not self.eps_r >= 1:
            raise ValueError(f"relative permittivity must be >= 1, got {self.eps_r}")
        if not self.tan_d >= 0:
            raise ValueError(f"loss tangent must be >= 0, got {self.tan_d}")


def _check_positive(**dims):
    for name, value in dims.items():
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class Coax:
    inner_radius: float
    outer_radius: float

    def __post_init__(self):
        _check_positive(inner_radius=self.inner_radius, outer_radius=self.outer_radius)
        if not self.outer_radius > self.inner_radius:
            raise ValueError("coax outer radius must exceed inner radius")

    def recede(self, dl: float) -> "Coax":
        return Coax(self.inner_radius - dl, self.outer_radius + dl)

    @property
    def smallest_dimension(self) -> float:
        return self.inner_radius


@dataclass(frozen=True)
class Stripline:
    """Centered strip of width ``width`` and thickness ``t`` between ground
    planes spaced ``h`` apart (face to face)."""

    width: float
    h: float
    t: float

    def __post_init__(self):
        _check_positive(width=self.width, h=self.h, t=self.t)
        if self.t >= self.h:
            raise ValueError(
                f"strip thickness {self.t} must be smaller than ground spacing {self.h}"
            )

    def recede(self, dl: float) -> "Stripline":
        return Stripline(self.width - 2 * dl, self.h + 2 * dl, self.t - 2 * dl)

    @property
    def smallest_dimension(self) -> float:
        return min(self.width, self.h, self.t)


@dataclass(frozen=True)
class Microstrip:
    """Strip of width ``width`` and thickness ``t`` on a substrate of height ``d``."""

    width: float
    d: float
    t: float

    def __post_init__(self):
        _check_positive(width=self.width, d=self.d, t=self.t)

    def recede(self, dl: float) -> "Microstrip":
        return Microstrip(self.width - 2 * dl, self.d + 2 * dl, self.t - 2 * dl)

    @property
    def smallest_dimension(self) -> float:
        return min(self.width, self.d, self.t)


CrossSection = Union[Coax, Stripline, Microstrip]


@dataclass(frozen=True)
class TLineParams:
    """Per-unit-length description of a line at one frequency."""

    f: float
    z0: float
    z0_complex: complex
    eps_eff: float
    r: float
    l: float
    g: float
    c: float
    alpha_c: float
    alpha_d: float
    gamma: complex

    @property
    def beta(self) -> float:
        return self.gamma.imag

    @property
    def alpha(self) -> float:
        return self.gamma.real


def coax_z0(cs: Coax, d: Dielectric) -> tuple[float, float]:
    z0 = ETA0 / (2 * pi * math.sqrt(d.eps_r)) * math.log(cs.outer_radius / cs.inner_radius)
    return z0, d.eps_r


def stripline_z0(cs: Stripline, d: Dielectric) -> tuple[float, float]:
    """Wheeler's centered-stripline impedance including strip thickness.

    Returns ``(z0, eps_eff)``; the field is fully embedded so ``eps_eff``
    equals the dielectric's relative permittivity.
    """
    w, b, t = cs.width, cs.h, cs.t
    x = t / b
    m = 2.0 / (1.0 + 2.0 * x / (3.0 * (1.0 - x)))
    dw = (t / pi) * (
        1.0 - 0.5 * math.log((x / (2.0 - x)) ** 2 + (0.0796 * x / (w / b + 1.1 * x)) ** m)
    )
    w_eff = w + dw
    # (b - t) / W' scaled as in Wheeler's formula
    a = 4.0 * (b - t) / (pi * w_eff)
    z0 = 30.0 / math.sqrt(d.eps_r) * math.log(
        1.0 + a * (2.0 * a + math.sqrt((2.0 * a) ** 2 + 6.27))
    )
    return z0, d.eps_r


def _hj_z_air(u: float) -> float:
    fu = 6.0 + (2.0 * pi - 6.0) * math.exp(-((30.666 / u) ** 0.7528))
    return ETA0 / (2.0 * pi) * math.log(fu / u + math.sqrt(1.0 + (2.0 / u) ** 2))


def _hj_eps(u: float, eps_r: float) -> float:
    a = (
        1.0
        + math.log((u**4 + (u / 52.0) ** 2) / (u**4 + 0.432)) / 49.0
        + math.log(1.0 + (u / 18.1) ** 3) / 18.7
    )
    b = 0.564 * ((eps_r - 0.9) / (eps_r + 3.0)) ** 0.053
    return (eps_r + 1.0) / 2.0 + (eps_r - 1.0) / 2.0 * (1.0 + 10.0 / u) ** (-a * b)


def microstrip_z0(cs: Microstrip, d: Dielectric) -> tuple[float, float]:
    """Hammerstad-Jensen quasi-static microstrip with thickness correction.

    Returns ``(z0, eps_eff)``.
    """
    u = cs.width / cs.d
    tn = cs.t / cs.d
    du1 = tn / pi * math.log(1.0 + 4.0 * math.e / tn * math.tanh(math.sqrt(6.517 * u)) ** 2)
    dur = 0.5 * du1 * (1.0 + 1.0 / math.cosh(math.sqrt(d.eps_r - 1.0)))
    u1, ur = u + du1, u + dur
    zr = _hj_z_air(ur)
    z1 = _hj_z_air(u1)
    e = _hj_eps(ur, d.eps_r)
    z0 = zr / math.sqrt(e)
    eps_eff = e * (z1 / zr) ** 2
    return z0, eps_eff


def line_z0(cs: CrossSection, d: Dielectric) -> tuple[float, float]:
    """Dispatch to the impedance formula for the cross-section variant."""
    if isinstance(cs, Stripline):
        return stripline_z0(cs, d)
    if isinstance(cs, Microstrip):
        return microstrip_z0(cs, d)
    if isinstance(cs, Coax):
        return coax_z0(cs, d)
    raise TypeError(f"unsupported cross section {type(cs).__name__}")


def sheet_resistance(f: float, c: Conductor) -> float:
    if not f > 0:
        raise ValueError(f"frequency must be positive, got {f}")
    return math.sqrt(f * c.mu * pi / c.sigma)


def dz0_dl(cs: CrossSection, d: Dielectric) -> float:
    """Derivative of Z0 with respect to an inward recession of every wall."""
    step = RECEDE_STEP * cs.smallest_dimension
    z_plus, _ = line_z0(cs.recede(step), d)
    z_minus, _ = line_z0(cs.recede(-step), d)
    return (z_plus - z_minus) / (2.0 * step)


def conductor_attenuation(cs: CrossSection, d: Dielectric, c: Conductor, f: float) -> float:
    """Conductor loss in Np/m from Wheeler's incremental inductance rule."""
    rs = sheet_resistance(f, c)
    z0, eps_eff = line_z0(cs, d)
    eta = ETA0 / math.sqrt(eps_eff)
    return rs / (2.0 * z0 * eta) * dz0_dl(cs, d)


def dielectric_attenuation(f: float, eps_eff: float, tan_d: float) -> float:
    if not f > 0:
        raise ValueError(f"frequency must be positive, got {f}")
    k = 2.0 * pi * f * math.sqrt(eps_eff) / C0
    return k * tan_d / 2.0


def rlgc(cs: CrossSection, d: Dielectric, c: Conductor, f: float) -> TLineParams:
    """Per-unit-length R', L', G', C' and the propagation constant at ``f``."""
    if not f > 0:
        raise ValueError(f"frequency must be positive, got {f}")
    z0, eps_eff = line_z0(cs, d)
    a_c = conductor_attenuation(cs, d, c, f)
    a_d = dielectric_attenuation(f, eps_eff, d.tan_d)
    r = 2.0 * a_c * z0
    g = 2.0 * a_d / z0
    vp = C0 / math.sqrt(eps_eff)
    cap = 1.0 / (vp * z0)
    ind = z0**2 * cap
    w = 2.0 * pi * f
    series = complex(r, w * ind)
    shunt = complex(g, w * cap)
    gamma = np.sqrt(series * shunt)
    if gamma.real < 0:
        gamma = -gamma
    z0c = np.sqrt(series / shunt)
    return TLineParams(
        f=f,
        z0=z0,
        z0_complex=complex(z0c),
        eps_eff=eps_eff,
        r=r,
        l=ind,
        g=g,
        c=cap,
        alpha_c=a_c,
        alpha_d=a_d,
        gamma=complex(gamma),
    )
