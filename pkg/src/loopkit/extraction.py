"""
Series-RLC extraction from one-port reflection data.

The feedline in front of the slit is removed as a pure phase rotation in a
reference impedance equal to the feed's characteristic impedance, then the
resonance is located at the upward zero crossing of the reactance.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import pi

from .touchstone import TouchstoneData

FIT_SPREAD = 0.02


class ExtractionError(ValueError):
    pass


class ResonanceNotFound(ExtractionError):
    pass


@dataclass(frozen=True)
class DeembedSpec:
    """Lossless feed of impedance ``z0`` and electrical length ``theta_deg`` at ``f_ref``."""

    z0: float
    theta_deg: float
    f_ref: float

    def __post_init__(self):
        if not self.z0 > 0:
            raise ValueError("feed impedance must be positive")
        if self.theta_deg < 0:
            raise ValueError("electrical length must be non-negative")
        if not self.f_ref > 0:
            raise ValueError("reference frequency must be positive")

    def phase(self, f):
        """Round-trip phase advance (rad) removed at frequency ``f``."""
        return 2 * pi * (self.theta_deg / 180.0) * (np.asarray(f, dtype=float) / self.f_ref)


@dataclass
class ExtractedRlc:
    R: float
    L: float
    C: float
    f0: float
    Q: float
    fit_frequencies: tuple = ()
    residual: float = 0.0
    other_crossings: list = field(default_factory=list)


def s_from_z(z, z0):
    z = np.asarray(z, dtype=complex)
    return (z - z0) / (z + z0)


def z_from_s(s, z0):
    s = np.asarray(s, dtype=complex)
    if np.any(s == 1):
        raise ZeroDivisionError("S11 = 1 is an open circuit; impedance is unbounded")
    return z0 * (1 + s) / (1 - s)


def deembed(s11, f, spec: DeembedSpec):
    """Shift the reference plane of ``s11`` (referenced to ``spec.z0``) past the feed."""
    return np.asarray(s11, dtype=complex) * np.exp(1j * spec.phase(f))


def deembed_impedance(z, f, spec: DeembedSpec):
    return z_from_s(deembed(s_from_z(z, spec.z0), f, spec), spec.z0)


def _crossings(f, x):
    """Linearly interpolated zero crossings of ``x`` as (frequency, direction)."""
    out = []
    for i in range(len(x) - 1):
        x0, x1 = x[i], x[i + 1]
        if x0 == 0:
            continue
        if x1 == 0 or (x0 < 0) != (x1 < 0):
            fc = f[i] + (0 - x0) * (f[i + 1] - f[i]) / (x1 - x0)
            out.append((float(fc), "up" if x1 > x0 else "down"))
    return out


def find_resonance(f, z) -> tuple[float, list]:
    """Series resonance: first upward zero crossing of Im{z}.

    Returns ``(f0, others)`` where ``others`` lists the remaining crossings.
    """
    f = np.asarray(f, dtype=float)
    crossings = _crossings(f, np.asarray(z).imag)
    if not crossings:
        raise ResonanceNotFound("reactance does not change sign in band")
    ups = [c for c in crossings if c[1] == "up"]
    if not ups:
        raise ResonanceNotFound(
            "only downward reactance crossings found (parallel-type resonance at "
            + ", ".join(f"{c[0]:.6g} Hz" for c in crossings)
            + ")"
        )
    f0 = ups[0][0]
    return f0, [c for c in crossings if c[0] != f0]


def fit_lc(f, z, f0: float, spread: float = FIT_SPREAD):
    """Solve ``X = w L - 1/(w C)`` at the samples nearest ``f0 (1 -/+ spread)``.

    Returns ``(L, C, (f1, f2))``.
    """
    f = np.asarray(f, dtype=float)
    x = np.asarray(z).imag
    i1 = int(np.argmin(np.abs(f - f0 * (1 - spread))))
    i2 = int(np.argmin(np.abs(f - f0 * (1 + spread))))
    if i1 == i2:
        raise ExtractionError("fit frequencies coincide; need two distinct samples near f0")
    w = 2 * pi * f[[i1, i2]]
    a = np.column_stack([w, -1.0 / w])
    ind, inv_cap = np.linalg.solve(a, x[[i1, i2]])
    if not (ind > 0 and inv_cap > 0):
        raise ExtractionError("fitted L or C is negative: non-series-RLC behavior")
    return float(ind), float(1.0 / inv_cap), (float(f[i1]), float(f[i2]))


def extract_from_impedance(f, z, spread: float = FIT_SPREAD) -> ExtractedRlc:
    """Extract the RLC model from an impedance sweep already at the slit plane."""
    f = np.asarray(f, dtype=float)
    z = np.asarray(z, dtype=complex)
    f0, others = find_resonance(f, z)
    r = float(np.interp(f0, f, z.real))
    if not r > 0:
        raise ExtractionError(f"resistance at resonance is not positive ({r:.4g} ohm)")
    ind, cap, pts = fit_lc(f, z, f0, spread)
    f_lc = 1.0 / (2 * pi * np.sqrt(ind * cap))
    return ExtractedRlc(
        R=r,
        L=ind,
        C=cap,
        f0=f0,
        Q=2 * pi * f0 * ind / r,
        fit_frequencies=pts,
        residual=abs(f_lc - f0) / f0,
        other_crossings=others,
    )


def extract_rlc(
    data: TouchstoneData, spec: DeembedSpec, port: int = 0, spread: float = FIT_SPREAD
) -> ExtractedRlc:
    """De-embed one port of ``data`` to the slit and extract R, L, C, f0, Q."""
    if not 0 <= port < data.n_ports:
        raise ExtractionError(f"port {port + 1} not present in {data.n_ports}-port data")
    z = z_from_s(data.s[:, port, port], data.z_ref)
    return extract_from_impedance(data.f, deembed_impedance(z, data.f, spec), spread)
