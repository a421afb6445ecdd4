"""
Effective series resistance contributed by a lossy feedline.

A lossy line of length ``l`` in front of a load ``Z_IN`` is replaced by a
lossless line plus a series resistance ``R_EFF`` that dissipates the same
power for the same load current.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

# largest attenuation (nepers) we evaluate before cosh/sinh lose all precision
MAX_NEPERS = 50.0

Z0_IMAG_GUARD = 0.05
PQ_GUARD = 0.2
R_IN_GUARD = 0.05


@dataclass(frozen=True)
class FeedlineSpec:
    gamma: complex
    z0: complex
    length: float

    def __post_init__(self):
        if self.gamma.real < 0:
            raise ValueError("attenuation constant must be non-negative")
        if not self.z0.real > 0:
            raise ValueError("characteristic impedance must have a positive real part")
        if not self.length > 0:
            raise ValueError(f"feedline length must be positive, got {self.length}")
        if self.gamma.real * self.length > MAX_NEPERS:
            raise ValueError(
                f"feedline attenuation {self.gamma.real * self.length:.1f} Np exceeds {MAX_NEPERS} Np"
            )

    @property
    def gl(self) -> complex:
        return self.gamma * self.length

    @classmethod
    def from_tline(cls, tl, length: float) -> "FeedlineSpec":
        return cls(gamma=tl.gamma, z0=tl.z0_complex, length=length)


@dataclass(frozen=True)
class TanhDecomposition:
    p: float
    q: float

    @classmethod
    def of(cls, feed: FeedlineSpec) -> "TanhDecomposition":
        t = np.tanh(feed.gl)
        return cls(float(t.real), float(t.imag))

    @property
    def magnitude_sq(self) -> float:
        return self.p**2 + self.q**2


def input_impedance(feed: FeedlineSpec, z_load):
    """Impedance seen at the generator end of the line."""
    t = np.tanh(feed.gl)
    z0 = feed.z0
    z_load = np.asarray(z_load, dtype=complex)
    return z0 * (z_load + z0 * t) / (z0 + z_load * t)


def current_ratio(feed: FeedlineSpec, z_load):
    """I1/I2 from the two-port Z-matrix of the line."""
    z_load = np.asarray(z_load, dtype=complex)
    return z_load / feed.z0 * np.sinh(feed.gl) + np.cosh(feed.gl)


def reff_exact(feed: FeedlineSpec, z_load):
    """R_EFF = |I1/I2|^2 Re{V1/I1} - R_IN; vectorized over ``z_load``."""
    z_load = np.asarray(z_load, dtype=complex)
    ratio = current_ratio(feed, z_load)
    return np.abs(ratio) ** 2 * input_impedance(feed, z_load).real - z_load.real


def g_function(feed: FeedlineSpec, z_load):
    """Numerator of Re{V1/I1} written out in the real/imaginary parts."""
    z_load = np.asarray(z_load, dtype=complex)
    r_in, x_in = z_load.real, z_load.imag
    pq = TanhDecomposition.of(feed)
    p, q, t2 = pq.p, pq.q, pq.magnitude_sq
    z0r, z0i = feed.z0.real, feed.z0.imag
    z0_sq = abs(feed.z0) ** 2
    zin_sq = r_in**2 + x_in**2
    return (
        r_in * z0_sq
        + t2 * r_in * (z0r**2 - z0i**2)
        + z0r * p * (zin_sq + z0_sq)
        + 2 * z0r * z0i * x_in * t2
        - z0i * q * (z0_sq - r_in**2 - x_in**2)
    )


def _check_simplification(feed: FeedlineSpec, r_in: float):
    pq = TanhDecomposition.of(feed)
    z0 = feed.z0
    if abs(z0.imag) > Z0_IMAG_GUARD * z0.real:
        warnings.warn("Z0 is not nearly real; simplified R_EFF may be inaccurate", stacklevel=3)
    if pq.p > PQ_GUARD * abs(pq.q):
        warnings.warn("Re{tanh(gamma l)} is not small against Im; simplified R_EFF may be inaccurate", stacklevel=3)
    if r_in > R_IN_GUARD * abs(z0):
        warnings.warn("load resistance is not small; simplified R_EFF may be inaccurate", stacklevel=3)


def reff_simplified(feed: FeedlineSpec, x_in, r_in: float = 0.0):
    """R_EFF = g(Z_IN) |cosh(gamma l)|^2 / |Z0|^2 for a (nearly) reactive load."""
    _check_simplification(feed, r_in)
    z_load = r_in + 1j * np.asarray(x_in, dtype=float)
    return g_function(feed, z_load) * abs(np.cosh(feed.gl)) ** 2 / abs(feed.z0) ** 2


def x_in_min(feed: FeedlineSpec, magnitude_scaled: bool = False) -> float:
    """Load reactance minimizing the simplified R_EFF.

    The stationary point of ``g`` has ``Z0'`` in the denominator. With
    ``magnitude_scaled=True`` the ``|Z0|`` variant is returned instead; the two agree
    to first order in ``Z0''/Z0'`` but the denominator nearly cancels for
    low-loss lines, which magnifies the difference.
    """
    pq = TanhDecomposition.of(feed)
    z0 = feed.z0
    scale = abs(z0) if magnitude_scaled else z0.real
    den = pq.p + z0.imag / scale * pq.q
    if den == 0:
        if z0.imag == 0:
            return 0.0
        raise ZeroDivisionError("R_EFF has no finite minimum for this line")
    return -z0.imag * pq.magnitude_sq / den


def reff_curve(feed: FeedlineSpec, x_grid) -> np.ndarray:
    """Rows of (X_IN, R_EFF exact, R_EFF simplified) for a lossless reactive load."""
    x = np.atleast_1d(np.asarray(x_grid, dtype=float))
    if x.size == 0:
        raise ValueError("empty reactance grid")
    exact = reff_exact(feed, 1j * x)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        simple = reff_simplified(feed, x)
    return np.column_stack([x, exact, simple])
