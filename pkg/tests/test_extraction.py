import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.constants import pi

from loopkit import presets
from loopkit.extraction import (
    DeembedSpec,
    ExtractionError,
    ResonanceNotFound,
    deembed,
    deembed_impedance,
    extract_from_impedance,
    extract_rlc,
    find_resonance,
    fit_lc,
    s_from_z,
    z_from_s,
)
from loopkit.touchstone import TouchstoneData, format_touchstone, parse_touchstone
from loopkit.tline import Dielectric, rlgc
from loopkit.validation import embed_series_rlc, synthetic_touchstone


def series_rlc(f, R, L, C):
    w = 2 * pi * np.asarray(f)
    return R + 1j * (w * L - 1 / (w * C))


def through_line_abcd(z_load, f, z0, beta_per_hz, length):
    """Input impedance through a lossless line, via its transmission matrix."""
    bl = beta_per_hz * f * length
    a, b = np.cos(bl), 1j * z0 * np.sin(bl)
    c, d = 1j * np.sin(bl) / z0, np.cos(bl)
    return (a * z_load + b) / (c * z_load + d)


class TestConversions:
    @given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(1, 200))
    def test_round_trip(self, r, x, z0):
        z = complex(r, x)
        if abs(z + z0) < 1e-6:
            return
        assert complex(z_from_s(s_from_z(z, z0), z0)) == pytest.approx(z, rel=1e-12, abs=1e-9)

    def test_short_and_open(self):
        assert complex(z_from_s(-1, 50)) == 0
        with pytest.raises(ZeroDivisionError):
            z_from_s(1.0, 50)


class TestDeembed:
    def test_phase_value(self):
        assert float(DeembedSpec(50, 17.8, 30e6).phase(30e6)) == pytest.approx(0.62134, rel=1e-4)

    def test_preserves_magnitude(self):
        spec = DeembedSpec(50, 25.0, 30e6)
        s = np.array([0.3 + 0.4j, -0.9j])
        np.testing.assert_allclose(abs(deembed(s, [20e6, 40e6], spec)), abs(s), rtol=1e-15)

    def test_zero_length_is_identity(self):
        z = np.array([1 + 2j, 30 - 4j])
        np.testing.assert_allclose(deembed_impedance(z, [1e6, 2e6], DeembedSpec(50, 0.0, 30e6)), z, rtol=1e-14)

    @given(st.floats(0, 80), st.floats(10e6, 60e6), st.floats(0.01, 5), st.floats(-100, 100))
    def test_undoes_a_lossless_line(self, theta, f, r, x):
        spec = DeembedSpec(50, theta, 30e6)
        z = complex(r, x)
        seen = embed_series_rlc(f, r, 0.0, math.inf, 50, theta, 30e6) if x == 0 else None
        line = through_line_abcd(z, f, 50.0, math.radians(theta) / 30e6, 1.0)
        back = complex(deembed_impedance(line, f, spec))
        assert back == pytest.approx(z, rel=1e-7, abs=1e-7)
        if seen is not None:
            assert complex(seen) == pytest.approx(line, rel=1e-9)

    def test_validation(self):
        for args in ((0, 10, 30e6), (50, -1, 30e6), (50, 10, 0)):
            with pytest.raises(ValueError):
                DeembedSpec(*args)


class TestResonance:
    def test_series_rlc_at_fine_steps(self):
        f = np.arange(30e6, 50e6, 100e3)
        f0_true = 1 / (2 * pi * math.sqrt(0.35e-6 * 70e-12))
        f0, others = find_resonance(f, series_rlc(f, 0.2, 0.35e-6, 70e-12))
        assert abs(f0 - f0_true) < 1e3
        assert others == []

    def test_no_crossing(self):
        f = np.linspace(1e6, 2e6, 11)
        with pytest.raises(ResonanceNotFound, match="does not change sign"):
            find_resonance(f, 1 + 5j * np.ones_like(f))

    def test_parallel_resonance_flagged(self):
        f = np.linspace(30e6, 50e6, 201)
        w = 2 * pi * f
        y = 1 / 1000 + 1j * (w * 70e-12 - 1 / (w * 0.35e-6))
        with pytest.raises(ResonanceNotFound, match="parallel"):
            find_resonance(f, 1 / y)

    def test_extra_crossings_reported(self):
        f = np.linspace(30e6, 50e6, 401)
        x = (f - 35e6) * (f - 40e6) * (f - 45e6) * 1e-18
        f0, others = find_resonance(f, 0.2 + 1j * x)
        assert f0 == pytest.approx(35e6, rel=1e-6)
        assert [round(c[0] / 1e6, 3) for c in others] == [40.0, 45.0]
        assert [c[1] for c in others] == ["down", "up"]

    def test_fit_exact_for_ideal_data(self):
        f = np.linspace(30e6, 50e6, 2001)
        L, C = 0.35e-6, 70e-12
        ind, cap, pts = fit_lc(f, series_rlc(f, 0.2, L, C), 1 / (2 * pi * math.sqrt(L * C)))
        assert ind == pytest.approx(L, rel=1e-12)
        assert cap == pytest.approx(C, rel=1e-12)
        assert pts[0] < pts[1]

    def test_fit_coincident_points(self):
        f = np.array([40e6, 80e6])
        with pytest.raises(ExtractionError, match="coincide"):
            fit_lc(f, series_rlc(f, 0.2, 0.35e-6, 70e-12), 40e6)

    def test_fit_rejects_negative_elements(self):
        f = np.linspace(30e6, 50e6, 201)
        with pytest.raises(ExtractionError, match="negative"):
            fit_lc(f, 1j * (-(f - 40e6) * 1e-6), 40e6)

    def test_nonpositive_resistance(self):
        f = np.linspace(30e6, 50e6, 201)
        with pytest.raises(ExtractionError, match="resistance"):
            extract_from_impedance(f, series_rlc(f, -0.1, 0.35e-6, 70e-12))


class TestRoundTrip:
    @settings(max_examples=100)
    @given(st.floats(0.05, 1.0), st.floats(0.1e-6, 1e-6), st.floats(10e-12, 200e-12),
           st.floats(20, 100), st.floats(0, 60))
    def test_synthesize_then_extract(self, R, L, C, z0, theta):
        spec = DeembedSpec(z0, theta, 30e6)
        out = extract_rlc(synthetic_touchstone(R, L, C, spec), spec)
        assert out.R == pytest.approx(R, rel=1e-3)
        assert out.L == pytest.approx(L, rel=1e-3)
        assert out.C == pytest.approx(C, rel=1e-3)
        assert out.f0 == pytest.approx(1 / (2 * pi * math.sqrt(L * C)), rel=1e-3)
        assert out.Q == pytest.approx(2 * pi * out.f0 * L / R, rel=2e-3)
        assert out.residual < 1e-3

    def test_format_invariance(self):
        spec = DeembedSpec(50, 17.8, 30e6)
        data = synthetic_touchstone(0.2, 0.364e-6, 45.3e-12, spec)
        results = [extract_rlc(parse_touchstone(format_touchstone(data, fmt=fmt)), spec) for fmt in ("RI", "MA", "DB")]
        for other in results[1:]:
            for key in ("R", "L", "C", "f0", "Q"):
                assert getattr(other, key) == pytest.approx(getattr(results[0], key), rel=1e-9)

    def test_port_selection(self):
        spec = DeembedSpec(50, 10.0, 30e6)
        one = synthetic_touchstone(0.3, 0.4e-6, 60e-12, spec)
        s = np.zeros((len(one.f), 2, 2), dtype=complex)
        s[:, 1, 1] = one.s[:, 0, 0]
        two = TouchstoneData(one.f, s, 50.0)
        out = extract_rlc(two, spec, port=1)
        assert out.L == pytest.approx(0.4e-6, rel=1e-3)
        with pytest.raises(ExtractionError, match="port 3"):
            extract_rlc(two, spec, port=2)

    def test_feed_from_line_model(self):
        # lossless version of the reference feed; its electrical length at 30 MHz is the de-embedding angle
        g = presets.FEED_LINE
        tl = rlgc(g, Dielectric(presets.FEED_DIELECTRIC.eps_r, 0.0), presets.FEED_CONDUCTOR, 30e6)
        length = 0.1
        theta = math.degrees(tl.beta * length)
        R, L, C = 0.2, 0.364e-6, 45.3e-12
        f = np.linspace(33e6, 45e6, 3001)
        z_port = through_line_abcd(series_rlc(f, R, L, C), f, tl.z0, tl.beta / 30e6, length)
        data = TouchstoneData(f, s_from_z(z_port, 50.0).reshape(-1, 1, 1), 50.0)
        out = extract_rlc(data, DeembedSpec(tl.z0, theta, 30e6))
        assert out.R == pytest.approx(R, rel=1e-3)
        assert out.L == pytest.approx(L, rel=1e-3)
        assert out.C == pytest.approx(C, rel=1e-3)
