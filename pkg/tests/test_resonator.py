import math

import pytest
from hypothesis import given, strategies as st
from scipy.constants import c as C0, mu_0, pi

from loopkit import presets, resonator
from loopkit.resonator import (
    ConvergenceError,
    LoopGeometry,
    LoopRlc,
    build_resonator,
    conductor_resistance,
    equivalent_rod_radius,
    exterior_perimeter,
    feed_resistance,
    loop_inductance,
    radiation_resistance,
    resonant_frequency,
    stub_capacitance,
    stub_esr,
)
from loopkit.tline import Coax, Conductor, Dielectric, rlgc

A = presets.LOOP_RADIUS


class TestInductance:
    def test_rod_radius(self):
        assert equivalent_rod_radius(20e-3) == pytest.approx(5e-3)
        with pytest.raises(ValueError):
            equivalent_rod_radius(0.0)

    def test_reference_loop(self):
        # mu0 * 0.09 * (ln(144) - 1.75) evaluated by hand
        assert loop_inductance(0.09, 5e-3) == pytest.approx(3.6415231e-7, rel=1e-7)
        assert loop_inductance(0.09, 5e-3) == pytest.approx(0.364e-6, rel=0.005)

    @given(st.floats(0.01, 1.0), st.floats(0.001, 0.05), st.floats(0.1, 10.0))
    def test_homogeneous_of_degree_one(self, a, ratio, s):
        b0 = a * ratio
        assert loop_inductance(a * s, b0 * s) == pytest.approx(s * loop_inductance(a, b0), rel=1e-12)

    def test_rejects_fat_ring(self):
        with pytest.raises(ValueError):
            loop_inductance(0.01, 0.02)


class TestCapacitance:
    def test_reference_stub(self):
        assert stub_capacitance(291.8e-12, pi * 0.09) == pytest.approx(82.5e-12, rel=0.001)

    def test_long_stub_warns(self):
        with pytest.warns(UserWarning, match="electrically long"):
            stub_capacitance(100e-12, 1.0, beta=1.0)

    def test_zero_stub(self):
        with pytest.warns(UserWarning):
            assert stub_capacitance(100e-12, 0.0) == 0.0

    def test_resonant_frequency_examples(self):
        assert resonant_frequency(0.364e-6, 82.5e-12) == pytest.approx(29.0e6, rel=0.005)
        assert resonant_frequency(0.364e-6, 45.3e-12) == pytest.approx(39.2e6, rel=0.005)
        assert resonant_frequency(1.0, 1.0) == pytest.approx(1 / (2 * pi), rel=1e-15)
        with pytest.raises(ValueError):
            resonant_frequency(0.0, 1.0)


class TestLosses:
    def test_radiation_value(self):
        lam = C0 / 32.2e6
        assert radiation_resistance(0.09, 32.2e6) == pytest.approx(31170 * (pi * 0.0081 / lam**2) ** 2, rel=1e-12)
        assert radiation_resistance(0.09, 32.2e6) == pytest.approx(2.7e-3, rel=0.01)
        assert radiation_resistance(0.09, 0.0) == 0.0

    @given(st.floats(1e6, 100e6))
    def test_radiation_quartic(self, f):
        assert radiation_resistance(A, 2 * f) == pytest.approx(16 * radiation_resistance(A, f), rel=1e-12)

    def test_radiation_warns_for_large_loop(self):
        with pytest.warns(UserWarning):
            radiation_resistance(1.0, 100e6)

    def test_perimeters(self):
        coax = LoopGeometry(A, 5e-3, Coax(1e-3, 5e-3), Dielectric(2.2), Conductor())
        assert exterior_perimeter(coax) == pytest.approx(31.4e-3, rel=0.001)
        assert exterior_perimeter(presets.stripline_loop()) == pytest.approx(46.64e-3, rel=1e-12)

    def test_conductor_resistance_forms(self):
        c = Conductor()
        perimeter_form = conductor_resistance(A, 46.64e-3, 30e6, c)
        assert perimeter_form == pytest.approx(A / 46.64e-3 * math.sqrt(30e6 * mu_0 / c.sigma), rel=1e-12)
        textbook = conductor_resistance(A, 46.64e-3, 30e6, c, textbook=True)
        assert textbook / perimeter_form == pytest.approx(2 * pi * math.sqrt(pi), rel=1e-12)

    @given(st.floats(1e6, 1e9))
    def test_conductor_resistance_sqrt_law(self, f):
        c = Conductor()
        assert conductor_resistance(A, 0.05, 4 * f, c) == pytest.approx(2 * conductor_resistance(A, 0.05, f, c))

    def test_conductor_resistance_vanishes_for_perfect_metal(self):
        assert conductor_resistance(A, 0.05, 30e6, Conductor(sigma=1e30)) < 1e-12

    def test_stub_forms_agree_when_dielectric_loss_dominates(self):
        g = presets.stripline_loop(dielectric=Dielectric(2.2, 0.009))
        tl = rlgc(g.cross_section, g.dielectric, g.conductor, 30e6)
        stub = 0.1 / tl.beta
        assert stub_esr(tl, stub, exact=True) == pytest.approx(stub_esr(tl, stub, exact=False), rel=0.01)

    def test_exact_stub_adds_conductor_loss(self):
        # coth(x) = 1/x + x/3 + ...: the second term adds R' l / 3
        g = presets.stripline_loop()
        tl = rlgc(g.cross_section, g.dielectric, g.conductor, 30e6)
        stub = 0.1 / tl.beta
        small = stub_esr(tl, stub, exact=False)
        assert stub_esr(tl, stub, exact=True) == pytest.approx(small + tl.r * stub / 3, rel=0.01)

    def test_lossless_stub_has_no_esr(self):
        g = presets.stripline_loop(dielectric=Dielectric(2.2, 0.0))
        tl = rlgc(g.cross_section, g.dielectric, Conductor(sigma=1e30, thickness=70e-6), 30e6)
        assert abs(stub_esr(tl, 0.2)) < 1e-9

    def test_feed_resistance(self):
        assert feed_resistance(0.0, 1.0) == 0.0
        assert feed_resistance(0.2, 0.5) == pytest.approx(0.1)
        with pytest.raises(ValueError):
            feed_resistance(0.2, -1.0)

    def test_feed_lengths(self):
        assert presets.stripline_loop().feed_length == pytest.approx(pi * A)
        shifted = presets.stripline_loop(slit_angle=math.radians(10))
        assert shifted.feed_length == pytest.approx(10 / 360 * 2 * pi * A)


class TestGeometry:
    @pytest.mark.parametrize("angle", [0.0, 2 * pi, -1.0])
    def test_slit_angle_range(self, angle):
        with pytest.raises(ValueError):
            presets.stripline_loop(slit_angle=angle)

    def test_thick_section_warns(self):
        with pytest.warns(UserWarning, match="not thin"):
            LoopGeometry(0.02, 0.015, Coax(1e-3, 3e-3), Dielectric(), Conductor())

    @given(st.floats(0.01, 2 * pi - 0.01))
    def test_lengths_sum_to_circumference(self, angle):
        g = presets.stripline_loop(slit_angle=angle)
        assert g.stub_length + g.feed_length == pytest.approx(2 * pi * A, rel=1e-12)


@pytest.mark.usefixtures("quiet")
class TestBuild:
    def test_identities(self):
        loop = build_resonator(presets.stripline_loop())
        assert loop.f0 == 1 / (2 * pi * math.sqrt(loop.L * loop.C))
        assert loop.R == loop.breakdown.total
        assert loop.Q == pytest.approx(2 * pi * loop.f0 * loop.L / loop.R, rel=1e-15)
        assert min(loop.breakdown.r_rad, loop.breakdown.r_c, loop.breakdown.r_esr, loop.breakdown.r_feed) > 0

    def test_fixed_point_converged(self):
        loop = build_resonator(presets.microstrip_loop())
        g = presets.microstrip_loop()
        tl = rlgc(g.cross_section, g.dielectric, g.conductor, loop.f0)
        assert resonant_frequency(loop.L, tl.c * g.stub_length) == pytest.approx(loop.f0, rel=1e-6)

    def test_non_convergence_reported(self, monkeypatch):
        monkeypatch.setattr(resonator, "MAX_ITERATIONS", 1)
        with pytest.raises(ConvergenceError):
            build_resonator(presets.stripline_loop())

    def test_slit_shift_law(self):
        base = build_resonator(presets.stripline_loop())
        shifted = build_resonator(presets.stripline_loop(slit_angle=math.radians(10)))
        assert shifted.C / base.C == pytest.approx(350 / 180, rel=1e-12)
        assert shifted.f0 / base.f0 == pytest.approx(1 / math.sqrt(350 / 180), rel=1e-12)

    @given(st.floats(0.1, 6.0), st.floats(0.1, 6.0))
    def test_slit_shift_law_general(self, t1, t2):
        c1 = build_resonator(presets.stripline_loop(slit_angle=t1)).C
        c2 = build_resonator(presets.stripline_loop(slit_angle=t2)).C
        assert c1 / c2 == pytest.approx((2 * pi - t1) / (2 * pi - t2), rel=1e-12)

    @pytest.mark.parametrize("build", [presets.stripline_loop, presets.microstrip_loop])
    def test_width_trend(self, build):
        f0 = [build_resonator(build(width=w * 1e-3)).f0 for w in range(2, 11)]
        assert all(a > b for a, b in zip(f0, f0[1:]))

    def test_coax_path_uses_shared_formulas(self):
        g = LoopGeometry(A, 5e-3, Coax(1.5e-3, 5e-3), Dielectric(2.1, 0.0004), Conductor(5.8e7, 0.5e-3))
        loop = build_resonator(g)
        tl = rlgc(g.cross_section, g.dielectric, g.conductor, loop.f0)
        assert loop.L == loop_inductance(A, 5e-3)
        assert loop.C == pytest.approx(tl.c * g.stub_length, rel=1e-6)
        expected_rc = conductor_resistance(A, 2 * pi * 5e-3, loop.f0, g.conductor)
        assert loop.breakdown.r_c == pytest.approx(expected_rc, rel=1e-6)

    def test_evaluation_frequency_only_moves_losses(self):
        auto = build_resonator(presets.stripline_loop())
        fixed = build_resonator(presets.stripline_loop(), f_eval=40e6)
        assert fixed.L == auto.L and fixed.C == auto.C
        assert fixed.breakdown.r_rad > auto.breakdown.r_rad

    def test_exact_stub_capacitance_is_larger(self):
        lumped = build_resonator(presets.stripline_loop())
        exact = build_resonator(presets.stripline_loop(), exact_stub=True)
        assert 1.0 < exact.C / lumped.C < 1.05

    def test_high_loss_tangent_caps_q(self):
        # dielectric ESR alone limits Q to 1/tan(d); 0.009 cannot reach Q = 490 or 346
        for build in (presets.stripline_loop, presets.microstrip_loop):
            loop = build_resonator(build(dielectric=Dielectric(2.2, 0.009)))
            assert loop.Q < 1 / 0.009
            assert loop.Q < 0.75 * 346

    def test_textbook_conductor_loss_option(self):
        default = build_resonator(presets.stripline_loop())
        textbook = build_resonator(presets.stripline_loop(), textbook_rc=True)
        assert textbook.breakdown.r_c / default.breakdown.r_c == pytest.approx(2 * pi * math.sqrt(pi), rel=1e-9)
        assert textbook.R == pytest.approx(0.14, rel=0.30)
        assert textbook.Q == pytest.approx(490, rel=0.25)


class TestLoopRlc:
    def test_from_rlc(self):
        loop = LoopRlc.from_rlc(0.2, 0.35e-6, 70e-12)
        assert loop.reactance(loop.f0) == pytest.approx(0.0, abs=1e-9)
        assert loop.impedance(loop.f0).real == 0.2
        with pytest.raises(ValueError):
            LoopRlc.from_rlc(0.0, 1e-6, 1e-12)
