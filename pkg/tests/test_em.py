"""Solver tests against independent closed-form oracles.

The impedance oracles below are the textbook sine/cosine-integral forms
for sinusoidal-current dipoles, written directly in terms of
scipy.special.sici so they share no code with the quadrature path under
test.
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import sici

from lpmimo import em
from lpmimo.constants import C_MM_MHZ, ETA_0
from lpmimo.errors import GeometryError, SingularSystemError
from lpmimo.geometry import DipoleElement, LpdaGeometry, default_substrate

EULER = 0.5772156649015329
F_TEST = 1000.0
LAMBDA = C_MM_MHZ / F_TEST


def halfwave_self_impedance_oracle(radius_over_lambda: float) -> complex:
    """Closed-form self-impedance of an ideal half-wave dipole."""
    kl = math.pi  # k * l with l = lambda / 2
    si_kl, ci_kl = sici(kl)
    si_2kl, ci_2kl = sici(2 * kl)
    _, ci_rad = sici(2 * kl * radius_over_lambda**2 / 0.5)
    r = (
        ETA_0
        / (2 * math.pi)
        * (
            EULER
            + math.log(kl)
            - ci_kl
            + 0.5 * math.sin(kl) * (si_2kl - 2 * si_kl)
            + 0.5 * math.cos(kl) * (EULER + math.log(kl / 2) + ci_2kl - 2 * ci_kl)
        )
    )
    x = (
        ETA_0
        / (4 * math.pi)
        * (
            2 * si_kl
            + math.cos(kl) * (2 * si_kl - si_2kl)
            - math.sin(kl) * (2 * ci_kl - ci_2kl - ci_rad)
        )
    )
    return complex(r, x)


def halfwave_mutual_impedance_oracle(d_over_lambda: float) -> complex:
    """Closed-form side-by-side mutual impedance of half-wave dipoles."""
    k = 2 * math.pi
    d, length = d_over_lambda, 0.5
    u0 = k * d
    u1 = k * (math.hypot(d, length) + length)
    u2 = k * (math.hypot(d, length) - length)
    si0, ci0 = sici(u0)
    si1, ci1 = sici(u1)
    si2, ci2 = sici(u2)
    r = ETA_0 / (4 * math.pi) * (2 * ci0 - ci1 - ci2)
    x = -ETA_0 / (4 * math.pi) * (2 * si0 - si1 - si2)
    return complex(r, x)


class TestImpedances:
    def test_halfwave_self_impedance(self):
        z = em.self_impedance(LAMBDA / 4, LAMBDA / 2000, F_TEST)
        oracle = halfwave_self_impedance_oracle(1 / 2000)
        assert z.real == pytest.approx(oracle.real, abs=0.05)
        assert z.imag == pytest.approx(oracle.imag, abs=0.5)
        # and the familiar textbook value
        assert z.real == pytest.approx(73.0, abs=5.0)
        assert z.imag == pytest.approx(42.5, abs=5.0)

    def test_radius_moves_reactance_not_resistance(self):
        thin = em.self_impedance(LAMBDA / 4, LAMBDA / 2000, F_TEST)
        thick = em.self_impedance(LAMBDA / 4, LAMBDA / 1000, F_TEST)
        assert abs(thick.real - thin.real) < 0.5
        assert thick.imag != pytest.approx(thin.imag, abs=1e-3)

    def test_mutual_impedance_halfwave_spacing(self):
        z = em.mutual_impedance(LAMBDA / 4, LAMBDA / 4, LAMBDA / 2, F_TEST)
        oracle = halfwave_mutual_impedance_oracle(0.5)
        assert z.real == pytest.approx(oracle.real, abs=0.05)
        assert z.imag == pytest.approx(oracle.imag, abs=0.05)
        assert z.real == pytest.approx(-12.5, abs=1.5)
        assert z.imag == pytest.approx(-29.9, abs=1.5)

    def test_mutual_impedance_decays(self):
        z = em.mutual_impedance(LAMBDA / 4, LAMBDA / 4, 10 * LAMBDA, F_TEST)
        assert abs(z) < 2.0

    def test_reciprocity(self):
        a = em.mutual_impedance(LAMBDA / 4, LAMBDA / 6, LAMBDA / 3, F_TEST)
        b = em.mutual_impedance(LAMBDA / 6, LAMBDA / 4, LAMBDA / 3, F_TEST)
        assert abs(a - b) / abs(a) < 1e-9

    def test_thick_element_warns(self):
        with pytest.warns(UserWarning, match="thin-wire"):
            em.self_impedance(50.0, 10.0, F_TEST)

    def test_degenerate_inputs(self):
        with pytest.raises(GeometryError):
            em.self_impedance(LAMBDA / 4, LAMBDA / 2000, 0.0)
        with pytest.raises(GeometryError):
            em.mutual_impedance(LAMBDA / 4, LAMBDA / 4, 0.0, F_TEST)
        with pytest.raises(GeometryError):
            em.equivalent_radius(0.0)

    def test_equivalent_radius(self):
        assert em.equivalent_radius(16.0) == 4.0
        assert em.equivalent_radius(9.0) == 2.25

    def test_matrix_symmetry_across_sweep(self, lb_geometry):
        for f in (700.0, 800.0, 900.0):
            zm = em.impedance_matrix(lb_geometry, f)
            assert zm.max_asymmetry() < 1e-9


class TestFeeder:
    def test_quarter_wave_section_matches_line_equations(self):
        sec = em.FeederSection(LAMBDA / 4, 100.0, F_TEST)
        abcd = sec.abcd()
        # ideal line at 90 degrees electrical length, negated by the
        # transposition: A = D = 0, B = j*Z0, C = j/Z0
        expected = -np.array([[0.0, 100.0j], [0.01j, 0.0]])
        assert np.allclose(abcd, expected, atol=1e-9)

    def test_general_section_against_line_equations(self):
        length = 37.0
        z0 = 80.0
        sec = em.FeederSection(length, z0, F_TEST)
        bl = 2 * math.pi * length / LAMBDA
        line = np.array(
            [
                [math.cos(bl), 1j * z0 * math.sin(bl)],
                [1j * math.sin(bl) / z0, math.cos(bl)],
            ]
        )
        assert np.allclose(sec.abcd(), -line, atol=1e-12)

    def test_zero_length_section_is_identity_with_flip(self):
        sec = em.FeederSection(0.0, 100.0, F_TEST)
        assert np.allclose(sec.abcd(), -np.eye(2), atol=1e-15)

    def test_resonant_section_raises(self):
        sec = em.FeederSection(LAMBDA / 2, 100.0, F_TEST)
        with pytest.raises(SingularSystemError):
            sec.y_parameters()

    def test_nonpositive_z0_rejected(self, lb_geometry):
        with pytest.raises(GeometryError):
            em.feeder_network(lb_geometry, 0.0, F_TEST)

    def test_unknown_termination(self):
        with pytest.raises(ValueError):
            em.FeederNetwork(sections=(), termination="matched")


class TestSolveDrive:
    def test_single_element_degenerates_to_self_impedance(self):
        h = np.array([LAMBDA / 4])
        r = np.array([LAMBDA / 2000])
        pos = np.array([0.0])
        sol = em.solve_drive_elements(h, r, pos, F_TEST)
        z_self = em.self_impedance(LAMBDA / 4, LAMBDA / 2000, F_TEST)
        assert abs(sol.input_impedance - z_self) / abs(z_self) < 1e-9

    def test_reference_arrays_solve_and_match(self, lb_solution, hb_solution):
        for sol in (lb_solution, hb_solution):
            gamma = em.s11(sol.input_impedance)
            assert em.s11_db(gamma) < -6.0

    def test_active_region_is_interior(self, hb_geometry):
        sol = em.solve_drive(hb_geometry, 2200.0)
        strongest = int(np.argmax(np.abs(sol.base_currents)))
        assert 0 < strongest < hb_geometry.n_elements - 1

    def test_removing_off_resonance_elements_barely_moves_zin(self, hb_geometry):
        z_full = em.solve_drive(hb_geometry, 2200.0).input_impedance
        trimmed = LpdaGeometry(
            elements=hb_geometry.elements[2:],
            substrate=hb_geometry.substrate,
            footprint_length_mm=hb_geometry.footprint_length_mm,
            footprint_width_mm=hb_geometry.footprint_width_mm,
            band_label="HB-trimmed",
            termination_offset_mm=hb_geometry.termination_offset_mm,
        )
        z_trim = em.solve_drive(trimmed, 2200.0).input_impedance
        assert abs(z_trim - z_full) / abs(z_full) < 0.10

    def test_frequency_must_be_positive(self, lb_geometry):
        with pytest.raises(GeometryError):
            em.solve_drive(lb_geometry, -5.0)


class TestS11:
    def test_matched_load(self):
        assert em.s11(50.0 + 0j) == 0
        assert em.s11_db(em.s11(50.0 + 0j)) == -200.0

    def test_two_to_one_mismatch(self):
        gamma = em.s11(100.0 + 0j)
        assert gamma == pytest.approx(1 / 3)
        assert em.s11_db(gamma) == pytest.approx(-9.542, abs=1e-3)

    def test_short_circuit(self):
        assert em.s11(0j) == -1
        assert em.s11_db(em.s11(0j)) == 0.0

    def test_pole(self):
        with pytest.raises(ZeroDivisionError):
            em.s11(-50.0 + 0j)

    @given(
        re=st.floats(min_value=0.0, max_value=1e4),
        im=st.floats(min_value=-1e4, max_value=1e4),
    )
    def test_passive_impedance_never_exceeds_unity(self, re, im):
        z = complex(re, im)
        if z == -50.0:
            return
        assert abs(em.s11(z)) <= 1.0 + 1e-12


class TestFarField:
    def test_halfwave_pattern_matches_analytic(self):
        currents = np.array([1.0 + 0j])
        pat = em.far_field_elements(currents, np.array([LAMBDA / 4]), np.array([0.0]), F_TEST)
        theta = np.radians(pat.theta_deg)
        with np.errstate(divide="ignore", invalid="ignore"):
            analytic = np.where(
                np.sin(theta) > 1e-9,
                np.cos(math.pi / 2 * np.cos(theta)) / np.sin(theta),
                0.0,
            )
        measured = np.abs(pat.e_theta[:, 0])
        scale = measured[90] / analytic[90]
        assert np.allclose(measured, np.abs(analytic) * scale, atol=scale * 1e-6)
        # phi-independent for a single vertical element
        assert np.allclose(pat.power(), pat.power()[:, :1])

    def test_short_element_approaches_sine_pattern(self):
        currents = np.array([1.0 + 0j])
        pat = em.far_field_elements(
            currents, np.array([LAMBDA / 1000]), np.array([0.0]), F_TEST
        )
        theta = np.radians(pat.theta_deg)
        measured = np.abs(pat.e_theta[:, 0])
        analytic = np.sin(theta)
        scale = measured[90]
        assert np.allclose(measured, analytic * scale, atol=scale * 1e-4)
        assert measured[0] == 0.0 and measured[-1] == 0.0

    def test_beam_points_toward_small_end(self, lb_pattern):
        power = lb_pattern.power()
        it, ip = np.unravel_index(np.argmax(power), power.shape)
        assert lb_pattern.theta_deg[it] == pytest.approx(90.0, abs=2.0)
        assert lb_pattern.phi_deg[ip] == pytest.approx(0.0, abs=2.0) or lb_pattern.phi_deg[
            ip
        ] == pytest.approx(360.0, abs=2.0)

    def test_scale_invariance(self, lb_geometry, lb_solution):
        doubled = LpdaGeometry(
            elements=tuple(
                DipoleElement(
                    arm_length_mm=e.arm_length_mm * 2,
                    strip_width_mm=e.strip_width_mm * 2,
                    spacing_to_next_mm=None
                    if e.spacing_to_next_mm is None
                    else e.spacing_to_next_mm * 2,
                )
                for e in lb_geometry.elements
            ),
            substrate=lb_geometry.substrate,
            footprint_length_mm=lb_geometry.footprint_length_mm * 2,
            footprint_width_mm=lb_geometry.footprint_width_mm * 2,
            band_label="LB-x2",
        )
        sol2 = em.solve_drive(doubled, 400.0)
        assert sol2.input_impedance == pytest.approx(lb_solution.input_impedance, rel=1e-6)
        pat1 = em.far_field(lb_solution, lb_geometry, grid_step_deg=5.0)
        pat2 = em.far_field(sol2, doubled, grid_step_deg=5.0)
        p1 = pat1.power() / pat1.power().max()
        p2 = pat2.power() / pat2.power().max()
        assert np.allclose(p1, p2, atol=1e-6)

    def test_grid_step_must_divide_180(self):
        with pytest.raises(ValueError):
            em.pattern_grid(7.0)

    def test_tilted_element_splits_polarization(self):
        currents = np.array([1.0 + 0j])
        pat = em.far_field_elements(
            currents,
            np.array([LAMBDA / 4]),
            np.array([0.0]),
            F_TEST,
            axis_tilt_deg=45.0,
        )
        it = 90
        ip = 0
        et = pat.e_theta[it, ip]
        ep = pat.e_phi[it, ip]
        # at boresight the 45-degree tilt feeds both components equally
        assert abs(abs(et) - abs(ep)) / abs(et) < 1e-9


class TestSweep:
    def test_from_range_counts(self):
        sweep = em.FrequencySweep.from_range(700.0, 900.0, 5.0)
        assert len(sweep) == 41
        assert sweep.points_mhz[0] == 700.0
        assert sweep.points_mhz[-1] == 900.0

    def test_rejects_disorder(self):
        with pytest.raises(ValueError):
            em.FrequencySweep((900.0, 700.0))
        with pytest.raises(ValueError):
            em.FrequencySweep(())
        with pytest.raises(ValueError):
            em.FrequencySweep.from_range(700.0, 900.0, -5.0)
