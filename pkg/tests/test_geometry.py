import math

import pytest
from hypothesis import given, strategies as st

from lpmimo import geometry
from lpmimo.errors import GeometryError, SynthesisOverflowError
from lpmimo.geometry import (
    BandSpec,
    DipoleElement,
    LpdaGeometry,
    SubstrateSpec,
    boom_length,
    build_geometry,
    default_substrate,
    resonant_frequency_mhz,
    synthesize,
    reference_fixture,
    validate,
)

LB_ARMS = [87.0, 77.0, 68.0, 60.0, 53.0, 47.0]
LB_WIDTHS = [16.0, 14.0, 12.0, 11.0, 10.0, 9.0]
LB_SPACINGS = [28.0, 25.0, 22.0, 20.0, 17.0]
HB_ARMS = [33.0, 30.0, 28.0, 26.0, 24.0, 22.0, 20.0, 19.0, 17.0, 16.0, 15.0, 13.0, 12.0, 11.0]


def test_lb_fixture_matches_reference_dimensions(lb_geometry):
    assert lb_geometry.arm_lengths_mm == LB_ARMS
    assert lb_geometry.strip_widths_mm == LB_WIDTHS
    assert lb_geometry.spacings_mm == LB_SPACINGS
    assert lb_geometry.footprint_length_mm == 190.0
    assert lb_geometry.footprint_width_mm == 176.0
    assert lb_geometry.substrate.relative_permittivity == 4.3
    assert lb_geometry.substrate.thickness_mm == 1.6
    assert lb_geometry.termination_offset_mm is None


def test_hb_fixture_has_trailing_offset(hb_geometry):
    assert hb_geometry.arm_lengths_mm == HB_ARMS
    assert hb_geometry.n_elements == 14
    assert len(hb_geometry.spacings_mm) == 13
    # the 14th printed spacing is a feed/termination offset, not a pitch
    assert hb_geometry.termination_offset_mm == 9.0
    assert hb_geometry.footprint_length_mm == 190.0
    assert hb_geometry.footprint_width_mm == 69.0


def test_unknown_fixture_label():
    with pytest.raises(GeometryError):
        reference_fixture("MB")


def test_boom_length_is_plain_sum(lb_geometry, hb_geometry):
    assert boom_length(lb_geometry) == pytest.approx(sum(LB_SPACINGS))
    # naive summation oracle, offset included
    naive = 0.0
    for e in hb_geometry.elements[:-1]:
        naive += e.spacing_to_next_mm
    naive += 9.0
    assert boom_length(hb_geometry) == pytest.approx(naive)
    assert boom_length(hb_geometry) == pytest.approx(169.0)


def test_both_fixtures_validate(lb_geometry, hb_geometry):
    for g in (lb_geometry, hb_geometry):
        report = validate(g)
        assert report.passed, [c.name for c in report.findings]


def test_lb_mean_length_ratio(lb_geometry):
    report = validate(lb_geometry)
    assert report.length_ratio_mean == pytest.approx(0.883, abs=0.01)


def test_validation_reports_out_of_band_ratio():
    elements = (
        DipoleElement(arm_length_mm=100.0, strip_width_mm=10.0, spacing_to_next_mm=30.0),
        DipoleElement(arm_length_mm=60.0, strip_width_mm=8.0, spacing_to_next_mm=20.0),
        DipoleElement(arm_length_mm=45.0, strip_width_mm=6.0),
    )
    g = LpdaGeometry(
        elements=elements,
        substrate=default_substrate(),
        footprint_length_mm=300.0,
        footprint_width_mm=250.0,
    )
    report = validate(g)
    assert not report.passed
    assert any("length_ratio" in c.name for c in report.findings)


def test_synthesize_reference_band_sizes_largest_arm():
    g = synthesize(BandSpec(700.0, 900.0), ratio=0.885, first_spacing_mm=28.0)
    # quarter wave at 700 MHz shrunk by the substrate scale
    assert g.arm_lengths_mm[0] == pytest.approx(87.0, abs=0.2)
    assert g.n_elements == 6
    assert validate(g).passed


def test_synthesize_ratio_law_exact():
    g = synthesize(BandSpec(700.0, 900.0), ratio=0.885, first_spacing_mm=28.0)
    arms = g.arm_lengths_mm
    for a, b in zip(arms, arms[1:]):
        assert b / a == pytest.approx(0.885, abs=1e-12)
    spacings = g.spacings_mm
    for a, b in zip(spacings, spacings[1:]):
        assert b / a == pytest.approx(0.885, abs=1e-12)


def test_synthesize_rejects_out_of_bounds_ratio():
    with pytest.raises(GeometryError):
        synthesize(BandSpec(700.0, 900.0), ratio=1.0, first_spacing_mm=28.0)
    with pytest.raises(GeometryError):
        synthesize(BandSpec(700.0, 900.0), ratio=0.5, first_spacing_mm=28.0)


def test_synthesize_element_cap_overflow():
    with pytest.raises(SynthesisOverflowError):
        synthesize(BandSpec(100.0, 10000.0), ratio=0.975, first_spacing_mm=28.0)


def test_synthesized_shortest_element_clears_band_top():
    band = BandSpec(700.0, 900.0)
    g = synthesize(band, ratio=0.885, first_spacing_mm=28.0, bandwidth_margin=1.4)
    scale = g.substrate.effective_length_scale
    f_last = resonant_frequency_mhz(g.arm_lengths_mm[-1], scale)
    assert f_last >= band.f_high_mhz * 1.4 - 1e-6
    # one element fewer would fall short
    f_prev = resonant_frequency_mhz(g.arm_lengths_mm[-2], scale)
    assert f_prev < band.f_high_mhz * 1.4


def test_invalid_band():
    with pytest.raises(GeometryError):
        BandSpec(900.0, 700.0)
    with pytest.raises(GeometryError):
        BandSpec(0.0, 900.0)


def test_geometry_invariants():
    with pytest.raises(GeometryError):
        LpdaGeometry(
            elements=(DipoleElement(50.0, 5.0),),
            substrate=default_substrate(),
            footprint_length_mm=100.0,
            footprint_width_mm=100.0,
        )
    with pytest.raises(GeometryError):  # non-decreasing arms
        LpdaGeometry(
            elements=(
                DipoleElement(50.0, 5.0, 10.0),
                DipoleElement(50.0, 5.0),
            ),
            substrate=default_substrate(),
            footprint_length_mm=100.0,
            footprint_width_mm=100.0,
        )
    with pytest.raises(GeometryError):  # width must stay below arm length
        DipoleElement(10.0, 12.0)


def test_roundtrip_through_dict(lb_geometry, hb_geometry):
    for g in (lb_geometry, hb_geometry):
        assert LpdaGeometry.from_dict(g.to_dict()) == g


def test_from_dict_missing_key(lb_geometry):
    data = lb_geometry.to_dict()
    del data["elements"]
    with pytest.raises(GeometryError):
        LpdaGeometry.from_dict(data)


def test_substrate_bounds():
    with pytest.raises(GeometryError):
        SubstrateSpec(0.9, 1.6, 0.03, 1.23)
    with pytest.raises(GeometryError):
        SubstrateSpec(4.3, 1.6, 0.03, 0.9)


@given(
    ratio=st.floats(min_value=0.79, max_value=0.97),
    n=st.integers(min_value=2, max_value=20),
)
def test_build_geometry_ratio_law_property(ratio, n):
    g = build_geometry(
        largest_arm_mm=90.0, ratio=ratio, n_elements=n, first_spacing_mm=25.0
    )
    arms = g.arm_lengths_mm
    for a, b in zip(arms, arms[1:]):
        assert math.isclose(b / a, ratio, rel_tol=1e-12)
    assert validate(g).passed


def test_element_positions_cumulative(lb_geometry):
    pos = lb_geometry.element_positions_mm
    assert pos[0] == 0.0
    assert pos[-1] == pytest.approx(112.0)
    diffs = [b - a for a, b in zip(pos, pos[1:])]
    assert diffs == pytest.approx(LB_SPACINGS)
