import math
import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from mmbudget.errors import DomainError, LayoutError
from mmbudget.geometry import (
    LEGACY_PROTECTED_BANDS_HZ,
    BfModulePlacement,
    FrequencyPlan,
    StackUp,
    SubstrateSpec,
    UeLayout,
    _eps_eff_narrow,
    _eps_eff_wide,
    clearance_mm,
    effective_dielectric_constant,
    effective_wavelength,
    fig5_layout,
    fig8_frequency_plan,
    isolation_threshold_mm,
    max_spacing_ratio,
    stackup_thickness,
    validate_frequency_plan,
    validate_layout,
)

C0 = 299_792_458.0


def eps_oracle(er, u):
    # closed-form microstrip estimate written out independently
    f = (1 + 12 / u) ** -0.5
    if u < 1:
        f += 0.04 * (1 - u) ** 2
    return 0.5 * (er + 1) + 0.5 * (er - 1) * f


# substrate / wavelength


def test_eps_eff_examples():
    assert effective_dielectric_constant(SubstrateSpec(1.0, 0.3, 1.0)) == pytest.approx(1.0, abs=1e-15)
    assert effective_dielectric_constant(SubstrateSpec(1.0, 3.0, 1.0)) == pytest.approx(1.0, abs=1e-15)
    assert effective_dielectric_constant(SubstrateSpec(3.55, 2.0, 1.0)) == pytest.approx(2.757, abs=5e-4)


def test_eps_eff_branch_continuity():
    for er in (1.0, 2.2, 3.55, 10.2):
        assert abs(_eps_eff_narrow(er, 1.0) - _eps_eff_wide(er, 1.0)) <= 1e-12


@given(st.floats(1.0, 20.0), st.floats(0.01, 50.0), st.floats(0.01, 5.0))
def test_eps_eff_bounds_and_oracle(er, w, h):
    eps = effective_dielectric_constant(SubstrateSpec(er, w, h))
    assert 1.0 - 1e-12 <= eps <= er + 1e-12
    assert eps == pytest.approx(eps_oracle(er, w / h), rel=1e-12)


def test_substrate_invariants():
    with pytest.raises(DomainError):
        SubstrateSpec(0.9, 1, 1)
    with pytest.raises(DomainError):
        SubstrateSpec(3.0, 0, 1)
    with pytest.raises(DomainError):
        SubstrateSpec(3.0, 1, -1)


def test_effective_wavelength_examples():
    assert effective_wavelength(28e9, 1.0) * 1e3 == pytest.approx(10.71, abs=5e-3)
    assert effective_wavelength(2.6e9, 1.0) * 1e3 == pytest.approx(115.3, abs=5e-2)
    assert effective_wavelength(28e9, 2.757) * 1e3 == pytest.approx(6.45, abs=5e-3)
    assert effective_wavelength(28e9, 2.757) == pytest.approx(C0 / 28e9 / math.sqrt(2.757), rel=1e-15)


@given(st.floats(1e8, 1e12), st.floats(1.0, 20.0), st.floats(1.001, 2.0))
def test_effective_wavelength_decreasing(f, eps, k):
    base = effective_wavelength(f, eps)
    assert effective_wavelength(f * k, eps) < base
    assert effective_wavelength(f, eps * k) < base


def test_isolation_threshold_is_1p5_lambda():
    assert isolation_threshold_mm(28e9) == pytest.approx(16.06, abs=0.01)


# spacing


def test_max_spacing_examples():
    assert max_spacing_ratio(90.0) == 1.0
    assert max_spacing_ratio(0.0) == 0.5
    assert max_spacing_ratio(60.0) == pytest.approx(2 / 3, abs=1e-12)


@pytest.mark.parametrize("bad", [-0.1, 90.1, 180.0])
def test_max_spacing_range(bad):
    with pytest.raises(DomainError):
        max_spacing_ratio(bad)


@given(st.floats(0.0, 90.0), st.floats(0.0, 90.0))
def test_max_spacing_increasing(a, b):
    assume(abs(a - b) > 1e-6)
    lo, hi = sorted((a, b))
    assert max_spacing_ratio(lo) < max_spacing_ratio(hi)


# stack-up


def test_stackup_examples():
    assert stackup_thickness(StackUp()) == pytest.approx(1.494, abs=1e-12)
    assert stackup_thickness(StackUp(0, 0, 0, 0, 0)) == 0.0
    assert stackup_thickness(StackUp(h_pcb=0.4)) == pytest.approx(1.504, abs=1e-12)


def test_stackup_negative_rejected():
    with pytest.raises(DomainError):
        StackUp(h_die=-0.01)


@given(
    st.lists(st.floats(0, 2), min_size=5, max_size=5),
    st.integers(0, 4),
    st.floats(0, 1),
)
def test_stackup_additive(layers, idx, frac):
    # splitting one layer into two parts leaves the total unchanged
    split = list(layers)
    part = split[idx] * frac
    split[idx] -= part
    total = stackup_thickness(StackUp(*split)) + part
    assert total == pytest.approx(stackup_thickness(StackUp(*layers)), rel=1e-12, abs=1e-12)


# layout


def test_fig5_layout_passes():
    layout = fig5_layout()
    assert len(layout.placements) == 8
    assert all((p.width, p.length) == (25.0, 18.0) for p in layout.placements)
    report = validate_layout(layout)
    assert report.ok, report.render()
    assert report.notes["min_clearance_mm"] >= 16.0


def test_close_modules_fail_isolation():
    a = BfModulePlacement(1, (20.0, 20.0))
    b = BfModulePlacement(2, (50.0, 20.0))  # 5 mm edge-to-edge
    assert clearance_mm(a, b) == pytest.approx(5.0)
    report = validate_layout(UeLayout((160, 80), (a, b), 28e9, 16.0), min_modules=1, required_zones=())
    assert report.kinds() == {"isolation"}
    assert report.violations[0].modules == (1, 2)


def test_diagonal_clearance_is_euclidean():
    a = BfModulePlacement(1, (0.0, 0.0), 2, 2)
    b = BfModulePlacement(2, (5.0, 6.0), 2, 2)
    assert clearance_mm(a, b) == pytest.approx(5.0)


def test_four_module_layout_fails_count():
    keep = {1, 2, 7, 8}
    full = fig5_layout()
    layout = UeLayout(full.housing, tuple(p for p in full.placements if p.id in keep))
    report = validate_layout(layout)
    assert "count" in report.kinds()
    assert not report.ok


def test_containment_violation():
    p = BfModulePlacement(1, (5.0, 80.0))
    report = validate_layout(UeLayout((160, 80), (p,)), min_modules=1, required_zones=())
    assert report.kinds() == {"containment"}


def test_missing_center_zone():
    full = fig5_layout()
    layout = UeLayout(full.housing, tuple(p for p in full.placements if p.id != 5))
    report = validate_layout(layout)
    assert report.kinds() == {"coverage"}
    assert "center" in report.violations[0].message


def test_min_modules_configurable():
    full = fig5_layout()
    assert not validate_layout(full, min_modules=9).ok
    assert validate_layout(full, min_modules=6).ok


def test_malformed_layout_raises():
    with pytest.raises(LayoutError, match="duplicate"):
        validate_layout(UeLayout((160, 80), (BfModulePlacement(1, (20, 20)), BfModulePlacement(1, (60, 100)))))
    with pytest.raises(LayoutError):
        validate_layout(UeLayout((160, 80), (BfModulePlacement(1, (20, 20), 0, 18),)))
    with pytest.raises(LayoutError):
        validate_layout(UeLayout((0, 80), ()))


def test_report_render_and_records():
    report = validate_layout(UeLayout((160, 80), (BfModulePlacement(1, (20, 20)),)))
    text = report.render()
    assert text.startswith("layout: FAIL")
    assert len([l for l in text.splitlines() if "violation" in l]) == len(report.violations)
    assert all(set(r) == {"kind", "message", "modules"} for r in report.records())


@given(st.randoms(use_true_random=False))
def test_layout_permutation_invariant(rnd):
    full = fig5_layout()
    placements = list(full.placements)
    rnd.shuffle(placements)
    sub = placements[: rnd.randint(1, 8)]
    rnd.shuffle(sub)
    a = validate_layout(UeLayout(full.housing, tuple(sub)))
    b = validate_layout(UeLayout(full.housing, tuple(sorted(sub, key=lambda p: p.id))))
    assert a.ok == b.ok
    assert a.records() == b.records()


@st.composite
def small_layouts(draw):
    n = draw(st.integers(2, 6))
    pts = [
        BfModulePlacement(i + 1, (draw(st.floats(60, 240)), draw(st.floats(60, 340))), 10.0, 8.0)
        for i in range(n)
    ]
    return UeLayout((400.0, 300.0), tuple(pts), 28e9, draw(st.floats(1.0, 40.0)))


@given(small_layouts(), st.floats(-50, 50), st.floats(-50, 50))
def test_layout_translation_invariant(layout, dx, dy):
    # Isolation, containment and count depend only on relative geometry; zone
    # coverage is a fixed-position rule and is excluded here.
    before = validate_layout(layout, min_modules=3, required_zones=())
    after = validate_layout(layout.translated(dx, dy), min_modules=3, required_zones=())
    assert before.ok == after.ok
    assert before.kinds() == after.kinds()


# frequency plan


def test_fig8_plan_passes_with_8p8_ghz_image():
    report = validate_frequency_plan(fig8_frequency_plan())
    assert report.ok, report.render()
    assert report.notes["image_offset_ghz"] == pytest.approx(8.8)


def test_control_550mhz_harmonic_collision():
    plan = fig8_frequency_plan()
    bad = FrequencyPlan(plan.rf_band_hz, plan.if_center_hz, 550e6, plan.ref_clock_hz, plan.protected_bands_hz)
    assert bad.if_channel_hz == pytest.approx((4.3e9, 4.5e9))
    report = validate_frequency_plan(bad, 10)
    assert report.kinds() == {"harmonic"}
    assert "harmonic 8" in report.violations[0].message


def test_harmonic_check_respects_max_harmonic():
    plan = FrequencyPlan((27.5e9, 28.35e9), 4.4e9, 550e6, 100e6)
    assert validate_frequency_plan(plan, 7).ok
    assert not validate_frequency_plan(plan, 8).ok


def test_if_inside_protected_band():
    plan = FrequencyPlan((27.5e9, 28.35e9), 3.5e9, 600e6, 100e6, LEGACY_PROTECTED_BANDS_HZ)
    report = validate_frequency_plan(plan)
    assert "protected-band" in report.kinds()


def test_image_overlapping_rf_band():
    plan = FrequencyPlan((27.5e9, 28.35e9), 0.3e9, 700e6, 100e6, if_bandwidth_hz=50e6)
    assert "image" in validate_frequency_plan(plan).kinds()


def test_frequency_plan_invariants():
    with pytest.raises(DomainError):
        FrequencyPlan((28.35e9, 27.5e9), 4.4e9, 600e6, 100e6)
    with pytest.raises(DomainError):
        FrequencyPlan((27.5e9, 28.35e9), 0.0, 600e6, 100e6)
    with pytest.raises(DomainError):
        validate_frequency_plan(fig8_frequency_plan(), 0)


@given(st.floats(1e9, 10e9), st.floats(50e6, 1e9), st.integers(1, 20))
def test_harmonic_oracle(if_center, control, kmax):
    plan = FrequencyPlan((27.5e9, 28.35e9), if_center, control, 100e6)
    lo, hi = plan.if_channel_hz
    expected = [k for k in range(1, kmax + 1) if lo <= k * control <= hi]
    got = [v for v in validate_frequency_plan(plan, kmax).violations if v.kind == "harmonic"]
    assert len(got) == len(expected)
