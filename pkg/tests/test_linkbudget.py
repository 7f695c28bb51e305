import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mmbudget.errors import DomainError
from mmbudget.linkbudget import (
    ArrayConfig,
    PaArchitecture,
    ReceiverSpec,
    bs_eirp_from_psd,
    eirp,
    link_snr,
    max_pa_power,
    rx_array_gain,
    thermal_noise,
)

SPLIT = PaArchitecture.SINGLE_SPLIT_PA
PER = PaArchitecture.PER_ELEMENT_PA
BOLTZMANN = 1.380649e-23

n_ant = st.integers(1, 1024)
dbm = st.floats(-50, 80)


def test_eirp_examples():
    x = 10.0
    assert eirp(ArrayConfig(8, x, pa_architecture=SPLIT)) == pytest.approx(x + 9.03, abs=5e-3)
    assert eirp(ArrayConfig(8, x, pa_architecture=PER)) == pytest.approx(x + 18.06, abs=5e-3)
    assert eirp(ArrayConfig(1, x, pa_architecture=SPLIT)) == x
    assert eirp(ArrayConfig(1, x, pa_architecture=PER)) == x


def test_eirp_excludes_element_gain():
    assert eirp(ArrayConfig(8, 10.0, 0.0)) == eirp(ArrayConfig(8, 10.0, 7.0))


def test_max_pa_power_examples():
    # 43 - 20 log10(16) and 43 - 20 log10(8); both round to the quoted 19 and 25 dBm
    assert max_pa_power(43, 16) == pytest.approx(18.9176, abs=1e-4)
    assert max_pa_power(43, 8) == pytest.approx(24.9382, abs=1e-4)
    assert round(max_pa_power(43, 16)) == 19
    assert round(max_pa_power(43, 8)) == 25
    assert max_pa_power(43, 1) == 43
    with pytest.raises(DomainError):
        max_pa_power(43, 0)


def test_bs_eirp_examples():
    assert bs_eirp_from_psd(75, 100e6, 200e6) == pytest.approx(78.01, abs=5e-3)
    assert bs_eirp_from_psd(75, 100e6, 100e6) == 75
    assert bs_eirp_from_psd(75, 100e6, 800e6) == pytest.approx(84.03, abs=5e-3)
    with pytest.raises(DomainError):
        bs_eirp_from_psd(75, 0, 100e6)


def test_rx_array_gain_examples():
    assert rx_array_gain(8, 5) == pytest.approx(14.03, abs=5e-3)
    assert rx_array_gain(256, 5) == pytest.approx(29.08, abs=5e-3)
    assert rx_array_gain(1, 0) == 0


def test_thermal_noise_examples():
    assert thermal_noise(200e6) == pytest.approx(-90.99, abs=5e-3)
    assert thermal_noise(1) == -174
    assert thermal_noise(800e6) == pytest.approx(-84.97, abs=5e-3)


def test_thermal_noise_floor_matches_kt_at_290k():
    kt_dbm_hz = 10 * math.log10(BOLTZMANN * 290 * 1e3)
    assert thermal_noise(1) == pytest.approx(kt_dbm_hz, abs=0.03)


def test_link_snr_downlink_column():
    c = link_snr(78.0, 126.3, 200e6, ReceiverSpec(4, 7, 8, 5))
    assert c.rx_power_dbm == pytest.approx(-48.3, abs=0.05)
    assert c.thermal_noise_dbm == pytest.approx(-91.0, abs=0.05)
    assert c.snr_before_bf_db == pytest.approx(42.7, abs=0.05)
    assert c.snr_after_bf_db == pytest.approx(45.7, abs=0.05)


def test_link_snr_uplink_column():
    c = link_snr(43.0, 126.3, 200e6, ReceiverSpec(4, 7, 64, 5))
    assert c.rx_power_dbm == pytest.approx(-83.3, abs=0.05)
    assert c.snr_before_bf_db == pytest.approx(7.7, abs=0.05)
    # 7.69 - 4 + 23.06 - 7
    assert c.snr_after_bf_db == pytest.approx(19.75, abs=0.01)


def test_link_snr_identity_chain():
    c = link_snr(0.0, 0.0, 1.0, ReceiverSpec(0, 0, 1, 0))
    assert (c.rx_power_dbm, c.thermal_noise_dbm, c.snr_before_bf_db, c.snr_after_bf_db) == (0, -174, 174, 174)


def test_receiver_invariants():
    with pytest.raises(DomainError):
        ReceiverSpec(front_end_loss_db=-1)
    with pytest.raises(DomainError):
        ReceiverSpec(noise_figure_db=-1)
    with pytest.raises(DomainError):
        ReceiverSpec(n_rx_elements=0)
    with pytest.raises(DomainError):
        ArrayConfig(0, 10)
    with pytest.raises(DomainError):
        ArrayConfig(8, 10, math.inf)


@given(dbm, st.floats(0, 200), st.floats(-40, 40), st.integers(1, 512))
def test_snr_linear_in_eirp(e, loss, x, n):
    rx = ReceiverSpec(4, 7, n, 5)
    a = link_snr(e, loss, 200e6, rx)
    b = link_snr(e + x, loss, 200e6, rx)
    for f in ("rx_power_dbm", "snr_before_bf_db", "snr_after_bf_db"):
        assert getattr(b, f) - getattr(a, f) == pytest.approx(x, abs=1e-9)
    assert b.thermal_noise_dbm == a.thermal_noise_dbm


@given(dbm, st.floats(0, 200), st.floats(1e3, 1e10), st.integers(1, 512), st.floats(0, 10), st.floats(0, 10))
def test_snr_chain_identities(e, loss, bw, n, fe, nf):
    c = link_snr(e, loss, bw, ReceiverSpec(fe, nf, n, 5))
    assert c.snr_before_bf_db == pytest.approx(c.rx_power_dbm - c.thermal_noise_dbm, abs=1e-9)
    expected = c.snr_before_bf_db - fe + c.array_gain_db - nf
    assert c.snr_after_bf_db == pytest.approx(expected, abs=1e-9)


@given(dbm, n_ant)
def test_per_element_minus_split_is_10logn(p, n):
    diff = eirp(ArrayConfig(n, p, pa_architecture=PER)) - eirp(ArrayConfig(n, p, pa_architecture=SPLIT))
    assert diff == pytest.approx(10 * math.log10(n), abs=1e-9)


@given(st.floats(-20, 80), n_ant)
def test_max_pa_power_inverts_eirp(limit, n):
    assert eirp(ArrayConfig(n, max_pa_power(limit, n), pa_architecture=PER)) == pytest.approx(limit, abs=1e-12)


@given(st.integers(1, 1 << 20), st.floats(-10, 20))
def test_array_gain_doubling(n, g):
    assert rx_array_gain(2 * n, g) - rx_array_gain(n, g) == pytest.approx(3.0103, abs=5e-5)
