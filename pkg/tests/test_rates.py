import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cogband.netmodel import UserTerminal
from cogband.propagation import DL, UL, Bands, cellular_band, tv_band
from cogband.rates import (
    LinkBudget,
    baseline_rates,
    link_snr,
    lowsnr_ratios,
    noise_power_dbm,
    shared_rate_bps,
    snr_linear,
    user_rate_bps,
)

TEN_LOG_5MHZ = 10 * math.log10(5e6)  # 66.9897, quoted as 67 in rounded examples


def user_with(eta_c_dl=-130.0, offset_dl=12.64, eta_c_ul=None, offset_ul=4.64, uid=0):
    eta_c_ul = eta_c_dl + 17.0 if eta_c_ul is None else eta_c_ul
    return UserTerminal(
        id=uid,
        pos_m=(0.0, 0.0),
        serving_sector=0,
        eta_db={
            ("cellular", DL): eta_c_dl,
            ("cellular", UL): eta_c_ul,
            ("tv", DL): eta_c_dl + offset_dl,
            ("tv", UL): eta_c_ul + offset_ul,
        },
    )


@pytest.mark.parametrize(
    "bw, nf, expected, rounded",
    [
        (5e6, 10, -174 + TEN_LOG_5MHZ + 10, -97.0),
        (5e6, 6, -174 + TEN_LOG_5MHZ + 6, -101.0),
        (1, 0, -174.0, -174.0),
    ],
)
def test_noise_power(bw, nf, expected, rounded):
    assert noise_power_dbm(bw, nf, LinkBudget()) == pytest.approx(expected, abs=1e-12)
    assert noise_power_dbm(bw, nf) == pytest.approx(rounded, abs=0.02)


def test_noise_power_rejects_bad_bandwidth():
    with pytest.raises(ValueError):
        noise_power_dbm(0, 5)


def test_snr_examples():
    assert snr_linear(59, -136.28, -97) == pytest.approx(10**1.972, rel=1e-12)
    assert snr_linear(59, -136.28, -97) == pytest.approx(93.8, abs=0.05)
    assert snr_linear(36, -123.63, -97) == pytest.approx(8.65, abs=0.01)
    for x in (-50.0, 0.0, 123.4):
        assert snr_linear(x, -x, 0) == 1.0


def test_budget_validation():
    with pytest.raises(ValueError):
        LinkBudget(nf_base_db=-1)


def test_downlink_rate_examples():
    # SNR 93.8 on 5 MHz: 5e6 * log2(94.8)
    assert float(shared_rate_bps(DL, 5e6, 93.8, 1)) == pytest.approx(5e6 * math.log2(94.8), rel=1e-12)
    assert float(shared_rate_bps(DL, 5e6, 93.8, 1)) == pytest.approx(32.8e6, rel=2e-3)
    assert float(shared_rate_bps(DL, 5e6, 93.8, 2)) == float(shared_rate_bps(DL, 5e6, 93.8, 1)) / 2


def test_uplink_low_snr_size_invariance():
    r1 = float(shared_rate_bps(UL, 5e6, 1e-3, 1))
    r2 = float(shared_rate_bps(UL, 5e6, 1e-3, 2))
    assert r2 == pytest.approx(r1, rel=1e-3)


def test_group_size_zero_is_an_error():
    with pytest.raises(ValueError):
        shared_rate_bps(DL, 5e6, 1.0, 0)


def test_user_rate_uses_receiver_noise(bands, budget):
    u = user_with(-130.0)
    snr_dl = 10 ** ((59 - 130 - (-174 + TEN_LOG_5MHZ + 10)) / 10)
    snr_ul = 10 ** ((20 - 113 - (-174 + TEN_LOG_5MHZ + 6)) / 10)
    assert user_rate_bps(DL, bands.cellular, 3, u, budget) == pytest.approx(5e6 / 3 * math.log2(1 + snr_dl), rel=1e-12)
    assert user_rate_bps(UL, bands.cellular, 3, u, budget) == pytest.approx(
        5e6 / 3 * math.log2(1 + 3 * snr_ul), rel=1e-12
    )


def test_baseline_examples(bands, budget, ref_pair):
    one = baseline_rates(DL, ref_pair[:1], bands.cellular, budget)
    assert one.baseline_bps[0] == pytest.approx(user_rate_bps(DL, bands.cellular, 1, ref_pair[0], budget))

    users = [user_with(-120.0 - 3 * i, uid=i) for i in range(5)]
    rep = baseline_rates(DL, users, bands.cellular, budget)
    for u, r in zip(users, rep.baseline_bps):
        assert r == pytest.approx(user_rate_bps(DL, bands.cellular, 1, u, budget) / 5, rel=1e-12)
    assert set(rep.band) == {"cellular"}
    assert rep.allocated_bps is None


def test_baseline_reference_pair(bands, budget, ref_pair):
    rep = baseline_rates(DL, ref_pair, bands.cellular, budget)
    # Brute force: eta from the Hata/COST-231 hand values, -174 dBm/Hz + 10 dB NF on 5 MHz.
    noise = -174 + TEN_LOG_5MHZ + 10
    expected = [
        2.5e6 * math.log2(1 + 10 ** ((59 - 125.6747037323630 - noise) / 10)),
        2.5e6 * math.log2(1 + 10 ** ((59 - 136.2784419155583 - noise) / 10)),
    ]
    np.testing.assert_allclose(rep.baseline_bps, expected, rtol=1e-9)
    np.testing.assert_allclose(rep.baseline_bps / 1e6, [25.19, 16.42], rtol=1e-3)


def test_baseline_rejects_empty(bands, budget):
    with pytest.raises(ValueError):
        baseline_rates(DL, [], bands.cellular, budget)


def _far_user(bands, budget, n_snr):
    """User whose uplink |U|*snr equals n_snr for |U| = 30."""
    noise = noise_power_dbm(5e6, 6)
    eta_c_ul = 10 * math.log10(n_snr / 30) + noise - bands.cellular.p_ul_dbm
    return user_with(eta_c_ul - 17.0, eta_c_ul=eta_c_ul)


def test_lowsnr_cellular_ratio(bands, budget):
    u = _far_user(bands, budget, 1e-3)
    r = lowsnr_ratios(u, (30, 20, 10), bands, budget)
    assert 1.0 <= r.cc_ratio_exact <= 1.001
    assert r.cc_ratio_approx == 1.0


def test_lowsnr_identical_bands(budget):
    same = Bands(cellular_band(), cellular_band(name="tv"))
    u = user_with(-140.0, offset_dl=0.0, offset_ul=0.0)
    r = lowsnr_ratios(u, (10, 10, 10), same, budget)
    assert r.ct_ratio_exact == pytest.approx(1.0, rel=1e-12)
    assert r.ct_ratio_approx == pytest.approx(1.0, rel=1e-12)


def test_lowsnr_tv_ratio_table1(bands, budget):
    u = _far_user(bands, budget, 1e-3)
    r = lowsnr_ratios(u, (30, 20, 10), bands, budget)
    assert r.ct_ratio_approx == pytest.approx(10 ** (4.64 / 10), rel=1e-3)
    assert r.ct_ratio_exact == pytest.approx(10 ** (4.64 / 10), rel=0.05)


etas = st.floats(min_value=-170.0, max_value=-60.0)
sizes = st.integers(min_value=1, max_value=64)


@given(etas, sizes)
def test_downlink_spectral_efficiency_size_invariant(eta, m):
    snr = link_snr(DL, cellular_band(), eta, LinkBudget())
    assert float(shared_rate_bps(DL, 5e6, snr, m)) * m == pytest.approx(float(shared_rate_bps(DL, 5e6, snr, 1)), rel=1e-12)


@given(st.floats(min_value=1e-9, max_value=1e-3), st.integers(min_value=1, max_value=20))
def test_uplink_low_snr_bound(snr, m):
    r1 = float(shared_rate_bps(UL, 5e6, snr, 1))
    rm = float(shared_rate_bps(UL, 5e6, snr, m))
    assert abs(rm - r1) / r1 <= (m - 1) * snr + 1e-12


@given(etas, st.floats(min_value=0.01, max_value=20.0), sizes, st.sampled_from([DL, UL]))
def test_rates_positive_and_increasing(eta, delta, m, direction):
    budget = LinkBudget()
    band = tv_band()
    lo = float(shared_rate_bps(direction, 5e6, link_snr(direction, band, eta, budget), m))
    hi = float(shared_rate_bps(direction, 5e6, link_snr(direction, band, eta + delta, budget), m))
    assert 0 < lo < hi


@given(st.floats(min_value=1e-3, max_value=1e4), st.floats(min_value=0.1, max_value=10.0), sizes)
def test_bandwidth_scaling_at_fixed_snr(snr, scale, m):
    for d in (DL, UL):
        assert float(shared_rate_bps(d, 5e6 * scale, snr, m)) == pytest.approx(
            scale * float(shared_rate_bps(d, 5e6, snr, m)), rel=1e-12
        )
