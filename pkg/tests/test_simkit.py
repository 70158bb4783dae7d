import dataclasses

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cogband.propagation import tv_band
from cogband.simkit import (
    COGNITIVE,
    TRADITIONAL,
    CdfSeries,
    SimConfig,
    merge_campaigns,
    percentile,
    run_campaign,
    run_drop,
)

SMALL = SimConfig(seed=3, drops=6, users_per_sector=8)


def _same_drop(a, b):
    assert a.drop_index == b.drop_index
    for f in dataclasses.fields(a):
        if f.name != "drop_index":
            np.testing.assert_array_equal(getattr(a, f.name), getattr(b, f.name))


def test_run_drop_deterministic():
    _same_drop(run_drop(SMALL, 4), run_drop(SMALL, 4))
    assert not np.array_equal(run_drop(SMALL, 4).dl_baseline, run_drop(SMALL, 5).dl_baseline)


def test_run_drop_tv_floor_changes_nothing():
    dead = dataclasses.replace(SMALL, tv=tv_band(base_power_dbm=-300.0, mobile_power_dbm=-300.0))
    d = run_drop(dead, 0)
    np.testing.assert_array_equal(d.dl_allocated, d.dl_baseline)
    np.testing.assert_array_equal(d.ul_allocated, d.ul_baseline)
    assert not d.dl_tv.any() and not d.ul_tv.any()


def test_run_drop_downlink_nobody_loses():
    cfg = SimConfig(seed=11, drops=20, users_per_sector=30)
    for i in range(cfg.drops):
        d = run_drop(cfg, i)
        assert np.all(d.dl_allocated >= d.dl_baseline)


def test_run_drop_shapes():
    d = run_drop(SMALL, 0)
    assert len(d) == 24
    assert sorted(np.unique(d.sector)) == [0, 1, 2]
    for s in range(3):
        ranks = np.sort(d.geometry_rank[d.sector == s])
        np.testing.assert_array_equal(ranks, np.arange(len(ranks)))


def test_run_drop_with_exhaustive_allocator():
    cfg = dataclasses.replace(SMALL, allocator="exhaustive")
    scan = run_drop(SMALL, 2)
    exact = run_drop(cfg, 2)
    np.testing.assert_allclose(exact.dl_allocated, scan.dl_allocated, rtol=1e-12)


def test_single_drop_campaign_sizes():
    result = run_campaign(dataclasses.replace(SMALL, drops=1))
    for series in result.series.values():
        assert len(series) == 24


def test_split_campaign_merges_to_whole():
    whole = run_campaign(SMALL)
    first = run_campaign(SMALL, drop_indices=range(0, 3))
    second = run_campaign(SMALL, drop_indices=range(3, 6))
    merged = merge_campaigns(second, first)
    assert merged.summary == whole.summary
    for key in whole.series:
        np.testing.assert_array_equal(merged.series[key].values, whole.series[key].values)


def test_merge_rejects_overlap_and_mixed_configs():
    a = run_campaign(SMALL, drop_indices=[0, 1])
    with pytest.raises(ValueError):
        merge_campaigns(a, a)
    b = run_campaign(dataclasses.replace(SMALL, seed=4), drop_indices=[2])
    with pytest.raises(ValueError):
        merge_campaigns(a, b)


def test_parallel_execution_matches_serial():
    serial = run_campaign(SMALL)
    parallel = run_campaign(SMALL, workers=2)
    assert serial.summary == parallel.summary


def test_cdf_series_invariants():
    result = run_campaign(SMALL)
    for (link, scenario), s in result.series.items():
        assert np.all(np.diff(s.values) >= 0)
        assert np.all(np.diff(s.fractions) > 0)
        assert s.fractions[-1] == 1.0
    assert set(result.series) == {(l, s) for l in ("dl", "ul") for s in (TRADITIONAL, COGNITIVE)}


def test_percentile_examples():
    assert percentile(CdfSeries.from_samples([4, 2, 3, 1]), 0.5) == 2
    s = CdfSeries.from_samples(np.arange(1, 101))
    assert percentile(s, 0.05) == 5
    assert percentile(s, 0.07) == 7
    with pytest.raises(ValueError):
        percentile(CdfSeries.from_samples([]), 0.5)
    with pytest.raises(ValueError):
        percentile(s, 1.0)


@given(st.floats(min_value=-1e9, max_value=1e9), st.integers(1, 50), st.floats(0.001, 0.999))
def test_percentile_of_constant_series(value, n, p):
    assert percentile(CdfSeries.from_samples([value] * n), p) == value


@given(st.lists(st.floats(0, 1e9), min_size=1, max_size=200), st.floats(0.001, 0.999))
def test_percentile_is_a_sample_with_the_right_rank(samples, p):
    s = CdfSeries.from_samples(samples)
    q = percentile(s, p)
    assert q in s.values
    assert np.mean(s.values <= q) >= p - 1e-9


@pytest.mark.parametrize(
    "changes",
    [dict(drops=0), dict(users_per_sector=0), dict(allocator="nope"), dict(allocator="exhaustive", users_per_sector=21)],
)
def test_config_validation(changes):
    with pytest.raises(ValueError):
        dataclasses.replace(SimConfig(), **changes)
