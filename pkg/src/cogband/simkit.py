"""Monte-Carlo drop campaign: baseline vs cognitive throughput on both links."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .allocation import ALLOCATORS, EXHAUSTIVE_MAX_USERS
from .netmodel import DEFAULT_CELL_RADIUS_M, MIN_DISTANCE_M, build_layout, drop_users, group_by_sector
from .propagation import DIRECTIONS, AntennaPattern, BandConfig, Bands, cellular_band, tv_band
from .rates import TV, LinkBudget

TRADITIONAL = "traditional"
COGNITIVE = "cognitive"
SCENARIOS = (TRADITIONAL, COGNITIVE)
PERCENTILES = (0.05, 0.50, 0.95)


@dataclass(frozen=True)
class SimConfig:
    seed: int = 1
    drops: int = 1000
    users_per_sector: int = 30
    cell_radius_m: float = DEFAULT_CELL_RADIUS_M
    rings: int = 0
    h_base_m: float = 30.0
    h_mobile_m: float = 2.0
    min_distance_m: float = MIN_DISTANCE_M
    allocator: str = "prefix_scan"
    cellular: BandConfig = field(default_factory=cellular_band)
    tv: BandConfig = field(default_factory=tv_band)
    budget: LinkBudget = field(default_factory=LinkBudget)
    pattern: AntennaPattern = field(default_factory=AntennaPattern)
    # Recorded only; the rate model is noise-limited and not subcarrier based.
    frequency_plan: str = "FFR"
    subcarriers: int = 512
    subcarrier_spacing_hz: float = 10e3

    def __post_init__(self):
        if self.drops < 1:
            raise ValueError("drops must be >= 1")
        if self.users_per_sector < 1:
            raise ValueError("users_per_sector must be >= 1")
        if self.allocator not in ALLOCATORS:
            raise ValueError(f"allocator must be one of {sorted(ALLOCATORS)}, got {self.allocator!r}")
        if self.allocator == "exhaustive" and self.users_per_sector > EXHAUSTIVE_MAX_USERS:
            raise ValueError(f"exhaustive allocator needs users_per_sector <= {EXHAUSTIVE_MAX_USERS}")

    @property
    def bands(self) -> Bands:
        return Bands(self.cellular, self.tv)

    def to_dict(self) -> dict:
        return asdict(self)


def drop_seed(seed: int, drop_index: int) -> int:
    """64-bit seed of one drop, independent of which other drops are run."""
    state = np.random.SeedSequence([seed, drop_index]).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])


@dataclass(frozen=True)
class DropResult:
    """Per-user outcome of one drop, users in id order."""

    drop_index: int
    user_id: np.ndarray
    sector: np.ndarray
    geometry_rank: np.ndarray  # 0 = highest geometry within the serving sector
    group_size: np.ndarray
    dl_baseline: np.ndarray
    dl_allocated: np.ndarray
    ul_baseline: np.ndarray
    ul_allocated: np.ndarray
    dl_tv: np.ndarray
    ul_tv: np.ndarray

    def __len__(self):
        return len(self.user_id)


def run_drop(config: SimConfig, drop_index: int) -> DropResult:
    layout = build_layout(config.cell_radius_m, config.rings, config.pattern, config.h_base_m)
    users = drop_users(
        layout,
        config.users_per_sector,
        drop_seed(config.seed, drop_index),
        config.bands,
        h_mobile_m=config.h_mobile_m,
        min_distance_m=config.min_distance_m,
    )
    allocate = ALLOCATORS[config.allocator]
    n = len(users)
    out = {
        name: np.zeros(n, dtype=dt)
        for name, dt in [
            ("sector", int),
            ("geometry_rank", int),
            ("group_size", int),
            ("dl_baseline", float),
            ("dl_allocated", float),
            ("ul_baseline", float),
            ("ul_allocated", float),
            ("dl_tv", bool),
            ("ul_tv", bool),
        ]
    }
    for sector, members in group_by_sector(users).items():
        for direction in DIRECTIONS:
            alloc = allocate(direction, members, config.bands, config.budget)
            rep = alloc.report
            ids = np.asarray(rep.user_ids)
            out[f"{direction}_baseline"][ids] = rep.baseline_bps
            out[f"{direction}_allocated"][ids] = rep.allocated_bps
            out[f"{direction}_tv"][ids] = [b == TV for b in rep.band]
            if direction == DIRECTIONS[0]:
                out["geometry_rank"][ids] = np.arange(len(ids))
        ids = [u.id for u in members]
        out["sector"][ids] = sector
        out["group_size"][ids] = len(members)
    return DropResult(drop_index=drop_index, user_id=np.arange(n), **out)


@dataclass(frozen=True)
class CdfSeries:
    values: np.ndarray
    fractions: np.ndarray

    @classmethod
    def from_samples(cls, samples) -> "CdfSeries":
        values = np.sort(np.asarray(samples, dtype=float), kind="stable")
        n = len(values)
        return cls(values, np.arange(1, n + 1) / n)

    def __len__(self):
        return len(self.values)


def percentile(series: CdfSeries, p: float) -> float:
    """Lower empirical quantile: the value at index ceil(p*n) - 1."""
    n = len(series)
    if n == 0:
        raise ValueError("percentile of an empty series")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    # Guard against p*n landing a hair above an integer.
    idx = math.ceil(p * n - 1e-9) - 1
    return float(series.values[min(max(idx, 0), n - 1)])


@dataclass(frozen=True)
class CampaignResult:
    config: SimConfig
    drops: tuple
    series: dict
    summary: dict

    def pooled(self, name: str) -> np.ndarray:
        return np.concatenate([getattr(d, name) for d in self.drops])


def _stats(series: CdfSeries) -> dict:
    out = {"mean": float(np.mean(series.values))}
    for p in PERCENTILES:
        out[f"p{round(p * 100)}"] = percentile(series, p)
    return out


def aggregate(config: SimConfig, drops) -> CampaignResult:
    drops = tuple(sorted(drops, key=lambda d: d.drop_index))
    indices = [d.drop_index for d in drops]
    if len(set(indices)) != len(indices):
        raise ValueError("duplicate drop indices")

    def pooled(name):
        return np.concatenate([getattr(d, name) for d in drops])

    series = {}
    summary = {"drops": len(drops), "users": int(sum(len(d) for d in drops)), "links": {}}
    rank = pooled("geometry_rank")
    size = pooled("group_size")
    top_decile = rank < np.maximum(1, np.floor(size / 10))
    for link in DIRECTIONS:
        base = pooled(f"{link}_baseline")
        alloc = pooled(f"{link}_allocated")
        series[(link, TRADITIONAL)] = CdfSeries.from_samples(base)
        series[(link, COGNITIVE)] = CdfSeries.from_samples(alloc)
        trad = _stats(series[(link, TRADITIONAL)])
        cog = _stats(series[(link, COGNITIVE)])
        ratio = alloc / base
        summary["links"][link] = {
            TRADITIONAL: trad,
            COGNITIVE: cog,
            "gain": {key: cog[key] / trad[key] for key in trad},
            "edge_gain_pct": 100.0 * (cog["p5"] / trad["p5"] - 1.0),
            "tv_fraction": float(np.mean(pooled(f"{link}_tv"))),
            "users_gaining_fraction": float(np.mean(alloc >= base)),
            "min_user_ratio": float(ratio.min()),
            "top_decile_min_ratio": float(ratio[top_decile].min()),
            "top_decile_mean_ratio": float(ratio[top_decile].mean()),
        }
    return CampaignResult(config=config, drops=drops, series=series, summary=summary)


def run_campaign(config: SimConfig, drop_indices=None, workers: int = 1) -> CampaignResult:
    """Run drops (all of them by default) and pool their users into CDFs.

    The result depends only on the config and the set of drop indices, not on
    ``workers`` or execution order.
    """
    indices = list(range(config.drops)) if drop_indices is None else sorted(drop_indices)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            drops = list(pool.map(run_drop, [config] * len(indices), indices, chunksize=16))
    else:
        drops = [run_drop(config, i) for i in indices]
    return aggregate(config, drops)


def merge_campaigns(*results: CampaignResult) -> CampaignResult:
    if not results:
        raise ValueError("nothing to merge")
    config = results[0].config
    if any(r.config != config for r in results[1:]):
        raise ValueError("cannot merge campaigns with different configs")
    return aggregate(config, [d for r in results for d in r.drops])
