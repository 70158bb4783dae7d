"""Noise-limited Shannon rates for equal-split full-buffer sharing of a band.

Rates are in bits/s (base-2 logarithm). A band shared by ``m`` users gives
each user W/m of bandwidth. On the downlink the base splits its power along
with the bandwidth, so the per-user SNR does not depend on ``m``. On the
uplink each mobile keeps its full power on W/m, so its SNR grows by ``m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .propagation import DL, UL, BandConfig, Bands, check_direction

CELLULAR = "cellular"
TV = "tv"


@dataclass(frozen=True)
class LinkBudget:
    noise_psd_dbm_hz: float = -174.0
    nf_base_db: float = 6.0
    nf_mobile_db: float = 10.0

    def __post_init__(self):
        if self.nf_base_db < 0 or self.nf_mobile_db < 0:
            raise ValueError("noise figures must be non-negative")

    def receiver_nf_db(self, direction: str) -> float:
        """Noise figure of the receiving side: the mobile on the downlink, the base on the uplink."""
        return self.nf_mobile_db if check_direction(direction) == DL else self.nf_base_db


def noise_power_dbm(bandwidth_hz: float, receiver_nf_db: float, budget: LinkBudget | None = None) -> float:
    if not bandwidth_hz > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    psd = budget.noise_psd_dbm_hz if budget is not None else -174.0
    return psd + 10.0 * math.log10(bandwidth_hz) + receiver_nf_db


def snr_linear(p_eff_dbm, eta_db, noise_dbm):
    return 10.0 ** ((p_eff_dbm + eta_db - noise_dbm) / 10.0)


def link_snr(direction: str, band: BandConfig, eta_db, budget: LinkBudget):
    """Full-band SNR P*eta/(W*N0) of a link; works on scalars and arrays of gains."""
    noise = noise_power_dbm(band.bandwidth_hz, budget.receiver_nf_db(direction), budget)
    if not isinstance(eta_db, (float, int)):
        eta_db = np.asarray(eta_db, dtype=float)
    return snr_linear(band.p_eff_dbm(direction), eta_db, noise)


def shared_rate_bps(direction: str, bandwidth_hz: float, snr, group_size: int):
    """Per-user rate when ``group_size`` users share a band with full-band SNR ``snr``."""
    if group_size < 1:
        raise ValueError("group size must be at least 1")
    snr = np.asarray(snr, dtype=float)
    eff = snr if check_direction(direction) == DL else group_size * snr
    return bandwidth_hz / group_size * np.log1p(eff) / math.log(2.0)


def user_rate_bps(direction: str, band: BandConfig, group_size: int, user, budget: LinkBudget) -> float:
    snr = link_snr(direction, band, user.eta_db[(band.name, direction)], budget)
    return float(shared_rate_bps(direction, band.bandwidth_hz, snr, group_size))


@dataclass(frozen=True)
class RateReport:
    """Per-user rates of one link direction, aligned by position."""

    direction: str
    user_ids: tuple
    band: tuple
    baseline_bps: np.ndarray
    allocated_bps: np.ndarray | None = None

    def __len__(self):
        return len(self.user_ids)

    @property
    def rates(self) -> np.ndarray:
        return self.baseline_bps if self.allocated_bps is None else self.allocated_bps

    def as_dict(self) -> dict:
        alloc = self.allocated_bps
        return {
            uid: {
                "band": b,
                "baseline_bps": float(self.baseline_bps[i]),
                "allocated_bps": None if alloc is None else float(alloc[i]),
            }
            for i, (uid, b) in enumerate(zip(self.user_ids, self.band))
        }


def baseline_rates(direction: str, users, cellular: BandConfig, budget: LinkBudget) -> RateReport:
    """Every user on the cellular band, sharing it with all the others."""
    users = list(users)
    if not users:
        raise ValueError("need at least one user")
    eta = [u.eta_db[(cellular.name, direction)] for u in users]
    snr = link_snr(direction, cellular, eta, budget)
    rates = shared_rate_bps(direction, cellular.bandwidth_hz, snr, len(users))
    return RateReport(
        direction=direction,
        user_ids=tuple(u.id for u in users),
        band=(CELLULAR,) * len(users),
        baseline_bps=np.atleast_1d(rates),
    )


class LowSnrRatios(NamedTuple):
    cc_ratio_exact: float
    cc_ratio_approx: float
    ct_ratio_exact: float
    ct_ratio_approx: float


def lowsnr_ratios(user, sizes, bands: Bands, budget: LinkBudget) -> LowSnrRatios:
    """Uplink rate ratios against the all-cellular baseline, with their low-SNR limits.

    ``sizes`` is ``(n_all, n_cellular, n_tv)``. The approximations assume both
    bands have the same uplink EIRP and bandwidth: staying in the cellular band
    gives ratio 1 and moving to TV gives eta_tv / eta_cellular.
    """
    n_all, n_c, n_t = sizes
    base = user_rate_bps(UL, bands.cellular, n_all, user, budget)
    cc = user_rate_bps(UL, bands.cellular, n_c, user, budget) / base
    ct = user_rate_bps(UL, bands.tv, n_t, user, budget) / base
    eta_ratio = 10.0 ** ((user.eta_db[(bands.tv.name, UL)] - user.eta_db[(bands.cellular.name, UL)]) / 10.0)
    return LowSnrRatios(cc, 1.0, ct, eta_ratio)
