"""Proportional-fair split of one sector's users between the cellular and TV bands.

Users are handled in geometry order (index 0 = strongest cellular link). On
the downlink the candidate TV sets are the top-k users, on the uplink the
bottom-k users. Three allocators are provided:

* ``allocate_prefix_scan`` evaluates every k and takes the best (default);
* ``allocate_first_decrease`` moves users one at a time and stops at the
  first PF decrease;
* ``allocate_exhaustive`` enumerates all 2^N subsets and serves as the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .netmodel import geometry_order
from .propagation import DL, UL, Bands, check_direction
from .rates import CELLULAR, TV, LinkBudget, RateReport, link_snr, shared_rate_bps

EXHAUSTIVE_MAX_USERS = 20
# PF values this close (relative) are ties, resolved by smaller k then lexicographic subset.
PF_TIE_RTOL = 1e-12
_CHUNK = 1 << 15


def pf_metric(rates) -> float:
    """Sum of natural logs of the rates; 0 for an empty list."""
    rates = np.asarray(rates, dtype=float)
    if rates.size == 0:
        return 0.0
    if np.any(~(rates > 0)):
        raise ValueError("proportional-fair metric needs strictly positive rates")
    return float(np.sum(np.log(rates)))


@dataclass(frozen=True)
class Allocation:
    direction: str
    ordering: tuple
    k: int
    tv_set: tuple
    cellular_set: tuple
    pf_value: float
    report: RateReport
    pf_by_k: tuple | None = None

    @property
    def is_prefix(self) -> bool:
        """True when the TV set is the top-k of the geometry ordering."""
        return set(self.tv_set) == set(self.ordering[: self.k])

    @property
    def is_suffix(self) -> bool:
        return set(self.tv_set) == set(self.ordering[len(self.ordering) - self.k :])


class SplitTables:
    """Log-rate tables of one sector in geometry order.

    ``log_cell[i, m]`` and ``log_tv[i, m]`` hold ln(rate) of the i-th user
    when ``m`` users share the band (column 0 is unused).
    """

    def __init__(self, direction: str, users, bands: Bands, budget: LinkBudget):
        self.direction = check_direction(direction)
        users = list(users)
        if not users:
            raise ValueError("need at least one user")
        by_id = {u.id: u for u in users}
        self.ordering = tuple(geometry_order(users, bands.cellular, direction))
        self.users = [by_id[i] for i in self.ordering]
        self.n = n = len(users)
        self.bands = bands
        self.budget = budget
        self.snr_cell = self._snr(bands.cellular)
        self.snr_tv = self._snr(bands.tv)
        self.log_cell = np.full((n, n + 1), np.nan)
        self.log_tv = np.full((n, n + 1), np.nan)
        for m in range(1, n + 1):
            self.log_cell[:, m] = np.log(shared_rate_bps(direction, bands.cellular.bandwidth_hz, self.snr_cell, m))
            self.log_tv[:, m] = np.log(shared_rate_bps(direction, bands.tv.bandwidth_hz, self.snr_tv, m))

    def _snr(self, band):
        eta = [u.eta_db[(band.name, self.direction)] for u in self.users]
        return np.atleast_1d(link_snr(self.direction, band, eta, self.budget))

    def contiguous_mask(self, k: int) -> np.ndarray:
        """TV membership of the direction's candidate set of size k."""
        if not 0 <= k <= self.n:
            raise ValueError(f"k must lie in [0, {self.n}], got {k}")
        mask = np.zeros(self.n, dtype=bool)
        if self.direction == DL:
            mask[:k] = True
        elif k:
            mask[-k:] = True
        return mask

    def pf_masks(self, masks: np.ndarray) -> np.ndarray:
        """PF values for a batch of boolean TV-membership rows."""
        masks = np.atleast_2d(masks)
        k = masks.sum(axis=1)
        with np.errstate(invalid="ignore"):
            vals = np.where(masks, self.log_tv.T[k], self.log_cell.T[self.n - k])
        return vals.sum(axis=1)

    def pf_by_k(self) -> np.ndarray:
        return self.pf_masks(np.array([self.contiguous_mask(k) for k in range(self.n + 1)]))

    def report(self, mask: np.ndarray) -> RateReport:
        k = int(mask.sum())
        baseline = shared_rate_bps(self.direction, self.bands.cellular.bandwidth_hz, self.snr_cell, self.n)
        allocated = np.empty(self.n)
        if k:
            allocated[mask] = shared_rate_bps(self.direction, self.bands.tv.bandwidth_hz, self.snr_tv[mask], k)
        if k < self.n:
            allocated[~mask] = shared_rate_bps(
                self.direction, self.bands.cellular.bandwidth_hz, self.snr_cell[~mask], self.n - k
            )
        return RateReport(
            direction=self.direction,
            user_ids=self.ordering,
            band=tuple(TV if m else CELLULAR for m in mask),
            baseline_bps=np.atleast_1d(baseline),
            allocated_bps=allocated,
        )

    def allocation(self, mask: np.ndarray, pf_by_k=None) -> Allocation:
        mask = np.asarray(mask, dtype=bool)
        report = self.report(mask)
        return Allocation(
            direction=self.direction,
            ordering=self.ordering,
            k=int(mask.sum()),
            tv_set=tuple(u for u, m in zip(self.ordering, mask) if m),
            cellular_set=tuple(u for u, m in zip(self.ordering, mask) if not m),
            pf_value=pf_metric(report.allocated_bps),
            report=report,
            pf_by_k=None if pf_by_k is None else tuple(float(v) for v in pf_by_k),
        )


def _ties(values: np.ndarray) -> np.ndarray:
    best = np.max(values)
    return values >= best - PF_TIE_RTOL * abs(best)


def partition_rates(direction: str, ordering, k: int, users, bands: Bands, budget: LinkBudget) -> RateReport:
    """Rates when the direction's k candidates of ``ordering`` use the TV band.

    Downlink moves the first k users of ``ordering``, uplink the last k.
    The report lists users in ``ordering`` order.
    """
    check_direction(direction)
    ordering = list(ordering)
    n = len(ordering)
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    by_id = {u.id: u for u in users}
    tv_ids = set(ordering[:k] if direction == DL else ordering[n - k :])

    def snr(band, ids):
        return np.atleast_1d(link_snr(direction, band, [by_id[i].eta_db[(band.name, direction)] for i in ids], budget))

    baseline = shared_rate_bps(direction, bands.cellular.bandwidth_hz, snr(bands.cellular, ordering), n)
    allocated = np.empty(n)
    tv_pos = [i for i, u in enumerate(ordering) if u in tv_ids]
    cell_pos = [i for i, u in enumerate(ordering) if u not in tv_ids]
    if tv_pos:
        allocated[tv_pos] = shared_rate_bps(
            direction, bands.tv.bandwidth_hz, snr(bands.tv, [ordering[i] for i in tv_pos]), len(tv_pos)
        )
    if cell_pos:
        allocated[cell_pos] = shared_rate_bps(
            direction, bands.cellular.bandwidth_hz, snr(bands.cellular, [ordering[i] for i in cell_pos]), len(cell_pos)
        )
    return RateReport(
        direction=direction,
        user_ids=tuple(ordering),
        band=tuple(TV if u in tv_ids else CELLULAR for u in ordering),
        baseline_bps=np.atleast_1d(baseline),
        allocated_bps=allocated,
    )


def allocate_prefix_scan(direction: str, users, bands: Bands, budget: LinkBudget) -> Allocation:
    """Best contiguous split over all k in 0..N; ties go to the smaller k."""
    tables = SplitTables(direction, users, bands, budget)
    pf = tables.pf_by_k()
    k = int(np.argmax(_ties(pf)))
    return tables.allocation(tables.contiguous_mask(k), pf)


def allocate_first_decrease(direction: str, users, bands: Bands, budget: LinkBudget) -> Allocation:
    """Move candidates to TV one by one while the PF metric strictly increases."""
    tables = SplitTables(direction, users, bands, budget)
    pf = tables.pf_by_k()
    k = 0
    while k < tables.n and pf[k + 1] > pf[k]:
        k += 1
    return tables.allocation(tables.contiguous_mask(k), pf)


def allocate_exhaustive(direction: str, users, bands: Bands, budget: LinkBudget) -> Allocation:
    """Enumerate every TV subset. Ties: smaller k, then lexicographically smallest positions."""
    tables = SplitTables(direction, users, bands, budget)
    n = tables.n
    if n > EXHAUSTIVE_MAX_USERS:
        raise ValueError(f"exhaustive search limited to {EXHAUSTIVE_MAX_USERS} users, got {n}")
    bit = np.arange(n)
    best = -math.inf
    cand_masks, cand_pf = [], []
    for start in range(0, 1 << n, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, 1 << n))
        masks = ((codes[:, None] >> bit) & 1).astype(bool)
        pf = tables.pf_masks(masks)
        chunk_best = float(pf.max())
        if chunk_best > best:
            best = chunk_best
        keep = pf >= best - PF_TIE_RTOL * abs(best)
        cand_masks.append(masks[keep])
        cand_pf.append(pf[keep])
    masks = np.concatenate(cand_masks)
    pf = np.concatenate(cand_pf)
    masks = masks[_ties(pf)]
    winner = min(masks, key=lambda m: (int(m.sum()), tuple(np.flatnonzero(m))))
    return tables.allocation(winner)


ALLOCATORS = {
    "prefix_scan": allocate_prefix_scan,
    "first_decrease": allocate_first_decrease,
    "exhaustive": allocate_exhaustive,
}


class ExchangeMetrics(NamedTuple):
    metric_scheme1: float
    metric_scheme2: float


def exchange_compare(u1, u2, fixed_sizes, direction: str, bands: Bands, budget: LinkBudget) -> ExchangeMetrics:
    """Terms that separate moving ``u1`` (scheme 1) or ``u2`` (scheme 2) to the TV band.

    ``u1`` must have the higher cellular gain. ``fixed_sizes`` is
    ``(n_tv, n_cellular)`` before the move; only the uplink uses them, as the
    SNR multipliers n_tv + 1 and n_cellular - 1.
    """
    check_direction(direction)
    n_t, n_c = fixed_sizes
    key = (bands.cellular.name, direction)
    if u1.eta_db[key] < u2.eta_db[key]:
        raise ValueError("u1 must be the higher-geometry user")
    if direction == UL and n_c < 1:
        raise ValueError("uplink exchange needs at least one cellular user")
    scale_t, scale_c = (1, 1) if direction == DL else (n_t + 1, n_c - 1)

    def se(band, user, scale):
        snr = float(link_snr(direction, band, user.eta_db[(band.name, direction)], budget))
        return math.log1p(scale * snr) / math.log(2.0)

    s1 = se(bands.tv, u1, scale_t) * se(bands.cellular, u2, scale_c)
    s2 = se(bands.tv, u2, scale_t) * se(bands.cellular, u1, scale_c)
    return ExchangeMetrics(s1, s2)


def snr_offset_db(user, direction: str, bands: Bands, budget: LinkBudget) -> float:
    """TV-minus-cellular full-band SNR of one user, in dB.

    On the downlink with equal bandwidths and noise this is the EIRP-plus-gain
    offset (TV minus cellular); negative values favour sending high-geometry
    users to TV.
    """
    snr_t = float(link_snr(direction, bands.tv, user.eta_db[(bands.tv.name, direction)], budget))
    snr_c = float(link_snr(direction, bands.cellular, user.eta_db[(bands.cellular.name, direction)], budget))
    return 10.0 * math.log10(snr_t / snr_c)


def uplink_tv_dominates(user, n_tv: int, n_cell: int, bands: Bands, budget: LinkBudget) -> bool:
    """Whether (n_tv+1)*SNR_tv exceeds (n_cell-1)*SNR_cell for this user."""
    snr_t = float(link_snr(UL, bands.tv, user.eta_db[(bands.tv.name, UL)], budget))
    snr_c = float(link_snr(UL, bands.cellular, user.eta_db[(bands.cellular.name, UL)], budget))
    return (n_tv + 1) * snr_t > (n_cell - 1) * snr_c
