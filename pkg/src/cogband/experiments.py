"""Verification harnesses: exchange-inequality trials and the greedy-vs-exhaustive oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .allocation import (
    allocate_exhaustive,
    allocate_first_decrease,
    allocate_prefix_scan,
    exchange_compare,
    snr_offset_db,
    uplink_tv_dominates,
)
from .netmodel import build_layout, drop_sector_users
from .propagation import DL, check_direction
from .simkit import SimConfig, drop_seed

EXCHANGE_RTOL = 1e-12
PF_MATCH_RTOL = 1e-9


@dataclass
class LemmaReport:
    link: str
    trials: int
    checked: int = 0
    excluded: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "link": self.link,
            "trials": self.trials,
            "checked": self.checked,
            "excluded": self.excluded,
            "violations": len(self.violations),
            "violation_records": self.violations,
        }


def _ordered(u1, u2, cellular_name: str):
    key = (cellular_name, DL)
    return (u1, u2) if u1.eta_db[key] >= u2.eta_db[key] else (u2, u1)


def verify_lemma(link: str, trials: int, seed: int, config: SimConfig | None = None, max_users: int = 30) -> LemmaReport:
    """Check the pairwise exchange inequality on random user pairs.

    Downlink: moving the higher-geometry user must not lose whenever both
    users see a lower TV SNR than cellular SNR. Uplink: moving the
    lower-geometry user must not lose whenever the size-scaled TV SNR beats
    the size-scaled cellular SNR for both users. Pairs outside the
    precondition are counted as excluded.
    """
    check_direction(link)
    config = config if config is not None else SimConfig()
    layout = build_layout(config.cell_radius_m, 0, config.pattern, config.h_base_m)
    rng = np.random.default_rng(seed)
    # Each trial gets its own two freshly dropped users.
    pool = drop_sector_users(
        layout, 0, 2 * trials, drop_seed(seed, 0), config.bands, config.h_mobile_m, config.min_distance_m
    )
    report = LemmaReport(link, trials)
    for t in range(trials):
        u1, u2 = _ordered(pool[2 * t], pool[2 * t + 1], config.cellular.name)
        n_all = int(rng.integers(2, max_users + 1))
        n_t = int(rng.integers(0, n_all - 1))
        n_c = n_all - n_t
        if link == DL:
            holds = all(snr_offset_db(u, DL, config.bands, config.budget) < 0 for u in (u1, u2))
        else:
            holds = all(uplink_tv_dominates(u, n_t, n_c, config.bands, config.budget) for u in (u1, u2))
        if not holds:
            report.excluded += 1
            continue
        report.checked += 1
        m = exchange_compare(u1, u2, (n_t, n_c), link, config.bands, config.budget)
        winner, loser = (m.metric_scheme1, m.metric_scheme2) if link == DL else (m.metric_scheme2, m.metric_scheme1)
        if winner < loser * (1.0 - EXCHANGE_RTOL):
            report.violations.append(
                {
                    "trial": t,
                    "sizes": [n_t, n_c],
                    "eta_cellular_db": [u1.eta_db[(config.cellular.name, link)], u2.eta_db[(config.cellular.name, link)]],
                    "metric_scheme1": m.metric_scheme1,
                    "metric_scheme2": m.metric_scheme2,
                }
            )
    return report


@dataclass
class OracleReport:
    link: str
    users: int
    trials: int
    greedy_matches: int = 0
    scan_matches: int = 0
    contiguous_optima: int = 0
    worst_greedy_gap: float = 0.0
    worst_scan_gap: float = 0.0
    mismatches: list = field(default_factory=list)

    @property
    def match_rate(self) -> float:
        return self.greedy_matches / self.trials

    @property
    def scan_match_rate(self) -> float:
        return self.scan_matches / self.trials

    def as_dict(self) -> dict:
        return {
            "link": self.link,
            "users": self.users,
            "trials": self.trials,
            "match_rate": self.match_rate,
            "scan_match_rate": self.scan_match_rate,
            "contiguous_optimum_rate": self.contiguous_optima / self.trials,
            "worst_pf_gap": self.worst_greedy_gap,
            "worst_scan_pf_gap": self.worst_scan_gap,
            "mismatches": self.mismatches,
        }


def run_oracle(link: str, users: int, trials: int, seed: int, config: SimConfig | None = None) -> OracleReport:
    """Compare first-decrease and prefix-scan against exhaustive search on random sectors.

    Gaps are exhaustive PF minus heuristic PF (never negative for a correct oracle).
    """
    check_direction(link)
    config = config if config is not None else SimConfig()
    layout = build_layout(config.cell_radius_m, 0, config.pattern, config.h_base_m)
    report = OracleReport(link, users, trials)
    for t in range(trials):
        sector_users = drop_sector_users(
            layout, 0, users, drop_seed(seed, t), config.bands, config.h_mobile_m, config.min_distance_m
        )
        best = allocate_exhaustive(link, sector_users, config.bands, config.budget)
        greedy = allocate_first_decrease(link, sector_users, config.bands, config.budget)
        scan = allocate_prefix_scan(link, sector_users, config.bands, config.budget)
        tol = PF_MATCH_RTOL * abs(best.pf_value)
        g_gap = best.pf_value - greedy.pf_value
        s_gap = best.pf_value - scan.pf_value
        report.greedy_matches += g_gap <= tol
        report.scan_matches += s_gap <= tol
        report.contiguous_optima += best.is_prefix if link == DL else best.is_suffix
        report.worst_greedy_gap = max(report.worst_greedy_gap, g_gap)
        report.worst_scan_gap = max(report.worst_scan_gap, s_gap)
        if g_gap > tol or s_gap > tol:
            report.mismatches.append(
                {"trial": t, "exhaustive_k": best.k, "greedy_k": greedy.k, "scan_k": scan.k, "gap": g_gap}
            )
    return report
