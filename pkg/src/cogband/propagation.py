"""Path-loss models, sector antenna pattern and per-link power gains.

All quantities are in dB unless a name says otherwise. Distances passed to the
path-loss models are horizontal distances in km.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

DL = "dl"
UL = "ul"
DIRECTIONS = (DL, UL)

COST231 = "cost231"
HATA = "hata"

# Nominal frequency ranges (MHz) of the two urban models.
MODEL_FREQ_RANGE = {
    HATA: (150.0, 1500.0),
    COST231: (1500.0, 2000.0),
}


def check_direction(direction: str) -> str:
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    return direction


def _check_inputs(model: str, freq_mhz: float, h_base_m: float, h_mobile_m: float, d_km: float) -> None:
    lo, hi = MODEL_FREQ_RANGE[model]
    if not lo <= freq_mhz <= hi:
        raise ValueError(f"{model}: frequency {freq_mhz} MHz outside [{lo}, {hi}] MHz")
    if not 30.0 <= h_base_m <= 200.0:
        raise ValueError(f"{model}: base height {h_base_m} m outside [30, 200] m")
    if not 1.0 <= h_mobile_m <= 10.0:
        raise ValueError(f"{model}: mobile height {h_mobile_m} m outside [1, 10] m")
    if not d_km > 0.0:
        raise ValueError(f"{model}: distance must be positive, got {d_km} km")


def mobile_height_correction_db(freq_mhz: float, h_mobile_m: float) -> float:
    """Small/medium-city mobile antenna height correction a(h_m)."""
    lf = math.log10(freq_mhz)
    return (1.1 * lf - 0.7) * h_mobile_m - (1.56 * lf - 0.8)


def distance_slope_db(h_base_m: float) -> float:
    """Path-loss slope in dB per decade of distance, shared by both models."""
    return 44.9 - 6.55 * math.log10(h_base_m)


def hata_path_loss_db(freq_mhz: float, h_base_m: float, h_mobile_m: float, d_km: float) -> float:
    """Urban Okumura-Hata path loss (150-1500 MHz)."""
    _check_inputs(HATA, freq_mhz, h_base_m, h_mobile_m, d_km)
    return (
        69.55
        + 26.16 * math.log10(freq_mhz)
        - 13.82 * math.log10(h_base_m)
        - mobile_height_correction_db(freq_mhz, h_mobile_m)
        + distance_slope_db(h_base_m) * math.log10(d_km)
    )


def cost231_path_loss_db(
    freq_mhz: float,
    h_base_m: float,
    h_mobile_m: float,
    d_km: float,
    c_m_db: float = 0.0,
) -> float:
    """COST-231 Hata extension (1500-2000 MHz).

    ``c_m_db`` is the city-size correction: 0 dB for medium cities and
    suburban areas, 3 dB for metropolitan centres.
    """
    _check_inputs(COST231, freq_mhz, h_base_m, h_mobile_m, d_km)
    return (
        46.3
        + 33.9 * math.log10(freq_mhz)
        - 13.82 * math.log10(h_base_m)
        - mobile_height_correction_db(freq_mhz, h_mobile_m)
        + distance_slope_db(h_base_m) * math.log10(d_km)
        + c_m_db
    )


_PATH_LOSS = {HATA: hata_path_loss_db, COST231: cost231_path_loss_db}


def path_loss_db(model: str, freq_mhz: float, h_base_m: float, h_mobile_m: float, d_km: float) -> float:
    try:
        fn = _PATH_LOSS[model]
    except KeyError:
        raise ValueError(f"unknown propagation model {model!r}") from None
    return fn(freq_mhz, h_base_m, h_mobile_m, d_km)


@dataclass(frozen=True)
class AntennaPattern:
    """Quadratic-rolloff sector pattern with separate horizontal/vertical cuts.

    With ``enabled=False`` the pattern is omnidirectional (rolloff 0 dB everywhere).
    """

    horiz_3db_deg: float = 70.0
    front_to_back_db: float = 25.0
    vert_3db_deg: float = 10.0
    downtilt_deg: float = 6.0
    sla_v_db: float = 20.0
    enabled: bool = True

    def __post_init__(self):
        if self.horiz_3db_deg <= 0 or self.vert_3db_deg <= 0:
            raise ValueError("antenna beamwidths must be positive")
        if self.front_to_back_db < 0 or self.sla_v_db < 0:
            raise ValueError("antenna attenuation caps must be non-negative")


OMNI = AntennaPattern(enabled=False)


def wrap_angle_deg(angle: float) -> float:
    """Wrap an angle to [-180, 180)."""
    return (angle + 180.0) % 360.0 - 180.0


def pattern_rolloff_db(pattern: AntennaPattern, azimuth_off_deg: float, elevation_deg: float) -> float:
    """Gain relative to boresight peak (always <= 0 dB).

    ``elevation_deg`` is measured from the horizontal, positive downward.
    """
    if not pattern.enabled:
        return 0.0
    az = wrap_angle_deg(azimuth_off_deg)
    el = min(max(elevation_deg, -90.0), 90.0)
    a_h = -min(12.0 * (az / pattern.horiz_3db_deg) ** 2, pattern.front_to_back_db)
    a_v = -min(12.0 * ((el - pattern.downtilt_deg) / pattern.vert_3db_deg) ** 2, pattern.sla_v_db)
    return -min(-(a_h + a_v), pattern.front_to_back_db) + 0.0  # no -0.0 at boresight


@dataclass(frozen=True)
class BandConfig:
    """One radio band. Powers in dBm, gains in dBi."""

    name: str
    freq_mhz: float
    bandwidth_hz: float
    model: str
    base_power_dbm: float
    base_peak_gain_dbi: float
    mobile_power_dbm: float
    mobile_gain_dbi: float

    def __post_init__(self):
        if self.model not in MODEL_FREQ_RANGE:
            raise ValueError(f"unknown propagation model {self.model!r}")
        lo, hi = MODEL_FREQ_RANGE[self.model]
        if not lo <= self.freq_mhz <= hi:
            raise ValueError(f"{self.name}: {self.model} needs frequency in [{lo}, {hi}] MHz, got {self.freq_mhz}")
        if not self.bandwidth_hz > 0:
            raise ValueError(f"{self.name}: bandwidth must be positive")
        powers = (self.base_power_dbm, self.base_peak_gain_dbi, self.mobile_power_dbm, self.mobile_gain_dbi)
        if not all(math.isfinite(p) for p in powers):
            raise ValueError(f"{self.name}: powers and gains must be finite")

    @property
    def p_dl_dbm(self) -> float:
        """Downlink EIRP: base power plus base peak antenna gain."""
        return self.base_power_dbm + self.base_peak_gain_dbi

    @property
    def p_ul_dbm(self) -> float:
        """Uplink EIRP: mobile power plus mobile antenna gain."""
        return self.mobile_power_dbm + self.mobile_gain_dbi

    def p_eff_dbm(self, direction: str) -> float:
        return self.p_dl_dbm if check_direction(direction) == DL else self.p_ul_dbm

    def path_loss_db(self, h_base_m: float, h_mobile_m: float, d_km: float) -> float:
        return path_loss_db(self.model, self.freq_mhz, h_base_m, h_mobile_m, d_km)


def cellular_band(**overrides) -> BandConfig:
    """2 GHz licensed band with default parameters."""
    params = dict(
        name="cellular",
        freq_mhz=2000.0,
        bandwidth_hz=5e6,
        model=COST231,
        base_power_dbm=42.0,
        base_peak_gain_dbi=17.0,
        mobile_power_dbm=20.0,
        mobile_gain_dbi=0.0,
    )
    params.update(overrides)
    return BandConfig(**params)


def tv_band(**overrides) -> BandConfig:
    """600 MHz TV white-space band with default parameters."""
    params = dict(
        name="tv",
        freq_mhz=600.0,
        bandwidth_hz=5e6,
        model=HATA,
        base_power_dbm=30.0,
        base_peak_gain_dbi=6.0,
        mobile_power_dbm=23.0,
        mobile_gain_dbi=-3.0,
    )
    params.update(overrides)
    return BandConfig(**params)


@dataclass(frozen=True)
class Bands:
    cellular: BandConfig
    tv: BandConfig

    def __iter__(self):
        return iter((self.cellular, self.tv))


def default_bands() -> Bands:
    return Bands(cellular_band(), tv_band())


class SectorPose(NamedTuple):
    x_m: float
    y_m: float
    azimuth_deg: float
    height_m: float = 30.0


def geometry_angles(pose: SectorPose, user_pos, h_mobile_m: float) -> tuple[float, float, float]:
    """Horizontal distance (m), azimuth offset from boresight and elevation (deg)."""
    dx = user_pos[0] - pose.x_m
    dy = user_pos[1] - pose.y_m
    d_m = math.hypot(dx, dy)
    if d_m == 0.0:
        raise ValueError("user is co-located with the base station")
    az_off = wrap_angle_deg(math.degrees(math.atan2(dy, dx)) - pose.azimuth_deg)
    elev = math.degrees(math.atan2(pose.height_m - h_mobile_m, d_m))
    return d_m, az_off, elev


def link_gain_db(
    band: BandConfig,
    pattern: AntennaPattern,
    sector_pose: SectorPose,
    user_pos,
    direction: str,
    h_mobile_m: float = 2.0,
) -> float:
    """Link power gain eta in dB for one (band, direction).

    The transmitter's own antenna gain lives in its EIRP, so the downlink
    gain carries the mobile gain and the uplink gain carries the base peak
    gain. Path loss and pattern rolloff are reciprocal.
    """
    check_direction(direction)
    d_m, az_off, elev = geometry_angles(sector_pose, user_pos, h_mobile_m)
    pl = band.path_loss_db(sector_pose.height_m, h_mobile_m, d_m / 1000.0)
    rx_gain = band.mobile_gain_dbi if direction == DL else band.base_peak_gain_dbi
    return -pl + pattern_rolloff_db(pattern, az_off, elev) + rx_gain
