"""Hexagonal three-sector layout, user drops, association and geometry ordering."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .propagation import (
    DIRECTIONS,
    DL,
    AntennaPattern,
    BandConfig,
    Bands,
    SectorPose,
    check_direction,
    link_gain_db,
)

SECTORS_PER_SITE = 3
MIN_DISTANCE_M = 35.0
DEFAULT_CELL_RADIUS_M = 866.0

# Received-power differences below this are treated as ties during association.
_ASSOC_TIE_DB = 1e-9


@dataclass(frozen=True)
class Sector:
    id: int
    site_pos: tuple[float, float]
    azimuth_deg: float
    pattern: AntennaPattern
    height_m: float = 30.0

    @property
    def site(self) -> int:
        return self.id // SECTORS_PER_SITE

    @property
    def pose(self) -> SectorPose:
        return SectorPose(self.site_pos[0], self.site_pos[1], self.azimuth_deg, self.height_m)


@dataclass(frozen=True)
class Layout:
    sites: tuple[tuple[float, float], ...]
    sectors: tuple[Sector, ...]
    cell_radius_m: float

    @property
    def inter_site_distance_m(self) -> float:
        return math.sqrt(3.0) * self.cell_radius_m

    def sector(self, sector_id: int) -> Sector:
        return self.sectors[sector_id]

    def central_sectors(self) -> tuple[Sector, ...]:
        return self.sectors[:SECTORS_PER_SITE]


@dataclass
class UserTerminal:
    id: int
    pos_m: tuple[float, float]
    serving_sector: int
    eta_db: dict = field(default_factory=dict)

    def eta(self, band: str, direction: str) -> float:
        return self.eta_db[(band, direction)]


def _hex_cells(rings: int) -> list[tuple[int, int]]:
    """Axial coordinates of all hex cells within ``rings`` of the origin, ring by ring."""
    cells = []
    for ring in range(rings + 1):
        ring_cells = [
            (q, r)
            for q in range(-ring, ring + 1)
            for r in range(-ring, ring + 1)
            if max(abs(q), abs(r), abs(q + r)) == ring
        ]
        ring_cells.sort(key=_axial_angle)
        cells.extend(ring_cells)
    return cells


def _axial_angle(cell: tuple[int, int]) -> float:
    x, y = _axial_to_xy(cell, 1.0)
    return round(math.atan2(y, x) % (2 * math.pi), 9)


def _axial_to_xy(cell: tuple[int, int], isd: float) -> tuple[float, float]:
    q, r = cell
    c30 = math.cos(math.radians(30.0))
    s30 = math.sin(math.radians(30.0))
    return (isd * q * c30, isd * (q * s30 + r))


def build_layout(
    cell_radius_m: float = DEFAULT_CELL_RADIUS_M,
    rings: int = 0,
    pattern: AntennaPattern | None = None,
    h_base_m: float = 30.0,
) -> Layout:
    """Sites on a hex grid with inter-site distance sqrt(3) * cell radius.

    Site 0 is the central site. Each site has three sectors with boresights at
    0, 120 and 240 degrees.
    """
    if not cell_radius_m > 0:
        raise ValueError("cell radius must be positive")
    if rings < 0:
        raise ValueError("rings must be >= 0")
    pattern = pattern if pattern is not None else AntennaPattern()
    isd = math.sqrt(3.0) * cell_radius_m
    sites = tuple(_axial_to_xy(c, isd) for c in _hex_cells(rings))
    sectors = tuple(
        Sector(
            id=SECTORS_PER_SITE * i + j,
            site_pos=pos,
            azimuth_deg=120.0 * j,
            pattern=pattern,
            height_m=h_base_m,
        )
        for i, pos in enumerate(sites)
        for j in range(SECTORS_PER_SITE)
    )
    return Layout(sites=sites, sectors=sectors, cell_radius_m=float(cell_radius_m))


def _user_xy(user):
    return user.pos_m if hasattr(user, "pos_m") else user


def associate_user(user, layout: Layout, cellular: BandConfig, h_mobile_m: float = 2.0) -> int:
    """Sector with the strongest downlink cellular received power; ties go to the lowest id."""
    if not layout.sectors:
        raise ValueError("layout has no sectors")
    pos = _user_xy(user)
    rx = [
        cellular.p_dl_dbm + link_gain_db(cellular, s.pattern, s.pose, pos, DL, h_mobile_m)
        for s in layout.sectors
    ]
    best = max(rx)
    return next(s.id for s, p in zip(layout.sectors, rx) if p >= best - _ASSOC_TIE_DB)


def place_user(
    layout: Layout,
    uid: int,
    pos_m,
    bands: Bands,
    h_mobile_m: float = 2.0,
    serving_sector: int | None = None,
) -> UserTerminal:
    """Create a user at ``pos_m``, associate it and fill in its four link gains."""
    pos = (float(pos_m[0]), float(pos_m[1]))
    if serving_sector is None:
        serving_sector = associate_user(pos, layout, bands.cellular, h_mobile_m)
    sector = layout.sector(serving_sector)
    eta = {
        (band.name, d): link_gain_db(band, sector.pattern, sector.pose, pos, d, h_mobile_m)
        for band in bands
        for d in DIRECTIONS
    }
    return UserTerminal(id=uid, pos_m=pos, serving_sector=serving_sector, eta_db=eta)


def sample_sector_positions(
    rng: np.random.Generator,
    sector: Sector,
    cell_radius_m: float,
    n: int,
    min_distance_m: float = MIN_DISTANCE_M,
) -> np.ndarray:
    """Uniform positions over the sector's rhombic third of the site hexagon.

    The rhombus is spanned by two edges of length R at boresight -/+ 60 deg;
    points closer than ``min_distance_m`` to the site are rejected.
    """
    theta = math.radians(sector.azimuth_deg)
    v1 = cell_radius_m * np.array([math.cos(theta - math.pi / 3), math.sin(theta - math.pi / 3)])
    v2 = cell_radius_m * np.array([math.cos(theta + math.pi / 3), math.sin(theta + math.pi / 3)])
    out = np.empty((0, 2))
    while len(out) < n:
        ab = rng.random((n, 2))
        pts = ab[:, :1] * v1 + ab[:, 1:] * v2
        pts = pts[np.hypot(pts[:, 0], pts[:, 1]) >= min_distance_m]
        out = np.concatenate([out, pts])
    return out[:n] + np.asarray(sector.site_pos)


def drop_users(
    layout: Layout,
    n: int,
    rng_seed: int,
    bands: Bands,
    h_mobile_m: float = 2.0,
    min_distance_m: float = MIN_DISTANCE_M,
) -> list[UserTerminal]:
    """Drop ``n`` users uniformly into each sector of the central site.

    Users get consecutive ids, sector by sector, and are associated to the
    best sector of the whole layout.
    """
    if n < 1:
        raise ValueError("need at least one user per sector")
    rng = np.random.default_rng(rng_seed)
    users = []
    for sector in layout.central_sectors():
        for pos in sample_sector_positions(rng, sector, layout.cell_radius_m, n, min_distance_m):
            users.append(place_user(layout, len(users), pos, bands, h_mobile_m))
    return users


def drop_sector_users(
    layout: Layout,
    sector_id: int,
    n: int,
    rng_seed: int,
    bands: Bands,
    h_mobile_m: float = 2.0,
    min_distance_m: float = MIN_DISTANCE_M,
) -> list[UserTerminal]:
    """Exactly ``n`` users dropped in one sector's wedge and served by that sector."""
    if n < 1:
        raise ValueError("need at least one user")
    rng = np.random.default_rng(rng_seed)
    sector = layout.sector(sector_id)
    positions = sample_sector_positions(rng, sector, layout.cell_radius_m, n, min_distance_m)
    return [place_user(layout, i, pos, bands, h_mobile_m, serving_sector=sector_id) for i, pos in enumerate(positions)]


def geometry_order(users, cellular: BandConfig, direction: str) -> list[int]:
    """User ids from highest to lowest serving-link cellular gain (ties: lower id first)."""
    check_direction(direction)
    if len({u.serving_sector for u in users}) > 1:
        raise ValueError("geometry ordering needs users of a single serving sector")
    key = (cellular.name, direction)
    return [u.id for u in sorted(users, key=lambda u: (-u.eta_db[key], u.id))]


def group_by_sector(users) -> dict[int, list[UserTerminal]]:
    groups: dict[int, list[UserTerminal]] = {}
    for u in users:
        groups.setdefault(u.serving_sector, []).append(u)
    return dict(sorted(groups.items()))
