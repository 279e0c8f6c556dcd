"""Dual-strip urban scenario: geometry, link-kind assignment, channel matrix.

Two parallel strips of apartments sit at the macrocell edge with a street
between them. One FBS occupies the center of each apartment and serves an
FUE placed uniformly at random near it; the MUE stands in the street.
Geometry is fully determined by the configuration seed, and activating more
femtocells never moves the ones already placed.
"""

import json
import math
from dataclasses import dataclass, field, asdict, replace

import numpy as np

from .channel import ChannelMatrix, LinkKind, NoiseModel, gain_linear, pathloss_db

__all__ = [
    "ScenarioConfig",
    "Scenario",
    "build_scenario",
    "ring_index",
    "density_fbs_per_km2",
    "scenario_to_json",
    "scenario_from_json",
]

SCENARIO_SCHEMA_VERSION = 1

# Footprint margin calibrated so one active femtocell in the default block
# reports 600 FBS/km^2 and ten report 6000.
FOOTPRINT_MARGIN = 10.0 / 9.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Geometry, power grid, QoS thresholds and noise for one scenario."""

    macro_radius_m: float = 350.0
    block_distance_m: float = 350.0
    apartment_size_m: float = 10.0
    apartments_per_strip: int = 5
    strips: int = 2
    street_width_m: float = 10.0
    fue_max_dist_m: float = 5.0
    mbs_power_dbm: float = 33.0
    fbs_pmin_dbm: float = 5.0
    fbs_pmax_dbm: float = 15.0
    fbs_step_db: float = 1.0
    mue_rate_min: float = 4.0
    fue_rate_min: float = 0.5
    ring_radii_mue_m: tuple = (17.5, 22.5, 45.0)
    ring_radii_mbs_m: tuple = (50.0, 150.0, 400.0)
    wall_loss_db: float = 20.0
    # MUE offset from the street centroid, meters.
    mue_offset_m: tuple = (0.0, 0.0)
    noise: NoiseModel = field(default_factory=NoiseModel)
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.fbs_pmin_dbm <= self.fbs_pmax_dbm:
            raise ValueError("need 0 < pmin <= pmax")
        span = (self.fbs_pmax_dbm - self.fbs_pmin_dbm) / self.fbs_step_db
        if abs(span - round(span)) > 1e-9:
            raise ValueError("power step must divide the pmin..pmax range exactly")
        for radii in (self.ring_radii_mue_m, self.ring_radii_mbs_m):
            r = tuple(float(x) for x in radii)
            if len(r) == 0 or any(x <= 0 for x in r) or any(b <= a for a, b in zip(r, r[1:])):
                raise ValueError(f"ring radii must be positive and strictly increasing: {radii}")
        if self.apartments_per_strip < 1 or self.strips < 1:
            raise ValueError("need at least one apartment and one strip")
        object.__setattr__(self, "ring_radii_mue_m", tuple(float(x) for x in self.ring_radii_mue_m))
        object.__setattr__(self, "ring_radii_mbs_m", tuple(float(x) for x in self.ring_radii_mbs_m))
        object.__setattr__(self, "mue_offset_m", tuple(float(x) for x in self.mue_offset_m))

    @property
    def n_apartments(self) -> int:
        return self.apartments_per_strip * self.strips

    @property
    def mbs_power_w(self) -> float:
        return dbm_to_watts(self.mbs_power_dbm)

    @property
    def mue_sinr_min(self) -> float:
        """Linear SINR threshold equivalent to the MUE rate requirement."""
        return 2.0 ** self.mue_rate_min - 1.0

    @property
    def fue_sinr_min(self) -> float:
        return 2.0 ** self.fue_rate_min - 1.0

    @property
    def noise_w(self) -> float:
        return self.noise.power_watts


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class Scenario:
    """One concrete network realization with ``k_active`` femtocells."""

    config: ScenarioConfig
    k_active: int
    mbs_pos: np.ndarray
    mue_pos: np.ndarray
    fbs_pos: np.ndarray          # (K, 2), activation order
    fue_pos: np.ndarray          # (K, 2)
    fbs_strip: np.ndarray        # (K,) strip index of each active FBS
    apartment_index: np.ndarray  # (K,) which apartment each active FBS occupies
    channel: ChannelMatrix

    @property
    def dist_fbs_mue(self) -> np.ndarray:
        return np.linalg.norm(self.fbs_pos - self.mue_pos, axis=1)

    @property
    def dist_fbs_mbs(self) -> np.ndarray:
        return np.linalg.norm(self.fbs_pos - self.mbs_pos, axis=1)


def ring_index(dist_m: float, radii) -> int:
    """Index of the concentric ring containing a point at ``dist_m``.

    Returns 0 inside the first radius, j when radii[j-1] < dist <= radii[j],
    and len(radii) beyond the outermost ring. Boundary points belong to the
    inner region.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0:
        raise ValueError("ring radii list must be non-empty")
    if dist_m < 0.0:
        raise ValueError(f"distance must be non-negative, got {dist_m}")
    return int(np.searchsorted(radii, dist_m, side="left"))


def _apartment_centers(cfg: ScenarioConfig) -> tuple[np.ndarray, np.ndarray]:
    """Centers of every apartment (local frame, street centroid at origin)."""
    apt = cfg.apartment_size_m
    width = cfg.apartments_per_strip * apt
    height = cfg.strips * apt + (cfg.strips - 1) * cfg.street_width_m
    centers = []
    strip_of = []
    for s in range(cfg.strips):
        y = -height / 2.0 + s * (apt + cfg.street_width_m) + apt / 2.0
        for i in range(cfg.apartments_per_strip):
            centers.append((-width / 2.0 + (i + 0.5) * apt, y))
            strip_of.append(s)
    return np.asarray(centers), np.asarray(strip_of)


def _draw_fue_offsets(cfg: ScenarioConfig, rng: np.random.Generator) -> np.ndarray:
    """Uniform draws in the disc of radius fue_max_dist, clipped to stay
    inside the apartment (rejection only needed when the disc pokes out)."""
    half = cfg.apartment_size_m / 2.0
    n = cfg.n_apartments
    out = np.empty((n, 2))
    for i in range(n):
        while True:
            r = cfg.fue_max_dist_m * math.sqrt(rng.random())
            theta = 2.0 * math.pi * rng.random()
            x, y = r * math.cos(theta), r * math.sin(theta)
            if abs(x) <= half and abs(y) <= half:
                out[i] = (x, y)
                break
    return out


def link_kind(tx: int, rx: int, fbs_strip: np.ndarray) -> LinkKind:
    """Link model for transmitter ``tx`` to receiver ``rx`` (0 = macro pair)."""
    if tx == 0:
        return LinkKind.MBS_TO_MUE if rx == 0 else LinkKind.MBS_TO_FUE
    if rx == 0:
        return LinkKind.FBS_TO_FUE_OTHER_STRIP
    if fbs_strip[tx - 1] == fbs_strip[rx - 1]:
        return LinkKind.FBS_TO_FUE_SAME_STRIP
    return LinkKind.FBS_TO_FUE_OTHER_STRIP


def _channel_matrix(cfg: ScenarioConfig, mbs, mue, fbs, fue, fbs_strip) -> ChannelMatrix:
    k = len(fbs)
    tx_pos = np.vstack([mbs[None, :], fbs])
    rx_pos = np.vstack([mue[None, :], fue])
    gains = np.empty((k + 1, k + 1))
    for i in range(k + 1):
        for j in range(k + 1):
            d = float(np.linalg.norm(tx_pos[i] - rx_pos[j]))
            pl = pathloss_db(link_kind(i, j, fbs_strip), d, l_ow_db=cfg.wall_loss_db)
            gains[i, j] = gain_linear(pl)
    return ChannelMatrix(gains)


def build_scenario(cfg: ScenarioConfig, k_active: int) -> Scenario:
    """Construct the scenario with the first ``k_active`` femtocells active.

    All randomness (activation order, FUE placement) is drawn for the whole
    block up front from ``cfg.seed``, so rebuilding with a larger
    ``k_active`` extends the active set without moving anyone.
    """
    if not 1 <= k_active <= cfg.n_apartments:
        raise ValueError(f"k_active must be in 1..{cfg.n_apartments}, got {k_active}")

    rng = np.random.default_rng(cfg.seed)
    order = rng.permutation(cfg.n_apartments)
    offsets = _draw_fue_offsets(cfg, rng)

    centers, strip_of = _apartment_centers(cfg)
    shift = np.array([cfg.block_distance_m, 0.0])
    mbs = np.zeros(2)
    mue = shift + np.asarray(cfg.mue_offset_m)

    active = order[:k_active]
    fbs = centers[active] + shift
    fue = fbs + offsets[active]
    fbs_strip = strip_of[active]

    ch = _channel_matrix(cfg, mbs, mue, fbs, fue, fbs_strip)
    return Scenario(config=cfg, k_active=k_active, mbs_pos=mbs, mue_pos=mue,
                    fbs_pos=fbs, fue_pos=fue, fbs_strip=fbs_strip,
                    apartment_index=active, channel=ch)


def density_fbs_per_km2(scenario: Scenario) -> float:
    """Active femtocells per km^2 of block footprint. Reporting only."""
    cfg = scenario.config
    width = cfg.apartments_per_strip * cfg.apartment_size_m
    height = cfg.strips * cfg.apartment_size_m + (cfg.strips - 1) * cfg.street_width_m
    area_km2 = width * height * FOOTPRINT_MARGIN / 1e6
    return scenario.k_active / area_km2


def scenario_to_json(scenario: Scenario) -> str:
    """Serialize a scenario (positions, gains, config) to versioned JSON."""
    cfg = asdict(scenario.config)
    cfg["noise"] = asdict(scenario.config.noise)
    doc = {
        "version": SCENARIO_SCHEMA_VERSION,
        "config": cfg,
        "k_active": scenario.k_active,
        "mbs_pos": scenario.mbs_pos.tolist(),
        "mue_pos": scenario.mue_pos.tolist(),
        "fbs_pos": scenario.fbs_pos.tolist(),
        "fue_pos": scenario.fue_pos.tolist(),
        "fbs_strip": scenario.fbs_strip.tolist(),
        "apartment_index": scenario.apartment_index.tolist(),
        "gains": scenario.channel.gains.tolist(),
    }
    return json.dumps(doc, indent=2)


def config_from_dict(d: dict) -> ScenarioConfig:
    d = dict(d)
    if "noise" in d and isinstance(d["noise"], dict):
        d["noise"] = NoiseModel(**d["noise"])
    for key in ("ring_radii_mue_m", "ring_radii_mbs_m", "mue_offset_m"):
        if key in d:
            d[key] = tuple(d[key])
    return ScenarioConfig(**d)


def scenario_from_json(text: str) -> Scenario:
    doc = json.loads(text)
    if doc.get("version") != SCENARIO_SCHEMA_VERSION:
        raise ValueError(f"unsupported scenario schema version: {doc.get('version')}")
    cfg = config_from_dict(doc["config"])
    return Scenario(
        config=cfg,
        k_active=int(doc["k_active"]),
        mbs_pos=np.asarray(doc["mbs_pos"], dtype=float),
        mue_pos=np.asarray(doc["mue_pos"], dtype=float),
        fbs_pos=np.asarray(doc["fbs_pos"], dtype=float),
        fue_pos=np.asarray(doc["fue_pos"], dtype=float),
        fbs_strip=np.asarray(doc["fbs_strip"], dtype=int),
        apartment_index=np.asarray(doc["apartment_index"], dtype=int),
        channel=ChannelMatrix(np.asarray(doc["gains"], dtype=float)),
    )


def with_seed(cfg: ScenarioConfig, seed: int) -> ScenarioConfig:
    return replace(cfg, seed=int(seed))
