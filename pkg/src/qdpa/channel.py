"""Pathloss, link gains, noise, SINR and rate computations.

All link gains are deterministic functions of geometry (urban dual-strip
pathloss table, no small-scale fading), which keeps every downstream
quantity exactly reproducible.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LinkKind",
    "NoiseModel",
    "ChannelMatrix",
    "pathloss_db",
    "gain_linear",
    "sinr_mue",
    "sinr_fue",
    "sinr_all",
    "rate",
]


class LinkKind(enum.Enum):
    """Link categories of the dual-strip scenario.

    ``FBS_TO_FUE_OTHER_STRIP`` is also the model for femto-to-MUE links.
    """

    MBS_TO_MUE = "mbs_to_mue"
    MBS_TO_FUE = "mbs_to_fue"
    FBS_TO_FUE_SAME_STRIP = "fbs_to_fue_same_strip"
    FBS_TO_FUE_OTHER_STRIP = "fbs_to_fue_other_strip"


def pathloss_db(kind: LinkKind, r_m: float, d2d_indoor_m: float | None = None,
                l_ow_db: float = 20.0) -> float:
    """Urban dual-strip pathloss in dB.

    Parameters
    ----------
    kind:
        Which link model to evaluate.
    r_m:
        Transmitter-receiver distance in meters; must be positive.
    d2d_indoor_m:
        Indoor 2-D distance in meters. Defaults to ``r_m`` (single-floor
        apartments make the two coincide).
    l_ow_db:
        Outer-wall penetration loss in dB.
    """
    if not (r_m > 0.0) or not math.isfinite(r_m):
        raise ValueError(f"distance must be positive and finite, got {r_m}")
    if d2d_indoor_m is None:
        d2d_indoor_m = r_m
    if d2d_indoor_m < 0.0:
        raise ValueError(f"indoor distance must be non-negative, got {d2d_indoor_m}")

    log_r = math.log10(r_m)
    if kind is LinkKind.MBS_TO_MUE:
        return 15.3 + 37.6 * log_r
    if kind is LinkKind.MBS_TO_FUE:
        return 15.3 + 37.6 * log_r + l_ow_db
    if kind is LinkKind.FBS_TO_FUE_SAME_STRIP:
        return 56.76 + 20.0 * log_r + 0.7 * d2d_indoor_m
    if kind is LinkKind.FBS_TO_FUE_OTHER_STRIP:
        return (max(15.3 + 37.6 * log_r, 38.46 + 20.0 * log_r)
                + 18.3 + 0.7 * d2d_indoor_m + l_ow_db)
    raise ValueError(f"unknown link kind: {kind!r}")


def gain_linear(pl_db: float) -> float:
    """Convert a pathloss in dB to a linear power gain, 10^(-PL/10)."""
    if not math.isfinite(pl_db):
        raise ValueError(f"pathloss must be finite, got {pl_db}")
    return 10.0 ** (-pl_db / 10.0)


@dataclass(frozen=True)
class NoiseModel:
    """Thermal noise: spectral density in dBm/Hz over a subband bandwidth."""

    density_dbm_per_hz: float = -174.0
    bandwidth_hz: float = 180e3

    def __post_init__(self):
        if self.bandwidth_hz <= 0.0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth_hz}")

    @property
    def power_watts(self) -> float:
        dbm = self.density_dbm_per_hz + 10.0 * math.log10(self.bandwidth_hz)
        return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class ChannelMatrix:
    """Linear power gains between every transmitter and receiver.

    ``gains[i, j]`` is the gain from transmitter ``i`` to receiver ``j``.
    Index 0 is the macro pair (MBS transmitter, MUE receiver); indices
    ``1..K`` are the femto pairs (FBS k, FUE k).
    """

    gains: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gains, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"gain matrix must be square, got shape {g.shape}")
        if not np.all(np.isfinite(g)) or np.any(g <= 0.0):
            raise ValueError("all gains must be strictly positive and finite")
        object.__setattr__(self, "gains", g)

    @property
    def k(self) -> int:
        """Number of femto pairs."""
        return self.gains.shape[0] - 1

    @property
    def gains_to_mue(self) -> np.ndarray:
        """Gain from each transmitter to the MUE, length K+1."""
        return self.gains[:, 0]


def _as_power_vector(p, k: int) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (k,):
        raise ValueError(f"expected {k} femto powers, got shape {p.shape}")
    if np.any(p < 0.0):
        raise ValueError("transmit powers must be non-negative")
    return p


def sinr_mue(p0: float, p, ch: ChannelMatrix, n0: float) -> float:
    """SINR at the MUE: macro signal over femto interference plus noise."""
    p = _as_power_vector(p, ch.k)
    interference = float(p @ ch.gains[1:, 0]) if ch.k else 0.0
    return p0 * ch.gains[0, 0] / (interference + n0)


def sinr_fue(k: int, p0: float, p, ch: ChannelMatrix, nk: float) -> float:
    """SINR at FUE ``k`` (1-based): own femto signal over macro plus
    other-femto interference plus noise."""
    if not 1 <= k <= ch.k:
        raise ValueError(f"agent index {k} out of range 1..{ch.k}")
    p = _as_power_vector(p, ch.k)
    interference = p0 * ch.gains[0, k]
    interference += float(p @ ch.gains[1:, k]) - p[k - 1] * ch.gains[k, k]
    return p[k - 1] * ch.gains[k, k] / (interference + nk)


def sinr_all(p0: float, p, ch: ChannelMatrix, noise_w: float) -> np.ndarray:
    """All receiver SINRs at once; entry 0 is the MUE, entries 1..K the FUEs.

    Equivalent to calling sinr_mue / sinr_fue per receiver but a single
    matrix product, which the training loop relies on.
    """
    p = _as_power_vector(p, ch.k)
    tx = np.concatenate(([p0], p))
    received = tx @ ch.gains
    signal = tx * np.diagonal(ch.gains)
    return signal / (received - signal + noise_w)


def rate(gamma):
    """Spectral efficiency log2(1+gamma) in b/s/Hz; accepts scalars or arrays."""
    return np.log2(1.0 + np.asarray(gamma, dtype=float)) if np.ndim(gamma) else math.log2(1.0 + gamma)
