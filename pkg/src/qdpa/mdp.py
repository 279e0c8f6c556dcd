"""Discrete agent states and the transmit-power action grid.

Each femtocell observes a small discrete state built from four features:
whether its own FUE meets the rate requirement, whether the MUE does, and
which concentric ring around the MUE / around the MBS the femtocell sits
in. The two ring features are fixed by geometry; the state-set model picks
which of the two QoS bits the agent gets to see.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .topology import Scenario, ring_index, dbm_to_watts

__all__ = [
    "StateSetModel",
    "AgentState",
    "ActionSet",
    "observe_state",
    "action_set",
    "state_space_size",
    "state_index",
    "state_from_index",
]


class StateSetModel(enum.Enum):
    """Which QoS bits enter the agent state alongside the two ring indices."""

    FUE_AWARE = "fue_aware"   # own-FUE bit + rings
    MUE_AWARE = "mue_aware"   # MUE bit + rings
    FULL = "full"             # both bits + rings

    @property
    def n_bits(self) -> int:
        return 2 if self is StateSetModel.FULL else 1


@dataclass(frozen=True)
class AgentState:
    """Observed state of one femtocell under a given state-set model."""

    fue_ok: int
    mue_ok: int
    mue_ring: int
    mbs_ring: int
    model: StateSetModel


def state_space_size(model: StateSetModel, n1: int, n2: int) -> int:
    """Number of distinct states; n1/n2 are the ring counts around MUE/MBS."""
    if n1 < 1 or n2 < 1:
        raise ValueError("ring counts must be at least 1")
    return (2 ** model.n_bits) * (n1 + 1) * (n2 + 1)


def state_index(state: AgentState, n1: int, n2: int) -> int:
    """Bijective index of a state in {0 .. state_space_size-1}.

    Bits outside the chosen model are ignored.
    """
    if not (0 <= state.mue_ring <= n1 and 0 <= state.mbs_ring <= n2):
        raise ValueError("ring index out of range for the given ring counts")
    rings = state.mue_ring + (n1 + 1) * state.mbs_ring
    if state.model is StateSetModel.FUE_AWARE:
        return state.fue_ok + 2 * rings
    if state.model is StateSetModel.MUE_AWARE:
        return state.mue_ok + 2 * rings
    return state.fue_ok + 2 * state.mue_ok + 4 * rings


def state_from_index(index: int, model: StateSetModel, n1: int, n2: int) -> AgentState:
    """Inverse of ``state_index``; bits outside the model come back as 0."""
    size = state_space_size(model, n1, n2)
    if not 0 <= index < size:
        raise ValueError(f"state index {index} out of range 0..{size - 1}")
    base = 2 ** model.n_bits
    bits, rings = index % base, index // base
    mue_ring, mbs_ring = rings % (n1 + 1), rings // (n1 + 1)
    if model is StateSetModel.FUE_AWARE:
        return AgentState(bits, 0, mue_ring, mbs_ring, model)
    if model is StateSetModel.MUE_AWARE:
        return AgentState(0, bits, mue_ring, mbs_ring, model)
    return AgentState(bits % 2, bits // 2, mue_ring, mbs_ring, model)


def observe_state(k: int, gamma_k: float, gamma_0: float, scenario: Scenario,
                  model: StateSetModel) -> AgentState:
    """State of agent ``k`` (1-based) given current SINRs.

    QoS indicators are inclusive: meeting the threshold exactly counts.
    """
    cfg = scenario.config
    if not 1 <= k <= scenario.k_active:
        raise ValueError(f"agent index {k} out of range 1..{scenario.k_active}")
    return AgentState(
        fue_ok=int(gamma_k >= cfg.fue_sinr_min),
        mue_ok=int(gamma_0 >= cfg.mue_sinr_min),
        mue_ring=ring_index(float(scenario.dist_fbs_mue[k - 1]), cfg.ring_radii_mue_m),
        mbs_ring=ring_index(float(scenario.dist_fbs_mbs[k - 1]), cfg.ring_radii_mbs_m),
        model=model,
    )


@dataclass(frozen=True)
class ActionSet:
    """Transmit power grid in watts, strictly increasing."""

    levels_w: tuple
    levels_dbm: tuple

    def __len__(self) -> int:
        return len(self.levels_w)

    @property
    def p_max_w(self) -> float:
        return self.levels_w[-1]

    @property
    def p_min_w(self) -> float:
        return self.levels_w[0]


def action_set(pmin_dbm: float, pmax_dbm: float, step_db: float) -> ActionSet:
    """Power grid from ``pmin_dbm`` to ``pmax_dbm`` in ``step_db`` steps."""
    if step_db <= 0:
        raise ValueError("step must be positive")
    span = (pmax_dbm - pmin_dbm) / step_db
    if span < 0 or abs(span - round(span)) > 1e-9:
        raise ValueError(f"step {step_db} dB does not divide the range "
                         f"{pmin_dbm}..{pmax_dbm} dBm")
    n = int(round(span)) + 1
    dbm = tuple(pmin_dbm + i * step_db for i in range(n))
    return ActionSet(levels_w=tuple(dbm_to_watts(x) for x in dbm), levels_dbm=dbm)
