import numpy as np
import pytest

from qdpa.channel import sinr_all
from qdpa.mdp import (AgentState, StateSetModel, action_set, observe_state,
                      state_from_index, state_index, state_space_size)
from qdpa.topology import ScenarioConfig, build_scenario


def test_state_space_size():
    assert state_space_size(StateSetModel.FUE_AWARE, 3, 3) == 32
    assert state_space_size(StateSetModel.MUE_AWARE, 3, 3) == 32
    assert state_space_size(StateSetModel.FULL, 3, 3) == 64
    assert state_space_size(StateSetModel.MUE_AWARE, 1, 1) == 8


@pytest.mark.parametrize("model", list(StateSetModel))
@pytest.mark.parametrize("n1,n2", [(3, 3), (1, 2), (4, 1)])
def test_index_bijection(model, n1, n2):
    size = state_space_size(model, n1, n2)
    seen = set()
    for i in range(size):
        st = state_from_index(i, model, n1, n2)
        assert state_index(st, n1, n2) == i
        seen.add((st.fue_ok, st.mue_ok, st.mue_ring, st.mbs_ring))
    assert len(seen) == size


def test_index_ignores_out_of_model_bits():
    a = AgentState(1, 0, 2, 1, StateSetModel.FUE_AWARE)
    b = AgentState(1, 1, 2, 1, StateSetModel.FUE_AWARE)
    assert state_index(a, 3, 3) == state_index(b, 3, 3)


def test_action_set_default_grid():
    acts = action_set(5.0, 15.0, 1.0)
    assert len(acts) == 11
    assert acts.levels_w[0] == pytest.approx(3.162e-3, rel=1e-3)
    assert acts.levels_w[-1] == pytest.approx(31.62e-3, rel=1e-3)
    assert all(b > a for a, b in zip(acts.levels_w, acts.levels_w[1:]))


def test_action_set_edge_cases():
    assert len(action_set(5.0, 5.0, 1.0)) == 1
    assert len(action_set(5.0, 15.0, 2.0)) == 6
    with pytest.raises(ValueError):
        action_set(5.0, 15.0, 3.0)
    with pytest.raises(ValueError):
        action_set(5.0, 15.0, 0.0)


def test_observe_state_thresholds_inclusive():
    sc = build_scenario(ScenarioConfig(seed=1), 2)
    cfg = sc.config
    st = observe_state(1, cfg.fue_sinr_min, 0.0, sc, StateSetModel.FULL)
    assert st.fue_ok == 1 and st.mue_ok == 0
    st = observe_state(1, cfg.fue_sinr_min * 0.999, cfg.mue_sinr_min, sc,
                       StateSetModel.FULL)
    assert st.fue_ok == 0 and st.mue_ok == 1


def test_observe_state_rings():
    # agent in the middle apartment sits 10 m from the MUE -> innermost ring;
    # one apartment over (14.14 m) stays inside 17.5; two over lands in ring 1
    sc = build_scenario(ScenarioConfig(seed=1), 10)
    for k in range(1, 11):
        st = observe_state(k, 1.0, 1.0, sc, StateSetModel.FUE_AWARE)
        d = float(sc.dist_fbs_mue[k - 1])
        assert st.mue_ring == (0 if d <= 17.5 else 1)
        assert st.mbs_ring == 2  # block edge at 350 m falls in (150, 400]
    dists = np.round(np.sort(np.unique(sc.dist_fbs_mue)), 2)
    np.testing.assert_allclose(dists, [10.0, 14.14, 22.36], atol=0.01)


def test_observe_state_matches_sinr_computation():
    sc = build_scenario(ScenarioConfig(seed=4), 3)
    cfg = sc.config
    p = np.full(3, 0.01)
    gamma = sinr_all(cfg.mbs_power_w, p, sc.channel, cfg.noise_w)
    st = observe_state(2, float(gamma[2]), float(gamma[0]), sc, StateSetModel.FULL)
    assert st.fue_ok == int(gamma[2] >= cfg.fue_sinr_min)
    assert st.mue_ok == int(gamma[0] >= cfg.mue_sinr_min)
