"""Tabular Q-learning engine.

Q-tables are zero-initialized and carry per-cell visit counts so the
learning rate can decay as 1/(1+n) per state-action pair. Under that rate a
cell's value is exactly the arithmetic mean of the empirical update targets
applied to it, which makes the engine cheap to cross-check.

Two greedy-target flavors exist: independent (each agent maximizes its own
row) and cooperative (agents sharing a state maximize the sum of their
rows).
"""

import csv
import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LearningMode",
    "LearningConfig",
    "QTable",
    "learning_rate",
    "independent_target",
    "cooperative_target",
    "select_action",
    "empirical_target_mean",
    "run_q_learning",
    "QLearningRun",
    "save_qtable_csv",
    "load_qtable_csv",
]


class LearningMode(enum.Enum):
    INDEPENDENT = "independent"
    COOPERATIVE = "cooperative"


@dataclass(frozen=True)
class LearningConfig:
    """Q-learning hyperparameters for one training run."""

    beta: float = 0.9
    epsilon_explore: float = 0.10
    mode: LearningMode = LearningMode.INDEPENDENT
    training_frames: int = 2000
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise ValueError("discount must be in (0, 1]")
        if not 0.0 <= self.epsilon_explore <= 1.0:
            raise ValueError("exploration probability must be in [0, 1]")
        if self.training_frames < 0:
            raise ValueError("training frames must be non-negative")


def learning_rate(visit_count: int) -> float:
    """Decaying step size 1/(1+n) where n counts prior visits of the cell."""
    if visit_count < 0:
        raise ValueError("visit count must be non-negative")
    return 1.0 / (1.0 + visit_count)


class QTable:
    """Action values plus visit counts for one agent, zero-initialized."""

    def __init__(self, n_states: int, n_actions: int):
        if n_states < 1 or n_actions < 1:
            raise ValueError("table needs at least one state and one action")
        self.values = np.zeros((n_states, n_actions))
        self.visits = np.zeros((n_states, n_actions), dtype=np.int64)

    @property
    def n_states(self) -> int:
        return self.values.shape[0]

    @property
    def n_actions(self) -> int:
        return self.values.shape[1]

    def update(self, s: int, a: int, reward: float, target_value: float,
               beta: float) -> float:
        """One Q update of cell (s, a); returns the new cell value.

        The step size comes from the cell's visit count before the count is
        incremented, so the first update uses alpha = 1.
        """
        alpha = learning_rate(int(self.visits[s, a]))
        v = self.values[s, a]
        v += alpha * (reward + beta * target_value - v)
        self.values[s, a] = v
        self.visits[s, a] += 1
        return float(v)

    def greedy_action(self, s: int) -> int:
        """Own-row argmax; ties break to the lowest action index."""
        return int(np.argmax(self.values[s]))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def copy(self) -> "QTable":
        out = QTable(self.n_states, self.n_actions)
        out.values[:] = self.values
        out.visits[:] = self.visits
        return out


def independent_target(q: QTable, next_state: int) -> float:
    """Greedy bootstrap value: max over actions of the agent's own row."""
    return float(np.max(q.values[next_state]))


def cooperative_target(tables, next_state: int) -> tuple[float, int]:
    """Greedy bootstrap over the summed rows of same-state agents.

    Returns the summed maximum and the maximizing action (lowest index on
    ties). With a single table this reduces to the independent target.
    """
    if len(tables) == 0:
        raise ValueError("cooperative target needs at least one table")
    total = tables[0].values[next_state].copy()
    for q in tables[1:]:
        total += q.values[next_state]
    a = int(np.argmax(total))
    return float(total[a]), a


def select_action(tables, state: int, epsilon_explore: float,
                  rng: np.random.Generator) -> int:
    """Epsilon-greedy choice over the (possibly shared) greedy action.

    ``tables`` holds the agent's own table, plus the tables of same-state
    agents in cooperative mode. All-zero tables yield action 0.
    """
    n_actions = tables[0].n_actions
    if epsilon_explore > 0.0 and rng.random() < epsilon_explore:
        return int(rng.integers(n_actions))
    if len(tables) == 1:
        return tables[0].greedy_action(state)
    return cooperative_target(tables, state)[1]


def empirical_target_mean(targets) -> float:
    """Mean of the empirical update targets applied to one cell.

    Under the 1/(1+n) step size and zero initialization this equals the
    cell's current value exactly; exposed for verification.
    """
    targets = np.asarray(targets, dtype=float)
    if targets.size == 0:
        raise ValueError("target history must be non-empty")
    return float(targets.mean())


@dataclass
class QLearningRun:
    """Outcome of a Q-learning run on an explicit environment."""

    q: QTable
    steps: int
    sup_norm_max: float          # largest |Q| seen after any update
    target_history: dict | None  # (s, a) -> list of empirical targets


def run_q_learning(mdp, steps: int, beta: float, rng: np.random.Generator,
                   epsilon_explore: float = 1.0, q: QTable | None = None,
                   record_targets: bool = False) -> QLearningRun:
    """Single-agent tabular Q-learning on an explicit MDP.

    ``mdp`` needs ``n_states``, ``n_actions``, ``rewards[s, a]`` and
    ``transitions[s, a, :]``. The behavior policy is epsilon-greedy;
    epsilon 1.0 gives forced uniform exploration. Passing an existing table
    continues training in place.
    """
    if q is None:
        q = QTable(mdp.n_states, mdp.n_actions)
    history: dict | None = {} if record_targets else None

    # Precompute cumulative transition rows; batch the random draws.
    cum = np.cumsum(np.asarray(mdp.transitions, dtype=float), axis=2)
    rewards = np.asarray(mdp.rewards, dtype=float)
    values = q.values
    visits = q.visits

    s = int(rng.integers(mdp.n_states))
    sup_seen = q.sup_norm()
    batch = 8192
    done = 0
    while done < steps:
        n = min(batch, steps - done)
        u_explore = rng.random(n)
        u_action = rng.integers(mdp.n_actions, size=n)
        u_next = rng.random(n)
        for i in range(n):
            if u_explore[i] < epsilon_explore:
                a = int(u_action[i])
            else:
                a = int(np.argmax(values[s]))
            y = min(int(np.searchsorted(cum[s, a], u_next[i], side="right")),
                    mdp.n_states - 1)
            target = rewards[s, a] + beta * values[y].max()
            alpha = 1.0 / (1.0 + visits[s, a])
            values[s, a] += alpha * (target - values[s, a])
            visits[s, a] += 1
            if history is not None:
                history.setdefault((s, a), []).append(float(target))
            mag = abs(values[s, a])
            if mag > sup_seen:
                sup_seen = mag
            s = y
        done += n
    return QLearningRun(q=q, steps=steps, sup_norm_max=float(sup_seen),
                        target_history=history)


def save_qtable_csv(q: QTable, values_path, visits_path=None) -> None:
    """Write the table as CSV, one row per state, one column per action."""
    header = [f"a{j}" for j in range(q.n_actions)]
    with open(values_path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["state"] + header)
        for s in range(q.n_states):
            w.writerow([s] + [repr(float(v)) for v in q.values[s]])
    if visits_path is not None:
        with open(visits_path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["state"] + header)
            for s in range(q.n_states):
                w.writerow([s] + [int(v) for v in q.visits[s]])


def load_qtable_csv(values_path, visits_path=None) -> QTable:
    with open(values_path, newline="") as f:
        rows = list(csv.reader(f))
    n_states, n_actions = len(rows) - 1, len(rows[0]) - 1
    q = QTable(n_states, n_actions)
    for row in rows[1:]:
        q.values[int(row[0])] = [float(x) for x in row[1:]]
    if visits_path is not None:
        with open(visits_path, newline="") as f:
            vrows = list(csv.reader(f))
        for row in vrows[1:]:
            q.visits[int(row[0])] = [int(x) for x in row[1:]]
    return q
