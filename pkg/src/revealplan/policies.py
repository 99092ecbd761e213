"""Leader policies that consume only legal observations.

A policy carries its own observation-tracking state between rounds:
a belief code for the partial planner under M3, a global cell for the
complete baseline, a learned-row bitmask under M1/M2. The scalar protocol
(initial_state / action / update) is what the oracle and the live service
drive; the array hooks are the same logic over whole batches of runs for
the Monte Carlo kernel, and the scalar methods delegate to them so there
is a single implementation to trust.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .belief_solver import BeliefPlan, Cell, CompletePlan
from .full_solver import PlanResult
from .game import CapacityError, row_stats


@dataclass(frozen=True)
class Observation:
    """What the leader sees after one round.

    ``learned`` is the played row's post-round learned status under the
    full-observability models, None when the model hides it (M3).
    """

    column: int
    reward: float
    learned: bool | None = None


class BeliefPolicy:
    """Partial-adaptation planner under M3, tracking a per-row belief code."""

    def __init__(self, plan: BeliefPlan):
        self.plan = plan
        spec = plan.spec
        self._pow3 = 3 ** np.arange(spec.n_rows)
        self._revealing = np.array(spec.revealing, dtype=bool)
        self._best = np.array(row_stats(spec).best_value)

    def initial_state(self):
        return 0

    def action(self, state, round):
        return self.plan.action_code(round, state)

    def update(self, state, round, row, obs: Observation):
        states = self.update_array(
            round,
            np.array([state]),
            np.array([row]),
            np.array([obs.reward]),
            None,
        )
        return int(states[0])

    def action_array(self, t, states):
        return self.plan.actions[t - 1][states]

    def update_array(self, t, states, rows, rewards, learned_flags):
        best_seen = rewards == self._best[rows]
        cells = (states // self._pow3[rows]) % 3
        promoted = np.where((cells == 1) & best_seen, 2, np.maximum(cells, 1))
        new_cells = np.where(cells == 2, 2, promoted)
        new_cells = np.where(self._revealing[rows], new_cells, cells)
        return states + (new_cells - cells) * self._pow3[rows]


class CompletePolicy:
    """Complete-adaptation baseline under partial observability: one global cell."""

    def __init__(self, plan: CompletePlan):
        self.plan = plan
        spec = plan.spec
        self._revealing = np.array(spec.revealing, dtype=bool)
        self._best = np.array(row_stats(spec).best_value)

    def initial_state(self):
        return int(Cell.UNPLAYED)

    def action(self, state, round):
        return self.plan.action_code(round, state)

    def update(self, state, round, row, obs: Observation):
        states = self.update_array(
            round, np.array([state]), np.array([row]), np.array([obs.reward]), None
        )
        return int(states[0])

    def action_array(self, t, states):
        return self.plan.actions[t - 1][states]

    def update_array(self, t, states, rows, rewards, learned_flags):
        best_seen = rewards == self._best[rows]
        promoted = np.where((states == 1) & best_seen, 2, np.maximum(states, 1))
        new = np.where(states == 2, 2, promoted)
        return np.where(self._revealing[rows], new, states)


class FullObsPolicy:
    """Planner under M1/M2: tracks the true learned set as a bitmask."""

    def __init__(self, plan: PlanResult):
        if plan.spec.n_rows > 62:
            raise CapacityError(
                f"roll-out state is a 64-bit row mask; {plan.spec.n_rows} rows exceed 62"
            )
        self.plan = plan

    def initial_state(self):
        return 0

    def action(self, state, round):
        masks = np.array([state], dtype=np.int64)
        return int(self.plan.action_array(round, masks)[0])

    def update(self, state, round, row, obs: Observation):
        states = self.update_array(
            round,
            np.array([state], dtype=np.int64),
            np.array([row]),
            None,
            np.array([bool(obs.learned)]),
        )
        return int(states[0])

    def action_array(self, t, states):
        return self.plan.action_array(t, states)

    def update_array(self, t, states, rows, rewards, learned_flags):
        return np.where(learned_flags, states | (1 << rows.astype(np.int64)), states)


@dataclass
class FixedPlanPolicy:
    """Plays a predetermined row sequence, ignoring all observations."""

    rows: tuple[int, ...]

    def __post_init__(self):
        self.rows = tuple(int(r) for r in self.rows)

    def initial_state(self):
        return 0

    def action(self, state, round):
        return self.rows[round - 1]

    def update(self, state, round, row, obs: Observation):
        return state

    def action_array(self, t, states):
        return np.full(states.shape, self.rows[t - 1])

    def update_array(self, t, states, rows, rewards, learned_flags):
        return states


def policy_for(plan):
    """Wrap a solver plan in its matching observation-tracking policy."""
    if isinstance(plan, BeliefPlan):
        return BeliefPolicy(plan)
    if isinstance(plan, CompletePlan):
        return CompletePolicy(plan)
    if isinstance(plan, PlanResult):
        return FullObsPolicy(plan)
    raise TypeError(f"no policy adapter for {type(plan).__name__}")
