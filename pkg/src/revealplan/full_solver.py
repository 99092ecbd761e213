"""Optimal planner for the full-observability models M1 and M2.

Key structural fact: once any row is known to be learned, the optimal
policy commits to the best learned row for every remaining round. The
recursion therefore only ever branches from the nothing-learned state,
giving one O(m) maximization per round and O(mT) total work.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .game import GameSpec, SpecError, row_stats, validate


@dataclass(frozen=True)
class FullObsState:
    """Leader's view under M1/M2: which rows are learned, current round (1-based)."""

    revealed: tuple[bool, ...]
    round: int

    def __post_init__(self):
        object.__setattr__(self, "revealed", tuple(bool(x) for x in self.revealed))
        object.__setattr__(self, "round", int(self.round))

    @classmethod
    def fresh(cls, n_rows: int) -> "FullObsState":
        return cls((False,) * n_rows, 1)


@dataclass
class PlanResult:
    """Optimal plan: first action, expected value-to-go, and the full action rule.

    ``commit_scope`` distinguishes the per-row planner ("revealed": commit
    to the best learned row) from the complete-adaptation baseline
    ("global": any learned signal means every row pays its maximum, so the
    commit target is the globally best row).
    """

    first_action: int
    value: float
    action_rule: Callable[[FullObsState], int] = field(repr=False)
    spec: GameSpec = field(repr=False)
    commit_scope: str = "revealed"
    _fresh_action: np.ndarray = field(repr=False, default=None)
    _fresh_value: np.ndarray = field(repr=False, default=None)

    def value_at(self, state: FullObsState) -> float:
        """Expected total payoff from ``state`` to the end under this plan."""
        _check_state(self.spec, state)
        remaining = self.spec.horizon - state.round + 1
        if any(state.revealed):
            stats = row_stats(self.spec)
            if self.commit_scope == "global":
                return max(stats.best_value) * remaining
            k = _best_revealed_row(stats.best_value, state.revealed)
            return stats.best_value[k] * remaining
        return float(self._fresh_value[state.round])

    def realization(self) -> tuple[int, ...]:
        """Open-loop action sequence along the no-learning observation branch."""
        return tuple(int(self._fresh_action[t]) for t in range(1, self.spec.horizon + 1))

    def predicted_rewards(self) -> tuple[float, ...]:
        """Model-predicted expected immediate reward for each round, from fresh."""
        spec = self.spec
        stats = row_stats(spec)
        best = np.array(stats.best_value)
        naive = np.array(stats.naive_value)
        rev = np.array(spec.revealing, dtype=bool)
        # Distribution over states: fresh, or committed to row k.
        p_fresh = 1.0
        p_commit = np.zeros(spec.n_rows)
        out = []
        for t in range(1, spec.horizon + 1):
            a = int(self._fresh_action[t])
            # The complete baseline always prices rows at the believed
            # response pre-learning (learning-after-response timing).
            m1_timing = spec.model == "M1" and self.commit_scope == "revealed"
            r_fresh = (
                spec.alpha * best[a] + (1 - spec.alpha) * naive[a]
                if m1_timing and rev[a]
                else naive[a]
            )
            out.append(p_fresh * r_fresh + float(p_commit @ best))
            if rev[a]:
                gain = p_fresh * spec.alpha
                if self.commit_scope == "global":
                    p_commit[int(np.argmax(best))] += gain
                else:
                    p_commit[a] += gain
                p_fresh *= 1 - spec.alpha
        return tuple(float(x) for x in out)

    # Array hooks used by the vectorized rollout kernel.
    def action_array(self, t: int, masks: np.ndarray) -> np.ndarray:
        m = self.spec.n_rows
        best = np.array(row_stats(self.spec).best_value)
        if self.commit_scope == "global":
            commit = np.full(masks.shape, int(np.argmax(best)))
        else:
            bits = (masks[:, None] >> np.arange(m)) & 1
            scores = np.where(bits.astype(bool), best[None, :], -np.inf)
            commit = np.argmax(scores, axis=1)
        return np.where(masks > 0, commit, int(self._fresh_action[t]))


def _check_state(spec: GameSpec, state: FullObsState) -> None:
    if len(state.revealed) != spec.n_rows:
        raise SpecError(
            f"state: expected {spec.n_rows} revealed flags, got {len(state.revealed)}"
        )
    if not 1 <= state.round <= spec.horizon:
        raise SpecError(f"state: round {state.round} outside 1..{spec.horizon}")


def _best_revealed_row(best_value, revealed) -> int:
    idx = [k for k, r in enumerate(revealed) if r]
    return max(idx, key=lambda k: (best_value[k], -k))


def solve_full(spec: GameSpec, state: FullObsState | None = None) -> PlanResult:
    """Optimal plan for an M1 or M2 spec, from ``state`` (default: fresh, round 1).

    Exploit branch: with any row revealed, commit to the best revealed row
    for all remaining rounds. Explore branch from the nothing-revealed
    state, per round t with U the value of the next round's fresh state
    and e_k the state with only row k revealed:

        M1: alpha * (R_k + U(e_k)) + (1 - alpha) * (C_k + U(0))
        M2: C_k + alpha * U(e_k) + (1 - alpha) * U(0)

    Non-revealing rows enter as pure-exploit options C_k + U(0). Ties break
    to the lowest row index.
    """
    validate(spec)
    if spec.model not in ("M1", "M2"):
        raise SpecError(f"model: solve_full handles M1/M2 only, got {spec.model}")
    if state is None:
        state = FullObsState.fresh(spec.n_rows)
    _check_state(spec, state)

    stats = row_stats(spec)
    best = np.array(stats.best_value)
    naive = np.array(stats.naive_value)
    rev = np.array(spec.revealing, dtype=bool)
    T, alpha = spec.horizon, spec.alpha

    fresh_value = np.zeros(T + 2)
    fresh_action = np.zeros(T + 1, dtype=int)
    for t in range(T, 0, -1):
        u_next = fresh_value[t + 1]
        commit_next = best * (T - t)  # value of e_k from round t+1 on
        if spec.model == "M1":
            explore = alpha * (best + commit_next) + (1 - alpha) * (naive + u_next)
        else:
            explore = naive + alpha * commit_next + (1 - alpha) * u_next
        q = np.where(rev, explore, naive + u_next)
        fresh_action[t] = int(np.argmax(q))
        fresh_value[t] = float(q[fresh_action[t]])

    def action_rule(s: FullObsState) -> int:
        _check_state(spec, s)
        if any(s.revealed):
            return _best_revealed_row(stats.best_value, s.revealed)
        return int(fresh_action[s.round])

    plan = PlanResult(
        first_action=0,
        value=0.0,
        action_rule=action_rule,
        spec=spec,
        commit_scope="revealed",
        _fresh_action=fresh_action,
        _fresh_value=fresh_value,
    )
    plan.first_action = action_rule(state)
    plan.value = plan.value_at(state)
    return plan
