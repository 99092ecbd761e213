"""Exact finite-horizon planners over leader belief states.

Under M3 the leader never observes learning directly, but per row its
knowledge collapses to three cases: the row was never played (the
follower surely has not learned it), the row was played and every
response so far was sub-optimal (learned with probability alpha), or a
maximal response was observed (learned for sure). Backward induction over
the resulting 3^m belief space is exact; no approximation is involved.

The complete-adaptation baseline replaces the per-row cells with a single
global cell: one successful reveal is assumed to teach the follower the
whole matrix.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .full_solver import FullObsState, PlanResult
from .game import CapacityError, GameSpec, SpecError, row_stats, validate

DEFAULT_MAX_ROWS = 12

_CELL_CHARS = "0u1"


class Cell(IntEnum):
    """Leader's knowledge about one row: never played / played, unresolved / learned."""

    UNPLAYED = 0
    UNCERTAIN = 1
    LEARNED = 2


BeliefVector = tuple  # tuple[Cell | int, ...], length m


def fresh_belief(n_rows: int) -> tuple[Cell, ...]:
    return (Cell.UNPLAYED,) * n_rows


def encode_belief(cells) -> int:
    code = 0
    for i, c in enumerate(cells):
        code += int(c) * 3**i
    return code


def decode_belief(code: int, n_rows: int) -> tuple[Cell, ...]:
    return tuple(Cell((code // 3**i) % 3) for i in range(n_rows))


def belief_signature(cells) -> str:
    return "".join(_CELL_CHARS[int(c)] for c in cells)


def belief_transition(
    spec: GameSpec, belief, row: int
) -> list[tuple[tuple[Cell, ...], float, float]]:
    """Successor beliefs of playing ``row``: (next_belief, probability, expected_reward).

    Only the played row's cell can change. Learned cells are absorbing and
    pay the row maximum. Non-revealing rows otherwise leave the cell
    unchanged and pay the believed-response value. A revealing row moves
    Unplayed to Uncertain surely (first play cannot have been learned yet),
    and resolves Uncertain to Learned with probability alpha, paying the
    row maximum exactly on that branch.
    """
    belief = tuple(Cell(int(c)) for c in belief)
    if len(belief) != spec.n_rows:
        raise SpecError(f"belief: expected {spec.n_rows} cells, got {len(belief)}")
    if not 0 <= row < spec.n_rows:
        raise SpecError(f"row: index {row} outside 0..{spec.n_rows - 1}")
    stats = row_stats(spec)
    best, naive = stats.best_value[row], stats.naive_value[row]
    cell = belief[row]

    def with_cell(c: Cell):
        out = list(belief)
        out[row] = c
        return tuple(out)

    if cell == Cell.LEARNED:
        return [(belief, 1.0, best)]
    if not spec.revealing[row]:
        return [(belief, 1.0, naive)]
    if cell == Cell.UNPLAYED:
        return [(with_cell(Cell.UNCERTAIN), 1.0, naive)]
    # Uncertain: resolves per play with a fresh coin.
    out = []
    if spec.alpha > 0:
        out.append((with_cell(Cell.LEARNED), spec.alpha, best))
    if spec.alpha < 1:
        out.append((belief, 1.0 - spec.alpha, naive))
    return out


def observe_belief(spec: GameSpec, belief, row: int, best_response_seen: bool):
    """Belief after playing ``row`` and observing whether the response was maximal.

    Follows the same support as belief_transition: the first play of a
    revealing row always lands in Uncertain; a maximal response thereafter
    promotes to Learned.
    """
    belief = tuple(Cell(int(c)) for c in belief)
    cell = belief[row]
    if cell == Cell.LEARNED or not spec.revealing[row]:
        return belief
    out = list(belief)
    if cell == Cell.UNPLAYED:
        out[row] = Cell.UNCERTAIN
    else:
        out[row] = Cell.LEARNED if best_response_seen else Cell.UNCERTAIN
    return tuple(out)


@dataclass
class BeliefPlan:
    """State-indexed optimal actions and values-to-go for an M3 spec.

    ``values[t - 1]`` and ``actions[t - 1]`` are arrays over base-3 belief
    codes (cell of row i is digit i) for round t in 1..T.
    """

    spec: GameSpec
    values: np.ndarray = field(repr=False)  # (T, 3^m)
    actions: np.ndarray = field(repr=False)  # (T, 3^m)

    @property
    def value(self) -> float:
        """Optimal expected total payoff of the whole game from the fresh state."""
        return float(self.values[0][0])

    @property
    def first_action(self) -> int:
        return int(self.actions[0][0])

    def value_at(self, round: int, belief) -> float:
        return float(self.values[round - 1][encode_belief(belief)])

    def action_at(self, round: int, belief) -> int:
        return int(self.actions[round - 1][encode_belief(belief)])

    def action_code(self, round: int, code: int) -> int:
        return int(self.actions[round - 1][code])

    def realization(self) -> tuple[int, ...]:
        """Open-loop action sequence along the no-learning observation branch."""
        spec = self.spec
        belief = fresh_belief(spec.n_rows)
        out = []
        for t in range(1, spec.horizon + 1):
            a = self.action_at(t, belief)
            out.append(a)
            belief = observe_belief(spec, belief, a, best_response_seen=False)
        return tuple(out)

    def predicted_rewards(self) -> tuple[float, ...]:
        """Model-predicted expected immediate reward per round, from fresh."""
        dist = {fresh_belief(self.spec.n_rows): 1.0}
        out = []
        for t in range(1, self.spec.horizon + 1):
            r_t = 0.0
            nxt: dict = {}
            for belief, p in dist.items():
                a = self.action_at(t, belief)
                for succ, q, r in belief_transition(self.spec, belief, a):
                    r_t += p * q * r
                    nxt[succ] = nxt.get(succ, 0.0) + p * q
            out.append(r_t)
            dist = nxt
        return tuple(out)

    def to_csv(self, fh) -> None:
        """Dump (round, belief-signature, action, value) rows for debugging."""
        writer = csv.writer(fh)
        writer.writerow(["round", "belief", "action", "value"])
        m = self.spec.n_rows
        for t in range(1, self.spec.horizon + 1):
            for code in range(3**m):
                writer.writerow(
                    [
                        t,
                        belief_signature(decode_belief(code, m)),
                        int(self.actions[t - 1][code]),
                        repr(float(self.values[t - 1][code])),
                    ]
                )


def _transition_arrays(spec: GameSpec):
    """Per-action successor/reward arrays over all 3^m belief codes."""
    m = spec.n_rows
    stats = row_stats(spec)
    codes = np.arange(3**m)
    pow3 = 3 ** np.arange(m)
    exp_reward = np.empty((m, codes.size))
    p_move = np.empty((m, codes.size))
    succ_move = np.empty((m, codes.size), dtype=np.int64)
    for a in range(m):
        cell = (codes // pow3[a]) % 3
        best, naive, alpha = stats.best_value[a], stats.naive_value[a], spec.alpha
        if spec.revealing[a]:
            exp_reward[a] = np.select(
                [cell == 2, cell == 1], [best, alpha * best + (1 - alpha) * naive], naive
            )
            p_move[a] = np.select([cell == 0, cell == 1], [1.0, alpha], 0.0)
        else:
            exp_reward[a] = np.where(cell == 2, best, naive)
            p_move[a] = 0.0
        succ_move[a] = np.where(cell < 2, codes + pow3[a], codes)
    return exp_reward, p_move, succ_move


def solve_belief(spec: GameSpec, max_rows: int = DEFAULT_MAX_ROWS) -> BeliefPlan:
    """Backward induction over the 3^m belief space for an M3 spec.

    Ties break to the lowest row index. Rejects instances whose table would
    not fit: m rows means 3^m states per round.
    """
    validate(spec)
    if spec.model != "M3":
        raise SpecError(f"model: solve_belief handles M3 only, got {spec.model}")
    if spec.n_rows > max_rows:
        raise CapacityError(
            f"{spec.n_rows} rows means 3^{spec.n_rows} = {3**spec.n_rows} belief states, "
            f"over the cap of 3^{max_rows}"
        )
    T = spec.horizon
    exp_reward, p_move, succ_move = _transition_arrays(spec)
    n_states = exp_reward.shape[1]
    values = np.zeros((T, n_states))
    actions = np.zeros((T, n_states), dtype=np.int16)
    v_next = np.zeros(n_states)
    for t in range(T, 0, -1):
        q = exp_reward + p_move * v_next[succ_move] + (1 - p_move) * v_next[None, :]
        actions[t - 1] = np.argmax(q, axis=0)
        values[t - 1] = np.take_along_axis(q, actions[t - 1][None, :], axis=0)[0]
        v_next = values[t - 1]
    return BeliefPlan(spec=spec, values=values, actions=actions)


@dataclass
class CompletePlan:
    """Complete-adaptation baseline plan over the single global knowledge cell.

    Same table shape as BeliefPlan but with exactly three states per round:
    the whole matrix unrevealed, pending, or assumed fully learned.
    """

    spec: GameSpec
    values: np.ndarray = field(repr=False)  # (T, 3)
    actions: np.ndarray = field(repr=False)  # (T, 3)

    @property
    def value(self) -> float:
        return float(self.values[0][Cell.UNPLAYED])

    @property
    def first_action(self) -> int:
        return int(self.actions[0][Cell.UNPLAYED])

    def value_at(self, round: int, cell) -> float:
        return float(self.values[round - 1][int(cell)])

    def action_at(self, round: int, cell) -> int:
        return int(self.actions[round - 1][int(cell)])

    def action_code(self, round: int, code: int) -> int:
        return int(self.actions[round - 1][code])

    def realization(self) -> tuple[int, ...]:
        spec = self.spec
        cell = Cell.UNPLAYED
        out = []
        for t in range(1, spec.horizon + 1):
            a = self.action_at(t, cell)
            out.append(a)
            if spec.revealing[a] and cell == Cell.UNPLAYED:
                cell = Cell.UNCERTAIN
        return tuple(out)

    def predicted_rewards(self) -> tuple[float, ...]:
        spec = self.spec
        stats = row_stats(spec)
        dist = {Cell.UNPLAYED: 1.0}
        out = []
        for t in range(1, spec.horizon + 1):
            r_t = 0.0
            nxt: dict = {}

            def push(c, p):
                nxt[c] = nxt.get(c, 0.0) + p

            for cell, p in dist.items():
                a = self.action_at(t, cell)
                best, naive = stats.best_value[a], stats.naive_value[a]
                if cell == Cell.LEARNED:
                    r_t += p * best
                    push(cell, p)
                elif not spec.revealing[a]:
                    r_t += p * naive
                    push(cell, p)
                elif cell == Cell.UNPLAYED:
                    r_t += p * naive
                    push(Cell.UNCERTAIN, p)
                else:
                    r_t += p * (spec.alpha * best + (1 - spec.alpha) * naive)
                    push(Cell.LEARNED, p * spec.alpha)
                    push(Cell.UNCERTAIN, p * (1 - spec.alpha))
            out.append(r_t)
            dist = nxt
        return tuple(out)

    def to_csv(self, fh) -> None:
        writer = csv.writer(fh)
        writer.writerow(["round", "belief", "action", "value"])
        for t in range(1, self.spec.horizon + 1):
            for code in range(3):
                writer.writerow(
                    [
                        t,
                        _CELL_CHARS[code],
                        int(self.actions[t - 1][code]),
                        repr(float(self.values[t - 1][code])),
                    ]
                )


def solve_complete(spec: GameSpec, observability: str = "partial"):
    """Planner that assumes one successful reveal teaches the whole matrix.

    ``observability`` "partial" returns a CompletePlan over the global
    cell; "full" returns a PlanResult whose rule treats any revealed row
    as the whole matrix being learned. Either way the baseline uses
    learning-after-response timing. Evaluate it against true partially
    adapting followers to reproduce the baseline comparisons.
    """
    validate(spec)
    stats = row_stats(spec)
    best = np.array(stats.best_value)
    naive = np.array(stats.naive_value)
    rev = np.array(spec.revealing, dtype=bool)
    T, alpha = spec.horizon, spec.alpha

    if observability == "partial":
        values = np.zeros((T, 3))
        actions = np.zeros((T, 3), dtype=np.int16)
        v_next = np.zeros(3)
        for t in range(T, 0, -1):
            q = np.empty((spec.n_rows, 3))
            q[:, Cell.UNPLAYED] = naive + np.where(rev, v_next[Cell.UNCERTAIN], v_next[Cell.UNPLAYED])
            resolved = alpha * (best + v_next[Cell.LEARNED]) + (1 - alpha) * (
                naive + v_next[Cell.UNCERTAIN]
            )
            q[:, Cell.UNCERTAIN] = np.where(rev, resolved, naive + v_next[Cell.UNCERTAIN])
            q[:, Cell.LEARNED] = best + v_next[Cell.LEARNED]
            actions[t - 1] = np.argmax(q, axis=0)
            values[t - 1] = np.take_along_axis(q, actions[t - 1][None, :], axis=0)[0]
            v_next = values[t - 1]
        return CompletePlan(spec=spec, values=values, actions=actions)

    if observability != "full":
        raise SpecError(f"observability: expected 'partial' or 'full', got {observability!r}")

    # Full observability: binary global state, M2-style timing.
    top = float(np.max(best))
    fresh_value = np.zeros(T + 2)
    fresh_action = np.zeros(T + 1, dtype=int)
    for t in range(T, 0, -1):
        commit_next = top * (T - t)
        explore = naive + alpha * commit_next + (1 - alpha) * fresh_value[t + 1]
        q = np.where(rev, explore, naive + fresh_value[t + 1])
        fresh_action[t] = int(np.argmax(q))
        fresh_value[t] = float(q[fresh_action[t]])

    global_best_row = int(np.argmax(best))

    def action_rule(s) -> int:
        if any(s.revealed):
            return global_best_row
        return int(fresh_action[s.round])

    plan = PlanResult(
        first_action=0,
        value=0.0,
        action_rule=action_rule,
        spec=spec,
        commit_scope="global",
        _fresh_action=fresh_action,
        _fresh_value=fresh_value,
    )
    start = FullObsState.fresh(spec.n_rows)
    plan.first_action = action_rule(start)
    plan.value = plan.value_at(start)
    return plan
