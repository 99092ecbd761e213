"""Brute-force ground truth for the planners, on small instances only.

Evaluates the expectimax over the full observation-history tree: the
leader's information state is the exact posterior over follower knowledge
sets, maximization runs over every action at every node, and transition
logic is written out from scratch here on purpose. Nothing in this module
relies on the planners' structural shortcuts, so agreement with them is
evidence, not tautology.
"""

from __future__ import annotations

from dataclasses import dataclass

from .game import CapacityError, GameSpec, row_stats, validate
from .policies import Observation

MAX_ROWS = 4
MAX_COLS = 6
MAX_ROUNDS = 4


@dataclass(frozen=True)
class HistoryNode:
    """One leader information state in the observation-history tree.

    ``support`` lists (learned-flags, probability) pairs: the exact
    posterior over which rows the follower knows, given the observations
    on the path to this node. Probabilities must sum to 1.
    """

    round: int
    support: tuple[tuple[tuple[bool, ...], float], ...]
    observation: str = "root"

    def __post_init__(self):
        total = sum(p for _, p in self.support)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"node probabilities sum to {total!r}, expected 1")


def _node(spec: GameSpec, round: int, masks: tuple, observation: str) -> HistoryNode:
    m = spec.n_rows
    support = tuple(
        (tuple(bool(mask >> k & 1) for k in range(m)), p) for mask, p in masks
    )
    return HistoryNode(round=round, support=support, observation=observation)


def _check_caps(spec: GameSpec) -> None:
    validate(spec)
    if spec.n_rows > MAX_ROWS or spec.n_cols > MAX_COLS or spec.horizon > MAX_ROUNDS:
        raise CapacityError(
            f"oracle caps exceeded: needs m <= {MAX_ROWS}, n <= {MAX_COLS}, "
            f"T <= {MAX_ROUNDS}, got m={spec.n_rows}, n={spec.n_cols}, T={spec.horizon}"
        )


def _tables(spec: GameSpec):
    stats = row_stats(spec)
    return stats.best_value, stats.best_column, stats.naive_value


def oracle_value(spec: GameSpec) -> float:
    """Exact optimal expected total payoff over all history-dependent policies."""
    _check_caps(spec)
    if spec.model in ("M1", "M2"):
        return _value_full_obs(spec)
    return _value_partial_obs(spec)


def _value_full_obs(spec: GameSpec) -> float:
    """M1/M2: the learned set is observed, so recurse over (round, learned mask)."""
    best, _, naive = _tables(spec)
    alpha, T, m = spec.alpha, spec.horizon, spec.n_rows
    cache: dict = {}

    def value(t: int, mask: int) -> float:
        if t > T:
            return 0.0
        key = (t, mask)
        if key in cache:
            return cache[key]
        out = -float("inf")
        for a in range(m):
            bit = 1 << a
            if mask & bit:
                v = best[a] + value(t + 1, mask)
            elif not spec.revealing[a]:
                v = naive[a] + value(t + 1, mask)
            elif spec.model == "M1":
                v = alpha * (best[a] + value(t + 1, mask | bit)) + (1 - alpha) * (
                    naive[a] + value(t + 1, mask)
                )
            else:
                v = naive[a] + alpha * value(t + 1, mask | bit) + (1 - alpha) * value(
                    t + 1, mask
                )
            out = max(out, v)
        cache[key] = out
        return out

    return value(1, 0)


def _response(spec, mask: int, a: int, best_col, believed) -> int:
    return best_col[a] if mask & (1 << a) else believed[a]


def _branch_knowledge(spec, mask: int, a: int, p: float):
    """Post-round knowledge outcomes of playing row a against knowledge mask."""
    bit = 1 << a
    if spec.revealing[a] and not mask & bit and spec.alpha > 0:
        out = [(mask | bit, p * spec.alpha)]
        if spec.alpha < 1:
            out.append((mask, p * (1 - spec.alpha)))
        return out
    return [(mask, p)]


def _value_partial_obs(spec: GameSpec) -> float:
    """M3: recurse over exact posteriors, branching on the observed column."""
    best, best_col, naive = _tables(spec)
    believed = spec.belief_best_response
    T, m = spec.horizon, spec.n_rows
    cache: dict = {}

    def value(node: HistoryNode, posterior) -> float:
        # A node's support is the same distribution as ``posterior``, which
        # keeps the (bitmask, probability) form for the branch arithmetic.
        t = node.round
        if t > T:
            return 0.0
        key = (t, posterior)
        if key in cache:
            return cache[key]
        out = -float("inf")
        for a in range(m):
            immediate = 0.0
            groups: dict[int, dict[int, float]] = {}
            for mask, p in posterior:
                col = _response(spec, mask, a, best_col, believed)
                immediate += p * spec.rewards[a][col]
                g = groups.setdefault(col, {})
                for mask2, p2 in _branch_knowledge(spec, mask, a, p):
                    g[mask2] = g.get(mask2, 0.0) + p2
            v = immediate
            for col, g in groups.items():
                p_obs = sum(g.values())
                child = tuple(sorted((mk, pk / p_obs) for mk, pk in g.items()))
                v += p_obs * value(_node(spec, t + 1, child, f"col={col}"), child)
            out = max(out, v)
        cache[key] = out
        return out

    start = ((0, 1.0),)
    return value(_node(spec, 1, start, "root"), start)


def oracle_policy_check(spec: GameSpec, policy) -> float:
    """Exact expected total payoff of ``policy`` under the spec's true model.

    Pure evaluation, no maximization. ``policy`` follows the leader-policy
    protocol: initial_state() / action(state, round) / update(state, round,
    row, observation). It is fed only observations the spec's model makes
    legal: the follower's column and realized reward always, the played
    row's post-round learned flag only under M1/M2.
    """
    _check_caps(spec)
    best, best_col, naive = _tables(spec)
    believed = spec.belief_best_response
    T = spec.horizon
    full_obs = spec.model in ("M1", "M2")

    def walk(t: int, pstate, posterior) -> float:
        if t > T:
            return 0.0
        a = policy.action(pstate, t)
        total = 0.0
        # Group outcome branches by what the leader observes.
        groups: dict[tuple, dict[int, float]] = {}
        for mask, p in posterior:
            if spec.model == "M1":
                for mask2, p2 in _branch_knowledge(spec, mask, a, p):
                    col = _response(spec, mask2, a, best_col, believed)
                    total += p2 * spec.rewards[a][col]
                    key = (col, bool(mask2 & (1 << a)))
                    groups.setdefault(key, {})
                    groups[key][mask2] = groups[key].get(mask2, 0.0) + p2
            else:
                col = _response(spec, mask, a, best_col, believed)
                total += p * spec.rewards[a][col]
                for mask2, p2 in _branch_knowledge(spec, mask, a, p):
                    key = (col, bool(mask2 & (1 << a))) if full_obs else (col, None)
                    groups.setdefault(key, {})
                    groups[key][mask2] = groups[key].get(mask2, 0.0) + p2
        for (col, flag), g in groups.items():
            p_obs = sum(g.values())
            child_posterior = tuple(sorted((mk, pk / p_obs) for mk, pk in g.items()))
            obs = Observation(column=col, reward=spec.rewards[a][col], learned=flag)
            child_state = policy.update(pstate, t, a, obs)
            total += p_obs * walk(t + 1, child_state, child_posterior)
        return total

    return walk(1, policy.initial_state(), ((0, 1.0),))
