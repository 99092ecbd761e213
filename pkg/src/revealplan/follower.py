"""Executable follower model: responses and stochastic learning.

The follower best-responds to the row played using whatever she currently
knows: the true payoffs for rows she has learned, her initial belief
otherwise. Each play of a revealing row she has not yet learned flips an
independent coin with success probability alpha; under M1 the coin
resolves before her response, under M2/M3 after it. Knowledge never
decays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import GameSpec, row_stats


@dataclass(frozen=True)
class FollowerKnowledge:
    """Which rows the follower knows the true payoffs of.

    ``everything_mode`` models the complete-adaptation assumption: a single
    global learned flag, so one successful reveal marks every row learned.
    """

    learned: tuple[bool, ...]
    everything_mode: bool = False

    def __post_init__(self):
        object.__setattr__(self, "learned", tuple(bool(x) for x in self.learned))
        if self.everything_mode and any(self.learned) and not all(self.learned):
            raise ValueError("everything_mode knowledge must be all-learned or all-unlearned")

    @classmethod
    def fresh(cls, n_rows: int, everything_mode: bool = False) -> "FollowerKnowledge":
        return cls((False,) * n_rows, everything_mode)

    def with_learned(self, row: int) -> "FollowerKnowledge":
        if self.everything_mode:
            return FollowerKnowledge((True,) * len(self.learned), True)
        learned = list(self.learned)
        learned[row] = True
        return FollowerKnowledge(tuple(learned), False)


@dataclass(frozen=True)
class RoundOutcome:
    leader_action: int
    follower_action: int
    reward: float
    learned_this_round: bool


def respond(spec: GameSpec, knowledge: FollowerKnowledge, row: int) -> int:
    """Column the follower picks when the leader plays ``row``. Deterministic."""
    if knowledge.learned[row]:
        return row_stats(spec).best_column[row]
    return spec.belief_best_response[row]


def play_round(
    spec: GameSpec,
    knowledge: FollowerKnowledge,
    row: int,
    rng: np.random.Generator,
) -> tuple[RoundOutcome, FollowerKnowledge]:
    """One leader play against the follower; returns the outcome and new knowledge.

    The learning coin is flipped only when the row is revealing and not yet
    learned; M1 flips it before the response, M2/M3 after.
    """
    eligible = spec.revealing[row] and not knowledge.learned[row]
    learned_now = False
    if spec.model == "M1" and eligible:
        learned_now = bool(rng.random() < spec.alpha)
        if learned_now:
            knowledge = knowledge.with_learned(row)
    col = respond(spec, knowledge, row)
    if spec.model in ("M2", "M3") and eligible:
        learned_now = bool(rng.random() < spec.alpha)
        if learned_now:
            knowledge = knowledge.with_learned(row)
    outcome = RoundOutcome(row, col, spec.rewards[row][col], learned_now)
    return outcome, knowledge
