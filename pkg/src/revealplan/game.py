"""Domain types and the game-spec document format.

A game is a finite identical-payoff matrix played repeatedly for a fixed
number of rounds. The leader (row player) moves first each round; the
follower responds with the column maximizing the row's payoffs as the
follower currently believes them. The follower's belief is stored only as
a per-row best-response column, which is the only behaviorally relevant
part of it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

MODELS = ("M1", "M2", "M3")

SPEC_FIELDS = (
    "row_labels",
    "column_labels",
    "rewards",
    "belief_best_response",
    "revealing",
    "alpha",
    "horizon",
    "model",
)


class SpecError(ValueError):
    """A game spec violates a structural invariant or the document schema."""


class CapacityError(ValueError):
    """An instance exceeds a solver's or the oracle's configured size caps."""


@dataclass(frozen=True)
class GameSpec:
    """Immutable description of one repeated-game instance.

    ``rewards`` is an m x n row-major matrix; ``belief_best_response[k]``
    is the column the follower initially believes best for row k;
    ``revealing[k]`` is False for rows whose play can never trigger
    learning; ``alpha`` is the per-play learning probability; ``model``
    selects when the learning coin resolves (M1: before the follower's
    response; M2/M3: after) and whether the leader observes the result
    directly (M1/M2) or must infer it from responses (M3).
    """

    row_labels: tuple[str, ...]
    column_labels: tuple[str, ...]
    rewards: tuple[tuple[float, ...], ...]
    belief_best_response: tuple[int, ...]
    revealing: tuple[bool, ...]
    alpha: float
    horizon: int
    model: str = "M3"

    def __post_init__(self):
        # Coerce list inputs so equality and hashing behave.
        object.__setattr__(self, "row_labels", tuple(str(x) for x in self.row_labels))
        object.__setattr__(self, "column_labels", tuple(str(x) for x in self.column_labels))
        object.__setattr__(
            self, "rewards", tuple(tuple(float(v) for v in row) for row in self.rewards)
        )
        object.__setattr__(
            self, "belief_best_response", tuple(int(b) for b in self.belief_best_response)
        )
        object.__setattr__(self, "revealing", tuple(bool(r) for r in self.revealing))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "horizon", int(self.horizon))

    @property
    def n_rows(self) -> int:
        return len(self.rewards)

    @property
    def n_cols(self) -> int:
        return len(self.rewards[0]) if self.rewards else 0


@dataclass(frozen=True)
class RowStats:
    """Per-row payoff summary.

    ``best_value[k]`` is the row maximum, ``best_column[k]`` a maximizing
    column (lowest index on ties), ``naive_value[k]`` the payoff under the
    follower's initially believed response.
    """

    best_value: tuple[float, ...]
    best_column: tuple[int, ...]
    naive_value: tuple[float, ...]


def validate(spec: GameSpec) -> GameSpec:
    """Check every structural invariant, returning the spec unchanged.

    Raises SpecError naming the offending field (and index where there is
    one).
    """
    if spec.n_rows < 1:
        raise SpecError("rewards: matrix must have at least one row")
    n = len(spec.rewards[0])
    if n < 1:
        raise SpecError("rewards: matrix must have at least one column")
    for i, row in enumerate(spec.rewards):
        if len(row) != n:
            raise SpecError(f"rewards: row {i} has {len(row)} entries, expected {n}")
    m = spec.n_rows
    if len(spec.row_labels) != m:
        raise SpecError(f"row_labels: expected {m} labels, got {len(spec.row_labels)}")
    if len(spec.column_labels) != n:
        raise SpecError(f"column_labels: expected {n} labels, got {len(spec.column_labels)}")
    if len(set(spec.row_labels)) != m:
        raise SpecError("row_labels: labels must be unique")
    if len(set(spec.column_labels)) != n:
        raise SpecError("column_labels: labels must be unique")
    if len(spec.belief_best_response) != m:
        raise SpecError(
            f"belief_best_response: expected {m} entries, got {len(spec.belief_best_response)}"
        )
    for k, b in enumerate(spec.belief_best_response):
        if not 0 <= b < n:
            raise SpecError(f"belief_best_response: invalid belief column at row {k}")
    if len(spec.revealing) != m:
        raise SpecError(f"revealing: expected {m} entries, got {len(spec.revealing)}")
    if not 0.0 <= spec.alpha <= 1.0:
        raise SpecError(f"alpha: must be in [0, 1], got {spec.alpha}")
    if spec.horizon < 1:
        raise SpecError(f"horizon: must be >= 1, got {spec.horizon}")
    if spec.model not in MODELS:
        raise SpecError(f"model: must be one of {MODELS}, got {spec.model!r}")
    return spec


@lru_cache(maxsize=1024)
def row_stats(spec: GameSpec) -> RowStats:
    """Best and believed-response payoffs per row; argmax ties -> lowest column."""
    best_value, best_column, naive_value = [], [], []
    for k, row in enumerate(spec.rewards):
        best = max(row)
        best_value.append(best)
        best_column.append(row.index(best))
        naive_value.append(row[spec.belief_best_response[k]])
    return RowStats(tuple(best_value), tuple(best_column), tuple(naive_value))


def spec_to_dict(spec: GameSpec) -> dict:
    return {
        "row_labels": list(spec.row_labels),
        "column_labels": list(spec.column_labels),
        "rewards": [list(row) for row in spec.rewards],
        "belief_best_response": list(spec.belief_best_response),
        "revealing": list(spec.revealing),
        "alpha": spec.alpha,
        "horizon": spec.horizon,
        "model": spec.model,
    }


def spec_from_dict(doc: dict) -> GameSpec:
    if not isinstance(doc, dict):
        raise SpecError(f"game-spec document must be an object, got {type(doc).__name__}")
    missing = [f for f in SPEC_FIELDS if f not in doc]
    if missing:
        raise SpecError(f"missing required field {missing[0]!r}")
    try:
        spec = GameSpec(**{f: doc[f] for f in SPEC_FIELDS})
    except (TypeError, ValueError) as exc:
        raise SpecError(f"malformed game-spec document: {exc}") from exc
    return validate(spec)


def save_spec(spec: GameSpec) -> str:
    """Serialize to the JSON game-spec document format."""
    return json.dumps(spec_to_dict(spec), indent=2) + "\n"


def load_spec(text: str) -> GameSpec:
    """Parse and validate a JSON game-spec document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(
            f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return spec_from_dict(doc)


def load_spec_file(path) -> GameSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return load_spec(fh.read())
