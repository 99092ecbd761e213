"""Compiled-in game specs.

The table-clearing scenario: a human and a robot arm clear bottles and
cups into bins. The human initially just clears cups; she has not yet
seen the robot drop the bin while reaching past it, or stall on the
far water bottle, so she has no reason to move the bin or empty the
bottle. Idling teaches her nothing, hence the Noop row is non-revealing.
"""

from __future__ import annotations

from .game import GameSpec

TABLE_CLEARING = GameSpec(
    row_labels=("Noop", "Pick up closest", "Pick up both"),
    column_labels=(
        "Clear cups",
        "Clear cups & move bin",
        "Clear cups & move bin & empty bottle",
    ),
    rewards=(
        (2.0, 2.0, 2.0),
        (1.0, 3.0, 3.0),
        (0.0, 0.0, 4.0),
    ),
    belief_best_response=(0, 0, 0),
    revealing=(False, True, True),
    alpha=0.9,
    horizon=3,
    model="M3",
)

PRESETS: dict[str, GameSpec] = {
    "table-clearing": TABLE_CLEARING,
}

# Presentation copy for designated failure outcomes, keyed (row, column).
# Served to clients alongside round outcomes; not part of the spec schema.
OUTCOME_NOTES: dict[str, dict[tuple[int, int], str]] = {
    "table-clearing": {
        (1, 0): "The robot pushed the green bin and dropped the blue bin off the table.",
        (2, 0): "The torque of the robot motors exceeded their limits.",
        (2, 1): "The torque of the robot motors exceeded their limits.",
    },
}


def get_preset(name: str) -> GameSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {sorted(PRESETS)}") from None


def preset_document(name: str) -> str:
    """The bundled game-spec JSON document for a preset."""
    from importlib import resources

    get_preset(name)
    return resources.files("revealplan").joinpath(f"data/{name}.json").read_text("utf-8")
