from dataclasses import replace

import numpy as np
import pytest

from revealplan import (
    CapacityError,
    FixedPlanPolicy,
    GameSpec,
    TABLE_CLEARING,
    oracle_policy_check,
    oracle_value,
    row_stats,
)
from revealplan.simulate import generate_instance

TWO_ROW = GameSpec(
    row_labels=("risky", "safe"),
    column_labels=("left", "right"),
    rewards=((0, 5), (2, 2)),
    belief_best_response=(0, 0),
    revealing=(True, True),
    alpha=0.5,
    horizon=2,
    model="M1",
)


def test_two_row_values_per_model():
    assert oracle_value(TWO_ROW) == pytest.approx(6.25, abs=1e-12)
    assert oracle_value(replace(TWO_ROW, model="M2")) == pytest.approx(4.0, abs=1e-12)
    assert oracle_value(replace(TWO_ROW, model="M3")) == pytest.approx(4.0, abs=1e-12)


def test_table_clearing_m3_value():
    assert oracle_value(TABLE_CLEARING) == pytest.approx(7.56, abs=1e-9)


def test_single_round_closed_forms():
    rng = np.random.default_rng(2)
    for _ in range(30):
        spec = generate_instance(
            int(rng.integers(1, 4)), int(rng.integers(1, 5)), rng, horizon=1
        )
        spec = replace(spec, revealing=tuple(bool(b) for b in rng.integers(0, 2, size=spec.n_rows)))
        stats = row_stats(spec)
        max_naive = max(stats.naive_value)
        for model in ("M2", "M3"):
            assert oracle_value(replace(spec, model=model)) == pytest.approx(
                max_naive, abs=1e-12
            )
        m1_candidates = [
            spec.alpha * stats.best_value[k] + (1 - spec.alpha) * stats.naive_value[k]
            if spec.revealing[k]
            else stats.naive_value[k]
            for k in range(spec.n_rows)
        ]
        assert oracle_value(replace(spec, model="M1")) == pytest.approx(
            max(m1_candidates), abs=1e-12
        )


def test_scaling_equivariance():
    rng = np.random.default_rng(4)
    for _ in range(10):
        spec = generate_instance(2, 3, rng, horizon=3, model="M3")
        scaled = replace(
            spec, rewards=tuple(tuple(3.5 * v for v in row) for row in spec.rewards)
        )
        assert oracle_value(scaled) == pytest.approx(3.5 * oracle_value(spec), rel=1e-9)


def test_shift_equivariance():
    rng = np.random.default_rng(6)
    for model in ("M1", "M2", "M3"):
        spec = replace(generate_instance(2, 2, rng, horizon=3), model=model)
        shifted = replace(
            spec, rewards=tuple(tuple(v + 2.0 for v in row) for row in spec.rewards)
        )
        assert oracle_value(shifted) == pytest.approx(
            oracle_value(spec) + 2.0 * spec.horizon, abs=1e-9
        )


def test_caps_enforced():
    rng = np.random.default_rng(0)
    with pytest.raises(CapacityError, match="caps"):
        oracle_value(generate_instance(5, 2, rng))
    with pytest.raises(CapacityError, match="caps"):
        oracle_value(generate_instance(2, 7, rng))
    with pytest.raises(CapacityError, match="caps"):
        oracle_value(generate_instance(2, 2, rng, horizon=5))


def test_fixed_plan_under_true_partial_model():
    assert oracle_policy_check(TABLE_CLEARING, FixedPlanPolicy((1, 2, 2))) == pytest.approx(
        4.6, abs=1e-12
    )


def test_constant_noop_plan():
    assert oracle_policy_check(TABLE_CLEARING, FixedPlanPolicy((0, 0, 0))) == pytest.approx(
        6.0, abs=1e-12
    )


def test_history_node_rejects_leaky_probabilities():
    from revealplan import HistoryNode

    HistoryNode(1, (((False, False), 0.4), ((True, False), 0.6)), "col=1")
    with pytest.raises(ValueError, match="sum"):
        HistoryNode(1, (((False, False), 0.4), ((True, False), 0.5)), "col=1")


def test_value_dominates_any_fixed_plan():
    rng = np.random.default_rng(8)
    for _ in range(25):
        spec = replace(
            generate_instance(3, 3, rng, horizon=3),
            model=str(rng.choice(["M1", "M2", "M3"])),
        )
        plan = tuple(int(r) for r in rng.integers(0, 3, size=3))
        assert oracle_value(spec) >= oracle_policy_check(spec, FixedPlanPolicy(plan)) - 1e-9
