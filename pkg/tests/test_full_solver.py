from dataclasses import replace

import numpy as np
import pytest

from revealplan import (
    FullObsPolicy,
    FullObsState,
    GameSpec,
    SpecError,
    TABLE_CLEARING,
    oracle_policy_check,
    oracle_value,
    row_stats,
    solve_full,
)
from revealplan.simulate import generate_instance

EXPLORE_SPEC = GameSpec(
    row_labels=("risky", "safe"),
    column_labels=("left", "right"),
    rewards=((0, 5), (2, 2)),
    belief_best_response=(0, 0),
    revealing=(True, True),
    alpha=1.0,
    horizon=2,
    model="M1",
)


def test_alpha_one_m1_explores_high_row():
    plan = solve_full(EXPLORE_SPEC)
    assert plan.first_action == 0
    assert plan.value == pytest.approx(10.0, abs=1e-12)


def test_m1_half_alpha_value():
    plan = solve_full(replace(EXPLORE_SPEC, alpha=0.5))
    assert plan.first_action == 0
    assert plan.value == pytest.approx(6.25, abs=1e-12)


def test_m2_half_alpha_prefers_safe_row():
    plan = solve_full(replace(EXPLORE_SPEC, alpha=0.5, model="M2"))
    assert plan.first_action == 1
    assert plan.value == pytest.approx(4.0, abs=1e-12)


def test_m3_rejected():
    with pytest.raises(SpecError, match="M3"):
        solve_full(replace(EXPLORE_SPEC, model="M3"))


def test_invalid_state_rejected():
    with pytest.raises(SpecError, match="round"):
        solve_full(EXPLORE_SPEC, FullObsState((False, False), 5))
    with pytest.raises(SpecError, match="revealed"):
        solve_full(EXPLORE_SPEC, FullObsState((False,), 1))


def test_alpha_zero_degenerate():
    for model in ("M1", "M2"):
        spec = replace(TABLE_CLEARING, alpha=0.0, model=model)
        plan = solve_full(spec)
        stats = row_stats(spec)
        assert plan.value == pytest.approx(spec.horizon * max(stats.naive_value), abs=1e-12)
        assert plan.first_action == stats.naive_value.index(max(stats.naive_value))
        assert plan.realization() == (plan.first_action,) * spec.horizon


def test_alpha_one_m1_degenerate():
    spec = replace(TABLE_CLEARING, alpha=1.0, model="M1")
    stats = row_stats(spec)
    best_revealing = max(
        stats.best_value[k] for k in range(3) if spec.revealing[k]
    )
    best_nonrevealing = max(
        (stats.naive_value[k] for k in range(3) if not spec.revealing[k]), default=-np.inf
    )
    expected = spec.horizon * max(best_revealing, best_nonrevealing)
    assert solve_full(spec).value == pytest.approx(expected, abs=1e-12)


def test_exploit_branch_commits_to_best_revealed_row():
    spec = replace(TABLE_CLEARING, model="M2")
    plan = solve_full(spec)
    state = FullObsState((False, True, False), 2)
    assert plan.action_rule(state) == 1
    assert plan.value_at(state) == pytest.approx(3.0 * 2, abs=1e-12)
    both = FullObsState((False, True, True), 3)
    assert plan.action_rule(both) == 2
    assert plan.value_at(both) == pytest.approx(4.0, abs=1e-12)


def test_rule_stable_across_rounds_with_same_revealed_set():
    rng = np.random.default_rng(5)
    for _ in range(25):
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        spec = replace(
            generate_instance(m, n, rng, horizon=int(rng.integers(2, 6))),
            model=str(rng.choice(["M1", "M2"])),
        )
        plan = solve_full(spec)
        best = row_stats(spec).best_value
        revealed = tuple(bool(b) for b in rng.integers(0, 2, size=m))
        if not any(revealed):
            continue
        expected = min((k for k in range(m) if revealed[k]), key=lambda k: (-best[k], k))
        picks = {
            plan.action_rule(FullObsState(revealed, t)) for t in range(1, spec.horizon + 1)
        }
        assert picks == {expected}


def test_matches_oracle_on_small_grid():
    rng = np.random.default_rng(11)
    for _ in range(40):
        spec = generate_instance(
            int(rng.integers(1, 4)), int(rng.integers(1, 4)), rng,
            horizon=int(rng.integers(1, 5)),
        )
        for model in ("M1", "M2"):
            variant = replace(spec, model=model)
            assert solve_full(variant).value == pytest.approx(
                oracle_value(variant), abs=1e-9
            )


def test_value_certified_by_policy_evaluation():
    for model in ("M1", "M2"):
        spec = replace(TABLE_CLEARING, model=model)
        plan = solve_full(spec)
        assert oracle_policy_check(spec, FullObsPolicy(plan)) == pytest.approx(
            plan.value, abs=1e-9
        )


def test_runtime_scales_linearly():
    import time

    def solve_time(m, T):
        spec = generate_instance(m, 4, np.random.default_rng(0), horizon=T, model="M2")
        start = time.perf_counter()
        solve_full(spec)
        return time.perf_counter() - start

    solve_time(200, 200)  # warm-up
    base = min(solve_time(500, 500) for _ in range(3))
    big = min(solve_time(1000, 1000) for _ in range(3))
    assert big < 1.0
    # 2x rows and 2x rounds is 4x work; allow generous noise.
    assert big <= max(8 * base, 0.5)
