"""Randomized cross-checks of the planners against the brute-force oracle.

Used by the CLI verify command and by the acceptance suite. Instances are
drawn inside the oracle's caps; each check records the instance index and
derived seed so failures are replayable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .belief_solver import solve_belief
from .full_solver import FullObsState, solve_full
from .oracle import oracle_value
from .simulate import generate_instance

EQUIV_ALPHAS = (0.1, 0.3, 0.5, 0.7, 0.9)
TOLERANCE = 1e-9


@dataclass
class CheckFailure:
    index: int
    seed: int
    model: str
    detail: str


@dataclass
class SuiteResult:
    instances: int
    seed: int
    max_deviation: float
    failures: list[CheckFailure]

    @property
    def passed(self) -> bool:
        return not self.failures


def _random_small_instance(seed: int, index: int):
    rng = np.random.default_rng([seed, index])
    m = int(rng.integers(1, 4))
    n = int(rng.integers(1, 4))
    T = int(rng.integers(1, 5))
    spec = generate_instance(m, n, rng, horizon=T, model="M3")
    return replace(spec, alpha=float(rng.choice(EQUIV_ALPHAS)))


def equivalence_suite(instances: int = 200, seed: int = 0) -> SuiteResult:
    """solve_full (M1, M2) and solve_belief (M3) must match oracle_value."""
    max_dev = 0.0
    failures: list[CheckFailure] = []
    for i in range(instances):
        spec = _random_small_instance(seed, i)
        for model in ("M1", "M2", "M3"):
            variant = replace(spec, model=model)
            if model == "M3":
                got = solve_belief(variant).value
            else:
                got = solve_full(variant).value
            want = oracle_value(variant)
            dev = abs(got - want)
            max_dev = max(max_dev, dev)
            if dev > TOLERANCE:
                failures.append(
                    CheckFailure(i, seed, model, f"planner {got!r} vs oracle {want!r}")
                )
    return SuiteResult(instances, seed, max_dev, failures)


def monotonicity_suite(instances: int = 200, seed: int = 0) -> SuiteResult:
    """Optimal M2 value must be at least the optimal M3 value (more information)."""
    failures: list[CheckFailure] = []
    worst = 0.0
    for i in range(instances):
        spec = _random_small_instance(seed, i)
        v2 = solve_full(replace(spec, model="M2")).value
        v3 = solve_belief(replace(spec, model="M3")).value
        gap = v3 - v2
        worst = max(worst, gap)
        if gap > TOLERANCE:
            failures.append(CheckFailure(i, seed, "M2/M3", f"M3 {v3!r} exceeds M2 {v2!r}"))
    return SuiteResult(instances, seed, worst, failures)


def lemma_suite(instances: int = 500, seed: int = 1, states_per_instance: int = 8) -> SuiteResult:
    """Commit structure of extracted full-observability policies.

    At any state with a non-empty revealed set the rule must return the
    best revealed row (highest row maximum, lowest index on ties), and the
    same row again at every later round with that revealed set. The
    expected row is recomputed here independently of the solver.
    """
    failures: list[CheckFailure] = []
    for i in range(instances):
        rng = np.random.default_rng([seed, i])
        m = int(rng.integers(1, 6))
        n = int(rng.integers(1, 5))
        T = int(rng.integers(1, 7))
        spec = replace(
            generate_instance(m, n, rng, horizon=T, model="M3"),
            model=str(rng.choice(["M1", "M2"])),
        )
        plan = solve_full(spec)
        best = [max(row) for row in spec.rewards]
        for _ in range(states_per_instance):
            revealed = tuple(bool(b) for b in rng.integers(0, 2, size=m))
            if not any(revealed):
                continue
            expected = min(
                (k for k in range(m) if revealed[k]),
                key=lambda k: (-best[k], k),
            )
            rounds = [int(r) for r in rng.integers(1, T + 1, size=2)]
            picks = [plan.action_rule(FullObsState(revealed, t)) for t in sorted(rounds)]
            if any(p != expected for p in picks):
                failures.append(
                    CheckFailure(
                        i, seed, spec.model, f"revealed {revealed}: picked {picks}, expected {expected}"
                    )
                )
    return SuiteResult(instances, seed, 0.0, failures)
