"""Monte Carlo roll-outs, random instances, and the horizon-sweep study.

Simulated followers always use the true partial model: per-row knowledge,
one learning coin per play of an unlearned revealing row, timing per the
spec's model. Planner beliefs are advanced only through the observations
the model makes legal.

Reproducibility contract: run i of a simulation draws from its own
generator seeded by (seed, i), consuming exactly one uniform per round
(whether or not a learning coin is eligible). Identical configs therefore
produce bit-identical reports, and a scripted client can replay any run.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .belief_solver import solve_belief, solve_complete
from .game import GameSpec, SpecError, row_stats, validate
from .policies import policy_for

DEFAULT_HORIZONS = (1, 2, 4, 8, 16, 32, 64, 128)


@dataclass(frozen=True)
class SimConfig:
    """Knobs for simulate() and study().

    ``planner`` picks which solver's policy study() rolls out; simulate()
    takes an explicit policy and echoes the label. ``horizons`` and the
    instance-generator shape (``m``, ``n``) drive study() only.
    """

    runs: int = 1000
    seed: int = 0
    planner: str = "partial"
    horizons: tuple[int, ...] = DEFAULT_HORIZONS
    m: int = 3
    n: int = 3
    instances: int = 1000
    keep_trajectories: bool = False

    def __post_init__(self):
        if self.runs < 1:
            raise SpecError(f"runs: must be >= 1, got {self.runs}")
        if len(self.horizons) == 0:
            raise SpecError("horizons: sweep must be non-empty")
        if self.planner not in ("partial", "complete"):
            raise SpecError(f"planner: expected 'partial' or 'complete', got {self.planner!r}")


@dataclass
class SimReport:
    """Aggregates of one batch of roll-outs; per-round means sum to the total."""

    per_round_mean: tuple[float, ...]
    total_mean: float
    stderr: float
    runs: int
    seed: int
    planner: str
    trajectories: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_json(self) -> str:
        return json.dumps(
            {
                "per_round_mean": list(self.per_round_mean),
                "total_mean": self.total_mean,
                "stderr": self.stderr,
                "runs": self.runs,
                "seed": self.seed,
                "planner": self.planner,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "SimReport":
        doc = json.loads(text)
        return cls(
            per_round_mean=tuple(doc["per_round_mean"]),
            total_mean=doc["total_mean"],
            stderr=doc["stderr"],
            runs=doc["runs"],
            seed=doc["seed"],
            planner=doc["planner"],
        )


def run_uniforms(seed: int, runs: int, horizon: int) -> np.ndarray:
    """The (runs, horizon) coin inputs: row i comes from default_rng([seed, i])."""
    out = np.empty((runs, horizon))
    for i in range(runs):
        out[i] = np.random.default_rng([seed, i]).random(horizon)
    return out


def rollout_rewards(spec: GameSpec, policy, uniforms: np.ndarray) -> np.ndarray:
    """Vectorized roll-outs against true partially adapting followers.

    ``uniforms[i, t-1]`` decides round t's learning coin for run i. Returns
    the (runs, horizon) realized reward matrix.
    """
    validate(spec)
    runs = uniforms.shape[0]
    m, T = spec.n_rows, spec.horizon
    stats = row_stats(spec)
    best_col = np.array(stats.best_column)
    best_val = np.array(stats.best_value)
    believed = np.array(spec.belief_best_response)
    revealing = np.array(spec.revealing, dtype=bool)
    rewards_tbl = np.array(spec.rewards)

    learned = np.zeros((runs, m), dtype=bool)
    pstates = np.full(runs, policy.initial_state(), dtype=np.int64)
    rewards = np.zeros((runs, T))
    run_idx = np.arange(runs)
    full_obs = spec.model in ("M1", "M2")

    for t in range(1, T + 1):
        rows = np.asarray(policy.action_array(t, pstates), dtype=np.int64)
        eligible = revealing[rows] & ~learned[run_idx, rows]
        coin = uniforms[:, t - 1] < spec.alpha
        if spec.model == "M1":
            learned[run_idx, rows] |= eligible & coin
        responds_best = learned[run_idx, rows]
        cols = np.where(responds_best, best_col[rows], believed[rows])
        r = rewards_tbl[rows, cols]
        rewards[:, t - 1] = r
        if spec.model != "M1":
            learned[run_idx, rows] |= eligible & coin
        flags = learned[run_idx, rows] if full_obs else None
        pstates = policy.update_array(t, pstates, rows, r, flags)
    return rewards


def simulate(spec: GameSpec, policy, config: SimConfig) -> SimReport:
    """Roll the policy ``config.runs`` times; aggregate per-round and total means."""
    plan = getattr(policy, "plan", None)
    if plan is not None:
        if plan.spec.model != spec.model:
            raise SpecError(
                f"planner/spec model mismatch: plan solved for {plan.spec.model}, "
                f"spec is {spec.model}"
            )
        if plan.spec.n_rows != spec.n_rows:
            raise SpecError(
                f"planner/spec shape mismatch: plan has {plan.spec.n_rows} rows, "
                f"spec has {spec.n_rows}"
            )
    uniforms = run_uniforms(config.seed, config.runs, spec.horizon)
    rewards = rollout_rewards(spec, policy, uniforms)
    per_round = rewards.mean(axis=0)
    totals = rewards.sum(axis=1)
    stderr = float(totals.std(ddof=1) / np.sqrt(config.runs)) if config.runs > 1 else 0.0
    return SimReport(
        per_round_mean=tuple(float(x) for x in per_round),
        total_mean=float(per_round.sum()),
        stderr=stderr,
        runs=config.runs,
        seed=config.seed,
        planner=config.planner,
        trajectories=rewards if config.keep_trajectories else None,
    )


def generate_instance(
    m: int,
    n: int,
    rng: np.random.Generator,
    horizon: int = 3,
    model: str = "M3",
) -> GameSpec:
    """Random instance: Uniform[0,1] payoffs, uniform believed responses,
    every row revealing, alpha ~ Uniform[0.1, 0.9]."""
    if m < 1 or n < 1:
        raise SpecError(f"instance shape must be at least 1x1, got {m}x{n}")
    rewards = rng.random((m, n))
    believed = rng.integers(0, n, size=m)
    alpha = float(rng.uniform(0.1, 0.9))
    return validate(
        GameSpec(
            row_labels=tuple(f"r{i}" for i in range(m)),
            column_labels=tuple(f"c{j}" for j in range(n)),
            rewards=tuple(tuple(row) for row in rewards),
            belief_best_response=tuple(int(b) for b in believed),
            revealing=(True,) * m,
            alpha=alpha,
            horizon=horizon,
            model=model,
        )
    )


def study(config: SimConfig = SimConfig(), out=None) -> list[dict]:
    """Horizon sweep comparing the partial planner against the complete baseline.

    For each T: fresh random instances (seeded by (seed, T, i)), both
    planners solved per instance and rolled out against the same true
    partial followers. Rows report the mean reward per round across
    instances and runs. ``out`` may be a path or file object for CSV.
    """
    rows = []
    for T in config.horizons:
        means = {"partial": [], "complete": []}
        for i in range(config.instances):
            rng = np.random.default_rng([config.seed, T, i])
            spec = generate_instance(config.m, config.n, rng, horizon=T, model="M3")
            plans = {
                "partial": solve_belief(spec),
                "complete": solve_complete(spec, "partial"),
            }
            for p_idx, (name, plan) in enumerate(plans.items()):
                sim = simulate(
                    spec,
                    policy_for(plan),
                    SimConfig(
                        runs=config.runs,
                        seed=int(np.random.default_rng([config.seed, T, i, p_idx]).integers(2**62)),
                        planner=name,
                        horizons=(T,),
                    ),
                )
                means[name].append(sim.total_mean / T)
        for name in ("partial", "complete"):
            arr = np.array(means[name])
            rows.append(
                {
                    "T": T,
                    "planner": name,
                    "mean_reward_per_round": float(arr.mean()),
                    "stderr": float(arr.std(ddof=1) / np.sqrt(len(arr))) if len(arr) > 1 else 0.0,
                    "instances": config.instances,
                    "runs_per_instance": config.runs,
                    "seed": config.seed,
                }
            )
    if out is not None:
        _write_study_csv(rows, out)
    return rows


STUDY_COLUMNS = (
    "T",
    "planner",
    "mean_reward_per_round",
    "stderr",
    "instances",
    "runs_per_instance",
    "seed",
)


def _write_study_csv(rows: list[dict], out) -> None:
    own = isinstance(out, (str, bytes)) or hasattr(out, "__fspath__")
    fh = open(out, "w", newline="", encoding="utf-8") if own else out
    try:
        writer = csv.DictWriter(fh, fieldnames=STUDY_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    finally:
        if own:
            fh.close()
