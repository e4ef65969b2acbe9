"""Level-by-level growth runs over the minor lattice.

A run walks levels k0..k1 of one matrix.  At each level it holds a tracked
count of heavy minors and a heaviness threshold; the step to the next level
is classified into one of five types by testing, against exact lattice
counts, whether enough heavy children exist at the same or at a grown
threshold.  A potential accumulates (1 - eps/2) per step and is paid back by
the threshold-growing and count-exploding step types, so a low final
potential certifies that the threshold grew on most levels.

The tracked count is deliberately a lower-bound token: the exact heavy count
from the lattice is logged next to it at every level.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .lattice import (
    DEFAULT_MAX_N,
    HeavyFamily,
    MinorTable,
    SplitVerdict,
    build_lattice,
    parent_histogram,
    split_events,
)
from .matrices import RowPrefix, SignMatrix, sample_sign_matrix
from .rng import RngStream


class StepType(str, Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"


def count_threshold(x: float) -> int:
    """Counting events need integer thresholds: round up, floor at 1."""
    return max(1, math.ceil(x))


@dataclass(frozen=True)
class ProcessConfig:
    """Knobs for growth and endgame runs.

    eps_prime and c default to eps/6 and eps; k0, k1, L and t_good default to
    the bench-scale formulas below, which keep every branch reachable at
    n <= 22 (the asymptotic formulas collapse to 0 there).
    """

    eps0: float = 0.5
    eps: float = 0.25
    eps_prime: Optional[float] = None
    c: Optional[float] = None
    k0: Optional[int] = None
    k1: Optional[int] = None
    L: Optional[int] = None
    t_good: Optional[int] = None
    grow_factor: Optional[float] = None  # threshold multiplier; default n**(1/2 - eps)
    keep_fraction: Optional[float] = None  # child-count fraction for keep steps; default eps/6

    def __post_init__(self) -> None:
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must be in (0, 1), got {self.eps}")
        if not 0 < self.eps0 < 1:
            raise ValueError(f"eps0 must be in (0, 1), got {self.eps0}")
        if self.eps_prime is not None:
            if not 0 < self.eps_prime:
                raise ValueError("eps_prime must be positive")
            if self.eps_prime > self.eps / 6:
                raise ValueError(
                    f"eps_prime must be at most eps/6 = {self.eps / 6:.6g}, got {self.eps_prime}"
                )
        if self.c is not None and not 0 < self.c < 1:
            raise ValueError(f"c must be in (0, 1), got {self.c}")

    def eff_eps_prime(self) -> float:
        return self.eps_prime if self.eps_prime is not None else self.eps / 6

    def eff_c(self) -> float:
        return self.c if self.c is not None else self.eps

    def start_level(self, n: int) -> int:
        return self.k0 if self.k0 is not None else math.floor(self.eps * n) + 1

    def end_level(self, n: int) -> int:
        return self.k1 if self.k1 is not None else math.floor((1 - self.eps) * n)

    def endgame_depth(self, n: int) -> int:
        # Bench-scale stand-in for log(n)/100, which is 0 for any feasible n.
        return self.L if self.L is not None else max(1, math.floor(math.log(n)) - 1)

    def good_child_threshold(self, n: int) -> int:
        return self.t_good if self.t_good is not None else max(2, math.floor(n**0.1))

    def lam_grow_factor(self, n: int) -> float:
        return self.grow_factor if self.grow_factor is not None else float(n) ** (0.5 - self.eps)

    def keep_frac(self) -> float:
        return self.keep_fraction if self.keep_fraction is not None else self.eps / 6

    def describe(self, n: int) -> dict:
        return {
            "eps0": self.eps0,
            "eps": self.eps,
            "eps_prime": self.eff_eps_prime(),
            "c": self.eff_c(),
            "k0": self.start_level(n),
            "k1": self.end_level(n),
            "L": self.endgame_depth(n),
            "t_good": self.good_child_threshold(n),
            "grow_factor": self.lam_grow_factor(n),
            "keep_fraction": self.keep_frac(),
        }


@dataclass(frozen=True)
class StepOutcome:
    step_type: StepType
    branch: SplitVerdict
    new_tracked: int
    new_threshold: float
    # exact counts the classification consulted
    next_at_threshold: int
    next_at_grown: int
    grown_threshold: float
    explode_count: int  # count target for a type-I step
    keep_count: int  # count target for the keep event


def classify_step(table: MinorTable, k: int, tracked: int, threshold: float,
                  cfg: ProcessConfig) -> StepOutcome:
    """Classify the step from level k given the tracked heavy family.

    The family is the `tracked` lexicographically-smallest heavy masks (any
    witness set is allowed; the smallest ones make runs reproducible).
    Exactly one type is returned; V is the fallback with tracked count 0.
    """
    if tracked < 1:
        raise ValueError("classification needs a nonempty tracked family")
    n = table.n
    masks = table.heavy_masks(k, threshold)
    if len(masks) < tracked:
        raise ValueError(f"tracked count {tracked} exceeds exact heavy count {len(masks)}")
    family = HeavyFamily(k=k, threshold=threshold, members=masks[:tracked])
    hist = parent_histogram(table, family)
    branch = split_events(hist, cfg.eps, cfg.eff_c(), tracked)

    grown_threshold = cfg.lam_grow_factor(n) * threshold
    next_at_threshold = table.heavy_count(k + 1, threshold)
    next_at_grown = table.heavy_count(k + 1, grown_threshold)
    explode_count = count_threshold(n**cfg.eps * tracked / 4)
    keep_count = count_threshold(cfg.keep_frac() * tracked)
    shrunk = count_threshold(cfg.eff_eps_prime() * tracked)

    if branch is SplitVerdict.PRIME:
        if next_at_threshold >= explode_count:
            step, new = StepType.I, (explode_count, threshold)
        elif next_at_threshold >= keep_count:
            step, new = StepType.II, (shrunk, threshold)
        else:
            step, new = StepType.V, (0, threshold)
    else:
        if next_at_grown >= shrunk:
            step, new = StepType.III, (shrunk, grown_threshold)
        elif next_at_threshold >= keep_count:
            step, new = StepType.IV, (shrunk, threshold)
        else:
            step, new = StepType.V, (0, threshold)

    return StepOutcome(
        step_type=step,
        branch=branch,
        new_tracked=new[0],
        new_threshold=new[1],
        next_at_threshold=next_at_threshold,
        next_at_grown=next_at_grown,
        grown_threshold=grown_threshold,
        explode_count=explode_count,
        keep_count=keep_count,
    )


@dataclass(frozen=True)
class LevelRecord:
    """State at one level, plus the classification of the step leaving it."""

    k: int
    tracked: int
    true_heavy: int
    threshold: float
    potential: float
    step_type: Optional[StepType]
    branch: Optional[SplitVerdict] = None
    next_at_threshold: Optional[int] = None
    next_at_grown: Optional[int] = None
    grown_threshold: Optional[float] = None


@dataclass
class ProcessTrace:
    n: int
    cfg: ProcessConfig
    records: list[LevelRecord] = field(default_factory=list)
    successful: bool = False
    table: Optional[MinorTable] = None

    @property
    def final(self) -> LevelRecord:
        return self.records[-1]

    def step_type_counts(self) -> dict[str, int]:
        counts = {t.value: 0 for t in StepType}
        for rec in self.records:
            if rec.step_type is not None:
                counts[rec.step_type.value] += 1
        return counts


def potential_increment(step_type: StepType, cfg: ProcessConfig) -> float:
    inc = 1 - cfg.eps / 2
    if step_type is StepType.I:
        inc -= 3
    elif step_type is StepType.III:
        inc -= 1
    return inc


def run_growth(matrix: SignMatrix | RowPrefix, cfg: ProcessConfig,
               keep_table: bool = False, max_n: int | None = None) -> ProcessTrace:
    """Run one growth pass over a fixed matrix (or a prefix with >= k1 rows).

    Start: the tracked count is 1 if some level-k0 minor has |value| >= 1,
    else 0 and the run can only fail.  A zero tracked count propagates
    unchanged to k1 (no classification happens on those levels).  Success at
    k1 requires a nonzero tracked count and potential <= eps' * n / 2.
    """
    prefix = matrix.prefix(matrix.n) if isinstance(matrix, SignMatrix) else matrix
    n = prefix.n
    k0 = cfg.start_level(n)
    k1 = cfg.end_level(n)
    if not 1 <= k0 <= k1 <= n:
        raise ValueError(f"bad level range k0={k0}, k1={k1} for n={n}")
    if prefix.k < k1:
        raise ValueError(f"need {k1} exposed rows, prefix has {prefix.k}")

    table = build_lattice(prefix, k1, max_n=max_n if max_n is not None else DEFAULT_MAX_N)
    tracked = 1 if table.heavy_count(k0, 1) >= 1 else 0
    threshold = 1.0
    potential = 0.0

    trace = ProcessTrace(n=n, cfg=cfg)
    for k in range(k0, k1):
        true_heavy = table.heavy_count(k, threshold)
        if tracked == 0:
            trace.records.append(LevelRecord(k, 0, true_heavy, threshold, potential, None))
            continue
        out = classify_step(table, k, tracked, threshold, cfg)
        trace.records.append(
            LevelRecord(
                k=k,
                tracked=tracked,
                true_heavy=true_heavy,
                threshold=threshold,
                potential=potential,
                step_type=out.step_type,
                branch=out.branch,
                next_at_threshold=out.next_at_threshold,
                next_at_grown=out.next_at_grown,
                grown_threshold=out.grown_threshold,
            )
        )
        tracked = out.new_tracked
        threshold = out.new_threshold
        potential += potential_increment(out.step_type, cfg)

    trace.records.append(
        LevelRecord(k1, tracked, table.heavy_count(k1, threshold), threshold, potential, None)
    )
    trace.successful = is_successful(trace, cfg)
    if keep_table:
        trace.table = table
    return trace


def is_successful(trace: ProcessTrace, cfg: ProcessConfig) -> bool:
    """Nonzero tracked count at k1 and potential at most eps' * n / 2 (inclusive)."""
    last = trace.records[-1]
    return last.tracked != 0 and last.potential <= cfg.eff_eps_prime() * trace.n / 2


def replay_records(trace: ProcessTrace) -> list[tuple[int, float, float]]:
    """Re-derive (tracked, threshold, potential) per level from the step log.

    Bookkeeping identity used by tests: replaying the update rules from each
    record must reproduce the next record exactly.
    """
    cfg = trace.cfg
    n = trace.n
    out = []
    rec0 = trace.records[0]
    tracked, threshold, potential = rec0.tracked, rec0.threshold, rec0.potential
    out.append((tracked, threshold, potential))
    for rec in trace.records[:-1]:
        st = rec.step_type
        if st is None:
            pass  # zero tracked count propagates unchanged
        else:
            if st is StepType.I:
                tracked = count_threshold(n**cfg.eps * rec.tracked / 4)
            elif st in (StepType.II, StepType.III, StepType.IV):
                tracked = count_threshold(cfg.eff_eps_prime() * rec.tracked)
            else:
                tracked = 0
            if st is StepType.III:
                threshold = cfg.lam_grow_factor(n) * rec.threshold
            potential += potential_increment(st, cfg)
        out.append((tracked, threshold, potential))
    return out


def sample_growth(n: int, cfg: ProcessConfig, rng: RngStream,
                  keep_table: bool = False) -> tuple[ProcessTrace, SignMatrix]:
    """Sample one matrix from the stream and run growth on it."""
    matrix = sample_sign_matrix(n, rng)
    return run_growth(matrix, cfg, keep_table=keep_table), matrix


def trace_header(trace: ProcessTrace, seed: int | None = None,
                 stream: int | None = None) -> dict:
    header: dict = {"record": "header", "n": trace.n, "config": trace.cfg.describe(trace.n)}
    if seed is not None:
        header["seed"] = seed
    if stream is not None:
        header["stream"] = stream
    return header


def trace_level_dicts(trace: ProcessTrace) -> list[dict]:
    """Per-level dicts in the stable wire format."""
    rows = []
    for rec in trace.records:
        rows.append(
            {
                "k": rec.k,
                "N_k": rec.tracked,
                "true_heavy_count": rec.true_heavy,
                "lambda_k": rec.threshold,
                "W_k": rec.potential,
                "step_type": rec.step_type.value if rec.step_type is not None else None,
            }
        )
    return rows


def write_trace_jsonl(trace: ProcessTrace, path, seed: int | None = None,
                      stream: int | None = None) -> None:
    """One header record, then one record per level; bit-stable per (seed, config)."""
    with open(path, "w") as fh:
        fh.write(json.dumps(trace_header(trace, seed, stream), sort_keys=True) + "\n")
        for row in trace_level_dicts(trace):
            fh.write(json.dumps(row, sort_keys=True) + "\n")
