"""Trial harness: rejection-rate estimation, sweeps, and report emission.

Everything is deterministic for a fixed seed: trial t of a run uses the
random stream (seed, t), sweep rows follow the configured Cartesian order,
and CSV/JSON output is byte-stable for identical inputs.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence, Union

from .core import RandomSource
from .exact import distance_to_unate, is_unate, surprise_statistic
from .core import TruthTable
from .instances import InstanceDescriptor, materialize, parse_descriptor
from .testers import query_budget, unateness_tester

#: z for a 95% Wilson score interval.
WILSON_Z = 1.959963984540054

CSV_COLUMNS = (
    "family",
    "params",
    "d",
    "n",
    "epsilon",
    "trials",
    "rejections",
    "rate",
    "ci_low",
    "ci_high",
    "query_mean",
    "query_max",
    "seed",
)


class BudgetExceededError(Exception):
    """A trial used more queries than the frozen budget allows."""


def wilson_interval(rejections: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """95% Wilson score interval for a binomial rate.

    The boundary cases are pinned exactly: zero rejections give a lower
    bound of 0, all rejections give an upper bound of 1.
    """
    if not 0 <= rejections <= trials or trials < 1:
        raise ValueError(f"bad counts: {rejections}/{trials}")
    p = rejections / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    low = 0.0 if rejections == 0 else max(0.0, center - half)
    high = 1.0 if rejections == trials else min(1.0, center + half)
    return low, high


@dataclass(frozen=True)
class TrialReport:
    """Aggregate of repeated unateness-tester runs on one instance."""

    instance: str
    d: int
    n: int
    epsilon: Fraction
    trials: int
    rejections: int
    query_mean: int  # mean query count, rounded down
    query_max: int
    seed: int
    error: Optional[str] = None

    @property
    def rejection_rate(self) -> Fraction:
        return Fraction(self.rejections, self.trials)

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_interval(self.rejections, self.trials)

    def row(self) -> dict[str, str]:
        family, _, params = self.instance.partition(" ")
        if self.error is not None:
            stats = {k: "" for k in ("rejections", "rate", "ci_low", "ci_high", "query_mean", "query_max")}
            stats["rate"] = f"error: {self.error}"
        else:
            low, high = self.ci
            stats = {
                "rejections": str(self.rejections),
                "rate": str(self.rejection_rate),
                "ci_low": repr(low),
                "ci_high": repr(high),
                "query_mean": str(self.query_mean),
                "query_max": str(self.query_max),
            }
        return {
            "family": family,
            "params": params,
            "d": str(self.d),
            "n": str(self.n),
            "epsilon": str(self.epsilon),
            "trials": str(self.trials),
            "seed": str(self.seed),
            **stats,
        }


def run_trials(
    desc: Union[InstanceDescriptor, str],
    eps: Union[Fraction, str, float],
    trials: int,
    seed: int,
    enforce_budget: bool = True,
) -> TrialReport:
    """Run the unateness tester on fresh oracle instances, one per trial.

    Trial t uses the stream (seed, t), so reports are reproducible and
    trials are independent.  With enforce_budget, any trial exceeding the
    frozen query budget fails the whole run.
    """
    if isinstance(desc, str):
        desc = parse_descriptor(desc)
    eps = Fraction(eps)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 < eps < Fraction(1, 2):
        raise ValueError(f"epsilon must be in (0, 1/2), got {eps}")
    rejections = 0
    total_queries = 0
    max_queries = 0
    probe = materialize(desc)
    d, n = probe.domain.d, probe.domain.n
    budget = query_budget(d, n, eps)
    for t in range(trials):
        f = materialize(desc)
        verdict = unateness_tester(f, eps, RandomSource(seed, t).rng())
        if enforce_budget and verdict.queries_used > budget:
            raise BudgetExceededError(
                f"trial {t} used {verdict.queries_used} queries, budget {budget:.1f}"
            )
        if not verdict.accepted:
            rejections += 1
        total_queries += verdict.queries_used
        max_queries = max(max_queries, verdict.queries_used)
    return TrialReport(
        instance=str(desc),
        d=d,
        n=n,
        epsilon=eps,
        trials=trials,
        rejections=rejections,
        query_mean=total_queries // trials,
        query_max=max_queries,
        seed=seed,
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """A Cartesian sweep: one row per (d, n, epsilon) cell.

    ``instance_template`` is a descriptor with {d} and {n} placeholders,
    e.g. ``"anti_unate n={n} d={d}"``.
    """

    instance_template: str
    d_values: tuple[int, ...]
    n_values: tuple[int, ...]
    epsilons: tuple[Fraction, ...]
    trials: int
    seed: int

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.d_values or not self.n_values or not self.epsilons:
            # An empty axis is allowed; the sweep is then empty.
            pass
        for eps in self.epsilons:
            if not 0 < eps < Fraction(1, 2):
                raise ValueError(f"epsilon must be in (0, 1/2), got {eps}")

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        raw = json.loads(text)
        return cls(
            instance_template=raw["instance_template"],
            d_values=tuple(int(v) for v in raw["d"]),
            n_values=tuple(int(v) for v in raw["n"]),
            epsilons=tuple(Fraction(str(v)) for v in raw["epsilon"]),
            trials=int(raw.get("trials", 1)),
            seed=int(raw.get("seed", 0)),
        )

    def cells(self) -> list[str]:
        return [
            self.instance_template.format(d=d, n=n)
            for d, n, _ in product(self.d_values, self.n_values, self.epsilons)
        ]


def sweep(config: ExperimentConfig, enforce_budget: bool = True) -> list[TrialReport]:
    """Run every cell of the sweep; a failing cell is recorded, not fatal."""
    rows: list[TrialReport] = []
    for d, n, eps in product(config.d_values, config.n_values, config.epsilons):
        desc_text = config.instance_template.format(d=d, n=n)
        try:
            rows.append(run_trials(desc_text, eps, config.trials, config.seed, enforce_budget))
        except Exception as exc:  # per-cell isolation is the contract
            rows.append(
                TrialReport(
                    instance=desc_text,
                    d=d,
                    n=n,
                    epsilon=eps,
                    trials=config.trials,
                    rejections=0,
                    query_mean=0,
                    query_max=0,
                    seed=config.seed,
                    error=f"{type(exc).__name__}: {exc}",
                )
            )
    return rows


def exact_report(desc: Union[InstanceDescriptor, str]) -> dict:
    """Exact facts about an instance: unateness, distance, surprise profile.

    The surprise profile lists the statistic for T empty and for every
    singleton T.  Raises CapacityError when the instance exceeds the exact
    oracle's caps.
    """
    if isinstance(desc, str):
        desc = parse_descriptor(desc)
    f = materialize(desc)
    table = TruthTable.from_oracle(f)
    surprise = {(): surprise_statistic(table, ())}
    for i in range(table.domain.d):
        surprise[(i,)] = surprise_statistic(table, (i,))
    return {
        "instance": str(desc),
        "is_unate": is_unate(table),
        "distance_to_unate": distance_to_unate(table),
        "surprise": surprise,
    }


def render_csv(rows: Sequence[TrialReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(CSV_COLUMNS), lineterminator="\n")
    writer.writeheader()
    for report in rows:
        writer.writerow(report.row())
    return buf.getvalue()


def render_json(rows: Sequence[TrialReport]) -> str:
    payload = []
    for report in rows:
        row = report.row()
        payload.append({k: row[k] for k in CSV_COLUMNS})
    return json.dumps(payload, indent=2) + "\n"


def emit(rows: Sequence[TrialReport], fmt: str, path: str) -> None:
    """Write reports to a file; byte-identical output for identical inputs."""
    if fmt == "csv":
        text = render_csv(rows)
    elif fmt == "json":
        text = render_json(rows)
    else:
        raise ValueError(f"unknown format {fmt!r}; expected csv or json")
    with open(path, "w", encoding="ascii", newline="\n") as fp:
        fp.write(text)
