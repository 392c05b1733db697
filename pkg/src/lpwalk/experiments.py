"""Monte Carlo orchestration: sweeps, moment tables, martingale diagnostics.

Parallelism is replicate-level only: every (plan point, p, replicate) task
owns a counter-based stream keyed by a unique replicate index, and results
are merged in task order, so reports are byte-identical for any thread
count.  Convergence in probability is rendered testably as decreasing
sup-statistics along a declared sweep of (n, d) points.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .analytic_limits import (
    CovarianceMatrix2,
    LimitSpace,
    bivariate_gaussian_abs_moment,
    mp_closed_form,
)
from .errors import ConfigurationError
from .increments import IncrementLaw, SeedSpec, law_from_string, law_sigma
from .path_metrics import lp_norm_rows
from .walk_engine import (
    WalkConfig,
    default_grid_size,
    discretization_allowance,
    grid_pair_sups,
    simulate_decomposition,
    simulate_grid,
)

__all__ = [
    "ALL_STATISTICS",
    "ConvergenceReport",
    "MartingaleDiagnostics",
    "MomentTable",
    "ReportRow",
    "SweepPlan",
    "run_bivariate_moment_convergence",
    "run_convergence_sweep",
    "run_martingale_check",
    "run_moment_convergence",
    "write_aggregates_csv",
    "write_moment_table_csv",
    "write_report_csv",
]

ALL_STATISTICS = (
    "pointwise_t1",
    "sup_norm",
    "sup_difference",
    "gh_paper_bound",
    "gh_corr_bound",
)

REPORT_HEADER = "law,p,n,d,m,replicate,seed,statistic,value"
AGGREGATE_HEADER = "law,p,n,d,m,statistic,median,mean,stderr,allowance"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass(frozen=True)
class SweepPlan:
    """A replicate sweep across (n, d) points for a fixed law and p list."""

    points: tuple[tuple[int, int], ...]
    p_list: tuple[float, ...]
    law: IncrementLaw
    replicates: int
    master_seed: int
    m: int | None = None
    statistics: tuple[str, ...] = ALL_STATISTICS

    def __post_init__(self) -> None:
        if not self.points:
            raise ConfigurationError("plan must contain at least one (n, d) point")
        for n, d in self.points:
            if n < 1 or d < 1:
                raise ConfigurationError(f"plan points must be positive, got ({n}, {d})")
        dims = [d for _, d in self.points]
        if any(b < a for a, b in zip(dims, dims[1:])):
            raise ConfigurationError(
                "d must be nondecreasing along the sweep order (the growing-dimension regime)"
            )
        if self.replicates < 1:
            raise ConfigurationError(f"replicates must be >= 1, got {self.replicates}")
        if not self.p_list:
            raise ConfigurationError("plan must name at least one p")
        if self.m is not None:
            for n, _ in self.points:
                if not (1 <= self.m <= n):
                    raise ConfigurationError(
                        f"grid size m must satisfy 1 <= m <= n, got m={self.m}, n={n}"
                    )
        unknown = set(self.statistics) - set(ALL_STATISTICS)
        if unknown:
            raise ConfigurationError(
                f"unknown statistics {sorted(unknown)}; choose from {ALL_STATISTICS}"
            )

    def grid_size(self, n: int) -> int:
        return self.m if self.m is not None else default_grid_size(n)

    def to_json(self) -> str:
        return json.dumps(
            {
                "points": [list(pt) for pt in self.points],
                "p": list(self.p_list),
                "law": self.law.cli_name,
                "replicates": self.replicates,
                "master_seed": self.master_seed,
                "m": self.m,
                "statistics": list(self.statistics),
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "SweepPlan":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"malformed plan JSON: {exc}")
        try:
            return cls(
                points=tuple((int(n), int(d)) for n, d in raw["points"]),
                p_list=tuple(float(p) for p in raw["p"]),
                law=law_from_string(raw["law"]),
                replicates=int(raw["replicates"]),
                master_seed=int(raw["master_seed"]),
                m=None if raw.get("m") is None else int(raw["m"]),
                statistics=tuple(raw.get("statistics", ALL_STATISTICS)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"invalid plan JSON: {exc}")


@dataclass(frozen=True)
class ReportRow:
    law: str
    p: float
    n: int
    d: int
    m: int
    replicate: int
    seed: int
    statistic: str
    value: float


@dataclass(frozen=True)
class AggregateRow:
    law: str
    p: float
    n: int
    d: int
    m: int
    statistic: str
    median: float
    mean: float
    stderr: float
    allowance: float


@dataclass
class ConvergenceReport:
    plan: SweepPlan
    rows: list[ReportRow]
    aggregates: list[AggregateRow]
    timings: dict[tuple[int, int, float], float] = field(default_factory=dict)


def _statistic_allowance(stat: str, n: int, m: int, p: float, sigma: float) -> float:
    modulus = sigma * mp_closed_form(p) ** (1.0 / p)
    if stat in ("sup_difference", "gh_paper_bound", "gh_corr_bound"):
        return discretization_allowance(m, modulus)
    if stat == "sup_norm":
        # max cell variation of the deterministic term t^{p/2} sigma^p M_p
        t = np.arange(m + 1) / m
        g = t ** (0.5 * p) * sigma**p * mp_closed_form(p)
        return float(np.max(np.diff(g)))
    return 0.0


def _sweep_task(
    plan: SweepPlan, n: int, d: int, p: float, replicate: int, stream_index: int
) -> list[tuple[str, float]]:
    config = WalkConfig(
        n=n,
        d=d,
        p=p,
        law=plan.law,
        seed=SeedSpec(plan.master_seed, stream_index),
        m=plan.grid_size(n),
    )
    sigma = law_sigma(plan.law)
    snap = simulate_grid(config)
    out: dict[str, float] = {}
    wanted = set(plan.statistics)
    if wanted & {"pointwise_t1", "sup_norm"}:
        norms_pp = lp_norm_rows(snap.points, p) ** p
        g = snap.times ** (0.5 * p) * sigma**p * mp_closed_form(p)
        if "pointwise_t1" in wanted:
            out["pointwise_t1"] = float(abs(norms_pp[-1] - g[-1]))
        if "sup_norm" in wanted:
            right = float(np.max(np.abs(norms_pp[:-1] - g[1:]))) if len(g) > 1 else 0.0
            out["sup_norm"] = max(float(np.max(np.abs(norms_pp - g))), right)
    if wanted & {"sup_difference", "gh_paper_bound", "gh_corr_bound"}:
        modulus = sigma * mp_closed_form(p) ** (1.0 / p)
        corners, base = grid_pair_sups(snap.points, snap.times, p, modulus)
        if "sup_difference" in wanted:
            out["sup_difference"] = corners
        if "gh_paper_bound" in wanted:
            out["gh_paper_bound"] = 2.0 * base
        if "gh_corr_bound" in wanted:
            out["gh_corr_bound"] = 0.5 * base
    return [(stat, out[stat]) for stat in plan.statistics]


def run_convergence_sweep(plan: SweepPlan, threads: int = 1) -> ConvergenceReport:
    """Simulate every (point, p, replicate) task and aggregate in fixed order."""
    if threads < 1:
        raise ConfigurationError(f"threads must be >= 1, got {threads}")
    tasks = []
    stream = 0
    for n, d in plan.points:
        for p in plan.p_list:
            for rep in range(plan.replicates):
                tasks.append((n, d, p, rep, stream))
                stream += 1

    def run_one(task):
        n, d, p, rep, s = task
        t0 = time.perf_counter()
        stats = _sweep_task(plan, n, d, p, rep, s)
        return stats, time.perf_counter() - t0

    if threads == 1:
        results = [run_one(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_one, tasks))

    rows: list[ReportRow] = []
    timings: dict[tuple[int, int, float], float] = {}
    for (n, d, p, rep, s), (stats, seconds) in zip(tasks, results):
        timings[(n, d, p)] = timings.get((n, d, p), 0.0) + seconds
        for stat, value in stats:
            rows.append(
                ReportRow(plan.law.cli_name, p, n, d, plan.grid_size(n), rep, s, stat, value)
            )

    sigma = law_sigma(plan.law)
    aggregates: list[AggregateRow] = []
    for n, d in plan.points:
        for p in plan.p_list:
            m = plan.grid_size(n)
            for stat in plan.statistics:
                vals = np.array(
                    [
                        r.value
                        for r in rows
                        if r.n == n and r.d == d and r.p == p and r.statistic == stat
                    ]
                )
                stderr = (
                    float(np.std(vals, ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
                )
                aggregates.append(
                    AggregateRow(
                        plan.law.cli_name,
                        p,
                        n,
                        d,
                        m,
                        stat,
                        float(np.median(vals)),
                        float(np.mean(vals)),
                        stderr,
                        _statistic_allowance(stat, n, m, p, sigma),
                    )
                )

    return ConvergenceReport(plan=plan, rows=rows, aggregates=aggregates, timings=timings)


def _write_echo(fh: TextIO, echo: dict | None) -> None:
    if echo:
        for key in sorted(echo):
            fh.write(f"# {key}={echo[key]}\n")


def write_report_csv(report: ConvergenceReport, fh: TextIO, echo: dict | None = None) -> None:
    _write_echo(fh, echo)
    fh.write(REPORT_HEADER + "\n")
    for r in report.rows:
        fh.write(
            f"{r.law},{_fmt(r.p)},{r.n},{r.d},{r.m},{r.replicate},{r.seed},"
            f"{r.statistic},{_fmt(r.value)}\n"
        )


def write_aggregates_csv(report: ConvergenceReport, fh: TextIO, echo: dict | None = None) -> None:
    _write_echo(fh, echo)
    fh.write(AGGREGATE_HEADER + "\n")
    for a in report.aggregates:
        fh.write(
            f"{a.law},{_fmt(a.p)},{a.n},{a.d},{a.m},{a.statistic},"
            f"{_fmt(a.median)},{_fmt(a.mean)},{_fmt(a.stderr)},{_fmt(a.allowance)}\n"
        )


@dataclass(frozen=True)
class MomentRow:
    n: int
    estimate: float
    stderr: float
    limit: float


@dataclass
class MomentTable:
    law: str
    p: float
    replicates: int
    rows: list[MomentRow]
    rho: float | None = None  # set for the bivariate table


def _accumulate_normalized(values: np.ndarray, acc: list[float]) -> None:
    acc[0] += float(np.sum(values))
    acc[1] += float(np.sum(values * values))
    acc[2] += len(values)


def _mean_se(acc: list[float]) -> tuple[float, float]:
    total, total_sq, count = acc
    mean = total / count
    var = max(total_sq / count - mean * mean, 0.0) * count / max(count - 1, 1)
    return mean, math.sqrt(var / count)


def run_moment_convergence(
    law: IncrementLaw,
    p: float,
    n_list: Sequence[int],
    replicates: int,
    seed: int,
) -> MomentTable:
    """Empirical E|S_n / (sigma sqrt n)|^p over one-dimensional replicates."""
    if replicates < 100:
        raise ConfigurationError(f"replicates must be >= 100, got {replicates}")
    if not n_list:
        raise ConfigurationError("n_list must not be empty")
    sigma = law_sigma(law)
    rows = []
    for idx, n in enumerate(n_list):
        if n < 1:
            raise ConfigurationError(f"n must be >= 1, got {n}")
        rng = SeedSpec(seed, idx).generator()
        acc = [0.0, 0.0, 0]
        chunk = max(1, 5_000_000 // n)
        done = 0
        while done < replicates:
            b = min(chunk, replicates - done)
            draws = law.sample(b * n, rng).reshape(b, n)
            s = draws.sum(axis=1)
            vals = np.abs(s / (sigma * math.sqrt(n))) ** p
            _accumulate_normalized(vals, acc)
            done += b
        mean, se = _mean_se(acc)
        rows.append(MomentRow(n=n, estimate=mean, stderr=se, limit=mp_closed_form(p)))
    return MomentTable(law=law.cli_name, p=p, replicates=replicates, rows=rows)


def run_bivariate_moment_convergence(
    law: IncrementLaw,
    p: float,
    rho: float,
    n_list: Sequence[int],
    replicates: int,
    seed: int,
) -> MomentTable:
    """Empirical E|S_n/sqrt(n)|^p |Z_n/sqrt(n)|^p for the pair Y = rho X + sqrt(1-rho^2) X'."""
    if abs(rho) > 1.0:
        raise ConfigurationError(f"correlation must lie in [-1, 1], got {rho}")
    if replicates < 100:
        raise ConfigurationError(f"replicates must be >= 100, got {replicates}")
    if not n_list:
        raise ConfigurationError("n_list must not be empty")
    sigma = law_sigma(law)
    cov = CovarianceMatrix2.from_correlation(rho, sigma * sigma)
    limit = bivariate_gaussian_abs_moment(p, cov)
    comp = math.sqrt(max(1.0 - rho * rho, 0.0))
    rows = []
    for idx, n in enumerate(n_list):
        if n < 1:
            raise ConfigurationError(f"n must be >= 1, got {n}")
        rng = SeedSpec(seed, idx).generator()
        acc = [0.0, 0.0, 0]
        chunk = max(1, 2_500_000 // n)
        done = 0
        while done < replicates:
            b = min(chunk, replicates - done)
            sx = law.sample(b * n, rng).reshape(b, n).sum(axis=1)
            sxp = law.sample(b * n, rng).reshape(b, n).sum(axis=1)
            sz = rho * sx + comp * sxp
            vals = np.abs(sx * sz / n) ** p
            _accumulate_normalized(vals, acc)
            done += b
        mean, se = _mean_se(acc)
        rows.append(MomentRow(n=n, estimate=mean, stderr=se, limit=limit))
    return MomentTable(law=law.cli_name, p=p, replicates=replicates, rows=rows, rho=rho)


def write_moment_table_csv(table: MomentTable, fh: TextIO, echo: dict | None = None) -> None:
    _write_echo(fh, echo)
    fh.write("n,estimate,stderr,limit\n")
    for r in table.rows:
        fh.write(f"{r.n},{_fmt(r.estimate)},{_fmt(r.stderr)},{_fmt(r.limit)}\n")


@dataclass
class MartingaleDiagnostics:
    """Replicate-level diagnostics of the T/Q decomposition."""

    config: WalkConfig
    replicates: int
    t_violation_fraction: float
    max_relative_residual: float
    q_mean: float
    q_stderr: float
    q_sq_mean: float
    q_sq_stderr: float
    doob: dict[float, tuple[float, float]]  # eps -> (empirical freq, bound)
    probe_correlations: list[tuple[int, float]]  # (step j, corr(dQ_j, Q_{j-1}))

    @property
    def q_mean_within_4se(self) -> bool:
        return abs(self.q_mean) <= 4.0 * self.q_stderr

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.config.n,
                "d": self.config.d,
                "p": self.config.p,
                "law": self.config.law.cli_name,
                "replicates": self.replicates,
                "t_violation_fraction": self.t_violation_fraction,
                "max_relative_residual": self.max_relative_residual,
                "q_mean": self.q_mean,
                "q_stderr": self.q_stderr,
                "q_mean_within_4se": self.q_mean_within_4se,
                "q_sq_mean": self.q_sq_mean,
                "q_sq_stderr": self.q_sq_stderr,
                "doob": {str(k): list(v) for k, v in self.doob.items()},
                "probe_correlations": [list(pc) for pc in self.probe_correlations],
            },
            indent=2,
        )


def run_martingale_check(
    config: WalkConfig,
    replicates: int,
    thresholds: Iterable[float] = (0.5, 1.0),
    threads: int = 1,
    rel_tol: float = 1e-9,
) -> MartingaleDiagnostics:
    """Monotonicity, identity residual, martingale nullity and Doob tails."""
    if replicates < 500:
        raise ConfigurationError(f"replicates must be >= 500, got {replicates}")
    n, p = config.n, config.p
    probe_steps = sorted({max(1, (k * n) // 5) for k in range(1, 6)})
    base = config.seed.replicate_index

    def run_one(rep: int):
        cfg = WalkConfig(
            n=config.n,
            d=config.d,
            p=config.p,
            law=config.law,
            seed=config.seed.with_replicate(base + rep),
            m=config.m,
        )
        trace = simulate_decomposition(cfg)
        T, Q = trace.T, trace.Q
        dT = np.diff(T)
        violated = bool(np.any(dT < -rel_tol * np.abs(T[1:])))
        final = trace.final_norm_pp
        resid = abs(T[-1] + Q[-1] - final) / max(abs(final), 1e-300)
        probes = [(Q[j] - Q[j - 1], Q[j - 1]) for j in probe_steps]
        return violated, resid, Q[-1], float(np.max(np.abs(Q))), probes

    reps = range(replicates)
    if threads == 1:
        results = [run_one(r) for r in reps]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_one, reps))

    violations = sum(1 for v, *_ in results if v)
    max_resid = max(r for _, r, *_ in results)
    q_final = np.array([q for _, _, q, _, _ in results])
    sup_q = np.array([s for _, _, _, s, _ in results])

    q_mean = float(np.mean(q_final))
    q_se = float(np.std(q_final, ddof=1) / math.sqrt(replicates))
    q_sq = q_final * q_final
    q_sq_mean = float(np.mean(q_sq))
    q_sq_se = float(np.std(q_sq, ddof=1) / math.sqrt(replicates))

    doob: dict[float, tuple[float, float]] = {}
    for eps in thresholds:
        freq = float(np.mean(sup_q >= n ** (0.5 * p) * eps))
        bound = n ** (-p) * eps**-2 * (q_sq_mean + 4.0 * q_sq_se)
        doob[float(eps)] = (freq, bound)

    probe_corr = []
    for k, j in enumerate(probe_steps):
        dq = np.array([probes[k][0] for *_, probes in results])
        q_prev = np.array([probes[k][1] for *_, probes in results])
        if np.std(dq) == 0.0 or np.std(q_prev) == 0.0:
            corr = 0.0
        else:
            corr = float(np.corrcoef(dq, q_prev)[0, 1])
        probe_corr.append((j, corr))

    return MartingaleDiagnostics(
        config=config,
        replicates=replicates,
        t_violation_fraction=violations / replicates,
        max_relative_residual=max_resid,
        q_mean=q_mean,
        q_stderr=q_se,
        q_sq_mean=q_sq_mean,
        q_sq_stderr=q_sq_se,
        doob=doob,
        probe_correlations=probe_corr,
    )
