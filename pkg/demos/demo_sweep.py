"""Diagonal convergence sweep: sup statistics shrink as (n, d) grow.

Runs a small replicate sweep along (n, d) = (100,100) -> (400,400) ->
(1600,1600), writes the report and aggregate CSVs (the same files the
plot frontend consumes), and prints the median of each statistic per
point.  The medians fall along the sweep; the GH rows keep their exact
paper_bound = 4 * corr_bound relation.
"""

from lpwalk import SweepPlan, rademacher, run_convergence_sweep
from lpwalk.experiments import write_aggregates_csv, write_report_csv

plan = SweepPlan(
    points=((100, 100), (400, 400), (1600, 1600)),
    p_list=(2.0,),
    law=rademacher(),
    replicates=20,
    master_seed=123,
)
report = run_convergence_sweep(plan, threads=2)

with open("sweep_report.csv", "w", encoding="ascii") as fh:
    write_report_csv(report, fh, echo={"master_seed": plan.master_seed})
with open("sweep_aggregates.csv", "w", encoding="ascii") as fh:
    write_aggregates_csv(report, fh, echo={"master_seed": plan.master_seed})
print("wrote sweep_report.csv and sweep_aggregates.csv\n")

print(f"{'statistic':>16s} " + " ".join(f"{f'({n},{d})':>14s}" for n, d in plan.points))
for stat in plan.statistics:
    meds = [
        next(
            a.median
            for a in report.aggregates
            if a.n == n and a.statistic == stat
        )
        for n, _ in plan.points
    ]
    print(f"{stat:>16s} " + " ".join(f"{m:14.5f}" for m in meds))
print("\nper-point wall-clock seconds:")
for (n, d, p), seconds in sorted(report.timings.items()):
    print(f"  ({n:5d},{d:5d}) p={p:g}: {seconds:.2f}s")
