"""A small version of the coding-network sweep, written to CSV.

Generates coding networks at several noise levels, applies both split
strategies at a range of limits and searches the reduced and full spaces.
The summary shows the two strategies trading split variables against clones,
and how much smaller the reduced search is.

Usage: python3 demos/coding_benchmark.py [out.csv]
"""

import statistics
import sys

from nodesplit import StrategyConfig, coding_ensemble, run_bench

out_path = sys.argv[1] if len(sys.argv) > 1 else "coding_bench.csv"
specs = coding_ensemble(sigmas=(0.3, 0.5, 0.7), seeds_per_sigma=2, parents_per_parity=3)
limits = (4, 6, 8, 10)
heuristics = [StrategyConfig(kind, limit) for limit in limits for kind in ("mb", "jt")]
with open(out_path, "w", newline="") as out:
    summary = run_bench(specs, heuristics, ("reduced", "full"), out)
print(f"{len(summary.records)} rows written to {out_path}, {len(summary.failures)} failures\n")


def mean(kind, limit, field, space="reduced"):
    return statistics.mean(
        getattr(r, field) for r in summary.records if (r.heuristic, r.limit, r.space) == (kind, limit, space)
    )


print("limit   split vars mb/jt   clones mb/jt   nodes reduced mb/jt   nodes full mb/jt")
for L in limits:
    print(f"{L:>5}   {mean('mb', L, 'splits'):>5.1f} /{mean('jt', L, 'splits'):>5.1f}"
          f"    {mean('mb', L, 'clones'):>5.1f} /{mean('jt', L, 'clones'):>5.1f}"
          f"   {mean('mb', L, 'nodes'):>8.0f} /{mean('jt', L, 'nodes'):>6.0f}"
          f"     {mean('mb', L, 'nodes', 'full'):>6.0f} /{mean('jt', L, 'nodes', 'full'):>6.0f}")
