"""A full run on the bundled India 2011 dataset.

The package ships a best-effort assembly of state-level inputs from
public Census 2011 and Sample Registration System publications: sex
ratios, fertility (two vintages), under-five mortality (with the
documented infant-mortality proxy for two small states), marriage ages,
and population bases, all provenance-labelled.  See REPRODUCTION.md at
the repository root for how these values relate to published estimates.

This script runs the whole pipeline on it: per-state index values, the
national aggregate, surplus head counts, the crude-vs-effective fertility
comparison, and the cross-state density plot.
"""

import importlib.resources

from sgi import load_bundle, run_compute, run_sensitivity
from sgi.report import emit_density

data = importlib.resources.files("sgi") / "data" / "india_2011"

bundle = load_bundle(
    data / "regions.csv",
    sources_json=data / "sources.json",
)
report = run_compute(bundle)

print("state-level index, TFR vintage 2001-03 (top and bottom five):")
records = report.per_region
for rec in [*records[:5], *records[-5:]]:
    r = rec.result
    print(f"  {rec.region.name:<20} sgi={r.sgi:6.3f}  n={r.growth_rate:+.5f}"
          f"  surplus men={rec.surplus.paper:>12,}")

print(f"\nnational index from aggregated inputs: {report.national.sgi:.4f}")
print(f"plain mean of the state values:        {report.mean_region_sgi:.4f}")
print(f"summed surplus men (headline / ratio): "
      f"{report.totals.paper:,} / {report.totals.ratio:,}")

# where did each number come from?
print("\nprovenance of the mortality field:")
print(f"  {bundle.provenance['u5mr']}")
print(f"  Mizoram proxy: {bundle.provenance['u5mr:MZ']}")

# crude vs effective fertility, the five biggest gaps
rows = run_sensitivity(bundle)
rows = sorted(rows, key=lambda r: r.abs_diff, reverse=True)[:5]
print("\nwhere ignoring under-five mortality hides the most imbalance:")
for row in rows:
    print(f"  {row.name:<20} crude {row.sgi_crude:.3f} -> "
          f"effective {row.sgi_effective:.3f}  (+{row.abs_diff:.3f})")

# the cross-state distribution, with the published values alongside
import csv

with (data / "published_sgi_2011.csv").open(encoding="utf-8") as fh:
    published = [float(r["sgi"]) for r in csv.DictReader(fh)]

curve = emit_density(
    published,
    svg_path="demo_output_india_density.svg",
    references=[("balance", 1.0, "green"), ("national", 1.11, "black")],
    title="Published 2011 state index values",
)
print(f"\ndensity of the 24 published state values: mode {curve.mode:.3f}, "
      f"integral {curve.integral():.3f}")
print("plot written to demo_output_india_density.svg")
