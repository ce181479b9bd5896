"""Mean Hamming accuracy of fixed linkage rules on the synthetic datasets.

Each dataset is built so a different linkage rule dominates: chaining wins on
concentric rings, max-distance linkage on tangent disks, and the median rule
is the only one robust to the planted stray points.  Ten seeds keep this
quick; the acceptance suite runs the full hundred.
"""

import sys

from paramregions.clustering import DATASET_NAMES, mean_linkage_accuracy

seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 10
linkages = ("single", "complete", "median")

print(f"mean Hamming accuracy (%) over {seeds} draws\n")
header = f"{'dataset':<18}" + "".join(f"{l:>10}" for l in linkages)
print(header)
print("-" * len(header))
for name in DATASET_NAMES:
    row = [mean_linkage_accuracy(name, l, n_seeds=seeds) for l in linkages]
    print(f"{name:<18}" + "".join(f"{v:>10.2f}" for v in row))
