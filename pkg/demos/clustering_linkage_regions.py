"""Walk through linkage-region enumeration on a tiny 1D instance.

Four points on a line, interpolating single and complete linkage with one
parameter alpha (alpha = 1 is pure single, alpha = 0 pure complete).  The
parameter interval splits at alpha = 2/5: above it the two left points absorb
the middle point first, below it the two right points pair up, and only the
second branch reproduces the target {0,1} | {3, 5.6}.
"""

from paramregions import (
    ClusteringInstance,
    MergeFamily,
    best_parameter,
    build_execution_tree,
    hamming_loss,
    simulate_merge_sequence,
)
from paramregions.clustering import ClusterTree, leaf_subdivision
from paramregions.rationals import format_rational, rat

points = [(0,), (1,), (3,), (rat(28, 5),)]
target = [{0, 1}, {2, 3}]
instance = ClusteringInstance.from_points(points, ("euclidean",), target=target, k=2)
family = MergeFamily(("single", "complete"), ("euclidean",))

print(f"points: 0, 1, 3, 5.6   family: {family.linkages} over {family.metrics}")
print(f"parameter space: simplex of dimension {family.dimension}\n")

root = build_execution_tree(instance, family)
for merges, region in sorted(leaf_subdivision(root).items()):
    tree = ClusterTree.from_merges(instance.n_points, merges)
    loss = hamming_loss(tree, instance.target, instance.k)
    human = " -> ".join(f"{a}+{b}" for a, b in merges)
    print(f"leaf region with witness alpha={format_rational(region.witness[0])}")
    print(f"  merge sequence: {human}")
    print(f"  Hamming loss vs target: {format_rational(loss)}")

rho, loss, leaf = best_parameter(instance, family)
print(f"\nbest parameter: alpha = {format_rational(rho[0])} with loss {format_rational(loss)}")

check = simulate_merge_sequence(instance, family, rho)
print(f"greedy simulation at that alpha reproduces the leaf: {check == leaf.merges}")
