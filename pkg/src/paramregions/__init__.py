"""Exact parameter-space region enumeration for tunable combinatorial
algorithms: linkage-based clustering with interpolated merge rules,
parametric dynamic-programming sequence alignment, and two-part tariff
pricing.

The geometry layer (halfspaces, convex cells, LP, redundancy removal, ray
shooting) runs entirely on exact rationals; each domain module maps its
behavior structure onto the shared implicit breadth-first region enumerator.
"""

from .geometry import (
    ConvexCell,
    GeometryError,
    Halfspace,
    LPResult,
    box_cell,
    clarkson_reduce,
    find_interior_point,
    polygon_area,
    polygon_vertices,
    ray_shoot,
    reduce_cell,
    sample_interior,
    solve_lp,
)
from .rationals import Rational, as_rational, format_rational, parse_rational, rat
from .regions import (
    AffineForm,
    AffineMinProblem,
    CellProblem,
    DegenerateCellError,
    Subdivision,
    cells_share_facet,
    compute_subdivision,
    compute_vertex_cell,
)
from .clustering import (
    ClusterTree,
    ClusteringInstance,
    ExecutionTreeNode,
    MergeFamily,
    best_parameter,
    build_execution_tree,
    generate_dataset,
    hamming_loss,
    interpolated_merge,
    merge_value,
    simulate_merge_sequence,
)
from .seqalign import (
    Alignment,
    AlignmentDPSpec,
    AlignmentPartition,
    build_execution_dag,
    compute_overlay,
    dp_solve,
    enumerate_alignments,
    get_preset,
    ray_search_2d,
    resolve_degeneracies,
)
from .tariff import (
    TariffInstance,
    buyer_choice,
    check_piece_bound,
    compute_price_regions,
    maximize_revenue,
    single_tariff_regions,
)

__version__ = "0.1.0"
