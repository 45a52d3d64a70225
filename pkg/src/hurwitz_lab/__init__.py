"""Exact Hurwitz numbers, intersection numbers on the moduli of curves,
ribbon maps, random-tree limit laws, and the Toda equation, cross-checked
at desk scale."""

from .core import Partition, Rat, aut_order, partition_moves, ram_count
from .errors import (
    BudgetExceeded,
    HurwitzLabError,
    InsufficientSamples,
    MissingHodgeEntry,
    NegativeRamification,
    NotTransitive,
    PerimeterMismatch,
    PrecisionLoss,
    RankDeficient,
    UnstableRange,
    UnstableResult,
)
from .hurwitz import (
    Budget,
    HurwitzValue,
    cycle_factorization_count,
    hurwitz_closed_genus0,
    hurwitz_degeneration,
    hurwitz_monodromy,
    marked_hurwitz,
)
from .intersect import (
    Correlator,
    HodgeTable,
    asymptotic_ratio,
    elsv_evaluate,
    genus0_closed,
    hodge_invert,
    hodge_table,
    kontsevich_series_eval,
    laplace_check,
    n_point_eval,
    psi_correlator,
)
from .ribbon import (
    BranchingGraph,
    MapClass,
    RibbonMap,
    branching_graph_from_tuple,
    enumerate_trivalent,
    homotopy_type,
    kontsevich_sum,
    wick_moment,
)
from .toda import TruncatedSeries, build_H, htilde_residual, toda_residual
from .trees import (
    EdgeTree,
    SemiperimeterPair,
    StatReport,
    count_trees,
    forest_count,
    perimeter_laplace,
    root_component_size,
    sample_edge_tree,
    semiperimeters,
    stat_test,
    trunk_length,
)

__version__ = "0.1.0"
