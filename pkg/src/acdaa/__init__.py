"""Automatic classification by repeated divisive-agglomerative runs.

The pipeline: build a nearest-neighbor graph from a dissimilarity
matrix, split it repeatedly with the frequency minimax dichotomy while
recording agglomerative re-mergings, repeat the whole construction r
times, and return every distinct partition found together with the
problem's complexity index (distinct count over the maximum possible).
"""

from .daa import Classification, FamilyEntry, RunFamily, run_daa
from .dichotomy import (
    DichotomyResult,
    brute_force_best_cut,
    decomposition_value,
    frequency_dichotomy,
    minimax_path,
    ratio_cut_value,
)
from .ensemble import (
    Solution,
    SolutionSet,
    complexity,
    concordance,
    is_degenerate,
    kmeans_baseline,
    rand_index,
    run_external,
    stability,
    uniformity,
)
from .graph import (
    Cut,
    FrequencyGraph,
    build_neighborhood_graph,
    connected_components,
    cut_edges,
    repair_connectivity,
)
from .kernel import HAVE_COMPILED, KERNEL_KIND
from .matrix_io import (
    DissimilarityMatrix,
    PointSet,
    VoteMatrix,
    points_to_dissimilarity,
    votes_to_dissimilarity,
)

__version__ = "0.1.0"
