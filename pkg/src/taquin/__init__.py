"""Jeu de taquin on 2D and 3D Young tableaux, exact and Monte Carlo dimensions."""

__version__ = "0.1.0"

from .diagrams import (
    Box,
    CornerSet,
    Diagram,
    add_box,
    corners,
    dumps_diagram,
    from_partition,
    from_rows,
    loads_diagram,
    remove_box,
    to_rows,
)
from .dimensions import (
    DimCache,
    corner_dims,
    cotransitions_by_levels,
    exact_cotransition,
    exact_dim_3d,
    greedy_sequence_exact,
    hook_dim_2d,
    max_dim_search,
)
from .errors import TaquinError
from .estimation import (
    CotransEstimate,
    LogDim,
    estimate_cotransitions,
    estimate_dim_ratio,
    estimate_dim_recurrence,
    greedy_sequence_estimated,
    normalized_dim,
    uniform_tableau_stream,
)
from .jdt import Nerve, randomize_prefix, schutz, schutz_preserve, schutz_preserve_inverse, schutz_rnd
from .processes import hook3_length, plancherel2d_transitions, pp_transitions, pp_weight, sample_pp_tableau
from .rng import RandomSource
from .stats import chi_square_uniform, gaussian_summary, nerve_coverage, run_histogram
from .tableaux import canonical_tableau, entry_grid, shape_of, validate
