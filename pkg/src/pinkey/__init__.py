"""Secret-key capacity and Steiner tree packing for pairwise-shared random bits."""

from __future__ import annotations

from .exact import CapExceeded, LinearProgram, OptResult, solve_ilp, solve_lp
from .graph import (
    GraphError,
    Multigraph,
    blow_up,
    complete,
    figure1,
    format_graph_text,
    parse_graph_text,
    path3,
    split_off,
    triangle,
    validate,
)
from .helper import (
    choose_split_partner,
    prop6_bounds,
    reduce_to_spanning,
    thm7_check,
    tight_sets,
    weak_helper_ilp,
    weak_helper_lp,
)
from .kernels import BACKEND
from .omniscience import capacity, int_omn, nash_williams, omn, partition_bound
from .packing import (
    FractionalPacking,
    IntegerPacking,
    SteinerTree,
    enumerate_steiner_trees,
    eulerian_lower_bound,
    mu,
    mu_f,
    packing_rate,
)
from .protocol import (
    KeyMap,
    LinearScheme,
    SecrecyReport,
    SourceRealization,
    extract_key,
    is_lco,
    packing_protocol,
    random_lco,
    run,
    tree_lc,
    verify_perfect_secrecy,
)

__version__ = "0.1.0"
