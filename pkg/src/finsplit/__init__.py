"""Multi-split continuity as exact computation on finite topological spaces."""

from .errors import FinSplitError
from .multifunction import (
    MultiMap,
    Verdict,
    graph_and_closure,
    inverse_image_multifunction,
    is_closed_map,
    is_continuous,
    is_usc,
    is_usco,
    mm_combine,
    mm_compose,
    mm_image,
    mm_inverse_and_core,
    selections,
)
from .multisplit import (
    EvFamily,
    compose_ev,
    continuity_equivalence,
    ev_family,
    graph_projection_check,
    is_ev_set,
    is_multi_split,
    is_pre_multi_split,
    star,
    tilde_z_set,
    weakened_fast_check,
    xp_set,
)
from .splithomeo import (
    ReglueDatum,
    inverse_star,
    is_split_homeo,
    reglue_from_splithomeo,
    reglue_transitive,
    splithomeo_from_reglue,
    validate_reglue,
)
from .topology import (
    FinSpace,
    PointMap,
    PointSet,
    build_space,
    closure_interior_boundary,
    discrete,
    disjoint_union,
    indiscrete,
    product,
    quotient_space,
    separation_flags,
    sierpinski,
)

__version__ = "0.1.0"
