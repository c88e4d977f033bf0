"""Rank-n projections on C^d: angles, A-sets and maps preserving tr PQ."""

from .angles import (
    AdjacencyClass,
    classify_adjacency,
    hs_distance,
    principal_angles,
    transition_probability,
    two_projections_identity_residual,
)
from .aset import (
    DimensionEstimate,
    adjacent_blocks,
    aset_dimension_probe,
    aset_membership,
    aset_parametrize,
    probe_aset,
    random_pair,
)
from .extend import (
    ExtendedMap,
    TabulatedOracle,
    check_trace_form,
    check_transition_preserving,
    extend_map,
    projection_spanning_basis,
    rank_one_decomposition,
)
from .generators import GeneratorKind, make_generator
from .projections import (
    Frame,
    Projection,
    complement,
    frame_of,
    haar_unitary,
    project_from_frame,
    projection_onto,
    random_projection,
    validate_projection,
)
from .reconstruct import (
    Form,
    Linearity,
    WignerClassification,
    classify_map,
    detect_form,
    dualize_oracle,
    reconstruct_isometry,
)

__version__ = "0.1.0"
