"""Finite groupoids, partial actions, envelopes, cosets, finite topologies."""

from .core import (
    CapExceededError,
    FalsificationError,
    PreconditionError,
    Report,
    StructuralError,
    ValidationFailed,
    Violation,
)
from .groupoid import (
    Groupoid,
    action_groupoid,
    build_groupoid,
    composable_pairs,
    disjoint_union,
    from_group,
    isotropy_group,
    pair_groupoid,
    relabel_groupoid,
    star_fibers,
    translation_map,
    validate_groupoid,
)
from .topology import (
    FiniteTopology,
    all_opens,
    closure,
    discrete,
    indiscrete,
    is_closed,
    is_continuous,
    is_hausdorff,
    is_open,
    is_open_map,
    product,
    quotient,
    rename_points,
    star_open_report,
    subspace,
    build_topology,
)
from .action import (
    ActionGraph,
    Classification,
    OrbitRelation,
    OrbitSpace,
    PartialAction,
    action_graph,
    action_graphs,
    build_partial_action,
    classify,
    invariant_closure,
    is_global,
    orbit_map,
    orbit_of,
    orbit_relation,
    orbit_space,
    relabel_action,
    restrict,
    restrict_to_isotropy,
    stabilizer,
    validate_partial_action,
)
from .morphisms import (
    GMap,
    build_gmap,
    compose_gmaps,
    find_isomorphism,
    identity_gmap,
    inverse_gmap,
    is_isomorphism,
    validate_gmap,
)
from .envelope import (
    EnvelopingAction,
    compare_globalizations,
    envelope_topology,
    globalize,
    relabel_envelope_base,
    restrict_back,
    verify_globalization,
)
from .coset import (
    CosetSpace,
    build_coset_action,
    coset_envelope_isomorphism,
    isotropy_restriction_check,
)

__version__ = "0.1.0"
