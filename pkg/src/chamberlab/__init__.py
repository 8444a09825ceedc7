"""Exact combinatorics of central real arrangements: chambers, posets of
regions, positive paths and the bounded positive cover complex."""

from .arrangement import (
    Arrangement,
    ArrangementError,
    Chamber,
    Hyperplane,
    InputError,
    adjacency_and_walls,
    brute_force_chambers,
    enumerate_chambers,
    essentialize,
    from_normals,
    from_topes,
    is_simplicial_arrangement,
    is_simplicial_chamber,
    parse_arrangement,
    separation_set,
    strict_feasible,
)
from .complex import (
    BoundedCoverComplex,
    SimplicialComplexData,
    build_positive_complex,
    contractibility_report,
    link_and_star,
    order_complex,
    verify_retraction_step,
)
from .paths import (
    ArrangementGraph,
    PathClass,
    PathClasses,
    PropertyDReport,
    build_counterexample_path,
    build_graph,
    crossing_vector,
    end_decompositions,
    minimal_paths,
    path_class,
    path_equivalent,
    property_d_at,
    verify_property_d_bounded,
)
from .poset import (
    InconsistencyError,
    Interval,
    NonLatticeWitness,
    RegionPoset,
    build_region_poset,
    covers,
    find_non_lattice_witness,
    interval,
    interval_isomorphic_to_lower_set,
    is_lattice,
    join,
    lattice_properties,
    meet,
)

__version__ = "0.1.0"
