//! Rational self-maps of a projective variety: representatives,
//! dominance, inverses, clear degree and the numerical bounds around them.

mod bounds;
mod inverse;
mod map;
mod probe;
mod verdict;

pub use bounds::{edim_bound, inverse_degree_bound, suv_check, EdimBound, InverseBound, SuvReport};
pub use inverse::{default_inverse_cap, find_inverse, graph_ideal, verify_inverse_pair, Inverse};
pub use map::{
    canonical_coordinates, is_dominant, is_well_defined, proportional_mod,
    representatives_of_degree, same_map, RationalMap, RepresentativeSpace,
};
pub use probe::{fiber_degree_probe, random_point, FiberProbe, PROBE_PRIME};
pub use verdict::{
    bir_xd_membership, clear_degree_check, is_birational, AnalysisOptions, Birationality,
    ClearDegree, MapVerdict,
};
