//! Exact and validated computations for totally geodesic surfaces in hyperbolic knot
//! complements: number fields, knot-group representations, boundary-slope systems, the
//! balanced pretzel family, relative Euler classes, and boundary geometry.

pub mod ball;
pub mod eulerclass;
pub mod knotgroup;
pub mod mobius;
pub mod numfield;
pub mod pipeline;
pub mod polycore;
pub mod pretzel;
pub mod slopes;
