//! Elliptic curves, division polynomials and Lattès maps.

pub mod curve;
pub mod division;
pub mod fixtures;
pub mod lattes;
pub mod torsion;

pub use curve::{parse_rational, Point, ReductionType, WeierstrassCurve};
pub use division::division_polynomials;
pub use lattes::{
    check_lattes_commutes, check_lattes_commutes_twisted, lattes_map, short_twist, twisted_x,
    x_coordinate, LattesMap, RationalMap,
};
pub use torsion::rational_torsion;
