//! Exact integer, rational and polynomial arithmetic.

pub mod newton;
pub mod orbit;
pub mod poly;
pub mod proj;
pub mod resultant;
pub mod roots;

pub use newton::{newton_polygon, valuation_spectrum, NewtonPolygon, Segment, ValuationSpectrum};
pub use orbit::OrbitPolynomial;
pub use poly::Poly;
pub use proj::{ln_abs, naive_height, reduce_proj, vp, vp_int, ProjPointQ};
pub use resultant::{discriminant, resultant, resultant_q};
pub use roots::{integer_poly_roots, mahler_height, polynomial_roots, CertifiedRoot};
