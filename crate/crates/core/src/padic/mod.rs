//! p-adic numbers and the Tate parametrization of curves with |j|_p > 1.

pub mod number;
pub mod tate;

pub use number::{Padic, EXACT_INVERSE_PRECISION};
pub use tate::{j_series, q_from_j, tate_model, TateModel};
