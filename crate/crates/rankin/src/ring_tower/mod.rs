//! Exact coefficient rings: ℤ, ℚ, ℤ/p^r, cyclotomic integers, truncated power
//! series and Laurent polynomials, plus linear algebra over ℤ/p^r.

mod cyclo;
mod laurent;
mod linalg;
mod ring;
mod series;
mod zmod;

pub use cyclo::{common_order, cyclotomic_poly, cyclotomic_reduce, divisors, euler_phi, CycloElem};
pub use laurent::{LaurentPoly, LaurentRing};
pub use linalg::{Smith, ZMat};
pub use ring::{int_valuation, padic_valuation, rat, rint, RationalLike, RingElem};
pub use series::TruncSeries;
pub use zmod::{hensel_lift, ZModPr};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RingError {
    #[error("ring mismatch: {0}")]
    Mismatch(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("precision: {0}")]
    Precision(String),
    #[error("singular system: {0}")]
    Singular(String),
}
