//! Exact arithmetic in ℚ(q^{1/2e}, t)[P]: scalars, Laurent polynomials in X,
//! rational functions in t, and truncated q-series.

pub mod laurent;
pub mod poly;
pub mod ratfn;
pub mod scalar;
pub mod series;

pub use laurent::{Coeff, LaurentPoly, TMode};
pub use poly::Poly;
pub use ratfn::RatFn;
pub use scalar::QTScalar;
pub use series::{q_expand, TruncatedQSeries};
