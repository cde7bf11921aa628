//! Exact arithmetic in F_q, F_q[x], residue rings F_q[x]/(f) and on
//! truncated power series.

mod field;
mod poly;
mod series;

pub use field::{Elem, Field};
pub use poly::Poly;
pub use series::SeriesPrefix;
