//! Exact computations for finite flat covers of a formal disk.
//!
//! - [`field`], [`series`]: exact scalars (rationals, prime fields) and
//!   truncated power series k[t]/t^N.
//! - [`cover`]: rank-d algebras by structure constants; trace-form
//!   discriminants, branch valuations, basis changes, trace splitting.
//! - [`crimp`]: subalgebras of a fixed normalization with prescribed branch
//!   divisor, enumerated exhaustively over F_q.
//! - [`curve`]: weighted stability of divisorially marked nodal curves.
//! - [`monodromy`]: permutation tuples for branched covers, Hurwitz counts.
//!
//! No floating point is used anywhere.

pub mod cover;
pub mod crimp;
pub mod curve;
pub mod descriptor;
pub mod error;
pub mod field;
pub mod linalg;
pub mod monodromy;
pub mod series;

pub use error::{Error, ErrorKind, Result};
pub use field::{Field, Scalar};
pub use series::{SeriesMatrix, TruncatedSeries, Valuation};
