//! Exact arithmetic for P-recursive integer sequences and D-finite power series.
//!
//! The pipeline runs from an exponential generating function built as a
//! truncated power series ([`pseries`]), through a linear differential
//! operator that annihilates it, to the P-recursive recurrence its
//! coefficients satisfy ([`holonomic`]). Recurrences can be unrolled,
//! checked against term tables, or guessed from terms ([`guess`]).
//! [`meixner`] wires the machinery to the sequence `a(n) = M_n(1)` of
//! Meixner polynomial values (OEIS A214615).

pub mod error;
pub mod exactnum;
pub mod guess;
pub mod holonomic;
pub mod meixner;
pub mod parse;
pub mod pseries;

pub use error::{Error, Result};
pub use exactnum::{BigIntValue, Poly, RationalValue};
pub use holonomic::{DiffOperator, RecurrenceOperator, SequenceTable, VerifyReport};
pub use pseries::Series;
