//! Euler-Kronecker constants of prime cyclotomic fields via FFTs of
//! special-function tables, with the supporting special functions,
//! transforms, group arithmetic, Stieltjes constants and prime-offset tools.

pub mod cache;
pub mod ek;
pub mod error;
pub mod fft;
pub mod multgroup;
pub mod offsets;
pub mod specfun;
pub mod stieltjes;
pub mod sum;

pub use cache::{FunctionTag, ValueTable};
pub use ek::{Caches, CharacterSums, EKResult, Method};
pub use error::{Error, Result};
pub use fft::{DifPair, Sign, Spectrum};
pub use multgroup::PrimeContext;
pub use offsets::OffsetSequence;
pub use specfun::{Constants, EvalConfig};
pub use stieltjes::StieltjesTable;
