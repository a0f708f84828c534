//! Fractional-power detection on finite and infinite words, and the
//! construction of bi-infinite power-free words that keep a prescribed
//! factor while a chosen letter occurs only finitely often.

pub mod assembly;
pub mod delta;
pub mod error;
pub mod exponent;
pub mod fixture;
pub mod oracle;
pub mod par;
pub mod power;
pub mod streams;
pub mod words;

pub use error::{Error, Result};
pub use exponent::{Exponent, PowerBound};
pub use par::Exec;
pub use power::{is_power_free, max_exponent, suffix_violations, Repetition, Verdict};
pub use words::{Alphabet, Letter, Word};
