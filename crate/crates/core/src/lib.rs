//! Automatic relations at desk scale: NFA algebra over tuple alphabets,
//! filters, convolution with existential and universal projection, the
//! corridor-tiling reduction and Buchi-arithmetic formula builders.

pub mod buchi;
pub mod convolution;
pub mod error;
pub mod filters;
pub mod nfa;
pub mod ops;
pub mod regex;
pub mod symbol;
pub mod tiling;

pub use error::{AutomataError, BuchiError, ConvError, TilingError};
pub use nfa::{Nfa, NfaBuilder, StateId};
pub use regex::Regex;
pub use symbol::{Alphabet, Atom, Symbol, Word, PAD};
