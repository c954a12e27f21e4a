//! Weighted automata and weighted logic over nested words and alternating texts.
//!
//! The crate is `no_std` (it needs `alloc`). All arithmetic is exact.
//!
//! * [`semiring`]: the commutative semirings and their weights.
//! * [`nested_word`]: nested words, factors, surface arches, enumeration.
//! * [`wnwa`]: weighted nested-word automata.
//! * [`text`] and [`wpa`]: alternating texts and weighted parenthesizing automata.
//! * [`bridge`]: the embeddings of nested words into texts and the automaton translations.
//! * [`logic`]: weighted MSO, disambiguation, fragments, definition schemes.
//! * [`algebraic`]: algebraic systems, their solutions and the series constructions.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod algebraic;
pub mod bridge;
pub mod error;
pub mod guard;
pub mod logic;
pub mod nested_word;
pub mod semiring;
pub mod text;
pub mod wnwa;
pub mod wpa;

mod sparse;

pub use error::{Error, Result};
pub use guard::Guards;
pub use nested_word::NestedWord;
pub use semiring::{Semiring, Weight};
pub use text::Text;
pub use wnwa::Wnwa;
pub use wpa::Wpa;
