//! Finite combinatorial machinery for small-cancellation groups.
//!
//! Words and presentations, piece computations and small-cancellation
//! predicates, exact Cayley balls, intersection functions, disk diagrams,
//! geodesic-language automata, local-to-global harnesses and random walks.

pub mod automata;
pub mod cayley;
pub mod corpus;
pub mod diagrams;
pub mod exec;
pub mod metrics;
pub mod mltg;
pub mod words;
pub mod presentation;
pub mod rational;
pub mod smallcancel;
pub mod suffix;
pub mod walks;

pub use exec::Exec;
pub use presentation::{parse_presentation, ParseError, Presentation};
pub use words::{cyclic_reduce, free_reduce, Alphabet, Letter, Word};
