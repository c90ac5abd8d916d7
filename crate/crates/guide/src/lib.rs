//! The chapters of `book/` as doc modules, so `cargo test` runs every
//! snippet. One module per chapter keeps failures traceable.

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/exact.md")]
pub mod exact {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/heuristics.md")]
pub mod heuristics {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/metrics.md")]
pub mod metrics {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/benchgen.md")]
pub mod benchgen {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/harness.md")]
pub mod harness {}
