//! Computational companion to the probabilistic study of increasing
//! Hamiltonian paths in randomly edge-ordered complete graphs.
//!
//! A uniformly random total order on the edges of `K_n` makes `X` directed
//! Hamiltonian paths increasing. This crate makes the structure around `X`
//! checkable at desk scale:
//!
//! * [`graph`] — edge indexing, orderings, paths, the XOR construction,
//!   seeded reproducible sampling;
//! * [`count`] — exact `X`, the edge-avoiding count `Z`, exact altitude and
//!   longest increasing trail via subset dynamic programming;
//! * [`sizebias`] — the coupling that sorts a fixed path's ranks along the
//!   path, realizing the size-biased law of `X`;
//! * [`oracle`] — exact moments and distributions by enumeration: linear
//!   extension counting, exhaustive ordering sweeps, and the classified
//!   triple table;
//! * [`ceg`] — common edge graphs of path triples, their reduction,
//!   statistics and canonical keys;
//! * [`limits`] — closed forms: the `e^3` family of summed limits, the
//!   triple-count upper bound, succession-free permutation counts,
//!   log-normal moments, tail constants, periodic-measure integrals;
//! * [`mc`] — reproducible Monte Carlo experiments and CSV/JSON reports.

pub mod ceg;
pub mod count;
pub mod error;
pub mod graph;
pub mod limits;
pub mod mc;
pub mod oracle;
pub mod sizebias;

pub use error::{Error, Result};
