//! The size-bias coupling: reorder the ranks along a fixed path `P0` so that
//! `P0` becomes increasing, and draw coupled samples `(X, Y, Z)` where
//!
//! * `X` counts increasing Hamiltonian paths under the original ordering,
//! * `Y` counts them under the modified ordering (distributed as a uniform
//!   ordering conditioned on `P0` increasing), and
//! * `Z` counts increasing paths edge-disjoint from `P0`.
//!
//! `Z` ignores the relative order of `P0`'s own edges, so it is the same
//! under the original and modified orderings, which gives `Z <= Y`.

use crate::count::count_increasing_u64;
use crate::error::{Error, Result};
use crate::graph::{path_edges, sample_uniform_ordering, EdgeOrdering, HamPath, RngStream};
use serde::{Deserialize, Serialize};

/// One coupled draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupledSample {
    pub n: u32,
    pub seed: u64,
    pub stream: u64,
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

/// Reassign the multiset of ranks held by `P0`'s edges along `P0` in
/// traversal order (smallest rank to the first edge). Every other edge keeps
/// its rank, and `P0` is increasing in the result.
pub fn build_size_biased_ordering(o: &EdgeOrdering, p0: &HamPath) -> Result<EdgeOrdering> {
    if p0.n() != o.n() {
        return Err(Error::invalid(format!(
            "path on {} vertices does not match ordering on {}",
            p0.n(),
            o.n()
        )));
    }
    let edges = path_edges(p0);
    let mut ranks: Vec<u32> = edges.iter().map(|&e| o.rank(e)).collect();
    ranks.sort_unstable();
    let mut rank_of: Vec<u32> = (0..o.edge_count())
        .map(|e| o.rank(crate::graph::EdgeId(e as u32)))
        .collect();
    for (e, r) in edges.iter().zip(ranks) {
        rank_of[e.index()] = r;
    }
    EdgeOrdering::from_ranks(o.n(), rank_of)
}

/// Draw one uniform ordering on the given stream and evaluate the coupled
/// counts. Deterministic per `(seed, stream)`.
pub fn sample_xyz(n: u32, rs: RngStream, p0: &HamPath) -> Result<CoupledSample> {
    if p0.n() != n {
        return Err(Error::invalid(format!(
            "path on {} vertices does not match n = {n}",
            p0.n()
        )));
    }
    if n > crate::count::MAX_COUNT_VERTICES {
        return Err(Error::capacity(format!(
            "sample_xyz supports n <= {}, got {n}",
            crate::count::MAX_COUNT_VERTICES
        )));
    }
    let o = sample_uniform_ordering(n, &mut rs.rng())?;
    let x = count_increasing_u64(&o, None);
    let modified = build_size_biased_ordering(&o, p0)?;
    let y = count_increasing_u64(&modified, None);
    let mut skip = vec![false; o.edge_count()];
    for e in path_edges(p0) {
        skip[e.index()] = true;
    }
    let z = count_increasing_u64(&o, Some(&skip));
    Ok(CoupledSample {
        n,
        seed: rs.seed,
        stream: rs.stream,
        x,
        y,
        z,
    })
}
