//! Vertex/edge indexing of the complete graph `K_n`, edge orderings,
//! Hamiltonian paths, seeded sampling, and the XOR ordering construction.
//!
//! Vertices are `0..n`. Edges are unordered pairs `{u, v}` identified by a
//! dense colexicographic index, so an [`EdgeId`] is independent of `n`:
//! `id({u, v}) = max(u,v) * (max(u,v) - 1) / 2 + min(u,v)`.
//!
//! An [`EdgeOrdering`] is a bijection from the `n(n-1)/2` edges to the ranks
//! `1..=n(n-1)/2`. Hamiltonian paths are directed vertex sequences; a path is
//! *increasing* when its consecutive edge ranks strictly increase.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Number of edges of `K_n`.
pub fn edge_count(n: u32) -> usize {
    (n as usize) * (n as usize - 1) / 2
}

/// Canonical identifier of an unordered vertex pair, colexicographic on
/// `(min, max)`: both directions of the pair map to the same id in O(1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

impl EdgeId {
    /// Checked constructor; `u` and `v` must be distinct vertices below `n`.
    pub fn new(u: u32, v: u32, n: u32) -> Result<EdgeId> {
        if u == v {
            return Err(Error::invalid(format!("edge endpoints equal: {u}")));
        }
        if u >= n || v >= n {
            return Err(Error::invalid(format!(
                "edge ({u},{v}) out of range for n={n}"
            )));
        }
        Ok(EdgeId::from_pair(u, v))
    }

    /// Unchecked pair-to-id map (`u != v` assumed).
    #[inline]
    pub fn from_pair(u: u32, v: u32) -> EdgeId {
        debug_assert_ne!(u, v);
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        EdgeId(b * (b - 1) / 2 + a)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Inverse map: id to `(min, max)` endpoints.
    pub fn endpoints(self) -> (u32, u32) {
        let id = self.0 as u64;
        let mut b = ((1.0 + (1.0 + 8.0 * id as f64).sqrt()) / 2.0) as u64;
        while b * (b - 1) / 2 > id {
            b -= 1;
        }
        while (b + 1) * b / 2 <= id {
            b += 1;
        }
        let a = id - b * (b - 1) / 2;
        (a as u32, b as u32)
    }
}

/// The spec'd free-function form of pair indexing.
pub fn edge_index(u: u32, v: u32, n: u32) -> Result<EdgeId> {
    EdgeId::new(u, v, n)
}

/// A total order on the edges of `K_n`: a bijection edge -> rank in
/// `1..=n(n-1)/2` together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrdering {
    n: u32,
    rank_of: Vec<u32>,
    edge_at: Vec<EdgeId>,
}

impl EdgeOrdering {
    /// Build from a rank assignment `rank_of[edge id] = rank` (1-based).
    /// Fails unless the assignment is a bijection onto `1..=n(n-1)/2`.
    pub fn from_ranks(n: u32, rank_of: Vec<u32>) -> Result<EdgeOrdering> {
        if n < 2 {
            return Err(Error::invalid(format!("need n >= 2, got {n}")));
        }
        let m = edge_count(n);
        if rank_of.len() != m {
            return Err(Error::invalid(format!(
                "rank table has {} entries, expected {m}",
                rank_of.len()
            )));
        }
        let mut edge_at = vec![EdgeId(u32::MAX); m];
        for (e, &r) in rank_of.iter().enumerate() {
            if r < 1 || r as usize > m {
                return Err(Error::invalid(format!("rank {r} out of 1..={m}")));
            }
            if edge_at[r as usize - 1] != EdgeId(u32::MAX) {
                return Err(Error::invalid(format!("duplicate rank {r}")));
            }
            edge_at[r as usize - 1] = EdgeId(e as u32);
        }
        Ok(EdgeOrdering { n, rank_of, edge_at })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rank_of.len()
    }

    /// Rank of an edge, in `1..=n(n-1)/2`.
    #[inline]
    pub fn rank(&self, e: EdgeId) -> u32 {
        self.rank_of[e.index()]
    }

    /// Inverse of [`rank`](Self::rank).
    #[inline]
    pub fn edge_with_rank(&self, rank: u32) -> EdgeId {
        self.edge_at[rank as usize - 1]
    }

    /// All edges sorted by ascending rank.
    pub fn edges_by_rank(&self) -> &[EdgeId] {
        &self.edge_at
    }

    /// Whether the path's consecutive edge ranks strictly increase.
    pub fn is_increasing(&self, p: &HamPath) -> bool {
        let mut last = 0u32;
        for e in p.edge_iter() {
            let r = self.rank(e);
            if r <= last {
                return false;
            }
            last = r;
        }
        true
    }
}

/// Draw a uniformly random edge ordering via an unbiased shuffle.
/// Deterministic for a fixed generator state.
pub fn sample_uniform_ordering<R: Rng>(n: u32, rng: &mut R) -> Result<EdgeOrdering> {
    if n < 2 {
        return Err(Error::invalid(format!("need n >= 2, got {n}")));
    }
    let m = edge_count(n);
    let mut ranks: Vec<u32> = (1..=m as u32).collect();
    ranks.shuffle(rng);
    EdgeOrdering::from_ranks(n, ranks)
}

/// The XOR ordering of `K_{2^d}`: label vertices by `0..2^d` and sort edges
/// primarily by the XOR of their endpoints (numeric order, equal to
/// lexicographic order on the fixed-width bitstrings). Within an XOR class,
/// ties break by canonical `(min, max)` pair order, which makes the
/// construction deterministic.
pub fn ccs_ordering(d: u32) -> Result<EdgeOrdering> {
    if d < 1 {
        return Err(Error::invalid(format!("need d >= 1, got {d}")));
    }
    if d > 12 {
        return Err(Error::capacity(format!(
            "ccs_ordering supports d <= 12 (n = 4096), got d = {d}"
        )));
    }
    let n = 1u32 << d;
    let mut edges: Vec<(u32, u32, u32)> = Vec::with_capacity(edge_count(n));
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u ^ v, u, v));
        }
    }
    edges.sort_unstable();
    let mut rank_of = vec![0u32; edge_count(n)];
    for (i, &(_, u, v)) in edges.iter().enumerate() {
        rank_of[EdgeId::from_pair(u, v).index()] = i as u32 + 1;
    }
    EdgeOrdering::from_ranks(n, rank_of)
}

/// A directed Hamiltonian path of `K_n`, stored as its vertex sequence.
/// The sequence is always a permutation of `0..n` with `n >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HamPath {
    verts: Vec<u32>,
}

impl HamPath {
    pub fn new(verts: Vec<u32>) -> Result<HamPath> {
        let n = verts.len();
        if n < 2 {
            return Err(Error::invalid(format!("path needs >= 2 vertices, got {n}")));
        }
        let mut seen = vec![false; n];
        for &v in &verts {
            if v as usize >= n {
                return Err(Error::invalid(format!(
                    "vertex {v} out of range for a path on {n} vertices"
                )));
            }
            if seen[v as usize] {
                return Err(Error::invalid(format!("duplicate vertex {v}")));
            }
            seen[v as usize] = true;
        }
        Ok(HamPath { verts })
    }

    /// The path `0, 1, ..., n-1`.
    pub fn identity(n: u32) -> HamPath {
        HamPath {
            verts: (0..n).collect(),
        }
    }

    pub fn n(&self) -> u32 {
        self.verts.len() as u32
    }

    pub fn vertices(&self) -> &[u32] {
        &self.verts
    }

    pub fn reversed(&self) -> HamPath {
        let mut verts = self.verts.clone();
        verts.reverse();
        HamPath { verts }
    }

    /// The `n-1` edges in traversal order.
    pub fn edge_iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.verts
            .windows(2)
            .map(|w| EdgeId::from_pair(w[0], w[1]))
    }

    /// Whether the traversal of `e = {u, v}` goes from `min(u,v)` to
    /// `max(u,v)`; `None` if the edge is not on the path.
    pub fn forward_on(&self, e: EdgeId) -> Option<bool> {
        for w in self.verts.windows(2) {
            if EdgeId::from_pair(w[0], w[1]) == e {
                return Some(w[0] < w[1]);
            }
        }
        None
    }
}

/// The `n-1` edge ids of a path in traversal order.
pub fn path_edges(p: &HamPath) -> Vec<EdgeId> {
    p.edge_iter().collect()
}

/// A reproducible random stream: the pair (seed, stream index) fully
/// determines the draws. Substreams with distinct indices are independent
/// ChaCha8 streams, so samples can be generated in any order or in parallel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> RngStream {
        RngStream { seed, stream }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}
