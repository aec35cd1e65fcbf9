//! Exact counting of increasing Hamiltonian paths, the edge-avoiding
//! variant, exact altitude (longest increasing self-avoiding path), and the
//! longest increasing trail.
//!
//! The counter sweeps the edges in ascending rank and maintains a table over
//! `(visited vertex set, endpoint)` holding the number of increasing paths
//! with that vertex set ending at that endpoint. Processing edges in rank
//! order enforces "last edge rank below the current edge" by itself: when
//! edge `{u, v}` arrives, every table entry was written by a strictly
//! lower-ranked edge. Entries written while processing `{u, v}` have both
//! `u` and `v` in their vertex set and are therefore never read back by the
//! same edge, so in-place updates are safe.
//!
//! Each undirected increasing path is found once per increasing direction,
//! so the totals count directed vertex sequences.

use crate::error::{Error, Result};
use crate::graph::{edge_count, EdgeId, EdgeOrdering, HamPath};
use num_bigint::BigUint;

/// Largest vertex count accepted by the subset-table algorithms. The table
/// needs `n * 2^n` words and every count is bounded by `n! <= 20!`, which
/// fits in a `u64`.
pub const MAX_COUNT_VERTICES: u32 = 20;

/// An exact path count for one ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub n: u32,
    pub value: BigUint,
}

/// Length (in edges) of the longest increasing self-avoiding path, plus one
/// witness path achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltitudeResult {
    pub length: u32,
    pub witness: Option<Vec<u32>>,
}

fn check_capacity(n: u32) -> Result<()> {
    if n > MAX_COUNT_VERTICES {
        return Err(Error::capacity(format!(
            "subset table supports n <= {MAX_COUNT_VERTICES}, got n = {n}"
        )));
    }
    Ok(())
}

/// Core subset sweep. `skip[e]` marks forbidden edge ids.
pub(crate) fn count_increasing_u64(o: &EdgeOrdering, skip: Option<&[bool]>) -> u64 {
    let n = o.n() as usize;
    let full: usize = (1 << n) - 1;
    let mut dp = vec![0u64; n << n];
    for w in 0..n {
        dp[(1 << w) * n + w] = 1;
    }
    for &e in o.edges_by_rank() {
        if let Some(skip) = skip {
            if skip[e.index()] {
                continue;
            }
        }
        let (u, v) = e.endpoints();
        let (u, v) = (u as usize, v as usize);
        let (bu, bv) = (1usize << u, 1usize << v);
        let rest = full ^ bu ^ bv;
        let mut s = rest;
        loop {
            let muv = s | bu | bv;
            dp[muv * n + v] += dp[(s | bu) * n + u];
            dp[muv * n + u] += dp[(s | bv) * n + v];
            if s == 0 {
                break;
            }
            s = (s - 1) & rest;
        }
    }
    dp[full * n..(full + 1) * n].iter().sum()
}

/// Exact number of increasing directed Hamiltonian vertex sequences.
pub fn count_increasing_ham_paths(o: &EdgeOrdering) -> Result<CountResult> {
    check_capacity(o.n())?;
    Ok(CountResult {
        n: o.n(),
        value: BigUint::from(count_increasing_u64(o, None)),
    })
}

/// Same count restricted to paths using no forbidden edge.
pub fn count_increasing_avoiding(o: &EdgeOrdering, forbidden: &[EdgeId]) -> Result<CountResult> {
    check_capacity(o.n())?;
    let mut skip = vec![false; o.edge_count()];
    for e in forbidden {
        if e.index() >= skip.len() {
            return Err(Error::invalid(format!(
                "forbidden edge id {} out of range for n = {}",
                e.0,
                o.n()
            )));
        }
        skip[e.index()] = true;
    }
    Ok(CountResult {
        n: o.n(),
        value: BigUint::from(count_increasing_u64(o, Some(&skip))),
    })
}

/// Exact altitude of the ordering: reachability over `(vertex set, endpoint)`
/// with predecessor links for witness reconstruction. An entry first becomes
/// reachable at the lowest possible last-edge rank, so a recorded
/// predecessor always chains to a strictly lower-ranked edge.
pub fn exact_altitude(o: &EdgeOrdering) -> Result<AltitudeResult> {
    check_capacity(o.n())?;
    let n = o.n() as usize;
    let full: usize = (1 << n) - 1;
    const UNSET: u32 = u32::MAX;
    // pred[mask*n + v] = predecessor vertex, or v itself for singletons.
    let mut pred = vec![UNSET; n << n];
    for w in 0..n {
        pred[(1 << w) * n + w] = w as u32;
    }
    let mut best_mask = 1usize;
    let mut best_v = 0usize;
    let mut best_len = 0u32;
    for &e in o.edges_by_rank() {
        let (u, v) = e.endpoints();
        let (u, v) = (u as usize, v as usize);
        let (bu, bv) = (1usize << u, 1usize << v);
        let rest = full ^ bu ^ bv;
        let mut s = rest;
        loop {
            let muv = s | bu | bv;
            if pred[(s | bu) * n + u] != UNSET && pred[muv * n + v] == UNSET {
                pred[muv * n + v] = u as u32;
                let len = muv.count_ones() - 1;
                if len > best_len {
                    best_len = len;
                    best_mask = muv;
                    best_v = v;
                }
            }
            if pred[(s | bv) * n + v] != UNSET && pred[muv * n + u] == UNSET {
                pred[muv * n + u] = v as u32;
                let len = muv.count_ones() - 1;
                if len > best_len {
                    best_len = len;
                    best_mask = muv;
                    best_v = u;
                }
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & rest;
        }
    }
    // walk the predecessor chain back to the singleton
    let mut witness = Vec::with_capacity(best_len as usize + 1);
    let (mut mask, mut v) = (best_mask, best_v);
    loop {
        witness.push(v as u32);
        let p = pred[mask * n + v] as usize;
        if p == v && mask == 1 << v {
            break;
        }
        mask ^= 1 << v;
        v = p;
    }
    witness.reverse();
    Ok(AltitudeResult {
        length: best_len,
        witness: Some(witness),
    })
}

/// Longest increasing trail (edge-distinct walk), by the label procedure:
/// sweep edges by ascending rank and update both endpoint labels
/// simultaneously from the pre-edge values. Every prefix of an increasing
/// trail is an increasing trail, so the sweep is exact.
pub fn longest_increasing_trail(o: &EdgeOrdering) -> u32 {
    let n = o.n() as usize;
    let mut f = vec![0u32; n];
    for &e in o.edges_by_rank() {
        let (u, v) = e.endpoints();
        let (fu, fv) = (f[u as usize], f[v as usize]);
        f[u as usize] = f[u as usize].max(fv + 1);
        f[v as usize] = f[v as usize].max(fu + 1);
    }
    f.into_iter().max().unwrap_or(0)
}

/// All increasing directed Hamiltonian paths, lexicographic by vertex
/// sequence, truncated at `cap`.
pub fn enumerate_increasing_ham_paths(o: &EdgeOrdering, cap: usize) -> Result<Vec<HamPath>> {
    check_capacity(o.n())?;
    let n = o.n();
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(n as usize);
    let mut used = vec![false; n as usize];
    for start in 0..n {
        if out.len() >= cap {
            break;
        }
        seq.push(start);
        used[start as usize] = true;
        extend(o, &mut seq, &mut used, 0, cap, &mut out);
        used[start as usize] = false;
        seq.pop();
    }
    Ok(out)
}

fn extend(
    o: &EdgeOrdering,
    seq: &mut Vec<u32>,
    used: &mut Vec<bool>,
    last_rank: u32,
    cap: usize,
    out: &mut Vec<HamPath>,
) {
    if out.len() >= cap {
        return;
    }
    let n = o.n();
    if seq.len() == n as usize {
        out.push(HamPath::new(seq.clone()).expect("search yields permutations"));
        return;
    }
    let cur = *seq.last().unwrap();
    for next in 0..n {
        if used[next as usize] {
            continue;
        }
        let r = o.rank(EdgeId::from_pair(cur, next));
        if r > last_rank {
            seq.push(next);
            used[next as usize] = true;
            extend(o, seq, used, r, cap, out);
            used[next as usize] = false;
            seq.pop();
            if out.len() >= cap {
                return;
            }
        }
    }
}
