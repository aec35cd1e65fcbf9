//! Ground truth by exhaustive enumeration.
//!
//! The probability that given paths are simultaneously increasing equals
//! `extensions / |union|!` where `extensions` counts the total orders of the
//! edge union consistent with every path's own edge order. The extension
//! counter is an interleaving dynamic program over prefix positions of up to
//! three chains; a shared edge advances every chain containing it at once.
//!
//! Moments follow by symmetry: fixing the first path to the identity and
//! summing the probability over all partner tuples, then multiplying by the
//! `n!` choices of the first path. All moment arithmetic is exact; floats
//! appear only in reports.

use crate::ceg::{self, RcegKey};
use crate::count::count_increasing_u64;
use crate::error::{Error, Result};
use crate::graph::{edge_count, EdgeId, EdgeOrdering, HamPath};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// Number of linear extensions of the edge union of up to three paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionCount {
    pub extensions: BigUint,
    pub union_size: u32,
    /// False exactly when the path orders force a cycle, i.e. no ordering
    /// makes all paths increasing.
    pub consistent: bool,
}

/// An exact moment `E X^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMoment {
    pub k: u32,
    pub n: u32,
    pub value: BigRational,
}

/// JSON-facing form of an exact rational result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentRecord {
    pub n: u32,
    pub k: u32,
    pub numerator: String,
    pub denominator: String,
    pub float: f64,
}

impl ExactMoment {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().expect("finite moment")
    }

    pub fn record(&self) -> MomentRecord {
        MomentRecord {
            n: self.n,
            k: self.k,
            numerator: self.value.numer().to_string(),
            denominator: self.value.denom().to_string(),
            float: self.to_f64(),
        }
    }
}

pub fn factorial_u64(n: u64) -> u64 {
    (2..=n).product()
}

pub fn factorial_big(n: u64) -> BigUint {
    let mut f = BigUint::one();
    for i in 2..=n {
        f *= i;
    }
    f
}

/// The `idx`-th permutation of `0..k` in lexicographic order.
pub fn nth_permutation(k: usize, mut idx: u64) -> Vec<u32> {
    let mut pool: Vec<u32> = (0..k as u32).collect();
    let mut out = Vec::with_capacity(k);
    for pos in (0..k).rev() {
        let f = factorial_u64(pos as u64);
        let digit = (idx / f) as usize;
        idx %= f;
        out.push(pool.remove(digit));
    }
    out
}

/// All `(n(n-1)/2)!` edge orderings of `K_n`, lexicographic in the rank
/// permutation. Only sensible for `n <= 5`.
pub fn all_orderings(n: u32) -> Result<impl Iterator<Item = EdgeOrdering>> {
    if !(2..=5).contains(&n) {
        return Err(Error::capacity(format!(
            "exhaustive ordering sweeps support 2 <= n <= 5, got {n}"
        )));
    }
    let m = edge_count(n);
    let total = factorial_u64(m as u64);
    Ok((0..total).map(move |idx| ordering_from_index(n, idx)))
}

pub fn ordering_count(n: u32) -> u64 {
    factorial_u64(edge_count(n) as u64)
}

pub fn ordering_from_index(n: u32, idx: u64) -> EdgeOrdering {
    let m = edge_count(n);
    let perm = nth_permutation(m, idx);
    let rank_of: Vec<u32> = perm.into_iter().map(|p| p + 1).collect();
    EdgeOrdering::from_ranks(n, rank_of).expect("permutation is a bijection")
}

// ---------------------------------------------------------------------------
// interleaving DP
// ---------------------------------------------------------------------------

/// Per chain position: the other chains containing this edge (they must be
/// exactly at it too), and whether this chain is the lowest one containing
/// it (the designated emitter, to avoid double counting).
#[derive(Clone, Copy)]
struct PosInfo {
    req: [(u8, u16); 2],
    req_len: u8,
    lowest: bool,
    /// Dense index of the edge in the union (used by sigma constraints).
    union_idx: u16,
}

struct ChainSet {
    chains: [Vec<EdgeId>; 3],
    info: [Vec<PosInfo>; 3],
    union_size: u32,
    union_edges: Vec<EdgeId>,
}

impl ChainSet {
    fn new(paths: &[&HamPath]) -> Result<ChainSet> {
        if paths.is_empty() || paths.len() > 3 {
            return Err(Error::invalid(format!(
                "linear extensions take 1..=3 paths, got {}",
                paths.len()
            )));
        }
        let n = paths[0].n();
        if paths.iter().any(|p| p.n() != n) {
            return Err(Error::invalid("paths have mismatched vertex counts"));
        }
        let mut chains: [Vec<EdgeId>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (i, p) in paths.iter().enumerate() {
            chains[i] = p.edge_iter().collect();
        }
        let mut union_edges: Vec<EdgeId> = chains.iter().flatten().copied().collect();
        union_edges.sort_unstable();
        union_edges.dedup();
        let union_size = union_edges.len() as u32;
        if union_size > 33 {
            return Err(Error::capacity(format!(
                "edge union of {union_size} edges exceeds the exact-count limit of 33"
            )));
        }
        // where each union edge sits in each chain
        let mut where_in: Vec<[i32; 3]> = vec![[-1; 3]; union_edges.len()];
        for (ci, chain) in chains.iter().enumerate() {
            for (pos, e) in chain.iter().enumerate() {
                let ui = union_edges.binary_search(e).unwrap();
                where_in[ui][ci] = pos as i32;
            }
        }
        let mut info: [Vec<PosInfo>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for ci in 0..3 {
            for e in &chains[ci] {
                let ui = union_edges.binary_search(e).unwrap();
                let mut req = [(0u8, 0u16); 2];
                let mut req_len = 0u8;
                let mut lowest = true;
                for (cj, w) in where_in[ui].iter().enumerate() {
                    if cj == ci || *w < 0 {
                        continue;
                    }
                    if cj < ci {
                        lowest = false;
                    }
                    req[req_len as usize] = (cj as u8, *w as u16);
                    req_len += 1;
                }
                info[ci].push(PosInfo {
                    req,
                    req_len,
                    lowest,
                    union_idx: ui as u16,
                });
            }
        }
        Ok(ChainSet {
            chains,
            info,
            union_size,
            union_edges,
        })
    }

    /// Count interleavings; `sigma` optionally pins the relative order of a
    /// designated edge subset: `shared_prefix[ci][pos]` counts designated
    /// edges among the first `pos` edges of chain `ci` that this chain is
    /// the lowest owner of, and a designated edge may only be emitted when
    /// it equals `sigma[s]` for the current designated count `s`.
    fn count(&self, sigma: Option<&SigmaConstraint>) -> u128 {
        let lens = [
            self.chains[0].len(),
            self.chains[1].len(),
            self.chains[2].len(),
        ];
        let dims = [lens[0] + 1, lens[1] + 1, lens[2] + 1];
        let mut f = vec![0u128; dims[0] * dims[1] * dims[2]];
        f[0] = 1;
        let at = |i: usize, j: usize, k: usize| (i * dims[1] + j) * dims[2] + k;
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    let val = f[at(i, j, k)];
                    if val == 0 {
                        continue;
                    }
                    let state = [i, j, k];
                    'cand: for ci in 0..3 {
                        if state[ci] >= lens[ci] {
                            continue;
                        }
                        let pi = &self.info[ci][state[ci]];
                        if !pi.lowest {
                            continue;
                        }
                        for r in 0..pi.req_len as usize {
                            let (cj, pos) = pi.req[r];
                            if state[cj as usize] != pos as usize {
                                continue 'cand;
                            }
                        }
                        if let Some(sc) = sigma {
                            if sc.designated[pi.union_idx as usize] {
                                let s = sc.emitted_before(self, state);
                                if sc.order[s] != pi.union_idx {
                                    continue 'cand;
                                }
                            }
                        }
                        let mut ns = state;
                        ns[ci] += 1;
                        for r in 0..pi.req_len as usize {
                            let (cj, pos) = pi.req[r];
                            debug_assert_eq!(ns[cj as usize], pos as usize);
                            ns[cj as usize] += 1;
                        }
                        f[at(ns[0], ns[1], ns[2])] += val;
                    }
                }
            }
        }
        f[at(lens[0], lens[1], lens[2])]
    }
}

/// Pins the relative order of the shared edges to one sequence.
struct SigmaConstraint {
    /// By union index: is the edge part of the designated (shared) set.
    designated: Vec<bool>,
    /// The required emission order, as union indices.
    order: Vec<u16>,
    /// Prefix counts of designated emissions attributed to each chain
    /// (lowest owner only), so the emitted count is a function of the state.
    prefix: [Vec<u16>; 3],
}

impl SigmaConstraint {
    fn emitted_before(&self, _cs: &ChainSet, state: [usize; 3]) -> usize {
        (self.prefix[0][state[0]] + self.prefix[1][state[1]] + self.prefix[2][state[2]]) as usize
    }
}

/// Exact number of total orders of the edge union making every path
/// increasing. Inconsistent direction combinations yield zero with
/// `consistent = false`.
pub fn linear_extensions(paths: &[&HamPath]) -> Result<ExtensionCount> {
    let cs = ChainSet::new(paths)?;
    let ext = cs.count(None);
    Ok(ExtensionCount {
        extensions: BigUint::from(ext),
        union_size: cs.union_size,
        consistent: ext > 0,
    })
}

/// `extensions / union_size!` as an exact rational.
pub fn increasing_probability(paths: &[&HamPath]) -> Result<BigRational> {
    let e = linear_extensions(paths)?;
    Ok(BigRational::new(
        BigInt::from(e.extensions),
        BigInt::from(factorial_big(e.union_size as u64)),
    ))
}

fn sum_grouped(groups: HashMap<(u128, u32), u64>) -> BigRational {
    let mut total = BigRational::zero();
    for ((ext, union), mult) in groups {
        total += BigRational::new(
            BigInt::from(ext) * BigInt::from(mult),
            BigInt::from(factorial_big(union as u64)),
        );
    }
    total
}

fn merge(mut a: HashMap<(u128, u32), u64>, b: HashMap<(u128, u32), u64>) -> HashMap<(u128, u32), u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Restrictions on the third-moment sum over partner paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThirdMomentRestriction {
    /// The full sum, `E X^3`.
    None,
    /// Only tuples with `C` edge-disjoint from `A`.
    CDisjointFromA,
    /// Only tuples with both `B` and `C` edge-disjoint from `A`.
    BcDisjointFromA,
}

/// Exact `E X^k` for `k in {1, 2, 3}`, documented limits `n <= 10` for
/// `k = 2` and `n <= 6` for `k = 3` (`n = 7` via [`exact_moment_extended`]).
pub fn exact_moment(n: u32, k: u32) -> Result<ExactMoment> {
    exact_moment_impl(n, k, false)
}

/// Same as [`exact_moment`] with the slow `k = 3, n = 7` case allowed.
pub fn exact_moment_extended(n: u32, k: u32) -> Result<ExactMoment> {
    exact_moment_impl(n, k, true)
}

fn exact_moment_impl(n: u32, k: u32, extended: bool) -> Result<ExactMoment> {
    if n < 2 {
        return Err(Error::invalid(format!("need n >= 2, got {n}")));
    }
    let value = match k {
        1 => BigRational::from(BigInt::from(n)),
        2 => {
            if n > 10 {
                return Err(Error::capacity(format!(
                    "exact_moment(k = 2) supports n <= 10, got {n}"
                )));
            }
            second_moment(n)
        }
        3 => {
            let limit = if extended { 7 } else { 6 };
            if n > limit {
                return Err(Error::capacity(format!(
                    "exact_moment(k = 3) supports n <= {limit}, got {n}"
                )));
            }
            third_moment_sum(n, ThirdMomentRestriction::None)
        }
        _ => {
            return Err(Error::invalid(format!(
                "moment order must be 1, 2 or 3, got {k}"
            )))
        }
    };
    Ok(ExactMoment { k, n, value })
}

fn second_moment(n: u32) -> BigRational {
    let ident = HamPath::identity(n);
    let total = factorial_u64(n as u64);
    let groups = (0..total)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<(u128, u32), u64>, idx| {
            let b = HamPath::new(nth_permutation(n as usize, idx)).expect("permutation");
            let cs = ChainSet::new(&[&ident, &b]).expect("within limits");
            *acc.entry((cs.count(None), cs.union_size)).or_insert(0) += 1;
            acc
        })
        .reduce(HashMap::new, merge);
    sum_grouped(groups) * BigRational::from(BigInt::from(factorial_big(n as u64)))
}

/// The sum over all ordered path triples, restricted per `r`, of the
/// probability that all three are increasing. `E X^3` for `r = None`; the
/// two restricted variants are the exact finite-n counterparts of `n E[YZ]`
/// and `n E[Z^2]`.
pub fn restricted_third_sum(n: u32, r: ThirdMomentRestriction) -> Result<BigRational> {
    if !(2..=7).contains(&n) {
        return Err(Error::capacity(format!(
            "third-moment sums support 2 <= n <= 7, got {n}"
        )));
    }
    Ok(third_moment_sum(n, r))
}

fn third_moment_sum(n: u32, r: ThirdMomentRestriction) -> BigRational {
    let ident = HamPath::identity(n);
    let ident_edges: Vec<bool> = {
        let mut v = vec![false; edge_count(n)];
        for e in ident.edge_iter() {
            v[e.index()] = true;
        }
        v
    };
    let total = factorial_u64(n as u64);
    let partners: Vec<HamPath> = (0..total)
        .map(|idx| HamPath::new(nth_permutation(n as usize, idx)).expect("permutation"))
        .collect();
    let disjoint: Vec<bool> = partners
        .iter()
        .map(|p| p.edge_iter().all(|e| !ident_edges[e.index()]))
        .collect();
    let groups = (0..partners.len())
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<(u128, u32), u64>, bi| {
            if r == ThirdMomentRestriction::BcDisjointFromA && !disjoint[bi] {
                return acc;
            }
            for ci in 0..partners.len() {
                match r {
                    ThirdMomentRestriction::None => {}
                    ThirdMomentRestriction::CDisjointFromA
                    | ThirdMomentRestriction::BcDisjointFromA => {
                        if !disjoint[ci] {
                            continue;
                        }
                    }
                }
                let cs = ChainSet::new(&[&ident, &partners[bi], &partners[ci]])
                    .expect("within limits");
                *acc.entry((cs.count(None), cs.union_size)).or_insert(0) += 1;
            }
            acc
        })
        .reduce(HashMap::new, merge);
    sum_grouped(groups) * BigRational::from(BigInt::from(factorial_big(n as u64)))
}

/// `E Z` (expected number of increasing paths edge-disjoint from the
/// identity path) by direct partner enumeration: each disjoint partner is
/// increasing with probability `1/(n-1)!`.
pub fn exact_disjoint_expectation(n: u32) -> Result<BigRational> {
    if !(2..=10).contains(&n) {
        return Err(Error::capacity(format!(
            "disjoint-path enumeration supports 2 <= n <= 10, got {n}"
        )));
    }
    let ident_edges: Vec<bool> = {
        let mut v = vec![false; edge_count(n)];
        for e in HamPath::identity(n).edge_iter() {
            v[e.index()] = true;
        }
        v
    };
    let total = factorial_u64(n as u64);
    let count: u64 = (0..total)
        .into_par_iter()
        .filter(|&idx| {
            let p = nth_permutation(n as usize, idx);
            p.windows(2)
                .all(|w| !ident_edges[EdgeId::from_pair(w[0], w[1]).index()])
        })
        .count() as u64;
    Ok(BigRational::new(
        BigInt::from(count),
        BigInt::from(factorial_big(n as u64 - 1)),
    ))
}

/// Exact histogram of `X` over all `(n(n-1)/2)!` orderings, `n <= 5`.
pub fn exhaustive_distribution(n: u32) -> Result<BTreeMap<u64, u64>> {
    if !(2..=5).contains(&n) {
        return Err(Error::capacity(format!(
            "exhaustive_distribution supports 2 <= n <= 5, got {n}"
        )));
    }
    let total = ordering_count(n);
    let hist = (0..total)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<u64, u64>, idx| {
            let o = ordering_from_index(n, idx);
            let x = count_increasing_u64(&o, None);
            *acc.entry(x).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(hist)
}

/// The exact table `T_n(reduced graph, c)`: for every reduced common edge
/// graph key and every vector `c = (c_AB, c_AC, c_BC, c_ABC)` of shared
/// edge counts, the number of edge-ordered triples realizing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TnTable {
    pub n: u32,
    pub entries: BTreeMap<(RcegKey, [u32; 4]), BigUint>,
}

impl TnTable {
    /// `sum over entries of T / |A u B u C|!`, which must equal `E X^3`.
    pub fn third_moment(&self) -> BigRational {
        let n = self.n as i64;
        let mut total = BigRational::zero();
        for ((_, c), t) in &self.entries {
            let union = 3 * n - 3 - c[0] as i64 - c[1] as i64 - c[2] as i64 - 2 * c[3] as i64;
            total += BigRational::new(
                BigInt::from(t.clone()),
                BigInt::from(factorial_big(union as u64)),
            );
        }
        total
    }
}

/// Classify every edge-ordered triple of `K_n` (`n <= 5`) by its reduced
/// common edge graph and shared-edge counts. The first path is fixed to the
/// identity and the result multiplied by `n!`. Orderings of the edge union
/// are grouped by their restriction to the shared edges; each restriction
/// is one classified reduced graph, weighted by the number of full
/// extensions realizing it.
pub fn brute_force_tn(n: u32) -> Result<TnTable> {
    if !(2..=5).contains(&n) {
        return Err(Error::capacity(format!(
            "brute_force_tn supports 2 <= n <= 5, got {n}"
        )));
    }
    let ident = HamPath::identity(n);
    let total = factorial_u64(n as u64);
    let partners: Vec<HamPath> = (0..total)
        .map(|idx| HamPath::new(nth_permutation(n as usize, idx)).expect("permutation"))
        .collect();
    let entries = (0..partners.len())
        .into_par_iter()
        .fold(
            BTreeMap::new,
            |mut acc: BTreeMap<(RcegKey, [u32; 4]), BigUint>, bi| {
                for ci in 0..partners.len() {
                    accumulate_triple(&ident, &partners[bi], &partners[ci], &mut acc);
                }
                acc
            },
        )
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                let e = a.entry(k).or_insert_with(BigUint::zero);
                *e += v;
            }
            a
        });
    let nf = factorial_big(n as u64);
    let entries = entries
        .into_iter()
        .map(|(k, v)| (k, v * &nf))
        .collect();
    Ok(TnTable { n, entries })
}

fn accumulate_triple(
    a: &HamPath,
    b: &HamPath,
    c: &HamPath,
    acc: &mut BTreeMap<(RcegKey, [u32; 4]), BigUint>,
) {
    let cs = ChainSet::new(&[a, b, c]).expect("within limits");
    // shared edges and the c vector
    let mut owners: Vec<u8> = vec![0; cs.union_edges.len()];
    for (ci, chain) in cs.chains.iter().enumerate() {
        for e in chain {
            let ui = cs.union_edges.binary_search(e).unwrap();
            owners[ui] |= 1 << ci;
        }
    }
    let mut cvec = [0u32; 4];
    let mut designated = vec![false; cs.union_edges.len()];
    let mut shared_count = 0usize;
    for (ui, &m) in owners.iter().enumerate() {
        match m {
            0b011 => cvec[0] += 1,
            0b101 => cvec[1] += 1,
            0b110 => cvec[2] += 1,
            0b111 => cvec[3] += 1,
            _ => continue,
        }
        designated[ui] = true;
        shared_count += 1;
    }
    // prefix counts of designated emissions per chain (lowest owner only)
    let mut prefix: [Vec<u16>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for ci in 0..3 {
        let mut acc_cnt = 0u16;
        prefix[ci].push(0);
        for pi in &cs.info[ci] {
            if pi.lowest && designated[pi.union_idx as usize] {
                acc_cnt += 1;
            }
            prefix[ci].push(acc_cnt);
        }
    }
    // enumerate the feasible shared-edge orders
    let mut sub_state = [0usize; 3];
    let mut sigma_order: Vec<u16> = Vec::with_capacity(shared_count);
    enumerate_sigmas(&cs, &designated, &mut sub_state, &mut sigma_order, &mut |sigma| {
        let sc = SigmaConstraint {
            designated: designated.clone(),
            order: sigma.to_vec(),
            prefix: prefix.clone(),
        };
        let count = cs.count(Some(&sc));
        if count == 0 {
            return;
        }
        let rank_of_shared: HashMap<EdgeId, u32> = sigma
            .iter()
            .enumerate()
            .map(|(i, &ui)| (cs.union_edges[ui as usize], i as u32 + 1))
            .collect();
        let g = ceg::common_edge_graph_with_shared_ranks(a, b, c, &rank_of_shared)
            .expect("feasible sigma yields a valid edge-ordered triple");
        let r = ceg::reduce(&g).expect("genuine triples satisfy the run structure");
        let key = ceg::canonical_key(&r);
        let e = acc.entry((key, cvec)).or_insert_with(BigUint::zero);
        *e += count;
    });
}

/// Depth-first enumeration of total orders of the designated edges that
/// respect every chain's internal order, using the same simultaneous
/// advancement rule as the counting DP but skipping non-designated edges
/// (their placement is unconstrained at this level).
fn enumerate_sigmas(
    cs: &ChainSet,
    designated: &[bool],
    state: &mut [usize; 3],
    order: &mut Vec<u16>,
    emit: &mut impl FnMut(&[u16]),
) {
    // advance past non-designated positions: they impose no sigma choice,
    // but chains only move when their shared edges allow; we therefore
    // enumerate over the subsequence of designated edges directly.
    // Candidates: next designated edge of each chain.
    let mut any = false;
    'cand: for ci in 0..3 {
        // find the next designated position at or after state[ci]
        let chain_info = &cs.info[ci];
        let mut p = state[ci];
        while p < chain_info.len() && !designated[chain_info[p].union_idx as usize] {
            p += 1;
        }
        if p >= chain_info.len() {
            continue;
        }
        let pi = &chain_info[p];
        if !pi.lowest {
            continue;
        }
        // every chain containing the edge must reach it next among its own
        // designated edges
        for r in 0..pi.req_len as usize {
            let (cj, pos) = pi.req[r];
            let (cj, pos) = (cj as usize, pos as usize);
            let mut q = state[cj];
            while q < cs.info[cj].len() && !designated[cs.info[cj][q].union_idx as usize] {
                q += 1;
            }
            if q != pos {
                continue 'cand;
            }
        }
        any = true;
        let saved = *state;
        state[ci] = p + 1;
        for r in 0..pi.req_len as usize {
            let (cj, pos) = pi.req[r];
            state[cj as usize] = pos as usize + 1;
        }
        order.push(pi.union_idx);
        enumerate_sigmas(cs, designated, state, order, emit);
        order.pop();
        *state = saved;
    }
    if !any {
        // no designated edges remain in any chain: order complete
        let complete = (0..3).all(|ci| {
            (state[ci]..cs.info[ci].len())
                .all(|p| !designated[cs.info[ci][p].union_idx as usize])
        });
        if complete {
            emit(order);
        }
    }
}
