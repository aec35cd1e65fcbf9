//! Common edge graphs of edge-ordered path triples.
//!
//! For three increasing Hamiltonian paths `A, B, C` under one ordering, the
//! common edge graph `G` consists of every edge contained in at least two of
//! the paths, labelled by membership and per-path traversal direction, and
//! ordered by the inherited ranks. Maximal same-label runs are rank
//! consecutive and internally degree-2, so they collapse to single edges;
//! the result is the reduced common edge graph with a run length recorded
//! per collapsed edge.
//!
//! [`stats`] computes the component statistics `k1..k4`, the label counts
//! `l`, the opposite-direction counts `r`, and the original shared-edge
//! totals `c`. [`canonical_key`] serializes a reduced graph into an
//! isomorphism-invariant key: edges are emitted in rank order with their
//! labels, direction signs relative to the lowest member path, and endpoint
//! slots numbered in discovery order. Inserting edges sorted by rank leaves
//! O(1) attachment choices per edge, so the encoding identifies the graph.

use crate::count::enumerate_increasing_ham_paths;
use crate::error::{Error, Result};
use crate::graph::{path_edges, sample_uniform_ordering, EdgeId, EdgeOrdering, HamPath, RngStream};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};

/// Which of the three paths an item refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathId {
    A = 0,
    B = 1,
    C = 2,
}

impl PathId {
    pub const ALL: [PathId; 3] = [PathId::A, PathId::B, PathId::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            PathId::A => 'A',
            PathId::B => 'B',
            PathId::C => 'C',
        }
    }
}

/// Subset of `{A, B, C}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Membership(u8);

impl Membership {
    pub const EMPTY: Membership = Membership(0);
    pub const AB: Membership = Membership(0b011);
    pub const AC: Membership = Membership(0b101);
    pub const BC: Membership = Membership(0b110);
    pub const ABC: Membership = Membership(0b111);

    pub fn insert(&mut self, p: PathId) {
        self.0 |= 1 << p.index();
    }

    pub fn contains(self, p: PathId) -> bool {
        self.0 & (1 << p.index()) != 0
    }

    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    pub fn members(self) -> impl Iterator<Item = PathId> {
        PathId::ALL.into_iter().filter(move |p| self.contains(*p))
    }

    /// The lowest member; fixes the direction gauge of an edge.
    pub fn reference(self) -> PathId {
        self.members().next().expect("nonempty membership")
    }

    pub fn letters(self) -> String {
        self.members().map(|p| p.letter()).collect()
    }
}

/// One shared edge of a common edge graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CegEdge {
    /// Canonical endpoints, `u < v`.
    pub u: u32,
    pub v: u32,
    pub membership: Membership,
    /// Per path: `Some(true)` if the path traverses from `u` to `v`.
    pub forward: [Option<bool>; 3],
    /// Inherited rank (any strictly ordered keys work; only the relative
    /// order of shared edges matters).
    pub rank: u32,
}

impl CegEdge {
    /// Direction sign of member `p` relative to the reference member.
    pub fn opposite(&self, p: PathId) -> bool {
        let r = self.membership.reference();
        self.forward[p.index()] != self.forward[r.index()]
    }
}

/// Edges contained in at least two of the paths, sorted by rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonEdgeGraph {
    pub n: u32,
    pub edges: Vec<CegEdge>,
}

/// One collapsed run of the reduced common edge graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RcegEdge {
    /// Run endpoints oriented by the reference member: it enters at `tail`.
    pub tail: u32,
    pub head: u32,
    pub membership: Membership,
    /// Per member: traverses the run against the reference direction.
    /// Multi-edge runs are always traversed in one shared direction.
    pub opposite: [bool; 3],
    /// Number of original edges collapsed into this one.
    pub run_length: u32,
    /// 1-based position in the reduced edge ordering.
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedCeg {
    pub n: u32,
    pub edges: Vec<RcegEdge>,
}

/// Statistics of a reduced common edge graph. The `m_*` fields depend on
/// the full ordering, not just the reduced graph; [`stats`] leaves them zero
/// and [`analyze_triple`] fills them from [`m_counts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CegStats {
    pub k1: u32,
    pub k2: u32,
    pub k3: u32,
    pub k4: u32,
    pub l_ab: u32,
    pub l_ac: u32,
    pub l_bc: u32,
    pub l_abc: u32,
    pub r_ab: u32,
    pub r_ac: u32,
    pub r_bc: u32,
    pub c_ab: u32,
    pub c_ac: u32,
    pub c_bc: u32,
    pub c_abc: u32,
    pub m_ab: u32,
    pub m_ac: u32,
    pub m_bc: u32,
    pub good: bool,
}

/// Isomorphism-invariant key of a reduced common edge graph (excludes run
/// lengths; those are carried separately as the `c` totals).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RcegKey(pub String);

impl std::fmt::Display for RcegKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn validate_triple(paths: [&HamPath; 3], o: &EdgeOrdering) -> Result<()> {
    for (p, id) in paths.iter().zip(PathId::ALL) {
        if p.n() != o.n() {
            return Err(Error::invalid(format!(
                "path {} has {} vertices, ordering has {}",
                id.letter(),
                p.n(),
                o.n()
            )));
        }
        if !o.is_increasing(p) {
            return Err(Error::invalid(format!(
                "path {} is not increasing under the ordering",
                id.letter()
            )));
        }
    }
    Ok(())
}

fn shared_edge_map(paths: [&HamPath; 3]) -> BTreeMap<EdgeId, (Membership, [Option<bool>; 3])> {
    let mut map: BTreeMap<EdgeId, (Membership, [Option<bool>; 3])> = BTreeMap::new();
    for (p, id) in paths.iter().zip(PathId::ALL) {
        for w in p.vertices().windows(2) {
            let e = EdgeId::from_pair(w[0], w[1]);
            let entry = map.entry(e).or_insert((Membership::EMPTY, [None; 3]));
            entry.0.insert(id);
            entry.1[id.index()] = Some(w[0] < w[1]);
        }
    }
    map.retain(|_, (m, _)| m.size() >= 2);
    map
}

/// Common edge graph of an edge-ordered triple. The paths must all be
/// increasing under `o`.
pub fn common_edge_graph(
    a: &HamPath,
    b: &HamPath,
    c: &HamPath,
    o: &EdgeOrdering,
) -> Result<CommonEdgeGraph> {
    validate_triple([a, b, c], o)?;
    let map = shared_edge_map([a, b, c]);
    let mut edges: Vec<CegEdge> = map
        .into_iter()
        .map(|(e, (membership, forward))| {
            let (u, v) = e.endpoints();
            CegEdge {
                u,
                v,
                membership,
                forward,
                rank: o.rank(e),
            }
        })
        .collect();
    edges.sort_by_key(|e| e.rank);
    Ok(CommonEdgeGraph { n: o.n(), edges })
}

/// Common edge graph from ranks given only on the shared edges, for callers
/// that enumerate orderings of the edge union rather than of all of `K_n`.
/// Each path's shared edges must be increasing in the given ranks.
pub fn common_edge_graph_with_shared_ranks(
    a: &HamPath,
    b: &HamPath,
    c: &HamPath,
    rank_of_shared: &HashMap<EdgeId, u32>,
) -> Result<CommonEdgeGraph> {
    let n = a.n();
    if b.n() != n || c.n() != n {
        return Err(Error::invalid("paths have mismatched vertex counts"));
    }
    let map = shared_edge_map([a, b, c]);
    for (p, id) in [a, b, c].iter().zip(PathId::ALL) {
        let mut last: Option<u32> = None;
        for e in p.edge_iter() {
            if !map.contains_key(&e) {
                continue;
            }
            let r = *rank_of_shared.get(&e).ok_or_else(|| {
                Error::invalid(format!("no rank supplied for shared edge {}", e.0))
            })?;
            if let Some(l) = last {
                if r <= l {
                    return Err(Error::invalid(format!(
                        "shared ranks not increasing along path {}",
                        id.letter()
                    )));
                }
            }
            last = Some(r);
        }
    }
    let mut edges: Vec<CegEdge> = map
        .into_iter()
        .map(|(e, (membership, forward))| {
            let (u, v) = e.endpoints();
            CegEdge {
                u,
                v,
                membership,
                forward,
                rank: rank_of_shared[&e],
            }
        })
        .collect();
    edges.sort_by_key(|e| e.rank);
    Ok(CommonEdgeGraph { n, edges })
}

fn label_of(e: &CegEdge) -> (Membership, [bool; 3]) {
    let mut signs = [false; 3];
    for p in e.membership.members() {
        signs[p.index()] = e.opposite(p);
    }
    (e.membership, signs)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Collapse maximal same-label runs. Errors with [`Error::Integrity`] when
/// the run structure guaranteed for genuine edge-ordered triples is broken:
/// a same-label component that is not a path, is not rank-consecutive, has
/// an internal vertex of extra degree, or is traversed against its ranks.
pub fn reduce(g: &CommonEdgeGraph) -> Result<ReducedCeg> {
    let edges = &g.edges;
    let ne = edges.len();
    // group same-label vertex-connected edges
    let mut uf = UnionFind::new(ne);
    for i in 0..ne {
        for j in (i + 1)..ne {
            if label_of(&edges[i]) == label_of(&edges[j]) && touches(&edges[i], &edges[j]) {
                uf.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..ne {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    // degree of every vertex in the whole graph
    let mut g_degree: HashMap<u32, u32> = HashMap::new();
    for e in edges {
        *g_degree.entry(e.u).or_insert(0) += 1;
        *g_degree.entry(e.v).or_insert(0) += 1;
    }

    let mut reduced: Vec<(u32, RcegEdge)> = Vec::new(); // (min position, edge)
    for (_, group) in groups {
        let run = collapse_run(g, &group, &g_degree)?;
        let min_pos = group.iter().map(|&i| i as u32).min().unwrap();
        // rank-consecutiveness of the run inside G
        let mut positions: Vec<usize> = group.clone();
        positions.sort_unstable();
        for w in positions.windows(2) {
            if w[1] != w[0] + 1 {
                return Err(Error::Integrity(format!(
                    "same-label run with label {} is not rank-consecutive",
                    edges[group[0]].membership.letters()
                )));
            }
        }
        reduced.push((min_pos, run));
    }
    reduced.sort_by_key(|(pos, _)| *pos);
    let edges = reduced
        .into_iter()
        .enumerate()
        .map(|(i, (_, mut e))| {
            e.order = i as u32 + 1;
            e
        })
        .collect();
    Ok(ReducedCeg { n: g.n, edges })
}

fn touches(a: &CegEdge, b: &CegEdge) -> bool {
    a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v
}

fn collapse_run(
    g: &CommonEdgeGraph,
    group: &[usize],
    g_degree: &HashMap<u32, u32>,
) -> Result<RcegEdge> {
    let edges = &g.edges;
    let membership = edges[group[0]].membership;
    if group.len() == 1 {
        let e = &edges[group[0]];
        let r = membership.reference();
        let forward = e.forward[r.index()].expect("reference is a member");
        let (tail, head) = if forward { (e.u, e.v) } else { (e.v, e.u) };
        let mut opposite = [false; 3];
        for p in membership.members() {
            opposite[p.index()] = e.opposite(p);
        }
        return Ok(RcegEdge {
            tail,
            head,
            membership,
            opposite,
            run_length: 1,
            order: 0,
        });
    }
    // multi-edge component: must be a simple path
    let mut deg: HashMap<u32, Vec<usize>> = HashMap::new();
    for &i in group {
        deg.entry(edges[i].u).or_default().push(i);
        deg.entry(edges[i].v).or_default().push(i);
    }
    let ends: Vec<u32> = deg
        .iter()
        .filter(|(_, es)| es.len() == 1)
        .map(|(&v, _)| v)
        .collect();
    if ends.len() != 2 || deg.values().any(|es| es.len() > 2) {
        return Err(Error::Integrity(format!(
            "same-label component with label {} is not a path",
            membership.letters()
        )));
    }
    // walk from the end whose incident edge has the lower rank, so ranks
    // increase along the walk
    let start = *ends
        .iter()
        .min_by_key(|&&v| edges[deg[&v][0]].rank)
        .unwrap();
    let mut walk_vertices = vec![start];
    let mut walk_edges: Vec<usize> = Vec::with_capacity(group.len());
    let mut cur = start;
    let mut prev_edge = usize::MAX;
    for _ in 0..group.len() {
        let &next_edge = deg[&cur]
            .iter()
            .find(|&&i| i != prev_edge)
            .ok_or_else(|| Error::Integrity("broken run walk".to_string()))?;
        let e = &edges[next_edge];
        let nxt = if e.u == cur { e.v } else { e.u };
        if walk_vertices.contains(&nxt) {
            return Err(Error::Integrity(format!(
                "same-label component with label {} contains a cycle",
                membership.letters()
            )));
        }
        walk_edges.push(next_edge);
        walk_vertices.push(nxt);
        prev_edge = next_edge;
        cur = nxt;
    }
    for w in walk_edges.windows(2) {
        if edges[w[1]].rank <= edges[w[0]].rank {
            return Err(Error::Integrity(format!(
                "run with label {} is not monotone in rank along the path",
                membership.letters()
            )));
        }
    }
    // internal vertices carry no other edges of G
    for &v in &walk_vertices[1..walk_vertices.len() - 1] {
        if g_degree[&v] != 2 {
            return Err(Error::Integrity(format!(
                "internal run vertex {v} has degree {} in the common edge graph",
                g_degree[&v]
            )));
        }
    }
    // every member must traverse the run in walk direction: on the first
    // edge the traversal goes walk_vertices[0] -> walk_vertices[1]
    let first = &edges[walk_edges[0]];
    let expected_forward = first.u == walk_vertices[0];
    for p in membership.members() {
        if first.forward[p.index()] != Some(expected_forward) {
            return Err(Error::Integrity(format!(
                "path {} traverses a multi-edge run against its rank order",
                p.letter()
            )));
        }
    }
    Ok(RcegEdge {
        tail: walk_vertices[0],
        head: *walk_vertices.last().unwrap(),
        membership,
        opposite: [false; 3],
        run_length: group.len() as u32,
        order: 0,
    })
}

/// Re-expand a reduced graph using its run lengths; inverse of [`reduce`]
/// up to isomorphism. Internal run vertices are fresh.
pub fn expand(r: &ReducedCeg) -> CommonEdgeGraph {
    let mut next_vertex = r
        .edges
        .iter()
        .map(|e| e.tail.max(e.head))
        .max()
        .map_or(0, |m| m + 1)
        .max(r.n);
    let mut edges = Vec::new();
    let mut rank = 1u32;
    for e in &r.edges {
        let mut chain = vec![e.tail];
        for _ in 1..e.run_length {
            chain.push(next_vertex);
            next_vertex += 1;
        }
        chain.push(e.head);
        for seg in chain.windows(2) {
            let (u, v) = (seg[0].min(seg[1]), seg[0].max(seg[1]));
            let forward_ref = seg[0] == u; // reference traverses seg[0] -> seg[1]
            let mut forward = [None; 3];
            for p in e.membership.members() {
                forward[p.index()] = Some(if e.opposite[p.index()] {
                    !forward_ref
                } else {
                    forward_ref
                });
            }
            edges.push(CegEdge {
                u,
                v,
                membership: e.membership,
                forward,
                rank,
            });
            rank += 1;
        }
    }
    CommonEdgeGraph {
        n: next_vertex,
        edges,
    }
}

fn components(list: Vec<(u32, u32)>) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(list.len());
    for i in 0..list.len() {
        for j in (i + 1)..list.len() {
            let (a, b) = (list[i], list[j]);
            if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
                uf.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..list.len() {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    groups.into_values().collect()
}

/// All statistics determined by the reduced graph itself (`m_*` stay zero).
pub fn stats(r: &ReducedCeg) -> CegStats {
    let mut s = CegStats::default();
    for e in &r.edges {
        match e.membership {
            Membership::AB => {
                s.l_ab += 1;
                s.c_ab += e.run_length;
                if e.opposite[PathId::B.index()] {
                    s.r_ab += 1;
                }
            }
            Membership::AC => {
                s.l_ac += 1;
                s.c_ac += e.run_length;
                if e.opposite[PathId::C.index()] {
                    s.r_ac += 1;
                }
            }
            Membership::BC => {
                s.l_bc += 1;
                s.c_bc += e.run_length;
                if e.opposite[PathId::C.index()] {
                    s.r_bc += 1;
                }
            }
            Membership::ABC => {
                s.l_abc += 1;
                s.c_abc += e.run_length;
            }
            _ => unreachable!("membership of a shared edge has size >= 2"),
        }
    }
    let pairs = |f: &dyn Fn(&RcegEdge) -> bool| -> Vec<(u32, u32)> {
        r.edges
            .iter()
            .filter(|e| f(e))
            .map(|e| (e.tail, e.head))
            .collect()
    };
    let in_ab = |e: &RcegEdge| e.membership.contains(PathId::A) && e.membership.contains(PathId::B);
    let in_c = |e: &RcegEdge| e.membership.contains(PathId::C);
    s.k1 = components(pairs(&in_ab)).len() as u32;
    s.k2 = components(pairs(&|e: &RcegEdge| in_c(e))).len() as u32;

    // components of the whole graph, then classify
    let all: Vec<(u32, u32)> = r.edges.iter().map(|e| (e.tail, e.head)).collect();
    let comps = components(all);
    let mut k3 = 0;
    let mut good = true;
    for comp in &comps {
        if !comp.iter().any(|&i| in_ab(&r.edges[i])) {
            k3 += 1;
        }
        if comp.len() != 1 || r.edges[comp[0]].membership.size() != 2 {
            good = false;
        }
    }
    s.k3 = k3;
    s.good = good;

    // k4: vertices meeting an A&C edge and a B&C edge but no A&B edge
    let mut incident: HashMap<u32, (bool, bool, bool)> = HashMap::new();
    for e in &r.edges {
        let m = e.membership;
        let ac = m.contains(PathId::A) && m.contains(PathId::C);
        let bc = m.contains(PathId::B) && m.contains(PathId::C);
        let ab = m.contains(PathId::A) && m.contains(PathId::B);
        for v in [e.tail, e.head] {
            let entry = incident.entry(v).or_insert((false, false, false));
            entry.0 |= ac;
            entry.1 |= bc;
            entry.2 |= ab;
        }
    }
    s.k4 = incident
        .values()
        .filter(|(ac, bc, ab)| *ac && *bc && !*ab)
        .count() as u32;
    s
}

/// For each pair of paths, the number of edges unique to the third path
/// whose rank falls inside the closed rank-span of some common segment of
/// the pair. Spans come from components of the pairwise edge intersections
/// (triple-shared edges included).
pub fn m_counts(
    a: &HamPath,
    b: &HamPath,
    c: &HamPath,
    o: &EdgeOrdering,
) -> Result<(u32, u32, u32)> {
    validate_triple([a, b, c], o)?;
    let sets: Vec<HashSet<EdgeId>> = [a, b, c]
        .iter()
        .map(|p| p.edge_iter().collect())
        .collect();
    let count_for = |p: usize, q: usize, third: usize| -> u32 {
        let shared: Vec<EdgeId> = sets[p].intersection(&sets[q]).copied().collect();
        let pairs: Vec<(u32, u32)> = shared.iter().map(|e| e.endpoints()).collect();
        let spans: Vec<(u32, u32)> = components(pairs)
            .into_iter()
            .map(|comp| {
                let ranks: Vec<u32> = comp.iter().map(|&i| o.rank(shared[i])).collect();
                (
                    *ranks.iter().min().unwrap(),
                    *ranks.iter().max().unwrap(),
                )
            })
            .collect();
        sets[third]
            .iter()
            .filter(|e| !sets[p].contains(e) && !sets[q].contains(e))
            .filter(|e| {
                let r = o.rank(**e);
                spans.iter().any(|&(lo, hi)| lo <= r && r <= hi)
            })
            .count() as u32
    };
    Ok((count_for(0, 1, 2), count_for(0, 2, 1), count_for(1, 2, 0)))
}

/// Vertex weights: each incident shared edge counts with multiplicity equal
/// to its membership size. Bounded by 6 for genuine triples.
pub fn vertex_weights(g: &CommonEdgeGraph) -> BTreeMap<u32, u32> {
    let mut w = BTreeMap::new();
    for e in &g.edges {
        *w.entry(e.u).or_insert(0) += e.membership.size();
        *w.entry(e.v).or_insert(0) += e.membership.size();
    }
    w
}

/// Outcome of one structural check, with a description of the failure when
/// it does not hold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClaimOutcome {
    pub holds: bool,
    pub witness: Option<String>,
}

impl ClaimOutcome {
    fn pass() -> Self {
        ClaimOutcome {
            holds: true,
            witness: None,
        }
    }
    fn fail(witness: String) -> Self {
        ClaimOutcome {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Report of the structural claims checked on one edge-ordered triple.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClaimReport {
    /// Same-label runs are rank-consecutive with internal degree 2.
    pub run_structure: ClaimOutcome,
    /// `k1 + k2 >= l_AB`.
    pub segments_cover_ab: ClaimOutcome,
    /// `k1 + k2 >= l_ABC`.
    pub segments_cover_abc: ClaimOutcome,
    /// Either some permutation has `|(A' u B') n C'| <= (1 - eps) n`, or
    /// `|A n B n C| >= (1 - 18 eps) n`.
    pub dichotomy: ClaimOutcome,
    pub max_vertex_weight: u32,
    pub stats: CegStats,
}

impl ClaimReport {
    pub fn all_hold(&self) -> bool {
        self.run_structure.holds
            && self.segments_cover_ab.holds
            && self.segments_cover_abc.holds
            && self.dichotomy.holds
    }
}

/// Run all structural checks on a triple at tolerance `eps > 0`.
pub fn check_claims(
    a: &HamPath,
    b: &HamPath,
    c: &HamPath,
    o: &EdgeOrdering,
    eps: f64,
) -> Result<ClaimReport> {
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    let g = common_edge_graph(a, b, c, o)?;
    let (run_structure, stats) = match reduce(&g) {
        Ok(r) => (ClaimOutcome::pass(), stats(&r)),
        Err(Error::Integrity(msg)) => (ClaimOutcome::fail(msg), CegStats::default()),
        Err(e) => return Err(e),
    };
    let check_ge = |lhs: u32, rhs: u32, name: &str| {
        if lhs >= rhs {
            ClaimOutcome::pass()
        } else {
            ClaimOutcome::fail(format!("k1 + k2 = {lhs} < {name} = {rhs}"))
        }
    };
    let segments_cover_ab = check_ge(stats.k1 + stats.k2, stats.l_ab, "l_AB");
    let segments_cover_abc = check_ge(stats.k1 + stats.k2, stats.l_abc, "l_ABC");

    let sets: Vec<HashSet<EdgeId>> = [a, b, c]
        .iter()
        .map(|p| p.edge_iter().collect())
        .collect();
    let n = o.n() as f64;
    let union_cap = |third: usize| {
        let (p, q) = match third {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        sets[third]
            .iter()
            .filter(|e| sets[p].contains(e) || sets[q].contains(e))
            .count() as f64
    };
    let min_overlap = (0..3).map(union_cap).fold(f64::INFINITY, f64::min);
    let triple_shared = sets[0]
        .iter()
        .filter(|e| sets[1].contains(e) && sets[2].contains(e))
        .count() as f64;
    let dichotomy = if min_overlap <= (1.0 - eps) * n || triple_shared >= (1.0 - 18.0 * eps) * n {
        ClaimOutcome::pass()
    } else {
        ClaimOutcome::fail(format!(
            "min |(A' u B') n C'| = {min_overlap} > {} and |A n B n C| = {triple_shared} < {}",
            (1.0 - eps) * n,
            (1.0 - 18.0 * eps) * n
        ))
    };
    let max_vertex_weight = vertex_weights(&g).values().copied().max().unwrap_or(0);
    Ok(ClaimReport {
        run_structure,
        segments_cover_ab,
        segments_cover_abc,
        dichotomy,
        max_vertex_weight,
        stats,
    })
}

fn encode<'a, I>(edges: I) -> String
where
    I: Iterator<Item = (&'a Membership, Vec<bool>, u32, u32)>,
{
    let mut slot: HashMap<u32, usize> = HashMap::new();
    let mut parts = Vec::new();
    for (membership, opposite_signs, tail, head) in edges {
        let next = slot.len();
        let t = *slot.entry(tail).or_insert(next);
        let next = slot.len();
        let h = *slot.entry(head).or_insert(next);
        let signs: String = opposite_signs
            .iter()
            .map(|&o| if o { '-' } else { '+' })
            .collect();
        parts.push(format!("{}{}:{}>{}", membership.letters(), signs, t, h));
    }
    parts.join(";")
}

/// Canonical key of a reduced common edge graph: rank-ordered edge stream
/// with membership, non-reference direction signs, and discovery-numbered
/// endpoint slots.
pub fn canonical_key(r: &ReducedCeg) -> RcegKey {
    RcegKey(encode(r.edges.iter().map(|e| {
        let signs: Vec<bool> = e
            .membership
            .members()
            .skip(1)
            .map(|p| e.opposite[p.index()])
            .collect();
        (&e.membership, signs, e.tail, e.head)
    })))
}

/// The same encoding applied to an unreduced graph; used to compare graphs
/// up to isomorphism (e.g. in the reduce/expand round trip).
pub fn graph_key(g: &CommonEdgeGraph) -> RcegKey {
    RcegKey(encode(g.edges.iter().map(|e| {
        let r = e.membership.reference();
        let forward = e.forward[r.index()].expect("reference is a member");
        let (tail, head) = if forward { (e.u, e.v) } else { (e.v, e.u) };
        let signs: Vec<bool> = e
            .membership
            .members()
            .skip(1)
            .map(|p| e.opposite(p))
            .collect();
        (&e.membership, signs, tail, head)
    })))
}

/// A triple of increasing paths found under one sampled ordering.
#[derive(Debug, Clone)]
pub struct HarvestedTriple {
    pub ordering: EdgeOrdering,
    pub paths: [HamPath; 3],
    pub stream: u64,
}

/// Sample orderings on consecutive streams of `seed` and collect ordered
/// triples (repetitions allowed) of their increasing Hamiltonian paths,
/// up to `per_ordering` triples from any one ordering, until `want` triples
/// are gathered.
pub fn harvest_triples(
    n: u32,
    seed: u64,
    want: usize,
    per_ordering: usize,
) -> Result<Vec<HarvestedTriple>> {
    let mut out = Vec::with_capacity(want);
    let mut stream = 0u64;
    while out.len() < want {
        let rs = RngStream::new(seed, stream);
        let o = sample_uniform_ordering(n, &mut rs.rng())?;
        let paths = enumerate_increasing_ham_paths(&o, 32)?;
        let mut taken = 0usize;
        'outer: for i in 0..paths.len() {
            for j in 0..paths.len() {
                for k in 0..paths.len() {
                    if taken >= per_ordering || out.len() >= want {
                        break 'outer;
                    }
                    out.push(HarvestedTriple {
                        ordering: o.clone(),
                        paths: [paths[i].clone(), paths[j].clone(), paths[k].clone()],
                        stream,
                    });
                    taken += 1;
                }
            }
        }
        stream += 1;
        if stream > (want as u64 + 16) * 64 {
            return Err(Error::capacity(format!(
                "could not harvest {want} triples at n = {n} after {stream} orderings"
            )));
        }
    }
    Ok(out)
}

/// Full analysis bundle for one triple.
#[derive(Debug, Clone)]
pub struct TripleAnalysis {
    pub graph: CommonEdgeGraph,
    pub reduced: ReducedCeg,
    pub stats: CegStats,
    pub key: RcegKey,
}

/// Build, reduce and measure a triple in one call; `m_*` fields are filled.
pub fn analyze_triple(
    a: &HamPath,
    b: &HamPath,
    c: &HamPath,
    o: &EdgeOrdering,
) -> Result<TripleAnalysis> {
    let graph = common_edge_graph(a, b, c, o)?;
    let reduced = reduce(&graph)?;
    let mut s = stats(&reduced);
    let (m_ab, m_ac, m_bc) = m_counts(a, b, c, o)?;
    s.m_ab = m_ab;
    s.m_ac = m_ac;
    s.m_bc = m_bc;
    let key = canonical_key(&reduced);
    Ok(TripleAnalysis {
        graph,
        reduced,
        stats: s,
        key,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Build an ordering on K_n that realizes `order` as the lowest ranks,
    /// remaining edges after them in id order.
    fn ordering_from_prefix(n: u32, order: &[(u32, u32)]) -> EdgeOrdering {
        let m = crate::graph::edge_count(n);
        let mut rank_of = vec![0u32; m];
        let mut next = 1u32;
        for &(u, v) in order {
            let e = EdgeId::from_pair(u, v);
            assert_eq!(rank_of[e.index()], 0, "duplicate edge in prefix");
            rank_of[e.index()] = next;
            next += 1;
        }
        for e in 0..m {
            if rank_of[e] == 0 {
                rank_of[e] = next;
                next += 1;
            }
        }
        EdgeOrdering::from_ranks(n, rank_of).unwrap()
    }

    fn disjoint_triple() -> (HamPath, HamPath, HamPath, EdgeOrdering) {
        let a = HamPath::identity(7);
        let b = HamPath::new(vec![1, 3, 5, 0, 2, 4, 6]).unwrap();
        let c = HamPath::new(vec![2, 6, 3, 0, 4, 1, 5]).unwrap();
        let mut prefix: Vec<(u32, u32)> = Vec::new();
        for p in [&a, &b, &c] {
            for w in p.vertices().windows(2) {
                prefix.push((w[0], w[1]));
            }
        }
        let o = ordering_from_prefix(7, &prefix);
        (a, b, c, o)
    }

    #[test]
    fn disjoint_triple_has_empty_graph() {
        let (a, b, c, o) = disjoint_triple();
        let g = common_edge_graph(&a, &b, &c, &o).unwrap();
        assert!(g.edges.is_empty());
        let r = reduce(&g).unwrap();
        let s = stats(&r);
        assert_eq!(s, CegStats { good: true, ..CegStats::default() });
        assert_eq!(m_counts(&a, &b, &c, &o).unwrap(), (0, 0, 0));
        let report = check_claims(&a, &b, &c, &o, 0.1).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.max_vertex_weight, 0);
    }

    #[test]
    fn identical_paths_collapse_to_one_abc_edge() {
        let n = 5;
        let a = HamPath::identity(n);
        let prefix: Vec<(u32, u32)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let o = ordering_from_prefix(n, &prefix);
        let g = common_edge_graph(&a, &a, &a, &o).unwrap();
        assert_eq!(g.edges.len(), 4);
        assert!(g.edges.iter().all(|e| e.membership == Membership::ABC));
        let r = reduce(&g).unwrap();
        assert_eq!(r.edges.len(), 1);
        assert_eq!(r.edges[0].run_length, 4);
        assert_eq!(r.edges[0].membership, Membership::ABC);
        let s = stats(&r);
        assert_eq!((s.k1, s.k2, s.k3, s.k4), (1, 1, 0, 0));
        assert_eq!(s.l_abc, 1);
        assert_eq!(s.c_abc, 4);
        assert!(!s.good);
        // dichotomy holds through the all-shared branch
        let report = check_claims(&a, &a, &a, &o, 0.01).unwrap();
        assert!(report.dichotomy.holds);
        // interior vertices of the shared run have weight 6
        let w = vertex_weights(&g);
        assert_eq!(w[&1], 6);
        assert_eq!(w[&0], 3);
    }

    #[test]
    fn single_shared_segment_stats() {
        // A and B share exactly the 3-edge segment 0-1-2-3, C is disjoint
        // from both.
        let a = HamPath::identity(8);
        let b = HamPath::new(vec![0, 1, 2, 3, 5, 7, 4, 6]).unwrap();
        let c = HamPath::new(vec![4, 0, 6, 2, 5, 1, 7, 3]).unwrap();
        let mut prefix = vec![(0, 1), (1, 2), (2, 3)];
        prefix.extend([(3, 4), (4, 5), (5, 6), (6, 7)]); // rest of A
        prefix.extend([(3, 5), (5, 7), (7, 4), (4, 6)]); // rest of B
        prefix.extend([(4, 0), (0, 6), (6, 2), (2, 5), (5, 1), (1, 7), (7, 3)]); // C
        let o = ordering_from_prefix(8, &prefix);
        let g = common_edge_graph(&a, &b, &c, &o).unwrap();
        assert_eq!(g.edges.len(), 3);
        let r = reduce(&g).unwrap();
        assert_eq!(r.edges.len(), 1);
        let s = stats(&r);
        assert_eq!((s.k1, s.k2, s.k3, s.k4), (1, 0, 0, 0));
        assert_eq!((s.l_ab, s.r_ab, s.c_ab), (1, 0, 3));
        assert!(s.good);
    }

    /// Two shared A/B segments, one traversed oppositely, and one C-unique
    /// edge ranked inside the span of the first segment.
    #[test]
    fn opposite_segment_and_m_count() {
        let a = HamPath::identity(6);
        let b = HamPath::new(vec![0, 1, 2, 4, 3, 5]).unwrap();
        let c = HamPath::new(vec![4, 0, 2, 5, 1, 3]).unwrap();
        let prefix = vec![
            (0, 1),
            (4, 0), // C's first edge, ranked inside the 0-1-2 span
            (1, 2),
            (2, 3),
            (2, 4),
            (3, 4),
            (4, 5),
            (3, 5),
            (0, 2),
            (2, 5),
            (5, 1),
            (1, 3),
        ];
        let o = ordering_from_prefix(6, &prefix);
        let analysis = analyze_triple(&a, &b, &c, &o).unwrap();
        let s = analysis.stats;
        assert_eq!(s.k1, 2);
        assert_eq!((s.l_ab, s.r_ab, s.c_ab), (2, 1, 3));
        assert_eq!((s.m_ab, s.m_ac, s.m_bc), (1, 0, 0));
        assert_eq!(analysis.reduced.edges.len(), 2);
        let runs: Vec<u32> = analysis.reduced.edges.iter().map(|e| e.run_length).collect();
        assert_eq!(runs, vec![2, 1]);
    }

    /// The worked two-row configuration: three same-direction AB edges, a
    /// two-way BC bridge, two AC edges, three ABC edges, and one ABC edge
    /// with B opposite. Reduces from 10 edges to 5 with runs (3,1,2,3,1).
    #[test]
    fn two_row_configuration_reduces_as_drawn() {
        // vertices: p1..p6 = 0..5, q = 6, a1 = 7, a2 = 8, b1 = 9, b2 = 10,
        // c1 = 11, c2 = 12, s1..s4 = 13..16, t1 = 17, t2 = 18
        let (q, a1, a2, b1, b2, c1, c2) = (6, 7, 8, 9, 10, 11, 12);
        let (s1, s2, s3, s4, t1, t2) = (13, 14, 15, 16, 17, 18);
        let a = HamPath::new(vec![
            0, 1, 2, 3, 4, 5, a1, s1, s2, s3, s4, a2, t1, t2, q, c1, b1, c2, b2,
        ])
        .unwrap();
        let b = HamPath::new(vec![
            0, 1, 2, 3, q, b1, s1, s2, s3, s4, b2, t2, t1, 4, a1, c1, a2, 5, c2,
        ])
        .unwrap();
        let c = HamPath::new(vec![
            q, 3, 4, 5, c1, s1, s2, s3, s4, c2, t1, t2, 0, a1, 1, a2, 2, b1, b2,
        ])
        .unwrap();
        let prefix = vec![
            (0, 1),
            (1, 2),
            (2, 3),   // AB run
            (3, q),   // BC bridge, B: 3->q, C: q->3
            (3, 4),
            (4, 5),   // AC run
            (5, a1),
            (a1, s1), // A connector
            (q, b1),
            (b1, s1), // B connector
            (5, c1),
            (c1, s1), // C connector
            (s1, s2),
            (s2, s3),
            (s3, s4), // ABC run
            (s4, a2),
            (a2, t1), // A connector
            (s4, b2),
            (b2, t2), // B connector
            (s4, c2),
            (c2, t1), // C connector
            (t1, t2), // ABC edge, B opposite
            // tails: A then B then C visit their leftover vertices over
            // fresh edges
            (t2, q),
            (q, c1),
            (c1, b1),
            (b1, c2),
            (c2, b2),
            (t1, 4),
            (4, a1),
            (a1, c1),
            (c1, a2),
            (a2, 5),
            (5, c2),
            (t2, 0),
            (0, a1),
            (a1, 1),
            (1, a2),
            (a2, 2),
            (2, b1),
            (b1, b2),
        ];
        let o = ordering_from_prefix(19, &prefix);
        for (p, name) in [(&a, "A"), (&b, "B"), (&c, "C")] {
            assert!(o.is_increasing(p), "path {name} not increasing");
        }
        let g = common_edge_graph(&a, &b, &c, &o).unwrap();
        assert_eq!(g.edges.len(), 10);
        let labels: Vec<String> = g.edges.iter().map(|e| e.membership.letters()).collect();
        assert_eq!(
            labels,
            vec!["AB", "AB", "AB", "BC", "AC", "AC", "ABC", "ABC", "ABC", "ABC"]
        );
        // the bridge is traversed oppositely by B and C
        assert!(g.edges[3].opposite(PathId::C));
        // the last ABC edge is traversed oppositely by B alone
        assert!(g.edges[9].opposite(PathId::B));
        assert!(!g.edges[9].opposite(PathId::C));

        let r = reduce(&g).unwrap();
        let runs: Vec<u32> = r.edges.iter().map(|e| e.run_length).collect();
        assert_eq!(runs, vec![3, 1, 2, 3, 1]);
        let s = stats(&r);
        assert_eq!((s.l_ab, s.l_ac, s.l_bc, s.l_abc), (1, 1, 1, 2));
        assert_eq!((s.r_ab, s.r_ac, s.r_bc), (0, 0, 1));
        assert_eq!((s.c_ab, s.c_ac, s.c_bc, s.c_abc), (3, 2, 1, 4));
        assert_eq!((s.k1, s.k2, s.k3, s.k4), (3, 3, 0, 0));
        assert!(!s.good);
        // p4 = vertex 3 meets AB, BC and AC edges: weight 6
        let w = vertex_weights(&g);
        assert_eq!(w[&3], 6);
        assert_eq!(w[&s2], 6);
        assert!(w.values().all(|&x| x <= 6));
        let report = check_claims(&a, &b, &c, &o, 0.1).unwrap();
        assert!(report.all_hold(), "{report:?}");
        assert_eq!(m_counts(&a, &b, &c, &o).unwrap(), (0, 0, 0));
    }

    #[test]
    fn non_increasing_input_is_named() {
        let (a, b, c, _) = disjoint_triple();
        // an ordering under which B is certainly not increasing: reverse the
        // prefix used for B
        let mut prefix: Vec<(u32, u32)> = Vec::new();
        for w in a.vertices().windows(2) {
            prefix.push((w[0], w[1]));
        }
        let mut b_edges: Vec<(u32, u32)> = b.vertices().windows(2).map(|w| (w[0], w[1])).collect();
        b_edges.reverse();
        prefix.extend(b_edges);
        for w in c.vertices().windows(2) {
            prefix.push((w[0], w[1]));
        }
        let o = ordering_from_prefix(7, &prefix);
        let err = common_edge_graph(&a, &b, &c, &o).unwrap_err();
        assert!(err.to_string().contains("path B"), "{err}");
    }

    #[test]
    fn forged_split_run_is_an_integrity_error() {
        // two AB edges forming a path but with a foreign rank in between
        let mk = |u: u32, v: u32, rank: u32| CegEdge {
            u,
            v,
            membership: Membership::AB,
            forward: [Some(true), Some(true), None],
            rank,
        };
        let foreign = CegEdge {
            u: 4,
            v: 5,
            membership: Membership::AC,
            forward: [Some(true), None, Some(true)],
            rank: 2,
        };
        let g = CommonEdgeGraph {
            n: 6,
            edges: vec![mk(0, 1, 1), foreign, mk(1, 2, 3)],
        };
        assert!(matches!(reduce(&g), Err(Error::Integrity(_))));
    }

    #[test]
    fn forged_star_is_an_integrity_error() {
        let mk = |u: u32, v: u32, rank: u32| CegEdge {
            u,
            v,
            membership: Membership::AB,
            forward: [Some(true), Some(true), None],
            rank,
        };
        let g = CommonEdgeGraph {
            n: 6,
            edges: vec![mk(0, 1, 1), mk(1, 2, 2), mk(1, 3, 3)],
        };
        assert!(matches!(reduce(&g), Err(Error::Integrity(_))));
    }

    #[test]
    fn reduce_expand_round_trip() {
        let mut checked = 0;
        for t in harvest_triples(8, 404, 60, 8).unwrap() {
            let g = common_edge_graph(&t.paths[0], &t.paths[1], &t.paths[2], &t.ordering).unwrap();
            let r = reduce(&g).unwrap();
            assert_eq!(graph_key(&expand(&r)), graph_key(&g));
            // c totals from run lengths match direct set computations
            let s = stats(&r);
            let sets: Vec<HashSet<EdgeId>> = t
                .paths
                .iter()
                .map(|p| p.edge_iter().collect())
                .collect();
            let exactly = |want: Membership| -> u32 {
                let mut cnt = 0;
                let all: HashSet<EdgeId> = sets.iter().flatten().copied().collect();
                for e in all {
                    let mut m = Membership::EMPTY;
                    for (i, s) in sets.iter().enumerate() {
                        if s.contains(&e) {
                            m.insert(PathId::ALL[i]);
                        }
                    }
                    if m == want {
                        cnt += 1;
                    }
                }
                cnt
            };
            assert_eq!(s.c_ab, exactly(Membership::AB));
            assert_eq!(s.c_ac, exactly(Membership::AC));
            assert_eq!(s.c_bc, exactly(Membership::BC));
            assert_eq!(s.c_abc, exactly(Membership::ABC));
            checked += 1;
        }
        assert_eq!(checked, 60);
    }

    #[test]
    fn canonical_key_is_relabeling_invariant() {
        let triples = harvest_triples(8, 777, 40, 8).unwrap();
        let perm: Vec<u32> = vec![5, 3, 7, 1, 0, 6, 2, 4];
        for t in triples {
            let relabel = |p: &HamPath| {
                HamPath::new(p.vertices().iter().map(|&v| perm[v as usize]).collect()).unwrap()
            };
            // transport the ordering: rank'(pi(e)) = rank(e)
            let m = t.ordering.edge_count();
            let mut rank_of = vec![0u32; m];
            for e in 0..m {
                let (u, v) = EdgeId(e as u32).endpoints();
                let img = EdgeId::from_pair(perm[u as usize], perm[v as usize]);
                rank_of[img.index()] = t.ordering.rank(EdgeId(e as u32));
            }
            let o2 = EdgeOrdering::from_ranks(8, rank_of).unwrap();
            let k1 = analyze_triple(&t.paths[0], &t.paths[1], &t.paths[2], &t.ordering)
                .unwrap()
                .key;
            let k2 = analyze_triple(
                &relabel(&t.paths[0]),
                &relabel(&t.paths[1]),
                &relabel(&t.paths[2]),
                &o2,
            )
            .unwrap()
            .key;
            assert_eq!(k1, k2);
        }
    }

    #[test]
    fn keys_distinguish_labels_and_directions() {
        let mk = |membership: Membership, opposite: [bool; 3]| ReducedCeg {
            n: 4,
            edges: vec![RcegEdge {
                tail: 0,
                head: 1,
                membership,
                opposite,
                run_length: 1,
                order: 1,
            }],
        };
        let ab = canonical_key(&mk(Membership::AB, [false; 3]));
        let ac = canonical_key(&mk(Membership::AC, [false; 3]));
        let ab_op = canonical_key(&mk(Membership::AB, [false, true, false]));
        assert_ne!(ab, ac);
        assert_ne!(ab, ab_op);
        assert_eq!(ab.0, "AB+:0>1");
    }

    #[test]
    fn eps_must_be_positive() {
        let (a, b, c, o) = disjoint_triple();
        assert!(check_claims(&a, &b, &c, &o, 0.0).is_err());
    }
}
