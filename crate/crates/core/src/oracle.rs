//! Brute-force enumeration of triangulations and weak triangulations.
//!
//! Segments are numbered in lexicographic order and their pairwise crossings
//! packed into `u128` rows, which caps the ground set at 16 elements
//! (120 segments). The search decides segments lowest-first: a segment is
//! either taken, or skipped and later blocked by a taken segment that
//! crosses it. Skipped segments with no remaining possible blocker prune the
//! branch, so every leaf is a maximal non-crossing set and every maximal set
//! is reached exactly once.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::chirotope::{Chirotope, Label, RootedChirotope, Segment, Sign};
use crate::error::{Error, Result};
use crate::poly::{BivarPoly, UnivarPoly};

/// Default soft limit on the number of chirotope elements.
pub const DEFAULT_ORACLE_LIMIT: usize = 12;

/// Largest ground set the bitset representation can hold.
pub const MAX_GROUND_SET: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Soft limit on chirotope size; raise it up to the hard bitset limit.
    pub limit: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}

impl OracleConfig {
    pub fn with_limit(limit: usize) -> Self {
        OracleConfig { limit }
    }
}

/// Sorted, pairwise non-crossing segments.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(Vec<Segment>);

impl EdgeSet {
    pub fn segments(&self) -> &[Segment] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, x: Label) -> usize {
        self.0.iter().filter(|&&(a, b)| a == x || b == x).count()
    }
}

/// One leaf of the search, borrowed from the crossing graph.
#[derive(Clone, Copy)]
pub struct Triangulation<'a> {
    graph: &'a CrossingGraph,
    chosen: u128,
}

impl Triangulation<'_> {
    pub fn degree(&self, x: Label) -> u32 {
        (self.chosen & self.graph.incident[x]).count_ones()
    }

    pub fn len(&self) -> usize {
        self.chosen.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.chosen == 0
    }

    pub fn to_edge_set(&self) -> EdgeSet {
        EdgeSet(bits(self.chosen).map(|s| self.graph.segments[s]).collect())
    }
}

/// The chirotope extended by the phantom element `v = n` opposite the root.
#[derive(Clone, Debug)]
pub struct WeakGround<'a> {
    base: &'a RootedChirotope,
}

impl<'a> WeakGround<'a> {
    pub fn new(base: &'a RootedChirotope) -> Self {
        WeakGround { base }
    }

    pub fn v(&self) -> Label {
        self.base.len()
    }

    pub fn len(&self) -> usize {
        self.base.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `sign(x, y, v) = −sign(x, y, root)`; not defined on triples holding
    /// both the root and `v`.
    pub fn sign(&self, x: Label, y: Label, z: Label) -> Sign {
        let v = self.v();
        let chi = self.base.chi();
        let u = self.base.root();
        if x == v {
            -chi.sign_unchecked(y, z, u)
        } else if y == v {
            -chi.sign_unchecked(z, x, u)
        } else if z == v {
            -chi.sign_unchecked(x, y, u)
        } else {
            chi.sign_unchecked(x, y, z)
        }
    }

    /// Proper crossing; segments sharing an endpoint never cross.
    pub fn crosses(&self, (x, y): Segment, (z, t): Segment) -> bool {
        let (u, v) = (self.base.root(), self.v());
        let ends = [x, y, z, t];
        if x == z || x == t || y == z || y == t || (ends.contains(&u) && ends.contains(&v)) {
            return false;
        }
        self.sign(x, y, z) != self.sign(x, y, t) && self.sign(z, t, x) != self.sign(z, t, y)
    }
}

#[doc(hidden)]
pub struct CrossingGraph {
    segments: Vec<Segment>,
    cross: Vec<u128>,
    incident: Vec<u128>,
    /// Segments crossing nothing: in every maximal set.
    forced: u128,
}

fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

#[derive(Clone, Copy)]
struct State {
    chosen: u128,
    undecided: u128,
    pending: u128,
}

impl CrossingGraph {
    fn build(n: usize, segments: Vec<Segment>, crosses: impl Fn(Segment, Segment) -> bool) -> Self {
        let m = segments.len();
        debug_assert!(m <= 128);
        let mut cross = vec![0u128; m];
        for a in 0..m {
            for b in a + 1..m {
                let (s, t) = (segments[a], segments[b]);
                if s.0 == t.0 || s.0 == t.1 || s.1 == t.0 || s.1 == t.1 {
                    continue;
                }
                if crosses(s, t) {
                    cross[a] |= 1 << b;
                    cross[b] |= 1 << a;
                }
            }
        }
        let mut incident = vec![0u128; n];
        for (i, &(a, b)) in segments.iter().enumerate() {
            incident[a] |= 1 << i;
            incident[b] |= 1 << i;
        }
        let forced = (0..m).filter(|&i| cross[i] == 0).fold(0u128, |acc, i| acc | 1 << i);
        CrossingGraph {
            segments,
            cross,
            incident,
            forced,
        }
    }

    fn plain(chi: &Chirotope) -> Self {
        let n = chi.len();
        let segments = all_segments(n, |_| true);
        Self::build(n, segments, |(x, y), (z, t)| chi.cross_unchecked(x, y, z, t))
    }

    fn weak(rc: &RootedChirotope) -> Self {
        let ground = WeakGround::new(rc);
        let (u, v) = (rc.root(), ground.v());
        let segments = all_segments(ground.len(), |s| s != (u, v));
        Self::build(ground.len(), segments, |s, t| ground.crosses(s, t))
    }

    fn root(&self) -> State {
        let all = if self.segments.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.segments.len()) - 1
        };
        State {
            chosen: self.forced,
            undecided: all & !self.forced,
            pending: 0,
        }
    }

    fn viable(&self, st: &State) -> bool {
        let open = st.undecided;
        bits(st.pending).all(|s| self.cross[s] & open != 0)
    }

    /// Children of a node, include-branch first.
    fn children(&self, st: &State) -> ([Option<State>; 2], bool) {
        if st.undecided == 0 {
            return ([None, None], st.pending == 0);
        }
        let s = st.undecided.trailing_zeros() as usize;
        let bit = 1u128 << s;
        let rest = st.undecided & !bit;
        let take = State {
            chosen: st.chosen | bit,
            undecided: rest & !self.cross[s],
            pending: st.pending & !self.cross[s],
        };
        let skip = (self.cross[s] & rest != 0).then_some(State {
            chosen: st.chosen,
            undecided: rest,
            pending: st.pending | bit,
        });
        let take = self.viable(&take).then_some(take);
        let skip = skip.filter(|st| self.viable(st));
        ([take, skip], false)
    }

    fn dfs<F: FnMut(Triangulation<'_>)>(&self, st: State, visit: &mut F) {
        let (kids, leaf) = self.children(&st);
        if leaf {
            visit(Triangulation {
                graph: self,
                chosen: st.chosen,
            });
            return;
        }
        for kid in kids.into_iter().flatten() {
            self.dfs(kid, visit);
        }
    }

    /// Breadth-first expansion to a frontier wide enough to spread over a
    /// thread pool; leaves met on the way are kept as they are.
    fn frontier(&self, target: usize) -> Vec<State> {
        let mut level = vec![self.root()];
        for _ in 0..24 {
            if level.len() >= target {
                break;
            }
            let mut next = Vec::with_capacity(level.len() * 2);
            let mut grew = false;
            for st in &level {
                if st.undecided == 0 {
                    next.push(*st);
                    continue;
                }
                grew = true;
                let (kids, _) = self.children(st);
                next.extend(kids.into_iter().flatten());
            }
            level = next;
            if !grew {
                break;
            }
        }
        level
    }

    fn fold<A, Id, Fo, Me>(&self, identity: Id, fold: Fo, merge: Me) -> A
    where
        A: Send,
        Id: Fn() -> A + Sync + Send,
        Fo: Fn(&mut A, Triangulation<'_>) + Sync + Send,
        Me: Fn(A, A) -> A + Sync + Send,
    {
        self.frontier(256)
            .into_par_iter()
            .map(|st| {
                let mut acc = identity();
                self.dfs(st, &mut |t| fold(&mut acc, t));
                acc
            })
            .reduce(&identity, &merge)
    }
}

fn all_segments(n: usize, keep: impl Fn(Segment) -> bool) -> Vec<Segment> {
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&s| keep(s))
        .collect()
}

fn check_size(n: usize, extra: usize, cfg: &OracleConfig) -> Result<()> {
    let limit = cfg.limit.min(MAX_GROUND_SET - extra);
    if n > limit {
        return Err(Error::OracleTooLarge { elements: n, limit });
    }
    Ok(())
}

/// Visits every triangulation of `chi` once, in a fixed order.
pub fn enumerate_triangulations<F>(chi: &Chirotope, cfg: &OracleConfig, mut visit: F) -> Result<()>
where
    F: FnMut(Triangulation<'_>),
{
    check_size(chi.len(), 0, cfg)?;
    let g = CrossingGraph::plain(chi);
    g.dfs(g.root(), &mut visit);
    Ok(())
}

/// Visits every weak triangulation of `rc` once, in a fixed order. The
/// phantom element carries label `rc.len()`.
pub fn enumerate_weak<F>(rc: &RootedChirotope, cfg: &OracleConfig, mut visit: F) -> Result<()>
where
    F: FnMut(Triangulation<'_>),
{
    check_size(rc.len(), 1, cfg)?;
    let g = CrossingGraph::weak(rc);
    g.dfs(g.root(), &mut visit);
    Ok(())
}

/// Number of triangulations, enumerated in parallel.
pub fn count_triangulations(chi: &Chirotope, cfg: &OracleConfig) -> Result<u64> {
    check_size(chi.len(), 0, cfg)?;
    let g = CrossingGraph::plain(chi);
    Ok(g.fold(|| 0u64, |acc, _| *acc += 1, |a, b| a + b))
}

/// Number of weak triangulations, enumerated in parallel.
pub fn count_weak(rc: &RootedChirotope, cfg: &OracleConfig) -> Result<u64> {
    check_size(rc.len(), 1, cfg)?;
    let g = CrossingGraph::weak(rc);
    Ok(g.fold(|| 0u64, |acc, _| *acc += 1, |a, b| a + b))
}

fn merge_counts<K: Ord>(mut a: BTreeMap<K, u64>, b: BTreeMap<K, u64>) -> BTreeMap<K, u64> {
    for (k, c) in b {
        *a.entry(k).or_insert(0) += c;
    }
    a
}

/// `Σ u^{deg(root)}` over all triangulations.
pub fn brute_q(rc: &RootedChirotope, cfg: &OracleConfig) -> Result<UnivarPoly> {
    check_size(rc.len(), 0, cfg)?;
    let g = CrossingGraph::plain(rc.chi());
    let u = rc.root();
    let counts = g.fold(
        BTreeMap::new,
        |acc, t| *acc.entry(t.degree(u)).or_insert(0) += 1,
        merge_counts,
    );
    Ok(UnivarPoly::from_terms(
        counts.into_iter().map(|(e, c)| (e, BigInt::from(c))),
    ))
}

/// `Σ u^{deg(root)} v^{deg(v)}` over all weak triangulations.
pub fn brute_p(rc: &RootedChirotope, cfg: &OracleConfig) -> Result<BivarPoly> {
    check_size(rc.len(), 1, cfg)?;
    let g = CrossingGraph::weak(rc);
    let (u, v) = (rc.root(), rc.len());
    let counts = g.fold(
        BTreeMap::new,
        |acc, t| *acc.entry((t.degree(u), t.degree(v))).or_insert(0) += 1,
        merge_counts,
    );
    Ok(BivarPoly::from_terms(
        counts.into_iter().map(|(e, c)| (e, BigInt::from(c))),
    ))
}
