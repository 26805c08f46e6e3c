//! `(3/2, 0)` diameter estimate for weighted directed graphs.
//!
//! A set `S` with small forward and reverse balls and clusters is searched to
//! and from. Paths `u ⇝ x → y ⇝ v` with `x ∈ B_S(u)` and `y ∈ B^R_S(v)` give
//! upper estimates `d̂(u, v)`; from them one vertex `w` is chosen to search
//! out of, and one `w^R` to search into.

use rayon::prelude::*;
use serde::Serialize;

use crate::balls::{bounded_balls_clusters_set, compute_balls, invert_to_clusters, BallTable, ClusterTable};
use crate::error::{Error, Result};
use crate::graph::{require_connected, Direction, Dist, Graph, Vertex, VertexSet, UNREACHABLE};
use crate::shortest_paths::{multi_source_sssp, sssp};

/// `⌈(n ln n)^{1/3}⌉` clamped to `[1, n]`.
pub fn default_ell(n: usize) -> usize {
    let x = (n as f64 * (n as f64).ln()).cbrt().ceil();
    (x.max(1.0) as usize).min(n.max(1))
}

/// The ball/cluster structures `d̂` is enumerated over.
pub struct Structures {
    pub s: VertexSet,
    /// `B_S(u)` with `d(u, x)`.
    pub balls: BallTable,
    /// `B^R_S(v)` with `d(y, v)`.
    pub rev_balls: BallTable,
    /// `C_S(x)`: `(u, d(u, x))` for `x ∈ B_S(u)`.
    pub clusters: ClusterTable,
    /// `C^R_S(y)`: `(v, d(y, v))` for `y ∈ B^R_S(v)`.
    pub rev_clusters: ClusterTable,
}

impl Structures {
    pub fn new(g: &Graph, s: VertexSet) -> Result<Structures> {
        let balls = compute_balls(g, &s, Direction::Forward, false)?;
        let rev_balls = compute_balls(g, &s, Direction::Reverse, false)?;
        let clusters = invert_to_clusters(&balls);
        let rev_clusters = invert_to_clusters(&rev_balls);
        Ok(Structures {
            s,
            balls,
            rev_balls,
            clusters,
            rev_clusters,
        })
    }
}

/// Dense scratch row with a list of touched slots.
struct Scratch {
    val: Vec<Dist>,
    touched: Vec<Vertex>,
}

impl Scratch {
    fn new(n: usize) -> Scratch {
        Scratch {
            val: vec![UNREACHABLE; n],
            touched: Vec::new(),
        }
    }

    fn relax(&mut self, v: Vertex, d: Dist) {
        let slot = &mut self.val[v as usize];
        if *slot == UNREACHABLE {
            self.touched.push(v);
        }
        if d < *slot {
            *slot = d;
        }
    }

    fn clear(&mut self) {
        for &v in &self.touched {
            self.val[v as usize] = UNREACHABLE;
        }
        self.touched.clear();
    }
}

/// Fills `scratch` with the finite `d̂(u, ·)`; `d̂(u, u) = 0`.
fn dhat_row(g: &Graph, st: &Structures, u: Vertex, scratch: &mut Scratch) {
    scratch.clear();
    scratch.relax(u, 0);
    for &(x, dux) in st.balls.ball(u) {
        for (y, w) in g.neighbors(x, Direction::Forward) {
            for &(v, dyv) in st.rev_clusters.cluster(y) {
                scratch.relax(v, dux + w + dyv);
            }
        }
    }
}

/// Fills `scratch` with the finite `d̂(·, v)`; `d̂(v, v) = 0`.
fn dhat_column(g: &Graph, st: &Structures, v: Vertex, scratch: &mut Scratch) {
    scratch.clear();
    scratch.relax(v, 0);
    for &(y, dyv) in st.rev_balls.ball(v) {
        for (x, w) in g.neighbors(y, Direction::Reverse) {
            for &(u, dux) in st.clusters.cluster(x) {
                scratch.relax(u, dux + w + dyv);
            }
        }
    }
}

/// Materialised `d̂`; absent entries are `∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DHatStore {
    rows: Vec<Vec<(Vertex, Dist)>>,
}

impl DHatStore {
    pub fn get(&self, u: Vertex, v: Vertex) -> Option<Dist> {
        let row = &self.rows[u as usize];
        row.binary_search_by_key(&v, |e| e.0).ok().map(|i| row[i].1)
    }

    pub fn row(&self, u: Vertex) -> &[(Vertex, Dist)] {
        &self.rows[u as usize]
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn build_dhat(g: &Graph, st: &Structures) -> DHatStore {
    let n = g.n();
    let rows = (0..n as Vertex)
        .into_par_iter()
        .map_init(
            || Scratch::new(n),
            |scratch, u| {
                dhat_row(g, st, u, scratch);
                let mut row: Vec<_> = scratch.touched.iter().map(|&v| (v, scratch.val[v as usize])).collect();
                row.sort_unstable();
                row
            },
        )
        .collect();
    DHatStore { rows }
}

/// Maximum of `d̂` over a qualifying set: `None` when the set is empty (the
/// maximum of nothing), `Some(UNREACHABLE)` when some member has no entry.
pub type EpsHat = Option<Dist>;

/// `count` = size of the qualifying set; `entries` yields the finite `d̂`
/// values of the touched vertices, with whether each one qualifies.
fn eps_hat(count: usize, entries: impl Iterator<Item = (bool, Dist)>) -> EpsHat {
    if count == 0 {
        return None;
    }
    let mut seen = 0;
    let mut best = 0;
    for (qualifies, d) in entries {
        if qualifies {
            seen += 1;
            best = best.max(d);
        }
    }
    Some(if seen < count { UNREACHABLE } else { best })
}

/// Number of entries of the ascending `sorted` that are `>= t`.
fn count_at_least(sorted: &[Dist], t: Dist) -> usize {
    sorted.len() - sorted.partition_point(|&d| d < t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsHatTable {
    /// `ε̂(w) = max { d̂(w, v) : d(w, S) ≤ d(S, v) }`.
    pub forward: Vec<EpsHat>,
    /// `ε̂^R(w) = max { d̂(v, w) : d(S, w) ≤ d(v, S) }`.
    pub reverse: Vec<EpsHat>,
}

/// `ε̂` and `ε̂^R` for every vertex, streaming over rows and columns of `d̂`.
pub fn eps_hat_table(g: &Graph, st: &Structures, to_s: &[Dist], from_s: &[Dist]) -> EpsHatTable {
    let n = g.n();
    let mut from_sorted = from_s.to_vec();
    from_sorted.sort_unstable();
    let mut to_sorted = to_s.to_vec();
    to_sorted.sort_unstable();
    let forward = (0..n as Vertex)
        .into_par_iter()
        .map_init(
            || Scratch::new(n),
            |scratch, u| {
                dhat_row(g, st, u, scratch);
                let t = to_s[u as usize];
                let entries = scratch
                    .touched
                    .iter()
                    .map(|&v| (from_s[v as usize] >= t, scratch.val[v as usize]));
                eps_hat(count_at_least(&from_sorted, t), entries)
            },
        )
        .collect();
    let reverse = (0..n as Vertex)
        .into_par_iter()
        .map_init(
            || Scratch::new(n),
            |scratch, w| {
                dhat_column(g, st, w, scratch);
                let t = from_s[w as usize];
                let entries = scratch
                    .touched
                    .iter()
                    .map(|&v| (to_s[v as usize] >= t, scratch.val[v as usize]));
                eps_hat(count_at_least(&to_sorted, t), entries)
            },
        )
        .collect();
    EpsHatTable { forward, reverse }
}

/// `argmax_w min(3 · dist[w], ε̂(w))`, ties to the smallest id. `None`
/// (an empty qualifying set) ranks below every value.
fn select(dist: &[Dist], eps: &[EpsHat]) -> Vertex {
    let score = |w: usize| eps[w].map(|e| e.min(dist[w].saturating_mul(3)));
    let mut best = 0;
    for w in 1..dist.len() {
        if score(w) > score(best) {
            best = w;
        }
    }
    best as Vertex
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThreeHalvesReport {
    pub ell: usize,
    pub diameter: Dist,
    pub diameter_pair: (Vertex, Vertex),
    /// Size of `S`.
    pub set_size: usize,
    /// Vertex searched out of.
    pub w: Vertex,
    /// Vertex searched into.
    pub w_rev: Vertex,
    pub searches: usize,
}

/// Largest finite entry of a search, as `(distance, other endpoint)`.
fn best_of(dist: &[Dist]) -> (Dist, Vertex) {
    let (v, d) = crate::shortest_paths::farthest(dist);
    (d, v)
}

pub fn estimate_diameter_32(g: &Graph, ell_override: Option<usize>) -> Result<ThreeHalvesReport> {
    let n = g.n();
    require_connected(g)?;
    let ell = match ell_override {
        Some(0) => return Err(Error::InvalidParameter("ℓ must be at least 1".into())),
        Some(l) => l.min(n),
        None => default_ell(n),
    };
    let s = bounded_balls_clusters_set(g, ell)?.set;
    let to_s = multi_source_sssp(g, &s, Direction::Reverse)?.into_vec();
    let from_s = multi_source_sssp(g, &s, Direction::Forward)?.into_vec();
    let st = Structures::new(g, s)?;
    let eps = eps_hat_table(g, &st, &to_s, &from_s);
    let w = select(&to_s, &eps.forward);
    let w_rev = select(&from_s, &eps.reverse);

    let mut jobs: Vec<(Vertex, Direction)> = st
        .s
        .iter()
        .flat_map(|x| [(x, Direction::Forward), (x, Direction::Reverse)])
        .collect();
    jobs.push((w, Direction::Forward));
    jobs.push((w_rev, Direction::Reverse));
    let best = jobs
        .par_iter()
        .map(|&(x, dir)| {
            let (d, y) = best_of(sssp(g, x, dir).as_slice());
            let pair = match dir {
                Direction::Forward => (x, y),
                Direction::Reverse => (y, x),
            };
            (d, pair)
        })
        // ties go to the smallest pair, independent of scheduling
        .reduce(|| (0, (Vertex::MAX, Vertex::MAX)), pick_pair);
    Ok(ThreeHalvesReport {
        ell,
        diameter: best.0,
        diameter_pair: best.1,
        set_size: st.s.len(),
        w,
        w_rev,
        searches: jobs.len() + 2,
    })
}

pub(crate) fn pick_pair(a: (Dist, (Vertex, Vertex)), b: (Dist, (Vertex, Vertex))) -> (Dist, (Vertex, Vertex)) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}
