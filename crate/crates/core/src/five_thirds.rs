//! `5/3` diameter estimate for unweighted undirected graphs.
//!
//! `T` hits the neighbourhoods of high-degree vertices, `S_1` hits the `ℓ`
//! nearest vertices of each member of `T`, and `S_2` keeps every ball below
//! `n/ℓ`. A spanner `H` made of low-degree edges and shortest-path trees of
//! the `S_1`-balls of `T` gives lower estimates
//! `d̃(x, v) = min(d_H(x, v) - 4, d(x, S_1) + d(v, S_1) - 5)` for `x ∈ S_2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::balls::{bounded_balls_clusters_set, compute_balls};
use crate::error::{Error, Result};
use crate::graph::{require_connected, Direction, Dist, Graph, Vertex, VertexSet, UNREACHABLE};
use crate::hitting::{greedy_hitting_set, SetFamily};
use crate::shortest_paths::{multi_source_sssp, sssp, Searcher};

fn ln_at_least_one(n: usize) -> f64 {
    (n as f64).ln().max(1.0)
}

/// `max(1, ⌈m^{2/5} / (ln n)^{3/5}⌉)`, at most `n`.
pub fn default_ell(n: usize, m: usize) -> usize {
    let x = ((m as f64).powf(0.4) / ln_at_least_one(n).powf(0.6)).ceil();
    (x.max(1.0) as usize).min(n.max(1))
}

/// `max(1, ⌈m^{1/5} (ln n)^{1/5}⌉)`.
pub fn default_big_l(n: usize, m: usize) -> usize {
    let x = ((m as f64).powf(0.2) * ln_at_least_one(n).powf(0.2)).ceil();
    x.max(1.0) as usize
}

/// Subgraph of low-degree edges plus BFS trees of `B_{S_1}(u)` for `u ∈ T`.
#[derive(Clone, Debug)]
pub struct SpannerH {
    pub graph: Graph,
    /// Edges with an endpoint of degree `≤ L`.
    pub low_degree_edges: usize,
    /// Tree edges over all `u ∈ T`, counted with multiplicity.
    pub tree_edges: usize,
}

impl SpannerH {
    pub fn edge_count(&self) -> usize {
        self.graph.m()
    }
}

/// Builds `H`. `to_s1[v] = d(v, S_1)` (all `UNREACHABLE` when `S_1` is
/// empty). Panics when `t` misses the neighbourhood of a vertex of degree
/// above `big_l`.
pub fn build_spanner_h(g: &Graph, t: &VertexSet, to_s1: &[Dist], big_l: usize) -> SpannerH {
    for v in g.vertices() {
        if g.degree(v) > big_l {
            assert!(
                g.neighbor_ids(v, Direction::Forward).iter().any(|&u| t.contains(u)),
                "T misses the neighbourhood of {v}"
            );
        }
    }
    let mut edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .filter(|&(u, v, _)| g.degree(u) <= big_l || g.degree(v) <= big_l)
        .map(|(u, v, _)| (u, v))
        .collect();
    let low_degree_edges = edges.len();
    let trees: Vec<Vec<(Vertex, Vertex)>> = t
        .members()
        .par_iter()
        .map_init(
            || Searcher::new(g.n()),
            |searcher, &u| {
                searcher
                    .run(g, u, Direction::Forward, to_s1[u as usize], usize::MAX)
                    .into_iter()
                    .filter_map(|s| s.parent.map(|p| (p.min(s.vertex), p.max(s.vertex))))
                    .collect()
            },
        )
        .collect();
    let tree_edges = trees.iter().map(Vec::len).sum();
    edges.extend(trees.into_iter().flatten());
    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::from_edges(g.n(), false, edges.into_iter().map(|(u, v)| (u, v, 1)))
        .expect("spanner edges come from a valid graph");
    SpannerH {
        graph,
        low_degree_edges,
        tree_edges,
    }
}

/// `d̃(x, v)` for one `x`, `None` where both terms are infinite.
pub fn dtilde_row(h: &SpannerH, x: Vertex, to_s1: &[Dist]) -> Vec<Option<i64>> {
    let dh = sssp(&h.graph, x, Direction::Forward);
    let dx = to_s1[x as usize];
    dh.as_slice()
        .iter()
        .zip(to_s1)
        .map(|(&dhv, &dv)| {
            let spanner = (dhv != UNREACHABLE).then(|| dhv as i64 - 4);
            let via_s1 = (dx != UNREACHABLE && dv != UNREACHABLE).then(|| (dx + dv) as i64 - 5);
            match (spanner, via_s1) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            }
        })
        .collect()
}

/// All `d̃(x, v)` for `x ∈ S_2`, row by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DTildeEstimate {
    pub rows: Vec<(Vertex, Vec<Option<i64>>)>,
}

impl DTildeEstimate {
    /// Largest estimate with its pair, ties to the smallest pair.
    pub fn max(&self) -> Option<(i64, (Vertex, Vertex))> {
        let mut best: Option<(i64, (Vertex, Vertex))> = None;
        for (x, row) in &self.rows {
            for (v, d) in row.iter().enumerate() {
                if let Some(d) = *d {
                    if best.is_none_or(|b| d > b.0) {
                        best = Some((d, (*x, v as Vertex)));
                    }
                }
            }
        }
        best
    }
}

pub fn compute_dtilde(h: &SpannerH, s2: &VertexSet, to_s1: &[Dist]) -> DTildeEstimate {
    let rows = s2
        .members()
        .par_iter()
        .map(|&x| (x, dtilde_row(h, x, to_s1)))
        .collect();
    DTildeEstimate { rows }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiveThirdsReport {
    pub ell: usize,
    pub big_l: usize,
    /// `D̃`; either a true distance or a `d̃` lower estimate.
    pub diameter: Dist,
    pub diameter_pair: (Vertex, Vertex),
    /// True when `D̃` came from a `d̃` value rather than a search.
    pub from_estimate: bool,
    pub t_size: usize,
    pub s1_size: usize,
    pub s2_size: usize,
    /// Vertex farthest from `S_2`.
    pub w: Vertex,
    pub spanner_edges: usize,
    pub searches: usize,
}

type Best = (i64, (Vertex, Vertex), bool);

fn pick(a: Best, b: Best) -> Best {
    if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
        b
    } else {
        a
    }
}

/// Everything the estimate is computed from: the sets, distances to `S1`
/// and the spanner `H`.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub ell: usize,
    pub big_l: usize,
    pub t: VertexSet,
    pub s1: VertexSet,
    pub s2: VertexSet,
    pub to_s1: Vec<Dist>,
    pub h: SpannerH,
}

/// Builds `T`, `S1`, `S2` and `H`. Checks the same preconditions as
/// [`estimate_diameter_53`].
pub fn prepare(g: &Graph, ell_override: Option<usize>, big_l_override: Option<usize>) -> Result<Prepared> {
    if g.is_directed() || !g.is_unit_weight() {
        return Err(Error::Precondition(
            "five-thirds requires unweighted undirected input".into(),
        ));
    }
    require_connected(g)?;
    let (n, m) = (g.n(), g.m());
    let ell = match ell_override {
        Some(0) => return Err(Error::InvalidParameter("ℓ must be at least 1".into())),
        Some(l) => l.min(n),
        None => default_ell(n, m),
    };
    let big_l = match big_l_override {
        Some(0) => return Err(Error::InvalidParameter("L must be at least 1".into())),
        Some(l) => l,
        None => default_big_l(n, m),
    };

    let heavy: Vec<Vec<Vertex>> = g
        .vertices()
        .filter(|&v| g.degree(v) > big_l)
        .map(|v| g.neighbor_ids(v, Direction::Forward).to_vec())
        .collect();
    let t = greedy_hitting_set(&SetFamily::new(n, heavy)?)?;
    let nearest: Vec<Vec<Vertex>> = t
        .members()
        .par_iter()
        .map_init(
            || Searcher::new(n),
            |searcher, &u| {
                searcher
                    .run(g, u, Direction::Forward, UNREACHABLE, ell)
                    .into_iter()
                    .map(|s| s.vertex)
                    .collect()
            },
        )
        .collect();
    let s1 = greedy_hitting_set(&SetFamily::new(n, nearest)?)?;
    let s2 = bounded_balls_clusters_set(g, n.div_ceil(ell))?.set;

    let to_s1 = if s1.is_empty() {
        vec![UNREACHABLE; n]
    } else {
        multi_source_sssp(g, &s1, Direction::Forward)?.into_vec()
    };
    let h = build_spanner_h(g, &t, &to_s1, big_l);
    Ok(Prepared {
        ell,
        big_l,
        t,
        s1,
        s2,
        to_s1,
        h,
    })
}

pub fn estimate_diameter_53(g: &Graph, ell_override: Option<usize>, big_l_override: Option<usize>) -> Result<FiveThirdsReport> {
    let Prepared {
        ell,
        big_l,
        t,
        s1,
        s2,
        to_s1,
        h,
    } = prepare(g, ell_override, big_l_override)?;
    let to_s2 = multi_source_sssp(g, &s2, Direction::Forward)?;
    let (w, _) = to_s2.farthest();
    let ball_w = compute_balls_of(g, &s2, w)?;

    let mut sources: Vec<Vertex> = s1.members().to_vec();
    sources.push(w);
    sources.extend(ball_w);
    sources.sort_unstable();
    sources.dedup();
    let searched = sources
        .par_iter()
        .map(|&x| {
            let (y, d) = sssp(g, x, Direction::Forward).farthest();
            (d as i64, (x, y), false)
        })
        .reduce(|| (i64::MIN, (Vertex::MAX, Vertex::MAX), false), pick);

    let estimated = s2
        .members()
        .par_iter()
        .map(|&x| {
            let mut best = (i64::MIN, (Vertex::MAX, Vertex::MAX), true);
            for (v, d) in dtilde_row(&h, x, &to_s1).into_iter().enumerate() {
                if let Some(d) = d {
                    best = pick(best, (d, (x, v as Vertex), true));
                }
            }
            best
        })
        .reduce(|| (i64::MIN, (Vertex::MAX, Vertex::MAX), true), pick);
    let (value, pair, from_estimate) = pick(searched, estimated);

    Ok(FiveThirdsReport {
        ell,
        big_l,
        diameter: value.max(0) as Dist,
        diameter_pair: pair,
        from_estimate,
        t_size: t.len(),
        s1_size: s1.len(),
        s2_size: s2.len(),
        w,
        spanner_edges: h.edge_count(),
        searches: sources.len() + s2.len() + 2 + usize::from(!s1.is_empty()),
    })
}

/// `B_{S}(w)` for a single vertex.
fn compute_balls_of(g: &Graph, s: &VertexSet, w: Vertex) -> Result<Vec<Vertex>> {
    let bound = multi_source_sssp(g, s, Direction::Reverse)?.get(w);
    Ok(Searcher::new(g.n())
        .run(g, w, Direction::Forward, bound, usize::MAX)
        .into_iter()
        .map(|st| st.vertex)
        .collect())
}

/// Largest `|B_S(v)|` over all `v`.
pub fn max_ball(g: &Graph, s: &VertexSet) -> Result<usize> {
    Ok(compute_balls(g, s, Direction::Forward, false)?.max_size())
}
