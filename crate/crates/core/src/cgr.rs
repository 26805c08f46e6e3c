//! Deterministic CGR hierarchy: diameter, radius and all-eccentricity
//! estimates for undirected graphs from one shared set of searches.
//!
//! Level `A_{i+1}` is a greedy hitting set of the `q` nearest `A_i`-members
//! of every vertex. For each level the vertex `v_i` farthest from `A_{i+1}`
//! contributes its ball `B_i(v_i) = {x ∈ A_i : d(x, v_i) < d(v_i, A_{i+1})}`
//! as search sources; the last level is searched exhaustively.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{require_connected, Direction, Dist, Graph, Vertex, VertexSet};
use crate::hitting::{greedy_hitting_set, SetFamily};
use crate::shortest_paths::{multi_source_sssp, q_nearest, sssp};

/// `max(1, ⌈n^{1/k} (ln n)^{(k-1)/k} / k^{1/k}⌉)`.
pub fn choose_q(n: usize, k: usize) -> usize {
    let (n, k) = (n as f64, k.max(1) as f64);
    let q = (n.powf(1.0 / k) * n.ln().powf((k - 1.0) / k) / k.powf(1.0 / k)).ceil();
    if q.is_finite() && q >= 1.0 {
        q as usize
    } else {
        1
    }
}

/// One constructed level transition `A_i → A_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Level {
    /// `|A_i|`.
    pub size: usize,
    /// `v_i`, the vertex farthest from `A_{i+1}`.
    pub farthest: Vertex,
    /// `d(v_i, A_{i+1})`.
    pub farthest_dist: Dist,
    /// `B_i(v_i)`, sorted by `(d, id)`.
    pub ball: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CgrHierarchy {
    pub k: usize,
    pub q: usize,
    pub levels: Vec<Level>,
    /// The exhaustively searched last level.
    pub last: VertexSet,
    /// True when some `|A_i| ≤ q` ended the construction early.
    pub truncated: bool,
}

impl CgrHierarchy {
    /// `|A_0|, |A_1|, …` including the last level.
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.size).chain([self.last.len()]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub k: usize,
    pub q: usize,
    pub diameter: Dist,
    pub diameter_pair: (Vertex, Vertex),
    pub radius: Dist,
    pub center: Vertex,
    pub eccentricities: Vec<Dist>,
    /// Source whose search produced each eccentricity estimate.
    pub eccentricity_witness: Vec<Vertex>,
    /// Full single-source searches plus multi-source searches.
    pub searches: usize,
    pub hierarchy: CgrHierarchy,
}

pub fn build_hierarchy(g: &Graph, k: usize, q: usize) -> Result<(CgrHierarchy, usize)> {
    let n = g.n();
    let mut a = VertexSet::full(n);
    let mut levels = Vec::new();
    let mut searches = 0;
    let mut truncated = false;
    for _ in 0..k - 1 {
        if a.len() <= q {
            truncated = true;
            break;
        }
        let near = q_nearest(g, &a, q, Direction::Forward)?;
        let rows = (0..n as Vertex)
            .map(|v| near.real_row(v).iter().map(|e| e.0).collect())
            .collect();
        let next = greedy_hitting_set(&SetFamily::new(n, rows)?)?;
        let to_next = multi_source_sssp(g, &next, Direction::Reverse)?;
        searches += 1;
        let (farthest, farthest_dist) = to_next.farthest();
        let ball = near
            .real_row(farthest)
            .iter()
            .take_while(|e| e.1 < farthest_dist)
            .map(|e| e.0)
            .collect();
        levels.push(Level {
            size: a.len(),
            farthest,
            farthest_dist,
            ball,
        });
        a = next;
    }
    Ok((
        CgrHierarchy {
            k,
            q,
            levels,
            last: a,
            truncated,
        },
        searches,
    ))
}

#[derive(Clone, Copy, Default)]
struct Role {
    ball: bool,
    anchor: bool,
}

/// Running maxima/minima over processed sources; ties go to smaller ids so
/// the merge order does not matter.
#[derive(Clone)]
struct Acc {
    diameter: (Dist, Vertex, Vertex),
    radius: Option<(Dist, Vertex)>,
    ecc: Vec<(Dist, Vertex)>,
}

fn better_max(a: (Dist, Vertex), b: (Dist, Vertex)) -> (Dist, Vertex) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

impl Acc {
    fn new(n: usize) -> Acc {
        Acc {
            diameter: (0, Vertex::MAX, Vertex::MAX),
            radius: None,
            ecc: vec![(0, Vertex::MAX); n],
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        let (a, b) = (self.diameter, other.diameter);
        if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
            self.diameter = b;
        }
        self.radius = match (self.radius, other.radius) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        for (mine, theirs) in self.ecc.iter_mut().zip(other.ecc) {
            *mine = better_max(*mine, theirs);
        }
        self
    }
}

/// Runs the full sweep. Sources are every `B_i(v_i)`, every `v_i` and the
/// last level; `v_i` is searched so `d(w, v_i)` is available for the
/// eccentricity estimates.
pub fn cgr_sweep(g: &Graph, k: usize, q_override: Option<usize>) -> Result<SweepReport> {
    if g.is_directed() {
        return Err(Error::Precondition("cgr requires an undirected graph".into()));
    }
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k = {k}, need k >= 2")));
    }
    if q_override == Some(0) {
        return Err(Error::InvalidParameter("q must be at least 1".into()));
    }
    require_connected(g)?;
    let n = g.n();
    let q = q_override.unwrap_or_else(|| choose_q(n, k));
    let (hierarchy, mut searches) = build_hierarchy(g, k, q)?;

    let mut roles = vec![Role::default(); n];
    for level in &hierarchy.levels {
        for &x in &level.ball {
            roles[x as usize].ball = true;
        }
        roles[level.farthest as usize].anchor = true;
    }
    for y in hierarchy.last.iter() {
        roles[y as usize].anchor = true;
    }
    let sources: Vec<Vertex> = (0..n as Vertex)
        .filter(|&v| roles[v as usize].ball || roles[v as usize].anchor)
        .collect();
    searches += sources.len();

    let acc = sources
        .par_iter()
        .fold(
            || Acc::new(n),
            |mut acc, &s| {
                let dist = sssp(g, s, Direction::Forward);
                let (far, ecc) = dist.farthest();
                let cand = (ecc, s, far);
                let cur = acc.diameter;
                if cand.0 > cur.0 || (cand.0 == cur.0 && (cand.1, cand.2) < (cur.1, cur.2)) {
                    acc.diameter = cand;
                }
                acc.radius = Some(acc.radius.map_or((ecc, s), |r| r.min((ecc, s))));
                let role = roles[s as usize];
                for (w, &d) in dist.as_slice().iter().enumerate() {
                    let slot = &mut acc.ecc[w];
                    if role.anchor {
                        *slot = better_max(*slot, (d, s));
                    }
                    if role.ball {
                        *slot = better_max(*slot, (ecc - d, s));
                    }
                }
                acc
            },
        )
        .reduce(|| Acc::new(n), Acc::merge);

    let (diameter, a, b) = acc.diameter;
    let (radius, center) = acc.radius.expect("the last level is nonempty");
    let (eccentricities, eccentricity_witness) = acc.ecc.into_iter().unzip();
    Ok(SweepReport {
        k,
        q,
        diameter,
        diameter_pair: (a, b),
        radius,
        center,
        eccentricities,
        eccentricity_witness,
        searches,
        hierarchy,
    })
}
