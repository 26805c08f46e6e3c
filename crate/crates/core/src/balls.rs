//! Balls `B_S(v) = {u : d(v,u) < d(v,S)}`, their inverse clusters
//! `C_S(x) = {v : x ∈ B_S(v)}`, and deterministic sets `S` that keep both
//! small.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Direction, Dist, Graph, Vertex, VertexSet};
use crate::hitting::{early_hitting_set, greedy_hitting_set, HitMatrix, SetFamily};
use crate::shortest_paths::{multi_source_sssp, q_nearest, NearMatrix, Searcher, DUMMY};

/// Per-vertex balls. With `Direction::Reverse` the table holds `B^R_S(v)`,
/// i.e. distances are `d(u, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallTable {
    pub direction: Direction,
    /// `d(v, S)` per vertex (in the table's direction).
    pub threshold: Vec<Dist>,
    /// Ball members `(u, d)` sorted by `(d, u)`.
    pub balls: Vec<Vec<(Vertex, Dist)>>,
    /// `B^+_S(v)`: neighbours of ball members, sorted and deduplicated.
    pub plus: Option<Vec<Vec<Vertex>>>,
}

impl BallTable {
    pub fn ball(&self, v: Vertex) -> &[(Vertex, Dist)] {
        &self.balls[v as usize]
    }

    pub fn max_size(&self) -> usize {
        self.balls.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_size(&self) -> usize {
        self.balls.iter().map(Vec::len).sum()
    }
}

/// Per-vertex clusters: `clusters[x]` lists `(v, d(v, x))` for `v ∈ C_S(x)`,
/// sorted by `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterTable {
    pub direction: Direction,
    pub clusters: Vec<Vec<(Vertex, Dist)>>,
}

impl ClusterTable {
    pub fn cluster(&self, x: Vertex) -> &[(Vertex, Dist)] {
        &self.clusters[x as usize]
    }

    pub fn max_size(&self) -> usize {
        self.clusters.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_size(&self) -> usize {
        self.clusters.iter().map(Vec::len).sum()
    }
}

pub fn compute_balls(g: &Graph, s: &VertexSet, dir: Direction, with_plus: bool) -> Result<BallTable> {
    let threshold = multi_source_sssp(g, s, dir.flip())?.into_vec();
    let n = g.n();
    let balls: Vec<Vec<(Vertex, Dist)>> = (0..n as Vertex)
        .into_par_iter()
        .map_init(
            || Searcher::new(n),
            |searcher, v| {
                searcher
                    .run(g, v, dir, threshold[v as usize], usize::MAX)
                    .into_iter()
                    .map(|st| (st.vertex, st.dist))
                    .collect()
            },
        )
        .collect();
    let plus = with_plus.then(|| {
        balls
            .par_iter()
            .map(|ball| {
                let mut ext: Vec<Vertex> = ball
                    .iter()
                    .flat_map(|&(u, _)| g.neighbor_ids(u, dir).iter().copied())
                    .collect();
                ext.sort_unstable();
                ext.dedup();
                ext
            })
            .collect()
    });
    Ok(BallTable {
        direction: dir,
        threshold,
        balls,
        plus,
    })
}

pub fn invert_to_clusters(balls: &BallTable) -> ClusterTable {
    let mut clusters = vec![Vec::new(); balls.balls.len()];
    for (v, ball) in balls.balls.iter().enumerate() {
        for &(x, d) in ball {
            clusters[x as usize].push((v as Vertex, d));
        }
    }
    ClusterTable {
        direction: balls.direction,
        clusters,
    }
}

/// Output of [`small_clusters_set`] with the per-iteration bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallClusters {
    pub set: VertexSet,
    /// Size of the initial greedy hitting set of the matrix rows.
    pub greedy_size: usize,
    /// `|W_i|` for every iteration that found oversized clusters.
    pub oversized: Vec<usize>,
    /// Number of vertices each iteration added.
    pub added: Vec<usize>,
}

/// Ball of `v` with respect to `a`, read off the matrix row: the entries
/// strictly closer than the first member of `a`. Requires `a` to hit the row.
fn row_ball<'a>(row: &'a [(Vertex, Dist)], a: &VertexSet) -> &'a [(Vertex, Dist)] {
    let first = row
        .iter()
        .position(|&(x, _)| x != DUMMY && a.contains(x))
        .expect("set hits every row");
    let bound = row[first].1;
    let end = row[..first].partition_point(|&(_, d)| d < bound);
    &row[..end]
}

/// Grows a hitting set of the rows of `near` (the `ℓ` nearest vertices of
/// every vertex) until every ball and every cluster with respect to it has
/// at most `ℓ` members.
///
/// Each round collects the oversized clusters `W`, restricts every ball to
/// `W` and adds an early hitting set of those restricted balls, which at
/// least halves `|W|`.
pub fn small_clusters_set(near: &NearMatrix) -> Result<SmallClusters> {
    let n = near.n();
    let ell = near.width();
    let rows: Vec<Vec<Vertex>> = (0..n as Vertex)
        .map(|v| near.real_row(v).iter().map(|e| e.0).collect())
        .collect();
    let mut a = greedy_hitting_set(&SetFamily::new(n, rows)?)?;
    let greedy_size = a.len();
    let mut oversized = Vec::new();
    let mut added = Vec::new();
    let rounds = ceil_log2(n);

    for round in 0..=rounds {
        let balls: Vec<&[(Vertex, Dist)]> = (0..n as Vertex)
            .into_par_iter()
            .map(|v| row_ball(near.row(v), &a))
            .collect();
        let mut cluster_size = vec![0usize; n];
        for ball in &balls {
            for &(x, _) in *ball {
                cluster_size[x as usize] += 1;
            }
        }
        let w: Vec<Vertex> = (0..n as Vertex).filter(|&x| cluster_size[x as usize] > ell).collect();
        if w.is_empty() {
            break;
        }
        assert!(round < rounds, "oversized clusters left after {rounds} rounds");
        let in_w = VertexSet::from_iter(n, w.iter().copied());
        let pick = if 8 * n >= w.len() * ell {
            // inclusion probability would be at least 1: the process keeps all of W
            w.clone()
        } else {
            let rows: Vec<Vec<Vertex>> = balls
                .iter()
                .map(|ball| ball.iter().map(|e| e.0).filter(|&x| in_w.contains(x)).collect())
                .collect();
            let p = Ratio::new(8 * n as u64, (w.len() * ell) as u64);
            let matrix = HitMatrix::new(&rows, ell, w.clone(), 0, p)?;
            early_hitting_set(&matrix)
        };
        oversized.push(w.len());
        let before = a.len();
        a = a.union(&VertexSet::from_iter(n, pick));
        added.push(a.len() - before);
    }
    Ok(SmallClusters {
        set: a,
        greedy_size,
        oversized,
        added,
    })
}

pub(crate) fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Upper bound on `|A*|` from [`small_clusters_set`]:
/// `⌈(n/ℓ) ln n⌉ + 1 + ⌈log₂ n⌉ (24n/ℓ + 1)`, rounded up.
pub fn small_clusters_bound(n: usize, ell: usize) -> usize {
    let ell = ell.max(1);
    let greedy = crate::hitting::greedy_bound(n, ell.min(n), n);
    greedy + ceil_log2(n) * ((24 * n).div_ceil(ell) + 1)
}

/// A set `S` whose forward and reverse balls and clusters all have at most
/// `ℓ` members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedSet {
    pub set: VertexSet,
    pub forward: SmallClusters,
    /// Absent for undirected graphs, where both directions coincide.
    pub reverse: Option<SmallClusters>,
}

pub fn bounded_balls_clusters_set(g: &Graph, ell: usize) -> Result<BoundedSet> {
    let n = g.n();
    if ell == 0 || ell > n {
        return Err(Error::InvalidParameter(format!("ℓ = {ell} outside [1, {n}]")));
    }
    let all = VertexSet::full(n);
    let forward = small_clusters_set(&q_nearest(g, &all, ell, Direction::Forward)?)?;
    if !g.is_directed() {
        return Ok(BoundedSet {
            set: forward.set.clone(),
            forward,
            reverse: None,
        });
    }
    let reverse = small_clusters_set(&q_nearest(g, &all, ell, Direction::Reverse)?)?;
    Ok(BoundedSet {
        set: forward.set.union(&reverse.set),
        forward,
        reverse: Some(reverse),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GenSpec, Model};
    use crate::shortest_paths::sssp;

    fn path(n: usize) -> Graph {
        generate(&GenSpec::new(Model::Path { n }, 0)).unwrap()
    }

    fn brute_balls(g: &Graph, s: &VertexSet, dir: Direction) -> Vec<Vec<(Vertex, Dist)>> {
        g.vertices()
            .map(|v| {
                let d = sssp(g, v, dir);
                let t = s.iter().map(|x| d.get(x)).min().unwrap();
                let mut ball: Vec<_> = g.vertices().filter(|&u| d.get(u) < t).map(|u| (u, d.get(u))).collect();
                ball.sort_by_key(|&(u, d)| (d, u));
                ball
            })
            .collect()
    }

    #[test]
    fn p5_balls_and_clusters() {
        let g = path(5);
        let s = VertexSet::from_iter(5, [0, 4]);
        let t = compute_balls(&g, &s, Direction::Forward, true).unwrap();
        assert_eq!(t.threshold[2], 2);
        assert_eq!(t.ball(2), &[(2, 0), (1, 1), (3, 1)]);
        assert!(t.ball(0).is_empty() && t.ball(4).is_empty());
        assert_eq!(t.plus.as_ref().unwrap()[2], vec![0, 1, 2, 3, 4]);
        let c = invert_to_clusters(&t);
        assert_eq!(c.cluster(1), &[(1, 0), (2, 1)]);
        assert_eq!(c.total_size(), t.total_size());
    }

    #[test]
    fn empty_source_set_rejected() {
        let g = path(3);
        assert!(compute_balls(&g, &VertexSet::empty(3), Direction::Forward, false).is_err());
    }

    #[test]
    fn balls_match_brute_force_on_random_digraphs() {
        for seed in 0..10 {
            let g = generate(&GenSpec::new(Model::Gnm { n: 15, m: 30 }, seed).directed().weighted(5)).unwrap();
            let s = VertexSet::from_iter(15, [seed as Vertex % 15, 3]);
            for dir in [Direction::Forward, Direction::Reverse] {
                let t = compute_balls(&g, &s, dir, false).unwrap();
                assert_eq!(t.balls, brute_balls(&g, &s, dir));
            }
        }
    }

    fn check_small(g: &Graph, ell: usize, dir: Direction) -> SmallClusters {
        let near = q_nearest(g, &VertexSet::full(g.n()), ell, dir).unwrap();
        let out = small_clusters_set(&near).unwrap();
        let t = compute_balls(g, &out.set, dir, false).unwrap();
        assert!(t.max_size() <= ell);
        assert!(invert_to_clusters(&t).max_size() <= ell);
        assert!(out.set.len() <= small_clusters_bound(g.n(), ell));
        for pair in out.oversized.windows(2) {
            assert!(2 * pair[1] < pair[0]);
        }
        out
    }

    #[test]
    fn small_clusters_examples() {
        check_small(&path(5), 2, Direction::Forward);
        let c6 = generate(&GenSpec::new(Model::Cycle { n: 6 }, 0)).unwrap();
        check_small(&c6, 2, Direction::Forward);
        let out = check_small(&path(5), 5, Direction::Forward);
        assert_eq!(out.set.len(), out.greedy_size);
        assert!(out.oversized.is_empty());
    }

    #[test]
    fn small_clusters_on_star_needs_rounds() {
        // every leaf's 2 nearest are itself and the centre, so the greedy set
        // can leave the centre with a huge cluster
        let g = generate(&GenSpec::new(Model::Star { n: 40 }, 0)).unwrap();
        check_small(&g, 2, Direction::Forward);
        for seed in 0..5 {
            let g = generate(&GenSpec::new(Model::Gnm { n: 60, m: 90 }, seed).weighted(4)).unwrap();
            for ell in [2, 3, 8] {
                check_small(&g, ell, Direction::Forward);
            }
        }
    }

    #[test]
    fn bounded_set_on_digraphs() {
        for seed in 0..5 {
            let g = generate(&GenSpec::new(Model::Gnm { n: 40, m: 80 }, seed).directed().weighted(6)).unwrap();
            for ell in [1, 2, 5, 40] {
                let s = bounded_balls_clusters_set(&g, ell).unwrap();
                for dir in [Direction::Forward, Direction::Reverse] {
                    let t = compute_balls(&g, &s.set, dir, false).unwrap();
                    assert!(t.max_size() <= ell, "ball over {ell}");
                    assert!(invert_to_clusters(&t).max_size() <= ell, "cluster over {ell}");
                }
            }
        }
        assert!(bounded_balls_clusters_set(&path(4), 0).is_err());
        assert!(bounded_balls_clusters_set(&path(4), 5).is_err());
    }

    #[test]
    fn log2_rounding() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
    }

    #[test]
    fn early_round_on_weighted_tree() {
        // a weighted random tree where the first oversized set is too large
        // to take whole, so the round goes through the early hitting set
        let g = generate(&"gnm:n=100,m=99,w=10:81".parse().unwrap()).unwrap();
        let ell = 32;
        let near = q_nearest(&g, &VertexSet::full(100), ell, Direction::Forward).unwrap();
        let sc = small_clusters_set(&near).unwrap();
        assert!(sc.oversized[0] * ell > 8 * 100, "{:?}", sc.oversized);
        let balls = brute_balls(&g, &sc.set, Direction::Forward);
        let mut cluster = vec![0usize; 100];
        for ball in &balls {
            assert!(ball.len() <= ell);
            for &(x, _) in ball {
                cluster[x as usize] += 1;
            }
        }
        assert!(cluster.iter().all(|&c| c <= ell));
        assert!(sc.set.len() <= small_clusters_bound(100, ell));
    }
}
