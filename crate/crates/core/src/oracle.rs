//! Brute-force ground truth: all-pairs distances, diameter, radius,
//! eccentricities and balls straight from their definitions.

use rayon::prelude::*;
use serde::Serialize;

use crate::balls::BallTable;
use crate::error::{Error, Result};
use crate::graph::{Direction, Dist, Graph, Vertex, VertexSet, UNREACHABLE};
use crate::shortest_paths::sssp;

pub const DEFAULT_ORACLE_CAP: usize = 2000;

/// Largest `n` for which the SSSP matrix is re-derived by Floyd–Warshall.
const CROSS_CHECK_LIMIT: usize = 200;

/// Row-major `n × n` distance matrix, `d(u, v)` at `u * n + v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<Dist>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> Dist {
        self.dist[u as usize * self.n + v as usize]
    }

    pub fn row(&self, u: Vertex) -> &[Dist] {
        &self.dist[u as usize * self.n..(u as usize + 1) * self.n]
    }

    /// `d(u, S)`, or `d(S, u)` for `Direction::Reverse`.
    pub fn to_set(&self, u: Vertex, s: &VertexSet, dir: Direction) -> Dist {
        s.iter()
            .map(|x| match dir {
                Direction::Forward => self.get(u, x),
                Direction::Reverse => self.get(x, u),
            })
            .min()
            .unwrap_or(UNREACHABLE)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactMetrics {
    pub diameter: Dist,
    pub diameter_pair: (Vertex, Vertex),
    pub radius: Dist,
    pub center: Vertex,
    pub eccentricities: Vec<Dist>,
    #[serde(skip)]
    pub matrix: DistanceMatrix,
}

fn check_cap(g: &Graph, cap: usize) -> Result<()> {
    if g.n() > cap {
        return Err(Error::OracleCap { n: g.n(), cap });
    }
    Ok(())
}

/// All-pairs distances from `n` independent searches; for small graphs the
/// result is re-derived with Floyd–Warshall and both must agree exactly.
pub fn all_pairs(g: &Graph, cap: usize) -> Result<DistanceMatrix> {
    check_cap(g, cap)?;
    let n = g.n();
    let rows: Vec<Vec<Dist>> = (0..n as Vertex)
        .into_par_iter()
        .map(|u| sssp(g, u, Direction::Forward).into_vec())
        .collect();
    let matrix = DistanceMatrix {
        n,
        dist: rows.concat(),
    };
    if n <= CROSS_CHECK_LIMIT {
        assert_eq!(floyd_warshall(g), matrix.dist, "APSP methods disagree");
    }
    Ok(matrix)
}

fn floyd_warshall(g: &Graph) -> Vec<Dist> {
    let n = g.n();
    let mut d = vec![UNREACHABLE; n * n];
    for v in 0..n {
        d[v * n + v] = 0;
    }
    for (u, v, w) in g.edges() {
        let (u, v) = (u as usize, v as usize);
        d[u * n + v] = d[u * n + v].min(w);
        if !g.is_directed() {
            d[v * n + u] = d[v * n + u].min(w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik == UNREACHABLE {
                continue;
            }
            for j in 0..n {
                let dkj = d[k * n + j];
                if dkj != UNREACHABLE && dik + dkj < d[i * n + j] {
                    d[i * n + j] = dik + dkj;
                }
            }
        }
    }
    d
}

pub fn exact_metrics(g: &Graph, cap: usize) -> Result<ExactMetrics> {
    let matrix = all_pairs(g, cap)?;
    if matrix.dist.contains(&UNREACHABLE) {
        let what = if g.is_directed() { "strongly connected" } else { "connected" };
        return Err(Error::NotConnected(what));
    }
    let n = g.n();
    let mut eccentricities = Vec::with_capacity(n);
    let mut far = Vec::with_capacity(n);
    for u in 0..n as Vertex {
        let (v, d) = crate::shortest_paths::farthest(matrix.row(u));
        eccentricities.push(d);
        far.push(v);
    }
    // ties go to the smallest id
    let (src, diameter) = crate::shortest_paths::farthest(&eccentricities);
    let center = (0..n).min_by_key(|&u| (eccentricities[u], u)).unwrap() as Vertex;
    Ok(ExactMetrics {
        diameter,
        diameter_pair: (src, far[src as usize]),
        radius: eccentricities[center as usize],
        center,
        eccentricities,
        matrix,
    })
}

/// Balls computed from the full distance matrix.
pub fn exact_balls(g: &Graph, s: &VertexSet, dir: Direction, cap: usize) -> Result<BallTable> {
    let matrix = all_pairs(g, cap)?;
    Ok(balls_from_matrix(&matrix, s, dir))
}

pub fn balls_from_matrix(matrix: &DistanceMatrix, s: &VertexSet, dir: Direction) -> BallTable {
    let n = matrix.n();
    let d = |a: Vertex, b: Vertex| match dir {
        Direction::Forward => matrix.get(a, b),
        Direction::Reverse => matrix.get(b, a),
    };
    let threshold: Vec<Dist> = (0..n as Vertex).map(|v| matrix.to_set(v, s, dir)).collect();
    let balls = (0..n as Vertex)
        .map(|v| {
            let mut ball: Vec<(Vertex, Dist)> = (0..n as Vertex)
                .filter(|&u| d(v, u) < threshold[v as usize])
                .map(|u| (u, d(v, u)))
                .collect();
            ball.sort_unstable_by_key(|&(u, du)| (du, u));
            ball
        })
        .collect();
    BallTable {
        direction: dir,
        threshold,
        balls,
        plus: None,
    }
}
