//! Single-source, multi-source, truncated and q-nearest shortest-path searches.
//!
//! Every search breaks ties by `(distance, vertex id)`, so results never depend
//! on heap internals or thread scheduling. Unit-weight graphs use BFS.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Direction, Dist, Graph, Vertex, VertexSet, UNREACHABLE};

/// Padding element for rectangular [`NearMatrix`] rows.
pub const DUMMY: Vertex = Vertex::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Vertex(Vertex),
    Set(Vec<Vertex>),
}

/// Distances from (Forward) or to (Reverse) a vertex or vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceArray {
    pub source: Source,
    pub direction: Direction,
    dist: Vec<Dist>,
}

impl DistanceArray {
    pub fn get(&self, v: Vertex) -> Dist {
        self.dist[v as usize]
    }

    pub fn as_slice(&self) -> &[Dist] {
        &self.dist
    }

    pub fn into_vec(self) -> Vec<Dist> {
        self.dist
    }

    pub fn is_reachable(&self, v: Vertex) -> bool {
        self.dist[v as usize] != UNREACHABLE
    }

    /// The reachable vertex of maximum distance, smallest id on ties.
    pub fn farthest(&self) -> (Vertex, Dist) {
        farthest(&self.dist)
    }
}

pub(crate) fn farthest(dist: &[Dist]) -> (Vertex, Dist) {
    let mut best = (0, 0);
    for (v, &d) in dist.iter().enumerate() {
        if d != UNREACHABLE && d > best.1 {
            best = (v as Vertex, d);
        }
    }
    best
}

fn fill_distances(g: &Graph, sources: &[Vertex], dir: Direction) -> Vec<Dist> {
    let mut dist = vec![UNREACHABLE; g.n()];
    if g.is_unit_weight() {
        let mut queue = VecDeque::with_capacity(g.n());
        for &s in sources {
            if dist[s as usize] != 0 {
                dist[s as usize] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize] + 1;
            for &v in g.neighbor_ids(u, dir) {
                if dist[v as usize] == UNREACHABLE {
                    dist[v as usize] = du;
                    queue.push_back(v);
                }
            }
        }
    } else {
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s as usize] = 0;
            heap.push(Reverse((0, s)));
        }
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u as usize] {
                continue;
            }
            for (v, w) in g.neighbors(u, dir) {
                let nd = d + w;
                if nd < dist[v as usize] {
                    dist[v as usize] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
    }
    dist
}

pub fn sssp(g: &Graph, source: Vertex, dir: Direction) -> DistanceArray {
    assert!((source as usize) < g.n(), "source {source} out of range");
    DistanceArray {
        source: Source::Vertex(source),
        direction: dir,
        dist: fill_distances(g, &[source], dir),
    }
}

/// `dist[v] = min_{s in sources} d(s, v)` (Forward) or `d(v, s)` (Reverse).
pub fn multi_source_sssp(g: &Graph, sources: &VertexSet, dir: Direction) -> Result<DistanceArray> {
    if sources.is_empty() {
        return Err(Error::EmptySourceSet);
    }
    Ok(DistanceArray {
        source: Source::Set(sources.members().to_vec()),
        direction: dir,
        dist: fill_distances(g, sources.members(), dir),
    })
}

/// A settled vertex of a bounded search, with the tree parent that reached it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settled {
    pub vertex: Vertex,
    pub dist: Dist,
    pub parent: Option<Vertex>,
}

/// Reusable scratch space for bounded searches; cost is proportional to the
/// explored region, not to `n`.
pub struct Searcher {
    dist: Vec<Dist>,
    parent: Vec<Vertex>,
    done: Vec<bool>,
    touched: Vec<Vertex>,
    heap: BinaryHeap<Reverse<(Dist, Vertex)>>,
}

impl Searcher {
    pub fn new(n: usize) -> Searcher {
        Searcher {
            dist: vec![UNREACHABLE; n],
            parent: vec![DUMMY; n],
            done: vec![false; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v as usize] = UNREACHABLE;
            self.parent[v as usize] = DUMMY;
            self.done[v as usize] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Settles vertices at distance `< strict_bound` from `source`, stopping
    /// early once `limit` vertices are settled and the next candidate is
    /// strictly farther than the last one. Output is sorted by `(dist, id)`.
    pub fn run(
        &mut self,
        g: &Graph,
        source: Vertex,
        dir: Direction,
        strict_bound: Dist,
        limit: usize,
    ) -> Vec<Settled> {
        self.reset();
        let mut out = Vec::new();
        if strict_bound == 0 || limit == 0 {
            return out;
        }
        self.dist[source as usize] = 0;
        self.touched.push(source);
        self.heap.push(Reverse((0, source)));
        while let Some(Reverse((d, u))) = self.heap.pop() {
            if self.done[u as usize] || d > self.dist[u as usize] {
                continue;
            }
            if d >= strict_bound {
                break;
            }
            if out.len() >= limit && out.last().is_some_and(|s: &Settled| d > s.dist) {
                break;
            }
            self.done[u as usize] = true;
            let p = self.parent[u as usize];
            out.push(Settled {
                vertex: u,
                dist: d,
                parent: (p != DUMMY).then_some(p),
            });
            for (v, w) in g.neighbors(u, dir) {
                let nd = d + w;
                let slot = &mut self.dist[v as usize];
                if nd < *slot {
                    if *slot == UNREACHABLE {
                        self.touched.push(v);
                    }
                    *slot = nd;
                    self.parent[v as usize] = u;
                    self.heap.push(Reverse((nd, v)));
                }
            }
        }
        out.sort_unstable_by_key(|s| (s.dist, s.vertex));
        out.truncate(limit);
        out
    }
}

/// Exactly `{(u, d(source, u)) : d(source, u) < strict_bound}`, sorted by `(dist, id)`.
pub fn truncated_search(g: &Graph, source: Vertex, dir: Direction, strict_bound: Dist) -> Vec<(Vertex, Dist)> {
    Searcher::new(g.n())
        .run(g, source, dir, strict_bound, usize::MAX)
        .into_iter()
        .map(|s| (s.vertex, s.dist))
        .collect()
}

/// The `k` vertices nearest to `source` (itself included), ties by smallest id.
pub fn nearest_k(g: &Graph, source: Vertex, k: usize, dir: Direction) -> Vec<(Vertex, Dist)> {
    Searcher::new(g.n())
        .run(g, source, dir, UNREACHABLE, k)
        .into_iter()
        .map(|s| (s.vertex, s.dist))
        .collect()
}

/// For every vertex, its `q` nearest members of a set `U`, as a rectangular
/// matrix. Rows are ordered by `(distance, id)`; rows with fewer than `q`
/// reachable members are padded with [`DUMMY`] at [`UNREACHABLE`].
///
/// With `Direction::Forward` row `v` ranks members `x` by `d(v, x)`; with
/// `Direction::Reverse` by `d(x, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearMatrix {
    n: usize,
    q: usize,
    direction: Direction,
    cells: Vec<(Vertex, Dist)>,
}

impl NearMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.q
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Full padded row.
    pub fn row(&self, v: Vertex) -> &[(Vertex, Dist)] {
        let start = v as usize * self.q;
        &self.cells[start..start + self.q]
    }

    /// Row without the trailing dummy padding.
    pub fn real_row(&self, v: Vertex) -> &[(Vertex, Dist)] {
        let row = self.row(v);
        let len = row.iter().position(|e| e.0 == DUMMY).unwrap_or(row.len());
        &row[..len]
    }
}

/// Computes `U_q(v)` for every vertex in one label-setting pass.
///
/// Each vertex accepts at most `q` labels `(d, x)` in increasing `(d, x)`
/// order, one per member `x`. A member among the `q` nearest of `v` is also
/// among the `q` nearest of `v`'s neighbour on a shortest path towards it, so
/// labels only need to propagate through vertices that keep them. Work is
/// bounded by `q` settlements per vertex, i.e. `q` SSSP-equivalent passes.
pub fn q_nearest(g: &Graph, u_set: &VertexSet, q: usize, dir: Direction) -> Result<NearMatrix> {
    if u_set.is_empty() {
        return Err(Error::EmptySourceSet);
    }
    if q == 0 {
        return Err(Error::InvalidParameter("q must be at least 1".into()));
    }
    let q = q.min(u_set.len());
    let n = g.n();
    if u_set.len() == n {
        // every vertex is a member: a row is a plain truncated search
        let rows: Vec<Vec<Settled>> = (0..n as Vertex)
            .into_par_iter()
            .map_init(|| Searcher::new(n), |searcher, v| searcher.run(g, v, dir, UNREACHABLE, q))
            .collect();
        let mut cells = Vec::with_capacity(n * q);
        for row in rows {
            let len = row.len();
            cells.extend(row.into_iter().map(|st| (st.vertex, st.dist)));
            cells.extend(std::iter::repeat_n((DUMMY, UNREACHABLE), q - len));
        }
        return Ok(NearMatrix {
            n,
            q,
            direction: dir,
            cells,
        });
    }
    let mut labels: Vec<Vec<(Vertex, Dist)>> = vec![Vec::new(); n];
    // accepted member ids per vertex, kept sorted for membership tests
    let mut seen: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut heap: BinaryHeap<Reverse<(Dist, Vertex, Vertex)>> = BinaryHeap::new();
    for x in u_set.iter() {
        heap.push(Reverse((0, x, x)));
    }
    let propagate = dir.flip();
    while let Some(Reverse((d, x, v))) = heap.pop() {
        let ids = &mut seen[v as usize];
        if ids.len() == q {
            continue;
        }
        match ids.binary_search(&x) {
            Ok(_) => continue,
            Err(at) => ids.insert(at, x),
        }
        labels[v as usize].push((x, d));
        for (u, w) in g.neighbors(v, propagate) {
            let ids = &seen[u as usize];
            if ids.len() < q && ids.binary_search(&x).is_err() {
                heap.push(Reverse((d + w, x, u)));
            }
        }
    }
    let mut cells = Vec::with_capacity(n * q);
    for row in labels {
        let len = row.len();
        cells.extend(row);
        cells.extend(std::iter::repeat_n((DUMMY, UNREACHABLE), q - len));
    }
    Ok(NearMatrix {
        n,
        q,
        direction: dir,
        cells,
    })
}
