//! Immutable weighted graph with forward and reverse adjacency.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;
pub type Weight = u64;
pub type Dist = u64;

/// Distance sentinel for vertices a search never reaches.
pub const UNREACHABLE: Dist = Dist::MAX;

/// Which way edges are followed.
///
/// `Forward` searches compute `d(source, ·)`; `Reverse` searches run on the
/// transposed graph and compute `d(·, source)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphFormat {
    /// `n m directed|undirected` header followed by `u v [w]` lines.
    Canonical,
    /// DIMACS shortest-path `.gr` (`p sp n m`, `a u v w`, 1-indexed, directed).
    DimacsGr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    Connected,
    NotConnected,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    weights: Vec<Weight>,
}

impl Csr {
    /// Builds from `(u, v, w)` triples already sorted by `(u, v)` and free of duplicates.
    fn from_sorted(n: usize, arcs: &[(Vertex, Vertex, Weight)]) -> Csr {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in arcs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Csr {
            offsets,
            targets: arcs.iter().map(|a| a.1).collect(),
            weights: arcs.iter().map(|a| a.2).collect(),
        }
    }

    fn transpose(&self, n: usize) -> Csr {
        let mut arcs = Vec::with_capacity(self.targets.len());
        for u in 0..n {
            for i in self.offsets[u]..self.offsets[u + 1] {
                arcs.push((self.targets[i], u as Vertex, self.weights[i]));
            }
        }
        arcs.sort_unstable();
        Csr::from_sorted(n, &arcs)
    }
}

/// An immutable graph on vertices `0..n` with nonnegative integer weights.
///
/// Parallel edges collapse to their minimum weight (undirected inputs must
/// agree on the weight); self-loops are dropped since they never lie on a
/// shortest path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    directed: bool,
    max_weight: Weight,
    unit_weights: bool,
    fwd: Csr,
    rev: Csr,
}

impl Graph {
    /// Builds a graph from an edge list. Undirected edges are given once.
    pub fn from_edges<I>(n: usize, directed: bool, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Weight)>,
    {
        let lined = edges
            .into_iter()
            .enumerate()
            .map(|(i, (u, v, w))| (i + 1, u as u64, v as u64, w));
        Self::build(n, directed, lined)
    }

    fn build<I>(n: usize, directed: bool, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, u64, u64, Weight)>,
    {
        if n == 0 {
            return Err(Error::Parse {
                line: 0,
                message: "graph must have at least one vertex".into(),
            });
        }
        if n > Vertex::MAX as usize - 1 {
            return Err(Error::InvalidParameter(format!("n = {n} exceeds vertex id range")));
        }
        // (u, v, w, line) with u < v canonicalised for undirected input
        let mut arcs: Vec<(Vertex, Vertex, Weight, usize)> = Vec::new();
        for (line, u, v, w) in edges {
            for x in [u, v] {
                if x >= n as u64 {
                    return Err(Error::VertexOutOfRange { line, vertex: x, n });
                }
            }
            if u == v {
                continue;
            }
            let (u, v) = (u as Vertex, v as Vertex);
            if directed {
                arcs.push((u, v, w, line));
            } else {
                arcs.push((u.min(v), u.max(v), w, line));
            }
        }
        arcs.sort_unstable();
        let mut dedup: Vec<(Vertex, Vertex, Weight)> = Vec::with_capacity(arcs.len());
        for &(u, v, w, line) in &arcs {
            match dedup.last() {
                Some(&(pu, pv, pw)) if pu == u && pv == v => {
                    if !directed && pw != w {
                        return Err(Error::ConflictingEdge {
                            line,
                            u,
                            v,
                            first: pw,
                            second: w,
                        });
                    }
                }
                _ => dedup.push((u, v, w)),
            }
        }
        let m = dedup.len();
        let max_weight = dedup.iter().map(|e| e.2).max().unwrap_or(0);
        let unit_weights = dedup.iter().all(|e| e.2 == 1);

        let (fwd, rev) = if directed {
            let fwd = Csr::from_sorted(n, &dedup);
            let rev = fwd.transpose(n);
            (fwd, rev)
        } else {
            let mut both: Vec<(Vertex, Vertex, Weight)> = Vec::with_capacity(2 * m);
            for &(u, v, w) in &dedup {
                both.push((u, v, w));
                both.push((v, u, w));
            }
            both.sort_unstable();
            let fwd = Csr::from_sorted(n, &both);
            (fwd.clone(), fwd)
        };
        Ok(Graph {
            n,
            m,
            directed,
            max_weight,
            unit_weights,
            fwd,
            rev,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn max_weight(&self) -> Weight {
        self.max_weight
    }

    /// True when every edge has weight exactly 1 (an unweighted graph).
    /// Edgeless graphs count as unweighted.
    pub fn is_unit_weight(&self) -> bool {
        self.unit_weights
    }

    fn csr(&self, dir: Direction) -> &Csr {
        match dir {
            Direction::Forward => &self.fwd,
            Direction::Reverse => &self.rev,
        }
    }

    /// Out-neighbours of `v` along `dir`, sorted by neighbour id.
    pub fn neighbors(&self, v: Vertex, dir: Direction) -> impl ExactSizeIterator<Item = (Vertex, Weight)> + '_ {
        let csr = self.csr(dir);
        let range = csr.offsets[v as usize]..csr.offsets[v as usize + 1];
        csr.targets[range.clone()]
            .iter()
            .copied()
            .zip(csr.weights[range].iter().copied())
    }

    pub fn neighbor_ids(&self, v: Vertex, dir: Direction) -> &[Vertex] {
        let csr = self.csr(dir);
        &csr.targets[csr.offsets[v as usize]..csr.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbor_ids(v, Direction::Forward).len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.n as Vertex
    }

    /// Edges as stored: every arc for directed graphs, `u < v` once for undirected ones,
    /// sorted by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, Weight)> + '_ {
        let directed = self.directed;
        self.vertices().flat_map(move |u| {
            self.neighbors(u, Direction::Forward)
                .filter(move |&(v, _)| directed || u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    /// Number of stored arcs in one direction (2m for undirected graphs).
    pub fn arc_count(&self) -> usize {
        self.fwd.targets.len()
    }

    /// The graph with every edge direction flipped.
    pub fn transpose(&self) -> Graph {
        Graph {
            fwd: self.rev.clone(),
            rev: self.fwd.clone(),
            ..self.clone()
        }
    }

    /// Canonical text serialisation, edges sorted by `(u, v)`.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        let kind = if self.directed { "directed" } else { "undirected" };
        let _ = writeln!(out, "{} {} {}", self.n, self.m, kind);
        for (u, v, w) in self.edges() {
            let _ = writeln!(out, "{u} {v} {w}");
        }
        out
    }
}

pub fn load_graph<R: BufRead>(reader: R, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::Canonical => parse_canonical(reader),
        GraphFormat::DimacsGr => parse_dimacs(reader),
    }
}

pub fn load_graph_str(text: &str, format: GraphFormat) -> Result<Graph> {
    load_graph(text.as_bytes(), format)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_u64(tok: &str, line: usize, what: &str) -> Result<u64> {
    tok.parse::<u64>()
        .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

fn parse_weight(tok: &str, line: usize) -> Result<Weight> {
    let w: i64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid weight '{tok}'")))?;
    if w < 0 {
        return Err(Error::NegativeWeight { line, weight: w });
    }
    Ok(w as Weight)
}

fn parse_canonical<R: BufRead>(reader: R) -> Result<Graph> {
    let mut header: Option<(usize, usize, bool)> = None;
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match header {
            None => {
                if toks.len() != 3 {
                    return Err(parse_err(lineno, "expected header 'n m directed|undirected'"));
                }
                let n = parse_u64(toks[0], lineno, "vertex count")? as usize;
                let m = parse_u64(toks[1], lineno, "edge count")? as usize;
                let directed = match toks[2] {
                    "directed" => true,
                    "undirected" => false,
                    other => {
                        return Err(parse_err(
                            lineno,
                            format!("expected 'directed' or 'undirected', found '{other}'"),
                        ))
                    }
                };
                header = Some((n, m, directed));
            }
            Some((_, m, _)) => {
                if toks.len() != 2 && toks.len() != 3 {
                    return Err(parse_err(lineno, "expected edge line 'u v [w]'"));
                }
                if edges.len() == m {
                    return Err(parse_err(lineno, format!("more than the declared {m} edges")));
                }
                let u = parse_u64(toks[0], lineno, "vertex id")?;
                let v = parse_u64(toks[1], lineno, "vertex id")?;
                let w = match toks.get(2) {
                    Some(t) => parse_weight(t, lineno)?,
                    None => 1,
                };
                edges.push((lineno, u, v, w));
            }
        }
    }
    let (n, m, directed) = header.ok_or_else(|| parse_err(0, "missing header"))?;
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("header declares {m} edges but {} were given", edges.len()),
        ));
    }
    Graph::build(n, directed, edges)
}

fn parse_dimacs<R: BufRead>(reader: R) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(parse_err(lineno, "duplicate problem line"));
                }
                if toks.len() != 4 || toks[1] != "sp" {
                    return Err(parse_err(lineno, "expected 'p sp n m'"));
                }
                let n = parse_u64(toks[2], lineno, "vertex count")? as usize;
                let m = parse_u64(toks[3], lineno, "arc count")? as usize;
                header = Some((n, m));
            }
            Some("a") => {
                let (n, _) = header.ok_or_else(|| parse_err(lineno, "arc before problem line"))?;
                if toks.len() != 4 {
                    return Err(parse_err(lineno, "expected 'a u v w'"));
                }
                let mut ids = [0u64; 2];
                for (slot, tok) in ids.iter_mut().zip(&toks[1..3]) {
                    let id = parse_u64(tok, lineno, "vertex id")?;
                    if id == 0 || id > n as u64 {
                        return Err(Error::VertexOutOfRange {
                            line: lineno,
                            vertex: id,
                            n,
                        });
                    }
                    *slot = id - 1;
                }
                let w = parse_weight(toks[3], lineno)?;
                arcs.push((lineno, ids[0], ids[1], w));
            }
            Some(other) => {
                return Err(parse_err(lineno, format!("unknown line type '{other}'")));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if arcs.len() != m {
        return Err(parse_err(
            0,
            format!("problem line declares {m} arcs but {} were given", arcs.len()),
        ));
    }
    Graph::build(n, true, arcs)
}

fn reach_all(g: &Graph, dir: Direction) -> bool {
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([0 as Vertex]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbor_ids(u, dir) {
            if !seen[v as usize] {
                seen[v as usize] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == g.n()
}

/// Connected (undirected) or strongly connected (directed).
pub fn check_connectivity(g: &Graph) -> Connectivity {
    let ok = reach_all(g, Direction::Forward) && (!g.is_directed() || reach_all(g, Direction::Reverse));
    if ok {
        Connectivity::Connected
    } else {
        Connectivity::NotConnected
    }
}

pub(crate) fn require_connected(g: &Graph) -> Result<()> {
    match check_connectivity(g) {
        Connectivity::Connected => Ok(()),
        Connectivity::NotConnected if g.is_directed() => Err(Error::NotConnected("strongly connected")),
        Connectivity::NotConnected => Err(Error::NotConnected("connected")),
    }
}

/// A set of vertex ids with sorted members and an O(1) membership bitmap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<Vertex>,
    bitmap: Vec<bool>,
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(serializer)
    }
}

impl VertexSet {
    pub fn empty(n: usize) -> VertexSet {
        VertexSet {
            members: Vec::new(),
            bitmap: vec![false; n],
        }
    }

    pub fn full(n: usize) -> VertexSet {
        VertexSet {
            members: (0..n as Vertex).collect(),
            bitmap: vec![true; n],
        }
    }

    /// Collects ids into a set; duplicates are merged. Panics on ids `>= n`.
    pub fn from_iter<I: IntoIterator<Item = Vertex>>(n: usize, ids: I) -> VertexSet {
        let mut bitmap = vec![false; n];
        for v in ids {
            assert!((v as usize) < n, "vertex {v} out of range for n = {n}");
            bitmap[v as usize] = true;
        }
        let members = (0..n as Vertex).filter(|&v| bitmap[v as usize]).collect();
        VertexSet { members, bitmap }
    }

    pub fn universe(&self) -> usize {
        self.bitmap.len()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.bitmap.get(v as usize).copied().unwrap_or(false)
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.universe(), other.universe());
        VertexSet::from_iter(self.universe(), self.iter().chain(other.iter()))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}
