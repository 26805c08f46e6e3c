//! Deterministic instance generators.
//!
//! A generator spec reads `model:params:seed`, e.g. `gnm:n=50,m=200,w=10:7`,
//! `path:n=5:0` or `grid:rows=4,cols=6:1`. The optional `w=` sets the maximum
//! edge weight (weights drawn uniformly from `1..=w`, default 1) and the bare
//! flag `directed` makes `gnm`/`cycle` produce strongly connected digraphs.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Path { n: usize },
    Cycle { n: usize },
    Star { n: usize },
    Grid { rows: usize, cols: usize },
    Gnm { n: usize, m: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub model: Model,
    pub max_weight: Weight,
    pub directed: bool,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(model: Model, seed: u64) -> GenSpec {
        GenSpec {
            model,
            max_weight: 1,
            directed: false,
            seed,
        }
    }

    pub fn weighted(mut self, max_weight: Weight) -> GenSpec {
        self.max_weight = max_weight;
        self
    }

    pub fn directed(mut self) -> GenSpec {
        self.directed = true;
        self
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, params) = match self.model {
            Model::Path { n } => ("path", format!("n={n}")),
            Model::Cycle { n } => ("cycle", format!("n={n}")),
            Model::Star { n } => ("star", format!("n={n}")),
            Model::Grid { rows, cols } => ("grid", format!("rows={rows},cols={cols}")),
            Model::Gnm { n, m } => ("gnm", format!("n={n},m={m}")),
        };
        write!(f, "{name}:{params}")?;
        if self.max_weight != 1 {
            write!(f, ",w={}", self.max_weight)?;
        }
        if self.directed {
            write!(f, ",directed")?;
        }
        write!(f, ":{}", self.seed)
    }
}

impl FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GenSpec> {
        let bad = |msg: String| Error::InvalidParameter(format!("generator spec '{s}': {msg}"));
        let parts: Vec<&str> = s.split(':').collect();
        let (name, params, seed) = match parts.as_slice() {
            [name, params, seed] => (*name, *params, *seed),
            [name, params] => (*name, *params, "0"),
            _ => return Err(bad("expected model:params:seed".into())),
        };
        let seed: u64 = seed.parse().map_err(|_| bad(format!("invalid seed '{seed}'")))?;
        let mut kv = std::collections::BTreeMap::new();
        let mut directed = false;
        for item in params.split(',').filter(|p| !p.is_empty()) {
            match item.split_once('=') {
                Some((k, v)) => {
                    let v: u64 = v.parse().map_err(|_| bad(format!("invalid value in '{item}'")))?;
                    kv.insert(k, v);
                }
                None if item == "directed" => directed = true,
                None => return Err(bad(format!("unknown flag '{item}'"))),
            }
        }
        let mut take = |k: &str| kv.remove(k).ok_or_else(|| bad(format!("missing parameter '{k}'")));
        let model = match name {
            "path" => Model::Path { n: take("n")? as usize },
            "cycle" => Model::Cycle { n: take("n")? as usize },
            "star" => Model::Star { n: take("n")? as usize },
            "grid" => Model::Grid {
                rows: take("rows")? as usize,
                cols: take("cols")? as usize,
            },
            "gnm" => Model::Gnm {
                n: take("n")? as usize,
                m: take("m")? as usize,
            },
            other => return Err(bad(format!("unknown model '{other}'"))),
        };
        let max_weight = kv.remove("w").unwrap_or(1);
        if let Some(k) = kv.keys().next() {
            return Err(bad(format!("unknown parameter '{k}'")));
        }
        Ok(GenSpec {
            model,
            max_weight,
            directed,
            seed,
        })
    }
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    let invalid = |msg: String| Error::InvalidParameter(format!("{spec}: {msg}"));
    if spec.max_weight == 0 {
        return Err(invalid("maximum weight must be at least 1".into()));
    }
    if spec.directed && !matches!(spec.model, Model::Gnm { .. } | Model::Cycle { .. }) {
        return Err(invalid("only gnm and cycle support 'directed'".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, pairs): (usize, Vec<(Vertex, Vertex)>) = match spec.model {
        Model::Path { n } => {
            require(n >= 1, || invalid("path needs n >= 1".into()))?;
            (n, (1..n as Vertex).map(|i| (i - 1, i)).collect())
        }
        Model::Cycle { n } => {
            require(n >= 3, || invalid("cycle needs n >= 3".into()))?;
            (n, (0..n as Vertex).map(|i| (i, (i + 1) % n as Vertex)).collect())
        }
        Model::Star { n } => {
            require(n >= 1, || invalid("star needs n >= 1".into()))?;
            (n, (1..n as Vertex).map(|i| (0, i)).collect())
        }
        Model::Grid { rows, cols } => {
            require(rows >= 1 && cols >= 1, || invalid("grid needs rows, cols >= 1".into()))?;
            let id = |r: usize, c: usize| (r * cols + c) as Vertex;
            let mut pairs = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        pairs.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        pairs.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            (rows * cols, pairs)
        }
        Model::Gnm { n, m } => (n, gnm_pairs(n, m, spec.directed, &mut rng).map_err(invalid)?),
    };
    let edges: Vec<(Vertex, Vertex, Weight)> = pairs
        .into_iter()
        .map(|(u, v)| {
            let w = if spec.max_weight == 1 {
                1
            } else {
                rng.gen_range(1..=spec.max_weight)
            };
            (u, v, w)
        })
        .collect();
    Graph::from_edges(n, spec.directed, edges)
}

fn require(cond: bool, err: impl FnOnce() -> Error) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(err())
    }
}

/// Connected `G(n, m)`: a random spanning tree (undirected) or a random
/// Hamiltonian cycle (directed) first, then uniformly random extra edges.
fn gnm_pairs(
    n: usize,
    m: usize,
    directed: bool,
    rng: &mut ChaCha8Rng,
) -> std::result::Result<Vec<(Vertex, Vertex)>, String> {
    if n == 0 {
        return Err("gnm needs n >= 1".into());
    }
    let max_edges = if directed { n * (n - 1) } else { n * (n - 1) / 2 };
    let min_edges = match (directed, n) {
        (_, 1) => 0,
        (true, 2) => 2,
        (true, _) => n,
        (false, _) => n - 1,
    };
    if m < min_edges || m > max_edges {
        return Err(format!("m = {m} outside the feasible range [{min_edges}, {max_edges}]"));
    }
    let key = |u: Vertex, v: Vertex| if directed { (u, v) } else { (u.min(v), u.max(v)) };
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    order.shuffle(rng);
    let mut chosen: Vec<(Vertex, Vertex)> = Vec::with_capacity(m);
    let mut seen: HashSet<(Vertex, Vertex)> = HashSet::with_capacity(m);
    let mut push = |u: Vertex, v: Vertex, chosen: &mut Vec<_>| {
        if seen.insert(key(u, v)) {
            chosen.push((u, v));
        }
    };
    if n > 1 {
        if directed {
            for i in 0..n {
                push(order[i], order[(i + 1) % n], &mut chosen);
            }
        } else {
            for i in 1..n {
                let parent = order[rng.gen_range(0..i)];
                push(order[i], parent, &mut chosen);
            }
        }
    }
    if m - chosen.len() > (max_edges - chosen.len()) / 2 {
        // dense request: enumerate the remaining pairs and sample without replacement
        let mut rest = Vec::new();
        for u in 0..n as Vertex {
            for v in 0..n as Vertex {
                if u != v && (directed || u < v) && !seen.contains(&key(u, v)) {
                    rest.push((u, v));
                }
            }
        }
        rest.shuffle(rng);
        let need = m - chosen.len();
        chosen.extend(rest.into_iter().take(need));
    } else {
        while chosen.len() < m {
            let u = rng.gen_range(0..n as Vertex);
            let v = rng.gen_range(0..n as Vertex);
            if u != v {
                push(u, v, &mut chosen);
            }
        }
    }
    Ok(chosen)
}
