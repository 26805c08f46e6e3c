//! Deterministic hitting sets.
//!
//! [`greedy_hitting_set`] hits every set of a family with `O((n/L) log N)`
//! elements. [`early_hitting_set`] picks a set whose first hits in the rows of
//! a matrix come early, trading set size against the summed hit positions.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet};
use crate::shortest_paths::DUMMY;

/// A family of nonempty subsets of `0..universe`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    universe: usize,
    sets: Vec<Vec<Vertex>>,
}

impl SetFamily {
    /// Builds a family; duplicate elements inside a set are merged.
    pub fn new(universe: usize, sets: Vec<Vec<Vertex>>) -> Result<SetFamily> {
        let mut sets = sets;
        for set in &mut sets {
            set.sort_unstable();
            set.dedup();
            if let Some(&bad) = set.iter().find(|&&x| x as usize >= universe) {
                return Err(Error::InvalidParameter(format!(
                    "element {bad} outside universe of size {universe}"
                )));
            }
        }
        Ok(SetFamily { universe, sets })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Vec<Vertex>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Smallest set cardinality (`L`), 0 for an empty family.
    pub fn min_size(&self) -> usize {
        self.sets.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Number of distinct elements that occur in some set.
    pub fn support(&self) -> usize {
        self.sets.iter().flatten().collect::<HashSet<_>>().len()
    }
}

/// `⌈(n / L) · ln N⌉ + 1`, the size guarantee of the greedy hitting set.
pub fn greedy_bound(n: usize, min_size: usize, num_sets: usize) -> usize {
    if num_sets == 0 {
        return 0;
    }
    let value = n as f64 / min_size.max(1) as f64 * (num_sets as f64).ln();
    value.ceil() as usize + 1
}

/// Repeatedly takes the element that hits the most not-yet-hit sets (smallest
/// id on ties) until every set is hit.
pub fn greedy_hitting_set(family: &SetFamily) -> Result<VertexSet> {
    if let Some(i) = family.sets.iter().position(Vec::is_empty) {
        return Err(Error::EmptySet(i));
    }
    let n = family.universe;
    let mut count = vec![0usize; n];
    for &x in family.sets.iter().flatten() {
        count[x as usize] += 1;
    }
    let mut offsets = vec![0usize; n + 1];
    for x in 0..n {
        offsets[x + 1] = offsets[x] + count[x];
    }
    let mut fill = offsets.clone();
    let mut occ = vec![0usize; offsets[n]];
    for (i, set) in family.sets.iter().enumerate() {
        for &x in set {
            occ[fill[x as usize]] = i;
            fill[x as usize] += 1;
        }
    }

    let mut heap: BinaryHeap<(usize, Reverse<Vertex>)> = (0..n)
        .filter(|&x| count[x] > 0)
        .map(|x| (count[x], Reverse(x as Vertex)))
        .collect();
    let mut hit = vec![false; family.sets.len()];
    let mut remaining = family.sets.len();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let (c, Reverse(x)) = heap.pop().expect("every set is nonempty");
        if c != count[x as usize] || c == 0 {
            continue;
        }
        chosen.push(x);
        for &s in &occ[offsets[x as usize]..offsets[x as usize + 1]] {
            if hit[s] {
                continue;
            }
            hit[s] = true;
            remaining -= 1;
            for &y in &family.sets[s] {
                let cy = &mut count[y as usize];
                *cy -= 1;
                if *cy > 0 && y != x {
                    heap.push((*cy, Reverse(y)));
                }
            }
        }
    }
    Ok(VertexSet::from_iter(n, chosen))
}

/// An `rows × width` matrix over a declared element set, with a miss penalty
/// and an inclusion probability. Short rows are padded with [`DUMMY`].
///
/// The dummy counts as present in every evaluated set: a row whose real
/// entries all miss is hit at its first dummy cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitMatrix {
    rows: usize,
    width: usize,
    cells: Vec<Vertex>,
    elements: Vec<Vertex>,
    penalty: u64,
    p: Ratio<u64>,
}

impl HitMatrix {
    pub fn new(
        rows: &[Vec<Vertex>],
        width: usize,
        elements: Vec<Vertex>,
        penalty: u64,
        p: Ratio<u64>,
    ) -> Result<HitMatrix> {
        if p.is_zero() || p > Ratio::one() {
            return Err(Error::InvalidParameter(format!("probability {p} outside (0, 1]")));
        }
        let mut elements = elements;
        elements.sort_unstable();
        elements.dedup();
        if elements.binary_search(&DUMMY).is_ok() {
            return Err(Error::InvalidParameter("the dummy cannot be a declared element".into()));
        }
        let mut cells = Vec::with_capacity(rows.len() * width);
        for (i, row) in rows.iter().enumerate() {
            if row.len() > width {
                return Err(Error::InvalidParameter(format!("row {i} longer than width {width}")));
            }
            for &x in row {
                if x != DUMMY && elements.binary_search(&x).is_err() {
                    return Err(Error::InvalidParameter(format!("row {i} uses undeclared element {x}")));
                }
            }
            cells.extend_from_slice(row);
            cells.extend(std::iter::repeat_n(DUMMY, width - row.len()));
        }
        Ok(HitMatrix {
            rows: rows.len(),
            width,
            cells,
            elements,
            penalty,
            p,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn elements(&self) -> &[Vertex] {
        &self.elements
    }

    pub fn penalty(&self) -> u64 {
        self.penalty
    }

    pub fn probability(&self) -> Ratio<u64> {
        self.p
    }

    pub fn row(&self, i: usize) -> &[Vertex] {
        &self.cells[i * self.width..(i + 1) * self.width]
    }
}

fn row_hit(row: &[Vertex], penalty: u64, in_a: impl Fn(Vertex) -> bool) -> u64 {
    row.iter()
        .position(|&x| x == DUMMY || in_a(x))
        .map(|j| j as u64 + 1)
        .unwrap_or(row.len() as u64 + penalty)
}

/// `hit(M, A)`: summed 1-based index of each row's first entry in `A` (the
/// dummy always counts), or `width + P` for a row with no hit.
pub fn hit_sum(matrix: &HitMatrix, a: &[Vertex]) -> u64 {
    let set: HashSet<Vertex> = a.iter().copied().collect();
    (0..matrix.rows)
        .map(|i| row_hit(matrix.row(i), matrix.penalty, |x| set.contains(&x)))
        .sum()
}

fn big(r: Ratio<u64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// `(n / (p² s)) · |A| + hit(M, A)` in exact arithmetic.
pub fn potential_exact(matrix: &HitMatrix, a: &[Vertex]) -> BigRational {
    let hits = BigRational::from_integer(BigInt::from(hit_sum(matrix, a)));
    if a.is_empty() {
        return hits;
    }
    let p = big(matrix.p);
    let n = BigRational::from_integer(BigInt::from(matrix.rows));
    let s = BigRational::from_integer(BigInt::from(matrix.elements.len()));
    let size = BigRational::from_integer(BigInt::from(a.len()));
    n / (p.clone() * p * s) * size + hits
}

/// `3n/p + (1 - p)^width · P · n` in exact arithmetic.
pub fn potential_bound_exact(matrix: &HitMatrix) -> BigRational {
    let p = big(matrix.p);
    let n = BigRational::from_integer(BigInt::from(matrix.rows));
    let three = BigRational::from_integer(BigInt::from(3));
    let miss = num_traits::pow(BigRational::one() - p.clone(), matrix.width);
    let penalty = BigRational::from_integer(BigInt::from(matrix.penalty));
    three * n.clone() / p + miss * penalty * n
}

/// Per-row segment trees over survival probabilities. A node holds
/// `(prod, sum)` where `sum = Σ_j Π_{t<j} q_t` over its leaves; the
/// expected hit index of a row is `root.sum + P · root.prod`.
struct RowTrees {
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    nodes: Vec<(f64, f64)>,
}

impl RowTrees {
    fn combine(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
        (a.0 * b.0, a.1 + a.0 * b.1)
    }

    fn new(leaves_per_row: &[Vec<f64>]) -> RowTrees {
        let mut offsets = Vec::with_capacity(leaves_per_row.len());
        let mut sizes = Vec::with_capacity(leaves_per_row.len());
        let mut nodes = Vec::new();
        for leaves in leaves_per_row {
            let size = leaves.len().next_power_of_two().max(1);
            let base = nodes.len();
            offsets.push(base);
            sizes.push(size);
            nodes.resize(base + 2 * size, (1.0, 0.0));
            for (j, &q) in leaves.iter().enumerate() {
                nodes[base + size + j] = (q, 1.0);
            }
            for i in (1..size).rev() {
                nodes[base + i] = Self::combine(nodes[base + 2 * i], nodes[base + 2 * i + 1]);
            }
        }
        RowTrees { offsets, sizes, nodes }
    }

    fn set(&mut self, row: usize, leaf: usize, q: f64) {
        let base = self.offsets[row];
        let mut i = self.sizes[row] + leaf;
        self.nodes[base + i].0 = q;
        while i > 1 {
            i /= 2;
            self.nodes[base + i] = Self::combine(self.nodes[base + 2 * i], self.nodes[base + 2 * i + 1]);
        }
    }

    fn expected_hit(&self, row: usize, penalty: f64) -> f64 {
        let (prod, sum) = self.nodes[self.offsets[row] + 1];
        sum + penalty * prod
    }
}

/// Derandomises "include every element independently with probability `p`"
/// by conditional expectations, deciding elements in ascending id order.
///
/// The returned `A` satisfies `(n/(p² s))|A| + hit(M, A) ≤ 3n/p + (1-p)^ℓ P n`
/// because the expectation of the left side under the random process is at
/// most `2n/p + (1-p)^ℓ P n`, and no decision increases the conditional
/// expectation. For `p = 1` the process is deterministic and `A` is every
/// element.
pub fn early_hitting_set(matrix: &HitMatrix) -> Vec<Vertex> {
    let p = *matrix.p.numer() as f64 / *matrix.p.denom() as f64;
    if matrix.p == Ratio::one() {
        return matrix.elements.clone();
    }
    let s = matrix.elements.len();
    if s == 0 {
        return Vec::new();
    }
    let index: HashMap<Vertex, usize> = matrix.elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();

    // leaves: a row is cut after its first dummy; repeats of an element
    // already seen in the row survive with certainty
    let mut leaves_per_row = Vec::with_capacity(matrix.rows);
    let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); s];
    let mut seen = HashSet::new();
    for r in 0..matrix.rows {
        let mut leaves = Vec::new();
        seen.clear();
        for (j, &x) in matrix.row(r).iter().enumerate() {
            if x == DUMMY {
                leaves.push(0.0);
                break;
            }
            if seen.insert(x) {
                occurrences[index[&x]].push((r, j));
                leaves.push(1.0 - p);
            } else {
                leaves.push(1.0);
            }
        }
        leaves_per_row.push(leaves);
    }
    let mut trees = RowTrees::new(&leaves_per_row);
    let penalty = matrix.penalty as f64;
    let size_cost = matrix.rows as f64 / (p * p * s as f64);

    let mut chosen = Vec::new();
    for (e, &x) in matrix.elements.iter().enumerate() {
        let mut cost_in = size_cost;
        let mut cost_out = 0.0;
        for &(r, j) in &occurrences[e] {
            trees.set(r, j, 0.0);
            cost_in += trees.expected_hit(r, penalty);
            trees.set(r, j, 1.0);
            cost_out += trees.expected_hit(r, penalty);
        }
        let include = cost_in < cost_out;
        if include {
            chosen.push(x);
            for &(r, j) in &occurrences[e] {
                trees.set(r, j, 0.0);
            }
        }
    }
    chosen
}
