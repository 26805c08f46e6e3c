//! Acceptance suite: every criterion runs against the brute-force oracle and
//! prints one PASS/FAIL line. Exits non-zero if any criterion fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use diamdet::balls::{bounded_balls_clusters_set, invert_to_clusters, small_clusters_set};
use diamdet::cgr::cgr_sweep;
use diamdet::five_thirds::{dtilde_row, estimate_diameter_53, prepare};
use diamdet::generate::{generate, GenSpec, Model};
use diamdet::hitting::{early_hitting_set, greedy_hitting_set, HitMatrix, SetFamily};
use diamdet::oracle::{all_pairs, exact_balls, exact_metrics, ExactMetrics};
use diamdet::report::{run_estimator, Algo, Params};
use diamdet::shortest_paths::{q_nearest, DUMMY};
use diamdet::three_halves::estimate_diameter_32;
use diamdet::{Direction, Graph, Vertex, VertexSet, Weight};

const CAP: usize = 100;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- instances

fn weight(rng: &mut ChaCha8Rng, max_w: Weight) -> Weight {
    rng.gen_range(1..=max_w)
}

/// Path backbone in random order with a few random chords: long, thin
/// graphs with large diameter.
fn backbone(rng: &mut ChaCha8Rng, n: usize, chords: usize, max_w: Weight) -> Graph {
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    order.shuffle(rng);
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for pair in order.windows(2) {
        seen.insert((pair[0].min(pair[1]), pair[0].max(pair[1])));
        edges.push((pair[0], pair[1], weight(rng, max_w)));
    }
    for _ in 0..chords {
        let (u, v) = (rng.gen_range(0..n as Vertex), rng.gen_range(0..n as Vertex));
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v, weight(rng, max_w)));
        }
    }
    Graph::from_edges(n, false, edges).unwrap()
}

fn gnm(n: usize, m: usize, max_w: Weight, directed: bool, seed: u64) -> Graph {
    let mut spec = GenSpec::new(Model::Gnm { n, m }, seed).weighted(max_w);
    if directed {
        spec = spec.directed();
    }
    generate(&spec).unwrap()
}

/// A random connected undirected graph with `2 ≤ n ≤ n_max`.
fn undirected(rng: &mut ChaCha8Rng, n_max: usize, max_w: Weight) -> Graph {
    let n = rng.gen_range(2..=n_max);
    let max_w = if max_w == 1 { 1 } else { rng.gen_range(1..=max_w) };
    let seed = rng.gen();
    match rng.gen_range(0..10) {
        0..=4 => {
            let max_m = n * (n - 1) / 2;
            let m = rng.gen_range(n - 1..=max_m.min(4 * n));
            gnm(n, m, max_w, false, seed)
        }
        5..=7 => {
            let chords = rng.gen_range(0..=n / 3);
            backbone(rng, n, chords, max_w)
        }
        8 if n >= 3 => generate(&GenSpec::new(Model::Cycle { n }, seed).weighted(max_w)).unwrap(),
        _ => {
            let rows = rng.gen_range(1..=n.min(8));
            let cols = (n / rows).max(1);
            generate(&GenSpec::new(Model::Grid { rows, cols }, seed).weighted(max_w)).unwrap()
        }
    }
}

/// A random strongly connected digraph with `3 ≤ n ≤ n_max`.
fn directed(rng: &mut ChaCha8Rng, n_max: usize, max_w: Weight) -> Graph {
    let n = rng.gen_range(3..=n_max);
    let m = rng.gen_range(n..=(n * (n - 1)).min(4 * n));
    gnm(n, m, max_w, true, rng.gen())
}

fn witness_check(exact: &ExactMetrics, pair: (Vertex, Vertex), estimate: u64) -> Result<(), String> {
    let d = exact.matrix.get(pair.0, pair.1);
    ensure(d >= estimate, || format!("witness {pair:?} has d = {d} < D̃ = {estimate}"))
}

// ---------------------------------------------------------------- criteria

fn c1_cgr() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut runs = 0;
    for i in 0..300 {
        let g = undirected(&mut rng, 60, 10);
        let exact = exact_metrics(&g, CAP).unwrap();
        let (d, m) = (exact.diameter as i128, g.max_weight() as i128);
        for k in [2usize, 3, 4] {
            let r = cgr_sweep(&g, k, None).map_err(|e| e.to_string())?;
            let (dt, p) = (r.diameter as i128, 1i128 << (k - 1));
            ensure(dt <= d, || format!("instance {i}, k = {k}: D̃ = {dt} > D = {d}"))?;
            ensure((2 * p - 1) * dt >= p * d - (p - 1) * m, || {
                format!("instance {i}, k = {k}: D̃ = {dt}, D = {d}, M = {m}")
            })?;
            witness_check(&exact, r.diameter_pair, r.diameter)?;
            runs += 1;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!("{runs} runs, 0 failures, {:.1} s", took.as_secs_f64()))
}

fn c2_radius_ecc() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut vertices = 0;
    for i in 0..300 {
        let g = undirected(&mut rng, 60, 10);
        let exact = exact_metrics(&g, CAP).unwrap();
        let (r, m) = (exact.radius as i128, g.max_weight() as i128);
        for k in [2usize, 3, 4] {
            let rep = cgr_sweep(&g, k, None).map_err(|e| e.to_string())?;
            let (rt, p) = (rep.radius as i128, 1i128 << (k - 1));
            ensure(rt >= r, || format!("instance {i}, k = {k}: R̃ = {rt} < R = {r}"))?;
            ensure(p * rt <= (2 * p - 1) * r + (p - 1) * m, || {
                format!("instance {i}, k = {k}: R̃ = {rt}, R = {r}, M = {m}")
            })?;
            let truth = exact.eccentricities[rep.center as usize] as i128;
            ensure(truth <= rt, || format!("instance {i}: center ecc {truth} > R̃ {rt}"))?;
            for (w, (&et, &e)) in rep.eccentricities.iter().zip(&exact.eccentricities).enumerate() {
                let (et, e) = (et as i128, e as i128);
                ensure(et <= e, || format!("instance {i}, k = {k}, w = {w}: ε̃ = {et} > ε = {e}"))?;
                ensure((3 * p - 1) * et >= (p + 1) * e - (2 * p - 2) * m, || {
                    format!("instance {i}, k = {k}, w = {w}: ε̃ = {et}, ε = {e}, M = {m}")
                })?;
                vertices += 1;
            }
        }
    }
    Ok(format!("900 runs, {vertices} eccentricities, 0 failures"))
}

fn c3_three_halves() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut heavy = 0;
    for i in 0..300 {
        let g = directed(&mut rng, 50, 10);
        let exact = exact_metrics(&g, CAP).unwrap();
        let r = estimate_diameter_32(&g, None).map_err(|e| e.to_string())?;
        let (dt, d) = (r.diameter as i128, exact.diameter as i128);
        ensure(dt <= d, || format!("instance {i}: D̃ = {dt} > D = {d}"))?;
        ensure(3 * dt >= 2 * d, || format!("instance {i}: 3·{dt} < 2·{d}"))?;
        witness_check(&exact, r.diameter_pair, r.diameter)?;
        heavy += usize::from(g.max_weight() == 10);
    }
    Ok(format!("300 digraphs ({heavy} with max weight 10), 0 failures"))
}

fn c4_five_thirds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut with_t = 0;
    for i in 0..300 {
        let g = undirected(&mut rng, 60, 1);
        let exact = exact_metrics(&g, CAP).unwrap();
        let r = estimate_diameter_53(&g, None, None).map_err(|e| e.to_string())?;
        let (dt, d) = (r.diameter as i128, exact.diameter as i128);
        ensure(dt <= d, || format!("instance {i}: D̃ = {dt} > D = {d}"))?;
        ensure(15 * dt >= 9 * d - 18.max(25 - d), || format!("instance {i}: D̃ = {dt}, D = {d}"))?;
        witness_check(&exact, r.diameter_pair, r.diameter)?;
        with_t += usize::from(r.t_size > 0);
    }
    Ok(format!("300 graphs ({with_t} with non-empty T), 0 failures"))
}

fn c5_distance_estimate() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut pairs, mut computed, mut nontrivial) = (0usize, 0usize, 0usize);
    for i in 0..100 {
        let g = undirected(&mut rng, 60, 1);
        let n = g.n();
        // large ℓ makes S1 sparse, so T's S1-balls span several vertices
        let ell = [None, Some(rng.gen_range(n / 4..=n).max(1)), Some(n)][i % 3];
        let big_l = [Some(2), None, Some(rng.gen_range(1..=6))][(i / 3) % 3];
        let prep = prepare(&g, ell, big_l).map_err(|e| e.to_string())?;
        let dist = all_pairs(&g, CAP).unwrap();
        nontrivial += usize::from(prep.h.tree_edges > 0);
        // every source, not only S2: the bound holds for all pairs
        for x in g.vertices() {
            for (v, est) in dtilde_row(&prep.h, x, &prep.to_s1).into_iter().enumerate() {
                if let Some(est) = est {
                    let d = dist.get(x, v as Vertex) as i64;
                    ensure(est <= d, || format!("instance {i}: d̃({x}, {v}) = {est} > d = {d}"))?;
                    pairs += 1;
                    computed += usize::from(prep.s2.contains(x));
                }
            }
        }
    }
    Ok(format!(
        "{pairs} pairs ({computed} from S2), {nontrivial} instances with spanner trees, 0 failures"
    ))
}

fn lemma41_bound(n: usize, ell: usize) -> f64 {
    let (nf, lf) = (n as f64, ell as f64);
    let log2 = (nf.log2() - 1e-12).ceil().max(0.0);
    (nf / lf * nf.ln()).ceil() + 1.0 + log2 * (24.0 * nf / lf + 1.0)
}

/// Checks `|B| ≤ ℓ` and `|C| ≤ ℓ` for `s` in direction `dir` against the oracle.
fn balls_and_clusters_small(g: &Graph, s: &VertexSet, dir: Direction, ell: usize) -> Result<(), String> {
    let balls = exact_balls(g, s, dir, CAP).unwrap();
    let clusters = invert_to_clusters(&balls);
    ensure(balls.max_size() <= ell, || format!("{dir:?} ball of size {} > ℓ = {ell}", balls.max_size()))?;
    ensure(clusters.max_size() <= ell, || {
        format!("{dir:?} cluster of size {} > ℓ = {ell}", clusters.max_size())
    })
}

fn c6_small_clusters() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (mut runs, mut iterations) = (0, 0);
    for i in 0..100 {
        let g = if i % 2 == 0 { undirected(&mut rng, 60, 10) } else { directed(&mut rng, 50, 10) };
        let n = g.n();
        let all = VertexSet::full(n);
        let root = (n as f64).sqrt().ceil() as usize;
        let dirs: &[Direction] = if g.is_directed() { &[Direction::Forward, Direction::Reverse] } else { &[Direction::Forward] };
        for ell in [2.min(n), root, n] {
            for &dir in dirs {
                let near = q_nearest(&g, &all, ell, dir).unwrap();
                let sc = small_clusters_set(&near).map_err(|e| format!("instance {i}: {e}"))?;
                balls_and_clusters_small(&g, &sc.set, dir, ell).map_err(|e| format!("instance {i}: {e}"))?;
                let bound = lemma41_bound(n, ell);
                ensure(sc.set.len() as f64 <= bound, || {
                    format!("instance {i}, ℓ = {ell}: |A*| = {} > {bound}", sc.set.len())
                })?;
                for w in sc.oversized.windows(2) {
                    ensure(2 * w[1] < w[0], || format!("instance {i}, ℓ = {ell}: |W| went {} -> {}", w[0], w[1]))?;
                }
                iterations += sc.oversized.len();
                runs += 1;
            }
        }
    }
    // weighted random trees at ℓ = 32 push |W|ℓ past 8n, exercising the
    // early hitting set rounds that the small instances above never reach
    let mut early = 0;
    for seed in 0..120 {
        let g = gnm(100, 99, 10, false, seed);
        let ell = 32;
        let near = q_nearest(&g, &VertexSet::full(100), ell, Direction::Forward).unwrap();
        let sc = small_clusters_set(&near).map_err(|e| format!("tree {seed}: {e}"))?;
        balls_and_clusters_small(&g, &sc.set, Direction::Forward, ell).map_err(|e| format!("tree {seed}: {e}"))?;
        ensure(sc.set.len() as f64 <= lemma41_bound(100, ell), || format!("tree {seed}: |A*| = {}", sc.set.len()))?;
        for w in sc.oversized.windows(2) {
            ensure(2 * w[1] < w[0], || format!("tree {seed}: |W| went {} -> {}", w[0], w[1]))?;
        }
        early += sc.oversized.iter().filter(|&&w| w * ell > 800).count();
    }
    ensure(early > 0, || "no early hitting set round was exercised".into())?;
    Ok(format!(
        "{runs} runs, {iterations} reduction rounds, plus 120 weighted trees with {early} early-hitting rounds, 0 failures"
    ))
}

fn exact_potential(rows: &[Vec<Vertex>], width: usize, s: usize, penalty: u64, p: Ratio<u64>, a: &[Vertex]) -> BigRational {
    let int = |x: u64| BigRational::from_integer(BigInt::from(x));
    let chosen: HashSet<Vertex> = a.iter().copied().collect();
    let mut hits = 0u64;
    for row in rows {
        let mut padded = row.clone();
        padded.resize(width, DUMMY);
        hits += padded
            .iter()
            .position(|x| *x == DUMMY || chosen.contains(x))
            .map_or(width as u64 + penalty, |j| j as u64 + 1);
    }
    let p = BigRational::new(BigInt::from(*p.numer()), BigInt::from(*p.denom()));
    let n = int(rows.len() as u64);
    int(a.len() as u64) * n / (p.clone() * p * int(s as u64)) + int(hits)
}

fn exact_bound(n: usize, width: usize, penalty: u64, p: Ratio<u64>) -> BigRational {
    let int = |x: u64| BigRational::from_integer(BigInt::from(x));
    let p = BigRational::new(BigInt::from(*p.numer()), BigInt::from(*p.denom()));
    let mut miss = BigRational::one();
    for _ in 0..width {
        miss *= BigRational::one() - p.clone();
    }
    int(3 * n as u64) / p + miss * int(penalty) * int(n as u64)
}

fn c7_early_hitting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut combos = HashSet::new();
    for i in 0..200 {
        let kind = i % 3;
        let penalty = [0u64, 5][(i / 3) % 2];
        let width = rng.gen_range(2..=12);
        let s = rng.gen_range(4..=40);
        let rows_n = if kind == 2 { rng.gen_range(1..=(s * width / 8).max(1)) } else { rng.gen_range(1..=40) };
        let p = match kind {
            0 => Ratio::new(1, 4),
            1 => Ratio::new(1, 2),
            _ => Ratio::new(8 * rows_n as u64, (s * width) as u64),
        };
        let universe: Vec<Vertex> = (0..s as Vertex).map(|x| x * 3 + 1).collect();
        let rows: Vec<Vec<Vertex>> = (0..rows_n)
            .map(|_| {
                let len = rng.gen_range(0..=width.min(s));
                universe.choose_multiple(&mut rng, len).copied().collect()
            })
            .collect();
        let matrix = HitMatrix::new(&rows, width, universe.clone(), penalty, p).map_err(|e| e.to_string())?;
        let a = early_hitting_set(&matrix);
        ensure(a.iter().all(|x| universe.contains(x)), || format!("matrix {i}: foreign element"))?;
        let lhs = exact_potential(&rows, width, s, penalty, p, &a);
        let rhs = exact_bound(rows_n, width, penalty, p);
        ensure(lhs <= rhs, || format!("matrix {i}: potential {lhs} > bound {rhs} (p = {p}, P = {penalty})"))?;
        combos.insert((kind, penalty));
    }
    ensure(combos.len() == 6, || "not every (P, p) combination was drawn".into())?;
    Ok("200 matrices over P ∈ {0, 5} × three choices of p, 0 failures".into())
}

fn c8_bounded_set() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for i in 0..100 {
        let g = directed(&mut rng, 50, 10);
        let n = g.n();
        let ell = match i % 4 {
            0 => 2,
            1 => (n as f64).sqrt().ceil() as usize,
            2 => n,
            _ => rng.gen_range(1..=n),
        };
        let b = bounded_balls_clusters_set(&g, ell).map_err(|e| e.to_string())?;
        for dir in [Direction::Forward, Direction::Reverse] {
            balls_and_clusters_small(&g, &b.set, dir, ell).map_err(|e| format!("instance {i}, ℓ = {ell}: {e}"))?;
        }
        let bound = 2.0 * lemma41_bound(n, ell);
        ensure(b.set.len() as f64 <= bound, || format!("instance {i}: |S| = {} > {bound}", b.set.len()))?;
    }
    Ok("100 digraphs, all four bounds and the size bound hold".into())
}

fn c9_greedy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for i in 0..200 {
        let n = rng.gen_range(1..=200);
        let min_size = rng.gen_range(1..=n);
        let count = rng.gen_range(0..=300);
        let universe: Vec<Vertex> = (0..n as Vertex).collect();
        let sets: Vec<Vec<Vertex>> = (0..count)
            .map(|_| {
                let len = rng.gen_range(min_size..=n.min(min_size + 10));
                universe.choose_multiple(&mut rng, len).copied().collect()
            })
            .collect();
        let family = SetFamily::new(n, sets.clone()).map_err(|e| e.to_string())?;
        let h = greedy_hitting_set(&family).map_err(|e| e.to_string())?;
        for (j, set) in sets.iter().enumerate() {
            ensure(set.iter().any(|&x| h.contains(x)), || format!("family {i}: set {j} missed"))?;
        }
        let bound = if count == 0 { 0.0 } else { (n as f64 / min_size as f64 * (count as f64).ln()).ceil() + 1.0 };
        ensure(h.len() as f64 <= bound, || format!("family {i}: |H| = {} > {bound}", h.len()))?;
    }
    Ok("200 families, 0 failures".into())
}

fn c10_determinism() -> Outcome {
    let cases: Vec<(Algo, Graph, Params)> = vec![
        (Algo::Cgr, gnm(300, 900, 10, false, 1), Params { k: Some(3), ..Params::default() }),
        (Algo::Cgr, gnm(200, 199, 1, false, 2), Params { k: Some(2), ..Params::default() }),
        (Algo::RadiusEcc, gnm(300, 900, 10, false, 3), Params { k: Some(4), ..Params::default() }),
        (Algo::ThreeHalves, gnm(300, 1200, 10, true, 4), Params::default()),
        (Algo::ThreeHalves, gnm(300, 900, 1, false, 5), Params::default()),
        (Algo::FiveThirds, gnm(300, 1500, 1, false, 6), Params::default()),
        (Algo::FiveThirds, gnm(300, 1500, 1, false, 7), Params { ell: Some(4), big_l: Some(3), ..Params::default() }),
        (Algo::Exact, gnm(150, 400, 7, true, 8), Params::default()),
    ];
    for (algo, g, params) in &cases {
        let mut outputs = Vec::new();
        for workers in [1, 4] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap();
            for _ in 0..3 {
                let r = pool.install(|| run_estimator(g, *algo, params)).map_err(|e| e.to_string())?;
                outputs.push(r.to_json_stable());
            }
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{algo}: outputs differ"))?;
    }
    Ok(format!("{} configurations × 3 runs × workers {{1, 4}} identical", cases.len()))
}

fn c11_runtime() -> Outcome {
    let g = gnm(20000, 100000, 1, false, 1);
    let t = Instant::now();
    let r = cgr_sweep(&g, 3, None).map_err(|e| e.to_string())?;
    let cgr = t.elapsed();
    let t = Instant::now();
    let h = estimate_diameter_32(&g, None).map_err(|e| e.to_string())?;
    let halves = t.elapsed();
    ensure(cgr < Duration::from_secs(30), || format!("cgr took {cgr:?}"))?;
    ensure(halves < Duration::from_secs(120), || format!("three-halves took {halves:?}"))?;
    Ok(format!(
        "cgr k = 3: {:.1} s (D̃ = {}), three-halves: {:.1} s (D̃ = {})",
        cgr.as_secs_f64(),
        r.diameter,
        halves.as_secs_f64(),
        h.diameter
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("cgr diameter guarantee", c1_cgr),
        ("radius and eccentricity guarantees", c2_radius_ecc),
        ("three-halves guarantee on weighted digraphs", c3_three_halves),
        ("five-thirds guarantee", c4_five_thirds),
        ("distance estimate never exceeds the distance", c5_distance_estimate),
        ("small balls and clusters", c6_small_clusters),
        ("early hitting set potential", c7_early_hitting),
        ("bounded balls and clusters in both directions", c8_bounded_set),
        ("greedy hitting set", c9_greedy),
        ("determinism across runs and worker counts", c10_determinism),
        ("runtime smoke on gnm(20000, 100000)", c11_runtime),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

