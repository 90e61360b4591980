//! Acceptance suite. Every test writes one `[PASS]`/`[FAIL]` line to
//! stderr (bypassing output capture) and asserts its verdict.

use std::collections::HashMap;
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use forest_lll::applications::*;
use forest_lll::criteria::*;
use forest_lll::experiment::{rows_to_csv, run_trials, SolverKind, TrialSettings};
use forest_lll::graph::SimpleGraph;
use forest_lll::model::{EventGraph, EventKind, Instance};
use forest_lll::solvers::{entropy_compression_with, partial_has_flaw, trial_rng};
use forest_lll::witness::{q_n_sequence, rho_bound_check, s_check, AdmissibleSequence};

const MASTER: u64 = 0x5eed_2024;

fn line(id: u32, name: &str, ok: bool, detail: &str) -> bool {
    let tag = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[{tag}] {id:>2} {name}: {detail}");
    ok
}

fn grid_k() -> usize {
    let delta = SimpleGraph::grid(6, 6).max_degree();
    let b = nonrepetitive_bounds(delta).unwrap();
    // (1 + b0) Δ² is the integer 48 for Δ = 4; guard against rounding up
    // an exact integer
    (b.pi_bound - 1e-9).ceil() as usize
}

fn grid_spec() -> NonrepetitiveSpec {
    NonrepetitiveSpec::new(SimpleGraph::grid(6, 6), grid_k(), 3).unwrap()
}

// ---------------------------------------------------------------- 1

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let m = rng.gen_range(4..10);
    let n = rng.gen_range(1..=15);
    let events = (0..n)
        .map(|_| {
            let size = rng.gen_range(2..=3.min(m - 1));
            let mut supp: Vec<usize> = Vec::new();
            while supp.len() < size {
                let x = rng.gen_range(0..m);
                if !supp.contains(&x) {
                    supp.push(x);
                }
            }
            (supp, EventKind::Monochromatic)
        })
        .collect();
    Instance::uniform(m, 3, events).unwrap()
}

// independent-set sum by subset bitmasks
fn xi_bitmask(e: usize, mu: &[f64], g: &EventGraph) -> f64 {
    let hood = g.closed_neighborhood(e);
    let mut total = 0.0;
    for mask in 0u32..(1 << hood.len()) {
        let set: Vec<usize> = (0..hood.len()).filter(|i| mask & (1 << i) != 0).map(|i| hood[i]).collect();
        let independent = set.iter().enumerate().all(|(i, &a)| set[i + 1..].iter().all(|&b| !g.adjacent(a, b)));
        if independent {
            total += set.iter().map(|&a| mu[a]).product::<f64>();
        }
    }
    total
}

#[test]
fn criterion_hierarchy_on_random_graphs() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER);
    let mut checked = 0;
    let mut bad = Vec::new();
    let tol = 1e-12;
    for i in 0..100 {
        let inst = random_instance(&mut rng);
        let mu: Vec<f64> = (0..inst.events().len()).map(|_| rng.gen_range(0.0..0.6)).collect();
        let w = WeightVector::new(mu.clone()).unwrap();
        let g = inst.natural_dependency_graph();
        for e in 0..inst.events().len() {
            let xi = xi_cell(e, &w, &g).unwrap();
            let oracle = xi_bitmask(e, &mu, &g);
            let cb = classical_bounds(e, &w, &g);
            let clique = xi_clique(e, &w, &inst);
            let ok = (xi - oracle).abs() <= tol * oracle
                && cb.kp >= cb.dobrushin * (1.0 - tol)
                && cb.dobrushin >= xi * (1.0 - tol)
                && clique >= xi * (1.0 - tol);
            if !ok {
                bad.push((i, e));
            }
            checked += 1;
        }
        let rep = check_cell(&inst, &w).unwrap();
        if rep.lll && !rep.cell {
            bad.push((i, usize::MAX));
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(5);
    line(1, "criterion hierarchy", ok, &format!("{checked} events on 100 instances, {} violations, {elapsed:.2?}", bad.len()));
    assert!(ok, "{bad:?}");
}

// ---------------------------------------------------------------- 2

// minimiser of 4k(ξ+1)/(ξ(k-ξ-1)²): 2ξ² + 3ξ - (k - 1) = 0
fn facial_oracle(k: f64) -> (f64, f64) {
    let x = ((8.0 * k + 1.0).sqrt() - 3.0) / 4.0;
    (4.0 * k * (x + 1.0) / (x * (k - x - 1.0).powi(2)), x)
}

#[test]
fn facial_thue_threshold() {
    let start = Instant::now();
    let r12 = min_ratio(&facial_thue_spectrum(12.0).unwrap());
    let r13 = min_ratio(&facial_thue_spectrum(13.0).unwrap());
    let r11 = min_ratio(&facial_thue_spectrum(11.0).unwrap());
    let elapsed = start.elapsed();
    let literal = (r12.rho - 1.0).abs() <= 1e-6 && (r12.xi_star - 3.0).abs() <= 1e-6 && r13.rho < 1.0;
    let (o12, x12) = facial_oracle(12.0);
    let (o11, _) = facial_oracle(11.0);
    let corrected = (r12.rho - o12).abs() < 1e-9
        && (r12.xi_star - x12).abs() < 1e-6
        && (r11.rho - o11).abs() < 1e-9
        && r12.verdict() == Verdict::Holds
        && r13.verdict() == Verdict::Holds
        && r11.verdict() == Verdict::Fails
        && elapsed < Duration::from_secs(1);
    line(
        2,
        "facial Thue threshold",
        literal,
        &format!(
            "k=12: rho={:.6} at xi*={:.6} (expected 1 at 3; phi(3)/3 = 1 is not the minimum); \
             k=13: rho={:.6}; k=11: rho={:.6}; threshold k=12 confirmed={corrected}; {elapsed:.2?}",
            r12.rho, r12.xi_star, r13.rho, r11.rho
        ),
    );
    assert!(corrected);
}

#[test]
#[ignore = "expects rho = 1 at xi* = 3 for k = 12; the true minimum is rho = 0.8814 at xi* = 1.7122"]
fn facial_thue_literal_boundary_values() {
    let r = min_ratio(&facial_thue_spectrum(12.0).unwrap());
    assert!((r.rho - 1.0).abs() <= 1e-6, "rho = {}", r.rho);
    assert!((r.xi_star - 3.0).abs() <= 1e-6, "xi* = {}", r.xi_star);
}

// ---------------------------------------------------------------- 3

#[test]
fn nonrepetitive_reproduction() {
    let mut ok = true;
    let mut worst_xi: f64 = 0.0;
    for b in [0.5, 1.0, 2.0] {
        for delta in [3usize, 4, 10] {
            let k = (1.0 + b) * (delta * delta) as f64;
            let r = min_ratio(&nonrepetitive_spectrum(delta, k).unwrap());
            let err = (r.xi_star - nonrepetitive_xi0(b)).abs();
            worst_xi = worst_xi.max(err);
            ok &= err < 1e-6;
        }
    }
    let mut worst_res: f64 = 0.0;
    for delta in [3usize, 4, 10, 100] {
        let nb = nonrepetitive_bounds(delta).unwrap();
        // residual recomputed from the defining expression
        let b = nb.b0;
        let lhs = (((8.0 * b + 9.0) as f64).powi(3).sqrt() + 8.0 * b * b + 36.0 * b + 27.0) / (8.0 * b.powi(3));
        let res = (lhs - delta as f64).abs();
        worst_res = worst_res.max(res);
        ok &= res < 1e-9;
    }
    let small: Vec<bool> = (3..=5)
        .map(|d| {
            let nb = nonrepetitive_bounds(d).unwrap();
            nb.pi_bound < nb.gmp_bound.unwrap()
        })
        .collect();
    ok &= small.iter().all(|&s| s);
    let crossover = (3..1000usize).find(|&d| {
        let nb = nonrepetitive_bounds(d).unwrap();
        nb.pi_bound >= nb.gmp_bound.unwrap()
    });
    line(
        3,
        "nonrepetitive reproduction",
        ok,
        &format!("max |xi*-xi0| {worst_xi:.1e}, max residual {worst_res:.1e}, (a)<(b) for Δ=3..5, first Δ with (a)>=(b): {crossover:?}"),
    );
    assert!(ok);
}

// ---------------------------------------------------------------- 4

// φ(ξ)/ξ for the two-term frugal spectrum, minimised on a log grid with
// golden refinement
fn frugal_ratio_oracle(delta: f64, beta: usize, k: f64) -> f64 {
    let fact: f64 = (1..=beta).map(|i| i as f64).product();
    let f = |ln_x: f64| {
        let x = ln_x.exp();
        (delta / k * (x + 1.0) + delta.powi(beta as i32 + 1) / (fact * k.powi(beta as i32)) * (x + 1.0).powi(beta as i32)) / x
    };
    let grid: Vec<f64> = (0..=4000).map(|i| -10.0 + 25.0 * i as f64 / 4000.0).collect();
    let (mut lo, mut hi) = {
        let i = (0..grid.len()).min_by(|&a, &b| f(grid[a]).total_cmp(&f(grid[b]))).unwrap();
        (grid[i.saturating_sub(1)], grid[(i + 1).min(grid.len() - 1)])
    };
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = hi - g * (hi - lo);
        let d = lo + g * (hi - lo);
        if f(c) < f(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    f(0.5 * (lo + hi))
}

#[test]
fn frugal_reproduction() {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, b) in [(10usize, 2usize), (20, 3), (50, 4)] {
        let fb = frugal_bound(d, b).unwrap();
        let closed = fb.closed_form.unwrap();
        let k = fb.generic_k.unwrap();
        let oracle_k = (1..).find(|&k| frugal_ratio_oracle(d as f64, b, k as f64) < 1.0).unwrap();
        ok &= k <= closed.ceil() as u64 && k == oracle_k;
        parts.push(format!("(Δ={d},β={b}) k={k} oracle={oracle_k} closed={closed:.2}"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(5);
    line(4, "frugal reproduction", ok, &format!("{}; {elapsed:.2?}", parts.join(", ")));
    assert!(ok);
}

// ---------------------------------------------------------------- 5

#[test]
fn forest_algorithm_on_grid() {
    let start = Instant::now();
    let spec = grid_spec();
    let inst = build_nonrepetitive_instance(&spec).unwrap();
    let mut settings = TrialSettings::new(SolverKind::Forest, 10_000, MASTER);
    settings.check_forests = true;
    let rows = run_trials(&inst, |c| verify_nonrepetitive(&spec, c), &settings).unwrap();
    let elapsed = start.elapsed();
    let m = inst.num_atoms() as u64;
    let all_done = rows.iter().all(|r| r.success);
    let all_verified = rows.iter().all(|r| r.verified);
    let forests = rows.iter().all(|r| r.forest_ok == Some(true));
    let phases = rows.iter().all(|r| r.phases <= m);
    let ok = all_done && all_verified && forests && phases && elapsed < Duration::from_secs(60);
    line(
        5,
        "Forest-Algorithm on 6x6 grid",
        ok,
        &format!(
            "k={} L_max=3, {} events, terminated={all_done} verified={all_verified} forests={forests} phases<=m={phases}, max steps {}, {elapsed:.2?}",
            spec.k,
            inst.events().len(),
            rows.iter().map(|r| r.steps).max().unwrap_or(0)
        ),
    );
    assert!(ok);
}

// ---------------------------------------------------------------- 6

#[test]
fn s_check_bound() {
    let start = Instant::now();
    let inst = Instance::uniform(3, 2, vec![(vec![0, 1], EventKind::Monochromatic), (vec![1, 2], EventKind::Monochromatic)])
        .unwrap();
    let seqs = vec![
        vec![(0, 0)],
        vec![(0, 0), (1, 1)],
        vec![(1, 0), (1, 1), (2, 1)],
        vec![(0, 0), (1, 0), (2, 1), (1, 1)],
    ];
    let trials = 100_000u64;
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, s) in seqs.into_iter().enumerate() {
        let seq = AdmissibleSequence::new(s, &inst).unwrap();
        let bound = seq.probability_bound(&inst);
        let passes = (0..trials).filter(|&t| s_check(&seq, &inst, &mut trial_rng(MASTER + i as u64, t))).count();
        let rate = passes as f64 / trials as f64;
        let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
        ok &= rate <= bound + 3.0 * sigma;
        parts.push(format!("{rate:.4}<={bound:.4}+3σ"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(10);
    line(6, "S-check bound", ok, &format!("{}; {elapsed:.2?}", parts.join(", ")));
    assert!(ok);
}

// ---------------------------------------------------------------- 7

fn catalan(n: u64) -> BigInt {
    // C(2n, n)/(n + 1)
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..n {
        num *= BigInt::from(2 * n - i);
        den *= BigInt::from(i + 1);
    }
    num / den / BigInt::from(n + 1)
}

// Q_n by summing over compositions of n-1 into s parts, memoised
fn q_oracle(w: &[(usize, f64)], n: usize, memo: &mut HashMap<usize, f64>) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if let Some(&v) = memo.get(&n) {
        return v;
    }
    fn comps(parts: usize, total: usize, w: &[(usize, f64)], memo: &mut HashMap<usize, f64>) -> f64 {
        if parts == 0 {
            return if total == 0 { 1.0 } else { 0.0 };
        }
        (0..=total).map(|first| q_oracle(w, first, memo) * comps(parts - 1, total - first, w, memo)).sum()
    }
    let v = w.iter().map(|&(s, ws)| ws * comps(s, n - 1, w, memo)).sum();
    memo.insert(n, v);
    v
}

#[test]
fn counting_oracle() {
    let w = BigRational::new(BigInt::from(1), BigInt::from(7));
    let q = q_n_sequence(&[(2, w.clone())], 15);
    let exact = (0..=15).all(|n| q[n] == BigRational::from_integer(catalan(n as u64)) * num_traits::pow(w.clone(), n));
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER ^ 7);
    let mut ok = exact;
    let mut parts = Vec::new();
    for _ in 0..3 {
        let mut weights: Vec<(usize, f64)> = Vec::new();
        for s in 1..=4 {
            if rng.gen_bool(0.7) {
                weights.push((s, rng.gen_range(0.05..1.0)));
            }
        }
        if weights.is_empty() {
            weights.push((2, 0.3));
        }
        // rescale so that rho lands at a random target below 1
        let rho0 = min_ratio(&PowerSpectrum::from_weights(weights.clone()).unwrap()).rho;
        let target = rng.gen_range(0.3..0.95);
        let weights: Vec<(usize, f64)> = weights.into_iter().map(|(s, x)| (s, x * target / rho0)).collect();
        let sp = PowerSpectrum::from_weights(weights.clone()).unwrap();
        let rep = rho_bound_check(&sp, 20).unwrap();
        let dp = q_n_sequence(&weights, 20);
        let mut memo = HashMap::new();
        let agree = (0..=20).all(|n| {
            let o = q_oracle(&weights, n, &mut memo);
            (dp[n] - o).abs() <= 1e-12 * o.max(1e-300)
        });
        let direct = (0..=20).all(|n| dp[n] <= rep.rho.powi(n as i32) * (1.0 + 1e-9));
        ok &= rep.holds && agree && direct && rep.rho < 1.0;
        parts.push(format!("rho={:.3} holds={} oracle={agree}", rep.rho, rep.holds && direct));
    }
    line(7, "counting oracle", ok, &format!("Catalan exact n<=15: {exact}; {}", parts.join(", ")));
    assert!(ok);
}

// ---------------------------------------------------------------- 8

#[test]
fn entropy_condition_equivalence() {
    let profiles: [&[(usize, f64)]; 5] =
        [&[(1, 1.0)], &[(1, 2.0), (2, 3.0)], &[(2, 4.0)], &[(1, 1.0), (3, 10.0)], &[(1, 3.0), (2, 5.0), (4, 20.0)]];
    let ks = [2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0];
    let mut disagreements = 0;
    let mut holds = 0;
    let mut count = 0;
    for p in profiles {
        for k in ks {
            let sp = PowerSpectrum::uniform(k, p.iter().copied()).unwrap();
            let mr = min_ratio(&sp);
            let en = check_entropy_condition(&sp, k).unwrap();
            let a = mr.verdict() == Verdict::Holds;
            let b = en.verdict == Verdict::Holds;
            // the substitution α = (ξ+1)/k turns φ(ξ) < ξ into (1 + D(α))/α < k
            let at_xi = en.lhs_at_alpha_from_xi;
            let c = at_xi < k;
            if a != b || (!mr.boundary && a != c) {
                disagreements += 1;
            }
            holds += usize::from(a);
            count += 1;
        }
    }
    let ok = disagreements == 0 && count == 50;
    line(8, "entropy/min-ratio equivalence", ok, &format!("{count} spectra, {holds} hold, {disagreements} disagreements"));
    assert!(ok);
}

// ---------------------------------------------------------------- 9

#[test]
fn entropy_compression_on_grid() {
    let start = Instant::now();
    let spec = grid_spec();
    let inst = build_nonrepetitive_instance(&spec).unwrap();
    let m = inst.num_atoms();
    let t = 50 * m;
    let mut successes = 0;
    let mut flawed = 0;
    let mut verified = 0;
    for trial in 0..1000 {
        let mut rng = trial_rng(MASTER, trial);
        let v: Vec<usize> = (0..t).map(|_| rng.gen_range(0..spec.k)).collect();
        let out = entropy_compression_with(&inst, &v, |w| {
            if partial_has_flaw(&inst, w) {
                flawed += 1;
            }
        })
        .unwrap();
        if let Some(c) = &out.config {
            successes += 1;
            verified += usize::from(verify_nonrepetitive(&spec, c));
        }
    }
    let elapsed = start.elapsed();
    let ok = successes == 1000 && verified == 1000 && flawed == 0;
    line(
        9,
        "entropy compression on 6x6 grid",
        ok,
        &format!("t=50m={t}, {successes}/1000 succeeded, {verified} verified, {flawed} flawed partial colorings, {elapsed:.2?}"),
    );
    assert!(ok);
}

// ---------------------------------------------------------------- 10

#[test]
fn determinism() {
    let spec = grid_spec();
    let inst = build_nonrepetitive_instance(&spec).unwrap();
    let mut same = true;
    for solver in [SolverKind::Mt, SolverKind::Forest, SolverKind::Ec] {
        let mut s = TrialSettings::new(solver, 1000, MASTER);
        s.check_forests = solver == SolverKind::Forest;
        let run = || rows_to_csv(&run_trials(&inst, |c| verify_nonrepetitive(&spec, c), &s).unwrap());
        same &= run() == run();
    }
    let small = Instance::uniform(5, 4, vec![(vec![0, 1], EventKind::Monochromatic), (vec![1, 2, 3, 4], EventKind::Repetitive)])
        .unwrap();
    let r1 = evaluate_instance(&small).unwrap().to_csv();
    let r2 = evaluate_instance(&small).unwrap().to_csv();
    same &= r1 == r2;
    line(10, "determinism", same, "solve CSVs (mt, forest, ec) and criterion CSV byte-identical across repeats");
    assert!(same);
}
