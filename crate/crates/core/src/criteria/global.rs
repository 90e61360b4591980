//! Spectrum-level criteria: the minimised ratio `phi(xi)/xi`, the entropy
//! compression condition, the global subset-gas condition and its
//! `q`-exponent form, and the step threshold derived from `rho`.
//!
//! All searches are deterministic bisections or golden-section scans with
//! fixed iteration budgets.

use crate::criteria::spectrum::PowerSpectrum;
use crate::criteria::{classify, Verdict};
use crate::error::{Error, Result};
use crate::model::Instance;

/// Upper search bound for `xi`.
pub const XI_MAX: f64 = 1e6;
/// Upper search bound for the subset-gas exponent `a`.
pub const A_MAX: f64 = 60.0;

const BISECT_ITERS: usize = 200;
const GOLDEN_ITERS: usize = 200;

/// Result of minimising `phi(xi)/xi` over `xi > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinRatio {
    pub rho: f64,
    pub xi_star: f64,
    /// The search hit its upper bound (or the series radius) before `h`
    /// changed sign: `rho` is the value at that bound and the true
    /// infimum is approached, not attained.
    pub boundary: bool,
    /// `h(xi*) = xi* phi'(xi*) - phi(xi*)`.
    pub residual: f64,
}

impl MinRatio {
    /// Strict `rho < 1`, with a boundary band of width [`crate::criteria::BOUNDARY_TOL`].
    pub fn verdict(&self) -> Verdict {
        classify(self.rho, 1.0)
    }
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    // f(lo) < 0 <= f(hi), f nondecreasing
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn upper_bound(radius: f64, cap: f64) -> f64 {
    if radius.is_finite() {
        cap.min(radius * (1.0 - 1e-12))
    } else {
        cap
    }
}

/// `min_{xi > 0} phi(xi)/xi` with the default bound [`XI_MAX`].
pub fn min_ratio(spectrum: &PowerSpectrum) -> MinRatio {
    min_ratio_with(spectrum, XI_MAX)
}

/// Minimises `phi(xi)/xi` by bisection on `h(xi) = xi phi'(xi) - phi(xi)`,
/// which is nondecreasing (`h' = xi phi'' >= 0`) and negative near 0.
pub fn min_ratio_with(spectrum: &PowerSpectrum, xi_max: f64) -> MinRatio {
    let hi = upper_bound(spectrum.radius(), xi_max);
    if spectrum.is_empty() {
        return MinRatio { rho: 0.0, xi_star: hi, boundary: true, residual: 0.0 };
    }
    if !(hi > 0.0) {
        return MinRatio { rho: f64::INFINITY, xi_star: 0.0, boundary: true, residual: f64::NAN };
    }
    let phi = |x: f64| spectrum.phi(x).expect("inside radius");
    let h = |x: f64| x * spectrum.phi_prime(x).expect("inside radius") - phi(x);
    if h(hi) < 0.0 {
        return MinRatio { rho: phi(hi) / hi, xi_star: hi, boundary: true, residual: h(hi) };
    }
    let lo = hi * 1e-300_f64.max(f64::MIN_POSITIVE);
    let xi = bisect(h, lo, hi);
    MinRatio { rho: phi(xi) / xi, xi_star: xi, boundary: false, residual: h(xi) }
}

/// Minimum of `(1 + Σ d_s α^s)/α` and the resulting verdict against `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyReport {
    pub verdict: Verdict,
    pub alpha: f64,
    pub lhs: f64,
    pub boundary: bool,
    /// `(xi* + 1)/k` from [`min_ratio`] on the same spectrum.
    pub alpha_from_xi: f64,
    /// LHS evaluated at `alpha_from_xi`.
    pub lhs_at_alpha_from_xi: f64,
}

/// Entropy-compression condition `(1 + Σ d_s α^s)/α < k` for some `α > 0`.
pub fn check_entropy_condition(spectrum: &PowerSpectrum, k: f64) -> Result<EntropyReport> {
    match spectrum.uniform_k() {
        Some(sk) if (sk - k).abs() <= 1e-12 * k => {}
        _ if spectrum.is_empty() => {}
        _ => return Err(Error::NonUniformSpectrum),
    }
    let lhs = |a: f64| (1.0 + spectrum.degree_series(a).expect("inside radius")) / a;
    // sign of L'(α) is that of g(α) = α D'(α) - D(α) - 1, nondecreasing
    let g = |a: f64| {
        a * spectrum.degree_series_prime(a).expect("inside radius") - spectrum.degree_series(a).expect("inside radius") - 1.0
    };
    let hi = upper_bound(spectrum.degree_radius(), (XI_MAX + 1.0) / k);
    let (alpha, boundary) = if g(hi) < 0.0 { (hi, true) } else { (bisect(g, hi * 1e-300, hi), false) };
    let value = lhs(alpha);
    let mr = min_ratio(spectrum);
    let alpha_from_xi = (mr.xi_star + 1.0) / k;
    let lhs_at_alpha_from_xi = if alpha_from_xi < spectrum.degree_radius() { lhs(alpha_from_xi) } else { f64::INFINITY };
    Ok(EntropyReport { verdict: classify(value, k), alpha, lhs: value, boundary, alpha_from_xi, lhs_at_alpha_from_xi })
}

/// `q`-exponent condition `(1 + Σ d_s α^s)^q / α <= k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NpsReport {
    pub verdict: Verdict,
    pub q: f64,
    pub alpha: f64,
    pub lhs: f64,
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Grid scan followed by golden-section refinement around the best cell.
fn scan_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cells: usize) -> f64 {
    let xs: Vec<f64> = (0..=cells).map(|i| lo + (hi - lo) * i as f64 / cells as f64).collect();
    let best = xs
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| f(**a).total_cmp(&f(**b)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let l = xs[best.saturating_sub(1)];
    let r = xs[(best + 1).min(cells)];
    let x = golden_min(&f, l, r);
    if f(x) <= f(xs[best]) {
        x
    } else {
        xs[best]
    }
}

pub fn check_nps(spectrum: &PowerSpectrum, k: f64, q: f64) -> Result<NpsReport> {
    match spectrum.uniform_k() {
        Some(sk) if (sk - k).abs() <= 1e-12 * k => {}
        _ if spectrum.is_empty() => {}
        _ => return Err(Error::NonUniformSpectrum),
    }
    // convex in t = ln α
    let hi = upper_bound(spectrum.degree_radius(), (XI_MAX + 1.0) / k).ln();
    let lo = (1e-12f64).ln().min(hi - 1.0);
    let f = |t: f64| q * (1.0 + spectrum.degree_series(t.exp()).expect("inside radius")).ln() - t;
    let t = scan_min(f, lo, hi, 400);
    let log_lhs = f(t);
    let lhs = log_lhs.exp();
    Ok(NpsReport { verdict: classify(lhs, k), q, alpha: t.exp(), lhs })
}

/// Global subset-gas condition
/// `sup_x Σ_{e ∋ x} Prob(e) e^{a|supp(e)|} <= e^a - 1` for some `a > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalCellReport {
    pub verdict: Verdict,
    pub a_star: f64,
    /// `LHS(a*) / (e^{a*} - 1)`.
    pub ratio: f64,
    /// `max |supp(e)| / ||e||`; 1 for an empty family.
    pub q: f64,
    /// The `q`-form for uniform families.
    pub nps: Option<NpsReport>,
    /// `Σ_e Prob(e) e^{a*|supp(e)|}` when the condition holds.
    pub expected_steps: Option<f64>,
}

fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = terms.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

fn ln_expm1(a: f64) -> f64 {
    a + (-(-a).exp()).ln_1p()
}

pub fn check_global_cell(instance: &Instance) -> GlobalCellReport {
    let probs: Vec<f64> = instance.events().iter().map(|e| e.probability(instance.domains())).collect();
    let q = instance
        .events()
        .iter()
        .map(|e| e.support().len() as f64 / e.power() as f64)
        .fold(1.0, f64::max);
    let nps = instance.uniform_k().and_then(|k| {
        let sp = PowerSpectrum::from_instance(instance);
        check_nps(&sp, k as f64, q).ok()
    });
    if instance.events().is_empty() {
        return GlobalCellReport { verdict: Verdict::Holds, a_star: 1.0, ratio: 0.0, q, nps, expected_steps: Some(0.0) };
    }
    // per atom: (ln Prob, |supp|) of its events
    let per_atom: Vec<Vec<(f64, f64)>> = (0..instance.num_atoms())
        .map(|x| {
            instance
                .events_containing(x)
                .iter()
                .map(|&e| (probs[e].ln(), instance.event(e).support().len() as f64))
                .collect()
        })
        .collect();
    let objective = |a: f64| {
        let lhs = per_atom
            .iter()
            .map(|evs| log_sum_exp(evs.iter().map(|(lp, n)| lp + a * n)))
            .fold(f64::NEG_INFINITY, f64::max);
        lhs - ln_expm1(a)
    };
    let a_star = scan_min(objective, 1e-6, A_MAX, 2000).max(1e-6);
    let log_ratio = objective(a_star);
    let ratio = log_ratio.exp();
    let verdict = classify(ratio, 1.0);
    let expected_steps = (verdict != Verdict::Fails).then(|| {
        probs
            .iter()
            .zip(instance.events())
            .map(|(p, e)| p * (a_star * e.support().len() as f64).exp())
            .sum()
    });
    GlobalCellReport { verdict, a_star, ratio, q, nps, expected_steps }
}

/// Global condition from a spectrum alone, using `|supp(e)| <= q ||e||`:
/// `Σ_s d_s p_s e^{a q s} <= e^a - 1`.
pub fn check_global_cell_spectrum(spectrum: &PowerSpectrum, q: f64) -> (Verdict, f64, f64) {
    if spectrum.is_empty() {
        return (Verdict::Holds, 1.0, 0.0);
    }
    let a_hi = match spectrum.tail() {
        Some(_) => {
            // e^{aq} (ξ+1 form) must stay inside the radius: e^{aq} < 1 + radius
            ((1.0 + spectrum.radius()).ln() / q * (1.0 - 1e-12)).min(A_MAX)
        }
        None => A_MAX,
    };
    if !(a_hi > 1e-6) {
        return (Verdict::Fails, 0.0, f64::INFINITY);
    }
    let objective = |a: f64| {
        let v = spectrum.phi((a * q).exp() - 1.0).expect("inside radius");
        v.ln() - ln_expm1(a)
    };
    let a = scan_min(objective, 1e-6, a_hi, 2000);
    let ratio = objective(a).exp();
    (classify(ratio, 1.0), a, ratio)
}

/// `N` and the expected-steps bound `T` derived from `rho`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct StepThreshold {
    pub n: u64,
    pub expected_steps: f64,
}

/// `N = ⌈(2m/|ln ρ|) ln²(2m/|ln ρ|)⌉` and
/// `T <= N(N+1)/2 + Σ_{n > N} n ρ^{n/2}`.
pub fn step_threshold(rho: f64, m: usize) -> Result<StepThreshold> {
    if !(rho < 1.0) {
        return Err(Error::CriterionNotSatisfied(rho));
    }
    if !(rho > 0.0) || m == 0 {
        return Err(Error::InvalidArgument(format!("need 0 < rho < 1 and m >= 1, got rho = {rho}, m = {m}")));
    }
    let c = 2.0 * m as f64 / rho.ln().abs();
    let raw = c * c.ln().powi(2);
    let n_f = (raw - 1e-12 * raw.abs()).ceil().max(0.0);
    let n = if n_f >= u64::MAX as f64 { u64::MAX } else { n_f as u64 };
    let r = rho.sqrt();
    let nf = n_f;
    // Σ_{n >= M} n r^n = r^M (M - (M - 1) r) / (1 - r)^2 with M = N + 1
    let tail = r.powf(nf + 1.0) * ((nf + 1.0) - nf * r) / (1.0 - r).powi(2);
    Ok(StepThreshold { n, expected_steps: nf * (nf + 1.0) / 2.0 + tail })
}
