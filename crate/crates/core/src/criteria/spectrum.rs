//! Power spectra `(E', p_s, d_s)` and the function
//! `phi(xi) = sum_s p_s d_s (xi + 1)^s` built on them.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::degree_profile;
use crate::model::Instance;

/// `p_s` and `d_s` at one power.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerTerm {
    pub p: f64,
    pub d: f64,
}

impl PowerTerm {
    pub fn weight(&self) -> f64 {
        self.p * self.d
    }
}

/// Closed-form description of an infinite run of powers `s >= start`:
///
/// `d_s = d_coeff * poly(s) * d_ratio^s` and `p_s = p_coeff * p_ratio^s`,
///
/// with `poly(s) = sum_j d_poly[j] * s^j`. Every family of the graph
/// applications fits this shape.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricTail {
    pub start: usize,
    pub d_coeff: f64,
    pub d_poly: Vec<f64>,
    pub d_ratio: f64,
    pub p_coeff: f64,
    pub p_ratio: f64,
}

impl GeometricTail {
    pub fn d(&self, s: usize) -> f64 {
        self.d_coeff * poly_at(&self.d_poly, s as f64) * self.d_ratio.powi(s as i32)
    }

    pub fn p(&self, s: usize) -> f64 {
        self.p_coeff * self.p_ratio.powi(s as i32)
    }

    // ratio of w_s = p_s d_s
    fn w_ratio(&self) -> f64 {
        self.d_ratio * self.p_ratio
    }
}

fn poly_at(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * s + a)
}

/// `sum_{s >= 1} s^j x^s` for `0 <= x < 1`, via Eulerian polynomials.
fn polylog_neg(j: usize, x: f64) -> f64 {
    // eulerian[i] = A(j, i)
    let mut eulerian = vec![1.0f64];
    for n in 1..=j {
        let mut next = vec![0.0; n];
        for i in 0..n {
            let keep = if i < eulerian.len() { (i + 1) as f64 * eulerian[i] } else { 0.0 };
            let shift = if i >= 1 && i - 1 < eulerian.len() { (n - i) as f64 * eulerian[i - 1] } else { 0.0 };
            next[i] = keep + shift;
        }
        eulerian = next;
    }
    let a = poly_at(&eulerian, x);
    x * a / (1.0 - x).powi(j as i32 + 1)
}

/// `sum_{s >= start} poly(s) x^s`.
fn tail_series(poly: &[f64], start: usize, x: f64) -> f64 {
    let full: f64 = poly.iter().enumerate().map(|(j, c)| c * polylog_neg(j, x)).sum();
    let head: f64 = (1..start).map(|s| poly_at(poly, s as f64) * x.powi(s as i32)).sum();
    full - head
}

fn shift_poly(poly: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(poly.len() + 1);
    v.push(0.0);
    v.extend_from_slice(poly);
    v
}

/// `E'_F` with `p_s`, `d_s`, optionally continued by a closed-form tail.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSpectrum {
    terms: BTreeMap<usize, PowerTerm>,
    tail: Option<GeometricTail>,
    uniform_k: Option<f64>,
}

impl PowerSpectrum {
    pub fn empty() -> Self {
        PowerSpectrum { terms: BTreeMap::new(), tail: None, uniform_k: None }
    }

    pub fn new(terms: BTreeMap<usize, PowerTerm>) -> Result<Self> {
        for (&s, t) in &terms {
            if s == 0 {
                return Err(Error::InvalidArgument("power 0 is not allowed".into()));
            }
            if !(t.p > 0.0 && t.p <= 1.0) || !(t.d >= 0.0 && t.d.is_finite()) {
                return Err(Error::InvalidArgument(format!("bad term at s = {s}: p = {}, d = {}", t.p, t.d)));
            }
        }
        Ok(PowerSpectrum { terms, tail: None, uniform_k: None })
    }

    /// Spectrum given directly by `w_s = p_s d_s` (stored as `p = w`, `d = 1`).
    pub fn from_weights<I: IntoIterator<Item = (usize, f64)>>(weights: I) -> Result<Self> {
        let terms = weights.into_iter().map(|(s, w)| (s, PowerTerm { p: w, d: 1.0 })).collect();
        PowerSpectrum::new(terms)
    }

    /// Uniform setting with `k` values per atom: `p_s = k^{-s}`.
    pub fn uniform<I: IntoIterator<Item = (usize, f64)>>(k: f64, degrees: I) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::InvalidArgument(format!("k must be positive, got {k}")));
        }
        let terms = degrees.into_iter().map(|(s, d)| (s, PowerTerm { p: k.powi(-(s as i32)), d })).collect();
        let mut sp = PowerSpectrum::new(terms)?;
        sp.uniform_k = Some(k);
        Ok(sp)
    }

    /// Exact spectrum of a finite family: `p_s` is the largest event
    /// probability at power `s` and `d_s` comes from exact counting.
    pub fn from_instance(instance: &Instance) -> Self {
        let mut p: BTreeMap<usize, f64> = BTreeMap::new();
        for ev in instance.events() {
            let pr = ev.probability(instance.domains());
            let e = p.entry(ev.power()).or_insert(0.0);
            *e = e.max(pr);
        }
        let d = degree_profile(instance);
        let terms: BTreeMap<usize, PowerTerm> = p
            .into_iter()
            .filter(|(_, pr)| *pr > 0.0)
            .map(|(s, pr)| (s, PowerTerm { p: pr, d: d[&s] as f64 }))
            .collect();
        let uniform_k = instance.uniform_k().map(|k| k as f64).filter(|&k| {
            terms.iter().all(|(&s, t)| ((t.p - k.powi(-(s as i32))) / t.p).abs() < 1e-12)
        });
        PowerSpectrum { terms, tail: None, uniform_k }
    }

    /// Appends a closed-form tail; finite terms must sit below `tail.start`.
    pub fn with_tail(mut self, tail: GeometricTail) -> Result<Self> {
        if tail.start == 0 {
            return Err(Error::InvalidArgument("tail must start at s >= 1".into()));
        }
        if let Some((&s, _)) = self.terms.iter().next_back() {
            if s >= tail.start {
                return Err(Error::InvalidArgument(format!("finite term s = {s} overlaps tail start {}", tail.start)));
            }
        }
        if !(tail.d_ratio > 0.0 && tail.p_ratio > 0.0 && tail.p_coeff > 0.0 && tail.d_coeff >= 0.0) {
            return Err(Error::InvalidArgument("tail ratios and coefficients must be positive".into()));
        }
        if let Some(k) = self.uniform_k {
            let uniform_tail = (tail.p_coeff - 1.0).abs() < 1e-12 && (tail.p_ratio * k - 1.0).abs() < 1e-12;
            if !uniform_tail {
                self.uniform_k = None;
            }
        }
        self.tail = Some(tail);
        Ok(self)
    }

    pub fn terms(&self) -> &BTreeMap<usize, PowerTerm> {
        &self.terms
    }

    pub fn tail(&self) -> Option<&GeometricTail> {
        self.tail.as_ref()
    }

    /// `k` when `p_s = k^{-s}` for every power.
    pub fn uniform_k(&self) -> Option<f64> {
        self.uniform_k
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.tail.is_none()
    }

    pub fn max_finite_power(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    /// `p_s` and `d_s` at power `s`, from the finite part or the tail.
    pub fn term(&self, s: usize) -> Option<PowerTerm> {
        if let Some(t) = self.terms.get(&s) {
            return Some(*t);
        }
        match &self.tail {
            Some(t) if s >= t.start => Some(PowerTerm { p: t.p(s), d: t.d(s) }),
            _ => None,
        }
    }

    /// `w_s = p_s d_s` for the finite powers.
    pub fn finite_weights(&self) -> BTreeMap<usize, f64> {
        self.terms.iter().map(|(&s, t)| (s, t.weight())).collect()
    }

    /// Supremum of `xi` for which `phi` converges.
    pub fn radius(&self) -> f64 {
        match &self.tail {
            Some(t) => 1.0 / t.w_ratio() - 1.0,
            None => f64::INFINITY,
        }
    }

    pub fn phi(&self, xi: f64) -> Result<f64> {
        self.check_radius(xi)?;
        let u = xi + 1.0;
        let mut v: f64 = self.terms.iter().map(|(&s, t)| t.weight() * u.powi(s as i32)).sum();
        if let Some(t) = &self.tail {
            v += t.p_coeff * t.d_coeff * tail_series(&t.d_poly, t.start, t.w_ratio() * u);
        }
        Ok(v)
    }

    pub fn phi_prime(&self, xi: f64) -> Result<f64> {
        self.check_radius(xi)?;
        let u = xi + 1.0;
        let mut v: f64 = self.terms.iter().map(|(&s, t)| s as f64 * t.weight() * u.powi(s as i32 - 1)).sum();
        if let Some(t) = &self.tail {
            v += t.p_coeff * t.d_coeff * tail_series(&shift_poly(&t.d_poly), t.start, t.w_ratio() * u) / u;
        }
        Ok(v)
    }

    fn check_radius(&self, xi: f64) -> Result<()> {
        let r = self.radius();
        if !(xi >= 0.0) || xi >= r {
            return Err(Error::SeriesDivergent { xi, radius: r });
        }
        Ok(())
    }

    /// Supremum of `alpha` for which `sum_s d_s alpha^s` converges.
    pub fn degree_radius(&self) -> f64 {
        match &self.tail {
            Some(t) => 1.0 / t.d_ratio,
            None => f64::INFINITY,
        }
    }

    /// `D(alpha) = sum_s d_s alpha^s`.
    pub fn degree_series(&self, alpha: f64) -> Result<f64> {
        self.check_degree_radius(alpha)?;
        let mut v: f64 = self.terms.iter().map(|(&s, t)| t.d * alpha.powi(s as i32)).sum();
        if let Some(t) = &self.tail {
            v += t.d_coeff * tail_series(&t.d_poly, t.start, t.d_ratio * alpha);
        }
        Ok(v)
    }

    /// `D'(alpha)`.
    pub fn degree_series_prime(&self, alpha: f64) -> Result<f64> {
        self.check_degree_radius(alpha)?;
        let mut v: f64 = self.terms.iter().map(|(&s, t)| s as f64 * t.d * alpha.powi(s as i32 - 1)).sum();
        if let Some(t) = &self.tail {
            v += t.d_coeff * tail_series(&shift_poly(&t.d_poly), t.start, t.d_ratio * alpha) / alpha;
        }
        Ok(v)
    }

    fn check_degree_radius(&self, alpha: f64) -> Result<()> {
        let r = self.degree_radius();
        if !(alpha > 0.0) || alpha >= r {
            return Err(Error::SeriesDivergent { xi: alpha, radius: r });
        }
        Ok(())
    }
}
