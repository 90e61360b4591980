//! Local-lemma convergence criteria.
//!
//! [`local`] holds the per-event conditions on a dependency graph,
//! [`spectrum`] the power spectrum and `phi`, and [`global`] the searches
//! over `xi`, `α` and `a`. [`CriterionReport`] collects them.

pub mod global;
pub mod local;
pub mod spectrum;

use std::fmt::Write as _;

use serde::Serialize;

pub use global::{
    check_entropy_condition, check_global_cell, check_global_cell_spectrum, check_nps, min_ratio, min_ratio_with,
    step_threshold, EntropyReport, GlobalCellReport, MinRatio, NpsReport, StepThreshold, XI_MAX,
};
pub use local::{
    check_cell, classical_bounds, xi_cell, xi_clique, CellEntry, CellReport, ClassicalBounds, WeightVector, XiSource,
    NEIGHBORHOOD_CAP,
};
pub use spectrum::{GeometricTail, PowerSpectrum, PowerTerm};

use crate::model::Instance;

/// Width of the band around a threshold in which a verdict is `Boundary`.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Boundary,
    Fails,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Boundary => "boundary",
            Verdict::Fails => "fails",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `value < threshold`, with values within `BOUNDARY_TOL * max(1, |threshold|)`
/// of the threshold classified as `Boundary`.
pub fn classify(value: f64, threshold: f64) -> Verdict {
    let band = BOUNDARY_TOL * threshold.abs().max(1.0);
    if value.is_nan() {
        Verdict::Fails
    } else if (value - threshold).abs() <= band {
        Verdict::Boundary
    } else if value < threshold {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

/// One line of a [`CriterionReport`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionLine {
    pub name: String,
    pub verdict: Verdict,
    /// Named witness parameters, in a fixed order per criterion.
    pub witnesses: Vec<(String, f64)>,
    pub note: Option<String>,
}

impl CriterionLine {
    fn new(name: &str, verdict: Verdict, witnesses: &[(&str, f64)]) -> Self {
        CriterionLine {
            name: name.into(),
            verdict,
            witnesses: witnesses.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn witness(&self, key: &str) -> Option<f64> {
        self.witnesses.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub lines: Vec<CriterionLine>,
    pub rho: Option<f64>,
    pub xi_star: Option<f64>,
    /// Present only when `rho < 1`.
    pub step_threshold: Option<StepThreshold>,
}

fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.12e}")
    } else {
        format!("{v}")
    }
}

impl CriterionReport {
    pub fn line(&self, name: &str) -> Option<&CriterionLine> {
        self.lines.iter().find(|l| l.name == name)
    }

    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        self.line(name).map(|l| l.verdict)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let _ = write!(out, "{:<12} {:<8}", l.name, l.verdict.as_str());
            for (k, v) in &l.witnesses {
                let _ = write!(out, " {k}={}", fmt_num(*v));
            }
            if let Some(n) = &l.note {
                let _ = write!(out, "  # {n}");
            }
            out.push('\n');
        }
        match (&self.rho, &self.xi_star) {
            (Some(r), Some(x)) => {
                let _ = writeln!(out, "rho {} at xi* {}", fmt_num(*r), fmt_num(*x));
            }
            _ => out.push_str("rho n/a\n"),
        }
        match &self.step_threshold {
            Some(t) => {
                let _ = writeln!(out, "step threshold N {} expected steps <= {}", t.n, fmt_num(t.expected_steps));
            }
            None => out.push_str("step threshold N inf\n"),
        }
        out
    }

    /// `criterion,verdict,witnesses,tolerance,note`; witnesses as `k=v;k=v`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("criterion,verdict,witnesses,tolerance,note\n");
        for l in &self.lines {
            let w: Vec<String> = l.witnesses.iter().map(|(k, v)| format!("{k}={}", fmt_num(*v))).collect();
            let _ = writeln!(
                out,
                "{},{},{},{:e},{}",
                l.name,
                l.verdict,
                w.join(";"),
                BOUNDARY_TOL,
                l.note.as_deref().unwrap_or("").replace(',', ";")
            );
        }
        out
    }
}

fn ratio_lines(spectrum: &PowerSpectrum, m: usize, lines: &mut Vec<CriterionLine>) -> (Option<f64>, Option<f64>, Option<StepThreshold>) {
    if spectrum.is_empty() {
        lines.push(CriterionLine::new("min-ratio", Verdict::Holds, &[("rho", 0.0)]).with_note("empty spectrum"));
        return (Some(0.0), None, None);
    }
    let mr = min_ratio(spectrum);
    let mut line = CriterionLine::new("min-ratio", mr.verdict(), &[("rho", mr.rho), ("xi", mr.xi_star)]);
    if mr.boundary {
        line = line.with_note("infimum at search bound");
    }
    lines.push(line);
    if let Some(k) = spectrum.uniform_k() {
        if let Ok(e) = check_entropy_condition(spectrum, k) {
            let mut l = CriterionLine::new("entropy", e.verdict, &[("alpha", e.alpha), ("lhs", e.lhs), ("k", k)]);
            if e.boundary {
                l = l.with_note("infimum at search bound");
            }
            lines.push(l);
        }
    }
    let st = step_threshold(mr.rho, m.max(1)).ok().filter(|_| mr.verdict() == Verdict::Holds);
    (Some(mr.rho), Some(mr.xi_star), st)
}

/// Every criterion applicable to a finite instance.
///
/// The per-event conditions use `μ_e = Prob(e) e^{a |supp(e)|}` with `a`
/// from the global search.
pub fn evaluate_instance(instance: &Instance) -> crate::error::Result<CriterionReport> {
    let mut lines = Vec::new();
    let global = check_global_cell(instance);
    let weights = WeightVector::subset_gas(instance, global.a_star);
    let cell = check_cell(instance, &weights)?;
    lines.push(CriterionLine::new("lll", Verdict::from_bool(cell.lll), &[("a", global.a_star), ("sum_mu", cell.steps_bound)]));
    let mut cl = CriterionLine::new("cell", Verdict::from_bool(cell.cell), &[("a", global.a_star), ("sum_mu", cell.steps_bound)]);
    if cell.fallback_used {
        cl = cl.with_note("clique bound used above neighbourhood cap");
    }
    lines.push(cl);
    lines.push(CriterionLine::new(
        "clique-cell",
        Verdict::from_bool(cell.clique),
        &[("a", global.a_star), ("sum_mu", cell.steps_bound)],
    ));
    let mut gw = vec![("a", global.a_star), ("ratio", global.ratio), ("q", global.q)];
    if let Some(t) = global.expected_steps {
        gw.push(("expected_steps", t));
    }
    lines.push(CriterionLine::new("global", global.verdict, &gw));
    if let Some(n) = global.nps {
        lines.push(CriterionLine::new("nps", n.verdict, &[("q", n.q), ("alpha", n.alpha), ("lhs", n.lhs)]));
    }
    let spectrum = PowerSpectrum::from_instance(instance);
    let (rho, xi_star, st) = ratio_lines(&spectrum, instance.num_atoms(), &mut lines);
    Ok(CriterionReport { lines, rho, xi_star, step_threshold: st })
}

/// Spectrum-only criteria (min-ratio, entropy, global via `q`) for families
/// described by a closed-form tail.
pub fn evaluate_spectrum(spectrum: &PowerSpectrum, m: usize, q: f64) -> CriterionReport {
    let mut lines = Vec::new();
    let (rho, xi_star, st) = ratio_lines(spectrum, m, &mut lines);
    let (v, a, ratio) = check_global_cell_spectrum(spectrum, q);
    lines.push(CriterionLine::new("global", v, &[("a", a), ("ratio", ratio), ("q", q)]));
    if let Some(k) = spectrum.uniform_k() {
        if let Ok(n) = check_nps(spectrum, k, q) {
            lines.push(CriterionLine::new("nps", n.verdict, &[("q", n.q), ("alpha", n.alpha), ("lhs", n.lhs)]));
        }
    }
    CriterionReport { lines, rho, xi_star, step_threshold: st }
}
