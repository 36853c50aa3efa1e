//! One function per subcommand, each producing a [`RunReport`].

use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::str::FromStr;

use lemnis_core::choreography::{find_moduli as core_find_moduli, CM_DEFECT_ACCEPT};
use lemnis_core::dynamics::{drift_summary, drift_trajectory, verify_choreography};
use lemnis_core::invariants::{
    conserved_pair_set, constancy_report, distance_extrema, relative_distance_sq, scan_pair_subsets,
};
use lemnis_core::potential::{beta_pattern, default_sample_times, fit_params};
use lemnis_core::{Choreography, ConservationReport, Error, FitResult, PairSet, Quantity};

use crate::reference::{lookup, Reference};
use crate::report::{RunReport, Section};
use crate::svg::{self, Panel};
use crate::timespec::TimeSpec;
use crate::trajectory::write_csv;

/// Bound on the integration-free Newton residual.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;
/// Bound on fit residuals and on agreement with tabulated values.
pub const FIT_RESIDUAL_TOLERANCE: f64 = 1e-9;
pub const REFERENCE_TOLERANCE: f64 = 1e-9;
/// Bounds on a drift report.
pub const CLOSURE_TOLERANCE: f64 = 1e-6;
pub const ON_CURVE_TOLERANCE: f64 = 1e-6;
pub const ENERGY_DRIFT_TOLERANCE: f64 = 1e-9;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(std::io::Error),
    Csv(csv::Error),
    Selection(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Csv(e) => write!(f, "csv error: {e}"),
            CliError::Selection(s) => f.write_str(s),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// `--modulus`: a 1-based index into the moduli found for `n`, or an
/// explicit value of `m = k²` (anything containing a decimal point or an
/// exponent).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModulusChoice {
    Index(usize),
    Value(f64),
}

impl FromStr for ModulusChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.chars().all(|c| c.is_ascii_digit()) {
            match s.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(ModulusChoice::Index(i)),
                _ => Err(format!("modulus index must be 1 or more, got {s:?}")),
            }
        } else {
            s.parse::<f64>()
                .ok()
                .filter(|m| (0.0..1.0).contains(m))
                .map(ModulusChoice::Value)
                .ok_or_else(|| format!("modulus must be an index or a value in [0, 1), got {s:?}"))
        }
    }
}

impl fmt::Display for ModulusChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModulusChoice::Index(i) => write!(f, "index {i}"),
            ModulusChoice::Value(m) => write!(f, "value {m}"),
        }
    }
}

pub fn resolve(n: usize, choice: ModulusChoice) -> CliResult<Choreography> {
    let m = match choice {
        ModulusChoice::Value(m) => m,
        ModulusChoice::Index(i) => {
            let found = core_find_moduli(n)?;
            found.get(i - 1).map(|m| m.m()).ok_or_else(|| {
                CliError::Selection(format!("n = {n} has {} modulus value(s); index {i} is out of range", found.len()))
            })?
        }
    };
    Ok(Choreography::unit(n, m)?)
}

/// Pair set carrying the logarithmic interaction: the conserved cyclic set,
/// or all pairs for three bodies.
fn log_set(ch: &Choreography) -> CliResult<PairSet> {
    if ch.n() <= 3 {
        Ok(PairSet::all(ch.n()))
    } else {
        Ok(conserved_pair_set(ch)?)
    }
}

fn describe(report: &mut RunReport, n: usize, choice: ModulusChoice) {
    report.params.field("n", n).field("modulus choice", choice.to_string());
}

fn choreography_section(s: &mut Section, ch: &Choreography, set: &PairSet) -> CliResult<f64> {
    let defect = ch.cm_defect()?;
    s.field("m = k^2", ch.modulus().m())
        .field("quarter period K", ch.curve().quarter_period())
        .field("period tau = 4K", ch.period())
        .field("center-of-mass defect (rms)", defect)
        .field("conserved pair set", set.label());
    Ok(defect)
}

fn reference_line(report: &mut RunReport, s: &mut Section, label: &str, value: f64, reference: f64) {
    let rel = (value - reference).abs() / reference.abs();
    s.field("reference", reference).field("relative error vs reference", rel);
    report.check(format!("{label} matches reference"), rel <= REFERENCE_TOLERANCE);
}

fn conservation_section(s: &mut Section, r: &ConservationReport) {
    s.field("mean", r.mean)
        .field("max deviation", r.max_deviation)
        .field("relative deviation", r.relative_deviation)
        .field("tolerance", r.tolerance)
        .field("conserved", r.pass);
    if let Some(c) = r.caveat {
        s.field("caveat", c);
    }
}

pub fn find_moduli(n: usize) -> CliResult<RunReport> {
    let mut report = RunReport::new("find-moduli");
    report.params.field("n", n);
    let found = core_find_moduli(n)?;
    report.body.field("count", found.len());
    for (i, m) in found.iter().enumerate() {
        let ch = Choreography::unit(n, m.m())?;
        let defect = ch.cm_defect()?;
        let s = report.body.section(format!("modulus {}", i + 1));
        s.field("m = k^2", m.m())
            .field("m (15 digits)", format!("{:.15}", m.m()))
            .field("period tau = 4K", m.period())
            .field("center-of-mass defect (rms)", defect);
        if let Some(r) = lookup(n, m.m()) {
            s.field("known as", r.name);
        }
        report.check(format!("modulus {} center-of-mass defect", i + 1), defect <= CM_DEFECT_ACCEPT);
    }
    Ok(report)
}

pub fn constants(n: usize, choice: ModulusChoice, grid: usize, tol: f64) -> CliResult<RunReport> {
    let mut report = RunReport::new("constants");
    describe(&mut report, n, choice);
    report.params.field("grid", grid).field("tolerance", tol);
    let ch = resolve(n, choice)?;
    let set = log_set(&ch)?;
    let reference = lookup(n, ch.modulus().m());
    let mut body = std::mem::replace(&mut report.body, Section::new("results"));

    let defect = choreography_section(body.section("choreography"), &ch, &set)?;
    report.check("center-of-mass defect", defect <= CM_DEFECT_ACCEPT);

    let fit = fit_params(&ch, &set, &default_sample_times(ch.period()));
    let mut rows: Vec<(&str, Quantity, Option<f64>)> = vec![
        ("angular momentum L", Quantity::AngularMomentum, None),
        ("kinetic energy T", Quantity::KineticEnergy, reference.map(|r| r.kinetic)),
        ("product integral I1", Quantity::Product(set.clone()), reference.map(|r| r.product)),
        ("sum integral I2", Quantity::Sum(set.clone()), reference.map(|r| r.sum)),
        ("hyper-radius I_HR", Quantity::HyperRadius, reference.map(|r| r.hyper_radius)),
        ("curvature sum", Quantity::CurvatureSum, reference.map(|r| 9.0 / n as f64 * r.hyper_radius)),
    ];
    if !set.is_all() {
        rows.push(("complementary sum I_HR - I2", Quantity::ComplementarySum(set.clone()), None));
    }
    match &fit {
        Ok(f) => {
            rows.insert(2, ("total energy E", Quantity::TotalEnergy(f.params.clone()), reference.map(|r| r.energy)))
        }
        Err(e) => {
            body.section("total energy E").field("error", format!("potential fit failed: {e}"));
            report.check("total energy E available", false);
        }
    }
    let labels: Vec<String> = (1..=n).map(|i| format!("oscillator J{i}")).collect();
    for (i, label) in labels.iter().enumerate() {
        rows.push((label, Quantity::Oscillator(i), Some(0.5)));
    }

    let mut means = std::collections::BTreeMap::new();
    for (label, q, expected) in rows {
        let s = body.section(label);
        match constancy_report(&ch, &q, grid, tol) {
            Ok(r) => {
                conservation_section(s, &r);
                report.check(format!("{label} conserved"), r.pass);
                if let Some(v) = expected {
                    reference_line(&mut report, s, label, r.mean, v);
                }
                means.insert(label.to_owned(), r.mean);
            }
            // e.g. the hyper-radius identity off a center-of-mass root
            Err(e) => {
                s.field("error", e.to_string());
                report.check(format!("{label} conserved"), false);
            }
        }
    }

    if let (Some(curv), Some(hr)) = (means.get("curvature sum"), means.get("hyper-radius I_HR")) {
        let ratio = curv / hr;
        body.section("curvature sum / I_HR").field("value", ratio).field("expected 9/n", 9.0 / n as f64);
        report.check("curvature sum = (9/n) I_HR", (ratio - 9.0 / n as f64).abs() <= tol * 9.0 / n as f64);
    }

    if !set.is_all() {
        let wrong = set.complement();
        let r = constancy_report(&ch, &Quantity::Product(wrong.clone()), grid, tol)?;
        let s = body.section("negative control: product over complementary set");
        s.field("pair set", wrong.label());
        conservation_section(s, &r);
        report.check("negative control rejected", !r.pass);
    }
    report.body = body;
    Ok(report)
}

fn fit_section(report: &mut RunReport, s: &mut Section, fit: &FitResult, reference: Option<&Reference>) {
    let p = &fit.params;
    s.field("log pair set", p.log_set.label()).field("alpha", p.alpha);
    if p.log_set.is_all() {
        s.field("beta (coefficient of +sum r^2)", p.three_body_beta());
    } else {
        s.field("a", p.a).field("beta (coefficient of -sum r^2)", p.beta());
    }
    s.field("residual rms", fit.residual_rms)
        .field("condition estimate", fit.condition_estimate)
        .field("samples", fit.sample_count);
    report.check("fit residual", fit.residual_rms <= FIT_RESIDUAL_TOLERANCE);
    if let Some(r) = reference {
        let alpha_err = (p.alpha - r.alpha).abs();
        s.field("reference alpha", r.alpha);
        report.check("alpha matches reference", alpha_err <= 1e-8);
        if let Some(b) = r.beta {
            s.field("reference beta", b);
            report.check("beta matches reference", (p.beta() - b).abs() <= 1e-10);
            report.check("a vanishes", p.a.abs() <= 1e-8);
        }
        if let Some(b) = r.three_body_beta {
            s.field("reference beta", b);
            report.check("beta matches reference", (p.three_body_beta() - b).abs() <= 1e-10);
        }
    }
}

pub fn fit(n: usize, choice: ModulusChoice) -> CliResult<RunReport> {
    let mut report = RunReport::new("fit");
    describe(&mut report, n, choice);
    let ch = resolve(n, choice)?;
    let set = log_set(&ch)?;
    let mut body = std::mem::replace(&mut report.body, Section::new("results"));
    let defect = choreography_section(body.section("choreography"), &ch, &set)?;
    report.check("center-of-mass defect", defect <= CM_DEFECT_ACCEPT);
    let fit = fit_params(&ch, &set, &default_sample_times(ch.period()))?;
    fit_section(&mut report, body.section("potential"), &fit, lookup(n, ch.modulus().m()));
    body.section("diagnostic").field("(m - 1/2)/(2n)", beta_pattern(n, ch.modulus().m()));
    report.body = body;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub periods: usize,
    pub tol: f64,
    pub grid: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { periods: 1, tol: 1e-11, grid: 256 }
    }
}

pub fn verify(n: usize, choice: ModulusChoice, opts: &VerifyOptions, csv: Option<&Path>) -> CliResult<RunReport> {
    let mut report = RunReport::new("verify");
    describe(&mut report, n, choice);
    report
        .params
        .field("periods", opts.periods)
        .field("integrator tolerance", opts.tol)
        .field("certificate grid", opts.grid);
    let ch = resolve(n, choice)?;
    let set = log_set(&ch)?;
    let mut body = std::mem::replace(&mut report.body, Section::new("results"));
    let defect = choreography_section(body.section("choreography"), &ch, &set)?;
    report.check("center-of-mass defect", defect <= CM_DEFECT_ACCEPT);
    let fit = fit_params(&ch, &set, &default_sample_times(ch.period()))?;
    fit_section(&mut report, body.section("potential"), &fit, lookup(n, ch.modulus().m()));

    let certificate = verify_choreography(&ch, &fit.params, opts.grid)?;
    body.section("newton certificate")
        .field("max |acceleration - force|", certificate)
        .field("tolerance", CERTIFICATE_TOLERANCE);
    report.check("newton certificate", certificate <= CERTIFICATE_TOLERANCE);

    // integrate only what already passes the pointwise certificate
    if certificate <= CERTIFICATE_TOLERANCE {
        let traj = drift_trajectory(&ch, &fit.params, opts.periods, opts.tol)?;
        let drift = drift_summary(&ch, &fit.params, &traj)?;
        let s = body.section("integration");
        s.field("accepted steps", drift.steps)
            .field("rejected steps", traj.rejected)
            .field("closure", drift.closure)
            .field("max on-curve residual", drift.max_on_curve_residual)
            .field("max center of mass", drift.max_cm)
            .field("relative energy drift", drift.energy_drift);
        if let Some(path) = csv {
            write_csv(BufWriter::new(File::create(path)?), &traj.states)?;
            s.field("trajectory rows", traj.states.len());
        }
        report.check("closure", drift.closure <= CLOSURE_TOLERANCE);
        report.check("on-curve residual", drift.max_on_curve_residual <= ON_CURVE_TOLERANCE);
        report.check("energy drift", drift.energy_drift <= ENERGY_DRIFT_TOLERANCE);
    }
    report.body = body;
    Ok(report)
}

pub fn figure(n: usize, choice: ModulusChoice, times: &[TimeSpec], out: &Path) -> CliResult<RunReport> {
    let mut report = RunReport::new("figure");
    describe(&mut report, n, choice);
    let ch = resolve(n, choice)?;
    let set = log_set(&ch)?;
    let quarter = ch.curve().quarter_period();
    let mut body = std::mem::replace(&mut report.body, Section::new("results"));
    choreography_section(body.section("choreography"), &ch, &set)?;
    let mut panels = Vec::new();
    for spec in times {
        let t = spec.resolve(quarter);
        let pos = ch.positions(t)?;
        let s = body.section(format!("t = {}", spec.text()));
        s.field("t", t);
        for (i, p) in pos.iter().enumerate() {
            s.field(format!("x{}", i + 1), p.x).field(format!("y{}", i + 1), p.y);
        }
        for &(i, j) in PairSet::all(n).pairs() {
            s.field(format!("r{}{}", i + 1, j + 1), relative_distance_sq(&pos, i, j)?.sqrt());
        }
        panels.push(Panel { t, caption: format!("n = {n}, k^2 = {:.6}, t = {}", ch.modulus().m(), spec.text()) });
    }
    let text = svg::render(&ch, &set, &panels)?;
    std::fs::write(out, text)?;
    body.field("panels", panels.len());
    report.body = body;
    Ok(report)
}

pub fn subsets(n: usize, choice: ModulusChoice, grid: usize, tol: f64) -> CliResult<RunReport> {
    let mut report = RunReport::new("subsets");
    describe(&mut report, n, choice);
    report.params.field("grid", grid).field("tolerance", tol);
    let ch = resolve(n, choice)?;
    let set = log_set(&ch)?;
    let mut body = std::mem::replace(&mut report.body, Section::new("results"));
    choreography_section(body.section("choreography"), &ch, &set)?;
    let survivors = scan_pair_subsets(&ch, grid, tol)?;
    body.field("subsets scanned", (1usize << PairSet::all(n).len()) - 1);
    body.field("survivors", survivors.len());
    for (i, s) in survivors.iter().enumerate() {
        body.section(format!("survivor {}", i + 1))
            .field("form", format!("{:?}", s.form).to_lowercase())
            .field("pairs", s.set.label());
    }
    // extrema of the first pair of each cyclic family
    for d in 1..=n / 2 {
        let e = distance_extrema(&ch, 0, d, 1024)?;
        body.section(format!("extrema r1{}", d + 1))
            .field("min", e.min)
            .field("t at min", e.t_min)
            .field("max", e.max)
            .field("t at max", e.t_max);
    }
    report.check("at least one survivor", !survivors.is_empty());
    report.body = body;
    Ok(report)
}
