//! Pairwise potentials of the form
//!
//! ```text
//! V = α Σ_S ln r²ᵢⱼ + a Σ_S r²ᵢⱼ + b Σ_{i<j} r²ᵢⱼ
//! ```
//!
//! where `S` is the logarithmic pair set. Two sign conventions are in use
//! for the harmonic term: the five-body form writes `−β Σ r²` with `β > 0`,
//! the three-body form writes `+β I₂` with `β < 0`. Internally only `b`
//! is stored; [`PotentialParams::beta`] returns the five-body `β = −b` and
//! [`PotentialParams::three_body_beta`] returns `b`.
//!
//! The parameters are linear in the equations of motion `ẍᵢ = −∇ᵢV`, so they
//! are recovered from sampled accelerations by linear least squares.

use alloc::vec::Vec;

use crate::choreography::Choreography;
use crate::error::{Error, Result};
use crate::invariants::{kinetic_energy, PairSet};
use crate::linalg;
use crate::vec::PlaneVec;

/// A fit whose design matrix exceeds this condition number is rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Minimum number of sample times for a fit.
pub const MIN_SAMPLES: usize = 3;

/// Number of sample times in [`default_sample_times`].
pub const DEFAULT_SAMPLES: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialParams {
    /// Coefficient of `Σ ln r²` over the logarithmic set.
    pub alpha: f64,
    /// Coefficient of `Σ r²` over the logarithmic set.
    pub a: f64,
    /// Coefficient of `Σ r²` over all pairs.
    pub harmonic: f64,
    pub log_set: PairSet,
}

impl PotentialParams {
    /// `V = α Σ_S ln r² + a Σ_S r² − β Σ_all r²`.
    pub fn five_body(alpha: f64, a: f64, beta: f64, log_set: PairSet) -> Self {
        PotentialParams { alpha, a, harmonic: -beta, log_set }
    }

    /// `V = α ln Π r² + β Σ r²` over all `n` pairs.
    pub fn three_body(alpha: f64, beta: f64, n: usize) -> Self {
        PotentialParams { alpha, a: 0.0, harmonic: beta, log_set: PairSet::all(n) }
    }

    /// Harmonic coefficient in the five-body convention, `β = −b`.
    pub fn beta(&self) -> f64 {
        -self.harmonic
    }

    /// Harmonic coefficient in the three-body convention, `β = b`.
    pub fn three_body_beta(&self) -> f64 {
        self.harmonic
    }

    pub fn n(&self) -> usize {
        self.log_set.n()
    }
}

fn check_shape(positions: &[PlaneVec], p: &PotentialParams) -> Result<()> {
    if positions.len() != p.n() {
        return Err(Error::Shape { expected: p.n(), found: positions.len() });
    }
    Ok(())
}

fn log_pair_r2(positions: &[PlaneVec], i: usize, j: usize) -> Result<f64> {
    let r2 = (positions[i] - positions[j]).norm_sq();
    if r2 > 0.0 {
        Ok(r2)
    } else {
        Err(Error::Singular { i, j })
    }
}

pub fn potential_energy(positions: &[PlaneVec], p: &PotentialParams) -> Result<f64> {
    check_shape(positions, p)?;
    let n = positions.len();
    let mut v = 0.0;
    for &(i, j) in p.log_set.pairs() {
        let r2 = log_pair_r2(positions, i, j)?;
        v += p.alpha * libm::log(r2) + p.a * r2;
    }
    let mut all = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            all += (positions[i] - positions[j]).norm_sq();
        }
    }
    Ok(v + p.harmonic * all)
}

/// `Fᵢ = −∇ᵢ V`. Accumulated pair by pair, so `Σ Fᵢ` cancels up to roundoff.
pub fn forces(positions: &[PlaneVec], p: &PotentialParams) -> Result<Vec<PlaneVec>> {
    check_shape(positions, p)?;
    let n = positions.len();
    let mut f = alloc::vec![PlaneVec::ZERO; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = positions[i] - positions[j];
            let mut coeff = -2.0 * p.harmonic;
            if p.log_set.contains(i, j) {
                let r2 = log_pair_r2(positions, i, j)?;
                coeff -= 2.0 * (p.alpha / r2 + p.a);
            }
            let fij = coeff * d;
            f[i] += fij;
            f[j] -= fij;
        }
    }
    Ok(f)
}

/// `T + V` at time `t`.
pub fn total_energy(ch: &Choreography, p: &PotentialParams, t: f64) -> Result<f64> {
    let states = ch.states(t)?;
    let positions: Vec<PlaneVec> = states.iter().map(|s| s.position).collect();
    Ok(kinetic_energy(&states) + potential_energy(&positions, p)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: PotentialParams,
    /// RMS of the acceleration residual over all rows.
    pub residual_rms: f64,
    pub condition_estimate: f64,
    pub sample_count: usize,
}

/// Times `frac(j / √2) τ` for `j = 1 … 32`, away from symmetric instants.
pub fn default_sample_times(period: f64) -> Vec<f64> {
    (1..=DEFAULT_SAMPLES)
        .map(|j| {
            let x = j as f64 * core::f64::consts::FRAC_1_SQRT_2;
            (x - libm::floor(x)) * period
        })
        .collect()
}

/// Per-body force basis for the three linear coefficients `(α, a, b)`.
fn force_basis(positions: &[PlaneVec], log_set: &PairSet) -> Result<Vec<[PlaneVec; 3]>> {
    let n = positions.len();
    let mut basis = alloc::vec![[PlaneVec::ZERO; 3]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = positions[i] - positions[j];
            let mut cols = [PlaneVec::ZERO, PlaneVec::ZERO, -2.0 * d];
            if log_set.contains(i, j) {
                let r2 = log_pair_r2(positions, i, j)?;
                cols[0] = (-2.0 / r2) * d;
                cols[1] = -2.0 * d;
            }
            for c in 0..3 {
                basis[i][c] += cols[c];
                basis[j][c] -= cols[c];
            }
        }
    }
    Ok(basis)
}

/// Recover `(α, a, b)` from `ẍᵢ = −∇ᵢ V` at the given sample times.
///
/// When `log_set` covers every pair the `a` and `b` columns coincide, so
/// `a` is fixed at zero and only `(α, b)` are fitted.
pub fn fit_params(ch: &Choreography, log_set: &PairSet, sample_times: &[f64]) -> Result<FitResult> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let drop_a = log_set.is_all();
    collect_rows(ch, log_set, sample_times, drop_a, &mut rows, &mut rhs)?;
    solve_fit(rows, rhs, log_set, sample_times.len(), drop_a)
}

/// Same design matrix as [`fit_params`] with synthetic accelerations
/// `−∇V(params)` on the choreography positions in place of the curve's.
pub fn fit_synthetic(ch: &Choreography, params: &PotentialParams, sample_times: &[f64]) -> Result<FitResult> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let drop_a = params.log_set.is_all();
    for &t in sample_times {
        let pos = ch.positions(t)?;
        let f = forces(&pos, params)?;
        push_rows(&pos, &params.log_set, drop_a, &f, &mut rows, &mut rhs)?;
    }
    check_samples(sample_times)?;
    solve_fit(rows, rhs, &params.log_set, sample_times.len(), drop_a)
}

fn check_samples(sample_times: &[f64]) -> Result<()> {
    if sample_times.len() < MIN_SAMPLES {
        return Err(Error::Domain { what: "fit sample count", value: sample_times.len() as f64 });
    }
    Ok(())
}

fn collect_rows(
    ch: &Choreography,
    log_set: &PairSet,
    sample_times: &[f64],
    drop_a: bool,
    rows: &mut Vec<f64>,
    rhs: &mut Vec<f64>,
) -> Result<()> {
    check_samples(sample_times)?;
    if log_set.n() != ch.n() {
        return Err(Error::Shape { expected: ch.n(), found: log_set.n() });
    }
    for &t in sample_times {
        let kin = ch.kinematics(t)?;
        let pos: Vec<PlaneVec> = kin.iter().map(|k| k.position).collect();
        let acc: Vec<PlaneVec> = kin.iter().map(|k| k.acceleration).collect();
        push_rows(&pos, log_set, drop_a, &acc, rows, rhs)?;
    }
    Ok(())
}

fn push_rows(
    pos: &[PlaneVec],
    log_set: &PairSet,
    drop_a: bool,
    acc: &[PlaneVec],
    rows: &mut Vec<f64>,
    rhs: &mut Vec<f64>,
) -> Result<()> {
    let basis = force_basis(pos, log_set)?;
    for (b, a) in basis.iter().zip(acc) {
        for (pick, target) in [(0usize, a.x), (1usize, a.y)] {
            let comp = |v: PlaneVec| if pick == 0 { v.x } else { v.y };
            rows.push(comp(b[0]));
            if !drop_a {
                rows.push(comp(b[1]));
            }
            rows.push(comp(b[2]));
            rhs.push(target);
        }
    }
    Ok(())
}

fn solve_fit(rows: Vec<f64>, rhs: Vec<f64>, log_set: &PairSet, samples: usize, drop_a: bool) -> Result<FitResult> {
    let cols = if drop_a { 2 } else { 3 };
    let ls = linalg::least_squares(rhs.len(), cols, &rows, &rhs)?;
    if ls.condition.is_nan() || ls.condition > MAX_CONDITION {
        return Err(Error::IllPosedFit { condition: ls.condition });
    }
    let x = &ls.solution;
    let (alpha, a, harmonic) = if drop_a { (x[0], 0.0, x[1]) } else { (x[0], x[1], x[2]) };
    Ok(FitResult {
        params: PotentialParams { alpha, a, harmonic, log_set: log_set.clone() },
        residual_rms: ls.residual_norm / libm::sqrt(rhs.len() as f64),
        condition_estimate: ls.condition,
        sample_count: samples,
    })
}

/// `(m − ½) / (2n)`, an empirical pattern matching the fitted five-body
/// `β` and the three-body `|β|`. Reported for comparison only.
pub fn beta_pattern(n: usize, m: f64) -> f64 {
    (m - 0.5) / (2.0 * n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const K0_SQ: f64 = 0.933_012_701_892_219_323_38;
    const K1_SQ: f64 = 0.653_660_413_954_773_213_45;
    const K2_SQ: f64 = 0.997_643_736_031_613_235_09;
    const BETA1: f64 = 0.015_366_041_395_477_321_360;
    const BETA2: f64 = 0.049_764_373_603_161_323_382;

    fn fit(n: usize, m: f64, set: PairSet) -> FitResult {
        let ch = Choreography::unit(n, m).unwrap();
        fit_params(&ch, &set, &default_sample_times(ch.period())).unwrap()
    }

    #[test]
    fn two_body_inverted_oscillator_force() {
        let pos = [PlaneVec::new(0.3, -0.2), PlaneVec::new(-0.5, 0.4)];
        let p = PotentialParams::five_body(0.0, 0.0, 0.7, PairSet::all(2));
        let f = forces(&pos, &p).unwrap();
        let expect = 2.0 * 0.7 * (pos[0] - pos[1]);
        assert!((f[0] - expect).norm() < 1e-15);
        assert!((f[1] + expect).norm() < 1e-15);
    }

    #[test]
    fn three_body_potential_value() {
        let ch = Choreography::unit(3, K0_SQ).unwrap();
        let p = PotentialParams::three_body(0.25, -3f64.sqrt() / 24.0, 3);
        let v = potential_energy(&ch.positions(0.4).unwrap(), &p).unwrap();
        let expect = 0.25 * (1.5 * 3f64.sqrt()).ln() - 0.375;
        assert!((v - expect).abs() < 1e-13);
        let e = total_energy(&ch, &p, 1.1).unwrap();
        assert!((e - 0.238_692_813_110_554_806_91).abs() < 1e-12);
    }

    #[test]
    fn unit_distance_configuration() {
        // equilateral triangle of side 1, all r² = 1
        let s = 3f64.sqrt();
        let pos = [PlaneVec::new(0.0, 0.0), PlaneVec::new(1.0, 0.0), PlaneVec::new(0.5, s / 2.0)];
        let p = PotentialParams { alpha: 0.0, a: 0.4, harmonic: -0.1, log_set: PairSet::nearest(3).unwrap() };
        let v = potential_energy(&pos, &p).unwrap();
        assert!((v - (0.4 * 3.0 - 0.1 * 3.0)).abs() < 1e-14);
    }

    #[test]
    fn coincident_log_pair_is_singular() {
        let pos = [PlaneVec::new(0.1, 0.1), PlaneVec::new(0.1, 0.1), PlaneVec::new(1.0, 0.0)];
        let p = PotentialParams::three_body(0.25, 0.0, 3);
        assert_eq!(potential_energy(&pos, &p), Err(Error::Singular { i: 0, j: 1 }));
        assert_eq!(forces(&pos, &p), Err(Error::Singular { i: 0, j: 1 }));
    }

    #[test]
    fn five_body_fits() {
        let f1 = fit(5, K1_SQ, PairSet::nearest(5).unwrap());
        assert!((f1.params.alpha - 0.25).abs() < 1e-10, "{f1:?}");
        assert!(f1.params.a.abs() < 1e-8);
        assert!((f1.params.beta() - BETA1).abs() < 1e-10);
        assert!(f1.residual_rms < 1e-9);
        assert_eq!(f1.sample_count, 32);

        let f2 = fit(5, K2_SQ, PairSet::next_nearest(5).unwrap());
        assert!((f2.params.alpha - 0.25).abs() < 1e-10, "{f2:?}");
        assert!(f2.params.a.abs() < 1e-8);
        assert!((f2.params.beta() - BETA2).abs() < 1e-10);
        assert!(f2.residual_rms < 1e-9);
    }

    #[test]
    fn three_body_fit() {
        let f = fit(3, K0_SQ, PairSet::all(3));
        assert!((f.params.alpha - 0.25).abs() < 1e-10);
        assert_eq!(f.params.a, 0.0);
        assert!((f.params.three_body_beta() + 3f64.sqrt() / 24.0).abs() < 1e-10);
    }

    #[test]
    fn wrong_set_leaves_large_residual() {
        let f = fit(5, K1_SQ, PairSet::next_nearest(5).unwrap());
        assert!(f.residual_rms > 1e-2, "{}", f.residual_rms);
        let f = fit(5, K2_SQ, PairSet::nearest(5).unwrap());
        assert!(f.residual_rms > 1e-2, "{}", f.residual_rms);
    }

    #[test]
    fn too_few_samples() {
        let ch = Choreography::unit(5, K1_SQ).unwrap();
        assert!(fit_params(&ch, &PairSet::nearest(5).unwrap(), &[0.1, 0.2]).is_err());
    }

    #[test]
    fn fitted_forces_reproduce_accelerations() {
        let f1 = fit(5, K1_SQ, PairSet::nearest(5).unwrap());
        let ch = Choreography::unit(5, K1_SQ).unwrap();
        for t in [0.0, 0.37, 2.9, 5.5] {
            let kin = ch.kinematics(t).unwrap();
            let pos: Vec<PlaneVec> = kin.iter().map(|k| k.position).collect();
            for (k, f) in kin.iter().zip(forces(&pos, &f1.params).unwrap()) {
                assert!((k.acceleration - f).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn beta_pattern_diagnostic() {
        assert!((beta_pattern(5, K1_SQ) - BETA1).abs() < 1e-15);
        assert!((beta_pattern(5, K2_SQ) - BETA2).abs() < 1e-15);
        assert!((beta_pattern(3, K0_SQ) - 3f64.sqrt() / 24.0).abs() < 1e-15);
    }

    fn random_positions(seed: &[f64]) -> Vec<PlaneVec> {
        seed.chunks_exact(2).map(|c| PlaneVec::new(c[0], c[1])).collect()
    }

    proptest! {
        #[test]
        fn forces_are_minus_gradient(
            seed in prop::collection::vec(-1.5f64..1.5, 10),
            alpha in -1.0f64..1.0, a in -1.0f64..1.0, beta in -1.0f64..1.0,
            near in any::<bool>(),
        ) {
            let pos = random_positions(&seed);
            let set = if near { PairSet::nearest(5).unwrap() } else { PairSet::next_nearest(5).unwrap() };
            for &(i, j) in set.pairs() {
                prop_assume!((pos[i] - pos[j]).norm_sq() > 0.05);
            }
            let p = PotentialParams::five_body(alpha, a, beta, set);
            let f = forces(&pos, &p).unwrap();
            let h = 1e-6;
            for i in 0..5 {
                for axis in 0..2 {
                    let mut plus = pos.clone();
                    let mut minus = pos.clone();
                    if axis == 0 { plus[i].x += h; minus[i].x -= h; } else { plus[i].y += h; minus[i].y -= h; }
                    let g = (potential_energy(&plus, &p).unwrap() - potential_energy(&minus, &p).unwrap()) / (2.0 * h);
                    let fi = if axis == 0 { f[i].x } else { f[i].y };
                    prop_assert!((fi + g).abs() <= 1e-7, "body {} axis {}: {} vs {}", i, axis, fi, -g);
                }
            }
        }

        #[test]
        fn third_law_and_zero_torque(
            seed in prop::collection::vec(-1.5f64..1.5, 10),
            alpha in -1.0f64..1.0, a in -1.0f64..1.0, beta in -1.0f64..1.0,
        ) {
            let pos = random_positions(&seed);
            let set = PairSet::nearest(5).unwrap();
            for &(i, j) in set.pairs() {
                prop_assume!((pos[i] - pos[j]).norm_sq() > 0.05);
            }
            let p = PotentialParams::five_body(alpha, a, beta, set);
            let f = forces(&pos, &p).unwrap();
            let scale = f.iter().map(|v| v.norm()).fold(1.0, f64::max);
            let net: PlaneVec = f.iter().copied().sum();
            let torque: f64 = pos.iter().zip(&f).map(|(x, fi)| x.cross(*fi)).sum();
            prop_assert!(net.norm() <= 1e-14 * scale);
            prop_assert!(torque.abs() <= 1e-12 * scale);
        }

        #[test]
        fn synthetic_round_trip(
            alpha in 0.05f64..1.0, a in -0.5f64..0.5, beta in -0.5f64..0.5,
            near in any::<bool>(),
        ) {
            let m = if near { K1_SQ } else { K2_SQ };
            let set = if near { PairSet::nearest(5).unwrap() } else { PairSet::next_nearest(5).unwrap() };
            let ch = Choreography::unit(5, m).unwrap();
            let truth = PotentialParams::five_body(alpha, a, beta, set);
            let fit = fit_synthetic(&ch, &truth, &default_sample_times(ch.period())).unwrap();
            let p = &fit.params;
            prop_assert!((p.alpha - alpha).abs() <= 1e-12 * alpha.abs().max(1.0));
            prop_assert!((p.a - a).abs() <= 1e-12 * a.abs().max(1.0));
            prop_assert!((p.beta() - beta).abs() <= 1e-12 * beta.abs().max(1.0));
        }
    }
}
