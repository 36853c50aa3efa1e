//! Forward integration of `ẍᵢ = −∇ᵢV` from choreography initial conditions,
//! and the integration-free certificate that the parametrized motion
//! satisfies the same equations.
//!
//! The default integrator is the embedded Dormand–Prince 5(4) pair with
//! per-step error control; a fixed-step velocity Verlet scheme is kept as an
//! independent cross-check.

use alloc::vec::Vec;

use crate::choreography::{BodyState, Choreography};
use crate::error::{Error, Result};
use crate::invariants::kinetic_energy;
use crate::lemniscate::on_curve_residual;
use crate::potential::{forces, potential_energy, PotentialParams};
use crate::vec::PlaneVec;

/// Squared separation inside the logarithmic set that aborts integration.
pub const COLLISION_R2: f64 = 1e-12;

/// Accepted range for the integrator tolerance.
pub const TOL_RANGE: (f64, f64) = (1e-13, 1e-6);

/// Output samples per period in [`drift_report`].
const DRIFT_SAMPLES_PER_PERIOD: usize = 64;

const MAX_STEPS: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub time: f64,
    pub bodies: Vec<BodyState>,
}

impl SystemState {
    /// Exact state of the choreography at time `t`.
    pub fn from_choreography(ch: &Choreography, t: f64) -> Result<Self> {
        Ok(SystemState { time: t, bodies: ch.states(t)? })
    }

    pub fn positions(&self) -> Vec<PlaneVec> {
        self.bodies.iter().map(|b| b.position).collect()
    }

    /// `T + V` under `p`.
    pub fn energy(&self, p: &PotentialParams) -> Result<f64> {
        Ok(kinetic_energy(&self.bodies) + potential_energy(&self.positions(), p)?)
    }

    /// Largest per-body `max(|Δx|, |Δv|)` against `other`.
    pub fn distance(&self, other: &SystemState) -> f64 {
        self.bodies
            .iter()
            .zip(&other.bodies)
            .map(|(a, b)| (a.position - b.position).norm().max((a.velocity - b.velocity).norm()))
            .fold(0.0, f64::max)
    }

    fn to_flat(&self) -> Vec<f64> {
        let n = self.bodies.len();
        let mut y = alloc::vec![0.0; 4 * n];
        for (i, b) in self.bodies.iter().enumerate() {
            y[2 * i] = b.position.x;
            y[2 * i + 1] = b.position.y;
            y[2 * n + 2 * i] = b.velocity.x;
            y[2 * n + 2 * i + 1] = b.velocity.y;
        }
        y
    }

    fn from_flat(time: f64, y: &[f64]) -> Self {
        let n = y.len() / 4;
        let bodies = (0..n)
            .map(|i| BodyState {
                position: PlaneVec::new(y[2 * i], y[2 * i + 1]),
                velocity: PlaneVec::new(y[2 * n + 2 * i], y[2 * n + 2 * i + 1]),
            })
            .collect();
        SystemState { time, bodies }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<SystemState>,
    pub steps: usize,
    pub rejected: usize,
}

impl Trajectory {
    pub fn last(&self) -> &SystemState {
        self.states.last().expect("trajectory holds at least the initial state")
    }
}

/// Equations of motion on the flat layout `[x₀ y₀ … | vx₀ vy₀ …]`.
struct Rhs<'a> {
    params: &'a PotentialParams,
    n: usize,
    positions: Vec<PlaneVec>,
}

impl<'a> Rhs<'a> {
    fn new(params: &'a PotentialParams) -> Self {
        let n = params.n();
        Rhs { params, n, positions: alloc::vec![PlaneVec::ZERO; n] }
    }

    fn eval(&mut self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            self.positions[i] = PlaneVec::new(y[2 * i], y[2 * i + 1]);
        }
        for &(i, j) in self.params.log_set.pairs() {
            if (self.positions[i] - self.positions[j]).norm_sq() < COLLISION_R2 {
                return Err(Error::Collision { time: t, i, j });
            }
        }
        dy[..2 * n].copy_from_slice(&y[2 * n..]);
        let f = forces(&self.positions, self.params)?;
        for (i, fi) in f.iter().enumerate() {
            dy[2 * n + 2 * i] = fi.x;
            dy[2 * n + 2 * i + 1] = fi.y;
        }
        Ok(())
    }
}

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
/// Fifth- minus fourth-order weights.
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

fn rms_norm(v: &[f64], scale: &[f64]) -> f64 {
    let s: f64 = v.iter().zip(scale).map(|(x, s)| (x / s) * (x / s)).sum();
    libm::sqrt(s / v.len() as f64)
}

/// Adaptive integration from `init` through each time in `outputs`.
///
/// `outputs` must be monotone in one direction away from `init.time`; the
/// step size is clipped so that every output time is hit exactly. The
/// returned trajectory starts with `init` followed by one state per output.
pub fn integrate_to(init: &SystemState, p: &PotentialParams, outputs: &[f64], tol: f64) -> Result<Trajectory> {
    if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&tol) {
        return Err(Error::Domain { what: "integrator tolerance", value: tol });
    }
    if init.bodies.len() != p.n() {
        return Err(Error::Shape { expected: p.n(), found: init.bodies.len() });
    }
    let dir = match outputs.last() {
        Some(&last) if last < init.time => -1.0,
        _ => 1.0,
    };
    let mut rhs = Rhs::new(p);
    let dim = 4 * p.n();
    let mut t = init.time;
    let mut y = init.to_flat();
    let mut k: [Vec<f64>; 7] = core::array::from_fn(|_| alloc::vec![0.0; dim]);
    let mut stage = alloc::vec![0.0; dim];
    let mut y_new = alloc::vec![0.0; dim];
    let mut err = alloc::vec![0.0; dim];
    let mut scale = alloc::vec![0.0; dim];

    rhs.eval(t, &y, &mut k[0])?;
    let mut traj = Trajectory { states: alloc::vec![init.clone()], steps: 0, rejected: 0 };

    // initial step from the size of the state and its derivative
    let d0 = rms_norm(&y, &alloc::vec![1.0; dim]);
    let d1 = rms_norm(&k[0], &alloc::vec![1.0; dim]);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(libm::pow(tol, 0.2));

    for &target in outputs {
        if (target - t) * dir < 0.0 {
            return Err(Error::Domain { what: "non-monotone output time", value: target });
        }
        while (target - t) * dir > 0.0 {
            if traj.steps + traj.rejected >= MAX_STEPS {
                return Err(Error::NoConvergence { what: "integrator step budget", iterations: MAX_STEPS });
            }
            let remaining = (target - t).abs();
            let clipped = h >= remaining;
            let step = if clipped { remaining } else { h };
            if step < 16.0 * f64::EPSILON * t.abs().max(1.0) && !clipped {
                return Err(Error::StepUnderflow { time: t, step });
            }
            let hs = dir * step;
            for s in 1..7 {
                for d in 0..dim {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += A[s][j] * kj[d];
                    }
                    stage[d] = y[d] + hs * acc;
                }
                let (_, tail) = k.split_at_mut(s);
                rhs.eval(t + C[s] * hs, &stage, &mut tail[0])?;
            }
            for d in 0..dim {
                let mut acc = 0.0;
                let mut e = 0.0;
                for s in 0..7 {
                    acc += B[s] * k[s][d];
                    e += E[s] * k[s][d];
                }
                y_new[d] = y[d] + hs * acc;
                err[d] = hs * e;
                scale[d] = tol + tol * y[d].abs().max(y_new[d].abs());
            }
            // componentwise bound: every local error within tol·(1 + |y|)
            let en = err.iter().zip(&scale).map(|(e, s)| (e / s).abs()).fold(0.0, f64::max);
            if en <= 1.0 {
                t = if clipped { target } else { t + hs };
                core::mem::swap(&mut y, &mut y_new);
                // first-same-as-last
                k.swap(0, 6);
                traj.steps += 1;
                if !clipped || step == h {
                    h *= (0.9 * libm::pow(en.max(1e-10), -0.2)).clamp(0.2, 5.0);
                }
            } else {
                traj.rejected += 1;
                h = step * (0.9 * libm::pow(en, -0.2)).clamp(0.2, 1.0);
            }
        }
        traj.states.push(SystemState::from_flat(t, &y));
    }
    Ok(traj)
}

/// Adaptive integration to `t_end`; the trajectory holds the initial and
/// final states.
pub fn integrate(init: &SystemState, p: &PotentialParams, t_end: f64, tol: f64) -> Result<Trajectory> {
    integrate_to(init, p, &[t_end], tol)
}

/// Fixed-step velocity Verlet, `steps` steps of size `h`; returns every
/// state.
pub fn integrate_verlet(init: &SystemState, p: &PotentialParams, h: f64, steps: usize) -> Result<Trajectory> {
    if !(h.is_finite() && h != 0.0) {
        return Err(Error::Domain { what: "Verlet step", value: h });
    }
    let mut state = init.clone();
    let mut pos = state.positions();
    let mut acc = forces(&pos, p)?;
    let mut traj = Trajectory { states: alloc::vec![init.clone()], steps: 0, rejected: 0 };
    for _ in 0..steps {
        for (b, a) in state.bodies.iter_mut().zip(&acc) {
            b.velocity += (0.5 * h) * *a;
            b.position += h * b.velocity;
        }
        state.time += h;
        pos = state.positions();
        for &(i, j) in p.log_set.pairs() {
            if (pos[i] - pos[j]).norm_sq() < COLLISION_R2 {
                return Err(Error::Collision { time: state.time, i, j });
            }
        }
        acc = forces(&pos, p)?;
        for (b, a) in state.bodies.iter_mut().zip(&acc) {
            b.velocity += (0.5 * h) * *a;
        }
        traj.steps += 1;
        traj.states.push(state.clone());
    }
    Ok(traj)
}

/// Max over an equispaced period grid and over bodies of
/// `|ẍᵢ(t) − Fᵢ(x(t))|`, with `ẍ` from the closed-form curve derivatives.
pub fn verify_choreography(ch: &Choreography, p: &PotentialParams, grid_size: usize) -> Result<f64> {
    if grid_size < 16 {
        return Err(Error::Domain { what: "certificate grid size", value: grid_size as f64 });
    }
    let tau = ch.period();
    let mut worst = 0.0f64;
    for j in 0..grid_size {
        let t = j as f64 * tau / grid_size as f64;
        let kin = ch.kinematics(t)?;
        let pos: Vec<PlaneVec> = kin.iter().map(|k| k.position).collect();
        for (k, f) in kin.iter().zip(forces(&pos, p)?) {
            worst = worst.max((k.acceleration - f).norm());
        }
    }
    Ok(worst)
}

/// Summary of an integrated run against the exact choreography.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DriftReport {
    /// Max `|(x²+y²)² − c²(x²−y²)|` over sampled states and bodies.
    pub max_on_curve_residual: f64,
    pub max_cm: f64,
    /// Max `|E(t) − E(0)| / |E(0)|` over sampled states.
    pub energy_drift: f64,
    /// [`SystemState::distance`] between the final and initial states.
    pub closure: f64,
    pub steps: usize,
}

/// Integrate `periods` periods from the choreography state at `t = 0`.
pub fn drift_report(ch: &Choreography, p: &PotentialParams, periods: usize, tol: f64) -> Result<DriftReport> {
    let traj = drift_trajectory(ch, p, periods, tol)?;
    drift_summary(ch, p, &traj)
}

/// Trajectory sampled [`DRIFT_SAMPLES_PER_PERIOD`] times per period.
pub fn drift_trajectory(ch: &Choreography, p: &PotentialParams, periods: usize, tol: f64) -> Result<Trajectory> {
    let init = SystemState::from_choreography(ch, 0.0)?;
    let total = periods * DRIFT_SAMPLES_PER_PERIOD;
    let tau = ch.period();
    let outputs: Vec<f64> = (1..=total).map(|j| j as f64 * tau / DRIFT_SAMPLES_PER_PERIOD as f64).collect();
    integrate_to(&init, p, &outputs, tol)
}

/// Drift measures of a trajectory started on `ch`.
pub fn drift_summary(ch: &Choreography, p: &PotentialParams, traj: &Trajectory) -> Result<DriftReport> {
    let first = &traj.states[0];
    if traj.states.len() == 1 {
        return Ok(DriftReport::default());
    }
    let e0 = first.energy(p)?;
    let c = ch.curve().c();
    let mut report = DriftReport { steps: traj.steps, ..DriftReport::default() };
    for s in &traj.states {
        for b in &s.bodies {
            report.max_on_curve_residual = report.max_on_curve_residual.max(on_curve_residual(b.position, c).abs());
        }
        let cm: PlaneVec = s.bodies.iter().map(|b| b.position).sum();
        report.max_cm = report.max_cm.max(cm.norm());
        report.energy_drift = report.energy_drift.max((s.energy(p)? - e0).abs() / e0.abs());
    }
    report.closure = traj.last().distance(first);
    Ok(report)
}
