//! N unit masses chasing each other along one lemniscate with equal time
//! spacing `τ/N`, and the search for the moduli that keep their center of
//! mass fixed at the origin.

use alloc::vec::Vec;

use crate::elliptic::EllipticModulus;
use crate::error::{Error, Result};
use crate::lemniscate::{Kinematics, LemniscateCurve};
use crate::roots::brent;
use crate::vec::PlaneVec;

/// Number of sample times in the center-of-mass defect.
pub const CM_DEFECT_GRID: usize = 64;

/// A modulus is accepted when its center-of-mass defect is below this.
pub const CM_DEFECT_ACCEPT: f64 = 1e-10;

/// Bracket width at which the root polish stops.
const POLISH_XTOL: f64 = 1e-15;

/// Sign changes with both endpoint values below this are roundoff.
const SCAN_NOISE_FLOOR: f64 = 1e-12;

/// Fraction of a phase step `τ/N` used as probe time for bracketing.
///
/// Irrational, so the probe never coincides with an instant at which a
/// symmetry of the configuration forces the center of mass to vanish.
const PROBE_FRACTION: f64 = 0.381_966_011_250_105_15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyState {
    pub position: PlaneVec,
    pub velocity: PlaneVec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Choreography {
    curve: LemniscateCurve,
    offsets: Vec<f64>,
}

impl Choreography {
    /// `n` bodies on `curve`; body `i` (zero-based) runs at time
    /// `t + (i − (n−1)/2) τ/n`.
    ///
    /// For five bodies this gives shifts `−2τ/5, −τ/5, 0, τ/5, 2τ/5`.
    pub fn new(n: usize, curve: LemniscateCurve) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain { what: "body count", value: n as f64 });
        }
        let step = curve.period() / n as f64;
        let center = (n as f64 - 1.0) / 2.0;
        let offsets = (0..n).map(|i| (i as f64 - center) * step).collect();
        Ok(Choreography { curve, offsets })
    }

    /// `n` bodies on the unit lemniscate with squared modulus `m`.
    pub fn unit(n: usize, m: f64) -> Result<Self> {
        Choreography::new(n, LemniscateCurve::unit(EllipticModulus::new(m)?))
    }

    pub fn n(&self) -> usize {
        self.offsets.len()
    }

    pub fn curve(&self) -> &LemniscateCurve {
        &self.curve
    }

    pub fn modulus(&self) -> EllipticModulus {
        self.curve.modulus()
    }

    pub fn period(&self) -> f64 {
        self.curve.period()
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn positions(&self, t: f64) -> Result<Vec<PlaneVec>> {
        self.offsets.iter().map(|o| self.curve.position(t + o)).collect()
    }

    pub fn kinematics(&self, t: f64) -> Result<Vec<Kinematics>> {
        self.offsets.iter().map(|o| self.curve.kinematics(t + o)).collect()
    }

    pub fn states(&self, t: f64) -> Result<Vec<BodyState>> {
        Ok(self.kinematics(t)?.into_iter().map(|k| BodyState { position: k.position, velocity: k.velocity }).collect())
    }

    /// Unnormalized sum of the positions.
    pub fn center_of_mass(&self, t: f64) -> Result<PlaneVec> {
        Ok(self.positions(t)?.into_iter().sum())
    }

    /// RMS of `|Σ xᵢ(t)|` over [`CM_DEFECT_GRID`] midpoint times in `(0, τ)`.
    pub fn cm_defect(&self) -> Result<f64> {
        let tau = self.period();
        let mut acc = 0.0;
        for j in 0..CM_DEFECT_GRID {
            let t = (j as f64 + 0.5) / CM_DEFECT_GRID as f64 * tau;
            acc += self.center_of_mass(t)?.norm_sq();
        }
        Ok(libm::sqrt(acc / CM_DEFECT_GRID as f64))
    }

    /// Sum of the center-of-mass components at the fixed probe time, the
    /// signed function used for bracketing.
    ///
    /// For even `n` the x-components cancel identically, so the x-component
    /// alone would never bracket a root.
    fn probe(&self) -> Result<f64> {
        let t = PROBE_FRACTION * self.period() / self.n() as f64;
        let cm = self.center_of_mass(t)?;
        Ok(cm.x + cm.y)
    }
}

/// Center-of-mass defect for `n` bodies on the unit curve with modulus `m`.
pub fn cm_defect(n: usize, m: f64) -> Result<f64> {
    Choreography::unit(n, m)?.cm_defect()
}

fn probe(n: usize, m: f64) -> f64 {
    Choreography::unit(n, m).and_then(|c| c.probe()).unwrap_or(f64::NAN)
}

/// Scan grid for the modulus search: uniform on `[0.001, 0.9995]` with step
/// `5e-4`, then geometric towards 1 down to `1 − 1e-9`.
pub fn scan_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..1998).map(|i| 0.001 + 5e-4 * i as f64).collect();
    let refine = 240;
    let (lo, hi) = (libm::log10(5e-4), -9.0);
    for i in 1..=refine {
        let e = lo + (hi - lo) * i as f64 / refine as f64;
        grid.push(1.0 - libm::pow(10.0, e));
    }
    grid
}

/// Brackets `[m_lo, m_hi]` in which the probe changes sign.
pub fn bracket_moduli(n: usize) -> Vec<(f64, f64)> {
    let grid = scan_grid();
    let values: Vec<f64> = grid.iter().map(|&m| probe(n, m)).collect();
    grid.windows(2)
        .zip(values.windows(2))
        .filter(|(_, f)| {
            f[0].is_finite() && f[1].is_finite() && f[0] * f[1] <= 0.0 && f[0].abs().max(f[1].abs()) > SCAN_NOISE_FLOOR
        })
        .map(|(m, _)| (m[0], m[1]))
        .collect()
}

/// Squared moduli in `(0, 1)` at which the center of mass of the `n`-body
/// choreography stays at the origin, sorted ascending.
///
/// Candidates come from sign changes of a probe component on
/// [`scan_grid`], are polished with Brent's method and kept only if the
/// full defect is below [`CM_DEFECT_ACCEPT`]. An empty result is not an
/// error.
pub fn find_moduli(n: usize) -> Result<Vec<EllipticModulus>> {
    if n < 2 {
        return Err(Error::Domain { what: "body count", value: n as f64 });
    }
    let mut found = Vec::new();
    for (lo, hi) in bracket_moduli(n) {
        let m = brent(|m| probe(n, m), lo, hi, POLISH_XTOL)?;
        if cm_defect(n, m)? < CM_DEFECT_ACCEPT {
            found.push(EllipticModulus::new(m)?);
        }
    }
    found.sort_by(|a, b| a.m().total_cmp(&b.m()));
    found.dedup_by(|a, b| (a.m() - b.m()).abs() < 1e-12);
    Ok(found)
}
