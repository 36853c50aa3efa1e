//! The lemniscate of Bernoulli `(x² + y²)² = c² (x² − y²)` traversed by
//!
//! ```text
//! x(t) = c sn / (1 + cn²),   y(t) = c sn cn / (1 + cn²)
//! ```
//!
//! with the time `t` as argument of the Jacobi functions. Velocity and
//! acceleration are the exact derivatives of this map.

use crate::elliptic::{jacobi_with_quarter, EllipticModulus};
use crate::error::{Error, Result};
use crate::vec::PlaneVec;

/// Position, velocity and acceleration at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub position: PlaneVec,
    pub velocity: PlaneVec,
    pub acceleration: PlaneVec,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemniscateCurve {
    c: f64,
    modulus: EllipticModulus,
    quarter: f64,
}

impl LemniscateCurve {
    pub fn new(c: f64, modulus: EllipticModulus) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Domain { what: "lemniscate scale c", value: c });
        }
        Ok(LemniscateCurve { c, modulus, quarter: modulus.quarter_period() })
    }

    /// The curve with `c = 1`.
    pub fn unit(modulus: EllipticModulus) -> Self {
        LemniscateCurve { c: 1.0, modulus, quarter: modulus.quarter_period() }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn modulus(&self) -> EllipticModulus {
        self.modulus
    }

    pub fn quarter_period(&self) -> f64 {
        self.quarter
    }

    /// Period of the x-motion, `4K`.
    pub fn period(&self) -> f64 {
        4.0 * self.quarter
    }

    pub fn position(&self, t: f64) -> Result<PlaneVec> {
        let j = jacobi_with_quarter(t, self.modulus, self.quarter)?;
        let scale = self.c * j.sn / (1.0 + j.cn * j.cn);
        Ok(PlaneVec::new(scale, scale * j.cn))
    }

    pub fn velocity(&self, t: f64) -> Result<PlaneVec> {
        Ok(self.kinematics(t)?.velocity)
    }

    pub fn acceleration(&self, t: f64) -> Result<PlaneVec> {
        Ok(self.kinematics(t)?.acceleration)
    }

    /// Position and its first two time derivatives in closed form.
    pub fn kinematics(&self, t: f64) -> Result<Kinematics> {
        let m = self.modulus.m();
        let j = jacobi_with_quarter(t, self.modulus, self.quarter)?;
        let (s, cn, dn) = (j.sn, j.cn, j.dn);
        let dn2 = dn * dn;

        let s1 = cn * dn;
        let c1 = -s * dn;
        let s2 = -s * (dn2 + m * cn * cn);
        let c2 = cn * (m * s * s - dn2);

        // u = 1 / (1 + cn²)
        let den = 1.0 + cn * cn;
        let u = 1.0 / den;
        let den1 = 2.0 * cn * c1;
        let den2 = 2.0 * (c1 * c1 + cn * c2);
        let u1 = -den1 * u * u;
        let u2 = (2.0 * den1 * den1 * u - den2) * u * u;

        // y = p u with p = sn cn
        let p = s * cn;
        let p1 = s1 * cn + s * c1;
        let p2 = s2 * cn + 2.0 * s1 * c1 + s * c2;

        let c = self.c;
        Ok(Kinematics {
            position: PlaneVec::new(c * s * u, c * p * u),
            velocity: PlaneVec::new(c * (s1 * u + s * u1), c * (p1 * u + p * u1)),
            acceleration: PlaneVec::new(c * (s2 * u + 2.0 * s1 * u1 + s * u2), c * (p2 * u + 2.0 * p1 * u1 + p * u2)),
        })
    }

    /// Squared curvature `ρ⁻²` at time `t`.
    pub fn curvature_sq_inv(&self, t: f64) -> Result<f64> {
        let k = self.kinematics(t)?;
        curvature_sq_inv(k.velocity, k.acceleration)
    }
}

/// `(|v × a| / |v|³)²`.
pub fn curvature_sq_inv(velocity: PlaneVec, acceleration: PlaneVec) -> Result<f64> {
    let v2 = velocity.norm_sq();
    if v2 == 0.0 {
        return Err(Error::DegeneratePoint);
    }
    let cross = velocity.cross(acceleration);
    Ok(cross * cross / (v2 * v2 * v2))
}

/// `(x² + y²)² − c² (x² − y²)`, zero exactly on the curve.
pub fn on_curve_residual(p: PlaneVec, c: f64) -> f64 {
    let r2 = p.norm_sq();
    r2 * r2 - c * c * (p.x * p.x - p.y * p.y)
}
