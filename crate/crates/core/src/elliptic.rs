//! Complete elliptic integral of the first kind and the Jacobi elliptic
//! functions sn, cn, dn.
//!
//! Both are computed from the arithmetic-geometric mean of `1` and
//! `sqrt(1 - m)`. The convergence is quadratic and does not degrade as the
//! parameter approaches 1, where power series in `k` become useless.
//!
//! The parameter is always the squared modulus `m = k^2`.

use core::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Iteration cap for the AGM sequences.
const MAX_AGM_STEPS: usize = 32;

/// The AGM sequence stops once `c_n` drops below this.
const AGM_EPS: f64 = 1e-16;

/// Squared elliptic modulus `m = k^2`, restricted to `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(m: f64) -> Result<Self> {
        if m.is_finite() && (0.0..1.0).contains(&m) {
            Ok(EllipticModulus(m))
        } else {
            Err(Error::Domain { what: "squared elliptic modulus", value: m })
        }
    }

    /// The squared modulus `k^2`.
    pub fn m(self) -> f64 {
        self.0
    }

    /// The complementary parameter `1 - m`.
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }

    /// Quarter period `K(m)`.
    pub fn quarter_period(self) -> f64 {
        agm_quarter_period(self.0)
    }

    /// Full period `4 K(m)` of sn and cn.
    pub fn period(self) -> f64 {
        4.0 * self.quarter_period()
    }
}

/// Values of sn, cn and dn at a common argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Derivatives of sn, cn, dn with respect to their argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiDerivatives {
    pub dsn: f64,
    pub dcn: f64,
    pub ddn: f64,
}

/// `K(m) = ∫₀¹ dx / sqrt((1 - x²)(1 - m x²))`.
pub fn complete_k(m: f64) -> Result<f64> {
    Ok(EllipticModulus::new(m)?.quarter_period())
}

fn agm_quarter_period(m: f64) -> f64 {
    let mut a = 1.0;
    let mut b = libm::sqrt(1.0 - m);
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = libm::sqrt(a * b);
        a = next;
    }
    FRAC_PI_2 / a
}

/// sn, cn, dn at argument `t`.
pub fn jacobi(t: f64, m: EllipticModulus) -> Result<JacobiTriple> {
    jacobi_with_quarter(t, m, m.quarter_period())
}

/// Same as [`jacobi`] with a precomputed quarter period.
pub(crate) fn jacobi_with_quarter(t: f64, m: EllipticModulus, quarter: f64) -> Result<JacobiTriple> {
    if !t.is_finite() {
        return Err(Error::Domain { what: "elliptic function argument", value: t });
    }
    let mm = m.m();
    if mm == 0.0 {
        let (sn, cn) = libm::sincos(t);
        return Ok(JacobiTriple { sn, cn, dn: 1.0 });
    }

    let period = 4.0 * quarter;
    let u = t - period * libm::round(t / period);

    // Descending AGM with the phase back-recursion.
    let mut a = [0.0f64; MAX_AGM_STEPS + 1];
    let mut c = [0.0f64; MAX_AGM_STEPS + 1];
    a[0] = 1.0;
    c[0] = libm::sqrt(mm);
    let mut b = libm::sqrt(1.0 - mm);
    let mut steps = 0;
    while c[steps].abs() >= AGM_EPS {
        if steps == MAX_AGM_STEPS {
            return Err(Error::NoConvergence { what: "Jacobi AGM", iterations: steps });
        }
        let (an, bn) = (a[steps], b);
        a[steps + 1] = 0.5 * (an + bn);
        c[steps + 1] = 0.5 * (an - bn);
        b = libm::sqrt(an * bn);
        steps += 1;
    }

    let mut phi = libm::ldexp(a[steps] * u, steps as i32);
    for n in (1..=steps).rev() {
        phi = 0.5 * (phi + libm::asin(c[n] / a[n] * libm::sin(phi)));
    }
    let (sn, cn) = libm::sincos(phi);
    // 1 - m sn² rewritten to avoid cancellation as m -> 1
    let dn = libm::sqrt(cn * cn + (1.0 - mm) * sn * sn);
    Ok(JacobiTriple { sn, cn, dn })
}

/// sn' = cn dn, cn' = -sn dn, dn' = -m sn cn.
pub fn jacobi_derivatives(j: JacobiTriple, m: EllipticModulus) -> JacobiDerivatives {
    JacobiDerivatives { dsn: j.cn * j.dn, dcn: -j.sn * j.dn, ddn: -m.m() * j.sn * j.cn }
}
