//! Conserved quantities along a choreography and their certification over
//! a period grid.
//!
//! Momentum-independent quantities are built from squared mutual distances
//! `r²ᵢⱼ = |xᵢ − xⱼ|²` over a [`PairSet`]. For five bodies there are two
//! canonical sets: nearest neighbors `(i, i+1)` and next-to-nearest
//! `(i, i+2)`, indices taken cyclically.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::choreography::{BodyState, Choreography};
use crate::error::{Error, Result};
use crate::lemniscate::{curvature_sq_inv, Kinematics};
use crate::linalg;
use crate::potential::{self, PotentialParams};
use crate::vec::PlaneVec;

/// Tolerance on `|Σ xᵢ|` below which the hyper-radius identity is trusted.
pub const CM_TOLERANCE: f64 = 1e-9;

/// Default relative tolerance for constancy over a period grid.
pub const CONSTANCY_TOLERANCE: f64 = 1e-9;

/// Below this magnitude a mean is treated as zero and deviations are
/// measured absolutely.
const ZERO_LEVEL: f64 = 1e-8;

/// Largest pair count accepted by the exhaustive subset scan.
const MAX_SCAN_PAIRS: usize = 16;

/// A set of unordered body pairs `(i, j)`, zero-based with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairSet {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairSet {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (i, j) in pairs {
            if i == j || i >= n || j >= n {
                return Err(Error::Index { i, j, n });
            }
            let p = (i.min(j), i.max(j));
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Ok(PairSet { n, pairs: out })
    }

    /// All `n(n−1)/2` pairs in lexicographic order.
    pub fn all(n: usize) -> Self {
        let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        PairSet { n, pairs }
    }

    /// Pairs `(i, i + step mod n)`.
    pub fn cyclic(n: usize, step: usize) -> Result<Self> {
        if step == 0 || step >= n {
            return Err(Error::Domain { what: "cyclic pair step", value: step as f64 });
        }
        PairSet::new(n, (0..n).map(|i| (i, (i + step) % n)))
    }

    pub fn nearest(n: usize) -> Result<Self> {
        PairSet::cyclic(n, 1)
    }

    pub fn next_nearest(n: usize) -> Result<Self> {
        PairSet::cyclic(n, 2)
    }

    /// Subset of [`PairSet::all`] selected by the bits of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let pairs =
            PairSet::all(n).pairs.into_iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, p)| p).collect();
        PairSet { n, pairs }
    }

    /// Bit mask relative to the lexicographic order of [`PairSet::all`].
    pub fn mask(&self) -> u64 {
        PairSet::all(self.n)
            .pairs
            .iter()
            .enumerate()
            .filter(|(_, p)| self.pairs.contains(p))
            .fold(0, |acc, (k, _)| acc | 1 << k)
    }

    pub fn complement(&self) -> Self {
        let pairs = PairSet::all(self.n).pairs.into_iter().filter(|p| !self.pairs.contains(p)).collect();
        PairSet { n: self.n, pairs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i.min(j), i.max(j)))
    }

    pub fn is_all(&self) -> bool {
        self.len() == self.n * (self.n - 1) / 2
    }

    /// One-based listing such as `12 23 34 45 15`.
    pub fn label(&self) -> String {
        let mut s = String::new();
        for (k, (i, j)) in self.pairs.iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            s.push_str(&format!("{}{}", i + 1, j + 1));
        }
        s
    }
}

/// `|xᵢ − xⱼ|²`.
pub fn relative_distance_sq(positions: &[PlaneVec], i: usize, j: usize) -> Result<f64> {
    let n = positions.len();
    if i == j || i >= n || j >= n {
        return Err(Error::Index { i, j, n });
    }
    Ok((positions[i] - positions[j]).norm_sq())
}

fn check_len(positions: &[PlaneVec], ps: &PairSet) -> Result<()> {
    if positions.len() != ps.n() {
        return Err(Error::Shape { expected: ps.n(), found: positions.len() });
    }
    Ok(())
}

/// `Π r²ᵢⱼ` over the pair set.
pub fn product_integral(positions: &[PlaneVec], ps: &PairSet) -> Result<f64> {
    check_len(positions, ps)?;
    Ok(ps.pairs().iter().map(|&(i, j)| (positions[i] - positions[j]).norm_sq()).product())
}

/// `Σ r²ᵢⱼ` over the pair set.
pub fn sum_integral(positions: &[PlaneVec], ps: &PairSet) -> Result<f64> {
    check_len(positions, ps)?;
    Ok(ps.pairs().iter().map(|&(i, j)| (positions[i] - positions[j]).norm_sq()).sum())
}

/// Hyper-radius squared with its moment-of-inertia cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperRadius {
    /// `Σ_{i<j} r²ᵢⱼ`.
    pub value: f64,
    /// `n Σ |xᵢ|²`.
    pub from_inertia: f64,
    pub discrepancy: f64,
}

/// Requires the center of mass at the origin, where `Σ_{i<j} r²ᵢⱼ = n Σ |xᵢ|²`.
pub fn hyper_radius_sq(positions: &[PlaneVec]) -> Result<HyperRadius> {
    let n = positions.len();
    let cm: PlaneVec = positions.iter().copied().sum();
    if cm.norm() > CM_TOLERANCE {
        return Err(Error::CenterOfMassDisplaced { magnitude: cm.norm() });
    }
    let value = sum_integral(positions, &PairSet::all(n))?;
    let from_inertia = n as f64 * positions.iter().map(|p| p.norm_sq()).sum::<f64>();
    Ok(HyperRadius { value, from_inertia, discrepancy: (value - from_inertia).abs() })
}

/// z-component of `Σ xᵢ × vᵢ`.
pub fn angular_momentum(states: &[BodyState]) -> f64 {
    states.iter().map(|s| s.position.cross(s.velocity)).sum()
}

/// `½ Σ |vᵢ|²` with unit masses.
pub fn kinetic_energy(states: &[BodyState]) -> f64 {
    0.5 * states.iter().map(|s| s.velocity.norm_sq()).sum::<f64>()
}

/// `Jᵢ = |vᵢ|² + (m − ½) |xᵢ|²` for each body.
///
/// Equal to ½ for every body and every modulus on the unit curve, so this
/// is a property of the parametrization rather than of the dynamics.
pub fn oscillator_constants(states: &[BodyState], m: f64) -> Vec<f64> {
    states.iter().map(|s| s.velocity.norm_sq() + (m - 0.5) * s.position.norm_sq()).collect()
}

/// `Σ ρᵢ⁻²` from `|v × a| / |v|³`. A body at rest contributes nothing.
pub fn curvature_sum(kinematics: &[Kinematics]) -> f64 {
    kinematics.iter().map(|k| curvature_sq_inv(k.velocity, k.acceleration).unwrap_or(0.0)).sum()
}

/// A scalar evaluated along a choreography.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    AngularMomentum,
    KineticEnergy,
    TotalEnergy(PotentialParams),
    /// `Π r²` over a pair set.
    Product(PairSet),
    /// `Σ r²` over a pair set.
    Sum(PairSet),
    HyperRadius,
    /// Hyper-radius minus the pair-set sum.
    ComplementarySum(PairSet),
    CurvatureSum,
    /// `Jᵢ` of one body (zero-based).
    Oscillator(usize),
}

impl Quantity {
    pub fn name(&self) -> String {
        match self {
            Quantity::AngularMomentum => "angular momentum".into(),
            Quantity::KineticEnergy => "kinetic energy".into(),
            Quantity::TotalEnergy(_) => "total energy".into(),
            Quantity::Product(ps) => format!("product of r^2 over [{}]", ps.label()),
            Quantity::Sum(ps) => format!("sum of r^2 over [{}]", ps.label()),
            Quantity::HyperRadius => "hyper-radius squared".into(),
            Quantity::ComplementarySum(ps) => {
                format!("hyper-radius minus sum over [{}]", ps.label())
            }
            Quantity::CurvatureSum => "sum of squared curvatures".into(),
            Quantity::Oscillator(i) => format!("oscillator constant J{}", i + 1),
        }
    }

    pub fn evaluate(&self, ch: &Choreography, t: f64) -> Result<f64> {
        match self {
            Quantity::AngularMomentum => Ok(angular_momentum(&ch.states(t)?)),
            Quantity::KineticEnergy => Ok(kinetic_energy(&ch.states(t)?)),
            Quantity::TotalEnergy(p) => potential::total_energy(ch, p, t),
            Quantity::Product(ps) => product_integral(&ch.positions(t)?, ps),
            Quantity::Sum(ps) => sum_integral(&ch.positions(t)?, ps),
            Quantity::HyperRadius => Ok(hyper_radius_sq(&ch.positions(t)?)?.value),
            Quantity::ComplementarySum(ps) => {
                let pos = ch.positions(t)?;
                Ok(hyper_radius_sq(&pos)?.value - sum_integral(&pos, ps)?)
            }
            Quantity::CurvatureSum => Ok(curvature_sum(&ch.kinematics(t)?)),
            Quantity::Oscillator(i) => {
                let states = ch.states(t)?;
                let s = states.get(*i).ok_or(Error::Index { i: *i, j: *i, n: states.len() })?;
                Ok(oscillator_constants(core::slice::from_ref(s), ch.modulus().m())[0])
            }
        }
    }

    fn caveat(&self) -> Option<&'static str> {
        match self {
            Quantity::Oscillator(_) => Some("holds for every modulus on the parametrized curve; may not be dynamical"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport {
    pub name: String,
    pub grid_size: usize,
    pub mean: f64,
    /// `max |q(t) − mean|` over the grid.
    pub max_deviation: f64,
    /// `max_deviation / |mean|`, or the absolute deviation when the mean is
    /// at the zero level.
    pub relative_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub caveat: Option<&'static str>,
}

impl ConservationReport {
    fn from_samples(name: String, samples: &[f64], tolerance: f64, caveat: Option<&'static str>) -> Self {
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let max_deviation = samples.iter().map(|q| (q - mean).abs()).fold(0.0, f64::max);
        let scale = if mean.abs() >= ZERO_LEVEL { mean.abs() } else { 1.0 };
        let relative_deviation = max_deviation / scale;
        ConservationReport {
            name,
            grid_size: samples.len(),
            mean,
            max_deviation,
            relative_deviation,
            tolerance,
            pass: relative_deviation <= tolerance,
            caveat,
        }
    }
}

/// Smallest and largest separation of one pair over a period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceExtrema {
    pub min: f64,
    pub t_min: f64,
    pub max: f64,
    pub t_max: f64,
}

/// Extrema of `r_ij(t)`: a `grid_size` scan followed by golden-section
/// refinement around the best grid points.
pub fn distance_extrema(ch: &Choreography, i: usize, j: usize, grid_size: usize) -> Result<DistanceExtrema> {
    if grid_size < 16 {
        return Err(Error::Domain { what: "extremum grid size", value: grid_size as f64 });
    }
    let n = ch.n();
    if i >= n || j >= n || i == j {
        return Err(Error::Index { i, j, n });
    }
    let r2 = |t: f64| -> Result<f64> { relative_distance_sq(&ch.positions(t)?, i, j) };
    let grid = period_grid(ch, grid_size);
    let samples = grid.iter().map(|&t| r2(t)).collect::<Result<Vec<f64>>>()?;
    let h = ch.period() / grid_size as f64;
    let refine = |k: usize, sign: f64| -> Result<(f64, f64)> {
        const G: f64 = 0.618_033_988_749_894_8;
        let (mut a, mut b) = (grid[k] - h, grid[k] + h);
        let (mut c, mut d) = (b - G * (b - a), a + G * (b - a));
        let (mut fc, mut fd) = (sign * r2(c)?, sign * r2(d)?);
        while b - a > 1e-15 * (1.0 + a.abs()) {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - G * (b - a);
                fc = sign * r2(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + G * (b - a);
                fd = sign * r2(d)?;
            }
        }
        let t = 0.5 * (a + b);
        Ok((t, libm::sqrt(r2(t)?)))
    };
    let arg = |sign: f64| {
        (0..samples.len()).min_by(|&a, &b| (sign * samples[a]).total_cmp(&(sign * samples[b]))).unwrap_or(0)
    };
    let (t_min, min) = refine(arg(1.0), 1.0)?;
    let (t_max, max) = refine(arg(-1.0), -1.0)?;
    Ok(DistanceExtrema { min, t_min, max, t_max })
}

/// Equispaced times `j τ / grid_size`, `j = 0 … grid_size − 1`.
pub fn period_grid(ch: &Choreography, grid_size: usize) -> Vec<f64> {
    let tau = ch.period();
    (0..grid_size).map(|j| j as f64 * tau / grid_size as f64).collect()
}

/// Evaluate `q` over one period and compare its spread with `tolerance`.
pub fn constancy_report(
    ch: &Choreography,
    q: &Quantity,
    grid_size: usize,
    tolerance: f64,
) -> Result<ConservationReport> {
    if grid_size < 8 {
        return Err(Error::Domain { what: "constancy grid size", value: grid_size as f64 });
    }
    let samples = period_grid(ch, grid_size).into_iter().map(|t| q.evaluate(ch, t)).collect::<Result<Vec<f64>>>()?;
    Ok(ConservationReport::from_samples(q.name(), &samples, tolerance, q.caveat()))
}

/// Relative spread of `Π r²` over a 64-point period grid.
fn product_spread(ch: &Choreography, ps: &PairSet) -> Result<f64> {
    Ok(constancy_report(ch, &Quantity::Product(ps.clone()), 64, 0.0)?.relative_deviation)
}

/// The cyclic pair set `(i, i+d)` whose product is most nearly constant.
///
/// For five bodies this picks the nearest-neighbor set at the smaller
/// modulus and the next-to-nearest set at the larger one.
pub fn conserved_pair_set(ch: &Choreography) -> Result<PairSet> {
    let n = ch.n();
    let mut best: Option<(f64, PairSet)> = None;
    for d in 1..=n / 2 {
        let ps = PairSet::cyclic(n, d)?;
        let spread = product_spread(ch, &ps)?;
        if best.as_ref().is_none_or(|(s, _)| spread < *s) {
            best = Some((spread, ps));
        }
    }
    best.map(|(_, ps)| ps).ok_or(Error::Domain { what: "body count", value: n as f64 })
}

/// Largest pointwise mismatch between `r²(t)` of each pair in `ps` and
/// `r²(t + s τ/n)` of its first pair, where `s` is the cyclic relabeling
/// carrying the first pair onto the other.
pub fn shift_coincidence(ch: &Choreography, ps: &PairSet, grid_size: usize) -> Result<f64> {
    let n = ch.n();
    let step = ch.period() / n as f64;
    let &(i0, j0) = ps.pairs().first().ok_or(Error::Domain { what: "empty pair set", value: 0.0 })?;
    let mut worst = 0.0f64;
    for &(i, j) in ps.pairs() {
        let shift = (0..n)
            .find(|&s| {
                let (a, b) = ((i0 + s) % n, (j0 + s) % n);
                (a.min(b), a.max(b)) == (i, j)
            })
            .ok_or(Error::Index { i, j, n })?;
        for t in period_grid(ch, grid_size) {
            let here = relative_distance_sq(&ch.positions(t)?, i, j)?;
            let reference = relative_distance_sq(&ch.positions(t + shift as f64 * step)?, i0, j0)?;
            worst = worst.max((here - reference).abs());
        }
    }
    Ok(worst)
}

/// Whether a pair subset survives as a sum or a product integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubsetForm {
    Sum,
    Product,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSurvivor {
    pub set: PairSet,
    pub form: SubsetForm,
}

/// Every non-empty subset of all pairs whose sum or product of `r²` is
/// constant to `tolerance` over a `grid_size` period grid.
pub fn scan_pair_subsets(ch: &Choreography, grid_size: usize, tolerance: f64) -> Result<Vec<SubsetSurvivor>> {
    let n = ch.n();
    let all = PairSet::all(n);
    if all.len() > MAX_SCAN_PAIRS {
        return Err(Error::Domain { what: "pair count for exhaustive scan", value: all.len() as f64 });
    }
    if grid_size < 8 {
        return Err(Error::Domain { what: "constancy grid size", value: grid_size as f64 });
    }
    // r² of every pair on the grid
    let table = period_grid(ch, grid_size)
        .into_iter()
        .map(|t| {
            let pos = ch.positions(t)?;
            Ok(all.pairs().iter().map(|&(i, j)| (pos[i] - pos[j]).norm_sq()).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;

    let mut survivors = Vec::new();
    let mut sums = Vec::with_capacity(grid_size);
    let mut prods = Vec::with_capacity(grid_size);
    for mask in 1u64..(1 << all.len()) {
        sums.clear();
        prods.clear();
        for row in &table {
            let (mut s, mut p) = (0.0, 1.0);
            for (k, r2) in row.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    s += r2;
                    p *= r2;
                }
            }
            sums.push(s);
            prods.push(p);
        }
        for (form, samples) in [(SubsetForm::Sum, &sums), (SubsetForm::Product, &prods)] {
            if ConservationReport::from_samples(String::new(), samples, tolerance, None).pass {
                survivors.push(SubsetSurvivor { set: PairSet::from_mask(n, mask), form });
            }
        }
    }
    Ok(survivors)
}

/// Numerical rank of the phase-space gradients of the listed conserved
/// quantities at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    pub names: Vec<String>,
    pub singular_values: Vec<f64>,
    pub rank: usize,
}

/// Gradients of `L, E, T, Π r², Σ r², I_HR, J₁ … Jₙ` with respect to the
/// `4n` phase-space coordinates, by central differences, and their rank.
///
/// This is a local diagnostic; it does not establish functional
/// independence along the whole trajectory.
pub fn independence_rank(ch: &Choreography, p: &PotentialParams, t: f64, rel_tol: f64) -> Result<RankReport> {
    let n = ch.n();
    let m = ch.modulus().m();
    let ps = &p.log_set;
    let state = ch.states(t)?;
    let mut z: Vec<f64> = Vec::with_capacity(4 * n);
    for s in &state {
        z.extend_from_slice(&[s.position.x, s.position.y, s.velocity.x, s.velocity.y]);
    }
    let unpack = |z: &[f64]| -> Vec<BodyState> {
        z.chunks_exact(4)
            .map(|c| BodyState { position: PlaneVec::new(c[0], c[1]), velocity: PlaneVec::new(c[2], c[3]) })
            .collect()
    };
    let mut names: Vec<String> =
        ["angular momentum", "total energy", "kinetic energy"].iter().map(|s| String::from(*s)).collect();
    names.push(Quantity::Product(ps.clone()).name());
    names.push(Quantity::Sum(ps.clone()).name());
    names.push("hyper-radius squared".into());
    for i in 0..n {
        names.push(Quantity::Oscillator(i).name());
    }
    let eval = |z: &[f64]| -> Result<Vec<f64>> {
        let st = unpack(z);
        let pos: Vec<PlaneVec> = st.iter().map(|s| s.position).collect();
        let mut out = Vec::with_capacity(6 + n);
        out.push(angular_momentum(&st));
        out.push(kinetic_energy(&st) + potential::potential_energy(&pos, p)?);
        out.push(kinetic_energy(&st));
        out.push(product_integral(&pos, ps)?);
        out.push(sum_integral(&pos, ps)?);
        out.push(sum_integral(&pos, &PairSet::all(n))?);
        out.extend(oscillator_constants(&st, m));
        Ok(out)
    };
    let rows = names.len();
    let cols = z.len();
    let h = 1e-6;
    let mut grad = alloc::vec![0.0; rows * cols];
    for c in 0..cols {
        let mut zp = z.clone();
        let mut zm = z.clone();
        zp[c] += h;
        zm[c] -= h;
        let (fp, fm) = (eval(&zp)?, eval(&zm)?);
        for r in 0..rows {
            grad[r * cols + c] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    let singular_values = linalg::singular_values(rows, cols, &grad);
    let top = singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values.iter().filter(|&&s| s > rel_tol * top).count();
    Ok(RankReport { names, singular_values, rank })
}

#[cfg(test)]
mod tests {
    use super::*;

    const K0_SQ: f64 = 0.933_012_701_892_219_323_38;
    const K1_SQ: f64 = 0.653_660_413_954_773_213_45;
    const K2_SQ: f64 = 0.997_643_736_031_613_235_09;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn canonical_five_body_sets() {
        let near = PairSet::nearest(5).unwrap();
        let next = PairSet::next_nearest(5).unwrap();
        let expect_near = PairSet::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let expect_next = PairSet::new(5, [(0, 2), (2, 4), (1, 4), (1, 3), (0, 3)]).unwrap();
        assert_eq!(near.mask(), expect_near.mask());
        assert_eq!(next.mask(), expect_next.mask());
        assert_eq!(near.mask() & next.mask(), 0);
        assert_eq!(near.mask() | next.mask(), PairSet::all(5).mask());
        assert_eq!(near.complement().mask(), next.mask());
        assert_eq!(near.label(), "12 23 34 45 15");
        assert_eq!(PairSet::from_mask(5, near.mask()).mask(), near.mask());
    }

    #[test]
    fn pair_set_validation() {
        assert!(PairSet::new(3, [(0, 0)]).is_err());
        assert!(PairSet::new(3, [(0, 3)]).is_err());
        assert_eq!(PairSet::new(3, [(1, 0), (0, 1)]).unwrap().len(), 1);
        assert!(PairSet::cyclic(3, 1).unwrap().is_all());
    }

    #[test]
    fn distance_basics() {
        let p = [PlaneVec::new(1.0, 2.0), PlaneVec::new(1.0, 2.0), PlaneVec::new(4.0, 6.0)];
        assert_eq!(relative_distance_sq(&p, 0, 1).unwrap(), 0.0);
        assert_eq!(relative_distance_sq(&p, 0, 2).unwrap(), 25.0);
        assert_eq!(relative_distance_sq(&p, 2, 0).unwrap(), 25.0);
        assert_eq!(relative_distance_sq(&p, 1, 1), Err(Error::Index { i: 1, j: 1, n: 3 }));
        assert!(relative_distance_sq(&p, 0, 5).is_err());
    }

    #[test]
    fn distance_extrema_of_both_sets() {
        let cases = [
            (K1_SQ, 1, (0.686_672_792_999_055_739_44, 1.108_730_495_493_916_550)),
            (K1_SQ, 2, (0.384_116_843_263_971_867_57, 1.889_145_301_630_350_845)),
            (K2_SQ, 1, (0.266_364_373_575_082_289_93, 1.791_384_757_193_238_657_4)),
            (K2_SQ, 2, (0.667_190_070_217_608_726_92, 1.995_281_906_962_749_432_1)),
        ];
        for (m, j, (lo, hi)) in cases {
            let ch = Choreography::unit(5, m).unwrap();
            let e = distance_extrema(&ch, 0, j, 1024).unwrap();
            assert!((e.min - lo).abs() < 1e-9, "{m} {j} {e:?}");
            assert!((e.max - hi).abs() < 1e-9, "{m} {j} {e:?}");
        }
        let ch = Choreography::unit(5, K1_SQ).unwrap();
        assert!(distance_extrema(&ch, 0, 1, 4).is_err());
    }

    #[test]
    fn extrema_at_snapshot_times() {
        // at t = 0 pairs (1,5), (2,4) are at their maxima; at t = K/5 pair
        // (1,2) is at its minimum
        let ch = Choreography::unit(5, K1_SQ).unwrap();
        let e12 = distance_extrema(&ch, 0, 1, 512).unwrap();
        let e13 = distance_extrema(&ch, 0, 2, 512).unwrap();
        let p0 = ch.positions(0.0).unwrap();
        assert!((relative_distance_sq(&p0, 0, 4).unwrap().sqrt() - e12.max).abs() < 1e-12);
        assert!((relative_distance_sq(&p0, 1, 3).unwrap().sqrt() - e13.max).abs() < 1e-12);
        let pk = ch.positions(ch.curve().quarter_period() / 5.0).unwrap();
        assert!((relative_distance_sq(&pk, 0, 1).unwrap().sqrt() - e12.min).abs() < 1e-12);
        assert!((relative_distance_sq(&pk, 2, 4).unwrap().sqrt() - e13.min).abs() < 1e-12);
    }

    #[test]
    fn three_body_integrals() {
        let ch = Choreography::unit(3, K0_SQ).unwrap();
        let all = PairSet::all(3);
        let s3 = 3f64.sqrt();
        for t in [0.0, 0.4, 1.3] {
            let pos = ch.positions(t).unwrap();
            assert!(rel(product_integral(&pos, &all).unwrap(), 1.5 * s3) < 1e-12);
            assert!(rel(sum_integral(&pos, &all).unwrap(), 3.0 * s3) < 1e-12);
            let hr = hyper_radius_sq(&pos).unwrap();
            assert!(rel(hr.value, 3.0 * s3) < 1e-12);
            assert!(hr.discrepancy < 1e-12);
            let states = ch.states(t).unwrap();
            assert!((kinetic_energy(&states) - 0.375).abs() < 1e-12);
        }
    }

    #[test]
    fn five_body_reference_values() {
        let ch1 = Choreography::unit(5, K1_SQ).unwrap();
        let ch2 = Choreography::unit(5, K2_SQ).unwrap();
        let near = PairSet::nearest(5).unwrap();
        let next = PairSet::next_nearest(5).unwrap();
        let t = 0.77;
        let (p1, p2) = (ch1.positions(t).unwrap(), ch2.positions(t).unwrap());
        assert!(rel(product_integral(&p1, &near).unwrap(), 0.263_621_783_034_087_071_10) < 1e-10);
        assert!(rel(product_integral(&p2, &next).unwrap(), 30.760_801_541_637_359_790) < 1e-10);
        assert!(rel(sum_integral(&p1, &near).unwrap(), 4.051_781_784_546_830_841_4) < 1e-10);
        assert!(rel(sum_integral(&p2, &next).unwrap(), 12.515_257_719_766_335_417) < 1e-10);
        assert!(rel(hyper_radius_sq(&p1).unwrap().value, 11.995_383_205_775_537_457) < 1e-10);
        assert!(rel(hyper_radius_sq(&p2).unwrap().value, 17.975_523_091_392_961_251) < 1e-10);
        assert!(rel(kinetic_energy(&ch1.states(t).unwrap()), 1.065_678_445_105_439_6) < 1e-10);
        assert!(rel(kinetic_energy(&ch2.states(t).unwrap()), 0.355_459_353_167_667_29) < 1e-10);
        assert!(angular_momentum(&ch1.states(t).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn hyper_radius_needs_centered_bodies() {
        let p = [PlaneVec::new(1.0, 0.0), PlaneVec::new(2.0, 0.0)];
        assert!(matches!(hyper_radius_sq(&p), Err(Error::CenterOfMassDisplaced { .. })));
    }

    #[test]
    fn oscillator_constants_are_half() {
        let ch = Choreography::unit(5, K1_SQ).unwrap();
        for j in oscillator_constants(&ch.states(0.3).unwrap(), K1_SQ) {
            assert!((j - 0.5).abs() < 1e-12);
        }
        // a single body on a non-choreographic curve
        let single = Choreography::unit(2, 0.3).unwrap();
        for t in [0.0, 0.9, 2.2] {
            for j in oscillator_constants(&single.states(t).unwrap(), 0.3) {
                assert!((j - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn curvature_sum_identity() {
        let ch1 = Choreography::unit(5, K1_SQ).unwrap();
        let ch2 = Choreography::unit(5, K2_SQ).unwrap();
        let s1 = curvature_sum(&ch1.kinematics(0.21).unwrap());
        let s2 = curvature_sum(&ch2.kinematics(0.21).unwrap());
        assert!(rel(s1, 1.8 * 11.995_383_205_775_537_457) < 1e-9);
        assert!(rel(s1, 21.591_689_770_395_967) < 1e-9);
        assert!(rel(s2, 1.8 * 17.975_523_091_392_961_251) < 1e-9);
        // one body at the vertex (1, 0)
        let vertex = ch1.curve().kinematics(ch1.curve().quarter_period()).unwrap();
        assert!((curvature_sum(&[vertex]) - 9.0).abs() < 1e-9);
    }

    #[test]
    fn constancy_reports() {
        let ch1 = Choreography::unit(5, K1_SQ).unwrap();
        let near = PairSet::nearest(5).unwrap();
        let good = constancy_report(&ch1, &Quantity::Product(near.clone()), 256, 1e-9).unwrap();
        assert!(good.pass, "{good:?}");
        let bad = constancy_report(&ch1, &Quantity::Product(near.complement()), 256, 1e-9).unwrap();
        assert!(!bad.pass);
        assert!(bad.relative_deviation > 1e-2, "{}", bad.relative_deviation);
        // the complementary sum is hyper-radius minus a conserved sum
        let comp = constancy_report(&ch1, &Quantity::Sum(near.complement()), 256, 1e-9).unwrap();
        assert!(comp.pass);

        let ch2 = Choreography::unit(5, K2_SQ).unwrap();
        let t = constancy_report(&ch2, &Quantity::KineticEnergy, 256, 1e-9).unwrap();
        assert!(t.pass);
        assert!(rel(t.mean, 0.355_459_353_167_667_29) < 1e-12);
        assert!(constancy_report(&ch2, &Quantity::KineticEnergy, 4, 1e-9).is_err());

        let j = constancy_report(&ch2, &Quantity::Oscillator(3), 64, 1e-9).unwrap();
        assert!(j.pass && j.caveat.is_some());
    }

    #[test]
    fn complementary_sum_is_other_set() {
        let ch = Choreography::unit(5, K1_SQ).unwrap();
        let near = PairSet::nearest(5).unwrap();
        let a = Quantity::ComplementarySum(near.clone()).evaluate(&ch, 0.6).unwrap();
        let b = Quantity::Sum(near.complement()).evaluate(&ch, 0.6).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn selects_the_conserved_set() {
        let ch1 = Choreography::unit(5, K1_SQ).unwrap();
        let ch2 = Choreography::unit(5, K2_SQ).unwrap();
        assert_eq!(conserved_pair_set(&ch1).unwrap(), PairSet::nearest(5).unwrap());
        assert_eq!(conserved_pair_set(&ch2).unwrap(), PairSet::next_nearest(5).unwrap());
        assert!(conserved_pair_set(&Choreography::unit(3, K0_SQ).unwrap()).unwrap().is_all());
    }

    #[test]
    fn time_shift_structure_within_sets() {
        for (m, ps) in [(K1_SQ, PairSet::nearest(5).unwrap()), (K2_SQ, PairSet::next_nearest(5).unwrap())] {
            let ch = Choreography::unit(5, m).unwrap();
            assert!(shift_coincidence(&ch, &ps, 128).unwrap() <= 1e-10);
            assert!(shift_coincidence(&ch, &ps.complement(), 128).unwrap() <= 1e-10);
        }
    }
}
