use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A vector in the plane of motion.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlaneVec {
    pub x: f64,
    pub y: f64,
}

impl PlaneVec {
    pub const ZERO: PlaneVec = PlaneVec { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        PlaneVec { x, y }
    }

    pub fn dot(self, other: PlaneVec) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product.
    pub fn cross(self, other: PlaneVec) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for PlaneVec {
    type Output = PlaneVec;
    fn add(self, rhs: PlaneVec) -> PlaneVec {
        PlaneVec::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for PlaneVec {
    type Output = PlaneVec;
    fn sub(self, rhs: PlaneVec) -> PlaneVec {
        PlaneVec::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for PlaneVec {
    type Output = PlaneVec;
    fn neg(self) -> PlaneVec {
        PlaneVec::new(-self.x, -self.y)
    }
}

impl Mul<PlaneVec> for f64 {
    type Output = PlaneVec;
    fn mul(self, rhs: PlaneVec) -> PlaneVec {
        PlaneVec::new(self * rhs.x, self * rhs.y)
    }
}

impl AddAssign for PlaneVec {
    fn add_assign(&mut self, rhs: PlaneVec) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl SubAssign for PlaneVec {
    fn sub_assign(&mut self, rhs: PlaneVec) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl core::iter::Sum for PlaneVec {
    fn sum<I: Iterator<Item = PlaneVec>>(iter: I) -> PlaneVec {
        iter.fold(PlaneVec::ZERO, |acc, v| acc + v)
    }
}
