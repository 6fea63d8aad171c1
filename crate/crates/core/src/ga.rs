//! Cl(3,0) kernel.
//!
//! Every element is stored in one fixed right-handed component basis
//! `{1; e1, e2, e3; e23, e31, e12; e123}`. With this ordering the dual of a
//! vector is a coefficient copy: `I e1 = e23`, `I e2 = e31`, `I e3 = e12`.
//!
//! The left-handed algebra is never given its own coefficient convention.
//! It is reached through [`oriented_product`], which reverses the order of
//! the factors when the orientation is negative.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for identities that hold exactly in real arithmetic.
pub const EXACT_TOL: f64 = 1e-12;
/// Absolute tolerance for chained or accumulated checks.
pub const CHAINED_TOL: f64 = 1e-10;
/// Largest deviation from unit norm accepted by [`Direction::new`].
pub const UNIT_INPUT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaError {
    #[error("direction has norm {norm}, expected 1 within {UNIT_INPUT_TOL}")]
    NotUnit { norm: f64 },
    #[error("cannot normalize a vector of norm {norm}")]
    Degenerate { norm: f64 },
    #[error("basis index {0} out of range, expected 1, 2 or 3")]
    IndexOutOfRange(usize),
    #[error("odd-grade part has magnitude {magnitude}, above tolerance {EXACT_TOL}")]
    OddGrade { magnitude: f64 },
}

pub mod blade {
    pub const SCALAR: usize = 0;
    pub const E1: usize = 1;
    pub const E2: usize = 2;
    pub const E3: usize = 3;
    pub const E23: usize = 4;
    pub const E31: usize = 5;
    pub const E12: usize = 6;
    pub const E123: usize = 7;

    pub const NAMES: [&str; 8] = ["1", "e1", "e2", "e3", "e23", "e31", "e12", "e123"];
    pub const GRADES: [usize; 8] = [0, 1, 1, 1, 2, 2, 2, 3];
}

/// Plain Euclidean 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vector3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vector3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vector3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// A unit 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Direction(Vector3);

impl Direction {
    pub const X: Self = Self(Vector3::new(1.0, 0.0, 0.0));
    pub const Y: Self = Self(Vector3::new(0.0, 1.0, 0.0));
    pub const Z: Self = Self(Vector3::new(0.0, 0.0, 1.0));

    /// Accepts a vector that is already unit within [`UNIT_INPUT_TOL`] and
    /// renormalizes it.
    pub fn new(v: Vector3) -> Result<Self, GaError> {
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_INPUT_TOL {
            return Err(GaError::NotUnit { norm });
        }
        Ok(Self(v.scale(1.0 / norm)))
    }

    /// Caller guarantees `v` is unit within [`EXACT_TOL`].
    pub(crate) fn from_unit_unchecked(v: Vector3) -> Self {
        debug_assert!((v.norm() - 1.0).abs() <= EXACT_TOL);
        Self(v)
    }

    /// Scales any finite nonzero vector onto the unit sphere.
    pub fn normalize(v: Vector3) -> Result<Self, GaError> {
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(GaError::Degenerate { norm });
        }
        Ok(Self(v.scale(1.0 / norm)))
    }

    /// Unit vector at `degrees` from +x in the xy-plane.
    pub fn planar(degrees: f64) -> Self {
        let (s, c) = degrees.to_radians().sin_cos();
        Self(Vector3::new(c, s, 0.0))
    }

    /// Unit vector along basis axis `mu` (1-based).
    pub fn axis(mu: usize) -> Result<Self, GaError> {
        match mu {
            1 => Ok(Self::X),
            2 => Ok(Self::Y),
            3 => Ok(Self::Z),
            _ => Err(GaError::IndexOutOfRange(mu)),
        }
    }

    pub fn vector(self) -> Vector3 {
        self.0
    }

    pub fn dot(self, other: Self) -> f64 {
        self.0.dot(other.0)
    }

    pub fn cross(self, other: Self) -> Vector3 {
        self.0.cross(other.0)
    }
}

impl Neg for Direction {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// Handedness of the algebra used for a trial: `+1` right-handed, `-1` left-handed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Right,
    Left,
}

impl Orientation {
    pub const BOTH: [Self; 2] = [Self::Right, Self::Left];

    pub fn sign(self) -> i8 {
        match self {
            Self::Right => 1,
            Self::Left => -1,
        }
    }

    pub fn value(self) -> f64 {
        f64::from(self.sign())
    }

    pub fn from_sign(sign: i8) -> Option<Self> {
        match sign {
            1 => Some(Self::Right),
            -1 => Some(Self::Left),
            _ => None,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.sign())
    }
}

/// General element of Cl(3,0).
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Multivector([f64; 8]);

impl Multivector {
    pub const ZERO: Self = Self([0.0; 8]);
    pub const ONE: Self = Self::basis(blade::SCALAR);
    pub const E1: Self = Self::basis(blade::E1);
    pub const E2: Self = Self::basis(blade::E2);
    pub const E3: Self = Self::basis(blade::E3);
    pub const E23: Self = Self::basis(blade::E23);
    pub const E31: Self = Self::basis(blade::E31);
    pub const E12: Self = Self::basis(blade::E12);
    /// Right-handed unit pseudoscalar `e1 e2 e3`.
    pub const I: Self = Self::basis(blade::E123);

    pub const fn new(coefficients: [f64; 8]) -> Self {
        Self(coefficients)
    }

    pub const fn basis(index: usize) -> Self {
        let mut c = [0.0; 8];
        c[index] = 1.0;
        Self(c)
    }

    pub const fn scalar(s: f64) -> Self {
        Self([s, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    }

    pub fn vector(v: Vector3) -> Self {
        Self([0.0, v.x, v.y, v.z, 0.0, 0.0, 0.0, 0.0])
    }

    /// Bivector with the given `e23, e31, e12` coefficients.
    pub const fn bivector(b23: f64, b31: f64, b12: f64) -> Self {
        Self([0.0, 0.0, 0.0, 0.0, b23, b31, b12, 0.0])
    }

    pub fn coefficients(&self) -> [f64; 8] {
        self.0
    }

    pub fn scalar_part(&self) -> f64 {
        self.0[blade::SCALAR]
    }

    /// Grade-`k` projection; grades above 3 are zero.
    pub fn grade(&self, k: usize) -> Self {
        let mut out = [0.0; 8];
        for (i, c) in self.0.iter().enumerate() {
            if blade::GRADES[i] == k {
                out[i] = *c;
            }
        }
        Self(out)
    }

    /// `(e23, e31, e12)` coefficients read back as the dual vector.
    pub fn bivector_axis(&self) -> Vector3 {
        Vector3::new(self.0[blade::E23], self.0[blade::E31], self.0[blade::E12])
    }

    /// Reversion: grades 2 and 3 change sign.
    pub fn reverse(&self) -> Self {
        let c = self.0;
        Self([c[0], c[1], c[2], c[3], -c[4], -c[5], -c[6], -c[7]])
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_even(&self, tol: f64) -> bool {
        self.odd_magnitude() <= tol
    }

    fn odd_magnitude(&self) -> f64 {
        [blade::E1, blade::E2, blade::E3, blade::E123]
            .iter()
            .fold(0.0_f64, |m, &i| m.max(self.0[i].abs()))
    }

    pub fn scale(&self, k: f64) -> Self {
        Self(self.0.map(|c| c * k))
    }

    /// Cl(3,0) geometric product with `e_i e_i = +1`.
    pub fn geometric(&self, y: &Self) -> Self {
        let x = &self.0;
        let y = &y.0;
        Self([
            x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]
                - x[4] * y[4]
                - x[5] * y[5]
                - x[6] * y[6]
                - x[7] * y[7],
            x[0] * y[1] + x[1] * y[0] - x[2] * y[6] + x[3] * y[5]
                - x[4] * y[7]
                - x[5] * y[3]
                + x[6] * y[2]
                - x[7] * y[4],
            x[0] * y[2] + x[1] * y[6] + x[2] * y[0] - x[3] * y[4] + x[4] * y[3]
                - x[5] * y[7]
                - x[6] * y[1]
                - x[7] * y[5],
            x[0] * y[3] - x[1] * y[5] + x[2] * y[4] + x[3] * y[0] - x[4] * y[2] + x[5] * y[1]
                - x[6] * y[7]
                - x[7] * y[6],
            x[0] * y[4] + x[1] * y[7] + x[2] * y[3] - x[3] * y[2] + x[4] * y[0] - x[5] * y[6]
                + x[6] * y[5]
                + x[7] * y[1],
            x[0] * y[5] - x[1] * y[3] + x[2] * y[7] + x[3] * y[1] + x[4] * y[6] + x[5] * y[0]
                - x[6] * y[4]
                + x[7] * y[2],
            x[0] * y[6] + x[1] * y[2] - x[2] * y[1] + x[3] * y[7] - x[4] * y[5]
                + x[5] * y[4]
                + x[6] * y[0]
                + x[7] * y[3],
            x[0] * y[7]
                + x[1] * y[4]
                + x[2] * y[5]
                + x[3] * y[6]
                + x[4] * y[1]
                + x[5] * y[2]
                + x[6] * y[3]
                + x[7] * y[0],
        ])
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.0.iter().zip(blade::NAMES) {
            if *c == 0.0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if name == "1" {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{name}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Index<usize> for Multivector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(o.0) {
            *a += b;
        }
        Self(c)
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

impl Mul for Multivector {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.geometric(&o)
    }
}

impl Mul<f64> for Multivector {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, m: Multivector) -> Multivector {
        m.scale(self)
    }
}

impl From<f64> for Multivector {
    fn from(s: f64) -> Self {
        Self::scalar(s)
    }
}

pub fn geometric_product(x: &Multivector, y: &Multivector) -> Multivector {
    x.geometric(y)
}

/// `I v` for an arbitrary (not necessarily unit) vector.
pub fn dual(v: Vector3) -> Multivector {
    Multivector::bivector(v.x, v.y, v.z)
}

/// `I n`: the unit bivector for the plane orthogonal to `n`.
pub fn unit_bivector(n: Direction) -> Multivector {
    dual(n.vector())
}

/// Product of two factors under a handedness: `xy` for right-handed,
/// `yx` for left-handed.
pub fn oriented_product(orientation: Orientation, x: &Multivector, y: &Multivector) -> Multivector {
    match orientation {
        Orientation::Right => x.geometric(y),
        Orientation::Left => y.geometric(x),
    }
}

/// n-ary extension of [`oriented_product`]: a left-handed product multiplies
/// the factors in reverse order.
pub fn oriented_chain(orientation: Orientation, factors: &[Multivector]) -> Multivector {
    let step = |acc: Multivector, f: &Multivector| acc.geometric(f);
    match orientation {
        Orientation::Right => factors.iter().fold(Multivector::ONE, step),
        Orientation::Left => factors.iter().rev().fold(Multivector::ONE, step),
    }
}

/// `L_mu(lambda) = lambda (I e_mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedBasisBivector {
    pub index: usize,
    pub orientation: Orientation,
    pub value: Multivector,
}

pub fn basis_bivector(mu: usize, orientation: Orientation) -> Result<OrientedBasisBivector, GaError> {
    let axis = Direction::axis(mu)?;
    Ok(OrientedBasisBivector {
        index: mu,
        orientation,
        value: unit_bivector(axis).scale(orientation.value()),
    })
}

pub fn reverse(x: &Multivector) -> Multivector {
    x.reverse()
}

/// Splits an even multivector into its scalar and bivector parts.
pub fn even_decompose(x: &Multivector) -> Result<(f64, Multivector), GaError> {
    let magnitude = x.odd_magnitude();
    if magnitude > EXACT_TOL {
        return Err(GaError::OddGrade { magnitude });
    }
    Ok((x.scalar_part(), x.grade(2)))
}

/// Kronecker delta over 1-based indices.
pub fn kronecker(mu: usize, nu: usize) -> f64 {
    if mu == nu {
        1.0
    } else {
        0.0
    }
}

/// Levi-Civita symbol over 1-based indices.
pub fn levi_civita(mu: usize, nu: usize, rho: usize) -> f64 {
    match (mu, nu, rho) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1.0,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1.0,
        _ => 0.0,
    }
}
