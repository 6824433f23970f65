//! The geometric algebra G³ over an orthonormal basis `{e₁, e₂, e₃}`.
//!
//! A [`Multivector`] stores eight coefficients in the order
//!
//! ```text
//! 1, e₁, e₂, e₃, e₂e₃, e₃e₁, e₁e₂, e₁e₂e₃
//! ```
//!
//! so that `M = a + b + I c + I d` with `I = e₁e₂e₃`. The bivector slots hold
//! the coefficients of `I e₁ = e₂e₃`, `I e₂ = e₃e₁` and `I e₃ = e₁e₂`, which
//! makes the bivector part the dual of an ordinary vector.
//!
//! The even subalgebra `span{1, e₂e₃, e₃e₁, e₁e₂}` is represented by
//! [`EvenMultivector`], and its unit-norm elements by [`Rotor`].
//!
//! # Rotation sense
//!
//! `Rotor::from_axis_angle(n, φ)` builds `cos(φ/2) + sin(φ/2) I n`. Rotating
//! with the sandwich `R v R̃` then turns `v` by `φ` about `n` in the
//! *left-handed* (clockwise when looking down `n`) sense:
//!
//! ```
//! use ga_align::ga::Rotor;
//! use ga_align::vec3::{E1, E3};
//!
//! let r = Rotor::from_axis_angle(E3, std::f64::consts::FRAC_PI_2).unwrap();
//! let v = r.rotate(E1);
//! assert!((v[1] + 1.0).abs() < 1e-15); // e₁ goes to −e₂
//! ```
//!
//! Equivalently, the matrix from [`Rotor::to_matrix`] is the transpose of the
//! right-handed axis-angle matrix. The Hamilton quaternion with the same four
//! numbers `[a, c₁, c₂, c₃]` rotates by `+φ` under `q v q*`; the two differ
//! only by which side of the sandwich carries the reverse.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::vec3::{self, Mat3, Vec3};

/// Renormalization window for rotor constructors.
pub const ROTOR_RENORMALIZE_TOLERANCE: f64 = 1e-6;
/// Axis length tolerance for [`Rotor::from_axis_angle`].
pub const AXIS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GaError {
    #[error("rotation axis must be unit length, got norm {norm}")]
    NonUnitAxis { norm: f64 },
    #[error("even multivector is not a rotor: a² + c·c = {norm_squared}")]
    NonUnitRotor { norm_squared: f64 },
}

pub const SCALAR: usize = 0;
pub const E1: usize = 1;
pub const E2: usize = 2;
pub const E3: usize = 3;
pub const E23: usize = 4;
pub const E31: usize = 5;
pub const E12: usize = 6;
pub const E123: usize = 7;

/// Bitmask of the canonical (ascending) blade behind each basis slot.
const BLADE_MASK: [u8; 8] = [0b000, 0b001, 0b010, 0b100, 0b110, 0b101, 0b011, 0b111];
/// Sign relating each basis slot to its canonical blade; `e₃e₁ = −e₁e₃`.
const BLADE_SIGN: [i8; 8] = [1, 1, 1, 1, 1, -1, 1, 1];
/// Inverse of `BLADE_MASK`.
const MASK_SLOT: [usize; 8] = [SCALAR, E1, E2, E12, E3, E31, E23, E123];

/// Sign picked up by sorting the concatenated vector factors of two
/// canonical blades into ascending order.
const fn reorder_sign(a: u8, b: u8) -> i8 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

const fn build_table() -> [[(usize, i8); 8]; 8] {
    let mut table = [[(0usize, 0i8); 8]; 8];
    let mut i = 0;
    while i < 8 {
        let mut j = 0;
        while j < 8 {
            let (mi, mj) = (BLADE_MASK[i], BLADE_MASK[j]);
            // eᵢeᵢ = 1 for every basis vector, so shared factors cancel.
            let k = MASK_SLOT[(mi ^ mj) as usize];
            let sign = BLADE_SIGN[i] * BLADE_SIGN[j] * reorder_sign(mi, mj) * BLADE_SIGN[k];
            table[i][j] = (k, sign);
            j += 1;
        }
        i += 1;
    }
    table
}

/// `PRODUCT[i][j] = (k, s)` means `basisᵢ basisⱼ = s · basisₖ`.
pub const PRODUCT: [[(usize, i8); 8]; 8] = build_table();

/// A general element of G³.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Multivector {
    coeffs: [f64; 8],
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coeffs;
        write!(
            f,
            "Multivector({} + [{}, {}, {}] + I[{}, {}, {}] + I·{})",
            c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]
        )
    }
}

impl Multivector {
    pub const ZERO: Multivector = Multivector { coeffs: [0.0; 8] };
    pub const ONE: Multivector = Multivector::basis(SCALAR);
    /// The pseudoscalar `I = e₁e₂e₃`.
    pub const I: Multivector = Multivector::basis(E123);

    pub const fn from_coeffs(coeffs: [f64; 8]) -> Self {
        Self { coeffs }
    }

    pub const fn basis(slot: usize) -> Self {
        let mut coeffs = [0.0; 8];
        coeffs[slot] = 1.0;
        Self { coeffs }
    }

    /// `a + b + I c + I d`.
    pub fn from_parts(a: f64, b: Vec3, c: Vec3, d: f64) -> Self {
        Self {
            coeffs: [a, b[0], b[1], b[2], c[0], c[1], c[2], d],
        }
    }

    pub fn scalar(a: f64) -> Self {
        Self::from_parts(a, vec3::ZERO, vec3::ZERO, 0.0)
    }

    pub fn vector(b: Vec3) -> Self {
        Self::from_parts(0.0, b, vec3::ZERO, 0.0)
    }

    /// The bivector `I c`.
    pub fn bivector(c: Vec3) -> Self {
        Self::from_parts(0.0, vec3::ZERO, c, 0.0)
    }

    pub fn coeffs(&self) -> &[f64; 8] {
        &self.coeffs
    }

    /// Scalar projection `⟨M⟩`.
    pub fn scalar_part(&self) -> f64 {
        self.coeffs[SCALAR]
    }

    pub fn vector_part(&self) -> Vec3 {
        [self.coeffs[E1], self.coeffs[E2], self.coeffs[E3]]
    }

    /// Coefficients `c` of the bivector part `I c`.
    pub fn bivector_part(&self) -> Vec3 {
        [self.coeffs[E23], self.coeffs[E31], self.coeffs[E12]]
    }

    pub fn trivector_part(&self) -> f64 {
        self.coeffs[E123]
    }

    /// Drops the vector and trivector parts.
    pub fn even_part(&self) -> EvenMultivector {
        EvenMultivector::new(self.scalar_part(), self.bivector_part())
    }

    /// `a + b − I c − I d`.
    pub fn reverse(&self) -> Self {
        let mut out = *self;
        for x in &mut out.coeffs[E23..] {
            *x = -*x;
        }
        out
    }

    pub fn geometric_product(&self, rhs: &Self) -> Self {
        let mut out = [0.0; 8];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (j, &y) in rhs.coeffs.iter().enumerate() {
                let (k, sign) = PRODUCT[i][j];
                out[k] += f64::from(sign) * x * y;
            }
        }
        Self { coeffs: out }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(mut self) -> Self {
        for a in &mut self.coeffs {
            *a = -*a;
        }
        self
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Self) -> Self {
        self.geometric_product(&rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(mut self, s: f64) -> Self {
        for a in &mut self.coeffs {
            *a *= s;
        }
        self
    }
}

pub fn geometric_product(m1: &Multivector, m2: &Multivector) -> Multivector {
    m1.geometric_product(m2)
}

/// Outer product of two vectors: the bivector `I (u × v)`.
pub fn wedge(u: Vec3, v: Vec3) -> Multivector {
    Multivector::bivector(vec3::cross(u, v))
}

/// An element `a + I c` of the even subalgebra.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvenMultivector {
    pub a: f64,
    pub c: Vec3,
}

impl EvenMultivector {
    pub const ONE: EvenMultivector = EvenMultivector { a: 1.0, c: vec3::ZERO };

    pub const fn new(a: f64, c: Vec3) -> Self {
        Self { a, c }
    }

    pub fn from_array(x: [f64; 4]) -> Self {
        Self::new(x[0], [x[1], x[2], x[3]])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.c[0], self.c[1], self.c[2]]
    }

    pub fn to_multivector(self) -> Multivector {
        Multivector::from_parts(self.a, vec3::ZERO, self.c, 0.0)
    }

    pub fn reverse(self) -> Self {
        Self::new(self.a, vec3::neg(self.c))
    }

    pub fn norm_squared(self) -> f64 {
        self.a * self.a + vec3::norm_squared(self.c)
    }

    /// `(a₁a₂ − c₁·c₂) + I (a₁c₂ + a₂c₁ − c₁ × c₂)`.
    pub fn even_product(self, rhs: Self) -> Self {
        let a = self.a * rhs.a - vec3::dot(self.c, rhs.c);
        let c = vec3::sub(
            vec3::add(vec3::scale(rhs.c, self.a), vec3::scale(self.c, rhs.a)),
            vec3::cross(self.c, rhs.c),
        );
        Self::new(a, c)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.a * s, vec3::scale(self.c, s))
    }
}

impl Add for EvenMultivector {
    type Output = EvenMultivector;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, vec3::add(self.c, rhs.c))
    }
}

impl Sub for EvenMultivector {
    type Output = EvenMultivector;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, vec3::sub(self.c, rhs.c))
    }
}

impl Mul for EvenMultivector {
    type Output = EvenMultivector;
    fn mul(self, rhs: Self) -> Self {
        self.even_product(rhs)
    }
}

pub fn even_product(p: EvenMultivector, q: EvenMultivector) -> EvenMultivector {
    p.even_product(q)
}

/// A unit even multivector, `a² + c·c = 1`.
///
/// `R` and `−R` describe the same rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotor {
    a: f64,
    c: Vec3,
}

impl Default for Rotor {
    fn default() -> Self {
        Rotor::IDENTITY
    }
}

impl Rotor {
    pub const IDENTITY: Rotor = Rotor { a: 1.0, c: vec3::ZERO };

    /// Renormalizes when `|a² + c·c − 1| ≤ 1e-6`, rejects anything further off.
    pub fn new(a: f64, c: Vec3) -> Result<Self, GaError> {
        let norm_squared = a * a + vec3::norm_squared(c);
        if !norm_squared.is_finite() || (norm_squared - 1.0).abs() > ROTOR_RENORMALIZE_TOLERANCE {
            return Err(GaError::NonUnitRotor { norm_squared });
        }
        Ok(Self::scaled(a, c, norm_squared))
    }

    /// Projects any nonzero even multivector onto the rotors.
    pub fn normalize(m: EvenMultivector) -> Result<Self, GaError> {
        let norm_squared = m.norm_squared();
        if !(norm_squared > 0.0) || !norm_squared.is_finite() {
            return Err(GaError::NonUnitRotor { norm_squared });
        }
        Ok(Self::scaled(m.a, m.c, norm_squared))
    }

    fn scaled(a: f64, c: Vec3, norm_squared: f64) -> Self {
        if norm_squared == 1.0 {
            return Self { a, c };
        }
        let inv = norm_squared.sqrt().recip();
        Self {
            a: a * inv,
            c: vec3::scale(c, inv),
        }
    }

    /// `cos(φ/2) + sin(φ/2) I n`.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Result<Self, GaError> {
        let norm = vec3::norm(axis);
        if !((norm - 1.0).abs() <= AXIS_TOLERANCE) {
            return Err(GaError::NonUnitAxis { norm });
        }
        let (s, c) = (0.5 * angle).sin_cos();
        Self::new(c, vec3::scale(axis, s / norm))
    }

    pub fn scalar(&self) -> f64 {
        self.a
    }

    pub fn bivector(&self) -> Vec3 {
        self.c
    }

    pub fn as_even(&self) -> EvenMultivector {
        EvenMultivector::new(self.a, self.c)
    }

    pub fn to_multivector(&self) -> Multivector {
        self.as_even().to_multivector()
    }

    /// The same four numbers read as a quaternion `[w, x, y, z]`.
    pub fn to_array(&self) -> [f64; 4] {
        self.as_even().to_array()
    }

    /// Geometric inverse.
    pub fn reverse(&self) -> Self {
        Self {
            a: self.a,
            c: vec3::neg(self.c),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            a: -self.a,
            c: vec3::neg(self.c),
        }
    }

    /// `self · rhs`; rotating by the result rotates by `rhs` first.
    pub fn compose(&self, rhs: &Rotor) -> Rotor {
        let p = self.as_even().even_product(rhs.as_even());
        Self::scaled(p.a, p.c, p.norm_squared())
    }

    /// Sign representative with `a ≥ 0` (first nonzero coefficient positive).
    pub fn canonical(&self) -> Self {
        let lead = self.to_array().into_iter().find(|x| *x != 0.0).unwrap_or(1.0);
        if lead < 0.0 {
            self.neg()
        } else {
            *self
        }
    }

    /// `R v R̃`, evaluated through the product table.
    pub fn rotate(&self, v: Vec3) -> Vec3 {
        let r = self.to_multivector();
        let out = r * Multivector::vector(v) * r.reverse();
        debug_assert!(
            {
                let stray = out.scalar_part().abs() + vec3::norm(out.bivector_part()) + out.trivector_part().abs();
                stray <= 1e-12 * vec3::norm(v).max(1.0)
            },
            "sandwich product left the vector grade: {out:?}"
        );
        out.vector_part()
    }

    /// Row-major matrix whose columns are `rotate(eₖ)`.
    pub fn to_matrix(&self) -> Mat3 {
        let cols = [vec3::E1, vec3::E2, vec3::E3].map(|e| self.rotate(e));
        let mut m = [[0.0; 3]; 3];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..3 {
                m[i][j] = col[i];
            }
        }
        m
    }

    /// `(n, φ)` with `φ = 2 atan2(‖c‖, a)` and `n = c/‖c‖`, so that
    /// `from_axis_angle(n, φ)` reproduces `self`. The identity yields `(e₃, 0)`.
    pub fn axis_angle(&self) -> (Vec3, f64) {
        let s = vec3::norm(self.c);
        if s == 0.0 {
            let angle = if self.a < 0.0 { 2.0 * std::f64::consts::PI } else { 0.0 };
            return (vec3::E3, angle);
        }
        (vec3::scale(self.c, 1.0 / s), 2.0 * s.atan2(self.a))
    }

    pub fn approx_eq_up_to_sign(&self, other: &Rotor, tol: f64) -> bool {
        rotor_distance(self, other) <= tol
    }
}

/// `min(‖q − q̂‖, ‖q + q̂‖)` over the four coefficients.
pub fn rotor_distance(p: &Rotor, q: &Rotor) -> f64 {
    let (x, y) = (p.to_array(), q.to_array());
    let minus: f64 = (0..4).map(|i| (x[i] - y[i]).powi(2)).sum();
    let plus: f64 = (0..4).map(|i| (x[i] + y[i]).powi(2)).sum();
    minus.min(plus).sqrt()
}

/// Rotation angle in `[0, π]` between two rotors, ignoring the double cover.
pub fn rotor_angle_between(p: &Rotor, q: &Rotor) -> f64 {
    let d = p.reverse().compose(q);
    2.0 * vec3::norm(d.c).atan2(d.a.abs())
}
