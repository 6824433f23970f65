//! Oracles and random inputs shared by the integration tests.
//!
//! Nothing here calls into the code path it is used to check: the product
//! oracle expands basis words by hand, the eigenvalue oracle bisects the
//! characteristic polynomial, and derivatives are central differences.
#![allow(dead_code)]

use ga_align::align::{AlignmentProblem, RotorMeasurement, WeightedPair};
use ga_align::ga::{EvenMultivector, Multivector, Rotor};
use ga_align::vec3::{self, Vec3};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Geometric product by explicit word reduction.

/// Vector factors of each basis slot, in the order the slot is defined.
const WORDS: [&[u8]; 8] = [&[], &[1], &[2], &[3], &[2, 3], &[3, 1], &[1, 2], &[1, 2, 3]];

/// Sorts a word of basis vectors with adjacent transpositions, cancelling
/// `eᵢeᵢ = 1`. Returns the sign and the reduced, ascending word.
fn reduce_word(word: &[u8]) -> (i32, Vec<u8>) {
    let mut w = word.to_vec();
    let mut sign = 1;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < w.len() {
            if w[i] > w[i + 1] {
                w.swap(i, i + 1);
                sign = -sign;
                changed = true;
            } else if w[i] == w[i + 1] {
                w.drain(i..i + 2);
                changed = true;
                continue;
            }
            i += 1;
        }
        if !changed {
            return (sign, w);
        }
    }
}

pub fn oracle_basis_product(i: usize, j: usize) -> (usize, i32) {
    let word: Vec<u8> = WORDS[i].iter().chain(WORDS[j]).copied().collect();
    let (sign, reduced) = reduce_word(&word);
    for (k, slot) in WORDS.iter().enumerate() {
        let (slot_sign, slot_sorted) = reduce_word(slot);
        if slot_sorted == reduced {
            return (k, sign * slot_sign);
        }
    }
    unreachable!("word {word:?} has no slot")
}

pub fn oracle_product(m1: &Multivector, m2: &Multivector) -> Multivector {
    let mut out = [0.0; 8];
    for i in 0..8 {
        for j in 0..8 {
            let (k, s) = oracle_basis_product(i, j);
            out[k] += s as f64 * m1.coeffs()[i] * m2.coeffs()[j];
        }
    }
    Multivector::from_coeffs(out)
}

// ---------------------------------------------------------------------------
// Eigenvalues as roots of the characteristic polynomial.

type M4 = [[f64; 4]; 4];

fn mat_mul4(a: &M4, b: &M4) -> M4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Coefficients `[c₀, c₁, c₂, c₃, 1]` of `det(λ − A)` by Faddeev–LeVerrier.
pub fn char_poly(a: &M4) -> [f64; 5] {
    let mut coeffs = [0.0; 5];
    coeffs[4] = 1.0;
    let mut m = [[0.0; 4]; 4];
    for k in 1..=4 {
        let mut next = mat_mul4(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += coeffs[4 - k + 1];
        }
        m = next;
        let am = mat_mul4(a, &m);
        let tr: f64 = (0..4).map(|i| am[i][i]).sum();
        coeffs[4 - k] = -tr / k as f64;
    }
    coeffs
}

fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn derivative(p: &[f64]) -> Vec<f64> {
    p.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect()
}

fn bisect(p: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = eval(p, lo);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = eval(p, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All roots in `[lo, hi]` of a polynomial whose roots are all real, found
/// by bisecting between consecutive critical points.
fn real_roots(p: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let degree = p.len() - 1;
    if degree == 1 {
        return vec![-p[0] / p[1]];
    }
    let mut knots = vec![lo];
    let mut crit: Vec<f64> = real_roots(&derivative(p), lo, hi)
        .into_iter()
        .filter(|x| *x > lo && *x < hi)
        .collect();
    crit.sort_by(f64::total_cmp);
    knots.extend(crit);
    knots.push(hi);
    let mut roots = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (eval(p, w[0]), eval(p, w[1]));
        if a == 0.0 {
            roots.push(w[0]);
        } else if (a < 0.0) != (b < 0.0) {
            roots.push(bisect(p, w[0], w[1]));
        }
    }
    // A repeated root shows up as a critical point without a sign change.
    let mut crit: Vec<f64> = knots[1..knots.len() - 1].to_vec();
    while roots.len() < degree && !crit.is_empty() {
        let (idx, _) = crit
            .iter()
            .enumerate()
            .min_by(|x, y| eval(p, *x.1).abs().total_cmp(&eval(p, *y.1).abs()))
            .unwrap();
        roots.push(crit.remove(idx));
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

/// Eigenvalues of a symmetric matrix, descending, without any iteration on
/// the matrix itself.
pub fn oracle_eigenvalues(a: &M4) -> Vec<f64> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..4 {
        let r: f64 = (0..4).filter(|j| *j != i).map(|j| a[i][j].abs()).sum();
        lo = lo.min(a[i][i] - r);
        hi = hi.max(a[i][i] + r);
    }
    let pad = 1e-9 * (hi - lo).abs().max(1.0);
    real_roots(&char_poly(a), lo - pad, hi + pad)
}

pub fn random_sym4(rng: &mut StdRng) -> M4 {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let x = rng.gen_range(-1.0..1.0);
            m[i][j] = x;
            m[j][i] = x;
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Finite differences.

pub const FD_STEP: f64 = 1e-6;

/// `∂f/∂M⁺ = ∂f/∂a − Σ I eᵢ ∂f/∂cᵢ`, by central differences in `(a, c)`.
pub fn even_derivative(f: impl Fn(EvenMultivector) -> f64, at: EvenMultivector, h: f64) -> EvenMultivector {
    let x = at.to_array();
    let mut grad = [0.0; 4];
    for (k, g) in grad.iter_mut().enumerate() {
        let (mut plus, mut minus) = (x, x);
        plus[k] += h;
        minus[k] -= h;
        *g = (f(EvenMultivector::from_array(plus)) - f(EvenMultivector::from_array(minus))) / (2.0 * h);
    }
    EvenMultivector::new(grad[0], [-grad[1], -grad[2], -grad[3]])
}

/// Plain gradient over the four coordinates `(a, c₁, c₂, c₃)`.
pub fn coordinate_gradient(f: impl Fn([f64; 4]) -> f64, x: [f64; 4], h: f64) -> [f64; 4] {
    let mut grad = [0.0; 4];
    for (k, g) in grad.iter_mut().enumerate() {
        let (mut plus, mut minus) = (x, x);
        plus[k] += h;
        minus[k] -= h;
        *g = (f(plus) - f(minus)) / (2.0 * h);
    }
    grad
}

// ---------------------------------------------------------------------------
// Random inputs.

pub fn random_vec(rng: &mut StdRng, scale: f64) -> Vec3 {
    [(); 3].map(|_| rng.gen_range(-scale..scale))
}

pub fn random_multivector(rng: &mut StdRng) -> Multivector {
    Multivector::from_coeffs([(); 8].map(|_| rng.gen_range(-1.0..1.0)))
}

pub fn random_even(rng: &mut StdRng) -> EvenMultivector {
    EvenMultivector::from_array([(); 4].map(|_| rng.gen_range(-1.0..1.0)))
}

pub fn random_rotor(rng: &mut StdRng) -> Rotor {
    loop {
        let x = [(); 4].map(|_| rng.gen_range(-1.0..1.0));
        let n2: f64 = x.iter().map(|c| c * c).sum();
        if n2 > 1e-3 && n2 <= 1.0 {
            return Rotor::normalize(EvenMultivector::from_array(x)).unwrap();
        }
    }
}

/// A small rotation of the given angle about a random axis.
pub fn random_small_rotor(rng: &mut StdRng, angle: f64) -> Rotor {
    let axis = random_vec(rng, 1.0);
    Rotor::from_axis_angle(vec3::scale(axis, 1.0 / vec3::norm(axis)), angle).unwrap()
}

pub struct Synthetic {
    pub problem: AlignmentProblem,
    pub rotor: Rotor,
    pub translation: Vec3,
}

/// `uᵢ = R (vᵢ − t) R̃ + σ ε` with `vᵢ ~ U[−1, 1]³`, weights in `[0.1, 2]`.
pub fn synthetic(rng: &mut StdRng, n: usize, t_scale: f64, sigma: f64) -> Synthetic {
    let rotor = random_rotor(rng);
    let translation = random_vec(rng, t_scale);
    let pairs = (0..n)
        .map(|_| {
            let v = random_vec(rng, 1.0);
            let mut u = rotor.rotate(vec3::sub(v, translation));
            if sigma > 0.0 {
                let noise: Vec3 = [(); 3].map(|_| {
                    let (a, b): (f64, f64) = (rng.gen_range(f64::EPSILON..1.0), rng.gen());
                    (-2.0 * a.ln()).sqrt() * (std::f64::consts::TAU * b).cos()
                });
                u = vec3::add(u, vec3::scale(noise, sigma));
            }
            WeightedPair::new(u, v, rng.gen_range(0.1..2.0))
        })
        .collect();
    Synthetic {
        problem: AlignmentProblem::from_pairs(pairs),
        rotor,
        translation,
    }
}

pub fn random_priors(rng: &mut StdRng, m: usize) -> Vec<RotorMeasurement> {
    (0..m)
        .map(|_| RotorMeasurement {
            s: random_rotor(rng),
            w: rng.gen_range(0.1..3.0),
        })
        .collect()
}

/// Random noisy problem with `n ∈ [3, 50]` pairs.
pub fn random_problem(rng: &mut StdRng) -> AlignmentProblem {
    let n = rng.gen_range(3..=50);
    let sigma = rng.gen_range(0.0..0.3);
    synthetic(rng, n, 10.0, sigma).problem
}

/// `Σ wᵢ(‖uᵢ − ū‖² + ‖vᵢ − v̄‖²)`.
pub fn scatter(problem: &AlignmentProblem, u_bar: Vec3, v_bar: Vec3) -> f64 {
    problem
        .pairs
        .iter()
        .map(|p| p.w * (vec3::norm_squared(vec3::sub(p.u, u_bar)) + vec3::norm_squared(vec3::sub(p.v, v_bar))))
        .sum()
}

pub fn rel_err(got: f64, want: f64, scale: f64) -> f64 {
    (got - want).abs() / scale.abs().max(f64::MIN_POSITIVE)
}
