//! Weighted rigid alignment with optional rotor priors.
//!
//! Given correspondences `(uᵢ, vᵢ, wᵢ)` the estimator minimizes
//!
//! ```text
//! Σ wᵢ ‖uᵢ − R (vᵢ − t) R̃‖²  −  Σ wⱼ ⟨R² S̃ⱼ²⟩
//! ```
//!
//! over rotors `R` and translations `t`. The translation decouples through the
//! weighted centroids, leaving a rotation-only problem whose maximizer is the
//! dominant eigenvector `(a, c₁, c₂, c₃)` of a symmetric 4×4 data matrix `K`.
//! The largest eigenvalue equals the attained benefit.
//!
//! `t` is expressed in the source frame: `v ≈ t + R̃ u R`.

use std::num::NonZeroUsize;

use thiserror::Error;

use crate::eig::{self, EigError, Sym4};
use crate::ga::{EvenMultivector, GaError, Multivector, Rotor};
use crate::vec3::{self, Mat3, Vec3};

/// `ambiguous` is raised when `λ₁ − λ₂ ≤ AMBIGUITY_TOLERANCE · max(1, |λ₁|)`.
pub const AMBIGUITY_TOLERANCE: f64 = 1e-8;

/// Pairs below this count per chunk are not worth a thread.
const MIN_CHUNK_LEN: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlignError {
    #[error("problem has neither point pairs nor rotor measurements")]
    EmptyProblem,
    #[error("weight {weight} at {kind} {index} is not strictly positive")]
    NonPositiveWeight {
        kind: &'static str,
        index: usize,
        weight: f64,
    },
    #[error("non-finite coordinates at pair {index}")]
    NonFinite { index: usize },
    #[error("translation is undefined without point pairs")]
    NoPointData,
    #[error("prior sum is zero; no rotor is preferred")]
    ZeroPrior,
    #[error("prior sum g = {g} < 0 with h = 0 leaves the whole bivector space optimal")]
    DegeneratePrior { g: f64 },
    #[error(transparent)]
    Eig(#[from] EigError),
    #[error(transparent)]
    Ga(#[from] GaError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedPair {
    /// Target-frame point.
    pub u: Vec3,
    /// Source-frame point.
    pub v: Vec3,
    pub w: f64,
}

impl WeightedPair {
    pub fn new(u: Vec3, v: Vec3, w: f64) -> Self {
        Self { u, v, w }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorMeasurement {
    pub s: Rotor,
    pub w: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlignmentProblem {
    pub pairs: Vec<WeightedPair>,
    pub priors: Vec<RotorMeasurement>,
}

impl AlignmentProblem {
    pub fn from_pairs(pairs: Vec<WeightedPair>) -> Self {
        Self {
            pairs,
            priors: Vec::new(),
        }
    }

    pub fn with_priors(mut self, priors: Vec<RotorMeasurement>) -> Self {
        self.priors = priors;
        self
    }
}

/// Sufficient statistics of a problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub u_bar: Vec3,
    pub v_bar: Vec3,
    pub w_total: f64,
    /// `Σ wᵢ (vᵢ − v̄)(uᵢ − ū)ᵀ`, row-major.
    pub z: Mat3,
    /// `Σ wⱼ S̃ⱼ² = g − I h`.
    pub g: f64,
    pub h: Vec3,
    pub n_pairs: usize,
    pub n_priors: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationEstimate {
    pub rotor: Rotor,
    pub lambda: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentSolution {
    pub rotor: Rotor,
    pub translation: Vec3,
    pub lambda_max: f64,
    pub cost: f64,
    pub eigen_gap: f64,
    pub ambiguous: bool,
    pub n_pairs: usize,
    pub n_priors: usize,
}

/// Parallelism of the summarize pass. `threads == 0` means one per core.
///
/// Results are bitwise reproducible for a fixed `(threads, n)` and agree to
/// rounding across settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SummarizeOptions {
    pub threads: usize,
}

impl Default for SummarizeOptions {
    fn default() -> Self {
        Self { threads: 1 }
    }
}

impl SummarizeOptions {
    pub fn auto() -> Self {
        Self { threads: 0 }
    }

    fn chunks(&self, n: usize) -> usize {
        let threads = match self.threads {
            0 => std::thread::available_parallelism().map_or(1, NonZeroUsize::get),
            t => t,
        };
        threads.min(n / MIN_CHUNK_LEN).max(1)
    }
}

/// Moments about a fixed shift point, for one chunk of pairs.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    w: f64,
    su: Vec3,
    sv: Vec3,
    szz: Mat3,
}

impl Moments {
    fn accumulate(pairs: &[WeightedPair], offset: usize, shift: (Vec3, Vec3)) -> Result<Self, AlignError> {
        let mut m = Moments::default();
        for (i, p) in pairs.iter().enumerate() {
            if !(vec3::is_finite(p.u) && vec3::is_finite(p.v)) {
                return Err(AlignError::NonFinite { index: offset + i });
            }
            if !(p.w > 0.0 && p.w.is_finite()) {
                return Err(AlignError::NonPositiveWeight {
                    kind: "pair",
                    index: offset + i,
                    weight: p.w,
                });
            }
            let du = vec3::sub(p.u, shift.0);
            let dv = vec3::sub(p.v, shift.1);
            m.w += p.w;
            m.su = vec3::add(m.su, vec3::scale(du, p.w));
            let wdv = vec3::scale(dv, p.w);
            m.sv = vec3::add(m.sv, wdv);
            for (row, wv) in m.szz.iter_mut().zip(wdv) {
                for (z, u) in row.iter_mut().zip(du) {
                    *z += wv * u;
                }
            }
        }
        Ok(m)
    }

    fn merge(self, o: Self) -> Self {
        let mut szz = self.szz;
        for (row, orow) in szz.iter_mut().zip(o.szz) {
            for (z, oz) in row.iter_mut().zip(orow) {
                *z += oz;
            }
        }
        Self {
            w: self.w + o.w,
            su: vec3::add(self.su, o.su),
            sv: vec3::add(self.sv, o.sv),
            szz,
        }
    }
}

/// Pairwise reduction in index order.
fn reduce(mut parts: Vec<Moments>) -> Moments {
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|c| if c.len() == 2 { c[0].merge(c[1]) } else { c[0] })
            .collect();
    }
    parts.pop().unwrap_or_default()
}

fn prior_sum(priors: &[RotorMeasurement]) -> Result<EvenMultivector, AlignError> {
    let mut sum = EvenMultivector::default();
    for (j, m) in priors.iter().enumerate() {
        if !(m.w > 0.0 && m.w.is_finite()) {
            return Err(AlignError::NonPositiveWeight {
                kind: "prior",
                index: j,
                weight: m.w,
            });
        }
        let s = m.s.reverse().as_even();
        sum = sum + s.even_product(s).scale(m.w);
    }
    Ok(sum)
}

pub fn summarize(problem: &AlignmentProblem) -> Result<Summary, AlignError> {
    summarize_with(problem, &SummarizeOptions::default())
}

pub fn summarize_with(problem: &AlignmentProblem, opts: &SummarizeOptions) -> Result<Summary, AlignError> {
    let pairs = &problem.pairs;
    if pairs.is_empty() && problem.priors.is_empty() {
        return Err(AlignError::EmptyProblem);
    }
    let gh = prior_sum(&problem.priors)?;

    let shift = pairs.first().map_or((vec3::ZERO, vec3::ZERO), |p| (p.u, p.v));
    let n_chunks = opts.chunks(pairs.len());
    let moments = if n_chunks == 1 {
        Moments::accumulate(pairs, 0, shift)?
    } else {
        let len = pairs.len().div_ceil(n_chunks);
        let parts: Result<Vec<_>, _> = std::thread::scope(|scope| {
            let handles: Vec<_> = pairs
                .chunks(len)
                .enumerate()
                .map(|(k, chunk)| scope.spawn(move || Moments::accumulate(chunk, k * len, shift)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("summarize worker panicked"))
                .collect()
        });
        reduce(parts?)
    };

    let (u_bar, v_bar, z) = if pairs.is_empty() {
        (vec3::ZERO, vec3::ZERO, [[0.0; 3]; 3])
    } else {
        let du = vec3::scale(moments.su, 1.0 / moments.w);
        let dv = vec3::scale(moments.sv, 1.0 / moments.w);
        // Σw(v−v̄)(u−ū)ᵀ = Σw(v−v₀)(u−u₀)ᵀ − w(v̄−v₀)(ū−u₀)ᵀ
        let mut z = moments.szz;
        for (row, sv) in z.iter_mut().zip(moments.sv) {
            for (x, d) in row.iter_mut().zip(du) {
                *x -= sv * d;
            }
        }
        (vec3::add(shift.0, du), vec3::add(shift.1, dv), z)
    };

    Ok(Summary {
        u_bar,
        v_bar,
        w_total: moments.w,
        z,
        g: gh.a,
        h: vec3::neg(gh.c),
        n_pairs: pairs.len(),
        n_priors: problem.priors.len(),
    })
}

/// The Davenport matrix from the summary statistics.
pub fn build_k(s: &Summary) -> Sym4 {
    let z = &s.z;
    let tr = z[0][0] + z[1][1] + z[2][2];
    // x = y₀ = Σ wᵢ (uᵢ − ū) × (vᵢ − v̄)
    let x = [z[2][1] - z[1][2], z[0][2] - z[2][0], z[1][0] - z[0][1]];
    let xh = vec3::add(x, s.h);
    let mut k = [[0.0; 4]; 4];
    k[0][0] = tr + s.g;
    for i in 0..3 {
        k[0][i + 1] = xh[i];
        k[i + 1][0] = xh[i];
        for j in 0..3 {
            k[i + 1][j + 1] = z[i][j] + z[j][i];
        }
        k[i + 1][i + 1] -= tr + s.g;
    }
    Sym4::new(k)
}

/// `K` assembled column by column from geometric products, unsymmetrized.
pub fn build_k_ga_columns(problem: &AlignmentProblem) -> Result<[[f64; 4]; 4], AlignError> {
    if problem.pairs.is_empty() {
        return Err(AlignError::EmptyProblem);
    }
    let w: f64 = problem.pairs.iter().map(|p| p.w).sum();
    let centroid = |f: fn(&WeightedPair) -> Vec3| {
        let sum = problem
            .pairs
            .iter()
            .fold(vec3::ZERO, |acc, p| vec3::add(acc, vec3::scale(f(p), p.w)));
        vec3::scale(sum, 1.0 / w)
    };
    let u_bar = centroid(|p| p.u);
    let v_bar = centroid(|p| p.v);

    let units = [
        Multivector::ONE,
        Multivector::basis(crate::ga::E23),
        Multivector::basis(crate::ga::E31),
        Multivector::basis(crate::ga::E12),
    ];
    let mut sums = [Multivector::ZERO; 4];
    for p in &problem.pairs {
        let du = Multivector::vector(vec3::sub(p.u, u_bar));
        let dv = Multivector::vector(vec3::sub(p.v, v_bar));
        for (j, (sum, unit)) in sums.iter_mut().zip(units.iter()).enumerate() {
            let sign = if j == 0 { p.w } else { -p.w };
            *sum = *sum + dv * *unit * du * sign;
        }
    }

    // Each sum is xⱼ − I yⱼ; column j of K is [xⱼ; yⱼ].
    let mut k = [[0.0; 4]; 4];
    for (j, m) in sums.iter().enumerate() {
        k[0][j] = m.scalar_part();
        let y = vec3::neg(m.bivector_part());
        for i in 0..3 {
            k[i + 1][j] = y[i];
        }
    }

    let mut prior = Multivector::ZERO;
    for m in &problem.priors {
        let s = m.s.reverse().to_multivector();
        prior = prior + s * s * m.w;
    }
    let g = prior.scalar_part();
    let h = vec3::neg(prior.bivector_part());
    k[0][0] += g;
    for i in 0..3 {
        k[0][i + 1] += h[i];
        k[i + 1][0] += h[i];
        k[i + 1][i + 1] -= g;
    }
    Ok(k)
}

/// The Davenport matrix built directly from the multivector definitions.
pub fn build_k_ga(problem: &AlignmentProblem) -> Result<Sym4, AlignError> {
    build_k_ga_columns(problem).map(Sym4::new)
}

pub fn solve_rotation(k: &Sym4) -> Result<RotationEstimate, AlignError> {
    let top = eig::max_eigenpair(k)?;
    let rotor = Rotor::normalize(EvenMultivector::from_array(top.vector))?;
    Ok(RotationEstimate {
        rotor,
        lambda: top.lambda,
        gap: top.gap,
    })
}

/// `t = v̄ − R̃ ū R`.
pub fn solve_translation(rotor: &Rotor, s: &Summary) -> Result<Vec3, AlignError> {
    if s.n_pairs == 0 {
        return Err(AlignError::NoPointData);
    }
    Ok(vec3::sub(s.v_bar, rotor.reverse().rotate(s.u_bar)))
}

/// `Σ wᵢ ‖uᵢ − R (vᵢ − t) R̃‖²`.
pub fn cost(rotor: &Rotor, t: Vec3, pairs: &[WeightedPair]) -> f64 {
    pairs
        .iter()
        .map(|p| p.w * vec3::norm_squared(vec3::sub(p.u, rotor.rotate(vec3::sub(p.v, t)))))
        .sum()
}

/// `Σ wᵢ ⟨R (vᵢ − v̄) R̃ (uᵢ − ū)⟩ + Σ wⱼ ⟨R² S̃ⱼ²⟩`, evaluated in the algebra.
pub fn benefit(rotor: &Rotor, problem: &AlignmentProblem, s: &Summary) -> f64 {
    let r = rotor.to_multivector();
    let rr = r.reverse();
    let points: f64 = problem
        .pairs
        .iter()
        .map(|p| {
            let dv = Multivector::vector(vec3::sub(p.v, s.v_bar));
            let du = Multivector::vector(vec3::sub(p.u, s.u_bar));
            p.w * (r * dv * rr * du).scalar_part()
        })
        .sum();
    let priors: f64 = problem
        .priors
        .iter()
        .map(|m| {
            let st = m.s.reverse().to_multivector();
            m.w * (r * r * st * st).scalar_part()
        })
        .sum();
    points + priors
}

pub fn solve(problem: &AlignmentProblem) -> Result<AlignmentSolution, AlignError> {
    solve_with(problem, &SummarizeOptions::default())
}

pub fn solve_with(problem: &AlignmentProblem, opts: &SummarizeOptions) -> Result<AlignmentSolution, AlignError> {
    let summary = summarize_with(problem, opts)?;
    solve_summary(problem, &summary)
}

/// Everything after the summarize pass.
pub fn solve_summary(problem: &AlignmentProblem, summary: &Summary) -> Result<AlignmentSolution, AlignError> {
    let k = build_k(summary);
    let est = solve_rotation(&k)?;
    let translation = if summary.n_pairs == 0 {
        vec3::ZERO
    } else {
        solve_translation(&est.rotor, summary)?
    };
    Ok(AlignmentSolution {
        rotor: est.rotor,
        translation,
        lambda_max: est.lambda,
        cost: cost(&est.rotor, translation, &problem.pairs),
        eigen_gap: est.gap,
        ambiguous: est.gap <= AMBIGUITY_TOLERANCE * est.lambda.abs().max(1.0),
        n_pairs: summary.n_pairs,
        n_priors: summary.n_priors,
    })
}

/// Closed-form optimum when only rotor measurements are present.
///
/// Returns the rotor and `λ = √(g² + ‖h‖²)`.
pub fn solve_prior_only(g: f64, h: Vec3) -> Result<(Rotor, f64), AlignError> {
    let hn = vec3::norm(h);
    if g == 0.0 && hn == 0.0 {
        return Err(AlignError::ZeroPrior);
    }
    let lambda = g.hypot(hn);
    if hn == 0.0 {
        if g < 0.0 {
            return Err(AlignError::DegeneratePrior { g });
        }
        return Ok((Rotor::IDENTITY, lambda));
    }
    // (λ + g, ‖h‖) spans the top eigenvector of [[g, ‖h‖], [‖h‖, −g]];
    // λ + g = ‖h‖²/(λ − g) avoids cancellation when g < 0.
    let a = if g >= 0.0 { lambda + g } else { hn * hn / (lambda - g) };
    let norm = a.hypot(hn);
    let c = vec3::scale(h, 1.0 / norm);
    let rotor = Rotor::normalize(EvenMultivector::new(a / norm, c))?;
    Ok((rotor, lambda))
}
