//! Symmetric 4×4 eigensolver (cyclic Jacobi).

use thiserror::Error;

pub const MAX_SWEEPS: usize = 50;
/// Off-diagonal threshold, relative to the Frobenius norm of the input.
pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EigError {
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },
}

/// A symmetric 4×4 matrix. Symmetry is enforced on construction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sym4 {
    m: [[f64; 4]; 4],
}

impl Sym4 {
    /// Stores `(m + mᵀ)/2`.
    pub fn new(m: [[f64; 4]; 4]) -> Self {
        let mut s = m;
        for i in 0..4 {
            for j in i + 1..4 {
                let avg = 0.5 * (m[i][j] + m[j][i]);
                s[i][j] = avg;
                s[j][i] = avg;
            }
        }
        Self { m: s }
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            m[i][i] = d[i];
        }
        Self { m }
    }

    pub fn identity() -> Self {
        Self::diagonal([1.0; 4])
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.m[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let big = self.m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if big == 0.0 || !big.is_finite() {
            return big;
        }
        big * self.m.iter().flatten().map(|x| (x / big).powi(2)).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(self.m.iter()) {
            *o = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Sym4) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn max_off_diagonal(&self) -> f64 {
        let mut off = 0.0f64;
        for i in 0..4 {
            for j in i + 1..4 {
                off = off.max(self.m[i][j].abs());
            }
        }
        off
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDecomposition {
    /// Sorted descending.
    pub eigenvalues: [f64; 4],
    /// `eigenvectors[k]` pairs with `eigenvalues[k]`.
    pub eigenvectors: [[f64; 4]; 4],
    pub sweeps_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominantPair {
    pub lambda: f64,
    /// Unit length; first nonzero component positive.
    pub vector: [f64; 4],
    /// `λ₁ − λ₂`.
    pub gap: f64,
}

/// Rotation `(c, s)` that annihilates `a[p][q]`.
fn jacobi_rotation(app: f64, aqq: f64, apq: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = (t * t + 1.0).sqrt().recip();
    (c, t * c)
}

pub fn jacobi_eigen(k: &Sym4) -> Result<EigenDecomposition, EigError> {
    if !k.m.iter().flatten().all(|x| x.is_finite()) {
        return Err(EigError::NonFinite);
    }
    let tol = OFF_DIAGONAL_TOLERANCE * k.frobenius_norm();
    let mut a = k.m;
    // Columns of `v` are the eigenvectors; stored transposed so v[k] is a vector.
    let mut v = [[0.0; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let mut sweeps = 0;
    loop {
        let off = Sym4 { m: a }.max_off_diagonal();
        if off <= tol {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(EigError::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..3 {
            for q in p + 1..4 {
                if a[p][q].abs() <= tol {
                    continue;
                }
                let (c, s) = jacobi_rotation(a[p][p], a[q][q], a[p][q]);
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for col in 0..4 {
                    let (apk, aqk) = (a[p][col], a[q][col]);
                    a[p][col] = c * apk - s * aqk;
                    a[q][col] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                let (vp, vq) = (v[p], v[q]);
                for i in 0..4 {
                    v[p][i] = c * vp[i] - s * vq[i];
                    v[q][i] = s * vp[i] + c * vq[i];
                }
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let eigenvalues = order.map(|i| a[i][i]);
    let eigenvectors = order.map(|i| {
        let x = v[i];
        let n = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        x.map(|c| c / n)
    });
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        sweeps_used: sweeps,
    })
}

pub fn max_eigenpair(k: &Sym4) -> Result<DominantPair, EigError> {
    let eig = jacobi_eigen(k)?;
    let mut vector = eig.eigenvectors[0];
    if vector.iter().find(|x| **x != 0.0).is_some_and(|x| *x < 0.0) {
        vector = vector.map(|x| -x);
    }
    Ok(DominantPair {
        lambda: eig.eigenvalues[0],
        vector,
        gap: eig.eigenvalues[0] - eig.eigenvalues[1],
    })
}
