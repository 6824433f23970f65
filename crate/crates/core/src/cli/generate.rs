//! Synthetic correspondence problems with a known rigid motion.
//!
//! For each of `n` pairs the stream draws the source point
//! `v ~ U[−1, 1]³` (x, y, z in order) followed by three standard normals
//! `z`, and sets `u = R (v − t) R̃ + σ z`. Noise is drawn even when `σ = 0`
//! so that the point set for a seed does not depend on the noise level.

use serde_json::{json, Value};

use super::rng::SplitMix64;
use crate::align::{AlignmentProblem, WeightedPair};
use crate::ga::Rotor;
use crate::vec3::{self, Vec3};

#[derive(Debug, Clone, PartialEq)]
pub struct GenerateParams {
    pub n: usize,
    pub noise_sigma: f64,
    pub seed: u64,
    pub angle: f64,
    /// Any nonzero direction; normalized before use.
    pub axis: Vec3,
    pub translation: Vec3,
}

impl Default for GenerateParams {
    fn default() -> Self {
        Self {
            n: 100,
            noise_sigma: 0.0,
            seed: 42,
            angle: 0.0,
            axis: vec3::E3,
            translation: vec3::ZERO,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub params: GenerateParams,
    pub rotor: Rotor,
}

impl GroundTruth {
    pub fn to_json(&self) -> Value {
        let p = &self.params;
        let r = self.rotor.canonical();
        let [a, c1, c2, c3] = r.to_array();
        json!({
            "angle": p.angle,
            "axis": vec3::scale(p.axis, 1.0 / vec3::norm(p.axis)),
            "n": p.n,
            "noise_sigma": p.noise_sigma,
            "quaternion": [a, c1, c2, c3],
            "rotation_matrix": r.to_matrix().concat(),
            "rotor": {"a": a, "c": [c1, c2, c3]},
            "seed": p.seed,
            "translation": p.translation,
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid parameter `{name}`: {reason}")]
pub struct InvalidParameter {
    pub name: &'static str,
    pub reason: String,
}

fn invalid(name: &'static str, reason: impl Into<String>) -> InvalidParameter {
    InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub fn generate(params: &GenerateParams) -> Result<(AlignmentProblem, GroundTruth), InvalidParameter> {
    if params.n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if !(params.noise_sigma >= 0.0 && params.noise_sigma.is_finite()) {
        return Err(invalid(
            "noise-sigma",
            format!("must be finite and ≥ 0, got {}", params.noise_sigma),
        ));
    }
    if !params.angle.is_finite() {
        return Err(invalid("angle", "must be finite"));
    }
    let axis_norm = vec3::norm(params.axis);
    if !(axis_norm > 0.0 && axis_norm.is_finite()) {
        return Err(invalid("axis", "must be a finite nonzero vector"));
    }
    if !vec3::is_finite(params.translation) {
        return Err(invalid("translation", "must be finite"));
    }
    let axis = vec3::scale(params.axis, 1.0 / axis_norm);
    let rotor = Rotor::from_axis_angle(axis, params.angle).map_err(|e| invalid("axis", e.to_string()))?;

    let mut rng = SplitMix64::new(params.seed);
    let pairs = (0..params.n)
        .map(|_| {
            let v = [(); 3].map(|_| rng.uniform(-1.0, 1.0));
            let noise = [(); 3].map(|_| params.noise_sigma * rng.standard_normal());
            let u = vec3::add(rotor.rotate(vec3::sub(v, params.translation)), noise);
            WeightedPair::new(u, v, 1.0)
        })
        .collect();
    Ok((
        AlignmentProblem::from_pairs(pairs),
        GroundTruth {
            params: params.clone(),
            rotor,
        },
    ))
}
