//! Rigid pointcloud alignment in the geometric algebra G³.
//!
//! * [`ga`]: multivectors, the even subalgebra and rotors.
//! * [`eig`]: a symmetric 4×4 Jacobi eigensolver.
//! * [`align`]: the weighted rotation/translation estimator with rotor priors.
//! * [`cli`]: CSV/JSON ingestion, the synthetic generator and the benchmark.

pub mod align;
pub mod cli;
pub mod eig;
pub mod ga;
pub mod vec3;

pub use align::{
    AlignError, AlignmentProblem, AlignmentSolution, RotorMeasurement, SummarizeOptions, Summary, WeightedPair,
};
pub use ga::{EvenMultivector, Multivector, Rotor};
