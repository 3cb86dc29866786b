//! Exact-arithmetic controllability analysis for Kronecker product networks.
//!
//! The crate decides controllability and observability of a composite network
//! whose topology is the Kronecker product of two small factor networks, by
//! working entirely on the factors: left Jordan chains of the factor adjacency
//! matrices are lifted to an explicit basis of every left eigenspace of the
//! composite, and a rank test per eigenvalue collision class yields the
//! verdict. All arithmetic is exact big-rational; there is no floating point
//! and no tolerance anywhere in verdict-relevant code.
//!
//! Modules:
//! * [`rational`] / [`poly`] / [`mat`] — big-rational scalars, univariate
//!   polynomials, dense matrices with fraction-free elimination kernels.
//! * [`graph`] — weighted digraphs, Kronecker graph composition, Laplacians,
//!   input-node selections, text/DOT formats.
//! * [`eigen`] — exact left Jordan chains for matrices with rational spectra.
//! * [`spectral`] — left eigenvectors of the composite built from factor
//!   chains, eigenvalue collision classes, and a brute-force eigenspace oracle.
//! * [`control`] — the decision procedures plus independent Kalman/PBH oracles.
//! * [`diffcheck`] — seeded differential harness comparing the structured path
//!   against the oracles on random instances.

pub mod control;
pub mod diffcheck;
pub mod eigen;
mod error;
mod factor;
pub mod fixtures;
pub mod graph;
pub mod mat;
pub mod poly;
pub mod rational;
pub mod spectral;

pub use control::{
    check_kron, check_kron_diagonalizable, check_kron_observability, check_kron_with_oracle,
    check_mas, check_mas_legacy, kalman_oracle, mas_conditions, necessary_screens, pbh_oracle,
    pbh_witness, ClassEvidence, ControllabilityReport, LegacyMasReport, MasConditions, Method,
    Screen, Verdict,
};
pub use eigen::{
    eigenstructure, eigenvalues, is_diagonalizable, left_jordan_chains, verify_eigenstructure,
    Eigenstructure, JordanBlockChain,
};
pub use error::{Error, Result};
pub use graph::{InputSelection, MASystem, WeightedDigraph};
pub use mat::{Mat, RowVec};
pub use poly::Poly;
pub use rational::Rational;
pub use spectral::{
    block_pair_eigenvectors, brute_eigenspace, collision_classes, lifted_eigenvectors,
    BlockPairEigenvectors, CollisionClass,
};
