//! Distinguishability of quantum states through entropy and purification.
//!
//! The central quantity is
//!
//! ```text
//! D_N(ρ, σ) = min over purifications sqrt(H_N((P_ρ + P_σ)/2)) = sqrt(Φ(F(ρ, σ)))
//! ```
//!
//! where `H_N` is the von Neumann entropy in bits, `F` the (non-squared)
//! Uhlmann fidelity and `Φ(x)` the binary entropy of `((1-x)/2, (1+x)/2)`.
//! [`distances::dn_mixed_closed`] evaluates the closed form in any dimension;
//! [`purification::dn_via_purification`] performs the minimization explicitly
//! for qubits.

pub mod channels;
pub mod distances;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod purification;
pub mod states;
pub mod sweep;
pub mod verify;

pub use channels::{contract_bloch, DepolarizingChannel, MixingChannel};
pub use distances::{
    bures, dn_mixed_closed, dn_pure, fidelity, neighboring_overlap_deficit, phi, qjsd, wootters, Diagnostics,
    DistanceReport, Method,
};
pub use entropy::{mixing_gap, relative_entropy, shannon, von_neumann, Ensemble, ProbDist};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Mat3};
pub use purification::{
    ap_update, dn_via_purification, procrustes_so3, solve_a_system, spectral_purify, unitary_freedom_check,
    Objective, QubitPurification, Rotation3, SystemForm,
};
pub use states::{from_bloch, parse_state, to_bloch, BlochVector, DensityMatrix, PureState};
