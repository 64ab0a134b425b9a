//! Classical simulation and verification toolkit for subspace-state linear algebra.
//!
//! A *subspace state* on `n` qubits encodes an orthonormal frame `X` (an `n x d`
//! real matrix with orthonormal columns) as the weight-`d` superposition
//! `|Col(X)> = sum_{|S|=d} det(X_S) |S>`, whose amplitudes are the maximal minors
//! of `X`. The crate provides the pieces needed to build, simulate, and
//! cross-check circuits that manipulate these states:
//!
//! | Module      | Contents |
//! |-------------|----------|
//! | [`subsets`]  | Fixed-weight subsets, colexicographic ranking, enumeration |
//! | [`linalg`]   | Frames, Householder orthogonalization, subset minors, Cauchy-Binet, spherical angles, compound matrices |
//! | [`rng`]      | Counter-based seeded streams (one stream per shot index) |
//! | [`circuit`]  | Gate IR (RBS/FBS/X/Z/CZ/CX), FBS lowering, depth, dense unitaries, JSON |
//! | [`simulator`]| Dense and fixed-weight-sector statevector simulation, reference preparation, measurement, Pluecker checks |
//! | [`givens`]   | Pyramid and sine-cosine Givens decompositions, circuit realization, subspace preparation |
//! | [`loader`]   | Clifford loaders: dense reflection, linear and log-depth circuits, path-sum oracle |
//! | [`detsample`]| Determinantal sampling: exact distribution, classical DPP sampler, quantum route, statistics |
//! | [`sve`]      | Sector unitaries, compound spectra, principal angles, subspace singular-value estimation |
//! | [`tda`]      | Simplicial complexes, boundary/Dirac/Laplacian operators, Betti numbers |
//! | [`verify`]   | Named claim checks shared by the CLI `verify` command and the acceptance suite |
//!
//! Everything is deterministic: all randomness flows from a single seed through
//! per-shot counter streams, so results are identical regardless of thread count.

pub mod caps;
pub mod circuit;
pub mod detsample;
pub mod error;
pub mod givens;
pub mod io;
pub mod linalg;
pub mod loader;
pub mod rng;
pub mod simulator;
pub mod subsets;
pub mod sve;
pub mod tda;
pub mod verify;

pub use circuit::{Circuit, Gate};
pub use error::{Error, Result};
pub use linalg::OrthonormalFrame;
pub use simulator::{SectorState, StateVector};
pub use subsets::Subset;
