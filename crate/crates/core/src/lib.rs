//! Exact computations on the Picard lattices of blown-up planes, toric
//! moment polytopes and the reduced spaces of Hamiltonian circle actions on
//! six-manifolds with four fixed points.
//!
//! All arithmetic is exact over `Ratio<i128>`; there is no floating point.

pub mod cubic;
pub mod decomposition;
pub mod hamiltonian;
pub mod lattice;
pub mod linalg;
pub mod rational;
pub mod reduced_space;
pub mod snf;
pub mod toric;
pub mod verify;
pub mod weyl;

pub use cubic::{HomogeneousPoly, ProjPoint};
pub use decomposition::{AdmissibilityProfile, Decomposer, Decomposition, SearchBudget, SearchError};
pub use hamiltonian::{FixedPointDatum, MomentPolytope3, Slice};
pub use lattice::{inflation_class, DivisorClass, LatticeError};
pub use rational::{frac, q, Q};
pub use reduced_space::{ReducedClass, TauClass};
pub use snf::SmithForm;
pub use toric::{FanCycle, Point2, Polytope2, Ray};
pub use verify::{Status, VerificationReport};
pub use weyl::{Dictionary, LatticeMap, WeylGenerator};
