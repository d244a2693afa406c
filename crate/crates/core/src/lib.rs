//! Two Ising-coupled spins, the first driven by a quantized field mode in the
//! rotating-wave approximation.
//!
//! * [`linalg`]: dense complex matrices, a Jacobi Hermitian eigensolver,
//!   unitary flows and partial traces.
//! * [`model`]: truncated single- and two-mode Hamiltonians, basis
//!   bookkeeping and the field-phase / two-mode rotation operators.
//! * [`analytic`]: closed-form mixing angles, energies, eigenstates,
//!   geometric phases and adiabaticity ratios.
//! * [`geomphase`]: the same phases computed numerically from Wilson loops,
//!   connection integrals and reduced density matrices.

pub mod analytic;
pub mod error;
pub mod geomphase;
pub mod linalg;
pub mod model;

pub use analytic::{LevelId, MixingAngles, PhaseResult, SectorEnergies};
pub use error::{Error, Result};
pub use geomphase::{Continuation, HoloResult, LoopSpec, MixedPhaseResult};
pub use linalg::{ComplexMatrix, Ket};
pub use model::{BasisIndex, FieldSpace, ModelParams, Sector, SectorLabel, Spin, DEFAULT_CUTOFF};
