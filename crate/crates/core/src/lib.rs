//! Numerical laboratory for one-dimensional quantum scattering on the half line.
//!
//! The crate computes scattering data (Jost function, scattering matrix, bound
//! states, phase shifts, resonances) for compactly supported real potentials,
//! and recovers potentials from scattering data by three independent inversion
//! schemes: the Marchenko equation driven by the scattering matrix and bound
//! states, the Gel'fand-Levitan equation driven by the spectral measure, and
//! the Krein equation driven by the boundary kernel of the scattering matrix.
//! Supporting modules cover fixed-energy phase-shift analysis, the Born
//! approximation and its ill-posedness, and shared numerical machinery
//! (oscillatory Fourier quadrature, second-kind integral solvers, winding
//! numbers, complex zero searches, adaptive ODE integration).

pub mod error;
pub mod forward;
pub mod gelfand_levitan;
pub mod grid;
pub mod kernel;
pub mod krein;
pub mod marchenko;
pub mod numerics;
pub mod potential;
pub mod special;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::IslError;
pub use forward::{
    BoundState, HalfLineScatteringData, JostEvaluation, PhaseShiftSet, RegularSolution,
};
pub use gelfand_levitan::{GlInversion, SpectralAtom, SpectralMeasure};
pub use grid::{SampledFunction, UniformGrid};
pub use kernel::{KernelOrientation, TriangularKernel};
pub use krein::{KreinInversion, KreinWorkspace};
pub use marchenko::{CharacterizationReport, MarchenkoInversion};
pub use potential::RadialPotential;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, IslError>;
