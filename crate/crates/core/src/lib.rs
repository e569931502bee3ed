//! Quantum mechanics of light beams: two-component photon wave functions in
//! the momentum representation, Poincare-generator observables, synthesis of
//! the corresponding Maxwell fields through the Riemann-Silberstein
//! expansion, helicity decomposition and Stokes analysis of classical
//! fields, and two-helicity propagation through static inhomogeneous media.
//!
//! Everything internal runs in natural units (hbar = c = eps0 = mu0 = 1);
//! unit conversion belongs at the I/O boundary.

pub mod beams;
pub mod error;
pub mod generators;
pub mod grid;
pub mod helicity;
pub mod io;
pub mod math;
pub mod medium;
pub mod momentum;
pub mod polarization;
pub mod synthesis;

pub use beams::{
    beam_bessel, beam_bessel_grid_locked, beam_exponential, beam_laguerre_gauss,
    beam_lg_grid_locked, build_beam, lattice_circle, product_grid3d, BeamSpec, Helicity,
};
pub use error::{Error, Result};
pub use generators::{
    angular_momentum_z_split, apply_generator, eigen_residual, expectation_complex,
    expectation_value, orbital_spin_split, Generator,
};
pub use grid::{Boundary, PositionGrid, SpectralOps, VectorField3};
pub use helicity::{
    helicity_apply, helicity_project, landau_peierls_forward, landau_peierls_inverse,
    lp_expectation, stokes, HelicityMethod, LPWaveFunction, StokesMap,
};
pub use math::{C64, CVec3, Vec3};
pub use medium::{
    build_medium, mixing_measure, tanh_slab_profile, vacuum_medium, DerivativeScheme,
    DiagnosticsRow, MediumMap, PropagationState, Propagator, StepperConfig,
};
pub use momentum::{
    scalar_product, state_distance, DiscreteSymmetry, Layout, ManifoldKind,
    MomentumWaveFunction, ReducedParams, RhoMatrix, WaveVectorSample,
};
pub use polarization::{
    connection_alpha, connection_alpha_cartesian, connection_alpha_numeric, connection_curl_fd,
    curvature_residual, polarization_vector, polarization_vector_cartesian,
};
pub use synthesis::{
    coherent_average, em_to_rs, energy_fraction, field_energy_momentum,
    maxwell_residual_monochromatic, maxwell_residual_snapshots, rs_to_em, spin_curl_equivalence,
    synthesize, EMFields, HelicityField, MaxwellResidual,
};
