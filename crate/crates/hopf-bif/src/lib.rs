//! Bifurcation sequences of periodic orbits in integrable approximations of
//! the spatial secular three-body problem.
//!
//! For fixed total angular momentum the 1:1-resonant phase space reduces, in
//! Hopf variables, to a 2-sphere of radius `sigma0`; periodic orbits are
//! tangencies or degenerate intersections of that sphere with the surfaces of
//! constant energy of an integrable model `Z(sigma0, sigma1, sigma3)`. This
//! crate computes those critical points and the bifurcation sequence they
//! trace as `sigma0` varies — in closed form for quadratic models, by robust
//! scanning for general polynomial ones — and verifies both against
//! brute-force oracles, time integration and Poincaré sections.
//!
//! The guide under `book/` walks through the concepts chapter by chapter;
//! every code block in it runs as a doc-test of this crate.

// `!(x > 0.0)` is used deliberately where NaN must be rejected along with
// non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[cfg(doctest)]
mod book_doctests;

pub mod critical;
pub mod error;
pub mod flow;
pub mod hopf;
pub mod models;
pub mod numeric;
pub mod octupole;
pub mod oracle;
pub mod poly;
pub mod quad;
pub mod quartic;
pub mod scan;
pub mod sequence;

pub use critical::{CpKind, CriticalPoint, Stability, Tangency};
pub use error::{Error, Result};
pub use flow::{
    auto_levels, contour_portrait, floquet_confirm, integrate_reduced, poincare_section,
    ContourOptions, FloquetPair, PoincareMonomial, PoincarePolyHamiltonian, PortraitCurve,
    ReducedTrajectory, SectionOptions, SectionPoint,
};
pub use hopf::{
    hopf_to_section_plane, i_max, mutual_inclination, poincare_to_hopf,
    reduced_flow_rhs, section_plane_to_poincare, HopfState, MutualInclination,
    PoincareState, ReducedActionAngle, SystemParams,
};
pub use octupole::{octupole_coefficients, octupole_to_quad, OctupoleCoefficients};
pub use oracle::{disk_critical_scan, grid_tangency_scan, quartic_bruteforce, DiskCensus, DiskCritKind};
pub use poly::{HopfMonomial, PolyHopfHamiltonian};
pub use quad::{
    bifurcation_values, cpi_quartic_roots, cpii_center_and_stability, cpii_values,
    discriminant_q, f1_roots, rotate_to_diagonal, BifurcationValues, ConicClass,
    CpiRoot, CpiRoots, QuadHopfHamiltonian, Rotation,
};
pub use scan::{
    classify_cpi, domain_limits, energy_limits, find_cpi, find_cpii, sigma0_limits,
    CpiiPair, DomainLimits, EnergyLimits, ScanOptions, Sigma0Limits,
};
pub use sequence::{
    bifurcation_sequence, BifurcationEvent, BifurcationSequence, Census, EventKind,
    LabeledPoint, StabilityChange, SweepOptions,
};
