//! One-dimensional flux reconstruction (FR) with two single-stage high-order
//! time discretisations:
//!
//! * **ADER-FR**: an element-local implicit space-time predictor followed by
//!   an FR corrector built from time-averaged fluxes ([`ader`]).
//! * **Lax-Wendroff FR**: an explicit Taylor expansion in time with D1 or D2
//!   interface dissipation ([`lwfr`]).
//!
//! For linear advection ADER-FR and LWFR with D2 dissipation produce the same
//! update up to rounding; [`driver::compare_schemes`] runs them in lockstep
//! to check this.

pub mod ader;
pub mod basis;
pub mod driver;
pub mod error;
mod fr;
pub mod io;
pub mod lwfr;
pub mod mesh;
pub mod physics;

pub use basis::{build_basis, Basis, CorrectionKind, NodeKind};
pub use driver::{
    compare_schemes, compute_dt, eoc_study, run_simulation, stability_scan, CompareError,
    Comparison, DiffSeries, EocRow, ErrorSeries, RunConfig, RunError, ScanResult, ScanSettings,
    Scheme, Simulation,
};
pub use error::{Error, Result};
pub use fr::BLOW_UP_MAGNITUDE;
pub use lwfr::DissipationKind;
pub use mesh::{make_grid, Grid, SolutionField};
pub use physics::{BoundaryCondition, FluxSpec, InitialCondition, ProblemSpec};
