//! Lax-Wendroff FR for linear advection.
//!
//! The time-averaged solution is the truncated Taylor series
//! `U = Σ_{k=0}^{N} (-a Δt)^k / (k+1)! ∂x^k u`, with derivatives taken on the
//! local polynomial, and the discontinuous time-averaged flux is `a U`.

use nalgebra::{DMatrix, DVector};

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::fr::{check_step, face_states, fr_update};
use crate::mesh::SolutionField;
use crate::physics::ProblemSpec;

/// Interface flux dissipation built from the time-averaged trace (D2) or the
/// current solution trace (D1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DissipationKind {
    D1,
    D2,
}

/// Approximate time-averaged solution at the solution points of one element.
pub fn time_averaged_solution(
    basis: &Basis,
    a: f64,
    u_elem: &DVector<f64>,
    dt: f64,
    dx: f64,
) -> DVector<f64> {
    let courant = a * dt / dx;
    let mut term = u_elem.clone(); // (-c)^k D^k u / k!
    let mut avg = u_elem.clone();
    for k in 1..=basis.degree {
        term = (&basis.diff_matrix * term) * (-courant / k as f64);
        avg.axpy(1.0 / (k + 1) as f64, &term, 1.0);
    }
    avg
}

/// LW interface flux from the time-averaged (`U`) and current (`u`) traces.
pub fn lw_numflux(
    kind: DissipationKind,
    a: f64,
    avg_left: f64,
    avg_right: f64,
    u_left: f64,
    u_right: f64,
) -> f64 {
    let central = 0.5 * a * (avg_left + avg_right);
    match kind {
        DissipationKind::D2 => central - 0.5 * a.abs() * (avg_right - avg_left),
        DissipationKind::D1 => central - 0.5 * a.abs() * (u_right - u_left),
    }
}

/// Traces of one element at ξ = 0 or ξ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LwTrace {
    pub avg: f64,
    pub current: f64,
}

#[derive(Debug, Clone)]
pub struct LwFluxData {
    /// U_h^n at the solution points, one column per element.
    pub avg_solution: DMatrix<f64>,
    /// F_h^δ = a U_h^n.
    pub avg_flux: DMatrix<f64>,
    /// (left, right) traces at every face.
    pub face_states: Vec<(LwTrace, LwTrace)>,
    pub face_flux: Vec<f64>,
}

fn linear_speed(problem: &ProblemSpec) -> Result<f64> {
    problem.flux.linear_speed().ok_or_else(|| {
        Error::InvalidInput("Lax-Wendroff FR is implemented for linear flux only".into())
    })
}

pub fn lwfr_flux_data(
    state: &SolutionField,
    problem: &ProblemSpec,
    dt: f64,
    kind: DissipationKind,
) -> Result<LwFluxData> {
    check_step(dt)?;
    let a = linear_speed(problem)?;
    let basis = &state.basis;
    let n_elem = state.n_elem();
    let mut avg_solution = DMatrix::zeros(basis.n_nodes(), n_elem);
    let mut at_left = Vec::with_capacity(n_elem);
    let mut at_right = Vec::with_capacity(n_elem);
    for e in 0..n_elem {
        let u = state.element(e);
        let avg = time_averaged_solution(basis, a, &u, dt, state.grid.dx);
        at_left.push(LwTrace {
            avg: basis.left_interp.dot(&avg),
            current: basis.left_interp.dot(&u),
        });
        at_right.push(LwTrace {
            avg: basis.right_interp.dot(&avg),
            current: basis.right_interp.dot(&u),
        });
        avg_solution.set_column(e, &avg);
    }
    let ghost = || -> Result<LwTrace> {
        let mut avg = 0.0;
        for (tau, w) in basis.nodes.iter().zip(&basis.weights) {
            avg += w * problem.boundary_value(state.time + tau * dt)?;
        }
        Ok(LwTrace {
            avg,
            current: problem.boundary_value(state.time)?,
        })
    };
    let face_states = face_states(problem, &at_left, &at_right, ghost)?;
    let face_flux = face_states
        .iter()
        .map(|(l, r)| lw_numflux(kind, a, l.avg, r.avg, l.current, r.current))
        .collect();
    Ok(LwFluxData {
        avg_flux: &avg_solution * a,
        avg_solution,
        face_states,
        face_flux,
    })
}

pub fn lwfr_step(
    state: &SolutionField,
    problem: &ProblemSpec,
    dt: f64,
    kind: DissipationKind,
) -> Result<SolutionField> {
    let data = lwfr_flux_data(state, problem, dt, kind)?;
    fr_update(state, dt, &data.avg_flux, &data.face_flux)
}
