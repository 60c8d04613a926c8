//! Pieces shared by both single-stage schemes: face neighbour lookup and the
//! FR update u^{n+1} = u^n - Δt ∂x F_h with a corrected, continuous flux.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mesh::SolutionField;
use crate::physics::{ProblemSpec, Side};

/// Left and right states at every face `0..=n_elem`.
///
/// `at_left[e]` / `at_right[e]` are the traces of element `e` at ξ = 0 and
/// ξ = 1. `ghost` supplies the inflow state for Dirichlet problems; outflow
/// faces copy the interior trace.
pub(crate) fn face_states<T: Clone>(
    problem: &ProblemSpec,
    at_left: &[T],
    at_right: &[T],
    ghost: impl FnOnce() -> Result<T>,
) -> Result<Vec<(T, T)>> {
    let n = at_left.len();
    let mut faces = Vec::with_capacity(n + 1);
    let (first_left, last_right) = match problem.inflow_side() {
        None => (at_right[n - 1].clone(), at_left[0].clone()),
        Some(Side::Left) => (ghost()?, at_right[n - 1].clone()),
        Some(Side::Right) => (at_left[0].clone(), ghost()?),
    };
    faces.push((first_left, at_left[0].clone()));
    for i in 1..n {
        faces.push((at_right[i - 1].clone(), at_left[i].clone()));
    }
    faces.push((at_right[n - 1].clone(), last_right));
    Ok(faces)
}

/// Applies the FR update given the time-averaged discontinuous flux at the
/// solution points (one column per element) and the time-averaged numerical
/// flux at every face.
pub(crate) fn fr_update(
    state: &SolutionField,
    dt: f64,
    avg_flux: &DMatrix<f64>,
    face_flux: &[f64],
) -> Result<SolutionField> {
    let basis = &state.basis;
    let scale = dt / state.grid.dx;
    let mut next = state.clone();
    for e in 0..state.n_elem() {
        let flux = avg_flux.column(e);
        let jump_left = face_flux[e] - basis.left_interp.dot(&flux);
        let jump_right = face_flux[e + 1] - basis.right_interp.dot(&flux);
        let dflux: DVector<f64> = &basis.diff_matrix * flux
            + &basis.corr_deriv_left * jump_left
            + &basis.corr_deriv_right * jump_right;
        let mut col = next.values.column_mut(e);
        col.axpy(-scale, &dflux, 1.0);
    }
    next.time = state.time + dt;
    if next
        .values
        .iter()
        .any(|v| v.is_nan() || v.abs() > BLOW_UP_MAGNITUDE)
    {
        return Err(Error::BlowUp { time: state.time });
    }
    Ok(next)
}

/// Nodal magnitude treated as divergence. Linear instabilities grow
/// geometrically and would otherwise overflow the error norms long before the
/// nodal values themselves become infinite.
pub const BLOW_UP_MAGNITUDE: f64 = 1e100;

pub(crate) fn check_step(dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "time step must be positive, got {dt}"
        )));
    }
    Ok(())
}
