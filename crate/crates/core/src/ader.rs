//! ADER-FR: an element-local space-time predictor followed by an FR
//! corrector built from time-averaged fluxes.
//!
//! The predictor is the space-time polynomial `ũ(ξ,τ) = Σ ũ_{j,k} l_j(ξ) l_k(τ)`
//! that satisfies, for every test function `l_j(ξ) l_k(τ)`, the local weak
//! form integrated by parts in time. With collocation quadrature at the
//! tensor solution points and after dividing by `Δx w_j`, the equation for
//! test index `(j, k)` reads
//!
//! ```text
//! Σ_q K[k][q] ũ_{j,q} + (Δt/Δx) w_k Σ_p D[j][p] f(ũ_{p,k}) = l_k(0) u_j
//! K[k][q] = l_k(1) l_q(1) - w_q l_k'(τ_q)
//! ```

use nalgebra::{DMatrix, DVector};

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::fr::{check_step, face_states, fr_update};
use crate::mesh::SolutionField;
use crate::physics::{upwind_numflux, FluxSpec, ProblemSpec};

/// Space-time coefficients of one element; row = space node, column = time node.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictor {
    pub values: DMatrix<f64>,
    pub flux_values: DMatrix<f64>,
}

impl Predictor {
    fn new(values: DMatrix<f64>, flux: &FluxSpec) -> Self {
        let flux_values = values.map(|u| flux.flux(u));
        Predictor {
            values,
            flux_values,
        }
    }

    /// (1/Δt) ∫ ũ(ξ_j, t) dt at every solution point, by temporal quadrature.
    pub fn time_average(&self, basis: &Basis) -> DVector<f64> {
        &self.values * DVector::from_column_slice(&basis.weights)
    }

    pub fn time_averaged_flux(&self, basis: &Basis) -> DVector<f64> {
        &self.flux_values * DVector::from_column_slice(&basis.weights)
    }

    /// ũ(0, τ_q) and ũ(1, τ_q) for every temporal node.
    pub fn traces(&self, basis: &Basis) -> (DVector<f64>, DVector<f64>) {
        (
            self.values.tr_mul(&basis.left_interp),
            self.values.tr_mul(&basis.right_interp),
        )
    }
}

/// Temporal operator `K[k][q] = l_k(1) l_q(1) - w_q l_k'(τ_q)`.
pub fn temporal_operator(basis: &Basis) -> DMatrix<f64> {
    let n = basis.n_nodes();
    DMatrix::from_fn(n, n, |k, q| {
        basis.right_interp[k] * basis.right_interp[q] - basis.weights[q] * basis.diff_matrix[(q, k)]
    })
}

/// Dense solver for the linear predictor system. The system depends only on
/// the Courant number a Δt/Δx, so one factorisation serves every element.
pub struct DirectPredictorSolver {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    left_time: DVector<f64>,
    flux: FluxSpec,
    n: usize,
}

impl DirectPredictorSolver {
    pub fn new(basis: &Basis, flux: &FluxSpec, dt: f64, dx: f64) -> Result<Self> {
        let a = flux.linear_speed().ok_or_else(|| {
            Error::InvalidInput("the direct predictor solve needs a linear flux".into())
        })?;
        let n = basis.n_nodes();
        let courant = a * dt / dx;
        let k_op = temporal_operator(basis);
        let d = &basis.diff_matrix;
        let idx = |j: usize, q: usize| j * n + q;
        let mut system = DMatrix::zeros(n * n, n * n);
        for j in 0..n {
            for k in 0..n {
                let row = idx(j, k);
                for q in 0..n {
                    system[(row, idx(j, q))] += k_op[(k, q)];
                }
                for p in 0..n {
                    system[(row, idx(p, k))] += courant * basis.weights[k] * d[(j, p)];
                }
            }
        }
        let lu = system.lu();
        if !lu.is_invertible() {
            return Err(Error::Numerical("singular predictor system".into()));
        }
        Ok(DirectPredictorSolver {
            lu,
            left_time: basis.left_interp.clone(),
            flux: *flux,
            n,
        })
    }

    pub fn solve(&self, u_elem: &DVector<f64>) -> Result<Predictor> {
        let n = self.n;
        let rhs = DVector::from_fn(n * n, |row, _| u_elem[row / n] * self.left_time[row % n]);
        let sol = self
            .lu
            .solve(&rhs)
            .ok_or_else(|| Error::Numerical("predictor solve failed".into()))?;
        // row-major (j, q) -> matrix
        let values = DMatrix::from_fn(n, n, |j, q| sol[j * n + q]);
        Ok(Predictor::new(values, &self.flux))
    }
}

/// Solves the linear predictor equation directly.
pub fn solve_predictor_direct(
    basis: &Basis,
    flux: &FluxSpec,
    u_elem: &DVector<f64>,
    dt: f64,
    dx: f64,
) -> Result<Predictor> {
    DirectPredictorSolver::new(basis, flux, dt, dx)?.solve(u_elem)
}

const PICARD_DIVERGENCE_FACTOR: f64 = 1e6;

/// Fixed-point iteration on
/// `Ũ K^T = u l(0)^T - (Δt/Δx) D f(Ũ) W`, starting from the state frozen in time.
pub struct PicardPredictorSolver {
    inv_kt: DMatrix<f64>,
    diff: DMatrix<f64>,
    weights: DMatrix<f64>,
    left_time: DVector<f64>,
}

impl PicardPredictorSolver {
    pub fn new(basis: &Basis) -> Result<Self> {
        let inv_kt = temporal_operator(basis)
            .transpose()
            .try_inverse()
            .ok_or_else(|| Error::Numerical("singular temporal operator".into()))?;
        Ok(PicardPredictorSolver {
            inv_kt,
            diff: basis.diff_matrix.clone(),
            weights: DMatrix::from_diagonal(&DVector::from_column_slice(&basis.weights)),
            left_time: basis.left_interp.clone(),
        })
    }

    pub fn solve(
        &self,
        flux: &FluxSpec,
        u_elem: &DVector<f64>,
        dt: f64,
        dx: f64,
        n_iter: usize,
    ) -> Result<Predictor> {
        if n_iter == 0 {
            return Err(Error::InvalidInput(
                "Picard needs at least one iteration".into(),
            ));
        }
        let n = u_elem.len();
        let source = u_elem * self.left_time.transpose();
        let mut values = DMatrix::from_fn(n, n, |j, _| u_elem[j]);
        let start_norm = values.amax().max(f64::MIN_POSITIVE);
        for _ in 0..n_iter {
            let fluxes = values.map(|u| flux.flux(u));
            let rhs = &source - (&self.diff * fluxes * &self.weights) * (dt / dx);
            values = rhs * &self.inv_kt;
            let norm = values.amax();
            if !norm.is_finite() || norm > PICARD_DIVERGENCE_FACTOR * start_norm {
                return Err(Error::Numerical(
                    "Picard iteration diverged; time step too large for the predictor".into(),
                ));
            }
        }
        Ok(Predictor::new(values, flux))
    }
}

pub fn solve_predictor_picard(
    basis: &Basis,
    flux: &FluxSpec,
    u_elem: &DVector<f64>,
    dt: f64,
    dx: f64,
    n_iter: usize,
) -> Result<Predictor> {
    PicardPredictorSolver::new(basis)?.solve(flux, u_elem, dt, dx, n_iter)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictorMethod {
    Direct,
    Picard { iterations: usize },
}

impl PredictorMethod {
    /// Direct solve for linear fluxes, N+1 Picard sweeps otherwise.
    pub fn default_for(flux: &FluxSpec, degree: usize) -> Self {
        match flux {
            FluxSpec::LinearAdvection { .. } => PredictorMethod::Direct,
            FluxSpec::Burgers => PredictorMethod::Picard {
                iterations: degree + 1,
            },
        }
    }
}

/// Time-averaged flux ingredients of one ADER step.
#[derive(Debug, Clone)]
pub struct AderFluxData {
    /// (1/Δt) ∫ f̃(ξ_j, t) dt, one column per element.
    pub avg_flux: DMatrix<f64>,
    /// Time-averaged predictor, one column per element.
    pub avg_solution: DMatrix<f64>,
    /// Predictor states at each face and temporal node, (left, right).
    pub face_states: Vec<(DVector<f64>, DVector<f64>)>,
    /// (1/Δt) ∫ f_{e+1/2}(ũ(t)) dt at each face.
    pub face_flux: Vec<f64>,
}

impl AderFluxData {
    /// Numerical flux of the time-averaged face states. For a linear flux
    /// this equals `face_flux` up to rounding.
    pub fn face_flux_of_averages(&self, flux: &FluxSpec, basis: &Basis) -> Vec<f64> {
        let w = DVector::from_column_slice(&basis.weights);
        self.face_states
            .iter()
            .map(|(l, r)| upwind_numflux(flux, w.dot(l), w.dot(r)))
            .collect()
    }

    /// Corrected flux `F̃_h` evaluated at ξ = 0 and ξ = 1 of element `e`.
    pub fn corrected_endpoint_flux(&self, basis: &Basis, e: usize) -> (f64, f64) {
        let col = self.avg_flux.column(e);
        let f0 = basis.left_interp.dot(&col);
        let f1 = basis.right_interp.dot(&col);
        let (gl, gr) = basis.correction_endpoint_values();
        let jump_l = self.face_flux[e] - f0;
        let jump_r = self.face_flux[e + 1] - f1;
        (
            f0 + gl[0] * jump_l + gr[0] * jump_r,
            f1 + gl[1] * jump_l + gr[1] * jump_r,
        )
    }
}

pub fn ader_flux_data(
    state: &SolutionField,
    problem: &ProblemSpec,
    dt: f64,
    method: PredictorMethod,
) -> Result<AderFluxData> {
    check_step(dt)?;
    let basis = &state.basis;
    let n_elem = state.n_elem();
    let dx = state.grid.dx;
    let flux = problem.flux;
    let n = basis.n_nodes();

    let direct = match method {
        PredictorMethod::Direct => Some(DirectPredictorSolver::new(basis, &flux, dt, dx)?),
        PredictorMethod::Picard { .. } => None,
    };
    let picard = match method {
        PredictorMethod::Picard { .. } => Some(PicardPredictorSolver::new(basis)?),
        PredictorMethod::Direct => None,
    };

    let mut avg_flux = DMatrix::zeros(n, n_elem);
    let mut avg_solution = DMatrix::zeros(n, n_elem);
    let mut at_left = Vec::with_capacity(n_elem);
    let mut at_right = Vec::with_capacity(n_elem);
    for e in 0..n_elem {
        let u = state.element(e);
        let pred = match (method, &direct, &picard) {
            (PredictorMethod::Direct, Some(s), _) => s.solve(&u)?,
            (PredictorMethod::Picard { iterations }, _, Some(s)) => {
                s.solve(&flux, &u, dt, dx, iterations)?
            }
            _ => unreachable!(),
        };
        avg_flux.set_column(e, &pred.time_averaged_flux(basis));
        avg_solution.set_column(e, &pred.time_average(basis));
        let (l, r) = pred.traces(basis);
        at_left.push(l);
        at_right.push(r);
    }

    let ghost = || -> Result<DVector<f64>> {
        let mut g = DVector::zeros(n);
        for (q, tau) in basis.nodes.iter().enumerate() {
            g[q] = problem.boundary_value(state.time + tau * dt)?;
        }
        Ok(g)
    };
    let face_states = face_states(problem, &at_left, &at_right, ghost)?;
    let face_flux = face_states
        .iter()
        .map(|(l, r)| {
            (0..n)
                .map(|q| basis.weights[q] * upwind_numflux(&flux, l[q], r[q]))
                .sum()
        })
        .collect();

    Ok(AderFluxData {
        avg_flux,
        avg_solution,
        face_states,
        face_flux,
    })
}

/// One ADER-FR step with the default predictor for the problem's flux.
pub fn ader_step(state: &SolutionField, problem: &ProblemSpec, dt: f64) -> Result<SolutionField> {
    let method = PredictorMethod::default_for(&problem.flux, state.basis.degree);
    ader_step_with(state, problem, dt, method)
}

pub fn ader_step_with(
    state: &SolutionField,
    problem: &ProblemSpec,
    dt: f64,
    method: PredictorMethod,
) -> Result<SolutionField> {
    let data = ader_flux_data(state, problem, dt, method)?;
    fr_update(state, dt, &data.avg_flux, &data.face_flux)
}
