//! Uniform 1-D grid and the nodal solution field living on it.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::basis::{lagrange_values, legendre_nodes, Basis, NodeKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_elem: usize,
    pub dx: f64,
}

pub fn make_grid(x_min: f64, x_max: f64, n_elem: usize) -> Result<Grid> {
    if n_elem == 0 {
        return Err(Error::InvalidConfig("need at least one element".into()));
    }
    if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
        return Err(Error::InvalidConfig(format!(
            "empty interval [{x_min}, {x_max}]"
        )));
    }
    Ok(Grid {
        x_min,
        x_max,
        n_elem,
        dx: (x_max - x_min) / n_elem as f64,
    })
}

impl Grid {
    /// Position of face `i`, `0 <= i <= n_elem`.
    pub fn face(&self, i: usize) -> f64 {
        if i == self.n_elem {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx
        }
    }

    pub fn faces(&self) -> Vec<f64> {
        (0..=self.n_elem).map(|i| self.face(i)).collect()
    }

    /// Physical coordinate of reference point `xi` in element `e`.
    pub fn to_physical(&self, e: usize, xi: f64) -> f64 {
        self.face(e) + xi * self.dx
    }
}

/// Nodal values `u_j^e`, stored one column per element.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    pub basis: Arc<Basis>,
    pub grid: Grid,
    pub values: DMatrix<f64>,
    pub time: f64,
}

impl SolutionField {
    pub fn zeros(basis: Arc<Basis>, grid: Grid) -> Self {
        let values = DMatrix::zeros(basis.n_nodes(), grid.n_elem);
        SolutionField {
            basis,
            grid,
            values,
            time: 0.0,
        }
    }

    pub fn n_elem(&self) -> usize {
        self.grid.n_elem
    }

    pub fn element(&self, e: usize) -> DVector<f64> {
        self.values.column(e).into_owned()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Σ_e Δx Σ_j w_j u_j^e, the integral of the piecewise polynomial.
    pub fn total_mass(&self) -> f64 {
        let w = DVector::from_column_slice(&self.basis.weights);
        self.grid.dx * self.values.column_iter().map(|c| w.dot(&c)).sum::<f64>()
    }

    /// Largest nodal difference to another field on the same discretization.
    pub fn linf_diff(&self, other: &SolutionField) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    /// Evaluates u_h at physical point `x`. At a face the left element wins
    /// except at `x_min`.
    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        let e =
            (((x - g.x_min) / g.dx).ceil() as isize - 1).clamp(0, g.n_elem as isize - 1) as usize;
        let xi = (x - g.face(e)) / g.dx;
        let col = self.values.column(e);
        self.basis.interpolate(col.as_slice(), xi)
    }
}

/// Nodal collocation of `ic` on the grid.
pub fn sample_initial_condition<F: Fn(f64) -> f64>(
    grid: &Grid,
    basis: Arc<Basis>,
    ic: F,
) -> Result<SolutionField> {
    let mut field = SolutionField::zeros(basis.clone(), *grid);
    for e in 0..grid.n_elem {
        for (j, &xi) in basis.nodes.iter().enumerate() {
            let x = grid.to_physical(e, xi);
            let v = ic(x);
            if !v.is_finite() {
                return Err(Error::Data(format!("initial condition is {v} at x = {x}")));
            }
            field.values[(j, e)] = v;
        }
    }
    Ok(field)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l2: f64,
    pub linf: f64,
}

/// L2 and L∞ distance to `exact(x, t)`, using an (N+4)-point Gauss rule per
/// element for both.
pub fn error_norms<F>(field: &SolutionField, exact: F, t: f64) -> Result<ErrorNorms>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    if !field.is_finite() {
        return Err(Error::Data("field contains non-finite values".into()));
    }
    let basis = &field.basis;
    let (qx, qw) = legendre_nodes(NodeKind::GaussLegendre, basis.degree + 3)?;
    let interp: Vec<Vec<f64>> = qx
        .iter()
        .map(|&x| lagrange_values(&basis.nodes, &basis.bary, x))
        .collect();
    let grid = &field.grid;
    let mut sum_sq = 0.0;
    let mut linf: f64 = 0.0;
    for e in 0..grid.n_elem {
        let col = field.values.column(e);
        let mut elem_sq = 0.0;
        for (q, (&xi, &w)) in qx.iter().zip(&qw).enumerate() {
            let uh: f64 = interp[q].iter().zip(col.iter()).map(|(l, u)| l * u).sum();
            let diff = uh - exact(grid.to_physical(e, xi), t)?;
            elem_sq += w * diff * diff;
            linf = linf.max(diff.abs());
        }
        sum_sq += grid.dx * elem_sq;
    }
    if !(sum_sq.is_finite() && linf.is_finite()) {
        return Err(Error::Data("non-finite error norm".into()));
    }
    Ok(ErrorNorms {
        l2: sum_sq.sqrt(),
        linf,
    })
}
