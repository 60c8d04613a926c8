//! Reference-element data on [0, 1]: Gauss nodes and weights, Lagrange
//! interpolation, the nodal differentiation matrix and the derivatives of the
//! FR correction functions at the solution points.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest polynomial degree a [`Basis`] may be built for.
pub const MAX_DEGREE: usize = 10;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Solution point family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    GaussLegendre,
    GaussLobattoLegendre,
}

/// FR correction function family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrectionKind {
    /// Right/left Radau polynomials; recovers nodal DG on Gauss-Legendre points.
    Radau,
    /// Huynh's g2; recovers lumped-mass DG on Gauss-Lobatto points.
    G2,
}

impl CorrectionKind {
    /// The node family this correction recovers DG with.
    pub fn natural_nodes(self) -> NodeKind {
        match self {
            CorrectionKind::Radau => NodeKind::GaussLegendre,
            CorrectionKind::G2 => NodeKind::GaussLobattoLegendre,
        }
    }
}

/// Legendre polynomial P_n and its derivative at `x` in [-1, 1].
pub(crate) fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    // P_n' from the standard recurrence; endpoints handled separately since
    // the formula divides by 1 - x^2.
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        let sign = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        sign * nf * (nf + 1.0) / 2.0
    } else {
        nf * (p_prev - x * p) / (1.0 - x * x)
    };
    (p, dp)
}

fn gauss_legendre_symmetric(n_points: usize) -> (Vec<f64>, Vec<f64>) {
    let n = n_points;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-like initial guess, descending in x.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn gauss_lobatto_symmetric(n_points: usize) -> (Vec<f64>, Vec<f64>) {
    let degree = n_points - 1;
    let nf = degree as f64;
    let mut nodes = vec![0.0; n_points];
    nodes[0] = -1.0;
    nodes[degree] = 1.0;
    for (i, node) in nodes.iter_mut().enumerate().take(degree).skip(1) {
        // Interior nodes are the roots of P_N'; start from Chebyshev-Gauss-Lobatto points.
        let mut x = -(std::f64::consts::PI * i as f64 / nf).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre_and_derivative(degree, x);
            let d2p = (2.0 * x * dp - nf * (nf + 1.0) * p) / (1.0 - x * x);
            let dx = dp / d2p;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                break;
            }
        }
        *node = x;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (p, _) = legendre_and_derivative(degree, x);
            2.0 / (nf * (nf + 1.0) * p * p)
        })
        .collect();
    (nodes, weights)
}

/// Quadrature nodes and weights of the given family with `degree + 1`
/// points, mapped to [0, 1] (weights sum to one).
pub fn legendre_nodes(kind: NodeKind, degree: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n_points = degree + 1;
    let (x, w) = match kind {
        NodeKind::GaussLegendre => gauss_legendre_symmetric(n_points),
        NodeKind::GaussLobattoLegendre => {
            if degree == 0 {
                return Err(Error::InvalidConfig(
                    "Gauss-Lobatto points need degree >= 1".into(),
                ));
            }
            gauss_lobatto_symmetric(n_points)
        }
    };
    let nodes = x.iter().map(|&x| 0.5 * (x + 1.0)).collect();
    let weights = w.iter().map(|&w| 0.5 * w).collect();
    Ok((nodes, weights))
}

/// Barycentric weights 1 / prod_{k != j} (x_j - x_k).
pub fn barycentric_weights(nodes: &[f64]) -> Result<Vec<f64>> {
    let n = nodes.len();
    let mut lambda = vec![1.0; n];
    for j in 0..n {
        for k in 0..n {
            if k == j {
                continue;
            }
            let diff = nodes[j] - nodes[k];
            if diff == 0.0 {
                return Err(Error::InvalidInput(format!(
                    "duplicate interpolation node {}",
                    nodes[j]
                )));
            }
            lambda[j] /= diff;
        }
    }
    Ok(lambda)
}

/// Values of every Lagrange basis polynomial at `x` (second barycentric form).
/// Works outside the node hull as well.
pub fn lagrange_values(nodes: &[f64], bary: &[f64], x: f64) -> Vec<f64> {
    if let Some(hit) = nodes.iter().position(|&xi| xi == x) {
        let mut out = vec![0.0; nodes.len()];
        out[hit] = 1.0;
        return out;
    }
    let terms: Vec<f64> = nodes
        .iter()
        .zip(bary)
        .map(|(&xi, &l)| l / (x - xi))
        .collect();
    let denom: f64 = terms.iter().sum();
    terms.into_iter().map(|t| t / denom).collect()
}

/// Nodal differentiation matrix `D[i][j] = l_j'(x_i)`.
pub fn differentiation_matrix(nodes: &[f64]) -> Result<DMatrix<f64>> {
    let bary = barycentric_weights(nodes)?;
    Ok(differentiation_matrix_with(nodes, &bary))
}

fn differentiation_matrix_with(nodes: &[f64], bary: &[f64]) -> DMatrix<f64> {
    let n = nodes.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = (bary[j] / bary[i]) / (nodes[i] - nodes[j]);
                d[(i, j)] = v;
                diag -= v;
            }
        }
        // Negative-sum trick keeps D * 1 = 0 to rounding.
        d[(i, i)] = diag;
    }
    d
}

/// Everything a degree-N element kernel needs from the reference element.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub degree: usize,
    pub kind: NodeKind,
    pub correction: CorrectionKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub bary: Vec<f64>,
    pub diff_matrix: DMatrix<f64>,
    /// `l_j(0)`
    pub left_interp: DVector<f64>,
    /// `l_j(1)`
    pub right_interp: DVector<f64>,
    /// `g_L'(xi_j) = -l_j(0) / w_j`
    pub corr_deriv_left: DVector<f64>,
    /// `g_R'(xi_j) = l_j(1) / w_j`
    pub corr_deriv_right: DVector<f64>,
}

impl Basis {
    /// Builds the basis, requiring the natural point/correction pairing
    /// (Radau with GL, g2 with GLL).
    pub fn new(kind: NodeKind, degree: usize, correction: CorrectionKind) -> Result<Self> {
        build_basis(kind, degree, correction, false)
    }

    pub fn n_nodes(&self) -> usize {
        self.degree + 1
    }

    /// Interpolant of `values` evaluated at `x`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        lagrange_values(&self.nodes, &self.bary, x)
            .iter()
            .zip(values)
            .map(|(l, v)| l * v)
            .sum()
    }

    /// Endpoint values of the correction functions: `(g_L, g_R)` at ξ = 0
    /// and at ξ = 1 respectively.
    pub fn correction_endpoint_values(&self) -> ([f64; 2], [f64; 2]) {
        ([1.0, 0.0], [0.0, 1.0])
    }
}

/// Builds a [`Basis`]. A non-natural point/correction pairing is rejected
/// unless `force` is set.
pub fn build_basis(
    kind: NodeKind,
    degree: usize,
    correction: CorrectionKind,
    force: bool,
) -> Result<Basis> {
    if degree > MAX_DEGREE {
        return Err(Error::InvalidConfig(format!(
            "degree {degree} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    if !force && correction.natural_nodes() != kind {
        return Err(Error::InvalidConfig(format!(
            "correction {correction:?} pairs with {:?} points, got {kind:?}",
            correction.natural_nodes()
        )));
    }
    let (nodes, weights) = legendre_nodes(kind, degree)?;
    let bary = barycentric_weights(&nodes)?;
    let diff_matrix = differentiation_matrix_with(&nodes, &bary);
    let left_interp = DVector::from_vec(lagrange_values(&nodes, &bary, 0.0));
    let right_interp = DVector::from_vec(lagrange_values(&nodes, &bary, 1.0));
    let corr_deriv_left = DVector::from_iterator(
        nodes.len(),
        (0..nodes.len()).map(|j| -left_interp[j] / weights[j]),
    );
    let corr_deriv_right = DVector::from_iterator(
        nodes.len(),
        (0..nodes.len()).map(|j| right_interp[j] / weights[j]),
    );
    Ok(Basis {
        degree,
        kind,
        correction,
        nodes,
        weights,
        bary,
        diff_matrix,
        left_interp,
        right_interp,
        corr_deriv_left,
        corr_deriv_right,
    })
}
