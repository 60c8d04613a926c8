//! Fluxes, interface fluxes, initial data, exact solutions and boundary
//! conditions for scalar 1-D conservation laws.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxSpec {
    /// f(u) = a u
    LinearAdvection { a: f64 },
    /// f(u) = u^2 / 2
    Burgers,
}

impl FluxSpec {
    pub fn flux(&self, u: f64) -> f64 {
        match *self {
            FluxSpec::LinearAdvection { a } => a * u,
            FluxSpec::Burgers => 0.5 * u * u,
        }
    }

    pub fn derivative(&self, u: f64) -> f64 {
        match *self {
            FluxSpec::LinearAdvection { a } => a,
            FluxSpec::Burgers => u,
        }
    }

    /// max |f'(u)| over the given states; |a| for linear advection.
    pub fn max_wave_speed<'a, I: IntoIterator<Item = &'a f64>>(&self, states: I) -> f64 {
        match *self {
            FluxSpec::LinearAdvection { a } => a.abs(),
            FluxSpec::Burgers => states.into_iter().fold(0.0, |m: f64, u| m.max(u.abs())),
        }
    }

    pub fn linear_speed(&self) -> Option<f64> {
        match *self {
            FluxSpec::LinearAdvection { a } => Some(a),
            FluxSpec::Burgers => None,
        }
    }
}

/// Interface flux from left/right states: upwind for linear advection,
/// Rusanov for Burgers. Both are `(f(uL)+f(uR))/2 - λ/2 (uR-uL)`, with
/// λ = |a| in the linear case.
pub fn upwind_numflux(flux: &FluxSpec, u_left: f64, u_right: f64) -> f64 {
    match *flux {
        FluxSpec::LinearAdvection { a } => {
            0.5 * a * (u_left + u_right) - 0.5 * a.abs() * (u_right - u_left)
        }
        FluxSpec::Burgers => {
            let lambda = u_left.abs().max(u_right.abs());
            0.5 * (flux.flux(u_left) + flux.flux(u_right)) - 0.5 * lambda * (u_right - u_left)
        }
    }
}

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum InitialCondition {
    /// exp(-10 x^2) sin(10 π x)
    WavePacket,
    /// sin(2 π x)
    Sine,
    /// exp(-50 x^2)
    Gauss,
    Const(f64),
    Custom(ScalarFn),
}

impl fmt::Debug for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialCondition::Custom(_) => f.write_str("Custom(..)"),
            other => f.write_str(&other.name()),
        }
    }
}

impl InitialCondition {
    pub fn name(&self) -> String {
        match self {
            InitialCondition::WavePacket => "wavepacket".into(),
            InitialCondition::Sine => "sine".into(),
            InitialCondition::Gauss => "gauss".into(),
            InitialCondition::Const(c) => format!("const:{c}"),
            InitialCondition::Custom(_) => "custom".into(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            InitialCondition::WavePacket => (-10.0 * x * x).exp() * (10.0 * PI * x).sin(),
            InitialCondition::Sine => (2.0 * PI * x).sin(),
            InitialCondition::Gauss => (-50.0 * x * x).exp(),
            InitialCondition::Const(c) => *c,
            InitialCondition::Custom(f) => f(x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            InitialCondition::WavePacket => {
                let e = (-10.0 * x * x).exp();
                e * (10.0 * PI * (10.0 * PI * x).cos() - 20.0 * x * (10.0 * PI * x).sin())
            }
            InitialCondition::Sine => 2.0 * PI * (2.0 * PI * x).cos(),
            InitialCondition::Gauss => -100.0 * x * (-50.0 * x * x).exp(),
            InitialCondition::Const(_) => 0.0,
            InitialCondition::Custom(f) => {
                let h = 1e-6 * (1.0 + x.abs());
                (f(x + h) - f(x - h)) / (2.0 * h)
            }
        }
    }
}

impl FromStr for InitialCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wavepacket" => Ok(InitialCondition::WavePacket),
            "sine" => Ok(InitialCondition::Sine),
            "gauss" => Ok(InitialCondition::Gauss),
            _ => {
                if let Some(c) = s.strip_prefix("const:") {
                    let c: f64 = c
                        .parse()
                        .map_err(|_| Error::InvalidConfig(format!("bad constant in '{s}'")))?;
                    if !c.is_finite() {
                        return Err(Error::InvalidConfig(format!(
                            "non-finite constant in '{s}'"
                        )));
                    }
                    Ok(InitialCondition::Const(c))
                } else {
                    Err(Error::InvalidConfig(format!(
                        "unknown initial condition '{s}'"
                    )))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Periodic,
    /// Exact data imposed at the inflow face, interior extrapolation at the
    /// outflow face.
    DirichletInflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub flux: FluxSpec,
    pub ic: InitialCondition,
    pub bc: BoundaryCondition,
    pub domain: (f64, f64),
}

impl ProblemSpec {
    pub fn new(
        flux: FluxSpec,
        ic: InitialCondition,
        bc: BoundaryCondition,
        domain: (f64, f64),
    ) -> Result<Self> {
        let p = ProblemSpec {
            flux,
            ic,
            bc,
            domain,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidConfig(format!("empty domain [{lo}, {hi}]")));
        }
        if let FluxSpec::LinearAdvection { a } = self.flux {
            if !a.is_finite() {
                return Err(Error::InvalidConfig("wave speed must be finite".into()));
            }
        }
        if self.bc == BoundaryCondition::DirichletInflow {
            match self.flux {
                FluxSpec::LinearAdvection { a } if a != 0.0 => {}
                _ => {
                    return Err(Error::InvalidConfig(
                        "Dirichlet inflow needs linear advection with a != 0".into(),
                    ))
                }
            }
        }
        Ok(())
    }

    /// Side of the domain where characteristics enter, if any.
    pub fn inflow_side(&self) -> Option<Side> {
        match (self.bc, self.flux) {
            (BoundaryCondition::DirichletInflow, FluxSpec::LinearAdvection { a }) if a > 0.0 => {
                Some(Side::Left)
            }
            (BoundaryCondition::DirichletInflow, FluxSpec::LinearAdvection { a }) if a < 0.0 => {
                Some(Side::Right)
            }
            _ => None,
        }
    }

    /// Inflow boundary data g(t).
    pub fn boundary_value(&self, t: f64) -> Result<f64> {
        let x = match self.inflow_side() {
            Some(Side::Left) => self.domain.0,
            Some(Side::Right) => self.domain.1,
            None => {
                return Err(Error::InvalidConfig(
                    "problem has no inflow boundary".into(),
                ))
            }
        };
        exact_solution(self, x, t)
    }

    fn wrap(&self, x: f64) -> f64 {
        let (lo, hi) = self.domain;
        if (lo..=hi).contains(&x) {
            x
        } else {
            lo + (x - lo).rem_euclid(hi - lo)
        }
    }
}

const BURGERS_NEWTON_TOL: f64 = 1e-13;
const BURGERS_NEWTON_MAX_ITER: usize = 50;

/// Exact solution at (x, t): translation of the initial data for linear
/// advection (wrapped for periodic problems), the implicit characteristic
/// relation u = u0(x - u t) for Burgers.
pub fn exact_solution(problem: &ProblemSpec, x: f64, t: f64) -> Result<f64> {
    let arg = |y: f64| match problem.bc {
        BoundaryCondition::Periodic => problem.wrap(y),
        BoundaryCondition::DirichletInflow => y,
    };
    match problem.flux {
        FluxSpec::LinearAdvection { a } => Ok(problem.ic.eval(arg(x - a * t))),
        FluxSpec::Burgers => {
            let mut u = problem.ic.eval(arg(x));
            if t == 0.0 {
                return Ok(u);
            }
            for _ in 0..BURGERS_NEWTON_MAX_ITER {
                let y = arg(x - u * t);
                let residual = u - problem.ic.eval(y);
                let slope = 1.0 + t * problem.ic.derivative(y);
                let du = residual / slope;
                u -= du;
                if !u.is_finite() {
                    break;
                }
                if du.abs() <= BURGERS_NEWTON_TOL {
                    return Ok(u);
                }
            }
            Err(Error::Evaluation(format!(
                "characteristic solve did not converge at x = {x}, t = {t} (shock too close?)"
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn advection(a: f64, ic: InitialCondition) -> ProblemSpec {
        ProblemSpec::new(
            FluxSpec::LinearAdvection { a },
            ic,
            BoundaryCondition::Periodic,
            (-1.0, 1.0),
        )
        .unwrap()
    }

    #[test]
    fn upwind_examples() {
        let f = FluxSpec::LinearAdvection { a: 5.0 };
        assert_eq!(upwind_numflux(&f, 2.0, 2.0), 10.0);
        assert_eq!(upwind_numflux(&f, 1.0, 3.0), 5.0);
        let g = FluxSpec::LinearAdvection { a: -2.0 };
        assert_eq!(upwind_numflux(&g, 1.0, 3.0), -6.0);
    }

    #[test]
    fn rusanov_reduces_to_consistency() {
        let f = FluxSpec::Burgers;
        assert_abs_diff_eq!(upwind_numflux(&f, 0.7, 0.7), 0.245, epsilon = 1e-16);
        // (0.5 + 2)/2 - 2/2 * (2 - 1) = 0.25
        assert_abs_diff_eq!(upwind_numflux(&f, 1.0, 2.0), 0.25, epsilon = 1e-16);
    }

    proptest! {
        #[test]
        fn numflux_consistency(u in -1e3f64..1e3, a in -10.0f64..10.0) {
            for f in [FluxSpec::LinearAdvection { a }, FluxSpec::Burgers] {
                let v = upwind_numflux(&f, u, u);
                prop_assert!((v - f.flux(u)).abs() <= 1e-15 * (1.0 + f.flux(u).abs()));
            }
        }

        #[test]
        fn linear_flux_is_pure_upwind(ul in -10.0f64..10.0, ur in -10.0f64..10.0, a in 0.01f64..10.0) {
            let pos = FluxSpec::LinearAdvection { a };
            let neg = FluxSpec::LinearAdvection { a: -a };
            prop_assert!((upwind_numflux(&pos, ul, ur) - a * ul).abs() <= 1e-13 * (1.0 + (a * ul).abs()));
            prop_assert!((upwind_numflux(&neg, ul, ur) + a * ur).abs() <= 1e-13 * (1.0 + (a * ur).abs()));
        }
    }

    #[test]
    fn advection_exact_at_zero_is_ic() {
        let p = advection(5.0, InitialCondition::WavePacket);
        for x in [-0.9, -0.3, 0.0, 0.41, 0.99] {
            assert_eq!(
                exact_solution(&p, x, 0.0).unwrap(),
                InitialCondition::WavePacket.eval(x)
            );
        }
    }

    #[test]
    fn advection_one_period_returns_ic() {
        let p = advection(5.0, InitialCondition::WavePacket);
        for x in [-0.9, -0.3, 0.0, 0.41, 0.99] {
            assert_abs_diff_eq!(
                exact_solution(&p, x, 0.4).unwrap(),
                InitialCondition::WavePacket.eval(x),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn dirichlet_does_not_wrap() {
        let p = ProblemSpec::new(
            FluxSpec::LinearAdvection { a: 1.0 },
            InitialCondition::Custom(Arc::new(|x| x)),
            BoundaryCondition::DirichletInflow,
            (-1.0, 1.0),
        )
        .unwrap();
        assert_abs_diff_eq!(
            exact_solution(&p, -1.0, 0.5).unwrap(),
            -1.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(p.boundary_value(0.25).unwrap(), -1.25, epsilon = 1e-15);
        assert_eq!(p.inflow_side(), Some(Side::Left));
    }

    #[test]
    fn dirichlet_requires_moving_linear_flux() {
        for flux in [FluxSpec::Burgers, FluxSpec::LinearAdvection { a: 0.0 }] {
            assert!(ProblemSpec::new(
                flux,
                InitialCondition::Sine,
                BoundaryCondition::DirichletInflow,
                (-1.0, 1.0)
            )
            .is_err());
        }
    }

    #[test]
    fn burgers_constant_state() {
        let p = ProblemSpec::new(
            FluxSpec::Burgers,
            InitialCondition::Const(0.3),
            BoundaryCondition::Periodic,
            (-1.0, 1.0),
        )
        .unwrap();
        for t in [0.0, 0.5, 3.0] {
            assert_eq!(exact_solution(&p, 0.2, t).unwrap(), 0.3);
        }
    }

    #[test]
    fn burgers_characteristic_relation() {
        let p = ProblemSpec::new(
            FluxSpec::Burgers,
            InitialCondition::Sine,
            BoundaryCondition::Periodic,
            (-1.0, 1.0),
        )
        .unwrap();
        // shock forms at 1/(2π) ≈ 0.159
        for t in [0.0, 0.02, 0.08, 0.12] {
            for i in 0..50 {
                let x = -1.0 + 2.0 * i as f64 / 50.0;
                let u = exact_solution(&p, x, t).unwrap();
                let y = p.wrap(x - u * t);
                assert!((u - p.ic.eval(y)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn burgers_past_shock_fails() {
        let p = ProblemSpec::new(
            FluxSpec::Burgers,
            InitialCondition::Sine,
            BoundaryCondition::Periodic,
            (-1.0, 1.0),
        )
        .unwrap();
        let failed = (0..200)
            .map(|i| -1.0 + 2.0 * i as f64 / 200.0)
            .any(|x| exact_solution(&p, x, 1.0).is_err());
        assert!(failed);
    }

    #[test]
    fn ic_names_round_trip() {
        for name in ["wavepacket", "sine", "gauss", "const:3"] {
            let ic: InitialCondition = name.parse().unwrap();
            assert_eq!(ic.name(), name);
        }
        assert!("const:abc".parse::<InitialCondition>().is_err());
        assert!("square".parse::<InitialCondition>().is_err());
    }

    #[test]
    fn ic_derivatives_match_finite_differences() {
        for ic in [
            InitialCondition::WavePacket,
            InitialCondition::Sine,
            InitialCondition::Gauss,
        ] {
            for x in [-0.7, -0.1, 0.05, 0.33] {
                let h = 1e-6;
                let fd = (ic.eval(x + h) - ic.eval(x - h)) / (2.0 * h);
                assert!(
                    (ic.derivative(x) - fd).abs() <= 1e-5 * (1.0 + fd.abs()),
                    "{ic:?} at {x}"
                );
            }
        }
    }
}
