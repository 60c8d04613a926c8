//! Time stepping, error recording, lockstep comparison, convergence studies
//! and the empirical stability scan.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ader::ader_step;
use crate::basis::{build_basis, Basis, CorrectionKind, NodeKind};
use crate::error::{Error, Result};
use crate::lwfr::{lwfr_step, DissipationKind};
use crate::mesh::{
    error_norms, make_grid, sample_initial_condition, ErrorNorms, Grid, SolutionField,
};
use crate::physics::{exact_solution, FluxSpec, InitialCondition, ProblemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Ader,
    LwD1,
    LwD2,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Ader, Scheme::LwD1, Scheme::LwD2];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ader => "ader",
            Scheme::LwD1 => "lw-d1",
            Scheme::LwD2 => "lw-d2",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ader" => Ok(Scheme::Ader),
            "lw-d1" => Ok(Scheme::LwD1),
            "lw-d2" => Ok(Scheme::LwD2),
            _ => Err(Error::InvalidConfig(format!("unknown scheme '{s}'"))),
        }
    }
}

/// Advances `state` by one step of `scheme`.
pub fn step(
    scheme: Scheme,
    state: &SolutionField,
    problem: &ProblemSpec,
    dt: f64,
) -> Result<SolutionField> {
    match scheme {
        Scheme::Ader => ader_step(state, problem, dt),
        Scheme::LwD1 => lwfr_step(state, problem, dt, DissipationKind::D1),
        Scheme::LwD2 => lwfr_step(state, problem, dt, DissipationKind::D2),
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub degree: usize,
    pub n_elem: usize,
    pub node_kind: NodeKind,
    pub correction: CorrectionKind,
    /// Allow a point/correction pairing other than GL+Radau or GLL+g2.
    pub force_pairing: bool,
    pub scheme: Scheme,
    pub problem: ProblemSpec,
    pub cfl_safety: f64,
    pub t_final: f64,
    /// Steps between error samples.
    pub record_interval: usize,
}

impl RunConfig {
    /// Wave-packet advection with a = 5 on [-1, 1], GL points, Radau
    /// correction, CFL safety 0.9.
    pub fn wave_packet(degree: usize, n_elem: usize, scheme: Scheme) -> Self {
        RunConfig {
            degree,
            n_elem,
            node_kind: NodeKind::GaussLegendre,
            correction: CorrectionKind::Radau,
            force_pairing: false,
            scheme,
            problem: ProblemSpec {
                flux: FluxSpec::LinearAdvection { a: 5.0 },
                ic: InitialCondition::WavePacket,
                bc: crate::physics::BoundaryCondition::Periodic,
                domain: (-1.0, 1.0),
            },
            cfl_safety: 0.9,
            t_final: 0.4,
            record_interval: 10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.problem.validate()?;
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "t_final must be positive, got {}",
                self.t_final
            )));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "cfl safety must be positive, got {}",
                self.cfl_safety
            )));
        }
        if self.record_interval == 0 {
            return Err(Error::InvalidConfig(
                "record interval must be at least 1".into(),
            ));
        }
        if self.scheme != Scheme::Ader && self.problem.flux.linear_speed().is_none() {
            return Err(Error::InvalidConfig(format!(
                "scheme {} needs a linear flux",
                self.scheme
            )));
        }
        self.basis()?;
        self.grid()?;
        Ok(())
    }

    pub fn basis(&self) -> Result<Basis> {
        build_basis(
            self.node_kind,
            self.degree,
            self.correction,
            self.force_pairing,
        )
    }

    pub fn grid(&self) -> Result<Grid> {
        make_grid(self.problem.domain.0, self.problem.domain.1, self.n_elem)
    }

    fn same_setup(&self, other: &RunConfig) -> bool {
        let same_ic = match (&self.problem.ic, &other.problem.ic) {
            (InitialCondition::Custom(a), InitialCondition::Custom(b)) => Arc::ptr_eq(a, b),
            (a, b) => a.name() == b.name(),
        };
        self.degree == other.degree
            && self.n_elem == other.n_elem
            && self.node_kind == other.node_kind
            && self.correction == other.correction
            && self.force_pairing == other.force_pairing
            && self.problem.flux == other.problem.flux
            && self.problem.bc == other.problem.bc
            && self.problem.domain == other.problem.domain
            && same_ic
            && self.cfl_safety == other.cfl_safety
            && self.t_final == other.t_final
            && self.record_interval == other.record_interval
    }
}

/// `cfl_safety Δx / (wavespeed (N+1)^2)`; `t_final` for a zero wave speed.
pub fn compute_dt(config: &RunConfig, grid: &Grid, wavespeed: f64) -> f64 {
    if wavespeed == 0.0 {
        return config.t_final;
    }
    let n1 = (config.degree + 1) as f64;
    config.cfl_safety * grid.dx / (wavespeed * n1 * n1)
}

/// Sizes of the steps taken from 0 to `t_final` with nominal step `dt`; the
/// last step is shortened to land on `t_final`.
pub fn step_sizes(t_final: f64, dt: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut t = 0.0;
    while let Some(h) = clamp_step(t, t_final, dt) {
        out.push(h);
        t += h;
    }
    out
}

const END_TOL: f64 = 1e-12;

fn clamp_step(t: f64, t_final: f64, dt: f64) -> Option<f64> {
    let remaining = t_final - t;
    if remaining <= END_TOL * t_final {
        None
    } else if t + dt >= t_final - END_TOL * t_final {
        Some(remaining)
    } else {
        Some(dt)
    }
}

/// A single time-marching run with its configuration.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: RunConfig,
    pub field: SolutionField,
    pub steps: usize,
}

impl Simulation {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let basis = Arc::new(config.basis()?);
        let grid = config.grid()?;
        let ic = config.problem.ic.clone();
        let field = sample_initial_condition(&grid, basis, |x| ic.eval(x))?;
        Ok(Simulation {
            config,
            field,
            steps: 0,
        })
    }

    pub fn time(&self) -> f64 {
        self.field.time
    }

    pub fn is_finished(&self) -> bool {
        clamp_step(self.field.time, self.config.t_final, 1.0).is_none()
    }

    pub fn wavespeed(&self) -> f64 {
        self.config
            .problem
            .flux
            .max_wave_speed(self.field.values.iter())
    }

    /// Next step size, or `None` once `t_final` is reached.
    pub fn next_dt(&self) -> Option<f64> {
        let dt = compute_dt(&self.config, &self.field.grid, self.wavespeed());
        clamp_step(self.field.time, self.config.t_final, dt)
    }

    pub fn advance(&mut self, dt: f64) -> Result<()> {
        let mut next = step(self.config.scheme, &self.field, &self.config.problem, dt)?;
        if clamp_step(next.time, self.config.t_final, 1.0).is_none() {
            next.time = self.config.t_final;
        }
        self.field = next;
        self.steps += 1;
        Ok(())
    }

    pub fn errors(&self) -> Result<ErrorNorms> {
        let problem = &self.config.problem;
        error_norms(
            &self.field,
            |x, t| exact_solution(problem, x, t),
            self.field.time,
        )
    }

    fn sample(&self) -> Result<ErrorSample> {
        let n = self.errors()?;
        Ok(ErrorSample {
            time: self.field.time,
            l2_error: n.l2,
            linf_error: n.linf,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSample {
    pub time: f64,
    pub l2_error: f64,
    pub linf_error: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ErrorSeries {
    pub samples: Vec<ErrorSample>,
}

impl ErrorSeries {
    pub fn last(&self) -> Option<&ErrorSample> {
        self.samples.last()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffSample {
    pub time: f64,
    pub linf_diff: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiffSeries {
    pub samples: Vec<DiffSample>,
}

impl DiffSeries {
    pub fn max_diff(&self) -> f64 {
        self.samples
            .iter()
            .fold(0.0, |m: f64, s| m.max(s.linf_diff))
    }
}

/// A failed run together with whatever was recorded before the failure.
#[derive(Debug, Clone)]
pub struct RunError {
    pub error: Error,
    pub partial: ErrorSeries,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for RunError {}

impl From<Error> for RunError {
    fn from(error: Error) -> Self {
        RunError {
            error,
            partial: ErrorSeries::default(),
        }
    }
}

/// Runs `config` to `t_final`, recording error norms at t = 0, every
/// `record_interval` steps and at the end.
pub fn run_simulation(config: RunConfig) -> std::result::Result<ErrorSeries, RunError> {
    let mut sim = Simulation::new(config)?;
    let mut series = ErrorSeries::default();
    series.samples.push(sim.sample()?);
    while let Some(dt) = sim.next_dt() {
        if let Err(error) = sim.advance(dt) {
            return Err(RunError {
                error,
                partial: series,
            });
        }
        if sim.steps % sim.config.record_interval == 0 || sim.is_finished() {
            match sim.sample() {
                Ok(s) => series.samples.push(s),
                Err(error) => {
                    return Err(RunError {
                        error,
                        partial: series,
                    })
                }
            }
        }
    }
    Ok(series)
}

#[derive(Debug, Clone, Default)]
pub struct Comparison {
    pub diff: DiffSeries,
    pub errors_a: ErrorSeries,
    pub errors_b: ErrorSeries,
}

/// A failed comparison with the series recorded up to the failure.
#[derive(Debug, Clone)]
pub struct CompareError {
    pub error: Error,
    pub partial: Comparison,
}

impl fmt::Display for CompareError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for CompareError {}

impl From<Error> for CompareError {
    fn from(error: Error) -> Self {
        CompareError {
            error,
            partial: Comparison::default(),
        }
    }
}

/// Runs two configurations that differ only in their scheme side by side with
/// the same step sequence, recording the nodal L∞ difference after every step.
pub fn compare_schemes(
    a: RunConfig,
    b: RunConfig,
) -> std::result::Result<Comparison, CompareError> {
    if !a.same_setup(&b) {
        return Err(
            Error::InvalidConfig("compared runs may differ only in their scheme".into()).into(),
        );
    }
    let mut sim_a = Simulation::new(a)?;
    let mut sim_b = Simulation::new(b)?;
    let mut out = Comparison::default();
    out.diff.samples.push(DiffSample {
        time: 0.0,
        linf_diff: sim_a.field.linf_diff(&sim_b.field),
    });
    out.errors_a.samples.push(sim_a.sample()?);
    out.errors_b.samples.push(sim_b.sample()?);
    while let Some(dt) = sim_a.next_dt() {
        let stepped = sim_a.advance(dt).and_then(|_| sim_b.advance(dt));
        if let Err(error) = stepped {
            return Err(CompareError {
                error,
                partial: out,
            });
        }
        out.diff.samples.push(DiffSample {
            time: sim_a.time(),
            linf_diff: sim_a.field.linf_diff(&sim_b.field),
        });
        if sim_a.steps % sim_a.config.record_interval == 0 || sim_a.is_finished() {
            let samples = sim_a.sample().and_then(|ea| Ok((ea, sim_b.sample()?)));
            match samples {
                Ok((ea, eb)) => {
                    out.errors_a.samples.push(ea);
                    out.errors_b.samples.push(eb);
                }
                Err(error) => {
                    return Err(CompareError {
                        error,
                        partial: out,
                    })
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EocRow {
    pub n_elem: usize,
    pub l2_error: f64,
    /// log2(e_coarse / e_fine) against the previous level.
    pub order: Option<f64>,
}

/// Refines `base` `levels` times by doubling the element count and reports
/// the final L2 errors with observed orders.
pub fn eoc_study(base: &RunConfig, levels: usize) -> Result<Vec<EocRow>> {
    if levels < 3 {
        return Err(Error::InvalidConfig(
            "a convergence study needs at least 3 levels".into(),
        ));
    }
    let mut rows: Vec<EocRow> = Vec::with_capacity(levels);
    for k in 0..levels {
        let mut config = base.clone();
        config.n_elem = base.n_elem << k;
        config.record_interval = usize::MAX;
        let series = run_simulation(config.clone()).map_err(|e| e.error)?;
        let l2 = series.last().map(|s| s.l2_error).unwrap_or(f64::NAN);
        let order = rows.last().map(|prev| (prev.l2_error / l2).log2());
        rows.push(EocRow {
            n_elem: config.n_elem,
            l2_error: l2,
            order,
        });
    }
    Ok(rows)
}

/// Settings of the empirical stability scan. Each probe seeds the initial
/// condition with uniform noise so every Fourier mode is present, runs
/// `n_steps` steps and calls the run unstable if the field turns non-finite
/// or its maximum grows beyond `growth_limit` times the initial maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSettings {
    pub cfl_grid: Vec<f64>,
    pub n_steps: usize,
    pub growth_limit: f64,
    pub noise: f64,
    pub seed: u64,
}

impl ScanSettings {
    pub fn uniform(start: f64, stop: f64, step: f64) -> Self {
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        ScanSettings {
            cfl_grid: (0..count).map(|i| start + i as f64 * step).collect(),
            n_steps: 400,
            growth_limit: 10.0,
            noise: 1.0,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanResult {
    pub scheme: Scheme,
    /// Largest grid value below the first unstable one; `None` when even the
    /// smallest grid value is unstable.
    pub threshold: Option<f64>,
}

/// Whether `config` survives the scan probe.
pub fn probe_stable(config: &RunConfig, settings: &ScanSettings) -> Result<bool> {
    let mut sim = Simulation::new(config.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    for v in sim.field.values.iter_mut() {
        *v += settings.noise * rng.random_range(-1.0..1.0);
    }
    let start = sim.field.max_abs().max(f64::MIN_POSITIVE);
    let dt = compute_dt(
        config,
        &sim.field.grid,
        sim.wavespeed().max(f64::MIN_POSITIVE),
    );
    for _ in 0..settings.n_steps {
        match sim.advance(dt) {
            Ok(()) => {}
            Err(Error::BlowUp { .. }) | Err(Error::Numerical(_)) => return Ok(false),
            Err(e) => return Err(e),
        }
        if sim.field.max_abs() > settings.growth_limit * start {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest stable CFL safety factor on the scan grid for each scheme.
pub fn stability_scan(
    template: &RunConfig,
    schemes: &[Scheme],
    settings: &ScanSettings,
) -> Result<Vec<ScanResult>> {
    if settings.cfl_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig("scan grid must be increasing".into()));
    }
    schemes
        .iter()
        .map(|&scheme| {
            let mut threshold = None;
            for &cfl in &settings.cfl_grid {
                let config = RunConfig {
                    scheme,
                    cfl_safety: cfl,
                    ..template.clone()
                };
                if !probe_stable(&config, settings)? {
                    break;
                }
                threshold = Some(cfl);
            }
            Ok(ScanResult { scheme, threshold })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn dt_examples() {
        let c = RunConfig::wave_packet(1, 120, Scheme::Ader);
        let g = c.grid().unwrap();
        assert_abs_diff_eq!(
            compute_dt(&c, &g, 5.0),
            0.9 / (60.0 * 5.0 * 4.0),
            epsilon = 1e-17
        );
        let c = RunConfig {
            cfl_safety: 0.5,
            ..RunConfig::wave_packet(3, 60, Scheme::Ader)
        };
        let g = c.grid().unwrap();
        assert_abs_diff_eq!(
            compute_dt(&c, &g, 5.0),
            0.5 / (30.0 * 5.0 * 16.0),
            epsilon = 1e-17
        );
        assert_eq!(compute_dt(&c, &g, 0.0), c.t_final);
    }

    #[test]
    fn final_step_is_truncated() {
        let s = step_sizes(1.0, 0.3);
        assert_eq!(s.len(), 4);
        assert_eq!(&s[..3], &[0.3, 0.3, 0.3]);
        assert_abs_diff_eq!(s[3], 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(s.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        assert_eq!(step_sizes(1.0, 0.25).len(), 4);
    }

    #[test]
    fn scheme_names() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        assert!("rk4".parse::<Scheme>().is_err());
    }

    #[test]
    fn constant_state_is_exact() {
        for scheme in Scheme::ALL {
            let mut c = RunConfig::wave_packet(2, 20, scheme);
            c.problem.ic = InitialCondition::Const(3.0);
            c.t_final = 0.05;
            let s = run_simulation(c).unwrap();
            assert!(s
                .samples
                .iter()
                .all(|x| x.l2_error <= 1e-13 && x.linf_error <= 1e-13));
        }
    }

    #[test]
    fn series_layout() {
        let mut c = RunConfig::wave_packet(1, 20, Scheme::Ader);
        c.t_final = 0.05;
        c.record_interval = 3;
        let s = run_simulation(c).unwrap();
        assert_eq!(s.samples[0].time, 0.0);
        assert!(s.samples.windows(2).all(|w| w[0].time < w[1].time));
        assert_eq!(s.last().unwrap().time, 0.05);
    }

    #[test]
    fn blow_up_returns_partial_series() {
        let mut c = RunConfig::wave_packet(2, 40, Scheme::LwD2);
        c.cfl_safety = 5.0;
        c.t_final = 40.0;
        c.record_interval = 1;
        let err = run_simulation(c).unwrap_err();
        assert!(matches!(err.error, Error::BlowUp { .. }));
        assert!(!err.partial.samples.is_empty());
    }

    #[test]
    fn compare_rejects_mismatch() {
        let a = RunConfig::wave_packet(2, 20, Scheme::Ader);
        let b = RunConfig {
            n_elem: 21,
            ..RunConfig::wave_packet(2, 20, Scheme::LwD2)
        };
        assert!(matches!(
            compare_schemes(a, b).unwrap_err().error,
            Error::InvalidConfig(_)
        ));
    }

    #[test]
    fn compare_same_scheme_is_zero() {
        let mut a = RunConfig::wave_packet(2, 20, Scheme::Ader);
        a.t_final = 0.05;
        let c = compare_schemes(a.clone(), a).unwrap();
        assert_eq!(c.diff.max_diff(), 0.0);
        assert_eq!(c.errors_a, c.errors_b);
    }

    #[test]
    fn lw_needs_linear_flux() {
        let mut c = RunConfig::wave_packet(1, 10, Scheme::LwD2);
        c.problem.flux = FluxSpec::Burgers;
        assert!(matches!(Simulation::new(c), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn eoc_needs_three_levels() {
        let c = RunConfig::wave_packet(1, 10, Scheme::Ader);
        assert!(eoc_study(&c, 2).is_err());
    }

    #[test]
    fn tiny_cfl_is_stable() {
        let mut c = RunConfig::wave_packet(1, 20, Scheme::Ader);
        c.cfl_safety = 1e-3;
        let settings = ScanSettings {
            n_steps: 50,
            ..ScanSettings::uniform(0.05, 0.1, 0.05)
        };
        for scheme in Scheme::ALL {
            let c = RunConfig {
                scheme,
                ..c.clone()
            };
            assert!(probe_stable(&c, &settings).unwrap());
        }
    }

    #[test]
    fn scan_grid_construction() {
        let s = ScanSettings::uniform(0.05, 1.5, 0.05);
        assert_eq!(s.cfl_grid.len(), 30);
        assert_abs_diff_eq!(*s.cfl_grid.last().unwrap(), 1.5, epsilon = 1e-12);
    }
}
