//! Fixtures shared by the benchmarks.

use aderlw_core::{FluxSpec, RunConfig, Scheme, Simulation};

/// Wave packet setup after initial sampling, with the step size it would take.
pub fn wave_packet_fixture(degree: usize, n_elem: usize) -> (Simulation, f64) {
    let sim =
        Simulation::new(RunConfig::wave_packet(degree, n_elem, Scheme::Ader)).expect("valid setup");
    let dt = sim.next_dt().expect("t_final > 0");
    (sim, dt)
}

/// Same mesh and basis with Burgers flux on a sine wave.
pub fn burgers_fixture(degree: usize, n_elem: usize) -> (Simulation, f64) {
    let mut config = RunConfig::wave_packet(degree, n_elem, Scheme::Ader);
    config.problem.flux = FluxSpec::Burgers;
    config.problem.ic = "sine".parse().expect("known initial condition");
    let sim = Simulation::new(config).expect("valid setup");
    let dt = sim.next_dt().expect("t_final > 0");
    (sim, dt)
}
