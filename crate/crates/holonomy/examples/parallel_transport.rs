//! Parallel-transporting drivings: the Hamiltonian H(t) = ½(n̂ × n̂̇)·σ moves
//! a qubit's Bloch direction along any prescribed path with every eigenstate
//! branch Aharonov-Anandan horizontal. For such drivings all three phase
//! definitions collapse onto arg Tr(U(τ)ρ₀)'s interferometric value.
//!
//!     cargo run --release --example parallel_transport

use holonomy::phases::{
    interferometric_phase_general, interferometric_phase_parallel, open_system_phase,
    parallel_transport_residual, uhlmann_phase,
};
use holonomy::scenarios::scenario_parallel_circle;
use holonomy::Tolerances;
use std::f64::consts::PI;

fn main() -> holonomy::Result<()> {
    let tols = Tolerances::default();
    let (r, theta0): (f64, f64) = (0.7, 1.0);
    let s = scenario_parallel_circle(r, theta0, 8000, &tols)?;
    let u = s.unitary.as_ref().unwrap();
    let rho0 = s.density.start();

    let residual = parallel_transport_residual(u, &rho0, &tols)?;
    println!("constructed driving for the circle at θ₀ = {theta0}, r = {r}");
    println!("parallel-transport residual: {residual:.2e}");

    let parallel = interferometric_phase_parallel(u, &rho0, &tols)?;
    let general = interferometric_phase_general(u, &rho0, None, &tols)?;
    let open = open_system_phase(&s.density, &tols)?;
    let uhl = uhlmann_phase(&s.density, None, &tols)?;
    println!("\nphases for the same curve:");
    println!("  arg Tr(U(τ)ρ₀)        = {:+.6}", parallel.phase);
    println!("  interferometric        = {:+.6}  (correction W ≈ I)", general.phase);
    println!("  open-system            = {:+.6}", open.phase);
    println!("  Uhlmann                = {:+.6}  (a different connection!)", uhl.phase);

    // the solid angle of the circle is 2π(1 − cosθ₀); for r → 1 the phase
    // approaches the Berry phase −Ω/2 of the dominant branch
    let berry = -PI * (1.0 - theta0.cos());
    println!("\npure-state limit check (Berry phase −π(1−cosθ₀) = {berry:+.6}):");
    for r in [0.9, 0.99, 0.999] {
        let s = scenario_parallel_circle(r, theta0, 8000, &tols)?;
        let u = s.unitary.as_ref().unwrap();
        let rho0 = s.density.start();
        let phase = interferometric_phase_parallel(u, &rho0, &tols)?.phase;
        println!("  r = {r:<6}: γ = {phase:+.6}");
    }
    Ok(())
}
