//! The Uhlmann and interferometric phases genuinely differ. Slater computed
//! the ratio of their tangents in closed form for two drivings of a mixed
//! qubit; this example measures both phases and compares.
//!
//!     cargo run --release --example slater_ratios

use holonomy::phases::{interferometric_phase_general, uhlmann_phase};
use holonomy::scenarios::{
    scenario_slater_rotation, scenario_slater_triangle, slater_rotation_ratio,
    slater_triangle_ratio,
};
use holonomy::Tolerances;
use std::f64::consts::PI;

fn main() -> holonomy::Result<()> {
    let tols = Tolerances::default();

    println!("one full rotation of the Bloch vector about n = (0, sinξ, cosξ):");
    println!(
        "{:>6} {:>8} {:>14} {:>14} {:>14} {:>14}",
        "r", "ξ", "γ (interf.)", "Γ (Uhlmann)", "tanγ/tanΓ", "closed form"
    );
    for (r, xi) in [(0.3, 0.6), (0.5, 0.9), (0.7, 1.1), (0.9, PI / 4.0)] {
        let s = scenario_slater_rotation(r, xi, 2000, &tols)?;
        let u = s.unitary.as_ref().unwrap();
        let rho0 = s.density.start();
        let gamma = interferometric_phase_general(u, &rho0, None, &tols)?.phase;
        let big = uhlmann_phase(&s.density, None, &tols)?.phase;
        println!(
            "{r:>6.2} {xi:>8.4} {gamma:>14.6} {big:>14.6} {:>14.6} {:>14.6}",
            gamma.tan() / big.tan(),
            slater_rotation_ratio(r, xi)
        );
    }

    println!("\ngeodesic triangle (0,0) → (θ₁,φ₁) → (θ₂,φ₂) → (0,0), r = 0.5 octant:");
    let (th, ph) = (PI / 2.0, PI / 2.0);
    let s = scenario_slater_triangle(0.5, th, 0.0, th, ph, 2001, &tols)?;
    let u = s.unitary.as_ref().unwrap();
    let rho0 = s.density.start();
    let gamma = interferometric_phase_general(u, &rho0, None, &tols)?.phase;
    let big = uhlmann_phase(&s.density, None, &tols)?.phase;
    println!(
        "  γ = {gamma:+.6}, Γ = {big:+.6}, tanγ/tanΓ = {:.4} (closed form {:.4})",
        gamma.tan() / big.tan(),
        slater_triangle_ratio(0.5, th, 0.0, th, ph)
    );
    Ok(())
}
