//! Open-system geometric phase of a closed, non-isospectral qubit curve:
//! the Bloch vector traces x = cos(t)/2, y = sin(t)/4, z = sin²(t/2)/2 over
//! one period, returning to its start while its eigenvalues breathe.
//!
//!     cargo run --release --example trefoil

use holonomy::phases::open_system_phase;
use holonomy::scenarios::scenario_trefoil;
use holonomy::Tolerances;

fn main() -> holonomy::Result<()> {
    let tols = Tolerances::default();
    for steps in [1000, 4000, 16000] {
        let scenario = scenario_trefoil(steps, &tols)?;
        let result = open_system_phase(&scenario.density, &tols)?;
        println!(
            "steps {steps:>6}: Tr(ψ(0)†ψ(2π)) = {:+.6} {:+.6}i   phase = {:+.6} rad ({:.4} mod 2π)   visibility = {:.4}",
            result.trace_value.re,
            result.trace_value.im,
            result.phase,
            result.diagnostics.phase_unwrapped,
            result.visibility,
        );
        println!(
            "             parallelism residual {:.2e}, projection residual {:.2e}",
            result.diagnostics.max_horizontality_residual,
            result.diagnostics.max_projection_residual,
        );
    }
    println!("\npublished two-figure value: 0.17 − 0.49i, arg ≈ 5.0 rad");
    Ok(())
}
