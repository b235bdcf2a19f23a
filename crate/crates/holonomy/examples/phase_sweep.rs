//! Parameter sweeps through the run layer: the same machinery the CLI uses,
//! emitting plot-ready CSV. Sweeps the rotation-axis tilt ξ and reports all
//! three phases per point.
//!
//!     cargo run --release --example phase_sweep

use holonomy::config::RunConfig;
use holonomy::report::{emit, EmitFormat};
use holonomy::run::run;

fn main() -> holonomy::Result<()> {
    let cfg = RunConfig::from_json(
        r#"{
            "scenario": "slater-rotation",
            "method": "all",
            "params": {"r": 0.5, "steps": 1000},
            "sweep": {"param": "xi", "from": 0.3, "to": 1.5, "points": 7}
        }"#,
    )?;
    let rows = run(&cfg)?;
    let mut stdout = std::io::stdout();
    emit(&rows, EmitFormat::Csv, &mut stdout).expect("write to stdout");
    Ok(())
}
