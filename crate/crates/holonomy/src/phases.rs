//! The three geometric phases, each computed as arg Tr(ψ(0)†ψ(τ)) over the
//! corresponding horizontal lift, plus the randomized gauge-invariance check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bundle::{DensityOperator, Purification};
use crate::curves::{track_spectrum, DensityCurve, UnitaryCurve};
use crate::error::{Error, Result};
use crate::lifts::{
    mechanical_lift, open_system_lift, uhlmann_lift, LiftMethod,
};
use crate::linalg::{c, hs_inner, C64, CMat};
use crate::random;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMethod {
    Uhlmann,
    InterferometricParallel,
    InterferometricGeneral,
    OpenSystem,
}

impl std::fmt::Display for PhaseMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhaseMethod::Uhlmann => write!(f, "uhlmann"),
            PhaseMethod::InterferometricParallel => write!(f, "interferometric-parallel"),
            PhaseMethod::InterferometricGeneral => write!(f, "interferometric"),
            PhaseMethod::OpenSystem => write!(f, "open"),
        }
    }
}

/// Extra information reported alongside a phase.
#[derive(Debug, Clone, Default)]
pub struct PhaseDiagnostics {
    pub max_projection_residual: f64,
    pub max_horizontality_residual: f64,
    /// The phase lifted to [0, 2π), for comparison with mod-2π conventions.
    pub phase_unwrapped: f64,
    /// Disagreement between algebraically equivalent evaluation routes, when
    /// one exists (e.g. holonomy trace vs spectral overlap sum).
    pub cross_check: Option<f64>,
    pub steps: usize,
    pub warnings: Vec<String>,
}

/// A computed geometric phase: the holonomy trace, its argument in (−π, π],
/// and the interference visibility |trace|.
#[derive(Debug, Clone)]
pub struct PhaseResult {
    pub trace_value: C64,
    pub phase: f64,
    pub method: PhaseMethod,
    pub visibility: f64,
    pub diagnostics: PhaseDiagnostics,
}

impl PhaseResult {
    fn from_trace(trace: C64, method: PhaseMethod, mut diagnostics: PhaseDiagnostics) -> Self {
        let phase = trace.arg();
        diagnostics.phase_unwrapped = if phase < 0.0 {
            phase + 2.0 * std::f64::consts::PI
        } else {
            phase
        };
        Self {
            trace_value: trace,
            phase,
            method,
            visibility: trace.norm(),
            diagnostics,
        }
    }
}

/// Distance between two angles on the circle, in [0, π].
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut d = (a - b).rem_euclid(two_pi);
    if d > std::f64::consts::PI {
        d = two_pi - d;
    }
    d
}

/// Uhlmann phase Γ_g = arg Tr(ψ(0)†ψ(τ)) over the Uhlmann-horizontal lift.
/// The initial fiber point is free; it defaults to √ρ(0) and the result does
/// not depend on the choice.
pub fn uhlmann_phase(
    rho: &DensityCurve,
    psi0: Option<&Purification>,
    tols: &Tolerances,
) -> Result<PhaseResult> {
    let start;
    let psi0 = match psi0 {
        Some(p) => p,
        None => {
            start = rho.start().sqrt_purification(tols);
            &start
        }
    };
    let lift = uhlmann_lift(rho, psi0, tols)?;
    let trace = lift.holonomy_trace();
    Ok(PhaseResult::from_trace(
        trace,
        PhaseMethod::Uhlmann,
        PhaseDiagnostics {
            max_projection_residual: lift.max_projection_residual,
            max_horizontality_residual: lift.max_horizontality_residual,
            steps: rho.curve.grid.steps,
            warnings: lift.warnings.clone(),
            ..Default::default()
        },
    ))
}

/// Largest violation of the (degeneracy-aware) parallel-transport condition
/// ⟨ψ_k(t)|ψ̇_l(t)⟩ = 0 over eigenvector pairs of ρ₀ with equal eigenvalues.
/// Uses the curve's exact generator samples when available, otherwise
/// staggered finite differences.
pub fn parallel_transport_residual(
    u: &UnitaryCurve,
    rho0: &DensityOperator,
    tols: &Tolerances,
) -> Result<f64> {
    if u.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: rho0.dim(),
        });
    }
    let eig = rho0.eig(tols.degeneracy_tol);
    let mut max_res: f64 = 0.0;
    match &u.generators {
        Some(gens) => {
            // ⟨ψ_k(t)|ψ̇_l(t)⟩ = ⟨ψ_k(0)|U†ΞU|ψ_l(0)⟩
            for (ui, gen) in u.curve.mats.iter().zip(gens.iter()) {
                let moving = ui.adjoint() * gen * ui;
                let m = eig.vectors.adjoint() * moving * &eig.vectors;
                for cluster in &eig.clusters {
                    for &k in cluster {
                        for &l in cluster {
                            max_res = max_res.max(m[(k, l)].norm());
                        }
                    }
                }
            }
        }
        None => {
            let dt = u.curve.grid.dt();
            for i in 0..u.curve.mats.len() - 1 {
                let mid = (&u.curve.mats[i] + &u.curve.mats[i + 1]).scale(0.5);
                let dot = (&u.curve.mats[i + 1] - &u.curve.mats[i]).scale(1.0 / dt);
                let m = eig.vectors.adjoint() * (mid.adjoint() * dot) * &eig.vectors;
                for cluster in &eig.clusters {
                    for &k in cluster {
                        for &l in cluster {
                            max_res = max_res.max(m[(k, l)].norm());
                        }
                    }
                }
            }
        }
    }
    Ok(max_res)
}

/// Interferometric phase γ_g = arg Tr(U(τ)ρ₀) for a parallel-transporting
/// unitary evolution. Errors if the parallel-transport precondition fails;
/// use [`interferometric_phase_general`] for arbitrary drivings.
pub fn interferometric_phase_parallel(
    u: &UnitaryCurve,
    rho0: &DensityOperator,
    tols: &Tolerances,
) -> Result<PhaseResult> {
    let residual = parallel_transport_residual(u, rho0, tols)?;
    if residual > tols.parallel_transport_tol {
        return Err(Error::NotParallelTransporting {
            residual,
            tol: tols.parallel_transport_tol,
        });
    }
    let trace = (u.end() * rho0.mat()).trace();
    Ok(PhaseResult::from_trace(
        trace,
        PhaseMethod::InterferometricParallel,
        PhaseDiagnostics {
            max_horizontality_residual: residual,
            steps: u.curve.grid.steps,
            ..Default::default()
        },
    ))
}

/// Interferometric phase for arbitrary unitary evolution,
///
///   γ_g = arg Tr(ψ† U(τ) ψ exp₊(−∫₀^τ ds Σ_j P_j ψ†U†U̇ψ P_j (ψ†ψ)⁻¹)),
///
/// computed through the mechanical-connection lift. Gauge-invariant in the
/// choice of ψ₀ (default √ρ₀).
pub fn interferometric_phase_general(
    u: &UnitaryCurve,
    rho0: &DensityOperator,
    psi0: Option<&Purification>,
    tols: &Tolerances,
) -> Result<PhaseResult> {
    let start;
    let psi0 = match psi0 {
        Some(p) => p,
        None => {
            start = rho0.sqrt_purification(tols);
            &start
        }
    };
    let proj = (psi0.mat() * psi0.mat().adjoint() - rho0.mat()).norm();
    if proj > tols.lift_proj_tol {
        return Err(Error::ProjectionMismatch { residual: proj });
    }
    let lift = mechanical_lift(u, psi0, tols)?;
    let trace = hs_inner(psi0.mat(), lift.end().mat())?;
    Ok(PhaseResult::from_trace(
        trace,
        PhaseMethod::InterferometricGeneral,
        PhaseDiagnostics {
            max_projection_residual: lift.max_projection_residual,
            max_horizontality_residual: lift.max_horizontality_residual,
            steps: u.curve.grid.steps,
            warnings: lift.warnings.clone(),
            ..Default::default()
        },
    ))
}

/// Open-system phase γ_g = arg Σ_k √(p_k(0)p_k(τ)) ⟨ψ_k(0)|ψ_k(τ)⟩ over
/// parallel-transported spectral frames, evaluated as the holonomy trace of
/// the open-system lift. The spectral-sum route is recomputed as a
/// cross-check and reported in the diagnostics.
pub fn open_system_phase(rho: &DensityCurve, tols: &Tolerances) -> Result<PhaseResult> {
    let path = track_spectrum(rho, tols)?;
    let lift = open_system_lift(&path, None, tols)?;
    let trace = lift.holonomy_trace();
    // spectral-sum evaluation of the same quantity
    let n = path.dim();
    let last = path.n_samples() - 1;
    let mut spectral_sum = c(0.0, 0.0);
    let start_frames = recover(&lift.psi[0].mat().clone(), &path.eigenvalues[0]);
    let end_frames = recover(&lift.psi[last].mat().clone(), &path.eigenvalues[last]);
    for k in 0..n {
        let weight = (path.eigenvalues[0][k] * path.eigenvalues[last][k]).sqrt();
        let overlap = (start_frames.column(k).adjoint() * end_frames.column(k))[(0, 0)];
        spectral_sum += overlap.scale(weight);
    }
    let cross = (trace - spectral_sum).norm();
    debug_assert!(lift.method == LiftMethod::OpenSystem);
    Ok(PhaseResult::from_trace(
        trace,
        PhaseMethod::OpenSystem,
        PhaseDiagnostics {
            max_projection_residual: lift.max_projection_residual,
            max_horizontality_residual: lift.max_horizontality_residual,
            cross_check: Some(cross),
            steps: rho.curve.grid.steps,
            warnings: lift.warnings.clone(),
            ..Default::default()
        },
    ))
}

fn recover(psi: &CMat, eigenvalues: &[f64]) -> CMat {
    let n = psi.nrows();
    let mut f = CMat::zeros(n, n);
    for (k, &p) in eigenvalues.iter().enumerate() {
        let col = psi.column(k).scale(1.0 / p.sqrt());
        f.set_column(k, &col);
    }
    f
}

/// A gauge freedom a phase computation must not depend on.
pub enum GaugeDraw {
    /// An arbitrary unitary right factor on the initial purification.
    FiberPoint(CMat),
    /// A unitary relabeling of the reference kets of a spectral lift.
    BasisLabels(CMat),
}

/// Recompute a phase under `n_gauges` random admissible gauge choices and
/// return the maximum pairwise circular deviation.
pub fn phase_gauge_check(
    mut compute: impl FnMut(&GaugeDraw) -> Result<PhaseResult>,
    kind: fn(CMat) -> GaugeDraw,
    dim: usize,
    n_gauges: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut phases = Vec::with_capacity(n_gauges + 1);
    phases.push(compute(&kind(CMat::identity(dim, dim)))?.phase);
    for _ in 0..n_gauges {
        let v = random::unitary(dim, &mut rng);
        phases.push(compute(&kind(v))?.phase);
    }
    let mut max_dev: f64 = 0.0;
    for i in 0..phases.len() {
        for j in (i + 1)..phases.len() {
            max_dev = max_dev.max(circular_distance(phases[i], phases[j]));
        }
    }
    Ok(max_dev)
}
