//! Horizontal-lift integrators for the three connections: the Uhlmann lift,
//! the mechanical-connection lift via the positively time-ordered exponential,
//! and the open-system lift built from parallel-transported spectral frames.
//!
//! All integrators are second order (midpoint product rules); the residual of
//! the relevant horizontality equation is tracked on a staggered grid, which
//! is where a midpoint scheme is accurate.

use crate::bundle::{self, Purification};
use crate::curves::{DensityCurve, SpectralPath, TimeGrid, UnitaryCurve};
use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_part, matrix_exp, polar_unitary, skew_part, solve_sylvester_in_basis, CMat, CVec,
    EigenSystem, HermitianMatrix,
};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftMethod {
    Uhlmann,
    Mechanical,
    OpenSystem,
}

impl std::fmt::Display for LiftMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LiftMethod::Uhlmann => write!(f, "uhlmann"),
            LiftMethod::Mechanical => write!(f, "mechanical"),
            LiftMethod::OpenSystem => write!(f, "open-system"),
        }
    }
}

/// A sampled horizontal lift together with its quality diagnostics.
#[derive(Debug, Clone)]
pub struct LiftResult {
    pub psi: Vec<Purification>,
    pub grid: TimeGrid,
    pub method: LiftMethod,
    /// max over samples of ‖ψ(t_i)ψ(t_i)† − ρ(t_i)‖_F
    pub max_projection_residual: f64,
    /// max over the staggered grid of the method's horizontality residual
    pub max_horizontality_residual: f64,
    pub warnings: Vec<String>,
}

impl LiftResult {
    pub fn start(&self) -> &Purification {
        &self.psi[0]
    }

    pub fn end(&self) -> &Purification {
        self.psi.last().unwrap()
    }

    /// Tr(ψ(0)†ψ(τ)), the holonomy trace whose argument is the geometric phase.
    pub fn holonomy_trace(&self) -> crate::linalg::C64 {
        crate::linalg::hs_inner(self.start().mat(), self.end().mat()).unwrap()
    }
}

fn conditioning_warning(ref_spectrum: &EigenSystem, gap_warn: f64) -> Option<String> {
    ref_spectrum.min_intercluster_gap().and_then(|gap| {
        (gap < gap_warn).then(|| {
            format!(
                "reference spectrum is quasi-degenerate (min inter-cluster gap {gap:.3e} < {gap_warn:.1e}); \
                 the connection may be ill-conditioned"
            )
        })
    })
}

/// Uhlmann horizontal lift of a density curve: integrates ψ̇ = G(t)ψ where G
/// is the Hermitian solution of G ρ + ρ G = ρ̇. A Hermitian generator makes
/// ψ̇†ψ = ψ†ψ̇ identically, and the Sylvester equation is exactly projection
/// consistency d/dt(ψψ†) = ρ̇.
pub fn uhlmann_lift(rho: &DensityCurve, psi0: &Purification, tols: &Tolerances) -> Result<LiftResult> {
    let grid = rho.curve.grid;
    let n = rho.dim();
    if psi0.dim() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: psi0.dim(),
        });
    }
    let init_residual = (psi0.mat() * psi0.mat().adjoint() - &rho.curve.mats[0]).norm();
    if init_residual > tols.lift_proj_tol {
        return Err(Error::ProjectionMismatch {
            residual: init_residual,
        });
    }
    let dt = grid.dt();
    let mut psi = Vec::with_capacity(grid.n_samples());
    let mut current = psi0.mat().clone();
    psi.push(current.clone());
    let mut max_proj: f64 = init_residual;
    for i in 0..grid.steps {
        let rho_mid = hermitian_part(&((&rho.curve.mats[i] + &rho.curve.mats[i + 1]).scale(0.5)));
        let rho_dot = (&rho.curve.mats[i + 1] - &rho.curve.mats[i]).scale(1.0 / dt);
        let eig = crate::linalg::eig_hermitian(&HermitianMatrix::new_unchecked(rho_mid), 0.0);
        if eig.min_value() <= tols.pd_floor {
            return Err(Error::NotPositiveDefinite {
                min_eig: eig.min_value(),
                floor: tols.pd_floor,
            });
        }
        let g = solve_sylvester_in_basis(&eig, &rho_dot);
        current = matrix_exp(&g.scale(dt)) * current;
        // Re-project onto the fiber over ρ(t_{i+1}): ψ ← √ρ · polar(√ρ⁻¹ψ),
        // which equals right multiplication by the Hermitian factor
        // (ψ†ρ⁻¹ψ)^{−1/2} and therefore leaves the horizontality residual at
        // O(dt²). Applying it every step keeps the per-step correction at the
        // local truncation size instead of letting drift accumulate to a
        // threshold and enter the residual as a spike.
        let target = &rho.curve.mats[i + 1];
        let sqrt_rho = crate::linalg::eig_hermitian(
            &HermitianMatrix::symmetrized(target),
            tols.degeneracy_tol,
        );
        let s = sqrt_rho.map_spectrum(f64::sqrt);
        let s_inv = sqrt_rho.map_spectrum(|v| 1.0 / v.sqrt());
        current = &s * polar_unitary(&(s_inv * &current));
        current = current.clone().scale(1.0 / current.norm());
        max_proj = max_proj.max((&current * current.adjoint() - target).norm());
        psi.push(current.clone());
    }
    let max_horiz = uhlmann_residual(&psi, dt);
    Ok(LiftResult {
        psi: psi.into_iter().map(Purification::new_unchecked).collect(),
        grid,
        method: LiftMethod::Uhlmann,
        max_projection_residual: max_proj,
        max_horizontality_residual: max_horiz,
        warnings: Vec::new(),
    })
}

/// Staggered-grid Uhlmann horizontality residual max_i ‖ψ̇†ψ − ψ†ψ̇‖_F.
fn uhlmann_residual(psi: &[CMat], dt: f64) -> f64 {
    let mut max_res: f64 = 0.0;
    for i in 0..psi.len() - 1 {
        let mid = (&psi[i] + &psi[i + 1]).scale(0.5);
        let dot = (&psi[i + 1] - &psi[i]).scale(1.0 / dt);
        let res = (dot.adjoint() * &mid - mid.adjoint() * &dot).norm();
        max_res = max_res.max(res);
    }
    max_res
}

/// Positively time-ordered exponential correction
///
///   W(t) = exp₊(−∫₀ᵗ ds A_{ψ(s)}(ψ̇(s))),
///
/// integrated as Ẇ = −A_mid W by midpoint product steps, so later-time
/// factors compose on the left. Each W commutes with the reference momentum
/// and is unitary; the input samples must stay on one level set.
pub fn ordered_exp_correction(
    psi: &[Purification],
    ref_spectrum: &EigenSystem,
    grid: &TimeGrid,
    tols: &Tolerances,
) -> Result<Vec<CMat>> {
    if psi.len() != grid.n_samples() {
        return Err(Error::SampleOutOfRange {
            index: psi.len(),
            len: grid.n_samples(),
        });
    }
    let n = ref_spectrum.dim();
    let w_ref = ref_spectrum.reconstruct();
    for (i, p) in psi.iter().enumerate() {
        let drift = (p.mat().adjoint() * p.mat() - &w_ref).norm();
        if drift > tols.level_tol {
            return Err(Error::LevelSetDrift {
                drift,
                tol: tols.level_tol,
            });
        }
        if i > 0 && p.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: p.dim(),
            });
        }
    }
    let dt = grid.dt();
    let mut out = Vec::with_capacity(psi.len());
    let mut w = CMat::identity(n, n);
    out.push(w.clone());
    for i in 0..psi.len() - 1 {
        let mid = (psi[i].mat() + psi[i + 1].mat()).scale(0.5);
        let dot = (psi[i + 1].mat() - psi[i].mat()).scale(1.0 / dt);
        let a_mid = bundle::mech_connection_raw(&mid, &dot, ref_spectrum);
        w = matrix_exp(&a_mid.scale(-dt)) * w;
        out.push(w.clone());
    }
    Ok(out)
}

/// Mechanical-connection horizontal lift of the isospectral curve generated by
/// a unitary evolution: φ(t) = U(t) ψ₀ W(t) with W the ordered-exponential
/// correction. φ projects onto U ρ₀ U† and satisfies A_φ(φ̇) = 0.
pub fn mechanical_lift(
    u: &UnitaryCurve,
    psi0: &Purification,
    tols: &Tolerances,
) -> Result<LiftResult> {
    let grid = u.curve.grid;
    if u.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: psi0.dim(),
        });
    }
    let ref_spectrum = psi0.momentum_eig(tols.degeneracy_tol);
    let raw: Vec<Purification> = u
        .curve
        .mats
        .iter()
        .map(|ui| Purification::new_unchecked(ui * psi0.mat()))
        .collect();
    let w = ordered_exp_correction(&raw, &ref_spectrum, &grid, tols)?;
    let phi: Vec<CMat> = raw
        .iter()
        .zip(w.iter())
        .map(|(p, wi)| p.mat() * wi)
        .collect();
    // diagnostics
    let rho0 = psi0.mat() * psi0.mat().adjoint();
    let mut max_proj: f64 = 0.0;
    for (ui, ph) in u.curve.mats.iter().zip(phi.iter()) {
        let target = ui * &rho0 * ui.adjoint();
        max_proj = max_proj.max((ph * ph.adjoint() - target).norm());
    }
    let dt = grid.dt();
    let mut max_horiz: f64 = 0.0;
    for i in 0..phi.len() - 1 {
        let mid = (&phi[i] + &phi[i + 1]).scale(0.5);
        let dot = (&phi[i + 1] - &phi[i]).scale(1.0 / dt);
        let a = bundle::mech_connection_raw(&mid, &dot, &ref_spectrum);
        max_horiz = max_horiz.max(a.norm());
    }
    let mut warnings = Vec::new();
    if let Some(wmsg) = conditioning_warning(&ref_spectrum, tols.gap_warn) {
        warnings.push(wmsg);
    }
    Ok(LiftResult {
        psi: phi.into_iter().map(Purification::new_unchecked).collect(),
        grid,
        method: LiftMethod::Mechanical,
        max_projection_residual: max_proj,
        max_horizontality_residual: max_horiz,
        warnings,
    })
}

/// Open-system horizontal lift: re-phases each tracked eigenvector branch by
/// θ_k(t) = i∫⟨ψ_k|ψ̇_k⟩ds (trapezoidal rule) so that ⟨φ_k|φ̇_k⟩ = 0, and
/// within degeneracy clusters of size > 1 applies the per-cluster unitary
/// transport Ẋ_c = −A_c X_c, (A_c)_{kl} = ⟨ψ_k|ψ̇_l⟩, which is the unique
/// choice killing every intra-cluster overlap. The lift is assembled as
/// ψ(t) = Σ_k √(p_k(t)) |φ_k(t)⟩⟨k| over the supplied basis kets.
// the sample loops below stride two arrays at staggered offsets; indices read
// better than zipped windows here
#[allow(clippy::needless_range_loop)]
pub fn open_system_lift(
    path: &SpectralPath,
    basis: Option<&CMat>,
    tols: &Tolerances,
) -> Result<LiftResult> {
    let n = path.dim();
    let n_samples = path.n_samples();
    let grid = path.grid;
    let dt = grid.dt();
    let basis_mat = match basis {
        Some(b) => {
            let dev = (b.adjoint() * b - CMat::identity(n, n)).norm();
            let tol = tols.orthonormality_tol.max(1e-10);
            if dev > tol {
                return Err(Error::NotUnitary {
                    deviation: dev,
                    tol,
                });
            }
            b.clone()
        }
        None => CMat::identity(n, n),
    };

    // transported frames, built cluster by cluster
    let mut corrected = path.frames.clone();
    for cluster in &path.clusters {
        if cluster.len() == 1 {
            let k = cluster[0];
            // θ_k by trapezoid over ⟨ψ_k|ψ̇_k⟩ with second-order differenced ψ̇
            let overlaps: Vec<f64> = (0..n_samples)
                .map(|i| branch_overlap_imag(path, k, i, dt))
                .collect();
            let mut theta = vec![0.0_f64; n_samples];
            for i in 1..n_samples {
                // θ = i∫⟨ψ|ψ̇⟩; ⟨ψ|ψ̇⟩ is purely imaginary, so θ stays real
                theta[i] = theta[i - 1] - 0.5 * dt * (overlaps[i - 1] + overlaps[i]);
            }
            for i in 0..n_samples {
                let phase = c(theta[i].cos(), theta[i].sin());
                let col = corrected[i].column(k) * phase;
                corrected[i].set_column(k, &col);
            }
        } else {
            // per-cluster unitary transport
            let m = cluster.len();
            let mut x = CMat::identity(m, m);
            for i in 0..n_samples - 1 {
                let a_mid = cluster_overlap_matrix(path, cluster, i, dt);
                let xi_next = matrix_exp(&a_mid.scale(-dt)) * &x;
                // apply X at sample i, advance
                apply_cluster_mix(&mut corrected[i], &path.frames[i], cluster, &x);
                x = xi_next;
            }
            apply_cluster_mix(
                &mut corrected[n_samples - 1],
                &path.frames[n_samples - 1],
                cluster,
                &x,
            );
        }
    }

    // ψ(t) = Φ(t) diag(√p(t)) B†
    let mut psi = Vec::with_capacity(n_samples);
    let mut max_proj: f64 = 0.0;
    for i in 0..n_samples {
        let d = CVec::from_iterator(n, path.eigenvalues[i].iter().map(|&p| c(p.sqrt(), 0.0)));
        let m = &corrected[i] * CMat::from_diagonal(&d) * basis_mat.adjoint();
        max_proj = max_proj.max((&m * m.adjoint() - path.reconstruct(i)).norm());
        psi.push(m);
    }

    // parallelism residual on the staggered grid, over same-cluster pairs
    let mut max_horiz: f64 = 0.0;
    for i in 0..n_samples - 1 {
        for cluster in &path.clusters {
            for &k in cluster {
                for &l in cluster {
                    let mid = (corrected[i].column(k) + corrected[i + 1].column(k)).scale(0.5);
                    let dot =
                        (corrected[i + 1].column(l) - corrected[i].column(l)).scale(1.0 / dt);
                    let overlap = (mid.adjoint() * dot)[(0, 0)].norm();
                    max_horiz = max_horiz.max(overlap);
                }
            }
        }
    }

    Ok(LiftResult {
        psi: psi.into_iter().map(Purification::new_unchecked).collect(),
        grid,
        method: LiftMethod::OpenSystem,
        max_projection_residual: max_proj,
        max_horizontality_residual: max_horiz,
        warnings: Vec::new(),
    })
}

/// Im⟨ψ_k(t_i)|ψ̇_k(t_i)⟩ with a second-order stencil (⟨ψ|ψ̇⟩ is purely
/// imaginary for normalized branches).
fn branch_overlap_imag(path: &SpectralPath, k: usize, i: usize, dt: f64) -> f64 {
    let n_samples = path.n_samples();
    let col = |j: usize| path.frames[j].column(k);
    let overlap = if i == 0 {
        (col(0).adjoint() * (col(1).scale(4.0) - col(2) - col(0).scale(3.0)))[(0, 0)]
            .scale(1.0 / (2.0 * dt))
    } else if i == n_samples - 1 {
        (col(i).adjoint() * (col(i).scale(3.0) - col(i - 1).scale(4.0) + col(i - 2)))[(0, 0)]
            .scale(1.0 / (2.0 * dt))
    } else {
        (col(i).adjoint() * (col(i + 1) - col(i - 1)))[(0, 0)].scale(1.0 / (2.0 * dt))
    };
    overlap.im
}

/// Skew matrix (A_c)_{kl} = ⟨ψ_k|ψ̇_l⟩ restricted to a cluster, evaluated at
/// the midpoint of step i.
fn cluster_overlap_matrix(path: &SpectralPath, cluster: &[usize], i: usize, dt: f64) -> CMat {
    let m = cluster.len();
    let mut a = CMat::zeros(m, m);
    for (r, &k) in cluster.iter().enumerate() {
        for (s, &l) in cluster.iter().enumerate() {
            let mid = (path.frames[i].column(k) + path.frames[i + 1].column(k)).scale(0.5);
            let dot = (path.frames[i + 1].column(l) - path.frames[i].column(l)).scale(1.0 / dt);
            a[(r, s)] = (mid.adjoint() * dot)[(0, 0)];
        }
    }
    skew_part(&a)
}

fn apply_cluster_mix(dst: &mut CMat, src: &CMat, cluster: &[usize], x: &CMat) {
    let n = src.nrows();
    let m = cluster.len();
    let mut v = CMat::zeros(n, m);
    for (j, &k) in cluster.iter().enumerate() {
        v.set_column(j, &src.column(k));
    }
    let mixed = v * x;
    for (j, &k) in cluster.iter().enumerate() {
        dst.set_column(k, &mixed.column(j));
    }
}

/// Method-appropriate horizontality residual of a lift against its curve,
/// evaluated on the staggered midpoint grid:
/// Uhlmann ‖ψ̇†ψ − ψ†ψ̇‖_F, Mechanical ‖A(ψ̇)‖_F, OpenSystem the largest
/// same-cluster frame overlap |⟨φ_k|φ̇_l⟩|.
pub fn horizontality_residual(lift: &LiftResult, rho: &DensityCurve, tols: &Tolerances) -> Result<f64> {
    if lift.psi.len() != rho.curve.mats.len() {
        return Err(Error::SampleOutOfRange {
            index: lift.psi.len(),
            len: rho.curve.mats.len(),
        });
    }
    let dt = lift.grid.dt();
    let mats: Vec<CMat> = lift.psi.iter().map(|p| p.mat().clone()).collect();
    match lift.method {
        LiftMethod::Uhlmann => Ok(uhlmann_residual(&mats, dt)),
        LiftMethod::Mechanical => {
            let ref_spectrum = lift.psi[0].momentum_eig(tols.degeneracy_tol);
            let mut max_res: f64 = 0.0;
            for i in 0..mats.len() - 1 {
                let mid = (&mats[i] + &mats[i + 1]).scale(0.5);
                let dot = (&mats[i + 1] - &mats[i]).scale(1.0 / dt);
                let a = bundle::mech_connection_raw(&mid, &dot, &ref_spectrum);
                max_res = max_res.max(a.norm());
            }
            Ok(max_res)
        }
        LiftMethod::OpenSystem => {
            let path = crate::curves::track_spectrum(rho, tols)?;
            // compare the lift's own frames: ψ(t)|k⟩/√p_k recovers Φ(t)
            let mut max_res: f64 = 0.0;
            for i in 0..mats.len() - 1 {
                let frames_i = recover_frames(&mats[i], &path.eigenvalues[i]);
                let frames_next = recover_frames(&mats[i + 1], &path.eigenvalues[i + 1]);
                for cluster in &path.clusters {
                    for &k in cluster {
                        for &l in cluster {
                            let mid =
                                (frames_i.column(k) + frames_next.column(k)).scale(0.5);
                            let dot = (frames_next.column(l) - frames_i.column(l))
                                .scale(1.0 / dt);
                            let overlap = (mid.adjoint() * dot)[(0, 0)].norm();
                            max_res = max_res.max(overlap);
                        }
                    }
                }
            }
            Ok(max_res)
        }
    }
}

/// Columns |φ_k⟩ = ψ|k⟩/√p_k for a spectral-lift sample (computational basis).
fn recover_frames(psi: &CMat, eigenvalues: &[f64]) -> CMat {
    let n = psi.nrows();
    let mut f = CMat::zeros(n, n);
    for (k, &p) in eigenvalues.iter().enumerate() {
        let col = psi.column(k).scale(1.0 / p.sqrt());
        f.set_column(k, &col);
    }
    f
}
