//! The verification suite behind `verify-paper`: every published closed form
//! and structural property this library is expected to reproduce, evaluated at
//! pinned tolerances with measured-vs-expected reporting.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bundle::{self, mech_connection_raw, subspace_basis, Purification, Subspace};
use crate::curves::{evolve_unitary, DensityCurve, TimeGrid};
use crate::error::Result;
use crate::lifts::{open_system_lift, ordered_exp_correction, uhlmann_lift};
use crate::linalg::{c, metric_g, skew_deviation, CMat, CVec};
use crate::phases::{
    circular_distance, interferometric_phase_general, interferometric_phase_parallel,
    open_system_phase, uhlmann_phase,
};
use crate::random;
use crate::scenarios::{
    precession_loop_phase, scenario_easy, scenario_parallel_circle, scenario_slater_rotation,
    scenario_slater_triangle, scenario_trefoil, slater_rotation_ratio, slater_triangle_ratio,
};
use crate::tol::{Tolerances, HBAR};

/// One measured-vs-expected comparison inside a criterion.
#[derive(Debug, Clone)]
pub struct CheckRow {
    pub label: String,
    pub measured: String,
    pub expected: String,
    pub pass: bool,
}

impl CheckRow {
    fn new(label: impl Into<String>, measured: f64, expected: &str, pass: bool) -> Self {
        let shown = if measured == 0.0 || measured.abs() >= 1e-3 {
            format!("{measured:.9}")
        } else {
            format!("{measured:.3e}")
        };
        Self {
            label: label.into(),
            measured: shown,
            expected: expected.to_string(),
            pass,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub runtime_s: f64,
    pub runtime_limit_s: Option<f64>,
    pub details: Vec<CheckRow>,
}

impl CriterionReport {
    pub fn summary_line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let limit = match self.runtime_limit_s {
            Some(l) => format!(" (limit {l:.0} s)"),
            None => String::new(),
        };
        format!(
            "{status}  [{}] {:<28} {:.2} s{limit}",
            self.id, self.name, self.runtime_s
        )
    }
}

struct Criterion {
    id: usize,
    name: &'static str,
    runtime_limit_s: Option<f64>,
    details: Vec<CheckRow>,
    started: Instant,
}

impl Criterion {
    fn new(id: usize, name: &'static str, runtime_limit_s: Option<f64>) -> Self {
        Self {
            id,
            name,
            runtime_limit_s,
            details: Vec::new(),
            started: Instant::now(),
        }
    }

    fn check(&mut self, label: impl Into<String>, measured: f64, expected: &str, pass: bool) {
        self.details.push(CheckRow::new(label, measured, expected, pass));
    }

    fn check_close(&mut self, label: impl Into<String>, measured: f64, expected: f64, tol: f64) {
        let pass = (measured - expected).abs() <= tol;
        self.details.push(CheckRow::new(
            label,
            measured,
            &format!("{expected:.9} ± {tol:.2e}"),
            pass,
        ));
    }

    fn check_le(&mut self, label: impl Into<String>, measured: f64, bound: f64) {
        let pass = measured <= bound;
        self.details
            .push(CheckRow::new(label, measured, &format!("≤ {bound:.2e}"), pass));
    }

    fn finish(mut self) -> CriterionReport {
        let runtime_s = self.started.elapsed().as_secs_f64();
        if let Some(limit) = self.runtime_limit_s {
            let pass = runtime_s < limit;
            self.details.push(CheckRow::new(
                "runtime (s)",
                runtime_s,
                &format!("< {limit}"),
                pass,
            ));
        }
        CriterionReport {
            id: self.id,
            name: self.name,
            passed: self.details.iter().all(|d| d.pass),
            runtime_s,
            runtime_limit_s: self.runtime_limit_s,
            details: self.details,
        }
    }
}

fn tols() -> Tolerances {
    Tolerances::default()
}

/// Criterion 1: the ordered-exponential correction along the precessing-qubit
/// lift reproduces diag(e^{iωt cosθ}, e^{−iωt cosθ}) entrywise.
pub fn criterion_1(tighten: f64) -> Result<CriterionReport> {
    let mut cr = Criterion::new(1, "exp-correction-closed-form", Some(1.0));
    let t = tols();
    let (omega, theta, p1) = (1.0_f64, std::f64::consts::FRAC_PI_3, 0.8_f64);
    let grid = TimeGrid::new(0.0, std::f64::consts::PI, 2000)?;
    let s = scenario_easy(omega, theta, p1, std::f64::consts::PI, 2000, &t)?;
    let u = s.unitary.as_ref().unwrap();
    let psi0 = Purification::new_unchecked(CMat::from_diagonal(&CVec::from_vec(vec![
        c(p1.sqrt(), 0.0),
        c((1.0 - p1).sqrt(), 0.0),
    ])));
    let samples: Vec<Purification> = u
        .curve
        .mats
        .iter()
        .map(|ui| Purification::new_unchecked(ui * psi0.mat()))
        .collect();
    let ref_spectrum = psi0.momentum_eig(t.degeneracy_tol);
    let w = ordered_exp_correction(&samples, &ref_spectrum, &grid, &t)?;
    let tol = 1e-6 / tighten;
    for t_target in [0.5, 1.0, std::f64::consts::PI] {
        let i = grid.nearest_index(t_target);
        let ti = grid.time(i);
        let ph = omega * ti * theta.cos();
        let expected = CMat::from_diagonal(&CVec::from_vec(vec![
            c(ph.cos(), ph.sin()),
            c(ph.cos(), -ph.sin()),
        ]));
        let diff = &w[i] - expected;
        let err = diff.iter().map(|z| z.norm()).fold(0.0, f64::max);
        cr.check_le(format!("‖W(t) − closed form‖_max at t ≈ {t_target}"), err, tol);
    }
    Ok(cr.finish())
}

/// Criterion 2: the interferometric phase of the precession loop matches
/// arg(p₁ e^{iπ(1+cosθ)} + p₂ e^{iπ(1−cosθ)}) at five parameter points.
pub fn criterion_2(tighten: f64) -> Result<CriterionReport> {
    let mut cr = Criterion::new(2, "precession-loop-phase", Some(2.0));
    let t = tols();
    let tol = 1e-5 / tighten;
    // closed-form identity at the derived point
    let derived = precession_loop_phase(0.8, std::f64::consts::FRAC_PI_3);
    cr.check_close(
        "closed form at (0.8, π/3) equals −π/2",
        derived,
        -std::f64::consts::FRAC_PI_2,
        1e-12,
    );
    for (p1, theta) in [
        (0.8, std::f64::consts::FRAC_PI_3),
        (0.6, 0.7),
        (0.7, 1.2),
        (0.9, 2.2),
        (0.55, 2.9),
    ] {
        let s = scenario_easy(1.0, theta, p1, std::f64::consts::PI, 2000, &t)?;
        let u = s.unitary.as_ref().unwrap();
        let rho0 = s.density.start();
        let measured = interferometric_phase_general(u, &rho0, None, &t)?.phase;
        let expected = precession_loop_phase(p1, theta);
        let dev = circular_distance(measured, expected);
        cr.check(
            format!("|γ − closed| at (p1={p1}, θ={theta:.4})"),
            dev,
            &format!("≤ {tol:.1e}"),
            dev <= tol,
        );
    }
    Ok(cr.finish())
}

/// Criterion 3: the trefoil holonomy trace and phase.
pub fn criterion_3(tighten: f64) -> Result<CriterionReport> {
    let mut cr = Criterion::new(3, "trefoil", Some(5.0));
    let t = tols();
    let s = scenario_trefoil(4000, &t)?;
    let result = open_system_phase(&s.density, &t)?;
    let comp_tol = 0.01 / tighten;
    cr.check_close("Re Tr(ψ(0)†ψ(2π))", result.trace_value.re, 0.17, comp_tol);
    cr.check_close("Im Tr(ψ(0)†ψ(2π))", result.trace_value.im, -0.49, comp_tol);
    let dev = circular_distance(result.phase, 5.04);
    cr.check(
        "|phase − 5.04| mod 2π",
        dev,
        &format!("≤ {:.2e}", 0.05 / tighten),
        dev <= 0.05 / tighten,
    );
    Ok(cr.finish())
}

/// Pole-robust comparison of a measured tangent ratio with a closed form:
/// the identity tan γ / tan Γ = F constrains γ ≡ arctan(F tan Γ) (mod π);
/// a relative ratio error of `rel_tol` maps to an angular error of
/// rel_tol·|sin γ cos γ| through the arctan Jacobian. Near poles of tan the
/// angular form stays conditioned while the raw ratio does not.
fn tangent_ratio_check(
    cr: &mut Criterion,
    label: &str,
    gamma: f64,
    big_gamma: f64,
    formula: f64,
    rel_tol: f64,
) {
    let implied = (formula * big_gamma.tan()).atan();
    let pi = std::f64::consts::PI;
    let mut delta = (gamma - implied).rem_euclid(pi);
    if delta > pi / 2.0 {
        delta = pi - delta;
    }
    let scale = (gamma.sin() * gamma.cos()).abs().max(1e-3);
    let bound = rel_tol * scale;
    cr.check(
        format!("{label}: angular residual of tan-ratio identity"),
        delta,
        &format!("≤ {bound:.2e}"),
        delta <= bound,
    );
    // away from the pole the raw ratio is well-conditioned; compare directly
    if gamma.tan().abs() < 1e3 && formula.abs() < 1e3 {
        let measured = gamma.tan() / big_gamma.tan();
        let rel = ((measured - formula) / formula).abs();
        cr.check(
            format!("{label}: |ratio/formula − 1|"),
            rel,
            &format!("≤ {rel_tol:.1e}"),
            rel <= rel_tol,
        );
    }
}

/// Criterion 4: Slater's rotation ratio at (0.5, π/3) and (0.9, π/4).
/// (0.5, π/3) sits exactly on the tan pole (π cosξ = π/2), where the identity
/// is evaluated in its mod-π angular form.
pub fn criterion_4(tighten: f64) -> Result<CriterionReport> {
    let mut cr = Criterion::new(4, "slater-rotation-ratio", Some(10.0));
    let t = tols();
    for (r, xi) in [(0.5, std::f64::consts::FRAC_PI_3), (0.9, std::f64::consts::FRAC_PI_4)] {
        let s = scenario_slater_rotation(r, xi, 2000, &t)?;
        let u = s.unitary.as_ref().unwrap();
        let rho0 = s.density.start();
        let gamma = interferometric_phase_general(u, &rho0, None, &t)?.phase;
        let big_gamma = uhlmann_phase(&s.density, None, &t)?.phase;
        tangent_ratio_check(
            &mut cr,
            &format!("(r={r}, ξ={xi:.4})"),
            gamma,
            big_gamma,
            slater_rotation_ratio(r, xi),
            1e-2 / tighten,
        );
    }
    Ok(cr.finish())
}

/// Criterion 5: Slater's triangle ratio 8.5 at the octant triangle.
pub fn criterion_5(tighten: f64) -> Result<CriterionReport> {
    let mut cr = Criterion::new(5, "slater-triangle-ratio", Some(10.0));
    let t = tols();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let s = scenario_slater_triangle(0.5, half_pi, 0.0, half_pi, half_pi, 2001, &t)?;
    let u = s.unitary.as_ref().unwrap();
    let rho0 = s.density.start();
    let gamma = interferometric_phase_parallel(u, &rho0, &t)?.phase;
    let big_gamma = uhlmann_phase(&s.density, None, &t)?.phase;
    let measured = gamma.tan() / big_gamma.tan();
    let expected = slater_triangle_ratio(0.5, half_pi, 0.0, half_pi, half_pi);
    cr.check_close("closed-form value is 8.5", expected, 8.5, 1e-12);
    let rel = ((measured - expected) / expected).abs();
    let bound = 2e-2 / tighten;
    cr.check(
        "octant triangle |ratio/8.5 − 1|",
        rel,
        &format!("≤ {bound:.1e}"),
        rel <= bound,
    );
    Ok(cr.finish())
}

/// Criterion 6: the reduction chain — the open-system phase equals the
/// interferometric phase on isospectral curves, and the interferometric phase
/// collapses to arg Tr(U(τ)ρ) on parallel-transporting drivings.
pub fn criterion_6(tighten: f64) -> Result<CriterionReport> {
    let mut cr = Criterion::new(6, "reduction-chain", None);
    let t = tols();
    let iso_tol = 2e-3 / tighten;
    for (label, s) in [
        (
            "precession (0.8, π/3)",
            scenario_easy(1.0, std::f64::consts::FRAC_PI_3, 0.8, std::f64::consts::PI, 3000, &t)?,
        ),
        (
            "rotation (0.5, π/3)",
            scenario_slater_rotation(0.5, std::f64::consts::FRAC_PI_3, 3000, &t)?,
        ),
    ] {
        let u = s.unitary.as_ref().unwrap();
        let rho0 = s.density.start();
        let general = interferometric_phase_general(u, &rho0, None, &t)?.phase;
        let open = open_system_phase(&s.density, &t)?.phase;
        let dev = circular_distance(general, open);
        cr.check(
            format!("isospectral: |open − interferometric| on {label}"),
            dev,
            &format!("≤ {iso_tol:.1e}"),
            dev <= iso_tol,
        );
    }
    let pt_tol = 1e-6 / tighten;
    let half_pi = std::f64::consts::FRAC_PI_2;
    for (label, s) in [
        (
            "octant triangle",
            scenario_slater_triangle(0.5, half_pi, 0.0, half_pi, half_pi, 2001, &t)?,
        ),
        ("parallel circle", scenario_parallel_circle(0.7, 1.0, 8000, &t)?),
    ] {
        let u = s.unitary.as_ref().unwrap();
        let rho0 = s.density.start();
        let general = interferometric_phase_general(u, &rho0, None, &t)?.phase;
        let direct = (u.end() * rho0.mat()).trace().arg();
        let dev = circular_distance(general, direct);
        cr.check(
            format!("parallel transport: |general − arg Tr(Uρ)| on {label}"),
            dev,
            &format!("≤ {pt_tol:.1e}"),
            dev <= pt_tol,
        );
    }
    Ok(cr.finish())
}

const TRIALS: usize = 204; // 68 per dimension in {2, 3, 4}

fn trial_dims() -> impl Iterator<Item = usize> {
    (0..TRIALS).map(|i| 2 + (i % 3))
}

/// Random spectrum cycling through nondegenerate / one-double / fully
/// degenerate structures.
fn trial_spectrum(n: usize, trial: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match trial % 3 {
        0 => random::spectrum(n, &vec![1; n], rng),
        1 if n > 2 => {
            let mut degs = vec![1; n - 1];
            degs[0] = 2;
            random::spectrum(n, &degs, rng)
        }
        1 => random::spectrum(n, &[2], rng),
        _ => vec![1.0 / n as f64; n],
    }
}

/// Criterion 7: the randomized property suites.
pub fn criterion_7(tighten: f64) -> Result<CriterionReport> {
    let mut cr = Criterion::new(7, "property-suites", None);
    let t = tols();

    // 7a/7b: gauge covariance of the connection form and u(ψ)-membership
    let mut rng = ChaCha8Rng::seed_from_u64(701);
    let mut worst_cov: f64 = 0.0;
    let mut worst_skew: f64 = 0.0;
    let mut worst_comm: f64 = 0.0;
    for (trial, n) in trial_dims().enumerate() {
        let spectrum = trial_spectrum(n, trial, &mut rng);
        let psi = Purification::new_unchecked(random::purification_with_momentum_spectrum(
            &spectrum, &mut rng,
        ));
        let w_eig = psi.momentum_eig(t.degeneracy_tol);
        let k = random::skew_hermitian(n, &mut rng);
        let x = &k * psi.mat();
        let a = mech_connection_raw(psi.mat(), &x, &w_eig);
        // membership in u(ψ)
        worst_skew = worst_skew.max(skew_deviation(&a));
        let w_mat = w_eig.reconstruct();
        worst_comm = worst_comm.max((&a * &w_mat - &w_mat * &a).norm());
        // covariance under the right action
        let u = random::unitary(n, &mut rng);
        let psi_u = Purification::new_unchecked(psi.mat() * &u);
        let w_eig_u = psi_u.momentum_eig(t.degeneracy_tol);
        let a_u = mech_connection_raw(psi_u.mat(), &(&x * &u), &w_eig_u);
        worst_cov = worst_cov.max((&a_u - u.adjoint() * &a * &u).norm());
    }
    cr.check_le("gauge covariance of A (worst ‖·‖)", worst_cov, 1e-10 / tighten);
    cr.check_le("A output skew-Hermiticity (worst)", worst_skew, 1e-10 / tighten);
    cr.check_le("A output commutes with ψ†ψ (worst)", worst_comm, 1e-10 / tighten);

    // 7c: momentum conservation along unitary flows
    let mut rng = ChaCha8Rng::seed_from_u64(702);
    let mut worst_drift: f64 = 0.0;
    for n in trial_dims() {
        let h0 = random::hermitian(n, &mut rng).scale(0.5);
        let h1 = random::hermitian(n, &mut rng).scale(0.3);
        let grid = TimeGrid::new(0.0, 1.0, 200)?;
        let u = evolve_unitary(|s| &h0 + h1.scale((2.0 * s).sin()), grid, &t)?;
        let psi0 = random::purification(n, &mut rng);
        let w0 = psi0.adjoint() * &psi0;
        for ui in u.curve.mats.iter().step_by(20) {
            let psi = ui * &psi0;
            worst_drift = worst_drift.max((psi.adjoint() * &psi - &w0).norm());
        }
    }
    cr.check_le("momentum conservation (worst drift)", worst_drift, 1e-8 / tighten);

    // 7d: subspace dimension counts
    let mut rng = ChaCha8Rng::seed_from_u64(703);
    let mut dim_failures = 0usize;
    for (trial, n) in trial_dims().enumerate() {
        let spectrum = trial_spectrum(n, trial, &mut rng);
        let psi = Purification::new_unchecked(random::purification_with_momentum_spectrum(
            &spectrum, &mut rng,
        ));
        // subspace_basis itself errors when the count disagrees with the formula
        for which in [
            Subspace::UhlmannVertical,
            Subspace::UhlmannHorizontal,
            Subspace::LevelSetTangent,
            Subspace::MechanicalHorizontal,
            Subspace::SpectralTransverse,
            Subspace::StratifiedHorizontal,
        ] {
            if subspace_basis(&psi, which, &t).is_err() {
                dim_failures += 1;
            }
        }
    }
    cr.check(
        "subspace dimension counts n², n²−1, n², n²−q, q−1, n²−1 (failures)",
        dim_failures as f64,
        "= 0",
        dim_failures == 0,
    );

    // 7e: triviality of T_ψS(ψ) ∩ H_ψ (Uhlmann): the union spans T_ψS°
    let mut rng = ChaCha8Rng::seed_from_u64(704);
    let mut rank_failures = 0usize;
    for n in trial_dims() {
        let psi = Purification::new_unchecked(random::purification(n, &mut rng));
        let mut union = subspace_basis(&psi, Subspace::LevelSetTangent, &t)?;
        union.extend(subspace_basis(&psi, Subspace::UhlmannHorizontal, &t)?);
        let independent = bundle::gram_schmidt_real(union, t.basis_drop_tol);
        if independent.len() != 2 * n * n - 1 {
            rank_failures += 1;
        }
    }
    cr.check(
        "intersection triviality (rank failures)",
        rank_failures as f64,
        "= 0",
        rank_failures == 0,
    );

    // 7f: Uhlmann-lift horizontality residual on random smooth curves
    let mut rng = ChaCha8Rng::seed_from_u64(705);
    let mut worst_uhl: f64 = 0.0;
    for (trial, n) in trial_dims().enumerate() {
        let curve = gentle_density_curve(n, 1000, trial, &mut rng, &t)?;
        let psi0 = curve.start().sqrt_purification(&t);
        let lift = uhlmann_lift(&curve, &psi0, &t)?;
        worst_uhl = worst_uhl.max(lift.max_horizontality_residual);
    }
    cr.check_le("Uhlmann-lift horizontality residual (worst)", worst_uhl, 1e-6 / tighten);

    // 7g: open-lift velocity decomposition (∂_u tangent to the level set,
    // ∂_v orthogonal to the vertical and level-set directions)
    let mut rng = ChaCha8Rng::seed_from_u64(706);
    let mut worst_u: f64 = 0.0;
    let mut worst_v: f64 = 0.0;
    for (trial, n) in trial_dims().enumerate() {
        let curve = gentle_density_curve(n, 2000, trial, &mut rng, &t)?;
        let path = crate::curves::track_spectrum(&curve, &t)?;
        let lift = open_system_lift(&path, None, &t)?;
        let dt = curve.curve.grid.dt();
        let n_samples = path.n_samples();
        // corrected frames recovered from the lift samples
        let frames: Vec<CMat> = (0..n_samples)
            .map(|i| {
                let mut f = CMat::zeros(n, n);
                for k in 0..n {
                    let col = lift.psi[i].mat().column(k).scale(1.0 / path.eigenvalues[i][k].sqrt());
                    f.set_column(k, &col);
                }
                f
            })
            .collect();
        for probe in 1..8 {
            let i = probe * (n_samples - 2) / 8 + 1;
            let psi_i = lift.psi[i].mat();
            // ∂_u: frame velocity at fixed eigenvalues
            let frame_dot = (&frames[i + 1] - &frames[i - 1]).scale(1.0 / (2.0 * dt));
            let sqrt_p = CMat::from_diagonal(&CVec::from_iterator(
                n,
                path.eigenvalues[i].iter().map(|&p| c(p.sqrt(), 0.0)),
            ));
            let x_u = &frame_dot * &sqrt_p;
            worst_u = worst_u.max((x_u.adjoint() * psi_i + psi_i.adjoint() * &x_u).norm());
            // ∂_v: eigenvalue velocity at fixed frames
            let dsqrt = CMat::from_diagonal(&CVec::from_iterator(
                n,
                (0..n).map(|k| {
                    let d = (path.eigenvalues[i + 1][k].sqrt()
                        - path.eigenvalues[i - 1][k].sqrt())
                        / (2.0 * dt);
                    c(d, 0.0)
                }),
            ));
            let x_v = &frames[i] * &dsqrt;
            for kb in bundle::skew_basis(n) {
                let vertical = psi_i * &kb;
                let level = &kb * psi_i;
                let gv = metric_g(&x_v, &vertical, HBAR)? / vertical.norm();
                let gl = metric_g(&x_v, &level, HBAR)? / level.norm();
                worst_v = worst_v.max(gv.abs()).max(gl.abs());
            }
        }
    }
    cr.check_le("open-lift ∂_u level-set tangency (worst)", worst_u, 1e-6 / tighten);
    cr.check_le("open-lift ∂_v orthogonality (worst)", worst_v, 1e-6 / tighten);

    Ok(cr.finish())
}

/// Smooth random density curve with gentle, non-crossing eigenvalue motion.
fn gentle_density_curve(
    n: usize,
    steps: usize,
    trial: usize,
    rng: &mut ChaCha8Rng,
    t: &Tolerances,
) -> Result<DensityCurve> {
    use std::f64::consts::TAU;
    let h0 = random::hermitian(n, rng).scale(0.2);
    let h1 = random::hermitian(n, rng).scale(0.15);
    let grid = TimeGrid::new(0.0, 1.0, steps)?;
    let u = evolve_unitary(|s| &h0 + h1.scale((TAU * s).sin()), grid, t)?;
    // base spectrum with comfortable gaps, gently modulated without crossing
    let base = loop {
        let p = random::spectrum(n, &vec![1; n], rng);
        let mut sorted = p.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if sorted.windows(2).all(|w| w[1] - w[0] > 0.08) {
            break p;
        }
    };
    let phases: Vec<f64> = (0..n).map(|_| TAU * (trial as f64 * 0.37 + 0.1)).collect();
    let mats: Vec<CMat> = (0..grid.n_samples())
        .map(|i| {
            let s = grid.time(i);
            let mut p: Vec<f64> = base
                .iter()
                .zip(&phases)
                .map(|(&b, &ph)| b + 0.03 * (TAU * s + ph).sin())
                .collect();
            let total: f64 = p.iter().sum();
            for v in &mut p {
                *v /= total;
            }
            let d = CVec::from_iterator(n, p.iter().map(|&v| c(v, 0.0)));
            let ui = &u.curve.mats[i];
            crate::linalg::hermitian_part(&(ui * CMat::from_diagonal(&d) * ui.adjoint()))
        })
        .collect();
    Ok(DensityCurve::from_samples_unchecked(grid, mats))
}

/// Criterion 8: the Uhlmann and interferometric phases genuinely differ on the
/// Slater rotation scenario.
pub fn criterion_8(tighten: f64) -> Result<CriterionReport> {
    let mut cr = Criterion::new(8, "phase-distinctness", None);
    let t = tols();
    let s = scenario_slater_rotation(0.5, std::f64::consts::FRAC_PI_3, 2000, &t)?;
    let u = s.unitary.as_ref().unwrap();
    let rho0 = s.density.start();
    let gamma = interferometric_phase_general(u, &rho0, None, &t)?.phase;
    let big_gamma = uhlmann_phase(&s.density, None, &t)?.phase;
    let sep = circular_distance(gamma, big_gamma);
    let bound = 0.01 * tighten;
    cr.check(
        "|γ − Γ| at (r=0.5, ξ=π/3)",
        sep,
        &format!("> {bound:.1e}"),
        sep > bound,
    );
    Ok(cr.finish())
}

/// Criterion 9: halving dt reduces the error of criteria 1–3 by 4× ± 25%.
pub fn criterion_9(tighten: f64) -> Result<CriterionReport> {
    let mut cr = Criterion::new(9, "convergence-order", None);
    let t = tols();
    let band = 1.0 + 0.25 / tighten;
    let lo = 4.0 / band;
    let hi = 4.0 * band;
    let in_band = |ratio: f64| ratio >= lo && ratio <= hi;

    // item 1: ordered-exponential correction vs closed form
    let (omega, theta, p1): (f64, f64, f64) = (1.0, 1.2, 0.8);
    let w_error = |steps: usize| -> Result<f64> {
        let grid = TimeGrid::new(0.0, std::f64::consts::PI, steps)?;
        let s = scenario_easy(omega, theta, p1, std::f64::consts::PI, steps, &t)?;
        let u = s.unitary.as_ref().unwrap();
        let psi0 = Purification::new_unchecked(CMat::from_diagonal(&CVec::from_vec(vec![
            c(p1.sqrt(), 0.0),
            c((1.0 - p1).sqrt(), 0.0),
        ])));
        let samples: Vec<Purification> = u
            .curve
            .mats
            .iter()
            .map(|ui| Purification::new_unchecked(ui * psi0.mat()))
            .collect();
        let ref_spectrum = psi0.momentum_eig(t.degeneracy_tol);
        let w = ordered_exp_correction(&samples, &ref_spectrum, &grid, &t)?;
        let ph = omega * std::f64::consts::PI * theta.cos();
        let expected = CMat::from_diagonal(&CVec::from_vec(vec![
            c(ph.cos(), ph.sin()),
            c(ph.cos(), -ph.sin()),
        ]));
        Ok((w.last().unwrap() - expected).norm())
    };
    let ratio1 = w_error(500)? / w_error(1000)?;
    cr.check(
        "exp-correction error ratio (500 vs 1000 steps)",
        ratio1,
        &format!("in [{lo:.2}, {hi:.2}]"),
        in_band(ratio1),
    );

    // item 2: loop phase vs closed form
    let phase_error = |steps: usize| -> Result<f64> {
        let s = scenario_easy(omega, theta, p1, std::f64::consts::PI, steps, &t)?;
        let u = s.unitary.as_ref().unwrap();
        let rho0 = s.density.start();
        let measured = interferometric_phase_general(u, &rho0, None, &t)?.phase;
        Ok(circular_distance(measured, precession_loop_phase(p1, theta)))
    };
    let ratio2 = phase_error(500)? / phase_error(1000)?;
    cr.check(
        "loop-phase error ratio (500 vs 1000 steps)",
        ratio2,
        &format!("in [{lo:.2}, {hi:.2}]"),
        in_band(ratio2),
    );

    // item 3: trefoil holonomy trace vs a 32000-step reference
    let trace_at = |steps: usize| -> Result<crate::linalg::C64> {
        Ok(open_system_phase(&scenario_trefoil(steps, &t)?.density, &t)?.trace_value)
    };
    let reference = trace_at(32000)?;
    let e1000 = (trace_at(1000)? - reference).norm();
    let e2000 = (trace_at(2000)? - reference).norm();
    let ratio3 = e1000 / e2000;
    cr.check(
        "trefoil trace error ratio (1000 vs 2000 steps)",
        ratio3,
        &format!("in [{lo:.2}, {hi:.2}]"),
        in_band(ratio3),
    );
    Ok(cr.finish())
}

/// Run the full verification suite. `filter` keeps criteria whose name or id
/// contains the needle; `tighten` divides every tolerance.
pub fn run_all(filter: Option<&str>, tighten: f64) -> Result<Vec<CriterionReport>> {
    let all: [fn(f64) -> Result<CriterionReport>; 9] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
    ];
    let mut reports = Vec::new();
    for (i, f) in all.iter().enumerate() {
        let id = i + 1;
        // cheap name probe for filtering without running
        let name = [
            "exp-correction-closed-form",
            "precession-loop-phase",
            "trefoil",
            "slater-rotation-ratio",
            "slater-triangle-ratio",
            "reduction-chain",
            "property-suites",
            "phase-distinctness",
            "convergence-order",
        ][i];
        if let Some(needle) = filter {
            if !name.contains(needle) && needle != id.to_string() {
                continue;
            }
        }
        reports.push(f(tighten)?);
    }
    Ok(reports)
}

/// Render the pass/fail table with measured-vs-expected detail rows.
pub fn render(reports: &[CriterionReport]) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "{}", r.summary_line());
        for d in &r.details {
            let _ = writeln!(
                out,
                "      {}  {:<58} measured {:>16}  expected {}",
                if d.pass { "ok  " } else { "FAIL" },
                d.label,
                d.measured,
                d.expected
            );
        }
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed}/{} criteria passed", reports.len());
    out
}
