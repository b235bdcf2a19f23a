//! Evolution curves: uniformly sampled time series of unitaries and density
//! operators, Hamiltonian-driven evolution by midpoint product integration,
//! and smooth spectral tracking along a density curve.

use crate::bundle::DensityOperator;
use crate::error::{Error, Result};
use crate::linalg::{
    c, eig_hermitian_of, hermitian_part, matrix_exp, polar_unitary, CMat, CVec, HermitianMatrix,
};
use crate::tol::Tolerances;

/// Uniform sampling of [t0, t1] into `steps` intervals (steps + 1 samples).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, t1: f64, steps: usize) -> Result<Self> {
        if !t0.is_finite() || !t1.is_finite() || t1 <= t0 || steps == 0 {
            return Err(Error::InvalidGrid { t0, t1, steps });
        }
        Ok(Self { t0, t1, steps })
    }

    pub fn dt(&self) -> f64 {
        (self.t1 - self.t0) / self.steps as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + self.dt() * i as f64
    }

    pub fn n_samples(&self) -> usize {
        self.steps + 1
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_samples()).map(|i| self.time(i)).collect()
    }

    /// Index of the grid point closest to `t`.
    pub fn nearest_index(&self, t: f64) -> usize {
        let i = ((t - self.t0) / self.dt()).round() as isize;
        i.clamp(0, self.steps as isize) as usize
    }
}

/// A uniformly sampled curve of matrices.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    pub grid: TimeGrid,
    pub mats: Vec<CMat>,
}

impl SampledCurve {
    pub fn new(grid: TimeGrid, mats: Vec<CMat>) -> Result<Self> {
        if mats.len() != grid.n_samples() {
            return Err(Error::SampleOutOfRange {
                index: mats.len(),
                len: grid.n_samples(),
            });
        }
        Ok(Self { grid, mats })
    }

    /// Second-order time derivative at sample `i`: central differences in the
    /// interior, one-sided three-point stencils at the endpoints.
    pub fn derivative(&self, i: usize) -> Result<CMat> {
        let n = self.mats.len();
        if n < 3 {
            return Err(Error::TooFewSamples { got: n });
        }
        if i >= n {
            return Err(Error::SampleOutOfRange { index: i, len: n });
        }
        let dt = self.grid.dt();
        let d = if i == 0 {
            (self.mats[1].scale(4.0) - self.mats[2].scale(1.0) - self.mats[0].scale(3.0))
                .scale(1.0 / (2.0 * dt))
        } else if i == n - 1 {
            (self.mats[n - 1].scale(3.0) - self.mats[n - 2].scale(4.0)
                + self.mats[n - 3].scale(1.0))
            .scale(1.0 / (2.0 * dt))
        } else {
            (&self.mats[i + 1] - &self.mats[i - 1]).scale(1.0 / (2.0 * dt))
        };
        Ok(d)
    }
}

/// A sampled unitary evolution operator, U(t0) = I. When the curve comes from
/// a known generator the exact samples Ξ(t_i) with U̇ = Ξ U are carried along
/// as an analytic derivative hook.
#[derive(Debug, Clone)]
pub struct UnitaryCurve {
    pub curve: SampledCurve,
    pub generators: Option<Vec<CMat>>,
}

impl UnitaryCurve {
    pub fn from_samples(
        grid: TimeGrid,
        mats: Vec<CMat>,
        generators: Option<Vec<CMat>>,
        tols: &Tolerances,
    ) -> Result<Self> {
        let curve = SampledCurve::new(grid, mats)?;
        let n = curve.mats[0].nrows();
        let id = CMat::identity(n, n);
        if (&curve.mats[0] - &id).norm() > tols.orthonormality_tol.max(1e-12) {
            return Err(Error::NotUnitary {
                deviation: (&curve.mats[0] - &id).norm(),
                tol: tols.orthonormality_tol,
            });
        }
        for u in &curve.mats {
            let dev = (u.adjoint() * u - &id).norm();
            if dev > 1e-10 {
                return Err(Error::NotUnitary {
                    deviation: dev,
                    tol: 1e-10,
                });
            }
        }
        if let Some(gens) = &generators {
            if gens.len() != curve.mats.len() {
                return Err(Error::SampleOutOfRange {
                    index: gens.len(),
                    len: curve.mats.len(),
                });
            }
        }
        Ok(Self { curve, generators })
    }

    pub fn dim(&self) -> usize {
        self.curve.mats[0].nrows()
    }

    pub fn end(&self) -> &CMat {
        self.curve.mats.last().unwrap()
    }
}

/// A sampled curve of invertible density operators.
#[derive(Debug, Clone)]
pub struct DensityCurve {
    pub curve: SampledCurve,
}

impl DensityCurve {
    pub fn from_samples(grid: TimeGrid, mats: Vec<CMat>, tols: &Tolerances) -> Result<Self> {
        let curve = SampledCurve::new(grid, mats)?;
        let dt = curve.grid.dt();
        for (i, m) in curve.mats.iter().enumerate() {
            DensityOperator::new(m.clone(), tols)?;
            if i > 0 {
                let jump = (&curve.mats[i] - &curve.mats[i - 1]).norm();
                if jump > tols.continuity_bound * dt {
                    return Err(Error::CurveDiscontinuity {
                        t: curve.grid.time(i),
                        jump,
                        bound: tols.continuity_bound * dt,
                    });
                }
            }
        }
        Ok(Self { curve })
    }

    /// Skip per-sample validation; for curves whose validity holds by
    /// construction (e.g. unitary conjugation of a validated state).
    pub fn from_samples_unchecked(grid: TimeGrid, mats: Vec<CMat>) -> Self {
        Self {
            curve: SampledCurve { grid, mats },
        }
    }

    pub fn dim(&self) -> usize {
        self.curve.mats[0].nrows()
    }

    pub fn start(&self) -> DensityOperator {
        DensityOperator::new_unchecked(self.curve.mats[0].clone())
    }

    /// Curve traversed backwards (t ↦ τ − t).
    pub fn reversed(&self) -> Self {
        let mut mats = self.curve.mats.clone();
        mats.reverse();
        Self {
            curve: SampledCurve {
                grid: self.curve.grid,
                mats,
            },
        }
    }
}

/// Solve U̇ = −(i/ħ)Ĥ(t)U by second-order midpoint product integration,
/// U(t+dt) = exp(−i Ĥ(t+dt/2) dt) U(t), with ħ = 1. The exact generator
/// samples Ξ(t_i) = −i Ĥ(t_i) are stored on the result.
pub fn evolve_unitary(
    hamiltonian: impl Fn(f64) -> CMat,
    grid: TimeGrid,
    tols: &Tolerances,
) -> Result<UnitaryCurve> {
    let probe = hamiltonian(grid.t0);
    let n = probe.nrows();
    HermitianMatrix::new(probe, tols.hermiticity_tol.max(1e-9))?;
    let dt = grid.dt();
    let mut mats = Vec::with_capacity(grid.n_samples());
    let mut gens = Vec::with_capacity(grid.n_samples());
    let mut u = CMat::identity(n, n);
    mats.push(u.clone());
    gens.push(hamiltonian(grid.t0).map(|z| z * c(0.0, -1.0)));
    for i in 0..grid.steps {
        let tm = grid.time(i) + 0.5 * dt;
        let h_mid = hermitian_part(&hamiltonian(tm));
        let step = matrix_exp(&h_mid.map(|z| z * c(0.0, -dt)));
        u = step * u;
        mats.push(u.clone());
        let ti = grid.time(i + 1);
        gens.push(hamiltonian(ti).map(|z| z * c(0.0, -1.0)));
    }
    UnitaryCurve::from_samples(grid, mats, Some(gens), tols)
}

/// ρ(t_i) = U(t_i) ρ₀ U(t_i)†.
pub fn conjugate_evolution(u: &UnitaryCurve, rho0: &DensityOperator) -> Result<DensityCurve> {
    if u.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: rho0.dim(),
        });
    }
    let mats: Vec<CMat> = u
        .curve
        .mats
        .iter()
        .map(|ui| hermitian_part(&(ui * rho0.mat() * ui.adjoint())))
        .collect();
    Ok(DensityCurve::from_samples_unchecked(u.curve.grid, mats))
}

/// Qubit curve ρ(t) = ½(I + x(t)σ_x + y(t)σ_y + z(t)σ_z). The Bloch vector
/// must stay strictly inside the unit ball.
pub fn bloch_curve(
    x: impl Fn(f64) -> f64,
    y: impl Fn(f64) -> f64,
    z: impl Fn(f64) -> f64,
    grid: TimeGrid,
    tols: &Tolerances,
) -> Result<DensityCurve> {
    let mut mats = Vec::with_capacity(grid.n_samples());
    for i in 0..grid.n_samples() {
        let t = grid.time(i);
        let (xt, yt, zt) = (x(t), y(t), z(t));
        let rho = DensityOperator::qubit_from_bloch(xt, yt, zt, tols).map_err(|e| match e {
            Error::BlochExitsBall { r, .. } => Error::BlochExitsBall { t, r },
            other => other,
        })?;
        mats.push(rho.mat().clone());
    }
    Ok(DensityCurve::from_samples_unchecked(grid, mats))
}

/// Eigen-data of a density curve with smoothly tracked frames: eigenvalues
/// ordered ascending, eigenvector columns aligned from sample to sample
/// (within each degeneracy cluster by the unitary Procrustes factor, which for
/// nondegenerate levels reduces to fixing ⟨ψ_k(t_i)|ψ_k(t_{i+1})⟩ real
/// positive). The cluster structure must not change along the curve.
#[derive(Debug, Clone)]
pub struct SpectralPath {
    pub grid: TimeGrid,
    /// Per-sample eigenvalues, ascending.
    pub eigenvalues: Vec<Vec<f64>>,
    /// Per-sample unitary eigenvector frames, columns ordered like the values.
    pub frames: Vec<CMat>,
    /// The (constant) degeneracy partition; crossings are rejected, so the
    /// per-sample history is this partition at every sample.
    pub clusters: Vec<Vec<usize>>,
}

impl SpectralPath {
    pub fn dim(&self) -> usize {
        self.frames[0].nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.frames.len()
    }

    /// Σ_k p_k |ψ_k⟩⟨ψ_k| at sample i.
    pub fn reconstruct(&self, i: usize) -> CMat {
        let n = self.dim();
        let d = CVec::from_iterator(n, self.eigenvalues[i].iter().map(|&p| c(p, 0.0)));
        &self.frames[i] * CMat::from_diagonal(&d) * self.frames[i].adjoint()
    }
}

fn partitions_equal(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| x == y)
}

/// Per-sample eigendecomposition of a density curve with continuity-tracked
/// frames. Fails with the crossing time if the degeneracy cluster structure
/// changes mid-curve.
pub fn track_spectrum(rho: &DensityCurve, tols: &Tolerances) -> Result<SpectralPath> {
    let grid = rho.curve.grid;
    let n_samples = rho.curve.mats.len();
    let mut eigenvalues = Vec::with_capacity(n_samples);
    let mut frames: Vec<CMat> = Vec::with_capacity(n_samples);
    let mut clusters: Option<Vec<Vec<usize>>> = None;
    for i in 0..n_samples {
        let eig =
            eig_hermitian_of(&rho.curve.mats[i], tols.hermiticity_tol, tols.degeneracy_tol)?;
        match &clusters {
            None => clusters = Some(eig.clusters.clone()),
            Some(reference) => {
                if !partitions_equal(reference, &eig.clusters) {
                    return Err(Error::EigenvalueCrossing { t: grid.time(i) });
                }
            }
        }
        let mut frame = eig.vectors;
        if let Some(prev) = frames.last() {
            for cluster in clusters.as_ref().unwrap() {
                align_cluster(&mut frame, prev, cluster);
            }
            // alignment makes every overlap real nonnegative; a small value
            // means an eigenvector turned by more than ~45° in one step, i.e.
            // the sampling cannot support a trustworthy assignment
            let floor = 0.5_f64.sqrt();
            for k in 0..frame.ncols() {
                let overlap = (prev.column(k).adjoint() * frame.column(k))[(0, 0)];
                if overlap.re <= floor {
                    return Err(Error::Convergence(format!(
                        "frame continuity lost at t = {} (overlap {:.3}); sample the curve more finely",
                        grid.time(i),
                        overlap.re
                    )));
                }
            }
        }
        eigenvalues.push(eig.values);
        frames.push(frame);
    }
    Ok(SpectralPath {
        grid,
        eigenvalues,
        frames,
        clusters: clusters.unwrap(),
    })
}

/// Replace the cluster's columns V_c by V_c Q, Q the unitary Procrustes factor
/// aligning them with the previous frame: Q = polar(V_c† P_c).
fn align_cluster(frame: &mut CMat, prev: &CMat, cluster: &[usize]) {
    if cluster.len() == 1 {
        let k = cluster[0];
        let overlap = (frame.column(k).adjoint() * prev.column(k))[(0, 0)];
        if overlap.norm() > 0.0 {
            let phase = overlap / overlap.norm();
            let col = frame.column(k) * phase;
            frame.set_column(k, &col);
        }
        return;
    }
    let n = frame.nrows();
    let m = cluster.len();
    let mut v = CMat::zeros(n, m);
    let mut p = CMat::zeros(n, m);
    for (j, &k) in cluster.iter().enumerate() {
        v.set_column(j, &frame.column(k));
        p.set_column(j, &prev.column(k));
    }
    let q = polar_unitary(&(v.adjoint() * &p));
    let aligned = v * q;
    for (j, &k) in cluster.iter().enumerate() {
        frame.set_column(k, &aligned.column(j));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn pauli(nx: f64, ny: f64, nz: f64) -> CMat {
        CMat::from_row_slice(2, 2, &[c(nz, 0.0), c(nx, -ny), c(nx, ny), c(-nz, 0.0)])
    }

    #[test]
    fn zero_hamiltonian_gives_identity() {
        let grid = TimeGrid::new(0.0, 1.0, 100).unwrap();
        let u = evolve_unitary(|_| CMat::zeros(2, 2), grid, &tols()).unwrap();
        for m in &u.curve.mats {
            assert!((m - CMat::identity(2, 2)).norm() < 1e-14);
        }
    }

    #[test]
    fn constant_hamiltonian_closed_form() {
        // Ĥ = −ω n·σ → U(t) = cos(ωt) I + i sin(ωt) n·σ
        let (omega, theta): (f64, f64) = (1.0, 0.9);
        let n_sigma = pauli(theta.sin(), 0.0, theta.cos());
        let h = n_sigma.scale(-omega);
        let grid = TimeGrid::new(0.0, PI, 2000).unwrap();
        let u = evolve_unitary(|_| h.clone(), grid, &tols()).unwrap();
        for &i in &[500usize, 1500, 2000] {
            let t = grid.time(i);
            let expected = CMat::identity(2, 2).scale((omega * t).cos())
                + n_sigma.map(|z| z * c(0.0, (omega * t).sin()));
            assert!(
                (&u.curve.mats[i] - expected).norm() < 1e-9,
                "sample {i} deviates"
            );
        }
    }

    #[test]
    fn sigma_z_at_pi_gives_minus_identity() {
        let h = pauli(0.0, 0.0, 1.0);
        let grid = TimeGrid::new(0.0, PI, 1000).unwrap();
        let u = evolve_unitary(|_| h.clone(), grid, &tols()).unwrap();
        assert!((u.end() + CMat::identity(2, 2)).norm() < 1e-10);
    }

    #[test]
    fn evolve_order_two_convergence() {
        let h = |t: f64| pauli(0.3 * (1.3 * t).cos(), 0.2, 0.8 * (0.7 * t).sin());
        let exact_grid = TimeGrid::new(0.0, 2.0, 16384).unwrap();
        let exact = evolve_unitary(h, exact_grid, &tols()).unwrap().end().clone();
        let coarse = evolve_unitary(h, TimeGrid::new(0.0, 2.0, 256).unwrap(), &tols())
            .unwrap()
            .end()
            .clone();
        let fine = evolve_unitary(h, TimeGrid::new(0.0, 2.0, 512).unwrap(), &tols())
            .unwrap()
            .end()
            .clone();
        let e_coarse = (&coarse - &exact).norm();
        let e_fine = (&fine - &exact).norm();
        let ratio = e_coarse / e_fine;
        assert!(
            (3.2..4.8).contains(&ratio),
            "expected ~4x error reduction, got {ratio:.2}"
        );
    }

    #[test]
    fn conjugation_examples() {
        let grid = TimeGrid::new(0.0, 1.0, 50).unwrap();
        let id_curve = evolve_unitary(|_| CMat::zeros(2, 2), grid, &tols()).unwrap();
        let rho0 = DensityOperator::qubit_from_bloch(0.1, 0.2, 0.3, &tols()).unwrap();
        let curve = conjugate_evolution(&id_curve, &rho0).unwrap();
        for m in &curve.curve.mats {
            assert!((m - rho0.mat()).norm() < 1e-14);
        }

        // maximally mixed is a fixed point of any conjugation
        let h = pauli(0.4, 0.1, 0.7);
        let u = evolve_unitary(|_| h.clone(), grid, &tols()).unwrap();
        let mixed = DensityOperator::maximally_mixed(2);
        let curve = conjugate_evolution(&u, &mixed).unwrap();
        for m in &curve.curve.mats {
            assert!((m - mixed.mat()).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugation_is_isospectral() {
        let grid = TimeGrid::new(0.0, PI, 400).unwrap();
        let h = pauli(0.6, 0.0, 0.8).scale(-1.0);
        let u = evolve_unitary(|_| h.clone(), grid, &tols()).unwrap();
        let rho0 = DensityOperator::new(
            CMat::from_diagonal(&CVec::from_vec(vec![c(0.8, 0.0), c(0.2, 0.0)])),
            &tols(),
        )
        .unwrap();
        let curve = conjugate_evolution(&u, &rho0).unwrap();
        for m in &curve.curve.mats {
            let eig = eig_hermitian_of(m, 1e-9, 1e-8).unwrap();
            assert_relative_eq!(eig.values[0], 0.2, epsilon = 1e-10);
            assert_relative_eq!(eig.values[1], 0.8, epsilon = 1e-10);
        }
    }

    fn trefoil_xyz() -> (
        impl Fn(f64) -> f64,
        impl Fn(f64) -> f64,
        impl Fn(f64) -> f64,
    ) {
        (
            |t: f64| 0.5 * t.cos(),
            |t: f64| 0.25 * t.sin(),
            |t: f64| 0.5 * (t / 2.0).sin().powi(2),
        )
    }

    #[test]
    fn bloch_curve_examples() {
        let grid = TimeGrid::new(0.0, 2.0 * PI, 200).unwrap();
        let flat = bloch_curve(|_| 0.0, |_| 0.0, |_| 0.0, grid, &tols()).unwrap();
        for m in &flat.curve.mats {
            assert!((m - CMat::identity(2, 2).scale(0.5)).norm() < 1e-15);
        }

        let (x, y, z) = trefoil_xyz();
        let curve = bloch_curve(x, y, z, grid, &tols()).unwrap();
        // r(0) = 1/2 → eigenvalues {0.25, 0.75}
        let eig = eig_hermitian_of(&curve.curve.mats[0], 1e-12, 1e-8).unwrap();
        assert_relative_eq!(eig.values[0], 0.25, epsilon = 1e-12);
        assert_relative_eq!(eig.values[1], 0.75, epsilon = 1e-12);
        // r(π) = √8/4
        let i_pi = grid.nearest_index(PI);
        let r_pi = 8.0_f64.sqrt() / 4.0;
        let eig = eig_hermitian_of(&curve.curve.mats[i_pi], 1e-12, 1e-8).unwrap();
        assert_relative_eq!(eig.values[1], 0.5 * (1.0 + r_pi), epsilon = 1e-12);

        // det ρ = (1 − r²)/4
        for (i, m) in curve.curve.mats.iter().enumerate() {
            let t = grid.time(i);
            let r2 = (0.5 * t.cos()).powi(2)
                + (0.25 * t.sin()).powi(2)
                + (0.5 * (t / 2.0).sin().powi(2)).powi(2);
            let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
            assert_relative_eq!(det, (1.0 - r2) / 4.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn bloch_curve_rejects_exiting_ball() {
        let grid = TimeGrid::new(0.0, 1.0, 10).unwrap();
        let r = bloch_curve(|t| 0.9 + 0.2 * t, |_| 0.0, |_| 0.0, grid, &tols());
        assert!(matches!(r, Err(Error::BlochExitsBall { .. })));
    }

    #[test]
    fn track_constant_curve() {
        let grid = TimeGrid::new(0.0, 1.0, 60).unwrap();
        let mats: Vec<CMat> = (0..61)
            .map(|_| CMat::from_diagonal(&CVec::from_vec(vec![c(0.7, 0.0), c(0.3, 0.0)])))
            .collect();
        let curve = DensityCurve::from_samples(grid, mats, &tols()).unwrap();
        let path = track_spectrum(&curve, &tols()).unwrap();
        for i in 0..path.n_samples() {
            assert_relative_eq!(path.eigenvalues[i][0], 0.3, epsilon = 1e-14);
            let dev = (&path.frames[i] - &path.frames[0]).norm();
            assert!(dev < 1e-12);
        }
    }

    #[test]
    fn track_trefoil_matches_closed_form() {
        let grid = TimeGrid::new(0.0, 2.0 * PI, 2000).unwrap();
        let (x, y, z) = trefoil_xyz();
        let curve = bloch_curve(x, y, z, grid, &tols()).unwrap();
        let path = track_spectrum(&curve, &tols()).unwrap();
        for &i in &[0usize, 137, 500, 1000, 1500, 2000] {
            let t = grid.time(i);
            let (xt, yt, zt) = (
                0.5 * t.cos(),
                0.25 * t.sin(),
                0.5 * (t / 2.0).sin().powi(2),
            );
            let r = (xt * xt + yt * yt + zt * zt).sqrt();
            // p₁(t) = (1 + r)/2, ascending order puts it last
            assert!(
                (path.eigenvalues[i][1] - 0.5 * (1.0 + r)).abs() < 1e-9,
                "eigenvalue mismatch at t = {t}"
            );
            // closed-form eigenvector, compared up to phase
            let norm = (2.0 * r * (r + zt)).sqrt();
            let v = CVec::from_vec(vec![c((r + zt) / norm, 0.0), c(xt / norm, yt / norm)]);
            let overlap = (v.adjoint() * path.frames[i].column(1))[(0, 0)].norm();
            assert!(
                (overlap - 1.0).abs() < 1e-8,
                "eigenvector overlap {overlap} at t = {t}"
            );
        }
        // reconstruction
        for &i in &[0usize, 750, 2000] {
            assert!((path.reconstruct(i) - &curve.curve.mats[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn track_rejects_crossings() {
        // eigenvalues cross at t = 0.5
        let grid = TimeGrid::new(0.0, 1.0, 100).unwrap();
        let mats: Vec<CMat> = (0..101)
            .map(|i| {
                let t = grid.time(i);
                let a = 0.5 + 0.2 * (t - 0.5);
                CMat::from_diagonal(&CVec::from_vec(vec![c(a, 0.0), c(1.0 - a, 0.0)]))
            })
            .collect();
        let curve = DensityCurve::from_samples(grid, mats, &tols()).unwrap();
        match track_spectrum(&curve, &tols()) {
            Err(Error::EigenvalueCrossing { t }) => assert!((t - 0.5).abs() < 0.02),
            other => panic!("expected crossing error, got {other:?}"),
        }
    }

    #[test]
    fn track_rejects_underresolved_sampling() {
        // two steps around a 2π precession: the eigenframe turns 90° per step
        let grid = TimeGrid::new(0.0, 2.0 * PI, 2).unwrap();
        let curve = bloch_curve(
            |t| 0.45 * t.cos(),
            |t| 0.45 * t.sin(),
            |_| 0.0,
            grid,
            &tols(),
        )
        .unwrap();
        assert!(matches!(
            track_spectrum(&curve, &tols()),
            Err(Error::Convergence(_))
        ));
    }

    #[test]
    fn tracker_consistent_across_resolutions() {
        let (x, y, z) = trefoil_xyz();
        let coarse_grid = TimeGrid::new(0.0, 2.0 * PI, 800).unwrap();
        let fine_grid = TimeGrid::new(0.0, 2.0 * PI, 1600).unwrap();
        let coarse = track_spectrum(
            &bloch_curve(&x, &y, &z, coarse_grid, &tols()).unwrap(),
            &tols(),
        )
        .unwrap();
        let fine = track_spectrum(
            &bloch_curve(&x, &y, &z, fine_grid, &tols()).unwrap(),
            &tols(),
        )
        .unwrap();
        for k in 0..2 {
            let a = coarse.frames.last().unwrap().column(k);
            let b = fine.frames.last().unwrap().column(k);
            let overlap = (a.adjoint() * b)[(0, 0)].norm();
            assert!(overlap >= 1.0 - 1e-6, "endpoint overlap {overlap}");
        }
    }

    #[test]
    fn derivative_examples() {
        let grid = TimeGrid::new(0.0, 1.0, 100).unwrap();
        let m = CMat::from_row_slice(2, 2, &[c(1., 0.), c(0.5, 0.2), c(0.5, -0.2), c(-1., 0.)]);

        let constant = SampledCurve::new(grid, vec![m.clone(); 101]).unwrap();
        assert!(constant.derivative(50).unwrap().norm() < 1e-12);

        // linear in t: derivative exact everywhere including endpoints
        let linear =
            SampledCurve::new(grid, (0..101).map(|i| m.scale(grid.time(i))).collect()).unwrap();
        for &i in &[0usize, 1, 50, 99, 100] {
            assert!((linear.derivative(i).unwrap() - &m).norm() < 1e-12);
        }

        // sin(t)·M with dt = 1e-3: O(dt²) accuracy
        let fine = TimeGrid::new(0.0, 1.0, 1000).unwrap();
        let sine = SampledCurve::new(
            fine,
            (0..1001).map(|i| m.scale(fine.time(i).sin())).collect(),
        )
        .unwrap();
        for &i in &[0usize, 250, 500, 1000] {
            let expected = m.scale(fine.time(i).cos());
            let err = (sine.derivative(i).unwrap() - expected).norm();
            assert!(err < 5e-6, "derivative error {err:.2e} at sample {i}");
        }

        let short =
            SampledCurve::new(TimeGrid::new(0.0, 1.0, 1).unwrap(), vec![m.clone(); 2]).unwrap();
        assert!(matches!(
            short.derivative(0),
            Err(Error::TooFewSamples { .. })
        ));
    }
}
