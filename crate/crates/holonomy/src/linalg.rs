//! Dense complex-matrix kernel: Hilbert-Schmidt products, Hermitian
//! eigendecomposition with degeneracy clustering, matrix exponentials, and the
//! positive-definite Sylvester solve used by the horizontal-lift integrators.
//!
//! Everything here is a pure function of its inputs; no shared mutable state.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check_finite(m: &CMat) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn check_same_dims(a: &CMat, b: &CMat) -> Result<()> {
    if a.nrows() == b.nrows() && a.ncols() == b.ncols() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: a.nrows(),
            right: b.nrows(),
        })
    }
}

/// Hilbert-Schmidt Hermitian product Tr(A†B).
pub fn hs_inner(a: &CMat, b: &CMat) -> Result<C64> {
    check_same_dims(a, b)?;
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// Frobenius / Hilbert-Schmidt norm.
pub fn hs_norm(a: &CMat) -> f64 {
    a.norm()
}

/// Riemannian metric G(X,Y) = ħ Tr(X†Y + Y†X) = 2ħ Re Tr(X†Y).
pub fn metric_g(x: &CMat, y: &CMat, hbar: f64) -> Result<f64> {
    Ok(2.0 * hbar * hs_inner(x, y)?.re)
}

/// Symplectic form Ω(X,Y) = −iħ Tr(X†Y − Y†X) = 2ħ Im Tr(X†Y).
pub fn symplectic_omega(x: &CMat, y: &CMat, hbar: f64) -> Result<f64> {
    Ok(2.0 * hbar * hs_inner(x, y)?.im)
}

/// Hermitian deviation ‖M − M†‖_F.
pub fn hermitian_deviation(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

/// Skew-Hermitian deviation ‖M + M†‖_F.
pub fn skew_deviation(m: &CMat) -> f64 {
    (m + m.adjoint()).norm()
}

/// Hermitian part (M + M†)/2.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Skew-Hermitian part (M − M†)/2.
pub fn skew_part(m: &CMat) -> CMat {
    (m - m.adjoint()).scale(0.5)
}

/// A validated Hermitian matrix: ‖M − M†‖_F ≤ tol · ‖M‖_F.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: CMat,
}

impl HermitianMatrix {
    pub fn new(mat: CMat, hermiticity_tol: f64) -> Result<Self> {
        check_finite(&mat)?;
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        let dev = hermitian_deviation(&mat);
        if dev > hermiticity_tol * mat.norm().max(1e-300) {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: hermiticity_tol,
            });
        }
        Ok(Self { mat })
    }

    pub fn new_unchecked(mat: CMat) -> Self {
        Self { mat }
    }

    /// Symmetrize and wrap; useful to scrub rounding drift off products like UρU†.
    pub fn symmetrized(mat: &CMat) -> Self {
        Self {
            mat: hermitian_part(mat),
        }
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_inner(self) -> CMat {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }
}

/// A validated skew-Hermitian matrix: ‖M + M†‖_F ≤ tol · ‖M‖_F.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewHermitianMatrix {
    mat: CMat,
}

impl SkewHermitianMatrix {
    pub fn new(mat: CMat, hermiticity_tol: f64) -> Result<Self> {
        check_finite(&mat)?;
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        let dev = skew_deviation(&mat);
        if dev > hermiticity_tol * mat.norm().max(1e-300) {
            return Err(Error::NotSkewHermitian {
                deviation: dev,
                tol: hermiticity_tol,
            });
        }
        Ok(Self { mat })
    }

    pub fn new_unchecked(mat: CMat) -> Self {
        Self { mat }
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_inner(self) -> CMat {
        self.mat
    }
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues ascending and a
/// single-linkage partition of the spectrum into degeneracy clusters.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors, ordered like `values`.
    pub vectors: CMat,
    /// Partition of 0..n into groups of indices with indistinguishable eigenvalues.
    pub clusters: Vec<Vec<usize>>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    pub fn max_value(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// V f(D) V†.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMat {
        let d = CVec::from_iterator(self.values.len(), self.values.iter().map(|&v| c(f(v), 0.0)));
        &self.vectors * CMat::from_diagonal(&d) * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMat {
        self.map_spectrum(|v| v)
    }

    /// Orthogonal projector onto the eigenspace of cluster `j`.
    pub fn cluster_projector(&self, j: usize) -> CMat {
        let n = self.dim();
        let mut p = CMat::zeros(n, n);
        for &k in &self.clusters[j] {
            let v = self.vectors.column(k);
            p += v * v.adjoint();
        }
        p
    }

    pub fn cluster_projectors(&self) -> Vec<CMat> {
        (0..self.clusters.len())
            .map(|j| self.cluster_projector(j))
            .collect()
    }

    /// q = Σ_j n_j² where n_j are the cluster multiplicities.
    pub fn isotropy_dimension(&self) -> usize {
        self.clusters.iter().map(|cl| cl.len() * cl.len()).sum()
    }

    /// Smallest gap between adjacent clusters, if there is more than one.
    pub fn min_intercluster_gap(&self) -> Option<f64> {
        if self.clusters.len() < 2 {
            return None;
        }
        let mut min_gap = f64::INFINITY;
        for w in self.clusters.windows(2) {
            let hi = w[0].iter().map(|&i| self.values[i]).fold(f64::MIN, f64::max);
            let lo = w[1].iter().map(|&i| self.values[i]).fold(f64::MAX, f64::min);
            min_gap = min_gap.min(lo - hi);
        }
        Some(min_gap)
    }
}

fn cluster_sorted(values: &[f64], degeneracy_tol: f64) -> Vec<Vec<usize>> {
    let range = values.last().unwrap() - values.first().unwrap();
    let threshold = degeneracy_tol * range.max(1.0);
    let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..values.len() {
        if values[i] - values[i - 1] <= threshold {
            clusters.last_mut().unwrap().push(i);
        } else {
            clusters.push(vec![i]);
        }
    }
    clusters
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(m: &HermitianMatrix, degeneracy_tol: f64) -> EigenSystem {
    // Work on the symmetrized matrix so the backend sees an exactly Hermitian input.
    let h = hermitian_part(m.mat());
    let n = h.nrows();
    let se = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }
    let clusters = cluster_sorted(&values, degeneracy_tol);
    EigenSystem {
        values,
        vectors,
        clusters,
    }
}

/// Validate Hermiticity, then decompose.
pub fn eig_hermitian_of(mat: &CMat, hermiticity_tol: f64, degeneracy_tol: f64) -> Result<EigenSystem> {
    let h = HermitianMatrix::new(mat.clone(), hermiticity_tol)?;
    Ok(eig_hermitian(&h, degeneracy_tol))
}

const NORMALITY_DISPATCH_TOL: f64 = 1e-12;

/// Matrix exponential. (Skew-)Hermitian inputs take the spectral route, which
/// keeps exp of a skew-Hermitian matrix unitary to machine precision; general
/// inputs use Padé-13 scaling and squaring.
pub fn matrix_exp(m: &CMat) -> CMat {
    let scale = m.norm();
    if scale == 0.0 {
        return CMat::identity(m.nrows(), m.ncols());
    }
    if skew_deviation(m) <= NORMALITY_DISPATCH_TOL * scale {
        // m = iH with H = −i m Hermitian; exp(m) = V e^{i d} V†.
        let h = HermitianMatrix::new_unchecked(m.map(|z| z * c(0.0, -1.0)));
        let eig = eig_hermitian(&h, 0.0);
        let d = CVec::from_iterator(h.dim(), eig.values.iter().map(|&v| c(v.cos(), v.sin())));
        return &eig.vectors * CMat::from_diagonal(&d) * eig.vectors.adjoint();
    }
    if hermitian_deviation(m) <= NORMALITY_DISPATCH_TOL * scale {
        let h = HermitianMatrix::new_unchecked(m.clone());
        let eig = eig_hermitian(&h, 0.0);
        return eig.map_spectrum(f64::exp);
    }
    expm_pade(m)
}

/// Padé-13 scaling-and-squaring exponential for general complex matrices.
fn expm_pade(a: &CMat) -> CMat {
    const THETA_13: f64 = 5.371920351148152;
    #[rustfmt::skip]
    const B: [f64; 14] = [
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0,
        670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
        960960.0, 16380.0, 182.0, 1.0,
    ];
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let s = if norm1 > THETA_13 {
        (norm1 / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.map(|z| z / c(2.0_f64.powi(s), 0.0));
    let id = CMat::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u_inner = &a6 * (a6.scale(B[13]) + a4.scale(B[11]) + a2.scale(B[9]))
        + a6.scale(B[7])
        + a4.scale(B[5])
        + a2.scale(B[3])
        + id.scale(B[1]);
    let u = &a * u_inner;
    let v = &a6 * (a6.scale(B[12]) + a4.scale(B[10]) + a2.scale(B[8]))
        + a6.scale(B[6])
        + a4.scale(B[4])
        + a2.scale(B[2])
        + id.scale(B[0]);
    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut r = lhs
        .lu()
        .solve(&rhs)
        .expect("Padé denominator is singular; input norm out of range");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Solve G ρ + ρ G = rhs for Hermitian G, with ρ positive definite.
/// In ρ's eigenbasis the solution is G̃_ij = r̃hs_ij / (p_i + p_j).
pub fn solve_sylvester_pos(
    rho: &HermitianMatrix,
    rhs: &HermitianMatrix,
    pd_floor: f64,
) -> Result<HermitianMatrix> {
    check_same_dims(rho.mat(), rhs.mat())?;
    let eig = eig_hermitian(rho, 0.0);
    if eig.min_value() <= pd_floor {
        return Err(Error::NotPositiveDefinite {
            min_eig: eig.min_value(),
            floor: pd_floor,
        });
    }
    Ok(HermitianMatrix::new_unchecked(solve_sylvester_in_basis(
        &eig,
        rhs.mat(),
    )))
}

/// Eigenbasis Sylvester solve for general right-hand sides. A Hermitian rhs
/// yields a Hermitian solution, a skew-Hermitian rhs a skew-Hermitian one.
pub(crate) fn solve_sylvester_in_basis(eig: &EigenSystem, rhs: &CMat) -> CMat {
    let n = eig.dim();
    let mut r = eig.vectors.adjoint() * rhs * &eig.vectors;
    for i in 0..n {
        for j in 0..n {
            r[(i, j)] /= c(eig.values[i] + eig.values[j], 0.0);
        }
    }
    &eig.vectors * r * eig.vectors.adjoint()
}

/// Unitary polar factor of an invertible matrix (U from M = UH, via SVD).
pub fn polar_unitary(m: &CMat) -> CMat {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd requested u");
    let v_t = svd.v_t.expect("svd requested v_t");
    u * v_t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub fn pauli_x() -> CMat {
        CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    pub fn pauli_y() -> CMat {
        CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
    }

    pub fn pauli_z() -> CMat {
        CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
    }

    #[test]
    fn hs_inner_identity_trace() {
        let i2 = CMat::identity(2, 2);
        let v = hs_inner(&i2, &i2).unwrap();
        assert_relative_eq!(v.re, 2.0, epsilon = 1e-15);
        assert_relative_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn hs_inner_pauli_orthogonality() {
        let v = hs_inner(&pauli_x(), &pauli_y()).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn hs_inner_matches_entrywise_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random::complex_matrix(3, &mut rng);
        let b = random::complex_matrix(3, &mut rng);
        // independent oracle: direct double loop
        let mut expected = c(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                expected += a[(i, j)].conj() * b[(i, j)];
            }
        }
        let got = hs_inner(&a, &b).unwrap();
        assert!((got - expected).norm() < 1e-13);
        // conjugate symmetry
        let flipped = hs_inner(&b, &a).unwrap();
        assert!((got - flipped.conj()).norm() < 1e-13);
    }

    #[test]
    fn hs_inner_dimension_mismatch() {
        let a = CMat::identity(2, 2);
        let b = CMat::identity(3, 3);
        assert!(matches!(
            hs_inner(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn metric_examples() {
        let i2 = CMat::identity(2, 2);
        assert_relative_eq!(metric_g(&i2, &i2, 1.0).unwrap(), 4.0, epsilon = 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = random::complex_matrix(3, &mut rng);
        let ix = x.map(|z| z * c(0.0, 1.0));
        assert_relative_eq!(metric_g(&x, &ix, 0.73).unwrap(), 0.0, epsilon = 1e-12);
        let y = random::complex_matrix(3, &mut rng);
        let expected = 2.0 * (x.adjoint() * &y).trace().re;
        assert_relative_eq!(metric_g(&x, &y, 1.0).unwrap(), expected, epsilon = 1e-12);
        // positivity
        assert!(metric_g(&x, &x, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn omega_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = random::complex_matrix(2, &mut rng);
        assert_relative_eq!(symplectic_omega(&x, &x, 1.0).unwrap(), 0.0, epsilon = 1e-13);
        let i2 = CMat::identity(2, 2);
        let ii2 = i2.map(|z| z * c(0.0, 1.0));
        assert_relative_eq!(symplectic_omega(&i2, &ii2, 1.0).unwrap(), 4.0, epsilon = 1e-14);
        let y = random::complex_matrix(2, &mut rng);
        let expected = 2.0 * 1.3 * (x.adjoint() * &y).trace().im;
        assert_relative_eq!(symplectic_omega(&x, &y, 1.3).unwrap(), expected, epsilon = 1e-12);
        // antisymmetry
        assert_relative_eq!(
            symplectic_omega(&x, &y, 1.3).unwrap(),
            -symplectic_omega(&y, &x, 1.3).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn eig_diag_and_degenerate() {
        let m = HermitianMatrix::new(
            CMat::from_diagonal(&CVec::from_vec(vec![c(0.7, 0.0), c(0.3, 0.0)])),
            1e-10,
        )
        .unwrap();
        let eig = eig_hermitian(&m, 1e-8);
        assert_relative_eq!(eig.values[0], 0.3, epsilon = 1e-14);
        assert_relative_eq!(eig.values[1], 0.7, epsilon = 1e-14);
        assert_eq!(eig.clusters, vec![vec![0], vec![1]]);

        let half = HermitianMatrix::new(CMat::identity(2, 2).scale(0.5), 1e-10).unwrap();
        let eig = eig_hermitian(&half, 1e-8);
        assert_eq!(eig.clusters, vec![vec![0, 1]]);
        assert_relative_eq!(eig.values[0], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn eig_qubit_bloch_eigenvalues() {
        // ρ = ½(1 + r n·σ), r = 0.5 → eigenvalues (1±r)/2 = {0.25, 0.75}
        let r = 0.5;
        let (nx, ny, nz) = (1.0 / 3.0_f64.sqrt(), 1.0 / 3.0_f64.sqrt(), 1.0 / 3.0_f64.sqrt());
        let m = (CMat::identity(2, 2)
            + (pauli_x().scale(nx) + pauli_y().scale(ny) + pauli_z().scale(nz)).scale(r))
        .scale(0.5);
        let eig = eig_hermitian(&HermitianMatrix::new(m, 1e-10).unwrap(), 1e-8);
        assert_relative_eq!(eig.values[0], 0.25, epsilon = 1e-12);
        assert_relative_eq!(eig.values[1], 0.75, epsilon = 1e-12);
    }

    #[test]
    fn eig_reconstruction_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for n in [2usize, 5, 8] {
            let h = random::hermitian(n, &mut rng);
            let eig = eig_hermitian(&HermitianMatrix::new(h.clone(), 1e-8).unwrap(), 1e-8);
            let rel = (eig.reconstruct() - &h).norm() / h.norm();
            assert!(rel < 1e-10, "reconstruction rel err {rel:.3e} at n={n}");
            let orth = (eig.vectors.adjoint() * &eig.vectors - CMat::identity(n, n)).norm();
            assert!(orth < 1e-12);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut m = CMat::identity(2, 2);
        m[(0, 1)] = c(0.3, 0.1);
        assert!(matches!(
            eig_hermitian_of(&m, 1e-10, 1e-8),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn expm_zero_is_identity() {
        let z = CMat::zeros(3, 3);
        assert!((matrix_exp(&z) - CMat::identity(3, 3)).norm() < 1e-15);
    }

    #[test]
    fn expm_pauli_closed_form() {
        // exp(iπ σ_z / 2) = diag(i, −i)
        let m = pauli_z().map(|z| z * c(0.0, std::f64::consts::FRAC_PI_2));
        let e = matrix_exp(&m);
        let expected = CMat::from_diagonal(&CVec::from_vec(vec![c(0.0, 1.0), c(0.0, -1.0)]));
        assert!((e - expected).norm() < 1e-14);
    }

    #[test]
    fn expm_skew_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 4, 6] {
            let k = random::skew_hermitian(n, &mut rng);
            let e = matrix_exp(&k);
            let dev = (e.adjoint() * &e - CMat::identity(n, n)).norm();
            assert!(dev < 1e-12, "unitarity dev {dev:.3e}");
        }
    }

    #[test]
    fn expm_general_matches_series() {
        // non-normal input exercises the Padé path
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = random::complex_matrix(4, &mut rng).scale(0.8);
        let e = matrix_exp(&a);
        // Taylor series reference at modest norm
        let mut term = CMat::identity(4, 4);
        let mut sum = CMat::identity(4, 4);
        for k in 1..60 {
            term = (&term * &a).scale(1.0 / k as f64);
            sum += &term;
        }
        assert!((e - sum).norm() < 1e-11);
    }

    #[test]
    fn sylvester_examples() {
        // (I/2, I) → I
        let rho = HermitianMatrix::new(CMat::identity(2, 2).scale(0.5), 1e-10).unwrap();
        let rhs = HermitianMatrix::new(CMat::identity(2, 2), 1e-10).unwrap();
        let g = solve_sylvester_pos(&rho, &rhs, 1e-10).unwrap();
        assert!((g.mat() - CMat::identity(2, 2)).norm() < 1e-13);

        // zero rhs → zero
        let rho = HermitianMatrix::new(
            CMat::from_diagonal(&CVec::from_vec(vec![c(0.8, 0.0), c(0.2, 0.0)])),
            1e-10,
        )
        .unwrap();
        let zero = HermitianMatrix::new(CMat::zeros(2, 2), 1e-10).unwrap();
        let g = solve_sylvester_pos(&rho, &zero, 1e-10).unwrap();
        assert!(g.mat().norm() < 1e-15);
    }

    #[test]
    fn sylvester_residual_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in [2usize, 3, 5] {
            let rho = random::density_with_floor(n, 0.01, &mut rng);
            let rhs = random::hermitian(n, &mut rng);
            let rho_h = HermitianMatrix::new(rho.clone(), 1e-8).unwrap();
            let rhs_h = HermitianMatrix::new(rhs.clone(), 1e-8).unwrap();
            let g = solve_sylvester_pos(&rho_h, &rhs_h, 1e-10).unwrap();
            let resid = (g.mat() * &rho + &rho * g.mat() - &rhs).norm();
            assert!(resid < 1e-10 * rhs.norm().max(1.0), "residual {resid:.3e}");
            assert!(hermitian_deviation(g.mat()) < 1e-12);
        }
    }

    #[test]
    fn sylvester_rejects_singular() {
        let rho = HermitianMatrix::new(
            CMat::from_diagonal(&CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)])),
            1e-10,
        )
        .unwrap();
        let rhs = HermitianMatrix::new(CMat::identity(2, 2), 1e-10).unwrap();
        assert!(matches!(
            solve_sylvester_pos(&rho, &rhs, 1e-10),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn polar_of_unitary_is_itself() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let u = random::unitary(3, &mut rng);
        assert!((polar_unitary(&u) - &u).norm() < 1e-13);
    }
}
