//! Geometry of the purification bundle Π(ψ) = ψψ† over the invertible density
//! operators: the Uhlmann vertical/horizontal splitting, the momentum map
//! ψ ↦ ψ†ψ, the mechanical connection on a momentum level set, and the
//! subspace decompositions used by the stratified connection.
//!
//! All subspaces here are real-linear; rank and orthogonality computations run
//! over the realified matrix space with inner product Re Tr(X†Y).

use crate::error::{Error, Result};
use crate::linalg::{
    self, c, eig_hermitian, hermitian_part, hs_inner, CMat, EigenSystem, HermitianMatrix,
    SkewHermitianMatrix,
};
use crate::tol::Tolerances;

/// An invertible density operator: Hermitian, unit trace, eigenvalues above
/// the positive-definiteness floor.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    mat: CMat,
}

impl DensityOperator {
    pub fn new(mat: CMat, tols: &Tolerances) -> Result<Self> {
        let h = HermitianMatrix::new(mat, tols.hermiticity_tol)?;
        let trace = h.mat().trace();
        if (trace.re - 1.0).abs() > tols.trace_tol || trace.im.abs() > tols.trace_tol {
            return Err(Error::NotUnitTrace {
                trace: trace.re,
                tol: tols.trace_tol,
            });
        }
        let eig = eig_hermitian(&h, tols.degeneracy_tol);
        if eig.min_value() < tols.pd_floor {
            return Err(Error::NotPositiveDefinite {
                min_eig: eig.min_value(),
                floor: tols.pd_floor,
            });
        }
        Ok(Self {
            mat: h.into_inner(),
        })
    }

    pub fn new_unchecked(mat: CMat) -> Self {
        Self { mat }
    }

    /// ρ = ½(I + x σ_x + y σ_y + z σ_z); requires the Bloch vector strictly
    /// inside the unit ball.
    pub fn qubit_from_bloch(x: f64, y: f64, z: f64, tols: &Tolerances) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let r = (x * x + y * y + z * z).sqrt();
        if r >= 1.0 - tols.pd_margin {
            return Err(Error::BlochExitsBall { t: f64::NAN, r });
        }
        let mat = CMat::from_row_slice(
            2,
            2,
            &[
                c(0.5 * (1.0 + z), 0.0),
                c(0.5 * x, -0.5 * y),
                c(0.5 * x, 0.5 * y),
                c(0.5 * (1.0 - z), 0.0),
            ],
        );
        Ok(Self { mat })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            mat: CMat::identity(n, n).scale(1.0 / n as f64),
        }
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn eig(&self, degeneracy_tol: f64) -> EigenSystem {
        eig_hermitian(
            &HermitianMatrix::new_unchecked(self.mat.clone()),
            degeneracy_tol,
        )
    }

    /// Canonical purification √ρ (principal square root).
    pub fn sqrt_purification(&self, tols: &Tolerances) -> Purification {
        let eig = self.eig(tols.degeneracy_tol);
        Purification::new_unchecked(eig.map_spectrum(f64::sqrt))
    }
}

/// A purification: an invertible operator of unit Hilbert-Schmidt norm. The
/// state it purifies is Π(ψ) = ψψ†.
#[derive(Debug, Clone, PartialEq)]
pub struct Purification {
    mat: CMat,
}

impl Purification {
    pub fn new(mat: CMat, tols: &Tolerances) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        let norm = mat.norm();
        if (norm - 1.0).abs() > tols.norm_tol {
            return Err(Error::NotUnitNorm {
                norm,
                tol: tols.norm_tol,
            });
        }
        let sv = mat.clone().svd(false, false).singular_values;
        let min_sv = sv.iter().cloned().fold(f64::MAX, f64::min);
        if min_sv < tols.sv_floor {
            return Err(Error::NearSingular {
                sv: min_sv,
                floor: tols.sv_floor,
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

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Eigensystem of the momentum representative ψ†ψ.
    pub fn momentum_eig(&self, degeneracy_tol: f64) -> EigenSystem {
        let w = hermitian_part(&(self.mat.adjoint() * &self.mat));
        eig_hermitian(&HermitianMatrix::new_unchecked(w), degeneracy_tol)
    }
}

/// A tangent vector to the unit sphere of operators at a purification:
/// Re⟨ψ, X⟩ = 0.
#[derive(Debug, Clone)]
pub struct TangentVector {
    pub base: Purification,
    pub dir: CMat,
}

impl TangentVector {
    pub fn new(base: Purification, dir: CMat, tols: &Tolerances) -> Result<Self> {
        if dir.nrows() != base.dim() || dir.ncols() != base.dim() {
            return Err(Error::DimensionMismatch {
                left: base.dim(),
                right: dir.nrows(),
            });
        }
        let radial = hs_inner(base.mat(), &dir)?.re;
        if radial.abs() > tols.tangency_tol * dir.norm().max(1.0) {
            return Err(Error::NotTangent {
                residual: radial.abs(),
                tol: tols.tangency_tol,
            });
        }
        Ok(Self { base, dir })
    }

    pub fn new_unchecked(base: Purification, dir: CMat) -> Self {
        Self { base, dir }
    }
}

/// The momentum of a purification, stored through its Hermitian representative
/// ψ†ψ (the functional ξ ↦ iħ Tr(ψ†ψ ξ) is determined by it).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumValue {
    mat: CMat,
}

impl MomentumValue {
    pub fn mat(&self) -> &CMat {
        &self.mat
    }
}

/// Bundle projection Π(ψ) = ψψ†.
pub fn project(psi: &Purification) -> DensityOperator {
    DensityOperator::new_unchecked(hermitian_part(&(psi.mat() * psi.mat().adjoint())))
}

/// Momentum map representative ψ†ψ.
pub fn momentum(psi: &Purification) -> MomentumValue {
    MomentumValue {
        mat: hermitian_part(&(psi.mat().adjoint() * psi.mat())),
    }
}

/// G-orthogonal projection of a tangent vector onto the Uhlmann vertical space
/// {ψξ : ξ skew-Hermitian}. The residual X − P(X) satisfies the Uhlmann
/// horizontality equation X†ψ − ψ†X = 0.
///
/// The projection solves W ξ + ξ W = S − S† with W = ψ†ψ and S = ψ†X.
pub fn uhlmann_vertical_project(x: &TangentVector, tols: &Tolerances) -> TangentVector {
    let psi = x.base.mat();
    let w_eig = x.base.momentum_eig(tols.degeneracy_tol);
    let s = psi.adjoint() * &x.dir;
    let rhs = &s - s.adjoint();
    let xi = linalg::solve_sylvester_in_basis(&w_eig, &rhs);
    TangentVector::new_unchecked(x.base.clone(), psi * xi)
}

/// G-orthogonal projection of a tangent vector onto Ker dJ_ψ = {Kψ : K
/// skew-Hermitian} = {X : ψ†X skew-Hermitian}, the tangent space of the
/// momentum level set. Solves K ρ + ρ K = Xψ† − ψX† with ρ = ψψ†.
pub fn kernel_dj_project(x: &TangentVector, tols: &Tolerances) -> TangentVector {
    let psi = x.base.mat();
    let rho = project(&x.base);
    let rho_eig = rho.eig(tols.degeneracy_tol);
    let rhs = &x.dir * psi.adjoint() - psi * x.dir.adjoint();
    let k = linalg::solve_sylvester_in_basis(&rho_eig, &rhs);
    TangentVector::new_unchecked(x.base.clone(), k * psi)
}

/// The mechanical connection form on the level set S(ψ),
///
///   A_φ(X) = Σ_j P_j φ†X P_j (ψ†ψ)⁻¹,
///
/// with P_j the orthogonal projectors onto the degeneracy eigenspaces of the
/// reference momentum ψ†ψ. The value lies in the isotropy algebra u(ψ)
/// (skew-Hermitian, commuting with ψ†ψ), and A_φ(φη) = η for η ∈ u(ψ).
///
/// Preconditions: φ†φ = ψ†ψ within `level_tol`, and X tangent to the level
/// set (X†φ + φ†X = 0).
pub fn mech_connection(
    phi: &Purification,
    x: &TangentVector,
    ref_spectrum: &EigenSystem,
    tols: &Tolerances,
) -> Result<SkewHermitianMatrix> {
    let n = phi.dim();
    if ref_spectrum.dim() != n || x.dir.nrows() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: ref_spectrum.dim(),
        });
    }
    let w_ref = ref_spectrum.reconstruct();
    let drift = (phi.mat().adjoint() * phi.mat() - &w_ref).norm();
    if drift > tols.level_tol {
        return Err(Error::LevelSetDrift {
            drift,
            tol: tols.level_tol,
        });
    }
    let tangency = (x.dir.adjoint() * phi.mat() + phi.mat().adjoint() * &x.dir).norm();
    if tangency > tols.tangency_tol * x.dir.norm().max(1.0) {
        return Err(Error::NotTangent {
            residual: tangency,
            tol: tols.tangency_tol,
        });
    }
    Ok(SkewHermitianMatrix::new_unchecked(mech_connection_raw(
        phi.mat(),
        &x.dir,
        ref_spectrum,
    )))
}

/// Unvalidated connection evaluation: block-diagonalize φ†X in the reference
/// eigenbasis, divide by the eigenvalues, skew-project to scrub rounding.
pub(crate) fn mech_connection_raw(phi: &CMat, dir: &CMat, ref_spectrum: &EigenSystem) -> CMat {
    let v = &ref_spectrum.vectors;
    let m = v.adjoint() * (phi.adjoint() * dir) * v;
    let n = ref_spectrum.dim();
    let mut a = CMat::zeros(n, n);
    for cluster in &ref_spectrum.clusters {
        for &k in cluster {
            for &l in cluster {
                a[(k, l)] = m[(k, l)] / c(ref_spectrum.values[l], 0.0);
            }
        }
    }
    let full = v * a * v.adjoint();
    linalg::skew_part(&full)
}

/// The real subspaces of T_ψ S°(H) distinguished by the two connections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    /// {ψξ : ξ skew-Hermitian}, the fiber directions of Π. Dimension n².
    UhlmannVertical,
    /// {X : X†ψ − ψ†X = 0} ∩ T_ψS°, Uhlmann's horizontal space. Dimension n²−1.
    UhlmannHorizontal,
    /// Ker dJ_ψ = {X : X†ψ + ψ†X = 0}, tangent to the momentum level set.
    /// Dimension n².
    LevelSetTangent,
    /// Kernel of the mechanical connection within the level-set tangent space.
    /// Dimension n² − q.
    MechanicalHorizontal,
    /// Orthogonal complement of the isospectral stratum: directions that
    /// change the spectrum of ψψ†. Dimension q − 1.
    SpectralTransverse,
    /// MechanicalHorizontal ⊕ SpectralTransverse, the stratified connection's
    /// horizontal space. Dimension n² − 1.
    StratifiedHorizontal,
}

pub(crate) fn skew_basis(n: usize) -> Vec<CMat> {
    let mut basis = Vec::with_capacity(n * n);
    for k in 0..n {
        let mut m = CMat::zeros(n, n);
        m[(k, k)] = c(0.0, 1.0);
        basis.push(m);
    }
    for k in 0..n {
        for l in (k + 1)..n {
            let mut m = CMat::zeros(n, n);
            m[(k, l)] = c(1.0, 0.0);
            m[(l, k)] = c(-1.0, 0.0);
            basis.push(m);
            let mut m = CMat::zeros(n, n);
            m[(k, l)] = c(0.0, 1.0);
            m[(l, k)] = c(0.0, 1.0);
            basis.push(m);
        }
    }
    basis
}

fn hermitian_basis(n: usize) -> Vec<CMat> {
    skew_basis(n)
        .into_iter()
        .map(|m| m.map(|z| z * c(0.0, -1.0)))
        .collect()
}

/// Full real basis of the n×n complex matrices (dimension 2n²).
fn full_real_basis(n: usize) -> Vec<CMat> {
    let mut basis = hermitian_basis(n);
    basis.extend(skew_basis(n));
    basis
}

/// Modified Gram-Schmidt over the realified matrix space (inner product
/// Re Tr(X†Y)), with a second orthogonalization pass and rank-revealing drop.
pub(crate) fn gram_schmidt_real(vectors: Vec<CMat>, drop_tol: f64) -> Vec<CMat> {
    let mut basis: Vec<CMat> = Vec::new();
    for mut v in vectors {
        let initial = v.norm().max(1.0);
        for _ in 0..2 {
            for b in &basis {
                let coeff = hs_inner(b, &v).unwrap().re;
                v -= b.scale(coeff);
            }
        }
        if v.norm() > drop_tol * initial {
            let unit = v.scale(1.0 / v.norm());
            basis.push(unit);
        }
    }
    basis
}

pub(crate) fn project_out(basis: &[CMat], v: &CMat) -> CMat {
    let mut out = v.clone();
    for _ in 0..2 {
        for b in basis {
            let coeff = hs_inner(b, &out).unwrap().re;
            out -= b.scale(coeff);
        }
    }
    out
}

/// G-orthonormal basis of the requested subspace, built by Gram-Schmidt from
/// generating sets. The output length must match the dimension formula
/// (n², n²−1, n², n²−q, q−1, n²−1 respectively, with q = Σ n_j²); a mismatch
/// signals an inconsistent degeneracy clustering and is an error.
pub fn subspace_basis(psi: &Purification, which: Subspace, tols: &Tolerances) -> Result<Vec<CMat>> {
    let n = psi.dim();
    let w_eig = psi.momentum_eig(tols.degeneracy_tol);
    let q = w_eig.isotropy_dimension();
    let expected = match which {
        Subspace::UhlmannVertical | Subspace::LevelSetTangent => n * n,
        Subspace::UhlmannHorizontal | Subspace::StratifiedHorizontal => n * n - 1,
        Subspace::MechanicalHorizontal => n * n - q,
        Subspace::SpectralTransverse => q - 1,
    };
    let basis = raw_subspace_basis(psi, which, &w_eig, tols);
    if basis.len() != expected {
        return Err(Error::DegenerateBasis {
            expected,
            got: basis.len(),
        });
    }
    Ok(basis)
}

fn raw_subspace_basis(
    psi: &Purification,
    which: Subspace,
    w_eig: &EigenSystem,
    tols: &Tolerances,
) -> Vec<CMat> {
    let n = psi.dim();
    let p = psi.mat();
    let drop = tols.basis_drop_tol;
    match which {
        Subspace::UhlmannVertical => {
            let gens: Vec<CMat> = skew_basis(n).into_iter().map(|xi| p * xi).collect();
            gram_schmidt_real(gens, drop)
        }
        Subspace::LevelSetTangent => {
            let gens: Vec<CMat> = skew_basis(n).into_iter().map(|k| k * p).collect();
            gram_schmidt_real(gens, drop)
        }
        Subspace::UhlmannHorizontal => {
            let rho = project(psi);
            let rho_sq = (rho.mat() * rho.mat()).trace().re;
            let gens: Vec<CMat> = hermitian_basis(n)
                .into_iter()
                .map(|h| {
                    let t = (&h * rho.mat()).trace().re;
                    let g = h - rho.mat().scale(t / rho_sq);
                    g * p
                })
                .collect();
            gram_schmidt_real(gens, drop)
        }
        Subspace::MechanicalHorizontal => {
            let gens: Vec<CMat> = skew_basis(n)
                .into_iter()
                .map(|k| {
                    let x = k * p;
                    let a = mech_connection_raw(p, &x, w_eig);
                    &x - p * a
                })
                .collect();
            gram_schmidt_real(gens, drop)
        }
        Subspace::SpectralTransverse => {
            // complement of T_ψQ(ψ) = V + Ker dJ within the sphere tangent space
            let mut stratum: Vec<CMat> = skew_basis(n).into_iter().map(|xi| p * xi).collect();
            stratum.extend(skew_basis(n).into_iter().map(|k| k * p));
            let stratum = gram_schmidt_real(stratum, drop);
            let sphere = sphere_tangent_basis(psi, drop);
            let rest: Vec<CMat> = sphere.iter().map(|b| project_out(&stratum, b)).collect();
            gram_schmidt_real(rest, drop)
        }
        Subspace::StratifiedHorizontal => {
            let mut gens = raw_subspace_basis(psi, Subspace::MechanicalHorizontal, w_eig, tols);
            gens.extend(raw_subspace_basis(psi, Subspace::SpectralTransverse, w_eig, tols));
            gram_schmidt_real(gens, drop)
        }
    }
}

/// Orthonormal basis of T_ψS°(H) = {X : Re⟨ψ, X⟩ = 0}, dimension 2n²−1.
fn sphere_tangent_basis(psi: &Purification, drop_tol: f64) -> Vec<CMat> {
    let radial = psi.mat().clone();
    let gens: Vec<CMat> = full_real_basis(psi.dim())
        .into_iter()
        .map(|b| {
            let coeff = hs_inner(&radial, &b).unwrap().re;
            b - radial.scale(coeff)
        })
        .collect();
    gram_schmidt_real(gens, drop_tol)
}
