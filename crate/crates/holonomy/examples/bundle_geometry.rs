//! The tangent-space geometry behind the phases, at a random purification:
//! dimensions of the Uhlmann splitting, the momentum level set, the
//! mechanical-connection horizontal space, and the spectrum-changing
//! complement, with q = Σ n_j² over the degeneracy multiplicities.
//!
//!     cargo run --release --example bundle_geometry

use holonomy::bundle::{mech_connection, subspace_basis, Subspace, TangentVector};
use holonomy::random;
use holonomy::{Purification, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> holonomy::Result<()> {
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    for (label, spectrum) in [
        ("nondegenerate", vec![0.5, 0.3, 0.2]),
        ("one double eigenvalue", vec![0.4, 0.4, 0.2]),
        ("fully degenerate", vec![1.0 / 3.0; 3]),
    ] {
        let psi = Purification::new_unchecked(random::purification_with_momentum_spectrum(
            &spectrum, &mut rng,
        ));
        let n = psi.dim();
        let q: usize = psi
            .momentum_eig(tols.degeneracy_tol)
            .clusters
            .iter()
            .map(|c| c.len() * c.len())
            .sum();
        println!("ψ†ψ spectrum {spectrum:?} ({label}): n = {n}, q = {q}");
        for (name, which, formula) in [
            ("Uhlmann vertical", Subspace::UhlmannVertical, n * n),
            ("Uhlmann horizontal", Subspace::UhlmannHorizontal, n * n - 1),
            ("level-set tangent", Subspace::LevelSetTangent, n * n),
            ("mechanical horizontal", Subspace::MechanicalHorizontal, n * n - q),
            ("spectrum-changing", Subspace::SpectralTransverse, q - 1),
            ("stratified horizontal", Subspace::StratifiedHorizontal, n * n - 1),
        ] {
            let basis = subspace_basis(&psi, which, &tols)?;
            println!("  dim {name:<22} = {:>2} (formula {formula})", basis.len());
        }
        println!();
    }

    // the connection form reproduces isotropy generators: A(ψη) = η
    let psi = Purification::new_unchecked(random::purification(3, &mut rng));
    let w_eig = psi.momentum_eig(tols.degeneracy_tol);
    let k = random::skew_hermitian(3, &mut rng);
    let x = TangentVector::new_unchecked(psi.clone(), &k * psi.mat());
    let a = mech_connection(&psi, &x, &w_eig, &tols)?;
    println!(
        "connection value at a random level-set tangent: skew-Hermitian to {:.1e}, commutes with ψ†ψ to {:.1e}",
        holonomy::linalg::skew_deviation(a.mat()),
        (a.mat() * w_eig.reconstruct() - w_eig.reconstruct() * a.mat()).norm(),
    );
    Ok(())
}
