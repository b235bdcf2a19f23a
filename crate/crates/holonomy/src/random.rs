//! Seeded random generators for matrices and curves. Used by the
//! property-check suites behind `verify-paper` and by the tests.

use rand::Rng;

use crate::linalg::{c, hermitian_part, skew_part, CMat, CVec};

/// Standard normal via Box-Muller.
pub fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Matrix of iid complex Gaussians.
pub fn complex_matrix(n: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(n, n, |_, _| c(normal(rng), normal(rng)))
}

pub fn hermitian(n: usize, rng: &mut impl Rng) -> CMat {
    hermitian_part(&complex_matrix(n, rng))
}

pub fn skew_hermitian(n: usize, rng: &mut impl Rng) -> CMat {
    skew_part(&complex_matrix(n, rng))
}

/// Haar-ish unitary from the QR decomposition of a Gaussian matrix.
pub fn unitary(n: usize, rng: &mut impl Rng) -> CMat {
    let a = complex_matrix(n, rng);
    let qr = a.qr();
    let q = qr.q();
    let r = qr.r();
    // fix column phases so the distribution does not depend on QR conventions
    let phases = CVec::from_iterator(
        n,
        (0..n).map(|i| {
            let d = r[(i, i)];
            if d.norm() < 1e-12 {
                c(1.0, 0.0)
            } else {
                d / d.norm()
            }
        }),
    );
    q * CMat::from_diagonal(&phases)
}

/// Random density matrix with eigenvalues bounded below by `floor`.
pub fn density_with_floor(n: usize, floor: f64, rng: &mut impl Rng) -> CMat {
    let u = unitary(n, rng);
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let sum: f64 = raw.iter().sum();
    // mix toward uniform so every eigenvalue clears the floor
    let lam = 1.0 - n as f64 * floor;
    let p: Vec<f64> = raw.iter().map(|&x| floor + lam * x / sum).collect();
    let d = CVec::from_iterator(n, p.iter().map(|&x| c(x, 0.0)));
    &u * CMat::from_diagonal(&d) * u.adjoint()
}

/// Random density matrix with prescribed eigenvalues (e.g. exact degeneracies).
pub fn density_with_spectrum(spectrum: &[f64], rng: &mut impl Rng) -> CMat {
    let n = spectrum.len();
    let u = unitary(n, rng);
    let d = CVec::from_iterator(n, spectrum.iter().map(|&x| c(x, 0.0)));
    &u * CMat::from_diagonal(&d) * u.adjoint()
}

/// Random purification: unit Hilbert-Schmidt norm with singular values kept
/// away from zero by resampling.
pub fn purification(n: usize, rng: &mut impl Rng) -> CMat {
    loop {
        let a = complex_matrix(n, rng);
        let m = &a / c(a.norm(), 0.0);
        let sv = m.clone().svd(false, false).singular_values;
        if sv.iter().cloned().fold(f64::MAX, f64::min) > 0.05 {
            return m;
        }
    }
}

/// Random purification whose momentum ψ†ψ has the prescribed spectrum.
pub fn purification_with_momentum_spectrum(spectrum: &[f64], rng: &mut impl Rng) -> CMat {
    let n = spectrum.len();
    let a = unitary(n, rng);
    let b = unitary(n, rng);
    let d = CVec::from_iterator(n, spectrum.iter().map(|&x| c(x.sqrt(), 0.0)));
    // ψ = A √D B† gives ψ†ψ = B D B†
    &a * CMat::from_diagonal(&d) * b.adjoint()
}

/// Normalized probability vector with optional exact degeneracies, all entries
/// bounded below.
pub fn spectrum(n: usize, degeneracies: &[usize], rng: &mut impl Rng) -> Vec<f64> {
    // degeneracies lists multiplicities summing to n, e.g. [2, 1] for one double
    assert_eq!(degeneracies.iter().sum::<usize>(), n);
    loop {
        let raw: Vec<f64> = (0..degeneracies.len())
            .map(|_| rng.random::<f64>() + 0.15)
            .collect();
        let total: f64 = raw
            .iter()
            .zip(degeneracies)
            .map(|(&x, &m)| x * m as f64)
            .sum();
        let mut p = Vec::with_capacity(n);
        for (x, &m) in raw.iter().zip(degeneracies) {
            for _ in 0..m {
                p.push(x / total);
            }
        }
        // reject nearly-coincident distinct levels so clustering is unambiguous
        let mut sorted: Vec<f64> = raw.iter().map(|&x| x / total).collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ok = sorted.windows(2).all(|w| w[1] - w[0] > 1e-3);
        if ok {
            return p;
        }
    }
}
