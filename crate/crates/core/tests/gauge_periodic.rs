//! Periodic gauge normalization preserves the spectrum, checked both ways for
//! every `(k, l)` with period `m <= 6`.
//!
//! The oracle uses only LU determinants of explicit symbol matrices. For a
//! tridiagonal periodic symbol, `D(phi) = det(a(phi) - x)` has the form
//! `A + B e^{i phi} + C e^{-i phi}` with `B, C = +-1`, so `x` is in the
//! spectrum iff `-A / B` lies on `[-2, 2]` (when `B = C`) or `-A / (i B)` does
//! (when `B = -C`).

use std::f64::consts::{PI, TAU};

use sign_spectra::linalg::DenseMatrix;
use sign_spectra::poly::DEFAULT_MAX_ITER;
use sign_spectra::{
    gauge_normalize_periodic, periodic_spectrum, roots, ComplexPolynomial, PeriodicOperatorSpec, SignVector, C64,
};

fn symbol(k: &SignVector, l: &SignVector, phi: f64) -> DenseMatrix<C64> {
    let m = k.len();
    let mut a = DenseMatrix::zeros(m, m);
    let s = |v: i8| C64::new(v as f64, 0.0);
    for i in 0..m - 1 {
        a[(i, i + 1)] += s(l.get(i).as_i8());
        a[(i + 1, i)] += s(k.get(i).as_i8());
    }
    a[(0, m - 1)] += s(k.get(m - 1).as_i8()) * C64::from_polar(1.0, phi);
    a[(m - 1, 0)] += s(l.get(m - 1).as_i8()) * C64::from_polar(1.0, -phi);
    a
}

fn det_at(k: &SignVector, l: &SignVector, phi: f64, x: C64) -> C64 {
    symbol(k, l, phi).shifted(x).det()
}

/// Distance of the spectral parameter of `x` from `[-2, 2]`, relative to the
/// size of the constant term.
fn off_spectrum(k: &SignVector, l: &SignVector, x: C64) -> f64 {
    let d0 = det_at(k, l, 0.0, x);
    let dpi = det_at(k, l, PI, x);
    let dhalf = det_at(k, l, PI / 2.0, x);
    let a = (d0 + dpi) / 2.0;
    let b_plus_c = (d0 - dpi) / 2.0;
    let b_minus_c = (dhalf - a) / C64::i();
    let b = (b_plus_c + b_minus_c) / 2.0;
    let c = (b_plus_c - b_minus_c) / 2.0;
    assert!((b.norm() - 1.0).abs() < 1e-9 && (c.norm() - 1.0).abs() < 1e-9, "b={b} c={c}");
    let t = if (b - c).norm() < 1e-9 { -a / b } else { -a / (C64::i() * b) };
    let scale = 1.0 + a.norm();
    (t.im.abs() + (t.re.abs() - 2.0).max(0.0)) / scale
}

/// Eigenvalues of the `(k, l)` symbol at `phi`, from the characteristic
/// polynomial interpolated on the unit circle.
fn symbol_eigenvalues(k: &SignVector, l: &SignVector, phi: f64) -> Vec<C64> {
    let m = k.len();
    let nodes = m + 1;
    let values: Vec<C64> = (0..nodes)
        .map(|s| det_at(k, l, phi, C64::from_polar(1.0, TAU * s as f64 / nodes as f64)))
        .collect();
    let coeffs: Vec<C64> = (0..nodes)
        .map(|j| {
            values
                .iter()
                .enumerate()
                .map(|(s, v)| v * C64::from_polar(1.0, -TAU * (j * s) as f64 / nodes as f64))
                .sum::<C64>()
                / nodes as f64
        })
        .map(|c| if c.norm() < 1e-12 { C64::new(0.0, 0.0) } else { c })
        .collect();
    roots(&ComplexPolynomial::new(coeffs).unwrap(), 1e-10, DEFAULT_MAX_ITER).unwrap()
}

#[test]
fn periodic_gauge_preserves_spectrum() {
    let ones = |m| SignVector::ones(m).unwrap();
    let mut worst_forward = 0.0f64;
    let mut worst_backward = 0.0f64;
    for m in 1..=6 {
        for kmask in 0..1u64 << m {
            for lmask in 0..1u64 << m {
                let k = SignVector::from_mask(kmask, m);
                let l = SignVector::from_mask(lmask, m);
                let out = gauge_normalize_periodic(&PeriodicOperatorSpec::new(k.clone(), l.clone()).unwrap());
                let kt = out.k().clone();

                for z in periodic_spectrum::<f64>(&kt, 9, 1e-10).unwrap().values() {
                    worst_forward = worst_forward.max(off_spectrum(&k, &l, z));
                }
                for s in 0..9 {
                    let phi = TAU * s as f64 / 9.0;
                    for z in symbol_eigenvalues(&k, &l, phi) {
                        worst_backward = worst_backward.max(off_spectrum(&kt, &ones(kt.len()), z));
                    }
                }
            }
        }
    }
    assert!(worst_forward <= 1e-9, "normalized cloud off the original spectrum by {worst_forward:e}");
    assert!(worst_backward <= 1e-9, "original cloud off the normalized spectrum by {worst_backward:e}");
}

#[test]
fn oracle_rejects_wrong_spectrum() {
    // '+' and '-' have spectra [-2, 2] and i[-2, 2]
    let p: SignVector = "+".parse().unwrap();
    let q: SignVector = "-".parse().unwrap();
    let one = SignVector::ones(1).unwrap();
    assert!(off_spectrum(&p, &one, C64::new(1.5, 0.0)) < 1e-12);
    assert!(off_spectrum(&p, &one, C64::new(0.0, 1.5)) > 0.1);
    assert!(off_spectrum(&q, &one, C64::new(0.0, 1.5)) < 1e-12);
    assert!(off_spectrum(&q, &one, C64::new(1.5, 0.0)) > 0.1);
}
