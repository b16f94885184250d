//! Finite tridiagonal sign matrices: continuant characteristic polynomials,
//! eigenvalues, and the exhaustive enumeration of `sigma_n`.
//!
//! With the superdiagonal gauged to ones, `det(A - x I)` for the
//! `(n + 1) x (n + 1)` matrix with subdiagonal `k` obeys
//!
//! ```text
//! D_0 = 1,  D_1 = -x,  D_{j+1} = -x D_j - k_j D_{j-1}.
//! ```

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::cloud::{SpectrumCloud, Tag};
use crate::error::{Error, Result};
use crate::poly::{int_roots, IntPolynomial};
use crate::scalar::{cmp_complex, Real};
use crate::sign::{Sign, SignVector};

/// Default ceiling on `n` for [`enumerate_sigma`]; `2^16` matrices.
pub const DEFAULT_ENUMERATION_CAP: usize = 16;

/// Exact coefficients are only produced up to this length.
pub const EXACT_COEFF_MAX_N: usize = 64;

/// `D_{n+1}(x) = det(A - x I)` with exact integer coefficients.
pub fn charpoly_finite(k: &SignVector) -> IntPolynomial {
    let minus_x = IntPolynomial::monomial(-1, 1);
    let mut prev = IntPolynomial::constant(1);
    let mut cur = minus_x.clone();
    for s in k.iter() {
        let next = match s {
            Sign::Plus => cur.mul(&minus_x).sub(&prev),
            Sign::Minus => cur.mul(&minus_x).add(&prev),
        };
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Numerical continuant value at a point.
///
/// The true determinant is `value * 2^exponent` and the magnitude bound is
/// `scale * 2^exponent`; the common factor is pulled out only when the
/// recursion would otherwise overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuantEval<T> {
    pub value: Complex<T>,
    pub scale: T,
    pub exponent: i32,
}

impl<T: Real> ContinuantEval<T> {
    pub fn normalized_residual(&self) -> T {
        if self.value.is_zero() {
            T::zero()
        } else {
            self.value.norm() / self.scale
        }
    }
}

/// Runs the continuant recursion at `x`, with the magnitude bound
/// `S_0 = 1, S_1 = |x|, S_{j+1} = |x| S_j + S_{j-1}`.
pub fn charpoly_eval_at<T: Real>(k: &SignVector, x: Complex<T>) -> ContinuantEval<T> {
    let r = x.norm();
    let mut d_prev = Complex::new(T::one(), T::zero());
    let mut d_cur = -x;
    let mut s_prev = T::one();
    let mut s_cur = r;
    let mut exponent = 0i32;
    let limit = T::max_value().sqrt().sqrt();
    let shrink = T::one() / limit;
    let shrink_log2 = limit.log2().round().to_i32().unwrap_or(0);
    for s in k.iter() {
        let d_next = match s {
            Sign::Plus => -x * d_cur - d_prev,
            Sign::Minus => -x * d_cur + d_prev,
        };
        let s_next = r * s_cur + s_prev;
        d_prev = d_cur;
        d_cur = d_next;
        s_prev = s_cur;
        s_cur = s_next;
        if s_cur > limit {
            d_prev = d_prev * shrink;
            d_cur = d_cur * shrink;
            s_prev = s_prev * shrink;
            s_cur = s_cur * shrink;
            exponent += shrink_log2;
        }
    }
    ContinuantEval {
        value: d_cur,
        scale: s_cur,
        exponent,
    }
}

/// Spectrum of the finite matrix with subdiagonal `k`, tagged `fin:n=|k|`.
pub fn finite_eigenvalues<T: Real>(k: &SignVector, tol: T) -> Result<SpectrumCloud<T>> {
    Ok(SpectrumCloud::tagged(eigenvalues_of(k, tol)?, Tag::finite(k.len())))
}

fn eigenvalues_of<T: Real>(k: &SignVector, tol: T) -> Result<Vec<Complex<T>>> {
    if k.len() > EXACT_COEFF_MAX_N {
        return Err(Error::Argument(format!(
            "exact characteristic polynomials are limited to n <= {EXACT_COEFF_MAX_N}"
        )));
    }
    int_roots(&charpoly_finite(k), tol)
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerationOptions {
    pub cap: usize,
    /// Solve only one of each reversal pair `k`, `rev(k)`; the reversed
    /// matrix is similar to the transpose, so spectra coincide.
    pub canonical: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            cap: DEFAULT_ENUMERATION_CAP,
            canonical: false,
        }
    }
}

fn reverse_bits(mask: u64, n: usize) -> u64 {
    mask.reverse_bits() >> (64 - n)
}

/// Union of the spectra of all `2^n` sign matrices of size `n + 1`, sorted by
/// `(re, im)`.
pub fn enumerate_sigma<T: Real>(n: usize, tol: T, opts: EnumerationOptions) -> Result<SpectrumCloud<T>> {
    if n == 0 {
        return Err(Error::Argument("n must be >= 1".into()));
    }
    if n > opts.cap || n > 63 {
        return Err(Error::CapExceeded { n, cap: opts.cap.min(63) });
    }
    let per_mask: Vec<Vec<Complex<T>>> = (0..1u64 << n)
        .into_par_iter()
        .filter_map(|mask| {
            let copies = if opts.canonical {
                let rev = reverse_bits(mask, n);
                match rev.cmp(&mask) {
                    std::cmp::Ordering::Less => return None,
                    std::cmp::Ordering::Equal => 1,
                    std::cmp::Ordering::Greater => 2,
                }
            } else {
                1
            };
            Some(eigenvalues_of(&SignVector::from_mask(mask, n), tol).map(|ev| {
                let mut out = Vec::with_capacity(ev.len() * copies);
                for _ in 0..copies {
                    out.extend_from_slice(&ev);
                }
                out
            }))
        })
        .collect::<Result<_>>()?;
    let mut values: Vec<Complex<T>> = per_mask.into_iter().flatten().collect();
    values.par_sort_by(cmp_complex);
    Ok(SpectrumCloud::tagged(values, Tag::finite(n)))
}

/// `sigma_1 ∪ ... ∪ sigma_n`, sorted.
pub fn enumerate_sigma_accumulated<T: Real>(
    n: usize,
    tol: T,
    opts: EnumerationOptions,
) -> Result<SpectrumCloud<T>> {
    let mut acc = SpectrumCloud::new();
    for size in 1..=n {
        acc.merge(enumerate_sigma(size, tol, opts)?);
    }
    acc.sort();
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int_charpoly_oracle;
    use crate::sign::TridiagSignMatrix;

    type C = Complex<f64>;

    fn sv(s: &str) -> SignVector {
        s.parse().unwrap()
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(charpoly_finite(&sv("+")), IntPolynomial::from_i64(&[-1, 0, 1]));
        assert_eq!(charpoly_finite(&sv("-")), IntPolynomial::from_i64(&[1, 0, 1]));
        assert_eq!(charpoly_finite(&sv("++")), IntPolynomial::from_i64(&[0, 2, 0, -1]));
    }

    #[test]
    fn charpoly_agrees_with_dense_oracle() {
        for n in 1..=8 {
            for mask in 0..1u64 << n {
                let k = SignVector::from_mask(mask, n);
                let dense = TridiagSignMatrix::normalized(k.clone()).dense::<i64>();
                let oracle = int_charpoly_oracle(&dense).unwrap();
                // det(A - xI) = (-1)^{n+1} det(xI - A)
                let expected = if (n + 1) % 2 == 0 { oracle } else { oracle.neg() };
                assert_eq!(charpoly_finite(&k), expected, "k = {k}");
            }
        }
    }

    #[test]
    fn eval_examples() {
        let e = charpoly_eval_at(&sv("++"), C::new(2f64.sqrt(), 0.0));
        assert!(e.value.norm() <= 1e-12 * e.scale);
        let e = charpoly_eval_at(&sv("+"), C::new(0.0, 0.0));
        assert_eq!((e.value, e.scale, e.exponent), (C::new(-1.0, 0.0), 1.0, 0));
    }

    #[test]
    fn eval_at_zero_matches_exact_constant_term() {
        for n in 1..=10 {
            for mask in 0..1u64 << n {
                let k = SignVector::from_mask(mask, n);
                let exact = charpoly_finite(&k).coeff(0);
                let e = charpoly_eval_at(&k, C::new(0.0, 0.0));
                assert_eq!(e.value, C::new(num_traits::ToPrimitive::to_f64(&exact).unwrap(), 0.0));
            }
        }
    }

    #[test]
    fn eval_survives_huge_sizes() {
        let k = SignVector::ones(5000).unwrap();
        let e = charpoly_eval_at(&k, C::new(1.9, 0.3));
        assert!(e.exponent > 0);
        assert!(e.value.re.is_finite() && e.scale.is_finite());
        // all-ones: eigenvalues 2 cos(j pi / 5002); j = 1 is a root
        let root = 2.0 * (std::f64::consts::PI / 5002.0).cos();
        assert!(charpoly_eval_at(&k, C::new(root, 0.0)).normalized_residual() < 1e-10);
    }

    #[test]
    fn eigenvalue_examples() {
        let ev = finite_eigenvalues(&sv("+"), 1e-10).unwrap();
        assert!(crate::cloud::multisets_match(&ev.values(), &[C::new(1.0, 0.0), C::new(-1.0, 0.0)], 1e-12));
        assert_eq!(ev.points()[0].tag.as_str(), "fin:n=1");
        let ev = finite_eigenvalues(&sv("-"), 1e-10).unwrap();
        assert!(crate::cloud::multisets_match(&ev.values(), &[C::new(0.0, 1.0), C::new(0.0, -1.0)], 1e-12));
        let s = 2f64.sqrt();
        let ev = finite_eigenvalues(&sv("++"), 1e-10).unwrap();
        assert!(crate::cloud::multisets_match(
            &ev.values(),
            &[C::new(0.0, 0.0), C::new(s, 0.0), C::new(-s, 0.0)],
            1e-12
        ));
    }

    #[test]
    fn enumerate_small() {
        let c = enumerate_sigma::<f64>(1, 1e-10, EnumerationOptions::default()).unwrap();
        let expected = [C::new(1.0, 0.0), C::new(-1.0, 0.0), C::new(0.0, 1.0), C::new(0.0, -1.0)];
        assert!(crate::cloud::multisets_match(&c.values(), &expected, 1e-12));
        let c2 = enumerate_sigma::<f64>(2, 1e-10, EnumerationOptions::default()).unwrap();
        assert_eq!(c2.len(), 4 * 3);
        let s = 2f64.sqrt();
        for target in [C::new(0.0, 0.0), C::new(s, 0.0), C::new(-s, 0.0)] {
            assert!(c2.values().iter().any(|z| (z - target).norm() < 1e-12));
        }
    }

    #[test]
    fn enumerate_refuses_above_cap() {
        let opts = EnumerationOptions { cap: 4, canonical: false };
        assert!(matches!(
            enumerate_sigma::<f64>(5, 1e-10, opts),
            Err(Error::CapExceeded { n: 5, cap: 4 })
        ));
    }

    #[test]
    fn canonical_enumeration_matches_naive() {
        for n in 1..=8 {
            let naive = enumerate_sigma::<f64>(n, 1e-10, EnumerationOptions::default()).unwrap();
            let canon = enumerate_sigma::<f64>(
                n,
                1e-10,
                EnumerationOptions { canonical: true, ..Default::default() },
            )
            .unwrap();
            assert_eq!(naive, canon, "n = {n}");
        }
    }

    #[test]
    fn enumeration_is_closed_under_conjugation_and_negation() {
        for n in 1..=7 {
            let c = enumerate_sigma::<f64>(n, 1e-10, EnumerationOptions::default()).unwrap();
            let v = c.values();
            let conj: Vec<C> = v.iter().map(|z| z.conj()).collect();
            let neg: Vec<C> = v.iter().map(|z| -z).collect();
            assert!(crate::cloud::multisets_match(&v, &conj, 1e-8), "conj n={n}");
            assert!(crate::cloud::multisets_match(&v, &neg, 1e-8), "neg n={n}");
        }
    }

    proptest::proptest! {
        #[test]
        fn eval_matches_coefficients(mask in 0u64..(1 << 32), n in 1usize..=32, re in -2.5f64..2.5, im in -2.5f64..2.5) {
            let k = SignVector::from_mask(mask & ((1u64 << n) - 1), n);
            let x = C::new(re, im);
            let (direct, _) = charpoly_finite(&k).evaluate(x);
            let e = charpoly_eval_at(&k, x);
            let err = (direct - e.value).norm();
            proptest::prop_assert!(err <= 1e-10 * e.scale.max(direct.norm()), "err {} scale {}", err, e.scale);
        }
    }
}
