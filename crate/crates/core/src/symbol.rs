//! Symbol calculus for periodic sign operators.
//!
//! An `m`-periodic operator with subdiagonal pattern `k` and ones above is
//! block-Laurent; its symbol `a(phi)` is the `m x m` matrix with ones on the
//! superdiagonal, `k_1..k_{m-1}` on the subdiagonal, and the two corner terms
//! `k_m e^{i phi}` at `(1, m)` and `e^{-i phi}` at `(m, 1)`. Only the constant
//! term of `det(a(phi) - x I)` depends on `phi`:
//!
//! ```text
//! det(a(phi) - x I) = (-1)^m (p(x) - prod(k) e^{i phi} - e^{-i phi})
//! ```
//!
//! for a monic integer polynomial `p` of degree `m`. With an even number of
//! `-1` entries the correction is `2 cos(phi)`, so the operator's spectrum is
//! `p^{-1}([-2, 2])`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cloud::{SpectrumCloud, Tag};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::poly::{int_roots, roots, ComplexPolynomial, IntPolynomial, DEFAULT_MAX_ITER};
use crate::scalar::{cis, real, Real};
use crate::sign::{ensure_even_parity, Sign, SignVector};

/// Radius of the circle carrying the interpolation nodes for [`symbol_poly`].
pub const NODE_RADIUS: f64 = 1.0;

/// `a(phi)`. For `m <= 2` the corner terms land on occupied positions and
/// are added to them.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolMatrix<T> {
    pub k: SignVector,
    pub phi: T,
    pub matrix: DenseMatrix<Complex<T>>,
}

pub fn symbol_matrix<T: Real>(k: &SignVector, phi: T) -> SymbolMatrix<T> {
    let m = k.len();
    let mut a = DenseMatrix::zeros(m, m);
    for i in 0..m - 1 {
        a[(i, i + 1)] += Complex::one();
        a[(i + 1, i)] += real(k.get(i).value::<T>());
    }
    a[(0, m - 1)] += cis(phi) * k.get(m - 1).value::<T>();
    a[(m - 1, 0)] += cis(-phi);
    SymbolMatrix {
        k: k.clone(),
        phi,
        matrix: a,
    }
}

/// `det(a(phi) - x I)` by LU factorization.
pub fn symbol_char_value<T: Real>(k: &SignVector, phi: T, x: Complex<T>) -> Complex<T> {
    symbol_matrix(k, phi).matrix.shifted(x).det()
}

/// The monic polynomial `p` attached to `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolPolynomial<T> {
    pub p: ComplexPolynomial<T>,
    pub coeffs: IntPolynomial,
    pub k_product: Sign,
    pub k: SignVector,
}

impl<T: Real> SymbolPolynomial<T> {
    pub fn period(&self) -> usize {
        self.k.len()
    }

    /// `(-1)^m (p(x) - prod(k) e^{i phi} - e^{-i phi})`.
    pub fn char_value(&self, phi: T, x: Complex<T>) -> Complex<T> {
        let (px, _) = self.p.evaluate(x);
        let v = px - cis(phi) * self.k_product.value::<T>() - cis(-phi);
        if self.period() % 2 == 0 {
            v
        } else {
            -v
        }
    }

    /// The constant `prod(k) e^{i phi} + e^{-i phi}` subtracted from `p`.
    pub fn phase_term(&self, phi: T) -> Complex<T> {
        cis(phi) * self.k_product.value::<T>() + cis(-phi)
    }
}

/// Recovers `p` from `p(x) = (-1)^m det(a(0) - x I) + prod(k) + 1` by
/// interpolating LU determinants on `m + 1` scaled roots of unity and
/// snapping the coefficients to integers.
pub fn symbol_poly<T: Real>(k: &SignVector) -> Result<SymbolPolynomial<T>> {
    let m = k.len();
    let nodes = m + 1;
    let k_product = k.product();
    let a0 = symbol_matrix(k, T::zero()).matrix;
    let radius = T::lit(NODE_RADIUS);
    let omega = |s: usize| cis(T::TAU() * T::from_usize_lossy(s) / T::from_usize_lossy(nodes));
    let offset = real(k_product.value::<T>() + T::one());
    let values: Vec<Complex<T>> = (0..nodes)
        .map(|s| {
            let d = a0.shifted(omega(s) * radius).det();
            let signed = if m % 2 == 0 { d } else { -d };
            signed + offset
        })
        .collect();

    // c_j r^j = (1/N) sum_s v_s w^{-js}
    let inv_n = T::one() / T::from_usize_lossy(nodes);
    let mut snapped = Vec::with_capacity(nodes);
    let mut worst = T::zero();
    for j in 0..nodes {
        let sum = values
            .iter()
            .enumerate()
            .fold(Complex::zero(), |acc, (s, v)| acc + v * omega((j * s) % nodes).conj());
        let c = sum * inv_n / radius.powi(j as i32);
        let nearest = c.re.round();
        worst = worst.max((c - real(nearest)).norm());
        snapped.push(BigInt::from(nearest.to_i64().unwrap_or(i64::MAX)));
    }
    if worst > T::snap_tol() {
        return Err(Error::NumericalConsistency {
            what: format!("symbol polynomial of k = {k} is not integral"),
            error: worst.to_f64().unwrap_or(f64::NAN),
        });
    }
    let coeffs = IntPolynomial::new(snapped);
    if coeffs.degree() != Some(m) || coeffs.coeff(m) != BigInt::one() {
        return Err(Error::NumericalConsistency {
            what: format!("symbol polynomial of k = {k} is not monic of degree {m}"),
            error: worst.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(SymbolPolynomial {
        p: coeffs.to_complex()?,
        coeffs,
        k_product,
        k: k.clone(),
    })
}

/// Spectrum of `a(phi)`: the roots of `p - prod(k) e^{i phi} - e^{-i phi}`.
pub fn symbol_eigenvalues<T: Real>(k: &SignVector, phi: T, tol: T) -> Result<Vec<Complex<T>>> {
    let sp = symbol_poly::<T>(k)?;
    eigenvalues_with(&sp, phi, tol)
}

pub(crate) fn eigenvalues_with<T: Real>(sp: &SymbolPolynomial<T>, phi: T, tol: T) -> Result<Vec<Complex<T>>> {
    roots(&sp.p.sub_constant(sp.phase_term(phi))?, tol, DEFAULT_MAX_ITER)
}

/// `2 cos(pi num / den)`, with the exact integer alongside when there is one
/// (`den | 2 num` or `den | 3 num`).
pub(crate) fn two_cos_pi_ratio<T: Real>(num: usize, den: usize) -> (T, Option<i64>) {
    let v = T::lit(2.0) * (T::PI() * T::from_usize_lossy(num) / T::from_usize_lossy(den)).cos();
    if (2 * num) % den == 0 || (3 * num) % den == 0 {
        let r = v.round();
        (r, r.to_i64())
    } else {
        (v, None)
    }
}

/// Roots of `p - c`. Integer levels go through exact squarefree separation,
/// so repeated roots (band edges of doubled periods, say) keep full accuracy.
pub(crate) fn level_set<T: Real>(sp: &SymbolPolynomial<T>, level: (T, Option<i64>), tol: T) -> Result<Vec<Complex<T>>> {
    match level {
        (_, Some(c)) => int_roots(&sp.coeffs.sub(&IntPolynomial::constant(c)), tol),
        (c, None) => roots(&sp.p.sub_constant(real(c))?, tol, DEFAULT_MAX_ITER),
    }
}

/// Samples `spec(A_per(k)) = p^{-1}([-2, 2])` at `phi_s = pi s / (samples - 1)`.
///
/// `k` is parity-doubled first; tags record the effective period and `phi_s`.
pub fn periodic_spectrum<T: Real>(k: &SignVector, samples: usize, tol: T) -> Result<SpectrumCloud<T>> {
    if samples < 2 {
        return Err(Error::Argument("periodic sampling needs samples >= 2".into()));
    }
    let k = ensure_even_parity(k);
    let sp = symbol_poly::<T>(&k)?;
    let m = k.len();
    let step = T::PI() / T::from_usize_lossy(samples - 1);
    let parts: Vec<SpectrumCloud<T>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let phi = step * T::from_usize_lossy(s);
            let pts = level_set(&sp, two_cos_pi_ratio(s, samples - 1), tol)?;
            Ok(SpectrumCloud::tagged(
                pts,
                Tag::periodic(m, phi.to_f64().unwrap_or(f64::NAN)),
            ))
        })
        .collect::<Result<_>>()?;
    let mut cloud = SpectrumCloud::new();
    for part in parts {
        cloud.merge(part);
    }
    Ok(cloud)
}
