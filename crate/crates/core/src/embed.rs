//! Embedding periodic-symbol eigenvalues into finite sign matrices.
//!
//! For a sign pattern `k` of period `m` with an even number of `-1` entries,
//! the `nm x nm` matrix `M` with subdiagonal `k` repeated `n` times, ones
//! above, and corners `M[1, nm] = k_m`, `M[nm, 1] = 1` is block circulant and
//! unitarily equivalent to `diag(a(xi_1), ..., a(xi_n))` with
//! `xi_j = 2 pi j / n`. Since `a(xi_j)` and `a(xi_{n-j})` share their
//! spectrum, every eigenvalue coming from `j != n/2, n` has a two-dimensional
//! eigenspace in `M`, which contains a vector with vanishing first entry.
//! Deleting the first row and column of `M` therefore leaves a finite sign
//! matrix that keeps all of these eigenvalues.

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::cloud::{SpectrumCloud, Tag};
use crate::error::{Error, Result};
use crate::finite::charpoly_eval_at;
use crate::linalg::{vec_norm, DenseMatrix, Lu};
use crate::poly::{int_charpoly_oracle, IntPolynomial};
use crate::scalar::{real, Real};
use crate::sign::{ensure_even_parity, SignVector};
use crate::symbol::{level_set, symbol_poly, two_cos_pi_ratio, SymbolPolynomial};

/// Largest `nm` accepted by [`circulant_factorization_check`].
pub const FACTORIZATION_MAX_DIM: usize = 64;

/// Inverse-iteration sweeps per witness vector.
const INVERSE_ITERATION_STEPS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct BlockCirculant {
    k: SignVector,
    n: usize,
    matrix: DenseMatrix<i64>,
}

impl BlockCirculant {
    pub fn k(&self) -> &SignVector {
        &self.k
    }

    pub fn period(&self) -> usize {
        self.k.len()
    }

    pub fn blocks(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n * self.k.len()
    }

    pub fn matrix(&self) -> &DenseMatrix<i64> {
        &self.matrix
    }

    pub fn complex_matrix<T: Real>(&self) -> DenseMatrix<Complex<T>> {
        self.matrix.map(|&v| real(T::lit(v as f64)))
    }
}

/// Builds `M`. When `nm = 2` the corners coincide with the off-diagonal
/// entries and are added to them.
pub fn build_block_circulant(k: &SignVector, n: usize) -> Result<BlockCirculant> {
    if n < 2 {
        return Err(Error::Argument(format!("block circulant needs n >= 2, got {n}")));
    }
    let m = k.len();
    let size = n * m;
    let mut a = DenseMatrix::zeros(size, size);
    for i in 0..size - 1 {
        a[(i, i + 1)] += 1;
        a[(i + 1, i)] += k.get(i % m).as_i8() as i64;
    }
    a[(0, size - 1)] += k.get(m - 1).as_i8() as i64;
    a[(size - 1, 0)] += 1;
    Ok(BlockCirculant {
        k: k.clone(),
        n,
        matrix: a,
    })
}

/// `xi_j = 2 pi j / n`.
pub fn root_of_unity_angle<T: Real>(j: usize, n: usize) -> T {
    T::TAU() * T::from_usize_lossy(j) / T::from_usize_lossy(n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizationReport {
    pub passed: bool,
    pub samples: usize,
    pub worst_relative_error: f64,
    pub worst_point: (f64, f64),
}

/// Compares `det(M - x I)` (LU on the assembled matrix) with
/// `prod_j (-1)^m (p(x) - prod(k) e^{i xi_j} - e^{-i xi_j})` at `4 nm`
/// deterministic sample points.
pub fn circulant_factorization_check<T: Real>(k: &SignVector, n: usize, tol: T) -> Result<FactorizationReport> {
    let bc = build_block_circulant(k, n)?;
    let sp = symbol_poly::<T>(k)?;
    factorization_report(&bc, &sp, tol)
}

fn sample_points<T: Real>(count: usize) -> Vec<Complex<T>> {
    // golden-angle spiral over the annulus 0.25 <= |x| <= 2.75
    let golden = T::lit(2.399_963_229_728_653);
    (0..count)
        .map(|s| {
            let t = (T::from_usize_lossy(s) + T::lit(0.5)) / T::from_usize_lossy(count);
            let r = T::lit(0.25) + T::lit(2.5) * t;
            let theta = golden * T::from_usize_lossy(s);
            Complex::from_polar(r, theta)
        })
        .collect()
}

pub(crate) fn factorization_report<T: Real>(
    bc: &BlockCirculant,
    sp: &SymbolPolynomial<T>,
    tol: T,
) -> Result<FactorizationReport> {
    let size = bc.dim();
    if size > FACTORIZATION_MAX_DIM {
        return Err(Error::Argument(format!(
            "factorization check limited to nm <= {FACTORIZATION_MAX_DIM}, got {size}"
        )));
    }
    let mat = bc.complex_matrix::<T>();
    let points = sample_points::<T>(4 * size);
    let mut worst = T::zero();
    let mut worst_point = Complex::zero();
    for &x in &points {
        let lhs = mat.shifted(x).det();
        let rhs = (1..=bc.n).fold(Complex::new(T::one(), T::zero()), |acc, j| {
            acc * sp.char_value(root_of_unity_angle(j, bc.n), x)
        });
        let denom = lhs.norm().max(rhs.norm());
        let err = if denom.is_zero() { T::zero() } else { (lhs - rhs).norm() / denom };
        if !(err <= worst) {
            worst = err;
            worst_point = x;
        }
    }
    let to64 = |v: T| v.to_f64().unwrap_or(f64::NAN);
    Ok(FactorizationReport {
        passed: worst <= tol,
        samples: points.len(),
        worst_relative_error: to64(worst),
        worst_point: (to64(worst_point.re), to64(worst_point.im)),
    })
}

/// `spec(a(xi_j))` for even-parity `k`: the roots of `p - 2 cos xi_j`.
fn spectrum_at_root_of_unity<T: Real>(sp: &SymbolPolynomial<T>, j: usize, n: usize, tol: T) -> Result<Vec<Complex<T>>> {
    debug_assert!(sp.k.minus_count() % 2 == 0);
    level_set(sp, two_cos_pi_ratio(2 * j, n), tol)
}

/// Indices `j` in `{1, ..., n-1}` with `j != n/2`.
pub fn target_indices(n: usize) -> Vec<usize> {
    (1..n).filter(|&j| !(n % 2 == 0 && j == n / 2)).collect()
}

/// `S_n = ⋃ spec(a(xi_j))` over [`target_indices`], tagged `target:j=..`.
pub fn target_set<T: Real>(k: &SignVector, n: usize, tol: T) -> Result<SpectrumCloud<T>> {
    if k.minus_count() % 2 != 0 {
        return Err(Error::OddParity);
    }
    if n < 2 {
        return Err(Error::Argument(format!("target set needs n >= 2, got {n}")));
    }
    let sp = symbol_poly::<T>(k)?;
    targets_with(&sp, n, tol)
}

fn targets_with<T: Real>(sp: &SymbolPolynomial<T>, n: usize, tol: T) -> Result<SpectrumCloud<T>> {
    let mut cloud = SpectrumCloud::new();
    let indices = target_indices(n);
    if indices.is_empty() {
        log::warn!("empty target index set for n = {n}");
        cloud.note(format!("warning: empty target index set for n = {n}"));
    }
    for j in indices {
        let pts = spectrum_at_root_of_unity(sp, j, n, tol)?;
        cloud.merge(SpectrumCloud::tagged(pts, Tag::target(j)));
    }
    Ok(cloud)
}

/// Subdiagonal of `M` with its first row and column deleted: the `n`-fold
/// repetition of `k` shifted left by one, of length `nm - 2`.
pub fn truncate(k: &SignVector, n: usize) -> Result<SignVector> {
    let m = k.len();
    let size = n * m;
    if size < 3 {
        return Err(Error::Argument(format!("truncation needs nm >= 3, got {size}")));
    }
    SignVector::new((1..size - 1).map(|i| k.get(i % m)).collect())
}

/// Eigenvector of `M` for a target with its first coordinate eliminated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub j: usize,
    pub lambda: (f64, f64),
    /// `|x_1| / ||x||`.
    pub first_ratio: f64,
    /// `||M x - lambda x|| / ||x||`.
    pub residual_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExcludedTarget {
    pub j: usize,
    pub lambda: (f64, f64),
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingResult<T> {
    /// Pattern as given.
    pub k_input: SignVector,
    /// Pattern after parity doubling.
    pub k: SignVector,
    pub m: usize,
    pub n: usize,
    /// Subdiagonal of the `(nm - 1) x (nm - 1)` truncated matrix.
    pub l: SignVector,
    pub targets: SpectrumCloud<T>,
    /// Normalized truncated-charpoly residual per target, in target order.
    pub residuals: Vec<T>,
    pub tol: T,
    pub verified: bool,
    /// Residuals at `j = n/2` and `j = n`, reported but not part of the claim.
    pub excluded: Vec<ExcludedTarget>,
    pub witnesses: Option<Vec<Witness>>,
}

impl<T: Real> EmbeddingResult<T> {
    pub fn worst_residual(&self) -> Option<(usize, T)> {
        self.residuals
            .iter()
            .copied()
            .enumerate()
            .fold(None, |best, (i, r)| match best {
                Some((_, b)) if b >= r => best,
                _ => Some((i, r)),
            })
    }

    pub fn truncated_dim(&self) -> usize {
        self.l.len() + 1
    }
}

fn target_index(tag: &Tag) -> usize {
    tag.as_str()
        .strip_prefix("target:j=")
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

/// Builds the truncated matrix for `k` and `n` and checks that every target
/// in `S_n` is an eigenvalue of it, through the normalized residual of the
/// truncated characteristic polynomial.
pub fn verify_embedding<T: Real>(
    k_input: &SignVector,
    n: usize,
    tol: T,
    want_witness: bool,
) -> Result<EmbeddingResult<T>> {
    if n < 2 {
        return Err(Error::Argument(format!("embedding needs n >= 2, got {n}")));
    }
    let k = ensure_even_parity(k_input);
    let m = k.len();
    let root_tol = T::root_tol();
    let sp = symbol_poly::<T>(&k)?;
    let targets = targets_with(&sp, n, root_tol)?;
    let l = truncate(&k, n)?;
    let residuals: Vec<T> = targets
        .points()
        .iter()
        .map(|p| charpoly_eval_at(&l, p.z).normalized_residual())
        .collect();
    let verified = residuals.iter().all(|&r| r <= tol);

    let mut excluded = Vec::new();
    let mut extra = vec![n];
    if n % 2 == 0 {
        extra.insert(0, n / 2);
    }
    for j in extra {
        for z in spectrum_at_root_of_unity(&sp, j, n, root_tol)? {
            excluded.push(ExcludedTarget {
                j,
                lambda: pair(z),
                residual: charpoly_eval_at(&l, z).normalized_residual().to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    let witnesses = if want_witness {
        let bc = build_block_circulant(&k, n)?;
        let mat = bc.complex_matrix::<T>();
        let ws = targets
            .points()
            .iter()
            .map(|p| witness(&mat, p.z, target_index(&p.tag)))
            .collect::<Result<Vec<_>>>()?;
        Some(ws)
    } else {
        None
    };

    Ok(EmbeddingResult {
        k_input: k_input.clone(),
        k,
        m,
        n,
        l,
        targets,
        residuals,
        tol,
        verified,
        excluded,
        witnesses,
    })
}

fn pair<T: Real>(z: Complex<T>) -> (f64, f64) {
    (z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

fn normalize<T: Real>(v: &mut [Complex<T>]) {
    let n = vec_norm(v);
    if n > T::zero() {
        for z in v.iter_mut() {
            *z = *z / n;
        }
    }
}

fn inverse_iteration<T: Real>(mat: &DenseMatrix<Complex<T>>, shift: Complex<T>, start: Vec<Complex<T>>) -> Vec<Complex<T>> {
    let lu = Lu::factor(&mat.shifted(shift));
    let mut v = start;
    normalize(&mut v);
    for _ in 0..INVERSE_ITERATION_STEPS {
        v = lu.solve(&v);
        normalize(&mut v);
    }
    v
}

/// Two eigenvectors from inverse iteration with shifts `lambda (1 +- eps)`
/// and different starts, combined so that the first entry cancels.
fn witness<T: Real>(mat: &DenseMatrix<Complex<T>>, lambda: Complex<T>, j: usize) -> Result<Witness> {
    let size = mat.rows();
    let eps = T::lit(1e-9);
    let bump = if lambda.is_zero() { real(eps) } else { lambda * eps };
    let start = |a: f64, b: f64| -> Vec<Complex<T>> {
        (0..size)
            .map(|i| {
                let t = T::from_usize_lossy(i + 1);
                Complex::new((T::lit(a) * t).sin() + T::lit(0.5), (T::lit(b) * t).cos())
            })
            .collect()
    };
    let v = inverse_iteration(mat, lambda + bump, start(1.3, 0.7));
    let w = inverse_iteration(mat, lambda - bump, start(2.9, 1.9));
    let tiny = T::lit(1e-13);
    let x: Vec<Complex<T>> = if v[0].norm() <= tiny {
        v.clone()
    } else if w[0].norm() <= tiny {
        w.clone()
    } else {
        v.iter().zip(&w).map(|(&a, &b)| w[0] * a - v[0] * b).collect()
    };
    let xn = vec_norm(&x);
    let reference = v[0].norm().max(w[0].norm()).max(tiny);
    if !(xn > T::lit(1e-8) * reference) {
        return Err(Error::WitnessDegenerate { j });
    }
    let mx = mat.mul_vec(&x);
    let r: Vec<Complex<T>> = mx.iter().zip(&x).map(|(a, b)| a - lambda * b).collect();
    let to64 = |v: T| v.to_f64().unwrap_or(f64::NAN);
    Ok(Witness {
        j,
        lambda: pair(lambda),
        first_ratio: to64(x[0].norm() / xn),
        residual_ratio: to64(vec_norm(&r) / xn),
    })
}

/// `prod_{j=1}^{h} (y - 2 cos(2 pi j / n))` with `h = floor((n - 1) / 2)`,
/// certified integral by checking that its square times `(y - 2)` (and
/// `(y + 2)` for even `n`) equals `2 T_n(y / 2) - 2`.
pub fn paired_cosine_polynomial(n: usize) -> Result<IntPolynomial> {
    let h = (n - 1) / 2;
    let mut approx = vec![1.0f64];
    for j in 1..=h {
        let c = 2.0 * (std::f64::consts::TAU * j as f64 / n as f64).cos();
        let mut next = vec![0.0; approx.len() + 1];
        for (i, &a) in approx.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * c;
        }
        approx = next;
    }
    let r = IntPolynomial::new(approx.iter().map(|c| BigInt::from(c.round() as i64)).collect());

    // 2 T_n(y/2): C_0 = 2, C_1 = y, C_{i+1} = y C_i - C_{i-1}
    let y = IntPolynomial::monomial(1, 1);
    let mut prev = IntPolynomial::constant(2);
    let mut cur = y.clone();
    for _ in 1..n {
        let next = y.mul(&cur).sub(&prev);
        prev = std::mem::replace(&mut cur, next);
    }
    let lhs = cur.sub(&IntPolynomial::constant(2));
    let mut rhs = r.mul(&r).mul(&IntPolynomial::from_i64(&[-2, 1]));
    if n % 2 == 0 {
        rhs = rhs.mul(&IntPolynomial::from_i64(&[2, 1]));
    }
    if lhs != rhs {
        return Err(Error::NumericalConsistency {
            what: format!("paired cosine polynomial for n = {n} failed its exact certificate"),
            error: 1.0,
        });
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityReport {
    /// `S^2` divides the exact characteristic polynomial of `M`, where
    /// `S = R(p)` vanishes on every target.
    pub square_divides: bool,
    /// Largest normalized residual of `S` over the targets.
    pub worst_target_residual: f64,
    pub passed: bool,
}

/// Exact certificate that every target has multiplicity at least two in `M`.
///
/// `S(x) = R(p(x))` with `R` from [`paired_cosine_polynomial`] has the targets
/// as roots; `S^2 | det(x I - M)` is checked by exact integer division, and
/// each numerical target must be a root of `S` to within `tol`.
pub fn multiplicity_check<T: Real>(k: &SignVector, n: usize, tol: T) -> Result<MultiplicityReport> {
    if k.minus_count() % 2 != 0 {
        return Err(Error::OddParity);
    }
    let bc = build_block_circulant(k, n)?;
    let chi = int_charpoly_oracle(bc.matrix())?;
    let sp = symbol_poly::<T>(k)?;
    let s = paired_cosine_polynomial(n)?.compose(&sp.coeffs);
    let (_, rem) = chi.div_rem(&s.mul(&s))?;
    let square_divides = rem.is_zero();
    let targets = targets_with(&sp, n, T::root_tol())?;
    let worst = targets
        .values()
        .iter()
        .map(|&z| {
            let (v, scale) = s.evaluate(z);
            if v.is_zero() { T::zero() } else { v.norm() / scale }
        })
        .fold(T::zero(), T::max);
    Ok(MultiplicityReport {
        square_divides,
        worst_target_residual: worst.to_f64().unwrap_or(f64::NAN),
        passed: square_divides && worst <= tol,
    })
}
