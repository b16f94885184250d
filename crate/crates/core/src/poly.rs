//! Polynomials over the complex numbers and the integers, the Aberth-Ehrlich
//! root finder, and an exact characteristic-polynomial oracle.
//!
//! Coefficients are stored in ascending order: `coeffs[i]` multiplies `x^i`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cloud::{SpectrumCloud, Tag};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::{cis, Real};

/// Default iteration budget for [`roots`].
pub const DEFAULT_MAX_ITER: usize = 200;

/// Largest matrix the exact oracle accepts.
pub const ORACLE_MAX_DIM: usize = 24;

/// Angular offset of the initial Aberth iterates (Euler-Mascheroni constant).
const INITIAL_ANGLE_OFFSET: f64 = 0.577_215_664_901_532_9;

/// Sweeps performed after every root meets the tolerance, to tighten
/// clustered approximations before returning.
const POLISH_SWEEPS: usize = 3;

/// Polynomial with complex coefficients and a nonzero leading coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPolynomial<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> ComplexPolynomial<T> {
    /// Trims trailing zeros; the zero polynomial is rejected.
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Result<Self> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::Argument("zero polynomial".into()));
        }
        Ok(ComplexPolynomial { coeffs })
    }

    pub fn from_real(coeffs: &[T]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    /// `prod (x - r_i)`.
    pub fn from_roots(roots: &[Complex<T>]) -> Self {
        let mut coeffs = vec![Complex::one()];
        for &r in roots {
            let mut next = vec![Complex::zero(); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        ComplexPolynomial { coeffs }
    }

    /// The monomial `x`.
    pub fn identity() -> Self {
        ComplexPolynomial {
            coeffs: vec![Complex::zero(), Complex::one()],
        }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex<T> {
        *self.coeffs.last().unwrap()
    }

    pub fn monic(&self) -> Self {
        let lead = self.leading();
        ComplexPolynomial {
            coeffs: self.coeffs.iter().map(|c| c / lead).collect(),
        }
    }

    /// `self - t`.
    pub fn sub_constant(&self, t: Complex<T>) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] -= t;
        Self::new(coeffs)
    }

    /// Horner value together with `sum |c_i| |z|^i`.
    pub fn evaluate(&self, z: Complex<T>) -> (Complex<T>, T) {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold((Complex::zero(), T::zero()), |(v, s), c| (v * z + c, s * r + c.norm()))
    }

    /// Value, derivative and magnitude bound in one pass.
    fn evaluate_with_derivative(&self, z: Complex<T>) -> (Complex<T>, Complex<T>, T) {
        let r = z.norm();
        let mut v = Complex::zero();
        let mut d = Complex::zero();
        let mut s = T::zero();
        for c in self.coeffs.iter().rev() {
            d = d * z + v;
            v = v * z + c;
            s = s * r + c.norm();
        }
        (v, d, s)
    }

    /// `|p(z)| / scale(z)`; zero when `z` is an exact root.
    pub fn normalized_residual(&self, z: Complex<T>) -> T {
        let (v, s) = self.evaluate(z);
        if v.is_zero() {
            T::zero()
        } else {
            v.norm() / s
        }
    }
}

impl<T: Real> fmt::Display for ComplexPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `p(z)` with its magnitude bound; see [`ComplexPolynomial::evaluate`].
pub fn evaluate<T: Real>(p: &ComplexPolynomial<T>, z: Complex<T>) -> (Complex<T>, T) {
    p.evaluate(z)
}

/// All `deg p` roots, with multiplicity, by Aberth-Ehrlich iteration.
///
/// Every returned root `r` satisfies `|p(r)| <= tol * scale(r)`. Exact zero
/// roots (vanishing low-order coefficients) are split off before iterating.
/// Clustered approximations of multiple roots are returned as they are.
pub fn roots<T: Real>(p: &ComplexPolynomial<T>, tol: T, max_iter: usize) -> Result<Vec<Complex<T>>> {
    if p.degree() == 0 {
        return Err(Error::Argument("root finding needs degree >= 1".into()));
    }
    if !(tol > T::zero()) {
        return Err(Error::Argument("tolerance must be positive".into()));
    }
    let zeros = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    let mut out = vec![Complex::zero(); zeros];
    let reduced = ComplexPolynomial {
        coeffs: p.coeffs[zeros..].to_vec(),
    };
    match reduced.degree() {
        0 => {}
        1 => out.push(-reduced.coeffs[0] / reduced.coeffs[1]),
        _ => out.extend(aberth(&reduced, tol, max_iter)?),
    }
    Ok(out)
}

/// Roots of an integer polynomial with unit leading coefficient, with
/// multiplicity. Repeated roots are separated exactly first, so each is found
/// as a simple root to full working precision.
pub fn int_roots<T: Real>(p: &IntPolynomial, tol: T) -> Result<Vec<Complex<T>>> {
    let mut out = Vec::with_capacity(p.degree().unwrap_or(0));
    for layer in p.multiplicity_layers()? {
        out.extend(roots(&layer.to_complex()?, tol, DEFAULT_MAX_ITER)?);
    }
    Ok(out)
}

fn aberth<T: Real>(p: &ComplexPolynomial<T>, tol: T, max_iter: usize) -> Result<Vec<Complex<T>>> {
    let deg = p.degree();
    let lead = p.leading();
    let radius = T::one()
        + p.coeffs[..deg]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(T::zero(), T::max);
    let two_pi = T::TAU();
    let offset = T::lit(INITIAL_ANGLE_OFFSET);
    let mut z: Vec<Complex<T>> = (0..deg)
        .map(|i| {
            let angle = two_pi * T::from_usize_lossy(i) / T::from_usize_lossy(deg) + offset;
            cis(angle) * radius
        })
        .collect();
    // Horner rounding error is bounded by roughly 2 deg eps scale.
    let noise = T::lit(4.0) * T::from_usize_lossy(deg) * T::epsilon();
    let mut frozen = vec![false; deg];
    let mut polish = 0;

    for _ in 0..max_iter {
        let mut all_within_tol = true;
        for i in 0..deg {
            if frozen[i] {
                continue;
            }
            let (v, d, s) = p.evaluate_with_derivative(z[i]);
            if v.norm() <= noise * s {
                frozen[i] = true;
                continue;
            }
            if v.norm() > tol * s {
                all_within_tol = false;
            }
            let repulsion = z
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Complex::zero(), |acc, (_, &w)| acc + (z[i] - w).inv());
            let delta = if d.is_zero() {
                // stationary point: nudge off it
                Complex::new(T::epsilon().sqrt() * (T::one() + z[i].norm()), T::zero())
            } else {
                let newton = v / d;
                newton / (Complex::<T>::one() - newton * repulsion)
            };
            if !delta.re.is_finite() || !delta.im.is_finite() {
                return Err(Error::Convergence {
                    iterations: 0,
                    worst_residual: f64::INFINITY,
                });
            }
            z[i] -= delta;
            if delta.norm() <= T::epsilon() * z[i].norm() {
                frozen[i] = true;
            }
        }
        if frozen.iter().all(|&f| f) {
            break;
        }
        if all_within_tol {
            polish += 1;
            if polish > POLISH_SWEEPS {
                break;
            }
        }
    }

    let worst = z
        .iter()
        .map(|&r| p.normalized_residual(r))
        .fold(T::zero(), T::max);
    if worst > tol || !worst.is_finite() {
        return Err(Error::Convergence {
            iterations: max_iter,
            worst_residual: worst.to_f64().unwrap_or(f64::INFINITY),
        });
    }
    Ok(z)
}

/// Union over `targets` of the roots of `p - t`, each tagged with its target
/// index.
pub fn preimage<T: Real>(
    p: &ComplexPolynomial<T>,
    targets: &[Complex<T>],
    tol: T,
) -> Result<SpectrumCloud<T>> {
    if p.degree() == 0 {
        return Err(Error::Argument("preimage needs degree >= 1".into()));
    }
    let mut cloud = SpectrumCloud::new();
    for (idx, &t) in targets.iter().enumerate() {
        let shifted = p.sub_constant(t)?;
        cloud.merge(SpectrumCloud::tagged(
            roots(&shifted, tol, DEFAULT_MAX_ITER)?,
            Tag::preimage(idx),
        ));
    }
    Ok(cloud)
}

/// Polynomial with exact integer coefficients. The zero polynomial has no
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        Self::from_i64(&[c])
    }

    /// `c x^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::from(c);
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: i64) -> IntPolynomial {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `x * self`.
    pub fn shift(&self) -> IntPolynomial {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigInt::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &IntPolynomial) -> IntPolynomial {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            acc.mul(inner).add(&Self::new(vec![c.clone()]))
        })
    }

    pub fn derivative(&self) -> IntPolynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Division by a divisor with leading coefficient `+-1`.
    pub fn div_rem(&self, divisor: &IntPolynomial) -> Result<(IntPolynomial, IntPolynomial)> {
        let d = divisor
            .degree()
            .ok_or_else(|| Error::Argument("division by the zero polynomial".into()))?;
        let lead = divisor.coeffs[d].clone();
        if !lead.abs().is_one() {
            return Err(Error::Argument("divisor must have a unit leading coefficient".into()));
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + d] * &lead;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * c;
                }
            }
            quot[i] = q;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `self / content`, with a positive leading coefficient.
    pub fn primitive_part(&self) -> IntPolynomial {
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        let mut g = self.content();
        if self.coeffs[d].is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// `lc(b)^(deg a - deg b + 1) a mod b`, exact over the integers.
    fn pseudo_rem(&self, b: &IntPolynomial) -> IntPolynomial {
        let db = b.degree().expect("nonzero divisor");
        let lead = &b.coeffs[db];
        let mut rem = self.coeffs.clone();
        while rem.len() > db && !rem.is_empty() {
            let top = rem.len() - 1;
            let t = rem[top].clone();
            for c in rem.iter_mut() {
                *c *= lead;
            }
            for (j, c) in b.coeffs.iter().enumerate() {
                rem[top - db + j] -= &t * c;
            }
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Self::new(rem)
    }

    /// Primitive greatest common divisor with a positive leading coefficient
    /// (primitive remainder sequence).
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// Squarefree layers `P_1, P_2, ...` of a polynomial with unit leading
    /// coefficient: `P_i` has as simple roots exactly the roots of multiplicity
    /// `>= i`, so every root appears across the layers with its multiplicity.
    pub fn multiplicity_layers(&self) -> Result<Vec<IntPolynomial>> {
        let mut layers = Vec::new();
        let mut f = self.clone();
        while f.degree().is_some_and(|d| d > 0) {
            let g = f.gcd(&f.derivative());
            let (sqfree, rem) = f.div_rem(&g)?;
            debug_assert!(rem.is_zero());
            layers.push(sqfree);
            f = g;
        }
        Ok(layers)
    }

    pub fn to_complex<T: Real>(&self) -> Result<ComplexPolynomial<T>> {
        ComplexPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| Complex::new(T::lit(c.to_f64().unwrap_or(f64::NAN)), T::zero()))
                .collect(),
        )
    }

    /// Horner value and magnitude bound at a complex point.
    pub fn evaluate<T: Real>(&self, z: Complex<T>) -> (Complex<T>, T) {
        let r = z.norm();
        self.coeffs.iter().rev().fold((Complex::zero(), T::zero()), |(v, s), c| {
            let c = T::lit(c.to_f64().unwrap_or(f64::NAN));
            (v * z + c, s * r + c.abs())
        })
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Exact `det(x I - A)` for an integer matrix, by the division-free
/// Samuelson-Berkowitz recurrence.
pub fn int_charpoly_oracle(a: &DenseMatrix<i64>) -> Result<IntPolynomial> {
    if !a.is_square() {
        return Err(Error::Dimension {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let n = a.rows();
    if n > ORACLE_MAX_DIM {
        return Err(Error::OracleTooLarge {
            size: n,
            limit: ORACLE_MAX_DIM,
        });
    }
    if n == 0 {
        return Ok(IntPolynomial::constant(1));
    }
    let big = |i: usize, j: usize| BigInt::from(a[(i, j)]);
    // descending coefficients of the leading block's characteristic polynomial
    let mut desc: Vec<BigInt> = vec![BigInt::one(), -big(0, 0)];
    for r in 1..n {
        let row: Vec<BigInt> = (0..r).map(|j| big(r, j)).collect();
        let mut v: Vec<BigInt> = (0..r).map(|i| big(i, r)).collect();
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(BigInt::one());
        toeplitz.push(-big(r, r));
        for step in 0..r {
            let dot: BigInt = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            toeplitz.push(-dot);
            if step + 1 < r {
                v = (0..r)
                    .map(|i| (0..r).map(|j| big(i, j) * &v[j]).sum())
                    .collect();
            }
        }
        desc = (0..r + 2)
            .map(|i| {
                (0..=i.min(r))
                    .map(|j| &toeplitz[i - j] * &desc[j])
                    .sum()
            })
            .collect();
    }
    desc.reverse();
    Ok(IntPolynomial::new(desc))
}
