//! Sign vectors, finite tridiagonal sign matrices and gauge normalization.
//!
//! A finite matrix `A(k, l)` of size `(n + 1) x (n + 1)` carries `k` on the
//! subdiagonal and `l` on the superdiagonal. Conjugating by the diagonal of
//! partial products `d_1 = 1, d_{i+1} = d_i l_i` moves every sign onto the
//! subdiagonal, so the rest of the crate only ever deals with `k` and an
//! all-ones superdiagonal.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    #[inline]
    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    /// Lifts the sign into any ring with a unit.
    #[inline]
    pub fn value<S: One + Neg<Output = S>>(self) -> S {
        match self {
            Sign::Plus => S::one(),
            Sign::Minus => -S::one(),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Nonempty sequence over `{+1, -1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(entries: Vec<Sign>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Argument("sign vector must have length >= 1".into()));
        }
        Ok(SignVector(entries))
    }

    /// Builds a vector from `+1`/`-1` integers.
    pub fn from_ints(values: &[i32]) -> Result<Self> {
        let entries = values
            .iter()
            .enumerate()
            .map(|(index, &v)| match v {
                1 => Ok(Sign::Plus),
                -1 => Ok(Sign::Minus),
                other => Err(Error::Parse {
                    index,
                    reason: format!("entry {other} is not +1 or -1"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn ones(len: usize) -> Result<Self> {
        Self::new(vec![Sign::Plus; len])
    }

    /// Unpacks the low `len` bits of `mask`; bit `i` set means `k_{i+1} = -1`.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        assert!((1..=64).contains(&len), "packed sign vectors hold 1..=64 entries");
        SignVector(
            (0..len)
                .map(|i| if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus })
                .collect(),
        )
    }

    /// Packs the vector into a bit mask; `None` when longer than 64.
    pub fn to_mask(&self) -> Option<u64> {
        if self.len() > 64 {
            return None;
        }
        Some(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, s)| s.is_minus())
                .fold(0u64, |acc, (i, _)| acc | 1 << i),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[Sign] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Sign> + '_ {
        self.0.iter().copied()
    }

    /// Zero-based access.
    pub fn get(&self, i: usize) -> Sign {
        self.0[i]
    }

    pub fn minus_count(&self) -> usize {
        self.0.iter().filter(|s| s.is_minus()).count()
    }

    pub fn product(&self) -> Sign {
        if self.minus_count() % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn reversed(&self) -> SignVector {
        SignVector(self.0.iter().rev().copied().collect())
    }

    /// `self` followed by itself.
    pub fn doubled(&self) -> SignVector {
        let mut v = self.0.clone();
        v.extend_from_slice(&self.0);
        SignVector(v)
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &SignVector) -> Result<SignVector> {
        check_len(self.len(), other.len())?;
        Ok(SignVector(
            self.0.iter().zip(&other.0).map(|(&a, &b)| a * b).collect(),
        ))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_sign_vector(s)
    }
}

impl Serialize for SignVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_sign_vector(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses a string over `'+'` and `'-'`.
pub fn parse_sign_vector(text: &str) -> Result<SignVector> {
    if text.is_empty() {
        return Err(Error::Parse {
            index: 0,
            reason: "empty string".into(),
        });
    }
    let entries = text
        .chars()
        .enumerate()
        .map(|(index, c)| match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            other => Err(Error::Parse {
                index,
                reason: format!("unexpected character {other:?}"),
            }),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SignVector(entries))
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { expected, found });
    }
    Ok(())
}

/// `(n + 1) x (n + 1)` matrix with `sub` below and `sup` above a zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TridiagSignMatrix {
    sub: SignVector,
    sup: SignVector,
}

impl TridiagSignMatrix {
    pub fn new(sub: SignVector, sup: SignVector) -> Result<Self> {
        check_len(sub.len(), sup.len())?;
        Ok(TridiagSignMatrix { sub, sup })
    }

    /// Superdiagonal of ones.
    pub fn normalized(sub: SignVector) -> Self {
        let sup = SignVector::ones(sub.len()).expect("nonempty");
        TridiagSignMatrix { sub, sup }
    }

    pub fn sub(&self) -> &SignVector {
        &self.sub
    }

    pub fn sup(&self) -> &SignVector {
        &self.sup
    }

    /// Matrix dimension `n + 1`.
    pub fn dim(&self) -> usize {
        self.sub.len() + 1
    }

    /// Dense representation over any ring; `sup_i` at `(i, i+1)` and `sub_i`
    /// at `(i+1, i)`.
    pub fn dense<S>(&self) -> DenseMatrix<S>
    where
        S: Clone + Zero + One + Neg<Output = S>,
    {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n - 1 {
            m[(i, i + 1)] = self.sup.get(i).value();
            m[(i + 1, i)] = self.sub.get(i).value();
        }
        m
    }

    /// The unitarily equivalent matrix with an all-ones superdiagonal.
    pub fn gauge_normalized(&self) -> TridiagSignMatrix {
        TridiagSignMatrix::normalized(self.sub.hadamard(&self.sup).expect("equal lengths"))
    }

    /// Diagonal `d` with `diag(d) A diag(d)^{-1}` gauge normalized (`d_1 = 1`).
    pub fn gauge_diagonal(&self) -> Vec<Sign> {
        gauge_diagonal(&self.sup)
    }
}

pub fn dense_matrix<S>(t: &TridiagSignMatrix) -> DenseMatrix<S>
where
    S: Clone + Zero + One + Neg<Output = S>,
{
    t.dense()
}

/// Partial products `d_1 = 1, d_{i+1} = d_i l_i`, of length `|l| + 1`.
pub fn gauge_diagonal(l: &SignVector) -> Vec<Sign> {
    let mut d = Vec::with_capacity(l.len() + 1);
    d.push(Sign::Plus);
    for s in l.iter() {
        let last = *d.last().unwrap();
        d.push(last * s);
    }
    d
}

/// Returns `k~` with `k~_i = k_i l_i`.
pub fn gauge_normalize_finite(k: &SignVector, l: &SignVector) -> Result<SignVector> {
    k.hadamard(l)
}

/// `A_per(k, l)` on bi-infinite sequences; both patterns share period `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicOperatorSpec {
    k: SignVector,
    l: SignVector,
}

impl PeriodicOperatorSpec {
    pub fn new(k: SignVector, l: SignVector) -> Result<Self> {
        check_len(k.len(), l.len())?;
        Ok(PeriodicOperatorSpec { k, l })
    }

    pub fn normalized(k: SignVector) -> Self {
        let l = SignVector::ones(k.len()).expect("nonempty");
        PeriodicOperatorSpec { k, l }
    }

    pub fn k(&self) -> &SignVector {
        &self.k
    }

    pub fn l(&self) -> &SignVector {
        &self.l
    }

    pub fn period(&self) -> usize {
        self.k.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.l.minus_count() == 0
    }
}

/// Moves all signs to the subdiagonal. When `prod(l) = -1` the periodic gauge
/// does not close up, so both patterns are repeated twice first.
pub fn gauge_normalize_periodic(spec: &PeriodicOperatorSpec) -> PeriodicOperatorSpec {
    let (k, l) = match spec.l.product() {
        Sign::Plus => (spec.k.clone(), spec.l.clone()),
        Sign::Minus => (spec.k.doubled(), spec.l.doubled()),
    };
    PeriodicOperatorSpec::normalized(k.hadamard(&l).expect("equal lengths"))
}

/// Doubles `k` when it has an odd number of `-1` entries.
pub fn ensure_even_parity(k: &SignVector) -> SignVector {
    if k.minus_count() % 2 == 0 {
        k.clone()
    } else {
        k.doubled()
    }
}
