//! Tagged multisets of complex points.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::scalar::{cmp_complex, Real};

/// Provenance label, e.g. `fin:n=12`, `per:m=4:phi=0.196350`, `target:j=3`.
///
/// Cheap to clone; points produced together share one allocation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tag(Arc<str>);

impl Tag {
    pub fn new(s: impl AsRef<str>) -> Tag {
        Tag(Arc::from(s.as_ref()))
    }

    pub fn finite(n: usize) -> Tag {
        Tag::new(format!("fin:n={n}"))
    }

    pub fn periodic(m: usize, phi: f64) -> Tag {
        Tag::new(format!("per:m={m}:phi={phi:.6}"))
    }

    pub fn target(j: usize) -> Tag {
        Tag::new(format!("target:j={j}"))
    }

    pub fn preimage(index: usize) -> Tag {
        Tag::new(format!("pre:t={index}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CloudPoint<T> {
    pub z: Complex<T>,
    pub tag: Tag,
}

/// Multiset of complex points, each carrying exactly one tag.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumCloud<T> {
    points: Vec<CloudPoint<T>>,
    notes: Vec<String>,
}

impl<T> Default for SpectrumCloud<T> {
    fn default() -> Self {
        SpectrumCloud {
            points: Vec::new(),
            notes: Vec::new(),
        }
    }
}

impl<T: Real> SpectrumCloud<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_points(points: Vec<CloudPoint<T>>) -> Self {
        SpectrumCloud {
            points,
            notes: Vec::new(),
        }
    }

    /// All values share `tag`.
    pub fn tagged(values: impl IntoIterator<Item = Complex<T>>, tag: Tag) -> Self {
        Self::from_points(
            values
                .into_iter()
                .map(|z| CloudPoint { z, tag: tag.clone() })
                .collect(),
        )
    }

    pub fn push(&mut self, z: Complex<T>, tag: Tag) {
        self.points.push(CloudPoint { z, tag });
    }

    /// Multiset union.
    pub fn merge(&mut self, other: SpectrumCloud<T>) {
        self.points.extend(other.points);
        self.notes.extend(other.notes);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[CloudPoint<T>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<CloudPoint<T>> {
        self.points
    }

    pub fn values(&self) -> Vec<Complex<T>> {
        self.points.iter().map(|p| p.z).collect()
    }

    /// Deterministic order: real part, imaginary part, tag.
    pub fn sort(&mut self) {
        self.points
            .sort_by(|a, b| cmp_complex(&a.z, &b.z).then_with(|| a.tag.cmp(&b.tag)));
    }

    /// Keeps one point per cell of a square grid of side `step`.
    pub fn grid_dedup(&mut self, step: T) {
        let mut seen = std::collections::HashSet::new();
        self.points.retain(|p| {
            let key = (
                (p.z.re / step).round().to_i64().unwrap_or(i64::MAX),
                (p.z.im / step).round().to_i64().unwrap_or(i64::MAX),
            );
            seen.insert(key)
        });
    }

    pub fn map_values(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> SpectrumCloud<T> {
        SpectrumCloud {
            points: self
                .points
                .iter()
                .map(|p| CloudPoint { z: f(p.z), tag: p.tag.clone() })
                .collect(),
            notes: self.notes.clone(),
        }
    }
}

/// Greedy tolerance matching of two multisets: every point of `a` is paired
/// with a distinct point of `b` within `tol`, and the sizes agree.
pub fn multisets_match<T: Real>(a: &[Complex<T>], b: &[Complex<T>], tol: T) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut b_sorted: Vec<Complex<T>> = b.to_vec();
    b_sorted.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap_or(std::cmp::Ordering::Equal));
    let mut used = vec![false; b_sorted.len()];
    let mut a_sorted = a.to_vec();
    a_sorted.sort_by(cmp_complex);
    for z in &a_sorted {
        let lo = b_sorted.partition_point(|w| w.re < z.re - tol);
        let mut best: Option<(usize, T)> = None;
        for (idx, w) in b_sorted.iter().enumerate().skip(lo) {
            if w.re > z.re + tol {
                break;
            }
            if used[idx] {
                continue;
            }
            let d = (w - z).norm();
            if d <= tol && best.map_or(true, |(_, bd)| d < bd) {
                best = Some((idx, d));
            }
        }
        match best {
            Some((idx, _)) => used[idx] = true,
            None => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn matching_respects_multiplicity() {
        let a = [C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)];
        let b = [C::new(1e-9, 0.0), C::new(1.0, 0.0), C::new(0.0, 1e-9)];
        assert!(multisets_match(&a, &b, 1e-8));
        let c = [C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0)];
        assert!(!multisets_match(&a, &c, 1e-8));
    }

    #[test]
    fn grid_dedup_merges_close_points() {
        let mut cloud = SpectrumCloud::tagged(
            [C::new(0.0, 0.0), C::new(1e-9, 0.0), C::new(1.0, 0.0)],
            Tag::finite(1),
        );
        cloud.grid_dedup(1e-6);
        assert_eq!(cloud.len(), 2);
    }
}
