//! Directed Hausdorff distances between point clouds, and the density
//! report comparing periodic spectra (and the unit disk) against finite ones.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::cloud::SpectrumCloud;
use crate::error::{Error, Result};
use crate::finite::{enumerate_sigma, EnumerationOptions};
use crate::scalar::Real;
use crate::sign::SignVector;
use crate::symbol::periodic_spectrum;

/// Largest period accepted by [`density_report`].
pub const DENSITY_MAX_PERIOD: usize = 10;

/// Smallest bucket side.
const MIN_CELL: f64 = 1e-6;

/// Uniform bucket grid over a point set; each cell lists the indices of the
/// points inside it.
struct BucketGrid<'a, T> {
    points: &'a [Complex<T>],
    origin: (T, T),
    cell: T,
    nx: usize,
    ny: usize,
    /// `starts[c]..starts[c + 1]` indexes `order` for cell `c = iy * nx + ix`.
    starts: Vec<usize>,
    order: Vec<usize>,
}

impl<'a, T: Real> BucketGrid<'a, T> {
    fn new(points: &'a [Complex<T>]) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (T::infinity(), T::neg_infinity(), T::infinity(), T::neg_infinity());
        for z in points {
            x0 = x0.min(z.re);
            x1 = x1.max(z.re);
            y0 = y0.min(z.im);
            y1 = y1.max(z.im);
        }
        let diam = (x1 - x0).hypot(y1 - y0);
        let cell = (diam / T::from_usize_lossy(points.len()).sqrt()).max(T::lit(MIN_CELL));
        let count = |w: T| (w / cell).floor().to_usize().unwrap_or(0) + 1;
        let (nx, ny) = (count(x1 - x0), count(y1 - y0));
        let mut grid = BucketGrid {
            points,
            origin: (x0, y0),
            cell,
            nx,
            ny,
            starts: vec![0; nx * ny + 1],
            order: Vec::with_capacity(points.len()),
        };
        let cells: Vec<usize> = points
            .iter()
            .map(|z| {
                let (ix, iy) = grid.clamped_cell(*z);
                iy * nx + ix
            })
            .collect();
        for &c in &cells {
            grid.starts[c + 1] += 1;
        }
        for c in 0..nx * ny {
            grid.starts[c + 1] += grid.starts[c];
        }
        let mut fill = grid.starts.clone();
        grid.order = vec![0; points.len()];
        for (i, &c) in cells.iter().enumerate() {
            grid.order[fill[c]] = i;
            fill[c] += 1;
        }
        grid
    }

    fn clamped_cell(&self, z: Complex<T>) -> (usize, usize) {
        let idx = |v: T, o: T, n: usize| {
            let f = ((v - o) / self.cell).floor();
            if f <= T::zero() {
                0
            } else {
                f.to_usize().unwrap_or(n - 1).min(n - 1)
            }
        };
        (idx(z.re, self.origin.0, self.nx), idx(z.im, self.origin.1, self.ny))
    }

    fn scan_cell(&self, ix: usize, iy: usize, x: Complex<T>, best: &mut T) {
        let c = iy * self.nx + ix;
        for &i in &self.order[self.starts[c]..self.starts[c + 1]] {
            let d = (self.points[i] - x).norm();
            if d < *best {
                *best = d;
            }
        }
    }

    /// Exact nearest distance: rings of cells around `x` are scanned until
    /// every unscanned cell is provably farther than the best hit.
    fn nearest(&self, x: Complex<T>) -> T {
        let (cx, cy) = self.clamped_cell(x);
        let (cx, cy) = (cx as isize, cy as isize);
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        let mut best = T::infinity();
        // guards the geometric bound against rounding in `norm`
        let slack = T::one() - T::lit(1e-9);
        let mut r: isize = 0;
        loop {
            let (lo_x, hi_x, lo_y, hi_y) = (cx - r, cx + r, cy - r, cy + r);
            for iy in lo_y.max(0)..=hi_y.min(ny - 1) {
                let on_edge_y = iy == lo_y || iy == hi_y;
                if on_edge_y {
                    for ix in lo_x.max(0)..=hi_x.min(nx - 1) {
                        self.scan_cell(ix as usize, iy as usize, x, &mut best);
                    }
                } else {
                    for ix in [lo_x, hi_x] {
                        if (0..nx).contains(&ix) {
                            self.scan_cell(ix as usize, iy as usize, x, &mut best);
                        }
                    }
                }
            }
            // lower bound on the distance to any cell outside the scanned block
            let cell = self.cell;
            let edge = |i: isize, o: T| o + cell * T::from_isize(i).unwrap();
            let mut bound = T::infinity();
            if lo_x > 0 {
                bound = bound.min((x.re - edge(lo_x, self.origin.0)).max(T::zero()));
            }
            if hi_x < nx - 1 {
                bound = bound.min((edge(hi_x + 1, self.origin.0) - x.re).max(T::zero()));
            }
            if lo_y > 0 {
                bound = bound.min((x.im - edge(lo_y, self.origin.1)).max(T::zero()));
            }
            if hi_y < ny - 1 {
                bound = bound.min((edge(hi_y + 1, self.origin.1) - x.im).max(T::zero()));
            }
            if bound.is_infinite() || best < bound * slack {
                return best;
            }
            r += 1;
        }
    }
}

fn check_input<T: Real>(label: &str, pts: &[Complex<T>]) -> Result<()> {
    if pts.is_empty() {
        return Err(Error::Argument(format!("{label} is empty")));
    }
    if pts.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Argument(format!("{label} contains non-finite points")));
    }
    Ok(())
}

/// Distance from each point of `x` to its nearest neighbour in `y`.
pub fn nearest_distances<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> Result<Vec<T>> {
    check_input("source cloud", x)?;
    check_input("target cloud", y)?;
    let grid = BucketGrid::new(y);
    Ok(x.par_iter().map(|&z| grid.nearest(z)).collect())
}

/// `max_{x in X} min_{y in Y} |x - y|`.
pub fn directed_hausdorff<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> Result<T> {
    Ok(nearest_distances(x, y)?.into_iter().fold(T::zero(), T::max))
}

pub fn directed_hausdorff_clouds<T: Real>(x: &SpectrumCloud<T>, y: &SpectrumCloud<T>) -> Result<T> {
    directed_hausdorff(&x.values(), &y.values())
}

/// Double-loop reference implementation.
pub fn directed_hausdorff_brute<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> Result<T> {
    check_input("source cloud", x)?;
    check_input("target cloud", y)?;
    Ok(x.iter()
        .map(|a| y.iter().map(|b| (b - a).norm()).fold(T::infinity(), T::min))
        .fold(T::zero(), T::max))
}

/// Lattice points `(i step, j step)` in the closed unit disk, plus the two
/// boundary points `(±sqrt(1 - y^2), y)` of every lattice row.
pub fn disk_grid<T: Real>(step: T) -> Result<Vec<Complex<T>>> {
    if !(step > T::zero()) || step > T::one() {
        return Err(Error::Argument("disk grid step must lie in (0, 1]".into()));
    }
    let h = (T::one() / step).floor().to_i64().unwrap_or(0);
    let mut out = Vec::new();
    for j in -h..=h {
        let y = step * T::from_i64(j).unwrap();
        let half = (T::one() - y * y).max(T::zero()).sqrt();
        for i in -h..=h {
            let x = step * T::from_i64(i).unwrap();
            if x * x + y * y <= T::one() {
                out.push(Complex::new(x, y));
            }
        }
        out.push(Complex::new(half, y));
        if half > T::zero() {
            out.push(Complex::new(-half, y));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityParams {
    pub max_n: usize,
    pub max_m: usize,
    pub samples: usize,
    pub disk_step: f64,
    pub tol: f64,
    pub cap: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DensityTiming {
    pub periodic_secs: f64,
    pub finite_secs: f64,
    pub distance_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub params: DensityParams,
    /// Size of the periodic cloud.
    pub periodic_points: usize,
    /// Size of the accumulated finite cloud at each `n`.
    pub finite_points: BTreeMap<usize, usize>,
    pub disk_points: usize,
    /// `d(periodic -> sigma_{<= n})`.
    pub per_n: BTreeMap<usize, f64>,
    /// `d(disk grid -> sigma_{<= n})`.
    pub disk: BTreeMap<usize, f64>,
    /// Kept out of serialized output so reports are reproducible byte for byte.
    #[serde(skip)]
    pub timing: DensityTiming,
}

impl DensityReport {
    /// `per_n` is nonincreasing up to `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.per_n.values().zip(self.per_n.values().skip(1)).all(|(a, b)| *b <= *a + slack)
    }
}

/// Rotations of a periodic pattern give the same operator up to a shift, so
/// only the rotation-minimal mask of each necklace is solved.
fn is_necklace_rep(mask: u64, m: usize) -> bool {
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    (1..m).all(|s| ((mask >> s) | (mask << (m - s))) & full >= mask)
}

/// Periodic spectra of every pattern of period `<= max_m`, one representative
/// per rotation class.
pub fn periodic_union<T: Real>(max_m: usize, samples: usize, tol: T) -> Result<SpectrumCloud<T>> {
    let mut cloud = SpectrumCloud::new();
    for m in 1..=max_m {
        let masks: Vec<u64> = (0..1u64 << m).filter(|&mk| is_necklace_rep(mk, m)).collect();
        let parts: Vec<SpectrumCloud<T>> = masks
            .par_iter()
            .map(|&mk| periodic_spectrum(&SignVector::from_mask(mk, m), samples, tol))
            .collect::<Result<_>>()?;
        for p in parts {
            cloud.merge(p);
        }
    }
    Ok(cloud)
}

/// Distances from the sampled periodic spectra of all patterns with period
/// `<= max_m`, and from the unit-disk grid, to the accumulated finite
/// spectra `sigma_1 ∪ ... ∪ sigma_n`, for `n = 2..=max_n`.
pub fn density_report(
    max_n: usize,
    max_m: usize,
    samples: usize,
    disk_step: f64,
    tol: f64,
    opts: EnumerationOptions,
) -> Result<DensityReport> {
    if max_n < 2 {
        return Err(Error::Argument(format!("density report needs max_n >= 2, got {max_n}")));
    }
    if max_n > opts.cap {
        return Err(Error::CapExceeded { n: max_n, cap: opts.cap });
    }
    if max_m == 0 || max_m > DENSITY_MAX_PERIOD {
        return Err(Error::Argument(format!(
            "density report needs 1 <= max_m <= {DENSITY_MAX_PERIOD}, got {max_m}"
        )));
    }
    let mut timing = DensityTiming::default();

    let t0 = Instant::now();
    let periodic = periodic_union::<f64>(max_m, samples, tol)?.values();
    timing.periodic_secs = t0.elapsed().as_secs_f64();
    let disk = disk_grid(disk_step)?;

    let mut sigma: Vec<Complex<f64>> = Vec::new();
    let mut finite_points = BTreeMap::new();
    let mut per_n = BTreeMap::new();
    let mut disk_d = BTreeMap::new();
    for n in 1..=max_n {
        let t = Instant::now();
        sigma.extend(enumerate_sigma::<f64>(n, tol, opts)?.values());
        timing.finite_secs += t.elapsed().as_secs_f64();
        if n < 2 {
            continue;
        }
        let t = Instant::now();
        per_n.insert(n, directed_hausdorff(&periodic, &sigma)?);
        disk_d.insert(n, directed_hausdorff(&disk, &sigma)?);
        finite_points.insert(n, sigma.len());
        timing.distance_secs += t.elapsed().as_secs_f64();
    }

    Ok(DensityReport {
        params: DensityParams {
            max_n,
            max_m,
            samples,
            disk_step,
            tol,
            cap: opts.cap,
        },
        periodic_points: periodic.len(),
        finite_points,
        disk_points: disk.len(),
        per_n,
        disk: disk_d,
        timing,
    })
}
