//! Seeded perturbation into very general position, plus the enclosing
//! `−P` homothet that makes the Delaunay graph nice.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{bbox, ConvexShape, Point};
use crate::ranges::{scan, ScanOptions};
use crate::rational::Rational;

pub const MAX_HALVINGS: u32 = 64;
const JITTER_BITS: u32 = 20;

#[derive(Clone, Debug, Serialize)]
pub struct ConditionedSet {
    pub original: Vec<Point>,
    pub perturbed: Vec<Point>,
    /// Vertices of the enclosing `−P` homothet, in clockwise order.
    pub hull: Vec<Point>,
    pub seed: u64,
    pub magnitude: Rational,
    pub halvings: u32,
    /// Two-point ranges of `perturbed ++ hull`, found while checking it.
    #[serde(skip)]
    pub(crate) pairs: Vec<(usize, usize)>,
}

impl ConditionedSet {
    /// `perturbed` followed by `hull`.
    pub fn all_points(&self) -> Vec<Point> {
        self.perturbed.iter().chain(&self.hull).cloned().collect()
    }
}

/// Per-point keys for range fingerprints.
pub(crate) fn point_keys(n: usize) -> Vec<u128> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b65_7973);
    (0..n).map(|_| rng.gen()).collect()
}

/// Largest power of two not above `r` (which must be positive).
pub(crate) fn floor_pow2(r: &Rational) -> Rational {
    let mut e: i32 = (r.numer().bits() as i32) - (r.denom().bits() as i32);
    while &Rational::pow2(e) > r {
        e -= 1;
    }
    while &Rational::pow2(e + 1) <= r {
        e += 1;
    }
    Rational::pow2(e)
}

fn min_positive<'a>(it: impl Iterator<Item = &'a Rational>) -> Option<Rational> {
    it.filter(|r| r.is_positive()).min().cloned()
}

fn abs_diffs(vals: &[&Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(vals.len() * vals.len().saturating_sub(1) / 2);
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            out.push((vals[i] - vals[j]).abs());
        }
    }
    out.sort();
    out
}

/// Smallest nonzero `|a − b|` with `a ∈ xs`, `b ∈ ys`, both sorted.
fn min_cross_gap(xs: &[Rational], ys: &[Rational]) -> Option<Rational> {
    let (mut i, mut j) = (0, 0);
    let mut best: Option<Rational> = None;
    while i < xs.len() && j < ys.len() {
        let d = (&xs[i] - &ys[j]).abs();
        if d.is_positive() && best.as_ref().is_none_or(|b| &d < b) {
            best = Some(d);
        }
        if xs[i] < ys[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    best
}

fn start_magnitude(points: &[Point], shape: &ConvexShape) -> Rational {
    let Some((lo, hi)) = bbox(points) else { return Rational::one() };
    let diam = (&hi.x - &lo.x).max(&hi.y - &lo.y);
    let mut gap = if shape.is_axis_square() {
        let xs: Vec<&Rational> = points.iter().map(|p| &p.x).collect();
        let ys: Vec<&Rational> = points.iter().map(|p| &p.y).collect();
        let dx = abs_diffs(&xs);
        let dy = abs_diffs(&ys);
        let g = [min_positive(dx.iter()), min_positive(dy.iter()), min_cross_gap(&dx, &dy)].into_iter().flatten().min();
        let cap = &diam * Rational::pow2(-(JITTER_BITS as i32));
        g.map(|g| (g * Rational::new(1, 16)).min(cap.clone())).unwrap_or(cap)
    } else {
        let mut best: Option<Rational> = None;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let d = points[i].linf(&points[j]);
                if best.as_ref().is_none_or(|b| &d < b) {
                    best = Some(d);
                }
            }
        }
        best.unwrap_or_else(Rational::one) * Rational::pow2(-(JITTER_BITS as i32))
    };
    if !gap.is_positive() {
        gap = Rational::pow2(-(JITTER_BITS as i32));
    }
    floor_pow2(&gap)
}

fn jitter(p: &Point, mag: &Rational, rng: &mut ChaCha8Rng) -> Point {
    let span = 1i64 << JITTER_BITS;
    let unit = mag * Rational::pow2(-(JITTER_BITS as i32));
    let dx = Rational::from_int(rng.gen_range(-span..=span));
    let dy = Rational::from_int(rng.gen_range(-span..=span));
    Point::new(&p.x + &unit * dx, &p.y + &unit * dy)
}

/// Pairwise part of very general position: no two points on a line parallel
/// to a line through two shape vertices and, for squares, no square boundary
/// through four points.
pub fn pairwise_general(points: &[Point], shape: &ConvexShape) -> std::result::Result<(), String> {
    let dirs = shape.vertex_directions();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = points[j].sub(&points[i]);
            if d.is_zero() {
                return Err(format!("points {i} and {j} coincide"));
            }
            if dirs.iter().any(|e| e.cross(&d).is_zero()) {
                return Err(format!("points {i} and {j} are aligned with a shape direction"));
            }
        }
    }
    if shape.is_axis_square() {
        let xs: Vec<&Rational> = points.iter().map(|p| &p.x).collect();
        let ys: Vec<&Rational> = points.iter().map(|p| &p.y).collect();
        let dx = abs_diffs(&xs);
        let dy = abs_diffs(&ys);
        let (mut i, mut j) = (0, 0);
        while i < dx.len() && j < dy.len() {
            match dx[i].cmp(&dy[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Err("a square boundary passes through four points".into()),
            }
        }
    }
    Ok(())
}

/// Sorted range fingerprints and, for the general sweep, the boundary and
/// extent statistics.
fn fingerprints(
    points: &[Point],
    shape: &ConvexShape,
    keys: &[u128],
) -> Result<(Vec<u128>, usize, Option<(Point, Point)>)> {
    let mut fps = Vec::new();
    let opts = ScanOptions { keys: Some(&keys[..points.len()]), ..Default::default() };
    let stats = scan(points, shape, &opts, &mut |v| {
        fps.push(v.fingerprint());
        true
    })?;
    fps.sort_unstable();
    fps.dedup();
    Ok((fps, stats.max_boundary, stats.extent))
}

fn is_subset(small: &[u128], big: &[u128]) -> bool {
    let mut j = 0;
    for x in small {
        while j < big.len() && big[j] < *x {
            j += 1;
        }
        if j == big.len() || big[j] != *x {
            return false;
        }
    }
    true
}

/// Vertices of a `−P` homothet containing the box `center ± radius` in its
/// interior.
fn enclosing_hull(shape: &ConvexShape, center: &Point, radius: &Rational) -> Vec<Point> {
    let g = shape.centroid();
    // L∞ inradius of `P` about its centroid.
    let r0 = (0..shape.n())
        .map(|k| {
            let nk = shape.normal(k);
            (shape.offset(k) - nk.dot(&g)) / (nk.x.abs() + nk.y.abs())
        })
        .min()
        .expect("sides");
    let s = radius / &r0;
    let t = center.add(&g.scale(&s));
    shape.vertices().iter().map(|v| t.sub(&v.scale(&s))).collect()
}

/// Perturbs `points` into very general position without losing any range,
/// and appends the nicing hull. Deterministic in `seed`.
pub fn condition(points: &[Point], shape: &ConvexShape, seed: u64) -> Result<ConditionedSet> {
    let n = points.len();
    let keys = point_keys(n + shape.n());
    let (orig, _, _) = fingerprints(points, shape, &keys)?;
    let start = start_magnitude(points, shape);
    for halvings in 0..=MAX_HALVINGS {
        let mag = &start * Rational::pow2(-(halvings as i32));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(halvings));
        let perturbed: Vec<Point> = points.iter().map(|p| jitter(p, &mag, &mut rng)).collect();
        if pairwise_general(&perturbed, shape).is_err() {
            continue;
        }
        let (fps, max_boundary, extent) = fingerprints(&perturbed, shape, &keys)?;
        if max_boundary > 3 || !is_subset(&orig, &fps) {
            continue;
        }

        let (mut lo, mut hi) = bbox(&perturbed).unwrap_or((Point::origin(), Point::origin()));
        if let Some((a, b)) = extent {
            lo = Point::new(lo.x.min(a.x), lo.y.min(a.y));
            hi = Point::new(hi.x.max(b.x), hi.y.max(b.y));
        }
        let mut size = (&hi.x - &lo.x).max(&hi.y - &lo.y);
        if size.is_zero() {
            size = Rational::one();
        }
        let factor = if shape.is_axis_square() { 2 } else { 4 };
        let hull: Vec<Point> = enclosing_hull(shape, &lo.mid(&hi), &(size * Rational::from_int(factor)))
            .iter()
            .map(|p| jitter(p, &mag, &mut rng))
            .collect();

        let all: Vec<Point> = perturbed.iter().chain(&hull).cloned().collect();
        if pairwise_general(&all, shape).is_err() {
            continue;
        }
        let mut pairs = Vec::new();
        let mut worst = 0;
        if shape.is_axis_square() {
            let opts = ScanOptions { min_size: 2, max_size: Some(2), ..Default::default() };
            scan(&all, shape, &opts, &mut |v| {
                let m = v.sorted();
                pairs.push((m[0], m[1]));
                true
            })?;
        } else {
            let opts = ScanOptions { keys: Some(&keys[..all.len()]), ..Default::default() };
            let mut inner = Vec::new();
            let stats = scan(&all, shape, &opts, &mut |v| {
                let m = v.members();
                if m.len() == 2 {
                    let (a, b) = (m[0].min(m[1]), m[0].max(m[1]));
                    pairs.push((a, b));
                }
                if m.iter().all(|&p| p < n) {
                    inner.push(v.fingerprint());
                }
                true
            })?;
            worst = stats.max_boundary;
            inner.sort_unstable();
            inner.dedup();
            // The hull must not cut off any range of the perturbed set.
            if inner != fps {
                return Err(Error::Invariant("hull changes the ranges of the point set".into()));
            }
        }
        if worst > 3 {
            continue;
        }
        pairs.sort_unstable();
        return Ok(ConditionedSet {
            original: points.to_vec(),
            perturbed,
            hull,
            seed,
            magnitude: mag,
            halvings,
            pairs,
        });
    }
    Err(Error::ConditioningFailed(MAX_HALVINGS))
}
