//! The primal range hypergraph: every subset of a point set cut out by a
//! homothet of a fixed convex polygon, with one canonical realizing homothet
//! per subset.

mod general;
mod square;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Containment, ConvexShape, Homothet, Point};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizedRange {
    pub homothet: Homothet,
    pub points: Vec<usize>,
    pub determinators: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RangeFamily {
    pub ranges: Vec<RealizedRange>,
    pub source_point_count: usize,
}

impl RangeFamily {
    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    /// Soft size check `|ranges| ≤ c·n³`.
    pub fn within_cubic(&self, c: usize) -> bool {
        let n = self.source_point_count.max(1);
        self.ranges.len() <= c * n * n * n
    }

    pub fn subsets(&self) -> Vec<Vec<usize>> {
        self.ranges.iter().map(|r| r.points.clone()).collect()
    }
}

/// Options for [`scan`].
#[derive(Clone, Copy, Default)]
pub struct ScanOptions<'a> {
    /// Per-point label in `0..k`, for per-range label counts.
    pub labels: Option<(&'a [u8], usize)>,
    /// Per-point keys; a range's fingerprint is their wrapping sum.
    pub keys: Option<&'a [u128]>,
    pub min_size: usize,
    pub max_size: Option<usize>,
    /// Use the general polygon sweep even for axis-parallel squares.
    pub force_general: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanStats {
    pub visited: u64,
    /// Most points seen on a single vertex-homothet boundary (general sweep
    /// only); above 3 means the set is not in general position.
    pub max_boundary: usize,
    /// Bounding box of the vertex homothets (general sweep only).
    #[serde(skip)]
    pub extent: Option<(Point, Point)>,
    pub completed: bool,
}

enum Origin<'a> {
    Singleton(usize),
    Square(square::WindowGeom),
    General(&'a general::Witness, &'a general::Arrangement),
}

/// One realized range handed to a [`scan`] visitor.
pub struct RangeView<'a> {
    members: &'a [usize],
    counts: &'a [u32],
    fingerprint: u128,
    points: &'a [Point],
    shape: &'a ConvexShape,
    origin: Origin<'a>,
}

impl<'a> RangeView<'a> {
    /// Member indices, in no particular order.
    pub fn members(&self) -> &[usize] {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members per label, when labels were supplied.
    pub fn counts(&self) -> &[u32] {
        self.counts
    }

    pub fn fingerprint(&self) -> u128 {
        self.fingerprint
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.members.to_vec();
        v.sort_unstable();
        v
    }

    pub fn homothet(&self) -> Homothet {
        match &self.origin {
            Origin::Singleton(p) => general::singleton_homothet(*p, self.points, self.shape),
            Origin::Square(g) => g.homothet(self.points, self.shape),
            Origin::General(w, arr) => general::realize(w, self.points, self.shape, arr),
        }
    }

    pub fn realize(&self) -> RealizedRange {
        let homothet = self.homothet();
        let determinators = match &self.origin {
            Origin::Square(g) => g.determinators(),
            Origin::Singleton(_) | Origin::General(..) => {
                let mut out = Vec::new();
                for &p in self.members {
                    for k in self.shape.tight_sides(&homothet, &self.points[p]) {
                        out.push((p, k));
                    }
                }
                out.sort_unstable();
                out
            }
        };
        RealizedRange { homothet, points: self.sorted(), determinators }
    }
}

fn check_distinct(points: &[Point]) -> Result<()> {
    let mut sorted: Vec<&Point> = points.iter().collect();
    sorted.sort();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::Precondition(format!("duplicate point {:?}", w[0])));
        }
    }
    Ok(())
}

/// Streams every nonempty realizable subset to `visit`; the visitor returns
/// `false` to stop. The order is deterministic but not sorted.
pub fn scan(
    points: &[Point],
    shape: &ConvexShape,
    opts: &ScanOptions,
    visit: &mut dyn FnMut(&RangeView) -> bool,
) -> Result<ScanStats> {
    check_distinct(points)?;
    let k = opts.labels.map_or(0, |(_, k)| k);
    if let Some((vals, _)) = opts.labels {
        if vals.len() != points.len() || vals.iter().any(|&v| v as usize >= k) {
            return Err(Error::Precondition("labels do not match the point set".into()));
        }
    }
    let max_size = opts.max_size.unwrap_or(usize::MAX);
    let mut stats = ScanStats::default();
    if shape.is_axis_square() && !opts.force_general {
        let aux = square::Aux { labels: opts.labels, keys: opts.keys, min_size: opts.min_size.max(2), max_size };
        let mut go = true;
        // Singletons first.
        if opts.min_size <= 1 && max_size >= 1 {
            let mut counts = vec![0u32; k];
            for p in 0..points.len() {
                counts.iter_mut().for_each(|c| *c = 0);
                if let Some((vals, _)) = opts.labels {
                    counts[vals[p] as usize] = 1;
                }
                let members = [p];
                let view = RangeView {
                    members: &members,
                    counts: &counts,
                    fingerprint: opts.keys.map_or(0, |ks| ks[p]),
                    points,
                    shape,
                    origin: Origin::Singleton(p),
                };
                stats.visited += 1;
                if !visit(&view) {
                    go = false;
                    break;
                }
            }
        }
        if go {
            let mut f = |w: &square::Window| {
                stats.visited += 1;
                visit(&RangeView {
                    members: w.members,
                    counts: w.counts,
                    fingerprint: w.fingerprint,
                    points,
                    shape,
                    origin: Origin::Square(w.geom),
                })
            };
            go = match square::scaled_integers(points) {
                Some((xs, ys)) => square::scan(&xs, &ys, &aux, &mut f),
                None => {
                    let xs: Vec<Rational> = points.iter().map(|p| p.x.clone()).collect();
                    let ys: Vec<Rational> = points.iter().map(|p| p.y.clone()).collect();
                    square::scan(&xs, &ys, &aux, &mut f)
                }
            };
        }
        stats.completed = go;
        return Ok(stats);
    }

    let arr = general::Arrangement::new(shape);
    let sw = general::sweep(points, shape, &arr);
    stats.max_boundary = sw.max_boundary;
    stats.extent = sw.extent.clone();
    let mut entries: Vec<(Vec<usize>, &general::Witness)> = sw.ranges.iter().map(|(b, w)| (b.indices(), w)).collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let mut counts = vec![0u32; k];
    stats.completed = true;
    for (members, w) in &entries {
        if members.len() < opts.min_size || members.len() > max_size {
            continue;
        }
        counts.iter_mut().for_each(|c| *c = 0);
        if let Some((vals, _)) = opts.labels {
            for &p in members {
                counts[vals[p] as usize] += 1;
            }
        }
        let fingerprint = opts.keys.map_or(0, |ks| members.iter().fold(0u128, |acc, &p| acc.wrapping_add(ks[p])));
        stats.visited += 1;
        let view = RangeView { members, counts: &counts, fingerprint, points, shape, origin: Origin::General(w, &arr) };
        if !visit(&view) {
            stats.completed = false;
            break;
        }
    }
    Ok(stats)
}

/// Materializes the whole family in canonical order (sorted member lists).
pub fn enumerate_ranges(points: &[Point], shape: &ConvexShape) -> Result<RangeFamily> {
    let mut ranges = Vec::new();
    scan(points, shape, &ScanOptions::default(), &mut |v| {
        ranges.push(v.realize());
        true
    })?;
    ranges.sort_by(|a, b| a.points.cmp(&b.points));
    Ok(RangeFamily { ranges, source_point_count: points.len() })
}

/// Ranges with exactly `c` points, in canonical order.
pub fn heavy_ranges(family: &RangeFamily, c: usize) -> Vec<&RealizedRange> {
    family.ranges.iter().filter(|r| r.points.len() == c).collect()
}

/// Points of `points` inside the closed homothet, and those on its boundary.
pub fn classify(shape: &ConvexShape, h: &Homothet, points: &[Point]) -> (Vec<usize>, Vec<usize>) {
    let mut content = Vec::new();
    let mut boundary = Vec::new();
    for (i, p) in points.iter().enumerate() {
        match shape.containment(h, p) {
            Containment::Interior => content.push(i),
            Containment::Boundary => {
                content.push(i);
                boundary.push(i);
            }
            Containment::Outside => {}
        }
    }
    (content, boundary)
}

/// Largest ratio by which `p` pokes out of `h` as seen from `q` (a point of
/// the closed homothet); `None` if scaling about `q` can never reach `p`.
fn reach(shape: &ConvexShape, h: &Homothet, q: &Point, p: &Point) -> Option<Rational> {
    let d = p.sub(q);
    let mut best = Rational::zero();
    for k in 0..shape.n() {
        let nk = shape.normal(k);
        let room = -shape.slack(h, q, k);
        let need = nk.dot(&d);
        if room.is_zero() {
            if need.is_positive() {
                return None;
            }
        } else {
            best = best.max(need / room);
        }
    }
    Some(best)
}

/// A homothet whose content is the content of `h` minus the boundary points
/// `z`, by shrinking (and in one case first inflating) `h` about a suitable
/// centre.
pub fn shrink_away(shape: &ConvexShape, h: &Homothet, points: &[Point], z: &[usize]) -> Result<Homothet> {
    let (content, boundary) = classify(shape, h, points);
    if let Some(&bad) = z.iter().find(|p| !boundary.contains(p)) {
        return Err(Error::Precondition(format!("point {bad} is not on the boundary")));
    }
    if z.is_empty() {
        return Ok(h.clone());
    }
    if boundary.len() > 3 {
        return Err(Error::Position(format!("{} points on one boundary", boundary.len())));
    }
    let keep: Vec<usize> = boundary.iter().copied().filter(|p| !z.contains(p)).collect();
    let half = Rational::new(1, 2);
    let shrink_about = |g: &Homothet, q: &Point, others: &[usize]| -> Homothet {
        let worst = others.iter().filter_map(|&p| reach(shape, g, q, &points[p])).max().unwrap_or(Rational::zero());
        g.scaled_about(q, &((Rational::one() + worst) * &half))
    };
    let interior: Vec<usize> = content.iter().copied().filter(|p| !boundary.contains(p)).collect();
    let result = match keep.len() {
        0 => shrink_about(h, &h.apply(&shape.centroid()), &interior),
        1 => shrink_about(h, &points[keep[0]], &interior),
        2 => {
            let zp = &points[z[0]];
            let entry = (0..points.len())
                .filter(|p| !content.contains(p))
                .filter_map(|p| reach(shape, h, zp, &points[p]))
                .min();
            let r = entry.map_or(Rational::from_int(2), |e| ((Rational::one() + e) * &half).min(Rational::from_int(2)));
            let big = h.scaled_about(zp, &r);
            let rest: Vec<usize> = content.iter().copied().filter(|&p| p != z[0]).collect();
            shrink_about(&big, &big.apply(&shape.centroid()), &rest)
        }
        _ => return Err(Error::Position("too many boundary points".into())),
    };
    let want: Vec<usize> = content.iter().copied().filter(|p| !z.contains(p)).collect();
    let (got, _) = classify(shape, &result, points);
    if got != want {
        return Err(Error::Position("shrinking did not isolate the requested points".into()));
    }
    Ok(result)
}
