//! Exhaustive checks of colourings over every realizable range, and the
//! empirical goodness scan.

use num_bigint::BigUint;
use serde::Serialize;

use crate::coloring::{bad_turns, find_good_3path, Color};
use crate::delaunay::{build_dt, condition, induce_set, longest_path};
use crate::error::{Error, Result};
use crate::geom::{normalize, AffineMap, ConvexShape, Point, ShapeKind};
use crate::ranges::{scan, RealizedRange, ScanOptions};

/// Violations listed in a report; the count is always exact.
pub const VIOLATION_CAP: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub label: u32,
    pub range: RealizedRange,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub shape: ShapeKind,
    pub open: bool,
    pub colors: u32,
    /// Decimal string; polychromatic thresholds outgrow machine integers.
    pub threshold: String,
    pub total_ranges: u64,
    /// Largest range missing at least one label (for two colours, the
    /// largest monochromatic range).
    pub max_deficient_size: usize,
    /// Smallest size from which every range in this instance has all labels.
    pub empirical_threshold: usize,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }
}

fn frame(points: &[Point], shape: &ConvexShape) -> Result<(AffineMap, ConvexShape, Vec<Point>)> {
    let (map, nshape) = normalize(shape)?;
    let pts = points.iter().map(|p| map.apply(p)).collect();
    Ok((map.inverse()?, nshape, pts))
}

fn check_labels(points: &[Point], labels: &[u32], k: u32) -> Result<Vec<u8>> {
    if labels.len() != points.len() {
        return Err(Error::Precondition(format!("{} labels for {} points", labels.len(), points.len())));
    }
    if k == 0 || k > 255 {
        return Err(Error::Precondition(format!("cannot verify {k} colours")));
    }
    labels
        .iter()
        .map(|&l| if l < k { Ok(l as u8) } else { Err(Error::Precondition(format!("label {l} out of range"))) })
        .collect()
}

/// Checks that every range with at least `threshold` points carries all `k`
/// labels.
pub fn verify_labels(
    points: &[Point],
    shape: &ConvexShape,
    labels: &[u32],
    k: u32,
    threshold: &BigUint,
) -> Result<VerificationReport> {
    let small = check_labels(points, labels, k)?;
    let (back, nshape, pts) = frame(points, shape)?;
    let mut total = 0u64;
    let mut max_deficient = 0usize;
    let mut count = 0u64;
    let mut violations = Vec::new();
    let opts = ScanOptions { labels: Some((&small, k as usize)), ..Default::default() };
    scan(&pts, &nshape, &opts, &mut |v| {
        total += 1;
        let missing = v.counts().contains(&0);
        if missing {
            max_deficient = max_deficient.max(v.len());
            if BigUint::from(v.len()) >= *threshold {
                count += 1;
                if violations.len() < VIOLATION_CAP {
                    let label = v.counts().iter().position(|&c| c > 0).unwrap_or(0) as u32;
                    let mut range = v.realize();
                    range.homothet = back.apply_homothet(&range.homothet);
                    violations.push(Violation { label, range });
                }
            }
        }
        true
    })?;
    violations
        .sort_by(|a, b| b.range.points.len().cmp(&a.range.points.len()).then(a.range.points.cmp(&b.range.points)));
    Ok(VerificationReport {
        shape: shape.kind(),
        open: shape.is_open(),
        colors: k,
        threshold: threshold.to_string(),
        total_ranges: total,
        max_deficient_size: max_deficient,
        empirical_threshold: max_deficient + 1,
        violation_count: count,
        violations,
    })
}

/// Two-colour check against threshold `m`.
pub fn verify(points: &[Point], shape: &ConvexShape, colors: &[Color], m: u64) -> Result<VerificationReport> {
    let labels: Vec<u32> = colors.iter().map(|&c| u32::from(c == Color::Blue)).collect();
    verify_labels(points, shape, &labels, 2, &BigUint::from(m))
}

/// Polychromatic check with `k` labels against threshold `m_k`.
pub fn verify_polychromatic(
    points: &[Point],
    shape: &ConvexShape,
    labels: &[u32],
    k: u32,
    threshold: &BigUint,
) -> Result<VerificationReport> {
    verify_labels(points, shape, labels, k, threshold)
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodnessWitness {
    pub points: Vec<usize>,
    pub path: Vec<usize>,
    /// Bad 2-paths along `path`, as (position of the middle vertex, side).
    pub bad_turns: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodnessReport {
    pub c: usize,
    pub seed: u64,
    pub ranges_checked: u64,
    pub tree_ranges: u64,
    pub witness_count: u64,
    pub witnesses: Vec<GoodnessWitness>,
}

/// Looks for a good 3-path in every tree-inducing range with at least `c`
/// points; each failure is a witness against universal goodness.
pub fn scan_universal_goodness(points: &[Point], shape: &ConvexShape, c: usize, seed: u64) -> Result<GoodnessReport> {
    let (_, nshape, pts) = frame(points, shape)?;
    let cond = condition(&pts, &nshape, seed)?;
    let dt = build_dt(&cond, &nshape)?;
    let mut report =
        GoodnessReport { c, seed, ranges_checked: 0, tree_ranges: 0, witness_count: 0, witnesses: Vec::new() };
    let mut failure: Option<Error> = None;
    let opts = ScanOptions { min_size: c.max(1), ..Default::default() };
    scan(&cond.perturbed, &nshape, &opts, &mut |v| {
        report.ranges_checked += 1;
        let members = v.sorted();
        let sub = induce_set(&dt, &members);
        if !sub.is_tree() {
            return true;
        }
        report.tree_ranges += 1;
        match find_good_3path(&dt, &sub, &nshape) {
            Ok(_) => true,
            Err(Error::NoGoodPath { .. }) => {
                report.witness_count += 1;
                if report.witnesses.len() < VIOLATION_CAP {
                    let witness = longest_path(&sub)
                        .and_then(|path| Ok((bad_turns(&dt, &nshape, &path)?, path)))
                        .map(|(bad, path)| GoodnessWitness { points: members, path, bad_turns: bad });
                    match witness {
                        Ok(w) => report.witnesses.push(w),
                        Err(e) => {
                            failure = Some(e);
                            return false;
                        }
                    }
                }
                true
            }
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::two_color;
    use crate::gen;

    #[test]
    fn uniform_colouring_below_threshold_is_vacuous() {
        let pts = gen::uniform(10, 50, 3);
        let r = verify(&pts, &ConvexShape::unit_square(), &[Color::Red; 10], 215).unwrap();
        assert!(r.ok());
        assert_eq!(r.max_deficient_size, 10);
    }

    #[test]
    fn uniform_colouring_is_caught() {
        let pts = gen::uniform(12, 50, 4);
        let r = verify(&pts, &ConvexShape::unit_square(), &[Color::Blue; 12], 5).unwrap();
        assert!(!r.ok());
        assert!(r.violations.iter().all(|v| v.label == 1 && v.range.points.len() >= 5));
        assert_eq!(r.violations[0].range.points.len(), 12);
    }

    #[test]
    fn violation_homothets_are_in_the_input_frame() {
        let par =
            ConvexShape::new(vec![Point::ints(0, 0), Point::ints(2, 1), Point::ints(3, 3), Point::ints(1, 2)], false)
                .unwrap();
        let pts = gen::uniform(9, 40, 5);
        let r = verify(&pts, &par, &[Color::Red; 9], 3).unwrap();
        for v in &r.violations {
            let (inside, _) = crate::ranges::classify(&par, &v.range.homothet, &pts);
            assert_eq!(inside, v.range.points);
        }
    }

    #[test]
    fn two_colouring_passes_and_k1_is_trivial() {
        let pts = gen::clustered(60, 1);
        let sq = ConvexShape::unit_square();
        let st = two_color(&pts, &sq, 0).unwrap();
        let r = verify(&pts, &sq, &st.final_colors, st.threshold).unwrap();
        assert!(r.ok());
        let r1 = verify_polychromatic(&pts, &sq, &vec![0; 60], 1, &BigUint::from(1u32)).unwrap();
        assert!(r1.ok());
        assert_eq!(r1.max_deficient_size, 0);
    }

    #[test]
    fn squares_are_good_on_random_sets() {
        let mut pts = gen::uniform(30, 1000, 9);
        pts.extend((0..30).map(|i| Point::ints(2000 + 10 * i + (i * 37) % 7, 10 * i + (i * 53) % 9)));
        let r = scan_universal_goodness(&pts, &ConvexShape::unit_square(), 8, 0).unwrap();
        assert_eq!(r.witness_count, 0);
        assert!(r.tree_ranges > 0);
    }
}
