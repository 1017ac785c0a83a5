//! Covering a square by smaller squares, none of which has a marked point in
//! its interior.
//!
//! Candidates are maximal empty squares with a corner or a side on the grid
//! of marked coordinates. The cover is chosen greedily over the cells of the
//! compressed grid, pruned, and replaced by an exact minimum cover when the
//! greedy count is above `2l + 2`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{ConvexShape, Homothet, Point};
use crate::rational::Rational;

pub const SEARCH_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverMethod {
    Greedy,
    Exact,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfCover {
    pub target: Homothet,
    pub avoid: Vec<Point>,
    pub pieces: Vec<Homothet>,
    pub method: CoverMethod,
}

/// Axis square `[x, x+s] × [y, y+s]` in the unit frame.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Sq {
    x: Rational,
    y: Rational,
    s: Rational,
}

impl Sq {
    fn strictly_contains(&self, p: &(Rational, Rational)) -> bool {
        self.x < p.0 && p.0 < &self.x + &self.s && self.y < p.1 && p.1 < &self.y + &self.s
    }

    fn covers(&self, p: &(Rational, Rational)) -> bool {
        self.x <= p.0 && p.0 <= &self.x + &self.s && self.y <= p.1 && p.1 <= &self.y + &self.s
    }

    fn contains_sq(&self, o: &Sq) -> bool {
        self.x <= o.x && self.y <= o.y && &o.x + &o.s <= &self.x + &self.s && &o.y + &o.s <= &self.y + &self.s
    }
}

fn empty(sq: &Sq, pts: &[(Rational, Rational)]) -> bool {
    !pts.iter().any(|p| sq.strictly_contains(p))
}

fn candidates(pts: &[(Rational, Rational)]) -> Vec<Sq> {
    let zero = Rational::zero();
    let one = Rational::one();
    let xs: Vec<Rational> = [zero.clone(), one.clone()]
        .into_iter()
        .chain(pts.iter().map(|p| p.0.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let ys: Vec<Rational> = [zero.clone(), one.clone()]
        .into_iter()
        .chain(pts.iter().map(|p| p.1.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out: BTreeSet<Sq> = BTreeSet::new();
    // Largest empty square with a corner at a grid node, in each direction.
    for gx in &xs {
        for gy in &ys {
            for dx in [1i64, -1] {
                for dy in [1i64, -1] {
                    let room_x = if dx > 0 { &one - gx } else { gx.clone() };
                    let room_y = if dy > 0 { &one - gy } else { gy.clone() };
                    let mut s = room_x.min(room_y);
                    for p in pts {
                        let ux = (&p.0 - gx) * Rational::from_int(dx);
                        let uy = (&p.1 - gy) * Rational::from_int(dy);
                        if ux.is_positive() && uy.is_positive() {
                            s = s.min(ux.max(uy));
                        }
                    }
                    if !s.is_positive() {
                        continue;
                    }
                    let x = if dx > 0 { gx.clone() } else { gx - &s };
                    let y = if dy > 0 { gy.clone() } else { gy - &s };
                    out.insert(Sq { x, y, s });
                }
            }
        }
    }
    // Squares spanning two grid lines, slid to a grid position.
    for (major, minor, vertical) in [(&xs, &ys, true), (&ys, &xs, false)] {
        for i in 0..major.len() {
            for m1 in &major[i + 1..] {
                let m0 = &major[i];
                let s = m1 - m0;
                for g in minor {
                    for lo in [g.clone(), g - &s] {
                        if lo.is_negative() || &lo + &s > one {
                            continue;
                        }
                        let sq = if vertical {
                            Sq { x: m0.clone(), y: lo, s: s.clone() }
                        } else {
                            Sq { x: lo, y: m0.clone(), s: s.clone() }
                        };
                        if empty(&sq, pts) {
                            out.insert(sq);
                        }
                    }
                }
            }
        }
    }
    let all: Vec<Sq> = out.into_iter().collect();
    all.iter().filter(|c| !all.iter().any(|d| d != *c && d.contains_sq(c))).cloned().collect()
}

/// Midpoints of the cells of the grid spanned by the squares' sides.
fn cells(squares: &[Sq]) -> Vec<(Rational, Rational)> {
    let mut xs = BTreeSet::from([Rational::zero(), Rational::one()]);
    let mut ys = xs.clone();
    for c in squares {
        xs.insert(c.x.clone());
        xs.insert(&c.x + &c.s);
        ys.insert(c.y.clone());
        ys.insert(&c.y + &c.s);
    }
    let xs: Vec<Rational> = xs.into_iter().collect();
    let ys: Vec<Rational> = ys.into_iter().collect();
    let mut out = Vec::new();
    for wx in xs.windows(2) {
        for wy in ys.windows(2) {
            out.push((wx[0].mid(&wx[1]), wy[0].mid(&wy[1])));
        }
    }
    out
}

type Mask = Vec<u64>;

fn mask_of(sq: &Sq, cells: &[(Rational, Rational)]) -> Mask {
    let mut m = vec![0u64; cells.len().div_ceil(64)];
    for (k, c) in cells.iter().enumerate() {
        if sq.covers(c) {
            m[k / 64] |= 1 << (k % 64);
        }
    }
    m
}

fn count_and(a: &Mask, b: &Mask) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn greedy(masks: &[Mask], ncells: usize) -> Option<Vec<usize>> {
    let mut unc: Mask = vec![0; ncells.div_ceil(64)];
    for k in 0..ncells {
        unc[k / 64] |= 1 << (k % 64);
    }
    let mut chosen = Vec::new();
    while unc.iter().any(|&w| w != 0) {
        let (best, gain) = masks
            .iter()
            .enumerate()
            .map(|(i, m)| (i, count_and(m, &unc)))
            .max_by_key(|&(i, g)| (g, std::cmp::Reverse(i)))?;
        if gain == 0 {
            return None;
        }
        chosen.push(best);
        for (u, m) in unc.iter_mut().zip(&masks[best]) {
            *u &= !m;
        }
    }
    // Drop pieces whose cells are all covered by the others.
    let mut i = 0;
    while i < chosen.len() {
        let others: Vec<usize> = chosen.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &c)| c).collect();
        let mut cov: Mask = vec![0; unc.len()];
        for &o in &others {
            for (c, m) in cov.iter_mut().zip(&masks[o]) {
                *c |= m;
            }
        }
        if masks[chosen[i]].iter().zip(&cov).all(|(m, c)| m & !c == 0) {
            chosen.remove(i);
        } else {
            i += 1;
        }
    }
    Some(chosen)
}

struct Exact<'a> {
    masks: &'a [Mask],
    /// Candidates covering each cell.
    by_cell: Vec<Vec<usize>>,
    best: Vec<usize>,
    steps: u64,
}

impl Exact<'_> {
    fn go(&mut self, unc: &Mask, chosen: &mut Vec<usize>) -> Result<()> {
        self.steps += 1;
        if self.steps > SEARCH_BUDGET {
            return Err(Error::Budget(SEARCH_BUDGET));
        }
        let mut pick: Option<usize> = None;
        for (w, &word) in unc.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let k = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if pick.is_none_or(|p| self.by_cell[k].len() < self.by_cell[p].len()) {
                    pick = Some(k);
                }
            }
        }
        let Some(cell) = pick else {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return Ok(());
        };
        if chosen.len() + 1 >= self.best.len() {
            return Ok(());
        }
        let mut options = self.by_cell[cell].clone();
        options.sort_by_key(|&c| std::cmp::Reverse(count_and(&self.masks[c], unc)));
        for c in options {
            let next: Mask = unc.iter().zip(&self.masks[c]).map(|(u, m)| u & !m).collect();
            chosen.push(c);
            self.go(&next, chosen)?;
            chosen.pop();
        }
        Ok(())
    }
}

fn unit_frame(shape: &ConvexShape, target: &Homothet) -> Result<(Point, Rational)> {
    if !shape.is_axis_square() {
        return Err(Error::UnsupportedShape("self-cover is implemented for axis-parallel squares".into()));
    }
    let v0 = &shape.vertices()[0];
    let side = (&shape.vertices()[1].y - &v0.y) * &target.scale;
    Ok((target.apply(v0), side))
}

/// A cover of the closed `target` square by at most `2l + 2` squares, none
/// with a point of `avoid` in its interior.
pub fn cover_square(shape: &ConvexShape, target: &Homothet, avoid: &[Point]) -> Result<SelfCover> {
    cover_impl(shape, target, avoid, false)
}

fn cover_impl(shape: &ConvexShape, target: &Homothet, avoid: &[Point], force_exact: bool) -> Result<SelfCover> {
    let (corner, side) = unit_frame(shape, target)?;
    let pts: Vec<(Rational, Rational)> =
        avoid.iter().map(|p| ((&p.x - &corner.x) / &side, (&p.y - &corner.y) / &side)).collect();
    let zero = Rational::zero();
    let one = Rational::one();
    for (i, p) in pts.iter().enumerate() {
        if p.0 <= zero || p.0 >= one || p.1 <= zero || p.1 >= one {
            return Err(Error::Precondition(format!("avoid point {i} is not interior to the target")));
        }
    }
    let cands = candidates(&pts);
    let cs = cells(&cands);
    let masks: Vec<Mask> = cands.iter().map(|c| mask_of(c, &cs)).collect();
    let mut chosen =
        greedy(&masks, cs.len()).ok_or_else(|| Error::Invariant("candidates do not cover the square".into()))?;
    let bound = 2 * pts.len() + 2;
    let mut method = CoverMethod::Greedy;
    if chosen.len() > bound || force_exact {
        let mut by_cell = vec![Vec::new(); cs.len()];
        for (c, m) in masks.iter().enumerate() {
            for (k, cell) in by_cell.iter_mut().enumerate() {
                if m[k / 64] >> (k % 64) & 1 == 1 {
                    cell.push(c);
                }
            }
        }
        let mut ex = Exact { masks: &masks, by_cell, best: chosen.clone(), steps: 0 };
        let mut full: Mask = vec![0; cs.len().div_ceil(64)];
        for k in 0..cs.len() {
            full[k / 64] |= 1 << (k % 64);
        }
        ex.go(&full, &mut Vec::new())?;
        chosen = ex.best;
        method = CoverMethod::Exact;
    }
    chosen.sort_by(|&a, &b| cands[a].cmp(&cands[b]));
    let v0 = &shape.vertices()[0];
    let unit = &shape.vertices()[1].y - &v0.y;
    let pieces = chosen
        .iter()
        .map(|&c| {
            let sq = &cands[c];
            let scale = &sq.s * &side / &unit;
            let at = Point::new(&corner.x + &sq.x * &side, &corner.y + &sq.y * &side);
            Homothet { translation: at.sub(&v0.scale(&scale)), scale }
        })
        .collect();
    Ok(SelfCover { target: target.clone(), avoid: avoid.to_vec(), pieces, method })
}

/// Checks every contract of a cover exactly; returns the first failure.
pub fn check_cover(shape: &ConvexShape, cover: &SelfCover) -> std::result::Result<(), String> {
    let (corner, side) = unit_frame(shape, &cover.target).map_err(|e| e.to_string())?;
    let to_unit = |h: &Homothet| -> Sq {
        let (c, s) = unit_frame(shape, h).expect("square");
        Sq { x: (&c.x - &corner.x) / &side, y: (&c.y - &corner.y) / &side, s: s / &side }
    };
    let whole = Sq { x: Rational::zero(), y: Rational::zero(), s: Rational::one() };
    let sqs: Vec<Sq> = cover.pieces.iter().map(to_unit).collect();
    let pts: Vec<(Rational, Rational)> =
        cover.avoid.iter().map(|p| ((&p.x - &corner.x) / &side, (&p.y - &corner.y) / &side)).collect();
    for (i, q) in sqs.iter().enumerate() {
        if !whole.contains_sq(q) {
            return Err(format!("piece {i} leaves the target"));
        }
        if !empty(q, &pts) {
            return Err(format!("piece {i} has a marked point inside"));
        }
    }
    for c in cells(&sqs) {
        if !sqs.iter().any(|q| q.covers(&c)) {
            return Err(format!("cell at {:?} is uncovered", c));
        }
    }
    let bound = 2 * cover.avoid.len() + 2;
    if cover.pieces.len() > bound {
        return Err(format!("{} pieces exceed {bound}", cover.pieces.len()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> (ConvexShape, Homothet) {
        (ConvexShape::unit_square(), Homothet::identity())
    }

    #[test]
    fn no_points_one_piece() {
        let (sq, t) = unit();
        let c = cover_square(&sq, &t, &[]).unwrap();
        assert_eq!(c.pieces.len(), 1);
        check_cover(&sq, &c).unwrap();
    }

    #[test]
    fn centre_needs_four() {
        let (sq, t) = unit();
        let c = cover_square(&sq, &t, &[Point::new(Rational::new(1, 2), Rational::new(1, 2))]).unwrap();
        assert_eq!(c.pieces.len(), 4);
        check_cover(&sq, &c).unwrap();
    }

    #[test]
    fn boundary_point_rejected() {
        let (sq, t) = unit();
        let e = cover_square(&sq, &t, &[Point::new(Rational::one(), Rational::new(1, 2))]).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
    }

    #[test]
    fn scaled_target() {
        let sq = ConvexShape::unit_square();
        let t = Homothet { scale: Rational::from_int(10), translation: Point::ints(5, -3) };
        let avoid = vec![Point::ints(7, 1), Point::ints(12, 4), Point::ints(9, 6)];
        let c = cover_square(&sq, &t, &avoid).unwrap();
        check_cover(&sq, &c).unwrap();
    }

    #[test]
    fn checker_catches_holes() {
        let (sq, t) = unit();
        let half = Homothet { scale: Rational::new(1, 2), translation: Point::origin() };
        let bad = SelfCover { target: t, avoid: vec![], pieces: vec![half], method: CoverMethod::Greedy };
        assert!(check_cover(&sq, &bad).is_err());
    }
}

#[cfg(test)]
mod random_tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_instances_meet_bound() {
        let sq = ConvexShape::unit_square();
        let t = Homothet { scale: Rational::from_int(1000), translation: Point::origin() };
        let mut exact = 0;
        for seed in 0..40u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let l = rng.gen_range(0..=12);
            let mut xs: Vec<i64> = (1..1000).collect();
            let mut ys = xs.clone();
            let avoid: Vec<Point> = (0..l)
                .map(|_| {
                    let x = xs.swap_remove(rng.gen_range(0..xs.len()));
                    let y = ys.swap_remove(rng.gen_range(0..ys.len()));
                    Point::ints(x, y)
                })
                .collect();
            let c = cover_square(&sq, &t, &avoid).unwrap();
            check_cover(&sq, &c).unwrap();
            if c.method == CoverMethod::Exact {
                exact += 1;
            }
        }
        eprintln!("exact fallbacks: {exact}");
    }

    #[test]
    fn exact_search_never_worse() {
        let sq = ConvexShape::unit_square();
        let t = Homothet { scale: Rational::from_int(100), translation: Point::origin() };
        let avoid = vec![
            Point::ints(13, 71),
            Point::ints(38, 22),
            Point::ints(52, 64),
            Point::ints(77, 41),
            Point::ints(90, 9),
        ];
        let g = cover_impl(&sq, &t, &avoid, false).unwrap();
        let e = cover_impl(&sq, &t, &avoid, true).unwrap();
        assert_eq!(e.method, CoverMethod::Exact);
        check_cover(&sq, &e).unwrap();
        assert!(e.pieces.len() <= g.pieces.len());
    }
}
