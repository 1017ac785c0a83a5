//! Range enumeration for axis-parallel squares.
//!
//! Every realizable subset with x-span `w ≥` y-span is cut out by a square of
//! side `w` whose left and right sides pass through the extreme points, so it
//! is a contiguous run of a vertical strip sorted by y. Subsets with a larger
//! y-span are handled by the transposed pass. Ties in coordinates are fine.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::geom::{ConvexShape, Homothet, Point};
use crate::rational::Rational;

pub(crate) trait Coord: Clone + Ord {
    fn diff(&self, other: &Self) -> Self;
}

impl Coord for i128 {
    fn diff(&self, other: &Self) -> Self {
        self - other
    }
}

impl Coord for Rational {
    fn diff(&self, other: &Self) -> Self {
        self - other
    }
}

/// Which pass produced a window and the point indices that pin it.
#[derive(Clone, Copy, Debug)]
pub(crate) struct WindowGeom {
    /// `false`: left and right sides pinned; `true`: bottom and top.
    pub transposed: bool,
    pub low: usize,
    pub high: usize,
    pub prev: Option<usize>,
    pub first: usize,
    pub last: usize,
    pub next: Option<usize>,
}

impl WindowGeom {
    /// The canonical square: pinned sides through `low` and `high`, free
    /// coordinate centred in its feasible interval.
    pub fn homothet(&self, points: &[Point], shape: &ConvexShape) -> Homothet {
        let (major, minor): (fn(&Point) -> &Rational, fn(&Point) -> &Rational) =
            if self.transposed { (|p| &p.y, |p| &p.x) } else { (|p| &p.x, |p| &p.y) };
        let m1 = major(&points[self.low]).clone();
        let w = major(&points[self.high]) - &m1;
        let mut lo = minor(&points[self.last]) - &w;
        if let Some(p) = self.prev {
            lo = lo.max(minor(&points[p]).clone());
        }
        let mut hi = minor(&points[self.first]).clone();
        if let Some(n) = self.next {
            hi = hi.min(minor(&points[n]) - &w);
        }
        let free = if lo == hi { lo } else { lo.mid(&hi) };
        let corner = if self.transposed { Point::new(free, m1) } else { Point::new(m1, free) };
        square_homothet(shape, &corner, &w)
    }

    /// `(point, side)` incidences of the canonical square.
    pub fn determinators(&self) -> Vec<(usize, usize)> {
        if self.transposed {
            vec![(self.low, 3), (self.high, 1)]
        } else {
            vec![(self.low, 0), (self.high, 2)]
        }
    }
}

/// Homothet of an axis square with lower-left corner `corner` and side `w`.
pub(crate) fn square_homothet(shape: &ConvexShape, corner: &Point, w: &Rational) -> Homothet {
    let v = shape.vertices();
    let side = &v[1].y - &v[0].y;
    let s = w / &side;
    Homothet { translation: corner.sub(&v[0].scale(&s)), scale: s }
}

pub(crate) struct Window<'a> {
    pub members: &'a [usize],
    pub counts: &'a [u32],
    pub fingerprint: u128,
    pub geom: WindowGeom,
}

pub(crate) struct Aux<'a> {
    pub labels: Option<(&'a [u8], usize)>,
    pub keys: Option<&'a [u128]>,
    pub min_size: usize,
    pub max_size: usize,
}

/// Exact integer coordinates when all points share a modest common
/// denominator, so the sweep can avoid rational arithmetic.
pub(crate) fn scaled_integers(points: &[Point]) -> Option<(Vec<i128>, Vec<i128>)> {
    let mut l = BigInt::one();
    for p in points {
        l = l.lcm(&p.x.denom()).lcm(&p.y.denom());
        if l.bits() > 96 {
            return None;
        }
    }
    let conv = |r: &Rational| -> Option<i128> {
        let v = r.numer() * (&l / r.denom());
        if v.abs().bits() > 120 {
            None
        } else {
            v.to_i128()
        }
    };
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for p in points {
        xs.push(conv(&p.x)?);
        ys.push(conv(&p.y)?);
    }
    Some((xs, ys))
}

/// Runs both passes; returns `false` if the visitor stopped early.
pub(crate) fn scan<C: Coord>(xs: &[C], ys: &[C], aux: &Aux, visit: &mut dyn FnMut(&Window) -> bool) -> bool {
    pass(xs, ys, false, aux, visit) && pass(ys, xs, true, aux, visit)
}

struct Group {
    start: usize,
    end: usize,
    low: Option<usize>,
    high: Option<usize>,
}

fn pass<C: Coord>(
    major: &[C],
    minor: &[C],
    transposed: bool,
    aux: &Aux,
    visit: &mut dyn FnMut(&Window) -> bool,
) -> bool {
    let n = major.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| minor[a].cmp(&minor[b]).then(major[a].cmp(&major[b])).then(a.cmp(&b)));
    let mut levels: Vec<C> = major.to_vec();
    levels.sort();
    levels.dedup();
    let k = aux.labels.map_or(0, |(_, k)| k);

    let mut strip: Vec<usize> = Vec::with_capacity(n);
    let mut groups: Vec<Group> = Vec::with_capacity(n);
    let mut low_pref: Vec<u32> = Vec::with_capacity(n + 1);
    let mut high_pref: Vec<u32> = Vec::with_capacity(n + 1);
    let mut count_pref: Vec<u32> = Vec::new();
    let mut key_pref: Vec<u128> = Vec::new();
    let mut counts = vec![0u32; k];

    for i in 0..levels.len() {
        for j in i + 1..levels.len() {
            let (m1, m2) = (&levels[i], &levels[j]);
            let w = m2.diff(m1);
            strip.clear();
            strip.extend(order.iter().copied().filter(|&p| &major[p] >= m1 && &major[p] <= m2));

            groups.clear();
            let mut s = 0;
            while s < strip.len() {
                let mut e = s;
                let mut g = Group { start: s, end: s, low: None, high: None };
                while e < strip.len() && minor[strip[e]] == minor[strip[s]] {
                    let p = strip[e];
                    if &major[p] == m1 && g.low.is_none() {
                        g.low = Some(p);
                    }
                    if &major[p] == m2 && g.high.is_none() {
                        g.high = Some(p);
                    }
                    e += 1;
                }
                g.end = e;
                groups.push(g);
                s = e;
            }
            low_pref.clear();
            high_pref.clear();
            low_pref.push(0);
            high_pref.push(0);
            for g in &groups {
                low_pref.push(low_pref.last().unwrap() + g.low.is_some() as u32);
                high_pref.push(high_pref.last().unwrap() + g.high.is_some() as u32);
            }
            if let Some((vals, _)) = aux.labels {
                count_pref.clear();
                count_pref.resize((strip.len() + 1) * k, 0);
                for (pos, &p) in strip.iter().enumerate() {
                    let (head, tail) = count_pref.split_at_mut((pos + 1) * k);
                    tail[..k].copy_from_slice(&head[pos * k..]);
                    tail[vals[p] as usize] += 1;
                }
            }
            if let Some(keys) = aux.keys {
                key_pref.clear();
                key_pref.push(0);
                for &p in &strip {
                    key_pref.push(key_pref.last().unwrap().wrapping_add(keys[p]));
                }
            }

            let gy = |g: usize| &minor[strip[groups[g].start]];
            let ng = groups.len();
            let mut b_hi = 0usize;
            let mut b_lo = 0usize;
            for a in 0..ng {
                b_hi = b_hi.max(a);
                while b_hi + 1 < ng && {
                    let d = gy(b_hi + 1).diff(gy(a));
                    if transposed {
                        d < w
                    } else {
                        d <= w
                    }
                } {
                    b_hi += 1;
                }
                if a == 0 {
                    b_lo = 0;
                } else {
                    b_lo = b_lo.max(a);
                    while b_lo + 1 < ng && gy(b_lo + 1).diff(gy(a - 1)) <= w {
                        b_lo += 1;
                    }
                }
                for b in b_lo..=b_hi {
                    if low_pref[b + 1] == low_pref[a] || high_pref[b + 1] == high_pref[a] {
                        continue;
                    }
                    let (start, end) = (groups[a].start, groups[b].end);
                    let size = end - start;
                    if size < aux.min_size || size > aux.max_size {
                        continue;
                    }
                    if k > 0 {
                        for c in 0..k {
                            counts[c] = count_pref[end * k + c] - count_pref[start * k + c];
                        }
                    }
                    let fingerprint = if aux.keys.is_some() { key_pref[end].wrapping_sub(key_pref[start]) } else { 0 };
                    let low = (a..=b).find_map(|g| groups[g].low).expect("has low");
                    let high = (a..=b).find_map(|g| groups[g].high).expect("has high");
                    let win = Window {
                        members: &strip[start..end],
                        counts: &counts,
                        fingerprint,
                        geom: WindowGeom {
                            transposed,
                            low,
                            high,
                            prev: (a > 0).then(|| strip[groups[a - 1].start]),
                            first: strip[start],
                            last: strip[end - 1],
                            next: (b + 1 < ng).then(|| strip[groups[b + 1].start]),
                        },
                    };
                    if !visit(&win) {
                        return false;
                    }
                }
            }
        }
    }
    true
}
