//! Exact planar primitives: points, convex polygons, homothets and affine maps.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point::new(Rational::from_int(x), Rational::from_int(y))
    }

    pub fn origin() -> Self {
        Point::ints(0, 0)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn neg(&self) -> Point {
        Point::new(-&self.x, -&self.y)
    }

    pub fn dot(&self, o: &Point) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn mid(&self, o: &Point) -> Point {
        Point::new(self.x.mid(&o.x), self.y.mid(&o.y))
    }

    /// `self + s·(o − self)`.
    pub fn lerp(&self, o: &Point, s: &Rational) -> Point {
        self.add(&o.sub(self).scale(s))
    }

    pub fn linf(&self, o: &Point) -> Rational {
        let dx = (&self.x - &o.x).abs();
        let dy = (&self.y - &o.y).abs();
        dx.max(dy)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Orientation of `c` relative to the directed line `a → b`: positive for a
/// left turn.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i32 {
    b.sub(a).cross(&c.sub(a)).signum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Triangle,
    Parallelogram,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quadrant {
    NE,
    NW,
    SE,
    SW,
}

impl Quadrant {
    pub fn opposite(self) -> Quadrant {
        match self {
            Quadrant::NE => Quadrant::SW,
            Quadrant::SW => Quadrant::NE,
            Quadrant::NW => Quadrant::SE,
            Quadrant::SE => Quadrant::NW,
        }
    }
}

/// Open-quadrant position of `q` relative to `origin`.
pub fn quadrant(origin: &Point, q: &Point) -> Result<Quadrant> {
    let sx = (&q.x - &origin.x).signum();
    let sy = (&q.y - &origin.y).signum();
    match (sx, sy) {
        (1, 1) => Ok(Quadrant::NE),
        (-1, 1) => Ok(Quadrant::NW),
        (1, -1) => Ok(Quadrant::SE),
        (-1, -1) => Ok(Quadrant::SW),
        _ => Err(Error::Position(format!("{q:?} shares a coordinate with {origin:?}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Containment {
    Interior,
    Boundary,
    Outside,
}

/// A closed (or open) strictly convex polygon with clockwise vertices, the
/// first vertex being the lexicographically least.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexShape {
    vertices: Vec<Point>,
    kind: ShapeKind,
    open: bool,
    normals: Vec<Point>,
    offsets: Vec<Rational>,
}

/// Constants attached to a shape class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeConstants {
    pub degree_bound: u64,
    pub min_angle: f64,
    pub goodness_constant: Option<u64>,
    pub cover_slope: Option<u64>,
    pub cover_intercept: Option<u64>,
    pub threshold: Option<u64>,
}

impl ShapeConstants {
    /// Self-cover count `f(l)`.
    pub fn cover(&self, l: u64) -> Option<u64> {
        Some(self.cover_slope? * l + self.cover_intercept?)
    }
}

impl ConvexShape {
    pub fn new(vertices: Vec<Point>, open: bool) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidShape(format!("need at least 3 vertices, got {n}")));
        }
        let mut area = Rational::zero();
        for i in 0..n {
            area = area + vertices[i].cross(&vertices[(i + 1) % n]);
        }
        if area.is_zero() {
            return Err(Error::InvalidShape("zero area".into()));
        }
        let mut vs = vertices;
        if area.is_positive() {
            vs.reverse();
        }
        let start = (0..n).min_by(|&a, &b| vs[a].cmp(&vs[b])).expect("nonempty");
        vs.rotate_left(start);

        let mut normals = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n);
        for k in 0..n {
            let d = vs[(k + 1) % n].sub(&vs[k]);
            let nk = Point::new(-&d.y, d.x.clone());
            offsets.push(nk.dot(&vs[k]));
            normals.push(nk);
        }
        for k in 0..n {
            for (j, v) in vs.iter().enumerate() {
                if j == k || j == (k + 1) % n {
                    continue;
                }
                if normals[k].dot(v) >= offsets[k] {
                    return Err(Error::InvalidShape(format!("not strictly convex at vertex {v:?}")));
                }
            }
        }
        let kind = if n == 3 {
            ShapeKind::Triangle
        } else if n == 4 {
            let e: Vec<Point> = (0..4).map(|k| vs[(k + 1) % 4].sub(&vs[k])).collect();
            if e[0].cross(&e[2]).is_zero() && e[1].cross(&e[3]).is_zero() {
                ShapeKind::Parallelogram
            } else {
                ShapeKind::General
            }
        } else {
            ShapeKind::General
        };
        Ok(ConvexShape { vertices: vs, kind, open, normals, offsets })
    }

    /// The closed axis-parallel unit square `[0,1]²`.
    pub fn unit_square() -> Self {
        Self::new(vec![Point::ints(0, 0), Point::ints(0, 1), Point::ints(1, 1), Point::ints(1, 0)], false)
            .expect("valid square")
    }

    /// The fixed rational reference triangle `(0,0), (1/2,1), (1,0)`.
    pub fn reference_triangle() -> Self {
        Self::new(vec![Point::ints(0, 0), Point::new(Rational::new(1, 2), Rational::one()), Point::ints(1, 0)], false)
            .expect("valid triangle")
    }

    /// A regular `n`-gon on the unit circle, vertices rounded to multiples of
    /// `2⁻¹⁶` with the mirror symmetries kept exact. Odd `n` has a top vertex
    /// and a horizontal bottom side; even `n` starts at angle zero.
    pub fn regular(n: usize) -> Result<Self> {
        if !(3..=64).contains(&n) {
            return Err(Error::InvalidShape(format!("regular polygon needs 3..=64 sides, got {n}")));
        }
        let start = if n % 2 == 1 { std::f64::consts::FRAC_PI_2 } else { 0.0 };
        let vs = (0..n).map(|k| circle_point(start + std::f64::consts::TAU * k as f64 / n as f64)).collect();
        Self::new(vs, false)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn kind(&self) -> ShapeKind {
        self.kind
    }

    pub fn is_open(&self) -> bool {
        self.open
    }

    pub fn with_open(mut self, open: bool) -> Self {
        self.open = open;
        self
    }

    /// Outward (unnormalized) normal of side `k`, which runs `v_k → v_{k+1}`.
    pub fn normal(&self, k: usize) -> &Point {
        &self.normals[k]
    }

    /// `normal(k) · v_k`.
    pub fn offset(&self, k: usize) -> &Rational {
        &self.offsets[k]
    }

    pub fn side(&self, k: usize) -> (&Point, &Point) {
        (&self.vertices[k], &self.vertices[(k + 1) % self.n()])
    }

    /// True for an axis-parallel square of any size.
    pub fn is_axis_square(&self) -> bool {
        if self.kind != ShapeKind::Parallelogram {
            return false;
        }
        let v = &self.vertices;
        v[0].x == v[1].x && v[1].y == v[2].y && (&v[1].y - &v[0].y) == (&v[3].x - &v[0].x)
    }

    /// Vertex average; always interior.
    pub fn centroid(&self) -> Point {
        let n = Rational::from_int(self.n() as i64);
        let sx: Rational = self.vertices.iter().map(|v| v.x.clone()).sum();
        let sy: Rational = self.vertices.iter().map(|v| v.y.clone()).sum();
        Point::new(sx / &n, sy / &n)
    }

    /// Directions of all lines through two vertices.
    pub fn vertex_directions(&self) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                let d = self.vertices[j].sub(&self.vertices[i]);
                if !out.iter().any(|e| e.cross(&d).is_zero()) {
                    out.push(d);
                }
            }
        }
        out
    }

    /// Smallest angle formed by three vertices, in radians.
    pub fn min_angle(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self.vertices.iter().map(Point::to_f64).collect();
        let mut best = std::f64::consts::PI;
        for (a, pa) in pts.iter().enumerate() {
            for (b, pb) in pts.iter().enumerate() {
                for (c, pc) in pts.iter().enumerate() {
                    if a == b || b == c || a == c || a > c {
                        continue;
                    }
                    let u = (pa.0 - pb.0, pa.1 - pb.1);
                    let w = (pc.0 - pb.0, pc.1 - pb.1);
                    let ang = (u.0 * w.1 - u.1 * w.0).abs().atan2(u.0 * w.0 + u.1 * w.1);
                    best = best.min(ang);
                }
            }
        }
        best
    }

    pub fn constants(&self) -> ShapeConstants {
        let n = self.n() as u64;
        let alpha = self.min_angle();
        let (degree_bound, cg, slope, intercept) = match self.kind {
            ShapeKind::Parallelogram => (4, Some(22), Some(2), Some(2)),
            ShapeKind::Triangle => (9, Some(7382), Some(2), Some(1)),
            ShapeKind::General => (n + (std::f64::consts::TAU / alpha).ceil() as u64, None, None, None),
        };
        let threshold = match (cg, slope, intercept) {
            (Some(c), Some(a), Some(b)) => Some((c - 1) * (a * n + b) + n + 1),
            _ => None,
        };
        ShapeConstants {
            degree_bound,
            min_angle: alpha,
            goodness_constant: cg,
            cover_slope: slope,
            cover_intercept: intercept,
            threshold,
        }
    }

    /// Value of the side-`k` constraint for a homothet: `≤ 0` means `p` is on
    /// the inner side of that side.
    pub fn slack(&self, h: &Homothet, p: &Point, k: usize) -> Rational {
        self.normals[k].dot(&p.sub(&h.translation)) - &h.scale * &self.offsets[k]
    }

    pub fn containment(&self, h: &Homothet, p: &Point) -> Containment {
        let mut on = false;
        for k in 0..self.n() {
            match self.slack(h, p, k).signum() {
                1 => return Containment::Outside,
                0 => on = true,
                _ => {}
            }
        }
        if on {
            Containment::Boundary
        } else {
            Containment::Interior
        }
    }

    /// Sides of `h` whose line passes through `p`.
    pub fn tight_sides(&self, h: &Homothet, p: &Point) -> Vec<usize> {
        (0..self.n()).filter(|&k| self.slack(h, p, k).is_zero()).collect()
    }

    /// Number of proper crossing points of the two homothet boundaries.
    pub fn boundary_crossings(&self, h1: &Homothet, h2: &Homothet) -> Result<usize> {
        let a = h1.vertices(self);
        let b = h2.vertices(self);
        let n = self.n();
        // Positions along ∂h2 as (edge, parameter in [0,1)).
        let mut hits: Vec<(usize, Rational)> = Vec::new();
        for j in 0..n {
            let (q0, q1) = (&b[j], &b[(j + 1) % n]);
            let e = q1.sub(q0);
            for i in 0..n {
                let (p0, p1) = (&a[i], &a[(i + 1) % n]);
                let d = p1.sub(p0);
                let den = d.cross(&e);
                let w = q0.sub(p0);
                if den.is_zero() {
                    if !w.cross(&d).is_zero() {
                        continue;
                    }
                    // Collinear: project onto e and look for a shared stretch.
                    let ee = e.dot(&e);
                    let t0 = p0.sub(q0).dot(&e) / &ee;
                    let t1 = p1.sub(q0).dot(&e) / &ee;
                    let lo = t0.clone().min(t1.clone()).max(Rational::zero());
                    let hi = t0.max(t1).min(Rational::one());
                    if lo < hi {
                        return Err(Error::OverlappingBoundaries);
                    }
                    if lo == hi {
                        push_hit(&mut hits, j, lo, n);
                    }
                    continue;
                }
                let s = w.cross(&e) / &den;
                let t = w.cross(&d) / &den;
                let unit = Rational::zero()..=Rational::one();
                if unit.contains(&s) && unit.contains(&t) {
                    push_hit(&mut hits, j, t, n);
                }
            }
        }
        hits.sort();
        hits.dedup();
        if hits.is_empty() {
            return Ok(0);
        }
        let m = hits.len();
        let mut inside = Vec::with_capacity(m);
        for idx in 0..m {
            let (e0, ref t0) = hits[idx];
            let (e1, ref t1) = hits[(idx + 1) % m];
            let start = b[e0].lerp(&b[(e0 + 1) % n], t0);
            let probe = if m > 1 && e1 == e0 && t1 > t0 {
                start.mid(&b[e1].lerp(&b[(e1 + 1) % n], t1))
            } else {
                start.mid(&b[(e0 + 1) % n])
            };
            match self.containment(h1, &probe) {
                Containment::Boundary => return Err(Error::OverlappingBoundaries),
                c => inside.push(c == Containment::Interior),
            }
        }
        Ok((0..m).filter(|&i| inside[i] != inside[(i + 1) % m]).count())
    }
}

fn push_hit(hits: &mut Vec<(usize, Rational)>, edge: usize, t: Rational, n: usize) {
    if t == Rational::one() {
        hits.push(((edge + 1) % n, Rational::zero()));
    } else {
        hits.push((edge, t));
    }
}

/// Dyadic point near angle `theta` on the unit circle. Dihedral symmetries
/// of the square are applied exactly, so symmetric angle sets give exactly
/// symmetric point sets.
fn circle_point(theta: f64) -> Point {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
    let eps = 1e-12;
    let mut t = theta.rem_euclid(TAU);
    if (TAU - t).abs() < eps {
        t = 0.0;
    }
    if t >= PI - eps {
        return circle_point(t - PI).neg();
    }
    if t >= FRAC_PI_2 - eps {
        let p = circle_point(t - FRAC_PI_2);
        return Point::new(-p.y, p.x);
    }
    if t > FRAC_PI_4 + eps {
        let p = circle_point(FRAC_PI_2 - t);
        return Point::new(p.y, p.x);
    }
    let t = t.max(0.0);
    Point::new(Rational::from_f64_dyadic(t.cos(), 16), Rational::from_f64_dyadic(t.sin(), 16))
}

/// `scale · P + translation`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Homothet {
    pub scale: Rational,
    pub translation: Point,
}

impl Homothet {
    pub fn new(scale: Rational, translation: Point) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::Precondition(format!("homothet scale must be positive, got {scale}")));
        }
        Ok(Homothet { scale, translation })
    }

    pub fn identity() -> Self {
        Homothet { scale: Rational::one(), translation: Point::origin() }
    }

    pub fn vertex(&self, shape: &ConvexShape, i: usize) -> Point {
        shape.vertices()[i].scale(&self.scale).add(&self.translation)
    }

    pub fn vertices(&self, shape: &ConvexShape) -> Vec<Point> {
        (0..shape.n()).map(|i| self.vertex(shape, i)).collect()
    }

    /// Image of the shape point `p` under this homothet.
    pub fn apply(&self, p: &Point) -> Point {
        p.scale(&self.scale).add(&self.translation)
    }

    /// Scale by `r` about the fixed point `c`.
    pub fn scaled_about(&self, c: &Point, r: &Rational) -> Homothet {
        Homothet { scale: &self.scale * r, translation: c.add(&self.translation.sub(c).scale(r)) }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bbox(&self, shape: &ConvexShape) -> (Point, Point) {
        bbox(&self.vertices(shape)).expect("shape has vertices")
    }
}

pub fn bbox(points: &[Point]) -> Option<(Point, Point)> {
    let first = points.first()?;
    let mut lo = first.clone();
    let mut hi = first.clone();
    for p in &points[1..] {
        if p.x < lo.x {
            lo.x = p.x.clone();
        }
        if p.y < lo.y {
            lo.y = p.y.clone();
        }
        if p.x > hi.x {
            hi.x = p.x.clone();
        }
        if p.y > hi.y {
            hi.y = p.y.clone();
        }
    }
    Some((lo, hi))
}

/// `p ↦ (a·x + b·y + e, c·x + d·y + f)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub e: Rational,
    pub f: Rational,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            a: Rational::one(),
            b: Rational::zero(),
            c: Rational::zero(),
            d: Rational::one(),
            e: Rational::zero(),
            f: Rational::zero(),
        }
    }

    /// The unique map sending `src[i]` to `dst[i]`.
    pub fn from_triangles(src: [&Point; 3], dst: [&Point; 3]) -> Result<Self> {
        let u1 = src[1].sub(src[0]);
        let u2 = src[2].sub(src[0]);
        let w1 = dst[1].sub(dst[0]);
        let w2 = dst[2].sub(dst[0]);
        let det = u1.cross(&u2);
        if det.is_zero() {
            return Err(Error::InvalidShape("degenerate source triangle".into()));
        }
        // Linear part M with M·u1 = w1, M·u2 = w2, i.e. M = W·U⁻¹.
        let inv = [[&u2.y / &det, -(&u2.x / &det)], [-(&u1.y / &det), &u1.x / &det]];
        let a = &w1.x * &inv[0][0] + &w2.x * &inv[1][0];
        let b = &w1.x * &inv[0][1] + &w2.x * &inv[1][1];
        let c = &w1.y * &inv[0][0] + &w2.y * &inv[1][0];
        let d = &w1.y * &inv[0][1] + &w2.y * &inv[1][1];
        let e = &dst[0].x - (&a * &src[0].x + &b * &src[0].y);
        let f = &dst[0].y - (&c * &src[0].x + &d * &src[0].y);
        Ok(AffineMap { a, b, c, d, e, f })
    }

    pub fn apply(&self, p: &Point) -> Point {
        Point::new(&self.a * &p.x + &self.b * &p.y + &self.e, &self.c * &p.x + &self.d * &p.y + &self.f)
    }

    /// Linear part only.
    pub fn apply_vec(&self, v: &Point) -> Point {
        Point::new(&self.a * &v.x + &self.b * &v.y, &self.c * &v.x + &self.d * &v.y)
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Precondition("singular affine map".into()));
        }
        let a = &self.d / &det;
        let b = -(&self.b / &det);
        let c = -(&self.c / &det);
        let d = &self.a / &det;
        let e = -(&a * &self.e + &b * &self.f);
        let f = -(&c * &self.e + &d * &self.f);
        Ok(AffineMap { a, b, c, d, e, f })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
            e: &self.a * &other.e + &self.b * &other.f + &self.e,
            f: &self.c * &other.e + &self.d * &other.f + &self.f,
        }
    }

    /// Image of a homothet of `P` as a homothet of the image of `P`.
    pub fn apply_homothet(&self, h: &Homothet) -> Homothet {
        let origin = Point::new(self.e.clone(), self.f.clone());
        Homothet { scale: h.scale.clone(), translation: self.apply(&h.translation).sub(&origin.scale(&h.scale)) }
    }
}

/// Affine normal form: parallelograms go to the unit square with the first
/// vertex at the origin, triangles to the reference triangle, anything else
/// is left alone.
pub fn normalize(shape: &ConvexShape) -> Result<(AffineMap, ConvexShape)> {
    let v = shape.vertices();
    let map = match shape.kind() {
        ShapeKind::Parallelogram => {
            let sq = ConvexShape::unit_square();
            let t = sq.vertices();
            AffineMap::from_triangles([&v[0], &v[1], &v[3]], [&t[0], &t[1], &t[3]])?
        }
        ShapeKind::Triangle => {
            let tr = ConvexShape::reference_triangle();
            let t = tr.vertices();
            AffineMap::from_triangles([&v[0], &v[1], &v[2]], [&t[0], &t[1], &t[2]])?
        }
        ShapeKind::General => AffineMap::identity(),
    };
    let image = ConvexShape::new(v.iter().map(|p| map.apply(p)).collect(), shape.is_open())?;
    Ok((map, image))
}
