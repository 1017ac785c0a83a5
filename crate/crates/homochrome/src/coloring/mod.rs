//! Two-colouring through light and dark colour classes, and the recursive
//! polychromatic k-colouring built on it.

mod four;
mod goodness;

use num_bigint::BigUint;
use serde::Serialize;

pub use four::{four_color, four_color_adj, FOUR_COLOR_BUDGET};
pub use goodness::{bad_turns, find_good_3path, goodness2, GoodPathCertificate, Goodness};

use crate::delaunay::{build_dt, condition, induce_set, ConditionedSet, DelaunayGraph};
use crate::error::{Error, Result};
use crate::geom::{normalize, ConvexShape, Point, ShapeKind};
use crate::ranges::{scan, ScanOptions};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Red,
    Blue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dark {
    DarkRed,
    DarkBlue,
}

/// One heavy monochromatic range and the vertex it darkened.
#[derive(Clone, Debug, Serialize)]
pub struct HeavyRecord {
    pub points: Vec<usize>,
    pub light: Color,
    pub certificate: GoodPathCertificate,
    pub recolored: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColoringState {
    pub four: Vec<u8>,
    pub light: Vec<Color>,
    pub dark: Vec<Option<Dark>>,
    #[serde(rename = "final")]
    pub final_colors: Vec<Color>,
    pub heavy: Vec<HeavyRecord>,
    pub seed: u64,
    pub threshold: u64,
    pub goodness_constant: u64,
    pub perturbation: Rational,
    pub halvings: u32,
}

/// Everything the pipeline builds on the way, in the normalized frame.
pub struct Pipeline {
    pub shape: ConvexShape,
    pub conditioned: ConditionedSet,
    pub dt: DelaunayGraph,
    pub state: ColoringState,
}

fn light_of(c: u8) -> Color {
    if c <= 2 {
        Color::Red
    } else {
        Color::Blue
    }
}

/// Finds every range of exactly `cg` points of one light colour, in
/// canonical order, and darkens one interior vertex of a good 3-path in each.
/// `four` colours every vertex of `dt`; its first `points.len()` vertices
/// are `points`.
pub fn dark_recolor(
    points: &[Point],
    shape: &ConvexShape,
    dt: &DelaunayGraph,
    four: &[u8],
    cg: usize,
) -> Result<(Vec<Option<Dark>>, Vec<HeavyRecord>)> {
    let n = points.len();
    let mut dark: Vec<Option<Dark>> = vec![None; n];
    let mut heavy = Vec::new();
    if n < cg {
        return Ok((dark, heavy));
    }
    let light: Vec<Color> = four[..n].iter().map(|&c| light_of(c)).collect();
    let labels: Vec<u8> = light.iter().map(|&c| u8::from(c == Color::Blue)).collect();
    let mut mono: Vec<Vec<usize>> = Vec::new();
    let opts = ScanOptions { labels: Some((&labels, 2)), min_size: cg, max_size: Some(cg), ..Default::default() };
    scan(points, shape, &opts, &mut |v| {
        if v.counts().iter().any(|&c| c as usize == cg) {
            mono.push(v.sorted());
        }
        true
    })?;
    mono.sort();
    mono.dedup();
    for members in mono {
        let sub = induce_set(dt, &members);
        if !sub.is_tree() {
            return Err(Error::Invariant("a heavy monochromatic range does not induce a tree".into()));
        }
        let cert = find_good_3path(dt, &sub, shape)?;
        let col = light[members[0]];
        let (y, z) = (cert.vertices[1], cert.vertices[2]);
        let (want, mark) = match col {
            Color::Red => (1, Dark::DarkBlue),
            Color::Blue => (3, Dark::DarkRed),
        };
        let target = if four[y] == want {
            y
        } else if four[z] == want {
            z
        } else {
            return Err(Error::Invariant("no interior vertex of the good path has the trigger colour".into()));
        };
        dark[target] = Some(mark);
        heavy.push(HeavyRecord { points: members, light: col, certificate: cert, recolored: target });
    }
    Ok((dark, heavy))
}

/// Final colour: a dark mark wins, otherwise the light colour.
pub fn merge(light: &[Color], dark: &[Option<Dark>]) -> Vec<Color> {
    light
        .iter()
        .zip(dark)
        .map(|(&l, &d)| match (l, d) {
            (_, Some(Dark::DarkRed)) => Color::Red,
            (_, Some(Dark::DarkBlue)) => Color::Blue,
            (c, None) => c,
        })
        .collect()
}

/// Runs the whole pipeline and keeps the intermediate structures.
pub fn two_color_pipeline(points: &[Point], shape: &ConvexShape, seed: u64) -> Result<Pipeline> {
    if shape.kind() == ShapeKind::General {
        return Err(Error::UnsupportedShape(
            "two-colouring needs a triangle or a parallelogram; other polygons are not universally good".into(),
        ));
    }
    let consts = shape.constants();
    let cg = consts.goodness_constant.expect("known for this kind");
    let threshold = consts.threshold.expect("known for this kind");
    let (map, nshape) = normalize(shape)?;
    let pts: Vec<Point> = points.iter().map(|p| map.apply(p)).collect();
    let conditioned = condition(&pts, &nshape, seed)?;
    let dt = build_dt(&conditioned, &nshape)?;
    let four_all = four_color(&dt)?;
    let n = points.len();
    let four = four_all[..n].to_vec();
    let light: Vec<Color> = four.iter().map(|&c| light_of(c)).collect();
    let (dark, heavy) = dark_recolor(&conditioned.perturbed, &nshape, &dt, &four_all, cg as usize)?;

    let final_colors = merge(&light, &dark);
    let state = ColoringState {
        four,
        light,
        dark,
        final_colors,
        heavy,
        seed,
        threshold,
        goodness_constant: cg,
        perturbation: conditioned.magnitude.clone(),
        halvings: conditioned.halvings,
    };
    Ok(Pipeline { shape: nshape, conditioned, dt, state })
}

/// Two-colouring such that every homothet with at least `threshold` points
/// gets both colours.
pub fn two_color(points: &[Point], shape: &ConvexShape, seed: u64) -> Result<ColoringState> {
    Ok(two_color_pipeline(points, shape, seed)?.state)
}

/// Guaranteed threshold `m · f(m−1)^(⌈log₂ k⌉ − 1)` for `k` colours.
pub fn k_threshold(shape: &ConvexShape, k: u32) -> Option<BigUint> {
    let c = shape.constants();
    let m = c.threshold?;
    if k <= 1 {
        return Some(BigUint::from(m));
    }
    let f = c.cover(m - 1)?;
    let levels = 32 - (k - 1).leading_zeros();
    Some(BigUint::from(m) * BigUint::from(f).pow(levels - 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct KNode {
    pub k: u32,
    pub size: usize,
    /// Decimal string; it quickly outgrows machine integers.
    pub threshold: String,
    pub children: Vec<KNode>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KColoring {
    pub k: u32,
    pub labels: Vec<u32>,
    pub threshold: String,
    pub tree: KNode,
}

fn k_rec(
    points: &[Point],
    idx: &[usize],
    shape: &ConvexShape,
    k: u32,
    offset: u32,
    seed: u64,
    labels: &mut [u32],
) -> Result<KNode> {
    let threshold = k_threshold(shape, k).map(|t| t.to_string()).unwrap_or_default();
    if k == 1 || idx.is_empty() {
        for &i in idx {
            labels[i] = offset;
        }
        return Ok(KNode { k, size: idx.len(), threshold, children: Vec::new() });
    }
    let sub: Vec<Point> = idx.iter().map(|&i| points[i].clone()).collect();
    let state = two_color(&sub, shape, seed)?;
    let (mut red, mut blue) = (Vec::new(), Vec::new());
    for (j, &c) in state.final_colors.iter().enumerate() {
        match c {
            Color::Red => red.push(idx[j]),
            Color::Blue => blue.push(idx[j]),
        }
    }
    let kr = k.div_ceil(2);
    let a = k_rec(points, &red, shape, kr, offset, seed, labels)?;
    let b = k_rec(points, &blue, shape, k - kr, offset + kr, seed, labels)?;
    Ok(KNode { k, size: idx.len(), threshold, children: vec![a, b] })
}

/// Polychromatic colouring with labels `0..k`, by recursive two-colouring.
pub fn k_color(points: &[Point], shape: &ConvexShape, k: u32, seed: u64) -> Result<KColoring> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    if shape.kind() == ShapeKind::General {
        return Err(Error::UnsupportedShape("k-colouring needs a triangle or a parallelogram".into()));
    }
    let mut labels = vec![0u32; points.len()];
    let idx: Vec<usize> = (0..points.len()).collect();
    let tree = k_rec(points, &idx, shape, k, 0, seed, &mut labels)?;
    Ok(KColoring { k, labels, threshold: tree.threshold.clone(), tree })
}
