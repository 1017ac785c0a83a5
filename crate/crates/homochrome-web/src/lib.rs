//! Browser bindings. Every export takes points as CSV text and returns a JSON
//! string: the result on success, `{"error": {"code", "message"}}` otherwise.

use homochrome::coloring::two_color_pipeline;
use homochrome::delaunay::{build_dt, condition};
use homochrome::geom::normalize;
use homochrome::io;
use homochrome::selfcover::cover_square;
use homochrome::{ConvexShape, Error, Homothet, Point, Result};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Demo inputs stay small enough to answer interactively.
pub const MAX_POINTS: usize = 400;

fn shape(spec: &str) -> Result<ConvexShape> {
    io::parse_shape_with(spec, |_| Err(Error::Parse("polygon files are not available in the browser".into())))
}

fn points(csv: &str) -> Result<Vec<Point>> {
    let pts = io::parse_points(csv)?;
    if pts.len() > MAX_POINTS {
        return Err(Error::TooLarge { got: pts.len(), limit: MAX_POINTS });
    }
    Ok(pts)
}

fn finish(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": { "code": e.code(), "message": e.to_string() } }).to_string(),
    }
}

fn f64s(pts: &[Point]) -> Vec<[f64; 2]> {
    pts.iter()
        .map(|p| {
            let (x, y) = p.to_f64();
            [x, y]
        })
        .collect()
}

pub fn color_points_value(csv: &str, shape_spec: &str, seed: u64) -> Result<Value> {
    let pts = points(csv)?;
    let sh = shape(shape_spec)?;
    let pipe = two_color_pipeline(&pts, &sh, seed)?;
    let n = pts.len();
    let edges: Vec<(usize, usize)> = pipe.dt.edges.iter().copied().filter(|&(a, b)| a < n && b < n).collect();
    Ok(json!({
        "points": f64s(&pts),
        "colors": pipe.state.final_colors,
        "dark": pipe.state.dark,
        "edges": edges,
        "threshold": pipe.state.threshold,
        "heavy": pipe.state.heavy.len(),
        "outline": f64s(sh.vertices()),
    }))
}

pub fn delaunay_value(csv: &str, shape_spec: &str, seed: u64) -> Result<Value> {
    let pts = points(csv)?;
    let sh = shape(shape_spec)?;
    let (map, nshape) = normalize(&sh)?;
    let back = map.inverse()?;
    let local: Vec<Point> = pts.iter().map(|p| map.apply(p)).collect();
    let cond = condition(&local, &nshape, seed)?;
    let dt = build_dt(&cond, &nshape)?;
    let vertices: Vec<Point> = dt.vertices.iter().map(|p| back.apply(p)).collect();
    Ok(json!({
        "vertices": f64s(&vertices),
        "original_count": dt.original_count,
        "edges": dt.edges,
        "outline": f64s(sh.vertices()),
    }))
}

/// Covers `[0,1]²` by squares avoiding the given interior points.
pub fn self_cover_value(csv: &str) -> Result<Value> {
    let avoid = points(csv)?;
    let sq = ConvexShape::unit_square();
    let cover = cover_square(&sq, &Homothet::identity(), &avoid)?;
    let pieces: Vec<Vec<[f64; 2]>> = cover.pieces.iter().map(|h| f64s(&h.vertices(&sq))).collect();
    Ok(json!({ "avoid": f64s(&avoid), "pieces": pieces, "bound": 2 * avoid.len() + 2 }))
}

#[wasm_bindgen]
pub fn color_points(csv: &str, shape_spec: &str, seed: u32) -> String {
    finish(color_points_value(csv, shape_spec, u64::from(seed)))
}

#[wasm_bindgen]
pub fn delaunay(csv: &str, shape_spec: &str, seed: u32) -> String {
    finish(delaunay_value(csv, shape_spec, u64::from(seed)))
}

#[wasm_bindgen]
pub fn self_cover(csv: &str) -> String {
    finish(self_cover_value(csv))
}
