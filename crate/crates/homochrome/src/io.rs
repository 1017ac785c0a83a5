//! Point files and shape specifications.
//!
//! CSV files hold one `x,y` per line with `#` comments; JSON files are
//! `{"schema": 1, "points": [{"x": "1/2", "y": "3"}, ...]}`. Coordinates are
//! integers, `num/den` strings or decimals, all read exactly.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ConvexShape, Point, ShapeKind};
use crate::rational::Rational;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointFormat {
    Csv,
    Json,
}

impl PointFormat {
    /// JSON when the text starts with `{`, CSV otherwise.
    pub fn sniff(text: &str) -> Self {
        if text.trim_start().starts_with('{') {
            PointFormat::Json
        } else {
            PointFormat::Csv
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PointFile {
    schema: u32,
    points: Vec<Point>,
}

fn reject_duplicates(points: &[Point]) -> Result<()> {
    let mut seen = HashSet::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if !seen.insert(p) {
            return Err(Error::Parse(format!("duplicate point {p:?} at index {i}")));
        }
    }
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<Vec<Point>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 2 {
            return Err(Error::Parse(format!("line {line}: expected `x,y`, got {} fields", rec.len())));
        }
        let x: Rational = rec[0].parse()?;
        let y: Rational = rec[1].parse()?;
        points.push(Point::new(x, y));
    }
    reject_duplicates(&points)?;
    Ok(points)
}

pub fn parse_json(text: &str) -> Result<Vec<Point>> {
    let file: PointFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.schema != SCHEMA {
        return Err(Error::Parse(format!("unsupported schema {}", file.schema)));
    }
    reject_duplicates(&file.points)?;
    Ok(file.points)
}

pub fn parse_points(text: &str) -> Result<Vec<Point>> {
    match PointFormat::sniff(text) {
        PointFormat::Csv => parse_csv(text),
        PointFormat::Json => parse_json(text),
    }
}

pub fn write_csv(points: &[Point]) -> String {
    let mut out = String::new();
    for p in points {
        out.push_str(&format!("{},{}\n", p.x, p.y));
    }
    out
}

pub fn write_json(points: &[Point]) -> String {
    let file = PointFile { schema: SCHEMA, points: points.to_vec() };
    serde_json::to_string_pretty(&file).expect("points serialize") + "\n"
}

pub fn write_points(points: &[Point], format: PointFormat) -> String {
    match format {
        PointFormat::Csv => write_csv(points),
        PointFormat::Json => write_json(points),
    }
}

fn parse_vertex_list(body: &str) -> Result<Vec<Point>> {
    body.split(';')
        .map(|pair| {
            let (x, y) = pair.split_once(',').ok_or_else(|| Error::Parse(format!("expected `x,y`, got `{pair}`")))?;
            Ok(Point::new(x.parse()?, y.parse()?))
        })
        .collect()
}

/// Parses `square | parallelogram:x,y;… | triangle:x,y;… | polygon:<file> |
/// regular:<n> | pentagon | hexagon`, optionally followed by `:open`.
/// `load` reads the vertex file named by `polygon:`.
pub fn parse_shape_with(spec: &str, load: impl Fn(&str) -> Result<String>) -> Result<ConvexShape> {
    let spec = spec.trim();
    let (body, open) = match spec.strip_suffix(":open") {
        Some(b) => (b, true),
        None => (spec, false),
    };
    let (head, arg) = match body.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (body, None),
    };
    let need = |what: &str| arg.ok_or_else(|| Error::Parse(format!("`{head}` needs {what}")));
    let shape = match head {
        "square" => ConvexShape::unit_square(),
        "triangle" => {
            let s = ConvexShape::new(parse_vertex_list(need("three vertices")?)?, false)?;
            if s.kind() != ShapeKind::Triangle {
                return Err(Error::InvalidShape("a triangle needs exactly three vertices".into()));
            }
            s
        }
        "parallelogram" => {
            let s = ConvexShape::new(parse_vertex_list(need("four vertices")?)?, false)?;
            if s.kind() != ShapeKind::Parallelogram {
                return Err(Error::InvalidShape("the four vertices do not form a parallelogram".into()));
            }
            s
        }
        "polygon" => {
            let text = load(need("a vertex file")?)?;
            ConvexShape::new(parse_points(&text)?, false)?
        }
        "regular" => {
            let n: usize =
                need("a side count")?.parse().map_err(|_| Error::Parse(format!("bad side count in `{spec}`")))?;
            ConvexShape::regular(n)?
        }
        "pentagon" => ConvexShape::regular(5)?,
        "hexagon" => ConvexShape::regular(6)?,
        _ => return Err(Error::Parse(format!("unknown shape `{spec}`"))),
    };
    if arg.is_some() && matches!(head, "square" | "pentagon" | "hexagon") {
        return Err(Error::Parse(format!("`{head}` takes no arguments")));
    }
    Ok(shape.with_open(open))
}

/// [`parse_shape_with`] reading `polygon:` files from disk.
pub fn parse_shape(spec: &str) -> Result<ConvexShape> {
    parse_shape_with(spec, |path| std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}"))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_comments_decimals_and_fractions() {
        let pts = parse_csv("# header\n1,2\n 0.5 , -3/4 \n\n1e2,7 # trailing\n").unwrap_err();
        assert_eq!(pts.code(), "parse");
        let pts = parse_csv("# header\n1,2\n 0.5 , -3/4 \n\n1e2,7\n").unwrap();
        assert_eq!(pts[1], Point::new(Rational::new(1, 2), Rational::new(-3, 4)));
        assert_eq!(pts[2], Point::ints(100, 7));
    }

    #[test]
    fn duplicates_are_rejected() {
        assert!(parse_csv("1,2\n0.5,1\n1/2,1\n").is_err());
        assert!(parse_json(r#"{"schema":1,"points":[{"x":"1","y":"1"},{"x":1,"y":"2/2"}]}"#).is_err());
    }

    #[test]
    fn json_needs_schema_one() {
        assert!(parse_json(r#"{"schema":2,"points":[]}"#).is_err());
        assert_eq!(parse_json(r#"{"schema":1,"points":[{"x":"1/3","y":"-2"}]}"#).unwrap().len(), 1);
    }

    #[test]
    fn shapes() {
        assert!(parse_shape("square").unwrap().is_axis_square());
        let t = parse_shape("triangle:0,0;1,0;0,1:open").unwrap();
        assert!(t.is_open() && t.kind() == ShapeKind::Triangle);
        assert_eq!(parse_shape("parallelogram:0,0;2,1;3,3;1,2").unwrap().kind(), ShapeKind::Parallelogram);
        assert!(parse_shape("parallelogram:0,0;2,0;3,3;0,1").is_err());
        assert_eq!(parse_shape("regular:7").unwrap().n(), 7);
        assert_eq!(parse_shape("hexagon").unwrap().n(), 6);
        assert!(parse_shape("circle").is_err());
        let p = parse_shape_with("polygon:x", |_| Ok("0,0\n2,0\n3,1\n1,2\n".into())).unwrap();
        assert_eq!(p.n(), 4);
    }
}
