//! Static SVG 1.1 figures: points, graph edges and homothet outlines.

use std::fmt::Write;

use crate::geom::Point;

pub const RED: &str = "#d62728";
pub const BLUE: &str = "#1f77b4";
const PALETTE: [&str; 10] =
    ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

/// Colour for label `i` of a k-colouring.
pub fn palette(i: u32) -> &'static str {
    PALETTE[i as usize % PALETTE.len()]
}

enum Item {
    Dot { at: (f64, f64), fill: String },
    Line { a: (f64, f64), b: (f64, f64), stroke: String },
    Poly { pts: Vec<(f64, f64)>, stroke: String, fill: String },
}

#[derive(Default)]
pub struct Figure {
    items: Vec<Item>,
}

impl Figure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dot(&mut self, p: &Point, fill: &str) -> &mut Self {
        self.items.push(Item::Dot { at: p.to_f64(), fill: fill.into() });
        self
    }

    pub fn dots(&mut self, pts: &[Point], fill: impl Fn(usize) -> String) -> &mut Self {
        for (i, p) in pts.iter().enumerate() {
            self.items.push(Item::Dot { at: p.to_f64(), fill: fill(i) });
        }
        self
    }

    pub fn edges(&mut self, pts: &[Point], edges: &[(usize, usize)], stroke: &str) -> &mut Self {
        for &(a, b) in edges {
            self.items.push(Item::Line { a: pts[a].to_f64(), b: pts[b].to_f64(), stroke: stroke.into() });
        }
        self
    }

    pub fn polygon(&mut self, pts: &[Point], stroke: &str, fill: &str) -> &mut Self {
        self.items.push(Item::Poly {
            pts: pts.iter().map(Point::to_f64).collect(),
            stroke: stroke.into(),
            fill: fill.into(),
        });
        self
    }

    fn bounds(&self) -> ((f64, f64), (f64, f64)) {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |p: &(f64, f64)| {
            lo = (lo.0.min(p.0), lo.1.min(p.1));
            hi = (hi.0.max(p.0), hi.1.max(p.1));
        };
        for it in &self.items {
            match it {
                Item::Dot { at, .. } => grow(at),
                Item::Line { a, b, .. } => {
                    grow(a);
                    grow(b);
                }
                Item::Poly { pts, .. } => pts.iter().for_each(&mut grow),
            }
        }
        if lo.0 > hi.0 {
            return ((0.0, 0.0), (1.0, 1.0));
        }
        (lo, hi)
    }

    /// Renders at `width` pixels, keeping the aspect ratio and flipping y.
    pub fn to_svg(&self, width: f64) -> String {
        let (lo, hi) = self.bounds();
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(f64::MIN_POSITIVE);
        let margin = 12.0;
        let k = (width - 2.0 * margin) / span;
        let height = (hi.1 - lo.1) * k + 2.0 * margin;
        let tx = |p: &(f64, f64)| ((p.0 - lo.0) * k + margin, (hi.1 - p.1) * k + margin);
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        // Outlines first, then edges, then points on top.
        for it in &self.items {
            if let Item::Poly { pts, stroke, fill } = it {
                let coords: Vec<String> = pts.iter().map(&tx).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    s,
                    r#"<polygon points="{}" stroke="{stroke}" fill="{fill}" fill-opacity="0.15" stroke-width="1.5"/>"#,
                    coords.join(" ")
                );
            }
        }
        for it in &self.items {
            if let Item::Line { a, b, stroke } = it {
                let (a, b) = (tx(a), tx(b));
                let _ = writeln!(
                    s,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{stroke}" stroke-width="1"/>"#,
                    a.0, a.1, b.0, b.1
                );
            }
        }
        for it in &self.items {
            if let Item::Dot { at, fill } = it {
                let (x, y) = tx(at);
                let _ = writeln!(
                    s,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="{fill}" stroke="black" stroke-width="0.5"/>"#
                );
            }
        }
        s.push_str("</svg>\n");
        s
    }
}
