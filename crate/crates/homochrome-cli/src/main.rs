use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use homochrome::coloring::{k_color, k_threshold, two_color_pipeline, Color};
use homochrome::delaunay::{build_dt, condition};
use homochrome::geom::normalize;
use homochrome::io;
use homochrome::ranges::enumerate_ranges;
use homochrome::selfcover::cover_square;
use homochrome::svg::{self, Figure};
use homochrome::verify::{scan_universal_goodness, verify_labels};
use homochrome::{adversary, ConvexShape, Error, Homothet, Point, Rational, Result};
use num_bigint::BigUint;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "homochrome",
    version,
    about = "Colour point sets so that every large homothet of a polygon sees every colour"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// square | parallelogram:x,y;… | triangle:x,y;… | polygon:<file> | regular:<n> | pentagon | hexagon, optionally with `:open`
    #[arg(long, default_value = "square")]
    shape: String,
    /// JSON report path (stdout when absent); timings go to `<out>.timing.json`
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write an SVG figure here
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Input {
    /// Point file, CSV (`x,y` per line) or JSON
    #[arg(long = "in")]
    input: PathBuf,
    /// Refuse inputs with more points than this
    #[arg(long, default_value_t = 2000)]
    max_points: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Two-colour a point set
    Color {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
    },
    /// Polychromatic colouring with k colours
    Kcolor {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=255))]
        k: u32,
    },
    /// Check a colouring against every range
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
        /// Labels: one per line (`red`, `blue` or an integer), or a `color`/`kcolor` report
        #[arg(long, conflicts_with = "constant")]
        labels: Option<PathBuf>,
        /// Give every point this label
        #[arg(long)]
        constant: Option<String>,
        /// Number of colours (defaults to the largest label plus one, at least 2)
        #[arg(long)]
        k: Option<u32>,
        /// Threshold; defaults to the guaranteed one for the shape and k
        #[arg(long)]
        m: Option<String>,
    },
    /// Delaunay graph of the conditioned set
    Delaunay {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
    },
    /// List every realizable range
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
    },
    /// Cover a square by squares avoiding marked points
    Selfcover {
        #[command(flatten)]
        common: Common,
        /// Points to avoid
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Target homothet as `s,tx,ty` (the shape itself by default)
        #[arg(long)]
        target: Option<String>,
    },
    /// Point set on which no good 3-path exists
    Adversary {
        #[command(flatten)]
        common: Common,
        /// Number of path points, a positive multiple of 4
        #[arg(long)]
        c: usize,
        /// Also export the points as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Search every tree-inducing range for a good 3-path
    ScanGoodness {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
        /// Smallest range size to scan
        #[arg(long)]
        c: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Color { .. } => "color",
            Command::Kcolor { .. } => "kcolor",
            Command::Verify { .. } => "verify",
            Command::Delaunay { .. } => "delaunay",
            Command::Enumerate { .. } => "enumerate",
            Command::Selfcover { .. } => "selfcover",
            Command::Adversary { .. } => "adversary",
            Command::ScanGoodness { .. } => "scan-goodness",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Color { common, .. }
            | Command::Kcolor { common, .. }
            | Command::Verify { common, .. }
            | Command::Delaunay { common, .. }
            | Command::Enumerate { common, .. }
            | Command::Selfcover { common, .. }
            | Command::Adversary { common, .. }
            | Command::ScanGoodness { common, .. } => common,
        }
    }
}

/// What a command produced: the report body and whether it found violations.
struct Outcome {
    result: Value,
    violations: bool,
    svg: Option<Figure>,
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))
}

fn load_points(input: &Input) -> Result<Vec<Point>> {
    let pts = io::parse_points(&read_text(&input.input)?)?;
    if pts.len() > input.max_points {
        return Err(Error::TooLarge { got: pts.len(), limit: input.max_points });
    }
    Ok(pts)
}

fn shape_json(spec: &str, shape: &ConvexShape) -> Value {
    json!({
        "spec": spec,
        "kind": shape.kind(),
        "open": shape.is_open(),
        "vertices": shape.vertices(),
    })
}

fn color_name(c: Color) -> &'static str {
    match c {
        Color::Red => svg::RED,
        Color::Blue => svg::BLUE,
    }
}

fn parse_label(s: &str) -> Result<u32> {
    match s.trim().to_ascii_lowercase().as_str() {
        "red" => Ok(0),
        "blue" => Ok(1),
        t => t.parse().map_err(|_| Error::Parse(format!("bad label `{s}`"))),
    }
}

fn read_labels(path: &Path) -> Result<Vec<u32>> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        let res = &v["result"];
        let list = res["labels"].as_array().or_else(|| res["final"].as_array());
        let list = list.ok_or_else(|| Error::Parse("report has no labels".into()))?;
        return list
            .iter()
            .map(|x| match x {
                Value::String(s) => parse_label(s),
                Value::Number(n) => n.as_u64().map(|n| n as u32).ok_or_else(|| Error::Parse(format!("bad label {n}"))),
                _ => Err(Error::Parse(format!("bad label {x}"))),
            })
            .collect();
    }
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).map(parse_label).collect()
}

fn points_figure(pts: &[Point], fill: impl Fn(usize) -> String) -> Figure {
    let mut f = Figure::new();
    f.dots(pts, fill);
    f
}

fn run(cmd: &Command, shape: &ConvexShape) -> Result<Outcome> {
    let seed = cmd.common().seed;
    match cmd {
        Command::Color { input, .. } => {
            let pts = load_points(input)?;
            let pipe = two_color_pipeline(&pts, shape, seed)?;
            let n = pts.len();
            let edges: Vec<(usize, usize)> = pipe.dt.edges.iter().copied().filter(|&(a, b)| a < n && b < n).collect();
            let mut fig = Figure::new();
            fig.edges(&pts, &edges, "#bbbbbb").dots(&pts, |i| color_name(pipe.state.final_colors[i]).into());
            let result = serde_json::to_value(&pipe.state).expect("serializable");
            Ok(Outcome { result, violations: false, svg: Some(fig) })
        }
        Command::Kcolor { input, k, .. } => {
            let pts = load_points(input)?;
            let kc = k_color(&pts, shape, *k, seed)?;
            let fig = points_figure(&pts, |i| svg::palette(kc.labels[i]).into());
            Ok(Outcome { result: serde_json::to_value(&kc).expect("serializable"), violations: false, svg: Some(fig) })
        }
        Command::Verify { input, labels, constant, k, m, .. } => {
            let pts = load_points(input)?;
            let labels = match (labels, constant) {
                (Some(path), _) => read_labels(path)?,
                (None, Some(c)) => vec![parse_label(c)?; pts.len()],
                (None, None) => return Err(Error::Precondition("give --labels or --constant".into())),
            };
            let k = k.unwrap_or_else(|| labels.iter().max().map_or(2, |&l| (l + 1).max(2)));
            let threshold = match m {
                Some(m) => m.parse::<BigUint>().map_err(|_| Error::Parse(format!("bad threshold `{m}`")))?,
                None => k_threshold(shape, k)
                    .ok_or_else(|| Error::UnsupportedShape("no known threshold for this shape; pass --m".into()))?,
            };
            let report = verify_labels(&pts, shape, &labels, k, &threshold)?;
            let mut fig = points_figure(&pts, |i| svg::palette(labels[i]).into());
            for v in &report.violations {
                fig.polygon(&v.range.homothet.vertices(shape), "black", svg::palette(v.label));
            }
            Ok(Outcome {
                violations: !report.ok(),
                result: serde_json::to_value(&report).expect("serializable"),
                svg: Some(fig),
            })
        }
        Command::Delaunay { input, .. } => {
            let pts = load_points(input)?;
            let (map, nshape) = normalize(shape)?;
            let back = map.inverse()?;
            let local: Vec<Point> = pts.iter().map(|p| map.apply(p)).collect();
            let cond = condition(&local, &nshape, seed)?;
            let dt = build_dt(&cond, &nshape)?;
            let vertices: Vec<Point> = dt.vertices.iter().map(|p| back.apply(p)).collect();
            let mut fig = Figure::new();
            fig.edges(&vertices, &dt.edges, "#555555").dots(&vertices, |i| {
                if i < dt.original_count {
                    "black".into()
                } else {
                    "#999999".into()
                }
            });
            let result = json!({
                "vertices": vertices,
                "original_count": dt.original_count,
                "edges": dt.edges,
                "rotation": dt.rotation,
                "inner_faces": dt.inner_faces,
                "outer": dt.outer,
                "perturbation": cond.magnitude,
                "halvings": cond.halvings,
            });
            Ok(Outcome { result, violations: false, svg: Some(fig) })
        }
        Command::Enumerate { input, .. } => {
            let pts = load_points(input)?;
            let fam = enumerate_ranges(&pts, shape)?;
            let mut fig = points_figure(&pts, |_| "black".into());
            for r in fam.ranges.iter().filter(|r| r.points.len() > 1) {
                fig.polygon(&r.homothet.vertices(shape), "#1f77b4", "none");
            }
            let result = json!({ "count": fam.len(), "family": fam });
            Ok(Outcome { result, violations: false, svg: Some(fig) })
        }
        Command::Selfcover { input, target, .. } => {
            let avoid = match input {
                Some(p) => io::parse_points(&read_text(p)?)?,
                None => Vec::new(),
            };
            let target = match target {
                Some(t) => {
                    let parts: Vec<&str> = t.split(',').collect();
                    if parts.len() != 3 {
                        return Err(Error::Parse(format!("target must be `s,tx,ty`, got `{t}`")));
                    }
                    let r = |s: &str| s.parse::<Rational>().map_err(Error::from);
                    Homothet::new(r(parts[0])?, Point::new(r(parts[1])?, r(parts[2])?))?
                }
                None => Homothet::identity(),
            };
            let cover = cover_square(shape, &target, &avoid)?;
            let mut fig = Figure::new();
            fig.polygon(&target.vertices(shape), "black", "none");
            for p in &cover.pieces {
                fig.polygon(&p.vertices(shape), "#1f77b4", "#1f77b4");
            }
            fig.dots(&avoid, |_| svg::RED.into());
            let result = json!({ "pieces_count": cover.pieces.len(), "cover": cover });
            Ok(Outcome { result, violations: false, svg: Some(fig) })
        }
        Command::Adversary { c, csv, .. } => {
            let inst = adversary::build_adversarial(shape, *c, seed)?;
            let pts = inst.points();
            if let Some(path) = csv {
                write_text(path, &io::write_csv(&pts))?;
            }
            let mut fig = Figure::new();
            fig.polygon(&inst.polygon, "black", "none");
            let path_edges: Vec<(usize, usize)> = (1..*c).map(|i| (i - 1, i)).collect();
            fig.edges(&pts, &path_edges, "#555555")
                .dots(&pts, |i| if i < *c { "black".into() } else { "#999999".into() });
            let result = json!({ "points": pts, "instance": inst });
            Ok(Outcome { result, violations: false, svg: Some(fig) })
        }
        Command::ScanGoodness { input, c, .. } => {
            let pts = load_points(input)?;
            let report = scan_universal_goodness(&pts, shape, *c, seed)?;
            let mut fig = points_figure(&pts, |_| "black".into());
            if let Some(w) = report.witnesses.first() {
                let edges: Vec<(usize, usize)> =
                    w.path.windows(2).map(|e| (e[0], e[1])).filter(|&(a, b)| a < pts.len() && b < pts.len()).collect();
                fig.edges(&pts, &edges, svg::RED);
            }
            Ok(Outcome {
                violations: report.witness_count > 0,
                result: serde_json::to_value(&report).expect("serializable"),
                svg: Some(fig),
            })
        }
    }
}

fn emit(out: Option<&Path>, report: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(report).expect("json") + "\n";
    match out {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let report = json!({
                "schema": io::SCHEMA,
                "status": "error",
                "error": { "code": "usage", "message": e.kind().to_string() },
            });
            let _ = emit(None, &report);
            return ExitCode::from(1);
        }
    };
    let cmd = &cli.command;
    let common = cmd.common();
    let started = Instant::now();
    let (shape, outcome) = match io::parse_shape(&common.shape) {
        Ok(s) => {
            let o = run(cmd, &s);
            (Some(s), o)
        }
        Err(e) => (None, Err(e)),
    };
    let elapsed = started.elapsed();

    let mut report = json!({
        "schema": io::SCHEMA,
        "command": cmd.name(),
        "seed": common.seed,
    });
    if let Some(s) = &shape {
        report["shape"] = shape_json(&common.shape, s);
    }
    let code = match outcome {
        Ok(o) => {
            report["status"] = json!(if o.violations { "violations" } else { "ok" });
            report["result"] = o.result;
            if let (Some(path), Some(fig)) = (&common.svg, o.svg) {
                if let Err(e) = write_text(path, &fig.to_svg(800.0)) {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            if o.violations {
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            report["status"] = json!("error");
            report["error"] = json!({ "code": e.code(), "message": e.to_string() });
            1
        }
    };
    if let Err(e) = emit(common.out.as_deref(), &report) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if let Some(out) = &common.out {
        let mut name = out.clone().into_os_string();
        name.push(".timing.json");
        let timing = json!({ "command": cmd.name(), "elapsed_seconds": elapsed.as_secs_f64() });
        if let Err(e) = write_text(Path::new(&name), &(timing.to_string() + "\n")) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}
