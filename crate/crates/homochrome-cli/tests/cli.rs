use std::path::Path;
use std::process::{Command, Output};

use homochrome::{gen, io};
use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homochrome")).current_dir(dir).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn color_three_points() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("pts.csv"), "# three points\n0,0\n3,1\n1,4\n").unwrap();
    let out = run(dir.path(), &["color", "--shape", "square", "--in", "pts.csv", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["result"]["final"].as_array().unwrap().len(), 3);
    assert_eq!(r["result"]["threshold"], 215);
}

#[test]
fn uniform_colouring_of_clusters_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("pts.csv"), io::write_csv(&gen::clustered(300, 3))).unwrap();
    let out = run(dir.path(), &["verify", "--in", "pts.csv", "--constant", "red", "--m", "215"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["status"], "violations");
    let v = &r["result"]["violations"];
    assert!(!v.as_array().unwrap().is_empty());
    assert!(v[0]["range"]["points"].as_array().unwrap().len() >= 215);
}

#[test]
fn colour_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("pts.csv"), io::write_csv(&gen::clustered(80, 5))).unwrap();
    let out = run(dir.path(), &["color", "--in", "pts.csv", "--out", "c.json", "--svg", "c.svg"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("c.json.timing.json").exists());
    assert!(std::fs::read_to_string(dir.path().join("c.svg")).unwrap().contains("<svg"));
    let out = run(dir.path(), &["verify", "--in", "pts.csv", "--labels", "c.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["violation_count"], 0);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("pts.csv"), io::write_csv(&gen::uniform(40, 100, 2))).unwrap();
    let a = run(dir.path(), &["kcolor", "--k", "3", "--in", "pts.csv", "--seed", "4", "--out", "a.json"]);
    let b = run(dir.path(), &["kcolor", "--k", "3", "--in", "pts.csv", "--seed", "4", "--out", "b.json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
}

#[test]
fn pentagon_adversary_exports_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["adversary", "--shape", "pentagon", "--c", "24", "--csv", "adv.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["instance"]["checks"]["no_good_3path"], true);
    let pts = io::parse_csv(&std::fs::read_to_string(dir.path().join("adv.csv")).unwrap()).unwrap();
    assert!(pts.len() >= 48);
    let exported: Vec<homochrome::Point> = serde_json::from_value(r["result"]["points"].clone()).unwrap();
    assert_eq!(pts, exported);
}

#[test]
fn errors_carry_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("dup.csv"), "0,0\n1,1\n0.0,0\n").unwrap();
    let cases: [(&[&str], &str); 4] = [
        (&["color", "--in", "dup.csv"], "parse"),
        (&["color", "--in", "dup.csv", "--shape", "circle"], "parse"),
        (&["adversary", "--shape", "square", "--c", "8"], "unsupported_shape"),
        (&["adversary", "--shape", "hexagon", "--c", "6"], "precondition"),
    ];
    for (args, code) in cases {
        let out = run(dir.path(), args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert_eq!(report(&out)["error"]["code"], code, "{args:?}");
    }
    let out = run(dir.path(), &["color"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["code"], "usage");
}

#[test]
fn selfcover_centre_point() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("avoid.csv"), "1/2,1/2\n").unwrap();
    let out = run(dir.path(), &["selfcover", "--in", "avoid.csv", "--target", "2,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["pieces_count"], 4);
}
