use std::path::Path;
use std::process::Command;

use angleset::cli::verify_points;
use angleset::construct::{construct_point_set, ConstructOptions};
use angleset::format::{self, Meta};
use angleset::{exact, AngleSpec, Mode, PointSet, Precision};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_angleset"));
    cmd.env_remove("ANGLESET_PRECISION_BITS");
    cmd
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn construct_then_verify_reproduces_the_in_memory_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.json");
    let (code, _, err) = run(bin().args(["construct", "-d", "20", "-c", "0.5", "-o", p(&file)]));
    assert_eq!(code, 0, "{err}");

    let (code, from_file, err) = run(bin().args(["verify", p(&file), "--alpha", "pi/3+0.5", "--strict"]));
    assert_eq!(code, 0, "{err}");

    let c = exact::parse_decimal("0.5").unwrap();
    let built = construct_point_set(20, &c, &ConstructOptions::default()).unwrap();
    let meta = Meta {
        k: Some(3),
        c: Some("0.5".into()),
        order: Some("colex".into()),
        seed: None,
    };
    let alpha = AngleSpec::parse("pi/3+0.5").unwrap();
    let mem = verify_points(&built.points.clone().into(), &meta, &alpha, Mode::Strict, Precision::DEFAULT).unwrap();
    let in_memory = serde_json::to_string_pretty(&mem).unwrap();
    assert_eq!(from_file.trim_end(), in_memory);

    let read = format::read_point_file(&file).unwrap();
    assert_eq!(read.points, PointSet::Lattice(built.points));
    assert_eq!(read.meta, meta);
}

#[test]
fn construct_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for (i, order) in [("a", "random"), ("b", "random"), ("c", "colex"), ("d", "colex")] {
        let file = dir.path().join(format!("{i}.json"));
        let (code, _, err) = run(bin().args([
            "construct", "-d", "12", "-c", "0.3", "-k", "4", "--order", order, "--seed", "42", "-o", p(&file),
        ]));
        assert_eq!(code, 0, "{err}");
        texts.push(std::fs::read_to_string(&file).unwrap());
        let report = dir.path().join(format!("{i}.report.json"));
        assert!(report.exists());
    }
    assert_eq!(texts[0], texts[1]);
    assert_eq!(texts[2], texts[3]);
    assert!(texts[0].contains("\"seed\":42"));
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let tet = dir.path().join("tet.json");
    std::fs::write(
        &tet,
        r#"{"format": "angleset-v1", "d": 3, "coord_type": "int",
            "points": [[0,0,0],[1,1,0],[1,0,1],[0,1,1]]}"#,
    )
    .unwrap();
    let (code, out, _) = run(bin().args(["verify", p(&tet), "--alpha", "pi/3+0.01", "--strict"]));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["certificate"]["max_angle"].as_f64().unwrap() - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
    assert_eq!(v["ratio_check"]["pass"], true);

    let col = dir.path().join("col.json");
    std::fs::write(&col, r#"{"format": "angleset-v1", "d": 1, "coord_type": "int", "points": [[0],[1],[2]]}"#).unwrap();
    assert_eq!(run(bin().args(["verify", p(&col), "--alpha", "3.0"])).0, 1);

    let simplex = dir.path().join("simplex.json");
    let (code, _, err) = run(bin().args(["oracle", "simplex:3", "--alpha", "pi/3", "--weak", "-o", p(&simplex)]));
    assert_eq!(code, 0, "{err}");
    assert_eq!(run(bin().args(["verify", p(&simplex), "--alpha", "pi/3", "--weak"])).0, 0);
    assert_eq!(run(bin().args(["verify", p(&simplex), "--alpha", "pi/3", "--strict"])).0, 1);
}

#[test]
fn malformed_file_reports_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\"format\": \"angleset-v1\", \"d\": 2,\n\"coord_type\": \"int\",\n\"points\": [[0, 0],\n[1]]}\n",
    )
    .unwrap();
    let (code, _, err) = run(bin().args(["verify", p(&bad), "--alpha", "1.0"]));
    assert_eq!(code, 2);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(bin().args(["construct", "-d", "0", "-c", "0.3"])).0, 2);
    assert_eq!(run(bin().args(["construct", "-d", "5", "-c", "1.5"])).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("x.json");
    let (code, _, err) = run(bin().args(["construct", "-d", "40", "-c", "0.5", "-k", "20", "-o", p(&file)]));
    assert_eq!(code, 3, "{err}");
    assert!(!file.exists());
    assert_eq!(run(bin().args(["oracle", "cube:7", "--alpha", "pi/2"])).0, 3);
    assert_eq!(run(bin().args(["verify", "/nonexistent/file.json", "--alpha", "1"])).0, 2);
    assert_eq!(run(bin().args(["bounds", "-d", "x", "-c", "0.2"])).0, 2);
}

#[test]
fn bounds_rows() {
    let (code, out, err) = run(bin().args(["bounds", "-d", "50,100,200", "-c", "0.2", "--delta", "0.005"]));
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with('#'));
    assert_eq!(lines.len(), 4);
    let root: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(6).unwrap().parse().unwrap())
        .collect();
    let lower: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(7).unwrap().parse().unwrap())
        .collect();
    assert!(root.iter().all(|&r| r >= 1.0 + (0.0094 - 0.005) * 0.2));
    assert!(root.windows(2).all(|w| w[0] > w[1]));
    assert!(lower.windows(2).all(|w| w[0] < w[1]));

    let (_, tiny, _) = run(bin().args(["bounds", "-d", "10", "-c", "1e-12"]));
    let cells: Vec<&str> = tiny.lines().nth(1).unwrap().split(',').collect();
    assert!((cells[7].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn lemma_command() {
    let (code, out, _) = run(bin().args(["lemma", "--trials", "20000", "--seed", "5"]));
    assert_eq!(code, 0);
    assert!(out.contains("\"pass\": true"));
}
