use std::path::Path;
use std::process::{Command, Output};

fn fracbvp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracbvp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const EX1: [&str; 8] = ["--alpha", "1.5", "--b", "3", "--q", "t", "--f", "1/(y+20)"];

#[test]
fn green_csv_layout() {
    let out = fracbvp(&["green", "--alpha", "1.5", "--b", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t\\s,0,1,2,3,4");
    assert_eq!(lines.len(), 6);
    let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first[0], 0.5);
    assert!((first[1] - 10.0 / 11.0).abs() < 1e-13);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("lambda"), "{stderr}");
}

#[test]
fn green_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let out = fracbvp(&[
        "green",
        "--alpha",
        "2",
        "--b",
        "4",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["values"].as_array().unwrap().len(), 6);
    assert!(stdout(&out).contains("max G"));
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(code(&fracbvp(&["green", "--alpha", "0.5", "--b", "3"])), 2);
    assert_eq!(code(&fracbvp(&["green", "--alpha", "1.5", "--b", "1"])), 2);
    assert_eq!(
        code(&fracbvp(&["eigen-bound", "--alpha", "1.5", "--b", "0"])),
        2
    );
    assert_eq!(code(&fracbvp(&["reproduce", "--example", "3"])), 2);
    assert_eq!(
        code(&fracbvp(&[
            "solve", "--alpha", "1.5", "--b", "3", "--q", "t"
        ])),
        2
    );
    assert_eq!(
        code(&fracbvp(&[
            "solve", "--alpha", "1.5", "--b", "3", "--q", "t +", "--f", "y"
        ])),
        2
    );
    assert_eq!(code(&fracbvp(&["frobnicate"])), 2);
    assert_eq!(
        code(&fracbvp(&["solve", "--spec", "/nonexistent/p.json"])),
        2
    );
}

#[test]
fn help_exits_0() {
    assert_eq!(code(&fracbvp(&["--help"])), 0);
}

#[test]
fn solve_example_one() {
    let mut args = vec!["solve"];
    args.extend(EX1);
    let out = fracbvp(&args);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,t,y,residual_term");
    assert_eq!(lines.len(), 1 + 7);
    assert!(lines[1].starts_with("-1,-0.5,0.0,"));
    let y1: f64 = lines[3].split(',').nth(2).unwrap().parse().unwrap();
    assert!((y1 - 0.4891).abs() < 1e-4, "{y1}");
    for line in &lines[1..] {
        let r: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(r.abs() < 1e-9, "{line}");
    }
}

#[test]
fn solve_non_convergence_exits_3() {
    let mut args = vec!["solve", "--max-iter", "2"];
    args.extend(EX1);
    assert_eq!(code(&fracbvp(&args)), 3);
}

#[test]
fn solve_is_deterministic() {
    let mut args = vec!["solve", "--format", "json"];
    args.extend(EX1);
    let a = fracbvp(&args);
    let b = fracbvp(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn spec_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("p.json");
    let inline_out = dir.path().join("a.csv");
    let file_out = dir.path().join("b.csv");
    let mut args = vec![
        "solve",
        "--r1",
        "0.01",
        "--r2",
        "1",
        "--save-spec",
        spec.to_str().unwrap(),
        "--out",
        inline_out.to_str().unwrap(),
    ];
    args.extend(EX1);
    assert_eq!(code(&fracbvp(&args)), 0);
    let out = fracbvp(&[
        "solve",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        file_out.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("lower holds"));
    assert_eq!(read(&inline_out), read(&file_out));
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn certify_exit_codes() {
    let mut args = vec!["certify", "--theorem", "3.4", "--auto-eta"];
    args.extend(EX1);
    let out = fracbvp(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["satisfied"], true);

    let weak = |f: &str| {
        code(&fracbvp(&[
            "certify",
            "--theorem",
            "3.4",
            "--eta",
            "1",
            "--alpha",
            "1.5",
            "--b",
            "3",
            "--q",
            "1",
            "--f",
            f,
        ]))
    };
    // Load mass 5 against C·eta/f(eta) = 0.77 / 100 and 0.77 * 100.
    assert_eq!(weak("100*y"), 0);
    assert_eq!(weak("y/100"), 4);

    let shell = [
        "certify",
        "--theorem",
        "3.6",
        "--alpha",
        "1.5",
        "--b",
        "3",
        "--q",
        "t",
        "--f",
        "ln(2+y)/gamma(6)",
        "--r1",
        "0.0001",
        "--r2",
        "1",
    ];
    let out = fracbvp(&shell);
    assert!(matches!(code(&out), 0 | 4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Gamma(b+3)"));

    let mut zero = shell.to_vec();
    zero[8] = "0";
    assert_eq!(code(&fracbvp(&zero)), 4);

    let mut both = vec!["certify", "--theorem", "3.4"];
    both.extend(EX1);
    assert_eq!(code(&fracbvp(&both)), 2);
}

#[test]
fn eigen_bound_verify() {
    let out = fracbvp(&["eigen-bound", "--alpha", "1.5", "--b", "3", "--verify"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("radius = 0.154"));
    assert!(text.contains("all eigenvalues outside radius: true"));
}

#[test]
fn reproduce_examples() {
    for ex in ["1", "2"] {
        let out = fracbvp(&["reproduce", "--example", ex]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
        assert!(stdout(&out).contains("all comparisons pass"));
    }
}

#[test]
fn run_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = fracbvp(&[
        "green",
        "--alpha",
        "1.5",
        "--b",
        "3",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&read(&report)).unwrap();
    assert_eq!(v["exit_status"], 0);
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
    assert!((v["outputs"]["lambda"].as_f64().unwrap() - 0.425).abs() < 1e-12);

    let other = dir.path().join("r2.json");
    fracbvp(&[
        "green",
        "--b",
        "3",
        "--alpha",
        "1.5",
        "--report",
        other.to_str().unwrap(),
    ]);
    let w: serde_json::Value = serde_json::from_str(&read(&other)).unwrap();
    assert_eq!(v["input_digest"], w["input_digest"]);

    let failed = dir.path().join("r3.json");
    let out = fracbvp(&[
        "reproduce",
        "--example",
        "1",
        "--report",
        failed.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let x: serde_json::Value = serde_json::from_str(&read(&failed)).unwrap();
    assert!(!x["warnings"].as_array().unwrap().is_empty());
}
