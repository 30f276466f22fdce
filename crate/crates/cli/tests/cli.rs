use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mellin-quad"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn records(csv_text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

/// Parses a cell and prints it back in the same layout.
fn reprint(cell: &str) -> String {
    let x: f64 = cell.parse().unwrap();
    match cell.split_once('e') {
        Some((mant, exp)) => {
            let digits = mant.split_once('.').map_or(0, |(_, f)| f.len());
            let s = format!("{:.*e}", digits, x);
            let (m, e) = s.split_once('e').unwrap();
            let e: i32 = e.parse().unwrap();
            assert_eq!(exp.len(), 3, "{cell}");
            format!("{m}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
        }
        None => {
            let digits = cell.split_once('.').map_or(0, |(_, f)| f.len());
            format!("{:.*}", digits, x)
        }
    }
}

#[test]
fn integrate_reports_error_and_bound() {
    let out = stdout(&["integrate", "sobolev", "--sigma", "4", "--c", "0"]);
    let row = out.lines().nth(2).unwrap();
    assert!(
        row.contains("6.478229e-05") && row.contains("6.510417e-05"),
        "{out}"
    );
}

#[test]
fn classify_finds_the_polynomial_order() {
    let out = stdout(&[
        "classify",
        "sobolev",
        "--sigma-range",
        "2:8192:x2",
        "--format",
        "csv",
    ]);
    let (header, rows) = records(&out);
    assert_eq!(header[0], "verdict");
    assert_eq!(rows[0][0], "PolynomialRate");
    let order: f64 = rows[0][1].parse().unwrap();
    assert!((order - 4.0).abs() < 0.05, "{order}");
}

#[test]
fn table_one_layout_and_csv_round_trip() {
    let out = stdout(&["table", "1", "--precision-bits", "256", "--format", "csv"]);
    let (header, rows) = records(&out);
    assert_eq!(header, ["sigma", "K", "E"]);
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[0][0], "0.50");
    assert_eq!(rows[15][0], "8.00");
    for row in &rows {
        for cell in row {
            assert_eq!(&reprint(cell), cell);
        }
    }
}

#[test]
fn table_six_csv_round_trip() {
    let out = stdout(&["table", "6", "--format", "csv"]);
    let (header, rows) = records(&out);
    assert_eq!(header, ["sigma", "R", "upper bound", "overestimation", "C"]);
    assert_eq!(rows.len(), 13);
    for row in &rows {
        for cell in &row[1..] {
            assert_eq!(&reprint(cell), cell);
        }
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "rate-scan",
        "branch:1/2",
        "--sigma-range",
        "2:6:1",
        "--format",
        "csv",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let (header, rows) = records(&String::from_utf8(a.stdout).unwrap());
    assert_eq!(header, ["sigma", "N", "K", "E", "C", "rate"]);
    assert_eq!(rows[0][2], "3");
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("mellin-quad-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let o = run(&[
        "integrate",
        "expdecay",
        "--sigma-range",
        "1:2:1",
        "--format",
        "csv",
        "--out",
        p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let (header, rows) = records(&std::fs::read_to_string(&path).unwrap());
    std::fs::remove_file(&path).unwrap();
    assert_eq!(header, ["sigma", "N", "K", "value", "E", "bound"]);
    assert_eq!(rows.len(), 2);
}

#[test]
fn transform_matches_closed_form() {
    let out = stdout(&[
        "transform",
        "sobolev",
        "--c",
        "0",
        "--v",
        "0,-1",
        "--tol",
        "1e-15",
        "--format",
        "csv",
    ]);
    let (_, rows) = records(&out);
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!(r[5].parse::<f64>().unwrap() < 1e-14, "{r:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["integrate", "nope", "--sigma", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["integrate", "sobolev", "--sigma", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["integrate", "sobolev"]).status.code(), Some(2));
    assert_eq!(run(&["table", "9"]).status.code(), Some(2));
    assert_eq!(
        run(&["table", "1", "--precision-bits", "32"]).status.code(),
        Some(2)
    );
    let refused = run(&["table", "5", "--precision-bits", "256"]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("280"));
    // Three samples are too few to fit a decay law.
    assert_eq!(
        run(&["classify", "sobolev", "--sigma-range", "1:3:1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
