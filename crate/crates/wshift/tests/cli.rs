use std::path::Path;
use std::process::{Command, Output};

fn wshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wshift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn classify_between_third_and_fourth_thresholds() {
    // 25/37 < 17/25 < 32/47
    let o = wshift(&["classify", "--a2", "1/2", "--y2", "17/25", "--kmax", "4", "--ubound", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    for line in ["k=1 pass", "k=2 pass", "k=3 pass", "k=4 fail at u=(0;0)"] {
        assert!(text.contains(line), "missing `{}` in\n{}", line, text);
    }
    assert!(text.contains("y2 > subnormal bound 2/3"));
}

#[test]
fn classify_decimal_matches_rational() {
    let args = |y2: &'static str| ["classify", "--a2", "0.5", "--y2", y2, "--kmax", "3", "--ubound", "2", "--out", "csv"];
    let a = wshift(&args("0.68"));
    let b = wshift(&args("17/25"));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("1/2,17/25,3,pass,,pass,true"));
}

#[test]
fn classify_at_subnormal_bound() {
    let o = wshift(&["classify", "--a2", "1/2", "--y2", "2/3", "--kmax", "6", "--ubound", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for k in 1..=6 {
        assert!(text.contains(&format!("k={} pass  expected pass  agree", k)), "{}", text);
    }
    assert!(text.contains("y2 ≤ subnormal bound 2/3"));
}

#[test]
fn classify_outside_hypothesis_warns() {
    let o = wshift(&["classify", "--a2", "3/4", "--y2", "1/2", "--kmax", "2", "--ubound", "2"]);
    assert!(stderr(&o).contains("outside hypothesis"), "{}", stderr(&o));
    // the closed forms are not meant to hold here; the mismatch is reported, not hidden
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn classify_json_mirrors_rows() {
    let o = wshift(&["classify", "--a2", "1/2", "--y2", "0.72", "--kmax", "2", "--ubound", "2", "--out", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["y2"], "18/25");
    assert_eq!(v["rows"][0]["verdict"], "pass");
    assert_eq!(v["rows"][1]["verdict"], "fail");
    assert_eq!(v["rows"][1]["witness_u"], "(0;0)");
    assert_eq!(v["within_subnormal_bound"], false);
}

#[test]
fn parse_failures_exit_one() {
    for args in [
        vec!["classify", "--a2", "half", "--y2", "1/2"],
        vec!["classify", "--a2", "1/2"],
        vec!["classify", "--a2", "1/2", "--y2", "1/0"],
        vec!["sweep", "--a2", "0:1", "--y2", "1/2"],
        vec!["classify", "--a2", "1/2", "--y2", "1/2", "--mode", "fuzzy"],
        vec!["classify", "--a2", "1/2", "--y2", "1/2", "--tol", "0"],
    ] {
        let o = wshift(&args);
        assert_eq!(o.status.code(), Some(1), "{:?}", args);
        assert!(!stderr(&o).is_empty());
    }
    assert_eq!(wshift(&["--help"]).status.code(), Some(0));
}

#[test]
fn threshold_reports_closed_form() {
    let o = wshift(&["threshold", "--a2", "1/4", "--k", "1,2", "--ubound", "3", "--out", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("a2,k,closed_form_y2,closed_form_f64,bisected_y2,abs_gap"));
    let k1: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k2: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&k1[..3], ["1/4", "1", "29/41"]);
    assert_eq!(&k2[..3], ["1/4", "2", "45/76"]);
    for row in [&k1, &k2] {
        assert!(row[5].parse::<f64>().unwrap() < 1e-8);
    }
}

#[test]
fn sweep_header_and_order() {
    let o = wshift(&["sweep", "--a2", "1/2,1/4", "--y2", "0.7,2/3", "--k", "2,1", "--ubound", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a2,y2,k,verdict,witness_u,expected,agree");
    let keys: Vec<String> = lines[1..].iter().map(|l| l.split(',').take(3).collect::<Vec<_>>().join(",")).collect();
    assert_eq!(
        keys,
        [
            "1/4,2/3,1", "1/4,2/3,2", "1/4,7/10,1", "1/4,7/10,2", "1/2,2/3,1", "1/2,2/3,2", "1/2,7/10,1", "1/2,7/10,2"
        ]
    );
}

#[test]
fn sweep_output_ignores_thread_count() {
    let run = |threads: &str| {
        stdout(&wshift(&[
            "sweep", "--a2", "1/8:1/2:4", "--y2", "1/2:1:6", "--kmax", "3", "--ubound", "2", "--threads", threads,
        ]))
    };
    let one = run("1");
    assert_eq!(one.lines().count(), 1 + 4 * 6 * 3);
    assert_eq!(one, run("4"));
    assert_eq!(one, run("auto"));
}

#[test]
fn verify_berger_commands() {
    let ok = wshift(&[
        "verify-berger", "--shift", "x_seq", "--shift-param", "1/3", "--measure", "mu_x", "--measure-param", "1/3",
        "--nmax", "100",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = wshift(&["verify-berger", "--shift", "x_seq", "--shift-param", "1/2", "--measure", "point", "--measure-param", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).contains("moment 1 is 3/8"));
}

#[test]
fn file_round_trip_through_commands() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    let o = wshift(&["moment-matrix", "--a2", "1/2", "--y2", "9/13", "--k", "2"]);
    std::fs::write(&m, o.stdout).unwrap();
    let verdict = wshift(&["psd", "--matrix", m.to_str().unwrap()]);
    assert_eq!(stdout(&verdict).lines().next(), Some("psd"));

    let mu = dir.path().join("mu.txt");
    std::fs::write(&mu, "# mu_x at y2 = 1/2\natom 0 1/2\natom 1 1/4\ndensity 1/4\n").unwrap();
    let o = wshift(&[
        "verify-berger", "--shift", "x_seq", "--shift-param", "1/2", "--measure-file", mu.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let field = dir.path().join("f.txt");
    write_field(&field, "family figure2\na2 1/2\ny2 2/3\n");
    let o = wshift(&["check", "--field", field.to_str().unwrap(), "--k", "3", "--ubound", "3"]);
    assert!(stdout(&o).starts_with("k=3 pass"));
    write_field(&field, "family figure2\na2 1/2\ny2 2/3\nbeta 1 0 2\n");
    let o = wshift(&["check", "--field", field.to_str().unwrap(), "--k", "1", "--ubound", "3"]);
    assert!(stdout(&o).starts_with("k=1 fail"));
    write_field(&field, "family figure2\na2 1/2\ny2 oops\n");
    let o = wshift(&["check", "--field", field.to_str().unwrap(), "--k", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"));
}

fn write_field(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn backward_extension_command() {
    let o = wshift(&["backward", "--a2", "1/2", "--y2", "2/3"]);
    assert_eq!(stdout(&o).lines().next(), Some("subnormal"));
    let o = wshift(&["backward", "--a2", "1/2", "--y2", "7/10"]);
    assert!(stdout(&o).starts_with("not subnormal: MeasureBound"));
}

#[test]
fn selftest_passes() {
    let o = wshift(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
