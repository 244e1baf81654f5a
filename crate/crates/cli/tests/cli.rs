//! Black-box runs of the `cisc` binary.

use std::process::{Command, Output};

fn cisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cisc"))
        .args(args)
        .output()
        .expect("spawn cisc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn zero_snr_grid_has_one_zero_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.csv");
    let o = cisc(&[
        "curves",
        "--grid",
        "list:0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1].split(',').next_back(), Some("0"));
    assert_eq!(field(&stdout(&o), "delta_max"), "0");
}

#[test]
fn default_grid_reports_positive_gain_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let oa = cisc(&["curves", "--out", a.to_str().unwrap()]);
    let ob = cisc(&["curves", "--out", b.to_str().unwrap()]);
    assert!(oa.status.success() && ob.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let summary = stdout(&oa);
    assert_eq!(field(&summary, "interior_positive"), "79/79");
    assert!(field(&summary, "delta_max").parse::<f64>().unwrap() > 0.0);
}

#[test]
fn curves_to_stdout_is_pure_csv() {
    let o = cisc(&["curves", "--grid", "db:-10:10:5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("gamma,gamma_db,"));
    assert_eq!(text.lines().count(), 6);
    assert!(String::from_utf8_lossy(&o.stderr).contains("delta_min="));
}

#[test]
fn measured_weights_run() {
    let o = cisc(&[
        "curves",
        "--grid",
        "list:1",
        "--measured-weights",
        "--frames",
        "4",
        "--blocks",
        "64",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("measured weights"));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let o = cisc(&["curves", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kind=io"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["nonsense"][..],
        &["curves", "--grid", "lin:0:1"],
        &["curves", "--grid", "lin:5:1:3"],
        &["simulate", "--code", "c1=nosuch"],
        &["simulate", "--frames", "0"],
        &["simulate", "--sigma2", "-1"],
        &["audit", "--split", "1.5"],
        &["slope", "--probe", "-1"],
    ] {
        assert_eq!(cisc(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn noiseless_and_genie_simulations_are_error_free() {
    for args in [
        &[
            "simulate", "--sigma2", "0", "--frames", "20", "--blocks", "32",
        ][..],
        &[
            "simulate", "--sigma2", "2", "--mode", "genie", "--frames", "20", "--blocks", "32",
        ],
        &[
            "simulate",
            "--code",
            "c1=identity,c3=repetition3",
            "--mode",
            "genie",
            "--gamma",
            "0.5",
            "--frames",
            "20",
        ],
    ] {
        let o = cisc(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let text = stdout(&o);
        for key in ["c1_bit_errors", "c2_bit_errors", "c3_bit_errors"] {
            assert_eq!(field(&text, key), "0", "{args:?}");
        }
    }
}

#[test]
fn noisy_simulation_reports_errors_and_length_ratio() {
    let o = cisc(&["simulate", "--gamma", "2", "--frames", "10", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(field(&text, "step1_symbol_errors").parse::<u64>().unwrap() > 0);
    let ratio: f64 = field(&text, "length_ratio").parse().unwrap();
    assert!((1.2..1.3).contains(&ratio));
    // Same run, same report.
    assert_eq!(
        stdout(&cisc(&[
            "simulate", "--gamma", "2", "--frames", "10", "--seed", "9"
        ])),
        text
    );

    let strict = cisc(&[
        "simulate",
        "--gamma",
        "2",
        "--frames",
        "10",
        "--require-zero-errors",
    ]);
    assert_eq!(strict.status.code(), Some(1));
    let err = String::from_utf8_lossy(&strict.stderr);
    assert!(err.contains("FAIL check=zero_errors"));
    assert!(err.contains("status=fail failed=1"));
}

#[test]
fn frame_dump_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frame.csv");
    let o = cisc(&[
        "simulate",
        "--frames",
        "1",
        "--blocks",
        "2",
        "--dump-frame",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("step,index,in_phase,quadrature,tag\n"));
    assert_eq!(csv.lines().filter(|l| l.starts_with("1,")).count(), 14);
}

#[test]
fn audit_holds_on_positive_snr_and_is_stable() {
    let args = ["audit", "--grid", "list:0,0.5,2,10", "--trials", "20000"];
    let o = cisc(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<_> = text
        .lines()
        .take_while(|l| !l.is_empty())
        .filter(|l| !l.starts_with('#') && !l.contains("gamma"))
        .collect();
    assert_eq!(rows.len(), 12);
    for row in &rows {
        let cells: Vec<_> = row.split_whitespace().collect();
        if cells[0] == "0" {
            assert_eq!((cells[2], cells[3]), ("0", "0"));
        } else {
            assert_eq!(cells[4], "true", "{row}");
        }
    }
    assert_eq!(stdout(&cisc(&args)), text);
}

#[test]
fn slopes_are_within_tolerance_and_converge() {
    let o = cisc(&["slope"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["bpsk_mi", "qpsk_mi", "rate_total"] {
        let row: Vec<_> = text
            .lines()
            .find(|l| l.trim_start().starts_with(name))
            .unwrap()
            .split_whitespace()
            .collect();
        let err: f64 = row[3].parse().unwrap();
        let half: f64 = row[5].parse().unwrap();
        assert!(err < 0.01, "{name}: {err}");
        assert!(half <= 2.0 * err, "{name}: {half} vs {err}");
    }
}

#[test]
fn coarse_probe_fails_the_slope_check() {
    let o = cisc(&["slope", "--probe", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("check=slope function=qpsk_mi"));
}
