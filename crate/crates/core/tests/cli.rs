//! The `residue-verify` command line, driven in-process through `main_with`.

use std::path::PathBuf;

use residue_kernel::cli::main_with;

const ERRATA: [&str; 6] = ["C0", "C2", "G0", "G1", "H1", "H4"];

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("residue-verify").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn builtin_goldens() -> String {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/goldens.txt")).unwrap()
}

#[test]
fn help_goes_to_stdout_with_status_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["verify-coefficients", "verify-case", "verify-all", "probe-h5", "show"] {
        assert!(out.contains(sub), "help lacks {}", sub);
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["verify-case", "--m", "4"],
        vec!["verify-coefficients", "--m", "17"],
        vec!["verify-coefficients", "--m", "3..1"],
        vec!["verify-all", "--m-max", "0"],
        vec!["verify-case", "--case", "VI"],
        vec!["verify-coefficients", "--m", "1", "--m-max", "2"],
        vec!["verify-coefficients", "--goldens", "/nonexistent/goldens.txt"],
    ] {
        let (code, out, err) = run(&args);
        assert_eq!(code, 2, "{:?}: stdout {} stderr {}", args, out, err);
        assert!(out.is_empty(), "{:?} wrote a report", args);
        assert!(!err.is_empty());
    }
}

#[test]
fn malformed_goldens_report_the_line() {
    let text = builtin_goldens().replacen("record A1\n", "record A1\nbogus-line-without-value\n", 1);
    let p = scratch("malformed.txt", &text);
    let (code, _, err) = run(&["verify-coefficients", "--m", "1", "--goldens", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line"), "{}", err);
}

#[test]
fn goldens_without_a_case_record_are_rejected() {
    let text = builtin_goldens();
    let start = text.find("record case-A-II\n").unwrap();
    let end = start + text[start..].find("\nend\n").unwrap() + 5;
    let p = scratch("missing-case.txt", &format!("{}{}", &text[..start], &text[end..]));
    let (code, _, err) = run(&["verify-all", "--m", "1", "--goldens", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("case-A-II"), "{}", err);
}

#[test]
fn pipeline_failures_exit_three() {
    // A numerator with a pole at t = i cannot be differentiated there.
    let text = builtin_goldens().replacen("numer   1\npole    m\n", "numer   (/ 1 (- t i))\npole    m\n", 1);
    let p = scratch("pole.txt", &text);
    let (code, _, err) = run(&["verify-coefficients", "--m", "1", "--goldens", p.to_str().unwrap()]);
    assert_eq!(code, 3, "{}", err);
}

#[test]
fn coefficient_sweep_reports_the_errata() {
    let (code, out, _) = run(&["verify-coefficients", "--m-max", "2"]);
    assert_eq!(code, 1);
    let last = out.lines().last().unwrap();
    assert!(last.starts_with("27×2 coefficients checked, 12 mismatched"), "{}", last);
    for name in ERRATA {
        assert!(out.lines().any(|l| l.starts_with("MISMATCH") && l.contains(&format!(" {} ", name))), "{} not flagged", name);
    }
}

#[test]
fn waivers_clear_the_exit_code_but_stay_visible() {
    let mut args = vec!["verify-coefficients", "--m", "1..3"];
    for name in ERRATA.iter().chain(["H5-order"].iter()) {
        args.push("--waive");
        args.push(name);
    }
    let (code, out, _) = run(&args);
    assert_eq!(code, 0, "{}", out);
    assert!(out.lines().last().unwrap().ends_with("VERIFIED"));
    assert_eq!(out.lines().filter(|l| l.starts_with("WAIVED")).count(), 7 * 3);
}

#[test]
fn h5_probe_shows_both_orders() {
    let (code, out, _) = run(&["probe-h5", "--m", "1"]);
    assert_eq!(code, 1);
    assert!(out.contains("ok       H5       m=1  0"), "{}", out);
    assert!(out.contains("3/2*i"));
    let (code, _, _) = run(&["probe-h5", "--m", "1", "--waive", "H5-order"]);
    assert_eq!(code, 0);
}

#[test]
fn csv_has_the_fixed_header() {
    let (_, out, _) = run(&["verify-coefficients", "--m", "1", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["name", "m", "defined", "closed", "match"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 28);
    let a1 = rows.iter().find(|r| &r[0] == "A1").unwrap();
    assert_eq!((&a1[2], &a1[3], &a1[4]), ("-3/8", "-3/8", "true"));
}

#[test]
fn json_report_is_stable_and_parseable() {
    let args = ["verify-case", "--theorem", "A", "--case", "II", "--m", "1..2", "--format", "json"];
    let (code, first, _) = run(&args);
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["command"], "verify-case");
    let names: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"case-A-II:printed"));
    assert!(names.contains(&"by-parts:case-A-II"));
    let printed_ok = v["rows"].as_array().unwrap().iter().filter(|r| r["name"] == "case-A-II:printed").all(|r| r["match"] == true);
    assert!(printed_ok);
    // tangential terms are omitted from the printed case, so the full row fails
    assert_eq!(code, 1);
}

#[test]
fn show_lists_and_evaluates_records() {
    let (code, out, _) = run(&["show"]);
    assert_eq!(code, 0);
    assert!(out.contains("A0") && out.contains("theorem-B") && out.contains("proj-B3"));
    let (code, out, _) = run(&["show", "A1", "--m", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("defined   -3/8"), "{}", out);
    let (code, _, err) = run(&["show", "no-such-record"]);
    assert_ne!(code, 0);
    assert!(err.contains("no-such-record"));
}
