use std::fs;
use std::path::Path;

use aderlw_cli::{parse_and_run, EXIT_BLOW_UP, EXIT_INVALID, EXIT_OK};
use aderlw_core::io::{read_diff_series, read_error_series, EOC_HEADER};

fn run(args: &[&str]) -> i32 {
    parse_and_run(std::iter::once("aderlw").chain(args.iter().copied()))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compare_wavepacket_matches_to_rounding() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("diff.csv");
    let code = run(&[
        "compare",
        "--degree",
        "3",
        "--dofs",
        "240",
        "--ic",
        "wavepacket",
        "--bc",
        "periodic",
        "--tfinal",
        "0.4",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, EXIT_OK);
    let diff = read_diff_series(fs::File::open(&out).unwrap()).unwrap();
    assert!(diff.samples.len() > 100);
    assert!((diff.samples.last().unwrap().time - 0.4).abs() < 1e-12);
    assert!(diff.max_diff() <= 1e-13, "max diff {}", diff.max_diff());
    for scheme in ["ader", "lw-d2"] {
        let errs = dir.path().join(format!("diff_{scheme}_errors.csv"));
        let series = read_error_series(fs::File::open(errs).unwrap()).unwrap();
        assert_eq!(series.samples.len(), diff.samples.len());
    }
}

#[test]
fn large_cfl_blows_up_and_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("errors.csv");
    assert_eq!(
        run(&["run", "--cfl", "5.0", "--out", path_str(&out)]),
        EXIT_BLOW_UP
    );
    let series = read_error_series(fs::File::open(&out).unwrap()).unwrap();
    assert!(!series.samples.is_empty());
    assert_eq!(series.samples[0].time, 0.0);
}

#[test]
fn indivisible_dofs_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("errors.csv");
    assert_eq!(
        run(&[
            "run",
            "--dofs",
            "241",
            "--degree",
            "2",
            "--out",
            path_str(&out)
        ]),
        EXIT_INVALID
    );
    assert!(!out.exists());
}

#[test]
fn bad_arguments_rejected() {
    assert_eq!(run(&["run", "--no-such-flag"]), EXIT_INVALID);
    assert_eq!(run(&["run", "--points", "chebyshev"]), EXIT_INVALID);
    assert_eq!(run(&["compare", "--scheme", "ader"]), EXIT_INVALID);
    assert_eq!(run(&["run", "--scheme", "rk4"]), EXIT_INVALID);
    assert_eq!(
        run(&["run", "--points", "gll", "--correction", "radau"]),
        EXIT_INVALID
    );
    assert_eq!(
        run(&["run", "--flux", "burgers", "--bc", "dirichlet"]),
        EXIT_INVALID
    );
    assert_eq!(run(&["--version"]), EXIT_OK);
}

#[test]
fn identical_arguments_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let base = [
        "compare",
        "--degree",
        "2",
        "--elements",
        "20",
        "--tfinal",
        "0.1",
    ];
    for out in [&a, &b] {
        let mut args = base.to_vec();
        args.extend(["--out", path_str(out)]);
        assert_eq!(run(&args), EXIT_OK);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        fs::read(dir.path().join("a_ader_errors.csv")).unwrap(),
        fs::read(dir.path().join("b_ader_errors.csv")).unwrap()
    );
}

#[test]
fn csv_headers() {
    let dir = tempfile::tempdir().unwrap();
    let first_line = |p: &Path| {
        fs::read_to_string(p)
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_string()
    };

    let errs = dir.path().join("errors.csv");
    assert_eq!(
        run(&[
            "run",
            "--degree",
            "1",
            "--elements",
            "10",
            "--tfinal",
            "0.05",
            "--out",
            path_str(&errs)
        ]),
        EXIT_OK
    );
    assert_eq!(first_line(&errs), "time,l2_error,linf_error");

    let diff = dir.path().join("diff.csv");
    let args = [
        "compare",
        "--degree",
        "1",
        "--elements",
        "10",
        "--tfinal",
        "0.05",
        "--out",
        path_str(&diff),
    ];
    assert_eq!(run(&args), EXIT_OK);
    assert_eq!(first_line(&diff), "time,linf_diff");

    let eoc = dir.path().join("eoc.csv");
    let args = [
        "eoc",
        "--degree",
        "1",
        "--levels",
        "3",
        "--tfinal",
        "0.05",
        "--ic",
        "sine",
        "--out",
        path_str(&eoc),
    ];
    assert_eq!(run(&args), EXIT_OK);
    assert_eq!(first_line(&eoc), EOC_HEADER.join(","));
}

#[test]
fn scan_runs_and_rejects_bad_grid() {
    assert_eq!(
        run(&[
            "scan",
            "--degree",
            "1",
            "--elements",
            "10",
            "--cfl-max",
            "0.5",
            "--cfl-step",
            "0.25",
            "--steps",
            "20"
        ]),
        EXIT_OK
    );
    assert_eq!(run(&["scan", "--cfl-step", "0"]), EXIT_INVALID);
}
