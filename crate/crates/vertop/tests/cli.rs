use std::path::Path;
use std::process::{Command, Output};

use vertop::report::Report;

fn vertop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vertop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn ope_identifies_the_zero_product() {
    let out = vertop(&["ope", "--expr", "nprod(beta[1],gamma[1],0)", "-N", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "tau * id");
}

#[test]
fn ope_identifies_brackets_of_currents() {
    let out = vertop(&[
        "ope",
        "--expr",
        "nprod(cartan[1,2],current[1,2],0)",
        "-N",
        "3",
        "--window",
        "-1..1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "2 * current[1,2]");
    let out = vertop(&[
        "ope",
        "--expr",
        "nprod(current[1,2],current[2,1],1)",
        "-N",
        "3",
        "--window",
        "-1..1",
    ]);
    assert_eq!(stdout(&out).trim(), "id");
}

#[test]
fn ope_rejects_bad_expressions() {
    let out = vertop(&["ope", "--expr", "beta[0]"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("index error at byte 5"));
    assert_eq!(
        code(&vertop(&["ope", "--expr", "nprod(beta[1],current[1,2],0)"])),
        2
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        code(&vertop(&["check", "heisenberg", "--g", "1", "-N", "5"])),
        0
    );
    assert_eq!(
        code(&vertop(&[
            "check",
            "sln-axioms",
            "-N",
            "2",
            "--window",
            "-1..1",
            "--probes",
            "4"
        ])),
        1
    );
    assert_eq!(code(&vertop(&["check", "no-such-suite"])), 2);
    assert_eq!(code(&vertop(&["check", "heisenberg", "-N", "0"])), 2);
    assert_eq!(
        code(&vertop(&["check", "heisenberg", "--window", "3..1"])),
        2
    );
    assert_eq!(code(&vertop(&["check", "sln", "--c", "2"])), 2);
    assert_eq!(code(&vertop(&["check", "heisenberg", "--bogus"])), 2);
    assert_eq!(code(&vertop(&["frobnicate"])), 2);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# small run\nN = 3\nwindow = -1..1  # narrow\ng=2\n").unwrap();
    let out = vertop(&[
        "check",
        "heisenberg",
        "--config",
        cfg.to_str().unwrap(),
        "-N",
        "4",
    ]);
    assert_eq!(code(&out), 0);
    let report = Report::from_json(&stdout(&out)).unwrap();
    assert_eq!(report.config["N"], "4");
    assert_eq!(report.config["g"], "2");
    assert_eq!(report.config["window"], "-1..1");

    std::fs::write(&cfg, "N = 3\ncolour = blue\n").unwrap();
    let out = vertop(&["check", "heisenberg", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:"));
    std::fs::write(&cfg, "just words\n").unwrap();
    assert_eq!(
        code(&vertop(&[
            "check",
            "heisenberg",
            "--config",
            cfg.to_str().unwrap()
        ])),
        2
    );
    assert_eq!(
        code(&vertop(&[
            "check",
            "heisenberg",
            "--config",
            "/nonexistent/x.conf"
        ])),
        2
    );
}

#[test]
fn sp_report_matches_golden() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/sp_g1.json");
    let out = vertop(&["check", "sp", "--g", "1", "--window", "-2..2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), std::fs::read_to_string(golden).unwrap());
    let report = Report::from_json(&stdout(&out)).unwrap();
    assert_eq!(report.entries[0].params["central"], "-1/2");
}

#[test]
fn reports_are_deterministic() {
    let args = ["check", "betagamma-axioms", "--seed", "7", "-N", "3"];
    let (a, b) = (vertop(&args), vertop(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file_and_rerender() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = vertop(&[
        "check",
        "pi-t",
        "--depth",
        "3",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let saved = std::fs::read_to_string(&path).unwrap();
    let again = vertop(&["report", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(stdout(&again), saved);
    let text = vertop(&["report", path.to_str().unwrap()]);
    assert!(stdout(&text).contains("0 fail"));
    std::fs::write(&path, "{").unwrap();
    assert_eq!(code(&vertop(&["report", path.to_str().unwrap()])), 2);
}

#[test]
fn timings_are_opt_in() {
    let plain = Report::from_json(&stdout(&vertop(&["check", "heisenberg", "-N", "3"]))).unwrap();
    assert!(plain.entries.iter().all(|e| e.millis == 0));
}
