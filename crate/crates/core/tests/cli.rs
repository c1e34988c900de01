use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_clonalg"))
}

#[test]
fn list_functions_prints_registry() {
    let out = bin().arg("list-functions").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text
        .lines()
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(names, clonalg::benchmarks::NAMES);
}

#[test]
fn run_writes_summary_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json");
    let traces = dir.path().join("traces");
    let status = bin()
        .args([
            "run",
            "--function",
            "sum-of-powers",
            "--algorithm",
            "ga",
            "--clone-set",
            "1",
        ])
        .args(["--ga-mutation-rate", "0.005", "--seed", "3", "--runs", "2"])
        .arg("--out")
        .arg(&out)
        .arg("--trace-dir")
        .arg(&traces)
        .status()
        .unwrap();
    assert!(status.success());
    let result = clonalg::harness::read_results(&out).unwrap();
    assert_eq!(result.cells.len(), 1);
    assert_eq!(result.cells[0].runs.len(), 2);
    assert!(traces.join("sum-of-powers_cell0_run1.csv").exists());
}

#[test]
fn invalid_arguments_exit_with_two() {
    let cases: &[&[&str]] = &[
        &[
            "run",
            "--function",
            "ackleys",
            "--algorithm",
            "clonalg",
            "--clone-set",
            "1",
            "--mutation-group",
            "1",
            "--seed",
            "1",
        ],
        &[
            "run",
            "--function",
            "ackley",
            "--algorithm",
            "clonalg",
            "--clone-set",
            "4",
            "--mutation-group",
            "1",
            "--seed",
            "1",
        ],
        &[
            "run",
            "--function",
            "ackley",
            "--algorithm",
            "ga",
            "--clone-set",
            "1",
            "--mutation-group",
            "1",
            "--seed",
            "1",
        ],
        &[
            "run",
            "--function",
            "ackley",
            "--algorithm",
            "ga",
            "--clone-set",
            "1",
            "--ga-mutation-rate",
            "1.5",
            "--seed",
            "1",
        ],
        &[
            "sweep",
            "--function",
            "sphere",
            "--algorithm",
            "pso",
            "--seed",
            "1",
        ],
        &["table2"],
    ];
    for args in cases {
        let out = bin().args(*args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = bin()
        .args([
            "run",
            "--function",
            "sphere",
            "--algorithm",
            "clonalg",
            "--clone-set",
            "1",
        ])
        .args([
            "--mutation-group",
            "1",
            "--seed",
            "1",
            "--runs",
            "1",
            "--max-generations",
            "5",
        ])
        .arg("--out")
        .arg(blocker.join("x.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_to_stdout_is_json() {
    let out = bin()
        .args([
            "sweep",
            "--function",
            "sum-of-powers",
            "--algorithm",
            "both",
            "--seed",
            "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let r: clonalg::ExperimentResult = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.cells.len(), 18);
}
