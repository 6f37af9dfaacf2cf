use std::path::PathBuf;
use std::process::{Command, Output};

fn qif(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qif"))
        .args(args)
        .env_remove("QIF_GRID_N")
        .output()
        .expect("binary runs")
}

fn canonical() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/programs/canonical.qif")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn simulate_canonical_program() {
    let out = qif(&["simulate", canonical().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("0.0566"), "{text}");
    assert!(text.contains("-0.292"), "{text}");
}

#[test]
fn simulate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qif");
    std::fs::write(&bad, "source width=1 mean=0\nbs t=0.5\nkick path=Q delta=0.2\n").unwrap();
    let out = qif(&["simulate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let missing = dir.path().join("missing.qif");
    assert_eq!(qif(&["simulate", missing.to_str().unwrap()]).status.code(), Some(3));

    let aliasing = dir.path().join("alias.qif");
    std::fs::write(&aliasing, "source width=1 mean=0\nbs t=0.5\nkick path=B delta=9\n").unwrap();
    let out = qif(&["simulate", aliasing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn sweep_csv_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = qif(&[
            "sweep", "--t-steps", "12", "--delta-steps", "9", "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(stdout(&out).contains("min mean_c"));
        std::fs::read(path).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("t,delta,alpha,p_c,mean_c,p_d,mean_d,residual\n"));
    assert_eq!(text.lines().count(), 1 + 12 * 9);
}

#[test]
fn sweep_backends_agree_on_subsample() {
    let dir = tempfile::tempdir().unwrap();
    let read = |backend: &str| {
        let path = dir.path().join(format!("{backend}.csv"));
        let out = qif(&[
            "sweep", "--t-steps", "20", "--delta-steps", "20", "--backend", backend, "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let mut reader = csv::Reader::from_path(path).unwrap();
        reader
            .records()
            .map(|r| r.unwrap().iter().map(|f| f.parse::<f64>().unwrap()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    };
    let (oracle, grid) = (read("oracle"), read("grid"));
    assert_eq!(oracle.len(), 400);
    for (o, g) in oracle.iter().zip(&grid) {
        assert_eq!(o[..3], g[..3]);
        for k in 3..7 {
            assert!((o[k] - g[k]).abs() <= 1e-6, "{o:?} vs {g:?}");
        }
    }
}

#[test]
fn grid_size_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qif"))
        .args(["oracle-check", "--samples", "3", "--seed", "1"])
        .env("QIF_GRID_N", "1024")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("grid points: 1024"));

    let flag = qif(&["oracle-check", "--samples", "3", "--seed", "1", "--grid-n", "2048"]);
    assert!(stdout(&flag).contains("grid points: 2048"));

    let bad = Command::new(env!("CARGO_BIN_EXE_qif"))
        .args(["oracle-check", "--samples", "3", "--seed", "1"])
        .env("QIF_GRID_N", "1000")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn oracle_check_requires_seed_and_handles_zero_samples() {
    assert!(!qif(&["oracle-check", "--samples", "3"]).status.success());
    let out = qif(&["oracle-check", "--samples", "0", "--seed", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("samples: 0"));
}

#[test]
fn other_commands_run() {
    let prop = qif(&["propagate", "--force", "20", "--tau", "0.01"]);
    assert!(prop.status.success());
    assert!(stdout(&prop).contains("kick fidelity = 0.99999"));

    let feas = qif(&["feasibility"]);
    assert!(feas.status.success());
    assert!(stdout(&feas).contains("delta / W = 0.099"));

    let bec = qif(&["bec", "--t", "0.85", "--delta-a", "0.1", "--delta-b", "0.3"]);
    assert!(bec.status.success());
    assert!(stdout(&bec).contains("<p>_A = -0.292"));

    assert_eq!(qif(&["bec", "--t", "1.5", "--delta-a", "0", "--delta-b", "0"]).status.code(), Some(3));
}
