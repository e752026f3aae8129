use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sharpsa(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sharpsa"));
    cmd.args(args).env_remove("SHARPSA_OUT");
    if let Some(d) = env_out {
        cmd.env("SHARPSA_OUT", d);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const TINY: &str = r#"
name = "tiny"
iters = 200
replications = 3

[problem]
name = "circle"

[algorithm]
kind = "psgd"

[schedule]
kind = "power-law"
a = 1.0
"#;

#[test]
fn bench_list_names_every_benchmark() {
    let o = sharpsa(&["bench-list"], None);
    assert!(o.status.success());
    let out = stdout(&o);
    for name in sharpsa::problems::BENCHMARKS {
        assert!(out.lines().any(|l| l.starts_with(&format!("{name}\t"))), "{name} missing");
    }
}

#[test]
fn run_writes_outputs_and_honours_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tiny.toml");
    fs::write(&cfg, TINY).unwrap();
    let out = dir.path().join("o");
    let o = sharpsa(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--reps", "2", "--iters", "5"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let traj = fs::read_to_string(out.join("trajectories.csv")).unwrap();
    // two replications of six recorded steps
    assert_eq!(traj.lines().count(), 1 + 2 * 6);
    assert!(out.join("aggregate.csv").exists() && out.join("fit.json").exists());
}

#[test]
fn default_output_dir_comes_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tiny.toml");
    fs::write(&cfg, TINY).unwrap();
    let o = sharpsa(&["run", cfg.to_str().unwrap(), "--threads", "1"], Some(dir.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("tiny").join("fit.json").exists());
    assert!(stdout(&o).contains("slope"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "iters = 0\n").unwrap();
    assert_eq!(sharpsa(&["run", bad.to_str().unwrap()], None).status.code(), Some(1));
    assert_eq!(sharpsa(&["run", "/nonexistent/config.toml"], None).status.code(), Some(3));

    let cfg = dir.path().join("tiny.toml");
    fs::write(&cfg, TINY).unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let o = sharpsa(&["run", cfg.to_str().unwrap(), "--out", blocker.join("sub").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3));

    let overflow = dir.path().join("overflow.toml");
    fs::write(
        &overflow,
        TINY.replace("name = \"circle\"", "name = \"circle\"\nsigma = 1e300")
            .replace("kind = \"power-law\"\na = 1.0", "kind = \"constant\"\nalpha = 1e300"),
    )
    .unwrap();
    let o = sharpsa(&["run", overflow.to_str().unwrap(), "--out", dir.path().join("x").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_reports_conditions() {
    let o = sharpsa(&["check", "circle", "--condition", "d1"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("D1 pass"), "{}", stdout(&o));
    let o = sharpsa(&["check", "reflected1d", "--condition", "c1", "--kappa", "1.0"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = sharpsa(&["check", "circle", "--condition", "d3"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(sharpsa(&["check", "circle", "--condition", "x9"], None).status.code(), Some(1));
    assert_eq!(sharpsa(&["check", "nowhere"], None).status.code(), Some(1));
}

#[test]
fn constants_prints_table() {
    let args = [
        "constants", "--kappa", "1", "--lambda", "0.5", "--b", "2", "--f", "10", "--d", "2", "--e", "1.5", "--gamma",
        "0", "--a", "0.01", "--z", "0.1,1",
    ];
    let o = sharpsa(&args, None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("n  = 1") && out.contains("P(gap >= 1) <="), "{out}");
    let mut bad = args.to_vec();
    bad[2] = "-1";
    assert_eq!(sharpsa(&bad, None).status.code(), Some(1));
}
