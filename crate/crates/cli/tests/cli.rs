use std::path::Path;
use std::process::{Command, Output};

fn zeno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeno-lab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(2)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn header_then_columns_then_rows() {
    let o = zeno(&[
        "pulsed",
        "--points",
        "3",
        "--tau",
        "0.5",
        "--precision",
        "6",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with(&format!(
        "# zeno-lab v{} pulsed gamma=1 lambda=3",
        env!("CARGO_PKG_VERSION")
    )));
    assert_eq!(lines[1], "t,w_lambda,noclick_bb");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[2], "0,0,1");
    // six significant digits
    assert!(
        lines[4]
            .split(',')
            .all(|x| x.trim_start_matches("0.").len() <= 7),
        "{}",
        lines[4]
    );
}

#[test]
fn infinite_bandwidth_is_lowercase_inf() {
    let o = zeno(&["continuous", "--lambda", "inf", "--points", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().next().unwrap().contains("lambda=inf"));
}

#[test]
fn config_file_sits_between_preset_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(
        &conf,
        "# tighter pulses\ntau = 0.25\nsigma = 3\npoints = 4\n",
    )
    .unwrap();
    let c = conf.to_str().unwrap();
    let o = zeno(&["pulsed", "--config", c, "--sigma", "7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let header = stdout(&o).lines().next().unwrap().to_string();
    assert!(header.contains("sigma=7 tau=0.25"), "{header}");
    assert!(header.contains("points=4"), "{header}");
}

#[test]
fn bad_config_and_flags_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    std::fs::write(&conf, "gamma = 1\nwidth = 2\n").unwrap();
    let o = zeno(&["fig1", "--config", conf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));
    assert_eq!(zeno(&["fig1", "--points", "1"]).status.code(), Some(1));
    assert_eq!(zeno(&["fig1", "--bogus"]).status.code(), Some(1));
    assert_eq!(zeno(&["pulsed", "--sigma", "0"]).status.code(), Some(1));
    assert_eq!(zeno(&["--help"]).status.code(), Some(0));
}

#[test]
fn empty_sweep_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = zeno(&[
        "sweep",
        "--from",
        "5",
        "--to",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn sigma_sweep_width_column_decreases() {
    let o = zeno(&[
        "sweep",
        "--axis",
        "sigma",
        "--from",
        "1",
        "--to",
        "9",
        "--step",
        "2",
        "--model",
        "continuous",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "sigma,gamma_eff,noclick_c_inf,noclick_c_inf_approx"
    );
    let r = rows(&text);
    assert_eq!(r.len(), 5);
    assert!(r.windows(2).all(|w| w[1][1] < w[0][1]));
}

#[test]
fn fig3_panels() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig3.csv");
    let o = zeno(&["fig3", "--points", "101", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "t,noclick_c_sigma=40,noclick_bb_sigma=40,noclick_c_sigma=3,noclick_bb_sigma=3,exp"
    );
    for r in rows(&text) {
        let (t, free) = (r[0], r[5]);
        assert!(r[1..5].iter().all(|&p| p >= free - 1e-9), "t = {t}");
        if t <= 0.2 {
            assert!((r[1] - r[2]).abs() < 0.02, "t = {t}");
        }
    }
}

#[test]
fn selfcheck_exit_codes() {
    let ok = zeno(&["selfcheck"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).lines().all(|l| !l.starts_with("FAIL")));

    let bad = zeno(&["selfcheck", "--debug-misbranch"]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(stdout(&bad)
        .lines()
        .any(|l| l.starts_with("FAIL density nonnegative")));
}

#[test]
fn selfcheck_tighter_tolerance_raises_normalization_ratio() {
    let ratio = |args: &[&str]| -> f64 {
        let o = zeno(args);
        let text = stdout(&o);
        let line = text
            .lines()
            .find(|l| l.contains("normalization lambda=3 sigma=3"))
            .unwrap()
            .to_string();
        line.rsplit("ratio ")
            .next()
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    let loose = ratio(&["selfcheck"]);
    let tight = ratio(&["selfcheck", "--tol", "1e-12"]);
    assert!(tight > 50.0 * loose, "{loose} vs {tight}");
}

#[test]
fn output_replaces_existing_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    std::fs::write(&out, "stale").unwrap();
    let o = zeno(&["fig2", "--points", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# zeno-lab"));
    assert_eq!(rows(&text).len(), 3);
    assert!(Path::new(&out).exists());
}

#[test]
fn doubled_time_resolution_moves_nothing_beyond_rel_tol() {
    let coarse = rows(&stdout(&zeno(&["fig3", "--points", "51"])));
    let fine = rows(&stdout(&zeno(&["fig3", "--points", "101"])));
    for (a, b) in coarse.iter().zip(fine.iter().step_by(2)) {
        for (x, y) in a.iter().zip(b) {
            assert!(
                (x - y).abs() <= 1e-10 * y.abs().max(1e-3),
                "t = {}: {x} vs {y}",
                a[0]
            );
        }
    }
}
