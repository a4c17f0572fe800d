use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypres")).args(args).output().expect("spawn hypres")
}

fn ok(args: &[&str]) -> Vec<u8> {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

/// Metadata line and records of a CSV output.
fn parse_csv(bytes: &[u8]) -> (Value, Vec<String>, Vec<Vec<String>>) {
    let text = std::str::from_utf8(bytes).unwrap();
    assert!(text.ends_with('\n'));
    let first = text.lines().next().unwrap();
    let meta: Value = serde_json::from_str(first.strip_prefix("# ").unwrap()).unwrap();
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(bytes);
    let header = rd.headers().unwrap().iter().map(String::from).collect();
    let rows = rd.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (meta, header, rows)
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn obstacle_resonances_file() {
    let (meta, header, rows) = parse_csv(&ok(&["resonances", "--r0", "1", "--tmax", "10"]));
    assert_eq!(meta["schema"], "hypres/1");
    assert_eq!(meta["config"]["model"], "obstacle");
    assert_eq!(meta["config"]["tmax"], 10.0);
    assert_eq!(header, ["re_s", "im_s", "l", "local_order", "weight"]);
    assert!(!rows.is_empty());
    for r in &rows {
        if f(&r[1]) != 0.0 {
            assert_eq!(r[4], "2");
        }
    }
    let total: u64 = rows.iter().map(|r| r[4].parse::<u64>().unwrap()).sum();
    assert_eq!(meta["summary"]["n_p"], total);
}

#[test]
fn unperturbed_listing_is_empty() {
    let args = ["resonances", "--model", "transparent", "--kappa", "1", "--tmax", "5"];
    let (_, header, rows) = parse_csv(&ok(&args));
    assert_eq!(header.len(), 5);
    assert!(rows.is_empty());
    let mut with = args.to_vec();
    with.push("--with-background");
    let (_, _, rows) = parse_csv(&ok(&with));
    assert!(!rows.is_empty());
}

#[test]
fn output_is_deterministic_and_config_round_trips() {
    let args = ["resonances", "--r0", "0.7", "--tmax", "6", "--format", "json"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    // feed the echoed configuration back as flags
    let doc: Value = serde_json::from_slice(&a).unwrap();
    let cfg = doc["config"].as_object().unwrap();
    let mut flags = vec!["resonances".to_string()];
    for (k, v) in cfg {
        let name = format!("--{}", k.replace('_', "-"));
        match v {
            Value::Null => {}
            Value::Bool(true) => flags.push(name),
            Value::Bool(false) => {}
            Value::String(s) => flags.extend([name, s.clone()]),
            other => flags.extend([name, other.to_string()]),
        }
    }
    let flags: Vec<&str> = flags.iter().map(String::as_str).collect();
    assert_eq!(ok(&flags), a);
}

fn step_at(rows: &[Vec<String>], t: f64, col: usize) -> u64 {
    rows.iter().rev().find(|r| f(&r[0]) <= t).map(|r| r[col].parse().unwrap()).unwrap()
}

#[test]
fn counting_curves() {
    let files: Vec<_> = ["0.5", "1", "2"]
        .iter()
        .map(|r0| parse_csv(&ok(&["counting", "--r0", r0, "--tmax", "10"])))
        .collect();
    let res = parse_csv(&ok(&["resonances", "--r0", "1", "--tmax", "10"])).2;
    for (_, header, rows) in &files {
        assert_eq!(header, &["t", "N_P", "N0"]);
        assert_eq!(rows[0], ["0.0", "0", "0"]);
        let ts: Vec<f64> = rows.iter().map(|r| f(&r[0])).collect();
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
    }
    // every jump of the r0 = 1 curve is on its grid
    let grid: Vec<f64> = files[1].2.iter().map(|r| f(&r[0])).collect();
    for r in &res {
        let d = ((f(&r[0]) - 0.5).powi(2) + f(&r[1]).powi(2)).sqrt();
        assert!(grid.iter().any(|t| (t - d).abs() <= 1e-12 * d.max(1.0)), "jump at {d}");
    }
    for i in 0..=160 {
        let t = 2.0 + 0.05 * i as f64;
        let n: Vec<u64> = files.iter().map(|(_, _, rows)| step_at(rows, t, 1)).collect();
        assert!(n[0] <= n[1] && n[1] <= n[2], "t = {t}: {n:?}");
    }
}

fn constant(args: &[&str]) -> f64 {
    let mut a = vec!["constants"];
    a.extend_from_slice(args);
    let (_, header, rows) = parse_csv(&ok(&a));
    assert_eq!(header, ["n", "r0", "b0", "b1", "b2", "bp", "b2_error"]);
    f(&rows[0][5])
}

#[test]
fn constants_table() {
    assert!((constant(&["--r0", "1"]) - 2.61).abs() <= 0.03);
    let c1 = constant(&["--model", "step", "--c", "1"]);
    let c5 = constant(&["--model", "step", "--c", "5"]);
    assert!((c1 - 3.15).abs() <= 0.03);
    assert_eq!(c1, c5);
    assert!((constant(&["--model", "transparent", "--kappa", "1.4142135623730951"]) - 3.70).abs() <= 0.03);
}

#[test]
fn phase_and_relcount_files() {
    let (meta, header, rows) = parse_csv(&ok(&["phase", "--xi-max", "40"]));
    assert_eq!(header, ["xi", "sigma"]);
    assert_eq!(rows[0], ["0.0", "0.0"]);
    let fit = &meta["summary"]["fit"];
    let c = fit["coefficient"].as_f64().unwrap();
    let ci = fit["ci95"].as_array().unwrap();
    assert!(ci[0].as_f64().unwrap() <= c && c <= ci[1].as_f64().unwrap());
    assert!((c / -0.27154 - 1.0).abs() < 0.03);

    let doc: Value = serde_json::from_slice(&ok(&["relcount", "--a", "4", "--format", "json"])).unwrap();
    assert_eq!(doc["columns"], serde_json::json!(["a", "lhs", "rhs_phase_term", "rhs_tau_term", "defect"]));
    let row = doc["rows"][0].as_array().unwrap();
    assert!(row[4].as_f64().unwrap().abs() < 0.1);
}

#[test]
fn legendre_eval_and_out_file() {
    let dir = std::env::temp_dir().join(format!("hypres-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("leg.csv");
    let p = path.to_str().unwrap();
    // P_{-1/2}(cosh r) = (2/pi) sech(r/2) K(m = tanh^2(r/2)), evaluated with mpmath
    let out = run(&["legendre-eval", "--nu-re", "-0.5", "--z", "2", "--out", p]);
    assert!(out.status.success() && out.stdout.is_empty());
    let (_, header, rows) = parse_csv(&std::fs::read(&path).unwrap());
    assert_eq!(header[0], "function");
    assert_eq!(rows.len(), 2);
    assert!((f(&rows[0][1]) - 0.901286299360447).abs() < 1e-12, "{}", rows[0][1]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    for args in [
        &["resonances", "--r0", "-1"][..],
        &["constants", "--model", "step", "--n", "3"],
        &["phase", "--xi-step", "0"],
        &["relcount", "--model", "step", "--c", "-30", "--a", "4"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(run(&["resonances", "--model", "sphere"]).status.code(), Some(2));
    assert_eq!(run(&["legendre-eval", "--nu-re", "1e9"]).status.code(), Some(3));
}
