use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn wsfbm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wsfbm"))
        .current_dir(dir)
        .env_remove("WSFBM_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let o = wsfbm(dir, args);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    o
}

fn read(p: PathBuf) -> String {
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

/// Rows of a CSV file keyed by header name.
fn csv(p: PathBuf) -> (Vec<String>, Vec<Vec<String>>) {
    let text = read(p);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn column(p: PathBuf, name: &str) -> Vec<f64> {
    let (h, rows) = csv(p);
    let k = h.iter().position(|c| c == name).unwrap();
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

fn key_values(p: PathBuf) -> BTreeMap<String, String> {
    read(p)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (k, v) = l.split_once('=').expect("key = value");
            (k.trim().to_string(), v.trim().to_string())
        })
        .collect()
}

#[test]
fn simulate_brownian_rows_and_metadata() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["simulate", "--family", "c1", "--a", "0", "--b", "0", "--n", "3", "--paths", "1", "--seed", "7", "--out", "o"]);
    let (h, rows) = csv(d.path().join("o/paths.csv"));
    assert_eq!(h, ["path_id", "t", "value"]);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0], ["0", "0", "0"]);
    let meta = key_values(d.path().join("o/paths.csv.meta"));
    assert_eq!(meta["tool"], "wsfbm");
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(meta["seed"], "7");
    assert_eq!(meta["n"], "3");
    assert_eq!(meta["process"], "wsfbm");
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let d = TempDir::new().unwrap();
    let args = |out: &'static str, seed: &'static str| {
        ["simulate", "--a", "0.42", "--b", "1.59", "--n", "50", "--paths", "3", "--seed", seed, "--out", out]
    };
    ok(d.path(), &args("x", "11"));
    ok(d.path(), &args("y", "11"));
    ok(d.path(), &args("z", "12"));
    let x = std::fs::read(d.path().join("x/paths.csv")).unwrap();
    assert_eq!(x, std::fs::read(d.path().join("y/paths.csv")).unwrap());
    assert_ne!(x, std::fs::read(d.path().join("z/paths.csv")).unwrap());
}

#[test]
fn geometric_paths_are_positive_and_ou_starts_at_v0() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["simulate", "--process", "geometric", "--a", "-0.3", "--b", "1.2", "--sigma", "2", "--mu", "-0.5", "--n", "40", "--paths", "5", "--seed", "1", "--out", "g"]);
    let v = column(d.path().join("g/paths.csv"), "value");
    assert_eq!(v.len(), 5 * 41);
    assert!(v.iter().all(|&s| s > 0.0));
    ok(d.path(), &["simulate", "--process", "ou", "--b", "0.4", "--beta", "2", "--v0", "1.5", "--n", "10", "--seed", "1", "--out", "ou"]);
    assert_eq!(column(d.path().join("ou/paths.csv"), "value")[0], 1.5);
}

#[test]
fn seed_is_mandatory_for_simulate_and_predict() {
    let d = TempDir::new().unwrap();
    let o = wsfbm(d.path(), &["simulate", "--n", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed"));
    std::fs::write(d.path().join("obs.csv"), "t,value\n1,0.5\n2,0.7\n").unwrap();
    assert_eq!(code(&wsfbm(d.path(), &["predict", "--input", "obs.csv", "--b", "0.5"])), 2);
}

#[test]
fn gram_brownian_lower_triangle() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["gram", "--a", "0", "--b", "0", "--times", "1,2", "--out", "g"]);
    let (h, rows) = csv(d.path().join("g/gram.csv"));
    assert_eq!(h, ["i", "j", "t_i", "t_j", "value"]);
    assert_eq!(rows.len(), 3);
    let v: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert_eq!((rows[0][0].as_str(), rows[0][1].as_str()), ("1", "1"));
    assert_eq!((rows[1][0].as_str(), rows[1][1].as_str()), ("2", "1"));
    for (got, want) in v.iter().zip([1.0, 1.0, 2.0]) {
        assert!((got - want).abs() <= 1e-8, "{got} vs {want}");
    }
    assert!(d.path().join("g/gram.csv.meta").exists());
}

#[test]
fn gram_methods_agree_and_bad_methods_exit_2() {
    let d = TempDir::new().unwrap();
    for m in ["1", "4"] {
        ok(d.path(), &["gram", "--a", "0.21", "--b", "1.28", "--n", "6", "--horizon", "10", "--method", m, "--out", m]);
    }
    let (a, b) = (column(d.path().join("1/gram.csv"), "value"), column(d.path().join("4/gram.csv"), "value"));
    assert_eq!(a.len(), 21);
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-4));
    let o = wsfbm(d.path(), &["gram", "--n", "2", "--method", "5", "--out", "bad"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("method 5"));
    assert_eq!(code(&wsfbm(d.path(), &["gram", "--n", "2", "--b", "2.5"])), 2);
    assert_eq!(code(&wsfbm(d.path(), &["gram", "--times", "2,1"])), 2);
}

#[test]
fn fit_round_trips_simulated_data() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["simulate", "--family", "c2", "--a", "-0.34", "--b", "1.23", "--horizon", "4", "--n", "60", "--paths", "2", "--seed", "5", "--out", "s"]);
    let o = wsfbm(d.path(), &["fit", "--input", "s/paths.csv", "--path-id", "1", "--family", "c2", "--out", "f"]);
    assert!(matches!(code(&o), 0 | 4), "{}", String::from_utf8_lossy(&o.stderr));
    let fit = key_values(d.path().join("f/fit.txt"));
    assert_eq!(fit["family"], "c2");
    assert_eq!(fit["n"], "60");
    for k in ["a_hat", "b_hat", "loglik", "aic"] {
        assert!(fit[k].parse::<f64>().unwrap().is_finite(), "{k}");
    }
    let (ll, aic): (f64, f64) = (fit["loglik"].parse().unwrap(), fit["aic"].parse().unwrap());
    assert!((aic - (4.0 - 2.0 * ll)).abs() < 1e-9 * ll.abs().max(1.0));
    if fit["converged"] == "true" {
        let (lo, hi): (f64, f64) = (fit["ci_a_lo"].parse().unwrap(), fit["ci_a_hi"].parse().unwrap());
        let a: f64 = fit["a_hat"].parse().unwrap();
        assert!(lo <= a && a <= hi);
        assert!(!fit["profile_b"].is_empty());
    }
    assert_eq!(key_values(d.path().join("f/fit.txt.meta"))["path-id"], "1");
}

#[test]
fn fit_on_log_kernel_data_covers_zero_and_one() {
    // fixed-seed smoke run; coverage rates are checked in the core acceptance suite
    let d = TempDir::new().unwrap();
    ok(d.path(), &["simulate", "--a", "0", "--b", "1", "--horizon", "9", "--n", "200", "--seed", "21", "--out", "s"]);
    let o = wsfbm(d.path(), &["fit", "--input", "s/paths.csv", "--out", "f"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let fit = key_values(d.path().join("f/fit.txt"));
    let get = |k: &str| fit[k].parse::<f64>().unwrap();
    assert!(get("ci_a_lo") <= 0.0 && 0.0 <= get("ci_a_hi"), "{fit:?}");
    assert!(get("ci_b_lo") <= 1.0 && 1.0 <= get("ci_b_hi"), "{fit:?}");
}

#[test]
fn fit_input_errors_exit_2() {
    let d = TempDir::new().unwrap();
    let o = wsfbm(d.path(), &["fit", "--input", "missing.csv"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.csv"));
    assert_eq!(code(&wsfbm(d.path(), &["fit"])), 2);
    std::fs::write(d.path().join("short.csv"), "t,value\n1,0.1\n2,0.3\n").unwrap();
    assert_eq!(code(&wsfbm(d.path(), &["fit", "--input", "short.csv"])), 2);
}

#[test]
fn degenerate_data_exits_4_with_result_written() {
    let d = TempDir::new().unwrap();
    let mut text = String::from("t,value\n");
    for k in 1..=30 {
        text.push_str(&format!("{},0\n", k as f64 / 10.0));
    }
    std::fs::write(d.path().join("zeros.csv"), text).unwrap();
    let o = wsfbm(d.path(), &["fit", "--input", "zeros.csv", "--out", "f"]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    let fit = key_values(d.path().join("f/fit.txt"));
    assert_eq!(fit["converged"], "false");
    assert!(fit.contains_key("warning_1"));
}

#[test]
fn predict_with_and_without_truth() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["simulate", "--family", "c2", "--a", "-0.34", "--b", "1.23", "--horizon", "4", "--n", "60", "--seed", "2", "--out", "s"]);
    let spec = ["--family", "c2", "--a", "-0.34", "--b", "1.23", "--seed", "9", "--sims", "50"];

    let mut args = vec!["predict", "--input", "s/paths.csv", "--horizon-steps", "0", "--out", "empty"];
    args.extend(spec);
    ok(d.path(), &args);
    assert_eq!(read(d.path().join("empty/prediction.csv")), "t,mean,sd,lo,hi\n");

    let mut args = vec!["predict", "--input", "s/paths.csv", "--fit-points", "54", "--out", "p"];
    args.extend(spec);
    let o = ok(d.path(), &args);
    let (h, rows) = csv(d.path().join("p/prediction.csv"));
    assert_eq!(h, ["t", "mean", "sd", "lo", "hi", "truth"]);
    assert_eq!(rows.len(), 6);
    let mse: f64 = key_values(d.path().join("p/prediction.csv.meta"))["mse"].parse().unwrap();
    assert!(String::from_utf8_lossy(&o.stdout).contains("mse = "));
    assert!(mse >= 0.0 && mse.is_finite());
    let sd = column(d.path().join("p/prediction.csv"), "sd");
    assert!(sd.windows(2).all(|w| w[1] >= w[0]));

    // truth equal to the predicted mean gives zero error
    let mean = column(d.path().join("p/prediction.csv"), "mean");
    let (_, obs) = csv(d.path().join("s/paths.csv"));
    let mut text = String::from("t,value\n");
    for r in &obs[..=54] {
        text.push_str(&format!("{},{}\n", r[1], r[2]));
    }
    for (r, m) in rows.iter().zip(&mean) {
        text.push_str(&format!("{},{m}\n", r[0]));
    }
    std::fs::write(d.path().join("self.csv"), text).unwrap();
    let mut args = vec!["predict", "--input", "self.csv", "--fit-points", "54", "--out", "q"];
    args.extend(spec);
    ok(d.path(), &args);
    assert_eq!(key_values(d.path().join("q/prediction.csv.meta"))["mse"], "0");
}

#[test]
fn predict_reads_a_fit_file() {
    let d = TempDir::new().unwrap();
    std::fs::write(d.path().join("fit.txt"), "# fit\nfamily = c1\na_hat = 0\nb_hat = 0\n").unwrap();
    std::fs::write(d.path().join("obs.csv"), "t,value\n1,0.5\n2,1.5\n").unwrap();
    ok(d.path(), &["predict", "--input", "obs.csv", "--fit", "fit.txt", "--horizon-steps", "2", "--seed", "1", "--out", "p"]);
    // Brownian motion: the conditional mean is the last value
    for m in column(d.path().join("p/prediction.csv"), "mean") {
        assert!((m - 1.5).abs() < 1e-9);
    }
    std::fs::write(d.path().join("bad.txt"), "family = c1\n").unwrap();
    assert_eq!(code(&wsfbm(d.path(), &["predict", "--input", "obs.csv", "--fit", "bad.txt", "--seed", "1"])), 2);
}

#[test]
fn bench_tables() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["bench", "--sizes", "30", "--method", "4", "--repeats", "1", "--out", "one"]);
    let (h, rows) = csv(d.path().join("one/bench_timing.csv"));
    assert_eq!(h, ["method", "n", "seconds"]);
    assert_eq!(rows.len(), 1);
    assert_eq!(read(d.path().join("one/bench_accuracy.csv")), "pair_a,pair_b,max_coord_diff\n");
    assert!(key_values(d.path().join("one/bench_timing.csv.meta"))["environment"].contains("threads=1"));

    ok(d.path(), &["bench", "--a", "0.21", "--b", "1.28", "--sizes", "100", "--repeats", "1", "--out", "all"]);
    let diffs = column(d.path().join("all/bench_accuracy.csv"), "max_coord_diff");
    assert_eq!(diffs.len(), 6);
    assert!(diffs.iter().all(|&x| x <= 1e-4), "{diffs:?}");
    assert_eq!(csv(d.path().join("all/bench_speedup.csv")).1.len(), 6);

    assert_eq!(code(&wsfbm(d.path(), &["bench", "--methods", "1,7"])), 2);
    assert_eq!(code(&wsfbm(d.path(), &["bench", "--sizes", "0"])), 2);
}

#[test]
fn kernel2d_shell_zero_region_and_row_count() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["kernel2d", "--kernel", "double-exp", "--p", "2,2", "--xmin", "-2", "--xmax", "2", "--ymin", "-2", "--ymax", "2", "--nx", "9", "--ny", "7", "--out", "k"]);
    let (h, rows) = csv(d.path().join("k/kernel2d.csv"));
    assert_eq!(h, ["x", "y", "value"]);
    assert_eq!(rows.len(), 63);
    let mut zeros = 0;
    for r in &rows {
        let (x, y, v): (f64, f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap());
        if x.hypot(y) <= 1.0 {
            assert_eq!(v, 0.0, "({x}, {y})");
            zeros += 1;
        } else {
            assert!(v > 0.0);
        }
    }
    assert!(zeros > 0);
}

#[test]
fn kernel2d_double_exp_at_reference_point() {
    let d = TempDir::new().unwrap();
    let at_p = ["--xmin", "2", "--xmax", "2", "--ymin", "2", "--ymax", "2", "--nx", "1", "--ny", "1"];
    let mut a = vec!["kernel2d", "--kernel", "double-exp", "--sigma", "1.5", "--beta", "0.7", "--out", "k"];
    a.extend(at_p);
    ok(d.path(), &a);
    let mut c = vec!["kernel2d", "--kernel", "c-af", "--out", "c"];
    c.extend(at_p);
    ok(d.path(), &c);
    let k = column(d.path().join("k/kernel2d.csv"), "value")[0];
    let caf = column(d.path().join("c/kernel2d.csv"), "value")[0];
    assert!(caf > 0.0);
    assert!((k - 2.25 * caf).abs() <= 1e-12 * k);
}

#[test]
fn kernel2d_errors() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&wsfbm(d.path(), &["kernel2d", "--radius", "-1"])), 2);
    assert_eq!(code(&wsfbm(d.path(), &["kernel2d", "--p", "1,2,3"])), 2);
    assert_eq!(code(&wsfbm(d.path(), &["kernel2d", "--kernel", "matern", "--rho", "0"])), 2);
    assert_eq!(code(&wsfbm(d.path(), &["kernel2d", "--kernel", "spline"])), 2);
    assert_eq!(code(&wsfbm(d.path(), &["kernel2d", "--nx", "0"])), 2);
}

#[test]
fn unreachable_tolerance_is_a_numerical_failure() {
    let d = TempDir::new().unwrap();
    let o = wsfbm(d.path(), &["kernel2d", "--kernel", "k-haf", "--hurst", "0.3", "--nx", "2", "--ny", "2", "--abs-tol", "1e-300", "--rel-tol", "1e-300"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_precedence_flag_over_file_over_default() {
    let d = TempDir::new().unwrap();
    std::fs::write(
        d.path().join("run.cfg"),
        "# shared settings\nn = 5\npaths = 2\nseed = 3\nabs_tol = 1e-9 # underscores accepted\nout = from_file\n",
    )
    .unwrap();
    ok(d.path(), &["simulate", "--config", "run.cfg", "--n", "3"]);
    let meta = key_values(d.path().join("from_file/paths.csv.meta"));
    // flag
    assert_eq!(meta["n"], "3");
    // config file
    assert_eq!(meta["paths"], "2");
    assert_eq!(meta["seed"], "3");
    assert_eq!(meta["abs-tol"].parse::<f64>().unwrap(), 1e-9);
    // default
    assert_eq!(meta["horizon"], "1");
    assert_eq!(meta["b"], "0");
    assert_eq!(csv(d.path().join("from_file/paths.csv")).1.len(), 2 * 4);
}

#[test]
fn config_errors_exit_2() {
    let d = TempDir::new().unwrap();
    std::fs::write(d.path().join("bad.cfg"), "n: 5\n").unwrap();
    assert_eq!(code(&wsfbm(d.path(), &["simulate", "--config", "bad.cfg", "--seed", "1"])), 2);
    std::fs::write(d.path().join("typed.cfg"), "n = lots\n").unwrap();
    assert_eq!(code(&wsfbm(d.path(), &["simulate", "--config", "typed.cfg", "--seed", "1"])), 2);
    assert_eq!(code(&wsfbm(d.path(), &["simulate", "--config", "absent.cfg", "--seed", "1"])), 2);
    assert_eq!(code(&wsfbm(d.path(), &["simulate", "--n", "many", "--seed", "1"])), 2);
}

#[test]
fn thread_count_from_environment() {
    let d = TempDir::new().unwrap();
    let run = |threads: &str, out: &str| {
        Command::new(env!("CARGO_BIN_EXE_wsfbm"))
            .current_dir(d.path())
            .env("WSFBM_THREADS", threads)
            .args(["simulate", "--n", "20", "--paths", "4", "--seed", "5", "--out", out])
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("1", "one")), 0);
    assert_eq!(code(&run("3", "three")), 0);
    assert_eq!(read(d.path().join("one/paths.csv")), read(d.path().join("three/paths.csv")));
    assert_eq!(code(&run("several", "bad")), 2);
}
