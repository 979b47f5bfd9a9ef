use std::path::PathBuf;
use std::process::{Command, Output};

fn hklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hklab")).args(args).output().expect("spawn hklab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hklab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn provenance_line_leads_the_csv() {
    let o = hklab(&["hardy", "--N", "1000", "--seq", "single-spike"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let first = out.lines().next().unwrap();
    assert!(first.starts_with("# subcommand=hardy "), "{first}");
    for field in ["k=1", "p=2", "f=log", "N=1000", "seed=24301", "args=\""] {
        assert!(first.contains(field), "missing {field} in {first}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["blowup", "--k", "1", "--anchor-n", "10", "--a-min", "1e-3", "--a-max", "1", "--points", "6", "--N", "1024"];
    let a = hklab(&args);
    let b = hklab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let threaded = [&args[..], &["--threads", "3"]].concat();
    let c = hklab(&threaded);
    assert_eq!(data_rows(&stdout(&a)), data_rows(&stdout(&c)));
}

#[test]
fn blowup_grows_polynomially() {
    let o = hklab(&["blowup", "--k", "1", "--anchor-n", "10", "--a-min", "1e-3", "--a-max", "1", "--points", "8", "--N", "4096"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 8);
    // Norms decrease as a grows.
    assert!(rows.windows(2).all(|w| w[1][1] <= w[0][1] * (1.0 + 1e-9)));
}

#[test]
fn out_file_receives_csv_and_stdout_the_summary() {
    let path = scratch("minimality.csv");
    let o = hklab(&["minimality", "--N", "64", "--n-min", "1", "--n-max", "16", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("# subcommand=minimality"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 16);
    for r in &rows {
        assert!((r[1] - 1.0 / r[0].sqrt()).abs() < 1e-12);
    }
    let summary = stdout(&o);
    assert!(summary.contains("PASS"));
    assert!(!summary.contains("n,distance"));
}

#[test]
fn hardy_single_spike_value() {
    let o = hklab(&["hardy", "--N", "100000", "--seq", "single-spike"]);
    let rows = data_rows(&stdout(&o));
    let ratio = rows.last().unwrap()[2];
    assert!((ratio - 1.64492).abs() < 1e-5, "{ratio}");
}

#[test]
fn exit_codes() {
    assert_eq!(hklab(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(hklab(&["hardy", "--N", "abc"]).status.code(), Some(1));
    assert_eq!(hklab(&["--help"]).status.code(), Some(0));
    let spectral = hklab(&["norm-resolvent", "--N", "16", "--lambda", "0+0i"]);
    assert_eq!(spectral.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&spectral.stderr).contains("spectrum"));
    // sqrt(n) is outside every S_k class.
    let sk = hklab(&["sk-check", "--f", "sqrt", "--k", "1", "--N", "100000"]);
    assert_eq!(sk.status.code(), Some(2));
    let ok = hklab(&["sk-check", "--f", "log", "--k", "2", "--N", "100000"]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn tabulated_symbol_and_block_file() {
    let table = scratch("symbol.txt");
    let values: String = (1..=64).map(|n| format!("{}\n", (n as f64).ln())).collect();
    std::fs::write(&table, values).unwrap();
    let tab = hklab(&["norm-group", "--f", "table", "--table", table.to_str().unwrap(), "--N", "64", "--t-grid", "2"]);
    let log = hklab(&["norm-group", "--N", "64", "--t-grid", "2"]);
    assert_eq!(tab.status.code(), Some(0));
    let (a, b) = (data_rows(&stdout(&tab)), data_rows(&stdout(&log)));
    assert!((a[0][1] - b[0][1]).abs() < 1e-12);

    let blocks = scratch("blocks.txt");
    std::fs::write(&blocks, "1,2\n3\n4,5,6\n").unwrap();
    let grouping = format!("file:{}", blocks.display());
    let o = hklab(&["blocks", "--N", "6", "--blocks", &grouping]);
    assert_eq!(o.status.code(), Some(0));
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| *r.last().unwrap() >= 1.0 - 1e-12));

    std::fs::write(&blocks, "1,2\n2,3\n").unwrap();
    assert_eq!(hklab(&["blocks", "--N", "3", "--blocks", &grouping]).status.code(), Some(1));
}

#[test]
fn partial_sum_prefix_law() {
    let o = hklab(&["partial-sums", "--N", "32", "--blocks", "uniform:1", "--prefixes", "1,4,9,16", "--method", "dense-svd"]);
    assert_eq!(o.status.code(), Some(0));
    for r in data_rows(&stdout(&o)) {
        assert!((r[1] - (r[0] + 1.0).sqrt()).abs() < 1e-10);
    }
}

#[test]
fn laplace_reconstructs_resolvent() {
    let o = hklab(&["laplace", "--N", "8", "--lambda", "1+0i", "--T", "40", "--steps", "20000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn spectrum_map_and_nongeneration() {
    let o = hklab(&["spectrum-map", "--N", "48", "--t", "1.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = hklab(&["nongen-witness", "--N-grid", "64,256,1024", "--t", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&stdout(&o));
    assert!(rows.windows(2).all(|w| w[1][1] > w[0][1]));
}

#[test]
fn integral_scan_runs() {
    let o = hklab(&["integral-scan", "--N", "64", "--a-grid", "0.5,1,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(data_rows(&stdout(&o)).len(), 3);
}
