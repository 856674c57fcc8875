use std::path::Path;
use std::process::Command;

fn paircorr(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_paircorr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &std::process::Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn weight_curves_header() {
    let s = stdout(&paircorr(&["weights", "curves", "--points", "5"]));
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("u,w10,w11,w12,w13"));
    let mid: Vec<f64> = lines.nth(2).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(mid, vec![0.0, 1.0, 1.0, 1.0, 1.0]);
}

#[test]
fn paircorr_columns_on_synthetic_zeros() {
    let s = stdout(&paircorr(&[
        "paircorr",
        "--zeros",
        "synthetic:unfolded-model:3",
        "--T",
        "2000",
        "--alpha-grid",
        "0.2:0.6:0.2",
    ]));
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "alpha,x,value,prediction,rel_err,tail_bound,imag_residual");
    assert_eq!(lines.len(), 4);
}

#[test]
fn lemma_verb_reports_ratio() {
    let s = stdout(&paircorr(&["arith", "lemma", "--which", "wagyu", "--k", "1", "--x", "1e4"]));
    let row: Vec<&str> = s.lines().nth(1).unwrap().split(',').collect();
    let ratio: f64 = row[4].parse().unwrap();
    assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
}

#[test]
fn ordsums_build_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let ms = dir.path().join("z2.txt");
    let ms_s = ms.to_str().unwrap();
    stdout(&paircorr(&[
        "ordsums", "build", "--zeros", "synthetic:poisson:1", "--T", "300", "--mu", "2", "--out", ms_s,
    ]));
    let text = std::fs::read_to_string(&ms).unwrap();
    assert!(text.starts_with("# mu: 2"));
    let d = stdout(&paircorr(&["ordsums", "delta", "--multiset", ms_s]));
    assert!(d.starts_with("mu,T,delta,"));
}

#[test]
fn run_rejects_empty_t_list_naming_the_stanza() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "zeros = \"synthetic:poisson:1\"\n[[stanza]]\nkind = \"gonek\"\nname = \"sums\"\nT = []\nns = [2]\n",
    )
    .unwrap();
    let out = paircorr(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sums") && err.contains("T list is empty"), "{err}");
}

#[test]
fn run_writes_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(
        &cfg,
        r#"
zeros = "synthetic:unfolded-model:5"
output_dir = "out"

[[stanza]]
kind = "weight-curves"
name = "fig"

[[stanza]]
kind = "gonek"
name = "sums"
T = [3000.0]
ns = [2, 3]
"#,
    )
    .unwrap();
    stdout(&paircorr(&["run", "--config", cfg.to_str().unwrap()]));
    let out = dir.path().join("out");
    for f in ["fig.csv", "fig_reports.csv", "sums.csv", "sums_reports.csv", "summary.json"] {
        assert!(Path::new(&out.join(f)).exists(), "{f} missing");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let keys: Vec<&String> = summary.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["config_sha256", "zeros", "totals", "stanzas"]);
    assert_eq!(summary["totals"]["reports"], 2);
}
