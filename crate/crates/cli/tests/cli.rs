use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lbg::cf::two_population_ratings;
use tempfile::TempDir;

fn lbg(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lbg"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr:\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// A generated two-topic corpus in `dir/syn`.
fn generated(dir: &Path) -> PathBuf {
    ok(&lbg(
        &["gen", "--k", "2", "--docs", "200", "--words", "100", "--seed", "1", "--out-dir", "syn"],
        dir,
    ));
    dir.join("syn")
}

const DOCWORD: [&str; 6] = ["--input", "syn/docword.txt", "--format", "docword", "--vocab", "syn/vocab.txt"];

fn fit_args<'a>(out: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut args = vec!["fit"];
    args.extend(DOCWORD);
    args.extend(["--topics", "2", "--seed", "1", "--out", out]);
    args.extend(extra);
    args
}

#[test]
fn generated_corpus_is_recovered() {
    let tmp = TempDir::new().unwrap();
    let syn = generated(tmp.path());
    for name in ["docword.txt", "vocab.txt", "topics.txt", "keywords.txt", "params.json", "manifest.json"] {
        assert!(syn.join(name).exists(), "{name} missing");
    }
    ok(&lbg(&fit_args("model.json", &[]), tmp.path()));
    let mut args = vec!["cluster-eval", "--model", "model.json", "--labels", "syn/topics.txt"];
    args.extend(DOCWORD);
    let report = ok(&lbg(&args, tmp.path()));
    let acc: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("accuracy: "))
        .expect("accuracy line")
        .trim()
        .parse()
        .unwrap();
    assert!(acc >= 0.95, "{report}");
}

#[test]
fn fit_writes_model_trace_codebook_and_manifest() {
    let tmp = TempDir::new().unwrap();
    generated(tmp.path());
    ok(&lbg(&fit_args("model.json", &[]), tmp.path()));
    let dir = tmp.path();
    let trace = fs::read_to_string(dir.join("model.trace.csv")).unwrap();
    assert!(trace.starts_with("iter,loglik,residual,q_1,q_2\n"));
    let codebook = fs::read_to_string(dir.join("model.codebook.tsv")).unwrap();
    assert_eq!(codebook.lines().count(), 100);

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("model.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "fit");
    assert_eq!(manifest["seed"], 1);
    assert_eq!(manifest["exit_code"], 0);
    assert_eq!(manifest["flags"]["topics"], 2);
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 2);
    assert!(manifest["iterations"].as_u64().unwrap() >= 1);

    let model: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("model.json")).unwrap()).unwrap();
    assert_eq!(model["model_type"], "lbg");
    assert_eq!(model["weighting"]["scheme"], "tfidf");
}

#[test]
fn repeated_fits_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    generated(tmp.path());
    ok(&lbg(&fit_args("a.json", &[]), tmp.path()));
    ok(&lbg(&fit_args("b.json", &[]), tmp.path()));
    let a = fs::read(tmp.path().join("a.json")).unwrap();
    let b = fs::read(tmp.path().join("b.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn classify_writes_one_row_per_document() {
    let tmp = TempDir::new().unwrap();
    generated(tmp.path());
    ok(&lbg(&fit_args("model.json", &[]), tmp.path()));
    let mut args = vec!["classify", "--model", "model.json"];
    args.extend(DOCWORD);
    let csv = ok(&lbg(&args, tmp.path()));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("doc_id,map_topic,log_prob,mu_1,mu_2"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 200);
    let first: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(first[0], "1");
    assert!(["1", "2"].contains(&first[1]));
    let mu: f64 = first[3].parse::<f64>().unwrap() + first[4].parse::<f64>().unwrap();
    assert!((mu - 1.0).abs() < 1e-9);
}

#[test]
fn mixture_of_unigrams_fits_and_classifies() {
    let tmp = TempDir::new().unwrap();
    generated(tmp.path());
    ok(&lbg(&fit_args("mou.json", &["--model", "mou"]), tmp.path()));
    let text = fs::read_to_string(tmp.path().join("mou.json")).unwrap();
    assert!(text.contains("\"model_type\": \"mou\""));
    let mut args = vec!["cluster-eval", "--model", "mou.json", "--labels", "syn/topics.txt"];
    args.extend(DOCWORD);
    assert!(ok(&lbg(&args, tmp.path())).contains("accuracy: "));
}

#[test]
fn larger_delta_keeps_a_subset_of_features() {
    let tmp = TempDir::new().unwrap();
    generated(tmp.path());
    ok(&lbg(&fit_args("model.json", &[]), tmp.path()));
    let ids = |delta: &str| -> Vec<String> {
        let out = ok(&lbg(&["features", "--model", "model.json", "--delta", delta], tmp.path()));
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("word_id\tword\tmax_p"));
        lines.map(|l| l.split('\t').next().unwrap().to_string()).collect()
    };
    let loose = ids("0.3");
    let strict = ids("0.5");
    assert!(strict.iter().all(|i| loose.contains(i)));
}

#[test]
fn reduced_docword_keeps_only_selected_words() {
    let tmp = TempDir::new().unwrap();
    generated(tmp.path());
    ok(&lbg(&fit_args("model.json", &[]), tmp.path()));
    let mut args = vec!["features", "--model", "model.json", "--delta", "0.5", "--out", "f.tsv"];
    args.extend(DOCWORD);
    args.extend(["--docword-out", "reduced.txt"]);
    ok(&lbg(&args, tmp.path()));
    let kept = fs::read_to_string(tmp.path().join("f.tsv")).unwrap().lines().count() - 1;
    let reduced = fs::read_to_string(tmp.path().join("reduced.txt")).unwrap();
    let header: Vec<usize> = reduced.lines().take(2).map(|l| l.parse().unwrap()).collect();
    assert_eq!(header, vec![200, kept]);
    let vocab = fs::read_to_string(tmp.path().join("reduced.vocab.txt")).unwrap();
    assert_eq!(vocab.lines().count(), kept);
}

#[test]
fn missing_input_exits_with_one() {
    let tmp = TempDir::new().unwrap();
    let out = lbg(
        &["fit", "--input", "absent.txt", "--topics", "2", "--seed", "1", "--out", "m.json"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.txt"));
    assert!(!tmp.path().join("m.json").exists());
}

#[test]
fn iteration_limit_exits_with_two_and_keeps_the_model() {
    let tmp = TempDir::new().unwrap();
    generated(tmp.path());
    let out = lbg(&fit_args("m.json", &["--max-iters", "2", "--epsilon", "1e-12"]), tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(tmp.path().join("m.json").exists());
    let manifest = fs::read_to_string(tmp.path().join("m.manifest.json")).unwrap();
    assert!(manifest.contains("\"exit_code\": 2"));
}

#[test]
fn codebook_mismatch_is_rejected() {
    let tmp = TempDir::new().unwrap();
    generated(tmp.path());
    ok(&lbg(&fit_args("model.json", &[]), tmp.path()));
    fs::write(tmp.path().join("other.tsv"), "alpha\t3\nbeta\t2\n").unwrap();
    let mut args = vec!["classify", "--model", "model.json", "--codebook", "other.tsv"];
    args.extend(DOCWORD);
    let out = lbg(&args, tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("code-book"));
}

#[test]
fn text_corpus_round_trip() {
    let tmp = TempDir::new().unwrap();
    let mut corpus = String::new();
    let mut labels = String::new();
    for i in 0..15 {
        corpus += &format!("goal striker referee league goal match penalty {i}\n");
        corpus += &format!("compiler borrow lifetime crate compiler trait macro {i}\n");
        labels += "1\n2\n";
    }
    fs::write(tmp.path().join("c.txt"), corpus).unwrap();
    fs::write(tmp.path().join("c.labels"), labels).unwrap();
    ok(&lbg(
        &["fit", "--input", "c.txt", "--format", "text", "--topics", "2", "--seed", "7", "--out", "t.json"],
        tmp.path(),
    ));
    let codebook = fs::read_to_string(tmp.path().join("t.codebook.tsv")).unwrap();
    assert!(codebook.contains("compiler"));
    assert!(!codebook.lines().any(|l| l.starts_with("the\t")));
    let report = ok(&lbg(
        &["cluster-eval", "--model", "t.json", "--input", "c.txt", "--labels", "c.labels"],
        tmp.path(),
    ));
    assert!(report.contains("accuracy: 1.0000"), "{report}");
}

fn write_udata(path: &Path, users: usize, items: usize, seed: u64) {
    let (ratings, _) = two_population_ratings(users, items, 0.5, 0.3, seed).unwrap();
    let mut text = String::new();
    for u in 0..ratings.users() {
        for &(i, r) in ratings.user(u) {
            text += &format!("{}\t{}\t{}\t0\n", u + 1, i + 1, r);
        }
    }
    fs::write(path, text).unwrap();
}

#[test]
fn rating_commands_fit_predict_and_evaluate() {
    let tmp = TempDir::new().unwrap();
    write_udata(&tmp.path().join("u.data"), 120, 20, 2);
    ok(&lbg(
        &["cf", "fit", "--train", "u.data", "--topics", "2", "--seed", "3", "--out", "cf.json"],
        tmp.path(),
    ));
    fs::write(tmp.path().join("mine.txt"), "1 2\n2 2\n3 1\n").unwrap();
    let pred = ok(&lbg(
        &["cf", "predict", "--model", "cf.json", "--ratings", "mine.txt", "--item", "15"],
        tmp.path(),
    ));
    let mut lines = pred.lines();
    assert_eq!(lines.next(), Some("item,prediction,p_1,p_2,p_3,p_4,p_5"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "15");
    let total: f64 = row[2..].iter().map(|v| v.parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-9);

    let table = ok(&lbg(
        &["cf", "eval", "--train", "u.data", "--holdout-seed", "3", "--topics", "2", "--test-fraction", "0.2"],
        tmp.path(),
    ));
    let names: Vec<&str> = table.lines().filter_map(|l| l.split_whitespace().next()).collect();
    assert_eq!(names, vec!["Method", "Baseline", "LBG"]);
}
