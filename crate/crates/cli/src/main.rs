mod data;
mod manifest;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lbg::applications::{cluster_accuracy, max_keyword_probability, select_features};
use lbg::cf::{
    baseline_evaluate, baseline_mean_predict, cf_evaluate, cf_fit, cf_predict, load_udata, metrics_table, CfConfig,
};
use lbg::corpus::{load_labels, write_docword, Codebook, RawCorpus};
use lbg::generator::{sample_corpus, BlockTemplate};
use lbg::inference::{infer, results_to_csv, InferenceResult};
use lbg::lbg::{fit, FitConfig, ModelParams};
use lbg::mou::{mou_classify, mou_fit, MouConfig};
use lbg::numeric::log_sum_exp;
use lbg::persist::{LbgFile, MouFile, SavedModel, Weighting};
use serde::Serialize;

use data::{stopword_set, training_codebook, weigh, InputArgs, WeightingArg};
use manifest::{sibling, RunManifest};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lbg(#[from] lbg::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = Result<T, CliError>;

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Done,
    NotConverged,
}

#[derive(Parser)]
#[command(name = "lbg", version, about = "Latent Bernoulli-Gauss topic models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a topic model to a corpus.
    Fit(FitArgs),
    /// Score documents under a fitted model.
    Classify(ClassifyArgs),
    /// Keep the words that are likely keywords of some topic.
    Features(FeaturesArgs),
    /// Accuracy of MAP topics against reference labels.
    ClusterEval(ClusterEvalArgs),
    /// Rating prediction.
    #[command(subcommand)]
    Cf(CfCommand),
    /// Sample a synthetic corpus with known topics.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModelKind {
    Lbg,
    Mou,
}

#[derive(Args, Serialize)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Number of topics.
    #[arg(long)]
    topics: usize,
    #[arg(long)]
    seed: u64,
    /// Model file (JSON).
    #[arg(long)]
    out: PathBuf,
    /// Per-iteration trace (CSV); defaults to `<out stem>.trace.csv`.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Code-book file; defaults to `<out stem>.codebook.tsv`.
    #[arg(long)]
    codebook: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModelKind::Lbg)]
    model: ModelKind,
    #[arg(long, value_enum, default_value_t = WeightingArg::Tfidf)]
    weighting: WeightingArg,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    variance_floor: f64,
    /// Minimum document frequency for text input.
    #[arg(long, default_value_t = 2)]
    min_df: u32,
    /// Stop-word list, one per line; the built-in English list otherwise.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Do not remove any stop-words.
    #[arg(long)]
    keep_stopwords: bool,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ModelInput {
    /// Model file written by `fit`.
    #[arg(long)]
    model: PathBuf,
    /// Code-book file; defaults to `<model stem>.codebook.tsv`.
    #[arg(long)]
    codebook: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ClassifyArgs {
    #[command(flatten)]
    model: ModelInput,
    #[command(flatten)]
    input: InputArgs,
    /// CSV output; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct FeaturesArgs {
    #[command(flatten)]
    model: ModelInput,
    #[arg(long, default_value_t = lbg::applications::DEFAULT_DELTA)]
    delta: f64,
    /// Feature list (TSV); standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Corpus to export restricted to the kept words.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = data::Format::Text)]
    format: data::Format,
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Reduced `docword` file; requires `--input`.
    #[arg(long)]
    docword_out: Option<PathBuf>,
    /// Vocabulary of the reduced `docword` file.
    #[arg(long)]
    vocab_out: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ClusterEvalArgs {
    #[command(flatten)]
    model: ModelInput,
    #[command(flatten)]
    input: InputArgs,
    /// Reference labels, one 1-based integer per line.
    #[arg(long)]
    labels: PathBuf,
    /// Report file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CfCommand {
    /// Fit a rating model to MovieLens-format ratings.
    Fit(CfFitArgs),
    /// Predict one item for one user.
    Predict(CfPredictArgs),
    /// Forced-prediction evaluation on a user split.
    Eval(CfEvalArgs),
}

#[derive(Args, Serialize)]
struct CfModelArgs {
    #[arg(long)]
    topics: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    r_max: u8,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    variance_floor: f64,
}

impl CfModelArgs {
    fn config(&self) -> CfConfig {
        let mut c = CfConfig::new(self.topics, self.seed);
        c.max_iters = self.max_iters;
        c.variance_floor = self.variance_floor;
        c
    }
}

#[derive(Args, Serialize)]
struct CfFitArgs {
    /// Ratings file (`userID<TAB>itemID<TAB>rating<TAB>timestamp`).
    #[arg(long)]
    train: PathBuf,
    #[command(flatten)]
    model: CfModelArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CfPredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// The user's known ratings, one `itemID rating` pair per line.
    #[arg(long)]
    ratings: PathBuf,
    /// 1-based item to predict.
    #[arg(long)]
    item: usize,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CfEvalArgs {
    #[arg(long)]
    train: PathBuf,
    /// Seed of the user split and of the suppressed ratings.
    #[arg(long)]
    holdout_seed: u64,
    /// Fraction of users held out.
    #[arg(long, default_value_t = 0.1)]
    test_fraction: f64,
    #[command(flatten)]
    model: CfModelArgs,
    /// Report file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct GenArgs {
    /// Number of topics.
    #[arg(long)]
    k: usize,
    /// Number of documents.
    #[arg(long)]
    docs: usize,
    /// Vocabulary size.
    #[arg(long)]
    words: usize,
    /// Words per document.
    #[arg(long, default_value_t = 150)]
    doc_len: usize,
    /// Comma-separated topic weights; uniform if absent.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Fraction of the vocabulary that is topic-unspecific.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NotConverged) => {
            eprintln!("warning: stopped at the iteration limit without converging");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Fit(a) => cmd_fit(&a),
        Command::Classify(a) => cmd_classify(&a),
        Command::Features(a) => cmd_features(&a),
        Command::ClusterEval(a) => cmd_cluster_eval(&a),
        Command::Cf(CfCommand::Fit(a)) => cmd_cf_fit(&a),
        Command::Cf(CfCommand::Predict(a)) => cmd_cf_predict(&a),
        Command::Cf(CfCommand::Eval(a)) => cmd_cf_eval(&a),
        Command::Gen(a) => cmd_gen(&a),
    }
}

fn exit_code(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::Done => 0,
        Outcome::NotConverged => 2,
    }
}

fn hash_inputs(manifest: &mut RunManifest, paths: &[&Path]) -> CliResult<()> {
    for p in paths {
        manifest.input(p).map_err(|source| CliError::File {
            path: p.to_path_buf(),
            source,
        })?;
    }
    Ok(())
}

fn write_file(manifest: &mut RunManifest, path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })?;
    manifest.output(path);
    Ok(())
}

/// Writes to `path`, or standard output if `None`.
fn emit(manifest: &mut RunManifest, path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) => write_file(manifest, p, contents),
        None => {
            io::stdout().write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_fit(a: &FitArgs) -> CliResult<Outcome> {
    let mut manifest = RunManifest::start("fit", a, Some(a.seed));
    let mut inputs = a.input.paths();
    inputs.extend(a.stopwords.as_deref());
    hash_inputs(&mut manifest, &inputs)?;

    let (corpus, given) = a.input.load()?;
    let stop = stopword_set(a.stopwords.as_deref(), a.keep_stopwords)?;
    let codebook = training_codebook(&corpus, given, &stop, a.min_df)?;
    log::info!("{} documents, {} words", corpus.len(), codebook.len());
    let codebook_path = a.codebook.clone().unwrap_or_else(|| sibling(&a.out, "codebook.tsv"));
    let trace_path = a.trace.clone().unwrap_or_else(|| sibling(&a.out, "trace.csv"));

    let (model, trace, iterations, outcome) = match a.model {
        ModelKind::Lbg => {
            let weighting = match a.weighting {
                WeightingArg::Counts => Weighting::Counts,
                WeightingArg::Tfidf => Weighting::Tfidf {
                    num_docs: corpus.len(),
                },
            };
            let docs = weigh(&corpus, &codebook, weighting)?;
            let config = FitConfig {
                max_iters: a.max_iters,
                epsilon: a.epsilon,
                variance_floor: a.variance_floor,
                ..FitConfig::new(a.topics).with_seed(a.seed)
            };
            let result = fit(&docs, &config)?;
            let outcome = if result.trace.stop.converged() {
                Outcome::Done
            } else {
                Outcome::NotConverged
            };
            let model = SavedModel::Lbg(LbgFile {
                params: result.params,
                codebook_sha256: Some(codebook.sha256()),
                weighting,
            });
            (model, result.trace.to_csv(), result.trace.iterations(), outcome)
        }
        ModelKind::Mou => {
            if a.weighting != WeightingArg::Counts {
                log::info!("the mixture-of-unigrams baseline always uses raw counts");
            }
            let docs = corpus.count_matrix(&codebook)?;
            let config = MouConfig {
                max_iters: a.max_iters,
                ..MouConfig::new(a.topics, a.seed)
            };
            let result = mou_fit(&docs, &config)?;
            let mut trace = String::from("iter,loglik,objective\n");
            for (t, (ll, obj)) in result.loglik.iter().zip(&result.objective).enumerate() {
                let _ = writeln!(trace, "{},{ll},{obj}", t + 1);
            }
            let outcome = if result.converged {
                Outcome::Done
            } else {
                Outcome::NotConverged
            };
            let iterations = result.loglik.len();
            let model = SavedModel::Mou(MouFile {
                model: result.model,
                codebook_sha256: Some(codebook.sha256()),
            });
            (model, trace, iterations, outcome)
        }
    };
    write_file(&mut manifest, &a.out, &model.to_json()?)?;
    write_file(&mut manifest, &trace_path, &trace)?;
    write_file(&mut manifest, &codebook_path, &codebook.to_tsv())?;
    manifest.iterations = Some(iterations);
    manifest.finish(a.manifest.as_deref(), exit_code(outcome))?;
    Ok(outcome)
}

struct LoadedModel {
    model: SavedModel,
    codebook: Codebook,
}

impl ModelInput {
    fn load(&self, manifest: &mut RunManifest) -> CliResult<LoadedModel> {
        let codebook_path = self.codebook.clone().unwrap_or_else(|| sibling(&self.model, "codebook.tsv"));
        hash_inputs(manifest, &[&self.model, &codebook_path])?;
        let model = SavedModel::load(&self.model)?;
        let codebook = Codebook::load(&codebook_path)?;
        let expected = match &model {
            SavedModel::Lbg(f) => f.codebook_sha256.as_deref(),
            SavedModel::Mou(f) => f.codebook_sha256.as_deref(),
            SavedModel::Cf(_) => {
                return Err(CliError::Usage("expected a topic model, found a rating model".into()));
            }
        };
        if let Some(expected) = expected {
            if expected != codebook.sha256() {
                return Err(CliError::Usage(format!(
                    "code-book {} does not match the one the model was fitted with",
                    codebook_path.display()
                )));
            }
        }
        Ok(LoadedModel { model, codebook })
    }
}

impl LoadedModel {
    fn lbg(&self) -> Option<(&ModelParams, Weighting)> {
        match &self.model {
            SavedModel::Lbg(f) => Some((&f.params, f.weighting)),
            _ => None,
        }
    }

    /// Posterior, log-probability and MAP topic for every document.
    fn score(&self, corpus: &RawCorpus) -> CliResult<Vec<InferenceResult>> {
        match &self.model {
            SavedModel::Lbg(f) => {
                let docs = weigh(corpus, &self.codebook, f.weighting)?;
                Ok(docs.rows().map(|d| infer(d, &f.params)).collect::<lbg::Result<_>>()?)
            }
            SavedModel::Mou(f) => {
                let docs = corpus.count_matrix(&self.codebook)?;
                docs.rows()
                    .map(|d| {
                        let log_prob = log_sum_exp(&f.model.joint_log_weights(d)?);
                        let (map_topic, mu) = mou_classify(d, &f.model)?;
                        Ok(InferenceResult {
                            keywords: Vec::new(),
                            mu,
                            log_prob,
                            map_topic,
                        })
                    })
                    .collect()
            }
            SavedModel::Cf(_) => unreachable!("rejected on load"),
        }
    }

    fn k(&self) -> usize {
        match &self.model {
            SavedModel::Lbg(f) => f.params.k,
            SavedModel::Mou(f) => f.model.k,
            SavedModel::Cf(m) => m.k,
        }
    }
}

fn cmd_classify(a: &ClassifyArgs) -> CliResult<Outcome> {
    let mut manifest = RunManifest::start("classify", a, None);
    let loaded = a.model.load(&mut manifest)?;
    hash_inputs(&mut manifest, &a.input.paths())?;
    let (corpus, _) = a.input.load()?;
    let results = loaded.score(&corpus)?;
    emit(&mut manifest, a.out.as_deref(), &results_to_csv(&results, loaded.k()))?;
    manifest.finish(a.manifest.as_deref(), 0)?;
    Ok(Outcome::Done)
}

fn cmd_features(a: &FeaturesArgs) -> CliResult<Outcome> {
    let mut manifest = RunManifest::start("features", a, None);
    let loaded = a.model.load(&mut manifest)?;
    let (params, _) = loaded
        .lbg()
        .ok_or_else(|| CliError::Usage("feature selection needs an lbg model".into()))?;
    let features = select_features(params, a.delta);
    let max_p = max_keyword_probability(params);
    let mut list = String::from("word_id\tword\tmax_p\n");
    for &i in &features.kept {
        let _ = writeln!(list, "{}\t{}\t{}", i + 1, loaded.codebook.words()[i], max_p[i]);
    }
    emit(&mut manifest, a.out.as_deref(), &list)?;

    if let Some(docword_out) = &a.docword_out {
        let input = a
            .input
            .clone()
            .ok_or_else(|| CliError::Usage("--docword-out needs --input".into()))?;
        let args = InputArgs {
            input,
            format: a.format,
            vocab: a.vocab.clone(),
        };
        hash_inputs(&mut manifest, &args.paths())?;
        let (corpus, _) = args.load()?;
        let counts = corpus.count_matrix(&loaded.codebook)?;
        let mut buf = Vec::new();
        write_docword(&mut buf, &counts, Some(&features.kept))?;
        fs::write(docword_out, buf)?;
        manifest.output(docword_out);
        let vocab_out = a.vocab_out.clone().unwrap_or_else(|| sibling(docword_out, "vocab.txt"));
        let mut vocab = String::new();
        for &i in &features.kept {
            let _ = writeln!(vocab, "{}", loaded.codebook.words()[i]);
        }
        write_file(&mut manifest, &vocab_out, &vocab)?;
    }
    eprintln!("kept {} of {} words at delta {}", features.kept.len(), params.n, a.delta);
    manifest.finish(a.manifest.as_deref(), 0)?;
    Ok(Outcome::Done)
}

fn cmd_cluster_eval(a: &ClusterEvalArgs) -> CliResult<Outcome> {
    let mut manifest = RunManifest::start("cluster-eval", a, None);
    let loaded = a.model.load(&mut manifest)?;
    hash_inputs(&mut manifest, &a.input.paths())?;
    hash_inputs(&mut manifest, &[&a.labels])?;
    let (corpus, _) = a.input.load()?;
    let labels = load_labels(&a.labels)?;
    let pred: Vec<usize> = loaded.score(&corpus)?.iter().map(|r| r.map_topic).collect();
    let k = loaded.k().max(labels.iter().max().map_or(0, |&l| l + 1));
    let mapping = cluster_accuracy(&pred, &labels, k)?;
    emit(&mut manifest, a.out.as_deref(), &mapping.report())?;
    manifest.finish(a.manifest.as_deref(), 0)?;
    Ok(Outcome::Done)
}

fn cmd_cf_fit(a: &CfFitArgs) -> CliResult<Outcome> {
    let mut manifest = RunManifest::start("cf fit", a, Some(a.model.seed));
    hash_inputs(&mut manifest, &[&a.train])?;
    let train = load_udata(&a.train, a.model.r_max)?;
    let result = cf_fit(&train, &a.model.config())?;
    let outcome = if result.converged {
        Outcome::Done
    } else {
        Outcome::NotConverged
    };
    write_file(&mut manifest, &a.out, &SavedModel::Cf(result.model).to_json()?)?;
    manifest.iterations = Some(result.loglik.len());
    manifest.finish(a.manifest.as_deref(), exit_code(outcome))?;
    Ok(outcome)
}

fn read_user_ratings(path: &Path) -> CliResult<Vec<(usize, u8)>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let parsed = match fields.as_slice() {
            [item, rating] => item.parse::<usize>().ok().zip(rating.parse::<u8>().ok()),
            _ => None,
        };
        match parsed {
            Some((item, rating)) if item >= 1 => out.push((item - 1, rating)),
            _ => {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected `itemID rating` with a 1-based item",
                    path.display(),
                    no + 1
                )))
            }
        }
    }
    Ok(out)
}

fn cmd_cf_predict(a: &CfPredictArgs) -> CliResult<Outcome> {
    let mut manifest = RunManifest::start("cf predict", a, None);
    hash_inputs(&mut manifest, &[&a.model, &a.ratings])?;
    let model = match SavedModel::load(&a.model)? {
        SavedModel::Cf(m) => m,
        other => {
            return Err(CliError::Usage(format!(
                "expected a cf model, found {}",
                other.model_type()
            )))
        }
    };
    if a.item == 0 {
        return Err(CliError::Usage("--item is 1-based".into()));
    }
    let ratings = read_user_ratings(&a.ratings)?;
    let (t, dist) = cf_predict(&model, &ratings, a.item - 1)?;
    let mut out = String::from("item,prediction");
    for r in 1..=model.r_max {
        let _ = write!(out, ",p_{r}");
    }
    let _ = write!(out, "\n{},{t}", a.item);
    for p in dist {
        let _ = write!(out, ",{p}");
    }
    out.push('\n');
    emit(&mut manifest, None, &out)?;
    manifest.finish(a.manifest.as_deref(), 0)?;
    Ok(Outcome::Done)
}

fn cmd_cf_eval(a: &CfEvalArgs) -> CliResult<Outcome> {
    let mut manifest = RunManifest::start("cf eval", a, Some(a.model.seed));
    hash_inputs(&mut manifest, &[&a.train])?;
    let all = load_udata(&a.train, a.model.r_max)?;
    let (train, test) = all.split_users(a.test_fraction, a.holdout_seed);
    let baseline = baseline_mean_predict(&train)?;
    let base = baseline_evaluate(&baseline, &test, a.holdout_seed)?;
    let result = cf_fit(&train, &a.model.config())?;
    let lbg = cf_evaluate(&result.model, &test, a.holdout_seed)?;
    if lbg.skipped > 0 {
        eprintln!("skipped {} test users with fewer than two ratings", lbg.skipped);
    }
    let report = metrics_table(&[("Baseline", base), ("LBG", lbg)]);
    emit(&mut manifest, a.out.as_deref(), &report)?;
    manifest.iterations = Some(result.loglik.len());
    let outcome = if result.converged {
        Outcome::Done
    } else {
        Outcome::NotConverged
    };
    manifest.finish(a.manifest.as_deref(), exit_code(outcome))?;
    Ok(outcome)
}

fn cmd_gen(a: &GenArgs) -> CliResult<Outcome> {
    let mut manifest = RunManifest::start("gen", a, Some(a.seed));
    let mut template = BlockTemplate::new(a.k, a.words).with_noise(a.noise);
    if let Some(lambda) = &a.lambda {
        template = template.with_lambda(lambda.clone());
    }
    let params = template.params()?;
    let corpus = sample_corpus(&params, a.docs, a.doc_len, a.seed)?;
    fs::create_dir_all(&a.out_dir)?;

    let mut docword = Vec::new();
    corpus.write_docword(&mut docword)?;
    let path = a.out_dir.join("docword.txt");
    fs::write(&path, docword)?;
    manifest.output(&path);

    let mut vocab = Vec::new();
    corpus.write_vocabulary(&mut vocab)?;
    let path = a.out_dir.join("vocab.txt");
    fs::write(&path, vocab)?;
    manifest.output(&path);

    let mut topics = Vec::new();
    corpus.write_topics(&mut topics)?;
    let path = a.out_dir.join("topics.txt");
    fs::write(&path, topics)?;
    manifest.output(&path);

    let mut keywords = String::new();
    for row in &corpus.true_keywords {
        let line: Vec<String> = row.iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(keywords, "{}", line.join(" "));
    }
    write_file(&mut manifest, &a.out_dir.join("keywords.txt"), &keywords)?;

    let truth = SavedModel::Lbg(LbgFile {
        params,
        codebook_sha256: None,
        weighting: Weighting::Counts,
    });
    write_file(&mut manifest, &a.out_dir.join("params.json"), &truth.to_json()?)?;
    let manifest_path = a.manifest.clone().unwrap_or_else(|| a.out_dir.join("manifest.json"));
    manifest.finish(Some(&manifest_path), 0)?;
    Ok(Outcome::Done)
}
