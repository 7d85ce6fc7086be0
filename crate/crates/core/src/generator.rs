//! Synthetic corpora drawn from the generative word-die process.
//!
//! A document is produced by drawing a topic `s ~ λ`, tossing one coin per
//! word with bias `p_si` to pick keywords, building an `n`-faced die whose
//! face weights are the keyword means `c_si` (or cross means `c_i` for
//! non-keywords), and rolling it `N` times.

use std::io::{self, Write};

use rand::distributions::{Distribution, WeightedIndex};
use rand_distr::StandardNormal;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lbg::ModelParams;
use crate::matrix::DocumentMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SampledDocument {
    pub counts: Vec<u32>,
    pub topic: usize,
    /// Words whose coin came up keyword, ascending.
    pub keywords: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    /// `m x n` word counts; every row sums to the document length.
    pub counts: Vec<Vec<u32>>,
    pub true_topics: Vec<usize>,
    pub true_keywords: Vec<Vec<usize>>,
    pub params_used: ModelParams,
}

fn check_means(params: &ModelParams) -> Result<()> {
    for (a, &v) in params.c.iter().enumerate() {
        if !(v >= 0.0) {
            return Err(Error::NegativeMean {
                topic: Some(a / params.n),
                word: a % params.n,
                value: v,
            });
        }
    }
    for (i, &v) in params.cross_c.iter().enumerate() {
        if !(v >= 0.0) {
            return Err(Error::NegativeMean {
                topic: None,
                word: i,
                value: v,
            });
        }
    }
    Ok(())
}

/// Normalized face probabilities of the word-die for topic `s` given the
/// keyword flags. Face `i` gets weight `c_si / N` for keywords and `c_i / N`
/// otherwise, divided by the total.
pub fn word_die(
    params: &ModelParams,
    s: usize,
    keyword: &[bool],
    doc_len: usize,
) -> Result<Vec<f64>> {
    if keyword.len() != params.n {
        return Err(Error::DimensionMismatch {
            what: "keyword flag length",
            expected: params.n,
            found: keyword.len(),
        });
    }
    let scale = 1.0 / doc_len as f64;
    let raw: Vec<f64> = keyword
        .iter()
        .enumerate()
        .map(|(i, &kw)| {
            let c = if kw { params.c[s * params.n + i] } else { params.cross_c[i] };
            c * scale
        })
        .collect();
    let z: f64 = raw.iter().sum();
    if !(z > 0.0) {
        return Err(Error::DegenerateDie { topic: s });
    }
    Ok(raw.into_iter().map(|b| b / z).collect())
}

/// Draws one document of `doc_len` words.
pub fn sample_document<R: Rng + ?Sized>(
    params: &ModelParams,
    doc_len: usize,
    rng: &mut R,
) -> Result<SampledDocument> {
    if doc_len == 0 {
        return Err(Error::InvalidConfig("document length must be at least 1".into()));
    }
    check_means(params)?;
    let topics = WeightedIndex::new(&params.lambda)
        .map_err(|e| Error::InvalidInput(format!("mixture weights: {e}")))?;
    let s = topics.sample(rng);
    let flags: Vec<bool> = params.p_row(s).iter().map(|&p| rng.gen_bool(p.clamp(0.0, 1.0))).collect();
    let die = word_die(params, s, &flags, doc_len)?;
    let faces = WeightedIndex::new(&die).map_err(|_| Error::DegenerateDie { topic: s })?;
    let mut counts = vec![0u32; params.n];
    for _ in 0..doc_len {
        counts[faces.sample(rng)] += 1;
    }
    Ok(SampledDocument {
        counts,
        topic: s,
        keywords: flags.iter().enumerate().filter(|f| *f.1).map(|f| f.0).collect(),
    })
}

/// `m` independent documents; document `j` uses its own ChaCha stream of
/// `seed`, so the corpus is reproducible and order-independent.
pub fn sample_corpus(
    params: &ModelParams,
    m: usize,
    doc_len: usize,
    seed: u64,
) -> Result<SyntheticCorpus> {
    if m == 0 {
        return Err(Error::EmptyCorpus);
    }
    params.validate()?;
    let mut counts = Vec::with_capacity(m);
    let mut true_topics = Vec::with_capacity(m);
    let mut true_keywords = Vec::with_capacity(m);
    for j in 0..m {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        let doc = sample_document(params, doc_len, &mut rng)?;
        counts.push(doc.counts);
        true_topics.push(doc.topic);
        true_keywords.push(doc.keywords);
    }
    Ok(SyntheticCorpus {
        counts,
        true_topics,
        true_keywords,
        params_used: params.clone(),
    })
}

/// Like [`sample_corpus`], but the words in `noise` are taken off the die:
/// their counts are drawn independently from the cross-Gaussian
/// `N(c_i, σ²_i)`, rounded and clipped at zero, while the remaining
/// `doc_len` words are rolled on the die restricted to the other faces.
/// Rows therefore no longer sum to `doc_len`.
pub fn sample_corpus_with_gaussian_noise(
    params: &ModelParams,
    m: usize,
    doc_len: usize,
    noise: std::ops::Range<usize>,
    seed: u64,
) -> Result<SyntheticCorpus> {
    if noise.end > params.n || noise.len() >= params.n {
        return Err(Error::InvalidConfig("noise words must leave at least one die face".into()));
    }
    let mut die_params = params.clone();
    for i in noise.clone() {
        die_params.cross_c[i] = 0.0;
        for s in 0..params.k {
            die_params.p[s * params.n + i] = 0.0;
        }
    }
    let mut corpus = sample_corpus(&die_params, m, doc_len, seed)?;
    for (j, row) in corpus.counts.iter_mut().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream((m + j) as u64);
        for i in noise.clone() {
            let sd = params.cross_sigma2[i].sqrt();
            let z: f64 = StandardNormal.sample(&mut rng);
            row[i] = (params.cross_c[i] + sd * z).round().max(0.0) as u32;
        }
    }
    corpus.params_used = params.clone();
    Ok(corpus)
}

impl SyntheticCorpus {
    pub fn m(&self) -> usize {
        self.counts.len()
    }

    /// Counts used directly as word weights.
    pub fn count_matrix(&self) -> Result<DocumentMatrix> {
        DocumentMatrix::from_rows(
            self.params_used.n,
            self.counts
                .iter()
                .map(|r| r.iter().enumerate().map(|(i, &c)| (i, c as f64)).collect::<Vec<_>>()),
        )
    }

    /// The same smoothed tf-idf transform applied to text corpora.
    pub fn tfidf_matrix(&self) -> Result<DocumentMatrix> {
        let n = self.params_used.n;
        let mut df = vec![0u32; n];
        for row in &self.counts {
            for (i, &c) in row.iter().enumerate() {
                if c > 0 {
                    df[i] += 1;
                }
            }
        }
        let codebook = crate::corpus::Codebook::new(self.vocabulary(), df)?;
        let idf = crate::corpus::TfIdf::from_codebook(&codebook, self.m());
        DocumentMatrix::from_rows(
            n,
            self.counts.iter().map(|r| {
                let total: u32 = r.iter().sum();
                r.iter()
                    .enumerate()
                    .map(|(i, &c)| (i, c as f64 / total as f64 * idf.idf()[i]))
                    .collect::<Vec<_>>()
            }),
        )
    }

    /// Placeholder word names `w0001`, `w0002`, ...
    pub fn vocabulary(&self) -> Vec<String> {
        let width = self.params_used.n.to_string().len().max(4);
        (1..=self.params_used.n).map(|i| format!("w{i:0width$}")).collect()
    }

    pub fn write_docword(&self, w: impl Write) -> Result<()> {
        let counts = self.count_matrix()?;
        crate::corpus::write_docword(w, &counts, None)?;
        Ok(())
    }

    pub fn write_vocabulary(&self, mut w: impl Write) -> io::Result<()> {
        for word in self.vocabulary() {
            writeln!(w, "{word}")?;
        }
        Ok(())
    }

    /// 1-based true topics, one per line.
    pub fn write_topics(&self, w: impl Write) -> io::Result<()> {
        crate::corpus::write_labels(w, &self.true_topics)
    }
}

/// Ground-truth model with disjoint keyword blocks, one per topic, and an
/// optional share of topic-unspecific noise words.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTemplate {
    pub k: usize,
    pub n: usize,
    pub lambda: Vec<f64>,
    /// Fraction of the vocabulary that is never a keyword.
    pub noise_fraction: f64,
    /// `p_si` inside a topic's own block.
    pub keyword_prob: f64,
    /// `c_si` inside a topic's own block.
    pub keyword_mean: f64,
    /// Cross mean of block words.
    pub background_mean: f64,
    /// Cross mean of noise words.
    pub noise_mean: f64,
    /// Cross variance of noise words.
    pub noise_variance: f64,
}

impl BlockTemplate {
    /// Uniform weights, no noise, `p = 0.8` and a 20:1 keyword-to-background
    /// mean ratio.
    pub fn new(k: usize, n: usize) -> Self {
        Self {
            k,
            n,
            lambda: vec![1.0 / k as f64; k],
            noise_fraction: 0.0,
            keyword_prob: 0.8,
            keyword_mean: 10.0,
            background_mean: 0.5,
            noise_mean: 2.0,
            noise_variance: 4.0,
        }
    }

    pub fn with_lambda(mut self, lambda: Vec<f64>) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_noise(mut self, fraction: f64) -> Self {
        self.noise_fraction = fraction;
        self
    }

    pub fn noise_words(&self) -> usize {
        (self.noise_fraction * self.n as f64).round() as usize
    }

    /// Keyword block of each topic; noise words come last.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let signal = self.n - self.noise_words();
        (0..self.k)
            .map(|s| s * signal / self.k..(s + 1) * signal / self.k)
            .collect()
    }

    pub fn params(&self) -> Result<ModelParams> {
        if self.k == 0 || self.lambda.len() != self.k {
            return Err(Error::InvalidConfig("lambda must have one weight per topic".into()));
        }
        if !(0.0..1.0).contains(&self.noise_fraction) {
            return Err(Error::InvalidConfig("noise fraction must lie in [0, 1)".into()));
        }
        if self.n - self.noise_words() < self.k {
            return Err(Error::InvalidConfig("every topic needs at least one keyword".into()));
        }
        let (k, n) = (self.k, self.n);
        let blocks = self.blocks();
        let signal = n - self.noise_words();
        let mut params = ModelParams::uniform(k, n, 1);
        params.lambda = self.lambda.clone();
        for (s, block) in blocks.iter().enumerate() {
            params.q[s] = block.len();
            for i in 0..n {
                let a = s * n + i;
                let own = block.contains(&i);
                params.p[a] = if own { self.keyword_prob } else { 0.0 };
                params.c[a] = self.keyword_mean;
            }
        }
        for i in 0..n {
            if i >= signal {
                params.cross_c[i] = self.noise_mean;
                params.cross_sigma2[i] = self.noise_variance;
            } else {
                params.cross_c[i] = self.background_mean;
            }
        }
        params.validate()?;
        Ok(params)
    }
}
