//! Corpus ingestion, code-book construction and tf-idf weighting.
//!
//! Documents are bags of lowercase tokens. A [`Codebook`] fixes the word
//! order shared by every matrix built from it, and [`TfIdf`] turns a
//! [`RawCorpus`] into the non-negative [`DocumentMatrix`] consumed by the
//! models.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::{DocumentMatrix, SparseDoc};

/// Token multiset of a single document.
pub type TokenCounts = BTreeMap<String, u32>;

/// Documents as token multisets, with optional 0-based class labels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawCorpus {
    docs: Vec<TokenCounts>,
    labels: Option<Vec<usize>>,
}

/// Ordered vocabulary with per-word document frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    words: Vec<String>,
    df: Vec<u32>,
    index: HashMap<String, usize>,
}

/// Smoothed inverse-document-frequency weights for a code-book.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdf {
    idf: Vec<f64>,
}

/// Lowercases, splits on anything that is not alphanumeric and drops tokens
/// shorter than two characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2)
        .map(str::to_lowercase)
        .collect()
}

const ENGLISH_STOPWORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
    "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but",
    "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "few", "for",
    "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers", "herself",
    "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just",
    "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of", "off", "on", "once",
    "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own", "same", "she",
    "should", "so", "some", "such", "than", "that", "the", "their", "theirs", "them",
    "themselves", "then", "there", "these", "they", "this", "those", "through", "to", "too",
    "under", "until", "up", "very", "was", "we", "were", "what", "when", "where", "which",
    "while", "who", "whom", "why", "will", "with", "would", "you", "your", "yours", "yourself",
    "yourselves",
];

/// Built-in English stop-word list.
pub fn english_stopwords() -> HashSet<String> {
    ENGLISH_STOPWORDS.iter().map(|s| s.to_string()).collect()
}

/// Reads a stop-word file, one word per line; blank lines are ignored.
pub fn load_stopwords(path: impl AsRef<Path>) -> Result<HashSet<String>> {
    Ok(fs::read_to_string(path)?
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect())
}

impl RawCorpus {
    /// Rejects documents without tokens.
    pub fn new(docs: Vec<TokenCounts>) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        if let Some(j) = docs.iter().position(|d| d.values().all(|&c| c == 0)) {
            return Err(Error::EmptyDocument { doc: j });
        }
        Ok(Self { docs, labels: None })
    }

    pub fn from_texts<I, S>(texts: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self::new(texts.into_iter().map(|t| count_tokens(tokenize(t.as_ref()))).collect())
    }

    pub fn from_token_lists<I, D, S>(docs: I) -> Result<Self>
    where
        I: IntoIterator<Item = D>,
        D: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(
            docs.into_iter()
                .map(|d| count_tokens(d.into_iter().map(Into::into)))
                .collect(),
        )
    }

    /// Attaches 0-based class labels, one per document.
    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.docs.len() {
            return Err(Error::DimensionMismatch {
                what: "label count",
                expected: self.docs.len(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn docs(&self) -> &[TokenCounts] {
        &self.docs
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Raw in-vocabulary counts as a document matrix.
    pub fn count_matrix(&self, codebook: &Codebook) -> Result<DocumentMatrix> {
        DocumentMatrix::from_rows(
            codebook.len(),
            self.docs.iter().map(|d| {
                let mut row: Vec<(usize, f64)> = d
                    .iter()
                    .filter(|&(_, &c)| c > 0)
                    .filter_map(|(w, &c)| codebook.index_of(w).map(|i| (i, c as f64)))
                    .collect();
                row.sort_unstable_by_key(|e| e.0);
                row
            }),
        )
    }
}

fn count_tokens(tokens: impl IntoIterator<Item = String>) -> TokenCounts {
    let mut counts = TokenCounts::new();
    for t in tokens {
        *counts.entry(t).or_insert(0) += 1;
    }
    counts
}

/// Code-book over every token with document frequency `>= min_df` that is
/// not a stop-word, in lexicographic order.
pub fn build_codebook(
    corpus: &RawCorpus,
    stopwords: &HashSet<String>,
    min_df: u32,
) -> Result<Codebook> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut df: BTreeMap<&str, u32> = BTreeMap::new();
    for doc in &corpus.docs {
        for (w, &c) in doc {
            if c > 0 && !stopwords.contains(w) {
                *df.entry(w).or_insert(0) += 1;
            }
        }
    }
    let (words, df): (Vec<String>, Vec<u32>) = df
        .into_iter()
        .filter(|&(_, d)| d >= min_df)
        .map(|(w, d)| (w.to_string(), d))
        .unzip();
    if words.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    Codebook::new(words, df)
}

impl Codebook {
    pub fn new(words: Vec<String>, df: Vec<u32>) -> Result<Self> {
        if words.len() != df.len() {
            return Err(Error::DimensionMismatch {
                what: "document-frequency count",
                expected: words.len(),
                found: df.len(),
            });
        }
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate code-word {w:?}")));
            }
        }
        Ok(Self { words, df, index })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn document_frequency(&self) -> &[u32] {
        &self.df
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// `word<TAB>df` per line; the line number is the word index.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (w, d) in self.words.iter().zip(&self.df) {
            let _ = writeln!(out, "{w}\t{d}");
        }
        out
    }

    pub fn from_tsv(text: &str, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut words = Vec::new();
        let mut df = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let (w, d) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(path, no + 1, "expected word<TAB>df"))?;
            let d = d
                .trim()
                .parse()
                .map_err(|e| Error::parse(path, no + 1, format!("bad document frequency: {e}")))?;
            words.push(w.to_string());
            df.push(d);
        }
        Self::new(words, df)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_tsv())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_tsv(&fs::read_to_string(path)?, path)
    }

    /// Hex SHA-256 of the serialized code-book; models record it so a model
    /// can be matched with the vocabulary it was fitted on.
    pub fn sha256(&self) -> String {
        hex_digest(self.to_tsv().as_bytes())
    }
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

impl TfIdf {
    /// `idf_i = ln((1 + num_docs) / (1 + df_i)) + 1`.
    pub fn from_codebook(codebook: &Codebook, num_docs: usize) -> Self {
        let m = num_docs as f64;
        Self {
            idf: codebook
                .df
                .iter()
                .map(|&d| ((1.0 + m) / (1.0 + d as f64)).ln() + 1.0)
                .collect(),
        }
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    /// Weights one document; out-of-vocabulary tokens are dropped.
    pub fn transform_doc(&self, codebook: &Codebook, doc: &TokenCounts) -> Result<SparseDoc> {
        let entries = self.weigh(codebook, doc).ok_or(Error::EmptyDocument { doc: 0 })?;
        SparseDoc::new(codebook.len(), entries)
    }

    pub fn transform(&self, codebook: &Codebook, corpus: &RawCorpus) -> Result<DocumentMatrix> {
        let mut rows = Vec::with_capacity(corpus.len());
        for (j, doc) in corpus.docs.iter().enumerate() {
            rows.push(self.weigh(codebook, doc).ok_or(Error::EmptyDocument { doc: j })?);
        }
        DocumentMatrix::from_rows(codebook.len(), rows)
    }

    fn weigh(&self, codebook: &Codebook, doc: &TokenCounts) -> Option<Vec<(usize, f64)>> {
        let mut hits: Vec<(usize, u32)> = doc
            .iter()
            .filter_map(|(w, &c)| codebook.index_of(w).map(|i| (i, c)))
            .filter(|&(_, c)| c > 0)
            .collect();
        hits.sort_unstable_by_key(|h| h.0);
        let total: u32 = hits.iter().map(|h| h.1).sum();
        if total == 0 {
            return None;
        }
        let total = total as f64;
        Some(
            hits.into_iter()
                .map(|(i, c)| (i, c as f64 / total * self.idf[i]))
                .collect(),
        )
    }
}

/// tf-idf weights with `tf = count / in-vocabulary length` and the smoothed
/// idf of [`TfIdf::from_codebook`] using the corpus size.
pub fn vectorize_tfidf(corpus: &RawCorpus, codebook: &Codebook) -> Result<DocumentMatrix> {
    TfIdf::from_codebook(codebook, corpus.len()).transform(codebook, corpus)
}

/// One document per line.
pub fn load_plaintext(path: impl AsRef<Path>) -> Result<RawCorpus> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut docs = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let doc = count_tokens(tokenize(line));
        if doc.is_empty() {
            return Err(Error::parse(path, no + 1, "document has no tokens"));
        }
        docs.push(doc);
    }
    RawCorpus::new(docs)
}

/// One positive integer label per line; returned 0-based.
pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(no, l)| match l.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            Ok(_) => Err(Error::parse(path, no + 1, "labels are 1-based")),
            Err(e) => Err(Error::parse(path, no + 1, format!("bad label: {e}"))),
        })
        .collect()
}

/// Writes 0-based labels as 1-based integers, one per line.
pub fn write_labels(mut w: impl Write, labels: &[usize]) -> io::Result<()> {
    for l in labels {
        writeln!(w, "{}", l + 1)?;
    }
    Ok(())
}

/// Reads a UCI bag-of-words corpus: `docword` holds three header lines
/// (documents, words, non-zeros) followed by `docID wordID count` triples
/// with 1-based ids; `vocab` holds one word per line.
pub fn load_docword(
    docword: impl AsRef<Path>,
    vocab: impl AsRef<Path>,
) -> Result<(RawCorpus, Codebook)> {
    let vocab_path = vocab.as_ref();
    let words: Vec<String> = fs::read_to_string(vocab_path)?
        .lines()
        .map(|l| l.trim().to_string())
        .collect();
    let path = docword.as_ref();
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let mut header = [0usize; 3];
    for (slot, name) in header.iter_mut().zip(["document", "word", "non-zero"]) {
        let (no, line) = lines
            .next()
            .ok_or_else(|| Error::parse(path, 0, format!("missing {name} count header")))?;
        *slot = line
            .trim()
            .parse()
            .map_err(|e| Error::parse(path, no + 1, format!("bad {name} count: {e}")))?;
    }
    let [m, n, nnz] = header;
    if words.len() != n {
        return Err(Error::parse(
            vocab_path,
            words.len(),
            format!("vocabulary has {} words, header declares {n}", words.len()),
        ));
    }
    let mut docs: Vec<TokenCounts> = vec![TokenCounts::new(); m];
    let mut seen = 0usize;
    for (no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::parse(path, no + 1, "expected `docID wordID count`"));
        }
        let parse = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|e| Error::parse(path, no + 1, format!("bad {what}: {e}")))
        };
        let (d, w, c) = (
            parse(fields[0], "docID")?,
            parse(fields[1], "wordID")?,
            parse(fields[2], "count")?,
        );
        if d == 0 || d > m {
            return Err(Error::parse(path, no + 1, format!("docID {d} outside 1..={m}")));
        }
        if w == 0 || w > n {
            return Err(Error::parse(path, no + 1, format!("wordID {w} outside 1..={n}")));
        }
        let c = u32::try_from(c)
            .map_err(|_| Error::parse(path, no + 1, format!("count {c} too large")))?;
        if docs[d - 1].insert(words[w - 1].clone(), c).is_some() {
            return Err(Error::parse(path, no + 1, "duplicate (docID, wordID) pair"));
        }
        seen += 1;
    }
    if seen != nnz {
        return Err(Error::parse(
            path,
            3,
            format!("header declares {nnz} entries, found {seen}"),
        ));
    }
    let mut df = vec![0u32; n];
    let index: HashMap<&str, usize> = words.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
    for doc in &docs {
        for (w, &c) in doc {
            if c > 0 {
                df[index[w.as_str()]] += 1;
            }
        }
    }
    let codebook = Codebook::new(words, df)?;
    Ok((RawCorpus::new(docs)?, codebook))
}

/// Writes the non-zero integer counts of `counts` in docword format,
/// optionally restricted to (and re-indexed by) a subset of columns.
pub fn write_docword(
    mut w: impl Write,
    counts: &DocumentMatrix,
    columns: Option<&[usize]>,
) -> io::Result<()> {
    let remap: Option<HashMap<usize, usize>> =
        columns.map(|cs| cs.iter().enumerate().map(|(new, &old)| (old, new)).collect());
    let n = columns.map_or(counts.n(), <[usize]>::len);
    let mut body = String::new();
    let mut nnz = 0usize;
    for (j, row) in counts.rows().enumerate() {
        for (i, v) in row.iter() {
            let i = match &remap {
                Some(map) => match map.get(&i) {
                    Some(&k) => k,
                    None => continue,
                },
                None => i,
            };
            let _ = writeln!(body, "{} {} {}", j + 1, i + 1, v.round() as u64);
            nnz += 1;
        }
    }
    write!(w, "{}\n{}\n{}\n{}", counts.m(), n, nnz, body)
}
