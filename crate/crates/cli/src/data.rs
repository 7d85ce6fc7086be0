use std::collections::HashSet;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use lbg::corpus::{build_codebook, english_stopwords, load_docword, load_plaintext, load_stopwords, Codebook, RawCorpus, TfIdf};
use lbg::persist::Weighting;
use lbg::DocumentMatrix;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// One document per line.
    Text,
    /// UCI bag-of-words `docword` file; requires `--vocab`.
    Docword,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightingArg {
    Tfidf,
    Counts,
}

#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct InputArgs {
    /// Corpus file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Vocabulary file for `docword` input, one word per line.
    #[arg(long)]
    pub vocab: Option<PathBuf>,
}

impl InputArgs {
    /// The raw corpus and, for `docword`, the code-book its vocabulary defines.
    pub fn load(&self) -> Result<(RawCorpus, Option<Codebook>), CliError> {
        match self.format {
            Format::Text => Ok((load_plaintext(&self.input)?, None)),
            Format::Docword => {
                let vocab = self
                    .vocab
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("--format docword needs --vocab".into()))?;
                let (corpus, codebook) = load_docword(&self.input, vocab)?;
                Ok((corpus, Some(codebook)))
            }
        }
    }

    pub fn paths(&self) -> Vec<&Path> {
        let mut out = vec![self.input.as_path()];
        out.extend(self.vocab.as_deref());
        out
    }
}

pub fn stopword_set(path: Option<&Path>, keep: bool) -> Result<HashSet<String>, CliError> {
    Ok(match (keep, path) {
        (true, _) => HashSet::new(),
        (false, Some(p)) => load_stopwords(p)?,
        (false, None) => english_stopwords(),
    })
}

/// Code-book for training: the docword vocabulary as given, or one built
/// from the text corpus.
pub fn training_codebook(
    corpus: &RawCorpus,
    given: Option<Codebook>,
    stopwords: &HashSet<String>,
    min_df: u32,
) -> Result<Codebook, CliError> {
    match given {
        Some(cb) => Ok(cb),
        None => Ok(build_codebook(corpus, stopwords, min_df)?),
    }
}

pub fn weigh(corpus: &RawCorpus, codebook: &Codebook, weighting: Weighting) -> Result<DocumentMatrix, CliError> {
    Ok(match weighting {
        Weighting::Counts => corpus.count_matrix(codebook)?,
        Weighting::Tfidf { num_docs } => TfIdf::from_codebook(codebook, num_docs).transform(codebook, corpus)?,
    })
}
