//! Latent Bernoulli-Gauss mixtures: topic modeling with per-document
//! keyword selection.
//!
//! The crate covers the full pipeline: turning raw text or UCI `docword`
//! files into sparse word-weight matrices ([`corpus`], [`matrix`]),
//! fitting the mixture ([`lbg::fit`]), scoring unseen documents
//! ([`inference`]), sampling synthetic corpora ([`generator`]), the
//! downstream tasks built on a fitted model ([`applications`], [`cf`]) and
//! a mixture-of-unigrams baseline ([`mou`]).
//!
//! ```
//! use lbg::generator::{sample_corpus, BlockTemplate};
//! use lbg::lbg::{fit, FitConfig};
//!
//! let truth = BlockTemplate::new(2, 20).params()?;
//! let corpus = sample_corpus(&truth, 40, 150, 1)?;
//! let docs = corpus.count_matrix()?;
//! let result = fit(&docs, &FitConfig::new(2).with_seed(1))?;
//! assert_eq!(result.params.k, 2);
//! # Ok::<(), lbg::Error>(())
//! ```

pub mod applications;
pub mod cf;
pub mod corpus;
mod error;
pub mod generator;
pub mod inference;
pub mod lbg;
pub mod matrix;
pub mod mou;
pub mod numeric;
pub mod persist;
pub mod seeding;

pub use error::{Error, Result};
pub use matrix::{DocRow, DocumentMatrix, SparseDoc};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/fitting.md")]
    mod fitting {}
    #[doc = include_str!("../../../book/src/inference.md")]
    mod inference {}
    #[doc = include_str!("../../../book/src/generator.md")]
    mod generator {}
    #[doc = include_str!("../../../book/src/applications.md")]
    mod applications {}
    #[doc = include_str!("../../../book/src/collaborative-filtering.md")]
    mod collaborative_filtering {}
    #[doc = include_str!("../../../book/src/baseline.md")]
    mod baseline {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
