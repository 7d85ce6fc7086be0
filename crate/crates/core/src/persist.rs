//! JSON model files shared by every model family.
//!
//! A file is one JSON object whose `model_type` field is `"lbg"`, `"mou"`
//! or `"cf"`. Floats are written in their shortest round-trip form, so a
//! saved model reloads bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cf::CfModel;
use crate::error::Result;
use crate::lbg::ModelParams;
use crate::mou::MouModel;

/// How raw documents were turned into word weights before fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase")]
pub enum Weighting {
    Counts,
    /// tf-idf with idf taken from the codebook's document frequencies over
    /// `num_docs` training documents.
    Tfidf { num_docs: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LbgFile {
    #[serde(flatten)]
    pub params: ModelParams,
    /// SHA-256 of the codebook the word indices refer to.
    pub codebook_sha256: Option<String>,
    pub weighting: Weighting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MouFile {
    #[serde(flatten)]
    pub model: MouModel,
    pub codebook_sha256: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model_type", rename_all = "lowercase")]
pub enum SavedModel {
    Lbg(LbgFile),
    Mou(MouFile),
    Cf(CfModel),
}

impl SavedModel {
    pub fn model_type(&self) -> &'static str {
        match self {
            SavedModel::Lbg(_) => "lbg",
            SavedModel::Mou(_) => "mou",
            SavedModel::Cf(_) => "cf",
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: SavedModel = serde_json::from_str(text)?;
        if let SavedModel::Lbg(f) = &model {
            f.params.validate()?;
        }
        if let SavedModel::Mou(f) = &model {
            f.model.validate()?;
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
