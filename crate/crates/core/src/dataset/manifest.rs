use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::table::Schema;
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.toml";

/// Everything needed to rebuild the same train/test encoding from the same
/// input file. Per-artifact choices (classifier, with-s) live with the artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: u32,
    pub input: String,
    pub input_sha256: String,
    pub label_col: String,
    pub positive_value: String,
    pub group_col: String,
    pub favored_value: String,
    pub missing: String,
    pub rows_retained: usize,
    pub seed: u64,
    pub split_fraction: f64,
    pub preprocessing: String,
    pub threshold_ties: String,
    pub massage_rounding: String,
}

impl Manifest {
    pub const FORMAT: u32 = 1;

    pub fn new(
        input: &Path,
        input_bytes: &[u8],
        schema: &Schema,
        rows_retained: usize,
        seed: u64,
        split_fraction: f64,
    ) -> Self {
        Manifest {
            format: Self::FORMAT,
            input: input
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            input_sha256: hex::encode(Sha256::digest(input_bytes)),
            label_col: schema.label_col.clone(),
            positive_value: schema.positive_value.clone(),
            group_col: schema.group_col.clone(),
            favored_value: schema.favored_value.clone(),
            missing: schema.missing.as_str().to_string(),
            rows_retained,
            seed,
            split_fraction,
            preprocessing: "one-hot categoricals; numerics z-scored with training-split mean and \
                            population std; zero-variance numerics encoded as 0"
                .to_string(),
            threshold_ties: "strict: accept iff score > threshold".to_string(),
            massage_rounding: "m = round-half-up(n_f * n_p * d0 / n); rank ties by ascending row"
                .to_string(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest fields are always serializable")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad manifest: {e}")))
    }

    /// Short digest of the canonical TOML rendering.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        hex::encode(&digest[..8])
    }

    pub fn check(&self, found: &str) -> Result<()> {
        let expected = self.hash();
        if expected != found {
            return Err(Error::ManifestMismatch {
                expected,
                found: found.to_string(),
            });
        }
        Ok(())
    }

    /// Write `manifest.toml` into `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        let path = dir.join(MANIFEST_FILE);
        std::fs::write(&path, self.to_toml()).map_err(|e| Error::io(&path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }
}
