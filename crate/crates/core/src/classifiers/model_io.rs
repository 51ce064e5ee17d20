//! Versioned, line-oriented text format for trained models.
//!
//! ```text
//! fairtrade-model 1
//! kind logistic
//! variant logistic-no-s
//! manifest 3f2a...
//! bias -1.25
//! w<TAB>age<TAB>0.41
//! ...
//! ```
//!
//! Naive Bayes models store `prior <neg> <pos>` and one line per feature:
//! `g<TAB>name<TAB>mean_neg<TAB>var_neg<TAB>mean_pos<TAB>var_pos` for Gaussian
//! features, `b<TAB>name<TAB>p1_neg<TAB>p1_pos` for Bernoulli features.
//! Floats use Rust's shortest round-trip formatting.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use ndarray::Array1;

use super::{
    score_logistic, score_naive_bayes, FeatureLikelihood, LinearModel, NaiveBayesModel, Scores,
};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

const MAGIC: &str = "fairtrade-model";
const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierKind {
    Logistic,
    NaiveBayes,
}

impl ClassifierKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::Logistic => "logistic",
            ClassifierKind::NaiveBayes => "nb",
        }
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logistic" => Ok(ClassifierKind::Logistic),
            "nb" | "naive_bayes" => Ok(ClassifierKind::NaiveBayes),
            other => Err(Error::InvalidArgument(format!(
                "unknown classifier `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Logistic(LinearModel),
    NaiveBayes(NaiveBayesModel),
}

impl Model {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            Model::Logistic(_) => ClassifierKind::Logistic,
            Model::NaiveBayes(_) => ClassifierKind::NaiveBayes,
        }
    }

    pub fn feature_names(&self) -> &[String] {
        match self {
            Model::Logistic(m) => &m.feature_names,
            Model::NaiveBayes(m) => &m.feature_names,
        }
    }

    /// Score `ds` after checking that its columns are the ones the model was trained on.
    pub fn score(&self, ds: &Dataset) -> Result<Scores> {
        if ds.feature_names() != self.feature_names() {
            return Err(Error::InvalidArgument(format!(
                "feature columns differ from the model's ({} vs {} columns); was --with-s the same?",
                ds.n_features(),
                self.feature_names().len()
            )));
        }
        match self {
            Model::Logistic(m) => score_logistic(m, ds),
            Model::NaiveBayes(m) => score_naive_bayes(m, ds),
        }
    }
}

/// A model together with the manifest it was trained under.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub model: Model,
    pub variant: String,
    pub manifest_hash: String,
}

impl ModelFile {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC} {VERSION}");
        let _ = writeln!(out, "kind {}", self.model.kind().as_str());
        let _ = writeln!(out, "variant {}", self.variant);
        let _ = writeln!(out, "manifest {}", self.manifest_hash);
        match &self.model {
            Model::Logistic(m) => {
                let _ = writeln!(out, "bias {}", m.bias);
                for (name, w) in m.feature_names.iter().zip(m.weights.iter()) {
                    let _ = writeln!(out, "w\t{name}\t{w}");
                }
            }
            Model::NaiveBayes(m) => {
                let _ = writeln!(out, "prior {} {}", m.prior[0], m.prior[1]);
                for (name, f) in m.feature_names.iter().zip(&m.features) {
                    let _ = match f {
                        FeatureLikelihood::Gaussian { mean, variance } => writeln!(
                            out,
                            "g\t{name}\t{}\t{}\t{}\t{}",
                            mean[0], variance[0], mean[1], variance[1]
                        ),
                        FeatureLikelihood::Bernoulli { p_one } => {
                            writeln!(out, "b\t{name}\t{}\t{}", p_one[0], p_one[1])
                        }
                    };
                }
            }
        }
        out
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let err = |line: usize, msg: String| Error::parse(origin, line, msg);
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

        let mut header = |key: &str| -> Result<String> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| err(0, format!("missing `{key}` line")))?;
            line.strip_prefix(key)
                .and_then(|rest| rest.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| err(no, format!("expected `{key} ...`")))
        };
        let version = header(MAGIC)?;
        if version != VERSION.to_string() {
            return Err(err(
                1,
                format!("unsupported model format version {version}"),
            ));
        }
        let kind: ClassifierKind = header("kind")?.parse()?;
        let variant = header("variant")?;
        let manifest_hash = header("manifest")?;

        let model = match kind {
            ClassifierKind::Logistic => {
                let bias = parse_f64(&header("bias")?).map_err(|m| err(5, m))?;
                let mut names = Vec::new();
                let mut weights = Vec::new();
                for (no, line) in lines {
                    let fields: Vec<&str> = line.split('\t').collect();
                    match fields.as_slice() {
                        ["w", name, w] => {
                            names.push(name.to_string());
                            weights.push(parse_f64(w).map_err(|m| err(no, m))?);
                        }
                        _ => return Err(err(no, "expected `w<TAB>name<TAB>weight`".into())),
                    }
                }
                Model::Logistic(LinearModel {
                    weights: Array1::from(weights),
                    bias,
                    feature_names: names,
                })
            }
            ClassifierKind::NaiveBayes => {
                let prior_line = header("prior")?;
                let prior: Vec<f64> = prior_line
                    .split(' ')
                    .map(parse_f64)
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|m| err(5, m))?;
                if prior.len() != 2 {
                    return Err(err(5, "prior needs two values".into()));
                }
                let mut names = Vec::new();
                let mut features = Vec::new();
                for (no, line) in lines {
                    let fields: Vec<&str> = line.split('\t').collect();
                    let values = |rest: &[&str]| -> Result<Vec<f64>> {
                        rest.iter()
                            .map(|v| parse_f64(v).map_err(|m| err(no, m)))
                            .collect()
                    };
                    let f =
                        match fields.as_slice() {
                            ["g", name, rest @ ..] if rest.len() == 4 => {
                                names.push(name.to_string());
                                let v = values(rest)?;
                                FeatureLikelihood::Gaussian {
                                    mean: [v[0], v[2]],
                                    variance: [v[1], v[3]],
                                }
                            }
                            ["b", name, rest @ ..] if rest.len() == 2 => {
                                names.push(name.to_string());
                                let v = values(rest)?;
                                FeatureLikelihood::Bernoulli {
                                    p_one: [v[0], v[1]],
                                }
                            }
                            _ => return Err(err(
                                no,
                                "expected `g<TAB>name` with four values or `b<TAB>name` with two"
                                    .into(),
                            )),
                        };
                    features.push(f);
                }
                Model::NaiveBayes(NaiveBayesModel {
                    prior: [prior[0], prior[1]],
                    features,
                    feature_names: names,
                })
            }
        };
        Ok(ModelFile {
            model,
            variant,
            manifest_hash,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{s}` is not a finite number"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn logistic() -> ModelFile {
        ModelFile {
            model: Model::Logistic(LinearModel {
                weights: array![0.1, -2.5e-7, 3.0],
                bias: -0.123456789012345,
                feature_names: vec!["age".into(), "job=clerk".into(), "sex".into()],
            }),
            variant: "logistic-with-s".into(),
            manifest_hash: "00ff".into(),
        }
    }

    #[test]
    fn logistic_round_trip_is_exact() {
        let m = logistic();
        let back = ModelFile::parse(&m.to_text(), Path::new("m.txt")).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn naive_bayes_round_trip_is_exact() {
        let m = ModelFile {
            model: Model::NaiveBayes(NaiveBayesModel {
                prior: [0.7, 0.3],
                features: vec![
                    FeatureLikelihood::Gaussian {
                        mean: [1.0, -0.5],
                        variance: [1e-9, 0.25],
                    },
                    FeatureLikelihood::Bernoulli {
                        p_one: [0.2, 1.0 / 3.0],
                    },
                ],
                feature_names: vec!["a".into(), "b".into()],
            }),
            variant: "nb-no-s".into(),
            manifest_hash: "abcd".into(),
        };
        assert_eq!(
            ModelFile::parse(&m.to_text(), Path::new("m.txt")).unwrap(),
            m
        );
    }

    #[test]
    fn malformed_files_report_line_numbers() {
        let text = logistic().to_text().replace("w\tsex\t3", "w\tsex\tthree");
        match ModelFile::parse(&text, Path::new("m.txt")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 8),
            other => panic!("unexpected {other:?}"),
        }
        let text = logistic()
            .to_text()
            .replace("fairtrade-model 1", "fairtrade-model 9");
        assert!(ModelFile::parse(&text, Path::new("m.txt")).is_err());
    }
}
