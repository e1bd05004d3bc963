use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

/// Version tag written into serialized models; bump when the feature set changes.
pub const FEATURE_SCHEMA_VERSION: u32 = 1;

/// Default covariance regularization.
pub const DEFAULT_LAMBDA: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextLabel {
    Passing,
    Meeting,
    WalkingTogetherToward,
    WalkingTogetherAway,
    QueueWaiting,
    GroupJoining,
}

impl ContextLabel {
    pub const ALL: [ContextLabel; 6] = [
        ContextLabel::Passing,
        ContextLabel::Meeting,
        ContextLabel::WalkingTogetherToward,
        ContextLabel::WalkingTogetherAway,
        ContextLabel::QueueWaiting,
        ContextLabel::GroupJoining,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ContextLabel::Passing => "passing",
            ContextLabel::Meeting => "meeting",
            ContextLabel::WalkingTogetherToward => "walking_together_toward",
            ContextLabel::WalkingTogetherAway => "walking_together_away",
            ContextLabel::QueueWaiting => "queue_waiting",
            ContextLabel::GroupJoining => "group_joining",
        }
    }
}

impl fmt::Display for ContextLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ContextLabel {
    type Err = ContextError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ContextLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| ContextError::UnknownLabel(s.to_string()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ContextError {
    #[error("label `{label}` has {found} samples, at least {needed} required")]
    TooFewSamples {
        label: ContextLabel,
        found: usize,
        needed: usize,
    },
    #[error("regularization must be positive, got {0}")]
    InvalidLambda(f64),
    #[error("training set is empty")]
    EmptyDataset,
    #[error("sample {index} has {found} features, expected {expected}")]
    DimensionMismatch {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("covariance for `{0}` is not positive definite")]
    Singular(ContextLabel),
    #[error("label `{0}` appears more than once in the model")]
    DuplicateLabel(ContextLabel),
    #[error("unknown context label `{0}`")]
    UnknownLabel(String),
    #[error("model schema version {found} is not supported (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One multivariate normal with its class prior.
#[derive(Debug, Clone)]
pub struct GaussianComponent {
    mean: DVector<f64>,
    covariance: DMatrix<f64>,
    prior: f64,
    chol: Cholesky<f64, Dyn>,
    norm: f64,
}

impl PartialEq for GaussianComponent {
    fn eq(&self, other: &Self) -> bool {
        self.mean == other.mean && self.covariance == other.covariance && self.prior == other.prior
    }
}

impl GaussianComponent {
    /// Fails when `covariance` is not symmetric positive definite.
    pub fn new(mean: Vec<f64>, covariance: DMatrix<f64>, prior: f64) -> Option<Self> {
        let n = mean.len();
        if covariance.nrows() != n || covariance.ncols() != n {
            return None;
        }
        let chol = Cholesky::new(covariance.clone())?;
        let det: f64 = chol.l_dirty().diagonal().iter().map(|d| d * d).product();
        if det.is_nan() || det <= 0.0 || !det.is_finite() {
            return None;
        }
        let norm = 1.0 / ((2.0 * PI).powf(n as f64 / 2.0) * det.sqrt());
        Some(Self {
            mean: DVector::from_vec(mean),
            covariance,
            prior,
            chol,
            norm,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        self.mean.as_slice()
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }

    /// Squared Mahalanobis distance of `w` from the mean.
    pub fn mahalanobis_sq(&self, w: &[f64]) -> f64 {
        assert_eq!(w.len(), self.dim(), "feature dimension mismatch");
        let diff = DVector::from_column_slice(w) - &self.mean;
        let solved = self.chol.solve(&diff);
        diff.dot(&solved)
    }

    /// `(2π)^(-n/2) |Σ|^(-1/2) exp(-δ)` with `δ` half the squared Mahalanobis
    /// distance, i.e. the multivariate normal density.
    pub fn density(&self, w: &[f64]) -> f64 {
        self.norm * (-0.5 * self.mahalanobis_sq(w)).exp()
    }
}

/// Class-conditional Gaussian model, one component per label seen in training.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextModel {
    components: Vec<(ContextLabel, GaussianComponent)>,
    pub lambda: f64,
    pub seed: u64,
}

/// Posterior probability per [`ContextLabel`], indexed in [`ContextLabel::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Posterior(pub [f64; 6]);

impl Posterior {
    pub fn one_hot(label: ContextLabel) -> Self {
        let mut p = [0.0; 6];
        p[label.index()] = 1.0;
        Self(p)
    }

    pub fn from_pairs(pairs: &[(ContextLabel, f64)]) -> Self {
        let mut p = [0.0; 6];
        for (l, v) in pairs {
            p[l.index()] = *v;
        }
        Self(p)
    }

    pub fn get(&self, label: ContextLabel) -> f64 {
        self.0[label.index()]
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Highest-probability label; ties resolve to the earlier label.
    pub fn argmax(&self) -> ContextLabel {
        let mut best = 0;
        for i in 1..6 {
            if self.0[i] > self.0[best] {
                best = i;
            }
        }
        ContextLabel::ALL[best]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: ContextLabel,
    pub posterior: Posterior,
    /// Every class density underflowed; the posterior is uniform.
    pub low_confidence: bool,
}

impl ContextModel {
    pub fn new(components: Vec<(ContextLabel, GaussianComponent)>, lambda: f64, seed: u64) -> Result<Self, ContextError> {
        let mut components = components;
        components.sort_by_key(|(l, _)| *l);
        for pair in components.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(ContextError::DuplicateLabel(pair[0].0));
            }
        }
        Ok(Self { components, lambda, seed })
    }

    pub fn labels(&self) -> impl Iterator<Item = ContextLabel> + '_ {
        self.components.iter().map(|(l, _)| *l)
    }

    pub fn component(&self, label: ContextLabel) -> Option<&GaussianComponent> {
        self.components.iter().find(|(l, _)| *l == label).map(|(_, c)| c)
    }

    pub fn components(&self) -> &[(ContextLabel, GaussianComponent)] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.first().map_or(0, |(_, c)| c.dim())
    }

    /// Density of `w` under the label's component; zero for labels the model
    /// was not trained on.
    pub fn class_density(&self, label: ContextLabel, w: &[f64]) -> f64 {
        self.component(label).map_or(0.0, |c| c.density(w))
    }

    pub fn classify(&self, w: &[f64]) -> Classification {
        let mut joint = [0.0; 6];
        for (label, c) in &self.components {
            joint[label.index()] = c.prior() * c.density(w);
        }
        let total: f64 = joint.iter().sum();
        if total > 0.0 && total.is_finite() {
            let posterior = Posterior(joint.map(|j| j / total));
            Classification {
                label: posterior.argmax(),
                posterior,
                low_confidence: false,
            }
        } else {
            let share = 1.0 / self.components.len() as f64;
            let mut p = [0.0; 6];
            for (label, _) in &self.components {
                p[label.index()] = share;
            }
            let posterior = Posterior(p);
            Classification {
                label: posterior.argmax(),
                posterior,
                low_confidence: true,
            }
        }
    }

    pub fn to_json(&self) -> Result<String, ContextError> {
        let file = ModelFile {
            schema_version: FEATURE_SCHEMA_VERSION,
            feature_names: super::FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
            lambda: self.lambda,
            seed: self.seed,
            components: self
                .components
                .iter()
                .map(|(label, c)| ComponentFile {
                    label: *label,
                    prior: c.prior,
                    mean: c.mean.as_slice().to_vec(),
                    // nalgebra is column-major; transpose to emit rows
                    covariance: c.covariance.transpose().as_slice().to_vec(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, ContextError> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.schema_version != FEATURE_SCHEMA_VERSION {
            return Err(ContextError::SchemaVersion {
                found: file.schema_version,
                expected: FEATURE_SCHEMA_VERSION,
            });
        }
        let mut components = Vec::new();
        for c in file.components {
            let n = c.mean.len();
            if c.covariance.len() != n * n {
                return Err(ContextError::Singular(c.label));
            }
            let cov = DMatrix::from_row_slice(n, n, &c.covariance);
            let g = GaussianComponent::new(c.mean, cov, c.prior).ok_or(ContextError::Singular(c.label))?;
            components.push((c.label, g));
        }
        Self::new(components, file.lambda, file.seed)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    schema_version: u32,
    feature_names: Vec<String>,
    lambda: f64,
    seed: u64,
    components: Vec<ComponentFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentFile {
    label: ContextLabel,
    prior: f64,
    mean: Vec<f64>,
    /// Row-major `n × n`.
    covariance: Vec<f64>,
}

/// One training example.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub features: Vec<f64>,
    pub label: ContextLabel,
}

/// Maximum-likelihood mean and covariance per label with `λ·I` added to each
/// covariance; priors are label frequencies.
///
/// `seed` is carried into the model for provenance. The single-component
/// fit is closed-form, so the result depends only on the data order and `λ`.
pub fn fit_context_model(data: &[LabeledSample], lambda: f64, seed: u64) -> Result<ContextModel, ContextError> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(ContextError::InvalidLambda(lambda));
    }
    let n = data.first().ok_or(ContextError::EmptyDataset)?.features.len();
    for (index, s) in data.iter().enumerate() {
        if s.features.len() != n {
            return Err(ContextError::DimensionMismatch {
                index,
                found: s.features.len(),
                expected: n,
            });
        }
    }
    let total = data.len() as f64;
    let mut components = Vec::new();
    for label in ContextLabel::ALL {
        let rows: Vec<&[f64]> = data.iter().filter(|s| s.label == label).map(|s| &s.features[..]).collect();
        if rows.is_empty() {
            continue;
        }
        if rows.len() < n + 1 {
            return Err(ContextError::TooFewSamples {
                label,
                found: rows.len(),
                needed: n + 1,
            });
        }
        let count = rows.len() as f64;
        let mut mean = vec![0.0; n];
        for r in &rows {
            for (m, v) in mean.iter_mut().zip(r.iter()) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= count);
        let mut cov = DMatrix::<f64>::zeros(n, n);
        for r in &rows {
            for i in 0..n {
                let di = r[i] - mean[i];
                for j in 0..n {
                    cov[(i, j)] += di * (r[j] - mean[j]);
                }
            }
        }
        cov /= count;
        for i in 0..n {
            cov[(i, i)] += lambda;
        }
        let g = GaussianComponent::new(mean, cov, count / total).ok_or(ContextError::Singular(label))?;
        components.push((label, g));
    }
    ContextModel::new(components, lambda, seed)
}

pub fn class_density(model: &ContextModel, label: ContextLabel, w: &[f64]) -> f64 {
    model.class_density(label, w)
}

pub fn classify(model: &ContextModel, w: &[f64]) -> Classification {
    model.classify(w)
}

/// Fraction of `data` whose argmax label matches; `0` for an empty set.
pub fn accuracy(model: &ContextModel, data: &[LabeledSample]) -> f64 {
    if data.is_empty() {
        return 0.0;
    }
    let hits = data.iter().filter(|s| model.classify(&s.features).label == s.label).count();
    hits as f64 / data.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_d(mean: f64, var: f64) -> GaussianComponent {
        GaussianComponent::new(vec![mean], DMatrix::from_element(1, 1, var), 1.0).unwrap()
    }

    #[test]
    fn closed_form_densities() {
        let g2 = GaussianComponent::new(vec![0.0, 0.0], DMatrix::identity(2, 2), 1.0).unwrap();
        assert!((g2.density(&[0.0, 0.0]) - 1.0 / (2.0 * PI)).abs() < 1e-12);
        let g1 = one_d(0.0, 1.0);
        assert!((g1.density(&[0.0]) - 0.398_942_280_401_432_7).abs() < 1e-12);
        assert!((g1.density(&[1.0]) - 0.241_970_724_519_143_37).abs() < 1e-12);
    }

    #[test]
    fn zero_scatter_gives_lambda_identity() {
        let data: Vec<_> = ContextLabel::ALL[..2]
            .iter()
            .flat_map(|l| {
                (0..2).map(move |_| LabeledSample {
                    features: vec![1.5],
                    label: *l,
                })
            })
            .collect();
        let m = fit_context_model(&data, 1e-3, 0).unwrap();
        let c = m.component(ContextLabel::Passing).unwrap();
        assert_eq!(c.covariance()[(0, 0)], 1e-3);
        assert_eq!(c.mean(), &[1.5]);
    }

    #[test]
    fn equal_classes_get_equal_priors() {
        let mut data = Vec::new();
        for (k, l) in ContextLabel::ALL[..4].iter().enumerate() {
            for i in 0..3 {
                data.push(LabeledSample {
                    features: vec![k as f64 * 10.0 + i as f64],
                    label: *l,
                });
            }
        }
        let m = fit_context_model(&data, DEFAULT_LAMBDA, 0).unwrap();
        for (_, c) in m.components() {
            assert_eq!(c.prior(), 0.25);
        }
    }

    #[test]
    fn too_few_samples_names_label() {
        let data = vec![
            LabeledSample {
                features: vec![0.0, 0.0],
                label: ContextLabel::Meeting,
            };
            2
        ];
        let err = fit_context_model(&data, DEFAULT_LAMBDA, 0).unwrap_err();
        assert!(err.to_string().contains("meeting"), "{err}");
        assert!(matches!(fit_context_model(&data, 0.0, 0), Err(ContextError::InvalidLambda(_))));
    }

    fn symmetric_pair() -> ContextModel {
        let a = GaussianComponent::new(vec![-1.0, 0.0], DMatrix::identity(2, 2), 0.5).unwrap();
        let b = GaussianComponent::new(vec![1.0, 0.0], DMatrix::identity(2, 2), 0.5).unwrap();
        ContextModel::new(vec![(ContextLabel::Meeting, b), (ContextLabel::Passing, a)], 1e-6, 0).unwrap()
    }

    #[test]
    fn symmetric_midpoint_is_even() {
        let c = symmetric_pair().classify(&[0.0, 3.0]);
        assert_eq!(c.posterior.get(ContextLabel::Passing), 0.5);
        assert_eq!(c.posterior.get(ContextLabel::Meeting), 0.5);
        assert!(!c.low_confidence);
    }

    #[test]
    fn underflow_falls_back_to_uniform() {
        let c = symmetric_pair().classify(&[100.0, 100.0]);
        assert!(c.low_confidence);
        assert_eq!(c.posterior.get(ContextLabel::Passing), 0.5);
        assert_eq!(c.posterior.get(ContextLabel::Meeting), 0.5);
        assert_eq!(c.posterior.get(ContextLabel::QueueWaiting), 0.0);
    }

    #[test]
    fn json_round_trip_preserves_model() {
        let m = symmetric_pair();
        let back = ContextModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let a = one_d(0.0, 1.0);
        assert!(matches!(
            ContextModel::new(vec![(ContextLabel::Passing, a.clone()), (ContextLabel::Passing, a)], 1e-6, 0),
            Err(ContextError::DuplicateLabel(ContextLabel::Passing))
        ));
    }
}
