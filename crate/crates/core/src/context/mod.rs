//! Interaction-context classification from distance-based features.

mod dataset;
mod features;
mod model;

pub use dataset::{
    generate_dataset, holdout_split, read_csv, write_csv, CLASS_TABLE, DEFAULT_SAMPLES_PER_LABEL,
};
pub use features::{extract_features, FeatureVector, NoHumans, FEATURE_DIM, FEATURE_NAMES, WALL_RANGE};
pub use model::{
    accuracy, class_density, classify, fit_context_model, Classification, ContextError, ContextLabel, ContextModel,
    GaussianComponent, LabeledSample, Posterior, DEFAULT_LAMBDA, FEATURE_SCHEMA_VERSION,
};

/// Seed of the dataset the bundled model was trained on.
pub const BUNDLED_DATASET_SEED: u64 = 7;

const BUNDLED_MODEL: &str = include_str!("../../data/context_model.json");

/// Model trained on `generate_dataset(BUNDLED_DATASET_SEED, 500)` with the
/// default regularization.
pub fn bundled_model() -> ContextModel {
    ContextModel::from_json(BUNDLED_MODEL).expect("bundled context model is valid")
}

/// Rebuilds the bundled model from scratch.
pub fn train_bundled_model() -> ContextModel {
    let data = generate_dataset(BUNDLED_DATASET_SEED, DEFAULT_SAMPLES_PER_LABEL);
    fit_context_model(&data, DEFAULT_LAMBDA, BUNDLED_DATASET_SEED).expect("synthetic dataset is well formed")
}
