//! Small trainable ordinal transformation models.
//!
//! `F(y_k | x) = F_Z(theta_k - x' beta)` with monotone intercepts obtained
//! from unconstrained raw parameters by a cumulative softplus. Models are
//! fitted by full-batch gradient descent on the mean NLL or RPS and serve as
//! ensemble members in synthetic experiments.

mod ensemble;
mod model;
mod simulate;
mod train;

pub use ensemble::{
    epistemic_band, make_members, make_members_with_seeds, quantile_predict_curve,
    quantile_predict_discrete, structure_check_pairs, EpistemicBand, MemberSet, StructurePair,
};
pub use model::{
    cumulative_softplus, inverse_cumulative_softplus, linear_predictor, predict,
    predict_coefficients, softplus, transformation_values, ModelKind, ToyModelParams, ToyModelSpec,
};
pub use simulate::{
    load_dataset_csv, preset, save_dataset_csv, simulate_ordinal, utk_sim_preset, Dataset,
    UTK_CLASS_COUNTS,
};
pub use train::{
    empirical_init, loss_gradient, mean_loss, train, train_with_validation, InitScheme, Loss,
    TrainConfig, TrainTrace,
};
