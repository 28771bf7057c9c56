//! Discrimination and calibration metrics with bootstrap intervals.

mod bootstrap;
mod calibration;
mod discrimination;

pub use bootstrap::{bootstrap_ci, empirical_quantile, BootstrapConfig, BootstrapInterval};
pub use calibration::{
    calibration_bins, calibration_report, citl_and_slope, clopper_pearson, CalibrationBin,
    CalibrationReport, ClassCalibration, RecalibrationFit, ThresholdCalibration,
};
pub use discrimination::{accuracy, auc, classify, probabilistic_index, qwk};
