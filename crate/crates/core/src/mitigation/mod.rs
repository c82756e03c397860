//! Zero-noise extrapolation: error-strength estimation, fits, readout
//! mitigation and the two end-to-end pipelines.

mod epsilon;
mod fit;
mod pipeline;
mod readout;

pub use epsilon::{depolarizing_a, epsilon_general, estimate_epsilon, EpsilonBranch, EpsilonEstimate};
pub use fit::{
    fit_exponential, fit_exponential_or_linear, fit_linear, fit_scaling_rate, scaling_curve, FitModel, FitResult,
};
pub use pipeline::{
    measure_p0, measure_p0_exact, run_iczne, run_method, run_raw, run_szne, Execution, FitStatus, InverseTwirl,
    Method, ZneConfig, ZneDataPoint, ZneOutcome,
};
pub use readout::{readout_mitigate, MITIGATOR_LABEL};
