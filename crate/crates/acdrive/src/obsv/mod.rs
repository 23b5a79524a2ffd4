//! Observability analysis: closed-form matrices and determinants, geometric
//! margins, SVD rank analysis and the finite-difference Lie-derivative
//! oracle for both machine families.

pub(crate) mod im;
mod oracle;
mod rank;
mod report;
pub(crate) mod sm;

pub use im::{im_delta, im_delta_terms, im_geometric_margin, im_obsv_matrix, ImMargin};
pub use oracle::{im_lie_oracle, sm_lie_oracle, DEFAULT_FD_STEP};
pub use rank::{rank_analysis, RankAnalysis, DEFAULT_RANK_TOL};
pub use report::{analyze_trajectory, ObservabilityReport, ReportSummary, SampleReport};
pub use sm::{
    sm_delta, sm_dq_rates, sm_geometric_margin, sm_observability_vector, sm_obsv_matrix, DqRates,
    ObservabilityVector, SmDelta, SmMargin, SmObservability,
};

pub use im::scaled_state6 as im_scaled_state;
