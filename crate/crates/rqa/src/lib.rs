//! Recurrence quantification analysis for scalar time series.
//!
//! The pipeline: pick a lag at the first zero crossing of the
//! autocorrelation, delay-embed the series, then characterize the embedded
//! trajectory through per-diagonal recurrence frequencies, full-recurrence
//! line inventories, the total-recurrence power law (correlation dimension),
//! and recurrence plots. The O(T²) pair scans stream diagonal by diagonal
//! and never materialize a distance matrix.

mod dimension;
mod embedding;
mod error;
mod plot;
mod profile;

pub use dimension::{
    correlation_dimension, ln_gamma, regularized_incomplete_beta, student_t_two_sided_p,
    CorrelationDimension, RadiusSpec,
};
pub use embedding::{
    autocorr_first_zero, autocorrelation, delay_embed, sample_std, EmbeddedSeries,
    EmbeddingConfig, LagSelection,
};
pub use error::{Error, Result};
pub use plot::{recurrence_plot, RecurrencePlot, PLOT_POINT_GUARD};
pub use profile::{
    diagonal_profile, full_line_inventory, multi_radius_profiles, prob_full_recurrence,
    total_recurrence, DiagonalProfile, RecurrenceSummary,
};
