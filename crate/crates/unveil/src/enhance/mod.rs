//! Enhancement operators built on the filters: low-light brightening with
//! its forward darkening model and base/detail diagnostics, reverse-filtering
//! clarification for haze-like distortions, percentile stretching, and the
//! PSNR metric used by the recovery harnesses.

mod llie;
mod metrics;
mod reverse;
mod stretch;

pub use llie::{auto_p, base_detail_decompose, brighten, simulate_darkening, BaseDetail, LlieParams};
pub use metrics::{psnr, PSNR_CAP_DB};
pub use reverse::{
    clarify_pipeline, gold_step, inv_sqrt_clarify, ClarifyFilter, ClarifyParams, GoldState,
    DIVISION_FLOOR,
};
pub use stretch::percentile_stretch;
