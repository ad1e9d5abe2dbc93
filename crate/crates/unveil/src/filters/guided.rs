use crate::error::{Error, Result};
use crate::filters::box_filter::box_filter;
use crate::plane::Plane;

/// Parameters of the guided filter: window half-size and the regularization
/// of the per-window linear model (in squared intensity units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidedFilterParams {
    pub radius: usize,
    pub eps: f64,
}

impl Default for GuidedFilterParams {
    fn default() -> Self {
        // 5x5 window; mirrors common guided-filter defaults.
        GuidedFilterParams {
            radius: 2,
            eps: 0.01,
        }
    }
}

impl GuidedFilterParams {
    pub fn new(radius: usize, eps: f64) -> Result<Self> {
        let params = GuidedFilterParams { radius, eps };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radius < 1 {
            return Err(Error::InvalidParameter(
                "guided filter radius must be >= 1".into(),
            ));
        }
        if !self.eps.is_finite() || self.eps <= 0.0 {
            return Err(Error::InvalidParameter(
                "guided filter eps must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Edge-preserving smoothing via a per-window linear model on the guide:
/// `a = cov(guide, input) / (var(guide) + eps)`, `b = mean(input) - a *
/// mean(guide)`, and the output averages `a * guide + b` over every window
/// covering the pixel. All means are box filters with partial-window
/// normalization; the output is not clamped.
pub fn guided_filter(input: &Plane, guide: &Plane, params: &GuidedFilterParams) -> Result<Plane> {
    if !input.same_dims(guide) {
        return Err(Error::DimensionMismatch(
            input.width(),
            input.height(),
            guide.width(),
            guide.height(),
        ));
    }
    params.validate()?;
    let r = params.radius;
    let mean_i = box_filter(input, r);
    let mean_g = box_filter(guide, r);
    let corr_gi = box_filter(&guide.zip_map(input, |g, i| g * i), r);
    let corr_gg = box_filter(&guide.zip_map(guide, |a, b| a * b), r);

    let cov_gi = corr_gi.zip_map(&mean_g.zip_map(&mean_i, |g, i| g * i), |c, m| c - m);
    let var_g = corr_gg.zip_map(&mean_g.zip_map(&mean_g, |a, b| a * b), |c, m| c - m);

    let eps = params.eps;
    let a = cov_gi.zip_map(&var_g, |cov, var| cov / (var + eps));
    let b = mean_i.zip_map(&a.zip_map(&mean_g, |a, g| a * g), |m, ag| m - ag);

    let mean_a = box_filter(&a, r);
    let mean_b = box_filter(&b, r);
    Ok(mean_a.zip_map(guide, |a, g| a * g).zip_map(&mean_b, |ag, b| ag + b))
}
