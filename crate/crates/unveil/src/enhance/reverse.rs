//! Reverse filtering for haze, fog, sand-dust, and underwater distortions.
//!
//! A smoothing filter with the right parameters simulates a haze veil; the
//! multiplicative fixed-point iteration `x_{k+1} = x_k * y / filter(x_k)`
//! approximately inverts it. One iteration followed by a square-root gamma
//! collapses to the closed form `y / sqrt(filter(y))`, which is what the
//! clarify operators apply to the HSV value channel.

use crate::color::{hsv_to_rgb, rgb_to_hsv, RgbImage};
use crate::enhance::stretch::percentile_stretch;
use crate::error::Result;
use crate::filters::{
    clahe, edge_aware_smooth, guided_filter, ClaheParams, EdgeAwareParams, GuidedFilterParams,
};
use crate::plane::Plane;

/// Floor applied to filter outputs before they appear in a denominator.
pub const DIVISION_FLOOR: f64 = 1e-6;

/// State of the multiplicative fixed-point iteration: the observed image
/// `y`, the current iterate, and the iteration index. The iterate starts
/// from `y` itself.
#[derive(Debug, Clone)]
pub struct GoldState {
    y: Plane,
    x_k: Plane,
    k: u32,
}

impl GoldState {
    pub fn new(y: Plane) -> Self {
        GoldState {
            x_k: y.clone(),
            y,
            k: 0,
        }
    }

    pub fn observed(&self) -> &Plane {
        &self.y
    }

    pub fn iterate(&self) -> &Plane {
        &self.x_k
    }

    pub fn iteration(&self) -> u32 {
        self.k
    }
}

/// One multiplicative fixed-point step `x_{k+1} = x_k * y / filter(x_k)`,
/// with the filter output floored at [`DIVISION_FLOOR`] before dividing.
pub fn gold_step(state: &GoldState, filter: impl Fn(&Plane) -> Plane) -> GoldState {
    let filtered = filter(&state.x_k);
    let next = state
        .x_k
        .zip_map(&state.y, |x, y| x * y)
        .zip_map(&filtered, |xy, f| xy / f.max(DIVISION_FLOOR));
    GoldState {
        y: state.y.clone(),
        x_k: next,
        k: state.k + 1,
    }
}

/// The smoothing filter driving a clarify step.
#[derive(Debug, Clone, PartialEq)]
pub enum ClarifyFilter {
    /// Joint spatial/range Gaussian smoother (the haze-simulating filter).
    EdgeAware(EdgeAwareParams),
    /// Self-guided guided filter (the sharpening/brightening variant).
    Guided(GuidedFilterParams),
}

impl ClarifyFilter {
    pub fn apply(&self, p: &Plane) -> Plane {
        match self {
            ClarifyFilter::EdgeAware(params) => edge_aware_smooth(p, params),
            ClarifyFilter::Guided(params) => {
                guided_filter(p, p, params).expect("self-guidance shares dimensions")
            }
        }
    }
}

/// `v' = v / sqrt(max(filter(v), floor))` on the value channel, clamped to
/// `[0, 1]`; hue and saturation pass through. Equivalent to one
/// [`gold_step`] from `x_0 = y` followed by a square-root gamma correction.
pub fn inv_sqrt_clarify(img: &RgbImage, filter: &ClarifyFilter) -> Result<RgbImage> {
    let hsv = rgb_to_hsv(img);
    let v = reverse_gamma_plane(hsv.v(), filter, 0.5);
    Ok(hsv_to_rgb(&hsv.with_v(v)?))
}

/// One reverse-filtering step with an arbitrary gamma:
/// `((v^2 / max(filter(v), floor))^gamma)`, clamped. For `gamma = 1/2` this
/// is computed as `v / sqrt(...)` so the two spellings agree bit for bit.
fn reverse_gamma_plane(v: &Plane, filter: &ClarifyFilter, gamma: f64) -> Plane {
    let filtered = filter.apply(v);
    v.zip_map(&filtered, |v, f| {
        let den = f.max(DIVISION_FLOOR);
        let out = if gamma == 0.5 {
            v / den.sqrt()
        } else {
            (v * v / den).powf(gamma)
        };
        if out.is_finite() {
            out.clamp(0.0, 1.0)
        } else {
            0.0
        }
    })
}

/// Parameters of the full clarify pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct ClarifyParams {
    /// Spatial sigma of the haze-simulating smoother.
    pub sigma_s: f64,
    /// Range sigma of the haze-simulating smoother.
    pub sigma_r: f64,
    /// Gamma of the reverse step; 1/2 unless explicitly overridden.
    pub gamma: f64,
    /// Sharpen the value channel with CLAHE after the first reverse step.
    pub use_clahe: bool,
    pub clahe: ClaheParams,
    /// Percentile stretch bounds applied after each stage.
    pub stretch_lo: f64,
    pub stretch_hi: f64,
    pub apply_stretch: bool,
    /// Run the guided-filter enhancement stage after the smoothing stage.
    pub apply_gf_stage: bool,
    pub gf: GuidedFilterParams,
}

impl Default for ClarifyParams {
    fn default() -> Self {
        ClarifyParams {
            sigma_s: 20.0,
            sigma_r: 0.4,
            gamma: 0.5,
            use_clahe: false,
            clahe: ClaheParams::default(),
            stretch_lo: 1.0,
            stretch_hi: 99.0,
            apply_stretch: true,
            apply_gf_stage: true,
            gf: GuidedFilterParams::default(),
        }
    }
}

impl ClarifyParams {
    pub fn validate(&self) -> Result<()> {
        EdgeAwareParams {
            sigma_s: self.sigma_s,
            sigma_r: self.sigma_r,
        }
        .validate()?;
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return Err(crate::error::Error::InvalidParameter(
                "clarify gamma must be positive".into(),
            ));
        }
        self.gf.validate()?;
        self.clahe.validate()?;
        if self.apply_stretch {
            crate::enhance::stretch::validate_bounds(self.stretch_lo, self.stretch_hi)?;
        }
        Ok(())
    }
}

/// Haze/fog clarification: a reverse step against the edge-aware smoother,
/// optional CLAHE sharpening of the value channel, a percentile stretch, and
/// (by default) a second reverse step against the guided filter with its own
/// stretch.
pub fn clarify_pipeline(img: &RgbImage, params: &ClarifyParams) -> Result<RgbImage> {
    params.validate()?;
    let smoother = ClarifyFilter::EdgeAware(EdgeAwareParams {
        sigma_s: params.sigma_s,
        sigma_r: params.sigma_r,
    });

    // Stage 1: invert the haze-simulating smoother.
    let hsv = rgb_to_hsv(img);
    let mut v = reverse_gamma_plane(hsv.v(), &smoother, params.gamma);
    if params.use_clahe {
        v = clahe(&v, &params.clahe);
    }
    let mut out = hsv_to_rgb(&hsv.with_v(v)?);
    if params.apply_stretch {
        out = percentile_stretch(&out, params.stretch_lo, params.stretch_hi)?;
    }

    // Stage 2: the guided-filter variant sharpens and lifts dark areas.
    if params.apply_gf_stage {
        let hsv = rgb_to_hsv(&out);
        let v = reverse_gamma_plane(hsv.v(), &ClarifyFilter::Guided(params.gf), params.gamma);
        out = hsv_to_rgb(&hsv.with_v(v)?);
        if params.apply_stretch {
            out = percentile_stretch(&out, params.stretch_lo, params.stretch_hi)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_gray(w: usize, h: usize, c: f64) -> RgbImage {
        RgbImage::new(
            Plane::filled(w, h, c),
            Plane::filled(w, h, c),
            Plane::filled(w, h, c),
        )
        .unwrap()
    }

    fn random_plane(w: usize, h: usize, seed: u64) -> Plane {
        let mut state = seed | 1;
        let data: Vec<f64> = (0..w * h)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64
            })
            .collect();
        Plane::from_vec(w, h, data).unwrap()
    }

    #[test]
    fn gold_step_fixes_constants() {
        let state = GoldState::new(Plane::filled(8, 8, 0.4));
        let next = gold_step(&state, |p| {
            edge_aware_smooth(
                p,
                &EdgeAwareParams {
                    sigma_s: 2.0,
                    sigma_r: 0.2,
                },
            )
        });
        assert_eq!(next.iteration(), 1);
        for &v in next.iterate().as_slice() {
            assert!((v - 0.4).abs() < 1e-12);
        }
    }

    #[test]
    fn gold_step_with_identity_filter_returns_observed() {
        // Values sit above the division floor so the guard never engages.
        let y = random_plane(8, 8, 3).map(|v| 0.05 + 0.95 * v);
        let state = GoldState::new(y.clone());
        let next = gold_step(&state, Plane::clone);
        for (a, b) in next.iterate().as_slice().iter().zip(y.as_slice()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn gold_step_matches_elementwise_oracle() {
        let y = random_plane(16, 16, 17);
        let gf = GuidedFilterParams::default();
        let state = GoldState::new(y.clone());
        let next = gold_step(&state, |p| guided_filter(p, p, &gf).unwrap());
        let filtered = guided_filter(&y, &y, &gf).unwrap();
        for i in 0..y.len() {
            let expect =
                y.as_slice()[i] * y.as_slice()[i] / filtered.as_slice()[i].max(DIVISION_FLOOR);
            assert!((next.iterate().as_slice()[i] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn clarify_constant_applies_square_root() {
        let img = constant_gray(16, 16, 0.36);
        let out = inv_sqrt_clarify(
            &img,
            &ClarifyFilter::Guided(GuidedFilterParams::default()),
        )
        .unwrap();
        for &v in out.r().as_slice() {
            assert!((v - 0.6).abs() < 1e-12);
        }
    }

    #[test]
    fn clarify_white_is_identity() {
        let img = constant_gray(8, 8, 1.0);
        let out = inv_sqrt_clarify(
            &img,
            &ClarifyFilter::EdgeAware(EdgeAwareParams::default()),
        )
        .unwrap();
        for &v in out.g().as_slice() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn clarify_equals_sqrt_of_one_gold_iteration() {
        // Both routes computed independently from the same observed V plane.
        let mut y = random_plane(32, 32, 11);
        y = y.map(|v| 0.2 + 0.6 * v);
        let img = RgbImage::new(y.clone(), y.clone(), y.clone()).unwrap();
        for filter in [
            ClarifyFilter::EdgeAware(EdgeAwareParams {
                sigma_s: 4.0,
                sigma_r: 0.4,
            }),
            ClarifyFilter::Guided(GuidedFilterParams::default()),
        ] {
            let direct = inv_sqrt_clarify(&img, &filter).unwrap();
            let gold = gold_step(&GoldState::new(y.clone()), |p| filter.apply(p));
            for i in 0..y.len() {
                let via_gold = gold.iterate().as_slice()[i].sqrt().clamp(0.0, 1.0);
                let d = direct.r().as_slice()[i];
                assert!((d - via_gold).abs() < 1e-12, "{d} vs {via_gold}");
            }
        }
    }

    #[test]
    fn pipeline_constant_chains_square_roots() {
        // 0.25 -> 0.5 after the smoothing stage, -> sqrt(0.5) after the
        // guided stage; the stretch is degenerate on constants.
        let img = constant_gray(16, 16, 0.25);
        let params = ClarifyParams::default();
        let out = clarify_pipeline(&img, &params).unwrap();
        let expect = 0.5f64.sqrt();
        for &v in out.r().as_slice() {
            assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
        }
    }

    #[test]
    fn pipeline_is_deterministic() {
        let v = random_plane(24, 24, 41).map(|x| 0.5 * x + 0.3);
        let img = RgbImage::new(v.clone(), v.map(|x| x * 0.8), v).unwrap();
        let params = ClarifyParams {
            use_clahe: true,
            ..ClarifyParams::default()
        };
        assert_eq!(
            clarify_pipeline(&img, &params).unwrap(),
            clarify_pipeline(&img, &params).unwrap()
        );
    }

    #[test]
    fn pipeline_rejects_bad_gamma() {
        let img = constant_gray(4, 4, 0.5);
        let params = ClarifyParams {
            gamma: f64::NAN,
            ..ClarifyParams::default()
        };
        assert!(clarify_pipeline(&img, &params).is_err());
    }

    #[test]
    fn pipeline_reduces_to_single_stage_composition() {
        let mut img_v = random_plane(24, 24, 23);
        img_v = img_v.map(|v| 0.3 + 0.5 * v);
        let img = RgbImage::new(
            img_v.clone(),
            img_v.map(|v| (v * 0.9).clamp(0.0, 1.0)),
            img_v.map(|v| (v * 1.1).clamp(0.0, 1.0)),
        )
        .unwrap();
        let params = ClarifyParams {
            use_clahe: false,
            apply_gf_stage: false,
            ..ClarifyParams::default()
        };
        let via_pipeline = clarify_pipeline(&img, &params).unwrap();
        let filter = ClarifyFilter::EdgeAware(EdgeAwareParams {
            sigma_s: params.sigma_s,
            sigma_r: params.sigma_r,
        });
        let by_hand =
            percentile_stretch(&inv_sqrt_clarify(&img, &filter).unwrap(), 1.0, 99.0).unwrap();
        assert_eq!(via_pipeline, by_hand);
    }
}
