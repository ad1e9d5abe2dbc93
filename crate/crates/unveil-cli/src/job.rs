//! Validated batch jobs and their runner.
//!
//! Every input file is processed independently: a failure is reported as a
//! JSON record and the batch continues, with a nonzero exit at the end if
//! anything failed. One JSON object per file goes to standard output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;
use unveil::color::{hsv_to_rgb, rgb_to_hsv};
use unveil::enhance::{
    auto_p, brighten, clarify_pipeline, inv_sqrt_clarify, percentile_stretch, psnr, ClarifyFilter,
    ClarifyParams, LlieParams,
};
use unveil::filters::{
    box_filter, clahe, edge_aware_smooth, edge_aware_smooth_rgb, gaussian_blur, guided_filter,
    ClaheParams, EdgeAwareParams, GuidedFilterParams,
};
use unveil::{load_image, save_image, RgbImage};

#[derive(Debug, Clone)]
pub enum Exponent {
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone)]
pub enum FilterKind {
    Guided(GuidedFilterParams),
    EdgeAware { params: EdgeAwareParams, rgb: bool },
    Clahe(ClaheParams),
    Box { radius: usize },
    Gaussian { sigma: f64 },
}

#[derive(Debug, Clone)]
pub enum Action {
    Llie {
        p: Exponent,
        r: f64,
        gf: GuidedFilterParams,
    },
    Dehaze(Box<ClarifyParams>),
    Enhance {
        gf: GuidedFilterParams,
        stretch: Option<(f64, f64)>,
    },
    Filter(FilterKind),
    Metrics {
        psnr: bool,
    },
}

impl Action {
    pub fn command_word(&self) -> &'static str {
        match self {
            Action::Llie { .. } => "llie",
            Action::Dehaze(_) => "dehaze",
            Action::Enhance { .. } => "enhance",
            Action::Filter(_) => "filter",
            Action::Metrics { .. } => "metrics",
        }
    }
}

#[derive(Debug)]
pub struct Job {
    pub action: Action,
    pub inputs: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

impl Job {
    /// Rejects inconsistent flag combinations before any file is touched.
    pub fn validate(&self) -> Result<(), String> {
        if self.inputs.is_empty() {
            return Err("no input files".into());
        }
        if self.output.is_some() && self.inputs.len() > 1 {
            return Err("-o requires exactly one input; use --out-dir for batches".into());
        }
        if self.output.is_some() && self.out_dir.is_some() {
            return Err("-o and --out-dir are mutually exclusive".into());
        }
        match &self.action {
            Action::Llie { p, r, gf } => {
                if let Exponent::Fixed(p) = p {
                    if p.is_nan() || *p <= 0.0 || *p > 1.0 {
                        return Err(format!("--p {p} outside (0, 1]"));
                    }
                }
                if r.is_nan() || *r < 0.0 {
                    return Err(format!("--r {r} must be non-negative"));
                }
                gf.validate().map_err(|e| e.to_string())?;
            }
            Action::Dehaze(params) => params.validate().map_err(|e| e.to_string())?,
            Action::Enhance { gf, stretch } => {
                gf.validate().map_err(|e| e.to_string())?;
                if let Some((lo, hi)) = stretch {
                    if *lo < 0.0 || *hi > 100.0 || lo >= hi {
                        return Err(format!("--stretch {lo},{hi} must satisfy 0 <= lo < hi <= 100"));
                    }
                }
            }
            Action::Filter(kind) => match kind {
                FilterKind::Guided(gf) => gf.validate().map_err(|e| e.to_string())?,
                FilterKind::EdgeAware { params, .. } => {
                    params.validate().map_err(|e| e.to_string())?
                }
                FilterKind::Clahe(params) => params.validate().map_err(|e| e.to_string())?,
                FilterKind::Box { radius } => {
                    if *radius < 1 {
                        return Err("--radius must be >= 1".into());
                    }
                }
                FilterKind::Gaussian { sigma } => {
                    if sigma.is_nan() || *sigma <= 0.0 {
                        return Err("--sigma-s must be positive for the gaussian filter".into());
                    }
                }
            },
            Action::Metrics { .. } => {
                if self.inputs.len() != 2 {
                    return Err("metrics takes exactly two images".into());
                }
            }
        }
        Ok(())
    }

    /// Processes every input; returns true when all files succeeded.
    pub fn run(&self) -> bool {
        if let Action::Metrics { psnr: want_psnr } = &self.action {
            return self.run_metrics(*want_psnr);
        }
        let mut all_ok = true;
        for input in &self.inputs {
            let started = Instant::now();
            match self.process_one(input) {
                Ok((output, before, after, p_used)) => {
                    let mut record = json!({
                        "input": input,
                        "output": output,
                        "mean_v_before": before,
                        "mean_v_after": after,
                        "wall_ms": started.elapsed().as_secs_f64() * 1e3,
                    });
                    if let Some(p) = p_used {
                        record["p"] = json!(p);
                    }
                    println!("{record}");
                }
                Err(e) => {
                    all_ok = false;
                    println!("{}", json!({ "input": input, "error": e }));
                }
            }
        }
        all_ok
    }

    fn run_metrics(&self, want_psnr: bool) -> bool {
        let (a_path, b_path) = (&self.inputs[0], &self.inputs[1]);
        let result = (|| -> Result<f64, String> {
            let a = load_image(a_path).map_err(|e| e.to_string())?;
            let b = load_image(b_path).map_err(|e| e.to_string())?;
            psnr(&a, &b).map_err(|e| e.to_string())
        })();
        match result {
            Ok(db) => {
                let mut record = json!({ "input": a_path, "reference": b_path });
                if want_psnr {
                    record["psnr_db"] = json!(db);
                }
                println!("{record}");
                true
            }
            Err(e) => {
                println!("{}", json!({ "input": a_path, "reference": b_path, "error": e }));
                false
            }
        }
    }

    /// Returns (output path, mean V before, mean V after, exponent used).
    fn process_one(&self, input: &Path) -> Result<(PathBuf, f64, f64, Option<f64>), String> {
        let img = load_image(input).map_err(|e| e.to_string())?;
        let mean_before = rgb_to_hsv(&img).v().mean_value().map_err(|e| e.to_string())?;
        let (result, p_used) = self.apply(&img, mean_before).map_err(|e| e.to_string())?;
        let mean_after = rgb_to_hsv(&result)
            .v()
            .mean_value()
            .map_err(|e| e.to_string())?;
        let output = self.output_path(input);
        if let Some(dir) = output.parent() {
            if !dir.as_os_str().is_empty() && !dir.exists() {
                std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {dir:?}: {e}"))?;
            }
        }
        save_image(&result, &output).map_err(|e| e.to_string())?;
        Ok((output, mean_before, mean_after, p_used))
    }

    fn apply(&self, img: &RgbImage, mean_v: f64) -> unveil::Result<(RgbImage, Option<f64>)> {
        match &self.action {
            Action::Llie { p, r, gf } => {
                let p_eff = match p {
                    Exponent::Auto => auto_p(mean_v)?,
                    Exponent::Fixed(p) => *p,
                };
                let params = LlieParams {
                    p: p_eff,
                    r: *r,
                    auto_p: false,
                };
                Ok((brighten(img, &params, gf)?, Some(p_eff)))
            }
            Action::Dehaze(params) => Ok((clarify_pipeline(img, params)?, None)),
            Action::Enhance { gf, stretch } => {
                let mut out = inv_sqrt_clarify(img, &ClarifyFilter::Guided(*gf))?;
                if let Some((lo, hi)) = stretch {
                    out = percentile_stretch(&out, *lo, *hi)?;
                }
                Ok((out, None))
            }
            Action::Filter(kind) => Ok((apply_filter(img, kind)?, None)),
            Action::Metrics { .. } => unreachable!("metrics handled separately"),
        }
    }

    fn output_path(&self, input: &Path) -> PathBuf {
        if let Some(path) = &self.output {
            return path.clone();
        }
        let stem = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "out".into());
        let name = format!("{stem}.{}.png", self.action.command_word());
        let dir = self
            .out_dir
            .clone()
            .or_else(|| input.parent().map(Path::to_path_buf))
            .unwrap_or_default();
        dir.join(name)
    }
}

/// Runs exactly one filter on the value channel (or on RGB for the
/// edge-aware filter when requested).
pub fn apply_filter(img: &RgbImage, kind: &FilterKind) -> unveil::Result<RgbImage> {
    if let FilterKind::EdgeAware { params, rgb: true } = kind {
        return Ok(edge_aware_smooth_rgb(img, params));
    }
    let hsv = rgb_to_hsv(img);
    let v = match kind {
        FilterKind::Guided(gf) => guided_filter(hsv.v(), hsv.v(), gf)?,
        FilterKind::EdgeAware { params, .. } => edge_aware_smooth(hsv.v(), params),
        FilterKind::Clahe(params) => clahe(hsv.v(), params),
        FilterKind::Box { radius } => box_filter(hsv.v(), *radius),
        FilterKind::Gaussian { sigma } => gaussian_blur(hsv.v(), *sigma),
    };
    Ok(hsv_to_rgb(&hsv.with_v(v.clamp01())?))
}
