mod job;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use unveil::enhance::ClarifyParams;
use unveil::filters::{ClaheParams, EdgeAwareParams, GuidedFilterParams};

use job::{Action, Exponent, FilterKind, Job};

/// Brighten low-light images and clarify hazy, foggy, sand-dust, or
/// underwater photographs by reverse filtering. Inputs are 8-bit PNG or
/// binary PPM; one JSON record per processed file goes to standard output.
#[derive(Parser)]
#[command(name = "unveil", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct OutputOpts {
    /// Explicit output path (single input only; format from the extension).
    #[arg(short = 'o', value_name = "PATH")]
    output: Option<PathBuf>,
    /// Directory for derived `<stem>.<command>.png` output names.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct GuidedOpts {
    /// Guided filter window radius in pixels.
    #[arg(long, default_value_t = 2)]
    radius: usize,
    /// Guided filter regularization.
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
}

impl GuidedOpts {
    fn params(&self) -> GuidedFilterParams {
        GuidedFilterParams {
            radius: self.radius,
            eps: self.eps,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct StretchOpts {
    /// Stretch percentiles, written `lo,hi`.
    #[arg(long, value_name = "LO,HI", default_value = "1,99", value_parser = parse_stretch)]
    stretch: (f64, f64),
    /// Skip the percentile stretch entirely.
    #[arg(long)]
    no_stretch: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Brighten low-light images.
    Llie {
        #[arg(required = true)]
        inputs: Vec<String>,
        /// Brightening exponent in (0, 1], or `auto` to pick it from the
        /// mean value channel.
        #[arg(long, default_value = "auto")]
        p: String,
        /// Regularizer guarding the brightening division.
        #[arg(long, default_value_t = 0.01)]
        r: f64,
        #[command(flatten)]
        gf: GuidedOpts,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Clarify hazy, foggy, sand-dust, or underwater images.
    Dehaze {
        #[arg(required = true)]
        inputs: Vec<String>,
        /// Spatial sigma of the haze-simulating smoother.
        #[arg(long, default_value_t = 20.0)]
        sigma_s: f64,
        /// Range sigma of the haze-simulating smoother.
        #[arg(long, default_value_t = 0.4)]
        sigma_r: f64,
        /// Sharpen the value channel with CLAHE after the smoothing stage.
        #[arg(long)]
        clahe: bool,
        /// Skip the guided-filter enhancement stage.
        #[arg(long)]
        no_gf_stage: bool,
        #[command(flatten)]
        stretch: StretchOpts,
        #[command(flatten)]
        gf: GuidedOpts,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Sharpen and brighten with the guided-filter reverse step only.
    Enhance {
        #[arg(required = true)]
        inputs: Vec<String>,
        #[command(flatten)]
        stretch: StretchOpts,
        #[command(flatten)]
        gf: GuidedOpts,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Run a single filter on the value channel (debugging aid).
    Filter {
        /// One of: guided, amf, clahe, box, gaussian.
        name: String,
        #[arg(required = true)]
        inputs: Vec<String>,
        #[command(flatten)]
        gf: GuidedOpts,
        /// Spatial sigma (amf; also the gaussian filter's sigma).
        #[arg(long, default_value_t = 20.0)]
        sigma_s: f64,
        /// Range sigma (amf).
        #[arg(long, default_value_t = 0.4)]
        sigma_r: f64,
        /// For `amf`: filter the RGB channels jointly instead of V only.
        #[arg(long)]
        rgb: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Image quality metrics between two files.
    Metrics {
        a: String,
        b: String,
        /// Report peak signal-to-noise ratio in dB.
        #[arg(long)]
        psnr: bool,
    },
}

fn parse_stretch(text: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = text
        .split_once(',')
        .ok_or_else(|| "expected `lo,hi`".to_string())?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lo: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad hi: {e}"))?;
    if !(0.0..=100.0).contains(&lo) || !(0.0..=100.0).contains(&hi) || lo >= hi {
        return Err(format!("percentiles ({lo}, {hi}) must satisfy 0 <= lo < hi <= 100"));
    }
    Ok((lo, hi))
}

fn parse_exponent(text: &str) -> Result<Exponent, String> {
    if text.eq_ignore_ascii_case("auto") {
        return Ok(Exponent::Auto);
    }
    let p: f64 = text
        .parse()
        .map_err(|_| format!("--p must be a number in (0, 1] or `auto`, got `{text}`"))?;
    Ok(Exponent::Fixed(p))
}

/// Expands glob patterns; plain paths pass through untouched so missing
/// files are still reported per file later.
fn expand_inputs(raw: &[String]) -> Result<Vec<PathBuf>, String> {
    let mut inputs = Vec::new();
    for item in raw {
        if item.contains(['*', '?', '[']) {
            let matches: Vec<PathBuf> = glob::glob(item)
                .map_err(|e| format!("bad glob `{item}`: {e}"))?
                .filter_map(|m| m.ok())
                .collect();
            if matches.is_empty() {
                return Err(format!("glob `{item}` matched no files"));
            }
            inputs.extend(matches);
        } else {
            inputs.push(PathBuf::from(item));
        }
    }
    Ok(inputs)
}

fn build_job(command: Command) -> Result<Job, String> {
    let job = match command {
        Command::Llie {
            inputs,
            p,
            r,
            gf,
            out,
        } => Job {
            action: Action::Llie {
                p: parse_exponent(&p)?,
                r,
                gf: gf.params(),
            },
            inputs: expand_inputs(&inputs)?,
            output: out.output,
            out_dir: out.out_dir,
        },
        Command::Dehaze {
            inputs,
            sigma_s,
            sigma_r,
            clahe,
            no_gf_stage,
            stretch,
            gf,
            out,
        } => Job {
            action: Action::Dehaze(Box::new(ClarifyParams {
                sigma_s,
                sigma_r,
                use_clahe: clahe,
                clahe: ClaheParams::default(),
                stretch_lo: stretch.stretch.0,
                stretch_hi: stretch.stretch.1,
                apply_stretch: !stretch.no_stretch,
                apply_gf_stage: !no_gf_stage,
                gf: gf.params(),
                ..ClarifyParams::default()
            })),
            inputs: expand_inputs(&inputs)?,
            output: out.output,
            out_dir: out.out_dir,
        },
        Command::Enhance {
            inputs,
            stretch,
            gf,
            out,
        } => Job {
            action: Action::Enhance {
                gf: gf.params(),
                stretch: (!stretch.no_stretch).then_some(stretch.stretch),
            },
            inputs: expand_inputs(&inputs)?,
            output: out.output,
            out_dir: out.out_dir,
        },
        Command::Filter {
            name,
            inputs,
            gf,
            sigma_s,
            sigma_r,
            rgb,
            out,
        } => {
            let kind = match name.as_str() {
                "guided" => FilterKind::Guided(gf.params()),
                "amf" => FilterKind::EdgeAware {
                    params: EdgeAwareParams { sigma_s, sigma_r },
                    rgb,
                },
                "clahe" => FilterKind::Clahe(ClaheParams::default()),
                "box" => FilterKind::Box { radius: gf.radius },
                "gaussian" => FilterKind::Gaussian { sigma: sigma_s },
                other => {
                    return Err(format!(
                        "unknown filter `{other}` (expected guided, amf, clahe, box, or gaussian)"
                    ))
                }
            };
            Job {
                action: Action::Filter(kind),
                inputs: expand_inputs(&inputs)?,
                output: out.output,
                out_dir: out.out_dir,
            }
        }
        Command::Metrics { a, b, psnr } => Job {
            action: Action::Metrics { psnr },
            inputs: vec![PathBuf::from(a), PathBuf::from(b)],
            output: None,
            out_dir: None,
        },
    };
    job.validate()?;
    Ok(job)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let job = match build_job(cli.command) {
        Ok(job) => job,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    if job.run() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
