use std::io::Read as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use frame_forge::catalog::{catalog, NAMES};
use frame_forge::json::{parse_bundle, Bundle, FunctionDto, PeriodicSetDto, SCHEMA_VERSION};
use frame_forge::naimark::{
    check_projection_conditions, is_maximal, maximalize, project, MaximalizationChoices,
};
use frame_forge::scaling::{is_scaling, Verdict};
use frame_forge::unimodular::delta_periodic;
use frame_forge::wavelet::{is_parseval, synthesize, Provenance, Wavelet};
use frame_forge::{
    Cval, Dyadic, FrameError, Interval, PeriodicSet, PeriodicStepFunction, StepFunction,
};

#[derive(Parser)]
#[command(name = "frame-forge", version, about = "Exact Fourier-side construction and verification of dyadic Parseval frame wavelets")]
struct Cli {
    /// Required window exponent of line-function inputs (inputs carry their
    /// own; a mismatch is rejected).
    #[arg(long, global = true, default_value_t = 4)]
    window_exp: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List built-in examples, or emit one as a bundle
    Catalog { name: Option<String> },
    /// Check the scaling axioms S1–S3 and maximality
    VerifyScaling { input: String },
    /// Build ψ̂ from a scaling function and unimodular choices μ₀, μ₁
    Synthesize {
        #[arg(long)]
        scaling: String,
        #[arg(long, default_value = "one")]
        mu0: String,
        #[arg(long, default_value = "one")]
        mu1: String,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Theorem-1 verification: Calderón + t_q (+ telescoping when provenance is present)
    VerifyWavelet {
        input: String,
        #[arg(long, default_value_t = 9)]
        tq_range: i64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Also report ‖ψ‖²
        #[arg(long)]
        norm_check: bool,
    },
    /// Restrict a function to E + ℤ
    Project {
        #[arg(long)]
        scaling: String,
        #[arg(long)]
        set: String,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// The three projection-theorem conditions for (φ*, m₀*, E)
    CheckProjection {
        #[arg(long)]
        scaling: String,
        #[arg(long)]
        set: String,
        /// Halving-depth cap for condition 1 (default: derived from the window)
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Extend a non-maximal scaling function to a maximal one
    Maximalize {
        #[arg(long)]
        scaling: String,
        /// Unimodular phase on the Smith–Barnwell extension stripe
        #[arg(long)]
        nu: Option<String>,
        /// Unit pair on the left-over split, as re,im,re,im
        #[arg(long)]
        pair: Option<String>,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Gauge-transport a synthesized wavelet by (μ, ν) with σ = δ(μ)
    Gauge {
        #[arg(long)]
        wavelet: String,
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        nu: Option<String>,
        /// Generate random ±1-valued (μ, ν) on the 2⁻³ grid instead
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Emit plot rows over the canonical partition
    ExportPlot {
        input: String,
        #[arg(short, long, default_value = "-")]
        output: String,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Build the extended filter pair (m₀ on S̃, m₁) from a scaling function
    ExtendFilter {
        #[arg(long)]
        scaling: String,
        #[arg(long, default_value = "one")]
        mu0: String,
        #[arg(long, default_value = "one")]
        mu1: String,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Check pointwise unitarity of the filter matrix
    CheckFp {
        #[arg(long)]
        scaling: String,
        #[arg(long, default_value = "one")]
        mu0: String,
        #[arg(long, default_value = "one")]
        mu1: String,
    },
}

/// exit 0 = all verdicts pass, 1 = a verification failed, 2 = invalid input
enum Outcome {
    Pass,
    Fail,
}

fn read_input(arg: &str) -> Result<String, FrameError> {
    if arg == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| FrameError::Invalid(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| FrameError::Invalid(format!("cannot read '{arg}': {e}")))
    }
}

fn load_bundle(arg: &str) -> Result<Bundle, FrameError> {
    if NAMES.contains(&arg) {
        return Ok(Bundle::new(FunctionDto::from(&catalog(arg)?)));
    }
    parse_bundle(&read_input(arg)?)
}

fn load_line(arg: &str, window_exp: u32) -> Result<StepFunction, FrameError> {
    let f = StepFunction::try_from(load_bundle(arg)?.function)?;
    if f.window_exp() != window_exp {
        return Err(FrameError::WindowMismatch(f.window_exp(), window_exp));
    }
    Ok(f)
}

/// "one" | catalog/file/stdin bundle holding a 1-periodic function.
fn load_periodic(arg: &str) -> Result<PeriodicStepFunction, FrameError> {
    if arg == "one" {
        return Ok(PeriodicStepFunction::one());
    }
    PeriodicStepFunction::try_from(load_bundle(arg)?.function)
}

fn load_set(arg: &str) -> Result<PeriodicSet, FrameError> {
    let text = read_input(arg)?;
    let dto: PeriodicSetDto = serde_json::from_str(&text)
        .map_err(|e| FrameError::Invalid(format!("malformed set JSON: {e}")))?;
    PeriodicSet::try_from(dto)
}

fn sha(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn hash_value(v: &Value) -> String {
    sha(&serde_json::to_string(v).expect("serializable"))
}

fn dy(d: Dyadic) -> Value {
    json!({"num": d.num(), "exp": d.exp()})
}

fn verdict_value(v: &Verdict) -> Value {
    json!({"pass": v.pass, "witness": v.witness})
}

fn emit(report: &Value) {
    println!("{}", serde_json::to_string_pretty(report).expect("serializable"));
}

fn write_out(output: &Option<String>, text: &str) -> Result<(), FrameError> {
    match output.as_deref() {
        None | Some("-") => {
            println!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| FrameError::Invalid(format!("cannot write '{path}': {e}"))),
    }
}

fn base_report(command: &str, inputs: Value) -> Value {
    json!({
        "ff-schema": SCHEMA_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "inputs": inputs,
    })
}

fn verified_pair(
    phi_hat: &StepFunction,
) -> Result<frame_forge::scaling::ScalingPair, FrameError> {
    let pair = is_scaling(phi_hat)?;
    if !pair.is_scaling_function() {
        return Err(FrameError::Invalid(format!(
            "input is not a scaling function: S1 {:?}, S2 {:?}, S3 {:?}",
            pair.s1.witness, pair.s2.witness, pair.s3.witness
        )));
    }
    Ok(pair)
}

/// Random μ ∈ 𝓜 with δ_μ = ν: ±1 signs on the outer octave seed block,
/// propagated by the octave induction.
fn random_mu(seed: u64, window_exp: u32, nu: &PeriodicStepFunction) -> Result<StepFunction, FrameError> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let half_edge = 1i64 << (window_exp.saturating_sub(1) + 3);
    let mut pieces: Vec<frame_forge::Piece> = Vec::new();
    for k in (-2 * half_edge..-half_edge).chain(half_edge..2 * half_edge) {
        pieces.push(frame_forge::Piece {
            iv: Interval {
                a: Dyadic::new(k, 3),
                b: Dyadic::new(k + 1, 3),
            },
            v: if rng.gen::<bool>() { Cval::ONE } else { Cval::ONE.neg() },
        });
    }
    let alpha0 = StepFunction::from_pieces(Dyadic::ZERO, window_exp, pieces)?;
    let alpha = frame_forge::unimodular::build_alpha(nu, &alpha0, window_exp as i32, None)?;
    Ok(alpha.as_line()?.clone())
}

fn random_signs_periodic(seed: u64) -> PeriodicStepFunction {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let pieces = (0..8i64)
        .map(|k| frame_forge::Piece {
            iv: Interval {
                a: Dyadic::new(k, 3),
                b: Dyadic::new(k + 1, 3),
            },
            v: if rng.gen::<bool>() { Cval::ONE } else { Cval::ONE.neg() },
        })
        .collect();
    PeriodicStepFunction::from_pieces(pieces).expect("grid pieces")
}

fn wavelet_from_bundle(b: &Bundle) -> Result<Wavelet, FrameError> {
    let psi_hat = StepFunction::try_from(b.function.clone())?;
    let provenance = match (&b.phi, &b.m0, &b.m1) {
        (Some(phi), Some(m0), Some(m1)) => Some(Provenance {
            phi_hat: StepFunction::try_from(phi.clone())?,
            m0: PeriodicStepFunction::try_from(m0.clone())?,
            m1: PeriodicStepFunction::try_from(m1.clone())?,
            m1_has_char: b.m1_has_char.unwrap_or(false),
        }),
        _ => None,
    };
    Ok(Wavelet { psi_hat, provenance })
}

fn wavelet_bundle(w: &Wavelet) -> Bundle {
    let mut b = Bundle::new(FunctionDto::from(&w.psi_hat));
    if let Some(p) = &w.provenance {
        b.phi = Some(FunctionDto::from(&p.phi_hat));
        b.m0 = Some(FunctionDto::from(&p.m0));
        b.m1 = Some(FunctionDto::from(&p.m1));
        b.m1_has_char = Some(p.m1_has_char);
    }
    b
}

fn run(cli: Cli) -> Result<Outcome, FrameError> {
    let w = cli.window_exp;
    match cli.command {
        Command::Catalog { name } => {
            match name {
                None => {
                    let report = json!({
                        "ff-schema": SCHEMA_VERSION,
                        "tool_version": env!("CARGO_PKG_VERSION"),
                        "command": "catalog",
                        "entries": NAMES,
                    });
                    emit(&report);
                }
                Some(name) => {
                    let f = catalog(&name)?;
                    let b = Bundle::new(FunctionDto::from(&f));
                    write_out(&None, &serde_json::to_string_pretty(&b).expect("serializable"))?;
                }
            }
            Ok(Outcome::Pass)
        }
        Command::VerifyScaling { input } => {
            let phi = load_line(&input, w)?;
            let pair = is_scaling(&phi)?;
            let maximal = if pair.is_scaling_function() {
                let (m, witness) = is_maximal(&phi)?;
                json!({"pass": m, "witness": witness.map(|iv| json!({"a": dy(iv.a), "b": dy(iv.b)}))})
            } else {
                Value::Null
            };
            let mut report = base_report(
                "verify-scaling",
                json!({"scaling": hash_value(&serde_json::to_value(FunctionDto::from(&phi)).unwrap())}),
            );
            report["verdicts"] = json!({
                "s1": verdict_value(&pair.s1),
                "s2": verdict_value(&pair.s2),
                "s3": verdict_value(&pair.s3),
                "is_scaling_function": pair.is_scaling_function(),
                "is_maximal": maximal,
            });
            emit(&report);
            Ok(if pair.is_scaling_function() {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
        Command::Synthesize {
            scaling,
            mu0,
            mu1,
            output,
        } => {
            let phi = load_line(&scaling, w)?;
            let pair = verified_pair(&phi)?;
            let fp = frame_forge::filterbank::build_filter_pair(
                &pair.m0,
                &load_periodic(&mu0)?,
                &load_periodic(&mu1)?,
                &pair.c,
            )?;
            let wav = synthesize(&pair, &fp.m1, fp.m1_has_char)?;
            let b = wavelet_bundle(&wav);
            write_out(&output, &serde_json::to_string_pretty(&b).expect("serializable"))?;
            Ok(Outcome::Pass)
        }
        Command::VerifyWavelet {
            input,
            tq_range,
            tol,
            norm_check,
        } => {
            let bundle = load_bundle(&input)?;
            let wav = wavelet_from_bundle(&bundle)?;
            if wav.psi_hat.window_exp() != w {
                return Err(FrameError::WindowMismatch(wav.psi_hat.window_exp(), w));
            }
            let r = is_parseval(&wav, tq_range, tol)?;
            let mut report = base_report(
                "verify-wavelet",
                json!({"wavelet": hash_value(&serde_json::to_value(&bundle).unwrap())}),
            );
            report["calderon"] = json!({
                "max_dev": r.calderon_max_dev,
                "witness": r.calderon_witness.map(dy),
            });
            report["tq"] = Value::Array(
                r.tq.iter()
                    .map(|e| {
                        json!({"q": e.q, "max_dev": e.max_dev, "witness": e.witness.map(dy)})
                    })
                    .collect(),
            );
            report["telescoping_max_dev"] = json!(r.telescoping_max_dev);
            report["tol"] = json!(r.tol);
            report["parseval"] = json!(r.parseval_verdict);
            if norm_check {
                report["norm_sq"] = json!(wav.psi_hat.norm_sq());
            }
            emit(&report);
            Ok(if r.parseval_verdict {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
        Command::Project {
            scaling,
            set,
            output,
        } => {
            let phi = load_line(&scaling, w)?;
            let e = load_set(&set)?;
            let p = project(&phi, &e)?;
            let b = Bundle::new(FunctionDto::from(&p));
            write_out(&output, &serde_json::to_string_pretty(&b).expect("serializable"))?;
            Ok(Outcome::Pass)
        }
        Command::CheckProjection {
            scaling,
            set,
            depth,
        } => {
            let phi = load_line(&scaling, w)?;
            let pair = verified_pair(&phi)?;
            let e = load_set(&set)?;
            let r = check_projection_conditions(&phi, &pair.m0, &e, depth)?;
            let mut report = base_report(
                "check-projection",
                json!({
                    "scaling": hash_value(&serde_json::to_value(FunctionDto::from(&phi)).unwrap()),
                    "set": hash_value(&serde_json::to_value(PeriodicSetDto::from(&e)).unwrap()),
                }),
            );
            report["verdicts"] = json!({
                "cond1": verdict_value(&r.cond1),
                "cond1_displayed": verdict_value(&r.cond1_displayed),
                "cond2": verdict_value(&r.cond2),
                "cond3": verdict_value(&r.cond3),
                "all_pass": r.all_pass(),
            });
            report["undecided"] = json!(r.undecided);
            emit(&report);
            Ok(if r.all_pass() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Maximalize {
            scaling,
            nu,
            pair,
            output,
        } => {
            let phi = load_line(&scaling, w)?;
            let sp = verified_pair(&phi)?;
            let mut choices = MaximalizationChoices::default();
            if let Some(nu) = nu {
                choices.nu = load_periodic(&nu)?;
            }
            if let Some(p) = pair {
                let parts: Vec<f64> = p
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| FrameError::Invalid(format!("bad --pair: {e}")))?;
                if parts.len() != 4 {
                    return Err(FrameError::Invalid(
                        "--pair takes four numbers: re,im,re,im".into(),
                    ));
                }
                choices.pair_value = (
                    Cval::new(parts[0], parts[1]),
                    Cval::new(parts[2], parts[3]),
                );
            }
            let m = maximalize(&sp, &choices)?;
            let mut b = Bundle::new(FunctionDto::from(&m.phi_star));
            b.m0 = Some(FunctionDto::from(&m.m0_star));
            b.already_maximal = Some(m.already_maximal);
            b.tail_bound = Some(m.tail_bound);
            write_out(&output, &serde_json::to_string_pretty(&b).expect("serializable"))?;
            Ok(Outcome::Pass)
        }
        Command::Gauge {
            wavelet,
            mu,
            nu,
            seed,
            output,
        } => {
            let bundle = load_bundle(&wavelet)?;
            let wav = wavelet_from_bundle(&bundle)?;
            let (mu, nu) = match (mu, nu, seed) {
                (Some(mu), Some(nu), None) => (load_line(&mu, w)?, load_periodic(&nu)?),
                (None, None, Some(seed)) => {
                    let nu = random_signs_periodic(seed.wrapping_add(1));
                    let mu_nu = random_signs_periodic(seed.wrapping_add(2));
                    (
                        random_mu(seed, wav.psi_hat.window_exp(), &mu_nu)?,
                        nu,
                    )
                }
                _ => {
                    return Err(FrameError::Invalid(
                        "gauge takes either --mu and --nu, or --seed".into(),
                    ))
                }
            };
            let sigma = delta_periodic(&mu)?;
            let gauged = frame_forge::wavelet::gauge_wavelet(&wav, &mu, &nu, &sigma)?;
            let b = wavelet_bundle(&gauged);
            write_out(&output, &serde_json::to_string_pretty(&b).expect("serializable"))?;
            Ok(Outcome::Pass)
        }
        Command::ExportPlot {
            input,
            output,
            format,
        } => {
            let bundle = load_bundle(&input)?;
            let rows: Vec<(Dyadic, Cval, Dyadic)> = match &bundle.function {
                FunctionDto::Step { .. } => {
                    let f = StepFunction::try_from(bundle.function.clone())?;
                    f.pieces()
                        .iter()
                        .map(|p| (p.iv.a, Cval::new(f.eval(p.iv.a).re, f.eval(p.iv.a).im), f.char_exp()))
                        .collect()
                }
                FunctionDto::PStep { .. } => {
                    let f = PeriodicStepFunction::try_from(bundle.function.clone())?;
                    f.pieces()
                        .iter()
                        .map(|p| (p.iv.a, p.v, Dyadic::ZERO))
                        .collect()
                }
            };
            let text = match format.as_str() {
                "csv" => {
                    let mut s = String::from("xi_num,xi_exp,re,im,abs");
                    for (a, v, _) in &rows {
                        let z = v.to_complex();
                        s.push_str(&format!(
                            "\n{},{},{},{},{}",
                            a.num(),
                            a.exp(),
                            z.re,
                            z.im,
                            v.modulus()
                        ));
                    }
                    s
                }
                "json" => serde_json::to_string_pretty(&Value::Array(
                    rows.iter()
                        .map(|(a, v, _)| {
                            let z = v.to_complex();
                            json!({"xi": dy(*a), "re": z.re, "im": z.im, "abs": v.modulus()})
                        })
                        .collect(),
                ))
                .expect("serializable"),
                other => {
                    return Err(FrameError::Invalid(format!(
                        "unknown format '{other}' (expected json or csv)"
                    )))
                }
            };
            write_out(&Some(output), &text)?;
            Ok(Outcome::Pass)
        }
        Command::ExtendFilter {
            scaling,
            mu0,
            mu1,
            output,
        } => {
            let phi = load_line(&scaling, w)?;
            let pair = verified_pair(&phi)?;
            let fp = frame_forge::filterbank::build_filter_pair(
                &pair.m0,
                &load_periodic(&mu0)?,
                &load_periodic(&mu1)?,
                &pair.c,
            )?;
            let mut b = Bundle::new(FunctionDto::from(&fp.m0));
            b.m1 = Some(FunctionDto::from(&fp.m1));
            b.m1_has_char = Some(fp.m1_has_char);
            write_out(&output, &serde_json::to_string_pretty(&b).expect("serializable"))?;
            Ok(Outcome::Pass)
        }
        Command::CheckFp { scaling, mu0, mu1 } => {
            let phi = load_line(&scaling, w)?;
            let pair = verified_pair(&phi)?;
            let fp = frame_forge::filterbank::build_filter_pair(
                &pair.m0,
                &load_periodic(&mu0)?,
                &load_periodic(&mu1)?,
                &pair.c,
            )?;
            let r = frame_forge::filterbank::check_fp(&fp);
            let mut report = base_report(
                "check-fp",
                json!({"scaling": hash_value(&serde_json::to_value(FunctionDto::from(&phi)).unwrap())}),
            );
            report["unitary"] = json!(r.unitary);
            report["max_defect"] = json!(r.max_defect);
            report["witness"] = json!(r.witness.map(dy));
            emit(&report);
            Ok(if r.unitary { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli);
    eprintln!("wall_time_ms: {}", start.elapsed().as_millis());
    match result {
        Ok(Outcome::Pass) => ExitCode::from(0),
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
