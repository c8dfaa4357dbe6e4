//! JSON wire format for the CLI: functions, sets, and bundles.
//!
//! Values carry an optional half-power exponent `hp` (value = (re + i·im)·2^{hp/2})
//! so that 1/√2-type amplitudes survive a round trip exactly; plain
//! {re, im} input is accepted with hp = 0.

use serde::{Deserialize, Serialize};

use crate::dyadic::{Dyadic, Interval, LineSet, PeriodicSet};
use crate::error::{FrameError, Result};
use crate::stepfn::{Cval, PeriodicStepFunction, Piece, StepFunction};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DyadicDto {
    pub num: i64,
    pub exp: u32,
}

impl From<Dyadic> for DyadicDto {
    fn from(d: Dyadic) -> DyadicDto {
        DyadicDto {
            num: d.num(),
            exp: d.exp(),
        }
    }
}

impl From<DyadicDto> for Dyadic {
    fn from(d: DyadicDto) -> Dyadic {
        Dyadic::new(d.num, d.exp)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IntervalDto {
    pub a: DyadicDto,
    pub b: DyadicDto,
}

impl From<Interval> for IntervalDto {
    fn from(iv: Interval) -> IntervalDto {
        IntervalDto {
            a: iv.a.into(),
            b: iv.b.into(),
        }
    }
}

impl TryFrom<IntervalDto> for Interval {
    type Error = FrameError;
    fn try_from(iv: IntervalDto) -> Result<Interval> {
        Interval::new(iv.a.into(), iv.b.into())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LineSetDto {
    pub window_exp: u32,
    pub intervals: Vec<IntervalDto>,
}

impl From<&LineSet> for LineSetDto {
    fn from(s: &LineSet) -> LineSetDto {
        LineSetDto {
            window_exp: s.window_exp,
            intervals: s.intervals().iter().map(|&iv| iv.into()).collect(),
        }
    }
}

impl TryFrom<LineSetDto> for LineSet {
    type Error = FrameError;
    fn try_from(s: LineSetDto) -> Result<LineSet> {
        let ivs: Result<Vec<Interval>> = s.intervals.into_iter().map(Interval::try_from).collect();
        LineSet::from_intervals(s.window_exp, ivs?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodicSetDto {
    pub intervals: Vec<IntervalDto>,
}

impl From<&PeriodicSet> for PeriodicSetDto {
    fn from(s: &PeriodicSet) -> PeriodicSetDto {
        PeriodicSetDto {
            intervals: s.intervals().iter().map(|&iv| iv.into()).collect(),
        }
    }
}

impl TryFrom<PeriodicSetDto> for PeriodicSet {
    type Error = FrameError;
    fn try_from(s: PeriodicSetDto) -> Result<PeriodicSet> {
        let ivs: Result<Vec<Interval>> = s.intervals.into_iter().map(Interval::try_from).collect();
        PeriodicSet::from_intervals(ivs?)
    }
}

fn is_zero_i32(x: &i32) -> bool {
    *x == 0
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PieceDto {
    pub a: DyadicDto,
    pub b: DyadicDto,
    pub re: f64,
    pub im: f64,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub hp: i32,
}

impl From<&Piece> for PieceDto {
    fn from(p: &Piece) -> PieceDto {
        PieceDto {
            a: p.iv.a.into(),
            b: p.iv.b.into(),
            re: p.v.to_complex().re / 2f64.powf(p.v.half_pow() as f64 / 2.0),
            im: p.v.to_complex().im / 2f64.powf(p.v.half_pow() as f64 / 2.0),
            hp: p.v.half_pow(),
        }
    }
}

impl TryFrom<PieceDto> for Piece {
    type Error = FrameError;
    fn try_from(p: PieceDto) -> Result<Piece> {
        Ok(Piece {
            iv: Interval::new(p.a.into(), p.b.into())?,
            v: Cval::with_half_pow(p.re, p.im, p.hp),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FunctionDto {
    #[serde(rename = "step")]
    Step {
        char_exp: DyadicDto,
        window_exp: u32,
        pieces: Vec<PieceDto>,
    },
    #[serde(rename = "pstep")]
    PStep { pieces: Vec<PieceDto> },
}

impl From<&StepFunction> for FunctionDto {
    fn from(f: &StepFunction) -> FunctionDto {
        FunctionDto::Step {
            char_exp: f.char_exp().into(),
            window_exp: f.window_exp(),
            pieces: f.pieces().iter().map(PieceDto::from).collect(),
        }
    }
}

impl From<&PeriodicStepFunction> for FunctionDto {
    fn from(f: &PeriodicStepFunction) -> FunctionDto {
        FunctionDto::PStep {
            pieces: f.pieces().iter().map(PieceDto::from).collect(),
        }
    }
}

impl TryFrom<FunctionDto> for StepFunction {
    type Error = FrameError;
    fn try_from(f: FunctionDto) -> Result<StepFunction> {
        match f {
            FunctionDto::Step {
                char_exp,
                window_exp,
                pieces,
            } => {
                let ps: Result<Vec<Piece>> = pieces.into_iter().map(Piece::try_from).collect();
                StepFunction::from_pieces(char_exp.into(), window_exp, ps?)
            }
            FunctionDto::PStep { .. } => Err(FrameError::Invalid(
                "expected a line step function, got a 1-periodic one".into(),
            )),
        }
    }
}

impl TryFrom<FunctionDto> for PeriodicStepFunction {
    type Error = FrameError;
    fn try_from(f: FunctionDto) -> Result<PeriodicStepFunction> {
        match f {
            FunctionDto::PStep { pieces } => {
                let ps: Result<Vec<Piece>> = pieces.into_iter().map(Piece::try_from).collect();
                PeriodicStepFunction::from_pieces(ps?)
            }
            FunctionDto::Step { .. } => Err(FrameError::Invalid(
                "expected a 1-periodic step function, got a line one".into(),
            )),
        }
    }
}

/// Top-level bundle: any function plus optional companions produced by the
/// pipelines (all readers take `function`, writers may attach more).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Bundle {
    #[serde(rename = "ff-schema")]
    pub schema: u32,
    pub function: FunctionDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<FunctionDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m0: Option<FunctionDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m1: Option<FunctionDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m1_has_char: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub already_maximal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
}

impl Bundle {
    pub fn new(function: FunctionDto) -> Bundle {
        Bundle {
            schema: SCHEMA_VERSION,
            function,
            phi: None,
            m0: None,
            m1: None,
            m1_has_char: None,
            already_maximal: None,
            tail_bound: None,
        }
    }
}

pub fn parse_bundle(text: &str) -> Result<Bundle> {
    let b: Bundle = serde_json::from_str(text)
        .map_err(|e| FrameError::Invalid(format!("malformed bundle JSON: {e}")))?;
    if b.schema != SCHEMA_VERSION {
        return Err(FrameError::Invalid(format!(
            "unsupported ff-schema {} (expected {SCHEMA_VERSION})",
            b.schema
        )));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::scaling::is_scaling;

    #[test]
    fn step_function_round_trip() {
        let f = catalog("psi0").unwrap().with_char(Dyadic::new(1, 1));
        let dto = FunctionDto::from(&f);
        let text = serde_json::to_string(&dto).unwrap();
        let back: FunctionDto = serde_json::from_str(&text).unwrap();
        let g = StepFunction::try_from(back).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn half_power_values_survive() {
        let pair = is_scaling(&catalog("phi_quarter").unwrap()).unwrap();
        let m = crate::naimark::maximalize(&pair, &Default::default()).unwrap();
        let dto = FunctionDto::from(&m.phi_star);
        let back =
            StepFunction::try_from(serde_json::from_str::<FunctionDto>(
                &serde_json::to_string(&dto).unwrap(),
            )
            .unwrap())
            .unwrap();
        assert_eq!(m.phi_star, back);

        let mdto = FunctionDto::from(&m.m0_star);
        let mback = PeriodicStepFunction::try_from(
            serde_json::from_str::<FunctionDto>(&serde_json::to_string(&mdto).unwrap()).unwrap(),
        )
        .unwrap();
        assert!(mback.approx_eq(&m.m0_star, 0.0));
    }

    #[test]
    fn schema_version_enforced() {
        let err = parse_bundle(r#"{"ff-schema":2,"function":{"kind":"pstep","pieces":[]}}"#);
        assert!(err.is_err());
    }
}
