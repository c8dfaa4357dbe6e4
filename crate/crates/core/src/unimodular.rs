//! Unimodular step functions: the group 𝒰 of 1-periodic unimodular
//! functions, the subgroup 𝓜 = {α : δ_α ∈ 𝒰} of line functions whose
//! dyadic-dilation quotient is 1-periodic, the constructive octave builder
//! inverting δ, and the gauge action on scaling pairs.

use crate::dyadic::{Dyadic, Interval, LineSet};
use crate::error::{FrameError, Result};
use crate::stepfn::{mul_periodic, Cval, PeriodicStepFunction, Piece, StepFunction};

/// Tolerance for |value| = 1 checks.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Periodicity tag for a unimodular step function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Periodicity {
    /// Defined on the whole window, no periodicity assumed.
    Line,
    /// 1-periodic, stored on [0,1).
    One,
    /// 1/2-periodic, stored on [0,1) (invariant under +1/2).
    Half,
    /// 2-periodic: value at ξ is the stored function at ξ/2 mod 1.
    Two,
}

/// A unimodular step function with an explicit periodicity tag.
#[derive(Clone, Debug, PartialEq)]
pub enum UnimodularStep {
    Line(StepFunction),
    Periodic(Periodicity, PeriodicStepFunction),
}

fn check_unimodular_pieces<'a>(pieces: impl Iterator<Item = &'a Piece>) -> Result<()> {
    for p in pieces {
        let m = p.v.modulus();
        if (m - 1.0).abs() > UNIMODULAR_TOL {
            return Err(FrameError::NotUnimodular {
                point: p.iv.a,
                modulus: m,
            });
        }
    }
    Ok(())
}

/// Check |m| ≡ 1 on all of [0,1).
pub fn check_unimodular_periodic(m: &PeriodicStepFunction) -> Result<()> {
    if m.domain().measure() != Dyadic::ONE {
        return Err(FrameError::EmptySupport(
            "unimodular function must be defined on all of [0,1)".into(),
        ));
    }
    check_unimodular_pieces(m.pieces().iter())
}

/// Check |f| ≡ 1 on the whole window.
pub fn check_unimodular_line(f: &StepFunction) -> Result<()> {
    if f.support() != LineSet::window(f.window_exp()) {
        return Err(FrameError::EmptySupport(
            "unimodular line function must cover the window".into(),
        ));
    }
    if !f.char_exp().is_zero() {
        return Err(FrameError::Invalid(
            "unimodular step carries no character".into(),
        ));
    }
    check_unimodular_pieces(f.pieces().iter())
}

impl UnimodularStep {
    pub fn line(f: StepFunction) -> Result<UnimodularStep> {
        check_unimodular_line(&f)?;
        Ok(UnimodularStep::Line(f))
    }

    pub fn one_periodic(m: PeriodicStepFunction) -> Result<UnimodularStep> {
        check_unimodular_periodic(&m)?;
        Ok(UnimodularStep::Periodic(Periodicity::One, m))
    }

    pub fn half_periodic(m: PeriodicStepFunction) -> Result<UnimodularStep> {
        check_unimodular_periodic(&m)?;
        if !m.approx_eq(&m.shift_arg(Dyadic::new(1, 1)), UNIMODULAR_TOL) {
            return Err(FrameError::Invalid("not 1/2-periodic".into()));
        }
        Ok(UnimodularStep::Periodic(Periodicity::Half, m))
    }

    pub fn two_periodic(m: PeriodicStepFunction) -> Result<UnimodularStep> {
        check_unimodular_periodic(&m)?;
        Ok(UnimodularStep::Periodic(Periodicity::Two, m))
    }

    /// Constant 1 on the window.
    pub fn identity(window_exp: u32) -> UnimodularStep {
        UnimodularStep::Line(StepFunction::indicator(&LineSet::window(window_exp)))
    }

    pub fn periodicity(&self) -> Periodicity {
        match self {
            UnimodularStep::Line(_) => Periodicity::Line,
            UnimodularStep::Periodic(p, _) => *p,
        }
    }

    /// Value at a dyadic point, honoring the periodicity tag.
    pub fn eval(&self, x: Dyadic) -> Cval {
        match self {
            UnimodularStep::Line(f) => f.step_at(x),
            UnimodularStep::Periodic(Periodicity::Two, m) => m.step_at(x.mul_pow2(-1).fract()),
            UnimodularStep::Periodic(_, m) => m.step_at(x.fract()),
        }
    }

    /// Materialize as a line step function on the window.
    pub fn to_line(&self, window_exp: u32) -> Result<StepFunction> {
        match self {
            UnimodularStep::Line(f) => {
                if f.window_exp() != window_exp {
                    return Err(FrameError::WindowMismatch(f.window_exp(), window_exp));
                }
                Ok(f.clone())
            }
            UnimodularStep::Periodic(Periodicity::Two, m) => {
                // value m(ξ/2 mod 1): lift m to the half window and stretch
                let small = mul_periodic(
                    m,
                    &StepFunction::indicator(&LineSet::window(window_exp - 1)),
                );
                let lifted = StepFunction::from_pieces(
                    Dyadic::ZERO,
                    window_exp,
                    small.pieces().to_vec(),
                )?;
                lifted.dilate_inf(-1)
            }
            UnimodularStep::Periodic(_, m) => Ok(mul_periodic(
                m,
                &StepFunction::indicator(&LineSet::window(window_exp)),
            )),
        }
    }

    pub fn as_line(&self) -> Result<&StepFunction> {
        match self {
            UnimodularStep::Line(f) => Ok(f),
            _ => Err(FrameError::Invalid("expected a line unimodular step".into())),
        }
    }

    pub fn as_periodic(&self) -> Result<&PeriodicStepFunction> {
        match self {
            UnimodularStep::Periodic(_, m) => Ok(m),
            _ => Err(FrameError::Invalid("expected a periodic unimodular step".into())),
        }
    }

    pub fn multiply(&self, other: &UnimodularStep) -> Result<UnimodularStep> {
        match (self, other) {
            (UnimodularStep::Line(a), UnimodularStep::Line(b)) => {
                Ok(UnimodularStep::Line(a.multiply(b)?))
            }
            (UnimodularStep::Periodic(p, a), UnimodularStep::Periodic(q, b)) if p == q => {
                Ok(UnimodularStep::Periodic(*p, a.multiply(b)))
            }
            _ => Err(FrameError::Invalid(
                "cannot multiply unimodular steps with different periodicity".into(),
            )),
        }
    }

    pub fn conjugate(&self) -> UnimodularStep {
        match self {
            UnimodularStep::Line(f) => UnimodularStep::Line(f.conjugate()),
            UnimodularStep::Periodic(p, m) => UnimodularStep::Periodic(*p, m.conjugate()),
        }
    }
}

/// `δ_α(ξ) = α(2ξ)/α(ξ)`, computed on the half window where both factors
/// are defined. Division by a unimodular value is multiplication by its
/// conjugate.
pub fn delta(alpha: &StepFunction) -> Result<StepFunction> {
    check_unimodular_line(alpha)?;
    alpha.dilate_inf(1)?.multiply(&alpha.conjugate())
}

/// Fold `δ_α` into a 1-periodic function; errors if δ_α is not 1-periodic
/// on the half window (i.e. α ∉ 𝓜).
///
/// The quotient is undecidable below the finest resolved scale of α (the
/// octave induction toward 0 never terminates), so cells inside `(−r, r)`
/// are excluded from the check, where `r` is the smallest magnitude of an
/// interior breakpoint of α. The periodic representative is read off the
/// octave `[1, 2)`, which is unaffected by the near-zero convention.
pub fn delta_periodic(alpha: &StepFunction) -> Result<PeriodicStepFunction> {
    let w = alpha.window_exp();
    if w < 2 {
        return Err(FrameError::Invalid(
            "window too small for periodicity analysis (need window_exp >= 2)".into(),
        ));
    }
    let d = delta(alpha)?;
    let edge = Dyadic::ONE.mul_pow2(w as i32);
    let r = alpha
        .breakpoints()
        .into_iter()
        .map(|b| b.abs())
        .filter(|b| !b.is_zero() && *b < edge)
        .min()
        .unwrap_or(Dyadic::ZERO);
    // candidate period: δ_α on [1, 2), shifted back to [0, 1)
    let octave = LineSet::from_intervals(
        w,
        vec![Interval {
            a: Dyadic::ONE,
            b: Dyadic::from_int(2),
        }],
    )?;
    let rep = d.restrict(&octave)?;
    let mut cand_pieces = Vec::new();
    for p in rep.pieces() {
        cand_pieces.push(Piece {
            iv: Interval {
                a: p.iv.a - Dyadic::ONE,
                b: p.iv.b - Dyadic::ONE,
            },
            v: p.v,
        });
    }
    let candidate = PeriodicStepFunction::from_pieces(cand_pieces)?;
    // verify 1-periodicity on the joint refinement, outside (−r, r)
    let half_edge = edge.mul_pow2(-1);
    let mut bks = d.breakpoints();
    let bound = 1i64 << (w - 1);
    for k in -bound..=bound {
        for t in candidate.breakpoints() {
            bks.push(t + Dyadic::from_int(k));
        }
    }
    bks.retain(|x| *x >= -half_edge && *x <= half_edge);
    bks.sort();
    bks.dedup();
    for win in bks.windows(2) {
        let mid = Dyadic::midpoint(win[0], win[1]);
        if mid.abs() < r {
            continue;
        }
        if !d.step_at(mid).approx_eq(&candidate.step_at(mid), UNIMODULAR_TOL) {
            return Err(FrameError::Invalid(format!(
                "delta(alpha) is not 1-periodic at {}",
                mid
            )));
        }
    }
    Ok(candidate)
}

/// `α ∈ 𝓜` ⟺ δ_α is 1-periodic on the half window.
pub fn is_in_m(alpha: &StepFunction) -> bool {
    delta_periodic(alpha).is_ok()
}

/// Build `α` with `δ_α = ν` by octave induction from seed data `α₀` on
/// `I₀ = ±[N/2, N)`, `N = 2^{n_log2}`.
///
/// Outward octaves follow `α(ξ) = ν(ξ/2)·α(ξ/2)` up to the window edge;
/// inward octaves follow `α(ξ) = conj(ν(ξ))·α(2ξ)` for `inner_octaves`
/// steps, and the remaining gap `[-N·2^{-K-1}, N·2^{-K-1})` around 0 is set
/// to 1 by convention (the induction never reaches 0 in finitely many
/// steps). `δ_α = ν` is guaranteed on the window minus that gap.
pub fn build_alpha(
    nu: &PeriodicStepFunction,
    alpha0: &StepFunction,
    n_log2: i32,
    inner_octaves: Option<u32>,
) -> Result<UnimodularStep> {
    check_unimodular_periodic(nu)?;
    let w = alpha0.window_exp();
    if n_log2 > w as i32 {
        return Err(FrameError::WindowOverflow {
            window: w,
            point: Dyadic::ONE.mul_pow2(n_log2),
        });
    }
    let n = Dyadic::ONE.mul_pow2(n_log2);
    let half_n = n.mul_pow2(-1);
    let i0 = LineSet::from_intervals(
        w,
        vec![
            Interval { a: -n, b: -half_n },
            Interval { a: half_n, b: n },
        ],
    )?;
    if alpha0.support() != i0 {
        return Err(FrameError::Invalid(format!(
            "seed must be supported exactly on ±[{}, {})",
            half_n, n
        )));
    }
    check_unimodular_pieces(alpha0.pieces().iter())?;
    if !alpha0.char_exp().is_zero() {
        return Err(FrameError::Invalid(
            "unimodular step carries no character".into(),
        ));
    }

    let k = inner_octaves.unwrap_or_else(|| {
        let finest = nu.breakpoints().iter().map(|b| b.exp()).max().unwrap_or(0);
        w + finest + 2
    });

    let mut octaves = vec![alpha0.clone()];
    // outward: α(ξ) = ν(ξ/2)·α(ξ/2) on 2^m·I₀ up to the window edge
    let mut cur = alpha0.clone();
    for _ in 0..(w as i32 - n_log2) {
        cur = mul_periodic(nu, &cur).dilate_inf(-1)?;
        octaves.push(cur.clone());
    }
    // inward: α(ξ) = conj(ν(ξ))·α(2ξ) on 2^{-m}·I₀
    let nu_conj = nu.conjugate();
    let mut cur = alpha0.clone();
    for _ in 0..k {
        cur = mul_periodic(&nu_conj, &cur.dilate_inf(1)?);
        octaves.push(cur.clone());
    }
    // convention: fill the unreachable gap around 0 with 1
    let gap = half_n.mul_pow2(-(k as i32));
    let mut pieces: Vec<Piece> = vec![Piece {
        iv: Interval { a: -gap, b: gap },
        v: Cval::ONE,
    }];
    for oct in &octaves {
        pieces.extend_from_slice(oct.pieces());
    }
    UnimodularStep::line(StepFunction::from_pieces(Dyadic::ZERO, w, pieces)?)
}

/// Gauge action on a scaling pair: `α·(φ, m₀) = (α•φ, δ_α·m₀)`.
///
/// Requires `α ∈ 𝓜`; the supports (hence S1–S3 verdicts) are unchanged.
pub fn gauge_scaling(
    phi_hat: &StepFunction,
    m0: &PeriodicStepFunction,
    alpha: &StepFunction,
) -> Result<(StepFunction, PeriodicStepFunction)> {
    let d = delta_periodic(alpha)?;
    let phi_gauged = alpha.multiply(phi_hat)?;
    let m0_gauged = d.multiply(m0).restrict_to(&m0.domain());
    Ok((phi_gauged, m0_gauged))
}
