//! Membership in the scaling-function class: the axioms S1 (dyadic
//! continuity of |φ̂| at 0), S2 (the two-scale equation with a 1-periodic
//! low-pass filter), S3 (Smith–Barnwell), the support-set triple
//! (C, S, S̃), and the infinite-product reconstruction of |φ̂| from m₀.

use crate::dyadic::{Dyadic, Interval, LineSet, PeriodicSet};
use crate::error::{FrameError, Result};
use crate::stepfn::{mul_periodic_dilated, Cval, PeriodicStepFunction, Piece, StepFunction};
use serde::Serialize;

/// Tolerance for value comparisons on the canonical partition.
pub const VALUE_TOL: f64 = 1e-12;

/// Pass/fail with a human-readable witness for the failing point or set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass() -> Verdict {
        Verdict {
            pass: true,
            witness: None,
        }
    }

    pub fn fail(witness: String) -> Verdict {
        Verdict {
            pass: false,
            witness: Some(witness),
        }
    }
}

/// A candidate scaling function with its filter and support data.
#[derive(Clone, Debug)]
pub struct ScalingPair {
    pub phi_hat: StepFunction,
    /// Low-pass filter on S with explicit zeros on S ∖ (C/2 + ℤ);
    /// empty when S2 fails.
    pub m0: PeriodicStepFunction,
    pub c: LineSet,
    pub s: PeriodicSet,
    pub s_tilde: PeriodicSet,
    pub s1: Verdict,
    pub s2: Verdict,
    pub s3: Verdict,
}

impl ScalingPair {
    pub fn is_scaling_function(&self) -> bool {
        self.s1.pass && self.s2.pass && self.s3.pass
    }
}

/// `(C, S, S̃) = (supp φ̂, C + ℤ, C + ½ℤ)`.
pub fn support_sets(phi_hat: &StepFunction) -> Result<(LineSet, PeriodicSet, PeriodicSet)> {
    if phi_hat.is_zero() {
        return Err(FrameError::EmptySupport(
            "candidate scaling function is identically zero".into(),
        ));
    }
    let c = phi_hat.support();
    let s = c.periodize();
    let s_tilde = s.half_shift_closure();
    Ok((c, s, s_tilde))
}

/// S1: |φ̂| ≡ 1 on a punctured neighborhood (−δ, 0) ∪ (0, δ) of the origin
/// — the step-class form of dyadic continuity of |φ̂| at 0 with limit 1.
pub fn check_s1(phi_hat: &StepFunction) -> Verdict {
    let side = |positive: bool| -> Option<Dyadic> {
        // the piece covering points just right (resp. left) of 0
        for p in phi_hat.pieces() {
            let covers = if positive {
                p.iv.a <= Dyadic::ZERO && p.iv.b > Dyadic::ZERO
            } else {
                p.iv.a < Dyadic::ZERO && p.iv.b >= Dyadic::ZERO
            };
            if covers {
                if (p.v.modulus() - 1.0).abs() <= VALUE_TOL {
                    return Some(if positive { p.iv.b } else { -p.iv.a });
                }
                return None;
            }
        }
        None
    };
    match (side(false), side(true)) {
        (Some(_), Some(_)) => Verdict::pass(),
        (_, None) => {
            // witness: the gap or bad piece on the positive side
            let delta = phi_hat
                .breakpoints()
                .into_iter()
                .filter(|b| *b > Dyadic::ZERO)
                .min()
                .unwrap_or(Dyadic::ONE);
            Verdict::fail(format!("|phi_hat| != 1 on (0, {})", delta))
        }
        (None, _) => {
            let delta = phi_hat
                .breakpoints()
                .into_iter()
                .filter(|b| *b < Dyadic::ZERO)
                .max()
                .unwrap_or(-Dyadic::ONE);
            Verdict::fail(format!("|phi_hat| != 1 on ({}, 0)", delta))
        }
    }
}

/// S2: extract the low-pass filter `m₀(ξ) = φ̂(2ξ)/φ̂(ξ)` on C, extended by
/// 0 to S ∖ (C/2 + ℤ), verifying consistency across ℤ-translates.
///
/// Errors with "not reductive" when φ̂(2ξ) ≠ 0 somewhere off C (no
/// 1-periodic step filter can satisfy the two-scale equation) or when two
/// translates force conflicting quotients.
pub fn extract_lowpass(phi_hat: &StepFunction) -> Result<PeriodicStepFunction> {
    if !phi_hat.char_exp().is_zero() {
        return Err(FrameError::Invalid(
            "low-pass extraction requires a character-free phi_hat".into(),
        ));
    }
    let (c, s, _) = support_sets(phi_hat)?;
    let half_c = c.dilate(-1)?;
    if let Some(iv) = half_c.set_difference(&c)?.intervals().first() {
        return Err(FrameError::NotReductive(format!(
            "phi_hat(2ξ) != 0 but phi_hat(ξ) = 0 on [{}, {})",
            iv.a, iv.b
        )));
    }
    // canonical partition of [0,1): breakpoints of C and C/2, reduced mod 1
    let mut bks: Vec<Dyadic> = Vec::new();
    for b in phi_hat.breakpoints() {
        bks.push(b.fract());
        bks.push(b.mul_pow2(-1).fract());
    }
    bks.push(Dyadic::ZERO);
    bks.push(Dyadic::ONE);
    bks.retain(|x| *x >= Dyadic::ZERO && *x <= Dyadic::ONE);
    bks.sort();
    bks.dedup();

    let bound = 1i64 << phi_hat.window_exp();
    let mut pieces = Vec::new();
    for w in bks.windows(2) {
        let iv = Interval { a: w[0], b: w[1] };
        let t = iv.midpoint();
        if !s.contains(t) {
            continue;
        }
        let mut agreed: Option<(Cval, Dyadic)> = None;
        let mut horizon_fallback: Option<(Cval, Dyadic)> = None;
        let edge = Dyadic::ONE.mul_pow2(phi_hat.window_exp() as i32);
        for k in -bound..bound {
            let xi = t + Dyadic::from_int(k);
            let v = phi_hat.step_at(xi);
            if v.is_zero() {
                continue;
            }
            let q = phi_hat.step_at(xi.mul_pow2(1)).div(&v);
            if xi.mul_pow2(1).abs() >= edge {
                // φ̂(2ξ) lies beyond the window, so its value is unknown
                // (a truncated tail, not a zero); this representative
                // cannot constrain the filter
                if horizon_fallback.is_none() {
                    horizon_fallback = Some((q, xi));
                }
                continue;
            }
            match &agreed {
                None => agreed = Some((q, xi)),
                Some((q0, xi0)) => {
                    if !q.approx_eq(q0, VALUE_TOL) {
                        return Err(FrameError::NotReductive(format!(
                            "translates {} and {} force conflicting quotients",
                            xi0, xi
                        )));
                    }
                }
            }
        }
        let (v, _) = agreed
            .or(horizon_fallback)
            .expect("t in S has a representative in C");
        pieces.push(Piece { iv, v });
    }
    PeriodicStepFunction::from_pieces(pieces)
}

/// S3: |m₀| ≤ 1 on S and the Smith–Barnwell equation
/// `|m₀(ξ)|² + |m₀(ξ+1/2)|² = 1` on S ∩ (S + 1/2).
pub fn check_s3(m0: &PeriodicStepFunction, s: &PeriodicSet) -> Verdict {
    for p in m0.pieces() {
        if p.v.abs_sq() > 1.0 + VALUE_TOL {
            return Verdict::fail(format!("|m0| > 1 at {}", p.iv.a));
        }
    }
    let overlap = s.intersect(&s.translate_mod1(Dyadic::new(1, 1)));
    let shifted = m0.shift_arg(Dyadic::new(1, 1));
    let mut bks = m0.breakpoints();
    bks.extend(shifted.breakpoints());
    bks.sort();
    bks.dedup();
    for w in bks.windows(2) {
        let mid = Dyadic::midpoint(w[0], w[1]);
        if !overlap.contains(mid) {
            continue;
        }
        let total = m0.step_at(mid).abs_sq() + shifted.step_at(mid).abs_sq();
        if (total - 1.0).abs() > VALUE_TOL {
            return Verdict::fail(format!(
                "Smith-Barnwell defect {} at {}",
                total - 1.0,
                w[0]
            ));
        }
    }
    Verdict::pass()
}

/// Composite membership check: runs S1, S2 (filter extraction), S3 and
/// records verdicts with witnesses.
pub fn is_scaling(phi_hat: &StepFunction) -> Result<ScalingPair> {
    let (c, s, s_tilde) = support_sets(phi_hat)?;
    let s1 = check_s1(phi_hat);
    let (m0, s2) = match extract_lowpass(phi_hat) {
        Ok(m0) => (m0, Verdict::pass()),
        Err(e) => (PeriodicStepFunction::zero(), Verdict::fail(e.to_string())),
    };
    let s3 = if s2.pass {
        check_s3(&m0, &s)
    } else {
        Verdict::fail("S2 failed; no filter to check".into())
    };
    Ok(ScalingPair {
        phi_hat: phi_hat.clone(),
        m0,
        c,
        s,
        s_tilde,
        s1,
        s2,
        s3,
    })
}

/// `|φ̂(ξ)| = ∏_{j≥1} |m₀(2^{-j}ξ)|`, evaluated exactly.
///
/// The product terminates finitely per piece iff |m₀| ≡ 1 on a punctured
/// neighborhood of 0 (mod 1); otherwise the error "product does not
/// terminate" is returned.
pub fn product_modulus(m0_full: &PeriodicStepFunction, window_exp: u32) -> Result<StepFunction> {
    // termination radius: |m0| = 1 on (0, eps) and (1 − eps, 1)
    let right = m0_full
        .pieces()
        .iter()
        .find(|p| p.iv.a.is_zero())
        .filter(|p| (p.v.modulus() - 1.0).abs() <= VALUE_TOL)
        .map(|p| p.iv.b);
    let left = m0_full
        .pieces()
        .iter()
        .find(|p| p.iv.b == Dyadic::ONE)
        .filter(|p| (p.v.modulus() - 1.0).abs() <= VALUE_TOL)
        .map(|p| Dyadic::ONE - p.iv.a);
    let eps = match (right, left) {
        (Some(r), Some(l)) => r.min(l),
        _ => return Err(FrameError::ProductNonTerminating),
    };
    // all factors j > J are 1 on the window: 2^{W-J} <= eps
    let mut j_max = 0i32;
    while Dyadic::ONE.mul_pow2(window_exp as i32 - j_max) > eps {
        j_max += 1;
    }
    let mut prod = StepFunction::indicator(&LineSet::window(window_exp));
    let abs_m0 = m0_full.abs();
    for j in 1..=j_max {
        prod = mul_periodic_dilated(&abs_m0, j, &prod);
    }
    Ok(prod)
}
