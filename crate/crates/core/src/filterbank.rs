//! Low-pass / high-pass filter pairs: LP(C) membership, extension of a
//! low-pass filter from S to S̃, the canonical high-pass construction, and
//! unitarity of the 2×2 filter matrix on S̃.

use crate::dyadic::{Dyadic, Interval, LineSet, PeriodicSet};
use crate::error::{FrameError, Result};
use crate::scaling::{check_s3, product_modulus, Verdict, VALUE_TOL};
use crate::stepfn::{Cval, PeriodicStepFunction, Piece};

/// A filter pair on S̃. `m1` is stored as the coefficient of `e^{2πiξ}`:
/// the true high-pass is `e^{2πiξ}·m1(ξ)` when `m1_has_char` is set. The
/// phase never needs numeric expansion inside the filter checks.
#[derive(Clone, Debug)]
pub struct FilterPair {
    pub m0: PeriodicStepFunction,
    pub m1: PeriodicStepFunction,
    pub m1_has_char: bool,
    pub c: LineSet,
    pub s: PeriodicSet,
    pub s_tilde: PeriodicSet,
}

/// LP(C) verdicts plus the admissibility of C itself.
#[derive(Clone, Debug)]
pub struct LpReport {
    pub lp1: Verdict,
    pub lp2: Verdict,
    pub lp3: Verdict,
    pub admissible: Verdict,
}

impl LpReport {
    pub fn all_pass(&self) -> bool {
        self.lp1.pass && self.lp2.pass && self.lp3.pass && self.admissible.pass
    }
}

/// Fold every dyadic dilate of `set` into the fundamental octaves
/// `[1, 2)` (positive part) and `[-2, -1)` (negative part). The union
/// `∪_j 2^j·set` covers ℝ∖{0} iff both traces are full.
fn octave_traces(set: &LineSet) -> (Vec<Interval>, Vec<Interval>) {
    let mut pos: Vec<Interval> = Vec::new();
    let mut neg: Vec<Interval> = Vec::new();
    let full_pos = Interval {
        a: Dyadic::ONE,
        b: Dyadic::from_int(2),
    };
    let full_neg = Interval {
        a: Dyadic::from_int(-2),
        b: -Dyadic::ONE,
    };
    // fold one positive interval [a, b), a > 0, into [1, 2)
    let fold_pos = |out: &mut Vec<Interval>, a: Dyadic, b: Dyadic| {
        // octave exponent of a: 2^j <= a < 2^{j+1}
        let mut j = 0i32;
        while Dyadic::ONE.mul_pow2(j) > a {
            j -= 1;
        }
        while Dyadic::ONE.mul_pow2(j + 1) <= a {
            j += 1;
        }
        let mut lo = a;
        let mut j = j;
        while lo < b {
            let hi = Dyadic::ONE.mul_pow2(j + 1).min(b);
            out.push(Interval {
                a: lo.mul_pow2(-j),
                b: hi.mul_pow2(-j),
            });
            lo = hi;
            j += 1;
        }
    };
    for iv in set.intervals() {
        // positive part
        if iv.b > Dyadic::ZERO {
            let a = iv.a.max(Dyadic::ZERO);
            if a.is_zero() {
                // (0, b) contains arbitrarily small full octaves
                pos.push(full_pos);
            } else {
                fold_pos(&mut pos, a, iv.b);
            }
        }
        // negative part: reflect
        if iv.a < Dyadic::ZERO {
            let b = iv.b.min(Dyadic::ZERO);
            if b.is_zero() {
                neg.push(full_neg);
            } else {
                let mut tmp = Vec::new();
                fold_pos(&mut tmp, -b, -iv.a);
                for t in tmp {
                    neg.push(Interval { a: -t.b, b: -t.a });
                }
            }
        }
    }
    (pos, neg)
}

/// `ℝ = ∪_{j∈ℤ} 2^j C` decided exactly via octave traces.
pub fn is_admissible(c: &LineSet) -> Verdict {
    let (pos, neg) = octave_traces(c);
    let w = c.window_exp;
    let pos_set = LineSet::from_intervals(w, pos).expect("trace fits any window");
    let neg_set = LineSet::from_intervals(w, neg).expect("trace fits any window");
    let full_pos = LineSet::from_intervals(
        w,
        vec![Interval {
            a: Dyadic::ONE,
            b: Dyadic::from_int(2),
        }],
    )
    .unwrap();
    let full_neg = LineSet::from_intervals(
        w,
        vec![Interval {
            a: Dyadic::from_int(-2),
            b: -Dyadic::ONE,
        }],
    )
    .unwrap();
    if let Some(iv) = full_pos.set_difference(&pos_set).unwrap().intervals().first() {
        return Verdict::fail(format!(
            "dyadic dilates of C miss the positive log-octave [{}, {})",
            iv.a, iv.b
        ));
    }
    if let Some(iv) = full_neg.set_difference(&neg_set).unwrap().intervals().first() {
        return Verdict::fail(format!(
            "dyadic dilates of C miss the negative log-octave [{}, {})",
            iv.a, iv.b
        ));
    }
    Verdict::pass()
}

/// LP(C): LP1 (infinite product terminates with limit 1 near 0), LP2
/// (|m₀| > 0 on C/2 + ℤ, m₀ = 0 on (C ∖ C/2) + ℤ), LP3 (|m₀| ≤ 1 and
/// Smith–Barnwell on S ∩ (S + 1/2)); C's admissibility is checked too.
pub fn check_lp(m0: &PeriodicStepFunction, c: &LineSet) -> Result<LpReport> {
    let s = c.periodize();
    let admissible = is_admissible(c);
    let lp1 = match product_modulus(m0, c.window_exp) {
        Ok(_) => Verdict::pass(),
        Err(e) => Verdict::fail(e.to_string()),
    };
    let half = c.dilate(-1)?;
    let pos_set = half.periodize();
    let zero_set = c.set_difference(&half)?.periodize();
    let mut lp2 = Verdict::pass();
    let mut bks = m0.breakpoints();
    bks.extend(pos_set.breakpoints());
    bks.extend(zero_set.breakpoints());
    bks.push(Dyadic::ZERO);
    bks.push(Dyadic::ONE);
    bks.sort();
    bks.dedup();
    for w in bks.windows(2) {
        let mid = Dyadic::midpoint(w[0], w[1]);
        let v = m0.step_at(mid);
        if pos_set.contains(mid) && v.modulus() <= VALUE_TOL {
            lp2 = Verdict::fail(format!("m0 vanishes on C/2 + Z at {}", w[0]));
            break;
        }
        if zero_set.contains(mid) && v.modulus() > VALUE_TOL {
            lp2 = Verdict::fail(format!("m0 nonzero on (C \\ C/2) + Z at {}", w[0]));
            break;
        }
    }
    let lp3 = check_s3(m0, &s);
    Ok(LpReport {
        lp1,
        lp2,
        lp3,
        admissible,
    })
}

/// √x as a Cval, exact when x is a power of two.
pub(crate) fn sqrt_cval(x: f64) -> Cval {
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 {
        return Cval::ZERO;
    }
    for k in 0..64i32 {
        if x == (-k as f64).exp2() {
            return Cval::with_half_pow(1.0, 0.0, -k);
        }
    }
    Cval::real(x.sqrt())
}

/// Extend a low-pass filter from S to S̃ = S ∪ (S + 1/2):
/// `m₀(ξ) = μ₀(ξ)·√(1 − |m₀(ξ+1/2)|²)` on (S + 1/2) ∖ S.
pub fn extend_lowpass(
    m0_s: &PeriodicStepFunction,
    mu0: &PeriodicStepFunction,
    s: &PeriodicSet,
) -> Result<PeriodicStepFunction> {
    let half = Dyadic::new(1, 1);
    let stripe = s.translate_mod1(half).set_difference(s);
    if stripe.is_empty() {
        return Ok(m0_s.clone());
    }
    let shifted = m0_s.shift_arg(half);
    let mut pieces = m0_s.pieces().to_vec();
    let mut bks = shifted.breakpoints();
    bks.extend(stripe.breakpoints());
    bks.extend(mu0.breakpoints());
    bks.push(Dyadic::ZERO);
    bks.push(Dyadic::ONE);
    bks.retain(|x| *x >= Dyadic::ZERO && *x <= Dyadic::ONE);
    bks.sort();
    bks.dedup();
    for w in bks.windows(2) {
        let iv = Interval { a: w[0], b: w[1] };
        let mid = iv.midpoint();
        if !stripe.contains(mid) {
            continue;
        }
        let mag = sqrt_cval(1.0 - shifted.step_at(mid).abs_sq());
        let u = mu0.step_at(mid);
        let m = u.modulus();
        if (m - 1.0).abs() > VALUE_TOL {
            return Err(FrameError::NotUnimodular {
                point: mid,
                modulus: m,
            });
        }
        pieces.push(Piece {
            iv,
            v: u.mul(&mag),
        });
    }
    PeriodicStepFunction::from_pieces(pieces)
}

/// `m₁(ξ) = μ₁(2ξ)·e^{2πiξ}·conj(m₀(ξ+1/2))`; the returned function is the
/// coefficient of `e^{2πiξ}` (see [`FilterPair::m1_has_char`]).
pub fn make_highpass(
    m0: &PeriodicStepFunction,
    mu1: &PeriodicStepFunction,
) -> Result<PeriodicStepFunction> {
    crate::unimodular::check_unimodular_periodic(mu1)?;
    let shifted_conj = m0.shift_arg(Dyadic::new(1, 1)).conjugate();
    Ok(mu1.compose_double().multiply(&shifted_conj))
}

/// Unitarity report for the 2×2 filter matrix on S̃.
#[derive(Clone, Debug)]
pub struct FpReport {
    pub unitary: bool,
    pub max_defect: f64,
    pub witness: Option<Dyadic>,
}

/// Check that `M(ξ) = [[m₀(ξ), m₀(ξ+1/2)], [m₁(ξ), m₁(ξ+1/2)]]` is unitary
/// for a.e. ξ ∈ S̃. Row 2's `e^{2πiξ}` phase flag cancels in the row norm
/// and turns the cross term into
/// `m₀(ξ)·conj(s(ξ)) − m₀(ξ+1/2)·conj(s(ξ+1/2))` (the second
/// Smith–Barnwell equation), so it is never numerically expanded.
pub fn check_fp(pair: &FilterPair) -> FpReport {
    let half = Dyadic::new(1, 1);
    let m0s = pair.m0.shift_arg(half);
    let m1s = pair.m1.shift_arg(half);
    let mut bks = pair.m0.breakpoints();
    bks.extend(m0s.breakpoints());
    bks.extend(pair.m1.breakpoints());
    bks.extend(m1s.breakpoints());
    bks.extend(pair.s_tilde.breakpoints());
    bks.push(Dyadic::ZERO);
    bks.push(Dyadic::ONE);
    bks.sort();
    bks.dedup();
    let mut max_defect = 0.0f64;
    let mut witness = None;
    for w in bks.windows(2) {
        let mid = Dyadic::midpoint(w[0], w[1]);
        if !pair.s_tilde.contains(mid) {
            continue;
        }
        let a = pair.m0.step_at(mid);
        let b = m0s.step_at(mid);
        let c = pair.m1.step_at(mid);
        let d = m1s.step_at(mid);
        let row0 = (a.abs_sq() + b.abs_sq() - 1.0).abs();
        let row1 = (c.abs_sq() + d.abs_sq() - 1.0).abs();
        let cross = if pair.m1_has_char {
            // e^{-2πiξ}·(ac̄ − bd̄·e^{πi}) up to a global phase: the sign
            // flip comes from e^{-2πi(ξ+1/2)} = −e^{-2πiξ}
            a.mul(&c.conj())
                .add(&b.mul(&d.conj()).neg())
                .to_complex()
                .norm()
        } else {
            a.mul(&c.conj()).add(&b.mul(&d.conj())).to_complex().norm()
        };
        let defect = row0.max(row1).max(cross);
        if defect > max_defect {
            max_defect = defect;
            witness = Some(w[0]);
        }
    }
    FpReport {
        unitary: max_defect <= VALUE_TOL,
        max_defect,
        witness: if max_defect > VALUE_TOL { witness } else { None },
    }
}

/// Assemble and verify a filter pair from a low-pass on S and unimodular
/// choices μ₀ (on the extension stripe) and μ₁ (1-periodic).
pub fn build_filter_pair(
    m0_s: &PeriodicStepFunction,
    mu0: &PeriodicStepFunction,
    mu1: &PeriodicStepFunction,
    c: &LineSet,
) -> Result<FilterPair> {
    let s = c.periodize();
    let s_tilde = s.half_shift_closure();
    let m0 = extend_lowpass(m0_s, mu0, &s)?;
    let m1 = make_highpass(&m0, mu1)?;
    Ok(FilterPair {
        m0,
        m1,
        m1_has_char: true,
        c: c.clone(),
        s,
        s_tilde,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::DEFAULT_WINDOW_EXP as W;
    use crate::scaling::extract_lowpass;
    use crate::stepfn::StepFunction;
    use num_complex::Complex64;

    fn d(n: i64, e: u32) -> Dyadic {
        Dyadic::new(n, e)
    }

    fn chi(ivs: &[(Dyadic, Dyadic)]) -> StepFunction {
        StepFunction::indicator(
            &LineSet::from_intervals(
                W,
                ivs.iter().map(|&(a, b)| Interval { a, b }).collect(),
            )
            .unwrap(),
        )
    }

    fn pset(ivs: &[(Dyadic, Dyadic)]) -> PeriodicSet {
        PeriodicSet::from_intervals(
            ivs.iter().map(|&(a, b)| Interval { a, b }).collect(),
        )
        .unwrap()
    }

    fn shannon() -> StepFunction {
        chi(&[(d(-1, 1), d(1, 1))])
    }

    fn phi_quarter() -> StepFunction {
        chi(&[(d(-1, 2), d(1, 2))])
    }

    fn one() -> PeriodicStepFunction {
        PeriodicStepFunction::one()
    }

    #[test]
    fn admissibility() {
        assert!(is_admissible(&shannon().support()).pass);
        assert!(is_admissible(&phi_quarter().support()).pass);
        // positive-only support can never cover the negative axis
        let pos_only = chi(&[(d(1, 1), d(1, 0))]);
        assert!(!is_admissible(&pos_only.support()).pass);
        // an annulus missing part of its octave
        let gappy = chi(&[(d(-1, 0), d(-1, 1)), (d(1, 1), d(3, 2))]);
        let v = is_admissible(&gappy.support());
        assert!(!v.pass);
        assert!(v.witness.unwrap().contains("positive"));
    }

    #[test]
    fn lp_shannon_and_quarter() {
        let m0 = extract_lowpass(&shannon()).unwrap();
        let rep = check_lp(&m0, &shannon().support()).unwrap();
        assert!(rep.all_pass());

        let m0q = extract_lowpass(&phi_quarter()).unwrap();
        let repq = check_lp(&m0q, &phi_quarter().support()).unwrap();
        assert!(repq.all_pass());
    }

    #[test]
    fn lp1_fails_for_zero_filter() {
        let zero = PeriodicStepFunction::from_pieces(vec![Piece {
            iv: Interval {
                a: d(0, 0),
                b: d(1, 0),
            },
            v: Cval::ZERO,
        }])
        .unwrap();
        let rep = check_lp(&zero, &shannon().support()).unwrap();
        assert!(!rep.lp1.pass);
    }

    #[test]
    fn extension_trivial_when_s_tilde_is_s() {
        let m0 = extract_lowpass(&shannon()).unwrap();
        let ext = extend_lowpass(&m0, &one(), &PeriodicSet::full()).unwrap();
        assert!(ext.approx_eq(&m0, 0.0));
    }

    #[test]
    fn extension_quarter_stripe() {
        let m0 = extract_lowpass(&phi_quarter()).unwrap();
        let s = pset(&[(d(0, 0), d(1, 2)), (d(3, 2), d(1, 0))]);
        let stripe = s.translate_mod1(d(1, 1)).set_difference(&s);
        assert_eq!(stripe, pset(&[(d(1, 2), d(3, 2))]));
        let ext = extend_lowpass(&m0, &one(), &s).unwrap();
        assert_eq!(ext.domain(), PeriodicSet::full());
        // grid oracle for the pointwise formula on the stripe
        for i in 0..1024i64 {
            let t = Dyadic::new(2 * i + 1, 11);
            let got = ext.step_at(t).to_complex();
            let want = if s.contains(t) {
                m0.step_at(t).to_complex()
            } else {
                Complex64::new(
                    (1.0 - m0.step_at((t + d(1, 1)).fract()).abs_sq()).sqrt(),
                    0.0,
                )
            };
            assert!((got - want).norm() < 1e-12, "t = {}", t);
        }
        // Smith–Barnwell now holds on all of [0,1)
        assert!(check_s3(&ext, &PeriodicSet::full()).pass);
        // sign-flipped μ0: same modulus, SB preserved
        let neg = one().scale(Complex64::new(-1.0, 0.0));
        let ext2 = extend_lowpass(&m0, &neg, &s).unwrap();
        assert!(ext2.abs().approx_eq(&ext.abs(), 0.0));
        assert!(check_s3(&ext2, &PeriodicSet::full()).pass);
    }

    #[test]
    fn highpass_shannon_modulus() {
        let m0 = extract_lowpass(&shannon()).unwrap();
        let m1 = make_highpass(&m0, &one()).unwrap();
        // |m1| = χ_{[1/4,3/4)}
        let ind = PeriodicStepFunction::indicator(&pset(&[(d(1, 2), d(3, 2))]));
        assert!(m1.abs().approx_eq(&ind, 0.0));
        // modulus identity |m1(ξ)| = |m0(ξ+1/2)| on a grid
        let shifted = m0.shift_arg(d(1, 1));
        for i in 0..2048i64 {
            let t = Dyadic::new(2 * i + 1, 12);
            assert!(
                (m1.step_at(t).modulus() - shifted.step_at(t).modulus()).abs() < 1e-12
            );
        }
    }

    #[test]
    fn fp_pairs() {
        // Shannon pair: unitary with zero defect
        let m0 = extract_lowpass(&shannon()).unwrap();
        let pair = build_filter_pair(&m0, &one(), &one(), &shannon().support()).unwrap();
        let rep = check_fp(&pair);
        assert!(rep.unitary);
        assert_eq!(rep.max_defect, 0.0);

        // quarter pair
        let m0q = extract_lowpass(&phi_quarter()).unwrap();
        let pairq = build_filter_pair(&m0q, &one(), &one(), &phi_quarter().support()).unwrap();
        assert!(check_fp(&pairq).unitary);

        // corrupt one piece where |m1| = 1 by 1.1: defect = 1.1² − 1 = 0.21
        let mut bad = pairq.clone();
        let corrupt = PeriodicStepFunction::indicator(&pset(&[(d(3, 3), d(1, 1))]))
            .scale(Complex64::new(0.1, 0.0));
        bad.m1 = bad.m1.add(&corrupt.multiply(&bad.m1));
        let repb = check_fp(&bad);
        assert!(!repb.unitary);
        assert!((repb.max_defect - 0.21).abs() < 1e-12);
        assert!(repb.witness.is_some());
    }

    #[test]
    fn fp_fails_for_constant_one() {
        let c = shannon().support();
        let m0 = PeriodicStepFunction::one();
        let m1 = make_highpass(&m0, &one()).unwrap();
        let pair = FilterPair {
            m0,
            m1,
            m1_has_char: true,
            c: c.clone(),
            s: PeriodicSet::full(),
            s_tilde: PeriodicSet::full(),
        };
        let rep = check_fp(&pair);
        assert!(!rep.unitary);
        assert!((rep.max_defect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn row_identity_and_mu_invariance() {
        let m0q = extract_lowpass(&phi_quarter()).unwrap();
        let pair = build_filter_pair(&m0q, &one(), &one(), &phi_quarter().support()).unwrap();
        // |m1(ξ)|² = 1 − |m0(ξ)|² on S̃
        let mut bks = pair.m0.breakpoints();
        bks.extend(pair.m1.breakpoints());
        bks.sort();
        bks.dedup();
        for w in bks.windows(2) {
            let mid = Dyadic::midpoint(w[0], w[1]);
            if pair.s_tilde.contains(mid) {
                let total = pair.m0.step_at(mid).abs_sq() + pair.m1.step_at(mid).abs_sq();
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
        // m1 ↦ μ(2ξ)·m1 leaves unitarity unchanged
        let mu = PeriodicStepFunction::one()
            .add(
                &PeriodicStepFunction::indicator(&pset(&[(d(1, 2), d(1, 1))]))
                    .scale(Complex64::new(-2.0, 0.0)),
            );
        let mut tweaked = pair.clone();
        tweaked.m1 = mu.compose_double().multiply(&tweaked.m1);
        assert!(check_fp(&tweaked).unitary);
    }
}
