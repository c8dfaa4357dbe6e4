//! Wavelet synthesis and the frame-theoretic identities: Calderón, t_q,
//! telescoping, D_ψ, dimension function, per-scale Parseval accumulation,
//! gauge transport, and semiorthogonality evidence.
//!
//! The Calderón and t_q engines require annular support: supp ψ̂ bounded
//! away from 0 and ∞. That makes every infinite sum in the identities a
//! finite sum of step functions, so deviations are computed exactly.

use crate::dyadic::{Dyadic, Interval, LineSet};
use crate::error::{FrameError, Result};
use crate::scaling::{ScalingPair, VALUE_TOL};
use crate::stepfn::{
    cells, mul_periodic, mul_periodic_dilated, unit_phase, Cval, PeriodicStepFunction, Piece,
    StepFunction,
};
use crate::unimodular::{check_unimodular_line, check_unimodular_periodic, delta_periodic};

/// The (φ, m₀, m₁) triple a wavelet was synthesized from.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub phi_hat: StepFunction,
    pub m0: PeriodicStepFunction,
    /// Stored as the coefficient of e^{2πiξ} when `m1_has_char` is set.
    pub m1: PeriodicStepFunction,
    pub m1_has_char: bool,
}

/// ψ on the Fourier side. The e^{2πiξ} phase of the canonical high-pass
/// becomes the character exponent 1/2 of ψ̂.
#[derive(Clone, Debug)]
pub struct Wavelet {
    pub psi_hat: StepFunction,
    pub provenance: Option<Provenance>,
}

/// Per-q result of the t_q equation.
#[derive(Clone, Debug)]
pub struct TqEntry {
    pub q: i64,
    pub max_dev: f64,
    pub witness: Option<Dyadic>,
}

/// Combined Theorem-1 verdict.
#[derive(Clone, Debug)]
pub struct FrameReport {
    pub calderon_max_dev: f64,
    pub calderon_witness: Option<Dyadic>,
    pub tq: Vec<TqEntry>,
    pub parseval_verdict: bool,
    /// Present when the wavelet carries provenance.
    pub telescoping_max_dev: Option<f64>,
    pub tol: f64,
}

/// ψ̂(ξ) = m₁(ξ/2)·φ̂(ξ/2) without any validity checks on φ.
pub(crate) fn synthesize_raw(
    phi_hat: &StepFunction,
    m1: &PeriodicStepFunction,
    m1_has_char: bool,
) -> Result<StepFunction> {
    let g = mul_periodic(m1, phi_hat);
    let h = g.dilate_inf(-1)?;
    if m1_has_char {
        let c = h.char_exp() + Dyadic::new(1, 1);
        Ok(h.with_char(c))
    } else {
        Ok(h)
    }
}

/// Synthesize ψ̂(ξ) = m₁(ξ/2)·φ̂(ξ/2) on 2C from a scaling pair and a
/// high-pass filter (stored as the e^{2πiξ} coefficient when
/// `m1_has_char` is set).
pub fn synthesize(
    pair: &ScalingPair,
    m1: &PeriodicStepFunction,
    m1_has_char: bool,
) -> Result<Wavelet> {
    let psi_hat = synthesize_raw(&pair.phi_hat, m1, m1_has_char)?;
    if psi_hat.is_zero() {
        return Err(FrameError::DegenerateHighPass);
    }
    Ok(Wavelet {
        psi_hat,
        provenance: Some(Provenance {
            phi_hat: pair.phi_hat.clone(),
            m0: pair.m0.clone(),
            m1: m1.clone(),
            m1_has_char,
        }),
    })
}

/// Full default pipeline: verify φ, extend its filter with μ₀ = μ₁ ≡ 1,
/// and synthesize the canonical wavelet.
pub fn synthesize_default(phi_hat: &StepFunction) -> Result<Wavelet> {
    let pair = crate::scaling::is_scaling(phi_hat)?;
    if !pair.is_scaling_function() {
        return Err(FrameError::Invalid(
            "candidate fails the scaling axioms; cannot synthesize".into(),
        ));
    }
    let one = PeriodicStepFunction::one();
    let fp = crate::filterbank::build_filter_pair(&pair.m0, &one, &one, &pair.c)?;
    synthesize(&pair, &fp.m1, fp.m1_has_char)
}

/// `(m, M)` with supp f ⊆ ±[m, M], m > 0; errors when the support is empty
/// or touches 0 (then the dyadic sums are not finitely computable).
pub fn annulus_bounds(f: &StepFunction) -> Result<(Dyadic, Dyadic)> {
    let supp = f.support();
    if supp.is_empty() {
        return Err(FrameError::EmptySupport("empty wavelet support".into()));
    }
    let mut inner: Option<Dyadic> = None;
    let mut outer: Option<Dyadic> = None;
    for iv in supp.intervals() {
        let (lo, hi) = if iv.a >= Dyadic::ZERO {
            (iv.a, iv.b)
        } else if iv.b <= Dyadic::ZERO {
            (-iv.b, -iv.a)
        } else {
            (Dyadic::ZERO, iv.a.abs().max(iv.b))
        };
        if lo.is_zero() {
            return Err(FrameError::NonAnnular(
                "support touches 0; dyadic sums have infinitely many terms".into(),
            ));
        }
        inner = Some(inner.map_or(lo, |m| m.min(lo)));
        outer = Some(outer.map_or(hi, |m| m.max(hi)));
    }
    Ok((inner.unwrap(), outer.unwrap()))
}

/// Fold every dyadic dilate of |f|² into one fundamental octave and sum:
/// the Calderón sum Σ_j |f(2^jξ)|² restricted to [1,2) and [−2,−1).
fn calderon_octaves(f: &StepFunction) -> (Vec<Piece>, Vec<Piece>) {
    let sq = f
        .multiply(&f.conjugate())
        .expect("same window and opposite characters");
    let mut pos: Vec<Piece> = Vec::new();
    let mut neg: Vec<Piece> = Vec::new();
    // fold one piece on (0, ∞) into [1, 2): split at powers of two, then
    // rescale each fragment [lo, hi) ⊆ [2^j, 2^{j+1}) by 2^{-j}
    let fold = |out: &mut Vec<Piece>, a: Dyadic, b: Dyadic, v: Cval| {
        let mut j = 0i32;
        while Dyadic::ONE.mul_pow2(j) > a {
            j -= 1;
        }
        while Dyadic::ONE.mul_pow2(j + 1) <= a {
            j += 1;
        }
        let mut lo = a;
        while lo < b {
            let hi = Dyadic::ONE.mul_pow2(j + 1).min(b);
            out.push(Piece {
                iv: Interval {
                    a: lo.mul_pow2(-j),
                    b: hi.mul_pow2(-j),
                },
                v,
            });
            lo = hi;
            j += 1;
        }
    };
    for p in sq.pieces() {
        if p.iv.a >= Dyadic::ZERO {
            fold(&mut pos, p.iv.a, p.iv.b, p.v);
        } else {
            // mirror [-b, -a) into the positive axis, fold, mirror back
            let mut mirrored = Vec::new();
            fold(&mut mirrored, -p.iv.b, -p.iv.a, p.v);
            for m in mirrored {
                neg.push(Piece {
                    iv: Interval {
                        a: -m.iv.b,
                        b: -m.iv.a,
                    },
                    v: m.v,
                });
            }
        }
    }
    (pos, neg)
}

/// Max deviation of the sums of stacked `contributions` from 1 over the
/// full octave `[lo, hi)`, uncovered cells counting as 0.
fn octave_deviation(contributions: &[Piece], lo: Dyadic, hi: Dyadic) -> (f64, Option<Dyadic>) {
    let mut bks = Vec::new();
    for p in contributions {
        bks.push(p.iv.a);
        bks.push(p.iv.b);
    }
    let mut max_dev = 0.0f64;
    let mut witness = None;
    for iv in cells(bks, lo, hi) {
        let mid = iv.midpoint();
        // the stacked values are the real numbers |ψ̂|²
        let sum: f64 = contributions
            .iter()
            .filter(|p| p.iv.contains(mid))
            .map(|p| p.v.to_complex().re)
            .sum();
        let dev = (sum - 1.0).abs();
        if dev > max_dev {
            max_dev = dev;
            witness = Some(mid);
        }
    }
    (max_dev, witness)
}

/// Dyadic Calderón condition: max |Σ_j |ψ̂(2^jξ)|² − 1| with a witness.
/// Exact on the log-dyadic partition of the octaves [1,2) and [−2,−1);
/// the sum is invariant under ξ ↦ 2ξ, so this decides a.e. equality on ℝ∖{0}.
pub fn calderon(psi_hat: &StepFunction) -> Result<(f64, Option<Dyadic>)> {
    annulus_bounds(psi_hat)?;
    let (pos, neg) = calderon_octaves(psi_hat);
    let (dp, wp) = octave_deviation(&pos, Dyadic::ONE, Dyadic::from_int(2));
    let (dn, wn) = octave_deviation(&neg, Dyadic::from_int(-2), -Dyadic::ONE);
    if dp >= dn {
        Ok((dp, wp))
    } else {
        Ok((dn, wn))
    }
}

/// t_q(ξ) = Σ_{j≥0} ψ̂(2^jξ)·conj(ψ̂(2^j(ξ+q))) for odd q, computed as an
/// exact step function; returns (max |t_q|, witness). The character
/// contributes the constant e^{−2πi·c·2^j·q} per scale, folded exactly.
pub fn tq(psi_hat: &StepFunction, q: i64) -> Result<(f64, Option<Dyadic>)> {
    if q.rem_euclid(2) != 1 {
        return Err(FrameError::Invalid(format!("q = {q} is not odd")));
    }
    let (_, outer) = annulus_bounds(psi_hat)?;
    let c = psi_hat.char_exp();
    let w = psi_hat.window_exp();
    let mut acc = StepFunction::zero(w);
    let mut j = 0i32;
    // scale j contributes only while supp ∩ (supp − 2^j q) can be nonempty
    while Dyadic::from_int(q.abs()).mul_pow2(j) <= outer.mul_pow2(1) {
        let shift = Dyadic::from_int(q).mul_pow2(j);
        let phase = unit_phase(-(c * shift));
        let mut pieces = Vec::new();
        for p in psi_hat.pieces() {
            for r in psi_hat.pieces() {
                // u-coordinates: u ∈ p.iv and u + 2^j q ∈ r.iv
                let a = p.iv.a.max(r.iv.a - shift);
                let b = p.iv.b.min(r.iv.b - shift);
                if a < b {
                    pieces.push(Piece {
                        iv: Interval {
                            a: a.mul_pow2(-j),
                            b: b.mul_pow2(-j),
                        },
                        v: p.v.mul(&r.v.conj()).scale(phase),
                    });
                }
            }
        }
        let term = StepFunction::from_pieces(Dyadic::ZERO, w, pieces)?;
        acc = acc.add(&term)?;
        j += 1;
    }
    let mut max_dev = 0.0f64;
    let mut witness = None;
    for p in acc.pieces() {
        let m = p.v.modulus();
        if m > max_dev {
            max_dev = m;
            witness = Some(p.iv.midpoint());
        }
    }
    Ok((max_dev, witness))
}

/// Theorem-1 verdict: Calderón plus t_q over odd |q| ≤ q_range.
pub fn is_parseval(w: &Wavelet, q_range: i64, tol: f64) -> Result<FrameReport> {
    let (calderon_max_dev, calderon_witness) = calderon(&w.psi_hat)?;
    let mut entries = Vec::new();
    let mut all_tq_pass = true;
    let mut q = -q_range;
    while q <= q_range {
        if q.rem_euclid(2) == 1 {
            let (max_dev, witness) = tq(&w.psi_hat, q)?;
            all_tq_pass &= max_dev <= tol;
            entries.push(TqEntry { q, max_dev, witness });
        }
        q += 1;
    }
    let telescoping_max_dev = match &w.provenance {
        Some(p) => Some(telescoping(&p.phi_hat, &w.psi_hat)?.0),
        None => None,
    };
    Ok(FrameReport {
        parseval_verdict: calderon_max_dev <= tol && all_tq_pass,
        calderon_max_dev,
        calderon_witness,
        tq: entries,
        telescoping_max_dev,
        tol,
    })
}

/// T(ξ) = Σ_{j≥1} |ψ̂(2^jξ)|² as an exact step function on the window.
///
/// The sum is finite on |ξ| ≥ m/2 (m = inner annulus radius). Below m/2
/// it satisfies T(ξ) = T(2ξ), so it is the log-periodic extension of its
/// values on ±[m/2, m); it is a finite step function iff those octave
/// values are constant per side, which is checked.
fn telescoping_sum(psi_hat: &StepFunction) -> Result<StepFunction> {
    let (m, outer) = annulus_bounds(psi_hat)?;
    let w = psi_hat.window_exp();
    let half_m = m.mul_pow2(-1);
    let mut f = StepFunction::zero(w);
    let mut j = 1i32;
    while outer.mul_pow2(-(j - 1)) > half_m {
        let t = psi_hat.dilate_inf(j)?;
        f = f.add(&t.multiply(&t.conjugate())?)?;
        j += 1;
    }
    // constant octave value per side, read off ±[m/2, m)
    let octave_value = |lo: Dyadic, hi: Dyadic| -> Result<Cval> {
        let bks = f
            .breakpoints()
            .into_iter()
            .filter(|x| *x > lo && *x < hi)
            .collect::<Vec<_>>();
        let mut value: Option<Cval> = None;
        for iv in cells(bks, lo, hi) {
            let v = f.step_at(iv.midpoint());
            match &value {
                None => value = Some(v),
                Some(prev) if prev.approx_eq(&v, VALUE_TOL) => {}
                Some(_) => {
                    return Err(FrameError::Invalid(
                        "non-constant octave pattern near 0: the telescoping sum \
                         is not a finite step function"
                            .into(),
                    ))
                }
            }
        }
        Ok(value.unwrap_or(Cval::ZERO))
    };
    let c_pos = octave_value(half_m, m)?;
    let c_neg = octave_value(-m, -half_m)?;
    let edge = Dyadic::ONE.mul_pow2(w as i32);
    let outer_set = LineSet::from_intervals(
        w,
        vec![
            Interval { a: -edge, b: -half_m },
            Interval { a: half_m, b: edge },
        ],
    )?;
    let mut pieces = f.restrict(&outer_set)?.pieces().to_vec();
    if !c_pos.is_zero() {
        pieces.push(Piece {
            iv: Interval {
                a: Dyadic::ZERO,
                b: half_m,
            },
            v: c_pos,
        });
    }
    if !c_neg.is_zero() {
        pieces.push(Piece {
            iv: Interval {
                a: -half_m,
                b: Dyadic::ZERO,
            },
            v: c_neg,
        });
    }
    StepFunction::from_pieces(Dyadic::ZERO, w, pieces)
}

/// Telescoping identity Σ_{j≥1} |ψ̂(2^jξ)|² = |φ̂(ξ)|²:
/// (max deviation, witness). Exactly 0 for synthesized pairs.
pub fn telescoping(
    phi_hat: &StepFunction,
    psi_hat: &StepFunction,
) -> Result<(f64, Option<Dyadic>)> {
    let t = telescoping_sum(psi_hat)?;
    let g = phi_hat.multiply(&phi_hat.conjugate())?;
    let diff = t.add(&g.scale(num_complex::Complex64::new(-1.0, 0.0)))?;
    let mut max_dev = 0.0f64;
    let mut witness = None;
    for p in diff.pieces() {
        let m = p.v.modulus();
        if m > max_dev {
            max_dev = m;
            witness = Some(p.iv.midpoint());
        }
    }
    Ok((max_dev, witness))
}

/// D_ψ(ξ) = Σ_k Σ_{j≥1} |ψ̂(2^j(ξ+k))|², the 1-periodization of the
/// telescoping sum; equals p_φ for synthesized pairs.
pub fn d_psi(psi_hat: &StepFunction) -> Result<PeriodicStepFunction> {
    if psi_hat.is_zero() {
        return Ok(PeriodicStepFunction::zero());
    }
    let t = telescoping_sum(psi_hat)?;
    let window = StepFunction::indicator(&LineSet::window(psi_hat.window_exp()));
    Ok(t.bracket(&window)?.values)
}

/// dim(ξ) = Σ_i [φ_i, φ_i](ξ) for a generating family.
pub fn dimension_function(generators: &[StepFunction]) -> Result<PeriodicStepFunction> {
    let mut acc = PeriodicStepFunction::zero();
    for g in generators {
        acc = acc.add(&g.weight()?);
    }
    Ok(acc)
}

/// Per-scale Parseval accumulation result.
#[derive(Clone, Debug)]
pub struct ParsevalCheck {
    pub sum: f64,
    pub norm_sq: f64,
    pub deviation: f64,
    pub j_lo: i32,
    pub j_hi: i32,
}

/// Σ_j Σ_k |⟨f, ψ_{j,k}⟩|² via the per-scale identity
/// Σ_k |⟨f, ψ_{j,k}⟩|² = ∫₀¹ |[2^{j/2} f̂(2^j·), ψ̂]|². `f` is the test
/// function on the Fourier side; it must be annulus-supported so scales
/// outside the computed range contribute exactly 0.
pub fn parseval_on_test(
    f: &StepFunction,
    psi_hat: &StepFunction,
    j_range: Option<(i32, i32)>,
) -> Result<ParsevalCheck> {
    let (mf, bf) = annulus_bounds(f)?;
    let (mp, bp) = annulus_bounds(psi_hat)?;
    // scale j can contribute only if the magnitude ranges of 2^{-j}·supp f
    // and supp ψ̂ intersect: mf ≤ Mψ·2^j and Mf ≥ mψ·2^j
    let mut active = Vec::new();
    for j in -60i32..=60 {
        if mf <= bp.mul_pow2(j) && bf >= mp.mul_pow2(j) {
            active.push(j);
        }
    }
    let (j_lo, j_hi) = match j_range {
        Some((lo, hi)) => {
            if active.iter().any(|j| *j < lo || *j > hi) {
                return Err(FrameError::Invalid(format!(
                    "scales outside [{lo}, {hi}] have overlapping support and \
                     would contribute; widen the range"
                )));
            }
            (lo, hi)
        }
        None => match (active.first(), active.last()) {
            (Some(lo), Some(hi)) => (*lo, *hi),
            _ => (0, 0),
        },
    };
    let mut sum = 0.0f64;
    for j in &active {
        let g = f.fourier_dilate(*j)?;
        sum += g.bracket(psi_hat)?.abs_sq_integral();
    }
    let norm_sq = f.norm_sq();
    Ok(ParsevalCheck {
        sum,
        norm_sq,
        deviation: (sum - norm_sq).abs(),
        j_lo,
        j_hi,
    })
}

/// f(ξ)·μ(ξ/2) for a character-free line step μ.
fn mul_line_half(mu: &StepFunction, f: &StepFunction) -> Result<StepFunction> {
    if !mu.char_exp().is_zero() {
        return Err(FrameError::Invalid(
            "gauge factor μ must be character-free".into(),
        ));
    }
    let mubks: Vec<Dyadic> = mu.breakpoints().iter().map(|x| x.mul_pow2(1)).collect();
    let mut pieces = Vec::new();
    for p in f.pieces() {
        let bks = mubks
            .iter()
            .copied()
            .filter(|x| *x > p.iv.a && *x < p.iv.b)
            .collect::<Vec<_>>();
        for iv in cells(bks, p.iv.a, p.iv.b) {
            let v = p.v.mul(&mu.step_at(iv.midpoint().mul_pow2(-1)));
            if !v.is_zero() {
                pieces.push(Piece { iv, v });
            }
        }
    }
    StepFunction::from_pieces(f.char_exp(), f.window_exp(), pieces)
}

/// Gauge transport ψ̂'(ξ) = ν(ξ)·(μσ)(ξ/2)·ψ̂(ξ) together with the gauged
/// provenance (μ·φ̂, σm₀, ν(2·)σm₁). Requires σ|_S = δ_μ|_S; the dual
/// construction path (synthesis from the gauged triple) is recomputed and
/// must agree pointwise to `VALUE_TOL`.
pub fn gauge_wavelet(
    w: &Wavelet,
    mu: &StepFunction,
    nu: &PeriodicStepFunction,
    sigma: &PeriodicStepFunction,
) -> Result<Wavelet> {
    let prov = w.provenance.as_ref().ok_or_else(|| {
        FrameError::Invalid("gauge transport needs the (φ, m₀, m₁) provenance".into())
    })?;
    check_unimodular_line(mu)?;
    check_unimodular_periodic(nu)?;
    check_unimodular_periodic(sigma)?;
    let s = prov.phi_hat.support().periodize();
    let dmu = delta_periodic(mu)?;
    if !sigma.restrict_to(&s).approx_eq(&dmu.restrict_to(&s), VALUE_TOL) {
        return Err(FrameError::Invalid(
            "σ does not agree with δ(μ) on S".into(),
        ));
    }
    // direct path
    let psi1 = mul_line_half(mu, &mul_periodic_dilated(sigma, 1, &mul_periodic(nu, &w.psi_hat)))?;
    // gauged-triple path
    let phi2 = mu.multiply(&prov.phi_hat)?;
    let m0_2 = sigma.multiply(&prov.m0);
    let m1_2 = nu.compose_double().multiply(sigma).multiply(&prov.m1);
    let psi2 = synthesize_raw(&phi2, &m1_2, prov.m1_has_char)?;
    let diff = psi1.add(&psi2.scale(num_complex::Complex64::new(-1.0, 0.0)))?;
    let dev = diff
        .pieces()
        .iter()
        .map(|p| p.v.modulus())
        .fold(0.0f64, f64::max);
    if dev > VALUE_TOL {
        return Err(FrameError::Invalid(format!(
            "gauge dual-path mismatch: deviation {dev:.3e}"
        )));
    }
    Ok(Wavelet {
        psi_hat: psi1,
        provenance: Some(Provenance {
            phi_hat: phi2,
            m0: m0_2,
            m1: m1_2,
            m1_has_char: prov.m1_has_char,
        }),
    })
}

/// Semiorthogonality evidence report.
#[derive(Clone, Debug)]
pub struct SemiorthReport {
    /// max |⟨ψ_{j,k}, ψ_{0,0}⟩| over 1 ≤ j ≤ J, |k| ≤ K.
    pub max_cross: f64,
    pub witness: Option<(i32, i64)>,
    /// Necessary condition: D_ψ takes values in {0, 1}.
    pub dpsi_characteristic: bool,
    pub pass: bool,
}

/// Cross-scale inner products ⟨ψ_{j,k}, ψ_{0,0}⟩ for 1 ≤ j ≤ J, |k| ≤ K,
/// plus the {0,1}-valuedness of D_ψ.
pub fn semiorthogonality_evidence(
    psi_hat: &StepFunction,
    j_max: i32,
    k_max: i64,
) -> Result<SemiorthReport> {
    const CROSS_TOL: f64 = 1e-10;
    let mut max_cross = 0.0f64;
    let mut witness = None;
    for j in 1..=j_max {
        // ψ̂_{j,k}(ξ) = 2^{-j/2}·e^{−2πik·2^{-j}ξ}·ψ̂(2^{-j}ξ): the modulation
        // folds into the character exponent exactly
        let g = psi_hat.fourier_dilate(-j)?;
        for k in -k_max..=k_max {
            let gk = g.with_char(g.char_exp() - Dyadic::from_int(k).mul_pow2(-j));
            let ip = gk.inner_product(psi_hat)?.norm();
            if ip > max_cross {
                max_cross = ip;
                witness = Some((j, k));
            }
        }
    }
    let d = d_psi(psi_hat)?;
    let dpsi_characteristic = d.pieces().iter().all(|p| {
        let m = p.v.modulus();
        m <= CROSS_TOL || (m - 1.0).abs() <= CROSS_TOL
    });
    Ok(SemiorthReport {
        pass: max_cross <= CROSS_TOL && dpsi_characteristic,
        max_cross,
        witness: if max_cross > CROSS_TOL { witness } else { None },
        dpsi_characteristic,
    })
}
