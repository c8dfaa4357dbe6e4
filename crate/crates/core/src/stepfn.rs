//! Exact calculus of piecewise-constant complex functions on the line and
//! on the torus.
//!
//! A [`StepFunction`] is `ξ ↦ e^{2πicξ}·step(ξ)` with one global character
//! exponent `c` and dyadic breakpoints. Piece values carry an explicit
//! half-power-of-two exponent so that norms of unitary dilates stay exact.

use crate::dyadic::{Dyadic, Interval, LineSet, PeriodicSet};
use crate::error::{FrameError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

/// `e^{2πid}` for dyadic `d`; exact (±1, ±i) on the quarter grid.
pub fn unit_phase(d: Dyadic) -> Complex64 {
    let r = d.fract();
    if r.exp() <= 2 {
        // multiples of 1/4
        let quarters = r.num() << (2 - r.exp());
        return match quarters {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            3 => Complex64::new(0.0, -1.0),
            _ => unreachable!(),
        };
    }
    let t = 2.0 * PI * r.to_f64();
    Complex64::new(t.cos(), t.sin())
}

/// A complex piece value `(re + i·im)·2^{hp/2}` with `hp ∈ {0, 1}`.
///
/// The odd half-power is kept symbolic so `|v|² = (re²+im²)·2^hp` is exact;
/// even powers of √2 are folded into the components.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cval {
    re: f64,
    im: f64,
    hp: i32,
}

impl Cval {
    pub const ZERO: Cval = Cval { re: 0.0, im: 0.0, hp: 0 };
    pub const ONE: Cval = Cval { re: 1.0, im: 0.0, hp: 0 };

    pub fn new(re: f64, im: f64) -> Cval {
        Cval { re, im, hp: 0 }
    }

    pub fn real(re: f64) -> Cval {
        Cval { re, im: 0.0, hp: 0 }
    }

    /// `(re + i·im)·2^{hp/2}`, normalized so the stored hp is 0 or 1.
    pub fn with_half_pow(re: f64, im: f64, hp: i32) -> Cval {
        if re == 0.0 && im == 0.0 {
            return Cval::ZERO;
        }
        let even = hp.div_euclid(2);
        let rem = hp.rem_euclid(2);
        let f = (even as f64).exp2();
        Cval {
            re: re * f,
            im: im * f,
            hp: rem,
        }
    }

    pub fn half_pow(&self) -> i32 {
        self.hp
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    /// `|v|²`, exact in f64 for exactly-representable components.
    pub fn abs_sq(&self) -> f64 {
        (self.re * self.re + self.im * self.im) * (self.hp as f64).exp2()
    }

    pub fn modulus(&self) -> f64 {
        self.abs_sq().sqrt()
    }

    pub fn to_complex(&self) -> Complex64 {
        let f = if self.hp == 1 { SQRT_2 } else { 1.0 };
        Complex64::new(self.re * f, self.im * f)
    }

    pub fn conj(&self) -> Cval {
        Cval {
            re: self.re,
            im: -self.im,
            hp: self.hp,
        }
    }

    pub fn neg(&self) -> Cval {
        Cval {
            re: -self.re,
            im: -self.im,
            hp: self.hp,
        }
    }

    pub fn mul(&self, other: &Cval) -> Cval {
        Cval::with_half_pow(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
            self.hp + other.hp,
        )
    }

    /// `self / other` (other must be nonzero); exact when |other|² is a
    /// power of two.
    pub fn div(&self, other: &Cval) -> Cval {
        let n = self.mul(&other.conj());
        let m = other.re * other.re + other.im * other.im;
        Cval::with_half_pow(n.re / m, n.im / m, n.hp - 2 * other.hp)
    }

    /// Magnitude as a Cval, preserving the half-power (so |1·2^{1/2}| stays exact).
    pub fn abs(&self) -> Cval {
        let m = if self.im == 0.0 {
            self.re.abs()
        } else if self.re == 0.0 {
            self.im.abs()
        } else {
            self.re.hypot(self.im)
        };
        Cval {
            re: m,
            im: 0.0,
            hp: self.hp,
        }
    }

    pub fn add(&self, other: &Cval) -> Cval {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        if self.hp == other.hp {
            let v = Cval {
                re: self.re + other.re,
                im: self.im + other.im,
                hp: self.hp,
            };
            if v.re == 0.0 && v.im == 0.0 {
                Cval::ZERO
            } else {
                v
            }
        } else {
            // mixed half-powers fold through one √2 multiplication
            let a = self.to_complex();
            let b = other.to_complex();
            Cval::new(a.re + b.re, a.im + b.im)
        }
    }

    pub fn scale(&self, z: Complex64) -> Cval {
        Cval::with_half_pow(
            self.re * z.re - self.im * z.im,
            self.re * z.im + self.im * z.re,
            self.hp,
        )
    }

    /// Multiply the half-power exponent adjustment in (value scale 2^{k/2}).
    pub fn shift_half_pow(&self, k: i32) -> Cval {
        if self.is_zero() {
            return Cval::ZERO;
        }
        Cval::with_half_pow(self.re, self.im, self.hp + k)
    }

    pub fn approx_eq(&self, other: &Cval, tol: f64) -> bool {
        (self.to_complex() - other.to_complex()).norm() <= tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub iv: Interval,
    pub v: Cval,
}

fn exact_eq(a: &Cval, b: &Cval) -> bool {
    a == b
}

/// Sort pieces, reject overlaps, merge touching pieces with identical values.
fn canonicalize(mut pieces: Vec<Piece>, keep_zeros: bool) -> Result<Vec<Piece>> {
    if !keep_zeros {
        pieces.retain(|p| !p.v.is_zero());
    }
    pieces.sort_by(|x, y| x.iv.a.cmp(&y.iv.a));
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match out.last_mut() {
            Some(last) if p.iv.a < last.iv.b => {
                return Err(FrameError::Invalid(format!(
                    "overlapping pieces at {}",
                    p.iv.a
                )));
            }
            Some(last) if p.iv.a == last.iv.b && exact_eq(&last.v, &p.v) => {
                last.iv.b = p.iv.b;
            }
            _ => out.push(p),
        }
    }
    Ok(out)
}

fn eval_pieces(pieces: &[Piece], x: Dyadic) -> Cval {
    // binary search on sorted disjoint pieces
    let mut lo = 0usize;
    let mut hi = pieces.len();
    while lo < hi {
        let mid = (lo + hi) / 2;
        let p = &pieces[mid];
        if x < p.iv.a {
            hi = mid;
        } else if x >= p.iv.b {
            lo = mid + 1;
        } else {
            return p.v;
        }
    }
    Cval::ZERO
}

/// Refined cell boundaries from a set of breakpoints, restricted to [lo, hi).
pub(crate) fn cells(mut bks: Vec<Dyadic>, lo: Dyadic, hi: Dyadic) -> Vec<Interval> {
    bks.push(lo);
    bks.push(hi);
    bks.retain(|x| *x >= lo && *x <= hi);
    bks.sort();
    bks.dedup();
    bks.windows(2)
        .map(|w| Interval { a: w[0], b: w[1] })
        .filter(|iv| iv.a < iv.b)
        .collect()
}

/// `ξ ↦ e^{2πi·char_exp·ξ}·step(ξ)` with compact support inside the window.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    char_exp: Dyadic,
    window_exp: u32,
    pieces: Vec<Piece>,
}

impl StepFunction {
    pub fn zero(window_exp: u32) -> StepFunction {
        StepFunction {
            char_exp: Dyadic::ZERO,
            window_exp,
            pieces: Vec::new(),
        }
    }

    pub fn from_pieces(char_exp: Dyadic, window_exp: u32, pieces: Vec<Piece>) -> Result<StepFunction> {
        let pieces = canonicalize(pieces, false)?;
        let w = Dyadic::ONE.mul_pow2(window_exp as i32);
        for p in &pieces {
            if p.iv.a < -w || p.iv.b > w {
                return Err(FrameError::WindowOverflow {
                    window: window_exp,
                    point: p.iv.a,
                });
            }
        }
        let char_exp = if pieces.is_empty() { Dyadic::ZERO } else { char_exp };
        Ok(StepFunction {
            char_exp,
            window_exp,
            pieces,
        })
    }

    /// Characteristic function of a line set.
    pub fn indicator(set: &LineSet) -> StepFunction {
        StepFunction {
            char_exp: Dyadic::ZERO,
            window_exp: set.window_exp,
            pieces: set
                .intervals()
                .iter()
                .map(|&iv| Piece { iv, v: Cval::ONE })
                .collect(),
        }
    }

    pub fn char_exp(&self) -> Dyadic {
        self.char_exp
    }

    pub fn window_exp(&self) -> u32 {
        self.window_exp
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn with_char(&self, c: Dyadic) -> StepFunction {
        let mut f = self.clone();
        f.char_exp = if f.pieces.is_empty() { Dyadic::ZERO } else { c };
        f
    }

    pub fn support(&self) -> LineSet {
        LineSet::from_intervals(self.window_exp, self.pieces.iter().map(|p| p.iv).collect())
            .expect("pieces are in-window by construction")
    }

    /// Step part at `x` (without the character factor).
    pub fn step_at(&self, x: Dyadic) -> Cval {
        eval_pieces(&self.pieces, x)
    }

    /// Full value `e^{2πicξ}·step(ξ)` at a dyadic point (for oracles).
    pub fn eval(&self, x: Dyadic) -> Complex64 {
        self.step_at(x).to_complex() * unit_phase(self.char_exp * x)
    }

    pub fn breakpoints(&self) -> Vec<Dyadic> {
        let mut out = Vec::with_capacity(2 * self.pieces.len());
        for p in &self.pieces {
            out.push(p.iv.a);
            out.push(p.iv.b);
        }
        out
    }

    fn check_window(&self, other: &StepFunction) -> Result<()> {
        if self.window_exp != other.window_exp {
            return Err(FrameError::WindowMismatch(self.window_exp, other.window_exp));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &StepFunction) -> Result<StepFunction> {
        self.check_window(other)?;
        let mut pieces = Vec::new();
        for p in &self.pieces {
            for q in &other.pieces {
                let a = p.iv.a.max(q.iv.a);
                let b = p.iv.b.min(q.iv.b);
                if a < b {
                    pieces.push(Piece {
                        iv: Interval { a, b },
                        v: p.v.mul(&q.v),
                    });
                }
            }
        }
        StepFunction::from_pieces(self.char_exp + other.char_exp, self.window_exp, pieces)
    }

    pub fn conjugate(&self) -> StepFunction {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece { iv: p.iv, v: p.v.conj() })
            .collect();
        StepFunction::from_pieces(-self.char_exp, self.window_exp, pieces)
            .expect("conjugation preserves canonical form")
    }

    pub fn modulus(&self) -> StepFunction {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece { iv: p.iv, v: p.v.abs() })
            .collect();
        StepFunction::from_pieces(Dyadic::ZERO, self.window_exp, pieces)
            .expect("modulus preserves canonical form")
    }

    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        self.check_window(other)?;
        if !self.pieces.is_empty() && !other.pieces.is_empty() && self.char_exp != other.char_exp {
            return Err(FrameError::CharacterMismatch(self.char_exp, other.char_exp));
        }
        let char_exp = if self.pieces.is_empty() {
            other.char_exp
        } else {
            self.char_exp
        };
        let mut bks = self.breakpoints();
        bks.extend(other.breakpoints());
        bks.sort();
        bks.dedup();
        let mut pieces = Vec::new();
        for w in bks.windows(2) {
            let iv = Interval { a: w[0], b: w[1] };
            let v = self.step_at(iv.midpoint()).add(&other.step_at(iv.midpoint()));
            if !v.is_zero() {
                pieces.push(Piece { iv, v });
            }
        }
        StepFunction::from_pieces(char_exp, self.window_exp, pieces)
    }

    pub fn scale(&self, z: Complex64) -> StepFunction {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece { iv: p.iv, v: p.v.scale(z) })
            .collect();
        StepFunction::from_pieces(self.char_exp, self.window_exp, pieces)
            .expect("scaling preserves canonical form")
    }

    /// `D^{j,∞}f = f(2^j ·)`: pieces shrink by 2^{-j}, character scales by 2^j.
    pub fn dilate_inf(&self, j: i32) -> Result<StepFunction> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                Ok(Piece {
                    iv: Interval {
                        a: p.iv.a.mul_pow2(-j),
                        b: p.iv.b.mul_pow2(-j),
                    },
                    v: p.v,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        StepFunction::from_pieces(self.char_exp.mul_pow2(j), self.window_exp, pieces)
    }

    /// Fourier side of the unitary `D^{-j}`: `f ↦ 2^{j/2} f(2^j ·)`.
    pub fn fourier_dilate(&self, j: i32) -> Result<StepFunction> {
        let mut f = self.dilate_inf(j)?;
        for p in &mut f.pieces {
            p.v = p.v.shift_half_pow(j);
        }
        Ok(f)
    }

    /// `f·χ_E`.
    pub fn restrict(&self, set: &LineSet) -> Result<StepFunction> {
        if set.window_exp != self.window_exp {
            return Err(FrameError::WindowMismatch(self.window_exp, set.window_exp));
        }
        let mut pieces = Vec::new();
        for p in &self.pieces {
            for e in set.intervals() {
                let a = p.iv.a.max(e.a);
                let b = p.iv.b.min(e.b);
                if a < b {
                    pieces.push(Piece {
                        iv: Interval { a, b },
                        v: p.v,
                    });
                }
            }
        }
        StepFunction::from_pieces(self.char_exp, self.window_exp, pieces)
    }

    /// `‖f‖² = Σ |v|²·length` — exact; the character is unimodular.
    pub fn norm_sq(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.v.abs_sq() * p.iv.length().to_f64())
            .sum()
    }

    /// `⟨f, g⟩ = ∫ f·conj(g)`; closed-form when the net character is nonzero.
    pub fn inner_product(&self, other: &StepFunction) -> Result<Complex64> {
        self.check_window(other)?;
        let c = self.char_exp - other.char_exp;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &self.pieces {
            for q in &other.pieces {
                let a = p.iv.a.max(q.iv.a);
                let b = p.iv.b.min(q.iv.b);
                if a < b {
                    let w = p.v.mul(&q.v.conj()).to_complex();
                    if c.is_zero() {
                        acc += w * (b - a).to_f64();
                    } else {
                        // ∫_a^b e^{2πicξ}dξ = (e^{2πicb} − e^{2πica})/(2πic)
                        let tpc = Complex64::new(0.0, 2.0 * PI * c.to_f64());
                        let phase = |x: Dyadic| {
                            let t = 2.0 * PI * (c * x).to_f64();
                            Complex64::new(t.cos(), t.sin())
                        };
                        acc += w * (phase(b) - phase(a)) / tpc;
                    }
                }
            }
        }
        Ok(acc)
    }

    /// `[f, g](ξ) = Σ_k f(ξ+k)·conj(g(ξ+k))` as a 1-periodic function,
    /// character-twisted by `e^{2πi(c_f−c_g)ξ}` with the per-term integer
    /// phases folded into the coefficients.
    pub fn bracket(&self, other: &StepFunction) -> Result<BracketFn> {
        self.check_window(other)?;
        let c = self.char_exp - other.char_exp;
        // overlap regions on the line, then folded into [0,1)
        let mut contributions: Vec<Piece> = Vec::new();
        for p in &self.pieces {
            for q in &other.pieces {
                let a = p.iv.a.max(q.iv.a);
                let b = p.iv.b.min(q.iv.b);
                if a < b {
                    let w = p.v.mul(&q.v.conj());
                    let mut lo = a;
                    while lo < b {
                        let k = lo.floor();
                        let hi = Dyadic::from_int(k + 1).min(b);
                        let shift = Dyadic::from_int(-k);
                        let phase = unit_phase(c * Dyadic::from_int(k));
                        contributions.push(Piece {
                            iv: Interval {
                                a: lo + shift,
                                b: hi + shift,
                            },
                            v: w.scale(phase),
                        });
                        lo = hi;
                    }
                }
            }
        }
        // sum the stacked contributions on a common refinement of [0,1)
        let mut bks: Vec<Dyadic> = Vec::new();
        for p in &contributions {
            bks.push(p.iv.a);
            bks.push(p.iv.b);
        }
        let grid = cells(bks, Dyadic::ZERO, Dyadic::ONE);
        let mut pieces = Vec::new();
        for iv in grid {
            let mid = iv.midpoint();
            let mut v = Cval::ZERO;
            for p in &contributions {
                if p.iv.contains(mid) {
                    v = v.add(&p.v);
                }
            }
            if !v.is_zero() {
                pieces.push(Piece { iv, v });
            }
        }
        Ok(BracketFn {
            char_exp: c,
            values: PeriodicStepFunction::from_pieces(pieces)?,
        })
    }

    /// `p_φ = [φ, φ]`: real, non-negative, character-free.
    pub fn weight(&self) -> Result<PeriodicStepFunction> {
        Ok(self.bracket(self)?.values)
    }
}

/// Result of a bracket: a 1-periodic function `e^{2πicξ}·values(ξ)` on [0,1).
#[derive(Clone, Debug, PartialEq)]
pub struct BracketFn {
    pub char_exp: Dyadic,
    pub values: PeriodicStepFunction,
}

impl BracketFn {
    /// `∫₀¹ |·|²` — the character is unimodular, so only the values matter.
    pub fn abs_sq_integral(&self) -> f64 {
        self.values.abs_sq_integral()
    }

    /// Evaluate the 1-periodic bracket at any dyadic point.
    pub fn eval(&self, x: Dyadic) -> Complex64 {
        let r = x.fract();
        self.values.step_at(r).to_complex() * unit_phase(self.char_exp * r)
    }
}

/// A 1-periodic piecewise-constant complex function on [0,1); zero pieces
/// may be stored explicitly (the stored intervals are the declared domain).
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicStepFunction {
    pieces: Vec<Piece>,
}

impl PeriodicStepFunction {
    pub fn zero() -> PeriodicStepFunction {
        PeriodicStepFunction { pieces: Vec::new() }
    }

    pub fn one() -> PeriodicStepFunction {
        PeriodicStepFunction {
            pieces: vec![Piece {
                iv: Interval {
                    a: Dyadic::ZERO,
                    b: Dyadic::ONE,
                },
                v: Cval::ONE,
            }],
        }
    }

    pub fn constant(v: Cval) -> PeriodicStepFunction {
        if v.is_zero() {
            return PeriodicStepFunction::zero();
        }
        PeriodicStepFunction {
            pieces: vec![Piece {
                iv: Interval {
                    a: Dyadic::ZERO,
                    b: Dyadic::ONE,
                },
                v,
            }],
        }
    }

    pub fn indicator(set: &PeriodicSet) -> PeriodicStepFunction {
        PeriodicStepFunction {
            pieces: set
                .intervals()
                .iter()
                .map(|&iv| Piece { iv, v: Cval::ONE })
                .collect(),
        }
    }

    /// Pieces may include explicit zeros; they define the stored domain.
    pub fn from_pieces(pieces: Vec<Piece>) -> Result<PeriodicStepFunction> {
        let pieces = canonicalize(pieces, true)?;
        for p in &pieces {
            if p.iv.a < Dyadic::ZERO || p.iv.b > Dyadic::ONE {
                return Err(FrameError::Invalid(format!(
                    "periodic piece [{}, {}) outside [0,1)",
                    p.iv.a, p.iv.b
                )));
            }
        }
        Ok(PeriodicStepFunction { pieces })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Union of stored intervals (includes explicit zero pieces).
    pub fn domain(&self) -> PeriodicSet {
        PeriodicSet::from_intervals(self.pieces.iter().map(|p| p.iv).collect())
            .expect("pieces are canonical")
    }

    /// Where the function is nonzero.
    pub fn support(&self) -> PeriodicSet {
        PeriodicSet::from_intervals(
            self.pieces
                .iter()
                .filter(|p| !p.v.is_zero())
                .map(|p| p.iv)
                .collect(),
        )
        .expect("pieces are canonical")
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.v.is_zero())
    }

    /// Value of the 1-periodic extension at any dyadic point.
    pub fn step_at(&self, x: Dyadic) -> Cval {
        eval_pieces(&self.pieces, x.fract())
    }

    pub fn breakpoints(&self) -> Vec<Dyadic> {
        let mut out = Vec::with_capacity(2 * self.pieces.len());
        for p in &self.pieces {
            out.push(p.iv.a);
            out.push(p.iv.b);
        }
        out
    }

    fn joint_cells(&self, other: &PeriodicStepFunction) -> Vec<Interval> {
        let mut bks = self.breakpoints();
        bks.extend(other.breakpoints());
        cells(bks, Dyadic::ZERO, Dyadic::ONE)
    }

    /// Pointwise product; stored domain is the intersection of domains.
    pub fn multiply(&self, other: &PeriodicStepFunction) -> PeriodicStepFunction {
        let dom = self.domain().intersect(&other.domain());
        let mut pieces = Vec::new();
        for iv in self.joint_cells(other) {
            let mid = iv.midpoint();
            if dom.contains(mid) {
                pieces.push(Piece {
                    iv,
                    v: self.step_at(mid).mul(&other.step_at(mid)),
                });
            }
        }
        PeriodicStepFunction::from_pieces(pieces).expect("cells are canonical")
    }

    /// Pointwise sum; stored domain is the union of domains.
    pub fn add(&self, other: &PeriodicStepFunction) -> PeriodicStepFunction {
        let dom = self.domain().union(&other.domain());
        let mut pieces = Vec::new();
        for iv in self.joint_cells(other) {
            let mid = iv.midpoint();
            if dom.contains(mid) {
                pieces.push(Piece {
                    iv,
                    v: self.step_at(mid).add(&other.step_at(mid)),
                });
            }
        }
        PeriodicStepFunction::from_pieces(pieces).expect("cells are canonical")
    }

    pub fn conjugate(&self) -> PeriodicStepFunction {
        PeriodicStepFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece { iv: p.iv, v: p.v.conj() })
                .collect(),
        }
    }

    pub fn abs(&self) -> PeriodicStepFunction {
        PeriodicStepFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece { iv: p.iv, v: p.v.abs() })
                .collect(),
        }
    }

    pub fn scale(&self, z: Complex64) -> PeriodicStepFunction {
        PeriodicStepFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece { iv: p.iv, v: p.v.scale(z) })
                .collect(),
        }
    }

    pub fn map_values(&self, f: impl Fn(&Cval) -> Cval) -> PeriodicStepFunction {
        PeriodicStepFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece { iv: p.iv, v: f(&p.v) })
                .collect(),
        }
    }

    /// Restrict the stored domain to `set` (values unchanged there).
    pub fn restrict_to(&self, set: &PeriodicSet) -> PeriodicStepFunction {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            for e in set.intervals() {
                let a = p.iv.a.max(e.a);
                let b = p.iv.b.min(e.b);
                if a < b {
                    pieces.push(Piece {
                        iv: Interval { a, b },
                        v: p.v,
                    });
                }
            }
        }
        PeriodicStepFunction::from_pieces(pieces).expect("restriction stays canonical")
    }

    /// `ξ ↦ m(ξ + q)` (argument shift; pieces move by −q mod 1).
    pub fn shift_arg(&self, q: Dyadic) -> PeriodicStepFunction {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            let a = (p.iv.a - q).fract();
            let len = p.iv.length();
            let b = a + len;
            if b <= Dyadic::ONE {
                pieces.push(Piece {
                    iv: Interval { a, b },
                    v: p.v,
                });
            } else {
                pieces.push(Piece {
                    iv: Interval { a, b: Dyadic::ONE },
                    v: p.v,
                });
                pieces.push(Piece {
                    iv: Interval {
                        a: Dyadic::ZERO,
                        b: b - Dyadic::ONE,
                    },
                    v: p.v,
                });
            }
        }
        PeriodicStepFunction::from_pieces(pieces).expect("shift stays canonical")
    }

    /// `ξ ↦ m(2ξ)` — a 1/2-periodic function, stored on [0,1).
    pub fn compose_double(&self) -> PeriodicStepFunction {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            let a = p.iv.a.mul_pow2(-1);
            let b = p.iv.b.mul_pow2(-1);
            let half = Dyadic::new(1, 1);
            pieces.push(Piece {
                iv: Interval { a, b },
                v: p.v,
            });
            pieces.push(Piece {
                iv: Interval {
                    a: a + half,
                    b: b + half,
                },
                v: p.v,
            });
        }
        PeriodicStepFunction::from_pieces(pieces).expect("halving stays canonical")
    }

    /// `∫₀¹ |m|²` — exact sum of `|v|²·length`.
    pub fn abs_sq_integral(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.v.abs_sq() * p.iv.length().to_f64())
            .sum()
    }

    /// `∫₀¹ m`.
    pub fn integral(&self) -> Complex64 {
        self.pieces
            .iter()
            .map(|p| p.v.to_complex() * p.iv.length().to_f64())
            .sum()
    }

    pub fn approx_eq(&self, other: &PeriodicStepFunction, tol: f64) -> bool {
        self.joint_cells(other).iter().all(|iv| {
            let mid = iv.midpoint();
            self.step_at(mid).approx_eq(&other.step_at(mid), tol)
        })
    }
}

/// Fourier side of `m • g`: pointwise product of the 1-periodic extension of
/// `m` with a compactly supported step function.
pub fn mul_periodic(m: &PeriodicStepFunction, f: &StepFunction) -> StepFunction {
    mul_periodic_dilated(m, 0, f)
}

/// `ξ ↦ f(ξ)·m(2^{-j}ξ)`: product with a dilated periodic step function
/// (period 2^j on the line).
pub fn mul_periodic_dilated(m: &PeriodicStepFunction, j: i32, f: &StepFunction) -> StepFunction {
    let mut pieces = Vec::new();
    for p in f.pieces() {
        // split at lifted breakpoints 2^j(b + k) of m inside this piece
        let mut bks: Vec<Dyadic> = Vec::new();
        let lo = p.iv.a.mul_pow2(-j).floor();
        let hi = p.iv.b.mul_pow2(-j).floor();
        for k in lo..=hi {
            for b in m.breakpoints() {
                let x = (b + Dyadic::from_int(k)).mul_pow2(j);
                if x > p.iv.a && x < p.iv.b {
                    bks.push(x);
                }
            }
        }
        for iv in cells(bks, p.iv.a, p.iv.b) {
            let v = p.v.mul(&m.step_at(iv.midpoint().mul_pow2(-j)));
            if !v.is_zero() {
                pieces.push(Piece { iv, v });
            }
        }
    }
    StepFunction::from_pieces(f.char_exp(), f.window_exp(), pieces)
        .expect("product support shrinks")
}
