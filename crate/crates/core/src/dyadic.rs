//! Exact arithmetic for dyadic rationals and finite unions of half-open
//! intervals, on the line and on the torus.
//!
//! Every endpoint in this crate is a dyadic rational `num / 2^exp`; dilation
//! by powers of two and translation by half-integers are closed and exact,
//! so set identities are decided without any rounding.

use crate::error::{FrameError, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Default window exponent: all line-side supports live in [-2^4, 2^4).
pub const DEFAULT_WINDOW_EXP: u32 = 4;

/// A dyadic rational `num / 2^exp` in lowest terms (`exp > 0` implies `num` odd).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    num: i64,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    pub fn new(num: i64, exp: u32) -> Dyadic {
        let mut d = Dyadic { num, exp };
        d.reduce();
        d
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic { num: n, exp: 0 }
    }

    /// `1 / 2^k`.
    pub fn half_pow(k: u32) -> Dyadic {
        Dyadic { num: 1, exp: k }
    }

    fn reduce(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.exp -= 1;
        }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    /// Multiply by `2^j` (exact for any sign of `j`).
    pub fn mul_pow2(&self, j: i32) -> Dyadic {
        if self.num == 0 {
            return Dyadic::ZERO;
        }
        if j >= 0 {
            let j = j as u32;
            if self.exp >= j {
                Dyadic::new(self.num, self.exp - j)
            } else {
                Dyadic::new(self.num << (j - self.exp), 0)
            }
        } else {
            Dyadic::new(self.num, self.exp + (-j) as u32)
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> i64 {
        if self.exp == 0 {
            self.num
        } else {
            self.num.div_euclid(1i64 << self.exp)
        }
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(&self) -> Dyadic {
        *self - Dyadic::from_int(self.floor())
    }

    /// Exact conversion (the i64 numerator is well inside f64's 53-bit mantissa
    /// for every value this crate produces).
    pub fn to_f64(&self) -> f64 {
        self.num as f64 * (self.exp as f64).exp2().recip()
    }

    /// Midpoint of two dyadics (exact).
    pub fn midpoint(a: Dyadic, b: Dyadic) -> Dyadic {
        (a + b).mul_pow2(-1)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        let a = (self.num as i128) << (e - self.exp);
        let b = (rhs.num as i128) << (e - rhs.exp);
        let s = a + b;
        Dyadic::new(i64::try_from(s).expect("dyadic overflow"), e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        let p = (self.num as i128) * (rhs.num as i128);
        Dyadic::new(i64::try_from(p).expect("dyadic overflow"), self.exp + rhs.exp)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = (self.num as i128) << (e - self.exp);
        let b = (other.num as i128) << (e - other.exp);
        a.cmp(&b)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

/// Half-open interval `[a, b)` with dyadic endpoints, `a < b`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Interval {
    pub a: Dyadic,
    pub b: Dyadic,
}

impl Interval {
    pub fn new(a: Dyadic, b: Dyadic) -> Result<Interval> {
        if a >= b {
            return Err(FrameError::EmptyInterval { a, b });
        }
        Ok(Interval { a, b })
    }

    pub fn length(&self) -> Dyadic {
        self.b - self.a
    }

    pub fn contains(&self, x: Dyadic) -> bool {
        self.a <= x && x < self.b
    }

    pub fn midpoint(&self) -> Dyadic {
        Dyadic::midpoint(self.a, self.b)
    }
}

/// Sorts and merges overlapping or touching intervals into canonical form.
fn normalize(mut ivs: Vec<Interval>) -> Vec<Interval> {
    ivs.sort_by(|x, y| x.a.cmp(&y.a));
    let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
    for iv in ivs {
        match out.last_mut() {
            Some(last) if iv.a <= last.b => {
                if iv.b > last.b {
                    last.b = iv.b;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

/// A finite union of disjoint half-open intervals inside the window
/// `[-2^W, 2^W)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LineSet {
    pub window_exp: u32,
    intervals: Vec<Interval>,
}

impl LineSet {
    pub fn empty(window_exp: u32) -> LineSet {
        LineSet {
            window_exp,
            intervals: Vec::new(),
        }
    }

    pub fn window(window_exp: u32) -> LineSet {
        let w = Dyadic::from_int(1).mul_pow2(window_exp as i32);
        LineSet {
            window_exp,
            intervals: vec![Interval { a: -w, b: w }],
        }
    }

    pub fn from_intervals(window_exp: u32, ivs: Vec<Interval>) -> Result<LineSet> {
        let ivs = normalize(ivs);
        let w = Dyadic::from_int(1).mul_pow2(window_exp as i32);
        for iv in &ivs {
            if iv.a < -w {
                return Err(FrameError::WindowOverflow {
                    window: window_exp,
                    point: iv.a,
                });
            }
            if iv.b > w {
                return Err(FrameError::WindowOverflow {
                    window: window_exp,
                    point: iv.b,
                });
            }
        }
        Ok(LineSet {
            window_exp,
            intervals: ivs,
        })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> Dyadic {
        self.intervals
            .iter()
            .fold(Dyadic::ZERO, |acc, iv| acc + iv.length())
    }

    pub fn contains(&self, x: Dyadic) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    fn check_window(&self, other: &LineSet) -> Result<()> {
        if self.window_exp != other.window_exp {
            return Err(FrameError::WindowMismatch(self.window_exp, other.window_exp));
        }
        Ok(())
    }

    pub fn union(&self, other: &LineSet) -> Result<LineSet> {
        self.check_window(other)?;
        let mut ivs = self.intervals.clone();
        ivs.extend_from_slice(&other.intervals);
        Ok(LineSet {
            window_exp: self.window_exp,
            intervals: normalize(ivs),
        })
    }

    pub fn intersect(&self, other: &LineSet) -> Result<LineSet> {
        self.check_window(other)?;
        let mut out = Vec::new();
        for x in &self.intervals {
            for y in &other.intervals {
                let a = x.a.max(y.a);
                let b = x.b.min(y.b);
                if a < b {
                    out.push(Interval { a, b });
                }
            }
        }
        Ok(LineSet {
            window_exp: self.window_exp,
            intervals: normalize(out),
        })
    }

    pub fn complement_in_window(&self) -> LineSet {
        let w = Dyadic::from_int(1).mul_pow2(self.window_exp as i32);
        let mut out = Vec::new();
        let mut cursor = -w;
        for iv in &self.intervals {
            if cursor < iv.a {
                out.push(Interval { a: cursor, b: iv.a });
            }
            cursor = iv.b;
        }
        if cursor < w {
            out.push(Interval { a: cursor, b: w });
        }
        LineSet {
            window_exp: self.window_exp,
            intervals: out,
        }
    }

    pub fn set_difference(&self, other: &LineSet) -> Result<LineSet> {
        self.intersect(&other.complement_in_window())
    }

    pub fn is_subset_of(&self, other: &LineSet) -> Result<bool> {
        Ok(self.set_difference(other)?.is_empty())
    }

    /// `2^j * A`; errors if the result escapes the window.
    pub fn dilate(&self, j: i32) -> Result<LineSet> {
        let ivs = self
            .intervals
            .iter()
            .map(|iv| Interval {
                a: iv.a.mul_pow2(j),
                b: iv.b.mul_pow2(j),
            })
            .collect();
        LineSet::from_intervals(self.window_exp, ivs)
    }

    /// `A + q`; errors if the result escapes the window.
    pub fn translate(&self, q: Dyadic) -> Result<LineSet> {
        let ivs = self
            .intervals
            .iter()
            .map(|iv| Interval {
                a: iv.a + q,
                b: iv.b + q,
            })
            .collect();
        LineSet::from_intervals(self.window_exp, ivs)
    }

    /// `(A + Z) ∩ [0, 1)`.
    pub fn periodize(&self) -> PeriodicSet {
        let mut out = Vec::new();
        for iv in &self.intervals {
            // split at integer boundaries, then shift each fragment into [0,1)
            let mut a = iv.a;
            while a < iv.b {
                let next = Dyadic::from_int(a.floor() + 1).min(iv.b);
                let shift = Dyadic::from_int(-a.floor());
                out.push(Interval {
                    a: a + shift,
                    b: next + shift,
                });
                a = next;
            }
        }
        PeriodicSet {
            intervals: normalize(out),
        }
    }

    /// All breakpoints (interval endpoints).
    pub fn breakpoints(&self) -> Vec<Dyadic> {
        let mut out = Vec::with_capacity(2 * self.intervals.len());
        for iv in &self.intervals {
            out.push(iv.a);
            out.push(iv.b);
        }
        out
    }
}

/// A finite union of disjoint half-open intervals inside `[0, 1)`,
/// representing a 1-periodic subset of the line.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PeriodicSet {
    intervals: Vec<Interval>,
}

impl PeriodicSet {
    pub fn empty() -> PeriodicSet {
        PeriodicSet { intervals: Vec::new() }
    }

    pub fn full() -> PeriodicSet {
        PeriodicSet {
            intervals: vec![Interval {
                a: Dyadic::ZERO,
                b: Dyadic::ONE,
            }],
        }
    }

    pub fn from_intervals(ivs: Vec<Interval>) -> Result<PeriodicSet> {
        let ivs = normalize(ivs);
        for iv in &ivs {
            if iv.a < Dyadic::ZERO || iv.b > Dyadic::ONE {
                return Err(FrameError::Invalid(format!(
                    "periodic interval [{}, {}) outside [0,1)",
                    iv.a, iv.b
                )));
            }
        }
        Ok(PeriodicSet { intervals: ivs })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> Dyadic {
        self.intervals
            .iter()
            .fold(Dyadic::ZERO, |acc, iv| acc + iv.length())
    }

    /// Membership of the 1-periodic extension.
    pub fn contains(&self, x: Dyadic) -> bool {
        let r = x.fract();
        self.intervals.iter().any(|iv| iv.contains(r))
    }

    pub fn union(&self, other: &PeriodicSet) -> PeriodicSet {
        let mut ivs = self.intervals.clone();
        ivs.extend_from_slice(&other.intervals);
        PeriodicSet {
            intervals: normalize(ivs),
        }
    }

    pub fn intersect(&self, other: &PeriodicSet) -> PeriodicSet {
        let mut out = Vec::new();
        for x in &self.intervals {
            for y in &other.intervals {
                let a = x.a.max(y.a);
                let b = x.b.min(y.b);
                if a < b {
                    out.push(Interval { a, b });
                }
            }
        }
        PeriodicSet {
            intervals: normalize(out),
        }
    }

    pub fn complement(&self) -> PeriodicSet {
        let mut out = Vec::new();
        let mut cursor = Dyadic::ZERO;
        for iv in &self.intervals {
            if cursor < iv.a {
                out.push(Interval { a: cursor, b: iv.a });
            }
            cursor = iv.b;
        }
        if cursor < Dyadic::ONE {
            out.push(Interval {
                a: cursor,
                b: Dyadic::ONE,
            });
        }
        PeriodicSet { intervals: out }
    }

    pub fn set_difference(&self, other: &PeriodicSet) -> PeriodicSet {
        self.intersect(&other.complement())
    }

    pub fn is_subset_of(&self, other: &PeriodicSet) -> bool {
        self.set_difference(other).is_empty()
    }

    /// `(S + q) mod 1`.
    pub fn translate_mod1(&self, q: Dyadic) -> PeriodicSet {
        let mut out = Vec::new();
        for iv in &self.intervals {
            let a = iv.a + q;
            let shift = Dyadic::from_int(-a.floor());
            let a = a + shift;
            let b = iv.b + q + shift;
            if b <= Dyadic::ONE {
                out.push(Interval { a, b });
            } else {
                out.push(Interval { a, b: Dyadic::ONE });
                out.push(Interval {
                    a: Dyadic::ZERO,
                    b: b - Dyadic::ONE,
                });
            }
        }
        PeriodicSet {
            intervals: normalize(out),
        }
    }

    /// `S ∪ (S + 1/2 mod 1)`; the result is invariant under +1/2 mod 1.
    pub fn half_shift_closure(&self) -> PeriodicSet {
        self.union(&self.translate_mod1(Dyadic::new(1, 1)))
    }

    /// `(S + Z) ∩ [-2^W, 2^W)` as a LineSet.
    pub fn lift(&self, window_exp: u32) -> LineSet {
        let bound = 1i64 << window_exp;
        let mut out = Vec::new();
        for k in -bound..bound {
            let q = Dyadic::from_int(k);
            for iv in &self.intervals {
                out.push(Interval {
                    a: iv.a + q,
                    b: iv.b + q,
                });
            }
        }
        LineSet {
            window_exp,
            intervals: normalize(out),
        }
    }

    pub fn breakpoints(&self) -> Vec<Dyadic> {
        let mut out = Vec::with_capacity(2 * self.intervals.len());
        for iv in &self.intervals {
            out.push(iv.a);
            out.push(iv.b);
        }
        out
    }
}
