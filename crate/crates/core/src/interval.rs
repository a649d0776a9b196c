//! Closed real intervals with outward-rounded endpoint arithmetic.
//!
//! An [`Interval`] is either `EMPTY` or a connected closed set `[lo, hi]` of
//! the extended reals with `lo <= hi`. Endpoints are `f64`; every arithmetic
//! step rounds the lower endpoint towards `-inf` and the upper endpoint
//! towards `+inf`, so the computed interval always contains the exact real
//! result. Rounding is directed per operation with error-free transforms
//! (two-sum, fused multiply-add residuals), which keeps results exact whenever
//! the round-to-nearest result already is: integers up to 2^53 never widen.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest value of a 32-bit unsigned C integer.
pub const MAX_UINT: f64 = 4_294_967_295.0;
/// Largest value of a 32-bit signed C integer.
pub const MAX_INT: f64 = 2_147_483_647.0;
/// Smallest value of a 32-bit signed C integer.
pub const MIN_INT: f64 = -2_147_483_648.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("empty interval has no width/center")]
    Empty,
}

/// The four binary arithmetic operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Elementary unary functions supported by the contractors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryFn {
    Neg,
    Sqr,
    Sqrt,
}

#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const EMPTY: Interval = Interval {
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
    };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Builds `[lo, hi]`. Anything that is not a valid non-empty interval
    /// (NaN endpoints, `lo > hi`, `lo = +inf`, `hi = -inf`) yields `EMPTY`.
    pub fn new(lo: f64, hi: f64) -> Interval {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            Interval::EMPTY
        } else {
            // normalise -0.0 so that equality and display are predictable
            Interval {
                lo: lo + 0.0,
                hi: hi + 0.0,
            }
        }
    }

    pub fn point(v: f64) -> Interval {
        Interval::new(v, v)
    }

    /// `(-inf, hi]`
    pub fn at_most(hi: f64) -> Interval {
        Interval::new(f64::NEG_INFINITY, hi)
    }

    /// `[lo, +inf)`
    pub fn at_least(lo: f64) -> Interval {
        Interval::new(lo, f64::INFINITY)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        if self.is_empty() {
            None
        } else {
            Some((self.lo, self.hi))
        }
    }

    /// Lower endpoint.
    ///
    /// Panics on `EMPTY`; use [`Interval::bounds`] when emptiness is possible.
    pub fn lo(&self) -> f64 {
        assert!(!self.is_empty(), "lower bound of an empty interval");
        self.lo
    }

    /// Upper endpoint. Panics on `EMPTY`.
    pub fn hi(&self) -> f64 {
        assert!(!self.is_empty(), "upper bound of an empty interval");
        self.hi
    }

    pub fn width(&self) -> Result<f64, IntervalError> {
        match self.bounds() {
            None => Err(IntervalError::Empty),
            Some((lo, hi)) => Ok(sub_up(hi, lo)),
        }
    }

    pub fn center(&self) -> Result<f64, IntervalError> {
        match self.bounds() {
            None => Err(IntervalError::Empty),
            Some((lo, hi)) if lo.is_infinite() && hi.is_infinite() => Ok(0.0),
            Some((lo, hi)) if lo.is_infinite() || hi.is_infinite() => Ok(lo + hi),
            Some((lo, hi)) => {
                let c = lo / 2.0 + hi / 2.0;
                Ok(c)
            }
        }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.is_empty() && self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        !self.is_empty() && self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// `self ⊆ other`; the empty interval is a subset of everything.
    pub fn is_subset(&self, other: &Interval) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// Smallest interval containing both operands (the join `⊔`).
    pub fn hull(&self, other: &Interval) -> Interval {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// `[ceil(lo), floor(hi)]`: the tightest interval with the same integer points.
    pub fn integral_tighten(&self) -> Interval {
        match self.bounds() {
            None => Interval::EMPTY,
            Some((lo, hi)) => Interval::new(lo.ceil(), hi.floor()),
        }
    }

    pub fn apply(op: ArithOp, a: Interval, b: Interval) -> Interval {
        match op {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
            ArithOp::Div => a / b,
        }
    }

    pub fn apply_fn(f: UnaryFn, a: Interval) -> Interval {
        match f {
            UnaryFn::Neg => -a,
            UnaryFn::Sqr => a.sqr(),
            UnaryFn::Sqrt => a.sqrt(),
        }
    }

    pub fn sqr(&self) -> Interval {
        let Some((lo, hi)) = self.bounds() else {
            return Interval::EMPTY;
        };
        if lo >= 0.0 {
            Interval::new(mul_down(lo, lo), mul_up(hi, hi))
        } else if hi <= 0.0 {
            Interval::new(mul_down(hi, hi), mul_up(lo, lo))
        } else {
            Interval::new(0.0, mul_up(lo, lo).max(mul_up(hi, hi)))
        }
    }

    pub fn sqrt(&self) -> Interval {
        let clipped = self.intersect(&Interval::at_least(0.0));
        match clipped.bounds() {
            None => Interval::EMPTY,
            Some((lo, hi)) => Interval::new(sqrt_down(lo), sqrt_up(hi)),
        }
    }

    /// Generalised division hull: `{a' / b' | a' ∈ self, b' ∈ divisor, b' ≠ 0}`
    /// closed and hulled into a single interval.
    fn div_interval(self, divisor: Interval) -> Interval {
        let (Some((al, ah)), Some((bl, bh))) = (self.bounds(), divisor.bounds()) else {
            return Interval::EMPTY;
        };
        if bl == 0.0 && bh == 0.0 {
            return Interval::EMPTY;
        }
        if bl > 0.0 {
            if al >= 0.0 {
                Interval::new(div_down(al, bh), div_up(ah, bl))
            } else if ah <= 0.0 {
                Interval::new(div_down(al, bl), div_up(ah, bh))
            } else {
                Interval::new(div_down(al, bl), div_up(ah, bl))
            }
        } else if bh < 0.0 {
            if al >= 0.0 {
                Interval::new(div_down(ah, bh), div_up(al, bl))
            } else if ah <= 0.0 {
                Interval::new(div_down(ah, bl), div_up(al, bh))
            } else {
                Interval::new(div_down(ah, bh), div_up(al, bh))
            }
        } else if al <= 0.0 && ah >= 0.0 {
            Interval::ENTIRE
        } else if bl == 0.0 {
            // divisor [0, bh]
            if al > 0.0 {
                Interval::at_least(div_down(al, bh))
            } else {
                Interval::at_most(div_up(ah, bh))
            }
        } else if bh == 0.0 {
            // divisor [bl, 0]
            if al > 0.0 {
                Interval::at_most(div_up(al, bl))
            } else {
                Interval::at_least(div_down(ah, bl))
            }
        } else {
            Interval::ENTIRE
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        Interval::new(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        Interval::new(sub_down(self.lo, rhs.hi), sub_up(self.hi, rhs.lo))
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        let pairs = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = pairs
            .iter()
            .map(|&(a, b)| mul_down(a, b))
            .fold(f64::INFINITY, f64::min);
        let hi = pairs
            .iter()
            .map(|&(a, b)| mul_up(a, b))
            .fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi)
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        self.div_interval(rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        if self.is_empty() {
            return Interval::EMPTY;
        }
        Interval::new(-self.hi, -self.lo)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bounds() {
            None => write!(f, "empty"),
            Some((lo, hi)) => write!(f, "[{}, {}]", fmt_bound(lo), fmt_bound(hi)),
        }
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Formats an endpoint: integers without a fractional part, infinities as
/// `-inf`/`+inf`, everything else in shortest round-trip form.
pub fn fmt_bound(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if v.fract() == 0.0 && v.abs() < 1e16 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

// Directed rounding primitives. Each returns a bound on the exact result of
// the real operation in the requested direction.

fn saturate_down(r: f64) -> f64 {
    // a finite operation overflowed to +inf; the true value is finite
    if r == f64::INFINITY {
        f64::MAX
    } else {
        r
    }
}

fn saturate_up(r: f64) -> f64 {
    if r == f64::NEG_INFINITY {
        f64::MIN
    } else {
        r
    }
}

/// Error term of `a + b` (two-sum); zero iff the float sum is exact.
fn add_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !a.is_finite() || !b.is_finite() {
        return s;
    }
    if !s.is_finite() {
        return saturate_down(s);
    }
    if add_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !a.is_finite() || !b.is_finite() {
        return s;
    }
    if !s.is_finite() {
        return saturate_up(s);
    }
    if add_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

pub(crate) fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

pub(crate) fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

/// Below this magnitude the fma residual may itself be rounded.
const TINY: f64 = 1e-290;

fn mul_exact_or(a: f64, b: f64) -> Result<f64, (f64, f64)> {
    // 0 * inf is taken as 0: endpoint products of closed intervals
    if a == 0.0 || b == 0.0 {
        return Ok(0.0);
    }
    let p = a * b;
    if !a.is_finite() || !b.is_finite() {
        return Ok(p);
    }
    Err((p, a.mul_add(b, -p)))
}

pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    match mul_exact_or(a, b) {
        Ok(p) => p,
        Err((p, _)) if !p.is_finite() => saturate_down(p),
        Err((p, _)) if p.abs() < TINY => p.next_down(),
        Err((p, err)) => {
            if err < 0.0 {
                p.next_down()
            } else {
                p
            }
        }
    }
}

pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    match mul_exact_or(a, b) {
        Ok(p) => p,
        Err((p, _)) if !p.is_finite() => saturate_up(p),
        Err((p, _)) if p.abs() < TINY => p.next_up(),
        Err((p, err)) => {
            if err > 0.0 {
                p.next_up()
            } else {
                p
            }
        }
    }
}

/// Sign of `a/b - q` for the float quotient `q`, or `None` when the residual
/// cannot be trusted.
fn div_residual_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if q.abs() < TINY || a.abs() < TINY {
        return None;
    }
    let r = (-q).mul_add(b, a);
    Some(r * b.signum())
}

pub(crate) fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if !a.is_finite() || !b.is_finite() {
        return q + 0.0;
    }
    if !q.is_finite() {
        return saturate_down(q);
    }
    match div_residual_sign(a, b, q) {
        None => q.next_down(),
        Some(s) if s < 0.0 => q.next_down(),
        Some(_) => q,
    }
}

pub(crate) fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if !a.is_finite() || !b.is_finite() {
        return q + 0.0;
    }
    if !q.is_finite() {
        return saturate_up(q);
    }
    match div_residual_sign(a, b, q) {
        None => q.next_up(),
        Some(s) if s > 0.0 => q.next_up(),
        Some(_) => q,
    }
}

fn sqrt_down(x: f64) -> f64 {
    let s = x.sqrt();
    if !x.is_finite() || x == 0.0 {
        return s;
    }
    if (-s).mul_add(s, x) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

fn sqrt_up(x: f64) -> f64 {
    let s = x.sqrt();
    if !x.is_finite() || x == 0.0 {
        return s;
    }
    if (-s).mul_add(s, x) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi)
    }

    #[test]
    fn add_endpoint_sums() {
        assert_eq!(iv(0.0, 20.0) + iv(-20.0, 0.0), iv(-20.0, 20.0));
    }

    #[test]
    fn sub_uses_opposite_endpoints() {
        assert_eq!(iv(0.0, MAX_UINT) - iv(0.0, 20.0), iv(-20.0, MAX_UINT));
    }

    #[test]
    fn mul_four_products() {
        assert_eq!(iv(-2.0, 3.0) * iv(-1.0, 4.0), iv(-8.0, 12.0));
    }

    #[test]
    fn mul_zero_times_infinity_is_zero() {
        assert_eq!(iv(0.0, 1.0) * Interval::at_least(0.0), Interval::at_least(0.0));
        assert_eq!(iv(0.0, 0.0) * Interval::ENTIRE, iv(0.0, 0.0));
    }

    #[test]
    fn division_cases() {
        assert_eq!(iv(1.0, 2.0) / iv(0.0, 0.0), Interval::EMPTY);
        assert_eq!(iv(-1.0, 2.0) / iv(-1.0, 1.0), Interval::ENTIRE);
        assert_eq!(iv(1.0, 2.0) / iv(0.0, 4.0), Interval::at_least(0.25));
        assert_eq!(iv(-2.0, -1.0) / iv(0.0, 4.0), Interval::at_most(-0.25));
        assert_eq!(iv(1.0, 2.0) / iv(-4.0, 0.0), Interval::at_most(-0.25));
        assert_eq!(iv(1.0, 2.0) / iv(-4.0, 4.0), Interval::ENTIRE);
        assert_eq!(iv(6.0, 8.0) / iv(2.0, 4.0), iv(1.5, 4.0));
        assert_eq!(iv(1.0, 2.0) / Interval::at_least(1.0), iv(0.0, 2.0));
    }

    #[test]
    fn inexact_division_is_widened() {
        let third = iv(1.0, 1.0) / iv(3.0, 3.0);
        let (lo, hi) = third.bounds().unwrap();
        assert!(lo < hi);
        assert!(lo * 3.0 <= 1.0 && hi * 3.0 >= 1.0);
    }

    #[test]
    fn unary_functions() {
        assert_eq!(-iv(2.0, 5.0), iv(-5.0, -2.0));
        assert_eq!(iv(-2.0, 3.0).sqr(), iv(0.0, 9.0));
        assert_eq!(iv(-3.0, -2.0).sqr(), iv(4.0, 9.0));
        assert_eq!(iv(-5.0, -1.0).sqrt(), Interval::EMPTY);
        assert_eq!(iv(-5.0, 4.0).sqrt(), iv(0.0, 2.0));
    }

    #[test]
    fn sqrt_of_decimal_bounds_contains_exact_roots() {
        let r = iv(0.25, 1.44).sqrt();
        assert!(r.contains(0.5) && r.contains(1.2));
        assert!(r.width().unwrap() < 0.7 + 1e-12);
    }

    #[test]
    fn set_operations() {
        assert_eq!(iv(0.0, 30.0).intersect(&iv(20.0, 40.0)), iv(20.0, 30.0));
        assert!(iv(1.0, 5.0).intersect(&iv(6.0, 9.0)).is_empty());
        assert_eq!(iv(0.0, 1.0).hull(&iv(3.0, 4.0)), iv(0.0, 4.0));
        assert_eq!(Interval::EMPTY.hull(&iv(3.0, 4.0)), iv(3.0, 4.0));
    }

    #[test]
    fn width_and_center() {
        assert_eq!(iv(0.0, 20.0).width(), Ok(20.0));
        assert_eq!(iv(20.0, 30.0).center(), Ok(25.0));
        assert_eq!(iv(5.0, 5.0).width(), Ok(0.0));
        assert!(iv(5.0, 5.0).is_degenerate());
        assert_eq!(Interval::EMPTY.width(), Err(IntervalError::Empty));
        assert_eq!(Interval::EMPTY.center(), Err(IntervalError::Empty));
    }

    #[test]
    fn integral_tightening() {
        assert_eq!(iv(0.3, 9.7).integral_tighten(), iv(1.0, 9.0));
        assert!(iv(2.2, 2.8).integral_tighten().is_empty());
        assert_eq!(iv(-20.0, 0.0).integral_tighten(), iv(-20.0, 0.0));
        assert_eq!(Interval::at_least(0.5).integral_tighten(), Interval::at_least(1.0));
    }

    #[test]
    fn nan_and_inverted_bounds_are_empty() {
        assert!(Interval::new(f64::NAN, 1.0).is_empty());
        assert!(Interval::new(2.0, 1.0).is_empty());
        assert!(Interval::new(f64::INFINITY, f64::INFINITY).is_empty());
        assert!((Interval::EMPTY + iv(0.0, 1.0)).is_empty());
        assert!((iv(0.0, 1.0) * Interval::EMPTY).is_empty());
    }

    #[test]
    fn display() {
        assert_eq!(iv(1.0, MAX_INT).to_string(), "[1, 2147483647]");
        assert_eq!(Interval::at_most(0.0).to_string(), "[-inf, 0]");
        assert_eq!(iv(0.5, 1.25).to_string(), "[0.5, 1.25]");
        assert_eq!(Interval::EMPTY.to_string(), "empty");
    }

    #[test]
    fn large_integers_stay_exact() {
        let a = iv(1.0, MAX_INT);
        let b = iv(0.0, 1000.0);
        assert_eq!(b - a, iv(-MAX_INT, 999.0));
        assert_eq!(iv(65_536.0, 65_536.0) * iv(65_535.0, 65_536.0), iv(4_294_901_760.0, 4_294_967_296.0));
    }
}
