//! Directed-rounding interval arithmetic over MPFR floats.
//!
//! Every operation rounds the lower endpoint down and the upper endpoint up,
//! so a [`RealInterval`] always encloses the exact real result. Comparisons
//! are three-valued ([`Verdict`]): a question is answered only when it holds
//! for every point of both enclosures.

use rug::float::Round;
use rug::ops::{DivAssignRound, PowAssignRound};
use rug::{Float, Integer, Rational};

/// Default working precision in mantissa bits.
pub const DEFAULT_PREC: u32 = 256;

/// Outcome of a rigorous comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// True for every representable point of the enclosures.
    Holds,
    /// False for every representable point of the enclosures.
    Fails,
    /// The enclosures straddle the boundary; refine and retry.
    Undecidable,
}

impl Verdict {
    pub fn is_holds(self) -> bool {
        self == Verdict::Holds
    }
}

/// A closed interval `[lo, hi]` of MPFR floats with `lo <= hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealInterval {
    lo: Float,
    hi: Float,
}

fn new_round(prec: u32, src: &Float, round: Round) -> Float {
    Float::with_val_round(prec, src, round).0
}

impl RealInterval {
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(lo.is_finite() && hi.is_finite() && lo <= hi, "invalid interval");
        RealInterval { lo, hi }
    }

    /// The point interval of an exactly representable value.
    pub fn point(x: Float) -> Self {
        RealInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        // f64 -> Float is exact for prec >= 53.
        assert!(prec >= 53);
        Self::point(Float::with_val(prec, x))
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Self {
        RealInterval {
            lo: Float::with_val_round(prec, n, Round::Down).0,
            hi: Float::with_val_round(prec, n, Round::Up).0,
        }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        RealInterval {
            lo: Float::with_val_round(prec, r, Round::Down).0,
            hi: Float::with_val_round(prec, r, Round::Up).0,
        }
    }

    /// Outward-rounded interval from exact rational endpoints.
    pub fn from_rational_bounds(lo: &Rational, hi: &Rational, prec: u32) -> Self {
        assert!(lo <= hi);
        RealInterval {
            lo: Float::with_val_round(prec, lo, Round::Down).0,
            hi: Float::with_val_round(prec, hi, Round::Up).0,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::point(Float::with_val(prec, 0))
    }

    pub fn one(prec: u32) -> Self {
        Self::point(Float::with_val(prec, 1))
    }

    /// Enclosure of (1 + sqrt 5)/2.
    pub fn golden_ratio(prec: u32) -> Self {
        let mut lo = Float::with_val(prec, 5);
        let mut hi = Float::with_val(prec, 5);
        lo.sqrt_round(Round::Down);
        hi.sqrt_round(Round::Up);
        lo += 1;
        hi += 1;
        lo.div_assign_round(2, Round::Down);
        hi.div_assign_round(2, Round::Up);
        RealInterval { lo, hi }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn width(&self) -> Float {
        Float::with_val_round(self.prec(), &self.hi - &self.lo, Round::Up).0
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi < 0
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        RealInterval {
            lo: Float::with_val_round(prec, &self.lo + &rhs.lo, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi + &rhs.hi, Round::Up).0,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        RealInterval {
            lo: Float::with_val_round(prec, &self.lo - &rhs.hi, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi - &rhs.lo, Round::Up).0,
        }
    }

    pub fn neg(&self) -> Self {
        RealInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        let pairs = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let down = Float::with_val_round(prec, a * b, Round::Down).0;
            let up = Float::with_val_round(prec, a * b, Round::Up).0;
            lo = Some(match lo {
                Some(cur) => cur.min(&down),
                None => down,
            });
            hi = Some(match hi {
                Some(cur) => cur.max(&up),
                None => up,
            });
        }
        RealInterval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    /// Division; the divisor must not contain zero.
    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.contains_zero(), "division by interval containing zero");
        let prec = self.prec().max(rhs.prec());
        let pairs = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let down = Float::with_val_round(prec, a / b, Round::Down).0;
            let up = Float::with_val_round(prec, a / b, Round::Up).0;
            lo = Some(match lo {
                Some(cur) => cur.min(&down),
                None => down,
            });
            hi = Some(match hi {
                Some(cur) => cur.max(&up),
                None => up,
            });
        }
        RealInterval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    /// Reciprocal; requires a sign-definite interval.
    pub fn recip(&self) -> Self {
        Self::one(self.prec()).div(self)
    }

    pub fn abs(&self) -> Self {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let hi = if self.hi.clone().abs() > self.lo.clone().abs() {
                self.hi.clone().abs()
            } else {
                self.lo.clone().abs()
            };
            RealInterval {
                lo: Float::with_val(self.prec(), 0),
                hi,
            }
        }
    }

    /// Natural logarithm; requires `lo > 0`.
    pub fn ln(&self) -> Self {
        assert!(self.lo > 0, "ln of interval touching zero");
        let prec = self.prec();
        let mut lo = new_round(prec, &self.lo, Round::Down);
        let mut hi = new_round(prec, &self.hi, Round::Up);
        lo.ln_round(Round::Down);
        hi.ln_round(Round::Up);
        RealInterval { lo, hi }
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let mut lo = new_round(prec, &self.lo, Round::Down);
        let mut hi = new_round(prec, &self.hi, Round::Up);
        lo.exp_round(Round::Down);
        hi.exp_round(Round::Up);
        RealInterval { lo, hi }
    }

    /// `self^e` for an exact real exponent; requires `lo > 0`.
    ///
    /// For e > 0 the power is increasing in the base, for e < 0 decreasing;
    /// each endpoint is a single correctly rounded MPFR `pow`.
    pub fn pow_f64(&self, e: f64) -> Self {
        assert!(self.lo > 0, "pow of interval touching zero");
        let prec = self.prec();
        if e == 0.0 {
            return Self::one(prec);
        }
        let (mut lo, mut hi) = if e > 0.0 {
            (
                new_round(prec, &self.lo, Round::Down),
                new_round(prec, &self.hi, Round::Up),
            )
        } else {
            (
                new_round(prec, &self.hi, Round::Down),
                new_round(prec, &self.lo, Round::Up),
            )
        };
        lo.pow_assign_round(e, Round::Down);
        hi.pow_assign_round(e, Round::Up);
        RealInterval { lo, hi }
    }

    /// `self^e` for an interval exponent, via exp(e * ln self); requires `lo > 0`.
    pub fn pow(&self, e: &Self) -> Self {
        self.ln().mul(e).exp()
    }

    /// Rigorous `self < rhs`.
    pub fn lt(&self, rhs: &Self) -> Verdict {
        if self.hi < rhs.lo {
            Verdict::Holds
        } else if self.lo >= rhs.hi {
            Verdict::Fails
        } else {
            Verdict::Undecidable
        }
    }

    /// Rigorous `self <= rhs`.
    pub fn le(&self, rhs: &Self) -> Verdict {
        if self.hi <= rhs.lo {
            Verdict::Holds
        } else if self.lo > rhs.hi {
            Verdict::Fails
        } else {
            Verdict::Undecidable
        }
    }

    /// Rigorous `self > rhs`.
    pub fn gt(&self, rhs: &Self) -> Verdict {
        rhs.lt(self)
    }

    /// Rigorous `self >= rhs`.
    pub fn ge(&self, rhs: &Self) -> Verdict {
        rhs.le(self)
    }

    pub fn overlaps(&self, rhs: &Self) -> bool {
        self.lo <= rhs.hi && rhs.lo <= self.hi
    }

    /// Smallest interval containing both.
    pub fn hull(&self, rhs: &Self) -> Self {
        RealInterval {
            lo: if self.lo <= rhs.lo {
                self.lo.clone()
            } else {
                rhs.lo.clone()
            },
            hi: if self.hi >= rhs.hi {
                self.hi.clone()
            } else {
                rhs.hi.clone()
            },
        }
    }

    /// Sum of a slice in the given (fixed) order.
    pub fn sum(terms: &[Self], prec: u32) -> Self {
        let mut acc = Self::zero(prec);
        for t in terms {
            acc = acc.add(t);
        }
        acc
    }

    /// Decimal rendering of both endpoints with enough digits to round-trip.
    pub fn display_decimal(&self, digits: usize) -> String {
        format!(
            "[{}, {}]",
            fmt_float(&self.lo, digits),
            fmt_float(&self.hi, digits)
        )
    }
}

/// Deterministic decimal formatting of an MPFR float.
pub fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let (sign, mantissa, exp) = x.to_sign_string_exp(10, Some(digits));
    let s = if sign { "-" } else { "" };
    format!("{s}0.{mantissa}e{}", exp.unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_encloses() {
        let x = RealInterval::from_integer(&Integer::from(2), 128);
        let l = x.ln();
        assert!(l.lo() < l.hi());
        assert!(l.lo().to_f64() <= 0.6931471805599453);
        assert!(l.hi().to_f64() >= 0.6931471805599453);
    }

    #[test]
    fn mul_signs() {
        let a = RealInterval::from_rational_bounds(
            &Rational::from((-1, 2)),
            &Rational::from((1, 3)),
            128,
        );
        let b = RealInterval::from_rational_bounds(
            &Rational::from((-2, 1)),
            &Rational::from((5, 1)),
            128,
        );
        let p = a.mul(&b);
        // candidates: 1, -5/2, -2/3, 5/3 -> [-5/2, 5/3]
        assert!(p.lo().to_f64() <= -2.5 && p.lo().to_f64() > -2.5001);
        assert!(p.hi().to_f64() >= 5.0 / 3.0 - 1e-12);
    }

    #[test]
    fn pow_interval_exponent() {
        let base = RealInterval::from_f64(4.0, 128);
        let e = RealInterval::from_f64(0.5, 128);
        let r = base.pow(&e);
        assert!(r.lo().to_f64() <= 2.0 && 2.0 <= r.hi().to_f64());
    }

    #[test]
    fn golden_ratio_enclosure() {
        let phi = RealInterval::golden_ratio(256);
        assert!(phi.lo().to_f64() <= 1.618033988749895);
        assert!(phi.hi().to_f64() >= 1.618033988749895);
        assert!(phi.width().to_f64() < 1e-70);
    }

    #[test]
    fn three_valued_comparisons() {
        let a = RealInterval::from_f64(1.0, 64);
        let b = RealInterval::from_f64(2.0, 64);
        assert_eq!(a.lt(&b), Verdict::Holds);
        assert_eq!(b.lt(&a), Verdict::Fails);
        let wide = RealInterval::from_rational_bounds(
            &Rational::from((1, 2)),
            &Rational::from((3, 1)),
            64,
        );
        assert_eq!(wide.lt(&b), Verdict::Undecidable);
    }

    #[test]
    fn directed_reciprocal() {
        let x = RealInterval::from_integer(&Integer::from(3), 128);
        let r = x.recip();
        assert!(r.lo() < r.hi());
        let back = r.mul(&x);
        assert!(back.lo() <= &1.0 && back.hi() >= &1.0);
    }
}
