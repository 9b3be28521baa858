//! Exact continued-fraction engine.
//!
//! Partial quotients, big-integer convergents via the classical recurrence
//! (seeds P₋₁ = 1, Q₋₁ = 0, P₀ = v₀, Q₀ = 1), certified expansion of interval
//! enclosures, and the periodic expansion of quadratic irrationals. All
//! arithmetic in this module is exact: integers, rationals, and rational
//! interval endpoints. Nothing here rounds.

use crate::error::{Error, Result};
use crate::real::{RealInterval, Verdict};
use rug::ops::Pow;
use rug::{Integer, Rational};
use std::collections::HashMap;
use std::fmt;

/// Tail of a partial-quotient sequence after `v0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    /// Finitely many quotients; the represented number is rational.
    Finite(Vec<Integer>),
    /// `head` followed by `block` repeated forever.
    Periodic { head: Vec<Integer>, block: Vec<Integer> },
    /// 1, 2, 1, 1, 4, 1, 1, 6, ... (v_i = 2(i+1)/3 when i ≡ 2 mod 3, else 1).
    EPattern,
}

/// A continued-fraction digit sequence [v₀; v₁, v₂, ...] with vₙ ≥ 1 for n ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialQuotients {
    v0: Integer,
    tail: Tail,
}

impl PartialQuotients {
    pub fn new(v0: Integer, tail: Tail) -> Result<Self> {
        let check = |vs: &[Integer]| -> Result<()> {
            for v in vs {
                if *v < 1 {
                    return Err(Error::InvalidInput(format!(
                        "partial quotient {v} < 1"
                    )));
                }
            }
            Ok(())
        };
        match &tail {
            Tail::Finite(vs) => check(vs)?,
            Tail::Periodic { head, block } => {
                check(head)?;
                check(block)?;
                if block.is_empty() {
                    return Err(Error::InvalidInput("empty periodic block".into()));
                }
            }
            Tail::EPattern => {}
        }
        Ok(PartialQuotients { v0, tail })
    }

    pub fn from_i64s(v0: i64, tail: &[i64]) -> Result<Self> {
        Self::new(
            Integer::from(v0),
            Tail::Finite(tail.iter().map(|&v| Integer::from(v)).collect()),
        )
    }

    /// The golden mean (1 + sqrt 5)/2 = [1; 1, 1, 1, ...].
    pub fn golden() -> Self {
        PartialQuotients {
            v0: Integer::from(1),
            tail: Tail::Periodic {
                head: vec![],
                block: vec![Integer::from(1)],
            },
        }
    }

    /// sqrt 2 = [1; 2, 2, 2, ...].
    pub fn sqrt2() -> Self {
        PartialQuotients {
            v0: Integer::from(1),
            tail: Tail::Periodic {
                head: vec![],
                block: vec![Integer::from(2)],
            },
        }
    }

    /// e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...].
    pub fn e_pattern() -> Self {
        PartialQuotients {
            v0: Integer::from(2),
            tail: Tail::EPattern,
        }
    }

    pub fn v0(&self) -> &Integer {
        &self.v0
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Quotient vₙ, or None past the end of a finite tail.
    pub fn quotient(&self, n: usize) -> Option<Integer> {
        if n == 0 {
            return Some(self.v0.clone());
        }
        let i = n - 1; // index into the tail
        match &self.tail {
            Tail::Finite(vs) => vs.get(i).cloned(),
            Tail::Periodic { head, block } => {
                if i < head.len() {
                    Some(head[i].clone())
                } else {
                    Some(block[(i - head.len()) % block.len()].clone())
                }
            }
            Tail::EPattern => {
                let i1 = n; // 1-based tail index
                if i1 % 3 == 2 {
                    Some(Integer::from(2 * (i1 / 3 + 1)))
                } else {
                    Some(Integer::from(1))
                }
            }
        }
    }

    /// Largest available index, or None when the sequence is infinite.
    pub fn available_depth(&self) -> Option<usize> {
        match &self.tail {
            Tail::Finite(vs) => Some(vs.len()),
            _ => None,
        }
    }

    /// True when the tail never ends (the represented number is irrational).
    pub fn is_infinite(&self) -> bool {
        self.available_depth().is_none()
    }
}

impl fmt::Display for PartialQuotients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};", self.v0)?;
        match &self.tail {
            Tail::Finite(vs) => {
                let s: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, " {}]", s.join(", "))
            }
            Tail::Periodic { head, block } => {
                for v in head {
                    write!(f, " {v},")?;
                }
                let s: Vec<String> = block.iter().map(|v| v.to_string()).collect();
                write!(f, " ({})*]", s.join(", "))
            }
            Tail::EPattern => write!(f, " 1, 2, 1, 1, 4, ...]"),
        }
    }
}

/// The exact rational Pₙ/Qₙ at depth n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub n: usize,
    pub p: Integer,
    pub q: Integer,
}

impl Convergent {
    pub fn value(&self) -> Rational {
        Rational::from((self.p.clone(), self.q.clone()))
    }
}

/// Convergents P₀/Q₀ ... P_depth/Q_depth by the standard recurrence
/// Pₙ = vₙPₙ₋₁ + Pₙ₋₂, Qₙ = vₙQₙ₋₁ + Qₙ₋₂.
pub fn convergents(pq: &PartialQuotients, depth: usize) -> Result<Vec<Convergent>> {
    let mut out = Vec::with_capacity(depth + 1);
    let mut p_prev = Integer::from(1); // P₋₁
    let mut q_prev = Integer::from(0); // Q₋₁
    let mut p = pq.v0.clone(); // P₀
    let mut q = Integer::from(1); // Q₀
    out.push(Convergent {
        n: 0,
        p: p.clone(),
        q: q.clone(),
    });
    for n in 1..=depth {
        let v = pq.quotient(n).ok_or(Error::DepthUnavailable {
            requested: depth,
            available: n - 1,
        })?;
        let p_next = Integer::from(&v * &p) + &p_prev;
        let q_next = Integer::from(&v * &q) + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        debug_assert!({
            // PₙQₙ₋₁ − Pₙ₋₁Qₙ = (−1)^{n−1}, which also forces gcd(Pₙ,Qₙ) = 1
            let det = Integer::from(&p * &q_prev) - Integer::from(&p_prev * &q);
            det == if n % 2 == 1 { 1 } else { -1 }
        });
        out.push(Convergent {
            n,
            p: p.clone(),
            q: q.clone(),
        });
    }
    Ok(out)
}

/// Exact value of the finite fraction [v₀; v₁, ..., vₙ] by bottom-up folding.
/// Independent of the recurrence in [`convergents`]; used as its oracle.
pub fn finite_cf_value(pq: &PartialQuotients, n: usize) -> Result<Rational> {
    let mut acc: Option<Rational> = None;
    for i in (1..=n).rev() {
        let v = pq.quotient(i).ok_or(Error::DepthUnavailable {
            requested: n,
            available: i - 1,
        })?;
        let x = match acc {
            None => Rational::from(v),
            Some(a) => Rational::from(v) + a.recip(),
        };
        acc = Some(x);
    }
    Ok(match acc {
        None => Rational::from(pq.v0.clone()),
        Some(a) => Rational::from(pq.v0.clone()) + a.recip(),
    })
}

/// Per-index check of the denominator growth bound Qₙ > φ^{n−1}/2 for n ≥ 1.
///
/// Evaluated exactly: φ^{n−1} = F_{n−1}φ + F_{n−2}, and `x > Fφ` reduces to an
/// integer-square comparison, so a reported `true` is rigorous (and a reported
/// `false` would be as well).
pub fn check_growth_bound(convs: &[Convergent]) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    // Fibonacci with F₋₁ = 1, F₀ = 0
    let mut f_prev = Integer::from(1); // F_{n-2}, starts at F₋₁ for n = 1
    let mut f = Integer::from(0); // F_{n-1}, starts at F₀ for n = 1
    let mut idx = 1usize;
    for c in convs.iter().filter(|c| c.n >= 1) {
        while idx < c.n {
            let next = Integer::from(&f + &f_prev);
            f_prev = std::mem::replace(&mut f, next);
            idx += 1;
        }
        // 2Qₙ > F_{n−1}φ + F_{n−2}  ⇔  u := 2Qₙ − F_{n−2} > F_{n−1}φ
        // and for F ≥ 1:  u > Fφ  ⇔  2u − F > F√5  ⇔  (2u − F)² > 5F² (u > 0)
        let u = Integer::from(2 * &c.q) - &f_prev;
        let ok = if f == 0 {
            // n = 1: bound is 1/2
            u > 0
        } else if u <= 0 {
            false
        } else {
            let lhs = Integer::from(2 * &u) - &f;
            lhs > 0 && lhs.clone().square() > Integer::from(5) * f.clone().square()
        };
        out.push((c.n, ok));
    }
    out
}

/// An interval enclosure lo < ν < hi with exact rational endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedReal {
    lo: Rational,
    hi: Rational,
}

impl CertifiedReal {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidInput(format!(
                "empty enclosure: lo = {lo} >= hi = {hi}"
            )));
        }
        Ok(CertifiedReal { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }

    pub fn midpoint(&self) -> Rational {
        Rational::from(&self.hi + &self.lo) / 2
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.lo <= *r && *r <= self.hi
    }

    pub fn to_interval(&self, prec: u32) -> RealInterval {
        RealInterval::from_rational_bounds(&self.lo, &self.hi, prec)
    }

    /// Exact enclosure of |ν·q − p|, or an error when it cannot be
    /// separated from zero at this width.
    pub fn abs_linear(&self, q: &Integer, p: &Integer) -> Result<(Rational, Rational)> {
        let lo = Rational::from(&self.lo * q) - p;
        let hi = Rational::from(&self.hi * q) - p;
        if lo > 0 {
            Ok((lo, hi))
        } else if hi < 0 {
            Ok((-hi, -lo))
        } else {
            Err(Error::InsufficientPrecision(format!(
                "|ν·{q} − {p}| encloses 0; refine the enclosure of ν"
            )))
        }
    }
}

/// Greedy continued-fraction expansion of an exact rational, at most
/// `max_quotients` digits.
fn rational_cf(x: &Rational, max_quotients: usize) -> Vec<Integer> {
    let mut out = Vec::new();
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    while out.len() < max_quotients {
        let (fl, rem) = num.div_rem_floor(den.clone());
        out.push(fl);
        if rem == 0 {
            break;
        }
        num = den;
        den = rem;
    }
    out
}

/// Certified expansion of an enclosure: the longest common partial-quotient
/// prefix of the expansions of the two endpoints.
///
/// Both endpoints lie in the closure of the fundamental interval of the common
/// prefix, so every ν strictly between them shares that prefix; the returned
/// digits are provably correct for the true ν. `certified` counts quotients
/// (v₀ included): a return of ([v₀; v₁, v₂], 3) certifies indices 0..=2.
pub fn expand_cf(x: &CertifiedReal, max_depth: usize) -> Result<(PartialQuotients, usize)> {
    if x.width() >= 1u32 {
        return Err(Error::InvalidInput(
            "enclosure of width >= 1 certifies nothing".into(),
        ));
    }
    let max_quotients = max_depth.saturating_add(1);
    let a = rational_cf(&x.lo, max_quotients);
    let b = rational_cf(&x.hi, max_quotients);
    let mut common = Vec::new();
    for (u, v) in a.iter().zip(b.iter()) {
        if u == v {
            common.push(u.clone());
        } else {
            break;
        }
    }
    if common.is_empty() {
        return Err(Error::InsufficientPrecision(
            "endpoints disagree at the first digit".into(),
        ));
    }
    let certified = common.len();
    let v0 = common.remove(0);
    Ok((PartialQuotients::new(v0, Tail::Finite(common))?, certified))
}

/// ν = (a + √b)/c with b ≥ 2 not a perfect square and c ≠ 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticIrrational {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
}

impl QuadraticIrrational {
    pub fn new(a: Integer, b: Integer, c: Integer) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidInput("quadratic irrational with c = 0".into()));
        }
        if b < 2 {
            return Err(Error::InvalidInput(format!(
                "radicand {b} < 2 does not define an irrational"
            )));
        }
        if b.is_perfect_square() {
            return Err(Error::InvalidInput(format!(
                "radicand {b} is a perfect square"
            )));
        }
        Ok(QuadraticIrrational { a, b, c })
    }

    pub fn from_i64s(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(Integer::from(a), Integer::from(b), Integer::from(c))
    }

    /// Exact rational enclosure of width about 2^{-bits}, via integer square
    /// roots of the scaled radicand. Strict on both sides since √b ∉ ℚ.
    pub fn enclosure(&self, bits: u32) -> CertifiedReal {
        let scale = Integer::from(Integer::u_pow_u(2, bits));
        let scaled = Integer::from(&self.b * &scale) * &scale;
        let s = scaled.sqrt(); // floor
        let sqrt_lo = Rational::from((s.clone(), scale.clone()));
        let sqrt_hi = Rational::from((s + 1u32, scale));
        let lo = (Rational::from(&self.a) + sqrt_lo) / Rational::from(&self.c);
        let hi = (Rational::from(&self.a) + sqrt_hi) / Rational::from(&self.c);
        if lo < hi {
            CertifiedReal { lo, hi }
        } else {
            // negative c flips the order
            CertifiedReal { lo: hi, hi: lo }
        }
    }
}

/// floor((m + √d)/q) computed exactly (d > 0 not a perfect square, q ≠ 0).
fn floor_quadratic(m: &Integer, d: &Integer, q: &Integer) -> Integer {
    let s = d.clone().sqrt(); // floor(√d), so s ≤ √d < s + 1
    if *q > 0 {
        // no integer lies in (floor(√d), √d] when d is not a perfect square,
        // so replacing √d by its floor cannot change the outer floor
        Integer::from(m + &s).div_rem_floor(q.clone()).0
    } else {
        // q < 0: x ∈ ((m+s+1)/q, (m+s)/q); start below and walk up
        let mut t = (Integer::from(m + &s) + 1u32).div_rem_floor(q.clone()).0;
        // √d > y ⇔ y < 0 or d > y²
        let sqrt_gt = |y: Integer| -> bool { y < 0 || *d > y.square() };
        // t + 1 ≤ x ⇔ q(t+1) ≥ m + √d ⇔ ¬(√d > q(t+1) − m)
        loop {
            let y = Integer::from(q * &t) + q - m;
            if sqrt_gt(y) {
                break;
            }
            t += 1u32;
        }
        t
    }
}

/// Exact partial quotients of a quadratic irrational by the classical
/// (m, d, q) iteration; pure integer arithmetic, never loses precision.
/// Detects the eventual period and returns a periodic tail when it appears
/// within `depth` steps, otherwise a finite prefix of length `depth`.
pub fn quadratic_cf(spec: &QuadraticIrrational, depth: usize) -> Result<PartialQuotients> {
    // Normalize to ν = (m + √d)/q with q | (d − m²):
    // (a + √b)/c = (a|c| + √(bc²))/(c|c|)
    let abs_c = Integer::from(spec.c.clone().abs());
    let mut m = Integer::from(&spec.a * &abs_c);
    let d = Integer::from(&spec.b * &spec.c) * &spec.c;
    let mut q = Integer::from(&spec.c * &abs_c);
    debug_assert!(Integer::from(&d - Integer::from(m.clone().square())).is_divisible(&q));

    let v0 = floor_quadratic(&m, &d, &q);
    let mut quots: Vec<Integer> = Vec::new();
    let mut seen: HashMap<(Integer, Integer), usize> = HashMap::new();
    let mut v = v0.clone();
    for i in 0..depth.max(1) * 4 + 64 {
        // step: m' = vq − m, q' = (d − m'²)/q
        let m_next = Integer::from(&v * &q) - &m;
        let q_next = (Integer::from(&d) - Integer::from(m_next.clone().square()))
            .div_exact(&q);
        m = m_next;
        q = q_next;
        if q == 0 {
            return Err(Error::InvalidInput(
                "radicand is a perfect square (expansion terminated)".into(),
            ));
        }
        if let Some(&start) = seen.get(&(m.clone(), q.clone())) {
            let head = quots[..start].to_vec();
            let block = quots[start..].to_vec();
            return PartialQuotients::new(v0, Tail::Periodic { head, block });
        }
        seen.insert((m.clone(), q.clone()), quots.len());
        v = floor_quadratic(&m, &d, &q);
        quots.push(v.clone());
        if quots.len() > depth && i >= depth {
            // no cycle within the requested depth; return what we have
            return PartialQuotients::new(v0, Tail::Finite(quots));
        }
    }
    PartialQuotients::new(v0, Tail::Finite(quots))
}

/// Outcome of the two-sided approximation-quality check at one depth.
#[derive(Debug, Clone)]
pub struct GapCheck {
    /// Exact rational enclosure of |ν − Pₙ/Qₙ|.
    pub gap_lo: Rational,
    pub gap_hi: Rational,
    /// Whether 1/(2QₙQₙ₊₁) < |ν − Pₙ/Qₙ| < 1/(QₙQₙ₊₁) holds rigorously.
    pub verdict: Verdict,
}

/// Encloses |ν − Pₙ/Qₙ| exactly and checks the classical two-sided bound
/// against 1/(2QₙQₙ₊₁) and 1/(QₙQₙ₊₁). `q_next` is Qₙ₊₁.
pub fn approximation_gap(nu: &CertifiedReal, c: &Convergent, q_next: &Integer) -> GapCheck {
    let target = c.value();
    let (gap_lo, gap_hi) = if target <= nu.lo {
        (
            Rational::from(&nu.lo - &target),
            Rational::from(&nu.hi - &target),
        )
    } else if target >= nu.hi {
        (
            Rational::from(&target - &nu.hi),
            Rational::from(&target - &nu.lo),
        )
    } else {
        // convergent inside the enclosure: no positive lower bound
        let d1 = Rational::from(&nu.hi - &target);
        let d2 = Rational::from(&target - &nu.lo);
        (Rational::new(), if d1 > d2 { d1 } else { d2 })
    };
    let qq = Rational::from((Integer::from(1), Integer::from(&c.q * q_next)));
    let half_qq = qq.clone() / 2u32;
    let verdict = if gap_lo > half_qq && gap_hi < qq {
        Verdict::Holds
    } else if gap_hi <= half_qq || gap_lo >= qq {
        Verdict::Fails
    } else {
        Verdict::Undecidable
    };
    GapCheck {
        gap_lo,
        gap_hi,
        verdict,
    }
}

/// How a number enters the lab: exact quadratic data, explicit digits, or a
/// plain interval enclosure.
#[derive(Debug, Clone)]
pub enum NumberSpec {
    Quadratic(QuadraticIrrational),
    ExplicitCf(PartialQuotients),
    Interval(CertifiedReal),
}

impl NumberSpec {
    /// Text formats: `quad:a,b,c` for (a+√b)/c, `cf:v0;v1,v2,...` with an
    /// optional trailing `repeat:b1,b2,...` block, `interval:lo,hi` with
    /// decimal or rational endpoints, and the named shortcuts `golden`,
    /// `sqrt2`, `e`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "golden" => return Ok(NumberSpec::ExplicitCf(PartialQuotients::golden())),
            "sqrt2" => return Ok(NumberSpec::ExplicitCf(PartialQuotients::sqrt2())),
            "e" => return Ok(NumberSpec::ExplicitCf(PartialQuotients::e_pattern())),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("quad:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("quad spec needs a,b,c: {s}")));
            }
            let parse_int = |t: &str| -> Result<Integer> {
                Integer::parse(t.trim())
                    .map(Integer::from)
                    .map_err(|e| Error::Parse(format!("bad integer {t}: {e}")))
            };
            return Ok(NumberSpec::Quadratic(QuadraticIrrational::new(
                parse_int(parts[0])?,
                parse_int(parts[1])?,
                parse_int(parts[2])?,
            )?));
        }
        if let Some(rest) = s.strip_prefix("cf:") {
            let (v0_str, tail_str) = rest
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("cf spec needs v0;...: {s}")))?;
            let v0 = Integer::parse(v0_str.trim())
                .map(Integer::from)
                .map_err(|e| Error::Parse(format!("bad v0 {v0_str}: {e}")))?;
            let (head_str, block_str) = match tail_str.split_once("repeat:") {
                Some((h, b)) => (h.trim_end_matches(','), Some(b)),
                None => (tail_str, None),
            };
            let parse_list = |t: &str| -> Result<Vec<Integer>> {
                t.split(',')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(|p| {
                        Integer::parse(p)
                            .map(Integer::from)
                            .map_err(|e| Error::Parse(format!("bad quotient {p}: {e}")))
                    })
                    .collect()
            };
            let head = parse_list(head_str)?;
            let tail = match block_str {
                Some(b) => Tail::Periodic {
                    head,
                    block: parse_list(b)?,
                },
                None => Tail::Finite(head),
            };
            return Ok(NumberSpec::ExplicitCf(PartialQuotients::new(v0, tail)?));
        }
        if let Some(rest) = s.strip_prefix("interval:") {
            let (lo_str, hi_str) = rest
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("interval spec needs lo,hi: {s}")))?;
            let lo = parse_rational(lo_str)?;
            let hi = parse_rational(hi_str)?;
            return Ok(NumberSpec::Interval(CertifiedReal::new(lo, hi)?));
        }
        Err(Error::Parse(format!("unrecognized number spec: {s}")))
    }

    /// Partial quotients usable to at least `depth` (periodic/eternal tails
    /// serve any depth; interval specs certify what their width allows).
    pub fn partial_quotients(&self, depth: usize) -> Result<PartialQuotients> {
        match self {
            NumberSpec::Quadratic(q) => quadratic_cf(q, depth),
            NumberSpec::ExplicitCf(pq) => {
                if let Some(avail) = pq.available_depth() {
                    if avail < depth {
                        return Err(Error::DepthUnavailable {
                            requested: depth,
                            available: avail,
                        });
                    }
                }
                Ok(pq.clone())
            }
            NumberSpec::Interval(x) => {
                let (pq, certified) = expand_cf(x, depth + 1)?;
                if certified < depth + 1 {
                    return Err(Error::DepthUnavailable {
                        requested: depth,
                        available: certified.saturating_sub(1),
                    });
                }
                Ok(pq)
            }
        }
    }

    /// Rational enclosure of width at most `max_width`.
    ///
    /// Quadratic specs refine by integer square roots; explicit digits refine
    /// by bracketing with consecutive convergents; interval specs are returned
    /// as given (or rejected when too wide — they cannot be refined).
    pub fn enclosure(&self, max_width: &Rational) -> Result<CertifiedReal> {
        assert!(*max_width > 0);
        match self {
            NumberSpec::Quadratic(q) => {
                let mut bits = 32;
                loop {
                    let enc = q.enclosure(bits);
                    if enc.width() <= *max_width {
                        return Ok(enc);
                    }
                    bits *= 2;
                    if bits > 1 << 24 {
                        return Err(Error::InsufficientPrecision(
                            "enclosure refinement exceeded 2^24 bits".into(),
                        ));
                    }
                }
            }
            NumberSpec::ExplicitCf(pq) => enclosure_from_quotients(pq, max_width),
            NumberSpec::Interval(x) => {
                if x.width() <= *max_width {
                    Ok(x.clone())
                } else {
                    Err(Error::InsufficientPrecision(format!(
                        "interval spec of width {} cannot be refined below {}",
                        x.width(),
                        max_width
                    )))
                }
            }
        }
    }
}

/// Bracket the value of an infinite (or long finite) expansion between
/// consecutive convergents until the bracket is narrower than `max_width`.
fn enclosure_from_quotients(
    pq: &PartialQuotients,
    max_width: &Rational,
) -> Result<CertifiedReal> {
    let mut depth = 4usize;
    loop {
        let take = match pq.available_depth() {
            Some(avail) => {
                if avail < 1 {
                    return Err(Error::InvalidInput(
                        "cannot enclose a bare integer as an irrational".into(),
                    ));
                }
                depth.min(avail)
            }
            None => depth,
        };
        let convs = convergents(pq, take)?;
        let a = convs[convs.len() - 2].value();
        let b = convs[convs.len() - 1].value();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let width = Rational::from(&hi - &lo);
        let exact_end = pq.available_depth() == Some(take);
        if width <= *max_width && !exact_end {
            return Ok(CertifiedReal { lo, hi });
        }
        if exact_end {
            // finite expansion: the value is the exact last convergent; widen
            // symmetrically so the invariant lo < ν < hi still holds
            let val = convs[convs.len() - 1].value();
            let half = Rational::from(max_width / 2u32);
            return CertifiedReal::new(Rational::from(&val - &half), val + half);
        }
        depth *= 2;
        if depth > 1 << 22 {
            return Err(Error::InsufficientPrecision(
                "convergent bracketing exceeded depth 2^22".into(),
            ));
        }
    }
}

/// Parse a decimal ("1.4142", "3e-5") or rational ("355/113") literal exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = Integer::parse(num.trim())
            .map(Integer::from)
            .map_err(|e| Error::Parse(format!("bad numerator {num}: {e}")))?;
        let d = Integer::parse(den.trim())
            .map(Integer::from)
            .map_err(|e| Error::Parse(format!("bad denominator {den}: {e}")))?;
        if d == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        return Ok(Rational::from((n, d)));
    }
    // decimal with optional exponent
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s}")))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant, ""),
    };
    let digits = format!(
        "{}{}",
        if int_part.is_empty() { "0" } else { int_part },
        frac_part
    );
    let n = Integer::parse(&digits)
        .map(Integer::from)
        .map_err(|e| Error::Parse(format!("bad decimal {s}: {e}")))?;
    let shift = exp - frac_part.len() as i64;
    let base = Integer::from(10);
    Ok(if shift >= 0 {
        Rational::from(n * base.pow(shift as u32))
    } else {
        Rational::from((n, base.pow((-shift) as u32)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conv_strs(pq: &PartialQuotients, depth: usize) -> Vec<String> {
        convergents(pq, depth)
            .unwrap()
            .iter()
            .map(|c| format!("{}/{}", c.p, c.q))
            .collect()
    }

    #[test]
    fn golden_convergents() {
        let pq = PartialQuotients::golden();
        assert_eq!(
            conv_strs(&pq, 4),
            vec!["1/1", "2/1", "3/2", "5/3", "8/5"]
        );
    }

    #[test]
    fn sqrt2_convergents() {
        let pq = PartialQuotients::sqrt2();
        assert_eq!(
            conv_strs(&pq, 4),
            vec!["1/1", "3/2", "7/5", "17/12", "41/29"]
        );
    }

    #[test]
    fn zero_seed() {
        let pq = PartialQuotients::from_i64s(0, &[]).unwrap();
        assert_eq!(conv_strs(&pq, 0), vec!["0/1"]);
    }

    #[test]
    fn recurrence_matches_bottom_up_eval() {
        let pq = PartialQuotients::from_i64s(3, &[7, 15, 1, 292, 1, 1]).unwrap();
        let convs = convergents(&pq, 6).unwrap();
        for c in &convs {
            assert_eq!(c.value(), finite_cf_value(&pq, c.n).unwrap());
        }
        // pi prefix sanity
        assert_eq!(convs[4].value(), Rational::from((103993, 33102)));
    }

    #[test]
    fn depth_shortfall_reports_index() {
        let pq = PartialQuotients::from_i64s(1, &[2, 2]).unwrap();
        match convergents(&pq, 5) {
            Err(Error::DepthUnavailable { available, .. }) => assert_eq!(available, 2),
            other => panic!("expected DepthUnavailable, got {other:?}"),
        }
    }

    #[test]
    fn growth_bound_golden() {
        let convs = convergents(&PartialQuotients::golden(), 200).unwrap();
        let checks = check_growth_bound(&convs);
        assert_eq!(checks.len(), 200);
        assert!(checks.iter().all(|&(_, ok)| ok));
        // n = 4: Q₄ = 8 > φ³/2 ≈ 2.118
        assert!(checks[3] == (4, true));
    }

    #[test]
    fn expand_cf_sqrt2_window() {
        let x = CertifiedReal::new(
            parse_rational("1.4142135").unwrap(),
            parse_rational("1.4142136").unwrap(),
        )
        .unwrap();
        let (pq, certified) = expand_cf(&x, 8).unwrap();
        assert!(certified >= 5, "certified only {certified}");
        assert_eq!(pq.quotient(0).unwrap(), 1);
        for n in 1..certified {
            assert_eq!(pq.quotient(n).unwrap(), 2, "digit {n}");
        }
    }

    #[test]
    fn expand_cf_wide_window() {
        let x = CertifiedReal::new(
            parse_rational("0.49").unwrap(),
            parse_rational("0.51").unwrap(),
        )
        .unwrap();
        let (_, certified) = expand_cf(&x, 8).unwrap();
        assert!(certified <= 1, "certified {certified} > 1");
    }

    #[test]
    fn expand_cf_tight_golden() {
        let phi = QuadraticIrrational::from_i64s(1, 5, 2).unwrap();
        let enc = phi.enclosure(110); // width ~1e-33
        let (pq, certified) = expand_cf(&enc, 100).unwrap();
        assert!(certified >= 30, "certified {certified}");
        assert_eq!(pq.quotient(0).unwrap(), 1);
        for n in 1..certified.min(40) {
            assert_eq!(pq.quotient(n).unwrap(), 1);
        }
    }

    #[test]
    fn quadratic_cf_classics() {
        let sqrt2 = quadratic_cf(&QuadraticIrrational::from_i64s(0, 2, 1).unwrap(), 10).unwrap();
        assert_eq!(sqrt2.quotient(0).unwrap(), 1);
        for n in 1..20 {
            assert_eq!(sqrt2.quotient(n).unwrap(), 2);
        }
        let phi = quadratic_cf(&QuadraticIrrational::from_i64s(1, 5, 2).unwrap(), 10).unwrap();
        for n in 0..20 {
            assert_eq!(phi.quotient(n).unwrap(), 1);
        }
        // sqrt 3 = [1; 1, 2, 1, 2, ...]
        let sqrt3 = quadratic_cf(&QuadraticIrrational::from_i64s(0, 3, 1).unwrap(), 10).unwrap();
        let got: Vec<u32> = (0..6)
            .map(|n| sqrt3.quotient(n).unwrap().to_u32().unwrap())
            .collect();
        assert_eq!(got, vec![1, 1, 2, 1, 2, 1]);
    }

    #[test]
    fn quadratic_cf_negative_c() {
        // (-1 + √2)/(-1) = 1 − √2 ≈ −0.414 = [−1; 1, 1, 2, 2, 2, ...]
        let spec = QuadraticIrrational::from_i64s(-1, 2, -1).unwrap();
        let pq = quadratic_cf(&spec, 12).unwrap();
        let enc = spec.enclosure(80);
        let (expanded, certified) = expand_cf(&enc, 10).unwrap();
        assert!(certified >= 8);
        for n in 0..certified.min(10) {
            assert_eq!(pq.quotient(n).unwrap(), expanded.quotient(n).unwrap(), "at {n}");
        }
    }

    #[test]
    fn perfect_square_rejected() {
        assert!(QuadraticIrrational::from_i64s(0, 4, 1).is_err());
    }

    #[test]
    fn expand_prefix_of_quadratic() {
        let spec = QuadraticIrrational::from_i64s(2, 19, 3).unwrap();
        let pq = quadratic_cf(&spec, 40).unwrap();
        let enc = spec.enclosure(200);
        let (expanded, certified) = expand_cf(&enc, 40).unwrap();
        assert!(certified >= 20);
        for n in 0..certified.min(41) {
            assert_eq!(
                expanded.quotient(n).unwrap(),
                pq.quotient(n).unwrap(),
                "digit {n} differs"
            );
        }
    }

    #[test]
    fn approximation_gap_golden_n2() {
        let phi = QuadraticIrrational::from_i64s(1, 5, 2).unwrap();
        let enc = phi.enclosure(128);
        let convs = convergents(&PartialQuotients::golden(), 3).unwrap();
        let check = approximation_gap(&enc, &convs[2], &convs[3].q);
        assert_eq!(check.verdict, Verdict::Holds);
        // gap ≈ 0.118 inside (1/12, 1/6)
        assert!(check.gap_lo > Rational::from((1u32, 12u32)));
        assert!(check.gap_hi < Rational::from((1u32, 6u32)));
    }

    #[test]
    fn approximation_gap_sqrt2_n1() {
        let spec = QuadraticIrrational::from_i64s(0, 2, 1).unwrap();
        let enc = spec.enclosure(128);
        let convs = convergents(&PartialQuotients::sqrt2(), 2).unwrap();
        let check = approximation_gap(&enc, &convs[1], &convs[2].q);
        assert_eq!(check.verdict, Verdict::Holds);
    }

    #[test]
    fn approximation_gap_wide_enclosure_undecidable() {
        let enc = CertifiedReal::new(
            parse_rational("1.60").unwrap(),
            parse_rational("1.64").unwrap(),
        )
        .unwrap();
        let convs = convergents(&PartialQuotients::golden(), 6).unwrap();
        let check = approximation_gap(&enc, &convs[5], &convs[6].q);
        assert_eq!(check.verdict, Verdict::Undecidable);
    }

    #[test]
    fn e_pattern_digits() {
        let e = PartialQuotients::e_pattern();
        let got: Vec<u32> = (0..10)
            .map(|n| e.quotient(n).unwrap().to_u32().unwrap())
            .collect();
        assert_eq!(got, vec![2, 1, 2, 1, 1, 4, 1, 1, 6, 1]);
    }

    #[test]
    fn parse_specs() {
        assert!(matches!(
            NumberSpec::parse("quad:1,5,2").unwrap(),
            NumberSpec::Quadratic(_)
        ));
        let cf = NumberSpec::parse("cf:1;2,2,repeat:2").unwrap();
        if let NumberSpec::ExplicitCf(pq) = cf {
            assert_eq!(pq.quotient(7).unwrap(), 2);
        } else {
            panic!("expected cf spec");
        }
        assert!(matches!(
            NumberSpec::parse("interval:0.49,0.51").unwrap(),
            NumberSpec::Interval(_)
        ));
        assert!(NumberSpec::parse("junk:1").is_err());
        assert!(NumberSpec::parse("quad:0,4,1").is_err());
    }

    #[test]
    fn enclosure_from_digit_tail() {
        let spec = NumberSpec::parse("golden").unwrap();
        let tiny = Rational::from((Integer::from(1), Integer::from(10).pow(30)));
        let enc = spec.enclosure(&tiny).unwrap();
        assert!(enc.width() < tiny);
        let phi = QuadraticIrrational::from_i64s(1, 5, 2).unwrap().enclosure(150);
        assert!(enc.lo() < phi.hi() && phi.lo() < enc.hi());
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("355/113").unwrap(), Rational::from((355, 113)));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::from((1, 4)));
        assert_eq!(
            parse_rational("3e-5").unwrap(),
            Rational::from((3, 100000))
        );
        assert_eq!(parse_rational("-1.5").unwrap(), Rational::from((-3, 2)));
    }
}
