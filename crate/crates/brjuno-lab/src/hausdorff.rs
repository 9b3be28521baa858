//! Gauge functions and cover-based premeasure bounds.
//!
//! For a gauge h and scale ε, the reported bound is N(ε)·h(ε) where N(ε) is
//! the minimal number of open radius-ε balls covering the set — a certified
//! upper bound on the cover infimum at that scale. Cover combinatorics are
//! exact (rational endpoints, rational ε); only the gauge value rounds, and
//! it rounds outward. For logarithmic gauges the bound on any finite set
//! tends to 0 along ε ↓ 0, which is the computable face of "countable sets
//! are null for every gauge".

use crate::error::{Error, Result};
use crate::real::RealInterval;
#[cfg(test)]
use rug::ops::Pow;
use rug::{Integer, Rational};

/// h(t) = ln^{−δ}(1/t) or h(t) = t^δ on (0, r0].
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFunction {
    kind: GaugeKind,
    delta: f64,
    r0: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeKind {
    LogPower,
    Power,
}

impl GaugeFunction {
    pub fn new(kind: GaugeKind, delta: f64, r0: Rational) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidInput("gauge exponent must be positive".into()));
        }
        if r0 <= 0u32 {
            return Err(Error::InvalidInput("domain cap r0 must be positive".into()));
        }
        if kind == GaugeKind::LogPower && r0 >= 1u32 {
            return Err(Error::InvalidInput(
                "log-power gauge needs r0 < 1 so that ln(1/t) stays positive".into(),
            ));
        }
        Ok(GaugeFunction { kind, delta, r0 })
    }

    /// ln^{−δ}(1/t) with the default cap just below e⁻¹.
    pub fn log_power(delta: f64) -> Result<Self> {
        Self::new(
            GaugeKind::LogPower,
            delta,
            Rational::from((367879u32, 1000000u32)),
        )
    }

    /// t^δ with cap 1.
    pub fn power(delta: f64) -> Result<Self> {
        Self::new(GaugeKind::Power, delta, Rational::from(1))
    }

    pub fn kind(&self) -> GaugeKind {
        self.kind
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn r0(&self) -> &Rational {
        &self.r0
    }

    /// `gauge:log:DELTA` or `gauge:power:DELTA` (prefix optional).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().strip_prefix("gauge:").unwrap_or(s.trim());
        let (kind, delta) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("gauge needs kind:delta, got {s}")))?;
        let delta: f64 = delta
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad gauge exponent in {s}")))?;
        match kind.trim() {
            "log" | "log_power" => Self::log_power(delta),
            "power" => Self::power(delta),
            other => Err(Error::Parse(format!("unknown gauge kind {other}"))),
        }
    }
}

/// Exact-formula gauge evaluation with directed rounding.
pub fn gauge_eval(h: &GaugeFunction, t: &Rational, prec: u32) -> Result<RealInterval> {
    if *t <= 0u32 || *t > h.r0 {
        return Err(Error::InvalidInput(format!(
            "t = {t} outside the gauge domain (0, {}]",
            h.r0
        )));
    }
    let tv = RealInterval::from_rational(t, prec);
    Ok(match h.kind {
        GaugeKind::LogPower => tv.recip().ln().pow_f64(-h.delta),
        GaugeKind::Power => tv.pow_f64(h.delta),
    })
}

/// A set given as points, closed intervals, or a Cantor-construction stage.
#[derive(Debug, Clone)]
pub enum SetSpec {
    Points(Vec<Rational>),
    Intervals(Vec<(Rational, Rational)>),
    Cantor { depth: u32, ratio: Rational },
}

impl SetSpec {
    /// Text forms: `points:1/3,0.5,...`, `intervals:a1,b1;a2,b2;...`,
    /// `cantor:depth=K,ratio=R`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("points:") {
            let pts = rest
                .split(',')
                .map(crate::cf::parse_rational)
                .collect::<Result<Vec<_>>>()?;
            return Ok(SetSpec::Points(pts));
        }
        if let Some(rest) = s.strip_prefix("intervals:") {
            let mut out = Vec::new();
            for chunk in rest.split(';') {
                let (a, b) = chunk
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("interval needs a,b: {chunk}")))?;
                out.push((crate::cf::parse_rational(a)?, crate::cf::parse_rational(b)?));
            }
            return Ok(SetSpec::Intervals(out));
        }
        if let Some(rest) = s.strip_prefix("cantor:") {
            let mut depth = None;
            let mut ratio = Rational::from((1u32, 3u32));
            for part in rest.split(',') {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("cantor needs key=value: {part}")))?;
                match k.trim() {
                    "depth" => {
                        depth = Some(v.trim().parse::<u32>().map_err(|_| {
                            Error::Parse(format!("bad cantor depth {v}"))
                        })?)
                    }
                    "ratio" => ratio = crate::cf::parse_rational(v)?,
                    other => return Err(Error::Parse(format!("unknown cantor key {other}"))),
                }
            }
            let depth =
                depth.ok_or_else(|| Error::Parse("cantor spec needs depth=".into()))?;
            return Ok(SetSpec::Cantor { depth, ratio });
        }
        Err(Error::Parse(format!("unrecognized set spec: {s}")))
    }

    /// Normalize to sorted, pairwise-disjoint closed items [lo, hi]
    /// (points become degenerate items).
    pub fn items(&self) -> Result<Vec<(Rational, Rational)>> {
        let items: Vec<(Rational, Rational)> = match self {
            SetSpec::Points(pts) => {
                let mut v: Vec<(Rational, Rational)> =
                    pts.iter().map(|p| (p.clone(), p.clone())).collect();
                v.sort();
                v.dedup();
                v
            }
            SetSpec::Intervals(iv) => {
                let mut v = Vec::with_capacity(iv.len());
                for (a, b) in iv {
                    if a > b {
                        return Err(Error::InvalidInput(format!(
                            "interval [{a}, {b}] has lo > hi"
                        )));
                    }
                    v.push((a.clone(), b.clone()));
                }
                v.sort();
                v
            }
            SetSpec::Cantor { depth, ratio } => {
                if *ratio <= 0u32 || *ratio >= Rational::from((1u32, 2u32)) {
                    return Err(Error::InvalidInput(
                        "cantor ratio must lie in (0, 1/2)".into(),
                    ));
                }
                if *depth > 16 {
                    return Err(Error::InvalidInput(
                        "cantor depth capped at 16 (2^16 intervals)".into(),
                    ));
                }
                let mut v = vec![(Rational::new(), Rational::from(1))];
                for _ in 0..*depth {
                    let mut next = Vec::with_capacity(v.len() * 2);
                    for (a, b) in &v {
                        let len = Rational::from(b - a);
                        let step = Rational::from(&len * ratio);
                        next.push((a.clone(), Rational::from(a + &step)));
                        next.push((Rational::from(b - &step), b.clone()));
                    }
                    v = next;
                }
                v
            }
        };
        for w in items.windows(2) {
            if w[0].1 >= w[1].0 {
                return Err(Error::InvalidInput(
                    "set items must be pairwise disjoint".into(),
                ));
            }
        }
        Ok(items)
    }
}

/// An open ball (center − radius, center + radius).
#[derive(Debug, Clone)]
pub struct CoverBall {
    pub center: Rational,
    pub radius: Rational,
}

/// A certified scale-ε cover bound: `count`·h(ε), with the cover itself.
#[derive(Debug, Clone)]
pub struct Premeasure {
    pub bound: RealInterval,
    pub count: usize,
    pub balls: Vec<CoverBall>,
}

/// Greedy sweep: a run of whole items with span < 2ε shares one ball
/// centered mid-span; an item wider than 2ε is subdivided into the minimal
/// number of step-placed balls that cover it closed (k = ⌊len/2ε⌋ + 1, so
/// the step len/k stays below 2ε and consecutive balls overlap).
fn greedy_cover(items: &[(Rational, Rational)], eps: &Rational) -> Result<Vec<CoverBall>> {
    let two_eps = Rational::from(eps * 2u32);
    let mut balls = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let start = items[i].0.clone();
        let len = Rational::from(&items[i].1 - &start);
        if len >= two_eps {
            let k_int = Rational::from(&len / &two_eps).floor().numer().clone() + 1u32;
            let k = k_int.to_usize().ok_or_else(|| {
                Error::InvalidInput("cover would need absurdly many balls".into())
            })?;
            if k > 10_000_000 {
                return Err(Error::InvalidInput(format!(
                    "cover of a width-{len} item at ε = {eps} needs {k} balls"
                )));
            }
            let step = len / Rational::from(&k_int);
            let half = Rational::from(&step / 2u32);
            for j in 0..k {
                balls.push(CoverBall {
                    center: Rational::from(&start + Rational::from(&step * j)) + &half,
                    radius: eps.clone(),
                });
            }
            i += 1;
            continue;
        }
        let mut end = items[i].1.clone();
        let mut j = i + 1;
        while j < items.len() && Rational::from(&items[j].1 - &start) < two_eps {
            end = items[j].1.clone();
            j += 1;
        }
        balls.push(CoverBall {
            center: Rational::from(&start + &end) / 2u32,
            radius: eps.clone(),
        });
        i = j;
    }
    Ok(balls)
}

/// Upper bound N(ε)·h(ε) on the cover sum at scale ε, with the achieving
/// greedy cover. The greedy sweep minimizes the ball count, so within the
/// radius-ε family the bound is optimal; the empty set reports zero.
pub fn premeasure(
    set: &SetSpec,
    eps: &Rational,
    h: &GaugeFunction,
    prec: u32,
) -> Result<Premeasure> {
    if *eps <= 0u32 || *eps >= *h.r0() {
        return Err(Error::InvalidInput(format!(
            "ε = {eps} must lie in (0, r0 = {})",
            h.r0()
        )));
    }
    let items = set.items()?;
    if items.is_empty() {
        return Ok(Premeasure {
            bound: RealInterval::zero(prec),
            count: 0,
            balls: vec![],
        });
    }
    let balls = greedy_cover(&items, eps)?;
    let unit = gauge_eval(h, eps, prec)?;
    let count = balls.len();
    let count_iv = RealInterval::from_integer(&Integer::from(count), prec);
    Ok(Premeasure {
        bound: unit.mul(&count_iv),
        count,
        balls,
    })
}

/// Exhaustive oracle for small sets: tries every partition of the sorted
/// items into consecutive clusters and keeps the cheapest feasible cover at
/// scale ε. Must agree with the greedy sweep.
pub fn premeasure_exhaustive(
    set: &SetSpec,
    eps: &Rational,
    h: &GaugeFunction,
    prec: u32,
) -> Result<Premeasure> {
    if *eps <= 0u32 || *eps >= *h.r0() {
        return Err(Error::InvalidInput(format!(
            "ε = {eps} must lie in (0, r0 = {})",
            h.r0()
        )));
    }
    let items = set.items()?;
    if items.is_empty() {
        return Ok(Premeasure {
            bound: RealInterval::zero(prec),
            count: 0,
            balls: vec![],
        });
    }
    let k = items.len();
    if k > 12 {
        return Err(Error::InvalidInput(
            "exhaustive cover enumeration is limited to 12 items".into(),
        ));
    }
    let two_eps = Rational::from(eps * 2u32);
    let mut best: Option<Vec<CoverBall>> = None;
    // bit i of `mask` set = cut between item i and item i+1
    for mask in 0u32..(1 << (k - 1)) {
        let mut balls = Vec::new();
        let mut start = 0usize;
        let mut feasible = true;
        for cut in 0..k {
            let is_last = cut == k - 1;
            if is_last || mask >> cut & 1 == 1 {
                let span_lo = &items[start].0;
                let span_hi = &items[cut].1;
                if Rational::from(span_hi - span_lo) >= two_eps {
                    feasible = false;
                    break;
                }
                balls.push(CoverBall {
                    center: Rational::from(span_lo + span_hi) / 2u32,
                    radius: eps.clone(),
                });
                start = cut + 1;
            }
        }
        if feasible {
            let better = match &best {
                None => true,
                Some(b) => balls.len() < b.len(),
            };
            if better {
                best = Some(balls);
            }
        }
    }
    let balls = best.ok_or_else(|| {
        Error::InvalidInput("no feasible radius-ε cover (an item is too wide)".into())
    })?;
    let unit = gauge_eval(h, eps, prec)?;
    let count = balls.len();
    let count_iv = RealInterval::from_integer(&Integer::from(count), prec);
    Ok(Premeasure {
        bound: unit.mul(&count_iv),
        count,
        balls,
    })
}

/// One scale of a trend run.
#[derive(Debug, Clone)]
pub struct TrendRow {
    pub eps: Rational,
    pub bound: RealInterval,
    pub balls: usize,
}

/// Cover bounds along a strictly decreasing ε schedule.
pub fn hausdorff_trend(
    set: &SetSpec,
    h: &GaugeFunction,
    schedule: &[Rational],
    prec: u32,
) -> Result<Vec<TrendRow>> {
    if schedule.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidInput("ε schedule must be strictly decreasing".into()));
    }
    let mut rows = Vec::with_capacity(schedule.len());
    for eps in schedule {
        let pm = premeasure(set, eps, h, prec)?;
        rows.push(TrendRow {
            eps: eps.clone(),
            bound: pm.bound,
            balls: pm.count,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::parse_rational;

    const PREC: u32 = 128;

    #[test]
    fn gauge_values() {
        // ln(e) = 1 → h = 1 at t = 1/e for δ = 1
        let h = GaugeFunction::log_power(1.0).unwrap();
        let t = parse_rational("0.367879").unwrap();
        let v = gauge_eval(&h, &t, PREC).unwrap();
        assert!((v.midpoint_f64() - 1.0).abs() < 1e-5);
        // δ = 2 at t = e⁻²: ln(1/t) = 2 → 1/4
        let h2 = GaugeFunction::log_power(2.0).unwrap();
        let t2 = parse_rational("0.1353352832366127").unwrap();
        let v2 = gauge_eval(&h2, &t2, PREC).unwrap();
        assert!((v2.midpoint_f64() - 0.25).abs() < 1e-8);
        // power gauge: 0.04^0.5 = 0.2
        let hp = GaugeFunction::power(0.5).unwrap();
        let v3 = gauge_eval(&hp, &parse_rational("0.04").unwrap(), PREC).unwrap();
        assert!((v3.midpoint_f64() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn gauge_domain() {
        let h = GaugeFunction::log_power(1.0).unwrap();
        assert!(gauge_eval(&h, &Rational::from(1), PREC).is_err());
        assert!(gauge_eval(&h, &Rational::new(), PREC).is_err());
    }

    #[test]
    fn single_point_one_ball() {
        let set = SetSpec::Points(vec![parse_rational("0.3").unwrap()]);
        let h = GaugeFunction::log_power(2.0).unwrap();
        let eps = parse_rational("0.01").unwrap();
        let pm = premeasure(&set, &eps, &h, PREC).unwrap();
        assert_eq!(pm.count, 1);
        let expect = gauge_eval(&h, &eps, PREC).unwrap();
        assert!((pm.bound.midpoint_f64() - expect.midpoint_f64()).abs() < 1e-15);
    }

    #[test]
    fn separated_points_separate_balls() {
        let pts: Vec<Rational> = (0..5)
            .map(|i| Rational::from((1 + 2 * i, 100u32)))
            .collect();
        let set = SetSpec::Points(pts);
        let h = GaugeFunction::log_power(1.0).unwrap();
        // ε below half the minimum gap (gap = 1/50)
        let eps = Rational::from((1u32, 150u32));
        let pm = premeasure(&set, &eps, &h, PREC).unwrap();
        assert_eq!(pm.count, 5);
    }

    #[test]
    fn clustered_points_merge() {
        let set = SetSpec::Points(
            ["0.1", "0.101", "0.102", "0.5"]
                .iter()
                .map(|s| parse_rational(s).unwrap())
                .collect(),
        );
        let h = GaugeFunction::log_power(1.0).unwrap();
        let pm = premeasure(&set, &parse_rational("0.01").unwrap(), &h, PREC).unwrap();
        assert_eq!(pm.count, 2);
    }

    #[test]
    fn cantor_natural_scale() {
        let set = SetSpec::Cantor {
            depth: 8,
            ratio: Rational::from((1u32, 3u32)),
        };
        let h = GaugeFunction::power((2f64).ln() / (3f64).ln()).unwrap();
        let eps = Rational::from((Integer::from(1), Integer::from(3).pow(8)));
        let pm = premeasure(&set, &eps, &h, PREC).unwrap();
        assert_eq!(pm.count, 256);
        let b = pm.bound.midpoint_f64();
        assert!((b - 1.0).abs() < 1e-12, "bound {b}");
    }

    #[test]
    fn empty_set_zero() {
        let set = SetSpec::Points(vec![]);
        let h = GaugeFunction::log_power(1.0).unwrap();
        let pm = premeasure(&set, &parse_rational("0.01").unwrap(), &h, PREC).unwrap();
        assert_eq!(pm.count, 0);
        assert_eq!(pm.bound.midpoint_f64(), 0.0);
    }

    #[test]
    fn greedy_matches_exhaustive() {
        let set = SetSpec::Points(
            ["0.05", "0.06", "0.13", "0.14", "0.145", "0.3", "0.31"]
                .iter()
                .map(|s| parse_rational(s).unwrap())
                .collect(),
        );
        let h = GaugeFunction::log_power(1.5).unwrap();
        for eps_str in ["0.004", "0.008", "0.02", "0.05", "0.2"] {
            let eps = parse_rational(eps_str).unwrap();
            let g = premeasure(&set, &eps, &h, PREC).unwrap();
            let x = premeasure_exhaustive(&set, &eps, &h, PREC).unwrap();
            assert_eq!(g.count, x.count, "at ε = {eps_str}");
        }
    }

    #[test]
    fn ball_count_grows_as_eps_shrinks() {
        let set = SetSpec::Cantor {
            depth: 5,
            ratio: Rational::from((1u32, 3u32)),
        };
        let h = GaugeFunction::power(0.6).unwrap();
        let schedule: Vec<Rational> = (2..8)
            .map(|k| Rational::from((Integer::from(1), Integer::from(3).pow(k))))
            .collect();
        let rows = hausdorff_trend(&set, &h, &schedule, PREC).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].balls >= w[0].balls);
        }
    }

    #[test]
    fn monotone_in_the_set() {
        let small = SetSpec::Points(
            ["0.1", "0.2", "0.3"]
                .iter()
                .map(|s| parse_rational(s).unwrap())
                .collect(),
        );
        let big = SetSpec::Points(
            ["0.1", "0.15", "0.2", "0.3", "0.42"]
                .iter()
                .map(|s| parse_rational(s).unwrap())
                .collect(),
        );
        let h = GaugeFunction::log_power(1.0).unwrap();
        let eps = parse_rational("0.01").unwrap();
        let a = premeasure_exhaustive(&small, &eps, &h, PREC).unwrap();
        let b = premeasure_exhaustive(&big, &eps, &h, PREC).unwrap();
        assert!(a.count <= b.count);
    }

    #[test]
    fn log_gauge_monotone_in_delta() {
        // radii < e⁻¹ make ln(1/r) > 1, so larger δ gives smaller h
        let t = parse_rational("0.05").unwrap();
        let h1 = gauge_eval(&GaugeFunction::log_power(1.0).unwrap(), &t, PREC).unwrap();
        let h2 = gauge_eval(&GaugeFunction::log_power(2.0).unwrap(), &t, PREC).unwrap();
        assert!(h2.hi().to_f64() <= h1.lo().to_f64());
    }

    #[test]
    fn trend_to_zero_for_finite_sets() {
        let set = SetSpec::Points(
            (0..20)
                .map(|i| Rational::from((3 + i, 100u32)))
                .collect(),
        );
        let h = GaugeFunction::log_power(2.0).unwrap();
        let schedule: Vec<Rational> = (2..9)
            .map(|k| Rational::from((Integer::from(1), Integer::from(10).pow(k))))
            .collect();
        let rows = hausdorff_trend(&set, &h, &schedule, PREC).unwrap();
        assert!(rows.last().unwrap().bound.hi().to_f64() < rows[0].bound.lo().to_f64());
        assert!(rows.last().unwrap().bound.hi().to_f64() < 0.06);
    }

    #[test]
    fn parse_set_specs() {
        assert!(matches!(
            SetSpec::parse("points:0.1,0.2").unwrap(),
            SetSpec::Points(_)
        ));
        assert!(matches!(
            SetSpec::parse("intervals:0.1,0.2;0.4,0.5").unwrap(),
            SetSpec::Intervals(_)
        ));
        let c = SetSpec::parse("cantor:depth=3,ratio=1/3").unwrap();
        assert_eq!(c.items().unwrap().len(), 8);
        assert!(SetSpec::parse("blob:1").is_err());
    }
}
