//! Logarithmic-kernel potentials of discrete measures on (0, 1).
//!
//! Builds the truncated rational-atom measure Σ_q Σ_p δ_{p/q}/q^{2+ε/4},
//! evaluates potentials U(z) = Σ w·|ln|z−x||^σ with certified enclosures, and
//! runs truncation scans whose growth is the numerical evidence that the
//! potential diverges at numbers violating the growth condition. Atom points
//! and distances are exact rationals; only logarithms and powers round, and
//! those round outward.

use crate::cf::{convergents, CertifiedReal, Convergent, NumberSpec, PartialQuotients};
use crate::dioph::{ConditionParams, SeriesReport};
use crate::error::{Error, Result};
use crate::real::{RealInterval, Verdict};
use rug::{Integer, Rational};
use std::collections::BTreeMap;

/// k_σ(z, ξ) = |ln|z − ξ||^σ. The exponent is an enclosure because the
/// branch exponents 2β/γ and β(2+ε)/γ are generally not representable.
#[derive(Debug, Clone)]
pub struct LogKernel {
    sigma: RealInterval,
}

impl LogKernel {
    pub fn new(sigma: RealInterval) -> Result<Self> {
        if !sigma.is_strictly_positive() {
            return Err(Error::InvalidInput("kernel exponent must be positive".into()));
        }
        Ok(LogKernel { sigma })
    }

    pub fn from_f64(sigma: f64, prec: u32) -> Result<Self> {
        Self::new(RealInterval::from_f64(sigma, prec))
    }

    /// Exponent 2β/γ of the γ ≤ 2 branch.
    pub fn k1(params: &ConditionParams, prec: u32) -> Result<Self> {
        let beta = RealInterval::from_f64(params.beta, prec);
        let gamma = RealInterval::from_f64(params.gamma, prec);
        Self::new(beta.mul(&RealInterval::from_f64(2.0, prec)).div(&gamma))
    }

    /// Exponent β of the γ > 2 branch.
    pub fn k2(params: &ConditionParams, prec: u32) -> Result<Self> {
        Self::from_f64(params.beta, prec)
    }

    /// Exponent β(2+ε)/γ appearing inside the γ ≤ 2 divergence argument.
    pub fn k1_internal(params: &ConditionParams, prec: u32) -> Result<Self> {
        let beta = RealInterval::from_f64(params.beta, prec);
        let gamma = RealInterval::from_f64(params.gamma, prec);
        let two_eps = RealInterval::from_f64(2.0 + 0.0, prec)
            .add(&RealInterval::from_f64(params.epsilon, prec));
        Self::new(beta.mul(&two_eps).div(&gamma))
    }

    pub fn sigma(&self) -> &RealInterval {
        &self.sigma
    }

    /// |ln d|^σ for an exact positive distance enclosure with d_hi < 1.
    fn eval_distance(&self, d_lo: &Rational, d_hi: &Rational, prec: u32) -> Result<RealInterval> {
        if *d_hi >= 1u32 {
            return Err(Error::InvalidInput(
                "kernel distance >= 1: points must stay within a diameter-1 window".into(),
            ));
        }
        if *d_lo <= 0u32 {
            return Err(Error::InsufficientPrecision(
                "distance enclosure touches 0".into(),
            ));
        }
        // d < 1 so |ln d| = −ln d, positive and decreasing in d
        let t = RealInterval::from_rational_bounds(d_lo, d_hi, prec).ln().neg();
        Ok(t.pow(&self.sigma))
    }
}

/// Weighted atoms at exact rational points; equal points coalesce.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    atoms: Vec<(Rational, RealInterval)>,
    total_mass: RealInterval,
}

impl DiscreteMeasure {
    pub fn from_atoms(raw: Vec<(Rational, RealInterval)>, prec: u32) -> Self {
        let mut map: BTreeMap<Rational, RealInterval> = BTreeMap::new();
        for (point, weight) in raw {
            debug_assert!(weight.lo() > &0.0);
            match map.remove(&point) {
                Some(w) => {
                    map.insert(point, w.add(&weight));
                }
                None => {
                    map.insert(point, weight);
                }
            }
        }
        let atoms: Vec<(Rational, RealInterval)> = map.into_iter().collect();
        let weights: Vec<RealInterval> = atoms.iter().map(|(_, w)| w.clone()).collect();
        let total_mass = RealInterval::sum(&weights, prec);
        DiscreteMeasure { atoms, total_mass }
    }

    pub fn atoms(&self) -> &[(Rational, RealInterval)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> &RealInterval {
        &self.total_mass
    }

    pub fn weight_at(&self, point: &Rational) -> Option<&RealInterval> {
        self.atoms
            .binary_search_by(|(x, _)| x.cmp(point))
            .ok()
            .map(|i| &self.atoms[i].1)
    }
}

/// Truncation of μ = Σ_q Σ_{p=1}^{q−1} δ_{p/q}/q^{2+ε/4} at q ≤ q_max.
///
/// Fractions are not required to be coprime: p/q duplicates coalesce with
/// summed weights (2/4 lands on 1/2). `coprime_only` switches to reduced
/// fractions only, for comparison.
pub fn farey_measure(
    q_max: u32,
    epsilon: f64,
    coprime_only: bool,
    prec: u32,
) -> Result<DiscreteMeasure> {
    if q_max < 2 {
        return Err(Error::InvalidInput("q_max must be >= 2".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let exponent = RealInterval::from_f64(2.0, prec)
        .add(&RealInterval::from_f64(epsilon, prec).div(&RealInterval::from_f64(4.0, prec)))
        .neg();
    let mut raw = Vec::new();
    for q in 2..=q_max {
        let weight = RealInterval::from_integer(&Integer::from(q), prec).pow(&exponent);
        for p in 1..q {
            if coprime_only && Integer::from(p).gcd(&Integer::from(q)) != 1 {
                continue;
            }
            raw.push((Rational::from((p, q)), weight.clone()));
        }
    }
    Ok(DiscreteMeasure::from_atoms(raw, prec))
}

/// A potential value: finite enclosure or the atom-collision sentinel.
#[derive(Debug, Clone)]
pub enum PotentialValue {
    Finite(RealInterval),
    Infinite,
}

impl PotentialValue {
    pub fn as_finite(&self) -> Option<&RealInterval> {
        match self {
            PotentialValue::Finite(v) => Some(v),
            PotentialValue::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PotentialValue::Infinite)
    }
}

/// Where a potential is evaluated: an exact rational or a certified enclosure
/// of an irrational.
#[derive(Debug, Clone)]
pub enum EvalPoint {
    Exact(Rational),
    Enclosed(CertifiedReal),
}

impl From<Rational> for EvalPoint {
    fn from(r: Rational) -> Self {
        EvalPoint::Exact(r)
    }
}

impl From<CertifiedReal> for EvalPoint {
    fn from(x: CertifiedReal) -> Self {
        EvalPoint::Enclosed(x)
    }
}

/// Exact distance enclosures |z − xᵢ| for every atom, sorted ascending, so
/// summation order depends only on the multiset of (distance, weight) pairs;
/// mirror-symmetric configurations then sum to bit-identical enclosures.
fn sorted_distance_terms(
    mu: &DiscreteMeasure,
    z: &EvalPoint,
) -> Result<Option<Vec<(Rational, Rational, RealInterval)>>> {
    let mut terms = Vec::with_capacity(mu.len());
    for (x, w) in mu.atoms() {
        match z {
            EvalPoint::Exact(r) => {
                if r == x {
                    return Ok(None); // collision
                }
                let d = Rational::from(r - x).abs();
                terms.push((d.clone(), d, w.clone()));
            }
            EvalPoint::Enclosed(enc) => {
                if enc.contains(x) {
                    return Err(Error::InsufficientPrecision(format!(
                        "atom {x} lies inside the enclosure of z; refine z"
                    )));
                }
                let (d_lo, d_hi) = if *x < *enc.lo() {
                    (
                        Rational::from(enc.lo() - x),
                        Rational::from(enc.hi() - x),
                    )
                } else {
                    (
                        Rational::from(x - enc.hi()),
                        Rational::from(x - enc.lo()),
                    )
                };
                terms.push((d_lo, d_hi, w.clone()));
            }
        }
    }
    terms.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.cmp(&b.1))
            .then_with(|| a.2.lo().partial_cmp(b.2.lo()).unwrap())
            .then_with(|| a.2.hi().partial_cmp(b.2.hi()).unwrap())
    });
    Ok(Some(terms))
}

/// U(z) = Σᵢ wᵢ·|ln|z − xᵢ||^σ. Exact collision with an atom gives the
/// +∞ sentinel; an enclosure that merely contains an atom is a precision
/// error (mathematically the distance is nonzero, the enclosure is too wide).
pub fn potential(
    mu: &DiscreteMeasure,
    z: &EvalPoint,
    kernel: &LogKernel,
    prec: u32,
) -> Result<PotentialValue> {
    let terms = match sorted_distance_terms(mu, z)? {
        None => return Ok(PotentialValue::Infinite),
        Some(t) => t,
    };
    let mut acc = RealInterval::zero(prec);
    for (d_lo, d_hi, w) in &terms {
        acc = acc.add(&kernel.eval_distance(d_lo, d_hi, prec)?.mul(w));
    }
    Ok(PotentialValue::Finite(acc))
}

/// I(μ) = Σᵢⱼ wᵢwⱼ k_σ(xᵢ, xⱼ). Any atom pairs with itself on the diagonal,
/// so every nonempty atomic measure has infinite energy.
pub fn energy(mu: &DiscreteMeasure, _kernel: &LogKernel) -> PotentialValue {
    if mu.is_empty() {
        PotentialValue::Finite(RealInterval::zero(64))
    } else {
        PotentialValue::Infinite
    }
}

/// Diagnostic: the off-diagonal part Σ_{i≠j} wᵢwⱼ k_σ(xᵢ, xⱼ).
pub fn off_diagonal_energy(
    mu: &DiscreteMeasure,
    kernel: &LogKernel,
    prec: u32,
) -> Result<RealInterval> {
    let atoms = mu.atoms();
    let mut acc = RealInterval::zero(prec);
    for i in 0..atoms.len() {
        for j in 0..atoms.len() {
            if i == j {
                continue;
            }
            let d = Rational::from(&atoms[i].0 - &atoms[j].0).abs();
            let k = kernel.eval_distance(&d, &d, prec)?;
            acc = acc.add(&k.mul(&atoms[i].1).mul(&atoms[j].1));
        }
    }
    Ok(acc)
}

/// Which divergence branch of the main argument to instrument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelBranch {
    /// γ ≤ 2: stated kernel exponent 2β/γ, internal exponent β(2+ε)/γ.
    K1,
    /// γ > 2: kernel exponent β.
    K2,
}

impl KernelBranch {
    /// The branch the parameters call for.
    pub fn for_params(params: &ConditionParams) -> Self {
        if params.gamma <= 2.0 {
            KernelBranch::K1
        } else {
            KernelBranch::K2
        }
    }
}

/// One row of a divergence scan.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub q_max: u32,
    /// U with the stated kernel exponent (2β/γ for K1, β for K2).
    pub stated: RealInterval,
    /// U with the internal exponent β(2+ε)/γ (equals `stated` for K2).
    pub internal: RealInterval,
    /// Convergent-subseries lower bound at matched truncation and at the
    /// internal exponent; a subset of the potential's terms, so it never
    /// exceeds `internal`.
    pub lower_bound: RealInterval,
}

/// Everything the scan needs to know about ν, reduced to (0, 1).
struct NormalizedNumber {
    convs: Vec<Convergent>,
    enclosure: CertifiedReal,
}

/// Reduce ν mod 1 (the measure lives on (0, 1)) and prepare convergents up to
/// denominators ≥ `q_limit` plus a certified enclosure tight enough to
/// separate ν from every atom of the q ≤ `q_limit` truncation.
fn normalize_number(nu: &NumberSpec, q_limit: u32) -> Result<NormalizedNumber> {
    let mut depth = 8usize;
    let limit = Integer::from(q_limit);
    let pq = loop {
        let pq = nu.partial_quotients(depth)?;
        let convs = convergents(&pq, depth)?;
        if convs.last().unwrap().q > Integer::from(&limit * &limit) {
            break pq;
        }
        depth *= 2;
        if depth > 1 << 16 {
            break pq;
        }
    };
    // fractional part: v₀ ← 0 keeps the tail and hence all Qₙ
    let reduced = PartialQuotients::new(Integer::new(), pq.tail().clone())?;
    let deep = convergents(&reduced, depth.min(1 << 16))?;
    let mut cut = deep.len() - 1;
    while cut > 1 && deep[cut - 1].q > limit {
        cut -= 1;
    }
    let convs: Vec<Convergent> = deep.into_iter().take(cut + 1).collect();
    let last = &convs[convs.len() - 1];
    let width = Rational::from((
        Integer::from(1),
        (Integer::from(&last.q) * &last.q) << 40u32,
    ));
    let spec = NumberSpec::ExplicitCf(reduced);
    let enclosure = spec.enclosure(&width)?;
    Ok(NormalizedNumber { convs, enclosure })
}

/// Truncated potentials U^{μ(q_max)}(ν) along an increasing schedule, with
/// both branch exponents and the convergent-subseries lower bound per row.
pub fn divergence_scan(
    nu: &NumberSpec,
    params: &ConditionParams,
    branch: KernelBranch,
    schedule: &[u32],
    prec: u32,
) -> Result<Vec<ScanRow>> {
    if schedule.is_empty() {
        return Ok(Vec::new());
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("schedule must be strictly increasing".into()));
    }
    let q_top = *schedule.last().unwrap();
    let num = normalize_number(nu, q_top)?;
    let z = EvalPoint::Enclosed(num.enclosure.clone());
    let stated_kernel = match branch {
        KernelBranch::K1 => LogKernel::k1(params, prec)?,
        KernelBranch::K2 => LogKernel::k2(params, prec)?,
    };
    let internal_kernel = match branch {
        KernelBranch::K1 => LogKernel::k1_internal(params, prec)?,
        KernelBranch::K2 => LogKernel::k2(params, prec)?,
    };
    let mut rows = Vec::with_capacity(schedule.len());
    for &q_max in schedule {
        let mu = farey_measure(q_max, params.epsilon, false, prec)?;
        let terms = sorted_distance_terms(&mu, &z)?
            .expect("certified enclosure cannot collide exactly");
        let mut stated = RealInterval::zero(prec);
        let mut internal = RealInterval::zero(prec);
        for (d_lo, d_hi, w) in &terms {
            let t = RealInterval::from_rational_bounds(d_lo, d_hi, prec).ln().neg();
            stated = stated.add(&t.pow(stated_kernel.sigma()).mul(w));
            internal = internal.add(&t.pow(internal_kernel.sigma()).mul(w));
        }
        let lower_bound =
            subseries_lower_bound(&num, params, internal_kernel.sigma(), q_max, prec)?;
        rows.push(ScanRow {
            q_max,
            stated,
            internal,
            lower_bound,
        });
    }
    Ok(rows)
}

/// Σ over proper-fraction convergents with Qₙ ≤ q_max of
/// |ln|ν − Pₙ/Qₙ||^σ / Qₙ^{2+ε/4}.
///
/// Skips depths where Pₙ/Qₙ is not a proper fraction (P₁ = Q₁ happens when
/// v₁ = 1): those points carry no atom of the measure, and keeping the sum a
/// literal sub-sum of the potential is what makes `lower_bound ≤ internal`
/// exact at every truncation.
fn subseries_lower_bound(
    num: &NormalizedNumber,
    params: &ConditionParams,
    sigma: &RealInterval,
    q_max: u32,
    prec: u32,
) -> Result<RealInterval> {
    let weight_exp = RealInterval::from_f64(2.0, prec)
        .add(&RealInterval::from_f64(params.epsilon, prec).div(&RealInterval::from_f64(4.0, prec)))
        .neg();
    let limit = Integer::from(q_max);
    let mut acc = RealInterval::zero(prec);
    for c in num.convs.iter().filter(|c| c.n >= 1) {
        if c.q > limit {
            break;
        }
        if c.p < 1 || c.p >= c.q {
            continue;
        }
        let (d_lo, d_hi) = distance_to_convergent(&num.enclosure, c)?;
        let t = RealInterval::from_rational_bounds(&d_lo, &d_hi, prec).ln().neg();
        let w = RealInterval::from_integer(&c.q, prec).pow(&weight_exp);
        acc = acc.add(&t.pow(sigma).mul(&w));
    }
    Ok(acc)
}

fn distance_to_convergent(
    enc: &CertifiedReal,
    c: &Convergent,
) -> Result<(Rational, Rational)> {
    let (lo, hi) = enc.abs_linear(&c.q, &c.p)?;
    let q = Rational::from(&c.q);
    Ok((lo / &q, hi / &q))
}

/// Per-depth verification of the chain
/// |ln|ν − Pₙ/Qₙ||^σ ≥ ln^σ(QₙQₙ₊₁) ≥ ln^σ(Qₙ₊₁).
#[derive(Debug, Clone)]
pub struct TermCheck {
    pub n: usize,
    /// |ln|ν − Pₙ/Qₙ||^σ
    pub dist_term: RealInterval,
    /// ln^σ(QₙQₙ₊₁)
    pub mid_bound: RealInterval,
    /// ln^σ(Qₙ₊₁)
    pub tail_bound: RealInterval,
    pub first: Verdict,
    pub second: Verdict,
}

impl TermCheck {
    pub fn verified(&self) -> bool {
        self.first == Verdict::Holds && self.second == Verdict::Holds
    }
}

/// The proof's convergent-subseries lower bound for the chosen branch, with
/// every term's inequality chain checked under directed rounding.
#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    pub sigma: RealInterval,
    /// K1: Σ |ln|ν−Pₙ/Qₙ||^σ/Qₙ^{2+ε/4}; K2: Σ ln^β(Qₙ₊₁)/Qₙ^{2+ε/4}.
    pub series: SeriesReport,
    pub checks: Vec<TermCheck>,
    pub all_verified: bool,
}

/// Evaluates the branch subseries to depth N and verifies each term's bound.
pub fn lower_bound_terms(
    nu: &NumberSpec,
    params: &ConditionParams,
    branch: KernelBranch,
    n_terms: usize,
    prec: u32,
) -> Result<LowerBoundReport> {
    if n_terms == 0 {
        return Err(Error::InvalidInput("need at least one term".into()));
    }
    let pq = nu.partial_quotients(n_terms + 1)?;
    let convs = convergents(&pq, n_terms + 1)?;
    // enclosure tight relative to the deepest gap 1/(Q_N Q_{N+1})
    let last = &convs[n_terms + 1];
    let width = Rational::from((
        Integer::from(1),
        (Integer::from(&convs[n_terms].q) * &last.q) << 66u32,
    ));
    let enclosure = nu.enclosure(&width)?;

    let sigma = match branch {
        KernelBranch::K1 => LogKernel::k1_internal(params, prec)?.sigma().clone(),
        KernelBranch::K2 => RealInterval::from_f64(params.beta, prec),
    };
    let weight_exp = RealInterval::from_f64(2.0, prec)
        .add(&RealInterval::from_f64(params.epsilon, prec).div(&RealInterval::from_f64(4.0, prec)))
        .neg();

    let mut checks = Vec::with_capacity(n_terms);
    let mut series_terms = Vec::with_capacity(n_terms);
    for n in 1..=n_terms {
        let c = &convs[n];
        let c_next = &convs[n + 1];
        let (d_lo, d_hi) = {
            let (lo, hi) = enclosure.abs_linear(&c.q, &c.p)?;
            let q = Rational::from(&c.q);
            (lo / &q, hi / &q)
        };
        let dist_term = RealInterval::from_rational_bounds(&d_lo, &d_hi, prec)
            .ln()
            .neg()
            .pow(&sigma);
        let qq = Integer::from(&c.q * &c_next.q);
        let mid_bound = RealInterval::from_integer(&qq, prec).ln().pow(&sigma);
        let tail_bound = RealInterval::from_integer(&c_next.q, prec).ln().pow(&sigma);
        let first = dist_term.ge(&mid_bound);
        // exact on the integer arguments: QₙQₙ₊₁ ≥ Qₙ₊₁ and x ↦ ln^σ x is
        // increasing, so equality of the integers settles what outward-rounded
        // enclosures of one and the same value never could
        let second = if qq >= c_next.q {
            Verdict::Holds
        } else {
            mid_bound.ge(&tail_bound)
        };
        let w = RealInterval::from_integer(&c.q, prec).pow(&weight_exp);
        let series_term = match branch {
            KernelBranch::K1 => dist_term.mul(&w),
            KernelBranch::K2 => RealInterval::from_integer(&c_next.q, prec)
                .ln()
                .pow_f64(params.beta)
                .mul(&w),
        };
        series_terms.push(series_term);
        checks.push(TermCheck {
            n,
            dist_term,
            mid_bound,
            tail_bound,
            first,
            second,
        });
    }
    let all_verified = checks.iter().all(TermCheck::verified);
    let label = match branch {
        KernelBranch::K1 => format!(
            "subseries |ln dist|^sigma/Q^(2+eps/4), beta={} gamma={} eps={}",
            params.beta, params.gamma, params.epsilon
        ),
        KernelBranch::K2 => format!(
            "subseries ln^beta(Q_next)/Q^(2+eps/4), beta={} eps={}",
            params.beta, params.epsilon
        ),
    };
    let mut partial = Vec::with_capacity(series_terms.len());
    let mut acc = RealInterval::zero(prec);
    for t in &series_terms {
        acc = acc.add(t);
        partial.push(acc.clone());
    }
    let series = SeriesReport {
        label,
        start_index: 1,
        terms: series_terms,
        partial_sums: partial,
        classification: crate::dioph::Classification::Inconclusive,
        growth_ratio: None,
        certificate: None,
    };
    Ok(LowerBoundReport {
        sigma,
        series,
        checks,
        all_verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::QuadraticIrrational;

    const PREC: u32 = 256;

    #[test]
    fn farey_small_atoms() {
        let mu = farey_measure(3, 1.0, false, PREC).unwrap();
        let points: Vec<String> = mu.atoms().iter().map(|(x, _)| x.to_string()).collect();
        assert_eq!(points, vec!["1/3", "1/2", "2/3"]);
        // mass = 2^{-2.25} + 2·3^{-2.25}
        let expect = 2f64.powf(-2.25) + 2.0 * 3f64.powf(-2.25);
        assert!((mu.total_mass().midpoint_f64() - expect).abs() < 1e-14);
    }

    #[test]
    fn farey_coalesces_2_4() {
        let mu = farey_measure(4, 1.0, false, PREC).unwrap();
        let w = mu.weight_at(&Rational::from((1, 2))).unwrap();
        let expect = 2f64.powf(-2.25) + 4f64.powf(-2.25);
        assert!((w.midpoint_f64() - expect).abs() < 1e-14);
        // coprime-only drops the 2/4 contribution
        let mu_c = farey_measure(4, 1.0, true, PREC).unwrap();
        let w_c = mu_c.weight_at(&Rational::from((1, 2))).unwrap();
        assert!((w_c.midpoint_f64() - 2f64.powf(-2.25)).abs() < 1e-14);
    }

    #[test]
    fn farey_mass_below_zeta_bound() {
        // Σ_{q≥2} (q−1) q^{−2−ε/4} < Σ_{q≥2} q^{−1−ε/4} = ζ(1+ε/4) − 1
        let mu = farey_measure(200, 1.0, false, PREC).unwrap();
        // ζ(1.25) − 1 ≈ 3.6269 − 1
        assert!(mu.total_mass().hi().to_f64() < 2.6269);
    }

    #[test]
    fn potential_single_atom() {
        let atom = vec![(Rational::new(), RealInterval::one(PREC))];
        let mu = DiscreteMeasure::from_atoms(atom, PREC);
        let kernel = LogKernel::from_f64(1.0, PREC).unwrap();
        let u = potential(
            &mu,
            &EvalPoint::Exact(Rational::from((1, 2))),
            &kernel,
            PREC,
        )
        .unwrap();
        let v = u.as_finite().unwrap();
        assert!((v.midpoint_f64() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn potential_collision_is_infinite() {
        let mu = farey_measure(3, 1.0, false, PREC).unwrap();
        let kernel = LogKernel::from_f64(2.0, PREC).unwrap();
        let u = potential(
            &mu,
            &EvalPoint::Exact(Rational::from((1, 2))),
            &kernel,
            PREC,
        )
        .unwrap();
        assert!(u.is_infinite());
    }

    #[test]
    fn potential_three_term_hand_sum() {
        // μ = farey(3, 1), z = golden − 1, σ = 2; oracle: direct three-term sum
        let mu = farey_measure(3, 1.0, false, PREC).unwrap();
        let z = QuadraticIrrational::from_i64s(-1, 5, 2).unwrap().enclosure(200);
        let kernel = LogKernel::from_f64(2.0, PREC).unwrap();
        let u = potential(&mu, &EvalPoint::Enclosed(z), &kernel, PREC).unwrap();
        let got = u.as_finite().unwrap().midpoint_f64();
        let zf = (5f64.sqrt() - 1.0) / 2.0;
        let w2 = 2f64.powf(-2.25);
        let w3 = 3f64.powf(-2.25);
        let expect = w3 * (zf - 1.0 / 3.0).ln().abs().powi(2)
            + w2 * (zf - 0.5).ln().abs().powi(2)
            + w3 * (2.0 / 3.0 - zf).ln().abs().powi(2);
        assert!((got - expect).abs() < 1e-12, "got {got} expect {expect}");
    }

    #[test]
    fn potential_symmetric_measure_symmetric_points() {
        let mu = farey_measure(6, 0.5, false, PREC).unwrap();
        let kernel = LogKernel::from_f64(1.0, PREC).unwrap();
        let t = Rational::from((1, 7));
        let z_plus = Rational::from((1, 2)) + &t;
        let z_minus = Rational::from((1, 2)) - &t;
        let u_plus = potential(&mu, &EvalPoint::Exact(z_plus), &kernel, PREC).unwrap();
        let u_minus = potential(&mu, &EvalPoint::Exact(z_minus), &kernel, PREC).unwrap();
        assert_eq!(
            u_plus.as_finite().unwrap(),
            u_minus.as_finite().unwrap(),
            "mirror evaluations must agree bit-for-bit"
        );
    }

    #[test]
    fn energy_sentinel_and_off_diagonal() {
        let kernel = LogKernel::from_f64(1.0, PREC).unwrap();
        let mu = DiscreteMeasure::from_atoms(
            vec![
                (Rational::from((1, 4)), RealInterval::from_f64(0.5, PREC)),
                (Rational::from((3, 4)), RealInterval::from_f64(0.5, PREC)),
            ],
            PREC,
        );
        assert!(energy(&mu, &kernel).is_infinite());
        let off = off_diagonal_energy(&mu, &kernel, PREC).unwrap();
        // 2 · (1/4) · ln 2
        assert!((off.midpoint_f64() - 0.5 * std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn off_diagonal_matches_brute_double_loop() {
        let mu = farey_measure(4, 1.0, false, PREC).unwrap();
        let kernel = LogKernel::from_f64(1.0, PREC).unwrap();
        let off = off_diagonal_energy(&mu, &kernel, PREC).unwrap().midpoint_f64();
        let mut brute = 0.0;
        let pts: Vec<(f64, f64)> = mu
            .atoms()
            .iter()
            .map(|(x, w)| (x.to_f64(), w.midpoint_f64()))
            .collect();
        for (i, (xi, wi)) in pts.iter().enumerate() {
            for (j, (xj, wj)) in pts.iter().enumerate() {
                if i != j {
                    brute += wi * wj * (xi - xj).abs().ln().abs();
                }
            }
        }
        assert!((off - brute).abs() < 1e-12);
    }

    #[test]
    fn scan_monotone_for_golden() {
        let nu = NumberSpec::Quadratic(QuadraticIrrational::from_i64s(1, 5, 2).unwrap());
        let params = ConditionParams::brjuno();
        let rows =
            divergence_scan(&nu, &params, KernelBranch::K1, &[10, 40, 120], PREC).unwrap();
        assert_eq!(rows.len(), 3);
        for w in rows.windows(2) {
            assert!(w[1].stated.lo() >= w[0].stated.lo());
            assert!(w[1].internal.lo() >= w[0].internal.lo());
        }
        for row in &rows {
            assert_eq!(
                row.lower_bound.le(&row.internal),
                Verdict::Holds,
                "subseries bound exceeded the potential at q_max = {}",
                row.q_max
            );
        }
    }

    #[test]
    fn scan_empty_schedule() {
        let nu = NumberSpec::Quadratic(QuadraticIrrational::from_i64s(0, 2, 1).unwrap());
        let rows = divergence_scan(
            &nu,
            &ConditionParams::brjuno(),
            KernelBranch::K1,
            &[],
            PREC,
        )
        .unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn lower_bound_chain_golden() {
        let nu = NumberSpec::Quadratic(QuadraticIrrational::from_i64s(1, 5, 2).unwrap());
        let params = ConditionParams::new(1.0, 1.0, 1.0, 0.125).unwrap();
        let report = lower_bound_terms(&nu, &params, KernelBranch::K1, 10, PREC).unwrap();
        assert!(report.all_verified);
        assert_eq!(report.checks.len(), 10);
    }

    #[test]
    fn lower_bound_chain_k2_branch() {
        let nu = NumberSpec::Quadratic(QuadraticIrrational::from_i64s(0, 2, 1).unwrap());
        let params = ConditionParams::new(1.0, 3.0, 0.5, 0.0625).unwrap();
        let report = lower_bound_terms(&nu, &params, KernelBranch::K2, 12, PREC).unwrap();
        assert!(report.all_verified);
        // K2 series terms are ln(Qₙ₊₁)^β weighted; all positive
        assert!(report.series.terms.iter().all(|t| t.lo() > &0.0));
    }

    #[test]
    fn two_sided_log_band() {
        // ln(QₙQₙ₊₁) < |ln|ν−Pₙ/Qₙ|| < ln(QₙQₙ₊₁) + ln 2, the log form of the
        // classical two-sided bound
        let nu = NumberSpec::ExplicitCf(PartialQuotients::e_pattern());
        let pq = nu.partial_quotients(16).unwrap();
        let convs = convergents(&pq, 16).unwrap();
        let width = Rational::from((
            Integer::from(1),
            (Integer::from(&convs[15].q) * &convs[16].q) << 66u32,
        ));
        let enc = nu.enclosure(&width).unwrap();
        for n in 1..=15 {
            let c = &convs[n];
            let (lo, hi) = enc.abs_linear(&c.q, &c.p).unwrap();
            let q = Rational::from(&c.q);
            let (d_lo, d_hi) = (lo / &q, hi / &q);
            let abs_ln = RealInterval::from_rational_bounds(&d_lo, &d_hi, PREC).ln().neg();
            let qq = Integer::from(&c.q * &convs[n + 1].q);
            let base = RealInterval::from_integer(&qq, PREC).ln();
            let upper = base.add(&RealInterval::from_f64(2.0, PREC).ln());
            assert_eq!(abs_ln.gt(&base), Verdict::Holds, "lower side at n={n}");
            assert_eq!(abs_ln.lt(&upper), Verdict::Holds, "upper side at n={n}");
        }
    }

    #[test]
    fn kernel_rejects_wide_distances() {
        let kernel = LogKernel::from_f64(1.0, PREC).unwrap();
        let one = Rational::from(1);
        assert!(kernel.eval_distance(&one, &one, PREC).is_err());
    }
}
