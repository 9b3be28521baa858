//! Diophantine growth conditions on continued-fraction denominators.
//!
//! Evaluates truncations of the weighted series Σ lnᵝ(Qₙ₊₁)/Qₙᵞ, the classical
//! Brjuno specialization β = γ = 1, and the small-denominator series
//! Σ ln Ψ(Q)/Q^{1+1/α}. The function Ψ is computed two independent ways — from
//! convergents and by exhaustive lattice enumeration — and the module also
//! verifies, at truncation and with directed rounding, the inequality chain
//! connecting the two series and the Hölder bound relating different exponent
//! pairs. A constructor produces test numbers whose series provably diverges.

use crate::cf::{convergents, Convergent, NumberSpec, PartialQuotients, Tail};
use crate::error::{Error, Result};
use crate::real::{RealInterval, Verdict};
use rug::{Integer, Rational};

/// Exponents (β, γ) of the growth condition plus the (ε, δ) pair used by the
/// Hölder comparison. Parameters are exact binary floats; every derived
/// exponent is enclosed by interval arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionParams {
    pub beta: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub delta: f64,
}

impl ConditionParams {
    pub fn new(beta: f64, gamma: f64, epsilon: f64, delta: f64) -> Result<Self> {
        for (name, v) in [
            ("beta", beta),
            ("gamma", gamma),
            ("epsilon", epsilon),
            ("delta", delta),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(ConditionParams {
            beta,
            gamma,
            epsilon,
            delta,
        })
    }

    /// The classical case β = γ = 1 with default (ε, δ).
    pub fn brjuno() -> Self {
        ConditionParams {
            beta: 1.0,
            gamma: 1.0,
            epsilon: 0.1,
            delta: 1.0 / 32.0,
        }
    }

    /// β = 1, γ = 1 + 1/α preset (α ≥ 1).
    pub fn brjuno_russmann(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0) {
            return Err(Error::InvalidInput(format!("alpha must be >= 1, got {alpha}")));
        }
        ConditionParams::new(1.0, 1.0 + 1.0 / alpha, 0.1, 1.0 / 32.0)
    }

    /// Kernel exponent 2α/(α+1) matching the β = 1, γ = 1 + 1/α preset.
    pub fn br_alpha_sigma(alpha: f64) -> f64 {
        2.0 * alpha / (alpha + 1.0)
    }

    /// Exact check of the Hölder-step hypotheses: γ < 2 + ε and
    /// (1 − δ)(2 + ε) ≥ 2 + ε/4, evaluated in rational arithmetic on the
    /// exact binary values of the parameters.
    pub fn validate_holder(&self) -> Result<()> {
        let gamma = Rational::from_f64(self.gamma).unwrap();
        let eps = Rational::from_f64(self.epsilon).unwrap();
        let delta = Rational::from_f64(self.delta).unwrap();
        let two_eps = Rational::from(2) + &eps;
        if gamma >= two_eps {
            return Err(Error::InvalidInput(format!(
                "gamma = {} must be < 2 + epsilon = {}",
                self.gamma,
                2.0 + self.epsilon
            )));
        }
        let lhs = (Rational::from(1) - &delta) * &two_eps;
        let rhs = Rational::from(2) + eps / 4u32;
        if lhs < rhs {
            return Err(Error::InvalidInput(format!(
                "delta = {} too large: (1-delta)(2+eps) = {} < 2 + eps/4 = {}",
                self.delta,
                lhs.to_f64(),
                rhs.to_f64()
            )));
        }
        Ok(())
    }

    /// Largest δ satisfying (1 − δ)(2 + ε) ≥ 2 + ε/4, as an exact rational.
    pub fn max_admissible_delta(epsilon: f64) -> Rational {
        let eps = Rational::from_f64(epsilon).unwrap();
        // 1 − (2 + ε/4)/(2 + ε) = (3ε/4)/(2 + ε)
        let num = Rational::from(3) * &eps / 4u32;
        let den = Rational::from(2) + eps;
        num / den
    }
}

/// Trend label attached to a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    ConvergentTrend,
    DivergentTrend,
    CertifiedDivergent,
    Inconclusive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::ConvergentTrend => "CONVERGENT-TREND",
            Classification::DivergentTrend => "DIVERGENT-TREND",
            Classification::CertifiedDivergent => "CERTIFIED-DIVERGENT",
            Classification::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Analytic per-term lower bound attached by the divergent constructor.
#[derive(Debug, Clone)]
pub struct DivergenceCertificate {
    /// Every series term is ≥ this value, for every index the rule defines.
    pub per_term_lower: f64,
    /// Terms whose denominators were actually materialized.
    pub materialized_terms: usize,
    pub rule: String,
}

/// Truncated series with per-term enclosures and running partial sums.
#[derive(Debug, Clone)]
pub struct SeriesReport {
    pub label: String,
    /// Index of the first term (n = 1 for convergent series, Q = 1 for Ψ sums).
    pub start_index: u64,
    pub terms: Vec<RealInterval>,
    pub partial_sums: Vec<RealInterval>,
    pub classification: Classification,
    /// Relative mass of the second half of the truncation: (S_N − S_{N/2})/S_{N/2}.
    pub growth_ratio: Option<f64>,
    pub certificate: Option<DivergenceCertificate>,
}

/// Tail-mass thresholds for the trend labels: below the first the truncation
/// looks settled, above the second the second half still carries most of the
/// growth. Anything between is reported as inconclusive.
const CONVERGENT_TAIL_RATIO: f64 = 0.01;
const DIVERGENT_TAIL_RATIO: f64 = 0.5;
const MIN_TERMS_FOR_TREND: usize = 8;

impl SeriesReport {
    fn from_terms(
        label: String,
        start_index: u64,
        terms: Vec<RealInterval>,
        prec: u32,
        certificate: Option<DivergenceCertificate>,
    ) -> Self {
        let mut partial_sums = Vec::with_capacity(terms.len());
        let mut acc = RealInterval::zero(prec);
        for t in &terms {
            acc = acc.add(t);
            partial_sums.push(acc.clone());
        }
        let growth_ratio = if terms.len() >= MIN_TERMS_FOR_TREND {
            let n = terms.len();
            let half = partial_sums[n / 2 - 1].midpoint_f64();
            let full = partial_sums[n - 1].midpoint_f64();
            if half.abs() > 0.0 {
                Some((full - half) / half)
            } else {
                None
            }
        } else {
            None
        };
        let classification = if certificate.is_some() {
            Classification::CertifiedDivergent
        } else {
            match growth_ratio {
                Some(r) if r < CONVERGENT_TAIL_RATIO => Classification::ConvergentTrend,
                Some(r) if r > DIVERGENT_TAIL_RATIO => Classification::DivergentTrend,
                Some(_) => Classification::Inconclusive,
                None => Classification::Inconclusive,
            }
        };
        SeriesReport {
            label,
            start_index,
            terms,
            partial_sums,
            classification,
            growth_ratio,
            certificate,
        }
    }

    /// Enclosure of the full truncated sum.
    pub fn total(&self) -> RealInterval {
        self.partial_sums
            .last()
            .cloned()
            .unwrap_or_else(|| RealInterval::zero(64))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Shared kernel of the condition series: Σₙ pow(ln Qₙ₊₁, β) / pow(Qₙ, γ)
/// with interval exponents, summed in index order.
fn weighted_log_series(
    convs: &[Convergent],
    beta: &RealInterval,
    gamma: &RealInterval,
    n_terms: usize,
    prec: u32,
    label: String,
    certificate: Option<DivergenceCertificate>,
) -> Result<SeriesReport> {
    if n_terms == 0 {
        return Err(Error::InvalidInput("series needs at least one term".into()));
    }
    if convs.len() < n_terms + 2 {
        return Err(Error::DepthUnavailable {
            requested: n_terms + 1,
            available: convs.len().saturating_sub(1),
        });
    }
    let mut terms = Vec::with_capacity(n_terms);
    for n in 1..=n_terms {
        let ln_q_next = RealInterval::from_integer(&convs[n + 1].q, prec).ln();
        let q_n = RealInterval::from_integer(&convs[n].q, prec);
        let term = ln_q_next.pow(beta).div(&q_n.pow(gamma));
        debug_assert!(term.lo() > &0.0);
        terms.push(term);
    }
    Ok(SeriesReport::from_terms(
        label,
        1,
        terms,
        prec,
        certificate,
    ))
}

/// Partial sum S_N = Σₙ₌₁ᴺ lnᵝ(Qₙ₊₁)/Qₙᵞ of the growth-condition series.
/// Term n needs Qₙ₊₁, so `convs` must reach depth N + 1.
pub fn a_series_partial(
    convs: &[Convergent],
    params: &ConditionParams,
    n_terms: usize,
    prec: u32,
) -> Result<SeriesReport> {
    weighted_log_series(
        convs,
        &RealInterval::from_f64(params.beta, prec),
        &RealInterval::from_f64(params.gamma, prec),
        n_terms,
        prec,
        format!("a-series beta={} gamma={}", params.beta, params.gamma),
        None,
    )
}

/// The β = γ = 1 specialization: Σ ln(Qₙ₊₁)/Qₙ.
pub fn brjuno_partial(convs: &[Convergent], n_terms: usize, prec: u32) -> Result<SeriesReport> {
    weighted_log_series(
        convs,
        &RealInterval::one(prec),
        &RealInterval::one(prec),
        n_terms,
        prec,
        "brjuno".to_string(),
        None,
    )
}

/// Ψ evaluated from convergents: Ψ(Q) = |νQₙ − Pₙ|⁻¹ on the segment
/// n(Q) = max{n ≥ 0 : Qₙ < Q} (n = 0 when Q = 1).
///
/// The strict inequality resolves the boundary Q = Qₙ₊₁ to the lower segment,
/// which is where the lattice maximum over 0 < |k| < Q actually sits: the
/// vector (−Pₙ₊₁, Qₙ₊₁) is excluded until Q > Qₙ₊₁.
pub struct PsiOracle {
    convs: Vec<Convergent>,
    /// Exact enclosure of |νQₙ − Pₙ| per depth n.
    residuals: Vec<(Rational, Rational)>,
    max_q: Integer,
}

/// One Ψ(Q) evaluation: the segment used and the exact rational enclosure.
#[derive(Debug, Clone)]
pub struct PsiValue {
    pub q: Integer,
    pub segment: usize,
    pub lo: Rational,
    pub hi: Rational,
}

impl PsiOracle {
    /// Prepares convergents and residual enclosures for all Q ≤ `q_max`.
    pub fn new(nu: &NumberSpec, q_max: u64) -> Result<Self> {
        if q_max < 1 {
            return Err(Error::InvalidInput("q_max must be >= 1".into()));
        }
        let q_max_int = Integer::from(q_max);
        // deepest segment index: largest n with Qₙ < q_max; keep one extra
        // convergent so the deepest residual is two-sidedly bounded
        let mut depth = 8usize;
        let convs = loop {
            let pq = nu.partial_quotients(depth)?;
            let convs = convergents(&pq, depth)?;
            if convs.last().unwrap().q >= q_max_int {
                break convs;
            }
            depth *= 2;
            if depth > 1 << 20 {
                return Err(Error::InvalidInput(
                    "convergent denominators grow too slowly for q_max".into(),
                ));
            }
        };
        let deepest = convs
            .iter()
            .rposition(|c| c.q < q_max_int)
            .unwrap_or(0)
            .min(convs.len() - 2);
        // enclosure tight enough that every residual has ~64 correct bits
        let last = &convs[deepest + 1];
        let width = Rational::from((
            Integer::from(1),
            (Integer::from(&convs[deepest].q) * &last.q) << 66u32,
        ));
        let enclosure = nu.enclosure(&width)?;
        let mut residuals = Vec::with_capacity(deepest + 1);
        for c in &convs[..=deepest + 1] {
            residuals.push(enclosure.abs_linear(&c.q, &c.p)?);
        }
        Ok(PsiOracle {
            convs,
            residuals,
            max_q: q_max_int,
        })
    }

    pub fn convergents(&self) -> &[Convergent] {
        &self.convs
    }

    /// Segment index n(Q) = max{n : Qₙ < Q}, or 0 when no Qₙ < Q.
    pub fn segment(&self, q: &Integer) -> usize {
        let mut seg = 0usize;
        for (i, c) in self.convs.iter().enumerate() {
            if c.q < *q {
                seg = i;
            } else {
                break;
            }
        }
        seg
    }

    pub fn psi(&self, q: &Integer) -> Result<PsiValue> {
        if *q < 1 || *q > self.max_q {
            return Err(Error::InvalidInput(format!(
                "Q = {q} outside prepared range [1, {}]",
                self.max_q
            )));
        }
        let seg = self.segment(q);
        let (rlo, rhi) = &self.residuals[seg];
        Ok(PsiValue {
            q: q.clone(),
            segment: seg,
            lo: Rational::from(rhi.recip_ref()),
            hi: Rational::from(rlo.recip_ref()),
        })
    }
}

/// One-shot Ψ(Q) from the continued-fraction expansion of ν.
pub fn psi_cf(nu: &NumberSpec, q: u64) -> Result<PsiValue> {
    let oracle = PsiOracle::new(nu, q)?;
    oracle.psi(&Integer::from(q))
}

/// Norm used for the lattice cutoff 0 < |k| < Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeNorm {
    Sup,
    L1,
}

impl LatticeNorm {
    pub fn as_str(self) -> &'static str {
        match self {
            LatticeNorm::Sup => "sup",
            LatticeNorm::L1 => "l1",
        }
    }
}

/// A frequency vector with certified (possibly exact) rational component
/// enclosures. Non-resonance is a working hypothesis: enumeration reports a
/// resonance error whenever some |k·ω| enclosure contains zero.
#[derive(Debug, Clone)]
pub struct VectorSpec {
    components: Vec<(Rational, Rational)>,
    norm: LatticeNorm,
    /// Integer subtracted from the second component by the (1, ν) preset.
    shift: Integer,
}

impl VectorSpec {
    pub fn new(components: Vec<(Rational, Rational)>, norm: LatticeNorm) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidInput("vector needs dimension >= 2".into()));
        }
        for (lo, hi) in &components {
            if lo > hi {
                return Err(Error::InvalidInput("component enclosure with lo > hi".into()));
            }
        }
        Ok(VectorSpec {
            components,
            norm,
            shift: Integer::new(),
        })
    }

    /// The preset ω = (1, ν − ⌊ν⌋).
    ///
    /// The integer part is removed by the unimodular substitution
    /// k¹ ← k¹ + ⌊ν⌋k², which leaves the set {|k·ω|} unchanged and puts the
    /// convergent vectors (−Pₙ, Qₙ) inside sup-norm balls of radius Qₙ, so the
    /// lattice maximum matches the convergent formula for Ψ. The shift is
    /// recorded and reported.
    pub fn one_nu(nu: &NumberSpec, norm: LatticeNorm) -> Result<Self> {
        let mut width = Rational::from((Integer::from(1), Integer::from(1) << 280u32));
        loop {
            let enc = nu.enclosure(&width)?;
            let floor_lo = Rational::from(enc.lo()).floor().numer().clone();
            let floor_hi = Rational::from(enc.hi()).floor().numer().clone();
            if floor_lo == floor_hi {
                let lo = Rational::from(enc.lo() - &floor_lo);
                let hi = Rational::from(enc.hi() - &floor_lo);
                return Ok(VectorSpec {
                    components: vec![(Rational::from(1), Rational::from(1)), (lo, hi)],
                    norm,
                    shift: floor_lo,
                });
            }
            // ν hugs an integer; tighten until the floor is determined
            width /= Integer::from(1) << 64u32;
            if *width.denom() > Integer::from(1) << 4096u32 {
                return Err(Error::InsufficientPrecision(
                    "cannot separate ν from an integer".into(),
                ));
            }
        }
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn norm(&self) -> LatticeNorm {
        self.norm
    }

    pub fn shift(&self) -> &Integer {
        &self.shift
    }

    fn mid_f64(&self) -> Vec<f64> {
        self.components
            .iter()
            .map(|(lo, hi)| (lo.to_f64() + hi.to_f64()) / 2.0)
            .collect()
    }

    /// Exact enclosure of |k·ω|; resonance error when it contains zero.
    fn abs_dot(&self, k: &[i64]) -> Result<(Rational, Rational)> {
        let mut lo = Rational::new();
        let mut hi = Rational::new();
        for (ki, (clo, chi)) in k.iter().zip(&self.components) {
            if *ki >= 0 {
                lo += Rational::from(clo * ki);
                hi += Rational::from(chi * ki);
            } else {
                lo += Rational::from(chi * ki);
                hi += Rational::from(clo * ki);
            }
        }
        if lo > 0 {
            Ok((lo, hi))
        } else if hi < 0 {
            Ok((-hi, -lo))
        } else {
            Err(Error::Resonance(k.to_vec()))
        }
    }
}

/// Ψ_ω(Q) by lattice enumeration: value enclosure and the argmax vector.
#[derive(Debug, Clone)]
pub struct PsiBrute {
    pub q: u64,
    pub lo: Rational,
    pub hi: Rational,
    pub argmax: Vec<i64>,
}

const ENUMERATION_BUDGET: u64 = 1 << 28;

/// Exhaustive small-denominator scan: Ψ_ω(Q) for every Q in 2..=q_max.
///
/// Shell-by-shell enumeration (|k| = s contributes to all Q > s) with an f64
/// prefilter: a point is confirmed in exact rational arithmetic whenever its
/// f64 value comes within a conservative slack of the current best, so the
/// reported enclosure and argmax are exact while most points cost two flops.
pub fn psi_bruteforce_scan(omega: &VectorSpec, q_max: u64) -> Result<Vec<PsiBrute>> {
    let dim = omega.dimension();
    if dim > 4 {
        return Err(Error::InvalidInput("lattice enumeration limited to n <= 4".into()));
    }
    if q_max < 2 {
        return Err(Error::InvalidInput("q_max must be >= 2".into()));
    }
    let points_estimate = (2 * q_max + 1).pow(dim as u32);
    if points_estimate > ENUMERATION_BUDGET {
        return Err(Error::InvalidInput(format!(
            "enumeration budget exceeded: ~{points_estimate} lattice points"
        )));
    }
    let mids = omega.mid_f64();
    let abs_sum: f64 = mids.iter().map(|m| m.abs()).sum();
    let mut best: Option<(Rational, Rational, Vec<i64>)> = None;
    let mut best_mid = f64::INFINITY;
    let mut out = Vec::with_capacity((q_max - 1) as usize);
    let mut k = vec![0i64; dim];
    for s in 1..q_max {
        let slack = (s as f64) * (1.0 + abs_sum) * 1e-13 + f64::MIN_POSITIVE;
        let mut err: Option<Error> = None;
        shell_walk(omega.norm, s as i64, 0, &mut k, &mut |k: &[i64]| {
            // half-space: first nonzero coordinate positive (±k are equal)
            match k.iter().find(|&&v| v != 0) {
                Some(&v) if v > 0 => {}
                _ => return,
            }
            let mid: f64 = k
                .iter()
                .zip(&mids)
                .map(|(&ki, &m)| ki as f64 * m)
                .sum::<f64>()
                .abs();
            if mid <= best_mid + slack && err.is_none() {
                match omega.abs_dot(k) {
                    Ok((lo, hi)) => {
                        let better = match &best {
                            None => true,
                            Some((_, bhi, _)) => hi < *bhi,
                        };
                        if better {
                            best_mid = mid;
                            best = Some((lo, hi, k.to_vec()));
                        }
                    }
                    Err(e) => err = Some(e),
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let (blo, bhi, argmax) = best.clone().expect("shell contains at least one point");
        out.push(PsiBrute {
            q: s + 1,
            lo: Rational::from(bhi.recip_ref()),
            hi: Rational::from(blo.recip_ref()),
            argmax,
        });
    }
    Ok(out)
}

/// Ψ_ω(Q) = max{|k·ω|⁻¹ : k ∈ ℤⁿ, 0 < |k| < Q} for one Q.
pub fn psi_bruteforce(omega: &VectorSpec, q: u64) -> Result<PsiBrute> {
    let mut scan = psi_bruteforce_scan(omega, q)?;
    Ok(scan.pop().expect("scan returns at least one entry"))
}

/// Visits every lattice point with norm exactly `s` (once each).
fn shell_walk(
    norm: LatticeNorm,
    s: i64,
    idx: usize,
    k: &mut Vec<i64>,
    visit: &mut impl FnMut(&[i64]),
) {
    match norm {
        LatticeNorm::Sup => sup_shell(s, idx, false, k, visit),
        LatticeNorm::L1 => l1_shell(s, idx, k, visit),
    }
}

fn sup_shell(s: i64, idx: usize, pinned: bool, k: &mut Vec<i64>, visit: &mut impl FnMut(&[i64])) {
    if idx == k.len() {
        if pinned {
            visit(k);
        }
        return;
    }
    if idx == k.len() - 1 && !pinned {
        for v in [-s, s] {
            k[idx] = v;
            visit(k);
        }
        k[idx] = 0;
        return;
    }
    for v in -s..=s {
        k[idx] = v;
        sup_shell(s, idx + 1, pinned || v.abs() == s, k, visit);
    }
    k[idx] = 0;
}

fn l1_shell(remaining: i64, idx: usize, k: &mut Vec<i64>, visit: &mut impl FnMut(&[i64])) {
    if idx == k.len() - 1 {
        if remaining == 0 {
            k[idx] = 0;
            visit(k);
        } else {
            for v in [-remaining, remaining] {
                k[idx] = v;
                visit(k);
            }
        }
        k[idx] = 0;
        return;
    }
    for a in -remaining..=remaining {
        k[idx] = a;
        l1_shell(remaining - a.abs(), idx + 1, k, visit);
    }
    k[idx] = 0;
}

/// Partial sum Σ_{Q=1}^{Qmax} ln Ψ(Q)/Q^{1+1/α} with Ψ from convergents.
/// Terms with Ψ(Q) ≤ 1 keep their (negative) exact value.
pub fn br_alpha_partial(
    nu: &NumberSpec,
    alpha: f64,
    q_max: u64,
    prec: u32,
) -> Result<SeriesReport> {
    if !(alpha >= 1.0) {
        return Err(Error::InvalidInput(format!("alpha must be >= 1, got {alpha}")));
    }
    let oracle = PsiOracle::new(nu, q_max)?;
    let exponent = RealInterval::one(prec).add(&RealInterval::from_f64(alpha, prec).recip());
    let mut terms = Vec::with_capacity(q_max as usize);
    for q in 1..=q_max {
        let psi = oracle.psi(&Integer::from(q))?;
        let ln_psi = RealInterval::from_rational_bounds(&psi.lo, &psi.hi, prec).ln();
        let qe = RealInterval::from_integer(&Integer::from(q), prec).pow(&exponent);
        terms.push(ln_psi.div(&qe));
    }
    Ok(SeriesReport::from_terms(
        format!("br-alpha alpha={alpha}"),
        1,
        terms,
        prec,
        None,
    ))
}

/// Both sides of the truncated comparison between the Ψ-series and the
/// denominator series, with the rigorous verdict for LHS > RHS.
#[derive(Debug, Clone)]
pub struct ChainCheck {
    /// Σ_{Q=1}^{Q_N} ln Ψ(Q)/Q^{1+1/α}
    pub lhs: RealInterval,
    /// Σ_{n=1}^{N} ln Qₙ₊₁/Qₙ^{1+1/α}
    pub rhs: RealInterval,
    pub q_n: Integer,
    pub verdict: Verdict,
}

/// Verifies Σ_{Q≤Q_N} ln Ψ(Q)/Q^{1+1/α} > Σ_{n≤N} ln Qₙ₊₁/Qₙ^{1+1/α} at
/// matched truncation, both sides computed independently with directed
/// rounding.
pub fn proposition_chain_check(
    nu: &NumberSpec,
    alpha: f64,
    depth: usize,
    prec: u32,
) -> Result<ChainCheck> {
    let pq = nu.partial_quotients(depth + 1)?;
    let convs = convergents(&pq, depth + 1)?;
    let q_n = convs[depth].q.clone();
    let q_n_u64 = q_n.to_u64().ok_or_else(|| {
        Error::InvalidInput(format!("Q_{depth} = {q_n} too large for the Ψ sum"))
    })?;
    let lhs = br_alpha_partial(nu, alpha, q_n_u64, prec)?.total();
    let exponent = RealInterval::one(prec).add(&RealInterval::from_f64(alpha, prec).recip());
    let rhs = weighted_log_series(
        &convs,
        &RealInterval::one(prec),
        &exponent,
        depth,
        prec,
        String::new(),
        None,
    )?
    .total();
    let verdict = lhs.gt(&rhs);
    Ok(ChainCheck {
        lhs,
        rhs,
        q_n,
        verdict,
    })
}

/// Both sides of the truncated Hölder bound.
#[derive(Debug, Clone)]
pub struct HolderCheck {
    pub lhs: RealInterval,
    pub rhs: RealInterval,
    /// (Σ ln^{β(2+ε)/γ}Qₙ₊₁ / Qₙ^{(1−δ)(2+ε)})^{γ/(2+ε)}
    pub factor_main: RealInterval,
    /// (Σ Qₙ^{−δγ(2+ε)/(2+ε−γ)})^{(2+ε−γ)/(2+ε)}
    pub factor_tail: RealInterval,
    pub verdict: Verdict,
}

/// Evaluates the Hölder splitting of the condition series at truncation N and
/// checks LHS ≤ RHS rigorously.
pub fn holder_check(
    convs: &[Convergent],
    params: &ConditionParams,
    n_terms: usize,
    prec: u32,
) -> Result<HolderCheck> {
    params.validate_holder()?;
    if convs.len() < n_terms + 2 {
        return Err(Error::DepthUnavailable {
            requested: n_terms + 1,
            available: convs.len().saturating_sub(1),
        });
    }
    let beta = RealInterval::from_f64(params.beta, prec);
    let gamma = RealInterval::from_f64(params.gamma, prec);
    let eps = RealInterval::from_f64(params.epsilon, prec);
    let delta = RealInterval::from_f64(params.delta, prec);
    let two_eps = RealInterval::from_f64(2.0, prec).add(&eps);

    let lhs = weighted_log_series(convs, &beta, &gamma, n_terms, prec, String::new(), None)?
        .total();

    // main factor: exponents β(2+ε)/γ on the log and (1−δ)(2+ε) on Qₙ
    let e_log = beta.mul(&two_eps).div(&gamma);
    let e_den = RealInterval::one(prec).sub(&delta).mul(&two_eps);
    let s_main =
        weighted_log_series(convs, &e_log, &e_den, n_terms, prec, String::new(), None)?.total();
    let factor_main = s_main.pow(&gamma.div(&two_eps));

    // tail factor: Σ Qₙ^{−δγ(2+ε)/(2+ε−γ)}
    let gap = two_eps.sub(&gamma);
    debug_assert!(gap.lo() > &0.0);
    let e_tail = delta.mul(&gamma).mul(&two_eps).div(&gap);
    let mut tail_terms = Vec::with_capacity(n_terms);
    for c in convs.iter().take(n_terms + 1).skip(1) {
        let q = RealInterval::from_integer(&c.q, prec);
        tail_terms.push(q.pow(&e_tail).recip());
    }
    let s_tail = RealInterval::sum(&tail_terms, prec);
    let factor_tail = s_tail.pow(&gap.div(&two_eps));

    let rhs = factor_main.mul(&factor_tail);
    let verdict = lhs.le(&rhs);
    Ok(HolderCheck {
        lhs,
        rhs,
        factor_main,
        factor_tail,
        verdict,
    })
}

/// Whether the constructed number should make the series diverge or converge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionMode {
    Diverge,
    Converge,
}

/// A constructor-produced test number with its materialized digits and, for
/// the divergent mode, the analytic per-term certificate.
#[derive(Debug, Clone)]
pub struct ConstructedNumber {
    pub pq: PartialQuotients,
    pub requested_depth: usize,
    /// Largest index n with vₙ materialized.
    pub achieved_depth: usize,
    pub certificate: Option<DivergenceCertificate>,
}

/// Builds a test number for the (β, γ) condition.
///
/// Diverge: v₀ = 0, v₁ = 1, then vₙ₊₁ = ⌈exp(Qₙ^{γ/β})/Qₙ⌉, which forces
/// Qₙ₊₁ ≥ vₙ₊₁Qₙ ≥ exp(Qₙ^{γ/β}) and hence lnᵝ(Qₙ₊₁) ≥ Qₙᵞ: every term of the
/// series is ≥ 1. Digits are materialized until the next one would exceed
/// `max_bits` bits; the certificate applies to every index the rule defines.
///
/// Converge: the all-ones tail, whose Fibonacci denominators make the terms
/// decay geometrically.
pub fn liouville_constructor(
    params: &ConditionParams,
    mode: ConstructionMode,
    depth: usize,
    max_bits: u32,
) -> Result<ConstructedNumber> {
    match mode {
        ConstructionMode::Converge => Ok(ConstructedNumber {
            pq: PartialQuotients::new(
                Integer::new(),
                Tail::Periodic {
                    head: vec![],
                    block: vec![Integer::from(1)],
                },
            )?,
            requested_depth: depth,
            achieved_depth: depth,
            certificate: None,
        }),
        ConstructionMode::Diverge => {
            if depth < 2 {
                return Err(Error::InvalidInput("diverge construction needs depth >= 2".into()));
            }
            let ratio = params.gamma / params.beta;
            let mut quots = vec![Integer::from(1)]; // v₁
            let mut q_prev = Integer::from(1); // Q₀
            let mut q = Integer::from(1); // Q₁
            let mut achieved = 1usize;
            for n in 1..depth {
                match next_rule_digit(&q, ratio, max_bits) {
                    Some(v) => {
                        let q_next = Integer::from(&v * &q) + &q_prev;
                        quots.push(v);
                        q_prev = std::mem::replace(&mut q, q_next);
                        achieved = n + 1;
                    }
                    None => break,
                }
            }
            let materialized_terms = achieved.saturating_sub(1);
            Ok(ConstructedNumber {
                pq: PartialQuotients::new(Integer::new(), Tail::Finite(quots))?,
                requested_depth: depth,
                achieved_depth: achieved,
                certificate: Some(DivergenceCertificate {
                    per_term_lower: 1.0,
                    materialized_terms,
                    rule: format!(
                        "v(n+1) = ceil(exp(Q_n^{{{}/{}}})/Q_n) gives Q_(n+1) >= exp(Q_n^(gamma/beta)), so ln^beta(Q_(n+1)) >= Q_n^gamma and every term is >= 1",
                        params.gamma, params.beta
                    ),
                }),
            })
        }
    }
}

/// ⌈exp(qⁿᵉˣᵖ)/q⌉ exactly, or None when the result would exceed `max_bits`.
fn next_rule_digit(q: &Integer, ratio: f64, max_bits: u32) -> Option<Integer> {
    // exp(q^ratio) needs about q^ratio * log2(e) bits
    let approx_exponent = q.to_f64().powf(ratio);
    if !approx_exponent.is_finite() || approx_exponent * 1.4427 + 128.0 > max_bits as f64 {
        return None;
    }
    let mut prec = (approx_exponent * 1.4427) as u32 + 96;
    loop {
        let x = RealInterval::from_integer(q, prec).pow_f64(ratio);
        let z = x.exp().div(&RealInterval::from_integer(q, prec));
        let flo = z.lo().clone().floor();
        let fhi = z.hi().clone().floor();
        if flo == fhi {
            // exp of a positive algebraic power is irrational: ceil = floor + 1
            let f = flo.to_integer().expect("finite floor");
            return Some(f + 1u32);
        }
        prec = prec.checked_mul(2)?;
        if prec > max_bits.saturating_mul(4) {
            return None;
        }
    }
}

/// Numeric series report for a constructed number, carrying its certificate.
/// Takes as many terms as were materialized (capped at `n_terms`).
pub fn certified_series(
    constructed: &ConstructedNumber,
    params: &ConditionParams,
    n_terms: usize,
    prec: u32,
) -> Result<SeriesReport> {
    let n = match constructed.certificate {
        Some(ref c) => n_terms.min(c.materialized_terms),
        None => n_terms,
    };
    let convs = convergents(&constructed.pq, n + 1)?;
    weighted_log_series(
        &convs,
        &RealInterval::from_f64(params.beta, prec),
        &RealInterval::from_f64(params.gamma, prec),
        n,
        prec,
        format!(
            "constructed beta={} gamma={}",
            params.beta, params.gamma
        ),
        constructed.certificate.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::QuadraticIrrational;
    use crate::real::DEFAULT_PREC;

    fn golden_convs(depth: usize) -> Vec<Convergent> {
        convergents(&PartialQuotients::golden(), depth).unwrap()
    }

    #[test]
    fn a_series_single_term_golden() {
        // N = 1: S₁ = ln Q₂ / Q₁ = ln 2
        let convs = golden_convs(3);
        let report =
            a_series_partial(&convs, &ConditionParams::brjuno(), 1, DEFAULT_PREC).unwrap();
        let total = report.total();
        assert!((total.midpoint_f64() - 0.6931471805599453).abs() < 1e-15);
    }

    #[test]
    fn brjuno_golden_stabilizes() {
        let convs = golden_convs(62);
        let s40 = brjuno_partial(&convs, 40, DEFAULT_PREC).unwrap().total();
        let s60 = brjuno_partial(&convs, 60, DEFAULT_PREC).unwrap().total();
        // frozen from a 300-bit summation oracle: S60 - S40 = 2.0192675860908812e-7
        let diff = s60.sub(&s40);
        assert!(diff.lo().to_f64() > 2.019267e-7);
        assert!(diff.hi().to_f64() < 2.019268e-7);
    }

    #[test]
    fn partial_sums_nondecreasing() {
        let convs = golden_convs(42);
        let report = brjuno_partial(&convs, 40, DEFAULT_PREC).unwrap();
        for w in report.partial_sums.windows(2) {
            assert!(w[1].hi() >= w[0].hi());
        }
        assert_eq!(report.classification, Classification::ConvergentTrend);
    }

    #[test]
    fn depth_shortfall() {
        let convs = golden_convs(5);
        assert!(matches!(
            a_series_partial(&convs, &ConditionParams::brjuno(), 10, 128),
            Err(Error::DepthUnavailable { .. })
        ));
    }

    #[test]
    fn psi_cf_sqrt2_small_q() {
        let nu = NumberSpec::Quadratic(QuadraticIrrational::from_i64s(0, 2, 1).unwrap());
        // Q = 2 sits on the boundary Q₁ = 2 and resolves to segment 0
        let v2 = psi_cf(&nu, 2).unwrap();
        assert_eq!(v2.segment, 0);
        assert!((v2.lo.to_f64() - 2.4142135623730951).abs() < 1e-12);
        let v4 = psi_cf(&nu, 4).unwrap();
        assert_eq!(v4.segment, 1);
        assert!((v4.hi.to_f64() - 5.82842712474619).abs() < 1e-10);
    }

    #[test]
    fn psi_cf_golden_q1() {
        let nu = NumberSpec::Quadratic(QuadraticIrrational::from_i64s(1, 5, 2).unwrap());
        let v = psi_cf(&nu, 1).unwrap();
        assert_eq!(v.segment, 0);
        // |φ − 1|⁻¹ = φ
        assert!((v.lo.to_f64() - 1.618033988749895).abs() < 1e-12);
    }

    #[test]
    fn brute_force_sqrt2_q2() {
        let nu = NumberSpec::Quadratic(QuadraticIrrational::from_i64s(0, 2, 1).unwrap());
        let omega = VectorSpec::one_nu(&nu, LatticeNorm::Sup).unwrap();
        assert_eq!(omega.shift(), &Integer::from(1));
        let b = psi_bruteforce(&omega, 2).unwrap();
        assert!((b.lo.to_f64() - 2.4142135623730951).abs() < 1e-12);
        // argmax ±(1, -2)·... : second coordinate is the denominator 1
        assert_eq!(b.argmax[1].abs(), 1);
    }

    #[test]
    fn brute_force_matches_cf_oracle_small() {
        let nu = NumberSpec::Quadratic(QuadraticIrrational::from_i64s(0, 2, 1).unwrap());
        let omega = VectorSpec::one_nu(&nu, LatticeNorm::Sup).unwrap();
        let scan = psi_bruteforce_scan(&omega, 60).unwrap();
        let oracle = PsiOracle::new(&nu, 60).unwrap();
        for entry in &scan {
            let cf_val = oracle.psi(&Integer::from(entry.q)).unwrap();
            assert!(
                entry.lo <= cf_val.hi && cf_val.lo <= entry.hi,
                "mismatch at Q = {}: brute [{}, {}] vs cf [{}, {}]",
                entry.q,
                entry.lo.to_f64(),
                entry.hi.to_f64(),
                cf_val.lo.to_f64(),
                cf_val.hi.to_f64()
            );
            // argmax is ±(−Pₙ', Qₙ) for the shifted ν
            let seg = cf_val.segment;
            let q_seg = &oracle.convergents()[seg].q;
            assert_eq!(
                Integer::from(entry.argmax[1].abs()),
                *q_seg,
                "argmax denominator at Q = {}",
                entry.q
            );
        }
    }

    #[test]
    fn brute_force_resonant() {
        let omega = VectorSpec::new(
            vec![
                (Rational::from(1), Rational::from(1)),
                (Rational::from(2), Rational::from(2)),
            ],
            LatticeNorm::Sup,
        )
        .unwrap();
        match psi_bruteforce(&omega, 3) {
            Err(Error::Resonance(k)) => {
                assert_eq!(k.len(), 2);
                assert_eq!(k[0] + 2 * k[1], 0);
            }
            other => panic!("expected resonance, got {other:?}"),
        }
    }

    #[test]
    fn l1_norm_shells() {
        let mut seen = Vec::new();
        let mut k = vec![0i64; 2];
        shell_walk(LatticeNorm::L1, 2, 0, &mut k, &mut |k| seen.push(k.to_vec()));
        seen.sort();
        seen.dedup();
        // |a| + |b| = 2 has 8 points
        assert_eq!(seen.len(), 8);
        assert!(seen.iter().all(|k| k[0].abs() + k[1].abs() == 2));
    }

    #[test]
    fn br_alpha_sqrt2_two_terms() {
        let nu = NumberSpec::Quadratic(QuadraticIrrational::from_i64s(0, 2, 1).unwrap());
        let report = br_alpha_partial(&nu, 1.0, 2, DEFAULT_PREC).unwrap();
        // ln(1+√2)·(1 + 1/4)
        let total = report.total().midpoint_f64();
        assert!((total - 1.1017169837744287).abs() < 1e-12, "got {total}");
    }

    #[test]
    fn chain_check_sqrt2() {
        let nu = NumberSpec::Quadratic(QuadraticIrrational::from_i64s(0, 2, 1).unwrap());
        let check = proposition_chain_check(&nu, 1.0, 10, DEFAULT_PREC).unwrap();
        assert_eq!(check.verdict, Verdict::Holds);
    }

    #[test]
    fn chain_check_single_term_sqrt2() {
        let nu = NumberSpec::Quadratic(QuadraticIrrational::from_i64s(0, 2, 1).unwrap());
        let check = proposition_chain_check(&nu, 1.0, 1, DEFAULT_PREC).unwrap();
        assert_eq!(check.verdict, Verdict::Holds);
    }

    #[test]
    fn holder_single_term_equality() {
        // Q₁ = 1 makes both sides collapse to ln^β Q₂
        let convs = golden_convs(3);
        let params = ConditionParams::new(1.0, 1.0, 1.0, 0.125).unwrap();
        let check = holder_check(&convs, &params, 1, 256).unwrap();
        let gap = check.rhs.sub(&check.lhs);
        assert!(gap.hi().to_f64().abs() < 1e-40, "gap {}", gap.hi().to_f64());
        assert!(check.verdict != Verdict::Fails);
    }

    #[test]
    fn holder_golden_n50() {
        let convs = golden_convs(52);
        let params = ConditionParams::new(1.0, 1.0, 1.0, 0.2).unwrap();
        let check = holder_check(&convs, &params, 50, 256).unwrap();
        assert_eq!(check.verdict, Verdict::Holds);
    }

    #[test]
    fn holder_invalid_delta() {
        // ε = 1 admits δ up to 1/4
        let params = ConditionParams::new(1.0, 1.0, 1.0, 0.3).unwrap();
        assert!(params.validate_holder().is_err());
        let boundary = ConditionParams::new(1.0, 1.0, 1.0, 0.25).unwrap();
        assert!(boundary.validate_holder().is_ok());
    }

    #[test]
    fn admissible_delta_formula() {
        let d = ConditionParams::max_admissible_delta(1.0);
        assert_eq!(d, Rational::from((1, 4)));
    }

    #[test]
    fn liouville_diverge_first_digit() {
        let params = ConditionParams::brjuno();
        let c =
            liouville_constructor(&params, ConstructionMode::Diverge, 6, 1 << 22).unwrap();
        // v₂ = ceil(e^{Q₁}/Q₁) = ceil(e) = 3
        assert_eq!(c.pq.quotient(2).unwrap(), 3);
        let convs = convergents(&c.pq, c.achieved_depth).unwrap();
        assert!(convs[2].q >= 3);
        let cert = c.certificate.as_ref().unwrap();
        assert!(cert.materialized_terms >= 3);
        // every materialized term is >= 1
        let report = certified_series(&c, &params, 5, 256).unwrap();
        assert_eq!(report.classification, Classification::CertifiedDivergent);
        for (i, t) in report.terms.iter().enumerate() {
            assert!(t.lo() >= &1.0, "term {} = {}", i + 1, t.lo().to_f64());
        }
        let n = report.len() as f64;
        assert!(report.total().lo().to_f64() >= n);
    }

    #[test]
    fn liouville_diverge_gamma2() {
        let params = ConditionParams::new(1.0, 2.0, 0.5, 0.0625).unwrap();
        let c =
            liouville_constructor(&params, ConstructionMode::Diverge, 5, 1 << 22).unwrap();
        let report = certified_series(&c, &params, 4, 256).unwrap();
        assert!(!report.is_empty());
        for t in &report.terms {
            assert!(t.lo() >= &1.0);
        }
    }

    #[test]
    fn liouville_converge_all_ones() {
        let c = liouville_constructor(
            &ConditionParams::brjuno(),
            ConstructionMode::Converge,
            40,
            1 << 22,
        )
        .unwrap();
        assert!(c.pq.is_infinite());
        assert_eq!(c.pq.quotient(7).unwrap(), 1);
        assert!(c.certificate.is_none());
    }

    #[test]
    fn series_monotone_in_beta_and_gamma() {
        // constructed so that every Qₙ₊₁ ≥ 3 (each ln > 1)
        let pq = PartialQuotients::from_i64s(0, &[3, 3, 3, 3, 3, 3, 3, 3, 3, 3]).unwrap();
        let convs = convergents(&pq, 9).unwrap();
        let base = ConditionParams::new(1.0, 1.0, 0.5, 0.01).unwrap();
        let more_beta = ConditionParams::new(2.0, 1.0, 0.5, 0.01).unwrap();
        let more_gamma = ConditionParams::new(1.0, 2.0, 0.5, 0.01).unwrap();
        let s = a_series_partial(&convs, &base, 8, 256).unwrap().total();
        let sb = a_series_partial(&convs, &more_beta, 8, 256).unwrap().total();
        let sg = a_series_partial(&convs, &more_gamma, 8, 256).unwrap().total();
        assert_eq!(sb.ge(&s), Verdict::Holds);
        assert_eq!(sg.le(&s), Verdict::Holds);
    }
}
