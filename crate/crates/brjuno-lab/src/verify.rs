//! The built-in invariant suite: denominator growth, the two-sided
//! approximation bound, the Hölder comparison grid, the Ψ-series inequality
//! chain, and the cross-oracle agreement between the two Ψ implementations.
//!
//! Checks that can come back undecidable at a given precision are retried
//! with doubled precision (or a tightened enclosure) up to a cap, so a
//! reported failure is a genuine violation, not a rounding artifact.

use crate::cf::{
    approximation_gap, check_growth_bound, convergents, finite_cf_value, NumberSpec,
    PartialQuotients,
};
use crate::dioph::{
    holder_check, proposition_chain_check, psi_bruteforce_scan, ConditionParams, LatticeNorm,
    PsiOracle, VectorSpec,
};
use crate::error::Result;
use crate::real::Verdict;
use rug::{Integer, Rational};

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Everything `verify` ran, in order.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(8)
            .max(8);
        for c in &self.checks {
            out.push_str(&format!(
                "{:<width$}  {}  {}\n",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail,
                width = width
            ));
        }
        out
    }
}

/// Deterministic 64-bit generator (splitmix64); the suite must not depend on
/// platform RNG state.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in 1..=bound.
    pub fn next_in(&mut self, bound: u64) -> u64 {
        1 + self.next_u64() % bound
    }
}

fn test_numbers() -> Vec<(&'static str, NumberSpec)> {
    vec![
        ("golden", NumberSpec::parse("golden").unwrap()),
        ("sqrt2", NumberSpec::parse("sqrt2").unwrap()),
        ("e", NumberSpec::parse("e").unwrap()),
    ]
}

fn holder_numbers() -> Vec<(&'static str, NumberSpec)> {
    let mut v = test_numbers();
    v.push(("quad:2,19,3", NumberSpec::parse("quad:2,19,3").unwrap()));
    v.push((
        "cf:0;3,2,(5,1)*",
        NumberSpec::parse("cf:0;3,2,repeat:5,1").unwrap(),
    ));
    v
}

/// Random partial quotients: recurrence output equals exact bottom-up
/// rational evaluation, at every depth.
pub fn check_convergent_oracle(sequences: usize, max_depth: usize) -> Result<CheckOutcome> {
    let mut rng = SplitMix64::new(0x5eed_cF01);
    let mut compared = 0usize;
    for _ in 0..sequences {
        let depth = 1 + (rng.next_u64() as usize) % max_depth;
        let tail: Vec<i64> = (0..depth).map(|_| rng.next_in(100) as i64).collect();
        let v0 = (rng.next_u64() % 7) as i64;
        let pq = PartialQuotients::from_i64s(v0, &tail)?;
        let convs = convergents(&pq, depth)?;
        for c in &convs {
            let direct = finite_cf_value(&pq, c.n)?;
            if c.value() != direct {
                return Ok(CheckOutcome {
                    name: "convergent-oracle".into(),
                    passed: false,
                    detail: format!("mismatch at depth {} of {pq}", c.n),
                });
            }
            compared += 1;
        }
        // determinant identity, exact
        for w in convs.windows(2) {
            let det = Integer::from(&w[1].p * &w[0].q) - Integer::from(&w[0].p * &w[1].q);
            let expect = if w[1].n % 2 == 1 { 1 } else { -1 };
            if det != expect {
                return Ok(CheckOutcome {
                    name: "convergent-oracle".into(),
                    passed: false,
                    detail: format!("determinant {det} at depth {}", w[1].n),
                });
            }
        }
    }
    Ok(CheckOutcome {
        name: "convergent-oracle".into(),
        passed: true,
        detail: format!("{sequences} random sequences, {compared} convergents"),
    })
}

/// Qₙ > φ^{n−1}/2 on named and random sequences, exactly.
pub fn check_growth_property(depth: usize) -> Result<CheckOutcome> {
    let mut sequences: Vec<(String, PartialQuotients)> = test_numbers()
        .into_iter()
        .map(|(name, spec)| (name.to_string(), spec.partial_quotients(depth).unwrap()))
        .collect();
    let mut rng = SplitMix64::new(0xf1b0_0bad);
    for i in 0..12 {
        let tail: Vec<i64> = (0..depth).map(|_| rng.next_in(50) as i64).collect();
        sequences.push((format!("random-{i}"), PartialQuotients::from_i64s(0, &tail)?));
    }
    let mut total = 0usize;
    for (name, pq) in &sequences {
        let convs = convergents(pq, depth)?;
        for (n, ok) in check_growth_bound(&convs) {
            if !ok {
                return Ok(CheckOutcome {
                    name: "growth-bound".into(),
                    passed: false,
                    detail: format!("violated at n = {n} for {name}"),
                });
            }
            total += 1;
        }
    }
    Ok(CheckOutcome {
        name: "growth-bound".into(),
        passed: true,
        detail: format!("{} sequences to depth {depth}, {total} indices", sequences.len()),
    })
}

/// Two-sided bound 1/(2QₙQₙ₊₁) < |ν − Pₙ/Qₙ| < 1/(QₙQₙ₊₁): the verdict must
/// come back Holds at every depth, after enclosure tightening if needed.
pub fn check_two_sided_gap(max_depth: usize) -> Result<CheckOutcome> {
    let mut decided = 0usize;
    for (name, spec) in test_numbers() {
        let pq = spec.partial_quotients(max_depth + 1)?;
        let convs = convergents(&pq, max_depth + 1)?;
        // width below 1/(4 Qₙ Qₙ₊₁²) for the deepest n, with margin
        let last = &convs[max_depth + 1];
        let mut shift = 20u32;
        'depths: for n in 1..=max_depth {
            loop {
                let width = Rational::from((
                    Integer::from(1),
                    (Integer::from(&convs[max_depth].q) * &last.q) * (Integer::from(&last.q))
                        << shift,
                ));
                let enc = spec.enclosure(&width)?;
                match approximation_gap(&enc, &convs[n], &convs[n + 1].q).verdict {
                    Verdict::Holds => {
                        decided += 1;
                        continue 'depths;
                    }
                    Verdict::Fails => {
                        return Ok(CheckOutcome {
                            name: "two-sided-gap".into(),
                            passed: false,
                            detail: format!("violated at n = {n} for {name}"),
                        });
                    }
                    Verdict::Undecidable => {
                        shift += 64;
                        if shift > 4096 {
                            return Ok(CheckOutcome {
                                name: "two-sided-gap".into(),
                                passed: false,
                                detail: format!(
                                    "undecidable at n = {n} for {name} after escalation"
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(CheckOutcome {
        name: "two-sided-gap".into(),
        passed: true,
        detail: format!("3 numbers, depths 1..={max_depth}, {decided} verdicts"),
    })
}

/// psi_bruteforce((1,ν)) against psi_cf(ν) for every 2 ≤ Q ≤ q_max:
/// overlapping enclosures and argmax (−Pₙ', Qₙ) up to sign.
pub fn check_psi_cross_oracle(q_max: u64) -> Result<CheckOutcome> {
    let mut compared = 0usize;
    for (name, spec) in [
        ("sqrt2", NumberSpec::parse("sqrt2").unwrap()),
        ("golden", NumberSpec::parse("golden").unwrap()),
    ] {
        let omega = VectorSpec::one_nu(&spec, LatticeNorm::Sup)?;
        let scan = psi_bruteforce_scan(&omega, q_max)?;
        let oracle = PsiOracle::new(&spec, q_max)?;
        for entry in &scan {
            let cf_val = oracle.psi(&Integer::from(entry.q))?;
            if !(entry.lo <= cf_val.hi && cf_val.lo <= entry.hi) {
                return Ok(CheckOutcome {
                    name: "psi-cross-oracle".into(),
                    passed: false,
                    detail: format!(
                        "value mismatch at Q = {} for {name}: brute [{}, {}] cf [{}, {}]",
                        entry.q,
                        entry.lo.to_f64(),
                        entry.hi.to_f64(),
                        cf_val.lo.to_f64(),
                        cf_val.hi.to_f64()
                    ),
                });
            }
            let seg = &oracle.convergents()[cf_val.segment];
            let shifted_p = Integer::from(&seg.p) - Integer::from(omega.shift() * &seg.q);
            let k = &entry.argmax;
            let matches = (Integer::from(-k[0]) == shifted_p && Integer::from(k[1]) == seg.q)
                || (Integer::from(k[0]) == shifted_p && Integer::from(-k[1]) == seg.q);
            if !matches {
                return Ok(CheckOutcome {
                    name: "psi-cross-oracle".into(),
                    passed: false,
                    detail: format!(
                        "argmax mismatch at Q = {} for {name}: k = {:?}, expected ±({}, {})",
                        entry.q, k, -shifted_p, seg.q
                    ),
                });
            }
            compared += 1;
        }
    }
    Ok(CheckOutcome {
        name: "psi-cross-oracle".into(),
        passed: true,
        detail: format!("2 numbers, Q = 2..={q_max}, {compared} comparisons"),
    })
}

/// Admissible δ grid for a given ε: half of and exactly the largest dyadic
/// at or below the admissibility bound (3ε/4)/(2+ε).
fn admissible_deltas(epsilon: f64) -> Vec<f64> {
    let max = ConditionParams::max_admissible_delta(epsilon).to_f64();
    let mut big = 1.0f64;
    while big > max {
        big /= 2.0;
    }
    vec![big / 2.0, big]
}

/// LHS ≤ RHS over the full (β, γ, ε, δ) × test-number grid at N = 50.
pub fn check_holder_grid(prec: u32) -> Result<CheckOutcome> {
    let numbers = holder_numbers();
    let mut ran = 0usize;
    for (name, spec) in &numbers {
        let pq = spec.partial_quotients(52)?;
        let convs = convergents(&pq, 52)?;
        for beta in [0.5, 1.0, 2.0] {
            for gamma in [0.5, 1.0, 1.5, 2.0] {
                for epsilon in [0.5, 1.0] {
                    for delta in admissible_deltas(epsilon) {
                        let params = ConditionParams::new(beta, gamma, epsilon, delta)?;
                        let mut bits = prec;
                        loop {
                            let check = holder_check(&convs, &params, 50, bits)?;
                            match check.verdict {
                                Verdict::Holds => break,
                                Verdict::Fails => {
                                    return Ok(CheckOutcome {
                                        name: "holder-grid".into(),
                                        passed: false,
                                        detail: format!(
                                            "violated for {name} at beta={beta} gamma={gamma} eps={epsilon} delta={delta}"
                                        ),
                                    });
                                }
                                Verdict::Undecidable => {
                                    bits *= 2;
                                    if bits > 4096 {
                                        return Ok(CheckOutcome {
                                            name: "holder-grid".into(),
                                            passed: false,
                                            detail: format!(
                                                "undecidable for {name} at beta={beta} gamma={gamma} eps={epsilon} delta={delta} after escalation"
                                            ),
                                        });
                                    }
                                }
                            }
                        }
                        ran += 1;
                    }
                }
            }
        }
    }
    Ok(CheckOutcome {
        name: "holder-grid".into(),
        passed: true,
        detail: format!("{ran} parameter tuples at N = 50, all verified"),
    })
}

/// The single-term degenerate case Q₁ = 1 collapses to equality; both sides
/// must agree to 1e-30.
pub fn check_holder_equality(prec: u32) -> Result<CheckOutcome> {
    let convs = convergents(&PartialQuotients::golden(), 3)?;
    let params = ConditionParams::new(1.0, 1.0, 1.0, 0.125)?;
    let check = holder_check(&convs, &params, 1, prec)?;
    let gap = check.rhs.sub(&check.lhs);
    let max_abs = gap.hi().to_f64().abs().max(gap.lo().to_f64().abs());
    Ok(CheckOutcome {
        name: "holder-equality".into(),
        passed: max_abs < 1e-30,
        detail: format!("single-term |RHS − LHS| <= {max_abs:.3e}"),
    })
}

/// Σ ln Ψ(Q)/Q^{1+1/α} > Σ ln Qₙ₊₁/Qₙ^{1+1/α} at matched truncation for the
/// test numbers and α ∈ {1, 2, 4}.
pub fn check_proposition_chain(depth: usize, prec: u32) -> Result<CheckOutcome> {
    let mut ran = 0usize;
    for (name, spec) in test_numbers() {
        for alpha in [1.0, 2.0, 4.0] {
            let mut bits = prec;
            loop {
                let check = proposition_chain_check(&spec, alpha, depth, bits)?;
                match check.verdict {
                    Verdict::Holds => break,
                    Verdict::Fails => {
                        return Ok(CheckOutcome {
                            name: "proposition-chain".into(),
                            passed: false,
                            detail: format!("violated for {name} at alpha = {alpha}"),
                        });
                    }
                    Verdict::Undecidable => {
                        bits *= 2;
                        if bits > 4096 {
                            return Ok(CheckOutcome {
                                name: "proposition-chain".into(),
                                passed: false,
                                detail: format!(
                                    "undecidable for {name} at alpha = {alpha} after escalation"
                                ),
                            });
                        }
                    }
                }
            }
            ran += 1;
        }
    }
    Ok(CheckOutcome {
        name: "proposition-chain".into(),
        passed: true,
        detail: format!("{ran} (number, alpha) pairs at N = {depth}"),
    })
}

/// Runs the whole suite.
pub fn run_verify(bits: u32, q_max: u64) -> Result<VerifyReport> {
    let checks = vec![
        check_convergent_oracle(200, 60)?,
        check_growth_property(200)?,
        check_two_sided_gap(50)?,
        check_psi_cross_oracle(q_max)?,
        check_holder_grid(bits)?,
        check_holder_equality(bits.max(256))?,
        check_proposition_chain(10, bits)?,
    ];
    Ok(VerifyReport { checks })
}
