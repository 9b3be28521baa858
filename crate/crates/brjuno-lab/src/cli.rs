//! Subcommand front end. All logic lives in the library; this module only
//! parses flags, merges config files, calls in, and formats tables.

use crate::capacity::{self, SelfEnergyRule};
use crate::cf::{convergents, NumberSpec};
use crate::config::ExperimentConfig;
use crate::dioph::{
    a_series_partial, br_alpha_partial, certified_series, liouville_constructor,
    ConditionParams, ConstructionMode, SeriesReport,
};
use crate::error::{Error, Result};
use crate::hausdorff::{hausdorff_trend, GaugeFunction, SetSpec};
use crate::potential::{divergence_scan, KernelBranch};
use crate::real::DEFAULT_PREC;
use crate::report::{
    self, fmt_f64, fmt_interval_hi, fmt_interval_lo, fmt_interval_mid, series_rows, PlotSeries,
};
use crate::verify::run_verify;
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "brjuno-lab",
    about = "Continued fractions, Diophantine growth conditions, log-kernel potentials, capacities, and gauge premeasures",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonOpts {
    /// key=value config file; explicit flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// working precision in mantissa bits
    #[arg(long)]
    bits: Option<u32>,
    /// CSV output path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Convergent table Pₙ/Qₙ of a number
    Expand {
        #[command(flatten)]
        common: CommonOpts,
        /// quad:a,b,c | cf:v0;... | interval:lo,hi | golden | sqrt2 | e
        #[arg(long)]
        number: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Growth-condition and small-denominator series reports
    Classify {
        #[command(flatten)]
        common: CommonOpts,
        /// number spec, or `diverge`/`converge` for constructed test numbers
        #[arg(long)]
        number: Option<String>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        /// preset beta = 1, gamma = 1 + 1/alpha; also computes the Ψ-series
        #[arg(long)]
        br_alpha: Option<f64>,
        /// number of series terms
        #[arg(long)]
        depth: Option<usize>,
        /// truncation of the Ψ-series sum (with --br-alpha)
        #[arg(long)]
        qmax: Option<u64>,
        /// JSON output path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Truncated-potential divergence scans
    Potential {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        number: Option<String>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        /// k1 (gamma <= 2) or k2 (gamma > 2); default follows gamma
        #[arg(long)]
        kernel: Option<String>,
        /// comma-separated increasing q_max values
        #[arg(long)]
        schedule: Option<String>,
        /// SVG plot path
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Minimum-energy capacity of an interval union
    Capacity {
        #[command(flatten)]
        common: CommonOpts,
        /// intervals:a1,b1;a2,b2;...
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        sigma: Option<f64>,
        /// comma-separated resolutions (points per unit length)
        #[arg(long)]
        grid: Option<String>,
        /// half-cell | nearest | cell-integral
        #[arg(long)]
        rule: Option<String>,
        /// duality-gap tolerance
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Cover-bound trends for a gauge function
    Hausdorff {
        #[command(flatten)]
        common: CommonOpts,
        /// points:... | intervals:... | cantor:depth=K,ratio=R
        #[arg(long)]
        set: Option<String>,
        /// log:DELTA | power:DELTA
        #[arg(long)]
        gauge: Option<String>,
        /// comma-separated strictly decreasing ε values
        #[arg(long)]
        schedule: Option<String>,
    },
    /// Run the built-in invariant suite
    Verify {
        #[command(flatten)]
        common: CommonOpts,
        /// upper limit of the Ψ cross-oracle range
        #[arg(long)]
        qmax: Option<u64>,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> Result<i32> {
    let cli = Cli::parse();
    dispatch(cli)
}

fn load_config(common: &CommonOpts) -> Result<ExperimentConfig> {
    match &common.config {
        Some(path) => ExperimentConfig::from_file(path),
        None => Ok(ExperimentConfig::default()),
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Expand {
            common,
            number,
            depth,
        } => {
            let mut cfg = ExperimentConfig {
                command: Some("expand".into()),
                number,
                depth,
                bits: common.bits,
                ..Default::default()
            };
            cfg.merge_defaults(&load_config(&common)?);
            cmd_expand(&cfg, common.out.as_deref())
        }
        Command::Classify {
            common,
            number,
            beta,
            gamma,
            eps,
            delta,
            br_alpha,
            depth,
            qmax,
            json,
        } => {
            let mut cfg = ExperimentConfig {
                command: Some("classify".into()),
                number,
                beta,
                gamma,
                eps,
                delta,
                br_alpha,
                depth,
                qmax,
                bits: common.bits,
                ..Default::default()
            };
            cfg.merge_defaults(&load_config(&common)?);
            cmd_classify(&cfg, common.out.as_deref(), json.as_deref())
        }
        Command::Potential {
            common,
            number,
            beta,
            gamma,
            eps,
            kernel,
            schedule,
            svg,
        } => {
            let mut cfg = ExperimentConfig {
                command: Some("potential".into()),
                number,
                beta,
                gamma,
                eps,
                kernel,
                schedule,
                bits: common.bits,
                ..Default::default()
            };
            cfg.merge_defaults(&load_config(&common)?);
            cmd_potential(&cfg, common.out.as_deref(), svg.as_deref())
        }
        Command::Capacity {
            common,
            set,
            sigma,
            grid,
            rule,
            tol,
        } => {
            let mut cfg = ExperimentConfig {
                command: Some("capacity".into()),
                set,
                sigma,
                grid,
                rule,
                tol,
                bits: common.bits,
                ..Default::default()
            };
            cfg.merge_defaults(&load_config(&common)?);
            cmd_capacity(&cfg, common.out.as_deref())
        }
        Command::Hausdorff {
            common,
            set,
            gauge,
            schedule,
        } => {
            let mut cfg = ExperimentConfig {
                command: Some("hausdorff".into()),
                set,
                gauge,
                schedule,
                bits: common.bits,
                ..Default::default()
            };
            cfg.merge_defaults(&load_config(&common)?);
            cmd_hausdorff(&cfg, common.out.as_deref())
        }
        Command::Verify { common, qmax } => {
            let mut cfg = ExperimentConfig {
                command: Some("verify".into()),
                qmax,
                bits: common.bits,
                ..Default::default()
            };
            cfg.merge_defaults(&load_config(&common)?);
            cmd_verify(&cfg, common.out.as_deref())
        }
    }
}

fn condition_params(cfg: &ExperimentConfig) -> Result<ConditionParams> {
    if let Some(alpha) = cfg.br_alpha {
        let mut p = ConditionParams::brjuno_russmann(alpha)?;
        if let Some(e) = cfg.eps {
            p.epsilon = e;
        }
        if let Some(d) = cfg.delta {
            p.delta = d;
        }
        return ConditionParams::new(p.beta, p.gamma, p.epsilon, p.delta);
    }
    ConditionParams::new(
        cfg.beta.unwrap_or(1.0),
        cfg.gamma.unwrap_or(1.0),
        cfg.eps.unwrap_or(0.1),
        cfg.delta.unwrap_or(1.0 / 32.0),
    )
}

enum ResolvedNumber {
    Spec(NumberSpec),
    Constructed(crate::dioph::ConstructedNumber),
}

fn resolve_number(
    raw: &str,
    params: &ConditionParams,
    depth: usize,
) -> Result<ResolvedNumber> {
    match raw {
        "diverge" => Ok(ResolvedNumber::Constructed(liouville_constructor(
            params,
            ConstructionMode::Diverge,
            depth.max(2),
            1 << 22,
        )?)),
        "converge" => Ok(ResolvedNumber::Constructed(liouville_constructor(
            params,
            ConstructionMode::Converge,
            depth,
            1 << 22,
        )?)),
        other => Ok(ResolvedNumber::Spec(NumberSpec::parse(other)?)),
    }
}

fn print_series_summary(report: &SeriesReport) {
    let total = report.total();
    println!(
        "{}: N = {}, S_N in [{}, {}], classification {}{}",
        report.label,
        report.len(),
        fmt_interval_lo(&total),
        fmt_interval_hi(&total),
        report.classification.as_str(),
        match report.growth_ratio {
            Some(r) => format!(", tail ratio {r:.3e}"),
            None => String::new(),
        }
    );
}

fn cmd_expand(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<i32> {
    let number = cfg.number.as_deref().unwrap_or("golden");
    let depth = cfg.depth.unwrap_or(40);
    let spec = NumberSpec::parse(number)?;
    let pq = spec.partial_quotients(depth)?;
    let convs = convergents(&pq, depth)?;
    println!("{number}: {pq}");
    for c in convs.iter().take(8) {
        println!("  n = {:>3}   P/Q = {}/{}", c.n, c.p, c.q);
    }
    if convs.len() > 8 {
        let c = convs.last().unwrap();
        println!("  ...");
        println!("  n = {:>3}   P/Q = {}/{}", c.n, c.p, c.q);
    }
    if let Some(path) = out {
        let rows: Vec<Vec<String>> = convs
            .iter()
            .map(|c| vec![c.n.to_string(), c.p.to_string(), c.q.to_string()])
            .collect();
        report::write_csv(path, cfg, &["n", "P", "Q"], &rows)?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn cmd_classify(cfg: &ExperimentConfig, out: Option<&Path>, json: Option<&Path>) -> Result<i32> {
    let params = condition_params(cfg)?;
    let depth = cfg.depth.unwrap_or(40);
    let bits = cfg.bits.unwrap_or(DEFAULT_PREC);
    let number = cfg.number.as_deref().unwrap_or("golden");
    let main_report = match resolve_number(number, &params, depth)? {
        ResolvedNumber::Spec(spec) => {
            let pq = spec.partial_quotients(depth + 1)?;
            let convs = convergents(&pq, depth + 1)?;
            a_series_partial(&convs, &params, depth, bits)?
        }
        ResolvedNumber::Constructed(c) => {
            println!(
                "constructed number: materialized to index {}, requested {}",
                c.achieved_depth, c.requested_depth
            );
            certified_series(&c, &params, depth, bits)?
        }
    };
    print_series_summary(&main_report);
    if let Some(alpha) = cfg.br_alpha {
        let q_max = cfg.qmax.unwrap_or(1000);
        if let ResolvedNumber::Spec(spec) = resolve_number(number, &params, depth)? {
            let psi_report = br_alpha_partial(&spec, alpha, q_max, bits)?;
            print_series_summary(&psi_report);
            println!(
                "kernel exponent preset: sigma = 2a/(a+1) = {}",
                ConditionParams::br_alpha_sigma(alpha)
            );
        }
    }
    if let Some(path) = out {
        let (cols, rows) = series_rows(&main_report);
        report::write_csv(path, cfg, &cols, &rows)?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = json {
        std::fs::write(path, report::series_json(cfg, &main_report))?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn cmd_potential(cfg: &ExperimentConfig, out: Option<&Path>, svg: Option<&Path>) -> Result<i32> {
    let params = condition_params(cfg)?;
    let bits = cfg.bits.unwrap_or(DEFAULT_PREC);
    let branch = match cfg.kernel.as_deref() {
        None => KernelBranch::for_params(&params),
        Some("k1") => KernelBranch::K1,
        Some("k2") => KernelBranch::K2,
        Some(other) => return Err(Error::Parse(format!("kernel must be k1 or k2, got {other}"))),
    };
    let schedule = ExperimentConfig::parse_u32_list(
        cfg.schedule.as_deref().unwrap_or("10,100,1000"),
    )?;
    let number = cfg.number.as_deref().unwrap_or("golden");
    let spec = match resolve_number(number, &params, 8)? {
        ResolvedNumber::Spec(s) => s,
        ResolvedNumber::Constructed(c) => NumberSpec::ExplicitCf(c.pq),
    };
    let rows = divergence_scan(&spec, &params, branch, &schedule, bits)?;
    println!(
        "divergence scan for {number}, branch {:?}, eps = {}",
        branch, params.epsilon
    );
    for r in &rows {
        println!(
            "  q_max = {:>7}  U in [{}, {}]  lower bound >= {}",
            r.q_max,
            fmt_interval_mid(&r.stated),
            fmt_interval_hi(&r.stated),
            fmt_interval_lo(&r.lower_bound),
        );
    }
    if let Some(path) = out {
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.q_max.to_string(),
                    fmt_interval_lo(&r.stated),
                    fmt_interval_hi(&r.stated),
                    fmt_interval_lo(&r.lower_bound),
                    fmt_interval_lo(&r.internal),
                    fmt_interval_hi(&r.internal),
                ]
            })
            .collect();
        report::write_csv(
            path,
            cfg,
            &["qmax", "u_lo", "u_hi", "lower_bound", "internal_lo", "internal_hi"],
            &table,
        )?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = svg {
        let series = vec![
            PlotSeries {
                name: "U (stated kernel)".into(),
                points: rows
                    .iter()
                    .map(|r| (r.q_max as f64, r.stated.midpoint_f64()))
                    .collect(),
            },
            PlotSeries {
                name: "U (internal exponent)".into(),
                points: rows
                    .iter()
                    .map(|r| (r.q_max as f64, r.internal.midpoint_f64()))
                    .collect(),
            },
            PlotSeries {
                name: "subseries lower bound".into(),
                points: rows
                    .iter()
                    .map(|r| (r.q_max as f64, r.lower_bound.midpoint_f64()))
                    .collect(),
            },
        ];
        std::fs::write(
            path,
            report::line_plot_svg("truncated potential vs q_max", &series, true),
        )?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn parse_rule(raw: Option<&str>) -> Result<SelfEnergyRule> {
    Ok(match raw.unwrap_or("half-cell") {
        "half-cell" => SelfEnergyRule::HalfCell,
        "nearest" => SelfEnergyRule::NearestNeighbor,
        "cell-integral" => SelfEnergyRule::CellIntegral,
        other => {
            return Err(Error::Parse(format!(
                "rule must be half-cell, nearest, or cell-integral, got {other}"
            )))
        }
    })
}

fn parse_interval_set(raw: &str) -> Result<Vec<(f64, f64)>> {
    match SetSpec::parse(raw)? {
        SetSpec::Intervals(iv) => Ok(iv
            .into_iter()
            .map(|(a, b)| (a.to_f64(), b.to_f64()))
            .collect()),
        _ => Err(Error::InvalidInput(
            "capacity takes an intervals:... set spec".into(),
        )),
    }
}

fn cmd_capacity(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<i32> {
    let set = cfg.set.as_deref().unwrap_or("intervals:0.1,0.6");
    let intervals = parse_interval_set(set)?;
    let sigma = cfg.sigma.unwrap_or(1.0);
    let grid = ExperimentConfig::parse_u32_list(cfg.grid.as_deref().unwrap_or("402,802,4002"))?;
    let rule = parse_rule(cfg.rule.as_deref())?;
    let tol = cfg.tol.unwrap_or(1e-4);
    let rows = capacity::capacity(&intervals, sigma, &grid, rule, tol, 50_000_000)?;
    println!("capacity refinement for {set}, sigma = {sigma}");
    for r in &rows {
        println!(
            "  resolution {:>7} ({} pts): W = {:.8}, C = {:.8}, gap = {:.2e}, iters = {}{}",
            r.resolution,
            r.points,
            r.energy,
            r.capacity,
            r.duality_gap,
            r.iterations,
            if r.converged { "" } else { "  NON-CONVERGED" }
        );
    }
    if let Some(path) = out {
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.resolution.to_string(),
                    fmt_f64(r.energy),
                    fmt_f64(r.capacity),
                    fmt_f64(r.duality_gap),
                    r.iterations.to_string(),
                    r.points.to_string(),
                    r.converged.to_string(),
                ]
            })
            .collect();
        report::write_csv(
            path,
            cfg,
            &["resolution", "W", "C", "gap", "iters", "points", "converged"],
            &table,
        )?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn cmd_hausdorff(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<i32> {
    let set_raw = cfg.set.as_deref().unwrap_or("cantor:depth=8,ratio=1/3");
    let set = SetSpec::parse(set_raw)?;
    let gauge = GaugeFunction::parse(cfg.gauge.as_deref().unwrap_or("log:2"))?;
    let schedule = ExperimentConfig::parse_rational_list(
        cfg.schedule.as_deref().unwrap_or("1e-2,1e-3,1e-4,1e-5,1e-6,1e-7,1e-8"),
    )?;
    let bits = cfg.bits.unwrap_or(DEFAULT_PREC);
    let rows = hausdorff_trend(&set, &gauge, &schedule, bits)?;
    println!("cover bounds for {set_raw}");
    for r in &rows {
        println!(
            "  eps = {:<12}  balls = {:>8}  bound in [{}, {}]",
            r.eps.to_f64(),
            r.balls,
            fmt_interval_lo(&r.bound),
            fmt_interval_hi(&r.bound)
        );
    }
    if let Some(path) = out {
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.eps.to_string(),
                    fmt_interval_mid(&r.bound),
                    r.balls.to_string(),
                    fmt_interval_lo(&r.bound),
                    fmt_interval_hi(&r.bound),
                ]
            })
            .collect();
        report::write_csv(
            path,
            cfg,
            &["eps", "bound", "balls_used", "bound_lo", "bound_hi"],
            &table,
        )?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn cmd_verify(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<i32> {
    let bits = cfg.bits.unwrap_or(DEFAULT_PREC);
    let q_max = cfg.qmax.unwrap_or(1000);
    let report_data = run_verify(bits, q_max)?;
    print!("{}", report_data.render_table());
    if let Some(path) = out {
        let rows: Vec<Vec<String>> = report_data
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.name.clone(),
                    if c.passed { "PASS" } else { "FAIL" }.to_string(),
                    c.detail.clone(),
                ]
            })
            .collect();
        report::write_csv(path, cfg, &["check", "status", "detail"], &rows)?;
        println!("wrote {}", path.display());
    }
    Ok(if report_data.all_passed() { 0 } else { 1 })
}
