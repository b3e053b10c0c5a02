//! Bodies of the CLI subcommands, returning typed rows and reports so they
//! can be tested without spawning the binary.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::emit::sig12;
use super::IoError;
use crate::error::ModelError;
use crate::incentives::{classify_case, willingness_to_pay, AcquisitionAction, CaseBoundaries, CaseId};
use crate::model::{posterior_after_both, posterior_after_first, signal_probability, Signal, SignalValue};
use crate::oracle::{
    exact_pattern_probability, grid_theorem_check, mc_pattern_frequency, CheckOptions, PatternId, TheoremId,
    VerificationGrid,
};
use crate::patterns::{
    cb_db_report_with_tolerance, pairwise_outcome, pb_feasible, pb_probability, pb_probability_exact,
    reaction_report_with_tolerance, realized_posterior,
};
use crate::sets::classify_pair;

use SignalValue::{Alpha, Beta};

/// Cost function over a grid of priors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WtpRow {
    pub p: f64,
    pub wtp_alpha: f64,
    pub wtp_beta: f64,
    pub case_alpha: u8,
    pub case_beta: u8,
}

pub fn wtp_sweep(cfg: &RunConfig) -> Result<Vec<WtpRow>, IoError> {
    let (info, pay) = (cfg.info(), cfg.payoffs());
    cfg.prior_grid()
        .into_iter()
        .map(|p| {
            Ok(WtpRow {
                p: sig12(p),
                wtp_alpha: sig12(willingness_to_pay(p, &info, &pay, Alpha)?),
                wtp_beta: sig12(willingness_to_pay(p, &info, &pay, Beta)?),
                case_alpha: classify_case(p, &info, Alpha)?.number(),
                case_beta: classify_case(p, &info, Beta)?.number(),
            })
        })
        .collect()
}

/// Endpoints of the eight prior cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionRow {
    pub case: u8,
    pub first_component: String,
    pub lower: f64,
    pub upper: f64,
    pub values_information: bool,
}

pub fn partition_table(cfg: &RunConfig) -> Result<Vec<PartitionRow>, IoError> {
    let b = CaseBoundaries::new(&cfg.info());
    (1..=8)
        .map(|n| {
            let case = CaseId::new(n)?;
            let (lower, upper) = b.interval(case);
            Ok(PartitionRow {
                case: n,
                first_component: case.first_component().to_string(),
                lower: sig12(lower),
                upper: sig12(upper),
                values_information: case.values_information(),
            })
        })
        .collect()
}

/// `B` and `V` membership of a prior pair at one cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetsRow {
    pub cost: f64,
    pub p_i: f64,
    pub p_j: f64,
    pub in_b_ij_alpha: bool,
    pub in_b_ji_beta: bool,
    pub in_b_ji_alpha: bool,
    pub in_b_ij_beta: bool,
    pub in_v_ij_alpha: bool,
    pub in_v_ji_beta: bool,
    pub in_v_ji_alpha: bool,
    pub in_v_ij_beta: bool,
}

/// Every pair `p_i ≤ p_j` of grid priors, for every configured cost.
pub fn sets_sweep(cfg: &RunConfig) -> Result<Vec<SetsRow>, IoError> {
    let (info, pay) = (cfg.info(), cfg.payoffs());
    let grid = cfg.prior_grid();
    let mut rows = Vec::new();
    for &c in &cfg.costs {
        for (k, &p_i) in grid.iter().enumerate() {
            for &p_j in &grid[k..] {
                let pc = classify_pair(p_i, p_j, c, &info, &pay)?;
                rows.push(SetsRow {
                    cost: sig12(c),
                    p_i: sig12(p_i),
                    p_j: sig12(p_j),
                    in_b_ij_alpha: pc.in_b_ij_alpha,
                    in_b_ji_beta: pc.in_b_ji_beta,
                    in_b_ji_alpha: pc.in_b_ji_alpha,
                    in_b_ij_beta: pc.in_b_ij_beta,
                    in_v_ij_alpha: pc.in_v_ij_alpha,
                    in_v_ji_beta: pc.in_v_ji_beta,
                    in_v_ji_alpha: pc.in_v_ji_alpha,
                    in_v_ij_beta: pc.in_v_ij_beta,
                });
            }
        }
    }
    Ok(rows)
}

fn distinct_pair(cfg: &RunConfig) -> Result<(f64, f64), IoError> {
    match cfg.scenario().pair() {
        Some((a, b)) if a < b => Ok((a, b)),
        _ => Err(IoError::Usage("this command needs two distinct priors (`priors = p_i, p_j`)".into())),
    }
}

/// Outcome of one signal for the configured pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizeRow {
    pub signal: String,
    pub p_i: f64,
    pub p_j: f64,
    pub cost: f64,
    pub posterior_i: f64,
    pub posterior_j: f64,
    pub action_i: String,
    pub action_j: String,
    pub divergence: f64,
    pub inversion: f64,
    pub polarized: bool,
    /// Joint probability of the signal under `subjective_p`.
    pub signal_probability: Option<f64>,
    pub feasible: bool,
    pub via_alpha: bool,
    pub via_beta: bool,
    /// Closed-form ex-ante probability (product of component marginals).
    pub pb_probability: Option<f64>,
    /// Probability under the model's joint law.
    pub pb_probability_exact: Option<f64>,
}

pub fn polarize_report(cfg: &RunConfig) -> Result<Vec<PolarizeRow>, IoError> {
    let (p_i, p_j) = distinct_pair(cfg)?;
    let env = cfg.environment();
    let f = pb_feasible(p_i, p_j, &env.info, &env.payoffs, Some(env.cost()))?;
    let (closed, exact) = match cfg.subjective_p {
        Some(p) => (
            Some(pb_probability(p, p_i, p_j, &env.info, &env.payoffs, env.cost())?),
            Some(pb_probability_exact(p, p_i, p_j, &env)?),
        ),
        None => (None, None),
    };
    Signal::ALL
        .into_iter()
        .map(|s| {
            let o = pairwise_outcome(p_i, p_j, &env, s)?;
            Ok(PolarizeRow {
                signal: s.to_string(),
                p_i: sig12(p_i),
                p_j: sig12(p_j),
                cost: sig12(env.cost()),
                posterior_i: sig12(o.realized_posteriors.0),
                posterior_j: sig12(o.realized_posteriors.1),
                action_i: o.acquisition.0.to_string(),
                action_j: o.acquisition.1.to_string(),
                divergence: sig12(o.divergence),
                inversion: sig12(o.inversion),
                polarized: o.polarized,
                signal_probability: cfg
                    .subjective_p
                    .map(|p| signal_probability(p, &env.info, s).map(sig12))
                    .transpose()?,
                feasible: f.feasible,
                via_alpha: f.via_alpha,
                via_beta: f.via_beta,
                pb_probability: closed.map(sig12),
                pb_probability_exact: exact.map(sig12),
            })
        })
        .collect()
}

/// Monte Carlo estimate of a pattern frequency next to its exact value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateRow {
    pub pattern: String,
    pub p_subjective: f64,
    pub p_i: f64,
    pub p_j: Option<f64>,
    pub cost: f64,
    pub draws: u64,
    pub seed: u64,
    pub frequency: f64,
    pub standard_error: f64,
    /// Probability under the model's joint law.
    pub exact_probability: f64,
    pub within_3se: bool,
    /// Closed-form polarization probability (product of marginals); only for
    /// `pb`.
    pub closed_form_probability: Option<f64>,
}

/// Simulate each requested pattern: polarization for the prior pair, the
/// individual patterns for every prior (skipping `1/2` for CB/DB).
pub fn simulate(cfg: &RunConfig, patterns: &[PatternId]) -> Result<Vec<SimulateRow>, IoError> {
    let p_subj = cfg
        .subjective_p
        .ok_or_else(|| IoError::Usage("simulation needs `subjective_p` in the configuration".into()))?;
    let env = cfg.environment();
    let mut rows = Vec::new();
    for &pattern in patterns {
        let subjects: Vec<(f64, Option<f64>)> = match pattern {
            PatternId::Polarization => {
                if patterns.len() > 1 && cfg.priors.len() < 2 {
                    continue;
                }
                let (p_i, p_j) = distinct_pair(cfg)?;
                vec![(p_i, Some(p_j))]
            }
            PatternId::Confirmatory | PatternId::Disproving => {
                cfg.priors.iter().filter(|&&p| p != 0.5).map(|&p| (p, None)).collect()
            }
            _ => cfg.priors.iter().map(|&p| (p, None)).collect(),
        };
        for (p_i, p_j) in subjects {
            let est = mc_pattern_frequency(pattern, p_subj, p_i, p_j, &env, cfg.draws, cfg.seed)?;
            let exact = exact_pattern_probability(pattern, p_subj, p_i, p_j, &env)?;
            let closed = match (pattern, p_j) {
                (PatternId::Polarization, Some(p_j)) => {
                    Some(pb_probability(p_subj, p_i, p_j, &env.info, &env.payoffs, env.cost())?)
                }
                _ => None,
            };
            rows.push(SimulateRow {
                pattern: pattern.to_string(),
                p_subjective: sig12(p_subj),
                p_i: sig12(p_i),
                p_j: p_j.map(sig12),
                cost: sig12(env.cost()),
                draws: est.draws,
                seed: est.seed,
                frequency: sig12(est.frequency),
                standard_error: sig12(est.standard_error),
                exact_probability: sig12(exact),
                within_3se: est.within(exact, 3.0),
                closed_form_probability: closed.map(sig12),
            });
        }
    }
    Ok(rows)
}

/// One quantity of the introductory example replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleRow {
    pub quantity: String,
    /// Verdicts and decisions are encoded as 1 (true / acquire) or 0.
    pub computed: f64,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleReport {
    /// Whether the parameters are the built-in ones, for which reference
    /// values are known.
    pub golden: bool,
    pub rows: Vec<ExampleRow>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass != Some(false))
    }

    pub fn row(&self, quantity: &str) -> Option<&ExampleRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }

    pub fn narrative(&self) -> String {
        let mut out = String::new();
        let header = if self.golden {
            "Introductory example (built-in parameters), checked against reference values"
        } else {
            "Introductory example with overridden parameters (no reference values)"
        };
        let _ = writeln!(out, "{header}");
        for r in &self.rows {
            let _ = write!(out, "  {:<28} {:>10.4}", r.quantity, r.computed);
            if let (Some(e), Some(t)) = (r.expected, r.tolerance) {
                let verdict = if r.pass == Some(true) { "ok" } else { "MISMATCH" };
                let _ = write!(out, "   expected {e:.4} ± {t}   {verdict}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{}", if self.passed() { "all checks passed" } else { "some checks FAILED" });
        out
    }
}

/// Reference values of the introductory example, to two decimals.
const GOLDEN: [(&str, f64); 16] = [
    ("posterior_after_alpha_h", 0.78),
    ("posterior_after_alpha_l", 0.39),
    ("wtp_after_alpha_h", 0.02),
    ("wtp_after_alpha_l", 0.19),
    ("acquires_after_alpha_h", 0.0),
    ("acquires_after_alpha_l", 1.0),
    ("convergence_after_alpha", 1.0),
    ("posterior_alpha_beta_l", 0.14),
    ("polarization_alpha_beta", 1.0),
    ("confirmatory_h_alpha_beta", 1.0),
    ("wtp_after_beta_h", 0.19),
    ("wtp_after_beta_l", 0.02),
    ("acquires_after_beta_h", 1.0),
    ("acquires_after_beta_l", 0.0),
    ("posterior_alpha_alpha_h", 0.93),
    ("underreaction_h_alpha_alpha", 1.0),
];

pub const GOLDEN_TOLERANCE: f64 = 0.005;

fn is_intro(cfg: &RunConfig) -> bool {
    let d = RunConfig::default();
    cfg.theta1 == d.theta1
        && cfg.theta2 == d.theta2
        && cfg.cost == d.cost
        && cfg.payoffs().delta_u() == 1.0
        && cfg.scenario().priors() == [0.3, 0.7]
}

/// Replay the introductory two-person example for the configured pair
/// (`L` = lower prior, `H` = higher prior). `tol` is the gap required for a
/// strict inequality between beliefs.
pub fn example_report(cfg: &RunConfig, tol: f64) -> Result<ExampleReport, IoError> {
    let (l, h) = distinct_pair(cfg)?;
    let env = cfg.environment();
    let (info, pay, c) = (&env.info, &env.payoffs, env.cost());
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    let acquires = |p, s1| -> Result<f64, ModelError> {
        Ok(flag(willingness_to_pay(p, info, pay, s1)? >= c))
    };
    let ab = Signal::new(Alpha, Beta);
    let aa = Signal::new(Alpha, Alpha);

    let p_alpha_h = posterior_after_first(h, info, Alpha)?;
    let p_alpha_l = posterior_after_first(l, info, Alpha)?;
    let (real_l_ab, _) = realized_posterior(l, &env, ab)?;
    let computed: Vec<(&str, f64)> = vec![
        ("posterior_after_alpha_h", p_alpha_h),
        ("posterior_after_alpha_l", p_alpha_l),
        ("wtp_after_alpha_h", willingness_to_pay(h, info, pay, Alpha)?),
        ("wtp_after_alpha_l", willingness_to_pay(l, info, pay, Alpha)?),
        ("acquires_after_alpha_h", acquires(h, Alpha)?),
        ("acquires_after_alpha_l", acquires(l, Alpha)?),
        ("convergence_after_alpha", flag(p_alpha_h - p_alpha_l < h - l)),
        ("gap_after_alpha", p_alpha_h - p_alpha_l),
        ("posterior_alpha_beta_l", posterior_after_both(l, info, Alpha, Beta)?),
        ("realized_alpha_beta_l", real_l_ab),
        ("polarization_alpha_beta", flag(pairwise_outcome(l, h, &env, ab)?.polarized)),
        (
            "confirmatory_h_alpha_beta",
            flag(h != 0.5 && cb_db_report_with_tolerance(h, &env, ab, tol)?.confirmatory),
        ),
        ("wtp_after_beta_h", willingness_to_pay(h, info, pay, Beta)?),
        ("wtp_after_beta_l", willingness_to_pay(l, info, pay, Beta)?),
        ("acquires_after_beta_h", acquires(h, Beta)?),
        ("acquires_after_beta_l", acquires(l, Beta)?),
        ("posterior_alpha_alpha_h", posterior_after_both(h, info, Alpha, Alpha)?),
        (
            "underreaction_h_alpha_alpha",
            flag(reaction_report_with_tolerance(h, &env, aa, tol)?.underreaction),
        ),
    ];
    let golden = is_intro(cfg);
    let rows = computed
        .into_iter()
        .map(|(name, value)| {
            let expected = golden
                .then(|| GOLDEN.iter().find(|(k, _)| *k == name).map(|(_, v)| *v))
                .flatten();
            ExampleRow {
                quantity: name.to_string(),
                computed: sig12(value),
                expected,
                tolerance: expected.map(|_| GOLDEN_TOLERANCE),
                pass: expected.map(|e| (value - e).abs() <= GOLDEN_TOLERANCE),
            }
        })
        .collect();
    Ok(ExampleReport { golden, rows })
}

/// Summary of one verification check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub check: String,
    pub cells_checked: u64,
    pub cells_excluded: u64,
    pub violations: u64,
    pub passed: bool,
    /// First violations, formatted with their full parameter tuples.
    pub examples: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<VerifyRow>,
    pub monte_carlo: Vec<SimulateRow>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.monte_carlo.iter().all(|m| m.within_3se)
    }

    /// One flat table: grid checks followed by one row per simulation.
    pub fn rows(&self) -> Vec<VerifyRow> {
        let mut rows = self.checks.clone();
        rows.extend(self.monte_carlo.iter().map(|m| VerifyRow {
            check: format!("monte-carlo:{}:p_i={}", m.pattern, m.p_i),
            cells_checked: m.draws,
            cells_excluded: 0,
            violations: u64::from(!m.within_3se),
            passed: m.within_3se,
            examples: format!(
                "frequency {} (s.e. {}) vs exact {}",
                m.frequency, m.standard_error, m.exact_probability
            ),
        }));
        rows
    }

    pub fn narrative(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{status} {:<16} checked {:>7}  excluded {:>5}  violations {}",
                c.check, c.cells_checked, c.cells_excluded, c.violations
            );
            for line in c.examples.lines() {
                let _ = writeln!(out, "       {line}");
            }
        }
        for m in &self.monte_carlo {
            let status = if m.within_3se { "PASS" } else { "FAIL" };
            let _ = write!(
                out,
                "{status} monte-carlo {:<3} p_i={} freq {:.6} ± {:.6} vs exact {:.6}",
                m.pattern, m.p_i, m.frequency, m.standard_error, m.exact_probability
            );
            if let Some(cf) = m.closed_form_probability {
                let _ = write!(out, " (closed form {cf:.6})");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{}", if self.passed() { "verification passed" } else { "verification FAILED" });
        out
    }
}

/// Run every grid check on the configured precisions, payoffs and costs,
/// then (when `subjective_p` is set) the Monte Carlo consistency checks.
pub fn verify(cfg: &RunConfig, tol: f64) -> Result<VerifyReport, IoError> {
    let grid = VerificationGrid {
        priors: cfg.grid,
        thetas: vec![(cfg.theta1, cfg.theta2)],
        costs: cfg.costs.clone(),
        payoff_scales: vec![cfg.payoffs().delta_u()],
    };
    let opts = CheckOptions {
        sign_tol: tol,
        ..CheckOptions::default()
    };
    let mut checks = Vec::new();
    for theorem in TheoremId::ALL {
        let r = grid_theorem_check(theorem, &grid, &opts)?;
        checks.push(VerifyRow {
            check: theorem.to_string(),
            cells_checked: r.cells_checked,
            cells_excluded: r.cells_excluded,
            violations: r.violations.len() as u64,
            passed: r.passed(),
            examples: r.violations.iter().take(3).map(|v| v.to_string()).collect::<Vec<_>>().join("\n"),
        });
    }
    let monte_carlo = if cfg.subjective_p.is_some() {
        simulate(cfg, &PatternId::ALL)?
    } else {
        Vec::new()
    };
    Ok(VerifyReport { checks, monte_carlo })
}

/// `AcquisitionAction` as the 0/1 code used in example rows.
pub fn action_code(a: AcquisitionAction) -> f64 {
    match a {
        AcquisitionAction::Acquire => 1.0,
        AcquisitionAction::Skip => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wtp_rows() {
        let rows = wtp_sweep(&RunConfig::default()).unwrap();
        assert_eq!(rows.len(), 101);
        let at = |p: f64| rows.iter().find(|r| (r.p - p).abs() < 1e-12).unwrap();
        assert!((at(0.4).wtp_alpha - 0.3).abs() < 1e-12);
        assert!((at(0.5).wtp_alpha - 0.2).abs() < 1e-12);
        assert!((at(0.5).wtp_beta - 0.2).abs() < 1e-12);
    }

    #[test]
    fn partition_rows() {
        let rows = partition_table(&RunConfig::default()).unwrap();
        assert_eq!(rows.len(), 8);
        assert!((rows[1].lower - 0.4).abs() < 1e-12 && (rows[1].upper - 0.727272727273).abs() < 1e-12);
        assert!((rows[5].lower - 0.272727272727).abs() < 1e-12 && (rows[5].upper - 0.6).abs() < 1e-12);
        // adjacent cases share endpoints and tile [0, 1]
        for block in [&rows[..4], &rows[4..]] {
            let mut sorted: Vec<_> = block.iter().collect();
            sorted.sort_by(|a, b| a.lower.total_cmp(&b.lower));
            assert_eq!(sorted[0].lower, 0.0);
            assert_eq!(sorted[3].upper, 1.0);
            for w in sorted.windows(2) {
                assert_eq!(w[0].upper, w[1].lower);
            }
        }
    }

    #[test]
    fn sets_rows() {
        let cfg = RunConfig { costs: vec![0.1, 0.31], ..RunConfig::default() };
        let rows = sets_sweep(&cfg).unwrap();
        let r = rows
            .iter()
            .find(|r| r.cost == 0.1 && (r.p_i - 0.3).abs() < 1e-12 && (r.p_j - 0.7).abs() < 1e-12)
            .unwrap();
        assert!(r.in_b_ij_alpha && r.in_b_ji_beta);
        for r in rows.iter().filter(|r| r.p_i == r.p_j) {
            assert!(!(r.in_b_ij_alpha || r.in_b_ji_beta || r.in_b_ji_alpha || r.in_b_ij_beta));
            assert!(!(r.in_v_ij_alpha || r.in_v_ji_beta || r.in_v_ji_alpha || r.in_v_ij_beta));
        }
        for r in rows.iter().filter(|r| r.cost == 0.31) {
            assert!(!(r.in_b_ij_alpha || r.in_b_ji_beta || r.in_b_ji_alpha || r.in_b_ij_beta));
        }
    }

    #[test]
    fn built_in_example_passes() {
        let rep = example_report(&RunConfig::default(), 1e-12).unwrap();
        assert!(rep.golden);
        assert!(rep.passed(), "{}", rep.narrative());
        assert!(rep.rows.iter().filter(|r| r.pass.is_some()).count() == GOLDEN.len());
    }

    #[test]
    fn overridden_examples() {
        let cfg = RunConfig { cost: 0.25, ..RunConfig::default() };
        let rep = example_report(&cfg, 1e-12).unwrap();
        assert!(!rep.golden);
        assert_eq!(rep.row("acquires_after_alpha_h").unwrap().computed, 0.0);
        assert_eq!(rep.row("acquires_after_beta_h").unwrap().computed, 0.0);

        let cfg = RunConfig { theta1: 0.8, theta2: 0.6, ..RunConfig::default() };
        let rep = example_report(&cfg, 1e-12).unwrap();
        assert_eq!(rep.row("polarization_alpha_beta").unwrap().computed, 0.0);
    }

    #[test]
    fn polarize_rows() {
        let rows = polarize_report(&RunConfig::default()).unwrap();
        assert_eq!(rows.len(), 4);
        let ab = rows.iter().find(|r| r.signal == "(alpha,beta)").unwrap();
        assert!(ab.polarized && ab.feasible);
        assert_eq!(ab.pb_probability, Some(0.5));
        assert_eq!(ab.pb_probability_exact, Some(0.44));
        let single = RunConfig { priors: vec![0.3], ..RunConfig::default() };
        assert!(matches!(polarize_report(&single), Err(IoError::Usage(_))));
    }

    #[test]
    fn simulate_rows() {
        let mut cfg = RunConfig { draws: 50_000, ..RunConfig::default() };
        let rows = simulate(&cfg, &PatternId::ALL).unwrap();
        assert!(rows.iter().all(|r| r.within_3se), "{rows:#?}");
        let pb = rows.iter().find(|r| r.pattern == "pb").unwrap();
        assert_eq!(pb.exact_probability, 0.44);
        assert_eq!(pb.closed_form_probability, Some(0.5));
        cfg.subjective_p = None;
        assert!(simulate(&cfg, &PatternId::ALL).is_err());
    }

    #[test]
    fn verify_flags_only_the_swap_cases() {
        let mut cfg = RunConfig { grid: 21, draws: 20_000, ..RunConfig::default() };
        let rep = verify(&cfg, 1e-12).unwrap();
        for c in &rep.checks {
            let expect_fail = c.check == "polarization" || c.check == "no-swap";
            assert_eq!(!c.passed, expect_fail, "{}", rep.narrative());
        }
        cfg.theta1 = 0.8;
        cfg.theta2 = 0.6;
        let rep = verify(&cfg, 1e-12).unwrap();
        assert!(rep.passed(), "{}", rep.narrative());
    }
}
