//! Belief patterns after optimal acquisition: divergence and inversion of two
//! decision-makers' beliefs, polarization, disconfirmation, confirmatory and
//! disproving patterns, and under/over-reaction.
//!
//! Each individual pattern is available along two independent paths: the
//! definitional one (inequalities on computed posteriors and decisions) and
//! the characterization in terms of `θ`, `c` and `σ` (module
//! [`characterized`]). The verification suites compare the two.

use serde::Serialize;

use crate::error::{ModelError, Result};
use crate::incentives::{action_for, max_willingness_to_pay, wtp_unchecked, AcquisitionAction};
use crate::model::{
    check_cost, check_probability, component_marginal, posterior_after_both, posterior_after_first,
    signal_probability, Component, Environment, DEFAULT_TOLERANCE, InformationStructure, PayoffStructure, Signal,
    SignalValue,
};
use crate::sets::{classify_pair, h_set, union, PairClass, ProbabilityInterval};

/// Belief held after seeing `signal` and choosing optimally whether to
/// observe its second component, together with that choice.
pub fn realized_posterior(p: f64, env: &Environment, signal: Signal) -> Result<(f64, AcquisitionAction)> {
    let p = check_probability("p", p)?;
    let wtp = wtp_unchecked(p, &env.info, &env.payoffs, signal.first);
    let action = action_for(env.cost(), wtp);
    let posterior = match action {
        AcquisitionAction::Acquire => posterior_after_both(p, &env.info, signal.first, signal.second)?,
        AcquisitionAction::Skip => posterior_after_first(p, &env.info, signal.first)?,
    };
    Ok((posterior, action))
}

/// Joint belief movement of two decision-makers facing the same signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairwiseOutcome {
    /// Prior gap minus realized-posterior gap; negative when beliefs move apart.
    pub divergence: f64,
    /// Product of the two belief changes; negative when they move in
    /// opposite directions.
    pub inversion: f64,
    pub polarized: bool,
    pub realized_posteriors: (f64, f64),
    pub acquisition: (AcquisitionAction, AcquisitionAction),
}

pub fn pairwise_outcome(p_i: f64, p_j: f64, env: &Environment, signal: Signal) -> Result<PairwiseOutcome> {
    let p_i = check_probability("p_i", p_i)?;
    let p_j = check_probability("p_j", p_j)?;
    if p_i > p_j {
        return Err(ModelError::Ordering { p_i, p_j });
    }
    let (q_i, a_i) = realized_posterior(p_i, env, signal)?;
    let (q_j, a_j) = realized_posterior(p_j, env, signal)?;
    Ok(outcome_from(p_i, p_j, q_i, q_j, (a_i, a_j)))
}

pub(crate) fn outcome_from(
    p_i: f64,
    p_j: f64,
    q_i: f64,
    q_j: f64,
    acquisition: (AcquisitionAction, AcquisitionAction),
) -> PairwiseOutcome {
    let divergence = (p_i - p_j).abs() - (q_i - q_j).abs();
    let inversion = (p_i - q_i) * (p_j - q_j);
    PairwiseOutcome {
        divergence,
        inversion,
        polarized: divergence < 0.0 && inversion < 0.0,
        realized_posteriors: (q_i, q_j),
        acquisition,
    }
}

/// Which conditions made polarization feasible (or not) for a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PbFeasibility {
    pub feasible: bool,
    /// `θ2 > θ1`
    pub second_more_informative: bool,
    /// Lower prior acquires after `α` while the higher one skips.
    pub via_alpha: bool,
    /// Higher prior acquires after `β` while the lower one skips.
    pub via_beta: bool,
}

/// Closed-form condition for polarization of the pair `p_i < p_j`: the
/// lower prior acquires after `α` while the higher skips, or the higher
/// acquires after `β` while the lower skips, and `θ2 > θ1`.
///
/// The condition is sufficient but not necessary. When the *higher* prior
/// is the only one acquiring after `α` (or the lower one after `β`), the
/// mixed signal can reverse the order of the two beliefs by more than their
/// initial gap, which is polarization too; e.g. priors `0.2` and `0.25` at
/// `θ = (0.6, 0.8)`, `c = 0.1`, `σ = (α, β)`. Use [`pb_probability_exact`] or
/// [`pairwise_outcome`] for the exact verdict.
///
/// With `cost = None` the question is whether it occurs for *some* cost, which
/// reduces to comparing willingness to pay. With a cost, the acquiring side
/// must additionally be strictly willing to pay it: the maximum in the cost
/// condition is taken over the first-component value of the disjunct being
/// tested.
pub fn pb_feasible(
    p_i: f64,
    p_j: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
    cost: Option<f64>,
) -> Result<PbFeasibility> {
    let p_i = check_probability("p_i", p_i)?;
    let p_j = check_probability("p_j", p_j)?;
    if p_i >= p_j {
        return Err(ModelError::Ordering { p_i, p_j });
    }
    let second_more_informative = info.theta2() > info.theta1();
    let w = |p, s1| wtp_unchecked(p, info, payoffs, s1);
    let (via_alpha, via_beta) = match cost {
        None => {
            let pc = classify_pair(p_i, p_j, 0.0, info, payoffs)?;
            (pc.in_v_ij_alpha, pc.in_v_ji_beta)
        }
        Some(c) => {
            let c = check_cost(c)?;
            let pc: PairClass = classify_pair(p_i, p_j, c, info, payoffs)?;
            let max_a = w(p_i, SignalValue::Alpha).max(w(p_j, SignalValue::Alpha));
            let max_b = w(p_i, SignalValue::Beta).max(w(p_j, SignalValue::Beta));
            (c < max_a && pc.in_b_ij_alpha, c < max_b && pc.in_b_ji_beta)
        }
    };
    let via_alpha = second_more_informative && via_alpha;
    let via_beta = second_more_informative && via_beta;
    Ok(PbFeasibility {
        feasible: via_alpha || via_beta,
        second_more_informative,
        via_alpha,
        via_beta,
    })
}

/// Ex-ante probability of polarization in closed form, as seen by an observer
/// holding belief `p_subjective`.
///
/// Each term multiplies the *marginal* probabilities of the two components,
/// `P(σ̃_k = α) = p θ_k + (1 − p)(1 − θ_k)`. The components are independent
/// only conditionally on the state, so this product differs from the
/// model's joint law whenever `p ∉ {0, 1}`; see [`pb_probability_exact`].
pub fn pb_probability(
    p_subjective: f64,
    p_i: f64,
    p_j: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
    cost: f64,
) -> Result<f64> {
    let p = check_probability("p_subjective", p_subjective)?;
    let f = pb_feasible(p_i, p_j, info, payoffs, Some(cost))?;
    if !f.feasible {
        return Ok(0.0);
    }
    let m = |k, v| component_marginal(p, info, k, v);
    let mut prob = 0.0;
    if f.via_alpha {
        prob += m(Component::First, SignalValue::Alpha)? * m(Component::Second, SignalValue::Beta)?;
    }
    if f.via_beta {
        prob += m(Component::First, SignalValue::Beta)? * m(Component::Second, SignalValue::Alpha)?;
    }
    Ok(prob)
}

/// Probability of polarization under the model's joint law of `(ω, σ)`:
/// the total probability of the signal realizations that polarize the pair.
pub fn pb_probability_exact(
    p_subjective: f64,
    p_i: f64,
    p_j: f64,
    env: &Environment,
) -> Result<f64> {
    let p = check_probability("p_subjective", p_subjective)?;
    let mut prob = 0.0;
    for signal in Signal::ALL {
        if pairwise_outcome(p_i, p_j, env, signal)?.polarized {
            prob += signal_probability(p, &env.info, signal)?;
        }
    }
    Ok(prob)
}

/// All priors `p_j` for which [`pb_feasible`] holds for the pair
/// `{p_i, p_j}` at cost `c`, as a sorted union of disjoint intervals.
///
/// The skipping side must be strictly unwilling to pay, so endpoints of the
/// acquisition sets are excluded; so are the degenerate priors 0 and 1, whose
/// beliefs never move. Partners that polarize only through a swap of belief
/// order are not included (see [`pb_feasible`]).
pub fn polarization_partners(
    p_i: f64,
    c: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
) -> Result<Vec<ProbabilityInterval>> {
    let p_i = check_probability("p_i", p_i)?;
    if p_i <= 0.0 || p_i >= 1.0 {
        return Err(ModelError::Domain(format!("p_i = {p_i} must lie strictly inside (0, 1)")));
    }
    let c = check_cost(c)?;
    if c <= 0.0 || c >= max_willingness_to_pay(info, payoffs) {
        return Err(ModelError::Domain(format!(
            "cost {c} must lie strictly between 0 and the maximum willingness to pay"
        )));
    }
    if info.theta2() <= info.theta1() {
        return Err(ModelError::Domain("polarization needs theta2 > theta1".into()));
    }
    let h_a = h_set(c, info, payoffs, SignalValue::Alpha)?;
    let h_b = h_set(c, info, payoffs, SignalValue::Beta)?;
    let (Some(qa_hi), Some(qb_lo)) = (h_a.upper(), h_b.lower()) else {
        return Ok(Vec::new());
    };
    let mut parts = Vec::new();
    if h_a.contains(p_i) {
        parts.push(ProbabilityInterval::open(qa_hi, 1.0));
    }
    if p_i > qa_hi {
        parts.push(h_a);
    }
    if h_b.contains(p_i) {
        parts.push(ProbabilityInterval::open(0.0, qb_lo));
    }
    if p_i < qb_lo {
        parts.push(h_b);
    }
    Ok(union(&parts))
}

/// Willingness to pay after each first-component value and the resulting
/// disconfirmation verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisconfirmationReport {
    pub tendency: bool,
    pub exhibits: bool,
    pub wtp_alpha: f64,
    pub wtp_beta: f64,
}

/// A decision-maker favoring one state has a tendency for disconfirmation
/// when evidence against that state commands a higher willingness to pay,
/// and exhibits it when they actually acquire after contradicting evidence
/// but not after confirming evidence.
pub fn disconfirmation_report(
    p: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
    c: f64,
) -> Result<DisconfirmationReport> {
    let p = check_probability("p", p)?;
    let c = check_cost(c)?;
    let wtp_alpha = wtp_unchecked(p, info, payoffs, SignalValue::Alpha);
    let wtp_beta = wtp_unchecked(p, info, payoffs, SignalValue::Beta);
    let acquires = |w| action_for(c, w) == AcquisitionAction::Acquire;
    let (confirming, contradicting) = if p > 0.5 {
        (wtp_alpha, wtp_beta)
    } else {
        (wtp_beta, wtp_alpha)
    };
    let favored = p != 0.5;
    Ok(DisconfirmationReport {
        tendency: favored && contradicting > confirming,
        exhibits: favored && acquires(contradicting) && !acquires(confirming),
        wtp_alpha,
        wtp_beta,
    })
}

/// Confirmatory (CB) and disproving (DB) verdicts for one signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConfirmationVerdict {
    pub confirmatory: bool,
    pub disproving: bool,
}

/// CB: the realized belief moves toward the favored state while the full
/// posterior moves away from it; DB is the reverse.
///
/// Strict inequalities between beliefs require a gap above
/// [`DEFAULT_TOLERANCE`], so a signal that leaves the belief unchanged in
/// exact arithmetic is not counted as moving it.
pub fn cb_db_report(p: f64, env: &Environment, signal: Signal) -> Result<ConfirmationVerdict> {
    cb_db_report_with_tolerance(p, env, signal, DEFAULT_TOLERANCE)
}

pub fn cb_db_report_with_tolerance(
    p: f64,
    env: &Environment,
    signal: Signal,
    tol: f64,
) -> Result<ConfirmationVerdict> {
    let p = check_probability("p", p)?;
    if p == 0.5 {
        return Err(ModelError::IndifferentPrior);
    }
    let (realized, _) = realized_posterior(p, env, signal)?;
    let full = posterior_after_both(p, &env.info, signal.first, signal.second)?;
    Ok(confirmation_from(p, realized, full, tol))
}

fn lt(a: f64, b: f64, tol: f64) -> bool {
    b - a > tol
}

pub(crate) fn confirmation_from(p: f64, realized: f64, full: f64, tol: f64) -> ConfirmationVerdict {
    let toward_a = lt(full, p, tol) && lt(p, realized, tol);
    let toward_b = lt(realized, p, tol) && lt(p, full, tol);
    if p > 0.5 {
        ConfirmationVerdict {
            confirmatory: toward_a,
            disproving: toward_b,
        }
    } else {
        ConfirmationVerdict {
            confirmatory: toward_b,
            disproving: toward_a,
        }
    }
}

/// Under-reaction (UR) and over-reaction (OR) verdicts for one signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReactionVerdict {
    pub underreaction: bool,
    pub overreaction: bool,
}

/// UR: the realized belief lies strictly between the prior and the full
/// posterior. OR: the full posterior lies strictly between the prior and the
/// realized belief. Strictness is judged as in [`cb_db_report`].
pub fn reaction_report(p: f64, env: &Environment, signal: Signal) -> Result<ReactionVerdict> {
    reaction_report_with_tolerance(p, env, signal, DEFAULT_TOLERANCE)
}

pub fn reaction_report_with_tolerance(
    p: f64,
    env: &Environment,
    signal: Signal,
    tol: f64,
) -> Result<ReactionVerdict> {
    let p = check_probability("p", p)?;
    let (realized, _) = realized_posterior(p, env, signal)?;
    let full = posterior_after_both(p, &env.info, signal.first, signal.second)?;
    Ok(reaction_from(p, realized, full, tol))
}

pub(crate) fn reaction_from(p: f64, realized: f64, full: f64, tol: f64) -> ReactionVerdict {
    let between =
        |lo: f64, x: f64, hi: f64| (lt(lo, x, tol) && lt(x, hi, tol)) || (lt(hi, x, tol) && lt(x, lo, tol));
    ReactionVerdict {
        underreaction: between(p, realized, full),
        overreaction: between(p, full, realized),
    }
}

/// Every individual-pattern verdict for one prior and signal, with the
/// numbers behind them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatternReport {
    pub disconfirmation_tendency: bool,
    pub exhibits_disconfirmation: bool,
    pub confirmatory: bool,
    pub disproving: bool,
    pub underreaction: bool,
    pub overreaction: bool,
    pub witnesses: PatternWitnesses,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatternWitnesses {
    pub prior: f64,
    pub interim_posterior: f64,
    pub full_posterior: f64,
    pub realized_posterior: f64,
    pub action: AcquisitionAction,
    pub wtp_alpha: f64,
    pub wtp_beta: f64,
    pub cost: f64,
}

/// Fails with [`ModelError::IndifferentPrior`] at `p = 1/2`, where the
/// confirmatory and disproving patterns are undefined. `tol` is the gap
/// required for a strict inequality between beliefs.
pub fn pattern_report(p: f64, env: &Environment, signal: Signal, tol: f64) -> Result<PatternReport> {
    let p = check_probability("p", p)?;
    if p == 0.5 {
        return Err(ModelError::IndifferentPrior);
    }
    let d = disconfirmation_report(p, &env.info, &env.payoffs, env.cost())?;
    let (realized, action) = realized_posterior(p, env, signal)?;
    let full = posterior_after_both(p, &env.info, signal.first, signal.second)?;
    let cb = confirmation_from(p, realized, full, tol);
    let r = reaction_from(p, realized, full, tol);
    Ok(PatternReport {
        disconfirmation_tendency: d.tendency,
        exhibits_disconfirmation: d.exhibits,
        confirmatory: cb.confirmatory,
        disproving: cb.disproving,
        underreaction: r.underreaction,
        overreaction: r.overreaction,
        witnesses: PatternWitnesses {
            prior: p,
            interim_posterior: posterior_after_first(p, &env.info, signal.first)?,
            full_posterior: full,
            realized_posterior: realized,
            action,
            wtp_alpha: d.wtp_alpha,
            wtp_beta: d.wtp_beta,
            cost: env.cost(),
        },
    })
}

/// The same verdicts computed from closed-form conditions on `θ`, `c`, `σ`
/// and the non-extreme sets, without evaluating any posterior.
pub mod characterized {
    use super::*;
    use crate::sets::extreme_sets;

    /// Tendency iff `p` is non-extreme and not `1/2`; exhibits iff the cost
    /// lies strictly between the two willingness-to-pay values in the
    /// disconfirming direction.
    pub fn disconfirmation(
        p: f64,
        info: &InformationStructure,
        payoffs: &PayoffStructure,
        c: f64,
    ) -> Result<(bool, bool)> {
        let p = check_probability("p", p)?;
        let c = check_cost(c)?;
        let tendency = p != 0.5 && extreme_sets(info).is_non_extreme(p);
        let wa = wtp_unchecked(p, info, payoffs, SignalValue::Alpha);
        let wb = wtp_unchecked(p, info, payoffs, SignalValue::Beta);
        let exhibits = if p > 0.5 {
            wb > c && c > wa
        } else if p < 0.5 {
            wa > c && c > wb
        } else {
            false
        };
        Ok((tendency, exhibits))
    }

    /// Both patterns need `θ2 > θ1` and a cost above the willingness to pay;
    /// CB then occurs on the mixed signal whose first component confirms the
    /// favored state, DB on the other mixed signal.
    pub fn confirmation(
        p: f64,
        info: &InformationStructure,
        payoffs: &PayoffStructure,
        c: f64,
        signal: Signal,
    ) -> Result<ConfirmationVerdict> {
        let p = check_probability("p", p)?;
        let c = check_cost(c)?;
        if p == 0.5 {
            return Err(ModelError::IndifferentPrior);
        }
        let skips = c > wtp_unchecked(p, info, payoffs, signal.first);
        let base = info.theta2() > info.theta1() && skips && signal.is_mixed();
        let favored = if p > 0.5 { SignalValue::Alpha } else { SignalValue::Beta };
        Ok(ConfirmationVerdict {
            confirmatory: base && signal.first == favored,
            disproving: base && signal.first != favored,
        })
    }

    /// UR iff the components agree and the cost exceeds the willingness to
    /// pay; OR iff they disagree, the cost exceeds it and `θ2 < θ1`.
    pub fn reaction(
        p: f64,
        info: &InformationStructure,
        payoffs: &PayoffStructure,
        c: f64,
        signal: Signal,
    ) -> Result<ReactionVerdict> {
        let p = check_probability("p", p)?;
        let c = check_cost(c)?;
        let skips = c > wtp_unchecked(p, info, payoffs, signal.first);
        Ok(ReactionVerdict {
            underreaction: !signal.is_mixed() && skips,
            overreaction: signal.is_mixed() && skips && info.theta2() < info.theta1(),
        })
    }
}
