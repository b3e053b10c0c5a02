//! Willingness to pay for the second signal component.
//!
//! Every prior falls into one of eight cases according to how the optimal
//! guess reacts to the second component. Cases 1–4 follow `σ1 = α`, cases
//! 5–8 follow `σ1 = β`. Only the middle cases (2, 3, 6, 7) put a positive
//! value on the second component; the cost function `c_σ1(p)` is the
//! piecewise map from priors to that value.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::model::{
    check_cost, check_probability, BeliefState, InformationStructure, PayoffStructure, Scenario,
    SignalValue, StateOfWorld,
};

/// One of the eight prior categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CaseId(u8);

impl CaseId {
    pub fn new(n: u8) -> Result<Self> {
        if (1..=8).contains(&n) {
            Ok(CaseId(n))
        } else {
            Err(ModelError::Domain(format!("case id {n} outside 1..=8")))
        }
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// First-component value the case is defined for.
    pub fn first_component(self) -> SignalValue {
        if self.0 <= 4 {
            SignalValue::Alpha
        } else {
            SignalValue::Beta
        }
    }

    /// Cases in which the second component can change the guess.
    pub fn values_information(self) -> bool {
        matches!(self.0, 2 | 3 | 6 | 7)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AcquisitionAction {
    Acquire,
    Skip,
}

impl fmt::Display for AcquisitionAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AcquisitionAction::Acquire => f.write_str("acquire"),
            AcquisitionAction::Skip => f.write_str("skip"),
        }
    }
}

/// Admissible processing costs `[0, upper]` for a prior and first component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleCostSet {
    pub upper: f64,
}

impl AdmissibleCostSet {
    pub fn contains(&self, cost: f64) -> bool {
        cost >= 0.0 && cost <= self.upper
    }
}

/// Prior thresholds separating the eight cases.
///
/// For `α`: cases 4 | 3 | 2 | 1 are split at `alpha_low`, `1 − θ1`,
/// `alpha_high`. For `β`: cases 5 | 6 | 7 | 8 are split at `beta_low`, `θ1`,
/// `beta_high`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseBoundaries {
    pub alpha_low: f64,
    pub alpha_peak: f64,
    pub alpha_high: f64,
    pub beta_low: f64,
    pub beta_peak: f64,
    pub beta_high: f64,
}

impl CaseBoundaries {
    pub fn new(info: &InformationStructure) -> Self {
        let (t1, t2) = (info.theta1(), info.theta2());
        let mixed = t1 + t2 - 2.0 * t1 * t2;
        let agree = 1.0 - t1 - t2 + 2.0 * t1 * t2;
        CaseBoundaries {
            alpha_low: 1.0 - t1 * t2 / agree,
            alpha_peak: 1.0 - t1,
            alpha_high: t2 * (1.0 - t1) / mixed,
            beta_low: t1 * (1.0 - t2) / mixed,
            beta_peak: t1,
            beta_high: t1 * t2 / agree,
        }
    }

    /// Closed prior interval of a case.
    pub fn interval(&self, case: CaseId) -> (f64, f64) {
        match case.number() {
            1 => (self.alpha_high, 1.0),
            2 => (self.alpha_peak, self.alpha_high),
            3 => (self.alpha_low, self.alpha_peak),
            4 => (0.0, self.alpha_low),
            5 => (0.0, self.beta_low),
            6 => (self.beta_low, self.beta_peak),
            7 => (self.beta_peak, self.beta_high),
            _ => (self.beta_high, 1.0),
        }
    }

    /// Prior maximizing the cost function for `s1`.
    pub fn peak(&self, s1: SignalValue) -> f64 {
        match s1 {
            SignalValue::Alpha => self.alpha_peak,
            SignalValue::Beta => self.beta_peak,
        }
    }
}

/// Case whose prior interval contains `p`. Shared endpoints go to the
/// lower-numbered case.
pub fn classify_case(p: f64, info: &InformationStructure, s1: SignalValue) -> Result<CaseId> {
    let p = check_probability("p", p)?;
    Ok(case_of(p, &CaseBoundaries::new(info), s1))
}

fn case_of(p: f64, b: &CaseBoundaries, s1: SignalValue) -> CaseId {
    let n = match s1 {
        SignalValue::Alpha => {
            if p >= b.alpha_high {
                1
            } else if p >= b.alpha_peak {
                2
            } else if p >= b.alpha_low {
                3
            } else {
                4
            }
        }
        SignalValue::Beta => {
            if p <= b.beta_low {
                5
            } else if p <= b.beta_peak {
                6
            } else if p <= b.beta_high {
                7
            } else {
                8
            }
        }
    };
    CaseId(n)
}

/// Case-specific cost formula evaluated at `p`, without clamping.
pub fn case_cost(p: f64, info: &InformationStructure, payoffs: &PayoffStructure, case: CaseId) -> f64 {
    let (t1, t2) = (info.theta1(), info.theta2());
    let du = payoffs.delta_u();
    let q = 1.0 - p;
    let den_alpha = t1 * p + (1.0 - t1) * q;
    let den_beta = (1.0 - t1) * p + t1 * q;
    match case.number() {
        2 => du * (t2 * q - t1 * p - t1 * t2 * (1.0 - 2.0 * p)) / den_alpha,
        3 => du * (t1 * t2 * p - (1.0 - t1) * (1.0 - t2) * q) / den_alpha,
        6 => du * ((1.0 - t1) * t2 * p - t1 * (1.0 - t2) * q) / den_beta,
        7 => du * (t1 * t2 * q - (1.0 - t1) * (1.0 - t2) * p) / den_beta,
        _ => 0.0,
    }
}

/// The cost function `c_σ1(p)`: the largest processing cost a decision-maker
/// with prior `p` would pay for the second component after seeing `s1`.
pub fn willingness_to_pay(
    p: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
    s1: SignalValue,
) -> Result<f64> {
    let p = check_probability("p", p)?;
    Ok(wtp_unchecked(p, info, payoffs, s1))
}

pub(crate) fn wtp_unchecked(
    p: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
    s1: SignalValue,
) -> f64 {
    let case = case_of(p, &CaseBoundaries::new(info), s1);
    // endpoint round-off can dip a hair below zero
    case_cost(p, info, payoffs, case).max(0.0)
}

/// Highest value the cost function reaches, `ΔU (θ2 − 1/2)`.
pub fn max_willingness_to_pay(info: &InformationStructure, payoffs: &PayoffStructure) -> f64 {
    payoffs.delta_u() * (info.theta2() - 0.5)
}

pub fn admissible_costs(
    p: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
    s1: SignalValue,
) -> Result<AdmissibleCostSet> {
    Ok(AdmissibleCostSet {
        upper: willingness_to_pay(p, info, payoffs, s1)?,
    })
}

/// Acquire iff the cost is admissible (`cost ≤ c_σ1(p)`), so indifference
/// resolves to acquiring.
pub fn acquisition_decision(p: f64, scenario: &Scenario, s1: SignalValue) -> Result<AcquisitionAction> {
    decide(p, &scenario.info, &scenario.payoffs, scenario.cost(), s1)
}

pub fn decide(
    p: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
    cost: f64,
    s1: SignalValue,
) -> Result<AcquisitionAction> {
    let cost = check_cost(cost)?;
    let wtp = willingness_to_pay(p, info, payoffs, s1)?;
    Ok(action_for(cost, wtp))
}

pub(crate) fn action_for(cost: f64, wtp: f64) -> AcquisitionAction {
    if cost <= wtp {
        AcquisitionAction::Acquire
    } else {
        AcquisitionAction::Skip
    }
}

/// Guess `A` when the belief is at least one half.
///
/// At exactly 1/2 both guesses have the same expected utility; `A` is
/// returned so results are reproducible.
pub fn optimal_guess(belief: &BeliefState) -> StateOfWorld {
    guess_for(belief.prob_a())
}

pub(crate) fn guess_for(prob_a: f64) -> StateOfWorld {
    if prob_a >= 0.5 {
        StateOfWorld::A
    } else {
        StateOfWorld::B
    }
}

/// Expected utility of guessing optimally on the interim belief alone.
pub fn expected_utility_skip(p_after_first: f64, payoffs: &PayoffStructure) -> Result<f64> {
    let p = check_probability("p_after_first", p_after_first)?;
    let hi = p.max(1.0 - p);
    Ok(hi * payoffs.u_correct() + (1.0 - hi) * payoffs.u_wrong())
}
