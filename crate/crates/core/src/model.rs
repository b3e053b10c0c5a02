//! Primitive domain types and Bayesian updating over the two-component signal.
//!
//! The state of the world is binary (`A` or `B`). A signal has two
//! components, each taking the value `α` (evidence for `A`) or `β` (evidence
//! for `B`). Component `k` matches the state with probability `θk`, and the
//! components are independent conditional on the state.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Absolute tolerance for threshold comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateOfWorld {
    A,
    B,
}

/// Value taken by one signal component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalValue {
    Alpha,
    Beta,
}

impl SignalValue {
    pub const BOTH: [SignalValue; 2] = [SignalValue::Alpha, SignalValue::Beta];

    pub fn other(self) -> Self {
        match self {
            SignalValue::Alpha => SignalValue::Beta,
            SignalValue::Beta => SignalValue::Alpha,
        }
    }

    /// The state this value is evidence for.
    pub fn supports(self) -> StateOfWorld {
        match self {
            SignalValue::Alpha => StateOfWorld::A,
            SignalValue::Beta => StateOfWorld::B,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            SignalValue::Alpha => 'a',
            SignalValue::Beta => 'b',
        }
    }
}

impl fmt::Display for SignalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignalValue::Alpha => f.write_str("alpha"),
            SignalValue::Beta => f.write_str("beta"),
        }
    }
}

impl FromStr for SignalValue {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" | "alpha" => Ok(SignalValue::Alpha),
            "b" | "beta" => Ok(SignalValue::Beta),
            other => Err(ModelError::Domain(format!("unknown signal value `{other}`"))),
        }
    }
}

/// A realized two-component signal `(σ1, σ2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signal {
    pub first: SignalValue,
    pub second: SignalValue,
}

impl Signal {
    pub const ALL: [Signal; 4] = [
        Signal::new(SignalValue::Alpha, SignalValue::Alpha),
        Signal::new(SignalValue::Alpha, SignalValue::Beta),
        Signal::new(SignalValue::Beta, SignalValue::Alpha),
        Signal::new(SignalValue::Beta, SignalValue::Beta),
    ];

    pub const fn new(first: SignalValue, second: SignalValue) -> Self {
        Signal { first, second }
    }

    pub fn is_mixed(&self) -> bool {
        self.first != self.second
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

impl FromStr for Signal {
    type Err = ModelError;

    /// Accepts `ab`, `a,b`, `(alpha,beta)` and similar spellings.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = if t.contains(',') {
            t.split(',').collect()
        } else if t.len() == 2 {
            vec![&t[..1], &t[1..]]
        } else {
            return Err(ModelError::Domain(format!("cannot parse signal `{s}`")));
        };
        if parts.len() != 2 {
            return Err(ModelError::Domain(format!("cannot parse signal `{s}`")));
        }
        Ok(Signal::new(parts[0].parse()?, parts[1].parse()?))
    }
}

/// Precisions of the two signal components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InformationStructure {
    theta1: f64,
    theta2: f64,
}

impl InformationStructure {
    /// Both precisions must lie in the open interval (1/2, 1).
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        check_precision("theta1", theta1)?;
        check_precision("theta2", theta2)?;
        Ok(InformationStructure { theta1, theta2 })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    /// `P(component = value | state)`.
    pub fn likelihood(&self, component: Component, value: SignalValue, state: StateOfWorld) -> f64 {
        let theta = match component {
            Component::First => self.theta1,
            Component::Second => self.theta2,
        };
        if value.supports() == state {
            theta
        } else {
            1.0 - theta
        }
    }
}

/// Which component of the signal a precision refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    First,
    Second,
}

fn check_precision(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.5 && value < 1.0 {
        Ok(())
    } else {
        Err(ModelError::InvalidPrecision { name, value })
    }
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(ModelError::InvalidProbability { name, value })
    }
}

pub(crate) fn check_cost(cost: f64) -> Result<f64> {
    if cost.is_finite() && cost >= 0.0 {
        Ok(cost)
    } else {
        Err(ModelError::InvalidCost(cost))
    }
}

/// Utility of a correct and of a wrong guess.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffStructure {
    u_correct: f64,
    u_wrong: f64,
}

impl PayoffStructure {
    pub fn new(u_correct: f64, u_wrong: f64) -> Result<Self> {
        let delta = u_correct - u_wrong;
        if u_correct.is_finite() && u_wrong.is_finite() && delta > 0.0 {
            Ok(PayoffStructure { u_correct, u_wrong })
        } else {
            Err(ModelError::InvalidPayoffs { delta })
        }
    }

    /// Payoffs `1` for a correct guess and `0` otherwise.
    pub fn unit() -> Self {
        PayoffStructure {
            u_correct: 1.0,
            u_wrong: 0.0,
        }
    }

    pub fn u_correct(&self) -> f64 {
        self.u_correct
    }

    pub fn u_wrong(&self) -> f64 {
        self.u_wrong
    }

    /// The premium `ΔU` of a correct guess.
    pub fn delta_u(&self) -> f64 {
        self.u_correct - self.u_wrong
    }

    /// Gross utility of guessing `guess` when the state is `state`.
    pub fn utility(&self, guess: StateOfWorld, state: StateOfWorld) -> f64 {
        if guess == state {
            self.u_correct
        } else {
            self.u_wrong
        }
    }
}

/// How a belief was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Prior,
    AfterFirst(SignalValue),
    AfterBoth(SignalValue, SignalValue),
}

/// Probability of state `A` together with the observations behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeliefState {
    prob_a: f64,
    observed: Provenance,
}

impl BeliefState {
    pub fn prior(p: f64) -> Result<Self> {
        Ok(BeliefState {
            prob_a: check_probability("p", p)?,
            observed: Provenance::Prior,
        })
    }

    pub fn prob_a(&self) -> f64 {
        self.prob_a
    }

    pub fn observed(&self) -> Provenance {
        self.observed
    }

    /// Update a prior on the first component.
    pub fn observe_first(&self, info: &InformationStructure, s1: SignalValue) -> Result<Self> {
        match self.observed {
            Provenance::Prior => Ok(BeliefState {
                prob_a: posterior_after_first(self.prob_a, info, s1)?,
                observed: Provenance::AfterFirst(s1),
            }),
            other => Err(ModelError::Domain(format!(
                "first component can only update a prior, belief is {other:?}"
            ))),
        }
    }

    /// Update an interim belief on the second component.
    pub fn observe_second(&self, info: &InformationStructure, s2: SignalValue) -> Result<Self> {
        match self.observed {
            Provenance::AfterFirst(s1) => Ok(BeliefState {
                prob_a: bayes(self.prob_a, info, Component::Second, s2),
                observed: Provenance::AfterBoth(s1, s2),
            }),
            other => Err(ModelError::Domain(format!(
                "second component can only update an interim belief, belief is {other:?}"
            ))),
        }
    }
}

/// Model parameters shared by every decision-maker: precisions, payoffs and
/// the processing cost of the second component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub info: InformationStructure,
    pub payoffs: PayoffStructure,
    cost: f64,
}

impl Environment {
    pub fn new(info: InformationStructure, payoffs: PayoffStructure, cost: f64) -> Result<Self> {
        Ok(Environment {
            info,
            payoffs,
            cost: check_cost(cost)?,
        })
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn with_cost(&self, cost: f64) -> Result<Self> {
        Environment::new(self.info, self.payoffs, cost)
    }
}

/// A full problem instance: environment plus one or two priors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub info: InformationStructure,
    pub payoffs: PayoffStructure,
    cost: f64,
    priors: Vec<f64>,
}

impl Scenario {
    /// Two priors are stored in ascending order.
    pub fn new(
        info: InformationStructure,
        payoffs: PayoffStructure,
        cost: f64,
        priors: &[f64],
    ) -> Result<Self> {
        if priors.is_empty() || priors.len() > 2 {
            return Err(ModelError::PriorCount(priors.len()));
        }
        let mut priors = priors
            .iter()
            .map(|&p| check_probability("prior", p))
            .collect::<Result<Vec<_>>>()?;
        priors.sort_by(f64::total_cmp);
        Ok(Scenario {
            info,
            payoffs,
            cost: check_cost(cost)?,
            priors,
        })
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// The ordered pair `(p_i, p_j)` when two priors are present.
    pub fn pair(&self) -> Option<(f64, f64)> {
        match self.priors.as_slice() {
            [p_i, p_j] => Some((*p_i, *p_j)),
            _ => None,
        }
    }

    pub fn environment(&self) -> Environment {
        Environment {
            info: self.info,
            payoffs: self.payoffs,
            cost: self.cost,
        }
    }
}

fn bayes(p: f64, info: &InformationStructure, component: Component, value: SignalValue) -> f64 {
    let la = info.likelihood(component, value, StateOfWorld::A);
    let lb = info.likelihood(component, value, StateOfWorld::B);
    update(p, la, lb)
}

/// Bayes' rule for likelihoods `la`, `lb`; uninformative evidence returns
/// the prior bit-for-bit rather than a rounded copy of it.
fn update(p: f64, la: f64, lb: f64) -> f64 {
    if la == lb {
        p
    } else {
        la * p / (la * p + lb * (1.0 - p))
    }
}

/// Interim posterior `p_σ1` after the free component.
pub fn posterior_after_first(p: f64, info: &InformationStructure, s1: SignalValue) -> Result<f64> {
    let p = check_probability("p", p)?;
    Ok(bayes(p, info, Component::First, s1))
}

/// Full posterior `p_σ1σ2` after both components.
pub fn posterior_after_both(
    p: f64,
    info: &InformationStructure,
    s1: SignalValue,
    s2: SignalValue,
) -> Result<f64> {
    let p = check_probability("p", p)?;
    let la = info.likelihood(Component::First, s1, StateOfWorld::A)
        * info.likelihood(Component::Second, s2, StateOfWorld::A);
    let lb = info.likelihood(Component::First, s1, StateOfWorld::B)
        * info.likelihood(Component::Second, s2, StateOfWorld::B);
    Ok(update(p, la, lb))
}

/// Unconditional probability that the first component equals `s1`.
pub fn marginal_first(p: f64, info: &InformationStructure, s1: SignalValue) -> Result<f64> {
    let p = check_probability("p", p)?;
    Ok(marginal(p, info, Component::First, s1))
}

/// Probability that the second component equals `s2` given the interim
/// posterior `p_σ1`.
pub fn conditional_second(
    p_after_first: f64,
    info: &InformationStructure,
    s2: SignalValue,
) -> Result<f64> {
    let p = check_probability("p_after_first", p_after_first)?;
    Ok(marginal(p, info, Component::Second, s2))
}

/// Probability that a single component equals `value` under belief `p`,
/// ignoring the other component.
pub fn component_marginal(
    p: f64,
    info: &InformationStructure,
    component: Component,
    value: SignalValue,
) -> Result<f64> {
    let p = check_probability("p", p)?;
    Ok(marginal(p, info, component, value))
}

fn marginal(p: f64, info: &InformationStructure, component: Component, value: SignalValue) -> f64 {
    p * info.likelihood(component, value, StateOfWorld::A)
        + (1.0 - p) * info.likelihood(component, value, StateOfWorld::B)
}

/// Joint probability of a full signal realization under belief `p`, with the
/// components independent given the state.
pub fn signal_probability(p: f64, info: &InformationStructure, signal: Signal) -> Result<f64> {
    let p = check_probability("p", p)?;
    let joint = |state: StateOfWorld| {
        info.likelihood(Component::First, signal.first, state)
            * info.likelihood(Component::Second, signal.second, state)
    };
    Ok(p * joint(StateOfWorld::A) + (1.0 - p) * joint(StateOfWorld::B))
}

/// Draw a state with `P(A) = p`, then both components independently given it.
pub fn sample_state_and_signal<R: Rng + ?Sized>(
    p: f64,
    info: &InformationStructure,
    rng: &mut R,
) -> Result<(StateOfWorld, Signal)> {
    let p = check_probability("p", p)?;
    Ok(draw(p, info, rng))
}

fn draw<R: Rng + ?Sized>(p: f64, info: &InformationStructure, rng: &mut R) -> (StateOfWorld, Signal) {
    let state = if rng.gen::<f64>() < p {
        StateOfWorld::A
    } else {
        StateOfWorld::B
    };
    let mut component = |c: Component| {
        let matches = rng.gen::<f64>() < info.likelihood(c, state.signal_value(), state);
        if matches {
            state.signal_value()
        } else {
            state.signal_value().other()
        }
    };
    let first = component(Component::First);
    let second = component(Component::Second);
    (state, Signal::new(first, second))
}

impl StateOfWorld {
    /// The signal value that is evidence for this state.
    pub fn signal_value(self) -> SignalValue {
        match self {
            StateOfWorld::A => SignalValue::Alpha,
            StateOfWorld::B => SignalValue::Beta,
        }
    }
}

/// Seeded stream of `(state, signal)` draws.
///
/// `stream` selects an independent ChaCha stream for the same seed, which is
/// how parallel shards get disjoint randomness.
pub struct SignalSampler {
    p: f64,
    info: InformationStructure,
    rng: ChaCha8Rng,
}

impl SignalSampler {
    pub fn new(p: f64, info: InformationStructure, seed: u64) -> Result<Self> {
        Self::with_stream(p, info, seed, 0)
    }

    pub fn with_stream(p: f64, info: InformationStructure, seed: u64, stream: u64) -> Result<Self> {
        let p = check_probability("p", p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Ok(SignalSampler { p, info, rng })
    }

    pub fn draw(&mut self) -> (StateOfWorld, Signal) {
        draw(self.p, &self.info, &mut self.rng)
    }
}

impl Iterator for SignalSampler {
    type Item = (StateOfWorld, Signal);

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.draw())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SignalValue::{Alpha, Beta};

    fn intro() -> InformationStructure {
        InformationStructure::new(0.6, 0.8).unwrap()
    }

    #[test]
    fn rejects_boundary_precisions() {
        assert!(InformationStructure::new(0.5, 0.8).is_err());
        assert!(InformationStructure::new(0.6, 1.0).is_err());
        assert!(InformationStructure::new(f64::NAN, 0.8).is_err());
        assert!(InformationStructure::new(0.5000001, 0.9999999).is_ok());
    }

    #[test]
    fn rejects_nonpositive_premium() {
        assert!(PayoffStructure::new(1.0, 1.0).is_err());
        assert!(PayoffStructure::new(0.0, 1.0).is_err());
        assert_eq!(PayoffStructure::new(2.0, 1.0).unwrap().delta_u(), 1.0);
    }

    #[test]
    fn posterior_after_first_examples() {
        let info = intro();
        assert!((posterior_after_first(0.7, &info, Alpha).unwrap() - 0.7778).abs() < 0.005);
        assert!((posterior_after_first(0.5, &info, Alpha).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(posterior_after_first(0.0, &info, Alpha).unwrap(), 0.0);
        assert_eq!(posterior_after_first(0.0, &info, Beta).unwrap(), 0.0);
        assert!(matches!(
            posterior_after_first(1.2, &info, Alpha),
            Err(ModelError::InvalidProbability { .. })
        ));
        assert!(posterior_after_first(f64::NAN, &info, Alpha).is_err());
    }

    #[test]
    fn posterior_after_both_examples() {
        let info = intro();
        assert!((posterior_after_both(0.3, &info, Alpha, Beta).unwrap() - 0.1385).abs() < 0.005);
        assert!((posterior_after_both(0.7, &info, Alpha, Alpha).unwrap() - 0.9333).abs() < 0.005);
        for s in Signal::ALL {
            assert_eq!(posterior_after_both(1.0, &info, s.first, s.second).unwrap(), 1.0);
        }
    }

    #[test]
    fn uninformative_signal_keeps_prior_exactly() {
        let info = InformationStructure::new(0.7, 0.7).unwrap();
        for k in 1..100 {
            let p = k as f64 / 100.0 + 1e-7;
            assert_eq!(posterior_after_both(p, &info, Alpha, Beta).unwrap(), p);
            assert_eq!(posterior_after_both(p, &info, Beta, Alpha).unwrap(), p);
        }
    }

    #[test]
    fn marginal_and_conditional_examples() {
        let info = intro();
        assert!((marginal_first(0.5, &info, Alpha).unwrap() - 0.5).abs() < 1e-15);
        // joint over states: P(A)P(α|A) + P(B)P(α|B)
        let joint = 0.7 * 0.6 + 0.3 * 0.4;
        assert!((marginal_first(0.7, &info, Alpha).unwrap() - joint).abs() < 1e-15);
        assert!((marginal_first(1.0, &info, Beta).unwrap() - 0.4).abs() < 1e-15);

        assert!((conditional_second(0.5, &info, Alpha).unwrap() - 0.5).abs() < 1e-15);
        let p1 = 0.7778;
        let by_states = p1 * 0.2 + (1.0 - p1) * 0.8;
        assert!((conditional_second(p1, &info, Beta).unwrap() - by_states).abs() < 1e-15);
        assert!((conditional_second(p1, &info, Beta).unwrap() - 0.3333).abs() < 1e-3);
        assert!((conditional_second(1.0, &info, Alpha).unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn belief_state_tracks_provenance() {
        let info = intro();
        let prior = BeliefState::prior(0.3).unwrap();
        let interim = prior.observe_first(&info, Alpha).unwrap();
        assert_eq!(interim.observed(), Provenance::AfterFirst(Alpha));
        let full = interim.observe_second(&info, Beta).unwrap();
        assert_eq!(full.observed(), Provenance::AfterBoth(Alpha, Beta));
        let direct = posterior_after_both(0.3, &info, Alpha, Beta).unwrap();
        assert!((full.prob_a() - direct).abs() < 1e-12);
        assert!(prior.observe_second(&info, Beta).is_err());
        assert!(full.observe_first(&info, Beta).is_err());
    }

    #[test]
    fn scenario_orders_priors() {
        let s = Scenario::new(intro(), PayoffStructure::unit(), 0.1, &[0.7, 0.3]).unwrap();
        assert_eq!(s.pair(), Some((0.3, 0.7)));
        assert!(Scenario::new(intro(), PayoffStructure::unit(), -0.1, &[0.3]).is_err());
        assert!(Scenario::new(intro(), PayoffStructure::unit(), 0.1, &[]).is_err());
        assert!(Scenario::new(intro(), PayoffStructure::unit(), 0.1, &[0.1, 0.2, 0.3]).is_err());
    }

    #[test]
    fn degenerate_prior_always_draws_a() {
        let mut sampler = SignalSampler::new(1.0, intro(), 7).unwrap();
        assert!((0..1000).all(|_| sampler.draw().0 == StateOfWorld::A));
    }

    #[test]
    fn sampler_is_deterministic_per_seed_and_stream() {
        let a: Vec<_> = SignalSampler::new(0.4, intro(), 11).unwrap().take(64).collect();
        let b: Vec<_> = SignalSampler::new(0.4, intro(), 11).unwrap().take(64).collect();
        let c: Vec<_> = SignalSampler::with_stream(0.4, intro(), 11, 1).unwrap().take(64).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn empirical_first_component_frequency() {
        let info = intro();
        let n = 200_000;
        for (p, expected) in [(0.5, 0.5), (0.7, marginal_first(0.7, &info, Alpha).unwrap())] {
            let hits = SignalSampler::new(p, info, 3)
                .unwrap()
                .take(n)
                .filter(|(_, s)| s.first == Alpha)
                .count();
            let freq = hits as f64 / n as f64;
            let se = (expected * (1.0 - expected) / n as f64).sqrt();
            assert!((freq - expected).abs() < 3.0 * se, "p={p} freq={freq}");
        }
    }

    #[test]
    fn signal_parsing() {
        assert_eq!("ab".parse::<Signal>().unwrap(), Signal::new(Alpha, Beta));
        assert_eq!("(beta,alpha)".parse::<Signal>().unwrap(), Signal::new(Beta, Alpha));
        assert!("abc".parse::<Signal>().is_err());
    }
}
