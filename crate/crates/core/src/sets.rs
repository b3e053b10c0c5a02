//! Acquisition sets and classifications of prior pairs.
//!
//! `H_σ1(c)` is the open set of priors that strictly prefer paying `c` for
//! the second component. The acquisition rule itself is weak (`c ≤ c_σ1(p)`),
//! so a prior sitting exactly on an endpoint of `H_σ1(c)` still acquires
//! while not belonging to the set. Both predicates are exposed.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::incentives::{
    action_for, max_willingness_to_pay, wtp_unchecked, AcquisitionAction, CaseBoundaries,
};
use crate::model::{check_cost, check_probability, InformationStructure, PayoffStructure, SignalValue};
use crate::numeric::bisect;

/// Which endpoints of an interval are included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Openness {
    Open,
    Closed,
    /// `(lower, upper]`
    LeftOpen,
    /// `[lower, upper)`
    RightOpen,
}

impl Openness {
    fn from_flags(lower_closed: bool, upper_closed: bool) -> Self {
        match (lower_closed, upper_closed) {
            (true, true) => Openness::Closed,
            (false, false) => Openness::Open,
            (false, true) => Openness::LeftOpen,
            (true, false) => Openness::RightOpen,
        }
    }

    pub fn lower_closed(self) -> bool {
        matches!(self, Openness::Closed | Openness::RightOpen)
    }

    pub fn upper_closed(self) -> bool {
        matches!(self, Openness::Closed | Openness::LeftOpen)
    }
}

/// A sub-interval of `[0, 1]`, or the empty set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProbabilityInterval {
    Empty,
    Range {
        lower: f64,
        upper: f64,
        openness: Openness,
    },
}

impl ProbabilityInterval {
    /// Builds an interval, collapsing degenerate inputs to `Empty`.
    pub fn new(lower: f64, upper: f64, openness: Openness) -> Self {
        let point_ok = openness == Openness::Closed;
        if lower > upper || (lower == upper && !point_ok) || lower.is_nan() || upper.is_nan() {
            ProbabilityInterval::Empty
        } else {
            ProbabilityInterval::Range {
                lower,
                upper,
                openness,
            }
        }
    }

    pub fn open(lower: f64, upper: f64) -> Self {
        Self::new(lower, upper, Openness::Open)
    }

    pub fn closed(lower: f64, upper: f64) -> Self {
        Self::new(lower, upper, Openness::Closed)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ProbabilityInterval::Empty)
    }

    pub fn lower(&self) -> Option<f64> {
        match self {
            ProbabilityInterval::Range { lower, .. } => Some(*lower),
            ProbabilityInterval::Empty => None,
        }
    }

    pub fn upper(&self) -> Option<f64> {
        match self {
            ProbabilityInterval::Range { upper, .. } => Some(*upper),
            ProbabilityInterval::Empty => None,
        }
    }

    pub fn openness(&self) -> Option<Openness> {
        match self {
            ProbabilityInterval::Range { openness, .. } => Some(*openness),
            ProbabilityInterval::Empty => None,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        match *self {
            ProbabilityInterval::Empty => false,
            ProbabilityInterval::Range {
                lower,
                upper,
                openness,
            } => {
                let above = if openness.lower_closed() { p >= lower } else { p > lower };
                let below = if openness.upper_closed() { p <= upper } else { p < upper };
                above && below
            }
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            ProbabilityInterval::Range { lower, upper, .. } => upper - lower,
            ProbabilityInterval::Empty => 0.0,
        }
    }
}

impl std::fmt::Display for ProbabilityInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ProbabilityInterval::Empty => f.write_str("∅"),
            ProbabilityInterval::Range {
                lower,
                upper,
                openness,
            } => {
                let l = if openness.lower_closed() { '[' } else { '(' };
                let r = if openness.upper_closed() { ']' } else { ')' };
                write!(f, "{l}{lower:.4}, {upper:.4}{r}")
            }
        }
    }
}

/// Sorted, pairwise-disjoint union of intervals.
pub fn union(intervals: &[ProbabilityInterval]) -> Vec<ProbabilityInterval> {
    let mut parts: Vec<(f64, bool, f64, bool)> = intervals
        .iter()
        .filter_map(|iv| match *iv {
            ProbabilityInterval::Range {
                lower,
                upper,
                openness,
            } => Some((lower, openness.lower_closed(), upper, openness.upper_closed())),
            ProbabilityInterval::Empty => None,
        })
        .collect();
    parts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));

    let mut merged: Vec<(f64, bool, f64, bool)> = Vec::new();
    for part in parts {
        if let Some(last) = merged.last_mut() {
            let touches = part.0 < last.2 || (part.0 == last.2 && (part.1 || last.3));
            if touches {
                if part.2 > last.2 {
                    last.2 = part.2;
                    last.3 = part.3;
                } else if part.2 == last.2 {
                    last.3 |= part.3;
                }
                continue;
            }
        }
        merged.push(part);
    }
    merged
        .into_iter()
        .map(|(l, lc, u, uc)| ProbabilityInterval::new(l, u, Openness::from_flags(lc, uc)))
        .collect()
}

/// Complement of a disjoint sorted union within `[0, 1]`.
pub fn complement(parts: &[ProbabilityInterval]) -> Vec<ProbabilityInterval> {
    let mut out = Vec::new();
    let mut cursor = 0.0;
    let mut cursor_closed = true;
    for iv in union(parts) {
        if let ProbabilityInterval::Range {
            lower,
            upper,
            openness,
        } = iv
        {
            let gap = ProbabilityInterval::new(
                cursor,
                lower,
                Openness::from_flags(cursor_closed, !openness.lower_closed()),
            );
            if !gap.is_empty() {
                out.push(gap);
            }
            cursor = upper;
            cursor_closed = !openness.upper_closed();
        }
    }
    let tail = ProbabilityInterval::new(cursor, 1.0, Openness::from_flags(cursor_closed, true));
    if !tail.is_empty() {
        out.push(tail);
    }
    out
}

/// Lower and upper inverse thresholds `(q̲_σ1(c), q̄_σ1(c))` of the cost
/// function, valid for `0 ≤ c < ΔU (θ2 − 1/2)`.
pub fn inverse_thresholds(
    c: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
    s1: SignalValue,
) -> (f64, f64) {
    let (t1, t2) = (info.theta1(), info.theta2());
    let du = payoffs.delta_u();
    let mixed = du * (t1 + t2 - 2.0 * t1 * t2) + (2.0 * t1 - 1.0) * c;
    let mixed_minus = du * (t1 + t2 - 2.0 * t1 * t2 - 1.0) + (2.0 * t1 - 1.0) * c;
    match s1 {
        SignalValue::Alpha => (
            (1.0 - t1) * (du * (t2 - 1.0) - c) / mixed_minus,
            (1.0 - t1) * (du * t2 - c) / mixed,
        ),
        SignalValue::Beta => (
            t1 * (c + du * (1.0 - t2)) / mixed,
            t1 * (c - du * t2) / mixed_minus,
        ),
    }
}

/// Priors that strictly prefer paying `c` after seeing `s1`.
///
/// Empty once `c` reaches the cost function's maximum `ΔU (θ2 − 1/2)`: at
/// equality the only candidate is the peak itself, which is indifferent.
pub fn h_set(
    c: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
    s1: SignalValue,
) -> Result<ProbabilityInterval> {
    let c = check_cost(c)?;
    if c >= max_willingness_to_pay(info, payoffs) {
        return Ok(ProbabilityInterval::Empty);
    }
    let (lo, hi) = inverse_thresholds(c, info, payoffs, s1);
    Ok(ProbabilityInterval::open(lo, hi))
}

/// Non-extreme priors (positive value of the second component for some
/// first-component realization) and their complement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremeSets {
    pub non_extreme_alpha: ProbabilityInterval,
    pub non_extreme_beta: ProbabilityInterval,
    /// Union of the two conditional sets, as disjoint sorted intervals.
    pub non_extreme: Vec<ProbabilityInterval>,
    pub extreme: Vec<ProbabilityInterval>,
}

impl ExtremeSets {
    pub fn is_non_extreme(&self, p: f64) -> bool {
        self.non_extreme.iter().any(|iv| iv.contains(p))
    }

    pub fn non_extreme_for(&self, s1: SignalValue) -> ProbabilityInterval {
        match s1 {
            SignalValue::Alpha => self.non_extreme_alpha,
            SignalValue::Beta => self.non_extreme_beta,
        }
    }

    /// True when the non-extreme set is a single interval.
    pub fn is_convex(&self) -> bool {
        self.non_extreme.len() == 1
    }
}

pub fn extreme_sets(info: &InformationStructure) -> ExtremeSets {
    let b = CaseBoundaries::new(info);
    let non_extreme_alpha = ProbabilityInterval::open(b.alpha_low, b.alpha_high);
    let non_extreme_beta = ProbabilityInterval::open(b.beta_low, b.beta_high);
    let non_extreme = union(&[non_extreme_alpha, non_extreme_beta]);
    let extreme = complement(&non_extreme);
    ExtremeSets {
        non_extreme_alpha,
        non_extreme_beta,
        non_extreme,
        extreme,
    }
}

/// Result of searching for a prior with the same willingness to pay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ReciprocalPartner {
    /// A distinct prior on the opposite branch of the cost function.
    Distinct(f64),
    /// The prior sits on the peak, where both branches meet.
    FixedPoint(f64),
}

impl ReciprocalPartner {
    pub fn prior(&self) -> f64 {
        match self {
            ReciprocalPartner::Distinct(p) | ReciprocalPartner::FixedPoint(p) => *p,
        }
    }
}

/// Prior on the opposite monotone branch of `c_σ1` with the same willingness
/// to pay as `p_i`, found by bisection.
pub fn reciprocal_partner(
    p_i: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
    s1: SignalValue,
) -> Result<ReciprocalPartner> {
    let p_i = check_probability("p_i", p_i)?;
    let b = CaseBoundaries::new(info);
    let (lo, hi) = match s1 {
        SignalValue::Alpha => (b.alpha_low, b.alpha_high),
        SignalValue::Beta => (b.beta_low, b.beta_high),
    };
    if !(p_i > lo && p_i < hi) {
        return Err(ModelError::OutsideNonExtreme { p: p_i });
    }
    let peak = b.peak(s1);
    if p_i == peak {
        return Ok(ReciprocalPartner::FixedPoint(p_i));
    }
    let target = wtp_unchecked(p_i, info, payoffs, s1);
    let gap = |p: f64| wtp_unchecked(p, info, payoffs, s1) - target;
    let root = if p_i < peak {
        bisect(gap, peak, hi, 1e-12)
    } else {
        bisect(gap, lo, peak, 1e-12)
    };
    Ok(ReciprocalPartner::Distinct(root))
}

/// Membership of an ordered prior pair in the `B` (fixed cost) and `V` (some
/// cost) sets for both first-component realizations.
///
/// `in_b_kl_s` means decision-maker `k` acquires after `s` while `l` does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PairClass {
    pub in_b_ij_alpha: bool,
    pub in_b_ji_beta: bool,
    pub in_b_ji_alpha: bool,
    pub in_b_ij_beta: bool,
    pub in_v_ij_alpha: bool,
    pub in_v_ji_beta: bool,
    pub in_v_ji_alpha: bool,
    pub in_v_ij_beta: bool,
}

impl PairClass {
    pub fn b(&self, first_acquires_is_i: bool, s1: SignalValue) -> bool {
        match (first_acquires_is_i, s1) {
            (true, SignalValue::Alpha) => self.in_b_ij_alpha,
            (true, SignalValue::Beta) => self.in_b_ij_beta,
            (false, SignalValue::Alpha) => self.in_b_ji_alpha,
            (false, SignalValue::Beta) => self.in_b_ji_beta,
        }
    }

    pub fn v(&self, first_acquires_is_i: bool, s1: SignalValue) -> bool {
        match (first_acquires_is_i, s1) {
            (true, SignalValue::Alpha) => self.in_v_ij_alpha,
            (true, SignalValue::Beta) => self.in_v_ij_beta,
            (false, SignalValue::Alpha) => self.in_v_ji_alpha,
            (false, SignalValue::Beta) => self.in_v_ji_beta,
        }
    }
}

/// Classify the pair `p_i ≤ p_j` at cost `c`.
///
/// `B` membership follows the (weak) acquisition rule; `V` membership is a
/// strict comparison of willingness to pay.
pub fn classify_pair(
    p_i: f64,
    p_j: f64,
    c: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
) -> Result<PairClass> {
    let p_i = check_probability("p_i", p_i)?;
    let p_j = check_probability("p_j", p_j)?;
    let c = check_cost(c)?;
    if p_i > p_j {
        return Err(ModelError::Ordering { p_i, p_j });
    }
    let w = |p, s1| wtp_unchecked(p, info, payoffs, s1);
    let (wi_a, wj_a) = (w(p_i, SignalValue::Alpha), w(p_j, SignalValue::Alpha));
    let (wi_b, wj_b) = (w(p_i, SignalValue::Beta), w(p_j, SignalValue::Beta));
    let acq = |wtp| action_for(c, wtp) == AcquisitionAction::Acquire;
    Ok(PairClass {
        in_b_ij_alpha: acq(wi_a) && !acq(wj_a),
        in_b_ji_beta: acq(wj_b) && !acq(wi_b),
        in_b_ji_alpha: acq(wj_a) && !acq(wi_a),
        in_b_ij_beta: acq(wi_b) && !acq(wj_b),
        in_v_ij_alpha: wi_a > wj_a,
        in_v_ji_beta: wj_b > wi_b,
        in_v_ji_alpha: wj_a > wi_a,
        in_v_ij_beta: wi_b > wj_b,
    })
}

/// Outcome of checking that a pair reciprocal for one first-component value
/// is not reciprocal for the other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Report {
    /// `(c_α(p_i), c_α(p_j))`
    pub wtp_alpha: (f64, f64),
    /// `(c_β(p_i), c_β(p_j))`
    pub wtp_beta: (f64, f64),
    pub reciprocal_for: Option<SignalValue>,
    /// False only when the pair looks reciprocal for both values.
    pub holds: bool,
}

/// Reciprocity for `s1` means both priors are non-extreme for `s1` and their
/// willingness to pay agrees within `tol`.
pub fn lemma1_check(
    p_i: f64,
    p_j: f64,
    info: &InformationStructure,
    payoffs: &PayoffStructure,
    tol: f64,
) -> Result<Lemma1Report> {
    let p_i = check_probability("p_i", p_i)?;
    let p_j = check_probability("p_j", p_j)?;
    if p_i == p_j {
        return Err(ModelError::Domain("reciprocity needs two distinct priors".into()));
    }
    let ext = extreme_sets(info);
    let w = |p, s1| wtp_unchecked(p, info, payoffs, s1);
    let wtp_alpha = (w(p_i, SignalValue::Alpha), w(p_j, SignalValue::Alpha));
    let wtp_beta = (w(p_i, SignalValue::Beta), w(p_j, SignalValue::Beta));
    let reciprocal = |s1: SignalValue, (a, b): (f64, f64)| {
        let set = ext.non_extreme_for(s1);
        set.contains(p_i) && set.contains(p_j) && (a - b).abs() <= tol
    };
    let ra = reciprocal(SignalValue::Alpha, wtp_alpha);
    let rb = reciprocal(SignalValue::Beta, wtp_beta);
    let reciprocal_for = match (ra, rb) {
        (true, false) => Some(SignalValue::Alpha),
        (false, true) => Some(SignalValue::Beta),
        _ => None,
    };
    Ok(Lemma1Report {
        wtp_alpha,
        wtp_beta,
        reciprocal_for,
        holds: !(ra && rb),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incentives::willingness_to_pay;
    use SignalValue::Alpha;

    fn intro() -> (InformationStructure, PayoffStructure) {
        (InformationStructure::new(0.6, 0.8).unwrap(), PayoffStructure::unit())
    }

    #[test]
    fn h_set_examples() {
        let (info, pay) = intro();
        let h = h_set(0.1, &info, &pay, Alpha).unwrap();
        let (lo, hi) = (h.lower().unwrap(), h.upper().unwrap());
        assert!((lo - 0.2222).abs() < 1e-4 && (hi - 0.6087).abs() < 1e-4);
        assert!((willingness_to_pay(lo, &info, &pay, Alpha).unwrap() - 0.1).abs() < 1e-9);
        assert!((willingness_to_pay(hi, &info, &pay, Alpha).unwrap() - 0.1).abs() < 1e-9);
        assert_eq!(h.openness(), Some(Openness::Open));
        assert!(!h.contains(lo) && !h.contains(hi));

        for s1 in SignalValue::BOTH {
            assert!(h_set(0.31, &info, &pay, s1).unwrap().is_empty());
            assert!(h_set(max_willingness_to_pay(&info, &pay), &info, &pay, s1).unwrap().is_empty());
            assert!(!h_set(0.29, &info, &pay, s1).unwrap().is_empty());
        }

        let limit = h_set(1e-15, &info, &pay, Alpha).unwrap();
        assert!((limit.lower().unwrap() - 1.0 / 7.0).abs() < 1e-9);
        assert!((limit.upper().unwrap() - 8.0 / 11.0).abs() < 1e-9);
    }

    #[test]
    fn extreme_set_examples() {
        let (info, _) = intro();
        let e = extreme_sets(&info);
        assert!((e.non_extreme_alpha.lower().unwrap() - 1.0 / 7.0).abs() < 1e-12);
        assert!((e.non_extreme_alpha.upper().unwrap() - 8.0 / 11.0).abs() < 1e-12);
        assert!((e.non_extreme_beta.lower().unwrap() - 3.0 / 11.0).abs() < 1e-12);
        assert!((e.non_extreme_beta.upper().unwrap() - 6.0 / 7.0).abs() < 1e-12);
        assert!(e.is_convex());
        assert_eq!(e.extreme.len(), 2);

        let near = extreme_sets(&InformationStructure::new(0.7, 0.7 + 1e-6).unwrap());
        assert!(near.is_convex());

        let gap = extreme_sets(&InformationStructure::new(0.8, 0.6).unwrap());
        assert!(!gap.is_convex());
        assert_eq!(gap.extreme.len(), 3);
        assert!(!gap.is_non_extreme(0.5));

        // equal precisions leave exactly the point 1/2 extreme
        let eq = extreme_sets(&InformationStructure::new(0.7, 0.7).unwrap());
        assert_eq!(eq.non_extreme.len(), 2);
        assert!(!eq.is_non_extreme(0.5));
        assert!(eq.extreme.iter().any(|iv| *iv == ProbabilityInterval::closed(0.5, 0.5)));
    }

    #[test]
    fn reciprocal_examples() {
        let (info, pay) = intro();
        let h = h_set(0.1, &info, &pay, Alpha).unwrap();
        let partner = reciprocal_partner(h.lower().unwrap(), &info, &pay, Alpha).unwrap();
        match partner {
            ReciprocalPartner::Distinct(q) => assert!((q - h.upper().unwrap()).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        let back = reciprocal_partner(h.upper().unwrap(), &info, &pay, Alpha).unwrap();
        assert!((back.prior() - h.lower().unwrap()).abs() < 1e-9);

        assert_eq!(
            reciprocal_partner(0.4, &info, &pay, Alpha).unwrap(),
            ReciprocalPartner::FixedPoint(0.4)
        );
        assert!(matches!(
            reciprocal_partner(0.9, &info, &pay, Alpha),
            Err(ModelError::OutsideNonExtreme { .. })
        ));
    }

    #[test]
    fn classify_pair_examples() {
        let (info, pay) = intro();
        let pc = classify_pair(0.3, 0.7, 0.1, &info, &pay).unwrap();
        assert!(pc.in_b_ij_alpha);
        assert!(pc.in_b_ji_beta);
        assert!(!pc.in_b_ji_alpha && !pc.in_b_ij_beta);
        assert!(pc.in_v_ij_alpha && pc.in_v_ji_beta);

        assert_eq!(classify_pair(0.4, 0.4, 0.1, &info, &pay).unwrap(), PairClass::default());
        assert!(classify_pair(0.7, 0.3, 0.1, &info, &pay).is_err());

        let expensive = classify_pair(0.3, 0.7, 0.31, &info, &pay).unwrap();
        assert!(!expensive.in_b_ij_alpha && !expensive.in_b_ji_beta);
        assert!(!expensive.in_b_ji_alpha && !expensive.in_b_ij_beta);
    }

    #[test]
    fn lemma1_examples() {
        let (info, pay) = intro();
        let h = h_set(0.1, &info, &pay, Alpha).unwrap();
        let r = lemma1_check(h.lower().unwrap(), h.upper().unwrap(), &info, &pay, 1e-9).unwrap();
        assert_eq!(r.reciprocal_for, Some(Alpha));
        assert!((r.wtp_beta.0 - r.wtp_beta.1).abs() > 1e-3);
        assert!(r.holds);

        let r = lemma1_check(0.3, 0.7, &info, &pay, 1e-9).unwrap();
        assert_eq!(r.reciprocal_for, None);
        assert!((r.wtp_alpha.0 - 0.1913).abs() < 5e-3 && (r.wtp_alpha.1 - 0.0222).abs() < 5e-3);

        assert!(lemma1_check(0.3, 0.3, &info, &pay, 1e-9).is_err());
    }

    #[test]
    fn union_and_complement() {
        let a = ProbabilityInterval::open(0.1, 0.4);
        let b = ProbabilityInterval::open(0.3, 0.6);
        let c = ProbabilityInterval::closed(0.6, 0.7);
        let u = union(&[b, a, c]);
        assert_eq!(u, vec![ProbabilityInterval::new(0.1, 0.7, Openness::LeftOpen)]);
        let comp = complement(&u);
        assert_eq!(
            comp,
            vec![
                ProbabilityInterval::closed(0.0, 0.1),
                ProbabilityInterval::new(0.7, 1.0, Openness::LeftOpen)
            ]
        );
        // open endpoints meeting at a point leave that point out
        let split = union(&[ProbabilityInterval::open(0.1, 0.5), ProbabilityInterval::open(0.5, 0.9)]);
        assert_eq!(split.len(), 2);
    }
}
