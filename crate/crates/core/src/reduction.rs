//! The blowup reduction on pairs of vanishing-order vectors.
//!
//! A pair `(lambda, mu)` records, coordinate by coordinate, the orders of
//! the field sections along a horizontal divisor and along one component of
//! the special fiber.  Both vectors are normalized to minimum 0.  The
//! invariant `delta = min over {lambda_i = 0} of mu_i + min over
//! {mu_i = 0} of lambda_i` measures how far the pair is from having a
//! common zero-free coordinate; one blowup replaces `mu` by
//! `lambda + mu - min(lambda + mu)` and strictly decreases `delta`, so the
//! normal form is reached in at most `delta` steps.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionPair {
    lambda: Vec<i64>,
    mu: Vec<i64>,
}

impl ReductionPair {
    /// Both vectors must be nonempty, of equal length, non-negative, and
    /// contain a zero entry.
    pub fn new(lambda: Vec<i64>, mu: Vec<i64>) -> Result<Self> {
        if lambda.is_empty() || lambda.len() != mu.len() {
            return Err(Error::invalid(
                "order vectors must be nonempty and of equal length",
            ));
        }
        for v in [&lambda, &mu] {
            if v.iter().any(|&x| x < 0) {
                return Err(Error::invalid("orders must be non-negative"));
            }
            if v.iter().min() != Some(&0) {
                return Err(Error::NotNormalized);
            }
        }
        Ok(ReductionPair { lambda, mu })
    }

    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }

    pub fn mu(&self) -> &[i64] {
        &self.mu
    }

    /// `min_{lambda_i = 0} mu_i + min_{mu_i = 0} lambda_i`; zero exactly
    /// when some coordinate has `lambda_i = mu_i = 0`.
    pub fn delta(&self) -> i64 {
        let first = self
            .lambda
            .iter()
            .zip(&self.mu)
            .filter(|(&l, _)| l == 0)
            .map(|(_, &m)| m)
            .min()
            .expect("normalized: lambda has a zero");
        let second = self
            .lambda
            .iter()
            .zip(&self.mu)
            .filter(|(_, &m)| m == 0)
            .map(|(&l, _)| l)
            .min()
            .expect("normalized: mu has a zero");
        first + second
    }
}

/// One blowup at the intersection point: `lambda` is carried along the
/// proper transform unchanged while `mu` is replaced by the orders along
/// the exceptional component, `mu'_i = lambda_i + mu_i - min(lambda + mu)`.
pub fn blowup_step(p: &ReductionPair) -> Result<ReductionPair> {
    if p.delta() == 0 {
        return Err(Error::DeltaZero);
    }
    let m = p
        .lambda
        .iter()
        .zip(&p.mu)
        .map(|(&l, &u)| l + u)
        .min()
        .expect("nonempty");
    let mu = p
        .lambda
        .iter()
        .zip(&p.mu)
        .map(|(&l, &u)| l + u - m)
        .collect();
    ReductionPair::new(p.lambda.clone(), mu)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    /// Successive pairs, starting with the input.
    pub states: Vec<ReductionPair>,
    /// `delta` of each state; strictly decreasing, ending in 0.
    pub deltas: Vec<i64>,
}

impl ReductionTrace {
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn final_pair(&self) -> &ReductionPair {
        self.states.last().expect("states nonempty")
    }
}

/// Iterates `blowup_step` until `delta` reaches 0.
pub fn reduce(p: ReductionPair) -> ReductionTrace {
    let mut states = vec![p];
    let mut deltas = vec![states[0].delta()];
    while *deltas.last().expect("nonempty") > 0 {
        let next = blowup_step(states.last().expect("nonempty"))
            .expect("delta > 0 was just checked");
        deltas.push(next.delta());
        states.push(next);
    }
    ReductionTrace { states, deltas }
}

/// Builds a normalized pair from raw divisor orders: `lambda` is the
/// charge-shifted horizontal order vector re-normalized to minimum 0, while
/// `mu` must already have a zero entry (no component of the fiber lies in
/// the common zero locus).
pub fn pair_from_orders(
    ord_d1: &[i64],
    ord_c: &[i64],
    charges: Option<&[i64]>,
) -> Result<ReductionPair> {
    if ord_d1.is_empty() || ord_d1.len() != ord_c.len() {
        return Err(Error::invalid(
            "order vectors must be nonempty and of equal length",
        ));
    }
    if let Some(c) = charges {
        if c.len() != ord_d1.len() {
            return Err(Error::invalid("charge vector length mismatch"));
        }
    }
    if ord_d1.iter().chain(ord_c).any(|&x| x < 0) {
        return Err(Error::invalid("orders must be non-negative"));
    }
    if ord_c.iter().min() != Some(&0) {
        return Err(Error::BadMu);
    }
    let shifted: Vec<i64> = match charges {
        Some(c) => ord_d1.iter().zip(c).map(|(&o, &ci)| o + ci).collect(),
        None => ord_d1.to_vec(),
    };
    let min = *shifted.iter().min().expect("nonempty");
    let lambda = shifted.iter().map(|&x| x - min).collect();
    ReductionPair::new(lambda, ord_c.to_vec())
}
