use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tolerance for the exponent relations.
const RELATION_TOL: f64 = 1e-12;

/// Exponent bundle of the fractional operators and their commutators.
///
/// Only `alpha` is mandatory; each relation is enforced once the fields it
/// involves are present.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct OperatorParams<T: Real> {
    pub alpha: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p2: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q1: Option<T>,
    #[serde(default, rename = "lambda", skip_serializing_if = "Option::is_none")]
    pub lambda_c: Option<T>,
}

impl<T: Real> OperatorParams<T> {
    pub fn with_alpha(alpha: T) -> Self {
        Self { alpha, ..Default::default() }
    }

    /// `alpha`, `p` and the Sobolev exponent `q` with `1/q = 1/p - alpha/dim`.
    pub fn sobolev(alpha: T, p: T, dim: usize) -> Self {
        let q = (p.recip() - alpha / T::from_usize_lossy(dim)).recip();
        Self { alpha, p: Some(p), q: Some(q), ..Default::default() }
    }

    /// Requires `0 < alpha < dim`, then checks every relation that applies.
    pub fn validate_fractional(&self, dim: usize) -> Result<()> {
        let n = T::from_usize_lossy(dim);
        if !(self.alpha > T::zero() && self.alpha < n) {
            return Err(Error::BadAlpha(format!("need 0 < alpha < {dim}, got {}", self.alpha)));
        }
        self.check_relations(dim)
    }

    /// Maximal operators also accept `alpha = 0`.
    pub fn validate_maximal(&self, dim: usize) -> Result<()> {
        let n = T::from_usize_lossy(dim);
        if !(self.alpha >= T::zero() && self.alpha < n) {
            return Err(Error::BadAlpha(format!("need 0 <= alpha < {dim}, got {}", self.alpha)));
        }
        self.check_relations(dim)
    }

    fn check_relations(&self, dim: usize) -> Result<()> {
        let n = T::from_usize_lossy(dim);
        let tol = T::lit(RELATION_TOL);
        let close = |a: T, b: T| (a - b).abs() <= tol * (T::one() + a.abs().max(b.abs()));
        if let Some(p) = self.p {
            if !(p >= T::one()) || (self.alpha > T::zero() && !(p < n / self.alpha)) {
                return Err(Error::BadExponent(format!("need 1 <= p < dim/alpha, got p = {p}")));
            }
            if let Some(q) = self.q {
                if !close(q.recip(), p.recip() - self.alpha / n) {
                    return Err(Error::BadExponent(format!("1/q = 1/p - alpha/dim fails for p = {p}, q = {q}")));
                }
            }
            if let (Some(p1), Some(p2)) = (self.p1, self.p2) {
                if !(p1 > T::one() && p2 > T::one()) || !close(p.recip(), p1.recip() + p2.recip()) {
                    return Err(Error::BadExponent(format!("1/p = 1/p1 + 1/p2 fails for ({p}, {p1}, {p2})")));
                }
            }
        }
        if let (Some(p1), Some(q1)) = (self.p1, self.q1) {
            if !close(q1.recip(), p1.recip() - self.alpha / n) {
                return Err(Error::BadExponent(format!("1/q1 = 1/p1 - alpha/dim fails for ({p1}, {q1})")));
            }
        }
        if let Some(s) = self.s {
            if !(s > T::one()) {
                return Err(Error::BadExponent(format!("kernel exponent must satisfy s > 1, got {s}")));
            }
        }
        if let Some(l) = self.lambda_c {
            if !(l >= T::zero() && l < n.recip()) {
                return Err(Error::BadLambda(format!("need 0 <= lambda < 1/{dim}, got {l}")));
            }
        }
        Ok(())
    }

    /// Rough-kernel admissibility `s' <= p` or `q < s`, when `p`, `q`, `s` are set.
    pub fn admissible(&self) -> Option<bool> {
        let (p, q, s) = (self.p?, self.q?, self.s?);
        let s_dual = if s.is_infinite() { T::one() } else { s / (s - T::one()) };
        Some(s_dual <= p || q < s)
    }

    pub fn require_p(&self) -> Result<T> {
        self.p.ok_or_else(|| Error::BadExponent("parameter p is required".into()))
    }

    pub fn require_q(&self) -> Result<T> {
        self.q.ok_or_else(|| Error::BadExponent("parameter q is required".into()))
    }

    pub fn lambda_or_zero(&self) -> T {
        self.lambda_c.unwrap_or_else(T::zero)
    }
}
