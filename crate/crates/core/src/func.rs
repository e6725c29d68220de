//! Evaluable real functions on intervals.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An interval of the real line; infinite ends are `±∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Domain {
    pub fn open(lo: f64, hi: f64) -> Self {
        Domain { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Domain { lo, hi, lo_closed: lo.is_finite(), hi_closed: hi.is_finite() }
    }

    pub fn real_line() -> Self {
        Domain::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    /// `(0, ∞)`
    pub fn positive() -> Self {
        Domain::open(0.0, f64::INFINITY)
    }

    /// `[0, ∞)`
    pub fn nonnegative() -> Self {
        Domain { lo: 0.0, hi: f64::INFINITY, lo_closed: true, hi_closed: false }
    }

    pub fn contains(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain { x, domain: self.to_string() })
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type Deriv = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// A real function on a [`Domain`], optionally with closed-form derivatives
/// `f^{(k)}` for `k ≤ max_order`.
#[derive(Clone)]
pub struct FuncHandle {
    name: String,
    domain: Domain,
    eval: Eval,
    deriv: Option<(usize, Deriv)>,
}

impl fmt::Debug for FuncHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FuncHandle")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("max_order", &self.max_order())
            .finish()
    }
}

impl FuncHandle {
    pub fn new<F>(name: impl Into<String>, domain: Domain, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        FuncHandle { name: name.into(), domain, eval: Arc::new(eval), deriv: None }
    }

    /// Attaches closed-form derivatives. `deriv(0, t)` is never called; order
    /// zero always goes through `eval`.
    pub fn with_derivatives<D>(mut self, max_order: usize, deriv: D) -> Self
    where
        D: Fn(usize, f64) -> f64 + Send + Sync + 'static,
    {
        self.deriv = Some((max_order, Arc::new(deriv)));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Highest analytic derivative order, if any.
    pub fn max_order(&self) -> Option<usize> {
        self.deriv.as_ref().map(|(k, _)| *k)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    /// Evaluates without a domain check.
    pub fn value(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// Evaluates after checking the domain.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.domain.check(t)?;
        Ok((self.eval)(t))
    }

    /// Closed-form derivative if available for order `k`.
    pub fn analytic(&self, k: usize, t: f64) -> Option<f64> {
        if k == 0 {
            return Some((self.eval)(t));
        }
        match &self.deriv {
            Some((max, d)) if k <= *max => Some(d(k, t)),
            _ => None,
        }
    }

    /// `f^{(shift)}` as a function, keeping the remaining analytic orders.
    pub fn derived(&self, shift: usize) -> Option<FuncHandle> {
        if shift == 0 {
            return Some(self.clone());
        }
        let (max, d) = self.deriv.clone()?;
        if shift > max {
            return None;
        }
        let d0 = d.clone();
        let mut h = FuncHandle::new(format!("{}^({shift})", self.name), self.domain, move |t| d0(shift, t));
        if max > shift {
            h = h.with_derivatives(max - shift, move |k, t| d(k + shift, t));
        }
        Some(h)
    }

    /// `t ↦ g(f(t))` with no analytic derivatives.
    pub fn map<G>(&self, name: impl Into<String>, g: G) -> FuncHandle
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let f = self.eval.clone();
        FuncHandle::new(name, self.domain, move |t| g(f(t)))
    }
}
