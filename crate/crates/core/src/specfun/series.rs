//! Generalized hypergeometric series with log-scaled accumulation.
//!
//! Every series is summed once in double precision. When the largest term
//! exceeds the final sum by more than [`CANCELLATION_LIMIT`] the series is
//! summed again with a 192-bit significand.

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::mp::{real, MpComplex};

/// Largest term-to-sum ratio accepted from the double precision pass.
pub const CANCELLATION_LIMIT: f64 = 1e3;
/// Largest term-to-sum ratio accepted from the extended precision pass.
const EXTENDED_CANCELLATION_LIMIT: f64 = 1e40;
const EXTENDED_PRECISION: usize = 192;

/// Stopping and scaling controls for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    /// Relative tolerance for the truncated tail.
    pub rel_tol: f64,
    /// Maximum number of terms before a convergence error.
    pub max_terms: usize,
    /// Magnitude at which partial sums are rescaled.
    pub overflow_guard: f64,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-17,
            max_terms: 20_000,
            overflow_guard: 1e250,
        }
    }
}

impl SeriesPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-6) {
            return Err(invalid("rel_tol", "must lie in (0, 1e-6]"));
        }
        if self.max_terms < 64 {
            return Err(invalid("max_terms", "must be at least 64"));
        }
        if !(self.overflow_guard > 1e10 && self.overflow_guard.is_finite()) {
            return Err(invalid(
                "overflow_guard",
                "must be a finite number above 1e10",
            ));
        }
        Ok(())
    }
}

/// A complex number stored as `mantissa * exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: C64,
    pub ln_scale: f64,
}

impl Scaled {
    pub fn new(mantissa: C64, ln_scale: f64) -> Self {
        Self { mantissa, ln_scale }
    }

    /// The value as an ordinary complex number.
    pub fn value(&self, function: &'static str) -> Result<C64> {
        let f = self.ln_scale.exp();
        let v = self.mantissa * f;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow { function })
        }
    }

    /// ln |value|.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.norm().ln() + self.ln_scale
    }

    pub fn mul(&self, other: &Scaled) -> Scaled {
        Scaled::new(
            self.mantissa * other.mantissa,
            self.ln_scale + other.ln_scale,
        )
        .normalized()
    }

    fn normalized(self) -> Scaled {
        let m = self.mantissa.norm();
        if m == 0.0 || !m.is_finite() {
            return self;
        }
        let e = m.ln().round();
        Scaled::new(self.mantissa * (-e).exp(), self.ln_scale + e)
    }
}

/// Outcome of summing a series.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub value: Scaled,
    /// ln of the largest |term| in the same units as `value`.
    pub ln_max_term: f64,
}

impl SeriesSum {
    pub fn cancellation(&self) -> f64 {
        (self.ln_max_term - self.value.ln_abs()).exp()
    }
}

trait Field: Clone {
    fn from_c64(z: C64) -> Self;
    fn from_index(n: usize) -> Self;
    fn to_c64(&self) -> C64;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn scale(&self, f: f64) -> Self;
    fn abs(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Field for C64 {
    fn from_c64(z: C64) -> Self {
        z
    }
    fn from_index(n: usize) -> Self {
        C64::new(n as f64, 0.0)
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn scale(&self, f: f64) -> Self {
        self * f
    }
}

impl Field for MpComplex {
    fn from_c64(z: C64) -> Self {
        MpComplex::new(z, EXTENDED_PRECISION)
    }
    fn from_index(n: usize) -> Self {
        MpComplex::new(C64::new(n as f64, 0.0), EXTENDED_PRECISION)
    }
    fn to_c64(&self) -> C64 {
        MpComplex::to_c64(self)
    }
    fn add(&self, o: &Self) -> Self {
        MpComplex::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        MpComplex::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        MpComplex::div(self, o)
    }
    fn scale(&self, f: f64) -> Self {
        self.mul_real(&real(f, EXTENDED_PRECISION))
    }
}

fn sum_pfq<S: Field>(
    numer: &[C64],
    denom: &[C64],
    x: C64,
    settle: usize,
    policy: &SeriesPolicy,
    function: &'static str,
) -> Result<SeriesSum> {
    let a: Vec<S> = numer.iter().map(|&v| S::from_c64(v)).collect();
    let b: Vec<S> = denom.iter().map(|&v| S::from_c64(v)).collect();
    let xs = S::from_c64(x);
    let mut term = S::from_index(1);
    let mut sum = term.clone();
    let mut ln_scale = 0.0;
    let mut ln_max = 0.0f64;
    let guard = policy.overflow_guard;
    let ln_guard = guard.ln();
    for n in 0..policy.max_terms {
        let ns = S::from_index(n);
        let mut num = xs.clone();
        for ai in &a {
            num = num.mul(&ai.add(&ns));
        }
        let mut den = S::from_index(n + 1);
        for bi in &b {
            den = den.mul(&bi.add(&ns));
        }
        let ratio = num.div(&den);
        let r = ratio.abs();
        let t = term.abs();
        if t == 0.0 || (n >= settle && r < 1.0 && t * r / (1.0 - r) <= policy.rel_tol * sum.abs()) {
            return Ok(SeriesSum {
                value: Scaled::new(sum.to_c64(), ln_scale),
                ln_max_term: ln_max,
            });
        }
        term = term.mul(&ratio);
        sum = sum.add(&term);
        let ta = term.abs();
        if !ta.is_finite() {
            return Err(Error::Overflow { function });
        }
        if ta > 0.0 {
            ln_max = ln_max.max(ta.ln() + ln_scale);
        }
        if ta > guard || sum.abs() > guard {
            term = term.scale(1.0 / guard);
            sum = sum.scale(1.0 / guard);
            ln_scale += ln_guard;
        }
    }
    Err(Error::NonConvergence {
        function,
        terms: policy.max_terms,
    })
}

/// Sum of `pFq(numer; denom; x)` with automatic precision escalation.
pub(crate) fn pfq(
    numer: &[C64],
    denom: &[C64],
    x: C64,
    policy: &SeriesPolicy,
    function: &'static str,
) -> Result<SeriesSum> {
    policy.validate()?;
    if !(x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::Domain {
            function,
            reason: "non-finite argument".into(),
        });
    }
    let mut settle = 0usize;
    for b in denom {
        if b.im == 0.0 && b.re <= 0.0 && b.re.fract() == 0.0 {
            return Err(Error::Pole { function, at: b.re });
        }
        if b.re < 0.0 {
            settle = settle.max((-b.re).ceil() as usize + 1);
        }
    }
    for a in numer {
        if a.re < 0.0 {
            settle = settle.max((-a.re).ceil() as usize + 1);
        }
    }
    let first = sum_pfq::<C64>(numer, denom, x, settle, policy, function)?;
    let loss = first.cancellation();
    if loss <= CANCELLATION_LIMIT {
        return Ok(first);
    }
    let second = sum_pfq::<MpComplex>(numer, denom, x, settle, policy, function)?;
    let loss = second.cancellation();
    if loss > EXTENDED_CANCELLATION_LIMIT {
        return Err(Error::Precision { function, loss });
    }
    Ok(second)
}
