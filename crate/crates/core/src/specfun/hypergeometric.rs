//! The confluent hypergeometric functions used by the model.

use num_complex::Complex64 as C64;

use super::series::{pfq, Scaled, SeriesPolicy};
use crate::error::{Error, Result};

fn check_finite(function: &'static str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            reason: "non-finite parameter".into(),
        })
    }
}

/// ₀F₁(; b; x) in log-scaled form.
pub fn hyp0f1_scaled(b: f64, x: C64, policy: &SeriesPolicy) -> Result<Scaled> {
    check_finite("hyp0f1", &[b])?;
    Ok(pfq(&[], &[C64::new(b, 0.0)], x, policy, "hyp0f1")?.value)
}

/// ₀F₁(; b; x).
pub fn hyp0f1(b: f64, x: C64, policy: &SeriesPolicy) -> Result<C64> {
    hyp0f1_scaled(b, x, policy)?.value("hyp0f1")
}

/// ₀F₃(; b₁, b₂, b₃; x) in log-scaled form.
pub fn hyp0f3_scaled(b: [f64; 3], x: C64, policy: &SeriesPolicy) -> Result<Scaled> {
    check_finite("hyp0f3", &b)?;
    let denom = b.map(|v| C64::new(v, 0.0));
    Ok(pfq(&[], &denom, x, policy, "hyp0f3")?.value)
}

/// ₀F₃(; b₁, b₂, b₃; x).
pub fn hyp0f3(b: [f64; 3], x: C64, policy: &SeriesPolicy) -> Result<C64> {
    hyp0f3_scaled(b, x, policy)?.value("hyp0f3")
}

/// Kummer's function M(a, b, z) = ₁F₁(a; b; z) in log-scaled form.
///
/// For Re z < 0 the series is summed on the transformed side
/// e^z M(b - a, b, -z), whose terms do not alternate in sign.
pub fn hyp1f1_scaled(a: C64, b: f64, z: C64, policy: &SeriesPolicy) -> Result<Scaled> {
    check_finite("hyp1f1", &[a.re, a.im, b])?;
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::Pole {
            function: "hyp1f1",
            at: b,
        });
    }
    let bc = C64::new(b, 0.0);
    let terminating = a.im == 0.0 && a.re <= 0.0 && a.re.fract() == 0.0;
    if z.re >= 0.0 || terminating {
        return Ok(pfq(&[a], &[bc], z, policy, "hyp1f1")?.value);
    }
    let s = pfq(&[bc - a], &[bc], -z, policy, "hyp1f1")?.value;
    let phase = C64::from_polar(1.0, z.im);
    Ok(Scaled::new(s.mantissa * phase, s.ln_scale + z.re))
}

/// M(a, b, z) summed on the given side regardless of sign of Re z; the
/// series falls back to extended precision when its terms cancel.
pub fn hyp1f1_direct(a: C64, b: f64, z: C64, policy: &SeriesPolicy) -> Result<C64> {
    check_finite("hyp1f1", &[a.re, a.im, b])?;
    pfq(&[a], &[C64::new(b, 0.0)], z, policy, "hyp1f1")?
        .value
        .value("hyp1f1")
}

/// Kummer's function M(a, b, z) = ₁F₁(a; b; z).
pub fn hyp1f1(a: C64, b: f64, z: C64, policy: &SeriesPolicy) -> Result<C64> {
    hyp1f1_scaled(a, b, z, policy)?.value("hyp1f1")
}
