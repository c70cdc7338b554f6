//! Modified Bessel functions of the first and second kind for real order and
//! positive real argument.
//!
//! K_ν is computed by one of three routes:
//!
//! * the connection formula (π/2)(I₋ν − I_ν)/sin(νπ), accurate while the two
//!   I functions do not cancel;
//! * Steed's continued fraction for K_μ, K_{μ+1} with |μ| ≤ 1/2 followed by
//!   upward recurrence in the order;
//! * the large-argument asymptotic expansion.
//!
//! [`bessel_k`] picks the route; each route is also public so the three can be
//! compared where they overlap.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::gamma::{gamma, ln_gamma_signed, sin_pi};
use super::series::{pfq, Scaled, SeriesPolicy, CANCELLATION_LIMIT};
use crate::error::{Error, Result};

/// Arguments at or above this value use the asymptotic expansion.
pub const ASYMPTOTIC_THRESHOLD: f64 = 25.0;
/// Cancellation beyond which the connection formula reports a precision error.
pub const SERIES_LOSS_LIMIT: f64 = 1e6;

const STEED_MAX_ITER: usize = 200_000;

fn check_argument(function: &'static str, nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() {
        return Err(Error::Domain {
            function,
            reason: format!("order must be finite, got {nu}"),
        });
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function,
            reason: format!("argument must be positive and finite, got {x}"),
        });
    }
    Ok(())
}

fn check_k_order(nu: f64) -> Result<f64> {
    let nu = nu.abs();
    if nu.fract() == 0.0 {
        return Err(Error::IntegerOrder { order: nu });
    }
    Ok(nu)
}

/// (x/2)^ν / Γ(ν + 1) as a scaled real number.
fn i_prefactor(nu: f64, x: f64) -> Result<Scaled> {
    if nu.abs() < 150.0 {
        let direct = (0.5 * x).powf(nu) / gamma(nu + 1.0)?;
        if direct.is_finite() && direct.abs() > 1e-280 && direct.abs() < 1e280 {
            return Ok(Scaled::new(C64::new(direct, 0.0), 0.0));
        }
    }
    let (lg, sign) = ln_gamma_signed(nu + 1.0)?;
    Ok(Scaled::new(C64::new(sign, 0.0), nu * (0.5 * x).ln() - lg))
}

fn bessel_i_parts(nu: f64, x: f64, policy: &SeriesPolicy) -> Result<Scaled> {
    let nu = if nu < 0.0 && nu.fract() == 0.0 {
        -nu
    } else {
        nu
    };
    let pre = i_prefactor(nu, x)?;
    let s = pfq(
        &[],
        &[C64::new(nu + 1.0, 0.0)],
        C64::new(0.25 * x * x, 0.0),
        policy,
        "bessel_i",
    )?;
    Ok(pre.mul(&s.value))
}

/// I_ν(x) for real ν and x > 0.
pub fn bessel_i(nu: f64, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    check_argument("bessel_i", nu, x)?;
    Ok(bessel_i_parts(nu, x, policy)?.value("bessel_i")?.re)
}

/// ln I_ν(x); requires I_ν(x) > 0.
pub fn ln_bessel_i(nu: f64, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    check_argument("ln_bessel_i", nu, x)?;
    let s = bessel_i_parts(nu, x, policy)?;
    if !(s.mantissa.re > 0.0) {
        return Err(Error::Domain {
            function: "ln_bessel_i",
            reason: "I_nu(x) is not positive".into(),
        });
    }
    Ok(s.ln_abs())
}

/// Connection-formula value and its cancellation factor.
fn k_series_scaled(nu: f64, x: f64, policy: &SeriesPolicy) -> Result<(Scaled, f64)> {
    let i_minus = bessel_i_parts(-nu, x, policy)?;
    let i_plus = bessel_i_parts(nu, x, policy)?;
    let ln_ref = i_minus.ln_abs().max(i_plus.ln_abs());
    let m = i_minus.mantissa.re * (i_minus.ln_scale - ln_ref).exp();
    let p = i_plus.mantissa.re * (i_plus.ln_scale - ln_ref).exp();
    let diff = m - p;
    let loss = m.abs().max(p.abs()) / diff.abs();
    let factor = 0.5 * PI / sin_pi(nu);
    Ok((Scaled::new(C64::new(factor * diff, 0.0), ln_ref), loss))
}

/// K_ν(x) from (π/2)(I₋ν(x) − I_ν(x))/sin(νπ).
///
/// Fails with a precision error when the subtraction cancels by more than
/// [`SERIES_LOSS_LIMIT`].
pub fn bessel_k_series(nu: f64, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    check_argument("bessel_k_series", nu, x)?;
    let nu = check_k_order(nu)?;
    let (v, loss) = k_series_scaled(nu, x, policy)?;
    if loss > SERIES_LOSS_LIMIT {
        return Err(Error::Precision {
            function: "bessel_k_series",
            loss,
        });
    }
    Ok(v.value("bessel_k_series")?.re)
}

fn k_asymptotic_scaled(nu: f64, x: f64, policy: &SeriesPolicy) -> Result<Scaled> {
    let mu4 = 4.0 * nu * nu;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut max_term = 1.0f64;
    let mut k = 1usize;
    loop {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu4 - odd * odd) / (8.0 * k as f64 * x);
        if next == 0.0 {
            break;
        }
        if next.abs() > term.abs() && (k as f64) > nu + 1.0 {
            return Err(Error::NonConvergence {
                function: "bessel_k_asymptotic",
                terms: k,
            });
        }
        term = next;
        sum += term;
        max_term = max_term.max(term.abs());
        if term.abs() <= policy.rel_tol * sum.abs() {
            break;
        }
        k += 1;
        if k > policy.max_terms {
            return Err(Error::NonConvergence {
                function: "bessel_k_asymptotic",
                terms: k,
            });
        }
    }
    let loss = max_term / sum.abs();
    if loss > CANCELLATION_LIMIT {
        return Err(Error::Precision {
            function: "bessel_k_asymptotic",
            loss,
        });
    }
    Ok(Scaled::new(C64::new((0.5 * PI / x).sqrt() * sum, 0.0), -x))
}

/// K_ν(x) from its large-argument asymptotic expansion.
///
/// Terms are summed until they drop below the policy tolerance; divergence
/// of the expansion before that point is a convergence error.
pub fn bessel_k_asymptotic(nu: f64, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    check_argument("bessel_k_asymptotic", nu, x)?;
    policy.validate()?;
    k_asymptotic_scaled(nu.abs(), x, policy)?
        .value("bessel_k_asymptotic")
        .map(|v| v.re)
}

fn k_steed_scaled(nu: f64, x: f64) -> Result<Scaled> {
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 1..STEED_MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            function: "bessel_k_continued_fraction",
            terms: STEED_MAX_ITER,
        });
    }
    h *= a1;
    let mut k_mu = (0.5 * PI / x).sqrt() / s;
    let mut k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
    let mut ln_scale = -x;
    let guard = 1e250;
    for i in 1..=(nl as usize) {
        let next = (mu + i as f64) * (2.0 / x) * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
        if k_mu1 > guard {
            k_mu /= guard;
            k_mu1 /= guard;
            ln_scale += guard.ln();
        }
    }
    Ok(Scaled::new(C64::new(k_mu, 0.0), ln_scale))
}

/// K_ν(x) from Steed's continued fraction and upward recurrence in the order.
///
/// The fraction converges quickly for x ≳ 1 and not at all for small x,
/// where it reports non-convergence.
pub fn bessel_k_continued_fraction(nu: f64, x: f64) -> Result<f64> {
    check_argument("bessel_k_continued_fraction", nu, x)?;
    let nu = check_k_order(nu)?;
    k_steed_scaled(nu, x)?
        .value("bessel_k_continued_fraction")
        .map(|v| v.re)
}

fn k_scaled(nu: f64, x: f64, policy: &SeriesPolicy) -> Result<Scaled> {
    policy.validate()?;
    let nu = check_k_order(nu)?;
    if x >= ASYMPTOTIC_THRESHOLD {
        if let Ok(v) = k_asymptotic_scaled(nu, x, policy) {
            return Ok(v);
        }
        return k_steed_scaled(nu, x);
    }
    let (v, loss) = k_series_scaled(nu, x, policy)?;
    if loss <= CANCELLATION_LIMIT {
        return Ok(v);
    }
    match k_steed_scaled(nu, x) {
        Ok(s) => Ok(s),
        Err(_) if loss <= SERIES_LOSS_LIMIT => Ok(v),
        Err(_) => Err(Error::Precision {
            function: "bessel_k",
            loss,
        }),
    }
}

/// K_ν(x) for non-integer real ν and x > 0.
pub fn bessel_k(nu: f64, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    check_argument("bessel_k", nu, x)?;
    Ok(k_scaled(nu, x, policy)?.value("bessel_k")?.re)
}

/// ln K_ν(x); finite even where K_ν(x) itself over- or underflows.
pub fn ln_bessel_k(nu: f64, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    check_argument("ln_bessel_k", nu, x)?;
    Ok(k_scaled(nu, x, policy)?.ln_abs())
}
