//! Special functions: Gamma, generalized hypergeometric series and modified
//! Bessel functions.

mod bessel;
mod gamma;
mod hypergeometric;
mod series;

pub use bessel::{
    bessel_i, bessel_k, bessel_k_asymptotic, bessel_k_continued_fraction, bessel_k_series,
    ln_bessel_i, ln_bessel_k, ASYMPTOTIC_THRESHOLD, SERIES_LOSS_LIMIT,
};
pub use gamma::{gamma, ln_gamma, ln_gamma_signed, sin_pi};
pub use hypergeometric::{
    hyp0f1, hyp0f1_scaled, hyp0f3, hyp0f3_scaled, hyp1f1, hyp1f1_direct, hyp1f1_scaled,
};
pub use series::{Scaled, SeriesPolicy, CANCELLATION_LIMIT};
