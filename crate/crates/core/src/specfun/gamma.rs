//! Gamma function and its logarithm.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// zeta(k) for k = 2..=30
const ZETA: [f64; 29] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_37,
    1.017_343_061_984_449,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_926,
    1.000_000_059_608_189,
    1.000_000_029_803_503_5,
    1.000_000_014_901_554_8,
    1.000_000_007_450_711_8,
    1.000_000_003_725_334,
    1.000_000_001_862_659_7,
    1.000_000_000_931_327_4,
];

// B_{2k} / (2k (2k-1)) for k = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(1 + d) for |d| ≤ 0.25.
fn ln_gamma_1p_small(d: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = -d;
    for (i, z) in ZETA.iter().enumerate() {
        let k = (i + 2) as f64;
        pow *= -d;
        let term = z * pow / k;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA * d + sum
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut p = inv;
    for c in STIRLING {
        corr += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + corr
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        if x == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        return Err(Error::Domain {
            function: "ln_gamma",
            reason: format!("requires x > 0, got {x}"),
        });
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x.fract() == 0.0 && x <= 30.0 {
        let mut f = 1.0f64;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return f.ln();
    }
    if (x - 1.0).abs() <= 0.25 {
        return ln_gamma_1p_small(x - 1.0);
    }
    if (x - 2.0).abs() <= 0.25 {
        let d = x - 2.0;
        return d.ln_1p() + ln_gamma_1p_small(d);
    }
    if x >= 10.0 {
        return stirling(x);
    }
    let mut s = x;
    let mut prod = 1.0;
    while s < 10.0 {
        prod *= s;
        s += 1.0;
    }
    stirling(s) - prod.ln()
}

/// ln|Γ(x)| together with the sign of Γ(x), for any x that is not a pole.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        return Ok((ln_gamma_pos(x), 1.0));
    }
    if x.fract() == 0.0 || !x.is_finite() {
        return Err(Error::Pole {
            function: "ln_gamma",
            at: x,
        });
    }
    // Γ(x) Γ(1-x) = π / sin(πx)
    let s = sin_pi(x);
    let lg = ln_gamma_pos(1.0 - x);
    Ok(((PI / s.abs()).ln() - lg, s.signum()))
}

/// Γ(x), with poles at the non-positive integers.
pub fn gamma(x: f64) -> Result<f64> {
    if x <= 0.0 && x.fract() == 0.0 {
        return Err(Error::Pole {
            function: "gamma",
            at: x,
        });
    }
    if x.is_nan() {
        return Err(Error::Domain {
            function: "gamma",
            reason: "NaN argument".into(),
        });
    }
    if x < 0.5 {
        let g = gamma(1.0 - x)?;
        return Ok(PI / (sin_pi(x) * g));
    }
    if x.fract() == 0.0 && x <= 23.0 {
        let mut f = 1.0f64;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return Ok(f);
    }
    if x > 171.7 {
        return Err(Error::Overflow { function: "gamma" });
    }
    if x > 20.0 {
        return Ok(ln_gamma_pos(x).exp());
    }
    let y = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (y + i as f64);
    }
    let t = y + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powf(y + 0.5) * (-t).exp() * acc)
}

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r.fract() == 0.0 {
        return 0.0;
    }
    if r < 0.5 {
        (PI * r).sin()
    } else if r < 1.5 {
        (PI * (1.0 - r)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    }
}
