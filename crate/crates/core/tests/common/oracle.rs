//! Reference implementations used only by the tests. None of them share code
//! with the library: series are summed term by term without early stopping,
//! in exact rationals or 320-bit binary floats, and K_ν comes from its
//! integral representation.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_bigint::{BigInt, Sign};
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;

pub type Mp = FBig<HalfEven, 2>;
pub const PREC: usize = 320;

pub fn mp(x: f64) -> Mp {
    Mp::try_from(x).unwrap().with_precision(PREC).value()
}

pub fn mp_to_f64(x: &Mp) -> f64 {
    x.to_f64().value()
}

fn mp_from_bigint(n: &BigInt) -> Mp {
    let (sign, digits) = n.to_u32_digits();
    let base = mp(4294967296.0);
    let mut acc = mp(0.0);
    for d in digits.iter().rev() {
        acc = acc * &base + mp(*d as f64);
    }
    if sign == Sign::Minus {
        -acc
    } else {
        acc
    }
}

pub fn mp_from_rational(q: &BigRational) -> Mp {
    mp_from_bigint(q.numer()) / mp_from_bigint(q.denom())
}

/// Complex number over [`Mp`].
#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Mp,
    pub im: Mp,
}

impl Cx {
    pub fn new(z: C64) -> Self {
        Self {
            re: mp(z.re),
            im: mp(z.im),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn scale(&self, r: &Mp) -> Self {
        Self {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn div_real(&self, r: &Mp) -> Self {
        Self {
            re: &self.re / r,
            im: &self.im / r,
        }
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(mp_to_f64(&self.re), mp_to_f64(&self.im))
    }
}

/// Σ_{n<terms} Π(aᵢ)ₙ/Π(bⱼ)ₙ · xⁿ/n!, every term kept.
pub fn pfq_mp(numer: &[C64], denom: &[f64], x: C64, terms: usize) -> C64 {
    let x = Cx::new(x);
    let mut t = Cx::new(C64::new(1.0, 0.0));
    let mut s = t.clone();
    for n in 0..terms {
        let nf = n as f64;
        for a in numer {
            t = t.mul(&Cx::new(a + nf));
        }
        t = t.mul(&x);
        let mut den = mp(nf + 1.0);
        for b in denom {
            den *= mp(b + nf);
        }
        t = t.div_real(&den);
        s = s.add(&t);
    }
    s.to_c64()
}

pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Exact partial sum of a real pFq with rational parameters.
pub fn pfq_rational(
    numer: &[BigRational],
    denom: &[BigRational],
    x: &BigRational,
    terms: usize,
) -> BigRational {
    let mut t = BigRational::one();
    let mut s = t.clone();
    for n in 0..terms {
        let nr = BigRational::from_integer(BigInt::from(n));
        for a in numer {
            t *= a + &nr;
        }
        t *= x;
        for b in denom {
            t /= b + &nr;
        }
        t /= &nr + BigRational::one();
        s += &t;
    }
    s
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    mp_to_f64(&mp_from_rational(q))
}

/// B₀, B₁, …, B_m as exact rationals.
fn bernoulli(m: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for k in 1..=m {
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(k + 1)));
    }
    b
}

/// B₂ₖ/(2k(2k−1)) for k = 1..=30.
fn stirling_coefficients() -> &'static [Mp] {
    static C: OnceLock<Vec<Mp>> = OnceLock::new();
    C.get_or_init(|| {
        let b = bernoulli(60);
        (1..=30)
            .map(|k| mp_from_rational(&b[2 * k]) / mp((2 * k * (2 * k - 1)) as f64))
            .collect()
    })
}

/// ln Γ(x) from Stirling's series at x + 40 with 30 Bernoulli corrections,
/// shifted back by the log of the exact product x(x+1)…(x+39).
pub fn ln_gamma_mp(x: f64) -> Mp {
    assert!(x > 0.0);
    let shift = 40;
    let xm = mp(x);
    let y = &xm + mp(shift as f64);
    let half = mp(0.5);
    let two_pi = Mp::pi(PREC) * mp(2.0);
    let mut s = (&y - &half) * y.ln() - &y + half * two_pi.ln();
    let y2 = &y * &y;
    let mut ypow = y.clone();
    for coeff in stirling_coefficients() {
        s += coeff / &ypow;
        ypow *= &y2;
    }
    let mut prod = mp(1.0);
    for j in 0..shift {
        prod *= &xm + mp(j as f64);
    }
    s - prod.ln()
}

/// 1/Γ(x) for any real x that is not a pole, from x(x+1)…(x+m−1)/Γ(x+m).
pub fn recip_gamma_mp(x: f64) -> Mp {
    let m = if x > 0.0 { 0 } else { (-x).ceil() as usize + 1 };
    let mut prod = mp(1.0);
    for j in 0..m {
        prod *= mp(x + j as f64);
    }
    prod * (-ln_gamma_mp(x + m as f64)).exp()
}

pub fn ln_gamma_oracle(x: f64) -> f64 {
    mp_to_f64(&ln_gamma_mp(x))
}

/// I_ν(x) = (x/2)^ν/Γ(ν+1) Σ_k (x²/4)^k/(k!(ν+1)_k), ν > −1.
pub fn bessel_i_oracle(nu: f64, x: f64) -> f64 {
    let xm = mp(x);
    let q = &xm * &xm / mp(4.0);
    let mut t = mp(1.0);
    let mut s = t.clone();
    for k in 0..800 {
        t = t * &q / (mp(k as f64 + 1.0) * mp(nu + k as f64 + 1.0));
        s += &t;
    }
    let pre = (mp(nu) * (xm / mp(2.0)).ln()).exp() * recip_gamma_mp(nu + 1.0);
    mp_to_f64(&(pre * s))
}

/// ln K_ν(x) from K_ν(x) = ∫₀^∞ e^{−x cosh t} cosh(νt) dt, by the
/// trapezoidal rule, which converges geometrically for this integrand.
pub fn ln_bessel_k_integral(nu: f64, x: f64) -> f64 {
    let f = |t: f64| -x * t.cosh() + nu * t + (0.5 * (1.0 + (-2.0 * nu * t).exp())).ln();
    let t_peak = (nu / x).asinh();
    let peak = f(t_peak);
    let width = 1.0 / (x * t_peak.cosh()).sqrt().max(nu.max(1.0).sqrt());
    let h = (width / 40.0).min(0.01);
    let mut sum = 0.5 * (f(0.0) - peak).exp();
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let v = f(t) - peak;
        sum += v.exp();
        if t > t_peak && v < -80.0 {
            break;
        }
        k += 1;
    }
    peak + (h * sum).ln()
}

pub fn bessel_k_integral(nu: f64, x: f64) -> f64 {
    ln_bessel_k_integral(nu, x).exp()
}

/// Δ(n, h) by literal nested sums: j₁ from 1 to n−(2h−1), and each later
/// index from the previous one plus 2 up to n−(2h−2i+1), ending at n−1.
pub fn delta_literal(n: usize, h: usize, e: &dyn Fn(usize) -> f64) -> f64 {
    fn level(n: usize, h: usize, i: usize, lo: usize, e: &dyn Fn(usize) -> f64) -> f64 {
        if i > h {
            return 1.0;
        }
        let hi = n as i64 - (2 * h as i64 - 2 * i as i64 + 1);
        let mut s = 0.0;
        let mut j = lo as i64;
        while j <= hi {
            s += e(j as usize) * level(n, h, i + 1, j as usize + 2, e);
            j += 1;
        }
        s
    }
    level(n, h, 1, 1, e)
}

pub fn to_f64_checked(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| rational_to_f64(q))
}
