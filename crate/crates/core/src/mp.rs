//! Complex arithmetic on binary multiprecision floats.

use dashu_base::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_complex::Complex64 as C64;

pub(crate) type Real = FBig<HalfEven, 2>;

pub(crate) fn real(x: f64, precision: usize) -> Real {
    Real::try_from(x)
        .expect("finite input")
        .with_precision(precision)
        .value()
}

fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

#[derive(Clone, Debug)]
pub(crate) struct MpComplex {
    pub re: Real,
    pub im: Real,
}

impl MpComplex {
    pub fn new(z: C64, precision: usize) -> Self {
        Self {
            re: real(z.re, precision),
            im: real(z.im, precision),
        }
    }

    pub fn from_real(re: Real, precision: usize) -> Self {
        Self {
            re,
            im: real(0.0, precision),
        }
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn mul_real(&self, r: &Real) -> Self {
        Self {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        let den = &o.re * &o.re + &o.im * &o.im;
        Self {
            re: (&self.re * &o.re + &self.im * &o.im) / &den,
            im: (&self.im * &o.re - &self.re * &o.im) / &den,
        }
    }

    pub fn div_real(&self, r: &Real) -> Self {
        Self {
            re: &self.re / r,
            im: &self.im / r,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Principal square root.
    pub fn sqrt(&self, precision: usize) -> Self {
        let zero = real(0.0, precision);
        let two = real(2.0, precision);
        let modulus = (&self.re * &self.re + &self.im * &self.im).sqrt();
        if self.re >= zero {
            let s = ((&modulus + &self.re) / &two).sqrt();
            if s == zero {
                return Self {
                    re: zero.clone(),
                    im: zero,
                };
            }
            let im = &self.im / (&two * &s);
            Self { re: s, im }
        } else {
            let t = ((&modulus - &self.re) / &two).sqrt();
            let re = if self.im >= zero {
                &self.im / (&two * &t)
            } else {
                -(&self.im / (&two * &t))
            };
            let im = if self.im >= zero { t } else { -t };
            Self { re, im }
        }
    }
}
