//! Gazeau–Klauder coherent states and the cat states built from them.
//!
//! All amplitudes are assembled in log space from ln F(n), so large truncation
//! dimensions never overflow.

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::specfun::{hyp0f1_scaled, hyp0f3_scaled, Scaled, SeriesPolicy};
use crate::spectrum::{energy, ln_big_f_table, ModelParams};

/// Default bound on the squared magnitude of the last retained amplitudes.
pub const DEFAULT_TAIL_TOL: f64 = 1e-14;

/// A state truncated to the first `dim` Fock levels.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<C64>,
    params: ModelParams,
    tail_warning: bool,
}

impl FockVector {
    /// Wraps raw amplitudes; a tail warning is attached when the last
    /// amplitudes carry more than [`DEFAULT_TAIL_TOL`] of the squared norm.
    pub fn new(amplitudes: Vec<C64>, params: ModelParams) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(invalid("dim", "must be at least 1"));
        }
        if amplitudes
            .iter()
            .any(|a| !(a.re.is_finite() && a.im.is_finite()))
        {
            return Err(invalid("amplitudes", "must be finite"));
        }
        let mut v = Self {
            amplitudes,
            params,
            tail_warning: false,
        };
        let n2 = v.norm_sqr();
        v.tail_warning = n2 > 0.0 && v.tail() / n2 > DEFAULT_TAIL_TOL;
        Ok(v)
    }

    /// |n⟩ in a space of dimension `dim`.
    pub fn basis(n: usize, dim: usize, params: ModelParams) -> Result<Self> {
        if n >= dim {
            return Err(invalid("n", format!("basis index {n} outside dim {dim}")));
        }
        let mut a = vec![C64::new(0.0, 0.0); dim];
        a[n] = C64::new(1.0, 0.0);
        Self::new(a, params)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn tail_warning(&self) -> bool {
        self.tail_warning
    }

    /// max(|a_{dim−1}|², |a_{dim−2}|²).
    pub fn tail(&self) -> f64 {
        self.amplitudes
            .iter()
            .rev()
            .take(2)
            .map(|a| a.norm_sqr())
            .fold(0.0, f64::max)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// ⟨self|other⟩ over the common levels.
    pub fn inner(&self, other: &FockVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(invalid("state", "zero vector cannot be normalized"));
        }
        Self::new(self.amplitudes.iter().map(|a| a / n).collect(), self.params)
    }

    /// Probabilities |aₙ|².
    pub fn distribution(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// The same state embedded in `dim + extra` levels.
    pub fn padded(&self, extra: usize) -> Self {
        let mut a = self.amplitudes.clone();
        a.resize(self.dim() + extra, C64::new(0.0, 0.0));
        Self {
            amplitudes: a,
            params: self.params,
            tail_warning: self.tail_warning,
        }
    }

    /// ⟨H⟩ = Σ eₙ|aₙ|² / Σ |aₙ|².
    pub fn mean_energy(&self) -> f64 {
        let num: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(n, a)| energy(n, &self.params) * a.norm_sqr())
            .sum();
        num / self.norm_sqr()
    }
}

/// Label |z, α⟩ of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentLabel {
    pub z: C64,
    pub alpha: f64,
}

impl CoherentLabel {
    pub fn new(z: C64, alpha: f64) -> Self {
        Self { z, alpha }
    }

    fn validate(&self) -> Result<()> {
        if !(self.z.re.is_finite() && self.z.im.is_finite()) {
            return Err(invalid("z", "must be finite"));
        }
        if !self.alpha.is_finite() {
            return Err(invalid("alpha", "must be finite"));
        }
        Ok(())
    }
}

/// Truncation dimension max(40, ⌈|z|² + 10|z| + 20⌉).
pub fn default_dim(z_abs: f64) -> usize {
    let d = (z_abs * z_abs + 10.0 * z_abs + 20.0).ceil();
    (d as usize).max(40)
}

fn check_state_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(invalid("dim", format!("must be at least 2, got {dim}")));
    }
    Ok(())
}

/// Normalizes, checks the truncation tail, and wraps the amplitudes.
fn finish(amplitudes: Vec<C64>, params: ModelParams, tail_tol: f64) -> Result<FockVector> {
    let dim = amplitudes.len();
    let v = FockVector::new(amplitudes, params)?.normalized()?;
    let tail = v.tail();
    if tail > tail_tol {
        return Err(Error::Truncation { dim, tail });
    }
    Ok(v)
}

pub(crate) fn finish_state(amplitudes: Vec<C64>, params: ModelParams) -> Result<FockVector> {
    finish(amplitudes, params, DEFAULT_TAIL_TOL)
}

/// Amplitudes exp(ln_mag[n]) · e^{iθₙ} · e^{−iα eₙ}. The α phase is a
/// separate factor so that [`evolve`] can re-gauge it exactly.
fn assemble(ln_mag: &[f64], angle: &[f64], params: &ModelParams) -> Vec<C64> {
    ln_mag
        .iter()
        .zip(angle)
        .enumerate()
        .map(|(n, (&l, &th))| {
            if l == f64::NEG_INFINITY {
                C64::new(0.0, 0.0)
            } else {
                C64::from_polar(l.exp(), th) * params.phase(n)
            }
        })
        .collect()
}

/// ₀F₁(2 + 2/(3ε); (2/(3ε))·w) = Σ wⁿ/F(n).
pub fn kernel_series(w: C64, params: &ModelParams) -> Result<Scaled> {
    hyp0f1_scaled(params.kappa(), w * params.beta(), &SeriesPolicy::default())
}

/// The normalized coherent state |z, α⟩ with aₙ = a₀ zⁿ e^{−iα eₙ}/√F(n).
pub fn coherent(label: CoherentLabel, params: &ModelParams, dim: usize) -> Result<FockVector> {
    label.validate()?;
    check_state_dim(dim)?;
    let params = params.with_alpha(label.alpha)?;
    let lf = ln_big_f_table(dim - 1, &params);
    let ln_norm = kernel_series(C64::new(label.z.norm_sqr(), 0.0), &params)?.ln_abs();
    let (r, phi) = label.z.to_polar();
    let ln_r = r.ln();
    let ln_mag: Vec<f64> = (0..dim)
        .map(|n| {
            if n == 0 {
                -0.5 * ln_norm
            } else if r == 0.0 {
                f64::NEG_INFINITY
            } else {
                -0.5 * ln_norm + n as f64 * ln_r - 0.5 * lf[n]
            }
        })
        .collect();
    let angle: Vec<f64> = (0..dim).map(|n| n as f64 * phi).collect();
    finish_state(assemble(&ln_mag, &angle, &params), params)
}

/// ⟨z, α|z′, α⟩ = ₀F₁(b; β z̄z′)/√(₀F₁(b; β|z|²) ₀F₁(b; β|z′|²)).
pub fn kernel(z: C64, z_prime: C64, params: &ModelParams) -> Result<C64> {
    let cross = kernel_series(z.conj() * z_prime, params)?;
    let a = kernel_series(C64::new(z.norm_sqr(), 0.0), params)?;
    let b = kernel_series(C64::new(z_prime.norm_sqr(), 0.0), params)?;
    let ln = cross.ln_scale - 0.5 * (a.ln_abs() + b.ln_abs());
    Ok(cross.mantissa * ln.exp())
}

/// e^{−itH}|ψ⟩; the returned state carries α + t.
///
/// The factor e^{−itEₙ} is applied as e^{−i(α+t)eₙ}/e^{−iαeₙ}, so evolving a
/// state built at α reproduces the state built at α + t to rounding.
pub fn evolve(state: &FockVector, t: f64) -> Result<FockVector> {
    if !t.is_finite() {
        return Err(invalid("t", "must be finite"));
    }
    let p = *state.params();
    let q = p.with_alpha(p.alpha() + t)?;
    let a = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, a)| a / p.phase(n) * q.phase(n))
        .collect();
    FockVector::new(a, q)
}

/// Parity of a cat state built from ±z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// The four cat families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatKind {
    Even,
    Odd,
    Real,
    Imaginary,
}

fn hyp0f3_cat(parity: Parity, w: C64, params: &ModelParams) -> Result<Scaled> {
    // Σ w^{2k}/F(2k) and its odd analogue are ₀F₃ series in w²/(6ε)²
    let bb = params.half_beta();
    let e = params.epsilon();
    let b = match parity {
        Parity::Even => [0.5, bb + 1.0, bb + 1.5],
        Parity::Odd => [1.5, bb + 2.0, bb + 1.5],
    };
    hyp0f3_scaled(b, w * w / (36.0 * e * e), &SeriesPolicy::default())
}

/// ln N⁻² for the even or odd cat of label z.
///
/// N_e⁻² = ₀F₃(1/2, B+1, B+3/2; |z|⁴/(6ε)²) and
/// N_o⁻² = |z|²/(1+3ε) · ₀F₃(3/2, B+2, B+3/2; |z|⁴/(6ε)²), B = 1/(3ε).
pub fn ln_parity_cat_norm_inv(parity: Parity, z: C64, params: &ModelParams) -> Result<f64> {
    let r2 = z.norm_sqr();
    let s = hyp0f3_cat(parity, C64::new(r2, 0.0), params)?;
    match parity {
        Parity::Even => Ok(s.ln_abs()),
        Parity::Odd => {
            if r2 == 0.0 {
                return Err(Error::DegenerateLabel {
                    reason: "odd cat of z = 0 has no normalizable amplitude".into(),
                });
            }
            Ok(r2.ln() - (1.0 + 3.0 * params.epsilon()).ln() + s.ln_abs())
        }
    }
}

fn parity_cat(
    parity: Parity,
    label: CoherentLabel,
    params: &ModelParams,
    dim: usize,
) -> Result<FockVector> {
    label.validate()?;
    check_state_dim(dim)?;
    let params = params.with_alpha(label.alpha)?;
    let ln_inv = ln_parity_cat_norm_inv(parity, label.z, &params)?;
    let lf = ln_big_f_table(dim - 1, &params);
    let (r, phi) = label.z.to_polar();
    let keep = |n: usize| match parity {
        Parity::Even => n.is_multiple_of(2),
        Parity::Odd => n % 2 == 1,
    };
    let ln_mag: Vec<f64> = (0..dim)
        .map(|n| {
            if !keep(n) {
                f64::NEG_INFINITY
            } else if n == 0 {
                -0.5 * ln_inv
            } else if r == 0.0 {
                f64::NEG_INFINITY
            } else {
                -0.5 * ln_inv + n as f64 * r.ln() - 0.5 * lf[n]
            }
        })
        .collect();
    let angle: Vec<f64> = (0..dim).map(|n| n as f64 * phi).collect();
    finish_state(assemble(&ln_mag, &angle, &params), params)
}

/// Even cat N_e(|z⟩ + |−z⟩), supported on even n.
pub fn even_cat(label: CoherentLabel, params: &ModelParams, dim: usize) -> Result<FockVector> {
    parity_cat(Parity::Even, label, params, dim)
}

/// Odd cat N_o(|z⟩ − |−z⟩), supported on odd n.
pub fn odd_cat(label: CoherentLabel, params: &ModelParams, dim: usize) -> Result<FockVector> {
    parity_cat(Parity::Odd, label, params, dim)
}

/// Sums Σₙ exp(lₙ)·wₙ for a log-concave envelope lₙ = 2n ln r − ln F(n)
/// with bounded weights wₙ ∈ [0, 2]; returns the log of the sum.
fn ln_weighted_kernel_sum(
    r: f64,
    params: &ModelParams,
    start: usize,
    weight: impl Fn(usize) -> f64,
) -> f64 {
    let ln_r2 = 2.0 * r.ln();
    let mut ln_f = (1..=start).map(|k| energy(k, params).ln()).sum::<f64>();
    let mut terms = Vec::new();
    let mut peak = f64::NEG_INFINITY;
    let mut n = start;
    loop {
        let l = n as f64 * ln_r2 - ln_f;
        peak = peak.max(l);
        terms.push((l, weight(n)));
        // the envelope is decreasing once r² < e_{n+1}
        let next_ratio = ln_r2 - energy(n + 1, params).ln();
        if next_ratio < 0.0 && l < peak - 45.0 {
            break;
        }
        n += 1;
        ln_f += energy(n, params).ln();
    }
    let s: f64 = terms.iter().map(|(l, w)| w * (l - peak).exp()).sum();
    peak + s.ln()
}

/// ln N₊⁻² = ln Σ r^{2n} cos²(nφ)/F(n).
pub fn ln_real_cat_norm_inv(z: C64, params: &ModelParams) -> f64 {
    let (r, phi) = z.to_polar();
    if r == 0.0 {
        return 0.0;
    }
    ln_weighted_kernel_sum(r, params, 0, |n| (n as f64 * phi).cos().powi(2))
}

/// ln N₋⁻² = ln Σ_{n≥1} r^{2n} sin²(nφ)/F(n).
pub fn ln_imaginary_cat_norm_inv(z: C64, params: &ModelParams) -> Result<f64> {
    if z.im == 0.0 {
        return Err(Error::DegenerateLabel {
            reason: "imaginary cat requires a label off the real axis".into(),
        });
    }
    let (r, phi) = z.to_polar();
    Ok(ln_weighted_kernel_sum(r, params, 1, |n| {
        (n as f64 * phi).sin().powi(2)
    }))
}

fn trig_cat(
    kind: CatKind,
    label: CoherentLabel,
    params: &ModelParams,
    dim: usize,
) -> Result<FockVector> {
    label.validate()?;
    check_state_dim(dim)?;
    let params = params.with_alpha(label.alpha)?;
    let (r, phi) = label.z.to_polar();
    let ln_inv = match kind {
        CatKind::Real => ln_real_cat_norm_inv(label.z, &params),
        _ => ln_imaginary_cat_norm_inv(label.z, &params)?,
    };
    let lf = ln_big_f_table(dim - 1, &params);
    let amps: Vec<C64> = (0..dim)
        .map(|n| {
            let t = n as f64 * phi;
            let w = match kind {
                CatKind::Real => t.cos(),
                _ => t.sin(),
            };
            let ln_rn = if n == 0 { 0.0 } else { n as f64 * r.ln() };
            if w == 0.0 || (r == 0.0 && n > 0) {
                return C64::new(0.0, 0.0);
            }
            let m = (-0.5 * ln_inv + ln_rn - 0.5 * lf[n]).exp() * w;
            params.phase(n) * m
        })
        .collect();
    finish_state(amps, params)
}

/// Real cat N₊(|z⟩ + |z̄⟩) with amplitudes ∝ rⁿ cos(nφ)/√F(n).
pub fn real_cat(label: CoherentLabel, params: &ModelParams, dim: usize) -> Result<FockVector> {
    trig_cat(CatKind::Real, label, params, dim)
}

/// Imaginary cat N₋(|z⟩ − |z̄⟩)/(2i) with amplitudes ∝ rⁿ sin(nφ)/√F(n).
pub fn imaginary_cat(label: CoherentLabel, params: &ModelParams, dim: usize) -> Result<FockVector> {
    trig_cat(CatKind::Imaginary, label, params, dim)
}

/// Overlap of two even or two odd cats, symmetrically normalized:
/// even: ₀F₃(…; (z̄z′)²/(6ε)²)/√(₀F₃(…; |z|⁴/(6ε)²)·₀F₃(…; |z′|⁴/(6ε)²)),
/// odd: the same with the odd parameters times z̄z′/(|z||z′|).
pub fn cat_overlaps(z: C64, z_prime: C64, parity: Parity, params: &ModelParams) -> Result<C64> {
    let w = z.conj() * z_prime;
    let cross = hyp0f3_cat(parity, w, params)?;
    let a = hyp0f3_cat(parity, C64::new(z.norm_sqr(), 0.0), params)?;
    let b = hyp0f3_cat(parity, C64::new(z_prime.norm_sqr(), 0.0), params)?;
    let ln = cross.ln_scale - 0.5 * (a.ln_abs() + b.ln_abs());
    let v = cross.mantissa * ln.exp();
    match parity {
        Parity::Even => Ok(v),
        Parity::Odd => {
            let m = z.norm() * z_prime.norm();
            if m == 0.0 {
                return Err(Error::DegenerateLabel {
                    reason: "odd cat of z = 0 has no normalizable amplitude".into(),
                });
            }
            Ok(v * w / m)
        }
    }
}

/// P(n) for the cat family `kind` with label z, from the closed-form
/// normalizers.
pub fn cat_distribution(
    kind: CatKind,
    label: CoherentLabel,
    params: &ModelParams,
    n: usize,
) -> Result<f64> {
    label.validate()?;
    let z = label.z;
    let (r, phi) = z.to_polar();
    let ln_f = (1..=n).map(|k| energy(k, params).ln()).sum::<f64>();
    let ln_rn = |m: usize| if m == 0 { 0.0 } else { 2.0 * m as f64 * r.ln() };
    match kind {
        CatKind::Even | CatKind::Odd => {
            let parity = if kind == CatKind::Even {
                Parity::Even
            } else {
                Parity::Odd
            };
            let ln_inv = ln_parity_cat_norm_inv(parity, z, params)?;
            let on_support = n.is_multiple_of(2) == (parity == Parity::Even);
            if !on_support || (r == 0.0 && n > 0) {
                return Ok(0.0);
            }
            Ok((ln_rn(n) - ln_f - ln_inv).exp())
        }
        CatKind::Real => {
            // P₊(n) = r^{2n}(1 + cos 2nφ)/A₊, A₊ = F(n) Σ_m r^{2m}(1 + cos 2mφ)/F(m)
            if r == 0.0 {
                return Ok(if n == 0 { 1.0 } else { 0.0 });
            }
            let w = 1.0 + (2.0 * n as f64 * phi).cos();
            let ln_s = ln_weighted_kernel_sum(r, params, 0, |m| 1.0 + (2.0 * m as f64 * phi).cos());
            Ok(w * (ln_rn(n) - ln_f - ln_s).exp())
        }
        CatKind::Imaginary => {
            // P₋(n) = r^{2n}(1 − cos 2nφ)/A₋, A₋ = F(n) Σ_m r^{2m+2}(1 − cos((2m+2)φ))/F(m+1)
            if z.im == 0.0 {
                return Err(Error::DegenerateLabel {
                    reason: "imaginary cat requires a label off the real axis".into(),
                });
            }
            let w = 1.0 - (2.0 * n as f64 * phi).cos();
            let ln_s = ln_weighted_kernel_sum(r, params, 1, |m| 1.0 - (2.0 * m as f64 * phi).cos());
            Ok(w * (ln_rn(n) - ln_f - ln_s).exp())
        }
    }
}

/// |⟨coherent_ε(z, α)|standard CS(z, α)⟩| for each ε of a decreasing sequence.
pub fn harmonic_limit_fidelity(
    z: C64,
    alpha: f64,
    eps_sequence: &[f64],
    dim: usize,
) -> Result<Vec<f64>> {
    if eps_sequence.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("eps_sequence", "must be strictly decreasing"));
    }
    let (r, phi) = z.to_polar();
    let mut ln_fact = 0.0;
    let standard: Vec<C64> = (0..dim)
        .map(|n| {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            if r == 0.0 {
                return C64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0);
            }
            let l = -0.5 * r * r + n as f64 * r.ln() - 0.5 * ln_fact;
            C64::from_polar(l.exp(), n as f64 * (phi - alpha))
        })
        .collect();
    eps_sequence
        .iter()
        .map(|&eps| {
            let p = ModelParams::new(eps, alpha)?;
            let v = coherent(CoherentLabel::new(z, alpha), &p, dim)?;
            let s: C64 = v
                .amplitudes()
                .iter()
                .zip(&standard)
                .map(|(a, b)| a.conj() * b)
                .sum();
            Ok(s.norm())
        })
        .collect()
}
