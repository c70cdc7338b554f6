//! Generalized intelligent states: solutions of
//! ((1−λ)A⁺ + (1+λ)A⁻)|ψ⟩ = 2z|ψ⟩, which saturate the Robertson–Schrödinger
//! relation for X = (A⁻+A⁺)/√2 and P = i(A⁺−A⁻)/√2.
//!
//! Four constructions are provided and kept independent of each other:
//! the three-term recurrence, the continued fraction for successive ratios,
//! the closed form in terms of Δ(n, h), and the operator series acting on
//! the vacuum. The z = 0 family has its own closed form, [`squeezed_vacuum`].
//!
//! Every construction fixes c₀ real and positive and returns a normalized
//! state. Writing a = 2z/(1+λ), q = (λ−1)/(λ+1) and cₙ = uₙ e^{−iα eₙ}, the
//! eigen-equation reads √eₙ₊₁ uₙ₊₁ = a uₙ + q √eₙ uₙ₋₁.

use std::f64::consts::SQRT_2;

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::matrix::OperatorMatrix;
use crate::specfun::{hyp0f1_scaled, SeriesPolicy};
use crate::spectrum::{energy, ladder_matrices, raising_matrix, ModelParams};
use crate::states::{default_dim, finish_state, FockVector};

/// Tolerance on ||λ| − 1| separating coherent from squeezed labels.
pub const COHERENT_TOL: f64 = 1e-12;
/// Relative size below which an intermediate continued-fraction level
/// counts as zero.
pub const ZERO_DIVISION_TOL: f64 = 1e-12;
/// Relative term size at which the operator series is truncated.
pub const OPERATOR_SERIES_TOL: f64 = 1e-16;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const RESCALE: f64 = 1e150;

/// The eigenproblem label (λ, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GisLabel {
    pub lambda: C64,
    pub z: C64,
}

impl GisLabel {
    pub fn new(lambda: C64, z: C64) -> Self {
        Self { lambda, z }
    }

    fn validate(&self) -> Result<()> {
        let finite = |c: C64| c.re.is_finite() && c.im.is_finite();
        if !finite(self.lambda) {
            return Err(invalid("lambda", "must be finite"));
        }
        if !finite(self.z) {
            return Err(invalid("z", "must be finite"));
        }
        if self.lambda == C64::new(-1.0, 0.0) {
            return Err(Error::NoNormalizableSolution {
                reason:
                    "lambda = -1 reduces to A+|psi> = z|psi>, forcing every amplitude to vanish"
                        .into(),
            });
        }
        Ok(())
    }

    /// a = 2z/(1+λ).
    pub fn displacement(&self) -> C64 {
        2.0 * self.z / (ONE + self.lambda)
    }

    /// q = (λ−1)/(λ+1).
    pub fn squeeze(&self) -> C64 {
        (self.lambda - ONE) / (self.lambda + ONE)
    }
}

/// Coherent (|λ| = 1) versus squeezed (|λ| ≠ 1) solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GisKind {
    Coherent,
    Squeezed,
}

pub fn gis_classify(label: GisLabel) -> GisKind {
    if (label.lambda.norm() - 1.0).abs() <= COHERENT_TOL {
        GisKind::Coherent
    } else {
        GisKind::Squeezed
    }
}

/// A truncation dimension adequate for `label`, capped at 4000.
pub fn default_gis_dim(label: GisLabel) -> usize {
    let coherent = default_dim(label.displacement().norm());
    let q = label.squeeze().norm();
    let squeezed = if q == 0.0 {
        0.0
    } else if q < 1.0 {
        // |c_{2k}|² falls roughly like |q|^{2k}
        2.0 * 40.0 / -q.ln()
    } else {
        f64::INFINITY
    };
    let d = (coherent as f64).max(squeezed.ceil() + 20.0);
    if d.is_finite() {
        (d as usize).min(4000)
    } else {
        4000
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 3 {
        return Err(invalid("dim", format!("must be at least 3, got {dim}")));
    }
    Ok(())
}

/// Attaches e^{−iα eₙ} and normalizes.
fn finish_gis(u: Vec<C64>, params: &ModelParams) -> Result<FockVector> {
    let c = u
        .into_iter()
        .enumerate()
        .map(|(n, v)| v * params.phase(n))
        .collect();
    finish_state(c, *params)
}

fn rescale_if_large(u: &mut [C64]) {
    let m = u.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if m > RESCALE {
        for v in u.iter_mut() {
            *v /= RESCALE;
        }
    }
}

/// cₙ from c₀ = 1 through the three-term recurrence, normalized.
pub fn gis_recurrence(label: GisLabel, params: &ModelParams, dim: usize) -> Result<FockVector> {
    label.validate()?;
    check_dim(dim)?;
    let sl = C64::new(1.0, 0.0) + label.lambda;
    let dl = C64::new(1.0, 0.0) - label.lambda;
    let e = |n: usize| energy(n, params);
    // cₙ without the e^{−iα eₙ} phase:
    // (1+λ)√eₙ₊₁ uₙ₊₁ = 2z uₙ − (1−λ)√eₙ uₙ₋₁
    let mut u = vec![ZERO; dim];
    u[0] = ONE;
    u[1] = 2.0 * label.z * u[0] / (sl * e(1).sqrt());
    for n in 1..dim - 1 {
        u[n + 1] = (2.0 * label.z * u[n] - dl * e(n).sqrt() * u[n - 1]) / (sl * e(n + 1).sqrt());
        rescale_if_large(&mut u[..=n + 1]);
    }
    finish_gis(u, params)
}

/// [A₁, …, A_{n_max}] with A₁ = a and Aₙ = a + q e_{n−1}/A_{n−1}, each level
/// checked for a vanishing denominator.
fn fraction_levels(label: GisLabel, params: &ModelParams, n_max: usize) -> Result<Vec<C64>> {
    label.validate()?;
    let a = label.displacement();
    let q = label.squeeze();
    let mut out = Vec::with_capacity(n_max);
    let mut prev = a;
    let mut scale = a.norm();
    for n in 1..=n_max {
        if n > 1 {
            let tail = q * energy(n - 1, params) / prev;
            prev = a + tail;
            scale = a.norm() + tail.norm();
        }
        // The last level is never divided by.
        if n < n_max && prev.norm() <= ZERO_DIVISION_TOL * scale {
            return Err(Error::ZeroDivision { level: n });
        }
        out.push(prev);
    }
    Ok(out)
}

/// Aₙ = cₙ√eₙ e^{iα(eₙ−e_{n−1})}/c_{n−1} as the finite continued fraction
/// a + q e_{n−1}/(a + q e_{n−2}/(⋯ + q e₁/A₁)).
pub fn gis_continued_fraction(label: GisLabel, params: &ModelParams, n: usize) -> Result<C64> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    let levels = fraction_levels(label, params, n)?;
    Ok(levels[n - 1])
}

/// Amplitudes from cₙ = c_{n−1} Aₙ e^{−iα(eₙ−e_{n−1})}/√eₙ, normalized.
pub fn gis_fraction_amplitudes(
    label: GisLabel,
    params: &ModelParams,
    dim: usize,
) -> Result<FockVector> {
    check_dim(dim)?;
    let levels = fraction_levels(label, params, dim - 1)?;
    let mut u = vec![ZERO; dim];
    u[0] = ONE;
    for n in 1..dim {
        u[n] = u[n - 1] * levels[n - 1] / energy(n, params).sqrt();
        rescale_if_large(&mut u[..=n]);
    }
    finish_gis(u, params)
}

/// Which construction produced a state in [`gis_solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GisRoute {
    ContinuedFraction,
    Recurrence,
}

/// Continued-fraction amplitudes, falling back to the division-free
/// recurrence when a level vanishes.
pub fn gis_solve(
    label: GisLabel,
    params: &ModelParams,
    dim: usize,
) -> Result<(FockVector, GisRoute)> {
    match gis_fraction_amplitudes(label, params, dim) {
        Ok(v) => Ok((v, GisRoute::ContinuedFraction)),
        Err(Error::ZeroDivision { .. }) => {
            Ok((gis_recurrence(label, params, dim)?, GisRoute::Recurrence))
        }
        Err(e) => Err(e),
    }
}

fn log_add_exp(x: f64, y: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return y;
    }
    if y == f64::NEG_INFINITY {
        return x;
    }
    let m = x.max(y);
    m + ((x - m).exp() + (y - m).exp()).ln()
}

/// ln R(n, h) for n < dim, where R(n, h) = Δ(n, h)/√F(n) and Δ(n, h) is the
/// sum of e_{j₁}⋯e_{j_h} over 1 ≤ j₁, j_{i+1} ≥ jᵢ + 2, j_h ≤ n − 1.
///
/// From Δ(n, h) = Δ(n−1, h) + e_{n−1} Δ(n−2, h−1):
/// R(n, h) = R(n−1, h)/√eₙ + √(e_{n−1}/eₙ) R(n−2, h−1).
pub fn ln_delta_ratio_table(dim: usize, params: &ModelParams) -> Vec<Vec<f64>> {
    let ln_e: Vec<f64> = (0..dim).map(|n| energy(n, params).ln()).collect();
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for n in 0..dim {
        let mut row = vec![f64::NEG_INFINITY; n / 2 + 1];
        if n == 0 {
            row[0] = 0.0;
        } else {
            for (h, slot) in row.iter_mut().enumerate() {
                let keep = t[n - 1]
                    .get(h)
                    .map_or(f64::NEG_INFINITY, |&v| v - 0.5 * ln_e[n]);
                let take = if h >= 1 && n >= 2 {
                    t[n - 2]
                        .get(h - 1)
                        .map_or(f64::NEG_INFINITY, |&v| v + 0.5 * (ln_e[n - 1] - ln_e[n]))
                } else {
                    f64::NEG_INFINITY
                };
                *slot = log_add_exp(keep, take);
            }
        }
        t.push(row);
    }
    t
}

/// ln Δ(n, h).
pub fn ln_delta(n: usize, h: usize, params: &ModelParams) -> f64 {
    let t = ln_delta_ratio_table(n + 1, params);
    let ln_f: f64 = (1..=n).map(|k| energy(k, params).ln()).sum();
    t[n].get(h).map_or(f64::NEG_INFINITY, |&v| v + 0.5 * ln_f)
}

/// cₙ ∝ (2z)ⁿ/((1+λ)ⁿ√F(n)) · Σ_h (−1)ʰ (1−λ²)ʰ/(2z)^{2h} Δ(n, h) · e^{−iα eₙ},
/// normalized. Each term is assembled from complex logarithms.
pub fn gis_closed_form(label: GisLabel, params: &ModelParams, dim: usize) -> Result<FockVector> {
    label.validate()?;
    check_dim(dim)?;
    if label.z == ZERO {
        return Err(invalid(
            "z",
            "the closed form divides by z; use squeezed_vacuum for z = 0",
        ));
    }
    let ln_a = label.displacement().ln();
    let w = -(ONE - label.lambda * label.lambda) / (4.0 * label.z * label.z);
    let ln_w = if w == ZERO { None } else { Some(w.ln()) };
    let table = ln_delta_ratio_table(dim, params);
    let mut scaled: Vec<(C64, f64)> = Vec::with_capacity(dim);
    for (n, row) in table.iter().enumerate() {
        let logs: Vec<C64> = row
            .iter()
            .enumerate()
            .filter_map(|(h, &lr)| {
                if h == 0 {
                    Some(n as f64 * ln_a + lr)
                } else {
                    ln_w.map(|lw| n as f64 * ln_a + h as f64 * lw + lr)
                }
            })
            .collect();
        let m = logs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
        let s: C64 = logs.iter().map(|l| (l - m).exp()).sum();
        scaled.push((s, m));
    }
    let top = scaled
        .iter()
        .filter(|(s, _)| *s != ZERO)
        .map(|(s, m)| m + s.norm().ln())
        .fold(f64::NEG_INFINITY, f64::max);
    let u = scaled
        .into_iter()
        .map(|(s, m)| s * (m - top).exp())
        .collect();
    finish_gis(u, params)
}

/// Σₖ Tᵏ|0⟩ with T = a H⁻¹A⁺ + q H⁻¹(A⁺)², H⁻¹ taken on levels n ≥ 1.
/// T raises the level, so the series is finite on the truncated space; it
/// stops once two successive terms fall below 1e-16 of the running sum.
pub fn gis_operator_series(
    label: GisLabel,
    params: &ModelParams,
    dim: usize,
) -> Result<FockVector> {
    label.validate()?;
    check_dim(dim)?;
    let up = raising_matrix(dim, params)?;
    let h_inv = OperatorMatrix::from_diagonal(
        &(0..dim)
            .map(|n| {
                if n == 0 {
                    ZERO
                } else {
                    C64::new(1.0 / energy(n, params), 0.0)
                }
            })
            .collect::<Vec<_>>(),
    );
    let up2 = up.matmul(&up);
    let t =
        &h_inv.matmul(&up).scale(label.displacement()) + &h_inv.matmul(&up2).scale(label.squeeze());
    let mut term = vec![ZERO; dim];
    term[0] = ONE;
    let mut sum = term.clone();
    let mut small = 0;
    let mut last = 1.0;
    for _ in 0..dim {
        term = t.apply(&term);
        let tn = term.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for (s, v) in sum.iter_mut().zip(&term) {
            *s += v;
        }
        let sn = sum.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if tn <= OPERATOR_SERIES_TOL * sn {
            small += 1;
            if small == 2 {
                break;
            }
        } else {
            small = 0;
            last = tn / sn;
        }
    }
    if last > OPERATOR_SERIES_TOL && small < 2 {
        return Err(Error::Truncation { dim, tail: last });
    }
    finish_state(sum, *params)
}

/// The z = 0 solution, supported on even levels:
/// c_{2k} = c₀ (q/2)ᵏ/k! · √((2k)! Γ(k+1+B) Γ(B+3/2)/(Γ(B+1) Γ(k+B+3/2))) e^{−iα e_{2k}},
/// B = 1/(3ε), generated by the ratio of successive terms.
pub fn squeezed_vacuum(lambda: C64, params: &ModelParams, dim: usize) -> Result<FockVector> {
    let label = GisLabel::new(lambda, ZERO);
    label.validate()?;
    check_dim(dim)?;
    let q = label.squeeze();
    let b = params.half_beta();
    let mut u = vec![ZERO; dim];
    u[0] = ONE;
    for k in 1..=(dim - 1) / 2 {
        let kf = k as f64;
        let ratio = (2.0 * kf * (2.0 * kf - 1.0) * (kf + b) / (kf + b + 0.5)).sqrt() / kf;
        u[2 * k] = u[2 * k - 2] * (q / 2.0) * ratio;
        rescale_if_large(&mut u[..=2 * k]);
    }
    finish_gis(u, params)
}

/// ‖((1−λ)A⁺ + (1+λ)A⁻ − 2z)ψ‖ over rows n ≤ dim − 3, for normalized ψ.
pub fn gis_eigen_residual(state: &FockVector, label: GisLabel) -> Result<f64> {
    let dim = state.dim();
    check_dim(dim)?;
    let l = ladder_matrices(dim, state.params())?;
    let op = &(&l.raise.scale(ONE - label.lambda) + &l.lower.scale(ONE + label.lambda))
        - &OperatorMatrix::identity(dim).scale(2.0 * label.z);
    let psi = state.normalized()?;
    let r = op.apply(psi.amplitudes());
    Ok(r[..=dim - 3]
        .iter()
        .map(|v| v.norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Position, momentum and commutator matrices.
#[derive(Debug, Clone)]
pub struct XpOperators {
    pub x: OperatorMatrix,
    pub p: OperatorMatrix,
    pub g: OperatorMatrix,
}

/// X = (A⁻+A⁺)/√2, P = i(A⁺−A⁻)/√2 and G = diag(1 + 3ε(n+1)), so that
/// [X, P] = iG below the truncation edge.
pub fn xp_operators(dim: usize, params: &ModelParams) -> Result<XpOperators> {
    check_dim(dim)?;
    let l = ladder_matrices(dim, params)?;
    let s = C64::new(1.0 / SQRT_2, 0.0);
    let x = (&l.lower + &l.raise).scale(s);
    let p = (&l.raise - &l.lower).scale(C64::new(0.0, 1.0 / SQRT_2));
    let g = OperatorMatrix::from_diagonal(
        &(0..dim)
            .map(|n| C64::new(params.energy_gap(n), 0.0))
            .collect::<Vec<_>>(),
    );
    Ok(XpOperators { x, p, g })
}

fn check_state_params(state: &FockVector, params: &ModelParams) -> Result<()> {
    if state.params() != params {
        return Err(invalid(
            "params",
            "must match the state's epsilon and alpha",
        ));
    }
    Ok(())
}

fn check_operator_dim(state: &FockVector, dim: usize, params: &ModelParams) -> Result<()> {
    check_state_params(state, params)?;
    check_dim(dim)?;
    if dim < state.dim() {
        return Err(invalid(
            "dim",
            format!(
                "operator dimension {dim} is below the state dimension {}",
                state.dim()
            ),
        ));
    }
    Ok(())
}

/// C = {X − ⟨X⟩, P − ⟨P⟩} on the first `dim` levels. Products are formed
/// one level higher so every returned entry is exact.
pub fn correlation_operator(
    state: &FockVector,
    dim: usize,
    params: &ModelParams,
) -> Result<OperatorMatrix> {
    check_operator_dim(state, dim, params)?;
    let ops = xp_operators(dim + 1, params)?;
    let psi = state.normalized()?.padded(dim + 1 - state.dim());
    let mx = ops.x.expectation(psi.amplitudes());
    let mp = ops.p.expectation(psi.amplitudes());
    let id = OperatorMatrix::identity(dim + 1);
    let dx = &ops.x - &id.scale(mx);
    let dp = &ops.p - &id.scale(mp);
    Ok(dx.anticommutator(&dp).leading_block(dim))
}

/// The same operator written through the ladder operators,
/// C = i[(2A⁻ − ⟨A⁻⟩)⟨A⁻⟩ + (−2A⁺ + ⟨A⁺⟩)⟨A⁺⟩ − (A⁻)² + (A⁺)²].
pub fn correlation_operator_ladder(
    state: &FockVector,
    dim: usize,
    params: &ModelParams,
) -> Result<OperatorMatrix> {
    check_operator_dim(state, dim, params)?;
    let l = ladder_matrices(dim + 1, params)?;
    let psi = state.normalized()?.padded(dim + 1 - state.dim());
    let am = l.lower.expectation(psi.amplitudes());
    let ap = l.raise.expectation(psi.amplitudes());
    let id = OperatorMatrix::identity(dim + 1);
    let first = (&l.lower.scale(C64::new(2.0, 0.0)) - &id.scale(am)).scale(am);
    let second = (&id.scale(ap) - &l.raise.scale(C64::new(2.0, 0.0))).scale(ap);
    let squares = &l.raise.matmul(&l.raise) - &l.lower.matmul(&l.lower);
    Ok((&(&first + &second) + &squares)
        .scale(C64::new(0.0, 1.0))
        .leading_block(dim))
}

/// Moments of X and P and both sides of the Robertson–Schrödinger relation
/// (ΔX)²(ΔP)² ≥ (⟨G⟩² + ⟨C⟩²)/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub mean_g: f64,
    pub mean_c: f64,
    pub rs_left: f64,
    pub rs_right: f64,
    pub residual: f64,
}

/// Matrix expectations on the state padded by two levels, so that X and P
/// act without truncation error.
pub fn uncertainty_report(state: &FockVector, params: &ModelParams) -> Result<UncertaintyReport> {
    check_state_params(state, params)?;
    let psi = state.normalized()?.padded(2);
    let ops = xp_operators(psi.dim(), params)?;
    let v = psi.amplitudes();
    let xv = ops.x.apply(v);
    let pv = ops.p.apply(v);
    let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    let mean_x = dot(v, &xv).re;
    let mean_p = dot(v, &pv).re;
    let var_x = dot(&xv, &xv).re - mean_x * mean_x;
    let var_p = dot(&pv, &pv).re - mean_p * mean_p;
    let mean_g = ops.g.expectation(v).re;
    let mean_c = 2.0 * dot(&xv, &pv).re - 2.0 * mean_x * mean_p;
    let rs_left = var_x * var_p;
    let rs_right = 0.25 * (mean_g * mean_g + mean_c * mean_c);
    Ok(UncertaintyReport {
        mean_x,
        mean_p,
        var_x,
        var_p,
        mean_g,
        mean_c,
        rs_left,
        rs_right,
        residual: rs_left - rs_right,
    })
}

/// ⟨G⟩ on the coherent state |z⟩:
/// (1+3ε) + 3ε|z|²/(1+3ε) · ₀F₁(β+3; β|z|²)/₀F₁(β+2; β|z|²), β = 2/(3ε).
pub fn coherent_mean_g(z: C64, params: &ModelParams) -> Result<f64> {
    let e = params.epsilon();
    let b = params.beta();
    let x = C64::new(b * z.norm_sqr(), 0.0);
    let policy = SeriesPolicy::default();
    let num = hyp0f1_scaled(b + 3.0, x, &policy)?;
    let den = hyp0f1_scaled(b + 2.0, x, &policy)?;
    let ratio = (num.mantissa / den.mantissa).re * (num.ln_scale - den.ln_scale).exp();
    Ok((1.0 + 3.0 * e) + 3.0 * e * z.norm_sqr() / (1.0 + 3.0 * e) * ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{coherent, CoherentLabel};

    fn p() -> ModelParams {
        ModelParams::new(0.1, 0.3).unwrap()
    }

    fn gauge_diff(a: &FockVector, b: &FockVector, n_max: usize) -> f64 {
        let ph = |v: &FockVector| v.amplitudes()[0] / v.amplitudes()[0].norm();
        let (pa, pb) = (ph(a), ph(b));
        (0..=n_max)
            .map(|n| {
                let x = a.amplitudes()[n] / pa;
                let y = b.amplitudes()[n] / pb;
                (x - y).norm() / y.norm().max(1e-300)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn first_recurrence_step() {
        let label = GisLabel::new(C64::new(0.5, 0.2), C64::new(0.7, -0.4));
        let s = gis_recurrence(label, &p(), 60).unwrap();
        let c = s.amplitudes();
        let e1 = energy(1, &p());
        let expected = 2.0 * label.z * p().phase(1) / ((ONE + label.lambda) * e1.sqrt()) * c[0];
        assert!((c[1] - expected).norm() < 1e-14);
        assert!(c[0].im == 0.0 && c[0].re > 0.0);
    }

    #[test]
    fn lambda_one_is_the_coherent_state() {
        let z = C64::new(0.8, 0.6);
        let params = p();
        let g = gis_recurrence(GisLabel::new(ONE, z), &params, 60).unwrap();
        let c = coherent(CoherentLabel::new(z, params.alpha()), &params, 60).unwrap();
        assert!(gauge_diff(&g, &c, 40) < 1e-12);
        for n in 1..10 {
            let a = gis_continued_fraction(GisLabel::new(ONE, z), &params, n).unwrap();
            assert!((a - z).norm() < 1e-15);
        }
    }

    #[test]
    fn four_constructions_agree() {
        let params = p();
        for (lambda, z) in [
            (C64::new(0.3, 0.0), C64::new(1.0, 0.0)),
            (C64::new(2.0, 1.0), C64::new(0.0, 2.0)),
            (C64::new(0.6, -0.3), C64::new(-0.4, 0.9)),
        ] {
            let label = GisLabel::new(lambda, z);
            let r = gis_recurrence(label, &params, 90).unwrap();
            let f = gis_fraction_amplitudes(label, &params, 90).unwrap();
            let c = gis_closed_form(label, &params, 90).unwrap();
            let o = gis_operator_series(label, &params, 90).unwrap();
            assert!(gauge_diff(&f, &r, 15) < 1e-10, "fraction {lambda} {z}");
            assert!(gauge_diff(&c, &r, 15) < 1e-9, "closed {lambda} {z}");
            assert!(gauge_diff(&o, &r, 15) < 1e-9, "operator {lambda} {z}");
            assert!(gis_eigen_residual(&r, label).unwrap() < 1e-9);
        }
    }

    #[test]
    fn zero_level_is_reported_and_recovered() {
        let params = ModelParams::new(0.1, 0.0).unwrap();
        let label = GisLabel::new(
            C64::new(0.5, 0.0),
            C64::new((0.75f64 * 1.3 / 4.0).sqrt(), 0.0),
        );
        assert!(matches!(
            gis_continued_fraction(label, &params, 3),
            Err(Error::ZeroDivision { level: 2 })
        ));
        let (s, route) = gis_solve(label, &params, 60).unwrap();
        assert_eq!(route, GisRoute::Recurrence);
        assert!(s.amplitudes()[2].norm() < 1e-14);
    }

    #[test]
    fn lambda_minus_one_has_no_solution() {
        let label = GisLabel::new(C64::new(-1.0, 0.0), ONE);
        assert!(matches!(
            gis_recurrence(label, &p(), 10),
            Err(Error::NoNormalizableSolution { .. })
        ));
        assert!(squeezed_vacuum(C64::new(-1.0, 0.0), &p(), 10).is_err());
    }

    #[test]
    fn squeezed_vacuum_matches_recurrence() {
        let params = p();
        assert!(squeezed_vacuum(ONE, &params, 10).unwrap().amplitudes()[0] == ONE);
        let lambda = C64::new(1.7, 0.4);
        let s = squeezed_vacuum(lambda, &params, 120).unwrap();
        let r = gis_recurrence(GisLabel::new(lambda, ZERO), &params, 120).unwrap();
        assert!(s.amplitudes().iter().skip(1).step_by(2).all(|a| *a == ZERO));
        for n in (0..40).step_by(2) {
            assert!((s.amplitudes()[n] - r.amplitudes()[n]).norm() < 1e-10);
        }
        assert!(matches!(
            squeezed_vacuum(C64::new(-0.5, 0.0), &params, 40),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn delta_two_one_is_e1() {
        let params = p();
        assert!((ln_delta(2, 1, &params) - energy(1, &params).ln()).abs() < 1e-15);
        assert_eq!(ln_delta(5, 0, &params), 0.0);
        assert!(gis_closed_form(GisLabel::new(ONE, ZERO), &params, 10).is_err());
    }

    #[test]
    fn position_momentum_commutator() {
        let params = p();
        let ops = xp_operators(12, &params).unwrap();
        let lhs = ops.x.commutator(&ops.p);
        let rhs = ops.g.scale(C64::new(0.0, 1.0));
        assert!(lhs.max_abs_diff_below(&rhs, 11) < 1e-13);
        assert_eq!(ops.x, ops.x.adjoint());
        assert_eq!(ops.p, ops.p.adjoint());
    }

    #[test]
    fn saturation_and_mean_relations() {
        let params = p();
        let label = GisLabel::new(C64::new(2.0, 0.5), C64::new(0.6, 0.3));
        let s = gis_recurrence(label, &params, 100).unwrap();
        let r = uncertainty_report(&s, &params).unwrap();
        assert!(r.residual.abs() < 1e-10 * r.rs_right);
        let l = label.lambda;
        assert!((r.mean_g - 2.0 * l.re * r.var_p).abs() < 1e-10);
        assert!((r.mean_c - 2.0 * l.im * r.var_p).abs() < 1e-10);
        assert!((r.var_x - l.norm_sqr() * r.var_p).abs() < 1e-10);
    }

    #[test]
    fn coherent_g_closed_form() {
        let params = p();
        let z = C64::new(1.2, -0.5);
        let s = coherent(CoherentLabel::new(z, params.alpha()), &params, 80).unwrap();
        let other = ModelParams::new(0.1, 0.0).unwrap();
        assert!(uncertainty_report(&s, &other).is_err());
        let r = uncertainty_report(&s, &params).unwrap();
        assert!((r.mean_g - coherent_mean_g(z, &params).unwrap()).abs() < 1e-12);
        assert!(r.mean_c.abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn correlation_forms_agree() {
        let params = p();
        let label = GisLabel::new(C64::new(0.4, 0.9), C64::new(0.3, 0.2));
        let dim = default_gis_dim(label);
        let s = gis_recurrence(label, &params, dim).unwrap();
        let a = correlation_operator(&s, dim, &params).unwrap();
        let b = correlation_operator_ladder(&s, dim, &params).unwrap();
        let scale = a.entries().iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(a.max_abs_diff_below(&b, dim) < 1e-14 * scale);
        let (ea, eb) = (a.expectation(s.amplitudes()), b.expectation(s.amplitudes()));
        assert!((ea - eb).norm() < 1e-12);
        let r = uncertainty_report(&s, &params).unwrap();
        let padded = s.padded(2);
        let c = correlation_operator(&padded, dim + 2, &params).unwrap();
        assert!((c.expectation(padded.amplitudes()).re - r.mean_c).abs() < 1e-12);
    }

    #[test]
    fn classification() {
        assert_eq!(gis_classify(GisLabel::new(ONE, ONE)), GisKind::Coherent);
        assert_eq!(
            gis_classify(GisLabel::new(C64::from_polar(1.0, 0.7), ONE)),
            GisKind::Coherent
        );
        assert_eq!(
            gis_classify(GisLabel::new(C64::new(2.0, 0.0), ONE)),
            GisKind::Squeezed
        );
    }
}
