//! The radial measure that resolves the identity over coherent states, and
//! quadrature-based checks of it.
//!
//! The weight is h(x) = 4(βx)^{ν/2} K_ν(2√(βx)) / (3πε Γ(2+β)) with
//! β = 2/(3ε) and ν = 1 + β, so that
//! ∫₀^∞ xⁿ h(x) dx = F(n)/π for every n.
//!
//! All radial integrals are taken in r = √x with composite Gauss–Legendre
//! panels on [0, r_max]. Each integral is certified by repeating it with twice
//! as many nodes.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::matrix::OperatorMatrix;
use crate::specfun::{ln_bessel_k, ln_gamma, SeriesPolicy};
use crate::spectrum::{energy, ln_big_f_table, ModelParams};
use crate::states::{ln_parity_cat_norm_inv, FockVector, Parity};

/// Gauss–Legendre nodes per panel.
pub const PANEL_ORDER: usize = 16;
/// Default total number of radial nodes.
pub const DEFAULT_NODES: usize = 512;
/// Relative change tolerated when the node count is doubled.
pub const CERTIFICATION_TOL: f64 = 1e-9;
/// ln(1e18): the cutoff depth below the integrand peak.
const LN_TAIL_DEPTH: f64 = 41.446_531_673_892_82;

/// Order ν = 1 + 2/(3ε) of the Bessel function in the weight.
pub fn weight_order(params: &ModelParams) -> f64 {
    1.0 + params.beta()
}

/// ln h(x).
pub fn ln_weight_h(x: f64, params: &ModelParams) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid(
            "x",
            format!("must be positive and finite, got {x}"),
        ));
    }
    let beta = params.beta();
    let nu = weight_order(params);
    let t = (beta * x).sqrt();
    let lk = ln_bessel_k(nu, 2.0 * t, &SeriesPolicy::default())?;
    Ok(
        4f64.ln() + nu * t.ln() - (3.0 * PI * params.epsilon()).ln() - ln_gamma(params.kappa())?
            + lk,
    )
}

/// h(x), the radial weight of the coherent-state measure.
pub fn weight_h(x: f64, params: &ModelParams) -> Result<f64> {
    Ok(ln_weight_h(x, params)?.exp())
}

/// Composite Gauss–Legendre rule on [0, r_max] carrying ln h(r²) at its nodes.
#[derive(Debug, Clone)]
pub struct RadialQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    ln_h: Vec<f64>,
    r_max: f64,
    n_nodes: usize,
    max_moment: usize,
    params: ModelParams,
}

/// ln of r^{2m+1} h(r²).
fn ln_moment_integrand(m: usize, r: f64, params: &ModelParams) -> Result<f64> {
    Ok((2 * m + 1) as f64 * r.ln() + ln_weight_h(r * r, params)?)
}

/// Radius beyond which r^{2m+1}h(r²) stays below 1e-18 of its peak.
fn tail_radius(m: usize, params: &ModelParams) -> Result<f64> {
    let f = |r: f64| ln_moment_integrand(m, r, params);
    let guess = (2.0 * m as f64 + 0.5 + weight_order(params)) / (2.0 * params.beta().sqrt());
    let mut best_r = guess;
    let mut best = f(guess)?;
    for k in -40..=40 {
        let r = guess * (k as f64 / 10.0).exp();
        let v = f(r)?;
        if v > best {
            best = v;
            best_r = r;
        }
    }
    let target = best - LN_TAIL_DEPTH;
    let mut lo = best_r;
    let mut hi = best_r * 1.1;
    while f(hi)? > target {
        lo = hi;
        hi *= 1.1;
        if hi > 1e8 {
            return Err(Error::Quadrature {
                change: f64::INFINITY,
            });
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

impl RadialQuadrature {
    /// A rule accurate for moments up to r^{2·max_moment+1}; `n_nodes` is
    /// rounded up to a whole number of panels.
    pub fn new(params: &ModelParams, max_moment: usize, n_nodes: usize) -> Result<Self> {
        let r_max = tail_radius(max_moment, params)?.max(tail_radius(0, params)?);
        Self::with_cutoff(params, max_moment, n_nodes, r_max)
    }

    /// A rule with [`DEFAULT_NODES`] nodes.
    pub fn for_moments(params: &ModelParams, max_moment: usize) -> Result<Self> {
        Self::new(params, max_moment, DEFAULT_NODES)
    }

    fn with_cutoff(
        params: &ModelParams,
        max_moment: usize,
        n_nodes: usize,
        r_max: f64,
    ) -> Result<Self> {
        if n_nodes < 2 * PANEL_ORDER {
            return Err(invalid(
                "n_nodes",
                format!("must be at least {}", 2 * PANEL_ORDER),
            ));
        }
        let panels = n_nodes.div_ceil(PANEL_ORDER);
        let gl = GaussLegendre::new(PANEL_ORDER).map_err(|e| invalid("n_nodes", e.to_string()))?;
        let width = r_max / panels as f64;
        let mut nodes = Vec::with_capacity(panels * PANEL_ORDER);
        let mut weights = Vec::with_capacity(panels * PANEL_ORDER);
        for p in 0..panels {
            let a = p as f64 * width;
            for &(x, w) in gl.as_node_weight_pairs() {
                nodes.push(a + 0.5 * width * (x + 1.0));
                weights.push(0.5 * width * w);
            }
        }
        let ln_h = nodes
            .par_iter()
            .map(|&r| ln_weight_h(r * r, params))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            n_nodes: nodes.len(),
            nodes,
            weights,
            ln_h,
            r_max,
            max_moment,
            params: *params,
        })
    }

    /// The same interval with twice the nodes.
    pub fn doubled(&self) -> Result<Self> {
        Self::with_cutoff(&self.params, self.max_moment, 2 * self.n_nodes, self.r_max)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// ln h(r²) at each node.
    pub fn ln_weight(&self) -> &[f64] {
        &self.ln_h
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn max_moment(&self) -> usize {
        self.max_moment
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Σᵢ wᵢ f(rᵢ, ln h(rᵢ²)), evaluated in parallel and summed in node order.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let vals: Vec<f64> = self
            .nodes
            .par_iter()
            .zip(self.ln_h.par_iter())
            .zip(self.weights.par_iter())
            .map(|((&r, &lh), &w)| w * f(r, lh))
            .collect();
        vals.iter().sum()
    }

    fn check_params(&self, params: &ModelParams) -> Result<()> {
        if self.params.epsilon() != params.epsilon() {
            return Err(invalid(
                "quad",
                "quadrature was built for a different epsilon",
            ));
        }
        Ok(())
    }

    fn check_moment(&self, m: usize) -> Result<()> {
        if m > self.max_moment {
            return Err(invalid(
                "quad",
                format!("rule covers moments up to {}, need {m}", self.max_moment),
            ));
        }
        Ok(())
    }
}

/// Integral on `quad` and on its refinement; fails if they disagree.
fn certified<F>(quad: &RadialQuadrature, fine: &RadialQuadrature, f: F) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let a = quad.integrate(&f);
    let b = fine.integrate(&f);
    let change = ((a - b) / b).abs();
    if !(change <= CERTIFICATION_TOL) {
        return Err(Error::Quadrature { change });
    }
    Ok(b)
}

/// Result of a moment check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCheck {
    pub computed: f64,
    pub expected: f64,
    pub rel_err: f64,
}

/// ∫₀^∞ y^{n−1} g(y) dy with g(y) = (3πε/2) Γ(2+β) h(3εy/2), against
/// Γ(n) Γ(n + β + 1).
pub fn moment_check(
    n: usize,
    params: &ModelParams,
    quad: &RadialQuadrature,
) -> Result<MomentCheck> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    quad.check_params(params)?;
    quad.check_moment(n)?;
    let fine = quad.doubled()?;
    let beta = params.beta();
    let ln_expected = ln_gamma(n as f64)? + ln_gamma(n as f64 + beta + 1.0)?;
    let ln_g_const = (1.5 * PI * params.epsilon()).ln() + ln_gamma(params.kappa())?;
    // y = βr², dy = 2βr dr
    let ratio = certified(quad, &fine, |r, lh| {
        let ln_y = beta.ln() + 2.0 * r.ln();
        ((n as f64 - 1.0) * ln_y + ln_g_const + lh + (2.0 * beta * r).ln() - ln_expected).exp()
    })?;
    let expected = ln_expected.exp();
    Ok(MomentCheck {
        computed: ratio * expected,
        expected,
        rel_err: (ratio - 1.0).abs(),
    })
}

/// M_{mn} = ∫⟨m|z⟩⟨z|n⟩dμ(z). Off-diagonal entries vanish by the angular
/// integral and are exact zeros; diagonal entries are
/// (2π/F(n)) ∫ r^{2n+1} h(r²) dr.
pub fn resolution_of_unity(
    dim: usize,
    params: &ModelParams,
    quad: &RadialQuadrature,
) -> Result<OperatorMatrix> {
    if dim < 1 {
        return Err(invalid("dim", "must be at least 1"));
    }
    quad.check_params(params)?;
    quad.check_moment(dim - 1)?;
    let fine = quad.doubled()?;
    let lf = ln_big_f_table(dim - 1, params);
    let mut diag = Vec::with_capacity(dim);
    for (n, &lfn) in lf.iter().enumerate() {
        let c = (2.0 * PI).ln() - lfn;
        let v = certified(quad, &fine, |r, lh| {
            (c + (2 * n + 1) as f64 * r.ln() + lh).exp()
        })?;
        diag.push(C64::new(v, 0.0));
    }
    Ok(OperatorMatrix::from_diagonal(&diag))
}

/// Density [N_parity(r)]⁻² h(r²) r of the even or odd cat measure.
pub fn cat_measures(parity: Parity, r: f64, _phi: f64, params: &ModelParams) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid(
            "r",
            format!("must be positive and finite, got {r}"),
        ));
    }
    let ln_inv = ln_parity_cat_norm_inv(parity, C64::new(r, 0.0), params)?;
    Ok((ln_inv + ln_weight_h(r * r, params)? + r.ln()).exp())
}

/// Diagonal of Σ_parity ∫|z⟩_p⟨z|_p dμ_p(z) for the even and odd cats,
/// each projector weighted by its own density; off-diagonals vanish by the
/// angular integral.
pub fn cat_completeness(
    dim: usize,
    params: &ModelParams,
    quad: &RadialQuadrature,
) -> Result<Vec<f64>> {
    quad.check_params(params)?;
    quad.check_moment(dim.saturating_sub(1))?;
    let fine = quad.doubled()?;
    let lf = ln_big_f_table(dim.saturating_sub(1), params);
    let mut out = Vec::with_capacity(dim);
    for (n, &lfn) in lf.iter().enumerate() {
        let parity = if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        };
        let integrand = |r: f64, lh: f64| {
            let ln_inv = match ln_parity_cat_norm_inv(parity, C64::new(r, 0.0), params) {
                Ok(v) => v,
                Err(_) => return f64::NAN,
            };
            // |⟨n|z⟩_p|² = N_p(r)² r^{2n}/F(n)
            let prob = (-ln_inv + 2.0 * n as f64 * r.ln() - lfn).exp();
            let density = (ln_inv + lh + r.ln()).exp();
            2.0 * PI * prob * density
        };
        out.push(certified(quad, &fine, integrand)?);
    }
    Ok(out)
}

fn reconstruct_on(state: &FockVector, quad: &RadialQuadrature) -> Vec<C64> {
    let dim = state.dim();
    let p = state.params();
    let lf = ln_big_f_table(dim - 1, p);
    let n_phi = 2 * dim + 2;
    let dphi = 2.0 * PI / n_phi as f64;
    // e^{−iα eₙ} phases of |z⟩
    let phase: Vec<C64> = (0..dim)
        .map(|n| C64::from_polar(1.0, -p.alpha() * energy(n, p)))
        .collect();
    let b = state.amplitudes();
    let per_node: Vec<Vec<C64>> = quad
        .nodes()
        .par_iter()
        .zip(quad.ln_weight().par_iter())
        .zip(quad.weights().par_iter())
        .map(|((&r, &lh), &w)| {
            // sₙ(r) = rⁿ/√F(n) · √(h(r²) r)
            let s: Vec<f64> = (0..dim)
                .map(|n| (n as f64 * r.ln() - 0.5 * lf[n] + 0.5 * (lh + r.ln())).exp())
                .collect();
            let mut acc = vec![C64::new(0.0, 0.0); dim];
            for j in 0..n_phi {
                let phi = j as f64 * dphi;
                // ⟨z|g⟩ without a₀
                let overlap: C64 = (0..dim)
                    .map(|n| {
                        s[n] * C64::from_polar(1.0, -(n as f64) * phi) * phase[n].conj() * b[n]
                    })
                    .sum();
                for m in 0..dim {
                    acc[m] += s[m] * C64::from_polar(1.0, m as f64 * phi) * phase[m] * overlap;
                }
            }
            acc.into_iter().map(|v| v * (w * dphi)).collect()
        })
        .collect();
    let mut out = vec![C64::new(0.0, 0.0); dim];
    for v in &per_node {
        for (o, x) in out.iter_mut().zip(v) {
            *o += x;
        }
    }
    out
}

/// ∫⟨z|g⟩|z⟩dμ(z) on a radial × uniform angular product rule.
pub fn reconstruct(
    state: &FockVector,
    quad: &RadialQuadrature,
    params: &ModelParams,
) -> Result<FockVector> {
    quad.check_params(params)?;
    quad.check_moment(state.dim() - 1)?;
    let coarse = reconstruct_on(state, quad);
    let fine = reconstruct_on(state, &quad.doubled()?);
    let diff: f64 = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale = fine.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if diff > CERTIFICATION_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Quadrature {
            change: diff / scale,
        });
    }
    FockVector::new(fine, *state.params())
}
