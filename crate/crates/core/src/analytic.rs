//! Analytic representation: a state |f⟩ = Σ fₙ|n⟩ becomes the entire
//! function f(z) = Σ coeffₙ zⁿ with coeffₙ = fₙ e^{iα eₙ}/√F(n).
//!
//! In this picture A⁺ = z, N = z d/dz and A⁻ = (1+3ε) d/dz + (3ε/2) z d²/dz²,
//! and the intelligent-state eigen-equation becomes a Kummer equation. Its
//! solution e^{cz} ₁F₁(a; b; −2cz) is expanded here as a coefficient sequence
//! in multiprecision arithmetic.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::intelligent::GisLabel;
use crate::matrix::OperatorMatrix;
use crate::measure::{RadialQuadrature, CERTIFICATION_TOL};
use crate::mp::{real, MpComplex};
use crate::spectrum::{energy, ln_big_f_table, ModelParams};
use crate::states::FockVector;

/// Power-series coefficients of an entire function, with the model they
/// belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct EntireFunctionCoeffs {
    pub coeffs: Vec<C64>,
    pub params: ModelParams,
}

impl EntireFunctionCoeffs {
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// |coeff_{dim−1}| R^{dim−1}, the size of the last retained term on the
    /// circle of radius R.
    pub fn tail_at(&self, radius: f64) -> f64 {
        let n = self.dim() - 1;
        self.coeffs[n].norm() * radius.powi(n as i32)
    }

    /// f(z) by Horner's rule.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

/// coeffₙ = fₙ e^{iα eₙ}/√F(n).
pub fn to_analytic(state: &FockVector) -> EntireFunctionCoeffs {
    let p = *state.params();
    let lf = ln_big_f_table(state.dim() - 1, &p);
    let coeffs = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, f)| f * p.phase(n).conj() * (-0.5 * lf[n]).exp())
        .collect();
    EntireFunctionCoeffs { coeffs, params: p }
}

/// Inverse of [`to_analytic`]; no normalization is applied.
pub fn from_analytic(coeffs: &EntireFunctionCoeffs) -> Result<FockVector> {
    let p = coeffs.params;
    let lf = ln_big_f_table(coeffs.dim() - 1, &p);
    let amps = coeffs
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * p.phase(n) * (0.5 * lf[n]).exp())
        .collect();
    FockVector::new(amps, p)
}

/// A⁻, A⁺ and N acting on truncated coefficient sequences.
#[derive(Debug, Clone)]
pub struct AnalyticOperators {
    pub lower: OperatorMatrix,
    pub raise: OperatorMatrix,
    pub number: OperatorMatrix,
}

impl AnalyticOperators {
    pub fn lower(&self, f: &EntireFunctionCoeffs) -> EntireFunctionCoeffs {
        self.map(&self.lower, f)
    }

    pub fn raise(&self, f: &EntireFunctionCoeffs) -> EntireFunctionCoeffs {
        self.map(&self.raise, f)
    }

    pub fn number(&self, f: &EntireFunctionCoeffs) -> EntireFunctionCoeffs {
        self.map(&self.number, f)
    }

    fn map(&self, m: &OperatorMatrix, f: &EntireFunctionCoeffs) -> EntireFunctionCoeffs {
        EntireFunctionCoeffs {
            coeffs: m.apply(&f.coeffs),
            params: f.params,
        }
    }
}

/// (A⁻f)ₙ = [(1+3ε)(n+1) + (3ε/2)(n+1)n] f_{n+1}, (A⁺f)ₙ = f_{n−1},
/// (Nf)ₙ = n fₙ.
pub fn analytic_operators(dim: usize, params: &ModelParams) -> Result<AnalyticOperators> {
    if dim < 3 {
        return Err(invalid("dim", format!("must be at least 3, got {dim}")));
    }
    let e = params.epsilon();
    let mut lower = OperatorMatrix::zeros(dim);
    let mut raise = OperatorMatrix::zeros(dim);
    for n in 0..dim - 1 {
        let m = (n + 1) as f64;
        lower.set(
            n,
            n + 1,
            C64::new((1.0 + 3.0 * e) * m + 1.5 * e * m * n as f64, 0.0),
        );
        raise.set(n + 1, n, C64::new(1.0, 0.0));
    }
    let number = OperatorMatrix::from_diagonal(
        &(0..dim)
            .map(|n| C64::new(n as f64, 0.0))
            .collect::<Vec<_>>(),
    );
    Ok(AnalyticOperators {
        lower,
        raise,
        number,
    })
}

/// Which square root c = ±√(−υ/μ) the Kummer solution is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KummerBranch {
    Principal,
    Negated,
}

/// Starting precision in bits and the largest precision tried.
const START_PRECISION: usize = 128;
const MAX_PRECISION: usize = 8192;
/// Agreement demanded between two precisions, relative to the state norm.
const PRECISION_AGREEMENT: f64 = 1e-20;

/// Coefficients of e^{cz} ₁F₁(a; b; −2cz) for n < dim at `precision` bits,
/// with μ = (1+λ)(3ε/2), υ = 1−λ, c² = −υ/μ, b = 2/(3ε) + 2 and
/// a = b/2 − z′/(μc).
fn kummer_coeffs_at(
    label: GisLabel,
    params: &ModelParams,
    dim: usize,
    branch: KummerBranch,
    precision: usize,
) -> Vec<MpComplex> {
    let p = precision;
    let mp = |z: C64| MpComplex::new(z, p);
    let one = mp(C64::new(1.0, 0.0));
    let lambda = mp(label.lambda);
    let eps = real(params.epsilon(), p);
    let three_half_eps = &eps * real(1.5, p);
    let mu = one.add(&lambda).mul_real(&three_half_eps);
    let upsilon = one.sub(&lambda);
    let mut c = upsilon.neg().div(&mu).sqrt(p);
    if branch == KummerBranch::Negated {
        c = c.neg();
    }
    let b = real(2.0, p) / (real(3.0, p) * &eps) + real(2.0, p);
    let half_b = MpComplex::from_real(&b / real(2.0, p), p);
    let a = half_b.sub(&mp(label.z).div(&mu.mul(&c)));
    let minus_two_c = c.mul_real(&real(-2.0, p));

    // M_{m+1} = M_m (a+m)(−2c)/((b+m)(m+1)),  E_{k+1} = E_k c/(k+1)
    let mut m_terms = Vec::with_capacity(dim);
    let mut e_terms = Vec::with_capacity(dim);
    m_terms.push(one.clone());
    e_terms.push(one.clone());
    for m in 0..dim.saturating_sub(1) {
        let mf = real(m as f64, p);
        let num = a
            .add(&MpComplex::from_real(mf.clone(), p))
            .mul(&minus_two_c);
        let den = (&b + &mf) * real(m as f64 + 1.0, p);
        m_terms.push(m_terms[m].mul(&num).div_real(&den));
        e_terms.push(e_terms[m].mul(&c).div_real(&real(m as f64 + 1.0, p)));
    }
    (0..dim)
        .map(|n| {
            let mut acc = MpComplex::new(C64::new(0.0, 0.0), p);
            for m in 0..=n {
                acc = acc.add(&m_terms[m].mul(&e_terms[n - m]));
            }
            acc
        })
        .collect()
}

/// [`kummer_gis`] on a chosen branch of c.
pub fn kummer_gis_branch(
    label: GisLabel,
    params: &ModelParams,
    dim: usize,
    branch: KummerBranch,
) -> Result<EntireFunctionCoeffs> {
    if dim < 1 {
        return Err(invalid("dim", "must be at least 1"));
    }
    let finite = |c: C64| c.re.is_finite() && c.im.is_finite();
    if !finite(label.lambda) || !finite(label.z) {
        return Err(invalid("label", "must be finite"));
    }
    if label.lambda == C64::new(-1.0, 0.0) {
        return Err(invalid("lambda", "lambda = -1 admits no Kummer solution"));
    }
    if label.lambda == C64::new(1.0, 0.0) {
        return Err(Error::DegenerateLabel {
            reason: "lambda = 1 is the confluent limit; use the 0F1 kernel form instead".into(),
        });
    }
    let lf = ln_big_f_table(dim - 1, params);
    let weight: Vec<f64> = lf.iter().map(|l| (0.5 * l).exp()).collect();
    let mut p = START_PRECISION;
    let mut lo = kummer_coeffs_at(label, params, dim, branch, p);
    loop {
        let hi = kummer_coeffs_at(label, params, dim, branch, p + 64);
        let mut diff = 0.0;
        let mut norm = 0.0;
        for n in 0..dim {
            diff += (lo[n].sub(&hi[n]).to_c64() * weight[n]).norm_sqr();
            norm += (hi[n].to_c64() * weight[n]).norm_sqr();
        }
        if diff.sqrt() <= PRECISION_AGREEMENT * norm.sqrt() {
            return Ok(EntireFunctionCoeffs {
                coeffs: hi.iter().map(MpComplex::to_c64).collect(),
                params: *params,
            });
        }
        if p >= MAX_PRECISION {
            return Err(Error::Precision {
                function: "kummer_gis",
                loss: f64::INFINITY,
            });
        }
        p *= 2;
        lo = kummer_coeffs_at(label, params, dim, branch, p);
    }
}

/// The intelligent state of label (λ, z′) as the Kummer solution
/// e^{cz} ₁F₁(a; b; −2cz), principal branch of c, normalized to Φ(0) = 1.
pub fn kummer_gis(
    label: GisLabel,
    params: &ModelParams,
    dim: usize,
) -> Result<EntireFunctionCoeffs> {
    kummer_gis_branch(label, params, dim, KummerBranch::Principal)
}

/// Largest coefficient-wise residual of
/// (1+λ)(3ε/2)[(2/(3ε))(1+3ε) Φ′ + zΦ″] + (1−λ)zΦ − 2z′Φ
/// over the powers n ≤ dim − 2 that the truncation leaves intact.
pub fn verify_ode(coeffs: &EntireFunctionCoeffs, label: GisLabel, params: &ModelParams) -> f64 {
    let f = &coeffs.coeffs;
    let dim = f.len();
    let one = C64::new(1.0, 0.0);
    let mut worst = 0.0f64;
    for n in 0..dim.saturating_sub(1) {
        // coefficient of zⁿ: (1+λ)e_{n+1} f_{n+1} + (1−λ) f_{n−1} − 2z′ fₙ
        let mut r = (one + label.lambda) * energy(n + 1, params) * f[n + 1] - 2.0 * label.z * f[n];
        if n >= 1 {
            r += (one - label.lambda) * f[n - 1];
        }
        worst = worst.max(r.norm());
    }
    worst
}

/// Largest ε for which the Gaussian form is offered as a harmonic proxy.
pub const HARMONIC_PROXY_MAX_EPS: f64 = 1e-4;

/// Coefficients of Φ(0) exp(2z′z/(1+λ) + ((λ−1)/(λ+1)) z²/2), the ε → 0 form
/// of the Kummer solution, tagged with ε = `eps` and α = 0.
pub fn harmonic_limit_analytic(
    label: GisLabel,
    eps: f64,
    dim: usize,
) -> Result<EntireFunctionCoeffs> {
    if !(eps > 0.0 && eps <= HARMONIC_PROXY_MAX_EPS) {
        return Err(invalid(
            "eps",
            format!("must lie in (0, {HARMONIC_PROXY_MAX_EPS}], got {eps}"),
        ));
    }
    if label.lambda == C64::new(-1.0, 0.0) {
        return Err(invalid("lambda", "must differ from -1"));
    }
    if dim < 1 {
        return Err(invalid("dim", "must be at least 1"));
    }
    let params = ModelParams::new(eps, 0.0)?;
    let a = label.displacement();
    let q = label.squeeze();
    // Φ′ = (a + qz)Φ  ⇒  (n+1)Φ_{n+1} = aΦₙ + qΦ_{n−1}
    let mut c = vec![C64::new(0.0, 0.0); dim];
    c[0] = C64::new(1.0, 0.0);
    for n in 0..dim.saturating_sub(1) {
        let prev = if n >= 1 { c[n - 1] } else { C64::new(0.0, 0.0) };
        c[n + 1] = (a * c[n] + q * prev) / (n as f64 + 1.0);
    }
    Ok(EntireFunctionCoeffs { coeffs: c, params })
}

fn inner_on(f: &EntireFunctionCoeffs, g: &EntireFunctionCoeffs, quad: &RadialQuadrature) -> C64 {
    let n_phi = 2 * f.dim().max(g.dim()) + 2;
    let dphi = 2.0 * PI / n_phi as f64;
    let mut acc = C64::new(0.0, 0.0);
    for ((&r, &lh), &w) in quad
        .nodes()
        .iter()
        .zip(quad.ln_weight())
        .zip(quad.weights())
    {
        let radial = w * (lh + r.ln()).exp() * dphi;
        let mut ring = C64::new(0.0, 0.0);
        for j in 0..n_phi {
            let z = C64::from_polar(r, j as f64 * dphi);
            ring += f.eval(z).conj() * g.eval(z);
        }
        acc += ring * radial;
    }
    acc
}

/// ⟨f|g⟩ = ∫ conj(f(z)) g(z) h(|z|²) r dr dφ, certified by node doubling.
pub fn analytic_inner_product(
    f: &EntireFunctionCoeffs,
    g: &EntireFunctionCoeffs,
    quad: &RadialQuadrature,
) -> Result<C64> {
    if f.params.epsilon() != quad.params().epsilon()
        || g.params.epsilon() != quad.params().epsilon()
    {
        return Err(invalid(
            "quad",
            "quadrature was built for a different epsilon",
        ));
    }
    let top = f.dim().max(g.dim()) - 1;
    if top > quad.max_moment() {
        return Err(invalid(
            "quad",
            format!(
                "rule covers moments up to {}, need {top}",
                quad.max_moment()
            ),
        ));
    }
    let coarse = inner_on(f, g, quad);
    let fine = inner_on(f, g, &quad.doubled()?);
    let scale = (f.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
        * g.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>())
    .sqrt()
    .max(fine.norm());
    if (coarse - fine).norm() > CERTIFICATION_TOL * scale {
        return Err(Error::Quadrature {
            change: (coarse - fine).norm() / scale,
        });
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intelligent::gis_recurrence;
    use crate::spectrum::ladder_matrices;

    fn p() -> ModelParams {
        ModelParams::new(0.1, 0.4).unwrap()
    }

    #[test]
    fn vacuum_is_constant() {
        let v = FockVector::basis(0, 5, p()).unwrap();
        let f = to_analytic(&v);
        assert_eq!(f.coeffs[0], C64::new(1.0, 0.0));
        assert!(f.coeffs[1..].iter().all(|c| *c == C64::new(0.0, 0.0)));
    }

    #[test]
    fn operators_conjugate_to_ladder() {
        let params = p();
        let dim = 12;
        let ops = analytic_operators(dim, &params).unwrap();
        let ladder = ladder_matrices(dim, &params).unwrap();
        let lf = ln_big_f_table(dim - 1, &params);
        let s: Vec<C64> = (0..dim)
            .map(|n| params.phase(n).conj() * (-0.5 * lf[n]).exp())
            .collect();
        let s_inv: Vec<C64> = s.iter().map(|v| 1.0 / v).collect();
        let conj = |m: &OperatorMatrix| {
            let mut out = OperatorMatrix::zeros(dim);
            for i in 0..dim {
                for j in 0..dim {
                    out.set(i, j, s_inv[i] * m.get(i, j) * s[j]);
                }
            }
            out
        };
        assert!(conj(&ops.lower).max_abs_diff_below(&ladder.lower, dim) < 1e-12);
        assert!(conj(&ops.raise).max_abs_diff_below(&ladder.raise, dim) < 1e-12);
        let comm = ops.lower.commutator(&ops.raise);
        for n in 0..dim - 1 {
            assert!((comm.get(n, n).re - params.energy_gap(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn kummer_matches_recurrence_and_ode() {
        let params = p();
        let label = GisLabel::new(C64::new(0.5, 0.0), C64::new(1.0, 0.0));
        let k = kummer_gis(label, &params, 60).unwrap();
        assert!(verify_ode(&k, label, &params) < 1e-12);
        let fock = from_analytic(&k).unwrap().normalized().unwrap();
        let rec = gis_recurrence(label, &params, 60).unwrap();
        for n in 0..=20 {
            let (a, b) = (fock.amplitudes()[n], rec.amplitudes()[n]);
            assert!((a - b).norm() <= 1e-10 * b.norm().max(1e-12), "n = {n}");
        }
    }

    #[test]
    fn branches_agree() {
        let params = p();
        let label = GisLabel::new(C64::new(2.0, 1.0), C64::new(-0.5, 0.7));
        let a = kummer_gis_branch(label, &params, 30, KummerBranch::Principal).unwrap();
        let b = kummer_gis_branch(label, &params, 30, KummerBranch::Negated).unwrap();
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            assert!((x - y).norm() <= 1e-13 * y.norm().max(1e-300));
        }
    }

    #[test]
    fn special_labels_are_rejected() {
        let params = p();
        let one = C64::new(1.0, 0.0);
        assert!(matches!(
            kummer_gis(GisLabel::new(one, one), &params, 5),
            Err(Error::DegenerateLabel { .. })
        ));
        assert!(kummer_gis(GisLabel::new(-one, one), &params, 5).is_err());
    }

    #[test]
    fn gaussian_limit_coefficients() {
        let label = GisLabel::new(C64::new(2.0, 0.0), C64::new(1.0, 0.0));
        let g = harmonic_limit_analytic(label, 1e-6, 4).unwrap();
        let a = 2.0 / 3.0;
        let q = 1.0 / 3.0;
        assert!((g.coeffs[1].re - a).abs() < 1e-15);
        assert!((g.coeffs[2].re - (a * a / 2.0 + q / 2.0)).abs() < 1e-15);
        assert!(harmonic_limit_analytic(label, 1e-3, 4).is_err());
    }
}
