//! Energy spectrum, ladder operators and the su(1,1) realization of the
//! x⁴-anharmonic oscillator.
//!
//! The spectrum in units of the oscillator frequency is
//! eₙ = n + (3ε/2)(n² + n), and the ladder operators act as
//! A⁺|n⟩ = √eₙ₊₁ e^{−iα(eₙ₊₁−eₙ)}|n+1⟩ with A⁻ = (A⁺)†, so that A⁺A⁻ = H.

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::matrix::OperatorMatrix;

/// Anharmonicity ε and the temporal-stability parameter α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    epsilon: f64,
    alpha: f64,
}

impl ModelParams {
    pub fn new(epsilon: f64, alpha: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(invalid(
                "epsilon",
                format!("must be positive and finite, got {epsilon}"),
            ));
        }
        if !alpha.is_finite() {
            return Err(invalid("alpha", format!("must be finite, got {alpha}")));
        }
        Ok(Self { epsilon, alpha })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.epsilon, alpha)
    }

    /// β = 2/(3ε).
    pub fn beta(&self) -> f64 {
        2.0 / (3.0 * self.epsilon)
    }

    /// B = 1/(3ε).
    pub fn half_beta(&self) -> f64 {
        1.0 / (3.0 * self.epsilon)
    }

    /// Lower parameter 2 + β of the ₀F₁ normalization.
    pub fn kappa(&self) -> f64 {
        2.0 + self.beta()
    }

    /// eₙ.
    pub fn energy(&self, n: usize) -> f64 {
        energy(n, self)
    }

    /// eₙ₊₁ − eₙ = 1 + 3ε(n + 1).
    pub fn energy_gap(&self, n: usize) -> f64 {
        1.0 + 3.0 * self.epsilon * (n as f64 + 1.0)
    }

    /// e^{−iα eₙ}.
    pub fn phase(&self, n: usize) -> C64 {
        C64::from_polar(1.0, -self.alpha * self.energy(n))
    }
}

/// eₙ = n + (3ε/2)(n² + n).
pub fn energy(n: usize, params: &ModelParams) -> f64 {
    let x = n as f64;
    x + 1.5 * params.epsilon * (x * (x + 1.0))
}

/// ln F(n) = Σ_{k=1}^{n} ln eₖ.
pub fn ln_big_f(n: usize, params: &ModelParams) -> f64 {
    (1..=n).map(|k| energy(k, params).ln()).sum()
}

/// [ln F(0), …, ln F(n_max)].
pub fn ln_big_f_table(n_max: usize, params: &ModelParams) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n_max {
        acc += energy(k, params).ln();
        out.push(acc);
    }
    out
}

/// F(n) = e₁e₂⋯eₙ, F(0) = 1.
pub fn big_f(n: usize, params: &ModelParams) -> Result<f64> {
    let v = if n <= 30 {
        (1..=n).map(|k| energy(k, params)).product()
    } else {
        ln_big_f(n, params).exp()
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { function: "big_f" })
    }
}

/// F(n)^{1/n} for n = 1..=n_max.
pub fn radius_growth(n_max: usize, params: &ModelParams) -> Vec<f64> {
    let table = ln_big_f_table(n_max, params);
    (1..=n_max).map(|n| (table[n] / n as f64).exp()).collect()
}

/// Number eigenvalue recovered from an energy eigenvalue,
/// N = √(2e/(3ε) + (1/2 + 1/(3ε))²) − (1/2 + 1/(3ε)).
pub fn number_from_hamiltonian(e: f64, params: &ModelParams) -> f64 {
    let s = 0.5 + params.half_beta();
    let u = 2.0 * e / (3.0 * params.epsilon);
    // rationalized form of √(u + s²) − s
    u / ((u + s * s).sqrt() + s)
}

/// Truncated A⁻, A⁺, N and H.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub lower: OperatorMatrix,
    pub raise: OperatorMatrix,
    pub number: OperatorMatrix,
    pub hamiltonian: OperatorMatrix,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(invalid("dim", format!("must be at least 2, got {dim}")));
    }
    Ok(())
}

/// A⁺ on the first `dim` levels.
pub fn raising_matrix(dim: usize, params: &ModelParams) -> Result<OperatorMatrix> {
    check_dim(dim)?;
    let mut m = OperatorMatrix::zeros(dim);
    for n in 0..dim - 1 {
        let amp = energy(n + 1, params).sqrt();
        let phase = C64::from_polar(1.0, -params.alpha * params.energy_gap(n));
        m.set(n + 1, n, phase * amp);
    }
    Ok(m)
}

/// Truncated ladder set. Commutators are exact below the truncation edge.
pub fn ladder_matrices(dim: usize, params: &ModelParams) -> Result<Ladder> {
    let raise = raising_matrix(dim, params)?;
    let lower = raise.adjoint();
    let number = OperatorMatrix::from_diagonal(
        &(0..dim)
            .map(|n| C64::new(n as f64, 0.0))
            .collect::<Vec<_>>(),
    );
    let hamiltonian = OperatorMatrix::from_diagonal(
        &(0..dim)
            .map(|n| C64::new(energy(n, params), 0.0))
            .collect::<Vec<_>>(),
    );
    Ok(Ladder {
        lower,
        raise,
        number,
        hamiltonian,
    })
}

/// su(1,1) generators J± = A±/√(3ε), J₁₂ = N + 1 + 1/(3ε) and the Casimir
/// C = J₁₂(J₁₂ − 1) − 2J₊J₋.
#[derive(Debug, Clone)]
pub struct Su11 {
    pub j_minus: OperatorMatrix,
    pub j_plus: OperatorMatrix,
    pub j12: OperatorMatrix,
    pub casimir: OperatorMatrix,
}

pub fn su11_generators(dim: usize, params: &ModelParams) -> Result<Su11> {
    let ladder = ladder_matrices(dim, params)?;
    let s = C64::new((1.0 / (3.0 * params.epsilon)).sqrt(), 0.0);
    let j_minus = ladder.lower.scale(s);
    let j_plus = ladder.raise.scale(s);
    let j12 = OperatorMatrix::from_diagonal(
        &(0..dim)
            .map(|n| C64::new(n as f64 + 1.0 + params.half_beta(), 0.0))
            .collect::<Vec<_>>(),
    );
    let id = OperatorMatrix::identity(dim);
    let casimir = &j12.matmul(&(&j12 - &id)) - &j_plus.matmul(&j_minus).scale(C64::new(2.0, 0.0));
    Ok(Su11 {
        j_minus,
        j_plus,
        j12,
        casimir,
    })
}

/// The Casimir eigenvalue (1/(3ε))(1/(3ε) + 1).
pub fn casimir_eigenvalue(params: &ModelParams) -> f64 {
    let b = params.half_beta();
    b * (b + 1.0)
}
