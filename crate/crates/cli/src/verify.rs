//! Verification suites run by `anharmonic verify <suite>`.

use anharmonic::intelligent::{
    default_gis_dim, gis_closed_form, gis_fraction_amplitudes, gis_operator_series, gis_recurrence,
    uncertainty_report, GisLabel,
};
use anharmonic::measure::{moment_check, resolution_of_unity, RadialQuadrature};
use anharmonic::spectrum::{energy, ladder_matrices, su11_generators};
use anharmonic::states::{default_dim, harmonic_limit_fidelity};
use anharmonic::{FockVector, ModelParams, Result};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Unity,
    Moments,
    Algebra,
    GisEquivalence,
    Rs,
    Limit,
}

/// Inputs a suite may use; unset values fall back to suite defaults.
pub struct SuiteConfig {
    pub epsilon: Option<f64>,
    pub alpha: f64,
    pub z: Option<C64>,
    pub lambda: Option<C64>,
    pub dim: Option<usize>,
    pub tol: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub limit: f64,
    pub relation: Relation,
}

impl Check {
    fn at_most(name: impl Into<String>, observed: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            observed,
            limit,
            relation: Relation::AtMost,
        }
    }

    fn at_least(name: impl Into<String>, observed: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            observed,
            limit,
            relation: Relation::AtLeast,
        }
    }

    pub fn passed(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.observed <= self.limit,
            Relation::AtLeast => self.observed >= self.limit,
        }
    }
}

/// Checks plus an optional data sweep (ε, fidelity, vacuum product).
pub struct SuiteResult {
    pub checks: Vec<Check>,
    pub sweep: Vec<[f64; 3]>,
}

pub fn fmt_complex(z: C64) -> String {
    format!("{},{}", z.re, z.im)
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteResult> {
    let checks = match suite {
        Suite::Unity => unity(cfg)?,
        Suite::Moments => moments(cfg)?,
        Suite::Algebra => algebra(cfg)?,
        Suite::GisEquivalence => gis_equivalence(cfg)?,
        Suite::Rs => rs(cfg)?,
        Suite::Limit => return limit(cfg),
    };
    Ok(SuiteResult {
        checks,
        sweep: Vec::new(),
    })
}

fn params(cfg: &SuiteConfig) -> Result<ModelParams> {
    ModelParams::new(cfg.epsilon.unwrap_or(0.1), cfg.alpha)
}

fn unity(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let p = params(cfg)?;
    let dim = cfg.dim.unwrap_or(20);
    let quad = RadialQuadrature::for_moments(&p, dim.saturating_sub(1))?;
    let m = resolution_of_unity(dim, &p, &quad)?;
    let mut diag: f64 = 0.0;
    let mut off: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                diag = diag.max((m.get(i, j) - 1.0).norm());
            } else {
                off = off.max(m.get(i, j).norm());
            }
        }
    }
    Ok(vec![
        Check::at_most("max |diagonal - 1|", diag, cfg.tol.unwrap_or(1e-6)),
        Check::at_most("max |off-diagonal|", off, 0.0),
    ])
}

fn moments(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let p = params(cfg)?;
    let top = cfg.dim.unwrap_or(20).max(1);
    let quad = RadialQuadrature::for_moments(&p, top)?;
    (1..=top)
        .map(|n| {
            let m = moment_check(n, &p, &quad)?;
            Ok(Check::at_most(
                format!("moment n={n} relative error"),
                m.rel_err,
                cfg.tol.unwrap_or(1e-7),
            ))
        })
        .collect()
}

fn algebra(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let p = params(cfg)?;
    let eps = p.epsilon();
    let dim = cfg.dim.unwrap_or(25);
    let tol = cfg.tol.unwrap_or(1e-12);
    let l = ladder_matrices(dim, &p)?;
    let s = su11_generators(dim, &p)?;
    let comm = l.lower.commutator(&l.raise);
    let h = l.raise.matmul(&l.lower);
    let jc = s.j_minus.commutator(&s.j_plus);
    let b = 1.0 / (3.0 * eps);
    let (mut c1, mut c2, mut c3, mut c4) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    // the last row and column carry the truncation defect
    for i in 0..dim - 1 {
        for j in 0..dim - 1 {
            let gap = if i == j {
                1.0 + 3.0 * eps * (i as f64 + 1.0)
            } else {
                0.0
            };
            c1 = c1.max((comm.get(i, j) - gap).norm());
            let e = if i == j { energy(i, &p) } else { 0.0 };
            c2 = c2.max((h.get(i, j) - e).norm() / e.max(1.0));
            let j12 = s.j12.get(i, j);
            c3 = c3.max((jc.get(i, j) - j12).norm() / j12.norm().max(1.0));
        }
        let cas = s.casimir.get(i, i).re;
        c4 = c4.max((cas - b * (b + 1.0)).abs() / (b * (b + 1.0)));
    }
    Ok(vec![
        Check::at_most("[A-,A+] - (1 + 3eps(N+1))", c1, tol),
        Check::at_most("A+A- - H, relative", c2, tol),
        Check::at_most("[J-,J+] - J12, relative", c3, tol),
        Check::at_most("Casimir eigenvalue, relative", c4, tol),
    ])
}

fn gis_labels(cfg: &SuiteConfig) -> Vec<GisLabel> {
    if cfg.lambda.is_none() && cfg.z.is_none() {
        let c = C64::new;
        return vec![
            GisLabel::new(c(0.5, 0.0), c(1.0, 0.0)),
            GisLabel::new(c(2.0, 0.0), c(1.0, 0.0)),
            GisLabel::new(c(2.0, 1.0), c(0.0, 2.0)),
            GisLabel::new(c(0.8, 0.6), c(0.5, -1.2)),
            GisLabel::new(c(1.5, -0.7), c(0.7, 0.7)),
            GisLabel::new(c(1.0, 0.0), c(-1.0, 0.5)),
        ];
    }
    vec![GisLabel::new(
        cfg.lambda.unwrap_or(C64::new(1.0, 0.0)),
        cfg.z.unwrap_or(C64::new(1.0, 0.0)),
    )]
}

/// Largest relative amplitude difference for n ≤ 15 after removing the
/// phase of c₀.
fn gauge_diff(a: &FockVector, b: &FockVector) -> f64 {
    let ph = |v: &FockVector| v.amplitudes()[0] / v.amplitudes()[0].norm();
    let (pa, pb) = (ph(a), ph(b));
    (0..=15.min(b.dim() - 1))
        .filter(|&n| b.amplitudes()[n].norm() > 1e-300)
        .map(|n| {
            let (x, y) = (a.amplitudes()[n] / pa, b.amplitudes()[n] / pb);
            (x - y).norm() / y.norm()
        })
        .fold(0.0, f64::max)
}

fn gis_equivalence(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let p = params(cfg)?;
    gis_labels(cfg)
        .into_iter()
        .map(|label| {
            let dim = cfg.dim.unwrap_or_else(|| default_gis_dim(label));
            let mut routes = vec![
                gis_recurrence(label, &p, dim)?,
                gis_fraction_amplitudes(label, &p, dim)?,
                gis_operator_series(label, &p, dim)?,
            ];
            if label.z.norm() > 0.0 {
                routes.push(gis_closed_form(label, &p, dim)?);
            }
            let mut worst: f64 = 0.0;
            for i in 0..routes.len() {
                for j in 0..i {
                    worst = worst.max(gauge_diff(&routes[i], &routes[j]));
                }
            }
            Ok(Check::at_most(
                format!(
                    "lambda={} z={} pairwise difference",
                    fmt_complex(label.lambda),
                    fmt_complex(label.z)
                ),
                worst,
                cfg.tol.unwrap_or(1e-9),
            ))
        })
        .collect()
}

fn rs(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let p = params(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut gap = f64::INFINITY;
    for _ in 0..100 {
        let dim = cfg.dim.unwrap_or_else(|| rng.gen_range(3..30));
        let amps = (0..dim)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let s = FockVector::new(amps, p)?.normalized()?;
        let r = uncertainty_report(&s, &p)?;
        gap = gap.min(r.rs_left - r.rs_right);
    }
    let label = GisLabel::new(
        cfg.lambda.unwrap_or(C64::new(2.0, 0.0)),
        cfg.z.unwrap_or(C64::new(1.0, 0.0)),
    );
    let v = gis_recurrence(label, &p, default_gis_dim(label))?;
    let r = uncertainty_report(&v, &p)?;
    Ok(vec![
        Check::at_least("100 random states: min(lhs - rhs)", gap, -1e-9),
        Check::at_most(
            format!(
                "GIS lambda={} z={} saturation |lhs - rhs|/rhs",
                fmt_complex(label.lambda),
                fmt_complex(label.z)
            ),
            r.residual.abs() / r.rs_right,
            cfg.tol.unwrap_or(1e-8),
        ),
        Check::at_most(
            "GIS var_x/var_p - |lambda|^2, relative",
            (r.var_x / r.var_p - label.lambda.norm_sqr()).abs() / label.lambda.norm_sqr(),
            cfg.tol.unwrap_or(1e-8),
        ),
    ])
}

fn limit(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let z = cfg.z.unwrap_or(C64::new(1.0, 0.0));
    let dim = cfg.dim.unwrap_or_else(|| default_dim(z.norm()));
    let seq = [0.1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let fid = harmonic_limit_fidelity(z, cfg.alpha, &seq, dim)?;
    let mut sweep = Vec::with_capacity(seq.len());
    let mut vac_err: f64 = 0.0;
    for (&eps, &f) in seq.iter().zip(&fid) {
        let p = ModelParams::new(eps, cfg.alpha)?;
        let r = uncertainty_report(&FockVector::basis(0, 5, p)?, &p)?;
        let prod = (r.var_x * r.var_p).sqrt();
        vac_err = vac_err.max((prod - (1.0 + 3.0 * eps) / 2.0).abs());
        sweep.push([eps, f, prod]);
    }
    let drop = fid
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::NEG_INFINITY, f64::max);
    let checks = vec![
        Check::at_most(
            "1 - fidelity at eps=1e-6",
            1.0 - fid[fid.len() - 1],
            cfg.tol.unwrap_or(1e-5),
        ),
        Check::at_most("largest fidelity decrease along the sweep", drop, 1e-12),
        Check::at_most("vacuum |dX dP - (1+3eps)/2|", vac_err, 1e-15),
    ];
    Ok(SuiteResult { checks, sweep })
}
