//! Random variates by numeric cdf inversion or by rejection from the
//! symmetric component.
//!
//! The generator is ChaCha8 seeded with `seed_from_u64`. Independent streams
//! for parallel work are obtained with [`Sampler::with_stream`], which keeps
//! the seed and selects a different ChaCha stream.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dist::{StandardBaslg, SymmetricComponent};
use crate::error::{domain, Error, Result};

/// `sup_z f(z) / g(z) = (3 + 2√2) / 3`, attained where `αz = -√2`.
pub fn rejection_bound() -> f64 {
    (3.0 + 2.0 * std::f64::consts::SQRT_2) / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMethod {
    #[default]
    InverseCdf,
    Rejection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub method: SamplingMethod,
    pub seed: u64,
    /// Proposals allowed per accepted draw before giving up.
    pub max_rejection_rounds: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { method: SamplingMethod::InverseCdf, seed: 0, max_rejection_rounds: 10_000 }
    }
}

const QUANTILE_TOL: f64 = 1e-12;

/// Solve `cdf(z) = p` by a safeguarded Newton iteration inside a bracket.
fn invert(cdf: impl Fn(f64) -> f64, pdf: impl Fn(f64) -> f64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("probability {p} outside (0, 1)"));
    }
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while cdf(lo) > p {
        hi = lo;
        lo *= 2.0;
    }
    while cdf(hi) < p {
        lo = hi;
        hi *= 2.0;
    }
    // a few halvings make the Newton start reliable on bimodal shapes
    for _ in 0..8 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // relative in the smaller tail so extreme quantiles keep their digits
    let tol = QUANTILE_TOL * p.min(1.0 - p).min(0.5) * 2.0;
    let mut z = 0.5 * (lo + hi);
    for _ in 0..200 {
        let r = cdf(z) - p;
        if r.abs() <= tol {
            return Ok(z);
        }
        if r < 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        let d = pdf(z);
        let newton = z - r / d;
        z = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= f64::EPSILON * z.abs().max(1e-300) {
            return Ok(z);
        }
    }
    Ok(z)
}

/// Inverse of [`StandardBaslg::cdf`], accurate to `|cdf(z) - p| <= 1e-12`.
pub fn quantile(d: &StandardBaslg, p: f64) -> Result<f64> {
    invert(|z| d.cdf(z), |z| d.pdf(z), p)
}

/// Inverse of [`SymmetricComponent::cdf`].
pub fn symmetric_quantile(s: &SymmetricComponent, p: f64) -> Result<f64> {
    invert(|z| s.cdf(z), |z| s.pdf(z), p)
}

/// Seeded generator bound to one distribution.
#[derive(Debug, Clone)]
pub struct Sampler {
    dist: StandardBaslg,
    envelope: SymmetricComponent,
    cfg: SamplerConfig,
    rng: ChaCha8Rng,
    proposals: u64,
    accepted: u64,
}

impl Sampler {
    pub fn new(dist: StandardBaslg, cfg: SamplerConfig) -> Result<Self> {
        Self::with_stream(dist, cfg, 0)
    }

    pub fn with_stream(dist: StandardBaslg, cfg: SamplerConfig, stream: u64) -> Result<Self> {
        if cfg.max_rejection_rounds == 0 {
            return Err(Error::InvalidParameter("max_rejection_rounds must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        Ok(Sampler { dist, envelope: dist.symmetric_component(), cfg, rng, proposals: 0, accepted: 0 })
    }

    /// Uniform on the open interval (0, 1).
    fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn draw(&mut self) -> Result<f64> {
        match self.cfg.method {
            SamplingMethod::InverseCdf => {
                let u = self.uniform();
                quantile(&self.dist, u)
            }
            SamplingMethod::Rejection => self.draw_rejection(),
        }
    }

    fn draw_rejection(&mut self) -> Result<f64> {
        let bound = rejection_bound();
        for _ in 0..self.cfg.max_rejection_rounds {
            let v = self.uniform();
            let y = symmetric_quantile(&self.envelope, v)?;
            let u = self.uniform();
            self.proposals += 1;
            // both densities share C(α), so their ratio is a ratio of polynomials
            let ratio = self.dist.skew_factor(y) / self.envelope.even_factor(y);
            if u * bound < ratio {
                self.accepted += 1;
                return Ok(y);
            }
        }
        Err(Error::RejectionExhausted { rounds: self.cfg.max_rejection_rounds })
    }

    pub fn draw_n(&mut self, n: usize) -> Result<Vec<f64>> {
        (0..n).map(|_| self.draw()).collect()
    }

    /// Envelope proposals made so far by the rejection method.
    pub fn proposals(&self) -> u64 {
        self.proposals
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }
}

/// `n` draws from the standard law.
pub fn sample(d: &StandardBaslg, n: usize, cfg: SamplerConfig) -> Result<Vec<f64>> {
    Sampler::new(*d, cfg)?.draw_n(n)
}

/// `n` draws of `mu + beta * Z`.
pub fn sample_location_scale(alpha: f64, mu: f64, beta: f64, n: usize, cfg: SamplerConfig) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta.is_finite()) || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("need finite mu and beta > 0, got mu={mu} beta={beta}")));
    }
    let d = StandardBaslg::new(alpha)?;
    Ok(sample(&d, n, cfg)?.into_iter().map(|z| mu + beta * z).collect())
}
