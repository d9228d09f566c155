//! Location-scale family and the competitor densities it is compared with.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use statrs::function::erf::erfc;

use crate::dist::StandardBaslg;
use crate::error::{domain, Error, Result};
use crate::sampler::{sample_location_scale, SamplerConfig};
use crate::specfn::ln_logistic_kernel;

/// Lower bound on every scale parameter.
pub const MIN_SCALE: f64 = 1e-8;
/// Box half-width for shape parameters (`α`, `λ`).
pub const SHAPE_BOUND: f64 = 50.0;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Model families available to the fitting engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Normal,
    Logistic,
    Laplace,
    SkewNormal,
    AlphaSkewLogistic,
    Baslg,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Normal,
        Family::Logistic,
        Family::Laplace,
        Family::SkewNormal,
        Family::AlphaSkewLogistic,
        Family::Baslg,
    ];

    /// Short identifier used on the command line.
    pub fn id(self) -> &'static str {
        match self {
            Family::Normal => "n",
            Family::Logistic => "lg",
            Family::Laplace => "la",
            Family::SkewNormal => "sn",
            Family::AlphaSkewLogistic => "aslg",
            Family::Baslg => "baslg2",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::Normal => "N",
            Family::Logistic => "LG",
            Family::Laplace => "La",
            Family::SkewNormal => "SN",
            Family::AlphaSkewLogistic => "ASLG",
            Family::Baslg => "BASLG2",
        }
    }

    /// Parameter names in vector order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Normal => &["mu", "sigma"],
            Family::Logistic | Family::Laplace => &["mu", "beta"],
            Family::SkewNormal => &["lambda", "mu", "sigma"],
            Family::AlphaSkewLogistic | Family::Baslg => &["alpha", "mu", "beta"],
        }
    }

    pub fn n_params(self) -> usize {
        self.param_names().len()
    }

    fn has_shape(self) -> bool {
        self.n_params() == 3
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.id() == lower || f.label().to_ascii_lowercase() == lower)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family '{s}'")))
    }
}

pub(crate) fn check_data(data: &[f64]) -> Result<()> {
    if data.is_empty() {
        return domain("empty data");
    }
    if let Some(i) = data.iter().position(|y| !y.is_finite()) {
        return domain(format!("non-finite value at index {i}"));
    }
    Ok(())
}

fn check_scale(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
    }
    Ok(())
}

/// `Y = μ + βZ` with `Z` standard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocScaleModel {
    dist: StandardBaslg,
    mu: f64,
    beta: f64,
}

impl LocScaleModel {
    pub fn new(alpha: f64, mu: f64, beta: f64) -> Result<Self> {
        check_finite("mu", mu)?;
        check_scale("beta", beta)?;
        Ok(LocScaleModel { dist: StandardBaslg::new(alpha)?, mu, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.dist.alpha()
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn standard(&self) -> &StandardBaslg {
        &self.dist
    }

    fn z(&self, y: f64) -> f64 {
        (y - self.mu) / self.beta
    }

    pub fn pdf(&self, y: f64) -> f64 {
        self.dist.pdf(self.z(y)) / self.beta
    }

    pub fn ln_pdf(&self, y: f64) -> f64 {
        self.dist.ln_pdf(self.z(y)) - self.beta.ln()
    }

    pub fn cdf(&self, y: f64) -> f64 {
        self.dist.cdf(self.z(y))
    }

    /// `Σ ln f(y_i)`, accumulated in log space.
    pub fn log_likelihood(&self, data: &[f64]) -> Result<f64> {
        check_data(data)?;
        let n = data.len() as f64;
        let a = self.alpha();
        let s: f64 = data
            .iter()
            .map(|&y| {
                let z = self.z(y);
                let w = 1.0 - a * z;
                2.0 * (w * w + 1.0).ln() + ln_logistic_kernel(z)
            })
            .sum();
        Ok(s - n * (self.dist.normalizing_constant().ln() + self.beta.ln()))
    }

    pub fn sample(&self, n: usize, cfg: SamplerConfig) -> Result<Vec<f64>> {
        sample_location_scale(self.alpha(), self.mu, self.beta, n, cfg)
    }
}

/// `ln Φ(x)`, kept finite far into the lower tail.
fn ln_norm_cdf(x: f64) -> f64 {
    if x > -30.0 {
        (0.5 * erfc(-x / std::f64::consts::SQRT_2)).ln()
    } else {
        // Mills-ratio expansion
        let x2 = x * x;
        let series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
        -0.5 * x2 - (-x).ln() - LN_SQRT_2PI + series.ln()
    }
}

/// One of the five competitor families with its parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CompetitorModel {
    family: Family,
    params: Vec<f64>,
}

impl CompetitorModel {
    pub fn new(family: Family, params: &[f64]) -> Result<Self> {
        if family == Family::Baslg {
            return Err(Error::InvalidParameter("use LocScaleModel for baslg2".into()));
        }
        if params.len() != family.n_params() {
            return Err(Error::InvalidParameter(format!(
                "{} takes {} parameters, got {}",
                family.label(),
                family.n_params(),
                params.len()
            )));
        }
        let names = family.param_names();
        for (name, &v) in names.iter().zip(params) {
            check_finite(name, v)?;
        }
        check_scale(names[names.len() - 1], params[params.len() - 1])?;
        Ok(CompetitorModel { family, params: params.to_vec() })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn ln_pdf(&self, y: f64) -> f64 {
        let p = &self.params;
        match self.family {
            Family::Normal => {
                let z = (y - p[0]) / p[1];
                -0.5 * z * z - LN_SQRT_2PI - p[1].ln()
            }
            Family::Logistic => ln_logistic_kernel((y - p[0]) / p[1]) - p[1].ln(),
            Family::Laplace => -(y - p[0]).abs() / p[1] - (2.0 * p[1]).ln(),
            Family::SkewNormal => {
                let z = (y - p[1]) / p[2];
                LN_2 - 0.5 * z * z - LN_SQRT_2PI + ln_norm_cdf(p[0] * z) - p[2].ln()
            }
            Family::AlphaSkewLogistic => {
                let a = p[0];
                let z = (y - p[1]) / p[2];
                let w = 1.0 - a * z;
                let constant = 2.0 + PI * PI * a * a / 3.0;
                (w * w + 1.0).ln() + ln_logistic_kernel(z) - constant.ln() - p[2].ln()
            }
            Family::Baslg => unreachable!("rejected in CompetitorModel::new"),
        }
    }

    pub fn pdf(&self, y: f64) -> f64 {
        self.ln_pdf(y).exp()
    }

    pub fn log_likelihood(&self, data: &[f64]) -> Result<f64> {
        check_data(data)?;
        Ok(data.iter().map(|&y| self.ln_pdf(y)).sum())
    }
}

/// Log-likelihood of any family at a parameter vector in `Family::param_names` order.
pub fn family_log_likelihood(family: Family, params: &[f64], data: &[f64]) -> Result<f64> {
    match family {
        Family::Baslg => {
            if params.len() != 3 {
                return Err(Error::InvalidParameter(format!("baslg2 takes 3 parameters, got {}", params.len())));
            }
            LocScaleModel::new(params[0], params[1], params[2])?.log_likelihood(data)
        }
        f => CompetitorModel::new(f, params)?.log_likelihood(data),
    }
}

/// Density of any family at `y`.
pub fn family_pdf(family: Family, params: &[f64], y: f64) -> Result<f64> {
    match family {
        Family::Baslg => {
            if params.len() != 3 {
                return Err(Error::InvalidParameter(format!("baslg2 takes 3 parameters, got {}", params.len())));
            }
            Ok(LocScaleModel::new(params[0], params[1], params[2])?.pdf(y))
        }
        f => Ok(CompetitorModel::new(f, params)?.pdf(y)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Identity,
    Log,
}

impl Transform {
    pub fn forward(self, v: f64) -> f64 {
        match self {
            Transform::Identity => v,
            Transform::Log => v.ln(),
        }
    }

    pub fn inverse(self, v: f64) -> f64 {
        match self {
            Transform::Identity => v,
            Transform::Log => v.exp(),
        }
    }
}

/// Box over which a family is optimised, stated in natural units.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSpace {
    pub names: Vec<&'static str>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub transform: Vec<Transform>,
}

impl ParamSpace {
    /// Location within three ranges of the data, scale in `[1e-8, 3·range]`,
    /// shapes in `[-50, 50]`.
    pub fn for_family(family: Family, data: &[f64]) -> Result<Self> {
        check_data(data)?;
        let (min, max) = data.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| (a.min(y), b.max(y)));
        let range = max - min;
        if !(range > 0.0) {
            return Err(Error::DegenerateData(format!("all {} observations equal {min}", data.len())));
        }
        let mut space = ParamSpace { names: Vec::new(), lower: Vec::new(), upper: Vec::new(), transform: Vec::new() };
        let mut push = |name, lo, hi, t| {
            space.names.push(name);
            space.lower.push(lo);
            space.upper.push(hi);
            space.transform.push(t);
        };
        let names = family.param_names();
        if family.has_shape() {
            push(names[0], -SHAPE_BOUND, SHAPE_BOUND, Transform::Identity);
        }
        push("mu", min - 3.0 * range, max + 3.0 * range, Transform::Identity);
        push(names[names.len() - 1], MIN_SCALE, 3.0 * range, Transform::Log);
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn to_internal(&self, params: &[f64]) -> Vec<f64> {
        params.iter().zip(&self.transform).map(|(&v, t)| t.forward(v)).collect()
    }

    pub fn to_natural(&self, internal: &[f64]) -> Vec<f64> {
        internal.iter().zip(&self.transform).map(|(&v, t)| t.inverse(v)).collect()
    }

    pub fn internal_lower(&self) -> Vec<f64> {
        self.to_internal(&self.lower)
    }

    pub fn internal_upper(&self) -> Vec<f64> {
        self.to_internal(&self.upper)
    }

    /// Clamp natural-unit parameters into the box.
    pub fn clamp(&self, params: &[f64]) -> Vec<f64> {
        params.iter().enumerate().map(|(i, &v)| v.clamp(self.lower[i], self.upper[i])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_with, QuadConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn integrate_density(f: impl Fn(f64) -> f64, center: f64, scale: f64) -> f64 {
        let pts: Vec<f64> =
            [-400.0, -40.0, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 40.0, 400.0].iter().map(|k| center + k * scale).collect();
        integrate_with(f, &pts, QuadConfig::default()).value
    }

    #[test]
    fn location_scale_basics() {
        let m = LocScaleModel::new(0.0, 0.0, 1.0).unwrap();
        assert_eq!(m.pdf(0.0), 0.25);
        let m = LocScaleModel::new(1.3, -2.0, 0.7).unwrap();
        let d = StandardBaslg::new(1.3).unwrap();
        for &y in &[-5.0, -2.0, 0.1, 3.3] {
            assert!((m.pdf(y) - d.pdf((y + 2.0) / 0.7) / 0.7).abs() < 1e-15);
            assert!((m.ln_pdf(y) - m.pdf(y).ln()).abs() < 1e-12);
        }
        let fitted = LocScaleModel::new(0.907, 52.494, 2.638).unwrap();
        assert!((integrate_density(|y| fitted.pdf(y), 52.494, 2.638) - 1.0).abs() < 1e-10);
        assert!(LocScaleModel::new(0.0, 0.0, 0.0).is_err());
        assert!(LocScaleModel::new(0.0, f64::NAN, 1.0).is_err());
        assert!(m.log_likelihood(&[]).is_err());
        assert!(m.log_likelihood(&[1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn log_likelihood_matches_naive_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let data: Vec<f64> = (0..100).map(|_| rng.gen_range(-20.0..30.0)).collect();
        let m = LocScaleModel::new(-0.8, 4.0, 2.5).unwrap();
        let naive: f64 = data.iter().map(|&y| m.pdf(y).ln()).sum();
        assert!((m.log_likelihood(&data).unwrap() - naive).abs() < 1e-9);
        let single = LocScaleModel::new(0.0, 3.0, 1.0).unwrap().log_likelihood(&[3.0]).unwrap();
        assert!((single - 0.25f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn reflection() {
        let m = LocScaleModel::new(1.1, 2.0, 1.5).unwrap();
        let r = LocScaleModel::new(-1.1, -2.0, 1.5).unwrap();
        for &y in &[-4.0, 0.0, 2.5, 7.0] {
            assert!((m.pdf(y) - r.pdf(-y)).abs() < 1e-15);
        }
    }

    #[test]
    fn competitor_densities_integrate_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for f in Family::ALL.into_iter().filter(|f| *f != Family::Baslg) {
            for _ in 0..3 {
                let mu = rng.gen_range(-5.0..5.0);
                let scale = rng.gen_range(0.3..4.0);
                let params: Vec<f64> = if f.has_shape() {
                    vec![rng.gen_range(-6.0..6.0), mu, scale]
                } else {
                    vec![mu, scale]
                };
                let m = CompetitorModel::new(f, &params).unwrap();
                let total = integrate_density(|y| m.pdf(y), mu, scale);
                assert!((total - 1.0).abs() < 1e-8, "{f} {params:?}: {total}");
            }
        }
    }

    #[test]
    fn competitor_special_cases() {
        let n = CompetitorModel::new(Family::Normal, &[0.0, 1.0]).unwrap();
        assert!((n.log_likelihood(&[0.0]).unwrap() + (2.0 * PI).sqrt().ln()).abs() < 1e-15);
        let sn = CompetitorModel::new(Family::SkewNormal, &[0.0, 1.0, 2.0]).unwrap();
        let nn = CompetitorModel::new(Family::Normal, &[1.0, 2.0]).unwrap();
        let aslg = CompetitorModel::new(Family::AlphaSkewLogistic, &[0.0, 1.0, 2.0]).unwrap();
        let lg = CompetitorModel::new(Family::Logistic, &[1.0, 2.0]).unwrap();
        for &y in &[-3.0, 0.5, 4.0] {
            assert!((sn.ln_pdf(y) - nn.ln_pdf(y)).abs() < 1e-14);
            assert!((aslg.ln_pdf(y) - lg.ln_pdf(y)).abs() < 1e-14);
        }
        // far lower tail of the skewing factor stays finite and continuous
        let s = CompetitorModel::new(Family::SkewNormal, &[10.0, 0.0, 1.0]).unwrap();
        let left = s.ln_pdf(-3.0 - 1e-9);
        let right = s.ln_pdf(-3.0 + 1e-9);
        assert!(left.is_finite() && (left - right).abs() < 1e-6);
        assert!((ln_norm_cdf(-30.0 - 1e-12) - ln_norm_cdf(-30.0 + 1e-12)).abs() < 1e-8);
        assert!(CompetitorModel::new(Family::Laplace, &[0.0]).is_err());
        assert!(CompetitorModel::new(Family::Laplace, &[0.0, -1.0]).is_err());
        assert!(CompetitorModel::new(Family::Baslg, &[0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.id().parse::<Family>().unwrap(), f);
            assert_eq!(f.label().parse::<Family>().unwrap(), f);
        }
        assert!("weibull".parse::<Family>().is_err());
    }

    #[test]
    fn param_space_boxes() {
        let data = [1.0, 2.0, 5.0];
        let s = ParamSpace::for_family(Family::Baslg, &data).unwrap();
        assert_eq!(s.names, ["alpha", "mu", "beta"]);
        assert_eq!(s.lower, [-50.0, -11.0, 1e-8]);
        assert_eq!(s.upper, [50.0, 17.0, 12.0]);
        let p = [0.3, 2.0, 1.7];
        let back = s.to_natural(&s.to_internal(&p));
        for (a, b) in p.iter().zip(&back) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(ParamSpace::for_family(Family::Normal, &data).unwrap().names, ["mu", "sigma"]);
        assert!(matches!(ParamSpace::for_family(Family::Normal, &[2.0, 2.0]), Err(Error::DegenerateData(_))));
    }
}
