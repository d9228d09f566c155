//! Maximum-likelihood fitting, information criteria and the likelihood-ratio
//! test of the logistic law against the bimodal skew family.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::models::{check_data, family_log_likelihood, Family, ParamSpace};
use crate::optim::{anneal, nelder_mead};

/// 99% point of the chi-square distribution with one degree of freedom.
pub const LR_CRITICAL_99: f64 = 6.635;

/// Restarts whose log-likelihoods agree within this are counted as the same optimum.
pub const CONVERGENCE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_evals_per_restart: usize,
    /// Nelder–Mead stops once a restart improves the log-likelihood by less than this.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { restarts: 40, max_evals_per_restart: 20_000, tolerance: 1e-9, seed: 0 }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_evals_per_restart < 100 || !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "optimizer needs restarts >= 1, max_evals_per_restart >= 100 and tolerance > 0, got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub family: Family,
    pub param_names: Vec<&'static str>,
    pub params: Vec<f64>,
    pub log_l: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_obs: usize,
    /// The two best restarts agree within [`CONVERGENCE_TOL`].
    pub converged: bool,
    pub restarts_used: usize,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.param_names.iter().position(|n| *n == name).map(|i| self.params[i])
    }

    pub fn k(&self) -> usize {
        self.params.len()
    }
}

/// `(AIC, BIC) = (2k - 2 log L, k ln n - 2 log L)`.
pub fn information_criteria(log_l: f64, k: usize, n: usize) -> (f64, f64) {
    let k = k as f64;
    (2.0 * k - 2.0 * log_l, k * (n as f64).ln() - 2.0 * log_l)
}

fn mean_sd(data: &[f64]) -> (f64, f64) {
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let var = data.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn median(data: &[f64]) -> f64 {
    let mut v = data.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Method-of-moments starting point in natural units.
fn moment_start(family: Family, data: &[f64]) -> Vec<f64> {
    let (mean, sd) = mean_sd(data);
    let logistic_scale = sd * 3f64.sqrt() / std::f64::consts::PI;
    match family {
        Family::Normal => vec![mean, sd],
        Family::Logistic => vec![mean, logistic_scale],
        Family::Laplace => {
            let med = median(data);
            vec![med, data.iter().map(|y| (y - med).abs()).sum::<f64>() / data.len() as f64]
        }
        Family::SkewNormal => vec![0.0, mean, sd],
        Family::AlphaSkewLogistic | Family::Baslg => vec![0.0, mean, logistic_scale],
    }
}

struct Problem<'a> {
    family: Family,
    data: &'a [f64],
    space: ParamSpace,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl<'a> Problem<'a> {
    fn new(family: Family, data: &'a [f64]) -> Result<Self> {
        let space = ParamSpace::for_family(family, data)?;
        let lower = space.internal_lower();
        let upper = space.internal_upper();
        Ok(Problem { family, data, space, lower, upper })
    }

    fn neg_ll(&self, x: &[f64]) -> f64 {
        let p = self.space.to_natural(x);
        match family_log_likelihood(self.family, &p, self.data) {
            Ok(v) if v.is_finite() => -v,
            _ => f64::INFINITY,
        }
    }

    fn internal(&self, natural: &[f64]) -> Vec<f64> {
        self.space.to_internal(&self.space.clamp(natural))
    }

    fn step(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(lo, hi)| 0.01 * (hi - lo)).collect()
    }

    fn polish(&self, start: &[f64], budget: usize, tol: f64) -> (Vec<f64>, f64) {
        let f = |x: &[f64]| self.neg_ll(x);
        let m = nelder_mead(&f, &self.lower, &self.upper, start, &self.step(), budget, tol);
        (m.x, m.value)
    }

    /// Latin-hypercube points in the internal box, one per restart.
    fn spread_starts(&self, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
        let dim = self.lower.len();
        let mut columns: Vec<Vec<f64>> = (0..dim)
            .map(|j| {
                let mut strata: Vec<usize> = (0..count).collect();
                strata.shuffle(rng);
                strata
                    .into_iter()
                    .map(|s| {
                        let u = (s as f64 + rng.gen::<f64>()) / count as f64;
                        self.lower[j] + u * (self.upper[j] - self.lower[j])
                    })
                    .collect()
            })
            .collect();
        (0..count).map(|i| columns.iter_mut().map(|c| c[i]).collect()).collect()
    }
}

/// Fit `family` by maximum likelihood.
///
/// Each restart runs simulated annealing for half its evaluation budget and
/// polishes the best point with Nelder–Mead. Restart 0 starts from the method
/// of moments; for the skew families restart 1 starts from the logistic fit
/// with zero skewness, so the nested logistic optimum is always reachable.
/// The remaining starts are a Latin hypercube over the parameter box. Restart
/// `i` uses ChaCha stream `i` of `cfg.seed`.
pub fn fit_mle(family: Family, data: &[f64], cfg: &OptimizerConfig) -> Result<FitResult> {
    cfg.validate()?;
    check_data(data)?;
    let k = family.n_params();
    if data.len() < k + 1 {
        return Err(Error::DegenerateData(format!(
            "{} needs at least {} observations, got {}",
            family.label(),
            k + 1,
            data.len()
        )));
    }
    let problem = Problem::new(family, data)?;

    let mut starts = vec![problem.internal(&moment_start(family, data))];
    if matches!(family, Family::Baslg | Family::AlphaSkewLogistic) && cfg.restarts > 1 {
        let lg = Problem::new(Family::Logistic, data)?;
        let (x, _) = lg.polish(&lg.internal(&moment_start(Family::Logistic, data)), cfg.max_evals_per_restart, cfg.tolerance);
        let nat = lg.space.to_natural(&x);
        starts.push(problem.internal(&[0.0, nat[0], nat[1]]));
    }
    let mut lhs_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    lhs_rng.set_stream(u64::MAX);
    let extra = cfg.restarts.saturating_sub(starts.len());
    starts.extend(problem.spread_starts(extra, &mut lhs_rng));
    starts.truncate(cfg.restarts);

    let f = |x: &[f64]| problem.neg_ll(x);
    let sa_budget = cfg.max_evals_per_restart / 2;
    let mut outcomes: Vec<(Vec<f64>, f64)> = Vec::with_capacity(starts.len());
    for (i, start) in starts.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64);
        let searched = anneal(&f, &problem.lower, &problem.upper, start, sa_budget, &mut rng);
        // the start itself competes with the annealed point
        let f_start = f(start);
        let from = if f_start < searched.value { start.clone() } else { searched.x };
        let budget = cfg.max_evals_per_restart - searched.evaluations.min(sa_budget);
        outcomes.push(problem.polish(&from, budget, cfg.tolerance));
    }

    // best by value, ties by restart index
    let mut order: Vec<usize> = (0..outcomes.len()).collect();
    order.sort_by(|&a, &b| outcomes[a].1.total_cmp(&outcomes[b].1).then(a.cmp(&b)));
    let (best_x, best_f) = &outcomes[order[0]];
    let converged = best_f.is_finite()
        && order.len() >= 2
        && (outcomes[order[1]].1 - best_f).abs() <= CONVERGENCE_TOL;
    let params = problem.space.to_natural(best_x);
    let log_l = -best_f;
    let (aic, bic) = information_criteria(log_l, k, data.len());
    Ok(FitResult {
        family,
        param_names: family.param_names().to_vec(),
        params,
        log_l,
        aic,
        bic,
        n_obs: data.len(),
        converged,
        restarts_used: outcomes.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LrTestResult {
    /// `2 (log L_full - log L_null)`, clamped at zero.
    pub statistic: f64,
    pub critical_value: f64,
    pub reject_null: bool,
    pub df: usize,
    pub null_fit: FitResult,
    pub full_fit: FitResult,
}

/// Test `H0: α = 0` (logistic) against `H1: α ≠ 0` (BASLG2).
pub fn lr_test(data: &[f64], cfg: &OptimizerConfig) -> Result<LrTestResult> {
    let null_fit = fit_mle(Family::Logistic, data, cfg)?;
    let full_fit = fit_mle(Family::Baslg, data, cfg)?;
    let statistic = (2.0 * (full_fit.log_l - null_fit.log_l)).max(0.0);
    Ok(LrTestResult {
        statistic,
        critical_value: LR_CRITICAL_99,
        reject_null: statistic > LR_CRITICAL_99,
        df: 1,
        null_fit,
        full_fit,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub family: Family,
    pub result: std::result::Result<FitResult, String>,
}

/// Fit every family and sort ascending by AIC, then BIC, then family id.
/// Failed fits are kept as rows and sorted last.
pub fn compare_models(data: &[f64], families: &[Family], cfg: &OptimizerConfig) -> Vec<ComparisonRow> {
    let mut rows: Vec<ComparisonRow> = families
        .iter()
        .map(|&family| ComparisonRow { family, result: fit_mle(family, data, cfg).map_err(|e| e.to_string()) })
        .collect();
    rows.sort_by(|a, b| match (&a.result, &b.result) {
        (Ok(x), Ok(y)) => x
            .aic
            .total_cmp(&y.aic)
            .then(x.bic.total_cmp(&y.bic))
            .then(a.family.id().cmp(b.family.id())),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.family.id().cmp(b.family.id()),
    });
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::LocScaleModel;
    use crate::sampler::SamplerConfig;
    use rand_distr::{Distribution, Normal};

    fn quick() -> OptimizerConfig {
        OptimizerConfig { restarts: 8, max_evals_per_restart: 6_000, ..Default::default() }
    }

    #[test]
    fn criteria_arithmetic() {
        let (aic, bic) = information_criteria(-230.75, 3, 69);
        assert!((aic - 467.50).abs() < 0.01 && (bic - 474.20).abs() < 0.01);
        assert_eq!(information_criteria(0.0, 1, 1), (2.0, 0.0));
        assert!((information_criteria(-300.583, 3, 204).0 - 607.166).abs() < 0.01);
    }

    #[test]
    fn normal_fit_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let data: Vec<f64> = Normal::new(10.0, 3.0).unwrap().sample_iter(&mut rng).take(150).collect();
        let (mean, sd) = mean_sd(&data);
        let fit = fit_mle(Family::Normal, &data, &quick()).unwrap();
        assert!((fit.params[0] - mean).abs() < 1e-3 && (fit.params[1] - sd).abs() < 1e-3, "{:?}", fit.params);
        assert!(fit.converged);
        assert_eq!(fit.restarts_used, 8);
        let closed = family_log_likelihood(Family::Normal, &[mean, sd], &data).unwrap();
        assert!(fit.log_l >= closed - 1e-9);
        assert_eq!(fit.aic, 2.0 * 2.0 - 2.0 * fit.log_l);
    }

    #[test]
    fn deterministic_and_translation_equivariant() {
        let data = LocScaleModel::new(-1.0, 3.0, 1.5).unwrap().sample(120, SamplerConfig { seed: 4, ..Default::default() }).unwrap();
        let cfg = quick();
        let a = fit_mle(Family::Baslg, &data, &cfg).unwrap();
        let b = fit_mle(Family::Baslg, &data, &cfg).unwrap();
        assert_eq!(a, b);
        let shifted: Vec<f64> = data.iter().map(|y| y + 100.0).collect();
        let c = fit_mle(Family::Baslg, &shifted, &cfg).unwrap();
        assert!((c.params[1] - a.params[1] - 100.0).abs() < 1e-3);
        assert!((c.params[0] - a.params[0]).abs() < 1e-3 && (c.params[2] - a.params[2]).abs() < 1e-3);
        assert!((c.log_l - a.log_l).abs() < 1e-6);
    }

    #[test]
    fn skew_fit_nests_logistic() {
        for seed in 0..3 {
            let data = LocScaleModel::new(0.0, 0.0, 1.0).unwrap().sample(80, SamplerConfig { seed, ..Default::default() }).unwrap();
            let lg = fit_mle(Family::Logistic, &data, &quick()).unwrap();
            let b = fit_mle(Family::Baslg, &data, &quick()).unwrap();
            let aslg = fit_mle(Family::AlphaSkewLogistic, &data, &quick()).unwrap();
            assert!(b.log_l >= lg.log_l - 1e-6 && aslg.log_l >= lg.log_l - 1e-6, "seed {seed}");
        }
    }

    #[test]
    fn errors_and_degenerate_data() {
        let cfg = quick();
        assert!(matches!(fit_mle(Family::Normal, &[1.0, 1.0, 1.0], &cfg), Err(Error::DegenerateData(_))));
        assert!(matches!(fit_mle(Family::Baslg, &[1.0, 2.0, 3.0], &cfg), Err(Error::DegenerateData(_))));
        assert!(fit_mle(Family::Normal, &[], &cfg).is_err());
        assert!(fit_mle(Family::Normal, &[1.0, 2.0], &OptimizerConfig { restarts: 0, ..cfg }).is_err());
        let one = fit_mle(Family::Normal, &[1.0, 2.0, 4.0], &OptimizerConfig { restarts: 1, ..cfg }).unwrap();
        assert!(!one.converged);
    }

    #[test]
    fn comparison_table_order() {
        let data = LocScaleModel::new(2.0, 0.0, 1.0).unwrap().sample(150, SamplerConfig { seed: 8, ..Default::default() }).unwrap();
        let rows = compare_models(&data, &[Family::Normal, Family::Baslg, Family::Logistic], &quick());
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].family, Family::Baslg);
        let aics: Vec<f64> = rows.iter().map(|r| r.result.as_ref().unwrap().aic).collect();
        assert!(aics.windows(2).all(|w| w[0] <= w[1]));
        let single = compare_models(&data, &[Family::Laplace], &quick());
        assert_eq!(single.len(), 1);
        let failing = compare_models(&[1.0, 2.0, 3.0], &[Family::Baslg, Family::Normal], &quick());
        assert_eq!(failing[0].family, Family::Normal);
        assert!(failing[1].result.is_err());
    }
}
