//! Derivative-free box-constrained minimisation: a simulated-annealing
//! search followed by a restarted Nelder–Mead polish.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Outcome of one minimisation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Counts evaluations and maps NaN and out-of-box points to `+inf`.
struct Objective<'a, F> {
    f: &'a F,
    lower: &'a [f64],
    upper: &'a [f64],
    evals: usize,
}

impl<F: Fn(&[f64]) -> f64> Objective<'_, F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let inside = x.iter().zip(self.lower.iter().zip(self.upper)).all(|(v, (lo, hi))| v >= lo && v <= hi);
        if !inside {
            return f64::INFINITY;
        }
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

fn reflect_into(v: f64, lo: f64, hi: f64) -> f64 {
    let w = hi - lo;
    let mut t = (v - lo).rem_euclid(2.0 * w);
    if t > w {
        t = 2.0 * w - t;
    }
    lo + t
}

const T_FINAL: f64 = 1e-3;
const PROBES: usize = 20;

/// Metropolis search with exponential cooling. Gaussian steps are scaled by
/// the box width and shrink with the temperature.
pub fn anneal<F: Fn(&[f64]) -> f64>(
    f: &F,
    lower: &[f64],
    upper: &[f64],
    start: &[f64],
    max_evals: usize,
    rng: &mut ChaCha8Rng,
) -> Minimum {
    let mut obj = Objective { f, lower, upper, evals: 0 };
    let dim = start.len();
    let width: Vec<f64> = lower.iter().zip(upper).map(|(lo, hi)| hi - lo).collect();
    let mut x = start.to_vec();
    let mut fx = obj.eval(&x);
    let mut best = (x.clone(), fx);

    let propose = |x: &[f64], scale: f64, rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..dim)
            .map(|i| {
                let z: f64 = rng.sample(StandardNormal);
                reflect_into(x[i] + z * scale * width[i], lower[i], upper[i])
            })
            .collect()
    };

    // initial temperature from the spread of nearby objective values
    let mut diffs = Vec::with_capacity(PROBES);
    for _ in 0..PROBES.min(max_evals / 10) {
        let y = propose(&x, 0.05, rng);
        let fy = obj.eval(&y);
        if fy.is_finite() && fx.is_finite() {
            diffs.push((fy - fx).abs());
        }
        if fy < best.1 {
            best = (y, fy);
        }
    }
    if !fx.is_finite() {
        x = best.0.clone();
        fx = best.1;
    }
    let t0 = if diffs.is_empty() { 1.0 } else { (diffs.iter().sum::<f64>() / diffs.len() as f64).clamp(1e-2, 1e4) };

    let steps = max_evals.saturating_sub(obj.evals);
    let cool = (T_FINAL / t0).ln() / steps.max(1) as f64;
    for k in 0..steps {
        let t = t0 * (cool * k as f64).exp();
        let scale = (0.1 * (t / t0).sqrt()).max(1e-5);
        let y = propose(&x, scale, rng);
        let fy = obj.eval(&y);
        if fy <= fx || (fy.is_finite() && rng.gen::<f64>() < (-(fy - fx) / t).exp()) {
            x = y;
            fx = fy;
            if fx < best.1 {
                best = (x.clone(), fx);
            }
        }
    }
    Minimum { x: best.0, value: best.1, evaluations: obj.evals }
}

/// Nelder–Mead from `start` with initial edge lengths `step`, restarted from
/// the incumbent until a restart improves by no more than `tol`.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &F,
    lower: &[f64],
    upper: &[f64],
    start: &[f64],
    step: &[f64],
    max_evals: usize,
    tol: f64,
) -> Minimum {
    let mut obj = Objective { f, lower, upper, evals: 0 };
    let mut x = start.to_vec();
    let mut fx = obj.eval(&x);
    loop {
        let (y, fy) = simplex_run(&mut obj, &x, fx, step, max_evals, tol);
        let improved = fx - fy;
        x = y;
        fx = fy;
        if !(improved > tol) || obj.evals >= max_evals {
            break;
        }
    }
    Minimum { x, value: fx, evaluations: obj.evals }
}

fn simplex_run<F: Fn(&[f64]) -> f64>(
    obj: &mut Objective<'_, F>,
    x0: &[f64],
    f0: f64,
    step: &[f64],
    max_evals: usize,
    tol: f64,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut pts: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f0)];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step[i];
        let mut fv = obj.eval(&v);
        if fv == f64::INFINITY {
            v[i] = x0[i] - step[i];
            fv = obj.eval(&v);
        }
        pts.push((v, fv));
    }
    while obj.evals < max_evals {
        pts.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (fb, fw) = (pts[0].1, pts[n].1);
        let spread = pts[1..]
            .iter()
            .flat_map(|(p, _)| p.iter().zip(&pts[0].0).map(|(a, b)| (a - b).abs() / (1.0 + b.abs())))
            .fold(0.0, f64::max);
        if (fw - fb).abs() <= tol && spread <= 1e-10 || spread == 0.0 {
            break;
        }
        let centroid: Vec<f64> =
            (0..n).map(|j| pts[..n].iter().map(|(p, _)| p[j]).sum::<f64>() / n as f64).collect();
        let along = |c: f64, w: &[f64]| -> Vec<f64> { centroid.iter().zip(w).map(|(m, x)| m + c * (x - m)).collect() };
        let worst = pts[n].0.clone();
        let xr = along(-1.0, &worst);
        let fr = obj.eval(&xr);
        if fr < pts[0].1 {
            let xe = along(-2.0, &worst);
            let fe = obj.eval(&xe);
            pts[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < pts[n - 1].1 {
            pts[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < fw {
                let xc = along(-0.5, &worst);
                let fc = obj.eval(&xc);
                (xc, fc)
            } else {
                let xc = along(0.5, &worst);
                let fc = obj.eval(&xc);
                (xc, fc)
            };
            if fc < fw.min(fr) {
                pts[n] = (xc, fc);
            } else {
                let best = pts[0].0.clone();
                for p in pts.iter_mut().skip(1) {
                    p.0 = best.iter().zip(&p.0).map(|(b, x)| b + 0.5 * (x - b)).collect();
                    p.1 = obj.eval(&p.0);
                }
            }
        }
    }
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    pts.swap_remove(0)
}
