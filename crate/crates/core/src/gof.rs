//! Kolmogorov–Smirnov statistics used to check samplers and fitted models.

/// One-sample KS distance between `sample` and a continuous cdf.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Two-sample KS distance.
pub fn ks_two_sample_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// `P(K > x)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.0 {
        // theta-function form converges fast for small x
        let c = -std::f64::consts::PI.powi(2) / (8.0 * x * x);
        let s: f64 = (1..=40)
            .step_by(2)
            .map(|k| (c * (k * k) as f64).exp())
            .sum();
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / x * s).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * x * x).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Asymptotic p-value of a KS distance `d` at effective size `n`, with
/// Stephens' finite-sample correction.
pub fn ks_p_value(d: f64, n: f64) -> f64 {
    let rn = n.sqrt();
    kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d)
}

/// `(statistic, p-value)` of the one-sample test.
pub fn ks_test(sample: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let d = ks_statistic(sample, cdf);
    (d, ks_p_value(d, sample.len() as f64))
}

/// `(statistic, p-value)` of the two-sample test.
pub fn ks_two_sample_test(a: &[f64], b: &[f64]) -> (f64, f64) {
    let d = ks_two_sample_statistic(a, b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    (d, ks_p_value(d, na * nb / (na + nb)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kolmogorov_branches_meet() {
        // Both series are exact; they must agree where the switch happens.
        let lo = {
            let x: f64 = 1.0;
            let c = -std::f64::consts::PI.powi(2) / (8.0 * x * x);
            let s: f64 = (1..=40).step_by(2).map(|k| (c * (k * k) as f64).exp()).sum();
            1.0 - (2.0 * std::f64::consts::PI).sqrt() / x * s
        };
        assert!((lo - kolmogorov_sf(1.0)).abs() < 1e-14);
        // tabulated critical values
        assert!((kolmogorov_sf(1.358_098_8) - 0.05).abs() < 1e-6);
        assert!((kolmogorov_sf(1.627_624_2) - 0.01).abs() < 1e-6);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
    }

    #[test]
    fn statistic_on_small_sample() {
        // uniform cdf, points 0.1, 0.5, 0.9: max gap is 1/3 - 0.1 or 0.9 - 2/3
        let d = ks_statistic(&[0.5, 0.9, 0.1], |x| x);
        assert!((d - (0.9 - 2.0 / 3.0)).abs() < 1e-15);
        assert_eq!(ks_two_sample_statistic(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(ks_two_sample_statistic(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        let d2 = ks_two_sample_statistic(&[1.0, 3.0, 5.0], &[2.0, 4.0]);
        assert!((d2 - 1.0 / 3.0).abs() < 1e-15);
    }
}
