//! Real-argument special functions used by the closed forms.
//!
//! Every cdf expression evaluates `Li_n(-e^z)` for `n` in {2, 3, 4}, so the
//! polylogarithm is implemented on the negative real axis only and is
//! parameterised internally by `u = ln(-x)`. That keeps `z` values far beyond
//! the `exp` overflow threshold usable.
//!
//! Three regions are used for `Li_n(-e^u)`:
//!
//! * `u <= -ln 2`: the defining power series in `x = -e^u`, `|x| <= 1/2`.
//! * `|u| < ln 2`: the expansion `-Σ_k η(n-k) u^k / k!` around `x = -1`
//!   (radius of convergence `π`), with the Dirichlet eta function continued
//!   to non-positive integers through Bernoulli numbers.
//! * `u >= ln 2`: the inversion formula relating `Li_n(x)` and `Li_n(1/x)`.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

/// Order of a polylogarithm. Only the orders the cdf expressions need.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolylogOrder(u32);

impl PolylogOrder {
    pub const TWO: PolylogOrder = PolylogOrder(2);
    pub const THREE: PolylogOrder = PolylogOrder(3);
    pub const FOUR: PolylogOrder = PolylogOrder(4);

    pub fn new(order: u32) -> Result<Self> {
        match order {
            2..=4 => Ok(PolylogOrder(order)),
            _ => domain(format!("polylogarithm order {order} not in {{2, 3, 4}}")),
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for PolylogOrder {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        PolylogOrder::new(order)
    }
}

/// Integer argument `s >= 2` of the Riemann zeta function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZetaArgument(u32);

impl ZetaArgument {
    pub fn new(s: u32) -> Result<Self> {
        if s < 2 {
            return domain(format!("zeta({s}) requested; argument must be >= 2"));
        }
        Ok(ZetaArgument(s))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for ZetaArgument {
    type Error = Error;

    fn try_from(s: u32) -> Result<Self> {
        ZetaArgument::new(s)
    }
}

/// `Li_n(x)` for real `x <= 0`.
pub fn polylog(order: PolylogOrder, x: f64) -> Result<f64> {
    if x.is_nan() || x > 0.0 {
        return domain(format!("polylog argument {x} must be <= 0"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(polylog_neg_exp(order, (-x).ln()))
}

/// `Li_n(-e^u)` for any finite `u`.
pub fn polylog_neg_exp(order: PolylogOrder, u: f64) -> f64 {
    let n = order.0;
    if u <= -LN_2 {
        neg_series(n, u)
    } else if u < LN_2 {
        central_series(n, u)
    } else {
        inversion(n, u)
    }
}

/// Power series `Σ x^k / k^n` with `x = -e^u`, `|x| <= 1/2`.
fn neg_series(n: u32, u: f64) -> f64 {
    let x = -u.exp();
    let mut power = x;
    let mut sum = 0.0;
    for k in 1..=200u32 {
        let term = power / f64::from(k).powi(n as i32);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        power *= x;
    }
    sum
}

const CENTRAL_TERMS: usize = 40;

fn central_series(n: u32, u: f64) -> f64 {
    let table = eta_table();
    let mut term = 1.0; // u^k / k!
    let mut sum = 0.0;
    for k in 0..CENTRAL_TERMS {
        let s = n as i32 - k as i32;
        sum -= eta_lookup(table, s) * term;
        term *= u / (k as f64 + 1.0);
    }
    sum
}

fn inversion(n: u32, u: f64) -> f64 {
    let reflected = neg_series(n, -u);
    let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
    let mut value = sign * reflected - u.powi(n as i32) / factorial(n);
    let mut j = 1;
    while 2 * j <= n {
        value -= 2.0 * eta(2 * j as i32) * u.powi((n - 2 * j) as i32) / factorial(n - 2 * j);
        j += 1;
    }
    value
}

// η(s) for s in ETA_MIN..=ETA_MAX, indexed by s - ETA_MIN.
const ETA_MIN: i32 = 2 - CENTRAL_TERMS as i32;
const ETA_MAX: i32 = 4;

fn eta_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (ETA_MIN..=ETA_MAX).map(eta).collect())
}

fn eta_lookup(table: &[f64], s: i32) -> f64 {
    table[(s - ETA_MIN) as usize]
}

/// Dirichlet eta function at an integer, `η(s) = Σ (-1)^(k-1) k^(-s)`,
/// continued analytically to `s <= 0`.
pub fn eta(s: i32) -> f64 {
    match s {
        1 => LN_2,
        0 => 0.5,
        s if s >= 2 => (1.0 - 2f64.powi(1 - s)) * zeta_unchecked(s as u32),
        s => {
            // η(-m) = (2^(m+1) - 1) B_(m+1) / (m+1)
            let m = (-s) as u32;
            (2f64.powi(m as i32 + 1) - 1.0) * bernoulli(m + 1) / f64::from(m + 1)
        }
    }
}

/// Bernoulli number `B_k` with the `B_1 = -1/2` convention.
pub fn bernoulli(k: u32) -> f64 {
    match k {
        0 => 1.0,
        1 => -0.5,
        k if k % 2 == 1 => 0.0,
        k => {
            // B_2j = (-1)^(j+1) 2 (2j)! ζ(2j) / (2π)^(2j)
            let j = k / 2;
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let mut ratio = 2.0 * zeta_unchecked(k);
            for i in 1..=k {
                ratio *= f64::from(i) / (2.0 * PI);
            }
            sign * ratio
        }
    }
}

/// Riemann zeta at an integer `s >= 2`.
pub fn zeta(s: ZetaArgument) -> f64 {
    zeta_unchecked(s.0)
}

// B_2 .. B_16, for the Euler-Maclaurin tail.
const EM_BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

fn zeta_unchecked(s: u32) -> f64 {
    let pi2 = PI * PI;
    match s {
        2 => pi2 / 6.0,
        4 => pi2 * pi2 / 90.0,
        6 => pi2 * pi2 * pi2 / 945.0,
        8 => pi2 * pi2 * pi2 * pi2 / 9450.0,
        _ => zeta_euler_maclaurin(s),
    }
}

fn zeta_euler_maclaurin(s: u32) -> f64 {
    const N: u32 = 10;
    let sf = f64::from(s);
    let nf = f64::from(N);
    // smallest terms first
    let mut head = 0.0;
    for j in (1..N).rev() {
        head += f64::from(j).powf(-sf);
    }
    let mut tail = nf.powf(1.0 - sf) / (sf - 1.0) + 0.5 * nf.powf(-sf);
    // rising factorial s (s+1) ... (s+2k-2), divided by (2k)!
    let mut coeff = sf / 2.0;
    let mut npow = nf.powf(-sf - 1.0);
    for (k, b) in EM_BERNOULLI.iter().enumerate() {
        let k = k as f64 + 1.0;
        if k > 1.0 {
            coeff *= (sf + 2.0 * k - 3.0) * (sf + 2.0 * k - 2.0) / ((2.0 * k - 1.0) * (2.0 * k));
            npow /= nf * nf;
        }
        tail += b * coeff * npow;
    }
    head + tail
}

/// `Γ(k) = (k-1)!` for integer `1 <= k <= 20`.
pub fn gamma_int(k: u32) -> Result<f64> {
    if !(1..=20).contains(&k) {
        return domain(format!("gamma_int({k}) outside 1..=20"));
    }
    Ok(factorial(k - 1))
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * f64::from(i))
}

/// `E[X^k]` for the standard logistic distribution:
/// `2 η(k) k!` for even `k >= 2`, zero for odd `k`, one for `k = 0`.
pub fn logistic_moment(k: u32) -> f64 {
    match k {
        0 => 1.0,
        k if k % 2 == 1 => 0.0,
        k => 2.0 * eta(k as i32) * factorial(k),
    }
}

/// `ln(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Standard logistic density `e^-z / (1 + e^-z)^2`, evaluated through `|z|`.
pub fn logistic_kernel(z: f64) -> f64 {
    let e = (-z.abs()).exp();
    e / ((1.0 + e) * (1.0 + e))
}

/// `ln` of [`logistic_kernel`].
pub fn ln_logistic_kernel(z: f64) -> f64 {
    -z.abs() - 2.0 * (-z.abs()).exp().ln_1p()
}

/// Standard logistic cdf `1 / (1 + e^-z)`.
pub fn logistic_cdf(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}
