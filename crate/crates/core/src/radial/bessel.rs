//! Modified Bessel functions `I_ν`, `K_ν` of real order in exponentially
//! scaled form, `Ie_ν(x) = I_ν(x)e^{−x}` and `Ke_ν(x) = K_ν(x)e^{x}`.
//!
//! Regions: the all-positive power series for `I` up to `x = 12` and the
//! scaled asymptotic expansion beyond; `K` by Temme's series for `x ≤ 2`,
//! a Steed continued fraction on `2 < x ≤ 12` (the reflection formula loses
//! about nine digits there), and the asymptotic expansion past the switch.
//! Negative orders go through `K_{−ν} = K_ν` and
//! `I_{−ν} = I_ν + (2/π) sin(πν) K_ν`.

use crate::{r64, Real};

const SWITCH: f64 = 12.0;
const MAX_ITER: usize = 400;

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma<T: Real>(x: T) -> T {
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    debug_assert!(x > T::zero());
    let g = r64::<T>(7.0);
    let half = r64::<T>(0.5);
    let xm1 = x - T::one();
    let mut acc = r64::<T>(COEFFS[0]);
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += r64::<T>(c) / (xm1 + r64::<T>(i as f64));
    }
    let t = xm1 + g + half;
    let ln_sqrt_2pi = r64::<T>(0.918_938_533_204_672_78);
    ln_sqrt_2pi + (xm1 + half) * t.ln() - t + acc.ln()
}

/// Scaled pair `(Ie_ν(x), Ke_ν(x))` for real order and `x > 0`.
pub fn bessel_ik_scaled<T: Real>(nu: T, x: T) -> (T, T) {
    assert!(x > T::zero(), "argument must be positive");
    if nu < T::zero() {
        let mu = -nu;
        let (ie, ke) = bessel_ik_scaled(mu, x);
        // I_{−μ} = I_μ + (2/π) sin(πμ) K_μ  (scaled by e^{−x}: Ke e^{−2x})
        let two_over_pi = r64::<T>(std::f64::consts::FRAC_2_PI);
        let s = (mu * T::pi()).sin();
        let ie_neg = ie + two_over_pi * s * ke * (-(x + x)).exp();
        return (ie_neg, ke);
    }
    let ie = bessel_i_scaled_nonneg(nu, x);
    let ke = bessel_k_scaled_nonneg(nu, x);
    (ie, ke)
}

pub fn bessel_i_scaled<T: Real>(nu: T, x: T) -> T {
    bessel_ik_scaled(nu, x).0
}

pub fn bessel_k_scaled<T: Real>(nu: T, x: T) -> T {
    bessel_ik_scaled(nu, x).1
}

fn bessel_i_scaled_nonneg<T: Real>(nu: T, x: T) -> T {
    if x <= r64(SWITCH) {
        i_series(nu, x) * (-x).exp()
    } else {
        i_asymptotic_scaled(nu, x)
    }
}

fn bessel_k_scaled_nonneg<T: Real>(nu: T, x: T) -> T {
    if x > r64(SWITCH) {
        return k_asymptotic_scaled(nu, x);
    }
    // reduce to fractional order |μ| ≤ 1/2 and recur upward
    let n = (nu + r64::<T>(0.5)).floor();
    let mu = nu - n;
    let steps = n.to_i64().unwrap_or(0).max(0) as usize;
    let (mut k0, mut k1) = if x <= r64(2.0) {
        k_temme(mu, x)
    } else {
        k_steed(mu, x)
    };
    let mut order = mu;
    for _ in 0..steps {
        let k2 = k0 + (order + T::one()) / x * k1 * r64::<T>(2.0);
        k0 = k1;
        k1 = k2;
        order += T::one();
    }
    k0
}

/// All-positive power series `I_ν(x) = (x/2)^ν Σ (x²/4)^k / (k! Γ(ν+k+1))`,
/// `ν ≥ 0` (unscaled).
fn i_series<T: Real>(nu: T, x: T) -> T {
    let half_x = x / r64::<T>(2.0);
    let q = half_x * half_x;
    // leading factor (x/2)^ν / Γ(ν+1)
    let mut term = (nu * half_x.ln() - ln_gamma(nu + T::one())).exp();
    let mut sum = term;
    for k in 1..MAX_ITER {
        let kf = r64::<T>(k as f64);
        term *= q / (kf * (nu + kf));
        sum += term;
        if term <= sum.abs() * r64::<T>(1e-18) {
            break;
        }
    }
    sum
}

/// Asymptotic expansion of `Ie_ν` for large argument.
fn i_asymptotic_scaled<T: Real>(nu: T, x: T) -> T {
    let mu4 = r64::<T>(4.0) * nu * nu;
    let mut term = T::one();
    let mut sum = T::one();
    let mut prev = T::one();
    for k in 1..40usize {
        let kf = r64::<T>(k as f64);
        let odd = r64::<T>((2 * k - 1) as f64);
        term *= -(mu4 - odd * odd) / (kf * r64::<T>(8.0) * x);
        if term.abs() > prev {
            break; // divergence point of the asymptotic series
        }
        sum += term;
        prev = term.abs();
        if term.abs() <= sum.abs() * r64::<T>(1e-17) {
            break;
        }
    }
    sum / (r64::<T>(2.0) * T::pi() * x).sqrt()
}

/// Asymptotic expansion of `Ke_ν` for large argument.
fn k_asymptotic_scaled<T: Real>(nu: T, x: T) -> T {
    let mu4 = r64::<T>(4.0) * nu * nu;
    let mut term = T::one();
    let mut sum = T::one();
    let mut prev = T::one();
    for k in 1..40usize {
        let kf = r64::<T>(k as f64);
        let odd = r64::<T>((2 * k - 1) as f64);
        term *= (mu4 - odd * odd) / (kf * r64::<T>(8.0) * x);
        if term.abs() > prev {
            break;
        }
        sum += term;
        prev = term.abs();
        if term.abs() <= sum.abs() * r64::<T>(1e-17) {
            break;
        }
    }
    sum * (T::pi() / (r64::<T>(2.0) * x)).sqrt()
}

/// Coefficients of `1/Γ(1+μ) = Σ a_k μ^k` needed for small-μ limits.
const INV_GAMMA_A1: f64 = 0.577_215_664_901_532_9;
const INV_GAMMA_A3: f64 = -0.042_002_635_034_095_24;
const INV_GAMMA_A5: f64 = -0.009_621_971_527_876_973;

/// `gam1 = [1/Γ(1−μ) − 1/Γ(1+μ)]/(2μ)` and `gam2 = [1/Γ(1−μ) + 1/Γ(1+μ)]/2`
/// with the removable singularity at μ = 0 handled by series.
fn temme_gammas<T: Real>(mu: T) -> (T, T, T, T) {
    let one = T::one();
    let gampl = (-ln_gamma(one + mu)).exp();
    let gammi = (-ln_gamma(one - mu)).exp();
    let gam1 = if mu.abs() < r64(1e-4) {
        let m2 = mu * mu;
        -(r64::<T>(INV_GAMMA_A1) + m2 * (r64::<T>(INV_GAMMA_A3) + m2 * r64::<T>(INV_GAMMA_A5)))
    } else {
        (gammi - gampl) / (r64::<T>(2.0) * mu)
    };
    let gam2 = (gammi + gampl) / r64::<T>(2.0);
    (gam1, gam2, gampl, gammi)
}

/// Temme's series for `(Ke_μ, Ke_{μ+1})`, `|μ| ≤ 1/2`, `0 < x ≤ 2`.
fn k_temme<T: Real>(mu: T, x: T) -> (T, T) {
    let one = T::one();
    let two = r64::<T>(2.0);
    let half_x = x / two;
    let pimu = T::pi() * mu;
    let fact = if pimu.abs() < r64(1e-12) {
        one
    } else {
        pimu / pimu.sin()
    };
    let d = -half_x.ln();
    let e = mu * d;
    let fact2 = if e.abs() < r64(1e-12) {
        one
    } else {
        e.sinh() / e
    };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let e_exp = e.exp();
    let mut p = r64::<T>(0.5) * e_exp / gampl;
    let mut q = r64::<T>(0.5) / (e_exp * gammi);
    let mut c = one;
    let d2 = half_x * half_x;
    let mut sum1 = p;
    for i in 1..MAX_ITER {
        let fi = r64::<T>(i as f64);
        ff = (fi * ff + p + q) / (fi * fi - mu * mu);
        c *= d2 / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * r64::<T>(1e-17) {
            break;
        }
    }
    let scale = x.exp();
    (sum * scale, sum1 * two / x * scale)
}

/// Steed's continued fraction CF2 for `(Ke_μ, Ke_{μ+1})`, `|μ| ≤ 1/2`,
/// `x > 2`.
fn k_steed<T: Real>(mu: T, x: T) -> (T, T) {
    let one = T::one();
    let two = r64::<T>(2.0);
    let a1 = r64::<T>(0.25) - mu * mu;
    let mut b = two * (one + x);
    let mut d = one / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = one;
    let mut a = -a1;
    let mut c = a1;
    let mut q = c;
    let mut s = one + q * delh;
    for i in 2..MAX_ITER {
        let fi = r64::<T>(i as f64);
        a -= two * (fi - one);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += two;
        d = one / (b + a * d);
        delh = (b * d - one) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.abs() < s.abs() * r64::<T>(1e-17) {
            break;
        }
    }
    let h_final = a1 * h;
    let k0 = (T::pi() / (two * x)).sqrt() / s;
    let k1 = k0 * (mu + x + r64::<T>(0.5) - h_final) / x;
    (k0, k1)
}
