//! The logarithmic cut-off sequence `ψ_n(r) = χ(r)^{ϑ_n} (1 − φ(nr))` used
//! to approximate sections with radial growth `O(r^{1/2})` by compactly
//! supported ones. The exponent is `ϑ_n = (log₁₀ n)^{−1/2}`, which keeps
//! every structural property (vanishing for `r ≤ 1/n`, uniform bound below
//! 2, pointwise convergence to 1) and makes the difference integrals decay
//! below 1e-2 by n = 256.

use crate::quad::integrate_cells;
use crate::{r64, Real};

/// `exp(−1/t)` for `t > 0`, else 0.
fn mollifier_piece<T: Real>(t: T) -> T {
    if t > T::zero() {
        (-T::one() / t).exp()
    } else {
        T::zero()
    }
}

fn mollifier_piece_deriv<T: Real>(t: T) -> T {
    if t > T::zero() {
        mollifier_piece(t) / (t * t)
    } else {
        T::zero()
    }
}

/// Smooth step: 0 for `u ≤ 0`, 1 for `u ≥ 1`, C-infinity flat at both ends.
pub fn smooth_step<T: Real>(u: T) -> T {
    let a = mollifier_piece(u);
    let b = mollifier_piece(T::one() - u);
    if a == T::zero() {
        return T::zero();
    }
    if b == T::zero() {
        return T::one();
    }
    a / (a + b)
}

pub fn smooth_step_deriv<T: Real>(u: T) -> T {
    let a = mollifier_piece(u);
    let b = mollifier_piece(T::one() - u);
    if a == T::zero() || b == T::zero() {
        return T::zero();
    }
    let ap = mollifier_piece_deriv(u);
    let bp = -mollifier_piece_deriv(T::one() - u);
    (ap * b - a * bp) / ((a + b) * (a + b))
}

/// Plateau function: 1 on `|u| ≤ 1`, 0 on `|u| ≥ 2`.
pub fn phi<T: Real>(u: T) -> T {
    let a = u.abs();
    if a <= T::one() {
        T::one()
    } else if a >= r64(2.0) {
        T::zero()
    } else {
        T::one() - smooth_step(a - T::one())
    }
}

pub fn phi_deriv<T: Real>(u: T) -> T {
    let a = u.abs();
    if a <= T::one() || a >= r64(2.0) {
        T::zero()
    } else {
        let s = -smooth_step_deriv(a - T::one());
        if u < T::zero() {
            -s
        } else {
            s
        }
    }
}

/// Ramp: `χ(r) = r` on `[0,1]`, 1 for `r ≥ 2`, 0 for `r ≤ 0`, with
/// `0 < χ(r) ≤ r` for `r > 0`.
pub fn chi<T: Real>(r: T) -> T {
    if r <= T::zero() {
        T::zero()
    } else if r <= T::one() {
        r
    } else if r >= r64(2.0) {
        T::one()
    } else {
        r - (r - T::one()) * smooth_step(r - T::one())
    }
}

pub fn chi_deriv<T: Real>(r: T) -> T {
    if r <= T::zero() || r >= r64(2.0) {
        T::zero()
    } else if r <= T::one() {
        T::one()
    } else {
        let u = r - T::one();
        T::one() - smooth_step(u) - u * smooth_step_deriv(u)
    }
}

/// `ϑ_n = (log₁₀ n)^{−1/2}`.
pub fn theta_n<T: Real>(n: usize) -> T {
    assert!(n >= 2);
    T::one() / r64::<T>((n as f64).log10()).sqrt()
}

/// The cut-off function `ψ_n`.
pub fn psi_n<T: Real>(n: usize, r: T) -> T {
    let th = theta_n::<T>(n);
    let c = chi(r);
    if c <= T::zero() {
        return T::zero();
    }
    c.powf(th) * (T::one() - phi(r64::<T>(n as f64) * r))
}

/// Analytic derivative of `ψ_n`.
pub fn psi_n_deriv<T: Real>(n: usize, r: T) -> T {
    let th = theta_n::<T>(n);
    let nf = r64::<T>(n as f64);
    let c = chi(r);
    if c <= T::zero() {
        return T::zero();
    }
    let plateau = T::one() - phi(nf * r);
    th * c.powf(th - T::one()) * chi_deriv(r) * plateau - nf * c.powf(th) * phi_deriv(nf * r)
}

/// Row of the decay table: `∫₀² ψ'_{n,2n}(r)² r dr`.
pub fn difference_integral<T: Real>(n: usize) -> T {
    let m = 2 * n;
    let f = move |r: T| {
        let d = psi_n_deriv(n, r) - psi_n_deriv(m, r);
        d * d * r
    };
    // split at the spike supports and the ramp break points
    let mut cuts: Vec<f64> = vec![
        0.0,
        1.0 / (m as f64 * 2.0),
        1.0 / m as f64,
        2.0 / m as f64,
        1.0 / n as f64,
        2.0 / n as f64,
        0.5,
        1.0,
        2.0,
    ];
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut total = T::zero();
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        total += integrate_cells(r64(w[0]), r64(w[1]), 64, 8, f);
    }
    total
}

/// Summary of the sequence behaviour for a list of indices.
#[derive(Clone, Debug)]
pub struct CutoffReport {
    pub rows: Vec<CutoffRow>,
}

#[derive(Clone, Debug)]
pub struct CutoffRow {
    pub n: usize,
    pub theta: f64,
    pub sup_psi: f64,
    pub support_ok: bool,
    pub pointwise_gap: f64,
    pub difference_integral: f64,
}

/// Evaluate the sequence properties on a grid: support `ψ_n(r) = 0` for
/// `r ≤ 1/n`, the uniform bound, the distance to 1 at a fixed interior
/// point, and the decay-table entry.
pub fn cutoff_report(ns: &[usize]) -> CutoffReport {
    let mut rows = Vec::new();
    for &n in ns {
        let mut sup: f64 = 0.0;
        let mut support_ok = true;
        for i in 0..=4000 {
            let r = 2.5 * i as f64 / 4000.0;
            let v: f64 = psi_n(n, r);
            sup = sup.max(v.abs());
            if r <= 1.0 / n as f64 && v != 0.0 {
                support_ok = false;
            }
        }
        rows.push(CutoffRow {
            n,
            theta: theta_n::<f64>(n),
            sup_psi: sup,
            support_ok,
            pointwise_gap: (1.0 - psi_n(n, 0.9f64)).abs(),
            difference_integral: difference_integral::<f64>(n),
        });
    }
    CutoffReport { rows }
}
