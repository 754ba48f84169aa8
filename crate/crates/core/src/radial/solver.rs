//! Solution operator for the model equation
//! `(d/dr + A/r + μ α₂) σ = τ` on the half line with `A` diagonal real,
//! realized through the modified-Bessel kernel
//! `μ(rs)^{1/2} K_{A±1/2}(μr) I_{A∓1/2}(μs)` (inner region) glued to the
//! mirrored kernel on the outer region. The exponentially scaled Bessel
//! functions keep every factor bounded.

use super::bessel::bessel_ik_scaled;
use crate::quad::gauss_legendre;
use crate::{r64, Error, Real, Result};

/// Vector values sampled on a strictly increasing positive grid.
#[derive(Clone, Debug)]
pub struct RadialSection<T> {
    pub grid: Vec<T>,
    /// one `(σ₊, σ₋)` pair of length-d vectors per node, stored flat
    pub plus: Vec<Vec<T>>,
    pub minus: Vec<Vec<T>>,
    pub boundary_tag: Option<String>,
}

impl<T: Real> RadialSection<T> {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidInput("empty grid".into()));
        }
        if self.grid[0] <= T::zero() {
            return Err(Error::InvalidInput("grid must be positive".into()));
        }
        for w in self.grid.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidInput("grid must be strictly increasing".into()));
            }
        }
        Ok(())
    }

    pub fn norm_at(&self, i: usize) -> T {
        let mut acc = T::zero();
        for v in self.plus[i].iter().chain(self.minus[i].iter()) {
            acc += *v * *v;
        }
        acc.sqrt()
    }
}

/// Diagnostics of a solve.
#[derive(Clone, Debug)]
pub struct BesselSolveReport {
    /// relative L² residual of `(d/dr + A/r + μα₂)σ − τ` on interior nodes
    pub residual: f64,
    /// log-log slope of `‖σ(r)‖` on the nodes below the source support
    pub decay_exponent: Option<f64>,
}

/// Solve `(σ₊' + (a/r)σ₊ + μσ₋, σ₋' − (a/r)σ₋ + μσ₊) = (τ₊, τ₋)` per
/// diagonal mode `a`, with `τ` supported in `[support.0, support.1]`.
pub fn bessel_solution<T: Real>(
    a_diag: &[T],
    mu: T,
    tau: &(dyn Fn(T) -> (Vec<T>, Vec<T>) + Sync),
    support: (T, T),
    grid: &[T],
) -> Result<(RadialSection<T>, BesselSolveReport)> {
    if mu <= T::zero() {
        return Err(Error::InvalidInput("μ must be positive".into()));
    }
    if grid.len() < 8 {
        return Err(Error::InvalidInput("grid too coarse".into()));
    }
    let d = a_diag.len();
    let n = grid.len();
    let mut plus = vec![vec![T::zero(); d]; n];
    let mut minus = vec![vec![T::zero(); d]; n];
    let (gl_x, gl_w) = gauss_legendre::<T>(8);

    for (mode, &a) in a_diag.iter().enumerate() {
        let nu_p = a + r64::<T>(0.5);
        let nu_m = a - r64::<T>(0.5);
        // cumulative inner integrals L(r_i) = ∫_0^{r_i} e^{μ(s−r_i)} √s
        //   [Ie_{a−1/2}(μs) τ₊(s) + Ie_{a+1/2}(μs) τ₋(s)] ds
        let inner_weight = |s: T| -> T {
            let (ie_m, _) = bessel_ik_scaled(nu_m, mu * s);
            let (ie_p, _) = bessel_ik_scaled(nu_p, mu * s);
            let (tp, tm) = tau(s);
            s.sqrt() * (ie_m * tp[mode] + ie_p * tm[mode])
        };
        let mut l_vals = vec![T::zero(); n];
        let mut prev_r = T::zero();
        let mut acc = T::zero();
        for i in 0..n {
            let r = grid[i];
            let lo = prev_r.max(support.0.min(r));
            let hi = r.min(support.1);
            // decay the carried integral to the new endpoint
            acc *= (-(mu * (r - prev_r))).exp();
            if hi > lo {
                let mid = (lo + hi) / r64::<T>(2.0);
                let half = (hi - lo) / r64::<T>(2.0);
                for (x, w) in gl_x.iter().zip(&gl_w) {
                    let s = mid + half * *x;
                    acc += inner_weight(s) * (mu * (s - r)).exp() * *w * half;
                }
            }
            l_vals[i] = acc;
            prev_r = r;
        }
        // outer integrals R(r_i) = ∫_{r_i}^∞ e^{μ(r_i−s)} √s
        //   [Ke_{a−1/2}(μs) τ₊(s) − Ke_{a+1/2}(μs) τ₋(s)] ds
        let outer_weight = |s: T| -> T {
            let (_, ke_m) = bessel_ik_scaled(nu_m, mu * s);
            let (_, ke_p) = bessel_ik_scaled(nu_p, mu * s);
            let (tp, tm) = tau(s);
            s.sqrt() * (ke_m * tp[mode] - ke_p * tm[mode])
        };
        let mut r_vals = vec![T::zero(); n];
        let mut acc = T::zero();
        let mut prev_r = grid[n - 1].max(support.1);
        for i in (0..n).rev() {
            let r = grid[i];
            let lo = r.max(support.0);
            let hi = prev_r.min(support.1);
            acc *= (-(mu * (prev_r - r))).exp();
            if hi > lo {
                let mid = (lo + hi) / r64::<T>(2.0);
                let half = (hi - lo) / r64::<T>(2.0);
                for (x, w) in gl_x.iter().zip(&gl_w) {
                    let s = mid + half * *x;
                    acc += outer_weight(s) * (mu * (r - s)).exp() * *w * half;
                }
            }
            r_vals[i] = acc;
            prev_r = r;
        }
        for i in 0..n {
            let r = grid[i];
            let (ie_p, ke_p) = bessel_ik_scaled(nu_p, mu * r);
            let (ie_m, ke_m) = bessel_ik_scaled(nu_m, mu * r);
            let pref = mu * r.sqrt();
            plus[i][mode] = pref * (ke_p * l_vals[i] - ie_p * r_vals[i]);
            minus[i][mode] = pref * (ke_m * l_vals[i] + ie_m * r_vals[i]);
        }
    }

    let section = RadialSection {
        grid: grid.to_vec(),
        plus,
        minus,
        boundary_tag: None,
    };
    section.validate()?;
    let report = solve_diagnostics(a_diag, mu, tau, support, &section);
    Ok((section, report))
}

fn solve_diagnostics<T: Real>(
    a_diag: &[T],
    mu: T,
    tau: &(dyn Fn(T) -> (Vec<T>, Vec<T>) + Sync),
    support: (T, T),
    section: &RadialSection<T>,
) -> BesselSolveReport {
    let n = section.grid.len();
    let d = a_diag.len();
    // residual by 4th-order differentiation on the (uniform) interior grid
    let mut num = T::zero();
    let mut den = T::zero();
    for i in 2..n - 2 {
        let h = section.grid[i + 1] - section.grid[i];
        let r = section.grid[i];
        let (tp, tm) = tau(r);
        for mode in 0..d {
            let dplus = (-section.plus[i + 2][mode]
                + section.plus[i + 1][mode] * r64::<T>(8.0)
                - section.plus[i - 1][mode] * r64::<T>(8.0)
                + section.plus[i - 2][mode])
                / (r64::<T>(12.0) * h);
            let dminus = (-section.minus[i + 2][mode]
                + section.minus[i + 1][mode] * r64::<T>(8.0)
                - section.minus[i - 1][mode] * r64::<T>(8.0)
                + section.minus[i - 2][mode])
                / (r64::<T>(12.0) * h);
            let res_p =
                dplus + a_diag[mode] / r * section.plus[i][mode] + mu * section.minus[i][mode]
                    - tp[mode];
            let res_m =
                dminus - a_diag[mode] / r * section.minus[i][mode] + mu * section.plus[i][mode]
                    - tm[mode];
            num += res_p * res_p + res_m * res_m;
            den += tp[mode] * tp[mode] + tm[mode] * tm[mode];
        }
    }
    let residual = if den > T::zero() {
        (num / den).sqrt().to_f64().unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    // decay exponent from nodes below the support
    let small: Vec<usize> = (0..n)
        .filter(|&i| section.grid[i] < support.0 * r64::<T>(0.9))
        .collect();
    let decay_exponent = if small.len() >= 4 {
        let pts: Vec<(f64, f64)> = small
            .iter()
            .filter_map(|&i| {
                let nrm = section.norm_at(i).to_f64().unwrap_or(0.0);
                if nrm > 1e-300 {
                    Some((section.grid[i].to_f64().unwrap().ln(), nrm.ln()))
                } else {
                    None
                }
            })
            .collect();
        log_log_slope(&pts)
    } else {
        None
    };
    BesselSolveReport {
        residual,
        decay_exponent,
    }
}

pub(crate) fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 3 {
        return None;
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-14 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

/// Uniform grid `(h, 2h, ..., n·h)` reaching `r_max`.
pub fn uniform_grid<T: Real>(r_max: T, n: usize) -> Vec<T> {
    let h = r_max / r64::<T>(n as f64);
    (1..=n).map(|i| h * r64::<T>(i as f64)).collect()
}
