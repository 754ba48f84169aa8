//! Deficiency-index scan for the plane-family operators
//! `[[0, −∂_r − c/r], [∂_r − c/r, 0]]` on the half line: Frobenius indices
//! of the uncoupled second-order equations at 0, backward integration of
//! the recessive-at-infinity system solution, and the square-integrability
//! verdict at the origin made at the coupled system level.

use crate::radial::solver::log_log_slope;
use crate::{r64, Real, Result, C};
use num_complex::Complex;

/// Eigen-system of the plane family at spectral parameter λ:
/// `f₀' = (c/r) f₀ + λ f₁`, `f₁' = −(c/r) f₁ − λ f₀`.
fn rhs<T: Real>(c: T, lambda: C<T>, r: T, y: &[C<T>; 2]) -> [C<T>; 2] {
    let cr = Complex::new(c / r, T::zero());
    [cr * y[0] + lambda * y[1], -cr * y[1] - lambda * y[0]]
}

fn rk4_step<T: Real>(c: T, lambda: C<T>, r: T, h: T, y: &mut [C<T>; 2]) {
    let half = h / r64::<T>(2.0);
    let k1 = rhs(c, lambda, r, y);
    let y2 = [y[0] + k1[0].scale(half), y[1] + k1[1].scale(half)];
    let k2 = rhs(c, lambda, r + half, &y2);
    let y3 = [y[0] + k2[0].scale(half), y[1] + k2[1].scale(half)];
    let k3 = rhs(c, lambda, r + half, &y3);
    let y4 = [y[0] + k3[0].scale(h), y[1] + k3[1].scale(h)];
    let k4 = rhs(c, lambda, r + h, &y4);
    let sixth = h / r64::<T>(6.0);
    for i in 0..2 {
        y[i] += (k1[i] + (k2[i] + k3[i]).scale(r64::<T>(2.0)) + k4[i]).scale(sixth);
    }
}

/// Frobenius (indicial) exponents of one uncoupled equation
/// `f'' + (λ² − q/r²) f = 0`: roots of `ρ(ρ−1) = q`.
pub fn indicial_exponents(q: f64) -> (f64, f64) {
    let disc = (1.0 + 4.0 * q).sqrt();
    ((1.0 + disc) / 2.0, (1.0 - disc) / 2.0)
}

#[derive(Clone, Debug)]
pub struct DeficiencyReport {
    pub potential: f64,
    /// indicial exponents of the `f₀` equation (`q = c² − c`)
    pub indicial_f0: (f64, f64),
    /// indicial exponents of the `f₁` equation (`q = c² + c`)
    pub indicial_f1: (f64, f64),
    /// measured small-r exponents of the recessive solution, per component
    /// and per spectral parameter `±i`
    pub measured_exponents: [(f64, f64); 2],
    /// is the recessive solution square integrable at the origin?
    pub l2_at_zero: [bool; 2],
    /// deficiency indices `(n₊, n₋)`
    pub indices: (usize, usize),
}

/// Scan both deficiency subspaces of the plane-family operator with
/// potential coefficient `c` (the worked cases are `c = 1/2` with the
/// Dirac-Schrödinger potential and `c = 0` without).
pub fn deficiency_scan(c: f64) -> Result<DeficiencyReport> {
    let indicial_f0 = indicial_exponents(c * c - c);
    let indicial_f1 = indicial_exponents(c * c + c);
    let mut measured = [(0.0f64, 0.0f64); 2];
    let mut l2 = [false; 2];
    for (slot, sign) in [(0usize, 1.0f64), (1, -1.0)] {
        let lambda = Complex::new(0.0, sign);
        let exps = recessive_small_r_exponents(c, lambda);
        measured[slot] = exps;
        // r^ρ is square integrable near 0 iff ρ > −1/2 strictly; treat the
        // borderline −1/2 (a log-divergent integral) as not integrable
        l2[slot] = exps.0.min(exps.1) > -0.45;
    }
    let indices = (l2[0] as usize, l2[1] as usize);
    Ok(DeficiencyReport {
        potential: c,
        indicial_f0,
        indicial_f1,
        measured_exponents: measured,
        l2_at_zero: l2,
        indices,
    })
}

/// Integrate the recessive-at-infinity solution down to small r and fit the
/// per-component exponents. Backward integration is stable: the dominant
/// `e^{+r}` contamination decays in this direction.
fn recessive_small_r_exponents(c: f64, lambda: C<f64>) -> (f64, f64) {
    let r0 = 14.0f64;
    // asymptotic recessive data: f₀ ~ e^{−r}, f₁ = (f₀' − c f₀/r)/λ
    let mut y: [C<f64>; 2] = [
        Complex::new(1.0, 0.0),
        Complex::new(-1.0 - c / r0, 0.0) / lambda,
    ];
    // plain RK4 down to r = 1
    let steps = 26_000usize;
    let h = -(r0 - 1.0) / steps as f64;
    let mut r = r0;
    for _ in 0..steps {
        rk4_step(c, lambda, r, h, &mut y);
        r += h;
        // renormalize to dodge underflow of the overall e^{−r} scale
        let scale = y[0].norm().max(y[1].norm());
        if scale < 1e-250 {
            y[0] = y[0].unscale(scale);
            y[1] = y[1].unscale(scale);
        }
    }
    // log-space march from r = 1 down to r_min, collecting |f| samples
    let r_min = 1e-5f64;
    let t_steps = 18_000usize;
    let dt = (r_min.ln() - 0.0) / t_steps as f64;
    let mut t = 0.0f64;
    let mut samples0: Vec<(f64, f64)> = Vec::new();
    let mut samples1: Vec<(f64, f64)> = Vec::new();
    for i in 0..t_steps {
        // dY/dt = r · Y'(r) with r = e^t
        let r = t.exp();
        let h_r = (t + dt).exp() - r;
        rk4_step(c, lambda, r, h_r, &mut y);
        t += dt;
        if i >= t_steps - 4000 && i % 400 == 0 {
            let rr = t.exp();
            if y[0].norm() > 0.0 {
                samples0.push((rr.ln(), y[0].norm().ln()));
            }
            if y[1].norm() > 0.0 {
                samples1.push((rr.ln(), y[1].norm().ln()));
            }
        }
    }
    (
        log_log_slope(&samples0).unwrap_or(f64::NAN),
        log_log_slope(&samples1).unwrap_or(f64::NAN),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_with_potential_is_essentially_self_adjoint() {
        // c = 1/2: indicial exponents {3/2, −1/2} for the f₁ equation; the
        // recessive solution carries the −1/2 channel → not L² → (0, 0)
        let rep = deficiency_scan(0.5).unwrap();
        assert!((rep.indicial_f1.0 - 1.5).abs() < 1e-12);
        assert!((rep.indicial_f1.1 + 0.5).abs() < 1e-12);
        // f₀ equation has the double root 1/2
        assert!((rep.indicial_f0.0 - 0.5).abs() < 1e-12);
        assert!((rep.indicial_f0.1 - 0.5).abs() < 1e-12);
        for (e0, e1) in rep.measured_exponents {
            // f₁ behaves like r^{−1/2} (up to the double-root log in f₀)
            assert!((e1 + 0.5).abs() < 0.05, "f1 exponent {e1}");
            assert!(e0 > 0.3, "f0 exponent {e0}");
        }
        assert_eq!(rep.indices, (0, 0));
    }

    #[test]
    fn plane_without_potential_has_nonzero_deficiency() {
        // c = 0: e^{−r}(1, ∓i) is an exponent-0 solution, square integrable
        let rep = deficiency_scan(0.0).unwrap();
        for (e0, e1) in rep.measured_exponents {
            assert!(e0.abs() < 0.05, "f0 exponent {e0}");
            assert!(e1.abs() < 0.05, "f1 exponent {e1}");
        }
        assert_eq!(rep.indices, (1, 1));
    }

    #[test]
    fn exponents_match_indicial_roots_generically() {
        // c = 1.2: recessive solution at 0 picks the dominant (smallest)
        // indicial roots of each channel
        let rep = deficiency_scan(1.2).unwrap();
        let want0 = rep.indicial_f0.1; // 1 − c = −0.2
        let want1 = rep.indicial_f1.1; // −c = −1.2
        for (e0, e1) in rep.measured_exponents {
            assert!((e0 - want0).abs() < 0.05, "f0 {e0} vs {want0}");
            assert!((e1 - want1).abs() < 0.05, "f1 {e1} vs {want1}");
        }
        assert_eq!(rep.indices, (0, 0));
    }
}
