//! Numeric property checks for the half-line estimates: the Hardy
//! inequality and the boundary-condition lower bound
//! `‖D⁺_t σ‖ ≥ (1/2t) ‖(A_V + 1/2) σ‖` on core sections.

use super::cutoff::{smooth_step, smooth_step_deriv};
use crate::quad::integrate_cells;
use crate::{r64, Error, Real, Result, C};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `‖F‖_p / ‖f‖_p` with `F(x) = (1/x)∫₀ˣ f`, for `f` supported on
/// `[0, support]`; the tail of `‖F‖_p` beyond the support is added in
/// closed form. The Hardy bound is `p/(p−1)`.
pub fn hardy_check<T: Real>(f: impl Fn(T) -> T, support: T, p: T) -> Result<T> {
    if p <= T::one() {
        return Err(Error::InvalidInput("Hardy inequality needs p > 1".into()));
    }
    let cells = 600usize;
    let pts = 8usize;
    let norm_f_p = integrate_cells(T::zero(), support, cells, pts, |x| f(x).abs().powf(p));
    if norm_f_p == T::zero() {
        return Ok(T::zero());
    }
    // cumulative primitive of f on a fine grid, then ‖F‖_p on the support
    let n_grid = cells * 4;
    let h = support / r64::<T>(n_grid as f64);
    let mut primitive = vec![T::zero(); n_grid + 1];
    for i in 0..n_grid {
        let a = h * r64::<T>(i as f64);
        primitive[i + 1] = primitive[i] + integrate_cells(a, a + h, 1, 6, &f);
    }
    let prim = |x: T| -> T {
        let idx = (x / h).floor();
        let i = idx.to_usize().unwrap_or(0).min(n_grid - 1);
        let a = h * r64::<T>(i as f64);
        primitive[i] + integrate_cells(a, x, 1, 6, &f)
    };
    let norm_big_f_p = integrate_cells(r64::<T>(1e-12), support, cells, pts, |x| {
        (prim(x) / x).abs().powf(p)
    });
    // tail: F(x) = c/x for x > support with c = ∫ f
    let c = primitive[n_grid];
    let tail = c.abs().powf(p) * support.powf(T::one() - p) / (p - T::one());
    Ok(((norm_big_f_p + tail) / norm_f_p).powf(T::one() / p))
}

/// Smooth compactly supported bump on `(lo, hi)` with analytic derivative,
/// built from two smooth steps.
#[derive(Clone, Copy)]
pub struct Bump<T> {
    lo: T,
    hi: T,
    ramp: T,
}

impl<T: Real> Bump<T> {
    pub fn new(lo: T, hi: T) -> Self {
        let ramp = (hi - lo) * r64::<T>(0.25);
        Bump { lo, hi, ramp }
    }

    pub fn eval(&self, r: T) -> T {
        smooth_step((r - self.lo) / self.ramp) * smooth_step((self.hi - r) / self.ramp)
    }

    pub fn deriv(&self, r: T) -> T {
        let up = smooth_step((r - self.lo) / self.ramp);
        let dn = smooth_step((self.hi - r) / self.ramp);
        smooth_step_deriv((r - self.lo) / self.ramp) / self.ramp * dn
            - up * smooth_step_deriv((self.hi - r) / self.ramp) / self.ramp
    }
}

/// A core section for the estimate checks: a random band-limited vector
/// profile times a smooth radial bump, with the boundary-allowed correction
/// so that `Q_<(A(t)) σ(t) = 0`.
struct CoreSection<T: Real> {
    bump: Bump<T>,
    coeffs: Vec<DVector<C<T>>>,
    t: T,
    // boundary correction: ρ(r)·w with ρ(t) = 1
    w: DVector<C<T>>,
    rho_lo: T,
}

impl<T: Real> CoreSection<T> {
    fn eval(&self, r: T) -> DVector<C<T>> {
        let mut v: DVector<C<T>> = &self.coeffs[0] * C::<T>::new(T::zero(), T::zero());
        let b = self.bump.eval(r);
        for (k, c) in self.coeffs.iter().enumerate() {
            let phase = r64::<T>((k + 1) as f64) * T::pi() * r / self.t;
            v += c * Complex::new(b * phase.sin(), T::zero());
        }
        let rho = smooth_step((r - self.rho_lo) / (self.t - self.rho_lo));
        v + &self.w * Complex::new(rho, T::zero())
    }

    fn deriv(&self, r: T) -> DVector<C<T>> {
        let mut v: DVector<C<T>> = &self.coeffs[0] * C::<T>::new(T::zero(), T::zero());
        let b = self.bump.eval(r);
        let bp = self.bump.deriv(r);
        for (k, c) in self.coeffs.iter().enumerate() {
            let om = r64::<T>((k + 1) as f64) * T::pi() / self.t;
            let phase = om * r;
            v += c * Complex::new(bp * phase.sin() + b * om * phase.cos(), T::zero());
        }
        let rho_p = smooth_step_deriv((r - self.rho_lo) / (self.t - self.rho_lo))
            / (self.t - self.rho_lo);
        v + &self.w * Complex::new(rho_p, T::zero())
    }
}

/// Scan result of the boundary-value estimate.
#[derive(Clone, Debug)]
pub struct VanishingReport {
    /// (t, min ratio over the sampled core sections)
    pub scan: Vec<(f64, f64)>,
    /// largest scanned t with minimum ratio ≥ 1 at it and below
    pub threshold: Option<f64>,
    pub samples: usize,
}

/// Empirical check of `‖D⁺σ‖ · 2t / ‖(A_V + 1/2)σ‖ ≥ 1` (or the adjoint
/// variant with `−∂_r` and `A_V − 1/2`) over random core sections obeying
/// the spectral boundary condition at `r = t`.
pub fn vanishing_estimate<T: Real>(
    a_h: &DMatrix<C<T>>,
    a_v: &[T],
    t_values: &[T],
    samples: usize,
    seed: u64,
    adjoint: bool,
) -> Result<VanishingReport> {
    let d = a_v.len();
    if a_h.nrows() != d || a_h.ncols() != d {
        return Err(Error::DimensionMismatch(
            "horizontal block must match the vertical dimension".into(),
        ));
    }
    let herm_err = (a_h - a_h.adjoint()).norm();
    if herm_err > r64::<T>(1e-10) {
        return Err(Error::InvalidInput("A_H must be Hermitian".into()));
    }
    let shift = if adjoint { -r64::<T>(0.5) } else { r64::<T>(0.5) };
    for &av in a_v {
        if (av + shift).abs() < r64::<T>(1e-9) {
            return Err(Error::InvalidInput(
                "∓1/2 must not lie in the spectrum of A_V".into(),
            ));
        }
    }
    let av_diag =
        DMatrix::<C<T>>::from_fn(d, d, |i, j| {
            if i == j {
                Complex::new(a_v[i], T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        });
    let mut scan = Vec::new();
    for &t in t_values {
        // boundary operator A(t) = A_H + A_V / t and its negative spectral
        // subspace: the boundary condition kills Q_<(A(t))σ(t) (adjoint
        // variant kills Q_≥)
        let a_t = a_h + &av_diag / Complex::new(t, T::zero());
        let eig = nalgebra::SymmetricEigen::new(a_t);
        let mut rng = StdRng::seed_from_u64(seed ^ (t.to_f64().unwrap_or(1.0).to_bits()));
        let mut min_ratio = f64::INFINITY;
        for _ in 0..samples {
            let bump = Bump::new(t * r64::<T>(0.15), t * r64::<T>(0.9));
            let coeffs: Vec<DVector<C<T>>> = (0..4)
                .map(|_| {
                    DVector::from_fn(d, |_, _| {
                        Complex::new(
                            r64::<T>(rng.gen_range(-1.0..1.0)),
                            r64::<T>(rng.gen_range(-1.0..1.0)),
                        )
                    })
                })
                .collect();
            // boundary value: draw a random vector and keep only the allowed
            // spectral half at r = t
            let raw = DVector::<C<T>>::from_fn(d, |_, _| {
                Complex::new(
                    r64::<T>(rng.gen_range(-1.0..1.0)),
                    r64::<T>(rng.gen_range(-1.0..1.0)),
                )
            });
            let mut allowed = DVector::<C<T>>::zeros(d);
            for (i, ev) in eig.eigenvalues.iter().enumerate() {
                let keep = if adjoint {
                    *ev < T::zero()
                } else {
                    *ev >= T::zero()
                };
                if keep {
                    let basis = eig.eigenvectors.column(i);
                    let amp = basis.dotc(&raw);
                    allowed += basis * amp;
                }
            }
            let section = CoreSection {
                bump,
                coeffs,
                t,
                w: allowed,
                rho_lo: t * r64::<T>(0.5),
            };
            let ratio = section_ratio(&section, a_h, a_v, t, shift, adjoint);
            let rf = ratio.to_f64().unwrap_or(f64::INFINITY);
            if rf < min_ratio {
                min_ratio = rf;
            }
        }
        scan.push((t.to_f64().unwrap_or(0.0), min_ratio));
    }
    // threshold: largest t such that every scanned t' ≤ t has ratio ≥ 1
    let mut threshold = None;
    let mut sorted = scan.clone();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for (t, ratio) in &sorted {
        if *ratio >= 1.0 {
            threshold = Some(*t);
        } else {
            break;
        }
    }
    Ok(VanishingReport {
        scan,
        threshold,
        samples,
    })
}

fn section_ratio<T: Real>(
    section: &CoreSection<T>,
    a_h: &DMatrix<C<T>>,
    a_v: &[T],
    t: T,
    shift: T,
    adjoint: bool,
) -> T {
    let d = a_v.len();
    let eps = t * r64::<T>(1e-6);
    let lhs2 = integrate_cells(eps, t, 200, 6, |r| {
        let s = section.eval(r);
        let sp = section.deriv(r);
        let mut v = a_h * &s;
        for i in 0..d {
            v[i] += Complex::new(a_v[i] / r, T::zero()) * s[i];
        }
        let total = if adjoint { v - sp } else { v + sp };
        total.norm_squared()
    });
    let rhs2 = integrate_cells(eps, t, 200, 6, |r| {
        let s = section.eval(r);
        let mut acc = T::zero();
        for i in 0..d {
            let w = (a_v[i] + shift) * s[i].norm_sqr().sqrt();
            acc += w * w;
        }
        acc
    });
    if rhs2 == T::zero() {
        return r64::<T>(f64::INFINITY);
    }
    r64::<T>(2.0) * t * (lhs2 / rhs2).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hardy_zero_function() {
        let ratio = hardy_check(|_x: f64| 0.0, 1.0, 2.0).unwrap();
        assert_eq!(ratio, 0.0);
    }

    #[test]
    fn hardy_smooth_bump_below_two() {
        let b = Bump::new(0.1f64, 1.0);
        let ratio = hardy_check(move |x| b.eval(x), 1.0, 2.0).unwrap();
        assert!(ratio > 0.5 && ratio < 2.0, "ratio {ratio}");
    }

    #[test]
    fn hardy_exponential() {
        // e^{-r} truncated far out: ratio < 2 for p = 2
        let ratio = hardy_check(|x: f64| (-x).exp(), 30.0, 2.0).unwrap();
        assert!(ratio < 2.0, "ratio {ratio}");
        // analytic comparison: F(x) = (1−e^{−x})/x; the ratio is
        // ‖F‖₂/‖f‖₂ with ‖f‖₂² = 1/2
        let norm_f2 = integrate_cells(1e-9f64, 60.0, 4000, 6, |x| {
            ((1.0 - (-x).exp()) / x).powi(2)
        }) + 1.0 / 60.0; // tail ∫_{60}^∞ x^{−2} dx of F ≈ 1/x
        assert_relative_eq!(ratio, (norm_f2 / 0.5).sqrt(), epsilon = 1e-4);
    }

    #[test]
    fn hardy_saturating_family_exceeds_expected_levels() {
        // x^{−1/2+δ} cutoffs approach the constant 2 from below as δ → 0;
        // a moderate power already gives a ratio well above 1
        let ratio = hardy_check(|x: f64| x.powf(-0.3) * if x < 1.0 { 1.0 } else { 0.0 }, 1.0, 2.0)
            .unwrap();
        assert!(ratio > 1.3 && ratio < 2.0, "ratio {ratio}");
    }

    #[test]
    fn vanishing_estimate_pure_vertical() {
        // A_H = 0, A_V = diag(1, −2): the bound holds at every scanned t
        let a_h = DMatrix::<C<f64>>::zeros(2, 2);
        let rep = vanishing_estimate(&a_h, &[1.0, -2.0], &[0.1, 0.5, 1.0, 2.0], 64, 7, false)
            .unwrap();
        for (t, ratio) in &rep.scan {
            assert!(*ratio >= 1.0, "ratio {ratio} at t={t}");
        }
        assert_eq!(rep.threshold, Some(2.0));
    }

    #[test]
    fn vanishing_estimate_scalar_closed_form() {
        // scalar A_V = 1, A_H = 0: the identity
        // ‖σ' + σ/r‖² = ‖σ'‖² − ¼‖σ/r‖² + ‖(1+½)σ/r‖² + boundary ≥ (9/4)‖σ/r‖²·(1−...)
        // is checked directly on one explicit section by quadrature
        let b = Bump::new(0.2f64, 0.9);
        let lhs = integrate_cells(1e-8f64, 1.0, 400, 6, |r| {
            (b.deriv(r) + b.eval(r) / r).powi(2)
        });
        let hardy_part = integrate_cells(1e-8f64, 1.0, 400, 6, |r| {
            b.deriv(r).powi(2) - 0.25 * (b.eval(r) / r).powi(2)
        });
        let main_part = integrate_cells(1e-8f64, 1.0, 400, 6, |r| {
            (1.5 * b.eval(r) / r).powi(2)
        });
        // exact algebraic identity: lhs = hardy_part + main_part
        // (the boundary term vanishes because the bump vanishes at t)
        assert_relative_eq!(lhs, hardy_part + main_part, epsilon = 1e-10, max_relative = 1e-8);
        assert!(hardy_part >= 0.0);
    }

    #[test]
    fn vanishing_estimate_adjoint_variant() {
        let a_h = DMatrix::<C<f64>>::zeros(2, 2);
        let rep =
            vanishing_estimate(&a_h, &[1.0, -2.0], &[0.2, 0.8], 32, 11, true).unwrap();
        for (t, ratio) in &rep.scan {
            assert!(*ratio >= 1.0, "adjoint ratio {ratio} at t={t}");
        }
    }

    #[test]
    fn vanishing_estimate_with_horizontal_term_has_threshold() {
        // a strong horizontal part breaks the bound for large t but not
        // for small t
        let a_h = DMatrix::<C<f64>>::from_row_slice(
            2,
            2,
            &[
                C::<f64>::new(3.0, 0.0),
                C::<f64>::new(1.0, 0.5),
                C::<f64>::new(1.0, -0.5),
                C::<f64>::new(-2.0, 0.0),
            ],
        );
        let rep = vanishing_estimate(
            &a_h,
            &[1.0, -2.0],
            &[0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2],
            32,
            13,
            false,
        )
        .unwrap();
        let small_ok = rep.scan.iter().find(|(t, _)| *t == 0.05).unwrap().1 >= 1.0;
        assert!(small_ok, "estimate should hold for small t: {:?}", rep.scan);
        assert!(rep.threshold.is_some());
    }

    #[test]
    fn spectrum_violation_is_an_error() {
        let a_h = DMatrix::<C<f64>>::zeros(1, 1);
        assert!(vanishing_estimate(&a_h, &[-0.5], &[0.5], 4, 1, false).is_err());
    }
}
