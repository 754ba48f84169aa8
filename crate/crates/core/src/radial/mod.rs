//! Finite-dimensional regular-singular operator theory on the half line:
//! extension classification through the eigenvalues of the leading
//! coefficient, asymptotic coefficient recovery, the Bessel solution kernel
//! of the model equation, deficiency scans, Kato indices of projection
//! pairs, and the numeric estimate checks.

pub mod bessel;
pub mod cutoff;
pub mod deficiency;
pub mod estimates;
pub mod kato;
pub mod solver;

pub use deficiency::{deficiency_scan, DeficiencyReport};
pub use estimates::{hardy_check, vanishing_estimate, Bump, VanishingReport};
pub use kato::{kato_index, SubspacePair};
pub use solver::{bessel_solution, RadialSection};

use crate::{r64, Error, Real, Result, C};
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

type PerturbationFn<T> = Arc<dyn Fn(T) -> DMatrix<C<T>> + Send + Sync>;

/// Operator family `∂_r + S(r)/r` with `S(r) = S₀ + r^{β+1} S₁(r)`; the
/// closed-extension theory is controlled by the eigenvalues of the
/// Hermitian leading matrix `S₀` in `(−1/2, 1/2)`.
#[derive(Clone)]
pub struct RegularSingularModel<T: Real> {
    pub s0: DMatrix<C<T>>,
    pub s1: Option<PerturbationFn<T>>,
    pub beta: T,
    pub alpha1: Option<DMatrix<C<T>>>,
    pub alpha2: Option<DMatrix<C<T>>>,
    pub coupling: Option<T>,
}

impl<T: Real> RegularSingularModel<T> {
    pub fn new(s0: DMatrix<C<T>>, beta: T) -> Result<Self> {
        if s0.nrows() != s0.ncols() {
            return Err(Error::DimensionMismatch("S0 must be square".into()));
        }
        let herm = (&s0 - s0.adjoint()).norm();
        if herm > r64::<T>(1e-10) * (T::one() + s0.norm()) {
            return Err(Error::InvalidInput("S0 must be Hermitian".into()));
        }
        if beta <= -r64::<T>(0.5) {
            return Err(Error::InvalidInput("β must exceed −1/2".into()));
        }
        Ok(RegularSingularModel {
            s0,
            s1: None,
            beta,
            alpha1: None,
            alpha2: None,
            coupling: None,
        })
    }

    pub fn diagonal(entries: &[T]) -> Result<Self> {
        let d = entries.len();
        let s0 = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C::<T>::new(entries[i], T::zero())
            } else {
                C::<T>::new(T::zero(), T::zero())
            }
        });
        Self::new(s0, T::zero())
    }

    /// Attach the involution pair and coupling of the model equation
    /// `∂_r + S₀/r + μ α₂`; the algebraic relations are verified.
    pub fn with_involutions(
        mut self,
        alpha1: DMatrix<C<T>>,
        alpha2: DMatrix<C<T>>,
        coupling: T,
    ) -> Result<Self> {
        let tol = r64::<T>(1e-10) * (T::one() + self.s0.norm());
        let anti = (&alpha1 * &alpha2 + &alpha2 * &alpha1).norm();
        let comm1 = (&alpha1 * &self.s0 - &self.s0 * &alpha1).norm();
        let anti2 = (&alpha2 * &self.s0 + &self.s0 * &alpha2).norm();
        if anti > tol || comm1 > tol || anti2 > tol {
            return Err(Error::InvalidInput(
                "involutions must satisfy α₁α₂+α₂α₁=0, [α₁,S₀]=0, {α₂,S₀}=0".into(),
            ));
        }
        self.alpha1 = Some(alpha1);
        self.alpha2 = Some(alpha2);
        self.coupling = Some(coupling);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.s0.nrows()
    }

    /// Real eigenvalues of the Hermitian leading matrix, ascending.
    pub fn s0_eigen(&self) -> (Vec<T>, DMatrix<C<T>>) {
        let eig = nalgebra::SymmetricEigen::new(self.s0.clone());
        let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let values: Vec<T> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = DMatrix::zeros(self.dim(), self.dim());
        for (j, &i) in idx.iter().enumerate() {
            vectors.set_column(j, &eig.eigenvectors.column(i));
        }
        (values, vectors)
    }
}

/// Classification of the closed extensions of the minimal operator.
#[derive(Clone, Debug)]
pub struct ExtensionClassification<T> {
    /// eigenvalues of `S₀` inside the open interval `(−1/2, 1/2)` with
    /// multiplicities
    pub critical: Vec<(T, usize)>,
    pub essentially_self_adjoint: bool,
    /// dimension of the full boundary-data space `⊕ ker(S₀ − λ)`
    pub w_space_dim: usize,
}

impl<T> ExtensionClassification<T> {
    /// `ind(T_W) − ind(T_min) = dim W` for a chosen subspace `W`.
    pub fn relative_index(&self, w_dim: usize) -> i64 {
        assert!(w_dim <= self.w_space_dim);
        w_dim as i64
    }
}

/// Eigenvalues of `S₀` in `(−1/2, 1/2)`; the minimal operator is
/// essentially self-adjoint exactly when there are none.
pub fn classify_extensions<T: Real>(
    model: &RegularSingularModel<T>,
) -> ExtensionClassification<T> {
    let (values, _) = model.s0_eigen();
    let half = r64::<T>(0.5);
    let mut critical: Vec<(T, usize)> = Vec::new();
    for v in values {
        if v > -half && v < half {
            if let Some(last) = critical.last_mut() {
                if (last.0 - v).abs() < r64::<T>(1e-10) {
                    last.1 += 1;
                    continue;
                }
            }
            critical.push((v, 1));
        }
    }
    let w_space_dim = critical.iter().map(|(_, m)| m).sum();
    ExtensionClassification {
        essentially_self_adjoint: critical.is_empty(),
        critical,
        w_space_dim,
    }
}

/// Result of the asymptotic-coefficient fit near the origin.
#[derive(Clone, Debug)]
pub struct AsymptoticFit<T> {
    /// `(λ, c_λ)` per critical eigenvalue (coefficients of `r^{−λ} e_λ`)
    pub coefficients: Vec<(T, C<T>)>,
    /// measured decay exponent of the remainder
    pub remainder_exponent: Option<f64>,
}

/// Recover the boundary coefficients `c_λ` of
/// `σ(r) = Σ_{|λ|<1/2} c_λ r^{−λ} e_λ + O(r^{1/2}...)` from samples on a
/// geometric grid near zero: project on each eigenvector, rescale by
/// `r^{λ}` and fit the constant on the smallest nodes.
pub fn asymptotic_coefficients<T: Real>(
    model: &RegularSingularModel<T>,
    grid: &[T],
    values: &[DVector<C<T>>],
) -> Result<AsymptoticFit<T>> {
    if grid.len() != values.len() || grid.len() < 6 {
        return Err(Error::InvalidInput(
            "need matching grid/value lists with at least 6 nodes".into(),
        ));
    }
    let (eigvals, eigvecs) = model.s0_eigen();
    let half = r64::<T>(0.5);
    let k_fit = (grid.len() / 4).max(3);
    let mut coefficients = Vec::new();
    for (i, &lam) in eigvals.iter().enumerate() {
        if !(lam > -half && lam < half) {
            continue;
        }
        let e = eigvecs.column(i);
        let mut acc = C::<T>::new(T::zero(), T::zero());
        for j in 0..k_fit {
            let r = grid[j];
            let b = e.dotc(&values[j]) * C::<T>::new(r.powf(lam), T::zero());
            acc += b;
        }
        let c = acc.unscale(r64::<T>(k_fit as f64));
        coefficients.push((lam, c));
    }
    // remainder exponent
    let mut pts = Vec::new();
    for (j, r) in grid.iter().enumerate() {
        let mut rem = values[j].clone();
        for (idx, &lam) in eigvals.iter().enumerate() {
            if !(lam > -half && lam < half) {
                continue;
            }
            let e = eigvecs.column(idx);
            let c = coefficients
                .iter()
                .find(|(l, _)| (*l - lam).abs() < r64::<T>(1e-12))
                .map(|(_, c)| *c)
                .unwrap_or_else(|| C::<T>::new(T::zero(), T::zero()));
            rem -= e * (c * C::<T>::new(r.powf(-lam), T::zero()));
        }
        let n = rem.norm().to_f64().unwrap_or(0.0);
        if n > 1e-13 {
            pts.push((r.to_f64().unwrap().ln(), n.ln()));
        }
    }
    Ok(AsymptoticFit {
        coefficients,
        remainder_exponent: solver::log_log_slope(&pts),
    })
}

/// The algebraic package `γ̃ = iγ`, `ζ = μγ̃ − γ̃ c(β)` on a tensor model
/// `H = Λℂ^h ⊗ ℂ^k ⊗ ℂ²`, returning `(ζ, Ã, ‖β‖²)` for identity checks.
pub fn zeta_package<T: Real>(
    horizontal_dim: usize,
    vertical: &DMatrix<C<T>>,
    beta: &[T],
    mu: T,
) -> Result<(DMatrix<C<T>>, DMatrix<C<T>>, T)> {
    use crate::exterior::{Form, Space};
    if beta.len() != horizontal_dim {
        return Err(Error::DimensionMismatch("β lives on the horizontal space".into()));
    }
    let sp = Space::<T>::euclidean(horizontal_dim);
    let beta_form = Form::one_form_re(beta);
    let eps_h = sp.endo_epsilon().matrix().clone();
    let c_beta = sp.endo_clifford_left(&beta_form)?.matrix().clone();
    let k = vertical.nrows();
    let idk = DMatrix::<C<T>>::identity(k, k);
    let id2 = DMatrix::<C<T>>::identity(2, 2);
    let mut gamma2 = DMatrix::<C<T>>::zeros(2, 2);
    gamma2[(0, 1)] = C::<T>::new(-T::one(), T::zero());
    gamma2[(1, 0)] = C::<T>::new(T::one(), T::zero());
    let mut sigma3 = DMatrix::<C<T>>::zeros(2, 2);
    sigma3[(0, 0)] = C::<T>::new(T::one(), T::zero());
    sigma3[(1, 1)] = C::<T>::new(-T::one(), T::zero());
    // γ = ε_H ⊗ I_k ⊗ [[0,−1],[1,0]], γ̃ = iγ
    let gamma = eps_h.kronecker(&idk).kronecker(&gamma2);
    let gamma_tilde = gamma.map(|x| x * C::<T>::new(T::zero(), T::one()));
    // Ã = I_h ⊗ V ⊗ diag(1, −1)
    let idh = DMatrix::<C<T>>::identity(eps_h.nrows(), eps_h.ncols());
    let a_tilde = idh.kronecker(vertical).kronecker(&sigma3);
    let c_full = c_beta.kronecker(&idk).kronecker(&id2);
    let zeta = gamma_tilde.map(|x| x * C::<T>::new(mu, T::zero())) - &gamma_tilde * c_full;
    let beta_form2 = Form::one_form_re(beta);
    let norm2 = sp.bilinear_inner(&beta_form2, &beta_form2).re;
    Ok((zeta, a_tilde, norm2))
}
