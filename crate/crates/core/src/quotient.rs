//! Push-down operators on the quotient of the principal orbit: the 2×2
//! block restriction of the Hodge-de Rham operator to invariant forms, its
//! conjugation by the square root of the orbit volume, and the
//! Dirac-Schrödinger operators obtained by twisting the mean-curvature
//! potential with the Gauss-Bonnet involution.
//!
//! Operators are represented semi-discretely: zero-order parts are exact
//! endomorphisms fiberwise, derivatives are applied to supplied smooth test
//! fields through the numerical exterior calculus of [`crate::chart`].

use crate::chart::{Chart, FormField};
use crate::exterior::{Endo, Form};
use crate::s1::QuotientGeometry;
use crate::{r64, Real, Result, C};
use num_complex::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::sync::Arc;

type OpFn<T> = Arc<dyn Fn(&FormField<T>) -> FormField<T> + Send + Sync>;

/// First-order operator acting on form fields of the quotient chart.
#[derive(Clone)]
pub struct Operator<T: Real> {
    chart: Chart<T>,
    func: OpFn<T>,
}

impl<T: Real> Operator<T> {
    pub fn new(
        chart: Chart<T>,
        func: impl Fn(&FormField<T>) -> FormField<T> + Send + Sync + 'static,
    ) -> Self {
        Operator {
            chart,
            func: Arc::new(func),
        }
    }

    pub fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    pub fn apply_field(&self, f: &FormField<T>) -> FormField<T> {
        (self.func)(f)
    }

    pub fn apply(&self, f: &FormField<T>, x: &[T]) -> Form<T> {
        (self.func)(f).eval(x)
    }

    pub fn add(&self, other: &Operator<T>) -> Operator<T> {
        let a = self.func.clone();
        let b = other.func.clone();
        Operator::new(self.chart.clone(), move |f| a(f).add_field(&b(f)))
    }

    pub fn scale(&self, s: C<T>) -> Operator<T> {
        let a = self.func.clone();
        Operator::new(self.chart.clone(), move |f| a(f).scale_field(s))
    }

    pub fn scale_re(&self, s: T) -> Operator<T> {
        self.scale(Complex::new(s, T::zero()))
    }

    /// `self ∘ other` (read right to left as usual).
    pub fn compose(&self, other: &Operator<T>) -> Operator<T> {
        let a = self.func.clone();
        let b = other.func.clone();
        Operator::new(self.chart.clone(), move |f| a(&b(f)))
    }
}

/// Identity operator.
pub fn op_identity<T: Real>(chart: &Chart<T>) -> Operator<T> {
    Operator::new(chart.clone(), |f| f.clone())
}

/// Exterior derivative as an operator (numerical with analytic fallback).
pub fn op_d<T: Real>(chart: &Chart<T>, step: Option<T>) -> Operator<T> {
    Operator::new(chart.clone(), move |f| f.d_field(step))
}

/// Codifferential as an operator.
pub fn op_codiff<T: Real>(chart: &Chart<T>, step: Option<T>) -> Operator<T> {
    Operator::new(chart.clone(), move |f| {
        let g = f.clone();
        FormField::new_mixed(f.chart().clone(), move |x| {
            g.codifferential(x, step).expect("codifferential")
        })
    })
}

/// Hodge-de Rham operator `D = d + d†` on the quotient chart.
pub fn op_hodge_de_rham<T: Real>(chart: &Chart<T>, step: Option<T>) -> Operator<T> {
    op_d(chart, step).add(&op_codiff(chart, step))
}

/// Pointwise wedge with a form field.
pub fn op_wedge<T: Real>(alpha: &FormField<T>) -> Operator<T> {
    let alpha = alpha.clone();
    Operator::new(alpha.chart().clone(), move |f| alpha.wedge_field(f))
}

/// Pointwise contraction with the sharp of a 1-form field.
pub fn op_contract_sharp<T: Real>(alpha: &FormField<T>) -> Operator<T> {
    let alpha = alpha.clone();
    Operator::new(alpha.chart().clone(), move |f| {
        let a = alpha.clone();
        let g = f.clone();
        FormField::new_mixed(f.chart().clone(), move |x| {
            let sp = a.chart().space_at(x);
            let xs = sp.sharp(&a.eval(x)).expect("degree-1 field");
            g.eval(x).contract(&xs).expect("contraction")
        })
    })
}

/// Left Clifford multiplication by a 1-form field.
pub fn op_clifford_left<T: Real>(alpha: &FormField<T>) -> Operator<T> {
    op_wedge(alpha).add(&op_contract_sharp(alpha).scale_re(-T::one()))
}

/// Right Clifford multiplication by a 1-form field.
pub fn op_clifford_right<T: Real>(alpha: &FormField<T>) -> Operator<T> {
    op_wedge(alpha).add(&op_contract_sharp(alpha))
}

/// Gauss-Bonnet involution.
pub fn op_epsilon<T: Real>(chart: &Chart<T>) -> Operator<T> {
    Operator::new(chart.clone(), |f| f.epsilon_field())
}

/// Chirality operator of the quotient metric.
pub fn op_chirality<T: Real>(chart: &Chart<T>) -> Operator<T> {
    Operator::new(chart.clone(), |f| f.chirality_field())
}

/// Adjoint of `φ∧` realized as `−⋆̄(φ∧)⋆̄`.
pub fn op_wedge_adjoint<T: Real>(phi: &FormField<T>) -> Operator<T> {
    let chart = phi.chart().clone();
    op_chirality(&chart)
        .compose(&op_wedge(phi))
        .compose(&op_chirality(&chart))
        .scale_re(-T::one())
}

/// Symmetrized Clifford multiplication `ĉ(φ) = φ∧ + (φ∧)†` by a 2-form field.
pub fn op_clifford_two_form<T: Real>(phi: &FormField<T>) -> Operator<T> {
    op_wedge(phi).add(&op_wedge_adjoint(phi))
}

/// Projection onto odd degrees, `(1−ε)/2`.
pub fn op_odd_projection<T: Real>(chart: &Chart<T>) -> Operator<T> {
    let half = r64::<T>(0.5);
    op_identity(chart)
        .add(&op_epsilon(chart).scale_re(-T::one()))
        .scale_re(half)
}

/// The 2×2 operator matrix acting on pairs of basic components.
pub struct OperatorMatrix<T: Real> {
    pub blocks: [[Operator<T>; 2]; 2],
}

impl<T: Real> OperatorMatrix<T> {
    pub fn apply(
        &self,
        omega0: &FormField<T>,
        omega1: &FormField<T>,
        x: &[T],
    ) -> (Form<T>, Form<T>) {
        let top = self.blocks[0][0]
            .apply_field(omega0)
            .add_field(&self.blocks[0][1].apply_field(omega1));
        let bottom = self.blocks[1][0]
            .apply_field(omega0)
            .add_field(&self.blocks[1][1].apply_field(omega1));
        (top.eval(x), bottom.eval(x))
    }
}

/// Restriction of the Hodge-de Rham operator to invariant forms, written on
/// the basic components: diagonal `D ± (mean-curvature term)` and
/// off-diagonal curvature couplings.
pub fn pushdown_blocks<T: Real>(q: &QuotientGeometry<T>, step: Option<T>) -> OperatorMatrix<T> {
    let chart = &q.chart;
    let d_op = op_hodge_de_rham(chart, step);
    let b11 = d_op.add(&op_contract_sharp(&q.kappa));
    let b22 = d_op.add(&op_wedge(&q.kappa).scale_re(-T::one()));
    let b12 = op_wedge(&q.phi0).compose(&op_epsilon(chart));
    let b21 = op_wedge_adjoint(&q.phi0)
        .compose(&op_epsilon(chart))
        .scale_re(-T::one())
        .scale_re(-T::one());
    // b21 = ε(φ̄₀∧)† = −ε ⋆̄ (φ̄₀∧) ⋆̄; the adjoint operator already carries
    // the minus sign, so compose it with ε directly.
    let b21 = {
        let _ = b21;
        op_wedge_adjoint(&q.phi0).compose(&op_epsilon(chart))
    };
    OperatorMatrix {
        blocks: [[b11, b12], [b21.clone(), b22]],
    }
}

/// Conjugated operator `T̂ = U⁻¹ T U` with `U = h^{−1/2}`: diagonal
/// `D ± ½ĉ(κ̄)`, same off-diagonal couplings.
pub fn conjugated_blocks<T: Real>(q: &QuotientGeometry<T>, step: Option<T>) -> OperatorMatrix<T> {
    let chart = &q.chart;
    let d_op = op_hodge_de_rham(chart, step);
    let half = r64::<T>(0.5);
    let chat = op_clifford_right(&q.kappa);
    let b11 = d_op.add(&chat.scale_re(half));
    let b22 = d_op.add(&chat.scale_re(-half));
    let b12 = op_wedge(&q.phi0).compose(&op_epsilon(chart));
    let b21 = op_wedge_adjoint(&q.phi0).compose(&op_epsilon(chart));
    OperatorMatrix {
        blocks: [[b11, b12], [b21, b22]],
    }
}

/// Dirac-Schrödinger operator `𝒟 = D + ½c(κ̄)ε`; with `include_phi0` the
/// bounded curvature term `−½ĉ(φ̄₀)(1−ε)` is added to give `𝒟′`.
pub fn dirac_schrodinger<T: Real>(
    q: &QuotientGeometry<T>,
    include_phi0: bool,
    step: Option<T>,
) -> Operator<T> {
    let chart = &q.chart;
    let half = r64::<T>(0.5);
    let mut op = op_hodge_de_rham(chart, step).add(
        &op_clifford_left(&q.kappa)
            .compose(&op_epsilon(chart))
            .scale_re(half),
    );
    if include_phi0 {
        op = op.add(
            &op_clifford_two_form(&q.phi0)
                .compose(&op_odd_projection(chart))
                .scale_re(-T::one()),
        );
    }
    op
}

/// Zero-order endomorphism of the Dirac-Schrödinger operator at a point.
pub fn dirac_zero_order<T: Real>(
    q: &QuotientGeometry<T>,
    include_phi0: bool,
    x: &[T],
) -> Result<Endo<T>> {
    let sp = q.chart.space_at(x);
    let half = r64::<T>(0.5);
    let kappa = q.kappa.eval(x);
    let eps = sp.endo_epsilon();
    let mut z = sp.endo_clifford_left(&kappa)?.compose(&eps).scale_re(half);
    if include_phi0 {
        let wedge = sp.endo_wedge(&q.phi0.eval(x));
        let chat = wedge.add(&sp.adjoint(&wedge));
        let odd = sp.endo_identity().sub(&eps).scale_re(half);
        z = z.sub(&chat.compose(&odd));
    }
    Ok(z)
}

/// Principal symbol `σ_P(D)(x, ξ) = −i c(ξ)` of the Hodge-de Rham operator
/// (shared by the Dirac-Schrödinger operators).
pub fn principal_symbol<T: Real>(chart: &Chart<T>, x: &[T], xi: &[T]) -> Result<Endo<T>> {
    let sp = chart.space_at(x);
    let xi_form = Form::one_form_re(xi);
    Ok(sp
        .endo_clifford_left(&xi_form)?
        .scale(Complex::new(T::zero(), -T::one())))
}

/// Zero-order assembly of the push-down of the positive signature operator,
/// `½ĉ(κ̄) + i (φ̄₀∧) ⋆̄` (golden-value check only; unused downstream).
pub fn positive_signature_zero_order<T: Real>(q: &QuotientGeometry<T>, x: &[T]) -> Result<Endo<T>> {
    let sp = q.chart.space_at(x);
    let half = r64::<T>(0.5);
    let chat = sp.endo_clifford_right(&q.kappa.eval(x))?;
    let star = sp.endo_chirality();
    let wedge = sp.endo_wedge(&q.phi0.eval(x));
    Ok(chat.scale_re(half).add(
        &wedge
            .compose(&star)
            .scale(Complex::new(T::zero(), T::one())),
    ))
}

/// Zero-order assembly of the push-down of the even odd-signature operator,
/// `i(½ε ĉ(κ̄))⋆̄ + i((1+ε)/2)(φ̄₀∧)⋆̄ − i((1−ε)/2)(φ̄₀∧)†⋆̄`.
pub fn odd_signature_zero_order<T: Real>(q: &QuotientGeometry<T>, x: &[T]) -> Result<Endo<T>> {
    let sp = q.chart.space_at(x);
    let half = r64::<T>(0.5);
    let i = Complex::new(T::zero(), T::one());
    let eps = sp.endo_epsilon();
    let star = sp.endo_chirality();
    let chat = sp.endo_clifford_right(&q.kappa.eval(x))?;
    let wedge = sp.endo_wedge(&q.phi0.eval(x));
    let wedge_dag = sp.adjoint(&wedge);
    let ident = sp.endo_identity();
    let p_plus = ident.add(&eps).scale_re(half);
    let p_minus = ident.sub(&eps).scale_re(half);
    let term1 = eps.compose(&chat).scale_re(half).compose(&star).scale(i);
    let term2 = p_plus.compose(&wedge).compose(&star).scale(i);
    let term3 = p_minus.compose(&wedge_dag).compose(&star).scale(-i);
    Ok(term1.add(&term2).add(&term3))
}

/// Residual of the conjugation identity `h^{1/2} D h^{−1/2} = D + ½c(κ̄)`
/// applied to a test field at a point.
pub fn h_conjugation_residual<T: Real>(
    q: &QuotientGeometry<T>,
    f: &FormField<T>,
    x: &[T],
    step: Option<T>,
) -> Result<T> {
    let h = q.orbit_volume.clone();
    let scaled = f.mul_scalar(move |y| T::one() / h(y).sqrt());
    let d_op = op_hodge_de_rham(&q.chart, step);
    let lhs = d_op
        .apply_field(&scaled)
        .mul_scalar({
            let h = q.orbit_volume.clone();
            move |y| h(y).sqrt()
        })
        .eval(x);
    let half = r64::<T>(0.5);
    let rhs_op = d_op.add(&op_clifford_left(&q.kappa).scale_re(half));
    let rhs = rhs_op.apply(f, x);
    Ok(lhs.sub(&rhs).norm_inf())
}

/// Report of the algebraic anticommutator checks at sampled points.
#[derive(Clone, Debug)]
pub struct AnticommutatorReport {
    pub samples: usize,
    /// max ‖{σ_P(x,ξ), ⋆̄}‖ over samples (even quotient dimension only)
    pub symbol_chirality: f64,
    /// max ‖σ_P(x,ξ)² + ‖ξ‖²·Id‖ (ellipticity)
    pub symbol_square: f64,
    /// max ‖{Z(𝒟), ⋆̄}‖ for the zero-order term
    pub zero_order_chirality: f64,
    /// max ‖{Z(𝒟), ε}‖
    pub zero_order_epsilon: f64,
}

impl AnticommutatorReport {
    pub fn max_residual(&self) -> f64 {
        self.symbol_chirality
            .max(self.symbol_square)
            .max(self.zero_order_chirality)
            .max(self.zero_order_epsilon)
    }
}

/// Anticommutator checks of the Dirac-Schrödinger package at random points
/// and covectors.
pub fn anticommutator_checks<T: Real>(
    q: &QuotientGeometry<T>,
    samples: usize,
    seed: u64,
) -> Result<AnticommutatorReport> {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = q.chart.dim();
    let mut rep = AnticommutatorReport {
        samples,
        symbol_chirality: 0.0,
        symbol_square: 0.0,
        zero_order_chirality: 0.0,
        zero_order_epsilon: 0.0,
    };
    let mut drawn = 0;
    while drawn < samples {
        let x: Vec<T> = q
            .chart
            .coords()
            .iter()
            .map(|c| {
                let margin = if c.periodic { 0.0 } else { 0.05 * (c.hi - c.lo) };
                r64(rng.gen_range((c.lo + margin)..(c.hi - margin)))
            })
            .collect();
        let xi: Vec<T> = (0..n).map(|_| r64(rng.gen_range(-1.0..1.0))).collect();
        drawn += 1;
        let sp = q.chart.space_at(&x);
        let star = sp.endo_chirality();
        let eps = sp.endo_epsilon();
        let sym = principal_symbol(&q.chart, &x, &xi)?;
        if n % 2 == 0 {
            let v = sym.anticommutator(&star).norm_inf().to_f64().unwrap();
            if v > rep.symbol_chirality {
                rep.symbol_chirality = v;
            }
        }
        // σ² = ‖ξ‖² Id (so that σ_P(D²) = σ_P(Δ) = ‖ξ‖²); relative residual
        let xi_form = Form::one_form_re(&xi);
        let norm2 = sp.bilinear_inner(&xi_form, &xi_form);
        let resid = sym
            .compose(&sym)
            .sub(&sp.endo_identity().scale(norm2))
            .norm_inf()
            .to_f64()
            .unwrap()
            / (1.0 + norm2.re.to_f64().unwrap());
        if resid > rep.symbol_square {
            rep.symbol_square = resid;
        }
        let z = dirac_zero_order(q, false, &x)?;
        let v = z.anticommutator(&star).norm_inf().to_f64().unwrap();
        if v > rep.zero_order_chirality {
            rep.zero_order_chirality = v;
        }
        let v = z.anticommutator(&eps).norm_inf().to_f64().unwrap();
        if v > rep.zero_order_epsilon {
            rep.zero_order_epsilon = v;
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::s1::{example, hopf, sphere, torus};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    /// smooth compactly-supported bump on (lo, hi)
    fn bump(lo: f64, hi: f64) -> impl Fn(f64) -> f64 + Copy {
        move |t: f64| {
            let s = (t - lo) / (hi - lo);
            if s <= 0.0 || s >= 1.0 {
                0.0
            } else {
                (-1.0 / (s * (1.0 - s))).exp()
            }
        }
    }

    #[test]
    fn torus_pushdown_block_display() {
        // D(f du) = sin(u) f / (r(R+r cos u)) − f'/r² for f = cos
        let ex = torus::<f64>(2.0, 1.0);
        let q = &ex.quotient;
        let blocks = pushdown_blocks(q, None);
        let f = FormField::new(q.chart.clone(), 1, |x: &[f64]| {
            Form::basis(1, 0b1).scale_re(x[0].cos())
        });
        for &u in &[0.5f64, 1.0, 2.2, 4.0] {
            let got = blocks.blocks[0][0].apply(&f, &[u]);
            let expected_scalar = u.sin() * u.cos() / (2.0 + u.cos()) + u.sin();
            assert_relative_eq!(got.coeff(0).re, expected_scalar, epsilon = 1e-8);
            assert!(got.component(1).is_zero(1e-9));
        }
    }

    #[test]
    fn trivial_geometry_gives_plain_hodge_blocks() {
        // κ = 0, φ₀ = 0 → both diagonal blocks equal D, off-diagonal zero
        let ex = hopf::<f64>();
        let q = &ex.quotient; // κ = 0 here; φ̄₀ ≠ 0 but enters off-diagonal
        let blocks = pushdown_blocks(q, None);
        let f = FormField::scalar_field(q.chart.clone(), |x: &[f64]| x[0].cos());
        let x = [1.1, 0.7];
        let d_op = op_hodge_de_rham(&q.chart, None);
        let lhs = blocks.blocks[0][0].apply(&f, &x);
        let rhs = d_op.apply(&f, &x);
        assert!(lhs.sub(&rhs).is_zero(1e-9));
        // a geometry with φ₀ = 0 as well: the torus
        let t = torus::<f64>(2.0, 1.0);
        let tb = pushdown_blocks(&t.quotient, None);
        let g = FormField::scalar_field(t.quotient.chart.clone(), |x: &[f64]| (2.0 * x[0]).sin());
        let off = tb.blocks[0][1].apply(&g, &[0.9]);
        assert!(off.is_zero(1e-12));
    }

    #[test]
    fn sphere_pushdown_diagonal_blocks() {
        // S(D_{S²}) diagonal: D_I − cotθ ι_{∂θ} and D_I + cotθ dθ∧
        let ex = sphere::<f64>();
        let q = &ex.quotient;
        let blocks = pushdown_blocks(q, None);
        let f = FormField::new_mixed(q.chart.clone(), |x: &[f64]| {
            Form::scalar(1, Complex::new((2.0 * x[0]).sin(), 0.0))
                .add(&Form::basis(1, 0b1).scale_re(x[0].cos()))
        });
        for &th in &[0.8f64, 1.4, 2.0] {
            let got11 = blocks.blocks[0][0].apply(&f, &[th]);
            // D_I(f0 + f1 dθ) = −f1' + f0' dθ ; −cotθ ι(f0+f1dθ) = −cotθ f1
            let f0p = 2.0 * (2.0 * th).cos();
            let f1p = -th.sin();
            let cot = th.cos() / th.sin();
            let expect0 = -f1p - cot * th.cos();
            let expect1 = f0p;
            assert_relative_eq!(got11.coeff(0).re, expect0, epsilon = 1e-8);
            assert_relative_eq!(got11.coeff(1).re, expect1, epsilon = 1e-8);
            let got22 = blocks.blocks[1][1].apply(&f, &[th]);
            // D_I + cotθ dθ∧: acts as −f1' + (f0' + cotθ f0) dθ
            assert_relative_eq!(got22.coeff(0).re, -f1p, epsilon = 1e-8);
            assert_relative_eq!(got22.coeff(1).re, f0p + cot * (2.0 * th).sin(), epsilon = 1e-8);
        }
    }

    #[test]
    fn sphere_conjugated_blocks_display() {
        // T̂ diagonal: D_I ∓ ½ cotθ ĉ(dθ)
        let ex = sphere::<f64>();
        let q = &ex.quotient;
        let blocks = conjugated_blocks(q, None);
        let f = FormField::new_mixed(q.chart.clone(), |x: &[f64]| {
            Form::scalar(1, Complex::new(x[0].sin(), 0.0))
                .add(&Form::basis(1, 0b1).scale_re((3.0 * x[0]).cos()))
        });
        for &th in &[0.9f64, 1.7] {
            let cot = th.cos() / th.sin();
            let f0 = th.sin();
            let f1 = (3.0 * th).cos();
            let f0p = th.cos();
            let f1p = -3.0 * (3.0 * th).sin();
            // ĉ(dθ)(f0 + f1 dθ) = f1 + f0 dθ
            let got = blocks.blocks[0][0].apply(&f, &[th]);
            assert_relative_eq!(got.coeff(0).re, -f1p - 0.5 * cot * f1, epsilon = 1e-8);
            assert_relative_eq!(got.coeff(1).re, f0p - 0.5 * cot * f0, epsilon = 1e-8);
            let got = blocks.blocks[1][1].apply(&f, &[th]);
            assert_relative_eq!(got.coeff(0).re, -f1p + 0.5 * cot * f1, epsilon = 1e-8);
            assert_relative_eq!(got.coeff(1).re, f0p + 0.5 * cot * f0, epsilon = 1e-8);
        }
    }

    #[test]
    fn plane_conjugated_blocks_potential() {
        // plane: T̂ diagonal blocks D ∓ (1/2r) ĉ(dr)
        let ex = example::<f64>("plane").unwrap();
        let q = &ex.quotient;
        let blocks = conjugated_blocks(q, None);
        let f = FormField::scalar_field(q.chart.clone(), |x: &[f64]| (-(x[0] - 2.0).powi(2)).exp());
        for &r in &[1.0f64, 2.5] {
            let f0 = (-(r - 2.0f64).powi(2)).exp();
            let f0p = -2.0 * (r - 2.0) * f0;
            let got = blocks.blocks[0][0].apply(&f, &[r]);
            // D(f0) = f0' dr; ½ĉ(κ̄) f0 = −(1/2r) f0 dr
            assert_relative_eq!(got.coeff(1).re, f0p - f0 / (2.0 * r), epsilon = 1e-8);
            let got = blocks.blocks[1][1].apply(&f, &[r]);
            assert_relative_eq!(got.coeff(1).re, f0p + f0 / (2.0 * r), epsilon = 1e-8);
        }
    }

    #[test]
    fn constant_h_makes_conjugation_trivial() {
        // h constant (hopf) → T̂ = T: conjugation residual vanishes
        let ex = hopf::<f64>();
        let q = &ex.quotient;
        let f = FormField::scalar_field(q.chart.clone(), |x: &[f64]| x[0].sin() * x[1].cos());
        let res = h_conjugation_residual(q, &f, &[1.2, 0.8], None).unwrap();
        assert!(res < 1e-9, "residual {res}");
    }

    #[test]
    fn h_conjugation_identity_on_sphere() {
        let ex = sphere::<f64>();
        let q = &ex.quotient;
        let b = bump(0.4, 2.6);
        let f = FormField::scalar_field(q.chart.clone(), move |x: &[f64]| b(x[0]));
        for &th in &[1.0f64, 1.6, 2.1] {
            let res = h_conjugation_residual(q, &f, &[th], None).unwrap();
            assert!(res < 1e-8, "residual {res} at θ={th}");
        }
    }

    #[test]
    fn dirac_schrodinger_displays() {
        // sphere: 𝒟 = [[0, −∂θ−½cotθ],[∂θ−½cotθ, 0]]
        let ex = sphere::<f64>();
        let q = &ex.quotient;
        let op = dirac_schrodinger(q, false, None);
        let f = FormField::new_mixed(q.chart.clone(), |x: &[f64]| {
            Form::scalar(1, Complex::new((2.0 * x[0]).sin(), 0.0))
                .add(&Form::basis(1, 0b1).scale_re(x[0].sin() * x[0].cos()))
        });
        for &th in &[0.7f64, 1.9] {
            let f0 = (2.0 * th).sin();
            let f1 = th.sin() * th.cos();
            let f0p = 2.0 * (2.0 * th).cos();
            let f1p = (2.0 * th).cos();
            let cot = th.cos() / th.sin();
            let got = op.apply(&f, &[th]);
            assert_relative_eq!(got.coeff(0).re, -f1p - 0.5 * cot * f1, epsilon = 1e-8);
            assert_relative_eq!(got.coeff(1).re, f0p - 0.5 * cot * f0, epsilon = 1e-8);
        }
        // plane: 𝒟 = [[0, −∂r−1/2r],[∂r−1/2r, 0]]
        let exp = example::<f64>("plane").unwrap();
        let qp = &exp.quotient;
        let opp = dirac_schrodinger(qp, false, None);
        let g = FormField::new_mixed(qp.chart.clone(), |x: &[f64]| {
            Form::scalar(1, Complex::new((x[0]).sin(), 0.0))
                .add(&Form::basis(1, 0b1).scale_re((0.5 * x[0]).cos()))
        });
        for &r in &[0.8f64, 3.0] {
            let f0 = r.sin();
            let f1 = (0.5 * r).cos();
            let f0p = r.cos();
            let f1p = -0.5 * (0.5 * r).sin();
            let got = opp.apply(&g, &[r]);
            assert_relative_eq!(got.coeff(0).re, -f1p - f1 / (2.0 * r), epsilon = 1e-8);
            assert_relative_eq!(got.coeff(1).re, f0p - f0 / (2.0 * r), epsilon = 1e-8);
        }
    }

    #[test]
    fn hopf_dirac_schrodinger_reduces_to_hodge_de_rham() {
        // κ̄ = 0 and ĉ(φ̄₀)(1−ε)/2 = 0 on the 2-dimensional quotient
        let ex = hopf::<f64>();
        let q = &ex.quotient;
        for &x in &[[1.0, 0.3], [2.0, 4.0], [0.6, 2.2]] {
            let z = dirac_zero_order(q, true, &x).unwrap();
            assert!(z.is_zero(1e-13), "zero-order norm {}", z.norm_inf());
        }
    }

    #[test]
    fn dirac_square_closed_forms() {
        // plane: 𝒟² = Δ + (1/2r²)(½ − ε)
        let exp = example::<f64>("plane").unwrap();
        let qp = &exp.quotient;
        let op = dirac_schrodinger(qp, false, None);
        let b = bump(0.5, 5.5);
        let f = FormField::new_mixed(qp.chart.clone(), move |x: &[f64]| {
            Form::scalar(1, Complex::new(b(x[0]) * x[0].sin(), 0.0))
                .add(&Form::basis(1, 0b1).scale_re(b(x[0]) * (0.7 * x[0]).cos()))
        });
        let twice = op.apply_field(&f);
        for &r in &[1.5f64, 2.0, 3.1] {
            let got = op.apply(&twice, &[r]);
            // oracle by high-accuracy numerical differentiation of the input
            let h = 1e-3;
            let dd = |g: &dyn Fn(f64) -> f64, t: f64| {
                (-g(t + 2.0 * h) + 16.0 * g(t + h) - 30.0 * g(t) + 16.0 * g(t - h)
                    - g(t - 2.0 * h))
                    / (12.0 * h * h)
            };
            let f0 = |t: f64| b(t) * t.sin();
            let f1 = |t: f64| b(t) * (0.7 * t).cos();
            let expect0 = -dd(&f0, r) + (1.0 / (2.0 * r * r)) * (0.5 - 1.0) * f0(r);
            let expect1 = -dd(&f1, r) + (1.0 / (2.0 * r * r)) * (0.5 + 1.0) * f1(r);
            assert_relative_eq!(got.coeff(0).re, expect0, epsilon = 1e-6, max_relative = 1e-6);
            assert_relative_eq!(got.coeff(1).re, expect1, epsilon = 1e-6, max_relative = 1e-6);
        }
        // sphere: 𝒟² = Δ + ½(½cot²θ − csc²θ ε)
        let ex = sphere::<f64>();
        let q = &ex.quotient;
        let op = dirac_schrodinger(q, false, None);
        let b2 = bump(0.4, PI - 0.4);
        let g = FormField::new_mixed(q.chart.clone(), move |x: &[f64]| {
            Form::scalar(1, Complex::new(b2(x[0]) * (2.0 * x[0]).cos(), 0.0))
                .add(&Form::basis(1, 0b1).scale_re(b2(x[0]) * x[0].sin()))
        });
        let twice = op.apply_field(&g);
        for &th in &[1.0f64, 1.7] {
            let got = op.apply(&twice, &[th]);
            let h = 1e-3;
            let dd = |g: &dyn Fn(f64) -> f64, t: f64| {
                (-g(t + 2.0 * h) + 16.0 * g(t + h) - 30.0 * g(t) + 16.0 * g(t - h)
                    - g(t - 2.0 * h))
                    / (12.0 * h * h)
            };
            let f0 = |t: f64| b2(t) * (2.0 * t).cos();
            let f1 = |t: f64| b2(t) * t.sin();
            let cot2 = (th.cos() / th.sin()).powi(2);
            let csc2 = 1.0 / th.sin().powi(2);
            let expect0 = -dd(&f0, th) + 0.5 * (0.5 * cot2 - csc2) * f0(th);
            let expect1 = -dd(&f1, th) + 0.5 * (0.5 * cot2 + csc2) * f1(th);
            assert_relative_eq!(got.coeff(0).re, expect0, epsilon = 1e-6, max_relative = 1e-6);
            assert_relative_eq!(got.coeff(1).re, expect1, epsilon = 1e-6, max_relative = 1e-6);
        }
        // κ̄ = 0 (hopf): 𝒟² = Δ on an eigenfunction of the quotient metric:
        // Δ_{S²(1/2)} cosθ = 8 cosθ
        let hx = hopf::<f64>();
        let qh = &hx.quotient;
        let oph = dirac_schrodinger(qh, true, None);
        let eig = FormField::scalar_field(qh.chart.clone(), |x: &[f64]| x[0].cos());
        let twice = oph.apply_field(&eig);
        for &x in &[[1.2, 0.4], [1.9, 2.0]] {
            let got = oph.apply(&twice, &x);
            assert_relative_eq!(got.coeff(0).re, 8.0 * x[0].cos(), epsilon = 1e-6);
            assert!(got.component(1).is_zero(2e-6));
            assert!(got.component(2).is_zero(2e-6));
        }
    }

    #[test]
    fn anticommutators_on_s5_quotient() {
        let ex = example::<f64>("s5_codim4").unwrap();
        let rep = anticommutator_checks(&ex.quotient, 100, 7).unwrap();
        assert!(rep.symbol_chirality < 1e-12, "{rep:?}");
        assert!(rep.symbol_square < 1e-12, "{rep:?}");
        assert!(rep.zero_order_chirality < 1e-12, "{rep:?}");
        assert!(rep.zero_order_epsilon < 1e-12, "{rep:?}");
    }

    #[test]
    fn anticommutators_trivial_when_kappa_vanishes() {
        let ex = hopf::<f64>();
        let rep = anticommutator_checks(&ex.quotient, 20, 11).unwrap();
        // κ̄ = 0 → zero-order term of 𝒟 vanishes identically
        assert!(rep.zero_order_chirality == 0.0 && rep.zero_order_epsilon == 0.0);
        assert!(rep.symbol_square < 1e-12);
    }

    #[test]
    fn weighted_pairing_symmetry_sphere() {
        // |⟨Tf, g⟩_h − ⟨f, Tg⟩_h| < 1e−6 with weight h = 2π sinθ
        use crate::quad::integrate_cells;
        let ex = sphere::<f64>();
        let q = &ex.quotient;
        let blocks = pushdown_blocks(q, None);
        let bf = bump(0.3, 1.8);
        let bg = bump(0.9, 2.8);
        let f = FormField::new_mixed(q.chart.clone(), move |x: &[f64]| {
            Form::scalar(1, Complex::new(bf(x[0]), 0.0))
                .add(&Form::basis(1, 0b1).scale_re(bf(x[0]) * x[0].cos()))
        });
        let g = FormField::new_mixed(q.chart.clone(), move |x: &[f64]| {
            Form::scalar(1, Complex::new(bg(x[0]) * (2.0 * x[0]).sin(), 0.0))
                .add(&Form::basis(1, 0b1).scale_re(bg(x[0])))
        });
        for block in [&blocks.blocks[0][0], &blocks.blocks[1][1]] {
            let tf = block.apply_field(&f);
            let tg = block.apply_field(&g);
            let q2 = q.chart.clone();
            let lhs = integrate_cells::<f64>(0.05, PI - 0.05, 160, 6, |t| {
                let sp = q2.space_at(&[t]);
                let w = 2.0 * PI * t.sin();
                sp.hermitian_inner(&tf.eval(&[t]), &g.eval(&[t])).re * w
            });
            let rhs = integrate_cells::<f64>(0.05, PI - 0.05, 160, 6, |t| {
                let sp = q2.space_at(&[t]);
                let w = 2.0 * PI * t.sin();
                sp.hermitian_inner(&f.eval(&[t]), &tg.eval(&[t])).re * w
            });
            assert!((lhs - rhs).abs() < 1e-6, "lhs {lhs} rhs {rhs}");
        }
    }

    #[test]
    fn signature_pushdown_assemblies() {
        // golden values on the codim-4 quotient: both assemblies are
        // symmetric for the form inner product but do not anticommute with ⋆̄
        let ex = example::<f64>("s5_codim4").unwrap();
        let q = &ex.quotient;
        let x = [1.1, 0.4, 2.0, 0.7];
        let sp = q.chart.space_at(&x);
        let star = sp.endo_chirality();
        let pos = positive_signature_zero_order(q, &x).unwrap();
        assert!(sp.adjoint(&pos).sub(&pos).is_zero(1e-10));
        assert!(pos.anticommutator(&star).norm_inf() > 1e-3);
        let odd = odd_signature_zero_order(q, &x).unwrap();
        assert!(sp.adjoint(&odd).sub(&odd).is_zero(1e-10));
        // on the sphere (κ̄ = −cotθ dθ, φ̄₀ = 0) the positive-signature
        // assembly reduces to ½ĉ(κ̄) = −½cotθ ĉ(dθ)
        let s2 = sphere::<f64>();
        let y = [1.3];
        let sp2 = s2.quotient.chart.space_at(&y);
        let pos2 = positive_signature_zero_order(&s2.quotient, &y).unwrap();
        let expect = sp2
            .endo_clifford_right(&Form::basis(1, 0b1))
            .unwrap()
            .scale_re(-0.5 * (1.3f64).cos() / (1.3f64).sin());
        assert!(pos2.sub(&expect).is_zero(1e-13));
    }
}
