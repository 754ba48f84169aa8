//! Chern-Weil machinery on charts: curvature from connection 1-forms via
//! the structure equations, the Pfaffian/Euler form, the degree-4 term of
//! the L-polynomial, and transgression forms between connections.

use crate::chart::{Chart, FormField};
use crate::exterior::Form;
use crate::quad::gauss_legendre;
use crate::{r64, Error, Real, Result, C};
use num_complex::Complex;
use std::collections::BTreeMap;

/// Antisymmetric matrix of connection 1-form components `ω^I_J` over a
/// chart; only the upper triangle is stored.
#[derive(Clone)]
pub struct ConnectionData<T: Real> {
    chart: Chart<T>,
    labels: Vec<String>,
    /// orthonormal coframe fields `e^I`, needed for the structure-equation
    /// residual
    coframe: Option<Vec<FormField<T>>>,
    upper: BTreeMap<(usize, usize), FormField<T>>,
}

impl<T: Real> ConnectionData<T> {
    pub fn new(
        chart: Chart<T>,
        labels: Vec<String>,
        coframe: Option<Vec<FormField<T>>>,
        entries: Vec<(usize, usize, FormField<T>)>,
    ) -> Result<Self> {
        let k = labels.len();
        if let Some(cf) = &coframe {
            if cf.len() != k {
                return Err(Error::DimensionMismatch(
                    "coframe length must match the label count".into(),
                ));
            }
        }
        let mut upper = BTreeMap::new();
        for (i, j, f) in entries {
            if i >= k || j >= k || i == j {
                return Err(Error::InvalidInput(format!(
                    "connection index ({i},{j}) out of range"
                )));
            }
            let (key, field) = if i < j {
                ((i, j), f)
            } else {
                ((j, i), f.scale_field(Complex::new(-T::one(), T::zero())))
            };
            if upper.insert(key, field).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate connection component for index pair {key:?}"
                )));
            }
        }
        Ok(ConnectionData {
            chart,
            labels,
            coframe,
            upper,
        })
    }

    pub fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Component `ω^I_J` with the antisymmetry built in.
    pub fn omega(&self, i: usize, j: usize) -> FormField<T> {
        let zero = FormField::constant(self.chart.clone(), Form::zero(self.chart.dim()));
        if i == j {
            return zero;
        }
        let key = (i.min(j), i.max(j));
        match self.upper.get(&key) {
            None => zero,
            Some(f) => {
                if i < j {
                    f.clone()
                } else {
                    f.scale_field(Complex::new(-T::one(), T::zero()))
                }
            }
        }
    }

    /// Maximum norm of `de^I + Σ_J ω^I_J ∧ e^J` over the coframe at a point.
    pub fn structure_residual(&self, x: &[T], step: Option<T>) -> Result<T> {
        let coframe = self
            .coframe
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("no coframe attached".into()))?;
        let mut worst = T::zero();
        for i in 0..self.size() {
            let mut acc = coframe[i].numerical_derivative(x, step)?;
            for (j, e_j) in coframe.iter().enumerate() {
                if j == i {
                    continue;
                }
                let w = self.omega(i, j).eval(x).wedge(&e_j.eval(x))?;
                acc = acc.add(&w);
            }
            let n = acc.norm_inf();
            if n > worst {
                worst = n;
            }
        }
        Ok(worst)
    }
}

/// Curvature 2-form components `Ω^I_J` (antisymmetric).
#[derive(Clone)]
pub struct CurvatureData<T: Real> {
    chart: Chart<T>,
    size: usize,
    upper: BTreeMap<(usize, usize), FormField<T>>,
}

/// Structure equation `Ω^I_J = dω^I_J + Σ_K ω^I_K ∧ ω^K_J`.
pub fn curvature<T: Real>(conn: &ConnectionData<T>, step: Option<T>) -> CurvatureData<T> {
    let k = conn.size();
    let mut upper = BTreeMap::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let mut field = conn.omega(i, j).d_field(step);
            for l in 0..k {
                if l == i || l == j {
                    continue;
                }
                field = field.add_field(&conn.omega(i, l).wedge_field(&conn.omega(l, j)));
            }
            upper.insert((i, j), field);
        }
    }
    CurvatureData {
        chart: conn.chart.clone(),
        size: k,
        upper,
    }
}

impl<T: Real> CurvatureData<T> {
    pub fn from_components(
        chart: Chart<T>,
        size: usize,
        entries: Vec<(usize, usize, FormField<T>)>,
    ) -> Result<Self> {
        let mut upper = BTreeMap::new();
        for (i, j, f) in entries {
            if i >= size || j >= size || i == j {
                return Err(Error::InvalidInput("curvature index out of range".into()));
            }
            let (key, field) = if i < j {
                ((i, j), f)
            } else {
                ((j, i), f.scale_field(Complex::new(-T::one(), T::zero())))
            };
            upper.insert(key, field);
        }
        Ok(CurvatureData { chart, size, upper })
    }

    pub fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn component(&self, i: usize, j: usize) -> FormField<T> {
        let zero = FormField::constant(self.chart.clone(), Form::zero(self.chart.dim()));
        if i == j {
            return zero;
        }
        let key = (i.min(j), i.max(j));
        match self.upper.get(&key) {
            None => zero,
            Some(f) => {
                if i < j {
                    f.clone()
                } else {
                    f.scale_field(Complex::new(-T::one(), T::zero()))
                }
            }
        }
    }

    /// Evaluate the full antisymmetric matrix of 2-forms at a point.
    pub fn matrix_at(&self, x: &[T]) -> Vec<Vec<Form<T>>> {
        let k = self.size;
        let dim = self.chart.dim();
        let mut m = vec![vec![Form::zero(dim); k]; k];
        for i in 0..k {
            for j in (i + 1)..k {
                let v = self.component(i, j).eval(x);
                m[j][i] = v.scale_re(-T::one());
                m[i][j] = v;
            }
        }
        m
    }
}

/// Pfaffian of an antisymmetric matrix of commuting (even-degree) form
/// entries; dimensions 2 and 4 are unrolled, larger even sizes use the
/// recursive expansion along the first row.
pub fn pfaffian_forms<T: Real>(m: &[Vec<Form<T>>]) -> Result<Form<T>> {
    let k = m.len();
    if k % 2 != 0 || k == 0 {
        return Err(Error::InvalidInput(
            "Pfaffian needs an even positive size".into(),
        ));
    }
    let dim = m[0][0].dim();
    match k {
        2 => Ok(m[0][1].clone()),
        4 => {
            let (a, b, c) = (&m[0][1], &m[0][2], &m[0][3]);
            let (d, e, f) = (&m[1][2], &m[1][3], &m[2][3]);
            // af − be + dc
            Ok(a.wedge(f)?.sub(&b.wedge(e)?).add(&d.wedge(c)?))
        }
        _ => {
            let mut acc = Form::zero(dim);
            for j in 1..k {
                // remove rows/cols 0 and j
                let keep: Vec<usize> = (0..k).filter(|&t| t != 0 && t != j).collect();
                let sub: Vec<Vec<Form<T>>> = keep
                    .iter()
                    .map(|&r| keep.iter().map(|&c| m[r][c].clone()).collect())
                    .collect();
                let part = m[0][j].wedge(&pfaffian_forms(&sub)?)?;
                let sign = if j % 2 == 1 { T::one() } else { -T::one() };
                acc = acc.add(&part.scale_re(sign));
            }
            Ok(acc)
        }
    }
}

/// Pfaffian of a scalar antisymmetric matrix (oracle for `Pf² = det`).
pub fn pfaffian_scalar<T: Real>(m: &nalgebra::DMatrix<T>) -> T {
    let k = m.nrows();
    assert_eq!(k % 2, 0);
    if k == 2 {
        return m[(0, 1)];
    }
    let mut acc = T::zero();
    for j in 1..k {
        let keep: Vec<usize> = (0..k).filter(|&t| t != 0 && t != j).collect();
        let sub = nalgebra::DMatrix::from_fn(k - 2, k - 2, |r, c| m[(keep[r], keep[c])]);
        let sign = if j % 2 == 1 { T::one() } else { -T::one() };
        acc += sign * m[(0, j)] * pfaffian_scalar(&sub);
    }
    acc
}

/// Pfaffian of the curvature as a top-degree field.
pub fn pfaffian_field<T: Real>(curv: &CurvatureData<T>) -> Result<FormField<T>> {
    if curv.size % 2 != 0 {
        return Err(Error::InvalidInput("odd index count has no Pfaffian".into()));
    }
    let c = curv.clone();
    let degree = curv.size;
    Ok(FormField::new(curv.chart.clone(), degree, move |x: &[T]| {
        pfaffian_forms(&c.matrix_at(x)).expect("even size checked")
    }))
}

/// Euler integral `∫ Pf(Ω)/(2π)^{k/2}` with a refinement error estimate.
/// Sizes 2 and 4 go through a top-coefficient fast path that avoids
/// building intermediate wedge products on the quadrature grid.
pub fn euler_integral<T: Real>(curv: &CurvatureData<T>, grid: &[usize]) -> Result<(T, T)> {
    let k = curv.size;
    if k != curv.chart.dim() {
        return Err(Error::DegreeMismatch(format!(
            "Pfaffian degree {k} does not match chart dimension {}",
            curv.chart.dim()
        )));
    }
    let norm = (r64::<T>(2.0) * T::pi()).powi((k / 2) as i32);
    if k == 2 || k == 4 {
        let full = ((1usize << k) - 1) as u16;
        let c = curv.clone();
        let field = FormField::new(curv.chart.clone(), k, move |x: &[T]| {
            let coeff = if k == 2 {
                c.component(0, 1).eval(x).coeff(full)
            } else {
                let a = c.component(0, 1).eval(x);
                let b = c.component(0, 2).eval(x);
                let cc = c.component(0, 3).eval(x);
                let d = c.component(1, 2).eval(x);
                let e = c.component(1, 3).eval(x);
                let f = c.component(2, 3).eval(x);
                a.wedge_coeff(&f, full) - b.wedge_coeff(&e, full) + d.wedge_coeff(&cc, full)
            };
            let mut out = Form::zero(k);
            out.set_coeff(full, coeff * Complex::new(T::one() / norm, T::zero()));
            out
        });
        return field.integrate(grid);
    }
    let field = pfaffian_field(curv)?.scale_field(Complex::new(T::one() / norm, T::zero()));
    field.integrate(grid)
}

/// Degree-4 L-polynomial term `−tr(Ω∧Ω)/(24π²)` integrated over a 4-chart.
pub fn l_polynomial_integral<T: Real>(curv: &CurvatureData<T>, grid: &[usize]) -> Result<(T, T)> {
    if curv.chart.dim() != 4 {
        return Err(Error::DimensionMismatch(
            "the degree-4 L-term needs a 4-dimensional chart".into(),
        ));
    }
    let c = curv.clone();
    let norm = -T::one() / (r64::<T>(24.0) * T::pi() * T::pi());
    let field = FormField::new(curv.chart.clone(), 4, move |x: &[T]| {
        trace_omega_squared(&c, x).scale_re(norm)
    });
    field.integrate(grid)
}

/// `tr(Ω∧Ω)(x) = Σ_{I,J} Ω^I_J ∧ Ω^J_I` evaluated pointwise.
pub fn trace_omega_squared<T: Real>(curv: &CurvatureData<T>, x: &[T]) -> Form<T> {
    let m = curv.matrix_at(x);
    let k = curv.size;
    let mut acc = Form::zero(curv.chart.dim());
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            acc = acc.add(&m[i][j].wedge(&m[j][i]).expect("same chart"));
        }
    }
    acc
}

/// Does `Ω∧Ω` vanish componentwise at the probe points (fast path for the
/// L-term)?
pub fn curvature_square_vanishes<T: Real>(
    curv: &CurvatureData<T>,
    probes: &[Vec<T>],
    tol: T,
) -> bool {
    for x in probes {
        let m = curv.matrix_at(x);
        for i in 0..curv.size {
            for j in 0..curv.size {
                for l in 0..curv.size {
                    if i == j || j == l {
                        continue;
                    }
                    let w = m[i][j].wedge(&m[j][l]).expect("same chart");
                    if w.norm_inf() > tol {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Invariant polynomial selector for the transgression form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantPolynomial {
    /// Pfaffian in index count 2 or 4
    Pfaffian,
    /// degree-4 L-term `−tr(Ω∧Ω)/(24π²)`
    LTermDegree4,
}

/// Transgression form `TP = l ∫₀¹ p_l(ω₁−ω₀, Ω_t, ..., Ω_t) dt` along the
/// straight path `ω_t = ω₀ + t(ω₁−ω₀)`, with the symmetric polarization
/// `p_l`; satisfies `d(TP) = P(Ω₁) − P(Ω₀)`.
pub fn transgression<T: Real>(
    conn0: &ConnectionData<T>,
    conn1: &ConnectionData<T>,
    p: InvariantPolynomial,
    step: Option<T>,
) -> Result<FormField<T>> {
    let k = conn0.size();
    if conn1.size() != k {
        return Err(Error::DimensionMismatch(
            "transgression needs connections of equal index count".into(),
        ));
    }
    match p {
        InvariantPolynomial::Pfaffian if k == 2 || k == 4 => {}
        InvariantPolynomial::LTermDegree4 => {}
        _ => {
            return Err(Error::InvalidInput(
                "unsupported invariant polynomial for this index count".into(),
            ))
        }
    }
    let chart = conn0.chart().clone();
    let dim = chart.dim();
    // Gauss-Legendre in the path parameter
    let (t_nodes, t_weights) = gauss_legendre::<T>(8);
    let conn0 = conn0.clone();
    let conn1 = conn1.clone();
    Ok(FormField::new_mixed(chart.clone(), move |x: &[T]| {
        let half = r64::<T>(0.5);
        let mut total = Form::zero(dim);
        // θ = ω₁ − ω₀ evaluated once
        let mut theta = vec![vec![Form::zero(dim); k]; k];
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    theta[i][j] = conn1.omega(i, j).eval(x).sub(&conn0.omega(i, j).eval(x));
                }
            }
        }
        for (tn, tw) in t_nodes.iter().zip(&t_weights) {
            let t = half + half * *tn; // map [−1,1] → [0,1]
            let w = half * *tw;
            // Ω_t at x: dω_t + ω_t∧ω_t with ω_t = ω₀ + tθ
            let mut omega_t_matrix = vec![vec![Form::zero(dim); k]; k];
            let mut d_omega_t = vec![vec![Form::zero(dim); k]; k];
            for i in 0..k {
                for j in 0..k {
                    if i == j {
                        continue;
                    }
                    let w0 = conn0.omega(i, j);
                    let w1 = conn1.omega(i, j);
                    omega_t_matrix[i][j] = w0
                        .eval(x)
                        .scale_re(T::one() - t)
                        .add(&w1.eval(x).scale_re(t));
                    let d0 = w0
                        .exterior_derivative(x, step)
                        .expect("derivative inside chart");
                    let d1 = w1
                        .exterior_derivative(x, step)
                        .expect("derivative inside chart");
                    d_omega_t[i][j] = d0.scale_re(T::one() - t).add(&d1.scale_re(t));
                }
            }
            let mut curv_t = vec![vec![Form::zero(dim); k]; k];
            for i in 0..k {
                for j in 0..k {
                    if i == j {
                        continue;
                    }
                    let mut acc = d_omega_t[i][j].clone();
                    for l in 0..k {
                        if l == i || l == j {
                            continue;
                        }
                        acc = acc.add(
                            &omega_t_matrix[i][l]
                                .wedge(&omega_t_matrix[l][j])
                                .expect("same chart"),
                        );
                    }
                    curv_t[i][j] = acc;
                }
            }
            let integrand = match p {
                InvariantPolynomial::Pfaffian => {
                    if k == 2 {
                        // l = 1: p₁(θ) = θ_{01}
                        theta[0][1].clone()
                    } else {
                        // l = 2: 2·p₂(θ, Ω_t) with the symmetric polarization
                        // of the 4×4 Pfaffian
                        let pf_mixed = |a: &Vec<Vec<Form<T>>>, b: &Vec<Vec<Form<T>>>| {
                            a[0][1]
                                .wedge(&b[2][3])
                                .unwrap()
                                .add(&b[0][1].wedge(&a[2][3]).unwrap())
                                .sub(&a[0][2].wedge(&b[1][3]).unwrap())
                                .sub(&b[0][2].wedge(&a[1][3]).unwrap())
                                .add(&a[0][3].wedge(&b[1][2]).unwrap())
                                .add(&b[0][3].wedge(&a[1][2]).unwrap())
                                .scale_re(half)
                        };
                        pf_mixed(&theta, &curv_t).scale_re(r64::<T>(2.0))
                    }
                }
                InvariantPolynomial::LTermDegree4 => {
                    // P(Ω) = −tr(Ω∧Ω)/(24π²): p₂(A,B) = −tr(A∧B)/(24π²)
                    let mut tr = Form::zero(dim);
                    for i in 0..k {
                        for j in 0..k {
                            if i == j {
                                continue;
                            }
                            tr = tr.add(&theta[i][j].wedge(&curv_t[j][i]).unwrap());
                        }
                    }
                    tr.scale_re(-r64::<T>(2.0) / (r64::<T>(24.0) * T::pi() * T::pi()))
                }
            };
            total = total.add(&integrand.scale_re(w));
        }
        total
    }))
}

/// `P(Ω)` as a pointwise form, matching the transgression normalization.
pub fn invariant_polynomial_value<T: Real>(
    p: InvariantPolynomial,
    curv: &CurvatureData<T>,
    x: &[T],
) -> Result<Form<T>> {
    match p {
        InvariantPolynomial::Pfaffian => pfaffian_forms(&curv.matrix_at(x)),
        InvariantPolynomial::LTermDegree4 => Ok(trace_omega_squared(curv, x)
            .scale_re(-T::one() / (r64::<T>(24.0) * T::pi() * T::pi()))),
    }
}

// --- the worked connection tables -------------------------------------------

fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// Connection table of the codimension-4 quotient of the 5-sphere on the
/// chart `(θ, φ, ξ, β)`: the hatted orthonormal coframe and the four
/// non-zero components, with their analytic differentials.
pub fn s5_codim4_connection<T: Real>(chart: &Chart<T>) -> Result<ConnectionData<T>> {
    let labels = vec!["theta".into(), "phi".into(), "xi".into(), "beta".into()];
    let half = r64::<T>(0.5);
    // hatted coframe: ê^θ = (cosβ/2)dθ, ê^φ = (cosβ sinθ/2)dφ,
    //                 ê^ξ = sinβ dξ,    ê^β = dβ
    let e_theta = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0001).scale(re(x[3].cos() * half))
    })
    .with_analytic_derivative(move |x: &[T]| {
        // dê^θ = (sinβ/2) dθ∧dβ
        Form::basis(4, 0b0001)
            .wedge(&Form::basis(4, 0b1000))
            .expect("dim")
            .scale(re(x[3].sin() * half))
    });
    let e_phi = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0010).scale(re(x[3].cos() * x[0].sin() * half))
    })
    .with_analytic_derivative(move |x: &[T]| {
        // dê^φ = (cosβ cosθ/2) dθ∧dφ + (sinβ sinθ/2) dφ∧dβ
        let t1 = Form::basis(4, 0b0001)
            .wedge(&Form::basis(4, 0b0010))
            .expect("dim")
            .scale(re(x[3].cos() * x[0].cos() * half));
        let t2 = Form::basis(4, 0b0010)
            .wedge(&Form::basis(4, 0b1000))
            .expect("dim")
            .scale(re(x[3].sin() * x[0].sin() * half));
        t1.add(&t2)
    });
    let e_xi = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0100).scale(re(x[3].sin()))
    })
    .with_analytic_derivative(move |x: &[T]| {
        Form::basis(4, 0b1000)
            .wedge(&Form::basis(4, 0b0100))
            .expect("dim")
            .scale(re(x[3].cos()))
    });
    let e_beta = FormField::constant(chart.clone(), Form::basis(4, 0b1000));
    // ω̂^θ_φ = −2 secβ cotθ ê^φ = −(cotθ sinθ) dφ = −cosθ dφ
    let w_theta_phi = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0010).scale(re(-x[0].cos()))
    })
    .with_analytic_derivative(move |x: &[T]| {
        Form::basis(4, 0b0001)
            .wedge(&Form::basis(4, 0b0010))
            .expect("dim")
            .scale(re(x[0].sin()))
    });
    // ω̂^θ_β = −tanβ ê^θ = −(sinβ/2) dθ
    let w_theta_beta = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0001).scale(re(-x[3].sin() * half))
    })
    .with_analytic_derivative(move |x: &[T]| {
        // d(−(sinβ/2)dθ) = (cosβ/2) dθ∧dβ
        Form::basis(4, 0b0001)
            .wedge(&Form::basis(4, 0b1000))
            .expect("dim")
            .scale(re(x[3].cos() * half))
    });
    // ω̂^φ_β = −tanβ ê^φ = −(sinβ sinθ/2) dφ
    let w_phi_beta = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0010).scale(re(-x[3].sin() * x[0].sin() * half))
    })
    .with_analytic_derivative(move |x: &[T]| {
        let t1 = Form::basis(4, 0b0001)
            .wedge(&Form::basis(4, 0b0010))
            .expect("dim")
            .scale(re(-x[3].sin() * x[0].cos() * half));
        let t2 = Form::basis(4, 0b0010)
            .wedge(&Form::basis(4, 0b1000))
            .expect("dim")
            .scale(re(x[3].cos() * x[0].sin() * half));
        t1.add(&t2)
    });
    // ω̂^ξ_β = cotβ ê^ξ = cosβ dξ
    let w_xi_beta = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0100).scale(re(x[3].cos()))
    })
    .with_analytic_derivative(move |x: &[T]| {
        Form::basis(4, 0b0100)
            .wedge(&Form::basis(4, 0b1000))
            .expect("dim")
            .scale(re(x[3].sin()))
    });
    ConnectionData::new(
        chart.clone(),
        labels,
        Some(vec![e_theta, e_phi, e_xi, e_beta]),
        vec![
            (0, 1, w_theta_phi),
            (0, 3, w_theta_beta),
            (1, 3, w_phi_beta),
            (2, 3, w_xi_beta),
        ],
    )
}

/// Closed-form curvature components of the codimension-4 quotient, for the
/// quadrature-heavy characteristic integrals. They agree with the
/// structure-equation route (`curvature(s5_codim4_connection(..))`) to
/// numerical-differentiation accuracy; the verification runs alongside the
/// integrals.
pub fn s5_codim4_curvature<T: Real>(chart: &Chart<T>) -> Result<CurvatureData<T>> {
    let quarter = r64::<T>(0.25);
    let half = r64::<T>(0.5);
    // precomputed coordinate 2-form monomials
    let th_ph = Form::<T>::basis(4, 0b0001).wedge(&Form::basis(4, 0b0010))?;
    let th_xi = Form::<T>::basis(4, 0b0001).wedge(&Form::basis(4, 0b0100))?;
    let th_be = Form::<T>::basis(4, 0b0001).wedge(&Form::basis(4, 0b1000))?;
    let ph_xi = Form::<T>::basis(4, 0b0010).wedge(&Form::basis(4, 0b0100))?;
    let ph_be = Form::<T>::basis(4, 0b0010).wedge(&Form::basis(4, 0b1000))?;
    let xi_be = Form::<T>::basis(4, 0b0100).wedge(&Form::basis(4, 0b1000))?;
    let mk = |base: Form<T>, coeff: std::sync::Arc<dyn Fn(&[T]) -> T + Send + Sync>| {
        let chart = chart.clone();
        FormField::new(chart, 2, move |x: &[T]| base.scale_re(coeff(x)))
    };
    use std::sync::Arc;
    // Ω̂^θ_φ = (3sec²β+1) ê^θ∧ê^φ = (3 + cos²β)(sinθ/4) dθ∧dφ
    let c01 = mk(
        th_ph,
        Arc::new(move |x: &[T]| {
            (r64::<T>(3.0) + x[3].cos() * x[3].cos()) * x[0].sin() * quarter
        }),
    );
    // Ω̂^θ_ξ = ê^θ∧ê^ξ = (cosβ sinβ / 2) dθ∧dξ
    let c02 = mk(
        th_xi,
        Arc::new(move |x: &[T]| x[3].cos() * x[3].sin() * half),
    );
    // Ω̂^θ_β = ê^θ∧ê^β = (cosβ/2) dθ∧dβ
    let c03 = mk(th_be, Arc::new(move |x: &[T]| x[3].cos() * half));
    // Ω̂^φ_ξ = ê^φ∧ê^ξ = (cosβ sinθ sinβ / 2) dφ∧dξ
    let c12 = mk(
        ph_xi,
        Arc::new(move |x: &[T]| x[3].cos() * x[0].sin() * x[3].sin() * half),
    );
    // Ω̂^φ_β = ê^φ∧ê^β = (cosβ sinθ / 2) dφ∧dβ
    let c13 = mk(
        ph_be,
        Arc::new(move |x: &[T]| x[3].cos() * x[0].sin() * half),
    );
    // Ω̂^ξ_β = ê^ξ∧ê^β = sinβ dξ∧dβ
    let c23 = mk(xi_be, Arc::new(move |x: &[T]| x[3].sin()));
    CurvatureData::from_components(
        chart.clone(),
        4,
        vec![
            (0, 1, c01),
            (0, 2, c02),
            (0, 3, c03),
            (1, 2, c12),
            (1, 3, c13),
            (2, 3, c23),
        ],
    )
}

/// Maximum deviation between the closed-form curvature table and the
/// structure-equation route at the given sample points.
pub fn s5_codim4_curvature_crosscheck<T: Real>(
    chart: &Chart<T>,
    samples: &[Vec<T>],
) -> Result<T> {
    let table = s5_codim4_curvature(chart)?;
    let derived = curvature(&s5_codim4_connection(chart)?, None);
    let mut worst = T::zero();
    for x in samples {
        for i in 0..4 {
            for j in (i + 1)..4 {
                let a = table.component(i, j).eval(x);
                let b = derived.component(i, j).eval(x);
                let d = a.sub(&b).norm_inf();
                if d > worst {
                    worst = d;
                }
            }
        }
    }
    Ok(worst)
}

/// Connection table of the codimension-2 quotient (round upper half
/// 4-sphere) on the chart `(ξ1, ξ2, η, β)`.
pub fn s5_codim2_connection<T: Real>(chart: &Chart<T>) -> Result<ConnectionData<T>> {
    let labels = vec!["xi1".into(), "xi2".into(), "eta".into(), "beta".into()];
    // coframe: ê¹ = cosβ cosη dξ1, ê² = cosβ sinη dξ2, ê³ = cosβ dη, ê⁴ = dβ
    let e1 = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0001).scale(re(x[3].cos() * x[2].cos()))
    });
    let e2 = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0010).scale(re(x[3].cos() * x[2].sin()))
    });
    let e3 = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0100).scale(re(x[3].cos()))
    });
    let e4 = FormField::constant(chart.clone(), Form::basis(4, 0b1000));
    // ω̂¹₃ = −tanη secβ ê¹ = −sinη dξ1 ; ω̂²₃ = cotη secβ ê² = cosη dξ2
    let w13 = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0001).scale(re(-x[2].sin()))
    });
    let w23 = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0010).scale(re(x[2].cos()))
    });
    // ω̂^i₄ = −tanβ ê^i
    let w14 = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0001).scale(re(-x[3].sin() * x[2].cos()))
    });
    let w24 = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0010).scale(re(-x[3].sin() * x[2].sin()))
    });
    let w34 = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(4, 0b0100).scale(re(-x[3].sin()))
    });
    ConnectionData::new(
        chart.clone(),
        labels,
        Some(vec![e1, e2, e3, e4]),
        vec![
            (0, 2, w13),
            (1, 2, w23),
            (0, 3, w14),
            (1, 3, w24),
            (2, 3, w34),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Coord;
    use crate::s1::example;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, TAU};

    fn s5_chart() -> Chart<f64> {
        example::<f64>("s5_codim4").unwrap().quotient.chart
    }

    #[test]
    fn flat_connection_has_zero_curvature() {
        let chart = s5_chart();
        let conn = ConnectionData::new(
            chart.clone(),
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            None,
            vec![],
        )
        .unwrap();
        let curv = curvature(&conn, None);
        let x = [1.0, 2.0, 3.0, 0.7];
        for i in 0..4 {
            for j in 0..4 {
                assert!(curv.component(i, j).eval(&x).is_zero(1e-12));
            }
        }
        let (v, _) = euler_integral(&curv, &[6, 6, 6, 6]).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn s5_structure_equation_residual() {
        let chart = s5_chart();
        let conn = s5_codim4_connection(&chart).unwrap();
        for x in [
            [1.1, 0.4, 2.0, 0.7],
            [2.0, 3.0, 1.0, 1.1],
            [FRAC_PI_3, 1.0, 5.0, FRAC_PI_4],
        ] {
            let res = conn.structure_residual(&x, None).unwrap();
            assert!(res < 1e-8, "structure residual {res} at {x:?}");
        }
    }

    #[test]
    fn s5_curvature_components() {
        // Ω̂^θ_φ = (3sec²β+1) ê^θ∧ê^φ ; at β = π/4 the coefficient is 7
        let chart = s5_chart();
        let conn = s5_codim4_connection(&chart).unwrap();
        let curv = curvature(&conn, None);
        let x = [1.2, 0.8, 2.5, FRAC_PI_4];
        let got = curv.component(0, 1).eval(&x);
        // ê^θ∧ê^φ = (cos²β sinθ / 4) dθ∧dφ
        let hat = (x[3].cos().powi(2) * x[0].sin() / 4.0) * 1.0;
        let sec2 = 1.0 / x[3].cos().powi(2);
        assert_relative_eq!(
            got.coeff(0b0011).re,
            (3.0 * sec2 + 1.0) * hat,
            epsilon = 1e-9
        );
        // Ω̂^θ_ξ = ê^θ∧ê^ξ and Ω̂^ξ_β = ê^ξ∧ê^β
        let got = curv.component(0, 2).eval(&x);
        assert_relative_eq!(
            got.coeff(0b0101).re,
            x[3].cos() / 2.0 * x[3].sin(),
            epsilon = 1e-9
        );
        let got = curv.component(2, 3).eval(&x);
        assert_relative_eq!(got.coeff(0b1100).re, x[3].sin(), epsilon = 1e-9);
    }

    #[test]
    fn cone_limit_by_delta_extrapolation() {
        // as β → π/2 the vertical block tends to R^{TY} − e^i∧e^j: the
        // ê^θ∧ê^φ coefficient of Ω̂^θ_φ over cos²β tends to 4 − 1 = 3
        let chart = s5_chart();
        let conn = s5_codim4_connection(&chart).unwrap();
        let curv = curvature(&conn, None);
        let coeff_at = |delta: f64| {
            let x = [1.1, 0.4, 2.0, FRAC_PI_2 - delta];
            // coefficient against the unhatted vertical frame e^θ∧e^φ
            let frame = x[0].sin() / 4.0;
            curv.component(0, 1).eval(&x).coeff(0b0011).re / frame
        };
        let c1 = coeff_at(0.2);
        let c2 = coeff_at(0.1);
        // Richardson in δ²: the deviation is sin²δ = δ² + O(δ⁴)
        let extrapolated = (4.0 * c2 - c1) / 3.0;
        assert_relative_eq!(extrapolated, 3.0, epsilon = 2e-4);
        // and the mixed vertical/horizontal component dies in the limit
        let x = [1.1, 0.4, 2.0, FRAC_PI_2 - 0.01];
        assert!(curv.component(0, 2).eval(&x).norm_inf() < 1e-2);
    }

    #[test]
    fn pfaffian_scalar_specializations() {
        // 4×4 display: af − be + dc
        let (a, b, c, d, e, f) = (0.7, -1.2, 0.4, 2.0, 0.3, -0.9);
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, a, b, c, //
                -a, 0.0, d, e, //
                -b, -d, 0.0, f, //
                -c, -e, -f, 0.0,
            ],
        );
        assert_relative_eq!(pfaffian_scalar(&m), a * f - b * e + d * c);
        // block diagonal [[0,a],[−a,0]] ⊕ [[0,f],[−f,0]] → af
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, a, 0.0, 0.0, //
                -a, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, f, //
                0.0, 0.0, -f, 0.0,
            ],
        );
        assert_relative_eq!(pfaffian_scalar(&m), a * f);
        // Pf(A)² = det(A), and Pf(UAUᵀ) = det(U)·Pf(A)
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let raw = DMatrix::<f64>::from_fn(6, 6, |_, _| rng.gen_range(-1.0..1.0));
            let skew = (&raw - raw.transpose()).scale(0.5);
            let pf = pfaffian_scalar(&skew);
            assert_relative_eq!(pf * pf, skew.determinant(), epsilon = 1e-10, max_relative = 1e-8);
            let q = raw.clone().qr().q();
            let conj = &q * &skew * q.transpose();
            assert_relative_eq!(
                pfaffian_scalar(&conj),
                q.determinant() * pf,
                epsilon = 1e-9,
                max_relative = 1e-7
            );
        }
    }

    #[test]
    fn s5_pfaffian_display() {
        // Pf(Ω̂(β)) = 3(1+cos²β) sinβ e^θ∧e^φ∧e^ξ∧dβ at β = π/3
        let chart = s5_chart();
        let conn = s5_codim4_connection(&chart).unwrap();
        let curv = curvature(&conn, None);
        let x = [1.3, 0.6, 2.0, FRAC_PI_3];
        let pf = pfaffian_forms(&curv.matrix_at(&x)).unwrap();
        // unhatted frame: e^θ∧e^φ∧e^ξ∧dβ has coordinate coefficient
        // (1/2)(sinθ/2)(1)(1)
        let frame = x[0].sin() / 4.0;
        let want = 3.0 * (1.0 + x[3].cos().powi(2)) * x[3].sin() * frame;
        assert_relative_eq!(pf.coeff(0b1111).re, want, epsilon = 1e-9);
    }

    #[test]
    fn s5_euler_integral_is_two() {
        let chart = s5_chart();
        let conn = s5_codim4_connection(&chart).unwrap();
        let curv = curvature(&conn, None);
        let (v, err) = euler_integral(&curv, &[24, 8, 8, 24]).unwrap();
        assert_relative_eq!(v, 2.0, epsilon = 1e-6);
        assert!(err < 1e-6, "refinement estimate {err}");
    }

    #[test]
    fn s5_l_term_vanishes() {
        let chart = s5_chart();
        let conn = s5_codim4_connection(&chart).unwrap();
        let curv = curvature(&conn, None);
        let probes = vec![
            vec![1.0, 0.5, 2.0, 0.8],
            vec![2.2, 4.0, 0.3, 0.4],
            vec![0.7, 1.0, 1.0, 1.2],
        ];
        assert!(curvature_square_vanishes(&curv, &probes, 1e-10));
        let (v, _) = l_polynomial_integral(&curv, &[8, 4, 4, 8]).unwrap();
        assert!(v.abs() < 1e-8, "L-term integral {v}");
    }

    #[test]
    fn codim2_round_sphere_checks() {
        // the codim-2 quotient is the round upper half 4-sphere: the
        // structure equations hold, Ω^I_J = ê^I∧ê^J, the L-term vanishes,
        // and the Euler integral is 1 (Gauss-Bonnet of the half sphere)
        let ex = example::<f64>("s5_codim2").unwrap();
        let chart = ex.quotient.chart;
        let conn = s5_codim2_connection(&chart).unwrap();
        for x in [[1.0, 2.0, 0.7, 0.6], [4.0, 1.0, 1.2, 0.3]] {
            let res = conn.structure_residual(&x, None).unwrap();
            assert!(res < 1e-8, "structure residual {res}");
        }
        let curv = curvature(&conn, None);
        let x = [1.0, 2.0, 0.7, 0.6];
        // Ω¹₂ = ê¹∧ê² for the unit round metric
        let got = curv.component(0, 1).eval(&x);
        let want = (x[3].cos() * x[2].cos()) * (x[3].cos() * x[2].sin());
        assert_relative_eq!(got.coeff(0b0011).re, want, epsilon = 1e-9);
        let (l, _) = l_polynomial_integral(&curv, &[6, 6, 8, 8]).unwrap();
        assert!(l.abs() < 1e-8, "codim-2 L-term {l}");
        let (e, _) = euler_integral(&curv, &[10, 10, 16, 16]).unwrap();
        assert_relative_eq!(e, 1.0, epsilon = 1e-6);
    }

    fn torus_chart() -> Chart<f64> {
        Chart::new(
            vec![
                Coord {
                    name: "u".into(),
                    lo: 0.0,
                    hi: TAU,
                    periodic: true,
                },
                Coord {
                    name: "v".into(),
                    lo: 0.0,
                    hi: TAU,
                    periodic: true,
                },
            ],
            |_x: &[f64]| DMatrix::identity(2, 2),
            1,
        )
    }

    #[test]
    fn transgression_trivial_for_equal_connections() {
        let chart = torus_chart();
        let w = FormField::new(chart.clone(), 1, |x: &[f64]| {
            Form::basis(2, 0b01).scale_re(x[1].sin())
        });
        let conn = ConnectionData::new(
            chart.clone(),
            vec!["1".into(), "2".into()],
            None,
            vec![(0, 1, w)],
        )
        .unwrap();
        let tp = transgression(&conn, &conn, InvariantPolynomial::Pfaffian, None).unwrap();
        assert!(tp.eval(&[1.0, 2.0]).is_zero(1e-13));
    }

    #[test]
    fn transgression_derivative_identity_dim2() {
        // d(TP) = Pf(Ω₁) − Pf(Ω₀) for a random pair on the torus
        let chart = torus_chart();
        let w0 = FormField::new(chart.clone(), 1, |x: &[f64]| {
            Form::basis(2, 0b01)
                .scale_re((x[1]).sin() * 0.3)
                .add(&Form::basis(2, 0b10).scale_re((2.0 * x[0]).cos()))
        });
        let w1 = FormField::new(chart.clone(), 1, |x: &[f64]| {
            Form::basis(2, 0b01)
                .scale_re((x[0] + x[1]).cos())
                .add(&Form::basis(2, 0b10).scale_re(0.4 * (x[1]).sin()))
        });
        let labels = vec!["1".to_string(), "2".to_string()];
        let conn0 =
            ConnectionData::new(chart.clone(), labels.clone(), None, vec![(0, 1, w0)]).unwrap();
        let conn1 = ConnectionData::new(chart.clone(), labels, None, vec![(0, 1, w1)]).unwrap();
        let tp = transgression(&conn0, &conn1, InvariantPolynomial::Pfaffian, None).unwrap();
        let curv0 = curvature(&conn0, None);
        let curv1 = curvature(&conn1, None);
        for x in [[1.0, 0.5], [2.5, 4.0], [0.3, 5.5]] {
            let dtp = tp.numerical_derivative(&x, None).unwrap();
            let want = invariant_polynomial_value(InvariantPolynomial::Pfaffian, &curv1, &x)
                .unwrap()
                .sub(&invariant_polynomial_value(InvariantPolynomial::Pfaffian, &curv0, &x).unwrap());
            assert!(
                dtp.sub(&want).norm_inf() < 1e-6,
                "residual {} at {x:?}",
                dtp.sub(&want).norm_inf()
            );
        }
    }

    #[test]
    fn transgression_derivative_identity_dim4() {
        // same identity for the 4×4 Pfaffian on the codim-4 quotient chart,
        // against a connection pair built from the table and a smooth
        // perturbation of it
        let chart = s5_chart();
        let conn0 = s5_codim4_connection(&chart).unwrap();
        let chart_p = chart.clone();
        let pert = FormField::new(chart_p.clone(), 1, |x: &[f64]| {
            Form::basis(4, 0b0100).scale_re(0.2 * (x[0]).sin() * (x[3]).cos())
        });
        let mut entries = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let base = conn0.omega(i, j);
                if (i, j) == (0, 1) {
                    entries.push((i, j, base.add_field(&pert)));
                } else {
                    entries.push((i, j, base));
                }
            }
        }
        let labels = vec!["theta".into(), "phi".into(), "xi".into(), "beta".into()];
        let conn1 = ConnectionData::new(chart.clone(), labels, None, entries).unwrap();
        let tp = transgression(&conn0, &conn1, InvariantPolynomial::Pfaffian, None).unwrap();
        let curv0 = curvature(&conn0, None);
        let curv1 = curvature(&conn1, None);
        let x = [1.2, 0.7, 2.1, 0.8];
        let dtp = tp.numerical_derivative(&x, None).unwrap();
        let want = invariant_polynomial_value(InvariantPolynomial::Pfaffian, &curv1, &x)
            .unwrap()
            .sub(&invariant_polynomial_value(InvariantPolynomial::Pfaffian, &curv0, &x).unwrap());
        assert!(
            dtp.sub(&want).norm_inf() < 1e-6,
            "residual {}",
            dtp.sub(&want).norm_inf()
        );
    }

    #[test]
    fn adiabatic_path_recovers_cone_connection() {
        // path ω̂(t) on the link of the codim-4 example: ω̂^i_r(t) = t e^i,
        // vertical block fixed; at t = 1 the components coincide with the
        // cone connection and the curvature picks up −t² e^i∧e^j
        let link_chart = Chart::new(
            vec![
                Coord {
                    name: "theta".into(),
                    lo: 0.0,
                    hi: PI,
                    periodic: false,
                },
                Coord {
                    name: "phi".into(),
                    lo: 0.0,
                    hi: TAU,
                    periodic: true,
                },
                Coord {
                    name: "xi".into(),
                    lo: 0.0,
                    hi: TAU,
                    periodic: true,
                },
            ],
            |x: &[f64]| {
                DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                    0.25,
                    0.25 * x[0].sin().powi(2),
                    1.0,
                ]))
            },
            1,
        );
        // vertical coframe of the link fiber S²(1/2)
        let e_theta = FormField::new(link_chart.clone(), 1, |_x: &[f64]| {
            Form::basis(3, 0b001).scale_re(0.5)
        });
        let e_phi = FormField::new(link_chart.clone(), 1, |x: &[f64]| {
            Form::basis(3, 0b010).scale_re(0.5 * x[0].sin())
        });
        // S²(1/2) Levi-Civita: ω^θ_φ = −2cotθ e^φ = −cosθ dφ
        let w_theta_phi = FormField::new(link_chart.clone(), 1, |x: &[f64]| {
            Form::basis(3, 0b010).scale_re(-x[0].cos())
        });
        let labels: Vec<String> = ["theta", "phi", "xi", "r"].iter().map(|s| s.to_string()).collect();
        let path_connection = |t: f64| {
            ConnectionData::new(
                link_chart.clone(),
                labels.clone(),
                None,
                vec![
                    (0, 1, w_theta_phi.clone()),
                    (0, 3, e_theta.scale_field(Complex::new(t, 0.0))),
                    (1, 3, e_phi.scale_field(Complex::new(t, 0.0))),
                ],
            )
            .unwrap()
        };
        let x = [1.1, 0.4, 2.0];
        // t = 1 recovers the cone connection components ω̂^i_r = e^i
        let conn1 = path_connection(1.0);
        assert!(conn1
            .omega(0, 3)
            .eval(&x)
            .sub(&e_theta.eval(&x))
            .is_zero(1e-14));
        assert!(conn1
            .omega(1, 3)
            .eval(&x)
            .sub(&e_phi.eval(&x))
            .is_zero(1e-14));
        // curvature of the path: Ω̂^θ_φ(t) = (4 − t²) ê^θ∧ê^φ
        for &t in &[0.0f64, 0.5, 1.0] {
            let curv = curvature(&path_connection(t), None);
            let got = curv.component(0, 1).eval(&x);
            let hat = 0.25 * x[0].sin();
            assert_relative_eq!(got.coeff(0b011).re, (4.0 - t * t) * hat, epsilon = 1e-9);
        }
    }

    #[test]
    fn transgression_rejects_unsupported() {
        let chart = torus_chart();
        let conn = ConnectionData::new(
            chart.clone(),
            vec!["1".into(), "2".into(), "3".into()],
            None,
            vec![],
        )
        .unwrap();
        assert!(transgression(&conn, &conn, InvariantPolynomial::Pfaffian, None).is_err());
    }
}
