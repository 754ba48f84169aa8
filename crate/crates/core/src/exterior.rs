//! Exact fiberwise exterior algebra over an oriented inner-product space.
//!
//! Multivectors are stored densely over the basis of index subsets of
//! `{1..m}` encoded as bitmasks, so all operations below are exact up to
//! floating point rounding. The metric enters through [`Space`], which keeps
//! the Gram matrix of the coframe `e^1..e^m` together with the orientation
//! sign; an orthonormal fast path covers every worked example.

use crate::{cnorm, r64, Error, Real, Result, C};
use nalgebra::DMatrix;
use num_complex::Complex;
use std::sync::OnceLock;

pub const MAX_DIM: usize = 8;

/// Sign of the shuffle merging `e^I ∧ e^J` into the sorted basis form.
/// Zero when the masks overlap.
fn wedge_sign(i_mask: u16, j_mask: u16) -> i32 {
    if i_mask & j_mask != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut j = j_mask;
    while j != 0 {
        let b = j.trailing_zeros();
        inversions += (i_mask >> (b + 1)).count_ones();
        j &= j - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign picked up by `ι_{e_k}` passing over the bits of `mask` below `k`.
fn contract_sign(mask: u16, k: usize) -> i32 {
    let below = mask & ((1u16 << k) - 1);
    if below.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Graded complex multivector on an `m`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<T: Real> {
    dim: usize,
    coeffs: Vec<C<T>>,
}

impl<T: Real> Form<T> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds supported maximum");
        Form {
            dim,
            coeffs: vec![Complex::new(T::zero(), T::zero()); 1 << dim],
        }
    }

    /// The basis form `e^I` for the subset encoded by `mask`.
    pub fn basis(dim: usize, mask: u16) -> Self {
        let mut f = Self::zero(dim);
        f.coeffs[mask as usize] = Complex::new(T::one(), T::zero());
        f
    }

    pub fn scalar(dim: usize, value: C<T>) -> Self {
        let mut f = Self::zero(dim);
        f.coeffs[0] = value;
        f
    }

    /// Degree-1 form with the given (complex) coefficients on `e^1..e^m`.
    pub fn one_form(coeffs: &[C<T>]) -> Self {
        let mut f = Self::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            f.coeffs[1 << i] = *c;
        }
        f
    }

    pub fn one_form_re(coeffs: &[T]) -> Self {
        let cs: Vec<C<T>> = coeffs.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::one_form(&cs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, mask: u16) -> C<T> {
        self.coeffs[mask as usize]
    }

    pub fn set_coeff(&mut self, mask: u16, value: C<T>) {
        self.coeffs[mask as usize] = value;
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    /// Homogeneous component of degree `r`.
    pub fn component(&self, r: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (mask, c) in self.coeffs.iter().enumerate() {
            if mask.count_ones() as usize == r {
                out.coeffs[mask] = *c;
            }
        }
        out
    }

    /// Degree of a homogeneous form, or `None` if mixed or zero.
    pub fn degree(&self) -> Option<usize> {
        let mut deg = None;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.norm_sqr() > T::zero() {
                match deg {
                    None => deg = Some(mask.count_ones() as usize),
                    Some(d) if d != mask.count_ones() as usize => return None,
                    _ => {}
                }
            }
        }
        deg
    }

    pub fn is_zero(&self, tol: T) -> bool {
        self.coeffs.iter().all(|c| cnorm(c) <= tol)
    }

    pub fn norm_inf(&self) -> T {
        let mut m = T::zero();
        for c in &self.coeffs {
            let n = cnorm(c);
            if n > m {
                m = n;
            }
        }
        m
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_re(-T::one()))
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = c.conj();
        }
        out
    }

    /// Exterior product. Bilinear, associative, graded commutative.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "wedge of forms on dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        let mut out = Self::zero(self.dim);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.norm_sqr() == T::zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let s = wedge_sign(i as u16, j as u16);
                if s != 0 {
                    let sign = if s > 0 { T::one() } else { -T::one() };
                    out.coeffs[i | j] += *a * *b * Complex::new(sign, T::zero());
                }
            }
        }
        Ok(out)
    }

    /// Coefficient of `e^target` in `self ∧ other`, without building the
    /// product form (hot path of the Pfaffian quadrature).
    pub fn wedge_coeff(&self, other: &Self, target: u16) -> C<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut sub = target;
        loop {
            // enumerate submasks of `target`
            let a = self.coeffs[sub as usize];
            if a.norm_sqr() > T::zero() {
                let comp = target & !sub;
                let b = other.coeffs[comp as usize];
                if b.norm_sqr() > T::zero() {
                    let s = wedge_sign(sub, comp);
                    if s != 0 {
                        let sign = if s > 0 { T::one() } else { -T::one() };
                        acc += a * b * Complex::new(sign, T::zero());
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & target;
        }
        acc
    }

    /// Interior product `ι_X` with a vector given by components on `e_1..e_m`.
    /// Anti-derivation of degree −1; needs no metric.
    pub fn contract(&self, x: &[C<T>]) -> Result<Self> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "contraction of {}-vector with form on dimension {}",
                x.len(),
                self.dim
            )));
        }
        let mut out = Self::zero(self.dim);
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.norm_sqr() == T::zero() {
                continue;
            }
            for k in 0..self.dim {
                if mask & (1 << k) != 0 {
                    let s = contract_sign(mask as u16, k);
                    let sign = if s > 0 { T::one() } else { -T::one() };
                    out.coeffs[mask & !(1 << k)] += *c * x[k] * Complex::new(sign, T::zero());
                }
            }
        }
        Ok(out)
    }

    pub fn contract_re(&self, x: &[T]) -> Result<Self> {
        let xc: Vec<C<T>> = x.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.contract(&xc)
    }

    /// Gauss-Bonnet involution `ε = (−1)^r`.
    pub fn epsilon(&self) -> Self {
        let mut out = self.clone();
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            if mask.count_ones() % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }
}

/// Metric data of the coframe.
#[derive(Clone, Debug)]
pub enum Metric<T: Real> {
    /// `⟨e^i, e^j⟩ = δ_ij`.
    Orthonormal,
    /// Gram matrix `⟨e^i, e^j⟩` of the coframe (inverse of the coordinate
    /// metric when the coframe is a coordinate one).
    Gram(DMatrix<T>),
}

/// Oriented inner-product space carrying the metric side of the algebra.
pub struct Space<T: Real> {
    dim: usize,
    metric: Metric<T>,
    orientation: i8,
    form_gram: OnceLock<DMatrix<T>>,
    covector_inverse: OnceLock<DMatrix<T>>,
}

impl<T: Real> Space<T> {
    pub fn euclidean(dim: usize) -> Self {
        assert!(dim <= MAX_DIM);
        Space {
            dim,
            metric: Metric::Orthonormal,
            orientation: 1,
            form_gram: OnceLock::new(),
            covector_inverse: OnceLock::new(),
        }
    }

    pub fn with_orientation(mut self, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1);
        self.orientation = sign;
        self
    }

    /// Space with the given coframe Gram matrix; checked to be symmetric
    /// positive definite.
    pub fn with_gram(dim: usize, gram: DMatrix<T>, orientation: i8) -> Result<Self> {
        assert!(dim <= MAX_DIM);
        if gram.nrows() != dim || gram.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "gram matrix {}x{} for dimension {}",
                gram.nrows(),
                gram.ncols(),
                dim
            )));
        }
        let tol = r64::<T>(1e-10) * gram.norm();
        if (&gram - gram.transpose()).norm() > tol {
            return Err(Error::MetricNotSpd);
        }
        if gram.clone().cholesky().is_none() {
            return Err(Error::MetricNotSpd);
        }
        Ok(Space {
            dim,
            metric: Metric::Gram(gram),
            orientation,
            form_gram: OnceLock::new(),
            covector_inverse: OnceLock::new(),
        })
    }

    /// Space whose coframe is the coordinate differentials of a chart with
    /// coordinate metric `g` (so the coframe Gram matrix is `g^{-1}`).
    pub fn from_coordinate_metric(g: &DMatrix<T>, orientation: i8) -> Result<Self> {
        let dim = g.nrows();
        let inv = g
            .clone()
            .cholesky()
            .ok_or(Error::MetricNotSpd)?
            .inverse();
        Self::with_gram(dim, inv, orientation)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn is_orthonormal(&self) -> bool {
        matches!(self.metric, Metric::Orthonormal)
    }

    fn covector_gram(&self) -> DMatrix<T> {
        match &self.metric {
            Metric::Orthonormal => DMatrix::identity(self.dim, self.dim),
            Metric::Gram(g) => g.clone(),
        }
    }

    fn covector_gram_inverse(&self) -> &DMatrix<T> {
        self.covector_inverse.get_or_init(|| {
            self.covector_gram()
                .cholesky()
                .expect("metric checked on construction")
                .inverse()
        })
    }

    /// Gram matrix on the full `2^m`-dimensional form space (minor expansion
    /// on equal-cardinality subsets, zero across degrees).
    pub fn form_gram(&self) -> &DMatrix<T> {
        self.form_gram.get_or_init(|| {
            let n = 1usize << self.dim;
            let mut m = DMatrix::zeros(n, n);
            match &self.metric {
                Metric::Orthonormal => {
                    for i in 0..n {
                        m[(i, i)] = T::one();
                    }
                }
                Metric::Gram(g) => {
                    for i in 0..n {
                        for j in 0..n {
                            if (i as u16).count_ones() == (j as u16).count_ones() {
                                m[(i, j)] = subset_minor(g, i as u16, j as u16);
                            }
                        }
                    }
                }
            }
            m
        })
    }

    /// Complex-bilinear extension of the metric pairing on forms.
    pub fn bilinear_inner(&self, a: &Form<T>, b: &Form<T>) -> C<T> {
        let g = self.form_gram();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.norm_sqr() == T::zero() {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                let w = g[(i, j)];
                if w != T::zero() {
                    acc += *ca * *cb * Complex::new(w, T::zero());
                }
            }
        }
        acc
    }

    /// Hermitian inner product (conjugation in the first slot).
    pub fn hermitian_inner(&self, a: &Form<T>, b: &Form<T>) -> C<T> {
        self.bilinear_inner(&a.conj(), b)
    }

    pub fn norm(&self, a: &Form<T>) -> T {
        self.hermitian_inner(a, a).re.max(T::zero()).sqrt()
    }

    /// Coefficient `v` of the volume form `vol = v · e^{1..m}`.
    pub fn volume_coeff(&self) -> T {
        let s = if self.orientation >= 0 { T::one() } else { -T::one() };
        match &self.metric {
            Metric::Orthonormal => s,
            Metric::Gram(g) => {
                let det = g.determinant();
                s / det.sqrt()
            }
        }
    }

    pub fn volume_form(&self) -> Form<T> {
        let full = ((1usize << self.dim) - 1) as u16;
        Form::basis(self.dim, full).scale_re(self.volume_coeff())
    }

    /// Hodge star determined by `α ∧ *β = ⟨α, β⟩ vol` (complex-linear).
    pub fn hodge_star(&self, b: &Form<T>) -> Form<T> {
        let full = ((1usize << self.dim) - 1) as u16;
        let v = self.volume_coeff();
        let g = self.form_gram();
        let mut out = Form::zero(self.dim);
        for j in 0..(1usize << self.dim) {
            // ⟨e^J, b⟩ restricted to the degree of J
            let mut pair = Complex::new(T::zero(), T::zero());
            for (i, cb) in b.coeffs.iter().enumerate() {
                if cb.norm_sqr() == T::zero() {
                    continue;
                }
                let w = g[(j, i)];
                if w != T::zero() {
                    pair += *cb * Complex::new(w, T::zero());
                }
            }
            if pair.norm_sqr() == T::zero() {
                continue;
            }
            let comp = full & !(j as u16);
            let s = wedge_sign(j as u16, comp);
            debug_assert!(s != 0);
            let sign = if s > 0 { T::one() } else { -T::one() };
            out.coeffs[comp as usize] += pair * Complex::new(sign * v, T::zero());
        }
        out
    }

    /// Chirality operator `⋆ω = i^{[(m+1)/2] + 2mr + r(r−1)} *ω` on degree r.
    pub fn chirality(&self, w: &Form<T>) -> Form<T> {
        let m = self.dim;
        let mut out = Form::zero(m);
        for r in 0..=m {
            let comp = w.component(r);
            if comp.is_zero(T::zero()) {
                continue;
            }
            let power = (m + 1) / 2 + 2 * m * r + r * (r.max(1) - 1);
            let starred = self.hodge_star(&comp).scale(i_power::<T>(power));
            out = out.add(&starred);
        }
        out
    }

    /// Raise an index: 1-form coefficients to vector components.
    pub fn sharp(&self, alpha: &Form<T>) -> Result<Vec<C<T>>> {
        if alpha.degree().map(|d| d != 1).unwrap_or(false) {
            return Err(Error::DegreeMismatch("sharp expects a 1-form".into()));
        }
        let g = self.covector_gram();
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.dim];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..self.dim {
                *o += alpha.coeff(1 << j) * Complex::new(g[(i, j)], T::zero());
            }
        }
        Ok(out)
    }

    /// Lower an index: vector components to a 1-form.
    pub fn flat(&self, x: &[C<T>]) -> Result<Form<T>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch("flat".into()));
        }
        let ginv = match &self.metric {
            Metric::Orthonormal => None,
            Metric::Gram(_) => Some(self.covector_gram_inverse()),
        };
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); self.dim];
        match ginv {
            None => coeffs.copy_from_slice(x),
            Some(gi) => {
                for (i, c) in coeffs.iter_mut().enumerate() {
                    for j in 0..self.dim {
                        *c += x[j] * Complex::new(gi[(i, j)], T::zero());
                    }
                }
            }
        }
        Ok(Form::one_form(&coeffs))
    }

    /// Left Clifford multiplication `c(α) = α∧ − ι_{α♯}`.
    pub fn clifford_left(&self, alpha: &Form<T>, w: &Form<T>) -> Result<Form<T>> {
        check_degree_one(alpha)?;
        let x = self.sharp(alpha)?;
        Ok(alpha.wedge(w)?.sub(&w.contract(&x)?))
    }

    /// Right Clifford multiplication `ĉ(α) = α∧ + ι_{α♯}`.
    pub fn clifford_right(&self, alpha: &Form<T>, w: &Form<T>) -> Result<Form<T>> {
        check_degree_one(alpha)?;
        let x = self.sharp(alpha)?;
        Ok(alpha.wedge(w)?.add(&w.contract(&x)?))
    }

    // --- endomorphism builders -------------------------------------------

    pub fn endo_from_fn(&self, mut f: impl FnMut(&Form<T>) -> Form<T>) -> Endo<T> {
        let n = 1usize << self.dim;
        let mut mat = DMatrix::zeros(n, n);
        for j in 0..n {
            let image = f(&Form::basis(self.dim, j as u16));
            for i in 0..n {
                mat[(i, j)] = image.coeffs[i];
            }
        }
        Endo { dim: self.dim, mat }
    }

    pub fn endo_wedge(&self, alpha: &Form<T>) -> Endo<T> {
        self.endo_from_fn(|w| alpha.wedge(w).expect("same space"))
    }

    pub fn endo_contract(&self, x: &[C<T>]) -> Endo<T> {
        self.endo_from_fn(|w| w.contract(x).expect("same space"))
    }

    pub fn endo_clifford_left(&self, alpha: &Form<T>) -> Result<Endo<T>> {
        check_degree_one(alpha)?;
        let x = self.sharp(alpha)?;
        Ok(self.endo_from_fn(|w| {
            alpha
                .wedge(w)
                .expect("same space")
                .sub(&w.contract(&x).expect("same space"))
        }))
    }

    pub fn endo_clifford_right(&self, alpha: &Form<T>) -> Result<Endo<T>> {
        check_degree_one(alpha)?;
        let x = self.sharp(alpha)?;
        Ok(self.endo_from_fn(|w| {
            alpha
                .wedge(w)
                .expect("same space")
                .add(&w.contract(&x).expect("same space"))
        }))
    }

    pub fn endo_epsilon(&self) -> Endo<T> {
        self.endo_from_fn(|w| w.epsilon())
    }

    pub fn endo_hodge(&self) -> Endo<T> {
        self.endo_from_fn(|w| self.hodge_star(w))
    }

    pub fn endo_chirality(&self) -> Endo<T> {
        self.endo_from_fn(|w| self.chirality(w))
    }

    pub fn endo_identity(&self) -> Endo<T> {
        Endo {
            dim: self.dim,
            mat: DMatrix::identity(1 << self.dim, 1 << self.dim),
        }
    }

    /// Adjoint with respect to the induced inner product on forms.
    pub fn adjoint(&self, a: &Endo<T>) -> Endo<T> {
        match &self.metric {
            Metric::Orthonormal => Endo {
                dim: a.dim,
                mat: a.mat.adjoint(),
            },
            Metric::Gram(_) => {
                let g = self.form_gram().map(|x| Complex::new(x, T::zero()));
                let ginv = g.clone().try_inverse().expect("form gram invertible");
                Endo {
                    dim: a.dim,
                    mat: ginv * a.mat.adjoint() * g,
                }
            }
        }
    }
}

fn check_degree_one<T: Real>(alpha: &Form<T>) -> Result<()> {
    match alpha.degree() {
        Some(1) | None => Ok(()),
        Some(d) => Err(Error::DegreeMismatch(format!(
            "Clifford multiplication expects a 1-form, got degree {d}"
        ))),
    }
}

/// `i^k` as a complex scalar.
pub fn i_power<T: Real>(k: usize) -> C<T> {
    match k % 4 {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

fn subset_minor<T: Real>(g: &DMatrix<T>, rows: u16, cols: u16) -> T {
    let r: Vec<usize> = (0..16).filter(|k| rows & (1 << k) != 0).collect();
    let c: Vec<usize> = (0..16).filter(|k| cols & (1 << k) != 0).collect();
    debug_assert_eq!(r.len(), c.len());
    let k = r.len();
    if k == 0 {
        return T::one();
    }
    let mut m = DMatrix::zeros(k, k);
    for (a, &i) in r.iter().enumerate() {
        for (b, &j) in c.iter().enumerate() {
            m[(a, b)] = g[(i, j)];
        }
    }
    m.determinant()
}

/// Concrete endomorphism of the `2^m`-dimensional form space.
#[derive(Clone, Debug)]
pub struct Endo<T: Real> {
    dim: usize,
    mat: DMatrix<C<T>>,
}

impl<T: Real> Endo<T> {
    pub fn from_matrix(dim: usize, mat: DMatrix<C<T>>) -> Self {
        assert_eq!(mat.nrows(), 1 << dim);
        assert_eq!(mat.ncols(), 1 << dim);
        Endo { dim, mat }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C<T>> {
        &self.mat
    }

    pub fn apply(&self, w: &Form<T>) -> Form<T> {
        assert_eq!(w.dim, self.dim);
        let v = nalgebra::DVector::from_column_slice(&w.coeffs);
        let out = &self.mat * v;
        Form {
            dim: self.dim,
            coeffs: out.iter().copied().collect(),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Endo {
            dim: self.dim,
            mat: &self.mat * &other.mat,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Endo {
            dim: self.dim,
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Endo {
            dim: self.dim,
            mat: &self.mat - &other.mat,
        }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Endo {
            dim: self.dim,
            mat: self.mat.map(|x| x * s),
        }
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.compose(other).add(&other.compose(self))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn norm_inf(&self) -> T {
        let mut m = T::zero();
        for x in self.mat.iter() {
            let n = cnorm(x);
            if n > m {
                m = n;
            }
        }
        m
    }

    pub fn is_zero(&self, tol: T) -> bool {
        self.norm_inf() <= tol
    }
}
