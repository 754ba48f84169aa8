//! Kato indices of Fredholm pairs of subspaces in finite dimensions, with
//! the rank computations exposed so the additivity and projection formulas
//! can be verified against brute force.

use crate::{r64, Error, Real, Result, C};
use nalgebra::DMatrix;
use num_complex::Complex;

/// A pair of subspaces of `ℂ^d` given by spanning columns.
#[derive(Clone, Debug)]
pub struct SubspacePair<T: Real> {
    pub ambient: usize,
    pub x: DMatrix<C<T>>,
    pub y: DMatrix<C<T>>,
}

/// Orthonormalize the columns of a spanning set (modified Gram-Schmidt with
/// rank detection).
pub fn orthonormalize<T: Real>(span: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let n = span.nrows();
    let mut basis: Vec<nalgebra::DVector<C<T>>> = Vec::new();
    let tol = r64::<T>(1e-10);
    for j in 0..span.ncols() {
        let mut v = span.column(j).clone_owned();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm > tol {
            basis.push(v / Complex::new(norm, T::zero()));
        }
    }
    let mut out = DMatrix::zeros(n, basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

impl<T: Real> SubspacePair<T> {
    /// Build from spanning sets; the spans are orthonormalized and must have
    /// full column rank.
    pub fn new(x_span: DMatrix<C<T>>, y_span: DMatrix<C<T>>) -> Result<Self> {
        let ambient = x_span.nrows();
        if y_span.nrows() != ambient {
            return Err(Error::DimensionMismatch(
                "subspaces of different ambient spaces".into(),
            ));
        }
        let x = orthonormalize(&x_span);
        let y = orthonormalize(&y_span);
        if x.ncols() != x_span.ncols() || y.ncols() != y_span.ncols() {
            return Err(Error::InvalidInput(
                "spanning set is rank deficient".into(),
            ));
        }
        Ok(SubspacePair { ambient, x, y })
    }
}

/// Numerical rank with a guard band: singular values too close to the
/// cutoff are an error rather than a silent decision.
pub fn rank_with_guard<T: Real>(m: &DMatrix<C<T>>) -> Result<usize> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return Ok(0);
    }
    let svd = m.clone().svd(false, false);
    let smax = svd
        .singular_values
        .iter()
        .cloned()
        .fold(T::zero(), |a, b| a.max(b));
    if smax == T::zero() {
        return Ok(0);
    }
    let cutoff = smax * r64::<T>(1e-8);
    let band_lo = cutoff * r64::<T>(1e-3);
    let band_hi = cutoff * r64::<T>(1e3);
    let mut rank = 0;
    for s in svd.singular_values.iter() {
        if *s > band_lo && *s < band_hi {
            return Err(Error::RankTolerance {
                sv: s.to_f64().unwrap_or(0.0),
                cutoff: cutoff.to_f64().unwrap_or(0.0),
            });
        }
        if *s >= band_hi {
            rank += 1;
        }
    }
    Ok(rank)
}

fn hcat<T: Real>(a: &DMatrix<C<T>>, b: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let n = a.nrows();
    let mut out = DMatrix::zeros(n, a.ncols() + b.ncols());
    out.view_mut((0, 0), (n, a.ncols())).copy_from(a);
    out.view_mut((0, a.ncols()), (n, b.ncols())).copy_from(b);
    out
}

/// Kato index `ind(X, Y) = dim(X∩Y) − codim(X+Y)` by rank computations.
pub fn kato_index<T: Real>(pair: &SubspacePair<T>) -> Result<i64> {
    let dx = pair.x.ncols() as i64;
    let dy = pair.y.ncols() as i64;
    let sum_rank = rank_with_guard(&hcat(&pair.x, &pair.y))? as i64;
    let null = dx + dy - sum_rank;
    let def = pair.ambient as i64 - sum_rank;
    Ok(null - def)
}

/// Orthogonal projection with the given (orthonormalized) range.
pub fn projection_onto<T: Real>(span: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let q = orthonormalize(span);
    &q * q.adjoint()
}

/// Orthonormal basis of the kernel of a projection `P` (range of `I − P`).
pub fn kernel_of_projection<T: Real>(p: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let n = p.nrows();
    let id = DMatrix::identity(n, n);
    orthonormalize(&(id - p))
}

/// Fredholm index of `(I−P): E → ker P` by brute-force ranks:
/// `dim ker − codim ran`.
pub fn fredholm_index_of_complement_map<T: Real>(
    e_span: &DMatrix<C<T>>,
    p: &DMatrix<C<T>>,
) -> Result<i64> {
    let n = p.nrows();
    let e = orthonormalize(e_span);
    let de = e.ncols() as i64;
    let id = DMatrix::identity(n, n);
    let image = (&id - p) * &e;
    let image_rank = rank_with_guard(&image)? as i64;
    // dim ker of the restricted map = dim E − rank((I−P)E)
    let kernel = de - image_rank;
    let ker_p_dim = n as i64 - rank_with_guard(p)? as i64;
    let codim = ker_p_dim - image_rank;
    Ok(kernel - codim)
}

/// Both sides of the additivity formula
/// `ind(E, ran P) = ind(E, ran Q) + ind(ker Q, ran P)` for projections with
/// finite-rank (hence compact) difference.
pub fn additivity_sides<T: Real>(
    e_span: &DMatrix<C<T>>,
    p: &DMatrix<C<T>>,
    q: &DMatrix<C<T>>,
) -> Result<(i64, i64)> {
    let ran_p = orthonormalize(p);
    let ran_q = orthonormalize(q);
    let e = orthonormalize(e_span);
    let ker_q = kernel_of_projection(q);
    let lhs = kato_index(&SubspacePair::new(e.clone(), ran_p.clone())?)?;
    let rhs = kato_index(&SubspacePair::new(e, ran_q)?)?
        + kato_index(&SubspacePair::new(ker_q, ran_p)?)?;
    Ok((lhs, rhs))
}

/// Spectral half-space spans of a diagonal operator, for the worked index
/// example (`<`, `≤`, `>`, `≥` of zero).
pub struct SpectralSpans<T: Real> {
    pub lt: DMatrix<C<T>>,
    pub le: DMatrix<C<T>>,
    pub gt: DMatrix<C<T>>,
    pub ge: DMatrix<C<T>>,
}

pub fn spectral_spans<T: Real>(diag: &[T]) -> SpectralSpans<T> {
    let n = diag.len();
    let pick = |pred: &dyn Fn(T) -> bool| {
        let cols: Vec<usize> = (0..n).filter(|&i| pred(diag[i])).collect();
        let mut m = DMatrix::zeros(n, cols.len());
        for (j, &i) in cols.iter().enumerate() {
            m[(i, j)] = Complex::new(T::one(), T::zero());
        }
        m
    };
    SpectralSpans {
        lt: pick(&|v| v < T::zero()),
        le: pick(&|v| v <= T::zero()),
        gt: pick(&|v| v > T::zero()),
        ge: pick(&|v| v >= T::zero()),
    }
}
