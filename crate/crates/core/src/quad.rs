//! One-dimensional quadrature rules and tensor-product grids.
//!
//! Periodic directions use the trapezoid rule (spectrally accurate for
//! smooth periodic integrands), open intervals use Gauss-Legendre.

use crate::{r64, Real};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    for k in 0..n {
        // Chebyshev-based initial guess
        let theta = r64::<T>(std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5));
        let mut x = theta.cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= r64::<T>(1e-16) * (T::one() + x.abs()) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[k] = x;
        weights[k] = r64::<T>(2.0) / ((T::one() - x * x) * dp * dp);
    }
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (nodes, weights)
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let kf = r64::<T>(k as f64);
        let p2 = ((r64::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = r64::<T>(n as f64) * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// Nodes and weights for one axis.
#[derive(Clone, Debug)]
pub struct AxisRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

/// Quadrature rule on `[lo, hi]`; trapezoid when `periodic`.
pub fn axis_rule<T: Real>(lo: T, hi: T, n: usize, periodic: bool) -> AxisRule<T> {
    let len = hi - lo;
    if periodic {
        let h = len / r64::<T>(n as f64);
        let nodes = (0..n).map(|i| lo + h * r64::<T>(i as f64)).collect();
        let weights = vec![h; n];
        AxisRule { nodes, weights }
    } else {
        let (xs, ws) = gauss_legendre::<T>(n);
        let half = len / r64::<T>(2.0);
        let mid = (lo + hi) / r64::<T>(2.0);
        let nodes = xs.iter().map(|&x| mid + half * x).collect();
        let weights = ws.iter().map(|&w| w * half).collect();
        AxisRule { nodes, weights }
    }
}

/// Integrate a function over a tensor-product grid; axes given as rules.
pub fn integrate_tensor<T: Real, F>(axes: &[AxisRule<T>], f: F) -> T
where
    F: Fn(&[T]) -> T + Sync,
    T: Send,
{
    use rayon::prelude::*;
    let dims: Vec<usize> = axes.iter().map(|a| a.nodes.len()).collect();
    let total: usize = dims.iter().product();
    (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut idx = flat;
            let mut x = Vec::with_capacity(axes.len());
            let mut w = T::one();
            for (d, axis) in axes.iter().enumerate() {
                let i = idx % dims[d];
                idx /= dims[d];
                x.push(axis.nodes[i]);
                w *= axis.weights[i];
            }
            f(&x) * w
        })
        .reduce(|| T::zero(), |a, b| a + b)
}

/// Composite Gauss-Legendre integration of a scalar function on `[a, b]`
/// split into `cells` equal cells with `pts` nodes per cell.
pub fn integrate_cells<T: Real>(a: T, b: T, cells: usize, pts: usize, f: impl Fn(T) -> T) -> T {
    let (xs, ws) = gauss_legendre::<T>(pts);
    let h = (b - a) / r64::<T>(cells as f64);
    let mut acc = T::zero();
    for c in 0..cells {
        let lo = a + h * r64::<T>(c as f64);
        let mid = lo + h / r64::<T>(2.0);
        let half = h / r64::<T>(2.0);
        for (x, w) in xs.iter().zip(&ws) {
            acc += f(mid + half * *x) * *w * half;
        }
    }
    acc
}
