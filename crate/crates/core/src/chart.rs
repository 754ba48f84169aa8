//! Coordinate charts carrying form-valued fields, numerical exterior
//! derivative, metric duality and quadrature of top-degree forms.
//!
//! Fields are stored in the coordinate coframe `dx^1, ..., dx^m`; the metric
//! side (Hodge star, musical isomorphisms, inner products) goes through
//! [`Space`] built from the coordinate metric at each point.

use crate::exterior::{Form, Space};
use crate::expr::Expr;
use crate::quad::{axis_rule, integrate_tensor, AxisRule};
use crate::{r64, Error, Real, Result, C};
use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Deserialize;
use std::sync::Arc;

/// One coordinate of a chart.
#[derive(Clone, Debug)]
pub struct Coord {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
}

type MetricFn<T> = Arc<dyn Fn(&[T]) -> DMatrix<T> + Send + Sync>;
type FieldFn<T> = Arc<dyn Fn(&[T]) -> Form<T> + Send + Sync>;

/// Coordinate chart with a pointwise coordinate metric and an orientation
/// convention for the ordered coframe.
#[derive(Clone)]
pub struct Chart<T: Real> {
    coords: Vec<Coord>,
    metric: MetricFn<T>,
    orientation: i8,
}

impl<T: Real> Chart<T> {
    pub fn new(
        coords: Vec<Coord>,
        metric: impl Fn(&[T]) -> DMatrix<T> + Send + Sync + 'static,
        orientation: i8,
    ) -> Self {
        assert!(orientation == 1 || orientation == -1);
        for c in &coords {
            assert!(c.hi > c.lo, "degenerate interval for coordinate {}", c.name);
        }
        Chart {
            coords,
            metric: Arc::new(metric),
            orientation,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn metric_at(&self, x: &[T]) -> DMatrix<T> {
        (self.metric)(x)
    }

    /// Exterior-algebra space at a point: coframe Gram matrix is the inverse
    /// coordinate metric.
    pub fn space_at(&self, x: &[T]) -> Space<T> {
        let g = self.metric_at(x);
        if is_identity(&g) {
            Space::euclidean(self.dim()).with_orientation(self.orientation)
        } else {
            Space::from_coordinate_metric(&g, self.orientation)
                .expect("chart metric must be SPD on its domain")
        }
    }

    /// Check a point against the chart domain (periodic directions are
    /// unrestricted).
    pub fn check_point(&self, x: &[T]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point of dimension {} on chart of dimension {}",
                x.len(),
                self.dim()
            )));
        }
        for (c, &v) in self.coords.iter().zip(x) {
            if !c.periodic {
                let vf = v.to_f64().unwrap_or(f64::NAN);
                if !(vf > c.lo && vf < c.hi) {
                    return Err(Error::OutsideChart {
                        coord: c.name.clone(),
                        value: vf,
                    });
                }
            }
        }
        Ok(())
    }

    /// Default differentiation step per coordinate: 1e-4 of the range.
    pub fn default_step(&self, axis: usize) -> T {
        r64::<T>(1e-4) * r64::<T>(self.coords[axis].hi - self.coords[axis].lo)
    }

    /// Musical isomorphism: raise the index of a 1-form.
    pub fn sharp(&self, x: &[T], alpha: &Form<T>) -> Result<Vec<C<T>>> {
        self.space_at(x).sharp(alpha)
    }

    /// Musical isomorphism: lower the index of a vector.
    pub fn flat(&self, x: &[T], v: &[C<T>]) -> Result<Form<T>> {
        self.space_at(x).flat(v)
    }
}

fn is_identity<T: Real>(g: &DMatrix<T>) -> bool {
    let n = g.nrows();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { T::one() } else { T::zero() };
            if (g[(i, j)] - want).abs() > r64::<T>(1e-15) {
                return false;
            }
        }
    }
    true
}

/// Form-valued field on a chart, of constant degree when constructed from a
/// single source; operator images may be degree-mixed.
#[derive(Clone)]
pub struct FormField<T: Real> {
    chart: Chart<T>,
    degree: Option<usize>,
    eval: FieldFn<T>,
    /// Optional analytic exterior derivative.
    dee: Option<FieldFn<T>>,
}

impl<T: Real> FormField<T> {
    pub fn new(
        chart: Chart<T>,
        degree: usize,
        eval: impl Fn(&[T]) -> Form<T> + Send + Sync + 'static,
    ) -> Self {
        FormField {
            chart,
            degree: Some(degree),
            eval: Arc::new(eval),
            dee: None,
        }
    }

    pub fn new_mixed(chart: Chart<T>, eval: impl Fn(&[T]) -> Form<T> + Send + Sync + 'static) -> Self {
        FormField {
            chart,
            degree: None,
            eval: Arc::new(eval),
            dee: None,
        }
    }

    pub fn with_analytic_derivative(
        mut self,
        dee: impl Fn(&[T]) -> Form<T> + Send + Sync + 'static,
    ) -> Self {
        self.dee = Some(Arc::new(dee));
        self
    }

    pub fn scalar_field(
        chart: Chart<T>,
        f: impl Fn(&[T]) -> T + Send + Sync + 'static,
    ) -> Self {
        let dim = chart.dim();
        FormField::new(chart, 0, move |x| {
            Form::scalar(dim, Complex::new(f(x), T::zero()))
        })
    }

    pub fn constant(chart: Chart<T>, value: Form<T>) -> Self {
        let deg = value.degree().unwrap_or(0);
        let chart2 = chart.clone();
        let dim = chart.dim();
        FormField {
            chart,
            degree: Some(deg),
            eval: Arc::new(move |_x: &[T]| value.clone()),
            dee: Some(Arc::new(move |_x: &[T]| Form::zero(dim))),
        }
        .with_chart(chart2)
    }

    fn with_chart(mut self, chart: Chart<T>) -> Self {
        self.chart = chart;
        self
    }

    pub fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn eval(&self, x: &[T]) -> Form<T> {
        (self.eval)(x)
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.dee.is_some()
    }

    /// Exterior derivative at a point. Falls back to the analytic derivative
    /// when supplied; otherwise 4th-order central differences with one
    /// Richardson extrapolation level on every coefficient.
    pub fn exterior_derivative(&self, x: &[T], step: Option<T>) -> Result<Form<T>> {
        if let Some(d) = &self.dee {
            return Ok(d(x));
        }
        self.numerical_derivative(x, step)
    }

    pub fn numerical_derivative(&self, x: &[T], step: Option<T>) -> Result<Form<T>> {
        self.chart.check_point(x)?;
        let dim = self.chart.dim();
        let mut out = Form::zero(dim);
        for axis in 0..dim {
            let h = step.unwrap_or_else(|| self.chart.default_step(axis));
            if h <= T::zero() || !(x[axis] + h > x[axis]) {
                return Err(Error::StepUnderflow);
            }
            let partial = self.partial_richardson(x, axis, h)?;
            let dxj = Form::basis(dim, 1 << axis);
            out = out.add(&dxj.wedge(&partial)?);
        }
        Ok(out)
    }

    /// Richardson-extrapolated 4th-order central difference along one axis.
    fn partial_richardson(&self, x: &[T], axis: usize, h: T) -> Result<Form<T>> {
        let coarse = self.partial_fourth_order(x, axis, h)?;
        let fine = self.partial_fourth_order(x, axis, h / r64::<T>(2.0))?;
        // (16 D(h/2) - D(h)) / 15
        Ok(fine
            .scale_re(r64::<T>(16.0))
            .sub(&coarse)
            .scale_re(T::one() / r64::<T>(15.0)))
    }

    fn partial_fourth_order(&self, x: &[T], axis: usize, h: T) -> Result<Form<T>> {
        let dim = self.chart.dim();
        let sample = |offset: T| -> Result<Form<T>> {
            let mut y = x.to_vec();
            y[axis] += offset;
            self.chart.check_point(&y)?;
            Ok((self.eval)(&y))
        };
        let two = r64::<T>(2.0);
        let f_p2 = sample(two * h)?;
        let f_p1 = sample(h)?;
        let f_m1 = sample(-h)?;
        let f_m2 = sample(-two * h)?;
        let mut out = Form::zero(dim);
        out = out.add(&f_p2.scale_re(-T::one()));
        out = out.add(&f_p1.scale_re(r64::<T>(8.0)));
        out = out.add(&f_m1.scale_re(r64::<T>(-8.0)));
        out = out.add(&f_m2);
        Ok(out.scale_re(T::one() / (r64::<T>(12.0) * h)))
    }

    // --- lazy field combinators ------------------------------------------

    pub fn add_field(&self, other: &FormField<T>) -> FormField<T> {
        let a = self.eval.clone();
        let b = other.eval.clone();
        let degree = if self.degree == other.degree {
            self.degree
        } else {
            None
        };
        let dee = match (&self.dee, &other.dee) {
            (Some(da), Some(db)) => {
                let da = da.clone();
                let db = db.clone();
                Some(Arc::new(move |x: &[T]| da(x).add(&db(x))) as FieldFn<T>)
            }
            _ => None,
        };
        FormField {
            chart: self.chart.clone(),
            degree,
            eval: Arc::new(move |x: &[T]| a(x).add(&b(x))),
            dee,
        }
    }

    pub fn scale_field(&self, s: C<T>) -> FormField<T> {
        let a = self.eval.clone();
        let dee = self.dee.as_ref().map(|d| {
            let d = d.clone();
            Arc::new(move |x: &[T]| d(x).scale(s)) as FieldFn<T>
        });
        FormField {
            chart: self.chart.clone(),
            degree: self.degree,
            eval: Arc::new(move |x: &[T]| a(x).scale(s)),
            dee,
        }
    }

    pub fn wedge_field(&self, other: &FormField<T>) -> FormField<T> {
        let a = self.eval.clone();
        let b = other.eval.clone();
        let degree = match (self.degree, other.degree) {
            (Some(p), Some(q)) => Some(p + q),
            _ => None,
        };
        FormField {
            chart: self.chart.clone(),
            degree,
            eval: Arc::new(move |x: &[T]| a(x).wedge(&b(x)).expect("same chart")),
            dee: None,
        }
    }

    /// Pointwise Hodge star of the field.
    pub fn star_field(&self) -> FormField<T> {
        let a = self.eval.clone();
        let chart = self.chart.clone();
        let chart2 = chart.clone();
        let degree = self.degree.and_then(|d| chart.dim().checked_sub(d));
        FormField {
            chart,
            degree,
            eval: Arc::new(move |x: &[T]| chart2.space_at(x).hodge_star(&a(x))),
            dee: None,
        }
    }

    /// Pointwise chirality of the field.
    pub fn chirality_field(&self) -> FormField<T> {
        let a = self.eval.clone();
        let chart = self.chart.clone();
        let chart2 = chart.clone();
        let degree = self.degree.and_then(|d| chart.dim().checked_sub(d));
        FormField {
            chart,
            degree,
            eval: Arc::new(move |x: &[T]| chart2.space_at(x).chirality(&a(x))),
            dee: None,
        }
    }

    /// Multiply pointwise by a scalar function.
    pub fn mul_scalar(&self, f: impl Fn(&[T]) -> T + Send + Sync + 'static) -> FormField<T> {
        let a = self.eval.clone();
        FormField {
            chart: self.chart.clone(),
            degree: self.degree,
            eval: Arc::new(move |x: &[T]| a(x).scale_re(f(x))),
            dee: None,
        }
    }

    pub fn epsilon_field(&self) -> FormField<T> {
        let a = self.eval.clone();
        FormField {
            chart: self.chart.clone(),
            degree: self.degree,
            eval: Arc::new(move |x: &[T]| a(x).epsilon()),
            dee: None,
        }
    }

    /// Lazy exterior derivative as a field.
    pub fn d_field(&self, step: Option<T>) -> FormField<T> {
        let me = self.clone();
        let degree = self.degree.map(|d| d + 1);
        FormField {
            chart: self.chart.clone(),
            degree,
            eval: Arc::new(move |x: &[T]| {
                me.exterior_derivative(x, step)
                    .expect("derivative evaluation inside chart")
            }),
            dee: None,
        }
    }

    /// Codifferential `d† = (−1)^{m(r+1)+1} * d *`, applied per degree
    /// component so operator images of mixed degree are handled.
    pub fn codifferential(&self, x: &[T], step: Option<T>) -> Result<Form<T>> {
        let m = self.chart.dim();
        let mut out = Form::zero(m);
        let degrees: Vec<usize> = match self.degree {
            Some(d) => vec![d],
            None => (0..=m).collect(),
        };
        for r in degrees {
            if r == 0 {
                continue;
            }
            let me = self.clone();
            let chart = self.chart.clone();
            let starred = FormField {
                chart: self.chart.clone(),
                degree: Some(m - r),
                eval: Arc::new(move |y: &[T]| {
                    chart.space_at(y).hodge_star(&me.eval(y).component(r))
                }),
                dee: None,
            };
            let d_star = starred.numerical_derivative(x, step)?;
            let star_d_star = self.chart.space_at(x).hodge_star(&d_star);
            let sign = if (m * (r + 1) + 1) % 2 == 0 {
                T::one()
            } else {
                -T::one()
            };
            out = out.add(&star_d_star.scale_re(sign));
        }
        Ok(out)
    }

    /// Integrate a top-degree field over the chart with per-axis node counts;
    /// returns the value together with a grid-refinement error estimate.
    pub fn integrate(&self, grid: &[usize]) -> Result<(T, T)> {
        let m = self.chart.dim();
        if self.degree != Some(m) {
            return Err(Error::DegreeMismatch(format!(
                "integration needs a top-degree ({m}) field"
            )));
        }
        if grid.len() != m {
            return Err(Error::DimensionMismatch(
                "grid length must match chart dimension".into(),
            ));
        }
        let value = self.integrate_on(grid)?;
        let coarse_grid: Vec<usize> = grid.iter().map(|&n| (n / 2).max(2)).collect();
        let coarse = self.integrate_on(&coarse_grid)?;
        Ok((value, (value - coarse).abs()))
    }

    fn integrate_on(&self, grid: &[usize]) -> Result<(T)> {
        let m = self.chart.dim();
        let full = ((1usize << m) - 1) as u16;
        let axes: Vec<AxisRule<T>> = self
            .chart
            .coords
            .iter()
            .zip(grid)
            .map(|(c, &n)| axis_rule(r64::<T>(c.lo), r64::<T>(c.hi), n, c.periodic))
            .collect();
        let eval = self.eval.clone();
        let or = if self.chart.orientation >= 0 {
            T::one()
        } else {
            -T::one()
        };
        let value = integrate_tensor(&axes, move |x: &[T]| {
            let f = eval(x).coeff(full);
            debug_assert!(f.im.abs() <= r64::<T>(1e-9) * (T::one() + f.re.abs()));
            f.re
        });
        Ok(or * value)
    }
}

// --- declarative chart files ----------------------------------------------

#[derive(Deserialize)]
struct ChartFile {
    #[allow(dead_code)]
    name: Option<String>,
    orientation: Option<i8>,
    #[serde(default)]
    params: std::collections::BTreeMap<String, f64>,
    coords: Vec<CoordFile>,
    metric: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct CoordFile {
    name: String,
    range: [f64; 2],
    #[serde(default)]
    periodic: bool,
}

/// Parse a chart from its declarative TOML description: coordinate names and
/// ranges, and metric entries as expression strings over coordinates and
/// parameters.
pub fn chart_from_toml<T: Real>(text: &str) -> Result<Chart<T>> {
    let file: ChartFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let dim = file.coords.len();
    if file.metric.len() != dim || file.metric.iter().any(|row| row.len() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "metric must be a {dim}x{dim} matrix of expressions"
        )));
    }
    let mut vars: Vec<String> = file.coords.iter().map(|c| c.name.clone()).collect();
    let mut param_values: Vec<f64> = Vec::new();
    for (k, v) in &file.params {
        vars.push(k.clone());
        param_values.push(*v);
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for row in &file.metric {
        for e in row {
            entries.push(Expr::parse(e, &vars)?);
        }
    }
    let coords: Vec<Coord> = file
        .coords
        .iter()
        .map(|c| Coord {
            name: c.name.clone(),
            lo: c.range[0],
            hi: c.range[1],
            periodic: c.periodic,
        })
        .collect();
    let params_t: Vec<T> = param_values.iter().map(|&v| r64(v)).collect();
    let metric = move |x: &[T]| {
        let mut values: Vec<T> = x.to_vec();
        values.extend_from_slice(&params_t);
        DMatrix::from_fn(dim, dim, |i, j| entries[i * dim + j].eval(&values))
    };
    Ok(Chart::new(coords, metric, file.orientation.unwrap_or(1)))
}
