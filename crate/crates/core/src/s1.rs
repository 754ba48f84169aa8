//! Geometry of a semi-free circle action: the unit generating field, its
//! characteristic 1-form, mean curvature, the horizontal 2-form of
//! Rummler's formula, and the orbit-volume function, together with the
//! identity checks tying them together.

use crate::chart::{Chart, Coord, FormField};
use crate::exterior::Form;
use crate::quad::integrate_cells;
use crate::{r64, Error, Real, Result, C};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

type VectorFn<T> = Arc<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;
type ScalarFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

/// Evaluation guard below which a point counts as lying on the fixed-point
/// locus.
pub const FIXED_POINT_GUARD: f64 = 1e-6;

/// Chart together with the generating vector field of the circle action and
/// the derived geometric quantities.
#[derive(Clone)]
pub struct S1Geometry<T: Real> {
    chart: Chart<T>,
    v: VectorFn<T>,
    /// Analytic overrides registered for the worked examples.
    chi_analytic: Option<FormField<T>>,
    kappa_analytic: Option<FormField<T>>,
    phi0_analytic: Option<FormField<T>>,
    h_analytic: Option<ScalarFn<T>>,
    guard: T,
}

impl<T: Real> S1Geometry<T> {
    pub fn new(chart: Chart<T>, v: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static) -> Self {
        S1Geometry {
            chart,
            v: Arc::new(v),
            chi_analytic: None,
            kappa_analytic: None,
            phi0_analytic: None,
            h_analytic: None,
            guard: r64(FIXED_POINT_GUARD),
        }
    }

    pub fn with_chi(mut self, chi: FormField<T>) -> Self {
        self.chi_analytic = Some(chi);
        self
    }

    pub fn with_kappa(mut self, kappa: FormField<T>) -> Self {
        self.kappa_analytic = Some(kappa);
        self
    }

    pub fn with_phi0(mut self, phi0: FormField<T>) -> Self {
        self.phi0_analytic = Some(phi0);
        self
    }

    pub fn with_orbit_volume(mut self, h: impl Fn(&[T]) -> T + Send + Sync + 'static) -> Self {
        self.h_analytic = Some(Arc::new(h));
        self
    }

    pub fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    pub fn generating_field(&self, x: &[T]) -> Vec<T> {
        (self.v)(x)
    }

    /// `‖V‖` with the fixed-point guard: evaluation at `‖V‖ ≤ ε` is an
    /// error, not a NaN.
    pub fn norm_v(&self, x: &[T]) -> Result<T> {
        let v = (self.v)(x);
        let g = self.chart.metric_at(x);
        let vv = DVector::from_vec(v);
        let n2 = (&g * &vv).dot(&vv);
        let n = n2.max(T::zero()).sqrt();
        if n <= self.guard {
            return Err(Error::FixedPointGuard {
                norm: n.to_f64().unwrap_or(0.0),
                guard: self.guard.to_f64().unwrap_or(0.0),
            });
        }
        Ok(n)
    }

    /// Unit field `X = V/‖V‖` (coordinate components).
    pub fn unit_field(&self, x: &[T]) -> Result<Vec<T>> {
        let n = self.norm_v(x)?;
        Ok((self.v)(x).into_iter().map(|c| c / n).collect())
    }

    /// Characteristic form `χ = X♭` at a point.
    pub fn chi(&self, x: &[T]) -> Result<Form<T>> {
        if let Some(f) = &self.chi_analytic {
            return Ok(f.eval(x));
        }
        let xfield = self.unit_field(x)?;
        let xc: Vec<C<T>> = xfield
            .into_iter()
            .map(|c| Complex::new(c, T::zero()))
            .collect();
        self.chart.flat(x, &xc)
    }

    pub fn chi_field(&self) -> FormField<T> {
        if let Some(f) = &self.chi_analytic {
            return f.clone();
        }
        let me = self.clone();
        FormField::new(self.chart.clone(), 1, move |x| {
            me.chi(x).expect("chi evaluation away from fixed points")
        })
    }

    /// Mean curvature 1-form `κ = −d log ‖V‖`; `dκ = 0` within tolerance.
    pub fn kappa(&self, x: &[T]) -> Result<Form<T>> {
        if let Some(f) = &self.kappa_analytic {
            return Ok(f.eval(x));
        }
        self.norm_v(x)?;
        let me = self.clone();
        let log_norm = FormField::scalar_field(self.chart.clone(), move |y| {
            me.norm_v(y).map(|n| n.ln()).unwrap_or_else(|_| T::zero())
        });
        Ok(log_norm
            .numerical_derivative(x, None)?
            .scale_re(-T::one()))
    }

    pub fn kappa_field(&self) -> FormField<T> {
        if let Some(f) = &self.kappa_analytic {
            return f.clone();
        }
        let me = self.clone();
        FormField::new(self.chart.clone(), 1, move |x| {
            me.kappa(x).expect("kappa evaluation away from fixed points")
        })
    }

    /// Second route to the mean curvature: `κ = ι_X dχ`.
    pub fn kappa_via_dchi(&self, x: &[T]) -> Result<Form<T>> {
        let dchi = self.chi_field().exterior_derivative(x, None)?;
        let xf = self.unit_field(x)?;
        dchi.contract_re(&xf)
    }

    /// Horizontal curvature 2-form from Rummler's formula `φ₀ = dχ + κ∧χ`.
    pub fn phi0(&self, x: &[T]) -> Result<Form<T>> {
        if let Some(f) = &self.phi0_analytic {
            return Ok(f.eval(x));
        }
        let dchi = self.chi_field().exterior_derivative(x, None)?;
        let wedge = self.kappa(x)?.wedge(&self.chi(x)?)?;
        Ok(dchi.add(&wedge))
    }

    pub fn phi0_field(&self) -> FormField<T> {
        if let Some(f) = &self.phi0_analytic {
            return f.clone();
        }
        let me = self.clone();
        FormField::new(self.chart.clone(), 2, move |x| {
            me.phi0(x).expect("phi0 evaluation away from fixed points")
        })
    }

    /// Orbit-volume function `h = ∫_orbit χ`; equals `2π ‖V‖` because the
    /// norm is constant along an orbit.
    pub fn orbit_volume(&self, x: &[T]) -> Result<T> {
        if let Some(f) = &self.h_analytic {
            return Ok(f(x));
        }
        Ok(r64::<T>(TAU) * self.norm_v(x)?)
    }

    /// Quadrature oracle for the orbit volume: integrates `χ(V)` along the
    /// orbit through `x` (the generating field must have constant
    /// coordinate components, which holds for all registered examples).
    pub fn orbit_volume_by_quadrature(&self, x: &[T], cells: usize) -> Result<T> {
        let v = (self.v)(x);
        let me = self.clone();
        let x0 = x.to_vec();
        Ok(integrate_cells(T::zero(), r64::<T>(TAU), cells, 6, move |t| {
            let y: Vec<T> = x0.iter().zip(&v).map(|(&a, &b)| a + t * b).collect();
            let chi = me.chi(&y).expect("orbit stays away from fixed points");
            let vc: Vec<C<T>> = v.iter().map(|&c| Complex::new(c, T::zero())).collect();
            chi.contract(&vc)
                .expect("contraction")
                .coeff(0)
                .re
        }))
    }

    /// Random interior sample points, kept away from chart ends and from the
    /// fixed-point guard.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<T>> {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0;
        while out.len() < count && attempts < 100 * count {
            attempts += 1;
            let x: Vec<T> = self
                .chart
                .coords()
                .iter()
                .map(|c| {
                    let margin = if c.periodic { 0.0 } else { 0.06 * (c.hi - c.lo) };
                    r64(rng.gen_range((c.lo + margin)..(c.hi - margin)))
                })
                .collect();
            if self.norm_v(&x).is_ok() {
                out.push(x);
            }
        }
        out
    }
}

/// Maximum residuals of the structural identities over a set of samples.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub samples: usize,
    pub chi_of_x: f64,
    pub chi_norm: f64,
    pub iota_x_kappa: f64,
    pub d_kappa: f64,
    pub iota_x_phi0: f64,
    pub lie_v_phi0: f64,
    pub d_phi0_plus_kappa_phi0: f64,
    pub dh_plus_h_kappa: f64,
    pub kappa_route_difference: f64,
    pub tolerance: f64,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.chi_of_x,
            self.chi_norm,
            self.iota_x_kappa,
            self.d_kappa,
            self.iota_x_phi0,
            self.lie_v_phi0,
            self.d_phi0_plus_kappa_phi0,
            self.dh_plus_h_kappa,
            self.kappa_route_difference,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.max_residual() < self.tolerance
    }
}

/// Evaluate all identities at the given samples and report per-identity
/// maximum residuals.
pub fn verify_identities<T: Real>(
    geom: &S1Geometry<T>,
    samples: &[Vec<T>],
    tolerance: f64,
) -> Result<IdentityReport> {
    let mut rep = IdentityReport {
        samples: samples.len(),
        chi_of_x: 0.0,
        chi_norm: 0.0,
        iota_x_kappa: 0.0,
        d_kappa: 0.0,
        iota_x_phi0: 0.0,
        lie_v_phi0: 0.0,
        d_phi0_plus_kappa_phi0: 0.0,
        dh_plus_h_kappa: 0.0,
        kappa_route_difference: 0.0,
    tolerance,
    };
    let kappa_field = geom.kappa_field();
    let phi0_field = geom.phi0_field();
    let me = geom.clone();
    let h_field = FormField::scalar_field(geom.chart().clone(), move |x| {
        me.orbit_volume(x).unwrap_or_else(|_| T::zero())
    });
    for x in samples {
        let sp = geom.chart().space_at(x);
        let chi = geom.chi(x)?;
        let xf = geom.unit_field(x)?;
        let kappa = geom.kappa(x)?;
        let phi0 = geom.phi0(x)?;
        let upd = |acc: &mut f64, v: f64| {
            if v > *acc {
                *acc = v;
            }
        };
        // χ(X) = 1 and ‖χ‖ = 1
        let chi_x = chi.contract_re(&xf)?.coeff(0).re;
        upd(&mut rep.chi_of_x, (chi_x - T::one()).abs().to_f64().unwrap());
        upd(
            &mut rep.chi_norm,
            (sp.norm(&chi) - T::one()).abs().to_f64().unwrap(),
        );
        // ι_X κ = 0
        upd(
            &mut rep.iota_x_kappa,
            kappa.contract_re(&xf)?.norm_inf().to_f64().unwrap(),
        );
        // dκ = 0
        let dk = kappa_field.exterior_derivative(x, None)?;
        upd(&mut rep.d_kappa, dk.norm_inf().to_f64().unwrap());
        // ι_X φ₀ = 0
        upd(
            &mut rep.iota_x_phi0,
            phi0.contract_re(&xf)?.norm_inf().to_f64().unwrap(),
        );
        // L_V φ₀ = ι_V dφ₀ (since ι_V φ₀ = 0)
        let dphi0 = phi0_field.exterior_derivative(x, None)?;
        let v = geom.generating_field(x);
        upd(
            &mut rep.lie_v_phi0,
            dphi0.contract_re(&v)?.norm_inf().to_f64().unwrap(),
        );
        // dφ₀ + κ∧φ₀ = 0
        let res = dphi0.add(&kappa.wedge(&phi0)?);
        upd(
            &mut rep.d_phi0_plus_kappa_phi0,
            res.norm_inf().to_f64().unwrap(),
        );
        // dh + hκ = 0
        let dh = h_field.numerical_derivative(x, None)?;
        let h = geom.orbit_volume(x)?;
        let res = dh.add(&kappa.scale_re(h));
        upd(&mut rep.dh_plus_h_kappa, res.norm_inf().to_f64().unwrap());
        // κ route agreement
        let k2 = geom.kappa_via_dchi(x)?;
        upd(
            &mut rep.kappa_route_difference,
            kappa.sub(&k2).norm_inf().to_f64().unwrap(),
        );
    }
    Ok(rep)
}

// --- example registry -------------------------------------------------------

/// Quotient-side data of a registered example: the quotient chart with the
/// submersion metric and the pushed-down `κ̄`, `φ̄₀` and `h`.
#[derive(Clone)]
pub struct QuotientGeometry<T: Real> {
    pub chart: Chart<T>,
    pub kappa: FormField<T>,
    pub phi0: FormField<T>,
    pub orbit_volume: ScalarFn<T>,
}

impl<T: Real> QuotientGeometry<T> {
    pub fn dim(&self) -> usize {
        self.chart.dim()
    }
}

/// A registered worked example: total-space geometry plus its declared
/// quotient.
#[derive(Clone)]
pub struct Example<T: Real> {
    pub name: &'static str,
    pub total: S1Geometry<T>,
    pub quotient: QuotientGeometry<T>,
}

pub const EXAMPLE_NAMES: [&str; 6] = [
    "torus",
    "plane",
    "sphere",
    "hopf",
    "s5_codim4",
    "s5_codim2",
];

/// Built-in examples with the standard parameters (torus has R=2, r=1).
pub fn example<T: Real>(name: &str) -> Result<Example<T>> {
    match name {
        "torus" => Ok(torus(2.0, 1.0)),
        "plane" => Ok(plane()),
        "sphere" => Ok(sphere()),
        "hopf" => Ok(hopf()),
        "s5_codim4" => Ok(s5_codim4()),
        "s5_codim2" => Ok(s5_codim2()),
        other => Err(Error::UnknownName(other.into())),
    }
}

fn coord(name: &str, lo: f64, hi: f64, periodic: bool) -> Coord {
    Coord {
        name: name.into(),
        lo,
        hi,
        periodic,
    }
}

fn diag<T: Real>(entries: Vec<T>) -> DMatrix<T> {
    DMatrix::from_diagonal(&DVector::from_vec(entries))
}

fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// Embedded 2-torus of radii `R > r`, rotated about its symmetry axis.
pub fn torus<T: Real>(big_r: f64, small_r: f64) -> Example<T> {
    let (rr, sr) = (r64::<T>(big_r), r64::<T>(small_r));
    let chart = Chart::new(
        vec![coord("u", 0.0, TAU, true), coord("v", 0.0, TAU, true)],
        move |x: &[T]| {
            let w = rr + sr * x[0].cos();
            diag(vec![sr * sr, w * w])
        },
        1,
    );
    let chi = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(2, 0b10).scale(re(rr + sr * x[0].cos()))
    })
    .with_analytic_derivative(move |x: &[T]| {
        // dχ = -r sin u du∧dv
        Form::basis(2, 0b11).scale(re(-sr * x[0].sin()))
    });
    let kappa = FormField::new(chart.clone(), 1, move |x: &[T]| {
        Form::basis(2, 0b01).scale(re(sr * x[0].sin() / (rr + sr * x[0].cos())))
    });
    let phi0 = FormField::constant(chart.clone(), Form::zero(2));
    let total = S1Geometry::new(chart, |_x: &[T]| vec![T::zero(), T::one()])
        .with_chi(chi)
        .with_kappa(kappa)
        .with_phi0(phi0)
        .with_orbit_volume(move |x: &[T]| r64::<T>(TAU) * (rr + sr * x[0].cos()));
    // quotient: circle of radius r in the u coordinate
    let qchart = Chart::new(
        vec![coord("u", 0.0, TAU, true)],
        move |_x: &[T]| diag(vec![sr * sr]),
        1,
    );
    let qkappa = FormField::new(qchart.clone(), 1, move |x: &[T]| {
        Form::basis(1, 0b1).scale(re(sr * x[0].sin() / (rr + sr * x[0].cos())))
    });
    let qphi0 = FormField::constant(qchart.clone(), Form::zero(1));
    Example {
        name: "torus",
        total,
        quotient: QuotientGeometry {
            chart: qchart,
            kappa: qkappa,
            phi0: qphi0,
            orbit_volume: Arc::new(move |x: &[T]| r64::<T>(TAU) * (rr + sr * x[0].cos())),
        },
    }
}

/// Euclidean plane in polar coordinates, rotated about the origin.
pub fn plane<T: Real>() -> Example<T> {
    let r_max = 6.0;
    let chart = Chart::new(
        vec![coord("r", 0.0, r_max, false), coord("theta", 0.0, TAU, true)],
        |x: &[T]| diag(vec![T::one(), x[0] * x[0]]),
        1,
    );
    let chi = FormField::new(chart.clone(), 1, |x: &[T]| {
        Form::basis(2, 0b10).scale(re(x[0]))
    })
    .with_analytic_derivative(|_x: &[T]| Form::basis(2, 0b11));
    let kappa = FormField::new(chart.clone(), 1, |x: &[T]| {
        Form::basis(2, 0b01).scale(re(-T::one() / x[0]))
    });
    let phi0 = FormField::constant(chart.clone(), Form::zero(2));
    let total = S1Geometry::new(chart, |_x: &[T]| vec![T::zero(), T::one()])
        .with_chi(chi)
        .with_kappa(kappa)
        .with_phi0(phi0)
        .with_orbit_volume(|x: &[T]| r64::<T>(TAU) * x[0]);
    let qchart = Chart::new(
        vec![coord("r", 0.0, r_max, false)],
        |_x: &[T]| DMatrix::identity(1, 1),
        1,
    );
    let qkappa = FormField::new(qchart.clone(), 1, |x: &[T]| {
        Form::basis(1, 0b1).scale(re(-T::one() / x[0]))
    });
    let qphi0 = FormField::constant(qchart.clone(), Form::zero(1));
    Example {
        name: "plane",
        total,
        quotient: QuotientGeometry {
            chart: qchart,
            kappa: qkappa,
            phi0: qphi0,
            orbit_volume: Arc::new(|x: &[T]| r64::<T>(TAU) * x[0]),
        },
    }
}

/// Round unit 2-sphere rotated about the polar axis.
pub fn sphere<T: Real>() -> Example<T> {
    let chart = Chart::new(
        vec![coord("theta", 0.0, PI, false), coord("phi", 0.0, TAU, true)],
        |x: &[T]| diag(vec![T::one(), x[0].sin() * x[0].sin()]),
        1,
    );
    let chi = FormField::new(chart.clone(), 1, |x: &[T]| {
        Form::basis(2, 0b10).scale(re(x[0].sin()))
    })
    .with_analytic_derivative(|x: &[T]| Form::basis(2, 0b11).scale(re(x[0].cos())));
    let kappa = FormField::new(chart.clone(), 1, |x: &[T]| {
        Form::basis(2, 0b01).scale(re(-x[0].cos() / x[0].sin()))
    });
    let phi0 = FormField::constant(chart.clone(), Form::zero(2));
    let total = S1Geometry::new(chart, |_x: &[T]| vec![T::zero(), T::one()])
        .with_chi(chi)
        .with_kappa(kappa)
        .with_phi0(phi0)
        .with_orbit_volume(|x: &[T]| r64::<T>(TAU) * x[0].sin());
    let qchart = Chart::new(
        vec![coord("theta", 0.0, PI, false)],
        |_x: &[T]| DMatrix::identity(1, 1),
        1,
    );
    let qkappa = FormField::new(qchart.clone(), 1, |x: &[T]| {
        Form::basis(1, 0b1).scale(re(-x[0].cos() / x[0].sin()))
    });
    let qphi0 = FormField::constant(qchart.clone(), Form::zero(1));
    Example {
        name: "sphere",
        total,
        quotient: QuotientGeometry {
            chart: qchart,
            kappa: qkappa,
            phi0: qphi0,
            orbit_volume: Arc::new(|x: &[T]| r64::<T>(TAU) * x[0].sin()),
        },
    }
}

/// Hopf action on the round 3-sphere; quotient is the 2-sphere of radius 1/2.
pub fn hopf<T: Real>() -> Example<T> {
    // total space coordinates (ξ1, ξ2, η)
    let chart = Chart::new(
        vec![
            coord("xi1", 0.0, TAU, true),
            coord("xi2", 0.0, TAU, true),
            coord("eta", 0.0, PI / 2.0, false),
        ],
        |x: &[T]| {
            let (c, s) = (x[2].cos(), x[2].sin());
            diag(vec![c * c, s * s, T::one()])
        },
        1,
    );
    let chi = FormField::new(chart.clone(), 1, |x: &[T]| {
        let (c, s) = (x[2].cos(), x[2].sin());
        Form::one_form(&[re(c * c), re(s * s), re(T::zero())])
    })
    .with_analytic_derivative(|x: &[T]| {
        // dχ = −2 sinη cosη dη∧(dξ1−dξ2)
        let f = -r64::<T>(2.0) * x[2].sin() * x[2].cos();
        let d_eta = Form::basis(3, 0b100);
        let d_xi1 = Form::basis(3, 0b001);
        let d_xi2 = Form::basis(3, 0b010);
        d_eta
            .wedge(&d_xi1.sub(&d_xi2))
            .expect("same dim")
            .scale(re(f))
    });
    let kappa = FormField::constant(chart.clone(), Form::zero(3));
    let phi0 = FormField::new(chart.clone(), 2, |x: &[T]| {
        let f = -r64::<T>(2.0) * x[2].sin() * x[2].cos();
        let d_eta = Form::basis(3, 0b100);
        let d_xi1 = Form::basis(3, 0b001);
        let d_xi2 = Form::basis(3, 0b010);
        d_eta
            .wedge(&d_xi1.sub(&d_xi2))
            .expect("same dim")
            .scale(re(f))
    })
    .with_analytic_derivative(|_x: &[T]| Form::zero(3));
    let total = S1Geometry::new(chart, |_x: &[T]| vec![T::one(), T::one(), T::zero()])
        .with_chi(chi)
        .with_kappa(kappa)
        .with_phi0(phi0)
        .with_orbit_volume(|_x: &[T]| r64::<T>(TAU));
    // quotient: S²(1/2) in (θ, φ); the induced orientation makes
    // −(1/4) sinθ dθ∧dφ the positive volume form.
    let qchart = Chart::new(
        vec![coord("theta", 0.0, PI, false), coord("phi", 0.0, TAU, true)],
        |x: &[T]| {
            let quarter = r64::<T>(0.25);
            diag(vec![quarter, quarter * x[0].sin() * x[0].sin()])
        },
        -1,
    );
    let qkappa = FormField::constant(qchart.clone(), Form::zero(2));
    let qphi0 = FormField::new(qchart.clone(), 2, |x: &[T]| {
        Form::basis(2, 0b11).scale(re(-x[0].sin() / r64::<T>(2.0)))
    })
    .with_analytic_derivative(|_x: &[T]| Form::zero(2));
    Example {
        name: "hopf",
        total,
        quotient: QuotientGeometry {
            chart: qchart,
            kappa: qkappa,
            phi0: qphi0,
            orbit_volume: Arc::new(|_x: &[T]| r64::<T>(TAU)),
        },
    }
}

/// Semi-free action on the 5-sphere with fixed-point set of codimension 4
/// (rotation of the first two complex coordinates).
pub fn s5_codim4<T: Real>() -> Example<T> {
    // total space coordinates (ξ1, ξ2, ξ3, η, β)
    let chart = Chart::new(
        vec![
            coord("xi1", 0.0, TAU, true),
            coord("xi2", 0.0, TAU, true),
            coord("xi3", 0.0, TAU, true),
            coord("eta", 0.0, PI / 2.0, false),
            coord("beta", 0.0, PI / 2.0, false),
        ],
        |x: &[T]| {
            let (ce, se) = (x[3].cos(), x[3].sin());
            let (cb, sb) = (x[4].cos(), x[4].sin());
            diag(vec![cb * cb * ce * ce, cb * cb * se * se, sb * sb, cb * cb, T::one()])
        },
        1,
    );
    let chi = FormField::new(chart.clone(), 1, |x: &[T]| {
        let (ce, se) = (x[3].cos(), x[3].sin());
        let cb = x[4].cos();
        Form::one_form(&[
            re(cb * ce * ce),
            re(cb * se * se),
            re(T::zero()),
            re(T::zero()),
            re(T::zero()),
        ])
    });
    let kappa = FormField::new(chart.clone(), 1, |x: &[T]| {
        // κ = tanβ dβ
        Form::basis(5, 0b10000).scale(re(x[4].sin() / x[4].cos()))
    })
    .with_analytic_derivative(|_x: &[T]| Form::zero(5));
    let phi0 = FormField::new(chart.clone(), 2, |x: &[T]| {
        // φ₀ = −cosβ sin(2η) dη∧(dξ1−dξ2)
        let f = -x[4].cos() * (r64::<T>(2.0) * x[3]).sin();
        let d_eta = Form::basis(5, 0b01000);
        let d_xi1 = Form::basis(5, 0b00001);
        let d_xi2 = Form::basis(5, 0b00010);
        d_eta
            .wedge(&d_xi1.sub(&d_xi2))
            .expect("same dim")
            .scale(re(f))
    });
    let total = S1Geometry::new(chart, |_x: &[T]| {
        vec![T::one(), T::one(), T::zero(), T::zero(), T::zero()]
    })
    .with_chi(chi)
    .with_kappa(kappa)
    .with_phi0(phi0)
    .with_orbit_volume(|x: &[T]| r64::<T>(TAU) * x[4].cos());
    // quotient coordinates (θ, φ, ξ, β) with the submersion metric
    let qchart = Chart::new(
        vec![
            coord("theta", 0.0, PI, false),
            coord("phi", 0.0, TAU, true),
            coord("xi", 0.0, TAU, true),
            coord("beta", 0.0, PI / 2.0, false),
        ],
        |x: &[T]| {
            let quarter = r64::<T>(0.25);
            let (cb, sb) = (x[3].cos(), x[3].sin());
            diag(vec![
                cb * cb * quarter,
                cb * cb * quarter * x[0].sin() * x[0].sin(),
                sb * sb,
                T::one(),
            ])
        },
        1,
    );
    let qkappa = FormField::new(qchart.clone(), 1, |x: &[T]| {
        Form::basis(4, 0b1000).scale(re(x[3].sin() / x[3].cos()))
    })
    .with_analytic_derivative(|_x: &[T]| Form::zero(4));
    let qphi0 = FormField::new(qchart.clone(), 2, |x: &[T]| {
        // φ̄₀ = −(1/2) cosβ sinθ dθ∧dφ
        Form::basis(4, 0b0011).scale(re(-x[3].cos() * x[0].sin() / r64::<T>(2.0)))
    });
    Example {
        name: "s5_codim4",
        total,
        quotient: QuotientGeometry {
            chart: qchart,
            kappa: qkappa,
            phi0: qphi0,
            orbit_volume: Arc::new(|x: &[T]| r64::<T>(TAU) * x[3].cos()),
        },
    }
}

/// Semi-free action on the 5-sphere with fixed-point set of codimension 2
/// (rotation of the last complex coordinate).
pub fn s5_codim2<T: Real>() -> Example<T> {
    let chart = Chart::new(
        vec![
            coord("xi1", 0.0, TAU, true),
            coord("xi2", 0.0, TAU, true),
            coord("xi3", 0.0, TAU, true),
            coord("eta", 0.0, PI / 2.0, false),
            coord("beta", 0.0, PI / 2.0, false),
        ],
        |x: &[T]| {
            let (ce, se) = (x[3].cos(), x[3].sin());
            let (cb, sb) = (x[4].cos(), x[4].sin());
            diag(vec![cb * cb * ce * ce, cb * cb * se * se, sb * sb, cb * cb, T::one()])
        },
        1,
    );
    let chi = FormField::new(chart.clone(), 1, |x: &[T]| {
        Form::one_form(&[
            re(T::zero()),
            re(T::zero()),
            re(x[4].sin()),
            re(T::zero()),
            re(T::zero()),
        ])
    })
    .with_analytic_derivative(|x: &[T]| {
        // dχ = cosβ dβ∧dξ3
        Form::basis(5, 0b10000)
            .wedge(&Form::basis(5, 0b00100))
            .expect("same dim")
            .scale(re(x[4].cos()))
    });
    let kappa = FormField::new(chart.clone(), 1, |x: &[T]| {
        // κ = −cotβ dβ
        Form::basis(5, 0b10000).scale(re(-x[4].cos() / x[4].sin()))
    })
    .with_analytic_derivative(|_x: &[T]| Form::zero(5));
    let phi0 = FormField::constant(chart.clone(), Form::zero(5));
    let total = S1Geometry::new(chart, |_x: &[T]| {
        vec![T::zero(), T::zero(), T::one(), T::zero(), T::zero()]
    })
    .with_chi(chi)
    .with_kappa(kappa)
    .with_phi0(phi0)
    .with_orbit_volume(|x: &[T]| r64::<T>(TAU) * x[4].sin());
    // quotient: upper half 4-sphere in (ξ1, ξ2, η, β)
    let qchart = Chart::new(
        vec![
            coord("xi1", 0.0, TAU, true),
            coord("xi2", 0.0, TAU, true),
            coord("eta", 0.0, PI / 2.0, false),
            coord("beta", 0.0, PI / 2.0, false),
        ],
        |x: &[T]| {
            let (ce, se) = (x[2].cos(), x[2].sin());
            let cb = x[3].cos();
            diag(vec![cb * cb * ce * ce, cb * cb * se * se, cb * cb, T::one()])
        },
        1,
    );
    let qkappa = FormField::new(qchart.clone(), 1, |x: &[T]| {
        Form::basis(4, 0b1000).scale(re(-x[3].cos() / x[3].sin()))
    })
    .with_analytic_derivative(|_x: &[T]| Form::zero(4));
    let qphi0 = FormField::constant(qchart.clone(), Form::zero(4));
    Example {
        name: "s5_codim2",
        total,
        quotient: QuotientGeometry {
            chart: qchart,
            kappa: qkappa,
            phi0: qphi0,
            orbit_volume: Arc::new(|x: &[T]| r64::<T>(TAU) * x[3].sin()),
        },
    }
}
