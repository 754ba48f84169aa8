//! Spectral resolutions of the cone coefficients built from fiber spectral
//! data: the vertical operator `A_V` and its shifted companion
//! `𝒜_V = A_V − ε/2`, the Witt/rescaling analysis, and eigenvalue tables in
//! exact rational-surd arithmetic.

use crate::surd::{rat, ratio, Surd};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

/// One positive eigenvalue of the fiber Laplacian on closed `j`-forms.
#[derive(Clone, Debug)]
pub struct ClosedBranchEntry {
    pub degree: usize,
    pub lambda: BigRational,
    pub multiplicity: u64,
}

/// Input spectrum of the fiber: harmonic Betti numbers and the positive
/// closed-form branch, plus a vertical scale `a` rescaling `λ → λ/a²`.
#[derive(Clone, Debug)]
pub struct FiberSpectralData {
    /// vertical dimension of the fiber
    pub v: usize,
    /// `b_0 .. b_v`
    pub betti: Vec<u64>,
    pub closed: Vec<ClosedBranchEntry>,
    pub scale: BigRational,
    /// `Some(N)` when the fiber is the complex projective space `ℂP^N`
    pub cp_index: Option<usize>,
    /// emit the extra `±√λ` eigenvalues of the middle degree (odd `v` only)
    pub half_degree_branch: bool,
}

impl FiberSpectralData {
    /// `ℂP^N` fiber: `b_{2i} = 1`, odd Betti numbers vanish.
    pub fn cp(n: usize, closed: Vec<ClosedBranchEntry>, scale: BigRational) -> Result<Self> {
        let v = 2 * n;
        let betti = (0..=v).map(|j| if j % 2 == 0 { 1 } else { 0 }).collect();
        let data = FiberSpectralData {
            v,
            betti,
            closed,
            scale,
            cp_index: Some(n),
            half_degree_branch: false,
        };
        data.validate()?;
        Ok(data)
    }

    /// Arbitrary fiber data for property tests.
    pub fn generic(
        v: usize,
        betti: Vec<u64>,
        closed: Vec<ClosedBranchEntry>,
        scale: BigRational,
        half_degree_branch: bool,
    ) -> Result<Self> {
        let data = FiberSpectralData {
            v,
            betti,
            closed,
            scale,
            cp_index: None,
            half_degree_branch,
        };
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<()> {
        if self.betti.len() != self.v + 1 {
            return Err(Error::InvalidInput(format!(
                "need {} Betti numbers for vertical dimension {}",
                self.v + 1,
                self.v
            )));
        }
        if !self.scale.is_positive() {
            return Err(Error::InvalidInput("vertical scale must be positive".into()));
        }
        for e in &self.closed {
            if !e.lambda.is_positive() {
                return Err(Error::InvalidInput(
                    "closed-branch eigenvalues must be positive".into(),
                ));
            }
            if e.multiplicity == 0 {
                return Err(Error::InvalidInput(
                    "closed-branch multiplicities must be positive".into(),
                ));
            }
            if e.degree > self.v + 1 {
                return Err(Error::InvalidInput(format!(
                    "closed-branch degree {} out of range",
                    e.degree
                )));
            }
        }
        if let Some(n) = self.cp_index {
            for (j, &b) in self.betti.iter().enumerate() {
                let want = if j % 2 == 0 { 1 } else { 0 };
                if b != want {
                    return Err(Error::InvalidInput(format!(
                        "Betti pattern does not match CP^{n} at degree {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn lambda_scaled(&self, lambda: &BigRational) -> BigRational {
        lambda / (&self.scale * &self.scale)
    }

    pub fn with_scale(&self, scale: BigRational) -> Self {
        let mut d = self.clone();
        d.scale = scale;
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    #[serde(rename = "harm")]
    Harmonic,
    #[serde(rename = "cl+")]
    ClPlus,
    #[serde(rename = "cl-")]
    ClMinus,
    #[serde(rename = "ccl+")]
    CclPlus,
    #[serde(rename = "ccl-")]
    CclMinus,
    #[serde(rename = "half+")]
    HalfPlus,
    #[serde(rename = "half-")]
    HalfMinus,
}

impl Branch {
    pub fn tag(&self) -> &'static str {
        match self {
            Branch::Harmonic => "harm",
            Branch::ClPlus => "cl+",
            Branch::ClMinus => "cl-",
            Branch::CclPlus => "ccl+",
            Branch::CclMinus => "ccl-",
            Branch::HalfPlus => "half+",
            Branch::HalfMinus => "half-",
        }
    }
}

/// One eigenvalue with its provenance in the resolution.
#[derive(Clone, Debug)]
pub struct ConeEigenvalue {
    pub value: Surd,
    pub multiplicity: u64,
    pub branch: Branch,
    pub degree: usize,
    pub lambda: BigRational,
}

/// Eigenvalue table of a cone coefficient.
#[derive(Clone, Debug, Default)]
pub struct ConeEigenReport {
    pub entries: Vec<ConeEigenvalue>,
}

impl ConeEigenReport {
    /// Smallest |eigenvalue| that violates the open gap `(−1/2, 1/2)`, if any.
    pub fn gap_violation(&self) -> Option<&ConeEigenvalue> {
        self.entries
            .iter()
            .find(|e| e.value.in_open_interval(&ratio(-1, 2), &ratio(1, 2)))
    }

    /// Do all eigenvalues satisfy `|μ| ≥ bound` (exact)?
    pub fn abs_at_least(&self, bound: &BigRational) -> bool {
        self.entries.iter().all(|e| e.value.abs_ge(bound))
    }

    pub fn contains_value(&self, v: &Surd) -> bool {
        self.entries.iter().any(|e| &e.value == v)
    }

    /// Total multiplicity of the entries attached to `(degree, λ)`.
    pub fn block_multiplicity(&self, degree: usize, lambda: &BigRational) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.degree == degree && &e.lambda == lambda && e.branch != Branch::Harmonic)
            .map(|e| e.multiplicity)
            .sum()
    }

    pub fn sorted_by_value(&self) -> Vec<&ConeEigenvalue> {
        let mut v: Vec<&ConeEigenvalue> = self.entries.iter().collect();
        v.sort_by(|x, y| x.value.to_f64().partial_cmp(&y.value.to_f64()).unwrap());
        v
    }

    /// CSV with columns `value,exact,mult,branch,degree,lambda`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,exact,mult,branch,degree,lambda\n");
        for e in self.sorted_by_value() {
            out.push_str(&format!(
                "{:.12},{},{},{},{},{}\n",
                e.value.to_f64(),
                e.value,
                e.multiplicity,
                e.branch.tag(),
                e.degree,
                e.lambda
            ));
        }
        out
    }

    pub fn to_json_rows(&self) -> Vec<serde_json::Value> {
        self.sorted_by_value()
            .iter()
            .map(|e| {
                serde_json::json!({
                    "value": e.value.to_f64(),
                    "exact": format!("{}", e.value),
                    "mult": e.multiplicity,
                    "branch": e.branch.tag(),
                    "degree": e.degree,
                    "lambda": e.lambda.to_f64(),
                })
            })
            .collect()
    }
}

/// `(j − (v+1)/2)²` as an exact rational.
fn offset_sq_av(j: usize, v: usize) -> BigRational {
    let twice = BigInt::from(2 * j as i64 - v as i64 - 1);
    BigRational::new(&twice * &twice, BigInt::from(4))
}

/// Spectral resolution of the cone coefficient `A_V`: harmonic eigenvalues
/// `±(j − v/2)` with the Betti multiplicities, and the four branches
/// `±1/2 ± √(λ + (j−(v+1)/2)²)` with common multiplicity `2·dim E^j_cl(λ)`.
pub fn spectrum_av(data: &FiberSpectralData) -> Result<ConeEigenReport> {
    data.validate()?;
    let mut entries = Vec::new();
    for (j, &b) in data.betti.iter().enumerate() {
        if b == 0 {
            continue;
        }
        // eigenvalue j − v/2 on harmonic j-forms
        let value = Surd::rational(BigRational::new(
            BigInt::from(2 * j as i64 - data.v as i64),
            BigInt::from(2),
        ));
        entries.push(ConeEigenvalue {
            value,
            multiplicity: b,
            branch: Branch::Harmonic,
            degree: j,
            lambda: BigRational::zero(),
        });
    }
    for e in &data.closed {
        let lam = data.lambda_scaled(&e.lambda);
        let rad = &lam + offset_sq_av(e.degree, data.v);
        let mult = 2 * e.multiplicity;
        for (branch, a, b) in [
            (Branch::ClPlus, ratio(1, 2), rat(1)),
            (Branch::ClMinus, ratio(1, 2), rat(-1)),
            (Branch::CclPlus, ratio(-1, 2), rat(1)),
            (Branch::CclMinus, ratio(-1, 2), rat(-1)),
        ] {
            entries.push(ConeEigenvalue {
                value: Surd::new(a, b, rad.clone()),
                multiplicity: mult,
                branch,
                degree: e.degree,
                lambda: e.lambda.clone(),
            });
        }
        // odd vertical dimension: extra ±√λ eigenvalues in the middle degree
        if data.half_degree_branch && data.v % 2 == 1 && 2 * e.degree == data.v + 1 {
            for (branch, b) in [(Branch::HalfPlus, rat(1)), (Branch::HalfMinus, rat(-1))] {
                entries.push(ConeEigenvalue {
                    value: Surd::new(BigRational::zero(), b, lam.clone()),
                    multiplicity: mult,
                    branch,
                    degree: e.degree,
                    lambda: e.lambda.clone(),
                });
            }
        }
    }
    Ok(ConeEigenReport { entries })
}

/// Spectral resolution of the shifted coefficient `𝒜_V = A_V − ε/2`
/// (even vertical dimension): harmonic eigenvalues `j − v/2 ± 1/2` and the
/// branches `±1/2 ± √(λ + (j − v/2 − {0,1})²)`.
pub fn spectrum_script_av(data: &FiberSpectralData) -> Result<ConeEigenReport> {
    data.validate()?;
    if data.v % 2 != 0 {
        return Err(Error::InvalidInput(
            "the shifted cone coefficient needs even vertical dimension".into(),
        ));
    }
    let n = (data.v / 2) as i64;
    let mut entries = Vec::new();
    for (j, &b) in data.betti.iter().enumerate() {
        if b == 0 {
            continue;
        }
        for s in [1i64, -1] {
            let value = Surd::rational(
                rat(j as i64 - n) + BigRational::new(BigInt::from(s), BigInt::from(2)),
            );
            entries.push(ConeEigenvalue {
                value,
                multiplicity: b,
                branch: Branch::Harmonic,
                degree: j,
                lambda: BigRational::zero(),
            });
        }
    }
    for e in &data.closed {
        let lam = data.lambda_scaled(&e.lambda);
        for inner in [1i64, 0] {
            let off = rat(e.degree as i64 - n - inner);
            let rad = &lam + &off * &off;
            for (branch, a, b) in [
                (Branch::ClPlus, ratio(1, 2), rat(1)),
                (Branch::ClMinus, ratio(1, 2), rat(-1)),
                (Branch::CclPlus, ratio(-1, 2), rat(1)),
                (Branch::CclMinus, ratio(-1, 2), rat(-1)),
            ] {
                entries.push(ConeEigenvalue {
                    value: Surd::new(a, b, rad.clone()),
                    multiplicity: e.multiplicity,
                    branch,
                    degree: e.degree,
                    lambda: e.lambda.clone(),
                });
            }
        }
    }
    Ok(ConeEigenReport { entries })
}

/// Fubini-Study eigenvalues `4k(k+1)/a²` of the Laplacian on functions of
/// the quotient 2-sphere, `1 ≤ k ≤ k_max` (the zero mode is excluded from
/// the positive branches).
pub fn cp1_fs_spectrum(k_max: usize, scale: &BigRational) -> Result<Vec<BigRational>> {
    if !scale.is_positive() {
        return Err(Error::InvalidInput("scale must be positive".into()));
    }
    Ok((1..=k_max as i64)
        .map(|k| rat(4 * k * (k + 1)) / (scale * scale))
        .collect())
}

/// Closed-branch table of the `ℂP¹` fiber: `E^1_cl(λ_k)` has dimension
/// `2k+1` and pairs with degree `v+1−j = 2`.
pub fn cp1_fiber_data(k_max: usize, scale: BigRational) -> Result<FiberSpectralData> {
    let closed = (1..=k_max as i64)
        .map(|k| ClosedBranchEntry {
            degree: 1,
            lambda: rat(4 * k * (k + 1)),
            multiplicity: (2 * k + 1) as u64,
        })
        .collect();
    FiberSpectralData::cp(1, closed, scale)
}

/// Synthetic `ℂP^N` data with the `ℂP¹`-style closed branch placed in the
/// canonical degrees `1..N` (inputs to the resolutions are supplied, not
/// derived, for `N ≥ 2`).
pub fn cp_fiber_data(n: usize, k_max: usize, scale: BigRational) -> Result<FiberSpectralData> {
    let mut closed = Vec::new();
    for j in 1..=n {
        for k in 1..=k_max as i64 {
            closed.push(ClosedBranchEntry {
                degree: j,
                lambda: rat(4 * k * (k + 1)),
                multiplicity: (2 * k + 1) as u64,
            });
        }
    }
    FiberSpectralData::cp(n, closed, scale)
}

/// Outcome of the Witt / vertical-rescaling analysis.
#[derive(Clone, Debug)]
pub struct WittReport {
    pub witt: bool,
    /// scale achieving `|A_V| ≥ 1/2` in the Witt case
    pub rescale: Option<BigRational>,
    /// harmonic degree carrying the obstruction eigenvalue 0 otherwise
    pub zero_certificate: Option<usize>,
    /// `spec(𝒜_V) ∩ (−1/2, 1/2) = ∅` after the standard scaling
    pub script_gap: bool,
    /// the scale used for the 𝒜_V gap statement
    pub standard_scale: BigRational,
}

/// Witt flag and rescaling search for a `ℂP^N` fiber.
pub fn witt_and_rescale(data: &FiberSpectralData) -> Result<WittReport> {
    let n = data
        .cp_index
        .ok_or_else(|| Error::InvalidInput("Witt analysis needs a CP^N fiber".into()))?;
    let witt = n % 2 == 1;
    let half = ratio(1, 2);
    // rescaling search (Witt case): halve the scale until |spec A_V| ≥ 1/2
    let mut rescale = None;
    if witt {
        let mut a = rat(1);
        for _ in 0..64 {
            let rep = spectrum_av(&data.with_scale(a.clone()))?;
            if rep.abs_at_least(&half) {
                rescale = Some(a.clone());
                break;
            }
            a /= rat(2);
        }
    }
    // non-Witt certificate: zero eigenvalue on harmonic degree N for any scale
    let zero_certificate = if witt {
        None
    } else {
        let rep = spectrum_av(data)?;
        rep.entries
            .iter()
            .find(|e| e.branch == Branch::Harmonic && e.value.is_zero())
            .map(|e| e.degree)
    };
    // standard scaling: shrink until every positive fiber eigenvalue clears 1
    let mut standard_scale = rat(1);
    for _ in 0..64 {
        let ok = data.closed.iter().all(|e| {
            let lam = e.lambda.clone() / (&standard_scale * &standard_scale);
            lam > rat(1)
        });
        if ok {
            break;
        }
        standard_scale /= rat(2);
    }
    let script = spectrum_script_av(&data.with_scale(standard_scale.clone()))?;
    let script_gap = script.gap_violation().is_none();
    Ok(WittReport {
        witt,
        rescale,
        zero_certificate,
        script_gap,
        standard_scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surd::rat;

    #[test]
    fn harmonic_spectrum_av() {
        // N=1: eigenvalues {−1, +1}; N=2: {−2, 0, +2}
        let d1 = FiberSpectralData::cp(1, vec![], rat(1)).unwrap();
        let rep = spectrum_av(&d1).unwrap();
        let values: Vec<f64> = rep.sorted_by_value().iter().map(|e| e.value.to_f64()).collect();
        assert_eq!(values, vec![-1.0, 1.0]);
        let d2 = FiberSpectralData::cp(2, vec![], rat(1)).unwrap();
        let rep = spectrum_av(&d2).unwrap();
        let values: Vec<f64> = rep.sorted_by_value().iter().map(|e| e.value.to_f64()).collect();
        assert_eq!(values, vec![-2.0, 0.0, 2.0]);
    }

    #[test]
    fn closed_branch_formula_substitution() {
        // N=1, j=0, λ=8: μ_cl,± = 1/2 ± √(8 + 9/4) = 1/2 ± √41/2
        let data = FiberSpectralData::cp(
            1,
            vec![ClosedBranchEntry {
                degree: 0,
                lambda: rat(8),
                multiplicity: 1,
            }],
            rat(1),
        )
        .unwrap();
        let rep = spectrum_av(&data).unwrap();
        let want_plus = Surd::new(ratio(1, 2), rat(1), ratio(41, 4));
        let want_minus = Surd::new(ratio(1, 2), rat(-1), ratio(41, 4));
        assert!(rep.contains_value(&want_plus));
        assert!(rep.contains_value(&want_minus));
        // four-branch multiplicity 2m and squaring consistency
        for e in &rep.entries {
            match e.branch {
                Branch::Harmonic => {}
                _ => {
                    assert_eq!(e.multiplicity, 2);
                    // (μ ∓ 1/2)² = λ + (j−(v+1)/2)² exactly
                    let shift = match e.branch {
                        Branch::ClPlus | Branch::ClMinus => ratio(1, 2),
                        _ => ratio(-1, 2),
                    };
                    // μ − shift = ±√rad: verify via squared comparison
                    let rad = rat(8) + offset_sq_av(e.degree, 2);
                    let mu = e.value.to_f64();
                    let lhs = (mu - shift.to_f64().unwrap()).powi(2);
                    assert!((lhs - rad.to_f64().unwrap()).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn script_av_harmonic_n2() {
        // N=2 harmonic: {−5/2, −3/2, −1/2, +1/2, +3/2, +5/2}
        let d2 = FiberSpectralData::cp(2, vec![], rat(1)).unwrap();
        let rep = spectrum_script_av(&d2).unwrap();
        let values: Vec<f64> = rep.sorted_by_value().iter().map(|e| e.value.to_f64()).collect();
        assert_eq!(values, vec![-2.5, -1.5, -0.5, 0.5, 1.5, 2.5]);
        // the open gap (−1/2, 1/2) is clear even though ±1/2 occur
        assert!(rep.gap_violation().is_none());
    }

    #[test]
    fn script_av_formula_substitution() {
        // N=1, j=1, λ=8: μ̃_cl,+,+ = 1/2 + √(8 + (1−1−1)²) = 1/2 + 3
        let data = FiberSpectralData::cp(
            1,
            vec![ClosedBranchEntry {
                degree: 1,
                lambda: rat(8),
                multiplicity: 1,
            }],
            rat(1),
        )
        .unwrap();
        let rep = spectrum_script_av(&data).unwrap();
        assert!(rep.contains_value(&Surd::rational(ratio(7, 2))));
        // gap: spec(Δ_Y)∖{0} ⊂ (1,∞) ⟹ no eigenvalue in (−1/2, 1/2)
        assert!(rep.gap_violation().is_none());
        // block multiplicity matches the A_V table: 8·m per (j, λ)
        let av = spectrum_av(&data).unwrap();
        assert_eq!(
            av.block_multiplicity(1, &rat(8)),
            rep.block_multiplicity(1, &rat(8))
        );
    }

    #[test]
    fn rescale_covariance() {
        // spectrum(data with scale a) = spectrum(data, a=1, λ → λ/a²)
        let data = cp1_fiber_data(3, ratio(1, 2)).unwrap();
        let direct = spectrum_av(&data).unwrap();
        let manual = FiberSpectralData::cp(
            1,
            data.closed
                .iter()
                .map(|e| ClosedBranchEntry {
                    degree: e.degree,
                    lambda: &e.lambda / ratio(1, 4),
                    multiplicity: e.multiplicity,
                })
                .collect(),
            rat(1),
        )
        .unwrap();
        let expect = spectrum_av(&manual).unwrap();
        let got: Vec<f64> = direct.sorted_by_value().iter().map(|e| e.value.to_f64()).collect();
        let want: Vec<f64> = expect.sorted_by_value().iter().map(|e| e.value.to_f64()).collect();
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
        // harmonic entries do not move under rescaling
        let h1: Vec<f64> = direct
            .entries
            .iter()
            .filter(|e| e.branch == Branch::Harmonic)
            .map(|e| e.value.to_f64())
            .collect();
        let h2: Vec<f64> = spectrum_av(&data.with_scale(rat(7)))
            .unwrap()
            .entries
            .iter()
            .filter(|e| e.branch == Branch::Harmonic)
            .map(|e| e.value.to_f64())
            .collect();
        assert_eq!(h1, h2);
    }

    #[test]
    fn witt_verdicts() {
        // N=1 → Witt, a=1 suffices
        let d1 = cp1_fiber_data(3, rat(1)).unwrap();
        let rep = witt_and_rescale(&d1).unwrap();
        assert!(rep.witt);
        assert_eq!(rep.rescale, Some(rat(1)));
        assert!(rep.script_gap);
        // N=2 → non-Witt with zero certificate on degree 2; 𝒜_V still gapped
        let d2 = cp_fiber_data(2, 2, rat(1)).unwrap();
        let rep = witt_and_rescale(&d2).unwrap();
        assert!(!rep.witt);
        assert_eq!(rep.zero_certificate, Some(2));
        assert!(rep.script_gap);
        // N=3 → Witt by parity
        let d3 = cp_fiber_data(3, 1, rat(1)).unwrap();
        assert!(witt_and_rescale(&d3).unwrap().witt);
    }

    #[test]
    fn non_witt_obstruction_for_every_scale() {
        let d2 = cp_fiber_data(2, 1, rat(1)).unwrap();
        for denom in [1i64, 2, 4, 8, 32, 1024] {
            let rep = spectrum_av(&d2.with_scale(ratio(1, denom))).unwrap();
            assert!(rep
                .entries
                .iter()
                .any(|e| e.branch == Branch::Harmonic && e.value.is_zero()));
        }
    }

    #[test]
    fn odd_fiber_extra_branch() {
        // generic data with v = 1: the middle degree j = 1 carries ±√λ
        let data = FiberSpectralData::generic(
            1,
            vec![1, 0],
            vec![ClosedBranchEntry {
                degree: 1,
                lambda: rat(9),
                multiplicity: 1,
            }],
            rat(1),
            true,
        )
        .unwrap();
        let rep = spectrum_av(&data).unwrap();
        assert!(rep.contains_value(&Surd::from_integer(3)));
        assert!(rep.contains_value(&Surd::from_integer(-3)));
        // squaring consistency μ² = λ for the extra branch
        let halfs: Vec<&ConeEigenvalue> = rep
            .entries
            .iter()
            .filter(|e| matches!(e.branch, Branch::HalfPlus | Branch::HalfMinus))
            .collect();
        assert_eq!(halfs.len(), 2);
        // without the flag the branch is not emitted
        let data2 = FiberSpectralData::generic(
            1,
            vec![1, 0],
            data.closed.clone(),
            rat(1),
            false,
        )
        .unwrap();
        let rep2 = spectrum_av(&data2).unwrap();
        assert!(!rep2.contains_value(&Surd::from_integer(3)));
    }

    #[test]
    fn csv_table_is_deterministic() {
        let data = cp1_fiber_data(2, rat(1)).unwrap();
        let a = spectrum_av(&data).unwrap().to_csv();
        let b = spectrum_av(&data).unwrap().to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with("value,exact,mult,branch,degree,lambda"));
        assert!(a.contains("harm"));
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(FiberSpectralData::cp(
            1,
            vec![ClosedBranchEntry {
                degree: 0,
                lambda: rat(-3),
                multiplicity: 1
            }],
            rat(1)
        )
        .is_err());
        assert!(cp1_fs_spectrum(3, &rat(0)).is_err());
        let vals = cp1_fs_spectrum(2, &rat(1)).unwrap();
        assert_eq!(vals, vec![rat(8), rat(24)]);
    }
}
