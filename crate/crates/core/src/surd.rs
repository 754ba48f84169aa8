//! Exact numbers of the form `a + b√d` with rational `a`, `b`, `d ≥ 0`.
//!
//! Interval membership (the spectral-gap questions) is decided without any
//! rounding: comparisons against rationals square out the radical.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// `a + b√d`, canonicalized so that `b = 0, d = 0` for rational values and
/// the radicand is a positive non-square integer otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Largest square divisor split: returns `(s, f)` with `n = s² f`, `f`
/// squarefree (trial division; the radicands in this crate are small).
fn extract_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut square = BigInt::one();
    let mut rest = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let p2 = &p * &p;
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            square *= &p;
        }
        p += 1;
    }
    (square, rest)
}

impl Surd {
    pub fn rational(a: BigRational) -> Surd {
        Surd {
            a,
            b: BigRational::zero(),
            d: BigInt::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Surd {
        Surd::rational(rat(n))
    }

    /// `a + b√d` for rational `d ≥ 0`.
    pub fn new(a: BigRational, b: BigRational, d: BigRational) -> Surd {
        assert!(!d.is_negative(), "radicand must be nonnegative");
        if b.is_zero() || d.is_zero() {
            return Surd::rational(a);
        }
        // integerize the radicand: b√(p/q) = (b/q)√(pq)
        let p = d.numer().clone();
        let q = d.denom().clone();
        let mut b = b / BigRational::from_integer(q.clone());
        let mut rad = p * q;
        // pull out square factors
        let (s, f) = extract_square(&rad);
        b *= BigRational::from_integer(s);
        rad = f;
        if rad.is_one() {
            return Surd::rational(a + b);
        }
        Surd { a, b, d: rad }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn is_zero(&self) -> bool {
        self.b.is_zero() && self.a.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        a + b * d.sqrt()
    }

    pub fn neg(&self) -> Surd {
        Surd {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// Exact comparison with a rational number.
    pub fn cmp_rational(&self, c: &BigRational) -> Ordering {
        let diff = &self.a - c;
        if self.b.is_zero() {
            return diff.cmp(&BigRational::zero());
        }
        let d = BigRational::from_integer(self.d.clone());
        let radical_sq = &self.b * &self.b * d; // (b√d)² > 0
        if self.b.is_positive() {
            if !diff.is_negative() {
                Ordering::Greater
            } else {
                // diff < 0: value − c = diff + b√d has the sign of b²d − diff²
                (&radical_sq).cmp(&(&diff * &diff))
            }
        } else {
            if !diff.is_positive() {
                Ordering::Less
            } else {
                (&diff * &diff).cmp(&radical_sq)
            }
        }
    }

    /// Strict membership in the open interval `(lo, hi)`.
    pub fn in_open_interval(&self, lo: &BigRational, hi: &BigRational) -> bool {
        self.cmp_rational(lo) == Ordering::Greater && self.cmp_rational(hi) == Ordering::Less
    }

    /// `|value| ≥ c` for `c ≥ 0`, decided exactly.
    pub fn abs_ge(&self, c: &BigRational) -> bool {
        !self.in_open_interval(&-c.clone(), c)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let mag = self.b.abs();
        if self.a.is_zero() {
            if mag.is_one() {
                return write!(f, "{}sqrt({})", if self.b.is_negative() { "-" } else { "" }, self.d);
            }
            return write!(
                f,
                "{}{}*sqrt({})",
                if self.b.is_negative() { "-" } else { "" },
                mag,
                self.d
            );
        }
        if mag.is_one() {
            write!(f, "{} {} sqrt({})", self.a, sign, self.d)
        } else {
            write!(f, "{} {} {}*sqrt({})", self.a, sign, mag, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalization() {
        // √(9/4) folds into the rational part
        let s = Surd::new(ratio(1, 2), rat(1), ratio(9, 4));
        assert!(s.is_rational());
        assert_eq!(s.rational_part(), &rat(2)); // 1/2 + 3/2
        // √8 = 2√2
        let s = Surd::new(rat(0), rat(1), rat(8));
        assert_eq!(format!("{s}"), "2*sqrt(2)");
        // rational radicand: √(41/4) = √41/2
        let s = Surd::new(ratio(1, 2), rat(1), ratio(41, 4));
        assert_eq!(format!("{s}"), "1/2 + 1/2*sqrt(41)");
        assert!((s.to_f64() - (0.5 + 41f64.sqrt() / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn exact_comparisons() {
        // 1/2 − √(8 + 1/4) < −1/2 (so outside the open gap)
        let s = Surd::new(ratio(1, 2), rat(-1), ratio(33, 4));
        assert_eq!(s.cmp_rational(&ratio(-1, 2)), Ordering::Less);
        assert!(!s.in_open_interval(&ratio(-1, 2), &ratio(1, 2)));
        assert!(s.abs_ge(&ratio(1, 2)));
        // 1/2 − √(1/2) ∈ (−1/2, 1/2)
        let s = Surd::new(ratio(1, 2), rat(-1), ratio(1, 2));
        assert!(s.in_open_interval(&ratio(-1, 2), &ratio(1, 2)));
        // boundary: value exactly 1/2 is not in the open interval
        let s = Surd::rational(ratio(1, 2));
        assert!(!s.in_open_interval(&ratio(-1, 2), &ratio(1, 2)));
        assert!(s.abs_ge(&ratio(1, 2)));
        // equality case through squaring: 3 − √9 = 0
        let s = Surd::new(rat(3), rat(-1), rat(9));
        assert!(s.is_zero());
    }

    #[test]
    fn comparison_matches_float() {
        for (a, b, d) in [(1i64, 2i64, 5i64), (-3, 1, 7), (2, -1, 3), (0, 3, 2)] {
            let s = Surd::new(rat(a), rat(b), rat(d));
            for c in -5..=5 {
                let exact = s.cmp_rational(&rat(c));
                let float = s.to_f64().partial_cmp(&(c as f64)).unwrap();
                assert_eq!(exact, float, "a={a} b={b} d={d} c={c}");
            }
        }
    }
}
