//! Integer Laurent polynomials in one variable.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::exact::Q;
use crate::poly::QPoly;

/// Sparse `exponent -> coefficient` map with no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(exp: i64, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPolynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Width of the exponent range, `max - min`.
    pub fn span(&self) -> Option<i64> {
        Some(self.max_exp()? - self.min_exp()?)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut p = Self::zero();
        for (e, x) in &self.terms {
            p.add_term(*e, x * c);
        }
        p
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(e, c)| (e + by, c.clone())).collect(),
        }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn eval_at_minus_one(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| if e.rem_euclid(2) == 0 { c.clone() } else { -c })
            .sum()
    }

    pub fn eval_complex(&self, re: f64, im: f64) -> (f64, f64) {
        let (r, theta) = ((re * re + im * im).sqrt(), im.atan2(re));
        self.terms.iter().fold((0.0, 0.0), |(ar, ai), (e, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let m = c * r.powi(*e as i32);
            let a = theta * *e as f64;
            (ar + m * a.cos(), ai + m * a.sin())
        })
    }

    /// `p(t^-1)`.
    pub fn reflect(&self) -> Self {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.reflect()
    }

    /// Value of the `k`-th formal derivative at `t = 1`.
    pub fn derivative_at_one(&self, k: u32) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| {
                let falling: BigInt = (0..k as i64).map(|j| BigInt::from(e - j)).product();
                c * falling
            })
            .sum()
    }

    /// Substitutes `s = t^(1/2)`: every exponent must be even.
    pub fn halve_exponents(&self) -> Option<Self> {
        if self.terms.keys().any(|e| e.rem_euclid(2) != 0) {
            return None;
        }
        Some(LaurentPolynomial {
            terms: self.terms.iter().map(|(e, c)| (e / 2, c.clone())).collect(),
        })
    }

    /// `t^{-min} p(t)` as an ordinary polynomial, together with the shift.
    pub fn to_poly(&self) -> (QPoly, i64) {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let mut c = vec![Q::zero(); (hi - lo + 1) as usize];
        for (e, x) in &self.terms {
            c[(e - lo) as usize] = Q::from_integer(x.clone());
        }
        (QPoly::new(c), lo)
    }

    /// Exact quotient `self / d`; `None` when `d` does not divide `self`
    /// in `Z[t, t^-1]`.
    pub fn exact_div(&self, d: &LaurentPolynomial) -> Option<LaurentPolynomial> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let d_lo = d.min_exp()?;
        let d_hi = d.max_exp()?;
        let lead = d.coefficient(d_hi);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(hi) = rem.max_exp() {
            let lo = rem.min_exp()?;
            if hi - lo < d_hi - d_lo {
                return None;
            }
            let c = rem.coefficient(hi);
            if (&c % &lead).is_zero() {
                let qc = &c / &lead;
                let e = hi - d_hi;
                rem = &rem - &(d.shift(e).scale(&qc));
                quot.add_term(e, qc);
            } else {
                return None;
            }
        }
        Some(quot)
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(*e, c.clone());
        }
        p
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(*e, -c);
        }
        p
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                p.add_term(ea + eb, ca * cb);
            }
        }
        p
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Highest power first, e.g. `-t + 3 - t^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = match *e {
                0 => String::new(),
                1 => "t".to_string(),
                e => format!("t^{e}"),
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(t: &[(i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(t.iter().copied())
    }

    #[test]
    fn display_matches_conventional_form() {
        assert_eq!(lp(&[(1, 1), (0, -1), (-1, 1)]).to_string(), "t - 1 + t^-1");
        assert_eq!(lp(&[(1, -1), (0, 3), (-1, -1)]).to_string(), "-t + 3 - t^-1");
        assert_eq!(LaurentPolynomial::one().to_string(), "1");
        assert_eq!(lp(&[(2, 2)]).to_string(), "2*t^2");
    }

    #[test]
    fn zeros_are_not_stored() {
        let p = &lp(&[(1, 1), (0, 2)]) - &lp(&[(1, 1)]);
        assert_eq!(p, lp(&[(0, 2)]));
        assert_eq!(p.terms().count(), 1);
    }

    #[test]
    fn second_derivative_at_one() {
        assert_eq!(lp(&[(1, 1), (0, -1), (-1, 1)]).derivative_at_one(2), BigInt::from(2));
        assert_eq!(lp(&[(1, -1), (0, 3), (-1, -1)]).derivative_at_one(2), BigInt::from(-2));
        assert_eq!(LaurentPolynomial::one().derivative_at_one(2), BigInt::zero());
    }

    #[test]
    fn exact_division() {
        let a = lp(&[(1, 1), (-1, -1)]); // s - s^-1
        let b = lp(&[(0, 1), (-2, 1)]); // 1 + s^-2
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.exact_div(&b), Some(a));
        assert_eq!(lp(&[(0, 1)]).exact_div(&lp(&[(0, 2)])), None);
        assert_eq!(lp(&[(2, 1), (0, 1)]).exact_div(&lp(&[(1, 1), (0, 1)])), None);
    }
}
