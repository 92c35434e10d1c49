//! Exact integer and rational helpers shared by the knot, calculus and
//! pillowcase modules.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as an exact rational")]
pub struct ParseRationalError(pub String);

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-0.375"` exactly.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| err())?;
    let scale = frac_part.len() as i32 + 1 - exp;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Q::new(all, num_traits::pow(ten, scale as usize))
    } else {
        Q::from_integer(all * num_traits::pow(ten, (-scale) as usize))
    };
    Ok(if neg { -value } else { value })
}

/// Serde adapter storing a rational as a `"p/q"` string. Integers and
/// finite decimals are accepted on input as JSON numbers too.
pub mod q_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        value_to_q(&v).map_err(de::Error::custom)
    }
}

pub fn value_to_q(v: &serde_json::Value) -> Result<Q, ParseRationalError> {
    match v {
        serde_json::Value::String(s) => parse_q(s),
        serde_json::Value::Number(n) => parse_q(&n.to_string()),
        other => Err(ParseRationalError(other.to_string())),
    }
}

/// A rational wrapped so it serializes as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactQ(pub Q);

impl Serialize for ExactQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        q_string::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for ExactQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        q_string::deserialize(d).map(ExactQ)
    }
}

impl fmt::Display for ExactQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_q(&self.0))
    }
}

/// Floor of a rational as a big integer.
pub fn floor_q(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// Determinant of a square rational matrix by fraction-free (Bareiss)
/// elimination after clearing denominators row by row.
pub fn det_q(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 0 {
        return Q::one();
    }
    let mut scale = Q::one();
    let rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale /= Q::from_integer(l.clone());
            row.iter()
                .map(|x| (x * Q::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    Q::from_integer(det_bareiss(rows)) * scale
}

/// Integer determinant by Bareiss elimination; exact for any size.
pub fn det_bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Inertia (positive, negative, zero counts) of a symmetric rational
/// matrix, computed by exact congruence diagonalization.
pub fn inertia_symmetric(m: &[Vec<Q>]) -> (usize, usize, usize) {
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut n = a.len();
    let (mut pos, mut neg) = (0, 0);
    while n > 0 {
        if let Some(p) = (0..n).find(|&i| !a[i][i].is_zero()) {
            swap_sym(&mut a, p, n - 1);
        } else if let Some((i, j)) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && !a[i][j].is_zero())
        {
            // row_i += row_j, col_i += col_j makes a[i][i] = 2 a[i][j] != 0
            for k in 0..n {
                let v = a[j][k].clone();
                a[i][k] += v;
            }
            for k in 0..n {
                let v = a[k][j].clone();
                a[k][i] += v;
            }
            swap_sym(&mut a, i, n - 1);
        } else {
            break;
        }
        let last = n - 1;
        let pivot = a[last][last].clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in 0..last {
            if a[i][last].is_zero() {
                continue;
            }
            let f = &a[i][last] / &pivot;
            for j in 0..last {
                let v = &f * &a[last][j];
                a[i][j] -= v;
            }
        }
        n -= 1;
        a.truncate(n);
        for row in a.iter_mut() {
            row.truncate(n);
        }
    }
    let zero = m.len() - pos - neg;
    (pos, neg, zero)
}

fn swap_sym(a: &mut [Vec<Q>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Extended gcd: returns (g, x, y) with a x + b y = g >= 0.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
