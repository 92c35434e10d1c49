//! Dense univariate polynomials over the rationals, with the pieces needed
//! for exact real-root bookkeeping: division, gcd, resultants and Sturm
//! sequences.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{det_q, fmt_q, Q};

/// Coefficients stored low degree first; never has a trailing zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Q::zero(); k + 1];
        c[k] = Q::one();
        QPoly { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        self.scale(&(Q::one() / l))
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let lead = d.leading();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![Q::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let v = &c * dc;
                    r[k + j] -= v;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free part `p / gcd(p, p')`, made monic.
    pub fn squarefree(&self) -> QPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, other: &QPoly) -> Q {
        let (m, n) = match (self.degree(), other.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return Q::zero(),
        };
        if m == 0 && n == 0 {
            return Q::one();
        }
        let size = m + n;
        let mut rows = Vec::with_capacity(size);
        for i in 0..n {
            let mut row = vec![Q::zero(); size];
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![Q::zero(); size];
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        det_q(&rows)
    }

    /// Lagrange interpolation through the points `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[Q], ys: &[Q]) -> QPoly {
        assert_eq!(xs.len(), ys.len());
        let mut acc = QPoly::zero();
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = QPoly::constant(yi.clone());
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    let factor = QPoly::new(vec![-xj.clone(), Q::one()]);
                    basis = &basis * &factor;
                    basis = basis.scale(&(Q::one() / (xi - xj)));
                }
            }
            acc = &acc + &basis;
        }
        acc
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => fmt_q(c),
                1 => format!("{}*x", fmt_q(c)),
                _ => format!("{}*x^{k}", fmt_q(c)),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

/// Sturm sequence of a polynomial, used to count distinct real roots in
/// half-open intervals `(a, b]`.
pub struct Sturm {
    seq: Vec<QPoly>,
}

impl Sturm {
    pub fn new(p: &QPoly) -> Self {
        let mut seq = vec![p.clone()];
        if p.degree().unwrap_or(0) == 0 {
            return Sturm { seq };
        }
        seq.push(p.derivative());
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        Sturm { seq }
    }

    fn sign_changes(&self, x: &Q) -> usize {
        let mut changes = 0;
        let mut last = 0i8;
        for p in &self.seq {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots(&self, a: &Q, b: &Q) -> usize {
        if self.seq[0].degree().unwrap_or(0) == 0 {
            return 0;
        }
        let (va, vb) = (self.sign_changes(a), self.sign_changes(b));
        va.saturating_sub(vb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q_frac, q_int};

    #[test]
    fn division_and_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = QPoly::from_ints(&[-2, 1, 1]);
        let b = QPoly::from_ints(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), QPoly::from_ints(&[-1, 1]));
        let (q, r) = a.div_rem(&QPoly::from_ints(&[-1, 1]));
        assert_eq!(q, QPoly::from_ints(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(x - 2, x^2 + 1) = 2^2 + 1
        let a = QPoly::from_ints(&[-2, 1]);
        let b = QPoly::from_ints(&[1, 0, 1]);
        assert_eq!(a.resultant(&b), q_int(5));
        let c = QPoly::from_ints(&[-1, 0, 1]);
        assert_eq!(QPoly::from_ints(&[-1, 1]).resultant(&c), q_int(0));
    }

    #[test]
    fn sturm_counts() {
        // (x-1)(x-2)(x-3)
        let p = &(&QPoly::from_ints(&[-1, 1]) * &QPoly::from_ints(&[-2, 1])) * &QPoly::from_ints(&[-3, 1]);
        let s = Sturm::new(&p);
        assert_eq!(s.count_roots(&q_int(0), &q_int(10)), 3);
        assert_eq!(s.count_roots(&q_frac(3, 2), &q_frac(5, 2)), 1);
        assert_eq!(s.count_roots(&q_int(1), &q_int(2)), 1);
        let none = Sturm::new(&QPoly::from_ints(&[1, 0, 1]));
        assert_eq!(none.count_roots(&q_int(-100), &q_int(100)), 0);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = QPoly::from_ints(&[3, 0, -2, 1]);
        let xs: Vec<Q> = (0..4).map(q_int).collect();
        let ys: Vec<Q> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(QPoly::interpolate(&xs, &ys), p);
    }
}
