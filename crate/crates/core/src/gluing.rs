//! 3x3 integer matrices acting on `H_1(T^3)` in the ordered basis
//! `(μ, λ, γ)`.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exact::ext_gcd;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GluingMatrix(pub [[i64; 3]; 3]);

/// Entries of a framing-normalized gluing matrix
/// `[[a, b, 0], [c, d, 0], [p, q, 1]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub p: i64,
    pub q: i64,
}

impl GluingMatrix {
    pub const IDENTITY: GluingMatrix = GluingMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);

    pub fn from_rows(rows: &[Vec<i64>]) -> Option<Self> {
        if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
            return None;
        }
        let mut m = [[0; 3]; 3];
        for i in 0..3 {
            m[i].copy_from_slice(&rows[i]);
        }
        Some(GluingMatrix(m))
    }

    /// The `(p, q)`-surgery map `[[p, r, 0], [q, s, 0], [0, 0, 1]]` with
    /// `ps - qr = 1`; `None` unless `gcd(p, q) = 1`.
    pub fn surgery(p: i64, q: i64) -> Option<Self> {
        match (p, q) {
            (1 | -1, _) => return Some(GluingMatrix([[p, 0, 0], [q, p, 0], [0, 0, 1]])),
            (0, 1 | -1) => return Some(GluingMatrix([[0, -q, 0], [q, 0, 0], [0, 0, 1]])),
            _ => {}
        }
        let (g, x, y) = ext_gcd(&BigInt::from(p), &BigInt::from(q));
        if g != BigInt::from(1) {
            return None;
        }
        let s: i64 = x.try_into().ok()?;
        let r: i64 = (-y).try_into().ok()?;
        Some(GluingMatrix([[p, r, 0], [q, s, 0], [0, 0, 1]]))
    }

    /// Meridian-longitude exchange used for torus fiber sums.
    pub fn fiber_sum() -> Self {
        GluingMatrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    }

    /// Gluing matrix of the mapping torus of a Dehn twist along a
    /// `(p, q)` curve on the splicing torus.
    pub fn dehn_twist(p: i64, q: i64) -> Self {
        GluingMatrix([[0, 1, 0], [1, 0, 0], [-p, -q, 1]])
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.0[i][j]
    }

    pub fn det(&self) -> i64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        GluingMatrix(std::array::from_fn(|i| std::array::from_fn(|j| m[j][i])))
    }

    pub fn mul(&self, rhs: &GluingMatrix) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        GluingMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum())
        }))
    }

    /// Integer inverse; `None` unless `|det| = 1`.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.abs() != 1 {
            return None;
        }
        let m = &self.0;
        let cof = |i: usize, j: usize| -> i64 {
            let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
            let c: Vec<usize> = (0..3).filter(|&x| x != j).collect();
            let minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]];
            if (i + j).is_multiple_of(2) {
                minor
            } else {
                -minor
            }
        };
        Some(GluingMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| cof(j, i) * d)
        })))
    }

    /// The matrix by which holonomy-coordinate vectors (classes in `H^1`)
    /// transform: `(A^-1)^T`.
    pub fn coordinate_action(&self) -> Option<Self> {
        Some(self.inverse()?.transpose())
    }

    pub fn apply(&self, v: [i64; 3]) -> [i64; 3] {
        std::array::from_fn(|i| (0..3).map(|k| self.0[i][k] * v[k]).sum())
    }

    /// Entries named as in the normalized form; `None` if the third column
    /// is not `(0, 0, 1)^T`.
    pub fn normal_form(&self) -> Option<NormalForm> {
        let m = &self.0;
        if m[0][2] != 0 || m[1][2] != 0 || m[2][2] != 1 {
            return None;
        }
        Some(NormalForm { a: m[0][0], b: m[0][1], c: m[1][0], d: m[1][1], p: m[2][0], q: m[2][1] })
    }
}

impl fmt::Debug for GluingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for GluingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .0
            .iter()
            .map(|r| format!("[{}, {}, {}]", r[0], r[1], r[2]))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
