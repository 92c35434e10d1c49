//! Knot invariants computed from Seifert matrices: the symmetrized
//! Alexander polynomial, `Δ''(1)`, Tristram-Levine signatures and orders of
//! first homology of cyclic branched covers.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::calculus::ThreeManifold;
use crate::exact::{det_bareiss, inertia_symmetric, Q};
use crate::laurent::LaurentPolynomial;
use crate::poly::{QPoly, Sturm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KnotError {
    #[error("Seifert matrix is not square (row {row} has {len} entries, expected {expected})")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("Seifert matrix has odd dimension {0}")]
    OddDimension(usize),
    #[error("det(V - V^T) = {0}, expected +-1")]
    NotUnimodular(BigInt),
    #[error("signature root index m/n = {m}/{n} out of range (need n >= 2, 1 <= m <= n-1)")]
    BadRoot { m: i64, n: i64 },
    #[error("branched cover degree {0} out of range (need n >= 2)")]
    BadCoverDegree(i64),
    #[error("Hermitian form is singular at omega = exp(2 pi i {m}/{n}): omega is a root of the Alexander polynomial")]
    SingularForm { m: i64, n: i64 },
    #[error("unknown knot `{0}`")]
    UnknownKnot(String),
    #[error("knot `{label}`: ambient manifold is not an integral homology sphere ({reason})")]
    BadAmbient { label: String, reason: String },
    #[error("knot catalog: {0}")]
    Catalog(String),
}

/// Integer matrix of a Seifert form, `2g x 2g`, with `det(V - V^T) = ±1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SeifertMatrix {
    entries: Vec<Vec<i64>>,
}

impl SeifertMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, KnotError> {
        let n = entries.len();
        for (row, r) in entries.iter().enumerate() {
            if r.len() != n {
                return Err(KnotError::NotSquare { row, len: r.len(), expected: n });
            }
        }
        if !n.is_multiple_of(2) {
            return Err(KnotError::OddDimension(n));
        }
        let skew: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(entries[i][j] - entries[j][i])).collect())
            .collect();
        let d = det_bareiss(skew);
        if !d.abs().is_one() && n > 0 {
            return Err(KnotError::NotUnimodular(d));
        }
        Ok(SeifertMatrix { entries })
    }

    pub fn unknot() -> Self {
        SeifertMatrix { entries: vec![] }
    }

    pub fn trefoil() -> Self {
        SeifertMatrix { entries: vec![vec![-1, 1], vec![0, -1]] }
    }

    pub fn figure_eight() -> Self {
        SeifertMatrix { entries: vec![vec![1, 1], vec![0, -1]] }
    }

    /// Bidiagonal Seifert matrix of the `(2, 2k+1)` torus knot; `k = 1` is
    /// the trefoil above.
    pub fn torus_2(k: usize) -> Self {
        let n = 2 * k;
        let mut e = vec![vec![0; n]; n];
        for i in 0..n {
            e[i][i] = -1;
            if i + 1 < n {
                e[i][i + 1] = 1;
            }
        }
        SeifertMatrix { entries: e }
    }

    /// Block sum, the Seifert matrix of the connected sum.
    pub fn block_sum(&self, other: &SeifertMatrix) -> SeifertMatrix {
        let (a, b) = (self.dim(), other.dim());
        let mut e = vec![vec![0; a + b]; a + b];
        for i in 0..a {
            e[i][..a].copy_from_slice(&self.entries[i]);
        }
        for i in 0..b {
            e[a + i][a..].copy_from_slice(&other.entries[i]);
        }
        SeifertMatrix { entries: e }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn genus(&self) -> usize {
        self.dim() / 2
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    fn at(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }
}

impl fmt::Debug for SeifertMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

impl<'de> Deserialize<'de> for SeifertMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let entries = Vec::<Vec<i64>>::deserialize(d)?;
        SeifertMatrix::new(entries).map_err(serde::de::Error::custom)
    }
}

/// Symmetrized Alexander polynomial, normalized so that `Δ(1) = 1`.
///
/// Computes `det(sV - s^-1 V^T)` over `Z[s, s^-1]` by fraction-free
/// elimination, checks that odd powers of `s` cancel and substitutes
/// `s = t^(1/2)`.
pub fn alexander_polynomial(v: &SeifertMatrix) -> LaurentPolynomial {
    let n = v.dim();
    let s = |c: i64, e: i64| LaurentPolynomial::monomial(e, BigInt::from(c));
    let m: Vec<Vec<LaurentPolynomial>> = (0..n)
        .map(|i| (0..n).map(|j| &s(v.at(i, j), 1) - &s(v.at(j, i), -1)).collect())
        .collect();
    let det_s = laurent_det(m);
    let delta = det_s
        .halve_exponents()
        .expect("odd powers of s cancel in det(sV - s^-1 V^T)");
    if delta.eval_at_one().is_negative() {
        -&delta
    } else {
        delta
    }
}

fn laurent_det(mut a: Vec<Vec<LaurentPolynomial>>) -> LaurentPolynomial {
    let n = a.len();
    if n == 0 {
        return LaurentPolynomial::one();
    }
    let mut negate = false;
    let mut prev = LaurentPolynomial::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return LaurentPolynomial::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss quotients are exact in Z[s, s^-1]");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// Exact `Δ''(1)`.
pub fn alexander_second_derivative_at_1(v: &SeifertMatrix) -> BigInt {
    alexander_polynomial(v).derivative_at_one(2)
}

/// Tristram-Levine signature at `ω = exp(2πi m/n)`.
///
/// The form `(1-ω)V + (1-ω̄)V^T` is a positive multiple of
/// `H(u) = (V+V^T) - i u (V-V^T)` with `u = cot(πm/n)`, so the signature is
/// read off the real symmetric embedding of `H(u)` at a rational point `u'`
/// that is separated from `u` by no root of `det H`. The point `u` itself is
/// isolated exactly as a root of `Im (u + i)^n`.
pub fn tristram_levine_signature(v: &SeifertMatrix, m: i64, n: i64) -> Result<i64, KnotError> {
    type Memo = Mutex<HashMap<(SeifertMatrix, i64, i64), Result<i64, KnotError>>>;
    static MEMO: OnceLock<Memo> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    let key = (v.clone(), m, n);
    if let Some(r) = memo.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return r.clone();
    }
    let r = signature_uncached(v, m, n);
    memo.lock().unwrap_or_else(|e| e.into_inner()).insert(key, r.clone());
    r
}

fn signature_uncached(v: &SeifertMatrix, m: i64, n: i64) -> Result<i64, KnotError> {
    if n < 2 || m < 1 || m > n - 1 {
        return Err(KnotError::BadRoot { m, n });
    }
    let g2 = v.dim();
    if g2 == 0 {
        return Ok(0);
    }
    let det_poly = {
        let deg = 2 * g2;
        let xs: Vec<Q> = (0..=deg as i64).map(|k| Q::from_integer(BigInt::from(k))).collect();
        let ys: Vec<Q> = xs.iter().map(|u| crate::exact::det_q(&embedding(v, u))).collect();
        QPoly::interpolate(&xs, &ys)
    };
    let cot_poly = cot_root_poly(n);
    let (mut lo, mut hi) = isolate_cot_root(&cot_poly, m, n);
    let p_sturm = Sturm::new(&cot_poly);

    if !det_poly.is_zero() {
        let common = det_poly.gcd(&cot_poly);
        if common.degree().unwrap_or(0) > 0 && Sturm::new(&common).count_roots(&lo, &hi) > 0 {
            return Err(KnotError::SingularForm { m, n });
        }
    } else {
        return Err(KnotError::SingularForm { m, n });
    }
    let det_sturm = Sturm::new(&det_poly.squarefree());
    while det_sturm.count_roots(&lo, &hi) > 0 {
        let mid = (&lo + &hi) / Q::from_integer(BigInt::from(2));
        if p_sturm.count_roots(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (pos, neg, zero) = inertia_symmetric(&embedding(v, &hi));
    debug_assert_eq!(zero, 0);
    let sig = pos as i64 - neg as i64;
    debug_assert!(sig % 2 == 0);
    Ok(sig / 2)
}

/// Real symmetric `2N x 2N` embedding `[[S, uK], [-uK, S]]` of the
/// Hermitian matrix `S - i u K`, where `S = V + V^T`, `K = V - V^T`.
fn embedding(v: &SeifertMatrix, u: &Q) -> Vec<Vec<Q>> {
    let n = v.dim();
    let mut m = vec![vec![Q::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let s = Q::from_integer(BigInt::from(v.at(i, j) + v.at(j, i)));
            let k = Q::from_integer(BigInt::from(v.at(i, j) - v.at(j, i))) * u;
            m[i][j] = s.clone();
            m[n + i][n + j] = s;
            m[i][n + j] = k.clone();
            m[n + i][j] = -k;
        }
    }
    m
}

/// `Im (u + i)^n`, whose roots are `cot(πk/n)` for `k = 1..n-1`.
fn cot_root_poly(n: i64) -> QPoly {
    let n = n as usize;
    let mut c = vec![Q::zero(); n + 1];
    let mut binom = BigInt::one();
    for k in 0..=n {
        if k % 2 == 1 {
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            c[n - k] = Q::from_integer(&binom * BigInt::from(sign));
        }
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    QPoly::new(c)
}

/// Rational interval `(lo, hi]` containing `cot(πm/n)` and no other root of
/// `p`. The roots are ordered decreasingly in `k`, so the `m`-th largest is
/// the one wanted; the enclosure is verified with Sturm counts.
fn isolate_cot_root(p: &QPoly, m: i64, n: i64) -> (Q, Q) {
    let sturm = Sturm::new(p);
    let bound = Q::from_integer(BigInt::from(4 * n * n + 1));
    let pi = std::f64::consts::PI;
    let approx = 1.0 / (pi * m as f64 / n as f64).tan();
    let gap = (1..n)
        .map(|k| 1.0 / (pi * k as f64 / n as f64).tan())
        .collect::<Vec<_>>()
        .windows(2)
        .map(|w| (w[0] - w[1]).abs())
        .fold(f64::INFINITY, f64::min);
    let mut delta = if gap.is_finite() { gap / 4.0 } else { 1.0 };
    loop {
        let lo = coarse_dyadic(approx - delta, delta);
        let hi = coarse_dyadic(approx + delta, delta);
        if sturm.count_roots(&lo, &hi) == 1 && sturm.count_roots(&hi, &bound) == (m - 1) as usize {
            return (lo, hi);
        }
        delta /= 2.0;
        assert!(delta > 1e-300, "failed to isolate cot(pi {m}/{n})");
    }
}

/// A dyadic rational within `delta / 8` of `x`, with the smallest
/// denominator that achieves it. Keeps Sturm evaluations cheap.
fn coarse_dyadic(x: f64, delta: f64) -> Q {
    let mut k = 0u32;
    while (0.5f64).powi(k as i32) > delta / 8.0 {
        k += 1;
    }
    let den = BigInt::one() << k;
    let num = BigInt::from((x * 2f64.powi(k as i32)).round() as i64);
    Q::new(num, den)
}

/// Order of `H_1` of the `n`-fold cyclic branched cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverOrder {
    Finite(BigInt),
    Infinite,
}

impl CoverOrder {
    pub fn is_finite(&self) -> bool {
        matches!(self, CoverOrder::Finite(_))
    }
}

impl fmt::Display for CoverOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverOrder::Finite(k) => write!(f, "{k}"),
            CoverOrder::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for CoverOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `|H_1(Σ_n)| = |Res(Δ, 1 + t + ... + t^{n-1})|`, or infinite when the
/// resultant vanishes.
pub fn branched_cover_h1_order(v: &SeifertMatrix, n: i64) -> Result<CoverOrder, KnotError> {
    if n < 2 {
        return Err(KnotError::BadCoverDegree(n));
    }
    let (delta, _) = alexander_polynomial(v).to_poly();
    let phi = QPoly::new(vec![Q::one(); n as usize]);
    let res: BigRational = delta.resultant(&phi);
    debug_assert!(res.is_integer());
    let r = res.to_integer().abs();
    Ok(if r.is_zero() {
        CoverOrder::Infinite
    } else {
        CoverOrder::Finite(r)
    })
}

pub fn is_qhs_branched_cover(v: &SeifertMatrix, n: i64) -> Result<bool, KnotError> {
    Ok(branched_cover_h1_order(v, n)?.is_finite())
}

/// A knot in an integral homology sphere, described by its Seifert matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotInSphere {
    pub label: String,
    pub seifert: SeifertMatrix,
    pub ambient: Arc<ThreeManifold>,
}

impl KnotInSphere {
    pub fn new(
        label: impl Into<String>,
        seifert: SeifertMatrix,
        ambient: ThreeManifold,
    ) -> Result<Self, KnotError> {
        let label = label.into();
        if let Err(e) = crate::calculus::casson(&ambient) {
            return Err(KnotError::BadAmbient { label, reason: e.to_string() });
        }
        Ok(KnotInSphere { label, seifert, ambient: Arc::new(ambient) })
    }

    pub fn in_s3(label: impl Into<String>, seifert: SeifertMatrix) -> Self {
        KnotInSphere { label: label.into(), seifert, ambient: Arc::new(ThreeManifold::S3) }
    }

    pub fn alexander(&self) -> LaurentPolynomial {
        alexander_polynomial(&self.seifert)
    }

    pub fn ddelta(&self) -> BigInt {
        alexander_second_derivative_at_1(&self.seifert)
    }
}

/// One entry of a knot catalog file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub label: String,
    pub seifert: SeifertMatrix,
}

/// Built-in knots plus any loaded from a catalog file.
#[derive(Debug, Clone, Default)]
pub struct KnotCatalog {
    extra: Vec<CatalogEntry>,
}

impl KnotCatalog {
    pub fn builtin() -> Self {
        Self::default()
    }

    /// Parses a catalog file: a JSON array of `{label, seifert}` objects.
    pub fn from_json(text: &str) -> Result<Self, KnotError> {
        let entries: Vec<CatalogEntry> =
            serde_json::from_str(text).map_err(|e| KnotError::Catalog(e.to_string()))?;
        let mut cat = Self::default();
        for e in entries {
            cat.insert(e)?;
        }
        Ok(cat)
    }

    pub fn insert(&mut self, entry: CatalogEntry) -> Result<(), KnotError> {
        if self.extra.iter().any(|e| e.label == entry.label) {
            return Err(KnotError::Catalog(format!("duplicate label `{}`", entry.label)));
        }
        self.extra.push(entry);
        Ok(())
    }

    /// Labels of the knots always available: unknot, trefoil, figure-eight
    /// and `T(2,5)`, `T(2,7)`. Any `T(2,N)` with odd `N >= 3` also resolves.
    pub fn builtin_labels() -> Vec<&'static str> {
        vec!["unknot", "trefoil", "figure-eight", "T(2,5)", "T(2,7)"]
    }

    pub fn labels(&self) -> Vec<String> {
        Self::builtin_labels()
            .into_iter()
            .map(String::from)
            .chain(self.extra.iter().map(|e| e.label.clone()))
            .collect()
    }

    pub fn get(&self, label: &str) -> Result<SeifertMatrix, KnotError> {
        if let Some(e) = self.extra.iter().find(|e| e.label == label) {
            return Ok(e.seifert.clone());
        }
        match label {
            "unknot" | "0_1" => Ok(SeifertMatrix::unknot()),
            "trefoil" | "3_1" => Ok(SeifertMatrix::trefoil()),
            "figure-eight" | "figure_eight" | "4_1" => Ok(SeifertMatrix::figure_eight()),
            _ => parse_torus_label(label)
                .map(SeifertMatrix::torus_2)
                .ok_or_else(|| KnotError::UnknownKnot(label.to_string())),
        }
    }

    pub fn knot_in_s3(&self, label: &str) -> Result<KnotInSphere, KnotError> {
        Ok(KnotInSphere::in_s3(label, self.get(label)?))
    }
}

fn parse_torus_label(label: &str) -> Option<usize> {
    let inner = label.strip_prefix("T(2,")?.strip_suffix(')')?;
    let n: usize = inner.trim().parse().ok()?;
    (n >= 3 && n.is_odd()).then_some((n - 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(t: &[(i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(t.iter().copied())
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(
            SeifertMatrix::new(vec![vec![1, 0], vec![0]]),
            Err(KnotError::NotSquare { .. })
        ));
        assert!(matches!(
            SeifertMatrix::new(vec![vec![1]]),
            Err(KnotError::OddDimension(1))
        ));
        assert!(matches!(
            SeifertMatrix::new(vec![vec![1, 2], vec![0, 1]]),
            Err(KnotError::NotUnimodular(_))
        ));
        assert!(SeifertMatrix::new(vec![]).is_ok());
        assert!(SeifertMatrix::new(vec![vec![-1, 1], vec![0, -1]]).is_ok());
    }

    #[test]
    fn alexander_examples() {
        assert_eq!(alexander_polynomial(&SeifertMatrix::unknot()), LaurentPolynomial::one());
        assert_eq!(
            alexander_polynomial(&SeifertMatrix::trefoil()),
            lp(&[(1, 1), (0, -1), (-1, 1)])
        );
        assert_eq!(
            alexander_polynomial(&SeifertMatrix::figure_eight()),
            lp(&[(1, -1), (0, 3), (-1, -1)])
        );
        assert_eq!(
            alexander_polynomial(&SeifertMatrix::torus_2(2)),
            lp(&[(2, 1), (1, -1), (0, 1), (-1, -1), (-2, 1)])
        );
    }

    #[test]
    fn ddelta_examples() {
        assert_eq!(alexander_second_derivative_at_1(&SeifertMatrix::unknot()), BigInt::zero());
        assert_eq!(alexander_second_derivative_at_1(&SeifertMatrix::trefoil()), BigInt::from(2));
        assert_eq!(alexander_second_derivative_at_1(&SeifertMatrix::figure_eight()), BigInt::from(-2));
        assert_eq!(alexander_second_derivative_at_1(&SeifertMatrix::torus_2(2)), BigInt::from(6));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(tristram_levine_signature(&SeifertMatrix::unknot(), 1, 5), Ok(0));
        assert_eq!(tristram_levine_signature(&SeifertMatrix::trefoil(), 1, 2), Ok(-2));
        assert_eq!(tristram_levine_signature(&SeifertMatrix::trefoil(), 1, 3), Ok(-2));
        assert_eq!(tristram_levine_signature(&SeifertMatrix::trefoil(), 2, 3), Ok(-2));
        assert_eq!(tristram_levine_signature(&SeifertMatrix::figure_eight(), 1, 2), Ok(0));
        assert_eq!(tristram_levine_signature(&SeifertMatrix::torus_2(2), 1, 2), Ok(-4));
    }

    #[test]
    fn signature_jumps_on_trefoil_roots() {
        // trefoil roots are exp(±iπ/3); below that angle the form is zero-signature
        assert_eq!(tristram_levine_signature(&SeifertMatrix::trefoil(), 1, 12), Ok(0));
        assert_eq!(
            tristram_levine_signature(&SeifertMatrix::trefoil(), 1, 6),
            Err(KnotError::SingularForm { m: 1, n: 6 })
        );
        assert_eq!(
            tristram_levine_signature(&SeifertMatrix::trefoil(), 2, 12),
            Err(KnotError::SingularForm { m: 2, n: 12 })
        );
        assert_eq!(tristram_levine_signature(&SeifertMatrix::trefoil(), 3, 12), Ok(-2));
    }

    #[test]
    fn signature_rejects_bad_roots() {
        let t = SeifertMatrix::trefoil();
        assert!(matches!(tristram_levine_signature(&t, 0, 3), Err(KnotError::BadRoot { .. })));
        assert!(matches!(tristram_levine_signature(&t, 3, 3), Err(KnotError::BadRoot { .. })));
        assert!(matches!(tristram_levine_signature(&t, 1, 1), Err(KnotError::BadRoot { .. })));
    }

    #[test]
    fn cover_examples() {
        let fin = |k: i64| CoverOrder::Finite(BigInt::from(k));
        assert_eq!(branched_cover_h1_order(&SeifertMatrix::unknot(), 5), Ok(fin(1)));
        assert_eq!(branched_cover_h1_order(&SeifertMatrix::trefoil(), 2), Ok(fin(3)));
        assert_eq!(branched_cover_h1_order(&SeifertMatrix::figure_eight(), 2), Ok(fin(5)));
        assert!(!branched_cover_h1_order(&SeifertMatrix::trefoil(), 6).unwrap().is_finite());
        assert_eq!(is_qhs_branched_cover(&SeifertMatrix::trefoil(), 2), Ok(true));
        assert_eq!(is_qhs_branched_cover(&SeifertMatrix::trefoil(), 6), Ok(false));
        assert_eq!(is_qhs_branched_cover(&SeifertMatrix::unknot(), 7), Ok(true));
        assert!(matches!(
            branched_cover_h1_order(&SeifertMatrix::trefoil(), 1),
            Err(KnotError::BadCoverDegree(1))
        ));
    }

    #[test]
    fn cot_polynomial_roots() {
        for n in 2..9 {
            let p = cot_root_poly(n);
            assert_eq!(p.degree(), Some(n as usize - 1));
            for k in 1..n {
                let u = 1.0 / (std::f64::consts::PI * k as f64 / n as f64).tan();
                let scale = (1.0 + u.abs()).powi(n as i32);
                assert!(p.eval_f64(u).abs() < 1e-9 * scale, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn catalog_lookup() {
        let cat = KnotCatalog::builtin();
        assert_eq!(cat.get("T(2,3)").unwrap(), SeifertMatrix::trefoil());
        assert_eq!(cat.get("T(2,7)").unwrap().dim(), 6);
        assert!(matches!(cat.get("T(2,4)"), Err(KnotError::UnknownKnot(_))));
        assert!(matches!(cat.get("nope"), Err(KnotError::UnknownKnot(_))));
    }

    #[test]
    fn catalog_file_validation() {
        let ok = r#"[{"label": "k", "seifert": [[-1, 1], [0, -1]]}]"#;
        let cat = KnotCatalog::from_json(ok).unwrap();
        assert_eq!(cat.get("k").unwrap(), SeifertMatrix::trefoil());
        let bad = r#"[{"label": "k", "seifert": [[1, 2], [0, 1]]}]"#;
        assert!(matches!(KnotCatalog::from_json(bad), Err(KnotError::Catalog(_))));
        let dup = r#"[{"label": "k", "seifert": []}, {"label": "k", "seifert": []}]"#;
        assert!(matches!(KnotCatalog::from_json(dup), Err(KnotError::Catalog(_))));
    }
}
