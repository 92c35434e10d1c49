//! The character variety of `T^3` as the cube `(-1/2, 1/2]^3` modulo the
//! involution `v -> -v`, with gluing-matrix actions, the distinguished
//! planes of the surgery argument and exact signed intersection counts of
//! piecewise-linear curves against them.
//!
//! A [`PlaneImage`] stands for the patch
//! `{ b + s u + t v : s in [0, 1/2], t in [0, 1) }` taken mod `Z^3`, where
//! `b` is the basepoint and `u`, `v` the spanning vectors. For the built-in
//! planes this patch is a fundamental domain of the involution acting on
//! the corresponding 2-dimensional subtorus.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exact::{ext_gcd, floor_q, fmt_q, q_frac, Q};
use crate::gluing::GluingMatrix;

pub type Vec3 = [Q; 3];
pub type IVec3 = [i64; 3];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PillowError {
    #[error("gluing matrix {0} is not unimodular")]
    NonUnimodular(GluingMatrix),
    #[error("plane `{label}` is not a pillowcase in the quotient: {reason}")]
    NotInvariant { label: String, reason: String },
    #[error("curve is not transverse to `{plane}` at {location}: {reason}")]
    NonTransverse { plane: String, location: String, reason: String },
    #[error("curve passes through the central class {0}")]
    ThroughCentralClass(String),
    #[error("invalid plane `{label}`: {reason}")]
    InvalidPlane { label: String, reason: String },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
}

/// Reduces a rational into `(-1/2, 1/2]`.
pub fn wrap(x: &Q) -> Q {
    // x - ceil(x - 1/2)
    let shifted = x - q_frac(1, 2);
    let c = -floor_q(&-shifted);
    x - Q::from_integer(c)
}

fn neg3(v: &Vec3) -> Vec3 {
    [-&v[0], -&v[1], -&v[2]]
}

fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn dot_qi(a: &Vec3, n: &IVec3) -> Q {
    (0..3).map(|i| &a[i] * Q::from_integer(BigInt::from(n[i]))).sum()
}

fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn ivec_q(v: &IVec3) -> Vec3 {
    [qi(v[0]), qi(v[1]), qi(v[2])]
}

fn cross_i(a: &IVec3, b: &IVec3) -> IVec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn cross_q(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot_q(a: &Vec3, b: &Vec3) -> Q {
    (0..3).map(|i| &a[i] * &b[i]).sum()
}

fn dot_i(a: &IVec3, b: &IVec3) -> i64 {
    (0..3).map(|i| a[i] * b[i]).sum()
}

fn content(v: &IVec3) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

fn fmt_vec(v: &Vec3) -> String {
    format!("({}, {}, {})", fmt_q(&v[0]), fmt_q(&v[1]), fmt_q(&v[2]))
}

/// A point of the fundamental cube; every coordinate lies in `(-1/2, 1/2]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubePoint {
    pub x: Q,
    pub y: Q,
    pub z: Q,
}

impl CubePoint {
    pub fn wrapped(v: &Vec3) -> Self {
        CubePoint { x: wrap(&v[0]), y: wrap(&v[1]), z: wrap(&v[2]) }
    }

    pub fn coords(&self) -> Vec3 {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }
}

impl fmt::Debug for CubePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_vec(&self.coords()))
    }
}

impl fmt::Display for CubePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_vec(&self.coords()))
    }
}

impl Serialize for CubePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [fmt_q(&self.x), fmt_q(&self.y), fmt_q(&self.z)].serialize(s)
    }
}

/// A point of `χ(T^3)`: the lexicographically larger of the two wrapped
/// lifts `v`, `-v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ChiPoint {
    pub canonical: CubePoint,
}

impl ChiPoint {
    pub fn is_central(&self) -> bool {
        CubePoint::wrapped(&neg3(&self.canonical.coords())) == self.canonical
    }
}

impl fmt::Display for ChiPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.canonical)
    }
}

pub fn canonicalize(v: &Vec3) -> ChiPoint {
    let a = CubePoint::wrapped(v);
    let b = CubePoint::wrapped(&neg3(v));
    ChiPoint { canonical: a.max(b) }
}

/// The eight points with coordinates in `{0, 1/2}^3`.
pub fn central_classes() -> BTreeSet<ChiPoint> {
    let h = [Q::zero(), q_frac(1, 2)];
    let mut out = BTreeSet::new();
    for x in &h {
        for y in &h {
            for z in &h {
                out.insert(canonicalize(&[x.clone(), y.clone(), z.clone()]));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneImage {
    #[serde(with = "vec3_strings")]
    pub basepoint: Vec3,
    pub spanning: [IVec3; 2],
    pub normal: IVec3,
    pub label: String,
}

mod vec3_strings {
    use super::Vec3;
    use crate::exact::{fmt_q, value_to_q};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Vec3, s: S) -> Result<S::Ok, S::Error> {
        [fmt_q(&v[0]), fmt_q(&v[1]), fmt_q(&v[2])].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec3, D::Error> {
        let raw: [serde_json::Value; 3] = Deserialize::deserialize(d)?;
        let conv = |v: &serde_json::Value| value_to_q(v).map_err(serde::de::Error::custom);
        Ok([conv(&raw[0])?, conv(&raw[1])?, conv(&raw[2])?])
    }
}

/// Patch coordinates of a point on the plane's subtorus.
struct PatchCoords {
    s: Q,
}

impl PlaneImage {
    pub fn new(label: impl Into<String>, basepoint: Vec3, spanning: [IVec3; 2], normal: IVec3) -> Result<Self, PillowError> {
        let p = PlaneImage { basepoint, spanning, normal, label: label.into() };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), PillowError> {
        let bad = |reason: &str| PillowError::InvalidPlane { label: self.label.clone(), reason: reason.into() };
        let [u, v] = &self.spanning;
        let w = cross_i(u, v);
        if w == [0, 0, 0] {
            return Err(bad("spanning vectors are linearly dependent"));
        }
        if dot_i(&self.normal, u) != 0 || dot_i(&self.normal, v) != 0 {
            return Err(bad("normal is not orthogonal to the spanning vectors"));
        }
        if content(&w) != 1 {
            return Err(bad("spanning vectors do not span a primitive sublattice"));
        }
        Ok(())
    }

    /// `x = 0`, co-oriented by `+x`.
    pub fn p_n() -> Self {
        PlaneImage { basepoint: [Q::zero(), Q::zero(), q_frac(1, 2)], spanning: [[0, 1, 0], [0, 0, 1]], normal: [1, 0, 0], label: "P_N".into() }
    }

    /// `y = 0`, co-oriented by `+y`.
    pub fn p_m() -> Self {
        PlaneImage { basepoint: [q_frac(1, 2), Q::zero(), Q::zero()], spanning: [[1, 0, 0], [0, 0, 1]], normal: [0, 1, 0], label: "P_M".into() }
    }

    /// `y = 1/2`, co-oriented by `+y`.
    pub fn p_0() -> Self {
        PlaneImage { basepoint: [q_frac(1, 2), q_frac(1, 2), Q::zero()], spanning: [[1, 0, 0], [0, 0, 1]], normal: [0, 1, 0], label: "P_0".into() }
    }

    /// `{(x, -x, z)}`, co-oriented by `+(x + y)`.
    pub fn p_1() -> Self {
        PlaneImage { basepoint: [q_frac(1, 2), q_frac(1, 2), Q::zero()], spanning: [[1, -1, 0], [0, 0, 1]], normal: [1, 1, 0], label: "P_1".into() }
    }

    pub fn builtin(label: &str) -> Option<Self> {
        match label {
            "P_N" => Some(Self::p_n()),
            "P_M" => Some(Self::p_m()),
            "P_0" => Some(Self::p_0()),
            "P_1" => Some(Self::p_1()),
            _ => None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Primitive normal of the subtorus, oriented like `normal`.
    fn unit_normal(&self) -> IVec3 {
        let w = cross_i(&self.spanning[0], &self.spanning[1]);
        if dot_i(&w, &self.normal) < 0 {
            [-w[0], -w[1], -w[2]]
        } else {
            w
        }
    }

    /// Offset `n . b` of the subtorus along its primitive normal, in `[0, 1)`.
    fn offset(&self) -> Q {
        let o = dot_qi(&self.basepoint, &self.unit_normal());
        &o - Q::from_integer(floor_q(&o))
    }

    /// An integer vector `w` with `n . w = 1`.
    fn transversal(n: &IVec3) -> IVec3 {
        let (g01, x0, x1) = ext_gcd(&BigInt::from(n[0]), &BigInt::from(n[1]));
        let (g, y01, y2) = ext_gcd(&g01, &BigInt::from(n[2]));
        debug_assert!(g.is_one());
        let to = |b: BigInt| -> i64 { b.try_into().expect("small transversal") };
        [to(&x0 * &y01), to(&x1 * &y01), to(y2)]
    }

    /// Patch coordinates of `x`, or `None` if `x` is not on the subtorus.
    fn patch_coords(&self, x: &Vec3) -> Option<PatchCoords> {
        let n = self.unit_normal();
        let d = sub3(x, &self.basepoint);
        let j = dot_qi(&d, &n);
        if !j.is_integer() {
            return None;
        }
        let w3 = ivec_q(&Self::transversal(&n));
        let j = j.to_integer();
        let jq = Q::from_integer(j);
        let y: Vec3 = std::array::from_fn(|i| &d[i] - &jq * &w3[i]);
        let u = ivec_q(&self.spanning[0]);
        let v = ivec_q(&self.spanning[1]);
        let uv = cross_q(&u, &v);
        let norm2 = dot_q(&uv, &uv);
        let s = dot_q(&cross_q(&y, &v), &uv) / &norm2;
        Some(PatchCoords { s: &s - Q::from_integer(floor_q(&s)) })
    }

    /// Whether `x` lies on the patch; `Err` if it lies on a patch edge.
    fn patch_membership(&self, x: &Vec3) -> Result<bool, &'static str> {
        let Some(pc) = self.patch_coords(x) else { return Ok(false) };
        let half = q_frac(1, 2);
        if pc.s.is_zero() || pc.s == half {
            return Err("crossing lies on a boundary edge of the plane patch");
        }
        Ok(pc.s < half)
    }

    pub fn contains(&self, x: &Vec3) -> bool {
        self.patch_coords(x).is_some_and(|pc| pc.s <= q_frac(1, 2))
    }

    /// Image under `v -> -v`.
    pub fn negated(&self) -> Self {
        let [u, v] = &self.spanning;
        PlaneImage {
            basepoint: neg3(&self.basepoint),
            spanning: [[-u[0], -u[1], -u[2]], [-v[0], -v[1], -v[2]]],
            normal: self.normal,
            label: format!("-{}", self.label),
        }
    }

    fn same_subtorus(&self, other: &PlaneImage) -> bool {
        let (a, b) = (self.unit_normal(), other.unit_normal());
        let parallel = a == b || a == [-b[0], -b[1], -b[2]];
        parallel && self.contains_subtorus_point(other)
    }

    fn contains_subtorus_point(&self, other: &PlaneImage) -> bool {
        dot_qi(&sub3(&other.basepoint, &self.basepoint), &self.unit_normal()).is_integer()
    }

    /// Equality of the two patches as subsets of `T^3`.
    pub fn set_eq(&self, other: &PlaneImage) -> bool {
        if !self.same_subtorus(other) {
            return false;
        }
        // Express other's s-coordinate along our lattice: s = g11 s' + g12 t' + sigma.
        let u2 = ivec_q(&other.spanning[0]);
        let v2 = ivec_q(&other.spanning[1]);
        let zero = self.basepoint.clone();
        let probe = |w: &Vec3| -> Q {
            let pt: Vec3 = std::array::from_fn(|i| &zero[i] + &w[i]);
            self.raw_s(&pt)
        };
        let g11 = probe(&u2);
        let g12 = probe(&v2);
        let sigma = self.raw_s(&other.basepoint);
        let frac = |q: &Q| q - Q::from_integer(floor_q(q));
        if !g12.is_zero() {
            return false;
        }
        if g11 == Q::one() {
            frac(&sigma).is_zero()
        } else if g11 == -Q::one() {
            frac(&sigma) == q_frac(1, 2)
        } else {
            false
        }
    }

    /// Unreduced `s` coordinate of a point on the subtorus, relative to the
    /// basepoint, with the same lattice choice as [`Self::patch_coords`].
    fn raw_s(&self, x: &Vec3) -> Q {
        let n = self.unit_normal();
        let d = sub3(x, &self.basepoint);
        let j = dot_qi(&d, &n);
        let w3 = ivec_q(&Self::transversal(&n));
        let y: Vec3 = std::array::from_fn(|i| &d[i] - &j * &w3[i]);
        let u = ivec_q(&self.spanning[0]);
        let v = ivec_q(&self.spanning[1]);
        let uv = cross_q(&u, &v);
        dot_q(&cross_q(&y, &v), &uv) / dot_q(&uv, &uv)
    }

    /// The subtorus is carried to itself by `v -> -v`.
    pub fn subtorus_invariant(&self) -> bool {
        self.same_subtorus(&self.negated())
    }

    /// The patch and its negative tile the subtorus.
    pub fn is_fundamental_domain(&self) -> bool {
        self.subtorus_invariant() && {
            let s = self.raw_s(&neg3(&self.basepoint));
            (&s - Q::from_integer(floor_q(&s))).is_zero()
        }
    }

    /// Equality of the images in `χ(T^3)`.
    pub fn quotient_eq(&self, other: &PlaneImage) -> bool {
        self.set_eq(other)
            || self.set_eq(&other.negated())
            || (self.same_subtorus(other) && self.is_fundamental_domain() && other.is_fundamental_domain())
    }
}

impl fmt::Display for PlaneImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [u, v] = &self.spanning;
        write!(f, "{}: {} + s{:?} + t{:?}, normal {:?}", self.label, fmt_vec(&self.basepoint), u, v, self.normal)
    }
}

/// The four central classes on a coordinate wall `x_i = 0` or `x_i = 1/2`.
pub fn pillowcase_singular_points(plane: &PlaneImage) -> Result<BTreeSet<ChiPoint>, PillowError> {
    let not_inv = |reason: String| PillowError::NotInvariant { label: plane.label.clone(), reason };
    plane.validate()?;
    let n = plane.unit_normal();
    let axis = match n.iter().filter(|c| **c != 0).count() {
        1 => n.iter().position(|c| *c != 0).unwrap_or(0),
        _ => {
            return Err(not_inv(format!(
                "normal {:?} is not a coordinate axis; the quotient of the patch is a cylinder, not a face of the cube",
                plane.normal
            )))
        }
    };
    let off = plane.offset();
    if !(off.is_zero() || off == q_frac(1, 2)) {
        return Err(not_inv(format!("offset {} is not 0 or 1/2, so the plane is not involution-invariant", fmt_q(&off))));
    }
    let wall = if off.is_zero() { Q::zero() } else { q_frac(1, 2) };
    Ok(central_classes()
        .into_iter()
        .filter(|c| wrap(&c.canonical.coords()[axis]) == wall)
        .collect())
}

/// Either kind of object a gluing matrix can act on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Glueable {
    Point(ChiPoint),
    Plane(PlaneImage),
}

fn act(m: &GluingMatrix, v: &Vec3) -> Vec3 {
    std::array::from_fn(|i| (0..3).map(|k| qi(m.entry(i, k)) * &v[k]).sum())
}

/// Action of a boundary identification on `χ(T^3)`: coordinates transform
/// by `(A^-1)^T`, normals by `A`.
pub fn apply_gluing_point(a: &GluingMatrix, p: &ChiPoint) -> Result<ChiPoint, PillowError> {
    let m = a.coordinate_action().ok_or(PillowError::NonUnimodular(*a))?;
    Ok(canonicalize(&act(&m, &p.canonical.coords())))
}

pub fn apply_gluing_plane(a: &GluingMatrix, p: &PlaneImage) -> Result<PlaneImage, PillowError> {
    let m = a.coordinate_action().ok_or(PillowError::NonUnimodular(*a))?;
    Ok(PlaneImage {
        basepoint: act(&m, &p.basepoint),
        spanning: [m.apply(p.spanning[0]), m.apply(p.spanning[1])],
        normal: a.apply(p.normal),
        label: format!("A.{}", p.label),
    })
}

pub fn apply_gluing(a: &GluingMatrix, s: &Glueable) -> Result<Glueable, PillowError> {
    Ok(match s {
        Glueable::Point(p) => Glueable::Point(apply_gluing_point(a, p)?),
        Glueable::Plane(p) => Glueable::Plane(apply_gluing_plane(a, p)?),
    })
}

/// A piecewise-linear curve given by a continuous lift to `R^3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLCurve {
    #[serde(with = "vertex_strings")]
    pub vertices: Vec<Vec3>,
    pub closed: bool,
}

mod vertex_strings {
    use super::Vec3;
    use crate::exact::{fmt_q, value_to_q};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec3], s: S) -> Result<S::Ok, S::Error> {
        let out: Vec<[String; 3]> = v.iter().map(|p| [fmt_q(&p[0]), fmt_q(&p[1]), fmt_q(&p[2])]).collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec3>, D::Error> {
        let raw: Vec<[serde_json::Value; 3]> = Deserialize::deserialize(d)?;
        raw.iter()
            .map(|p| {
                let conv = |v: &serde_json::Value| value_to_q(v).map_err(serde::de::Error::custom);
                Ok([conv(&p[0])?, conv(&p[1])?, conv(&p[2])?])
            })
            .collect()
    }
}

impl PLCurve {
    /// A curve through `vertices`; when `closed`, the last vertex must equal
    /// the first modulo `Z^3` and the closing segment is implied by it.
    pub fn new(vertices: Vec<Vec3>, closed: bool) -> Result<Self, PillowError> {
        let c = PLCurve { vertices, closed };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), PillowError> {
        if self.vertices.len() < 2 {
            return Err(PillowError::InvalidCurve("fewer than two vertices".into()));
        }
        for (i, w) in self.vertices.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(PillowError::InvalidCurve(format!("vertices {i} and {} coincide", i + 1)));
            }
        }
        if self.closed {
            let d = sub3(&self.vertices[self.vertices.len() - 1], &self.vertices[0]);
            if !d.iter().all(|c| c.is_integer()) {
                return Err(PillowError::InvalidCurve(
                    "closed curve: last vertex differs from the first by a non-integer vector".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn negated(&self) -> Self {
        PLCurve { vertices: self.vertices.iter().map(neg3).collect(), closed: self.closed }
    }

    pub fn segments(&self) -> impl Iterator<Item = (&Vec3, &Vec3)> {
        self.vertices.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// Closed polygon in the plane `z = z0` approximating a circle of
    /// radius `r` about `(cx, cy)` with `k` vertices (a regular `k`-gon
    /// with rational vertices on the axes and diagonals when `k = 8`).
    pub fn polygon_xy(center: &Vec3, r: &Q, k: usize) -> Self {
        let mut verts = Vec::with_capacity(k + 1);
        for i in 0..k {
            let (a, b) = octagon_dir(i * 8 / k.max(1));
            verts.push([&center[0] + r * &a, &center[1] + r * &b, center[2].clone()]);
        }
        verts.push(verts[0].clone());
        PLCurve { vertices: verts, closed: true }
    }
}

fn octagon_dir(i: usize) -> (Q, Q) {
    let h = q_frac(7, 10);
    match i % 8 {
        0 => (Q::one(), Q::zero()),
        1 => (h.clone(), h),
        2 => (Q::zero(), Q::one()),
        3 => (-&h, h),
        4 => (-Q::one(), Q::zero()),
        5 => (-&h, -&h),
        6 => (Q::zero(), -Q::one()),
        _ => (h.clone(), -h),
    }
}

fn lerp(p: &Vec3, q: &Vec3, l: &Q) -> Vec3 {
    std::array::from_fn(|i| &p[i] + l * (&q[i] - &p[i]))
}

/// Errors if the segment passes through a point of `(1/2) Z^3`.
fn check_avoids_central(p: &Vec3, q: &Vec3) -> Result<(), PillowError> {
    let d = sub3(q, p);
    let axis = (0..3).find(|&i| !d[i].is_zero()).expect("non-degenerate segment");
    let two = qi(2);
    let (a, b) = (&p[axis] * &two, &q[axis] * &two);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let mut k = -floor_q(&-lo.clone());
    while Q::from_integer(k.clone()) <= hi {
        let l = (Q::from_integer(k.clone()) / &two - &p[axis]) / &d[axis];
        let x = lerp(p, q, &l);
        if x.iter().all(|c| (c * &two).is_integer()) {
            return Err(PillowError::ThroughCentralClass(canonicalize(&x).to_string()));
        }
        k += 1;
    }
    Ok(())
}

/// Signed crossings of one lift with all `Z^3`-translates of the patch.
fn count_lift(c: &PLCurve, s: &PlaneImage) -> Result<i64, PillowError> {
    let n = s.unit_normal();
    let non_transverse = |x: &Vec3, reason: &str| PillowError::NonTransverse {
        plane: s.label.clone(),
        location: fmt_vec(x),
        reason: reason.into(),
    };
    let base = dot_qi(&s.basepoint, &n);
    let mut total = 0i64;
    for (p, q) in c.segments() {
        check_avoids_central(p, q)?;
        let f0 = dot_qi(p, &n) - &base;
        let f1 = dot_qi(q, &n) - &base;
        let df = &f1 - &f0;
        if df.is_zero() {
            if f0.is_integer() {
                return Err(non_transverse(p, "segment lies in a translate of the plane"));
            }
            continue;
        }
        let sign = if df.is_positive() { 1 } else { -1 };
        let (lo, hi) = if f0 <= f1 { (f0.clone(), f1.clone()) } else { (f1.clone(), f0.clone()) };
        let mut k = -floor_q(&-lo.clone());
        while Q::from_integer(k.clone()) <= hi {
            let kq = Q::from_integer(k.clone());
            let l = (&kq - &f0) / &df;
            let x = lerp(p, q, &l);
            let on_patch = s.patch_membership(&x).map_err(|r| non_transverse(&x, r))?;
            if on_patch {
                if l.is_zero() || l.is_one() {
                    return Err(non_transverse(&x, "a vertex of the curve lies on the plane"));
                }
                total += sign;
            }
            k += 1;
        }
    }
    Ok(total)
}

/// Signed count of `[c] ∩ [S]` in `χ(T^3)`: crossings of both lifts `c` and
/// `-c` with every translate of the patch.
pub fn signed_intersection_count(c: &PLCurve, s: &PlaneImage) -> Result<i64, PillowError> {
    c.validate()?;
    s.validate()?;
    Ok(count_lift(c, s)? + count_lift(&c.negated(), s)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub count_p1: i64,
    pub count_pn: i64,
    pub count_p0: i64,
    /// `count(P_1) - count(P_N) = count(P_0)`.
    pub holds: bool,
    /// Signed crossings with the boundary of the solid `V`, whose faces are
    /// `P_N` and `P_0` (outward normals as given) and `P_1` (reversed).
    pub boundary_total: i64,
}

pub fn surgery_count_identity(c: &PLCurve) -> Result<IdentityReport, PillowError> {
    let count_p1 = signed_intersection_count(c, &PlaneImage::p_1())?;
    let count_pn = signed_intersection_count(c, &PlaneImage::p_n())?;
    let count_p0 = signed_intersection_count(c, &PlaneImage::p_0())?;
    Ok(IdentityReport {
        count_p1,
        count_pn,
        count_p0,
        holds: count_p1 - count_pn == count_p0,
        boundary_total: -count_p1 + count_pn + count_p0,
    })
}

/// Random closed curve with `k` interior vertices whose coordinates have
/// denominator `den`; the final vertex is the first shifted by a random
/// vector in `{-1, 0, 1}^3`.
pub fn random_closed_curve<R: Rng>(rng: &mut R, k: usize, den: i64) -> PLCurve {
    let coord = |rng: &mut R| q_frac(rng.gen_range(-den..=den), den);
    loop {
        let mut verts: Vec<Vec3> = (0..k).map(|_| [coord(rng), coord(rng), coord(rng)]).collect();
        let shift: IVec3 = std::array::from_fn(|_| rng.gen_range(-1..=1));
        let last: Vec3 = std::array::from_fn(|i| &verts[0][i] + qi(shift[i]));
        verts.push(last);
        if let Ok(c) = PLCurve::new(verts, true) {
            return c;
        }
    }
}

/// Random closed curve transverse to `P_N`, `P_1`, `P_0`, resampling on any
/// degeneracy.
pub fn random_transverse_curve<R: Rng>(rng: &mut R, k: usize, den: i64) -> (PLCurve, IdentityReport) {
    loop {
        let c = random_closed_curve(rng, k, den);
        if let Ok(r) = surgery_count_identity(&c) {
            return (c, r);
        }
    }
}
