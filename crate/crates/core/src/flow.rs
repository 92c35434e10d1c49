//! Chern-Simons gradient flow on the center manifold at a central flat
//! connection on `T^3`: triples `(X1, X2, X3)` of vectors in 3-space with
//! the cross product as bracket.
//!
//! The downward flow `b' = -grad cs(b)` blows up in finite time on part of
//! its domain, so the vector field is multiplied by a smooth cutoff that
//! vanishes for `|b| >= 2R` and trajectories are classified as truncated
//! once `|b|` exceeds `R`. Two clocks are available: physical time, and a
//! rescaled time `dτ = |b| dt` in which approach to a fixed point is
//! exponential instead of `1/t`, so that convergence to zero can be
//! certified at a fixed threshold within a bounded number of steps.

use serde::{Deserialize, Serialize};

pub type V3 = [f64; 3];

/// Radius below which a trajectory counts as having reached zero, and the
/// Kuranishi-norm threshold (relative to `min(1, |b|^2)`) for a commuting
/// limit.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("invalid flow parameters: {0}")]
    InvalidParams(String),
}

fn cross(a: &V3, b: &V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &V3) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SuTriple(pub [V3; 3]);

impl SuTriple {
    pub const ZERO: SuTriple = SuTriple([[0.0; 3]; 3]);

    pub fn new(x1: V3, x2: V3, x3: V3) -> Self {
        SuTriple([x1, x2, x3])
    }

    /// `r (e1, e2, e3)`.
    pub fn orthonormal(r: f64) -> Self {
        SuTriple([[r, 0.0, 0.0], [0.0, r, 0.0], [0.0, 0.0, r]])
    }

    pub fn from_flat(v: &[f64; 9]) -> Self {
        SuTriple(std::array::from_fn(|i| std::array::from_fn(|j| v[3 * i + j])))
    }

    pub fn flat(&self) -> [f64; 9] {
        std::array::from_fn(|k| self.0[k / 3][k % 3])
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| dot(x, x)).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.flat().iter().all(|x| x.is_finite())
    }

    pub fn scale(&self, c: f64) -> Self {
        SuTriple(self.0.map(|x| x.map(|v| c * v)))
    }

    pub fn axpy(&self, c: f64, other: &SuTriple) -> Self {
        SuTriple(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + c * other.0[i][j])))
    }

    /// Applies a 3x3 matrix to each of the three vectors.
    pub fn rotate(&self, r: &[[f64; 3]; 3]) -> Self {
        SuTriple(self.0.map(|x| std::array::from_fn(|i| dot(&r[i], &x))))
    }

    pub fn max_abs_diff(&self, other: &SuTriple) -> f64 {
        self.flat().iter().zip(other.flat()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// `([X1,X2], [X2,X3], [X3,X1])`, the coefficients of `e1∧e2`, `e2∧e3`,
/// `e3∧e1`.
pub fn kuranishi_map(b: &SuTriple) -> [V3; 3] {
    let [x1, x2, x3] = &b.0;
    [cross(x1, x2), cross(x2, x3), cross(x3, x1)]
}

pub fn kuranishi_norm(b: &SuTriple) -> f64 {
    kuranishi_map(b).iter().map(|v| dot(v, v)).sum::<f64>().sqrt()
}

pub fn chern_simons_value(b: &SuTriple, sign_convention: f64) -> f64 {
    let [x1, x2, x3] = &b.0;
    sign_convention * dot(x1, &cross(x2, x3))
}

pub fn gradient(b: &SuTriple, sign_convention: f64) -> SuTriple {
    let [x1, x2, x3] = &b.0;
    SuTriple([cross(x2, x3), cross(x3, x1), cross(x1, x2)]).scale(sign_convention)
}

/// `‖X1‖²−‖X2‖²`, `‖X2‖²−‖X3‖²`, `⟨X1,X2⟩`, `⟨X1,X3⟩`, `⟨X2,X3⟩` (conserved)
/// and the Chern-Simons value (non-increasing).
pub fn conserved_quantities(b: &SuTriple, sign_convention: f64) -> [f64; 6] {
    let [x1, x2, x3] = &b.0;
    [
        dot(x1, x1) - dot(x2, x2),
        dot(x2, x2) - dot(x3, x3),
        dot(x1, x2),
        dot(x1, x3),
        dot(x2, x3),
        chern_simons_value(b, sign_convention),
    ]
}

/// How far `b` is from the stable set of the origin: the largest of the
/// pairwise norm differences, the pairwise dot products and the amount by
/// which the signed triple product is negative.
pub fn membership_defect(b: &SuTriple, sign_convention: f64) -> f64 {
    let [x1, x2, x3] = &b.0;
    let n = [norm(x1), norm(x2), norm(x3)];
    [
        (n[0] - n[1]).abs(),
        (n[1] - n[2]).abs(),
        (n[0] - n[2]).abs(),
        dot(x1, x2).abs(),
        dot(x1, x3).abs(),
        dot(x2, x3).abs(),
        (-chern_simons_value(b, sign_convention)).max(0.0),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

pub fn stable_set_membership(b: &SuTriple, tol: f64, sign_convention: f64) -> bool {
    membership_defect(b, sign_convention) <= tol
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clock {
    /// Steps in `t`.
    Physical,
    /// Steps in `τ` with `dτ = |b| dt`; physical time is integrated
    /// alongside, and `t_max` bounds `τ`.
    Rescaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowParams {
    pub step: f64,
    pub t_max: f64,
    pub truncation_radius: f64,
    pub sign_convention: f64,
    pub clock: Clock,
    /// End the run as soon as `|b|` exceeds the truncation radius.
    pub stop_at_truncation: bool,
    /// Record every `sample_every`-th step (and the last).
    pub sample_every: usize,
}

/// The sign convention under which `r (e1, e2, e3)` with `r > 0` contracts
/// to zero: `ṙ = -r²`.
pub const CALIBRATED_SIGN: f64 = 1.0;

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams {
            step: 1e-2,
            t_max: 200.0,
            truncation_radius: 10.0,
            sign_convention: CALIBRATED_SIGN,
            clock: Clock::Rescaled,
            stop_at_truncation: true,
            sample_every: 100,
        }
    }
}

impl FlowParams {
    /// Fixed-step physical-time run to `t_max` that keeps integrating the
    /// cut-off field past the truncation radius.
    pub fn physical(step: f64, t_max: f64) -> Self {
        FlowParams { step, t_max, clock: Clock::Physical, stop_at_truncation: false, sample_every: 1000, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        let bad = |m: String| Err(FlowError::InvalidParams(m));
        if !(self.step.is_finite() && self.step > 0.0) {
            return bad(format!("step must be positive, got {}", self.step));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return bad(format!("t_max must be positive, got {}", self.t_max));
        }
        if !(self.truncation_radius.is_finite() && self.truncation_radius > 0.0) {
            return bad(format!("truncation_radius must be positive, got {}", self.truncation_radius));
        }
        if self.sign_convention != 1.0 && self.sign_convention != -1.0 {
            return bad(format!("sign_convention must be +1 or -1, got {}", self.sign_convention));
        }
        if self.sample_every == 0 {
            return bad("sample_every must be at least 1".into());
        }
        if self.t_max / self.step > 1e8 {
            return bad(format!("t_max / step = {:e} steps exceeds the 1e8 step limit", self.t_max / self.step));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    ConvergesToZero,
    ConvergesToCommuting,
    Truncated,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    /// Rescaled time; equals `t` on the physical clock.
    pub tau: f64,
    pub b: SuTriple,
    pub norm: f64,
    pub cs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub classification: Classification,
    pub samples: Vec<Sample>,
    pub final_state: SuTriple,
    pub final_t: f64,
    pub steps: usize,
    /// Largest deviation of each of the five first integrals from its
    /// initial value.
    pub max_drift: [f64; 5],
    /// Largest single-step increase of the Chern-Simons value.
    pub max_cs_increase: f64,
    /// Whether `|b|` ever exceeded the truncation radius.
    pub exceeded_radius: bool,
}

/// `1` on `[0, R]`, `0` on `[2R, ∞)`, a `C^1` smoothstep in between.
pub fn cutoff(r: f64, radius: f64) -> f64 {
    if r <= radius {
        1.0
    } else if r >= 2.0 * radius {
        0.0
    } else {
        let u = (r - radius) / radius;
        1.0 - u * u * (3.0 - 2.0 * u)
    }
}

fn field(b: &SuTriple, p: &FlowParams) -> (SuTriple, f64) {
    let n = b.norm();
    let g = gradient(b, p.sign_convention).scale(-cutoff(n, p.truncation_radius));
    match p.clock {
        Clock::Physical => (g, 1.0),
        Clock::Rescaled => (g.scale(1.0 / n), 1.0 / n),
    }
}

fn rk4(b: &SuTriple, t: f64, h: f64, p: &FlowParams) -> (SuTriple, f64) {
    let (k1, s1) = field(b, p);
    let (k2, s2) = field(&b.axpy(h / 2.0, &k1), p);
    let (k3, s3) = field(&b.axpy(h / 2.0, &k2), p);
    let (k4, s4) = field(&b.axpy(h, &k3), p);
    let nb = b.axpy(h / 6.0, &k1).axpy(h / 3.0, &k2).axpy(h / 3.0, &k3).axpy(h / 6.0, &k4);
    (nb, t + h / 6.0 * (s1 + 2.0 * s2 + 2.0 * s3 + s4))
}

fn classify_point(b: &SuTriple) -> Option<Classification> {
    if b.norm() < CONVERGENCE_THRESHOLD {
        Some(Classification::ConvergesToZero)
    } else if kuranishi_norm(b) < CONVERGENCE_THRESHOLD * b.norm().powi(2).min(1.0) {
        // scale-relative so that a shrinking non-commuting triple, whose
        // brackets decay like |b|^2, is not mistaken for a commuting limit
        Some(Classification::ConvergesToCommuting)
    } else {
        None
    }
}

/// Integrates the cut-off downward gradient flow from `b0` with fixed-step
/// RK4.
pub fn flow(b0: &SuTriple, p: &FlowParams) -> Result<Trajectory, FlowError> {
    p.validate()?;
    if !b0.is_finite() {
        return Err(FlowError::InvalidParams("initial triple has non-finite entries".into()));
    }
    let sign = p.sign_convention;
    let q0 = conserved_quantities(b0, sign);
    let mut b = *b0;
    let (mut t, mut tau) = (0.0, 0.0);
    let mut samples = vec![Sample { t, tau, b, norm: b.norm(), cs: q0[5] }];
    let mut max_drift = [0.0f64; 5];
    let mut max_cs_increase = 0.0f64;
    let mut exceeded = b.norm() > p.truncation_radius;
    let total = (p.t_max / p.step).round().max(1.0) as usize;
    let mut steps = 0;
    let mut outcome = None;
    if exceeded && p.stop_at_truncation {
        outcome = Some(Classification::Truncated);
    } else if let Some(c) = classify_point(&b) {
        outcome = Some(c);
    }
    let mut cs = q0[5];
    while outcome.is_none() && steps < total {
        let (nb, nt) = rk4(&b, t, p.step, p);
        steps += 1;
        b = nb;
        t = match p.clock {
            Clock::Physical => steps as f64 * p.step,
            Clock::Rescaled => nt,
        };
        tau = steps as f64 * p.step;
        let q = conserved_quantities(&b, sign);
        for i in 0..5 {
            max_drift[i] = max_drift[i].max((q[i] - q0[i]).abs());
        }
        max_cs_increase = max_cs_increase.max(q[5] - cs);
        cs = q[5];
        if !b.is_finite() {
            outcome = Some(Classification::Truncated);
            exceeded = true;
        } else if b.norm() > p.truncation_radius {
            exceeded = true;
            if p.stop_at_truncation {
                outcome = Some(Classification::Truncated);
            }
        } else if p.clock == Clock::Rescaled {
            outcome = classify_point(&b);
        }
        if steps % p.sample_every == 0 || outcome.is_some() || steps == total {
            samples.push(Sample { t, tau, b, norm: b.norm(), cs });
        }
    }
    let classification = match outcome {
        Some(c) => c,
        None if exceeded => Classification::Truncated,
        None => classify_point(&b).unwrap_or(Classification::Exhausted),
    };
    Ok(Trajectory {
        classification,
        samples,
        final_state: b,
        final_t: t,
        steps,
        max_drift,
        max_cs_increase,
        exceeded_radius: exceeded,
    })
}

/// Relative error between `gradient` and a central difference of
/// `chern_simons_value` along `db`.
pub fn gradient_fd_error(b: &SuTriple, db: &SuTriple, h: f64, sign_convention: f64) -> f64 {
    let g = gradient(b, sign_convention);
    let exact: f64 = g.flat().iter().zip(db.flat()).map(|(x, y)| x * y).sum();
    let plus = chern_simons_value(&b.axpy(h, db), sign_convention);
    let minus = chern_simons_value(&b.axpy(-h, db), sign_convention);
    let fd = (plus - minus) / (2.0 * h);
    (fd - exact).abs() / exact.abs().max(f64::MIN_POSITIVE)
}

/// Rotation about a unit axis by `angle` (Rodrigues).
pub fn rotation(axis: V3, angle: f64) -> [[f64; 3]; 3] {
    let n = norm(&axis);
    let [x, y, z] = axis.map(|c| c / n);
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub points: usize,
    pub members: usize,
    pub converged_to_zero: usize,
    pub agreements: usize,
    pub disagreements: usize,
    /// Points whose membership defect lies strictly between the tolerance
    /// and the collar width; excluded from the comparison.
    pub skipped_in_collar: usize,
}

/// One point of the membership sweep: `r (e1, (1+a) e2, cos θ e3 + sin θ e2)`
/// under a fixed rotation.
pub fn sweep_point(r: f64, a: f64, theta: f64) -> SuTriple {
    let b = SuTriple::new([r, 0.0, 0.0], [0.0, r * (1.0 + a), 0.0], [0.0, r * theta.sin(), r * theta.cos()]);
    b.rotate(&rotation([1.0, 2.0, 3.0], 0.7))
}

/// The 10 x 10 x 10 grid of [`sweep_point`]s: scales in `[0.1, 1]`,
/// anisotropies in `[0, 0.36]` and angles `kπ/9`, `k = 0..=9`. Every point
/// has norm at most 2.
pub fn sweep_grid() -> Vec<SuTriple> {
    let mut out = Vec::with_capacity(1000);
    for i in 0..10 {
        let r = 0.1 + 0.1 * i as f64;
        for j in 0..10 {
            let a = 0.04 * j as f64;
            for k in 0..10 {
                out.push(sweep_point(r, a, std::f64::consts::PI * k as f64 / 9.0));
            }
        }
    }
    out
}

/// Compares `stable_set_membership` with `flow(...) == ConvergesToZero` on
/// every point, skipping points whose defect is in `(tol, collar]`.
pub fn membership_sweep(points: &[SuTriple], p: &FlowParams, tol: f64, collar: f64) -> Result<SweepReport, FlowError> {
    use rayon::prelude::*;
    p.validate()?;
    let outcomes: Vec<Option<(bool, bool)>> = points
        .par_iter()
        .map(|b| {
            let d = membership_defect(b, p.sign_convention);
            if d > tol && d <= collar {
                return Ok(None);
            }
            let member = d <= tol;
            let conv = flow(b, p)?.classification == Classification::ConvergesToZero;
            Ok(Some((member, conv)))
        })
        .collect::<Result<_, FlowError>>()?;
    let mut rep = SweepReport { points: points.len(), members: 0, converged_to_zero: 0, agreements: 0, disagreements: 0, skipped_in_collar: 0 };
    for o in outcomes {
        match o {
            None => rep.skipped_in_collar += 1,
            Some((m, c)) => {
                rep.members += m as usize;
                rep.converged_to_zero += c as usize;
                if m == c {
                    rep.agreements += 1;
                } else {
                    rep.disagreements += 1;
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: SuTriple = SuTriple([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    #[test]
    fn kuranishi_examples() {
        assert_eq!(kuranishi_map(&SuTriple::ZERO), [[0.0; 3]; 3]);
        let v = [0.3, -1.0, 2.0];
        assert_eq!(kuranishi_norm(&SuTriple::new(v, v, v)), 0.0);
        assert_eq!(kuranishi_map(&E), [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
    }

    #[test]
    fn cs_and_gradient_examples() {
        assert_eq!(chern_simons_value(&E, 1.0), 1.0);
        let b = SuTriple::new([2.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 1.0]);
        assert_eq!(chern_simons_value(&b, 1.0), 6.0);
        assert_eq!(gradient(&E, 1.0), E);
        assert_eq!(gradient(&SuTriple::ZERO, 1.0), SuTriple::ZERO);
    }

    #[test]
    fn commuting_triple_is_fixed() {
        let v = [0.5, 0.1, 0.0];
        let b = SuTriple::new(v, [1.0, 0.2, 0.0], [-0.5, -0.1, 0.0]);
        let tr = flow(&b, &FlowParams::default()).unwrap();
        assert_eq!(tr.classification, Classification::ConvergesToCommuting);
        assert_eq!(tr.steps, 0);
    }

    #[test]
    fn contracting_branch_reaches_zero() {
        let tr = flow(&SuTriple::orthonormal(1.0), &FlowParams::default()).unwrap();
        assert_eq!(tr.classification, Classification::ConvergesToZero);
        for s in &tr.samples {
            let expect = 1.0 / (1.0 + s.t);
            assert!((s.b.0[0][0] - expect).abs() <= 0.01 * expect, "t={} {} vs {}", s.t, s.b.0[0][0], expect);
        }
    }

    #[test]
    fn opposite_branch_is_truncated() {
        let p = FlowParams { sign_convention: -1.0, ..FlowParams::default() };
        let tr = flow(&SuTriple::orthonormal(1.0), &p).unwrap();
        assert_eq!(tr.classification, Classification::Truncated);
        assert!(tr.final_t < 1.0 + 1e-3, "blow-up before t = 1/r, got {}", tr.final_t);
    }

    #[test]
    fn membership_examples() {
        assert!(stable_set_membership(&SuTriple::ZERO, 1e-9, 1.0));
        assert!(stable_set_membership(&SuTriple::orthonormal(0.5), 1e-9, 1.0));
        assert!(!stable_set_membership(&SuTriple::orthonormal(0.5), 1e-9, -1.0));
        let b = SuTriple::new([1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]);
        assert!(!stable_set_membership(&b, 1e-6, 1.0));
    }

    #[test]
    fn cutoff_profile() {
        assert_eq!(cutoff(0.5, 1.0), 1.0);
        assert_eq!(cutoff(2.5, 1.0), 0.0);
        assert!((cutoff(1.5, 1.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn params_are_validated() {
        for p in [
            FlowParams { step: 0.0, ..FlowParams::default() },
            FlowParams { t_max: -1.0, ..FlowParams::default() },
            FlowParams { sign_convention: 0.5, ..FlowParams::default() },
            FlowParams { truncation_radius: f64::NAN, ..FlowParams::default() },
        ] {
            assert!(matches!(flow(&E, &p), Err(FlowError::InvalidParams(_))));
        }
    }

    #[test]
    fn sweep_grid_is_bounded() {
        let g = sweep_grid();
        assert_eq!(g.len(), 1000);
        assert!(g.iter().all(|b| b.norm() <= 2.0));
    }
}
