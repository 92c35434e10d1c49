//! Casson and Furuta-Ohta invariants over a small expression language of
//! homology 3-spheres and homology `S^1 x S^3`s.
//!
//! Every evaluation returns an [`InvariantValue`] carrying the exact value
//! and the ordered list of formulas applied to obtain it. Several routes can
//! reach the same number (the Casson surgery formula, the torus surgery
//! formula, an iterated chain of `(1, ±1)`-surgeries on core tori); the
//! traces make it possible to see which one was taken.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::{fmt_q, Q};
use crate::gluing::{GluingMatrix, NormalForm};
use crate::knot::{is_qhs_branched_cover, tristram_levine_signature, KnotError, KnotInSphere};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalcError {
    #[error("`{0}` is not an integral homology sphere")]
    NotAHomologySphere(String),
    #[error("`{term}` is not admissible: {}", reasons.join("; "))]
    NotAdmissible { term: String, reasons: Vec<String> },
    #[error("cannot evaluate `{term}`: {reason}")]
    Unresolvable { term: String, reason: String },
    #[error("named sphere `{label}` has non-integral Casson invariant {value}")]
    NonIntegralCasson { label: String, value: String },
    #[error("surgery chain: {0}")]
    BadChain(String),
    #[error(transparent)]
    Knot(#[from] KnotError),
}

/// Integral homology spheres, plus 0-surgery on a knot (a homology
/// `S^1 x S^2`, only meaningful as a factor of a product).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThreeManifold {
    S3,
    NamedSphere { label: String, casson: Q },
    /// `1/q` surgery on a knot; the base is the knot's ambient sphere.
    SurgeryOneOverQ { knot: KnotInSphere, q: i64 },
    Splice(KnotInSphere, KnotInSphere),
    ZeroSurgery(KnotInSphere),
}

impl ThreeManifold {
    pub fn named_sphere(label: impl Into<String>, casson: Q) -> Result<Self, CalcError> {
        let label = label.into();
        if !casson.is_integer() {
            return Err(CalcError::NonIntegralCasson { label, value: fmt_q(&casson) });
        }
        Ok(ThreeManifold::NamedSphere { label, casson })
    }

    pub fn surgery_one_over_q(knot: KnotInSphere, q: i64) -> Self {
        ThreeManifold::SurgeryOneOverQ { knot, q }
    }

    pub fn base(&self) -> Option<&ThreeManifold> {
        match self {
            ThreeManifold::SurgeryOneOverQ { knot, .. } => Some(&knot.ambient),
            _ => None,
        }
    }

    pub fn is_homology_sphere(&self) -> bool {
        !matches!(self, ThreeManifold::ZeroSurgery(_))
    }
}

impl fmt::Display for ThreeManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThreeManifold::S3 => f.write_str("S3"),
            ThreeManifold::NamedSphere { label, .. } => write!(f, "{label}"),
            ThreeManifold::SurgeryOneOverQ { knot, q } => {
                write!(f, "{}_{{1/{q}}}({})", knot.ambient, knot.label)
            }
            ThreeManifold::Splice(a, b) => write!(f, "splice({} in {}, {} in {})", a.label, a.ambient, b.label, b.ambient),
            ThreeManifold::ZeroSurgery(k) => write!(f, "{}_0({})", k.ambient, k.label),
        }
    }
}

/// An essentially embedded torus along which surgery or gluing happens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorusDescriptor {
    /// Mapping torus of the branch set inside a branched-cover mapping torus.
    MappingTorusOfBranchLocus,
    /// `S^1 x K` inside `S^1 x Y`.
    ProductTorus(KnotInSphere),
    /// Core torus of the previous surgery in the expression.
    SurgeryCore,
    AbstractTorus(String),
}

impl fmt::Display for TorusDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusDescriptor::MappingTorusOfBranchLocus => f.write_str("branch-locus torus"),
            TorusDescriptor::ProductTorus(k) => write!(f, "S1x{}", k.label),
            TorusDescriptor::SurgeryCore => f.write_str("core torus"),
            TorusDescriptor::AbstractTorus(l) => write!(f, "torus {l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FourManifold {
    Product(ThreeManifold),
    MappingTorus { n: i64, knot: KnotInSphere },
    TorusSurgery { base: Arc<FourManifold>, torus: TorusDescriptor, p: i64, q: i64 },
    FiberSum { a: Arc<FourManifold>, ta: TorusDescriptor, b: Arc<FourManifold>, tb: TorusDescriptor },
    Excision {
        a: Arc<FourManifold>,
        ta: TorusDescriptor,
        b: Arc<FourManifold>,
        tb: TorusDescriptor,
        glue: GluingMatrix,
    },
}

impl FourManifold {
    pub fn product(y: ThreeManifold) -> Self {
        FourManifold::Product(y)
    }

    pub fn mapping_torus(n: i64, knot: KnotInSphere) -> Self {
        FourManifold::MappingTorus { n, knot }
    }

    pub fn torus_surgery(base: FourManifold, torus: TorusDescriptor, p: i64, q: i64) -> Self {
        FourManifold::TorusSurgery { base: Arc::new(base), torus, p, q }
    }

    pub fn fiber_sum(a: FourManifold, ta: TorusDescriptor, b: FourManifold, tb: TorusDescriptor) -> Self {
        FourManifold::FiberSum { a: Arc::new(a), ta, b: Arc::new(b), tb }
    }

    pub fn excision(
        a: FourManifold,
        ta: TorusDescriptor,
        b: FourManifold,
        tb: TorusDescriptor,
        glue: GluingMatrix,
    ) -> Self {
        FourManifold::Excision { a: Arc::new(a), ta, b: Arc::new(b), tb, glue }
    }
}

impl fmt::Display for FourManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FourManifold::Product(y) => write!(f, "S1x{y}"),
            FourManifold::MappingTorus { n, knot } => {
                write!(f, "X_{n}({}, {})", knot.ambient, knot.label)
            }
            FourManifold::TorusSurgery { base, torus, p, q } => {
                write!(f, "({base})_({p},{q})[{torus}]")
            }
            FourManifold::FiberSum { a, ta, b, tb } => {
                write!(f, "({a})#[{ta}|{tb}]({b})")
            }
            FourManifold::Excision { a, ta, b, tb, glue } => {
                write!(f, "({a})#_{glue}[{ta}|{tb}]({b})")
            }
        }
    }
}

/// One applied formula in an evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: &'static str,
    pub term: String,
    pub detail: String,
    #[serde(serialize_with = "crate::exact::q_string::serialize")]
    pub value: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantValue {
    #[serde(serialize_with = "crate::exact::q_string::serialize")]
    pub value: Q,
    pub trace: Vec<TraceStep>,
}

impl InvariantValue {
    pub fn value_string(&self) -> String {
        fmt_q(&self.value)
    }

    pub fn rules(&self) -> Vec<&'static str> {
        self.trace.iter().map(|s| s.rule).collect()
    }
}

#[derive(Default)]
struct Tracer {
    steps: Vec<TraceStep>,
}

impl Tracer {
    fn push(&mut self, rule: &'static str, term: impl fmt::Display, detail: String, value: &Q) {
        self.steps.push(TraceStep { rule, term: term.to_string(), detail, value: value.clone() });
    }

    fn finish(self, value: Q) -> InvariantValue {
        InvariantValue { value, trace: self.steps }
    }
}

fn qi(n: impl Into<BigInt>) -> Q {
    Q::from_integer(n.into())
}

fn half() -> Q {
    Q::new(BigInt::one(), BigInt::from(2))
}

/// Casson invariant of an integral homology sphere expression.
pub fn casson(y: &ThreeManifold) -> Result<InvariantValue, CalcError> {
    let mut t = Tracer::default();
    let v = casson_inner(y, &mut t)?;
    debug_assert!(v.is_integer());
    Ok(t.finish(v))
}

fn casson_inner(y: &ThreeManifold, t: &mut Tracer) -> Result<Q, CalcError> {
    match y {
        ThreeManifold::S3 => {
            let v = Q::zero();
            t.push("casson-s3", y, "λ(S3) = 0".into(), &v);
            Ok(v)
        }
        ThreeManifold::NamedSphere { label, casson } => {
            t.push("casson-named", y, format!("λ({label}) = {} (given)", fmt_q(casson)), casson);
            Ok(casson.clone())
        }
        ThreeManifold::SurgeryOneOverQ { knot, q } => {
            let base = casson_inner(&knot.ambient, t)?;
            let dd = knot.ddelta();
            let v = &base + qi(*q) * half() * qi(dd.clone());
            t.push(
                "casson-surgery",
                y,
                format!("λ(Y_1/q(K)) = λ(Y) + (q/2)Δ''(1) = {} + ({q}/2)·{dd}", fmt_q(&base)),
                &v,
            );
            Ok(v)
        }
        ThreeManifold::Splice(a, b) => {
            let la = casson_inner(&a.ambient, t)?;
            let lb = casson_inner(&b.ambient, t)?;
            let v = &la + &lb;
            t.push(
                "casson-splice",
                y,
                format!("λ(Y1 #_K Y2) = λ(Y1) + λ(Y2) = {} + {}", fmt_q(&la), fmt_q(&lb)),
                &v,
            );
            Ok(v)
        }
        ThreeManifold::ZeroSurgery(_) => Err(CalcError::NotAHomologySphere(y.to_string())),
    }
}

/// Outcome of one admissibility test on one node of an expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub term: String,
    pub test: &'static str,
    pub passed: bool,
    /// A failed blocking test makes the whole expression inadmissible;
    /// non-blocking tests are informational.
    pub blocking: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub findings: Vec<Finding>,
}

impl AdmissibilityReport {
    pub fn failures(&self) -> Vec<String> {
        self.findings
            .iter()
            .filter(|f| f.blocking && !f.passed)
            .map(|f| format!("{}: {}", f.term, f.reason))
            .collect()
    }

    pub fn finding(&self, test: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.test == test)
    }
}

/// Verdicts of the two excision gluing criteria on a normalized matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExcisionCriteria {
    /// `X1 #_φ X2` is an integral homology `S^1 x S^3`:
    /// `gcd(aq, b) = 1` and `(aq)^2 + b^2 != 0`.
    pub homology: bool,
    /// Admissibility follows from that of the pieces on the homology
    /// level: `b = ±1` and `q = 0`.
    pub homology_level_admissible: bool,
}

pub fn excision_criteria(nf: &NormalForm) -> ExcisionCriteria {
    let aq = nf.a * nf.q;
    let homology = aq.gcd(&nf.b) == 1 && aq * aq + nf.b * nf.b != 0;
    ExcisionCriteria { homology, homology_level_admissible: nf.b.abs() == 1 && nf.q == 0 }
}

pub fn check_admissibility(x: &FourManifold) -> AdmissibilityReport {
    let mut findings = Vec::new();
    admissibility_inner(x, &mut findings);
    let admissible = findings.iter().all(|f| f.passed || !f.blocking);
    AdmissibilityReport { admissible, findings }
}

fn finding(out: &mut Vec<Finding>, term: &impl fmt::Display, test: &'static str, passed: bool, blocking: bool, reason: String) {
    out.push(Finding { term: term.to_string(), test, passed, blocking, reason });
}

fn admissibility_inner(x: &FourManifold, out: &mut Vec<Finding>) {
    match x {
        FourManifold::Product(y) => {
            let ok = y.is_homology_sphere();
            let reason = if ok {
                format!("{y} is an integral homology sphere")
            } else {
                format!("{y} is a homology S1xS2, so the product is not a homology S1xS3")
            };
            finding(out, x, "homology-sphere-factor", ok, true, reason);
        }
        FourManifold::MappingTorus { n, knot } => {
            if *n < 2 {
                finding(out, x, "cover-degree", false, true, format!("cover degree {n} < 2"));
                return;
            }
            match is_qhs_branched_cover(&knot.seifert, *n) {
                Ok(true) => finding(out, x, "branched-cover-qhs", true, true, "branched cover is a rational homology sphere".into()),
                Ok(false) => finding(out, x, "branched-cover-qhs", false, true, "branched cover not QHS".into()),
                Err(e) => finding(out, x, "branched-cover-qhs", false, true, e.to_string()),
            }
        }
        FourManifold::TorusSurgery { base, p, q, .. } => {
            admissibility_inner(base, out);
            if p.gcd(q) != 1 {
                finding(out, x, "surgery-coprime", false, true, format!("gcd({p}, {q}) != 1"));
            } else if p.abs() == 1 {
                finding(out, x, "surgery-type", true, true, "(1,q)-surgery preserves admissibility".into());
            } else if *p == 0 {
                finding(out, x, "surgery-type", false, true, "(0,1)-surgery has the homology of S2xT2, not S1xS3".into());
            } else {
                finding(out, x, "surgery-type", false, true, format!("({p},{q})-surgery introduces Z/{} torsion in H_1", p.abs()));
            }
        }
        FourManifold::FiberSum { a, b, .. } => {
            admissibility_inner(a, out);
            admissibility_inner(b, out);
            finding(out, x, "excision-homology", true, true, "fiber-sum gluing: b = 1, q = 0".into());
        }
        FourManifold::Excision { a, b, glue, .. } => {
            admissibility_inner(a, out);
            admissibility_inner(b, out);
            let det = glue.det();
            finding(out, x, "gluing-orientation", det == -1, true, format!("det A = {det} (orientation reversal needs -1)"));
            let Some(nf) = glue.normal_form() else {
                finding(out, x, "gluing-normal-form", false, true, "third column of A is not (0,0,1)^T".into());
                return;
            };
            let crit = excision_criteria(&nf);
            let aq = nf.a * nf.q;
            finding(
                out,
                x,
                "excision-homology",
                crit.homology,
                true,
                format!("gcd(aq, b) = gcd({aq}, {}) = {}, (aq)^2 + b^2 = {}", nf.b, aq.gcd(&nf.b), aq * aq + nf.b * nf.b),
            );
            finding(
                out,
                x,
                "excision-homology-level",
                crit.homology_level_admissible,
                false,
                if crit.homology_level_admissible {
                    "b = ±1 and q = 0: admissibility inherited from the pieces".into()
                } else {
                    format!("b = {}, q = {}: admissibility not decidable on the homology level", nf.b, nf.q)
                },
            );
        }
    }
}

/// Furuta-Ohta invariant of an admissible expression.
pub fn lambda_fo(x: &FourManifold) -> Result<InvariantValue, CalcError> {
    require_admissible(x)?;
    let mut t = Tracer::default();
    let v = lambda_fo_inner(x, &mut t)?;
    debug_assert!(eighths(&v));
    Ok(t.finish(v))
}

fn eighths(v: &Q) -> bool {
    (BigInt::from(8) % v.denom()).is_zero()
}

fn require_admissible(x: &FourManifold) -> Result<(), CalcError> {
    let report = check_admissibility(x);
    if report.admissible {
        Ok(())
    } else {
        Err(CalcError::NotAdmissible { term: x.to_string(), reasons: report.failures() })
    }
}

fn lambda_fo_inner(x: &FourManifold, t: &mut Tracer) -> Result<Q, CalcError> {
    match x {
        FourManifold::Product(y) => {
            let v = casson_inner(y, t)?;
            t.push("product-casson", x, format!("λ_FO(S1xY) = λ(Y) = {}", fmt_q(&v)), &v);
            Ok(v)
        }
        FourManifold::MappingTorus { n, knot } => {
            let ly = casson_inner(&knot.ambient, t)?;
            let mut sigs = Vec::new();
            for m in 1..*n {
                sigs.push(tristram_levine_signature(&knot.seifert, m, *n)?);
            }
            let total: i64 = sigs.iter().sum();
            let v = qi(*n) * &ly + Q::new(BigInt::from(total), BigInt::from(8));
            t.push(
                "mapping-torus-signature",
                x,
                format!("n·λ(Y) + (1/8)Σ sign^(m/n) = {n}·{} + (1/8)·({})", fmt_q(&ly), join_ints(&sigs)),
                &v,
            );
            Ok(v)
        }
        FourManifold::TorusSurgery { base, torus, p, q } => {
            let (p, q) = if *p == -1 { (1, -q) } else { (*p, *q) };
            if p != 1 {
                return Err(CalcError::NotAdmissible {
                    term: x.to_string(),
                    reasons: vec![format!("({p},{q})-surgery is not an admissible homology S1xS3")],
                });
            }
            let lb = lambda_fo_inner(base, t)?;
            if q == 0 {
                t.push("torus-surgery", x, "(1,0)-surgery regluing is the identity".into(), &lb);
                return Ok(lb);
            }
            let d0 = d0_inner(base, torus, t).map_err(|reason| CalcError::Unresolvable {
                term: x.to_string(),
                reason,
            })?;
            let v = &lb + qi(q) * half() * qi(d0.clone());
            t.push(
                "torus-surgery",
                x,
                format!("λ_FO(X_1,q) = λ_FO(X) + (q/2)D0 = {} + ({q}/2)·{d0}", fmt_q(&lb)),
                &v,
            );
            Ok(v)
        }
        FourManifold::FiberSum { a, b, .. } => {
            let la = lambda_fo_inner(a, t)?;
            let lb = lambda_fo_inner(b, t)?;
            let v = &la + &lb;
            t.push("fiber-sum-additivity", x, format!("{} + {}", fmt_q(&la), fmt_q(&lb)), &v);
            Ok(v)
        }
        FourManifold::Excision { a, ta, b, tb, glue } => {
            let nf = glue.normal_form().ok_or_else(|| CalcError::Unresolvable {
                term: x.to_string(),
                reason: format!("gluing matrix {glue} is not framing-normalized"),
            })?;
            let crit = excision_criteria(&nf);
            if !crit.homology_level_admissible {
                return Err(CalcError::Unresolvable {
                    term: x.to_string(),
                    reason: format!(
                        "gluing matrix {glue} (b = {}, q = {}) is not a (1,d)-surgery regluing; \
                         no formula relates the excised pieces to the originals",
                        nf.b, nf.q
                    ),
                });
            }
            let d = nf.d;
            let pa = FourManifold::TorusSurgery { base: a.clone(), torus: ta.clone(), p: 1, q: d };
            let pb = FourManifold::TorusSurgery { base: b.clone(), torus: tb.clone(), p: 1, q: d };
            let la = lambda_fo_inner(&pa, t)?;
            let lb = lambda_fo_inner(&pb, t)?;
            let v = &la + &lb;
            t.push(
                "excision",
                x,
                format!("λ_FO(X1,φ) + λ_FO(X2,φ) with X_i,φ the (1,{d})-surgery: {} + {}", fmt_q(&la), fmt_q(&lb)),
                &v,
            );
            Ok(v)
        }
    }
}

fn join_ints(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" + ")
}

/// `D^0` of the `(0,1)`-surgery of `base` along `torus`, reduced to knot
/// data when possible. The error is a human-readable reason.
fn d0_inner(base: &FourManifold, torus: &TorusDescriptor, t: &mut Tracer) -> Result<BigInt, String> {
    match (base, torus) {
        (FourManifold::Product(y), TorusDescriptor::ProductTorus(k)) => {
            if *k.ambient != *y {
                return Err(format!("knot {} lives in {}, not in the product factor {y}", k.label, k.ambient));
            }
            let dd = k.ddelta();
            t.push(
                "d0-alexander",
                format!("S1x{}_0({})", y, k.label),
                format!("D0 = Δ''_K(1) for K = {}", k.label),
                &qi(dd.clone()),
            );
            Ok(dd)
        }
        (FourManifold::MappingTorus { knot, .. }, TorusDescriptor::MappingTorusOfBranchLocus) => {
            let dd = knot.ddelta();
            t.push(
                "d0-branch-locus",
                format!("({base})_(0,1)[{torus}]"),
                format!("(0,1)-surgery on the branch-locus torus is S1x{}_0({}); D0 = Δ''(1)", knot.ambient, knot.label),
                &qi(dd.clone()),
            );
            Ok(dd)
        }
        (FourManifold::TorusSurgery { base: inner, torus: inner_torus, p, .. }, TorusDescriptor::SurgeryCore)
            if p.abs() == 1 =>
        {
            // (0,1)-surgery on the core of any (1,q)-surgery recovers X_0
            d0_inner(inner, inner_torus, t)
        }
        (_, TorusDescriptor::AbstractTorus(l)) => {
            Err(format!("torus {l} carries no knot data to resolve D0"))
        }
        (_, TorusDescriptor::MappingTorusOfBranchLocus) => {
            Err(format!("branch-locus torus in {base} has no knot reduction for D0"))
        }
        (_, TorusDescriptor::ProductTorus(k)) => {
            Err(format!("product torus S1x{} does not sit in a product manifold ({base})", k.label))
        }
        (_, TorusDescriptor::SurgeryCore) => {
            Err(format!("{base} is not a (1,q)-surgery, so it has no core torus"))
        }
    }
}

/// `D^0_{w_T}` of a 0-surgered manifold: `S1 x Y_0(K)` or a `(0,1)`
/// torus surgery that reduces to one.
pub fn d0_invariant(x0: &FourManifold) -> Result<InvariantValue, CalcError> {
    let mut t = Tracer::default();
    let dd = match x0 {
        FourManifold::Product(ThreeManifold::ZeroSurgery(k)) => {
            let dd = k.ddelta();
            t.push("d0-alexander", x0, format!("D0 = Δ''_K(1) for K = {}", k.label), &qi(dd.clone()));
            dd
        }
        FourManifold::TorusSurgery { base, torus, p: 0, q } if q.abs() == 1 => {
            d0_inner(base, torus, &mut t).map_err(|reason| CalcError::Unresolvable {
                term: x0.to_string(),
                reason,
            })?
        }
        _ => {
            return Err(CalcError::Unresolvable {
                term: x0.to_string(),
                reason: "not a 0-surgered manifold (expected S1 x Y_0(K) or a (0,1) torus surgery)".into(),
            })
        }
    };
    Ok(t.finish(qi(dd)))
}

/// Evaluates `λ_FO` of a `(1, q)`-surgery by applying the `q = ±1` formula
/// `|q|` times, each time re-gluing along the core torus of the previous
/// step.
pub fn expand_surgery_chain(x: &FourManifold, steps: u64) -> Result<InvariantValue, CalcError> {
    let FourManifold::TorusSurgery { base, torus, p: 1, q } = x else {
        return Err(CalcError::BadChain(format!("{x} is not a (1,q) torus surgery")));
    };
    if q.unsigned_abs() != steps {
        return Err(CalcError::BadChain(format!("steps = {steps} but |q| = {}", q.unsigned_abs())));
    }
    require_admissible(x)?;
    let mut t = Tracer::default();
    let mut value = lambda_fo_inner(base, &mut t)?;
    let sign = q.signum();
    let mut current: FourManifold = (**base).clone();
    let mut current_torus = torus.clone();
    for i in 0..steps {
        let d0 = d0_inner(&current, &current_torus, &mut t).map_err(|reason| CalcError::Unresolvable {
            term: x.to_string(),
            reason,
        })?;
        value += qi(sign) * half() * qi(d0.clone());
        let next = FourManifold::torus_surgery(current, current_torus, 1, sign);
        t.push(
            "surgery-chain-step",
            &next,
            format!("step {}: λ_FO += ({sign}/2)·{d0}", i + 1),
            &value,
        );
        current = next;
        current_torus = TorusDescriptor::SurgeryCore;
    }
    Ok(t.finish(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q_frac;
    use crate::knot::SeifertMatrix;

    fn trefoil() -> KnotInSphere {
        KnotInSphere::in_s3("trefoil", SeifertMatrix::trefoil())
    }

    fn fig8() -> KnotInSphere {
        KnotInSphere::in_s3("figure-eight", SeifertMatrix::figure_eight())
    }

    fn unknot() -> KnotInSphere {
        KnotInSphere::in_s3("unknot", SeifertMatrix::unknot())
    }

    fn s3xs1() -> FourManifold {
        FourManifold::product(ThreeManifold::S3)
    }

    #[test]
    fn casson_examples() {
        assert_eq!(casson(&ThreeManifold::S3).unwrap().value, Q::zero());
        for q in [-3, -1, 0, 1, 4] {
            let y = ThreeManifold::surgery_one_over_q(trefoil(), q);
            assert_eq!(casson(&y).unwrap().value, qi(q));
        }
        let sp = ThreeManifold::Splice(trefoil(), fig8());
        assert_eq!(casson(&sp).unwrap().value, Q::zero());
        let z = ThreeManifold::ZeroSurgery(trefoil());
        assert!(matches!(casson(&z), Err(CalcError::NotAHomologySphere(_))));
    }

    #[test]
    fn named_sphere_must_be_integral() {
        assert!(ThreeManifold::named_sphere("P", q_frac(1, 2)).is_err());
        let p = ThreeManifold::named_sphere("Poincare", qi(-1)).unwrap();
        assert_eq!(casson(&p).unwrap().value, qi(-1));
        let k = KnotInSphere::new("trefoil", SeifertMatrix::trefoil(), p).unwrap();
        let y = ThreeManifold::surgery_one_over_q(k, 2);
        assert_eq!(casson(&y).unwrap().value, qi(1));
    }

    #[test]
    fn knot_ambient_must_be_homology_sphere() {
        let z = ThreeManifold::ZeroSurgery(trefoil());
        assert!(matches!(
            KnotInSphere::new("k", SeifertMatrix::trefoil(), z),
            Err(KnotError::BadAmbient { .. })
        ));
    }

    #[test]
    fn lambda_fo_examples() {
        assert_eq!(lambda_fo(&s3xs1()).unwrap().value, Q::zero());
        assert_eq!(
            lambda_fo(&FourManifold::mapping_torus(2, trefoil())).unwrap().value,
            q_frac(-1, 4)
        );
        assert_eq!(
            lambda_fo(&FourManifold::mapping_torus(3, trefoil())).unwrap().value,
            q_frac(-1, 2)
        );
        let bad = FourManifold::mapping_torus(6, trefoil());
        assert!(matches!(lambda_fo(&bad), Err(CalcError::NotAdmissible { .. })));
    }

    #[test]
    fn d0_examples() {
        let d = |k: KnotInSphere| d0_invariant(&FourManifold::product(ThreeManifold::ZeroSurgery(k))).unwrap().value;
        assert_eq!(d(unknot()), qi(0));
        assert_eq!(d(trefoil()), qi(2));
        assert_eq!(d(fig8()), qi(-2));
        let via_surgery = FourManifold::torus_surgery(s3xs1(), TorusDescriptor::ProductTorus(trefoil()), 0, 1);
        assert_eq!(d0_invariant(&via_surgery).unwrap().value, qi(2));
        let abstract_t = FourManifold::torus_surgery(s3xs1(), TorusDescriptor::AbstractTorus("T".into()), 0, 1);
        assert!(matches!(d0_invariant(&abstract_t), Err(CalcError::Unresolvable { .. })));
        assert!(matches!(d0_invariant(&s3xs1()), Err(CalcError::Unresolvable { .. })));
    }

    #[test]
    fn surgery_chain_examples() {
        let x = |q| FourManifold::torus_surgery(s3xs1(), TorusDescriptor::ProductTorus(trefoil()), 1, q);
        assert_eq!(expand_surgery_chain(&x(0), 0).unwrap().value, qi(0));
        assert_eq!(expand_surgery_chain(&x(3), 3).unwrap().value, qi(3));
        assert_eq!(expand_surgery_chain(&x(-2), 2).unwrap().value, qi(-2));
        assert_eq!(lambda_fo(&x(3)).unwrap().value, qi(3));
        assert!(matches!(expand_surgery_chain(&x(3), 2), Err(CalcError::BadChain(_))));
        let chain = expand_surgery_chain(&x(3), 3).unwrap();
        assert_eq!(chain.rules().iter().filter(|r| **r == "surgery-chain-step").count(), 3);
    }

    #[test]
    fn nested_core_surgeries_compose() {
        let t = TorusDescriptor::ProductTorus(fig8());
        let inner = FourManifold::torus_surgery(s3xs1(), t, 1, 2);
        let outer = FourManifold::torus_surgery(inner, TorusDescriptor::SurgeryCore, 1, 3);
        // (1,2) then (1,3) on the core is the (1,5) surgery: 5/2 * (-2)
        assert_eq!(lambda_fo(&outer).unwrap().value, qi(-5));
    }

    #[test]
    fn product_torus_must_match_factor() {
        let y = ThreeManifold::named_sphere("P", qi(-1)).unwrap();
        let x = FourManifold::torus_surgery(FourManifold::product(y), TorusDescriptor::ProductTorus(trefoil()), 1, 1);
        assert!(matches!(lambda_fo(&x), Err(CalcError::Unresolvable { .. })));
    }

    #[test]
    fn zero_surgery_is_not_admissible() {
        let x = FourManifold::torus_surgery(s3xs1(), TorusDescriptor::ProductTorus(trefoil()), 0, 1);
        let r = check_admissibility(&x);
        assert!(!r.admissible);
        assert!(matches!(lambda_fo(&x), Err(CalcError::NotAdmissible { .. })));
        let y = FourManifold::product(ThreeManifold::ZeroSurgery(trefoil()));
        assert!(!check_admissibility(&y).admissible);
    }

    #[test]
    fn mapping_torus_admissibility_reason() {
        let r = check_admissibility(&FourManifold::mapping_torus(6, trefoil()));
        assert!(!r.admissible);
        assert_eq!(r.finding("branched-cover-qhs").unwrap().reason, "branched cover not QHS");
    }

    #[test]
    fn excision_examples() {
        let a = FourManifold::mapping_torus(2, trefoil());
        let ta = TorusDescriptor::MappingTorusOfBranchLocus;
        let b = FourManifold::mapping_torus(3, fig8());
        let fs = FourManifold::excision(a.clone(), ta.clone(), b.clone(), ta.clone(), GluingMatrix::fiber_sum());
        let r = check_admissibility(&fs);
        assert!(r.admissible);
        assert!(r.finding("excision-homology-level").unwrap().passed);
        let expect = lambda_fo(&a).unwrap().value + lambda_fo(&b).unwrap().value;
        assert_eq!(lambda_fo(&fs).unwrap().value, expect);

        let twist = FourManifold::excision(s3xs1(), TorusDescriptor::ProductTorus(trefoil()), s3xs1(), TorusDescriptor::ProductTorus(fig8()), GluingMatrix::dehn_twist(1, 2));
        let r = check_admissibility(&twist);
        assert!(r.admissible);
        assert!(r.finding("excision-homology").unwrap().passed);
        assert!(!r.finding("excision-homology-level").unwrap().passed);
        match lambda_fo(&twist) {
            Err(CalcError::Unresolvable { reason, .. }) => assert!(reason.contains("[[0, 1, 0], [1, 0, 0], [-1, -2, 1]]")),
            other => panic!("expected Unresolvable, got {other:?}"),
        }

        let b2 = GluingMatrix([[1, 2, 0], [1, 1, 0], [0, 0, 1]]);
        let ex = FourManifold::excision(s3xs1(), ta.clone(), s3xs1(), ta, b2);
        let r = check_admissibility(&ex);
        assert!(!r.admissible);
        assert!(!r.finding("excision-homology").unwrap().passed);
    }

    #[test]
    fn excision_with_surgery_coefficient() {
        // b = -1, q = 0, d = 2: each side is the (1,2)-surgery
        let glue = GluingMatrix([[1, -1, 0], [-1, 2, 0], [0, 0, 1]]);
        assert_eq!(glue.det(), 1);
        let glue = GluingMatrix([[1, -1, 0], [0, -1, 0], [0, 0, 1]]);
        assert_eq!(glue.det(), -1);
        let nf = glue.normal_form().unwrap();
        assert_eq!(nf.d, -1);
        let ex = FourManifold::excision(
            s3xs1(),
            TorusDescriptor::ProductTorus(trefoil()),
            s3xs1(),
            TorusDescriptor::ProductTorus(fig8()),
            glue,
        );
        // (-1/2)·2 + (-1/2)·(-2)
        assert_eq!(lambda_fo(&ex).unwrap().value, qi(0));
    }
}
