//! Manifest files: knots, named manifold expressions, pillowcase scenes and
//! flow batches. All cross-references are resolved when the manifest is
//! loaded, before anything is evaluated.

use std::collections::BTreeMap;
use std::path::Path;

use foinv::calculus::{FourManifold, ThreeManifold, TorusDescriptor};
use foinv::exact::value_to_q;
use foinv::flow::{FlowParams, SuTriple};
use foinv::gluing::GluingMatrix;
use foinv::knot::{CatalogEntry, KnotCatalog, KnotInSphere, SeifertMatrix};
use foinv::pillowcase::{PLCurve, PlaneImage};
use serde::Deserialize;
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
}

fn invalid(context: impl Into<String>, message: impl Into<String>) -> ManifestError {
    ManifestError::Invalid { context: context.into(), message: message.into() }
}

pub fn read_file(path: &Path) -> Result<String, ManifestError> {
    std::fs::read_to_string(path).map_err(|source| ManifestError::Io { path: path.display().to_string(), source })
}

/// A resolved manifold: either a homology sphere expression (evaluated with
/// the Casson invariant) or a 4-manifold expression.
#[derive(Debug, Clone)]
pub enum Manifold {
    Three(ThreeManifold),
    Four(FourManifold),
}

#[derive(Debug, Clone)]
pub struct Manifest {
    pub catalog: KnotCatalog,
    pub manifolds: BTreeMap<String, Manifold>,
    pub scenes: BTreeMap<String, Scene>,
    pub flows: BTreeMap<String, Vec<FlowItem>>,
    /// Raw bytes the manifest was built from, for input digests.
    pub source: String,
}

/// A pillowcase scene: planes, curves, named matrices and optional
/// plane-equality checks.
#[derive(Debug, Clone)]
pub struct Scene {
    pub planes: Vec<PlaneImage>,
    pub curves: Vec<PLCurve>,
    pub matrices: BTreeMap<String, GluingMatrix>,
    pub checks: Vec<SceneCheck>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SceneCheck {
    pub matrix: String,
    pub plane: String,
    pub equals: String,
    /// `set` (equality in `T^3`) or `quotient` (equality in `χ(T^3)`).
    #[serde(default = "default_mode")]
    pub mode: String,
}

fn default_mode() -> String {
    "set".into()
}

#[derive(Debug, Clone)]
pub struct FlowItem {
    pub b0: SuTriple,
    pub params: FlowParams,
}

impl Manifest {
    pub fn empty() -> Self {
        Manifest {
            catalog: KnotCatalog::builtin(),
            manifolds: BTreeMap::new(),
            scenes: BTreeMap::new(),
            flows: BTreeMap::new(),
            source: String::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, ManifestError> {
        let text = read_file(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    /// Parses manifest JSON; relative file references resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ManifestError> {
        let root: Value = serde_json::from_str(text).map_err(|e| invalid("manifest", e.to_string()))?;
        let obj = root.as_object().ok_or_else(|| invalid("manifest", "top level must be an object"))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "knots" | "manifolds" | "scenes" | "flows") {
                return Err(invalid("manifest", format!("unknown key `{key}`")));
            }
        }
        let mut source = text.to_string();
        let catalog = match obj.get("knots") {
            None | Some(Value::Null) => KnotCatalog::builtin(),
            Some(Value::String(p)) => {
                let path = base.join(p);
                let t = read_file(&path)?;
                source.push_str(&t);
                KnotCatalog::from_json(&t).map_err(|e| invalid(format!("knots ({p})"), e.to_string()))?
            }
            Some(v @ Value::Array(_)) => {
                let entries: Vec<CatalogEntry> =
                    serde_json::from_value(v.clone()).map_err(|e| invalid("knots", e.to_string()))?;
                let mut cat = KnotCatalog::builtin();
                for e in entries {
                    cat.insert(e).map_err(|e| invalid("knots", e.to_string()))?;
                }
                cat
            }
            Some(_) => return Err(invalid("knots", "expected a catalog path or an array of {label, seifert}")),
        };
        let mut m = Manifest { catalog, manifolds: BTreeMap::new(), scenes: BTreeMap::new(), flows: BTreeMap::new(), source };

        if let Some(v) = obj.get("manifolds") {
            let defs = v.as_object().ok_or_else(|| invalid("manifolds", "expected an object of named expressions"))?;
            let mut r = Resolver { catalog: &m.catalog, defs, done: BTreeMap::new(), stack: Vec::new() };
            for name in defs.keys() {
                r.resolve_named(name)?;
            }
            m.manifolds = r.done;
        }
        if let Some(v) = obj.get("scenes") {
            let defs = v.as_object().ok_or_else(|| invalid("scenes", "expected an object of named scenes"))?;
            for (name, s) in defs {
                let scene = match s {
                    Value::String(p) => {
                        let path = base.join(p);
                        let t = read_file(&path)?;
                        m.source.push_str(&t);
                        parse_scene_text(&t).map_err(|e| prefix(e, &format!("scene `{name}`")))?
                    }
                    other => parse_scene(other).map_err(|e| prefix(e, &format!("scene `{name}`")))?,
                };
                m.scenes.insert(name.clone(), scene);
            }
        }
        if let Some(v) = obj.get("flows") {
            let defs = v.as_object().ok_or_else(|| invalid("flows", "expected an object of named batches"))?;
            for (name, b) in defs {
                let items = parse_flow_batch(b).map_err(|e| prefix(e, &format!("flow batch `{name}`")))?;
                m.flows.insert(name.clone(), items);
            }
        }
        Ok(m)
    }

    pub fn manifold(&self, name: &str) -> Result<&Manifold, ManifestError> {
        self.manifolds.get(name).ok_or_else(|| {
            invalid(
                format!("manifold `{name}`"),
                format!("not defined; known names: {}", self.manifolds.keys().cloned().collect::<Vec<_>>().join(", ")),
            )
        })
    }

    /// Resolves a single expression against this manifest's catalog and
    /// named manifolds.
    pub fn parse_expression(&self, v: &Value) -> Result<Manifold, ManifestError> {
        let defs = serde_json::Map::new();
        let mut r = Resolver { catalog: &self.catalog, defs: &defs, done: self.manifolds.clone(), stack: Vec::new() };
        r.manifold(v, "expression")
    }
}

fn prefix(e: ManifestError, ctx: &str) -> ManifestError {
    match e {
        ManifestError::Invalid { context, message } => invalid(format!("{ctx}: {context}"), message),
        other => other,
    }
}

struct Resolver<'a> {
    catalog: &'a KnotCatalog,
    defs: &'a serde_json::Map<String, Value>,
    done: BTreeMap<String, Manifold>,
    stack: Vec<String>,
}

const THREE_TYPES: [&str; 5] = ["s3", "named_sphere", "surgery_1q", "splice", "zero_surgery"];

impl Resolver<'_> {
    fn resolve_named(&mut self, name: &str) -> Result<Manifold, ManifestError> {
        if let Some(m) = self.done.get(name) {
            return Ok(m.clone());
        }
        if self.stack.iter().any(|s| s == name) {
            return Err(invalid(format!("manifold `{name}`"), format!("cyclic reference via {}", self.stack.join(" -> "))));
        }
        let def = self
            .defs
            .get(name)
            .ok_or_else(|| invalid(format!("reference `{name}`"), "no manifold with this name"))?;
        self.stack.push(name.to_string());
        let m = self.manifold(def, &format!("manifold `{name}`"));
        self.stack.pop();
        let m = m?;
        self.done.insert(name.to_string(), m.clone());
        Ok(m)
    }

    fn manifold(&mut self, v: &Value, ctx: &str) -> Result<Manifold, ManifestError> {
        match v {
            Value::String(s) if s == "S3" => Ok(Manifold::Three(ThreeManifold::S3)),
            Value::String(s) => self.resolve_named(s),
            Value::Object(o) => {
                let ty = o.get("type").and_then(Value::as_str).ok_or_else(|| invalid(ctx, "missing string field `type`"))?;
                if THREE_TYPES.contains(&ty) {
                    Ok(Manifold::Three(self.three(v, ctx)?))
                } else {
                    Ok(Manifold::Four(self.four(v, ctx)?))
                }
            }
            _ => Err(invalid(ctx, "expected an expression object or a manifold name")),
        }
    }

    fn field<'v>(&self, v: &'v Value, key: &str, ctx: &str) -> Result<&'v Value, ManifestError> {
        v.get(key).ok_or_else(|| invalid(ctx, format!("missing field `{key}`")))
    }

    fn int(&self, v: &Value, key: &str, ctx: &str) -> Result<i64, ManifestError> {
        self.field(v, key, ctx)?.as_i64().ok_or_else(|| invalid(ctx, format!("field `{key}` must be an integer")))
    }

    fn three(&mut self, v: &Value, ctx: &str) -> Result<ThreeManifold, ManifestError> {
        if let Value::String(_) = v {
            return match self.manifold(v, ctx)? {
                Manifold::Three(y) => Ok(y),
                Manifold::Four(x) => Err(invalid(ctx, format!("`{x}` is a 4-manifold where a 3-manifold is required"))),
            };
        }
        let ty = v.get("type").and_then(Value::as_str).ok_or_else(|| invalid(ctx, "missing string field `type`"))?;
        let sub = format!("{ctx} ({ty})");
        Ok(match ty {
            "s3" => ThreeManifold::S3,
            "named_sphere" => {
                let label = self.field(v, "label", &sub)?.as_str().ok_or_else(|| invalid(&sub, "`label` must be a string"))?;
                let c = value_to_q(self.field(v, "casson", &sub)?).map_err(|e| invalid(&sub, e.to_string()))?;
                ThreeManifold::named_sphere(label, c).map_err(|e| invalid(&sub, e.to_string()))?
            }
            "surgery_1q" => {
                let k = self.knot(self.field(v, "knot", &sub)?, &sub)?;
                ThreeManifold::surgery_one_over_q(k, self.int(v, "q", &sub)?)
            }
            "splice" => {
                let k1 = self.knot(self.field(v, "k1", &sub)?, &sub)?;
                let k2 = self.knot(self.field(v, "k2", &sub)?, &sub)?;
                ThreeManifold::Splice(k1, k2)
            }
            "zero_surgery" => ThreeManifold::ZeroSurgery(self.knot(self.field(v, "knot", &sub)?, &sub)?),
            other => return Err(invalid(&sub, format!("`{other}` is not a 3-manifold type"))),
        })
    }

    fn four(&mut self, v: &Value, ctx: &str) -> Result<FourManifold, ManifestError> {
        if let Value::String(_) = v {
            return match self.manifold(v, ctx)? {
                Manifold::Four(x) => Ok(x),
                Manifold::Three(y) => Err(invalid(ctx, format!("`{y}` is a 3-manifold where a 4-manifold is required"))),
            };
        }
        let ty = v.get("type").and_then(Value::as_str).ok_or_else(|| invalid(ctx, "missing string field `type`"))?;
        let sub = format!("{ctx} ({ty})");
        Ok(match ty {
            "product" => FourManifold::product(self.three(self.field(v, "factor", &sub)?, &sub)?),
            "mapping_torus" => {
                let n = self.int(v, "n", &sub)?;
                FourManifold::mapping_torus(n, self.knot(self.field(v, "knot", &sub)?, &sub)?)
            }
            "torus_surgery" => {
                let base = self.four(self.field(v, "base", &sub)?, &sub)?;
                let t = self.torus(self.field(v, "torus", &sub)?, &sub)?;
                FourManifold::torus_surgery(base, t, self.int(v, "p", &sub)?, self.int(v, "q", &sub)?)
            }
            "fiber_sum" | "excision" => {
                let a = self.four(self.field(v, "a", &sub)?, &sub)?;
                let ta = self.torus(self.field(v, "ta", &sub)?, &sub)?;
                let b = self.four(self.field(v, "b", &sub)?, &sub)?;
                let tb = self.torus(self.field(v, "tb", &sub)?, &sub)?;
                if ty == "fiber_sum" {
                    FourManifold::fiber_sum(a, ta, b, tb)
                } else {
                    let m = matrix(self.field(v, "matrix", &sub)?, &sub)?;
                    FourManifold::excision(a, ta, b, tb, m)
                }
            }
            other => return Err(invalid(&sub, format!("unknown expression type `{other}`"))),
        })
    }

    fn torus(&mut self, v: &Value, ctx: &str) -> Result<TorusDescriptor, ManifestError> {
        let ty = match v {
            Value::String(s) => s.as_str(),
            _ => v.get("type").and_then(Value::as_str).ok_or_else(|| invalid(ctx, "torus needs a `type`"))?,
        };
        Ok(match ty {
            "branch_locus" => TorusDescriptor::MappingTorusOfBranchLocus,
            "surgery_core" => TorusDescriptor::SurgeryCore,
            "product_torus" => TorusDescriptor::ProductTorus(self.knot(self.field(v, "knot", ctx)?, ctx)?),
            "abstract" => TorusDescriptor::AbstractTorus(
                v.get("label").and_then(Value::as_str).unwrap_or("T").to_string(),
            ),
            other => return Err(invalid(ctx, format!("unknown torus type `{other}`"))),
        })
    }

    /// A knot label (in `S3`), or `{label?, seifert?, ambient?}`.
    fn knot(&mut self, v: &Value, ctx: &str) -> Result<KnotInSphere, ManifestError> {
        let kctx = format!("{ctx}: knot");
        match v {
            Value::String(l) => self.catalog.knot_in_s3(l).map_err(|e| invalid(&kctx, e.to_string())),
            Value::Object(o) => {
                let label = o.get("label").and_then(Value::as_str);
                let seifert = match o.get("seifert") {
                    Some(s) => serde_json::from_value::<SeifertMatrix>(s.clone()).map_err(|e| invalid(&kctx, e.to_string()))?,
                    None => {
                        let l = label.ok_or_else(|| invalid(&kctx, "needs a `label` or a `seifert` matrix"))?;
                        self.catalog.get(l).map_err(|e| invalid(&kctx, e.to_string()))?
                    }
                };
                let label = label.unwrap_or("K").to_string();
                match o.get("ambient") {
                    None => Ok(KnotInSphere::in_s3(label, seifert)),
                    Some(a) => {
                        let y = self.three(a, &kctx)?;
                        KnotInSphere::new(label, seifert, y).map_err(|e| invalid(&kctx, e.to_string()))
                    }
                }
            }
            _ => Err(invalid(&kctx, "expected a label or an object")),
        }
    }
}

pub fn matrix(v: &Value, ctx: &str) -> Result<GluingMatrix, ManifestError> {
    let rows: Vec<Vec<i64>> = serde_json::from_value(v.clone()).map_err(|e| invalid(ctx, format!("matrix: {e}")))?;
    GluingMatrix::from_rows(&rows).ok_or_else(|| invalid(ctx, "matrix must be 3x3"))
}

pub fn parse_scene_text(text: &str) -> Result<Scene, ManifestError> {
    let v: Value = serde_json::from_str(text).map_err(|e| invalid("scene", e.to_string()))?;
    parse_scene(&v)
}

pub fn parse_scene(v: &Value) -> Result<Scene, ManifestError> {
    let obj = v.as_object().ok_or_else(|| invalid("scene", "expected an object"))?;
    let mut planes = Vec::new();
    for (i, p) in obj.get("planes").and_then(Value::as_array).cloned().unwrap_or_default().iter().enumerate() {
        let ctx = format!("planes[{i}]");
        let plane = match p {
            Value::String(l) => PlaneImage::builtin(l).ok_or_else(|| invalid(&ctx, format!("unknown built-in plane `{l}`")))?,
            other => serde_json::from_value::<PlaneImage>(other.clone()).map_err(|e| invalid(&ctx, e.to_string()))?,
        };
        plane.validate().map_err(|e| invalid(&ctx, e.to_string()))?;
        planes.push(plane);
    }
    let mut curves = Vec::new();
    for (i, c) in obj.get("curves").and_then(Value::as_array).cloned().unwrap_or_default().iter().enumerate() {
        let ctx = format!("curves[{i}]");
        let curve: PLCurve = serde_json::from_value(c.clone()).map_err(|e| invalid(&ctx, e.to_string()))?;
        curve.validate().map_err(|e| invalid(&ctx, e.to_string()))?;
        curves.push(curve);
    }
    let mut matrices = BTreeMap::new();
    if let Some(ms) = obj.get("matrices").and_then(Value::as_object) {
        for (label, m) in ms {
            matrices.insert(label.clone(), matrix(m, &format!("matrices.{label}"))?);
        }
    }
    let checks: Vec<SceneCheck> = match obj.get("checks") {
        Some(c) => serde_json::from_value(c.clone()).map_err(|e| invalid("checks", e.to_string()))?,
        None => Vec::new(),
    };
    for (i, c) in checks.iter().enumerate() {
        let ctx = format!("checks[{i}]");
        if !matrices.contains_key(&c.matrix) {
            return Err(invalid(&ctx, format!("unknown matrix `{}`", c.matrix)));
        }
        for l in [&c.plane, &c.equals] {
            if !planes.iter().any(|p| &p.label == l) && PlaneImage::builtin(l).is_none() {
                return Err(invalid(&ctx, format!("unknown plane `{l}`")));
            }
        }
        if c.mode != "set" && c.mode != "quotient" {
            return Err(invalid(&ctx, format!("mode must be `set` or `quotient`, got `{}`", c.mode)));
        }
    }
    Ok(Scene { planes, curves, matrices, checks })
}

impl Scene {
    pub fn plane(&self, label: &str) -> Option<PlaneImage> {
        self.planes.iter().find(|p| p.label == label).cloned().or_else(|| PlaneImage::builtin(label))
    }
}

pub fn parse_triple(v: &Value, ctx: &str) -> Result<SuTriple, ManifestError> {
    let arr = v.as_array().ok_or_else(|| invalid(ctx, "initial triple must be an array of nine numbers"))?;
    let flat: Vec<f64> = match arr.len() {
        9 => arr.iter().map(|x| number(x, ctx)).collect::<Result<_, _>>()?,
        3 => {
            let mut out = Vec::with_capacity(9);
            for row in arr {
                let r = row.as_array().filter(|r| r.len() == 3).ok_or_else(|| invalid(ctx, "expected three 3-vectors"))?;
                for x in r {
                    out.push(number(x, ctx)?);
                }
            }
            out
        }
        n => return Err(invalid(ctx, format!("expected 9 numbers or three 3-vectors, got {n} entries"))),
    };
    let mut a = [0.0; 9];
    a.copy_from_slice(&flat);
    Ok(SuTriple::from_flat(&a))
}

fn number(v: &Value, ctx: &str) -> Result<f64, ManifestError> {
    use num_traits::ToPrimitive;
    let q = value_to_q(v).map_err(|e| invalid(ctx, e.to_string()))?;
    q.to_f64().filter(|x| x.is_finite()).ok_or_else(|| invalid(ctx, "entry out of range"))
}

/// A batch: an array whose items are either a bare triple or
/// `{"b0": triple, "params": {...}}`.
pub fn parse_flow_batch(v: &Value) -> Result<Vec<FlowItem>, ManifestError> {
    let arr = v.as_array().ok_or_else(|| invalid("batch", "expected an array of initial conditions"))?;
    arr.iter()
        .enumerate()
        .map(|(i, item)| {
            let ctx = format!("item {i}");
            match item {
                Value::Object(o) => {
                    let b0 = parse_triple(o.get("b0").ok_or_else(|| invalid(&ctx, "missing `b0`"))?, &ctx)?;
                    let params = match o.get("params") {
                        Some(p) => serde_json::from_value(p.clone()).map_err(|e| invalid(&ctx, format!("params: {e}")))?,
                        None => FlowParams::default(),
                    };
                    Ok(FlowItem { b0, params })
                }
                other => Ok(FlowItem { b0: parse_triple(other, &ctx)?, params: FlowParams::default() }),
            }
        })
        .collect()
}
