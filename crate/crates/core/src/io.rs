//! JSON formats for every object of the pipeline.
//!
//! Wherever a file embeds another object (a filtration's lattice, a
//! morphism's endpoints, a path's steps) it may give it inline or as a path
//! string, resolved relative to the directory of the referring file.
//! Distances are numbers or the string `"inf"`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::birthdeath::{IntervalFunction, MonMorphism};
use crate::classical::classical_lattice;
use crate::complex::SimplicialComplex;
use crate::distances::embedding::{coord_name, RealEmbedding};
use crate::distances::matching::{Diagram, Matching};
use crate::distances::path::{Direction, MorphismPath, Step};
use crate::error::{Error, Result};
use crate::filtration::{Filtration, FiltrationMorphism};
use crate::lattice::{
    interval_lattice, BoundedLatticeMap, FiniteMetricLattice, LatticeSpec, LiftedMap, MetricSpec, OrderSpec,
};
use crate::mobius::ChargeMorphism;

/// A JSON value together with the directory its relative references resolve against.
#[derive(Debug, Clone)]
pub struct Doc {
    pub value: Value,
    pub dir: PathBuf,
}

impl Doc {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        let value = serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { value, dir })
    }

    pub fn inline(value: Value) -> Self {
        Self { value, dir: PathBuf::from(".") }
    }

    /// The field `key`, following a path reference if it is a string.
    fn child(&self, key: &str) -> Result<Doc> {
        let v = self.field(key)?;
        self.resolve(v)
    }

    fn resolve(&self, v: &Value) -> Result<Doc> {
        match v {
            Value::String(rel) => Doc::read(&self.dir.join(rel)),
            other => Ok(Doc { value: other.clone(), dir: self.dir.clone() }),
        }
    }

    fn field(&self, key: &str) -> Result<&Value> {
        self.value.get(key).ok_or_else(|| Error::Format(format!("missing field `{key}`")))
    }
}

/// What kind of object a document describes, judged by its keys.
pub fn kind_of(v: &Value) -> &'static str {
    let has = |k: &str| v.get(k).is_some();
    if has("steps") {
        "path"
    } else if has("entries") && !has("elements") {
        "matching"
    } else if has("values") && has("lattice") {
        "function"
    } else if has("values") {
        "classical"
    } else if has("assignment") {
        "filtration"
    } else if has("map") {
        "morphism"
    } else if has("elements") {
        "lattice"
    } else if has("simplices") {
        "complex"
    } else {
        "unknown"
    }
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Format(format!("{what} must be an array")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Format(format!("{what} must be an object")))
}

/// Element names may be written as strings or numbers.
fn name_of(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(i.to_string()),
            None => Ok(coord_name(n.as_f64().unwrap_or(f64::NAN))),
        },
        other => Err(Error::Format(format!("{other} is not an element name"))),
    }
}

fn ext_real(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Format(format!("{n} is not a number"))),
        Value::String(s) if matches!(s.as_str(), "inf" | "+inf" | "∞" | "Infinity") => Ok(f64::INFINITY),
        other => Err(Error::Format(format!("{other} is not a number or \"inf\""))),
    }
}

/// Numbers as JSON numbers, +∞ as `"inf"`.
pub fn ext_real_json(x: f64) -> Value {
    if x.is_infinite() {
        json!("inf")
    } else if x.fract() == 0.0 && x.abs() < 1e15 {
        json!(x as i64)
    } else {
        json!(x)
    }
}

fn int(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::Format(format!("{what} must be an integer")))
}

fn pairs(v: &Value, what: &str) -> Result<Vec<(String, String)>> {
    as_array(v, what)?
        .iter()
        .map(|p| match p.as_array().map(|a| a.as_slice()) {
            Some([a, b]) => Ok((name_of(a)?, name_of(b)?)),
            _ => Err(Error::Format(format!("each entry of {what} must be a pair"))),
        })
        .collect()
}

/// A lattice plus optional explicit coordinates for its elements.
#[derive(Debug, Clone)]
pub struct LoadedLattice {
    pub lattice: Arc<FiniteMetricLattice>,
    pub coords: Option<Vec<f64>>,
}

impl LoadedLattice {
    /// Explicit coordinates if given, otherwise numeric element names.
    pub fn embedding(&self) -> Result<RealEmbedding> {
        match &self.coords {
            Some(c) => RealEmbedding::new(self.lattice.clone(), c.clone()),
            None => RealEmbedding::from_names(self.lattice.clone()),
        }
    }
}

pub fn lattice_spec(doc: &Doc) -> Result<LatticeSpec> {
    let elements =
        as_array(doc.field("elements")?, "elements")?.iter().map(name_of).collect::<Result<Vec<_>>>()?;
    let order = match (doc.value.get("covers"), doc.value.get("leq")) {
        (Some(c), None) => OrderSpec::Covers(pairs(c, "covers")?),
        (None, Some(l)) => OrderSpec::Leq(pairs(l, "leq")?),
        (None, None) => OrderSpec::Covers(Vec::new()),
        (Some(_), Some(_)) => return Err(Error::Format("give either `covers` or `leq`, not both".into())),
    };
    let metric = match doc.value.get("metric") {
        None => MetricSpec::Hasse,
        Some(m) => match m.get("type").and_then(Value::as_str) {
            Some("hasse") => MetricSpec::Hasse,
            Some("explicit") => {
                let entries = as_array(m.get("entries").unwrap_or(&Value::Null), "metric entries")?
                    .iter()
                    .map(|e| match e.as_array().map(|a| a.as_slice()) {
                        Some([a, b, d]) => Ok((name_of(a)?, name_of(b)?, ext_real(d)?)),
                        _ => Err(Error::Format("metric entries are [a, b, distance]".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                MetricSpec::Explicit(entries)
            }
            _ => return Err(Error::Format("metric type must be \"hasse\" or \"explicit\"".into())),
        },
    };
    Ok(LatticeSpec { elements, order, metric })
}

pub fn load_lattice(doc: &Doc) -> Result<LoadedLattice> {
    let lattice = Arc::new(FiniteMetricLattice::validate(&lattice_spec(doc)?)?);
    let coords = match doc.value.get("coords") {
        None => None,
        Some(c) => {
            let map = as_object(c, "coords")?;
            let coords = lattice
                .names()
                .iter()
                .map(|n| {
                    map.get(n)
                        .ok_or_else(|| Error::NoEmbedding(format!("no coordinate for `{n}`")))
                        .and_then(ext_real)
                })
                .collect::<Result<Vec<_>>>()?;
            Some(coords)
        }
    };
    Ok(LoadedLattice { lattice, coords })
}

/// Lattice of any document that has one: a lattice file, or the index of a
/// filtration or function.
pub fn lattice_of(doc: &Doc) -> Result<LoadedLattice> {
    match kind_of(&doc.value) {
        "lattice" => load_lattice(doc),
        "filtration" | "function" => load_lattice(&doc.child("lattice")?),
        "classical" => {
            let values = classical_values(doc)?;
            let e = classical_lattice(&values)?;
            Ok(LoadedLattice { lattice: e.lattice().clone(), coords: Some(e.coords().to_vec()) })
        }
        other => Err(Error::Format(format!("a {other} document has no index lattice"))),
    }
}

fn simplices(v: &Value, what: &str) -> Result<Vec<Vec<u32>>> {
    as_array(v, what)?
        .iter()
        .map(|s| {
            as_array(s, "simplex")?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .and_then(|x| u32::try_from(x).ok())
                        .ok_or_else(|| Error::Format(format!("vertex {x} is not a non-negative integer")))
                })
                .collect()
        })
        .collect()
}

pub fn load_complex(doc: &Doc) -> Result<Arc<SimplicialComplex>> {
    Ok(Arc::new(SimplicialComplex::validate(&simplices(doc.field("simplices")?, "simplices")?)?))
}

fn assignment(doc: &Doc) -> Result<BTreeMap<String, Vec<Vec<u32>>>> {
    as_object(doc.field("assignment")?, "assignment")?
        .iter()
        .map(|(k, v)| Ok((k.clone(), simplices(v, "assignment")?)))
        .collect()
}

pub fn load_filtration(doc: &Doc) -> Result<Filtration> {
    if kind_of(&doc.value) == "classical" {
        return load_classical(doc).map(|(f, _)| f);
    }
    let lattice = load_lattice(&doc.child("lattice")?)?.lattice;
    let complex = load_complex(&doc.child("complex")?)?;
    Filtration::from_generators(lattice, complex, &assignment(doc)?)
}

fn classical_values(doc: &Doc) -> Result<Vec<f64>> {
    as_array(doc.field("values")?, "values")?.iter().map(ext_real).collect()
}

/// A classical filtration; the `inf` stage defaults to the whole complex.
pub fn load_classical(doc: &Doc) -> Result<(Filtration, RealEmbedding)> {
    let embedding = classical_lattice(&classical_values(doc)?)?;
    let complex = load_complex(&doc.child("complex")?)?;
    let mut stages = assignment(doc)?;
    stages.entry("inf".to_string()).or_insert_with(|| complex.simplices().to_vec());
    let f = Filtration::from_generators(embedding.lattice().clone(), complex, &stages)?;
    Ok((f, embedding))
}

/// A function over `Int P`; omitted intervals are zero.
pub fn load_function(doc: &Doc) -> Result<(IntervalFunction, LoadedLattice)> {
    let base = load_lattice(&doc.child("lattice")?)?;
    let index = interval_lattice(&base.lattice);
    let entries = as_array(doc.field("values")?, "values")?
        .iter()
        .map(|e| match e.as_array().map(|a| a.as_slice()) {
            Some([lo, hi, v]) => Ok((name_of(lo)?, name_of(hi)?, int(v, "function value")?)),
            _ => Err(Error::Format("function values are [lo, hi, integer]".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((IntervalFunction::from_named(index, &entries)?, base))
}

pub fn load_diagram(doc: &Doc) -> Result<Diagram> {
    let (f, base) = load_function(doc)?;
    Diagram::new(f, base.embedding()?)
}

/// The two ends of a morphism file, each a lattice, filtration or function.
pub enum End {
    Lattice(LoadedLattice),
    Filtration(Filtration),
    Function(IntervalFunction),
}

impl End {
    fn load(doc: &Doc) -> Result<Self> {
        match kind_of(&doc.value) {
            "lattice" => Ok(End::Lattice(load_lattice(doc)?)),
            "filtration" | "classical" => Ok(End::Filtration(load_filtration(doc)?)),
            "function" => Ok(End::Function(load_function(doc)?.0)),
            other => Err(Error::Format(format!("a morphism end cannot be a {other}"))),
        }
    }

    pub fn lattice(&self) -> &Arc<FiniteMetricLattice> {
        match self {
            End::Lattice(l) => &l.lattice,
            End::Filtration(f) => f.index(),
            End::Function(f) => f.base(),
        }
    }
}

/// A morphism file: `{"source": …, "target": …, "map": {a: b, …}}`.
pub struct LoadedMorphism {
    pub source: End,
    pub target: End,
    pub map: BoundedLatticeMap,
}

fn name_map(v: &Value) -> Result<BTreeMap<String, String>> {
    as_object(v, "map")?.iter().map(|(k, v)| Ok((k.clone(), name_of(v)?))).collect()
}

pub fn load_morphism(doc: &Doc) -> Result<LoadedMorphism> {
    let source = End::load(&doc.child("source")?)?;
    let target = End::load(&doc.child("target")?)?;
    let map = BoundedLatticeMap::from_names(source.lattice().clone(), target.lattice().clone(), &name_map(doc.field("map")?)?)?;
    Ok(LoadedMorphism { source, target, map })
}

/// A lattice map whose source is supplied by the caller (`kan`).
pub fn load_map_from(doc: &Doc, source: &Arc<FiniteMetricLattice>) -> Result<BoundedLatticeMap> {
    let target = End::load(&doc.child("target")?)?;
    BoundedLatticeMap::from_names(source.clone(), target.lattice().clone(), &name_map(doc.field("map")?)?)
}

impl LoadedMorphism {
    pub fn filtrations(self) -> Result<(Filtration, Filtration, BoundedLatticeMap)> {
        match (self.source, self.target) {
            (End::Filtration(f), End::Filtration(g)) => Ok((f, g, self.map)),
            _ => Err(Error::Format("a filtration morphism needs filtrations at both ends".into())),
        }
    }

    pub fn functions(self) -> Result<(IntervalFunction, IntervalFunction, LiftedMap)> {
        match (self.source, self.target) {
            (End::Function(f), End::Function(g)) => {
                let lifted = LiftedMap::between(&self.map, f.index(), g.index())?;
                Ok((f, g, lifted))
            }
            _ => Err(Error::Format("this morphism needs interval functions at both ends".into())),
        }
    }
}

/// A path in whichever category its file names.
pub enum AnyPath {
    Fil(MorphismPath<FiltrationMorphism>),
    Mon(MorphismPath<MonMorphism>),
    Fnc(MorphismPath<ChargeMorphism>),
}

pub fn load_path(doc: &Doc) -> Result<AnyPath> {
    let category = doc.field("category")?.as_str().unwrap_or_default().to_ascii_lowercase();
    let steps = as_array(doc.field("steps")?, "steps")?;
    let mut parsed = Vec::with_capacity(steps.len());
    for (k, step) in steps.iter().enumerate() {
        let direction = match step.get("direction").and_then(Value::as_str) {
            Some("fwd" | "forward") => Direction::Forward,
            Some("bwd" | "backward") => Direction::Backward,
            _ => return Err(Error::Format(format!("step {k}: direction must be \"fwd\" or \"bwd\""))),
        };
        let m = step.get("morphism").ok_or_else(|| Error::Format(format!("step {k}: missing morphism")))?;
        parsed.push((direction, load_morphism(&doc.resolve(m)?)?));
    }
    let invalid = |k: usize, e: Error| Error::InvalidStep { index: k, reason: e.to_string() };
    match category.as_str() {
        "fil" => {
            let mut out = Vec::new();
            for (k, (direction, m)) in parsed.into_iter().enumerate() {
                let (f, g, a) = m.filtrations()?;
                out.push(Step { direction, morphism: FiltrationMorphism::new(f, g, a).map_err(|e| invalid(k, e))? });
            }
            Ok(AnyPath::Fil(MorphismPath::new(out)))
        }
        "mon" => {
            let mut out = Vec::new();
            for (k, (direction, m)) in parsed.into_iter().enumerate() {
                let (f, g, a) = m.functions()?;
                out.push(Step { direction, morphism: MonMorphism::new(f, g, a).map_err(|e| invalid(k, e))? });
            }
            Ok(AnyPath::Mon(MorphismPath::new(out)))
        }
        "fnc" => {
            let mut out = Vec::new();
            for (k, (direction, m)) in parsed.into_iter().enumerate() {
                let (f, g, a) = m.functions()?;
                out.push(Step { direction, morphism: ChargeMorphism::new(f, g, a).map_err(|e| invalid(k, e))? });
            }
            Ok(AnyPath::Fnc(MorphismPath::new(out)))
        }
        other => Err(Error::Format(format!("unknown category `{other}`"))),
    }
}

/// Matching entries `[[loI, hiI, loJ, hiJ, count], …]` between two diagrams.
pub fn load_matching(doc: &Doc, source: Diagram, target: Diagram) -> Result<Matching> {
    let entries = as_array(doc.field("entries")?, "entries")?
        .iter()
        .map(|e| match e.as_array().map(|a| a.as_slice()) {
            Some([a, b, c, d, n]) => Ok((name_of(a)?, name_of(b)?, name_of(c)?, name_of(d)?, int(n, "count")?)),
            _ => Err(Error::Format("matching entries are [loI, hiI, loJ, hiJ, count]".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    Matching::from_named(source, target, &entries)
}

pub fn lattice_to_json(p: &FiniteMetricLattice, coords: Option<&[f64]>) -> Value {
    let n = p.len();
    let covers: Vec<Value> = p.covers().iter().map(|&(a, b)| json!([p.name(a), p.name(b)])).collect();
    let mut entries = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            entries.push(json!([p.name(a), p.name(b), ext_real_json(p.dist(a, b))]));
        }
    }
    let mut out = json!({
        "elements": p.names(),
        "covers": covers,
        "metric": {"type": "explicit", "entries": entries},
    });
    if let Some(c) = coords {
        let map: Map<String, Value> = (0..n).map(|a| (p.name(a).to_string(), ext_real_json(c[a]))).collect();
        out["coords"] = Value::Object(map);
    }
    out
}

/// `{"lattice": …, "values": [[lo, hi, v], …]}`; zeros only with `full`.
pub fn function_to_json(f: &IntervalFunction, coords: Option<&[f64]>, full: bool) -> Value {
    let base = f.base();
    let values: Vec<Value> = f
        .index()
        .intervals()
        .iter()
        .enumerate()
        .filter(|&(k, _)| full || f.value(k) != 0)
        .map(|(k, iv)| json!([base.name(iv.lo), base.name(iv.hi), f.value(k)]))
        .collect();
    json!({"lattice": lattice_to_json(base, coords), "values": values})
}

pub fn diagram_to_json(d: &Diagram, full: bool) -> Value {
    function_to_json(d.function(), Some(d.embedding().coords()), full)
}

/// A filtration with inline lattice and complex, stages as maximal simplices.
pub fn filtration_to_json(f: &Filtration) -> Value {
    let (p, k) = (f.index(), f.complex());
    let assignment: Map<String, Value> =
        (0..p.len()).map(|a| (p.name(a).to_string(), json!(k.maximal(f.stage(a))))).collect();
    json!({
        "lattice": lattice_to_json(p, None),
        "complex": {"simplices": k.maximal(&k.full())},
        "assignment": assignment,
    })
}

pub fn map_to_json(m: &BoundedLatticeMap) -> Value {
    let (p, q) = (m.source(), m.target());
    let map: Map<String, Value> =
        (0..p.len()).map(|a| (p.name(a).to_string(), json!(q.name(m.apply(a))))).collect();
    Value::Object(map)
}

pub fn matching_to_json(gamma: &Matching) -> Value {
    let entries: Vec<Value> =
        gamma.named_entries().into_iter().map(|(a, b, c, d, n)| json!([a, b, c, d, n])).collect();
    json!({"entries": entries})
}

/// A self-contained `fnc` path file with every object inline.
pub fn charge_path_to_json(path: &MorphismPath<ChargeMorphism>) -> Value {
    let steps: Vec<Value> = path
        .steps()
        .iter()
        .map(|s| {
            let m = &s.morphism;
            let fn_json = |f: &IntervalFunction| {
                let coords = RealEmbedding::from_names(f.base().clone()).ok().map(|e| e.coords().to_vec());
                function_to_json(f, coords.as_deref(), false)
            };
            json!({
                "direction": if s.direction == Direction::Forward { "fwd" } else { "bwd" },
                "distortion": ext_real_json(m.distortion()),
                "morphism": {
                    "source": fn_json(m.source()),
                    "target": fn_json(m.target()),
                    "map": map_to_json(m.map().base()),
                },
            })
        })
        .collect();
    json!({"category": "fnc", "steps": steps})
}

/// Indented JSON with short rows (arrays of scalars, or of such arrays) kept
/// on one line; keys are sorted, so output is byte-for-byte reproducible.
pub fn to_text(v: &Value) -> String {
    fn scalar(v: &Value) -> bool {
        !matches!(v, Value::Array(_) | Value::Object(_))
    }
    fn flat(v: &Value) -> bool {
        match v {
            Value::Array(items) => items.iter().all(|x| scalar(x) || matches!(x, Value::Array(a) if a.iter().all(scalar))),
            _ => scalar(v),
        }
    }
    fn go(v: &Value, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth + 1);
        match v {
            Value::Object(map) if !map.is_empty() => {
                out.push_str("{\n");
                for (n, (k, x)) in map.iter().enumerate() {
                    out.push_str(&pad);
                    out.push_str(&Value::String(k.clone()).to_string());
                    out.push_str(": ");
                    go(x, depth + 1, out);
                    out.push_str(if n + 1 < map.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(depth));
                out.push('}');
            }
            Value::Array(items) if !flat(v) => {
                out.push_str("[\n");
                for (n, x) in items.iter().enumerate() {
                    out.push_str(&pad);
                    go(x, depth + 1, out);
                    out.push_str(if n + 1 < items.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(depth));
                out.push(']');
            }
            other => inline(other, out),
        }
    }
    fn inline(v: &Value, out: &mut String) {
        match v {
            Value::Array(items) => {
                out.push('[');
                for (n, x) in items.iter().enumerate() {
                    if n > 0 {
                        out.push_str(", ");
                    }
                    inline(x, out);
                }
                out.push(']');
            }
            other => out.push_str(&other.to_string()),
        }
    }
    let mut out = String::new();
    go(v, 0, &mut out);
    out.push('\n');
    out
}
