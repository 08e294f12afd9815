//! Instance files: JSON documents with exact rationals written as strings.

use ghostcalc_core::cochain::Cochain;
use ghostcalc_core::ghost_ring::{GhostRing, Limits};
use ghostcalc_core::graded::{Convention, GradedBasis};
use ghostcalc_core::linf::{BracketFamily, RepresentationFamily};
use ghostcalc_core::rational::{parse_rational, Matrix, Vector, Q};
use ghostcalc_core::Error as CoreError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub convention: ConventionTag,
    #[serde(default = "yes")]
    pub skew: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<LimitsSpec>,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepresentationSpec>,
    #[serde(default)]
    pub cochains: Vec<CochainSpec>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionTag {
    #[default]
    Primary,
    StandardKoszul,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsSpec {
    pub max_arity: usize,
    pub exponent_cap: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    #[serde(default)]
    pub vdeg: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub inputs: Vec<String>,
    pub output: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationSpec {
    pub module_dim: usize,
    #[serde(default)]
    pub maps: Vec<MapSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub inputs: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainSpec {
    pub name: String,
    pub arity: usize,
    #[serde(default)]
    pub values: Vec<CochainValueSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainValueSpec {
    pub inputs: Vec<String>,
    pub value: Vec<String>,
}

/// One problem found while loading, with the path of the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<ValidationError>),
}

/// A fully validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub ring: Arc<GhostRing>,
    pub brackets: BracketFamily,
    pub representation: Option<RepresentationFamily>,
    pub cochains: Vec<(String, Cochain)>,
}

impl Instance {
    pub fn is_skew(&self) -> bool {
        self.brackets.is_skew()
    }

    pub fn module_dim(&self) -> usize {
        self.representation.as_ref().map_or(1, |r| r.module_dim())
    }

    pub fn cochain(&self, name: &str) -> Option<&Cochain> {
        self.cochains.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

pub fn load(path: &Path) -> Result<Instance, LoadError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: display.clone(), source })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("instance").to_string();
    parse(&text, &display, &stem)
}

pub fn parse(text: &str, path: &str, default_name: &str) -> Result<Instance, LoadError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| LoadError::Syntax {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate(&file, default_name).map_err(LoadError::Invalid)
}

struct Collector {
    errors: Vec<ValidationError>,
}

impl Collector {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(ValidationError { path: path.into(), message: message.into() });
    }

    fn rational(&mut self, path: String, s: &str) -> Option<Q> {
        let r = parse_rational(s);
        if r.is_none() {
            self.push(path, format!("malformed rational `{s}`"));
        }
        r
    }

    fn tuple(&mut self, path: &str, basis: &GradedBasis, names: &[String]) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        let mut ok = true;
        for (i, n) in names.iter().enumerate() {
            match basis.index_of(n) {
                Some(j) => out.push(j),
                None => {
                    self.push(format!("{path}.inputs[{i}]"), format!("unknown generator `{n}`"));
                    ok = false;
                }
            }
        }
        ok.then_some(out)
    }
}

/// Values that can be transported along the exchange law.
trait Entry: PartialEq {
    fn signed(&self, s: i8) -> Self;
    fn vanishes(&self) -> bool;
}

impl Entry for Vector {
    fn signed(&self, s: i8) -> Self {
        self.scaled(&Q::from_integer(s.into()))
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

impl Entry for Matrix {
    fn signed(&self, s: i8) -> Self {
        self.scaled(&Q::from_integer(s.into()))
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

/// Groups entries by their storage key and rejects repeats: an identical
/// value (after transport) is a duplicate, a different one breaks skewness.
struct Dedup<'r, T> {
    ring: &'r GhostRing,
    skew: bool,
    seen: BTreeMap<Vec<usize>, (String, T)>,
}

impl<'r, T: Entry> Dedup<'r, T> {
    fn new(ring: &'r GhostRing, skew: bool) -> Self {
        Dedup { ring, skew, seen: BTreeMap::new() }
    }

    fn admit(&mut self, c: &mut Collector, path: &str, tuple: &[usize], value: &T) -> bool {
        let (key, stored) = if self.skew {
            let s = self.ring.word_sign(tuple);
            if s == 0 {
                if !value.vanishes() {
                    c.push(path, "skewness violation: a repeated anticommuting generator must give zero");
                }
                return false;
            }
            let mut key = tuple.to_vec();
            key.sort_unstable();
            (key, value.signed(s))
        } else {
            (tuple.to_vec(), value.signed(1))
        };
        if let Some((first, prev)) = self.seen.get(&key) {
            if *prev == stored {
                c.push(path, format!("duplicate tuple (already given at {first})"));
            } else {
                c.push(path, format!("skewness violation: conflicts with {first}"));
            }
            return false;
        }
        self.seen.insert(key, (path.to_string(), stored));
        true
    }
}

fn core_message(e: &CoreError, basis: &GradedBasis) -> String {
    match e {
        CoreError::NonHomogeneous { output, got, expected, .. } => format!(
            "output `{}` has degree {got}, but a bracket of these inputs must land in degree {expected}",
            basis.name(*output)
        ),
        other => other.to_string(),
    }
}

pub fn validate(file: &InstanceFile, default_name: &str) -> Result<Instance, Vec<ValidationError>> {
    let mut c = Collector { errors: Vec::new() };
    if file.format_version != FORMAT_VERSION {
        c.push("format_version", format!("unsupported version {}, expected {FORMAT_VERSION}", file.format_version));
    }
    if file.field != "Q" {
        c.push("field", format!("unsupported field `{}`, only \"Q\" is available", file.field));
    }
    let mut seen_names = BTreeMap::new();
    for (i, g) in file.generators.iter().enumerate() {
        if g.name.is_empty() {
            c.push(format!("generators[{i}].name"), "empty generator name");
        }
        if let Some(prev) = seen_names.insert(g.name.clone(), i) {
            c.push(format!("generators[{i}].name"), format!("duplicate generator `{}` (also generators[{prev}])", g.name));
        }
    }
    if !c.errors.is_empty() {
        return Err(c.errors);
    }
    let basis = GradedBasis::new(file.generators.iter().map(|g| (g.name.clone(), g.vdeg))).map_err(|e| {
        vec![ValidationError { path: "generators".into(), message: e.to_string() }]
    })?;
    let convention = match file.convention {
        ConventionTag::Primary => Convention::Primary,
        ConventionTag::StandardKoszul => Convention::StandardKoszul,
    };
    let limits = match &file.limits {
        Some(l) => {
            if l.max_arity > 8 {
                c.push("limits.max_arity", "at most 8 is supported");
            }
            Limits { max_arity: l.max_arity, exponent_cap: l.exponent_cap }
        }
        None => Limits::default(),
    };
    let ring = GhostRing::with_limits(basis.clone(), convention, limits);
    let dim = basis.len();
    let skew = file.skew;

    let mut brackets = BracketFamily::new(&ring, skew);
    let mut dedup = Dedup::new(&ring, skew);
    for (i, b) in file.brackets.iter().enumerate() {
        let path = format!("brackets[{i}]");
        let Some(tuple) = c.tuple(&path, &basis, &b.inputs) else { continue };
        if tuple.is_empty() {
            c.push(format!("{path}.inputs"), "a bracket needs at least one input");
            continue;
        }
        if tuple.len() > limits.max_arity {
            c.push(format!("{path}.inputs"), format!("arity {} exceeds the maximum {}", tuple.len(), limits.max_arity));
            continue;
        }
        let mut v = Vector::zeros(dim);
        let mut ok = true;
        for (name, coef) in &b.output {
            let field = format!("{path}.output[\"{name}\"]");
            match (basis.index_of(name), c.rational(field.clone(), coef)) {
                (Some(j), Some(x)) => v.0[j] = x,
                (None, _) => {
                    c.push(field, format!("unknown generator `{name}`"));
                    ok = false;
                }
                _ => ok = false,
            }
        }
        if !ok {
            continue;
        }
        if !dedup.admit(&mut c, &path, &tuple, &v) {
            continue;
        }
        if let Err(e) = brackets.set(&tuple, v) {
            c.push(path, core_message(&e, &basis));
        }
    }

    let mut representation = None;
    if let Some(r) = &file.representation {
        let md = r.module_dim;
        if md == 0 {
            c.push("representation.module_dim", "module dimension must be positive");
        }
        let mut rep = RepresentationFamily::new(&ring, md, skew);
        let mut dedup = Dedup::new(&ring, skew);
        for (i, m) in r.maps.iter().enumerate() {
            let path = format!("representation.maps[{i}]");
            let Some(tuple) = c.tuple(&path, &basis, &m.inputs) else { continue };
            if tuple.is_empty() {
                c.push(format!("{path}.inputs"), "a representation map needs at least one input");
                continue;
            }
            if m.matrix.len() != md || m.matrix.iter().any(|row| row.len() != md) {
                c.push(format!("{path}.matrix"), format!("expected a {md}×{md} matrix"));
                continue;
            }
            let mut rows = Vec::with_capacity(md);
            let mut ok = true;
            for (a, row) in m.matrix.iter().enumerate() {
                let mut out = Vec::with_capacity(md);
                for (b, s) in row.iter().enumerate() {
                    match c.rational(format!("{path}.matrix[{a}][{b}]"), s) {
                        Some(x) => out.push(x),
                        None => ok = false,
                    }
                }
                rows.push(out);
            }
            if !ok {
                continue;
            }
            let mat = Matrix { dim: md, rows };
            if !dedup.admit(&mut c, &path, &tuple, &mat) {
                continue;
            }
            if let Err(e) = rep.set(&tuple, mat) {
                c.push(path, core_message(&e, &basis));
            }
        }
        representation = Some(rep);
    }
    let md = file.representation.as_ref().map_or(1, |r| r.module_dim);

    let mut cochains = Vec::new();
    let mut cochain_names = BTreeMap::new();
    for (i, spec) in file.cochains.iter().enumerate() {
        let path = format!("cochains[{i}]");
        if let Some(prev) = cochain_names.insert(spec.name.clone(), i) {
            c.push(format!("{path}.name"), format!("duplicate cochain name `{}` (also cochains[{prev}])", spec.name));
        }
        if spec.arity > limits.max_arity {
            c.push(format!("{path}.arity"), format!("arity {} exceeds the maximum {}", spec.arity, limits.max_arity));
            continue;
        }
        let mut omega = Cochain::zero(&ring, spec.arity, md, skew);
        let mut dedup = Dedup::new(&ring, skew);
        for (j, v) in spec.values.iter().enumerate() {
            let vpath = format!("{path}.values[{j}]");
            let Some(tuple) = c.tuple(&vpath, &basis, &v.inputs) else { continue };
            if tuple.len() != spec.arity {
                c.push(format!("{vpath}.inputs"), format!("expected {} inputs, found {}", spec.arity, tuple.len()));
                continue;
            }
            if v.value.len() != md {
                c.push(format!("{vpath}.value"), format!("expected {md} coordinates, found {}", v.value.len()));
                continue;
            }
            let coords: Vec<Option<Q>> =
                v.value.iter().enumerate().map(|(k, s)| c.rational(format!("{vpath}.value[{k}]"), s)).collect();
            let Some(coords) = coords.into_iter().collect::<Option<Vec<Q>>>() else { continue };
            let vec = Vector(coords);
            if !dedup.admit(&mut c, &vpath, &tuple, &vec) {
                continue;
            }
            if let Err(e) = omega.set(&tuple, vec) {
                c.push(vpath, e.to_string());
            }
        }
        cochains.push((spec.name.clone(), omega));
    }

    if !c.errors.is_empty() {
        return Err(c.errors);
    }
    Ok(Instance {
        name: file.name.clone().unwrap_or_else(|| default_name.to_string()),
        ring,
        brackets,
        representation,
        cochains,
    })
}

fn names(ring: &GhostRing, t: &[usize]) -> Vec<String> {
    t.iter().map(|&i| ring.basis().name(i).to_string()).collect()
}

/// Serializable form of an instance. Entries are written on their stored tuples,
/// so `validate(&export(..))` reproduces the same families.
pub fn export(
    name: &str,
    brackets: &BracketFamily,
    representation: Option<&RepresentationFamily>,
    cochains: &[(String, Cochain)],
) -> InstanceFile {
    use ghostcalc_core::rational::format_rational;
    let ring = brackets.ring();
    let limits = ring.limits();
    let brackets_out = brackets
        .entries()
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(t, v)| BracketSpec {
            inputs: names(ring, t),
            output: v
                .0
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(i, c)| (ring.basis().name(i).to_string(), format_rational(c)))
                .collect(),
        })
        .collect();
    let representation = representation.map(|rep| RepresentationSpec {
        module_dim: rep.module_dim(),
        maps: rep
            .maps()
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(t, m)| MapSpec {
                inputs: names(ring, t),
                matrix: m.rows.iter().map(|row| row.iter().map(format_rational).collect()).collect(),
            })
            .collect(),
    });
    let cochains = cochains
        .iter()
        .map(|(n, c)| CochainSpec {
            name: n.clone(),
            arity: c.arity(),
            values: c
                .values()
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(t, v)| CochainValueSpec { inputs: names(ring, t), value: v.0.iter().map(format_rational).collect() })
                .collect(),
        })
        .collect();
    InstanceFile {
        format_version: FORMAT_VERSION,
        field: "Q".into(),
        name: Some(name.to_string()),
        convention: match ring.convention() {
            Convention::Primary => ConventionTag::Primary,
            Convention::StandardKoszul => ConventionTag::StandardKoszul,
        },
        skew: brackets.is_skew(),
        limits: (limits != Limits::default())
            .then_some(LimitsSpec { max_arity: limits.max_arity, exponent_cap: limits.exponent_cap }),
        generators: ring
            .basis()
            .generators()
            .iter()
            .map(|g| GeneratorSpec { name: g.name.clone(), vdeg: g.vdeg })
            .collect(),
        brackets: brackets_out,
        representation,
        cochains,
    }
}
