//! Problem documents: a JSON schema for the criteria tree, linguistic scales,
//! profiles, preference functions, alternatives and simulation settings.
//!
//! Parsing resolves every cross-reference up front (scale terms, label paths)
//! so a [`Problem`] is always internally consistent. [`Problem::to_json`]
//! writes the canonical form: per-criterion entries fully expanded and
//! alternatives as arrays in elementary-criterion order.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, ErrorCode, Result};
use crate::flows::{check_profile_row, check_within_profiles, ProfileSet, Rule};
use crate::fuzzy::{DefuzzMethod, Tfn};
use crate::hierarchy::{CriteriaTree, NodeSpec, NodeWeights, TreeSpec, WeightSpec, ROOT};
use crate::preference::{Direction, Preference, Shape};
use crate::smaa::values::{Distribution, PreferenceSpec, StochasticValue};
use crate::smaa::weights::point_weights;

pub const SCHEMA_VERSION: u64 = 1;

/// Ordered list of terms, each mapped to a fuzzy number.
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticScale {
    name: String,
    terms: Vec<(String, Tfn)>,
}

impl LinguisticScale {
    /// Modes must be strictly monotone (either direction) along the list.
    pub fn new(name: impl Into<String>, terms: Vec<(String, Tfn)>) -> Result<Self> {
        let name = name.into();
        if terms.is_empty() {
            return Err(Error::new(ErrorCode::Schema, format!("scale `{name}` has no terms")));
        }
        let up = terms.windows(2).all(|w| w[0].1.m < w[1].1.m);
        let down = terms.windows(2).all(|w| w[0].1.m > w[1].1.m);
        if !(up || down) {
            return Err(Error::new(
                ErrorCode::ScaleOrder,
                format!("modes of scale `{name}` are not strictly monotone"),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some((dup, _)) = terms.iter().find(|(t, _)| !seen.insert(t.as_str())) {
            return Err(Error::new(ErrorCode::Schema, format!("scale `{name}` lists term `{dup}` twice")));
        }
        Ok(LinguisticScale { name, terms })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> &[(String, Tfn)] {
        &self.terms
    }

    pub fn lookup(&self, term: &str) -> Option<Tfn> {
        self.terms.iter().find(|(t, _)| t == term).map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alternative {
    pub name: String,
    /// One value per elementary criterion, in canonical order.
    pub values: Vec<StochasticValue>,
}

/// Simulation settings stored with the problem; command-line flags override
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct SmaaSettings {
    pub iterations: u64,
    pub seed: u64,
    pub rule: Rule,
    pub defuzz: DefuzzMethod,
    pub max_attempts: u64,
    /// Exploitation threshold for the acceptability of the final category.
    pub threshold: f64,
    pub strict: bool,
}

impl Default for SmaaSettings {
    fn default() -> Self {
        SmaaSettings {
            iterations: 10_000,
            seed: 0,
            rule: Rule::Net,
            defuzz: DefuzzMethod::Centroid,
            max_attempts: 1_000_000,
            threshold: 0.5,
            strict: false,
        }
    }
}

/// A fully resolved sorting problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub categories: Vec<String>,
    pub scales: Vec<LinguisticScale>,
    pub default_scale: Option<String>,
    pub tree: CriteriaTree,
    /// One per elementary criterion.
    pub preferences: Vec<PreferenceSpec>,
    /// `k + 1` profile values per elementary criterion, best first.
    pub profiles: Vec<Vec<StochasticValue>>,
    pub alternatives: Vec<Alternative>,
    pub smaa: SmaaSettings,
}

/// Point-estimate inputs for a single engine run.
#[derive(Debug, Clone, PartialEq)]
pub struct PointInstance {
    pub weights: NodeWeights,
    pub preferences: Vec<Preference>,
    pub profiles: ProfileSet,
    pub evaluations: Vec<Vec<Tfn>>,
}

impl Problem {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::new(ErrorCode::Io, format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::new(ErrorCode::Schema, format!("invalid JSON: {e}")))?;
        Self::from_json(&value)
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        parse_problem(doc)
    }

    pub fn categories(&self) -> usize {
        self.categories.len()
    }

    pub fn scale(&self, name: &str) -> Option<&LinguisticScale> {
        self.scales.iter().find(|s| s.name == name)
    }

    /// True when no weight group or value carries any randomness.
    pub fn is_deterministic(&self) -> bool {
        self.tree.groups().all(|g| self.tree.node(g).weight_spec().is_some_and(WeightSpec::is_deterministic))
            && !self.preferences.iter().any(PreferenceSpec::is_random)
            && !self.profiles.iter().flatten().any(StochasticValue::is_random)
            && !self.alternatives.iter().flat_map(|a| &a.values).any(StochasticValue::is_random)
    }

    /// Inputs with every uncertain quantity replaced by its representative
    /// value.
    pub fn point_instance(&self) -> Result<PointInstance> {
        let mut weights = NodeWeights::unit(&self.tree);
        for g in self.tree.groups() {
            let node = self.tree.node(g);
            let spec = node.weight_spec().expect("groups carry weights");
            weights.set_group(&self.tree, g, &point_weights(spec, node.children().len()));
        }
        let preferences = self.preferences.iter().map(PreferenceSpec::point_estimate).collect::<Result<Vec<_>>>()?;
        let rows = self.profiles.iter().map(|r| r.iter().map(StochasticValue::point_estimate).collect()).collect();
        let profiles = ProfileSet::new(rows)?;
        let evaluations = self
            .alternatives
            .iter()
            .map(|a| a.values.iter().map(StochasticValue::point_estimate).collect())
            .collect();
        Ok(PointInstance { weights, preferences, profiles, evaluations })
    }

    pub fn to_json(&self) -> Value {
        let scales: Map<String, Value> = self
            .scales
            .iter()
            .map(|s| {
                let terms = s.terms.iter().map(|(t, v)| json!({"term": t, "tfn": tfn_json(*v)})).collect();
                (s.name.clone(), Value::Array(terms))
            })
            .collect();
        let leaf_paths: Vec<String> = self.tree.elementary().iter().map(|&id| self.tree.label_path(id)).collect();
        let preferences: Map<String, Value> = leaf_paths
            .iter()
            .zip(&self.preferences)
            .map(|(p, spec)| (p.clone(), preference_json(spec)))
            .collect();
        let profiles: Map<String, Value> = leaf_paths
            .iter()
            .zip(&self.profiles)
            .map(|(p, row)| (p.clone(), Value::Array(row.iter().map(value_json).collect())))
            .collect();
        let alternatives: Vec<Value> = self
            .alternatives
            .iter()
            .map(|a| json!({"name": a.name, "values": a.values.iter().map(value_json).collect::<Vec<_>>()}))
            .collect();
        let mut doc = Map::new();
        doc.insert("schema".into(), json!(SCHEMA_VERSION));
        doc.insert("categories".into(), json!(self.categories));
        doc.insert("scales".into(), Value::Object(scales));
        if let Some(d) = &self.default_scale {
            doc.insert("default_scale".into(), json!(d));
        }
        doc.insert("tree".into(), tree_json(&self.tree.to_spec()));
        doc.insert("preferences".into(), json!({ "criteria": preferences }));
        doc.insert("profiles".into(), json!({ "criteria": profiles }));
        doc.insert("alternatives".into(), Value::Array(alternatives));
        doc.insert(
            "smaa".into(),
            json!({
                "iterations": self.smaa.iterations,
                "seed": self.smaa.seed,
                "rule": self.smaa.rule.as_str(),
                "defuzz": self.smaa.defuzz.as_str(),
                "max_attempts": self.smaa.max_attempts,
                "threshold": self.smaa.threshold,
                "strict": self.smaa.strict,
            }),
        );
        Value::Object(doc)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("JSON values always serialize");
        s.push('\n');
        s
    }
}

pub fn parse_problem(doc: &Value) -> Result<Problem> {
    let top = object(doc, "$")?;
    allow_keys(
        top,
        "$",
        &["schema", "categories", "scales", "default_scale", "tree", "preferences", "profiles", "alternatives", "smaa", "description"],
    )?;
    match top.get("schema").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        _ => return Err(Error::at(ErrorCode::Schema, "schema", format!("expected schema version {SCHEMA_VERSION}"))),
    }

    let categories: Vec<String> = array(required(top, "categories", "$")?, "categories")?
        .iter()
        .enumerate()
        .map(|(i, v)| string(v, &format!("categories[{i}]")).map(str::to_owned))
        .collect::<Result<_>>()?;
    if categories.is_empty() {
        return Err(Error::at(ErrorCode::ProfileCount, "categories", "at least one category is required"));
    }

    let scales = match top.get("scales") {
        None => Vec::new(),
        Some(v) => parse_scales(v)?,
    };
    let default_scale = match top.get("default_scale") {
        None => None,
        Some(v) => {
            let name = string(v, "default_scale")?;
            if !scales.iter().any(|s| s.name == name) {
                return Err(Error::at(ErrorCode::UnknownTerm, "default_scale", format!("no scale named `{name}`")));
            }
            Some(name.to_owned())
        }
    };
    let resolver = Resolver { scales: &scales, default: default_scale.as_deref() };

    let tree = CriteriaTree::build(&parse_tree(required(top, "tree", "$")?)?)?;
    let leaves: Vec<String> = tree.elementary().iter().map(|&id| tree.label_path(id)).collect();

    let preferences = per_criterion(&tree, top.get("preferences"), "preferences", |v, path| parse_preference(v, path, &resolver))?
        .into_iter()
        .map(|p| p.unwrap_or_else(|| PreferenceSpec::usual(Direction::Maximize)))
        .collect::<Vec<_>>();

    let profile_rows = per_criterion(&tree, top.get("profiles"), "profiles", |v, path| {
        let items = array(v, path)?;
        items
            .iter()
            .enumerate()
            .map(|(h, item)| parse_value(item, &format!("{path}[{h}]"), &resolver))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut profiles = Vec::with_capacity(leaves.len());
    for (i, row) in profile_rows.into_iter().enumerate() {
        let row = row.ok_or_else(|| Error::at(ErrorCode::ProfileCount, format!("profiles.criteria.{}", leaves[i]), "no limiting profiles given"))?;
        if row.len() != categories.len() + 1 {
            return Err(Error::at(
                ErrorCode::ProfileCount,
                format!("profiles.criteria.{}", leaves[i]),
                format!("{} profiles given, {} categories need {}", row.len(), categories.len(), categories.len() + 1),
            ));
        }
        profiles.push(row);
    }

    let alt_values = array(required(top, "alternatives", "$")?, "alternatives")?;
    if alt_values.is_empty() {
        return Err(Error::at(ErrorCode::Schema, "alternatives", "at least one alternative is required"));
    }
    let mut alternatives = Vec::with_capacity(alt_values.len());
    let mut names = std::collections::HashSet::new();
    for (i, a) in alt_values.iter().enumerate() {
        let path = format!("alternatives[{i}]");
        let alt = parse_alternative(a, &path, &tree, &leaves, &resolver)?;
        if !names.insert(alt.name.clone()) {
            return Err(Error::at(ErrorCode::DuplicateLabel, format!("{path}.name"), format!("duplicate alternative `{}`", alt.name)));
        }
        alternatives.push(alt);
    }

    let smaa = match top.get("smaa") {
        None => SmaaSettings::default(),
        Some(v) => parse_smaa(v)?,
    };

    let problem = Problem { categories, scales, default_scale, tree, preferences, profiles, alternatives, smaa };
    check_consistency(&problem, &leaves)?;
    Ok(problem)
}

/// Cross-field checks that only make sense once everything is resolved.
fn check_consistency(problem: &Problem, leaves: &[String]) -> Result<()> {
    for (i, (spec, leaf)) in problem.preferences.iter().zip(leaves).enumerate() {
        spec.validate().map_err(|e| e.with_path(format!("preferences.criteria.{leaf}")))?;
        let row = &problem.profiles[i];
        if !row.iter().any(StochasticValue::is_random) {
            let fixed: Vec<Tfn> = row.iter().map(StochasticValue::point_estimate).collect();
            check_profile_row(&fixed, spec.direction).map_err(|e| e.with_path(format!("profiles.criteria.{leaf}")))?;
            for (a, alt) in problem.alternatives.iter().enumerate() {
                let value = &alt.values[i];
                if !value.is_random() {
                    check_within_profiles(value.point_estimate(), &fixed)
                        .map_err(|e| e.with_path(format!("alternatives[{a}].values.{leaf}")))?;
                }
            }
        }
    }
    Ok(())
}

struct Resolver<'a> {
    scales: &'a [LinguisticScale],
    default: Option<&'a str>,
}

impl Resolver<'_> {
    fn resolve(&self, term: &str, scale: Option<&str>, path: &str) -> Result<Tfn> {
        let scale_name = match scale.or(self.default) {
            Some(name) => name,
            None if self.scales.len() == 1 => self.scales[0].name.as_str(),
            None => {
                return Err(Error::at(
                    ErrorCode::UnknownTerm,
                    path,
                    format!("term `{term}` used without a scale and no default_scale is set"),
                ))
            }
        };
        let scale = self
            .scales
            .iter()
            .find(|s| s.name == scale_name)
            .ok_or_else(|| Error::at(ErrorCode::UnknownTerm, path, format!("no scale named `{scale_name}`")))?;
        scale
            .lookup(term)
            .ok_or_else(|| Error::at(ErrorCode::UnknownTerm, path, format!("term `{term}` is not in scale `{scale_name}`")))
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::at(ErrorCode::Schema, path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::at(ErrorCode::Schema, path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::at(ErrorCode::Schema, path, "expected a string"))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| Error::at(ErrorCode::Schema, path, "expected a finite number"))
}

fn unsigned(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| Error::at(ErrorCode::Schema, path, "expected a non-negative integer"))
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::at(ErrorCode::Schema, join(path, key), format!("missing field `{key}`")))
}

fn join(path: &str, key: &str) -> String {
    if path == "$" {
        key.to_owned()
    } else {
        format!("{path}.{key}")
    }
}

fn allow_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::at(ErrorCode::Schema, join(path, k), format!("unknown field `{k}`"))),
        None => Ok(()),
    }
}

fn parse_tfn(v: &Value, path: &str) -> Result<Tfn> {
    let items = array(v, path)?;
    if items.len() != 3 {
        return Err(Error::at(ErrorCode::Schema, path, "a fuzzy number is [m, alpha, beta]"));
    }
    let n = |i: usize| number(&items[i], &format!("{path}[{i}]"));
    Tfn::new(n(0)?, n(1)?, n(2)?).map_err(|e| e.with_path(path))
}

fn tfn_json(t: Tfn) -> Value {
    json!([t.m, t.alpha, t.beta])
}

fn parse_scales(v: &Value) -> Result<Vec<LinguisticScale>> {
    let mut out = Vec::new();
    for (name, terms) in object(v, "scales")? {
        let path = format!("scales.{name}");
        let entries = array(terms, &path)?
            .iter()
            .enumerate()
            .map(|(i, entry)| {
                let here = format!("{path}[{i}]");
                let obj = object(entry, &here)?;
                allow_keys(obj, &here, &["term", "tfn", "description"])?;
                let term = string(required(obj, "term", &here)?, &format!("{here}.term"))?.to_owned();
                let tfn = parse_tfn(required(obj, "tfn", &here)?, &format!("{here}.tfn"))?;
                Ok((term, tfn))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(LinguisticScale::new(name.clone(), entries).map_err(|e| e.with_path(path))?);
    }
    Ok(out)
}

fn parse_weights(v: &Value, path: &str) -> Result<WeightSpec> {
    if v.as_str() == Some("missing") {
        return Ok(WeightSpec::Missing);
    }
    let obj = object(v, path).map_err(|_| {
        Error::at(ErrorCode::WeightSpec, path, "weights are \"missing\" or one of {deterministic|ordinal|interval: [...]}")
    })?;
    if obj.len() != 1 {
        return Err(Error::at(ErrorCode::WeightSpec, path, "exactly one weight kind is expected"));
    }
    let (kind, payload) = obj.iter().next().expect("one entry");
    let here = format!("{path}.{kind}");
    let items = || array(payload, &here);
    Ok(match kind.as_str() {
        "deterministic" => WeightSpec::Deterministic(
            items()?.iter().enumerate().map(|(i, x)| number(x, &format!("{here}[{i}]"))).collect::<Result<_>>()?,
        ),
        "ordinal" => WeightSpec::Ordinal(
            items()?
                .iter()
                .enumerate()
                .map(|(i, x)| match x {
                    Value::Null => Ok(None),
                    _ => x
                        .as_u64()
                        .and_then(|r| u32::try_from(r).ok())
                        .filter(|&r| r >= 1)
                        .map(Some)
                        .ok_or_else(|| Error::at(ErrorCode::InvalidRanks, format!("{here}[{i}]"), "ranks are positive integers or null")),
                })
                .collect::<Result<_>>()?,
        ),
        "interval" => WeightSpec::Interval(
            items()?
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let p = format!("{here}[{i}]");
                    let pair = array(x, &p)?;
                    if pair.len() != 2 {
                        return Err(Error::at(ErrorCode::WeightSpec, p, "bounds are [lo, hi]"));
                    }
                    Ok((number(&pair[0], &p)?, number(&pair[1], &p)?))
                })
                .collect::<Result<_>>()?,
        ),
        "missing" => WeightSpec::Missing,
        other => return Err(Error::at(ErrorCode::WeightSpec, path, format!("unknown weight kind `{other}`"))),
    })
}

fn weights_json(spec: &WeightSpec) -> Value {
    match spec {
        WeightSpec::Deterministic(w) => json!({ "deterministic": w }),
        WeightSpec::Ordinal(r) => json!({ "ordinal": r }),
        WeightSpec::Interval(b) => json!({ "interval": b.iter().map(|&(lo, hi)| json!([lo, hi])).collect::<Vec<_>>() }),
        WeightSpec::Missing => json!("missing"),
    }
}

fn parse_tree(v: &Value) -> Result<TreeSpec> {
    let obj = object(v, "tree")?;
    allow_keys(obj, "tree", &["weights", "criteria"])?;
    let criteria = parse_nodes(required(obj, "criteria", "tree")?, "tree.criteria")?;
    let weights = match obj.get("weights") {
        Some(w) => parse_weights(w, "tree.weights")?,
        None => return Err(Error::at(ErrorCode::WeightSpec, "tree.weights", "first-level weights are required")),
    };
    Ok(TreeSpec { weights, criteria })
}

fn parse_nodes(v: &Value, path: &str) -> Result<Vec<NodeSpec>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let here = format!("{path}[{i}]");
            let obj = object(node, &here)?;
            allow_keys(obj, &here, &["label", "weights", "criteria", "description"])?;
            let label = string(required(obj, "label", &here)?, &format!("{here}.label"))?.to_owned();
            let children = match obj.get("criteria") {
                Some(c) => parse_nodes(c, &format!("{here}.criteria"))?,
                None => Vec::new(),
            };
            let weights = match obj.get("weights") {
                Some(_) if children.is_empty() => {
                    return Err(Error::at(ErrorCode::WeightSpec, format!("{here}.weights"), "an elementary criterion carries no weights"))
                }
                Some(w) => Some(parse_weights(w, &format!("{here}.weights"))?),
                None => None,
            };
            Ok(NodeSpec { label, weights, children })
        })
        .collect()
}

fn tree_json(spec: &TreeSpec) -> Value {
    fn node(n: &NodeSpec) -> Value {
        let mut obj = Map::new();
        obj.insert("label".into(), json!(n.label));
        if let Some(w) = &n.weights {
            obj.insert("weights".into(), weights_json(w));
        }
        if !n.children.is_empty() {
            obj.insert("criteria".into(), Value::Array(n.children.iter().map(node).collect()));
        }
        Value::Object(obj)
    }
    json!({ "weights": weights_json(&spec.weights), "criteria": spec.criteria.iter().map(node).collect::<Vec<_>>() })
}

/// Resolves a `{default, criteria: {path: ...}}` section into one optional
/// entry per elementary criterion. A key naming an internal criterion
/// applies to every leaf below it; deeper keys win.
fn per_criterion<T: Clone>(
    tree: &CriteriaTree,
    section: Option<&Value>,
    name: &str,
    parse: impl Fn(&Value, &str) -> Result<T>,
) -> Result<Vec<Option<T>>> {
    let mut out = vec![None; tree.elementary_count()];
    let Some(section) = section else {
        return Ok(out);
    };
    let obj = object(section, name)?;
    allow_keys(obj, name, &["default", "criteria"])?;
    if let Some(d) = obj.get("default") {
        let value = parse(d, &format!("{name}.default"))?;
        out.iter_mut().for_each(|slot| *slot = Some(value.clone()));
    }
    if let Some(c) = obj.get("criteria") {
        let mut entries = Vec::new();
        for (key, v) in object(c, &format!("{name}.criteria"))? {
            let path = format!("{name}.criteria.{key}");
            let id = tree
                .find_label_path(key)
                .filter(|&id| id != ROOT)
                .ok_or_else(|| Error::at(ErrorCode::UnknownNode, &path, format!("no criterion `{key}`")))?;
            entries.push((tree.node(id).depth(), id, parse(v, &path)?));
        }
        entries.sort_by_key(|e| e.0);
        for (_, id, value) in entries {
            for pos in tree.elementary_below(id) {
                out[pos] = Some(value.clone());
            }
        }
    }
    Ok(out)
}

fn parse_value(v: &Value, path: &str, resolver: &Resolver) -> Result<StochasticValue> {
    let value = match v {
        Value::Number(_) => StochasticValue::Crisp(number(v, path)?),
        Value::String(term) => StochasticValue::Linguistic { term: term.clone(), scale: None, value: resolver.resolve(term, None, path)? },
        Value::Array(pair) => {
            if pair.len() != 2 {
                return Err(Error::at(ErrorCode::Schema, path, "an interval is [lo, hi]"));
            }
            StochasticValue::Interval(number(&pair[0], path)?, number(&pair[1], path)?)
        }
        Value::Object(obj) => {
            if let Some(t) = obj.get("tfn") {
                allow_keys(obj, path, &["tfn"])?;
                StochasticValue::Fuzzy(parse_tfn(t, &format!("{path}.tfn"))?)
            } else if let Some(term) = obj.get("term") {
                allow_keys(obj, path, &["term", "scale"])?;
                let term = string(term, &format!("{path}.term"))?;
                let scale = obj.get("scale").map(|s| string(s, &format!("{path}.scale"))).transpose()?;
                StochasticValue::Linguistic {
                    term: term.to_owned(),
                    scale: scale.map(str::to_owned),
                    value: resolver.resolve(term, scale, path)?,
                }
            } else if let Some(family) = obj.get("dist") {
                StochasticValue::Distribution(parse_distribution(obj, string(family, &format!("{path}.dist"))?, path)?)
            } else {
                return Err(Error::at(ErrorCode::Schema, path, "expected {tfn}, {term} or {dist} object"));
            }
        }
        Value::Null => return Err(Error::at(ErrorCode::MissingEvaluation, path, "value is null")),
        Value::Bool(_) => return Err(Error::at(ErrorCode::Schema, path, "unexpected boolean")),
    };
    value.validate().map_err(|e| e.with_path(path))?;
    Ok(value)
}

fn parse_distribution(obj: &Map<String, Value>, family: &str, path: &str) -> Result<Distribution> {
    let get = |key: &str| required(obj, key, path).and_then(|v| number(v, &format!("{path}.{key}")));
    let opt = |key: &str| obj.get(key).map(|v| number(v, &format!("{path}.{key}"))).transpose();
    let d = match family {
        "normal" => {
            allow_keys(obj, path, &["dist", "mean", "sd", "lo", "hi"])?;
            Distribution::Normal { mean: get("mean")?, sd: get("sd")?, lo: opt("lo")?, hi: opt("hi")? }
        }
        "triangular" => {
            allow_keys(obj, path, &["dist", "min", "mode", "max"])?;
            Distribution::Triangular { min: get("min")?, mode: get("mode")?, max: get("max")? }
        }
        "beta" => {
            allow_keys(obj, path, &["dist", "a", "b", "lo", "hi"])?;
            Distribution::Beta { a: get("a")?, b: get("b")?, lo: opt("lo")?.unwrap_or(0.0), hi: opt("hi")?.unwrap_or(1.0) }
        }
        other => return Err(Error::at(ErrorCode::Schema, format!("{path}.dist"), format!("unknown distribution `{other}`"))),
    };
    Ok(d)
}

fn value_json(v: &StochasticValue) -> Value {
    match v {
        StochasticValue::Crisp(x) => json!(x),
        StochasticValue::Fuzzy(t) => json!({ "tfn": tfn_json(*t) }),
        StochasticValue::Linguistic { term, scale: None, .. } => json!(term),
        StochasticValue::Linguistic { term, scale: Some(s), .. } => json!({ "term": term, "scale": s }),
        StochasticValue::Interval(lo, hi) => json!([lo, hi]),
        StochasticValue::Distribution(d) => match *d {
            Distribution::Normal { mean, sd, lo, hi } => {
                let mut obj = json!({ "dist": "normal", "mean": mean, "sd": sd });
                if let Some(lo) = lo {
                    obj["lo"] = json!(lo);
                }
                if let Some(hi) = hi {
                    obj["hi"] = json!(hi);
                }
                obj
            }
            Distribution::Triangular { min, mode, max } => json!({ "dist": "triangular", "min": min, "mode": mode, "max": max }),
            Distribution::Beta { a, b, lo, hi } => json!({ "dist": "beta", "a": a, "b": b, "lo": lo, "hi": hi }),
        },
    }
}

fn parse_preference(v: &Value, path: &str, resolver: &Resolver) -> Result<PreferenceSpec> {
    let obj = object(v, path)?;
    allow_keys(obj, path, &["shape", "q", "p", "s", "direction"])?;
    let shape: Shape = match obj.get("shape") {
        None => Shape::Usual,
        Some(s) => serde_json::from_value(s.clone())
            .map_err(|_| Error::at(ErrorCode::Schema, format!("{path}.shape"), format!("unknown shape {s}")))?,
    };
    let direction: Direction = match obj.get("direction") {
        None => Direction::Maximize,
        Some(d) => serde_json::from_value(d.clone())
            .map_err(|_| Error::at(ErrorCode::Schema, format!("{path}.direction"), format!("unknown direction {d}")))?,
    };
    let threshold = |key: &str| obj.get(key).map(|v| parse_value(v, &format!("{path}.{key}"), resolver)).transpose();
    Ok(PreferenceSpec {
        shape,
        q: threshold("q")?,
        p: threshold("p")?,
        s: obj.get("s").map(|v| number(v, &format!("{path}.s"))).transpose()?,
        direction,
    })
}

fn preference_json(spec: &PreferenceSpec) -> Value {
    let mut obj = Map::new();
    obj.insert("shape".into(), json!(spec.shape.as_str()));
    if let Some(q) = &spec.q {
        obj.insert("q".into(), value_json(q));
    }
    if let Some(p) = &spec.p {
        obj.insert("p".into(), value_json(p));
    }
    if let Some(s) = spec.s {
        obj.insert("s".into(), json!(s));
    }
    let direction = match spec.direction {
        Direction::Maximize => "maximize",
        Direction::Minimize => "minimize",
    };
    obj.insert("direction".into(), json!(direction));
    Value::Object(obj)
}

fn parse_alternative(v: &Value, path: &str, tree: &CriteriaTree, leaves: &[String], resolver: &Resolver) -> Result<Alternative> {
    let obj = object(v, path)?;
    allow_keys(obj, path, &["name", "values"])?;
    let name = string(required(obj, "name", path)?, &format!("{path}.name"))?.to_owned();
    let here = format!("{path}.values");
    let values = match required(obj, "values", path)? {
        Value::Array(items) => {
            if items.len() < leaves.len() {
                return Err(Error::at(
                    ErrorCode::MissingEvaluation,
                    &here,
                    format!("{} values for {} elementary criteria; `{}` is missing", items.len(), leaves.len(), leaves[items.len()]),
                ));
            }
            if items.len() > leaves.len() {
                return Err(Error::at(
                    ErrorCode::DimensionMismatch,
                    &here,
                    format!("{} values for {} elementary criteria", items.len(), leaves.len()),
                ));
            }
            items
                .iter()
                .enumerate()
                .map(|(i, item)| parse_value(item, &format!("{here}[{i}]"), resolver))
                .collect::<Result<Vec<_>>>()?
        }
        Value::Object(map) => {
            let mut slots: Vec<Option<StochasticValue>> = vec![None; leaves.len()];
            // sorted for deterministic error reporting
            let sorted: BTreeMap<&String, &Value> = map.iter().collect();
            for (key, item) in sorted {
                let p = format!("{here}.{key}");
                let pos = tree
                    .find_label_path(key)
                    .and_then(|id| tree.node(id).leaf_position())
                    .ok_or_else(|| Error::at(ErrorCode::UnknownNode, &p, format!("`{key}` is not an elementary criterion")))?;
                slots[pos] = Some(parse_value(item, &p, resolver)?);
            }
            slots
                .into_iter()
                .enumerate()
                .map(|(i, s)| s.ok_or_else(|| Error::at(ErrorCode::MissingEvaluation, format!("{here}.{}", leaves[i]), "no evaluation given")))
                .collect::<Result<Vec<_>>>()?
        }
        _ => return Err(Error::at(ErrorCode::Schema, here, "values are an array or an object keyed by criterion path")),
    };
    Ok(Alternative { name, values })
}

fn parse_smaa(v: &Value) -> Result<SmaaSettings> {
    let obj = object(v, "smaa")?;
    allow_keys(obj, "smaa", &["iterations", "seed", "rule", "defuzz", "max_attempts", "threshold", "strict"])?;
    let mut s = SmaaSettings::default();
    if let Some(v) = obj.get("iterations") {
        s.iterations = unsigned(v, "smaa.iterations")?;
        if s.iterations == 0 {
            return Err(Error::at(ErrorCode::Schema, "smaa.iterations", "at least one iteration is required"));
        }
    }
    if let Some(v) = obj.get("seed") {
        s.seed = unsigned(v, "smaa.seed")?;
    }
    if let Some(v) = obj.get("rule") {
        s.rule = string(v, "smaa.rule")?.parse().map_err(|e: Error| e.with_path("smaa.rule"))?;
    }
    if let Some(v) = obj.get("defuzz") {
        s.defuzz = string(v, "smaa.defuzz")?.parse().map_err(|e: Error| e.with_path("smaa.defuzz"))?;
    }
    if let Some(v) = obj.get("max_attempts") {
        s.max_attempts = unsigned(v, "smaa.max_attempts")?.max(1);
    }
    if let Some(v) = obj.get("threshold") {
        s.threshold = number(v, "smaa.threshold")?;
        if !(0.0..=1.0).contains(&s.threshold) {
            return Err(Error::at(ErrorCode::Schema, "smaa.threshold", "threshold must lie in [0, 1]"));
        }
    }
    if let Some(v) = obj.get("strict") {
        s.strict = v.as_bool().ok_or_else(|| Error::at(ErrorCode::Schema, "smaa.strict", "expected a boolean"))?;
    }
    Ok(s)
}
