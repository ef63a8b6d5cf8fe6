//! Test-only reference implementation of flat FlowSort and a generator of
//! random hierarchical instances.
//!
//! The oracle works on crisp numbers and explicit per-leaf weights. It knows
//! nothing about trees: a hierarchical instance is checked by flattening it
//! (multiplying weights along each root-to-leaf path) and feeding the leaves
//! in order.

#![allow(dead_code)]

use flowsort_h::{
    CriteriaTree, Direction, NodeSpec, NodeWeights, Preference, ProfileSet, Rule, Shape, Tfn, TreeSpec, WeightSpec,
};
use rand::Rng;

pub const SHAPES: [Shape; 6] =
    [Shape::Usual, Shape::UShape, Shape::VShape, Shape::Level, Shape::VShapeIndifference, Shape::Gaussian];

/// Preference degree written out independently of the library.
pub fn oracle_pref(pref: &Preference, a: f64, b: f64) -> f64 {
    let d = if pref.direction == Direction::Maximize { a - b } else { b - a };
    if d <= 0.0 {
        return 0.0;
    }
    let (q, p, s) = (pref.q, pref.p, pref.s);
    match pref.shape {
        Shape::Usual => 1.0,
        Shape::UShape => (d > q) as u8 as f64,
        Shape::VShape => (d / p).min(1.0),
        Shape::Level => {
            if d > p {
                1.0
            } else if d > q {
                0.5
            } else {
                0.0
            }
        }
        Shape::VShapeIndifference => ((d - q) / (p - q)).clamp(0.0, 1.0),
        Shape::Gaussian => 1.0 - (-(d * d) / (2.0 * s * s)).exp(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple {
    pub plus: f64,
    pub minus: f64,
    pub net: f64,
}

/// Flat FlowSort for one alternative: flows of `x` against the profiles and
/// of every profile against the other profiles and `x`.
pub fn flat_flows(weights: &[f64], prefs: &[Preference], profiles: &[Vec<f64>], x: &[f64]) -> (Triple, Vec<Triple>) {
    let n = weights.len();
    let k1 = profiles[0].len();
    // Element 0 is the alternative, 1..=k1 the profiles.
    let value = |e: usize, j: usize| if e == 0 { x[j] } else { profiles[j][e - 1] };
    let pi = |a: usize, b: usize| (0..n).map(|j| weights[j] * oracle_pref(&prefs[j], value(a, j), value(b, j))).sum::<f64>();
    let m = k1 + 1;
    let flows: Vec<Triple> = (0..m)
        .map(|e| {
            let mut plus = 0.0;
            let mut minus = 0.0;
            for f in (0..m).filter(|&f| f != e) {
                plus += pi(e, f);
                minus += pi(f, e);
            }
            plus /= k1 as f64;
            minus /= k1 as f64;
            Triple { plus, minus, net: plus - minus }
        })
        .collect();
    (flows[0], flows[1..].to_vec())
}

/// Flat assignment; `None` when the alternative's flow is outside the
/// profile flows.
pub fn flat_assign(x: Triple, profiles: &[Triple], rule: Rule) -> Option<usize> {
    let k = profiles.len() - 1;
    for h in 0..k {
        let (hi, lo) = (profiles[h], profiles[h + 1]);
        let inside = match rule {
            Rule::Positive => hi.plus >= x.plus && x.plus > lo.plus,
            Rule::Negative => hi.minus < x.minus && x.minus <= lo.minus,
            Rule::Net => hi.net >= x.net && x.net > lo.net,
        };
        if inside {
            return Some(h);
        }
    }
    let (best, worst) = (profiles[0], profiles[k]);
    let (at_best, at_worst) = match rule {
        Rule::Positive => (x.plus == best.plus, x.plus == worst.plus),
        Rule::Negative => (x.minus == best.minus, x.minus == worst.minus),
        Rule::Net => (x.net == best.net, x.net == worst.net),
    };
    if at_worst {
        Some(k - 1)
    } else if at_best {
        Some(0)
    } else {
        None
    }
}

/// Smallest distance between the alternative's flow and any profile flow
/// under `rule`; assignments closer than rounding noise are not compared.
pub fn flat_margin(x: Triple, profiles: &[Triple], rule: Rule) -> f64 {
    let key = |t: &Triple| match rule {
        Rule::Positive => t.plus,
        Rule::Negative => t.minus,
        Rule::Net => t.net,
    };
    profiles.iter().map(|p| (key(p) - key(&x)).abs()).fold(f64::INFINITY, f64::min)
}

/// Leaves below one node with their weights relative to that node, in the
/// library's preorder numbering (root = 0).
#[derive(Debug, Clone)]
pub struct OracleNode {
    pub leaves: Vec<usize>,
    pub weights: Vec<f64>,
}

pub fn oracle_nodes(spec: &TreeSpec) -> Vec<OracleNode> {
    fn walk(children: &[NodeSpec], weights: &[f64], out: &mut Vec<OracleNode>, next_leaf: &mut usize) -> Vec<(usize, f64)> {
        let mut below = Vec::new();
        for (child, &w) in children.iter().zip(weights) {
            let slot = out.len();
            out.push(OracleNode { leaves: vec![], weights: vec![] });
            let mine = if child.children.is_empty() {
                let leaf = *next_leaf;
                *next_leaf += 1;
                vec![(leaf, 1.0)]
            } else {
                walk(&child.children, deterministic(child.weights.as_ref().unwrap()), out, next_leaf)
            };
            out[slot] = OracleNode { leaves: mine.iter().map(|l| l.0).collect(), weights: mine.iter().map(|l| l.1).collect() };
            below.extend(mine.into_iter().map(|(l, v)| (l, v * w)));
        }
        below
    }
    let mut out = vec![OracleNode { leaves: vec![], weights: vec![] }];
    let mut next_leaf = 0;
    let all = walk(&spec.criteria, deterministic(&spec.weights), &mut out, &mut next_leaf);
    out[0] = OracleNode { leaves: all.iter().map(|l| l.0).collect(), weights: all.iter().map(|l| l.1).collect() };
    out
}

fn deterministic(spec: &WeightSpec) -> &[f64] {
    match spec {
        WeightSpec::Deterministic(w) => w,
        other => panic!("oracle needs deterministic weights, got {other:?}"),
    }
}

/// Flat flows restricted to the leaves below one oracle node.
pub fn node_flows(node: &OracleNode, prefs: &[Preference], profiles: &[Vec<f64>], x: &[f64]) -> (Triple, Vec<Triple>) {
    let sub_prefs: Vec<Preference> = node.leaves.iter().map(|&l| prefs[l]).collect();
    let sub_profiles: Vec<Vec<f64>> = node.leaves.iter().map(|&l| profiles[l].clone()).collect();
    let sub_x: Vec<f64> = node.leaves.iter().map(|&l| x[l]).collect();
    flat_flows(&node.weights, &sub_prefs, &sub_profiles, &sub_x)
}

/// A random hierarchical instance with deterministic weights.
pub struct Instance {
    pub spec: TreeSpec,
    pub tree: CriteriaTree,
    pub weights: NodeWeights,
    pub prefs: Vec<Preference>,
    pub crisp_profiles: Vec<Vec<f64>>,
    pub profiles: ProfileSet,
    pub alternatives: Vec<Vec<Tfn>>,
    pub categories: usize,
}

pub struct InstanceShape {
    pub levels: (usize, usize),
    pub children: (usize, usize),
    pub categories: (usize, usize),
    pub shapes: Vec<Shape>,
    pub fuzzy: bool,
    pub alternatives: usize,
}

impl InstanceShape {
    /// 2-4 levels, 2-6 children, 2-5 categories, usual and
    /// V-shape-with-indifference criteria, crisp values.
    pub fn flatten_corpus() -> Self {
        InstanceShape {
            levels: (2, 4),
            children: (2, 6),
            categories: (2, 5),
            shapes: vec![Shape::Usual, Shape::VShapeIndifference],
            fuzzy: false,
            alternatives: 3,
        }
    }
}

fn random_weights<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

fn random_children<R: Rng>(depth: usize, levels: usize, shape: &InstanceShape, rng: &mut R, counter: &mut usize) -> Vec<NodeSpec> {
    let count = rng.random_range(shape.children.0..=shape.children.1);
    (0..count)
        .map(|i| {
            *counter += 1;
            let label = format!("c{counter}");
            // The first child always goes deeper so the tree reaches `levels`.
            if depth < levels && (i == 0 || rng.random_bool(0.4)) {
                let kids = random_children(depth + 1, levels, shape, rng, counter);
                NodeSpec::group(label, WeightSpec::Deterministic(random_weights(kids.len(), rng)), kids)
            } else {
                NodeSpec::leaf(label)
            }
        })
        .collect()
}

pub fn random_instance<R: Rng>(shape: &InstanceShape, rng: &mut R) -> Instance {
    let levels = rng.random_range(shape.levels.0..=shape.levels.1);
    let mut counter = 0;
    let criteria = random_children(1, levels, shape, rng, &mut counter);
    let spec = TreeSpec { weights: WeightSpec::Deterministic(random_weights(criteria.len(), rng)), criteria };
    let tree = CriteriaTree::build(&spec).expect("generated tree is valid");
    let weights = NodeWeights::deterministic(&tree).expect("deterministic weights");
    let n = tree.elementary_count();
    let categories = rng.random_range(shape.categories.0..=shape.categories.1);

    let mut prefs = Vec::with_capacity(n);
    let mut crisp_profiles = Vec::with_capacity(n);
    let mut fuzzy_profiles = Vec::with_capacity(n);
    for _ in 0..n {
        let kind = shape.shapes[rng.random_range(0..shape.shapes.len())];
        let direction = if rng.random_bool(0.3) { Direction::Minimize } else { Direction::Maximize };
        let q = if kind.uses_q() { rng.random_range(0.0..1.0) } else { 0.0 };
        let p = if kind.uses_p() { q + rng.random_range(0.1..3.0) } else { 0.0 };
        let s = if kind.uses_s() { rng.random_range(0.3..3.0) } else { 0.0 };
        let pref = Preference::new(kind, q, p, s, direction).expect("generated thresholds are valid");
        // Gaps above q keep every profile strictly preferred to the next.
        let gaps: Vec<f64> = (0..categories).map(|_| q + rng.random_range(0.2..4.0)).collect();
        let mut row = vec![rng.random_range(-10.0..10.0)];
        for g in &gaps {
            let last = *row.last().unwrap();
            row.push(if direction == Direction::Maximize { last - g } else { last + g });
        }
        let fuzzy_row: Vec<Tfn> = row
            .iter()
            .enumerate()
            .map(|(h, &m)| {
                if !shape.fuzzy {
                    return Tfn::crisp(m);
                }
                let left_gap = if h > 0 { gaps[h - 1] } else { gaps[0] };
                let right_gap = if h < categories { gaps[h] } else { gaps[categories - 1] };
                let room = 0.45 * left_gap.min(right_gap);
                Tfn::new(m, rng.random_range(0.0..room), rng.random_range(0.0..room)).unwrap()
            })
            .collect();
        prefs.push(pref);
        crisp_profiles.push(row);
        fuzzy_profiles.push(fuzzy_row);
    }
    let profiles = ProfileSet::new(fuzzy_profiles).expect("generated profiles");
    profiles.validate(&prefs).expect("generated profiles respect dominance");

    let alternatives = (0..shape.alternatives)
        .map(|_| {
            crisp_profiles
                .iter()
                .zip(profiles.rows())
                .map(|(row, fuzzy_row)| {
                    let (lo, hi) = (row[0].min(row[categories]), row[0].max(row[categories]));
                    // Some evaluations sit exactly on a profile.
                    let m = if rng.random_bool(0.15) { row[rng.random_range(0..=categories)] } else { rng.random_range(lo..=hi) };
                    if !shape.fuzzy {
                        return Tfn::crisp(m);
                    }
                    let band_lo = fuzzy_row.iter().map(Tfn::lower).fold(f64::INFINITY, f64::min);
                    let band_hi = fuzzy_row.iter().map(Tfn::upper).fold(f64::NEG_INFINITY, f64::max);
                    let a = rng.random_range(0.0..=(m - band_lo).clamp(0.0, 1.0));
                    let b = rng.random_range(0.0..=(band_hi - m).clamp(0.0, 1.0));
                    Tfn::new(m, a, b).unwrap()
                })
                .collect()
        })
        .collect();

    Instance { spec, tree, weights, prefs, crisp_profiles, profiles, alternatives, categories }
}

impl Instance {
    /// Effective weight of every leaf, computed by the oracle walk.
    pub fn flat_weights(&self) -> Vec<f64> {
        let root = &oracle_nodes(&self.spec)[0];
        let mut w = vec![0.0; root.leaves.len()];
        for (&l, &v) in root.leaves.iter().zip(&root.weights) {
            w[l] = v;
        }
        w
    }

    pub fn crisp_alternative(&self, a: usize) -> Vec<f64> {
        self.alternatives[a].iter().map(|t| t.m).collect()
    }
}
