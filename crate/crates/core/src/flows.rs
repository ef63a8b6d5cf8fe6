//! Hierarchical FlowSort engine.
//!
//! For an alternative `x` the reference set is `R ∪ {x}` where `R` holds the
//! `k + 1` limiting profiles. Preference degrees are computed per elementary
//! criterion as fuzzy numbers, aggregated up the hierarchy with the sibling
//! weights, and defuzzified at every node. Flows at the implicit root are the
//! overall flows; flows at any other node are its single-criterion flows.
//! A flat criteria list is the depth-one special case.

use serde::{Deserialize, Serialize};

use crate::error::{Error, ErrorCode, Result};
use crate::fuzzy::{DefuzzMethod, Tfn};
use crate::hierarchy::{CriteriaTree, NodeId, NodeWeights, ROOT};
use crate::preference::{Direction, Preference};

/// Assignment rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Positive,
    Negative,
    #[default]
    Net,
}

impl Rule {
    pub const ALL: [Rule; 3] = [Rule::Positive, Rule::Negative, Rule::Net];

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Positive => "positive",
            Rule::Negative => "negative",
            Rule::Net => "net",
        }
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" => Ok(Rule::Positive),
            "negative" => Ok(Rule::Negative),
            "net" => Ok(Rule::Net),
            other => Err(Error::new(ErrorCode::Schema, format!("unknown assignment rule `{other}`"))),
        }
    }
}

/// Limiting profiles `r_1 ≻ ... ≻ r_{k+1}` for every elementary criterion,
/// rows in canonical elementary order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSet {
    rows: Vec<Vec<Tfn>>,
}

impl ProfileSet {
    pub fn new(rows: Vec<Vec<Tfn>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::new(ErrorCode::ProfileCount, "no profile rows"));
        };
        let len = first.len();
        if len < 2 {
            return Err(Error::new(ErrorCode::ProfileCount, "at least two limiting profiles (one category) are required"));
        }
        if let Some(pos) = rows.iter().position(|r| r.len() != len) {
            return Err(Error::new(
                ErrorCode::ProfileCount,
                format!("criterion {pos} has {} profiles, expected {len}", rows[pos].len()),
            ));
        }
        Ok(ProfileSet { rows })
    }

    /// Number of categories `k`.
    pub fn categories(&self) -> usize {
        self.rows[0].len() - 1
    }

    pub fn criteria(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, leaf: usize) -> &[Tfn] {
        &self.rows[leaf]
    }

    pub fn rows(&self) -> &[Vec<Tfn>] {
        &self.rows
    }

    /// Checks strict dominance `r_h ≻ r_{h+1}` and that adjacent supports do
    /// not overlap, orienting each criterion by its direction.
    pub fn validate(&self, prefs: &[Preference]) -> Result<()> {
        if prefs.len() != self.rows.len() {
            return Err(Error::new(
                ErrorCode::DimensionMismatch,
                format!("{} preference functions for {} profile rows", prefs.len(), self.rows.len()),
            ));
        }
        for (leaf, (row, pref)) in self.rows.iter().zip(prefs).enumerate() {
            check_profile_row(row, pref.direction).map_err(|e| e.with_path(format!("profiles[{leaf}]")))?;
        }
        Ok(())
    }
}

/// Dominance and non-overlap check for one criterion's profiles.
pub fn check_profile_row(row: &[Tfn], direction: Direction) -> Result<()> {
    for h in 0..row.len().saturating_sub(1) {
        let (better, worse) = (row[h], row[h + 1]);
        let (better, worse) = match direction {
            Direction::Maximize => (better, worse),
            Direction::Minimize => (negate(better), negate(worse)),
        };
        if better.m <= worse.m {
            return Err(Error::new(
                ErrorCode::ProfileDominance,
                format!("profile r{} = {} does not dominate r{} = {}", h + 1, row[h], h + 2, row[h + 1]),
            ));
        }
        if better.lower() <= worse.upper() {
            return Err(Error::new(
                ErrorCode::ProfileOverlap,
                format!("supports of profiles r{} = {} and r{} = {} overlap", h + 1, row[h], h + 2, row[h + 1]),
            ));
        }
    }
    Ok(())
}

fn negate(a: Tfn) -> Tfn {
    Tfn { m: -a.m, alpha: a.beta, beta: a.alpha }
}

/// Checks that an evaluation lies within the support band spanned by the
/// best and worst profiles.
pub fn check_within_profiles(value: Tfn, row: &[Tfn]) -> Result<()> {
    let (first, last) = (row[0], row[row.len() - 1]);
    let lo = first.lower().min(last.lower());
    let hi = first.upper().max(last.upper());
    if value.lower() < lo || value.upper() > hi {
        return Err(Error::new(
            ErrorCode::EvaluationOutOfBounds,
            format!("evaluation {value} lies outside the profile range [{lo}, {hi}]"),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Flow {
    pub plus: f64,
    pub minus: f64,
    pub net: f64,
}

impl Flow {
    fn new(plus: f64, minus: f64) -> Self {
        Flow { plus, minus, net: plus - minus }
    }
}

/// Flows of an alternative and of the profiles relative to it, at one node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFlows {
    pub alternative: Flow,
    pub profiles: Vec<Flow>,
}

impl NodeFlows {
    /// Category index (0-based, 0 = best) under `rule`.
    pub fn assign(&self, rule: Rule) -> Result<usize> {
        assign_flows(self, rule)
    }

    /// Like [`NodeFlows::assign`], but a flow beyond the outer profile flows
    /// is placed in the nearest end category. The flag reports whether that
    /// happened.
    pub fn assign_clamped(&self, rule: Rule) -> Result<(usize, bool)> {
        match assign_flows(self, rule) {
            Ok(h) => Ok((h, false)),
            Err(e) if e.code() == ErrorCode::BoundaryViolation => {
                let best = &self.profiles[0];
                let x = &self.alternative;
                let above_best = match rule {
                    Rule::Positive => x.plus > best.plus,
                    Rule::Negative => x.minus < best.minus,
                    Rule::Net => x.net > best.net,
                };
                Ok((if above_best { 0 } else { self.profiles.len() - 2 }, true))
            }
            Err(e) => Err(e),
        }
    }
}

/// Flows at every node of the tree for one alternative. The root entry holds
/// the overall flows.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowBundle {
    nodes: Vec<NodeFlows>,
}

impl FlowBundle {
    pub fn overall(&self) -> &NodeFlows {
        &self.nodes[ROOT]
    }

    pub fn node(&self, id: NodeId) -> &NodeFlows {
        &self.nodes[id]
    }

    pub fn assign(&self, rule: Rule) -> Result<usize> {
        self.overall().assign(rule)
    }

    pub fn assign_node(&self, id: NodeId, rule: Rule) -> Result<usize> {
        self.nodes[id].assign(rule)
    }
}

/// Category per rule overall, plus the single-criterion category of every
/// node under the net rule (`None` at the root).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub by_positive: usize,
    pub by_negative: usize,
    pub by_net: usize,
    pub per_node: Vec<Option<usize>>,
}

impl Assignment {
    pub fn from_bundle(bundle: &FlowBundle) -> Result<Self> {
        let per_node = (0..bundle.nodes.len())
            .map(|id| if id == ROOT { Ok(None) } else { bundle.assign_node(id, Rule::Net).map(Some) })
            .collect::<Result<_>>()?;
        Ok(Assignment {
            by_positive: bundle.assign(Rule::Positive)?,
            by_negative: bundle.assign(Rule::Negative)?,
            by_net: bundle.assign(Rule::Net)?,
            per_node,
        })
    }
}

/// Slack allowed when an alternative's flow sits exactly on an outer
/// profile flow but differs from it by rounding.
const OUTER_SLACK: f64 = 1e-12;
const ORDER_SLACK: f64 = 1e-12;

fn assign_flows(flows: &NodeFlows, rule: Rule) -> Result<usize> {
    let profiles = &flows.profiles;
    let k = profiles.len() - 1;
    // Orient so that larger is better and the interval is (r_{h+1}, r_h].
    let key = |f: &Flow| match rule {
        Rule::Positive => f.plus,
        Rule::Negative => -f.minus,
        Rule::Net => f.net,
    };
    let x = key(&flows.alternative);
    let bound = |h: usize| key(&profiles[h]);
    if (0..k).any(|h| bound(h) < bound(h + 1) - ORDER_SLACK) {
        let bounds: Vec<f64> = profiles.iter().map(key).collect();
        return Err(Error::new(
            ErrorCode::Domain,
            format!("{} flows of the profiles are not ordered: {bounds:?}", rule.as_str()),
        ));
    }
    match rule {
        // φ+(r_h) ≥ φ+(x) > φ+(r_{h+1}), and likewise for net flows.
        Rule::Positive | Rule::Net => {
            for h in 0..k {
                if bound(h) >= x && x > bound(h + 1) {
                    return Ok(h);
                }
            }
        }
        // φ-(r_h) < φ-(x) ≤ φ-(r_{h+1}).
        Rule::Negative => {
            for h in 0..k {
                if bound(h) > x && x >= bound(h + 1) {
                    return Ok(h);
                }
            }
        }
    }
    // Closed outer ends.
    if (x - bound(k)).abs() <= OUTER_SLACK && x <= bound(k) {
        return Ok(k - 1);
    }
    if (x - bound(0)).abs() <= OUTER_SLACK && x >= bound(0) {
        return Ok(0);
    }
    let bounds: Vec<f64> = profiles.iter().map(key).collect();
    Err(Error::new(
        ErrorCode::BoundaryViolation,
        format!(
            "{} flow {} of the alternative lies outside the profile flows [{}, {}]",
            rule.as_str(),
            match rule {
                Rule::Negative => -x,
                _ => x,
            },
            match rule {
                Rule::Negative => -bounds[0],
                _ => bounds[k],
            },
            match rule {
                Rule::Negative => -bounds[k],
                _ => bounds[0],
            },
        ),
    ))
}

/// Profile-versus-profile row and column sums of crisp degrees per node.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileBlock {
    k1: usize,
    plus: Vec<f64>,
    minus: Vec<f64>,
}

/// One concrete FlowSort-H instance: tree, weights, preference functions and
/// profiles.
#[derive(Debug, Clone, Copy)]
pub struct FlowSortH<'a> {
    tree: &'a CriteriaTree,
    weights: &'a NodeWeights,
    prefs: &'a [Preference],
    profiles: &'a ProfileSet,
    defuzz: DefuzzMethod,
}

impl<'a> FlowSortH<'a> {
    pub fn new(
        tree: &'a CriteriaTree,
        weights: &'a NodeWeights,
        prefs: &'a [Preference],
        profiles: &'a ProfileSet,
        defuzz: DefuzzMethod,
    ) -> Result<Self> {
        let n = tree.elementary_count();
        if prefs.len() != n || profiles.criteria() != n || weights.as_slice().len() != tree.len() {
            return Err(Error::new(
                ErrorCode::DimensionMismatch,
                format!(
                    "tree has {n} elementary criteria but {} preference functions and {} profile rows were given",
                    prefs.len(),
                    profiles.criteria()
                ),
            ));
        }
        profiles.validate(prefs)?;
        Ok(FlowSortH { tree, weights, prefs, profiles, defuzz })
    }

    pub fn tree(&self) -> &CriteriaTree {
        self.tree
    }

    pub fn categories(&self) -> usize {
        self.profiles.categories()
    }

    pub fn profiles(&self) -> &ProfileSet {
        self.profiles
    }

    fn check_dims(&self, x: &[Tfn]) -> Result<()> {
        if x.len() != self.tree.elementary_count() {
            return Err(Error::new(
                ErrorCode::DimensionMismatch,
                format!("{} evaluations for {} elementary criteria", x.len(), self.tree.elementary_count()),
            ));
        }
        Ok(())
    }

    /// Fuzzy preference of `a` over `b` aggregated over the subtree rooted at
    /// `node`.
    pub fn node_preference(&self, node: NodeId, a: &[Tfn], b: &[Tfn]) -> Result<Tfn> {
        self.check_dims(a)?;
        self.check_dims(b)?;
        Ok(self.node_preference_unchecked(node, a, b))
    }

    fn node_preference_unchecked(&self, node: NodeId, a: &[Tfn], b: &[Tfn]) -> Tfn {
        let n = self.tree.node(node);
        if let Some(pos) = n.leaf_position() {
            return self.prefs[pos].fuzzy(a[pos], b[pos]);
        }
        n.children()
            .iter()
            .map(|&c| self.node_preference_unchecked(c, a, b).scale_unchecked(self.weights.get(c)))
            .sum()
    }

    /// Crisp outranking degree `π(a, b)`.
    pub fn outranking_degree(&self, a: &[Tfn], b: &[Tfn]) -> Result<f64> {
        Ok(self.node_preference(ROOT, a, b)?.defuzzify(self.defuzz))
    }

    /// Aggregates leaf-level fuzzy preferences up the tree. `leaf_cells`
    /// holds `cells` fuzzy degrees per elementary criterion (in canonical
    /// order); the result holds `cells` degrees per node.
    fn aggregate(&self, cells: usize, leaf_cells: &[Tfn]) -> Vec<Tfn> {
        let tree = self.tree;
        let mut fuzzy = vec![Tfn::ZERO; tree.len() * cells];
        // children always carry larger ids than their parent
        for id in (0..tree.len()).rev() {
            let node = tree.node(id);
            let (done, rest) = fuzzy.split_at_mut((id + 1) * cells);
            let target = &mut done[id * cells..];
            if let Some(pos) = node.leaf_position() {
                target.copy_from_slice(&leaf_cells[pos * cells..(pos + 1) * cells]);
            } else {
                for &c in node.children() {
                    let w = self.weights.get(c);
                    let start = (c - id - 1) * cells;
                    for (t, &v) in target.iter_mut().zip(&rest[start..start + cells]) {
                        *t = *t + v.scale_unchecked(w);
                    }
                }
            }
        }
        fuzzy
    }

    /// Fuzzy degrees between every ordered pair of profiles, per elementary
    /// criterion. Independent of the weights.
    pub fn profile_cells(&self) -> Vec<Tfn> {
        let k1 = self.profiles.categories() + 1;
        let mut out = Vec::with_capacity(self.prefs.len() * k1 * k1);
        for (pos, pref) in self.prefs.iter().enumerate() {
            let row = self.profiles.row(pos);
            for a in 0..k1 {
                for b in 0..k1 {
                    out.push(if a == b { Tfn::ZERO } else { pref.fuzzy(row[a], row[b]) });
                }
            }
        }
        out
    }

    /// Fuzzy degrees of `x` over each profile and of each profile over `x`,
    /// per elementary criterion. Independent of the weights.
    pub fn alternative_cells(&self, x: &[Tfn]) -> Result<Vec<Tfn>> {
        self.check_dims(x)?;
        let k1 = self.profiles.categories() + 1;
        let mut out = Vec::with_capacity(self.prefs.len() * 2 * k1);
        for (pos, pref) in self.prefs.iter().enumerate() {
            let row = self.profiles.row(pos);
            out.extend(row.iter().map(|&r| pref.fuzzy(x[pos], r)));
            out.extend(row.iter().map(|&r| pref.fuzzy(r, x[pos])));
        }
        Ok(out)
    }

    /// Crisp profile-versus-profile degrees at every node. They do not depend
    /// on the alternative, so callers sorting many alternatives against the
    /// same profiles can compute them once.
    pub fn profile_block(&self) -> ProfileBlock {
        self.profile_block_from(&self.profile_cells())
    }

    /// Like [`FlowSortH::profile_block`], from precomputed
    /// [`FlowSortH::profile_cells`].
    pub fn profile_block_from(&self, cells: &[Tfn]) -> ProfileBlock {
        let k1 = self.profiles.categories() + 1;
        let fuzzy = self.aggregate(k1 * k1, cells);
        let mut plus = vec![0.0; self.tree.len() * k1];
        let mut minus = vec![0.0; plus.len()];
        for node in 0..self.tree.len() {
            for a in 0..k1 {
                for b in 0..k1 {
                    if a != b {
                        let d = fuzzy[node * k1 * k1 + a * k1 + b].defuzzify(self.defuzz);
                        plus[node * k1 + a] += d;
                        minus[node * k1 + b] += d;
                    }
                }
            }
        }
        ProfileBlock { k1, plus, minus }
    }

    /// All overall and single-criterion flows for alternative `x`.
    pub fn evaluate(&self, x: &[Tfn]) -> Result<FlowBundle> {
        self.evaluate_with(&self.profile_block(), x)
    }

    /// Like [`FlowSortH::evaluate`], reusing a precomputed profile block.
    pub fn evaluate_with(&self, block: &ProfileBlock, x: &[Tfn]) -> Result<FlowBundle> {
        let cells = self.alternative_cells(x)?;
        Ok(self.evaluate_from(block, &cells))
    }

    /// Flows from a profile block and precomputed
    /// [`FlowSortH::alternative_cells`].
    pub fn evaluate_from(&self, block: &ProfileBlock, cells: &[Tfn]) -> FlowBundle {
        let k1 = block.k1;
        // per node: cells 0..k1 are x over r_b, cells k1..2k1 are r_a over x
        let fuzzy = self.aggregate(2 * k1, cells);
        let crisp: Vec<f64> = fuzzy.iter().map(|t| t.defuzzify(self.defuzz)).collect();
        let denom = k1 as f64;
        let nodes = crisp
            .chunks_exact(2 * k1)
            .enumerate()
            .map(|(id, degrees)| {
                let (over, under) = degrees.split_at(k1);
                let alternative = Flow::new(over.iter().sum::<f64>() / denom, under.iter().sum::<f64>() / denom);
                let profiles = (0..k1)
                    .map(|a| {
                        Flow::new(
                            (block.plus[id * k1 + a] + under[a]) / denom,
                            (block.minus[id * k1 + a] + over[a]) / denom,
                        )
                    })
                    .collect();
                NodeFlows { alternative, profiles }
            })
            .collect();
        FlowBundle { nodes }
    }

    /// Overall flows of alternative `x`.
    pub fn flows_alternative(&self, x: &[Tfn]) -> Result<Flow> {
        Ok(self.evaluate(x)?.overall().alternative)
    }

    /// Overall flows of each profile relative to `x`.
    pub fn flows_profiles(&self, x: &[Tfn]) -> Result<Vec<Flow>> {
        Ok(self.evaluate(x)?.overall().profiles.clone())
    }

    /// Single-criterion flows of `x` and of the profiles at `node`.
    pub fn single_criterion_flows(&self, x: &[Tfn], node: NodeId) -> Result<NodeFlows> {
        if node == ROOT || node >= self.tree.len() {
            return Err(Error::new(ErrorCode::UnknownNode, format!("node {node} is not a criterion")));
        }
        Ok(self.evaluate(x)?.node(node).clone())
    }

    /// Single-criterion category of `x` at `node` (net rule).
    pub fn single_criterion_assign(&self, x: &[Tfn], node: NodeId) -> Result<usize> {
        self.single_criterion_flows(x, node)?.assign(Rule::Net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::{NodeSpec, TreeSpec, WeightSpec};

    fn appendix() -> (CriteriaTree, NodeWeights, Vec<Preference>, ProfileSet) {
        let spec = TreeSpec {
            weights: WeightSpec::Deterministic(vec![0.3, 0.7]),
            criteria: vec![
                NodeSpec::group("g1", WeightSpec::Deterministic(vec![0.2, 0.8]), vec![NodeSpec::leaf("a"), NodeSpec::leaf("b")]),
                NodeSpec::group("g2", WeightSpec::Deterministic(vec![0.4, 0.6]), vec![NodeSpec::leaf("a"), NodeSpec::leaf("b")]),
            ],
        };
        let tree = CriteriaTree::build(&spec).unwrap();
        let weights = NodeWeights::deterministic(&tree).unwrap();
        let prefs = vec![Preference::usual(), Preference::usual().minimize(), Preference::usual(), Preference::usual()];
        let rows = [[10.0, 5.0, 0.0], [0.0, 5.0, 10.0], [20.0, 10.0, 0.0], [30.0, 15.0, 0.0]];
        let profiles = ProfileSet::new(rows.iter().map(|r| r.iter().map(|&v| Tfn::crisp(v)).collect()).collect()).unwrap();
        (tree, weights, prefs, profiles)
    }

    fn crisp(v: &[f64]) -> Vec<Tfn> {
        v.iter().map(|&x| Tfn::crisp(x)).collect()
    }

    #[test]
    fn outranking_examples() {
        let (tree, w, prefs, profiles) = appendix();
        let model = FlowSortH::new(&tree, &w, &prefs, &profiles, DefuzzMethod::Centroid).unwrap();
        let x1 = crisp(&[8.0, 1.0, 16.0, 28.0]);
        let r: Vec<Vec<Tfn>> = (0..3).map(|h| (0..4).map(|t| profiles.row(t)[h]).collect()).collect();
        assert_eq!(model.outranking_degree(&x1, &r[0]).unwrap(), 0.0);
        assert!((model.outranking_degree(&x1, &r[1]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(model.outranking_degree(&x1, &x1).unwrap(), 0.0);
        assert_eq!(model.outranking_degree(&x1[..3], &x1).unwrap_err().code(), ErrorCode::DimensionMismatch);
    }

    #[test]
    fn appendix_flows_and_assignments() {
        let (tree, w, prefs, profiles) = appendix();
        let model = FlowSortH::new(&tree, &w, &prefs, &profiles, DefuzzMethod::Centroid).unwrap();
        let x2 = crisp(&[9.0, 3.0, 8.0, 12.0]);
        let bundle = model.evaluate(&x2).unwrap();
        let f = bundle.overall().alternative;
        assert!((f.plus - 1.3 / 3.0).abs() < 1e-12);
        assert!((f.minus - 1.7 / 3.0).abs() < 1e-12);
        assert_eq!(Assignment::from_bundle(&bundle).unwrap().by_net, 1);
        let g1 = tree.find_index(&[1]).unwrap();
        assert_eq!(model.single_criterion_assign(&x2, g1).unwrap(), 0);
        assert_eq!(model.single_criterion_flows(&x2, ROOT).unwrap_err().code(), ErrorCode::UnknownNode);
    }

    #[test]
    fn boundary_ties_bind_to_better_category() {
        let flows = NodeFlows {
            alternative: Flow::new(0.5, 0.5),
            profiles: vec![Flow::new(1.0, 0.0), Flow::new(0.5, 0.5), Flow::new(0.0, 1.0)],
        };
        // net 0 equals φ(r2): C_h with φ(r_h) ≥ φ(x) > φ(r_{h+1}) gives h = 2
        assert_eq!(flows.assign(Rule::Net).unwrap(), 1);
        assert_eq!(flows.assign(Rule::Positive).unwrap(), 1);
        // φ-(r1) < φ-(x) ≤ φ-(r2) gives h = 1
        assert_eq!(flows.assign(Rule::Negative).unwrap(), 0);
    }

    #[test]
    fn outer_ends_are_closed() {
        let profiles = vec![Flow::new(1.0, 0.0), Flow::new(0.5, 0.5), Flow::new(0.0, 1.0)];
        let at_worst = NodeFlows { alternative: Flow::new(0.0, 1.0), profiles: profiles.clone() };
        assert_eq!(at_worst.assign(Rule::Net).unwrap(), 1);
        assert_eq!(at_worst.assign(Rule::Negative).unwrap(), 1);
        let at_best = NodeFlows { alternative: Flow::new(1.0, 0.0), profiles: profiles.clone() };
        assert_eq!(at_best.assign(Rule::Net).unwrap(), 0);
        assert_eq!(at_best.assign(Rule::Negative).unwrap(), 0);
        let beyond = NodeFlows { alternative: Flow::new(0.0, 1.2), profiles };
        assert_eq!(beyond.assign(Rule::Net).unwrap_err().code(), ErrorCode::BoundaryViolation);
        assert_eq!(beyond.assign(Rule::Negative).unwrap_err().code(), ErrorCode::BoundaryViolation);
        assert_eq!(beyond.assign_clamped(Rule::Net).unwrap(), (1, true));
        assert_eq!(beyond.assign_clamped(Rule::Positive).unwrap(), (1, false));
        let above = NodeFlows { alternative: Flow::new(1.1, 0.0), profiles: beyond.profiles.clone() };
        assert_eq!(above.assign_clamped(Rule::Positive).unwrap(), (0, true));
    }

    #[test]
    fn profile_validation() {
        let t = |m, a, b| Tfn::new(m, a, b).unwrap();
        assert!(check_profile_row(&[Tfn::crisp(8.0), t(7.0, 0.75, 0.75), t(5.0, 0.75, 0.75), t(3.0, 0.75, 0.75), Tfn::crisp(0.0)], Direction::Maximize).is_ok());
        let overlap = check_profile_row(&[t(7.0, 0.75, 0.75), t(6.5, 0.75, 0.75)], Direction::Maximize).unwrap_err();
        assert_eq!(overlap.code(), ErrorCode::ProfileOverlap);
        let order = check_profile_row(&[Tfn::crisp(1.0), Tfn::crisp(2.0)], Direction::Maximize).unwrap_err();
        assert_eq!(order.code(), ErrorCode::ProfileDominance);
        assert!(check_profile_row(&[Tfn::crisp(1.0), Tfn::crisp(2.0)], Direction::Minimize).is_ok());
        assert_eq!(ProfileSet::new(vec![vec![Tfn::crisp(1.0)]]).unwrap_err().code(), ErrorCode::ProfileCount);
    }

    #[test]
    fn within_profiles() {
        let row = [Tfn::crisp(8.0), Tfn::crisp(0.0)];
        assert!(check_within_profiles(Tfn::new(8.0, 0.75, 0.0).unwrap(), &row).is_ok());
        assert!(check_within_profiles(Tfn::new(0.0, 0.0, 0.75).unwrap(), &row).is_ok());
        assert!(check_within_profiles(Tfn::new(7.5, 0.0, 0.75).unwrap(), &row).is_err());
        let min_row = [Tfn::crisp(0.0), Tfn::crisp(10.0)];
        assert!(check_within_profiles(Tfn::crisp(3.0), &min_row).is_ok());
        assert!(check_within_profiles(Tfn::crisp(11.0), &min_row).is_err());
    }

    #[test]
    fn alternative_on_best_profile_is_first_category() {
        let (tree, w, prefs, profiles) = appendix();
        let model = FlowSortH::new(&tree, &w, &prefs, &profiles, DefuzzMethod::Centroid).unwrap();
        let r1: Vec<Tfn> = (0..4).map(|t| profiles.row(t)[0]).collect();
        let bundle = model.evaluate(&r1).unwrap();
        for rule in Rule::ALL {
            assert_eq!(bundle.assign(rule).unwrap(), 0);
        }
        for id in tree.criteria() {
            assert_eq!(bundle.assign_node(id, Rule::Net).unwrap(), 0);
        }
        let r3: Vec<Tfn> = (0..4).map(|t| profiles.row(t)[2]).collect();
        assert_eq!(model.evaluate(&r3).unwrap().assign(Rule::Net).unwrap(), 1);
    }
}
