//! Criteria hierarchy.
//!
//! The tree is stored as an arena with an implicit root (id [`ROOT`]) whose
//! children are the first-level criteria. Weight information is attached to
//! the parent of each sibling group. Leaves are the elementary criteria; their
//! depth-first, declaration-order enumeration is the canonical alignment for
//! every evaluation and profile row.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, ErrorCode, Result};

pub type NodeId = usize;

/// Implicit root above the first-level criteria.
pub const ROOT: NodeId = 0;

const SUM_TOLERANCE: f64 = 1e-9;

/// Weight information for one sibling group.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    /// Crisp weights, positive and summing to one.
    Deterministic(Vec<f64>),
    /// Importance ranks, 1 = most important, ties allowed; `None` leaves a
    /// sibling unranked.
    Ordinal(Vec<Option<u32>>),
    /// Per-sibling `[lower, upper]` bounds.
    Interval(Vec<(f64, f64)>),
    /// No information: uniform over the simplex.
    Missing,
}

impl WeightSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            WeightSpec::Deterministic(_) => "deterministic",
            WeightSpec::Ordinal(_) => "ordinal",
            WeightSpec::Interval(_) => "interval",
            WeightSpec::Missing => "missing",
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self, WeightSpec::Deterministic(_))
    }

    /// Checks the spec against a sibling group of size `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let len_check = |len: usize| {
            if len != n {
                Err(Error::new(
                    ErrorCode::WeightSpec,
                    format!("{} weights given for {n} sub-criteria", len),
                ))
            } else {
                Ok(())
            }
        };
        match self {
            WeightSpec::Deterministic(w) => {
                len_check(w.len())?;
                if let Some(bad) = w.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                    return Err(Error::new(
                        ErrorCode::WeightSpec,
                        format!("deterministic weight {bad} is not strictly positive"),
                    ));
                }
                let sum: f64 = w.iter().sum();
                if (sum - 1.0).abs() > SUM_TOLERANCE {
                    return Err(Error::new(
                        ErrorCode::WeightSpec,
                        format!("deterministic weights sum to {sum}, expected 1"),
                    ));
                }
            }
            WeightSpec::Ordinal(ranks) => {
                if ranks.len() != n {
                    return Err(Error::new(
                        ErrorCode::InvalidRanks,
                        format!("{} ranks given for {n} sub-criteria", ranks.len()),
                    ));
                }
                if ranks.contains(&Some(0)) {
                    return Err(Error::new(
                        ErrorCode::InvalidRanks,
                        "ranks must be positive integers (1 = most important)",
                    ));
                }
            }
            WeightSpec::Interval(bounds) => {
                len_check(bounds.len())?;
                for &(lo, hi) in bounds {
                    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi && hi <= 1.0) {
                        return Err(Error::new(
                            ErrorCode::WeightSpec,
                            format!("interval [{lo}, {hi}] is not within 0 <= lower <= upper <= 1"),
                        ));
                    }
                }
                let lo_sum: f64 = bounds.iter().map(|b| b.0).sum();
                let hi_sum: f64 = bounds.iter().map(|b| b.1).sum();
                if lo_sum > 1.0 + SUM_TOLERANCE || hi_sum < 1.0 - SUM_TOLERANCE {
                    return Err(Error::new(
                        ErrorCode::WeightSpec,
                        format!(
                            "interval box does not meet the simplex (sum of lower bounds {lo_sum}, sum of upper bounds {hi_sum})"
                        ),
                    ));
                }
            }
            WeightSpec::Missing => {}
        }
        Ok(())
    }
}

/// Input description of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub label: String,
    /// Weight information for this node's children; ignored for leaves.
    pub weights: Option<WeightSpec>,
    pub children: Vec<NodeSpec>,
}

impl NodeSpec {
    pub fn leaf(label: impl Into<String>) -> Self {
        NodeSpec { label: label.into(), weights: None, children: Vec::new() }
    }

    pub fn group(label: impl Into<String>, weights: WeightSpec, children: Vec<NodeSpec>) -> Self {
        NodeSpec { label: label.into(), weights: Some(weights), children }
    }
}

/// Input description of the whole hierarchy: the first-level criteria and
/// the weight information among them.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeSpec {
    pub weights: WeightSpec,
    pub criteria: Vec<NodeSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionNode {
    label: String,
    index: Vec<usize>,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    weights: Option<WeightSpec>,
    leaf_position: Option<usize>,
}

impl CriterionNode {
    pub fn label(&self) -> &str {
        &self.label
    }

    /// 1-based index path `(j1, ..., jh)`; empty for the root.
    pub fn index(&self) -> &[usize] {
        &self.index
    }

    pub fn depth(&self) -> usize {
        self.index.len()
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn children(&self) -> &[NodeId] {
        &self.children
    }

    /// Weight information among this node's children.
    pub fn weight_spec(&self) -> Option<&WeightSpec> {
        self.weights.as_ref()
    }

    pub fn is_elementary(&self) -> bool {
        self.children.is_empty()
    }

    /// Position of the node in the elementary ordering, if it is a leaf.
    pub fn leaf_position(&self) -> Option<usize> {
        self.leaf_position
    }
}

/// Index path such as `(1, 2)`, displayed as `1.2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexPath(pub Vec<usize>);

impl fmt::Display for IndexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

/// Validated, immutable criteria hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaTree {
    nodes: Vec<CriterionNode>,
    elementary: Vec<NodeId>,
}

impl CriteriaTree {
    pub fn build(spec: &TreeSpec) -> Result<Self> {
        if spec.criteria.is_empty() {
            return Err(Error::at(ErrorCode::EmptyTree, "tree", "the hierarchy has no criteria"));
        }
        let mut tree = CriteriaTree {
            nodes: vec![CriterionNode {
                label: String::new(),
                index: Vec::new(),
                parent: None,
                children: Vec::new(),
                weights: Some(spec.weights.clone()),
                leaf_position: None,
            }],
            elementary: Vec::new(),
        };
        tree.attach_children(ROOT, &spec.criteria, "tree")?;
        spec.weights
            .validate(spec.criteria.len())
            .map_err(|e| e.with_path("tree.weights"))?;
        Ok(tree)
    }

    fn attach_children(&mut self, parent: NodeId, specs: &[NodeSpec], path: &str) -> Result<()> {
        let mut seen = HashSet::new();
        for (pos, spec) in specs.iter().enumerate() {
            let here = format!("{path}.criteria[{pos}]");
            if spec.label.is_empty() || spec.label.contains('/') {
                return Err(Error::at(
                    ErrorCode::Schema,
                    format!("{here}.label"),
                    format!("label `{}` must be non-empty and must not contain '/'", spec.label),
                ));
            }
            if !seen.insert(spec.label.as_str()) {
                return Err(Error::at(
                    ErrorCode::DuplicateLabel,
                    format!("{here}.label"),
                    format!("duplicate sibling label `{}`", spec.label),
                ));
            }
            let mut index = self.nodes[parent].index.clone();
            index.push(pos + 1);
            let id = self.nodes.len();
            self.nodes.push(CriterionNode {
                label: spec.label.clone(),
                index,
                parent: Some(parent),
                children: Vec::new(),
                weights: None,
                leaf_position: None,
            });
            self.nodes[parent].children.push(id);
            if spec.children.is_empty() {
                self.nodes[id].leaf_position = Some(self.elementary.len());
                self.elementary.push(id);
            } else {
                let weights = spec.weights.clone().ok_or_else(|| {
                    Error::at(
                        ErrorCode::WeightSpec,
                        format!("{here}.weights"),
                        format!("criterion `{}` has sub-criteria but no weight information", spec.label),
                    )
                })?;
                weights
                    .validate(spec.children.len())
                    .map_err(|e| e.with_path(format!("{here}.weights")))?;
                self.nodes[id].weights = Some(weights);
                self.attach_children(id, &spec.children, &here)?;
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    pub fn node(&self, id: NodeId) -> &CriterionNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &CriterionNode)> {
        self.nodes.iter().enumerate()
    }

    /// All criteria (every node except the implicit root) in depth-first
    /// declaration order.
    pub fn criteria(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len() - 1);
        self.walk(ROOT, &mut out);
        out
    }

    fn walk(&self, id: NodeId, out: &mut Vec<NodeId>) {
        for &child in &self.nodes[id].children {
            out.push(child);
            self.walk(child, out);
        }
    }

    pub fn first_level(&self) -> &[NodeId] {
        &self.nodes[ROOT].children
    }

    /// Elementary criteria in canonical order.
    pub fn elementary(&self) -> &[NodeId] {
        &self.elementary
    }

    pub fn elementary_count(&self) -> usize {
        self.elementary.len()
    }

    pub fn elementary_indices(&self) -> Vec<IndexPath> {
        self.elementary.iter().map(|&id| IndexPath(self.nodes[id].index.clone())).collect()
    }

    /// Internal nodes (including the root) in id order; these own the weight
    /// groups.
    pub fn groups(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().enumerate().filter(|(_, n)| !n.children.is_empty()).map(|(id, _)| id)
    }

    /// Elementary descendants of `id` as positions in the canonical order.
    pub fn elementary_below(&self, id: NodeId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            if let Some(pos) = node.leaf_position {
                out.push(pos);
            }
            stack.extend(node.children.iter().rev());
        }
        out
    }

    pub fn find_index(&self, index: &[usize]) -> Option<NodeId> {
        let mut id = ROOT;
        for &j in index {
            id = *self.nodes[id].children.get(j.checked_sub(1)?)?;
        }
        Some(id)
    }

    /// Finds a node by its `/`-separated label path, e.g. `PP/inputs/IF`.
    pub fn find_label_path(&self, path: &str) -> Option<NodeId> {
        let mut id = ROOT;
        for part in path.split('/') {
            id = *self.nodes[id].children.iter().find(|&&c| self.nodes[c].label == part)?;
        }
        (id != ROOT).then_some(id)
    }

    pub fn label_path(&self, id: NodeId) -> String {
        let mut parts = Vec::new();
        let mut cur = Some(id);
        while let Some(n) = cur {
            if n == ROOT {
                break;
            }
            parts.push(self.nodes[n].label.as_str());
            cur = self.nodes[n].parent;
        }
        parts.reverse();
        parts.join("/")
    }

    pub fn index_path(&self, id: NodeId) -> IndexPath {
        IndexPath(self.nodes[id].index.clone())
    }

    /// Converts the tree back to its input description.
    pub fn to_spec(&self) -> TreeSpec {
        TreeSpec {
            weights: self.nodes[ROOT].weights.clone().unwrap_or(WeightSpec::Missing),
            criteria: self.nodes[ROOT].children.iter().map(|&c| self.node_spec(c)).collect(),
        }
    }

    fn node_spec(&self, id: NodeId) -> NodeSpec {
        let node = &self.nodes[id];
        NodeSpec {
            label: node.label.clone(),
            weights: node.weights.clone(),
            children: node.children.iter().map(|&c| self.node_spec(c)).collect(),
        }
    }

    /// Product of the weights along the path from the first level down to
    /// `id`.
    pub fn effective_weight(&self, id: NodeId, weights: &NodeWeights) -> f64 {
        let mut product = 1.0;
        let mut cur = id;
        while cur != ROOT {
            product *= weights.get(cur);
            cur = self.nodes[cur].parent.expect("non-root node has a parent");
        }
        product
    }
}

/// Concrete weight of every node relative to its siblings; the root carries
/// weight 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeights(Vec<f64>);

impl NodeWeights {
    /// All-ones placeholder to be filled group by group.
    pub fn unit(tree: &CriteriaTree) -> Self {
        NodeWeights(vec![1.0; tree.len()])
    }

    pub fn get(&self, id: NodeId) -> f64 {
        self.0[id]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Sets the weights of the children of `parent`, in sibling order.
    pub fn set_group(&mut self, tree: &CriteriaTree, parent: NodeId, values: &[f64]) {
        let children = tree.node(parent).children();
        assert_eq!(children.len(), values.len(), "weight group size mismatch");
        for (&c, &v) in children.iter().zip(values) {
            self.0[c] = v;
        }
    }

    /// Weights of the children of `parent`, in sibling order.
    pub fn group(&self, tree: &CriteriaTree, parent: NodeId) -> Vec<f64> {
        tree.node(parent).children().iter().map(|&c| self.0[c]).collect()
    }

    /// Builds weights from the deterministic specs of every group. Fails if
    /// any group is not deterministic.
    pub fn deterministic(tree: &CriteriaTree) -> Result<Self> {
        let mut weights = NodeWeights::unit(tree);
        for g in tree.groups() {
            match tree.node(g).weight_spec() {
                Some(WeightSpec::Deterministic(w)) => weights.set_group(tree, g, w),
                other => {
                    return Err(Error::new(
                        ErrorCode::WeightSpec,
                        format!(
                            "weights below `{}` are {}, not deterministic",
                            tree.label_path(g),
                            other.map(WeightSpec::kind).unwrap_or("absent")
                        ),
                    ))
                }
            }
        }
        Ok(weights)
    }
}

/// Effective weight of the elementary criterion at `path`.
pub fn effective_weight(tree: &CriteriaTree, path: &[usize], weights: &NodeWeights) -> Result<f64> {
    let id = tree
        .find_index(path)
        .filter(|&id| id != ROOT && tree.node(id).is_elementary())
        .ok_or_else(|| {
            Error::new(
                ErrorCode::UnknownNode,
                format!("{} is not an elementary criterion", IndexPath(path.to_vec())),
            )
        })?;
    Ok(tree.effective_weight(id, weights))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn appendix_spec() -> TreeSpec {
        TreeSpec {
            weights: WeightSpec::Deterministic(vec![0.3, 0.7]),
            criteria: vec![
                NodeSpec::group(
                    "g1",
                    WeightSpec::Deterministic(vec![0.2, 0.8]),
                    vec![NodeSpec::leaf("g1.1"), NodeSpec::leaf("g1.2")],
                ),
                NodeSpec::group(
                    "g2",
                    WeightSpec::Deterministic(vec![0.4, 0.6]),
                    vec![NodeSpec::leaf("g2.1"), NodeSpec::leaf("g2.2")],
                ),
            ],
        }
    }

    fn case_study_spec() -> TreeSpec {
        let processes = ["PP", "TW", "PN", "ProjM", "PE", "PortM", "IPM", "CM", "THR"];
        TreeSpec {
            weights: WeightSpec::Ordinal(
                [1, 2, 1, 2, 1, 2, 3, 3, 3].iter().map(|&r| Some(r)).collect(),
            ),
            criteria: processes
                .iter()
                .map(|p| {
                    NodeSpec::group(
                        *p,
                        WeightSpec::Deterministic(vec![0.6, 0.4]),
                        vec![
                            NodeSpec::leaf("existence"),
                            NodeSpec::group(
                                "inputs",
                                WeightSpec::Ordinal(vec![Some(2), Some(2), Some(3), Some(4), Some(1)]),
                                ["IF", "HR", "CR", "WP", "IR"].iter().map(|l| NodeSpec::leaf(*l)).collect(),
                            ),
                        ],
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn appendix_tree() {
        let tree = CriteriaTree::build(&appendix_spec()).unwrap();
        assert_eq!(tree.elementary_count(), 4);
        let idx: Vec<String> = tree.elementary_indices().iter().map(|p| p.to_string()).collect();
        assert_eq!(idx, ["1.1", "1.2", "2.1", "2.2"]);
        let weights = NodeWeights::deterministic(&tree).unwrap();
        assert!((effective_weight(&tree, &[1, 2], &weights).unwrap() - 0.24).abs() < 1e-15);
        let total: f64 = tree.elementary().iter().map(|&id| tree.effective_weight(id, &weights)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(effective_weight(&tree, &[1], &weights).unwrap_err().code(), ErrorCode::UnknownNode);
        assert_eq!(effective_weight(&tree, &[3, 1], &weights).unwrap_err().code(), ErrorCode::UnknownNode);
    }

    #[test]
    fn single_node_tree() {
        let spec = TreeSpec { weights: WeightSpec::Deterministic(vec![1.0]), criteria: vec![NodeSpec::leaf("only")] };
        let tree = CriteriaTree::build(&spec).unwrap();
        assert_eq!(tree.elementary_count(), 1);
        assert_eq!(tree.elementary_indices()[0].to_string(), "1");
        let w = NodeWeights::deterministic(&tree).unwrap();
        assert_eq!(effective_weight(&tree, &[1], &w).unwrap(), 1.0);
    }

    #[test]
    fn case_study_tree() {
        let tree = CriteriaTree::build(&case_study_spec()).unwrap();
        assert_eq!(tree.first_level().len(), 9);
        assert_eq!(tree.elementary_count(), 54);
        let first = tree.elementary()[0];
        assert_eq!(tree.label_path(first), "PP/existence");
        assert_eq!(tree.index_path(first).to_string(), "1.1");
        assert_eq!(tree.label_path(tree.elementary()[1]), "PP/inputs/IF");
        assert_eq!(tree.index_path(tree.elementary()[1]).to_string(), "1.2.1");
        assert_eq!(tree.criteria().len(), 9 * 8);
        assert_eq!(tree.find_label_path("CM/inputs/WP"), tree.find_index(&[8, 2, 4]));
        assert_eq!(tree.elementary_below(tree.find_index(&[2, 2]).unwrap()), vec![7, 8, 9, 10, 11]);
    }

    #[test]
    fn stable_enumeration() {
        let a = CriteriaTree::build(&case_study_spec()).unwrap();
        let b = CriteriaTree::build(&a.to_spec()).unwrap();
        assert_eq!(a, b);
        assert_eq!(format!("{:?}", a.elementary_indices()), format!("{:?}", b.elementary_indices()));
    }

    #[test]
    fn rejects_bad_trees() {
        let empty = TreeSpec { weights: WeightSpec::Missing, criteria: vec![] };
        assert_eq!(CriteriaTree::build(&empty).unwrap_err().code(), ErrorCode::EmptyTree);

        let dup = TreeSpec {
            weights: WeightSpec::Missing,
            criteria: vec![NodeSpec::leaf("a"), NodeSpec::leaf("a")],
        };
        assert_eq!(CriteriaTree::build(&dup).unwrap_err().code(), ErrorCode::DuplicateLabel);

        let mut bad_sum = appendix_spec();
        bad_sum.weights = WeightSpec::Deterministic(vec![0.3, 0.6]);
        let err = CriteriaTree::build(&bad_sum).unwrap_err();
        assert_eq!(err.code(), ErrorCode::WeightSpec);
        assert_eq!(err.path(), Some("tree.weights"));

        let mut zero = appendix_spec();
        zero.criteria[0].weights = Some(WeightSpec::Deterministic(vec![0.0, 1.0]));
        assert_eq!(CriteriaTree::build(&zero).unwrap_err().code(), ErrorCode::WeightSpec);

        let mut ranks = appendix_spec();
        ranks.weights = WeightSpec::Ordinal(vec![Some(0), Some(1)]);
        assert_eq!(CriteriaTree::build(&ranks).unwrap_err().code(), ErrorCode::InvalidRanks);

        let mut interval = appendix_spec();
        interval.weights = WeightSpec::Interval(vec![(0.6, 0.9), (0.5, 0.9)]);
        assert_eq!(CriteriaTree::build(&interval).unwrap_err().code(), ErrorCode::WeightSpec);
        interval.weights = WeightSpec::Interval(vec![(0.0, 0.3), (0.0, 0.3)]);
        assert_eq!(CriteriaTree::build(&interval).unwrap_err().code(), ErrorCode::WeightSpec);
        interval.weights = WeightSpec::Interval(vec![(0.5, 0.4), (0.0, 1.0)]);
        assert_eq!(CriteriaTree::build(&interval).unwrap_err().code(), ErrorCode::WeightSpec);

        let mut unweighted = appendix_spec();
        unweighted.criteria[1].weights = None;
        assert_eq!(CriteriaTree::build(&unweighted).unwrap_err().code(), ErrorCode::WeightSpec);
    }

    #[test]
    fn uneven_depth() {
        let spec = TreeSpec {
            weights: WeightSpec::Missing,
            criteria: vec![
                NodeSpec::leaf("flat"),
                NodeSpec::group(
                    "deep",
                    WeightSpec::Missing,
                    vec![NodeSpec::group("mid", WeightSpec::Missing, vec![NodeSpec::leaf("x"), NodeSpec::leaf("y")])],
                ),
            ],
        };
        let tree = CriteriaTree::build(&spec).unwrap();
        let idx: Vec<String> = tree.elementary_indices().iter().map(|p| p.to_string()).collect();
        assert_eq!(idx, ["1", "2.1.1", "2.1.2"]);
        assert_eq!(tree.groups().count(), 3);
    }
}
