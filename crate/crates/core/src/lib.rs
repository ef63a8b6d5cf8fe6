//! Hierarchical FlowSort with fuzzy evaluations and stochastic multicriteria
//! acceptability analysis.
//!
//! Alternatives are sorted into ordered categories (best first) delimited by
//! limiting profiles. Criteria form a tree; evaluations and profiles may be
//! crisp, triangular fuzzy numbers or linguistic terms, and weights,
//! thresholds, profiles and evaluations may be uncertain. The [`smaa`] module
//! samples those uncertainties and reports how often each alternative lands
//! in each category, overall and at every criterion node.

pub mod error;
pub mod flows;
pub mod fuzzy;
pub mod hierarchy;
pub mod model;
pub mod preference;
pub mod report;
pub mod smaa;

pub use error::{Error, ErrorCode, Result};
pub use flows::{Assignment, Flow, FlowBundle, FlowSortH, NodeFlows, ProfileSet, Rule};
pub use fuzzy::{DefuzzMethod, Tfn};
pub use hierarchy::{CriteriaTree, IndexPath, NodeId, NodeSpec, NodeWeights, TreeSpec, WeightSpec, ROOT};
pub use model::{Alternative, LinguisticScale, Problem, SmaaSettings};
pub use preference::{Direction, Preference, Shape};
pub use report::{ReportFormat, ReportLevel};
pub use smaa::{run_deterministic, run_smaa, AcceptabilityResult, SmaaOptions, StochasticValue};
