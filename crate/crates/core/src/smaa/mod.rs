//! Stochastic acceptability analysis.
//!
//! Each iteration draws weights, thresholds, profiles and evaluations, runs
//! the sorting engine and records the category of every alternative overall
//! and at every criterion node. Iteration `i` draws from its own stream of a
//! generator seeded with the run seed, so results do not depend on how
//! iterations are scheduled across threads.

pub mod values;
pub mod weights;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, ErrorCode, Result};
use crate::flows::{check_within_profiles, FlowBundle, FlowSortH, ProfileSet, Rule};
use crate::fuzzy::{DefuzzMethod, Tfn};
use crate::hierarchy::{NodeId, NodeWeights, ROOT};
use crate::model::Problem;
use crate::preference::Preference;

pub use values::{
    sample_evaluation, sample_profiles, sample_thresholds, sample_value, Distribution, PreferenceSpec, StochasticValue,
};
pub use weights::{point_weights, sample_weights, sample_weights_interval, sample_weights_missing, sample_weights_ordinal};

#[derive(Debug, Clone, PartialEq)]
pub struct SmaaOptions {
    pub iterations: u64,
    pub seed: u64,
    pub rule: Rule,
    pub defuzz: DefuzzMethod,
    /// Cap on rejection attempts for any single draw.
    pub max_attempts: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Abort on a flow outside the profile range instead of clamping it to
    /// the nearest end category.
    pub strict: bool,
}

impl Default for SmaaOptions {
    fn default() -> Self {
        SmaaOptions {
            iterations: 10_000,
            seed: 0,
            rule: Rule::Net,
            defuzz: DefuzzMethod::Centroid,
            max_attempts: 1_000_000,
            threads: None,
            strict: false,
        }
    }
}

impl SmaaOptions {
    pub fn from_problem(problem: &Problem) -> Self {
        let s = &problem.smaa;
        SmaaOptions {
            iterations: s.iterations,
            seed: s.seed,
            rule: s.rule,
            defuzz: s.defuzz,
            max_attempts: s.max_attempts,
            threads: None,
            strict: s.strict,
        }
    }
}

/// Category hit counts for every alternative at every tree node. The root
/// node holds the overall category acceptability; other nodes hold the
/// single-criterion acceptability.
#[derive(Debug, Clone, PartialEq)]
pub struct AcceptabilityResult {
    pub alternatives: Vec<String>,
    pub categories: Vec<String>,
    pub nodes: usize,
    hits: Vec<u64>,
    pub iterations: u64,
    pub seed: u64,
    pub rule: Rule,
    pub defuzz: DefuzzMethod,
    /// Assignments clamped to an end category because a flow fell outside
    /// the profile range.
    pub boundary_violations: u64,
    /// Produced by a single point-estimate run rather than sampling.
    pub deterministic: bool,
}

impl AcceptabilityResult {
    fn offset(&self, alt: usize, node: NodeId) -> usize {
        (alt * self.nodes + node) * self.categories.len()
    }

    pub fn hits(&self, alt: usize, node: NodeId) -> &[u64] {
        let o = self.offset(alt, node);
        &self.hits[o..o + self.categories.len()]
    }

    /// Acceptability of each category for `alt` at `node`.
    pub fn row(&self, alt: usize, node: NodeId) -> Vec<f64> {
        self.hits(alt, node).iter().map(|&h| h as f64 / self.iterations as f64).collect()
    }

    /// Overall category acceptability indices, alternatives by categories.
    pub fn category_index(&self) -> Vec<Vec<f64>> {
        (0..self.alternatives.len()).map(|a| self.row(a, ROOT)).collect()
    }

    /// Single-criterion acceptability indices at `node`.
    pub fn single_criterion_index(&self, node: NodeId) -> Vec<Vec<f64>> {
        (0..self.alternatives.len()).map(|a| self.row(a, node)).collect()
    }

    /// Most acceptable category; ties go to the better category.
    pub fn argmax(&self, alt: usize, node: NodeId) -> usize {
        let hits = self.hits(alt, node);
        let mut best = 0;
        for (h, &v) in hits.iter().enumerate() {
            if v > hits[best] {
                best = h;
            }
        }
        best
    }
}

/// Leaf-level inputs of one iteration. Weights are kept apart because they
/// are the only part that must be redrawn when everything else is fixed.
struct Inputs {
    prefs: Vec<Preference>,
    profiles: ProfileSet,
    evaluations: Vec<Vec<Tfn>>,
}

/// Fuzzy leaf comparisons reused across iterations when no input other than
/// the weights is uncertain.
struct Cached {
    inputs: Inputs,
    profile_cells: Vec<Tfn>,
    alternative_cells: Vec<Vec<Tfn>>,
}

fn leaf_path(problem: &Problem, pos: usize) -> String {
    problem.tree.label_path(problem.tree.elementary()[pos])
}

fn draw_weights(problem: &Problem, rng: &mut ChaCha8Rng, max_attempts: u64) -> Result<NodeWeights> {
    let tree = &problem.tree;
    let mut weights = NodeWeights::unit(tree);
    for g in tree.groups() {
        let node = tree.node(g);
        let spec = node.weight_spec().expect("groups carry weights");
        let w = sample_weights(spec, node.children().len(), rng, max_attempts).map_err(|e| {
            let label = if g == ROOT { "tree".to_owned() } else { tree.label_path(g) };
            e.with_path(format!("weights below {label}"))
        })?;
        weights.set_group(tree, g, &w);
    }
    Ok(weights)
}

fn draw_inputs(problem: &Problem, rng: &mut ChaCha8Rng, max_attempts: u64) -> Result<Inputs> {
    let prefs = problem
        .preferences
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            spec.sample(rng, max_attempts)
                .map_err(|e| e.with_path(format!("preferences.criteria.{}", leaf_path(problem, i))))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = problem
        .profiles
        .iter()
        .zip(&prefs)
        .enumerate()
        .map(|(i, (row, pref))| {
            sample_profiles(row, pref.direction, rng, max_attempts)
                .map_err(|e| e.with_path(format!("profiles.criteria.{}", leaf_path(problem, i))))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut evaluations = Vec::with_capacity(problem.alternatives.len());
    for (a, alt) in problem.alternatives.iter().enumerate() {
        let x = alt
            .values
            .iter()
            .zip(&rows)
            .enumerate()
            .map(|(i, (v, row))| {
                sample_evaluation(v, row, rng, max_attempts)
                    .map_err(|e| e.with_path(format!("alternatives[{a}].values.{}", leaf_path(problem, i))))
            })
            .collect::<Result<Vec<_>>>()?;
        evaluations.push(x);
    }
    Ok(Inputs { prefs, profiles: ProfileSet::new(rows)?, evaluations })
}

/// Assigns every alternative at every node and adds one hit each. Returns
/// the number of clamped assignments.
fn tally(
    problem: &Problem,
    bundles: impl Iterator<Item = FlowBundle>,
    rule: Rule,
    strict: bool,
    hits: &mut [u64],
) -> Result<u64> {
    let k = problem.categories();
    let nodes = problem.tree.len();
    let mut clamped = 0;
    for (a, bundle) in bundles.enumerate() {
        for node in 0..nodes {
            let flows = bundle.node(node);
            let h = if strict {
                flows.assign(rule).map_err(|e| {
                    e.with_path(format!("{} at {}", problem.alternatives[a].name, node_name(problem, node)))
                })?
            } else {
                let (h, was_clamped) = flows.assign_clamped(rule)?;
                clamped += u64::from(was_clamped);
                h
            };
            hits[(a * nodes + node) * k + h] += 1;
        }
    }
    Ok(clamped)
}

struct Run<'a> {
    problem: &'a Problem,
    opts: &'a SmaaOptions,
    cached: Option<Cached>,
}

impl Run<'_> {
    fn iteration(&self, i: u64, hits: &mut [u64]) -> Result<u64> {
        let (problem, opts) = (self.problem, self.opts);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(i);
        let weights = draw_weights(problem, &mut rng, opts.max_attempts)?;
        match &self.cached {
            Some(c) => {
                let engine = FlowSortH::new(&problem.tree, &weights, &c.inputs.prefs, &c.inputs.profiles, opts.defuzz)?;
                let block = engine.profile_block_from(&c.profile_cells);
                let bundles = c.alternative_cells.iter().map(|cells| engine.evaluate_from(&block, cells));
                tally(problem, bundles, opts.rule, opts.strict, hits)
            }
            None => {
                let inputs = draw_inputs(problem, &mut rng, opts.max_attempts)?;
                let engine = FlowSortH::new(&problem.tree, &weights, &inputs.prefs, &inputs.profiles, opts.defuzz)?;
                let block = engine.profile_block();
                let bundles = inputs
                    .evaluations
                    .iter()
                    .map(|x| engine.evaluate_with(&block, x))
                    .collect::<Result<Vec<_>>>()?;
                tally(problem, bundles.into_iter(), opts.rule, opts.strict, hits)
            }
        }
    }
}

fn has_random_inputs(problem: &Problem) -> bool {
    problem.preferences.iter().any(PreferenceSpec::is_random)
        || problem.profiles.iter().flatten().any(StochasticValue::is_random)
        || problem.alternatives.iter().flat_map(|a| &a.values).any(StochasticValue::is_random)
}

fn node_name(problem: &Problem, node: NodeId) -> String {
    if node == ROOT {
        "overall".to_owned()
    } else {
        problem.tree.label_path(node)
    }
}

fn empty_result(problem: &Problem, iterations: u64, seed: u64, rule: Rule, defuzz: DefuzzMethod) -> AcceptabilityResult {
    AcceptabilityResult {
        alternatives: problem.alternatives.iter().map(|a| a.name.clone()).collect(),
        categories: problem.categories.clone(),
        nodes: problem.tree.len(),
        hits: vec![0; problem.alternatives.len() * problem.tree.len() * problem.categories()],
        iterations,
        seed,
        rule,
        defuzz,
        boundary_violations: 0,
        deterministic: false,
    }
}

/// Monte Carlo acceptability analysis.
pub fn run_smaa(problem: &Problem, opts: &SmaaOptions) -> Result<AcceptabilityResult> {
    if opts.iterations == 0 {
        return Err(Error::new(ErrorCode::Domain, "at least one iteration is required"));
    }
    let cached = if has_random_inputs(problem) {
        None
    } else {
        // no randomness is consumed by fixed inputs, so the per-iteration
        // streams are the same with or without the cache
        let mut unused = ChaCha8Rng::seed_from_u64(opts.seed);
        let inputs = draw_inputs(problem, &mut unused, opts.max_attempts)?;
        let weights = NodeWeights::unit(&problem.tree);
        let engine = FlowSortH::new(&problem.tree, &weights, &inputs.prefs, &inputs.profiles, opts.defuzz)?;
        let profile_cells = engine.profile_cells();
        let alternative_cells = inputs.evaluations.iter().map(|x| engine.alternative_cells(x)).collect::<Result<_>>()?;
        Some(Cached { inputs, profile_cells, alternative_cells })
    };
    let run = Run { problem, opts, cached };
    let mut result = empty_result(problem, opts.iterations, opts.seed, opts.rule, opts.defuzz);
    let size = result.hits.len();

    let work = || {
        (0..opts.iterations)
            .into_par_iter()
            .fold(
                || (vec![0u64; size], 0u64, None::<(u64, Error)>),
                |(mut hits, mut clamped, mut failed), i| {
                    // within a fold chunk indices ascend, so later ones cannot
                    // produce a smaller failing index
                    if failed.is_none() {
                        match run.iteration(i, &mut hits) {
                            Ok(c) => clamped += c,
                            Err(e) => failed = Some((i, e)),
                        }
                    }
                    (hits, clamped, failed)
                },
            )
            .reduce(
                || (vec![0u64; size], 0u64, None),
                |(mut a, ca, fa), (b, cb, fb)| {
                    for (x, y) in a.iter_mut().zip(&b) {
                        *x += y;
                    }
                    let failed = match (fa, fb) {
                        (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                        (x, y) => x.or(y),
                    };
                    (a, ca + cb, failed)
                },
            )
    };

    let (hits, clamped, failed) = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::new(ErrorCode::Domain, format!("cannot start worker threads: {e}")))?
            .install(work),
        None => work(),
    };
    if let Some((i, e)) = failed {
        return Err(Error::new(e.code(), format!("iteration {i}: {}", e.message())).with_path(e.path().unwrap_or("smaa")));
    }
    result.hits = hits;
    result.boundary_violations = clamped;
    Ok(result)
}

/// Single engine run on point estimates of every uncertain input.
pub fn run_deterministic(problem: &Problem, rule: Rule, defuzz: DefuzzMethod, strict: bool) -> Result<AcceptabilityResult> {
    let inst = problem.point_instance()?;
    for (a, x) in inst.evaluations.iter().enumerate() {
        for (i, &v) in x.iter().enumerate() {
            check_within_profiles(v, inst.profiles.row(i))
                .map_err(|e| e.with_path(format!("alternatives[{a}].values.{}", leaf_path(problem, i))))?;
        }
    }
    let engine = FlowSortH::new(&problem.tree, &inst.weights, &inst.preferences, &inst.profiles, defuzz)?;
    let block = engine.profile_block();
    let bundles = inst.evaluations.iter().map(|x| engine.evaluate_with(&block, x)).collect::<Result<Vec<_>>>()?;
    let mut result = empty_result(problem, 1, 0, rule, defuzz);
    result.boundary_violations = tally(problem, bundles.into_iter(), rule, strict, &mut result.hits)?;
    result.deterministic = true;
    Ok(result)
}
