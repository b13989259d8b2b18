//! Mechanical checks of the reduction claims on concrete instances.
//!
//! Every boolean in a report is computed from the quantities stored next to
//! it, never assumed.

mod generate;
mod report;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formulas::{
    brute_force_opt, check_occurrence_profile, evaluate, validate, Assignment, CsatInstance,
    Formula, FormulaError, SatInstance, ValidationReport,
};
use crate::intervals::{
    collapse_twins, GeometryError, IntersectionGraph, OpenInterval, Tag, TrackFamily, VertexClass,
    LITERAL_COPIES,
};
use crate::reductions::{
    assignment_to_clique, canonicalize_clique, clique_to_assignment, construct_tracks, gadgetize,
    CliqueWitness, ReductionError,
};
use crate::solvers::{max_clique_bb, max_clique_enum, CliqueSolution, ENUM_VERTEX_CAP};

pub use generate::{gen_csat, gen_sat, random_csat_shape, random_weighted_graph, GenError};
pub use report::{Check, VerifyReport};

/// Multiplicative constant relating the clique optimum to the CSAT optimum.
pub const ALPHA: u64 = 97;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid instance: {0}")]
    Invalid(ValidationReport),
}

/// At most this many counterexample pairs are kept per observation.
const KEPT_COUNTEREXAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationOutcome {
    pub name: &'static str,
    pub violations: usize,
    pub counterexamples: Vec<(Tag, Tag)>,
}

impl ObservationOutcome {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            violations: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, a: Tag, b: Tag) {
        self.violations += 1;
        if self.counterexamples.len() < KEPT_COUNTEREXAMPLES {
            self.counterexamples.push((a, b));
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// The four structural facts the clique argument rests on:
/// 1. literals of distinct variables intersect,
/// 2. clauses intersect each other,
/// 3. the two literals of a variable are disjoint,
/// 4. a clause is disjoint from exactly the literals it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationReport {
    pub outcomes: [ObservationOutcome; 4],
}

impl ObservationReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(ObservationOutcome::passed)
    }
}

/// Exhaustive pairwise check over every member of `family`.
pub fn check_observations(instance: &CsatInstance, family: &TrackFamily) -> ObservationReport {
    let mut distinct_vars = ObservationOutcome::new("distinct_variables_overlap");
    let mut clauses = ObservationOutcome::new("clauses_overlap");
    let mut complements = ObservationOutcome::new("complements_disjoint");
    let mut clause_literals = ObservationOutcome::new("clause_literal_disjointness");

    let members = family.members();
    for (idx, a) in members.iter().enumerate() {
        for b in &members[idx + 1..] {
            let meets = a.interval.intersects(&b.interval);
            match (a.tag.as_literal(), b.tag.as_literal()) {
                (Some(la), Some(lb)) if la.var() != lb.var() => {
                    if !meets {
                        distinct_vars.record(a.tag, b.tag);
                    }
                }
                (Some(la), Some(lb)) if la != lb => {
                    if meets {
                        complements.record(a.tag, b.tag);
                    }
                }
                (Some(_), Some(_)) => {}
                (None, None) => {
                    if !meets {
                        clauses.record(a.tag, b.tag);
                    }
                }
                (lit, _) => {
                    let (literal, clause_tag, pair) = match lit {
                        Some(l) => (l, b.tag, (a.tag, b.tag)),
                        None => (
                            b.tag.as_literal().expect("one side is a literal"),
                            a.tag,
                            (a.tag, b.tag),
                        ),
                    };
                    let Tag::Clause(k) = clause_tag else {
                        unreachable!()
                    };
                    let contains = instance
                        .clauses()
                        .get(k - 1)
                        .is_some_and(|c| c.contains(literal));
                    if meets == contains {
                        clause_literals.record(pair.0, pair.1);
                    }
                }
            }
        }
    }
    ObservationReport {
        outcomes: [distinct_vars, clauses, complements, clause_literals],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockViolation {
    /// Source assignment, `x1` first.
    pub assignment: Assignment,
    pub dummy_value: bool,
    /// 1-based source clause.
    pub block: usize,
    pub satisfied: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetReport {
    pub sat_optimum: usize,
    pub csat_optimum: usize,
    pub block_violations: Vec<BlockViolation>,
    pub csat_validation: ValidationReport,
    /// Strict occurrence profile: 12 per original variable, 4 per dummy.
    pub profile: ValidationReport,
}

impl GadgetReport {
    pub fn block_law_ok(&self) -> bool {
        self.block_violations.is_empty()
    }

    pub fn optimum_ok(&self) -> bool {
        self.csat_optimum == 2 * self.sat_optimum
    }

    pub fn passed(&self) -> bool {
        self.block_law_ok()
            && self.optimum_ok()
            && self.csat_validation.is_valid()
            && self.profile.is_valid()
    }
}

/// Checks the gadget on `source`:
/// * for every source assignment and both dummy values, each six-clause
///   block satisfies exactly 2 clauses if its source clause holds and 0
///   otherwise (a block only reads its own dummy, so this covers every
///   assignment of the gadgetized instance);
/// * the gadgetized optimum is exactly twice the source optimum.
pub fn check_gadget(source: &SatInstance) -> Result<GadgetReport, VerifyError> {
    let (csat, map) = gadgetize(source)?;
    let sat_optimum = brute_force_opt(source)?.value;
    let csat_optimum = brute_force_opt(&csat)?.value;
    let n = source.num_vars();
    let mut block_violations = Vec::new();
    let mut full = Assignment::uniform(csat.num_vars(), false);
    for mask in 0..(1u64 << n) {
        let a = Assignment::from_mask(n, mask);
        for var in 1..=n {
            full.set(var, a.value(var));
        }
        for dummy_value in [false, true] {
            for block in &map.blocks {
                full.set(block.dummy, dummy_value);
            }
            for (idx, (clause, block)) in source.clauses().iter().zip(&map.blocks).enumerate() {
                let satisfied = block
                    .clauses()
                    .filter(|&k| csat.clause_holds(&csat.clauses()[k - 1], &full))
                    .count();
                let expected = if source.clause_holds(clause, &a) {
                    2
                } else {
                    0
                };
                if satisfied != expected {
                    block_violations.push(BlockViolation {
                        assignment: a.clone(),
                        dummy_value,
                        block: idx + 1,
                        satisfied,
                    });
                }
            }
        }
    }
    Ok(GadgetReport {
        sat_optimum,
        csat_optimum,
        block_violations,
        csat_validation: validate(&csat),
        profile: check_occurrence_profile(&csat, &map.expected_occurrences()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliqueOrigin {
    Optimal,
    Canonical,
    Pruned,
    Supplied,
}

impl CliqueOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            CliqueOrigin::Optimal => "optimal",
            CliqueOrigin::Canonical => "canonical",
            CliqueOrigin::Pruned => "pruned",
            CliqueOrigin::Supplied => "supplied",
        }
    }
}

/// One clique pushed back through the reverse map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaRecord {
    pub origin: CliqueOrigin,
    /// Size of the clique before canonicalization.
    pub w: usize,
    /// Clauses satisfied by the recovered assignment.
    pub z: usize,
    /// `z >= w - 12n`.
    pub constructive_ok: bool,
    /// `|z* - z| <= |w* - w|`.
    pub beta_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LReductionReport {
    pub n: usize,
    pub m: usize,
    pub z_star: usize,
    pub w_star: u64,
    /// Subset-enumeration optimum when the collapsed graph is small enough.
    pub w_enum: Option<u64>,
    pub identity_ok: bool,
    pub alpha_ok: bool,
    pub lower_ok: bool,
    pub size_ok: bool,
    pub engines_agree: bool,
    pub beta: Vec<BetaRecord>,
}

impl LReductionReport {
    pub fn passed(&self) -> bool {
        self.identity_ok
            && self.alpha_ok
            && self.lower_ok
            && self.size_ok
            && self.engines_agree
            && self.beta.iter().all(|b| b.constructive_ok && b.beta_ok)
    }
}

/// Expands a solution on the collapsed graph to every copy it stands for.
pub fn expand_solution(
    family: &TrackFamily,
    graph: &IntersectionGraph<VertexClass>,
    solution: &CliqueSolution,
) -> CliqueWitness {
    let classes: Vec<VertexClass> = solution.labels(graph).into_iter().copied().collect();
    CliqueWitness::new(
        family
            .members()
            .iter()
            .map(|m| m.tag)
            .filter(|t| classes.contains(&t.class())),
    )
}

/// Solves both sides exactly and fills the identity and constant checks.
/// The returned report carries a beta record for the optimal clique.
pub fn check_identity(instance: &CsatInstance) -> Result<LReductionReport, VerifyError> {
    let family = construct_tracks(instance)?;
    let z_star = brute_force_opt(instance)?.value;
    let graph = collapse_twins(&family)?;
    let bb = max_clique_bb(&graph, None);
    let w_star = bb.weight;
    let w_enum = if graph.len() <= ENUM_VERTEX_CAP {
        Some(max_clique_enum(&graph).expect("size checked").weight)
    } else {
        None
    };
    let witness_ok = graph.is_clique(&bb.vertices) && graph.total_weight(&bb.vertices) == w_star;
    let (n, m) = (instance.num_vars(), instance.num_clauses());
    let copies = LITERAL_COPIES as u64;

    let optimal = expand_solution(&family, &graph, &bb);
    let mut report = LReductionReport {
        n,
        m,
        z_star,
        w_star,
        w_enum,
        identity_ok: w_star == copies * n as u64 + z_star as u64,
        alpha_ok: w_star <= ALPHA * z_star as u64,
        lower_ok: 4 * z_star >= m,
        size_ok: n <= 2 * m,
        engines_agree: witness_ok && w_enum.is_none_or(|w| w == w_star),
        beta: Vec::new(),
    };
    let record = check_beta(
        instance,
        &family,
        &optimal,
        CliqueOrigin::Optimal,
        z_star,
        w_star,
    )?;
    report.beta.push(record);
    Ok(report)
}

/// Canonicalizes `clique`, reads off an assignment and checks both the
/// constructive bound `z >= |k| - 12n` and `|z* - z| <= |w* - w|`.
pub fn check_beta(
    instance: &CsatInstance,
    family: &TrackFamily,
    clique: &CliqueWitness,
    origin: CliqueOrigin,
    z_star: usize,
    w_star: u64,
) -> Result<BetaRecord, VerifyError> {
    let canonical = canonicalize_clique(family, clique)?;
    let (_, z) = clique_to_assignment(instance, family, &canonical)?;
    let w = clique.len();
    let base = LITERAL_COPIES * instance.num_vars();
    Ok(BetaRecord {
        origin,
        w,
        z,
        constructive_ok: z + base >= w,
        beta_ok: z_star.abs_diff(z) as u64 <= w_star.abs_diff(w as u64),
    })
}

/// Moves track 3 of `+1.1` onto `(-2, -1)`, where it meets track 3 of
/// every copy of `~x1`. Used to confirm the observation checks fire.
pub fn inject_fault(family: &TrackFamily) -> Result<TrackFamily, VerifyError> {
    let tag = Tag::Pos { var: 1, copy: 1 };
    let interval = OpenInterval::new(-2, -1)?;
    Ok(family.with_replaced_track(&tag, 3, interval)?)
}

/// Drops a random subset of members (each with probability 1/2).
pub fn prune_clique(clique: &CliqueWitness, rng: &mut impl Rng) -> CliqueWitness {
    CliqueWitness::new(clique.tags().iter().copied().filter(|_| rng.gen_bool(0.5)))
}

/// Every check for one conjunctive instance. Beta records cover the optimal
/// clique, forward cliques of random assignments, and random prunings.
pub fn verify_csat(
    instance: &CsatInstance,
    family: &TrackFamily,
    seed: u64,
) -> Result<VerifyReport, VerifyError> {
    let mut report = VerifyReport::default();
    let validation = validate(instance);
    report.push(Check::new(
        "valid",
        validation.is_valid(),
        validation.to_string(),
    ));
    if !validation.is_valid() {
        return Ok(report);
    }

    let observations = check_observations(instance, family);
    for outcome in &observations.outcomes {
        let detail = outcome
            .counterexamples
            .first()
            .map(|(a, b)| format!("violations={} first=({a}, {b})", outcome.violations))
            .unwrap_or_default();
        report.push(Check::new(outcome.name, outcome.passed(), detail));
    }
    report.set("n", instance.num_vars());
    report.set("m", instance.num_clauses());
    report.set("members", family.len());
    if !observations.passed() {
        return Ok(report);
    }

    let mut identity = check_identity(instance)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = instance.num_vars();
    let optimal = {
        let graph = collapse_twins(family)?;
        expand_solution(family, &graph, &max_clique_bb(&graph, None))
    };
    for _ in 0..4 {
        let a = Assignment::from_mask(n, rng.gen_range(0..(1u64 << n)));
        let forward = assignment_to_clique(instance, family, &a)?;
        let canonical = canonicalize_clique(family, &forward)?;
        identity.beta.push(check_beta(
            instance,
            family,
            &canonical,
            CliqueOrigin::Canonical,
            identity.z_star,
            identity.w_star,
        )?);
        let forward_ok = forward.len() == LITERAL_COPIES * n + evaluate(instance, &a)?;
        report.push(Check::new(
            "forward_size",
            forward_ok && forward.is_clique(family)?,
            format!("size={}", forward.len()),
        ));
        for source in [&optimal, &forward] {
            let pruned = prune_clique(source, &mut rng);
            identity.beta.push(check_beta(
                instance,
                family,
                &pruned,
                CliqueOrigin::Pruned,
                identity.z_star,
                identity.w_star,
            )?);
        }
    }
    report.absorb_identity(&identity);
    Ok(report)
}

/// Gadget battery on a disjunctive instance.
pub fn verify_sat(instance: &SatInstance) -> Result<VerifyReport, VerifyError> {
    let mut report = VerifyReport::default();
    let validation = validate(instance);
    report.push(Check::new(
        "valid",
        validation.is_valid(),
        validation.to_string(),
    ));
    if !validation.is_valid() {
        return Ok(report);
    }
    let gadget = check_gadget(instance)?;
    let first = gadget.block_violations.first().map(|v| {
        format!(
            "block={} dummy={} satisfied={}",
            v.block, v.dummy_value, v.satisfied
        )
    });
    report.push(Check::new(
        "block_law",
        gadget.block_law_ok(),
        first.unwrap_or_default(),
    ));
    report.push(Check::new(
        "gadget_optimum",
        gadget.optimum_ok(),
        format!(
            "z_sat={} z_csat={}",
            gadget.sat_optimum, gadget.csat_optimum
        ),
    ));
    report.push(Check::new(
        "gadget_valid",
        gadget.csat_validation.is_valid(),
        gadget.csat_validation.to_string(),
    ));
    report.push(Check::new(
        "gadget_profile",
        gadget.profile.is_valid(),
        gadget.profile.to_string(),
    ));
    report.set("n", instance.num_vars());
    report.set("m", instance.num_clauses());
    report.set("z_sat", gadget.sat_optimum);
    report.set("z_csat", gadget.csat_optimum);
    Ok(report)
}
