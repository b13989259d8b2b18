//! The two reductions and the solution maps between them.
//!
//! * [`gadgetize`] turns each disjunctive clause `l1 ∨ l2` into six
//!   conjunctive clauses over `l1`, `l2` and a fresh dummy variable. Exactly
//!   two of the six hold when the source clause holds, none otherwise.
//! * [`construct_tracks`] turns a conjunctive instance into `24n + m`
//!   3-track intervals: 12 copies per literal and one per clause.
//! * [`assignment_to_clique`], [`canonicalize_clique`] and
//!   [`clique_to_assignment`] carry solutions across the second reduction,
//!   in both directions.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formulas::{
    evaluate, validate, Assignment, Clause, CsatInstance, Formula, FormulaError, Literal,
    SatInstance, ValidationReport,
};
use crate::intervals::{
    GeometryError, Member, MultiTrackInterval, OpenInterval, Tag, TrackFamily, LITERAL_COPIES,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid instance: {0}")]
    Invalid(ValidationReport),
    #[error("clause {clause} repeats literal {literal}")]
    RepeatedLiteral { clause: usize, literal: Literal },
    #[error("clause {clause} has complementary literals")]
    Complementary { clause: usize },
    #[error("family has no member tagged {0}")]
    MissingTag(Tag),
    #[error("family has no interval for literal {0}")]
    MissingLiteral(Literal),
    #[error("{0} and {1} do not intersect")]
    NotAClique(Tag, Tag),
    #[error("variable x{var} is not in canonical form")]
    NotCanonical { var: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Provenance of a gadgetized instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetMap {
    /// Variables `1..=original_vars` keep their index.
    pub original_vars: usize,
    /// `blocks[k - 1]` describes source clause `k`.
    pub blocks: Vec<GadgetBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetBlock {
    /// 1-based index of the first of the six produced clauses.
    pub first_clause: usize,
    pub dummy: usize,
}

impl GadgetBlock {
    pub fn clauses(&self) -> std::ops::RangeInclusive<usize> {
        self.first_clause..=self.first_clause + GADGET_CLAUSES - 1
    }
}

/// Conjunctive clauses emitted per disjunctive clause.
pub const GADGET_CLAUSES: usize = 6;

impl GadgetMap {
    /// Exact occurrence counts the gadget produces from an instance in
    /// which every variable occurs three times: 12 per original, 4 per dummy.
    pub fn expected_occurrences(&self) -> Vec<usize> {
        let mut out = vec![4 * crate::formulas::SAT_OCCURRENCES; self.original_vars];
        out.extend(std::iter::repeat_n(4, self.blocks.len()));
        out
    }
}

impl fmt::Display for GadgetMap {
    /// One `c gadget k -> a..b y=v` line per source clause.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, block) in self.blocks.iter().enumerate() {
            writeln!(
                f,
                "c gadget {} -> {}..{} y={}",
                idx + 1,
                block.first_clause,
                block.first_clause + GADGET_CLAUSES - 1,
                block.dummy
            )?;
        }
        Ok(())
    }
}

/// The six conjunctive clauses standing in for `l1 ∨ l2` with dummy `y`.
pub fn gadget_clauses(clause: &Clause, dummy: usize) -> [Clause; GADGET_CLAUSES] {
    let (l1, l2) = (clause.first(), clause.second());
    let (y, not_y) = (Literal::pos(dummy), Literal::neg(dummy));
    [
        Clause::new(l1, y),
        Clause::new(l1, not_y),
        Clause::new(l2, y),
        Clause::new(l2, not_y),
        Clause::new(l1, l2.negated()),
        Clause::new(l1.negated(), l2),
    ]
}

/// Replaces every disjunctive clause by its six-clause block. Dummy
/// variables follow the originals, one per clause in clause order.
pub fn gadgetize(source: &SatInstance) -> Result<(CsatInstance, GadgetMap), ReductionError> {
    let report = validate(source);
    if !report.is_valid() {
        return Err(ReductionError::Invalid(report));
    }
    gadgetize_any(source)
}

/// [`gadgetize`] without the exact-occurrence precondition. The block law
/// still holds per clause; only the occurrence bound of the output is lost.
pub fn gadgetize_any(source: &SatInstance) -> Result<(CsatInstance, GadgetMap), ReductionError> {
    let n = source.num_vars();
    let mut clauses = Vec::with_capacity(GADGET_CLAUSES * source.num_clauses());
    let mut blocks = Vec::with_capacity(source.num_clauses());
    for (idx, clause) in source.clauses().iter().enumerate() {
        // `l ∨ l` would emit `l ∧ ¬l`.
        if clause.first() == clause.second() {
            return Err(ReductionError::RepeatedLiteral {
                clause: idx + 1,
                literal: clause.first(),
            });
        }
        let dummy = n + idx + 1;
        blocks.push(GadgetBlock {
            first_clause: clauses.len() + 1,
            dummy,
        });
        clauses.extend(gadget_clauses(clause, dummy));
    }
    let csat = CsatInstance::new(n + source.num_clauses(), clauses)?;
    Ok((
        csat,
        GadgetMap {
            original_vars: n,
            blocks,
        },
    ))
}

fn iv(lo: i64, hi: i64) -> OpenInterval {
    OpenInterval::new(lo, hi).expect("construction emits nonempty intervals")
}

/// Positive `x_i`: `(-i, i)`, `(i, n+1)`, `(i, i+1)`.
/// Negative `x_i`: `(i, n+1)`, `(-i, i)`, `(-(i+1), -i)`.
pub fn literal_interval(lit: Literal, num_vars: usize) -> MultiTrackInterval {
    let (i, top) = (lit.var() as i64, num_vars as i64 + 1);
    if lit.is_positive() {
        MultiTrackInterval::new([iv(-i, i), iv(i, top), iv(i, i + 1)])
    } else {
        MultiTrackInterval::new([iv(i, top), iv(-i, i), iv(-(i + 1), -i)])
    }
}

/// Interval for one conjunctive clause. Literal order is normalized first:
/// same-sign clauses by ascending variable, mixed clauses by which sign
/// carries the smaller variable.
pub fn clause_interval(clause: &Clause, num_vars: usize) -> Option<MultiTrackInterval> {
    if clause.is_complementary() {
        return None;
    }
    let (a, b) = (clause.first(), clause.second());
    let bottom = -(num_vars as i64 + 1);
    let tracks = match (a.is_positive(), b.is_positive()) {
        (true, true) | (false, false) => {
            let i = a.var().min(b.var()) as i64;
            let j = a.var().max(b.var()) as i64;
            let adjacent = j <= i + 1;
            if a.is_positive() {
                let t3 = if adjacent { iv(-1, 1) } else { iv(i + 1, j) };
                [iv(bottom, -j), iv(bottom, i), t3]
            } else {
                let t3 = if adjacent {
                    iv(-1, 1)
                } else {
                    iv(-j, -(i + 1))
                };
                [iv(bottom, i), iv(bottom, -j), t3]
            }
        }
        _ => {
            let (pos, neg) = if a.is_positive() { (a, b) } else { (b, a) };
            let (p, q) = (pos.var() as i64, neg.var() as i64);
            if p < q {
                // x_i ∧ ¬x_j, i < j
                [iv(p, q), iv(bottom, -q), iv(-1, p)]
            } else {
                // ¬x_i ∧ x_j, i < j
                [iv(bottom, -p), iv(q, p), iv(-q, 1)]
            }
        }
    };
    Some(MultiTrackInterval::new(tracks))
}

/// Builds the `24n + m` member family: for each variable, 12 positive then
/// 12 negative copies; then one member per clause.
pub fn construct_tracks(instance: &CsatInstance) -> Result<TrackFamily, ReductionError> {
    let report = validate(instance);
    if !report.is_valid() {
        return Err(ReductionError::Invalid(report));
    }
    let n = instance.num_vars();
    let mut members = Vec::with_capacity(2 * LITERAL_COPIES * n + instance.num_clauses());
    for var in 1..=n {
        for lit in [Literal::pos(var), Literal::neg(var)] {
            let interval = literal_interval(lit, n);
            members.extend((1..=LITERAL_COPIES).map(|copy| Member {
                tag: Tag::literal(lit, copy),
                interval,
            }));
        }
    }
    for (idx, clause) in instance.clauses().iter().enumerate() {
        let interval =
            clause_interval(clause, n).ok_or(ReductionError::Complementary { clause: idx + 1 })?;
        members.push(Member {
            tag: Tag::Clause(idx + 1),
            interval,
        });
    }
    Ok(TrackFamily::new(n, instance.num_clauses(), members)?)
}

/// A set of family tags, meant to be pairwise intersecting.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CliqueWitness {
    tags: BTreeSet<Tag>,
}

impl CliqueWitness {
    pub fn new(tags: impl IntoIterator<Item = Tag>) -> Self {
        Self {
            tags: tags.into_iter().collect(),
        }
    }

    pub fn tags(&self) -> &BTreeSet<Tag> {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn contains(&self, tag: &Tag) -> bool {
        self.tags.contains(tag)
    }

    /// First non-intersecting pair, if any.
    pub fn conflict(&self, family: &TrackFamily) -> Result<Option<(Tag, Tag)>, ReductionError> {
        let geometry = self
            .tags
            .iter()
            .map(|t| {
                family
                    .get(t)
                    .map(|g| (*t, *g))
                    .ok_or(ReductionError::MissingTag(*t))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (idx, (ta, a)) in geometry.iter().enumerate() {
            for (tb, b) in &geometry[idx + 1..] {
                if !a.intersects(b) {
                    return Ok(Some((*ta, *tb)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_clique(&self, family: &TrackFamily) -> Result<bool, ReductionError> {
        Ok(self.conflict(family)?.is_none())
    }

    fn ensure_clique(&self, family: &TrackFamily) -> Result<(), ReductionError> {
        match self.conflict(family)? {
            Some((a, b)) => Err(ReductionError::NotAClique(a, b)),
            None => Ok(()),
        }
    }
}

/// Forward direction. Note the inversion: a TRUE variable contributes the
/// copies of its NEGATIVE literal and a false one those of its positive
/// literal, since a clause interval is disjoint exactly from the intervals
/// of its own literals. Satisfied clauses join as well.
pub fn assignment_to_clique(
    instance: &CsatInstance,
    family: &TrackFamily,
    assignment: &Assignment,
) -> Result<CliqueWitness, ReductionError> {
    if assignment.len() != instance.num_vars() {
        return Err(FormulaError::AssignmentLength {
            expected: instance.num_vars(),
            got: assignment.len(),
        }
        .into());
    }
    let mut tags = BTreeSet::new();
    for (idx, clause) in instance.clauses().iter().enumerate() {
        if instance.clause_holds(clause, assignment) {
            tags.insert(Tag::Clause(idx + 1));
        }
    }
    for var in 1..=instance.num_vars() {
        let selected = Literal::new(var, !assignment.value(var));
        let before = tags.len();
        tags.extend(family.literal_copies(selected));
        if tags.len() == before {
            return Err(ReductionError::MissingLiteral(selected));
        }
    }
    if let Some(tag) = tags.iter().find(|t| !family.contains(t)) {
        return Err(ReductionError::MissingTag(*tag));
    }
    Ok(CliqueWitness { tags })
}

/// Rewrites a clique so that every variable contributes all copies of
/// exactly one literal, without shrinking it.
///
/// Variables are processed in order. A literal already present is kept;
/// otherwise the literal conflicting with fewer clause members is chosen
/// (positive on ties). Clause members disjoint from the chosen literal are
/// dropped and all its copies added. Each literal has at least as many
/// copies as clauses containing it, so no step loses size.
pub fn canonicalize_clique(
    family: &TrackFamily,
    clique: &CliqueWitness,
) -> Result<CliqueWitness, ReductionError> {
    clique.ensure_clique(family)?;
    let mut tags = clique.tags.clone();
    for var in 1..=family.num_vars() {
        let (pos, neg) = (Literal::pos(var), Literal::neg(var));
        let present = |lit: Literal| tags.iter().any(|t| t.as_literal() == Some(lit));
        let representative = |lit: Literal| -> Result<MultiTrackInterval, ReductionError> {
            family
                .literal_copies(lit)
                .next()
                .and_then(|t| family.get(&t).copied())
                .ok_or(ReductionError::MissingLiteral(lit))
        };
        let conflicting = |tags: &BTreeSet<Tag>, geom: &MultiTrackInterval| -> Vec<Tag> {
            tags.iter()
                .filter(|t| t.is_clause())
                .filter(|t| family.get(t).is_some_and(|g| !g.intersects(geom)))
                .copied()
                .collect()
        };

        let chosen = if present(pos) {
            pos
        } else if present(neg) {
            neg
        } else {
            let against_pos = conflicting(&tags, &representative(pos)?).len();
            let against_neg = conflicting(&tags, &representative(neg)?).len();
            if against_pos <= against_neg {
                pos
            } else {
                neg
            }
        };
        for tag in conflicting(&tags, &representative(chosen)?) {
            tags.remove(&tag);
        }
        tags.extend(family.literal_copies(chosen));
    }
    let out = CliqueWitness { tags };
    out.ensure_clique(family)?;
    Ok(out)
}

/// Reverse direction for a canonical clique: `x_i` is false when the
/// positive copies are present and true when the negative ones are.
/// Returns the assignment and the number of clauses it satisfies.
pub fn clique_to_assignment(
    instance: &CsatInstance,
    family: &TrackFamily,
    clique: &CliqueWitness,
) -> Result<(Assignment, usize), ReductionError> {
    let n = instance.num_vars();
    let mut assignment = Assignment::uniform(n, false);
    for var in 1..=n {
        let full = |lit: Literal| {
            let mut copies = family.literal_copies(lit).peekable();
            copies.peek().is_some() && copies.all(|t| clique.contains(&t))
        };
        let any = |lit: Literal| clique.tags.iter().any(|t| t.as_literal() == Some(lit));
        let (pos, neg) = (Literal::pos(var), Literal::neg(var));
        match (full(pos), full(neg), any(pos), any(neg)) {
            (true, false, true, false) => assignment.set(var, false),
            (false, true, false, true) => assignment.set(var, true),
            _ => return Err(ReductionError::NotCanonical { var }),
        }
    }
    let satisfied = evaluate(instance, &assignment)?;
    Ok((assignment, satisfied))
}
