//! Two-literal clause formulas: conjunctive (Max-E2-CSAT) and disjunctive
//! (Max-E2-SAT) instances, assignments, validation against the occurrence
//! bounds, and an exhaustive optimum oracle.
//!
//! Variables are 1-based. An occurrence is one literal slot, so a
//! duplicate-literal clause `x1 ∧ x1` counts as two occurrences of `x1`.

use std::fmt;

use thiserror::Error;

/// Upper bound on occurrences per variable in a conjunctive instance.
pub const MAX_CSAT_OCCURRENCES: usize = 12;
/// Exact occurrence count per variable in a disjunctive instance.
pub const SAT_OCCURRENCES: usize = 3;
/// Largest variable count [`brute_force_opt`] accepts.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("literal {literal} references a variable outside 1..={num_vars}")]
    VariableOutOfRange { literal: Literal, num_vars: usize },
    #[error("assignment has {got} values but the instance has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("{num_vars} variables exceed the brute-force cap of {cap}")]
    TooManyVariables { num_vars: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: usize,
    positive: bool,
}

impl Literal {
    /// Panics if `var` is 0.
    pub fn new(var: usize, positive: bool) -> Self {
        assert!(var >= 1, "variables are 1-based");
        Self { var, positive }
    }

    pub fn pos(var: usize) -> Self {
        Self::new(var, true)
    }

    pub fn neg(var: usize) -> Self {
        Self::new(var, false)
    }

    /// Signed-integer encoding, `0` excluded.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 {
            return None;
        }
        let var = usize::try_from(value.unsigned_abs()).ok()?;
        Some(Self::new(var, value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> usize {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Self {
        Self {
            var: self.var,
            positive: !self.positive,
        }
    }

    pub fn holds(self, assignment: &Assignment) -> bool {
        assignment.value(self.var) == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "~x{}", self.var)
        }
    }
}

/// An ordered pair of literals. Whether it is read as a conjunction or a
/// disjunction is a property of the instance holding it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: [Literal; 2],
}

impl Clause {
    pub fn new(first: Literal, second: Literal) -> Self {
        Self {
            lits: [first, second],
        }
    }

    pub fn first(&self) -> Literal {
        self.lits[0]
    }

    pub fn second(&self) -> Literal {
        self.lits[1]
    }

    pub fn literals(&self) -> [Literal; 2] {
        self.lits
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.lits.contains(&lit)
    }

    pub fn mentions(&self, var: usize) -> bool {
        self.lits.iter().any(|l| l.var == var)
    }

    /// `x ∧ ¬x` or `x ∨ ¬x`.
    pub fn is_complementary(&self) -> bool {
        self.lits[0] == self.lits[1].negated()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseKind {
    Conjunctive,
    Disjunctive,
}

impl ClauseKind {
    pub fn holds(self, clause: &Clause, assignment: &Assignment) -> bool {
        let [a, b] = clause.lits;
        match self {
            ClauseKind::Conjunctive => a.holds(assignment) && b.holds(assignment),
            ClauseKind::Disjunctive => a.holds(assignment) || b.holds(assignment),
        }
    }

    fn holds_bits(self, lits: [(u32, bool); 2], mask: u64) -> bool {
        let val = |(bit, positive): (u32, bool)| ((mask >> bit) & 1 == 1) == positive;
        match self {
            ClauseKind::Conjunctive => val(lits[0]) && val(lits[1]),
            ClauseKind::Disjunctive => val(lits[0]) || val(lits[1]),
        }
    }
}

/// Shared view over both instance kinds.
pub trait Formula {
    const KIND: ClauseKind;

    fn num_vars(&self) -> usize;

    fn clauses(&self) -> &[Clause];

    fn num_clauses(&self) -> usize {
        self.clauses().len()
    }

    fn clause_holds(&self, clause: &Clause, assignment: &Assignment) -> bool {
        Self::KIND.holds(clause, assignment)
    }
}

fn check_literal_range(num_vars: usize, clauses: &[Clause]) -> Result<(), FormulaError> {
    for clause in clauses {
        for literal in clause.lits {
            if literal.var > num_vars {
                return Err(FormulaError::VariableOutOfRange { literal, num_vars });
            }
        }
    }
    Ok(())
}

/// Conjunctive two-literal clauses (`p csat` files).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsatInstance {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CsatInstance {
    /// Only checks that literals are in range; occurrence bounds are the
    /// business of [`validate`].
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        check_literal_range(num_vars, &clauses)?;
        Ok(Self { num_vars, clauses })
    }
}

impl Formula for CsatInstance {
    const KIND: ClauseKind = ClauseKind::Conjunctive;

    fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn clauses(&self) -> &[Clause] {
        &self.clauses
    }
}

/// Disjunctive two-literal clauses (`p sat` files).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatInstance {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl SatInstance {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        check_literal_range(num_vars, &clauses)?;
        Ok(Self { num_vars, clauses })
    }
}

impl Formula for SatInstance {
    const KIND: ClauseKind = ClauseKind::Disjunctive;

    fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn clauses(&self) -> &[Clause] {
        &self.clauses
    }
}

/// Truth values for variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Self { values }
    }

    pub fn uniform(num_vars: usize, value: bool) -> Self {
        Self {
            values: vec![value; num_vars],
        }
    }

    /// Decodes a bit mask in which `x1` is the most significant of the
    /// `num_vars` low bits, so numeric order is lexicographic order.
    pub fn from_mask(num_vars: usize, mask: u64) -> Self {
        let values = (1..=num_vars)
            .map(|var| (mask >> (num_vars - var)) & 1 == 1)
            .collect();
        Self { values }
    }

    pub fn to_mask(&self) -> u64 {
        self.values
            .iter()
            .fold(0u64, |acc, &v| (acc << 1) | u64::from(v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Panics if `var` is outside `1..=len`.
    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn set(&mut self, var: usize, value: bool) {
        self.values[var - 1] = value;
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

fn check_length<F: Formula>(formula: &F, assignment: &Assignment) -> Result<(), FormulaError> {
    if assignment.len() != formula.num_vars() {
        return Err(FormulaError::AssignmentLength {
            expected: formula.num_vars(),
            got: assignment.len(),
        });
    }
    Ok(())
}

/// Number of clauses satisfied by `assignment`.
pub fn evaluate<F: Formula>(formula: &F, assignment: &Assignment) -> Result<usize, FormulaError> {
    check_length(formula, assignment)?;
    Ok(formula
        .clauses()
        .iter()
        .filter(|c| formula.clause_holds(c, assignment))
        .count())
}

/// Per-variable occurrence counts; index 0 holds `x1`.
pub fn occurrences<F: Formula>(formula: &F) -> Vec<usize> {
    let mut counts = vec![0; formula.num_vars()];
    for clause in formula.clauses() {
        for lit in clause.lits {
            counts[lit.var - 1] += 1;
        }
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoClauses,
    UnusedVariable {
        var: usize,
    },
    OccurrencesAbove {
        var: usize,
        count: usize,
        cap: usize,
    },
    OccurrencesNotExact {
        var: usize,
        count: usize,
        expected: usize,
    },
    ComplementaryLiterals {
        clause: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoClauses => write!(f, "instance has no clauses"),
            Violation::UnusedVariable { var } => write!(f, "variable x{var} never occurs"),
            Violation::OccurrencesAbove { var, count, cap } => {
                write!(f, "variable x{var} occurs {count} times (cap {cap})")
            }
            Violation::OccurrencesNotExact {
                var,
                count,
                expected,
            } => write!(
                f,
                "variable x{var} occurs {count} times, expected {expected}"
            ),
            Violation::ComplementaryLiterals { clause } => {
                write!(f, "clause {clause} has complementary literals")
            }
        }
    }
}

/// Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (idx, v) in self.violations.iter().enumerate() {
            if idx > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the occurrence rules of the instance kind: at most 12 and at
/// least 1 per variable with no complementary clause (conjunctive), or
/// exactly 3 per variable (disjunctive). Clause indices are 1-based.
pub fn validate<F: Formula>(formula: &F) -> ValidationReport {
    let mut violations = Vec::new();
    if formula.clauses().is_empty() {
        violations.push(Violation::NoClauses);
    }
    for (idx, &count) in occurrences(formula).iter().enumerate() {
        let var = idx + 1;
        match F::KIND {
            ClauseKind::Conjunctive => {
                if count == 0 {
                    violations.push(Violation::UnusedVariable { var });
                } else if count > MAX_CSAT_OCCURRENCES {
                    violations.push(Violation::OccurrencesAbove {
                        var,
                        count,
                        cap: MAX_CSAT_OCCURRENCES,
                    });
                }
            }
            ClauseKind::Disjunctive => {
                if count == 0 {
                    violations.push(Violation::UnusedVariable { var });
                } else if count != SAT_OCCURRENCES {
                    violations.push(Violation::OccurrencesNotExact {
                        var,
                        count,
                        expected: SAT_OCCURRENCES,
                    });
                }
            }
        }
    }
    if F::KIND == ClauseKind::Conjunctive {
        for (idx, clause) in formula.clauses().iter().enumerate() {
            if clause.is_complementary() {
                violations.push(Violation::ComplementaryLiterals { clause: idx + 1 });
            }
        }
    }
    ValidationReport { violations }
}

/// Strict mode: every variable must occur exactly `expected[var - 1]` times.
pub fn check_occurrence_profile<F: Formula>(formula: &F, expected: &[usize]) -> ValidationReport {
    let counts = occurrences(formula);
    let violations = counts
        .iter()
        .zip(expected)
        .enumerate()
        .filter(|(_, (count, want))| count != want)
        .map(
            |(idx, (&count, &expected))| Violation::OccurrencesNotExact {
                var: idx + 1,
                count,
                expected,
            },
        )
        .collect();
    ValidationReport { violations }
}

/// Maximum satisfied-clause count together with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: usize,
    /// Lexicographically smallest maximizer, `false < true`, `x1` first.
    pub witness: Assignment,
}

pub fn brute_force_opt<F: Formula>(formula: &F) -> Result<Optimum, FormulaError> {
    brute_force_opt_with_cap(formula, DEFAULT_BRUTE_FORCE_CAP)
}

/// Enumerates all `2^n` assignments in Gray-code order, updating only the
/// clauses touched by the flipped variable.
pub fn brute_force_opt_with_cap<F: Formula>(
    formula: &F,
    cap: usize,
) -> Result<Optimum, FormulaError> {
    let n = formula.num_vars();
    if n > cap.min(63) {
        return Err(FormulaError::TooManyVariables {
            num_vars: n,
            cap: cap.min(63),
        });
    }
    let bit_of = |var: usize| (n - var) as u32;
    let encoded: Vec<[(u32, bool); 2]> = formula
        .clauses()
        .iter()
        .map(|c| c.lits.map(|l| (bit_of(l.var), l.positive)))
        .collect();
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (idx, clause) in encoded.iter().enumerate() {
        for &(bit, _) in clause {
            let list = &mut touching[bit as usize];
            if list.last() != Some(&idx) {
                list.push(idx);
            }
        }
    }

    let kind = F::KIND;
    let mut mask = 0u64;
    let mut status: Vec<bool> = encoded.iter().map(|&c| kind.holds_bits(c, mask)).collect();
    let mut count = status.iter().filter(|&&s| s).count();
    let (mut best, mut best_mask) = (count, mask);

    for step in 1..(1u64 << n) {
        let bit = step.trailing_zeros();
        mask ^= 1 << bit;
        for &idx in &touching[bit as usize] {
            let now = kind.holds_bits(encoded[idx], mask);
            if now != status[idx] {
                status[idx] = now;
                if now {
                    count += 1;
                } else {
                    count -= 1;
                }
            }
        }
        if count > best || (count == best && mask < best_mask) {
            best = count;
            best_mask = mask;
        }
    }

    Ok(Optimum {
        value: best,
        witness: Assignment::from_mask(n, best_mask),
    })
}

/// Four-variable, four-clause sample instance used by tests and the CLI:
/// `x1∧x3`, `¬x3∧¬x4`, `x2∧¬x3`, `¬x1∧x4` over four variables.
pub fn sample_csat() -> CsatInstance {
    let c = |a: i64, b: i64| {
        Clause::new(
            Literal::from_dimacs(a).unwrap(),
            Literal::from_dimacs(b).unwrap(),
        )
    };
    CsatInstance::new(4, vec![c(1, 3), c(-3, -4), c(2, -3), c(-1, 4)])
        .expect("sample literals are in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(v: i64) -> Literal {
        Literal::from_dimacs(v).unwrap()
    }

    fn csat(n: usize, clauses: &[(i64, i64)]) -> CsatInstance {
        CsatInstance::new(
            n,
            clauses
                .iter()
                .map(|&(a, b)| Clause::new(lit(a), lit(b)))
                .collect(),
        )
        .unwrap()
    }

    fn sat(n: usize, clauses: &[(i64, i64)]) -> SatInstance {
        SatInstance::new(
            n,
            clauses
                .iter()
                .map(|&(a, b)| Clause::new(lit(a), lit(b)))
                .collect(),
        )
        .unwrap()
    }

    fn bools(s: &str) -> Assignment {
        Assignment::new(s.chars().map(|c| c == 'T').collect())
    }

    #[test]
    fn evaluate_sample_instance() {
        assert_eq!(evaluate(&sample_csat(), &bools("FTFF")).unwrap(), 2);
    }

    #[test]
    fn evaluate_duplicate_literal_conjunction() {
        let inst = csat(1, &[(1, 1)]);
        assert_eq!(evaluate(&inst, &bools("T")).unwrap(), 1);
        assert_eq!(evaluate(&inst, &bools("F")).unwrap(), 0);
    }

    #[test]
    fn evaluate_disjunction_with_both_false() {
        let inst = sat(2, &[(1, 2)]);
        assert_eq!(evaluate(&inst, &bools("FF")).unwrap(), 0);
        assert_eq!(evaluate(&inst, &bools("FT")).unwrap(), 1);
    }

    #[test]
    fn evaluate_rejects_length_mismatch() {
        let err = evaluate(&sample_csat(), &bools("TT")).unwrap_err();
        assert_eq!(
            err,
            FormulaError::AssignmentLength {
                expected: 4,
                got: 2
            }
        );
    }

    #[test]
    fn out_of_range_literal_is_rejected() {
        let err = CsatInstance::new(2, vec![Clause::new(lit(1), lit(-3))]).unwrap_err();
        assert!(matches!(
            err,
            FormulaError::VariableOutOfRange { num_vars: 2, .. }
        ));
    }

    #[test]
    fn sample_instance_is_valid() {
        let report = validate(&sample_csat());
        assert!(report.is_valid(), "{report}");
        assert_eq!(occurrences(&sample_csat()), vec![2, 1, 3, 2]);
    }

    #[test]
    fn complementary_clause_is_reported() {
        let report = validate(&csat(2, &[(2, -2), (1, 1)]));
        assert_eq!(
            report.violations(),
            &[Violation::ComplementaryLiterals { clause: 1 }]
        );
    }

    #[test]
    fn sat_occurrence_must_be_exactly_three() {
        let inst = sat(2, &[(1, 2), (1, 2), (-1, -2), (1, -2)]);
        let report = validate(&inst);
        assert!(report
            .violations()
            .contains(&Violation::OccurrencesNotExact {
                var: 1,
                count: 4,
                expected: 3
            }));
    }

    #[test]
    fn unused_and_overused_variables_are_reported() {
        let mut clauses = vec![(1, 1); 7];
        clauses.push((1, 2));
        let report = validate(&csat(3, &clauses));
        assert!(report.violations().contains(&Violation::OccurrencesAbove {
            var: 1,
            count: 15,
            cap: 12
        }));
        assert!(report
            .violations()
            .contains(&Violation::UnusedVariable { var: 3 }));
    }

    #[test]
    fn empty_clause_list_is_reported() {
        let report = validate(&csat(0, &[]));
        assert_eq!(report.violations(), &[Violation::NoClauses]);
    }

    #[test]
    fn strict_profile_mismatch() {
        let inst = csat(2, &[(1, 2), (1, -2)]);
        assert!(check_occurrence_profile(&inst, &[2, 2]).is_valid());
        assert!(!check_occurrence_profile(&inst, &[2, 3]).is_valid());
    }

    #[test]
    fn brute_force_sample_optimum() {
        let opt = brute_force_opt(&sample_csat()).unwrap();
        assert_eq!(opt.value, 2);
        assert_eq!(evaluate(&sample_csat(), &opt.witness).unwrap(), 2);
    }

    #[test]
    fn brute_force_single_clause_witness() {
        let opt = brute_force_opt(&csat(2, &[(1, 2)])).unwrap();
        assert_eq!(opt.value, 1);
        assert_eq!(opt.witness, bools("TT"));
    }

    #[test]
    fn brute_force_gadget_block() {
        // x1∨x2 expanded into its six-clause block with dummy x3.
        let inst = csat(3, &[(1, 3), (1, -3), (2, 3), (2, -3), (1, -2), (-1, 2)]);
        assert_eq!(brute_force_opt(&inst).unwrap().value, 2);
    }

    #[test]
    fn brute_force_respects_cap() {
        let inst = csat(5, &[(1, 2), (3, 4), (5, 5)]);
        let err = brute_force_opt_with_cap(&inst, 4).unwrap_err();
        assert_eq!(
            err,
            FormulaError::TooManyVariables {
                num_vars: 5,
                cap: 4
            }
        );
    }

    #[test]
    fn mask_round_trip_puts_x1_first() {
        let a = Assignment::from_mask(3, 0b100);
        assert_eq!(a, bools("TFF"));
        assert_eq!(a.to_mask(), 0b100);
    }
}
