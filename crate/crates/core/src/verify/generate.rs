//! Seeded random instances under the occurrence constraints. The same seed
//! always yields the same instance.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formulas::{
    Clause, CsatInstance, Literal, SatInstance, MAX_CSAT_OCCURRENCES, SAT_OCCURRENCES,
};
use crate::intervals::IntersectionGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("exactly-3-occurrence instances need an even, nonzero variable count (got {0})")]
    OddVariableCount(usize),
    #[error("{clauses} clauses cannot cover {vars} variables")]
    CannotCover { vars: usize, clauses: usize },
    #[error("{clauses} clauses need more than {cap} occurrences for some of {vars} variables")]
    OccurrenceCap {
        vars: usize,
        clauses: usize,
        cap: usize,
    },
    #[error("need at least one variable and one clause")]
    Empty,
    #[error("no valid pairing found after {0} attempts")]
    GaveUp(usize),
}

const PAIRING_ATTEMPTS: usize = 10_000;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Disjunctive instance with `3n / 2` clauses in which every variable occurs
/// exactly three times and no clause mentions one variable twice.
pub fn gen_sat(num_vars: usize, seed: u64) -> Result<SatInstance, GenError> {
    if num_vars == 0 || !num_vars.is_multiple_of(2) {
        return Err(GenError::OddVariableCount(num_vars));
    }
    let mut rng = rng(seed);
    let mut slots: Vec<usize> = (1..=num_vars)
        .flat_map(|v| std::iter::repeat_n(v, SAT_OCCURRENCES))
        .collect();
    for _ in 0..PAIRING_ATTEMPTS {
        slots.shuffle(&mut rng);
        if slots.chunks(2).any(|p| p[0] == p[1]) {
            continue;
        }
        let clauses = slots
            .chunks(2)
            .map(|p| Clause::new(Literal::new(p[0], rng.gen()), Literal::new(p[1], rng.gen())))
            .collect();
        return Ok(SatInstance::new(num_vars, clauses).expect("variables in range"));
    }
    Err(GenError::GaveUp(PAIRING_ATTEMPTS))
}

/// Conjunctive instance where every variable occurs between 1 and 12 times.
/// Duplicate-literal clauses may appear; complementary ones are resampled.
pub fn gen_csat(num_vars: usize, num_clauses: usize, seed: u64) -> Result<CsatInstance, GenError> {
    if num_vars == 0 || num_clauses == 0 {
        return Err(GenError::Empty);
    }
    if 2 * num_clauses < num_vars {
        return Err(GenError::CannotCover {
            vars: num_vars,
            clauses: num_clauses,
        });
    }
    if 2 * num_clauses > MAX_CSAT_OCCURRENCES * num_vars {
        return Err(GenError::OccurrenceCap {
            vars: num_vars,
            clauses: num_clauses,
            cap: MAX_CSAT_OCCURRENCES,
        });
    }
    let mut rng = rng(seed);
    let mut counts = vec![1usize; num_vars];
    let mut slots: Vec<usize> = (1..=num_vars).collect();
    while slots.len() < 2 * num_clauses {
        let open: Vec<usize> = (1..=num_vars)
            .filter(|&v| counts[v - 1] < MAX_CSAT_OCCURRENCES)
            .collect();
        let var = *open.choose(&mut rng).expect("capacity checked above");
        counts[var - 1] += 1;
        slots.push(var);
    }
    slots.shuffle(&mut rng);
    let clauses = slots
        .chunks(2)
        .map(|p| {
            let first = Literal::new(p[0], rng.gen());
            let mut clause = Clause::new(first, Literal::new(p[1], rng.gen()));
            while clause.is_complementary() {
                clause = Clause::new(first, Literal::new(p[1], rng.gen()));
            }
            clause
        })
        .collect();
    Ok(CsatInstance::new(num_vars, clauses).expect("variables in range"))
}

/// Random `(n, m)` with `1 <= n <= max_vars` and `ceil(n/2) <= m <= max_clauses`.
pub fn random_csat_shape(max_vars: usize, max_clauses: usize, seed: u64) -> (usize, usize) {
    let mut rng = rng(seed ^ 0x5eed_5eed);
    let n = rng.gen_range(1..=max_vars.min(2 * max_clauses));
    let m = rng.gen_range(n.div_ceil(2)..=max_clauses.min(MAX_CSAT_OCCURRENCES * n / 2));
    (n, m)
}

/// Erdős–Rényi graph with edge probability `density` and weights drawn
/// uniformly from `1..=max_weight`.
pub fn random_weighted_graph(
    vertices: usize,
    density: f64,
    max_weight: u64,
    seed: u64,
) -> IntersectionGraph<usize> {
    let mut rng = rng(seed);
    let weights = (0..vertices)
        .map(|_| rng.gen_range(1..=max_weight.max(1)))
        .collect();
    let mut graph = IntersectionGraph::new((0..vertices).collect(), weights);
    for u in 0..vertices {
        for v in u + 1..vertices {
            if rng.gen_bool(density) {
                graph.add_edge(u, v);
            }
        }
    }
    graph
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{occurrences, validate, Formula};

    #[test]
    fn sat_counts() {
        let s = gen_sat(4, 1).unwrap();
        assert_eq!(s.num_clauses(), 6);
        assert_eq!(occurrences(&s), vec![3; 4]);
        assert!(validate(&s).is_valid());
    }

    #[test]
    fn sat_rejects_odd() {
        assert_eq!(gen_sat(3, 0).unwrap_err(), GenError::OddVariableCount(3));
        assert!(gen_sat(0, 0).is_err());
    }

    #[test]
    fn csat_is_valid_and_reproducible() {
        let a = gen_csat(4, 4, 9).unwrap();
        assert!(validate(&a).is_valid());
        assert_eq!(a, gen_csat(4, 4, 9).unwrap());
    }

    #[test]
    fn csat_rejects_impossible_shapes() {
        assert_eq!(
            gen_csat(5, 2, 0).unwrap_err(),
            GenError::CannotCover {
                vars: 5,
                clauses: 2
            }
        );
        assert!(matches!(
            gen_csat(1, 7, 0),
            Err(GenError::OccurrenceCap { .. })
        ));
        assert!(gen_csat(1, 6, 0).is_ok());
    }

    #[test]
    fn shapes_are_feasible() {
        for seed in 0..200 {
            let (n, m) = random_csat_shape(6, 12, seed);
            assert!(gen_csat(n, m, seed).is_ok(), "n={n} m={m}");
        }
    }
}
