//! The 1960-style decision procedure: unit rule, pure-literal rule, and the
//! atomic-formula elimination rule in place of splitting.
//!
//! Eliminating a variable replaces every clause mentioning it with all
//! non-tautological resolvents on it. Clause count may grow quadratically per
//! elimination; the blowup is observable through [`DpRun::peak_clauses`], not
//! bounded.

use std::fmt;

use crate::clause::{
    pure_literal_rule, unit_rule, Assignment, Clause, ClauseSet, Lit, Var, Verdict,
};

/// One recorded elimination: the variable and the clause groups mentioning it
/// at elimination time (`a_side` holds the variable affirmed, `b_side`
/// negated). Replayed in reverse to rebuild a model.
#[derive(Clone, Debug)]
pub struct ElimStep {
    pub var: Var,
    pub a_side: Vec<Clause>,
    pub b_side: Vec<Clause>,
}

/// Ordered log of eliminations performed by [`dp_run`].
#[derive(Clone, Debug, Default)]
pub struct EliminationTrace {
    pub steps: Vec<ElimStep>,
}

/// Outcome of [`dp_run`] with the observability extras.
#[derive(Clone, Debug)]
pub struct DpRun {
    pub verdict: Verdict,
    pub trace: EliminationTrace,
    /// Largest clause count the working set reached at any point.
    pub peak_clauses: usize,
}

/// Error from [`eliminate_atom`]: the variable id was zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvalidVariable;

impl fmt::Display for InvalidVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "variable id must be positive")
    }
}

impl std::error::Error for InvalidVariable {}

/// Eliminates variable `p` from `s`: clauses free of `p` are kept, and every
/// pair (clause with `p`, clause with `-p`) contributes the resolvent formed
/// by joining the two remainders. Tautological resolvents are dropped. When
/// `p` occurs in one polarity only, its clauses simply disappear; when it
/// occurs nowhere, `s` is returned unchanged.
pub fn eliminate_atom(s: &ClauseSet, p: Var) -> Result<ClauseSet, InvalidVariable> {
    if p == 0 {
        return Err(InvalidVariable);
    }
    let pos = Lit::from_assignment(p, true);
    let neg = pos.negated();

    let mut a_side = Vec::new();
    let mut b_side = Vec::new();
    let mut rest = Vec::new();
    for clause in s.iter() {
        if clause.contains(pos) {
            a_side.push(clause);
        } else if clause.contains(neg) {
            b_side.push(clause);
        } else {
            rest.push(clause.clone());
        }
    }

    let mut result = rest;
    for a in &a_side {
        for b in &b_side {
            let resolvent: Clause = a
                .iter()
                .filter(|&l| l != pos)
                .chain(b.iter().filter(|&l| l != neg))
                .collect();
            result.push(resolvent);
        }
    }
    // ClauseSet construction drops the tautological resolvents.
    Ok(ClauseSet::new(result))
}

/// Decides satisfiability by repeated elimination.
///
/// Each round first runs the unit and pure-literal rules to exhaustion, then
/// reports on an empty set (satisfiable) or an empty clause (unsatisfiable),
/// and otherwise eliminates the variable with the fewest occurrences (ties to
/// the smallest id). On the satisfiable outcome a model is rebuilt by
/// replaying the eliminations in reverse.
pub fn dp_solve(s: &ClauseSet) -> Verdict {
    dp_run(s).verdict
}

/// [`dp_solve`] plus the elimination trace and peak clause count.
pub fn dp_run(s0: &ClauseSet) -> DpRun {
    let mut s = s0.clone();
    let mut choices: Vec<Lit> = Vec::new();
    let mut trace = EliminationTrace::default();
    let mut peak = s.len();

    let verdict = loop {
        loop {
            if let Some((lit, next)) = unit_rule(&s) {
                choices.push(lit);
                s = next;
            } else if let Some((lit, next)) = pure_literal_rule(&s) {
                choices.push(lit);
                s = next;
            } else {
                break;
            }
        }
        if s.is_empty() {
            break Verdict::Sat(rebuild_model(s0, &choices, &trace));
        }
        if s.has_empty_clause() {
            break Verdict::Unsat;
        }

        let p = min_occurrence_var(&s);
        let pos = Lit::from_assignment(p, true);
        let neg = pos.negated();
        trace.steps.push(ElimStep {
            var: p,
            a_side: s.iter().filter(|c| c.contains(pos)).cloned().collect(),
            b_side: s.iter().filter(|c| c.contains(neg)).cloned().collect(),
        });
        s = eliminate_atom(&s, p).expect("variable ids from the set are positive");
        peak = peak.max(s.len());
    };

    DpRun {
        verdict,
        trace,
        peak_clauses: peak,
    }
}

/// The variable occurring in the fewest clauses (either polarity), ties to
/// the smallest id. Delays the resolvent blowup a little and keeps runs
/// deterministic.
fn min_occurrence_var(s: &ClauseSet) -> Var {
    let mut counts: std::collections::BTreeMap<Var, usize> = std::collections::BTreeMap::new();
    for clause in s.iter() {
        for var in clause.vars() {
            *counts.entry(var).or_insert(0) += 1;
        }
    }
    counts
        .into_iter()
        .min_by_key(|&(var, count)| (count, var))
        .map(|(var, _)| var)
        .expect("set is nonempty and free of the empty clause")
}

/// Model reconstruction. Rule choices are taken as made; every input variable
/// neither chosen nor eliminated defaults to false; eliminated variables are
/// then bound in reverse elimination order, each to a value satisfying all
/// clauses recorded at its elimination step.
fn rebuild_model(s0: &ClauseSet, choices: &[Lit], trace: &EliminationTrace) -> Assignment {
    let mut model = Assignment::new();
    for &lit in choices {
        model.assert_literal(lit);
    }
    let eliminated: std::collections::BTreeSet<Var> =
        trace.steps.iter().map(|step| step.var).collect();
    for var in s0.vars() {
        if model.value(var).is_none() && !eliminated.contains(&var) {
            model.bind(var, false);
        }
    }
    for step in trace.steps.iter().rev() {
        let mut ok = false;
        for candidate in [false, true] {
            model.bind(step.var, candidate);
            if step
                .a_side
                .iter()
                .chain(step.b_side.iter())
                .all(|c| clause_true(c, &model))
            {
                ok = true;
                break;
            }
        }
        debug_assert!(ok, "some value for {} must satisfy its groups", step.var);
    }
    model
}

fn clause_true(clause: &Clause, model: &Assignment) -> bool {
    clause.iter().any(|l| {
        debug_assert!(model.value(l.var()).is_some());
        model.literal_value(l) == Some(true)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clause::{brute_force_sat, evaluate};

    fn set(clauses: &[&[i32]]) -> ClauseSet {
        ClauseSet::from_ints(clauses)
    }

    #[test]
    fn eliminate_resolves_and_keeps_the_rest() {
        let s = set(&[&[1, 2], &[-1, 3], &[4]]);
        assert_eq!(eliminate_atom(&s, 1), Ok(set(&[&[2, 3], &[4]])));
    }

    #[test]
    fn eliminate_drops_tautological_resolvents() {
        let s = set(&[&[1, 2], &[-1, -2]]);
        assert_eq!(eliminate_atom(&s, 1), Ok(set(&[])));
        // sanity: the input itself was satisfiable, and so is the result
        assert!(brute_force_sat(&s).unwrap().is_sat());
    }

    #[test]
    fn eliminate_one_sided_variable_drops_its_clauses() {
        let s = set(&[&[1, 2], &[3]]);
        assert_eq!(eliminate_atom(&s, 1), Ok(set(&[&[3]])));
    }

    #[test]
    fn eliminate_absent_variable_is_identity() {
        let s = set(&[&[1, 2], &[3]]);
        assert_eq!(eliminate_atom(&s, 7), Ok(s));
    }

    #[test]
    fn eliminate_rejects_the_zero_variable() {
        assert_eq!(eliminate_atom(&set(&[&[1]]), 0), Err(InvalidVariable));
    }

    #[test]
    fn eliminate_never_mentions_the_variable_afterwards() {
        let s = set(&[&[1, 2], &[-1, 3], &[1, -3], &[-1, -2], &[2, 3]]);
        let result = eliminate_atom(&s, 1).unwrap();
        assert!(!result.vars().contains(&1));
    }

    #[test]
    fn dp_solve_examples() {
        assert_eq!(dp_solve(&set(&[])), Verdict::Sat(Assignment::new()));
        assert_eq!(dp_solve(&set(&[&[]])), Verdict::Unsat);
        // all four assignments over two variables falsify some clause
        assert_eq!(
            dp_solve(&set(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]])),
            Verdict::Unsat
        );
    }

    #[test]
    fn elimination_preserves_satisfiability_exhaustively() {
        // all clause sets of up to 3 clauses of width <= 2 over {1,2,3},
        // eliminating each variable in turn
        let lits: Vec<i32> = vec![1, -1, 2, -2, 3, -3];
        let mut clauses: Vec<Vec<i32>> = Vec::new();
        for &a in &lits {
            clauses.push(vec![a]);
            for &b in &lits {
                if b.abs() > a.abs() {
                    clauses.push(vec![a, b]);
                }
            }
        }
        for i in 0..clauses.len() {
            for j in i..clauses.len() {
                for k in j..clauses.len() {
                    let s = set(&[&clauses[i], &clauses[j], &clauses[k]]);
                    let before = brute_force_sat(&s).unwrap().is_sat();
                    for p in 1..=3 {
                        let reduced = eliminate_atom(&s, p).unwrap();
                        let after = brute_force_sat(&reduced).unwrap().is_sat();
                        assert_eq!(before, after, "eliminating {p} changed {s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn dp_models_satisfy_the_input() {
        // exercises unit, pure, and elimination paths together
        let cases: Vec<ClauseSet> = vec![
            set(&[&[1, 2], &[-1, 3], &[-2, -3], &[2, 3]]),
            set(&[&[1, 2, 3], &[-1, -2], &[-2, -3], &[-1, -3]]),
            set(&[&[1], &[-1, 2], &[-2, 3, 4], &[-4, 5]]),
            set(&[&[1, -2], &[2, -3], &[3, -1]]),
        ];
        for s in cases {
            match dp_solve(&s) {
                Verdict::Sat(model) => {
                    assert_eq!(evaluate(&s, &model), Ok(true), "bad model for {s:?}");
                }
                verdict => panic!("expected SAT for {s:?}, got {verdict:?}"),
            }
        }
    }

    #[test]
    fn dp_run_reports_peak_growth() {
        // elimination on a dense set grows the working set beyond the input
        let s = set(&[
            &[1, 2, 3],
            &[1, -2, 4],
            &[-1, 3, -4],
            &[-1, -3, 2],
            &[2, -3, -4],
            &[-2, 3, 4],
            &[1, -3, -2],
            &[-1, 4, 2],
        ]);
        let run = dp_run(&s);
        assert!(run.peak_clauses >= s.len());
        assert_eq!(run.verdict.is_sat(), brute_force_sat(&s).unwrap().is_sat());
    }
}
