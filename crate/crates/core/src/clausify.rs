//! Formula trees and their conversion to clausal form: negation normal form,
//! standardizing variables apart, Skolemization, and distribution of
//! disjunction over conjunction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::fol::{Atom, FolClause, FolClauseSet, FolLiteral, Substitution, Term};

/// A first-order formula. Input syntax for clausification; sentences only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Formula {
    Pred(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn pred(name: &str, args: Vec<Term>) -> Formula {
        Formula::Pred(Atom::new(name, args))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn forall(var: &str, f: Formula) -> Formula {
        Formula::Forall(var.to_string(), Box::new(f))
    }

    pub fn exists(var: &str, f: Formula) -> Formula {
        Formula::Exists(var.to_string(), Box::new(f))
    }

    /// Variables occurring outside the scope of any quantifier binding them.
    pub fn free_variables(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Pred(atom) => {
                    let mut vars = BTreeSet::new();
                    atom.variables(&mut vars);
                    for v in vars {
                        if !bound.iter().any(|b| *b == v) {
                            out.insert(v);
                        }
                    }
                }
                Formula::Not(a) => walk(a, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::Forall(v, a) | Formula::Exists(v, a) => {
                    bound.push(v.clone());
                    walk(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

/// Error from [`clausify`]: the formula is not a sentence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeVariables(pub BTreeSet<String>);

impl fmt::Display for FreeVariables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "formula has free variables: {}",
            self.0.iter().cloned().collect::<Vec<_>>().join(", ")
        )
    }
}

impl std::error::Error for FreeVariables {}

/// Source of Skolem symbols `sk0, sk1, ...`. Share one generator across all
/// formulas of a problem so witnesses never collide.
#[derive(Clone, Debug, Default)]
pub struct SkolemGen {
    next: usize,
}

impl SkolemGen {
    pub fn new() -> SkolemGen {
        SkolemGen::default()
    }

    fn fresh(&mut self) -> String {
        let name = format!("sk{}", self.next);
        self.next += 1;
        name
    }
}

/// Converts a sentence to clauses, optionally negating it first (the usual
/// treatment of a conjecture). Each Skolem symbol is applied to the universal
/// variables governing the existential it replaces, in quantifier order.
pub fn clausify(formula: &Formula, negate: bool) -> Result<FolClauseSet, FreeVariables> {
    clausify_with(formula, negate, &mut SkolemGen::new())
}

/// [`clausify`] drawing Skolem names from a caller-supplied generator.
pub fn clausify_with(
    formula: &Formula,
    negate: bool,
    skolems: &mut SkolemGen,
) -> Result<FolClauseSet, FreeVariables> {
    let free = formula.free_variables();
    if !free.is_empty() {
        return Err(FreeVariables(free));
    }
    let formula = if negate {
        Formula::not(formula.clone())
    } else {
        formula.clone()
    };
    let nnf = to_nnf(&formula);
    let mut namer = VarNamer::default();
    let apart = standardize_apart(&nnf, &BTreeMap::new(), &mut namer);
    let matrix = skolemize(&apart, &mut Vec::new(), &Substitution::empty(), skolems);
    let mut clauses = Vec::new();
    collect_clauses(&distribute(&matrix), &mut clauses);
    Ok(freshen_per_clause(clauses))
}

/// Negation normal form over atoms, with implications rewritten away. `Not`
/// survives only directly on atoms.
enum Nnf {
    Lit(FolLiteral),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Forall(String, Box<Nnf>),
    Exists(String, Box<Nnf>),
}

fn to_nnf(f: &Formula) -> Nnf {
    match f {
        Formula::Pred(atom) => Nnf::Lit(FolLiteral::pos(atom.clone())),
        Formula::And(a, b) => Nnf::And(Box::new(to_nnf(a)), Box::new(to_nnf(b))),
        Formula::Or(a, b) => Nnf::Or(Box::new(to_nnf(a)), Box::new(to_nnf(b))),
        Formula::Imp(a, b) => Nnf::Or(
            Box::new(to_nnf(&Formula::not((**a).clone()))),
            Box::new(to_nnf(b)),
        ),
        Formula::Forall(v, a) => Nnf::Forall(v.clone(), Box::new(to_nnf(a))),
        Formula::Exists(v, a) => Nnf::Exists(v.clone(), Box::new(to_nnf(a))),
        Formula::Not(inner) => match &**inner {
            Formula::Pred(atom) => Nnf::Lit(FolLiteral::neg(atom.clone())),
            Formula::Not(a) => to_nnf(a),
            Formula::And(a, b) => Nnf::Or(
                Box::new(to_nnf(&Formula::not((**a).clone()))),
                Box::new(to_nnf(&Formula::not((**b).clone()))),
            ),
            Formula::Or(a, b) => Nnf::And(
                Box::new(to_nnf(&Formula::not((**a).clone()))),
                Box::new(to_nnf(&Formula::not((**b).clone()))),
            ),
            Formula::Imp(a, b) => Nnf::And(
                Box::new(to_nnf(a)),
                Box::new(to_nnf(&Formula::not((**b).clone()))),
            ),
            Formula::Forall(v, a) => Nnf::Exists(
                v.clone(),
                Box::new(to_nnf(&Formula::not((**a).clone()))),
            ),
            Formula::Exists(v, a) => Nnf::Forall(
                v.clone(),
                Box::new(to_nnf(&Formula::not((**a).clone()))),
            ),
        },
    }
}

/// Hands out variable names, keeping a source name on first use and suffixing
/// on reuse (`x`, `x1`, `x2`, ...).
#[derive(Default)]
struct VarNamer {
    used: BTreeSet<String>,
}

impl VarNamer {
    fn fresh(&mut self, base: &str) -> String {
        if self.used.insert(base.to_string()) {
            return base.to_string();
        }
        for i in 1.. {
            let candidate = format!("{base}{i}");
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
        }
        unreachable!()
    }
}

/// Renames bound variables so every quantifier binds a distinct name.
fn standardize_apart(f: &Nnf, renaming: &BTreeMap<String, String>, namer: &mut VarNamer) -> Nnf {
    match f {
        Nnf::Lit(lit) => {
            let subst = Substitution::from_pairs(
                renaming
                    .iter()
                    .map(|(from, to)| (from.clone(), Term::var(to))),
            );
            Nnf::Lit(subst.apply_literal(lit))
        }
        Nnf::And(a, b) => Nnf::And(
            Box::new(standardize_apart(a, renaming, namer)),
            Box::new(standardize_apart(b, renaming, namer)),
        ),
        Nnf::Or(a, b) => Nnf::Or(
            Box::new(standardize_apart(a, renaming, namer)),
            Box::new(standardize_apart(b, renaming, namer)),
        ),
        Nnf::Forall(v, a) => {
            let fresh = namer.fresh(v);
            let mut inner = renaming.clone();
            inner.insert(v.clone(), fresh.clone());
            Nnf::Forall(fresh, Box::new(standardize_apart(a, &inner, namer)))
        }
        Nnf::Exists(v, a) => {
            let fresh = namer.fresh(v);
            let mut inner = renaming.clone();
            inner.insert(v.clone(), fresh.clone());
            Nnf::Exists(fresh, Box::new(standardize_apart(a, &inner, namer)))
        }
    }
}

/// Quantifier-free matrix after Skolemization.
enum Matrix {
    Lit(FolLiteral),
    And(Box<Matrix>, Box<Matrix>),
    Or(Box<Matrix>, Box<Matrix>),
}

/// Replaces each existential variable with a fresh symbol applied to the
/// governing universal variables, and drops the universal quantifiers.
fn skolemize(
    f: &Nnf,
    universals: &mut Vec<String>,
    witness: &Substitution,
    skolems: &mut SkolemGen,
) -> Matrix {
    match f {
        Nnf::Lit(lit) => Matrix::Lit(witness.apply_literal(lit)),
        Nnf::And(a, b) => Matrix::And(
            Box::new(skolemize(a, universals, witness, skolems)),
            Box::new(skolemize(b, universals, witness, skolems)),
        ),
        Nnf::Or(a, b) => Matrix::Or(
            Box::new(skolemize(a, universals, witness, skolems)),
            Box::new(skolemize(b, universals, witness, skolems)),
        ),
        Nnf::Forall(v, a) => {
            universals.push(v.clone());
            let result = skolemize(a, universals, witness, skolems);
            universals.pop();
            result
        }
        Nnf::Exists(v, a) => {
            let term = Term::App(
                skolems.fresh(),
                universals.iter().map(|u| Term::var(u)).collect(),
            );
            let witness = witness.compose(&Substitution::singleton(v, term));
            skolemize(a, universals, &witness, skolems)
        }
    }
}

/// Distributes Or over And until the tree is a conjunction of disjunctions.
fn distribute(m: &Matrix) -> Matrix {
    match m {
        Matrix::Lit(lit) => Matrix::Lit(lit.clone()),
        Matrix::And(a, b) => Matrix::And(Box::new(distribute(a)), Box::new(distribute(b))),
        Matrix::Or(a, b) => {
            let a = distribute(a);
            let b = distribute(b);
            or_of(a, b)
        }
    }
}

fn or_of(a: Matrix, b: Matrix) -> Matrix {
    match (a, b) {
        (Matrix::And(a1, a2), b) => {
            let b2 = clone_matrix(&b);
            Matrix::And(Box::new(or_of(*a1, b)), Box::new(or_of(*a2, b2)))
        }
        (a, Matrix::And(b1, b2)) => {
            let a2 = clone_matrix(&a);
            Matrix::And(Box::new(or_of(a, *b1)), Box::new(or_of(a2, *b2)))
        }
        (a, b) => Matrix::Or(Box::new(a), Box::new(b)),
    }
}

fn clone_matrix(m: &Matrix) -> Matrix {
    match m {
        Matrix::Lit(l) => Matrix::Lit(l.clone()),
        Matrix::And(a, b) => Matrix::And(Box::new(clone_matrix(a)), Box::new(clone_matrix(b))),
        Matrix::Or(a, b) => Matrix::Or(Box::new(clone_matrix(a)), Box::new(clone_matrix(b))),
    }
}

fn collect_clauses(m: &Matrix, out: &mut Vec<FolClause>) {
    match m {
        Matrix::And(a, b) => {
            collect_clauses(a, out);
            collect_clauses(b, out);
        }
        _ => {
            let mut lits = Vec::new();
            collect_literals(m, &mut lits);
            out.push(FolClause::new(lits));
        }
    }
}

fn collect_literals(m: &Matrix, out: &mut Vec<FolLiteral>) {
    match m {
        Matrix::Lit(l) => out.push(l.clone()),
        Matrix::Or(a, b) => {
            collect_literals(a, out);
            collect_literals(b, out);
        }
        Matrix::And(..) => unreachable!("distribution left no conjunction under a disjunction"),
    }
}

/// Renames each clause's variables so the clauses are pairwise variable
/// disjoint, keeping a clause's source names when they are still free.
fn freshen_per_clause(clauses: Vec<FolClause>) -> FolClauseSet {
    let mut namer = VarNamer::default();
    let mut result = Vec::new();
    for clause in clauses {
        let renaming = Substitution::from_pairs(
            clause
                .variables()
                .into_iter()
                .map(|v| {
                    let fresh = namer.fresh(&v);
                    (v, Term::Var(fresh))
                })
                .collect::<Vec<_>>(),
        );
        result.push(renaming.apply_clause(&clause));
    }
    FolClauseSet::new(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::FolLiteral;

    fn v(name: &str) -> Term {
        Term::var(name)
    }

    fn c(name: &str) -> Term {
        Term::constant(name)
    }

    fn clause(lits: Vec<FolLiteral>) -> FolClause {
        FolClause::new(lits)
    }

    #[test]
    fn implication_under_a_universal() {
        let formula = Formula::forall(
            "x",
            Formula::imp(
                Formula::pred("P", vec![v("x")]),
                Formula::pred("Q", vec![v("x")]),
            ),
        );
        let clauses = clausify(&formula, false).unwrap();
        let expected = FolClauseSet::new([clause(vec![
            FolLiteral::neg(Atom::new("P", vec![v("x")])),
            FolLiteral::pos(Atom::new("Q", vec![v("x")])),
        ])]);
        assert_eq!(clauses, expected);
    }

    #[test]
    fn bare_existential_becomes_a_skolem_constant() {
        let formula = Formula::exists("x", Formula::pred("P", vec![v("x")]));
        let clauses = clausify(&formula, false).unwrap();
        let expected =
            FolClauseSet::new([clause(vec![FolLiteral::pos(Atom::new("P", vec![c("sk0")]))])]);
        assert_eq!(clauses, expected);
    }

    #[test]
    fn existential_under_a_universal_becomes_a_skolem_function() {
        let formula = Formula::forall(
            "x",
            Formula::exists("y", Formula::pred("R", vec![v("x"), v("y")])),
        );
        let clauses = clausify(&formula, false).unwrap();
        let expected = FolClauseSet::new([clause(vec![FolLiteral::pos(Atom::new(
            "R",
            vec![v("x"), Term::app("sk0", vec![v("x")])],
        ))])]);
        assert_eq!(clauses, expected);
    }

    #[test]
    fn negating_swaps_quantifiers() {
        // not(forall x P(x)) becomes exists x not P(x), i.e. {~P(sk0)}
        let formula = Formula::forall("x", Formula::pred("P", vec![v("x")]));
        let clauses = clausify(&formula, true).unwrap();
        let expected =
            FolClauseSet::new([clause(vec![FolLiteral::neg(Atom::new("P", vec![c("sk0")]))])]);
        assert_eq!(clauses, expected);
    }

    #[test]
    fn distribution_splits_conjunctions_and_keeps_clauses_variable_disjoint() {
        // forall x (P(x) -> (Q(x) and R(x)))
        let formula = Formula::forall(
            "x",
            Formula::imp(
                Formula::pred("P", vec![v("x")]),
                Formula::and(
                    Formula::pred("Q", vec![v("x")]),
                    Formula::pred("R", vec![v("x")]),
                ),
            ),
        );
        let clauses = clausify(&formula, false).unwrap();
        assert_eq!(clauses.len(), 2);
        let mut seen = std::collections::BTreeSet::new();
        for cl in clauses.iter() {
            for var in cl.variables() {
                assert!(seen.insert(var), "variable shared between clauses: {clauses:?}");
            }
        }
    }

    #[test]
    fn free_variables_are_rejected() {
        let formula = Formula::pred("P", vec![v("x")]);
        let err = clausify(&formula, false).unwrap_err();
        assert!(err.0.contains("x"));
    }

    #[test]
    fn shared_generator_keeps_skolems_distinct_across_formulas() {
        let mut gen = SkolemGen::new();
        let first = clausify_with(
            &Formula::exists("x", Formula::pred("P", vec![v("x")])),
            false,
            &mut gen,
        )
        .unwrap();
        let second = clausify_with(
            &Formula::exists("x", Formula::pred("Q", vec![v("x")])),
            false,
            &mut gen,
        )
        .unwrap();
        let first_expected =
            FolClauseSet::new([clause(vec![FolLiteral::pos(Atom::new("P", vec![c("sk0")]))])]);
        let second_expected =
            FolClauseSet::new([clause(vec![FolLiteral::pos(Atom::new("Q", vec![c("sk1")]))])]);
        assert_eq!(first, first_expected);
        assert_eq!(second, second_expected);
    }

    #[test]
    fn negated_conjunction_of_quantifiers() {
        // not(exists y forall x R(x,y)): the inner universal flips to an
        // existential and is Skolemized as a function of y
        let formula = Formula::exists(
            "y",
            Formula::forall("x", Formula::pred("R", vec![v("x"), v("y")])),
        );
        let clauses = clausify(&formula, true).unwrap();
        let expected = FolClauseSet::new([clause(vec![FolLiteral::neg(Atom::new(
            "R",
            vec![Term::app("sk0", vec![v("y")]), v("y")],
        ))])]);
        assert_eq!(clauses, expected);
    }
}
