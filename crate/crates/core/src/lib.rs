//! Satisfiability and refutation engines in their original 1960s shape, plus
//! a Diophantine machine simulator.
//!
//! - [`clause`]: clause sets as sets of nonzero integers, the simplification
//!   primitive, the unit and pure-literal rules, and an exhaustive
//!   truth-table oracle.
//! - [`dp`]: the variable-elimination decision procedure.
//! - [`dpll`]: the backtracking decision procedure with choice points.
//! - [`fol`] / [`clausify`] / [`herbrand`]: first-order clauses, unification,
//!   clausal-form conversion, and refutation by ground saturation over the
//!   universe of closed terms.
//! - [`dioph`]: exact integer expressions with exponentiation and bounded
//!   simulation of non-deterministic Diophantine machines.
//!
//! Every engine is deterministic: rule tie-breaks, branch heuristics, term
//! orderings, and search orders are all fixed, so identical inputs produce
//! identical verdicts, models, and traces.

pub mod clause;
pub mod clausify;
pub mod dioph;
pub mod dp;
pub mod dpll;
pub mod fol;
pub mod herbrand;

pub use clause::{
    brute_force_sat, brute_force_sat_with_cap, evaluate, pure_literal_rule, simplify, unit_rule,
    Assignment, Clause, ClauseSet, Lit, Var, Verdict,
};
pub use dp::{dp_run, dp_solve, eliminate_atom, DpRun, EliminationTrace};
pub use dpll::{choose_branch_literal, dpll_run, dpll_solve, DpllRun, DpllStats, TraceEvent};
pub use fol::{
    unify_atoms, unify_terms, Atom, FolClause, FolClauseSet, FolLiteral, Substitution, Term,
    UnifyError,
};
pub use clausify::{clausify, clausify_with, Formula, SkolemGen};
pub use herbrand::{
    ground_abstraction, herbrand_terms, linkedness_check, refute, refute_with_cap, AtomRegistry,
    RefuteOutcome, Refutation, Signature,
};
pub use dioph::{
    check_representation, davis_nf_search, eval_expr, nddm_enumerate, nddm_run, DavisOutcome,
    DioMachine, IntExpr, NddmOutcome, RepresentationReport, SearchBound,
};
