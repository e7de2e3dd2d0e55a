//! Refutation by ground saturation: enumerate the universe of closed terms
//! level by level, instantiate every clause in all ways, and hand the ground
//! abstraction to the propositional solver. A fresh constant is injected when
//! the problem supplies none.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::clause::{Clause, ClauseSet, Lit};
use crate::dpll::dpll_solve;
use crate::fol::{Atom, FolClauseSet, Substitution, Term};

/// Constants and function symbols (with arities) of a problem.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub constants: BTreeSet<String>,
    pub functions: BTreeMap<String, usize>,
}

impl Signature {
    /// Collects the term symbols occurring in a clause set.
    pub fn of(clauses: &FolClauseSet) -> Signature {
        let mut sig = Signature::default();
        for clause in clauses.iter() {
            for lit in &clause.literals {
                for term in &lit.atom.args {
                    sig.add_term(term);
                }
            }
        }
        sig
    }

    fn add_term(&mut self, term: &Term) {
        match term {
            Term::Var(_) => {}
            Term::App(name, args) => {
                if args.is_empty() {
                    self.constants.insert(name.clone());
                } else {
                    self.functions.insert(name.clone(), args.len());
                    for arg in args {
                        self.add_term(arg);
                    }
                }
            }
        }
    }

    /// The constant injected when the signature has none: the first of
    /// `c0, c1, ...` that collides with no existing symbol.
    pub fn injected_constant(&self) -> String {
        (0..)
            .map(|i| format!("c{i}"))
            .find(|name| !self.functions.contains_key(name))
            .expect("some candidate name is free")
    }
}

/// All closed terms of nesting depth at most `level` over the signature,
/// sorted by depth then lexicographically. Level 0 is the constants (with a
/// fresh one injected if there are none); each further level closes once
/// under the function symbols.
pub fn herbrand_terms(sig: &Signature, level: usize) -> Vec<Term> {
    let mut terms: BTreeSet<Term> = if sig.constants.is_empty() {
        std::iter::once(Term::constant(&sig.injected_constant())).collect()
    } else {
        sig.constants.iter().map(|c| Term::constant(c)).collect()
    };
    for _ in 0..level {
        let snapshot: Vec<Term> = terms.iter().cloned().collect();
        for (name, &arity) in &sig.functions {
            for args in tuples(&snapshot, arity) {
                terms.insert(Term::App(name.clone(), args));
            }
        }
    }
    terms.into_iter().collect()
}

/// All `arity`-tuples over `items`, in lexicographic order.
fn tuples(items: &[Term], arity: usize) -> Vec<Vec<Term>> {
    let mut out: Vec<Vec<Term>> = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                items.iter().map(move |t| {
                    let mut next = prefix.clone();
                    next.push(t.clone());
                    next
                })
            })
            .collect();
    }
    out
}

/// Invertible numbering of ground atoms. Ids are assigned in first-seen
/// order, starting at 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomRegistry {
    by_id: Vec<Atom>,
    ids: BTreeMap<Atom, i32>,
}

impl AtomRegistry {
    pub fn id_of(&self, atom: &Atom) -> Option<i32> {
        self.ids.get(atom).copied()
    }

    pub fn atom_of(&self, id: i32) -> Option<&Atom> {
        if id <= 0 {
            return None;
        }
        self.by_id.get(id as usize - 1)
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    fn intern(&mut self, atom: &Atom) -> i32 {
        if let Some(&id) = self.ids.get(atom) {
            return id;
        }
        let id = self.by_id.len() as i32 + 1;
        self.by_id.push(atom.clone());
        self.ids.insert(atom.clone(), id);
        id
    }
}

/// Error from [`ground_abstraction`]: a clause still contains a variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NonGroundClause(pub String);

impl fmt::Display for NonGroundClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause is not ground: variable {}", self.0)
    }
}

impl std::error::Error for NonGroundClause {}

/// Maps a ground clause set onto propositional clauses, numbering each
/// distinct atom. Signs carry over; the registry inverts the numbering.
pub fn ground_abstraction(
    clauses: &FolClauseSet,
) -> Result<(ClauseSet, AtomRegistry), NonGroundClause> {
    let mut registry = AtomRegistry::default();
    let mut out = Vec::new();
    for clause in clauses.iter() {
        if let Some(var) = clause.variables().into_iter().next() {
            return Err(NonGroundClause(var));
        }
        out.push(
            clause
                .literals
                .iter()
                .map(|lit| {
                    let id = registry.intern(&lit.atom);
                    Lit::new(if lit.positive { id } else { -id })
                })
                .collect::<Clause>(),
        );
    }
    Ok((ClauseSet::new(out), registry))
}

/// A successful refutation: the level that closed it and the ground clause
/// set the propositional solver rejected.
#[derive(Clone, Debug)]
pub struct Refutation {
    pub level: usize,
    pub ground: ClauseSet,
    pub registry: AtomRegistry,
}

/// Result of a bounded refutation search. `Unknown` means every level up to
/// the bound stayed satisfiable; it is not a consistency verdict.
#[derive(Clone, Debug)]
pub enum RefuteOutcome {
    Refuted(Refutation),
    Unknown,
}

impl RefuteOutcome {
    pub fn is_refuted(&self) -> bool {
        matches!(self, RefuteOutcome::Refuted(_))
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            RefuteOutcome::Refuted(r) => Some(r),
            RefuteOutcome::Unknown => None,
        }
    }
}

/// Error from [`refute`]: instantiation outgrew the clause cap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClauseCapExceeded {
    pub level: usize,
    pub cap: usize,
}

impl fmt::Display for ClauseCapExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ground instantiation at level {} exceeds the cap of {} clauses",
            self.level, self.cap
        )
    }
}

impl std::error::Error for ClauseCapExceeded {}

/// Default ground-clause cap for [`refute`]. Saturation grows
/// combinatorially; a crisp resource error beats an open-ended run.
pub const DEFAULT_CLAUSE_CAP: usize = 200_000;

/// Searches for a refutation of `clauses` by instantiating every clause with
/// every tuple of universe terms of level `0..=max_level` and testing the
/// accumulated ground abstraction for satisfiability.
pub fn refute(clauses: &FolClauseSet, max_level: usize) -> Result<RefuteOutcome, ClauseCapExceeded> {
    refute_with_cap(clauses, max_level, DEFAULT_CLAUSE_CAP)
}

/// [`refute`] with an explicit ground-clause cap.
pub fn refute_with_cap(
    clauses: &FolClauseSet,
    max_level: usize,
    clause_cap: usize,
) -> Result<RefuteOutcome, ClauseCapExceeded> {
    let sig = Signature::of(clauses);
    for level in 0..=max_level {
        let terms = herbrand_terms(&sig, level);
        let mut ground = BTreeSet::new();
        for clause in clauses.iter() {
            let vars: Vec<String> = clause.variables().into_iter().collect();
            for tuple in tuples_of(&terms, vars.len()) {
                let subst = Substitution::from_pairs(
                    vars.iter().cloned().zip(tuple.iter().map(|&t| t.clone())),
                );
                ground.insert(subst.apply_clause(clause));
                if ground.len() > clause_cap {
                    return Err(ClauseCapExceeded {
                        level,
                        cap: clause_cap,
                    });
                }
            }
        }
        let ground_set = FolClauseSet { clauses: ground };
        let (abstracted, registry) =
            ground_abstraction(&ground_set).expect("instances are ground by construction");
        if dpll_solve(&abstracted).is_unsat() {
            return Ok(RefuteOutcome::Refuted(Refutation {
                level,
                ground: abstracted,
                registry,
            }));
        }
    }
    Ok(RefuteOutcome::Unknown)
}

/// Indexed tuple enumeration to avoid cloning term vectors for 0-variable
/// clauses.
fn tuples_of<'a>(terms: &'a [Term], arity: usize) -> Box<dyn Iterator<Item = Vec<&'a Term>> + 'a> {
    if arity == 0 {
        return Box::new(std::iter::once(Vec::new()));
    }
    let inner = tuples_of(terms, arity - 1);
    Box::new(inner.flat_map(move |prefix| {
        terms.iter().map(move |t| {
            let mut next = prefix.clone();
            next.push(t);
            next
        })
    }))
}

/// True iff every literal occurring in `s` also occurs negated somewhere in
/// `s` — the shape a final refutation step can always be pruned to.
pub fn linkedness_check(s: &ClauseSet) -> bool {
    let literals = s.literals();
    literals.iter().all(|l| literals.contains(&l.negated()))
}
