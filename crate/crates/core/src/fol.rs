//! First-order syntax: terms, atoms, signed literals, clauses with tacitly
//! universally quantified variables, substitutions, and unification.
//!
//! All types order by term depth first and lexicographically second; that
//! single ordering drives Herbrand enumeration, instantiation order, and atom
//! numbering, keeping every downstream run deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A term: a variable or a function application. Constants are 0-ary
/// applications.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::App(name.to_string(), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.to_string(), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Nesting depth: constants and variables are 0, an application is one
    /// more than its deepest argument.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(Term::depth).max().map_or(0, |d| d + 1),
        }
    }

    pub fn occurs(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::App(_, args) => args.iter().any(|t| t.occurs(var)),
        }
    }

    pub fn variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => {
                for arg in args {
                    arg.variables(out);
                }
            }
        }
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth().cmp(&other.depth()).then_with(|| {
            match (self, other) {
                (Term::Var(a), Term::Var(b)) => a.cmp(b),
                (Term::Var(_), Term::App(..)) => Ordering::Less,
                (Term::App(..), Term::Var(_)) => Ordering::Greater,
                (Term::App(f, fa), Term::App(g, ga)) => f.cmp(g).then_with(|| fa.cmp(ga)),
            }
        })
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(name, args) => {
                write!(f, "{name}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, arg) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{arg}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A predicate applied to terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Atom {
        Atom {
            predicate: predicate.to_string(),
            args,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn variables(&self, out: &mut BTreeSet<String>) {
        for arg in &self.args {
            arg.variables(out);
        }
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.predicate
            .cmp(&other.predicate)
            .then_with(|| self.args.cmp(&other.args))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Term::App(self.predicate.clone(), self.args.clone()))
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A signed atom.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FolLiteral {
    pub positive: bool,
    pub atom: Atom,
}

impl FolLiteral {
    pub fn pos(atom: Atom) -> FolLiteral {
        FolLiteral {
            positive: true,
            atom,
        }
    }

    pub fn neg(atom: Atom) -> FolLiteral {
        FolLiteral {
            positive: false,
            atom,
        }
    }

    pub fn negated(&self) -> FolLiteral {
        FolLiteral {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }
}

impl Ord for FolLiteral {
    fn cmp(&self, other: &Self) -> Ordering {
        self.atom
            .cmp(&other.atom)
            .then_with(|| other.positive.cmp(&self.positive))
    }
}

impl PartialOrd for FolLiteral {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FolLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "~")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Debug for FolLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A disjunction of literals; its variables are universally quantified with
/// the clause as scope.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct FolClause {
    pub literals: BTreeSet<FolLiteral>,
}

impl FolClause {
    pub fn new<I: IntoIterator<Item = FolLiteral>>(literals: I) -> FolClause {
        FolClause {
            literals: literals.into_iter().collect(),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(|l| l.atom.is_ground())
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for lit in &self.literals {
            lit.atom.variables(&mut out);
        }
        out
    }
}

impl FromIterator<FolLiteral> for FolClause {
    fn from_iter<I: IntoIterator<Item = FolLiteral>>(iter: I) -> FolClause {
        FolClause::new(iter)
    }
}

impl fmt::Debug for FolClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.literals.iter()).finish()
    }
}

/// A set of clauses, read conjunctively.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FolClauseSet {
    pub clauses: BTreeSet<FolClause>,
}

impl FolClauseSet {
    pub fn new<I: IntoIterator<Item = FolClause>>(clauses: I) -> FolClauseSet {
        FolClauseSet {
            clauses: clauses.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FolClause> + '_ {
        self.clauses.iter()
    }

    /// Union of two sets. Clause variables are scoped per clause, so no
    /// renaming is required.
    pub fn merged(&self, other: &FolClauseSet) -> FolClauseSet {
        FolClauseSet {
            clauses: self.clauses.union(&other.clauses).cloned().collect(),
        }
    }
}

impl FromIterator<FolClause> for FolClauseSet {
    fn from_iter<I: IntoIterator<Item = FolClause>>(iter: I) -> FolClauseSet {
        FolClauseSet::new(iter)
    }
}

impl fmt::Debug for FolClauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.clauses.iter()).finish()
    }
}

/// A finite, idempotent map from variables to terms. No binding maps a
/// variable to a term containing that variable.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn empty() -> Substitution {
        Substitution::default()
    }

    pub fn singleton(var: &str, term: Term) -> Substitution {
        assert!(!term.occurs(var), "binding violates the occurs check");
        let mut map = BTreeMap::new();
        map.insert(var.to_string(), term);
        Substitution { map }
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, Term)>>(pairs: I) -> Substitution {
        let mut map: BTreeMap<String, Term> = pairs.into_iter().collect();
        // an identity binding is a no-op, not an occurs violation
        map.retain(|v, t| !matches!(t, Term::Var(w) if w == v));
        for (var, term) in &map {
            assert!(!term.occurs(var), "binding violates the occurs check");
        }
        Substitution { map }
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> + '_ {
        self.map.iter()
    }

    pub fn apply_term(&self, term: &Term) -> Term {
        match term {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| term.clone()),
            Term::App(name, args) => Term::App(
                name.clone(),
                args.iter().map(|t| self.apply_term(t)).collect(),
            ),
        }
    }

    pub fn apply_atom(&self, atom: &Atom) -> Atom {
        Atom {
            predicate: atom.predicate.clone(),
            args: atom.args.iter().map(|t| self.apply_term(t)).collect(),
        }
    }

    pub fn apply_literal(&self, lit: &FolLiteral) -> FolLiteral {
        FolLiteral {
            positive: lit.positive,
            atom: self.apply_atom(&lit.atom),
        }
    }

    pub fn apply_clause(&self, clause: &FolClause) -> FolClause {
        clause.literals.iter().map(|l| self.apply_literal(l)).collect()
    }

    /// Sequential composition: applying the result equals applying `self`
    /// first and `then` second.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut map: BTreeMap<String, Term> = self
            .map
            .iter()
            .map(|(v, t)| (v.clone(), then.apply_term(t)))
            .collect();
        for (v, t) in &then.map {
            map.entry(v.clone()).or_insert_with(|| t.clone());
        }
        // an identity binding can appear when `then` undoes a renaming
        map.retain(|v, t| !matches!(t, Term::Var(w) if w == v));
        Substitution { map }
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.map.iter()).finish()
    }
}

/// Why unification failed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum UnifyError {
    /// Distinct function or predicate symbols at the same position.
    Clash { expected: String, found: String },
    /// Same symbol, different argument counts.
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    /// A variable would be bound to a term containing it.
    OccursCheck { var: String, term: Term },
}

impl fmt::Display for UnifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnifyError::Clash { expected, found } => {
                write!(f, "symbol clash: {expected} vs {found}")
            }
            UnifyError::ArityMismatch {
                symbol,
                expected,
                found,
            } => write!(f, "arity mismatch on {symbol}: {expected} vs {found}"),
            UnifyError::OccursCheck { var, term } => {
                write!(f, "occurs check: {var} in {term}")
            }
        }
    }
}

impl std::error::Error for UnifyError {}

/// Most general unifier of two terms. On success, applying the result to
/// either input yields the same term, and any other unifier factors through
/// the result.
pub fn unify_terms(t1: &Term, t2: &Term) -> Result<Substitution, UnifyError> {
    let mut subst = Substitution::empty();
    unify_into(t1, t2, &mut subst)?;
    Ok(subst)
}

/// Most general unifier of two atoms; the predicate symbols and arities must
/// match.
pub fn unify_atoms(a1: &Atom, a2: &Atom) -> Result<Substitution, UnifyError> {
    if a1.predicate != a2.predicate {
        return Err(UnifyError::Clash {
            expected: a1.predicate.clone(),
            found: a2.predicate.clone(),
        });
    }
    if a1.args.len() != a2.args.len() {
        return Err(UnifyError::ArityMismatch {
            symbol: a1.predicate.clone(),
            expected: a1.args.len(),
            found: a2.args.len(),
        });
    }
    let mut subst = Substitution::empty();
    for (t1, t2) in a1.args.iter().zip(&a2.args) {
        unify_into(t1, t2, &mut subst)?;
    }
    Ok(subst)
}

fn unify_into(t1: &Term, t2: &Term, subst: &mut Substitution) -> Result<(), UnifyError> {
    let t1 = subst.apply_term(t1);
    let t2 = subst.apply_term(t2);
    match (&t1, &t2) {
        (Term::Var(a), Term::Var(b)) if a == b => Ok(()),
        (Term::Var(v), t) | (t, Term::Var(v)) => {
            if t.occurs(v) {
                return Err(UnifyError::OccursCheck {
                    var: v.clone(),
                    term: t.clone(),
                });
            }
            bind(subst, v, t);
            Ok(())
        }
        (Term::App(f, fa), Term::App(g, ga)) => {
            if f != g {
                return Err(UnifyError::Clash {
                    expected: f.clone(),
                    found: g.clone(),
                });
            }
            if fa.len() != ga.len() {
                return Err(UnifyError::ArityMismatch {
                    symbol: f.clone(),
                    expected: fa.len(),
                    found: ga.len(),
                });
            }
            for (a, b) in fa.iter().zip(ga) {
                unify_into(a, b, subst)?;
            }
            Ok(())
        }
    }
}

/// Adds `var -> term` and rewrites existing ranges with it, keeping the
/// substitution idempotent.
fn bind(subst: &mut Substitution, var: &str, term: &Term) {
    let single = Substitution::singleton(var, term.clone());
    let mut map: BTreeMap<String, Term> = subst
        .map
        .iter()
        .map(|(v, t)| (v.clone(), single.apply_term(t)))
        .collect();
    map.insert(var.to_string(), term.clone());
    subst.map = map;
}
