//! Propositional clause sets encoded as sets of nonzero integers.
//!
//! A positive integer stands for a variable affirmed, a negative integer for
//! its negation. A clause is a finite set of such literals, a clause set a
//! finite set of clauses. The empty clause set is true; a set containing the
//! empty clause is false.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Positive variable identifier.
pub type Var = u32;

/// A nonzero integer literal. Positive affirms the variable, negative denies it.
///
/// Literals order by variable id first, positive before negative, which is the
/// tie-break order used by every rule in this crate.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Lit(i32);

impl Lit {
    /// Panics on zero; zero is not a literal.
    pub fn new(value: i32) -> Lit {
        assert!(value != 0, "literal value must be nonzero");
        Lit(value)
    }

    pub fn try_new(value: i32) -> Option<Lit> {
        if value == 0 {
            None
        } else {
            Some(Lit(value))
        }
    }

    pub fn get(self) -> i32 {
        self.0
    }

    pub fn var(self) -> Var {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negated(self) -> Lit {
        Lit(-self.0)
    }

    /// The literal asserting `var = value`.
    pub fn from_assignment(var: Var, value: bool) -> Lit {
        let v = var as i32;
        assert!(v > 0, "variable id must be positive");
        Lit(if value { v } else { -v })
    }
}

impl Ord for Lit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.var(), !self.is_positive()).cmp(&(other.var(), !other.is_positive()))
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite set of literals, read disjunctively. The empty clause is falsehood.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    lits: BTreeSet<Lit>,
}

impl Clause {
    pub fn new<I: IntoIterator<Item = Lit>>(lits: I) -> Clause {
        Clause {
            lits: lits.into_iter().collect(),
        }
    }

    /// Builds a clause straight from nonzero integers. Panics on zero.
    pub fn from_ints<I: IntoIterator<Item = i32>>(ints: I) -> Clause {
        Clause::new(ints.into_iter().map(Lit::new))
    }

    pub fn empty() -> Clause {
        Clause::default()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.contains(&lit)
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.lits.iter().copied()
    }

    /// True when the clause holds some literal together with its negation.
    pub fn is_tautology(&self) -> bool {
        self.lits.iter().any(|l| self.lits.contains(&l.negated()))
    }

    /// The single literal of a singleton clause, if any.
    pub fn unit_literal(&self) -> Option<Lit> {
        if self.lits.len() == 1 {
            self.lits.iter().next().copied()
        } else {
            None
        }
    }

    /// Clause with `lit` removed (other literals untouched).
    pub fn without(&self, lit: Lit) -> Clause {
        Clause {
            lits: self.lits.iter().copied().filter(|&l| l != lit).collect(),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var())
    }
}

impl FromIterator<Lit> for Clause {
    fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Clause {
        Clause::new(iter)
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.lits.iter()).finish()
    }
}

/// A finite set of clauses, read conjunctively. The empty set is truth.
///
/// Construction collapses duplicate clauses and drops tautological ones:
/// a clause containing both a literal and its negation never affects
/// satisfiability, and keeping such clauses would let variable elimination
/// produce garbage resolvents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClauseSet {
    clauses: BTreeSet<Clause>,
}

impl ClauseSet {
    pub fn new<I: IntoIterator<Item = Clause>>(clauses: I) -> ClauseSet {
        ClauseSet {
            clauses: clauses.into_iter().filter(|c| !c.is_tautology()).collect(),
        }
    }

    /// Builds a set from integer slices, e.g. `ClauseSet::from_ints(&[&[1, 2], &[-1]])`.
    pub fn from_ints(clauses: &[&[i32]]) -> ClauseSet {
        ClauseSet::new(
            clauses
                .iter()
                .map(|c| Clause::from_ints(c.iter().copied())),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn contains(&self, clause: &Clause) -> bool {
        self.clauses.contains(clause)
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.contains(&Clause::empty())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.clauses.iter()
    }

    /// Distinct variables occurring in the set, ascending.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.clauses.iter().flat_map(|c| c.vars()).collect()
    }

    /// Distinct literals occurring in the set.
    pub fn literals(&self) -> BTreeSet<Lit> {
        self.clauses.iter().flat_map(|c| c.iter()).collect()
    }
}

impl FromIterator<Clause> for ClauseSet {
    fn from_iter<I: IntoIterator<Item = Clause>>(iter: I) -> ClauseSet {
        ClauseSet::new(iter)
    }
}

impl fmt::Debug for ClauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.clauses.iter()).finish()
    }
}

/// A partial map from positive variable ids to truth values. Doubles as the
/// model returned by the solvers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Assignment {
    bindings: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, bool)>>(pairs: I) -> Assignment {
        let bindings: BTreeMap<Var, bool> = pairs.into_iter().collect();
        assert!(
            bindings.keys().all(|&v| v > 0),
            "assignment keys must be positive variable ids"
        );
        Assignment { bindings }
    }

    pub fn bind(&mut self, var: Var, value: bool) {
        assert!(var > 0, "assignment keys must be positive variable ids");
        self.bindings.insert(var, value);
    }

    /// Records the binding that makes `lit` true.
    pub fn assert_literal(&mut self, lit: Lit) {
        self.bind(lit.var(), lit.is_positive());
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.bindings.get(&var).copied()
    }

    /// `Some(true)` when the literal is bound true, `Some(false)` when bound
    /// false, `None` when its variable is unbound.
    pub fn literal_value(&self, lit: Lit) -> Option<bool> {
        self.value(lit.var()).map(|v| v == lit.is_positive())
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.bindings.iter().map(|(&v, &b)| (v, b))
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.bindings.iter()).finish()
    }
}

/// Solver outcome. The propositional engines only ever produce `Sat` or
/// `Unsat`; `Unknown` is reserved for the bounded first-order and Diophantine
/// searches.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Sat(Assignment),
    Unsat,
    Unknown(String),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat)
    }

    pub fn model(&self) -> Option<&Assignment> {
        match self {
            Verdict::Sat(m) => Some(m),
            _ => None,
        }
    }
}

/// Error from [`evaluate`]: the assignment left a variable of the set unbound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnboundVariable(pub Var);

impl fmt::Display for UnboundVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "variable {} is not bound by the assignment", self.0)
    }
}

impl std::error::Error for UnboundVariable {}

/// Error from [`brute_force_sat`]: too many distinct variables to enumerate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VarCapExceeded {
    pub vars: usize,
    pub cap: usize,
}

impl fmt::Display for VarCapExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "clause set has {} distinct variables, above the enumeration cap of {}",
            self.vars, self.cap
        )
    }
}

impl std::error::Error for VarCapExceeded {}

/// Simplifies `s` with respect to `lit`: every clause containing `lit` is
/// removed, and `-lit` is removed from the remaining clauses. This is exactly
/// what assigning `lit` true does to the set.
pub fn simplify(s: &ClauseSet, lit: Lit) -> ClauseSet {
    let neg = lit.negated();
    ClauseSet::new(
        s.iter()
            .filter(|c| !c.contains(lit))
            .map(|c| c.without(neg)),
    )
}

/// Unit rule: if some singleton clause `{l}` exists, commits to `l` and
/// returns `(l, simplify(s, l))`.
///
/// When several singletons exist the literal with the smallest variable id is
/// taken, positive before negative.
pub fn unit_rule(s: &ClauseSet) -> Option<(Lit, ClauseSet)> {
    let lit = s.iter().filter_map(|c| c.unit_literal()).min()?;
    Some((lit, simplify(s, lit)))
}

/// Pure-literal rule: if some literal occurs in `s` while its negation occurs
/// in no clause, commits to it. Tie-break as in [`unit_rule`].
pub fn pure_literal_rule(s: &ClauseSet) -> Option<(Lit, ClauseSet)> {
    let occurring = s.literals();
    let lit = occurring
        .iter()
        .copied()
        .filter(|l| !occurring.contains(&l.negated()))
        .min()?;
    Some((lit, simplify(s, lit)))
}

/// True iff every clause contains a literal made true by `a`. The empty
/// clause evaluates false, the empty set true. Errors when `a` leaves a
/// variable of `s` unbound.
pub fn evaluate(s: &ClauseSet, a: &Assignment) -> Result<bool, UnboundVariable> {
    for var in s.vars() {
        if a.value(var).is_none() {
            return Err(UnboundVariable(var));
        }
    }
    Ok(s.iter()
        .all(|c| c.iter().any(|l| a.literal_value(l) == Some(true))))
}

/// Default variable cap for [`brute_force_sat`].
pub const BRUTE_FORCE_VAR_CAP: usize = 20;

/// Exhaustive truth-table oracle. Tries every total assignment over the
/// variables of `s` in lexicographic order (variables ascending, false before
/// true) and returns the first model found, or `Unsat` after exhausting all
/// `2^n` of them.
pub fn brute_force_sat(s: &ClauseSet) -> Result<Verdict, VarCapExceeded> {
    brute_force_sat_with_cap(s, BRUTE_FORCE_VAR_CAP)
}

/// [`brute_force_sat`] with an explicit cap on the number of distinct variables.
pub fn brute_force_sat_with_cap(s: &ClauseSet, cap: usize) -> Result<Verdict, VarCapExceeded> {
    let vars: Vec<Var> = s.vars().into_iter().collect();
    let n = vars.len();
    if n > cap {
        return Err(VarCapExceeded { vars: n, cap });
    }
    for counter in 0u64..(1u64 << n) {
        let mut a = Assignment::new();
        for (j, &var) in vars.iter().enumerate() {
            // Leftmost variable is the most significant bit, so counting up
            // enumerates assignments in lexicographic order with false < true.
            let bit = (counter >> (n - 1 - j)) & 1;
            a.bind(var, bit == 1);
        }
        if evaluate(s, &a).expect("assignment is total over the set's variables") {
            return Ok(Verdict::Sat(a));
        }
    }
    Ok(Verdict::Unsat)
}
