//! Backtracking satisfiability: unit rule and pure-literal rule with
//! priority, splitting on a both-polarity literal otherwise, chronological
//! backtracking on conflict.
//!
//! The working state is the input clause set viewed through a partial
//! assignment: clauses with a true literal count as removed, false literals
//! count as deleted from their clauses. Assignments are recorded on a trail
//! so that restoring a choice point is a truncation, which reproduces the
//! pre-branch state exactly.

use std::fmt;

use crate::clause::{Assignment, ClauseSet, Lit, Var, Verdict};

/// One line of the branch trace: decide / backtrack / unit / pure, each with
/// the literal asserted.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum TraceEvent {
    Decide(Lit),
    Backtrack(Lit),
    Unit(Lit),
    Pure(Lit),
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Decide(l) => write!(f, "D {l}"),
            TraceEvent::Backtrack(l) => write!(f, "B {l}"),
            TraceEvent::Unit(l) => write!(f, "U {l}"),
            TraceEvent::Pure(l) => write!(f, "P {l}"),
        }
    }
}

/// Search counters from one [`dpll_run`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DpllStats {
    pub decisions: u64,
    pub backtracks: u64,
    pub unit_applications: u64,
    pub pure_applications: u64,
    /// Deepest choice-point stack seen; never exceeds the variable count.
    pub max_depth: usize,
}

/// Outcome of [`dpll_run`].
#[derive(Clone, Debug)]
pub struct DpllRun {
    pub verdict: Verdict,
    pub stats: DpllStats,
    /// Present when trace recording was requested.
    pub trace: Option<Vec<TraceEvent>>,
}

/// Error from [`choose_branch_literal`]: no variable occurs in both
/// polarities, so the splitting rule does not apply.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NoBranchVariable;

impl fmt::Display for NoBranchVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no variable occurs in both polarities")
    }
}

impl std::error::Error for NoBranchVariable {}

/// Splitting heuristic: among variables occurring in both polarities, picks
/// the one occurring in the most clauses (ties to the smallest id) and
/// returns its more frequent polarity (ties to positive).
pub fn choose_branch_literal(s: &ClauseSet) -> Result<Lit, NoBranchVariable> {
    let mut counts: std::collections::BTreeMap<Var, (usize, usize)> =
        std::collections::BTreeMap::new();
    for clause in s.iter() {
        for lit in clause.iter() {
            let entry = counts.entry(lit.var()).or_insert((0, 0));
            if lit.is_positive() {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
        }
    }
    counts
        .into_iter()
        .filter(|&(_, (pos, neg))| pos > 0 && neg > 0)
        .max_by(|&(v1, (p1, n1)), &(v2, (p2, n2))| {
            (p1 + n1).cmp(&(p2 + n2)).then(v2.cmp(&v1))
        })
        .map(|(var, (pos, neg))| Lit::from_assignment(var, pos >= neg))
        .ok_or(NoBranchVariable)
}

/// Decides satisfiability by backtracking search.
pub fn dpll_solve(s: &ClauseSet) -> Verdict {
    dpll_run(s, false).verdict
}

/// [`dpll_solve`] with search counters and, on request, the branch trace.
pub fn dpll_run(s: &ClauseSet, record_trace: bool) -> DpllRun {
    let mut solver = Solver::new(s, record_trace);
    let verdict = solver.solve();
    DpllRun {
        verdict,
        stats: solver.stats,
        trace: solver.trace,
    }
}

/// Literal over dense variable indices. Index order equals variable-id order,
/// so `(idx, negative-last)` reproduces the crate-wide literal tie-break.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct DLit {
    idx: usize,
    negative: bool,
}

impl DLit {
    fn negated(self) -> DLit {
        DLit {
            idx: self.idx,
            negative: !self.negative,
        }
    }
}

/// A saved branch: the decided literal, the trail length to restore, and
/// whether the untried alternative has been spent.
struct ChoicePoint {
    lit: DLit,
    trail_len: usize,
    tried_alternative: bool,
}

enum Step {
    Assign(DLit, TraceKind),
    Sat,
    Conflict,
}

enum TraceKind {
    Decide,
    Unit,
    Pure,
}

struct Solver {
    vars: Vec<Var>,
    clauses: Vec<Vec<DLit>>,
    values: Vec<Option<bool>>,
    trail: Vec<DLit>,
    choices: Vec<ChoicePoint>,
    stats: DpllStats,
    trace: Option<Vec<TraceEvent>>,
    // scratch occurrence counters reused across scans
    pos_count: Vec<usize>,
    neg_count: Vec<usize>,
}

impl Solver {
    fn new(s: &ClauseSet, record_trace: bool) -> Solver {
        let vars: Vec<Var> = s.vars().into_iter().collect();
        let index: std::collections::BTreeMap<Var, usize> =
            vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let clauses = s
            .iter()
            .map(|c| {
                c.iter()
                    .map(|l| DLit {
                        idx: index[&l.var()],
                        negative: !l.is_positive(),
                    })
                    .collect()
            })
            .collect();
        let n = vars.len();
        Solver {
            vars,
            clauses,
            values: vec![None; n],
            trail: Vec::new(),
            choices: Vec::new(),
            stats: DpllStats::default(),
            trace: if record_trace { Some(Vec::new()) } else { None },
            pos_count: vec![0; n],
            neg_count: vec![0; n],
        }
    }

    fn lit_value(&self, lit: DLit) -> Option<bool> {
        self.values[lit.idx].map(|v| v != lit.negative)
    }

    fn assign(&mut self, lit: DLit) {
        debug_assert!(self.values[lit.idx].is_none());
        self.values[lit.idx] = Some(!lit.negative);
        self.trail.push(lit);
    }

    fn external(&self, lit: DLit) -> Lit {
        Lit::from_assignment(self.vars[lit.idx], !lit.negative)
    }

    /// One pass over the clauses: detects conflict or full satisfaction, and
    /// otherwise selects the next rule application in priority order
    /// (unit, pure, split).
    fn next_step(&mut self) -> Step {
        self.pos_count.iter_mut().for_each(|c| *c = 0);
        self.neg_count.iter_mut().for_each(|c| *c = 0);

        let mut all_satisfied = true;
        let mut best_unit: Option<DLit> = None;
        for clause in &self.clauses {
            let mut satisfied = false;
            let mut open = 0usize;
            let mut last_open: Option<DLit> = None;
            for &lit in clause {
                match self.lit_value(lit) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open += 1;
                        last_open = Some(lit);
                    }
                }
            }
            if satisfied {
                continue;
            }
            all_satisfied = false;
            if open == 0 {
                return Step::Conflict;
            }
            if open == 1 {
                let lit = last_open.expect("one open literal was seen");
                if best_unit.map_or(true, |b| lit < b) {
                    best_unit = Some(lit);
                }
            }
            for &lit in clause {
                if self.lit_value(lit).is_none() {
                    if lit.negative {
                        self.neg_count[lit.idx] += 1;
                    } else {
                        self.pos_count[lit.idx] += 1;
                    }
                }
            }
        }

        if all_satisfied {
            return Step::Sat;
        }
        if let Some(lit) = best_unit {
            return Step::Assign(lit, TraceKind::Unit);
        }

        // pure literal: one polarity present, the other absent
        for idx in 0..self.values.len() {
            let (pos, neg) = (self.pos_count[idx], self.neg_count[idx]);
            if pos > 0 && neg == 0 {
                return Step::Assign(
                    DLit {
                        idx,
                        negative: false,
                    },
                    TraceKind::Pure,
                );
            }
            if neg > 0 && pos == 0 {
                return Step::Assign(
                    DLit {
                        idx,
                        negative: true,
                    },
                    TraceKind::Pure,
                );
            }
        }

        // split on the most frequent both-polarity variable
        let (idx, pos, neg) = (0..self.values.len())
            .map(|i| (i, self.pos_count[i], self.neg_count[i]))
            .filter(|&(_, p, n)| p > 0 && n > 0)
            .max_by(|&(i1, p1, n1), &(i2, p2, n2)| {
                (p1 + n1).cmp(&(p2 + n2)).then(i2.cmp(&i1))
            })
            .expect("neither satisfied nor conflicting, so a both-polarity variable exists");
        Step::Assign(
            DLit {
                idx,
                negative: pos < neg,
            },
            TraceKind::Decide,
        )
    }

    fn solve(&mut self) -> Verdict {
        loop {
            match self.next_step() {
                Step::Sat => return Verdict::Sat(self.model()),
                Step::Conflict => match self.backtrack() {
                    Some(flip) => {
                        self.stats.backtracks += 1;
                        self.record(TraceEvent::Backtrack(self.external(flip)));
                        self.assign(flip);
                    }
                    None => return Verdict::Unsat,
                },
                Step::Assign(lit, kind) => {
                    match kind {
                        TraceKind::Decide => {
                            self.stats.decisions += 1;
                            self.record(TraceEvent::Decide(self.external(lit)));
                            self.choices.push(ChoicePoint {
                                lit,
                                trail_len: self.trail.len(),
                                tried_alternative: false,
                            });
                            self.stats.max_depth = self.stats.max_depth.max(self.choices.len());
                        }
                        TraceKind::Unit => {
                            self.stats.unit_applications += 1;
                            self.record(TraceEvent::Unit(self.external(lit)));
                        }
                        TraceKind::Pure => {
                            self.stats.pure_applications += 1;
                            self.record(TraceEvent::Pure(self.external(lit)));
                        }
                    }
                    self.assign(lit);
                }
            }
        }
    }

    /// Unwinds to the deepest choice point whose alternative is untried,
    /// restores the exact pre-branch state, and returns the literal to flip
    /// to. `None` means the search space is exhausted.
    fn backtrack(&mut self) -> Option<DLit> {
        loop {
            let cp = self.choices.last_mut()?;
            if cp.tried_alternative {
                self.choices.pop();
                continue;
            }
            cp.tried_alternative = true;
            let flip = cp.lit.negated();
            let restore_to = cp.trail_len;
            while self.trail.len() > restore_to {
                let lit = self.trail.pop().expect("trail is long enough");
                self.values[lit.idx] = None;
            }
            return Some(flip);
        }
    }

    fn record(&mut self, event: TraceEvent) {
        if let Some(trace) = &mut self.trace {
            trace.push(event);
        }
    }

    /// Total model over the input variables; variables the search never
    /// assigned default to false.
    fn model(&self) -> Assignment {
        let mut model = Assignment::new();
        for (idx, &var) in self.vars.iter().enumerate() {
            model.bind(var, self.values[idx].unwrap_or(false));
        }
        model
    }

    /// Order-insensitive digest of the assignment state, for the
    /// restore-exactness tests.
    #[cfg(test)]
    fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        self.values.hash(&mut hasher);
        self.trail
            .iter()
            .map(|l| (l.idx, l.negative))
            .collect::<Vec<_>>()
            .hash(&mut hasher);
        hasher.finish()
    }
}
