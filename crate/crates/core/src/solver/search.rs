//! Backtracking over finite domains with equation and relation constraints.

use crate::presentation::SWord;
use crate::target::{Target, TargetElement};

use super::TEquation;

pub(crate) enum Constraint<'a> {
    /// `pattern(η) = value`
    Equation(&'a TEquation),
    /// `lhs(η) = rhs(η)`
    Relation(&'a SWord, &'a SWord),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub checks: u64,
}

pub(crate) struct Search<'a> {
    target: &'a Target,
    /// Variables in assignment order.
    vars: Vec<usize>,
    domains: Vec<&'a [TargetElement]>,
    constraints: Vec<Constraint<'a>>,
    /// For each depth, the constraints to test after assigning that variable.
    watch: Vec<Vec<usize>>,
    values: Vec<Option<TargetElement>>,
    pub stats: SearchStats,
}

pub(crate) fn evaluate(
    target: &Target,
    pattern: &SWord,
    value_of: impl Fn(usize) -> TargetElement,
) -> TargetElement {
    let mut acc: Option<TargetElement> = None;
    for &x in pattern.symbols() {
        let v = value_of(x);
        acc = Some(match acc {
            None => v,
            Some(a) => target
                .multiply(&a, &v)
                .expect("assignment values share the target kind"),
        });
    }
    acc.expect("patterns are nonempty")
}

impl<'a> Search<'a> {
    /// `domains[x]` is the domain of variable `x`; only `vars` are searched.
    pub fn new(
        target: &'a Target,
        vars: Vec<usize>,
        domains: &'a [Vec<TargetElement>],
        constraints: Vec<Constraint<'a>>,
    ) -> Self {
        let n_slots = domains.len();
        let depth_of = |x: usize| vars.iter().position(|&v| v == x);
        let mut watch = vec![Vec::new(); vars.len()];
        for (ci, c) in constraints.iter().enumerate() {
            let syms: Vec<usize> = match c {
                Constraint::Equation(e) => e.pattern.symbols().to_vec(),
                Constraint::Relation(a, b) => {
                    a.symbols().iter().chain(b.symbols()).copied().collect()
                }
            };
            let depths: Vec<usize> = syms.iter().filter_map(|&x| depth_of(x)).collect();
            match c {
                // Equations are checked partially at every depth they touch.
                Constraint::Equation(_) => {
                    let mut ds = depths;
                    ds.sort_unstable();
                    ds.dedup();
                    for d in ds {
                        watch[d].push(ci);
                    }
                }
                Constraint::Relation(..) => {
                    if let Some(&d) = depths.iter().max() {
                        watch[d].push(ci);
                    }
                }
            }
        }
        let sub_domains = vars.iter().map(|&x| domains[x].as_slice()).collect();
        Search {
            target,
            vars,
            domains: sub_domains,
            constraints,
            watch,
            values: vec![None; n_slots],
            stats: SearchStats::default(),
        }
    }

    fn value(&self, x: usize) -> TargetElement {
        self.values[x].clone().expect("variable assigned")
    }

    fn assigned(&self, x: usize) -> bool {
        self.values[x].is_some()
    }

    /// Checks a constraint against the current partial assignment.
    fn consistent(&self, c: &Constraint<'_>) -> bool {
        match c {
            Constraint::Relation(a, b) => {
                evaluate(self.target, a, |x| self.value(x))
                    == evaluate(self.target, b, |x| self.value(x))
            }
            Constraint::Equation(eq) => {
                let syms = eq.pattern.symbols();
                if syms.iter().all(|&x| self.assigned(x)) {
                    return evaluate(self.target, &eq.pattern, |x| self.value(x)) == eq.value;
                }
                self.partial_fits(eq)
            }
        }
    }

    /// A necessary condition for completing a partially assigned equation.
    fn partial_fits(&self, eq: &TEquation) -> bool {
        let syms = eq.pattern.symbols();
        if self.target.is_commutative() {
            let assigned: Vec<usize> = syms.iter().copied().filter(|&x| self.assigned(x)).collect();
            if assigned.is_empty() {
                return true;
            }
            let partial = evaluate(self.target, &SWord(assigned), |x| self.value(x));
            // The unassigned part multiplies in, so the partial value divides.
            return self.target.divisor_witness(&partial, &eq.value).is_some();
        }
        let TargetElement::Word(full) = &eq.value else {
            return true;
        };
        let full = full.as_slice();
        let mut prefix = Vec::new();
        for &x in syms.iter().take_while(|&&x| self.assigned(x)) {
            if let TargetElement::Word(w) = self.value(x) {
                prefix.extend(w.0);
            }
        }
        let mut suffix = Vec::new();
        for &x in syms.iter().rev().take_while(|&&x| self.assigned(x)) {
            if let TargetElement::Word(w) = self.value(x) {
                let mut w = w.0;
                w.extend(suffix);
                suffix = w;
            }
        }
        let unassigned = syms.iter().filter(|&&x| !self.assigned(x)).count();
        prefix.len() + suffix.len() + unassigned <= full.len()
            && full.starts_with(&prefix)
            && full.ends_with(&suffix)
    }

    fn descend(&mut self, depth: usize, sink: &mut dyn FnMut(Vec<TargetElement>) -> bool) -> bool {
        if depth == self.vars.len() {
            let sol = self.vars.iter().map(|&x| self.value(x)).collect();
            return sink(sol);
        }
        let x = self.vars[depth];
        for i in 0..self.domains[depth].len() {
            self.stats.nodes += 1;
            self.values[x] = Some(self.domains[depth][i].clone());
            let mut ok = true;
            for &ci in &self.watch[depth] {
                self.stats.checks += 1;
                if !self.consistent(&self.constraints[ci]) {
                    ok = false;
                    break;
                }
            }
            if ok && self.descend(depth + 1, sink) {
                self.values[x] = None;
                return true;
            }
        }
        self.values[x] = None;
        false
    }

    /// The first solution in domain order, as values of `vars`.
    pub fn first(&mut self) -> Option<Vec<TargetElement>> {
        let mut found = None;
        self.descend(0, &mut |sol| {
            found = Some(sol);
            true
        });
        found
    }

    /// Every solution, as values of `vars`.
    pub fn all(&mut self) -> Vec<Vec<TargetElement>> {
        let mut out = Vec::new();
        self.descend(0, &mut |sol| {
            out.push(sol);
            false
        });
        out
    }
}
