//! Integer-valued projective rank functions.
//!
//! Isomorphism classes are ℕ-vectors over `R` (index 0) and the module
//! labels. A rank function with values in `(1/n)ℕ` is stored as `t` with
//! `t(R) = n` and must satisfy `t·lhs = t·rhs` for every relation. When none
//! exists, a derived relation `c·R ~ w` for which `n(c - w_R)` is not a
//! combination of the module entries of `w` certifies it.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::numeric::{numerical_feasible, Mode};
use crate::presentation::{Probe, ProblemInstance, SPresentation, SWord};
use crate::target::{Target, TargetDescriptor, TargetElement};

/// Reserved name of the free module of rank one.
pub const FREE: &str = "R";

pub type RankVector = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("module name '{0}' is reserved")]
    ReservedName(String),
    #[error("module '{0}' declared twice")]
    DuplicateModule(String),
    #[error("relation {relation}: expected {expected} entries, found {found}")]
    DimensionMismatch {
        relation: usize,
        expected: usize,
        found: usize,
    },
    #[error("relation {0} has a zero side")]
    ZeroSide(usize),
    #[error("module '{0}' is not a summand in any relation of the form c R = ...")]
    MissingFreeResolution(String),
    #[error("denominator must be positive")]
    ZeroDenominator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProblem {
    pub modules: Vec<String>,
    pub relations: Vec<(RankVector, RankVector)>,
    pub mode: Mode,
    pub denominator: u64,
}

fn is_pure_free(v: &[u64]) -> bool {
    v[0] > 0 && v[1..].iter().all(|&x| x == 0)
}

fn dominates(w: &[u64], v: &[u64]) -> bool {
    w.iter().zip(v).all(|(a, b)| a >= b)
}

impl RankProblem {
    pub fn new(modules: Vec<String>, relations: Vec<(RankVector, RankVector)>) -> Self {
        RankProblem {
            modules,
            relations,
            mode: Mode::Nonnegative,
            denominator: 1,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_denominator(mut self, n: u64) -> Self {
        self.denominator = n;
        self
    }

    /// Number of coordinates, `R` included.
    pub fn dim(&self) -> usize {
        self.modules.len() + 1
    }

    pub fn names(&self) -> Vec<&str> {
        std::iter::once(FREE)
            .chain(self.modules.iter().map(String::as_str))
            .collect()
    }

    pub fn validate(&self) -> Result<(), RankError> {
        if self.denominator == 0 {
            return Err(RankError::ZeroDenominator);
        }
        let mut seen = std::collections::BTreeSet::new();
        for m in &self.modules {
            if m == FREE {
                return Err(RankError::ReservedName(m.clone()));
            }
            if !seen.insert(m) {
                return Err(RankError::DuplicateModule(m.clone()));
            }
        }
        for (i, (a, b)) in self.relations.iter().enumerate() {
            for side in [a, b] {
                if side.len() != self.dim() {
                    return Err(RankError::DimensionMismatch {
                        relation: i + 1,
                        expected: self.dim(),
                        found: side.len(),
                    });
                }
                if side.iter().all(|&x| x == 0) {
                    return Err(RankError::ZeroSide(i + 1));
                }
            }
        }
        for (p, name) in self.modules.iter().enumerate() {
            if self.free_resolution_bound(p + 1).is_none() {
                return Err(RankError::MissingFreeResolution(name.clone()));
            }
        }
        Ok(())
    }

    /// The smallest `⌊n·c / m⌋` over relations `c·R ~ w` with `w_P = m > 0`.
    fn free_resolution_bound(&self, p: usize) -> Option<u64> {
        self.relations
            .iter()
            .flat_map(|(a, b)| [(a, b), (b, a)])
            .filter(|(pure, other)| is_pure_free(pure) && other[p] > 0)
            .map(|(pure, other)| self.denominator * pure[0] / other[p])
            .min()
    }

    /// Renders a vector as `2 R + A + 3 B`.
    pub fn format_vector(&self, v: &[u64]) -> String {
        let names = self.names();
        let terms: Vec<String> = v
            .iter()
            .zip(&names)
            .filter(|(&c, _)| c > 0)
            .map(|(&c, n)| {
                if c == 1 {
                    n.to_string()
                } else {
                    format!("{c} {n}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    fn satisfied_by(&self, t: &[u64]) -> bool {
        let dot = |v: &[u64]| -> u64 { v.iter().zip(t).map(|(a, b)| a * b).sum() };
        self.relations.iter().all(|(a, b)| dot(a) == dot(b))
    }

    /// Whether `n(c - w_R)` is a mode-matched combination of the module
    /// entries of `w`.
    pub fn feasible(&self, c: u64, w: &[u64]) -> bool {
        let Some(k) = c.checked_sub(w[0]) else {
            return false;
        };
        numerical_feasible(self.denominator * k, &w[1..], self.mode).is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankFunction {
    /// `t[0] = n`, then one value per module.
    pub values: Vec<u64>,
    pub denominator: u64,
}

impl RankFunction {
    pub fn rank(&self, module: usize) -> Ratio<u64> {
        Ratio::new(self.values[module + 1], self.denominator)
    }

    pub fn verify(&self, prob: &RankProblem) -> bool {
        self.values.len() == prob.dim()
            && self.values[0] == prob.denominator
            && self.denominator == prob.denominator
            && (prob.mode == Mode::Nonnegative || self.values[1..].iter().all(|&x| x >= 1))
            && prob.satisfied_by(&self.values)
    }
}

/// Subtract one side of a relation and add the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankStep {
    pub relation: usize,
    pub forward: bool,
}

impl RankStep {
    pub fn apply(&self, prob: &RankProblem, w: &[u64]) -> Option<RankVector> {
        let (a, b) = prob.relations.get(self.relation)?;
        let (from, to) = if self.forward { (a, b) } else { (b, a) };
        if w.len() != from.len() || !dominates(w, from) {
            return None;
        }
        Some(
            w.iter()
                .zip(from)
                .zip(to)
                .map(|((x, f), t)| x - f + t)
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessRelation {
    pub c: u64,
    pub w: RankVector,
    pub trace: Vec<RankStep>,
}

impl WitnessRelation {
    pub fn start(&self, prob: &RankProblem) -> RankVector {
        let mut v = vec![0; prob.dim()];
        v[0] = self.c;
        v
    }

    pub fn replay(&self, prob: &RankProblem) -> Option<RankVector> {
        self.trace
            .iter()
            .try_fold(self.start(prob), |w, s| s.apply(prob, &w))
    }

    /// The trace reaches `w` and the relation is infeasible.
    pub fn verify(&self, prob: &RankProblem) -> bool {
        self.replay(prob).as_ref() == Some(&self.w) && !prob.feasible(self.c, &self.w)
    }

    pub fn display(&self, prob: &RankProblem) -> String {
        format!(
            "{} = {}",
            prob.format_vector(&self.start(prob)),
            prob.format_vector(&self.w)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessBounds {
    pub c_max: u64,
    pub norm: u64,
    pub queue_cap: usize,
}

impl Default for WitnessBounds {
    fn default() -> Self {
        WitnessBounds {
            c_max: 8,
            norm: 30,
            queue_cap: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankVerdict {
    Exists(RankFunction),
    NotExists(Option<WitnessRelation>),
}

/// Lexicographically smallest rank function, by exhaustive search within
/// the free-resolution bounds.
pub fn find_rank_function(prob: &RankProblem) -> Result<Option<RankFunction>, RankError> {
    prob.validate()?;
    let lo = match prob.mode {
        Mode::Nonnegative => 0,
        Mode::Positive => 1,
    };
    let hi: Vec<u64> = (1..prob.dim())
        .map(|p| prob.free_resolution_bound(p).expect("validated"))
        .collect();
    // Relations are checked at the depth where their last coordinate is set.
    let last = |v: &[u64]| v.iter().rposition(|&x| x > 0).unwrap_or(0);
    let mut due = vec![Vec::new(); prob.dim()];
    for (i, (a, b)) in prob.relations.iter().enumerate() {
        due[last(a).max(last(b))].push(i);
    }
    let mut t = vec![0; prob.dim()];
    t[0] = prob.denominator;
    let ok_at = |t: &[u64], depth: usize| {
        due[depth].iter().all(|&i| {
            let (a, b) = &prob.relations[i];
            let dot = |v: &[u64]| -> u64 { v.iter().zip(t).map(|(x, y)| x * y).sum() };
            dot(a) == dot(b)
        })
    };
    fn go(
        depth: usize,
        t: &mut Vec<u64>,
        lo: u64,
        hi: &[u64],
        ok_at: &dyn Fn(&[u64], usize) -> bool,
    ) -> bool {
        if depth == t.len() {
            return true;
        }
        for v in lo..=hi[depth - 1] {
            t[depth] = v;
            if ok_at(t, depth) && go(depth + 1, t, lo, hi, ok_at) {
                return true;
            }
        }
        false
    }
    if !ok_at(&t, 0) {
        return Ok(None);
    }
    let found = go(1, &mut t, lo, &hi, &ok_at);
    debug_assert!(!found || prob.satisfied_by(&t));
    Ok(found.then_some(RankFunction {
        values: t,
        denominator: prob.denominator,
    }))
}

/// Breadth-first search from `c·R`, `c = 1..=c_max`, for an infeasible
/// derived relation. Vectors above `norm` (sum of entries) are dropped and
/// each `c` explores at most `queue_cap` vectors.
pub fn find_witness(prob: &RankProblem, bounds: WitnessBounds) -> Option<WitnessRelation> {
    for c in 1..=bounds.c_max {
        let mut start = vec![0; prob.dim()];
        start[0] = c;
        if start.iter().sum::<u64>() > bounds.norm {
            break;
        }
        let mut parent: HashMap<RankVector, Option<(RankVector, RankStep)>> = HashMap::new();
        parent.insert(start.clone(), None);
        let mut queue = VecDeque::from([start]);
        while let Some(w) = queue.pop_front() {
            if !prob.feasible(c, &w) {
                return Some(WitnessRelation {
                    c,
                    trace: trace_to(&parent, &w),
                    w,
                });
            }
            for relation in 0..prob.relations.len() {
                for forward in [true, false] {
                    let step = RankStep { relation, forward };
                    let Some(next) = step.apply(prob, &w) else {
                        continue;
                    };
                    if next.iter().sum::<u64>() > bounds.norm || parent.contains_key(&next) {
                        continue;
                    }
                    if parent.len() >= bounds.queue_cap {
                        continue;
                    }
                    parent.insert(next.clone(), Some((w.clone(), step)));
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

fn trace_to(
    parent: &HashMap<RankVector, Option<(RankVector, RankStep)>>,
    w: &[u64],
) -> Vec<RankStep> {
    let mut trace = Vec::new();
    let mut cur = w.to_vec();
    while let Some(Some((prev, step))) = parent.get(&cur) {
        trace.push(*step);
        cur = prev.clone();
    }
    trace.reverse();
    trace
}

/// A rank function when one exists, otherwise a witness when one is found
/// within `bounds`.
pub fn decide(prob: &RankProblem, bounds: WitnessBounds) -> Result<RankVerdict, RankError> {
    Ok(match find_rank_function(prob)? {
        Some(f) => RankVerdict::Exists(f),
        None => RankVerdict::NotExists(find_witness(prob, bounds)),
    })
}

/// The same question as an extension problem into ℕ or ℕ \ {0}: generators
/// `R` and the modules, the relations as commuting words, and probes `n` on
/// `R` and `n·c` on the other side of each relation `c·R ~ w`.
pub fn to_extension_instance(prob: &RankProblem) -> ProblemInstance {
    let word = |v: &[u64]| {
        SWord(
            v.iter()
                .enumerate()
                .flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize))
                .collect(),
        )
    };
    let names: Vec<String> = prob.names().into_iter().map(String::from).collect();
    let relations = prob
        .relations
        .iter()
        .map(|(a, b)| (word(a), word(b)))
        .collect();
    let descriptor = match prob.mode {
        Mode::Nonnegative => TargetDescriptor::Nat,
        Mode::Positive => TargetDescriptor::PosNat,
    };
    let n = prob.denominator;
    let mut probes = vec![Probe {
        value: TargetElement::Nat(n),
        word: SWord(vec![0]),
    }];
    for (a, b) in &prob.relations {
        for (pure, other) in [(a, b), (b, a)] {
            if is_pure_free(pure) {
                probes.push(Probe {
                    value: TargetElement::Nat(n * pure[0]),
                    word: word(other),
                });
            }
        }
    }
    ProblemInstance {
        presentation: SPresentation::new(names, relations),
        target: Target::new(descriptor).expect("ℕ targets are valid"),
        probes,
    }
}

impl fmt::Display for RankProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "modules: {}", self.modules.join(" "))?;
        if self.mode != Mode::Nonnegative {
            write!(f, "\nmode: {}", self.mode.as_str())?;
        }
        if self.denominator != 1 {
            write!(f, "\ndenominator: {}", self.denominator)?;
        }
        for (a, b) in &self.relations {
            write!(
                f,
                "\nrelation: {} = {}",
                self.format_vector(a),
                self.format_vector(b)
            )?;
        }
        Ok(())
    }
}
