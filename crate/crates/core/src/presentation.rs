//! Finitely presented source semigroups, probe data, and bounded rewriting.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::target::{Target, TargetElement};

/// A word over the source generators, stored as generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SWord(pub Vec<usize>);

impl SWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(&x)
    }

    pub fn concat(&self, other: &SWord) -> SWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SWord(v)
    }

    pub fn repeat(&self, d: usize) -> SWord {
        SWord(self.0.repeat(d))
    }
}

impl Ord for SWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("empty word")]
    EmptyWord,
}

/// Generators and defining relations of the source semigroup S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPresentation {
    generators: Vec<String>,
    relations: Vec<(SWord, SWord)>,
}

impl SPresentation {
    /// Builds a presentation, dropping trivial relations and duplicates
    /// (including swapped duplicates). Each kept relation is stored with its
    /// smaller side first.
    pub fn new(generators: Vec<String>, relations: Vec<(SWord, SWord)>) -> Self {
        let mut seen = BTreeSet::new();
        let mut kept = Vec::new();
        for (a, b) in relations {
            if a == b {
                continue;
            }
            let pair = if a <= b { (a, b) } else { (b, a) };
            if seen.insert(pair.clone()) {
                kept.push(pair);
            }
        }
        SPresentation {
            generators,
            relations: kept,
        }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[(SWord, SWord)] {
        &self.relations
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Parses a whitespace-separated word. A token that is not a generator
    /// name but spells single-character generators is split into them, so
    /// `x y x` and `xyx` denote the same word.
    pub fn parse_word(&self, text: &str) -> Result<SWord, PresentationError> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if let Some(i) = self.generator_index(tok) {
                out.push(i);
                continue;
            }
            for c in tok.chars() {
                let i = self
                    .generator_index(c.encode_utf8(&mut [0; 4]))
                    .ok_or_else(|| PresentationError::UnknownSymbol(tok.to_string()))?;
                out.push(i);
            }
        }
        if out.is_empty() {
            return Err(PresentationError::EmptyWord);
        }
        Ok(SWord(out))
    }

    pub fn format_word(&self, w: &SWord) -> String {
        w.0.iter()
            .map(|&i| {
                self.generators
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| format!("?{i}"))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// One known value `g(p)` together with the word `f(p)` it is attached to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Probe {
    pub value: TargetElement,
    pub word: SWord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    pub presentation: SPresentation,
    pub target: Target,
    pub probes: Vec<Probe>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("no generators declared")]
    NoGenerators,
    #[error("generator '{0}' declared twice")]
    DuplicateGenerator(String),
    #[error("no probes given")]
    NoProbes,
    #[error("generator '{0}' occurs in no probe word")]
    MissingCoverage(String),
    #[error("{0} has an empty word")]
    EmptyWord(String),
    #[error("{context} uses unknown generator index {index}")]
    UnknownSymbol { context: String, index: usize },
    #[error("probe {probe}: {reason}")]
    InvalidTargetElement { probe: usize, reason: String },
}

/// Checks well-formedness and that every generator occurs in some probe
/// word.
pub fn validate_instance(inst: &ProblemInstance) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let gens = inst.presentation.generators();
    if gens.is_empty() {
        out.push(Violation::NoGenerators);
    }
    let mut seen = BTreeSet::new();
    for g in gens {
        if !seen.insert(g) {
            out.push(Violation::DuplicateGenerator(g.clone()));
        }
    }
    let check_word = |w: &SWord, context: String, out: &mut Vec<Violation>| {
        if w.is_empty() {
            out.push(Violation::EmptyWord(context.clone()));
        }
        if let Some(&index) = w.0.iter().find(|&&i| i >= gens.len()) {
            out.push(Violation::UnknownSymbol { context, index });
        }
    };
    for (i, (a, b)) in inst.presentation.relations().iter().enumerate() {
        check_word(a, format!("relation {}", i + 1), &mut out);
        check_word(b, format!("relation {}", i + 1), &mut out);
    }
    if inst.probes.is_empty() {
        out.push(Violation::NoProbes);
    }
    for (i, p) in inst.probes.iter().enumerate() {
        check_word(&p.word, format!("probe {}", i + 1), &mut out);
        if let Err(e) = inst.target.validate(&p.value) {
            out.push(Violation::InvalidTargetElement {
                probe: i + 1,
                reason: e.to_string(),
            });
        }
    }
    for (x, name) in gens.iter().enumerate() {
        if !inst.probes.iter().any(|p| p.word.contains(x)) {
            out.push(Violation::MissingCoverage(name.clone()));
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RewriteBounds {
    pub length_bound: usize,
    pub count_bound: usize,
}

impl RewriteBounds {
    pub const DEFAULT_COUNT: usize = 10_000;

    /// Twice the longest probe word, and the default count cap.
    pub fn for_instance(inst: &ProblemInstance) -> Self {
        let longest = inst.probes.iter().map(|p| p.word.len()).max().unwrap_or(1);
        RewriteBounds {
            length_bound: 2 * longest.max(1),
            count_bound: Self::DEFAULT_COUNT,
        }
    }
}

/// Replace the occurrence of one side of a relation at `position` with the
/// other side. `forward` rewrites the stored first side into the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RewriteStep {
    pub relation: usize,
    pub forward: bool,
    pub position: usize,
}

impl RewriteStep {
    pub fn apply(&self, pres: &SPresentation, w: &SWord) -> Option<SWord> {
        let (a, b) = pres.relations().get(self.relation)?;
        let (from, to) = if self.forward { (a, b) } else { (b, a) };
        let end = self.position.checked_add(from.len())?;
        if end > w.len() || w.0[self.position..end] != from.0[..] {
            return None;
        }
        let mut v = w.0[..self.position].to_vec();
        v.extend_from_slice(&to.0);
        v.extend_from_slice(&w.0[end..]);
        Some(SWord(v))
    }
}

/// Replays `trace` from `start`; `None` if some step does not apply.
pub fn replay(pres: &SPresentation, start: &SWord, trace: &[RewriteStep]) -> Option<SWord> {
    trace
        .iter()
        .try_fold(start.clone(), |w, step| step.apply(pres, &w))
}

/// Words found equal to a start word, each with a trace from the start word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteClosure {
    pub words: BTreeMap<SWord, Vec<RewriteStep>>,
    /// True when the count bound stopped the exploration early.
    pub truncated: bool,
}

/// Breadth-first closure of `w` under the relations, applied in both
/// directions at every position, keeping words up to `length_bound` and at
/// most `count_bound` words.
pub fn rewrite_closure(pres: &SPresentation, w: &SWord, bounds: RewriteBounds) -> RewriteClosure {
    let mut words: BTreeMap<SWord, Vec<RewriteStep>> = BTreeMap::new();
    words.insert(w.clone(), Vec::new());
    let mut queue = VecDeque::from([w.clone()]);
    let mut truncated = false;
    'outer: while let Some(cur) = queue.pop_front() {
        for (ri, (a, b)) in pres.relations().iter().enumerate() {
            for (forward, from) in [(true, a), (false, b)] {
                if from.len() > cur.len() {
                    continue;
                }
                for position in 0..=cur.len() - from.len() {
                    let step = RewriteStep {
                        relation: ri,
                        forward,
                        position,
                    };
                    let Some(next) = step.apply(pres, &cur) else {
                        continue;
                    };
                    if next.len() > bounds.length_bound || words.contains_key(&next) {
                        continue;
                    }
                    if words.len() >= bounds.count_bound {
                        truncated = true;
                        break 'outer;
                    }
                    let mut trace = words[&cur].clone();
                    trace.push(step);
                    words.insert(next.clone(), trace);
                    queue.push_back(next);
                }
            }
        }
    }
    RewriteClosure { words, truncated }
}

/// The probes plus, for each probe, every rewritten word carrying the same
/// value; deduplicated, in first-seen order.
pub fn derived_probes(inst: &ProblemInstance, bounds: RewriteBounds) -> Vec<Probe> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in &inst.probes {
        if seen.insert(p.clone()) {
            out.push(p.clone());
        }
    }
    for p in &inst.probes {
        let closure = rewrite_closure(&inst.presentation, &p.word, bounds);
        for w in closure.words.into_keys() {
            let q = Probe {
                value: p.value.clone(),
                word: w,
            };
            if seen.insert(q.clone()) {
                out.push(q);
            }
        }
    }
    out
}

impl fmt::Display for SPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "generators: {}", self.generators.join(" "))?;
        for (a, b) in &self.relations {
            write!(
                f,
                "\nsrelation: {} = {}",
                self.format_word(a),
                self.format_word(b)
            )?;
        }
        Ok(())
    }
}
