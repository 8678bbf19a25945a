//! Deciding whether a homomorphism `h: S → T` with prescribed values on the
//! probe words exists.
//!
//! Any such `h` maps each generator `x` to a divisor of `g(p)` for every probe
//! `p` whose word contains `x`, so the search over the product of those finite
//! divisor sets is complete. A candidate map passes when it satisfies every
//! probe equation and every defining relation of S.

mod combine;
mod search;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::presentation::{
    derived_probes, validate_instance, ProblemInstance, RewriteBounds, SPresentation, SWord,
    Violation,
};
use crate::target::{Target, TargetElement, TargetError};

pub use combine::{combine_pair, reduce_finite_subset, solution_set};
pub use search::SearchStats;
use search::{evaluate, Constraint, Search};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("invalid instance: {}", list(.0))]
    Invalid(Vec<Violation>),
    #[error("pair combination is not available for target {0}")]
    Unsupported(String),
    #[error("no equations given")]
    EmptySystem,
    #[error("no combining exponent found up to {0}")]
    CombinationBoundExceeded(u64),
    #[error(transparent)]
    Target(#[from] TargetError),
}

fn list(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// `value = pattern(η)`, an equation in the unknowns `η(x)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TEquation {
    pub value: TargetElement,
    pub pattern: SWord,
}

impl TEquation {
    pub fn new(value: TargetElement, pattern: SWord) -> Self {
        TEquation { value, pattern }
    }

    /// Distinct variables, ascending.
    pub fn variables(&self) -> BTreeSet<usize> {
        self.pattern.symbols().iter().copied().collect()
    }

    /// Renders as `5 = 2·x + 3·y` for commutative targets and `ab = x y`
    /// otherwise.
    pub fn display(&self, target: &Target, names: &[String]) -> String {
        let name = |x: usize| names.get(x).cloned().unwrap_or_else(|| format!("?{x}"));
        let rhs = if target.is_commutative() {
            let mut counts = std::collections::BTreeMap::new();
            for &x in self.pattern.symbols() {
                *counts.entry(x).or_insert(0u64) += 1;
            }
            counts
                .into_iter()
                .map(|(x, c)| {
                    if c == 1 {
                        name(x)
                    } else {
                        format!("{c}·{}", name(x))
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        } else {
            self.pattern
                .symbols()
                .iter()
                .map(|&x| name(x))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("{} = {rhs}", target.format(&self.value))
    }
}

/// The finite search domain `T_x` of each generator, indexed by generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainBounds {
    pub domains: Vec<Vec<TargetElement>>,
}

impl DomainBounds {
    pub fn get(&self, x: usize) -> &[TargetElement] {
        &self.domains[x]
    }

    pub fn first_empty(&self) -> Option<usize> {
        self.domains.iter().position(Vec::is_empty)
    }
}

/// Values `η(x)` for every generator, indexed by generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment(pub Vec<TargetElement>);

impl Assignment {
    pub fn get(&self, x: usize) -> &TargetElement {
        &self.0[x]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotExistsReason {
    /// No element of T divides every probe value whose word contains the
    /// generator.
    EmptyDomain { generator: usize },
    /// This equation of the probe system has no solution on its own.
    RealizationFailed { equation: TEquation },
    /// Every map in the product of the domains fails. For targets that admit
    /// pair combination, `combined` is a single equation whose solution set
    /// within the domains equals that of all probes together, when that set
    /// is already empty.
    SearchExhausted { combined: Option<TEquation> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exists(Assignment),
    NotExists(NotExistsReason),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub verdict: Verdict,
    pub domains: DomainBounds,
    pub stats: SearchStats,
}

/// `T_x` is the intersection, over the probes whose word contains `x`, of
/// the divisors of the probe value.
pub fn domain_bounds(inst: &ProblemInstance) -> DomainBounds {
    let n = inst.presentation.generators().len();
    let domains = (0..n)
        .map(|x| {
            let mut acc: Option<BTreeSet<TargetElement>> = None;
            for p in inst.probes.iter().filter(|p| p.word.contains(x)) {
                let divs = inst.target.divisors_unchecked(&p.value);
                acc = Some(match acc {
                    None => divs,
                    Some(a) => a.intersection(&divs).cloned().collect(),
                });
            }
            acc.unwrap_or_default().into_iter().collect()
        })
        .collect();
    DomainBounds { domains }
}

/// Per-equation result of [`realization_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realization {
    /// A solution, as `(variable, value)` pairs in ascending variable order.
    Solvable(Vec<(usize, TargetElement)>),
    Unsolvable,
}

/// Solves each equation on its own, exhaustively within the bounds.
pub fn realization_check(
    target: &Target,
    equations: &[TEquation],
    bounds: &DomainBounds,
) -> Vec<Realization> {
    equations
        .iter()
        .map(|eq| {
            let vars: Vec<usize> = eq.variables().into_iter().collect();
            let mut search = Search::new(
                target,
                vars.clone(),
                &bounds.domains,
                vec![Constraint::Equation(eq)],
            );
            match search.first() {
                Some(sol) => Realization::Solvable(vars.into_iter().zip(sol).collect()),
                None => Realization::Unsolvable,
            }
        })
        .collect()
}

/// A defining relation whose two sides evaluate differently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFailure {
    pub relation: usize,
    pub lhs: TargetElement,
    pub rhs: TargetElement,
}

/// Checks every defining relation under `eta`; reports the first failure.
pub fn verify_homomorphism(
    target: &Target,
    pres: &SPresentation,
    eta: &Assignment,
) -> Result<(), RelationFailure> {
    for (i, (a, b)) in pres.relations().iter().enumerate() {
        let lhs = evaluate(target, a, |x| eta.get(x).clone());
        let rhs = evaluate(target, b, |x| eta.get(x).clone());
        if lhs != rhs {
            return Err(RelationFailure {
                relation: i,
                lhs,
                rhs,
            });
        }
    }
    Ok(())
}

/// Evaluates a probe word under `eta`.
pub fn evaluate_word(target: &Target, w: &SWord, eta: &Assignment) -> TargetElement {
    evaluate(target, w, |x| eta.get(x).clone())
}

/// Exhaustive search for `η` over the product of the domains.
///
/// Generators are assigned in declaration order, values tried in canonical
/// order, and the first solution is returned. The realization check runs
/// first on the probes and their rewritten forms so that a single unsolvable
/// equation is reported as such.
pub fn extend_homomorphism(
    inst: &ProblemInstance,
    bounds: RewriteBounds,
) -> Result<SolveReport, SolverError> {
    validate_instance(inst).map_err(SolverError::Invalid)?;
    let target = &inst.target;
    let domains = domain_bounds(inst);
    if let Some(generator) = domains.first_empty() {
        return Ok(SolveReport {
            verdict: Verdict::NotExists(NotExistsReason::EmptyDomain { generator }),
            domains,
            stats: SearchStats::default(),
        });
    }

    let equations: Vec<TEquation> = derived_probes(inst, bounds)
        .into_iter()
        .map(|p| TEquation::new(p.value, p.word))
        .collect();
    for (eq, r) in equations
        .iter()
        .zip(realization_check(target, &equations, &domains))
    {
        if r == Realization::Unsolvable {
            return Ok(SolveReport {
                verdict: Verdict::NotExists(NotExistsReason::RealizationFailed {
                    equation: eq.clone(),
                }),
                domains,
                stats: SearchStats::default(),
            });
        }
    }

    let probe_eqs: Vec<TEquation> = inst
        .probes
        .iter()
        .map(|p| TEquation::new(p.value.clone(), p.word.clone()))
        .collect();
    let mut constraints: Vec<Constraint<'_>> = probe_eqs.iter().map(Constraint::Equation).collect();
    constraints.extend(
        inst.presentation
            .relations()
            .iter()
            .map(|(a, b)| Constraint::Relation(a, b)),
    );
    let vars: Vec<usize> = (0..inst.presentation.generators().len()).collect();
    let mut search = Search::new(target, vars, &domains.domains, constraints);
    let found = search.first();
    let stats = search.stats;

    let verdict = match found {
        Some(values) => {
            let eta = Assignment(values);
            debug_assert!(verify_homomorphism(target, &inst.presentation, &eta).is_ok());
            debug_assert!(inst
                .probes
                .iter()
                .all(|p| evaluate_word(target, &p.word, &eta) == p.value));
            Verdict::Exists(eta)
        }
        None => {
            let combined = if target.supports_combination() {
                combined_certificate(target, &probe_eqs, &domains)
            } else {
                None
            };
            Verdict::NotExists(NotExistsReason::SearchExhausted { combined })
        }
    };
    Ok(SolveReport {
        verdict,
        domains,
        stats,
    })
}

/// Largest domain product for which the combined certificate is attempted.
const CERTIFICATE_SPACE_LIMIT: usize = 200_000;

fn combined_certificate(
    target: &Target,
    equations: &[TEquation],
    bounds: &DomainBounds,
) -> Option<TEquation> {
    let vars: BTreeSet<usize> = equations.iter().flat_map(|e| e.variables()).collect();
    let space = vars
        .iter()
        .try_fold(1usize, |acc, &x| acc.checked_mul(bounds.get(x).len()))?;
    if space > CERTIFICATE_SPACE_LIMIT {
        return None;
    }
    let combined = reduce_finite_subset(target, equations, bounds).ok()?;
    solution_set(target, std::slice::from_ref(&combined), &vars, bounds)
        .is_empty()
        .then_some(combined)
}
