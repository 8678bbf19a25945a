//! Replacing two equations by one with the same solutions inside the domains.
//!
//! `(v₁ = p₁, v₂ = p₂)` becomes `v₁^d·v₂ = p₁^d·p₂`. Over a cancellative,
//! power-cancellative target this has the same solutions as the pair once
//! `d` exceeds every size that `v₂` or `p₂` can reach inside the domains.

use std::collections::BTreeSet;

use crate::target::{Target, TargetElement};

use super::search::{Constraint, Search};
use super::{DomainBounds, SolverError, TEquation};

/// Every assignment of `vars` (ascending) within the domains that satisfies
/// all `equations`.
pub fn solution_set(
    target: &Target,
    equations: &[TEquation],
    vars: &BTreeSet<usize>,
    bounds: &DomainBounds,
) -> BTreeSet<Vec<TargetElement>> {
    let constraints = equations.iter().map(Constraint::Equation).collect();
    let vars: Vec<usize> = vars.iter().copied().collect();
    Search::new(target, vars, &bounds.domains, constraints)
        .all()
        .into_iter()
        .collect()
}

/// Largest coordinate, used to bound the combining exponent.
fn size(e: &TargetElement) -> u64 {
    match e {
        TargetElement::Nat(k) => *k,
        TargetElement::Vector(v) => v.iter().copied().max().unwrap_or(0),
        _ => 0,
    }
}

fn coords(e: &TargetElement) -> Vec<u64> {
    match e {
        TargetElement::Vector(v) => v.clone(),
        e => vec![size(e)],
    }
}

/// Largest coordinate that `pattern` can take with values in the domains.
fn max_pattern_size(pattern: &[usize], bounds: &DomainBounds) -> u64 {
    let mut total: Vec<u64> = Vec::new();
    for &x in pattern {
        for e in bounds.get(x) {
            let c = coords(e);
            if total.len() < c.len() {
                total.resize(c.len(), 0);
            }
        }
        for (i, t) in total.iter_mut().enumerate() {
            *t += bounds
                .get(x)
                .iter()
                .map(|e| coords(e)[i])
                .max()
                .unwrap_or(0);
        }
    }
    total.into_iter().max().unwrap_or(0)
}

fn combined(target: &Target, eq1: &TEquation, eq2: &TEquation, d: u64) -> TEquation {
    if d == 0 {
        return eq2.clone();
    }
    let v = target
        .power(&eq1.value, d)
        .and_then(|p| target.multiply(&p, &eq2.value))
        .expect("equation values lie in the target");
    TEquation::new(v, eq1.pattern.repeat(d as usize).concat(&eq2.pattern))
}

/// The smallest `d` for which `v₁^d·v₂ = p₁^d·p₂` has, within `bounds`, the
/// same solutions as the pair, with that combined equation.
pub fn combine_pair(
    target: &Target,
    eq1: &TEquation,
    eq2: &TEquation,
    bounds: &DomainBounds,
) -> Result<(u64, TEquation), SolverError> {
    if !target.supports_combination() {
        return Err(SolverError::Unsupported(target.to_string()));
    }
    let vars: BTreeSet<usize> = eq1.variables().union(&eq2.variables()).copied().collect();
    let want = solution_set(target, &[eq1.clone(), eq2.clone()], &vars, bounds);
    let d_star = 1 + size(&eq2.value).max(max_pattern_size(eq2.pattern.symbols(), bounds));
    for d in 0..=d_star {
        let c = combined(target, eq1, eq2, d);
        if solution_set(target, std::slice::from_ref(&c), &vars, bounds) == want {
            return Ok((d, c));
        }
    }
    Err(SolverError::CombinationBoundExceeded(d_star))
}

/// Left fold of [`combine_pair`].
pub fn reduce_finite_subset(
    target: &Target,
    equations: &[TEquation],
    bounds: &DomainBounds,
) -> Result<TEquation, SolverError> {
    let (first, rest) = equations.split_first().ok_or(SolverError::EmptySystem)?;
    if !target.supports_combination() {
        return Err(SolverError::Unsupported(target.to_string()));
    }
    rest.iter().try_fold(first.clone(), |acc, eq| {
        combine_pair(target, &acc, eq, bounds).map(|(_, c)| c)
    })
}
