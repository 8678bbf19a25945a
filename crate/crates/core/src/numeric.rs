//! Nonnegative and positive integer combinations of a fixed multiset of
//! naturals (the coin problem), solved by suffix reachability tables.

use serde::{Deserialize, Serialize};

/// Which coefficients a combination may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Coefficients in ℕ.
    Nonnegative,
    /// Coefficients in ℕ \ {0}.
    Positive,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Nonnegative => "nonnegative",
            Mode::Positive => "positive",
        }
    }
}

/// Finds `t` with `Σ t_i · coeffs_i = c`, honoring `mode`.
///
/// The returned vector is the lexicographically smallest solution. Zero
/// coefficients contribute nothing: they get `t_i = 0` in nonnegative mode
/// and `t_i = 1` in positive mode.
pub fn numerical_feasible(c: u64, coeffs: &[u64], mode: Mode) -> Option<Vec<u64>> {
    let base: u64 = match mode {
        Mode::Nonnegative => 0,
        Mode::Positive => 1,
    };
    let mandatory: u64 = coeffs.iter().map(|&a| a * base).sum();
    let rest = c.checked_sub(mandatory)?;
    let mut t = lexmin_combination(rest, coeffs)?;
    for ti in &mut t {
        *ti += base;
    }
    Some(t)
}

/// `reach[i][v]` is true when `v` is a nonnegative combination of
/// `coeffs[i..]`.
fn suffix_reachability(limit: u64, coeffs: &[u64]) -> Vec<Vec<bool>> {
    let width = limit as usize + 1;
    let mut reach = vec![vec![false; width]; coeffs.len() + 1];
    reach[coeffs.len()][0] = true;
    for i in (0..coeffs.len()).rev() {
        let a = coeffs[i] as usize;
        for v in 0..width {
            let mut ok = reach[i + 1][v];
            if !ok && a > 0 && v >= a {
                ok = reach[i][v - a];
            }
            reach[i][v] = ok;
        }
    }
    reach
}

fn lexmin_combination(c: u64, coeffs: &[u64]) -> Option<Vec<u64>> {
    let reach = suffix_reachability(c, coeffs);
    if !reach[0][c as usize] {
        return None;
    }
    let mut remaining = c;
    let mut t = Vec::with_capacity(coeffs.len());
    for (i, &a) in coeffs.iter().enumerate() {
        if a == 0 {
            t.push(0);
            continue;
        }
        let mut k = 0;
        while !reach[i + 1][(remaining - k * a) as usize] {
            k += 1;
        }
        remaining -= k * a;
        t.push(k);
    }
    debug_assert_eq!(remaining, 0);
    Some(t)
}

/// `out[v]` is true when `v ≤ limit` is a nonnegative combination of `coeffs`.
pub fn reachable_up_to(limit: u64, coeffs: &[u64]) -> Vec<bool> {
    let width = limit as usize + 1;
    let mut out = vec![false; width];
    out[0] = true;
    for v in 1..width {
        out[v] = coeffs
            .iter()
            .any(|&a| a > 0 && a as usize <= v && out[v - a as usize]);
    }
    out
}

pub fn is_representable(c: u64, coeffs: &[u64]) -> bool {
    reachable_up_to(c, coeffs)[c as usize]
}
