//! Line-oriented input files.
//!
//! Rank problems:
//!
//! ```text
//! modules: A B
//! relation: R = A + 2 B
//! relation: R = 2 A + B
//! ```
//!
//! with optional `mode: nonnegative|positive` and `denominator: N` lines.
//! Extension problems:
//!
//! ```text
//! target: nat
//! generators: x y
//! srelation: x y = y x
//! probe: 3 = x y y
//! ```
//!
//! `#` starts a comment. Names must be declared before they are used.

use std::fmt;

use thiserror::Error;

use crate::numeric::Mode;
use crate::presentation::{Probe, ProblemInstance, SPresentation};
use crate::rank::{RankProblem, FREE};
use crate::target::Target;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Nonblank lines with comments removed, as `(line number, key, value)`.
fn entries(text: &str) -> Result<Vec<(usize, &str, &str)>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| err(i + 1, format!("expected 'key: value', found '{line}'")))?;
        out.push((i + 1, key.trim(), value.trim()));
    }
    Ok(out)
}

pub fn parse_mode(s: &str) -> Option<Mode> {
    match s {
        "nonnegative" | "nonneg" => Some(Mode::Nonnegative),
        "positive" | "pos" => Some(Mode::Positive),
        _ => None,
    }
}

/// Parses `2 R + A + 3 B` into a vector over `R` and `modules`.
fn parse_sum(s: &str, modules: &[String], line: usize) -> Result<Vec<u64>, ParseError> {
    let mut v = vec![0u64; modules.len() + 1];
    for term in s.split('+') {
        let term = term.trim();
        let split = term
            .find(|c: char| !c.is_ascii_digit())
            .ok_or_else(|| err(line, format!("term '{term}' has no module")))?;
        let (coeff, name) = term.split_at(split);
        let coeff: u64 = if coeff.is_empty() {
            1
        } else {
            coeff
                .parse()
                .map_err(|_| err(line, format!("bad coefficient in '{term}'")))?
        };
        let name = name.trim();
        let idx = if name == FREE {
            0
        } else {
            modules
                .iter()
                .position(|m| m == name)
                .ok_or_else(|| err(line, format!("undeclared module '{name}'")))?
                + 1
        };
        v[idx] += coeff;
    }
    Ok(v)
}

pub fn parse_rank_document(text: &str) -> Result<RankProblem, ParseError> {
    let mut modules: Option<Vec<String>> = None;
    let mut relations = Vec::new();
    let mut mode = None;
    let mut denominator = None;
    for (line, key, value) in entries(text)? {
        match key {
            "modules" => {
                if modules.is_some() {
                    return Err(err(line, "modules declared twice"));
                }
                let names: Vec<String> = value.split_whitespace().map(String::from).collect();
                for (i, n) in names.iter().enumerate() {
                    if n == FREE {
                        return Err(err(line, format!("'{FREE}' is reserved")));
                    }
                    if !n.chars().all(|c| c.is_alphanumeric() || c == '_')
                        || n.starts_with(|c: char| c.is_ascii_digit())
                    {
                        return Err(err(line, format!("bad module name '{n}'")));
                    }
                    if names[..i].contains(n) {
                        return Err(err(line, format!("module '{n}' declared twice")));
                    }
                }
                modules = Some(names);
            }
            "relation" => {
                let ms = modules
                    .as_ref()
                    .ok_or_else(|| err(line, "relation before modules"))?;
                let (a, b) = value
                    .split_once('=')
                    .ok_or_else(|| err(line, "relation needs '='"))?;
                let a = parse_sum(a, ms, line)?;
                let b = parse_sum(b, ms, line)?;
                if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
                    return Err(err(line, "relation side is zero"));
                }
                relations.push((a, b));
            }
            "mode" => {
                if mode.is_some() {
                    return Err(err(line, "mode given twice"));
                }
                mode = Some(
                    parse_mode(value)
                        .ok_or_else(|| err(line, format!("unknown mode '{value}'")))?,
                );
            }
            "denominator" => {
                if denominator.is_some() {
                    return Err(err(line, "denominator given twice"));
                }
                let n: u64 = value.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                    err(
                        line,
                        format!("denominator must be a positive integer, found '{value}'"),
                    )
                })?;
                denominator = Some(n);
            }
            _ => return Err(err(line, format!("unknown key '{key}'"))),
        }
    }
    let modules = modules.ok_or_else(|| err(0, "missing 'modules:' line"))?;
    Ok(RankProblem::new(modules, relations)
        .with_mode(mode.unwrap_or(Mode::Nonnegative))
        .with_denominator(denominator.unwrap_or(1)))
}

pub fn parse_extension_document(text: &str) -> Result<ProblemInstance, ParseError> {
    let mut target: Option<Target> = None;
    let mut gens: Option<SPresentation> = None;
    let mut relations = Vec::new();
    let mut probes = Vec::new();
    for (line, key, value) in entries(text)? {
        let word = |s: &str, p: &SPresentation| {
            p.parse_word(s.trim())
                .map_err(|e| err(line, format!("{e} in '{}'", s.trim())))
        };
        match key {
            "target" => {
                if target.is_some() {
                    return Err(err(line, "target declared twice"));
                }
                target = Some(value.parse().map_err(|e| err(line, format!("{e}")))?);
            }
            "generators" => {
                if gens.is_some() {
                    return Err(err(line, "generators declared twice"));
                }
                let names: Vec<String> = value.split_whitespace().map(String::from).collect();
                if names.is_empty() {
                    return Err(err(line, "no generators"));
                }
                for (i, n) in names.iter().enumerate() {
                    if names[..i].contains(n) {
                        return Err(err(line, format!("generator '{n}' declared twice")));
                    }
                }
                gens = Some(SPresentation::new(names, Vec::new()));
            }
            "srelation" => {
                let p = gens
                    .as_ref()
                    .ok_or_else(|| err(line, "srelation before generators"))?;
                let (a, b) = value
                    .split_once('=')
                    .ok_or_else(|| err(line, "srelation needs '='"))?;
                relations.push((word(a, p)?, word(b, p)?));
            }
            "probe" => {
                let t = target
                    .as_ref()
                    .ok_or_else(|| err(line, "probe before target"))?;
                let p = gens
                    .as_ref()
                    .ok_or_else(|| err(line, "probe before generators"))?;
                let (v, w) = value
                    .split_once('=')
                    .ok_or_else(|| err(line, "probe needs '='"))?;
                let value = t.parse_element(v).map_err(|e| err(line, format!("{e}")))?;
                probes.push(Probe {
                    value,
                    word: word(w, p)?,
                });
            }
            _ => return Err(err(line, format!("unknown key '{key}'"))),
        }
    }
    let target = target.ok_or_else(|| err(0, "missing 'target:' line"))?;
    let gens = gens.ok_or_else(|| err(0, "missing 'generators:' line"))?;
    Ok(ProblemInstance {
        presentation: SPresentation::new(gens.generators().to_vec(), relations),
        target,
        probes,
    })
}

/// Prints an extension problem in the input grammar.
pub struct ExtensionDocument<'a>(pub &'a ProblemInstance);

impl fmt::Display for ExtensionDocument<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inst = self.0;
        writeln!(f, "target: {}", inst.target)?;
        write!(f, "{}", inst.presentation)?;
        for p in &inst.probes {
            write!(
                f,
                "\nprobe: {} = {}",
                inst.target.format(&p.value),
                inst.presentation.format_word(&p.word)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::SWord;
    use crate::target::TargetElement;
    use proptest::prelude::*;

    #[test]
    fn rank_file() {
        let p = parse_rank_document(
            "# two modules\nmodules: A B\nrelation: R = A + 2 B\nrelation: R = 2A + B\n",
        )
        .unwrap();
        assert_eq!(p.relations[1], (vec![1, 0, 0], vec![0, 2, 1]));
        assert_eq!(p.mode, Mode::Nonnegative);
        let q = parse_rank_document(&p.to_string()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rank_file_errors_carry_lines() {
        let e = parse_rank_document("modules: A B\nrelation: R = A + C\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("'C'"));
        assert_eq!(
            parse_rank_document("relation: R = A\n").unwrap_err().line,
            1
        );
        assert_eq!(
            parse_rank_document("modules: A\nmode: sideways\n")
                .unwrap_err()
                .line,
            2
        );
        assert!(parse_rank_document("modules: A\nrelation: R = 0 A\n").is_err());
    }

    #[test]
    fn extension_file() {
        let inst = parse_extension_document(
            "target: nat\ngenerators: x y\nsrelation: x x = x x x\nprobe: 3 = x y y\nprobe: 2 = xy\n",
        )
        .unwrap();
        assert_eq!(inst.probes[1].word, SWord(vec![0, 1]));
        assert_eq!(inst.probes[0].value, TargetElement::Nat(3));
        assert_eq!(inst.presentation.relations().len(), 1);
        let text = ExtensionDocument(&inst).to_string();
        assert_eq!(parse_extension_document(&text).unwrap(), inst);
    }

    #[test]
    fn extension_file_errors_carry_lines() {
        let e =
            parse_extension_document("target: nat\ngenerators: x\nprobe: 1 = x z\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_extension_document("target: nat\nprobe: 1 = x\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_extension_document("target: bogus\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e =
            parse_extension_document("target: posnat\ngenerators: x\nprobe: 0 = x\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    fn arb_rank() -> impl Strategy<Value = RankProblem> {
        (1usize..=3).prop_flat_map(|k| {
            let side = prop::collection::vec(0u64..=4, k + 1)
                .prop_filter("nonzero", |v| v.iter().any(|&x| x > 0));
            (
                prop::collection::vec((side.clone(), side), 0..=4),
                prop::bool::ANY,
                1u64..=5,
            )
                .prop_map(move |(rels, pos, n)| {
                    let modules = (0..k).map(|i| format!("M{i}")).collect();
                    let mode = if pos {
                        Mode::Positive
                    } else {
                        Mode::Nonnegative
                    };
                    RankProblem::new(modules, rels)
                        .with_mode(mode)
                        .with_denominator(n)
                })
        })
    }

    fn arb_target() -> impl Strategy<Value = &'static str> {
        prop::sample::select(vec![
            "nat",
            "posnat",
            "scalednat(3)",
            "free[a,b]",
            "freecomm[a,b]",
            "subfree[xx,xxx,y]",
            "rational[1/2,2/3]",
        ])
    }

    fn arb_extension() -> impl Strategy<Value = ProblemInstance> {
        let word = || prop::collection::vec(0usize..3, 1..=4).prop_map(SWord);
        (
            arb_target(),
            prop::collection::vec((word(), word()), 0..=3),
            prop::collection::vec((0u64..50, word()), 1..=3),
        )
            .prop_map(|(t, rels, probes)| {
                let target: Target = t.parse().unwrap();
                let names: Vec<String> = ["x", "y", "zz"].iter().map(|s| s.to_string()).collect();
                let probes = probes
                    .into_iter()
                    .map(|(seed, word)| Probe {
                        value: sample_element(&target, seed),
                        word,
                    })
                    .collect();
                ProblemInstance {
                    presentation: SPresentation::new(names, rels),
                    target,
                    probes,
                }
            })
    }

    fn sample_element(t: &Target, seed: u64) -> TargetElement {
        let lit = match t.to_string().as_str() {
            "free[a,b]" => ["ab", "ba", "aab", "b"][seed as usize % 4].to_string(),
            "freecomm[a,b]" => format!("({},{})", seed % 3 + 1, seed % 2),
            "subfree[xx,xxx,y]" => ["xxy", "yxxx", "y", "xxxxx"][seed as usize % 4].to_string(),
            "rational[1/2,2/3]" => format!("{}/6", 3 + seed % 7 * 3 + 4 * (seed % 2)),
            "scalednat(3)" => format!("{}/3", seed % 9),
            _ => format!("{}", seed % 9 + 1),
        };
        t.parse_element(&lit).unwrap()
    }

    proptest! {
        #[test]
        fn rank_documents_round_trip(p in arb_rank()) {
            let text = p.to_string();
            prop_assert_eq!(parse_rank_document(&text).unwrap(), p);
        }

        #[test]
        fn extension_documents_round_trip(inst in arb_extension()) {
            let text = ExtensionDocument(&inst).to_string();
            let parsed = parse_extension_document(&text).unwrap();
            prop_assert_eq!(&parsed, &inst);
            prop_assert_eq!(ExtensionDocument(&parsed).to_string(), text);
        }
    }
}
