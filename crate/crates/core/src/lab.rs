//! Worked examples and checked laws about weak divisors in concrete
//! semigroups.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::target::{
    Rational, Target, TargetDescriptor, TargetElement, TargetError, WeakVerdict, Word,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Status {
    Verified,
    VerifiedAtBound { bound: u64 },
    Failed { counterexample: String },
}

impl Status {
    pub fn passed(&self) -> bool {
        !matches!(self, Status::Failed { .. })
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Verified => write!(f, "verified"),
            Status::VerifiedAtBound { bound } => write!(f, "verified-at-bound({bound})"),
            Status::Failed { .. } => write!(f, "failed"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    #[serde(flatten)]
    pub status: Status,
    pub evidence: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabReport {
    pub suite: String,
    pub assertions: Vec<Assertion>,
}

impl LabReport {
    fn new(suite: &str) -> Self {
        LabReport {
            suite: suite.to_string(),
            assertions: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, status: Status, evidence: Vec<String>) {
        self.assertions.push(Assertion {
            name: name.to_string(),
            status,
            evidence,
        });
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.status.passed())
    }

    pub fn statuses(&self) -> Vec<Status> {
        self.assertions.iter().map(|a| a.status.clone()).collect()
    }
}

impl fmt::Display for LabReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "suite {}", self.suite)?;
        for a in &self.assertions {
            write!(f, "\n  [{}] {}", a.status, a.name)?;
            if let Status::Failed { counterexample } = &a.status {
                write!(f, "\n      counterexample: {counterexample}")?;
            }
            for e in &a.evidence {
                write!(f, "\n      {e}")?;
            }
        }
        Ok(())
    }
}

fn list<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

/// Elements of the additive semigroup generated by `gens` that do not
/// exceed `ceiling`, ascending.
pub fn rational_elements(
    gens: &[Rational],
    ceiling: &Rational,
) -> Result<Vec<Rational>, TargetError> {
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let t = Target::new(TargetDescriptor::RationalAdd(gens.to_vec()))?;
    Ok(t.elements_up_to(ceiling)?
        .into_iter()
        .filter_map(|e| match e {
            TargetElement::Rational(q) => Some(q),
            _ => None,
        })
        .collect())
}

/// `1/2, 2/3, …, k/(k+1)`.
pub fn harmonic_generators(k: u64) -> Vec<Rational> {
    (1..=k as i64).map(|n| Rational::new(n, n + 1)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakDivisorsOfOne {
    pub k: u64,
    pub d_max: u64,
    /// Weak divisors with the exponent that confirmed each.
    pub found: Vec<(Rational, u64)>,
    /// Every element `≤ 1`, the candidates.
    pub candidates: Vec<Rational>,
}

impl WeakDivisorsOfOne {
    pub fn count(&self) -> usize {
        self.found.len()
    }

    pub fn elements(&self) -> Vec<Rational> {
        self.found.iter().map(|(q, _)| *q).collect()
    }
}

/// Weak divisors of `{1}` in the semigroup generated by `n/(n+1)`, `n ≤ k`,
/// found by bounded search with exponents up to `d_max`.
pub fn weak_divisors_of_one(k: u64, d_max: u64) -> Result<WeakDivisorsOfOne, TargetError> {
    let t = Target::new(TargetDescriptor::RationalAdd(harmonic_generators(k)))?;
    let one = TargetElement::Rational(Rational::from_integer(1));
    let candidates = rational_elements(&harmonic_generators(k), &Rational::from_integer(1))?;
    let mut found = Vec::new();
    for &q in &candidates {
        if let Some(w) = t.search_weak_divisor(
            &TargetElement::Rational(q),
            std::slice::from_ref(&one),
            d_max,
        )? {
            found.push((q, w.exponent));
        }
    }
    Ok(WeakDivisorsOfOne {
        k,
        d_max,
        found,
        candidates,
    })
}

/// Growth of the weak divisors of `{1}` for `k = 1..=k_max`.
pub fn rational_growth(k_max: u64, d_max: u64) -> Result<LabReport, TargetError> {
    let mut report = LabReport::new("rational-growth");
    let runs: Vec<WeakDivisorsOfOne> = (1..=k_max)
        .map(|k| weak_divisors_of_one(k, d_max))
        .collect::<Result<_, _>>()?;
    let counts: Vec<usize> = runs.iter().map(WeakDivisorsOfOne::count).collect();
    let evidence: Vec<String> = runs
        .iter()
        .map(|r| {
            format!(
                "k={}: {} weak divisors {}",
                r.k,
                r.count(),
                list(r.elements())
            )
        })
        .collect();

    let drop = counts.windows(2).position(|w| w[1] < w[0]);
    let status = match drop {
        None => Status::VerifiedAtBound { bound: d_max },
        Some(i) => Status::Failed {
            counterexample: format!("count at k={} is {} < {}", i + 2, counts[i + 1], counts[i]),
        },
    };
    report.push("count is nondecreasing in k", status, evidence);

    let missing = runs.iter().find_map(|r| {
        let got: BTreeSet<Rational> = r.elements().into_iter().collect();
        r.candidates
            .iter()
            .find(|q| !got.contains(q))
            .map(|q| format!("k={}: {q} not confirmed", r.k))
    });
    let status = match missing {
        None => Status::VerifiedAtBound { bound: d_max },
        Some(c) => Status::Failed { counterexample: c },
    };
    let evidence = runs
        .iter()
        .map(|r| {
            let ds: Vec<String> = r.found.iter().map(|(q, d)| format!("{q}@d={d}")).collect();
            format!("k={}: {}", r.k, ds.join(" "))
        })
        .collect();
    report.push(
        "every element at most 1 is a weak divisor of {1}",
        status,
        evidence,
    );
    Ok(report)
}

/// Checks, on every element up to `sample_bound`, that idempotents are
/// identities, that `a·b > b` when `a` is not an identity, and that
/// divisors are not larger than what they divide.
pub fn check_ordered_laws(t: &Target, sample_bound: &Rational) -> Result<LabReport, TargetError> {
    if !t.is_ordered_additive() {
        return Err(TargetError::Unsupported(t.to_string()));
    }
    let elems = t.elements_up_to(sample_bound)?;
    let mag = |e: &TargetElement| t.magnitude(e).expect("ordered kind");
    let identity = t.identity_element();
    let mut report = LabReport::new("ordered-laws");
    let sample = format!("{} elements of {t} up to {sample_bound}", elems.len());

    let mut idempotents = Vec::new();
    let mut bad = None;
    for e in &elems {
        if t.multiply(e, e)? == *e {
            idempotents.push(t.format(e));
            if identity.as_ref() != Some(e) {
                bad.get_or_insert_with(|| {
                    format!("{} is idempotent but not an identity", t.format(e))
                });
            }
        }
    }
    let status = bad.map_or(Status::Verified, |c| Status::Failed { counterexample: c });
    report.push(
        "idempotents are identities",
        status,
        vec![
            sample.clone(),
            format!("idempotents: {}", list(idempotents)),
        ],
    );

    let mut bad = None;
    let mut pairs = 0u64;
    'outer: for a in elems.iter().filter(|a| identity.as_ref() != Some(*a)) {
        for b in &elems {
            pairs += 1;
            if mag(&t.multiply(a, b)?) <= mag(b) || mag(&t.multiply(b, a)?) <= mag(b) {
                bad = Some(format!("a={}, b={}", t.format(a), t.format(b)));
                break 'outer;
            }
        }
    }
    let status = bad.map_or(Status::Verified, |c| Status::Failed { counterexample: c });
    report.push(
        "a·b > b and b·a > b for a not an identity",
        status,
        vec![sample.clone(), format!("{pairs} pairs checked")],
    );

    let mut bad = None;
    let mut divisible = 0u64;
    'outer2: for a in &elems {
        for b in &elems {
            if t.is_divisor(a, b)?.is_some() {
                divisible += 1;
                if mag(a) > mag(b) {
                    bad = Some(format!("{} divides {}", t.format(a), t.format(b)));
                    break 'outer2;
                }
            }
        }
    }
    let status = bad.map_or(Status::Verified, |c| Status::Failed { counterexample: c });
    report.push(
        "a divides b implies a ≤ b",
        status,
        vec![sample, format!("{divisible} divisible pairs checked")],
    );
    Ok(report)
}

/// Longest run of `x` in `w`.
fn longest_run(w: &[char], x: char) -> usize {
    w.split(|&c| c != x).map(<[char]>::len).max().unwrap_or(0)
}

/// Weak divisors in the subsemigroup of the free semigroup on `x, y`
/// generated by `xx`, `xxx`, `y`, starting from `{xxxy}`.
pub fn non_idempotence_demo() -> LabReport {
    const BOUND: u64 = 6;
    let t: Target = "subfree[xx,xxx,y]".parse().expect("valid target");
    let w = |s: &str| TargetElement::Word(Word::from(s));
    let base = vec![w("xxxy")];
    let mut report = LabReport::new("non-idempotence");

    let verdict = t
        .is_weak_divisor(&w("xx"), &base, BOUND)
        .expect("valid input");
    // Every run of x in (xxxy)^d has length 3, and (xx)^d is a run of 2d.
    let mut block = Vec::new();
    let mut block_ok = true;
    for d in 1..=BOUND {
        let prod = t.power(&w("xxxy"), d).expect("valid");
        let TargetElement::Word(p) = &prod else {
            unreachable!()
        };
        let run = longest_run(p.as_slice(), 'x');
        let power = t.power(&w("xx"), d).expect("valid");
        let divides = t.divisor_witness(&power, &prod).is_some();
        block_ok &= !divides && (d == 1 || run < 2 * d as usize);
        block.push(format!(
            "d={d}: longest x-run {run}, needed {}, divides: {divides}",
            2 * d
        ));
    }
    let status = match (&verdict, block_ok) {
        (WeakVerdict::NoWithinBound(b), true) => Status::VerifiedAtBound { bound: *b },
        (WeakVerdict::No, true) => Status::Verified,
        (WeakVerdict::YesWithExponent(wit), _) => Status::Failed {
            counterexample: format!("exponent {} into {}", wit.exponent, wit.product),
        },
        _ => Status::Failed {
            counterexample: "block structure check failed".to_string(),
        },
    };
    report.push("xx is not a weak divisor of {xxxy}", status, block);

    let (status, evidence) = match t
        .is_weak_divisor(&w("xxx"), &base, BOUND)
        .expect("valid input")
    {
        WeakVerdict::YesWithExponent(wit) if wit.verify(&t, &w("xxx"), &base) => (
            Status::Verified,
            vec![format!(
                "d={}, {} · xxx · {} = {}",
                wit.exponent, wit.divisor.left, wit.divisor.right, wit.product
            )],
        ),
        v => (
            Status::Failed {
                counterexample: format!("{v:?}"),
            },
            Vec::new(),
        ),
    };
    report.push("xxx is a weak divisor of {xxxy}", status, evidence);

    let first = t.weak_divisors(&base, BOUND).expect("valid input");
    let level1: Vec<TargetElement> = first.elements.iter().cloned().collect();
    let mut evidence = vec![format!("WD({{xxxy}}) ⊇ {} (d ≤ {BOUND})", list(&level1))];
    let status = match t
        .is_weak_divisor(&w("xx"), &level1, BOUND)
        .expect("valid input")
    {
        WeakVerdict::YesWithExponent(wit) if wit.verify(&t, &w("xx"), &level1) => {
            let fs: Vec<String> = wit.factors.iter().map(ToString::to_string).collect();
            evidence.push(format!(
                "d={}, (xx)^{} divides {} = {}",
                wit.exponent,
                wit.exponent,
                fs.join("·"),
                wit.product
            ));
            Status::Verified
        }
        v => Status::Failed {
            counterexample: format!("{v:?}"),
        },
    };
    report.push("xx is a weak divisor of WD({xxxy})", status, evidence);
    report
}

/// All nonempty words over `alphabet` of length at most `max_len`.
pub fn words_up_to(alphabet: &[char], max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &c in alphabet {
                let mut v: Vec<char> = w.clone();
                v.push(c);
                out.push(Word(v.clone()));
                next.push(v);
            }
        }
        frontier = next;
    }
    out
}

/// Nonempty subsets of `items` with at most `max_size` members.
fn small_subsets<T: Clone>(items: &[T], max_size: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = Vec::new();
    fn go<T: Clone>(
        items: &[T],
        start: usize,
        cur: &mut Vec<T>,
        max: usize,
        out: &mut Vec<Vec<T>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, i + 1, cur, max, out);
            cur.pop();
        }
    }
    go(items, 0, &mut Vec::new(), max_size, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteBounds {
    pub word_len: usize,
    pub set_size: usize,
    pub d_max: u64,
    pub vector_entry: u64,
}

impl Default for SuiteBounds {
    fn default() -> Self {
        SuiteBounds {
            word_len: 4,
            set_size: 2,
            d_max: 4,
            vector_entry: 3,
        }
    }
}

/// Free-semigroup claim: weak divisors found by bounded search are exactly
/// the factors of the members, over `{a, b}`.
pub fn free_claim(b: SuiteBounds) -> LabReport {
    let t: Target = "free[a,b]".parse().expect("valid target");
    let words = words_up_to(&['a', 'b'], b.word_len);
    let elems: Vec<TargetElement> = words.iter().cloned().map(TargetElement::Word).collect();
    let mut checked = 0u64;
    let mut bad = None;
    for set in small_subsets(&elems, b.set_size) {
        checked += 1;
        let factor_set: BTreeSet<TargetElement> = set
            .iter()
            .flat_map(|e| match e {
                TargetElement::Word(w) => (0..w.len())
                    .flat_map(|i| (i + 1..=w.len()).map(move |j| Word(w.0[i..j].to_vec())))
                    .collect::<Vec<_>>(),
                _ => Vec::new(),
            })
            .map(TargetElement::Word)
            .collect();
        let searched: BTreeSet<TargetElement> = elems
            .iter()
            .filter(|s| {
                t.search_weak_divisor(s, &set, b.d_max)
                    .expect("valid input")
                    .is_some()
            })
            .cloned()
            .collect();
        let closed = t
            .weak_divisors(&set, b.d_max)
            .expect("valid input")
            .elements;
        if searched != factor_set || closed != factor_set {
            bad = Some(format!(
                "A={}: search {} vs factors {}",
                list(&set),
                list(&searched),
                list(&factor_set)
            ));
            break;
        }
    }
    let spot = t
        .weak_divisors(&[TargetElement::word("ab")], b.d_max)
        .expect("valid input");
    let mut report = LabReport::new("free-claim");
    let status = bad.map_or(Status::VerifiedAtBound { bound: b.d_max }, |c| {
        Status::Failed { counterexample: c }
    });
    report.push(
        "weak divisors of a set in a free semigroup are the factors of its members",
        status,
        vec![
            format!(
                "{checked} sets over {{a,b}}, member length ≤ {}, |A| ≤ {}, d ≤ {}",
                b.word_len, b.set_size, b.d_max
            ),
            format!("WD({{ab}}) = {}", list(&spot.elements)),
        ],
    );
    report
}

/// Commutative claim: taking weak divisors twice gives nothing new, over
/// 2-dimensional vectors.
pub fn commutative_idempotence(b: SuiteBounds) -> LabReport {
    let t: Target = "freecomm[a,b]".parse().expect("valid target");
    let elems: Vec<TargetElement> = (0..=b.vector_entry)
        .flat_map(|x| (0..=b.vector_entry).map(move |y| vec![x, y]))
        .filter(|v| v != &[0, 0])
        .map(TargetElement::Vector)
        .collect();
    let mut checked = 0u64;
    let mut bad = None;
    for set in small_subsets(&elems, b.set_size) {
        checked += 1;
        let once: Vec<TargetElement> = t
            .weak_divisors_bounded(&set, b.d_max)
            .expect("valid input")
            .into_iter()
            .collect();
        let twice: Vec<TargetElement> = t
            .weak_divisors_bounded(&once, b.d_max)
            .expect("valid input")
            .into_iter()
            .collect();
        let exact = t
            .weak_divisors(&set, b.d_max)
            .expect("valid input")
            .elements;
        let exact_twice: Vec<TargetElement> = exact.iter().cloned().collect();
        let exact_twice = t
            .weak_divisors(&exact_twice, b.d_max)
            .expect("valid input")
            .elements;
        if once != twice || exact != exact_twice {
            bad = Some(format!(
                "A={}: WD {} vs WD∘WD {}",
                list(&set),
                list(&once),
                list(&twice)
            ));
            break;
        }
    }
    let mut report = LabReport::new("commutative-idempotence");
    let status = bad.map_or(Status::VerifiedAtBound { bound: b.d_max }, |c| {
        Status::Failed { counterexample: c }
    });
    report.push(
        "weak divisors of weak divisors are weak divisors in a free commutative semigroup",
        status,
        vec![format!(
            "{checked} sets of 2-dimensional vectors, entries ≤ {}, |A| ≤ {}, d ≤ {}",
            b.vector_entry, b.set_size, b.d_max
        )],
    );
    report
}

/// Both structural claims in one report.
pub fn structural_claims_suite(b: SuiteBounds) -> LabReport {
    let mut report = LabReport::new("structural-claims");
    report.assertions.extend(free_claim(b).assertions);
    report
        .assertions
        .extend(commutative_idempotence(b).assertions);
    report
}
