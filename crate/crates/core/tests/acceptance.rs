//! Acceptance suite: ten criteria, each checked against an oracle written
//! here independently of the library, with a runtime limit. Prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semiext::lab::{self, Status, SuiteBounds};
use semiext::numeric::{numerical_feasible, Mode};
use semiext::presentation::{Probe, ProblemInstance, RewriteBounds, SPresentation, SWord};
use semiext::rank::{
    decide, find_rank_function, find_witness, RankProblem, RankVerdict, WitnessBounds,
};
use semiext::solver::{
    combine_pair, extend_homomorphism, solution_set, DomainBounds, TEquation, Verdict,
};
use semiext::target::{Rational, Target, TargetElement, WeakVerdict};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------- shared oracles ----------

/// Every `t ∈ {lo..=hi}^k` in lexicographic order.
fn boxes(k: usize, lo: u64, hi: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn dot(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rank functions with module values in `lo..=hi`, by enumeration.
fn brute_rank(p: &RankProblem, hi: u64) -> Vec<Vec<u64>> {
    let lo = u64::from(p.mode == Mode::Positive);
    boxes(p.modules.len(), lo, hi)
        .into_iter()
        .map(|t| std::iter::once(p.denominator).chain(t).collect::<Vec<_>>())
        .filter(|t| p.relations.iter().all(|(a, b)| dot(a, t) == dot(b, t)))
        .collect()
}

fn brute_combination(c: u64, coeffs: &[u64], mode: Mode) -> Option<Vec<u64>> {
    let lo = u64::from(mode == Mode::Positive);
    boxes(coeffs.len(), lo, c + 1)
        .into_iter()
        .find(|t| dot(t, coeffs) == c)
}

fn rank(modules: &[&str], rels: &[(&[u64], &[u64])]) -> RankProblem {
    RankProblem::new(
        modules.iter().map(|s| s.to_string()).collect(),
        rels.iter().map(|(a, b)| (a.to_vec(), b.to_vec())).collect(),
    )
}

// ---------- criteria ----------

fn c1_rank_counterexample() -> Outcome {
    let p = rank(
        &["A", "B"],
        &[(&[1, 0, 0], &[0, 1, 2]), (&[1, 0, 0], &[0, 2, 1])],
    );
    let verdict = decide(&p, WitnessBounds::default()).map_err(|e| e.to_string())?;
    ensure(matches!(verdict, RankVerdict::NotExists(_)), || {
        format!("decide gave {verdict:?}")
    })?;
    let bounds = WitnessBounds {
        c_max: 4,
        norm: 12,
        queue_cap: 100_000,
    };
    let w = find_witness(&p, bounds).ok_or("no witness at c_max=4, norm 12")?;
    ensure(w.c == 2 && w.w == [0, 3, 3], || {
        format!("witness {}", w.display(&p))
    })?;
    // Replay the trace by hand.
    let mut v = vec![2u64, 0, 0];
    for s in &w.trace {
        let (a, b) = &p.relations[s.relation];
        let (from, to) = if s.forward { (a, b) } else { (b, a) };
        ensure(v.iter().zip(from).all(|(x, f)| x >= f), || {
            "trace step does not apply".into()
        })?;
        v = v
            .iter()
            .zip(from)
            .zip(to)
            .map(|((x, f), t)| x - f + t)
            .collect();
    }
    ensure(v == w.w, || format!("trace ends at {v:?}"))?;
    ensure(
        brute_combination(2, &[3, 3], Mode::Nonnegative).is_none(),
        || "2 ∈ ⟨3⟩?".into(),
    )?;
    ensure(brute_rank(&p, 1).is_empty(), || {
        "brute force found a rank function".into()
    })?;
    Ok(format!(
        "witness {} in {} steps",
        w.display(&p),
        w.trace.len()
    ))
}

fn c2_rank_positive_cases() -> Outcome {
    let sum = rank(&["A", "B"], &[(&[1, 0, 0], &[0, 1, 1])]);
    let f = find_rank_function(&sum)
        .map_err(|e| e.to_string())?
        .ok_or("R=A+B: none")?;
    let brute = brute_rank(&sum, 1);
    ensure(Some(&f.values) == brute.first(), || {
        format!("{:?} vs {brute:?}", f.values)
    })?;
    let pos = sum.clone().with_mode(Mode::Positive);
    ensure(
        find_rank_function(&pos)
            .map_err(|e| e.to_string())?
            .is_none(),
        || "positive exists".into(),
    )?;
    ensure(brute_rank(&pos, 1).is_empty(), || {
        "brute positive exists".into()
    })?;

    let two = rank(&["A"], &[(&[2, 0], &[0, 3])]);
    ensure(
        find_rank_function(&two)
            .map_err(|e| e.to_string())?
            .is_none(),
        || "n=1 exists".into(),
    )?;
    ensure(brute_rank(&two, 2).is_empty(), || "brute n=1 exists".into())?;
    let three = two.with_denominator(3);
    let f = find_rank_function(&three)
        .map_err(|e| e.to_string())?
        .ok_or("n=3: none")?;
    ensure(f.rank(0) == num_rational::Ratio::new(2, 3), || {
        format!("rank {}", f.rank(0))
    })?;
    ensure(brute_rank(&three, 6) == vec![vec![3, 2]], || {
        "brute n=3 differs".into()
    })?;
    Ok("R=A+B exists/positive not; 2R=3A: n=1 not, n=3 rank 2/3".into())
}

fn c3_numerical_feasibility() -> Outcome {
    let mut cases = 0;
    let sets: Vec<Vec<u64>> = (0u32..64)
        .map(|mask| {
            (1..=6)
                .filter(|i| mask & (1 << (i - 1)) != 0)
                .collect::<Vec<u64>>()
        })
        .filter(|s| s.len() <= 3)
        .collect();
    for set in &sets {
        for c in 0..=20 {
            for mode in [Mode::Nonnegative, Mode::Positive] {
                cases += 1;
                let got = numerical_feasible(c, set, mode);
                let want = brute_combination(c, set, mode);
                ensure(got == want, || {
                    format!("c={c} set={set:?} {mode:?}: {got:?} vs {want:?}")
                })?;
            }
        }
    }
    Ok(format!("{cases} cases agree"))
}

fn random_equation(rng: &mut ChaCha8Rng) -> TEquation {
    let len = rng.gen_range(1..=4);
    let pattern: Vec<usize> = (0..len).map(|_| rng.gen_range(0..3)).collect();
    TEquation::new(TargetElement::Nat(rng.gen_range(0..=8)), SWord(pattern))
}

fn c4_combination_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let t: Target = "nat".parse().unwrap();
    let mut max_d = 0;
    for i in 0..100 {
        let (e1, e2) = (random_equation(&mut rng), random_equation(&mut rng));
        let val = |e: &TEquation| match e.value {
            TargetElement::Nat(k) => k,
            _ => unreachable!(),
        };
        // Domains as the solver builds them: 0..=min value over equations using x.
        let caps: Vec<u64> = (0..3)
            .map(|x| {
                [&e1, &e2]
                    .iter()
                    .filter(|e| e.pattern.contains(x))
                    .map(|e| val(e))
                    .min()
                    .unwrap_or(0)
            })
            .collect();
        let bounds = DomainBounds {
            domains: caps
                .iter()
                .map(|&m| (0..=m).map(TargetElement::Nat).collect())
                .collect(),
        };
        let (d, c) = combine_pair(&t, &e1, &e2, &bounds).map_err(|e| e.to_string())?;
        max_d = max_d.max(d);
        let vars: BTreeSet<usize> = e1.variables().union(&e2.variables()).copied().collect();
        let vs: Vec<usize> = vars.iter().copied().collect();
        let holds = |e: &TEquation, a: &[u64]| {
            let s: u64 = e
                .pattern
                .symbols()
                .iter()
                .map(|x| a[vs.iter().position(|v| v == x).unwrap()])
                .sum();
            s == val(e)
        };
        let boxes_in: Vec<Vec<u64>> = boxes(vs.len(), 0, 8)
            .into_iter()
            .filter(|a| a.iter().zip(&vs).all(|(v, &x)| *v <= caps[x]))
            .collect();
        let want: BTreeSet<Vec<u64>> = boxes_in
            .iter()
            .filter(|a| holds(&e1, a) && holds(&e2, a))
            .cloned()
            .collect();
        let combined: BTreeSet<Vec<u64>> =
            boxes_in.iter().filter(|a| holds(&c, a)).cloned().collect();
        ensure(want == combined, || {
            format!("pair {i}: d={d}, {want:?} vs {combined:?}")
        })?;
        let lib: BTreeSet<Vec<u64>> = solution_set(&t, std::slice::from_ref(&c), &vars, &bounds)
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|e| match e {
                        TargetElement::Nat(k) => k,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        ensure(lib == want, || {
            format!("pair {i}: library solution set differs")
        })?;
    }
    Ok(format!("100 pairs agree, largest exponent {max_d}"))
}

/// Independent evaluation in ℕ or ℕ^k, both written additively.
fn eval_vec(w: &SWord, eta: &[Vec<u64>], dim: usize) -> Vec<u64> {
    let mut acc = vec![0; dim];
    for &x in w.symbols() {
        for (a, b) in acc.iter_mut().zip(&eta[x]) {
            *a += b;
        }
    }
    acc
}

fn as_vec(e: &TargetElement) -> Vec<u64> {
    match e {
        TargetElement::Nat(k) => vec![*k],
        TargetElement::Vector(v) => v.clone(),
        _ => unreachable!(),
    }
}

fn random_instance(rng: &mut ChaCha8Rng) -> ProblemInstance {
    let comm = rng.gen_bool(0.5);
    let target: Target = if comm { "freecomm[a,b]" } else { "nat" }.parse().unwrap();
    let n = rng.gen_range(1..=3);
    let names: Vec<String> = ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect();
    let word = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(1..=3);
        SWord((0..len).map(|_| rng.gen_range(0..n)).collect())
    };
    let mut relations: Vec<(SWord, SWord)> = (0..rng.gen_range(0..=2))
        .map(|_| (word(rng), word(rng)))
        .collect();
    let mut words: Vec<SWord> = (0..rng.gen_range(1..=3)).map(|_| word(rng)).collect();
    // Cover every generator.
    for x in 0..n {
        if !words.iter().any(|w| w.contains(x)) {
            let mut w = word(rng);
            w.0.push(x);
            words.push(w);
        }
    }
    let dim = if comm { 2 } else { 1 };
    // Half the instances get probe values from a planted map, so both
    // verdicts are well represented.
    let planted: Option<Vec<Vec<u64>>> = rng.gen_bool(0.5).then(|| {
        (0..n)
            .map(|_| loop {
                let v: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..=1)).collect();
                if !comm || v.iter().any(|&a| a > 0) {
                    return v;
                }
            })
            .collect()
    });
    if let Some(eta) = &planted {
        relations.retain(|(a, b)| eval_vec(a, eta, dim) == eval_vec(b, eta, dim));
    }
    let element = |v: Vec<u64>| {
        if comm {
            TargetElement::Vector(v)
        } else {
            TargetElement::Nat(v[0])
        }
    };
    let probes = words
        .into_iter()
        .map(|w| {
            let v = match &planted {
                Some(eta) => eval_vec(&w, eta, dim),
                None => loop {
                    let v: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..=6)).collect();
                    if !comm || v.iter().any(|&a| a > 0) {
                        break v;
                    }
                },
            };
            Probe {
                value: element(v),
                word: w,
            }
        })
        .collect();
    ProblemInstance {
        presentation: SPresentation::new(names, relations),
        target,
        probes,
    }
}

/// All maps into ∏ T_x, with T_x the componentwise-≤ elements of every probe
/// value whose word uses x, in the order the solver promises.
fn naive_first(inst: &ProblemInstance) -> Option<Vec<Vec<u64>>> {
    let n = inst.presentation.generators().len();
    let dim = as_vec(&inst.probes[0].value).len();
    let nat = dim == 1;
    let domains: Vec<Vec<Vec<u64>>> = (0..n)
        .map(|x| {
            let mut cap = vec![u64::MAX; dim];
            for p in inst.probes.iter().filter(|p| p.word.contains(x)) {
                for (c, v) in cap.iter_mut().zip(as_vec(&p.value)) {
                    *c = (*c).min(v);
                }
            }
            boxes(dim, 0, *cap.iter().max().unwrap())
                .into_iter()
                .filter(|v| v.iter().zip(&cap).all(|(a, c)| a <= c))
                .filter(|v| nat || v.iter().any(|&a| a > 0))
                .collect()
        })
        .collect();
    // Canonical order: numeric for ℕ, lexicographic for vectors; both equal
    // the order `boxes` produces.
    let mut idx = vec![0usize; n];
    if domains.iter().any(Vec::is_empty) {
        return None;
    }
    loop {
        let eta: Vec<Vec<u64>> = idx
            .iter()
            .zip(&domains)
            .map(|(&i, d)| d[i].clone())
            .collect();
        let ok = inst
            .probes
            .iter()
            .all(|p| eval_vec(&p.word, &eta, dim) == as_vec(&p.value))
            && inst
                .presentation
                .relations()
                .iter()
                .all(|(a, b)| eval_vec(a, &eta, dim) == eval_vec(b, &eta, dim));
        if ok {
            return Some(eta);
        }
        // Last variable varies fastest, matching declaration-order search.
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn c5_extension_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut yes, mut no) = (0, 0);
    for i in 0..100 {
        let inst = random_instance(&mut rng);
        let report = extend_homomorphism(&inst, RewriteBounds::for_instance(&inst))
            .map_err(|e| format!("instance {i}: {e}"))?;
        let naive = naive_first(&inst);
        match (&report.verdict, &naive) {
            (Verdict::Exists(eta), Some(want)) => {
                let got: Vec<Vec<u64>> = eta.0.iter().map(as_vec).collect();
                ensure(&got == want, || {
                    format!("instance {i}: {got:?} vs {want:?}")
                })?;
                yes += 1;
            }
            (Verdict::NotExists(_), None) => no += 1,
            (v, n) => return Err(format!("instance {i}: solver {v:?}, naive {n:?}")),
        }
    }
    Ok(format!("100 instances agree ({yes} exist, {no} do not)"))
}

fn word_str(w: &str, d: usize) -> String {
    w.repeat(d)
}

fn c6_free_claim() -> Outcome {
    // Oracle: d-fold concatenations and substring search.
    let words: Vec<String> = (1..=4)
        .flat_map(|len| {
            (0..1u32 << len).map(move |bits| {
                (0..len)
                    .map(|i| {
                        if bits >> (len - 1 - i) & 1 == 0 {
                            'a'
                        } else {
                            'b'
                        }
                    })
                    .collect::<String>()
            })
        })
        .collect();
    let mut sets: Vec<Vec<String>> = words.iter().map(|w| vec![w.clone()]).collect();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            sets.push(vec![words[i].clone(), words[j].clone()]);
        }
    }
    let t: Target = "free[a,b]".parse().unwrap();
    for set in &sets {
        let mut products: Vec<String> = set.clone();
        let mut wd = BTreeSet::new();
        for d in 1..=4 {
            for s in &words {
                if products.iter().any(|p| p.contains(&word_str(s, d))) {
                    wd.insert(s.clone());
                }
            }
            products = products
                .iter()
                .flat_map(|p| set.iter().map(move |a| format!("{p}{a}")))
                .collect();
        }
        let factors: BTreeSet<String> = set
            .iter()
            .flat_map(|w| {
                (0..w.len()).flat_map(move |i| (i + 1..=w.len()).map(move |j| w[i..j].to_string()))
            })
            .collect();
        ensure(wd == factors, || {
            format!("A={set:?}: {wd:?} vs {factors:?}")
        })?;
        let elems: Vec<TargetElement> = set.iter().map(|w| TargetElement::word(w)).collect();
        let lib: BTreeSet<String> = t
            .weak_divisors(&elems, 4)
            .unwrap()
            .elements
            .iter()
            .map(|e| e.to_string())
            .collect();
        ensure(lib == factors, || format!("A={set:?}: library {lib:?}"))?;
    }
    let report = lab::free_claim(SuiteBounds::default());
    ensure(report.passed(), || report.to_string())?;
    Ok(format!("{} sets, zero discrepancies", sets.len()))
}

/// Membership in the subsemigroup generated by xx, xxx, y, written as a
/// regular-language check: every maximal run of x has length at least 2.
fn in_sub(w: &str) -> bool {
    !w.is_empty() && w.split('y').all(|run| run.len() != 1)
}

fn c7_non_idempotence() -> Outcome {
    let report = lab::non_idempotence_demo();
    let want = [
        Status::VerifiedAtBound { bound: 6 },
        Status::Verified,
        Status::Verified,
    ];
    ensure(report.statuses() == want, || report.to_string())?;
    for d in 1..=6 {
        let host = word_str("xxxy", d);
        let s = "x".repeat(2 * d);
        for i in 0..=host.len() - s.len() {
            if host[i..].starts_with(&s) {
                let (pre, post) = (&host[..i], &host[i + s.len()..]);
                let ok = (pre.is_empty() || in_sub(pre)) && (post.is_empty() || in_sub(post));
                ensure(!ok, || format!("(xx)^{d} divides (xxxy)^{d} at {i}"))?;
            }
        }
    }
    ensure(in_sub("y") && "xxxy".starts_with("xxx"), || {
        "x^3 y split".into()
    })?;
    ensure(in_sub("xx") && "xxxxxx".starts_with("xxxx"), || {
        "x^4 in x^6".into()
    })?;
    let t: Target = "subfree[xx,xxx,y]".parse().unwrap();
    let v = t
        .is_weak_divisor(
            &TargetElement::word("xx"),
            &[TargetElement::word("xxxy")],
            6,
        )
        .unwrap();
    ensure(v == WeakVerdict::NoWithinBound(6), || format!("{v:?}"))?;
    Ok("statuses verified-at-bound(6), verified, verified".into())
}

fn c8_rational_growth() -> Outcome {
    let mut counts = Vec::new();
    for k in 1..=9u64 {
        let r = lab::weak_divisors_of_one(k, 12).map_err(|e| e.to_string())?;
        // Oracle: elements ≤ 1 from combinations with small coefficients.
        let gens: Vec<Rational> = (1..=k as i64).map(|n| Rational::new(n, n + 1)).collect();
        let mut elems = BTreeSet::new();
        let mut frontier = vec![Rational::new(0, 1)];
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = x + g;
                if y <= Rational::new(1, 1) && elems.insert(y) {
                    frontier.push(y);
                }
            }
        }
        let got: BTreeSet<Rational> = r.elements().into_iter().collect();
        ensure(got == elems, || format!("k={k}: {got:?} vs {elems:?}"))?;
        counts.push(r.count());
    }
    ensure(counts.windows(2).all(|w| w[0] <= w[1]), || {
        format!("counts {counts:?}")
    })?;
    ensure(counts[8] >= 10, || format!("count at k=9 is {}", counts[8]))?;
    Ok(format!("counts {counts:?}"))
}

fn random_rank_problem(rng: &mut ChaCha8Rng) -> RankProblem {
    let k = rng.gen_range(1..=3);
    let mut rels = Vec::new();
    for p in 0..k {
        let mut lhs = vec![0; k + 1];
        lhs[0] = rng.gen_range(1..=3);
        let mut rhs: Vec<u64> = std::iter::once(0)
            .chain((0..k).map(|_| rng.gen_range(0..=3)))
            .collect();
        rhs[p + 1] = rhs[p + 1].max(1);
        rels.push((lhs, rhs));
    }
    for _ in 0..rng.gen_range(0..=3) {
        let side = |rng: &mut ChaCha8Rng| loop {
            let v: Vec<u64> = (0..=k).map(|_| rng.gen_range(0..=3)).collect();
            if v.iter().any(|&x| x > 0) {
                return v;
            }
        };
        let (a, b) = (side(rng), side(rng));
        rels.push((a, b));
    }
    let mode = if rng.gen_bool(0.5) {
        Mode::Positive
    } else {
        Mode::Nonnegative
    };
    RankProblem::new((0..k).map(|i| format!("P{i}")).collect(), rels).with_mode(mode)
}

fn c9_random_rank_problems() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut exists, mut not, mut witnessed) = (0, 0, 0);
    let mut misses = Vec::new();
    for i in 0..200 {
        let p = random_rank_problem(&mut rng);
        match decide(&p, WitnessBounds::default()).map_err(|e| e.to_string())? {
            RankVerdict::Exists(f) => {
                exists += 1;
                let t = &f.values;
                let ok = t[0] == 1
                    && p.relations.iter().all(|(a, b)| dot(a, t) == dot(b, t))
                    && (p.mode == Mode::Nonnegative || t[1..].iter().all(|&x| x >= 1));
                ensure(ok, || format!("problem {i}: {t:?} fails"))?;
            }
            RankVerdict::NotExists(w) => {
                not += 1;
                ensure(brute_rank(&p, 3).is_empty(), || {
                    format!("problem {i}: brute force found one")
                })?;
                match w {
                    Some(w) => {
                        let k = w.c.checked_sub(w.w[0]);
                        let feasible =
                            k.is_some_and(|k| brute_combination(k, &w.w[1..], p.mode).is_some());
                        ensure(!feasible && w.replay(&p).as_ref() == Some(&w.w), || {
                            format!("problem {i}: bad witness {}", w.display(&p))
                        })?;
                        witnessed += 1;
                    }
                    None => misses.push(i),
                }
            }
        }
    }
    let yield_ok = not == 0 || witnessed * 100 >= not * 95;
    ensure(yield_ok, || {
        format!("witness yield {witnessed}/{not}, misses {misses:?}")
    })?;
    Ok(format!(
        "{exists} exist, {not} do not, witnesses {witnessed}/{not}, misses {misses:?}"
    ))
}

fn c10_commutative_idempotence() -> Outcome {
    let vectors: Vec<[u64; 2]> = (0..=3u64)
        .flat_map(|a| (0..=3u64).map(move |b| [a, b]))
        .filter(|v| v != &[0, 0])
        .collect();
    let mut sets: Vec<Vec<[u64; 2]>> = vectors.iter().map(|v| vec![*v]).collect();
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            sets.push(vec![vectors[i], vectors[j]]);
        }
    }
    // Oracle: s is a weak divisor when d·s ≤ some sum of d members, d ≤ 4.
    let wd = |set: &[[u64; 2]]| -> BTreeSet<[u64; 2]> {
        let mut sums: Vec<[u64; 2]> = vec![[0, 0]];
        let mut out = BTreeSet::new();
        for d in 1..=4u64 {
            sums = sums
                .iter()
                .flat_map(|s| set.iter().map(move |a| [s[0] + a[0], s[1] + a[1]]))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            for c in (0..=12u64).flat_map(|a| (0..=12u64).map(move |b| [a, b])) {
                if c != [0, 0] && sums.iter().any(|s| d * c[0] <= s[0] && d * c[1] <= s[1]) {
                    out.insert(c);
                }
            }
        }
        out
    };
    let t: Target = "freecomm[a,b]".parse().unwrap();
    for set in &sets {
        let once = wd(set);
        let once_v: Vec<[u64; 2]> = once.iter().copied().collect();
        let twice = wd(&once_v);
        ensure(once == twice, || {
            format!("A={set:?}: {once:?} vs {twice:?}")
        })?;
        let elems: Vec<TargetElement> = set
            .iter()
            .map(|v| TargetElement::Vector(v.to_vec()))
            .collect();
        let lib: BTreeSet<[u64; 2]> = t
            .weak_divisors_bounded(&elems, 4)
            .unwrap()
            .iter()
            .map(|e| match e {
                TargetElement::Vector(v) => [v[0], v[1]],
                _ => unreachable!(),
            })
            .collect();
        ensure(lib == once, || {
            format!("A={set:?}: library {lib:?} vs {once:?}")
        })?;
    }
    let report = lab::commutative_idempotence(SuiteBounds::default());
    ensure(report.passed(), || report.to_string())?;
    Ok(format!("{} sets, zero discrepancies", sets.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "1 rank counterexample pin",
            Duration::from_secs(1),
            c1_rank_counterexample,
        ),
        (
            "2 rank positive cases",
            Duration::from_secs(1),
            c2_rank_positive_cases,
        ),
        (
            "3 numerical feasibility oracle",
            Duration::from_secs(5),
            c3_numerical_feasibility,
        ),
        (
            "4 combination lemma",
            Duration::from_secs(10),
            c4_combination_lemma,
        ),
        (
            "5 extension solver oracle",
            Duration::from_secs(30),
            c5_extension_oracle,
        ),
        (
            "6 free weak-divisor claim",
            Duration::from_secs(30),
            c6_free_claim,
        ),
        (
            "7 non-idempotence demo",
            Duration::from_secs(5),
            c7_non_idempotence,
        ),
        (
            "8 rational growth",
            Duration::from_secs(10),
            c8_rational_growth,
        ),
        (
            "9 random rank problems",
            Duration::from_secs(60),
            c9_random_rank_problems,
        ),
        (
            "10 commutative idempotence",
            Duration::from_secs(10),
            c10_commutative_idempotence,
        ),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let result = match result {
            Ok(msg) if took > limit => Err(format!("{msg}; took {took:.2?}, limit {limit:?}")),
            r => r,
        };
        match result {
            Ok(msg) => println!("PASS criterion {name} ({took:.2?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({took:.2?}): {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
