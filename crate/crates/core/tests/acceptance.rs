//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the output.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lazy_tournament::kapranov::boundary_factor_coords;
use lazy_tournament::multidegree::{is_support, odd_double_factorial};
use lazy_tournament::parking::{cpf_set, r_map, tau, tau_inverse, ParkingFunction};
use lazy_tournament::trees::{enumerate_trees, par_map_partitions, DEFAULT_MAX_N};
use lazy_tournament::verify::check_transcript;
use lazy_tournament::{
    classify, embed_boundary, ktilde, multidegree, pi_lazy, pi_lazy_inverse, rightmost_zero,
    run_tournament, tour_set, verify, verify_hyperplanes, weak_compositions, Composition,
    LabeledTree, Suite,
};
use num_bigint::BigUint;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tree(s: &str) -> LabeledTree {
    s.parse().expect("literal tree")
}

fn total_degree_identity() -> Outcome {
    let expected = [1u64, 3, 15, 105, 945, 10395];
    for n in 1..=6 {
        let want = BigUint::from(expected[n - 1]);
        ensure(odd_double_factorial(n) == want, || format!("(2n-1)!! at n = {n}"))?;
        let degrees: BigUint = weak_compositions(n).map(|k| multidegree(&k).unwrap()).sum();
        let trees = enumerate_trees(n, true).unwrap().count();
        let cpfs: usize = weak_compositions(n).map(|k| cpf_set(&k).unwrap().len()).sum();
        ensure(
            degrees == want && BigUint::from(trees) == want && BigUint::from(cpfs) == want,
            || format!("n = {n}: degrees {degrees}, trees {trees}, cpfs {cpfs}, want {want}"),
        )?;
    }
    Ok("totals 1, 3, 15, 105, 945, 10395".into())
}

fn triple_agreement() -> Outcome {
    let mut checked = 0;
    for n in 0..=6 {
        for k in weak_compositions(n) {
            let tour = tour_set(&k).unwrap().count();
            let cpf = cpf_set(&k).unwrap().len();
            let deg = multidegree(&k).unwrap();
            ensure(BigUint::from(tour) == deg && cpf == tour, || {
                format!("({k}): tour {tour}, cpf {cpf}, degree {deg}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} compositions"))
}

fn pinned_values() -> Outcome {
    let deg = |p: &[usize]| multidegree(&Composition::new(p.to_vec())).unwrap();
    ensure(deg(&[1, 1]) == BigUint::from(2u32), || "deg(1,1)".into())?;
    ensure(deg(&[0, 2]) == BigUint::from(1u32), || "deg(0,2)".into())?;
    ensure(deg(&[2, 0]) == BigUint::from(0u32), || "deg(2,0)".into())?;

    let example = tree("(a,b,(((2,3),4),(c,1)))");
    let p = tau(&example).map_err(|e| e.to_string())?;
    ensure(p.to_string() == "3;-;1;2,4", || format!("tau gave {p}"))?;
    let back = tau_inverse(&"3;-;1;2,4".parse::<ParkingFunction>().unwrap());
    ensure(back.as_ref() == Ok(&example), || format!("tau inverse gave {back:?}"))?;
    ensure(classify(&example) == Ok(Composition::new(vec![1, 0, 1, 2])), || {
        "example class".into()
    })?;

    for (t, want) in [
        ("(a,b,((c,2),1))", "[0:1]x[0:1:0]"),
        ("(a,b,((c,1),2))", "[0:1]x[0:1:1]"),
    ] {
        let got = embed_boundary(&tree(t)).unwrap().to_string();
        ensure(got == want, || format!("{t} embeds as {got}"))?;
    }
    let lemma_tree = tree("(a,b,((1,3),(5,((2,4),c))))");
    let f5 = boundary_factor_coords(&lemma_tree, 5).unwrap().to_string();
    ensure(f5 == "[0:1:0:1:0:1]", || format!("factor 5 is {f5}"))?;
    Ok("multidegrees, tau, embeddings".into())
}

fn roundtrips() -> Outcome {
    let mut checked = 0;
    for n in 0..=6 {
        for t in enumerate_trees(n, true).unwrap() {
            let p = tau(&t).unwrap();
            ensure(tau_inverse(&p).as_ref() == Ok(&t), || format!("tau roundtrip {t}"))?;
            if n >= 1 {
                let k = classify(&t).unwrap();
                let (reduced, j) = pi_lazy(&t).unwrap();
                ensure(pi_lazy_inverse(&reduced, j, &k).as_ref() == Ok(&t), || {
                    format!("pi_lazy roundtrip {t}")
                })?;
                ensure(r_map(&p).unwrap() == tau(&reduced).unwrap(), || {
                    format!("commuting square {t}")
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} trees"))
}

fn structural_lemmas() -> Outcome {
    let mut previous: BTreeMap<Composition, usize> = BTreeMap::new();
    for n in 0..=6 {
        let mut classes: BTreeMap<Composition, usize> = BTreeMap::new();
        for t in enumerate_trees(n, true).unwrap() {
            let tr = run_tournament(&t).unwrap();
            if let Some((name, msg)) = check_transcript(&tr) {
                return Err(format!("{name}: {msg}"));
            }
            *classes.entry(tr.win_counts).or_default() += 1;
        }
        if n >= 1 {
            for k in weak_compositions(n) {
                let first = rightmost_zero(&k).unwrap().num().map_or(1, |i| i + 1);
                let sum: usize = (first..=n)
                    .map(|j| previous.get(&ktilde(&k, j).unwrap()).copied().unwrap_or(0))
                    .sum();
                let here = classes.get(&k).copied().unwrap_or(0);
                ensure(sum == here, || format!("recursion at ({k}): {here} vs {sum}"))?;
            }
        }
        previous = classes;
    }
    Ok("losers, winners, participation, first round, recursion".into())
}

fn hyperplanes() -> Outcome {
    let mut points = 0;
    for n in 1..=6 {
        for k in weak_compositions(n) {
            let report = verify_hyperplanes(&k).unwrap();
            if let Some(f) = report.failure {
                return Err(format!("({k}): {} factor {}: {}", f.tree, f.factor, f.reason));
            }
            points += report.trees_checked;
        }
    }
    Ok(format!("{points} tournament points"))
}

fn support() -> Outcome {
    let mut checked = 0;
    for n in 0..=7 {
        for k in weak_compositions(n) {
            let deg = multidegree(&k).unwrap();
            ensure(is_support(&k).unwrap() == (deg > BigUint::from(0u32)), || {
                format!("({k}) has degree {deg}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} compositions, suffix sums >= length"))
}

fn performance() -> Outcome {
    let start = Instant::now();
    let parts = par_map_partitions(8, true, DEFAULT_MAX_N, 4, |trees| {
        let mut classes: BTreeMap<Composition, u64> = BTreeMap::new();
        for t in trees {
            *classes.entry(classify(&t).unwrap()).or_default() += 1;
        }
        classes
    })
    .map_err(|e| e.to_string())?;
    let mut classes: BTreeMap<Composition, u64> = BTreeMap::new();
    for p in parts {
        for (k, c) in p {
            *classes.entry(k).or_default() += c;
        }
    }
    let enumerate_time = start.elapsed();
    let total: u64 = classes.values().sum();
    ensure(total == 2_027_025, || format!("{total} trees at n = 8"))?;
    for (k, c) in &classes {
        ensure(multidegree(k).unwrap() == BigUint::from(*c), || format!("({k}) at n = 8"))?;
    }
    ensure(enumerate_time < Duration::from_secs(600), || {
        format!("n = 8 classification took {enumerate_time:?}")
    })?;

    let start = Instant::now();
    let report = verify(6, Suite::All, DEFAULT_MAX_N, 4).map_err(|e| e.to_string())?;
    let verify_time = start.elapsed();
    if let Some((n, check)) = report.first_failure() {
        return Err(format!("verify: {} at n = {n}", check.name));
    }
    ensure(verify_time < Duration::from_secs(1800), || {
        format!("verify took {verify_time:?}")
    })?;
    Ok(format!(
        "n = 8 classified in {:.1}s, verify --n-max 6 --suite all in {:.1}s",
        enumerate_time.as_secs_f64(),
        verify_time.as_secs_f64()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("total-degree identity", total_degree_identity),
        ("triple agreement", triple_agreement),
        ("pinned values", pinned_values),
        ("bijection roundtrips", roundtrips),
        ("structural lemmas", structural_lemmas),
        ("hyperplane theorem", hyperplanes),
        ("support characterization", support),
        ("performance envelope", performance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({detail})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
