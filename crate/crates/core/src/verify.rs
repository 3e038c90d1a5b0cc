//! Exhaustive property suites over all trees of each size, producing a
//! machine-readable report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::composition::{weak_compositions, Composition};
use crate::error::{Error, Result};
use crate::kapranov::{check_branch_path, check_hyperplanes, check_separation};
use crate::label::Label;
use crate::multidegree::{is_support, ktilde, multidegree, odd_double_factorial, rightmost_zero};
use crate::parking::{cpf_set, is_column_restricted, r_map, tau, tau_inverse};
use crate::tournament::{pi_lazy, pi_lazy_inverse, run_tournament, TournamentTranscript};
use crate::trees::{par_map_partitions, LabeledTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Counts,
    Bijection,
    Hyperplanes,
    Lemmas,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "counts" => Ok(Suite::Counts),
            "bijection" => Ok(Suite::Bijection),
            "hyperplanes" => Ok(Suite::Hyperplanes),
            "lemmas" => Ok(Suite::Lemmas),
            _ => Err(Error::Parse(format!("unknown suite {s:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::All => "all",
            Suite::Counts => "counts",
            Suite::Bijection => "bijection",
            Suite::Hyperplanes => "hyperplanes",
            Suite::Lemmas => "lemmas",
        })
    }
}

const PER_TREE_CHECKS: &[(&str, Suite)] = &[
    ("round_count", Suite::Lemmas),
    ("losers_decrease", Suite::Lemmas),
    ("winners_never_lose", Suite::Lemmas),
    ("participation", Suite::Lemmas),
    ("first_round", Suite::Lemmas),
    ("separation", Suite::Lemmas),
    ("branch_path", Suite::Lemmas),
    ("tau_restricted", Suite::Bijection),
    ("tau_roundtrip", Suite::Bijection),
    ("pi_lazy_class", Suite::Bijection),
    ("pi_lazy_roundtrip", Suite::Bijection),
    ("commuting_square", Suite::Bijection),
    ("hyperplanes", Suite::Hyperplanes),
];

const PER_LEVEL_CHECKS: &[(&str, Suite)] = &[
    ("total_degree", Suite::Counts),
    ("tree_count", Suite::Counts),
    ("cpf_total", Suite::Counts),
    ("triple_agreement", Suite::Counts),
    ("support", Suite::Counts),
    ("tau_bijective", Suite::Bijection),
    ("recursion", Suite::Lemmas),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub n: usize,
    pub trees: usize,
    /// `(2n-1)!!` as a decimal string.
    pub expected_total: String,
    pub checks: Vec<CheckResult>,
}

impl LevelReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n_max: usize,
    pub suite: Suite,
    pub passed: bool,
    pub levels: Vec<LevelReport>,
}

impl VerifyReport {
    /// First failing check with its size, if any.
    pub fn first_failure(&self) -> Option<(usize, &CheckResult)> {
        self.levels
            .iter()
            .flat_map(|l| l.checks.iter().map(move |c| (l.n, c)))
            .find(|(_, c)| !c.passed)
    }
}

/// Tallies from one slice of the tree enumeration.
#[derive(Default)]
struct Partial {
    trees: usize,
    classes: BTreeMap<Composition, usize>,
    failures: BTreeMap<&'static str, String>,
}

impl Partial {
    fn fail(&mut self, name: &'static str, msg: impl FnOnce() -> String) {
        self.failures.entry(name).or_insert_with(msg);
    }

    /// Folds `later` in; counterexamples already held take precedence.
    fn absorb(&mut self, later: Partial) {
        self.trees += later.trees;
        for (k, c) in later.classes {
            *self.classes.entry(k).or_default() += c;
        }
        for (name, msg) in later.failures {
            self.failures.entry(name).or_insert(msg);
        }
    }
}

/// Structural tournament lemmas for one ab-adjacent tree. Returns the
/// failing property and a description.
pub fn check_transcript(tr: &TournamentTranscript) -> Option<(&'static str, String)> {
    let t = &tr.tree;
    let n = t.n();
    if tr.rounds.len() != n {
        return Some(("round_count", format!("{} rounds in {t}", tr.rounds.len())));
    }
    if tr.rounds.windows(2).any(|w| w[0].loser < w[1].loser) {
        return Some(("losers_decrease", format!("{t}")));
    }
    for r in &tr.rounds {
        if tr.losses(r.winner) > 0 {
            return Some(("winners_never_lose", format!("{} wins and loses in {t}", r.winner)));
        }
    }
    if n >= 1 {
        for &l in t.labels() {
            let plays = tr.first_round_of(l).is_some();
            if plays == matches!(l, Label::A | Label::B) {
                return Some(("participation", format!("{l} in {t}")));
            }
        }
        let first = tr.rounds[0];
        let zero = rightmost_zero(&tr.win_counts).ok();
        if zero != Some(first.loser) {
            return Some((
                "first_round",
                format!("first loser {} but rightmost zero {zero:?} in {t}", first.loser),
            ));
        }
        let kj = first.winner.num().map_or(0, |j| tr.win_counts.parts()[j - 1]);
        if n >= 2 && first.lazy != (kj == 1) {
            return Some(("first_round", format!("laziness {} with k_j = {kj} in {t}", first.lazy)));
        }
    }
    None
}

fn check_tree(t: &LabeledTree, suite: Suite, acc: &mut Partial) -> Result<()> {
    let tr = run_tournament(t)?;
    let k = tr.win_counts.clone();
    acc.trees += 1;
    *acc.classes.entry(k.clone()).or_default() += 1;

    if suite.includes(Suite::Lemmas) {
        if let Some((name, msg)) = check_transcript(&tr) {
            acc.fail(name, || msg);
        }
        if let Some(msg) = check_separation(&tr)? {
            acc.fail("separation", || msg);
        }
        if let Some(msg) = check_branch_path(&tr)? {
            acc.fail("branch_path", || msg);
        }
    }
    if suite.includes(Suite::Hyperplanes) {
        if let Some(f) = check_hyperplanes(t, &k)? {
            acc.fail("hyperplanes", || format!("{}: factor {}: {}", f.tree, f.factor, f.reason));
        }
    }
    if suite.includes(Suite::Bijection) {
        let p = tau(t)?;
        if !is_column_restricted(&p) || p.heights() != k {
            acc.fail("tau_restricted", || format!("{t} -> {p}"));
        }
        if tau_inverse(&p).as_ref() != Ok(t) {
            acc.fail("tau_roundtrip", || format!("{t} -> {p}"));
        }
        if t.n() >= 1 {
            let (reduced, j) = pi_lazy(t)?;
            let jn = j.num().unwrap_or(0);
            let class = crate::tournament::classify(&reduced)?;
            if ktilde(&k, jn).ok().as_ref() != Some(&class) {
                acc.fail("pi_lazy_class", || format!("{t} -> {reduced} with j = {j}"));
            }
            if pi_lazy_inverse(&reduced, j, &k).as_ref() != Ok(t) {
                acc.fail("pi_lazy_roundtrip", || format!("{t} -> {reduced} with j = {j}"));
            }
            if r_map(&p)? != tau(&reduced)? {
                acc.fail("commuting_square", || format!("{t}"));
            }
        }
    }
    Ok(())
}

fn census(n: usize, suite: Suite, max_n: usize, jobs: usize) -> Result<Partial> {
    let parts = par_map_partitions(n, true, max_n, jobs, |trees| -> Result<Partial> {
        let mut acc = Partial::default();
        for t in trees {
            check_tree(&t, suite, &mut acc)?;
        }
        Ok(acc)
    })?;
    let mut total = Partial::default();
    for p in parts {
        total.absorb(p?);
    }
    Ok(total)
}

fn level_checks(
    n: usize,
    suite: Suite,
    census: &mut Partial,
    previous: Option<&BTreeMap<Composition, usize>>,
) -> Result<()> {
    let expected = odd_double_factorial(n);
    let mut failures: Vec<(&'static str, String)> = Vec::new();
    let mut cpf_total = 0usize;
    let mut degree_total = num_bigint::BigUint::default();
    for k in weak_compositions(n) {
        let deg = multidegree(&k)?;
        let tour = census.classes.get(&k).copied().unwrap_or(0);
        degree_total += &deg;
        if suite.includes(Suite::Counts) {
            let cpf = cpf_set(&k)?.len();
            cpf_total += cpf;
            if deg != num_bigint::BigUint::from(tour) || cpf != tour {
                failures.push(("triple_agreement", format!("({k}): tour {tour}, cpf {cpf}, degree {deg}")));
            }
            if is_support(&k)? != (deg > num_bigint::BigUint::default()) {
                failures.push(("support", format!("({k}) has degree {deg}")));
            }
        }
        if suite.includes(Suite::Lemmas) && n >= 1 {
            if let Some(prev) = previous {
                let first = rightmost_zero(&k)?.num().map_or(1, |i| i + 1);
                let sum: usize = (first..=n)
                    .map(|j| ktilde(&k, j).map(|kt| prev.get(&kt).copied().unwrap_or(0)))
                    .sum::<Result<usize>>()?;
                if sum != tour {
                    failures.push(("recursion", format!("({k}): |Tour| = {tour}, recursion gives {sum}")));
                }
            }
        }
    }
    if suite.includes(Suite::Counts) {
        if degree_total != expected {
            failures.push(("total_degree", format!("n = {n}: {degree_total} != {expected}")));
        }
        if num_bigint::BigUint::from(census.trees) != expected {
            failures.push(("tree_count", format!("n = {n}: {} trees", census.trees)));
        }
        if num_bigint::BigUint::from(cpf_total) != expected {
            failures.push(("cpf_total", format!("n = {n}: {cpf_total} CPFs")));
        }
    }
    if suite.includes(Suite::Bijection) {
        let cpfs: usize = weak_compositions(n).map(|k| cpf_set(&k).map(|s| s.len())).sum::<Result<usize>>()?;
        // Injective by the roundtrip, into CPFs by restriction; equal sizes
        // make it onto.
        if cpfs != census.trees {
            failures.push(("tau_bijective", format!("{} trees but {cpfs} CPFs", census.trees)));
        }
    }
    for (name, msg) in failures {
        census.fail(name, || msg);
    }
    Ok(())
}

/// Runs `suite` for every `n` in `0..=n_max` on `jobs` workers.
pub fn verify(n_max: usize, suite: Suite, max_n: usize, jobs: usize) -> Result<VerifyReport> {
    if n_max > max_n {
        return Err(Error::ResourceLimit { n: n_max, max: max_n });
    }
    let mut levels = Vec::new();
    let mut previous: Option<BTreeMap<Composition, usize>> = None;
    for n in 0..=n_max {
        let mut c = census(n, suite, max_n, jobs)?;
        level_checks(n, suite, &mut c, previous.as_ref())?;
        let checks = PER_TREE_CHECKS
            .iter()
            .chain(PER_LEVEL_CHECKS)
            .filter(|(_, s)| suite.includes(*s))
            .map(|&(name, _)| {
                let counterexample = c.failures.get(name).cloned();
                CheckResult {
                    name,
                    passed: counterexample.is_none(),
                    counterexample,
                }
            })
            .collect();
        levels.push(LevelReport {
            n,
            trees: c.trees,
            expected_total: odd_double_factorial(n).to_string(),
            checks,
        });
        previous = Some(c.classes);
    }
    Ok(VerifyReport {
        n_max,
        suite,
        passed: levels.iter().all(LevelReport::passed),
        levels,
    })
}
