//! Coordinates under the iterated Kapranov embedding into
//! `P^1 x P^2 x ... x P^n`, for boundary points (trivalent trees) and for
//! interior points given by marked-point positions on `P^1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::tournament::{run_tournament, tour_set, TournamentTranscript};
use crate::trees::LabeledTree;

/// Labels indexing the coordinates of the `P^r` factor: `b, c, 1, ..., r-1`.
pub fn coordinate_labels(r: usize) -> Vec<Label> {
    let mut out = vec![Label::B, Label::C];
    out.extend((1..r).map(Label::Num));
    out
}

/// One factor of the embedding, in normal form (first nonzero entry is 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorCoordinates {
    pub r: usize,
    pub coords: Vec<BigRational>,
}

impl FactorCoordinates {
    /// Scales `coords` so the first nonzero entry is 1.
    pub fn normalized(r: usize, coords: Vec<BigRational>) -> Result<FactorCoordinates> {
        if coords.len() != r + 1 {
            return Err(Error::Internal(format!(
                "factor {r} needs {} coordinates, got {}",
                r + 1,
                coords.len()
            )));
        }
        let lead = coords
            .iter()
            .find(|x| !x.is_zero())
            .cloned()
            .ok_or_else(|| Error::InvalidConfiguration("all coordinates vanish".into()))?;
        let coords = coords.into_iter().map(|x| x / &lead).collect();
        Ok(FactorCoordinates { r, coords })
    }

    /// Coordinate indexed by `label` (one of `b, c, 1..r-1`).
    pub fn get(&self, label: Label) -> Option<&BigRational> {
        let idx = match label {
            Label::B => 0,
            Label::C => 1,
            Label::Num(i) if i < self.r => i + 1,
            _ => return None,
        };
        self.coords.get(idx)
    }

    pub fn is_zero_one(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero() || x.is_one())
    }
}

/// `[0:1:3/7]`
impl fmt::Display for FactorCoordinates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

impl Serialize for FactorCoordinates {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coords.len()))?;
        for x in &self.coords {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct EmbeddingCoordinates {
    pub factors: Vec<FactorCoordinates>,
}

impl EmbeddingCoordinates {
    /// Rows `factor,coordinate,value`, e.g. `2,c,1`.
    pub fn csv_rows(&self) -> Vec<String> {
        let mut rows = Vec::new();
        for f in &self.factors {
            for (label, value) in coordinate_labels(f.r).into_iter().zip(&f.coords) {
                rows.push(format!("{},{label},{value}", f.r));
            }
        }
        rows
    }
}

/// `[0:1]x[0:1:0]`
impl fmt::Display for EmbeddingCoordinates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// Forgets `Num(n), ..., Num(r+1)`.
pub fn forget_above(t: &LabeledTree, r: usize) -> Result<LabeledTree> {
    let mut out = t.clone();
    for i in (r + 1..=t.n()).rev() {
        out = out.forget(Label::Num(i))?;
    }
    Ok(out)
}

/// Factor `r` of a boundary point: after forgetting everything above `r`,
/// `z_x = 0` when `x` lies on the branch of `a` at the vertex of `r`, and
/// `z_x = 1` otherwise.
pub fn boundary_factor_coords(t: &LabeledTree, r: usize) -> Result<FactorCoordinates> {
    if !t.is_standard() {
        return Err(Error::NonStandardLabels);
    }
    if r == 0 || r > t.n() {
        return Err(Error::InvalidIndex {
            what: "embedding factor",
            index: r,
        });
    }
    let reduced = forget_above(t, r)?;
    let view = reduced.branches_at(Label::Num(r))?;
    let coords = coordinate_labels(r)
        .into_iter()
        .map(|x| {
            if view.same_branch(x, Label::A) {
                BigRational::zero()
            } else {
                BigRational::one()
            }
        })
        .collect();
    FactorCoordinates::normalized(r, coords)
}

pub fn embed_boundary(t: &LabeledTree) -> Result<EmbeddingCoordinates> {
    let factors = (1..=t.n())
        .map(|r| boundary_factor_coords(t, r))
        .collect::<Result<_>>()?;
    Ok(EmbeddingCoordinates { factors })
}

/// A point of the projective line over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtendedRational {
    Finite(BigRational),
    Infinity,
}

impl ExtendedRational {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtendedRational::Finite(x) => Some(x),
            ExtendedRational::Infinity => None,
        }
    }
}

impl From<BigRational> for ExtendedRational {
    fn from(x: BigRational) -> Self {
        ExtendedRational::Finite(x)
    }
}

impl From<i64> for ExtendedRational {
    fn from(x: i64) -> Self {
        ExtendedRational::Finite(BigRational::from_integer(BigInt::from(x)))
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(x) => write!(f, "{x}"),
            ExtendedRational::Infinity => f.write_str("inf"),
        }
    }
}

/// Accepts `inf`, integers and fractions such as `-3/7`.
impl FromStr for ExtendedRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(ExtendedRational::Infinity);
        }
        s.parse::<BigRational>()
            .map(ExtendedRational::Finite)
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
    }
}

/// Positions of the marked points of a smooth curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorConfiguration {
    points: BTreeMap<Label, ExtendedRational>,
}

impl InteriorConfiguration {
    /// Positions for `a, b, c, 1..n` in label order.
    pub fn new(points: BTreeMap<Label, ExtendedRational>) -> Result<InteriorConfiguration> {
        let n = points.len().saturating_sub(3);
        if points.keys().copied().ne(Label::standard_set(n)) {
            return Err(Error::InvalidConfiguration(
                "marked points must be exactly a, b, c, 1..n".into(),
            ));
        }
        let values: Vec<_> = points.values().collect();
        for (i, x) in values.iter().enumerate() {
            if values[i + 1..].contains(x) {
                return Err(Error::InvalidConfiguration(format!("two marked points at {x}")));
            }
        }
        Ok(InteriorConfiguration { points })
    }

    pub fn from_values(values: Vec<ExtendedRational>) -> Result<InteriorConfiguration> {
        let n = values.len().saturating_sub(3);
        InteriorConfiguration::new(Label::standard_set(n).into_iter().zip(values).collect())
    }

    pub fn n(&self) -> usize {
        self.points.len() - 3
    }

    pub fn get(&self, label: Label) -> Option<&ExtendedRational> {
        self.points.get(&label)
    }
}

/// `a=0,b=1,c=2,1=inf`
impl FromStr for InteriorConfiguration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let points = s
            .split(',')
            .map(|pair| {
                let (label, value) = pair
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected label=value, got {pair:?}")))?;
                Ok((label.trim().parse::<Label>()?, value.parse::<ExtendedRational>()?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        InteriorConfiguration::new(points)
    }
}

impl fmt::Display for InteriorConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|(l, x)| format!("{l}={x}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// The Möbius map sending `a -> 0`, `r -> inf`, `b -> 1`, evaluated at `z`.
/// `a`, `b`, `r` are distinct and `z` differs from `a` and `r`.
fn to_chart(
    z: &ExtendedRational,
    a: &ExtendedRational,
    b: &ExtendedRational,
    r: &ExtendedRational,
) -> BigRational {
    use ExtendedRational::{Finite, Infinity};
    if z == b {
        return BigRational::one();
    }
    match (z, a, b, r) {
        (Finite(z), Finite(a), Finite(b), Finite(r)) => {
            (z - a) * (b - r) / ((z - r) * (b - a))
        }
        (Infinity, Finite(a), Finite(b), Finite(r)) => (b - r) / (b - a),
        (Finite(z), Infinity, Finite(b), Finite(r)) => (b - r) / (z - r),
        (Finite(z), Finite(a), Finite(b), Infinity) => (z - a) / (b - a),
        (Finite(z), Finite(a), Infinity, Finite(r)) => (z - a) / (z - r),
        _ => unreachable!("distinct points include at most one infinity"),
    }
}

/// Factor `r` of an interior point: the entries `(p_a - p_x)/(p_r - p_x)`
/// for `x = b, c, 1..r-1`, points above `r` forgotten.
pub fn embed_interior(cfg: &InteriorConfiguration, r: usize) -> Result<FactorCoordinates> {
    if r == 0 || r > cfg.n() {
        return Err(Error::InvalidIndex {
            what: "embedding factor",
            index: r,
        });
    }
    let p = |l: Label| cfg.get(l).expect("validated label set");
    let (a, b, pr) = (p(Label::A), p(Label::B), p(Label::Num(r)));
    let coords = coordinate_labels(r)
        .into_iter()
        .map(|x| to_chart(p(x), a, b, pr))
        .collect();
    FactorCoordinates::normalized(r, coords)
}

pub fn embed_interior_all(cfg: &InteriorConfiguration) -> Result<EmbeddingCoordinates> {
    let factors = (1..=cfg.n())
        .map(|r| embed_interior(cfg, r))
        .collect::<Result<_>>()?;
    Ok(EmbeddingCoordinates { factors })
}

/// In the chart `p_a = 0`, `p_r = inf` the factor reads `[p_b : p_c : p_1 :
/// ... : p_{r-1}]`.
pub fn chart_coords(cfg: &InteriorConfiguration, r: usize) -> Result<FactorCoordinates> {
    if cfg.get(Label::A) != Some(&ExtendedRational::Finite(BigRational::zero()))
        || cfg.get(Label::Num(r)) != Some(&ExtendedRational::Infinity)
    {
        return Err(Error::InvalidConfiguration(format!(
            "expected a = 0 and {r} = inf"
        )));
    }
    let coords = coordinate_labels(r)
        .into_iter()
        .map(|x| {
            cfg.get(x)
                .and_then(ExtendedRational::finite)
                .cloned()
                .ok_or_else(|| Error::InvalidConfiguration(format!("{x} is not finite")))
        })
        .collect::<Result<_>>()?;
    FactorCoordinates::normalized(r, coords)
}

/// The largest absolute coordinate scaled to 1, for limit comparisons.
pub fn max_normalized(f: &FactorCoordinates) -> Vec<BigRational> {
    let m = f
        .coords
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(BigRational::one);
    f.coords.iter().map(|x| x / &m).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct HyperplaneFailure {
    pub tree: String,
    pub factor: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct HyperplaneReport {
    pub k: Composition,
    pub trees_checked: usize,
    pub failure: Option<HyperplaneFailure>,
}

impl HyperplaneReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks one tree of `Tour(k)`: for each `r` with `k_r >= 1`, factor `r`
/// must satisfy `z_b = 0`, then `z_c = 0` when `k_r >= 2`, then
/// `z_1 = ... = z_{k_r - 2} = 0`.
pub fn check_hyperplanes(t: &LabeledTree, k: &Composition) -> Result<Option<HyperplaneFailure>> {
    for (idx, &kr) in k.parts().iter().enumerate() {
        let r = idx + 1;
        if kr == 0 {
            continue;
        }
        let fail = |reason: String| {
            Ok(Some(HyperplaneFailure {
                tree: t.to_string(),
                factor: r,
                reason,
            }))
        };
        if kr >= 2 && kr - 2 > r - 1 {
            return fail(format!("k_{r} = {kr} indexes past z_{}", r - 1));
        }
        let coords = boundary_factor_coords(t, r)?;
        let mut required = vec![Label::B];
        if kr >= 2 {
            required.push(Label::C);
            required.extend((1..=kr - 2).map(Label::Num));
        }
        for x in required {
            let value = coords.get(x).expect("index guarded above");
            if !value.is_zero() {
                return fail(format!("z_{x} = {value} in {coords}"));
            }
        }
    }
    Ok(None)
}

pub fn verify_hyperplanes(k: &Composition) -> Result<HyperplaneReport> {
    let mut trees_checked = 0;
    for t in tour_set(k)? {
        trees_checked += 1;
        if let Some(failure) = check_hyperplanes(&t, k)? {
            return Ok(HyperplaneReport {
                k: k.clone(),
                trees_checked,
                failure: Some(failure),
            });
        }
    }
    Ok(HyperplaneReport {
        k: k.clone(),
        trees_checked,
        failure: None,
    })
}

/// For every winner `r` of the tournament: if `r` separates a label from
/// `a` after forgetting everything above `r`, it already does in `t`.
pub fn check_separation(transcript: &TournamentTranscript) -> Result<Option<String>> {
    let t = &transcript.tree;
    for (idx, &kr) in transcript.win_counts.parts().iter().enumerate() {
        let r = Label::Num(idx + 1);
        if kr == 0 {
            continue;
        }
        let reduced = forget_above(t, idx + 1)?;
        let before = reduced.branches_at(r)?;
        let after = t.branches_at(r)?;
        for &l in reduced.labels() {
            if l == Label::A || l == r {
                continue;
            }
            if !before.same_branch(l, Label::A) && after.same_branch(l, Label::A) {
                return Ok(Some(format!(
                    "{r} separates {l} from a in {reduced} but not in {t}"
                )));
            }
        }
    }
    Ok(None)
}

/// For every vertex `v` and branch `B` at `v` avoiding `a`, with `m` the
/// smallest label of `B` and `P` the path from `m` to `v`: when `m` first
/// plays, exactly the edges of `B` off `P` (and `m`'s leaf edge) are
/// labeled; `m` then meets each side edge along `P` and carries its label up
/// to the vertex before `v`.
pub fn check_branch_path(transcript: &TournamentTranscript) -> Result<Option<String>> {
    let t = &transcript.tree;
    let final_labels = transcript.final_edge_labels();
    for v in t.leaf_count()..t.vertex_count() {
        for u in t.neighbors(v) {
            if t.is_leaf(u) {
                continue;
            }
            let leaves = t.component_leaves(u, v);
            if leaves.contains(&Label::A) {
                continue;
            }
            let m = leaves[0];
            let xm = t.vertex_of(m).expect("leaf of the branch");
            let path = t.path(xm, v);
            let path_edges: Vec<usize> = path
                .windows(2)
                .map(|w| t.edge_between(w[0], w[1]).expect("adjacent").0)
                .collect();
            let in_branch = branch_vertices(t, u, v);
            let fail = |what: String| Ok(Some(format!("vertex {v}, branch min {m}: {what} in {t}")));

            let Some(first) = transcript.first_round_of(m) else {
                return fail("m never plays".into());
            };
            let labeled = transcript.labeled_before(first);
            for e in t.edges() {
                let (x, y) = t.endpoints(e)?;
                if !(in_branch[x] || in_branch[y]) {
                    continue;
                }
                let on_path = path_edges[1..].contains(&e.0);
                if labeled[e.0] == on_path {
                    return fail(format!(
                        "edge {e:?} {} before m plays",
                        if on_path { "labeled" } else { "unlabeled" }
                    ));
                }
            }
            let last = path_edges.len() - 1;
            for s in 1..path.len() - 1 {
                let w = path[s];
                let side = t
                    .neighbors(w)
                    .find(|&y| y != path[s - 1] && y != path[s + 1])
                    .expect("trivalent");
                let side_edge = t.edge_between(w, side).expect("adjacent").0;
                let opponent = final_labels[side_edge];
                let met = transcript.rounds.iter().any(|r| {
                    r.labeled_edge.0 == path_edges[s]
                        && r.loser == m
                        && Some(r.winner) == opponent
                });
                if !met {
                    return fail(format!("m does not meet the side edge at vertex {w}"));
                }
                if s < last && final_labels[path_edges[s]] != Some(m) {
                    return fail(format!("m does not advance past vertex {w}"));
                }
            }
        }
    }
    Ok(None)
}

fn branch_vertices(t: &LabeledTree, start: usize, blocked: usize) -> Vec<bool> {
    let mut seen = vec![false; t.vertex_count()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(x) = stack.pop() {
        for y in t.neighbors(x) {
            if y != blocked && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Runs both lemma checks on one tree.
pub fn check_lemmas(t: &LabeledTree) -> Result<Option<String>> {
    let transcript = run_tournament(t)?;
    if let Some(msg) = check_separation(&transcript)? {
        return Ok(Some(msg));
    }
    check_branch_path(&transcript)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> LabeledTree {
        s.parse().unwrap()
    }

    fn q(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    fn coords(f: &FactorCoordinates) -> String {
        f.to_string()
    }

    #[test]
    fn lemma_example_tree() {
        let tree = t("(a,b,((1,3),(5,((2,4),c))))");
        assert_eq!(coords(&boundary_factor_coords(&tree, 5).unwrap()), "[0:1:0:1:0:1]");
    }

    #[test]
    fn tour_11_points() {
        let first = t("(a,b,((c,2),1))");
        let second = t("(a,b,((c,1),2))");
        assert_eq!(embed_boundary(&first).unwrap().to_string(), "[0:1]x[0:1:0]");
        assert_eq!(embed_boundary(&second).unwrap().to_string(), "[0:1]x[0:1:1]");
        let unique = t("(a,b,(c,1))");
        assert_eq!(embed_boundary(&unique).unwrap().to_string(), "[0:1]");
        assert!(boundary_factor_coords(&unique, 2).is_err());
        assert!(boundary_factor_coords(&unique, 0).is_err());
    }

    #[test]
    fn csv_and_json() {
        let e = embed_boundary(&t("(a,b,((c,2),1))")).unwrap();
        assert_eq!(e.csv_rows(), vec!["1,b,0", "1,c,1", "2,b,0", "2,c,1", "2,1,0"]);
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"[["0","1"],["0","1","0"]]"#
        );
    }

    #[test]
    fn interior_direct_formula() {
        // a=0, b=1, c=2, 1=3, 2=5
        let cfg: InteriorConfiguration = "a=0,b=1,c=2,1=3,2=5".parse().unwrap();
        // factor 2: (p_a - p_x)/(p_2 - p_x) for x = b, c, 1: -1/4, -2/3, -3/2
        let f = embed_interior(&cfg, 2).unwrap();
        let raw = [q("-1/4"), q("-2/3"), q("-3/2")];
        let expected = FactorCoordinates::normalized(2, raw.to_vec()).unwrap();
        assert_eq!(f, expected);
        assert_eq!(coords(&f), "[1:8/3:6]");
    }

    #[test]
    fn interior_with_infinity() {
        let cfg: InteriorConfiguration = "a=0,b=2,c=3,1=inf".parse().unwrap();
        assert_eq!(embed_interior(&cfg, 1).unwrap(), chart_coords(&cfg, 1).unwrap());
        assert_eq!(coords(&embed_interior(&cfg, 1).unwrap()), "[1:3/2]");
        // infinity at a, b, c in turn against the finite formula after a
        // Möbius change of coordinates z -> 1/(z - 7).
        let finite: InteriorConfiguration = "a=7,b=1,c=2,1=3,2=5".parse().unwrap();
        let moved: InteriorConfiguration = "a=inf,b=-1/6,c=-1/5,1=-1/4,2=-1/2".parse().unwrap();
        assert_eq!(embed_interior_all(&finite).unwrap(), embed_interior_all(&moved).unwrap());
    }

    #[test]
    fn interior_rejects_coincident_points() {
        assert!("a=0,b=1,c=1".parse::<InteriorConfiguration>().is_err());
        assert!("a=inf,b=inf,c=1".parse::<InteriorConfiguration>().is_err());
        assert!("a=0,b=1,1=2".parse::<InteriorConfiguration>().is_err());
        assert!("a=0,b=1,c=x".parse::<InteriorConfiguration>().is_err());
    }

    #[test]
    fn hyperplane_examples() {
        let r = verify_hyperplanes(&Composition::new(vec![1, 1])).unwrap();
        assert!(r.passed());
        assert_eq!(r.trees_checked, 2);
        let r = verify_hyperplanes(&Composition::new(vec![0, 2])).unwrap();
        assert!(r.passed());
        assert_eq!(r.trees_checked, 1);
        let only = tour_set(&Composition::new(vec![0, 2])).unwrap().next().unwrap();
        let f = boundary_factor_coords(&only, 2).unwrap();
        assert!(f.get(Label::B).unwrap().is_zero() && f.get(Label::C).unwrap().is_zero());
    }

    #[test]
    fn hyperplane_failure_is_reported() {
        // Claim the (1,1) tree with 2 next to c lies in Tour(0,2).
        let tree = t("(a,b,((c,2),1))");
        let failure = check_hyperplanes(&tree, &Composition::new(vec![0, 2])).unwrap().unwrap();
        assert_eq!(failure.factor, 2);
        assert!(failure.reason.starts_with("z_c"));
    }

    #[test]
    fn lemma_checks_on_worked_example() {
        assert_eq!(check_lemmas(&t("(a,b,(((2,3),4),(c,1)))")).unwrap(), None);
    }
}
