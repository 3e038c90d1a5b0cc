//! Lazy tournaments on trivalent trees, the classes `Tour(k)`, and the
//! bijection `pi_lazy` that realizes the asymmetric string equation.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::multidegree::{ktilde, rightmost_zero};
use crate::trees::{enumerate_trees, EdgeId, LabeledTree};

/// One match of the tournament.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Round {
    #[serde(skip)]
    pub index: usize,
    pub loser: Label,
    pub winner: Label,
    pub advancer: Label,
    pub lazy: bool,
    /// The previously unlabeled edge that received `advancer`.
    #[serde(skip)]
    pub labeled_edge: EdgeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TournamentTranscript {
    pub tree: LabeledTree,
    pub rounds: Vec<Round>,
    /// `k_i` is the number of rounds won by `Num(i)`, for `i` up to the
    /// largest numbered label of the tree.
    pub win_counts: Composition,
}

impl TournamentTranscript {
    pub fn wins(&self, label: Label) -> usize {
        self.rounds.iter().filter(|r| r.winner == label).count()
    }

    pub fn losses(&self, label: Label) -> usize {
        self.rounds.iter().filter(|r| r.loser == label).count()
    }

    /// Index (0-based) of the first round `label` plays in.
    pub fn first_round_of(&self, label: Label) -> Option<usize> {
        self.rounds
            .iter()
            .position(|r| r.loser == label || r.winner == label)
    }

    /// Label on every edge after the tournament, indexed by edge id. The
    /// slot of the root vertex, which has no parent edge, is `None`.
    pub fn final_edge_labels(&self) -> Vec<Option<Label>> {
        let t = &self.tree;
        let mut labels = vec![None; t.vertex_count()];
        for (v, slot) in labels.iter_mut().enumerate().take(t.leaf_count()) {
            *slot = t.label_at(v);
        }
        for r in &self.rounds {
            labels[r.labeled_edge.0] = Some(r.advancer);
        }
        labels
    }

    /// Whether each edge was labeled before round `round` (0-based) began.
    pub fn labeled_before(&self, round: usize) -> Vec<bool> {
        let t = &self.tree;
        let mut labeled = vec![false; t.vertex_count()];
        for slot in labeled.iter_mut().take(t.leaf_count()) {
            *slot = true;
        }
        for r in &self.rounds[..round] {
            labeled[r.labeled_edge.0] = true;
        }
        labeled
    }
}

/// JSON form: `{"tree": "...", "rounds": [...], "win_counts": [...]}`.
impl Serialize for TournamentTranscript {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("TournamentTranscript", 3)?;
        s.serialize_field("tree", &self.tree.to_string())?;
        s.serialize_field("rounds", &self.rounds)?;
        s.serialize_field("win_counts", &self.win_counts)?;
        s.end()
    }
}

/// Runs the lazy tournament.
///
/// Each round picks, among labeled pairs `(i, j)`, `i < j`, meeting at a
/// vertex whose third edge `E` is unlabeled, the pair with the largest `i`.
/// The winner is `j`. `E` receives `i` when the far endpoint of `E` carries
/// a labeled edge `u != j` with `u > i`, otherwise `j`.
pub fn run_tournament(tree: &LabeledTree) -> Result<TournamentTranscript> {
    let l = tree.leaf_count();
    let vertex_count = tree.vertex_count();
    let mut edge_label: Vec<Option<Label>> = vec![None; vertex_count];
    for (v, slot) in edge_label.iter_mut().enumerate().take(l) {
        *slot = tree.label_at(v);
    }
    let incident: Vec<Vec<EdgeId>> = (0..vertex_count)
        .map(|v| if tree.is_leaf(v) { Vec::new() } else { tree.incident_edges(v) })
        .collect();

    let expected_rounds = tree.n();
    let mut rounds = Vec::with_capacity(expected_rounds);
    loop {
        // (smaller, larger, vertex, unlabeled edge)
        let mut best: Option<(Label, Label, usize, EdgeId)> = None;
        let mut tied = false;
        for (w, edges) in incident.iter().enumerate().skip(l) {
            let mut pair = [Label::A; 2];
            let mut filled = 0;
            let mut open = None;
            for &e in edges {
                match edge_label[e.0] {
                    Some(x) if filled < 2 => {
                        pair[filled] = x;
                        filled += 1;
                    }
                    Some(_) => filled += 1,
                    None => open = Some(e),
                }
            }
            let (Some(e), 2) = (open, filled) else {
                continue;
            };
            let (i, j) = if pair[0] < pair[1] {
                (pair[0], pair[1])
            } else {
                (pair[1], pair[0])
            };
            match best {
                Some((bi, ..)) if bi > i => {}
                Some((bi, ..)) if bi == i => tied = true,
                _ => {
                    best = Some((i, j, w, e));
                    tied = false;
                }
            }
        }
        let Some((i, j, w, e)) = best else {
            break;
        };
        if tied {
            return Err(Error::Internal(format!(
                "two eligible pairs share the maximal smaller label {i} in {tree}"
            )));
        }
        let (child, parent) = tree.endpoints(e)?;
        let far = if child == w { parent } else { child };
        let lazy = incident[far].iter().any(|&f| {
            f != e && matches!(edge_label[f.0], Some(u) if u != j && u > i)
        });
        let advancer = if lazy { i } else { j };
        edge_label[e.0] = Some(advancer);
        rounds.push(Round {
            index: rounds.len() + 1,
            loser: i,
            winner: j,
            advancer,
            lazy,
            labeled_edge: e,
        });
    }

    if rounds.len() != expected_rounds {
        return Err(Error::Internal(format!(
            "{} rounds completed in {tree}, expected {expected_rounds}",
            rounds.len()
        )));
    }
    let width = tree.labels().iter().filter_map(|l| l.num()).max().unwrap_or(0);
    let mut counts = vec![0usize; width];
    for r in &rounds {
        if let Label::Num(x) = r.winner {
            counts[x - 1] += 1;
        }
    }
    Ok(TournamentTranscript {
        tree: tree.clone(),
        rounds,
        win_counts: Composition::new(counts),
    })
}

fn require_tour_tree(tree: &LabeledTree) -> Result<()> {
    if !tree.is_standard() {
        return Err(Error::NonStandardLabels);
    }
    if !tree.is_ab_adjacent() {
        return Err(Error::NotAbAdjacent);
    }
    Ok(())
}

/// The composition `k` with `tree` in `Tour(k)`.
pub fn classify(tree: &LabeledTree) -> Result<Composition> {
    require_tour_tree(tree)?;
    Ok(run_tournament(tree)?.win_counts)
}

/// All trees of `Tour(k)` in enumeration order.
pub fn tour_set(k: &Composition) -> Result<impl Iterator<Item = LabeledTree>> {
    k.check_square()?;
    let k = k.clone();
    Ok(enumerate_trees(k.len(), true)?.filter(move |t| {
        classify(t).expect("enumerated trees have a and b adjacent") == k
    }))
}

/// Collapses the first match of the tournament. Returns the reduced tree
/// and the first-round winner `j`.
///
/// With `(i, j)` the first pair: when `j` wins more than once, the leaf `i`
/// is forgotten and labels above `i` shift down by one; when `j` wins once,
/// the leaf `j` is forgotten and labels above `j` shift down.
pub fn pi_lazy(tree: &LabeledTree) -> Result<(LabeledTree, Label)> {
    require_tour_tree(tree)?;
    if tree.n() == 0 {
        return Err(Error::TooFewLeaves(tree.leaf_count()));
    }
    let transcript = run_tournament(tree)?;
    let first = transcript.rounds[0];
    let (i, j) = (first.loser, first.winner);
    let Label::Num(jn) = j else {
        return Err(Error::Internal(format!("first-round winner {j} is not numbered")));
    };
    let reduced = if transcript.win_counts.parts()[jn - 1] > 1 {
        let Label::Num(inum) = i else {
            return Err(Error::Internal(format!(
                "non-lazy first round with loser {i} in {tree}"
            )));
        };
        tree.forget(i)?.relabel(shift_down_above(inum))?
    } else {
        tree.forget(j)?.relabel(shift_down_above(jn))?
    };
    Ok((reduced, j))
}

/// Inverse of [`pi_lazy`]: the unique tree of `Tour(k)` that collapses to
/// `reduced` with first-round winner `j`.
pub fn pi_lazy_inverse(reduced: &LabeledTree, j: Label, k: &Composition) -> Result<LabeledTree> {
    let Label::Num(jn) = j else {
        return Err(Error::InvalidComposition(format!("winner {j} is not numbered")));
    };
    let i = rightmost_zero(k)?;
    let target = ktilde(k, jn)?;
    let found = classify(reduced)?;
    if found != target {
        return Err(Error::InvalidComposition(format!(
            "tree is in Tour({found}), expected Tour({target})"
        )));
    }
    if k.parts()[jn - 1] > 1 {
        let Label::Num(inum) = i else {
            unreachable!("a part above 1 forces a zero part");
        };
        let lifted = reduced.relabel(shift_up_from(inum))?;
        lifted.insert_leaf(lifted.leaf_edge(j)?, i)
    } else {
        let lifted = reduced.relabel(shift_up_from(jn))?;
        lifted.insert_leaf(lifted.leaf_edge(i)?, j)
    }
}

fn shift_down_above(threshold: usize) -> impl Fn(Label) -> Label {
    move |l| match l {
        Label::Num(x) if x > threshold => Label::Num(x - 1),
        other => other,
    }
}

fn shift_up_from(threshold: usize) -> impl Fn(Label) -> Label {
    move |l| match l {
        Label::Num(x) if x >= threshold => Label::Num(x + 1),
        other => other,
    }
}
