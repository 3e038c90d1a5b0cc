//! Parking functions, column restriction, the reduction `r`, and the
//! bijection `tau` between tournament trees and column-restricted parking
//! functions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::composition::{weak_compositions, Composition};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::tournament::run_tournament;
use crate::trees::LabeledTree;

/// A parking function of size `n`: `n` columns of cars, each column stored
/// bottom to top in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct ParkingFunction {
    columns: Vec<Vec<usize>>,
}

impl ParkingFunction {
    /// Validates and normalizes (sorts) the columns.
    pub fn new(mut columns: Vec<Vec<usize>>) -> Result<ParkingFunction> {
        let n = columns.len();
        let mut seen = vec![false; n + 1];
        for col in &mut columns {
            col.sort_unstable();
            for &car in col.iter() {
                if car == 0 || car > n {
                    return Err(Error::InvalidParkingFunction(format!(
                        "car {car} outside 1..{n}"
                    )));
                }
                if std::mem::replace(&mut seen[car], true) {
                    return Err(Error::InvalidParkingFunction(format!("car {car} repeated")));
                }
            }
        }
        if let Some(missing) = (1..=n).find(|&c| !seen[c]) {
            return Err(Error::InvalidParkingFunction(format!("car {missing} missing")));
        }
        let mut suffix = 0;
        for (m, col) in columns.iter().rev().enumerate() {
            suffix += col.len();
            if suffix < m + 1 {
                return Err(Error::InvalidParkingFunction(format!(
                    "last {} columns hold only {suffix} cars",
                    m + 1
                )));
            }
        }
        Ok(ParkingFunction { columns })
    }

    pub fn empty() -> ParkingFunction {
        ParkingFunction { columns: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    /// 1-based column holding `car`.
    pub fn column_of(&self, car: usize) -> Option<usize> {
        self.columns.iter().position(|c| c.contains(&car)).map(|i| i + 1)
    }

    pub fn heights(&self) -> Composition {
        Composition::new(self.columns.iter().map(Vec::len).collect())
    }

    /// Whether `car` is the largest entry of its column.
    pub fn is_top(&self, car: usize) -> bool {
        self.columns.iter().any(|c| c.last() == Some(&car))
    }
}

impl TryFrom<Vec<Vec<usize>>> for ParkingFunction {
    type Error = Error;

    fn try_from(columns: Vec<Vec<usize>>) -> Result<Self> {
        ParkingFunction::new(columns)
    }
}

impl From<ParkingFunction> for Vec<Vec<usize>> {
    fn from(p: ParkingFunction) -> Self {
        p.columns
    }
}

/// `3;-;1;2,4`: columns left to right, `-` for an empty column.
impl fmt::Display for ParkingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, col) in self.columns.iter().enumerate() {
            if idx > 0 {
                f.write_str(";")?;
            }
            if col.is_empty() {
                f.write_str("-")?;
            } else {
                let cars: Vec<String> = col.iter().map(usize::to_string).collect();
                f.write_str(&cars.join(","))?;
            }
        }
        Ok(())
    }
}

impl FromStr for ParkingFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(ParkingFunction::empty());
        }
        let columns = s
            .split(';')
            .map(|col| {
                let col = col.trim();
                if col == "-" {
                    return Ok(Vec::new());
                }
                col.split(',')
                    .map(|car| {
                        car.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad car {car:?} in {s:?}")))
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        ParkingFunction::new(columns)
    }
}

/// Dominance indices `d_x`: the number of columns strictly right of car
/// `x` with no entry above `x`, empty columns included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceReport(Vec<usize>);

impl DominanceReport {
    /// `d_car`, for `car` in `1..=n`.
    pub fn get(&self, car: usize) -> usize {
        self.0[car - 1]
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// The smallest car with `x <= d_x`, if any.
    pub fn first_violation(&self) -> Option<usize> {
        (1..=self.0.len()).find(|&x| x <= self.0[x - 1])
    }
}

pub fn dominance(p: &ParkingFunction) -> DominanceReport {
    let cols = p.columns();
    let mut d = vec![0; p.n()];
    for (ci, col) in cols.iter().enumerate() {
        for &x in col {
            d[x - 1] = cols[ci + 1..]
                .iter()
                .filter(|c| c.last().is_none_or(|&top| top < x))
                .count();
        }
    }
    DominanceReport(d)
}

pub fn is_column_restricted(p: &ParkingFunction) -> bool {
    dominance(p).first_violation().is_none()
}

/// Every parking function with column heights `k`, cars assigned in
/// increasing order to the leftmost columns first.
fn fillings(k: &[usize]) -> Vec<ParkingFunction> {
    let n = k.len();
    let mut out = Vec::new();
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); n];
    fn go(car: usize, n: usize, k: &[usize], columns: &mut Vec<Vec<usize>>, out: &mut Vec<ParkingFunction>) {
        if car > n {
            out.push(ParkingFunction { columns: columns.clone() });
            return;
        }
        for c in 0..n {
            if columns[c].len() < k[c] {
                columns[c].push(car);
                go(car + 1, n, k, columns, out);
                columns[c].pop();
            }
        }
    }
    go(1, n, k, &mut columns, &mut out);
    out
}

/// All column-restricted parking functions with column heights `k`. Empty
/// when `k` violates the Dyck condition.
pub fn cpf_set(k: &Composition) -> Result<Vec<ParkingFunction>> {
    k.check_square()?;
    if !k.is_reverse_catalan() {
        return Ok(Vec::new());
    }
    Ok(fillings(k.parts()).into_iter().filter(is_column_restricted).collect())
}

/// Every parking function of size `n`, grouped by column heights in
/// lexicographic order.
pub fn parking_functions(n: usize) -> Vec<ParkingFunction> {
    weak_compositions(n)
        .filter(Composition::is_reverse_catalan)
        .flat_map(|k| fillings(k.parts()))
        .collect()
}

/// Removes car 1, decrements the other cars and deletes the rightmost
/// empty column.
pub fn r_map(p: &ParkingFunction) -> Result<ParkingFunction> {
    if p.n() == 0 {
        return Err(Error::InvalidParkingFunction(
            "the empty parking function has no car 1".into(),
        ));
    }
    let mut columns: Vec<Vec<usize>> = p
        .columns()
        .iter()
        .map(|c| c.iter().filter(|&&x| x != 1).map(|x| x - 1).collect())
        .collect();
    let z = columns
        .iter()
        .rposition(Vec::is_empty)
        .expect("n - 1 cars in n columns leave one empty");
    columns.remove(z);
    ParkingFunction::new(columns)
}

/// Car `m` goes in column `j` exactly when `j` wins round `m`.
pub fn tau(t: &LabeledTree) -> Result<ParkingFunction> {
    if !t.is_standard() {
        return Err(Error::NonStandardLabels);
    }
    if !t.is_ab_adjacent() {
        return Err(Error::NotAbAdjacent);
    }
    let transcript = run_tournament(t)?;
    let mut columns = vec![Vec::new(); t.n()];
    for r in &transcript.rounds {
        let Label::Num(j) = r.winner else {
            return Err(Error::Internal(format!("{} won a round in {t}", r.winner)));
        };
        columns[j - 1].push(r.index);
    }
    ParkingFunction::new(columns)
}

/// Rebuilds the tree from a column-restricted parking function by replaying
/// the tournament forwards on a rooted forest.
///
/// Losers are `c` and the empty columns. Each label of `{c, 1..n}` starts as
/// its own tree with a dangling root edge. Car `m` in column `j` merges the
/// tree whose root edge carries the largest loser `i` with the tree whose
/// root edge carries `j`, then hangs a new root edge labeled `i` when `m` is
/// the top of column `j` and `m < n`, and `j` otherwise. Finally `a` and `b`
/// are attached at the last root.
pub fn tau_inverse(p: &ParkingFunction) -> Result<LabeledTree> {
    if let Some(car) = dominance(p).first_violation() {
        return Err(Error::NotColumnRestricted {
            car,
            dominance: dominance(p).get(car),
        });
    }
    let n = p.n();
    let mut leaf_labels = vec![Label::A, Label::B];
    leaf_labels.extend(Label::standard_set(n).into_iter().skip(2));
    // Leaves are vertices 0..n+3 in label order; internal vertices follow.
    let mut next_vertex = leaf_labels.len();
    let mut edges = Vec::with_capacity(2 * n + 3);
    // Dangling root edge label -> vertex below it.
    let mut roots: BTreeMap<Label, usize> =
        (2..leaf_labels.len()).map(|v| (leaf_labels[v], v)).collect();
    let losers: Vec<Label> = std::iter::once(Label::C)
        .chain(
            p.columns()
                .iter()
                .enumerate()
                .filter(|(_, c)| c.is_empty())
                .map(|(idx, _)| Label::Num(idx + 1)),
        )
        .collect();

    for car in 1..=n {
        let j = Label::Num(p.column_of(car).expect("every car is placed"));
        let i = *losers
            .iter()
            .rev()
            .find(|l| roots.contains_key(l))
            .ok_or_else(|| Error::Jammed {
                car,
                reason: "no loser labels a root edge".into(),
            })?;
        let below_j = roots.remove(&j).ok_or_else(|| Error::Jammed {
            car,
            reason: format!("no root edge is labeled {j}"),
        })?;
        let below_i = roots.remove(&i).expect("found above");
        let w = next_vertex;
        next_vertex += 1;
        edges.push((below_i, w));
        edges.push((below_j, w));
        let lazy = p.is_top(car) && car < n;
        roots.insert(if lazy { i } else { j }, w);
    }

    let (_, last) = roots.pop_first().expect("one tree remains");
    if !roots.is_empty() {
        return Err(Error::Internal(format!("{} trees left after the last car", roots.len() + 1)));
    }
    let v = next_vertex;
    edges.extend([(last, v), (0, v), (1, v)]);
    LabeledTree::from_edges(leaf_labels, &edges)
}
