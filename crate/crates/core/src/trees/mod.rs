//! Leaf-labeled trivalent trees.
//!
//! A tree is stored in canonical form: it is rooted at the internal vertex
//! adjacent to leaf `a`, leaves occupy vertex ids `0..L` in label order,
//! internal vertices are numbered in preorder with children visited in
//! order of their smallest leaf label. Two trees are therefore equal (and
//! hash equally) exactly when they are isomorphic as leaf-labeled trees.

mod enumerate;
mod text;

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::label::Label;

pub use enumerate::{
    enumerate_trees, enumerate_trees_bounded, par_for_each_partition, par_map_partitions, partition_seeds, Enumeration,
    DEFAULT_MAX_N,
};

const NONE: u32 = u32::MAX;

/// An edge, identified by its child vertex in the canonical rooting.
///
/// Leaf edges have the id of their leaf, which is the rank of the leaf's
/// label within the tree's sorted label set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledTree {
    labels: Vec<Label>,
    adj: Vec<[u32; 3]>,
}

/// The branches at the internal vertex adjacent to a leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchView {
    pub at_vertex: usize,
    /// Leaf labels of each branch, sorted. The first branch is the queried
    /// leaf itself; the other two are ordered by smallest label.
    pub branches: Vec<Vec<Label>>,
}

impl BranchView {
    pub fn branch_of(&self, label: Label) -> Option<usize> {
        self.branches
            .iter()
            .position(|b| b.binary_search(&label).is_ok())
    }

    pub fn same_branch(&self, x: Label, y: Label) -> bool {
        match (self.branch_of(x), self.branch_of(y)) {
            (Some(p), Some(q)) => p == q,
            _ => false,
        }
    }
}

/// The unique tree on `{a, b, c}`.
pub fn star_tree() -> LabeledTree {
    LabeledTree {
        labels: vec![Label::A, Label::B, Label::C],
        adj: vec![[3, NONE, NONE], [3, NONE, NONE], [3, NONE, NONE], [0, 1, 2]],
    }
}

impl LabeledTree {
    /// Builds a tree from an edge list. Vertices `0..leaf_labels.len()` are
    /// leaves carrying the given labels; every other vertex is internal.
    pub fn from_edges(leaf_labels: Vec<Label>, edges: &[(usize, usize)]) -> Result<LabeledTree> {
        let vertex_count = edges
            .iter()
            .map(|&(u, v)| u.max(v) + 1)
            .max()
            .unwrap_or(0)
            .max(leaf_labels.len());
        let mut adj = vec![[NONE; 3]; vertex_count];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidTree(format!("loop at vertex {u}")));
            }
            push_neighbor(&mut adj, u, v)?;
            push_neighbor(&mut adj, v, u)?;
        }
        canonicalize(leaf_labels, adj)
    }

    /// Number of numbered leaves in a standard tree, i.e. leaf count minus 3.
    pub fn n(&self) -> usize {
        self.labels.len() - 3
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() - 1
    }

    /// Sorted leaf labels.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// The internal vertex adjacent to leaf `a`.
    pub fn root(&self) -> usize {
        self.labels.len()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.labels.binary_search(&label).is_ok()
    }

    pub fn vertex_of(&self, label: Label) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v < self.labels.len()
    }

    /// The label of a leaf vertex.
    pub fn label_at(&self, v: usize) -> Option<Label> {
        self.labels.get(v).copied()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v]
            .iter()
            .filter(|&&u| u != NONE)
            .map(|&u| u as usize)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    /// Parent in the canonical rooting; `None` for the root.
    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != self.root()).then(|| self.adj[v][0] as usize)
    }

    /// Children in canonical order (by smallest leaf label below).
    pub fn children(&self, v: usize) -> &[u32] {
        if v == self.root() {
            &self.adj[v][..]
        } else if self.is_leaf(v) {
            &[]
        } else {
            &self.adj[v][1..]
        }
    }

    /// All edges in canonical edge order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        let root = self.root();
        (0..self.adj.len()).filter(move |&v| v != root).map(EdgeId)
    }

    /// The two endpoints `(child, parent)` of an edge.
    pub fn endpoints(&self, e: EdgeId) -> Result<(usize, usize)> {
        if e.0 >= self.adj.len() || e.0 == self.root() {
            return Err(Error::UnknownEdge(e.0));
        }
        Ok((e.0, self.adj[e.0][0] as usize))
    }

    /// The edge incident to a pair of adjacent vertices.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<EdgeId> {
        if self.parent(u) == Some(v) {
            Some(EdgeId(u))
        } else if self.parent(v) == Some(u) {
            Some(EdgeId(v))
        } else {
            None
        }
    }

    /// The three edges at an internal vertex.
    pub fn incident_edges(&self, v: usize) -> Vec<EdgeId> {
        self.neighbors(v)
            .map(|u| self.edge_between(u, v).expect("adjacent vertices share an edge"))
            .collect()
    }

    pub fn leaf_edge(&self, label: Label) -> Result<EdgeId> {
        self.vertex_of(label).map(EdgeId).ok_or(Error::LabelAbsent(label))
    }

    pub fn is_leaf_edge(&self, e: EdgeId) -> bool {
        self.is_leaf(e.0)
    }

    /// Whether the leaf edges of `a` and `b` share a vertex.
    pub fn is_ab_adjacent(&self) -> bool {
        match (self.vertex_of(Label::A), self.vertex_of(Label::B)) {
            (Some(a), Some(b)) => self.adj[a][0] == self.adj[b][0],
            _ => false,
        }
    }

    /// Whether the leaves are labeled exactly by `a, b, c, 1, ..., n`.
    pub fn is_standard(&self) -> bool {
        self.labels
            .iter()
            .enumerate()
            .all(|(r, &l)| l == Label::from_rank(r))
    }

    /// Undirected edge list `(child, parent)` in canonical edge order.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges().map(|e| (e.0, self.adj[e.0][0] as usize)).collect()
    }

    /// Checks structural invariants: degrees, counts, connectivity and the
    /// canonical numbering.
    pub fn check_invariants(&self) -> Result<()> {
        let l = self.labels.len();
        if l < 3 || self.adj.len() != 2 * l - 2 {
            return Err(Error::InvalidTree(format!(
                "{} leaves but {} vertices",
                l,
                self.adj.len()
            )));
        }
        for v in 0..self.adj.len() {
            let d = self.degree(v);
            if (self.is_leaf(v) && d != 1) || (!self.is_leaf(v) && d != 3) {
                return Err(Error::InvalidTree(format!("vertex {v} has degree {d}")));
            }
        }
        let recanon = canonicalize(self.labels.clone(), self.adj.clone())?;
        if &recanon != self {
            return Err(Error::InvalidTree("representation is not canonical".into()));
        }
        Ok(())
    }

    /// Subdivides `edge` and attaches a new leaf labeled `label` at the new
    /// vertex.
    pub fn insert_leaf(&self, edge: EdgeId, label: Label) -> Result<LabeledTree> {
        let (child, parent) = self.endpoints(edge)?;
        if self.contains(label) {
            return Err(Error::DuplicateLabel(label));
        }
        let l = self.labels.len();
        // Old internal vertices shift up by one to make room for the new leaf.
        let shift = |v: usize| if v < l { v } else { v + 1 };
        let mut adj = Vec::with_capacity(self.adj.len() + 2);
        for (v, row) in self.adj.iter().enumerate() {
            if v == l {
                adj.push([NONE; 3]);
            }
            adj.push(row.map(|u| if u == NONE { NONE } else { shift(u as usize) as u32 }));
        }
        let new_leaf = l;
        let w = adj.len();
        let (c, p) = (shift(child), shift(parent));
        adj.push([c as u32, p as u32, new_leaf as u32]);
        replace_neighbor(&mut adj[c], p, w);
        replace_neighbor(&mut adj[p], c, w);
        adj[new_leaf] = [w as u32, NONE, NONE];
        let mut labels = self.labels.clone();
        labels.push(label);
        canonicalize(labels, adj)
    }

    /// Removes a leaf and suppresses the resulting degree-2 vertex. Labels
    /// are not renumbered. Leaf `a` anchors the canonical form and cannot
    /// be forgotten.
    pub fn forget(&self, label: Label) -> Result<LabeledTree> {
        if label == Label::A {
            return Err(Error::CannotForget(label));
        }
        let x = self.vertex_of(label).ok_or(Error::LabelAbsent(label))?;
        if self.labels.len() < 4 {
            return Err(Error::TooFewLeaves(self.labels.len()));
        }
        let w = self.adj[x][0] as usize;
        let others: Vec<usize> = self.neighbors(w).filter(|&u| u != x).collect();
        let (y, z) = (others[0], others[1]);

        let mut adj = self.adj.clone();
        replace_neighbor(&mut adj[y], w, z);
        replace_neighbor(&mut adj[z], w, y);
        // Drop vertices x (a leaf) and w (internal), renumbering the rest.
        let remap = |v: usize| -> usize {
            let mut r = v;
            if v > x {
                r -= 1;
            }
            if v > w {
                r -= 1;
            }
            r
        };
        let adj: Vec<[u32; 3]> = adj
            .iter()
            .enumerate()
            .filter(|&(v, _)| v != x && v != w)
            .map(|(_, row)| row.map(|u| if u == NONE { NONE } else { remap(u as usize) as u32 }))
            .collect();
        let mut labels = self.labels.clone();
        labels.remove(x);
        canonicalize(labels, adj)
    }

    /// Applies a label substitution. The map must be injective on the
    /// tree's labels and must fix `a`.
    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> Result<LabeledTree> {
        let labels: Vec<Label> = self.labels.iter().map(|&l| f(l)).collect();
        if labels[0] != Label::A {
            return Err(Error::InvalidTree("relabeling must fix a".into()));
        }
        canonicalize(labels, self.adj.clone())
    }

    /// The branches at the internal vertex adjacent to the given leaf.
    pub fn branches_at(&self, label: Label) -> Result<BranchView> {
        let x = self.vertex_of(label).ok_or(Error::LabelAbsent(label))?;
        let v = self.adj[x][0] as usize;
        let mut branches: Vec<Vec<Label>> = self
            .neighbors(v)
            .map(|u| self.component_leaves(u, v))
            .collect();
        branches.sort_by_key(|b| (b.as_slice() != [label], b[0]));
        Ok(BranchView {
            at_vertex: v,
            branches,
        })
    }

    /// Sorted leaf labels reachable from `start` without passing `blocked`.
    pub fn component_leaves(&self, start: usize, blocked: usize) -> Vec<Label> {
        let mut out = Vec::new();
        let mut stack = vec![(start, blocked)];
        while let Some((v, from)) = stack.pop() {
            if self.is_leaf(v) {
                out.push(self.labels[v]);
            }
            for u in self.neighbors(v) {
                if u != from {
                    stack.push((u, v));
                }
            }
        }
        out.sort();
        out
    }

    /// Vertices on the path from `from` to `to`, inclusive.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.adj.len()];
        let mut queue = VecDeque::from([from]);
        prev[from] = from;
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for u in self.neighbors(v) {
                if prev[u] == usize::MAX {
                    prev[u] = v;
                    queue.push_back(u);
                }
            }
        }
        let mut path = vec![to];
        let mut v = to;
        while v != from {
            v = prev[v];
            path.push(v);
        }
        path.reverse();
        path
    }
}

fn push_neighbor(adj: &mut [[u32; 3]], v: usize, u: usize) -> Result<()> {
    let slot = adj[v]
        .iter()
        .position(|&s| s == NONE)
        .ok_or_else(|| Error::InvalidTree(format!("vertex {v} has degree above 3")))?;
    adj[v][slot] = u as u32;
    Ok(())
}

fn replace_neighbor(row: &mut [u32; 3], old: usize, new: usize) {
    for s in row.iter_mut() {
        if *s == old as u32 {
            *s = new as u32;
            return;
        }
    }
    unreachable!("vertex {old} is not a neighbor");
}

/// Validates a raw adjacency (leaves first, any internal numbering, any
/// neighbor order) and rewrites it in canonical form.
fn canonicalize(labels: Vec<Label>, adj: Vec<[u32; 3]>) -> Result<LabeledTree> {
    let l = labels.len();
    if l < 3 {
        return Err(Error::InvalidTree(format!("{l} leaves; at least 3 required")));
    }
    if adj.len() != 2 * l - 2 {
        return Err(Error::InvalidTree(format!(
            "{l} leaves require {} vertices, found {}",
            2 * l - 2,
            adj.len()
        )));
    }
    let degree = |v: usize| adj[v].iter().filter(|&&u| u != NONE).count();
    for v in 0..adj.len() {
        let d = degree(v);
        let want = if v < l { 1 } else { 3 };
        if d != want {
            return Err(Error::InvalidTree(format!(
                "vertex {v} has degree {d}, expected {want}"
            )));
        }
        for &u in adj[v].iter().filter(|&&u| u != NONE) {
            if u as usize >= adj.len() || !adj[u as usize].contains(&(v as u32)) {
                return Err(Error::InvalidTree(format!("asymmetric edge {v}-{u}")));
            }
        }
    }

    // Leaves are renumbered into label order.
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by_key(|&v| labels[v]);
    if order.windows(2).any(|w| labels[w[0]] == labels[w[1]]) {
        return Err(Error::InvalidTree("duplicate leaf label".into()));
    }
    if labels[order[0]] != Label::A {
        return Err(Error::InvalidTree("leaf a is required".into()));
    }
    let mut leaf_rank = vec![0usize; l];
    for (rank, &v) in order.iter().enumerate() {
        leaf_rank[v] = rank;
    }

    let a_old = order[0];
    let root_old = adj[a_old][0] as usize;
    if root_old < l {
        return Err(Error::InvalidTree("leaf a is adjacent to a leaf".into()));
    }

    // Traverse from the root: parent pointers and a preorder of vertices.
    let mut parent = vec![usize::MAX; adj.len()];
    let mut pre = Vec::with_capacity(adj.len());
    let mut stack = vec![root_old];
    parent[root_old] = root_old;
    while let Some(v) = stack.pop() {
        pre.push(v);
        for &u in adj[v].iter().filter(|&&u| u != NONE) {
            let u = u as usize;
            if u == parent[v] {
                continue;
            }
            if parent[u] != usize::MAX {
                return Err(Error::InvalidTree("cycle detected".into()));
            }
            parent[u] = v;
            stack.push(u);
        }
    }
    if pre.len() != adj.len() {
        return Err(Error::InvalidTree("tree is disconnected".into()));
    }

    // Smallest leaf rank below each vertex.
    let mut min_below = vec![usize::MAX; adj.len()];
    for &v in pre.iter().rev() {
        if v < l {
            min_below[v] = leaf_rank[v];
        }
        if v != root_old {
            let p = parent[v];
            min_below[p] = min_below[p].min(min_below[v]);
        }
    }

    let sorted_children = |v: usize| -> Vec<usize> {
        let mut ch: Vec<usize> = adj[v]
            .iter()
            .filter(|&&u| u != NONE && u as usize != parent[v])
            .map(|&u| u as usize)
            .collect();
        ch.sort_by_key(|&u| min_below[u]);
        ch
    };

    // Canonical preorder numbering of internal vertices.
    let mut new_id = vec![usize::MAX; adj.len()];
    new_id[..l].copy_from_slice(&leaf_rank[..l]);
    let mut next = l;
    let mut stack = vec![root_old];
    while let Some(v) = stack.pop() {
        new_id[v] = next;
        next += 1;
        for &u in sorted_children(v).iter().rev() {
            if u >= l {
                stack.push(u);
            }
        }
    }

    let mut new_adj = vec![[NONE; 3]; adj.len()];
    for v in 0..adj.len() {
        let row = &mut new_adj[new_id[v]];
        if v < l {
            row[0] = new_id[parent[v]] as u32;
            continue;
        }
        let mut slot = 0;
        if v != root_old {
            row[0] = new_id[parent[v]] as u32;
            slot = 1;
        }
        for u in sorted_children(v) {
            row[slot] = new_id[u] as u32;
            slot += 1;
        }
    }
    let mut sorted_labels: Vec<Label> = order.iter().map(|&v| labels[v]).collect();
    sorted_labels.shrink_to_fit();
    Ok(LabeledTree {
        labels: sorted_labels,
        adj: new_adj,
    })
}
