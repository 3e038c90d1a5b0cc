//! Nested-parenthesis text format.
//!
//! Written from the vertex adjacent to `a`: `(a,X,Y)` where `X` and `Y` are
//! leaves or pairs `(U,V)`. Children are printed in canonical order, but the
//! parser accepts any order and any choice of top-level vertex.

use std::fmt;
use std::str::FromStr;

use super::LabeledTree;
use crate::error::Error;
use crate::label::Label;

impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_vertex(f, self.root())
    }
}

impl LabeledTree {
    fn write_vertex(&self, f: &mut fmt::Formatter<'_>, v: usize) -> fmt::Result {
        if let Some(label) = self.label_at(v) {
            return write!(f, "{label}");
        }
        f.write_str("(")?;
        for (i, &c) in self.children(v).iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            self.write_vertex(f, c as usize)?;
        }
        f.write_str(")")
    }
}

enum Node {
    Leaf(usize),
    Internal(usize),
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    labels: Vec<Label>,
    internal_count: usize,
    edges: Vec<(Node, Node)>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), Error> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn item(&mut self) -> Result<Node, Error> {
        match self.peek() {
            Some(b'(') => self.group(2),
            Some(_) => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && self.bytes[self.pos].is_ascii_alphanumeric()
                {
                    self.pos += 1;
                }
                let token = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("");
                if token.is_empty() {
                    return Err(self.error("expected a label or `(`"));
                }
                let label: Label = token.parse()?;
                self.labels.push(label);
                Ok(Node::Leaf(self.labels.len() - 1))
            }
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn group(&mut self, arity: usize) -> Result<Node, Error> {
        self.expect(b'(')?;
        let me = self.internal_count;
        self.internal_count += 1;
        let mut count = 0;
        loop {
            let child = self.item()?;
            self.edges.push((Node::Internal(me), child));
            count += 1;
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error("expected `,` or `)`")),
            }
        }
        if count != arity {
            return Err(self.error(&format!(
                "group has {count} elements, expected {arity}"
            )));
        }
        Ok(Node::Internal(me))
    }
}

impl FromStr for LabeledTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            bytes: s.as_bytes(),
            pos: 0,
            labels: Vec::new(),
            internal_count: 0,
            edges: Vec::new(),
        };
        if p.peek() != Some(b'(') {
            return Err(p.error("expected `(`"));
        }
        p.group(3)?;
        if p.peek().is_some() {
            return Err(p.error("trailing input"));
        }
        let l = p.labels.len();
        let index = |node: &Node| match *node {
            Node::Leaf(i) => i,
            Node::Internal(i) => l + i,
        };
        let edges: Vec<(usize, usize)> = p.edges.iter().map(|(u, v)| (index(u), index(v))).collect();
        LabeledTree::from_edges(p.labels, &edges)
    }
}
