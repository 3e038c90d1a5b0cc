use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sequence of nonnegative parts `(k_1, ..., k_n)`.
///
/// Multidegree queries require a weak composition of `n` into `n` parts,
/// which [`Composition::check_square`] validates. The empty composition
/// corresponds to `n = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Self {
        Composition(parts)
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    /// Part `k_j` for a 1-based index `j`.
    pub fn part(&self, j: usize) -> Option<usize> {
        j.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    /// Checks that the parts sum to the length.
    pub fn check_square(&self) -> Result<()> {
        if self.sum() != self.len() {
            return Err(Error::InvalidComposition(format!(
                "parts of ({self}) sum to {} but there are {} parts",
                self.sum(),
                self.len()
            )));
        }
        Ok(())
    }

    /// Suffix condition: every suffix of length `m` sums to at least `m`.
    ///
    /// These are exactly the column heights of Dyck paths drawn with right
    /// and down steps.
    pub fn is_reverse_catalan(&self) -> bool {
        let mut suffix = 0;
        for (m, &part) in self.0.iter().rev().enumerate() {
            suffix += part;
            if suffix < m + 1 {
                return false;
            }
        }
        true
    }
}

impl From<Vec<usize>> for Composition {
    fn from(parts: Vec<usize>) -> Self {
        Composition(parts)
    }
}

impl<const N: usize> From<[usize; N]> for Composition {
    fn from(parts: [usize; N]) -> Self {
        Composition(parts.to_vec())
    }
}

/// Comma-joined parts, e.g. `1,0,1,2`. The empty composition prints as
/// the empty string.
impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s)
            .trim();
        if s.is_empty() {
            return Ok(Composition::empty());
        }
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid composition part `{}`", p.trim())))
            })
            .collect::<Result<Vec<_>>>()
            .map(Composition)
    }
}

/// All weak compositions of `n` into `n` parts, in lexicographic order.
pub fn weak_compositions(n: usize) -> WeakCompositions {
    WeakCompositions {
        next: Some(if n == 0 {
            Vec::new()
        } else {
            let mut v = vec![0; n];
            v[n - 1] = n;
            v
        }),
    }
}

pub struct WeakCompositions {
    next: Option<Vec<usize>>,
}

impl Iterator for WeakCompositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let current = self.next.take()?;
        let len = current.len();
        // Rightmost position (not the last) whose suffix still has mass to borrow.
        let mut succ = current.clone();
        let mut suffix = 0;
        let mut found = None;
        for i in (0..len.saturating_sub(1)).rev() {
            suffix += succ[i + 1];
            if suffix > 0 {
                found = Some(i);
                break;
            }
        }
        if let Some(i) = found {
            succ[i] += 1;
            for p in succ.iter_mut().skip(i + 1) {
                *p = 0;
            }
            succ[len - 1] = suffix - 1;
            self.next = Some(succ);
        }
        Some(Composition(current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u64 {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }

    #[test]
    fn enumerates_lexicographically_and_completely() {
        let all: Vec<_> = weak_compositions(3).map(|c| c.to_string()).collect();
        assert_eq!(all.first().unwrap(), "0,0,3");
        assert_eq!(all.last().unwrap(), "3,0,0");
        assert_eq!(all.len(), 10);
        for n in 0..8u64 {
            let comps: Vec<_> = weak_compositions(n as usize).collect();
            let expected = if n == 0 { 1 } else { binomial(2 * n - 1, n) };
            assert_eq!(comps.len() as u64, expected);
            assert!(comps.windows(2).all(|w| w[0] < w[1]));
            assert!(comps.iter().all(|c| c.check_square().is_ok()));
        }
    }

    #[test]
    fn parse_and_display() {
        let k: Composition = "1,0,1,2".parse().unwrap();
        assert_eq!(k.parts(), &[1, 0, 1, 2]);
        assert_eq!(k.to_string(), "1,0,1,2");
        assert_eq!("(0, 2)".parse::<Composition>().unwrap().parts(), &[0, 2]);
        assert!("".parse::<Composition>().unwrap().is_empty());
        assert!("1,x".parse::<Composition>().is_err());
        assert!(Composition::from([2, 1]).check_square().is_err());
    }

    #[test]
    fn reverse_catalan_examples() {
        assert!(Composition::from([0, 2]).is_reverse_catalan());
        assert!(!Composition::from([2, 0]).is_reverse_catalan());
        assert!(Composition::from([1, 0, 1, 2]).is_reverse_catalan());
        assert!(Composition::empty().is_reverse_catalan());
    }
}
