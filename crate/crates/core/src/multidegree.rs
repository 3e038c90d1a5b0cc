//! Multidegrees via the asymmetric string-equation recursion.
//!
//! `deg(k) = sum over j > i of deg(ktilde(k, j))` where `i` is the rightmost
//! zero of `k` (or `c` when `k` has no zero), with `deg(()) = 1`. These are
//! the asymmetric multinomial coefficients.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::composition::{weak_compositions, Composition};
use crate::error::{Error, Result};
use crate::label::Label;

/// Index of the rightmost zero part as a label: `Num(i)` for
/// `i = max{l : k_l = 0}`, or `C` when no part is zero.
pub fn rightmost_zero(k: &Composition) -> Result<Label> {
    k.check_square()?;
    if k.is_empty() {
        return Err(Error::InvalidComposition(
            "the empty composition has no rightmost zero".into(),
        ));
    }
    Ok(rightmost_zero_unchecked(k.parts()))
}

fn rightmost_zero_unchecked(parts: &[usize]) -> Label {
    parts
        .iter()
        .rposition(|&p| p == 0)
        .map_or(Label::C, |i| Label::Num(i + 1))
}

/// Decrements `k_j` and deletes the rightmost zero of the result.
pub fn ktilde(k: &Composition, j: usize) -> Result<Composition> {
    let i = rightmost_zero(k)?;
    if j == 0 || j > k.len() {
        return Err(Error::InvalidIndex {
            what: "composition",
            index: j,
        });
    }
    if Label::Num(j) <= i {
        return Err(Error::InvalidComposition(format!(
            "index {j} does not exceed the rightmost zero {i} of ({k})"
        )));
    }
    Ok(Composition::new(ktilde_unchecked(k.parts(), j)))
}

fn ktilde_unchecked(parts: &[usize], j: usize) -> Vec<usize> {
    let mut out = parts.to_vec();
    out[j - 1] -= 1;
    let z = out
        .iter()
        .rposition(|&p| p == 0)
        .expect("sum n-1 over n parts leaves a zero");
    out.remove(z);
    out
}

/// Memo table for [`MultidegreeCache::multidegree`]. Safe to share between
/// threads; concurrent callers always observe identical values.
pub struct MultidegreeCache {
    table: RwLock<HashMap<Vec<usize>, BigUint>>,
    cap: Option<usize>,
}

impl Default for MultidegreeCache {
    fn default() -> Self {
        Self::new()
    }
}

impl MultidegreeCache {
    pub fn new() -> Self {
        MultidegreeCache {
            table: RwLock::new(HashMap::new()),
            cap: None,
        }
    }

    /// A cache that stops memoizing once it holds `cap` entries.
    pub fn with_cap(cap: usize) -> Self {
        MultidegreeCache {
            table: RwLock::new(HashMap::new()),
            cap: Some(cap),
        }
    }

    pub fn len(&self) -> usize {
        self.table.read().expect("multidegree cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn multidegree(&self, k: &Composition) -> Result<BigUint> {
        k.check_square()?;
        Ok(self.compute(k.parts()))
    }

    fn compute(&self, parts: &[usize]) -> BigUint {
        if parts.is_empty() {
            return BigUint::one();
        }
        if let Some(v) = self.table.read().expect("multidegree cache poisoned").get(parts) {
            return v.clone();
        }
        let first = match rightmost_zero_unchecked(parts) {
            Label::Num(i) => i + 1,
            _ => 1,
        };
        let mut total = BigUint::zero();
        for j in first..=parts.len() {
            total += self.compute(&ktilde_unchecked(parts, j));
        }
        let mut table = self.table.write().expect("multidegree cache poisoned");
        if self.cap.is_none_or(|cap| table.len() < cap) {
            table.insert(parts.to_vec(), total.clone());
        }
        total
    }
}

fn global_cache() -> &'static MultidegreeCache {
    static CACHE: OnceLock<MultidegreeCache> = OnceLock::new();
    CACHE.get_or_init(MultidegreeCache::new)
}

/// The multidegree (asymmetric multinomial coefficient) of a weak
/// composition of `n` into `n` parts, memoized process-wide.
pub fn multidegree(k: &Composition) -> Result<BigUint> {
    global_cache().multidegree(k)
}

/// Sum of all multidegrees of size `n`.
pub fn total_degree(n: usize) -> BigUint {
    weak_compositions(n)
        .map(|k| global_cache().compute(k.parts()))
        .sum()
}

/// Every composition of size `n` with its multidegree, in lexicographic
/// order.
pub fn multidegree_table(n: usize) -> Vec<(Composition, BigUint)> {
    weak_compositions(n)
        .map(|k| {
            let d = global_cache().compute(k.parts());
            (k, d)
        })
        .collect()
}

/// `(2n - 1)!!`, with the empty product for `n = 0`.
pub fn odd_double_factorial(n: usize) -> BigUint {
    (1..=n).map(|m| BigUint::from(2 * m - 1)).product()
}

/// Ordinary multinomial coefficient `(sum k)! / prod(k_i!)`.
pub fn multinomial(k: &Composition) -> BigUint {
    let mut result = BigUint::one();
    let mut total = 0usize;
    for &part in k.parts() {
        for m in 1..=part {
            total += 1;
            // Running product of binomials keeps every step integral.
            result = result * BigUint::from(total) / BigUint::from(m);
        }
    }
    result
}

/// Whether the multidegree of `k` is nonzero: every suffix of length `m`
/// sums to at least `m`.
pub fn is_support(k: &Composition) -> Result<bool> {
    k.check_square()?;
    Ok(k.is_reverse_catalan())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec())
    }

    #[test]
    fn rightmost_zero_examples() {
        assert_eq!(rightmost_zero(&k(&[0, 1, 0, 0, 2, 1, 3])).unwrap(), Label::Num(4));
        assert_eq!(rightmost_zero(&k(&[1, 1, 1])).unwrap(), Label::C);
        assert_eq!(rightmost_zero(&k(&[2, 0])).unwrap(), Label::Num(2));
        assert!(rightmost_zero(&k(&[1, 0])).is_err());
        assert!(rightmost_zero(&Composition::empty()).is_err());
    }

    #[test]
    fn ktilde_examples() {
        let base = k(&[0, 1, 0, 0, 2, 1, 3]);
        assert_eq!(ktilde(&base, 5).unwrap(), k(&[0, 1, 0, 1, 1, 3]));
        assert_eq!(ktilde(&base, 6).unwrap(), k(&[0, 1, 0, 0, 2, 3]));
        assert_eq!(ktilde(&k(&[1]), 1).unwrap(), Composition::empty());
        assert!(ktilde(&base, 4).is_err());
        assert!(ktilde(&base, 2).is_err());
        assert!(ktilde(&base, 8).is_err());
        assert!(ktilde(&base, 0).is_err());
    }

    #[test]
    fn string_equation_example_terms() {
        // (1,0,0,0,2,1,3): i = 4, j ranges over 5, 6, 7.
        let base = k(&[1, 0, 0, 0, 2, 1, 3]);
        let terms: Vec<_> = (5..=7).map(|j| ktilde(&base, j).unwrap()).collect();
        assert_eq!(
            terms,
            vec![k(&[1, 0, 0, 1, 1, 3]), k(&[1, 0, 0, 0, 2, 3]), k(&[1, 0, 0, 2, 1, 2])]
        );
    }

    #[test]
    fn small_multidegrees() {
        assert_eq!(multidegree(&k(&[1, 1])).unwrap(), BigUint::from(2u32));
        assert_eq!(multidegree(&k(&[0, 2])).unwrap(), BigUint::from(1u32));
        assert_eq!(multidegree(&k(&[2, 0])).unwrap(), BigUint::zero());
        assert_eq!(multidegree(&k(&[1])).unwrap(), BigUint::one());
        assert_eq!(multidegree(&Composition::empty()).unwrap(), BigUint::one());
        assert!(multidegree(&k(&[1, 2])).is_err());
    }

    #[test]
    fn n3_table_matches_brute_force_cpf_counts() {
        // Frozen from a standalone brute-force count of column-restricted
        // parking functions.
        let expected = [
            ([0, 0, 3], 1u32),
            ([0, 1, 2], 3),
            ([0, 2, 1], 3),
            ([0, 3, 0], 0),
            ([1, 0, 2], 2),
            ([1, 1, 1], 6),
            ([1, 2, 0], 0),
            ([2, 0, 1], 0),
            ([2, 1, 0], 0),
            ([3, 0, 0], 0),
        ];
        let table = multidegree_table(3);
        assert_eq!(table.len(), expected.len());
        for ((comp, deg), (parts, want)) in table.iter().zip(expected) {
            assert_eq!(comp.parts(), &parts);
            assert_eq!(deg, &BigUint::from(want), "{comp}");
        }
        let n4 = [
            ([1, 0, 1, 2], 8u32),
            ([0, 0, 0, 4], 1),
            ([1, 1, 1, 1], 24),
            ([0, 1, 1, 2], 12),
            ([0, 0, 2, 2], 6),
        ];
        for (parts, want) in n4 {
            assert_eq!(multidegree(&k(&parts)).unwrap(), BigUint::from(want));
        }
    }

    #[test]
    fn totals_are_odd_double_factorials() {
        assert_eq!(total_degree(1), BigUint::from(1u32));
        assert_eq!(total_degree(2), BigUint::from(3u32));
        assert_eq!(total_degree(3), BigUint::from(15u32));
        assert_eq!(total_degree(7), BigUint::from(135135u32));
        for n in 0..=9 {
            assert_eq!(total_degree(n), odd_double_factorial(n), "n = {n}");
        }
    }

    #[test]
    fn wide_integers() {
        assert_eq!(odd_double_factorial(17).to_string(), "6332659870762850625");
        // 35!! no longer fits in 64 bits.
        assert!(odd_double_factorial(18) > BigUint::from(u64::MAX));
        // All-ones composition has multidegree n!.
        let ones = Composition::new(vec![1; 25]);
        let fact: BigUint = (1..=25u32).map(BigUint::from).product();
        assert_eq!(multidegree(&ones).unwrap(), fact);
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&k(&[1, 0, 1, 2])), BigUint::from(12u32));
        assert_eq!(multinomial(&k(&[2, 2, 2])), BigUint::from(90u32));
        assert_eq!(multinomial(&Composition::empty()), BigUint::one());
    }

    #[test]
    fn capped_cache_still_correct() {
        let cache = MultidegreeCache::with_cap(3);
        let d = cache.multidegree(&k(&[1, 0, 1, 2])).unwrap();
        assert_eq!(d, BigUint::from(8u32));
        assert!(cache.len() <= 3);
    }

    #[test]
    fn concurrent_callers_agree() {
        let cache = MultidegreeCache::new();
        let comps: Vec<_> = weak_compositions(6).collect();
        let results: Vec<Vec<BigUint>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..4)
                .map(|_| s.spawn(|| comps.iter().map(|c| cache.multidegree(c).unwrap()).collect()))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn support_examples() {
        assert!(!is_support(&k(&[2, 0])).unwrap());
        assert!(is_support(&k(&[0, 2])).unwrap());
        assert!(is_support(&k(&[1, 1, 1])).unwrap());
        assert!(is_support(&k(&[3])).is_err());
    }
}
