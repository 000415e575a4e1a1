//! Exact rational linear algebra on sparse rows keyed by an ordered column type.

use std::collections::BTreeMap;

use num::Zero;

use crate::ring::Rat;

/// A growing row space in echelon form; rows are sparse maps column -> coefficient,
/// each normalized so its leading (smallest-column) coefficient is 1.
pub struct RowSpace<K: Ord + Clone> {
    rows: BTreeMap<K, BTreeMap<K, Rat>>,
}

impl<K: Ord + Clone> Default for RowSpace<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> RowSpace<K> {
    pub fn new() -> Self {
        RowSpace {
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce a row against the space, returning the remainder. Every pivot
    /// column present in the row is eliminated, not just leading ones.
    pub fn reduce(&self, mut row: BTreeMap<K, Rat>) -> BTreeMap<K, Rat> {
        loop {
            row.retain(|_, c| !c.is_zero());
            let hit = row.keys().find(|k| self.rows.contains_key(k)).cloned();
            let col = match hit {
                Some(c) => c,
                None => return row,
            };
            let pivot = &self.rows[&col];
            let factor = row[&col].clone();
            for (k, c) in pivot {
                let e = row.entry(k.clone()).or_insert_with(Rat::zero);
                *e -= &factor * c;
            }
            row.remove(&col);
        }
    }

    /// Insert a row; returns true if it increased the rank.
    pub fn insert(&mut self, row: BTreeMap<K, Rat>) -> bool {
        let mut rem = self.reduce(row);
        rem.retain(|_, c| !c.is_zero());
        if rem.is_empty() {
            return false;
        }
        let lead = rem.keys().next().unwrap().clone();
        let inv = rem[&lead].recip();
        for c in rem.values_mut() {
            *c *= &inv;
        }
        self.rows.insert(lead, rem);
        true
    }

    /// Does the row lie in the span?
    pub fn contains(&self, row: BTreeMap<K, Rat>) -> bool {
        let mut rem = self.reduce(row);
        rem.retain(|_, c| !c.is_zero());
        rem.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat_int;

    fn row(pairs: &[(u32, i64)]) -> BTreeMap<u32, Rat> {
        pairs.iter().map(|(k, v)| (*k, rat_int(*v))).collect()
    }

    #[test]
    fn span_membership() {
        let mut s = RowSpace::new();
        assert!(s.insert(row(&[(0, 1), (1, 2)])));
        assert!(s.insert(row(&[(1, 1), (2, 1)])));
        assert!(!s.insert(row(&[(0, 2), (1, 6), (2, 2)])));
        assert_eq!(s.rank(), 2);
        assert!(s.contains(row(&[(0, 1), (1, 4), (2, 2)])));
        assert!(!s.contains(row(&[(2, 1)])));
    }
}
