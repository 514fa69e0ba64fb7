//! Ordered variable universes.
//!
//! Every polynomial carries an ordered list of variable names. Distinct
//! universes interoperate by name union (charts, the pencil parameter `t`,
//! symbolic marks and symbolic pencil coefficients all end up in one
//! expression), so the order must be canonical: names are compared
//! "naturally", i.e. alphabetic runs lexicographically and digit runs
//! numerically, which makes `x2 < x10` and `y1_2 < y2_1`.

use std::cmp::Ordering;
use std::sync::Arc;

/// Compares variable names with numeric runs compared as integers.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let ab = a.as_bytes();
    let bb = b.as_bytes();
    let (mut i, mut j) = (0, 0);
    while i < ab.len() && j < bb.len() {
        let ca = ab[i];
        let cb = bb[j];
        if ca.is_ascii_digit() && cb.is_ascii_digit() {
            let si = i;
            while i < ab.len() && ab[i].is_ascii_digit() {
                i += 1;
            }
            let sj = j;
            while j < bb.len() && bb[j].is_ascii_digit() {
                j += 1;
            }
            let na = a[si..i].trim_start_matches('0');
            let nb = b[sj..j].trim_start_matches('0');
            match na.len().cmp(&nb.len()).then_with(|| na.cmp(nb)) {
                Ordering::Equal => {}
                other => return other,
            }
        } else {
            match ca.cmp(&cb) {
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                other => return other,
            }
        }
    }
    (ab.len() - i).cmp(&(bb.len() - j))
}

/// An immutable, canonically ordered, duplicate-free set of variable names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSet {
    names: Arc<Vec<String>>,
}

impl VarSet {
    pub fn empty() -> Self {
        VarSet {
            names: Arc::new(Vec::new()),
        }
    }

    /// Builds a universe from names, sorting canonically and removing duplicates.
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut v: Vec<String> = names.into_iter().map(Into::into).collect();
        v.sort_by(|a, b| natural_cmp(a, b));
        v.dedup();
        VarSet { names: Arc::new(v) }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names
            .binary_search_by(|n| natural_cmp(n, name))
            .ok()
    }

    pub fn same(&self, other: &VarSet) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }

    /// Union of two universes plus the index remappings old -> new.
    pub fn union(&self, other: &VarSet) -> (VarSet, Vec<usize>, Vec<usize>) {
        if self.same(other) {
            let id: Vec<usize> = (0..self.len()).collect();
            return (self.clone(), id.clone(), id);
        }
        let mut merged: Vec<String> = Vec::with_capacity(self.len() + other.len());
        merged.extend(self.names.iter().cloned());
        merged.extend(other.names.iter().cloned());
        merged.sort_by(|a, b| natural_cmp(a, b));
        merged.dedup();
        let vs = VarSet {
            names: Arc::new(merged),
        };
        let map_a = self
            .names
            .iter()
            .map(|n| vs.index_of(n).expect("union contains lhs var"))
            .collect();
        let map_b = other
            .names
            .iter()
            .map(|n| vs.index_of(n).expect("union contains rhs var"))
            .collect();
        (vs, map_a, map_b)
    }

    /// Extends the universe with extra names, returning the remap for `self`.
    pub fn extend<I, S>(&self, extra: I) -> (VarSet, Vec<usize>)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let other = VarSet::new(extra);
        let (vs, map_a, _) = self.union(&other);
        (vs, map_a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_ordering() {
        assert_eq!(natural_cmp("x2", "x10"), Ordering::Less);
        assert_eq!(natural_cmp("y1_2", "y2_1"), Ordering::Less);
        assert_eq!(natural_cmp("u1", "x1"), Ordering::Less);
        assert_eq!(natural_cmp("a2", "b0"), Ordering::Less);
        assert_eq!(natural_cmp("t", "u1"), Ordering::Less);
        assert_eq!(natural_cmp("lam", "t"), Ordering::Less);
    }

    #[test]
    fn union_and_remap() {
        let a = VarSet::new(["x1", "x3"]);
        let b = VarSet::new(["x2", "x3", "t"]);
        let (u, ma, mb) = a.union(&b);
        assert_eq!(
            u.names(),
            &["t".to_string(), "x1".into(), "x2".into(), "x3".into()]
        );
        assert_eq!(ma, vec![1, 3]);
        // b's names are already sorted to [t, x2, x3]
        assert_eq!(mb, vec![0, 2, 3]);
    }
}
