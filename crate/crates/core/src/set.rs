use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;

use num::{Signed, Zero};

use crate::rational::Rational;

/// Strictly increasing finite list of rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SortedRationalSet {
    elems: Vec<Rational>,
}

impl SortedRationalSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vec(mut elems: Vec<Rational>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        Self { elems }
    }

    pub fn from_sorted(elems: Vec<Rational>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        Self { elems }
    }

    /// k-way merge of sorted (not necessarily deduplicated) runs.
    pub fn merge_runs(runs: Vec<Vec<Rational>>) -> Self {
        let mut iters: Vec<_> = runs.into_iter().map(|r| r.into_iter()).collect();
        let mut heap = BinaryHeap::new();
        for (k, it) in iters.iter_mut().enumerate() {
            if let Some(x) = it.next() {
                heap.push(Reverse((x, k)));
            }
        }
        let mut out: Vec<Rational> = Vec::new();
        while let Some(Reverse((x, k))) = heap.pop() {
            if out.last() != Some(&x) {
                out.push(x);
            }
            if let Some(y) = iters[k].next() {
                heap.push(Reverse((y, k)));
            }
        }
        Self::from_sorted(out)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.elems
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.elems
    }

    pub fn min(&self) -> Option<&Rational> {
        self.elems.first()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.elems.last()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn index_of(&self, x: &Rational) -> Option<usize> {
        self.elems.binary_search(x).ok()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.elems, &other.elems);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self::from_sorted(out)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.elems, &other.elems);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        Self::from_sorted(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let mut j = 0;
        let b = &other.elems;
        for x in &self.elems {
            while j < b.len() && b[j] < *x {
                j += 1;
            }
            if j >= b.len() || b[j] != *x {
                out.push(x.clone());
            }
        }
        Self::from_sorted(out)
    }

    pub fn without(&self, x: &Rational) -> Self {
        Self::from_sorted(self.elems.iter().filter(|y| *y != x).cloned().collect())
    }

    pub fn shift(&self, by: &Rational) -> Self {
        Self::from_sorted(self.elems.iter().map(|x| x + by).collect())
    }

    pub fn scale(&self, by: &Rational) -> Self {
        if by.is_zero() {
            return if self.is_empty() { Self::new() } else { Self::from_sorted(vec![by.clone()]) };
        }
        let mut out: Vec<Rational> = self.elems.iter().map(|x| x * by).collect();
        if by.is_negative() {
            out.reverse();
        }
        Self::from_sorted(out)
    }

    /// Elements `<= bound`.
    pub fn cap(&self, bound: &Rational) -> Self {
        let end = self.elems.partition_point(|x| x <= bound);
        Self::from_sorted(self.elems[..end].to_vec())
    }

    /// Least element strictly greater than `x`.
    pub fn successor(&self, x: &Rational) -> Option<&Rational> {
        let i = self.elems.partition_point(|y| y <= x);
        self.elems.get(i)
    }
}

impl FromIterator<Rational> for SortedRationalSet {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        Self::from_vec(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a SortedRationalSet {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

impl IntoIterator for SortedRationalSet {
    type Item = Rational;
    type IntoIter = std::vec::IntoIter<Rational>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.into_iter()
    }
}

impl fmt::Display for SortedRationalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, x) in self.elems.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}
