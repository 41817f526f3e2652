use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::ring::Ring;
use super::scalar::ExactScalar;

/// Square operator on `slots` tensor factors of a `d`-dimensional space, stored as
/// sparse rows in the ordinary (non-graded) matrix representation.
///
/// Row/column index of the basis tensor `e_{i_0} ⊗ … ⊗ e_{i_{k-1}}` is
/// `Σ i_s d^{k-1-s}`: slot 0 is the most significant digit.
#[derive(Clone, Debug)]
pub struct OpMatrix<T> {
    d: usize,
    slots: usize,
    rows: Vec<Vec<(usize, T)>>,
    labels: Vec<String>,
}

/// Equality compares shape and entries; slot labels are informational only.
impl<T: PartialEq> PartialEq for OpMatrix<T> {
    fn eq(&self, o: &Self) -> bool {
        self.d == o.d && self.slots == o.slots && self.rows == o.rows
    }
}

impl<T: Ring> OpMatrix<T> {
    pub fn zero(d: usize, slots: usize) -> Self {
        let n = d.pow(slots as u32);
        OpMatrix { d, slots, rows: vec![Vec::new(); n], labels: default_labels(slots) }
    }

    pub fn identity(d: usize, slots: usize) -> Self {
        Self::scalar(d, slots, T::one())
    }

    pub fn scalar(d: usize, slots: usize, c: T) -> Self {
        let mut m = Self::zero(d, slots);
        if !c.is_zero() {
            for (r, row) in m.rows.iter_mut().enumerate() {
                row.push((r, c.clone()));
            }
        }
        m
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(d: usize, slots: usize, entries: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let n = d.pow(slots as u32);
        let mut acc: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); n];
        for (r, c, v) in entries {
            assert!(r < n && c < n, "entry ({r},{c}) outside {n}x{n}");
            let e = acc[r].entry(c).or_insert_with(T::zero);
            e.add_assign(&v);
        }
        let rows = acc
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        OpMatrix { d, slots, rows, labels: default_labels(slots) }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.slots);
        self.labels = labels;
        self
    }

    pub fn row(&self, r: usize) -> &[(usize, T)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.rows[r]
            .binary_search_by_key(&c, |(k, _)| *k)
            .map(|i| self.rows[r][i].1.clone())
            .unwrap_or_else(|_| T::zero())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    fn same_shape(&self, o: &Self) {
        assert!(self.d == o.d && self.slots == o.slots, "operator shape mismatch");
    }

    fn merge(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        self.same_shape(o);
        let zero = T::zero();
        let rows = self
            .rows
            .iter()
            .zip(&o.rows)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len().max(b.len()));
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let (c, v) = match (a.get(i), b.get(j)) {
                        (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                            i += 1;
                            j += 1;
                            (*ca, f(va, vb))
                        }
                        (Some((ca, va)), Some((cb, _))) if ca < cb => {
                            i += 1;
                            (*ca, f(va, &zero))
                        }
                        (Some((ca, va)), None) => {
                            i += 1;
                            (*ca, f(va, &zero))
                        }
                        (_, Some((cb, vb))) => {
                            j += 1;
                            (*cb, f(&zero, vb))
                        }
                        (None, None) => unreachable!(),
                    };
                    if !v.is_zero() {
                        out.push((c, v));
                    }
                }
                out
            })
            .collect();
        OpMatrix { d: self.d, slots: self.slots, rows, labels: self.labels.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.merge(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.merge(o, |a, b| a.sub(b))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.mul(s))
    }

    pub fn neg(&self) -> Self {
        self.map(|v| v.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_shape(o);
        let n = self.dim();
        let mut acc: Vec<Option<T>> = vec![None; n];
        let mut touched: Vec<usize> = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for (k, a) in row {
                    for (c, b) in &o.rows[*k] {
                        let p = a.mul(b);
                        match &mut acc[*c] {
                            Some(v) => v.add_assign(&p),
                            slot @ None => {
                                *slot = Some(p);
                                touched.push(*c);
                            }
                        }
                    }
                }
                touched.sort_unstable();
                let out: Vec<(usize, T)> = touched
                    .drain(..)
                    .filter_map(|c| acc[c].take().filter(|v| !v.is_zero()).map(|v| (c, v)))
                    .collect();
                out
            })
            .collect();
        OpMatrix { d: self.d, slots: self.slots, rows, labels: self.labels.clone() }
    }

    /// Commutator `AB − BA`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> OpMatrix<U> {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, f(v))).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        OpMatrix { d: self.d, slots: self.slots, rows, labels: self.labels.clone() }
    }

    /// Plain transpose of the full matrix.
    pub fn transpose(&self) -> Self {
        let entries: Vec<_> = self.entries().map(|(r, c, v)| (c, r, v.clone())).collect();
        Self::from_triplets(self.d, self.slots, entries).with_labels(self.labels.clone())
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim());
        self.rows
            .iter()
            .map(|row| {
                let mut acc = T::zero();
                for (c, a) in row {
                    acc.add_assign(&a.mul(&v[*c]));
                }
                acc
            })
            .collect()
    }

    /// Multi-index of a flat index.
    pub fn multi_index(&self, mut r: usize) -> Vec<usize> {
        let mut idx = vec![0; self.slots];
        for s in (0..self.slots).rev() {
            idx[s] = r % self.d;
            r /= self.d;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.d + i)
    }
}

impl OpMatrix<ExactScalar> {
    pub fn to_float(&self) -> OpMatrix<Complex64> {
        self.map(|v| v.to_complex())
    }
}

impl OpMatrix<Complex64> {
    pub fn max_abs(&self) -> f64 {
        self.entries().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (r, c, v) in self.entries() {
            m[(r, c)] = *v;
        }
        m
    }

    pub fn apply_vec(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_vec(self.apply(v.as_slice()))
    }
}

fn default_labels(slots: usize) -> Vec<String> {
    (0..slots).map(|s| format!("s{s}")).collect()
}

pub fn flat_index(d: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * d + i)
}

pub fn multi_index(d: usize, slots: usize, mut r: usize) -> Vec<usize> {
    let mut idx = vec![0; slots];
    for s in (0..slots).rev() {
        idx[s] = r % d;
        r /= d;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(d: usize, i: usize, j: usize) -> OpMatrix<ExactScalar> {
        OpMatrix::from_triplets(d, 1, [(i, j, ExactScalar::one())])
    }

    #[test]
    fn matrix_units_multiply() {
        let a = e(3, 0, 1);
        let b = e(3, 1, 2);
        assert_eq!(a.mul(&b), e(3, 0, 2));
        assert!(b.mul(&a).is_zero());
        assert_eq!(a.add(&a).sub(&a), a);
    }

    #[test]
    fn index_roundtrip() {
        let m = OpMatrix::<ExactScalar>::identity(3, 3);
        for r in 0..27 {
            assert_eq!(m.flat_index(&m.multi_index(r)), r);
        }
        assert_eq!(m.multi_index(5), vec![0, 1, 2]);
    }
}
