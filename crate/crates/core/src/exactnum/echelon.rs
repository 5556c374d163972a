//! Incremental sparse reduced row echelon form.
//!
//! Rows are fed one at a time; each is reduced against the current basis and,
//! if independent, becomes a new pivot row with its leftmost nonzero column
//! as pivot. All existing rows are kept fully reduced, so the final state is
//! the unique RREF of the row span regardless of insertion order.

use std::collections::BTreeMap;

use super::field::CycloField;
use super::scalar::Scalar;

/// Sparse vector: strictly increasing column indices, no stored zeros.
pub type SparseRow = Vec<(usize, Scalar)>;

#[derive(Clone, Debug)]
pub struct SparseEchelon {
    field: CycloField,
    cols: usize,
    /// pivot column -> fully reduced row with 1 at the pivot
    rows: BTreeMap<usize, SparseRow>,
}

/// `a - f * b` for sparse rows.
fn axpy(a: &SparseRow, f: &Scalar, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -&(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(f * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Build a sparse row from (column, value) pairs in any order, merging
/// duplicates and dropping zeros.
pub fn sparse_from_pairs(pairs: impl IntoIterator<Item = (usize, Scalar)>) -> SparseRow {
    let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (c, v) in pairs {
        if v.is_zero() {
            continue;
        }
        match map.entry(c) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &v;
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
        }
    }
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

impl SparseEchelon {
    pub fn new(field: CycloField, cols: usize) -> Self {
        SparseEchelon { field, cols, rows: BTreeMap::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduce `row` against the current basis.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let mut cur = row.clone();
        let mut idx = 0;
        while idx < cur.len() {
            let (c, ref v) = cur[idx];
            if let Some(prow) = self.rows.get(&c) {
                let f = v.clone();
                cur = axpy(&cur, &f, prow);
                // entry at c is now zero and removed; do not advance
                idx = cur.partition_point(|(col, _)| *col < c);
            } else {
                idx += 1;
            }
        }
        cur
    }

    /// Insert a row; returns true when it enlarged the span.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        debug_assert!(row.iter().all(|(c, _)| *c < self.cols));
        let reduced = self.reduce(&row);
        let Some((pivot, lead)) = reduced.first().cloned() else {
            return false;
        };
        let inv = lead.inv().expect("leading entry is nonzero");
        let normalized: SparseRow = reduced.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
        for existing in self.rows.values_mut() {
            if let Ok(pos) = existing.binary_search_by_key(&pivot, |(c, _)| *c) {
                let f = existing[pos].1.clone();
                *existing = axpy(existing, &f, &normalized);
            }
        }
        self.rows.insert(pivot, normalized);
        true
    }

    /// Whether `row` lies in the current span.
    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Canonical nullspace basis of the row span (as a system of equations):
    /// one dense vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.rows.contains_key(c)).collect();
        let mut out: Vec<Vec<Scalar>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(self.field); self.cols];
                v[f] = Scalar::one(self.field);
                v
            })
            .collect();
        let pos: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        for (&p, row) in &self.rows {
            for (c, v) in row.iter().skip(1) {
                out[pos[c]][p] = -v;
            }
        }
        out
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.rows.values()
    }
}
