use super::Field;

/// Incrementally maintained reduced row-echelon basis of a row space.
///
/// Rows are stored densely as bytes and kept fully reduced, so every stored
/// row is zero on all pivot columns but its own. Reducing an incoming vector
/// therefore costs one row operation per pivot column in its support, and
/// the residue lives on the free columns only.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    field: Field,
    n: usize,
    data: Vec<u8>,
    pivots: Vec<usize>,
    pivot_row: Vec<usize>,
    free: Vec<usize>,
    scratch: Vec<u8>,
}

const NONE: usize = usize::MAX;

#[inline]
fn axpy_const<const P: u16>(dst: &mut [u8], src: &[u8], c: u8) {
    let c = c as u16;
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = ((*d as u16 + c * s as u16) % P) as u8;
    }
}

#[inline]
fn axpy_dyn(p: u16, dst: &mut [u8], src: &[u8], c: u8) {
    let c = c as u16;
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = ((*d as u16 + c * s as u16) % p) as u8;
    }
}

/// `dst += c * src` over GF(p), elementwise on byte slices.
#[inline]
pub(crate) fn axpy_bytes(p: u32, dst: &mut [u8], src: &[u8], c: u8) {
    match p {
        3 => axpy_const::<3>(dst, src, c),
        5 => axpy_const::<5>(dst, src, c),
        7 => axpy_const::<7>(dst, src, c),
        _ => axpy_dyn(p as u16, dst, src, c),
    }
}

impl EchelonBuilder {
    pub fn new(field: Field, n: usize) -> EchelonBuilder {
        EchelonBuilder {
            field,
            n,
            data: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![NONE; n],
            free: (0..n).collect(),
            scratch: vec![0; n],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ncols(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.n - self.pivots.len()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.n
    }

    /// Pivot columns in increasing order.
    pub fn pivot_cols(&self) -> Vec<usize> {
        let mut p = self.pivots.clone();
        p.sort_unstable();
        p
    }

    fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    /// Reduces `self.scratch` whose support is contained in `support` plus
    /// free columns; afterwards the scratch is zero on every pivot column.
    fn reduce_scratch(&mut self, support: impl Iterator<Item = usize>) {
        let p = self.field.p();
        let sparse_rows = self.free.len() * 8 < self.n;
        for k in support {
            let r = self.pivot_row[k];
            if r == NONE {
                continue;
            }
            let c = self.scratch[k];
            if c == 0 {
                continue;
            }
            let neg = (p - c as u32) as u8;
            let row = &self.data[r * self.n..(r + 1) * self.n];
            if sparse_rows {
                for &fc in &self.free {
                    let v = row[fc];
                    if v != 0 {
                        let s = &mut self.scratch[fc];
                        *s = ((*s as u32 + neg as u32 * v as u32) % p) as u8;
                    }
                }
                self.scratch[k] = 0;
            } else {
                axpy_bytes(p, &mut self.scratch, row, neg);
            }
        }
    }

    fn first_free_nonzero(&self) -> Option<usize> {
        self.free.iter().copied().filter(|&c| self.scratch[c] != 0).min()
    }

    fn clear_scratch(&mut self, support: impl Iterator<Item = usize>) {
        for k in support {
            self.scratch[k] = 0;
        }
        for &c in &self.free {
            self.scratch[c] = 0;
        }
    }

    /// Appends the reduced scratch as a new row with pivot `lead`.
    fn insert_scratch(&mut self, lead: usize) {
        let p = self.field.p();
        let inv = self.field.inv(self.scratch[lead] as u32).expect("nonzero lead") as u8;
        if inv != 1 {
            for &c in &self.free {
                let v = self.scratch[c];
                if v != 0 {
                    self.scratch[c] = ((v as u32 * inv as u32) % p) as u8;
                }
            }
        }
        let pos = self.free.iter().position(|&c| c == lead).expect("lead is free");
        self.free.remove(pos);
        let sparse_rows = self.free.len() * 8 < self.n;
        let n = self.n;
        for r in 0..self.pivots.len() {
            let row = &mut self.data[r * n..(r + 1) * n];
            let c = row[lead];
            if c == 0 {
                continue;
            }
            let neg = (p - c as u32) as u8;
            if sparse_rows {
                for &fc in &self.free {
                    let v = self.scratch[fc];
                    if v != 0 {
                        row[fc] = ((row[fc] as u32 + neg as u32 * v as u32) % p) as u8;
                    }
                }
                row[lead] = 0;
            } else {
                axpy_bytes(p, row, &self.scratch, neg);
            }
        }
        self.pivot_row[lead] = self.pivots.len();
        self.pivots.push(lead);
        self.data.extend_from_slice(&self.scratch);
        self.scratch[lead] = 0;
    }

    /// Adds a sparse row `(column, value)`; returns whether the rank grew.
    pub fn push_sparse(&mut self, v: &[(usize, u32)]) -> bool {
        if self.is_full() {
            return false;
        }
        let p = self.field.p();
        for &(k, c) in v {
            let s = &mut self.scratch[k];
            *s = ((*s as u32 + c) % p) as u8;
        }
        self.reduce_scratch(v.iter().map(|e| e.0));
        let grew = match self.first_free_nonzero() {
            Some(lead) => {
                self.insert_scratch(lead);
                true
            }
            None => false,
        };
        self.clear_scratch(v.iter().map(|e| e.0));
        grew
    }

    pub fn push_dense(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.n, "row length");
        let sparse: Vec<(usize, u32)> = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c % self.field.p() != 0)
            .map(|(i, &c)| (i, c % self.field.p()))
            .collect();
        self.push_sparse(&sparse)
    }

    /// Residue of `v` modulo the row space (zero iff `v` is in the span).
    pub fn reduce(&mut self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.n, "row length");
        let p = self.field.p();
        for (s, &c) in self.scratch.iter_mut().zip(v) {
            *s = (c % p) as u8;
        }
        self.reduce_scratch(0..v.len());
        let out = self.scratch.iter().map(|&c| c as u32).collect();
        self.scratch.iter_mut().for_each(|s| *s = 0);
        out
    }

    /// Like [`Self::reduce`] but without touching the shared scratch row.
    pub fn residue(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.n, "row length");
        let p = self.field.p();
        let mut w: Vec<u8> = v.iter().map(|&c| (c % p) as u8).collect();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc];
            if c != 0 {
                axpy_bytes(p, &mut w, self.row(r), (p - c as u32) as u8);
            }
        }
        w.into_iter().map(u32::from).collect()
    }

    pub fn contains(&mut self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&c| c == 0)
    }

    /// Coordinates of `v` with respect to [`Self::basis`], if `v` is in the
    /// span. In reduced form these are just the pivot entries of `v`.
    pub fn coordinates(&mut self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        let p = self.field.p();
        Some(self.pivot_cols().into_iter().map(|c| v[c] % p).collect())
    }

    /// Rows sorted by pivot column: the canonical reduced basis.
    pub fn basis(&self) -> Vec<Vec<u32>> {
        let mut order: Vec<usize> = (0..self.pivots.len()).collect();
        order.sort_unstable_by_key(|&r| self.pivots[r]);
        order
            .into_iter()
            .map(|r| self.row(r).iter().map(|&c| c as u32).collect())
            .collect()
    }

    /// Null space of the stored rows, one vector per free column in
    /// increasing order.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let mut free = self.free.clone();
        free.sort_unstable();
        free.iter()
            .map(|&fc| {
                let mut x = vec![0u32; self.n];
                x[fc] = 1;
                for (r, &pc) in self.pivots.iter().enumerate() {
                    x[pc] = f.neg(self.row(r)[fc] as u32);
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldMatrix;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn agrees_with_dense_rref(p in prop::sample::select(vec![3u32, 5, 7, 11]),
                                  rows in 1usize..9, cols in 1usize..9, seed in any::<u64>()) {
            let f = Field::new(p).unwrap();
            let mut s = seed;
            let mut data = Vec::new();
            for _ in 0..rows * cols {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                // Bias toward zeros so that rank deficiency is common.
                let v = (s >> 33) as u32 % (2 * p);
                data.push(if v >= p { 0 } else { v });
            }
            let m = FieldMatrix::from_data(f, rows, cols, data).unwrap();
            let mut b = EchelonBuilder::new(f, cols);
            for r in 0..rows {
                b.push_dense(m.row(r));
            }
            let r = m.rref();
            prop_assert_eq!(b.rank(), r.rank);
            prop_assert_eq!(b.pivot_cols(), r.pivot_cols.clone());
            let basis = b.basis();
            for (i, row) in basis.iter().enumerate() {
                prop_assert_eq!(row.as_slice(), r.reduced.row(i));
            }
            prop_assert_eq!(b.kernel(), m.kernel());
            for r in 0..rows {
                let coords = b.coordinates(m.row(r)).unwrap();
                let mut acc = vec![0u32; cols];
                for (c, row) in coords.iter().zip(&basis) {
                    for (a, &v) in acc.iter_mut().zip(row) {
                        *a = f.mul_add(*a, *c, v);
                    }
                }
                prop_assert_eq!(acc.as_slice(), m.row(r));
            }
        }
    }

    #[test]
    fn sparse_rows_and_full_rank_exit() {
        let f = Field::new(3).unwrap();
        let mut b = EchelonBuilder::new(f, 3);
        assert!(b.push_sparse(&[(1, 2)]));
        assert!(!b.push_sparse(&[(1, 1)]));
        assert!(b.push_sparse(&[(0, 1), (1, 1)]));
        assert!(b.push_sparse(&[(2, 1), (0, 2)]));
        assert!(b.is_full());
        assert!(!b.push_sparse(&[(0, 1)]));
        assert!(b.kernel().is_empty());
    }
}
