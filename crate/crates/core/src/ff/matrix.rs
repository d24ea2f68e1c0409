use super::{Field, Fp};
use crate::error::{Error, Result};

/// Dense row-major matrix over GF(p).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`FieldMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub reduced: FieldMatrix,
    pub pivot_cols: Vec<usize>,
}

impl FieldMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> FieldMatrix {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from residues, reducing each entry mod p.
    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Result<FieldMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&v| field.from_i64(v)));
        }
        Ok(FieldMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from scalars that carry their own modulus.
    pub fn from_scalars(rows: usize, cols: usize, entries: &[Fp]) -> Result<FieldMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        let Some(first) = entries.first() else {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        };
        let p = first.modulus();
        if let Some(bad) = entries.iter().find(|e| e.modulus() != p) {
            return Err(Error::ModulusMismatch(p, bad.modulus()));
        }
        Ok(FieldMatrix {
            field: first.field(),
            rows,
            cols,
            data: entries.iter().map(|e| e.value()).collect(),
        })
    }

    /// Builds a matrix from residues already in `[0, p)`.
    pub fn from_data(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<FieldMatrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(FieldMatrix {
            field,
            rows,
            cols,
            data: data.into_iter().map(|v| v % field.p()).collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<u32>]) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = FieldMatrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.p(), other.field.p()));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let f = self.field;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let acc = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (o, &b) in acc.iter_mut().zip(other.row(k)) {
                    *o += a * b as u64;
                }
            }
        }
        let p = f.p() as u64;
        Ok(FieldMatrix {
            field: f,
            rows: self.rows,
            cols: other.cols,
            data: out.into_iter().map(|v| (v % p) as u32).collect(),
        })
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let p = self.field.p() as u64;
        Ok((0..self.rows)
            .map(|r| {
                let s: u64 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p) as u32
            })
            .collect())
    }

    pub fn add(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.combine(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.combine(other, |f, a, b| f.sub(a, b))
    }

    fn combine(&self, other: &FieldMatrix, op: impl Fn(Field, u32, u32) -> u32) -> Result<FieldMatrix> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.p(), other.field.p()));
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let f = self.field;
        Ok(FieldMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| op(f, a, b)).collect(),
        })
    }

    pub fn scale(&self, c: u32) -> FieldMatrix {
        let f = self.field;
        FieldMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn trace(&self) -> u32 {
        let f = self.field;
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    /// Reduced row-echelon form by plain Gauss-Jordan elimination: the pivot
    /// of each step is the first nonzero entry, scanning columns left to
    /// right and rows top-down.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..m.cols {
                    m.data.swap(pr * m.cols + k, r * m.cols + k);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for k in c..m.cols {
                let v = f.mul(m.get(r, k), inv);
                m.data[r * m.cols + k] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for k in c..m.cols {
                    let v = f.mul_add(m.get(i, k), neg, m.get(r, k));
                    m.data[i * m.cols + k] = v;
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        Rref {
            rank: r,
            reduced: m,
            pivot_cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space, one vector per free column in
    /// increasing column order.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let Rref {
            reduced,
            pivot_cols,
            ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![0; self.cols];
                x[free] = 1;
                for (r, &pc) in pivot_cols.iter().enumerate() {
                    x[pc] = f.neg(reduced.get(r, free));
                }
                x
            })
            .collect()
    }

    /// Some `x` with `self * x = b`, free variables set to zero; `None` if
    /// the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = FieldMatrix::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.data[r * (self.cols + 1)..r * (self.cols + 1) + self.cols].copy_from_slice(self.row(r));
            aug.data[r * (self.cols + 1) + self.cols] = b[r] % self.field.p();
        }
        let Rref {
            rank,
            reduced,
            pivot_cols,
        } = aug.rref();
        if pivot_cols.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (r, &pc) in pivot_cols.iter().enumerate().take(rank) {
            x[pc] = reduced.get(r, self.cols);
        }
        Ok(Some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u32) -> Field {
        Field::new(p).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = FieldMatrix::identity(gf(3), 2);
        let r = id.rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.reduced, id);
        let z = FieldMatrix::zeros(gf(3), 3, 4);
        assert_eq!(z.rref().rank, 0);
    }

    #[test]
    fn rref_dependent_rows() {
        let m = FieldMatrix::from_rows(gf(5), &[vec![1, 2], vec![2, 4]]).unwrap();
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.reduced, FieldMatrix::from_rows(gf(5), &[vec![1, 2], vec![0, 0]]).unwrap());
        assert_eq!(r.pivot_cols, vec![0]);
    }

    #[test]
    fn mixed_moduli_rejected() {
        let a = Fp::new(1, 3).unwrap();
        let b = Fp::new(1, 5).unwrap();
        assert_eq!(
            FieldMatrix::from_scalars(1, 2, &[a, b]),
            Err(Error::ModulusMismatch(3, 5))
        );
    }

    #[test]
    fn kernel_examples() {
        assert!(FieldMatrix::identity(gf(5), 3).kernel().is_empty());
        let z = FieldMatrix::zeros(gf(3), 3, 3);
        let k = z.kernel();
        assert_eq!(k, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);

        let m = FieldMatrix::from_rows(gf(3), &[vec![1, 1]]).unwrap();
        let k = m.kernel();
        assert_eq!(k, vec![vec![2, 1]]);
        // Brute-force oracle: the null space is exactly the span of k[0].
        let f = gf(3);
        let mut null = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                if f.add(x, y) == 0 {
                    null.push((x, y));
                }
            }
        }
        let span: Vec<(u32, u32)> = (0..3).map(|c| (f.mul(c, k[0][0]), f.mul(c, k[0][1]))).collect();
        null.sort();
        let mut span = span;
        span.sort();
        assert_eq!(null, span);
        assert!(null.contains(&(1, 2)));
    }

    #[test]
    fn solve_examples() {
        let id = FieldMatrix::identity(gf(7), 3);
        assert_eq!(id.solve(&[1, 5, 6]).unwrap(), Some(vec![1, 5, 6]));
        let m = FieldMatrix::from_rows(gf(3), &[vec![1, 0], vec![1, 0]]).unwrap();
        assert_eq!(m.solve(&[1, 2]).unwrap(), None);
        let m = FieldMatrix::from_rows(gf(5), &[vec![2]]).unwrap();
        assert_eq!(m.solve(&[1]).unwrap(), Some(vec![3]));
        assert_eq!(
            m.solve(&[1, 2]),
            Err(Error::DimensionMismatch {
                expected: 1,
                found: 2
            })
        );
    }

    fn arb_matrix() -> impl Strategy<Value = FieldMatrix> {
        (prop::sample::select(vec![3u32, 5, 7]), 1usize..7, 1usize..7).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(0..p, r * c)
                .prop_map(move |d| FieldMatrix::from_data(Field::new(p).unwrap(), r, c, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let r = m.rref();
            let rr = r.reduced.rref();
            prop_assert_eq!(&rr.reduced, &r.reduced);
            prop_assert_eq!(rr.rank, r.rank);
        }

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn solutions_are_exact(m in arb_matrix(), seed in any::<u64>()) {
            let f = m.field();
            let b: Vec<u32> = (0..m.rows()).map(|i| ((seed >> (i % 60)) as u32) % f.p()).collect();
            if let Some(x) = m.solve(&b).unwrap() {
                prop_assert_eq!(m.mul_vec(&x).unwrap(), b);
            }
            // A consistent right-hand side is always solved.
            let x0: Vec<u32> = (0..m.cols()).map(|i| (i as u32 * 7 + 1) % f.p()).collect();
            let b0 = m.mul_vec(&x0).unwrap();
            let x = m.solve(&b0).unwrap().expect("consistent system");
            prop_assert_eq!(m.mul_vec(&x).unwrap(), b0);
        }
    }
}
