//! Irreducibility testing for modules over finite fields (Norton's
//! criterion, as used by the MeatAxe).

use crate::ff::{EchelonBuilder, Field, FieldMatrix, SparseVec};
use crate::structconst::Subspace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Linear operator stored by sparse columns: column `j` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseOp {
    pub dim: usize,
    pub cols: Vec<SparseVec>,
}

impl SparseOp {
    pub fn from_dense(m: &FieldMatrix) -> SparseOp {
        let cols = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter_map(|i| {
                        let v = m.get(i, j);
                        (v != 0).then_some((i, v))
                    })
                    .collect()
            })
            .collect();
        SparseOp { dim: m.rows(), cols }
    }

    pub fn apply(&self, f: Field, v: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.dim];
        for (j, &c) in v.iter().enumerate() {
            if c != 0 {
                for &(i, a) in &self.cols[j] {
                    out[i] = f.mul_add(out[i], a, c);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseOp {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.dim];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, a) in col {
                cols[i].push((j, a));
            }
        }
        SparseOp {
            dim: self.cols.len(),
            cols,
        }
    }

    pub fn to_dense(&self, f: Field) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(f, self.dim, self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, a) in col {
                m.set(i, j, a);
            }
        }
        m
    }
}

/// Outcome of an irreducibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A proper nonzero invariant subspace.
    Reducible(Subspace),
    /// No singular algebra element was found, so no certificate either way.
    Inconclusive,
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

/// Smallest subspace containing `seeds` and stable under every generator.
pub fn spin(field: Field, dim: usize, gens: &[SparseOp], seeds: &[Vec<u32>]) -> EchelonBuilder {
    let mut eb = EchelonBuilder::new(field, dim);
    let mut queue: Vec<Vec<u32>> = Vec::new();
    for s in seeds {
        if eb.push_dense(s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        if eb.is_full() {
            break;
        }
        for g in gens {
            let w = g.apply(field, &v);
            if eb.push_dense(&w) {
                queue.push(w);
            }
        }
    }
    eb
}

fn random_combination(field: Field, dense: &[FieldMatrix], rng: &mut ChaCha8Rng) -> FieldMatrix {
    let n = dense[0].rows();
    let mut acc = FieldMatrix::zeros(field, n, n);
    for g in dense {
        let c = rng.gen_range(0..field.p());
        if c != 0 {
            acc = acc.add(&g.scale(c)).expect("same shape");
        }
    }
    acc
}

/// Every nonzero vector of the span of `basis`, up to scalars (first nonzero
/// coefficient 1).
fn projective_points(field: Field, basis: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let k = basis.len();
    let p = field.p();
    let mut out = Vec::new();
    let total = (p as u64).pow(k as u32);
    for code in 1..total {
        let mut coeffs = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            coeffs.push((c % p as u64) as u32);
            c /= p as u64;
        }
        let lead = coeffs.iter().rev().find(|&&x| x != 0).copied();
        if lead != Some(1) {
            continue;
        }
        let n = basis[0].len();
        let mut v = vec![0u32; n];
        for (b, &a) in basis.iter().zip(&coeffs) {
            if a != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = field.mul_add(*x, a, y);
                }
            }
        }
        out.push(v);
    }
    out
}

/// Norton's irreducibility test for the module `k^dim` acted on by the
/// associative algebra generated by `gens`.
///
/// A "peakword" candidate `θ` with small nonzero nullity is drawn from the
/// algebra; then the module is irreducible iff every nonzero vector of
/// `ker θ` spins to the whole module and one nonzero vector of `ker θᵀ`
/// spins to the whole dual module under the transposed generators.
pub fn norton_test(field: Field, dim: usize, gens: &[SparseOp], seed: u64) -> Irreducibility {
    if dim <= 1 {
        return Irreducibility::Irreducible;
    }
    if gens.is_empty() {
        let mut v = vec![0; dim];
        v[0] = 1;
        return Irreducibility::Reducible(Subspace::from_vectors(field, dim, [v]));
    }
    // Quick pass: a standard basis vector that fails to spin is a witness.
    let mut e0 = vec![0; dim];
    e0[0] = 1;
    let s = spin(field, dim, gens, &[e0]);
    if !s.is_full() {
        return Irreducibility::Reducible(Subspace::from_builder(s));
    }
    let dense: Vec<FieldMatrix> = gens.iter().map(|g| g.to_dense(field)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_lines: u64 = 4096;
    let mut best: Option<(usize, FieldMatrix)> = None;
    for attempt in 0..200 {
        let x = random_combination(field, &dense, &mut rng);
        let y = random_combination(field, &dense, &mut rng);
        let z = random_combination(field, &dense, &mut rng);
        let base = x.mul(&y).expect("square").add(&z).expect("square");
        for lambda in field.elements() {
            let mut theta = base.clone();
            for i in 0..dim {
                theta.set(i, i, field.sub(theta.get(i, i), lambda));
            }
            let nullity = dim - theta.rank();
            if nullity == 0 {
                continue;
            }
            if best.as_ref().is_none_or(|b| nullity < b.0) {
                best = Some((nullity, theta));
            }
        }
        if let Some((k, _)) = &best {
            if *k == 1 || (attempt >= 20 && (field.p() as u64).pow(*k as u32) <= max_lines) {
                break;
            }
        }
    }
    let Some((nullity, theta)) = best else {
        return spin_all_basis(field, dim, gens);
    };
    if (field.p() as u64).saturating_pow(nullity as u32) > 1 << 20 {
        return spin_all_basis(field, dim, gens);
    }
    let kernel = theta.kernel();
    for v in projective_points(field, &kernel) {
        let s = spin(field, dim, gens, &[v]);
        if !s.is_full() {
            return Irreducibility::Reducible(Subspace::from_builder(s));
        }
    }
    let dual_kernel = theta.transpose().kernel();
    let transposes: Vec<SparseOp> = gens.iter().map(SparseOp::transpose).collect();
    let w = dual_kernel[0].clone();
    let s = spin(field, dim, &transposes, &[w]);
    if !s.is_full() {
        // The annihilator of a proper dual submodule is a proper submodule.
        let rows = s.basis();
        let m = FieldMatrix::from_columns(field, dim, &rows).transpose();
        let ann = m.kernel();
        return Irreducibility::Reducible(Subspace::from_vectors(field, dim, ann));
    }
    Irreducibility::Irreducible
}

/// Without a singular element, only look for a witness among the spins of
/// the standard basis vectors.
fn spin_all_basis(field: Field, dim: usize, gens: &[SparseOp]) -> Irreducibility {
    for i in 0..dim {
        let mut e = vec![0; dim];
        e[i] = 1;
        let s = spin(field, dim, gens, &[e]);
        if !s.is_full() {
            return Irreducibility::Reducible(Subspace::from_builder(s));
        }
    }
    Irreducibility::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(f: Field, rows: &[Vec<i64>]) -> SparseOp {
        SparseOp::from_dense(&FieldMatrix::from_rows(f, rows).unwrap())
    }

    #[test]
    fn trivial_action_is_reducible() {
        let f = Field::new(3).unwrap();
        let zero = op(f, &[vec![0, 0], vec![0, 0]]);
        match norton_test(f, 2, &[zero], 1) {
            Irreducibility::Reducible(w) => assert_eq!(w.dim(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn natural_sl2_module_is_irreducible() {
        let f = Field::new(5).unwrap();
        let e = op(f, &[vec![0, 1], vec![0, 0]]);
        let fm = op(f, &[vec![0, 0], vec![1, 0]]);
        assert!(norton_test(f, 2, &[e, fm], 7).is_irreducible());
    }

    #[test]
    fn upper_triangular_action_is_reducible() {
        let f = Field::new(5).unwrap();
        let a = op(f, &[vec![1, 1, 0], vec![0, 2, 1], vec![0, 0, 3]]);
        let b = op(f, &[vec![0, 1, 1], vec![0, 0, 1], vec![0, 0, 0]]);
        match norton_test(f, 3, &[a, b], 3) {
            Irreducibility::Reducible(w) => {
                assert!(w.dim() > 0 && w.dim() < 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dual_side_witness() {
        // The span of e0 is not invariant but the span of e1 is: the
        // submodule is found either directly or through the dual.
        let f = Field::new(3).unwrap();
        let a = op(f, &[vec![0, 0], vec![1, 0]]);
        match norton_test(f, 2, &[a], 11) {
            Irreducibility::Reducible(w) => {
                assert_eq!(w.dim(), 1);
                assert!(w.contains(&[0, 1]));
            }
            other => panic!("{other:?}"),
        }
    }
}
