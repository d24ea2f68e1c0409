//! Orthogonal and orthosymplectic triple systems.

use crate::composition::CompositionSuperalgebra;
use crate::error::{Error, Result};
use crate::magicsquare::FixedSplit;
use crate::ff::{accumulate, sparsify, Field, FieldMatrix, SparseVec};
use crate::meataxe::{norton_test, Irreducibility, SparseOp};
use crate::structconst::{
    check_ternary_derivation, Check, MapAlgebra, Simplicity, Subspace, SuperAlgebra, Witness,
};
use crate::superlinear::{supercommutator_matrices, SuperDim, SuperSpace};
use rayon::prelude::*;

/// Which axiom set a triple system is meant to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Purely even, symmetric form.
    Orthogonal,
    /// Symmetric form on the even part, alternating on the odd part.
    Orthosymplectic,
}

/// Ternary product `[eᵢ eⱼ e_k]` and an even supersymmetric form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSystem {
    pub space: SuperSpace,
    table: Vec<SparseVec>,
    pub form: Vec<u32>,
    pub flavor: Flavor,
}

impl TripleSystem {
    pub fn new(space: SuperSpace, table: Vec<SparseVec>, form: Vec<u32>, flavor: Flavor) -> Result<TripleSystem> {
        let n = space.dim();
        if table.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                found: table.len(),
            });
        }
        if form.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: form.len(),
            });
        }
        if flavor == Flavor::Orthogonal && space.superdim().odd > 0 {
            return Err(Error::NotEven);
        }
        let p = space.field().p();
        let mut table = table;
        for (idx, entry) in table.iter_mut().enumerate() {
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            entry.retain(|e| e.1 % p != 0);
            entry.sort_unstable_by_key(|e| e.0);
            for &(l, _) in entry.iter() {
                if space.parity(l) != space.parity(i) ^ space.parity(j) ^ space.parity(k) {
                    return Err(Error::ParityViolation);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !form[i * n + j].is_multiple_of(p) && space.parity(i) != space.parity(j) {
                    return Err(Error::ParityViolation);
                }
            }
        }
        Ok(TripleSystem {
            space,
            table,
            form,
            flavor,
        })
    }

    /// Builds the table from a closure returning the dense `[eᵢ eⱼ e_k]`.
    pub fn from_fn(
        space: SuperSpace,
        form: Vec<u32>,
        flavor: Flavor,
        mut triple: impl FnMut(usize, usize, usize) -> Vec<u32>,
    ) -> Result<TripleSystem> {
        let n = space.dim();
        let mut table = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    table.push(sparsify(&triple(i, j, k)));
                }
            }
        }
        TripleSystem::new(space, table, form, flavor)
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn superdim(&self) -> SuperDim {
        self.space.superdim()
    }

    #[inline]
    pub fn parity(&self, i: usize) -> u8 {
        self.space.parity(i)
    }

    #[inline]
    pub fn triple(&self, i: usize, j: usize, k: usize) -> &[(usize, u32)] {
        let n = self.dim();
        &self.table[(i * n + j) * n + k]
    }

    pub fn table(&self) -> &[SparseVec] {
        &self.table
    }

    #[inline]
    pub fn form_entry(&self, i: usize, j: usize) -> u32 {
        self.form[i * self.dim() + j]
    }

    /// `[x y z]` for coordinate vectors.
    pub fn eval(&self, x: &[u32], y: &[u32], z: &[u32]) -> Vec<u32> {
        let f = self.field();
        let n = self.dim();
        let nz = |v: &[u32]| -> Vec<(usize, u32)> {
            v.iter().enumerate().filter(|e| *e.1 != 0).map(|(i, &c)| (i, c)).collect()
        };
        let (xs, ys, zs) = (nz(x), nz(y), nz(z));
        let mut out = vec![0u32; n];
        for &(i, a) in &xs {
            for &(j, b) in &ys {
                let ab = f.mul(a, b);
                for &(k, c) in &zs {
                    let abc = f.mul(ab, c);
                    for &(l, t) in self.triple(i, j, k) {
                        out[l] = f.mul_add(out[l], abc, t);
                    }
                }
            }
        }
        out
    }

    /// `d_{x,y} = [eₓ e_y ·]` as a matrix.
    pub fn d_matrix(&self, x: usize, y: usize) -> FieldMatrix {
        let n = self.dim();
        let mut m = FieldMatrix::zeros(self.field(), n, n);
        for w in 0..n {
            for &(l, c) in self.triple(x, y, w) {
                m.set(l, w, c);
            }
        }
        m
    }

    /// Rank of the Gram matrix of the form.
    pub fn form_rank(&self) -> usize {
        let n = self.dim();
        FieldMatrix::from_data(self.field(), n, n, self.form.clone())
            .expect("square")
            .rank()
    }

    pub fn form_value(&self, x: &[u32], y: &[u32]) -> u32 {
        let f = self.field();
        let n = self.dim();
        let mut acc = 0;
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b != 0 {
                    acc = f.add(acc, f.mul(f.mul(a, b), self.form[i * n + j]));
                }
            }
        }
        acc
    }
}

/// Adds `c · [eₓ e_y z]` for sparse `z` into `acc`.
fn add_triple_sparse(t: &TripleSystem, acc: &mut [u32], x: usize, y: usize, z: &[(usize, u32)], c: u32) {
    let f = t.field();
    for &(m, zc) in z {
        accumulate(f, acc, t.triple(x, y, m), f.mul(c, zc));
    }
}

fn defect_witness(acc: &[u32], indices: Vec<usize>, detail: &str) -> Option<Witness> {
    acc.iter()
        .any(|&c| c != 0)
        .then(|| Witness::new(indices, sparsify(acc), detail))
}

/// `[xyz] + (−1)^{xy}[yxz] = 0`.
fn check_alternating(t: &TripleSystem) -> Check {
    let f = t.field();
    let n = t.dim();
    let found = (0..n).into_par_iter().find_map_first(|x| {
        let mut acc = vec![0u32; n];
        for y in 0..n {
            let s = f.sign(t.parity(x) & t.parity(y) == 1);
            for z in 0..n {
                acc.iter_mut().for_each(|a| *a = 0);
                accumulate(f, &mut acc, t.triple(x, y, z), 1);
                accumulate(f, &mut acc, t.triple(y, x, z), s);
                if let Some(w) = defect_witness(&acc, vec![x, y, z], "alternating identity [xyz] + ±[yxz] = 0") {
                    return Some(w);
                }
            }
        }
        None
    });
    found.map_or(Ok(()), Err)
}

/// `[xyz] + (−1)^{yz}[xzy] = (x|y)z + (−1)^{yz}(x|z)y − 2(y|z)x`.
fn check_symmetrized(t: &TripleSystem) -> Check {
    let f = t.field();
    let n = t.dim();
    let found = (0..n).into_par_iter().find_map_first(|x| {
        let mut acc = vec![0u32; n];
        for y in 0..n {
            for z in 0..n {
                let s = f.sign(t.parity(y) & t.parity(z) == 1);
                acc.iter_mut().for_each(|a| *a = 0);
                accumulate(f, &mut acc, t.triple(x, y, z), 1);
                accumulate(f, &mut acc, t.triple(x, z, y), s);
                acc[z] = f.sub(acc[z], t.form_entry(x, y));
                acc[y] = f.sub(acc[y], f.mul(s, t.form_entry(x, z)));
                acc[x] = f.add(acc[x], f.mul(2, t.form_entry(y, z)));
                if let Some(w) = defect_witness(&acc, vec![x, y, z], "symmetrized identity [xyz] + ±[xzy]") {
                    return Some(w);
                }
            }
        }
        None
    });
    found.map_or(Ok(()), Err)
}

/// `[xy[uvw]] = [[xyu]vw] + (−1)^{(x+y)u}[u[xyv]w] + (−1)^{(x+y)(u+v)}[uv[xyw]]`
/// over all basis quintuples.
fn scan_derivation_identity(t: &TripleSystem) -> Check {
    let f = t.field();
    let n = t.dim();
    let found = (0..n * n).into_par_iter().find_map_first(|xy| {
        let (x, y) = (xy / n, xy % n);
        let pxy = t.parity(x) ^ t.parity(y);
        let mut acc = vec![0u32; n];
        for u in 0..n {
            let s1 = f.sign(pxy & t.parity(u) == 1);
            for v in 0..n {
                let s2 = f.sign(pxy & (t.parity(u) ^ t.parity(v)) == 1);
                for w in 0..n {
                    acc.iter_mut().for_each(|a| *a = 0);
                    add_triple_sparse(t, &mut acc, x, y, t.triple(u, v, w), 1);
                    for &(m, c) in t.triple(x, y, u) {
                        accumulate(f, &mut acc, t.triple(m, v, w), f.neg(c));
                    }
                    for &(m, c) in t.triple(x, y, v) {
                        accumulate(f, &mut acc, t.triple(u, m, w), f.neg(f.mul(s1, c)));
                    }
                    add_triple_sparse(t, &mut acc, u, v, t.triple(x, y, w), f.neg(s2));
                    if let Some(wit) = defect_witness(&acc, vec![x, y, u, v, w], "derivation identity [xy[uvw]]") {
                        return Some(wit);
                    }
                }
            }
        }
        None
    });
    found.map_or(Ok(()), Err)
}

/// The derivation identity holds iff every homogeneous element spanning
/// `inder T` is a derivation, which is much cheaper to test; the quintuple
/// scan only runs to locate a witness.
fn check_derivation_identity(t: &TripleSystem) -> Check {
    let fast = match inder(t) {
        Ok(d) => d
            .maps
            .par_iter()
            .all(|m| check_ternary_derivation(t, &m.matrix, m.parity).is_ok()),
        Err(_) => false,
    };
    if fast {
        Ok(())
    } else {
        scan_derivation_identity(t)
    }
}

/// `([xyu]|v) + (−1)^{(x+y)u}(u|[xyv]) = 0`.
fn check_form_invariance(t: &TripleSystem) -> Check {
    let f = t.field();
    let n = t.dim();
    let found = (0..n * n).into_par_iter().find_map_first(|xy| {
        let (x, y) = (xy / n, xy % n);
        let pxy = t.parity(x) ^ t.parity(y);
        for u in 0..n {
            let s = f.sign(pxy & t.parity(u) == 1);
            for v in 0..n {
                let mut val = 0;
                for &(m, c) in t.triple(x, y, u) {
                    val = f.mul_add(val, c, t.form_entry(m, v));
                }
                for &(m, c) in t.triple(x, y, v) {
                    val = f.mul_add(val, f.mul(s, c), t.form_entry(u, m));
                }
                if val != 0 {
                    return Some(Witness::new(vec![x, y, u, v], vec![(0, val)], "form invariance ([xyu]|v) + ±(u|[xyv])"));
                }
            }
        }
        None
    });
    found.map_or(Ok(()), Err)
}

/// Form is even and supersymmetric: symmetric on the even part, alternating
/// on the odd part.
fn check_form_shape(t: &TripleSystem) -> Check {
    let f = t.field();
    let n = t.dim();
    for i in 0..n {
        for j in 0..n {
            let s = f.sign(t.parity(i) & t.parity(j) == 1);
            if t.form_entry(i, j) != f.mul(s, t.form_entry(j, i)) {
                return Err(Witness::new(vec![i, j], Vec::new(), "form is not supersymmetric"));
            }
        }
    }
    Ok(())
}

/// All four orthosymplectic triple system identities with super signs,
/// exhaustively on basis tuples.
pub fn check_osts(t: &TripleSystem) -> Check {
    check_form_shape(t)?;
    check_alternating(t)?;
    check_symmetrized(t)?;
    check_derivation_identity(t)?;
    check_form_invariance(t)
}

/// Orthogonal triple system identities: `[xxy] = 0`,
/// `[xyy] = (x|y)y − (y|y)x` (checked in polarized form), the derivation
/// identity and invariance of the form. Requires a purely even system.
pub fn check_ots(t: &TripleSystem) -> Check {
    if let Some(i) = (0..t.dim()).find(|&i| t.parity(i) == 1) {
        return Err(Witness::new(vec![i], Vec::new(), "orthogonal triple system with an odd basis element"));
    }
    check_osts(t)
}

/// `inder T = span{d_{x,y}}` as matrices with structure constants.
pub fn inder(t: &TripleSystem) -> Result<MapAlgebra> {
    let n = t.dim();
    let flats = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| {
        (t.parity(x) ^ t.parity(y), t.d_matrix(x, y).data().to_vec())
    });
    MapAlgebra::from_flats(&t.space, "d", flats)
}

/// A 2-dimensional space with basis `a, b`, `⟨a|b⟩ = 1`, and the basis
/// `h, e, f` of `sp(V)`: `h(a) = a, h(b) = −b, e(b) = a, f(a) = b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticPlane {
    pub field: Field,
}

impl SymplecticPlane {
    pub fn new(field: Field) -> SymplecticPlane {
        SymplecticPlane { field }
    }

    /// `⟨eᵢ|eⱼ⟩` for `i, j ∈ {0 = a, 1 = b}`.
    pub fn pairing(&self, i: usize, j: usize) -> u32 {
        match (i, j) {
            (0, 1) => 1,
            (1, 0) => self.field.neg(1),
            _ => 0,
        }
    }

    pub fn h(&self) -> FieldMatrix {
        FieldMatrix::from_rows(self.field, &[vec![1, 0], vec![0, -1]]).expect("2×2")
    }

    pub fn e(&self) -> FieldMatrix {
        FieldMatrix::from_rows(self.field, &[vec![0, 1], vec![0, 0]]).expect("2×2")
    }

    pub fn f(&self) -> FieldMatrix {
        FieldMatrix::from_rows(self.field, &[vec![0, 0], vec![1, 0]]).expect("2×2")
    }

    /// `h, e, f` in that order.
    pub fn sp_basis(&self) -> [FieldMatrix; 3] {
        [self.h(), self.e(), self.f()]
    }

    /// `γ_{u,v} = ⟨u|·⟩v + ⟨v|·⟩u` for basis vectors `u, v`.
    pub fn gamma(&self, u: usize, v: usize) -> FieldMatrix {
        let f = self.field;
        let mut m = FieldMatrix::zeros(f, 2, 2);
        for w in 0..2 {
            for (x, y) in [(u, v), (v, u)] {
                let c = self.pairing(x, w);
                m.set(y, w, f.add(m.get(y, w), c));
            }
        }
        m
    }

    /// Coordinates `(α, β, γ)` of a traceless `m = αh + βe + γf`.
    pub fn sp_coordinates(&self, m: &FieldMatrix) -> Option<[u32; 3]> {
        let f = self.field;
        (f.add(m.get(0, 0), m.get(1, 1)) == 0).then(|| [m.get(0, 0), m.get(0, 1), m.get(1, 0)])
    }
}

/// The Lie superalgebra `g(T, s) = (sp(V) ⊕ s) ⊕ (V ⊗ T)` with the index of
/// each summand's basis element.
#[derive(Clone, Debug)]
pub struct TripleLie {
    pub algebra: SuperAlgebra,
    /// Indices of `h, e, f`.
    pub sp: [usize; 3],
    /// Indices of the basis of `s`.
    pub s: Vec<usize>,
    /// Index of `v ⊗ x` at `[v][x]`, `v ∈ {0 = a, 1 = b}`.
    pub vt: [Vec<usize>; 2],
}

/// Parity of `v ⊗ x` in `g(T, s)`: `V` is odd, so `1 + p(x)`. For an
/// orthogonal system this is always odd.
pub fn tensor_parity(t: &TripleSystem, x: usize) -> u8 {
    1 ^ t.parity(x)
}

/// `g(T, s)`. `s` must contain every `d_{x,y}`. Brackets: `sp(V) ⊕ s` as a
/// direct sum, `[γ, v⊗x] = γ(v)⊗x`, `[d, v⊗x] = (−1)^{|d|} v⊗d(x)`,
/// `[u⊗x, v⊗y] = (−1)^{|x|}(−(x|y)γ_{u,v} + ⟨u|v⟩d_{x,y})`.
pub fn lie_superalgebra_of(t: &TripleSystem, s: &MapAlgebra) -> Result<TripleLie> {
    let f = t.field();
    let n = t.dim();
    let plane = SymplecticPlane::new(f);
    let ds = s.dim();
    // Natural order: h, e, f, s, a⊗T, b⊗T.
    let mut basis: Vec<(String, u8)> = vec![("h".into(), 0), ("e".into(), 0), ("f".into(), 0)];
    for k in 0..ds {
        basis.push((format!("s:{}", s.algebra.space.label(k)), s.maps[k].parity));
    }
    for vname in ["a", "b"] {
        for x in 0..n {
            basis.push((format!("{vname}⊗{}", t.space.label(x)), tensor_parity(t, x)));
        }
    }
    let (space, index) = SuperSpace::partitioned(f, basis)?;
    let dim = space.dim();
    let sp = [index[0], index[1], index[2]];
    let s_idx: Vec<usize> = (0..ds).map(|k| index[3 + k]).collect();
    let vt: [Vec<usize>; 2] = std::array::from_fn(|v| (0..n).map(|x| index[3 + ds + v * n + x]).collect());
    // Coordinates of d_{x,y} in s.
    let mut dcoords: Vec<SparseVec> = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let c = s
                .coordinates(&t.d_matrix(x, y))
                .ok_or_else(|| Error::AxiomFailure(format!("d_{{{x},{y}}} not in s")))?;
            dcoords.push(sparsify(&c));
        }
    }
    let sp_mats = plane.sp_basis();
    let sp_vec = |m: &FieldMatrix| -> Result<Vec<(usize, u32)>> {
        let c = plane
            .sp_coordinates(m)
            .ok_or_else(|| Error::AxiomFailure("sp(V) bracket left sp(V)".into()))?;
        Ok(c.iter().enumerate().filter(|e| *e.1 != 0).map(|(k, &v)| (sp[k], v)).collect())
    };
    enum Part {
        Sp(usize),
        S(usize),
        Vt(usize, usize),
    }
    let mut part_of: Vec<Option<Part>> = (0..dim).map(|_| None).collect();
    for k in 0..3 {
        part_of[sp[k]] = Some(Part::Sp(k));
    }
    for k in 0..ds {
        part_of[s_idx[k]] = Some(Part::S(k));
    }
    for v in 0..2 {
        for x in 0..n {
            part_of[vt[v][x]] = Some(Part::Vt(v, x));
        }
    }
    let parts: Vec<Part> = part_of.into_iter().map(|p| p.expect("every index assigned")).collect();
    // [γ, v⊗x] as a sparse vector.
    let act_sp = |k: usize, v: usize, x: usize| -> SparseVec {
        let m = &sp_mats[k];
        (0..2)
            .filter(|&w| m.get(w, v) != 0)
            .map(|w| (vt[w][x], m.get(w, v)))
            .collect()
    };
    let act_s = |k: usize, v: usize, x: usize| -> SparseVec {
        let d = &s.maps[k];
        let sg = f.sign(d.parity == 1);
        (0..n)
            .filter(|&y| d.matrix.get(y, x) != 0)
            .map(|y| (vt[v][y], f.mul(sg, d.matrix.get(y, x))))
            .collect()
    };
    let mut table: Vec<SparseVec> = vec![Vec::new(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let sg = f.neg(f.sign(space.parity(i) & space.parity(j) == 1));
            let negate = |v: SparseVec| -> SparseVec { v.into_iter().map(|(k, c)| (k, f.mul(sg, c))).collect() };
            let entry: SparseVec = match (&parts[i], &parts[j]) {
                (Part::Sp(a), Part::Sp(b)) => {
                    sp_vec(&supercommutator_matrices(&sp_mats[*a], 0, &sp_mats[*b], 0))?
                }
                (Part::S(a), Part::S(b)) => s
                    .algebra
                    .product(*a, *b)
                    .iter()
                    .map(|&(k, c)| (s_idx[k], c))
                    .collect(),
                (Part::Sp(_), Part::S(_)) | (Part::S(_), Part::Sp(_)) => Vec::new(),
                (Part::Sp(k), Part::Vt(v, x)) => act_sp(*k, *v, *x),
                (Part::Vt(v, x), Part::Sp(k)) => negate(act_sp(*k, *v, *x)),
                (Part::S(k), Part::Vt(v, x)) => act_s(*k, *v, *x),
                (Part::Vt(v, x), Part::S(k)) => negate(act_s(*k, *v, *x)),
                (Part::Vt(u, x), Part::Vt(v, y)) => {
                    let sx = f.sign(t.parity(*x) == 1);
                    let mut acc = vec![0u32; dim];
                    let g = plane.gamma(*u, *v);
                    let cg = f.neg(f.mul(sx, t.form_entry(*x, *y)));
                    if cg != 0 {
                        accumulate(f, &mut acc, &sp_vec(&g)?, cg);
                    }
                    let cd = f.mul(sx, plane.pairing(*u, *v));
                    if cd != 0 {
                        let d: SparseVec = dcoords[x * n + y].iter().map(|&(k, c)| (s_idx[k], c)).collect();
                        accumulate(f, &mut acc, &d, cd);
                    }
                    sparsify(&acc)
                }
            };
            table[i * dim + j] = entry;
        }
    }
    let algebra = SuperAlgebra::new(space, table)?;
    Ok(TripleLie {
        algebra,
        sp,
        s: s_idx,
        vt,
    })
}

/// `g̃(T) = inder(T) ⊕ T` in characteristic 3, with `[d, x] = d(x)` and
/// `[x, y] = d_{x,y}`. The ±-grading is stored as the grading code
/// (0 on `inder T`, 1 on `T`).
#[derive(Clone, Debug)]
pub struct TildeLie {
    pub algebra: SuperAlgebra,
    /// Indices of the `inder T` basis.
    pub inder: Vec<usize>,
    /// Indices of the basis of `T`.
    pub t: Vec<usize>,
}

pub fn tilde_lie_of(t: &TripleSystem) -> Result<TildeLie> {
    let f = t.field();
    if f.p() != 3 {
        return Err(Error::WrongCharacteristic { expected: 3, found: f.p() });
    }
    let n = t.dim();
    let d = inder(t)?;
    let m = d.dim();
    let mut basis: Vec<(String, u8)> = (0..m)
        .map(|k| (format!("d:{}", d.algebra.space.label(k)), d.maps[k].parity))
        .collect();
    basis.extend((0..n).map(|x| (t.space.label(x).to_string(), t.parity(x))));
    let (space, index) = SuperSpace::partitioned(f, basis)?;
    let dim = space.dim();
    let di: Vec<usize> = (0..m).map(|k| index[k]).collect();
    let ti: Vec<usize> = (0..n).map(|x| index[m + x]).collect();
    let mut which = vec![(false, 0usize); dim];
    for (k, &i) in di.iter().enumerate() {
        which[i] = (false, k);
    }
    for (x, &i) in ti.iter().enumerate() {
        which[i] = (true, x);
    }
    let act = |k: usize, x: usize| -> SparseVec {
        (0..n)
            .filter(|&y| d.maps[k].matrix.get(y, x) != 0)
            .map(|y| (ti[y], d.maps[k].matrix.get(y, x)))
            .collect()
    };
    let mut table = vec![Vec::new(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let sg = f.neg(f.sign(space.parity(i) & space.parity(j) == 1));
            table[i * dim + j] = match (which[i], which[j]) {
                ((false, a), (false, b)) => d.algebra.product(a, b).iter().map(|&(k, c)| (di[k], c)).collect(),
                ((false, k), (true, x)) => act(k, x),
                ((true, x), (false, k)) => act(k, x).into_iter().map(|(l, c)| (l, f.mul(sg, c))).collect(),
                ((true, x), (true, y)) => {
                    let c = d
                        .coordinates(&t.d_matrix(x, y))
                        .ok_or_else(|| Error::AxiomFailure("d_{x,y} outside inder".into()))?;
                    c.iter()
                        .enumerate()
                        .filter(|e| *e.1 != 0)
                        .map(|(k, &v)| (di[k], v))
                        .collect()
                }
            };
        }
    }
    let grading: Vec<u8> = which.iter().map(|w| u8::from(w.0)).collect();
    let algebra = SuperAlgebra::new(space, table)?.with_grading(grading)?;
    Ok(TildeLie { algebra, inder: di, t: ti })
}

/// Smallest ideal of `t` containing `seed`.
pub fn triple_ideal_closure(t: &TripleSystem, seed: &[Vec<u32>]) -> Subspace {
    let ops = triple_operators(t);
    let eb = crate::meataxe::spin(t.field(), t.dim(), &ops, seed);
    Subspace::from_builder(eb)
}

/// `z ↦ [x y z]`, `y ↦ [x y z]`, `x ↦ [x y z]` for all basis pairs: a
/// subspace is an ideal iff it is stable under all of them.
fn triple_operators(t: &TripleSystem) -> Vec<SparseOp> {
    let n = t.dim();
    let mut ops = Vec::with_capacity(3 * n * n);
    for a in 0..n {
        for b in 0..n {
            let mut l = vec![Vec::new(); n];
            let mut m = vec![Vec::new(); n];
            let mut r = vec![Vec::new(); n];
            for z in 0..n {
                l[z] = t.triple(a, b, z).to_vec();
                m[z] = t.triple(a, z, b).to_vec();
                r[z] = t.triple(z, a, b).to_vec();
            }
            for cols in [l, m, r] {
                if cols.iter().any(|c| !c.is_empty()) {
                    ops.push(SparseOp { dim: n, cols });
                }
            }
        }
    }
    ops
}

/// Simplicity verdict for a triple system, together with the form data the
/// nondegeneracy dichotomy refers to.
#[derive(Clone, Debug)]
pub struct TripleSimplicity {
    pub verdict: Simplicity,
    pub form_rank: usize,
    /// Characteristic 3, purely odd, dimension 2: the one case where a
    /// nondegenerate form does not force simplicity.
    pub exceptional: bool,
}

impl TripleSimplicity {
    pub fn form_nondegenerate(&self, dim: usize) -> bool {
        self.form_rank == dim
    }

    /// Simple implies nondegenerate; nondegenerate implies simple outside
    /// the exceptional case.
    pub fn consistent(&self, dim: usize) -> bool {
        let nd = self.form_nondegenerate(dim);
        match self.verdict {
            Simplicity::Simple => nd,
            Simplicity::NotSimple { .. } => !nd || self.exceptional,
            Simplicity::Undecided => true,
        }
    }
}

/// Ideal test: no proper nonzero subspace stable under all multiplication
/// operators (Norton's criterion), plus the form radical.
pub fn triple_is_simple(t: &TripleSystem) -> TripleSimplicity {
    let f = t.field();
    let n = t.dim();
    let form_rank = t.form_rank();
    let sd = t.superdim();
    let exceptional = f.p() == 3 && sd.even == 0 && sd.odd == 2;
    let verdict = if n == 0 {
        Simplicity::NotSimple {
            witness: Subspace::zero(f, 0),
            reason: "zero system".into(),
        }
    } else if t.table.iter().all(|e| e.is_empty()) {
        let mut e0 = vec![0; n];
        e0[0] = 1;
        Simplicity::NotSimple {
            witness: Subspace::from_vectors(f, n, [e0]),
            reason: "trivial triple product".into(),
        }
    } else if form_rank < n && form_rank > 0 {
        let gram = FieldMatrix::from_data(f, n, n, t.form.clone()).expect("square");
        Simplicity::NotSimple {
            witness: Subspace::from_vectors(f, n, gram.kernel()),
            reason: "radical of the form".into(),
        }
    } else {
        match norton_test(f, n, &triple_operators(t), 0x7121_e5) {
            Irreducibility::Irreducible => Simplicity::Simple,
            Irreducibility::Reducible(w) => Simplicity::NotSimple {
                witness: w,
                reason: "proper ideal".into(),
            },
            Irreducibility::Inconclusive => Simplicity::Undecided,
        }
    };
    TripleSimplicity {
        verdict,
        form_rank,
        exceptional,
    }
}

/// The trace-zero part `C⁰` of a unital Hurwitz superalgebra with its Lie
/// bracket `[x,y] = xy − (−1)^{xy}yx`, and the triple system
/// `[xyz] = [[x,y],z]`, `(x|y) = 2b(x,y)`.
#[derive(Clone, Debug)]
pub struct C0 {
    /// Coordinates in `C` of each basis vector of `C⁰`.
    pub embedding: Vec<Vec<u32>>,
    pub lie: SuperAlgebra,
    pub osts: TripleSystem,
}

fn combination_label(space: &SuperSpace, v: &[u32]) -> String {
    let f = space.field();
    let mut out = String::new();
    for (i, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let s = f.to_signed(c);
        let sign = if s < 0 { "-" } else if out.is_empty() { "" } else { "+" };
        let mag = s.unsigned_abs();
        if mag == 1 {
            out.push_str(&format!("{sign}{}", space.label(i)));
        } else {
            out.push_str(&format!("{sign}{mag}{}", space.label(i)));
        }
    }
    out
}

/// Builds `C⁰`. The construction runs in any odd characteristic; the
/// orthosymplectic axioms hold in characteristic 3.
pub fn c0(c: &CompositionSuperalgebra) -> Result<C0> {
    let unit = c.unit.as_ref().ok_or(Error::NotUnital)?;
    let f = c.field();
    let n = c.dim();
    let functional: Vec<u32> = (0..n).map(|j| c.bv(unit, &c.basis_vector(j))).collect();
    let row = FieldMatrix::from_data(f, 1, n, functional).expect("row");
    let embedding = row.kernel();
    let sub = Subspace::from_vectors(f, n, embedding.iter().cloned());
    let m = embedding.len();
    let parities: Vec<u8> = embedding
        .iter()
        .map(|v| c.space().vector_parity(v).expect("kernel basis is homogeneous"))
        .collect();
    let labels: Vec<(String, u8)> = embedding
        .iter()
        .zip(&parities)
        .map(|(v, &p)| (combination_label(c.space(), v), p))
        .collect();
    let space = SuperSpace::new(f, labels)?;
    let coords_of = |v: &[u32]| -> Result<Vec<u32>> {
        let full = sub
            .coordinates(v)
            .ok_or_else(|| Error::AxiomFailure("bracket left C⁰".into()))?;
        // `Subspace` coordinates follow its echelon basis; map back to `embedding`.
        Ok(express(f, &sub, &embedding, &full))
    };
    let bracket = |x: &[u32], px: u8, y: &[u32], py: u8| -> Vec<u32> {
        let xy = c.mul(x, y);
        let yx = c.mul(y, x);
        let s = f.sign(px & py == 1);
        xy.iter().zip(&yx).map(|(&a, &b)| f.sub(a, f.mul(s, b))).collect()
    };
    let mut lie_table = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let br = bracket(&embedding[i], parities[i], &embedding[j], parities[j]);
            lie_table.push(sparsify(&coords_of(&br)?));
        }
    }
    let lie = SuperAlgebra::new(space.clone(), lie_table)?;
    let mut form = vec![0; m * m];
    for i in 0..m {
        for j in 0..m {
            form[i * m + j] = f.mul(2, c.bv(&embedding[i], &embedding[j]));
        }
    }
    let basis: Vec<Vec<u32>> = (0..m).map(|i| lie.basis_vector(i)).collect();
    let osts = TripleSystem::from_fn(space, form, Flavor::Orthosymplectic, |i, j, k| {
        lie.mul(&lie.mul(&basis[i], &basis[j]), &basis[k])
    })?;
    Ok(C0 { embedding, lie, osts })
}

/// Coordinates of a vector with respect to `vectors` (a basis of `sub`),
/// given its coordinates in the echelon basis of `sub`.
fn express(f: Field, sub: &Subspace, vectors: &[Vec<u32>], echelon_coords: &[u32]) -> Vec<u32> {
    let k = vectors.len();
    let n = sub.ambient_dim();
    let ech = sub.basis();
    let mut target = vec![0u32; n];
    for (c, b) in echelon_coords.iter().zip(&ech) {
        for (t, &v) in target.iter_mut().zip(b) {
            *t = f.mul_add(*t, *c, v);
        }
    }
    let m = FieldMatrix::from_columns(f, n, vectors);
    m.solve(&target)
        .expect("shapes agree")
        .expect("vector lies in the span")
        .into_iter()
        .take(k)
        .collect()
}

/// `C⁰` triple system for a unital Hurwitz superalgebra.
pub fn c0_osts(c: &CompositionSuperalgebra) -> Result<TripleSystem> {
    Ok(c0(c)?.osts)
}

/// `xy = ½(−b(x,y)1 + [x,y])` and `b([x,y],z) = b(x,[y,z])` on `C⁰`.
pub fn check_c0_identities(c: &CompositionSuperalgebra, z: &C0) -> Check {
    let f = c.field();
    let unit = c.unit.as_ref().expect("C⁰ comes from a unital algebra");
    let m = z.embedding.len();
    let emb = |v: &[u32]| -> Vec<u32> {
        let mut out = vec![0; c.dim()];
        for (k, &a) in v.iter().enumerate() {
            accumulate(f, &mut out, &sparsify(&z.embedding[k]), a);
        }
        out
    };
    for i in 0..m {
        for j in 0..m {
            let (x, y) = (&z.embedding[i], &z.embedding[j]);
            let br = emb(&z.lie.mul(&z.lie.basis_vector(i), &z.lie.basis_vector(j)));
            let bxy = c.bv(x, y);
            let expect: Vec<u32> = (0..c.dim())
                .map(|k| f.mul(f.half(), f.sub(br[k], f.mul(bxy, unit[k]))))
                .collect();
            if c.mul(x, y) != expect {
                return Err(Witness::new(vec![i, j], Vec::new(), "xy = ½(−b(x,y)1 + [x,y])"));
            }
            for k in 0..m {
                let zk = &z.embedding[k];
                let yz = emb(&z.lie.mul(&z.lie.basis_vector(j), &z.lie.basis_vector(k)));
                if c.bv(&br, zk) != c.bv(x, &yz) {
                    return Err(Witness::new(vec![i, j, k], Vec::new(), "b([x,y],z) = b(x,[y,z])"));
                }
            }
        }
    }
    Ok(())
}

/// The displayed map `B(4,2)⁰ → osp(1,2) ⊂ gl(1|2)`, with `u = v₁`,
/// `v = −v₂` (so `(u|v) = 1`):
/// `f ↦ [[0,0,0],[0,α,β],[0,γ,−α]]` where `f(u) = αu + γv`, `f(v) = βu − αv`;
/// `μu + νv ↦ [[0,−ν,μ],[μ,0,0],[ν,0,0]]`.
/// Returns the image of each `C⁰` basis vector.
pub fn osp12_images(c: &CompositionSuperalgebra, z: &C0) -> Result<Vec<FieldMatrix>> {
    let f = c.field();
    if c.dim() != 6 || c.space().superdim() != SuperDim::new(4, 2) {
        return Err(Error::InvalidBasis("expected B(4,2)".into()));
    }
    let mut out = Vec::new();
    for v in &z.embedding {
        let mut m = FieldMatrix::zeros(f, 3, 3);
        // Matrix of the even part in the basis (v₁, v₂): entry (a, b) at 2a + b.
        // In the basis (u, v) = (v₁, −v₂) it becomes [[m₀₀, −m₀₁], [−m₁₀, m₁₁]].
        let (m00, m01, m10, m11) = (v[0], v[1], v[2], v[3]);
        m.set(1, 1, m00);
        m.set(1, 2, f.neg(m01));
        m.set(2, 1, f.neg(m10));
        m.set(2, 2, m11);
        // Odd part: μu + νv = μv₁ − νv₂.
        let (mu, nu) = (v[4], f.neg(v[5]));
        m.set(0, 1, f.neg(nu));
        m.set(0, 2, mu);
        m.set(1, 0, mu);
        m.set(2, 0, nu);
        out.push(m);
    }
    Ok(out)
}

/// Checks that [`osp12_images`] is injective, lands in `osp(1,2)`, and
/// preserves brackets (supercommutator in `gl(1|2)`, parities `0|1,1`).
pub fn check_osp12_isomorphism(c: &CompositionSuperalgebra, z: &C0) -> Result<Check> {
    let f = c.field();
    let imgs = osp12_images(c, z)?;
    let m = imgs.len();
    let mut eb = crate::ff::EchelonBuilder::new(f, 9);
    for img in &imgs {
        // osp(1,2) shape: (0,0) = 0, (2,2) = −(1,1), (0,1) = −(2,0), (0,2) = (1,0).
        let ok = img.get(0, 0) == 0
            && img.get(2, 2) == f.neg(img.get(1, 1))
            && img.get(0, 1) == f.neg(img.get(2, 0))
            && img.get(0, 2) == img.get(1, 0);
        if !ok {
            return Ok(Err(Witness::new(vec![eb.rank()], Vec::new(), "image outside osp(1,2)")));
        }
        eb.push_dense(img.data());
    }
    if eb.rank() != m || m != 5 {
        return Ok(Err(Witness::new(Vec::new(), Vec::new(), "map is not injective onto osp(1,2)")));
    }
    let par = |i: usize| z.lie.parity(i);
    for i in 0..m {
        for j in 0..m {
            let lhs = supercommutator_matrices(&imgs[i], par(i), &imgs[j], par(j));
            let br = z.lie.mul(&z.lie.basis_vector(i), &z.lie.basis_vector(j));
            let mut rhs = FieldMatrix::zeros(f, 3, 3);
            for (k, &a) in br.iter().enumerate() {
                if a != 0 {
                    rhs = rhs.add(&imgs[k].scale(a))?;
                }
            }
            if lhs != rhs {
                return Ok(Err(Witness::new(vec![i, j], Vec::new(), "bracket not preserved")));
            }
        }
    }
    Ok(Ok(()))
}

/// `d(x) = [ad_x]` for `C⁰`: the adjoint maps as matrices on `C⁰`.
pub fn c0_adjoint_span(z: &C0) -> Result<MapAlgebra> {
    let m = z.lie.dim();
    let flats = (0..m).map(|i| {
        let mut mat = FieldMatrix::zeros(z.lie.field(), m, m);
        for j in 0..m {
            for &(k, c) in z.lie.product(i, j) {
                mat.set(k, j, c);
            }
        }
        (z.lie.parity(i), mat.data().to_vec())
    });
    MapAlgebra::from_flats(&z.lie.space, "ad", flats)
}

/// The purely odd 2-dimensional system with zero product and the
/// symplectic form `(u|v) = 1`.
pub fn zero_product_symplectic(field: Field) -> Result<TripleSystem> {
    let space = SuperSpace::from_parts(field, &[], &["u", "v"])?;
    let form = vec![0, 1, field.neg(1), 0];
    TripleSystem::from_fn(space, form, Flavor::Orthosymplectic, |_, _, _| vec![0, 0])
}

/// The `(−1)`-eigenspace `T = g₋` of an order-two automorphism of a Lie
/// superalgebra with invariant form `gram`, as a triple system with
/// `[xyz] = [[x,y],z]` and `(x|y) = B(x,y)`.
pub fn odd_component_osts(g: &SuperAlgebra, split: &FixedSplit, gram: &[u32]) -> Result<TripleSystem> {
    let f = g.field();
    let n = g.dim();
    let idx = &split.minus_index;
    let m = idx.len();
    let mut pos = vec![usize::MAX; n];
    for (k, &i) in idx.iter().enumerate() {
        pos[i] = k;
    }
    let labels: Vec<(String, u8)> = idx.iter().map(|&i| (g.space.label(i).to_string(), g.parity(i))).collect();
    let space = SuperSpace::new(f, labels)?;
    let mut form = vec![0; m * m];
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            form[a * m + b] = gram[i * n + j];
        }
    }
    let mut table = Vec::with_capacity(m * m * m);
    let mut acc = vec![0u32; n];
    for &x in idx {
        for &y in idx {
            let xy = g.product(x, y);
            for &z in idx {
                acc.iter_mut().for_each(|a| *a = 0);
                for &(k, c) in xy {
                    accumulate(f, &mut acc, g.product(k, z), c);
                }
                let mut entry = Vec::new();
                for (k, &c) in acc.iter().enumerate() {
                    if c != 0 {
                        if pos[k] == usize::MAX {
                            return Err(Error::AxiomFailure("[[x,y],z] left the odd component".into()));
                        }
                        entry.push((pos[k], c));
                    }
                }
                table.push(entry);
            }
        }
    }
    TripleSystem::new(space, table, form, Flavor::Orthosymplectic)
}
