//! Superalgebras given by structure constants and the generic checkers that
//! run on them: graded anticommutativity, super-Jacobi, invariant forms,
//! ideals, center, simplicity and derivation algebras.

use crate::error::{Error, Result};
use crate::ff::{sparsify, EchelonBuilder, Field, FieldMatrix, SparseVec};
use crate::meataxe::{norton_test, Irreducibility, SparseOp};
use crate::superlinear::{
    koszul_odd, labelled_space, supercommutator_matrices, unflatten, HomogeneousMap, MapBasis, MapUnknowns,
    SuperDim, SuperSpace,
};
use crate::triples::TripleSystem;
use rayon::prelude::*;

/// A failed identity: the offending basis indices and the nonzero defect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub defect: SparseVec,
    pub detail: String,
}

impl Witness {
    pub fn new(indices: Vec<usize>, defect: SparseVec, detail: impl Into<String>) -> Witness {
        Witness {
            indices,
            defect,
            detail: detail.into(),
        }
    }
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at {:?}, defect {:?}", self.detail, self.indices, self.defect)
    }
}

/// Pass, or fail with a witness.
pub type Check = std::result::Result<(), Witness>;

/// A finite-dimensional superalgebra: basis, sparse product table, and
/// optional even supersymmetric bilinear form and Z₂×Z₂ grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperAlgebra {
    pub space: SuperSpace,
    table: Vec<SparseVec>,
    /// Dense `n × n` Gram matrix.
    pub form: Option<Vec<u32>>,
    /// Z₂×Z₂ degree of each basis element, encoded as `d₁ + 2·d₂`.
    pub grading: Option<Vec<u8>>,
    /// Coordinates of the unit, for unital algebras.
    pub unit: Option<Vec<u32>>,
}

impl SuperAlgebra {
    /// Wraps a table where `table[i * n + j]` is the product `eᵢ eⱼ`.
    pub fn new(space: SuperSpace, table: Vec<SparseVec>) -> Result<SuperAlgebra> {
        let n = space.dim();
        if table.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: table.len(),
            });
        }
        let p = space.field().p();
        let mut table = table;
        for (idx, entry) in table.iter_mut().enumerate() {
            let (i, j) = (idx / n, idx % n);
            entry.retain(|e| e.1 % p != 0);
            entry.sort_unstable_by_key(|e| e.0);
            for &(k, c) in entry.iter() {
                if k >= n || c >= p {
                    return Err(Error::Parse(format!("bad table entry ({i},{j},{k},{c})")));
                }
                if space.parity(k) != space.parity(i) ^ space.parity(j) {
                    return Err(Error::ParityViolation);
                }
            }
        }
        Ok(SuperAlgebra {
            space,
            table,
            form: None,
            grading: None,
            unit: None,
        })
    }

    /// Builds the table from a closure returning the dense product `eᵢ eⱼ`.
    pub fn from_fn(space: SuperSpace, mut product: impl FnMut(usize, usize) -> Vec<u32>) -> Result<SuperAlgebra> {
        let n = space.dim();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(sparsify(&product(i, j)));
            }
        }
        SuperAlgebra::new(space, table)
    }

    pub fn with_form(mut self, form: Vec<u32>) -> Result<SuperAlgebra> {
        let n = self.dim();
        if form.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: form.len(),
            });
        }
        self.form = Some(form);
        Ok(self)
    }

    pub fn with_grading(mut self, grading: Vec<u8>) -> Result<SuperAlgebra> {
        if grading.len() != self.dim() || grading.iter().any(|&d| d > 3) {
            return Err(Error::InvalidBasis("bad Z2xZ2 grading".into()));
        }
        self.grading = Some(grading);
        Ok(self)
    }

    pub fn with_unit(mut self, unit: Vec<u32>) -> SuperAlgebra {
        self.unit = Some(unit);
        self
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

    /// Structure constants of `eᵢ eⱼ`.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.table[i * self.dim() + j]
    }

    pub fn table(&self) -> &[SparseVec] {
        &self.table
    }

    pub fn form_entry(&self, i: usize, j: usize) -> Option<u32> {
        self.form.as_ref().map(|b| b[i * self.dim() + j])
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    /// Product of two coordinate vectors.
    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field();
        let n = self.dim();
        let mut out = vec![0u32; n];
        let ys: Vec<(usize, u32)> = y.iter().enumerate().filter(|e| *e.1 != 0).map(|(i, &c)| (i, c)).collect();
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(j, b) in &ys {
                let ab = f.mul(a, b);
                for &(k, c) in self.product(i, j) {
                    out[k] = f.mul_add(out[k], ab, c);
                }
            }
        }
        out
    }

    /// `B(x, y)` for coordinate vectors.
    pub fn form_value(&self, x: &[u32], y: &[u32]) -> Result<u32> {
        let b = self.form.as_ref().ok_or(Error::FormAbsent)?;
        let f = self.field();
        let n = self.dim();
        let mut acc = 0;
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &c) in y.iter().enumerate() {
                if c != 0 {
                    acc = f.add(acc, f.mul(f.mul(a, c), b[i * n + j]));
                }
            }
        }
        Ok(acc)
    }

    /// Left multiplication by `x`: column `j` is `x eⱼ`.
    pub fn left_mult(&self, x: &[u32]) -> FieldMatrix {
        let n = self.dim();
        let cols: Vec<Vec<u32>> = (0..n).map(|j| self.mul(x, &self.basis_vector(j))).collect();
        FieldMatrix::from_columns(self.field(), n, &cols)
    }

    /// `ad eᵢ` as a sparse operator.
    pub fn ad_basis(&self, i: usize) -> SparseOp {
        let n = self.dim();
        SparseOp {
            dim: n,
            cols: (0..n).map(|j| self.product(i, j).to_vec()).collect(),
        }
    }

    /// Right multiplication by `eᵢ` as a sparse operator.
    pub fn right_basis(&self, i: usize) -> SparseOp {
        let n = self.dim();
        SparseOp {
            dim: n,
            cols: (0..n).map(|j| self.product(j, i).to_vec()).collect(),
        }
    }

    /// Structure constants of the subalgebra spanned by `sub`, in the basis
    /// returned by [`Subspace::basis`]. The subspace must be graded (so its
    /// reduced basis is homogeneous) and closed under the product.
    pub fn restrict(&self, sub: &Subspace, labels: Option<Vec<String>>) -> Result<SuperAlgebra> {
        let basis = sub.basis();
        let mut entries = Vec::with_capacity(basis.len());
        for (idx, v) in basis.iter().enumerate() {
            let parity = self.space.vector_parity(v).ok_or(Error::ParityViolation)?;
            let label = labels
                .as_ref()
                .map(|l| l[idx].clone())
                .unwrap_or_else(|| format!("w{idx}"));
            entries.push((label, parity));
        }
        let space = SuperSpace::new(self.field(), entries)?;
        let mut eb = sub.builder().clone();
        let mut table = Vec::with_capacity(basis.len() * basis.len());
        for x in &basis {
            for y in &basis {
                let xy = self.mul(x, y);
                let coords = eb
                    .coordinates(&xy)
                    .ok_or_else(|| Error::AxiomFailure("subspace is not closed under the product".into()))?;
                table.push(sparsify(&coords));
            }
        }
        let mut out = SuperAlgebra::new(space, table)?;
        if self.form.is_some() {
            let mut gram = Vec::with_capacity(basis.len() * basis.len());
            for x in &basis {
                for y in &basis {
                    gram.push(self.form_value(x, y)?);
                }
            }
            out.form = Some(gram);
        }
        if let Some(g) = &self.grading {
            let mut grading = Vec::new();
            for v in &basis {
                let degs: Vec<u8> = v.iter().enumerate().filter(|e| *e.1 != 0).map(|e| g[e.0]).collect();
                if degs.windows(2).any(|w| w[0] != w[1]) {
                    grading.clear();
                    break;
                }
                grading.push(degs.first().copied().unwrap_or(0));
            }
            if grading.len() == basis.len() {
                out.grading = Some(grading);
            }
        }
        Ok(out)
    }
}

/// A subspace of `k^n` held in canonical reduced echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    eb: EchelonBuilder,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Subspace) -> bool {
        self.eb.ncols() == other.eb.ncols() && self.basis() == other.basis()
    }
}

impl Eq for Subspace {}

impl Subspace {
    pub fn from_vectors<I, V>(field: Field, n: usize, vectors: I) -> Subspace
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u32]>,
    {
        let mut eb = EchelonBuilder::new(field, n);
        for v in vectors {
            eb.push_dense(v.as_ref());
        }
        Subspace { eb }
    }

    pub fn from_builder(eb: EchelonBuilder) -> Subspace {
        Subspace { eb }
    }

    pub fn whole(field: Field, n: usize) -> Subspace {
        Subspace::from_vectors(field, n, (0..n).map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        }))
    }

    pub fn zero(field: Field, n: usize) -> Subspace {
        Subspace::from_vectors(field, n, std::iter::empty::<Vec<u32>>())
    }

    pub fn builder(&self) -> &EchelonBuilder {
        &self.eb
    }

    pub fn ambient_dim(&self) -> usize {
        self.eb.ncols()
    }

    pub fn dim(&self) -> usize {
        self.eb.rank()
    }

    pub fn is_whole(&self) -> bool {
        self.eb.is_full()
    }

    pub fn basis(&self) -> Vec<Vec<u32>> {
        self.eb.basis()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.eb.residue(v).iter().all(|&c| c == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in [`Self::basis`].
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        let p = self.eb.field().p();
        Some(self.eb.pivot_cols().into_iter().map(|c| v[c] % p).collect())
    }

    /// Superdimension, if the subspace is graded with respect to `space`.
    pub fn superdim(&self, space: &SuperSpace) -> Option<SuperDim> {
        let mut even = 0;
        let mut odd = 0;
        for v in self.basis() {
            match space.vector_parity(&v)? {
                0 => even += 1,
                _ => odd += 1,
            }
        }
        Some(SuperDim::new(even, odd))
    }
}

/// Sparse accumulator reused across the checkers.
struct Acc {
    f: Field,
    dense: Vec<u32>,
    touched: Vec<usize>,
}

impl Acc {
    fn new(f: Field, n: usize) -> Acc {
        Acc {
            f,
            dense: vec![0; n],
            touched: Vec::new(),
        }
    }

    #[inline]
    fn add(&mut self, k: usize, c: u32) {
        if self.dense[k] == 0 {
            self.touched.push(k);
        }
        self.dense[k] = self.f.add(self.dense[k], c);
    }

    fn add_scaled(&mut self, v: &[(usize, u32)], c: u32) {
        for &(k, a) in v {
            let x = self.f.mul(a, c);
            self.add(k, x);
        }
    }

    /// Drains into a sorted sparse vector of the nonzero entries.
    fn take(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        self.touched.dedup();
        let mut out = Vec::new();
        for &k in &self.touched {
            if self.dense[k] != 0 {
                out.push((k, self.dense[k]));
                self.dense[k] = 0;
            }
        }
        self.touched.clear();
        out
    }
}

/// `[x, y] = −(−1)^{|x||y|}[y, x]` on all basis pairs.
pub fn check_super_anticommutativity(a: &SuperAlgebra) -> Check {
    let f = a.field();
    let n = a.dim();
    let mut acc = Acc::new(f, n);
    for i in 0..n {
        for j in i..n {
            let s = f.sign(koszul_odd(&[(a.parity(i), a.parity(j))]));
            acc.add_scaled(a.product(i, j), 1);
            acc.add_scaled(a.product(j, i), s);
            let d = acc.take();
            if !d.is_empty() {
                return Err(Witness::new(vec![i, j], d, "anticommutativity"));
            }
        }
    }
    Ok(())
}

/// `[[x,y],z]` accumulated with coefficient `c` into `acc`.
fn add_double(a: &SuperAlgebra, acc: &mut Acc, i: usize, j: usize, k: usize, c: u32) {
    let f = a.field();
    for &(l, x) in a.product(i, j) {
        acc.add_scaled(a.product(l, k), f.mul(x, c));
    }
}

/// `[x,[y,z]]` accumulated with coefficient `c` into `acc`.
fn add_double_right(a: &SuperAlgebra, acc: &mut Acc, i: usize, j: usize, k: usize, c: u32) {
    let f = a.field();
    for &(l, x) in a.product(j, k) {
        acc.add_scaled(a.product(i, l), f.mul(x, c));
    }
}

/// Graded cyclic Jacobi defect
/// `(−1)^{xz}[[x,y],z] + (−1)^{yx}[[y,z],x] + (−1)^{zy}[[z,x],y]`.
pub fn jacobi_defect(a: &SuperAlgebra, i: usize, j: usize, k: usize) -> SparseVec {
    let f = a.field();
    let mut acc = Acc::new(f, a.dim());
    jacobi_into(a, &mut acc, i, j, k);
    acc.take()
}

fn jacobi_into(a: &SuperAlgebra, acc: &mut Acc, i: usize, j: usize, k: usize) {
    let f = a.field();
    let (pi, pj, pk) = (a.parity(i), a.parity(j), a.parity(k));
    add_double(a, acc, i, j, k, f.sign(pi & pk == 1));
    add_double(a, acc, j, k, i, f.sign(pj & pi == 1));
    add_double(a, acc, k, i, j, f.sign(pk & pj == 1));
}

/// Super-Jacobi in graded cyclic form over all basis triples `i ≤ j ≤ k`.
/// This covers every triple once anticommutativity holds, since the cyclic
/// sum is then supersymmetric up to sign. The reported witness is the
/// lexicographically smallest failing triple.
pub fn check_super_jacobi(a: &SuperAlgebra) -> Check {
    let n = a.dim();
    let f = a.field();
    let found = (0..n).into_par_iter().find_map_first(|i| {
        let mut acc = Acc::new(f, n);
        for j in i..n {
            for k in j..n {
                jacobi_into(a, &mut acc, i, j, k);
                let d = acc.take();
                if !d.is_empty() {
                    return Some(Witness::new(vec![i, j, k], d, "super-Jacobi"));
                }
            }
        }
        None
    });
    match found {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

/// Independent formulation: `[x,[y,z]] = [[x,y],z] + (−1)^{xy}[y,[x,z]]` on
/// every ordered basis triple.
pub fn check_super_jacobi_leibniz(a: &SuperAlgebra) -> Check {
    let n = a.dim();
    let f = a.field();
    let found = (0..n).into_par_iter().find_map_first(|i| {
        let mut acc = Acc::new(f, n);
        for j in 0..n {
            let s = f.neg(f.sign(a.parity(i) & a.parity(j) == 1));
            for k in 0..n {
                add_double_right(a, &mut acc, i, j, k, 1);
                add_double(a, &mut acc, i, j, k, f.neg(1));
                add_double_right(a, &mut acc, j, i, k, s);
                let d = acc.take();
                if !d.is_empty() {
                    return Some(Witness::new(vec![i, j, k], d, "super-Leibniz"));
                }
            }
        }
        None
    });
    match found {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

/// The form is even and `B(y, x) = (−1)^{|x||y|} B(x, y)`.
pub fn check_form_supersymmetric(a: &SuperAlgebra) -> std::result::Result<Check, Error> {
    let b = a.form.as_ref().ok_or(Error::FormAbsent)?;
    let f = a.field();
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            let v = b[i * n + j];
            if v != 0 && a.parity(i) != a.parity(j) {
                return Ok(Err(Witness::new(vec![i, j], vec![(0, v)], "form is not even")));
            }
            let s = f.sign(a.parity(i) & a.parity(j) == 1);
            let d = f.sub(b[j * n + i], f.mul(s, v));
            if d != 0 {
                return Ok(Err(Witness::new(vec![i, j], vec![(0, d)], "form is not supersymmetric")));
            }
        }
    }
    Ok(Ok(()))
}

/// `B([x,y],z) = B(x,[y,z])` on all basis triples.
pub fn check_invariant_form(a: &SuperAlgebra) -> std::result::Result<Check, Error> {
    let b = a.form.as_ref().ok_or(Error::FormAbsent)?;
    let f = a.field();
    let n = a.dim();
    let found = (0..n).into_par_iter().find_map_first(|i| {
        for j in 0..n {
            for k in 0..n {
                let lhs = a.product(i, j).iter().fold(0, |acc, &(l, c)| f.add(acc, f.mul(c, b[l * n + k])));
                let rhs = a.product(j, k).iter().fold(0, |acc, &(l, c)| f.add(acc, f.mul(c, b[i * n + l])));
                if lhs != rhs {
                    return Some(Witness::new(vec![i, j, k], vec![(0, f.sub(lhs, rhs))], "form invariance"));
                }
            }
        }
        None
    });
    Ok(match found {
        Some(w) => Err(w),
        None => Ok(()),
    })
}

/// Rank of the Gram matrix of the form.
pub fn form_rank(a: &SuperAlgebra) -> Result<usize> {
    let b = a.form.as_ref().ok_or(Error::FormAbsent)?;
    let n = a.dim();
    Ok(FieldMatrix::from_data(a.field(), n, n, b.clone())?.rank())
}

/// Checks that every grading-degree of a product is the sum of the degrees.
pub fn check_grading(a: &SuperAlgebra) -> Check {
    let Some(g) = &a.grading else {
        return Ok(());
    };
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            for &(k, c) in a.product(i, j) {
                if g[k] != g[i] ^ g[j] {
                    return Err(Witness::new(vec![i, j, k], vec![(k, c)], "Z2xZ2 degree"));
                }
            }
        }
    }
    Ok(())
}

/// Smallest two-sided ideal containing `seed`.
pub fn ideal_closure(a: &SuperAlgebra, seed: &Subspace) -> Subspace {
    let f = a.field();
    let n = a.dim();
    let mut eb = EchelonBuilder::new(f, n);
    let mut queue = Vec::new();
    for v in seed.basis() {
        if eb.push_dense(&v) {
            queue.push(v);
        }
    }
    let lefts: Vec<SparseOp> = (0..n).map(|i| a.ad_basis(i)).collect();
    let rights: Vec<SparseOp> = (0..n).map(|i| a.right_basis(i)).collect();
    while let Some(v) = queue.pop() {
        if eb.is_full() {
            break;
        }
        for op in lefts.iter().chain(&rights) {
            let w = op.apply(f, &v);
            if eb.push_dense(&w) {
                queue.push(w);
            }
        }
    }
    Subspace::from_builder(eb)
}

/// Smallest subalgebra containing `gens`.
pub fn subalgebra_closure(a: &SuperAlgebra, gens: &[Vec<u32>]) -> Subspace {
    let f = a.field();
    let n = a.dim();
    let mut eb = EchelonBuilder::new(f, n);
    let mut basis: Vec<Vec<u32>> = Vec::new();
    let mut next = 0;
    for g in gens {
        if eb.push_dense(g) {
            basis.push(g.clone());
        }
    }
    while next < basis.len() && !eb.is_full() {
        let v = basis[next].clone();
        for idx in 0..=next {
            let w = basis[idx].clone();
            for prod in [a.mul(&v, &w), a.mul(&w, &v)] {
                if eb.push_dense(&prod) {
                    basis.push(prod);
                }
            }
        }
        next += 1;
    }
    Subspace::from_builder(eb)
}

/// `{x : [x, y] = 0 for all y}`.
pub fn center(a: &SuperAlgebra) -> Subspace {
    let f = a.field();
    let n = a.dim();
    let mut eb = EchelonBuilder::new(f, n);
    let mut rows: Vec<SparseVec> = vec![Vec::new(); n];
    'outer: for i in 0..n {
        for r in rows.iter_mut() {
            r.clear();
        }
        for j in 0..n {
            for &(k, c) in a.product(j, i) {
                rows[k].push((j, c));
            }
        }
        for r in &rows {
            if !r.is_empty() {
                eb.push_sparse(r);
                if eb.is_full() {
                    break 'outer;
                }
            }
        }
    }
    Subspace::from_vectors(f, n, eb.kernel())
}

/// Span of all products.
pub fn derived(a: &SuperAlgebra) -> Subspace {
    let f = a.field();
    let n = a.dim();
    let mut eb = EchelonBuilder::new(f, n);
    for t in a.table() {
        if !t.is_empty() {
            eb.push_sparse(t);
            if eb.is_full() {
                break;
            }
        }
    }
    Subspace::from_builder(eb)
}

/// Verdict of [`is_simple`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simplicity {
    Simple,
    NotSimple { witness: Subspace, reason: String },
    /// The irreducibility test found no certificate either way.
    Undecided,
}

impl Simplicity {
    pub fn is_simple(&self) -> bool {
        matches!(self, Simplicity::Simple)
    }
}

const MEATAXE_SEED: u64 = 0x5eed_0f_a1;

/// Decides whether the algebra has no proper nonzero ideal: center zero,
/// perfect, and irreducible adjoint module (Norton's criterion on the
/// algebra generated by all left and right multiplications).
pub fn is_simple(a: &SuperAlgebra) -> Simplicity {
    let f = a.field();
    let n = a.dim();
    if n == 0 {
        return Simplicity::NotSimple {
            witness: Subspace::zero(f, 0),
            reason: "zero algebra".into(),
        };
    }
    let z = center(a);
    if z.dim() > 0 {
        return Simplicity::NotSimple {
            witness: z,
            reason: "nonzero center".into(),
        };
    }
    let d = derived(a);
    if !d.is_whole() {
        return Simplicity::NotSimple {
            witness: d,
            reason: "not perfect".into(),
        };
    }
    let gens = multiplication_generators(a);
    match norton_test(f, n, &gens, MEATAXE_SEED) {
        Irreducibility::Irreducible => Simplicity::Simple,
        Irreducibility::Reducible(w) => Simplicity::NotSimple {
            witness: w,
            reason: "invariant subspace of the adjoint module".into(),
        },
        Irreducibility::Inconclusive => Simplicity::Undecided,
    }
}

/// Left and right multiplications by every basis element; for
/// anticommutative algebras the right ones are redundant and skipped.
fn multiplication_generators(a: &SuperAlgebra) -> Vec<SparseOp> {
    let n = a.dim();
    let mut gens: Vec<SparseOp> = (0..n).map(|i| a.ad_basis(i)).collect();
    if check_super_anticommutativity(a).is_err() {
        gens.extend((0..n).map(|i| a.right_basis(i)));
    }
    gens
}

/// Derivation spaces split by parity, as matrices (column j = d(eⱼ)).
#[derive(Clone, Debug)]
pub struct Derivations {
    pub even: Vec<FieldMatrix>,
    pub odd: Vec<FieldMatrix>,
}

impl Derivations {
    pub fn superdim(&self) -> SuperDim {
        SuperDim::new(self.even.len(), self.odd.len())
    }
}

/// Checks `d[x,y] = [dx,y] + (−1)^{|d||x|}[x,dy]` on all basis pairs.
pub fn check_derivation(a: &SuperAlgebra, d: &FieldMatrix, parity: u8) -> Check {
    let f = a.field();
    let n = a.dim();
    let image: Vec<Vec<u32>> = (0..n).map(|j| d.column(j)).collect();
    for i in 0..n {
        for j in 0..n {
            let xy = crate::ff::densify(a.product(i, j), n);
            let lhs = d.mul_vec(&xy).expect("square");
            let t1 = a.mul(&image[i], &a.basis_vector(j));
            let t2 = a.mul(&a.basis_vector(i), &image[j]);
            let s = f.sign(parity & a.parity(i) == 1);
            let defect: Vec<u32> = (0..n).map(|k| f.sub(lhs[k], f.add(t1[k], f.mul(s, t2[k])))).collect();
            if defect.iter().any(|&c| c != 0) {
                return Err(Witness::new(vec![i, j], sparsify(&defect), "derivation rule"));
            }
        }
    }
    Ok(())
}

/// All homogeneous derivations.
///
/// When the algebra carries a Z₂×Z₂ grading the space splits into graded
/// components (the grading group has order 4, which is invertible in the
/// field, and its characters take values ±1); each component is solved
/// separately. For Lie superalgebras with zero center,
/// the inner derivations of each component give a lower bound on its
/// dimension and the elimination stops as soon as the rank matches it.
pub fn derivations(a: &SuperAlgebra) -> Derivations {
    let lie = check_super_anticommutativity(a).is_ok() && check_super_jacobi(a).is_ok();
    let centerless = lie && center(a).dim() == 0;
    let n = a.dim();
    let grading = a.grading.clone().unwrap_or_else(|| vec![0; n]);
    let degrees: Vec<u8> = if a.grading.is_some() { (0..4).collect() } else { vec![0] };
    let mut out = Derivations {
        even: Vec::new(),
        odd: Vec::new(),
    };
    for parity in 0..2u8 {
        for &alpha in &degrees {
            let bound = if centerless {
                Some((0..n).filter(|&i| grading[i] == alpha && a.parity(i) == parity).count())
            } else {
                None
            };
            let maps = derivation_block(a, &grading, alpha, parity, bound);
            if parity == 0 {
                out.even.extend(maps);
            } else {
                out.odd.extend(maps);
            }
        }
    }
    out
}

fn derivation_block(a: &SuperAlgebra, grading: &[u8], alpha: u8, parity: u8, bound: Option<usize>) -> Vec<FieldMatrix> {
    let f = a.field();
    let n = a.dim();
    let unknowns = MapUnknowns::filtered(&a.space, &a.space, parity, |r, c| grading[r] == grading[c] ^ alpha);
    let m = unknowns.len();
    if m == 0 {
        return Vec::new();
    }
    let target_rank = bound.map(|b| m - b.min(m));
    let mut eb = EchelonBuilder::new(f, m);
    let mut rows: Vec<SparseVec> = vec![Vec::new(); n];
    'pairs: for i in 0..n {
        let s = f.neg(f.sign(parity & a.parity(i) == 1));
        for j in 0..n {
            for r in rows.iter_mut() {
                r.clear();
            }
            // d([eᵢ,eⱼ]): coefficient of e_k is Σ_l c_ij^l d_{kl}.
            for &(l, c) in a.product(i, j) {
                for (k, row) in rows.iter_mut().enumerate() {
                    if let Some(u) = unknowns.get(k, l) {
                        row.push((u, c));
                    }
                }
            }
            // −[d eᵢ, eⱼ]
            for mi in 0..n {
                if let Some(u) = unknowns.get(mi, i) {
                    for &(k, c) in a.product(mi, j) {
                        rows[k].push((u, f.neg(c)));
                    }
                }
            }
            // −(−1)^{|d||x|}[eᵢ, d eⱼ]
            for mj in 0..n {
                if let Some(u) = unknowns.get(mj, j) {
                    for &(k, c) in a.product(i, mj) {
                        rows[k].push((u, f.mul(s, c)));
                    }
                }
            }
            for row in &rows {
                if !row.is_empty() {
                    eb.push_sparse(row);
                }
            }
            if eb.is_full() || target_rank.is_some_and(|t| eb.rank() >= t) {
                break 'pairs;
            }
        }
    }
    eb.kernel().iter().map(|x| unknowns.to_matrix(f, x)).collect()
}

/// All homogeneous derivations of a triple system:
/// `d[xyz] = [dx y z] + (−1)^{|d||x|}[x dy z] + (−1)^{|d|(|x|+|y|)}[x y dz]`.
pub fn ternary_derivations(t: &TripleSystem) -> Derivations {
    let f = t.field();
    let n = t.dim();
    let mut out = Derivations {
        even: Vec::new(),
        odd: Vec::new(),
    };
    for parity in 0..2u8 {
        let unknowns = MapUnknowns::homogeneous(&t.space, &t.space, parity);
        let m = unknowns.len();
        if m == 0 {
            continue;
        }
        let mut eb = EchelonBuilder::new(f, m);
        let mut rows: Vec<SparseVec> = vec![Vec::new(); n];
        'triples: for i in 0..n {
            let s1 = f.neg(f.sign(parity & t.parity(i) == 1));
            for j in 0..n {
                let s2 = f.neg(f.sign(parity & (t.parity(i) ^ t.parity(j)) == 1));
                for k in 0..n {
                    for r in rows.iter_mut() {
                        r.clear();
                    }
                    for &(mm, c) in t.triple(i, j, k) {
                        for (l, row) in rows.iter_mut().enumerate() {
                            if let Some(u) = unknowns.get(l, mm) {
                                row.push((u, c));
                            }
                        }
                    }
                    for x in 0..n {
                        if let Some(u) = unknowns.get(x, i) {
                            for &(l, c) in t.triple(x, j, k) {
                                rows[l].push((u, f.neg(c)));
                            }
                        }
                        if let Some(u) = unknowns.get(x, j) {
                            for &(l, c) in t.triple(i, x, k) {
                                rows[l].push((u, f.mul(s1, c)));
                            }
                        }
                        if let Some(u) = unknowns.get(x, k) {
                            for &(l, c) in t.triple(i, j, x) {
                                rows[l].push((u, f.mul(s2, c)));
                            }
                        }
                    }
                    for row in &rows {
                        if !row.is_empty() {
                            eb.push_sparse(row);
                        }
                    }
                    if eb.is_full() {
                        break 'triples;
                    }
                }
            }
        }
        let maps = eb.kernel().iter().map(|x| unknowns.to_matrix(f, x)).collect();
        if parity == 0 {
            out.even = maps;
        } else {
            out.odd = maps;
        }
    }
    out
}

/// Checks the ternary Leibniz rule for `d` on every basis triple.
pub fn check_ternary_derivation(t: &TripleSystem, d: &FieldMatrix, parity: u8) -> Check {
    let f = t.field();
    let n = t.dim();
    let image: Vec<Vec<u32>> = (0..n).map(|j| d.column(j)).collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = d.mul_vec(&crate::ff::densify(t.triple(i, j, k), n)).expect("square");
                let mut acc = lhs;
                let s1 = f.sign(parity & t.parity(i) == 1);
                let s2 = f.sign(parity & (t.parity(i) ^ t.parity(j)) == 1);
                let e = |x: usize| {
                    let mut v = vec![0; n];
                    v[x] = 1;
                    v
                };
                let terms = [
                    (t.eval(&image[i], &e(j), &e(k)), 1),
                    (t.eval(&e(i), &image[j], &e(k)), s1),
                    (t.eval(&e(i), &e(j), &image[k]), s2),
                ];
                for (v, s) in terms {
                    for (x, y) in acc.iter_mut().zip(v) {
                        *x = f.sub(*x, f.mul(s, y));
                    }
                }
                if acc.iter().any(|&c| c != 0) {
                    return Err(Witness::new(vec![i, j, k], sparsify(&acc), "ternary derivation rule"));
                }
            }
        }
    }
    Ok(())
}

/// Checks `b(dx, y) + (−1)^{|d||x|} b(x, dy) = 0` on all basis pairs.
pub fn check_form_skew(field: Field, parities: &[u8], form: &[u32], d: &FieldMatrix, parity: u8) -> Check {
    let n = parities.len();
    for x in 0..n {
        for y in 0..n {
            let mut v = 0;
            for k in 0..n {
                v = field.add(v, field.mul(d.get(k, x), form[k * n + y]));
                let s = field.sign(parity & parities[x] == 1);
                v = field.add(v, field.mul(s, field.mul(form[x * n + k], d.get(k, y))));
            }
            if v != 0 {
                return Err(Witness::new(vec![x, y], vec![(0, v)], "form skewness"));
            }
        }
    }
    Ok(())
}

/// A Lie subsuperalgebra of `gl(V)` given by homogeneous matrices, with its
/// structure constants in the canonical (reduced echelon) basis.
#[derive(Clone, Debug)]
pub struct MapAlgebra {
    pub algebra: SuperAlgebra,
    pub maps: Vec<HomogeneousMap>,
    basis: MapBasis,
}

impl MapAlgebra {
    /// Span of flattened homogeneous matrices tagged with their parity;
    /// fails if the span is not closed under the supercommutator.
    pub fn from_flats(
        space: &SuperSpace,
        prefix: &str,
        flats: impl IntoIterator<Item = (u8, Vec<u32>)>,
    ) -> Result<MapAlgebra> {
        let f = space.field();
        let n = space.dim();
        let basis = MapBasis::new(f, space.parities(), 1, flats);
        let mats: Vec<FieldMatrix> = basis.flats().iter().map(|v| unflatten(f, n, v, 0)).collect();
        let par_of: Vec<u8> = (0..basis.dim()).map(|k| u8::from(k >= basis.dim_even())).collect();
        let mut table = Vec::with_capacity(mats.len() * mats.len());
        for (a, ma) in mats.iter().enumerate() {
            for (c, mc) in mats.iter().enumerate() {
                let br = supercommutator_matrices(ma, par_of[a], mc, par_of[c]);
                let coords = basis
                    .coordinates(br.data())
                    .ok_or_else(|| Error::AxiomFailure(format!("span of maps not closed at ({a}, {c})")))?;
                table.push(sparsify(&coords));
            }
        }
        let algebra = SuperAlgebra::new(labelled_space(f, prefix, &par_of)?, table)?;
        let maps = mats
            .into_iter()
            .zip(&par_of)
            .map(|(m, &par)| HomogeneousMap::new(space.clone(), space.clone(), par, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(MapAlgebra { algebra, maps, basis })
    }

    pub fn from_maps(space: &SuperSpace, prefix: &str, maps: &[(u8, FieldMatrix)]) -> Result<MapAlgebra> {
        MapAlgebra::from_flats(space, prefix, maps.iter().map(|(p, m)| (*p, m.data().to_vec())))
    }

    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    pub fn superdim(&self) -> SuperDim {
        self.algebra.superdim()
    }

    /// Coordinates of a matrix in the basis [`Self::maps`], if it lies in the span.
    pub fn coordinates(&self, m: &FieldMatrix) -> Option<Vec<u32>> {
        self.basis.coordinates(m.data())
    }

    pub fn contains(&self, m: &FieldMatrix) -> bool {
        self.coordinates(m).is_some()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn sl2(p: u32) -> SuperAlgebra {
        // basis h, e, f
        let f = Field::new(p).unwrap();
        let space = SuperSpace::from_parts(f, &["h", "e", "f"], &[]).unwrap();
        let two = f.from_i64(2);
        let m2 = f.from_i64(-2);
        let m1 = f.from_i64(-1);
        let mut t = vec![Vec::new(); 9];
        t[1] = vec![(1, two)]; // [h,e]=2e
        t[2] = vec![(2, m2)]; // [h,f]=-2f
        t[3] = vec![(1, m2)]; // [e,h]
        t[5] = vec![(0, 1)]; // [e,f]=h
        t[6] = vec![(2, two)]; // [f,h]
        t[7] = vec![(0, m1)]; // [f,e]
        let form = vec![2, 0, 0, 0, 0, 1, 0, 1, 0];
        SuperAlgebra::new(space, t).unwrap().with_form(form.into_iter().map(|v| v % p).collect()).unwrap()
    }

    pub(crate) fn direct_sum(a: &SuperAlgebra, b: &SuperAlgebra) -> SuperAlgebra {
        let f = a.field();
        let (n, m) = (a.dim(), b.dim());
        let mut basis: Vec<(String, u8)> = (0..n).map(|i| (format!("a:{}", a.space.label(i)), a.parity(i))).collect();
        basis.extend((0..m).map(|i| (format!("b:{}", b.space.label(i)), b.parity(i))));
        let (space, pos) = SuperSpace::partitioned(f, basis).unwrap();
        SuperAlgebra::from_fn(space.clone(), |i, j| {
            let mut out = vec![0; n + m];
            let inv = |x: usize| pos.iter().position(|&p| p == x).unwrap();
            let (oi, oj) = (inv(i), inv(j));
            if oi < n && oj < n {
                for &(k, c) in a.product(oi, oj) {
                    out[pos[k]] = c;
                }
            } else if oi >= n && oj >= n {
                for &(k, c) in b.product(oi - n, oj - n) {
                    out[pos[k + n]] = c;
                }
            }
            out
        })
        .unwrap()
    }

    #[test]
    fn sl2_passes_checks() {
        for p in [3, 5, 7] {
            let a = sl2(p);
            assert_eq!(check_super_anticommutativity(&a), Ok(()));
            assert_eq!(check_super_jacobi(&a), Ok(()));
            assert_eq!(check_super_jacobi_leibniz(&a), Ok(()));
            assert_eq!(check_invariant_form(&a).unwrap(), Ok(()));
            assert_eq!(check_form_supersymmetric(&a).unwrap(), Ok(()));
        }
    }

    #[test]
    fn broken_anticommutativity_witness() {
        let f = Field::new(5).unwrap();
        let mut a = sl2(5);
        let mut t = a.table().to_vec();
        t[7] = vec![(0, 1)]; // [f,e] = h
        a = SuperAlgebra::new(a.space.clone(), t).unwrap();
        let w = check_super_anticommutativity(&a).unwrap_err();
        assert_eq!(w.indices, vec![1, 2]);
        assert_eq!(w.defect, vec![(0, f.from_i64(2))]);
    }

    #[test]
    fn perturbed_form_fails_invariance() {
        let mut a = sl2(5);
        let mut b = a.form.clone().unwrap();
        b[0] = 1;
        a.form = Some(b);
        assert!(check_invariant_form(&a).unwrap().is_err());
        let bare = SuperAlgebra::new(a.space.clone(), a.table().to_vec()).unwrap();
        assert_eq!(check_invariant_form(&bare), Err(Error::FormAbsent));
    }

    #[test]
    fn jacobi_failure_found_with_both_checkers() {
        // [h,e] = e with [h,f] = -2f and [e,f] = h is not a Lie algebra.
        let a = sl2(5);
        let mut t = a.table().to_vec();
        t[1] = vec![(1, 1)];
        t[3] = vec![(1, 4)];
        let b = SuperAlgebra::new(a.space.clone(), t).unwrap();
        assert_eq!(check_super_anticommutativity(&b), Ok(()));
        assert!(check_super_jacobi(&b).is_err());
        assert!(check_super_jacobi_leibniz(&b).is_err());
    }

    #[test]
    fn sl2_is_simple_and_sum_is_not() {
        let a = sl2(5);
        assert_eq!(is_simple(&a), Simplicity::Simple);
        let s = direct_sum(&a, &a);
        assert_eq!(check_super_jacobi(&s), Ok(()));
        match is_simple(&s) {
            Simplicity::NotSimple { witness, .. } => {
                assert_eq!(witness.dim(), 3);
                assert!(ideal_closure(&s, &witness) == witness);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn closures() {
        let a = sl2(5);
        let whole = Subspace::whole(a.field(), 3);
        assert_eq!(ideal_closure(&a, &whole), whole);
        for i in 0..3 {
            let seed = Subspace::from_vectors(a.field(), 3, [a.basis_vector(i)]);
            assert!(ideal_closure(&a, &seed).is_whole());
        }
        let e = a.basis_vector(1);
        let f = a.basis_vector(2);
        assert!(subalgebra_closure(&a, &[e.clone(), f]).is_whole());
        assert_eq!(subalgebra_closure(&a, &[e]).dim(), 1);
        // Center of a sum with an abelian summand stays a proper ideal.
        let f3 = a.field();
        let ab = SuperAlgebra::new(SuperSpace::from_parts(f3, &["z"], &[]).unwrap(), vec![vec![]]).unwrap();
        let s = direct_sum(&a, &ab);
        let z = center(&s);
        assert_eq!(z.dim(), 1);
        assert_eq!(ideal_closure(&s, &z), z);
    }

    #[test]
    fn sl2_derivations_are_inner() {
        let a = sl2(5);
        let d = derivations(&a);
        assert_eq!(d.superdim(), SuperDim::new(3, 0));
        for m in &d.even {
            assert_eq!(check_derivation(&a, m, 0), Ok(()));
        }
        // Every ad x is a solution.
        let mut span = EchelonBuilder::new(a.field(), 9);
        for m in &d.even {
            span.push_dense(m.data());
        }
        for i in 0..3 {
            assert!(span.contains(a.left_mult(&a.basis_vector(i)).data()));
        }
    }

    #[test]
    fn abelian_derivations_are_gl() {
        let f = Field::new(3).unwrap();
        let space = SuperSpace::from_parts(f, &["a", "b"], &["c"]).unwrap();
        let a = SuperAlgebra::new(space, vec![Vec::new(); 9]).unwrap();
        let d = derivations(&a);
        assert_eq!(d.superdim(), SuperDim::new(5, 4));
    }

    #[test]
    fn restriction_to_subalgebra() {
        let a = sl2(5);
        let s = direct_sum(&a, &a);
        let sub = Subspace::from_vectors(s.field(), 6, (0..3).map(|i| s.basis_vector(i)));
        let r = s.restrict(&sub, None).unwrap();
        assert_eq!(r.dim(), 3);
        assert_eq!(check_super_jacobi(&r), Ok(()));
        assert_eq!(is_simple(&r), Simplicity::Simple);
    }
}
