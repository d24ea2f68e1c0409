//! Named models (`el(5;3)`, `br(2;3)`, `br(2;5)`, the `F₄` tilde algebra,
//! the squares `g(Sx,Sy)`), weight decompositions and Cartan matrices.

use crate::composition::{b42, symmetric_by_name, CompositionSuperalgebra};
use crate::error::{Error, Result};
use crate::ff::{sparsify, Field, FieldMatrix};
use crate::jordan::t2s;
use crate::magicsquare::{automorphism_xi, fixed_subalgebra, form_b, magic, FixedSplit, MagicSuperalgebra};
use crate::structconst::{subalgebra_closure, Subspace, SuperAlgebra};
use crate::superlinear::SuperSpace;
use crate::triples::{c0, inder, lie_superalgebra_of, tilde_lie_of, SymplecticPlane, TripleLie, TripleSystem, C0};

fn require_p(field: Field, p: u32) -> Result<()> {
    if field.p() == p {
        Ok(())
    } else {
        Err(Error::WrongCharacteristic {
            expected: p,
            found: field.p(),
        })
    }
}

/// `E`, `F` homogeneous of the same parity; `H = [E,F]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorPair {
    pub e: Vec<u32>,
    pub f: Vec<u32>,
}

impl GeneratorPair {
    pub fn new(e: Vec<u32>, f: Vec<u32>) -> GeneratorPair {
        GeneratorPair { e, f }
    }

    pub fn h(&self, g: &SuperAlgebra) -> Vec<u32> {
        g.mul(&self.e, &self.f)
    }
}

/// Simultaneous eigenspaces of commuting `ad h`.
#[derive(Clone, Debug)]
pub struct WeightDecomposition {
    pub cartan: Vec<Vec<u32>>,
    /// Weight (one residue per Cartan element) and its weight space,
    /// sorted by weight.
    pub weights: Vec<(Vec<u32>, Subspace)>,
}

impl WeightDecomposition {
    pub fn space(&self, weight: &[u32]) -> Option<&Subspace> {
        self.weights.iter().find(|w| w.0 == weight).map(|w| &w.1)
    }

    pub fn total_dim(&self) -> usize {
        self.weights.iter().map(|w| w.1.dim()).sum()
    }
}

/// Coordinates of `v` in `basis` (which must be independent and span `v`).
fn coords_in(field: Field, basis: &[Vec<u32>], v: &[u32]) -> Option<Vec<u32>> {
    let m = FieldMatrix::from_columns(field, v.len(), basis);
    m.solve(v).ok().flatten()
}

pub fn weight_decomposition(g: &SuperAlgebra, cartan: &[Vec<u32>]) -> Result<WeightDecomposition> {
    let f = g.field();
    let n = g.dim();
    for (i, x) in cartan.iter().enumerate() {
        if g.space.vector_parity(x) != Some(0) && x.iter().any(|&c| c != 0) {
            return Err(Error::ParityViolation);
        }
        for y in &cartan[i + 1..] {
            if g.mul(x, y).iter().any(|&c| c != 0) {
                return Err(Error::NotCommuting);
            }
        }
    }
    let mut pieces: Vec<(Vec<u32>, Vec<Vec<u32>>)> = vec![(Vec::new(), (0..n).map(|i| g.basis_vector(i)).collect())];
    for h in cartan {
        let mut next = Vec::new();
        for (weight, basis) in pieces {
            let k = basis.len();
            // Matrix of ad h on the current piece.
            let mut cols = Vec::with_capacity(k);
            for b in &basis {
                let img = g.mul(h, b);
                cols.push(coords_in(f, &basis, &img).ok_or(Error::NotCommuting)?);
            }
            let mat = FieldMatrix::from_columns(f, k, &cols);
            let mut found = 0;
            for lambda in 0..f.p() {
                let shifted = mat.sub(&FieldMatrix::identity(f, k).scale(lambda))?;
                let ker = shifted.kernel();
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let vecs: Vec<Vec<u32>> = ker
                    .iter()
                    .map(|c| {
                        let mut v = vec![0; n];
                        for (b, &a) in basis.iter().zip(c) {
                            for (x, &y) in v.iter_mut().zip(b) {
                                *x = f.mul_add(*x, a, y);
                            }
                        }
                        v
                    })
                    .collect();
                let mut w = weight.clone();
                w.push(lambda);
                next.push((w, vecs));
            }
            if found != k {
                return Err(Error::NotDiagonalizable);
            }
        }
        pieces = next;
    }
    let mut weights: Vec<(Vec<u32>, Subspace)> = pieces
        .into_iter()
        .map(|(w, vecs)| (w, Subspace::from_vectors(f, n, vecs)))
        .collect();
    weights.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(WeightDecomposition {
        cartan: cartan.to_vec(),
        weights,
    })
}

/// Cartan matrix `aᵢⱼ` with `[Hᵢ,Eⱼ] = aᵢⱼEⱼ`, together with the checks
/// `[Hᵢ,Fⱼ] = −aᵢⱼFⱼ`, `[Eᵢ,Fⱼ] = 0` for `i ≠ j`, and that the `Eᵢ`, `Fᵢ`
/// generate `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub h: Vec<Vec<u32>>,
    pub matrix: Vec<Vec<u32>>,
    /// Dimension of the subalgebra generated by the `Eᵢ`, `Fᵢ`.
    pub generated_dim: usize,
}

fn eigen_coefficient(f: Field, v: &[u32], target: &[u32]) -> Option<u32> {
    let k = target.iter().position(|&c| c != 0)?;
    let c = f.div(v[k], target[k])?;
    v.iter()
        .zip(target)
        .all(|(&a, &b)| a == f.mul(c, b))
        .then_some(c)
}

/// Cartan matrix without the generation certificate.
pub fn cartan_matrix_only(g: &SuperAlgebra, pairs: &[GeneratorPair]) -> Result<(Vec<Vec<u32>>, Vec<Vec<u32>>)> {
    let f = g.field();
    let r = pairs.len();
    let hs: Vec<Vec<u32>> = pairs.iter().map(|p| p.h(g)).collect();
    let mut matrix = vec![vec![0; r]; r];
    for i in 0..r {
        if g.space.vector_parity(&hs[i]).unwrap_or(0) != 0 {
            return Err(Error::ParityViolation);
        }
        for j in 0..r {
            let he = g.mul(&hs[i], &pairs[j].e);
            let a = eigen_coefficient(f, &he, &pairs[j].e)
                .ok_or_else(|| Error::NotEigen(format!("[H{},E{}]", i + 1, j + 1)))?;
            let hf = g.mul(&hs[i], &pairs[j].f);
            if eigen_coefficient(f, &hf, &pairs[j].f) != Some(f.neg(a)) {
                return Err(Error::NotEigen(format!("[H{},F{}]", i + 1, j + 1)));
            }
            if i != j && g.mul(&pairs[i].e, &pairs[j].f).iter().any(|&c| c != 0) {
                return Err(Error::NotEigen(format!("[E{},F{}] ≠ 0", i + 1, j + 1)));
            }
            matrix[i][j] = a;
        }
    }
    Ok((hs, matrix))
}

pub fn cartan_matrix(g: &SuperAlgebra, pairs: &[GeneratorPair]) -> Result<CartanData> {
    let (h, matrix) = cartan_matrix_only(g, pairs)?;
    let gens: Vec<Vec<u32>> = pairs.iter().flat_map(|p| [p.e.clone(), p.f.clone()]).collect();
    let generated_dim = subalgebra_closure(g, &gens).dim();
    if generated_dim != g.dim() {
        return Err(Error::NotGenerating {
            expected: g.dim(),
            found: generated_dim,
        });
    }
    Ok(CartanData {
        h,
        matrix,
        generated_dim,
    })
}

/// Signed residues of a matrix, for display.
pub fn signed_matrix(f: Field, m: &[Vec<u32>]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.iter().map(|&c| f.to_signed(c)).collect()).collect()
}

/// Equality up to a simultaneous permutation of rows and columns and a
/// nonzero scaling of each row.
pub fn cartan_equivalent(f: Field, a: &[Vec<u32>], b: &[Vec<u32>]) -> bool {
    let r = a.len();
    if b.len() != r {
        return false;
    }
    let mut perm: Vec<usize> = (0..r).collect();
    let rows_match = |perm: &[usize]| {
        (0..r).all(|i| {
            let row_a: Vec<u32> = (0..r).map(|j| a[perm[i]][perm[j]]).collect();
            let row_b = &b[i];
            match row_b.iter().position(|&c| c != 0) {
                None => row_a.iter().all(|&c| c == 0),
                Some(k) => {
                    if row_a[k] == 0 {
                        return false;
                    }
                    let c = f.div(row_a[k], row_b[k]).expect("nonzero");
                    row_a.iter().zip(row_b).all(|(&x, &y)| x == f.mul(c, y))
                }
            }
        })
    };
    permutations(&mut perm, 0, &mut |p| rows_match(p))
}

fn permutations(v: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == v.len() {
        return visit(v);
    }
    for i in k..v.len() {
        v.swap(k, i);
        if permutations(v, k + 1, visit) {
            v.swap(k, i);
            return true;
        }
        v.swap(k, i);
    }
    false
}

/// `br(2;3)` as the Lie superalgebra of the triple system `B(4,2)⁰`, with
/// the symplectic data needed for its generators.
#[derive(Clone, Debug)]
pub struct Br23 {
    pub c: CompositionSuperalgebra,
    pub c0: C0,
    pub lie: TripleLie,
    /// Coordinates in `C⁰` of `a₂, b₂` (odd, `(a₂|b₂) = 1`) and of
    /// `h₂, e₂, f₂` (even).
    pub a2: Vec<u32>,
    pub b2: Vec<u32>,
    pub h2: Vec<u32>,
    pub e2: Vec<u32>,
    pub f2: Vec<u32>,
}

impl Br23 {
    pub fn algebra(&self) -> &SuperAlgebra {
        &self.lie.algebra
    }

    /// `v ⊗ x` with `v ∈ {0 = a₁, 1 = b₁}` and `x ∈ C⁰` in coordinates.
    pub fn tensor(&self, v: usize, x: &[u32]) -> Vec<u32> {
        let f = self.lie.algebra.field();
        let mut out = vec![0; self.lie.algebra.dim()];
        for (k, &c) in x.iter().enumerate() {
            out[self.lie.vt[v][k]] = f.add(out[self.lie.vt[v][k]], c);
        }
        out
    }

    /// `ad_x` for `x ∈ C⁰`, as an element of the `inder` summand.
    pub fn ad(&self, x: &[u32]) -> Result<Vec<u32>> {
        let z = &self.c0.lie;
        let f = z.field();
        let m = z.dim();
        let mut mat = FieldMatrix::zeros(f, m, m);
        for j in 0..m {
            let v = z.mul(x, &z.basis_vector(j));
            for (i, &c) in v.iter().enumerate() {
                mat.set(i, j, c);
            }
        }
        let s = inder(&self.c0.osts)?;
        let c = s.coordinates(&mat).ok_or_else(|| Error::AxiomFailure("ad_x outside inder".into()))?;
        let mut out = vec![0; self.lie.algebra.dim()];
        for (k, &a) in c.iter().enumerate() {
            out[self.lie.s[k]] = a;
        }
        Ok(out)
    }

    /// `E₁ = a₁⊗f₂`, `F₁ = b₁⊗e₂`, `E₂ = a₂`, `F₂ = −b₂`, with `C⁰` acting
    /// through `ad`.
    pub fn generators(&self) -> Result<Vec<GeneratorPair>> {
        let f = self.lie.algebra.field();
        let neg: Vec<u32> = self.b2.iter().map(|&c| f.neg(c)).collect();
        Ok(vec![
            GeneratorPair::new(self.tensor(0, &self.f2), self.tensor(1, &self.e2)),
            GeneratorPair::new(self.ad(&self.a2)?, self.ad(&neg)?),
        ])
    }

    pub fn cartan(&self) -> Result<Vec<Vec<u32>>> {
        let h1 = self.lie.sp[0];
        Ok(vec![self.lie.algebra.basis_vector(h1), self.ad(&self.h2)?])
    }
}

/// Finds `h, e, f` in the even part of `z` acting on the odd part as in
/// `h(a)=a, h(b)=−b, e(b)=a, f(a)=b`.
fn sp_triple_on_odd(z: &SuperAlgebra, a: &[u32], b: &[u32]) -> Result<[Vec<u32>; 3]> {
    let f = z.field();
    let n = z.dim();
    let evens: Vec<usize> = (0..n).filter(|&i| z.parity(i) == 0).collect();
    // Column for basis element k: its action on (a, b) stacked.
    let cols: Vec<Vec<u32>> = evens
        .iter()
        .map(|&k| {
            let x = z.basis_vector(k);
            let mut col = z.mul(&x, a);
            col.extend(z.mul(&x, b));
            col
        })
        .collect();
    let mat = FieldMatrix::from_columns(f, 2 * n, &cols);
    let target = |ia: (u32, &[u32]), ib: (u32, &[u32])| -> Vec<u32> {
        let mut t: Vec<u32> = ia.1.iter().map(|&c| f.mul(ia.0, c)).collect();
        t.extend(ib.1.iter().map(|&c| f.mul(ib.0, c)));
        t
    };
    let zero = vec![0; n];
    let wanted = [
        target((1, a), (f.neg(1), b)),
        target((0, &zero), (1, a)),
        target((1, b), (0, &zero)),
    ];
    let mut out: [Vec<u32>; 3] = Default::default();
    for (slot, w) in out.iter_mut().zip(&wanted) {
        let c = mat
            .solve(w)?
            .ok_or_else(|| Error::AxiomFailure("no sp(V) element with the required action".into()))?;
        let mut v = vec![0; n];
        for (&k, &a) in evens.iter().zip(&c) {
            v[k] = a;
        }
        *slot = v;
    }
    Ok(out)
}

pub fn br23(field: Field) -> Result<Br23> {
    require_p(field, 3)?;
    let c = b42(field)?;
    let z = c0(&c)?;
    let s = inder(&z.osts)?;
    let lie = lie_superalgebra_of(&z.osts, &s)?;
    let n = z.lie.dim();
    let odd: Vec<usize> = (0..n).filter(|&i| z.lie.parity(i) == 1).collect();
    let (i, j) = (odd[0], odd[1]);
    let pair = z.osts.form_entry(i, j);
    let a2 = z.lie.basis_vector(i);
    let inv = field.inv(pair).ok_or(Error::DegenerateForm)?;
    let b2: Vec<u32> = z.lie.basis_vector(j).iter().map(|&c| field.mul(c, inv)).collect();
    let [h2, e2, f2] = sp_triple_on_odd(&z.lie, &a2, &b2)?;
    Ok(Br23 {
        c,
        c0: z,
        lie,
        a2,
        b2,
        h2,
        e2,
        f2,
    })
}

/// The pieces of `br(2;5)`: `sp(V₁) ⊕ sp(V₂) ⊕ sp(V₁)⊗V₂ ⊕ V₁⊗sp(V₂) ⊕ V₁⊗V₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum BrPiece {
    Sp1(usize),
    Sp2(usize),
    /// `sp(V₁) ⊗ V₂`
    FU(usize, usize),
    /// `V₁ ⊗ sp(V₂)`
    AP(usize, usize),
    /// `V₁ ⊗ V₂`
    AU(usize, usize),
}

#[derive(Clone, Debug)]
pub struct Br25 {
    pub algebra: SuperAlgebra,
    pieces: Vec<BrPiece>,
}

/// Structured element of `br(2;5)` built from matrices and vectors.
struct BrBuilder {
    field: Field,
    plane: SymplecticPlane,
    index: std::collections::HashMap<BrPiece, usize>,
    dim: usize,
}

impl BrBuilder {
    fn sp_coords(&self, m: &FieldMatrix) -> [u32; 3] {
        self.plane.sp_coordinates(m).expect("traceless")
    }

    fn sp1(&self, out: &mut [u32], m: &FieldMatrix, c: u32) {
        for (k, &a) in self.sp_coords(m).iter().enumerate() {
            let i = self.index[&BrPiece::Sp1(k)];
            out[i] = self.field.mul_add(out[i], c, a);
        }
    }

    fn sp2(&self, out: &mut [u32], m: &FieldMatrix, c: u32) {
        for (k, &a) in self.sp_coords(m).iter().enumerate() {
            let i = self.index[&BrPiece::Sp2(k)];
            out[i] = self.field.mul_add(out[i], c, a);
        }
    }

    fn fu(&self, out: &mut [u32], m: &FieldMatrix, u: &[u32], c: u32) {
        let f = self.field;
        for (k, &a) in self.sp_coords(m).iter().enumerate() {
            for (w, &b) in u.iter().enumerate() {
                let i = self.index[&BrPiece::FU(k, w)];
                out[i] = f.mul_add(out[i], c, f.mul(a, b));
            }
        }
    }

    fn ap(&self, out: &mut [u32], a: &[u32], m: &FieldMatrix, c: u32) {
        let f = self.field;
        for (v, &x) in a.iter().enumerate() {
            for (k, &y) in self.sp_coords(m).iter().enumerate() {
                let i = self.index[&BrPiece::AP(v, k)];
                out[i] = f.mul_add(out[i], c, f.mul(x, y));
            }
        }
    }

    fn au(&self, out: &mut [u32], a: &[u32], u: &[u32], c: u32) {
        let f = self.field;
        for (v, &x) in a.iter().enumerate() {
            for (w, &y) in u.iter().enumerate() {
                let i = self.index[&BrPiece::AU(v, w)];
                out[i] = f.mul_add(out[i], c, f.mul(x, y));
            }
        }
    }
}

fn unit2(i: usize) -> Vec<u32> {
    let mut v = vec![0, 0];
    v[i] = 1;
    v
}

/// `br(2;5)` from its six bracket rules plus the natural actions. Built
/// in any odd characteristic; it is a Lie superalgebra only for `p = 5`.
pub fn br25(field: Field) -> Result<Br25> {
    let f = field;
    let plane = SymplecticPlane::new(f);
    let sp = plane.sp_basis();
    let names = ["h", "e", "f"];
    let vnames = ["a", "b"];
    let mut natural: Vec<(String, u8, BrPiece)> = Vec::new();
    for k in 0..3 {
        natural.push((format!("{}1", names[k]), 0, BrPiece::Sp1(k)));
    }
    for k in 0..3 {
        natural.push((format!("{}2", names[k]), 0, BrPiece::Sp2(k)));
    }
    for k in 0..3 {
        for w in 0..2 {
            natural.push((format!("{}1⊗{}2", names[k], vnames[w]), 1, BrPiece::FU(k, w)));
        }
    }
    for v in 0..2 {
        for k in 0..3 {
            natural.push((format!("{}1⊗{}2", vnames[v], names[k]), 1, BrPiece::AP(v, k)));
        }
    }
    for v in 0..2 {
        for w in 0..2 {
            natural.push((format!("{}1⊗{}2", vnames[v], vnames[w]), 0, BrPiece::AU(v, w)));
        }
    }
    let (space, index) = SuperSpace::partitioned(f, natural.iter().map(|x| (x.0.clone(), x.1)).collect())?;
    let dim = space.dim();
    let mut pieces = vec![BrPiece::Sp1(0); dim];
    let mut map = std::collections::HashMap::new();
    for (nat, &i) in index.iter().enumerate() {
        pieces[i] = natural[nat].2;
        map.insert(natural[nat].2, i);
    }
    let bld = BrBuilder {
        field: f,
        plane,
        index: map,
        dim,
    };
    let gamma = |u: usize, v: usize| plane.gamma(u, v);
    let comm = |a: &FieldMatrix, b: &FieldMatrix| a.mul(b).unwrap().sub(&b.mul(a).unwrap()).unwrap();
    let tr = |a: &FieldMatrix, b: &FieldMatrix| a.mul(b).unwrap().trace();
    let apply = |m: &FieldMatrix, v: &[u32]| m.mul_vec(v).unwrap();
    let two = f.from_i64(2);

    // Bracket of x before y for the ordered piece pairs the rules give.
    let forward = |x: BrPiece, y: BrPiece| -> Option<Vec<u32>> {
        let mut out = vec![0u32; bld.dim];
        use BrPiece::*;
        match (x, y) {
            (Sp1(i), Sp1(j)) => bld.sp1(&mut out, &comm(&sp[i], &sp[j]), 1),
            (Sp2(i), Sp2(j)) => bld.sp2(&mut out, &comm(&sp[i], &sp[j]), 1),
            (Sp1(_), Sp2(_)) | (Sp2(_), Sp1(_)) => {}
            (Sp1(i), FU(k, w)) => bld.fu(&mut out, &comm(&sp[i], &sp[k]), &unit2(w), 1),
            (Sp2(i), FU(k, w)) => bld.fu(&mut out, &sp[k], &apply(&sp[i], &unit2(w)), 1),
            (Sp1(i), AP(v, k)) => bld.ap(&mut out, &apply(&sp[i], &unit2(v)), &sp[k], 1),
            (Sp2(i), AP(v, k)) => bld.ap(&mut out, &unit2(v), &comm(&sp[i], &sp[k]), 1),
            (Sp1(i), AU(v, w)) => bld.au(&mut out, &apply(&sp[i], &unit2(v)), &unit2(w), 1),
            (Sp2(i), AU(v, w)) => bld.au(&mut out, &unit2(v), &apply(&sp[i], &unit2(w)), 1),
            // [f⊗u, g⊗v] = ⟨u|v⟩[f,g] + 2tr(fg)γ_{u,v}
            (FU(k, u), FU(l, v)) => {
                bld.sp1(&mut out, &comm(&sp[k], &sp[l]), plane.pairing(u, v));
                bld.sp2(&mut out, &gamma(u, v), f.mul(two, tr(&sp[k], &sp[l])));
            }
            // [a⊗p, b⊗q] = −(2tr(pq)γ_{a,b} + ⟨a|b⟩[p,q])
            (AP(a, k), AP(b, l)) => {
                bld.sp1(&mut out, &gamma(a, b), f.neg(f.mul(two, tr(&sp[k], &sp[l]))));
                bld.sp2(&mut out, &comm(&sp[k], &sp[l]), f.neg(plane.pairing(a, b)));
            }
            // [a⊗u, b⊗v] = ⟨u|v⟩γ_{a,b} + ⟨a|b⟩γ_{u,v}
            (AU(a, u), AU(b, v)) => {
                bld.sp1(&mut out, &gamma(a, b), plane.pairing(u, v));
                bld.sp2(&mut out, &gamma(u, v), plane.pairing(a, b));
            }
            // [f⊗u, a⊗p] = f(a)⊗p(u)
            (FU(k, u), AP(a, l)) => {
                bld.au(&mut out, &apply(&sp[k], &unit2(a)), &apply(&sp[l], &unit2(u)), 1);
            }
            // [f⊗u, a⊗v] = f(a)⊗γ_{u,v}
            (FU(k, u), AU(a, v)) => bld.ap(&mut out, &apply(&sp[k], &unit2(a)), &gamma(u, v), 1),
            // [a⊗p, b⊗v] = −γ_{a,b}⊗p(v)
            (AP(a, k), AU(b, v)) => bld.fu(&mut out, &gamma(a, b), &apply(&sp[k], &unit2(v)), f.neg(1)),
            _ => return None,
        }
        Some(out)
    };
    let mut table = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let v = match forward(pieces[i], pieces[j]) {
                Some(v) => v,
                None => {
                    let w = forward(pieces[j], pieces[i]).expect("one order is given by the rules");
                    let s = f.neg(f.sign(space.parity(i) & space.parity(j) == 1));
                    w.into_iter().map(|c| f.mul(s, c)).collect()
                }
            };
            table.push(sparsify(&v));
        }
    }
    let grading: Vec<u8> = pieces
        .iter()
        .map(|p| match p {
            BrPiece::Sp1(_) | BrPiece::Sp2(_) => 0,
            BrPiece::FU(..) => 1,
            BrPiece::AP(..) => 2,
            BrPiece::AU(..) => 3,
        })
        .collect();
    let algebra = SuperAlgebra::new(space, table)?.with_grading(grading)?;
    Ok(Br25 { algebra, pieces })
}

impl Br25 {
    fn find(&self, piece: BrPiece) -> usize {
        self.pieces.iter().position(|&p| p == piece).expect("piece present")
    }

    fn basis(&self, piece: BrPiece) -> Vec<u32> {
        self.algebra.basis_vector(self.find(piece))
    }

    /// `E₁ = a₁⊗f₂`, `F₁ = −b₁⊗e₂`, `E₂ = h₁⊗a₂`, `F₂ = h₁⊗b₂`.
    pub fn generators(&self) -> Vec<GeneratorPair> {
        let f = self.algebra.field();
        let neg = |v: Vec<u32>| v.into_iter().map(|c| f.neg(c)).collect();
        vec![
            GeneratorPair::new(self.basis(BrPiece::AP(0, 2)), neg(self.basis(BrPiece::AP(1, 1)))),
            GeneratorPair::new(self.basis(BrPiece::FU(0, 0)), self.basis(BrPiece::FU(0, 1))),
        ]
    }

    /// `h₁, h₂`.
    pub fn cartan(&self) -> Vec<Vec<u32>> {
        vec![self.basis(BrPiece::Sp1(0)), self.basis(BrPiece::Sp2(0))]
    }

    /// The `(0,0) ⊕ (1,1)` part.
    pub fn even_part(&self) -> Subspace {
        let n = self.algebra.dim();
        Subspace::from_vectors(
            self.algebra.field(),
            n,
            (0..n).filter(|&i| self.algebra.parity(i) == 0).map(|i| self.algebra.basis_vector(i)),
        )
    }

    /// The triple `(a⊗u, b⊗v, f⊗w)` with `u = a₂, v = b₂` and `w = a₂`, whose
    /// Jacobian is `−(f + 3γ_{f(a),b} + 2γ_{a,f(b)})⊗u` and vanishes only in
    /// characteristic 5, for `f = e₁`.
    pub fn jacobi_probe(&self) -> [usize; 3] {
        [
            self.find(BrPiece::AU(0, 0)),
            self.find(BrPiece::AU(1, 1)),
            self.find(BrPiece::FU(1, 0)),
        ]
    }
}

/// `el(5;3)` as the fixed subalgebra of `ξ` in `g(S₈,S₁,₂)`.
#[derive(Clone, Debug)]
pub struct El53 {
    pub g: MagicSuperalgebra,
    pub split: FixedSplit,
    pub form: Vec<u32>,
}

impl El53 {
    pub fn algebra(&self) -> &SuperAlgebra {
        &self.split.plus
    }

    /// Indices (in `el(5;3)`) of `tri(S₈) ⊕ ι₀(S₈⊗1)`.
    pub fn so9_indices(&self) -> Vec<usize> {
        let one = (0..self.g.s_prime.dim())
            .find(|&b| self.g.s_prime.parity(b) == 0)
            .expect("S₁,₂ has an even basis element");
        let mut idx = self.g.tri_index.clone();
        idx.extend((0..self.g.s.dim()).map(|a| self.g.iota(0, a, one)));
        idx.iter()
            .map(|i| self.split.plus_index.iter().position(|j| j == i).expect("inside g₊"))
            .collect()
    }

    pub fn so9(&self) -> Result<SuperAlgebra> {
        let a = self.algebra();
        let n = a.dim();
        let sub = Subspace::from_vectors(a.field(), n, self.so9_indices().into_iter().map(|i| a.basis_vector(i)));
        a.restrict(&sub, None)
    }

    /// Diagonal elements of `tri(S₈)` and `tri(S₁,₂)`: a rank-5 torus.
    pub fn torus(&self) -> Result<Vec<Vec<u32>>> {
        let plus = &self.split.plus_index;
        let mut out = Vec::new();
        for (t, idx) in [(&self.g.tri, &self.g.tri_index), (&self.g.tri_prime, &self.g.tri_prime_index)] {
            let f = t.field();
            let m = t.dim();
            let n = t.s.dim();
            // Off-diagonal entries of the three components as linear functions.
            let mut rows = Vec::new();
            for i in 0..3 {
                for r in 0..n {
                    for c in 0..n {
                        if r != c {
                            rows.push((0..m).map(|k| t.elements[k].d[i].get(r, c)).collect::<Vec<u32>>());
                        }
                    }
                }
            }
            let mut data = Vec::new();
            for r in &rows {
                data.extend_from_slice(r);
            }
            let mat = FieldMatrix::from_data(f, rows.len(), m, data)?;
            for v in mat.kernel() {
                let mut w = vec![0; self.algebra().dim()];
                for (k, &c) in v.iter().enumerate() {
                    if c != 0 {
                        let pos = plus.iter().position(|&j| j == idx[k]).ok_or(Error::ParityViolation)?;
                        w[pos] = c;
                    }
                }
                out.push(w);
            }
        }
        Ok(out)
    }
}

pub fn el53(field: Field) -> Result<El53> {
    require_p(field, 3)?;
    let g = magic(&symmetric_by_name("S8", field)?, &symmetric_by_name("S1.2", field)?)?;
    let xi = automorphism_xi(&g)?;
    let split = fixed_subalgebra(&g.algebra, &xi)?;
    let form = form_b(&g)?;
    Ok(El53 { g, split, form })
}

/// `F₄` as the tilde algebra of `T_{2S₈}`.
pub fn f4_tilde(field: Field) -> Result<(TripleSystem, SuperAlgebra)> {
    require_p(field, 3)?;
    let t = t2s(&symmetric_by_name("S8", field)?)?;
    let g = tilde_lie_of(&t)?.algebra;
    Ok((t, g))
}

/// Names accepted by [`build_model`].
pub const MODEL_NAMES: [&str; 4] = ["el53", "br23", "br25", "f4-tilde-T2S8"];

/// Names `S1`, `S2`, `S4`, `S8`, `S1.2`, `S4.2` of the symmetric composition
/// superalgebras in the square.
pub const SQUARE_NAMES: [&str; 6] = ["S1", "S2", "S4", "S8", "S1.2", "S4.2"];

/// `"g(Sx,Sy)"` → `("Sx", "Sy")`.
pub fn parse_square_name(name: &str) -> Option<(String, String)> {
    let inner = name.strip_prefix("g(")?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    let norm = |s: &str| -> Option<String> {
        let s = s.trim();
        let s = if s.starts_with('S') { s.to_string() } else { format!("S{s}") };
        let s = match s.as_str() {
            "S12" => "S1.2".to_string(),
            "S42" => "S4.2".to_string(),
            _ => s,
        };
        SQUARE_NAMES.contains(&s.as_str()).then_some(s)
    };
    Some((norm(a)?, norm(b)?))
}

/// A built model: the Lie superalgebra, and the triple system it came from
/// where there is one.
#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub algebra: SuperAlgebra,
    pub triple: Option<TripleSystem>,
}

pub fn build_model(name: &str, field: Field) -> Result<Model> {
    let (algebra, triple) = match name {
        "el53" => (el53(field)?.split.plus, None),
        "br23" => {
            let b = br23(field)?;
            (b.lie.algebra, Some(b.c0.osts))
        }
        "br25" => (br25(field)?.algebra, None),
        "f4-tilde-T2S8" => {
            let (t, g) = f4_tilde(field)?;
            (g, Some(t))
        }
        other => {
            let (a, b) = parse_square_name(other).ok_or_else(|| Error::UnknownModel(other.to_string()))?;
            let g = magic(&symmetric_by_name(&a, field)?, &symmetric_by_name(&b, field)?)?;
            (g.algebra, None)
        }
    };
    Ok(Model {
        name: name.to_string(),
        algebra,
        triple,
    })
}

/// Target `el(5;3)` Cartan matrix reduced mod 3.
pub fn el53_target(field: Field) -> Vec<Vec<u32>> {
    let rows: [[i64; 5]; 5] = [
        [0, -2, 0, 0, 0],
        [-1, 2, -2, 0, 0],
        [0, -1, 2, -1, 0],
        [0, 0, -1, 2, -1],
        [0, 0, 0, -1, 2],
    ];
    rows.iter().map(|r| r.iter().map(|&c| field.from_i64(c)).collect()).collect()
}

/// Outcome of the `el(5;3)` generator search.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Certified { pairs: Vec<GeneratorPair>, matrix: Vec<Vec<u32>> },
    NotCertified { reason: String },
}

/// Searches one-dimensional weight spaces of a rank-5 torus of `el(5;3)` for
/// five generator pairs whose Cartan matrix matches the target, stopping at
/// `budget`.
pub fn search_el53_cartan(e: &El53, budget: std::time::Duration) -> Result<SearchOutcome> {
    use rayon::prelude::*;
    let start = std::time::Instant::now();
    let g = e.algebra();
    let f = g.field();
    let torus = e.torus()?;
    if torus.len() != 5 {
        return Ok(SearchOutcome::NotCertified {
            reason: format!("torus of rank {}", torus.len()),
        });
    }
    let wd = weight_decomposition(g, &torus)?;
    let target = el53_target(f);
    let neg = |w: &[u32]| -> Vec<u32> { w.iter().map(|&c| f.neg(c)).collect() };
    // Candidate root vectors: one-dimensional nonzero weight spaces whose
    // opposite is also one-dimensional.
    let mut cands: Vec<(Vec<u32>, Vec<u32>, Vec<u32>)> = Vec::new();
    for (w, sp) in &wd.weights {
        if w.iter().all(|&c| c == 0) || sp.dim() != 1 {
            continue;
        }
        let Some(opp) = wd.space(&neg(w)) else { continue };
        if opp.dim() != 1 {
            continue;
        }
        let ev = sp.basis()[0].clone();
        let fv = opp.basis()[0].clone();
        let h = g.mul(&ev, &fv);
        if h.iter().all(|&c| c == 0) {
            continue;
        }
        cands.push((w.clone(), ev, fv));
    }
    let k = cands.len();
    // Compatibility: [Eᵢ,Fⱼ] = 0 for i ≠ j.
    let compat: Vec<Vec<bool>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| i != j && g.mul(&cands[i].1, &cands[j].2).iter().all(|&c| c == 0))
                .collect()
        })
        .collect();
    let ok = |i: usize, j: usize| compat[i][j] && compat[j][i];
    let found = (0..k).into_par_iter().find_map_first(|i0| {
        let mut stack = vec![i0];
        search_rec(&mut stack, k, &ok, &mut |set: &[usize]| {
            if start.elapsed() > budget {
                return Some(None);
            }
            let pairs: Vec<GeneratorPair> = set
                .iter()
                .map(|&i| GeneratorPair::new(cands[i].1.clone(), cands[i].2.clone()))
                .collect();
            let (_, m) = cartan_matrix_only(g, &pairs).ok()?;
            if !cartan_equivalent(f, &m, &target) {
                return None;
            }
            let gens: Vec<Vec<u32>> = pairs.iter().flat_map(|p| [p.e.clone(), p.f.clone()]).collect();
            if subalgebra_closure(g, &gens).dim() != g.dim() {
                return None;
            }
            Some(Some((pairs, m)))
        })
    });
    Ok(match found {
        Some(Some((pairs, matrix))) => SearchOutcome::Certified { pairs, matrix },
        Some(None) => SearchOutcome::NotCertified {
            reason: "time budget exhausted".into(),
        },
        None => SearchOutcome::NotCertified {
            reason: format!("no matching generator set among {k} root vectors"),
        },
    })
}

/// Depth-first over increasing index sets of size 5 of pairwise compatible
/// candidates; `visit` returns `Some` to stop.
fn search_rec<T>(
    stack: &mut Vec<usize>,
    k: usize,
    ok: &dyn Fn(usize, usize) -> bool,
    visit: &mut dyn FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    if stack.len() == 5 {
        return visit(stack);
    }
    let last = *stack.last().expect("nonempty");
    for next in last + 1..k {
        if stack.iter().all(|&s| ok(s, next)) {
            stack.push(next);
            if let Some(r) = search_rec(stack, k, ok, visit) {
                return Some(r);
            }
            stack.pop();
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structconst::{check_super_anticommutativity, check_super_jacobi, is_simple, Simplicity};
    use crate::superlinear::SuperDim;

    fn gf(p: u32) -> Field {
        Field::new(p).unwrap()
    }

    fn target_2x2(f: Field) -> Vec<Vec<u32>> {
        vec![vec![0, f.neg(1)], vec![f.neg(2), 1]]
    }

    #[test]
    fn br23_cartan_matrix() {
        let b = br23(gf(3)).unwrap();
        assert_eq!(b.algebra().superdim(), SuperDim::new(10, 8));
        let data = cartan_matrix(b.algebra(), &b.generators().unwrap()).unwrap();
        assert_eq!(data.matrix, target_2x2(gf(3)));
        assert_eq!(data.generated_dim, 18);
        // H₁ = h₁ − h₂, H₂ = h₂.
        let [h1, h2] = [b.cartan().unwrap()[0].clone(), b.cartan().unwrap()[1].clone()];
        let f = gf(3);
        let h1_minus_h2: Vec<u32> = h1.iter().zip(&h2).map(|(&x, &y)| f.sub(x, y)).collect();
        assert_eq!(data.h[0], h1_minus_h2);
        assert_eq!(data.h[1], h2);
    }

    #[test]
    fn br23_has_two_odd_outer_derivations() {
        use crate::structconst::{check_derivation, derivations};
        let b = br23(gf(3)).unwrap();
        let a = b.algebra();
        let d = derivations(a);
        assert_eq!(d.superdim(), SuperDim::new(10, 10));
        let mut inner = crate::EchelonBuilder::new(a.field(), a.dim() * a.dim());
        for i in 0..a.dim() {
            inner.push_dense(a.left_mult(&a.basis_vector(i)).data());
        }
        assert_eq!(inner.rank(), 18);
        for m in &d.odd {
            assert_eq!(check_derivation(a, m, 1), Ok(()));
            inner.push_dense(m.data());
        }
        assert_eq!(inner.rank(), 20);
    }

    #[test]
    fn br23_weights() {
        let b = br23(gf(3)).unwrap();
        let wd = weight_decomposition(b.algebra(), &b.cartan().unwrap()).unwrap();
        assert_eq!(wd.total_dim(), 18);
        assert_eq!(wd.space(&[0, 0]).unwrap().dim(), 2);
    }

    #[test]
    fn br25_at_five() {
        let f = gf(5);
        let b = br25(f).unwrap();
        assert_eq!(b.algebra.superdim(), SuperDim::new(10, 12));
        check_super_anticommutativity(&b.algebra).unwrap();
        check_super_jacobi(&b.algebra).unwrap();
        assert!(matches!(is_simple(&b.algebra), Simplicity::Simple));
        let even = b.algebra.restrict(&b.even_part(), None).unwrap();
        assert_eq!(even.dim(), 10);
        assert!(matches!(is_simple(&even), Simplicity::Simple));
        let data = cartan_matrix(&b.algebra, &b.generators()).unwrap();
        assert_eq!(data.matrix, target_2x2(f));
        // H₁ = −2h₁ − h₂.
        let [h1, h2] = [b.cartan()[0].clone(), b.cartan()[1].clone()];
        let expect: Vec<u32> = h1.iter().zip(&h2).map(|(&x, &y)| f.neg(f.add(f.mul(2, x), y))).collect();
        assert_eq!(data.h[0], expect);
        let wd = weight_decomposition(&b.algebra, &b.cartan()).unwrap();
        assert_eq!(wd.total_dim(), 22);
    }

    #[test]
    fn br25_fails_at_seven() {
        let b = br25(gf(7)).unwrap();
        check_super_anticommutativity(&b.algebra).unwrap();
        assert!(check_super_jacobi(&b.algebra).is_err());
        let [x, y, z] = b.jacobi_probe();
        assert!(!crate::structconst::jacobi_defect(&b.algebra, x, y, z).is_empty());
        let b5 = br25(gf(5)).unwrap();
        let [x, y, z] = b5.jacobi_probe();
        assert!(crate::structconst::jacobi_defect(&b5.algebra, x, y, z).is_empty());
    }

    fn sl2(f: Field) -> SuperAlgebra {
        // Basis h, e, f.
        let space = SuperSpace::from_parts(f, &["h", "e", "f"], &[]).unwrap();
        let table = vec![
            vec![],
            vec![(1, 2)],
            vec![(2, f.neg(2))],
            vec![(1, f.neg(2))],
            vec![],
            vec![(0, 1)],
            vec![(2, 2)],
            vec![(0, f.neg(1))],
            vec![],
        ];
        SuperAlgebra::new(space, table).unwrap()
    }

    #[test]
    fn sl2_weights_and_cartan() {
        let f = gf(5);
        let g = sl2(f);
        let wd = weight_decomposition(&g, &[g.basis_vector(0)]).unwrap();
        let weights: Vec<u32> = wd.weights.iter().map(|w| w.0[0]).collect();
        assert_eq!(weights, vec![0, 2, 3]);
        let data = cartan_matrix(&g, &[GeneratorPair::new(g.basis_vector(1), g.basis_vector(2))]).unwrap();
        assert_eq!(data.matrix, vec![vec![2]]);
        assert!(matches!(
            weight_decomposition(&g, &[g.basis_vector(1)]),
            Err(Error::NotDiagonalizable)
        ));
        assert!(matches!(
            weight_decomposition(&g, &[g.basis_vector(0), g.basis_vector(1)]),
            Err(Error::NotCommuting)
        ));
    }

    #[test]
    fn registry() {
        assert!(matches!(build_model("nope", gf(3)), Err(Error::UnknownModel(_))));
        assert!(matches!(build_model("el53", gf(5)), Err(Error::WrongCharacteristic { .. })));
        assert_eq!(parse_square_name("g(S1.2,S42)"), Some(("S1.2".into(), "S4.2".into())));
        assert_eq!(parse_square_name("g(8,1)"), Some(("S8".into(), "S1".into())));
        assert_eq!(parse_square_name("g(S3,S1)"), None);
    }

    #[test]
    fn cartan_equivalence() {
        let f = gf(3);
        let a = vec![vec![2, 1], vec![0, 1]];
        let b = vec![vec![1, 0], vec![1, 2]];
        assert!(cartan_equivalent(f, &a, &b));
        assert!(!cartan_equivalent(f, &a, &[vec![1, 1], vec![1, 1]]));
        // Row scaling by 2.
        assert!(cartan_equivalent(f, &[vec![1, 2], vec![0, 1]], &[vec![2, 1], vec![0, 1]]));
    }

    #[test]
    fn el53_structure() {
        let e = el53(gf(3)).unwrap();
        assert_eq!(e.algebra().superdim(), SuperDim::new(39, 32));
        let so9 = e.so9().unwrap();
        assert_eq!(so9.dim(), 36);
        let t = e.torus().unwrap();
        assert_eq!(t.len(), 5);
        let wd = weight_decomposition(e.algebra(), &t).unwrap();
        assert_eq!(wd.total_dim(), 71);
    }

    #[test]
    fn el53_cartan_search() {
        let e = el53(gf(3)).unwrap();
        match search_el53_cartan(&e, std::time::Duration::from_secs(600)).unwrap() {
            SearchOutcome::Certified { pairs, matrix } => {
                assert!(cartan_equivalent(gf(3), &matrix, &el53_target(gf(3))));
                assert_eq!(cartan_matrix(e.algebra(), &pairs).unwrap().generated_dim, 71);
            }
            SearchOutcome::NotCertified { reason } => panic!("{reason}"),
        }
    }
}
