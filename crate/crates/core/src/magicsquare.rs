//! The Lie superalgebras `g(S,S′) = tri(S) ⊕ tri(S′) ⊕ ι₀(S⊗S′) ⊕ ι₁(S⊗S′) ⊕ ι₂(S⊗S′)`,
//! their invariant form, the `Z₂×Z₂` grading and the order-two automorphisms
//! `τ`, `σ`, `ξ = στ`.

use crate::composition::CompositionSuperalgebra;
use crate::error::{Error, Result};
use crate::ff::{accumulate, sparsify, Field, FieldMatrix, SparseVec};
use crate::meataxe::{norton_test, spin, Irreducibility, SparseOp};
use crate::structconst::{Subspace, SuperAlgebra};
use crate::superlinear::{SuperDim, SuperSpace};
use crate::triality::{tri, TrialityAlgebra};

/// Which summand a basis element of `g(S,S′)` lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MagicPart {
    Tri,
    TriPrime,
    Iota(u8),
}

impl MagicPart {
    /// `Z₂×Z₂` degree: `(0,0)` on both `tri` parts, `(1,0)`, `(0,1)`, `(1,1)`
    /// on `ι₀`, `ι₁`, `ι₂`.
    pub fn degree(self) -> (u8, u8) {
        match self {
            MagicPart::Tri | MagicPart::TriPrime => (0, 0),
            MagicPart::Iota(0) => (1, 0),
            MagicPart::Iota(1) => (0, 1),
            MagicPart::Iota(_) => (1, 1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MagicSuperalgebra {
    pub s: CompositionSuperalgebra,
    pub s_prime: CompositionSuperalgebra,
    pub tri: TrialityAlgebra,
    pub tri_prime: TrialityAlgebra,
    /// Structure constants with the `Z₂×Z₂` grading attached.
    pub algebra: SuperAlgebra,
    pub parts: Vec<MagicPart>,
    /// Index of the `k`-th basis element of `tri(S)`.
    pub tri_index: Vec<usize>,
    pub tri_prime_index: Vec<usize>,
    /// Index of `ιᵢ(eₐ ⊗ e′_b)` at `[i][a·dim S′ + b]`.
    pub iota_index: [Vec<usize>; 3],
}

impl MagicSuperalgebra {
    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn z2z2(&self, i: usize) -> (u8, u8) {
        self.parts[i].degree()
    }

    pub fn iota(&self, i: usize, a: usize, b: usize) -> usize {
        self.iota_index[i % 3][a * self.s_prime.dim() + b]
    }

    /// Indices of a summand, in natural order.
    pub fn part_indices(&self, part: MagicPart) -> Vec<usize> {
        match part {
            MagicPart::Tri => self.tri_index.clone(),
            MagicPart::TriPrime => self.tri_prime_index.clone(),
            MagicPart::Iota(i) => self.iota_index[i as usize].clone(),
        }
    }
}

/// Builds `g(S,S′)` from the five bracket rules.
pub fn magic(s: &CompositionSuperalgebra, s_prime: &CompositionSuperalgebra) -> Result<MagicSuperalgebra> {
    if s.field() != s_prime.field() {
        return Err(Error::ModulusMismatch(s.field().p(), s_prime.field().p()));
    }
    let f = s.field();
    let t = tri(s)?;
    let tp = tri(s_prime)?;
    let (n, np) = (s.dim(), s_prime.dim());
    let (m, mp) = (t.dim(), tp.dim());

    let mut natural: Vec<(String, u8)> = Vec::new();
    let mut nat_parts = Vec::new();
    for k in 0..m {
        natural.push((format!("tri:{}", t.algebra.space.label(k)), t.algebra.parity(k)));
        nat_parts.push(MagicPart::Tri);
    }
    for k in 0..mp {
        natural.push((format!("tri':{}", tp.algebra.space.label(k)), tp.algebra.parity(k)));
        nat_parts.push(MagicPart::TriPrime);
    }
    for i in 0..3u8 {
        for a in 0..n {
            for b in 0..np {
                natural.push((
                    format!("i{i}:{}⊗{}", s.space().label(a), s_prime.space().label(b)),
                    s.parity(a) ^ s_prime.parity(b),
                ));
                nat_parts.push(MagicPart::Iota(i));
            }
        }
    }
    let (space, index) = SuperSpace::partitioned(f, natural)?;
    let dim = space.dim();
    let mut parts = vec![MagicPart::Tri; dim];
    for (nat, &i) in index.iter().enumerate() {
        parts[i] = nat_parts[nat];
    }
    let tri_index: Vec<usize> = index[..m].to_vec();
    let tri_prime_index: Vec<usize> = index[m..m + mp].to_vec();
    let iota_index: [Vec<usize>; 3] =
        std::array::from_fn(|i| index[m + mp + i * n * np..m + mp + (i + 1) * n * np].to_vec());

    // Inverse lookup: what each final index is.
    #[derive(Clone, Copy)]
    enum Slot {
        T(usize),
        Tp(usize),
        I(usize, usize, usize),
    }
    let mut slots = vec![Slot::T(0); dim];
    for (k, &i) in tri_index.iter().enumerate() {
        slots[i] = Slot::T(k);
    }
    for (k, &i) in tri_prime_index.iter().enumerate() {
        slots[i] = Slot::Tp(k);
    }
    for i in 0..3 {
        for a in 0..n {
            for b in 0..np {
                slots[iota_index[i][a * np + b]] = Slot::I(i, a, b);
            }
        }
    }

    let tt = t.t_table()?;
    let ttp = tp.t_table()?;
    let e: Vec<Vec<u32>> = (0..n).map(|a| s.basis_vector(a)).collect();
    let ep: Vec<Vec<u32>> = (0..np).map(|b| s_prime.basis_vector(b)).collect();
    let prod: Vec<Vec<u32>> = (0..n * n).map(|ab| s.mul(&e[ab / n], &e[ab % n])).collect();
    let prodp: Vec<Vec<u32>> = (0..np * np).map(|ab| s_prime.mul(&ep[ab / np], &ep[ab % np])).collect();
    let ps = |a: usize| s.parity(a);
    let pp = |b: usize| s_prime.parity(b);

    // [d, ιᵢ(eₐ⊗e′_b)] for d = k-th tri(S) basis element.
    let act_tri = |k: usize, i: usize, a: usize, b: usize| -> SparseVec {
        let d = &t.elements[k].d[i];
        (0..n)
            .filter(|&c| d.get(c, a) != 0)
            .map(|c| (iota_index[i][c * np + b], d.get(c, a)))
            .collect()
    };
    let act_tri_prime = |k: usize, i: usize, a: usize, b: usize| -> SparseVec {
        let d = &tp.elements[k].d[i];
        let sg = f.sign(tp.elements[k].parity & ps(a) == 1);
        (0..np)
            .filter(|&c| d.get(c, b) != 0)
            .map(|c| (iota_index[i][a * np + c], f.mul(sg, d.get(c, b))))
            .collect()
    };
    // [ιᵢ(x⊗x′), ιᵢ₊₁(y⊗y′)] = (−1)^{x′y} ιᵢ₊₂((x•y)⊗(x′•y′)).
    let next_iota = |i: usize, (a, b): (usize, usize), (c, d): (usize, usize)| -> SparseVec {
        let sg = f.sign(pp(b) & ps(c) == 1);
        let xy = &prod[a * n + c];
        let xyp = &prodp[b * np + d];
        let mut out = Vec::new();
        for (u, &cu) in xy.iter().enumerate() {
            if cu == 0 {
                continue;
            }
            for (v, &cv) in xyp.iter().enumerate() {
                if cv != 0 {
                    out.push((iota_index[(i + 2) % 3][u * np + v], f.mul(sg, f.mul(cu, cv))));
                }
            }
        }
        out
    };
    // [ιᵢ(x⊗x′), ιᵢ(y⊗y′)].
    let same_iota = |i: usize, (a, b): (usize, usize), (c, d): (usize, usize)| -> SparseVec {
        let mut acc = vec![0u32; dim];
        let bp = s_prime.b(b, d);
        if bp != 0 {
            let sg = f.sign((ps(a) & pp(b)) ^ (ps(a) & pp(d)) ^ (ps(c) & pp(d)) == 1);
            let v: SparseVec = tt[i][a * n + c].iter().map(|&(k, x)| (tri_index[k], x)).collect();
            accumulate(f, &mut acc, &v, f.mul(sg, bp));
        }
        let bs = s.b(a, c);
        if bs != 0 {
            let sg = f.sign(ps(c) & pp(b) == 1);
            let v: SparseVec = ttp[i][b * np + d].iter().map(|&(k, x)| (tri_prime_index[k], x)).collect();
            accumulate(f, &mut acc, &v, f.mul(sg, bs));
        }
        sparsify(&acc)
    };

    let mut table: Vec<SparseVec> = vec![Vec::new(); dim * dim];
    for x in 0..dim {
        for y in 0..dim {
            // −(−1)^{|x||y|}: turns [y, x] into [x, y].
            let flip = f.neg(f.sign(space.parity(x) & space.parity(y) == 1));
            let rev = |v: SparseVec| -> SparseVec { v.into_iter().map(|(k, c)| (k, f.mul(flip, c))).collect() };
            table[x * dim + y] = match (slots[x], slots[y]) {
                (Slot::T(k), Slot::T(l)) => t.algebra.product(k, l).iter().map(|&(r, c)| (tri_index[r], c)).collect(),
                (Slot::Tp(k), Slot::Tp(l)) => {
                    tp.algebra.product(k, l).iter().map(|&(r, c)| (tri_prime_index[r], c)).collect()
                }
                (Slot::T(_), Slot::Tp(_)) | (Slot::Tp(_), Slot::T(_)) => Vec::new(),
                (Slot::T(k), Slot::I(i, a, b)) => act_tri(k, i, a, b),
                (Slot::I(i, a, b), Slot::T(k)) => rev(act_tri(k, i, a, b)),
                (Slot::Tp(k), Slot::I(i, a, b)) => act_tri_prime(k, i, a, b),
                (Slot::I(i, a, b), Slot::Tp(k)) => rev(act_tri_prime(k, i, a, b)),
                (Slot::I(i, a, b), Slot::I(j, c, d)) => {
                    if i == j {
                        same_iota(i, (a, b), (c, d))
                    } else if j == (i + 1) % 3 {
                        next_iota(i, (a, b), (c, d))
                    } else {
                        rev(next_iota(j, (c, d), (a, b)))
                    }
                }
            };
        }
    }
    let grading: Vec<u8> = parts.iter().map(|p| p.degree().0 + 2 * p.degree().1).collect();
    let algebra = SuperAlgebra::new(space, table)?.with_grading(grading)?;
    Ok(MagicSuperalgebra {
        s: s.clone(),
        s_prime: s_prime.clone(),
        tri: t,
        tri_prime: tp,
        algebra,
        parts,
        tri_index,
        tri_prime_index,
        iota_index,
    })
}

/// Gram matrix on `tri(S)` of the form determined by
/// `B(d, θⁱ(t_{x,y})) = b(dᵢ(x), y)`. Fails if these values are inconsistent
/// (as for the abelian `tri(S₂)`) or the `θⁱ(t_{x,y})` do not span `tri(S)`.
pub fn triality_form(t: &TrialityAlgebra) -> Result<Vec<u32>> {
    let f = t.field();
    let s = &t.s;
    let n = s.dim();
    let m = t.dim();
    if m == 0 {
        return Ok(Vec::new());
    }
    let tt = t.t_table()?;
    // Columns: coordinates of the generators; rhs[k][j] = B(e_k, generator j).
    let mut cols: Vec<Vec<u32>> = Vec::new();
    let mut rhs: Vec<Vec<u32>> = vec![Vec::new(); m];
    let e: Vec<Vec<u32>> = (0..n).map(|a| s.basis_vector(a)).collect();
    for (i, table) in tt.iter().enumerate() {
        for a in 0..n {
            for b in 0..n {
                let g = &table[a * n + b];
                let mut dense = vec![0; m];
                for &(k, c) in g {
                    dense[k] = c;
                }
                cols.push(dense);
                for (k, r) in rhs.iter_mut().enumerate() {
                    let dx = t.elements[k].d[i].mul_vec(&e[a]).expect("square");
                    r.push(s.bv(&dx, &e[b]));
                }
            }
        }
    }
    // Row k of the Gram matrix solves Gᵀ x = rhs[k], with G the generator columns.
    let gt = FieldMatrix::from_columns(f, m, &cols).transpose();
    let mut gram = Vec::with_capacity(m * m);
    for r in &rhs {
        let x = gt
            .solve(r)?
            .ok_or_else(|| Error::AxiomFailure("triality form values are inconsistent".into()))?;
        gram.extend(x);
    }
    Ok(gram)
}

/// `−½ str(d d′)` on `tri(S)` through the first component; on `tri(S₁,₂)`
/// this is the supertrace form of `osp(S₁,₂)`.
pub fn supertrace_form(t: &TrialityAlgebra) -> Vec<u32> {
    let f = t.field();
    let m = t.dim();
    let space = t.s.space();
    let mut gram = vec![0; m * m];
    for k in 0..m {
        for l in 0..m {
            let dd = t.elements[k].d[0].mul(&t.elements[l].d[0]).expect("square");
            let mut str = 0;
            for i in 0..dd.rows() {
                let c = dd.get(i, i);
                str = if space.parity(i) == 0 { f.add(str, c) } else { f.sub(str, c) };
            }
            gram[k * m + l] = f.neg(f.mul(f.half(), str));
        }
    }
    gram
}

/// The invariant form of `g(S,S′)`: the triality forms on both `tri` parts,
/// `B(ιᵢ(x⊗x′), ιⱼ(y⊗y′)) = δᵢⱼ (−1)^{|x′||y|} b(x,y) b′(x′,y′)` on the `ι`
/// parts, and the summands mutually orthogonal.
pub fn form_b(g: &MagicSuperalgebra) -> Result<Vec<u32>> {
    let f = g.field();
    let dim = g.dim();
    let (n, np) = (g.s.dim(), g.s_prime.dim());
    let mut gram = vec![0; dim * dim];
    for (t, idx) in [(&g.tri, &g.tri_index), (&g.tri_prime, &g.tri_prime_index)] {
        let m = t.dim();
        let tg = triality_form(t)?;
        for k in 0..m {
            for l in 0..m {
                gram[idx[k] * dim + idx[l]] = tg[k * m + l];
            }
        }
    }
    for i in 0..3 {
        for a in 0..n {
            for c in 0..n {
                let bs = g.s.b(a, c);
                if bs == 0 {
                    continue;
                }
                for b in 0..np {
                    for d in 0..np {
                        let sign = f.sign(g.s_prime.parity(b) & g.s.parity(c) == 1);
                        let v = f.mul(sign, f.mul(bs, g.s_prime.b(b, d)));
                        gram[g.iota(i, a, b) * dim + g.iota(i, c, d)] = v;
                    }
                }
            }
        }
    }
    Ok(gram)
}

/// An automorphism of `g` that is diagonal on the basis with entries ±1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignAutomorphism {
    pub signs: Vec<u32>,
}

impl SignAutomorphism {
    pub fn matrix(&self, f: Field) -> FieldMatrix {
        let n = self.signs.len();
        let mut m = FieldMatrix::zeros(f, n, n);
        for (i, &s) in self.signs.iter().enumerate() {
            m.set(i, i, s);
        }
        m
    }

    pub fn compose(&self, other: &SignAutomorphism, f: Field) -> SignAutomorphism {
        SignAutomorphism {
            signs: self.signs.iter().zip(&other.signs).map(|(&a, &b)| f.mul(a, b)).collect(),
        }
    }

    pub fn is_involution(&self, f: Field) -> bool {
        self.signs.iter().all(|&s| f.mul(s, s) == 1)
    }
}

/// Checks `φ[x,y] = [φx,φy]` on basis pairs.
pub fn check_sign_automorphism(a: &SuperAlgebra, phi: &SignAutomorphism) -> Result<()> {
    let f = a.field();
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            let sij = f.mul(phi.signs[i], phi.signs[j]);
            for &(k, _) in a.product(i, j) {
                if phi.signs[k] != sij {
                    return Err(Error::NotAnAutomorphism(format!(
                        "[{}, {}] has a component on {}",
                        a.space.label(i),
                        a.space.label(j),
                        a.space.label(k)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `σ = (−1)^parity`.
pub fn automorphism_sigma(g: &MagicSuperalgebra) -> SignAutomorphism {
    let f = g.field();
    SignAutomorphism {
        signs: (0..g.dim()).map(|i| f.sign(g.algebra.parity(i) == 1)).collect(),
    }
}

/// `τ = −1` on the degrees `(0,1)` and `(1,1)`, i.e. on `ι₁` and `ι₂`.
pub fn automorphism_tau(g: &MagicSuperalgebra) -> SignAutomorphism {
    let f = g.field();
    SignAutomorphism {
        signs: (0..g.dim()).map(|i| f.sign(g.z2z2(i).1 == 1)).collect(),
    }
}

/// `ξ = στ`, checked against the bracket.
pub fn automorphism_xi(g: &MagicSuperalgebra) -> Result<SignAutomorphism> {
    let xi = automorphism_sigma(g).compose(&automorphism_tau(g), g.field());
    check_sign_automorphism(&g.algebra, &xi)?;
    Ok(xi)
}

/// The ±1 eigenspaces of an order-two automorphism: the fixed subalgebra
/// `g₊` and its module `g₋`.
#[derive(Clone, Debug)]
pub struct FixedSplit {
    pub plus: SuperAlgebra,
    /// Indices in `g` of the basis of `g₊`.
    pub plus_index: Vec<usize>,
    /// Indices in `g` of the basis of `g₋`.
    pub minus_index: Vec<usize>,
    /// Action of each basis element of `g₊` on `g₋`, in the basis `minus_index`.
    pub action: Vec<SparseOp>,
}

impl FixedSplit {
    pub fn minus_dim(&self) -> usize {
        self.minus_index.len()
    }
}

/// Splits `a` by a sign automorphism, checking that `g₊` is closed and `g₋`
/// is a `g₊`-module.
pub fn fixed_subalgebra(a: &SuperAlgebra, phi: &SignAutomorphism) -> Result<FixedSplit> {
    check_sign_automorphism(a, phi)?;
    let f = a.field();
    let n = a.dim();
    let plus_index: Vec<usize> = (0..n).filter(|&i| phi.signs[i] == 1).collect();
    let minus_index: Vec<usize> = (0..n).filter(|&i| phi.signs[i] != 1).collect();
    let unit = |i: usize| {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    };
    let sub = Subspace::from_vectors(f, n, plus_index.iter().map(|&i| unit(i)));
    let labels = plus_index.iter().map(|&i| a.space.label(i).to_string()).collect();
    let plus = a.restrict(&sub, Some(labels))?;
    let mut pos = vec![usize::MAX; n];
    for (k, &i) in minus_index.iter().enumerate() {
        pos[i] = k;
    }
    let m = minus_index.len();
    let mut action = Vec::with_capacity(plus_index.len());
    for &x in &plus_index {
        let mut cols = Vec::with_capacity(m);
        for &y in &minus_index {
            let mut col = Vec::new();
            for &(k, c) in a.product(x, y) {
                if pos[k] == usize::MAX {
                    return Err(Error::AxiomFailure("g₋ is not a g₊-module".into()));
                }
                col.push((pos[k], c));
            }
            cols.push(col);
        }
        action.push(SparseOp { dim: m, cols });
    }
    Ok(FixedSplit {
        plus,
        plus_index,
        minus_index,
        action,
    })
}

/// Outcome of [`module_irreducible`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleVerdict {
    Irreducible,
    /// A proper nonzero submodule.
    Reducible(Subspace),
    Undecided,
}

/// Irreducibility of `k^dim` under `ops`: every basis vector must generate
/// the whole module, and the MeatAxe must agree.
pub fn module_irreducible(field: Field, dim: usize, ops: &[SparseOp]) -> ModuleVerdict {
    for i in 0..dim {
        let mut v = vec![0; dim];
        v[i] = 1;
        let eb = spin(field, dim, ops, &[v]);
        if !eb.is_full() {
            return ModuleVerdict::Reducible(Subspace::from_builder(eb));
        }
    }
    match norton_test(field, dim, ops, 0x5eed_0f_a1) {
        Irreducibility::Irreducible => ModuleVerdict::Irreducible,
        Irreducibility::Reducible(w) => ModuleVerdict::Reducible(w),
        Irreducibility::Inconclusive => ModuleVerdict::Undecided,
    }
}

/// `dim tri(S) + dim tri(S′) + 3·dim S·dim S′` with parity bookkeeping.
pub fn expected_superdim(tri_s: SuperDim, tri_sp: SuperDim, s: SuperDim, sp: SuperDim) -> SuperDim {
    let even = tri_s.even + tri_sp.even + 3 * (s.even * sp.even + s.odd * sp.odd);
    let odd = tri_s.odd + tri_sp.odd + 3 * (s.even * sp.odd + s.odd * sp.even);
    SuperDim::new(even, odd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::symmetric_by_name;
    use crate::structconst::{
        check_form_supersymmetric, check_grading, check_invariant_form, check_super_anticommutativity,
        check_super_jacobi, form_rank, is_simple, Simplicity,
    };

    fn gf(p: u32) -> Field {
        Field::new(p).unwrap()
    }

    fn sq(a: &str, b: &str) -> MagicSuperalgebra {
        let f = gf(3);
        magic(&symmetric_by_name(a, f).unwrap(), &symmetric_by_name(b, f).unwrap()).unwrap()
    }

    #[test]
    fn small_squares() {
        for (a, b, e, o) in [("S1", "S1", 3, 0), ("S1", "S2", 8, 0), ("S2", "S4", 35, 0), ("S1", "S1.2", 6, 8), ("S1.2", "S1.2", 21, 16)] {
            let g = sq(a, b);
            assert_eq!(g.algebra.superdim(), SuperDim::new(e, o), "{a} {b}");
            check_super_anticommutativity(&g.algebra).unwrap();
            check_super_jacobi(&g.algebra).unwrap();
            check_grading(&g.algebra).unwrap();
        }
    }

    #[test]
    fn labels_follow_components() {
        let g = sq("S1", "S1.2");
        let i = g.iota(1, 0, 1);
        assert_eq!(g.algebra.space.label(i), format!("i1:{}⊗{}", g.s.space().label(0), g.s_prime.space().label(1)));
        assert_eq!(g.parts[i], MagicPart::Iota(1));
    }

    #[test]
    fn g83_form_and_xi() {
        let g = sq("S8", "S1.2");
        assert_eq!(g.algebra.superdim(), SuperDim::new(55, 50));
        let gram = form_b(&g).unwrap();
        let a = g.algebra.clone().with_form(gram).unwrap();
        check_form_supersymmetric(&a).unwrap().unwrap();
        check_invariant_form(&a).unwrap().unwrap();
        assert_eq!(form_rank(&a).unwrap(), 105);
        // ι₀ and ι₁ are orthogonal; ι₀ pairs through b·b′.
        let (x, y) = (g.iota(0, 0, 0), g.iota(1, 1, 0));
        assert_eq!(a.form_entry(x, y), Some(0));
        let b11 = g.s_prime.b(0, 0);
        let z = g.iota(0, 1, 0);
        assert_eq!(a.form_entry(x, z), Some(gf(3).mul(g.s.b(0, 1), b11)));

        let xi = automorphism_xi(&g).unwrap();
        assert!(xi.is_involution(gf(3)));
        let split = fixed_subalgebra(&g.algebra, &xi).unwrap();
        assert_eq!(split.plus.superdim(), SuperDim::new(39, 32));
        let minus = SuperDim::new(
            split.minus_index.iter().filter(|&&i| g.algebra.parity(i) == 0).count(),
            split.minus_index.iter().filter(|&&i| g.algebra.parity(i) == 1).count(),
        );
        assert_eq!(minus, SuperDim::new(16, 18));
        assert_eq!(module_irreducible(gf(3), split.minus_dim(), &split.action), ModuleVerdict::Irreducible);
    }

    #[test]
    fn form_b_is_invariant_when_both_sides_are_super() {
        for (a, b) in [("S1.2", "S1.2"), ("S1.2", "S4.2"), ("S4.2", "S4.2"), ("S4", "S4.2")] {
            let g = sq(a, b);
            let n = g.dim();
            let x = g.algebra.clone().with_form(form_b(&g).unwrap()).unwrap();
            check_form_supersymmetric(&x).unwrap().unwrap();
            check_invariant_form(&x).unwrap().unwrap();
            assert_eq!(form_rank(&x).unwrap(), n, "{a} {b}");
        }
    }

    #[test]
    fn triality_form_exists_except_for_s2() {
        for (name, ok) in [("S1", true), ("S2", false), ("S4", true), ("S8", true), ("S1.2", true), ("S4.2", true)] {
            let t = tri(&symmetric_by_name(name, gf(3)).unwrap()).unwrap();
            assert_eq!(triality_form(&t).is_ok(), ok, "{name}");
        }
    }

    #[test]
    fn supertrace_matches_triality_form_on_s12() {
        let t = tri(&symmetric_by_name("S1.2", gf(3)).unwrap()).unwrap();
        assert_eq!(triality_form(&t).unwrap(), supertrace_form(&t));
    }

    #[test]
    fn so9_inside_el53() {
        let g = sq("S8", "S1.2");
        let n = g.dim();
        let one = (0..g.s_prime.dim()).find(|&b| g.s_prime.parity(b) == 0).unwrap();
        let mut idx = g.tri_index.clone();
        idx.extend((0..g.s.dim()).map(|a| g.iota(0, a, one)));
        let sub = Subspace::from_vectors(
            gf(3),
            n,
            idx.iter().map(|&i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            }),
        );
        let h = g.algebra.restrict(&sub, None).unwrap();
        assert_eq!(h.dim(), 36);
        assert!(matches!(is_simple(&h), Simplicity::Simple));
    }

    #[test]
    fn automorphisms_commute_and_are_involutions() {
        let g = sq("S4", "S4.2");
        let f = gf(3);
        let (s, t) = (automorphism_sigma(&g), automorphism_tau(&g));
        check_sign_automorphism(&g.algebra, &s).unwrap();
        check_sign_automorphism(&g.algebra, &t).unwrap();
        assert_eq!(s.compose(&t, f), t.compose(&s, f));
        assert!(s.compose(&t, f).is_involution(f));
    }

    #[test]
    fn non_automorphism_rejected() {
        let g = sq("S1", "S2");
        let f = gf(3);
        let mut bad = automorphism_tau(&g);
        bad.signs[g.iota(0, 0, 0)] = f.neg(1);
        assert!(automorphism_xi(&g).is_ok());
        assert!(check_sign_automorphism(&g.algebra, &bad).is_err());
    }

    #[test]
    fn module_tests() {
        let f = gf(5);
        let zero = SparseOp { dim: 2, cols: vec![Vec::new(), Vec::new()] };
        assert!(matches!(module_irreducible(f, 2, &[zero]), ModuleVerdict::Reducible(_)));
        // Adjoint sl₂ on basis h, e, f.
        let ad = |cols: Vec<SparseVec>| SparseOp { dim: 3, cols };
        let ad_h = ad(vec![vec![], vec![(1, 2)], vec![(2, 3)]]);
        let ad_e = ad(vec![vec![(1, 3)], vec![], vec![(0, 1)]]);
        let ad_f = ad(vec![vec![(2, 2)], vec![(0, 4)], vec![]]);
        assert_eq!(module_irreducible(f, 3, &[ad_h, ad_e, ad_f]), ModuleVerdict::Irreducible);
    }

    #[test]
    fn dimension_formula() {
        let g = sq("S2", "S4.2");
        let d = expected_superdim(
            g.tri.algebra.superdim(),
            g.tri_prime.algebra.superdim(),
            g.s.space().superdim(),
            g.s_prime.space().superdim(),
        );
        assert_eq!(g.algebra.superdim(), d);
        assert_eq!(d, SuperDim::new(35, 20));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::composition::symmetric_by_name;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn g83() -> &'static SuperAlgebra {
        static G: OnceLock<SuperAlgebra> = OnceLock::new();
        G.get_or_init(|| {
            let f = Field::new(3).unwrap();
            let g = magic(&symmetric_by_name("S8", f).unwrap(), &symmetric_by_name("S1.2", f).unwrap()).unwrap();
            let gram = form_b(&g).unwrap();
            g.algebra.with_form(gram).unwrap()
        })
    }

    fn arb_element() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0u32..3, 105)
    }

    fn even_part(a: &SuperAlgebra, mut v: Vec<u32>) -> Vec<u32> {
        for (i, c) in v.iter_mut().enumerate() {
            if a.parity(i) == 1 {
                *c = 0;
            }
        }
        v
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn form_b_is_invariant(x in arb_element(), y in arb_element(), z in arb_element()) {
            let a = g83();
            prop_assert_eq!(a.form_value(&a.mul(&x, &y), &z).unwrap(), a.form_value(&x, &a.mul(&y, &z)).unwrap());
        }

        #[test]
        fn even_part_satisfies_jacobi(x in arb_element(), y in arb_element(), z in arb_element()) {
            let a = g83();
            let f = a.field();
            let (x, y, z) = (even_part(a, x), even_part(a, y), even_part(a, z));
            let lhs = a.mul(&x, &a.mul(&y, &z));
            let r1 = a.mul(&a.mul(&x, &y), &z);
            let r2 = a.mul(&y, &a.mul(&x, &z));
            let rhs: Vec<u32> = r1.iter().zip(&r2).map(|(&u, &v)| f.add(u, v)).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
