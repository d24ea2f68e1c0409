//! Split Hurwitz algebras, the Hurwitz superalgebras B(1,2) and B(4,2),
//! standard involution, para-Hurwitz twist, and composition checkers.

use crate::error::{Error, Result};
use crate::ff::{Field, FieldMatrix};
use crate::structconst::{Check, SuperAlgebra, Witness};
use crate::superlinear::{koszul_odd, HomogeneousMap, SuperSpace};

/// `q = (q₀̄, b)`: the quadratic form on the even part and the full polar
/// bilinear superform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSuperform {
    /// `q₀̄(eᵢ)` for each even basis element, in basis order.
    pub q0: Vec<u32>,
    /// Dense Gram matrix of `b`.
    pub b: Vec<u32>,
}

/// A composition superalgebra with its norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionSuperalgebra {
    pub name: String,
    pub algebra: SuperAlgebra,
    pub norm: QuadraticSuperform,
    /// Unit coordinates, for Hurwitz superalgebras.
    pub unit: Option<Vec<u32>>,
    /// Set for para-Hurwitz algebras (associative norm expected).
    pub symmetric: bool,
    /// For a para-Hurwitz algebra, the Hurwitz algebra it twists.
    pub hurwitz: Option<Box<CompositionSuperalgebra>>,
}

impl CompositionSuperalgebra {
    fn assemble(name: &str, algebra: SuperAlgebra, b: Vec<u32>, unit: Option<Vec<u32>>) -> Result<CompositionSuperalgebra> {
        let f = algebra.field();
        let n = algebra.dim();
        let half = f.half();
        let q0 = (0..n)
            .filter(|&i| algebra.parity(i) == 0)
            .map(|i| f.mul(half, b[i * n + i]))
            .collect();
        let algebra = match &unit {
            Some(u) => algebra.with_unit(u.clone()),
            None => algebra,
        }
        .with_form(b.clone())?;
        Ok(CompositionSuperalgebra {
            name: name.to_string(),
            algebra,
            norm: QuadraticSuperform { q0, b },
            unit,
            symmetric: false,
            hurwitz: None,
        })
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn space(&self) -> &SuperSpace {
        &self.algebra.space
    }

    #[inline]
    pub fn parity(&self, i: usize) -> u8 {
        self.algebra.parity(i)
    }

    #[inline]
    pub fn b(&self, i: usize, j: usize) -> u32 {
        self.norm.b[i * self.dim() + j]
    }

    pub fn bv(&self, x: &[u32], y: &[u32]) -> u32 {
        self.algebra.form_value(x, y).expect("composition algebras carry a form")
    }

    /// `q₀̄` of an even coordinate vector: `½ b(x, x)`.
    pub fn q0(&self, x: &[u32]) -> u32 {
        let f = self.field();
        f.mul(f.half(), self.bv(x, x))
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        self.algebra.mul(x, y)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        self.algebra.basis_vector(i)
    }

    /// Rank of the Gram matrix of `b`.
    pub fn form_rank(&self) -> usize {
        let n = self.dim();
        FieldMatrix::from_data(self.field(), n, n, self.norm.b.clone())
            .expect("square")
            .rank()
    }
}

fn products(n: usize, entries: &[(usize, usize, usize, i64)], f: Field) -> Vec<Vec<(usize, u32)>> {
    let mut t: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n * n];
    for &(i, j, k, c) in entries {
        t[i * n + j].push((k, f.from_i64(c)));
    }
    t
}

fn gram(n: usize, entries: &[(usize, usize, i64)], f: Field) -> Vec<u32> {
    let mut b = vec![0; n * n];
    for &(i, j, c) in entries {
        b[i * n + j] = f.from_i64(c);
    }
    b
}

/// Levi-Civita symbol on `{0, 1, 2}`.
fn epsilon(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// The split Hurwitz algebra of dimension `r ∈ {1, 2, 4, 8}`: `k`, `k×k`,
/// `Mat₂(k)`, or the split Cayley algebra in its Zorn basis.
pub fn split_hurwitz(r: usize, field: Field) -> Result<CompositionSuperalgebra> {
    let f = field;
    match r {
        1 => {
            let space = SuperSpace::from_parts(f, &["1"], &[])?;
            let alg = SuperAlgebra::new(space, products(1, &[(0, 0, 0, 1)], f))?;
            CompositionSuperalgebra::assemble("C1", alg, gram(1, &[(0, 0, 2)], f), Some(vec![1]))
        }
        2 => {
            let space = SuperSpace::from_parts(f, &["e1", "e2"], &[])?;
            let alg = SuperAlgebra::new(space, products(2, &[(0, 0, 0, 1), (1, 1, 1, 1)], f))?;
            CompositionSuperalgebra::assemble("C2", alg, gram(2, &[(0, 1, 1), (1, 0, 1)], f), Some(vec![1, 1]))
        }
        4 => {
            let space = SuperSpace::from_parts(f, &["E11", "E12", "E21", "E22"], &[])?;
            let alg = SuperAlgebra::from_fn(space, mat2_unit_product)?;
            CompositionSuperalgebra::assemble("C4", alg, det_polar(f), Some(vec![1, 0, 0, 1]))
        }
        8 => {
            let space = SuperSpace::from_parts(f, &["e1", "e2", "u1", "u2", "u3", "v1", "v2", "v3"], &[])?;
            let mut entries = vec![
                (0, 0, 0, 1),
                (1, 1, 1, 1),
            ];
            for i in 0..3 {
                let (u, v) = (2 + i, 5 + i);
                entries.push((0, u, u, 1)); // e1 uᵢ = uᵢ
                entries.push((u, 1, u, 1)); // uᵢ e2 = uᵢ
                entries.push((1, v, v, 1)); // e2 vᵢ = vᵢ
                entries.push((v, 0, v, 1)); // vᵢ e1 = vᵢ
                entries.push((u, v, 0, -1)); // uᵢ vᵢ = −e1
                entries.push((v, u, 1, -1)); // vᵢ uᵢ = −e2
                for j in 0..3 {
                    for k in 0..3 {
                        let e = epsilon(i, j, k);
                        if e != 0 {
                            entries.push((u, 2 + j, 5 + k, -e)); // uᵢuⱼ = −εᵢⱼₖ v_k
                            entries.push((v, 5 + j, 2 + k, -e)); // vᵢvⱼ = −εᵢⱼₖ u_k
                        }
                    }
                }
            }
            let alg = SuperAlgebra::new(space, products(8, &entries, f))?;
            let mut b = vec![(0, 1, 1), (1, 0, 1)];
            for i in 0..3 {
                b.push((2 + i, 5 + i, 1));
                b.push((5 + i, 2 + i, 1));
            }
            CompositionSuperalgebra::assemble("C8", alg, gram(8, &b, f), Some(vec![1, 1, 0, 0, 0, 0, 0, 0]))
        }
        _ => Err(Error::InvalidDimension(r)),
    }
}

/// Matrix units `E11, E12, E21, E22` (index `2a + b` for `E_{a+1,b+1}`).
fn mat2_unit_product(x: usize, y: usize) -> Vec<u32> {
    let (a, b) = (x / 2, x % 2);
    let (c, d) = (y / 2, y % 2);
    let mut out = vec![0; 4];
    if b == c {
        out[2 * a + d] = 1;
    }
    out
}

/// Polar form of `det` on `Mat₂` in the matrix-unit basis.
fn det_polar(f: Field) -> Vec<u32> {
    gram(4, &[(0, 3, 1), (3, 0, 1), (1, 2, -1), (2, 1, -1)], f)
}

/// `B(1,2) = k1 ⊕ V` with `⟨u|v⟩ = 1`. A Hurwitz superalgebra only in
/// characteristic 3; constructible in any odd characteristic.
pub fn b12(field: Field) -> Result<CompositionSuperalgebra> {
    let f = field;
    let space = SuperSpace::from_parts(f, &["1"], &["u", "v"])?;
    let t = products(
        3,
        &[(0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (1, 0, 1, 1), (2, 0, 2, 1), (1, 2, 0, 1), (2, 1, 0, -1)],
        f,
    );
    let alg = SuperAlgebra::new(space, t)?;
    let b = gram(3, &[(0, 0, 2), (1, 2, 1), (2, 1, -1)], f);
    CompositionSuperalgebra::assemble("B(1,2)", alg, b, Some(vec![1, 0, 0]))
}

/// `B(4,2) = End(V) ⊕ V` with `v·f = f(v) = f̄·v`, `u·v = ⟨.|u⟩v`,
/// `q₀̄ = det`, `b(u,v) = ⟨u|v⟩`. A Hurwitz superalgebra only in
/// characteristic 3.
pub fn b42(field: Field) -> Result<CompositionSuperalgebra> {
    let f = field;
    let space = SuperSpace::from_parts(f, &["E11", "E12", "E21", "E22"], &["v1", "v2"])?;
    // ⟨v_a|v_b⟩ for a, b ∈ {0, 1}.
    let symp = |a: usize, b: usize| -> i64 {
        match (a, b) {
            (0, 1) => 1,
            (1, 0) => -1,
            _ => 0,
        }
    };
    let alg = SuperAlgebra::from_fn(space, |x, y| {
        let mut out = vec![0i64; 6];
        match (x < 4, y < 4) {
            (true, true) => {
                for (k, c) in mat2_unit_product(x, y).into_iter().enumerate() {
                    out[k] = c as i64;
                }
            }
            (false, true) => {
                // v·f = f(v): E_{ab} v_c = δ_{bc} v_a
                let c = x - 4;
                let (a, b) = (y / 2, y % 2);
                if b == c {
                    out[4 + a] += 1;
                }
            }
            (true, false) => {
                // f·v = f̄(v), f̄ = tr(f)·1 − f
                let c = y - 4;
                let (a, b) = (x / 2, x % 2);
                if a == b {
                    out[4 + c] += 1;
                }
                if b == c {
                    out[4 + a] -= 1;
                }
            }
            (false, false) => {
                // u·v: w ↦ ⟨w|u⟩v, so column c holds ⟨v_c|u⟩ v
                let (u, v) = (x - 4, y - 4);
                for c in 0..2 {
                    let s = symp(c, u);
                    if s != 0 {
                        out[2 * v + c] += s;
                    }
                }
            }
        }
        out.into_iter().map(|c| f.from_i64(c)).collect()
    })?;
    let mut b = det_polar(f);
    let n = 6;
    let mut full = vec![0; n * n];
    for i in 0..4 {
        for j in 0..4 {
            full[i * n + j] = b[i * 4 + j];
        }
    }
    full[4 * n + 5] = 1;
    full[5 * n + 4] = f.neg(1);
    b.clear();
    CompositionSuperalgebra::assemble("B(4,2)", alg, full, Some(vec![1, 0, 0, 1, 0, 0]))
}

/// `x ↦ b(x, 1)1 − x`.
pub fn standard_involution(c: &CompositionSuperalgebra) -> Result<HomogeneousMap> {
    let unit = c.unit.as_ref().ok_or(Error::NotUnital)?;
    let f = c.field();
    let n = c.dim();
    let mut m = FieldMatrix::zeros(f, n, n);
    for j in 0..n {
        let bj = c.bv(&c.basis_vector(j), unit);
        for i in 0..n {
            let mut v = f.mul(bj, unit[i]);
            if i == j {
                v = f.sub(v, 1);
            }
            m.set(i, j, v);
        }
    }
    HomogeneousMap::new(c.space().clone(), c.space().clone(), 0, m)
}

/// The para-Hurwitz algebra: same space and norm, `x•y = x̄ȳ`.
pub fn para(c: &CompositionSuperalgebra) -> Result<CompositionSuperalgebra> {
    let inv = standard_involution(c)?;
    let n = c.dim();
    let bar: Vec<Vec<u32>> = (0..n).map(|j| inv.matrix.column(j)).collect();
    let alg = SuperAlgebra::from_fn(c.space().clone(), |i, j| c.mul(&bar[i], &bar[j]))?;
    let mut out = CompositionSuperalgebra::assemble(&para_name(&c.name), alg, c.norm.b.clone(), None)?;
    out.symmetric = true;
    out.hurwitz = Some(Box::new(c.clone()));
    Ok(out)
}

fn para_name(hurwitz: &str) -> String {
    match hurwitz {
        "C1" => "S1".into(),
        "C2" => "S2".into(),
        "C4" => "S4".into(),
        "C8" => "S8".into(),
        "B(1,2)" => "S1.2".into(),
        "B(4,2)" => "S4.2".into(),
        other => format!("para({other})"),
    }
}

/// The para-Hurwitz algebra registered under `name`: one of `S1`, `S2`,
/// `S4`, `S8`, `S1.2`, `S4.2`.
pub fn symmetric_by_name(name: &str, field: Field) -> Result<CompositionSuperalgebra> {
    let c = match name {
        "S1" | "1" => split_hurwitz(1, field)?,
        "S2" | "2" => split_hurwitz(2, field)?,
        "S4" | "4" => split_hurwitz(4, field)?,
        "S8" | "8" => split_hurwitz(8, field)?,
        "S1.2" | "1.2" | "S12" => b12(field)?,
        "S4.2" | "4.2" | "S42" => b42(field)?,
        other => return Err(Error::UnknownModel(other.to_string())),
    };
    para(&c)
}

/// `b(xy,zt) + (−1)^{xy+xz+yz} b(zy,xt) = (−1)^{yz} b(x,z) b(y,t)` on all
/// basis quadruples.
pub fn check_composition(c: &CompositionSuperalgebra) -> Check {
    let f = c.field();
    let n = c.dim();
    let prod: Vec<Vec<u32>> = (0..n * n)
        .map(|ij| c.mul(&c.basis_vector(ij / n), &c.basis_vector(ij % n)))
        .collect();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for t in 0..n {
                    let (px, py, pz) = (c.parity(x), c.parity(y), c.parity(z));
                    let lhs1 = c.bv(&prod[x * n + y], &prod[z * n + t]);
                    let s = f.sign(koszul_odd(&[(px, py), (px, pz), (py, pz)]));
                    let lhs2 = c.bv(&prod[z * n + y], &prod[x * n + t]);
                    let rhs = f.mul(f.sign(py & pz == 1), f.mul(c.b(x, z), c.b(y, t)));
                    let d = f.sub(f.add(lhs1, f.mul(s, lhs2)), rhs);
                    if d != 0 {
                        return Err(Witness::new(vec![x, y, z, t], vec![(0, d)], "composition identity"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// The quadratic consequences `q₀̄(xy) = q₀̄(x)q₀̄(y)` and
/// `b(xy, xz) = q₀̄(x)b(y, z) = b(yx, zx)` for even `x, y`, tested on all
/// pairs of even basis vectors and on `samples` pseudo-random even elements.
pub fn check_norm_multiplicative(c: &CompositionSuperalgebra, samples: usize) -> Check {
    let f = c.field();
    let n = c.dim();
    let even: Vec<usize> = (0..n).filter(|&i| c.parity(i) == 0).collect();
    let mut elems: Vec<Vec<u32>> = even.iter().map(|&i| c.basis_vector(i)).collect();
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    for _ in 0..samples {
        let mut v = vec![0; n];
        for &i in &even {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            v[i] = (state % f.p() as u64) as u32;
        }
        elems.push(v);
    }
    for (a, x) in elems.iter().enumerate() {
        for (bi, y) in elems.iter().enumerate() {
            let xy = c.mul(x, y);
            if c.q0(&xy) != f.mul(c.q0(x), c.q0(y)) {
                return Err(Witness::new(vec![a, bi], Vec::new(), "q(xy) = q(x)q(y)"));
            }
            for z in 0..n {
                let ez = c.basis_vector(z);
                let lhs = c.bv(&c.mul(x, y), &c.mul(x, &ez));
                let rhs = f.mul(c.q0(x), c.bv(y, &ez));
                let lhs2 = c.bv(&c.mul(y, x), &c.mul(&ez, x));
                if lhs != rhs || lhs2 != rhs {
                    return Err(Witness::new(vec![a, bi, z], Vec::new(), "b(xy,xz) = q(x)b(y,z)"));
                }
            }
        }
    }
    Ok(())
}

/// `b(x•y, z) = b(x, y•z)` and the two linearized identities
/// `(x•y)•z + (−1)^{xy+xz+yz}(z•y)•x = (−1)^{yz} b(x,z) y` and
/// `x•(y•z) + (−1)^{xy+xz+yz} z•(y•x) = (−1)^{yz} b(x,z) y`
/// on all basis triples.
pub fn check_symmetric_composition(s: &CompositionSuperalgebra) -> Check {
    let f = s.field();
    let n = s.dim();
    let e: Vec<Vec<u32>> = (0..n).map(|i| s.basis_vector(i)).collect();
    let prod: Vec<Vec<u32>> = (0..n * n).map(|ij| s.mul(&e[ij / n], &e[ij % n])).collect();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (px, py, pz) = (s.parity(x), s.parity(y), s.parity(z));
                let l = s.bv(&prod[x * n + y], &e[z]);
                let r = s.bv(&e[x], &prod[y * n + z]);
                if l != r {
                    return Err(Witness::new(vec![x, y, z], vec![(0, f.sub(l, r))], "associativity of b"));
                }
                let sg = f.sign(koszul_odd(&[(px, py), (px, pz), (py, pz)]));
                let rhs_c = f.mul(f.sign(py & pz == 1), s.b(x, z));
                let first = s.mul(&prod[x * n + y], &e[z]);
                let second = s.mul(&prod[z * n + y], &e[x]);
                let third = s.mul(&e[x], &prod[y * n + z]);
                let fourth = s.mul(&e[z], &prod[y * n + x]);
                for (name, a, b) in [("(x•y)•z", &first, &second), ("x•(y•z)", &third, &fourth)] {
                    let defect: Vec<u32> = (0..n)
                        .map(|k| {
                            let v = f.add(a[k], f.mul(sg, b[k]));
                            let r = if k == y { rhs_c } else { 0 };
                            f.sub(v, r)
                        })
                        .collect();
                    if defect.iter().any(|&d| d != 0) {
                        return Err(Witness::new(
                            vec![x, y, z],
                            crate::ff::sparsify(&defect),
                            format!("{name} identity"),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_case() -> impl Strategy<Value = (u32, usize, Vec<u32>, Vec<u32>, Vec<u32>)> {
        (prop::sample::select(vec![3u32, 5, 7]), prop::sample::select(vec![1usize, 2, 4, 8])).prop_flat_map(|(p, r)| {
            let v = prop::collection::vec(0..p, r);
            (Just(p), Just(r), v.clone(), v.clone(), v)
        })
    }

    proptest! {
        #[test]
        fn hurwitz_norm_is_multiplicative((p, r, x, y, _z) in arb_case()) {
            let c = split_hurwitz(r, Field::new(p).unwrap()).unwrap();
            let f = c.field();
            prop_assert_eq!(c.q0(&c.mul(&x, &y)), f.mul(c.q0(&x), c.q0(&y)));
        }

        #[test]
        fn para_hurwitz_form_is_associative((p, r, x, y, z) in arb_case()) {
            let s = para(&split_hurwitz(r, Field::new(p).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(s.bv(&s.mul(&x, &y), &z), s.bv(&x, &s.mul(&y, &z)));
        }
    }
}
