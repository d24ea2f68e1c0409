//! The orthosymplectic superalgebra of a quadratic superform, the triality
//! superalgebra `tri(S)`, its cyclic automorphism `θ`, and the elements
//! `σ_{x,y}` and `t_{x,y}`.

use crate::composition::{check_symmetric_composition, CompositionSuperalgebra};
use crate::error::{Error, Result};
use crate::ff::{sparsify, EchelonBuilder, Field, FieldMatrix, SparseVec};
use crate::structconst::{Check, MapAlgebra, SuperAlgebra, Witness};
use crate::superlinear::{
    flatten, labelled_space, supercommutator_matrices, unflatten, HomogeneousMap, MapBasis,
};

/// `osp(S, q)` realized by matrices.
pub type Osp = MapAlgebra;

/// Homogeneous maps of parity `parity` that are skew for `b`, as a kernel
/// over the unknown matrix entries.
fn skew_maps(field: Field, parities: &[u8], b: &[u32], parity: u8) -> Vec<FieldMatrix> {
    let n = parities.len();
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| parities[i] ^ parities[j] == parity)
        .collect();
    let mut pos = vec![usize::MAX; n * n];
    for (k, &(i, j)) in unknowns.iter().enumerate() {
        pos[i * n + j] = k;
    }
    let mut eb = EchelonBuilder::new(field, unknowns.len());
    for a in 0..n {
        for c in 0..n {
            // b(d eₐ, e_c) + (−1)^{π pₐ} b(eₐ, d e_c)
            let s = field.sign(parity & parities[a] == 1);
            let mut row: Vec<(usize, u32)> = Vec::new();
            for i in 0..n {
                let k = pos[i * n + a];
                if k != usize::MAX && b[i * n + c] != 0 {
                    row.push((k, b[i * n + c]));
                }
                let k = pos[i * n + c];
                if k != usize::MAX && b[a * n + i] != 0 {
                    row.push((k, field.mul(s, b[a * n + i])));
                }
            }
            let mut dense = vec![0; unknowns.len()];
            for (k, v) in row {
                dense[k] = field.add(dense[k], v);
            }
            eb.push_dense(&dense);
        }
    }
    eb.kernel()
        .into_iter()
        .map(|x| {
            let mut m = FieldMatrix::zeros(field, n, n);
            for (k, &(i, j)) in unknowns.iter().enumerate() {
                m.set(i, j, x[k]);
            }
            m
        })
        .collect()
}

/// Orthosymplectic Lie superalgebra of the norm of `s`.
pub fn osp(s: &CompositionSuperalgebra) -> Result<Osp> {
    let f = s.field();
    let n = s.dim();
    if s.form_rank() < n {
        return Err(Error::DegenerateForm);
    }
    let parities = s.space().parities().to_vec();
    let mut flats = Vec::new();
    for par in [0u8, 1] {
        for m in skew_maps(f, &parities, &s.norm.b, par) {
            flats.push((par, m.data().to_vec()));
        }
    }
    MapAlgebra::from_flats(s.space(), "o", flats)
}

/// A triple `(d₀, d₁, d₂)` of homogeneous maps of one parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialityElement {
    pub d: [FieldMatrix; 3],
    pub parity: u8,
}

impl TrialityElement {
    pub fn flatten(&self) -> Vec<u32> {
        flatten(&[&self.d[0], &self.d[1], &self.d[2]])
    }

    /// Componentwise supercommutator.
    pub fn bracket(&self, other: &TrialityElement) -> TrialityElement {
        TrialityElement {
            d: std::array::from_fn(|i| supercommutator_matrices(&self.d[i], self.parity, &other.d[i], other.parity)),
            parity: self.parity ^ other.parity,
        }
    }

    pub fn scale(&self, c: u32) -> TrialityElement {
        TrialityElement {
            d: std::array::from_fn(|i| self.d[i].scale(c)),
            parity: self.parity,
        }
    }
}

/// `θ: (d₀, d₁, d₂) ↦ (d₂, d₀, d₁)`.
pub fn theta(t: &TrialityElement) -> TrialityElement {
    TrialityElement {
        d: [t.d[2].clone(), t.d[0].clone(), t.d[1].clone()],
        parity: t.parity,
    }
}

/// `θⁱ`.
pub fn theta_pow(t: &TrialityElement, i: usize) -> TrialityElement {
    (0..i % 3).fold(t.clone(), |acc, _| theta(&acc))
}

/// `d₀(x•y) = d₁(x)•y + (−1)^{|d||x|} x•d₂(y)` on basis pairs, plus
/// skewness of each component.
pub fn check_triality(s: &CompositionSuperalgebra, t: &TrialityElement) -> Check {
    let f = s.field();
    let n = s.dim();
    for (c, d) in t.d.iter().enumerate() {
        crate::structconst::check_form_skew(f, s.space().parities(), &s.norm.b, d, t.parity).map_err(|mut w| {
            w.detail = format!("component {c}: {}", w.detail);
            w
        })?;
    }
    let img: [Vec<Vec<u32>>; 3] = std::array::from_fn(|c| (0..n).map(|j| t.d[c].column(j)).collect());
    for x in 0..n {
        for y in 0..n {
            let ex = s.basis_vector(x);
            let ey = s.basis_vector(y);
            let lhs = t.d[0].mul_vec(&s.mul(&ex, &ey)).expect("square");
            let r1 = s.mul(&img[1][x], &ey);
            let r2 = s.mul(&ex, &img[2][y]);
            let sg = f.sign(t.parity & s.parity(x) == 1);
            let defect: Vec<u32> = (0..n)
                .map(|k| f.sub(f.sub(lhs[k], r1[k]), f.mul(sg, r2[k])))
                .collect();
            if defect.iter().any(|&c| c != 0) {
                return Err(Witness::new(vec![x, y], sparsify(&defect), "triality relation"));
            }
        }
    }
    Ok(())
}

/// `σ_{x,y}(z) = (−1)^{yz} b(x,z) y − (−1)^{x(y+z)} b(y,z) x`.
pub fn sigma_xy(s: &CompositionSuperalgebra, x: &[u32], y: &[u32]) -> Result<HomogeneousMap> {
    let f = s.field();
    let n = s.dim();
    let (px, py) = homogeneous_pair(s, x, y)?;
    let mut m = FieldMatrix::zeros(f, n, n);
    for z in 0..n {
        let pz = s.parity(z);
        let ez = s.basis_vector(z);
        let c1 = f.mul(f.sign(py & pz == 1), s.bv(x, &ez));
        let c2 = f.mul(f.sign(px & (py ^ pz) == 1), s.bv(y, &ez));
        for k in 0..n {
            m.set(k, z, f.sub(f.mul(c1, y[k]), f.mul(c2, x[k])));
        }
    }
    HomogeneousMap::new(s.space().clone(), s.space().clone(), px ^ py, m)
}

fn homogeneous_pair(s: &CompositionSuperalgebra, x: &[u32], y: &[u32]) -> Result<(u8, u8)> {
    let px = s.space().vector_parity(x).ok_or(Error::ParityViolation)?;
    let py = s.space().vector_parity(y).ok_or(Error::ParityViolation)?;
    Ok((px, py))
}

/// `l_x(z) = x•z`.
fn left_map(s: &CompositionSuperalgebra, x: &[u32]) -> FieldMatrix {
    let n = s.dim();
    let cols: Vec<Vec<u32>> = (0..n).map(|j| s.mul(x, &s.basis_vector(j))).collect();
    FieldMatrix::from_columns(s.field(), n, &cols)
}

/// `r_x(z) = (−1)^{xz} z•x`.
fn right_map(s: &CompositionSuperalgebra, x: &[u32], px: u8) -> FieldMatrix {
    let f = s.field();
    let n = s.dim();
    let cols: Vec<Vec<u32>> = (0..n)
        .map(|j| {
            let sg = f.sign(px & s.parity(j) == 1);
            s.mul(&s.basis_vector(j), x).into_iter().map(|c| f.mul(sg, c)).collect()
        })
        .collect();
    FieldMatrix::from_columns(f, n, &cols)
}

/// `t_{x,y} = (σ_{x,y}, ½b(x,y)1 − r_x l_y, ½b(x,y)1 − l_x r_y)`.
pub fn t_xy(s: &CompositionSuperalgebra, x: &[u32], y: &[u32]) -> Result<TrialityElement> {
    let f = s.field();
    let n = s.dim();
    let (px, py) = homogeneous_pair(s, x, y)?;
    let sigma = sigma_xy(s, x, y)?.matrix;
    let scalar = FieldMatrix::identity(f, n).scale(f.mul(f.half(), s.bv(x, y)));
    let rl = right_map(s, x, px).mul(&left_map(s, y))?;
    let lr = left_map(s, x).mul(&right_map(s, y, py))?;
    Ok(TrialityElement {
        d: [sigma, scalar.sub(&rl)?, scalar.sub(&lr)?],
        parity: px ^ py,
    })
}

/// `tri(S)` with its bracket table and a coordinate solver.
#[derive(Clone, Debug)]
pub struct TrialityAlgebra {
    pub s: CompositionSuperalgebra,
    /// Structure constants in the basis [`Self::elements`].
    pub algebra: SuperAlgebra,
    pub elements: Vec<TrialityElement>,
    basis: MapBasis,
}

impl TrialityAlgebra {
    pub fn field(&self) -> Field {
        self.s.field()
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn coordinates(&self, t: &TrialityElement) -> Option<Vec<u32>> {
        debug_assert_eq!(self.basis.comps(), 3);
        self.basis.coordinates(&t.flatten())
    }

    pub fn contains(&self, t: &TrialityElement) -> bool {
        self.coordinates(t).is_some()
    }

    /// The element with coordinates `c`.
    pub fn element(&self, c: &[u32]) -> TrialityElement {
        let f = self.field();
        let n = self.s.dim();
        let mut d: [FieldMatrix; 3] = std::array::from_fn(|_| FieldMatrix::zeros(f, n, n));
        let mut parity = 0;
        for (k, &a) in c.iter().enumerate() {
            if a != 0 {
                parity = self.elements[k].parity;
                for i in 0..3 {
                    d[i] = d[i].add(&self.elements[k].d[i].scale(a)).expect("square");
                }
            }
        }
        TrialityElement { d, parity }
    }

    /// Coordinates of `θ(tₖ)` for each basis element `tₖ`.
    pub fn theta_table(&self) -> Vec<SparseVec> {
        self.elements
            .iter()
            .map(|t| sparsify(&self.coordinates(&theta(t)).expect("tri is θ-stable")))
            .collect()
    }

    /// Coordinates of `θⁱ(t_{eₐ,e_b})` at `[i][a·n + b]`.
    pub fn t_table(&self) -> Result<[Vec<SparseVec>; 3]> {
        let n = self.s.dim();
        let mut out: [Vec<SparseVec>; 3] = Default::default();
        for a in 0..n {
            for b in 0..n {
                let t = t_xy(&self.s, &self.s.basis_vector(a), &self.s.basis_vector(b))?;
                for (i, slot) in out.iter_mut().enumerate() {
                    let ti = theta_pow(&t, i);
                    let c = self
                        .coordinates(&ti)
                        .ok_or_else(|| Error::AxiomFailure(format!("t_{{{a},{b}}} outside tri")))?;
                    slot.push(sparsify(&c));
                }
            }
        }
        Ok(out)
    }
}

/// `tri(S)`, solved as one kernel over triples in `osp(S,q)³`.
pub fn tri(s: &CompositionSuperalgebra) -> Result<TrialityAlgebra> {
    check_symmetric_composition(s).map_err(|w| Error::NotSymmetricComposition(w.to_string()))?;
    let f = s.field();
    let n = s.dim();
    let o = osp(s)?;
    let e: Vec<Vec<u32>> = (0..n).map(|i| s.basis_vector(i)).collect();
    let prod: Vec<Vec<u32>> = (0..n * n).map(|ij| s.mul(&e[ij / n], &e[ij % n])).collect();
    let mut flats = Vec::new();
    for par in [0u8, 1] {
        let maps: Vec<&FieldMatrix> = o.maps.iter().filter(|m| m.parity == par).map(|m| &m.matrix).collect();
        let m = maps.len();
        if m == 0 {
            continue;
        }
        let mut eb = EchelonBuilder::new(f, 3 * m);
        for x in 0..n {
            for y in 0..n {
                let sg = f.sign(par & s.parity(x) == 1);
                let cols: Vec<[Vec<u32>; 3]> = maps
                    .iter()
                    .map(|d| {
                        [
                            d.mul_vec(&prod[x * n + y]).expect("square"),
                            s.mul(&d.column(x), &e[y]),
                            s.mul(&e[x], &d.column(y)),
                        ]
                    })
                    .collect();
                for k in 0..n {
                    let mut row = vec![0; 3 * m];
                    for (a, c) in cols.iter().enumerate() {
                        row[a] = c[0][k];
                        row[m + a] = f.neg(c[1][k]);
                        row[2 * m + a] = f.neg(f.mul(sg, c[2][k]));
                    }
                    eb.push_dense(&row);
                }
            }
        }
        for x in eb.kernel() {
            let comp = |c: usize| {
                let mut acc = FieldMatrix::zeros(f, n, n);
                for (a, d) in maps.iter().enumerate() {
                    if x[c * m + a] != 0 {
                        acc = acc.add(&d.scale(x[c * m + a])).expect("square");
                    }
                }
                acc
            };
            let t = TrialityElement {
                d: [comp(0), comp(1), comp(2)],
                parity: par,
            };
            flats.push((par, t.flatten()));
        }
    }
    let basis = MapBasis::new(f, s.space().parities(), 3, flats);
    let par_of: Vec<u8> = (0..basis.dim()).map(|k| u8::from(k >= basis.dim_even())).collect();
    let elements: Vec<TrialityElement> = basis
        .flats()
        .iter()
        .zip(&par_of)
        .map(|(v, &parity)| TrialityElement {
            d: std::array::from_fn(|c| unflatten(f, n, v, c)),
            parity,
        })
        .collect();
    let mut table = Vec::with_capacity(elements.len() * elements.len());
    for (a, ta) in elements.iter().enumerate() {
        for (c, tc) in elements.iter().enumerate() {
            let coords = basis
                .coordinates(&ta.bracket(tc).flatten())
                .ok_or_else(|| Error::AxiomFailure(format!("tri not closed at ({a}, {c})")))?;
            table.push(sparsify(&coords));
        }
    }
    let algebra = SuperAlgebra::new(labelled_space(f, "t", &par_of)?, table)?;
    Ok(TrialityAlgebra {
        s: s.clone(),
        algebra,
        elements,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::symmetric_by_name;
    use crate::structconst::{check_super_jacobi, Simplicity};
    use crate::superlinear::SuperSpace;
    use crate::superlinear::SuperDim;

    fn gf(p: u32) -> Field {
        Field::new(p).unwrap()
    }

    fn sd(a: usize, b: usize) -> SuperDim {
        SuperDim::new(a, b)
    }

    #[test]
    fn osp_dimensions() {
        let f = gf(3);
        let s8 = symmetric_by_name("S8", f).unwrap();
        let o = osp(&s8).unwrap();
        assert_eq!(o.algebra.superdim(), sd(28, 0));
        assert_eq!(check_super_jacobi(&o.algebra), Ok(()));
        let s12 = symmetric_by_name("S1.2", f).unwrap();
        assert_eq!(osp(&s12).unwrap().algebra.superdim(), sd(3, 2));
        let s42 = symmetric_by_name("S4.2", f).unwrap();
        assert_eq!(osp(&s42).unwrap().algebra.superdim(), sd(9, 8));
    }

    #[test]
    fn osp_of_symplectic_plane_is_sp2() {
        let f = gf(5);
        let space = SuperSpace::from_parts(f, &[], &["u", "v"]).unwrap();
        let alg = SuperAlgebra::new(space, vec![Vec::new(); 4]).unwrap();
        let b = vec![0, 1, f.neg(1), 0];
        let c = CompositionSuperalgebra {
            name: "V".into(),
            algebra: alg.with_form(b.clone()).unwrap(),
            norm: crate::composition::QuadraticSuperform { q0: Vec::new(), b },
            unit: None,
            symmetric: false,
            hurwitz: None,
        };
        assert_eq!(osp(&c).unwrap().algebra.superdim(), sd(3, 0));
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let f = gf(3);
        let mut s = symmetric_by_name("S2", f).unwrap();
        s.norm.b = vec![0; 4];
        assert!(matches!(osp(&s), Err(Error::DegenerateForm)));
    }

    #[test]
    fn triality_dimensions() {
        let f = gf(3);
        for (name, dim) in [
            ("S1", sd(0, 0)),
            ("S2", sd(2, 0)),
            ("S4", sd(9, 0)),
            ("S8", sd(28, 0)),
            ("S1.2", sd(3, 2)),
            ("S4.2", sd(9, 8)),
        ] {
            let s = symmetric_by_name(name, f).unwrap();
            let t = tri(&s).unwrap();
            assert_eq!(t.algebra.superdim(), dim, "{name}");
            assert_eq!(check_super_jacobi(&t.algebra), Ok(()), "{name}");
            for e in &t.elements {
                assert_eq!(check_triality(&s, e), Ok(()), "{name}");
            }
        }
    }

    #[test]
    fn tri_s12_is_diagonal() {
        let s = symmetric_by_name("S1.2", gf(3)).unwrap();
        let t = tri(&s).unwrap();
        for e in &t.elements {
            assert_eq!(e.d[0], e.d[1]);
            assert_eq!(e.d[1], e.d[2]);
            assert_eq!(&theta(e), e);
        }
    }

    #[test]
    fn theta_is_an_automorphism_of_order_three() {
        let f = gf(3);
        let s = symmetric_by_name("S8", f).unwrap();
        let t = tri(&s).unwrap();
        let th = t.theta_table();
        let image = |c: &[(usize, u32)]| {
            let mut out = vec![0; t.dim()];
            for &(k, a) in c {
                crate::ff::accumulate(f, &mut out, &th[k], a);
            }
            out
        };
        for a in 0..t.dim() {
            for b in 0..t.dim() {
                let lhs = image(t.algebra.product(a, b));
                let rhs = t
                    .algebra
                    .mul(&crate::ff::densify(&th[a], t.dim()), &crate::ff::densify(&th[b], t.dim()));
                assert_eq!(lhs, rhs);
            }
        }
        let mut state = 7u64;
        for _ in 0..20 {
            let c: Vec<u32> = (0..t.dim())
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                    ((state >> 33) % 3) as u32
                })
                .collect();
            let x = t.element(&c);
            assert_eq!(theta_pow(&x, 3), x);
            assert_eq!(check_triality(&s, &theta(&x)), Ok(()));
        }
    }

    #[test]
    fn t_elements_and_their_theta_images_span_tri() {
        let f = gf(3);
        for (name, t_only) in [("S4", 6), ("S8", 28), ("S1.2", 5), ("S4.2", 17)] {
            let s = symmetric_by_name(name, f).unwrap();
            let t = tri(&s).unwrap();
            let table = t.t_table().unwrap();
            let mut eb = EchelonBuilder::new(f, t.dim());
            for c in &table[0] {
                eb.push_sparse(c);
            }
            let r0 = eb.rank();
            for c in table[1].iter().chain(&table[2]) {
                eb.push_sparse(c);
            }
            assert_eq!(r0, t_only, "{name}");
            assert_eq!(eb.rank(), t.dim(), "{name}");
        }
    }

    #[test]
    fn t_xy_examples() {
        let f = gf(3);
        let s = symmetric_by_name("S8", f).unwrap();
        let e1 = s.basis_vector(0);
        let e2 = s.basis_vector(1);
        let t = tri(&s).unwrap();
        let t12 = t_xy(&s, &e1, &e2).unwrap();
        assert!(t.contains(&t12));
        // σ_{x,x} = 0 for an isotropic even x
        let s11 = sigma_xy(&s, &e1, &e1).unwrap();
        assert!(s11.matrix.is_zero());
        // bilinear in the first argument
        let x = vec![1, 0, 2, 0, 0, 0, 1, 0];
        let y = s.basis_vector(5);
        let lhs = t_xy(&s, &x, &y).unwrap();
        let mut acc = t_xy(&s, &e1, &y).unwrap().flatten();
        for (k, &c) in x.iter().enumerate().skip(1) {
            if c != 0 {
                let part = t_xy(&s, &s.basis_vector(k), &y).unwrap().scale(c).flatten();
                for (a, b) in acc.iter_mut().zip(part) {
                    *a = f.add(*a, b);
                }
            }
        }
        assert_eq!(lhs.flatten(), acc);
        let s12 = symmetric_by_name("S1.2", f).unwrap();
        assert!(matches!(t_xy(&s12, &[1, 0, 0], &[1, 1, 0]), Err(Error::ParityViolation)));
    }

    #[test]
    fn first_projection_is_injective_on_tri_s8() {
        let f = gf(3);
        let s = symmetric_by_name("S8", f).unwrap();
        let t = tri(&s).unwrap();
        let mut eb = EchelonBuilder::new(f, 64);
        for e in &t.elements {
            eb.push_dense(e.d[0].data());
        }
        assert_eq!(eb.rank(), 28);
    }

    #[test]
    fn non_symmetric_input_is_rejected() {
        let c = crate::composition::split_hurwitz(8, gf(3)).unwrap();
        assert!(matches!(tri(&c), Err(Error::NotSymmetricComposition(_))));
    }

    #[test]
    fn tri_s8_is_simple() {
        let s = symmetric_by_name("S8", gf(5)).unwrap();
        let t = tri(&s).unwrap();
        assert_eq!(t.dim(), 28);
        assert!(matches!(crate::structconst::is_simple(&t.algebra), Simplicity::Simple));
    }
}
