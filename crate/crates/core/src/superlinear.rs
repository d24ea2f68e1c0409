//! Superspaces, homogeneous maps, Koszul signs, and the solver for spaces of
//! homogeneous maps cut out by linear conditions on their entries.

use crate::error::{Error, Result};
use crate::ff::{EchelonBuilder, Field, FieldMatrix};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// Superdimension `even|odd`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuperDim {
    pub even: usize,
    pub odd: usize,
}

impl SuperDim {
    pub const fn new(even: usize, odd: usize) -> SuperDim {
        SuperDim { even, odd }
    }

    pub fn total(self) -> usize {
        self.even + self.odd
    }
}

impl fmt::Display for SuperDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.even, self.odd)
    }
}

/// `(-1)^{Σ aᵢbᵢ}` for the given parity pairs, as a residue.
pub fn koszul_sign(field: Field, pairs: &[(u8, u8)]) -> u32 {
    field.sign(koszul_odd(pairs))
}

/// Whether `Σ aᵢbᵢ` is odd.
#[inline]
pub fn koszul_odd(pairs: &[(u8, u8)]) -> bool {
    pairs.iter().fold(0u8, |acc, &(a, b)| acc ^ (a & b)) & 1 == 1
}

/// A finite homogeneous basis with labels; even elements come first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuperSpace {
    field: Field,
    labels: Vec<String>,
    parities: Vec<u8>,
}

impl SuperSpace {
    pub fn new(field: Field, basis: Vec<(String, u8)>) -> Result<SuperSpace> {
        let mut seen = HashSet::new();
        let mut odd_started = false;
        for (label, parity) in &basis {
            if *parity > 1 {
                return Err(Error::InvalidBasis(format!("parity {parity} of `{label}`")));
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidBasis(format!("duplicate label `{label}`")));
            }
            if *parity == 1 {
                odd_started = true;
            } else if odd_started {
                return Err(Error::InvalidBasis(format!("even `{label}` listed after an odd element")));
            }
        }
        let (labels, parities) = basis.into_iter().unzip();
        Ok(SuperSpace {
            field,
            labels,
            parities,
        })
    }

    /// Builds a space from basis elements in any order, moving the even ones
    /// first while keeping the relative order within each parity. Returns
    /// the space and, for each input position, its index in the space.
    pub fn partitioned(field: Field, basis: Vec<(String, u8)>) -> Result<(SuperSpace, Vec<usize>)> {
        let order = even_first_order(basis.iter().map(|b| b.1));
        let mut position = vec![0; basis.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let sorted = order.iter().map(|&i| basis[i].clone()).collect();
        Ok((SuperSpace::new(field, sorted)?, position))
    }

    pub fn from_parts(field: Field, even: &[&str], odd: &[&str]) -> Result<SuperSpace> {
        let basis = even
            .iter()
            .map(|l| (l.to_string(), 0))
            .chain(odd.iter().map(|l| (l.to_string(), 1)))
            .collect();
        SuperSpace::new(field, basis)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn superdim(&self) -> SuperDim {
        let odd = self.parities.iter().filter(|&&p| p == 1).count();
        SuperDim::new(self.dim() - odd, odd)
    }

    #[inline]
    pub fn parity(&self, i: usize) -> u8 {
        self.parities[i]
    }

    pub fn parities(&self) -> &[u8] {
        &self.parities
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Parity of a coordinate vector, or `None` if it is not homogeneous.
    /// The zero vector counts as even.
    pub fn vector_parity(&self, v: &[u32]) -> Option<u8> {
        let mut parity = None;
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                match parity {
                    None => parity = Some(self.parities[i]),
                    Some(q) if q != self.parities[i] => return None,
                    _ => {}
                }
            }
        }
        Some(parity.unwrap_or(0))
    }
}

/// Stable permutation listing even positions before odd ones.
pub fn even_first_order(parities: impl Iterator<Item = u8> + Clone) -> Vec<usize> {
    let even = parities.clone().enumerate().filter(|p| p.1 == 0).map(|p| p.0);
    let odd = parities.enumerate().filter(|p| p.1 == 1).map(|p| p.0);
    even.chain(odd).collect()
}

/// `U ⊗ W` with its correspondence to index pairs.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub space: SuperSpace,
    /// Position in `space` of the pair `(i, j)`, stored at `i * dim W + j`.
    pub index: Vec<usize>,
    /// Pair `(i, j)` at each position of `space`.
    pub pairs: Vec<(usize, usize)>,
    right_dim: usize,
}

impl Tensor {
    pub fn position(&self, i: usize, j: usize) -> usize {
        self.index[i * self.right_dim + j]
    }
}

/// Tensor product. Pairs are enumerated lexicographically and then the even
/// pairs are moved ahead of the odd ones, keeping lexicographic order within
/// each parity.
pub fn tensor(u: &SuperSpace, w: &SuperSpace) -> Result<Tensor> {
    if u.field != w.field {
        return Err(Error::ModulusMismatch(u.field.p(), w.field.p()));
    }
    let mut basis = Vec::with_capacity(u.dim() * w.dim());
    for i in 0..u.dim() {
        for j in 0..w.dim() {
            basis.push((format!("{}⊗{}", u.label(i), w.label(j)), u.parity(i) ^ w.parity(j)));
        }
    }
    let (space, index) = SuperSpace::partitioned(u.field, basis)?;
    let mut pairs = vec![(0, 0); space.dim()];
    for i in 0..u.dim() {
        for j in 0..w.dim() {
            pairs[index[i * w.dim() + j]] = (i, j);
        }
    }
    Ok(Tensor {
        space,
        index,
        pairs,
        right_dim: w.dim(),
    })
}

/// A homogeneous linear map; column `j` of the matrix is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousMap {
    pub source: SuperSpace,
    pub target: SuperSpace,
    pub parity: u8,
    pub matrix: FieldMatrix,
}

impl HomogeneousMap {
    pub fn new(source: SuperSpace, target: SuperSpace, parity: u8, matrix: FieldMatrix) -> Result<HomogeneousMap> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim() * source.dim(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        for r in 0..matrix.rows() {
            for c in 0..matrix.cols() {
                if matrix.get(r, c) != 0 && target.parity(r) != source.parity(c) ^ parity {
                    return Err(Error::ParityViolation);
                }
            }
        }
        Ok(HomogeneousMap {
            source,
            target,
            parity,
            matrix,
        })
    }

    pub fn zero(source: SuperSpace, target: SuperSpace, parity: u8) -> HomogeneousMap {
        let matrix = FieldMatrix::zeros(source.field(), target.dim(), source.dim());
        HomogeneousMap {
            source,
            target,
            parity,
            matrix,
        }
    }

    pub fn apply(&self, v: &[u32]) -> Result<Vec<u32>> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &HomogeneousMap) -> Result<HomogeneousMap> {
        if other.target != self.source {
            return Err(Error::DimensionMismatch {
                expected: self.source.dim(),
                found: other.target.dim(),
            });
        }
        Ok(HomogeneousMap {
            source: other.source.clone(),
            target: self.target.clone(),
            parity: self.parity ^ other.parity,
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }

    /// `[A, B] = AB − (−1)^{|A||B|} BA` for endomorphisms of one space.
    pub fn supercommutator(&self, other: &HomogeneousMap) -> Result<HomogeneousMap> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        let f = self.source.field();
        let s = koszul_sign(f, &[(self.parity, other.parity)]);
        Ok(HomogeneousMap {
            matrix: ab.matrix.sub(&ba.matrix.scale(s))?,
            ..ab
        })
    }

    /// `Σ_even Mᵢᵢ − Σ_odd Mᵢᵢ`.
    pub fn supertrace(&self) -> u32 {
        let f = self.source.field();
        (0..self.source.dim().min(self.target.dim())).fold(0, |acc, i| {
            let v = self.matrix.get(i, i);
            if self.source.parity(i) == 0 {
                f.add(acc, v)
            } else {
                f.sub(acc, v)
            }
        })
    }
}

/// Supertrace of a square matrix whose basis has the given parities.
pub fn supertrace_of(field: Field, m: &FieldMatrix, parities: &[u8]) -> u32 {
    (0..m.rows()).fold(0, |acc, i| {
        if parities[i] == 0 {
            field.add(acc, m.get(i, i))
        } else {
            field.sub(acc, m.get(i, i))
        }
    })
}

/// One linear condition `Σ c · M[row][col] = rhs` on a map's entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, usize, u32)>,
    pub rhs: u32,
}

impl LinearConstraint {
    pub fn homogeneous(terms: Vec<(usize, usize, u32)>) -> LinearConstraint {
        LinearConstraint { terms, rhs: 0 }
    }
}

/// Solution set of [`constrained_map_space`]: `particular + span(basis)`,
/// where `particular` is absent for homogeneous constraints.
#[derive(Clone, Debug)]
pub struct MapSpace {
    pub particular: Option<HomogeneousMap>,
    pub basis: Vec<HomogeneousMap>,
}

/// Indexing of the entries a homogeneous map of given parity may use.
#[derive(Clone, Debug)]
pub struct MapUnknowns {
    pub rows: usize,
    pub cols: usize,
    index: Vec<usize>,
    entries: Vec<(usize, usize)>,
}

impl MapUnknowns {
    pub fn homogeneous(source: &SuperSpace, target: &SuperSpace, parity: u8) -> MapUnknowns {
        MapUnknowns::filtered(source, target, parity, |_, _| true)
    }

    /// Parity-allowed entries `(row, col)` for which `keep(row, col)` holds.
    pub fn filtered(
        source: &SuperSpace,
        target: &SuperSpace,
        parity: u8,
        keep: impl Fn(usize, usize) -> bool,
    ) -> MapUnknowns {
        let (rows, cols) = (target.dim(), source.dim());
        let mut index = vec![usize::MAX; rows * cols];
        let mut entries = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if target.parity(r) == source.parity(c) ^ parity && keep(r, c) {
                    index[r * cols + c] = entries.len();
                    entries.push((r, c));
                }
            }
        }
        MapUnknowns {
            rows,
            cols,
            index,
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Unknown index of entry `(row, col)`, if it is free.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Option<usize> {
        let i = self.index[row * self.cols + col];
        (i != usize::MAX).then_some(i)
    }

    pub fn entry(&self, k: usize) -> (usize, usize) {
        self.entries[k]
    }

    /// Scatters a solution vector into a dense matrix.
    pub fn to_matrix(&self, field: Field, x: &[u32]) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(field, self.rows, self.cols);
        for (k, &(r, c)) in self.entries.iter().enumerate() {
            m.set(r, c, x[k]);
        }
        m
    }
}

/// All homogeneous maps `source → target` of the given parity whose entries
/// satisfy every constraint. Entries outside the parity blocks are zero by
/// definition, so constraint terms on them are dropped.
pub fn constrained_map_space(
    source: &SuperSpace,
    target: &SuperSpace,
    parity: u8,
    constraints: &[LinearConstraint],
) -> Result<MapSpace> {
    let field = source.field();
    if target.field() != field {
        return Err(Error::ModulusMismatch(field.p(), target.field().p()));
    }
    let unknowns = MapUnknowns::homogeneous(source, target, parity);
    let n = unknowns.len();
    let affine = constraints.iter().any(|c| c.rhs % field.p() != 0);
    // The right-hand side rides along as an extra last column.
    let width = n + usize::from(affine);
    let mut eb = EchelonBuilder::new(field, width);
    for c in constraints {
        if c.terms.iter().any(|&(r, col, _)| r >= unknowns.rows || col >= unknowns.cols) {
            return Err(Error::DimensionMismatch {
                expected: unknowns.rows * unknowns.cols,
                found: c.terms.len(),
            });
        }
        let mut row: Vec<(usize, u32)> = c
            .terms
            .iter()
            .filter_map(|&(r, col, v)| unknowns.get(r, col).map(|k| (k, v % field.p())))
            .collect();
        if affine {
            row.push((n, field.neg(c.rhs % field.p())));
        }
        eb.push_sparse(&row);
    }
    let make = |x: &[u32]| HomogeneousMap {
        source: source.clone(),
        target: target.clone(),
        parity,
        matrix: unknowns.to_matrix(field, x),
    };
    if !affine {
        let basis = eb.kernel().iter().map(|x| make(x)).collect();
        return Ok(MapSpace {
            particular: None,
            basis,
        });
    }
    // With the rhs column last, the kernel vectors with last entry 1 give
    // the affine solutions; if the rhs column is a pivot there is none.
    let kernel = eb.kernel();
    let Some(part) = kernel.iter().find(|x| x[n] != 0) else {
        return Err(Error::NoSolution);
    };
    let scale = field.inv(part[n]).expect("nonzero");
    let particular: Vec<u32> = part[..n].iter().map(|&v| field.mul(v, scale)).collect();
    let basis = kernel
        .iter()
        .filter(|x| x[n] == 0)
        .map(|x| make(&x[..n]))
        .collect();
    Ok(MapSpace {
        particular: Some(make(&particular)),
        basis,
    })
}

/// Canonical bases of spaces of tuples of `n × n` matrices, split by parity.
///
/// A tuple is flattened as `c·n² + i·n + j` for entry `(i, j)` of component
/// `c`; the parity of that position is `pᵢ + pⱼ`. The stored basis is the
/// reduced echelon basis of each parity, evens first.
#[derive(Clone, Debug)]
pub struct MapBasis {
    field: Field,
    parities: Vec<u8>,
    comps: usize,
    even: EchelonBuilder,
    odd: EchelonBuilder,
}

impl MapBasis {
    pub fn new(field: Field, parities: &[u8], comps: usize, flats: impl IntoIterator<Item = (u8, Vec<u32>)>) -> MapBasis {
        let n = parities.len();
        let len = comps * n * n;
        let mut even = EchelonBuilder::new(field, len);
        let mut odd = EchelonBuilder::new(field, len);
        for (par, v) in flats {
            if par == 0 {
                even.push_dense(&v);
            } else {
                odd.push_dense(&v);
            }
        }
        MapBasis {
            field,
            parities: parities.to_vec(),
            comps,
            even,
            odd,
        }
    }

    fn position_parity(&self, k: usize) -> u8 {
        let n = self.parities.len();
        let r = k % (n * n);
        self.parities[r / n] ^ self.parities[r % n]
    }

    pub fn dim_even(&self) -> usize {
        self.even.rank()
    }

    pub fn dim_odd(&self) -> usize {
        self.odd.rank()
    }

    pub fn dim(&self) -> usize {
        self.even.rank() + self.odd.rank()
    }

    /// Basis in flattened form, evens first.
    pub fn flats(&self) -> Vec<Vec<u32>> {
        let mut v = self.even.basis();
        v.extend(self.odd.basis());
        v
    }

    /// Coordinates of a flattened tuple, if it lies in the span.
    pub fn coordinates(&self, flat: &[u32]) -> Option<Vec<u32>> {
        let mut e = vec![0; flat.len()];
        let mut o = vec![0; flat.len()];
        for (k, &c) in flat.iter().enumerate() {
            if self.position_parity(k) == 0 {
                e[k] = c;
            } else {
                o[k] = c;
            }
        }
        if self.even.residue(&e).iter().any(|&c| c != 0) || self.odd.residue(&o).iter().any(|&c| c != 0) {
            return None;
        }
        let p = self.field.p();
        let mut out: Vec<u32> = self.even.pivot_cols().into_iter().map(|c| e[c] % p).collect();
        out.extend(self.odd.pivot_cols().into_iter().map(|c| o[c] % p));
        Some(out)
    }

    pub fn comps(&self) -> usize {
        self.comps
    }
}

pub fn flatten(ms: &[&FieldMatrix]) -> Vec<u32> {
    let mut v = Vec::new();
    for m in ms {
        v.extend_from_slice(m.data());
    }
    v
}

pub fn unflatten(field: Field, n: usize, flat: &[u32], c: usize) -> FieldMatrix {
    FieldMatrix::from_data(field, n, n, flat[c * n * n..(c + 1) * n * n].to_vec()).expect("square block")
}

/// `AB − (−1)^{|A||B|} BA`.
pub fn supercommutator_matrices(a: &FieldMatrix, pa: u8, b: &FieldMatrix, pb: u8) -> FieldMatrix {
    let ab = a.mul(b).expect("square");
    let ba = b.mul(a).expect("square");
    if pa & pb == 1 {
        ab.add(&ba).expect("square")
    } else {
        ab.sub(&ba).expect("square")
    }
}

/// Space with labels `prefix0, prefix1, …`; parities must already be even-first.
pub fn labelled_space(field: Field, prefix: &str, parities: &[u8]) -> Result<SuperSpace> {
    SuperSpace::new(
        field,
        parities.iter().enumerate().map(|(i, &p)| (format!("{prefix}{i}"), p)).collect(),
    )
}
