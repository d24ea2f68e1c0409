//! The cubic Jordan algebra `H₃(C,*) = (⊕ keᵢ) ⊕ (⊕ ιᵢ(S))`, its trace,
//! spur and norm, the orthogonal triple system `Ĵ = J₀/k1`, and the Peirce
//! 1-space subsystem `T_{2S}`.

use crate::composition::CompositionSuperalgebra;
use crate::error::{Error, Result};
use crate::ff::{Field, FieldMatrix};
use crate::structconst::{Subspace, SuperAlgebra};
use crate::superlinear::SuperSpace;
use crate::triples::{Flavor, TripleSystem};

/// `H₃(C,*)` built over a purely even para-Hurwitz algebra `S`.
#[derive(Clone, Debug)]
pub struct CubicJordan {
    pub s: CompositionSuperalgebra,
    /// Basis `e₀, e₁, e₂`, then `ι₀(S)`, `ι₁(S)`, `ι₂(S)`.
    pub algebra: SuperAlgebra,
    pub unit: Vec<u32>,
}

impl CubicJordan {
    pub fn field(&self) -> Field {
        self.s.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Index of `ιᵢ(s_a)`.
    pub fn iota(&self, i: usize, a: usize) -> usize {
        3 + (i % 3) * self.s.dim() + a
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        self.algebra.mul(x, y)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        self.algebra.basis_vector(i)
    }

    /// `t(x) = α₀ + α₁ + α₂`.
    pub fn trace(&self, x: &[u32]) -> u32 {
        let f = self.field();
        f.add(f.add(x[0], x[1]), x[2])
    }

    /// `t(x, y) = t(x∘y)`.
    pub fn trace_form(&self, x: &[u32], y: &[u32]) -> u32 {
        self.trace(&self.mul(x, y))
    }

    /// Spur `s(x) = ½(t(x)² − t(x∘x))`; equals `−½t(x∘²)` on `J₀`.
    pub fn spur(&self, x: &[u32]) -> u32 {
        let f = self.field();
        let t = self.trace(x);
        f.mul(f.half(), f.sub(f.mul(t, t), self.trace_form(x, x)))
    }

    fn component(&self, x: &[u32], i: usize) -> Vec<u32> {
        let n = self.s.dim();
        x[3 + i * n..3 + (i + 1) * n].to_vec()
    }

    /// Cubic norm `n(x) = α₀α₁α₂ − 4Σαᵢq(aᵢ) + 8b(a₀•a₁, a₂)` for
    /// `x = Σαᵢeᵢ + Σιᵢ(aᵢ)`; the powers of 2 come from the factor 2 in
    /// `ιᵢ`, and vanish mod 3.
    pub fn norm(&self, x: &[u32]) -> u32 {
        let f = self.field();
        let a: Vec<Vec<u32>> = (0..3).map(|i| self.component(x, i)).collect();
        let mut n = f.mul(f.mul(x[0], x[1]), x[2]);
        for (i, ai) in a.iter().enumerate() {
            n = f.sub(n, f.mul(f.from_i64(4), f.mul(x[i], self.s.q0(ai))));
        }
        let cubic = self.s.bv(&self.s.mul(&a[0], &a[1]), &a[2]);
        f.add(n, f.mul(f.from_i64(8), cubic))
    }

    /// `x∘³ − t(x)x∘² + s(x)x − n(x)1`.
    pub fn cubic_defect(&self, x: &[u32]) -> Vec<u32> {
        let f = self.field();
        let x2 = self.mul(x, x);
        let x3 = self.mul(&x2, x);
        let (t, s, n) = (self.trace(x), self.spur(x), self.norm(x));
        (0..self.dim())
            .map(|k| {
                let v = f.sub(x3[k], f.mul(t, x2[k]));
                let v = f.add(v, f.mul(s, x[k]));
                f.sub(v, f.mul(n, self.unit[k]))
            })
            .collect()
    }

    /// `D_{x,y}(z) = x∘(y∘z) − y∘(x∘z)`.
    pub fn inner_derivation(&self, x: &[u32], y: &[u32], z: &[u32]) -> Vec<u32> {
        let f = self.field();
        let a = self.mul(x, &self.mul(y, z));
        let b = self.mul(y, &self.mul(x, z));
        a.iter().zip(&b).map(|(&p, &q)| f.sub(p, q)).collect()
    }
}

/// `H₃(C,*)` for the even para-Hurwitz algebra `s` with the products
/// `eᵢ∘eⱼ = δᵢⱼeᵢ`, `eⱼ∘ιᵢ(a) = ½ιᵢ(a)` for `j ≠ i`,
/// `ιᵢ(a)∘ιᵢ₊₁(b) = ιᵢ₊₂(a•b)`, `ιᵢ(a)∘ιᵢ(b) = 2b(a,b)(eᵢ₊₁ + eᵢ₊₂)`.
pub fn h3(s: &CompositionSuperalgebra) -> Result<CubicJordan> {
    if s.space().superdim().odd > 0 {
        return Err(Error::NotEven);
    }
    let f = s.field();
    let n = s.dim();
    let dim = 3 + 3 * n;
    let mut labels: Vec<String> = vec!["e0".into(), "e1".into(), "e2".into()];
    for i in 0..3 {
        for a in 0..n {
            labels.push(format!("i{i}:{}", s.space().label(a)));
        }
    }
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let space = SuperSpace::from_parts(f, &refs, &[])?;
    let iota = |i: usize, a: usize| 3 + (i % 3) * n + a;
    let part = |k: usize| -> (Option<usize>, usize, usize) {
        if k < 3 {
            (None, k, 0)
        } else {
            (Some((k - 3) / n), (k - 3) / n, (k - 3) % n)
        }
    };
    let half = f.half();
    let algebra = SuperAlgebra::from_fn(space, |x, y| {
        let mut out = vec![0; dim];
        match (part(x), part(y)) {
            ((None, i, _), (None, j, _)) => {
                if i == j {
                    out[i] = 1;
                }
            }
            ((None, j, _), (Some(i), _, a)) | ((Some(i), _, a), (None, j, _)) => {
                if i != j {
                    out[iota(i, a)] = half;
                }
            }
            ((Some(i), _, a), (Some(j), _, b)) => {
                if i == j {
                    let c = f.mul(2, s.b(a, b));
                    out[(i + 1) % 3] = c;
                    out[(i + 2) % 3] = c;
                } else {
                    // ιᵢ(a)∘ιᵢ₊₁(b) = ιᵢ₊₂(a•b), symmetric in the two factors
                    let (first, second, k) = if j == (i + 1) % 3 { (a, b, (i + 2) % 3) } else { (b, a, (j + 2) % 3) };
                    let prod = s.mul(&s.basis_vector(first), &s.basis_vector(second));
                    for (c, v) in prod.into_iter().enumerate() {
                        out[iota(k, c)] = v;
                    }
                }
            }
        }
        out
    })?;
    let mut unit = vec![0; dim];
    unit[..3].copy_from_slice(&[1, 1, 1]);
    let algebra = algebra.with_unit(unit.clone());
    Ok(CubicJordan {
        s: s.clone(),
        algebra,
        unit,
    })
}

fn require_char3(f: Field) -> Result<()> {
    if f.p() != 3 {
        return Err(Error::WrongCharacteristic { expected: 3, found: f.p() });
    }
    Ok(())
}

/// `Ĵ = J₀/k1` in characteristic 3 with `[x̂ŷẑ] = (D_{x,y}(z))^` and the
/// induced trace form. Basis: the class of `e₀ − e₁`, then all `ιᵢ(a)`.
pub fn hat_ots(j: &CubicJordan) -> Result<TripleSystem> {
    let f = j.field();
    require_char3(f)?;
    let dim = j.dim();
    let m = dim - 2;
    // Representatives in J.
    let reps: Vec<Vec<u32>> = (0..m)
        .map(|k| {
            let mut v = vec![0; dim];
            if k == 0 {
                v[0] = 1;
                v[1] = f.neg(1);
            } else {
                v[k + 2] = 1;
            }
            v
        })
        .collect();
    // Class of a trace-zero element: (β₀, β₁, β₂) ≡ (β₀ − β₂)(e₀ − e₁) mod 1.
    let class = |v: &[u32]| -> Result<Vec<u32>> {
        if j.trace(v) != 0 {
            return Err(Error::AxiomFailure("triple product left J₀".into()));
        }
        let mut out = vec![0; m];
        out[0] = f.sub(v[0], v[2]);
        out[1..].copy_from_slice(&v[3..]);
        Ok(out)
    };
    // D_{x,y}(1) = 0 and D_{1,y} = 0: the product descends to the quotient.
    for x in &reps {
        for y in &reps {
            if j.inner_derivation(x, y, &j.unit).iter().any(|&c| c != 0) {
                return Err(Error::AxiomFailure("D_{x,y}(1) ≠ 0".into()));
            }
        }
        for z in &reps {
            if j.inner_derivation(&j.unit, x, z).iter().any(|&c| c != 0) {
                return Err(Error::AxiomFailure("D_{1,y} ≠ 0".into()));
            }
        }
    }
    let mut form = vec![0; m * m];
    for a in 0..m {
        for b in 0..m {
            form[a * m + b] = j.trace_form(&reps[a], &reps[b]);
        }
    }
    let labels: Vec<String> = std::iter::once("e0-e1".to_string())
        .chain((3..dim).map(|k| j.algebra.space.label(k).to_string()))
        .collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let space = SuperSpace::from_parts(f, &refs, &[])?;
    let mut err = None;
    let t = TripleSystem::from_fn(space, form, Flavor::Orthogonal, |a, b, c| {
        match class(&j.inner_derivation(&reps[a], &reps[b], &reps[c])) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                vec![0; m]
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(t),
    }
}

/// `J₁(e) = {x : e∘x = ½x}` for a trace-one idempotent `e`.
pub fn peirce1(j: &CubicJordan, e: &[u32]) -> Result<Subspace> {
    let f = j.field();
    if j.mul(e, e) != e {
        return Err(Error::NotIdempotent);
    }
    let t = j.trace(e);
    if t != 1 {
        return Err(Error::WrongTrace(t));
    }
    let dim = j.dim();
    let mut m = j.algebra.left_mult(e);
    let half = f.half();
    for i in 0..dim {
        m.set(i, i, f.sub(m.get(i, i), half));
    }
    Ok(Subspace::from_vectors(f, dim, m.kernel()))
}

/// `T_{2S} = J₁(e₀) = ι₁(S) ⊕ ι₂(S)` with `[xyz] = D_{x,y}(z)` and the trace
/// form, in characteristic 3.
pub fn t2s(s: &CompositionSuperalgebra) -> Result<TripleSystem> {
    require_char3(s.field())?;
    let j = h3(s)?;
    let f = j.field();
    let n = s.dim();
    let e0 = j.basis_vector(0);
    let sub = peirce1(&j, &e0)?;
    let idx: Vec<usize> = (0..2 * n).map(|k| j.iota(1 + k / n, k % n)).collect();
    let expected = Subspace::from_vectors(f, j.dim(), idx.iter().map(|&k| j.basis_vector(k)));
    if sub != expected {
        return Err(Error::AxiomFailure("J₁(e₀) ≠ ι₁(S) ⊕ ι₂(S)".into()));
    }
    let reps: Vec<Vec<u32>> = idx.iter().map(|&k| j.basis_vector(k)).collect();
    let mut form = vec![0; 4 * n * n];
    for a in 0..2 * n {
        for b in 0..2 * n {
            form[a * 2 * n + b] = j.trace_form(&reps[a], &reps[b]);
        }
    }
    let labels: Vec<String> = idx.iter().map(|&k| j.algebra.space.label(k).to_string()).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let space = SuperSpace::from_parts(f, &refs, &[])?;
    let mut closed = true;
    let t = TripleSystem::from_fn(space, form, Flavor::Orthogonal, |a, b, c| {
        let v = j.inner_derivation(&reps[a], &reps[b], &reps[c]);
        let coords: Vec<u32> = idx.iter().map(|&k| v[k]).collect();
        let back: u32 = (0..j.dim()).filter(|k| !idx.contains(k)).map(|k| v[k]).max().unwrap_or(0);
        if back != 0 {
            closed = false;
        }
        coords
    })?;
    if !closed {
        return Err(Error::AxiomFailure("J₁(e₀) not closed under the triple product".into()));
    }
    Ok(t)
}

/// Matrix of `L_x` on `J`.
pub fn left_multiplication(j: &CubicJordan, x: &[u32]) -> FieldMatrix {
    j.algebra.left_mult(x)
}
