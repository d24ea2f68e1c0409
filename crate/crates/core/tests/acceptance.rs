//! Acceptance criteria 1 to 12. Each test writes one `PASS`/`FAIL` line to
//! stderr (unbuffered, so it is visible without `--nocapture`).

use std::fmt::Display;
use std::io::Write;
use std::time::{Duration, Instant};

use supermagic::composition::{b12, b42, check_composition, split_hurwitz, symmetric_by_name};
use supermagic::jordan::t2s;
use supermagic::magicsquare::{
    automorphism_xi, expected_superdim, fixed_subalgebra, form_b, magic, module_irreducible, MagicPart, ModuleVerdict,
};
use supermagic::models::{
    br23, br25, cartan_equivalent, cartan_matrix, el53, el53_target, search_el53_cartan, SearchOutcome,
};
use supermagic::structconst::{
    center, check_form_supersymmetric, check_invariant_form, check_super_anticommutativity, check_super_jacobi,
    derivations, form_rank, is_simple, jacobi_defect, subalgebra_closure, ternary_derivations, Simplicity,
    SuperAlgebra,
};
use supermagic::superlinear::SuperDim;
use supermagic::triality::tri;
use supermagic::triples::{
    c0, check_osp12_isomorphism, check_osts, check_ots, inder, lie_superalgebra_of, odd_component_osts, tilde_lie_of,
    triple_is_simple, zero_product_symplectic,
};
use supermagic::Field;

type Outcome = Result<String, String>;

fn report(n: u32, title: &str, run: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let r = run();
    let took = start.elapsed();
    let line = match &r {
        Ok(msg) => format!("criterion {n:>2} PASS  {title}: {msg} [{took:.1?}]"),
        Err(msg) => format!("criterion {n:>2} FAIL  {title}: {msg} [{took:.1?}]"),
    };
    let _ = writeln!(std::io::stderr().lock(), "{line}");
    if let Err(msg) = r {
        panic!("criterion {n}: {msg}");
    }
}

fn ok<T, E: Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same_dim(found: SuperDim, expect: SuperDim, what: &str) -> Result<(), String> {
    ensure(found == expect, || format!("{what} has superdimension {found}, expected {expect}"))
}

fn simple(a: &SuperAlgebra, what: &str) -> Result<(), String> {
    match is_simple(a) {
        Simplicity::Simple => Ok(()),
        other => Err(format!("{what} not certified simple: {other:?}")),
    }
}

fn gf(p: u32) -> Field {
    Field::new(p).unwrap()
}

fn sd(e: usize, o: usize) -> SuperDim {
    SuperDim::new(e, o)
}

#[test]
fn criterion_01_composition_identities() {
    report(1, "composition identities", || {
        for p in [3, 5] {
            for r in [1, 2, 4, 8] {
                let c = ok(split_hurwitz(r, gf(p)), "split Hurwitz")?;
                ok(check_composition(&c), &format!("C{r} over GF({p})"))?;
            }
        }
        for (name, build) in [("B(1,2)", b12 as fn(Field) -> _), ("B(4,2)", b42)] {
            let c3 = ok(build(gf(3)), name)?;
            ok(check_composition(&c3), &format!("{name} over GF(3)"))?;
            let c5 = ok(build(gf(5)), name)?;
            match check_composition(&c5) {
                Ok(()) => return Err(format!("{name} over GF(5) unexpectedly passes")),
                Err(w) => ensure(!w.defect.is_empty(), || format!("{name}: empty witness defect"))?,
            }
        }
        Ok("C1,C2,C4,C8 pass over GF(3), GF(5); B(1,2), B(4,2) pass over GF(3) and fail over GF(5)".into())
    });
}

#[test]
fn criterion_02_triality_dimensions() {
    report(2, "triality dimensions", || {
        let f = gf(3);
        let t8 = ok(tri(&ok(symmetric_by_name("S8", f), "S8")?), "tri(S8)")?;
        same_dim(t8.algebra.superdim(), sd(28, 0), "tri(S8)")?;
        let t12 = ok(tri(&ok(symmetric_by_name("S1.2", f), "S1.2")?), "tri(S1.2)")?;
        same_dim(t12.algebra.superdim(), sd(3, 2), "tri(S1.2)")?;
        ensure(t12.elements.iter().all(|e| e.d[0] == e.d[1] && e.d[1] == e.d[2]), || {
            "tri(S1.2) has a non-diagonal element".into()
        })?;
        let t42 = ok(tri(&ok(symmetric_by_name("S4.2", f), "S4.2")?), "tri(S4.2)")?;
        same_dim(t42.algebra.superdim(), sd(9, 8), "tri(S4.2)")?;
        Ok("tri(S8) = 28|0, tri(S1.2) = 3|2 diagonal, tri(S4.2) = 9|8".into())
    });
}

/// Superdimensions of the characteristic-3 square, entered by hand from
/// `dim tri(S) + dim tri(S′) + 3·(S⊗S′)`.
const TABLE: [(&str, &str, usize, usize); 21] = [
    ("S1", "S1", 3, 0),
    ("S1", "S2", 8, 0),
    ("S1", "S4", 21, 0),
    ("S1", "S8", 52, 0),
    ("S1", "S1.2", 6, 8),
    ("S1", "S4.2", 21, 14),
    ("S2", "S2", 16, 0),
    ("S2", "S4", 35, 0),
    ("S2", "S8", 78, 0),
    ("S2", "S1.2", 11, 14),
    ("S2", "S4.2", 35, 20),
    ("S4", "S4", 66, 0),
    ("S4", "S8", 133, 0),
    ("S4", "S1.2", 24, 26),
    ("S4", "S4.2", 66, 32),
    ("S8", "S8", 248, 0),
    ("S8", "S1.2", 55, 50),
    ("S8", "S4.2", 133, 56),
    ("S1.2", "S1.2", 21, 16),
    ("S1.2", "S4.2", 36, 40),
    ("S4.2", "S4.2", 78, 64),
];

#[test]
fn criterion_03_supermagic_square() {
    report(3, "supermagic square", || {
        use rayon::prelude::*;
        let f = gf(3);
        let failures: Vec<String> = TABLE
            .par_iter()
            .filter_map(|&(a, b, e, o)| {
                let run = || -> Result<(), String> {
                    let (s, t) = (ok(symmetric_by_name(a, f), a)?, ok(symmetric_by_name(b, f), b)?);
                    let g = ok(magic(&s, &t), "magic")?;
                    let what = format!("g({a},{b})");
                    same_dim(g.algebra.superdim(), sd(e, o), &what)?;
                    let formula = expected_superdim(
                        g.tri.algebra.superdim(),
                        g.tri_prime.algebra.superdim(),
                        s.space().superdim(),
                        t.space().superdim(),
                    );
                    same_dim(formula, sd(e, o), &format!("{what} by formula"))?;
                    ok(check_super_anticommutativity(&g.algebra), &format!("{what} anticommutativity"))?;
                    ok(check_super_jacobi(&g.algebra), &format!("{what} Jacobi"))?;
                    Ok(())
                };
                run().err()
            })
            .collect();
        ensure(failures.is_empty(), || failures.join("; "))?;
        Ok("21 pairs: superdimensions match, anticommutativity and Jacobi pass".into())
    });
}

#[test]
fn criterion_04_el53() {
    report(4, "el(5;3)", || {
        let f = gf(3);
        let e = ok(el53(f), "el53")?;
        let g = &e.g.algebra;
        let plus = e.algebra();
        same_dim(plus.superdim(), sd(39, 32), "g+")?;
        let closure = subalgebra_closure(g, &e.split.plus_index.iter().map(|&i| g.basis_vector(i)).collect::<Vec<_>>());
        ensure(closure.dim() == 71, || format!("g+ generates a subalgebra of dim {}", closure.dim()))?;
        let minus = &e.split.minus_index;
        let odd = minus.iter().filter(|&&i| g.parity(i) == 1).count();
        same_dim(sd(minus.len() - odd, odd), sd(16, 18), "g-")?;
        ok(check_super_jacobi(plus), "g+ Jacobi")?;
        simple(plus, "g+")?;
        ensure(
            module_irreducible(f, e.split.minus_dim(), &e.split.action) == ModuleVerdict::Irreducible,
            || "g- not certified irreducible".into(),
        )?;
        let idx = e.so9_indices();
        let so9_span = subalgebra_closure(plus, &idx.iter().map(|&i| plus.basis_vector(i)).collect::<Vec<_>>());
        ensure(so9_span.dim() == 36, || format!("tri(S8)+i0(S8⊗1) generates dim {}", so9_span.dim()))?;
        simple(&ok(e.so9(), "so9")?, "so9")?;
        Ok("g+ = 39|32 closed and simple; g- = 16|18 irreducible; so9 closed of dim 36 and simple".into())
    });
}

#[test]
fn criterion_05_form_b() {
    report(5, "invariant form on g(S8,S1.2)", || {
        let f = gf(3);
        let g = ok(magic(&ok(symmetric_by_name("S8", f), "S8")?, &ok(symmetric_by_name("S1.2", f), "S1.2")?), "magic")?;
        let a = ok(g.algebra.clone().with_form(ok(form_b(&g), "form")?), "with_form")?;
        ok(ok(check_form_supersymmetric(&a), "form")?, "supersymmetry")?;
        ok(ok(check_invariant_form(&a), "form")?, "invariance")?;
        let n = a.dim();
        for i in 0..n {
            for j in 0..n {
                if a.parity(i) != a.parity(j) && a.form_entry(i, j) != Some(0) {
                    return Err(format!("form pairs even and odd basis elements {i}, {j}"));
                }
            }
        }
        let parts = [MagicPart::Tri, MagicPart::TriPrime, MagicPart::Iota(0), MagicPart::Iota(1), MagicPart::Iota(2)];
        for (x, px) in parts.iter().enumerate() {
            for py in &parts[x + 1..] {
                for &i in &g.part_indices(*px) {
                    for &j in &g.part_indices(*py) {
                        if a.form_entry(i, j) != Some(0) {
                            return Err(format!("parts {px:?} and {py:?} are not orthogonal"));
                        }
                    }
                }
            }
        }
        let r = ok(form_rank(&a), "rank")?;
        ensure(r == 105, || format!("Gram rank {r}"))?;
        Ok("supersymmetric, even, invariant, five parts orthogonal, rank 105".into())
    });
}

#[test]
fn criterion_06_derivations_are_inner() {
    report(6, "derivations of g(S8,S1.2)", || {
        let f = gf(3);
        let g = ok(magic(&ok(symmetric_by_name("S8", f), "S8")?, &ok(symmetric_by_name("S1.2", f), "S1.2")?), "magic")?;
        ensure(center(&g.algebra).dim() == 0, || "nonzero center".into())?;
        same_dim(derivations(&g.algebra).superdim(), sd(55, 50), "der")?;
        Ok("der = 55|50 = superdim, center 0".into())
    });
}

#[test]
fn criterion_07_t2s8() {
    report(7, "T_2S8", || {
        let f = gf(3);
        let t = ok(t2s(&ok(symmetric_by_name("S8", f), "S8")?), "t2s")?;
        ok(check_ots(&t), "OTS axioms")?;
        let d = ok(inder(&t), "inder")?;
        ensure(d.dim() == 36, || format!("inder has dim {}", d.dim()))?;
        let l = ok(lie_superalgebra_of(&t, &d), "Lie superalgebra")?;
        same_dim(l.algebra.superdim(), sd(39, 32), "Lie superalgebra")?;
        ok(check_super_jacobi(&l.algebra), "Jacobi")?;
        simple(&l.algebra, "Lie superalgebra")?;
        let tl = ok(tilde_lie_of(&t), "tilde")?;
        ensure(tl.algebra.dim() == 52, || format!("tilde algebra has dim {}", tl.algebra.dim()))?;
        ok(check_super_jacobi(&tl.algebra), "tilde Jacobi")?;
        simple(&tl.algebra, "tilde algebra")?;
        Ok("OTS; inder 36; Lie 39|32 simple; tilde 52 simple".into())
    });
}

#[test]
fn criterion_08_br23() {
    report(8, "B(4,2)0 and br(2;3)", || {
        let f = gf(3);
        let c = ok(b42(f), "B(4,2)")?;
        let z = ok(c0(&c), "C0")?;
        ok(check_osts(&z.osts), "OSTS axioms")?;
        ok(ok(check_osp12_isomorphism(&c, &z), "osp(1|2)")?, "osp(1|2) isomorphism")?;
        let b = ok(br23(f), "br23")?;
        same_dim(b.algebra().superdim(), sd(10, 8), "br(2;3)")?;
        ok(check_super_jacobi(b.algebra()), "Jacobi")?;
        simple(b.algebra(), "br(2;3)")?;
        let data = ok(cartan_matrix(b.algebra(), &ok(b.generators(), "generators")?), "Cartan")?;
        let target = vec![vec![0, f.neg(1)], vec![f.neg(2), 1]];
        ensure(data.matrix == target, || format!("Cartan matrix {:?}", data.matrix))?;
        ensure(data.generated_dim == 18, || format!("generators span dim {}", data.generated_dim))?;
        Ok("OSTS; osp(1|2) isomorphism; 10|8 simple; Cartan [[0,-1],[-2,1]] generating".into())
    });
}

#[test]
fn criterion_09_odd_component() {
    report(9, "odd component of g(S8,S1.2)", || {
        let f = gf(3);
        let g = ok(magic(&ok(symmetric_by_name("S8", f), "S8")?, &ok(symmetric_by_name("S1.2", f), "S1.2")?), "magic")?;
        let split = ok(fixed_subalgebra(&g.algebra, &ok(automorphism_xi(&g), "xi")?), "split")?;
        let t = ok(odd_component_osts(&g.algebra, &split, &ok(form_b(&g), "form")?), "T")?;
        same_dim(t.superdim(), sd(16, 18), "T")?;
        ok(check_osts(&t), "OSTS axioms")?;
        let d = ok(inder(&t), "inder")?;
        same_dim(d.superdim(), sd(39, 32), "inder")?;
        same_dim(ternary_derivations(&t).superdim(), sd(39, 32), "der")?;
        let l = ok(lie_superalgebra_of(&t, &d), "Lie superalgebra")?;
        let g42 = ok(magic(&ok(symmetric_by_name("S4.2", f), "S4.2")?, &ok(symmetric_by_name("S4.2", f), "S4.2")?), "g(S4.2,S4.2)")?;
        same_dim(l.algebra.superdim(), g42.algebra.superdim(), "Lie superalgebra")?;
        same_dim(l.algebra.superdim(), sd(78, 64), "Lie superalgebra")?;
        ok(check_super_jacobi(&l.algebra), "Jacobi")?;
        simple(&l.algebra, "Lie superalgebra")?;
        Ok("T = 16|18 OSTS; der = inder = 39|32; Lie 78|64 Jacobi and simple".into())
    });
}

#[test]
fn criterion_10_br25() {
    report(10, "br(2;5)", || {
        let f = gf(5);
        let b = ok(br25(f), "br25")?;
        same_dim(b.algebra.superdim(), sd(10, 12), "br(2;5)")?;
        ok(check_super_anticommutativity(&b.algebra), "anticommutativity")?;
        ok(check_super_jacobi(&b.algebra), "Jacobi")?;
        simple(&b.algebra, "br(2;5)")?;
        let even = ok(b.algebra.restrict(&b.even_part(), None), "even part")?;
        ensure(even.dim() == 10, || format!("even part dim {}", even.dim()))?;
        simple(&even, "even part")?;
        let data = ok(cartan_matrix(&b.algebra, &b.generators()), "Cartan")?;
        ensure(data.matrix == vec![vec![0, f.neg(1)], vec![f.neg(2), 1]], || format!("Cartan {:?}", data.matrix))?;
        let b7 = ok(br25(gf(7)), "br25 over GF(7)")?;
        ensure(check_super_jacobi(&b7.algebra).is_err(), || "Jacobi passes over GF(7)".into())?;
        let [x, y, z] = b7.jacobi_probe();
        let defect = jacobi_defect(&b7.algebra, x, y, z);
        ensure(!defect.is_empty(), || "probe triple has zero defect over GF(7)".into())?;
        Ok(format!(
            "GF(5): 10|12 simple, even part 10 simple, Cartan matches; GF(7): Jacobi fails at ({}, {}, {})",
            b7.algebra.space.label(x),
            b7.algebra.space.label(y),
            b7.algebra.space.label(z)
        ))
    });
}

#[test]
fn criterion_11_zero_product_exception() {
    report(11, "characteristic-3 exception", || {
        let t3 = ok(zero_product_symplectic(gf(3)), "T over GF(3)")?;
        same_dim(t3.superdim(), sd(0, 2), "T")?;
        ok(check_osts(&t3), "OSTS axioms over GF(3)")?;
        let v = triple_is_simple(&t3);
        ensure(!matches!(v.verdict, Simplicity::Simple), || "zero-product system reported simple".into())?;
        ensure(v.form_nondegenerate(2), || "form is degenerate".into())?;
        let t5 = ok(zero_product_symplectic(gf(5)), "T over GF(5)")?;
        ensure(check_osts(&t5).is_err(), || "OSTS axioms pass over GF(5)".into())?;
        Ok("0|2 zero product: OSTS over GF(3), not over GF(5); not simple".into())
    });
}

#[test]
fn criterion_12_el53_cartan_search() {
    let start = Instant::now();
    let f = gf(3);
    let (status, line) = match el53(f).and_then(|e| search_el53_cartan(&e, Duration::from_secs(600)).map(|o| (e, o))) {
        Ok((e, SearchOutcome::Certified { pairs, matrix })) => {
            let generated = cartan_matrix(e.algebra(), &pairs).map(|d| d.generated_dim).unwrap_or(0);
            if cartan_equivalent(f, &matrix, &el53_target(f)) && generated == 71 {
                ("PASS", format!("certified: 5x5 matrix {matrix:?} matches up to permutation and row scaling, generators span 71"))
            } else {
                ("NOTE", format!("not certified: found {matrix:?}, generated dim {generated}"))
            }
        }
        Ok((_, SearchOutcome::NotCertified { reason })) => ("NOTE", format!("not certified: {reason}")),
        Err(e) => ("NOTE", format!("not certified: {e}")),
    };
    let _ = writeln!(
        std::io::stderr().lock(),
        "criterion 12 {status}  el(5;3) Cartan search (non-blocking): {line} [{:.1?}]",
        start.elapsed()
    );
}
