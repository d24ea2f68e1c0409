use std::fmt;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use serde_json::{json, Value};
use supermagic::magicsquare::{module_irreducible, ModuleVerdict};
use supermagic::models::{cartan_matrix, el53_target, search_el53_cartan, signed_matrix, GeneratorPair, SearchOutcome};
use supermagic::structconst::{
    center, check_form_supersymmetric, check_grading, check_invariant_form, check_super_anticommutativity,
    check_super_jacobi, derivations, form_rank, is_simple, Simplicity,
};
use supermagic::superlinear::SuperDim;
use supermagic::triples::check_osts;
use supermagic::Field;

use crate::target::{Kind, Target};

pub const CHECK_NAMES: [&str; 8] = ["axioms", "jacobi", "form", "simple", "maximal", "derivations", "cartan", "dims"];

/// Budget for the `el53` generator search.
pub const SEARCH_BUDGET: Duration = Duration::from_secs(600);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub target: String,
    pub p: u32,
    pub superdim: SuperDim,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn exit_status(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "target": self.target,
            "p": self.p,
            "superdim": self.superdim.to_string(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "status": c.status.as_str(),
                "witness": c.detail,
                "seconds": c.elapsed.as_secs_f64(),
            })).collect::<Vec<_>>(),
            "exit_status": self.exit_status(),
        })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} over GF({}), superdimension {}", self.target, self.p, self.superdim)?;
        for c in &self.checks {
            writeln!(
                f,
                "  {:<12} {:<5} {:>9.3}s  {}",
                c.name,
                c.status.as_str(),
                c.elapsed.as_secs_f64(),
                c.detail
            )?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Splits and validates a comma-separated check list.
pub fn parse_checks(list: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for c in list.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        if !CHECK_NAMES.contains(&c) {
            bail!("unknown check `{c}`; expected some of {}", CHECK_NAMES.join(","));
        }
        out.push(c.to_string());
    }
    if out.is_empty() {
        bail!("empty check list");
    }
    Ok(out)
}

type Outcome = (Status, String);

fn pass(detail: impl Into<String>) -> Outcome {
    (Status::Pass, detail.into())
}

fn fail(detail: impl Into<String>) -> Outcome {
    (Status::Fail, detail.into())
}

fn skip(detail: impl Into<String>) -> Outcome {
    (Status::Skip, detail.into())
}

fn axioms(t: &Target) -> Outcome {
    if let Err(w) = check_super_anticommutativity(&t.algebra) {
        return fail(w.to_string());
    }
    if t.algebra.grading.is_some() {
        if let Err(w) = check_grading(&t.algebra) {
            return fail(w.to_string());
        }
    }
    match &t.triple {
        Some(tr) => match check_osts(tr) {
            Ok(()) => pass(format!("anticommutative; triple system {} satisfies its axioms", tr.superdim())),
            Err(w) => fail(format!("triple system: {w}")),
        },
        None => pass("anticommutative"),
    }
}

fn form(t: &Target) -> Outcome {
    let a = &t.algebra;
    if a.form.is_some() {
        let sym = check_form_supersymmetric(a);
        let inv = check_invariant_form(a);
        return match (sym, inv, form_rank(a)) {
            (Ok(Ok(())), Ok(Ok(())), Ok(r)) => pass(format!("supersymmetric and invariant, rank {r} of {}", a.dim())),
            (Ok(Err(w)), _, _) => fail(format!("not supersymmetric: {w}")),
            (_, Ok(Err(w)), _) => fail(format!("not invariant: {w}")),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => fail(e.to_string()),
        };
    }
    if let Some(tr) = &t.triple {
        let r = tr.form_rank();
        return if r == tr.dim() {
            pass(format!("triple system form nondegenerate, rank {r}"))
        } else {
            fail(format!("triple system form has rank {r} < {}", tr.dim()))
        };
    }
    match &t.kind {
        Kind::Square { form_note: Some(note), .. } => skip(format!("no invariant form: {note}")),
        _ => skip("no form attached"),
    }
}

fn simple(t: &Target) -> Outcome {
    match is_simple(&t.algebra) {
        Simplicity::Simple => pass("simple"),
        Simplicity::NotSimple { witness, reason } => fail(format!("{reason}; ideal of dimension {}", witness.dim())),
        Simplicity::Undecided => fail("simplicity undecided"),
    }
}

fn maximal(t: &Target) -> Outcome {
    let Kind::El53(e) = &t.kind else {
        return skip("maximality applies to el53 only");
    };
    match module_irreducible(t.algebra.field(), e.split.minus_dim(), &e.split.action) {
        ModuleVerdict::Irreducible => pass(format!("g- of dimension {} is an irreducible g+-module", e.split.minus_dim())),
        ModuleVerdict::Reducible(sub) => fail(format!("g- has a submodule of dimension {}", sub.dim())),
        ModuleVerdict::Undecided => fail("irreducibility undecided"),
    }
}

fn derivations_inner(t: &Target) -> Outcome {
    let a = &t.algebra;
    let z = center(a).dim();
    if z != 0 {
        return fail(format!("center has dimension {z}"));
    }
    let d = derivations(a).superdim();
    if d == a.superdim() {
        pass(format!("der = {d}: every derivation is inner"))
    } else {
        fail(format!("der = {d}, algebra = {}", a.superdim()))
    }
}

fn format_matrix(f: Field, m: &[Vec<u32>]) -> String {
    format!("{:?}", signed_matrix(f, m))
}

pub fn target_2x2(f: Field) -> Vec<Vec<u32>> {
    vec![vec![0, f.neg(1)], vec![f.neg(2), 1]]
}

/// Built-in generator pairs and the expected Cartan matrix, if any.
pub fn builtin_generators(t: &Target) -> Result<Option<(Vec<GeneratorPair>, Vec<Vec<u32>>)>> {
    let f = t.algebra.field();
    Ok(match &t.kind {
        Kind::Br23(b) => Some((b.generators()?, target_2x2(f))),
        Kind::Br25(b) => Some((b.generators(), target_2x2(f))),
        _ => None,
    })
}

fn cartan(t: &Target) -> Outcome {
    let f = t.algebra.field();
    if let Kind::El53(e) = &t.kind {
        return match search_el53_cartan(e, SEARCH_BUDGET) {
            Ok(SearchOutcome::Certified { matrix, .. }) => pass(format!(
                "certified {} (target {} up to permutation and row scaling)",
                format_matrix(f, &matrix),
                format_matrix(f, &el53_target(f))
            )),
            Ok(SearchOutcome::NotCertified { reason }) => skip(format!("not certified: {reason}")),
            Err(e) => skip(format!("not certified: {e}")),
        };
    }
    let gens = match builtin_generators(t) {
        Ok(Some(g)) => g,
        Ok(None) => return skip("no built-in generators"),
        Err(e) => return fail(e.to_string()),
    };
    match cartan_matrix(&t.algebra, &gens.0) {
        Ok(d) if d.matrix == gens.1 => pass(format!(
            "{} with generators spanning {}",
            format_matrix(f, &d.matrix),
            d.generated_dim
        )),
        Ok(d) => fail(format!(
            "found {}, expected {}",
            format_matrix(f, &d.matrix),
            format_matrix(f, &gens.1)
        )),
        Err(e) => fail(e.to_string()),
    }
}

fn dims(t: &Target) -> Outcome {
    let found = t.algebra.superdim();
    match t.expected_superdim() {
        Some(e) if e == found => pass(format!("{found}")),
        Some(e) => fail(format!("{found}, expected {e}")),
        None => skip(format!("{found}; no reference value")),
    }
}

fn run_check(t: &Target, name: &str) -> Outcome {
    match name {
        "axioms" => axioms(t),
        "jacobi" => match check_super_jacobi(&t.algebra) {
            Ok(()) => pass(format!("{} basis triples", t.algebra.dim().pow(3))),
            Err(w) => fail(format!(
                "{w} ({})",
                w.indices.iter().map(|&i| t.algebra.space.label(i)).collect::<Vec<_>>().join(", ")
            )),
        },
        "form" => form(t),
        "simple" => simple(t),
        "maximal" => maximal(t),
        "derivations" => derivations_inner(t),
        "cartan" => cartan(t),
        "dims" => dims(t),
        other => fail(format!("unknown check {other}")),
    }
}

pub fn verify(t: &Target, checks: &[String]) -> VerificationReport {
    let results = checks
        .iter()
        .map(|name| {
            let start = Instant::now();
            let (status, detail) = run_check(t, name);
            CheckResult {
                name: name.clone(),
                status,
                detail,
                elapsed: start.elapsed(),
            }
        })
        .collect();
    VerificationReport {
        target: t.name.clone(),
        p: t.algebra.field().p(),
        superdim: t.algebra.superdim(),
        checks: results,
    }
}
