//! The built-in verification suites behind `poisson-forge verify`.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::centre::{bounded_centre, same_span};
use crate::error::{AlgebraError, Result};
use crate::fraction::FractionElement;
use crate::ore::DEFAULT_NILPOTENCY_BOUND;
use crate::parse::parse_expr;
use crate::pdda::{check_toral_contract, run_chain, verify_target_torus, Chain};
use crate::poly::LaurentPoly;
use crate::quotient::{Check, Params, Quotient};
use crate::rational::Rational;
use crate::report::{Item, Report, SuiteReport};
use crate::schema::{Algebra, IdentitiesFile, QuotientDerivationFile, TorusFile, THETA_JSON, THETA_TILDE_JSON, TORUS_M_JSON};
use crate::torus::{compose, decompose_derivation, decompose_with_witness, random_decomposition, verify_decomposition, TorusStructure, Witness};

/// Suite names in the order `verify all` runs them.
pub const SUITES: [&str; 10] =
    ["jacobi", "casimir", "pdda", "pullback", "pl2", "localization", "torus", "derivations", "centre", "grading"];

pub const DEFAULT_SEED: u64 = 20240607;

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    /// Replaces the built-in algebra for the `jacobi` and `grading` suites.
    pub algebra: Option<Algebra>,
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: DEFAULT_SEED, algebra: None, timing: false }
    }
}

/// Expand `all` and check names.
pub fn resolve(names: &[String]) -> Result<Vec<&'static str>> {
    let mut out = Vec::new();
    for n in names {
        if n == "all" {
            out.extend(SUITES);
        } else {
            let s = SUITES.iter().find(|s| *s == n).ok_or_else(|| AlgebraError::Input(format!("unknown suite `{n}`")))?;
            out.push(*s);
        }
    }
    out.dedup();
    Ok(out)
}

/// Run the named suites concurrently; the report keeps the requested order.
pub fn run(names: &[&str], opts: &Options) -> Result<Report> {
    let suites = names
        .par_iter()
        .map(|name| {
            let start = Instant::now();
            let mut r = run_suite(name, opts)?;
            if opts.timing {
                r.timing_ms = Some(start.elapsed().as_millis() as u64);
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new(suites))
}

pub fn run_suite(name: &str, opts: &Options) -> Result<SuiteReport> {
    let items = match name {
        "jacobi" => jacobi(opts)?,
        "casimir" => casimir()?,
        "pdda" => pdda()?,
        "pullback" => pullback()?,
        "pl2" => pl2()?,
        "localization" => checks(Quotient::new().verify_localization()?),
        "torus" => torus(opts.seed)?,
        "derivations" => derivations()?,
        "centre" => centre()?,
        "grading" => grading(opts)?,
        other => return Err(AlgebraError::Input(format!("unknown suite `{other}`"))),
    };
    Ok(SuiteReport::new(name, items))
}

fn checks(cs: Vec<Check>) -> Vec<Item> {
    cs.into_iter().map(|c| Item::residue(c.label, c.residue)).collect()
}

fn builtin_chain(a: &Algebra) -> Result<Chain> {
    let ore = a.ore.clone().ok_or_else(|| AlgebraError::Input("algebra has no Ore data".into()))?.with_computed_eta()?;
    run_chain(&a.structure, &ore, DEFAULT_NILPOTENCY_BOUND)
}

fn jacobi(opts: &Options) -> Result<Vec<Item>> {
    let custom = opts.algebra.is_some();
    let a = opts.algebra.clone().unwrap_or_else(Algebra::builtin);
    let s = &a.structure;
    let ctx = s.context();
    let mut items: Vec<Item> = s
        .triples()
        .into_par_iter()
        .map(|(i, j, k)| {
            Item::residue(format!("jacobi ({}, {}, {})", ctx.name(i), ctx.name(j), ctx.name(k)), s.jacobiator(i, j, k))
        })
        .collect();
    if !custom {
        items.extend(mutations(s).into_iter().enumerate().map(|(n, (label, broken))| {
            Item::check(format!("mutation {:02} {label}", n + 1), broken, || "Jacobi still holds".into())
        }));
    }
    Ok(items)
}

/// Every single-coefficient `+1` perturbation of the table, and whether it
/// breaks Jacobi.
pub fn mutations(s: &crate::poisson::PoissonStructure) -> Vec<(String, bool)> {
    let ctx = s.context();
    let mut cases = Vec::new();
    for (i, j) in s.pairs() {
        for (m, c) in s.entry(j, i).terms() {
            cases.push((i, j, m.clone(), c.clone()));
        }
    }
    cases
        .into_par_iter()
        .map(|(i, j, m, c)| {
            let bump = LaurentPoly::monomial(ctx, m.exponents().to_vec(), Rational::one()).expect("same support");
            let mutated = s.with_entry(j, i, s.entry(j, i) + &bump);
            let label = format!("{{{}, {}}} coefficient {} of {}", ctx.name(j), ctx.name(i), c, LaurentPoly::format_monomial(ctx, &m));
            (label, mutated.check_jacobi().is_some())
        })
        .collect()
}

fn casimir() -> Result<Vec<Item>> {
    let a = Algebra::builtin();
    let ids = IdentitiesFile::builtin();
    let mut items = Vec::new();
    for name in ["Omega1", "Omega2"] {
        let w = parse_expr(ids.casimir(name), a.context())?;
        for i in a.structure.generators() {
            let r = a.structure.bracket(&w, &LaurentPoly::var_at(a.context(), i));
            items.push(Item::residue(format!("{{{name}, {}}}", a.context().name(i)), r));
        }
    }
    Ok(items)
}

fn torus_m() -> Result<TorusStructure> {
    let file: TorusFile = serde_json::from_str(TORUS_M_JSON).map_err(|e| AlgebraError::Input(e.to_string()))?;
    Ok(TorusStructure::from_file(&file)?.0)
}

fn fraction_residue(chain: &Chain, a: &FractionElement, b: &FractionElement) -> LaurentPoly {
    chain.field().cleared_difference(a, b)
}

fn pdda() -> Result<Vec<Item>> {
    let a = Algebra::builtin();
    let ore = a.ore.clone().expect("built-in Ore data");
    let mut items = Vec::new();
    items.push(Item::check("eta X2 undefined", matches!(ore.compute_eta(1), Err(AlgebraError::EtaUndefined(2))), || {
        format!("{:?}", ore.compute_eta(1))
    }));
    for (i, want) in [(2, 2), (3, 6), (4, 2), (5, 6)] {
        let got = ore.compute_eta(i);
        items.push(Item::check(format!("eta X{} = {want}", i + 1), matches!(&got, Ok(v) if *v == Rational::integer(want)), || {
            format!("{got:?}")
        }));
    }
    let mut chain = builtin_chain(&a)?;
    for f in IdentitiesFile::builtin().chain {
        let want = chain.evaluate_str(f.level + 1, &f.expr)?;
        let got = chain.stage(f.level).ok_or_else(|| AlgebraError::Input(format!("no level {}", f.level)))?.gens[f.i - 1].clone();
        items.push(Item::residue(format!("formula X_{{{},{}}}", f.i, f.level), fraction_residue(&chain, &got, &want)));
    }
    let m = torus_m()?;
    for (i, j, r) in verify_target_torus(chain.field(), chain.torus(), m.lambda_matrix(), &a.structure) {
        items.push(Item::residue(format!("torus {{T{}, T{}}}", i + 1, j + 1), r));
    }
    let ore = a.ore.as_ref().expect("built-in Ore data");
    let v = check_toral_contract(&chain, ore, &a.structure);
    items.push(Item::check("toral contract at every level", v.is_none(), || format!("{v:?}")));
    Ok(items)
}

fn pullback() -> Result<Vec<Item>> {
    let a = Algebra::builtin();
    let ids = IdentitiesFile::builtin();
    let mut chain = builtin_chain(&a)?;
    let mut items = Vec::new();
    for ladder in &ids.ladders {
        let torus = chain.evaluate_str(2, &ladder.torus.replace('T', "X"))?;
        for line in &ladder.lines {
            let got = chain.evaluate_str(line.level, &line.expr)?;
            items.push(Item::residue(format!("{} at level {}", ladder.name, line.level), fraction_residue(&chain, &torus, &got)));
        }
        let last = ladder.lines.last().map(|l| parse_expr(&l.expr, a.context())).transpose()?;
        let want = parse_expr(ids.casimir(&ladder.name), a.context())?;
        let r = last.map_or_else(|| want.clone(), |l| &l - &want);
        items.push(Item::residue(format!("{} final form", ladder.name), r));
    }
    Ok(items)
}

fn pl2() -> Result<Vec<Item>> {
    let q = Quotient::new();
    let mut items = checks(q.check_casimirs()?);
    items.extend(checks(q.check_jacobi()?));
    Ok(items)
}

fn torus(seed: u64) -> Result<Vec<Item>> {
    let t = torus_m()?;
    let lattice = t.central_lattice();
    let mut items =
        vec![Item::check("centre lattice of M", lattice == vec![vec![1, 0, 1, 0, 1, 0], vec![0, 1, 0, 1, 0, 1]], || {
            format!("{lattice:?}")
        })];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<_> = (0..100).map(|_| random_decomposition(&t, &mut rng)).collect();
    let results: Vec<Item> = cases
        .par_iter()
        .enumerate()
        .map(|(k, dec)| {
            let d = compose(dec, &t);
            let label = format!("roundtrip {k:03}");
            match (decompose_derivation(&d, &t), decompose_with_witness(&d, &t, Witness::Largest)) {
                (Ok(a), Ok(b)) => Item::check(label, &a == dec && a == b && verify_decomposition(&d, &a, &t), || {
                    format!("recovered gamma {} from gamma {}", a.gamma, dec.gamma)
                }),
                (Err(e), _) | (_, Err(e)) => Item::fail(label, e.to_string()),
            }
        })
        .collect();
    items.extend(results);
    Ok(items)
}

fn derivation_file(q: &Quotient, json: &str) -> Result<(crate::poisson::DerivationSpec, Params)> {
    let file: QuotientDerivationFile = serde_json::from_str(json).map_err(|e| AlgebraError::Input(e.to_string()))?;
    q.derivation_from_file(&file)
}

fn summarize(cs: &[Check]) -> String {
    cs.iter().filter(|c| !c.passed()).map(|c| format!("{}: {}", c.label, c.residue)).collect::<Vec<_>>().join("; ")
}

fn derivations() -> Result<Vec<Item>> {
    let q = Quotient::new();
    let (theta, p0) = derivation_file(&q, THETA_JSON)?;
    let (tilde, p1) = derivation_file(&q, THETA_TILDE_JSON)?;
    let mut items = Vec::new();

    let c = q.check_derivation(&theta, &p0)?;
    items.push(Item::check("theta on A(alpha, 0)", c.iter().all(Check::passed), || summarize(&c)));
    let c = q.check_derivation(&tilde, &p1)?;
    items.push(Item::check("theta-tilde on A(0, beta)", c.iter().all(Check::passed), || summarize(&c)));

    let c = q.check_derivation(&theta, &Params::symbolic())?;
    let failing: Vec<&Check> = c.iter().filter(|c| !c.passed()).collect();
    let two_beta = q.parse("2*beta")?;
    let ok = failing.len() == 1 && failing[0].label == "Omega2 relation" && failing[0].residue == two_beta;
    items.push(Item::check("theta on A(alpha, beta) leaves 2*beta on Omega2", ok, || summarize(&c)));

    let found = q.bounded_inner_search(&theta, 4, &Params::numeric(Rational::one(), Rational::zero()))?;
    items.push(Item::check("theta is not inner on A(1, 0) up to degree 4", found.is_none(), || {
        format!("found {}", found.as_ref().expect("some"))
    }));

    let x3 = q.var(2);
    let ham = q.structure().hamiltonian(&x3);
    let found = q.bounded_inner_search(&ham, 2, &Params::numeric(Rational::one(), Rational::one()))?;
    items.push(Item::check("ham(x3) is recovered on A(1, 1) up to degree 2", found.as_ref() == Some(&x3), || {
        format!("{found:?}")
    }));
    Ok(items)
}

fn show(basis: &[LaurentPoly]) -> String {
    basis.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn centre() -> Result<Vec<Item>> {
    let a = Algebra::builtin();
    let ids = IdentitiesFile::builtin();
    let one = LaurentPoly::one(a.context());
    let o1 = parse_expr(ids.casimir("Omega1"), a.context())?;
    let o2 = parse_expr(ids.casimir("Omega2"), a.context())?;
    let cases = [(2, vec![one.clone()], "1"), (3, vec![one.clone(), o1.clone()], "1, Omega1"), (4, vec![one, o1, o2], "1, Omega1, Omega2")];
    let mut items: Vec<Item> = cases
        .par_iter()
        .map(|(d, want, name)| {
            let got = bounded_centre(&a.structure, *d);
            Item::check(format!("ambient centre, degree {d}: span({name})"), same_span(&got, want), || show(&got))
        })
        .collect();
    let q = Quotient::new();
    let got = q.bounded_centre(4, &Params::numeric(Rational::one(), Rational::one()))?;
    items.push(Item::check("quotient A(1, 1) centre, degree 4: span(1)", same_span(&got, &[LaurentPoly::one(q.context())]), || {
        show(&got)
    }));
    Ok(items)
}

fn grading(opts: &Options) -> Result<Vec<Item>> {
    let custom = opts.algebra.is_some();
    let a = opts.algebra.clone().unwrap_or_else(Algebra::builtin);
    let w = a.weights.clone().ok_or_else(|| AlgebraError::Input("algebra has no weights".into()))?;
    let v = a.structure.check_grading(&w)?;
    let mut items = vec![Item::check("bracket table is graded", v.is_none(), || {
        let v = v.as_ref().expect("violation");
        format!("pair ({}, {}): expected {:?}, found {:?}", a.context().name(v.pair.0), a.context().name(v.pair.1), v.expected, v.found)
    })];
    if !custom {
        let ids = IdentitiesFile::builtin();
        for (name, want) in [("Omega1", vec![4, 2]), ("Omega2", vec![6, 4])] {
            let got = w.homogeneous_weight(&parse_expr(ids.casimir(name), a.context())?);
            items.push(Item::check(format!("{name} has weight {want:?}"), got.as_ref() == Some(&want), || format!("{got:?}")));
        }
    }
    Ok(items)
}
