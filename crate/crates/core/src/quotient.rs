//! The simple quotient `A_{alpha,beta} = K[x1..x6] / (Omega1 - alpha,
//! Omega2 - beta)`.
//!
//! Elements are kept in normal form over the basis
//! `x1^i x2^j x3^e x4^f x5^k x6^l` with `e, f` in `{0, 1}`; coefficients are
//! polynomials in the parameters `alpha`, `beta`, which live in the same
//! context as parameter variables. `x5` and `x6` may carry negative exponents.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::centre::{exponents_up_to, kernel};
use crate::context::VarContext;
use crate::error::{AlgebraError, Result};
use crate::fraction::FractionElement;
use crate::linalg::{solve, SparseRow};
use crate::ore::DEFAULT_NILPOTENCY_BOUND;
use crate::parse::parse_expr;
use crate::pdda::run_chain;
use crate::poisson::{DerivationSpec, PoissonStructure};
use crate::poly::{LaurentPoly, Monomial};
use crate::rational::Rational;
use crate::schema::{
    Algebra, AlgebraFile, IdentitiesFile, ParameterValue, QuotientDerivationFile, ALGEBRA_A_JSON,
};

const X3: usize = 2;
const X4: usize = 3;
const ALPHA: usize = 6;
const BETA: usize = 7;

/// A parameter value: `None` keeps it symbolic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
}

impl Params {
    pub fn symbolic() -> Self {
        Params::default()
    }

    pub fn numeric(alpha: Rational, beta: Rational) -> Self {
        Params { alpha: Some(alpha), beta: Some(beta) }
    }

    pub fn is_numeric(&self) -> bool {
        self.alpha.is_some() && self.beta.is_some()
    }

    fn parse_value(v: &ParameterValue) -> Result<Option<Rational>> {
        match v {
            ParameterValue::Int(n) => Ok(Some(Rational::integer(*n))),
            ParameterValue::Text(t) if t == "symbolic" => Ok(None),
            ParameterValue::Text(t) => t.parse().map(Some),
        }
    }
}

/// A named identity and its residue after reduction; it holds iff the
/// residue is zero.
#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub residue: LaurentPoly,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residue.is_zero()
    }
}

/// Lowercase copy of the built-in algebra with `alpha`, `beta` appended as
/// parameters.
pub fn lowercase_algebra(invertible: &[&str]) -> Algebra {
    let mut file: AlgebraFile = serde_json::from_str(ALGEBRA_A_JSON).expect("built-in algebra is valid");
    let lower = |s: &String| s.replace('X', "x");
    file.variables = file.variables.iter().map(lower).collect();
    file.variables.extend(["alpha".to_string(), "beta".to_string()]);
    file.parameters = vec!["alpha".into(), "beta".into()];
    file.invertible = invertible.iter().map(|s| s.to_string()).collect();
    file.brackets = file.brackets.iter().map(|(k, v)| (k.clone(), lower(v))).collect();
    file.delta = file.delta.iter().map(|(k, v)| (k.clone(), lower(v))).collect();
    file.weights = None;
    Algebra::from_file(&file).expect("lowercase algebra is valid")
}

/// Rename the uppercase generators `X1..X6` of an expression to `x1..x6`.
pub fn lowercase(text: &str) -> String {
    text.replace('X', "x")
}

#[derive(Debug)]
pub struct Quotient {
    ctx: Arc<VarContext>,
    structure: PoissonStructure,
    r3: LaurentPoly,
    r4: LaurentPoly,
    omega: [LaurentPoly; 2],
    identities: IdentitiesFile,
    /// Normal form of `x3^a x4^b` and the longest rewrite chain below it.
    cache: Mutex<HashMap<(i32, i32), (LaurentPoly, usize)>>,
}

impl Default for Quotient {
    fn default() -> Self {
        Self::new()
    }
}

impl Quotient {
    pub fn new() -> Self {
        let structure = lowercase_algebra(&["x5", "x6"]).structure;
        let ctx = structure.context().clone();
        let identities = IdentitiesFile::builtin();
        let p = |s: &str| parse_expr(&lowercase(s), &ctx).expect("built-in expression parses");
        let r3 = p(&identities.rewrite["x3^2"]);
        let r4 = p(&identities.rewrite["x4^2"]);
        let omega = [p(identities.casimir("Omega1")), p(identities.casimir("Omega2"))];
        Quotient { ctx, structure, r3, r4, omega, identities, cache: Mutex::new(HashMap::new()) }
    }

    /// `x1..x6` (`x5`, `x6` invertible), then the parameters `alpha`, `beta`.
    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn structure(&self) -> &PoissonStructure {
        &self.structure
    }

    pub fn identities(&self) -> &IdentitiesFile {
        &self.identities
    }

    /// `Omega1` (index 0) or `Omega2` (index 1) as ambient polynomials.
    pub fn omega(&self, k: usize) -> &LaurentPoly {
        &self.omega[k]
    }

    /// Parse an expression; `X1..X6` are accepted as aliases of `x1..x6`.
    pub fn parse(&self, text: &str) -> Result<LaurentPoly> {
        parse_expr(&lowercase(text), &self.ctx)
    }

    pub fn var(&self, i: usize) -> LaurentPoly {
        LaurentPoly::var_at(&self.ctx, i)
    }

    fn rule_for(&self, a: i32, b: i32) -> Option<(LaurentPoly, Monomial)> {
        let mut e = vec![0; self.ctx.len()];
        if a >= 2 {
            e[X3] = a - 2;
            e[X4] = b;
            Some((self.r3.clone(), Monomial::new(e)))
        } else if b >= 2 {
            e[X3] = a;
            e[X4] = b - 2;
            Some((self.r4.clone(), Monomial::new(e)))
        } else {
            None
        }
    }

    /// Normal form of `x3^a x4^b`, with the depth of its rewrite tree.
    fn reduce_core(&self, a: i32, b: i32) -> (LaurentPoly, usize) {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&(a, b)) {
            return hit.clone();
        }
        let out = match self.rule_for(a, b) {
            None => {
                let mut e = vec![0; self.ctx.len()];
                e[X3] = a;
                e[X4] = b;
                (LaurentPoly::monomial(&self.ctx, e, Rational::one()).expect("non-negative"), 0)
            }
            Some((rhs, shift)) => {
                let expanded = rhs.mul_monomial(&shift, &Rational::one()).expect("non-negative");
                let mut acc = LaurentPoly::zero(&self.ctx);
                let mut depth = 0;
                for (m, c) in expanded.terms() {
                    let (p, d) = self.reduce_term(m, c);
                    acc = &acc + &p;
                    depth = depth.max(d);
                }
                (acc, depth + 1)
            }
        };
        self.cache.lock().expect("cache lock").insert((a, b), out.clone());
        out
    }

    fn reduce_term(&self, m: &Monomial, c: &Rational) -> (LaurentPoly, usize) {
        let (core, depth) = self.reduce_core(m.exp(X3), m.exp(X4));
        let rest = m.with_exp(X3, 0).with_exp(X4, 0);
        (core.mul_monomial(&rest, c).expect("exponents stay in range"), depth)
    }

    fn rehome(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        let p = p.with_context(&self.ctx)?;
        for (m, _) in p.terms() {
            if let Some(i) = (0..4).find(|&i| m.exp(i) < 0) {
                return Err(AlgebraError::Input(format!("negative exponent on x{}", i + 1)));
            }
        }
        Ok(p)
    }

    /// Reduce to the span of the normal-form basis by `x3^2 -> R3` and
    /// `x4^2 -> R4`, always rewriting `x3^2` first.
    pub fn normal_form(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        let p = self.rehome(p)?;
        let mut acc = LaurentPoly::zero(&self.ctx);
        for (m, c) in p.terms() {
            acc = &acc + &self.reduce_term(m, c).0;
        }
        Ok(acc)
    }

    /// Longest chain of rewrites needed to reduce `x3^a x4^b`.
    pub fn rewrite_depth(&self, a: u32, b: u32) -> usize {
        self.reduce_core(a as i32, b as i32).1
    }

    pub fn is_normal(&self, p: &LaurentPoly) -> bool {
        p.terms().all(|(m, _)| (0..=1).contains(&m.exp(X3)) && (0..=1).contains(&m.exp(X4)))
    }

    /// Substitute numeric parameter values; symbolic ones stay.
    pub fn specialize(&self, p: &LaurentPoly, params: &Params) -> LaurentPoly {
        if params.alpha.is_none() && params.beta.is_none() {
            return p.clone();
        }
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in p.terms() {
            let mut m2 = m.clone();
            let mut c2 = c.clone();
            for (slot, v) in [(ALPHA, &params.alpha), (BETA, &params.beta)] {
                if let Some(v) = v {
                    c2 = c2 * v.pow(m.exp(slot)).expect("parameters have non-negative degree");
                    m2 = m2.with_exp(slot, 0);
                }
            }
            let e = terms.entry(m2).or_insert_with(Rational::zero);
            *e += &c2;
        }
        LaurentPoly::from_terms(&self.ctx, terms).expect("same context")
    }

    pub fn reduce(&self, p: &LaurentPoly, params: &Params) -> Result<LaurentPoly> {
        Ok(self.specialize(&self.normal_form(p)?, params))
    }

    pub fn bracket(&self, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
        let f = self.rehome(f)?;
        let g = self.rehome(g)?;
        self.normal_form(&self.structure.bracket(&f, &g))
    }

    /// `NF(lhs - rhs)` for expressions in `x1..x6`, `alpha`, `beta`.
    pub fn relation_residue(&self, lhs: &str, rhs: &str) -> Result<LaurentPoly> {
        self.normal_form(&(&self.parse(lhs)? - &self.parse(rhs)?))
    }

    /// `NF(Omega1) = alpha`, `NF(Omega2) = beta` and the four rewrite
    /// identities for `x3^2`, `x4^2`, `x3^2 x4`, `x3 x4^2`.
    pub fn check_casimirs(&self) -> Result<Vec<Check>> {
        let mut out = vec![
            Check { label: "nf(Omega1) = alpha".into(), residue: self.normal_form(&(&self.omega[0] - &self.var(ALPHA)))? },
            Check { label: "nf(Omega2) = beta".into(), residue: self.normal_form(&(&self.omega[1] - &self.var(BETA)))? },
        ];
        for r in &self.identities.relations {
            out.push(Check { label: format!("relation {}", r.label), residue: self.relation_residue(&r.lhs, &r.rhs)? });
        }
        Ok(out)
    }

    /// Jacobi on all generator triples, computed with reduced brackets.
    pub fn check_jacobi(&self) -> Result<Vec<Check>> {
        self.structure
            .triples()
            .into_par_iter()
            .map(|(i, j, k)| {
                let (x, y, z) = (self.var(i), self.var(j), self.var(k));
                let a = self.bracket(&x, &self.bracket(&y, &z)?)?;
                let b = self.bracket(&y, &self.bracket(&z, &x)?)?;
                let c = self.bracket(&z, &self.bracket(&x, &y)?)?;
                Ok(Check { label: format!("jacobi (x{}, x{}, x{})", i + 1, j + 1, k + 1), residue: &(&a + &b) + &c })
            })
            .collect()
    }

    /// The localization identities, each evaluated through the deleting
    /// derivations chain of the ambient algebra and reduced with cleared
    /// denominators.
    pub fn verify_localization(&self) -> Result<Vec<Check>> {
        let alg = lowercase_algebra(&[]);
        let ore = alg.ore.clone().expect("built-in Ore data").with_computed_eta()?;
        let mut chain = run_chain(&alg.structure, &ore, DEFAULT_NILPOTENCY_BOUND)?;

        let at = |l: usize, i: usize| chain.stage(l).expect("level exists").gens[i].clone();
        let mut named: Vec<(String, FractionElement)> = Vec::new();
        for i in 0..6 {
            named.push((format!("t{}", i + 1), at(2, i)));
        }
        named.push(("z1".into(), at(5, 0)));
        named.push(("z2".into(), at(5, 1)));
        named.push(("f1".into(), at(4, 0)));
        for i in 0..4 {
            named.push((format!("x{}6", i + 1), at(6, i)));
        }
        for i in 0..6 {
            named.push((format!("x{}", i + 1), at(7, i)));
        }
        let mut b = VarContext::builder();
        for (name, _) in &named {
            b = b.invertible(name.clone());
        }
        let symbols = b.parameter("alpha").parameter("beta").build()?;
        let field = chain.field_mut();
        let mut images: Vec<FractionElement> = named.into_iter().map(|(_, f)| f).collect();
        images.push(field.var("alpha")?);
        images.push(field.var("beta")?);

        let mut out = Vec::new();
        for r in &self.identities.localization {
            let lhs = field.evaluate(&parse_expr(&r.lhs, &symbols)?, &images)?;
            let rhs = field.evaluate(&parse_expr(&r.rhs, &symbols)?, &images)?;
            let cleared = field.cleared_difference(&lhs, &rhs);
            out.push(Check { label: format!("localization {}", r.label), residue: self.normal_form(&cleared)? });
        }
        Ok(out)
    }

    /// A derivation on `x1..x6` given by a JSON definition.
    pub fn derivation_from_file(&self, file: &QuotientDerivationFile) -> Result<(DerivationSpec, Params)> {
        let params = Params { alpha: Params::parse_value(&file.alpha)?, beta: Params::parse_value(&file.beta)? };
        let mut images = BTreeMap::new();
        for (k, v) in &file.images {
            images.insert(lowercase(k), self.parse(v)?);
        }
        Ok((DerivationSpec::new(&self.ctx, images)?, params))
    }

    /// Well-definedness on both relations, then the derivation identity on
    /// all generator pairs, each modulo the ideal under `params`.
    pub fn check_derivation(&self, d: &DerivationSpec, params: &Params) -> Result<Vec<Check>> {
        let d = self.rehome_derivation(d)?;
        let mut out = Vec::new();
        for (k, name) in ["Omega1", "Omega2"].iter().enumerate() {
            out.push(Check { label: format!("{name} relation"), residue: self.reduce(&d.apply(&self.omega[k]), params)? });
        }
        let pairs = self.structure.pairs();
        let defects: Vec<Result<Check>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let r = self.structure.derivation_defect(&d, i, j);
                Ok(Check { label: format!("pair (x{}, x{})", i + 1, j + 1), residue: self.reduce(&r, params)? })
            })
            .collect();
        for c in defects {
            out.push(c?);
        }
        Ok(out)
    }

    fn rehome_derivation(&self, d: &DerivationSpec) -> Result<DerivationSpec> {
        let src = d.context();
        let mut images = BTreeMap::new();
        for i in src.generators() {
            images.insert(src.name(i).to_string(), self.rehome(d.image(i))?);
        }
        DerivationSpec::new(&self.ctx, images)
    }

    /// Normal-form basis monomials of total degree `<= d` (non-negative exponents).
    pub fn basis_up_to(&self, d: u32) -> Vec<LaurentPoly> {
        let gens: Vec<usize> = (0..6).collect();
        let mut caps = vec![None; self.ctx.len()];
        caps[X3] = Some(1);
        caps[X4] = Some(1);
        exponents_up_to(self.ctx.len(), &gens, d, &caps)
            .into_iter()
            .map(|e| LaurentPoly::monomial(&self.ctx, e, Rational::one()).expect("non-negative"))
            .collect()
    }

    fn require_numeric(params: &Params) -> Result<()> {
        if params.is_numeric() {
            Ok(())
        } else {
            Err(AlgebraError::Input("linear searches need numeric alpha and beta".into()))
        }
    }

    /// Some `x` of degree `<= deg` with `{x, x_i} = D(x_i)` for every
    /// generator, with zero constant term; `None` if no such `x` exists.
    pub fn bounded_inner_search(&self, d: &DerivationSpec, deg: u32, params: &Params) -> Result<Option<LaurentPoly>> {
        Self::require_numeric(params)?;
        let d = self.rehome_derivation(d)?;
        let basis = self.basis_up_to(deg);
        let columns: Vec<Vec<LaurentPoly>> = basis
            .par_iter()
            .map(|m| (0..6).map(|i| self.reduce(&self.structure.bracket(m, &self.var(i)), params)).collect())
            .collect::<Result<_>>()?;
        let mut rows: BTreeMap<(usize, Monomial), (SparseRow, Rational)> = BTreeMap::new();
        for (c, comps) in columns.iter().enumerate() {
            for (i, p) in comps.iter().enumerate() {
                for (m, v) in p.terms() {
                    rows.entry((i, m.clone())).or_insert_with(|| (SparseRow::new(), Rational::zero())).0.insert(c, v.clone());
                }
            }
        }
        for i in 0..6 {
            for (m, v) in self.reduce(d.image(i), params)?.terms() {
                rows.entry((i, m.clone())).or_insert_with(|| (SparseRow::new(), Rational::zero())).1 = v.clone();
            }
        }
        let Some(x) = solve(basis.len(), rows.into_values()) else {
            return Ok(None);
        };
        let mut acc = LaurentPoly::zero(&self.ctx);
        for (m, c) in basis.iter().zip(&x) {
            if m.as_constant().is_none() {
                acc = &acc + &m.scale(c);
            }
        }
        Ok(Some(acc))
    }

    /// Canonical basis of the reduced Casimirs of degree `<= deg`.
    pub fn bounded_centre(&self, deg: u32, params: &Params) -> Result<Vec<LaurentPoly>> {
        Self::require_numeric(params)?;
        let basis = self.basis_up_to(deg);
        Ok(kernel(&basis, |f| {
            (0..6)
                .map(|i| self.reduce(&self.structure.bracket(f, &self.var(i)), params).expect("basis is reducible"))
                .collect()
        }))
    }
}
