//! The Poisson deleting-derivations algorithm.
//!
//! Starting from `X_{i,n+1} = X_i`, each step `j = n, ..., 2` replaces
//!
//! ```text
//! X_{i,j} = sum_k 1/(eta_j^k k!) delta_j^k(X_{i,j+1}) X_{j,j+1}^{-k}   (i < j)
//! X_{i,j} = X_{i,j+1}                                                (i >= j)
//! ```
//!
//! The powers `delta_j^k(X_{i,j+1})` are computed in the ambient fraction
//! field through the bracket identity `{X_{j,j+1}, a} = sigma_j(a) X_{j,j+1}
//! + delta_j(a)`, using that `delta_j` lowers the `sigma_j`-weight by
//! `eta_j`.

use std::sync::Arc;

use crate::context::VarContext;
use crate::error::{AlgebraError, Result};
use crate::fraction::{FractionElement, FractionField};
use crate::ore::PoissonOreData;
use crate::parse::parse_expr;
use crate::poisson::PoissonStructure;
use crate::poly::LaurentPoly;
use crate::rational::Rational;

/// The family `X_{1,j}, ..., X_{n,j}` as ambient fractions.
#[derive(Clone, Debug)]
pub struct ChainStage {
    pub level: usize,
    pub gens: Vec<FractionElement>,
}

/// One PDDA step written in the coordinates of the previous level: the
/// variable `X_l` stands for `X_{l,j+1}`.
#[derive(Clone, Debug)]
pub struct OneStepForms {
    pub level: usize,
    pub forms: Vec<LaurentPoly>,
    /// Number of nonzero series terms per generator.
    pub series_lengths: Vec<usize>,
    /// Every generated `delta_j^k(X_i)` had `sigma_j`-weight `mu_ji - k eta_j`.
    pub weights_shift_by_eta: bool,
}

#[derive(Clone, Debug)]
pub struct Chain {
    field: FractionField,
    /// Stages for levels `n+1` down to 2.
    stages: Vec<ChainStage>,
    etas: Vec<Option<Rational>>,
    symbols: Arc<VarContext>,
}

impl Chain {
    pub fn field(&self) -> &FractionField {
        &self.field
    }

    pub fn field_mut(&mut self) -> &mut FractionField {
        &mut self.field
    }

    pub fn top_level(&self) -> usize {
        self.stages[0].level
    }

    pub fn stage(&self, level: usize) -> Option<&ChainStage> {
        let top = self.top_level();
        if level > top || level < 2 {
            return None;
        }
        self.stages.get(top - level)
    }

    pub fn stages(&self) -> &[ChainStage] {
        &self.stages
    }

    /// The final family `T_i = X_{i,2}`.
    pub fn torus(&self) -> &ChainStage {
        self.stages.last().expect("chain has at least one stage")
    }

    pub fn eta(&self, i: usize) -> Option<&Rational> {
        self.etas[i].as_ref()
    }

    /// Context in which level-`j` expressions are written: the ambient
    /// names with every generator invertible.
    pub fn symbols(&self) -> &Arc<VarContext> {
        &self.symbols
    }

    /// Evaluate an expression over [`Chain::symbols`] with each generator
    /// sent to its level-`level` value and parameters fixed.
    pub fn evaluate_at(&mut self, level: usize, expr: &LaurentPoly) -> Result<FractionElement> {
        let stage = self
            .stage(level)
            .ok_or_else(|| AlgebraError::Input(format!("no chain level {level}")))?
            .clone();
        let ctx = expr.context().clone();
        let mut images = Vec::with_capacity(ctx.len());
        let mut g = 0;
        for v in 0..ctx.len() {
            if ctx.is_parameter(v) {
                images.push(self.field.var(ctx.name(v))?);
            } else {
                let img = stage
                    .gens
                    .get(g)
                    .ok_or_else(|| AlgebraError::Input("expression has too many generators".into()))?;
                images.push(img.clone());
                g += 1;
            }
        }
        self.field.evaluate(expr, &images)
    }

    /// Parse `text` over [`Chain::symbols`] and evaluate it at `level`.
    pub fn evaluate_str(&mut self, level: usize, text: &str) -> Result<FractionElement> {
        let expr = parse_expr(text, &self.symbols.clone())?;
        self.evaluate_at(level, &expr)
    }
}

fn symbol_context(ctx: &Arc<VarContext>) -> Result<Arc<VarContext>> {
    let gens: Vec<&str> = ctx.generators().map(|i| ctx.name(i)).collect();
    ctx.with_inverted(&gens)
}

fn check_shape(ore: &PoissonOreData, s: &PoissonStructure) -> Result<()> {
    let gens: Vec<usize> = s.context().generators().collect();
    if ore.context().names() != s.context().names() || (0..ore.len()).any(|i| ore.generator(i) != gens[i]) {
        return Err(AlgebraError::ContextMismatch);
    }
    Ok(())
}

fn eta_for(ore: &PoissonOreData, j: usize) -> Result<Rational> {
    match ore.eta(j) {
        Some(e) => Ok(e.clone()),
        None => ore.compute_eta(j),
    }
}

/// One step of the algorithm: from level `j+1` to level `j`, where
/// `stage.level = j + 1`. Generator positions are 0-based, levels 1-based.
pub fn pdda_step(
    field: &mut FractionField,
    stage: &ChainStage,
    ore: &PoissonOreData,
    s: &PoissonStructure,
    bound: usize,
) -> Result<ChainStage> {
    check_shape(ore, s)?;
    let level = stage.level - 1;
    let j = level - 1;
    let mut gens = stage.gens.clone();
    if j >= ore.len() || ore.delta_is_zero(j) {
        return Ok(ChainStage { level, gens });
    }
    let eta = eta_for(ore, j)?;
    let x = stage.gens[j].clone();
    let x_inv = field.invert(&x)?;
    for i in 0..j {
        let mut term = stage.gens[i].clone();
        let mut sum = term.clone();
        let mut coeff = Rational::one();
        let mut k = 0usize;
        loop {
            let shift = ore.mu(j, i) - &(&eta * &Rational::integer(k as i64));
            let next = field.sub(&field.bracket(s, &x, &term), &field.mul(&field.scale(&term, &shift), &x));
            if next.is_zero() {
                break;
            }
            k += 1;
            if k > bound {
                return Err(AlgebraError::NotNilpotent { index: level, bound });
            }
            coeff = &coeff / &(&eta * &Rational::integer(k as i64));
            term = next;
            let mut piece = field.scale(&term, &coeff);
            for _ in 0..k {
                piece = field.mul(&piece, &x_inv);
            }
            sum = field.add(&sum, &piece);
        }
        gens[i] = sum;
    }
    Ok(ChainStage { level, gens })
}

/// The step to level `level` in level-`(level+1)` coordinates, computed from
/// the `delta` table alone.
pub fn one_step_forms(ore: &PoissonOreData, level: usize, bound: usize) -> Result<OneStepForms> {
    let ctx = ore.context().clone();
    let sym = symbol_context(&ctx)?;
    let n = ore.len();
    let j = level - 1;
    let lift = |p: &LaurentPoly| p.with_context(&sym).expect("symbols extend the ambient context");
    let mut forms: Vec<LaurentPoly> = (0..n).map(|i| lift(&LaurentPoly::var_at(&ctx, ore.generator(i)))).collect();
    let mut lengths = vec![1; n];
    if j >= n || ore.delta_is_zero(j) {
        return Ok(OneStepForms { level, forms, series_lengths: lengths, weights_shift_by_eta: true });
    }
    let eta = eta_for(ore, j)?;
    let delta = ore.delta_derivation(j);
    let xj_inv = lift(&LaurentPoly::var_at(&ctx, ore.generator(j))).pow(-1)?;
    let weight = |exps: &[i32]| -> Rational {
        (0..j).map(|l| ore.mu(j, l) * &Rational::integer(exps[ore.generator(l)] as i64)).sum()
    };
    let mut homogeneous = true;
    for i in 0..j {
        let mut term = LaurentPoly::var_at(&ctx, ore.generator(i));
        let mut sum = lift(&term);
        let mut coeff = Rational::one();
        let mut k = 0usize;
        loop {
            term = delta.apply(&term);
            if term.is_zero() {
                break;
            }
            k += 1;
            if k > bound {
                return Err(AlgebraError::NotNilpotent { index: level, bound });
            }
            let expected = ore.mu(j, i) - &(&eta * &Rational::integer(k as i64));
            homogeneous &= term.terms().all(|(m, _)| weight(m.exponents()) == expected);
            coeff = &coeff / &(&eta * &Rational::integer(k as i64));
            sum = &sum + &(&lift(&term).scale(&coeff) * &xj_inv.pow(k as i32)?);
        }
        forms[i] = sum;
        lengths[i] = k + 1;
    }
    Ok(OneStepForms { level, forms, series_lengths: lengths, weights_shift_by_eta: homogeneous })
}

/// All stages from `X_i` down to `T_i = X_{i,2}`.
pub fn run_chain(s: &PoissonStructure, ore: &PoissonOreData, bound: usize) -> Result<Chain> {
    check_shape(ore, s)?;
    let ctx = s.context().clone();
    let mut field = FractionField::new(&ctx);
    let n = ore.len();
    let top = ChainStage {
        level: n + 1,
        gens: (0..n).map(|i| field.from_poly(&LaurentPoly::var_at(&ctx, ore.generator(i)))).collect::<Result<_>>()?,
    };
    let mut stages = vec![top];
    for _ in 2..=n {
        let next = pdda_step(&mut field, stages.last().expect("nonempty"), ore, s, bound)?;
        stages.push(next);
    }
    let etas = (0..n).map(|j| if ore.delta_is_zero(j) { Ok(None) } else { eta_for(ore, j).map(Some) }).collect::<Result<_>>()?;
    Ok(Chain { field, stages, etas, symbols: symbol_context(&ctx)? })
}

/// A failing pair of the log-canonical check, with its cleared residue.
#[derive(Clone, Debug)]
pub struct ToralViolation {
    pub level: usize,
    pub pair: (usize, usize),
    pub residue: LaurentPoly,
}

/// `{X_{i,j}, X_{l,j}} - c_il X_{i,j} X_{l,j}` cleared of denominators.
fn log_canonical_residue(
    field: &FractionField,
    s: &PoissonStructure,
    gens: &[FractionElement],
    i: usize,
    l: usize,
    c: &Rational,
) -> LaurentPoly {
    let lhs = field.bracket(s, &gens[i], &gens[l]);
    let rhs = field.scale(&field.mul(&gens[i], &gens[l]), c);
    field.cleared_difference(&lhs, &rhs)
}

/// Check `{T_i, T_j} = m[i][j] T_i T_j` for all `i < j` on a stage.
pub fn verify_target_torus(
    field: &FractionField,
    stage: &ChainStage,
    m: &[Vec<Rational>],
    s: &PoissonStructure,
) -> Vec<(usize, usize, LaurentPoly)> {
    let n = stage.gens.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j, log_canonical_residue(field, s, &stage.gens, i, j, &m[i][j])));
        }
    }
    out
}

/// At every level `j`, the generators `X_{i,j}` with `i, l >= j` must
/// satisfy `{X_{i,j}, X_{l,j}} = mu_il X_{i,j} X_{l,j}`.
pub fn check_toral_contract(chain: &Chain, ore: &PoissonOreData, s: &PoissonStructure) -> Option<ToralViolation> {
    for stage in chain.stages() {
        let first = stage.level - 1;
        for i in first..ore.len() {
            for l in (i + 1)..ore.len() {
                let r = log_canonical_residue(chain.field(), s, &stage.gens, i, l, ore.mu(i, l));
                if !r.is_zero() {
                    return Some(ToralViolation { level: stage.level, pair: (i, l), residue: r });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    // {y, x} = -xy - 1 is K[x][y; sigma, delta] with sigma(x) = -x and
    // delta(x) = -1. Then (delta sigma - sigma delta)(x) = 1 = -delta(x), so
    // eta = -1 and X_{1,2} = x + delta(x) y^-1 / eta = x + y^-1.
    #[test]
    fn two_variable_chain() {
        let ctx = VarContext::polynomial(&["x", "y"]).unwrap();
        let br = parse_expr("-x*y - 1", &ctx).unwrap();
        let s = PoissonStructure::new(&ctx, vec![(1, 0, br)]).unwrap();
        let d = parse_expr("-1", &ctx).unwrap();
        let ore = PoissonOreData::new(&ctx, vec![(1, 0, Rational::integer(-1))], vec![(1, 0, d)]).unwrap();
        assert_eq!(ore.compute_eta(1).unwrap(), Rational::integer(-1));
        let mut chain = run_chain(&s, &ore, 16).unwrap();
        let want = chain.evaluate_str(3, "x + y^-1").unwrap();
        assert!(chain.field().equal(&chain.torus().gens[0], &want));
        let m = ore.mu_matrix().to_vec();
        assert!(verify_target_torus(chain.field(), chain.torus(), &m, &s).iter().all(|(_, _, r)| r.is_zero()));
        let forms = one_step_forms(&ore, 2, 16).unwrap();
        assert_eq!(forms.forms[0].to_string(), "y^-1 + x");
        assert!(forms.weights_shift_by_eta);
    }

    #[test]
    fn toral_stage_is_fixed() {
        let ctx = VarContext::polynomial(&["x", "y"]).unwrap();
        let m = vec![vec![Rational::zero(), Rational::integer(2)], vec![Rational::integer(-2), Rational::zero()]];
        let s = PoissonStructure::log_canonical(&ctx, &m).unwrap();
        let ore = PoissonOreData::new(&ctx, vec![(1, 0, Rational::integer(-2))], vec![]).unwrap();
        let chain = run_chain(&s, &ore, 16).unwrap();
        let mut field = chain.field().clone();
        let again = pdda_step(&mut field, chain.torus(), &ore, &s, 16).unwrap();
        assert_eq!(again.gens, chain.torus().gens);
    }
}
