//! Fractions with denominators drawn from a registry of designated nonzero
//! elements.
//!
//! An element is `num / prod_k D_k^{e_k}` with `num` a polynomial over the
//! ambient context and `D_k` registered in a [`FractionField`]. The ambient
//! rings used here are domains, so equality is cross-multiplication and no
//! general polynomial GCD is needed.

use std::fmt;
use std::sync::Arc;

use crate::context::VarContext;
use crate::error::{AlgebraError, Result};
use crate::poisson::PoissonStructure;
use crate::poly::LaurentPoly;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionElement {
    num: LaurentPoly,
    /// Exponents of the registered denominators; missing trailing entries
    /// are zero.
    den: Vec<u32>,
}

impl FractionElement {
    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator_exponents(&self) -> &[u32] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn den_at(&self, k: usize) -> u32 {
        self.den.get(k).copied().unwrap_or(0)
    }

    /// Apply `f` to the numerator, for instance a normal-form reduction that
    /// commutes with multiplication by the denominators.
    pub fn map_numerator(&self, f: impl FnOnce(&LaurentPoly) -> LaurentPoly) -> Self {
        FractionElement { num: f(&self.num), den: self.den.clone() }
    }
}

/// Registry of designated denominators over a fixed ambient context.
#[derive(Clone, Debug)]
pub struct FractionField {
    ctx: Arc<VarContext>,
    denoms: Vec<LaurentPoly>,
}

impl FractionField {
    pub fn new(ctx: &Arc<VarContext>) -> Self {
        FractionField { ctx: ctx.clone(), denoms: Vec::new() }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn denominators(&self) -> &[LaurentPoly] {
        &self.denoms
    }

    /// Register `p` as a designated nonzero element and return its index.
    /// Scalar multiples of an existing entry reuse it.
    pub fn register(&mut self, p: &LaurentPoly) -> Result<(usize, Rational)> {
        let p = p.with_context(&self.ctx)?;
        if p.is_zero() {
            return Err(AlgebraError::NoInverse);
        }
        for (k, d) in self.denoms.iter().enumerate() {
            if let Some(q) = p.try_div_exact(d).and_then(|q| q.as_constant()) {
                return Ok((k, q));
            }
        }
        self.denoms.push(p);
        Ok((self.denoms.len() - 1, Rational::one()))
    }

    pub fn from_poly(&self, p: &LaurentPoly) -> Result<FractionElement> {
        Ok(FractionElement { num: p.with_context(&self.ctx)?, den: Vec::new() })
    }

    pub fn constant(&self, c: Rational) -> FractionElement {
        FractionElement { num: LaurentPoly::constant(&self.ctx, c), den: Vec::new() }
    }

    pub fn var(&self, name: &str) -> Result<FractionElement> {
        self.from_poly(&LaurentPoly::var(&self.ctx, name)?)
    }

    /// `prod_k D_k^{e_k}` as a polynomial.
    pub fn expand(&self, den: &[u32]) -> LaurentPoly {
        let mut acc = LaurentPoly::one(&self.ctx);
        for (k, &e) in den.iter().enumerate() {
            if e > 0 {
                acc = &acc * &self.denoms[k].pow(e as i32).expect("non-negative power");
            }
        }
        acc
    }

    fn width(&self, a: &FractionElement, b: &FractionElement) -> usize {
        a.den.len().max(b.den.len())
    }

    /// Cancel registered factors that divide the numerator exactly.
    pub fn normalize(&self, f: FractionElement) -> FractionElement {
        let FractionElement { mut num, mut den } = f;
        if num.is_zero() {
            return FractionElement { num, den: Vec::new() };
        }
        for k in 0..den.len() {
            while den[k] > 0 {
                match num.try_div_exact(&self.denoms[k]) {
                    Some(q) => {
                        num = q;
                        den[k] -= 1;
                    }
                    None => break,
                }
            }
        }
        while den.last() == Some(&0) {
            den.pop();
        }
        FractionElement { num, den }
    }

    pub fn add(&self, a: &FractionElement, b: &FractionElement) -> FractionElement {
        let w = self.width(a, b);
        let mut den = vec![0; w];
        let mut ea = vec![0; w];
        let mut eb = vec![0; w];
        for k in 0..w {
            den[k] = a.den_at(k).max(b.den_at(k));
            ea[k] = den[k] - a.den_at(k);
            eb[k] = den[k] - b.den_at(k);
        }
        let num = &(&a.num * &self.expand(&ea)) + &(&b.num * &self.expand(&eb));
        self.normalize(FractionElement { num, den })
    }

    pub fn neg(&self, a: &FractionElement) -> FractionElement {
        FractionElement { num: -&a.num, den: a.den.clone() }
    }

    pub fn sub(&self, a: &FractionElement, b: &FractionElement) -> FractionElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FractionElement, b: &FractionElement) -> FractionElement {
        let w = self.width(a, b);
        let den = (0..w).map(|k| a.den_at(k) + b.den_at(k)).collect();
        self.normalize(FractionElement { num: &a.num * &b.num, den })
    }

    pub fn scale(&self, a: &FractionElement, c: &Rational) -> FractionElement {
        if c.is_zero() {
            return self.constant(Rational::zero());
        }
        FractionElement { num: a.num.scale(c), den: a.den.clone() }
    }

    /// Multiplicative inverse. The numerator (after removing registered
    /// factors) is registered as a new designated denominator.
    pub fn invert(&mut self, a: &FractionElement) -> Result<FractionElement> {
        if a.is_zero() {
            return Err(AlgebraError::NoInverse);
        }
        let mut rest = a.num.clone();
        let mut factors = vec![0u32; self.denoms.len()];
        for (k, d) in self.denoms.iter().enumerate() {
            while let Some(q) = rest.try_div_exact(d) {
                rest = q;
                factors[k] += 1;
            }
        }
        let (scalar, extra) = match rest.as_constant() {
            Some(c) => (c, None),
            None => {
                let (k, c) = self.register(&rest)?;
                (c, Some(k))
            }
        };
        if factors.len() < self.denoms.len() {
            factors.resize(self.denoms.len(), 0);
        }
        if let Some(k) = extra {
            factors[k] += 1;
        }
        let num = self.expand(&a.den).scale(&scalar.recip()?);
        Ok(self.normalize(FractionElement { num, den: factors }))
    }

    pub fn pow(&mut self, a: &FractionElement, k: i32) -> Result<FractionElement> {
        let base = if k < 0 { self.invert(a)? } else { a.clone() };
        let mut acc = self.constant(Rational::one());
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    /// Equality by cross-multiplication.
    pub fn equal(&self, a: &FractionElement, b: &FractionElement) -> bool {
        self.cleared_difference(a, b).is_zero()
    }

    /// Numerator of `a - b` over the common denominator.
    pub fn cleared_difference(&self, a: &FractionElement, b: &FractionElement) -> LaurentPoly {
        let w = self.width(a, b);
        let mut ea = vec![0; w];
        let mut eb = vec![0; w];
        for k in 0..w {
            let m = a.den_at(k).max(b.den_at(k));
            ea[k] = m - a.den_at(k);
            eb[k] = m - b.den_at(k);
        }
        &(&a.num * &self.expand(&ea)) - &(&b.num * &self.expand(&eb))
    }

    /// `{a, g}` for a fraction `a` and a polynomial `g`:
    /// `{n, g}/d - sum_k e_k n {D_k, g} / (d D_k)`.
    fn bracket_with_poly(&self, s: &PoissonStructure, a: &FractionElement, g: &LaurentPoly) -> FractionElement {
        let mut out = FractionElement { num: s.bracket(&a.num, g), den: a.den.clone() };
        for (k, &e) in a.den.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let dg = s.bracket(&self.denoms[k], g);
            if dg.is_zero() {
                continue;
            }
            let mut den = a.den.clone();
            den[k] += 1;
            let num = (&a.num * &dg).scale(&-Rational::integer(e as i64));
            out = self.add(&out, &FractionElement { num, den });
        }
        out
    }

    /// `{a, b}` by the Leibniz rule through the denominators of `b`.
    pub fn bracket(&self, s: &PoissonStructure, a: &FractionElement, b: &FractionElement) -> FractionElement {
        let first = self.bracket_with_poly(s, a, &b.num);
        let mut out = self.mul(&first, &FractionElement { num: LaurentPoly::one(&self.ctx), den: b.den.clone() });
        for (l, &e) in b.den.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let ad = self.bracket_with_poly(s, a, &self.denoms[l]);
            if ad.is_zero() {
                continue;
            }
            let mut den = b.den.clone();
            den[l] += 1;
            let factor = FractionElement { num: b.num.scale(&-Rational::integer(e as i64)), den };
            out = self.add(&out, &self.mul(&ad, &factor));
        }
        out
    }

    /// Evaluate `expr` (over its own context) with variable `i` sent to
    /// `images[i]`. Negative exponents invert the image.
    pub fn evaluate(&mut self, expr: &LaurentPoly, images: &[FractionElement]) -> Result<FractionElement> {
        let ctx = expr.context().clone();
        if images.len() != ctx.len() {
            return Err(AlgebraError::Input(format!("{} images for {} variables", images.len(), ctx.len())));
        }
        let mut inverses: Vec<Option<FractionElement>> = vec![None; ctx.len()];
        let mut acc = self.constant(Rational::zero());
        for (m, c) in expr.terms() {
            let mut term = self.constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if e < 0 {
                    if inverses[i].is_none() {
                        inverses[i] = Some(self.invert(&images[i])?);
                    }
                    inverses[i].clone().expect("just set")
                } else {
                    images[i].clone()
                };
                for _ in 0..e.unsigned_abs() {
                    term = self.mul(&term, &base);
                }
            }
            acc = self.add(&acc, &term);
        }
        Ok(acc)
    }

    pub fn display<'a>(&'a self, a: &'a FractionElement) -> FractionDisplay<'a> {
        FractionDisplay { field: self, elem: a }
    }
}

/// Grammar-valid rendering `(num)*(D_1)^-e_1*...`.
pub struct FractionDisplay<'a> {
    field: &'a FractionField,
    elem: &'a FractionElement,
}

impl fmt::Display for FractionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.elem;
        if a.den.iter().all(|&e| e == 0) {
            return write!(f, "{}", a.num);
        }
        write!(f, "({})", a.num)?;
        for (k, &e) in a.den.iter().enumerate() {
            if e > 0 {
                write!(f, "*({})^-{e}", self.field.denoms[k])?;
            }
        }
        Ok(())
    }
}
